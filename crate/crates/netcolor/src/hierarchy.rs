//! Construction of the nested center hierarchy: separated center sets,
//! plus/minus signs, Voronoi-style clusters with deterministic tie-breaking,
//! quotient metrics between centers, and per-cluster BFS orderings.

use crate::constants::{eta_bar0, eta_general, Pow2};
use crate::graph::{Dist, Graph, MetricView, Vertex, INF};
use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HierarchyError {
    #[error("level {0}: center quotient graph is disconnected")]
    QuotientDisconnected(usize),
    #[error("level {0}: basepoint {1} was not retained in the center set")]
    BasepointDropped(usize, Vertex),
    #[error("level {0}: radius/scale overrides missing")]
    MissingParams(usize),
    #[error("level {0}: center set is empty")]
    NoCenters(usize),
    #[error(
        "level {0}: cluster of center {1} is internally disconnected (stranded vertices {2:?})"
    )]
    StrandedCluster(usize, Vertex, Vec<Vertex>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Minus,
    Plus,
}

/// How the heavy/light split of candidate centers is decided. The growth
/// formula only ever fires on graphs far larger than a workbench can hold,
/// so forced policies exist for exercising both branches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplitPolicy {
    Formula,
    AllMinus,
    AllPlus,
}

/// BFS ordering of one open cluster, sphere by sphere from its center.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClusterOrdering {
    /// cluster members in order (center first)
    pub order: Vec<Vertex>,
    /// rank of each member, parallel to `order`'s inverse; keyed by vertex
    pub rank: BTreeMap<Vertex, u32>,
    /// parent (the least-ranked neighbor in the previous sphere); center has none
    pub parent: BTreeMap<Vertex, Vertex>,
    /// children per vertex, in rank order
    pub children: BTreeMap<Vertex, Vec<Vertex>>,
    /// sphere number of each member
    pub depth: BTreeMap<Vertex, Dist>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Level {
    pub n: usize,
    pub r: u32,
    pub s: u32,
    /// candidate centers before the heavy/light refinement
    pub candidates: Vec<Vertex>,
    /// the centers of this level (subset of the previous level's members)
    pub centers: Vec<Vertex>,
    pub sign: BTreeMap<Vertex, Sign>,
    /// open clusters: a partition of the previous level's members
    pub cluster: BTreeMap<Vertex, Vec<Vertex>>,
    /// closed clusters: all members whose distance to this center attains
    /// the distance to the same-sign center set (overlapping at ties)
    pub closed_cluster: BTreeMap<Vertex, Vec<Vertex>>,
    /// owner of each previous-level member under the open partition
    pub assigned: BTreeMap<Vertex, Vertex>,
    /// heavy/light zone of each previous-level member
    pub zone: BTreeMap<Vertex, Sign>,
    /// quotient edges between centers (closed clusters within distance 1)
    pub quotient_edges: Vec<(Vertex, Vertex)>,
    /// metric on the centers induced by the quotient edges; rebuilt from
    /// `centers` and `quotient_edges` after deserialization
    #[serde(skip)]
    pub metric: MetricView,
    pub orderings: BTreeMap<Vertex, ClusterOrdering>,
    pub split_policy: SplitPolicy,
}

impl Level {
    /// Reconstruct the quotient metric after deserialization.
    pub fn rebuild_metric(&mut self, universe: u32) {
        self.metric = MetricView::induced(universe, &self.centers, &self.quotient_edges)
            .expect("stored quotient edges no longer connect the centers");
    }

    pub fn r_minus(&self) -> Dist {
        self.r
    }

    pub fn r_plus(&self) -> Dist {
        self.r * self.s
    }

    pub fn radius(&self, x: Vertex) -> Dist {
        match self.sign[&x] {
            Sign::Minus => self.r_minus(),
            Sign::Plus => self.r_plus(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Hierarchy {
    pub r: Vec<u32>,
    pub s: Vec<u32>,
    pub levels: Vec<Level>,
    pub warnings: Vec<String>,
}

impl Hierarchy {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Members of level n (n as i64; -1 means every ambient vertex).
    pub fn members(&self, g: &Graph, n: i64) -> Vec<Vertex> {
        if n < 0 {
            (0..g.vertex_count()).collect()
        } else {
            self.levels[n as usize].centers.clone()
        }
    }

    /// The metric of level n (-1 means the ambient graph metric).
    pub fn metric<'a>(&'a self, g: &Graph, n: i64) -> MetricView {
        if n < 0 {
            g.view()
        } else {
            self.levels[n as usize].metric.clone()
        }
    }

    /// Open cluster of x at level n, pushed all the way down to level m < n
    /// by composing the open partitions.
    pub fn composed_cluster(&self, n: usize, x: Vertex, m: i64) -> Vec<Vertex> {
        let mut cur = vec![x];
        let mut lvl = n as i64;
        while lvl > m {
            let level = &self.levels[lvl as usize];
            let mut next = Vec::new();
            for &c in &cur {
                if lvl == m + 1 {
                    // expanding the last step: members of the cluster itself
                    next.extend(level.cluster[&c].iter().copied());
                } else {
                    next.extend(level.cluster[&c].iter().copied());
                }
            }
            cur = next;
            cur.sort_unstable();
            cur.dedup();
            lvl -= 1;
        }
        cur
    }

    /// Max degree of the level-n metric (-1: ambient bound, -2: also ambient).
    fn level_degree(&self, g: &Graph, n: i64) -> u32 {
        if n < 0 {
            g.degree_bound()
        } else {
            self.levels[n as usize].metric.max_degree().max(1)
        }
    }
}

/// Exact level eta: at level 0 the closed form with the ambient degree
/// bound; at level n >= 1 the shift and divisor use the actual max degrees
/// of the two underlying level metrics.
pub fn eta_level(g: &Graph, hier: &Hierarchy, n: usize, a: u64) -> Pow2 {
    if n == 0 {
        eta_bar0(g.degree_bound(), &BigInt::from(a))
    } else {
        let d1 = hier.level_degree(g, n as i64 - 1);
        let d2 = hier.level_degree(g, n as i64 - 2);
        let (rp, sp) = (hier.r[n - 1] as u64, hier.s[n - 1] as u64);
        let exp = rp * rp * sp;
        let shift = BigInt::from(d1).pow(11);
        let divisor = BigInt::from(d2.max(2)).pow(exp.min(1_000_000) as u32);
        eta_general(&BigInt::from(a), &shift, &divisor)
    }
}

/// The growth test deciding whether a candidate center is "heavy" (plus):
/// eta_n(|D_{n-1}(y, r+)|) >= (6 + |D_{n-1}(y, r+ s)|)^2.
fn heavy(
    g: &Graph,
    hier: &Hierarchy,
    n: usize,
    prev_metric: &MetricView,
    y: Vertex,
    r: u32,
    s: u32,
) -> bool {
    let r_plus = r * s;
    let d_plus = prev_metric.disk(y, r_plus).len() as u64;
    let d_plus_s = prev_metric.disk(y, r_plus * s).len() as u64;
    let rhs = BigUint::from(6u64 + d_plus_s).pow(2);
    eta_level(g, hier, n, d_plus).ge_uint(&rhs)
}

fn finite(d: Dist) -> Option<i64> {
    if d == INF {
        None
    } else {
        Some(d as i64)
    }
}

/// Build one level on top of `prev_members` with metric `prev_metric`.
fn build_level(
    g: &Graph,
    hier: &Hierarchy,
    n: usize,
    prev_members: &[Vertex],
    prev_metric: &MetricView,
    policy: SplitPolicy,
    order_key: &BTreeMap<Vertex, (Dist, Vertex)>,
) -> Result<Level, HierarchyError> {
    let r = hier.r[n];
    let s = hier.s[n];
    let v = g.vertex_count();

    // priority: ambient distance to the basepoint, then index
    let mut priority: Vec<Vertex> = prev_members.to_vec();
    priority.sort_unstable_by_key(|&u| order_key[&u]);

    // step 1: maximal 2r-separated candidate set, basepoint first
    let candidates = prev_metric.maximal_separated_set(2 * r, &priority);
    if candidates.is_empty() {
        return Err(HierarchyError::NoCenters(n));
    }

    // step 2: heavy/light split
    let is_heavy = |y: Vertex| -> bool {
        match policy {
            SplitPolicy::AllMinus => false,
            SplitPolicy::AllPlus => true,
            SplitPolicy::Formula => heavy(g, hier, n, prev_metric, y, r, s),
        }
    };
    let (mut y_plus, mut y_minus) = (Vec::new(), Vec::new());
    for &y in &candidates {
        if is_heavy(y) {
            y_plus.push(y);
        } else {
            y_minus.push(y);
        }
    }

    // step 3: heavy centers, re-thinned to pairwise distance > 2 r s
    y_plus.sort_unstable_by_key(|&u| order_key[&u]);
    let mut x_plus: Vec<Vertex> = Vec::new();
    for &y in &y_plus {
        let ok = x_plus
            .iter()
            .all(|&x| prev_metric.dist(y, x) > 2 * r * s);
        if ok {
            x_plus.push(y);
        }
    }

    // step 4: light centers keep their distance from the heavy ones
    let dist_to_plus = if x_plus.is_empty() {
        vec![INF; v as usize]
    } else {
        prev_metric.multi_source_distances(&x_plus)
    };
    let x_minus: Vec<Vertex> = y_minus
        .iter()
        .copied()
        .filter(|&y| dist_to_plus[y as usize] == INF || dist_to_plus[y as usize] > r * (2 * s + 1))
        .collect();

    let mut centers: Vec<Vertex> = x_plus.iter().chain(x_minus.iter()).copied().collect();
    centers.sort_unstable();
    if centers.is_empty() {
        return Err(HierarchyError::NoCenters(n));
    }
    if !centers.contains(&g.basepoint()) && n == 0 {
        return Err(HierarchyError::BasepointDropped(n, g.basepoint()));
    }
    let mut sign = BTreeMap::new();
    for &x in &x_plus {
        sign.insert(x, Sign::Plus);
    }
    for &x in &x_minus {
        sign.insert(x, Sign::Minus);
    }

    // step 5: heavy/light zones over all previous-level members
    let dist_to_minus = if x_minus.is_empty() {
        vec![INF; v as usize]
    } else {
        prev_metric.multi_source_distances(&x_minus)
    };
    let zone_of = |z: Vertex| -> Sign {
        match (finite(dist_to_plus[z as usize]), finite(dist_to_minus[z as usize])) {
            (None, _) => Sign::Minus,
            (Some(_), None) => Sign::Plus,
            (Some(dp), Some(dm)) => {
                if dp - 2 * (r as i64) * (s as i64) <= dm - r as i64 {
                    Sign::Plus
                } else {
                    Sign::Minus
                }
            }
        }
    };

    // step 6: closed clusters (nearest same-sign centers) and the open
    // partition (least such center in the basepoint order)
    let mut closed_cluster: BTreeMap<Vertex, Vec<Vertex>> =
        centers.iter().map(|&x| (x, Vec::new())).collect();
    let mut cluster: BTreeMap<Vertex, Vec<Vertex>> =
        centers.iter().map(|&x| (x, Vec::new())).collect();
    let mut assigned: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    let mut zone_map: BTreeMap<Vertex, Sign> = BTreeMap::new();
    // distance fields per center, only where needed: reuse per-center BFS
    let center_dist: BTreeMap<Vertex, Vec<Dist>> = centers
        .iter()
        .map(|&x| (x, prev_metric.bfs_distances(x)))
        .collect();
    for &z in prev_members {
        let zone = zone_of(z);
        zone_map.insert(z, zone);
        let pool: &[Vertex] = match zone {
            Sign::Plus => &x_plus,
            Sign::Minus => &x_minus,
        };
        let best = pool
            .iter()
            .map(|&x| center_dist[&x][z as usize])
            .min()
            .unwrap_or(INF);
        if best == INF {
            // no same-zone center can reach z; impossible on a connected
            // level unless the pool is empty, which zone_of prevents
            continue;
        }
        let mut nearest: Vec<Vertex> = pool
            .iter()
            .copied()
            .filter(|&x| center_dist[&x][z as usize] == best)
            .collect();
        for &x in &nearest {
            closed_cluster.get_mut(&x).unwrap().push(z);
        }
        nearest.sort_unstable_by_key(|&x| order_key[&x]);
        let owner = nearest[0];
        cluster.get_mut(&owner).unwrap().push(z);
        assigned.insert(z, owner);
    }

    // step 7: quotient edges between centers whose closed clusters come
    // within distance one of each other
    let mut owner_sets: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for (&x, members) in &closed_cluster {
        for &z in members {
            owner_sets.entry(z).or_default().push(x);
        }
    }
    let mut qedges: Vec<(Vertex, Vertex)> = Vec::new();
    let push_edge = |a: Vertex, b: Vertex, qedges: &mut Vec<(Vertex, Vertex)>| {
        if a != b {
            let e = (a.min(b), a.max(b));
            qedges.push(e);
        }
    };
    for &z in prev_members {
        let empty = Vec::new();
        let here = owner_sets.get(&z).unwrap_or(&empty);
        // shared members (ties) connect their owners at distance zero
        for i in 0..here.len() {
            for j in i + 1..here.len() {
                push_edge(here[i], here[j], &mut qedges);
            }
        }
        for w in prev_metric.neighbors_of(z) {
            if w < z {
                continue;
            }
            let there = owner_sets.get(&w).unwrap_or(&empty);
            for &a in here {
                for &b in there {
                    push_edge(a, b, &mut qedges);
                }
            }
        }
    }
    qedges.sort_unstable();
    qedges.dedup();
    let metric = MetricView::induced(v, &centers, &qedges)
        .map_err(|_| HierarchyError::QuotientDisconnected(n))?;

    // step 8: per-cluster BFS orderings
    let mut orderings = BTreeMap::new();
    for &x in &centers {
        let members = &cluster[&x];
        let ord = cluster_ordering(prev_metric, x, members)
            .map_err(|stranded| HierarchyError::StrandedCluster(n, x, stranded))?;
        orderings.insert(x, ord);
    }

    Ok(Level {
        n,
        r,
        s,
        candidates,
        centers,
        sign,
        cluster,
        closed_cluster,
        assigned,
        zone: zone_map,
        quotient_edges: qedges,
        metric,
        orderings,
        split_policy: policy,
    })
}

/// Sphere-by-sphere BFS order of one open cluster. Within sphere k vertices
/// are keyed by (rank of their least-ranked neighbor in sphere k-1, index);
/// that least-ranked neighbor becomes the parent.
pub fn cluster_ordering(
    prev_metric: &MetricView,
    center: Vertex,
    members: &[Vertex],
) -> Result<ClusterOrdering, Vec<Vertex>> {
    use std::collections::BTreeSet;
    let member_set: BTreeSet<Vertex> = members.iter().copied().collect();
    let mut rank: BTreeMap<Vertex, u32> = BTreeMap::new();
    let mut order: Vec<Vertex> = vec![center];
    let mut depth: BTreeMap<Vertex, Dist> = BTreeMap::new();
    let mut parent: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    rank.insert(center, 0);
    depth.insert(center, 0);
    let mut frontier = vec![center];
    let mut k = 0;
    while !frontier.is_empty() {
        k += 1;
        // gather next sphere with its key
        let mut next: BTreeMap<Vertex, (u32, Vertex)> = BTreeMap::new();
        for &u in &frontier {
            for w in prev_metric.neighbors_of(u) {
                if !member_set.contains(&w) || rank.contains_key(&w) {
                    continue;
                }
                let key = (rank[&u], u);
                match next.get(&w) {
                    Some(&old) if old <= key => {}
                    _ => {
                        next.insert(w, key);
                    }
                }
            }
        }
        let mut sphere: Vec<Vertex> = next.keys().copied().collect();
        sphere.sort_unstable_by_key(|w| (next[w].0, *w));
        for &w in &sphere {
            rank.insert(w, order.len() as u32);
            order.push(w);
            depth.insert(w, k);
            parent.insert(w, next[&w].1);
        }
        frontier = sphere;
    }
    if order.len() != members.len() {
        let stranded: Vec<Vertex> =
            members.iter().copied().filter(|m| !rank.contains_key(m)).collect();
        return Err(stranded);
    }
    let mut children: BTreeMap<Vertex, Vec<Vertex>> =
        members.iter().map(|&m| (m, Vec::new())).collect();
    for &u in &order {
        if let Some(&p) = parent.get(&u) {
            children.get_mut(&p).unwrap().push(u);
        }
    }
    for l in children.values_mut() {
        l.sort_unstable_by_key(|u| rank[u]);
    }
    Ok(ClusterOrdering { order, rank, parent, children, depth })
}

/// Build `depth` levels of hierarchy over `g` with per-level radii/scales.
pub fn build_hierarchy(
    g: &Graph,
    r: &[u32],
    s: &[u32],
    policy: SplitPolicy,
) -> Result<Hierarchy, HierarchyError> {
    assert_eq!(r.len(), s.len());
    let mut hier = Hierarchy {
        r: r.to_vec(),
        s: s.to_vec(),
        levels: Vec::new(),
        warnings: Vec::new(),
    };
    let base_dist = g.view().bfs_distances(g.basepoint());
    let order_key: BTreeMap<Vertex, (Dist, Vertex)> =
        (0..g.vertex_count()).map(|u| (u, (base_dist[u as usize], u))).collect();
    for n in 0..r.len() {
        let (prev_members, prev_metric): (Vec<Vertex>, MetricView) = if n == 0 {
            ((0..g.vertex_count()).collect(), g.view())
        } else {
            (
                hier.levels[n - 1].centers.clone(),
                hier.levels[n - 1].metric.clone(),
            )
        };
        let level = build_level(g, &hier, n, &prev_members, &prev_metric, policy, &order_key)?;
        if level.centers.len() == 1 {
            hier.warnings.push(format!(
                "level {n} degenerated to a single center; higher levels are trivial"
            ));
        }
        hier.levels.push(level);
    }
    Ok(hier)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn cycle(n: u32) -> Graph {
        let edges: Vec<(Vertex, Vertex)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges, 0).unwrap()
    }

    #[test]
    fn cycle20_level0_frozen() {
        // hand-computed greedy on the 20-cycle with r=2, s=3, all-minus:
        // candidates every 4th vertex; Voronoi partition with ties resolved
        // toward the center closest to the basepoint
        let g = cycle(20);
        let h = build_hierarchy(&g, &[2], &[3], SplitPolicy::AllMinus).unwrap();
        let lv = &h.levels[0];
        assert_eq!(lv.centers, vec![0, 4, 8, 12, 16]);
        assert!(lv.sign.values().all(|&s| s == Sign::Minus));
        assert_eq!(lv.cluster[&0], vec![0, 1, 2, 18, 19]);
        assert_eq!(lv.cluster[&4], vec![3, 4, 5, 6]);
        assert_eq!(lv.cluster[&8], vec![7, 8, 9, 10]);
        assert_eq!(lv.cluster[&12], vec![11, 12, 13]);
        assert_eq!(lv.cluster[&16], vec![14, 15, 16, 17]);
        // the open clusters partition the cycle
        let total: usize = lv.cluster.values().map(|c| c.len()).sum();
        assert_eq!(total, 20);
        // closed clusters overlap exactly at the two-sided ties
        assert!(lv.closed_cluster[&0].contains(&2));
        assert!(lv.closed_cluster[&4].contains(&2));
        // quotient is a 5-cycle
        assert_eq!(lv.quotient_edges.len(), 5);
        assert_eq!(lv.metric.dist(0, 8), 2);
    }

    #[test]
    fn cycle20_two_levels() {
        let g = cycle(20);
        let h = build_hierarchy(&g, &[2, 1], &[3, 3], SplitPolicy::AllMinus).unwrap();
        let lv1 = &h.levels[1];
        // level 1 thins the 5-cycle of centers with separation 2
        assert!(lv1.centers.contains(&0));
        assert!(h.levels[1].metric.len() == lv1.centers.len());
        // composed clusters cover the whole cycle
        let mut all: Vec<Vertex> = lv1
            .centers
            .iter()
            .flat_map(|&x| h.composed_cluster(1, x, -1))
            .collect();
        all.sort_unstable();
        assert_eq!(all, (0..20).collect::<Vec<_>>());
    }

    #[test]
    fn ordering_structure() {
        let g = cycle(20);
        let h = build_hierarchy(&g, &[2], &[3], SplitPolicy::AllMinus).unwrap();
        let ord = &h.levels[0].orderings[&0];
        assert_eq!(ord.order[0], 0);
        // sphere 1 of C(0) = {1, 19}, ranked by index
        assert_eq!(&ord.order[1..3], &[1, 19]);
        assert_eq!(ord.parent[&1], 0);
        assert_eq!(ord.parent[&2], 1);
        assert_eq!(ord.children[&0], vec![1, 19]);
        assert_eq!(ord.depth[&2], 2);
        // every non-center has a parent one sphere down with smaller rank
        for (&u, &p) in &ord.parent {
            assert_eq!(ord.depth[&u], ord.depth[&p] + 1);
            assert!(ord.rank[&p] < ord.rank[&u]);
        }
    }

    #[test]
    fn all_plus_policy() {
        let g = cycle(20);
        let h = build_hierarchy(&g, &[1], &[3], SplitPolicy::AllPlus).unwrap();
        let lv = &h.levels[0];
        assert!(lv.sign.values().all(|&s| s == Sign::Plus));
        // heavy centers are pairwise more than 2 r s apart
        for (i, &a) in lv.centers.iter().enumerate() {
            for &b in lv.centers.iter().skip(i + 1) {
                assert!(g.view().dist(a, b) > 6);
            }
        }
    }

    #[test]
    fn formula_policy_is_all_minus_at_desk_scale() {
        // eta is far below one for any disk a 20-cycle can hold
        let g = cycle(20);
        let h = build_hierarchy(&g, &[2], &[3], SplitPolicy::Formula).unwrap();
        assert!(h.levels[0].sign.values().all(|&s| s == Sign::Minus));
    }
}
