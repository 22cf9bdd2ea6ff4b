//! Per-cluster color families: the greedy level colorings chi_n, the
//! marker-based adapted base colorings psi^0, the satellite-set families
//! psi^i, and the top-down assembly of the final bounded-palette coloring.

use crate::graph::{Dist, Graph, MetricView, Vertex};
use crate::hierarchy::{cluster_ordering, eta_level, ClusterOrdering, Hierarchy, Sign};
use crate::iso::Coloring;
use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PaletteError {
    #[error("level {level} center {center}: no length-5 geodesic inside the cluster; the cluster radius must be at least 8 (increase r_0)")]
    NoGeodesic { level: usize, center: Vertex },
    #[error("level {level} center {center}: family index {needed} exceeds capacity 2^{satellites} even after corona relaxation; increase r_{level}")]
    Capacity { level: usize, center: Vertex, needed: u64, satellites: usize },
    #[error("level {level} center {center}: strict capacity |I|^2 <= |H| violated (|I| = {i_size}, |H| = {h_size})")]
    StrictCapacity { level: usize, center: Vertex, i_size: u64, h_size: String },
    #[error("level {level} vertex {vertex}: ran out of child colors (degree too close to the palette bound)")]
    ChildColors { level: usize, vertex: Vertex },
    #[error("level {level} center {center}: index set exhausted by the greedy coloring")]
    IndexExhausted { level: usize, center: Vertex },
}

/// Size of the contiguous index set I_{n,x} = [5 + |D_{n-1}(x, r^pm s)|].
pub fn i_size(g: &Graph, hier: &Hierarchy, n: usize, x: Vertex) -> u64 {
    let lv = &hier.levels[n];
    let metric = hier.metric(g, n as i64 - 1);
    5 + metric.disk(x, lv.radius(x) * lv.s).len() as u64
}

/// Size of H_{n,x} = eta_n(|D_{n-1}(x, r^pm)|) floored to a natural (None
/// when eta is below one, which is the generic desk-scale outcome).
pub fn h_size(g: &Graph, hier: &Hierarchy, n: usize, x: Vertex) -> Option<BigUint> {
    let lv = &hier.levels[n];
    let metric = hier.metric(g, n as i64 - 1);
    let a = metric.disk(x, lv.radius(x)).len() as u64;
    eta_level(g, hier, n, a).to_biguint()
}

/// Fixed injection of index pairs into the naturals, enumerated diagonal by
/// diagonal: ordered by (max(i,j), i).
pub fn pair_index(i: u64, j: u64) -> u64 {
    let m = i.max(j);
    if j == m && i < m {
        m * m + i
    } else {
        // i == m
        m * m + m + j
    }
}

pub fn unpair_index(k: u64) -> (u64, u64) {
    let m = (k as f64).sqrt() as u64;
    let m = if (m + 1) * (m + 1) <= k { m + 1 } else { m };
    let rem = k - m * m;
    if rem < m {
        (rem, m)
    } else {
        (m, rem - m)
    }
}

/// Greedy level coloring: in the basepoint order, each center takes the
/// least nonzero index-set value unused by already-colored same-sign centers
/// within distance r^pm s in the level-below metric.
pub fn chi(g: &Graph, hier: &Hierarchy, n: usize) -> Result<BTreeMap<Vertex, u64>, PaletteError> {
    let lv = &hier.levels[n];
    let metric = hier.metric(g, n as i64 - 1);
    let base = g.view().bfs_distances(g.basepoint());
    let mut order: Vec<Vertex> = lv.centers.clone();
    order.sort_unstable_by_key(|&x| (base[x as usize], x));
    let mut out: BTreeMap<Vertex, u64> = BTreeMap::new();
    for &x in &order {
        let range = lv.radius(x) * lv.s;
        let mut used: Vec<u64> = out
            .iter()
            .filter(|&(&y, _)| lv.sign[&y] == lv.sign[&x])
            .filter(|&(&y, _)| metric.dist(x, y) <= range)
            .map(|(_, &c)| c)
            .collect();
        used.sort_unstable();
        used.dedup();
        let cap = i_size(g, hier, n, x);
        let mut c = 1;
        for &u in &used {
            if u == c {
                c += 1;
            } else if u > c {
                break;
            }
        }
        if c >= cap {
            return Err(PaletteError::IndexExhausted { level: n, center: x });
        }
        out.insert(x, c);
    }
    Ok(out)
}

/// A realized color family of one cluster: the base coloring, the satellite
/// set, and on-demand realization of every index.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Family {
    pub level: usize,
    pub center: Vertex,
    pub sign: Sign,
    /// closed-cluster members (level n-1 objects; ambient vertices at level 0)
    pub domain: Vec<Vertex>,
    pub psi0: BTreeMap<Vertex, u64>,
    /// level 0: the geodesic marker tau_0..tau_5; level n: just the center
    pub marker: Vec<Vertex>,
    /// satellite set N, sorted by (distance to center, index)
    pub satellites: Vec<Vertex>,
    /// the color toggled on selected satellites (0 at level 0, 4 above)
    pub special: u64,
    pub ordering: ClusterOrdering,
    pub relaxations: Vec<String>,
}

impl Family {
    /// Desk capacity: the number of realizable indices.
    pub fn capacity(&self) -> BigUint {
        BigUint::one() << self.satellites.len()
    }

    pub fn capacity_u64(&self) -> Option<u64> {
        if self.satellites.len() >= 64 {
            None // effectively unbounded for any occurring index
        } else {
            Some(1u64 << self.satellites.len())
        }
    }

    /// The subset of satellites selected by index i (bit b -> b-th element).
    pub fn subset(&self, i: u64) -> Vec<Vertex> {
        self.satellites
            .iter()
            .enumerate()
            .filter(|(b, _)| (i >> b) & 1 == 1)
            .map(|(_, &v)| v)
            .collect()
    }

    pub fn realize(&self, i: u64) -> Result<BTreeMap<Vertex, u64>, PaletteError> {
        if let Some(cap) = self.capacity_u64() {
            if i >= cap {
                return Err(PaletteError::Capacity {
                    level: self.level,
                    center: self.center,
                    needed: i,
                    satellites: self.satellites.len(),
                });
            }
        }
        let mut out = self.psi0.clone();
        for v in self.subset(i) {
            out.insert(v, self.special);
        }
        Ok(out)
    }
}

/// Longest strictly-distance-increasing continuation from each vertex of
/// `domain`, used to pick geodesics that can reach length 5.
fn increasing_heights(
    metric: &MetricView,
    dist: &[Dist],
    domain: &[Vertex],
) -> BTreeMap<Vertex, u32> {
    let mut by_depth: Vec<Vertex> = domain.to_vec();
    by_depth.sort_unstable_by_key(|&v| std::cmp::Reverse(dist[v as usize]));
    let mut h: BTreeMap<Vertex, u32> = BTreeMap::new();
    let member: std::collections::BTreeSet<Vertex> = domain.iter().copied().collect();
    for &v in &by_depth {
        let mut best = 0;
        for w in metric.neighbors_of(v) {
            if member.contains(&w) && dist[w as usize] == dist[v as usize] + 1 {
                best = best.max(1 + h.get(&w).copied().unwrap_or(0));
            }
        }
        h.insert(v, best);
    }
    h
}

/// The lexicographically least length-5 geodesic from the center that stays
/// inside the cluster.
fn marker_geodesic(
    metric: &MetricView,
    center: Vertex,
    domain: &[Vertex],
    level: usize,
) -> Result<Vec<Vertex>, PaletteError> {
    let dist = metric.bfs_distances(center);
    let h = increasing_heights(metric, &dist, domain);
    if h.get(&center).copied().unwrap_or(0) < 5 {
        return Err(PaletteError::NoGeodesic { level, center });
    }
    let member: std::collections::BTreeSet<Vertex> = domain.iter().copied().collect();
    let mut tau = vec![center];
    for k in 1..=5u32 {
        let cur = *tau.last().unwrap();
        let next = metric
            .neighbors_of(cur)
            .into_iter()
            .filter(|&w| member.contains(&w) && dist[w as usize] == k)
            .filter(|&w| h[&w] + k >= 5)
            .min();
        match next {
            Some(w) => tau.push(w),
            None => return Err(PaletteError::NoGeodesic { level, center }),
        }
    }
    Ok(tau)
}

/// Children-pass color assignment: walk the ordering, give every not-yet-
/// fixed child the least admissible color not used by its already-colored
/// siblings.
fn color_children<F>(
    ordering: &ClusterOrdering,
    psi: &mut BTreeMap<Vertex, u64>,
    mut admissible: F,
    level: usize,
) -> Result<(), PaletteError>
where
    F: FnMut(Vertex, &[u64]) -> Option<u64>,
{
    for u in ordering.order.clone() {
        let children = match ordering.children.get(&u) {
            Some(c) => c.clone(),
            None => continue,
        };
        for v in children {
            if psi.contains_key(&v) {
                continue;
            }
            let used: Vec<u64> = ordering.children[&u]
                .iter()
                .filter_map(|w| psi.get(w).copied())
                .collect();
            match admissible(v, &used) {
                Some(c) => {
                    psi.insert(v, c);
                }
                None => return Err(PaletteError::ChildColors { level, vertex: v }),
            }
        }
    }
    Ok(())
}

fn least_avoiding(lo: u64, hi: u64, used: &[u64]) -> Option<u64> {
    (lo..hi).find(|c| !used.contains(c))
}

/// Satellite set construction with the desk relaxation ladder: shrink the
/// corona's inner radius until 2^|N| exceeds the largest occurring index.
/// Satellites are kept pairwise >= `sep` apart in the cluster's own metric
/// (>= 3 protects children-injectivity and marker exactness).
fn build_satellites(
    metric: &MetricView,
    center: Vertex,
    outer: Dist,
    inner_ladder: &[Dist],
    sep: Dist,
    max_index: u64,
    relaxations: &mut Vec<String>,
    level: usize,
) -> Result<Vec<Vertex>, PaletteError> {
    let dist = metric.bfs_distances(center);
    let mut best: Vec<Vertex> = Vec::new();
    for (step, &inner) in inner_ladder.iter().enumerate() {
        if inner >= outer {
            continue;
        }
        let mut cand: Vec<Vertex> = metric
            .disk(center, outer)
            .iter()
            .filter(|&v| dist[v as usize] > inner)
            .collect();
        cand.sort_unstable_by_key(|&v| (dist[v as usize], v));
        let mut n: Vec<Vertex> = Vec::new();
        for &v in &cand {
            if n.iter().all(|&w| metric.dist(v, w) >= sep) {
                n.push(v);
            }
        }
        best = n;
        let enough = best.len() >= 63 || (1u64 << best.len()) > max_index;
        if enough {
            if step > 0 {
                relaxations.push(format!(
                    "level {level} center {center}: satellite corona inner radius relaxed to {inner}"
                ));
            }
            // keep the (distance, index) sort as the bit order
            best.sort_unstable_by_key(|&v| (dist[v as usize], v));
            return Ok(best);
        }
    }
    Err(PaletteError::Capacity {
        level,
        center,
        needed: max_index,
        satellites: best.len(),
    })
}

/// Level-0 base coloring: geodesic marker tau_0..tau_5 with color 0 on
/// T0 (minus: {tau_0,tau_1,tau_2,tau_5}; plus: also tau_4), every other
/// vertex colored from {1..Delta-1} injectively on each children set.
pub fn build_family_level0(
    g: &Graph,
    hier: &Hierarchy,
    x: Vertex,
    max_index: u64,
) -> Result<Family, PaletteError> {
    let lv = &hier.levels[0];
    let sign = lv.sign[&x];
    let metric = g.view();
    let domain = lv.closed_cluster[&x].clone();
    let ordering = cluster_ordering(&metric, x, &domain)
        .expect("closed cluster is star-shaped around its center");
    let tau = marker_geodesic(&metric, x, &domain, 0)?;
    let mut psi: BTreeMap<Vertex, u64> = BTreeMap::new();
    psi.insert(tau[0], 0);
    psi.insert(tau[1], 0);
    psi.insert(tau[2], 0);
    psi.insert(tau[5], 0);
    if sign == Sign::Plus {
        psi.insert(tau[4], 0);
    }
    let delta = g.degree_bound() as u64;
    color_children(&ordering, &mut psi, |_, used| least_avoiding(1, delta, used), 0)?;
    let mut relaxations = Vec::new();
    let outer = lv.radius(x).saturating_sub(1);
    let satellites = build_satellites(
        &metric,
        x,
        outer,
        &[10, 9, 8, 7],
        3,
        max_index,
        &mut relaxations,
        0,
    )?;
    Ok(Family {
        level: 0,
        center: x,
        sign,
        domain,
        psi0: psi,
        marker: tau,
        satellites,
        special: 0,
        ordering,
        relaxations,
    })
}

/// Level-n base coloring on a cluster of level-(n-1) centers: the center is
/// colored 1 (minus) or 2 (plus); everything else takes the least color
/// >= 6 from its own index set, injectively on each children set. Selected
/// satellites are recolored 4.
pub fn build_family_leveln(
    g: &Graph,
    hier: &Hierarchy,
    n: usize,
    x: Vertex,
    max_index: u64,
    desk_sep: Dist,
) -> Result<Family, PaletteError> {
    assert!(n >= 1);
    let lv = &hier.levels[n];
    let sign = lv.sign[&x];
    let metric = hier.metric(g, n as i64 - 1);
    let domain = lv.closed_cluster[&x].clone();
    let ordering = cluster_ordering(&metric, x, &domain)
        .expect("closed cluster is star-shaped around its center");
    let mut psi: BTreeMap<Vertex, u64> = BTreeMap::new();
    psi.insert(x, if sign == Sign::Minus { 1 } else { 2 });
    let mut err: Option<(Vertex, u64)> = None;
    color_children(
        &ordering,
        &mut psi,
        |v, used| {
            let cap = i_size(g, hier, n - 1, v);
            let c = least_avoiding(6, cap, used);
            if c.is_none() {
                err = Some((v, cap));
            }
            c
        },
        n,
    )?;
    let _ = err;
    let mut relaxations = Vec::new();
    let outer = lv.radius(x).saturating_sub(1);
    let satellites = build_satellites(
        &metric,
        x,
        outer,
        &[10, 5, 3, 2, 1, 0],
        desk_sep.max(3),
        max_index,
        &mut relaxations,
        n,
    )?;
    Ok(Family {
        level: n,
        center: x,
        sign,
        domain,
        psi0: psi,
        marker: vec![x],
        satellites,
        special: 4,
        ordering,
        relaxations,
    })
}

/// Everything the top-down assembly produces, kept for verification: the
/// final ambient coloring plus all intermediate level data.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PhiBuild {
    pub top: usize,
    pub coloring: Coloring,
    /// chi per level
    pub chi: Vec<BTreeMap<Vertex, u64>>,
    /// first pair component of the level coloring per center
    pub a_component: Vec<BTreeMap<Vertex, u64>>,
    /// realized family index per center
    pub index: Vec<BTreeMap<Vertex, u64>>,
    pub families: Vec<BTreeMap<Vertex, Family>>,
    pub manifest: Vec<String>,
}

/// Assemble the final coloring top-down: the top level carries (chi_N, 0);
/// each center's pair value selects the family index realized on its
/// cluster, whose values become the next level's first components.
pub fn build_phi(g: &Graph, hier: &Hierarchy, top: usize) -> Result<PhiBuild, PaletteError> {
    assert!(top < hier.levels.len());
    let mut manifest: Vec<String> = Vec::new();
    let mut chis: Vec<BTreeMap<Vertex, u64>> = Vec::new();
    for n in 0..=top {
        chis.push(chi(g, hier, n)?);
    }
    let mut a_component: Vec<BTreeMap<Vertex, u64>> = vec![BTreeMap::new(); top + 1];
    let mut index: Vec<BTreeMap<Vertex, u64>> = vec![BTreeMap::new(); top + 1];
    let mut families: Vec<BTreeMap<Vertex, Family>> = vec![BTreeMap::new(); top + 1];
    for (&x, &c) in &chis[top] {
        a_component[top].insert(x, c);
        index[top].insert(x, pair_index(c, 0));
    }
    let mut phi: Vec<Option<u64>> = vec![None; g.vertex_count() as usize];
    for n in (0..=top).rev() {
        let lv = &hier.levels[n];
        for &x in &lv.centers {
            let k = index[n][&x];
            let fam = if n == 0 {
                build_family_level0(g, hier, x, k)?
            } else {
                build_family_leveln(g, hier, n, x, k, 1)?
            };
            manifest.extend(fam.relaxations.iter().cloned());
            // capacity diagnostic against the faithful formula
            let isz = i_size(g, hier, n, x);
            match h_size(g, hier, n, x) {
                Some(h) if BigUint::from(isz * isz) <= h => {}
                h => manifest.push(format!(
                    "level {n} center {x}: |I|^2 = {} exceeds |H| = {} (desk capacity 2^{} used instead)",
                    isz * isz,
                    h.map(|v| v.to_string()).unwrap_or_else(|| "0".into()),
                    fam.satellites.len()
                )),
            }
            let psi = fam.realize(k)?;
            for &u in &lv.cluster[&x] {
                let val = psi[&u];
                if n == 0 {
                    phi[u as usize] = Some(val);
                } else {
                    a_component[n - 1].insert(u, val);
                    index[n - 1].insert(u, pair_index(val, chis[n - 1][&u]));
                }
            }
            families[n].insert(x, fam);
        }
    }
    let colors: Vec<u64> = phi
        .into_iter()
        .map(|v| v.expect("clusters partition the ambient vertex set"))
        .collect();
    let coloring = Coloring::new(colors, g.degree_bound() as u64);
    Ok(PhiBuild {
        top,
        coloring,
        chi: chis,
        a_component,
        index,
        families,
        manifest,
    })
}
