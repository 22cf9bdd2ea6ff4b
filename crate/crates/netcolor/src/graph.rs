//! Simple undirected graphs, the path metric, and the separated-net toolkit.

use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use thiserror::Error;

pub type Vertex = u32;
pub type Dist = u32;

/// Sentinel for "unreachable" / "no value".
pub const INF: Dist = u32::MAX;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("edge endpoint {0} out of range (V = {1})")]
    VertexOutOfRange(Vertex, u32),
    #[error("graph is disconnected: {0} of {1} vertices reachable from vertex 0")]
    Disconnected(u32, u32),
    #[error("induced level graph is disconnected ({components} components)")]
    LevelDisconnected { components: usize },
    #[error("empty net")]
    EmptyNet,
    #[error("basepoint {0} out of range (V = {1})")]
    BadBasepoint(Vertex, u32),
    #[error("graph has no vertices")]
    Empty,
}

/// Immutable simple undirected connected graph with dense vertex indices
/// `0..V-1`, per-vertex sorted neighbor lists and a cached maximum degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    degree_bound: u32,
    basepoint: Vertex,
}

impl Graph {
    pub fn from_edges(
        n: u32,
        edges: &[(Vertex, Vertex)],
        basepoint: Vertex,
    ) -> Result<Graph, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if basepoint >= n {
            return Err(GraphError::BadBasepoint(basepoint, n));
        }
        let mut adj = vec![Vec::new(); n as usize];
        for &(u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if u >= n {
                return Err(GraphError::VertexOutOfRange(u, n));
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange(v, n));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge(u as Vertex, w[0]));
            }
        }
        let degree_bound = adj.iter().map(|l| l.len() as u32).max().unwrap_or(0);
        let g = Graph { adj, degree_bound, basepoint };
        // connectivity
        let d = g.view().bfs_distances(0);
        let reach = d.iter().filter(|&&x| x != INF).count() as u32;
        if reach != n {
            return Err(GraphError::Disconnected(reach, n));
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> u32 {
        self.adj.len() as u32
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn basepoint(&self) -> Vertex {
        self.basepoint
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: Vertex) -> u32 {
        self.adj[v as usize].len() as u32
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// Edge list with u < v, lexicographically sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut es = Vec::new();
        for u in 0..self.vertex_count() {
            for &v in self.neighbors(u) {
                if u < v {
                    es.push((u, v));
                }
            }
        }
        es
    }

    /// The whole-graph metric view.
    pub fn view(&self) -> MetricView {
        let n = self.vertex_count();
        MetricView {
            verts: (0..n).collect(),
            local_of: (0..n).collect(),
            adj: self.adj.iter().map(|l| l.to_vec()).collect(),
        }
    }

    /// Vertices whose degree falls short of the graph's degree bound. For
    /// patches cut out of a larger ambient graph these are exactly the
    /// vertices whose true neighborhoods are clipped; for degree-regular
    /// closed graphs (cycles, tori, complete graphs) the set is empty.
    pub fn boundary_vertices(&self) -> Vec<Vertex> {
        (0..self.vertex_count())
            .filter(|&v| self.degree(v) < self.degree_bound)
            .collect()
    }

    /// Vertices at distance > margin from every boundary vertex. When the
    /// graph has no boundary, every vertex qualifies.
    pub fn bulk(&self, margin: Dist) -> Vec<Vertex> {
        let boundary = self.boundary_vertices();
        if boundary.is_empty() {
            return (0..self.vertex_count()).collect();
        }
        let d = self.view().multi_source_distances(&boundary);
        (0..self.vertex_count())
            .filter(|&v| d[v as usize] > margin)
            .collect()
    }
}

/// Ordered duplicate-free vertex subset with O(1) membership.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSet {
    verts: Vec<Vertex>,
    #[serde(skip)]
    member: Vec<bool>,
}

impl VertexSet {
    pub fn new(universe: u32, mut verts: Vec<Vertex>) -> VertexSet {
        verts.sort_unstable();
        verts.dedup();
        let mut member = vec![false; universe as usize];
        for &v in &verts {
            member[v as usize] = true;
        }
        VertexSet { verts, member }
    }

    pub fn empty(universe: u32) -> VertexSet {
        VertexSet { verts: Vec::new(), member: vec![false; universe as usize] }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        (v as usize) < self.member.len() && self.member[v as usize]
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.verts.iter().copied()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.verts
    }

    /// Rebuild the membership table (needed after deserialization).
    pub fn rebuild(&mut self, universe: u32) {
        self.member = vec![false; universe as usize];
        for &v in &self.verts {
            self.member[v as usize] = true;
        }
    }
}

/// A graph metric: either the ambient path metric or the induced metric of a
/// coarsened level realized as a graph on a vertex subset. Vertices keep
/// their ambient ids.
#[derive(Clone, Debug)]
#[derive(Default)]
pub struct MetricView {
    verts: Vec<Vertex>,
    /// ambient id -> local index (INF when absent)
    local_of: Vec<u32>,
    adj: Vec<Vec<Vertex>>, // local indices
}

impl MetricView {
    /// Induced level metric on `subset` with the given level edges
    /// (ambient-id pairs). Errors when the level graph is disconnected.
    pub fn induced(
        universe: u32,
        subset: &[Vertex],
        edges: &[(Vertex, Vertex)],
    ) -> Result<MetricView, GraphError> {
        let mut verts: Vec<Vertex> = subset.to_vec();
        verts.sort_unstable();
        verts.dedup();
        let mut local_of = vec![INF; universe as usize];
        for (i, &v) in verts.iter().enumerate() {
            local_of[v as usize] = i as u32;
        }
        let mut adj = vec![Vec::new(); verts.len()];
        for &(u, v) in edges {
            let (lu, lv) = (local_of[u as usize], local_of[v as usize]);
            assert!(lu != INF && lv != INF, "level edge endpoint outside subset");
            if !adj[lu as usize].contains(&lv) {
                adj[lu as usize].push(lv);
                adj[lv as usize].push(lu);
            }
        }
        for l in adj.iter_mut() {
            l.sort_unstable();
        }
        let m = MetricView { verts, local_of, adj };
        if !m.verts.is_empty() {
            let d = m.bfs_distances(m.verts[0]);
            let unreached = m.verts.iter().filter(|&&v| d[v as usize] == INF).count();
            if unreached > 0 {
                return Err(GraphError::LevelDisconnected { components: unreached + 1 });
            }
        }
        Ok(m)
    }

    pub fn members(&self) -> &[Vertex] {
        &self.verts
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        (v as usize) < self.local_of.len() && self.local_of[v as usize] != INF
    }

    pub fn local(&self, v: Vertex) -> u32 {
        let l = self.local_of[v as usize];
        assert!(l != INF, "vertex {v} not in metric view");
        l
    }

    pub fn neighbors_of(&self, v: Vertex) -> Vec<Vertex> {
        self.adj[self.local(v) as usize].iter().map(|&l| self.verts[l as usize]).collect()
    }

    pub fn max_degree(&self) -> u32 {
        self.adj.iter().map(|l| l.len() as u32).max().unwrap_or(0)
    }

    /// Exact shortest-path distances from `x`, indexed by ambient vertex id
    /// (INF for vertices outside the view).
    pub fn bfs_distances(&self, x: Vertex) -> Vec<Dist> {
        self.multi_source_distances(&[x])
    }

    pub fn multi_source_distances(&self, sources: &[Vertex]) -> Vec<Dist> {
        let mut dist = vec![INF; self.local_of.len()];
        let mut q = VecDeque::new();
        for &s in sources {
            let _ = self.local(s);
            if dist[s as usize] == INF {
                dist[s as usize] = 0;
                q.push_back(s);
            }
        }
        while let Some(u) = q.pop_front() {
            let du = dist[u as usize];
            for &l in &self.adj[self.local_of[u as usize] as usize] {
                let w = self.verts[l as usize];
                if dist[w as usize] == INF {
                    dist[w as usize] = du + 1;
                    q.push_back(w);
                }
            }
        }
        dist
    }

    /// Distances from `x` out to radius at most `cap` (cheaper for disks).
    pub fn bfs_bounded(&self, x: Vertex, cap: Dist) -> Vec<(Vertex, Dist)> {
        let mut dist = vec![INF; self.local_of.len()];
        let mut out = Vec::new();
        let mut q = VecDeque::new();
        let _ = self.local(x);
        dist[x as usize] = 0;
        out.push((x, 0));
        q.push_back(x);
        while let Some(u) = q.pop_front() {
            let du = dist[u as usize];
            if du == cap {
                continue;
            }
            for &l in &self.adj[self.local_of[u as usize] as usize] {
                let w = self.verts[l as usize];
                if dist[w as usize] == INF {
                    dist[w as usize] = du + 1;
                    out.push((w, du + 1));
                    q.push_back(w);
                }
            }
        }
        out
    }

    pub fn dist(&self, x: Vertex, y: Vertex) -> Dist {
        if x == y {
            return 0;
        }
        // bidirectional would be faster; plain BFS is fine at this scale
        self.bfs_distances(x)[y as usize]
    }

    /// D(x,r): vertices at distance <= r.
    pub fn disk(&self, x: Vertex, r: Dist) -> VertexSet {
        let verts = self.bfs_bounded(x, r).into_iter().map(|(v, _)| v).collect();
        VertexSet::new(self.local_of.len() as u32, verts)
    }

    /// S(x,r): vertices at distance exactly r.
    pub fn sphere(&self, x: Vertex, r: Dist) -> VertexSet {
        let verts = self
            .bfs_bounded(x, r)
            .into_iter()
            .filter(|&(_, d)| d == r)
            .map(|(v, _)| v)
            .collect();
        VertexSet::new(self.local_of.len() as u32, verts)
    }

    /// C(x,r,s) = D(x,s) \ D(x,r); requires r <= s.
    pub fn corona(&self, x: Vertex, r: Dist, s: Dist) -> VertexSet {
        assert!(r <= s, "corona requires r <= s");
        let verts = self
            .bfs_bounded(x, s)
            .into_iter()
            .filter(|&(_, d)| d > r)
            .map(|(v, _)| v)
            .collect();
        VertexSet::new(self.local_of.len() as u32, verts)
    }

    /// CPen(Q,r): vertices within distance r of Q.
    pub fn closed_penumbra(&self, q: &[Vertex], r: Dist) -> VertexSet {
        let d = self.multi_source_distances(q);
        let verts = self
            .verts
            .iter()
            .copied()
            .filter(|&v| d[v as usize] <= r)
            .collect();
        VertexSet::new(self.local_of.len() as u32, verts)
    }

    /// Greedy maximal K-separated subset: scan `priority`, keep a vertex iff
    /// its distance to everything already chosen is >= K. The result is
    /// K-separated and maximal, hence (K-1)-relatively dense.
    pub fn maximal_separated_set(&self, k: Dist, priority: &[Vertex]) -> Vec<Vertex> {
        assert!(k >= 1);
        let mut blocked = vec![false; self.local_of.len()];
        let mut chosen = Vec::new();
        for &v in priority {
            if blocked[v as usize] {
                continue;
            }
            chosen.push(v);
            for (w, _) in self.bfs_bounded(v, k.saturating_sub(1)) {
                blocked[w as usize] = true;
            }
        }
        chosen
    }

    /// Default priority order: (distance to basepoint, vertex index).
    pub fn priority_order(&self, basepoint: Vertex) -> Vec<Vertex> {
        let d = self.bfs_distances(basepoint);
        let mut order: Vec<Vertex> = self.verts.clone();
        order.sort_by_key(|&v| (d[v as usize], v));
        order
    }

    pub fn is_separated(&self, a: &[Vertex], k: Dist) -> bool {
        for (i, &u) in a.iter().enumerate() {
            if k == 0 {
                break;
            }
            let d = if k >= 2 {
                self.bfs_bounded(u, k - 1)
            } else {
                vec![]
            };
            for &(w, dist) in &d {
                if w != u && dist < k && a[i + 1..].contains(&w) {
                    return false;
                }
            }
        }
        true
    }

    /// Minimal C with CPen(A, C) covering the whole view.
    pub fn relative_density_constant(&self, a: &[Vertex]) -> Result<Dist, GraphError> {
        if a.is_empty() {
            return Err(GraphError::EmptyNet);
        }
        let d = self.multi_source_distances(a);
        Ok(self
            .verts
            .iter()
            .map(|&v| d[v as usize])
            .max()
            .unwrap_or(0))
    }

    /// Max over the given domain of the distance to A.
    pub fn density_constant_over(&self, a: &[Vertex], domain: &[Vertex]) -> Result<Dist, GraphError> {
        if a.is_empty() {
            return Err(GraphError::EmptyNet);
        }
        let d = self.multi_source_distances(a);
        Ok(domain.iter().map(|&v| d[v as usize]).max().unwrap_or(0))
    }

    pub fn eccentricity(&self, x: Vertex) -> Dist {
        self.bfs_distances(x)
            .iter()
            .filter(|&&d| d != INF)
            .copied()
            .max()
            .unwrap_or(0)
    }
}
