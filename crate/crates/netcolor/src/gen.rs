//! Graph generators for the workbench corpus, the distinguishing-number
//! oracles, the line-graph reduction, a whole-graph candidate coloring, and
//! DOT export.

use crate::graph::{Graph, GraphError, Vertex};
use crate::hierarchy::cluster_ordering;
use crate::iso::{automorphisms, Coloring, IsoError};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("invalid generator parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Iso(#[from] IsoError),
}

pub fn cycle(n: u32) -> Result<Graph, GenError> {
    if n < 3 {
        return Err(GenError::BadParams(format!("cycle needs n >= 3, got {n}")));
    }
    let edges: Vec<(Vertex, Vertex)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Ok(Graph::from_edges(n, &edges, 0)?)
}

pub fn path(n: u32) -> Result<Graph, GenError> {
    if n < 1 {
        return Err(GenError::BadParams("path needs n >= 1".into()));
    }
    let edges: Vec<(Vertex, Vertex)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    Ok(Graph::from_edges(n, &edges, n / 2)?)
}

pub fn complete(n: u32) -> Result<Graph, GenError> {
    if n < 2 {
        return Err(GenError::BadParams("complete needs n >= 2".into()));
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Ok(Graph::from_edges(n, &edges, 0)?)
}

pub fn complete_bipartite(a: u32, b: u32) -> Result<Graph, GenError> {
    if a < 1 || b < 1 {
        return Err(GenError::BadParams("complete_bipartite needs both sides nonempty".into()));
    }
    let mut edges = Vec::new();
    for u in 0..a {
        for v in 0..b {
            edges.push((u, a + v));
        }
    }
    Ok(Graph::from_edges(a + b, &edges, 0)?)
}

pub fn grid(w: u32, h: u32) -> Result<Graph, GenError> {
    if w < 1 || h < 1 {
        return Err(GenError::BadParams("grid needs positive dimensions".into()));
    }
    let at = |x: u32, y: u32| y * w + x;
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if x + 1 < w {
                edges.push((at(x, y), at(x + 1, y)));
            }
            if y + 1 < h {
                edges.push((at(x, y), at(x, y + 1)));
            }
        }
    }
    Ok(Graph::from_edges(w * h, &edges, at(w / 2, h / 2))?)
}

pub fn torus(w: u32, h: u32) -> Result<Graph, GenError> {
    if w < 3 || h < 3 {
        return Err(GenError::BadParams("torus needs both dimensions >= 3".into()));
    }
    let at = |x: u32, y: u32| y * w + x;
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            edges.push((at(x, y), at((x + 1) % w, y)));
            edges.push((at(x, y), at(x, (y + 1) % h)));
        }
    }
    Ok(Graph::from_edges(w * h, &edges, 0)?)
}

/// Complete `arity`-ary rooted tree of the given depth (the root has
/// `arity` children, every internal vertex has `arity` children).
pub fn tree(arity: u32, depth: u32) -> Result<Graph, GenError> {
    if arity < 1 {
        return Err(GenError::BadParams("tree needs arity >= 1".into()));
    }
    let mut edges = Vec::new();
    let mut frontier = vec![0u32];
    let mut next_id = 1u32;
    for _ in 0..depth {
        let mut next = Vec::new();
        for &u in &frontier {
            for _ in 0..arity {
                edges.push((u, next_id));
                next.push(next_id);
                next_id += 1;
            }
        }
        frontier = next;
    }
    Ok(Graph::from_edges(next_id, &edges, 0)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CayleyPreset {
    /// the integers with generator 1: a path ball
    Z,
    /// the integer plane with unit generators: an l1 ball
    Z2,
    /// the free group on two generators: a 4-regular tree ball
    F2,
}

pub fn cayley_ball(preset: CayleyPreset, radius: u32) -> Result<Graph, GenError> {
    match preset {
        CayleyPreset::Z => path(2 * radius + 1),
        CayleyPreset::Z2 => {
            // vertices (x, y) with |x| + |y| <= radius
            let r = radius as i64;
            let mut ids = std::collections::BTreeMap::new();
            let mut verts = Vec::new();
            for x in -r..=r {
                for y in -r..=r {
                    if x.abs() + y.abs() <= r {
                        ids.insert((x, y), verts.len() as u32);
                        verts.push((x, y));
                    }
                }
            }
            let mut edges = Vec::new();
            for (&(x, y), &u) in &ids {
                for (dx, dy) in [(1i64, 0i64), (0, 1)] {
                    if let Some(&v) = ids.get(&(x + dx, y + dy)) {
                        edges.push((u, v));
                    }
                }
            }
            let bp = ids[&(0, 0)];
            Ok(Graph::from_edges(verts.len() as u32, &edges, bp)?)
        }
        CayleyPreset::F2 => {
            // breadth-first word enumeration: every non-root vertex extends
            // by the three letters not cancelling its last one
            let mut edges = Vec::new();
            // (vertex id, incoming letter 0..4 or none for the root)
            let mut frontier: Vec<(u32, Option<u8>)> = vec![(0, None)];
            let mut next_id = 1u32;
            let inverse = |l: u8| l ^ 1; // letters a, a^-1, b, b^-1
            for _ in 0..radius {
                let mut next = Vec::new();
                for &(u, incoming) in &frontier {
                    for l in 0..4u8 {
                        if incoming == Some(inverse(l)) {
                            continue;
                        }
                        edges.push((u, next_id));
                        next.push((next_id, Some(l)));
                        next_id += 1;
                    }
                }
                frontier = next;
            }
            Ok(Graph::from_edges(next_id.max(1), &edges, 0)?)
        }
    }
}

/// Seeded random connected graph with maximum degree at most `delta`:
/// a random degree-constrained spanning tree plus random extra edges.
pub fn random_bounded(delta: u32, v: u32, seed: u64) -> Result<Graph, GenError> {
    if v < 2 || delta < 2 {
        return Err(GenError::BadParams(format!(
            "random_bounded needs v >= 2 and delta >= 2, got v={v} delta={delta}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut deg = vec![0u32; v as usize];
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    for u in 1..v {
        // attach to a random earlier vertex with spare degree
        let candidates: Vec<Vertex> = (0..u).filter(|&w| deg[w as usize] < delta).collect();
        if candidates.is_empty() {
            return Err(GenError::BadParams(format!(
                "cannot fit {v} vertices in a tree of degree {delta}"
            )));
        }
        let w = candidates[rng.gen_range(0..candidates.len())];
        edges.push((w, u));
        deg[w as usize] += 1;
        deg[u as usize] += 1;
    }
    // sprinkle extra edges without breaching the bound
    let extras = (v / 4) as usize;
    for _ in 0..extras {
        let a = rng.gen_range(0..v);
        let b = rng.gen_range(0..v);
        if a == b || deg[a as usize] >= delta || deg[b as usize] >= delta {
            continue;
        }
        let e = (a.min(b), a.max(b));
        if !edges.contains(&e) {
            deg[e.0 as usize] += 1;
            deg[e.1 as usize] += 1;
            edges.push(e);
        }
    }
    Ok(Graph::from_edges(v, &edges, 0)?)
}

/// Enumerate colorings of `n` items by at most `k` colors up to color
/// permutation (restricted growth strings) and stop at the first one
/// accepted by `test`.
fn rgs_search(n: usize, k: u64, test: &mut dyn FnMut(&[u64]) -> bool) -> Option<Vec<u64>> {
    fn rec(
        c: &mut Vec<u64>,
        n: usize,
        k: u64,
        max_used: u64,
        test: &mut dyn FnMut(&[u64]) -> bool,
    ) -> bool {
        if c.len() == n {
            return test(c);
        }
        let top = (max_used + 1).min(k - 1);
        for v in 0..=top {
            c.push(v);
            if rec(c, n, k, max_used.max(v), test) {
                return true;
            }
            c.pop();
        }
        false
    }
    let mut c = Vec::with_capacity(n);
    if n == 0 {
        return None;
    }
    c.push(0);
    if rec(&mut c, n, k, 0, test) {
        Some(c)
    } else {
        None
    }
}

/// Least palette size admitting a coloring preserved by no nonidentity
/// automorphism, by increasing-palette search over colorings modulo color
/// permutation.
pub fn distinguishing_number(g: &Graph, cap: u32) -> Result<u64, GenError> {
    let autos = automorphisms(g, None, cap)?;
    let nontrivial: Vec<&Vec<u32>> = autos
        .iter()
        .filter(|a| a.iter().enumerate().any(|(v, &img)| v as u32 != img))
        .collect();
    if nontrivial.is_empty() {
        return Ok(1);
    }
    let n = g.vertex_count() as usize;
    for k in 2..=(n as u64) {
        let mut test = |c: &[u64]| {
            nontrivial
                .iter()
                .all(|a| (0..n).any(|v| c[v] != c[a[v] as usize]))
        };
        if rgs_search(n, k, &mut test).is_some() {
            return Ok(k);
        }
    }
    unreachable!("the injective coloring is always aperiodic");
}

/// An aperiodic coloring realizing the distinguishing number, for export.
pub fn distinguishing_coloring(g: &Graph, cap: u32) -> Result<Coloring, GenError> {
    let autos = automorphisms(g, None, cap)?;
    let nontrivial: Vec<&Vec<u32>> = autos
        .iter()
        .filter(|a| a.iter().enumerate().any(|(v, &img)| v as u32 != img))
        .collect();
    let n = g.vertex_count() as usize;
    if nontrivial.is_empty() {
        return Ok(Coloring::new(vec![0; n], 1));
    }
    for k in 2..=(n as u64) {
        let mut test = |c: &[u64]| {
            nontrivial
                .iter()
                .all(|a| (0..n).any(|v| c[v] != c[a[v] as usize]))
        };
        if let Some(c) = rgs_search(n, k, &mut test) {
            return Ok(Coloring::new(c, k));
        }
    }
    unreachable!()
}

/// The line graph: one vertex per edge, adjacent when the edges share an
/// endpoint. The basepoint is the least edge at the original basepoint.
pub fn line_graph(g: &Graph) -> Result<Graph, GenError> {
    let edges = g.edges();
    if edges.is_empty() {
        return Err(GenError::BadParams("line graph of an edgeless graph".into()));
    }
    let mut ledges = Vec::new();
    for (i, &(a, b)) in edges.iter().enumerate() {
        for (j, &(c, d)) in edges.iter().enumerate().skip(i + 1) {
            if a == c || a == d || b == c || b == d {
                ledges.push((i as Vertex, j as Vertex));
            }
        }
    }
    let bp = edges
        .iter()
        .position(|&(a, b)| a == g.basepoint() || b == g.basepoint())
        .unwrap_or(0) as Vertex;
    let lg = Graph::from_edges(edges.len() as u32, &ledges, bp)?;
    // interior degrees of a line graph stay within twice the original bound
    assert!(lg.degree_bound() <= 2 * (g.degree_bound().saturating_sub(1)).max(1));
    Ok(lg)
}

/// Distinguishing index: the distinguishing number of the line graph.
pub fn distinguishing_index(g: &Graph, cap: u32) -> Result<u64, GenError> {
    distinguishing_number(&line_graph(g)?, cap)
}

/// Whole-graph candidate coloring by `degree_bound` colors: a marker of
/// zeros along the least geodesic from the root (up to length 5) and
/// sibling-injective colors elsewhere. Construct-and-verify: pair with the
/// aperiodicity check, since the exceptional graphs defeat it.
pub fn bfs_candidate_coloring(g: &Graph, root: Vertex) -> (Coloring, Vec<String>) {
    let view = g.view();
    let all: Vec<Vertex> = (0..g.vertex_count()).collect();
    let ordering = cluster_ordering(&view, root, &all).expect("graph is connected");
    let mut notes = Vec::new();
    let dist = view.bfs_distances(root);
    // longest strictly increasing continuation, for geodesic selection
    let mut by_depth = all.clone();
    by_depth.sort_unstable_by_key(|&v| std::cmp::Reverse(dist[v as usize]));
    let mut height = vec![0u32; all.len()];
    for &v in &by_depth {
        for &w in g.neighbors(v) {
            if dist[w as usize] == dist[v as usize] + 1 {
                height[v as usize] = height[v as usize].max(1 + height[w as usize]);
            }
        }
    }
    let len = height[root as usize].min(5);
    if len < 5 {
        notes.push(format!("marker truncated to length {len}"));
    }
    let mut tau = vec![root];
    for k in 1..=len {
        let cur = *tau.last().unwrap();
        let next = g
            .neighbors(cur)
            .iter()
            .copied()
            .filter(|&w| dist[w as usize] == k && height[w as usize] + k >= len)
            .min()
            .expect("height admits a continuation");
        tau.push(next);
    }
    let mut colors: Vec<Option<u64>> = vec![None; all.len()];
    colors[tau[0] as usize] = Some(0);
    if len >= 2 {
        colors[tau[1] as usize] = Some(0);
        colors[tau[2] as usize] = Some(0);
    }
    if len >= 5 {
        colors[tau[5] as usize] = Some(0);
    } else if len >= 3 {
        colors[tau[len as usize] as usize] = Some(0);
    }
    let delta = g.degree_bound().max(2) as u64;
    for u in ordering.order.clone() {
        if let Some(ch) = ordering.children.get(&u) {
            for &v in ch {
                if colors[v as usize].is_some() {
                    continue;
                }
                let used: Vec<u64> = ch
                    .iter()
                    .filter_map(|w| colors[*w as usize])
                    .collect();
                let c = (1..delta).find(|c| !used.contains(c)).unwrap_or(1);
                colors[v as usize] = Some(c);
            }
        }
    }
    let final_colors: Vec<u64> = colors.into_iter().map(|c| c.unwrap_or(1)).collect();
    (Coloring::new(final_colors, delta), notes)
}

const DOT_PALETTE: [&str; 16] = [
    "#e6194b", "#3cb44b", "#ffe119", "#4363d8", "#f58231", "#911eb4", "#46f0f0", "#f032e6",
    "#bcf60c", "#fabebe", "#008080", "#e6beff", "#9a6324", "#fffac8", "#800000", "#aaffc3",
];

/// GraphViz DOT text with fill colors cycling through a fixed palette.
pub fn export_dot(g: &Graph, coloring: Option<&Coloring>) -> String {
    let mut out = String::from("graph patch {\n  node [style=filled];\n");
    for v in 0..g.vertex_count() {
        let fill = match coloring {
            Some(c) => DOT_PALETTE[(c.colors[v as usize] % 16) as usize],
            None => "#ffffff",
        };
        let shape = if v == g.basepoint() { ", shape=doublecircle" } else { "" };
        out.push_str(&format!("  v{v} [fillcolor=\"{fill}\"{shape}];\n"));
    }
    for (u, v) in g.edges() {
        out.push_str(&format!("  v{u} -- v{v};\n"));
    }
    out.push_str("}\n");
    out
}
