//! Finite simple graphs, covering maps between them, deck groups and
//! factorisations of coverings.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphDoc", into = "GraphDoc")]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphDoc> for Graph {
    type Error = Error;
    fn try_from(d: GraphDoc) -> Result<Self> {
        Graph::new(d.vertices, &d.edges)
    }
}

impl From<Graph> for GraphDoc {
    fn from(g: Graph) -> Self {
        GraphDoc { vertices: g.n, edges: g.edges() }
    }
}

impl Graph {
    /// Simple graph: no loops, no repeated edges.
    pub fn new(n: usize, edges: &[[usize; 2]]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for (i, &[u, v]) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::Structural(format!("edges[{i}]: vertex out of range")));
            }
            if u == v {
                return Err(Error::Structural(format!("edges[{i}]: loops are not simplicial")));
            }
            if adj[u].contains(&v) {
                return Err(Error::Structural(format!("edges[{i}]: repeated edge")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Graph { n, adj })
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<[usize; 2]> = (0..n).map(|i| [i, (i + 1) % n]).collect();
        Graph::new(n, &edges).expect("cycle of length at least 3")
    }

    /// Two triangles sharing vertex 0.
    pub fn wedge_of_triangles() -> Self {
        Graph::new(5, &[[0, 1], [1, 2], [2, 0], [0, 3], [3, 4], [4, 0]]).expect("wedge")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edges(&self) -> Vec<[usize; 2]> {
        (0..self.n).flat_map(|u| self.adj[u].iter().filter(move |&&v| u < v).map(move |&v| [u, v])).collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// The `k`-sheeted cover with vertices `(v, i) ↦ v·k + i` and, for each
    /// edge `[u, v]` of `self` with permutation `σ`, edges
    /// `(u, i) ~ (v, σ(i))`. Returns the cover and its projection.
    pub fn permutation_cover(&self, k: usize, perms: &[Vec<usize>]) -> Result<GraphMap> {
        let edges = self.edges();
        if perms.len() != edges.len() || perms.iter().any(|p| !is_permutation(p, k)) {
            return Err(Error::Structural(format!("need one permutation of {k} per edge")));
        }
        let mut up = Vec::new();
        for ([u, v], p) in edges.iter().zip(perms) {
            for (i, &pi) in p.iter().enumerate() {
                up.push([u * k + i, v * k + pi]);
            }
        }
        let total = Graph::new(self.n * k, &up)?;
        GraphMap::new(total, self.clone(), (0..self.n * k).map(|w| w / k).collect())
    }
}

fn is_permutation(p: &[usize], k: usize) -> bool {
    let mut seen = vec![false; k];
    p.len() == k && p.iter().all(|&x| x < k && !std::mem::replace(&mut seen[x], true))
}

/// A vertex map sending edges to edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphMapDoc", into = "GraphMapDoc")]
pub struct GraphMap {
    pub source: Graph,
    pub target: Graph,
    pub map: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphMapDoc {
    pub source: Graph,
    pub target: Graph,
    pub map: Vec<usize>,
}

impl TryFrom<GraphMapDoc> for GraphMap {
    type Error = Error;
    fn try_from(d: GraphMapDoc) -> Result<Self> {
        GraphMap::new(d.source, d.target, d.map)
    }
}

impl From<GraphMap> for GraphMapDoc {
    fn from(m: GraphMap) -> Self {
        GraphMapDoc { source: m.source, target: m.target, map: m.map }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoveringVerdict {
    pub covering: bool,
    /// A vertex whose star is not mapped bijectively, or an unhit vertex.
    pub witness: Option<usize>,
    pub reason: String,
    pub deck_group: Vec<Vec<usize>>,
    pub fibre_size: Option<usize>,
    pub regular: bool,
}

impl GraphMap {
    pub fn new(source: Graph, target: Graph, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.n || map.iter().any(|&v| v >= target.n) {
            return Err(Error::Structural("vertex map has the wrong length or range".into()));
        }
        for [u, v] in source.edges() {
            if !target.adjacent(map[u], map[v]) {
                return Err(Error::Structural(format!("edge [{u}, {v}] is not sent to an edge")));
            }
        }
        Ok(GraphMap { source, target, map })
    }

    /// `k`-fold wrapping of the `k·n`-cycle onto the `n`-cycle.
    pub fn cycle_wrap(n: usize, k: usize) -> Self {
        GraphMap::new(Graph::cycle(k * n), Graph::cycle(n), (0..k * n).map(|i| i % n).collect()).expect("wrap")
    }

    pub fn identity(g: &Graph) -> Self {
        GraphMap { source: g.clone(), target: g.clone(), map: (0..g.n).collect() }
    }

    pub fn compose(&self, first: &GraphMap) -> Result<GraphMap> {
        if first.target != self.source {
            return Err(Error::Structural("maps do not compose".into()));
        }
        GraphMap::new(first.source.clone(), self.target.clone(), first.map.iter().map(|&v| self.map[v]).collect())
    }

    fn fibre(&self, y: usize) -> Vec<usize> {
        (0..self.source.n).filter(|&x| self.map[x] == y).collect()
    }

    /// Surjective, and each star maps bijectively onto the star below.
    pub fn star_failure(&self) -> Option<(usize, String)> {
        if let Some(y) = (0..self.target.n).find(|&y| self.fibre(y).is_empty()) {
            return Some((y, format!("target vertex {y} is not hit")));
        }
        for x in 0..self.source.n {
            let mut img: Vec<usize> = self.source.neighbours(x).iter().map(|&w| self.map[w]).collect();
            img.sort_unstable();
            if img != self.target.neighbours(self.map[x]) {
                return Some((x, format!("star of vertex {x} is not mapped bijectively")));
            }
        }
        None
    }

    pub fn check_covering(&self) -> CoveringVerdict {
        if let Some((w, reason)) = self.star_failure() {
            return CoveringVerdict { covering: false, witness: Some(w), reason, deck_group: vec![], fibre_size: None, regular: false };
        }
        let deck = self.deck_group();
        let sizes: Vec<usize> = (0..self.target.n).map(|y| self.fibre(y).len()).collect();
        let fibre_size = sizes.windows(2).all(|w| w[0] == w[1]).then(|| sizes[0]);
        let regular = fibre_size == Some(deck.len()) && self.source.is_connected();
        CoveringVerdict { covering: true, witness: None, reason: String::new(), deck_group: deck, fibre_size, regular }
    }

    /// All automorphisms `σ` of the source with `p∘σ = p`, by exhaustive
    /// search with adjacency pruning.
    pub fn deck_group(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut assign = vec![usize::MAX; self.source.n];
        let mut used = vec![false; self.source.n];
        let order = bfs_order(&self.source);
        search(&order, 0, &mut assign, &mut used, true, &mut |x| self.fibre(self.map[x]), &self.source, &self.source, &mut out);
        out.sort();
        out
    }

    /// Maps `q : X̃₁ → X̃₂` with `p₂∘q = p₁` (not necessarily injective).
    pub fn factorizations(p1: &GraphMap, p2: &GraphMap, limit: usize) -> Result<Vec<Vec<usize>>> {
        if p1.target != p2.target {
            return Err(Error::Structural("coverings of different bases".into()));
        }
        let mut out = Vec::new();
        let mut assign = vec![usize::MAX; p1.source.n];
        let mut used = vec![false; p2.source.n];
        let order = bfs_order(&p1.source);
        let mut cands = |x: usize| p2.fibre(p1.map[x]);
        search(&order, 0, &mut assign, &mut used, false, &mut cands, &p1.source, &p2.source, &mut out);
        out.sort();
        out.truncate(limit);
        Ok(out)
    }

    pub fn factor(p1: &GraphMap, p2: &GraphMap) -> Result<Option<GraphMap>> {
        let found = GraphMap::factorizations(p1, p2, 1)?;
        Ok(match found.into_iter().next() {
            Some(m) => Some(GraphMap::new(p1.source.clone(), p2.source.clone(), m)?),
            None => None,
        })
    }
}

fn bfs_order(g: &Graph) -> Vec<usize> {
    let mut seen = vec![false; g.n];
    let mut order = Vec::with_capacity(g.n);
    for s in 0..g.n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut q = std::collections::VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            order.push(u);
            for &v in g.neighbours(u) {
                if !seen[v] {
                    seen[v] = true;
                    q.push_back(v);
                }
            }
        }
    }
    order
}

/// Backtracking over `order`: each vertex takes a candidate image adjacent
/// to the images of its assigned neighbours. With `bijective`, images are
/// distinct and non-edges must go to non-edges.
#[allow(clippy::too_many_arguments)]
fn search(
    order: &[usize],
    k: usize,
    assign: &mut Vec<usize>,
    used: &mut Vec<bool>,
    bijective: bool,
    cands: &mut dyn FnMut(usize) -> Vec<usize>,
    src: &Graph,
    tgt: &Graph,
    out: &mut Vec<Vec<usize>>,
) {
    if k == order.len() {
        out.push(assign.clone());
        return;
    }
    let x = order[k];
    for y in cands(x) {
        if bijective && used[y] {
            continue;
        }
        let ok = order[..k].iter().all(|&w| {
            let e = src.adjacent(x, w);
            let f = tgt.adjacent(y, assign[w]);
            if bijective {
                e == f
            } else {
                !e || f
            }
        });
        if !ok {
            continue;
        }
        assign[x] = y;
        used[y] = true;
        search(order, k + 1, assign, used, bijective, cands, src, tgt, out);
        used[y] = false;
        assign[x] = usize::MAX;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hexagon_over_triangle() {
        let p = GraphMap::cycle_wrap(3, 2);
        let v = p.check_covering();
        assert!(v.covering && v.regular);
        assert_eq!(v.deck_group.len(), 2);
        let id = GraphMap::identity(&Graph::cycle(3)).check_covering();
        assert_eq!(id.deck_group.len(), 1);
    }

    #[test]
    fn folding_is_not_a_covering() {
        let path = Graph::new(3, &[[0, 1], [1, 2]]).unwrap();
        let edge = Graph::new(2, &[[0, 1]]).unwrap();
        let fold = GraphMap::new(path, edge, vec![0, 1, 0]).unwrap();
        let v = fold.check_covering();
        assert!(!v.covering);
        assert_eq!(v.witness, Some(1));
    }

    #[test]
    fn factorizations() {
        let p12 = GraphMap::cycle_wrap(3, 4);
        let p6 = GraphMap::cycle_wrap(3, 2);
        let q = GraphMap::factor(&p12, &p6).unwrap().unwrap();
        assert_eq!(p6.compose(&q).unwrap().map, p12.map);
        assert!(GraphMap::factor(&p6, &p12).unwrap().is_none());
        let id = GraphMap::identity(&Graph::cycle(3));
        assert!(GraphMap::factor(&p6, &p6).unwrap().is_some());
        assert!(GraphMap::factor(&id, &id).unwrap().is_some());
    }

    #[test]
    fn incomparable_double_covers_of_the_wedge() {
        let w = Graph::wedge_of_triangles();
        let id = vec![0, 1];
        let sw = vec![1, 0];
        // edges in order [0,1] [0,2] [0,3] [0,4] [1,2] [3,4]; unwrap the first loop, or the second
        let c1 = w.permutation_cover(2, &[id.clone(), id.clone(), id.clone(), id.clone(), sw.clone(), id.clone()]).unwrap();
        let c2 = w.permutation_cover(2, &[id.clone(), id.clone(), id.clone(), id.clone(), id.clone(), sw]).unwrap();
        for c in [&c1, &c2] {
            let v = c.check_covering();
            assert!(v.covering && v.regular && v.deck_group.len() == 2);
        }
        assert!(GraphMap::factor(&c1, &c2).unwrap().is_none());
        assert!(GraphMap::factor(&c2, &c1).unwrap().is_none());
    }
}
