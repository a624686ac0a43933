//! Two-dimensional cell complexes and presentations of their fundamental
//! groups.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::abelian::{AbHom, CochainComplex, FgAbGroup};
use crate::linalg::Matrix;
use crate::{Error, Result};

/// A letter: an edge or generator index, traversed backwards when `inv`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub index: usize,
    pub inv: bool,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        Letter { index: self.index, inv: !self.inv }
    }
}

/// Vertices, directed edges `[tail, head]`, and 2-cells as closed edge paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoComplex {
    pub vertices: Vec<String>,
    pub edge_names: Vec<String>,
    pub edges: Vec<[usize; 2]>,
    pub cells: Vec<Vec<Letter>>,
}

/// Cells are words of edge names; a trailing `~` marks inverse traversal.
/// Edge names default to `e0, e1, …`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoComplexDoc {
    pub vertices: Vec<String>,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_names: Option<Vec<String>>,
    #[serde(default)]
    pub cells: Vec<Vec<String>>,
}

impl TwoComplex {
    pub fn new(vertices: Vec<String>, edge_names: Vec<String>, edges: Vec<[usize; 2]>, cells: Vec<Vec<Letter>>) -> Result<Self> {
        let n = vertices.len();
        if n == 0 {
            return Err(Error::Structural("complex needs a vertex".into()));
        }
        if edge_names.len() != edges.len() {
            return Err(Error::Structural("one name per edge".into()));
        }
        for (i, e) in edges.iter().enumerate() {
            if e[0] >= n || e[1] >= n {
                return Err(Error::Structural(format!("edges[{i}]: endpoint out of range")));
            }
        }
        let mut sorted = edge_names.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Structural("edge names must be distinct".into()));
        }
        let x = TwoComplex { vertices, edge_names, edges, cells: vec![] };
        let mut stored = Vec::with_capacity(cells.len());
        for (i, c) in cells.into_iter().enumerate() {
            if c.is_empty() {
                return Err(Error::Structural(format!("cells[{i}]: empty boundary")));
            }
            if let Some(l) = c.iter().find(|l| l.index >= x.edges.len()) {
                return Err(Error::Structural(format!("cells[{i}]: unknown edge {}", l.index)));
            }
            for k in 0..c.len() {
                let (a, b) = (c[k], c[(k + 1) % c.len()]);
                if x.head(a) != x.tail(b) {
                    return Err(Error::Structural(format!("cells[{i}]: boundary is not a closed path at position {k}")));
                }
            }
            stored.push(c);
        }
        Ok(TwoComplex { cells: stored, ..x })
    }

    pub fn from_doc(doc: &TwoComplexDoc) -> Result<Self> {
        let names = doc.edge_names.clone().unwrap_or_else(|| (0..doc.edges.len()).map(|i| format!("e{i}")).collect());
        let mut cells = Vec::new();
        for (i, c) in doc.cells.iter().enumerate() {
            let mut word = Vec::new();
            for tok in c {
                let (name, inv) = match tok.strip_suffix('~') {
                    Some(n) => (n, true),
                    None => (tok.as_str(), false),
                };
                let index = names
                    .iter()
                    .position(|e| e == name)
                    .ok_or_else(|| Error::Structural(format!("cells[{i}]: unknown edge {name:?}")))?;
                word.push(Letter { index, inv });
            }
            cells.push(word);
        }
        TwoComplex::new(doc.vertices.clone(), names, doc.edges.clone(), cells)
    }

    pub fn to_doc(&self) -> TwoComplexDoc {
        let cells = self
            .cells
            .iter()
            .map(|c| c.iter().map(|l| format!("{}{}", self.edge_names[l.index], if l.inv { "~" } else { "" })).collect())
            .collect();
        TwoComplexDoc { vertices: self.vertices.clone(), edges: self.edges.clone(), edge_names: Some(self.edge_names.clone()), cells }
    }

    fn tail(&self, l: Letter) -> usize {
        self.edges[l.index][usize::from(l.inv)]
    }

    fn head(&self, l: Letter) -> usize {
        self.edges[l.index][usize::from(!l.inv)]
    }

    /// One vertex with `k` loops.
    pub fn wedge(k: usize) -> Self {
        TwoComplex::new(vec!["v".into()], (0..k).map(|i| format!("a{i}")).collect(), vec![[0, 0]; k], vec![]).expect("wedge")
    }

    /// One vertex, loops `a`, `b`, and one cell with boundary `word`.
    pub fn one_relator(word: &str) -> Result<Self> {
        let cell = word
            .chars()
            .map(|ch| match ch {
                'a' => Ok(Letter { index: 0, inv: false }),
                'A' => Ok(Letter { index: 0, inv: true }),
                'b' => Ok(Letter { index: 1, inv: false }),
                'B' => Ok(Letter { index: 1, inv: true }),
                _ => Err(Error::Structural(format!("letter {ch:?} is not one of aAbB"))),
            })
            .collect::<Result<_>>()?;
        TwoComplex::new(vec!["v".into()], vec!["a".into(), "b".into()], vec![[0, 0]; 2], vec![cell])
    }

    pub fn torus() -> Self {
        TwoComplex::one_relator("abAB").expect("torus")
    }

    pub fn klein_bottle() -> Self {
        TwoComplex::one_relator("abaB").expect("klein bottle")
    }

    pub fn projective_plane() -> Self {
        TwoComplex::new(vec!["v".into()], vec!["a".into()], vec![[0, 0]], vec![vec![Letter { index: 0, inv: false }; 2]])
            .expect("projective plane")
    }

    /// Cellular cochains `Z^V → Z^E → Z^F`: `(δf)(e) = f(head) − f(tail)`,
    /// `(δc)(σ) = Σ ±c(e)` along the boundary of `σ`.
    pub fn cellular_cochains(&self) -> CochainComplex {
        let (v, e, f) = (self.vertices.len(), self.edges.len(), self.cells.len());
        let mut d0 = Matrix::zeros(e, v);
        for (i, [t, h]) in self.edges.iter().enumerate() {
            d0[(i, *h)] += 1;
            d0[(i, *t)] -= 1;
        }
        let mut d1 = Matrix::zeros(f, e);
        for (s, c) in self.cells.iter().enumerate() {
            for l in c {
                d1[(s, l.index)] += if l.inv { -1 } else { 1 };
            }
        }
        CochainComplex::new(vec![vec![0; v], vec![0; e], vec![0; f]], vec![d0, d1]).expect("cellular shapes")
    }

    pub fn is_connected(&self) -> bool {
        self.spanning_tree(0).1.iter().all(|&s| s)
    }

    /// Tree edges (as letters leaving the tree side) and reached vertices.
    fn spanning_tree(&self, base: usize) -> (Vec<bool>, Vec<bool>) {
        let mut in_tree = vec![false; self.edges.len()];
        let mut seen = vec![false; self.vertices.len()];
        seen[base] = true;
        let mut queue = VecDeque::from([base]);
        while let Some(u) = queue.pop_front() {
            for (i, [t, h]) in self.edges.iter().enumerate() {
                for (a, b) in [(*t, *h), (*h, *t)] {
                    if a == u && !seen[b] {
                        seen[b] = true;
                        in_tree[i] = true;
                        queue.push_back(b);
                    }
                }
            }
        }
        (in_tree, seen)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Vec<Letter>>,
}

impl GroupPresentation {
    /// Abelianisation as the cokernel of the exponent-sum matrix.
    pub fn abelianization(&self) -> FgAbGroup {
        let g = self.generators.len();
        let r = self.relators.len();
        let mut m = Matrix::zeros(g, r);
        for (j, w) in self.relators.iter().enumerate() {
            for l in w {
                m[(l.index, j)] += if l.inv { -1 } else { 1 };
            }
        }
        AbHom::new(FgAbGroup::free(r), FgAbGroup::free(g), &m).expect("free groups").cokernel().0
    }

    pub fn is_free(&self) -> bool {
        self.relators.is_empty()
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|l| format!("{}{}", self.generators[l.index], if l.inv { "~" } else { "" })).collect::<Vec<_>>().join(" ")
    }

    pub fn doc(&self) -> PresentationDoc {
        let ab = self.abelianization();
        PresentationDoc {
            generators: self.generators.clone(),
            relators: self.relators.iter().map(|w| self.format_word(w)).collect(),
            abelianization: ab,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentationDoc {
    pub generators: Vec<String>,
    pub relators: Vec<String>,
    pub abelianization: FgAbGroup,
}

/// Free and cyclic reduction.
pub fn reduce_cyclic(w: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    let mut start = 0;
    let mut end = out.len();
    while end - start >= 2 && out[start] == out[end - 1].inverse() {
        start += 1;
        end -= 1;
    }
    out[start..end].to_vec()
}

/// Generators are the edges off a breadth-first spanning tree rooted at
/// `base`; relators are the cell boundaries with tree edges deleted.
pub fn pi1_presentation(x: &TwoComplex, base: usize) -> Result<GroupPresentation> {
    if base >= x.vertices.len() {
        return Err(Error::Structural(format!("base vertex {base} out of range")));
    }
    let (in_tree, seen) = x.spanning_tree(base);
    if let Some(v) = seen.iter().position(|&s| !s) {
        return Err(Error::Domain(format!("complex is disconnected: {} is unreachable", x.vertices[v])));
    }
    let gens: Vec<usize> = (0..x.edges.len()).filter(|&i| !in_tree[i]).collect();
    let relabel = |i: usize| gens.iter().position(|&g| g == i);
    let relators = x
        .cells
        .iter()
        .map(|c| {
            let w: Vec<Letter> =
                c.iter().filter_map(|l| relabel(l.index).map(|index| Letter { index, inv: l.inv })).collect();
            reduce_cyclic(&w)
        })
        .filter(|w| !w.is_empty())
        .collect();
    Ok(GroupPresentation { generators: gens.iter().map(|&i| x.edge_names[i].clone()).collect(), relators })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedges_are_free() {
        for k in 0..=5 {
            let p = pi1_presentation(&TwoComplex::wedge(k), 0).unwrap();
            assert!(p.is_free() && p.generators.len() == k);
            assert_eq!(p.abelianization(), FgAbGroup::free(k));
        }
    }

    #[test]
    fn surfaces() {
        let t = pi1_presentation(&TwoComplex::torus(), 0).unwrap();
        assert_eq!(t.generators.len(), 2);
        assert_eq!(t.abelianization(), FgAbGroup::free(2));
        let k = pi1_presentation(&TwoComplex::klein_bottle(), 0).unwrap();
        assert_eq!(k.abelianization(), FgAbGroup::new(1, vec![2]).unwrap());
        let rp2 = pi1_presentation(&TwoComplex::projective_plane(), 0).unwrap();
        assert_eq!(rp2.abelianization(), FgAbGroup::cyclic(2));
    }

    #[test]
    fn tree_edges_vanish() {
        // triangle with a filled cell: simply connected
        let doc: TwoComplexDoc = serde_json::from_str(
            r#"{"vertices":["x","y","z"],"edges":[[0,1],[1,2],[0,2]],"cells":[["e0","e1","e2~"]]}"#,
        )
        .unwrap();
        let x = TwoComplex::from_doc(&doc).unwrap();
        let p = pi1_presentation(&x, 0).unwrap();
        assert_eq!(p.abelianization(), FgAbGroup::zero());
        assert_eq!(TwoComplex::from_doc(&x.to_doc()).unwrap(), x);
    }

    #[test]
    fn rejects_bad_input() {
        let open_path = r#"{"vertices":["x","y"],"edges":[[0,1]],"cells":[["e0"]]}"#;
        assert!(TwoComplex::from_doc(&serde_json::from_str(open_path).unwrap()).is_err());
        let apart = TwoComplex::new(vec!["x".into(), "y".into()], vec![], vec![], vec![]).unwrap();
        assert!(matches!(pi1_presentation(&apart, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn reductions() {
        let a = Letter { index: 0, inv: false };
        let b = Letter { index: 1, inv: false };
        assert_eq!(reduce_cyclic(&[a, b, b.inverse(), a.inverse()]), vec![]);
        assert_eq!(reduce_cyclic(&[b, a, b.inverse()]), vec![a]);
    }
}
