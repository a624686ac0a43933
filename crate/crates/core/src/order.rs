//! Finite meet-semilattices, filters and ultrafilters.
//!
//! `leq(a, b)` reads "a is below b"; filters are upward closed, so in a
//! lattice of open sets they pass to supersets. The designated `zero` is the
//! element no filter may contain.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default bound on candidate filters examined by ultrafilter enumeration.
pub const DEFAULT_FILTER_BOUND: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SemiLatticeDoc", into = "SemiLatticeDoc")]
pub struct SemiLattice {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    meet: Vec<Vec<usize>>,
    zero: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemiLatticeDoc {
    pub elements: Vec<String>,
    pub leq: Vec<[usize; 2]>,
    pub zero: usize,
}

impl TryFrom<SemiLatticeDoc> for SemiLattice {
    type Error = Error;
    fn try_from(d: SemiLatticeDoc) -> Result<Self> {
        SemiLattice::from_pairs(d.elements, &d.leq, d.zero)
    }
}

impl From<SemiLattice> for SemiLatticeDoc {
    fn from(l: SemiLattice) -> Self {
        let n = l.len();
        let leq = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && l.leq[i][j])
            .map(|(i, j)| [i, j])
            .collect();
        SemiLatticeDoc { elements: l.names, leq, zero: l.zero }
    }
}

/// Outcome of closing a set under the filter axioms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterOutcome {
    Filter(FilterRep),
    /// The closure would contain the zero element.
    Degenerate,
}

impl FilterOutcome {
    pub fn filter(self) -> Option<FilterRep> {
        match self {
            FilterOutcome::Filter(f) => Some(f),
            FilterOutcome::Degenerate => None,
        }
    }
}

/// A set of lattice elements, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FilterRep {
    pub members: Vec<usize>,
}

impl FilterRep {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        FilterRep { members }
    }

    pub fn contains(&self, e: usize) -> bool {
        self.members.binary_search(&e).is_ok()
    }

    pub fn is_subset(&self, o: &FilterRep) -> bool {
        self.members.iter().all(|&m| o.contains(m))
    }
}

impl SemiLattice {
    /// From a generating set of order pairs `(a, b)` meaning `a ≤ b`;
    /// reflexive and transitive closure is taken, antisymmetry and the
    /// existence of all binary meets are checked.
    #[allow(clippy::needless_range_loop)]
    pub fn from_pairs(names: Vec<String>, pairs: &[[usize; 2]], zero: usize) -> Result<Self> {
        let n = names.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &[a, b] in pairs {
            if a >= n || b >= n {
                return Err(Error::Structural(format!("order pair ({a}, {b}) out of range")));
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        SemiLattice::from_relation(names, leq, zero)
    }

    /// From a complete order predicate.
    pub fn from_order_fn(names: Vec<String>, zero: usize, le: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = names.len();
        let leq = (0..n).map(|i| (0..n).map(|j| le(i, j)).collect()).collect();
        SemiLattice::from_relation(names, leq, zero)
    }

    fn from_relation(names: Vec<String>, leq: Vec<Vec<bool>>, zero: usize) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::Structural("semilattice needs at least one element".into()));
        }
        if zero >= n {
            return Err(Error::Structural(format!("zero index {zero} out of range")));
        }
        for i in 0..n {
            if !leq[i][i] {
                return Err(Error::Structural(format!("order is not reflexive at {i}")));
            }
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::Structural(format!("order is not antisymmetric at ({i}, {j})")));
                }
                for k in 0..n {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        return Err(Error::Structural(format!("order is not transitive at ({i}, {j}, {k})")));
                    }
                }
            }
        }
        let mut meet = vec![vec![0; n]; n];
        for a in 0..n {
            for b in a..n {
                let lower: Vec<usize> = (0..n).filter(|&c| leq[c][a] && leq[c][b]).collect();
                let glb = lower.iter().copied().find(|&c| lower.iter().all(|&d| leq[d][c]));
                let Some(g) = glb else {
                    return Err(Error::Structural(format!(
                        "elements {a} and {b} have no greatest lower bound"
                    )));
                };
                meet[a][b] = g;
                meet[b][a] = g;
            }
        }
        Ok(SemiLattice { names, leq, meet, zero })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    pub fn zero(&self) -> usize {
        self.zero
    }
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    /// Greatest element, when one exists.
    pub fn top(&self) -> Option<usize> {
        (0..self.len()).find(|&t| (0..self.len()).all(|a| self.leq[a][t]))
    }

    pub fn meet_all(&self, xs: &[usize]) -> Option<usize> {
        let (&first, rest) = xs.split_first()?;
        Some(rest.iter().fold(first, |acc, &x| self.meet[acc][x]))
    }

    /// `{a | b ≤ a}`
    pub fn up_set(&self, b: usize) -> FilterRep {
        FilterRep::new((0..self.len()).filter(|&a| self.leq[b][a]).collect())
    }

    fn check_indices(&self, s: &[usize]) -> Result<()> {
        match s.iter().find(|&&e| e >= self.len()) {
            Some(e) => Err(Error::Structural(format!("element index {e} out of range"))),
            None => Ok(()),
        }
    }

    pub fn is_filter(&self, s: &FilterRep) -> Result<bool> {
        self.check_indices(&s.members)?;
        if s.members.is_empty() || s.contains(self.zero) {
            return Ok(false);
        }
        for &a in &s.members {
            for &b in &s.members {
                if !s.contains(self.meet[a][b]) {
                    return Ok(false);
                }
            }
            for b in 0..self.len() {
                if self.leq[a][b] && !s.contains(b) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Smallest filter containing `gens`. In a finite semilattice this is the
    /// up-set of the meet of the generators.
    pub fn generate_filter(&self, gens: &[usize]) -> Result<FilterOutcome> {
        self.check_indices(gens)?;
        let m = self
            .meet_all(gens)
            .ok_or_else(|| Error::Structural("generate_filter needs at least one generator".into()))?;
        let f = self.up_set(m);
        Ok(if f.contains(self.zero) { FilterOutcome::Degenerate } else { FilterOutcome::Filter(f) })
    }

    /// All maximal filters, ordered by generator index. Every filter of a
    /// finite semilattice is principal, so the candidates are the up-sets of
    /// elements not below zero; the maximal ones come from minimal generators.
    pub fn enumerate_ultrafilters(&self, bound: usize) -> Result<Vec<FilterRep>> {
        let candidates: Vec<usize> = (0..self.len()).filter(|&m| !self.leq[m][self.zero]).collect();
        let mut out = Vec::new();
        for (explored, &m) in candidates.iter().enumerate() {
            if explored >= bound {
                return Err(Error::Resource {
                    msg: format!("ultrafilter search exceeded {bound} candidate filters"),
                    partial: format!("{} ultrafilters found before truncation", out.len()),
                });
            }
            let minimal = candidates.iter().all(|&c| c == m || !self.leq[c][m]);
            if minimal {
                out.push(self.up_set(m));
            }
        }
        Ok(out)
    }

    /// True when `f` is a filter with no strictly larger filter.
    pub fn is_ultrafilter(&self, f: &FilterRep) -> Result<bool> {
        if !self.is_filter(f)? {
            return Ok(false);
        }
        for e in (0..self.len()).filter(|&e| !f.contains(e)) {
            let mut g = f.members.clone();
            g.push(e);
            if let FilterOutcome::Filter(_) = self.generate_filter(&g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Lexicographically least ultrafilter (by sorted member indices)
    /// containing `f`.
    pub fn extend_to_ultrafilter(&self, f: &FilterRep) -> Result<FilterRep> {
        if !self.is_filter(f)? {
            return Err(Error::Structural("extend_to_ultrafilter needs a filter".into()));
        }
        self.enumerate_ultrafilters(DEFAULT_FILTER_BOUND)?
            .into_iter()
            .filter(|u| f.is_subset(u))
            .min()
            .ok_or_else(|| Error::Structural("filter has no ultrafilter extension".into()))
    }

    pub fn is_principal(&self, f: &FilterRep) -> Option<usize> {
        let m = self.meet_all(&f.members)?;
        (f.contains(m) && self.up_set(m) == *f).then_some(m)
    }
}

/// A meet- and order-preserving map between semilattices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeHom {
    pub source: SemiLattice,
    pub target: SemiLattice,
    pub map: Vec<usize>,
}

impl LatticeHom {
    pub fn new(source: SemiLattice, target: SemiLattice, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::Structural("lattice map must be defined on every source element".into()));
        }
        if map.iter().any(|&m| m >= target.len()) {
            return Err(Error::Structural("lattice map image out of range".into()));
        }
        for a in 0..source.len() {
            for b in 0..source.len() {
                if map[source.meet(a, b)] != target.meet(map[a], map[b]) {
                    return Err(Error::Structural(format!("lattice map does not preserve meet of {a}, {b}")));
                }
                if source.leq(a, b) && !target.leq(map[a], map[b]) {
                    return Err(Error::Structural(format!("lattice map does not preserve order at {a}, {b}")));
                }
            }
        }
        Ok(LatticeHom { source, target, map })
    }

    pub fn identity(l: &SemiLattice) -> Self {
        LatticeHom { source: l.clone(), target: l.clone(), map: (0..l.len()).collect() }
    }

    pub fn compose(&self, first: &LatticeHom) -> Result<LatticeHom> {
        if first.target != self.source {
            return Err(Error::Structural("composition of incompatible lattice maps".into()));
        }
        let map = first.map.iter().map(|&m| self.map[m]).collect();
        Ok(LatticeHom { source: first.source.clone(), target: self.target.clone(), map })
    }

    pub fn pushforward_filter(&self, f: &FilterRep) -> Result<FilterOutcome> {
        if !self.source.is_filter(f)? {
            return Err(Error::Structural("pushforward needs a filter of the source".into()));
        }
        let image: Vec<usize> = f.members.iter().map(|&m| self.map[m]).collect();
        self.target.generate_filter(&image)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::FiniteSpace;

    fn discrete3() -> (FiniteSpace, SemiLattice) {
        let x = FiniteSpace::discrete(3);
        let l = x.open_lattice();
        (x, l)
    }

    #[test]
    fn neighbourhood_filter_and_counterexamples() {
        let (x, l) = discrete3();
        let a_filter = FilterRep::new(x.opens_containing(0));
        assert!(l.is_filter(&a_filter).unwrap());
        assert!(!l.is_filter(&FilterRep::new(vec![x.open_index(0).unwrap()])).unwrap());
        let a = x.open_index(0b001).unwrap();
        let b = x.open_index(0b010).unwrap();
        assert!(!l.is_filter(&FilterRep::new(vec![a, b])).unwrap());
        assert!(l.is_filter(&FilterRep::new(vec![99])).is_err());
    }

    #[test]
    fn generation_examples() {
        let (x, l) = discrete3();
        let ab = x.open_index(0b011).unwrap();
        let top = x.open_index(0b111).unwrap();
        assert_eq!(l.generate_filter(&[ab]).unwrap(), FilterOutcome::Filter(FilterRep::new(vec![ab, top])));
        let a = x.open_index(0b001).unwrap();
        let b = x.open_index(0b010).unwrap();
        assert_eq!(l.generate_filter(&[a, b]).unwrap(), FilterOutcome::Degenerate);
        assert_eq!(l.generate_filter(&[top]).unwrap(), FilterOutcome::Filter(FilterRep::new(vec![top])));
    }

    #[test]
    fn ultrafilters_of_discrete_three_point() {
        let (x, l) = discrete3();
        let us = l.enumerate_ultrafilters(DEFAULT_FILTER_BOUND).unwrap();
        assert_eq!(us.len(), 3);
        for u in &us {
            assert!(l.is_ultrafilter(u).unwrap());
            assert_eq!(x.ultrafilter_limits(u).unwrap().len(), 1);
        }
        assert!(matches!(l.enumerate_ultrafilters(1), Err(Error::Resource { .. })));
    }

    #[test]
    fn extension_tie_break_picks_first_point() {
        let (x, l) = discrete3();
        let ab = x.open_index(0b011).unwrap();
        let f = l.generate_filter(&[ab]).unwrap().filter().unwrap();
        let u = l.extend_to_ultrafilter(&f).unwrap();
        assert_eq!(l.is_principal(&u), x.open_index(0b001));
        assert_eq!(l.extend_to_ultrafilter(&u).unwrap(), u);
    }

    #[test]
    fn one_element_plus_zero() {
        let l = SemiLattice::from_pairs(vec!["0".into(), "1".into()], &[[0, 1]], 0).unwrap();
        assert_eq!(l.enumerate_ultrafilters(10).unwrap(), vec![FilterRep::new(vec![1])]);
    }

    #[test]
    fn rejects_non_lattice_orders() {
        let names = || (0..3).map(|i| i.to_string()).collect::<Vec<_>>();
        // two incomparable minimal elements above nothing: no meet
        assert!(SemiLattice::from_pairs(names(), &[[0, 2], [1, 2]], 2).is_err());
        assert!(SemiLattice::from_pairs(names(), &[[0, 1], [1, 0]], 0).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let (_, l) = discrete3();
        let s = serde_json::to_string(&l).unwrap();
        let back: SemiLattice = serde_json::from_str(&s).unwrap();
        assert_eq!(back, l);
    }
}
