//! Finitely presented sublattices of the left-ideal lattice, filter
//! bicommutants and spectral equivalence.

use serde::Serialize;

use super::{BlockAlgebra, LeftIdeal};
use crate::linalg::Subspace;
use crate::order::{FilterRep, SemiLattice};
use crate::scalar::Field;
use crate::{Error, Result};

/// Ideals spanned by subsets of generator lines, closed under meet, with
/// `{0}` and `A` included. Elements are ordered by dimension, ties broken by
/// first appearance.
#[derive(Clone, Debug)]
pub struct PresentedLattice<F> {
    pub algebra: BlockAlgebra,
    pub ideals: Vec<LeftIdeal<F>>,
    pub lattice: SemiLattice,
}

/// Closure of `∪_{L∈ξ} L^⊥`, or `NotProper` when that closure is all of `A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bicommutant<F: Field + Serialize> {
    Proper(LeftIdeal<F>),
    NotProper,
}

impl<F: Field + Serialize> Bicommutant<F> {
    pub fn ideal(&self) -> Option<&LeftIdeal<F>> {
        match self {
            Bicommutant::Proper(l) => Some(l),
            Bicommutant::NotProper => None,
        }
    }
}

/// Bicommutant of a family of ideals: blockwise sum of the complements.
pub fn bicommutant_of<F: Field + Serialize>(alg: &BlockAlgebra, members: &[LeftIdeal<F>]) -> Result<Bicommutant<F>> {
    let mut acc = LeftIdeal::zero(alg);
    for l in members {
        acc = acc.join(&l.commutant())?;
    }
    Ok(if acc.is_full() { Bicommutant::NotProper } else { Bicommutant::Proper(acc) })
}

pub const MAX_GENERATORS: usize = 16;

impl<F: Field + Serialize> PresentedLattice<F> {
    /// `gens` are lines `(block, vector)`.
    pub fn from_generators(alg: &BlockAlgebra, gens: &[(usize, Vec<F>)]) -> Result<Self> {
        if gens.len() > MAX_GENERATORS {
            return Err(Error::Resource {
                msg: format!("at most {MAX_GENERATORS} generators are enumerated"),
                partial: String::new(),
            });
        }
        for (x, v) in gens {
            LeftIdeal::line(alg, *x, v.clone())?;
        }
        let mut ideals: Vec<LeftIdeal<F>> = Vec::new();
        let push = |l: LeftIdeal<F>, ideals: &mut Vec<LeftIdeal<F>>| {
            if !ideals.contains(&l) {
                ideals.push(l);
            }
        };
        for mask in 0u32..(1 << gens.len()) {
            let mut vs: Vec<Vec<Vec<F>>> = vec![vec![]; alg.nblocks()];
            for (g, (x, v)) in gens.iter().enumerate() {
                if mask >> g & 1 == 1 {
                    vs[*x].push(v.clone());
                }
            }
            let subspaces = vs.iter().enumerate().map(|(x, s)| Subspace::span(alg.block_dim(x), s)).collect();
            push(LeftIdeal { subspaces }, &mut ideals);
        }
        push(LeftIdeal::full(alg), &mut ideals);
        loop {
            let n = ideals.len();
            for i in 0..n {
                for j in 0..n {
                    let m = ideals[i].meet(&ideals[j])?;
                    push(m, &mut ideals);
                }
            }
            if ideals.len() == n {
                break;
            }
        }
        let mut order: Vec<usize> = (0..ideals.len()).collect();
        order.sort_by_key(|&i| (ideals[i].dim(), i));
        let ideals: Vec<LeftIdeal<F>> = order.into_iter().map(|i| ideals[i].clone()).collect();
        Self::from_ideals(alg, ideals)
    }

    /// Every ideal of a commutative algebra `C(X)`: subsets of blocks.
    pub fn all_commutative(alg: &BlockAlgebra) -> Result<Self> {
        if !alg.is_commutative() {
            return Err(Error::Structural("algebra is not commutative".into()));
        }
        let gens: Vec<(usize, Vec<F>)> = (0..alg.nblocks()).map(|x| (x, vec![F::one()])).collect();
        Self::from_generators(alg, &gens)
    }

    /// Uses the given ideals (which must be meet-closed) in the given order.
    pub fn from_ideals(alg: &BlockAlgebra, ideals: Vec<LeftIdeal<F>>) -> Result<Self> {
        let zero = ideals
            .iter()
            .position(LeftIdeal::is_zero)
            .ok_or_else(|| Error::Structural("presented lattice must contain {0}".into()))?;
        for a in &ideals {
            for b in &ideals {
                if !ideals.contains(&a.meet(b)?) {
                    return Err(Error::Structural("presented ideals are not closed under meet".into()));
                }
            }
        }
        let names = ideals.iter().enumerate().map(|(i, l)| describe(l, i)).collect();
        let lattice = SemiLattice::from_order_fn(names, zero, |i, j| ideals[i].leq(&ideals[j]).unwrap_or(false))?;
        Ok(PresentedLattice { algebra: alg.clone(), ideals, lattice })
    }

    pub fn index_of(&self, l: &LeftIdeal<F>) -> Option<usize> {
        self.ideals.iter().position(|m| m == l)
    }

    pub fn members(&self, f: &FilterRep) -> Vec<LeftIdeal<F>> {
        f.members.iter().map(|&i| self.ideals[i].clone()).collect()
    }

    pub fn filter_bicommutant(&self, f: &FilterRep) -> Result<Bicommutant<F>> {
        if !self.lattice.is_filter(f)? {
            return Err(Error::Structural("bicommutant needs a filter of the presented lattice".into()));
        }
        bicommutant_of(&self.algebra, &self.members(f))
    }

    /// Mutual domination of the support sets `Y_L`, quantifying over members.
    pub fn spectrally_equivalent(&self, f1: &FilterRep, f2: &FilterRep) -> Result<bool> {
        for f in [f1, f2] {
            if !self.lattice.is_filter(f)? {
                return Err(Error::Structural("spectral equivalence needs filters".into()));
            }
        }
        let dominated = |a: &FilterRep, b: &FilterRep| {
            a.members.iter().all(|&i| {
                let yi = self.ideals[i].support_blocks();
                b.members.iter().any(|&j| self.ideals[j].support_blocks().iter().all(|y| yi.contains(y)))
            })
        };
        Ok(dominated(f1, f2) && dominated(f2, f1))
    }

    /// Blocks `y` with `rep_y(L) ≠ 0` for every member `L`.
    pub fn nonvanishing_blocks(&self, f: &FilterRep) -> Vec<usize> {
        (0..self.algebra.nblocks())
            .filter(|&y| f.members.iter().all(|&i| !self.ideals[i].subspaces[y].is_zero()))
            .collect()
    }
}

fn describe<F: Field>(l: &LeftIdeal<F>, i: usize) -> String {
    if l.is_zero() {
        "0".into()
    } else if l.is_full() {
        "A".into()
    } else {
        format!("L{i}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::DEFAULT_FILTER_BOUND;
    use crate::scalar::{gi, GaussRational};

    type G = GaussRational;

    fn m2_sublattice() -> PresentedLattice<G> {
        let m2 = BlockAlgebra::new(vec![2]).unwrap();
        let gens = vec![(0, vec![gi(1), gi(0)]), (0, vec![gi(0), gi(1)]), (0, vec![gi(1), gi(1)])];
        PresentedLattice::from_generators(&m2, &gens).unwrap()
    }

    #[test]
    fn m2_sublattice_shape() {
        let p = m2_sublattice();
        assert_eq!(p.ideals.len(), 5);
        assert!(p.ideals[0].is_zero() && p.ideals[4].is_full());
        let us = p.lattice.enumerate_ultrafilters(DEFAULT_FILTER_BOUND).unwrap();
        assert_eq!(us.len(), 3);
        for (k, u) in us.iter().enumerate() {
            assert_eq!(p.lattice.is_principal(u), Some(k + 1));
        }
    }

    #[test]
    fn principal_ultrafilter_bicommutant() {
        let p = m2_sublattice();
        let u = p.lattice.up_set(1);
        let b = p.filter_bicommutant(&u).unwrap();
        assert_eq!(b, Bicommutant::Proper(p.ideals[1].commutant()));
        assert_eq!(b.ideal().unwrap(), &p.ideals[2]);
    }

    #[test]
    fn commutative_point_filter_gives_vanishing_ideal() {
        let a = BlockAlgebra::commutative(3).unwrap();
        let p = PresentedLattice::<G>::all_commutative(&a).unwrap();
        assert_eq!(p.ideals.len(), 8);
        let point = LeftIdeal::line(&a, 1, vec![gi(1)]).unwrap();
        let u = p.lattice.up_set(p.index_of(&point).unwrap());
        let b = p.filter_bicommutant(&u).unwrap();
        // functions vanishing at point 1
        assert_eq!(b.ideal().unwrap().support_blocks(), vec![0, 2]);
        // one-point space: the only filter is {A}; its bicommutant is {0}
        let one = BlockAlgebra::commutative(1).unwrap();
        let p1 = PresentedLattice::<G>::all_commutative(&one).unwrap();
        let b1 = p1.filter_bicommutant(&p1.lattice.up_set(1)).unwrap();
        assert!(b1.ideal().unwrap().is_zero());
    }

    #[test]
    fn spectral_equivalence() {
        let a = BlockAlgebra::new(vec![2, 1]).unwrap();
        let gens = vec![(0, vec![gi(1), gi(0)]), (0, vec![gi(0), gi(1)]), (1, vec![gi(1)])];
        let p = PresentedLattice::<G>::from_generators(&a, &gens).unwrap();
        let l = |x: usize, v: Vec<G>| p.index_of(&LeftIdeal::line(&a, x, v).unwrap()).unwrap();
        let f1 = p.lattice.up_set(l(0, vec![gi(1), gi(0)]));
        let f2 = p.lattice.up_set(l(0, vec![gi(0), gi(1)]));
        let f3 = p.lattice.up_set(l(1, vec![gi(1)]));
        assert!(p.spectrally_equivalent(&f1, &f2).unwrap());
        assert!(!p.spectrally_equivalent(&f1, &f3).unwrap());
        assert!(p.spectrally_equivalent(&f3, &f3).unwrap());
    }
}
