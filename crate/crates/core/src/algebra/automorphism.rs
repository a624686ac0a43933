//! Automorphisms of block algebras: a permutation of equal-sized blocks with
//! a conjugating matrix per block, `α(a)_{π(i)} = u_i a_i u_i^{-1}`.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::spectral::{matrix_norm, op_norm, sqrt_enclosure, NormEnclosure};
use super::{BlockAlgebra, Element};
use crate::linalg::Matrix;
use crate::scalar::{ExactField, Field, Rational};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Automorphism<F> {
    pub perm: Vec<usize>,
    pub conjugators: Vec<Matrix<F>>,
}

impl<F: Field> Automorphism<F> {
    /// Checks that `perm` permutes blocks of equal size and that each
    /// conjugator satisfies `u u* = c·1` with `c > 0`.
    pub fn new(alg: &BlockAlgebra, perm: Vec<usize>, conjugators: Vec<Matrix<F>>) -> Result<Self> {
        let k = alg.nblocks();
        if perm.len() != k || conjugators.len() != k {
            return Err(Error::Structural(format!("automorphism needs {k} permutation entries and conjugators")));
        }
        let mut seen = vec![false; k];
        for (i, &p) in perm.iter().enumerate() {
            if p >= k || seen[p] {
                return Err(Error::Structural("block map is not a permutation".into()));
            }
            seen[p] = true;
            if alg.block_dim(p) != alg.block_dim(i) {
                return Err(Error::Structural(format!("block {i} and block {p} have different sizes")));
            }
        }
        for (i, u) in conjugators.iter().enumerate() {
            let n = alg.block_dim(i);
            if u.nrows() != n || u.ncols() != n {
                return Err(Error::Structural(format!("conjugator {i} must be {n}x{n}")));
            }
            let uu = u.mul_mat(&u.adjoint());
            let c = uu[(0, 0)].clone();
            if uu != Matrix::identity(n).scale(&c) || !c.is_real() || c.is_negligible() {
                return Err(Error::Structural(format!("conjugator {i} is not unitary up to a scalar")));
            }
        }
        Ok(Automorphism { perm, conjugators })
    }

    pub fn validate(&self, alg: &BlockAlgebra) -> Result<()> {
        Automorphism::new(alg, self.perm.clone(), self.conjugators.clone()).map(|_| ())
    }

    pub fn identity(alg: &BlockAlgebra) -> Self {
        Automorphism {
            perm: (0..alg.nblocks()).collect(),
            conjugators: alg.dims().iter().map(|&n| Matrix::identity(n)).collect(),
        }
    }

    /// Pure block permutation.
    pub fn permutation(alg: &BlockAlgebra, perm: Vec<usize>) -> Result<Self> {
        let conj = alg.dims().iter().map(|&n| Matrix::identity(n)).collect();
        Automorphism::new(alg, perm, conj)
    }

    /// Inner automorphism `Ad(u)` of a single-block algebra.
    pub fn inner(alg: &BlockAlgebra, us: Vec<Matrix<F>>) -> Result<Self> {
        Automorphism::new(alg, (0..alg.nblocks()).collect(), us)
    }

    fn scalar(&self, i: usize) -> F {
        let u = &self.conjugators[i];
        u.mul_mat(&u.adjoint())[(0, 0)].clone()
    }

    pub fn apply(&self, a: &Element<F>) -> Element<F> {
        let mut blocks = a.blocks.clone();
        for (i, u) in self.conjugators.iter().enumerate() {
            // u^{-1} = u* / c
            let inv = u.adjoint().scale(&(F::one() / self.scalar(i)));
            blocks[self.perm[i]] = u.mul_mat(&a.blocks[i]).mul_mat(&inv);
        }
        Element { blocks }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &Automorphism<F>) -> Automorphism<F> {
        let k = self.perm.len();
        let perm = (0..k).map(|i| self.perm[first.perm[i]]).collect();
        let conjugators =
            (0..k).map(|i| self.conjugators[first.perm[i]].mul_mat(&first.conjugators[i])).collect();
        Automorphism { perm, conjugators }
    }

    pub fn inverse(&self) -> Automorphism<F> {
        let k = self.perm.len();
        let mut perm = vec![0; k];
        let mut conjugators = self.conjugators.clone();
        for i in 0..k {
            perm[self.perm[i]] = i;
            conjugators[self.perm[i]] = self.conjugators[i].adjoint();
        }
        Automorphism { perm, conjugators }
    }

    /// Equality as maps, checked on matrix units.
    pub fn same_map(&self, o: &Automorphism<F>, alg: &BlockAlgebra) -> bool {
        alg.matrix_units::<F>().iter().all(|e| self.apply(e) == o.apply(e))
    }

    pub fn is_identity(&self, alg: &BlockAlgebra) -> bool {
        self.same_map(&Automorphism::identity(alg), alg)
    }

    /// Whether `α(s) = s` for every `s` in the list.
    pub fn fixes_all(&self, set: &[Element<F>]) -> bool {
        set.iter().all(|s| self.apply(s) == *s)
    }
}

/// The Pythagorean rotation `[[3/5, 4/5], [-4/5, 3/5]]` acting on coordinates
/// `p, p+1` of `F^n`.
pub fn pythagorean_rotation<F: Field>(n: usize, p: usize) -> Matrix<F> {
    let mut r = Matrix::identity(n);
    let c = F::from_i64(3) / F::from_i64(5);
    let s = F::from_i64(4) / F::from_i64(5);
    r[(p, p)] = c.clone();
    r[(p, p + 1)] = s.clone();
    r[(p + 1, p)] = -s;
    r[(p + 1, p + 1)] = c;
    r
}

/// Deterministic norm-one test elements: matrix units, their symmetrised
/// partial permutations, rotated units and block sign patterns.
pub fn candidate_net<F: Field>(alg: &BlockAlgebra) -> Vec<Element<F>> {
    let mut net = Vec::new();
    for (x, &n) in alg.dims().iter().enumerate() {
        for r in 0..n {
            for c in 0..n {
                net.push(alg.unit(x, r, c));
                if r < c {
                    net.push(alg.unit::<F>(x, r, c).add(&alg.unit(x, c, r)));
                }
            }
        }
        for p in 0..n.saturating_sub(1) {
            let rot = pythagorean_rotation::<F>(n, p);
            for r in 0..n {
                for c in 0..n {
                    let m = rot.mul_mat(&Matrix::unit(n, r, c)).mul_mat(&rot.adjoint());
                    net.push(alg.embed(x, m).expect("shape matches"));
                }
            }
        }
    }
    let k = alg.nblocks().min(12);
    for mask in 1u32..(1 << k) {
        let mut e = alg.one::<F>();
        for x in 0..k {
            if mask >> x & 1 == 1 {
                e.blocks[x] = e.blocks[x].neg();
            }
        }
        net.push(e);
    }
    net
}

impl<F: ExactField> Automorphism<F> {
    /// Enclosure of `sup_{‖a‖=1} ‖α(a) − a‖`. The lower bound is the best
    /// candidate in [`candidate_net`]. The upper bound is 2 for any moved
    /// block and `2·min_μ ‖u − μ‖ / √c` for a fixed block with conjugator `u`,
    /// since `‖u a u^{-1} − a‖ ≤ 2‖u − μ‖‖a‖‖u^{-1}‖`.
    pub fn uniform_distance(&self, alg: &BlockAlgebra, tol: &Rational) -> Result<NormEnclosure> {
        self.validate(alg)?;
        let two = Rational::from_integer(2.into());
        let inner_tol = tol.clone() / Rational::from_integer(4.into());
        let mut lo = Rational::zero();
        for a in candidate_net::<F>(alg) {
            let d = op_norm(&self.apply(&a).sub(&a), &inner_tol)?;
            lo = lo.max(d.lo);
        }
        let mut hi = Rational::zero();
        for (i, u) in self.conjugators.iter().enumerate() {
            if self.perm[i] != i {
                hi = two.clone();
                continue;
            }
            let n = u.nrows();
            let c = self.scalar(i).re();
            let (sqrt_c_lo, _) = sqrt_enclosure(&c, &inner_tol);
            let mut mus: Vec<F> = (0..n).map(|j| u[(j, j)].clone()).collect();
            mus.push(u.trace() / F::from_i64(n as i64));
            let mut best = two.clone();
            for mu in mus {
                let d = u.sub_mat(&Matrix::identity(n).scale(&mu));
                let e = matrix_norm(&d, &inner_tol)?;
                if sqrt_c_lo.is_positive() {
                    best = best.min(two.clone() * e.hi / sqrt_c_lo.clone());
                }
            }
            hi = hi.max(best);
        }
        let lo = lo.min(hi.clone());
        let flagged = hi.clone() - lo.clone() > *tol;
        Ok(NormEnclosure { lo, hi, flagged })
    }
}

/// Pythagorean-triple test unitaries `R_p` for the block sizes of `alg`.
pub fn rotation_family<F: Field>(n: usize) -> Vec<Matrix<F>> {
    (0..n.saturating_sub(1)).map(|p| pythagorean_rotation(n, p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::spectral::default_tol;
    use crate::scalar::{gi, qi, GaussRational};

    type G = GaussRational;

    #[test]
    fn validation() {
        let a = BlockAlgebra::new(vec![2, 3]).unwrap();
        assert!(Automorphism::<G>::permutation(&a, vec![1, 0]).is_err());
        let bad = Matrix::from_rows(&[vec![gi(1), gi(1)], vec![gi(0), gi(1)]], 2);
        assert!(Automorphism::new(&a, vec![0, 1], vec![bad, Matrix::identity(3)]).is_err());
    }

    #[test]
    fn compose_and_inverse() {
        let a = BlockAlgebra::new(vec![2, 2]).unwrap();
        let r = pythagorean_rotation::<G>(2, 0);
        let alpha = Automorphism::new(&a, vec![1, 0], vec![r.clone(), Matrix::identity(2)]).unwrap();
        assert!(alpha.compose(&alpha.inverse()).is_identity(&a));
        let x = a.unit::<G>(0, 0, 1).add(&a.unit(1, 1, 1));
        assert_eq!(alpha.compose(&alpha).apply(&x), alpha.apply(&alpha.apply(&x)));
        assert_eq!(alpha.apply(&x.mul(&x)), alpha.apply(&x).mul(&alpha.apply(&x)));
    }

    #[test]
    fn distance_examples() {
        let tol = default_tol();
        let m2 = BlockAlgebra::new(vec![2]).unwrap();
        let id = Automorphism::<G>::identity(&m2);
        assert_eq!(id.uniform_distance(&m2, &tol).unwrap(), NormEnclosure::exact(qi(0)));
        let d = Matrix::diag(&[gi(1), gi(-1)]);
        let ad = Automorphism::inner(&m2, vec![d]).unwrap();
        assert_eq!(ad.uniform_distance(&m2, &tol).unwrap(), NormEnclosure::exact(qi(2)));
        let m22 = BlockAlgebra::new(vec![2, 2]).unwrap();
        let swap = Automorphism::<G>::permutation(&m22, vec![1, 0]).unwrap();
        assert_eq!(swap.uniform_distance(&m22, &tol).unwrap(), NormEnclosure::exact(qi(2)));
    }

    #[test]
    fn small_rotation_has_small_distance() {
        let m2 = BlockAlgebra::new(vec![2]).unwrap();
        // (20 + 21 i)/29 is a unit Gaussian rational
        let z: G = "20/29+21/29i".parse().unwrap();
        let u = Matrix::diag(&[gi(1), z]);
        let e = Automorphism::inner(&m2, vec![u]).unwrap().uniform_distance(&m2, &default_tol()).unwrap();
        assert!(e.lo <= e.hi && e.hi < qi(2));
    }
}
