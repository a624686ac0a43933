//! Hausdorff blowing-up over a finite discrete space: each block of `A` sits
//! over a point of `X` and `C(X)` acts through blockwise scalars.

use serde::{Deserialize, Serialize};

use crate::algebra::spectral::op_norm;
use crate::algebra::{BlockAlgebra, Corner, Element, LeftIdeal, NormEnclosure};
use crate::gelfand::{belongs_to, MorphismData, Preimage, UltrafilterPoint};
use crate::linalg::Subspace;
use crate::scalar::{ExactField, Field, Rational};
use crate::space::{FiniteSpace, Mask};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct BlowingUp {
    pub algebra: BlockAlgebra,
    pub space: FiniteSpace,
    pub block_to_point: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlowingUpDoc {
    pub algebra: BlockAlgebra,
    pub space: FiniteSpace,
    pub block_to_point: Vec<usize>,
}

impl TryFrom<BlowingUpDoc> for BlowingUp {
    type Error = Error;
    fn try_from(d: BlowingUpDoc) -> Result<Self> {
        BlowingUp::new(d.algebra, d.space, d.block_to_point)
    }
}

/// `_U A`, `A_U` and `_U A_U`. All three are the blocks over `U`: the left
/// and right ideals coincide with the two-sided ideal because `C(X)` is
/// central.
#[derive(Clone, Debug)]
pub struct USubalgebra<F> {
    pub open: Mask,
    pub blocks: Vec<usize>,
    pub left: LeftIdeal<F>,
    /// Right ideal `A_U`, stored through its adjoint left ideal.
    pub right: LeftIdeal<F>,
    pub corner: Corner<F>,
}

impl BlowingUp {
    pub fn new(algebra: BlockAlgebra, space: FiniteSpace, block_to_point: Vec<usize>) -> Result<Self> {
        if !space.is_discrete() {
            return Err(Error::Structural("blowing-up needs a discrete base space".into()));
        }
        if block_to_point.len() != algebra.nblocks() {
            return Err(Error::Structural(format!(
                "block_to_point has {} entries, algebra has {} blocks",
                block_to_point.len(),
                algebra.nblocks()
            )));
        }
        if let Some(&p) = block_to_point.iter().find(|&&p| p >= space.npoints()) {
            return Err(Error::Structural(format!("point index {p} out of range")));
        }
        Ok(BlowingUp { algebra, space, block_to_point })
    }

    /// Identity assignment: block `x` over point `x`.
    pub fn canonical(algebra: BlockAlgebra) -> Self {
        let k = algebra.nblocks();
        let names = (0..k).map(|x| algebra.block_name(x)).collect();
        let space = FiniteSpace::discrete(k).with_names(names).expect("one name per point");
        BlowingUp { algebra, space, block_to_point: (0..k).collect() }
    }

    /// `C(X)` as the commutative block algebra on the points of `X`.
    pub fn functions(&self) -> BlockAlgebra {
        BlockAlgebra::commutative(self.space.npoints())
            .and_then(|c| c.with_names(self.space.names().to_vec()))
            .expect("nonempty space")
    }

    /// `C(X) → A`, `f ↦ (f(p(x))·1)_x`.
    pub fn embedding<F: Field>(&self) -> MorphismData<F> {
        MorphismData::central(&self.functions(), &self.algebra, &self.block_to_point).expect("validated assignment")
    }

    /// Points of `X` with no block over them.
    pub fn unreachable_points(&self) -> Vec<usize> {
        (0..self.space.npoints()).filter(|p| !self.block_to_point.contains(p)).collect()
    }

    fn blocks_over(&self, u: Mask) -> Vec<usize> {
        (0..self.algebra.nblocks()).filter(|&x| u >> self.block_to_point[x] & 1 == 1).collect()
    }

    fn indicator<F: Field>(&self, u: Mask) -> Element<F> {
        let funcs: Element<F> = Element {
            blocks: (0..self.space.npoints())
                .map(|p| crate::linalg::Matrix::identity(1).scale(&if u >> p & 1 == 1 { F::one() } else { F::zero() }))
                .collect(),
        };
        self.embedding().apply(&funcs)
    }

    /// Density of `C(X)·A` in `A` (and of `A·C(X)`), by span computation.
    pub fn is_dense<F: Field>(&self) -> (bool, bool) {
        let phi = self.embedding::<F>();
        let units = self.algebra.matrix_units::<F>();
        let mut left = Vec::new();
        let mut right = Vec::new();
        for f in &phi.images {
            for a in &units {
                left.push(f.mul(a));
                right.push(a.mul(f));
            }
        }
        (self.algebra.span(&left).is_full(), self.algebra.span(&right).is_full())
    }

    /// Whether `C(X)` lands in the center of `A`.
    pub fn is_central<F: Field>(&self) -> bool {
        let phi = self.embedding::<F>();
        let units = self.algebra.matrix_units::<F>();
        phi.images.iter().all(|f| units.iter().all(|a| f.commutator(a).is_zero()))
    }

    pub fn u_subalgebra<F: Field>(&self, u: Mask) -> Result<USubalgebra<F>> {
        if !self.space.is_open(u) {
            return Err(Error::Domain(format!("{} is not open", self.space.describe(u))));
        }
        let blocks = self.blocks_over(u);
        let subspaces: Vec<Subspace<F>> = (0..self.algebra.nblocks())
            .map(|x| {
                let n = self.algebra.block_dim(x);
                if blocks.contains(&x) { Subspace::full(n) } else { Subspace::zero(n) }
            })
            .collect();
        let left = LeftIdeal { subspaces: subspaces.clone() };
        Ok(USubalgebra { open: u, blocks, right: left.clone(), corner: Corner { subspaces }, left })
    }

    /// Closed set of points over which `a` is nonzero.
    pub fn support<F: Field>(&self, a: &Element<F>) -> Result<Mask> {
        self.algebra.check_element(a)?;
        Ok(self.algebra.support_blocks(a).iter().fold(0, |m, &x| m | 1 << self.block_to_point[x]))
    }

    /// `f ∈ C_c(X)_+` with `‖f‖ ≤ 1` and `a ≈ af ≈ fa ≈ faf`: the indicator of
    /// the support, which makes all three differences vanish.
    pub fn approx_compact<F: ExactField>(&self, a: &Element<F>, eps: &Rational) -> Result<ApproxCompact<F>> {
        if *eps <= Rational::from_integer(0.into()) {
            return Err(Error::Domain("eps must be positive".into()));
        }
        let supp = self.support(a)?;
        let f = self.indicator::<F>(supp);
        let tol = eps.clone() / Rational::from_integer(1024.into());
        let diffs = [a.sub(&a.mul(&f)), a.sub(&f.mul(a)), a.sub(&f.mul(a).mul(&f))]
            .iter()
            .map(|d| op_norm(d, &tol))
            .collect::<Result<Vec<_>>>()?;
        let ok = diffs.iter().all(|d| d.hi < *eps);
        Ok(ApproxCompact { support: supp, f, diffs, ok })
    }

    /// Checks the characterisations of `_U A`, `A_U`, `_U A_U` by annihilation,
    /// their pairwise orthogonality for disjoint opens and their monotonicity,
    /// over every pair of opens. Returns the failures.
    pub fn check_u_laws<F: Field>(&self) -> Result<Vec<String>> {
        let mut failures = Vec::new();
        let opens = self.space.opens().to_vec();
        let full = self.space.full();
        let units = self.algebra.matrix_units::<F>();
        for &u in &opens {
            let s = self.u_subalgebra::<F>(u)?;
            // f vanishing on U kills exactly the elements over U
            let outside = full & !u;
            let mut sub = outside;
            let mut fs = Vec::new();
            loop {
                fs.push(self.indicator::<F>(sub));
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & outside;
            }
            for a in &units {
                let killed_left = fs.iter().all(|f| f.mul(a).is_zero());
                let killed_right = fs.iter().all(|f| a.mul(f).is_zero());
                if killed_left != s.left.contains(a) {
                    failures.push(format!("left annihilation fails over {}", self.space.describe(u)));
                }
                if killed_right != s.right.contains(&a.adjoint()) {
                    failures.push(format!("right annihilation fails over {}", self.space.describe(u)));
                }
                if (killed_left && killed_right) != s.corner.contains(a) {
                    failures.push(format!("corner characterisation fails over {}", self.space.describe(u)));
                }
            }
            for &v in &opens {
                let t = self.u_subalgebra::<F>(v)?;
                if u & v == 0 {
                    let r = s.right.basis_elements(&self.algebra);
                    let l = t.left.basis_elements(&self.algebra);
                    if r.iter().any(|a| l.iter().any(|b| !a.adjoint().mul(b).is_zero())) {
                        failures.push(format!(
                            "A_U · _V A ≠ 0 for disjoint {} and {}",
                            self.space.describe(u),
                            self.space.describe(v)
                        ));
                    }
                }
                if u & !v == 0 {
                    let inc = s.left.leq(&t.left)? && s.right.leq(&t.right)? && s.corner.subspaces.iter().zip(&t.corner.subspaces).all(|(a, b)| a.is_subspace_of(b));
                    if !inc {
                        failures.push(format!(
                            "U-subalgebras not monotone for {} ⊆ {}",
                            self.space.describe(u),
                            self.space.describe(v)
                        ));
                    }
                }
            }
        }
        failures.dedup();
        Ok(failures)
    }

    /// Compares `Gelfand(A) → X`, computed as the ultrafilter map of
    /// `C(X) → A`, with the point over the block each `ξ` belongs to.
    pub fn factorization<F: Field>(&self, sample: &[UltrafilterPoint<F>]) -> Result<FactorizationReport> {
        let phi = self.embedding::<F>();
        let mut rows = Vec::new();
        let mut failures = Vec::new();
        for (i, p) in sample.iter().enumerate() {
            let block = belongs_to(&self.algebra, p)?;
            let expected = self.block_to_point[block];
            let got = match phi.ultrafilter_map(p)? {
                Preimage::Point(q) => Some(q.block),
                Preimage::NoPreimagePoint { .. } => None,
            };
            if got != Some(expected) {
                failures.push(format!("sample point {i}: Gelfand(A) → X gives {got:?}, expected {expected}"));
            }
            rows.push(FactorRow { sample: i, block, point: self.space.names()[expected].clone() });
        }
        let unreachable = self.unreachable_points().iter().map(|&p| self.space.names()[p].clone()).collect();
        Ok(FactorizationReport { commutes: failures.is_empty(), rows, failures, unreachable_points: unreachable })
    }
}

#[derive(Clone, Debug)]
pub struct ApproxCompact<F> {
    pub support: Mask,
    pub f: Element<F>,
    /// Enclosures of `‖a − af‖`, `‖a − fa‖`, `‖a − faf‖`.
    pub diffs: Vec<NormEnclosure>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorRow {
    pub sample: usize,
    pub block: usize,
    pub point: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorizationReport {
    pub commutes: bool,
    pub rows: Vec<FactorRow>,
    pub failures: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub unreachable_points: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::spectral::default_tol;
    use crate::gelfand::{is_good, sample_points};
    use crate::linalg::Matrix;
    use crate::scalar::{gi, qi, GaussRational};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type G = GaussRational;

    fn m2m3() -> BlowingUp {
        BlowingUp::canonical(BlockAlgebra::new(vec![2, 3]).unwrap())
    }

    #[test]
    fn structure() {
        let b = m2m3();
        assert_eq!(b.is_dense::<G>(), (true, true));
        assert!(b.is_central::<G>());
        let s = b.u_subalgebra::<G>(0b01).unwrap();
        assert_eq!(s.blocks, vec![0]);
        assert_eq!(s.corner.hull(), vec![1]);
        assert!(b.u_subalgebra::<G>(0).unwrap().left.is_zero());
        assert!(b.check_u_laws::<G>().unwrap().is_empty());
    }

    #[test]
    fn supports_and_approximation() {
        let b = m2m3();
        let a: Element<G> = b.algebra.unit(0, 0, 1);
        assert_eq!(b.support(&a).unwrap(), 0b01);
        assert_eq!(b.support(&b.algebra.zero::<G>()).unwrap(), 0);
        let ap = b.approx_compact(&a, &qi(1)).unwrap();
        assert!(ap.ok && ap.diffs.iter().all(|d| d.hi == qi(0)));
        assert!(b.approx_compact(&b.algebra.zero::<G>(), &qi(1)).unwrap().f.is_zero());
    }

    #[test]
    fn factorization_commutes() {
        let b = m2m3();
        let sample = sample_points::<G>(&b.algebra, 12, &mut ChaCha8Rng::seed_from_u64(0));
        let r = b.factorization(&sample).unwrap();
        assert!(r.commutes, "{:?}", r.failures);
        assert!(is_good(&b.embedding::<G>(), &sample).unwrap().good);
        // a point of X with nothing over it is reported
        let wide = BlowingUp::new(b.algebra.clone(), FiniteSpace::discrete(3), vec![0, 1]).unwrap();
        assert_eq!(wide.factorization(&sample).unwrap().unreachable_points, vec!["p2".to_string()]);
    }

    #[test]
    fn norm_is_max_over_blocks() {
        let b = m2m3();
        let a = Element {
            blocks: vec![Matrix::identity(2).scale(&gi(2)), Matrix::identity(3).scale(&gi(3))],
        };
        let e = op_norm(&a, &default_tol()).unwrap();
        assert!(e.contains(&qi(3)));
        assert!(BlowingUp::new(b.algebra.clone(), FiniteSpace::sierpinski(), vec![0, 1]).is_err());
    }
}
