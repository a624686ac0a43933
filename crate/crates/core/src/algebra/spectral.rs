//! Functional calculus for self-adjoint elements over exact fields, operator
//! norm enclosures and positivity.
//!
//! Eigenvalues are the real roots of the characteristic polynomial. They are
//! isolated with Sturm sequences over the rationals; a root `a/b` in lowest
//! terms has `b` dividing the leading coefficient `L` of the primitive integer
//! square-free part, so once an isolating interval is shorter than `1/L` the
//! single candidate `k/L` inside it decides rationality exactly.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{BlockAlgebra, Element};
use crate::linalg::{Matrix, Subspace};
use crate::scalar::{q, rational_str, ExactField, Field, Rational};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Requires rational spectrum; results are exact.
    #[default]
    Exact,
    /// Interpolates at certified eigenvalue approximations.
    Certified,
}

/// `10^-9`, the default enclosure tolerance.
pub fn default_tol() -> Rational {
    q(1, 1_000_000_000)
}

/// `lo ≤ value ≤ hi`; `flagged` when the width exceeds the requested tolerance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormEnclosure {
    #[serde(with = "rational_str")]
    pub lo: Rational,
    #[serde(with = "rational_str")]
    pub hi: Rational,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub flagged: bool,
}

impl NormEnclosure {
    pub fn exact(v: Rational) -> Self {
        NormEnclosure { lo: v.clone(), hi: v, flagged: false }
    }

    pub fn width(&self) -> Rational {
        self.hi.clone() - self.lo.clone()
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }
}

/// Result of applying a real function spectrally, with a rigorous bound on
/// `‖computed − f(a)‖`.
#[derive(Clone, Debug, PartialEq)]
pub struct Calculus<F> {
    pub value: Element<F>,
    pub error_bound: Rational,
}

// ---------------------------------------------------------------- polynomials

/// Dense polynomial, coefficients from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<Rational>);

impl Poly {
    fn trimmed(mut v: Vec<Rational>) -> Poly {
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        Poly(v)
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn lead(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Poly {
        Poly::trimmed(
            self.0.iter().enumerate().skip(1).map(|(k, c)| c.clone() * Rational::from_integer(k.into())).collect(),
        )
    }

    /// Quotient and remainder.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let mut r = self.0.clone();
        let mut quo = vec![Rational::zero(); self.0.len().saturating_sub(dd).max(1)];
        let lead = d.lead();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = r.last().unwrap().clone() / lead.clone();
            for (i, di) in d.0.iter().enumerate() {
                r[k + i] = r[k + i].clone() - c.clone() * di.clone();
            }
            quo[k] = c;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (Poly::trimmed(quo), Poly::trimmed(r))
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        let l = a.lead();
        if l.is_zero() {
            return a;
        }
        Poly(a.0.into_iter().map(|c| c / l.clone()).collect())
    }

    /// `p / gcd(p, p')`: same roots, all simple.
    pub fn squarefree(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        self.divrem(&g).0
    }

    fn sturm_chain(&self) -> Vec<Poly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].divrem(&chain[n - 1]).1;
            if r.is_zero() {
                break;
            }
            chain.push(Poly(r.0.into_iter().map(|c| -c).collect()));
        }
        chain
    }

    /// Bound `B` with every real root in `(-B, B)`.
    pub fn root_bound(&self) -> Rational {
        let l = self.lead().abs();
        let m = self.0.iter().rev().skip(1).map(|c| c.abs() / l.clone()).max().unwrap_or_else(Rational::zero);
        m + Rational::one()
    }

    /// Leading coefficient of the primitive integer multiple.
    fn integer_lead(&self) -> BigInt {
        let den = self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c.clone() * Rational::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        (ints.last().unwrap() / g).abs()
    }
}

fn sign_changes(chain: &[Poly], x: &Rational) -> usize {
    let signs: Vec<Ordering> = chain
        .iter()
        .map(|p| p.eval(x).cmp(&Rational::zero()))
        .filter(|s| *s != Ordering::Equal)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// A real root, either exactly rational or isolated in `(lo, hi)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Root {
    Exact(Rational),
    Interval(Rational, Rational),
}

impl Root {
    pub fn lo(&self) -> Rational {
        match self {
            Root::Exact(r) => r.clone(),
            Root::Interval(lo, _) => lo.clone(),
        }
    }
    pub fn hi(&self) -> Rational {
        match self {
            Root::Exact(r) => r.clone(),
            Root::Interval(_, hi) => hi.clone(),
        }
    }
    pub fn mid(&self) -> Rational {
        (self.lo() + self.hi()) / Rational::from_integer(2.into())
    }
    pub fn width(&self) -> Rational {
        self.hi() - self.lo()
    }
}

/// A splitting point in `(lo, hi)` that is not a root of `p`.
fn split_point(p: &Poly, lo: &Rational, hi: &Rational) -> Rational {
    for (num, den) in [(1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (2, 5), (3, 5)] {
        let m = lo.clone() + (hi.clone() - lo.clone()) * q(num, den);
        if !p.eval(&m).is_zero() {
            return m;
        }
    }
    unreachable!("a nonzero polynomial has finitely many roots")
}

/// Isolates the distinct real roots of `p`, ascending; rational roots are
/// returned exactly.
pub fn real_roots(p: &Poly) -> Vec<Root> {
    let sf = p.squarefree();
    if sf.degree().unwrap_or(0) == 0 {
        return vec![];
    }
    let chain = sf.sturm_chain();
    let l = Rational::from_integer(sf.integer_lead());
    let b = sf.root_bound();
    let mut stack = vec![(-b.clone(), b)];
    let mut isolated = Vec::new();
    while let Some((lo, hi)) = stack.pop() {
        let n = sign_changes(&chain, &lo) - sign_changes(&chain, &hi);
        match n {
            0 => {}
            1 => isolated.push((lo, hi)),
            _ => {
                let m = split_point(&sf, &lo, &hi);
                stack.push((lo, m.clone()));
                stack.push((m, hi));
            }
        }
    }
    isolated.sort();
    let unit = Rational::one() / l.clone();
    isolated
        .into_iter()
        .map(|(mut lo, mut hi)| {
            while hi.clone() - lo.clone() >= unit {
                let m = split_point(&sf, &lo, &hi);
                if sign_changes(&chain, &lo) - sign_changes(&chain, &m) == 1 {
                    hi = m;
                } else {
                    lo = m;
                }
            }
            // at most one multiple of 1/L lies strictly inside
            let k = (lo.clone() * l.clone()).floor() + Rational::one();
            let cand = k / l.clone();
            if cand < hi && sf.eval(&cand).is_zero() {
                Root::Exact(cand)
            } else {
                Root::Interval(lo, hi)
            }
        })
        .collect()
}

/// Halves an isolating interval of a simple root of `p`.
pub fn refine(p: &Poly, root: &Root) -> Root {
    match root {
        Root::Exact(_) => root.clone(),
        Root::Interval(lo, hi) => {
            let sf = p.squarefree();
            let m = split_point(&sf, lo, hi);
            let flo = sf.eval(lo);
            let fm = sf.eval(&m);
            if (flo.is_negative()) != (fm.is_negative()) {
                Root::Interval(lo.clone(), m)
            } else {
                Root::Interval(m, hi.clone())
            }
        }
    }
}

// ------------------------------------------------------------ matrix spectra

/// Characteristic polynomial `det(tI − a)` of a Hermitian matrix, by the
/// Faddeev–LeVerrier recursion. Errors if a coefficient is not real.
pub fn char_poly<F: ExactField>(a: &Matrix<F>) -> Result<Poly> {
    let n = a.nrows();
    let mut coeffs = vec![F::zero(); n + 1];
    coeffs[n] = F::one();
    let mut m = Matrix::<F>::zeros(n, n);
    let id = Matrix::<F>::identity(n);
    for k in 1..=n {
        m = a.mul_mat(&m).add_mat(&id.scale(&coeffs[n - k + 1]));
        let t = a.mul_mat(&m).trace();
        coeffs[n - k] = -(t / F::from_i64(k as i64));
    }
    let mut out = Vec::with_capacity(n + 1);
    for c in coeffs {
        if !c.im().is_zero() {
            return Err(Error::Domain("characteristic polynomial is not real; matrix is not self-adjoint".into()));
        }
        out.push(c.re());
    }
    Ok(Poly::trimmed(out))
}

pub fn is_positive_matrix<F: Field>(a: &Matrix<F>) -> bool {
    if !a.is_hermitian() {
        return false;
    }
    let n = a.nrows();
    (1u64..(1 << n)).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let d = a.principal(&idx).determinant();
        d.re() >= <F::Real as num_traits::Zero>::zero() || d.re().is_negligible()
    })
}

/// Self-adjoint with nonnegative spectrum, decided exactly through all
/// principal minors.
pub fn is_positive<F: Field>(a: &Element<F>) -> bool {
    a.blocks.iter().all(is_positive_matrix)
}

fn require_positive<F: Field>(a: &Element<F>) -> Result<()> {
    if !is_positive(a) {
        return Err(Error::Domain("element is not positive".into()));
    }
    Ok(())
}

fn lagrange_derivative_bound(mus: &[Rational], values: &[Rational], radius: &Rational) -> Rational {
    let d = mus.len();
    if d <= 1 {
        return Rational::zero();
    }
    let mut total = Rational::zero();
    for j in 0..d {
        let denom = (0..d).filter(|&k| k != j).fold(Rational::one(), |acc, k| acc * (mus[j].clone() - mus[k].clone()));
        let rpow = (0..d.saturating_sub(2)).fold(Rational::one(), |acc, _| acc * radius.clone());
        let lj = Rational::from_integer((d as i64 - 1).into()) * rpow / denom.abs();
        total += values[j].abs() * lj;
    }
    total
}

/// Applies `f` to a Hermitian matrix. `lipschitz` bounds `f`'s Lipschitz
/// constant and feeds the certified error bound.
pub fn apply_hermitian<F: ExactField>(
    a: &Matrix<F>,
    f: &dyn Fn(&Rational) -> Rational,
    lipschitz: &Rational,
    mode: Mode,
    tol: &Rational,
) -> Result<(Matrix<F>, Rational)> {
    if !a.is_hermitian() {
        return Err(Error::Domain("functional calculus needs a self-adjoint matrix".into()));
    }
    let n = a.nrows();
    if n == 0 {
        return Ok((a.clone(), Rational::zero()));
    }
    let p = char_poly(a)?;
    let mut roots = real_roots(&p);
    if roots.iter().all(|r| matches!(r, Root::Exact(_))) {
        let mut out = Matrix::zeros(n, n);
        for r in &roots {
            let Root::Exact(lambda) = r else { unreachable!() };
            let shifted = a.sub_mat(&Matrix::identity(n).scale(&F::from_real(lambda.clone())));
            let eig = Subspace::span(n, &shifted.kernel());
            out = out.add_mat(&eig.projector().scale(&F::from_real(f(lambda))));
        }
        return Ok((out, Rational::zero()));
    }
    if mode == Mode::Exact {
        return Err(Error::Mode("spectrum is not rational; use certified mode".into()));
    }
    let radius = p.root_bound() * Rational::from_integer(2.into());
    for _ in 0..200 {
        let mus: Vec<Rational> = roots.iter().map(Root::mid).collect();
        let values: Vec<Rational> = mus.iter().map(f).collect();
        let w = roots.iter().map(Root::width).max().unwrap_or_else(Rational::zero);
        let g_prime = lagrange_derivative_bound(&mus, &values, &radius);
        let bound = (lipschitz.clone() + g_prime) * w;
        if &bound <= tol {
            let mut out = Matrix::zeros(n, n);
            for (j, (mu, val)) in mus.iter().zip(&values).enumerate() {
                let mut term = Matrix::identity(n).scale(&F::from_real(val.clone()));
                for (k, muk) in mus.iter().enumerate() {
                    if k == j {
                        continue;
                    }
                    let factor = a
                        .sub_mat(&Matrix::identity(n).scale(&F::from_real(muk.clone())))
                        .scale(&F::from_real(Rational::one() / (mu.clone() - muk.clone())));
                    term = term.mul_mat(&factor);
                }
                out = out.add_mat(&term);
            }
            return Ok((out, bound));
        }
        roots = roots.iter().map(|r| refine(&p, r)).collect();
    }
    Err(Error::Resource {
        msg: "certified functional calculus did not reach the tolerance".into(),
        partial: String::new(),
    })
}

fn apply_element<F: ExactField>(
    a: &Element<F>,
    f: &dyn Fn(&Rational) -> Rational,
    mode: Mode,
    tol: &Rational,
) -> Result<Calculus<F>> {
    let mut blocks = Vec::with_capacity(a.nblocks());
    let mut bound = Rational::zero();
    for b in &a.blocks {
        let (m, e) = apply_hermitian(b, f, &Rational::one(), mode, tol)?;
        blocks.push(m);
        bound = bound.max(e);
    }
    Ok(Calculus { value: Element { blocks }, error_bound: bound })
}

/// `f_ε(λ) = max(λ − ε, 0)` applied spectrally to a positive element.
pub fn f_eps<F: ExactField>(a: &Element<F>, eps: &Rational, mode: Mode) -> Result<Calculus<F>> {
    if !eps.is_positive() {
        return Err(Error::Domain("epsilon must be positive".into()));
    }
    require_positive(a)?;
    let e = eps.clone();
    apply_element(a, &move |l: &Rational| (l.clone() - e.clone()).max(Rational::zero()), mode, &default_tol())
}

/// Witness `(b, ε)` with `a = f_ε(b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PedersenWitness<F> {
    pub b: Element<F>,
    pub eps: Rational,
    /// Bound on `‖f_ε(b) − a‖`; zero when checked exactly.
    pub residual: Rational,
}

/// Every positive element of a finite-dimensional algebra lies in `K(A)_0`;
/// the witness is `b = a + q` with `q` the support projection and `ε = 1`.
pub fn pedersen_k0_member<F: ExactField>(a: &Element<F>, mode: Mode) -> Result<PedersenWitness<F>> {
    require_positive(a)?;
    let q = Element { blocks: a.blocks.iter().map(|m| m.column_space().projector()).collect() };
    let b = a.add(&q);
    let eps = Rational::one();
    let back = f_eps(&b, &eps, mode)?;
    let residual = if back.error_bound.is_zero() {
        if back.value != *a {
            return Err(Error::Structural("Pedersen witness failed exact verification".into()));
        }
        Rational::zero()
    } else {
        back.error_bound
    };
    Ok(PedersenWitness { b, eps, residual })
}

/// `a = a1 − a2 + i·a3 − i·a4` with each part positive and `a1 a2 = a3 a4 = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourDecomposition<F> {
    pub parts: [Element<F>; 4],
    pub error_bound: Rational,
}

pub fn four_decomposition<F: ExactField>(a: &Element<F>, mode: Mode) -> Result<FourDecomposition<F>> {
    let two = F::from_i64(2);
    let h = a.add(&a.adjoint()).scale(&(F::one() / two.clone()));
    let skew = a.sub(&a.adjoint());
    let k = if skew.is_zero() {
        skew
    } else {
        let i = F::imag_unit().ok_or_else(|| {
            Error::Mode("non-self-adjoint element needs a field containing i".into())
        })?;
        skew.scale(&(F::one() / (two * i)))
    };
    let pos = |l: &Rational| l.clone().max(Rational::zero());
    let neg = |l: &Rational| (-l.clone()).max(Rational::zero());
    let tol = default_tol();
    let a1 = apply_element(&h, &pos, mode, &tol)?;
    let a2 = apply_element(&h, &neg, mode, &tol)?;
    let a3 = apply_element(&k, &pos, mode, &tol)?;
    let a4 = apply_element(&k, &neg, mode, &tol)?;
    let bound = [&a1, &a2, &a3, &a4].iter().map(|c| c.error_bound.clone()).max().unwrap();
    Ok(FourDecomposition { parts: [a1.value, a2.value, a3.value, a4.value], error_bound: bound })
}

/// Recombines `a1 − a2 + i a3 − i a4`.
pub fn recompose<F: ExactField>(d: &FourDecomposition<F>) -> Result<Element<F>> {
    let [a1, a2, a3, a4] = &d.parts;
    let re = a1.sub(a2);
    let im = a3.sub(a4);
    if im.is_zero() {
        return Ok(re);
    }
    let i = F::imag_unit().ok_or_else(|| Error::Mode("field has no imaginary unit".into()))?;
    Ok(re.add(&im.scale(&i)))
}

// -------------------------------------------------------------------- norms

fn is_square_integer(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// `lo ≤ √x ≤ hi` with `hi − lo ≤ tol`; exact for rational squares.
pub fn sqrt_enclosure(x: &Rational, tol: &Rational) -> (Rational, Rational) {
    assert!(!x.is_negative(), "square root of a negative number");
    if let (Some(n), Some(d)) = (is_square_integer(x.numer()), is_square_integer(x.denom())) {
        let r = Rational::new(n, d);
        return (r.clone(), r);
    }
    let mut lo = Rational::zero();
    let mut hi = x.clone().max(Rational::one());
    let two = Rational::from_integer(2.into());
    while hi.clone() - lo.clone() > *tol {
        let m = (lo.clone() + hi.clone()) / two.clone();
        if m.clone() * m.clone() <= *x {
            lo = m;
        } else {
            hi = m;
        }
    }
    (lo, hi)
}

/// Enclosure of the largest singular value of one block.
pub fn matrix_norm<F: ExactField>(a: &Matrix<F>, tol: &Rational) -> Result<NormEnclosure> {
    if a.is_zero() {
        return Ok(NormEnclosure::exact(Rational::zero()));
    }
    let b = a.adjoint().mul_mat(a);
    let p = char_poly(&b)?;
    let mut top = real_roots(&p).pop().expect("a*a has a largest eigenvalue");
    let half = tol.clone() / Rational::from_integer(4.into());
    for _ in 0..400 {
        let lo_l = top.lo().max(Rational::zero());
        let (slo, _) = sqrt_enclosure(&lo_l, &half);
        let (_, shi) = sqrt_enclosure(&top.hi(), &half);
        if shi.clone() - slo.clone() <= *tol {
            return Ok(NormEnclosure { lo: slo, hi: shi, flagged: false });
        }
        top = refine(&p, &top);
    }
    Err(Error::Resource { msg: "norm enclosure did not reach the tolerance".into(), partial: String::new() })
}

/// `‖a‖ = max_x ‖rep_x(a)‖`, enclosed to within `tol`.
pub fn op_norm<F: ExactField>(a: &Element<F>, tol: &Rational) -> Result<NormEnclosure> {
    if !tol.is_positive() {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let mut lo = Rational::zero();
    let mut hi = Rational::zero();
    for b in &a.blocks {
        let e = matrix_norm(b, tol)?;
        lo = lo.max(e.lo);
        hi = hi.max(e.hi);
    }
    Ok(NormEnclosure { lo, hi, flagged: false })
}

/// `x` positive with `xAx` commutative, i.e. every block of rank at most one.
pub fn is_abelian_element<F: ExactField>(alg: &BlockAlgebra, x: &Element<F>) -> Result<bool> {
    alg.check_element(x)?;
    require_positive(x)?;
    Ok(x.blocks.iter().all(|b| b.rank() <= 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gi, gq, qi, GaussRational};

    type G = GaussRational;

    fn m(rows: &[&[i64]]) -> Matrix<G> {
        let c = rows[0].len();
        Matrix::from_rows(&rows.iter().map(|r| r.iter().map(|&x| gi(x)).collect()).collect::<Vec<_>>(), c)
    }

    fn single(a: Matrix<G>) -> Element<G> {
        Element { blocks: vec![a] }
    }

    fn rotation() -> Matrix<G> {
        Matrix::from_rows(
            &[vec![gq(q(3, 5), qi(0)), gq(q(4, 5), qi(0))], vec![gq(q(-4, 5), qi(0)), gq(q(3, 5), qi(0))]],
            2,
        )
    }

    #[test]
    fn roots_of_known_polynomials() {
        // (x-1)(x-2)^2 (x^2-2)
        let p = Poly(vec![qi(8), qi(-16), qi(6), qi(6), qi(-5), qi(1)]);
        let r = real_roots(&p);
        assert_eq!(r.len(), 4);
        assert_eq!(r.iter().filter(|x| matches!(x, Root::Exact(_))).count(), 2);
        assert!(r.iter().any(|x| *x == Root::Exact(qi(1))));
        assert!(r.iter().any(|x| *x == Root::Exact(qi(2))));
    }

    #[test]
    fn char_poly_of_diagonal() {
        let p = char_poly(&m(&[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!(p, Poly(vec![qi(6), qi(-5), qi(1)]));
    }

    #[test]
    fn f_eps_examples() {
        let a = single(Matrix::diag(&[gq(q(1, 2), qi(0)), gi(2)]));
        let r = f_eps(&a, &qi(1), Mode::Exact).unwrap();
        assert_eq!(r.value, single(Matrix::diag(&[gi(0), gi(1)])));
        let z = single(Matrix::zeros(2, 2));
        assert_eq!(f_eps(&z, &qi(1), Mode::Exact).unwrap().value, z);
        let u = rotation();
        let a = single(u.mul_mat(&m(&[&[3, 0], &[0, 1]])).mul_mat(&u.adjoint()));
        let want = single(u.mul_mat(&m(&[&[1, 0], &[0, 0]])).mul_mat(&u.adjoint()));
        assert_eq!(f_eps(&a, &qi(2), Mode::Exact).unwrap().value, want);
        assert!(matches!(f_eps(&single(m(&[&[-1]])), &qi(1), Mode::Exact), Err(Error::Domain(_))));
    }

    #[test]
    fn irrational_spectrum_needs_certified_mode() {
        let a = single(m(&[&[2, 1], &[1, 1]]));
        assert!(matches!(f_eps(&a, &q(1, 2), Mode::Exact), Err(Error::Mode(_))));
        let r = f_eps(&a, &q(1, 2), Mode::Certified).unwrap();
        assert!(r.error_bound <= default_tol());
        assert!(r.error_bound.is_positive());
    }

    #[test]
    fn pedersen_witnesses() {
        let w = pedersen_k0_member(&single(m(&[&[1, 0], &[0, 0]])), Mode::Exact).unwrap();
        assert_eq!(w.b, single(m(&[&[2, 0], &[0, 0]])));
        assert_eq!(w.eps, qi(1));
        let w0 = pedersen_k0_member(&single(Matrix::zeros(2, 2)), Mode::Exact).unwrap();
        assert!(w0.b.is_zero());
        let id = single(Matrix::identity(3));
        assert_eq!(pedersen_k0_member(&id, Mode::Exact).unwrap().b, id.scale(&gi(2)));
    }

    #[test]
    fn four_decomposition_examples() {
        let p = single(m(&[&[1, 0], &[0, 0]]));
        let d = four_decomposition(&p, Mode::Exact).unwrap();
        assert_eq!(d.parts[0], p);
        assert!(d.parts[1].is_zero() && d.parts[2].is_zero() && d.parts[3].is_zero());
        let ip = p.scale(&G::imag_unit().unwrap());
        let d = four_decomposition(&ip, Mode::Exact).unwrap();
        assert_eq!(d.parts[2], p);
        let e12 = single(m(&[&[0, 1], &[0, 0]]));
        let d = four_decomposition(&e12, Mode::Exact).unwrap();
        assert_eq!(recompose(&d).unwrap(), e12);
        for part in &d.parts {
            assert!(is_positive(part));
        }
        assert!(d.parts[0].mul(&d.parts[1]).is_zero());
        assert!(d.parts[2].mul(&d.parts[3]).is_zero());
    }

    #[test]
    fn norm_examples() {
        let tol = default_tol();
        let a = Element { blocks: vec![Matrix::identity(2).scale(&gi(2)), Matrix::identity(1).scale(&gi(3))] };
        let e = op_norm(&a, &tol).unwrap();
        assert!(e.contains(&qi(3)) && e.width() <= tol);
        let e12 = single(m(&[&[0, 1], &[0, 0]]));
        assert_eq!(op_norm(&e12, &tol).unwrap(), NormEnclosure::exact(qi(1)));
        assert_eq!(op_norm(&single(Matrix::zeros(2, 2)), &tol).unwrap(), NormEnclosure::exact(qi(0)));
        // [[1,1],[0,1]] has norm (1+√5)/2
        let j = single(m(&[&[1, 1], &[0, 1]]));
        let e = op_norm(&j, &tol).unwrap();
        assert!(e.width() <= tol);
        assert!(e.lo > q(1618, 1000) && e.hi < q(1619, 1000));
    }

    #[test]
    fn abelian_elements() {
        let a = BlockAlgebra::new(vec![3]).unwrap();
        assert!(is_abelian_element(&a, &single(Matrix::diag(&[gi(1), gi(0), gi(0)]))).unwrap());
        let b = BlockAlgebra::new(vec![2]).unwrap();
        assert!(!is_abelian_element(&b, &single(Matrix::identity(2))).unwrap());
        let c = BlockAlgebra::new(vec![2, 3]).unwrap();
        let x = Element { blocks: vec![Matrix::diag(&[gi(1), gi(0)]), Matrix::diag(&[gi(1), gi(0), gi(0)])] };
        assert!(is_abelian_element(&c, &x).unwrap());
    }
}
