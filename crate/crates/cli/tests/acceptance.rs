//! Acceptance suite: one test per criterion, each checked against an
//! independent brute-force oracle. Every test prints a single `PASS` line with
//! its measured quantities (visible with `--nocapture`); failures abort with
//! the offending case.

use std::collections::BTreeSet;
use std::process::Command;

use gelfkit_core::algebra::automorphism::pythagorean_rotation;
use gelfkit_core::algebra::lattice::PresentedLattice;
use gelfkit_core::algebra::spectral::{f_eps, is_positive, op_norm, Mode};
use gelfkit_core::algebra::{BlockAlgebra, Corner, Element, LeftIdeal};
use gelfkit_core::blowup::BlowingUp;
use gelfkit_core::cech::{cech_cohomology, cech_cohomology_presheaf, compact_report, examples, Cover, DEFAULT_CAP_DIM};
use gelfkit_core::covering::graph::GraphMap;
use gelfkit_core::covering::pi1::{pi1_presentation, TwoComplex};
use gelfkit_core::covering::{rank_one_corner, CoveringQuadruple};
use gelfkit_core::gelfand::{commutative_topology, gelfand_bicommutant, sample_points, UltrafilterPoint};
use gelfkit_core::order::DEFAULT_FILTER_BOUND;
use gelfkit_core::scalar::{gq, q, qi};
use gelfkit_core::sheaf::{FinitePresheaf, PresheafMorphism};
use gelfkit_core::snf::smith_normal_form;
use gelfkit_core::space::{mask_of, FiniteSpace, Mask};
use gelfkit_core::{AbHom, FgAbGroup, Field, GaussRational, Matrix, Rational, Subspace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type G = GaussRational;

// Pinned tolerances and sample sizes.
const DISCRETE_MAX: usize = 6;
const DISCRETE_BRUTE_MAX: usize = 4;
const LATTICE_MAX: usize = 4;
const RANDOM_IDEALS: usize = 200;
const MAX_BLOCK_DIM: usize = 4;
const MAX_BLOCKS: usize = 3;
const SNF_CASES: usize = 1000;
const SNF_MAX_ENTRY: i64 = 3;
const SNF_MAX_SIZE: usize = 5;
const SPECTRAL_CASES: usize = 100;
const EVENLY_COVERED_SAMPLES: usize = 10;
const WEDGE_MAX: usize = 5;
const BLOWUP_MAX: usize = 4;
const SUPPORT_PAIRS: usize = 100;
const FACTOR_SAMPLES: usize = 10;
const MIN_FLASQUE_CASES: usize = 20;
const SHEAF_MAX_POINTS: usize = 3;
const SHEAF_MAX_OPENS: usize = 3;
const MORPHISM_WINDOW: i64 = 1;
const FACTOR_WINDOW: i64 = 2;

/// Slack allowed on norm enclosures, `10^-9`.
fn norm_slack() -> Rational {
    q(1, 1_000_000_000)
}

/// Tolerance of the compact-support approximation.
fn support_eps() -> Rational {
    q(1, 1000)
}

fn pass(n: usize, what: &str, detail: String) {
    println!("criterion {n:>2} PASS {what}: {detail}");
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn scalar(r: &mut impl Rng) -> G {
    gq(qi(r.gen_range(-2..=2)), qi(r.gen_range(-1..=1)))
}

fn random_vec(r: &mut impl Rng, n: usize) -> Vec<G> {
    (0..n).map(|_| scalar(r)).collect()
}

fn random_subspace(r: &mut impl Rng, n: usize) -> Subspace<G> {
    let k = r.gen_range(0..=n);
    let vs: Vec<Vec<G>> = (0..k).map(|_| random_vec(r, n)).collect();
    Subspace::span(n, &vs)
}

fn random_algebra(r: &mut impl Rng) -> BlockAlgebra {
    let b = r.gen_range(1..=MAX_BLOCKS);
    BlockAlgebra::new((0..b).map(|_| r.gen_range(1..=MAX_BLOCK_DIM)).collect()).unwrap()
}

fn random_ideal(r: &mut impl Rng, alg: &BlockAlgebra) -> LeftIdeal<G> {
    LeftIdeal::new(alg, alg.dims().iter().map(|&n| random_subspace(r, n)).collect()).unwrap()
}

fn random_matrix(r: &mut impl Rng, n: usize) -> Matrix<G> {
    Matrix::from_vec(n, n, random_vec(r, n * n))
}

fn random_element(r: &mut impl Rng, alg: &BlockAlgebra) -> Element<G> {
    alg.element(alg.dims().iter().map(|&n| random_matrix(r, n)).collect()).unwrap()
}

/// A random element with each block zeroed with probability one half.
fn sparse_element(r: &mut impl Rng, alg: &BlockAlgebra) -> Element<G> {
    let blocks = alg
        .dims()
        .iter()
        .map(|&n| if r.gen_bool(0.5) { random_matrix(r, n) } else { Matrix::zeros(n, n) })
        .collect();
    alg.element(blocks).unwrap()
}

fn span_of(alg: &BlockAlgebra, es: &[Element<G>]) -> Subspace<G> {
    let nonzero: Vec<Element<G>> = es.iter().filter(|e| !e.is_zero()).cloned().collect();
    alg.span(&nonzero)
}

fn ideal_span(alg: &BlockAlgebra, l: &LeftIdeal<G>) -> Subspace<G> {
    alg.span(&l.basis_elements(alg))
}

/// `{a : a l* = 0 for every l in gens}`, as the kernel of the linear map
/// `a ↦ (a l_j*)_j` written in the matrix-unit basis.
fn commutant_oracle(alg: &BlockAlgebra, gens: &[Element<G>]) -> Subspace<G> {
    let dim = alg.dim();
    let units = alg.matrix_units::<G>();
    let mut rows = Subspace::zero(dim);
    for l in gens {
        let ls = l.adjoint();
        let cols: Vec<Vec<G>> = units.iter().map(|u| alg.vectorize(&u.mul(&ls))).collect();
        let m = Matrix::from_cols(&cols, dim);
        let nonzero: Vec<Vec<G>> = m.rows_vec().into_iter().filter(|r| r.iter().any(|x| !x.is_negligible())).collect();
        rows = rows.sum(&Subspace::span(dim, &nonzero));
    }
    if rows.is_zero() {
        return Subspace::full(dim);
    }
    Subspace::span(dim, &Matrix::from_rows(rows.basis(), dim).kernel())
}

/// Orthogonal complement for the inner product `Σ conj(v_k) w_k`.
fn orth(v: &Subspace<G>) -> Subspace<G> {
    let n = v.ambient();
    if v.is_zero() {
        return Subspace::full(n);
    }
    let rows: Vec<Vec<G>> = v.basis().iter().map(|b| b.iter().map(Field::conj).collect()).collect();
    Subspace::span(n, &Matrix::from_rows(&rows, n).kernel())
}

fn mask_subset(a: Mask, b: Mask) -> bool {
    a & !b == 0
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn int_det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect()).collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * int_det(&minor)
            })
            .sum(),
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn z() -> FgAbGroup {
    FgAbGroup::free(1)
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

/// Every topology on at most `max_points` points with at most `max_opens`
/// nonempty opens.
fn small_spaces(max_points: usize, max_opens: usize) -> Vec<FiniteSpace> {
    let mut out = Vec::new();
    for n in 1..=max_points {
        let full: Mask = (1 << n) - 1;
        let proper: Vec<Mask> = (1..full).collect();
        for pick in 0u64..(1 << proper.len()) {
            let mut opens = vec![0, full];
            opens.extend(proper.iter().enumerate().filter(|&(i, _)| pick >> i & 1 == 1).map(|(_, &m)| m));
            let closed = opens.iter().all(|&a| opens.iter().all(|&b| opens.contains(&(a | b)) && opens.contains(&(a & b))));
            if closed && opens.len() - 1 <= max_opens {
                out.push(FiniteSpace::new(names(n), opens).unwrap());
            }
        }
    }
    out
}

#[test]
fn criterion_01_discrete_spaces_have_exactly_the_principal_ultrafilters() {
    let mut brute_checked = 0;
    for n in 1..=DISCRETE_MAX {
        let x = FiniteSpace::discrete(n);
        let lat = x.open_lattice();
        let opens = x.opens();
        let ultras = lat.enumerate_ultrafilters(DEFAULT_FILTER_BOUND).unwrap();
        assert_eq!(ultras.len(), n, "|X| = {n}");
        let mut seen = BTreeSet::new();
        for u in &ultras {
            assert!(lat.is_ultrafilter(u).unwrap());
            let m = lat.is_principal(u).expect("every ultrafilter of a finite lattice is principal");
            assert_eq!(opens[m].count_ones(), 1, "generated by a singleton");
            let p = opens[m].trailing_zeros() as usize;
            let expect: Vec<usize> = (0..opens.len()).filter(|&i| opens[i] >> p & 1 == 1).collect();
            assert_eq!(u.members, expect, "members are the opens containing {p}");
            assert_eq!(x.ultrafilter_limits(u).unwrap(), vec![p], "limit is a single point");
            seen.insert(p);
        }
        assert_eq!(seen.len(), n, "one ultrafilter per point");
        let alg = BlockAlgebra::commutative(n).unwrap();
        assert!(commutative_topology::<G>(&alg).unwrap().is_discrete(), "Gelfand topology of C^{n} is discrete");

        if n <= DISCRETE_BRUTE_MAX {
            // Every family of opens checked directly against the filter axioms.
            let k = opens.len();
            let is_filter = |s: u64| {
                let has = |i: usize| s >> i & 1 == 1;
                s != 0
                    && !has(0)
                    && (0..k).all(|i| {
                        !has(i)
                            || (0..k).all(|j| {
                                let up = !mask_subset(opens[i], opens[j]) || has(j);
                                let meet = !has(j) || has(opens.iter().position(|&m| m == opens[i] & opens[j]).unwrap());
                                up && meet
                            })
                    })
            };
            let filters: Vec<u64> = (0u64..1 << k).filter(|&s| is_filter(s)).collect();
            let maximal: Vec<u64> = filters.iter().copied().filter(|&f| !filters.iter().any(|&g| g != f && g & f == f)).collect();
            let from_lib: BTreeSet<u64> = ultras.iter().map(|u| u.members.iter().fold(0u64, |a, &i| a | 1 << i)).collect();
            assert_eq!(maximal.into_iter().collect::<BTreeSet<_>>(), from_lib, "brute-force ultrafilters, |X| = {n}");
            brute_checked += 1;
        }
    }
    pass(1, "discrete ultrafilters", format!("|X| = 1..={DISCRETE_MAX}, brute force on {brute_checked} sizes"));
}

#[test]
fn criterion_02_commutative_ideal_lattice_is_the_open_lattice() {
    let mut pairs = 0;
    for n in 1..=LATTICE_MAX {
        let alg = BlockAlgebra::commutative(n).unwrap();
        let pl = PresentedLattice::<G>::all_commutative(&alg).unwrap();
        let x = FiniteSpace::discrete(n);
        let ol = x.open_lattice();
        assert_eq!(pl.ideals.len(), 1 << n);
        let f: Vec<usize> = pl
            .ideals
            .iter()
            .map(|l| {
                let support: Vec<usize> =
                    (0..n).filter(|&b| l.basis_elements(&alg).iter().any(|e| !e.blocks[b].is_zero())).collect();
                x.open_index(mask_of(&support)).unwrap()
            })
            .collect();
        assert_eq!(f.iter().collect::<BTreeSet<_>>().len(), f.len(), "bijection, n = {n}");
        let spans: Vec<Subspace<G>> = pl.ideals.iter().map(|l| ideal_span(&alg, l)).collect();
        for i in 0..f.len() {
            for j in 0..f.len() {
                let leq = pl.lattice.leq(i, j);
                assert_eq!(leq, ol.leq(f[i], f[j]), "order, n = {n}");
                assert_eq!(leq, spans[i].is_subspace_of(&spans[j]), "order against containment, n = {n}");
                assert_eq!(f[pl.lattice.meet(i, j)], ol.meet(f[i], f[j]), "meet, n = {n}");
                assert_eq!(spans[pl.lattice.meet(i, j)], spans[i].intersect(&spans[j]), "meet against intersection");
                pairs += 1;
            }
        }
    }
    pass(2, "ideal lattice of C^n = open lattice of discrete n", format!("n = 1..={LATTICE_MAX}, {pairs} pairs"));
}

#[test]
fn criterion_03_hereditary_corners_match_their_ideals() {
    let mut r = rng(3);
    let mut membership = 0;
    for case in 0..RANDOM_IDEALS {
        let alg = random_algebra(&mut r);
        let l = random_ideal(&mut r, &alg);
        let lb = l.basis_elements(&alg);
        let l_span = alg.span(&lb);
        let star: Vec<Element<G>> = lb.iter().map(Element::adjoint).collect();
        let b = l.hereditary();
        let bb = b.basis_elements(&alg);
        let b_span = alg.span(&bb);
        assert_eq!(l_span.intersect(&alg.span(&star)), b_span, "case {case}: L ∩ L* is the corner");

        let units = alg.matrix_units::<G>();
        let prods: Vec<Element<G>> = units.iter().flat_map(|u| bb.iter().map(move |x| u.mul(x))).collect();
        assert_eq!(span_of(&alg, &prods), l_span, "case {case}: span A·B recovers L");

        // a*a lies in B exactly when a lies in L.
        for k in 0..4 {
            let a = if k % 2 == 0 || lb.is_empty() {
                random_element(&mut r, &alg)
            } else {
                lb.iter().fold(alg.zero(), |acc, e| acc.add(&e.scale(&scalar(&mut r))))
            };
            let in_l = l_span.contains(&alg.vectorize(&a));
            let aa = a.adjoint().mul(&a);
            assert_eq!(b_span.contains(&alg.vectorize(&aa)), in_l, "case {case}: a*a ∈ B iff a ∈ L");
            membership += 1;
        }
        assert_eq!(b.ideal(), l, "case {case}: round trip");
        assert_eq!(Corner::from_projection(&alg, &b.projection()).unwrap(), b, "case {case}: projection round trip");
    }
    pass(3, "L ∩ L* = B and L(B) = L", format!("{RANDOM_IDEALS} random ideals, {membership} membership probes"));
}

#[test]
fn criterion_04_commutant_laws() {
    let mut r = rng(4);
    for case in 0..RANDOM_IDEALS {
        let alg = random_algebra(&mut r);
        let l = random_ideal(&mut r, &alg);
        let lp = l.commutant();
        let oracle = commutant_oracle(&alg, &l.basis_elements(&alg));
        assert_eq!(ideal_span(&alg, &lp), oracle, "case {case}: commutant against its definition");
        let vperp: Vec<Subspace<G>> = l.subspaces.iter().map(orth).collect();
        assert_eq!(lp, LeftIdeal::new(&alg, vperp).unwrap(), "case {case}: (L_V)' = L_(V^⊥)");
        let lpp = ideal_span(&alg, &lp.commutant());
        let l_span = ideal_span(&alg, &l);
        assert!(l_span.is_subspace_of(&lpp), "case {case}: L ⊆ L''");
        assert_eq!(l_span, lpp, "case {case}: L'' = L");

        let l2 = random_ideal(&mut r, &alg);
        let m = l.meet(&l2).unwrap();
        assert!(m.leq(&l2).unwrap());
        assert!(l2.commutant().leq(&m.commutant()).unwrap(), "case {case}: order reversal");
        let o2 = commutant_oracle(&alg, &l2.basis_elements(&alg));
        let om = commutant_oracle(&alg, &m.basis_elements(&alg));
        assert!(o2.is_subspace_of(&om), "case {case}: order reversal by definition");
    }

    let m2 = BlockAlgebra::new(vec![2]).unwrap();
    let (one, zero) = (G::from_i64(1), G::from_i64(0));
    let gens = vec![(0, vec![one.clone(), zero.clone()]), (0, vec![zero, one.clone()]), (0, vec![one.clone(), one])];
    let pl = PresentedLattice::from_generators(&m2, &gens).unwrap();
    assert_eq!(pl.ideals.len(), 5, "0, three lines, M_2");
    for (i, li) in pl.ideals.iter().enumerate() {
        assert_eq!(ideal_span(&m2, &li.commutant()), commutant_oracle(&m2, &li.basis_elements(&m2)));
        assert!(li.leq(&li.commutant().commutant()).unwrap());
        for (j, lj) in pl.ideals.iter().enumerate() {
            if pl.lattice.leq(i, j) {
                assert!(lj.commutant().leq(&li.commutant()).unwrap());
            }
        }
    }
    pass(4, "commutant laws", format!("{RANDOM_IDEALS} random ideals plus the 5-element lattice of e1, e2, e1+e2 in M_2"));
}

#[test]
fn criterion_05_bicommutant_of_points() {
    let m2 = BlockAlgebra::new(vec![2]).unwrap();
    let (one, zero, i) = (G::from_i64(1), G::from_i64(0), G::imag_unit().unwrap());
    let lines = vec![
        vec![one.clone(), zero.clone()],
        vec![zero.clone(), one.clone()],
        vec![one.clone(), one.clone()],
        vec![one.clone(), i.clone()],
        vec![G::from_i64(2), i - one.clone()],
    ];
    for v in &lines {
        let p = UltrafilterPoint::new(&m2, 0, v.clone()).unwrap();
        let vperp = orth(&Subspace::line(v.clone()));
        let expect = LeftIdeal::new(&m2, vec![vperp.clone()]).unwrap();
        assert_eq!(gelfand_bicommutant(&m2, &p), expect, "line {v:?}");

        let w = vperp.basis()[0].clone();
        let gens = vec![
            (0, vec![one.clone(), zero.clone()]),
            (0, vec![zero.clone(), one.clone()]),
            (0, v.clone()),
            (0, w),
        ];
        let pl = PresentedLattice::from_generators(&m2, &gens).unwrap();
        let lv = pl.index_of(&LeftIdeal::line(&m2, 0, v.clone()).unwrap()).unwrap();
        let xi = pl.lattice.up_set(lv);
        assert!(pl.lattice.is_ultrafilter(&xi).unwrap());
        let mut acc = Subspace::zero(m2.dim());
        for m in pl.members(&xi) {
            acc = acc.sum(&commutant_oracle(&m2, &m.basis_elements(&m2)));
        }
        assert_eq!(acc, ideal_span(&m2, &expect), "brute-force closure of the union of commutants");
        assert_eq!(pl.filter_bicommutant(&xi).unwrap().ideal(), Some(&expect));
    }

    let n = 3;
    let alg = BlockAlgebra::commutative(n).unwrap();
    let pl = PresentedLattice::<G>::all_commutative(&alg).unwrap();
    for x in 0..n {
        let p = UltrafilterPoint::new(&alg, x, vec![G::from_i64(1)]).unwrap();
        let vanishing: Vec<Element<G>> = (0..n).filter(|&y| y != x).map(|y| alg.block_one(y)).collect();
        let b = gelfand_bicommutant(&alg, &p);
        assert_eq!(ideal_span(&alg, &b), span_of(&alg, &vanishing), "functions vanishing at {x}");
        let at_x = pl.index_of(&LeftIdeal::line(&alg, x, vec![G::from_i64(1)]).unwrap()).unwrap();
        assert_eq!(pl.filter_bicommutant(&pl.lattice.up_set(at_x)).unwrap().ideal(), Some(&b));
    }
    pass(5, "point bicommutants", format!("{} lines in M_2, {n} points of C^{n}", lines.len()));
}

#[test]
fn criterion_06_cech_cohomology_and_smith_normal_form() {
    let cap = DEFAULT_CAP_DIM;
    let circle = cech_cohomology(&examples::circle(3), &z(), cap).unwrap().groups;
    assert_eq!(circle, vec![z(), z()], "circle");
    let sphere = cech_cohomology(&examples::tetrahedral_sphere(), &z(), cap).unwrap().groups;
    assert_eq!(sphere, vec![z(), FgAbGroup::zero(), z()], "tetrahedral sphere");
    for n in 1..=3 {
        let r = cech_cohomology(&examples::coordinate_hyperplane_cover(n), &z(), cap).unwrap();
        assert!(r.nerve.is_full_simplex(), "n = {n}");
        assert_eq!(r.groups[0], z());
        assert!(r.groups[1..].iter().all(FgAbGroup::is_zero), "n = {n}: positive degrees vanish");
    }
    assert!(!compact_report(1, cap).unwrap().agree);
    let status = Command::new(env!("CARGO_BIN_EXE_gelfkit"))
        .args(["cech", "--compact-report", "1"])
        .env_remove("GELFKIT_CAP_DIM")
        .output()
        .unwrap()
        .status;
    assert_eq!(status.code(), Some(2), "compact report disagreement exits 2");

    let mut r = rng(6);
    for case in 0..SNF_CASES {
        let (rows, cols) = (r.gen_range(1..=SNF_MAX_SIZE), r.gen_range(1..=SNF_MAX_SIZE));
        let data: Vec<i64> = (0..rows * cols).map(|_| r.gen_range(-SNF_MAX_ENTRY..=SNF_MAX_ENTRY)).collect();
        let m = Matrix::from_vec(rows, cols, data);
        let f = smith_normal_form(&m);
        assert_eq!(f.u.mul_mat(&m).mul_mat(&f.v), f.s, "case {case}: u m v = s");
        assert_eq!(f.u.mul_mat(&f.u_inv), Matrix::identity(rows));
        assert_eq!(f.v.mul_mat(&f.v_inv), Matrix::identity(cols));
        for i in 0..rows {
            for j in 0..cols {
                if i != j || i >= f.rank {
                    assert_eq!(f.s[(i, j)], 0, "case {case}: s is diagonal of rank {}", f.rank);
                }
            }
        }
        let d = f.invariants();
        assert!(d.iter().all(|&x| x > 0));
        assert!(d.windows(2).all(|w| w[1] % w[0] == 0), "case {case}: divisibility chain {d:?}");
        assert_eq!(m.map(|&x| qi(x)).rank(), f.rank, "case {case}: rank over Q");

        // Determinantal divisors: D_k = gcd of k×k minors = d_1 ⋯ d_k.
        let rows_i: Vec<Vec<i128>> = (0..rows).map(|i| m.row(i).iter().map(|&x| x as i128).collect()).collect();
        for k in 1..=rows.min(cols) {
            let mut dk = 0i128;
            for rs in combinations(rows, k) {
                for cs in combinations(cols, k) {
                    let minor: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| rows_i[i][j]).collect()).collect();
                    dk = gcd(dk, int_det(&minor));
                }
            }
            let expect: i128 = if k <= f.rank { d[..k].iter().map(|&x| x as i128).product() } else { 0 };
            assert_eq!(dk, expect, "case {case}: D_{k}");
        }
    }
    pass(6, "Čech examples and Smith normal form", format!("{SNF_CASES} random matrices up to {SNF_MAX_SIZE}×{SNF_MAX_SIZE}"));
}

#[test]
fn criterion_07_sheafification() {
    let groups = [z(), FgAbGroup::cyclic(2), FgAbGroup::cyclic(4)];
    let mut universal = 0;
    let mut presheaves = 0;
    for x in small_spaces(SHEAF_MAX_POINTS, SHEAF_MAX_OPENS) {
        let full = x.full();
        for g in &groups {
            let mut fs = vec![FinitePresheaf::constant(&x, g)];
            fs.extend((0..x.npoints()).map(|p| FinitePresheaf::skyscraper(&x, p, g)));
            let inner = |u: Mask| u != 0 && u != full;
            fs.push(
                FinitePresheaf::from_fn(
                    &x,
                    |u| if inner(u) { g.clone() } else { FgAbGroup::zero() },
                    |u, v, s, t| if inner(u) && inner(v) { Matrix::identity(s.ngens()) } else { Matrix::zeros(t.ngens(), s.ngens()) },
                )
                .unwrap(),
            );
            let mut hs = vec![FinitePresheaf::constant(&x, g).sheafify().unwrap().sheaf];
            hs.extend((0..x.npoints()).map(|p| FinitePresheaf::skyscraper(&x, p, g)));
            for h in &hs {
                assert!(h.check_sheaf().unwrap().sheaf);
            }

            for f in &fs {
                presheaves += 1;
                let sh = f.sheafify().unwrap();
                assert!(sh.sheaf.check_sheaf().unwrap().sheaf, "sheafification is a sheaf");
                for p in 0..x.npoints() {
                    assert_eq!(f.stalk(p).unwrap().group, sh.sheaf.stalk(p).unwrap().group, "stalk at {p}");
                    let u = x.open_index(x.minimal_open(p)).unwrap();
                    assert!(sh.theta.maps[u].is_iso(), "θ is an isomorphism on the stalk at {p}");
                }
                for h in &hs {
                    for psi in PresheafMorphism::enumerate(f, h, MORPHISM_WINDOW) {
                        let factor = sh.factor(f, &psi, h).unwrap();
                        let per_open: Vec<Vec<AbHom>> = (0..x.opens().len())
                            .map(|u| {
                                AbHom::enumerate(&sh.sheaf.sections()[u], &h.sections()[u], FACTOR_WINDOW)
                                    .into_iter()
                                    .filter(|c| c.compose(&sh.theta.maps[u]).unwrap().same_map(&psi.maps[u]))
                                    .collect()
                            })
                            .collect();
                        let mut found = Vec::new();
                        let mut idx = vec![0usize; per_open.len()];
                        if per_open.iter().all(|c| !c.is_empty()) {
                            'outer: loop {
                                let m = PresheafMorphism {
                                    maps: idx.iter().zip(&per_open).map(|(&i, c)| c[i].clone()).collect(),
                                };
                                if m.check(&sh.sheaf, h).unwrap() {
                                    found.push(m);
                                }
                                let mut k = 0;
                                loop {
                                    if k == idx.len() {
                                        break 'outer;
                                    }
                                    idx[k] += 1;
                                    if idx[k] < per_open[k].len() {
                                        break;
                                    }
                                    idx[k] = 0;
                                    k += 1;
                                }
                            }
                        }
                        assert_eq!(found.len(), 1, "unique factorisation through θ");
                        assert!(found[0].same_map(&factor), "library factorisation is the brute-force one");
                        assert!(factor.compose(&sh.theta).unwrap().same_map(&psi));
                        universal += 1;
                    }
                }
            }
        }
    }
    assert!(universal > 0);

    let two = FiniteSpace::discrete(2);
    let sh = FinitePresheaf::constant(&two, &z()).sheafify().unwrap();
    assert_eq!(sh.sheaf.group_of(two.full()).unwrap(), &FgAbGroup::free(2), "constant sheaf on two points");

    let mut flasque = 0;
    for x in small_spaces(3, usize::MAX) {
        for g in [z(), FgAbGroup::cyclic(2)] {
            for p in 0..x.npoints() {
                let f = FinitePresheaf::skyscraper(&x, p, &g);
                assert!(f.is_flasque());
                assert!(f.check_sheaf().unwrap().sheaf);
                let nonempty: Vec<Mask> = x.nonempty_opens();
                for cover in [Cover::minimal_opens(&x), Cover::on_space(&x, nonempty).unwrap()] {
                    let h = cech_cohomology_presheaf(&f, &cover, DEFAULT_CAP_DIM).unwrap().groups;
                    assert!(h[1..].iter().all(FgAbGroup::is_zero), "flasque sheaf has no higher cohomology: {h:?}");
                }
                flasque += 1;
            }
        }
    }
    assert!(flasque >= MIN_FLASQUE_CASES, "{flasque} flasque cases");

    let circle = examples::circle_space(3);
    let constant = FinitePresheaf::constant(&circle, &z()).sheafify().unwrap().sheaf;
    assert!(!constant.is_flasque());
    let h = cech_cohomology_presheaf(&constant, &Cover::minimal_opens(&circle), DEFAULT_CAP_DIM).unwrap().groups;
    assert_eq!(h[1], z(), "the constant sheaf on the circle is not acyclic");

    pass(
        7,
        "sheafification",
        format!("{presheaves} presheaves, {universal} universal-property checks, {flasque} flasque cases"),
    );
}

#[test]
fn criterion_08_spectral_truncation() {
    let mut r = rng(8);
    let slack = norm_slack();
    let eps_choices = [q(1, 4), q(1, 2), qi(1), q(3, 2), qi(2)];
    for case in 0..SPECTRAL_CASES {
        let n = r.gen_range(1..=4);
        let mut u = Matrix::<G>::identity(n);
        if n >= 2 {
            for _ in 0..3 {
                let rot = pythagorean_rotation::<G>(n, r.gen_range(0..n - 1));
                u = if r.gen_bool(0.5) { u.mul_mat(&rot) } else { u.mul_mat(&rot.adjoint()) };
            }
        }
        let d: Vec<Rational> = (0..n).map(|_| q(r.gen_range(0..=12), 4)).collect();
        let diag = |v: &[Rational]| Matrix::diag(&v.iter().map(|x| G::from_real(x.clone())).collect::<Vec<_>>());
        let alg = BlockAlgebra::new(vec![n]).unwrap();
        let a = alg.element(vec![u.mul_mat(&diag(&d)).mul_mat(&u.adjoint())]).unwrap();
        let eps = eps_choices[r.gen_range(0..eps_choices.len())].clone();
        let delta = eps_choices[r.gen_range(0..eps_choices.len())].clone();

        let fe = f_eps(&a, &eps, Mode::Exact).unwrap();
        assert!(fe.error_bound == qi(0), "case {case}: exact mode");
        let f = fe.value;
        let truncated: Vec<Rational> =
            d.iter().map(|x| if *x > eps { x.clone() - eps.clone() } else { qi(0) }).collect();
        let oracle = alg.element(vec![u.mul_mat(&diag(&truncated)).mul_mat(&u.adjoint())]).unwrap();
        assert_eq!(f, oracle, "case {case}: U max(D − ε, 0) U*");
        assert!(is_positive(&f), "case {case}: f_ε(a) ≥ 0");
        assert!(f.commutator(&a).is_zero(), "case {case}: commutes with a");

        let enc = op_norm(&a.sub(&f), &slack).unwrap();
        let max_d = d.iter().max().unwrap().clone();
        let exact = if max_d < eps { max_d } else { eps.clone() };
        assert!(enc.contains(&exact), "case {case}: enclosure contains ‖a − f_ε(a)‖ = {exact}");
        assert!(enc.hi <= eps.clone() + slack.clone(), "case {case}: ‖a − f_ε(a)‖ ≤ ε");

        let composed = f_eps(&f_eps(&a, &delta, Mode::Exact).unwrap().value, &eps, Mode::Exact).unwrap().value;
        assert_eq!(composed, f_eps(&a, &(eps + delta), Mode::Exact).unwrap().value, "case {case}: f_ε ∘ f_δ = f_(ε+δ)");
    }
    pass(8, "spectral truncation", format!("{SPECTRAL_CASES} random U D U*, slack {slack}"));
}

fn wedge_triangulation(k: usize) -> Cover {
    let mut facets = Vec::new();
    for i in 0..k {
        let (a, b) = (1 + 2 * i, 2 + 2 * i);
        facets.extend([vec![0, a], vec![a, b], vec![0, b]]);
    }
    Cover::table(1 + 2 * k, facets).unwrap()
}

/// The 3×3 grid on the square; the horizontal sides are glued with a flip
/// when `twisted`, giving the Klein bottle instead of the torus.
fn grid_triangulation(twisted: bool) -> Cover {
    let v = |i: usize, j: usize| {
        let j = j % 3;
        if i == 3 {
            if twisted {
                (3 - j) % 3
            } else {
                j
            }
        } else {
            3 * i + j
        }
    };
    let mut facets = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            facets.push(vec![v(i, j), v(i + 1, j), v(i + 1, j + 1)]);
            facets.push(vec![v(i, j), v(i, j + 1), v(i + 1, j + 1)]);
        }
    }
    Cover::table(9, facets).unwrap()
}

fn projective_plane_triangulation() -> Cover {
    let facets = [[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 1], [1, 2, 4], [2, 3, 5], [3, 4, 1], [4, 5, 2], [5, 1, 3]];
    Cover::table(6, facets.iter().map(|f| f.to_vec()).collect()).unwrap()
}

fn pi1_against_h1(name: &str, x: &TwoComplex, tri: &Cover, expect: &FgAbGroup) -> bool {
    let p = pi1_presentation(x, 0).unwrap();
    let ab = p.abelianization();
    assert_eq!(&ab, expect, "{name}: abelianised π1");
    let cech = cech_cohomology(tri, &z(), DEFAULT_CAP_DIM).unwrap().groups;
    let cell = x.cellular_cochains().cohomology();
    for (side, h) in [("Čech", &cech), ("cellular", &cell)] {
        assert_eq!(h[0], z(), "{name}: connected ({side})");
        assert_eq!(h[1].rank, ab.rank, "{name}: H¹ rank ({side})");
        assert!(h[1].torsion.is_empty(), "{name}: H¹ torsion-free ({side})");
        let h2 = h.get(2).map(|g| g.torsion.clone()).unwrap_or_default();
        assert_eq!(h2, ab.torsion, "{name}: H² torsion ({side})");
    }
    p.is_free()
}

#[test]
fn criterion_09_fundamental_groups() {
    for k in 1..=WEDGE_MAX {
        let free = pi1_against_h1(&format!("wedge of {k}"), &TwoComplex::wedge(k), &wedge_triangulation(k), &FgAbGroup::free(k));
        assert!(free, "wedge of {k} circles has a free fundamental group");
    }
    pi1_against_h1("torus", &TwoComplex::torus(), &grid_triangulation(false), &FgAbGroup::free(2));
    pi1_against_h1("Klein bottle", &TwoComplex::klein_bottle(), &grid_triangulation(true), &FgAbGroup::new(1, vec![2]).unwrap());
    pi1_against_h1("projective plane", &TwoComplex::projective_plane(), &projective_plane_triangulation(), &FgAbGroup::cyclic(2));
    pass(9, "π1 against H¹", format!("wedges 1..={WEDGE_MAX}, torus, Klein bottle, projective plane"));
}

#[test]
fn criterion_10_coverings() {
    let qd = CoveringQuadruple::<G>::cyclic_swap(2, 2).unwrap();
    assert!(qd.check_precovering().ok);
    let pts = qd.sample(EVENLY_COVERED_SAMPLES, &mut rng(10));
    for p in &pts {
        let e = qd.check_evenly_covered(&rank_one_corner(&qd.base, p)).unwrap();
        assert!(e.ok(), "rank-one corner at {p:?} is evenly covered");
    }
    assert!(qd.check_unital_covering(&pts).unwrap().ok);

    let hex = GraphMap::cycle_wrap(3, 2);
    let v = hex.check_covering();
    assert!(v.covering);
    let (src, map) = (&hex.source, &hex.map);
    let deck: BTreeSet<Vec<usize>> = permutations(src.len())
        .into_iter()
        .filter(|s| {
            (0..src.len()).all(|i| map[s[i]] == map[i])
                && src.edges().iter().all(|&[a, b]| src.adjacent(s[a], s[b]))
        })
        .collect();
    assert_eq!(deck.len(), 2, "hexagon over triangle has two deck transformations");
    assert_eq!(deck, v.deck_group.iter().cloned().collect(), "deck group against brute force");

    let p12 = GraphMap::cycle_wrap(3, 4);
    let p6 = GraphMap::cycle_wrap(3, 2);
    let f = GraphMap::factor(&p12, &p6).unwrap().expect("12-cycle factors through the 6-cycle");
    for &[a, b] in &p12.source.edges() {
        assert!(p6.source.adjacent(f.map[a], f.map[b]));
    }
    assert!((0..p12.source.len()).all(|i| p6.map[f.map[i]] == p12.map[i]), "triangle commutes");
    assert!(f.check_covering().covering, "the factor is a covering");
    let fibres: Vec<Vec<usize>> =
        (0..p12.source.len()).map(|i| (0..p6.source.len()).filter(|&j| p6.map[j] == p12.map[i]).collect()).collect();
    let mut brute = 0;
    for choice in 0u64..1 << p12.source.len() {
        let g: Vec<usize> = fibres.iter().enumerate().map(|(i, fb)| fb[(choice >> i & 1) as usize]).collect();
        if p12.source.edges().iter().all(|&[a, b]| p6.source.adjacent(g[a], g[b])) {
            brute += 1;
        }
    }
    assert_eq!(GraphMap::factorizations(&p12, &p6, usize::MAX).unwrap().len(), brute, "all factorisations");
    pass(10, "coverings", format!("{EVENLY_COVERED_SAMPLES} swap corners, deck group of order 2, {brute} factorisations 12 → 6"));
}

fn blowups(n: usize) -> Vec<BlowingUp> {
    let dims = [2, 1, 2, 1];
    let mut out = Vec::new();
    let mut d: Vec<usize> = dims[..n].to_vec();
    d.push(1);
    let mut b2p: Vec<usize> = (0..n).collect();
    b2p.push(0);
    out.push(BlowingUp::new(BlockAlgebra::new(d).unwrap(), FiniteSpace::discrete(n), b2p).unwrap());
    if n >= 2 {
        let d = dims[..n - 1].to_vec();
        out.push(BlowingUp::new(BlockAlgebra::new(d).unwrap(), FiniteSpace::discrete(n), (0..n - 1).collect()).unwrap());
    }
    out
}

#[test]
fn criterion_11_blowing_up() {
    let mut opens_checked = 0;
    for n in 1..=BLOWUP_MAX {
        for b in blowups(n) {
            assert!(b.check_u_laws::<G>().unwrap().is_empty());
            let (left, right) = b.is_dense::<G>();
            assert!(left && right && b.is_central::<G>());
            let alg = &b.algebra;
            let units = alg.matrix_units::<G>();
            let phi = b.embedding::<G>();
            let funcs = b.functions();
            let mut corners: Vec<(Mask, Subspace<G>)> = Vec::new();
            for &u in b.space.opens() {
                let s = b.u_subalgebra::<G>(u).unwrap();
                let in_u = |x: usize| u >> b.block_to_point[x] & 1 == 1;
                let f_u = alg
                    .element(
                        alg.dims()
                            .iter()
                            .enumerate()
                            .map(|(x, &d)| if in_u(x) { Matrix::identity(d) } else { Matrix::zeros(d, d) })
                            .collect(),
                    )
                    .unwrap();
                let one_u = funcs
                    .element((0..n).map(|p| Matrix::from_vec(1, 1, vec![if u >> p & 1 == 1 { G::from_i64(1) } else { G::from_i64(0) }])).collect())
                    .unwrap();
                assert_eq!(phi.apply(&one_u), f_u, "image of the indicator of {u:b}");
                let left_oracle: Vec<Element<G>> = units.iter().map(|e| f_u.mul(e)).collect();
                let right_oracle: Vec<Element<G>> = units.iter().map(|e| e.mul(&f_u)).collect();
                let corner_oracle: Vec<Element<G>> = units.iter().map(|e| f_u.mul(e).mul(&f_u)).collect();
                assert_eq!(ideal_span(alg, &s.left), span_of(alg, &left_oracle), "left, open {u:b}");
                let right: Vec<Element<G>> = s.right.basis_elements(alg).iter().map(Element::adjoint).collect();
                assert_eq!(span_of(alg, &right), span_of(alg, &right_oracle), "right, open {u:b}");
                let corner = span_of(alg, &corner_oracle);
                assert_eq!(alg.span(&s.corner.basis_elements(alg)), corner, "corner, open {u:b}");
                corners.push((u, corner));
                opens_checked += 1;
            }
            for (u, cu) in &corners {
                for (v, cv) in &corners {
                    if mask_subset(*u, *v) {
                        assert!(cu.is_subspace_of(cv), "monotone in the open set");
                    }
                    if u & v == 0 {
                        let (eu, ev) = (b.u_subalgebra::<G>(*u).unwrap(), b.u_subalgebra::<G>(*v).unwrap());
                        for x in eu.corner.basis_elements(alg) {
                            for y in ev.corner.basis_elements(alg) {
                                assert!(x.mul(&y).is_zero(), "disjoint opens give orthogonal corners");
                            }
                        }
                    }
                }
            }
            let sample = sample_points::<G>(alg, FACTOR_SAMPLES, &mut rng(11 + n as u64));
            assert!(b.factorization(&sample).unwrap().commutes, "factorisation commutes");
        }
    }

    let mut r = rng(111);
    let eps = support_eps();
    let bs: Vec<BlowingUp> = (1..=BLOWUP_MAX).flat_map(blowups).collect();
    for case in 0..SUPPORT_PAIRS {
        let b = &bs[case % bs.len()];
        let alg = &b.algebra;
        let oracle = |e: &Element<G>| {
            e.blocks.iter().enumerate().filter(|(_, m)| !m.is_zero()).fold(0 as Mask, |acc, (x, _)| acc | 1 << b.block_to_point[x])
        };
        let (a, c) = (sparse_element(&mut r, alg), sparse_element(&mut r, alg));
        let (sa, sc) = (b.support(&a).unwrap(), b.support(&c).unwrap());
        assert_eq!(sa, oracle(&a), "case {case}: support against its definition");
        assert!(mask_subset(b.support(&c.mul(&a)).unwrap(), sa), "case {case}: supp(ca) ⊆ supp(a)");
        assert!(mask_subset(b.support(&a.mul(&c)).unwrap(), sa), "case {case}: supp(ac) ⊆ supp(a)");
        assert!(mask_subset(b.support(&a.add(&c)).unwrap(), sa | sc), "case {case}: supp(a + c)");
        let aa = a.adjoint().mul(&a);
        let bigger = aa.add(&c.adjoint().mul(&c));
        assert!(mask_subset(b.support(&aa).unwrap(), b.support(&bigger).unwrap()), "case {case}: 0 ≤ a ≤ b");
        assert!(b.space.is_closed(sa));
        assert!(b.approx_compact(&a, &eps).unwrap().ok, "case {case}: compact approximation");
    }
    pass(11, "blowing up", format!("{opens_checked} open sets, {SUPPORT_PAIRS} support pairs"));
}
