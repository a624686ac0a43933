//! Finitely generated abelian groups in canonical form and homomorphisms
//! between them.
//!
//! A group `Z/d_1 ⊕ ... ⊕ Z/d_t ⊕ Z^r` has coordinates ordered torsion first
//! (ascending, `d_1 | d_2 | ...`), then free. More general groups appear as
//! "diagonal" groups `Z^n / diag(m_i)` where a modulus of 0 means a free
//! coordinate; [`Subquotient`] turns any subquotient of such a group into
//! canonical form together with coordinate maps in both directions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::linalg::Matrix;
use crate::snf::{integer_kernel, integer_solve_with, lattice_basis, smith_normal_form, Snf};
use crate::{Error, Result};

pub type ZMatrix = Matrix<i64>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FgAbGroup {
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub torsion: Vec<i64>,
}

impl FgAbGroup {
    pub fn new(rank: usize, torsion: Vec<i64>) -> Result<Self> {
        let g = FgAbGroup { rank, torsion };
        g.validate()?;
        Ok(g)
    }

    pub fn zero() -> Self {
        FgAbGroup { rank: 0, torsion: vec![] }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup { rank, torsion: vec![] }
    }

    pub fn cyclic(d: i64) -> Self {
        match d {
            0 => FgAbGroup::free(1),
            1 => FgAbGroup::zero(),
            _ => FgAbGroup { rank: 0, torsion: vec![d.abs()] },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.torsion.iter().any(|&d| d < 2) {
            return Err(Error::Structural("torsion invariants must be at least 2".into()));
        }
        if self.torsion.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::Structural("torsion invariants must form a divisibility chain".into()));
        }
        Ok(())
    }

    /// Number of canonical generators.
    pub fn ngens(&self) -> usize {
        self.torsion.len() + self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.ngens() == 0
    }

    /// Per-coordinate moduli, 0 for free coordinates.
    pub fn moduli(&self) -> Vec<i64> {
        let mut m = self.torsion.clone();
        m.extend(std::iter::repeat_n(0, self.rank));
        m
    }

    /// Number of elements, `None` when infinite.
    pub fn order(&self) -> Option<i64> {
        (self.rank == 0).then(|| self.torsion.iter().product())
    }

    /// Canonical representative of an element.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        reduce_mod(&self.moduli(), v)
    }

    pub fn is_zero_elem(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// All elements, for finite groups.
    pub fn elements(&self) -> Option<Vec<Vec<i64>>> {
        if self.rank > 0 {
            return None;
        }
        let mut out = vec![vec![]];
        for &d in &self.torsion {
            out = out
                .into_iter()
                .flat_map(|v: Vec<i64>| {
                    (0..d).map(move |k| {
                        let mut w = v.clone();
                        w.push(k);
                        w
                    })
                })
                .collect();
        }
        Some(out)
    }

    /// Elements with free coordinates in `-window..=window`.
    pub fn elements_windowed(&self, window: i64) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for m in self.moduli() {
            let range: Vec<i64> = if m == 0 { (-window..=window).collect() } else { (0..m).collect() };
            out = out
                .into_iter()
                .flat_map(|v: Vec<i64>| {
                    range.iter().map(move |&k| {
                        let mut w = v.clone();
                        w.push(k);
                        w
                    })
                })
                .collect();
        }
        out
    }

    /// Canonical form of `⊕ groups` with the coordinate isomorphism.
    pub fn direct_sum(groups: &[FgAbGroup]) -> Subquotient {
        let moduli: Vec<i64> = groups.iter().flat_map(|g| g.moduli()).collect();
        Subquotient::of_diagonal(&moduli)
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn reduce_mod(moduli: &[i64], v: &[i64]) -> Vec<i64> {
    v.iter().zip(moduli).map(|(&x, &m)| if m == 0 { x } else { x.rem_euclid(m) }).collect()
}

/// Columns `m_i e_i` generating the relations of `Z^n / diag(moduli)`.
pub fn relation_columns(moduli: &[i64]) -> Vec<Vec<i64>> {
    let n = moduli.len();
    moduli
        .iter()
        .enumerate()
        .filter(|(_, &m)| m != 0)
        .map(|(i, &m)| {
            let mut c = vec![0; n];
            c[i] = m;
            c
        })
        .collect()
}

/// `span(gens) / span(rels)` inside `Z^n`, brought to canonical form.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub group: FgAbGroup,
    /// Column `j` is a representative in `Z^n` of canonical generator `j`.
    pub reps: ZMatrix,
    basis: ZMatrix,
    basis_snf: Snf<i64>,
    u: ZMatrix,
    selected: Vec<usize>,
}

impl Subquotient {
    /// Requires `span(rels) ⊆ span(gens)`; both given as column lists.
    pub fn new(n: usize, gens: &[Vec<i64>], rels: &[Vec<i64>]) -> Result<Self> {
        let g = Matrix::from_cols(gens, n);
        let basis = lattice_basis(&g);
        let basis_snf = smith_normal_form(&basis);
        let r = basis.ncols();
        let mut ys = Vec::with_capacity(rels.len());
        for rel in rels {
            let y = integer_solve_with(&basis_snf, rel).ok_or_else(|| {
                Error::Structural("relation outside the generated subgroup".into())
            })?;
            ys.push(y);
        }
        let y = Matrix::from_cols(&ys, r);
        let f = smith_normal_form(&y);
        let inv = f.invariants();
        let mut selected = Vec::new();
        let mut torsion = Vec::new();
        for (i, d) in inv.iter().enumerate() {
            if *d > 1 {
                selected.push(i);
                torsion.push(*d);
            }
        }
        selected.extend(f.rank..r);
        let group = FgAbGroup { rank: r - f.rank, torsion };
        let reps_cols: Vec<Vec<i64>> =
            selected.iter().map(|&i| basis.mul_vec(&f.u_inv.col(i))).collect();
        let reps = Matrix::from_cols(&reps_cols, n);
        Ok(Subquotient { group, reps, basis, basis_snf, u: f.u, selected })
    }

    /// `Z^n / diag(moduli)`.
    pub fn of_diagonal(moduli: &[i64]) -> Self {
        let n = moduli.len();
        let gens: Vec<Vec<i64>> = Matrix::<i64>::identity(n).rows_vec();
        Subquotient::new(n, &gens, &relation_columns(moduli)).expect("diagonal relations lie in Z^n")
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Canonical coordinates of `v`, which must lie in the generated subgroup.
    pub fn coords(&self, v: &[i64]) -> Result<Vec<i64>> {
        let y = integer_solve_with(&self.basis_snf, v)
            .ok_or_else(|| Error::Structural("vector outside the generated subgroup".into()))?;
        let z = self.u.mul_vec(&y);
        let raw: Vec<i64> = self.selected.iter().map(|&i| z[i]).collect();
        Ok(self.group.reduce(&raw))
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        integer_solve_with(&self.basis_snf, v).is_some()
    }

    /// Representative in `Z^n` of canonical coordinates.
    pub fn lift(&self, c: &[i64]) -> Vec<i64> {
        self.reps.mul_vec(c)
    }
}

/// Homomorphism of canonical groups, as an integer matrix acting on
/// coordinate columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbHom {
    pub source: FgAbGroup,
    pub target: FgAbGroup,
    pub matrix: Vec<Vec<i64>>,
}

impl AbHom {
    pub fn new(source: FgAbGroup, target: FgAbGroup, m: &ZMatrix) -> Result<Self> {
        if m.nrows() != target.ngens() || m.ncols() != source.ngens() {
            return Err(Error::Structural(format!(
                "homomorphism matrix is {}x{}, expected {}x{}",
                m.nrows(),
                m.ncols(),
                target.ngens(),
                source.ngens()
            )));
        }
        let h = AbHom::raw(source, target, m);
        h.check_well_defined()?;
        Ok(h)
    }

    fn raw(source: FgAbGroup, target: FgAbGroup, m: &ZMatrix) -> Self {
        let tm = target.moduli();
        let mut m = m.clone();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if tm[i] != 0 {
                    m[(i, j)] = m[(i, j)].rem_euclid(tm[i]);
                }
            }
        }
        AbHom { source, target, matrix: m.rows_vec() }
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        AbHom::raw(g.clone(), g.clone(), &Matrix::identity(g.ngens()))
    }

    pub fn zero(source: &FgAbGroup, target: &FgAbGroup) -> Self {
        AbHom::raw(source.clone(), target.clone(), &Matrix::zeros(target.ngens(), source.ngens()))
    }

    pub fn mat(&self) -> ZMatrix {
        Matrix::from_rows(&self.matrix, self.source.ngens())
    }

    /// Each torsion generator of order `d` must map to an element killed by `d`.
    pub fn check_well_defined(&self) -> Result<()> {
        let m = self.mat();
        for (j, d) in self.source.moduli().into_iter().enumerate() {
            if d == 0 {
                continue;
            }
            let img: Vec<i64> = m.col(j).into_iter().map(|x| x * d).collect();
            if !self.target.is_zero_elem(&img) {
                return Err(Error::Structural(format!(
                    "homomorphism does not respect the order {d} of generator {j}"
                )));
            }
        }
        Ok(())
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.target.reduce(&self.mat().mul_vec(v))
    }

    /// `self ∘ first`
    pub fn compose(&self, first: &AbHom) -> Result<AbHom> {
        if first.target != self.source {
            return Err(Error::Structural("composition of incompatible homomorphisms".into()));
        }
        Ok(AbHom::raw(first.source.clone(), self.target.clone(), &self.mat().mul_mat(&first.mat())))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(|&x| x == 0)
    }

    fn relations(&self) -> Vec<Vec<i64>> {
        relation_columns(&self.target.moduli())
    }

    /// Kernel with its inclusion into the source.
    pub fn kernel(&self) -> (FgAbGroup, AbHom) {
        let (m, n) = (self.source.ngens(), self.target.ngens());
        let mut cols: Vec<Vec<i64>> = (0..m).map(|j| self.mat().col(j)).collect();
        cols.extend(self.relations());
        let k = integer_kernel(&Matrix::from_cols(&cols, n));
        let gens: Vec<Vec<i64>> = (0..k.ncols()).map(|j| k.col(j)[..m].to_vec()).collect();
        let sq = Subquotient::new(m, &gens, &relation_columns(&self.source.moduli()))
            .expect("source relations lie in the kernel");
        let inc = AbHom::raw(sq.group.clone(), self.source.clone(), &sq.reps);
        (sq.group, inc)
    }

    /// Cokernel with its projection from the target.
    pub fn cokernel(&self) -> (FgAbGroup, AbHom) {
        let n = self.target.ngens();
        let mut rels: Vec<Vec<i64>> = (0..self.source.ngens()).map(|j| self.mat().col(j)).collect();
        rels.extend(self.relations());
        let gens = Matrix::<i64>::identity(n).rows_vec();
        let sq = Subquotient::new(n, &gens, &rels).expect("relations lie in Z^n");
        let cols: Vec<Vec<i64>> = gens.iter().map(|e| sq.coords(e).expect("in Z^n")).collect();
        let proj = AbHom::raw(self.target.clone(), sq.group.clone(), &Matrix::from_cols(&cols, sq.group.ngens()));
        (sq.group, proj)
    }

    pub fn image(&self) -> FgAbGroup {
        let n = self.target.ngens();
        let rels = self.relations();
        let mut gens: Vec<Vec<i64>> = (0..self.source.ngens()).map(|j| self.mat().col(j)).collect();
        gens.extend(rels.iter().cloned());
        Subquotient::new(n, &gens, &rels).expect("relations lie in the image").group
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().0.is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().0.is_zero()
    }

    pub fn is_iso(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Equality as maps (entries compared modulo target torsion).
    pub fn same_map(&self, o: &AbHom) -> bool {
        self.source == o.source
            && self.target == o.target
            && (0..self.source.ngens()).all(|j| {
                let mut e = vec![0; self.source.ngens()];
                e[j] = 1;
                self.apply(&e) == o.apply(&e)
            })
    }

    /// Every homomorphism whose free-target entries lie in `-window..=window`.
    pub fn enumerate(source: &FgAbGroup, target: &FgAbGroup, window: i64) -> Vec<AbHom> {
        let (m, n) = (source.ngens(), target.ngens());
        let ranges: Vec<Vec<i64>> = target
            .moduli()
            .into_iter()
            .map(|d| if d == 0 { (-window..=window).collect() } else { (0..d).collect() })
            .collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; m * n];
        loop {
            let mut mat = Matrix::zeros(n, m);
            for i in 0..n {
                for j in 0..m {
                    mat[(i, j)] = ranges[i][idx[i * m + j]];
                }
            }
            let h = AbHom::raw(source.clone(), target.clone(), &mat);
            if h.check_well_defined().is_ok() {
                out.push(h);
            }
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return out;
                }
                idx[k] += 1;
                if idx[k] < ranges[k / m.max(1)].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    /// Some `x` with `self(x) = y`.
    pub fn preimage(&self, y: &[i64]) -> Option<Vec<i64>> {
        let n = self.target.ngens();
        let m = self.source.ngens();
        let mut cols: Vec<Vec<i64>> = (0..m).map(|j| self.mat().col(j)).collect();
        cols.extend(self.relations());
        let a = Matrix::from_cols(&cols, n);
        let x = crate::snf::integer_solve(&a, y)?;
        Some(self.source.reduce(&x[..m]))
    }
}

impl fmt::Display for AbHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} {:?}", self.source, self.target, self.matrix)
    }
}

/// Graded groups and differentials `d^p : C^p → C^{p+1}` between diagonal
/// groups.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    /// Per-degree coordinate moduli (0 = free).
    pub moduli: Vec<Vec<i64>>,
    /// `diffs[p]` maps degree `p` to degree `p+1`; one fewer than degrees.
    pub diffs: Vec<ZMatrix>,
}

impl CochainComplex {
    pub fn new(moduli: Vec<Vec<i64>>, diffs: Vec<ZMatrix>) -> Result<Self> {
        if diffs.len() + 1 != moduli.len().max(1) {
            return Err(Error::Structural("differential count must be degree count minus one".into()));
        }
        for (p, d) in diffs.iter().enumerate() {
            if d.ncols() != moduli[p].len() || d.nrows() != moduli[p + 1].len() {
                return Err(Error::Structural(format!("differential {p} has the wrong shape")));
            }
        }
        Ok(CochainComplex { moduli, diffs })
    }

    pub fn top_degree(&self) -> usize {
        self.moduli.len().saturating_sub(1)
    }

    /// `d^{p+1} ∘ d^p = 0` modulo the relations of degree `p+2`.
    pub fn check_d_squared(&self) -> bool {
        self.diffs.windows(2).enumerate().all(|(p, w)| {
            let dd = w[1].mul_mat(&w[0]);
            (0..dd.ncols()).all(|j| reduce_mod(&self.moduli[p + 2], &dd.col(j)).iter().all(|&x| x == 0))
        })
    }

    /// Cocycles modulo coboundaries in degree `p`.
    pub fn cohomology_subquotient(&self, p: usize) -> Subquotient {
        let n = self.moduli[p].len();
        let own_rels = relation_columns(&self.moduli[p]);
        let cocycles: Vec<Vec<i64>> = match self.diffs.get(p) {
            Some(d) => {
                let mut cols: Vec<Vec<i64>> = (0..n).map(|j| d.col(j)).collect();
                cols.extend(relation_columns(&self.moduli[p + 1]));
                let k = integer_kernel(&Matrix::from_cols(&cols, d.nrows()));
                (0..k.ncols()).map(|j| k.col(j)[..n].to_vec()).collect()
            }
            None => Matrix::<i64>::identity(n).rows_vec(),
        };
        let mut rels = own_rels;
        if p > 0 {
            let d = &self.diffs[p - 1];
            rels.extend((0..d.ncols()).map(|j| d.col(j)));
        }
        Subquotient::new(n, &cocycles, &rels).expect("coboundaries are cocycles")
    }

    pub fn cohomology(&self) -> Vec<FgAbGroup> {
        (0..self.moduli.len()).map(|p| self.cohomology_subquotient(p).group).collect()
    }

    /// Map induced on `H^p` by a degree-`p` cochain map `f : self → other`.
    pub fn induced_map(&self, other: &CochainComplex, p: usize, f: &ZMatrix) -> Result<AbHom> {
        let src = self.cohomology_subquotient(p);
        let tgt = other.cohomology_subquotient(p);
        let mut cols = Vec::with_capacity(src.group.ngens());
        for j in 0..src.group.ngens() {
            let img = f.mul_vec(&src.reps.col(j));
            cols.push(tgt.coords(&img).map_err(|_| {
                Error::Structural(format!("cochain map does not send cocycles to cocycles in degree {p}"))
            })?);
        }
        AbHom::new(src.group.clone(), tgt.group.clone(), &Matrix::from_cols(&cols, tgt.group.ngens()))
    }
}
