//! Finite-dimensional C*-algebra models `⊕_i M_{n_i}` over an exact field,
//! their elements, closed left ideals `L_V = ⊕ M_{n_i} P_{V_i}` and
//! hereditary corners.

pub mod automorphism;
pub mod lattice;
pub mod spectral;

use serde::{Deserialize, Serialize};

use crate::linalg::{Matrix, Subspace};
use crate::scalar::Field;
use crate::{Error, Result};

pub use automorphism::Automorphism;
pub use lattice::{Bicommutant, PresentedLattice};
pub use spectral::{Mode, NormEnclosure};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BlockAlgebraDoc", into = "BlockAlgebraDoc")]
pub struct BlockAlgebra {
    dims: Vec<usize>,
    names: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockAlgebraDoc {
    pub block_dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

impl TryFrom<BlockAlgebraDoc> for BlockAlgebra {
    type Error = Error;
    fn try_from(d: BlockAlgebraDoc) -> Result<Self> {
        let a = BlockAlgebra::new(d.block_dims)?;
        match d.names {
            Some(n) => a.with_names(n),
            None => Ok(a),
        }
    }
}

impl From<BlockAlgebra> for BlockAlgebraDoc {
    fn from(a: BlockAlgebra) -> Self {
        BlockAlgebraDoc { block_dims: a.dims, names: a.names }
    }
}

impl BlockAlgebra {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Structural("algebra needs at least one block".into()));
        }
        if dims.contains(&0) {
            return Err(Error::Structural("block dimensions must be positive".into()));
        }
        Ok(BlockAlgebra { dims, names: None })
    }

    /// `C(X)` for a discrete `X` with `n` points.
    pub fn commutative(n: usize) -> Result<Self> {
        BlockAlgebra::new(vec![1; n])
    }

    /// Names the blocks (points of the spectrum).
    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.dims.len() {
            return Err(Error::Structural("one name per block is required".into()));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn nblocks(&self) -> usize {
        self.dims.len()
    }
    pub fn block_dim(&self, x: usize) -> usize {
        self.dims[x]
    }

    pub fn block_name(&self, x: usize) -> String {
        match &self.names {
            Some(n) => n[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn block_by_name(&self, name: &str) -> Option<usize> {
        match &self.names {
            Some(n) => n.iter().position(|m| m == name),
            None => name.parse().ok().filter(|&x: &usize| x < self.nblocks()),
        }
    }

    /// Linear dimension `Σ n_i²`.
    pub fn dim(&self) -> usize {
        self.dims.iter().map(|n| n * n).sum()
    }

    pub fn is_commutative(&self) -> bool {
        self.dims.iter().all(|&n| n == 1)
    }

    /// Block index set; block `x` is the irreducible representation `rep_x`.
    pub fn spectrum(&self) -> Vec<usize> {
        (0..self.nblocks()).collect()
    }

    /// A single block: the only central projections are 0 and 1.
    pub fn is_connected(&self) -> bool {
        self.dims.len() == 1
    }

    fn offset(&self, x: usize) -> usize {
        self.dims[..x].iter().map(|n| n * n).sum()
    }

    pub fn check_block(&self, x: usize) -> Result<()> {
        if x >= self.nblocks() {
            return Err(Error::Structural(format!("block {x} out of range ({} blocks)", self.nblocks())));
        }
        Ok(())
    }

    pub fn zero<F: Field>(&self) -> Element<F> {
        Element { blocks: self.dims.iter().map(|&n| Matrix::zeros(n, n)).collect() }
    }

    pub fn one<F: Field>(&self) -> Element<F> {
        Element { blocks: self.dims.iter().map(|&n| Matrix::identity(n)).collect() }
    }

    /// Matrix unit `e_{rc}` of block `x`.
    pub fn unit<F: Field>(&self, x: usize, r: usize, c: usize) -> Element<F> {
        let mut e = self.zero();
        e.blocks[x][(r, c)] = F::one();
        e
    }

    /// Identity of block `x`, zero elsewhere (a minimal central projection).
    pub fn block_one<F: Field>(&self, x: usize) -> Element<F> {
        let mut e = self.zero();
        e.blocks[x] = Matrix::identity(self.dims[x]);
        e
    }

    /// All matrix units, block by block, row-major.
    pub fn matrix_units<F: Field>(&self) -> Vec<Element<F>> {
        let mut out = Vec::with_capacity(self.dim());
        for (x, &n) in self.dims.iter().enumerate() {
            for r in 0..n {
                for c in 0..n {
                    out.push(self.unit(x, r, c));
                }
            }
        }
        out
    }

    /// Element with block `x` equal to `m`, zero elsewhere.
    pub fn embed<F: Field>(&self, x: usize, m: Matrix<F>) -> Result<Element<F>> {
        self.check_block(x)?;
        if m.nrows() != self.dims[x] || m.ncols() != self.dims[x] {
            return Err(Error::Structural(format!("block {x} needs a {0}x{0} matrix", self.dims[x])));
        }
        let mut e = self.zero();
        e.blocks[x] = m;
        Ok(e)
    }

    pub fn element<F: Field>(&self, blocks: Vec<Matrix<F>>) -> Result<Element<F>> {
        let e = Element { blocks };
        self.check_element(&e)?;
        Ok(e)
    }

    pub fn check_element<F: Field>(&self, e: &Element<F>) -> Result<()> {
        if e.blocks.len() != self.nblocks() {
            return Err(Error::Structural(format!(
                "element has {} blocks, algebra has {}",
                e.blocks.len(),
                self.nblocks()
            )));
        }
        for (x, (b, &n)) in e.blocks.iter().zip(&self.dims).enumerate() {
            if b.nrows() != n || b.ncols() != n {
                return Err(Error::Structural(format!("block {x} must be {n}x{n}")));
            }
        }
        Ok(())
    }

    pub fn vectorize<F: Field>(&self, e: &Element<F>) -> Vec<F> {
        e.blocks.iter().flat_map(|b| b.data().iter().cloned()).collect()
    }

    pub fn devectorize<F: Field>(&self, v: &[F]) -> Element<F> {
        let blocks = self
            .dims
            .iter()
            .enumerate()
            .map(|(x, &n)| {
                let o = self.offset(x);
                Matrix::from_vec(n, n, v[o..o + n * n].to_vec())
            })
            .collect();
        Element { blocks }
    }

    /// Linear span of elements, as a subspace of `F^{dim}`.
    pub fn span<F: Field>(&self, es: &[Element<F>]) -> Subspace<F> {
        Subspace::span(self.dim(), &es.iter().map(|e| self.vectorize(e)).collect::<Vec<_>>())
    }

    /// Basis of `{z | z·s = s·z for every s}`, by an exact linear solve.
    pub fn commutant_of_set<F: Field>(&self, set: &[Element<F>]) -> Vec<Element<F>> {
        let basis: Vec<Element<F>> = self.matrix_units();
        let mut rows: Vec<Vec<F>> = Vec::new();
        for s in set {
            let cols: Vec<Vec<F>> = basis.iter().map(|b| self.vectorize(&b.commutator(s))).collect();
            rows.extend(Matrix::from_cols(&cols, self.dim()).rows_vec());
        }
        let m = Matrix::from_rows(&rows, self.dim());
        m.kernel().into_iter().map(|v| self.devectorize(&v)).collect()
    }

    /// Basis of the center: one central projection per block, checked
    /// against the commutant of the matrix units.
    pub fn center<F: Field>(&self) -> Result<Vec<Element<F>>> {
        let projections: Vec<Element<F>> = (0..self.nblocks()).map(|x| self.block_one(x)).collect();
        let solved = self.commutant_of_set(&self.matrix_units::<F>());
        if self.span(&solved) != self.span(&projections) {
            return Err(Error::Structural("center solve disagrees with block projections".into()));
        }
        Ok(projections)
    }

    /// Blocks where `a` is nonzero.
    pub fn support_blocks<F: Field>(&self, a: &Element<F>) -> Vec<usize> {
        (0..self.nblocks()).filter(|&x| !a.blocks[x].is_zero()).collect()
    }
}

/// One square matrix per block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Element<F> {
    pub blocks: Vec<Matrix<F>>,
}

impl<F: Field> Element<F> {
    fn zip(&self, o: &Self, f: impl Fn(&Matrix<F>, &Matrix<F>) -> Matrix<F>) -> Self {
        assert_eq!(self.blocks.len(), o.blocks.len(), "elements of different algebras");
        Element { blocks: self.blocks.iter().zip(&o.blocks).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, Matrix::add_mat)
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, Matrix::sub_mat)
    }
    pub fn mul(&self, o: &Self) -> Self {
        self.zip(o, Matrix::mul_mat)
    }
    pub fn commutator(&self, o: &Self) -> Self {
        self.zip(o, Matrix::commutator)
    }

    pub fn scale(&self, s: &F) -> Self {
        Element { blocks: self.blocks.iter().map(|b| b.scale(s)).collect() }
    }

    pub fn neg(&self) -> Self {
        Element { blocks: self.blocks.iter().map(Matrix::neg).collect() }
    }

    pub fn adjoint(&self) -> Self {
        Element { blocks: self.blocks.iter().map(Matrix::adjoint).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Matrix::is_zero)
    }

    pub fn is_hermitian(&self) -> bool {
        self.blocks.iter().all(Matrix::is_hermitian)
    }

    pub fn is_projection(&self) -> bool {
        self.is_hermitian() && self.mul(self) == *self
    }

    /// `rep_x(a)`.
    pub fn rep(&self, x: usize) -> &Matrix<F> {
        &self.blocks[x]
    }

    pub fn nblocks(&self) -> usize {
        self.blocks.len()
    }
}

/// Closed left ideal `L_V = ⊕ M_{n_i} P_{V_i}`: the matrices whose rows are
/// conjugates of vectors in `V_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LeftIdeal<F> {
    pub subspaces: Vec<Subspace<F>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealDoc<F> {
    pub subspaces: Vec<Vec<Vec<F>>>,
}

impl<F: Field + Serialize> Serialize for LeftIdeal<F> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IdealDoc { subspaces: self.subspaces.iter().map(|v| v.basis().to_vec()).collect() }.serialize(s)
    }
}

impl<F: Field> LeftIdeal<F> {
    pub fn new(alg: &BlockAlgebra, subspaces: Vec<Subspace<F>>) -> Result<Self> {
        if subspaces.len() != alg.nblocks() {
            return Err(Error::Structural(format!(
                "ideal has {} subspaces, algebra has {} blocks",
                subspaces.len(),
                alg.nblocks()
            )));
        }
        for (x, v) in subspaces.iter().enumerate() {
            if v.ambient() != alg.block_dim(x) {
                return Err(Error::Structural(format!("subspace {x} lives in the wrong dimension")));
            }
        }
        Ok(LeftIdeal { subspaces })
    }

    /// From spanning vectors per block.
    pub fn from_doc(alg: &BlockAlgebra, doc: &IdealDoc<F>) -> Result<Self> {
        if doc.subspaces.len() != alg.nblocks() {
            return Err(Error::Structural(format!(
                "ideal has {} subspaces, algebra has {} blocks",
                doc.subspaces.len(),
                alg.nblocks()
            )));
        }
        let mut vs = Vec::with_capacity(alg.nblocks());
        for (x, gens) in doc.subspaces.iter().enumerate() {
            let n = alg.block_dim(x);
            if let Some(g) = gens.iter().find(|g| g.len() != n) {
                return Err(Error::Structural(format!(
                    "block {x} vector has length {}, expected {n}",
                    g.len()
                )));
            }
            vs.push(Subspace::span(n, gens));
        }
        Ok(LeftIdeal { subspaces: vs })
    }

    pub fn zero(alg: &BlockAlgebra) -> Self {
        LeftIdeal { subspaces: alg.dims().iter().map(|&n| Subspace::zero(n)).collect() }
    }

    pub fn full(alg: &BlockAlgebra) -> Self {
        LeftIdeal { subspaces: alg.dims().iter().map(|&n| Subspace::full(n)).collect() }
    }

    /// `L_V` with `V` a line in block `x`, zero elsewhere: a minimal ideal.
    pub fn line(alg: &BlockAlgebra, x: usize, v: Vec<F>) -> Result<Self> {
        alg.check_block(x)?;
        if v.len() != alg.block_dim(x) {
            return Err(Error::Structural(format!("line in block {x} needs {} coordinates", alg.block_dim(x))));
        }
        if crate::linalg::is_zero_vec(&v) {
            return Err(Error::Structural("line generator must be nonzero".into()));
        }
        let mut l = LeftIdeal::zero(alg);
        l.subspaces[x] = Subspace::line(v);
        Ok(l)
    }

    fn check_same(&self, o: &Self) -> Result<()> {
        let a: Vec<usize> = self.subspaces.iter().map(Subspace::ambient).collect();
        let b: Vec<usize> = o.subspaces.iter().map(Subspace::ambient).collect();
        if a != b {
            return Err(Error::Structural("ideals belong to different algebras".into()));
        }
        Ok(())
    }

    pub fn meet(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        Ok(LeftIdeal { subspaces: self.subspaces.iter().zip(&o.subspaces).map(|(a, b)| a.intersect(b)).collect() })
    }

    /// Closed span of `L ∪ L'`.
    pub fn join(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        Ok(LeftIdeal { subspaces: self.subspaces.iter().zip(&o.subspaces).map(|(a, b)| a.sum(b)).collect() })
    }

    pub fn leq(&self, o: &Self) -> Result<bool> {
        self.check_same(o)?;
        Ok(self.subspaces.iter().zip(&o.subspaces).all(|(a, b)| a.is_subspace_of(b)))
    }

    /// `L^⊥ = {a | L a* = 0}`, which is `L_{V^⊥}` blockwise.
    pub fn commutant(&self) -> Self {
        LeftIdeal { subspaces: self.subspaces.iter().map(Subspace::complement).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.subspaces.iter().all(Subspace::is_zero)
    }

    pub fn is_full(&self) -> bool {
        self.subspaces.iter().all(Subspace::is_full)
    }

    /// Linear dimension `Σ n_i · dim V_i`.
    pub fn dim(&self) -> usize {
        self.subspaces.iter().map(|v| v.ambient() * v.dim()).sum()
    }

    /// `Y_L = {x | rep_x(L) ≠ 0}`.
    pub fn support_blocks(&self) -> Vec<usize> {
        (0..self.subspaces.len()).filter(|&x| !self.subspaces[x].is_zero()).collect()
    }

    pub fn contains(&self, a: &Element<F>) -> bool {
        a.blocks.iter().zip(&self.subspaces).all(|(m, v)| {
            (0..m.nrows()).all(|r| v.contains(&m.row(r).iter().map(Field::conj).collect::<Vec<_>>()))
        })
    }

    /// Linear basis: block `x`, row `r` equal to the conjugate of a basis vector.
    pub fn basis_elements(&self, alg: &BlockAlgebra) -> Vec<Element<F>> {
        let mut out = Vec::new();
        for (x, v) in self.subspaces.iter().enumerate() {
            let n = alg.block_dim(x);
            for r in 0..n {
                for b in v.basis() {
                    let mut m = Matrix::zeros(n, n);
                    for (c, bc) in b.iter().enumerate() {
                        m[(r, c)] = bc.conj();
                    }
                    out.push(alg.embed(x, m).expect("shape matches"));
                }
            }
        }
        out
    }

    /// `P_V` as an algebra element.
    pub fn projection(&self) -> Element<F> {
        Element { blocks: self.subspaces.iter().map(Subspace::projector).collect() }
    }

    /// The hereditary subalgebra `L ∩ L* = ⊕ P_{V_i} M P_{V_i}`.
    pub fn hereditary(&self) -> Corner<F> {
        Corner { subspaces: self.subspaces.clone() }
    }
}

/// Hereditary corner `⊕ P_{V_i} M_{n_i} P_{V_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Corner<F> {
    pub subspaces: Vec<Subspace<F>>,
}

impl<F: Field> Corner<F> {
    /// From a projection `p`, checked to be self-adjoint and idempotent.
    pub fn from_projection(alg: &BlockAlgebra, p: &Element<F>) -> Result<Self> {
        alg.check_element(p)?;
        if !p.is_projection() {
            return Err(Error::Structural("corner must be cut down by a projection".into()));
        }
        Ok(Corner { subspaces: p.blocks.iter().map(Matrix::column_space).collect() })
    }

    /// From a spanning set; the span must be exactly some `P A P`.
    pub fn from_span(alg: &BlockAlgebra, gens: &[Element<F>]) -> Result<Self> {
        let mut subspaces = Vec::with_capacity(alg.nblocks());
        for x in 0..alg.nblocks() {
            let n = alg.block_dim(x);
            let mut cols = Vec::new();
            for g in gens {
                alg.check_element(g)?;
                let m = &g.blocks[x];
                cols.extend((0..n).map(|j| m.col(j)));
                cols.extend((0..n).map(|j| m.adjoint().col(j)));
            }
            subspaces.push(Subspace::span(n, &cols));
        }
        let c = Corner { subspaces };
        if alg.span(&c.basis_elements(alg)) != alg.span(gens) {
            return Err(Error::Structural("span is not a hereditary corner P A P".into()));
        }
        Ok(c)
    }

    pub fn projection(&self) -> Element<F> {
        Element { blocks: self.subspaces.iter().map(Subspace::projector).collect() }
    }

    pub fn contains(&self, b: &Element<F>) -> bool {
        let p = self.projection();
        p.mul(b).mul(&p) == *b
    }

    pub fn basis_elements(&self, alg: &BlockAlgebra) -> Vec<Element<F>> {
        let mut out = Vec::new();
        for (x, v) in self.subspaces.iter().enumerate() {
            for a in v.basis() {
                for b in v.basis() {
                    // |a⟩⟨b|
                    let n = alg.block_dim(x);
                    let mut m = Matrix::zeros(n, n);
                    for r in 0..n {
                        for c in 0..n {
                            m[(r, c)] = a[r].clone() * b[c].conj();
                        }
                    }
                    out.push(alg.embed(x, m).expect("shape matches"));
                }
            }
        }
        out
    }

    /// `L(B) = {a | a*a ∈ B} = A·P`.
    pub fn ideal(&self) -> LeftIdeal<F> {
        LeftIdeal { subspaces: self.subspaces.clone() }
    }

    /// `{x | rep_x(B) = 0}`.
    pub fn hull(&self) -> Vec<usize> {
        (0..self.subspaces.len()).filter(|&x| self.subspaces[x].is_zero()).collect()
    }

    pub fn dim(&self) -> usize {
        self.subspaces.iter().map(|v| v.dim() * v.dim()).sum()
    }

    /// A corner is connected (as an algebra) when it lives in one block.
    pub fn is_connected(&self) -> bool {
        self.subspaces.iter().filter(|v| !v.is_zero()).count() == 1
    }
}
