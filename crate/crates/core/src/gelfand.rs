//! Gelfand spaces of block algebras. Points are principal ultrafilters of the
//! ideal lattice, one for each line `V` in a block; the space is the disjoint
//! union of the projective spaces of the blocks and is never enumerated.
//! Closed sets are finite unions of projective linear subspaces.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{BlockAlgebra, Element, LeftIdeal};
use crate::linalg::{is_zero_vec, Matrix, Subspace};
use crate::scalar::Field;
use crate::space::FiniteSpace;
use crate::{Error, Result};

/// The principal ultrafilter generated by the minimal ideal `L_V`, `V` a line
/// in `block`. The line is normalised so its first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UltrafilterPoint<F> {
    pub block: usize,
    pub line: Vec<F>,
}

/// Wire form: `{"block": i, "line": [...]}` or `{"point": name}` for
/// commutative models.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointDoc<F> {
    Line { block: usize, line: Vec<F> },
    Point { point: String },
}

impl<F: Field> UltrafilterPoint<F> {
    pub fn new(alg: &BlockAlgebra, block: usize, line: Vec<F>) -> Result<Self> {
        alg.check_block(block)?;
        if line.len() != alg.block_dim(block) {
            return Err(Error::Structural(format!(
                "line in block {block} needs {} coordinates",
                alg.block_dim(block)
            )));
        }
        let Some(lead) = line.iter().find(|c| !c.is_zero()).cloned() else {
            return Err(Error::Structural("a point needs a nonzero line vector".into()));
        };
        let line = line.into_iter().map(|c| c / lead.clone()).collect();
        Ok(UltrafilterPoint { block, line })
    }

    pub fn from_doc(alg: &BlockAlgebra, doc: PointDoc<F>) -> Result<Self> {
        match doc {
            PointDoc::Line { block, line } => Self::new(alg, block, line),
            PointDoc::Point { point } => {
                let x = alg
                    .block_by_name(&point)
                    .ok_or_else(|| Error::Structural(format!("unknown point {point:?}")))?;
                if alg.block_dim(x) != 1 {
                    return Err(Error::Structural(format!("block {point:?} is not one-dimensional")));
                }
                Self::new(alg, x, vec![F::one()])
            }
        }
    }

    pub fn to_doc(&self, alg: &BlockAlgebra) -> PointDoc<F> {
        if alg.is_commutative() {
            PointDoc::Point { point: alg.block_name(self.block) }
        } else {
            PointDoc::Line { block: self.block, line: self.line.clone() }
        }
    }

    /// The minimal ideal `L_V` generating the filter.
    pub fn generator(&self, alg: &BlockAlgebra) -> LeftIdeal<F> {
        LeftIdeal::line(alg, self.block, self.line.clone()).expect("validated point")
    }

    /// Whether `L` belongs to the principal filter, i.e. `L_V ⊆ L`.
    pub fn filter_contains(&self, l: &LeftIdeal<F>) -> bool {
        l.subspaces[self.block].contains(&self.line)
    }

    /// A nonzero `a` with `A·a` equal to the generator: the rank-one projection
    /// onto `V`. Pedersen's ideal is all of `A` here, so this is the finite
    /// point witness.
    pub fn witness(&self, alg: &BlockAlgebra) -> Element<F> {
        let p = Subspace::line(self.line.clone()).projector();
        alg.embed(self.block, p).expect("validated point")
    }
}

/// `⊔_x CP^{n_x − 1}`; for commutative models the finite discrete point set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GelfandSpace {
    pub components: Vec<Component>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<String>>,
    pub topology: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub block: usize,
    pub name: String,
    pub projective_dim: usize,
}

pub fn gelfand_points(alg: &BlockAlgebra) -> GelfandSpace {
    let components = (0..alg.nblocks())
        .map(|x| Component { block: x, name: alg.block_name(x), projective_dim: alg.block_dim(x) - 1 })
        .collect();
    if alg.is_commutative() {
        GelfandSpace {
            components,
            points: Some((0..alg.nblocks()).map(|x| alg.block_name(x)).collect()),
            topology: "discrete".into(),
        }
    } else {
        GelfandSpace { components, points: None, topology: "projective subspaces are closed".into() }
    }
}

/// Finite union of projective subspaces, listed per block. An empty list in a
/// block means no points there; a full subspace means the whole component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedSet<F> {
    pub parts: Vec<Vec<Subspace<F>>>,
}

impl<F: Field> ClosedSet<F> {
    pub fn empty(alg: &BlockAlgebra) -> Self {
        ClosedSet { parts: vec![vec![]; alg.nblocks()] }
    }

    pub fn contains(&self, p: &UltrafilterPoint<F>) -> bool {
        self.parts[p.block].iter().any(|w| w.contains(&p.line))
    }

    pub fn union(&self, o: &Self) -> Self {
        let parts = self.parts.iter().zip(&o.parts).map(|(a, b)| a.iter().chain(b).cloned().collect()).collect();
        ClosedSet { parts }.simplified()
    }

    /// Pairwise intersections distribute over the unions.
    pub fn intersect(&self, o: &Self) -> Self {
        let parts = self
            .parts
            .iter()
            .zip(&o.parts)
            .map(|(a, b)| a.iter().flat_map(|u| b.iter().map(move |w| u.intersect(w))).collect())
            .collect();
        ClosedSet { parts }.simplified()
    }

    /// Drops zero subspaces and members contained in another member.
    fn simplified(mut self) -> Self {
        for part in &mut self.parts {
            part.retain(|w| !w.is_zero());
            let mut keep: Vec<Subspace<F>> = Vec::new();
            for w in part.iter() {
                if keep.iter().any(|k| w.is_subspace_of(k)) {
                    continue;
                }
                keep.retain(|k| !k.is_subspace_of(w));
                keep.push(w.clone());
            }
            *part = keep;
        }
        self
    }
}

/// The basic open `{ξ | ∃ L' ∈ ξ, L' ∩ L = {0}}`, with its closed complement.
#[derive(Clone, Debug)]
pub struct BasicOpen<F> {
    pub ideal: LeftIdeal<F>,
    pub complement: ClosedSet<F>,
    /// Set when `L = {0}`: every point qualifies, so the open is everything.
    pub degenerate: bool,
}

impl<F: Field> BasicOpen<F> {
    pub fn new(l: &LeftIdeal<F>) -> Self {
        // The smallest member of ξ is L_V, so the condition is V ∩ W_x = 0,
        // i.e. V ⊄ W_x; the complement is ⊔ P(W_x).
        let parts = l.subspaces.iter().map(|w| if w.is_zero() { vec![] } else { vec![w.clone()] }).collect();
        BasicOpen { ideal: l.clone(), complement: ClosedSet { parts }, degenerate: l.is_zero() }
    }

    pub fn contains(&self, p: &UltrafilterPoint<F>) -> bool {
        !self.complement.contains(p)
    }
}

/// Literal reading of the basic-open condition over an explicit list of
/// ideals standing in for the filter members.
pub fn basic_open_literal<F: Field>(p: &UltrafilterPoint<F>, members: &[LeftIdeal<F>], l: &LeftIdeal<F>) -> bool {
    members.iter().filter(|m| p.filter_contains(m)).any(|m| m.meet(l).is_ok_and(|x| x.is_zero()))
}

/// The unique block `y` with `rep_y(L) ≠ 0` for every member `L` of the
/// point's filter. Cross-checked against the bicommutant: `y` is also the
/// only block where `rep_y(ξ'') ≠ rep_y(A)`.
pub fn belongs_to<F: Field>(alg: &BlockAlgebra, p: &UltrafilterPoint<F>) -> Result<usize> {
    let g = p.generator(alg);
    let nonvanishing: Vec<usize> = g.support_blocks();
    let bic = gelfand_bicommutant(alg, p);
    let proper: Vec<usize> = (0..alg.nblocks()).filter(|&y| !bic.subspaces[y].is_full()).collect();
    if nonvanishing != vec![p.block] || proper != nonvanishing {
        return Err(Error::Structural(format!(
            "point belongs to blocks {nonvanishing:?} by support and {proper:?} by bicommutant"
        )));
    }
    Ok(p.block)
}

/// Spectral equivalence of the principal filters generated by `g1` and `g2`:
/// domination of the support sets reduces to comparing the generators.
pub fn spectrally_equivalent<F: Field>(g1: &LeftIdeal<F>, g2: &LeftIdeal<F>) -> bool {
    g1.support_blocks() == g2.support_blocks()
}

/// `ξ''` for a point: the commutant of the generator, `V^⊥` in its block and
/// everything elsewhere.
pub fn gelfand_bicommutant<F: Field>(alg: &BlockAlgebra, p: &UltrafilterPoint<F>) -> LeftIdeal<F> {
    p.generator(alg).commutant()
}

/// The map `ξ ↦ ξ''` on a list of points, with an injectivity verdict.
#[derive(Clone, Debug)]
pub struct BicommutantMap<F> {
    pub entries: Vec<(UltrafilterPoint<F>, LeftIdeal<F>)>,
    pub injective: bool,
}

pub fn bicommutant_map<F: Field>(alg: &BlockAlgebra, points: &[UltrafilterPoint<F>]) -> BicommutantMap<F> {
    let entries: Vec<_> = points.iter().map(|p| (p.clone(), gelfand_bicommutant(alg, p))).collect();
    let injective = entries
        .iter()
        .enumerate()
        .all(|(i, (p, b))| entries[..i].iter().all(|(q, c)| p == q || b != c));
    BicommutantMap { entries, injective }
}

/// For a commutative model, the topology generated by all basic opens, as a
/// finite space on the blocks.
pub fn commutative_topology<F: Field>(alg: &BlockAlgebra) -> Result<FiniteSpace> {
    if !alg.is_commutative() {
        return Err(Error::Structural("algebra is not commutative".into()));
    }
    let k = alg.nblocks();
    if k > 16 {
        return Err(Error::Resource { msg: "commutative topology is enumerated for at most 16 points".into(), partial: String::new() });
    }
    let points: Vec<UltrafilterPoint<F>> = (0..k).map(|x| UltrafilterPoint::new(alg, x, vec![F::one()]).unwrap()).collect();
    let mut subbasis = Vec::new();
    for mask in 0u64..(1 << k) {
        let subspaces = (0..k).map(|x| if mask >> x & 1 == 1 { Subspace::full(1) } else { Subspace::zero(1) }).collect();
        let open = BasicOpen::new(&LeftIdeal { subspaces });
        subbasis.push(points.iter().enumerate().filter(|(_, p)| open.contains(p)).fold(0u64, |m, (i, _)| m | 1 << i));
    }
    FiniteSpace::generated((0..k).map(|x| alg.block_name(x)).collect(), &subbasis)
}

/// Random points with small Gaussian-integer coordinates.
pub fn sample_points<F: Field>(alg: &BlockAlgebra, count: usize, rng: &mut impl Rng) -> Vec<UltrafilterPoint<F>> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x = rng.gen_range(0..alg.nblocks());
        let line: Vec<F> = (0..alg.block_dim(x))
            .map(|_| {
                let re = F::from_i64(rng.gen_range(-2..=2));
                match F::imag_unit() {
                    Some(i) => re + i * F::from_i64(rng.gen_range(-1..=1)),
                    None => re,
                }
            })
            .collect();
        if !is_zero_vec(&line) {
            out.push(UltrafilterPoint::new(alg, x, line).expect("nonzero line"));
        }
    }
    out
}

// ---------------------------------------------------------------- morphisms

/// A *-homomorphism `A → Ã`, given by the images of the matrix units of `A`
/// in the order of [`BlockAlgebra::matrix_units`].
#[derive(Clone, Debug, PartialEq)]
pub struct MorphismData<F> {
    pub source: BlockAlgebra,
    pub target: BlockAlgebra,
    pub images: Vec<Element<F>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc<F> {
    pub source: BlockAlgebra,
    pub target: BlockAlgebra,
    pub images: Vec<Element<F>>,
}

impl<F: Field> MorphismData<F> {
    /// Validates multiplicativity and *-preservation on matrix units.
    pub fn new(source: BlockAlgebra, target: BlockAlgebra, images: Vec<Element<F>>) -> Result<Self> {
        let units = source.matrix_units::<F>();
        if images.len() != units.len() {
            return Err(Error::Structural(format!(
                "morphism needs {} matrix-unit images, got {}",
                units.len(),
                images.len()
            )));
        }
        for img in &images {
            target.check_element(img)?;
        }
        let m = MorphismData { source, target, images };
        let index = m.unit_index();
        for (i, e) in units.iter().enumerate() {
            let (x, r, c) = index[i];
            if m.images[i].adjoint() != m.images[m.position(x, c, r)] {
                return Err(Error::Structural(format!("image of unit ({x},{r},{c}) breaks the adjoint")));
            }
            for (j, f) in units.iter().enumerate() {
                if m.images[i].mul(&m.images[j]) != m.apply(&e.mul(f)) {
                    return Err(Error::Structural(format!("images of units {i} and {j} are not multiplicative")));
                }
            }
        }
        Ok(m)
    }

    pub fn from_doc(doc: MorphismDoc<F>) -> Result<Self> {
        Self::new(doc.source, doc.target, doc.images)
    }

    pub fn to_doc(&self) -> MorphismDoc<F> {
        MorphismDoc { source: self.source.clone(), target: self.target.clone(), images: self.images.clone() }
    }

    /// Builds the images by evaluating `f` on matrix units.
    pub fn from_fn(source: &BlockAlgebra, target: &BlockAlgebra, f: impl Fn(&Element<F>) -> Element<F>) -> Result<Self> {
        let images = source.matrix_units::<F>().iter().map(f).collect();
        Self::new(source.clone(), target.clone(), images)
    }

    pub fn identity(a: &BlockAlgebra) -> Self {
        Self::from_fn(a, a, Clone::clone).expect("identity is a morphism")
    }

    /// `A → A^{⊕k}`, `a ↦ (a, …, a)`, for a single-block `A`.
    pub fn diagonal(a: &BlockAlgebra, copies: usize) -> Result<Self> {
        if a.nblocks() != 1 {
            return Err(Error::Structural("diagonal embedding needs a single-block source".into()));
        }
        let target = BlockAlgebra::new(vec![a.block_dim(0); copies])?;
        Self::from_fn(a, &target, |e| Element { blocks: vec![e.blocks[0].clone(); copies] })
    }

    /// Scalars of the commutative model `C(X)` acting blockwise through the
    /// assignment `block ↦ point`.
    pub fn central(points: &BlockAlgebra, target: &BlockAlgebra, block_to_point: &[usize]) -> Result<Self> {
        if !points.is_commutative() || block_to_point.len() != target.nblocks() {
            return Err(Error::Structural("central embedding needs C(X) and one point per block".into()));
        }
        if let Some(&p) = block_to_point.iter().find(|&&p| p >= points.nblocks()) {
            return Err(Error::Structural(format!("point index {p} out of range")));
        }
        Self::from_fn(points, target, |e| Element {
            blocks: (0..target.nblocks())
                .map(|y| Matrix::identity(target.block_dim(y)).scale(&e.blocks[block_to_point[y]][(0, 0)]))
                .collect(),
        })
    }

    fn unit_index(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (x, &n) in self.source.dims().iter().enumerate() {
            for r in 0..n {
                for c in 0..n {
                    out.push((x, r, c));
                }
            }
        }
        out
    }

    fn position(&self, x: usize, r: usize, c: usize) -> usize {
        let before: usize = self.source.dims()[..x].iter().map(|n| n * n).sum();
        before + r * self.source.block_dim(x) + c
    }

    pub fn unit_image(&self, x: usize, r: usize, c: usize) -> &Element<F> {
        &self.images[self.position(x, r, c)]
    }

    pub fn apply(&self, a: &Element<F>) -> Element<F> {
        let mut out = self.target.zero();
        for (i, (x, r, c)) in self.unit_index().into_iter().enumerate() {
            let s = a.blocks[x][(r, c)].clone();
            if !s.is_zero() {
                out = out.add(&self.images[i].scale(&s));
            }
        }
        out
    }

    pub fn is_unital(&self) -> bool {
        self.apply(&self.source.one()) == self.target.one()
    }

    /// Injective iff no block of `A` is sent to zero.
    pub fn is_injective(&self) -> bool {
        (0..self.source.nblocks()).all(|x| !self.unit_image(x, 0, 0).is_zero())
    }

    /// `Ã·φ(A)` spans `Ã`, checked by a span computation.
    pub fn is_nondegenerate(&self) -> bool {
        let mut prods = Vec::new();
        for u in self.target.matrix_units::<F>() {
            for img in &self.images {
                prods.push(u.mul(img));
            }
        }
        self.target.span(&prods).is_full()
    }

    /// `Lat(φ)(L)`: the closed left ideal generated by `φ(L)`.
    pub fn lattice_map(&self, l: &LeftIdeal<F>) -> LeftIdeal<F> {
        let imgs: Vec<Element<F>> = l.basis_elements(&self.source).iter().map(|a| self.apply(a)).collect();
        let subspaces = (0..self.target.nblocks())
            .map(|y| {
                let rows: Vec<Vec<F>> = imgs
                    .iter()
                    .flat_map(|e| e.blocks[y].rows_vec().into_iter().map(|r| r.iter().map(Field::conj).collect()))
                    .collect();
                Subspace::span(self.target.block_dim(y), &rows)
            })
            .collect();
        LeftIdeal { subspaces }
    }

    /// The source point `ξ` whose pushed-forward filter lies in `ξ̃`: the
    /// line `V` with `w ∈ range φ(P_V)`.
    pub fn ultrafilter_map(&self, p: &UltrafilterPoint<F>) -> Result<Preimage<F>> {
        if p.block >= self.target.nblocks() || p.line.len() != self.target.block_dim(p.block) {
            return Err(Error::Structural("point does not lie in the target algebra".into()));
        }
        let y = p.block;
        let w = &p.line;
        let mut candidates = Vec::new();
        let mut rejected = Vec::new();
        for x in 0..self.source.nblocks() {
            let n = self.source.block_dim(x);
            let cols: Vec<Vec<F>> = (0..n).map(|k| self.unit_image(x, 0, k).blocks[y].mul_vec(w)).collect();
            let m = Matrix::from_cols(&cols, self.target.block_dim(y));
            if m.is_zero() {
                continue;
            }
            if m.rank() != 1 {
                rejected.push(x);
                continue;
            }
            let v = m.row_space().basis()[0].clone();
            let q = UltrafilterPoint::new(&self.source, x, v)?;
            let proj = self.apply(&q.witness(&self.source));
            if proj.blocks[y].mul_vec(w) == *w {
                candidates.push(q);
            } else {
                rejected.push(x);
            }
        }
        Ok(match candidates.len() {
            1 => Preimage::Point(candidates.pop().unwrap()),
            _ => Preimage::NoPreimagePoint { candidates, rejected_blocks: rejected },
        })
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &MorphismData<F>) -> Result<MorphismData<F>> {
        if first.target != self.source {
            return Err(Error::Structural("morphisms do not compose".into()));
        }
        let images = first.images.iter().map(|e| self.apply(e)).collect();
        MorphismData::new(first.source.clone(), self.target.clone(), images)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Preimage<F> {
    Point(UltrafilterPoint<F>),
    /// No unique source point; every verified candidate is listed.
    NoPreimagePoint { candidates: Vec<UltrafilterPoint<F>>, rejected_blocks: Vec<usize> },
}

impl<F> Preimage<F> {
    pub fn point(&self) -> Option<&UltrafilterPoint<F>> {
        match self {
            Preimage::Point(p) => Some(p),
            Preimage::NoPreimagePoint { .. } => None,
        }
    }
}

/// Outcome of [`is_good`] on a sample of target points.
#[derive(Clone, Debug)]
pub struct GoodReport<F> {
    pub good: bool,
    pub failures: Vec<String>,
    /// `ξ̃ ↦ ξ` on the sample.
    pub point_map: Vec<(UltrafilterPoint<F>, Option<UltrafilterPoint<F>>)>,
    /// `ξ̃'' ↦ ξ''` on the sample.
    pub bicommutant_map: Vec<(LeftIdeal<F>, LeftIdeal<F>)>,
}

/// Test ideals whose basic opens probe the sample: zero, all, coordinate
/// hyperplanes and the source images of the sample points.
fn probe_ideals<F: Field>(alg: &BlockAlgebra, points: &[UltrafilterPoint<F>]) -> Vec<LeftIdeal<F>> {
    let mut out = vec![LeftIdeal::zero(alg), LeftIdeal::full(alg)];
    for x in 0..alg.nblocks() {
        let n = alg.block_dim(x);
        for i in 0..n {
            let mut l = LeftIdeal::zero(alg);
            l.subspaces[x] = Subspace::coordinate(n, &[i]);
            out.push(l.clone());
            l.subspaces[x] = Subspace::coordinate(n, &[i]).complement();
            out.push(l);
        }
    }
    for p in points {
        out.push(p.generator(alg));
        out.push(p.generator(alg).commutant());
    }
    out
}

/// Checks that the ultrafilter map is total on the sample and that the
/// preimage of each probed basic open `O_L` agrees on the sample with the
/// basic open `O_{Lat(φ)(L)}`, so preimages of basic opens are open.
pub fn is_good<F: Field>(m: &MorphismData<F>, sample: &[UltrafilterPoint<F>]) -> Result<GoodReport<F>> {
    let mut failures = Vec::new();
    let mut point_map = Vec::new();
    let mut bicommutant_map = Vec::new();
    let mut images = Vec::new();
    for (i, p) in sample.iter().enumerate() {
        match m.ultrafilter_map(p)? {
            Preimage::Point(q) => {
                bicommutant_map.push((gelfand_bicommutant(&m.target, p), gelfand_bicommutant(&m.source, &q)));
                images.push(q.clone());
                point_map.push((p.clone(), Some(q)));
            }
            Preimage::NoPreimagePoint { candidates, .. } => {
                failures.push(format!(
                    "sample point {i} (block {}) has no unique preimage ({} candidates)",
                    p.block,
                    candidates.len()
                ));
                point_map.push((p.clone(), None));
            }
        }
    }
    for l in probe_ideals(&m.source, &images) {
        let src = BasicOpen::new(&l);
        let tgt = BasicOpen::new(&m.lattice_map(&l));
        for (p, q) in &point_map {
            if let Some(q) = q {
                if src.contains(q) != tgt.contains(p) {
                    failures.push(format!("preimage of a basic open is not open at a point of block {}", p.block));
                }
            }
        }
    }
    failures.dedup();
    Ok(GoodReport { good: failures.is_empty(), failures, point_map, bicommutant_map })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gi, GaussRational};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type G = GaussRational;

    fn pt(alg: &BlockAlgebra, x: usize, v: &[i64]) -> UltrafilterPoint<G> {
        UltrafilterPoint::new(alg, x, v.iter().map(|&c| gi(c)).collect()).unwrap()
    }

    #[test]
    fn descriptors() {
        let a = BlockAlgebra::new(vec![2, 3]).unwrap();
        let g = gelfand_points(&a);
        assert_eq!(g.components.iter().map(|c| c.projective_dim).collect::<Vec<_>>(), vec![1, 2]);
        assert!(g.points.is_none());
        let c = BlockAlgebra::commutative(3).unwrap();
        assert_eq!(gelfand_points(&c).points.unwrap().len(), 3);
        let top = commutative_topology::<G>(&c).unwrap();
        assert!(top.is_discrete());
    }

    #[test]
    fn basic_opens() {
        let m2 = BlockAlgebra::new(vec![2]).unwrap();
        let l = LeftIdeal::line(&m2, 0, vec![gi(1), gi(0)]).unwrap();
        let o = BasicOpen::new(&l);
        assert!(o.contains(&pt(&m2, 0, &[0, 1])));
        assert!(!o.contains(&pt(&m2, 0, &[1, 0])));
        let z = BasicOpen::<G>::new(&LeftIdeal::zero(&m2));
        assert!(z.degenerate && z.contains(&pt(&m2, 0, &[1, 1])));
        let full = BasicOpen::<G>::new(&LeftIdeal::full(&m2));
        assert!(!full.contains(&pt(&m2, 0, &[1, 1])));
    }

    #[test]
    fn belongs_and_bicommutant() {
        let a = BlockAlgebra::new(vec![2, 3]).unwrap();
        let p = pt(&a, 1, &[0, 1, 1]);
        assert_eq!(belongs_to(&a, &p).unwrap(), 1);
        let m2 = BlockAlgebra::new(vec![2]).unwrap();
        let b = gelfand_bicommutant(&m2, &pt(&m2, 0, &[1, 0]));
        assert_eq!(b, LeftIdeal::line(&m2, 0, vec![gi(0), gi(1)]).unwrap());
        let m3 = BlockAlgebra::new(vec![3]).unwrap();
        let pts = sample_points::<G>(&m3, 20, &mut ChaCha8Rng::seed_from_u64(0));
        assert!(bicommutant_map(&m3, &pts).injective);
    }

    #[test]
    fn diagonal_morphism() {
        let m2 = BlockAlgebra::new(vec![2]).unwrap();
        let d = MorphismData::<G>::diagonal(&m2, 2).unwrap();
        assert!(d.is_unital() && d.is_injective() && d.is_nondegenerate());
        let l = LeftIdeal::line(&m2, 0, vec![gi(1), gi(0)]).unwrap();
        let img = d.lattice_map(&l);
        assert_eq!(img.subspaces[0], l.subspaces[0]);
        assert_eq!(img.subspaces[1], l.subspaces[0]);
        assert!(d.lattice_map(&LeftIdeal::full(&m2)).is_full());
        let q = d.ultrafilter_map(&pt(&d.target, 0, &[1, 2])).unwrap();
        assert_eq!(q, Preimage::Point(pt(&m2, 0, &[1, 2])));
        let sample = sample_points(&d.target, 10, &mut ChaCha8Rng::seed_from_u64(1));
        assert!(is_good(&d, &sample).unwrap().good);
    }

    #[test]
    fn scalar_embedding_and_bad_maps() {
        let c = BlockAlgebra::commutative(1).unwrap();
        let m2 = BlockAlgebra::new(vec![2]).unwrap();
        let s = MorphismData::<G>::central(&c, &m2, &[0]).unwrap();
        assert_eq!(s.ultrafilter_map(&pt(&m2, 0, &[1, 3])).unwrap().point().unwrap().block, 0);
        // a corner embedding is not unital and misses lines outside its range
        let corner = MorphismData::<G>::from_fn(&c, &m2, |e| m2.unit(0, 0, 0).scale(&e.blocks[0][(0, 0)])).unwrap();
        assert!(!corner.is_unital() && !corner.is_nondegenerate());
        assert!(corner.ultrafilter_map(&pt(&m2, 0, &[1, 1])).unwrap().point().is_none());
        // not multiplicative
        assert!(MorphismData::<G>::new(c.clone(), m2.clone(), vec![m2.unit(0, 0, 1)]).is_err());
    }

    #[test]
    fn composition_is_functorial() {
        let m2 = BlockAlgebra::new(vec![2]).unwrap();
        let d = MorphismData::<G>::diagonal(&m2, 2).unwrap();
        let m22 = d.target.clone();
        let swap = MorphismData::<G>::from_fn(&m22, &m22, |e| Element { blocks: vec![e.blocks[1].clone(), e.blocks[0].clone()] }).unwrap();
        let comp = swap.compose(&d).unwrap();
        for p in sample_points::<G>(&m22, 8, &mut ChaCha8Rng::seed_from_u64(2)) {
            let direct = comp.ultrafilter_map(&p).unwrap();
            let mid = swap.ultrafilter_map(&p).unwrap();
            let two = d.ultrafilter_map(mid.point().unwrap()).unwrap();
            assert_eq!(direct, two);
        }
    }
}
