//! Noncommutative pre-coverings and coverings of block algebras, plus the
//! topological side: fundamental-group presentations and graph coverings.

pub mod graph;
pub mod pi1;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Automorphism, BlockAlgebra, Corner, Element};
use crate::gelfand::{sample_points, MorphismData, MorphismDoc, UltrafilterPoint};
use crate::linalg::{Matrix, Subspace};
use crate::scalar::Field;
use crate::{Error, Result};

/// One named condition of a verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    fn new(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), ok, detail: if ok { String::new() } else { detail.into() } }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub ok: bool,
    pub checks: Vec<Check>,
}

impl Verdict {
    fn of(checks: Vec<Check>) -> Self {
        Verdict { ok: checks.iter().all(|c| c.ok), checks }
    }

    pub fn failing(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.ok).map(|c| c.name.as_str()).collect()
    }
}

/// `(A, Ã, G, lift)`; `family` holds further automorphisms of `Ã` against
/// which maximality of `G` is tested.
#[derive(Clone, Debug, PartialEq)]
pub struct CoveringQuadruple<F> {
    pub base: BlockAlgebra,
    pub cover: BlockAlgebra,
    pub group: Vec<Automorphism<F>>,
    pub lift: MorphismData<F>,
    pub family: Vec<Automorphism<F>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadrupleDoc<F> {
    pub group: Vec<Automorphism<F>>,
    pub lift: MorphismDoc<F>,
    #[serde(default = "Vec::new")]
    pub family: Vec<Automorphism<F>>,
}

impl<F: Field> CoveringQuadruple<F> {
    pub fn new(group: Vec<Automorphism<F>>, lift: MorphismData<F>, family: Vec<Automorphism<F>>) -> Result<Self> {
        if group.is_empty() {
            return Err(Error::Structural("the group needs at least the identity".into()));
        }
        for (i, g) in group.iter().chain(&family).enumerate() {
            g.validate(&lift.target).map_err(|e| Error::Structural(format!("automorphism {i}: {e}")))?;
        }
        Ok(CoveringQuadruple { base: lift.source.clone(), cover: lift.target.clone(), group, lift, family })
    }

    pub fn from_doc(doc: QuadrupleDoc<F>) -> Result<Self> {
        CoveringQuadruple::new(doc.group, MorphismData::from_doc(doc.lift)?, doc.family)
    }

    pub fn to_doc(&self) -> QuadrupleDoc<F> {
        QuadrupleDoc { group: self.group.clone(), lift: self.lift.to_doc(), family: self.family.clone() }
    }

    /// `M_n → M_n^{⊕k}` diagonally, with `Z/k` cycling the copies.
    pub fn cyclic_swap(n: usize, k: usize) -> Result<Self> {
        let a = BlockAlgebra::new(vec![n])?;
        let lift = MorphismData::diagonal(&a, k)?;
        let group = (0..k)
            .map(|s| Automorphism::permutation(&lift.target, (0..k).map(|i| (i + s) % k).collect()))
            .collect::<Result<_>>()?;
        CoveringQuadruple::new(group, lift, vec![])
    }

    pub fn trivial(a: &BlockAlgebra) -> Self {
        CoveringQuadruple::new(vec![Automorphism::identity(a)], MorphismData::identity(a), vec![]).expect("trivial")
    }

    fn lift_span(&self) -> Subspace<F> {
        self.cover.span(&self.lift.images)
    }

    /// `{a ∈ Ã | g a = a for all g}` by an exact linear solve.
    pub fn fixed_point_algebra(&self) -> Subspace<F> {
        let units = self.cover.matrix_units::<F>();
        let d = self.cover.dim();
        let mut rows: Vec<Vec<F>> = Vec::new();
        for g in &self.group {
            let cols: Vec<Vec<F>> = units
                .iter()
                .map(|u| {
                    let moved = self.cover.vectorize(&g.apply(u));
                    let orig = self.cover.vectorize(u);
                    moved.into_iter().zip(orig).map(|(a, b)| a - b).collect()
                })
                .collect();
            rows.extend(Matrix::from_cols(&cols, d).rows_vec());
        }
        if rows.is_empty() {
            return Subspace::full(d);
        }
        Subspace::span(d, &Matrix::from_rows(&rows, d).kernel())
    }

    /// Conditions (a) unital lift, (b) `G` is the full stabiliser of
    /// `lift(A)` within the supplied automorphisms and is a faithful finite
    /// group, (c) the fixed-point algebra is `lift(A)`.
    pub fn check_precovering(&self) -> Verdict {
        let alg = &self.cover;
        let mut checks = vec![Check::new("unital", self.lift.is_unital(), "lift(1) ≠ 1")];
        let fixes = |g: &Automorphism<F>| g.fixes_all(&self.lift.images);
        let moving: Vec<usize> = (0..self.group.len()).filter(|&i| !fixes(&self.group[i])).collect();
        checks.push(Check::new("stabilizes_lift", moving.is_empty(), format!("group elements {moving:?} move lift(A)")));
        let in_group = |h: &Automorphism<F>| self.group.iter().any(|g| g.same_map(h, alg));
        let missing: Vec<usize> = (0..self.family.len()).filter(|&i| fixes(&self.family[i]) && !in_group(&self.family[i])).collect();
        checks.push(Check::new(
            "full_stabilizer",
            missing.is_empty(),
            format!("family members {missing:?} fix lift(A) but are not in G"),
        ));
        let mut dup = None;
        for i in 0..self.group.len() {
            for j in i + 1..self.group.len() {
                if dup.is_none() && self.group[i].same_map(&self.group[j], alg) {
                    dup = Some((i, j));
                }
            }
        }
        checks.push(Check::new("faithful", dup.is_none(), format!("elements {dup:?} act identically")));
        let closed = self.group.iter().any(|g| g.is_identity(alg))
            && self.group.iter().all(|g| in_group(&g.inverse()))
            && self.group.iter().all(|g| self.group.iter().all(|h| in_group(&g.compose(h))));
        checks.push(Check::new("group", closed, "not closed under composition and inverses"));
        checks.push(Check::new("discrete", true, ""));
        let fixed = self.fixed_point_algebra();
        let lifted = self.lift_span();
        checks.push(Check::new(
            "fixed_points",
            fixed == lifted,
            format!("fixed-point algebra has dimension {}, lift(A) has {}", fixed.dim(), lifted.dim()),
        ));
        Verdict::of(checks)
    }

    /// Searches the corners `1_S · lift(p) Ã lift(p) · 1_S`, `S` a set of
    /// blocks of `Ã`, for which `x ↦ lift(x)·1_S` is an isomorphism from
    /// `b = pAp` onto the corner and `lift(x) = Σ_g g(lift(x)·1_S)` with
    /// orthogonal summands.
    pub fn check_evenly_covered(&self, b: &Corner<F>) -> Result<EvenlyCovered<F>> {
        let a = &self.base;
        if b.subspaces.len() != a.nblocks() || b.subspaces.iter().zip(a.dims()).any(|(v, &n)| v.ambient() != n) {
            return Err(Error::Structural("corner does not fit the base algebra".into()));
        }
        let proper = b.dim() < a.dim();
        let connected = b.is_connected();
        if !proper || !connected {
            return Ok(EvenlyCovered { proper, connected, witnesses: vec![], searched: 0 });
        }
        let k = self.cover.nblocks();
        if k > 16 {
            return Err(Error::Resource { msg: "more than 16 blocks to search".into(), partial: String::new() });
        }
        let basis = b.basis_elements(a);
        let lifted: Vec<Element<F>> = basis.iter().map(|x| self.lift.apply(x)).collect();
        let p_lift = self.lift.apply(&b.projection());
        let mut witnesses = Vec::new();
        for s in 1u32..(1 << k) {
            let cut = |e: &Element<F>| Element {
                blocks: e
                    .blocks
                    .iter()
                    .enumerate()
                    .map(|(y, m)| if s >> y & 1 == 1 { m.clone() } else { Matrix::zeros(m.nrows(), m.ncols()) })
                    .collect(),
            };
            let p_tilde = cut(&p_lift);
            if p_tilde.is_zero() {
                continue;
            }
            let corner = Corner::from_projection(&self.cover, &p_tilde)?;
            let pieces: Vec<Element<F>> = lifted.iter().map(cut).collect();
            let iso = self.cover.span(&pieces).dim() == basis.len()
                && self.cover.span(&pieces) == self.cover.span(&corner.basis_elements(&self.cover));
            if !iso {
                continue;
            }
            let translates: Vec<Element<F>> = self.group.iter().map(|g| g.apply(&p_tilde)).collect();
            let orthogonal = (0..translates.len())
                .all(|i| (0..translates.len()).all(|j| i == j || translates[i].mul(&translates[j]).is_zero()));
            if !orthogonal {
                continue;
            }
            let sums = lifted.iter().zip(&pieces).all(|(l, piece)| {
                let total = self.group.iter().fold(self.cover.zero(), |acc, g| acc.add(&g.apply(piece)));
                total == *l
            });
            if sums {
                witnesses.push(CornerWitness { blocks: (0..k).filter(|&y| s >> y & 1 == 1).collect(), corner });
            }
        }
        Ok(EvenlyCovered { proper, connected, witnesses, searched: (1usize << k) - 1 })
    }

    /// For each sampled point, looks for an evenly covered connected proper
    /// corner in the point's filter: first the rank-one corner of its line,
    /// then the corner of its whole block.
    pub fn check_unital_covering(&self, sample: &[UltrafilterPoint<F>]) -> Result<UnitalReport<F>> {
        let precovering = self.check_precovering();
        let mut rows = Vec::new();
        for p in sample {
            let mut found = None;
            for c in [rank_one_corner(&self.base, p), block_corner(&self.base, p.block)] {
                if !p.filter_contains(&c.ideal()) {
                    continue;
                }
                let ev = self.check_evenly_covered(&c)?;
                if !ev.witnesses.is_empty() {
                    found = Some((c, ev.witnesses[0].blocks.clone()));
                    break;
                }
            }
            rows.push(UnitalRow { point: p.clone(), corner: found.as_ref().map(|f| f.0.clone()), witness_blocks: found.map(|f| f.1) });
        }
        let failures = rows.iter().filter(|r| r.corner.is_none()).count();
        Ok(UnitalReport { ok: precovering.ok && failures == 0, precovering, rows, failures })
    }

    pub fn sample(&self, count: usize, rng: &mut impl Rng) -> Vec<UltrafilterPoint<F>> {
        sample_points(&self.base, count, rng)
    }
}

pub fn rank_one_corner<F: Field>(a: &BlockAlgebra, p: &UltrafilterPoint<F>) -> Corner<F> {
    Corner {
        subspaces: (0..a.nblocks())
            .map(|x| if x == p.block { Subspace::line(p.line.clone()) } else { Subspace::zero(a.block_dim(x)) })
            .collect(),
    }
}

pub fn block_corner<F: Field>(a: &BlockAlgebra, x: usize) -> Corner<F> {
    Corner {
        subspaces: (0..a.nblocks())
            .map(|y| if y == x { Subspace::full(a.block_dim(y)) } else { Subspace::zero(a.block_dim(y)) })
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CornerWitness<F> {
    pub blocks: Vec<usize>,
    pub corner: Corner<F>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvenlyCovered<F> {
    pub proper: bool,
    pub connected: bool,
    /// Every witness found; uniqueness is not assumed.
    pub witnesses: Vec<CornerWitness<F>>,
    /// Number of candidate corners examined.
    pub searched: usize,
}

impl<F> EvenlyCovered<F> {
    pub fn ok(&self) -> bool {
        self.proper && self.connected && !self.witnesses.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnitalRow<F> {
    pub point: UltrafilterPoint<F>,
    pub corner: Option<Corner<F>>,
    pub witness_blocks: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnitalReport<F> {
    pub ok: bool,
    pub precovering: Verdict,
    pub rows: Vec<UnitalRow<F>>,
    pub failures: usize,
}

/// A possibly nonunital covering sitting inside a unital one: `A ⊆ B` and
/// `Ã ⊆ B̃` are the block summands listed, `lift : A → Ã` and `action[i]` is
/// the action of `ambient.group[i]` on `Ã`.
#[derive(Clone, Debug, PartialEq)]
pub struct NonunitalData<F> {
    pub ambient: CoveringQuadruple<F>,
    pub ideal_blocks: Vec<usize>,
    pub tilde_blocks: Vec<usize>,
    pub lift: MorphismData<F>,
    pub action: Vec<Automorphism<F>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonunitalDoc<F> {
    pub ambient: QuadrupleDoc<F>,
    pub ideal_blocks: Vec<usize>,
    pub tilde_blocks: Vec<usize>,
    pub lift: MorphismDoc<F>,
    pub action: Vec<Automorphism<F>>,
}

fn summand(alg: &BlockAlgebra, blocks: &[usize]) -> Result<BlockAlgebra> {
    let mut sorted = blocks.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != blocks.len() || blocks.iter().any(|&x| x >= alg.nblocks()) {
        return Err(Error::Structural("summand blocks must be distinct and in range".into()));
    }
    BlockAlgebra::new(blocks.iter().map(|&x| alg.block_dim(x)).collect())
}

fn include<F: Field>(big: &BlockAlgebra, blocks: &[usize], e: &Element<F>) -> Element<F> {
    let mut out = big.zero::<F>();
    for (i, &x) in blocks.iter().enumerate() {
        out.blocks[x] = e.blocks[i].clone();
    }
    out
}

/// Dimension of `{b ∈ B | b·a = 0 for every a ∈ I}`.
pub fn annihilator_dim<F: Field>(big: &BlockAlgebra, ideal_units: &[Element<F>]) -> usize {
    let units = big.matrix_units::<F>();
    let d = big.dim();
    let mut rows = Vec::new();
    for a in ideal_units {
        let cols: Vec<Vec<F>> = units.iter().map(|u| big.vectorize(&u.mul(a))).collect();
        rows.extend(Matrix::from_cols(&cols, d).rows_vec());
    }
    if rows.is_empty() {
        return d;
    }
    Matrix::from_rows(&rows, d).kernel().len()
}

impl<F: Field> NonunitalData<F> {
    pub fn new(
        ambient: CoveringQuadruple<F>,
        ideal_blocks: Vec<usize>,
        tilde_blocks: Vec<usize>,
        lift: MorphismData<F>,
        action: Vec<Automorphism<F>>,
    ) -> Result<Self> {
        if summand(&ambient.base, &ideal_blocks)?.dims() != lift.source.dims() {
            return Err(Error::Structural("lift source does not match the listed blocks of B".into()));
        }
        if summand(&ambient.cover, &tilde_blocks)?.dims() != lift.target.dims() {
            return Err(Error::Structural("lift target does not match the listed blocks of B̃".into()));
        }
        if action.len() != ambient.group.len() {
            return Err(Error::Structural("one action per group element is required".into()));
        }
        for g in &action {
            g.validate(&lift.target)?;
        }
        Ok(NonunitalData { ambient, ideal_blocks, tilde_blocks, lift, action })
    }

    pub fn from_doc(doc: NonunitalDoc<F>) -> Result<Self> {
        NonunitalData::new(
            CoveringQuadruple::from_doc(doc.ambient)?,
            doc.ideal_blocks,
            doc.tilde_blocks,
            MorphismData::from_doc(doc.lift)?,
            doc.action,
        )
    }

    /// (a) `A ⊆ B` and `Ã ⊆ B̃` essential, (b) `lift = lift̃|_A`, (c) each
    /// `g` preserves `Ã` and restricts to the given action; whether the
    /// restriction determines `g` is reported separately.
    pub fn check(&self) -> Verdict {
        let amb = &self.ambient;
        let a_units: Vec<Element<F>> =
            self.lift.source.matrix_units::<F>().iter().map(|u| include(&amb.base, &self.ideal_blocks, u)).collect();
        let t_units: Vec<Element<F>> =
            self.lift.target.matrix_units::<F>().iter().map(|u| include(&amb.cover, &self.tilde_blocks, u)).collect();
        let ann_a = annihilator_dim(&amb.base, &a_units);
        let ann_t = annihilator_dim(&amb.cover, &t_units);
        let mut checks = vec![
            Check::new("essential_base", ann_a == 0, format!("annihilator of A in B has dimension {ann_a}")),
            Check::new("essential_cover", ann_t == 0, format!("annihilator of Ã in B̃ has dimension {ann_t}")),
        ];
        let restricts = self.lift.source.matrix_units::<F>().iter().zip(&a_units).all(|(u, ua)| {
            include(&amb.cover, &self.tilde_blocks, &self.lift.apply(u)) == amb.lift.apply(ua)
        });
        checks.push(Check::new("lift_restricts", restricts, "lift differs from the ambient lift on A"));
        let tset: Vec<bool> = (0..amb.cover.nblocks()).map(|y| self.tilde_blocks.contains(&y)).collect();
        let mut bad = Vec::new();
        for (i, g) in amb.group.iter().enumerate() {
            let preserves = (0..amb.cover.nblocks()).all(|y| tset[y] == tset[g.perm[y]]);
            let agrees = preserves
                && self.lift.target.matrix_units::<F>().iter().zip(&t_units).all(|(u, ut)| {
                    include(&amb.cover, &self.tilde_blocks, &self.action[i].apply(u)) == g.apply(ut)
                });
            if !agrees {
                bad.push(i);
            }
        }
        checks.push(Check::new("action_restricts", bad.is_empty(), format!("group elements {bad:?} do not restrict")));
        let mut clash = None;
        for i in 0..self.action.len() {
            for j in i + 1..self.action.len() {
                if clash.is_none()
                    && self.action[i].same_map(&self.action[j], &self.lift.target)
                    && !amb.group[i].same_map(&amb.group[j], &amb.cover)
                {
                    clash = Some((i, j));
                }
            }
        }
        checks.push(Check::new(
            "restriction_unique",
            clash.is_none(),
            format!("elements {clash:?} restrict equally but differ on B̃"),
        ));
        Verdict::of(checks)
    }
}
