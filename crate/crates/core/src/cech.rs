//! Nerves of covers and Čech cohomology with constant or presheaf
//! coefficients.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::abelian::{AbHom, CochainComplex, FgAbGroup, ZMatrix};
use crate::linalg::{Matrix, Subspace};
use crate::scalar::GaussRational;
use crate::sheaf::FinitePresheaf;
use crate::space::{mask_of, points_of, FiniteSpace, Mask};
use crate::{Error, Result};

pub const DEFAULT_CAP_DIM: usize = 12;
/// Hard ceiling on the number of simplices built, whatever the cap.
pub const MAX_SIMPLICES: usize = 1 << 18;

/// A projective-space cover member: `P(C^n)` minus a finite union of
/// projectivised subspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectiveMember {
    pub removed: Vec<Subspace<GaussRational>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cover {
    /// Subsets of a finite point set; intersections are bitwise.
    Sets { npoints: usize, members: Vec<Mask> },
    /// Abstract intersection table: a family is nonempty iff it lies in a facet.
    Table { size: usize, facets: Vec<Vec<usize>> },
    /// Complements of subspace arrangements in `P(C^ambient)`.
    Projective { ambient: usize, members: Vec<ProjectiveMember> },
}

impl Cover {
    pub fn sets(npoints: usize, members: Vec<Mask>) -> Result<Self> {
        if npoints > crate::space::MAX_POINTS {
            return Err(Error::Structural("too many points".into()));
        }
        let full = if npoints == 64 { Mask::MAX } else { (1 << npoints) - 1 };
        if members.iter().any(|&m| m & !full != 0) {
            return Err(Error::Structural("cover member outside the point set".into()));
        }
        let union = members.iter().fold(0, |a, &m| a | m);
        if union != full {
            return Err(Error::Structural(format!("members miss the points {:?}", points_of(full & !union))));
        }
        Ok(Cover::Sets { npoints, members })
    }

    /// Members must be open in `space`.
    pub fn on_space(space: &FiniteSpace, members: Vec<Mask>) -> Result<Self> {
        if let Some(&m) = members.iter().find(|&&m| !space.is_open(m)) {
            return Err(Error::Structural(format!("cover member {} is not open", space.describe(m))));
        }
        Cover::sets(space.npoints(), members)
    }

    /// The cover of a finite space by the minimal opens of its points.
    pub fn minimal_opens(space: &FiniteSpace) -> Self {
        let members = (0..space.npoints()).map(|x| space.minimal_open(x)).collect();
        Cover::Sets { npoints: space.npoints(), members }
    }

    pub fn table(size: usize, facets: Vec<Vec<usize>>) -> Result<Self> {
        if let Some(&i) = facets.iter().flatten().find(|&&i| i >= size) {
            return Err(Error::Structural(format!("facet mentions member {i} of {size}")));
        }
        if let Some(i) = (0..size).find(|i| !facets.iter().any(|f| f.contains(i))) {
            return Err(Error::Structural(format!("member {i} lies in no facet, so it is empty")));
        }
        Ok(Cover::Table { size, facets })
    }

    /// Checks that every removed set is a proper subspace and that the
    /// members cover: every choice of one removed subspace per member must
    /// intersect in zero.
    pub fn projective(ambient: usize, members: Vec<ProjectiveMember>) -> Result<Self> {
        for (i, m) in members.iter().enumerate() {
            for w in &m.removed {
                if w.ambient() != ambient {
                    return Err(Error::Structural(format!("member {i}: subspace in the wrong ambient dimension")));
                }
            }
        }
        if members.is_empty() {
            return Err(Error::Structural("empty cover".into()));
        }
        let mut choice = vec![0usize; members.len()];
        loop {
            if members.iter().zip(&choice).all(|(m, &c)| c < m.removed.len()) {
                let meet = members
                    .iter()
                    .zip(&choice)
                    .fold(Subspace::full(ambient), |acc, (m, &c)| acc.intersect(&m.removed[c]));
                if !meet.is_zero() {
                    return Err(Error::Structural(format!(
                        "members do not cover: a line survives in the removed subspaces {choice:?}"
                    )));
                }
            } else {
                // some member removes nothing, so it is the whole space
                break;
            }
            let mut k = 0;
            loop {
                if k == choice.len() {
                    return Ok(Cover::Projective { ambient, members });
                }
                choice[k] += 1;
                if choice[k] < members[k].removed.len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
        Ok(Cover::Projective { ambient, members })
    }

    pub fn len(&self) -> usize {
        match self {
            Cover::Sets { members, .. } => members.len(),
            Cover::Table { size, .. } => *size,
            Cover::Projective { members, .. } => members.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Whether the members indexed by `idx` have a common point.
    pub fn meets(&self, idx: &[usize]) -> bool {
        match self {
            Cover::Sets { members, npoints } => {
                let full = if *npoints == 64 { Mask::MAX } else { (1 << npoints) - 1 };
                idx.iter().fold(full, |a, &i| a & members[i]) != 0
            }
            Cover::Table { facets, .. } => facets.iter().any(|f| idx.iter().all(|i| f.contains(i))),
            // over an infinite field a finite union of proper subspaces
            // never fills the space
            Cover::Projective { ambient, members } => {
                idx.iter().all(|&i| members[i].removed.iter().all(|w| w.dim() < *ambient))
            }
        }
    }

    pub fn intersection(&self, idx: &[usize]) -> Option<Mask> {
        match self {
            Cover::Sets { members, npoints } => {
                let full = if *npoints == 64 { Mask::MAX } else { (1 << npoints) - 1 };
                Some(idx.iter().fold(full, |a, &i| a & members[i]))
            }
            _ => None,
        }
    }

    /// `{U_i × W_j}` indexed by `i * |W| + j`.
    pub fn product(&self, fiber: &Cover) -> ProductCover {
        ProductCover { base: self.clone(), fiber: fiber.clone() }
    }
}

#[derive(Clone, Debug)]
pub struct ProductCover {
    pub base: Cover,
    pub fiber: Cover,
}

pub trait IntersectionOracle {
    fn size(&self) -> usize;
    fn nonempty(&self, idx: &[usize]) -> bool;
}

impl IntersectionOracle for Cover {
    fn size(&self) -> usize {
        self.len()
    }
    fn nonempty(&self, idx: &[usize]) -> bool {
        self.meets(idx)
    }
}

impl IntersectionOracle for ProductCover {
    fn size(&self) -> usize {
        self.base.len() * self.fiber.len()
    }
    fn nonempty(&self, idx: &[usize]) -> bool {
        let w = self.fiber.len();
        let mut b: Vec<usize> = idx.iter().map(|&k| k / w).collect();
        let mut f: Vec<usize> = idx.iter().map(|&k| k % w).collect();
        b.sort_unstable();
        b.dedup();
        f.sort_unstable();
        f.dedup();
        self.base.meets(&b) && self.fiber.meets(&f)
    }
}

/// Simplices grouped by dimension, each an increasing index list, sorted
/// lexicographically within its dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Nerve {
    pub vertices: usize,
    pub simplices: Vec<Vec<Vec<usize>>>,
    /// Simplices above the dimension cap exist and were left out.
    pub truncated: bool,
}

impl Nerve {
    /// Builds up to `cap` dimensions, setting `truncated` when more exist.
    pub fn build_truncated(oracle: &impl IntersectionOracle, cap: usize) -> Result<Self> {
        let n = oracle.size();
        let mut simplices: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut layer: Vec<Vec<usize>> = (0..n).filter(|&i| oracle.nonempty(&[i])).map(|i| vec![i]).collect();
        let mut total = 0;
        let mut truncated = false;
        while !layer.is_empty() {
            if simplices.len() > cap {
                truncated = true;
                break;
            }
            total += layer.len();
            if total > MAX_SIMPLICES {
                return Err(Error::Resource {
                    msg: format!("nerve has more than {MAX_SIMPLICES} simplices"),
                    partial: format!("simplex counts by dimension so far: {:?}", counts(&simplices)),
                });
            }
            let mut next = Vec::new();
            for s in &layer {
                let last = *s.last().expect("nonempty simplex");
                for v in last + 1..n {
                    let mut t = s.clone();
                    t.push(v);
                    if oracle.nonempty(&t) {
                        next.push(t);
                    }
                }
            }
            simplices.push(layer);
            layer = next;
        }
        Ok(Nerve { vertices: n, simplices, truncated })
    }

    /// Like [`Nerve::build_truncated`] but a truncated nerve is an error.
    pub fn build(oracle: &impl IntersectionOracle, cap: usize) -> Result<Self> {
        let nerve = Nerve::build_truncated(oracle, cap)?;
        if nerve.truncated {
            return Err(Error::Resource {
                msg: format!("nerve has simplices above the dimension cap {cap}"),
                partial: format!("simplex counts by dimension up to the cap: {:?}", nerve.counts()),
            });
        }
        Ok(nerve)
    }

    pub fn dim(&self) -> Option<usize> {
        self.simplices.len().checked_sub(1)
    }

    pub fn counts(&self) -> Vec<usize> {
        counts(&self.simplices)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices.iter().enumerate().map(|(p, s)| if p % 2 == 0 { s.len() as i64 } else { -(s.len() as i64) }).sum()
    }

    pub fn is_full_simplex(&self) -> bool {
        self.simplices.len() == self.vertices && self.simplices.last().is_some_and(|top| top.len() == 1)
    }

    fn index(&self) -> Vec<HashMap<&[usize], usize>> {
        self.simplices.iter().map(|l| l.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect()).collect()
    }

    /// The simplicial cochain complex with coefficients in `g`.
    #[allow(clippy::needless_range_loop)]
    pub fn cochain_complex(&self, g: &FgAbGroup) -> CochainComplex {
        let k = g.ngens();
        let moduli: Vec<Vec<i64>> =
            self.simplices.iter().map(|l| l.iter().flat_map(|_| g.moduli()).collect()).collect();
        let index = self.index();
        let mut diffs = Vec::new();
        for p in 0..self.simplices.len().saturating_sub(1) {
            let mut d = Matrix::zeros(self.simplices[p + 1].len() * k, self.simplices[p].len() * k);
            for (row, tau) in self.simplices[p + 1].iter().enumerate() {
                for i in 0..tau.len() {
                    let face = drop_at(tau, i);
                    let col = index[p][face.as_slice()];
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    for c in 0..k {
                        d[(row * k + c, col * k + c)] += sign;
                    }
                }
            }
            diffs.push(d);
        }
        if moduli.is_empty() {
            return CochainComplex::new(vec![vec![]], vec![]).expect("empty complex");
        }
        CochainComplex::new(moduli, diffs).expect("shapes by construction")
    }
}

fn counts(s: &[Vec<Vec<usize>>]) -> Vec<usize> {
    s.iter().map(Vec::len).collect()
}

fn drop_at(s: &[usize], i: usize) -> Vec<usize> {
    s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect()
}

/// `H^p` for `p = 0..=dim(nerve)` with constant coefficients.
pub fn cech_cohomology(oracle: &impl IntersectionOracle, g: &FgAbGroup, cap: usize) -> Result<CechResult> {
    let nerve = Nerve::build(oracle, cap)?;
    let complex = nerve.cochain_complex(g);
    if !complex.check_d_squared() {
        return Err(Error::Structural("d∘d ≠ 0".into()));
    }
    let groups = if nerve.simplices.is_empty() { vec![] } else { complex.cohomology() };
    Ok(CechResult { nerve, groups })
}

/// Čech complex of `cover` (members open in the presheaf's space) with
/// coefficients `U_σ ↦ F(U_σ)`.
pub fn presheaf_complex(f: &FinitePresheaf, cover: &Cover, cap: usize) -> Result<(Nerve, CochainComplex)> {
    let Cover::Sets { npoints, members } = cover else {
        return Err(Error::Structural("presheaf coefficients need a cover by opens of a finite space".into()));
    };
    if *npoints != f.space.npoints() || members.iter().any(|&m| !f.space.is_open(m)) {
        return Err(Error::Structural("cover members must be opens of the presheaf's space".into()));
    }
    let nerve = Nerve::build(cover, cap)?;
    let inter = |s: &[usize]| cover.intersection(s).expect("set cover");
    let mut moduli = Vec::new();
    let mut offsets = Vec::new();
    for layer in &nerve.simplices {
        let mut m = Vec::new();
        let mut o = Vec::new();
        for s in layer {
            o.push(m.len());
            m.extend(f.group_of(inter(s))?.moduli());
        }
        moduli.push(m);
        offsets.push(o);
    }
    let index = nerve.index();
    let mut diffs = Vec::new();
    for p in 0..nerve.simplices.len().saturating_sub(1) {
        let mut d: ZMatrix = Matrix::zeros(moduli[p + 1].len(), moduli[p].len());
        for (row, tau) in nerve.simplices[p + 1].iter().enumerate() {
            for i in 0..tau.len() {
                let face = drop_at(tau, i);
                let col = index[p][face.as_slice()];
                let r = f.restriction(inter(&face), inter(tau))?.mat();
                let sign = if i % 2 == 0 { 1 } else { -1 };
                for a in 0..r.nrows() {
                    for b in 0..r.ncols() {
                        d[(offsets[p + 1][row] + a, offsets[p][col] + b)] += sign * r[(a, b)];
                    }
                }
            }
        }
        diffs.push(d);
    }
    if moduli.is_empty() {
        moduli.push(vec![]);
    }
    let complex = CochainComplex::new(moduli, diffs)?;
    if !complex.check_d_squared() {
        return Err(Error::Structural("d∘d ≠ 0: restrictions do not compose".into()));
    }
    Ok((nerve, complex))
}

pub fn cech_cohomology_presheaf(f: &FinitePresheaf, cover: &Cover, cap: usize) -> Result<CechResult> {
    let (nerve, complex) = presheaf_complex(f, cover, cap)?;
    let groups = if nerve.simplices.is_empty() { vec![] } else { complex.cohomology() };
    Ok(CechResult { nerve, groups })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CechResult {
    pub nerve: Nerve,
    pub groups: Vec<FgAbGroup>,
}

/// `{"H":[{"rank":r,"torsion":[...]}, ...]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyDoc {
    #[serde(rename = "H")]
    pub h: Vec<FgAbGroup>,
}

impl CechResult {
    pub fn doc(&self) -> CohomologyDoc {
        CohomologyDoc { h: self.groups.clone() }
    }
}

/// Refinement data for a map of covers: source member `i` is carried into
/// target member `lambda[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverMap {
    pub lambda: Vec<usize>,
}

impl CoverMap {
    /// When both covers are set covers and `f` is given, checks
    /// `f(U_i) ⊆ V_λ(i)`; otherwise checks that simplices go to simplices.
    pub fn new(source: &Cover, target: &Cover, lambda: Vec<usize>, f: Option<&[usize]>) -> Result<Self> {
        if lambda.len() != source.len() {
            return Err(Error::Structural(format!("refinement has {} entries for {} members", lambda.len(), source.len())));
        }
        if let Some(&j) = lambda.iter().find(|&&j| j >= target.len()) {
            return Err(Error::Structural(format!("refinement sends a member to {j}, beyond the target cover")));
        }
        if let (Some(f), Cover::Sets { members: us, npoints }, Cover::Sets { members: vs, .. }) = (f, source, target) {
            if f.len() != *npoints {
                return Err(Error::Structural("point map has the wrong length".into()));
            }
            for (i, &u) in us.iter().enumerate() {
                let img = crate::space::image(f, u);
                if img & !vs[lambda[i]] != 0 {
                    return Err(Error::Structural(format!("member {i} is not carried into target member {}", lambda[i])));
                }
            }
        }
        Ok(CoverMap { lambda })
    }

    pub fn compose(&self, first: &CoverMap) -> CoverMap {
        CoverMap { lambda: first.lambda.iter().map(|&i| self.lambda[i]).collect() }
    }

    /// Cochain map `C^p(target) → C^p(source)` with constant coefficients.
    pub fn cochain_map(&self, source: &Nerve, target: &Nerve, p: usize, g: &FgAbGroup) -> Result<ZMatrix> {
        let k = g.ngens();
        let src = source.simplices.get(p).map(Vec::as_slice).unwrap_or(&[]);
        let tgt_index = target.index();
        let tgt_len = target.simplices.get(p).map_or(0, Vec::len);
        let mut m = Matrix::zeros(src.len() * k, tgt_len * k);
        for (row, s) in src.iter().enumerate() {
            let img: Vec<usize> = s.iter().map(|&i| self.lambda[i]).collect();
            let Some((sorted, sign)) = sort_with_sign(&img) else {
                continue;
            };
            let col = *tgt_index.get(p).and_then(|ix| ix.get(sorted.as_slice())).ok_or_else(|| {
                Error::Structural(format!("refinement sends simplex {s:?} to {img:?}, which is not in the target nerve"))
            })?;
            for c in 0..k {
                m[(row * k + c, col * k + c)] = sign;
            }
        }
        Ok(m)
    }
}

/// `None` when there is a repeat (the alternating cochain vanishes there).
fn sort_with_sign(v: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut a = v.to_vec();
    let mut sign = 1;
    for i in 0..a.len() {
        for j in 0..a.len() - 1 - i {
            if a[j] > a[j + 1] {
                a.swap(j, j + 1);
                sign = -sign;
            } else if a[j] == a[j + 1] {
                return None;
            }
        }
    }
    if a.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((a, sign))
}

/// `H^q(target) → H^q(source)` for every degree present in both.
pub fn pullback_hom(
    source: &impl IntersectionOracle,
    target: &impl IntersectionOracle,
    map: &CoverMap,
    g: &FgAbGroup,
    cap: usize,
) -> Result<Vec<AbHom>> {
    let sn = Nerve::build(source, cap)?;
    let tn = Nerve::build(target, cap)?;
    let sc = sn.cochain_complex(g);
    let tc = tn.cochain_complex(g);
    // chain-map check: f d = d f in each degree
    for p in 0..tn.simplices.len().saturating_sub(1) {
        let lhs = map.cochain_map(&sn, &tn, p + 1, g)?.mul_mat(&tc.diffs[p]);
        let rhs = match sc.diffs.get(p) {
            Some(d) => d.mul_mat(&map.cochain_map(&sn, &tn, p, g)?),
            None => Matrix::zeros(lhs.nrows(), lhs.ncols()),
        };
        if lhs != rhs {
            return Err(Error::Structural(format!("refinement data is not a chain map in degree {p}")));
        }
    }
    let top = sn.simplices.len().min(tn.simplices.len());
    (0..top).map(|p| tc.induced_map(&sc, p, &map.cochain_map(&sn, &tn, p, g)?)).collect()
}

/// Report comparing the nerve answer of the cover by complements of
/// coordinate hyperplanes of `P(C^{n+1})` with the cohomology of `CP^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompactReport {
    pub n: usize,
    pub nerve_is_full_simplex: bool,
    pub nerve_side: Vec<FgAbGroup>,
    pub hausdorff_side: Vec<FgAbGroup>,
    /// `computed` when a triangulation was used, `reference` otherwise.
    pub hausdorff_source: String,
    pub agree: bool,
}

pub fn compact_report(n: usize, cap: usize) -> Result<CompactReport> {
    let cover = examples::coordinate_hyperplane_cover(n);
    let res = cech_cohomology(&cover, &FgAbGroup::free(1), cap)?;
    let (hausdorff_side, hausdorff_source) = if n == 1 {
        (cech_cohomology(&examples::tetrahedral_sphere(), &FgAbGroup::free(1), cap)?.groups, "computed")
    } else {
        ((0..=2 * n).map(|p| FgAbGroup::free(usize::from(p % 2 == 0))).collect(), "reference")
    };
    let mut a = res.groups.clone();
    let mut b = hausdorff_side.clone();
    let len = a.len().max(b.len());
    a.resize(len, FgAbGroup::zero());
    b.resize(len, FgAbGroup::zero());
    Ok(CompactReport {
        n,
        nerve_is_full_simplex: res.nerve.is_full_simplex(),
        nerve_side: res.groups,
        hausdorff_side,
        hausdorff_source: hausdorff_source.into(),
        agree: a == b,
    })
}

/// Stock covers used by the examples and the command line.
pub mod examples {
    use super::*;
    use crate::scalar::gi;

    /// The `n`-gon as a face poset: vertices `0..n`, edges `n..2n`; edge
    /// `n+i` joins `i` and `i+1`. Arc `i` is the star of vertex `i`.
    pub fn circle(n: usize) -> Cover {
        let members = (0..n).map(|i| mask_of(&[i, n + i, n + (i + n - 1) % n])).collect();
        Cover::sets(2 * n, members).expect("arcs cover")
    }

    /// The face-poset space of the `n`-gon: edges are open points.
    pub fn circle_space(n: usize) -> FiniteSpace {
        let stars: Vec<Mask> = (0..2 * n)
            .map(|p| if p < n { mask_of(&[p, n + p, n + (p + n - 1) % n]) } else { 1 << p })
            .collect();
        let names = (0..n).map(|i| format!("v{i}")).chain((0..n).map(|i| format!("e{i}"))).collect();
        FiniteSpace::generated(names, &stars).expect("face poset")
    }

    /// Winding the `k·n`-gon `k` times around the `n`-gon.
    pub fn circle_wrap(n: usize, k: usize) -> (Cover, Cover, Vec<usize>, CoverMap) {
        let big = circle(k * n);
        let small = circle(n);
        let m = k * n;
        let f: Vec<usize> = (0..2 * m).map(|p| if p < m { p % n } else { n + (p - m) % n }).collect();
        let lambda = (0..m).map(|i| i % n).collect();
        let map = CoverMap::new(&big, &small, lambda, Some(&f)).expect("wrapping map");
        (big, small, f, map)
    }

    /// Boundary of the tetrahedron by its 14 faces; member `i` is the open
    /// star of vertex `i`.
    pub fn tetrahedral_sphere() -> Cover {
        let faces: Vec<Vec<usize>> = (1u32..16)
            .filter(|m| m.count_ones() <= 3)
            .map(|m| (0..4).filter(|&i| m >> i & 1 == 1).collect())
            .collect();
        let members = (0..4)
            .map(|v| faces.iter().enumerate().filter(|(_, f)| f.contains(&v)).fold(0, |a, (i, _)| a | 1 << i))
            .collect();
        Cover::sets(faces.len(), members).expect("stars cover")
    }

    /// `CP^n` minus each coordinate hyperplane `e_j^⊥`, `j = 0..=n`.
    pub fn coordinate_hyperplane_cover(n: usize) -> Cover {
        let members = (0..=n)
            .map(|j| {
                let basis: Vec<Vec<GaussRational>> = (0..=n)
                    .filter(|&k| k != j)
                    .map(|k| (0..=n).map(|t| gi(i64::from(t == k))).collect())
                    .collect();
                ProjectiveMember { removed: vec![Subspace::span(n + 1, &basis)] }
            })
            .collect();
        Cover::projective(n + 1, members).expect("hyperplane complements cover")
    }

    /// An interval covered by `k` overlapping pieces in a row.
    pub fn interval(k: usize) -> Cover {
        let facets = if k == 1 { vec![vec![0]] } else { (0..k - 1).map(|i| vec![i, i + 1]).collect() };
        Cover::table(k, facets).expect("path")
    }

    pub fn point() -> Cover {
        Cover::table(1, vec![vec![0]]).expect("point")
    }

    /// The map collapsing a set cover onto the one-member cover of a point.
    pub fn to_point(c: &Cover) -> CoverMap {
        CoverMap { lambda: vec![0; c.len()] }
    }
}

/// Cover document: one of `space` + `members`, `table`, or `projective`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<crate::space::FiniteSpaceDoc>,
    /// Point count for a bare set cover without a topology.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub members: Vec<MemberDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<TableDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableDoc {
    pub size: usize,
    pub facets: Vec<Vec<usize>>,
}

/// A set of point indices, or the subspaces removed from projective space
/// (each given by spanning vectors).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MemberDoc {
    Points(Vec<usize>),
    Removed { removed: Vec<Vec<Vec<GaussRational>>> },
}

impl CoverDoc {
    /// Returns the cover and, for `space` documents, the space.
    pub fn build(&self) -> Result<(Cover, Option<FiniteSpace>)> {
        match (&self.space, self.points, &self.table, self.ambient) {
            (Some(s), None, None, None) => {
                let space = FiniteSpace::try_from(s.clone())?;
                let members = self.point_members(space.npoints())?;
                Ok((Cover::on_space(&space, members)?, Some(space)))
            }
            (None, Some(n), None, None) => Ok((Cover::sets(n, self.point_members(n)?)?, None)),
            (None, None, Some(t), None) if self.members.is_empty() => Ok((Cover::table(t.size, t.facets.clone())?, None)),
            (None, None, None, Some(amb)) => {
                let mut members = Vec::new();
                for (i, m) in self.members.iter().enumerate() {
                    let MemberDoc::Removed { removed } = m else {
                        return Err(Error::Structural(format!("members[{i}]: expected {{\"removed\": [...]}}")));
                    };
                    let mut ws = Vec::new();
                    for (j, vs) in removed.iter().enumerate() {
                        if vs.iter().any(|v| v.len() != amb) {
                            return Err(Error::Structural(format!("members[{i}].removed[{j}]: vectors must have length {amb}")));
                        }
                        ws.push(Subspace::span(amb, vs));
                    }
                    members.push(ProjectiveMember { removed: ws });
                }
                Ok((Cover::projective(amb, members)?, None))
            }
            _ => Err(Error::Structural(
                "cover needs exactly one of: space + members, points + members, table, ambient + members".into(),
            )),
        }
    }

    fn point_members(&self, n: usize) -> Result<Vec<Mask>> {
        self.members
            .iter()
            .enumerate()
            .map(|(i, m)| match m {
                MemberDoc::Points(ps) if ps.iter().all(|&p| p < n) => Ok(mask_of(ps)),
                MemberDoc::Points(_) => Err(Error::Structural(format!("members[{i}]: point index out of range"))),
                MemberDoc::Removed { .. } => Err(Error::Structural(format!("members[{i}]: expected a list of points"))),
            })
            .collect()
    }

    pub fn from_cover(c: &Cover, space: Option<&FiniteSpace>) -> Self {
        let empty = CoverDoc { space: None, points: None, members: vec![], table: None, ambient: None };
        match c {
            Cover::Sets { npoints, members } => CoverDoc {
                space: space.map(|s| s.clone().into()),
                points: if space.is_some() { None } else { Some(*npoints) },
                members: members.iter().map(|&m| MemberDoc::Points(points_of(m))).collect(),
                ..empty
            },
            Cover::Table { size, facets } => CoverDoc { table: Some(TableDoc { size: *size, facets: facets.clone() }), ..empty },
            Cover::Projective { ambient, members } => CoverDoc {
                ambient: Some(*ambient),
                members: members
                    .iter()
                    .map(|m| MemberDoc::Removed { removed: m.removed.iter().map(|w| w.basis().to_vec()).collect() })
                    .collect(),
                ..empty
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;

    fn z() -> FgAbGroup {
        FgAbGroup::free(1)
    }

    #[test]
    fn circle_nerve_and_cohomology() {
        let n = Nerve::build(&circle(3), DEFAULT_CAP_DIM).unwrap();
        assert_eq!(n.counts(), vec![3, 3]);
        let r = cech_cohomology(&circle(3), &z(), DEFAULT_CAP_DIM).unwrap();
        assert_eq!(r.groups, vec![z(), z()]);
        assert_eq!(cech_cohomology(&circle(4), &z(), DEFAULT_CAP_DIM).unwrap().groups, vec![z(), z()]);
        let r2 = cech_cohomology(&circle(3), &FgAbGroup::cyclic(2), DEFAULT_CAP_DIM).unwrap();
        assert_eq!(r2.groups, vec![FgAbGroup::cyclic(2); 2]);
    }

    #[test]
    fn sphere_and_projective_cover() {
        let s = cech_cohomology(&tetrahedral_sphere(), &z(), DEFAULT_CAP_DIM).unwrap();
        assert_eq!(s.nerve.counts(), vec![4, 6, 4]);
        assert_eq!(s.groups, vec![z(), FgAbGroup::zero(), z()]);
        for n in 1..4 {
            let r = cech_cohomology(&coordinate_hyperplane_cover(n), &z(), DEFAULT_CAP_DIM).unwrap();
            assert!(r.nerve.is_full_simplex());
            assert_eq!(r.groups[0], z());
            assert!(r.groups[1..].iter().all(FgAbGroup::is_zero));
        }
        let single = Nerve::build(&point(), DEFAULT_CAP_DIM).unwrap();
        assert_eq!(single.counts(), vec![1]);
    }

    #[test]
    fn projective_cover_must_cover() {
        // two copies of the same hyperplane leave its line uncovered
        let w = Subspace::span(2, &[vec![crate::scalar::gi(1), crate::scalar::gi(0)]]);
        let m = ProjectiveMember { removed: vec![w] };
        assert!(Cover::projective(2, vec![m.clone(), m]).is_err());
    }

    #[test]
    fn cap_truncates() {
        let c = coordinate_hyperplane_cover(4);
        assert!(matches!(Nerve::build(&c, 2), Err(Error::Resource { .. })));
        let t = Nerve::build_truncated(&c, 2).unwrap();
        assert!(t.truncated && t.counts() == vec![5, 10, 10]);
    }

    #[test]
    fn pullbacks() {
        let c = circle(3);
        let id = CoverMap::new(&c, &c, vec![0, 1, 2], None).unwrap();
        for h in pullback_hom(&c, &c, &id, &z(), DEFAULT_CAP_DIM).unwrap() {
            assert!(h.same_map(&AbHom::identity(&h.source)));
        }
        let (big, small, _, wrap) = circle_wrap(3, 2);
        let hs = pullback_hom(&big, &small, &wrap, &z(), DEFAULT_CAP_DIM).unwrap();
        // degree two, up to the choice of generators
        assert_eq!(hs[1].matrix.len(), 1);
        assert_eq!(hs[1].matrix[0][0].abs(), 2);
        let pt = to_point(&c);
        let hp = pullback_hom(&c, &point(), &pt, &z(), DEFAULT_CAP_DIM).unwrap();
        assert_eq!(hp.len(), 1);
        assert!(hp[0].is_iso());
    }

    #[test]
    fn products() {
        let r = cech_cohomology(&interval(2).product(&tetrahedral_sphere()), &z(), DEFAULT_CAP_DIM).unwrap();
        let trimmed: Vec<_> = r.groups.iter().take(3).cloned().collect();
        assert_eq!(trimmed, vec![z(), FgAbGroup::zero(), z()]);
        assert!(r.groups[3..].iter().all(FgAbGroup::is_zero));
        let c = cech_cohomology(&circle(3).product(&tetrahedral_sphere()), &z(), DEFAULT_CAP_DIM).unwrap();
        assert_eq!(&c.groups[..4], &[z(), z(), z(), z()]);
        assert!(c.groups[4..].iter().all(FgAbGroup::is_zero));
    }

    #[test]
    fn presheaf_coefficients() {
        let x = circle_space(3);
        let members: Vec<Mask> = (0..3).map(|i| mask_of(&[i, 3 + i, 3 + (i + 2) % 3])).collect();
        let cover = Cover::on_space(&x, members).unwrap();
        let lc = FinitePresheaf::constant(&x, &z()).sheafify().unwrap().sheaf;
        let r = cech_cohomology_presheaf(&lc, &cover, DEFAULT_CAP_DIM).unwrap();
        assert_eq!(r.groups, vec![z(), z()]);
    }

    #[test]
    fn doc_roundtrip() {
        for c in [circle(3), interval(3), coordinate_hyperplane_cover(2)] {
            let doc = CoverDoc::from_cover(&c, None);
            let json = serde_json::to_string(&doc).unwrap();
            let back: CoverDoc = serde_json::from_str(&json).unwrap();
            assert_eq!(back.build().unwrap().0, c);
        }
        let bad: CoverDoc = serde_json::from_str(r#"{"points":3,"members":[[0,1]]}"#).unwrap();
        assert!(bad.build().is_err());
    }
}
