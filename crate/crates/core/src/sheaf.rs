//! Presheaves of finitely generated abelian groups on finite spaces.
//!
//! Finite spaces are Alexandrov: every point `x` has a smallest open `U_x`,
//! so stalks are `F(U_x)` and the sheafification is
//! `F⁺(U) = {(s_x) ∈ Π_{x∈U} F(U_x) | s_x|U_y = s_y whenever y ∈ U_x}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::abelian::{reduce_mod, relation_columns, AbHom, FgAbGroup, Subquotient, ZMatrix};
use crate::linalg::Matrix;
use crate::snf::{integer_kernel, integer_solve};
use crate::space::{mask_of, points_of, ContinuousMap, FiniteSpace, FiniteSpaceDoc, Mask};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePresheaf {
    pub space: FiniteSpace,
    sections: Vec<FgAbGroup>,
    /// `(u, v) ↦ ρ_{UV}` for `V ⊆ U`, by open index.
    res: BTreeMap<(usize, usize), AbHom>,
}

/// Keys of `sections` are open indices in the document's own list of opens;
/// keys of `restrictions` are `"U>V"` pairs of such indices. Missing
/// restrictions are filled in as identities, zero maps or composites.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresheafDoc {
    pub space: FiniteSpaceDoc,
    pub sections: BTreeMap<String, FgAbGroup>,
    #[serde(default)]
    pub restrictions: BTreeMap<String, Vec<Vec<i64>>>,
}

impl FinitePresheaf {
    pub fn new(
        space: FiniteSpace,
        sections: Vec<FgAbGroup>,
        mut res: BTreeMap<(usize, usize), AbHom>,
    ) -> Result<Self> {
        let opens = space.opens().to_vec();
        if sections.len() != opens.len() {
            return Err(Error::Structural(format!("{} section groups for {} opens", sections.len(), opens.len())));
        }
        for g in &sections {
            g.validate()?;
        }
        for (&(u, v), h) in &res {
            if u >= opens.len() || v >= opens.len() || opens[v] & !opens[u] != 0 {
                return Err(Error::Structural(format!("restriction {u}>{v} is not between nested opens")));
            }
            if h.source != sections[u] || h.target != sections[v] {
                return Err(Error::Structural(format!("restriction {u}>{v} has the wrong source or target")));
            }
            h.check_well_defined()?;
        }
        let pairs: Vec<(usize, usize)> = (0..opens.len())
            .flat_map(|u| (0..opens.len()).map(move |v| (u, v)))
            .filter(|&(u, v)| opens[v] & !opens[u] == 0)
            .collect();
        for &(u, v) in &pairs {
            if u == v {
                res.entry((u, v)).or_insert_with(|| AbHom::identity(&sections[u]));
            } else if sections[u].is_zero() || sections[v].is_zero() {
                res.entry((u, v)).or_insert_with(|| AbHom::zero(&sections[u], &sections[v]));
            }
        }
        loop {
            let mut added = false;
            for &(u, v) in &pairs {
                if res.contains_key(&(u, v)) {
                    continue;
                }
                let via = (0..opens.len()).find(|&w| {
                    w != u && w != v && res.contains_key(&(u, w)) && res.contains_key(&(w, v))
                });
                if let Some(w) = via {
                    let h = res[&(w, v)].compose(&res[&(u, w)])?;
                    res.insert((u, v), h);
                    added = true;
                }
            }
            if !added {
                break;
            }
        }
        if let Some(&(u, v)) = pairs.iter().find(|p| !res.contains_key(p)) {
            return Err(Error::Structural(format!(
                "restriction {} > {} is missing",
                space.describe(opens[u]),
                space.describe(opens[v])
            )));
        }
        Ok(FinitePresheaf { space, sections, res })
    }

    pub fn from_doc(doc: &PresheafDoc) -> Result<Self> {
        let space = FiniteSpace::try_from(doc.space.clone())?;
        let canon: Vec<usize> = doc
            .space
            .opens
            .iter()
            .map(|o| space.open_index(mask_of(o)).expect("listed opens are opens"))
            .collect();
        let parse = |k: &str| -> Result<usize> {
            let i: usize = k.trim().parse().map_err(|_| Error::Structural(format!("bad open index {k:?}")))?;
            canon.get(i).copied().ok_or_else(|| Error::Structural(format!("open index {i} out of range")))
        };
        let mut sections = vec![None; space.opens().len()];
        for (k, g) in &doc.sections {
            sections[parse(k)?] = Some(g.clone());
        }
        let sections: Vec<FgAbGroup> = sections
            .into_iter()
            .enumerate()
            .map(|(i, g)| match g {
                Some(g) => Ok(g),
                None if space.opens()[i] == 0 => Ok(FgAbGroup::zero()),
                None => Err(Error::Structural(format!("sections: no group for open {}", space.describe(space.opens()[i])))),
            })
            .collect::<Result<_>>()?;
        let mut res = BTreeMap::new();
        for (k, rows) in &doc.restrictions {
            let (a, b) = k
                .split_once('>')
                .ok_or_else(|| Error::Structural(format!("restrictions: key {k:?} is not of the form U>V")))?;
            let (u, v) = (parse(a)?, parse(b)?);
            let src = &sections[u];
            if rows.len() != sections[v].ngens() || rows.iter().any(|r| r.len() != src.ngens()) {
                return Err(Error::Structural(format!(
                    "restrictions.{k}: matrix must be {}x{}",
                    sections[v].ngens(),
                    src.ngens()
                )));
            }
            let m = Matrix::from_rows(rows, src.ngens());
            let h = AbHom::new(src.clone(), sections[v].clone(), &m)
                .map_err(|e| Error::Structural(format!("restrictions.{k}: {e}")))?;
            res.insert((u, v), h);
        }
        FinitePresheaf::new(space, sections, res)
    }

    pub fn to_doc(&self) -> PresheafDoc {
        let opens = self.space.opens();
        let sections = (0..opens.len()).map(|i| (i.to_string(), self.sections[i].clone())).collect();
        let restrictions = self
            .res
            .iter()
            .filter(|((u, v), _)| u != v && !self.sections[*u].is_zero() && !self.sections[*v].is_zero())
            .map(|((u, v), h)| (format!("{u}>{v}"), h.matrix.clone()))
            .collect();
        PresheafDoc { space: self.space.clone().into(), sections, restrictions }
    }

    pub fn from_fn(
        space: &FiniteSpace,
        group: impl Fn(Mask) -> FgAbGroup,
        restriction: impl Fn(Mask, Mask, &FgAbGroup, &FgAbGroup) -> ZMatrix,
    ) -> Result<Self> {
        let opens = space.opens();
        let sections: Vec<FgAbGroup> = opens.iter().map(|&u| group(u)).collect();
        let mut res = BTreeMap::new();
        for (u, &mu) in opens.iter().enumerate() {
            for (v, &mv) in opens.iter().enumerate() {
                if mv & !mu == 0 {
                    let m = restriction(mu, mv, &sections[u], &sections[v]);
                    res.insert((u, v), AbHom::new(sections[u].clone(), sections[v].clone(), &m)?);
                }
            }
        }
        FinitePresheaf::new(space.clone(), sections, res)
    }

    pub fn zero(space: &FiniteSpace) -> Self {
        FinitePresheaf::from_fn(space, |_| FgAbGroup::zero(), |_, _, s, t| Matrix::zeros(t.ngens(), s.ngens()))
            .expect("zero presheaf")
    }

    /// `U ↦ G` on nonempty opens with identity restrictions.
    pub fn constant(space: &FiniteSpace, g: &FgAbGroup) -> Self {
        FinitePresheaf::from_fn(
            space,
            |u| if u == 0 { FgAbGroup::zero() } else { g.clone() },
            |_, v, s, t| if v == 0 { Matrix::zeros(t.ngens(), s.ngens()) } else { Matrix::identity(s.ngens()) },
        )
        .expect("constant presheaf")
    }

    /// `G` on opens containing `p`, zero elsewhere.
    pub fn skyscraper(space: &FiniteSpace, p: usize, g: &FgAbGroup) -> Self {
        let has = move |u: Mask| u >> p & 1 == 1;
        FinitePresheaf::from_fn(
            space,
            |u| if has(u) { g.clone() } else { FgAbGroup::zero() },
            |_, v, s, t| if has(v) { Matrix::identity(s.ngens()) } else { Matrix::zeros(t.ngens(), s.ngens()) },
        )
        .expect("skyscraper presheaf")
    }

    pub fn sections(&self) -> &[FgAbGroup] {
        &self.sections
    }

    fn idx(&self, u: Mask) -> Result<usize> {
        self.space
            .open_index(u)
            .ok_or_else(|| Error::Structural(format!("{} is not open", self.space.describe(u))))
    }

    pub fn group_of(&self, u: Mask) -> Result<&FgAbGroup> {
        Ok(&self.sections[self.idx(u)?])
    }

    pub fn restriction(&self, u: Mask, v: Mask) -> Result<&AbHom> {
        let (a, b) = (self.idx(u)?, self.idx(v)?);
        self.res
            .get(&(a, b))
            .ok_or_else(|| Error::Structural(format!("{} is not inside {}", self.space.describe(v), self.space.describe(u))))
    }

    /// `F(U_x)` with the canonical maps from every `F(U)`, `x ∈ U`.
    pub fn stalk(&self, x: usize) -> Result<Stalk> {
        if x >= self.space.npoints() {
            return Err(Error::Structural(format!("point {x} out of range")));
        }
        let ux = self.space.minimal_open(x);
        let maps = self
            .space
            .opens()
            .iter()
            .filter(|&&u| u >> x & 1 == 1)
            .map(|&u| Ok((u, self.restriction(u, ux)?.clone())))
            .collect::<Result<_>>()?;
        Ok(Stalk { point: x, group: self.group_of(ux)?.clone(), maps })
    }

    /// Conditions (0) `F(∅) = 0`, (1) `ρ_UU = id`, (2) `ρ_VW ∘ ρ_UV = ρ_UW`.
    pub fn check_presheaf(&self) -> Verdict {
        let mut failures = Vec::new();
        let opens = self.space.opens();
        if !self.sections[0].is_zero() {
            failures.push("F(∅) is not zero".to_string());
        }
        for (u, g) in self.sections.iter().enumerate() {
            if !self.res[&(u, u)].same_map(&AbHom::identity(g)) {
                failures.push(format!("restriction to {} itself is not the identity", self.space.describe(opens[u])));
            }
        }
        for (&(u, v), ruv) in &self.res {
            for w in 0..opens.len() {
                if opens[w] & !opens[v] != 0 {
                    continue;
                }
                let composed = self.res[&(v, w)].compose(ruv).expect("matching groups");
                if !composed.same_map(&self.res[&(u, w)]) {
                    failures.push(format!(
                        "restrictions {} > {} > {} do not compose",
                        self.space.describe(opens[u]),
                        self.space.describe(opens[v]),
                        self.space.describe(opens[w])
                    ));
                }
            }
        }
        Verdict { ok: failures.is_empty(), failures }
    }

    /// Separation and gluing for every open and every cover of it by smaller
    /// opens. Covers containing `U` itself hold trivially and are skipped.
    pub fn check_sheaf(&self) -> Result<SheafVerdict> {
        let presheaf = self.check_presheaf();
        let mut sep_fail = Vec::new();
        let mut glue_fail = Vec::new();
        for &u in self.space.opens() {
            let inner: Vec<Mask> = self.space.opens().iter().copied().filter(|&v| v != 0 && v != u && v & !u == 0).collect();
            if inner.len() > 20 {
                return Err(Error::Resource {
                    msg: format!("{} has {} proper sub-opens; cover enumeration is capped at 20", self.space.describe(u), inner.len()),
                    partial: String::new(),
                });
            }
            let mut covers: Vec<Vec<Mask>> = Vec::new();
            if u == 0 {
                covers.push(vec![]);
            }
            for bits in 1u32..(1 << inner.len()) {
                let cover: Vec<Mask> = (0..inner.len()).filter(|&i| bits >> i & 1 == 1).map(|i| inner[i]).collect();
                if cover.iter().fold(0, |a, &c| a | c) == u {
                    covers.push(cover);
                }
            }
            for cover in covers {
                let (sep, glue) = self.cover_condition(u, &cover)?;
                let name = || {
                    format!(
                        "{} covered by [{}]",
                        self.space.describe(u),
                        cover.iter().map(|&c| self.space.describe(c)).collect::<Vec<_>>().join(", ")
                    )
                };
                if !sep {
                    sep_fail.push(name());
                }
                if !glue {
                    glue_fail.push(name());
                }
            }
        }
        let separation = sep_fail.is_empty();
        let gluing = glue_fail.is_empty();
        let mut witnesses: Vec<String> = presheaf.failures.clone();
        witnesses.extend(sep_fail.into_iter().map(|s| format!("separation fails: {s}")));
        witnesses.extend(glue_fail.into_iter().map(|s| format!("gluing fails: {s}")));
        Ok(SheafVerdict { presheaf: presheaf.ok, separation, gluing, sheaf: presheaf.ok && separation && gluing, witnesses })
    }

    /// `(separation, gluing)` for one cover.
    fn cover_condition(&self, u: Mask, cover: &[Mask]) -> Result<(bool, bool)> {
        let fu = self.group_of(u)?;
        let pieces: Vec<&FgAbGroup> = cover.iter().map(|&c| self.group_of(c)).collect::<Result<_>>()?;
        let p_mod: Vec<i64> = pieces.iter().flat_map(|g| g.moduli()).collect();
        let offs = offsets(pieces.iter().map(|g| g.ngens()));
        // r : F(U) → Π F(U_i)
        let mut r = Matrix::zeros(p_mod.len(), fu.ngens());
        for (i, &c) in cover.iter().enumerate() {
            paste(&mut r, offs[i], 0, &self.restriction(u, c)?.mat());
        }
        // δ : Π F(U_i) → Π_{i<j} F(U_i ∩ U_j)
        let mut rows = Vec::new();
        let mut q_mod = Vec::new();
        for i in 0..cover.len() {
            for j in i + 1..cover.len() {
                let w = cover[i] & cover[j];
                let gw = self.group_of(w)?;
                let mut block = Matrix::zeros(gw.ngens(), p_mod.len());
                paste(&mut block, 0, offs[i], &self.restriction(cover[i], w)?.mat());
                paste(&mut block, 0, offs[j], &self.restriction(cover[j], w)?.mat().neg());
                rows.push(block);
                q_mod.extend(gw.moduli());
            }
        }
        let delta = rows.into_iter().fold(Matrix::zeros(0, p_mod.len()), |a, b| a.vstack(&b));
        let separation = diag_kernel(&r, &q_or(&p_mod)).iter().all(|k| reduce_mod(&fu.moduli(), k).iter().all(|&x| x == 0));
        let gluing = diag_kernel(&delta, &q_mod).iter().all(|k| in_image(&r, &p_mod, k));
        Ok((separation, gluing))
    }

    /// All restrictions surjective.
    pub fn is_flasque(&self) -> bool {
        self.res.values().all(AbHom::is_surjective)
    }

    /// Points where the germ of `s ∈ F(X)` is nonzero, and whether that set is
    /// closed.
    pub fn section_support(&self, s: &[i64]) -> Result<(Mask, bool)> {
        let full = self.space.full();
        let fx = self.group_of(full)?;
        if s.len() != fx.ngens() {
            return Err(Error::Structural(format!("section needs {} coordinates", fx.ngens())));
        }
        let mut supp = 0;
        for x in 0..self.space.npoints() {
            let germ = self.restriction(full, self.space.minimal_open(x))?.apply(s);
            if germ.iter().any(|&c| c != 0) {
                supp |= 1 << x;
            }
        }
        Ok((supp, self.space.is_closed(supp)))
    }

    /// `(f_* F)(V) = F(f^{-1} V)` on the target of `f`.
    pub fn direct_image(&self, f: &ContinuousMap) -> Result<FinitePresheaf> {
        if f.source != self.space {
            return Err(Error::Structural("map does not start at the base of the presheaf".into()));
        }
        FinitePresheaf::from_fn(
            &f.target,
            |v| self.group_of(f.preimage(v)).expect("continuous").clone(),
            |v, w, _, _| self.restriction(f.preimage(v), f.preimage(w)).expect("nested").mat(),
        )
    }

    /// `f^{-1} G`: the sheafification of `U ↦ G(smallest open ⊇ f(U))`.
    pub fn inverse_image(&self, f: &ContinuousMap) -> Result<Sheafification> {
        if f.target != self.space {
            return Err(Error::Structural("map does not end at the base of the presheaf".into()));
        }
        let hull = |u: Mask| self.space.open_hull(crate::space::image(&f.map, u));
        let pre = FinitePresheaf::from_fn(
            &f.source,
            |u| self.group_of(hull(u)).expect("hull is open").clone(),
            |u, v, _, _| self.restriction(hull(u), hull(v)).expect("nested hulls").mat(),
        )?;
        pre.sheafify()
    }

    pub fn sheafify(&self) -> Result<Sheafification> {
        let opens = self.space.opens().to_vec();
        let mut quotients = Vec::with_capacity(opens.len());
        for &u in &opens {
            let pts = points_of(u);
            let stalks: Vec<FgAbGroup> =
                pts.iter().map(|&x| self.group_of(self.space.minimal_open(x)).cloned()).collect::<Result<_>>()?;
            let p_mod: Vec<i64> = stalks.iter().flat_map(|g| g.moduli()).collect();
            let offs = offsets(stalks.iter().map(|g| g.ngens()));
            let mut blocks = Vec::new();
            let mut q_mod = Vec::new();
            for (i, &x) in pts.iter().enumerate() {
                let ux = self.space.minimal_open(x);
                for (j, &y) in pts.iter().enumerate() {
                    if i == j || ux >> y & 1 == 0 {
                        continue;
                    }
                    let uy = self.space.minimal_open(y);
                    let gy = &stalks[j];
                    let mut block = Matrix::zeros(gy.ngens(), p_mod.len());
                    paste(&mut block, 0, offs[i], &self.restriction(ux, uy)?.mat());
                    paste(&mut block, 0, offs[j], &Matrix::<i64>::identity(gy.ngens()).neg());
                    blocks.push(block);
                    q_mod.extend(gy.moduli());
                }
            }
            let c = blocks.into_iter().fold(Matrix::zeros(0, p_mod.len()), |a, b| a.vstack(&b));
            let rels = relation_columns(&p_mod);
            let mut gens = diag_kernel(&c, &q_mod);
            gens.extend(rels.iter().cloned());
            let sq = Subquotient::new(p_mod.len(), &gens, &rels)?;
            quotients.push(Compat { points: pts, offsets: offs, sq });
        }
        let sections: Vec<FgAbGroup> = quotients.iter().map(|c| c.sq.group.clone()).collect();
        let mut res = BTreeMap::new();
        let mut theta = Vec::with_capacity(opens.len());
        for (a, &u) in opens.iter().enumerate() {
            let ca = &quotients[a];
            for (b, &v) in opens.iter().enumerate() {
                if v & !u != 0 {
                    continue;
                }
                let cb = &quotients[b];
                let mut cols = Vec::new();
                for j in 0..ca.sq.group.ngens() {
                    let rep = ca.sq.reps.col(j);
                    let mut w = Vec::new();
                    for &y in &cb.points {
                        let i = ca.points.iter().position(|&p| p == y).expect("V ⊆ U");
                        let n = self.group_of(self.space.minimal_open(y))?.ngens();
                        w.extend_from_slice(&rep[ca.offsets[i]..ca.offsets[i] + n]);
                    }
                    cols.push(cb.sq.coords(&w)?);
                }
                let m = Matrix::from_cols(&cols, sections[b].ngens());
                res.insert((a, b), AbHom::new(sections[a].clone(), sections[b].clone(), &m)?);
            }
            // θ_U : F(U) → F⁺(U), s ↦ (s|U_x)_x
            let fu = &self.sections[a];
            let mut cols = Vec::new();
            for k in 0..fu.ngens() {
                let mut e = vec![0; fu.ngens()];
                e[k] = 1;
                let mut w = Vec::new();
                for &x in &ca.points {
                    w.extend(self.restriction(u, self.space.minimal_open(x))?.apply(&e));
                }
                cols.push(ca.sq.coords(&w)?);
            }
            let m = Matrix::from_cols(&cols, sections[a].ngens());
            theta.push(AbHom::new(fu.clone(), sections[a].clone(), &m)?);
        }
        let sheaf = FinitePresheaf::new(self.space.clone(), sections, res)?;
        Ok(Sheafification { sheaf, theta: PresheafMorphism { maps: theta } })
    }

    /// The étalé space: one point per germ, topologised two ways. `window`
    /// bounds the free coordinates of stalks with a free part.
    pub fn etale_space(&self, window: Option<i64>) -> Result<EtaleSpace> {
        let n = self.space.npoints();
        let mut germs: Vec<(usize, Vec<i64>)> = Vec::new();
        for x in 0..n {
            let g = self.group_of(self.space.minimal_open(x))?;
            let elems = match (g.elements(), window) {
                (Some(e), _) => e,
                (None, Some(w)) => g.elements_windowed(w),
                (None, None) => {
                    return Err(Error::Resource {
                        msg: format!("stalk {g} at point {x} is infinite; supply a window"),
                        partial: String::new(),
                    })
                }
            };
            germs.extend(elems.into_iter().map(|e| (x, e)));
        }
        if germs.len() > 64 {
            return Err(Error::Resource { msg: format!("{} germs exceed the 64-point limit", germs.len()), partial: String::new() });
        }
        let names: Vec<String> = germs.iter().map(|(x, e)| format!("{}:{e:?}", self.space.names()[*x])).collect();
        let index = |x: usize, e: &[i64]| germs.iter().position(|(y, f)| *y == x && f == e);
        let mut subbasis = Vec::new();
        let mut section_maps: Vec<(Mask, Vec<usize>)> = Vec::new();
        let mut truncated = false;
        for &u in self.space.opens() {
            let g = self.group_of(u)?;
            let elems = g.elements().unwrap_or_else(|| g.elements_windowed(window.unwrap_or(0)));
            for s in elems {
                let mut img = Vec::new();
                for x in points_of(u) {
                    let germ = self.restriction(u, self.space.minimal_open(x))?.apply(&s);
                    match index(x, &germ) {
                        Some(i) => img.push(i),
                        None => truncated = true,
                    }
                }
                if img.len() == points_of(u).len() {
                    subbasis.push(img.iter().fold(0u64, |m, &i| m | 1 << i));
                    section_maps.push((u, img));
                }
            }
        }
        let generated = FiniteSpace::generated(names.clone(), &subbasis)?;
        let final_topology = if germs.len() <= 20 {
            let sources: Vec<(FiniteSpace, Vec<usize>)> =
                section_maps.iter().map(|(u, img)| (self.space.subspace(*u), img.clone())).collect();
            let refs: Vec<(&FiniteSpace, Vec<usize>)> = sources.iter().map(|(s, m)| (s, m.clone())).collect();
            Some(FiniteSpace::final_topology(names, &refs)?)
        } else {
            None
        };
        let projection: Vec<usize> = germs.iter().map(|(x, _)| *x).collect();
        let projection_continuous =
            self.space.opens().iter().all(|&v| generated.is_open(crate::space::preimage(&projection, v)));
        let agree = final_topology.as_ref().map(|f| *f == generated);
        Ok(EtaleSpace { germs, generated, final_topology, agree, projection, projection_continuous, truncated })
    }
}

struct Compat {
    points: Vec<usize>,
    offsets: Vec<usize>,
    sq: Subquotient,
}

fn offsets(sizes: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut acc = 0;
    sizes
        .map(|s| {
            let o = acc;
            acc += s;
            o
        })
        .collect()
}

fn paste(m: &mut ZMatrix, r0: usize, c0: usize, b: &ZMatrix) {
    for i in 0..b.nrows() {
        for j in 0..b.ncols() {
            m[(r0 + i, c0 + j)] = b[(i, j)];
        }
    }
}

fn q_or(m: &[i64]) -> Vec<i64> {
    m.to_vec()
}

/// Generators (in source coordinates) of `{x | m x ≡ 0 mod diag(tgt_mod)}`.
fn diag_kernel(m: &ZMatrix, tgt_mod: &[i64]) -> Vec<Vec<i64>> {
    let n = m.ncols();
    let mut cols: Vec<Vec<i64>> = (0..n).map(|j| m.col(j)).collect();
    cols.extend(relation_columns(tgt_mod));
    if m.nrows() == 0 {
        return Matrix::<i64>::identity(n).rows_vec();
    }
    let k = integer_kernel(&Matrix::from_cols(&cols, m.nrows()));
    (0..k.ncols()).map(|j| k.col(j)[..n].to_vec()).collect()
}

/// Whether `y ≡ m x mod diag(tgt_mod)` is solvable.
fn in_image(m: &ZMatrix, tgt_mod: &[i64], y: &[i64]) -> bool {
    let mut cols: Vec<Vec<i64>> = (0..m.ncols()).map(|j| m.col(j)).collect();
    cols.extend(relation_columns(tgt_mod));
    if cols.is_empty() {
        return y.iter().all(|&v| v == 0);
    }
    integer_solve(&Matrix::from_cols(&cols, m.nrows()), y).is_some()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub ok: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SheafVerdict {
    pub presheaf: bool,
    pub separation: bool,
    /// The gluing condition on its own.
    pub gluing: bool,
    pub sheaf: bool,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Stalk {
    pub point: usize,
    pub group: FgAbGroup,
    /// `(U, F(U) → F_x)` for every open `U ∋ x`.
    pub maps: Vec<(Mask, AbHom)>,
}

/// A family of homomorphisms `F(U) → G(U)`, by open index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresheafMorphism {
    pub maps: Vec<AbHom>,
}

impl PresheafMorphism {
    /// Shapes and naturality `ρ^G ∘ ψ_U = ψ_V ∘ ρ^F`.
    pub fn check(&self, src: &FinitePresheaf, tgt: &FinitePresheaf) -> Result<bool> {
        if src.space != tgt.space || self.maps.len() != src.sections.len() {
            return Err(Error::Structural("morphism between presheaves on different spaces".into()));
        }
        for (i, h) in self.maps.iter().enumerate() {
            if h.source != src.sections[i] || h.target != tgt.sections[i] {
                return Err(Error::Structural(format!("component {i} has the wrong groups")));
            }
        }
        Ok(src.res.iter().all(|(&(u, v), rf)| {
            let a = tgt.res[&(u, v)].compose(&self.maps[u]).expect("shapes");
            let b = self.maps[v].compose(rf).expect("shapes");
            a.same_map(&b)
        }))
    }

    pub fn compose(&self, first: &PresheafMorphism) -> Result<PresheafMorphism> {
        Ok(PresheafMorphism { maps: self.maps.iter().zip(&first.maps).map(|(b, a)| b.compose(a)).collect::<Result<_>>()? })
    }

    pub fn same_map(&self, o: &PresheafMorphism) -> bool {
        self.maps.len() == o.maps.len() && self.maps.iter().zip(&o.maps).all(|(a, b)| a.same_map(b))
    }

    pub fn is_iso(&self) -> bool {
        self.maps.iter().all(AbHom::is_iso)
    }

    /// Every natural morphism with free entries in `-window..=window`.
    pub fn enumerate(src: &FinitePresheaf, tgt: &FinitePresheaf, window: i64) -> Vec<PresheafMorphism> {
        let choices: Vec<Vec<AbHom>> =
            src.sections.iter().zip(&tgt.sections).map(|(a, b)| AbHom::enumerate(a, b, window)).collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; choices.len()];
        if choices.iter().any(Vec::is_empty) {
            return out;
        }
        loop {
            let m = PresheafMorphism { maps: idx.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect() };
            if m.check(src, tgt).unwrap_or(false) {
                out.push(m);
            }
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return out;
                }
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
}

/// `F⁺` with the canonical `θ : F → F⁺`.
#[derive(Clone, Debug)]
pub struct Sheafification {
    pub sheaf: FinitePresheaf,
    pub theta: PresheafMorphism,
}

impl Sheafification {
    /// The factorisation `ψ̃ : F⁺ → G` of `ψ : F → G` through `θ`, for `G` a
    /// sheaf: `ψ̃(s)` is the section of `G` whose germs are `ψ(s_x)`.
    pub fn factor(&self, source: &FinitePresheaf, psi: &PresheafMorphism, g: &FinitePresheaf) -> Result<PresheafMorphism> {
        if !psi.check(source, g)? {
            return Err(Error::Structural("ψ is not natural".into()));
        }
        let sp = &self.sheaf.space;
        let mut maps = Vec::new();
        for &u in sp.opens() {
            let pts = points_of(u);
            let gu = g.group_of(u)?;
            let fu = self.sheaf.group_of(u)?;
            let mut stacked = Matrix::zeros(0, gu.ngens());
            let mut t_mod = Vec::new();
            for &x in &pts {
                let ux = sp.minimal_open(x);
                stacked = stacked.vstack(&g.restriction(u, ux)?.mat());
                t_mod.extend(g.group_of(ux)?.moduli());
            }
            let mut cols = Vec::new();
            for j in 0..fu.ngens() {
                let mut e = vec![0; fu.ngens()];
                e[j] = 1;
                let mut target = Vec::new();
                for &x in &pts {
                    let ux = sp.minimal_open(x);
                    // germ of the generator at x, read through F⁺(U_x) ≅ F(U_x)
                    let germ_plus = self.sheaf.restriction(u, ux)?.apply(&e);
                    let theta_x = &self.theta.maps[sp.open_index(ux).expect("open")];
                    let germ = theta_x
                        .preimage(&germ_plus)
                        .ok_or_else(|| Error::Structural("θ is not onto a stalk".into()))?;
                    target.extend(psi.maps[sp.open_index(ux).expect("open")].apply(&germ));
                }
                let mut a: Vec<Vec<i64>> = (0..stacked.ncols()).map(|k| stacked.col(k)).collect();
                a.extend(relation_columns(&t_mod));
                let sol = if a.is_empty() {
                    Some(vec![])
                } else {
                    integer_solve(&Matrix::from_cols(&a, t_mod.len()), &target)
                };
                let sol = sol.ok_or_else(|| Error::Domain("target is not a sheaf: germs do not glue".into()))?;
                cols.push(gu.reduce(&sol[..gu.ngens()]));
            }
            maps.push(AbHom::new(fu.clone(), gu.clone(), &Matrix::from_cols(&cols, gu.ngens()))?);
        }
        let m = PresheafMorphism { maps };
        if !m.check(&self.sheaf, g)? || !m.compose(&self.theta)?.same_map(psi) {
            return Err(Error::Domain("factorisation through θ failed".into()));
        }
        Ok(m)
    }
}

#[derive(Clone, Debug)]
pub struct EtaleSpace {
    pub germs: Vec<(usize, Vec<i64>)>,
    /// Generated by the images of local sections.
    pub generated: FiniteSpace,
    /// Finest topology making every local section continuous (≤ 20 germs).
    pub final_topology: Option<FiniteSpace>,
    pub agree: Option<bool>,
    pub projection: Vec<usize>,
    pub projection_continuous: bool,
    /// Some section had a germ outside the window and was skipped.
    pub truncated: bool,
}
