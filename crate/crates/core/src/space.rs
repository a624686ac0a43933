//! Finite topological spaces with opens stored as bitsets over point indices.

use serde::{Deserialize, Serialize};

use crate::order::{FilterRep, LatticeHom, SemiLattice};
use crate::{Error, Result};

pub type Mask = u64;

pub const MAX_POINTS: usize = 64;

pub fn mask_of(points: &[usize]) -> Mask {
    points.iter().fold(0, |m, &p| m | (1 << p))
}

pub fn points_of(m: Mask) -> Vec<usize> {
    (0..MAX_POINTS).filter(|&p| m >> p & 1 == 1).collect()
}

fn full_mask(n: usize) -> Mask {
    if n == MAX_POINTS {
        Mask::MAX
    } else {
        (1 << n) - 1
    }
}

/// A finite space; `opens` is sorted ascending as integers and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FiniteSpaceDoc", into = "FiniteSpaceDoc")]
pub struct FiniteSpace {
    names: Vec<String>,
    opens: Vec<Mask>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteSpaceDoc {
    pub points: Vec<String>,
    pub opens: Vec<Vec<usize>>,
}

impl TryFrom<FiniteSpaceDoc> for FiniteSpace {
    type Error = Error;
    fn try_from(d: FiniteSpaceDoc) -> Result<Self> {
        let n = d.points.len();
        let mut opens = Vec::with_capacity(d.opens.len());
        for o in &d.opens {
            if let Some(p) = o.iter().find(|&&p| p >= n) {
                return Err(Error::Structural(format!("open refers to point {p} of {n}")));
            }
            opens.push(mask_of(o));
        }
        FiniteSpace::new(d.points, opens)
    }
}

impl From<FiniteSpace> for FiniteSpaceDoc {
    fn from(x: FiniteSpace) -> Self {
        FiniteSpaceDoc { opens: x.opens.iter().map(|&m| points_of(m)).collect(), points: x.names }
    }
}

fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

impl FiniteSpace {
    /// Validates closure under union and intersection.
    pub fn new(names: Vec<String>, mut opens: Vec<Mask>) -> Result<Self> {
        let n = names.len();
        if n > MAX_POINTS {
            return Err(Error::Structural(format!("at most {MAX_POINTS} points are supported")));
        }
        let full = full_mask(n);
        if opens.iter().any(|&o| o & !full != 0) {
            return Err(Error::Structural("open set outside the point set".into()));
        }
        opens.sort_unstable();
        opens.dedup();
        if opens.binary_search(&0).is_err() || opens.binary_search(&full).is_err() {
            return Err(Error::Structural("opens must contain the empty set and the whole space".into()));
        }
        for &a in &opens {
            for &b in &opens {
                if opens.binary_search(&(a | b)).is_err() || opens.binary_search(&(a & b)).is_err() {
                    return Err(Error::Structural(format!(
                        "opens not closed under union and intersection: {:?}, {:?}",
                        points_of(a),
                        points_of(b)
                    )));
                }
            }
        }
        Ok(FiniteSpace { names, opens })
    }

    /// Topology generated by a subbasis: finite intersections, then unions.
    pub fn generated(names: Vec<String>, subbasis: &[Mask]) -> Result<Self> {
        let full = full_mask(names.len());
        let mut opens: Vec<Mask> = vec![0, full];
        opens.extend(subbasis.iter().map(|&s| s & full));
        loop {
            let before = opens.len();
            let snapshot = opens.clone();
            for &a in &snapshot {
                for &b in &snapshot {
                    opens.push(a & b);
                    opens.push(a | b);
                }
            }
            opens.sort_unstable();
            opens.dedup();
            if opens.len() == before {
                break;
            }
        }
        FiniteSpace::new(names, opens)
    }

    pub fn discrete(n: usize) -> Self {
        let opens = (0..=full_mask(n)).collect();
        FiniteSpace { names: default_names(n), opens }
    }

    pub fn indiscrete(n: usize) -> Self {
        let mut opens = vec![0, full_mask(n)];
        opens.dedup();
        FiniteSpace { names: default_names(n), opens }
    }

    /// Points `o` (open) and `c` (closed).
    pub fn sierpinski() -> Self {
        FiniteSpace { names: vec!["o".into(), "c".into()], opens: vec![0, 0b01, 0b11] }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.names.len() {
            return Err(Error::Structural("name count must match point count".into()));
        }
        self.names = names;
        Ok(self)
    }

    pub fn npoints(&self) -> usize {
        self.names.len()
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    pub fn opens(&self) -> &[Mask] {
        &self.opens
    }
    pub fn full(&self) -> Mask {
        full_mask(self.npoints())
    }

    pub fn point_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_open(&self, m: Mask) -> bool {
        self.opens.binary_search(&m).is_ok()
    }

    pub fn open_index(&self, m: Mask) -> Option<usize> {
        self.opens.binary_search(&m).ok()
    }

    pub fn is_closed(&self, m: Mask) -> bool {
        self.is_open(self.full() & !m)
    }

    /// Largest open inside `m`.
    pub fn interior(&self, m: Mask) -> Mask {
        self.opens.iter().filter(|&&o| o & !m == 0).fold(0, |acc, &o| acc | o)
    }

    pub fn closure(&self, m: Mask) -> Mask {
        self.full() & !self.interior(self.full() & !m)
    }

    /// Smallest open containing `p`.
    pub fn minimal_open(&self, p: usize) -> Mask {
        self.opens.iter().filter(|&&o| o >> p & 1 == 1).fold(self.full(), |acc, &o| acc & o)
    }

    pub fn opens_containing(&self, p: usize) -> Vec<usize> {
        (0..self.opens.len()).filter(|&i| self.opens[i] >> p & 1 == 1).collect()
    }

    pub fn is_discrete(&self) -> bool {
        (0..self.npoints()).all(|p| self.is_open(1 << p))
    }

    /// Finite spaces are Hausdorff exactly when discrete.
    pub fn is_hausdorff(&self) -> bool {
        self.is_discrete()
    }

    pub fn describe(&self, m: Mask) -> String {
        let names: Vec<&str> = points_of(m).into_iter().map(|p| self.names[p].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Opens ordered by inclusion, meet = intersection, zero = ∅.
    pub fn open_lattice(&self) -> SemiLattice {
        let names = self.opens.iter().map(|&m| self.describe(m)).collect();
        SemiLattice::from_order_fn(names, 0, |i, j| self.opens[i] & !self.opens[j] == 0)
            .expect("open sets form a meet-semilattice")
    }

    /// Coarsest topology on `n` points making every map continuous.
    pub fn initial_topology(names: Vec<String>, maps: &[(Vec<usize>, &FiniteSpace)]) -> Result<Self> {
        let n = names.len();
        let mut sub = Vec::new();
        for (f, y) in maps {
            check_function(f, n, y.npoints())?;
            sub.extend(y.opens.iter().map(|&v| preimage(f, v)));
        }
        FiniteSpace::generated(names, &sub)
    }

    /// Finest topology on `n` points making every map continuous.
    pub fn final_topology(names: Vec<String>, maps: &[(&FiniteSpace, Vec<usize>)]) -> Result<Self> {
        let n = names.len();
        if n > 24 {
            return Err(Error::Resource {
                msg: "final topology enumerates all subsets; at most 24 points".into(),
                partial: String::new(),
            });
        }
        for (x, f) in maps {
            check_function(f, x.npoints(), n)?;
        }
        let opens = (0..=full_mask(n))
            .filter(|&u| maps.iter().all(|(x, f)| x.is_open(preimage(f, u))))
            .collect();
        FiniteSpace::new(names, opens)
    }

    /// Points `p` such that every open containing `p` lies in the filter.
    pub fn ultrafilter_limits(&self, f: &FilterRep) -> Result<Vec<usize>> {
        if f.members.iter().any(|&m| m >= self.opens.len()) {
            return Err(Error::Structural("filter member is not an open of this space".into()));
        }
        Ok((0..self.npoints()).filter(|&p| self.opens_containing(p).iter().all(|&i| f.contains(i))).collect())
    }

    /// The nonempty opens, the candidate members of covers.
    pub fn nonempty_opens(&self) -> Vec<Mask> {
        self.opens.iter().copied().filter(|&o| o != 0).collect()
    }

    /// Smallest open containing every point of `m`.
    pub fn open_hull(&self, m: Mask) -> Mask {
        points_of(m).into_iter().fold(0, |acc, p| acc | self.minimal_open(p))
    }

    /// `m` with the subspace topology; points keep their names.
    pub fn subspace(&self, m: Mask) -> FiniteSpace {
        let pts = points_of(m);
        let squeeze = |o: Mask| pts.iter().enumerate().filter(|(_, &p)| o >> p & 1 == 1).fold(0, |a, (i, _)| a | 1 << i);
        let mut opens: Vec<Mask> = self.opens.iter().map(|&o| squeeze(o & m)).collect();
        opens.sort_unstable();
        opens.dedup();
        FiniteSpace { names: pts.iter().map(|&p| self.names[p].clone()).collect(), opens }
    }
}

fn check_function(f: &[usize], n: usize, m: usize) -> Result<()> {
    if f.len() != n {
        return Err(Error::Structural(format!("map defined on {} points, expected {n}", f.len())));
    }
    if let Some(v) = f.iter().find(|&&v| v >= m) {
        return Err(Error::Structural(format!("map value {v} out of range {m}")));
    }
    Ok(())
}

pub fn preimage(f: &[usize], v: Mask) -> Mask {
    f.iter().enumerate().filter(|(_, &y)| v >> y & 1 == 1).fold(0, |m, (x, _)| m | (1 << x))
}

pub fn image(f: &[usize], u: Mask) -> Mask {
    points_of(u).into_iter().fold(0, |m, x| m | (1 << f[x]))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuousMap {
    pub source: FiniteSpace,
    pub target: FiniteSpace,
    pub map: Vec<usize>,
}

impl ContinuousMap {
    pub fn new(source: FiniteSpace, target: FiniteSpace, map: Vec<usize>) -> Result<Self> {
        check_function(&map, source.npoints(), target.npoints())?;
        if let Some(&v) = target.opens.iter().find(|&&v| !source.is_open(preimage(&map, v))) {
            return Err(Error::Structural(format!(
                "map is not continuous: preimage of {} is not open",
                target.describe(v)
            )));
        }
        Ok(ContinuousMap { source, target, map })
    }

    pub fn identity(x: &FiniteSpace) -> Self {
        ContinuousMap { source: x.clone(), target: x.clone(), map: (0..x.npoints()).collect() }
    }

    pub fn preimage(&self, v: Mask) -> Mask {
        preimage(&self.map, v)
    }

    /// Open preimage as a map of open lattices, target → source.
    pub fn lattice_hom(&self) -> LatticeHom {
        let map = self
            .target
            .opens
            .iter()
            .map(|&v| self.source.open_index(self.preimage(v)).expect("continuity checked"))
            .collect();
        LatticeHom::new(self.target.open_lattice(), self.source.open_lattice(), map)
            .expect("preimage preserves intersections and inclusions")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::DEFAULT_FILTER_BOUND;

    #[test]
    fn lattice_sizes() {
        assert_eq!(FiniteSpace::discrete(2).open_lattice().len(), 4);
        assert_eq!(FiniteSpace::sierpinski().open_lattice().len(), 3);
        let l = FiniteSpace::discrete(3).open_lattice();
        assert_eq!(l.len(), 8);
        assert_eq!(l.enumerate_ultrafilters(DEFAULT_FILTER_BOUND).unwrap().len(), 3);
    }

    #[test]
    fn rejects_non_topologies() {
        let names = default_names(3);
        assert!(FiniteSpace::new(names.clone(), vec![0, 0b001, 0b010, 0b111]).is_err());
        assert!(FiniteSpace::new(names, vec![0b001, 0b111]).is_err());
    }

    #[test]
    fn initial_topology_examples() {
        let names = || default_names(3);
        assert_eq!(FiniteSpace::initial_topology(names(), &[]).unwrap(), FiniteSpace::indiscrete(3));
        let s = FiniteSpace::sierpinski();
        // p0 ↦ o, others ↦ c; then p1 ↦ o, others ↦ c
        let x = FiniteSpace::initial_topology(names(), &[(vec![0, 1, 1], &s), (vec![1, 0, 1], &s)]).unwrap();
        assert_eq!(x.opens().len(), 5);
        let d = FiniteSpace::discrete(2);
        let y = FiniteSpace::initial_topology(names(), &[(vec![0, 0, 1], &d)]).unwrap();
        assert_eq!(y.opens(), &[0, 0b011, 0b100, 0b111]);
    }

    #[test]
    fn final_topology_examples() {
        let d4 = FiniteSpace::discrete(4);
        let q = FiniteSpace::final_topology(default_names(2), &[(&d4, vec![0, 0, 1, 1])]).unwrap();
        assert!(q.is_discrete());
        assert!(FiniteSpace::final_topology(default_names(3), &[]).unwrap().is_discrete());
        let s = FiniteSpace::sierpinski();
        let same = FiniteSpace::final_topology(s.names().to_vec(), &[(&s, vec![0, 1])]).unwrap();
        assert_eq!(same, s);
    }

    #[test]
    fn limits() {
        let s = FiniteSpace::sierpinski();
        let l = s.open_lattice();
        let o = s.open_index(0b01).unwrap();
        let u = l.generate_filter(&[o]).unwrap().filter().unwrap();
        assert_eq!(s.ultrafilter_limits(&u).unwrap(), vec![0, 1]);
        let ind = FiniteSpace::indiscrete(2);
        let whole = FilterRep::new(vec![ind.open_index(0b11).unwrap()]);
        assert_eq!(ind.ultrafilter_limits(&whole).unwrap(), vec![0, 1]);
    }

    #[test]
    fn preimage_is_lattice_hom() {
        let d = FiniteSpace::discrete(2);
        let s = FiniteSpace::sierpinski();
        let f = ContinuousMap::new(d, s.clone(), vec![0, 1]).unwrap();
        assert_eq!(f.lattice_hom().map.len(), 3);
        assert!(ContinuousMap::new(s, FiniteSpace::discrete(2), vec![0, 1]).is_err());
    }
}
