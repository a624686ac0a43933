pub mod blowup;
pub mod cech;
pub mod cover;
pub mod gelfand;
pub mod pi1;
pub mod sheafify;
pub mod ultra;

use gelfkit_core::algebra::{BlockAlgebra, IdealDoc, LeftIdeal};
use gelfkit_core::gelfand::{PointDoc, UltrafilterPoint};
use gelfkit_core::{GaussRational, Subspace};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::io::{load, CliResult, Context, Failure};

/// Scalars of every algebra read from the command line.
pub type G = GaussRational;

pub struct Ctx {
    pub seed: u64,
    pub cap: usize,
}

impl Ctx {
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// A report and whether every verdict in it passed.
pub struct Outcome {
    pub report: Value,
    pub ok: bool,
}

impl Outcome {
    pub fn new(report: impl Serialize, ok: bool) -> Self {
        Outcome { report: to_value(report), ok }
    }
}

pub fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("reports serialise")
}

pub fn subspace_doc(v: &Subspace<G>) -> Vec<Vec<G>> {
    v.basis().to_vec()
}

/// Corners and ideals share the per-block subspace layout.
pub fn subspaces_doc(vs: &[Subspace<G>]) -> IdealDoc<G> {
    IdealDoc { subspaces: vs.iter().map(subspace_doc).collect() }
}

pub fn load_points(alg: &BlockAlgebra, args: &[String]) -> CliResult<Vec<UltrafilterPoint<G>>> {
    args.iter()
        .map(|a| {
            let (src, doc): (_, PointDoc<G>) = load(a)?;
            UltrafilterPoint::from_doc(alg, doc).within(&src)
        })
        .collect()
}

pub fn load_ideal(alg: &BlockAlgebra, arg: &str) -> CliResult<LeftIdeal<G>> {
    let (src, doc): (_, IdealDoc<G>) = load(arg)?;
    LeftIdeal::from_doc(alg, &doc).within(&src)
}

/// Exactly one of the named inputs must be present.
pub fn exactly_one(what: &str, given: &[(&str, bool)]) -> CliResult<()> {
    let n = given.iter().filter(|(_, b)| *b).count();
    if n == 1 {
        return Ok(());
    }
    let names: Vec<String> = given.iter().map(|(s, _)| format!("--{s}")).collect();
    Err(Failure::structural(what, format!("give exactly one of {}", names.join(", "))))
}

/// `name:arg` example selectors.
pub fn split_example(s: &str) -> (&str, Option<&str>) {
    match s.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (s, None),
    }
}

pub fn parse_count(src: &str, s: Option<&str>, default: usize) -> CliResult<usize> {
    match s {
        None => Ok(default),
        Some(t) => t.parse().map_err(|_| Failure::structural(src, format!("expected a count, got {t:?}"))),
    }
}
