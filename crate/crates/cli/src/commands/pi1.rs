use gelfkit_core::covering::pi1::{pi1_presentation, TwoComplex, TwoComplexDoc};
use serde_json::json;

use super::{exactly_one, parse_count, split_example, Ctx, Outcome};
use crate::io::{load, CliResult, Context, Failure};

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Two-complex document.
    #[arg(long)]
    complex: Option<String>,
    /// Built-in complex: `wedge:K`, `torus`, `klein`, `rp2`, or `word:W` for a one-vertex complex with one relator.
    #[arg(long)]
    example: Option<String>,
    /// Base vertex index.
    #[arg(long, default_value_t = 0)]
    base: usize,
}

fn example_complex(s: &str) -> CliResult<TwoComplex> {
    let (name, arg) = split_example(s);
    match name {
        "wedge" => Ok(TwoComplex::wedge(parse_count(s, arg, 2)?)),
        "torus" => Ok(TwoComplex::torus()),
        "klein" => Ok(TwoComplex::klein_bottle()),
        "rp2" => Ok(TwoComplex::projective_plane()),
        "word" => TwoComplex::one_relator(arg.unwrap_or_default()).within(s),
        _ => Err(Failure::structural(s, "unknown example; use wedge:K, torus, klein, rp2 or word:W")),
    }
}

/// The presentation, plus cellular `H^1` and `H^2` of the same complex.
/// `H^1` is free of the abelianization's rank and `H^2` carries its torsion;
/// a mismatch exits 2.
pub fn run(args: &Args, _ctx: &Ctx) -> CliResult<Outcome> {
    exactly_one("pi1", &[("complex", args.complex.is_some()), ("example", args.example.is_some())])?;
    let (src, x) = match (&args.complex, &args.example) {
        (Some(c), _) => {
            let (src, doc): (_, TwoComplexDoc) = load(c)?;
            let x = TwoComplex::from_doc(&doc).within(&src)?;
            (src, x)
        }
        (None, Some(e)) => (e.clone(), example_complex(e)?),
        (None, None) => unreachable!(),
    };
    if args.base >= x.vertices.len() {
        return Err(Failure::structural(&src, format!("base vertex {} out of range", args.base)));
    }
    let p = pi1_presentation(&x, args.base).within(&src)?;
    let doc = p.doc();
    let h = x.cellular_cochains().cohomology();
    let agree = h[1].rank == doc.abelianization.rank && h[1].torsion.is_empty() && h[2].torsion == doc.abelianization.torsion;
    let report = json!({
        "base": x.vertices[args.base],
        "generators": doc.generators,
        "relators": doc.relators,
        "abelianization": doc.abelianization,
        "free": p.is_free(),
        "cohomology": {"H": h},
        "cohomology_agrees": agree,
    });
    Ok(Outcome { report, ok: agree })
}
