use gelfkit_core::algebra::{BlockAlgebra, Element};
use gelfkit_core::blowup::{BlowingUp, BlowingUpDoc};
use gelfkit_core::gelfand::sample_points;
use gelfkit_core::scalar::{parse_rational, Rational};
use gelfkit_core::space::points_of;
use serde_json::{json, Value};

use super::{exactly_one, Ctx, Outcome, G};
use crate::io::{load, CliResult, Context, Failure};

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Blowing-up document `{algebra, space, block_to_point}`.
    #[arg(long)]
    blowup: Option<String>,
    /// Block algebra, blown up canonically over its discrete block set.
    #[arg(long)]
    algebra: Option<String>,
    /// Random Gelfand points for the factorization check.
    #[arg(long, default_value_t = 10)]
    sample: usize,
    /// Element `{"blocks":[..]}` whose support is reported; repeatable.
    #[arg(long)]
    element: Vec<String>,
    /// Tolerance of the compact-support approximation, a rational.
    #[arg(long, default_value = "1/1000")]
    eps: String,
}

fn names(b: &BlowingUp, m: u64) -> Vec<String> {
    points_of(m).into_iter().map(|p| b.space.names()[p].clone()).collect()
}

pub fn run(args: &Args, ctx: &Ctx) -> CliResult<Outcome> {
    exactly_one("blowup", &[("blowup", args.blowup.is_some()), ("algebra", args.algebra.is_some())])?;
    let (src, b) = match (&args.blowup, &args.algebra) {
        (Some(a), _) => {
            let (src, doc): (_, BlowingUpDoc) = load(a)?;
            let b = BlowingUp::try_from(doc).within(&src)?;
            (src, b)
        }
        (None, Some(a)) => {
            let (src, alg): (_, BlockAlgebra) = load(a)?;
            (src, BlowingUp::canonical(alg))
        }
        (None, None) => unreachable!(),
    };
    let eps: Rational = parse_rational(&args.eps).map_err(|e| Failure::structural("--eps", e.to_string()))?;

    let (left, right) = b.is_dense::<G>();
    let central = b.is_central::<G>();
    let laws = b.check_u_laws::<G>().within(&src)?;
    let mut subalgebras = Vec::new();
    for &u in b.space.opens() {
        let s = b.u_subalgebra::<G>(u).within(&src)?;
        subalgebras.push(json!({"open": names(&b, u), "blocks": s.blocks, "dim": s.corner.dim()}));
    }
    let sample = sample_points::<G>(&b.algebra, args.sample, &mut ctx.rng());
    let fact = b.factorization(&sample).within(&src)?;

    let mut ok = left && right && central && laws.is_empty() && fact.commutes;
    let mut supports = Vec::new();
    for e in &args.element {
        let (esrc, a): (_, Element<G>) = load(e)?;
        let supp = b.support(&a).within(&esrc)?;
        let approx = b.approx_compact(&a, &eps).within(&esrc)?;
        ok &= approx.ok;
        supports.push(json!({
            "support": names(&b, supp),
            "closed": b.space.is_closed(supp),
            "approx_compact": {"ok": approx.ok, "differences": approx.diffs},
        }));
    }
    let mut report = json!({
        "dense": {"left": left, "right": right},
        "central": central,
        "laws": {"ok": laws.is_empty(), "failures": laws},
        "u_subalgebras": subalgebras,
        "factorization": fact,
    });
    if !supports.is_empty() {
        report["supports"] = Value::Array(supports);
    }
    report["ok"] = json!(ok);
    Ok(Outcome { report, ok })
}
