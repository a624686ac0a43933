use gelfkit_core::sheaf::{FinitePresheaf, PresheafDoc};
use serde_json::{json, Value};

use super::{Ctx, Outcome};
use crate::io::{load, CliResult, Context};

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Presheaf document `{space, sections, restrictions}`.
    #[arg(long)]
    presheaf: String,
    /// Exit 2 unless the input is already a sheaf.
    #[arg(long)]
    check: bool,
}

fn stalks(f: &FinitePresheaf, src: &str) -> CliResult<Vec<Value>> {
    (0..f.space.npoints())
        .map(|x| {
            let s = f.stalk(x).within(src)?;
            Ok(json!({"point": f.space.names()[x], "group": s.group}))
        })
        .collect()
}

/// Reports the presheaf and sheaf verdicts of the input, its sheafification
/// and the stalks on both sides. An input failing the presheaf laws exits 2
/// without sheafifying.
pub fn run(args: &Args, _ctx: &Ctx) -> CliResult<Outcome> {
    let (src, doc): (_, PresheafDoc) = load(&args.presheaf)?;
    let f = FinitePresheaf::from_doc(&doc).within(&src)?;
    let pre = f.check_presheaf();
    if !pre.ok {
        return Ok(Outcome::new(json!({"presheaf": pre}), false));
    }
    let verdict = f.check_sheaf().within(&src)?;
    let s = f.sheafify().within(&src)?;
    let before = stalks(&f, &src)?;
    let after = stalks(&s.sheaf, "sheafification")?;
    let theta: Vec<_> = s.theta.maps.iter().map(|h| h.matrix.clone()).collect();
    let preserved = before == after;
    let report = json!({
        "presheaf": pre,
        "input": verdict,
        "flasque": f.is_flasque(),
        "sheafification": s.sheaf.to_doc(),
        "theta": theta,
        "stalks": before,
        "stalks_preserved": preserved,
    });
    let ok = preserved && (!args.check || verdict.sheaf);
    Ok(Outcome { report, ok })
}
