use gelfkit_core::cech::{cech_cohomology, cech_cohomology_presheaf, compact_report, examples, Cover, CoverDoc};
use gelfkit_core::sheaf::{FinitePresheaf, PresheafDoc};
use gelfkit_core::space::FiniteSpace;
use gelfkit_core::FgAbGroup;
use serde_json::{json, Value};

use super::{exactly_one, parse_count, split_example, to_value, Ctx, Outcome};
use crate::io::{load, parse, read_arg, CliResult, Context, Failure};

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Cover document (`space`+`members`, `points`+`members`, `table` or `ambient`+`members`).
    #[arg(long)]
    cover: Option<String>,
    /// Finite space, covered by its minimal opens; a cover document is also accepted.
    #[arg(long)]
    space: Option<String>,
    /// Built-in cover: `circle:N`, `sphere`, `projective:N`, `interval:K`.
    #[arg(long)]
    example: Option<String>,
    /// Constant coefficients: `Z`, `Z^k`, `Z/n`, `0`, sums joined by `+`.
    #[arg(long, default_value = "Z")]
    coeff: String,
    /// Presheaf coefficients; the cover defaults to the minimal opens.
    #[arg(long)]
    presheaf: Option<String>,
    /// Also report the nerve's simplex counts.
    #[arg(long)]
    nerve: bool,
    /// Compare the nerve of the hyperplane-complement cover of P(C^{n+1})
    /// with the cohomology of CP^n; exits 2 when they disagree.
    #[arg(long, value_name = "N")]
    compact_report: Option<usize>,
}

pub fn parse_coeff(s: &str) -> CliResult<FgAbGroup> {
    let bad = || Failure::structural("--coeff", format!("cannot read coefficient group {s:?}"));
    let mut moduli = Vec::new();
    for part in s.split('+').map(str::trim) {
        if part == "0" {
            continue;
        }
        if part == "Z" {
            moduli.push(0);
        } else if let Some(k) = part.strip_prefix("Z^") {
            let k: usize = k.parse().map_err(|_| bad())?;
            moduli.extend(std::iter::repeat_n(0, k));
        } else if let Some(n) = part.strip_prefix("Z/") {
            let n: i64 = n.parse().map_err(|_| bad())?;
            if n < 1 {
                return Err(bad());
            }
            moduli.push(n);
        } else {
            return Err(bad());
        }
    }
    let gs: Vec<FgAbGroup> = moduli.into_iter().map(FgAbGroup::cyclic).collect();
    Ok(FgAbGroup::direct_sum(&gs).group)
}

fn example_cover(s: &str) -> CliResult<Cover> {
    let (name, arg) = split_example(s);
    match name {
        "circle" => {
            let n = parse_count(s, arg, 3)?;
            if n < 3 {
                return Err(Failure::structural(s, "a circle needs at least 3 arcs"));
            }
            Ok(examples::circle(n))
        }
        "sphere" => Ok(examples::tetrahedral_sphere()),
        "projective" => Ok(examples::coordinate_hyperplane_cover(parse_count(s, arg, 1)?)),
        "interval" => Ok(examples::interval(parse_count(s, arg, 2)?.max(1))),
        _ => Err(Failure::structural(s, "unknown example; use circle:N, sphere, projective:N or interval:K")),
    }
}

/// A `--space` argument holding either a cover document or a bare space.
fn space_cover(arg: &str) -> CliResult<(Cover, Option<FiniteSpace>)> {
    let (src, text) = read_arg(arg)?;
    let v: Value = parse(&src, &text)?;
    let is_cover = ["members", "table", "ambient"].iter().any(|k| v.get(k).is_some());
    if is_cover {
        let doc: CoverDoc = parse(&src, &text)?;
        doc.build().within(&src)
    } else {
        let space: FiniteSpace = parse(&src, &text)?;
        Ok((Cover::minimal_opens(&space), Some(space)))
    }
}

pub fn run(args: &Args, ctx: &Ctx) -> CliResult<Outcome> {
    if let Some(n) = args.compact_report {
        let r = compact_report(n, ctx.cap).within("compact report")?;
        let ok = r.agree;
        return Ok(Outcome::new(r, ok));
    }
    let presheaf = match &args.presheaf {
        Some(p) => {
            let (src, doc): (_, PresheafDoc) = load(p)?;
            Some(FinitePresheaf::from_doc(&doc).within(&src)?)
        }
        None => None,
    };
    let given = [("cover", args.cover.is_some()), ("space", args.space.is_some()), ("example", args.example.is_some())];
    let cover = if presheaf.is_some() && given.iter().all(|(_, b)| !b) {
        None
    } else {
        exactly_one("cech", &given)?;
        Some(if let Some(c) = &args.cover {
            let (src, doc): (_, CoverDoc) = load(c)?;
            doc.build().within(&src)?.0
        } else if let Some(s) = &args.space {
            space_cover(s)?.0
        } else {
            example_cover(args.example.as_deref().unwrap_or_default())?
        })
    };
    let res = match &presheaf {
        Some(f) => {
            let cover = cover.unwrap_or_else(|| Cover::minimal_opens(&f.space));
            cech_cohomology_presheaf(f, &cover, ctx.cap).within("presheaf")?
        }
        None => {
            let g = parse_coeff(&args.coeff)?;
            cech_cohomology(&cover.expect("cover selected"), &g, ctx.cap).within("cover")?
        }
    };
    let mut report = to_value(res.doc());
    if args.nerve {
        report["nerve"] = json!({
            "vertices": res.nerve.vertices,
            "counts": res.nerve.counts(),
            "euler_characteristic": res.nerve.euler_characteristic(),
            "full_simplex": res.nerve.is_full_simplex(),
        });
    }
    Ok(Outcome { report, ok: true })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_syntax() {
        assert_eq!(parse_coeff("Z").unwrap(), FgAbGroup::free(1));
        assert_eq!(parse_coeff("Z^3").unwrap(), FgAbGroup::free(3));
        assert_eq!(parse_coeff("0").unwrap(), FgAbGroup::zero());
        assert_eq!(parse_coeff("Z/2 + Z/3").unwrap(), FgAbGroup::cyclic(6));
        assert_eq!(parse_coeff("Z/2+Z/4+Z").unwrap(), FgAbGroup::new(1, vec![2, 4]).unwrap());
        assert!(parse_coeff("Q").is_err());
        assert!(parse_coeff("Z/0").is_err());
    }
}
