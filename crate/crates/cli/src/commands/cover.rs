use gelfkit_core::algebra::Corner;
use gelfkit_core::covering::graph::GraphMap;
use gelfkit_core::covering::{CoveringQuadruple, EvenlyCovered, NonunitalData, NonunitalDoc, QuadrupleDoc, UnitalReport};
use serde_json::{json, Value};

use super::{exactly_one, load_ideal, subspaces_doc, Ctx, Outcome, G};
use crate::io::{load, CliResult, Context, Failure};

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Quadruple document `{group, lift, family}`.
    #[arg(long)]
    quadruple: Option<String>,
    /// Corner of the base, as per-block subspaces; repeatable. Checked for being evenly covered.
    #[arg(long, requires = "quadruple")]
    corner: Vec<String>,
    /// Random base points for the unital covering check.
    #[arg(long, default_value_t = 10)]
    sample: usize,
    /// Nonunital covering document.
    #[arg(long)]
    nonunital: Option<String>,
    /// Graph map document `{source, target, map}`, checked for being a covering.
    #[arg(long)]
    graph: Option<String>,
    /// Second covering of the same base; the first is factored through it.
    #[arg(long, requires = "graph")]
    over: Option<String>,
    /// Built-in input: `swap` (M_2 into M_2 + M_2), `hexagon` (6-cycle over 3-cycle), `tower` (12-cycle over 6-cycle over 3-cycle).
    #[arg(long)]
    example: Option<String>,
}

fn evenly_doc(e: &EvenlyCovered<G>) -> Value {
    let witnesses: Vec<Value> = e
        .witnesses
        .iter()
        .map(|w| json!({"blocks": w.blocks, "corner": subspaces_doc(&w.corner.subspaces)}))
        .collect();
    json!({
        "ok": e.ok(),
        "proper": e.proper,
        "connected": e.connected,
        "witnesses": witnesses,
        "searched": e.searched,
    })
}

fn unital_doc(q: &CoveringQuadruple<G>, r: &UnitalReport<G>) -> Value {
    let rows: Vec<Value> = r
        .rows
        .iter()
        .map(|row| {
            json!({
                "point": row.point.to_doc(&q.base),
                "corner": row.corner.as_ref().map(|c| subspaces_doc(&c.subspaces)),
                "witness_blocks": row.witness_blocks,
            })
        })
        .collect();
    json!({"ok": r.ok, "failures": r.failures, "rows": rows})
}

fn quadruple(q: &CoveringQuadruple<G>, corners: &[String], sample: usize, ctx: &Ctx) -> CliResult<Outcome> {
    let pre = q.check_precovering();
    let mut ok = pre.ok;
    let mut report = json!({"precovering": pre});
    let points = q.sample(sample, &mut ctx.rng());
    let unital = q.check_unital_covering(&points).within("quadruple")?;
    ok &= unital.ok;
    report["unital"] = unital_doc(q, &unital);
    if !corners.is_empty() {
        let mut rows = Vec::new();
        for c in corners {
            let l = load_ideal(&q.base, c)?;
            let e = q.check_evenly_covered(&Corner { subspaces: l.subspaces }).within(c)?;
            ok &= e.ok();
            rows.push(evenly_doc(&e));
        }
        report["evenly_covered"] = Value::Array(rows);
    }
    report["ok"] = json!(ok);
    Ok(Outcome { report, ok })
}

fn graphs(p: &GraphMap, over: Option<&GraphMap>) -> CliResult<Outcome> {
    let v = p.check_covering();
    let mut ok = v.covering;
    let mut report = json!({"covering": v});
    if let Some(q) = over {
        let w = q.check_covering();
        ok &= w.covering;
        let f = GraphMap::factor(p, q).within("--over")?;
        ok &= f.is_some();
        report["over"] = json!({
            "covering": w,
            "factor": f.as_ref().map(|m| &m.map),
            "factor_is_covering": f.as_ref().map(|m| m.check_covering().covering),
        });
    }
    report["ok"] = json!(ok);
    Ok(Outcome { report, ok })
}

pub fn run(args: &Args, ctx: &Ctx) -> CliResult<Outcome> {
    exactly_one(
        "check-cover",
        &[
            ("quadruple", args.quadruple.is_some()),
            ("nonunital", args.nonunital.is_some()),
            ("graph", args.graph.is_some()),
            ("example", args.example.is_some()),
        ],
    )?;
    if let Some(e) = &args.example {
        return match e.as_str() {
            "swap" => quadruple(&CoveringQuadruple::cyclic_swap(2, 2).within(e)?, &[], args.sample, ctx),
            "hexagon" => graphs(&GraphMap::cycle_wrap(3, 2), None),
            "tower" => {
                let twelve_over_three = GraphMap::cycle_wrap(3, 4);
                let six_over_three = GraphMap::cycle_wrap(3, 2);
                graphs(&twelve_over_three, Some(&six_over_three))
            }
            _ => Err(Failure::structural(e, "unknown example; use swap, hexagon or tower")),
        };
    }
    if let Some(a) = &args.quadruple {
        let (src, doc): (_, QuadrupleDoc<G>) = load(a)?;
        let q = CoveringQuadruple::from_doc(doc).within(&src)?;
        return quadruple(&q, &args.corner, args.sample, ctx);
    }
    if let Some(a) = &args.nonunital {
        let (src, doc): (_, NonunitalDoc<G>) = load(a)?;
        let d = NonunitalData::from_doc(doc).within(&src)?;
        let v = d.check();
        let ok = v.ok;
        return Ok(Outcome::new(v, ok));
    }
    let (_, p): (_, GraphMap) = load(args.graph.as_deref().expect("selected"))?;
    let over = match &args.over {
        Some(o) => Some(load::<GraphMap>(o)?.1),
        None => None,
    };
    if let Some(q) = &over {
        if q.target != p.target {
            return Err(Failure::structural("--over", "both maps must have the same target graph"));
        }
    }
    graphs(&p, over.as_ref())
}
