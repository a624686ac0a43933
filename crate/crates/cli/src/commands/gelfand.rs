use gelfkit_core::algebra::BlockAlgebra;
use gelfkit_core::gelfand::{
    belongs_to, bicommutant_map, commutative_topology, gelfand_points, is_good, sample_points, MorphismData, MorphismDoc,
};
use gelfkit_core::space::FiniteSpaceDoc;
use serde_json::json;

use super::{load_points, to_value, Ctx, Outcome, G};
use crate::io::{load, CliResult, Context, Failure};

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Block algebra document.
    #[arg(long)]
    algebra: Option<String>,
    /// Point document `{"block":i,"line":[..]}` or `{"point":name}`; repeatable.
    #[arg(long)]
    point: Vec<String>,
    /// Number of random points to add.
    #[arg(long, default_value_t = 0)]
    sample: usize,
    /// Morphism document; its good-morphism check decides the exit code.
    #[arg(long)]
    morphism: Option<String>,
}

pub fn run(args: &Args, ctx: &Ctx) -> CliResult<Outcome> {
    let morphism = match &args.morphism {
        Some(m) => {
            let (src, doc): (_, MorphismDoc<G>) = load(m)?;
            Some(MorphismData::from_doc(doc).within(&src)?)
        }
        None => None,
    };
    let (src, alg) = match (&args.algebra, &morphism) {
        (Some(a), _) => load::<BlockAlgebra>(a)?,
        (None, Some(m)) => ("morphism target".to_string(), m.target.clone()),
        (None, None) => return Err(Failure::structural("gelfand", "give --algebra or --morphism")),
    };
    let mut rng = ctx.rng();
    let mut points = load_points(&alg, &args.point)?;
    points.extend(sample_points::<G>(&alg, args.sample, &mut rng));

    let bic = bicommutant_map(&alg, &points);
    let mut rows = Vec::new();
    for (p, b) in &bic.entries {
        rows.push(json!({
            "point": p.to_doc(&alg),
            "belongs_to": belongs_to(&alg, p).within(&src)?,
            "bicommutant": b,
        }));
    }
    let mut report = json!({
        "algebra": alg,
        "space": gelfand_points(&alg),
        "points": rows,
        "bicommutant_injective": bic.injective,
    });
    if alg.is_commutative() && alg.nblocks() <= 16 {
        let top = commutative_topology::<G>(&alg).within(&src)?;
        report["topology"] = to_value(FiniteSpaceDoc::from(top));
    }
    let mut ok = true;
    if let Some(m) = morphism {
        let count = if args.sample == 0 { 10 } else { args.sample };
        let sample = sample_points::<G>(&m.target, count, &mut rng);
        let good = is_good(&m, &sample).within("morphism")?;
        ok = good.good;
        let map: Vec<_> = good
            .point_map
            .iter()
            .map(|(p, q)| json!({"point": p.to_doc(&m.target), "image": q.as_ref().map(|q| q.to_doc(&m.source))}))
            .collect();
        report["morphism"] = json!({
            "good": good.good,
            "failures": good.failures,
            "unital": m.is_unital(),
            "injective": m.is_injective(),
            "nondegenerate": m.is_nondegenerate(),
            "point_map": map,
        });
    }
    Ok(Outcome { report, ok })
}
