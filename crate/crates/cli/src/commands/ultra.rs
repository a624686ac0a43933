use gelfkit_core::algebra::lattice::PresentedLattice;
use gelfkit_core::algebra::BlockAlgebra;
use gelfkit_core::gelfand::PointDoc;
use gelfkit_core::order::{FilterOutcome, FilterRep, SemiLattice, DEFAULT_FILTER_BOUND};
use gelfkit_core::space::FiniteSpace;
use serde::Deserialize;
use serde_json::{json, Value};

use super::{exactly_one, Ctx, Outcome, G};
use crate::io::{load, CliResult, Context, Failure};

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Semilattice document `{elements, leq, zero}`.
    #[arg(long)]
    lattice: Option<String>,
    /// Finite space; its open lattice is used.
    #[arg(long)]
    space: Option<String>,
    /// Block algebra; the ideal lattice presented by `--generators`, or all
    /// ideals of a commutative algebra.
    #[arg(long)]
    algebra: Option<String>,
    /// List of point documents whose minimal ideals generate the lattice.
    #[arg(long, requires = "algebra")]
    generators: Option<String>,
    /// Filter generators, a list of element indices or names; repeatable.
    #[arg(long)]
    filter: Vec<String>,
    /// Bound on candidate filters examined.
    #[arg(long, default_value_t = DEFAULT_FILTER_BOUND)]
    bound: usize,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ElementRef {
    Index(usize),
    Name(String),
}

enum Source {
    Plain,
    Space(FiniteSpace),
    Algebra(Box<PresentedLattice<G>>),
}

fn resolve(l: &SemiLattice, src: &str, refs: Vec<ElementRef>) -> CliResult<Vec<usize>> {
    refs.into_iter()
        .enumerate()
        .map(|(k, r)| match r {
            ElementRef::Index(i) if i < l.len() => Ok(i),
            ElementRef::Index(i) => Err(Failure { path: format!("[{k}]"), ..Failure::structural(src, format!("element {i} out of range")) }),
            ElementRef::Name(n) => l
                .names()
                .iter()
                .position(|m| *m == n)
                .ok_or_else(|| Failure { path: format!("[{k}]"), ..Failure::structural(src, format!("unknown element {n:?}")) }),
        })
        .collect()
}

fn names(l: &SemiLattice, f: &FilterRep) -> Vec<String> {
    f.members.iter().map(|&i| l.names()[i].clone()).collect()
}

pub fn run(args: &Args, _ctx: &Ctx) -> CliResult<Outcome> {
    exactly_one(
        "ultra",
        &[("lattice", args.lattice.is_some()), ("space", args.space.is_some()), ("algebra", args.algebra.is_some())],
    )?;
    let (src, lattice, source) = if let Some(a) = &args.lattice {
        let (src, l): (_, SemiLattice) = load(a)?;
        (src, l, Source::Plain)
    } else if let Some(a) = &args.space {
        let (src, x): (_, FiniteSpace) = load(a)?;
        (src, x.open_lattice(), Source::Space(x))
    } else {
        let (src, alg): (_, BlockAlgebra) = load(args.algebra.as_deref().expect("selected"))?;
        let p = match &args.generators {
            Some(g) => {
                let (gsrc, docs): (_, Vec<PointDoc<G>>) = load(g)?;
                let mut gens = Vec::with_capacity(docs.len());
                for d in docs {
                    let pt = gelfkit_core::gelfand::UltrafilterPoint::from_doc(&alg, d).within(&gsrc)?;
                    gens.push((pt.block, pt.line));
                }
                PresentedLattice::from_generators(&alg, &gens).within(&gsrc)?
            }
            None => PresentedLattice::all_commutative(&alg).within(&src)?,
        };
        (src, p.lattice.clone(), Source::Algebra(Box::new(p)))
    };

    let ultras = lattice.enumerate_ultrafilters(args.bound).within(&src)?;
    let mut rows = Vec::new();
    for u in &ultras {
        let mut row = json!({
            "members": names(&lattice, u),
            "principal": lattice.is_principal(u).map(|m| lattice.names()[m].clone()),
        });
        match &source {
            Source::Plain => {}
            Source::Space(x) => {
                let lim = x.ultrafilter_limits(u).within(&src)?;
                row["limits"] = json!(lim.iter().map(|&p| x.names()[p].clone()).collect::<Vec<_>>());
            }
            Source::Algebra(p) => {
                row["bicommutant"] = json!(p.filter_bicommutant(u).within(&src)?);
                row["nonvanishing_blocks"] = json!(p.nonvanishing_blocks(u));
            }
        }
        rows.push(row);
    }

    let mut queries = Vec::new();
    for f in &args.filter {
        let (fsrc, refs): (_, Vec<ElementRef>) = load(f)?;
        let gens = resolve(&lattice, &fsrc, refs)?;
        let gen_names: Vec<String> = gens.iter().map(|&i| lattice.names()[i].clone()).collect();
        let row = match lattice.generate_filter(&gens).within(&fsrc)? {
            FilterOutcome::Degenerate => json!({"generators": gen_names, "filter": Value::Null}),
            FilterOutcome::Filter(g) => {
                let ext = lattice.extend_to_ultrafilter(&g).within(&fsrc)?;
                json!({
                    "generators": gen_names,
                    "filter": names(&lattice, &g),
                    "ultrafilter": lattice.is_ultrafilter(&g).within(&fsrc)?,
                    "principal": lattice.is_principal(&g).map(|m| lattice.names()[m].clone()),
                    "extension": names(&lattice, &ext),
                })
            }
        };
        queries.push(row);
    }
    let mut report = json!({
        "elements": lattice.names(),
        "ultrafilters": rows,
    });
    if !queries.is_empty() {
        report["filters"] = Value::Array(queries);
    }
    Ok(Outcome { report, ok: true })
}
