mod commands;
mod io;

use clap::{Parser, Subcommand};
use gelfkit_core::cech::DEFAULT_CAP_DIM;

use crate::commands::Ctx;
use crate::io::{Format, EXIT_OK, EXIT_STRUCTURAL, EXIT_VERDICT};

/// Finite models of noncommutative topology: Gelfand spaces, sheaves, Čech
/// cohomology and coverings.
#[derive(Parser, Debug)]
#[command(name = "gelfkit", version)]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Seed for sampled points.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Maximal nerve dimension.
    #[arg(long, env = "GELFKIT_CAP_DIM", default_value_t = DEFAULT_CAP_DIM, global = true)]
    cap_dim: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Gelfand points, membership and bicommutants of a block algebra.
    Gelfand(commands::gelfand::Args),
    /// Čech cohomology of a cover.
    Cech(commands::cech::Args),
    /// Fundamental group presentation of a 2-complex.
    Pi1(commands::pi1::Args),
    /// Covering checks for algebra quadruples and graph maps.
    CheckCover(commands::cover::Args),
    /// Sheaf check and sheafification of a presheaf.
    Sheafify(commands::sheafify::Args),
    /// Hausdorff blowing-up over a finite space.
    Blowup(commands::blowup::Args),
    /// Filters and ultrafilters of a meet-semilattice.
    Ultra(commands::ultra::Args),
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_STRUCTURAL } else { EXIT_OK };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let ctx = Ctx { seed: cli.seed, cap: cli.cap_dim };
    let result = match &cli.command {
        Command::Gelfand(a) => commands::gelfand::run(a, &ctx),
        Command::Cech(a) => commands::cech::run(a, &ctx),
        Command::Pi1(a) => commands::pi1::run(a, &ctx),
        Command::CheckCover(a) => commands::cover::run(a, &ctx),
        Command::Sheafify(a) => commands::sheafify::run(a, &ctx),
        Command::Blowup(a) => commands::blowup::run(a, &ctx),
        Command::Ultra(a) => commands::ultra::run(a, &ctx),
    };
    let code = match result {
        Ok(out) => {
            io::emit(&out.report, cli.format);
            if out.ok {
                EXIT_OK
            } else {
                EXIT_VERDICT
            }
        }
        Err(f) => {
            f.emit(cli.format);
            EXIT_STRUCTURAL
        }
    };
    std::process::exit(code);
}
