use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use siegel::cli::{self, Config, Outcome};

#[derive(Parser)]
#[command(name = "siegel", version, about = "Fourier expansions of Siegel modular forms of weight Sym^6 x det^k")]
struct Args {
    /// Doubled-trace precision bound.
    #[arg(long, global = true)]
    tmax: Option<i64>,
    #[arg(long, global = true, env = cli::ENV_CACHE)]
    cache: Option<PathBuf>,
    #[arg(long, global = true, env = cli::ENV_THREADS, default_value_t = 1)]
    threads: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Also write the report here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Expand phi4, phi6, chi10, chi12 or chi5 and cache the result.
    Classical { form: String },
    /// Build F11, ..., F23 and compare the coefficient table.
    Generators,
    /// Characteristic polynomial of T(p) on M_(j,k).
    Hecke {
        p: u64,
        j: u32,
        k: i64,
        #[arg(long)]
        charpoly: bool,
    },
    /// Dimensions of M_(6,k) up to kmax.
    Dims { parity: String, kmax: i64 },
    /// The chi140 coefficient at n = (a,b,c).
    VerifyTheorem {
        #[arg(default_value = "12,8,4", allow_hyphen_values = true)]
        index: String,
    },
    /// Basis of RC polynomials of weight (j, ell) and the given type.
    RcSpace {
        j: u32,
        ell: i64,
        /// Comma-separated weights, e.g. 4,6.
        #[arg(allow_hyphen_values = true)]
        types: String,
    },
}

fn ints(s: &str) -> Result<Vec<i64>, String> {
    s.split(',').map(|t| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}"))).collect()
}

fn run(args: Args) -> Result<Outcome, String> {
    let cfg = Config { cache_dir: args.cache, threads: args.threads.max(1), seed: args.seed, tmax: args.tmax };
    cfg.install();
    let e = |e: siegel::error::Error| e.to_string();
    match args.cmd {
        Cmd::Classical { form } => cli::cmd_classical(&form, cfg.tmax.unwrap_or(8), &cfg).map_err(e),
        Cmd::Generators => cli::cmd_generators(cfg.tmax.unwrap_or(10), &cfg).map_err(e),
        Cmd::Hecke { p, j, k, charpoly } => cli::cmd_hecke(p, j, k, charpoly, cfg.tmax).map_err(e),
        Cmd::Dims { parity, kmax } => cli::cmd_dims(&parity, kmax).map_err(e),
        Cmd::VerifyTheorem { index } => {
            let v = ints(&index)?;
            let n: [i64; 3] = v.try_into().map_err(|_| "index needs three entries".to_string())?;
            cli::cmd_verify(n, &cfg).map_err(e)
        }
        Cmd::RcSpace { j, ell, types } => cli::cmd_rc_space(j, ell, &ints(&types)?).map_err(e),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let out_path = args.out.clone();
    match run(args) {
        Ok(o) => {
            print!("{}", o.text);
            if let Some(p) = out_path {
                if let Err(err) = cli::write_atomic(&p, &o.text) {
                    eprintln!("error: {err}");
                    return ExitCode::FAILURE;
                }
            }
            if o.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
