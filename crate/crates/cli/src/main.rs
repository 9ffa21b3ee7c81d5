mod cache;
mod config;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use m1plus::commutator::{verify_commutator_families, FamilyOptions};
use m1plus::exact::int;
use m1plus::hvec::{
    default_grounds, realized_gap_check, spectral_gap_check, test_basis, verify_h_commutation,
    verify_mutual_commutation,
};
use m1plus::report::VerificationReport;
use m1plus::{ext, par, props, zhu};

use cache::{load_or_build, CacheStatus};
use config::Config;

#[derive(Parser, Debug)]
#[command(name = "m1plus", version, about = "Exact verification suites for the free boson orbifold M(1)^+")]
struct Cli {
    /// Flat key = value configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for JSON reports.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; 0 keeps the default.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Run every suite on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// H-vector cache maintenance.
    Hvec {
        #[command(subcommand)]
        command: HvecCommand,
    },
    /// Run verification suites and write their reports.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
}

#[derive(Subcommand, Debug)]
enum HvecCommand {
    /// Build H^{2r}, or load it from the cache and check it.
    Build {
        #[arg(long)]
        r: u32,
    },
}

#[derive(Args, Debug, Default)]
struct HcommArgs {
    /// A single r; all r up to the configured maximum otherwise.
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    range: Option<i64>,
    #[arg(long)]
    max_weight: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum Suite {
    Hcomm(HcommArgs),
    /// Zero-mode actions of omega, H4 and H6 on the five top levels.
    #[command(name = "tops", alias = "table1")]
    Tops,
    /// The commutator families, their zero-mode specializations and central terms.
    #[command(name = "commutators", alias = "appendix")]
    Commutators {
        #[arg(long)]
        range: Option<i64>,
        #[arg(long)]
        max_weight: Option<u32>,
    },
    Borcherds {
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    Zhu {
        #[arg(long)]
        cutoff: Option<u32>,
    },
    Idempotents {
        #[arg(long)]
        cutoff: Option<u32>,
        /// Cutoff for the direct `x*x - x` certificate.
        #[arg(long)]
        idempotent_cutoff: Option<u32>,
    },
    Lattice {
        #[arg(long)]
        k: Option<u32>,
    },
    Ext,
    /// Commuting zero modes `[H~2r(0), H~2s(0)] = 0`.
    Mutual,
    Gap {
        #[arg(long)]
        bound: Option<u32>,
    },
    All,
}

struct Runner {
    cfg: Config,
    all_passed: bool,
}

impl Runner {
    fn emit(&mut self, report: VerificationReport, started: Instant) -> Result<()> {
        std::fs::create_dir_all(&self.cfg.out_dir)
            .with_context(|| format!("creating {}", self.cfg.out_dir.display()))?;
        let path = self.cfg.out_dir.join(format!("{}.json", report.suite));
        std::fs::write(&path, report.to_json() + "\n").with_context(|| format!("writing {}", path.display()))?;
        println!("{}", report.summary());
        for c in report.failures().take(5) {
            println!("  FAIL {}: {}", c.id, c.detail.as_deref().unwrap_or(""));
        }
        eprintln!("{}: {:.2}s -> {}", report.suite, started.elapsed().as_secs_f64(), path.display());
        self.all_passed &= report.passed();
        Ok(())
    }

    fn hcomm(&mut self, args: &HcommArgs) -> Result<()> {
        let started = Instant::now();
        let cfg = &self.cfg;
        let rs: Vec<u32> = match args.r {
            Some(r) => vec![r],
            None => (1..=cfg.hcomm_r).collect(),
        };
        let range = args.range.unwrap_or(cfg.hcomm_range);
        let weight = args.max_weight.unwrap_or(cfg.max_weight);
        let states = test_basis(&default_grounds(&cfg.momenta), &int(weight as i64));
        let mut report = VerificationReport::new("hcomm")
            .param("r", serde_json::json!(rs))
            .param("range", range)
            .param("max_weight", weight)
            .param("states", states.len());
        for &r in &rs {
            load_or_build(&cfg.cache_dir, r)?;
            report.extend(verify_h_commutation(r, range, &states)?.cases);
        }
        self.emit(report.finalize(), started)
    }

    fn run(&mut self, suite: &Suite) -> Result<()> {
        let cfg = self.cfg.clone();
        let started = Instant::now();
        match suite {
            Suite::Hcomm(args) => self.hcomm(args)?,
            Suite::Tops => self.emit(zhu::verify_top_actions(&cfg.lambdas)?, started)?,
            Suite::Commutators { range, max_weight } => {
                let opts = FamilyOptions {
                    range: range.unwrap_or(cfg.commutator_range),
                    max_degree: max_weight.unwrap_or(cfg.commutator_max_weight),
                    ..FamilyOptions::default()
                };
                self.emit(verify_commutator_families(&opts)?, started)?;
            }
            Suite::Borcherds { samples, seed } => {
                let report = props::verify_borcherds(samples.unwrap_or(cfg.samples), seed.unwrap_or(cfg.seed))?;
                self.emit(report, started)?;
            }
            Suite::Zhu { cutoff } => {
                self.emit(zhu::verify_zhu_relations(cutoff.unwrap_or(cfg.zhu_cutoff), &cfg.lambdas)?, started)?;
            }
            Suite::Idempotents { cutoff, idempotent_cutoff } => {
                let report = zhu::verify_idempotents(
                    cutoff.unwrap_or(cfg.zhu_cutoff),
                    idempotent_cutoff.unwrap_or(cfg.idempotent_cutoff),
                    &cfg.lambdas,
                )?;
                self.emit(report, started)?;
            }
            Suite::Lattice { k } => {
                let ks = k.map(|k| vec![k]).unwrap_or_else(|| cfg.k.clone());
                for k in ks {
                    self.emit(zhu::verify_lattice(k)?, Instant::now())?;
                }
            }
            Suite::Ext => self.emit(ext::verify_extensions(&cfg.ext_c, cfg.ext_degree)?, started)?,
            Suite::Mutual => {
                let states = test_basis(&default_grounds(&cfg.momenta), &int(cfg.max_weight as i64));
                self.emit(verify_mutual_commutation(cfg.mutual_r, &states)?, started)?;
            }
            Suite::Gap { bound } => {
                self.emit(spectral_gap_check(bound.unwrap_or(cfg.gap_bound)), started)?;
                self.emit(realized_gap_check(cfg.max_weight)?, Instant::now())?;
            }
            Suite::All => {
                let suites = [
                    Suite::Hcomm(HcommArgs::default()),
                    Suite::Tops,
                    Suite::Commutators { range: None, max_weight: None },
                    Suite::Borcherds { samples: None, seed: None },
                    Suite::Zhu { cutoff: None },
                    Suite::Idempotents { cutoff: None, idempotent_cutoff: None },
                    Suite::Lattice { k: None },
                    Suite::Ext,
                    Suite::Mutual,
                    Suite::Gap { bound: None },
                ];
                for s in &suites {
                    self.run(s)?;
                }
            }
        }
        Ok(())
    }
}

fn hvec_build(cfg: &Config, r: u32) -> Result<()> {
    let (v, status) = load_or_build(&cfg.cache_dir, r)?;
    let path = cache::path_for(&cfg.cache_dir, r);
    match status {
        CacheStatus::Built => eprintln!("built H^{} -> {}", 2 * r, path.display()),
        CacheStatus::Hit => eprintln!("cache hit {} (rebuilt and identical)", path.display()),
    }
    println!("{}", v.serialize());
    Ok(())
}

fn real_main() -> Result<bool> {
    let cli = Cli::parse();
    let mut cfg = Config::load(cli.config.as_deref())?;
    if let Some(out) = cli.out {
        cfg.out_dir = out;
    }
    if let Some(w) = cli.workers {
        cfg.workers = w;
    }
    if cfg.workers > 0 {
        par::set_workers(cfg.workers);
    }
    if cli.sequential {
        par::set_parallel(false);
    }
    match cli.command {
        Command::Hvec { command: HvecCommand::Build { r } } => {
            hvec_build(&cfg, r)?;
            Ok(true)
        }
        Command::Verify { suite } => {
            let mut runner = Runner { cfg, all_passed: true };
            runner.run(&suite)?;
            Ok(runner.all_passed)
        }
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
