//! `symsum`: minimality of symplectic sums from descriptor files.
//!
//! Exit codes: 0 knef / minimal / clean, 1 not knef / not minimal,
//! 2 invalid input, 3 internal inconsistency (including certificate and
//! oracle disagreement), 4 conditional verdict left unresolved.

mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use symsum::descriptor::{load_manifold, load_sum};
use symsum::geography::{
    building_block, building_blocks, enumerate_region, s11_chain, verify_chain, BlockName, Carry, ChainLeft, ChainStage,
};
use symsum::knef::{agrees, is_rationally_knef, knef_oracle, KnefVerdict};
use symsum::stress::{light_cone_scan, n1_scan, possquare_scan};
use symsum::sum::{decide_minimality, enumerate_can_splittings, MinimalityVerdict};
use symsum::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;
pub const EXIT_CONDITIONAL: u8 = 4;

#[derive(Parser)]
#[command(name = "symsum", version, about = "Decide minimality of symplectic sums over integral lattices")]
struct Cli {
    /// Degree bound for enumerating exceptional classes.
    #[arg(long, global = true, default_value_t = 6, value_parser = clap::value_parser!(i64).range(1..))]
    degree_bound: i64,
    /// Coefficient box for oracle and splitting searches.
    #[arg(long, global = true, default_value_t = 10, value_parser = clap::value_parser!(i64).range(1..))]
    coeff_bound: i64,
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized scans.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Lattice, canonical class, Chern numbers and surface genera.
    Invariants { manifold: PathBuf },
    /// Certify that a surface is rationally K-nef.
    Knef {
        manifold: PathBuf,
        surface: String,
        /// Cross-check against the exhaustive oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Decide minimality of a sum.
    Sum {
        sum: PathBuf,
        /// Also enumerate splittings of exceptional classes.
        #[arg(long)]
        splittings: bool,
    },
    #[command(subcommand)]
    /// Building blocks, the realizable region and fiber-sum chains
    Geography(Geography),
    #[command(subcommand)]
    /// Exhaustive and seeded checks of the lattice lemmas
    Stress(Stress),
}

#[derive(Subcommand)]
enum Geography {
    /// Verify the building blocks.
    Blocks {
        /// Only these blocks (M_G, P1, P2, Q1, Q2, S11, CP2_8).
        names: Vec<String>,
    },
    /// Realizable (c1², c2) pairs in a box.
    Region(RegionArgs),
    /// Iterated sums: `s11`, or block names summed along their surfaces.
    Chain {
        #[arg(required = true)]
        blocks: Vec<String>,
        /// Asserted b1 of every intermediate sum.
        #[arg(long, default_value_t = 0)]
        b1: u32,
    },
}

#[derive(Args)]
struct RegionArgs {
    /// c1² range `LO:HI`.
    #[arg(long, value_parser = parse_range)]
    a: (i64, i64),
    /// c2 range `LO:HI`.
    #[arg(long, value_parser = parse_range)]
    b: (i64, i64),
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(i64).range(0..))]
    r: i64,
}

#[derive(Subcommand)]
enum Stress {
    /// Exhaustive scan of the positive-square lemma on Rational(n).
    Possquare {
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        n: Vec<usize>,
    },
    /// The n = 1 integer step over [0, max]².
    Integer {
        #[arg(long, default_value_t = 100)]
        max: i64,
    },
    /// Seeded light-cone pairs in type (1, n) lattices.
    LightCone {
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 10)]
        max_n: usize,
        #[arg(long, default_value_t = 20)]
        range: i64,
    },
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected LO:HI, got {s:?}"))?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("{lo:?}: {e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("{hi:?}: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}:{hi}"));
    }
    Ok((lo, hi))
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Internal(_) => EXIT_INTERNAL,
        _ => EXIT_INPUT,
    }
}

struct Out {
    format: Format,
}

impl Out {
    fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) {
        match self.format {
            Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("report serializes")),
            Format::Text => print!("{}", text()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("symsum: cannot start {j} workers: {e}");
            return ExitCode::from(EXIT_INTERNAL);
        }
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("symsum: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}

fn run(cli: &Cli) -> symsum::Result<u8> {
    let out = Out { format: cli.format };
    match &cli.command {
        Command::Invariants { manifold } => {
            let d = load_manifold(manifold)?;
            let report = render::InvariantsReport::new(&d)?;
            out.emit(&report, || report.text());
            Ok(EXIT_OK)
        }
        Command::Knef {
            manifold,
            surface,
            oracle,
        } => {
            let d = load_manifold(manifold)?;
            let f = d.surface(surface)?;
            let cert = is_rationally_knef(&d.model, f, cli.degree_bound)?;
            let oracle = if *oracle {
                Some(knef_oracle(&d.model, f, cli.coeff_bound)?)
            } else {
                None
            };
            let agreement = oracle.as_ref().map(|o| agrees(&cert, o));
            let report = render::KnefReport {
                certificate: cert,
                oracle,
                agreement,
            };
            out.emit(&report, || report.text());
            Ok(match (report.agreement, report.certificate.verdict) {
                (Some(false), _) => {
                    eprintln!("symsum: certificate and oracle disagree");
                    EXIT_INTERNAL
                }
                (_, KnefVerdict::Knef) => EXIT_OK,
                _ => EXIT_NEGATIVE,
            })
        }
        Command::Sum { sum, splittings } => {
            let s = load_sum(sum)?;
            let decision = decide_minimality(&s, cli.degree_bound)?;
            let splittings = if *splittings {
                Some(enumerate_can_splittings(&s, cli.coeff_bound)?)
            } else {
                None
            };
            let report = render::SumReport {
                side1: format!("{} along {}", s.side1.model.name(), s.side1.surface.name),
                side2: format!("{} along {}", s.side2.model.name(), s.side2.surface.name),
                decision,
                splittings,
                coeff_bound: cli.coeff_bound,
            };
            out.emit(&report, || report.text());
            Ok(match &report.decision.verdict {
                MinimalityVerdict::MinimalCaseIII => EXIT_OK,
                MinimalityVerdict::NotMinimalCaseI { .. } => EXIT_NEGATIVE,
                MinimalityVerdict::ConditionalCaseII { resolution, .. } => match resolution {
                    Some(true) => EXIT_OK,
                    Some(false) => EXIT_NEGATIVE,
                    None => EXIT_CONDITIONAL,
                },
            })
        }
        Command::Geography(g) => geography(g, cli, &out),
        Command::Stress(s) => stress(s, cli, &out),
    }
}

fn block_name(s: &str) -> symsum::Result<BlockName> {
    BlockName::ALL
        .into_iter()
        .find(|b| b.as_str().eq_ignore_ascii_case(s))
        .ok_or_else(|| Error::InvalidModel(format!("unknown building block {s:?}")))
}

fn geography(g: &Geography, cli: &Cli, out: &Out) -> symsum::Result<u8> {
    match g {
        Geography::Blocks { names } => {
            let blocks = if names.is_empty() {
                building_blocks(cli.degree_bound)?
            } else {
                names
                    .iter()
                    .map(|n| building_block(block_name(n)?, cli.degree_bound))
                    .collect::<symsum::Result<Vec<_>>>()?
            };
            out.emit(&blocks, || render::blocks_text(&blocks));
            Ok(EXIT_OK)
        }
        Geography::Region(r) => {
            let points = enumerate_region(r.a.0..=r.a.1, r.b.0..=r.b.1, r.r);
            let report = render::RegionReport {
                a: r.a,
                b: r.b,
                r: r.r,
                count: points.len(),
                points,
            };
            out.emit(&report, || report.text());
            Ok(EXIT_OK)
        }
        Geography::Chain { blocks, b1 } => {
            let stages = if blocks.len() == 1 && blocks[0].eq_ignore_ascii_case("s11") {
                s11_chain()?
            } else {
                if blocks.len() < 2 {
                    return Err(Error::InvalidSum(vec!["a chain needs at least two blocks".into()]));
                }
                let mut sides = Vec::new();
                for n in blocks {
                    let b = building_block(block_name(n)?, cli.degree_bound)?;
                    sides.push(b.side().ok_or_else(|| {
                        Error::Unsupported(format!("{} has no recorded gluing surface", b.name))
                    })?);
                }
                let mut stages = vec![ChainStage {
                    left: ChainLeft::Given(sides[0].clone()),
                    right: sides[1].clone(),
                }];
                for s in &sides[2..] {
                    stages.push(ChainStage {
                        left: ChainLeft::Carried {
                            carry: Carry::ParallelCopy { b1: *b1 },
                            blowups: 0,
                        },
                        right: s.clone(),
                    });
                }
                stages
            };
            let report = verify_chain(&stages, cli.degree_bound)?;
            out.emit(&report, || render::chain_text(&report));
            Ok(match report.minimal {
                Some(true) => EXIT_OK,
                Some(false) => EXIT_NEGATIVE,
                None => EXIT_CONDITIONAL,
            })
        }
    }
}

fn stress(s: &Stress, cli: &Cli, out: &Out) -> symsum::Result<u8> {
    let clean = match s {
        Stress::Possquare { n } => {
            let scans = n
                .iter()
                .map(|&n| possquare_scan(n, cli.coeff_bound, cli.degree_bound))
                .collect::<symsum::Result<Vec<_>>>()?;
            out.emit(&scans, || render::possquare_text(&scans));
            scans.iter().all(|s| s.counterexamples.is_empty())
        }
        Stress::Integer { max } => {
            let scan = n1_scan(*max);
            out.emit(&scan, || {
                format!(
                    "integer step over [0, {}]²: {} pairs satisfy the hypothesis, {} counterexamples\n",
                    scan.max,
                    scan.hypothesis_pairs,
                    scan.counterexamples.len()
                )
            });
            scan.counterexamples.is_empty()
        }
        Stress::LightCone { samples, max_n, range } => {
            let scan = light_cone_scan(cli.seed, *samples, *max_n, *range)?;
            out.emit(&scan, || {
                format!(
                    "light cone: {} seeded pairs (seed {}, n <= {}, |coeff| <= {}), {} violations\n",
                    scan.samples,
                    scan.seed,
                    scan.max_n,
                    scan.coeff_bound,
                    scan.violations.len()
                )
            });
            scan.violations.is_empty()
        }
    };
    Ok(if clean { EXIT_OK } else { EXIT_INTERNAL })
}
