use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use equistark::fixture::{canonical_json, Fixture};
use equistark::report::{coefficient_map, format_element};
use equistark::stickelberger::{self, sku_ideal, theta};
use equistark::{suite, ExtensionDatum, LValueProvider, PlaceSet, Report};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "equistark",
    version,
    about = "Stickelberger elements, Sinnott-Kurihara ideals and Fitting ideals of abelian CM fields"
)]
struct Cli {
    /// Emit machine-readable canonical JSON.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = "EQUISTARK_JOBS", default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Conductor f of the ambient cyclotomic field.
    #[arg(long)]
    conductor: u64,

    /// Generators of H in (Z/f)^x, comma separated, or "trivial".
    #[arg(long, default_value = "trivial", value_parser = parse_subgroup)]
    subgroup: Generators,
}

impl FieldArgs {
    fn extension(&self) -> equistark::Result<ExtensionDatum> {
        ExtensionDatum::from_conductor(self.conductor, &self.subgroup.0)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the Stickelberger element for S and T.
    Theta {
        #[command(flatten)]
        field: FieldArgs,
        /// Places in S, e.g. "inf,2".
        #[arg(long = "S", default_value = "inf")]
        s: PlaceSet,
        /// Places in T, e.g. "5".
        #[arg(long = "T", default_value = "")]
        t: PlaceSet,
    },
    /// Check p-integrality of the Stickelberger element.
    Integrality {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long = "S", default_value = "inf")]
        s: PlaceSet,
        #[arg(long = "T", default_value = "")]
        t: PlaceSet,
        #[arg(long)]
        p: u64,
    },
    /// Print a basis of the Sinnott-Kurihara ideal in the minus quotient.
    Sku {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        t0: u64,
    },
    /// Containment pipeline at p.
    VerifyEtnc {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        p: u64,
        /// Defaults to the least prime not dividing f w_L p.
        #[arg(long)]
        t0: Option<u64>,
    },
    /// Fitting ideal, class-number index and ray sequence checks on a fixture.
    VerifyDk {
        #[arg(long)]
        fixture: PathBuf,
    },
    /// Character-wise valuation comparison on a fixture.
    VerifyStrongStark {
        #[arg(long)]
        fixture: PathBuf,
    },
    /// Run every property suite on the built-in corpus and fixtures.
    Selftest {
        #[arg(long, default_value_t = equistark::corpus::DEFAULT_SEED)]
        seed: u64,
        /// Random presentations per Fitting law and group.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Clone)]
struct Generators(Vec<u64>);

fn parse_subgroup(s: &str) -> Result<Generators, String> {
    let s = s.trim();
    if s.is_empty() || s == "trivial" {
        return Ok(Generators(Vec::new()));
    }
    s.split(',')
        .map(|x| x.trim().parse::<u64>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<_, _>>()
        .map(Generators)
}

enum Output {
    Report(Report),
    Value {
        text: String,
        json: serde_json::Value,
    },
}

fn run(command: Command) -> equistark::Result<Output> {
    Ok(match command {
        Command::Theta { field, s, t } => {
            let ext = field.extension()?;
            let th = theta(&ext, &s, &t, &LValueProvider::Dirichlet)?;
            Output::Value {
                text: format_element(&ext, &th),
                json: json!({
                    "field": ext.id(),
                    "S": s.to_string(),
                    "T": t.to_string(),
                    "theta": format_element(&ext, &th),
                    "coefficients": coefficient_map(&ext, &th),
                }),
            }
        }
        Command::Integrality { field, s, t, p } => {
            let ext = field.extension()?;
            Output::Report(Report::new(vec![suite::integrality(&ext, &s, &t, p)?]))
        }
        Command::Sku { field, t0 } => {
            let ext = field.extension()?;
            let t0 = PlaceSet::finite([t0]);
            let ideal = sku_ideal(&ext, &t0)?;
            let basis: Vec<String> = ideal
                .basis_elements()
                .iter()
                .map(|x| format_element(&ext, x))
                .collect();
            let generators: Vec<String> = stickelberger::sku_generators(&ext, &t0)?
                .iter()
                .map(|x| format_element(&ext, x))
                .collect();
            let mut text = format!(
                "generators:\n  {}\nbasis modulo 1 + j:\n",
                generators.join("\n  ")
            );
            for b in &basis {
                text.push_str(&format!("  {b}\n"));
            }
            text.push_str(&format!("index in Z[G]/(1+j): {}", ideal.covolume()));
            Output::Value {
                text,
                json: json!({
                    "field": ext.id(),
                    "T0": t0.to_string(),
                    "generators": generators,
                    "basis": basis,
                    "index": ideal.covolume().to_string(),
                }),
            }
        }
        Command::VerifyEtnc { field, p, t0 } => {
            let ext = field.extension()?;
            Output::Report(Report::new(suite::etnc(&ext, p, t0)?))
        }
        Command::VerifyDk { fixture } => {
            let fx = Fixture::load(&fixture)?;
            Output::Report(Report::new(suite::fixture_modules(&fx)?))
        }
        Command::VerifyStrongStark { fixture } => {
            let fx = Fixture::load(&fixture)?;
            Output::Report(Report::new(suite::strong_stark(&fx)?))
        }
        Command::Selftest { seed, samples } => {
            Output::Report(Report::new(suite::selftest(seed, samples)?))
        }
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global()
        {
            log::warn!("could not size the thread pool: {e}");
        }
    }
    match run(cli.command) {
        Ok(Output::Report(report)) => {
            if cli.json {
                println!("{}", report.to_canonical_json());
            } else {
                println!("{report}");
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Ok(Output::Value { text, json }) => {
            if cli.json {
                println!("{}", canonical_json(&json));
            } else {
                println!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
