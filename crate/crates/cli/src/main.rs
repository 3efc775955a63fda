mod text;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::{debug, info};
use serde::Serialize;
use serde_json::{json, Value};

use valdiv::corpus::{profile_of, run_example, witness_records};
use valdiv::fields::prime_factors;
use valdiv::parse::{parse_algebra, parse_profile};
use valdiv::profile::FieldProfile;
use valdiv::selftest::{selftest, SelftestOptions, DEFAULT_SIZE};
use valdiv::sk1::{compute_zeta, verdict, AlgebraFacts};
use valdiv::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "valdiv", version, about = "Valued division algebras over iterated Laurent series fields")]
struct Cli {
    /// Relative precision, in terms per variable.
    #[arg(long, global = true, default_value_t = 32)]
    precision: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// q-rank and cohomological dimension of a field profile.
    Cd {
        profile: String,
        /// Primes to report; defaults to 2, 3, 5 and 7.
        #[arg(long = "q")]
        q: Vec<u64>,
        /// Known value `Q=N` of cd_Q, checked against the computed bound.
        #[arg(long = "assert-cd", value_parser = parse_assertion)]
        assert_cd: Vec<(u64, u32)>,
    },
    /// Value group, residue data and ramification class of a symbol algebra.
    Classify {
        #[arg(long)]
        algebra: String,
    },
    /// Commutator decompositions of random norm-one elements.
    #[command(name = "sk1-witness")]
    Sk1Witness {
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
    /// Whether the triviality criteria for SK1 apply.
    Verdict {
        /// Field profile; defaults to the one the algebra is written over.
        #[arg(long)]
        profile: Option<String>,
        #[arg(long)]
        algebra: String,
        /// Prime to test; defaults to the smallest prime factor of the degree.
        #[arg(long = "q")]
        q: Option<u64>,
        #[arg(long = "assert-cd", value_parser = parse_assertion)]
        assert_cd: Vec<(u64, u32)>,
    },
    /// End-to-end report for one of the worked examples.
    Example {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        n: u8,
    },
    /// Randomized property suites.
    Selftest {
        /// Cases per suite.
        #[arg(long, default_value_t = DEFAULT_SIZE)]
        size: usize,
        /// Break the commutation relation first; the suites should fail.
        #[arg(long, hide = true)]
        mutant: bool,
    },
}

fn parse_assertion(s: &str) -> Result<(u64, u32), String> {
    let (q, n) = s.split_once('=').ok_or("expected Q=N")?;
    Ok((q.trim().parse().map_err(|e| format!("{e}"))?, n.trim().parse().map_err(|e| format!("{e}"))?))
}

enum Failure {
    Input(Error),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::InvalidInput(_)
            | Error::NotPrime(_)
            | Error::Unsupported(_)
            | Error::Inconsistent(_)
            | Error::NoRootOfUnity(_)
            | Error::CharacteristicTwo
            | Error::DivisionByZero => Failure::Input(e),
            other => Failure::Compute(other),
        }
    }
}

struct Output {
    json: Value,
    text: String,
    ok: bool,
}

fn envelope<T: Serialize>(command: &str, body: &T) -> Value {
    let mut v = json!({ "schema": 1, "command": command });
    let extra = serde_json::to_value(body).expect("reports serialize");
    match extra {
        Value::Object(map) => v.as_object_mut().unwrap().extend(map),
        other => {
            v["result"] = other;
        }
    }
    v
}

fn with_assertions(profile: FieldProfile, assertions: &[(u64, u32)]) -> Result<FieldProfile, Error> {
    assertions.iter().try_fold(profile, |p, &(q, n)| p.with_asserted_cd(q, n))
}

fn cd_command(text: &str, qs: &[u64], assertions: &[(u64, u32)]) -> Result<Output, Failure> {
    let profile = with_assertions(parse_profile(text)?, assertions)?;
    let qs = if qs.is_empty() { vec![2, 3, 5, 7] } else { qs.to_vec() };
    let mut rows = Vec::new();
    for &q in &qs {
        let r_q = profile.r_q(q)?;
        let row = match profile.cd_q(q) {
            Ok(c) => json!({ "q": q, "r_q": r_q, "cd_q": c.to_string() }),
            Err(e @ Error::NotPrime(_)) => return Err(e.into()),
            Err(e) => json!({ "q": q, "r_q": r_q, "cd_q": null, "note": e.to_string() }),
        };
        rows.push(row);
    }
    let body = json!({
        "profile": profile.to_string(),
        "layers": profile.height(),
        "residue_characteristic": profile.residue_characteristic(),
        "primes": rows,
    });
    Ok(Output { text: text::cd(&body), json: envelope("cd", &body), ok: true })
}

fn classify_command(desc: &str, precision: usize) -> Result<Output, Failure> {
    let alg = parse_algebra(desc)?.build(precision)?;
    alg.check_representation()?;
    let report = alg.classify()?;
    let diagram = compute_zeta(&report);
    let body = json!({
        "algebra": alg.to_string(),
        "class": report.class_name(),
        "report": report,
        "diagram": diagram,
    });
    Ok(Output { text: text::classify(&body), json: envelope("classify", &body), ok: true })
}

fn witness_command(desc: &str, count: usize, seed: u64, precision: usize) -> Result<Output, Failure> {
    let alg = parse_algebra(desc)?.build(precision)?;
    let records = witness_records(&alg, count, seed)?;
    let ok = records.iter().all(|r| r.verified);
    let body = json!({ "algebra": alg.to_string(), "seed": seed, "witnesses": records });
    Ok(Output { text: text::witnesses(&body), json: envelope("sk1-witness", &body), ok })
}

fn verdict_command(
    profile: Option<&str>,
    desc: &str,
    q: Option<u64>,
    assertions: &[(u64, u32)],
    precision: usize,
) -> Result<Output, Failure> {
    let spec = parse_algebra(desc)?;
    let (facts, own) = match spec.build(precision) {
        Ok(alg) => (AlgebraFacts::from(&alg.classify()?), profile_of(&alg)),
        Err(Error::Unsupported(why)) => {
            info!("no arithmetic for {desc}: {why}; using the degree alone");
            let mut facts = AlgebraFacts::degree_only(spec.n as u64);
            facts.value_rank = Some(spec.over.height());
            (facts, spec.over.clone())
        }
        Err(e) => return Err(e.into()),
    };
    let profile = match profile {
        Some(p) => parse_profile(p)?,
        None => own,
    };
    let profile = with_assertions(profile, assertions)?;
    let q = match q {
        Some(q) => q,
        None => *prime_factors(facts.degree)
            .first()
            .ok_or_else(|| Error::InvalidInput("degree 1 has no prime factor; pass --q".into()))?,
    };
    debug!("verdict for q = {q} over {profile}");
    let v = verdict(&profile, &facts, q)?;
    let body = json!({ "profile": profile.to_string(), "algebra": spec.to_string(), "facts": facts, "verdict": v });
    Ok(Output { text: text::verdict(&body), json: envelope("verdict", &body), ok: true })
}

fn example_command(n: u8, seed: u64, precision: usize) -> Result<Output, Failure> {
    let report = run_example(n, seed, precision)?;
    let ok = report.all_verified();
    let body = serde_json::to_value(&report).expect("reports serialize");
    Ok(Output { text: text::example(&body), json: envelope("example", &body), ok })
}

fn selftest_command(seed: u64, size: usize, mutant: bool, precision: usize) -> Result<Output, Failure> {
    let summary = selftest(&SelftestOptions { seed, size, precision, mutant })?;
    Ok(Output { text: summary.to_string(), json: envelope("selftest", &summary), ok: summary.passed })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    if cli.precision == 0 {
        return Err(Failure::Input(Error::InvalidInput("precision must be positive".into())));
    }
    let (seed, precision) = (cli.seed, cli.precision);
    match &cli.command {
        Command::Cd { profile, q, assert_cd } => cd_command(profile, q, assert_cd),
        Command::Classify { algebra } => classify_command(algebra, precision),
        Command::Sk1Witness { algebra, count } => witness_command(algebra, *count, seed, precision),
        Command::Verdict { profile, algebra, q, assert_cd } => {
            verdict_command(profile.as_deref(), algebra, *q, assert_cd, precision)
        }
        Command::Example { n } => example_command(*n, seed, precision),
        Command::Selftest { size, mutant } => selftest_command(seed, *size, *mutant, precision),
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("json")),
                Format::Text => println!("{}", out.text),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("computation failed: {e}");
            ExitCode::from(1)
        }
    }
}
