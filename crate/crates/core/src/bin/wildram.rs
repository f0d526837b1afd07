use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use wildram::coeff::{Coeff, Fp, Prime};
use wildram::error::Error;
use wildram::harness::{parse_series_spec, run_suite, ParsedSeries, SeriesSpec, SuiteParams, SCHEMA_VERSION};
use wildram::newton::{fixed_point_valuations, periodic_point_bound, weierstrass_degree, ValuedPoly};
use wildram::residue::{classify, index_report, pind_laurent, LambdaSet, SmallestIndex};
use wildram::series::Order;
use wildram::wild::{lower_ramification, normal_form, WildSeries};

#[derive(Parser)]
#[command(name = "wildram", version, about = "Residue indices and ramification of wild power series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print Λ(q, p), every pind_j, resit and the smallest nonvanishing j.
    Index {
        spec: PathBuf,
        /// Only report pind_j for this j.
        #[arg(long)]
        j: Option<usize>,
    },
    /// Lower ramification numbers i_0..i_{n_max} by direct iteration.
    Ramify {
        spec: PathBuf,
        #[arg(long)]
        n_max: usize,
        /// Emit one CSV row `q,ell_j,i_0,...` instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Conjugate to z(1 + α z^q + β z^{q+ℓ_j}) modulo z^{q+ℓ_j+p+1}.
    NormalForm {
        spec: PathBuf,
        #[arg(long)]
        j: usize,
    },
    /// Newton-polygon bounds for a valued polynomial over F_p(t).
    Newton { spec: PathBuf },
    /// Run a verification suite.
    Verify {
        suite: String,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        samples: Option<usize>,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        q: Option<usize>,
        #[arg(long)]
        q_max: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
        /// A `p,q,l` triple for the symbolic suites; repeatable.
        #[arg(long = "case", value_parser = parse_case)]
        cases: Vec<(u64, usize, usize)>,
    },
}

fn parse_case(text: &str) -> Result<(u64, usize, usize), String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [p, q, l] = parts.as_slice() else {
        return Err(format!("expected p,q,l, got {text:?}"));
    };
    let num = |s: &str| s.parse::<u64>().map_err(|e| format!("{s:?}: {e}"));
    Ok((num(p)?, num(q)? as usize, num(l)? as usize))
}

/// A failure and the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ParseError { .. }
            | Error::InvariantViolation(_)
            | Error::UnknownSuite(_)
            | Error::NotPrime(_)
            | Error::EvenCharacteristic
            | Error::PreconditionViolation(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn read_spec(path: &PathBuf) -> Result<ParsedSeries, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(parse_series_spec(&text)?)
}

fn wild(path: &PathBuf) -> Result<WildSeries<Fp>, Failure> {
    match read_spec(path)? {
        ParsedSeries::Wild(f) => Ok(f),
        ParsedSeries::Valued(_) => Err(usage("this command needs a series over F_p, not a valued polynomial")),
    }
}

fn num(c: &Fp) -> Value {
    json!(c.value())
}

fn print_json(value: &impl Serialize) {
    let text = serde_json::to_string_pretty(value).expect("output serializes");
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn order_json(order: &Order) -> Value {
    match order {
        Order::Finite(k) => json!({"value": k, "exact": true}),
        Order::AtLeast(k) => json!({"value": k, "exact": false}),
    }
}

fn smallest_json(s: SmallestIndex) -> Value {
    match s {
        SmallestIndex::Some(j) => json!(j),
        SmallestIndex::NoneUpTo(_) => Value::Null,
    }
}

fn index(spec: &PathBuf, j: Option<usize>) -> Result<(), Failure> {
    let f = wild(spec)?;
    if let Some(j) = j {
        let q = f.q_or_err()?;
        let ell = LambdaSet::new(q, f.characteristic()).ell(j)?;
        print_json(&json!({
            "schema": SCHEMA_VERSION,
            "q": q,
            "j": j,
            "ell_j": ell,
            "pind_j": num(&pind_laurent(&f, j)?),
        }));
        return Ok(());
    }
    let report = index_report(&f)?;
    print_json(&json!({
        "schema": SCHEMA_VERSION,
        "q": report.q,
        "ells": report.ells,
        "pind": report.pind.iter().map(num).collect::<Vec<_>>(),
        "resit": report.resit.as_ref().map(num),
        "smallest_j": smallest_json(report.smallest_j),
    }));
    Ok(())
}

fn ramify(spec: &PathBuf, n_max: usize, csv_out: bool) -> Result<(), Failure> {
    let f = wild(spec)?;
    let q = f.q_or_err()?;
    let pu = f.characteristic() as usize;
    let profile = lower_ramification(&f, n_max)?;
    let ell_j = match wildram::residue::smallest_index_j(&f)? {
        SmallestIndex::Some(j) => Some(LambdaSet::new(q, pu as u32).ell(j)?),
        SmallestIndex::NoneUpTo(_) => None,
    };
    if csv_out {
        let mut writer = csv::Writer::from_writer(std::io::stdout());
        let mut header = vec!["q".to_string(), "ell_j".to_string()];
        header.extend((0..=n_max).map(|n| format!("i_{n}")));
        let mut row = vec![q.to_string(), ell_j.map(|l| l.to_string()).unwrap_or_default()];
        row.extend(profile.levels.iter().map(|l| l.i.to_string()));
        writer.write_record(&header).and_then(|_| writer.write_record(&row)).map_err(|e| usage(e.to_string()))?;
        writer.flush().map_err(|e| usage(e.to_string()))?;
        return Ok(());
    }
    let levels: Vec<Value> = profile
        .levels
        .iter()
        .enumerate()
        .map(|(n, l)| {
            let mut v = order_json(&l.i);
            v["n"] = json!(n);
            v["delta"] = l.delta.as_ref().map(num).unwrap_or(Value::Null);
            v
        })
        .collect();
    let classification = if q > pu && q % pu != 0 {
        serde_json::to_value(classify(&f, n_max)?).expect("classification serializes")
    } else {
        Value::Null
    };
    print_json(&json!({
        "schema": SCHEMA_VERSION,
        "p": pu,
        "prec": f.prec(),
        "q": q,
        "ell_j": ell_j,
        "levels": levels,
        "classification": classification,
    }));
    Ok(())
}

fn normal_form_cmd(spec: &PathBuf, j: usize) -> Result<(), Failure> {
    let f = wild(spec)?;
    let q = f.q_or_err()?;
    let ell = LambdaSet::new(q, f.characteristic()).ell(j)?;
    let (g, h) = normal_form(&f, j)?;
    let alpha = *g.a(q).expect("q resolved");
    let beta = *g.a(q + ell).expect("checked precision");
    let coordinate: Vec<(usize, u32)> = h.terms().map(|(d, c)| (d, c.value())).collect();
    print_json(&json!({
        "schema": SCHEMA_VERSION,
        "q": q,
        "j": j,
        "ell_j": ell,
        "alpha": num(&alpha),
        "beta": num(&beta),
        "pind_j": num(&beta.mul(&alpha.mul(&alpha).inverse().expect("α != 0"))),
        "normal_form": SeriesSpec::from_wild(&g),
        "coordinate": coordinate,
    }));
    Ok(())
}

fn newton(spec: &PathBuf) -> Result<(), Failure> {
    let f: ValuedPoly = match read_spec(spec)? {
        ParsedSeries::Valued(f) => f,
        ParsedSeries::Wild(_) => return Err(usage("newton needs a spec with \"valued\": true")),
    };
    let p: Prime = f.prime();
    let fixed = fixed_point_valuations(&f)?;
    let periodic = match periodic_point_bound(&f, p) {
        Ok(report) => serde_json::to_value(report).expect("report serializes"),
        Err(e @ (Error::IndexVanishes | Error::PreconditionViolation(_))) => json!({"skipped": e.to_string()}),
        Err(e) => return Err(e.into()),
    };
    print_json(&json!({
        "schema": SCHEMA_VERSION,
        "weierstrass_degree": weierstrass_degree(&f),
        "fixed_points": fixed,
        "periodic_points": periodic,
    }));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn verify(
    suite: &str,
    seed: u64,
    samples: Option<usize>,
    json_path: Option<&PathBuf>,
    p: Option<u64>,
    q: Option<usize>,
    q_max: Option<usize>,
    n_max: Option<usize>,
    cases: Vec<(u64, usize, usize)>,
) -> Result<bool, Failure> {
    let params = SuiteParams {
        p,
        q,
        q_max,
        n_max,
        samples,
        cases: (!cases.is_empty()).then_some(cases),
    };
    let report = run_suite(suite, seed, &params)?;
    let text = report.to_json();
    match json_path {
        Some(path) => {
            fs::write(path, text + "\n").map_err(|e| usage(format!("{}: {e}", path.display())))?;
            println!("{}", report.summary());
        }
        None => {
            let _ = writeln!(std::io::stdout().lock(), "{text}");
        }
    }
    eprintln!("wall time: {:.3}s", report.wall_time.as_secs_f64());
    Ok(report.all_passed())
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Index { spec, j } => index(&spec, j).map(|_| true),
        Command::Ramify { spec, n_max, csv } => ramify(&spec, n_max, csv).map(|_| true),
        Command::NormalForm { spec, j } => normal_form_cmd(&spec, j).map(|_| true),
        Command::Newton { spec } => newton(&spec).map(|_| true),
        Command::Verify {
            suite,
            seed,
            samples,
            json,
            p,
            q,
            q_max,
            n_max,
            cases,
        } => verify(&suite, seed, samples, json.as_ref(), p, q, q_max, n_max, cases),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
