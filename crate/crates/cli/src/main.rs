use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::info;
use serde_json::{json, Value};

use gform::construct::{counterexample_pipeline, default_pair, verify_identities};
use gform::csa::Quaternion;
use gform::funcfield::{check_prime, hilbert_symbol, parse_ratfunc, support, Place};
use gform::grpalg::{hp_verdict, GModule, Verdict};
use gform::quadform::{equivalent_global, QuadForm};
use gform::Error;

#[derive(Parser, Debug)]
#[command(name = "gform", version, about = "Quadratic and G-quadratic forms over F_p(t)")]
struct Cli {
    /// Odd prime p of the constant field.
    #[arg(long = "p", global = true, default_value_t = 3)]
    p: u32,
    /// Human-readable tables instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Progress messages on stderr (repeat for more).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hilbert symbols (a, b)_v over the support of a and b.
    Symbol {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Hasse-Minkowski comparison of two Gram matrices.
    QfEquiv { q1: PathBuf, q2: PathBuf },
    /// Ramification set of the quaternion algebra (a, b).
    Ram {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Whether the local-global principle is guaranteed for a G-module (and form).
    HpCheck { module: PathBuf, form: Option<PathBuf> },
    /// Builds the counterexample from two quaternion algebras.
    Counterexample {
        /// First quaternion algebra as `a,b`.
        #[arg(long, allow_hyphen_values = true)]
        h1: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        h2: Option<String>,
        /// Unramified places sampled for the hyperbolicity check.
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the two Gram matrices as form files into this directory.
        #[arg(long)]
        grams: Option<PathBuf>,
    },
    /// Rechecks every identity of the quaternion constructions.
    #[command(name = "verify-paper")]
    Verify,
}

enum Failure {
    Input(String),
    Certificate(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Certificate(_) => Failure::Certificate(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::new().parse_filters(level).init();
    match run(&cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Certificate(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    check_prime(cli.p)?;
    match &cli.command {
        Command::Symbol { a, b } => symbol(cli, a, b),
        Command::QfEquiv { q1, q2 } => qf_equiv(cli, q1, q2),
        Command::Ram { a, b } => ram(cli, a, b),
        Command::HpCheck { module, form } => hp_check(cli, module, form.as_deref()),
        Command::Counterexample { h1, h2, samples, output, grams } => {
            counterexample(cli, h1.as_deref(), h2.as_deref(), *samples, output.as_deref(), grams.as_deref())
        }
        Command::Verify => verify(cli),
    }
}

fn emit(cli: &Cli, v: &Value, pretty: impl FnOnce() -> String) {
    let text = if cli.pretty { pretty() } else { serde_json::to_string_pretty(v).expect("serializable") };
    // a closed pipe (e.g. `| head`) is not an error
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn with_path<T>(path: &Path, r: gform::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| match e {
        Error::Certificate(_) => Failure::Certificate(e.to_string()),
        other => Failure::Input(format!("{}: {other}", path.display())),
    })
}

fn sign(s: i8) -> &'static str {
    if s > 0 {
        "+1"
    } else {
        "-1"
    }
}

fn symbol(cli: &Cli, a: &str, b: &str) -> Outcome {
    let (x, y) = (parse_ratfunc(a, cli.p)?, parse_ratfunc(b, cli.p)?);
    let mut rows = Vec::new();
    let mut product = 1i8;
    for v in support(&x, &y)? {
        let s = hilbert_symbol(&x, &y, &v)?;
        product *= s;
        rows.push((v, s));
    }
    if product != 1 {
        return Err(Failure::Certificate(format!("product formula fails: product {}", sign(product))));
    }
    let v = json!({
        "p": cli.p,
        "a": x.to_string(),
        "b": y.to_string(),
        "symbols": rows.iter().map(|(v, s)| json!({ "place": v.to_string(), "symbol": s })).collect::<Vec<_>>(),
        "product": product,
    });
    emit(cli, &v, || {
        let mut out: Vec<String> = rows.iter().map(|(v, s)| format!("{}: {}", place_label(v), sign(*s))).collect();
        out.push(format!("product {}", sign(product)));
        out.join("\n")
    });
    Ok(true)
}

fn place_label(v: &Place) -> String {
    match v {
        Place::Infinity => "inf".into(),
        Place::Finite(pi) => format!("({pi})"),
    }
}

fn qf_equiv(cli: &Cli, p1: &Path, p2: &Path) -> Outcome {
    let q1 = with_path(p1, QuadForm::from_json(&read_json(p1)?, cli.p))?;
    let q2 = with_path(p2, QuadForm::from_json(&read_json(p2)?, cli.p))?;
    if q1.prime() != q2.prime() {
        return Err(Failure::Input("forms are over different primes".into()));
    }
    let equivalent = equivalent_global(&q1, &q2)?;
    let (i1, i2) = (q1.invariants()?, q2.invariants()?);
    let places: Vec<Place> = i1.checked.union(&i2.checked).cloned().collect();
    let hasse = |minus: &std::collections::BTreeSet<Place>, v: &Place| if minus.contains(v) { -1 } else { 1 };
    let table: Vec<Value> = places
        .iter()
        .map(|v| json!({ "place": v.to_string(), "hasse_q1": hasse(&i1.hasse_minus, v), "hasse_q2": hasse(&i2.hasse_minus, v) }))
        .collect();
    let v = json!({ "equivalent": equivalent, "q1": i1.to_json(), "q2": i2.to_json(), "places": table });
    emit(cli, &v, || {
        let mut out = vec![
            format!("rank   {} | {}", i1.rank, i2.rank),
            format!("disc   {} | {}", i1.disc, i2.disc),
        ];
        for pl in &places {
            out.push(format!("hasse at {:<12} {:>2} | {:>2}", pl.to_string(), hasse(&i1.hasse_minus, pl), hasse(&i2.hasse_minus, pl)));
        }
        out.push(if equivalent { "equivalent".into() } else { "not equivalent".into() });
        out.join("\n")
    });
    Ok(equivalent)
}

fn ram(cli: &Cli, a: &str, b: &str) -> Outcome {
    let h = Quaternion::parse(a, b, cli.p)?;
    let r = h.ramification_set()?;
    let names: Vec<String> = r.iter().map(|v| v.to_string()).collect();
    let v = json!({ "quaternion": h.to_string(), "ramification": names, "split": r.is_empty() });
    emit(cli, &v, || {
        if r.is_empty() {
            format!("{h}: split")
        } else {
            format!("{h}: ramified at {}", r.iter().map(place_label).collect::<Vec<_>>().join(", "))
        }
    });
    Ok(true)
}

fn hp_check(cli: &Cli, module: &Path, form: Option<&Path>) -> Outcome {
    let m = with_path(module, GModule::from_json(&read_json(module)?))?;
    let q = match form {
        Some(f) => Some(with_path(f, QuadForm::from_json(&read_json(f)?, m.prime()))?),
        None => None,
    };
    info!("module of dimension {} over F_{}", m.dim(), m.prime());
    let r = hp_verdict(&m, q.as_ref())?;
    emit(cli, &r.to_json(), || r.summary());
    Ok(r.verdict == Verdict::Guaranteed)
}

fn parse_pair(s: &str, p: u32) -> Result<Quaternion, Failure> {
    let (a, b) = s.split_once(',').ok_or_else(|| Failure::Input(format!("expected `a,b`, got `{s}`")))?;
    Ok(Quaternion::parse(a.trim(), b.trim(), p)?)
}

fn counterexample(cli: &Cli, h1: Option<&str>, h2: Option<&str>, samples: usize, output: Option<&Path>, grams: Option<&Path>) -> Outcome {
    let (d1, d2) = default_pair();
    let pick = |s: Option<&str>, d: Quaternion| -> Result<Quaternion, Failure> {
        match s {
            Some(s) => parse_pair(s, cli.p),
            None if cli.p == 3 => Ok(d),
            None => Err(Failure::Input("--h1 and --h2 are required when p is not 3".into())),
        }
    };
    let (h1, h2) = (pick(h1, d1)?, pick(h2, d2)?);
    info!("building the tensor construction for {h1} and {h2}");
    let r = counterexample_pipeline(&h1, &h2, samples)?;
    let v = r.to_json();
    if let Some(dir) = grams {
        fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
        for (name, q) in [("q.json", &r.q), ("q_prime.json", &r.q_prime)] {
            write(&dir.join(name), &serde_json::to_string_pretty(&q.to_json()).expect("serializable"))?;
        }
    }
    match output {
        Some(path) => write(path, &serde_json::to_string_pretty(&v).expect("serializable"))?,
        None => emit(cli, &v, || {
            let mut out = vec![format!("Ram(Q) = {}", r.ram_q.iter().map(place_label).collect::<Vec<_>>().join(", "))];
            for row in &r.local_table {
                out.push(format!("{}: local records equal = {}", row["place"].as_str().unwrap_or("?"), row["equal"]));
            }
            out.push(format!("globally distinct: {}", r.global_certificate["differs"]));
            out.push(format!("plain forms equivalent: {}", r.plain_equivalent));
            out.join("\n")
        }),
    }
    if r.all_passed() {
        Ok(true)
    } else {
        Err(Failure::Certificate("counterexample checks failed".into()))
    }
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, format!("{text}\n")).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn verify(cli: &Cli) -> Outcome {
    if cli.p != 3 {
        return Err(Failure::Input("verify-paper runs over F_3(t)".into()));
    }
    let (h1, h2) = default_pair();
    let rows = verify_identities(&h1, &h2);
    let ok = rows.iter().all(|c| c.pass);
    let v = json!({ "all_pass": ok, "checks": rows });
    emit(cli, &v, || {
        rows.iter()
            .map(|c| format!("{} {}  ({})", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail))
            .collect::<Vec<_>>()
            .join("\n")
    });
    if ok {
        Ok(true)
    } else {
        Err(Failure::Certificate("identity check failed".into()))
    }
}
