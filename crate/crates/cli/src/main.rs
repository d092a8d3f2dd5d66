use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use uqfk::algebra::{casimir, casimir_from_ef, express_in_omega, is_central, Algebra, AlgebraElement};
use uqfk::expr::{parse_element, parse_scalar, ExprError};
use uqfk::hyperbolic::{classify_point, csv_row, CharacterPoint, CSV_HEADER};
use uqfk::selftest::run_selftest;
use uqfk::weight::{enumerate_finite_irreps, verify_relations, Generator, WeightModule};
use uqfk::whittaker::{
    endomorphism_dimension, is_irreducible_whittaker, make_whittaker_module, omega_poly_string,
    submodule_lattice, whittaker_vectors, CenterIdeal, WhittakerCharacter, WhittakerError, WhittakerModule,
};
use uqfk::{Poly, Scalar};

#[derive(Parser)]
#[command(name = "uqfk", version, about = "Exact computations in U_q(f_m(K))")]
struct Cli {
    /// The m in f_m(K) = (K^m - K^-m)/(q - q^-1).
    #[arg(long, short, env = "UQFK_M", default_value_t = 1, global = true,
          value_parser = clap::value_parser!(u32).range(1..))]
    m: u32,

    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Print the PBW normal form of an expression.
    Eval {
        expr: String,
        /// Also report whether the element is central.
        #[arg(long)]
        central: bool,
    },
    /// Check the defining relations and that Omega is central.
    Relcheck,
    /// Classify the weight module attached to (alpha, beta).
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
    /// List the finite-dimensional simple weight modules of a given dimension.
    Irreps {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        dim: u32,
    },
    /// Analyse the Whittaker module U / (U g(Omega) + U (E - eta)).
    Whittaker {
        /// Monic polynomial in Omega, e.g. "(Omega - q)^2*(Omega - q^3)".
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        /// The value eta(E).
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        eta: String,
        /// Print the submodule lattice
        #[arg(long, group = "analysis")]
        lattice: bool,
        /// Print a basis of the Whittaker vectors
        #[arg(long, group = "analysis")]
        vectors: bool,
        /// Print the dimension of the endomorphism ring
        #[arg(long, group = "analysis")]
        endo: bool,
        /// K-degree window for the slice solves (default m * deg g).
        #[arg(long)]
        window: Option<u32>,
    },
    /// Run the built-in invariant suite.
    Selftest,
}

struct Failure(String);

impl From<ExprError> for Failure {
    fn from(e: ExprError) -> Self {
        Failure(e.to_string())
    }
}

macro_rules! from_err {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure(e.to_string())
            }
        }
    )*};
}
from_err!(
    uqfk::algebra::AlgebraError,
    uqfk::hyperbolic::HyperbolicError,
    uqfk::weight::WeightError,
    uqfk::whittaker::WhittakerError
);

/// Parse with a caret under the offending byte on failure.
fn located<T>(label: &str, input: &str, r: Result<T, ExprError>) -> Result<T, Failure> {
    r.map_err(|e| {
        Failure(format!(
            "{label}: {e}\n  {input}\n  {}^",
            " ".repeat(e.offset.min(input.len()))
        ))
    })
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn unsupported(cmd: &str, f: Format) -> Failure {
    let name = match f {
        Format::Text => "text",
        Format::Json => "json",
        Format::Csv => "csv",
        Format::Dot => "dot",
    };
    Failure(format!("{cmd} does not support --format {name}"))
}

fn eval(alg: &Arc<Algebra>, fmt: Format, input: &str, central: bool) -> Result<bool, Failure> {
    let u = located("expression", input, parse_element(input, alg))?;
    match fmt {
        Format::Text => {
            println!("{u}");
            if central {
                println!("central: {}", is_central(&u));
            }
        }
        Format::Json => print_json(&json!({
            "input": input,
            "normal_form": u.to_string(),
            "central": is_central(&u),
        })),
        f => return Err(unsupported("eval", f)),
    }
    Ok(true)
}

fn relcheck(alg: &Arc<Algebra>, m: u32, fmt: Format) -> Result<bool, Failure> {
    let e = AlgebraElement::e(alg);
    let f = AlgebraElement::f(alg);
    let k = AlgebraElement::k_pow(alg, 1);
    let ki = AlgebraElement::k_pow(alg, -1);
    let q2 = Scalar::q_pow(2);
    let fm = parse_element(&format!("(K^{m} - K^-{m})/(q - q^-1)"), alg)?;
    let omega = casimir(alg)?;
    let one = AlgebraElement::one(alg);
    let checks = [
        ("KE - q^2 EK = 0", (&(&k * &e) - &(&e * &k).scale(&q2)).is_zero()),
        ("q^2 KF - FK = 0", (&(&k * &f).scale(&q2) - &(&f * &k)).is_zero()),
        ("K K^-1 = K^-1 K = 1", &k * &ki == one && &ki * &k == one),
        ("EF - FE = f_m(K)", (&(&e * &f) - &(&f * &e)) == fm),
        ("Omega = FE + lambda(K) = EF + lambda'(K)", casimir_from_ef(alg)? == omega),
        ("[Omega, E] = [Omega, F] = [Omega, K] = 0", is_central(&omega)),
    ];
    let ok = checks.iter().all(|(_, pass)| *pass);
    match fmt {
        Format::Text => {
            for (name, pass) in &checks {
                println!("{} {name}", if *pass { "ok  " } else { "FAIL" });
            }
        }
        Format::Json => print_json(&json!({
            "m": m,
            "checks": checks.iter().map(|(n, p)| json!({"relation": n, "ok": p})).collect::<Vec<_>>(),
        })),
        f => return Err(unsupported("relcheck", f)),
    }
    Ok(ok)
}

fn classify(alg: &Arc<Algebra>, m: u32, fmt: Format, a: &str, b: &str) -> Result<bool, Failure> {
    let alpha = located("alpha", a, parse_scalar(a, alg))?;
    let beta = located("beta", b, parse_scalar(b, alg))?;
    let p = CharacterPoint::new(alpha, beta, m)?;
    let class = classify_point(&p)?;
    let dim = class
        .dimension()
        .map_or_else(|| "inf".to_string(), |d| d.to_string());
    match fmt {
        Format::Text => println!("{class} dim={dim}"),
        Format::Json => print_json(&json!({
            "m": m,
            "alpha": p.alpha().to_string(),
            "beta": p.beta().to_string(),
            "class": class.to_string(),
            "dimension": class.dimension(),
        })),
        Format::Csv => {
            println!("{CSV_HEADER}");
            println!("{}", csv_row(&p, &class));
        }
        f => return Err(unsupported("classify", f)),
    }
    Ok(true)
}

fn matrix_text(module: &WeightModule, g: Generator) -> String {
    module
        .generator_matrix(g)
        .to_rows()
        .iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|c| c.to_string()).collect();
            format!("    [{}]", cells.join(", "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn irreps(m: u32, fmt: Format, dim: u32) -> Result<bool, Failure> {
    let mods = enumerate_finite_irreps(dim, m)?;
    let ok = mods.iter().all(|x| verify_relations(x).ok());
    match fmt {
        Format::Text => {
            println!("{} modules of dimension {dim} (m={m})", mods.len());
            for (n, x) in mods.iter().enumerate() {
                println!(
                    "[{n}] {} alpha={} beta={}",
                    x.class(),
                    x.point().alpha(),
                    x.point().beta()
                );
                for (name, g) in [
                    ("E", Generator::E),
                    ("F", Generator::F),
                    ("K", Generator::K),
                    ("K^-1", Generator::KInv),
                ] {
                    println!("  {name}:\n{}", matrix_text(x, g));
                }
            }
        }
        Format::Json => print_json(&Value::Array(mods.iter().map(|x| x.to_json()).collect())),
        Format::Csv => {
            println!("{CSV_HEADER}");
            for x in &mods {
                println!("{}", csv_row(x.point(), &x.class()));
            }
        }
        f => return Err(unsupported("irreps", f)),
    }
    Ok(ok)
}

fn parse_ideal(alg: &Arc<Algebra>, input: &str) -> Result<CenterIdeal, Failure> {
    let u = located("g", input, parse_element(input, alg))?;
    let p = express_in_omega(&u)
        .map_err(|e| Failure(format!("g is not a polynomial in Omega: {e}")))?;
    if !p.is_polynomial_in_omega() {
        return Err(Failure("g is not a polynomial in Omega".into()));
    }
    let deg = p.omega_degree().unwrap_or(0);
    let coeffs = (0..=deg).map(|k| p.coeff(k, 0)).collect();
    Ok(CenterIdeal::from_poly(Poly::from_coeffs(coeffs))?)
}

fn whittaker_cmd(
    alg: &Arc<Algebra>,
    m: u32,
    fmt: Format,
    g: &str,
    eta: &str,
    mode: (bool, bool, bool),
    window: Option<u32>,
) -> Result<bool, Failure> {
    let ideal = parse_ideal(alg, g)?;
    let eta = located("eta", eta, parse_scalar(eta, alg))?;
    let mw = make_whittaker_module(ideal, WhittakerCharacter::new(eta)?, m)?;
    let d = mw.degree().ok_or_else(|| Failure("g must be nonzero".into()))? as u32;
    let window = window.unwrap_or(m * d);
    match mode {
        (true, _, _) => lattice_out(&mw, fmt),
        (_, true, _) => vectors_out(&mw, fmt, window),
        (_, _, true) => {
            let dim = endomorphism_dimension(&mw, window)?;
            match fmt {
                Format::Text => println!("dim End = {dim}"),
                Format::Json => print_json(&json!({"g": mw.ideal().to_string(), "endomorphisms": dim})),
                f => return Err(unsupported("whittaker --endo", f)),
            }
            Ok(true)
        }
        _ => summary_out(&mw, fmt),
    }
}

fn summary_out(mw: &WhittakerModule, fmt: Format) -> Result<bool, Failure> {
    let g = mw.ideal();
    let simple = match is_irreducible_whittaker(mw, &mw.w()) {
        Ok(cert) => json!(cert.irreducible),
        Err(WhittakerError::NotSplit(_)) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    match fmt {
        Format::Text => {
            println!("g = {g}");
            println!("expanded: {}", omega_poly_string(g.poly()));
            println!("eta(E) = {}", mw.eta().value());
            println!("degree: {}", g.degree().unwrap_or(0));
            match simple.as_bool() {
                Some(b) => println!("simple: {b}"),
                None => println!("simple: unknown (g has no linear factor)"),
            }
            println!("split: {}", g.is_split());
        }
        Format::Json => print_json(&json!({
            "g": g.to_string(),
            "expanded": omega_poly_string(g.poly()),
            "eta": mw.eta().value().to_string(),
            "degree": g.degree(),
            "simple": simple,
            "split": g.is_split(),
        })),
        f => return Err(unsupported("whittaker", f)),
    }
    Ok(true)
}

fn lattice_out(mw: &WhittakerModule, fmt: Format) -> Result<bool, Failure> {
    let lat = submodule_lattice(mw)?;
    match fmt {
        Format::Text => print!("{}", lat.to_text()),
        Format::Json => print_json(&lat.to_json()),
        Format::Dot => print!("{}", lat.to_dot()),
        f => return Err(unsupported("whittaker --lattice", f)),
    }
    Ok(true)
}

fn vectors_out(mw: &WhittakerModule, fmt: Format, window: u32) -> Result<bool, Failure> {
    let vs = whittaker_vectors(mw, window)?;
    let triples = |v: &uqfk::whittaker::WVector| -> Vec<(u32, i64, String)> {
        v.iter().map(|((i, j), c)| (*i, *j, c.to_string())).collect()
    };
    match fmt {
        Format::Text => {
            println!("{} Whittaker vectors", vs.len());
            for (n, v) in vs.iter().enumerate() {
                let parts: Vec<String> = triples(v)
                    .into_iter()
                    .map(|(i, j, c)| format!("({i}, {j}, {c})"))
                    .collect();
                println!("[{n}] {}", parts.join(" "));
            }
        }
        Format::Json => print_json(&json!({
            "g": mw.ideal().to_string(),
            "window": window,
            "vectors": vs.iter().map(|v| triples(v)).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            println!("vector,i,j,coefficient");
            for (n, v) in vs.iter().enumerate() {
                for (i, j, c) in triples(v) {
                    println!("{n},{i},{j},\"{c}\"");
                }
            }
        }
        f => return Err(unsupported("whittaker --vectors", f)),
    }
    Ok(true)
}

fn selftest(fmt: Format) -> Result<bool, Failure> {
    let checks = run_selftest();
    let ok = checks.iter().all(|c| c.passed);
    match fmt {
        Format::Text => {
            for c in &checks {
                if c.passed {
                    println!("ok   {}", c.name);
                } else {
                    println!("FAIL {} ({})", c.name, c.detail);
                }
            }
        }
        Format::Json => print_json(&json!(checks
            .iter()
            .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
            .collect::<Vec<_>>())),
        f => return Err(unsupported("selftest", f)),
    }
    Ok(ok)
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let m = cli.m;
    let alg = Algebra::fm(m);
    let fmt = cli.format;
    match cli.command {
        Command::Eval { expr, central } => eval(&alg, fmt, &expr, central),
        Command::Relcheck => relcheck(&alg, m, fmt),
        Command::Classify { alpha, beta } => classify(&alg, m, fmt, &alpha, &beta),
        Command::Irreps { dim } => irreps(m, fmt, dim),
        Command::Whittaker { g, eta, lattice, vectors, endo, window } => {
            whittaker_cmd(&alg, m, fmt, &g, &eta, (lattice, vectors, endo), window)
        }
        Command::Selftest => selftest(fmt),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
