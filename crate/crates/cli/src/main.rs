#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod output;
mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dndet::det_engine::{theorem2_value, theorem4_pipeline, SurfaceTopology, Theorem2Data};
use dndet::dn_explicit::{
    annulus_det_prime, annulus_eigenvalues, cylinder_det_prime, disc_det_prime, AnnulusGeometry, CylinderGeometry,
    Geometry,
};
use dndet::hyperbolic::{
    enumerate_classes, exponent_from_spectrum, GroupPresentation, LengthSpectrum, MobiusTransform, DEFAULT_WORD_BUDGET,
};
use dndet::numeric_dn::{convergence_table, is_monotone, ConformalFactor};
use dndet::zeta_dyn::{ruelle, selberg, selberg_boundary, ZetaValue};
use dndet::Error;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use output::{float, Envelope, SCHEMA};

#[derive(Parser, Debug)]
#[command(name = "dndet", version, about = "Determinants of Dirichlet-to-Neumann maps and dynamical zeta functions")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Repeat for more detail on stderr.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ZetaKind {
    Ruelle,
    Selberg,
    SelbergG0,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Suite {
    Appendix,
    Bridge,
    Lemma,
    Functional,
    Theorem4,
    Numericdn,
    All,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Shape {
    Disc,
    Annulus,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// det' of the DN map of the annulus 1 < |z| < rho.
    Annulus {
        #[arg(long)]
        rho: f64,
        /// Also list the eigenvalue pairs of modes 1..=K.
        #[arg(long)]
        modes: Option<usize>,
    },
    /// det' of the DN map of the disc of the given radius.
    Disc {
        #[arg(long)]
        radius: f64,
    },
    /// det'/l of the hyperbolic cylinder with closed geodesic of length L.
    Cylinder {
        #[arg(long)]
        ell: f64,
    },
    /// Enumerate the primitive length spectrum of a free group.
    Spectrum {
        #[arg(long)]
        generators: PathBuf,
        #[arg(long)]
        max_word_len: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Ruelle or Selberg zeta function on a lambda grid.
    Zeta {
        #[arg(long)]
        spectrum: PathBuf,
        #[arg(long, value_enum)]
        kind: ZetaKind,
        /// A single value or an inclusive grid A:B:STEP.
        #[arg(long)]
        lambda: String,
        /// Imaginary part added to every grid point.
        #[arg(long, default_value_t = 0.0)]
        im: f64,
        /// Exponent of convergence; fitted from the spectrum when omitted.
        #[arg(long)]
        delta: Option<f64>,
        /// Boundary geodesic lengths, comma separated (selberg-g0 only).
        #[arg(long, value_delimiter = ',')]
        boundary: Vec<f64>,
    },
    /// det'N / l from the Euler characteristic.
    Detdn {
        #[arg(long, allow_hyphen_values = true)]
        chi: i64,
        #[arg(long, conflicts_with = "limit")]
        ell: Option<f64>,
        /// lim (2 pi lambda)^(chi-1) R(lambda) at 0, required when chi < 0.
        #[arg(long, allow_hyphen_values = true)]
        limit: Option<f64>,
    },
    /// det'N / l for chi < 0 from Z'_G(1) and Z_G0(1).
    Theorem4 {
        #[arg(long)]
        zg1: f64,
        #[arg(long)]
        zg01: f64,
        #[arg(long, allow_hyphen_values = true)]
        chi: i64,
        #[arg(long)]
        ell: f64,
    },
    /// K-convergence table of the truncated conformal derivative identity.
    Numericdn {
        /// JSON file holding the zero-mean conformal factor.
        #[arg(long)]
        omega: PathBuf,
        #[arg(long, value_enum, default_value_t = Shape::Disc)]
        geometry: Shape,
        /// Disc radius or annulus rho.
        #[arg(long, default_value_t = 1.0)]
        size: f64,
        #[arg(long, value_delimiter = ',', default_values_t = vec![16usize, 32, 64])]
        k: Vec<usize>,
        #[arg(long, default_value = "0:1:0.1")]
        t: String,
    },
    /// Run verification suites.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Self::Annulus { .. } => "annulus",
            Self::Disc { .. } => "disc",
            Self::Cylinder { .. } => "cylinder",
            Self::Spectrum { .. } => "spectrum",
            Self::Zeta { .. } => "zeta",
            Self::Detdn { .. } => "detdn",
            Self::Theorem4 { .. } => "theorem4",
            Self::Numericdn { .. } => "numericdn",
            Self::Verify { .. } => "verify",
        }
    }
}

enum Failure {
    /// Bad input: exit code 1.
    Validation(String),
    /// A numerical contract did not hold: exit code 2.
    Contract { invariant: String, detail: String },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::EnumerationBudget { .. } => {
                Failure::Contract { invariant: "enumeration_budget".into(), detail: e.to_string() }
            }
            Error::Truncation(_) => Failure::Contract { invariant: "truncation".into(), detail: e.to_string() },
            Error::Fit(_) => Failure::Contract { invariant: "fit".into(), detail: e.to_string() },
            other => Failure::Validation(other.to_string()),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn contract(invariant: &str, ok: bool, detail: impl FnOnce() -> String) -> Outcome<()> {
    if ok {
        Ok(())
    } else {
        Err(Failure::Contract { invariant: invariant.into(), detail: detail() })
    }
}

fn read(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome<()> {
    fs::write(path, text).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

/// `A` or `A:B:STEP`, inclusive of `B` within 1e-12.
fn parse_grid(s: &str) -> Outcome<Vec<f64>> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Failure::Validation(format!("bad number '{t}' in grid '{s}'")))
    };
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [a] => Ok(vec![num(a)?]),
        [a, b, step] => {
            let (a, b, step) = (num(a)?, num(b)?, num(step)?);
            if !(step > 0.0) || b < a {
                return Err(Failure::Validation(format!("grid '{s}' needs A <= B and STEP > 0")));
            }
            let n = ((b - a) / step + 1e-12).floor() as usize;
            if n > 1_000_000 {
                return Err(Failure::Validation(format!("grid '{s}' has more than a million points")));
            }
            let mut v: Vec<f64> = (0..=n).map(|i| a + i as f64 * step).collect();
            let last = *v.last().expect("nonempty");
            if (b - last).abs() <= 1e-12 * (1.0 + b.abs()) {
                *v.last_mut().expect("nonempty") = b;
            }
            Ok(v)
        }
        _ => Err(Failure::Validation(format!("grid '{s}' must be A or A:B:STEP"))),
    }
}

#[derive(Deserialize)]
struct GeneratorFile {
    generators: Vec<GeneratorEntry>,
}

#[derive(Deserialize)]
struct GeneratorEntry {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    #[serde(default)]
    label: Option<String>,
}

fn load_generators(path: &Path) -> Outcome<GroupPresentation> {
    let file: GeneratorFile =
        serde_json::from_str(&read(path)?).map_err(|e| Failure::Validation(format!("generators JSON: {e}")))?;
    let mut gens = Vec::new();
    let mut labels = Vec::new();
    for (i, g) in file.generators.iter().enumerate() {
        gens.push(MobiusTransform::new(g.a, g.b, g.c, g.d)?);
        labels.push(g.label.clone().unwrap_or_else(|| format!("g{i}")));
    }
    Ok(GroupPresentation::new(gens, labels)?)
}

#[derive(Serialize)]
struct ZetaRow {
    re_lambda: f64,
    im_lambda: f64,
    log_abs: f64,
    arg: f64,
    tail_bound: f64,
}

/// Result plus optional CSV and plain renderings.
struct Rendered {
    json: Value,
    csv: Option<String>,
    plain: String,
}

fn csv_table(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory CSV");
    for r in rows {
        w.write_record(&r).expect("in-memory CSV");
    }
    String::from_utf8(w.into_inner().expect("in-memory CSV")).expect("CSV is UTF-8")
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::from_str(&output::to_json(v)).expect("round trip")
}

fn execute(cmd: &Command, verbose: u8) -> Outcome<Rendered> {
    match cmd {
        Command::Annulus { rho, modes } => {
            let geom = AnnulusGeometry::new(*rho)?;
            let r = annulus_det_prime(&geom)?;
            let cross = r.cross_check.unwrap_or(f64::NAN);
            contract("annulus_two_route_agreement", (r.value - cross).abs() <= 1e-10 * r.value, || {
                format!("zeta pipeline {} vs split sums {cross}", r.value)
            })?;
            let mut json = json!({ "report": to_value(&r), "closed_form": 2.0 * std::f64::consts::PI / rho.ln() });
            if let Some(k) = modes {
                let pairs =
                    (1..=*k as i64).map(|n| annulus_eigenvalues(&geom, n)).collect::<dndet::Result<Vec<_>>>()?;
                json["modes"] = to_value(
                    &pairs
                        .iter()
                        .enumerate()
                        .map(|(i, p)| json!({"n": i + 1, "plus": p.0, "minus": p.1}))
                        .collect::<Vec<_>>(),
                );
            }
            let plain = format!("det'N = {}\nratio = {}\n", float(r.det_prime.unwrap_or(f64::NAN)), float(r.value));
            Ok(Rendered { json, csv: None, plain })
        }
        Command::Disc { radius } => {
            let r = disc_det_prime(*radius)?;
            contract("disc_ratio_is_one", (r.value - 1.0).abs() <= 1e-12, || format!("ratio {}", r.value))?;
            let plain = format!("det'N = {}\nratio = {}\n", float(r.det_prime.unwrap_or(f64::NAN)), float(r.value));
            Ok(Rendered { json: json!({ "report": to_value(&r) }), csv: None, plain })
        }
        Command::Cylinder { ell } => {
            let r = cylinder_det_prime(&CylinderGeometry::new(*ell)?)?;
            let cross = r.cross_check.unwrap_or(f64::NAN);
            contract("cylinder_annulus_identity", (r.value - cross).abs() <= 1e-12 * r.value.max(1.0), || {
                format!("l/pi = {} vs annulus {cross}", r.value)
            })?;
            let plain = format!("ratio = {}\n", float(r.value));
            Ok(Rendered { json: json!({ "report": to_value(&r) }), csv: None, plain })
        }
        Command::Spectrum { generators, max_word_len, out } => {
            let g = load_generators(generators)?;
            let spec = match enumerate_classes(&g, *max_word_len, DEFAULT_WORD_BUDGET) {
                Ok(s) => s,
                Err(Error::EnumerationBudget { budget, partial }) => {
                    write(out, &output::to_json_pretty(&*partial))?;
                    return Err(Failure::Contract {
                        invariant: "enumeration_budget".into(),
                        detail: format!("{budget} words visited; partial spectrum written to {}", out.display()),
                    });
                }
                Err(e) => return Err(e.into()),
            };
            write(out, &output::to_json_pretty(&spec))?;
            let exponent = exponent_from_spectrum(&spec).ok();
            if verbose > 0 {
                eprintln!("{} classes, complete up to {}", spec.entries.len(), spec.complete_up_to);
            }
            let json = json!({
                "classes": spec.entries.len(),
                "complete_up_to": spec.complete_up_to,
                "cutoff": spec.cutoff,
                "displacement_bound": to_value(&g.displacement_bound()),
                "exponent": exponent.map(|e| to_value(&e)),
                "out": out.display().to_string(),
            });
            let plain = format!("{} classes, complete up to {}\n", spec.entries.len(), float(spec.complete_up_to));
            Ok(Rendered { json, csv: None, plain })
        }
        Command::Zeta { spectrum, kind, lambda, im, delta, boundary } => {
            let spec = LengthSpectrum::from_json(&read(spectrum)?)?;
            let delta = match delta {
                Some(d) => *d,
                None if spec.cyclic_length().is_some() => 0.0,
                None => {
                    exponent_from_spectrum(&spec)
                        .map_err(|e| Failure::Validation(format!("cannot fit the exponent ({e}); pass --delta")))?
                        .delta
                }
            };
            if *kind == ZetaKind::SelbergG0 && boundary.is_empty() {
                return Err(Failure::Validation("selberg-g0 needs --boundary lengths".into()));
            }
            let grid = parse_grid(lambda)?;
            let rows = grid
                .par_iter()
                .map(|&re| {
                    let l = Complex64::new(re, *im);
                    let v: ZetaValue = match kind {
                        ZetaKind::Ruelle => ruelle(&spec, l, delta)?,
                        ZetaKind::Selberg => selberg(&spec, l, delta, None)?,
                        ZetaKind::SelbergG0 => selberg_boundary(boundary, &spec, l, delta)?,
                    };
                    Ok(ZetaRow {
                        re_lambda: re,
                        im_lambda: *im,
                        log_abs: v.log_value.re,
                        arg: v.log_value.im,
                        tail_bound: v.tail_bound,
                    })
                })
                .collect::<dndet::Result<Vec<_>>>()?;
            let csv = csv_table(
                &["re_lambda", "im_lambda", "log_abs", "arg", "tail_bound"],
                rows.iter().map(|r| {
                    vec![float(r.re_lambda), float(r.im_lambda), float(r.log_abs), float(r.arg), float(r.tail_bound)]
                }),
            );
            let plain = rows
                .iter()
                .map(|r| format!("{} {} {}\n", float(r.re_lambda), float(r.log_abs), float(r.tail_bound)))
                .collect();
            Ok(Rendered { json: json!({ "delta": delta, "rows": to_value(&rows) }), csv: Some(csv), plain })
        }
        Command::Detdn { chi, ell, limit } => {
            let topo = SurfaceTopology::from_euler(*chi)?;
            let data = match (ell, limit) {
                (Some(l), _) => Theorem2Data::Cylinder(*l),
                (_, Some(v)) => Theorem2Data::Limit(*v),
                _ => Theorem2Data::None,
            };
            let r = theorem2_value(&topo, data)?;
            let plain = format!("ratio = {}\n", float(r.value));
            Ok(Rendered { json: json!({ "report": to_value(&r) }), csv: None, plain })
        }
        Command::Theorem4 { zg1, zg01, chi, ell } => {
            let topo = SurfaceTopology::from_euler(*chi)?;
            let r = theorem4_pipeline(*zg1, *zg01, &topo, *ell)?;
            let closed = r.cross_check.unwrap_or(f64::NAN);
            contract("theorem4_two_path_agreement", (r.value - closed).abs() <= 1e-12 * closed.abs(), || {
                format!("composed {} vs closed form {closed}", r.value)
            })?;
            let plain = format!("ratio = {}\n", float(r.value));
            Ok(Rendered { json: json!({ "report": to_value(&r) }), csv: None, plain })
        }
        Command::Numericdn { omega, geometry, size, k, t } => {
            let w = ConformalFactor::from_json(&read(omega)?)?;
            let geom = match geometry {
                Shape::Disc => Geometry::Disc { radius: *size },
                Shape::Annulus => Geometry::Annulus { rho: *size },
            };
            let ts = parse_grid(t)?;
            let rows = convergence_table(geom, &w, k, &ts)?;
            let csv =
                csv_table(&["k", "max_residual"], rows.iter().map(|r| vec![r.k.to_string(), float(r.max_residual)]));
            let plain = rows.iter().map(|r| format!("K = {:4}  {}\n", r.k, float(r.max_residual))).collect();
            let json = json!({ "rows": to_value(&rows), "monotone": is_monotone(&rows, 1e-9) });
            Ok(Rendered { json, csv: Some(csv), plain })
        }
        Command::Verify { suite } => {
            let name = to_value(suite).as_str().expect("enum serializes to a string").to_string();
            let reports = verify::run(&name)?;
            let mut plain = String::new();
            for s in &reports {
                for c in &s.checks {
                    plain.push_str(&format!(
                        "[{}] {} {}: {}\n",
                        if c.passed { "PASS" } else { "FAIL" },
                        s.suite,
                        c.name,
                        c.summary
                    ));
                }
            }
            let failed: Vec<String> = reports
                .iter()
                .flat_map(|s| s.checks.iter().filter(|c| !c.passed).map(move |c| format!("{}.{}", s.suite, c.name)))
                .collect();
            let rendered = Rendered { json: json!({ "suites": to_value(&reports) }), csv: None, plain };
            if failed.is_empty() {
                Ok(rendered)
            } else {
                print_rendered(cmd, Format::Json, &rendered).ok();
                Err(Failure::Contract { invariant: failed.join(","), detail: "verification failed".into() })
            }
        }
    }
}

fn print_rendered(cmd: &Command, format: Format, r: &Rendered) -> Outcome<()> {
    match format {
        Format::Json => {
            let config = to_value(cmd);
            let env = Envelope {
                schema: SCHEMA,
                command: cmd.name(),
                config_fingerprint: output::fingerprint(&config),
                config: &config,
                result: &r.json,
            };
            println!("{}", output::to_json_pretty(&env));
        }
        Format::Csv => match &r.csv {
            Some(c) => print!("{c}"),
            None => return Err(Failure::Validation(format!("csv output is not available for '{}'", cmd.name()))),
        },
        Format::Plain => print!("{}", r.plain),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = execute(&cli.command, cli.verbose).and_then(|r| print_rendered(&cli.command, cli.format, &r));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Contract { invariant, detail }) => {
            eprintln!("contract violated: {invariant}: {detail}");
            ExitCode::from(2)
        }
    }
}
