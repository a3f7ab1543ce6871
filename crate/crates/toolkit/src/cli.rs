//! Command-line interface. Every command prints deterministic JSON (or CSV
//! for `charfn`) to stdout and, with `--out DIR`, also writes its files there.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use smp_core::characteristic::{
    char_fn, classify, default_lambda_grid, geometric_grid, linear_grid, CharFnConfig, ClassifyConfig, Side, SmpConfig,
};
use smp_core::counterexample::{build_counterexample, hopf_default_grid, hopf_function, ConstructionConfig};
use smp_core::functions::{GFunction, IncreasingFn};
use smp_core::monotonicity::{scp_report, ScpConfig};
use smp_core::radial::{radial_residual, smp_witness_check, verify_monotone_radial, Direction};
use smp_core::subequation::SubequationSpec;

use crate::csv_io;
use crate::spec_io::{g_to_value, SpecDocument};
use crate::ToolError;

pub const SEED_ENV: &str = "SMP_TOOLKIT_SEED";

#[derive(Parser, Debug)]
#[command(name = "smp-toolkit", version, about = "Strong maximum principle analysis for subequations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Random seed [default: $SMP_TOOLKIT_SEED, else 0].
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for output files.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Place a subequation in the generic, borderline or counterexample case.
    Classify {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 16)]
        probe_directions: usize,
        #[arg(long, default_value_t = 64)]
        nsd_samples: usize,
    },
    /// Tabulate the upper or lower characteristic function.
    Charfn {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum, default_value_t = SideArg::Upper)]
        side: SideArg,
        /// `geom:LO:HI:COUNT`, `lin:LO:HI:COUNT` or comma-separated values
        /// [default: 0 and twenty points per decade on 1e-8..10].
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, default_value_t = 64)]
        e_samples: usize,
        #[arg(long, default_value_t = 1e12)]
        mu_cap: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Hill-climb over directions after sampling.
        #[arg(long)]
        refine: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Decide the strong maximum principle.
    Smp {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Build a radial counterexample (or the Hopf barrier) and verify it.
    Counterexample {
        /// sqrt, linear, power, hopf (ignored with --f-table).
        #[arg(long, default_value = "sqrt")]
        f: String,
        /// CSV with columns lambda,f.
        #[arg(long)]
        f_table: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        slope: f64,
        #[arg(long, default_value_t = 1.0)]
        coeff: f64,
        #[arg(long, default_value_t = 0.5)]
        exponent: f64,
        #[arg(long, default_value_t = 0.0)]
        m: f64,
        #[arg(long, default_value_t = 1e-12)]
        quad_tol: f64,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
        #[arg(long, default_value_t = 1.0)]
        y0: f64,
        #[arg(long, default_value_t = 10.0)]
        beta: f64,
        #[arg(long = "R", default_value_t = 1.0)]
        r: f64,
    },
    /// Strong comparison report for the monotonicity subequation M(g).
    Scp {
        #[command(flatten)]
        g: GArgs,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 2000)]
        trials: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SideArg {
    Upper,
    Lower,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// A subequation given inline or as a JSON document.
#[derive(Args, Debug, Clone, Default)]
pub struct SpecArgs {
    /// JSON spec document (overrides the inline flags).
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// pos, subaffine, minmax-cone, pucci, p-delta, sigma-psi-k, minmax-f,
    /// min-two-f, mg, halfspace, diagonal-entry, trace-hyperplane.
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Wrap the spec in its Dirichlet dual.
    #[arg(long)]
    pub dual: bool,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub big_lambda: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Exponent of the odd power in sigma-psi-k.
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub index: Option<usize>,
    /// f for minmax-f / min-two-f: sqrt, identity, linear, power, hopf.
    #[arg(long)]
    pub f: Option<String>,
    #[arg(long)]
    pub slope: Option<f64>,
    #[arg(long)]
    pub coeff: Option<f64>,
    #[arg(long)]
    pub exponent: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[command(flatten)]
    pub g: GArgs,
    /// Membership slack.
    #[arg(long)]
    pub slack: Option<f64>,
}

/// The decreasing function `g` of `M(g)`.
#[derive(Args, Debug, Clone, Default)]
pub struct GArgs {
    /// neg-sqrt, neg-power, neg-rational, log-family.
    #[arg(long)]
    pub g: Option<String>,
    #[arg(long)]
    pub g_coeff: Option<f64>,
    #[arg(long)]
    pub g_exponent: Option<f64>,
    #[arg(long)]
    pub g_alpha: Option<f64>,
    #[arg(long)]
    pub g_lambda_end: Option<f64>,
    /// Right end `a` of the base interval.
    #[arg(long)]
    pub g_a: Option<f64>,
    /// Continue past `a` by the subadditive shift instead of linearly.
    #[arg(long)]
    pub g_extended: bool,
}

fn input(msg: impl Into<String>) -> ToolError {
    ToolError::Input(msg.into())
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T, ToolError> {
    v.ok_or_else(|| input(format!("--{flag} is required for this kind")))
}

impl GArgs {
    pub fn to_value(&self) -> Result<Value, ToolError> {
        let name = self.g.as_deref().ok_or_else(|| input("--g is required"))?;
        let mut v = match name {
            "neg-sqrt" => json!({"kind": "neg-sqrt"}),
            "neg-rational" => json!({"kind": "neg-rational"}),
            "neg-power" => json!({
                "kind": "neg-power",
                "coeff": self.g_coeff.unwrap_or(1.0),
                "exponent": need(self.g_exponent, "g-exponent")?,
            }),
            "log-family" => json!({
                "kind": "log-family",
                "alpha": need(self.g_alpha, "g-alpha")?,
                "lambda_end": self.g_lambda_end.unwrap_or(0.1),
            }),
            other => return Err(input(format!("unknown g '{other}'"))),
        };
        let obj = v.as_object_mut().expect("object");
        if let Some(a) = self.g_a {
            obj.insert("a".into(), json!(a));
        }
        if self.g_extended {
            obj.insert("extended".into(), json!(true));
        }
        Ok(v)
    }

    pub fn to_g(&self) -> Result<GFunction, ToolError> {
        crate::spec_io::g_from_value(&self.to_value()?)
    }
}

fn f_value(
    name: &str,
    slope: Option<f64>,
    coeff: Option<f64>,
    exponent: Option<f64>,
    beta: Option<f64>,
) -> Result<Value, ToolError> {
    Ok(match name {
        "sqrt" => json!({"kind": "sqrt"}),
        "identity" => json!({"kind": "identity"}),
        "linear" => json!({"kind": "linear", "slope": slope.unwrap_or(1.0)}),
        "power" => json!({"kind": "power", "coeff": coeff.unwrap_or(1.0), "exponent": need(exponent, "exponent")?}),
        "hopf" => json!({"kind": "hopf", "beta": need(beta, "beta")?}),
        other => return Err(input(format!("unknown f '{other}'"))),
    })
}

impl SpecArgs {
    pub fn to_document(&self) -> Result<SpecDocument, ToolError> {
        let mut doc = if let Some(path) = &self.spec {
            let text = fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
            SpecDocument::from_json(&text)?
        } else {
            let kind = self.kind.clone().ok_or_else(|| input("give --spec FILE or --kind"))?;
            let dim = self.dim.ok_or_else(|| input("--dim is required"))?;
            let mut params = Map::new();
            let mut put = |k: &str, v: Value| {
                params.insert(k.into(), v);
            };
            match kind.as_str() {
                "minmax-cone" => put("alpha", json!(need(self.alpha, "alpha")?)),
                "pucci" => {
                    put("lambda", json!(need(self.lambda, "lambda")?));
                    put("big_lambda", json!(need(self.big_lambda, "big-lambda")?));
                }
                "p-delta" => put("delta", json!(need(self.delta, "delta")?)),
                "sigma-psi-k" => {
                    put("a", json!(need(self.a, "a")?));
                    put("k", json!(need(self.k, "k")?));
                }
                "minmax-f" | "min-two-f" => {
                    let name = self.f.as_deref().ok_or_else(|| input("--f is required for this kind"))?;
                    put("f", f_value(name, self.slope, self.coeff, self.exponent, self.beta)?);
                }
                "mg" => put("g", self.g.to_value()?),
                "halfspace" => put("c", json!(need(self.c, "c")?)),
                "diagonal-entry" => put("index", json!(need(self.index, "index")?)),
                _ => {}
            }
            SpecDocument { kind, dim, params }
        };
        if let Some(eps) = self.slack {
            doc.params.insert("slack".into(), json!(eps));
        }
        if self.dual {
            let dim = doc.dim;
            let inner = serde_json::to_value(&doc).expect("serializable");
            doc = SpecDocument { kind: "dual".into(), dim, params: Map::from_iter([("inner".to_string(), inner)]) };
        }
        Ok(doc)
    }

    pub fn to_spec(&self) -> Result<SubequationSpec, ToolError> {
        self.to_document()?.to_spec()
    }
}

/// `--seed`, else `$SMP_TOOLKIT_SEED`, else 0.
pub fn resolve_seed(flag: Option<u64>) -> Result<u64, ToolError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| input(format!("{SEED_ENV}='{v}' is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

/// Parses `geom:LO:HI:COUNT`, `lin:LO:HI:COUNT` or `v1,v2,...`.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, ToolError> {
    let bad = || input(format!("bad grid '{text}'"));
    let parts: Vec<&str> = text.split(':').collect();
    let grid = match parts.as_slice() {
        [kind @ ("geom" | "lin"), lo, hi, n] => {
            let lo: f64 = lo.parse().map_err(|_| bad())?;
            let hi: f64 = hi.parse().map_err(|_| bad())?;
            let n: usize = n.parse().map_err(|_| bad())?;
            if n < 2 || lo.is_nan() || hi <= lo || (*kind == "geom" && lo <= 0.0) {
                return Err(bad());
            }
            if *kind == "geom" {
                geometric_grid(lo, hi, n)
            } else {
                linear_grid(lo, hi, n)
            }
        }
        [list] => list.split(',').map(|v| v.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_, _>>()?,
        _ => return Err(bad()),
    };
    if grid.is_empty() || grid.windows(2).any(|w| w[1] <= w[0]) || grid.iter().any(|v| !v.is_finite()) {
        return Err(input("grid must be finite and strictly increasing"));
    }
    Ok(grid)
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

fn write_file(
    dir: &Path,
    name: &str,
    write: impl FnOnce(&mut fs::File) -> Result<(), ToolError>,
) -> Result<(), ToolError> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let mut file = fs::File::create(&path).map_err(|e| ToolError::Io(format!("{}: {e}", path.display())))?;
    write(&mut file)
}

fn emit_json(stdout: &mut dyn Write, out: Option<&Path>, name: &str, text: &str) -> Result<(), ToolError> {
    if let Some(dir) = out {
        write_file(dir, name, |f| Ok(writeln!(f, "{text}")?))?;
    }
    writeln!(stdout, "{text}")?;
    Ok(())
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), ToolError> {
    let seed = resolve_seed(cli.seed)?;
    let out = cli.out.as_deref();
    match cli.command {
        Command::Classify { spec, probe_directions, nsd_samples } => {
            let s = spec.to_spec()?;
            let cfg = ClassifyConfig {
                probe_directions,
                nsd_samples,
                seed,
                charfn: CharFnConfig { seed, ..Default::default() },
                ..Default::default()
            };
            let c = classify(&s, &cfg)?;
            let report = json!({
                "spec_id": s.id(),
                "case": c.case,
                "witness": c.witness,
                "lower_at_zero": c.lower_at_zero,
                "probes": c.probes,
            });
            emit_json(stdout, out, "classify.json", &to_json(&report))
        }
        Command::Charfn { spec, side, grid, e_samples, mu_cap, tol, refine, format } => {
            let s = spec.to_spec()?;
            let grid = match grid {
                Some(g) => parse_grid(&g)?,
                None => default_lambda_grid(),
            };
            let side = match side {
                SideArg::Upper => Side::Upper,
                SideArg::Lower => Side::Lower,
            };
            let cfg = CharFnConfig { e_samples, mu_cap, tol, seed, exploit_invariance: true, refine };
            let table = char_fn(&s, side, &grid, &cfg)?;
            if let Some(dir) = out {
                write_file(dir, "charfn.csv", |f| csv_io::write_char_table(f, &table))?;
                let meta = json!({"meta": table.meta, "seed": seed, "points": table.lambdas.len()});
                write_file(dir, "charfn.meta.json", |f| Ok(writeln!(f, "{}", to_json(&meta))?))?;
            }
            match format {
                Format::Csv => csv_io::write_char_table(stdout, &table),
                Format::Json => Ok(writeln!(stdout, "{}", to_json(&table))?),
            }
        }
        Command::Smp { spec } => {
            let s = spec.to_spec()?;
            let mut cfg = SmpConfig::default();
            cfg.classify.seed = seed;
            cfg.classify.charfn.seed = seed;
            cfg.charfn.seed = seed;
            let report = smp_core::characteristic::smp_verdict(&s, &cfg)?;
            emit_json(stdout, out, "smp.json", &to_json(&report))
        }
        Command::Counterexample { f, f_table, slope, coeff, exponent, m, quad_tol, grid, y0, beta, r } => {
            if f_table.is_none() && f == "hopf" {
                return run_hopf(stdout, out, beta, r, grid);
            }
            let func = match &f_table {
                Some(path) => {
                    let file = fs::File::open(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
                    csv_io::read_f_table(file)?
                }
                None => crate::spec_io::f_from_value(&f_value(&f, Some(slope), Some(coeff), Some(exponent), None)?)?,
            };
            let cfg = ConstructionConfig { y0, grid, ..Default::default() };
            let rec = build_counterexample(&func, m, quad_tol, &cfg)?;
            let residual = radial_residual(&func, &rec.psi)?;
            let up = verify_monotone_radial(&func, &rec.psi, Direction::Up, 1e-6)?;
            let summary = json!({
                "f": crate::spec_io::f_to_value(&func),
                "y0": rec.y0,
                "s0": rec.s0,
                "t0": rec.t0,
                "m": rec.m,
                "quad_tol": rec.quad_tol,
                "grid": grid,
                "max_residual": residual.max_abs,
                "clamped": residual.clamped,
                "monotone_up": up.holds,
                "smp_witness": smp_witness_check(&rec.psi),
                "f_jumps": rec.f_jumps,
                "certificate": rec.certificate,
            });
            if let Some(dir) = out {
                write_file(dir, "s_of_y.csv", |w| csv_io::write_pairs(w, ["y", "s"], &rec.s_of_y.xs, &rec.s_of_y.ys))?;
                write_file(dir, "y_of_s.csv", |w| csv_io::write_pairs(w, ["s", "y"], &rec.y_of_s.xs, &rec.y_of_s.ys))?;
                write_file(dir, "psi.csv", |w| csv_io::write_radial(w, &rec.psi))?;
            }
            emit_json(stdout, out, "meta.json", &to_json(&summary))
        }
        Command::Scp { g, dim, trials } => {
            let gf = g.to_g()?;
            let cfg = ScpConfig { trials, seed, ..Default::default() };
            let report = scp_report(&gf, dim, &cfg)?;
            let mut v = serde_json::to_value(&report).expect("serializable");
            v.as_object_mut().expect("object").insert("g_document".into(), g_to_value(&gf));
            emit_json(stdout, out, "scp.json", &to_json(&v))
        }
    }
}

fn run_hopf(stdout: &mut dyn Write, out: Option<&Path>, beta: f64, r: f64, grid: usize) -> Result<(), ToolError> {
    if grid < 3 {
        return Err(input("--grid must be at least 3"));
    }
    let rf = hopf_function(beta, r, hopf_default_grid(r, grid))?;
    let f = IncreasingFn::hopf(beta);
    let residual = radial_residual(&f, &rf)?;
    let summary = json!({
        "f": crate::spec_io::f_to_value(&f),
        "beta": beta,
        "R": r,
        "grid": grid,
        "max_residual": residual.max_abs,
        "clamped": residual.clamped,
    });
    if let Some(dir) = out {
        write_file(dir, "psi.csv", |w| csv_io::write_radial(w, &rf))?;
    }
    emit_json(stdout, out, "meta.json", &to_json(&summary))
}
