//! Command-line front end.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::energy::{self, EnergyOptions, Potential};
use crate::error::{BoundError, Result};
use crate::krein::{self, KreinChecker, PairMode, KREIN_TOLERANCE};
use crate::levenshtein::{self, bound_l2k, BoundReport, EvenBoundCurve};
use crate::orthopoly::adjacent10_family;
use crate::real::{to_f64, truncate3, Real, WORKING_DIGITS};
use crate::signed_ortho::{max_k_for_ell, s_window, MaxK};

/// Version of the JSON output layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "levbound", version, about = "Levenshtein-type bounds for spherical codes with inner products in [l, s]")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Working precision in decimal digits (double-double arithmetic).
    #[arg(long, env = "LEVBOUND_PRECISION", default_value_t = WORKING_DIGITS as u32,
          value_parser = clap::value_parser!(u32).range(30..=31), global = true)]
    pub precision: u32,
    /// Seed recorded with sampled checks.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Pairs {
    Full,
    Weak,
}

impl From<Pairs> for PairMode {
    fn from(p: Pairs) -> Self {
        match p {
            Pairs::Full => PairMode::Full,
            Pairs::Weak => PairMode::Weak,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bound L_2k(n; [l, s]) with its quadrature certificate.
    Bound {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        ell: f64,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        /// Degree parameter; chosen from the window containing s when omitted.
        #[arg(long)]
        k: Option<usize>,
        /// Also write the report with the underlying families to this file.
        #[arg(long)]
        dump_certificate: Option<PathBuf>,
    },
    /// Closed-form degree-4 bound with its side conditions.
    U4 {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        ell: f64,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
    },
    /// Table of l(n, k) and of the smallest root of P_(k+1)^(1,0) = P_k^(1,0).
    Table {
        #[arg(long, default_value_t = 3)]
        n_min: usize,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        #[arg(long, default_value_t = 1)]
        k_min: usize,
        #[arg(long, default_value_t = 10)]
        k_max: usize,
        #[arg(long, default_value_t = krein::DEFAULT_STEP)]
        step: f64,
        /// Full-precision JSON written next to CSV output.
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Curves L_1, L_3, L_5, L_7 and L_2, L_4, L_6, L_8 over a grid of s.
    Figure {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        ell: f64,
        #[arg(long, default_value_t = 401)]
        points: usize,
        #[arg(long, allow_hyphen_values = true)]
        s_min: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        s_max: Option<f64>,
    },
    /// Lower bound on the h-energy of M points with inner products in [l, 1).
    Energy {
        #[arg(long)]
        n: usize,
        /// One or more cardinalities, comma separated.
        #[arg(long = "M", value_delimiter = ',', required = true)]
        m: Vec<f64>,
        #[arg(long, allow_hyphen_values = true)]
        ell: f64,
        /// riesz:<s>, gaussian:<c>, log, newton, file:<path> or poly:<c0>,<c1>,...
        #[arg(long)]
        potential: String,
        /// Sample points for the g <= h check.
        #[arg(long, default_value_t = energy::DEFAULT_GRID)]
        grid: usize,
    },
    /// l-strengthened Krein condition at one l, or the threshold l(n, k).
    Krein {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["sweep", "scan"])]
        ell: Option<f64>,
        /// Estimate l(n, k).
        #[arg(long)]
        sweep: bool,
        /// Test the condition at this many points of [-1, l(n, k)].
        #[arg(long, conflicts_with = "sweep")]
        scan: Option<usize>,
        #[arg(long, value_enum, default_value_t = Pairs::Full)]
        pairs: Pairs,
        #[arg(long, default_value_t = krein::DEFAULT_STEP)]
        step: f64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Bound { .. } => "bound",
            Command::U4 { .. } => "u4",
            Command::Table { .. } => "table",
            Command::Figure { .. } => "figure",
            Command::Energy { .. } => "energy",
            Command::Krein { .. } => "krein",
        }
    }
}

/// Rendered command output.
#[derive(Debug, Clone)]
pub struct Rendered {
    pub json: Value,
    pub csv: String,
    pub text: String,
    /// Extra JSON file written alongside CSV output.
    pub sidecar: Option<(PathBuf, Value)>,
}

fn envelope(cli: &Cli, result: Value) -> Value {
    json!({
        "schema": SCHEMA_VERSION,
        "command": cli.command.name(),
        "precision_digits": cli.global.precision,
        "seed": cli.global.seed,
        "result": result,
    })
}

fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    serde_json::to_value(x).map_err(|e| BoundError::Numeric(format!("serialization failed: {e}")))
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Picks the `k` whose window contains `s`.
fn auto_k(n: usize, ell: f64, s: f64) -> Result<usize> {
    let top = match max_k_for_ell(n, ell)? {
        MaxK::Finite(k) | MaxK::Cap(k) => k,
    };
    let sr = Real::from(s);
    let slack = Real::from(crate::signed_ortho::WINDOW_SLACK);
    for k in 1..=top {
        if let Ok(curve) = EvenBoundCurve::new(n, ell, k) {
            let (lo, hi) = curve.window;
            if sr >= lo - slack && sr <= hi + slack {
                return Ok(k);
            }
        }
    }
    Err(BoundError::precondition(
        "s_window",
        format!("no k <= {top} has s = {s} in its window for n = {n}, ell = {ell}"),
    ))
}

fn bound_text(r: &BoundReport) -> String {
    let mut t = format!(
        "L_{}({}; [{}, {}]) = {}  [{}]\n",
        2 * r.k,
        r.n,
        r.ell,
        r.s,
        r.value,
        r.status
    );
    for (name, c) in &r.checks {
        let _ = writeln!(t, "  {:<26} {}  {}", name, if c.passed { "pass" } else { "FAIL" }, c.detail);
    }
    t
}

fn cmd_bound(n: usize, ell: f64, s: f64, k: Option<usize>, dump: Option<PathBuf>) -> Result<Rendered> {
    let k = match k {
        Some(k) => k,
        None => auto_k(n, ell, s)?,
    };
    let r = bound_l2k(n, ell, s, k)?;
    let mut json = to_value(&r)?;
    json["value_truncated"] = json!(truncate3(r.value));
    let csv = format!(
        "n,ell,s,k,value,value_truncated,status\n{},{},{},{},{},{},{}\n",
        r.n,
        r.ell,
        r.s,
        r.k,
        r.value,
        truncate3(r.value),
        r.status
    );
    let sidecar = match dump {
        Some(path) => {
            let kernel = &r.polynomial.kernel;
            let cert = json!({
                "report": json,
                "adjacent_family": to_value(&kernel.family.base)?,
                "signed_family": to_value(&kernel.family)?,
                "kernel": to_value(kernel)?,
            });
            Some((path, cert))
        }
        None => None,
    };
    Ok(Rendered {
        json,
        csv,
        text: bound_text(&r),
        sidecar,
    })
}

fn cmd_u4(n: usize, ell: f64, s: f64) -> Result<Rendered> {
    let r = levenshtein::bound_u4(n, ell, s)?;
    let json = to_value(&r)?;
    let c = r.constraints.as_ref();
    let flag = |f: fn(&levenshtein::U4Constraints) -> bool| c.map(|c| f(c).to_string()).unwrap_or_default();
    let csv = format!(
        "n,ell,s,value,alpha,degenerate,first,second,third\n{},{},{},{},{},{},{},{},{}\n",
        r.n,
        r.ell,
        r.s,
        r.value,
        opt(r.alpha),
        r.degenerate,
        flag(|c| c.first),
        flag(|c| c.second),
        flag(|c| c.third)
    );
    let text = if r.degenerate {
        format!("U4({n}; [{ell}, {s}]) is degenerate (bracket vanishes)\n")
    } else {
        format!(
            "U4({n}; [{ell}, {s}]) = {}  alpha = {}  constraints = {}\n",
            r.value,
            opt(r.alpha),
            c.map(|c| format!("{} {} {}", c.first, c.second, c.third)).unwrap_or_default()
        )
    };
    Ok(Rendered {
        json,
        csv,
        text,
        sidecar: None,
    })
}

fn cmd_table(
    ns: (usize, usize),
    ks: (usize, usize),
    step: f64,
    sidecar: Option<PathBuf>,
    output: Option<&Path>,
) -> Result<Rendered> {
    if ns.0 > ns.1 || ks.0 > ks.1 || ks.0 == 0 {
        return Err(BoundError::Argument("empty or invalid n/k range".into()));
    }
    let n_list: Vec<usize> = (ns.0..=ns.1).collect();
    let k_list: Vec<usize> = (ks.0..=ks.1).rev().collect();
    let cells = krein::krein_table(&n_list, &k_list, step)?;
    let mut csv = String::from("label,n");
    for k in &k_list {
        let _ = write!(csv, ",k{k}");
    }
    csv.push('\n');
    let mut text = String::new();
    for n in &n_list {
        let row: Vec<_> = cells.iter().filter(|c| c.n == *n).collect();
        let star: Vec<String> = row
            .iter()
            .map(|c| format!("{:.3}", c.ell_star.value_truncated))
            .collect();
        let root: Vec<String> = row
            .iter()
            .map(|c| format!("{:.3}", c.ratio_root_truncated))
            .collect();
        let _ = writeln!(csv, "ell_star,{n},{}", star.join(","));
        let _ = writeln!(csv, "ratio_root,{n},{}", root.join(","));
        let _ = writeln!(text, "l({n},k)   {}", star.join(" "));
        let _ = writeln!(text, "root      {}", root.join(" "));
    }
    let json = json!({ "step": step, "k_order": k_list, "cells": to_value(&cells)? });
    let sidecar = sidecar
        .or_else(|| output.map(|p| p.with_extension("json")))
        .map(|p| (p, json.clone()));
    Ok(Rendered {
        json,
        csv,
        text,
        sidecar,
    })
}

fn cmd_figure(n: usize, ell: f64, points: usize, s_min: Option<f64>, s_max: Option<f64>) -> Result<Rendered> {
    if points < 2 {
        return Err(BoundError::Argument("at least two grid points are needed".into()));
    }
    let base = adjacent10_family(n, 4)?;
    let lo = s_min.unwrap_or_else(|| to_f64(base.largest_zero(1)));
    let hi = match s_max {
        Some(v) => v,
        None => (1..=4)
            .rev()
            .find_map(|k| EvenBoundCurve::new(n, ell, k).ok())
            .map(|c| to_f64(s_window(&c.family).1))
            .unwrap_or(0.9),
    };
    if !(lo < hi) {
        return Err(BoundError::Argument(format!("empty s range [{lo}, {hi}]")));
    }
    let s_values: Vec<f64> = (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect();
    let rows = levenshtein::figure_rows(n, ell, &s_values)?;
    let mut crossovers = Vec::new();
    for k in 1..=4 {
        if let Ok(s) = levenshtein::crossover(n, ell, k) {
            crossovers.push(json!({ "k": k, "even": 2 * k, "odd": 2 * k + 1, "s": s, "s_truncated": truncate3(s) }));
        }
    }
    let adjacent_zeros: Vec<f64> = (1..=4).map(|k| to_f64(base.largest_zero(k))).collect();
    let mut csv = String::from("s,L1,L3,L5,L7,L2,L4,L6,L8\n");
    for r in &rows {
        let cols: Vec<String> = r.odd.iter().chain(r.even.iter()).map(|v| opt(*v)).collect();
        let _ = writeln!(csv, "{},{}", r.s, cols.join(","));
    }
    let text = format!(
        "{} rows over s in [{lo}, {hi}]\ncrossovers: {}\nlargest adjacent zeros t_(k,k)^(1,0): {:?}\n",
        rows.len(),
        serde_json::to_string(&crossovers).unwrap_or_default(),
        adjacent_zeros
    );
    let json = json!({
        "n": n,
        "ell": ell,
        "columns": ["s", "L1", "L3", "L5", "L7", "L2", "L4", "L6", "L8"],
        "rows": to_value(&rows)?,
        "crossovers": crossovers,
        "adjacent_largest_zeros": adjacent_zeros,
    });
    Ok(Rendered {
        json,
        csv,
        text,
        sidecar: None,
    })
}

fn cmd_energy(n: usize, ms: &[f64], ell: f64, potential: &str, grid: usize) -> Result<Rendered> {
    let h = Potential::parse(potential, n)?;
    let opts = EnergyOptions { grid_size: grid };
    let reports = ms
        .iter()
        .map(|&m| energy::energy_lower_bound_with(n, m, ell, &h, opts))
        .collect::<Result<Vec<_>>>()?;
    let mut csv = String::from("M,k,s,bound,status\n");
    let mut text = String::new();
    for r in &reports {
        let _ = writeln!(csv, "{},{},{},{},{}", r.m, r.k, r.s, r.value, r.status);
        let _ = writeln!(
            text,
            "E({n}, {}, {ell}; {}) >= {}  (k = {}, s = {}, nodes = {:?})  [{}]",
            r.m, r.potential, r.value, r.k, r.s, r.nodes, r.status
        );
        for (name, c) in &r.checks {
            let _ = writeln!(text, "  {:<22} {}  {}", name, if c.passed { "pass" } else { "FAIL" }, c.detail);
        }
    }
    let json = if reports.len() == 1 {
        to_value(&reports[0])?
    } else {
        to_value(&reports)?
    };
    Ok(Rendered {
        json,
        csv,
        text,
        sidecar: None,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_krein(
    n: usize,
    k: usize,
    ell: Option<f64>,
    sweep: bool,
    scan: Option<usize>,
    pairs: Pairs,
    step: f64,
) -> Result<Rendered> {
    let mode = PairMode::from(pairs);
    if let Some(samples) = scan {
        let r = krein::conjecture_scan(n, k, samples)?;
        let mut csv = String::from("ell,holds\n");
        for (l, h) in &r.samples {
            let _ = writeln!(csv, "{l},{h}");
        }
        let text = format!(
            "l({n},{k}) = {}; {} of {} samples in [-1, l] pass\n",
            r.ell_star,
            r.samples.iter().filter(|(_, h)| *h).count(),
            r.samples.len()
        );
        return Ok(Rendered {
            json: to_value(&r)?,
            csv,
            text,
            sidecar: None,
        });
    }
    if sweep || ell.is_none() {
        let checker = KreinChecker::new(n, k)?;
        let r = krein::ell_star_with(&checker, step, KREIN_TOLERANCE, mode)?;
        let root = to_f64(checker.ratio_root()?);
        let mut json = to_value(&r)?;
        json["ratio_root"] = json!(root);
        json["ratio_root_truncated"] = json!(truncate3(root));
        json["pairs"] = to_value(&mode)?;
        let csv = format!(
            "n,k,ell_star,ell_star_truncated,status,ratio_root,ratio_root_truncated\n{n},{k},{},{:.3},{},{root},{:.3}\n",
            r.value,
            r.value_truncated,
            json["status"].as_str().unwrap_or_default(),
            truncate3(root)
        );
        let text = format!(
            "l({n},{k}) = {:.3} (last pass {}, first fail {}; {})\nsmallest root of P_(k+1)/P_k = 1: {:.3}\n",
            r.value_truncated,
            r.bracket.0,
            r.bracket.1,
            json["status"].as_str().unwrap_or_default(),
            truncate3(root)
        );
        return Ok(Rendered {
            json,
            csv,
            text,
            sidecar: None,
        });
    }
    let ell = ell.expect("checked above");
    let r = krein::lsk_check_mode(n, ell, k, KREIN_TOLERANCE, mode)?;
    let mut csv = String::from("i,j,passed,min_relative,exact_recheck\n");
    for p in &r.pairs {
        let passed = p.passed.map(|b| b.to_string()).unwrap_or_else(|| "excluded".into());
        let _ = writeln!(csv, "{},{},{},{},{}", p.i, p.j, passed, p.min_relative, p.exact_recheck);
    }
    let text = format!(
        "l-strengthened Krein condition for n = {n}, k = {k}, l = {ell}: {}{}\n",
        if r.overall { "holds" } else { "fails" },
        r.first_failure
            .map(|(i, j)| format!(" (first failing pair ({i}, {j}))"))
            .unwrap_or_default()
    );
    Ok(Rendered {
        json: to_value(&r)?,
        csv,
        text,
        sidecar: None,
    })
}

/// Runs a parsed command and renders all formats.
pub fn execute(cli: &Cli) -> Result<Rendered> {
    let rendered = match &cli.command {
        Command::Bound {
            n,
            ell,
            s,
            k,
            dump_certificate,
        } => cmd_bound(*n, *ell, *s, *k, dump_certificate.clone()),
        Command::U4 { n, ell, s } => cmd_u4(*n, *ell, *s),
        Command::Table {
            n_min,
            n_max,
            k_min,
            k_max,
            step,
            sidecar,
        } => cmd_table(
            (*n_min, *n_max),
            (*k_min, *k_max),
            *step,
            sidecar.clone(),
            cli.global.output.as_deref().filter(|_| cli.global.format == Format::Csv),
        ),
        Command::Figure {
            n,
            ell,
            points,
            s_min,
            s_max,
        } => cmd_figure(*n, *ell, *points, *s_min, *s_max),
        Command::Energy {
            n,
            m,
            ell,
            potential,
            grid,
        } => cmd_energy(*n, m, *ell, potential, *grid),
        Command::Krein {
            n,
            k,
            ell,
            sweep,
            scan,
            pairs,
            step,
        } => cmd_krein(*n, *k, *ell, *sweep, *scan, *pairs, *step),
    }?;
    Ok(Rendered {
        json: envelope(cli, rendered.json),
        sidecar: rendered
            .sidecar
            .map(|(p, v)| (p, envelope(cli, v))),
        ..rendered
    })
}

/// Text of the selected format.
pub fn render(cli: &Cli, out: &Rendered) -> String {
    match cli.global.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&out.json).unwrap_or_default();
            s.push('\n');
            s
        }
        Format::Csv => out.csv.clone(),
        Format::Text => out.text.clone(),
    }
}

fn write_file(path: &Path, body: &str) -> std::io::Result<()> {
    std::fs::write(path, body)
}

/// Parses arguments, runs, writes output; returns the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let body = render(&cli, &out);
            let written = match &cli.global.output {
                Some(path) => write_file(path, &body),
                None => std::io::stdout().write_all(body.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return 3;
            }
            if let Some((path, value)) = &out.sidecar {
                let text = serde_json::to_string_pretty(value).unwrap_or_default() + "\n";
                if let Err(e) = write_file(path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return 3;
                }
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
