//! CSV, JSON and SVG renderings of experiment reports.
//!
//! CSV files open with a `# quantrate <kind> v<N>` line, followed by
//! `# key=value` metadata lines and a fixed column header. Floats use the
//! shortest representation that parses back to the same value, so every
//! report survives a CSV or JSON round trip unchanged.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{de::DeserializeOwned, Serialize};

use super::config::{RateMode, XGridPolicy};
use super::coverage::CoverageReport;
use super::rate::{RatePoint, RateReport};
use super::slope::SlopeFit;
use crate::error::{Error, Result};
use crate::theory::{CumulantReport, EnvelopeReport, Lemma33Report};

pub const CSV_VERSION: u32 = 1;
pub const RATE_COLUMNS: &str = "mode,n,delta,sqrt_n_delta,seed";
pub const COVERAGE_COLUMNS: &str = "level,n,R,covered,width_mean,width_median";
pub const THEORY_COLUMNS: &str = "y,t,n,value,margin";

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn header(kind: &str, meta: &[(&str, String)]) -> String {
    let mut s = format!("# quantrate {kind} v{CSV_VERSION}\n");
    for (k, v) in meta {
        let _ = writeln!(s, "# {k}={v}");
    }
    s
}

pub fn rate_to_csv(r: &RateReport) -> String {
    let mut meta = vec![
        ("model", r.model_id.clone()),
        ("p", r.p.to_string()),
        ("y", opt(r.y)),
        ("slope", r.fit.slope.to_string()),
        ("intercept", r.fit.intercept.to_string()),
        ("stderr", r.fit.stderr.to_string()),
        ("replicates", opt(r.replicates)),
        ("x_range_tau", opt(r.x_grid.map(|g| g.range_tau))),
        ("x_points", opt(r.x_grid.map(|g| g.points))),
    ];
    for note in &r.notes {
        meta.push(("note", note.replace('\n', " ")));
    }
    let mut s = header("rate", &meta);
    s.push_str(RATE_COLUMNS);
    s.push('\n');
    let seed = opt(r.master_seed);
    for p in &r.points {
        let _ = writeln!(s, "{},{},{},{},{}", r.mode.as_str(), p.n, p.delta, p.sqrt_n_delta, seed);
    }
    s
}

struct Parsed {
    meta: BTreeMap<String, String>,
    notes: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn parse_csv(text: &str, kind: &str, columns: &str) -> Result<Parsed> {
    let mut lines = text.lines();
    let first = lines.next().unwrap_or_default();
    let want = format!("# quantrate {kind} v{CSV_VERSION}");
    if first.trim_end() != want {
        return Err(Error::Config(format!("expected '{want}', found '{first}'")));
    }
    let (mut meta, mut notes, mut rows) = (BTreeMap::new(), Vec::new(), Vec::new());
    let mut seen_header = false;
    for line in lines {
        if let Some(kv) = line.strip_prefix("# ") {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("malformed metadata line '{line}'")))?;
            if k == "note" {
                notes.push(v.to_string());
            } else {
                meta.insert(k.to_string(), v.to_string());
            }
        } else if !seen_header {
            if line != columns {
                return Err(Error::Config(format!("expected columns '{columns}', found '{line}'")));
            }
            seen_header = true;
        } else if !line.is_empty() {
            rows.push(line.split(',').map(str::to_string).collect());
        }
    }
    if !seen_header {
        return Err(Error::Config("missing column header".into()));
    }
    Ok(Parsed { meta, notes, rows })
}

fn field<T: std::str::FromStr>(s: &str, name: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Config(format!("cannot parse {name} from '{s}'")))
}

fn optional<T: std::str::FromStr>(s: Option<&String>, name: &str) -> Result<Option<T>> {
    match s.map(String::as_str) {
        None | Some("") => Ok(None),
        Some(v) => field(v, name).map(Some),
    }
}

impl Parsed {
    fn get(&self, key: &str) -> Result<&str> {
        self.meta
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| Error::Config(format!("missing metadata '{key}'")))
    }
}

pub fn rate_from_csv(text: &str) -> Result<RateReport> {
    let d = parse_csv(text, "rate", RATE_COLUMNS)?;
    let mut mode = None;
    let mut seed = None;
    let mut points = Vec::with_capacity(d.rows.len());
    for row in &d.rows {
        if row.len() != 5 {
            return Err(Error::Config(format!("rate row has {} fields, expected 5", row.len())));
        }
        mode = Some(RateMode::parse(&row[0])?);
        seed = optional::<u64>(Some(&row[4]), "seed")?;
        points.push(RatePoint {
            n: field(&row[1], "n")?,
            delta: field(&row[2], "delta")?,
            sqrt_n_delta: field(&row[3], "sqrt_n_delta")?,
        });
    }
    let mode = mode.ok_or_else(|| Error::Config("rate CSV has no rows".into()))?;
    let x_range: Option<f64> = optional(d.meta.get("x_range_tau"), "x_range_tau")?;
    let x_points: Option<usize> = optional(d.meta.get("x_points"), "x_points")?;
    Ok(RateReport {
        mode,
        model_id: d.get("model")?.to_string(),
        p: field(d.get("p")?, "p")?,
        y: optional(d.meta.get("y"), "y")?,
        points,
        fit: SlopeFit {
            slope: field(d.get("slope")?, "slope")?,
            intercept: field(d.get("intercept")?, "intercept")?,
            stderr: field(d.get("stderr")?, "stderr")?,
        },
        master_seed: seed,
        replicates: optional(d.meta.get("replicates"), "replicates")?,
        x_grid: x_range
            .zip(x_points)
            .map(|(range_tau, points)| XGridPolicy { range_tau, points }),
        notes: d.notes,
    })
}

pub fn coverage_to_csv(r: &CoverageReport) -> String {
    let meta = [
        ("model", r.model_id.clone()),
        ("p", r.p.to_string()),
        ("coverage", r.coverage.to_string()),
        ("std_error", r.std_error.to_string()),
        ("failures", r.failures.to_string()),
        ("seed", r.master_seed.to_string()),
    ];
    let mut s = header("coverage", &meta);
    s.push_str(COVERAGE_COLUMNS);
    s.push('\n');
    let _ = writeln!(
        s,
        "{},{},{},{},{},{}",
        r.level, r.n, r.r, r.covered, r.width_mean, r.width_median
    );
    s
}

pub fn coverage_from_csv(text: &str) -> Result<CoverageReport> {
    let d = parse_csv(text, "coverage", COVERAGE_COLUMNS)?;
    let [row] = d.rows.as_slice() else {
        return Err(Error::Config(format!(
            "coverage CSV needs one row, found {}",
            d.rows.len()
        )));
    };
    if row.len() != 6 {
        return Err(Error::Config(format!(
            "coverage row has {} fields, expected 6",
            row.len()
        )));
    }
    Ok(CoverageReport {
        model_id: d.get("model")?.to_string(),
        p: field(d.get("p")?, "p")?,
        level: field(&row[0], "level")?,
        n: field(&row[1], "n")?,
        r: field(&row[2], "R")?,
        covered: field(&row[3], "covered")?,
        coverage: field(d.get("coverage")?, "coverage")?,
        std_error: field(d.get("std_error")?, "std_error")?,
        width_mean: field(&row[4], "width_mean")?,
        width_median: field(&row[5], "width_median")?,
        failures: field(d.get("failures")?, "failures")?,
        master_seed: field(d.get("seed")?, "seed")?,
    })
}

pub fn to_json<T: Serialize>(report: &T) -> Result<String> {
    serde_json::to_string_pretty(report).map_err(|e| Error::Config(format!("cannot serialize report: {e}")))
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Config(format!("cannot parse report: {e}")))
}

/// Contraction-bound rows: `value` is the bound `1 − (1 − |Ψ_ε(t)|)δ̂`, `n` is empty.
pub fn lemma33_to_csv(r: &Lemma33Report) -> String {
    let meta = [
        ("check", "lemma33".to_string()),
        ("p", r.p.to_string()),
        ("xi_p", r.xi_p.to_string()),
        ("g_xi", r.g_xi.to_string()),
        ("epsilon", r.epsilon.to_string()),
        ("delta_hat", r.delta_hat.to_string()),
        ("min_margin", r.min_margin().to_string()),
    ];
    let mut s = header("theory", &meta);
    s.push_str(THEORY_COLUMNS);
    s.push('\n');
    for (y, row) in r.y_points.iter().zip(&r.margins) {
        for (t, m) in r.t_grid.iter().zip(row) {
            let bound = 1.0 - (1.0 - crate::theory::psi_modulus(r.epsilon, *t)) * r.delta_hat;
            let _ = writeln!(s, "{y},{t},,{bound},{m}");
        }
    }
    s
}

/// Taylor rows: `value` is the residual, `margin` the `√n`-scaled residual.
pub fn taylor_to_csv(y: f64, reports: &[CumulantReport]) -> String {
    let mut s = header("theory", &[("check", "taylor".to_string()), ("y", y.to_string())]);
    s.push_str(THEORY_COLUMNS);
    s.push('\n');
    for r in reports {
        for ((t, v), sc) in r.t_grid.iter().zip(&r.residuals).zip(&r.scaled) {
            let _ = writeln!(s, "{y},{t},{},{v},{sc}", r.n);
        }
    }
    s
}

/// Envelope rows: `value` is `|H_n(t)|`, `margin` its ratio to `exp(−t²/2)`.
pub fn envelope_to_csv(r: &EnvelopeReport) -> String {
    let mut s = header("theory", &[("check", "envelope".to_string())]);
    s.push_str(THEORY_COLUMNS);
    s.push('\n');
    for pt in &r.points {
        let _ = writeln!(s, "{},{},{},{},{}", r.y, pt.t, r.n, pt.modulus, pt.ratio);
    }
    s
}

/// Log-log plot of `Δ_n` against `n` with the fitted line.
pub fn rate_svg(r: &RateReport) -> String {
    let (w, h, m) = (640.0, 440.0, 60.0);
    let xs: Vec<f64> = r.points.iter().map(|p| (p.n as f64).log10()).collect();
    let ys: Vec<f64> = r
        .points
        .iter()
        .map(|p| p.delta.max(f64::MIN_POSITIVE).log10())
        .collect();
    let fit_at = |lx: f64| (r.fit.intercept + r.fit.slope * lx * std::f64::consts::LN_10) / std::f64::consts::LN_10;
    let span = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let pad = ((hi - lo) * 0.08).max(0.05);
        (lo - pad, hi + pad)
    };
    let (x0, x1) = span(&xs);
    let fitted: Vec<f64> = [x0, x1].iter().map(|&x| fit_at(x)).chain(ys.iter().copied()).collect();
    let (y0, y1) = span(&fitted);
    let px = |x: f64| m + (x - x0) / (x1 - x0) * (w - 2.0 * m);
    let py = |y: f64| h - m - (y - y0) / (y1 - y0) * (h - 2.0 * m);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{m}" y="{m}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        w - 2.0 * m,
        h - 2.0 * m
    );
    for k in (x0.ceil() as i32)..=(x1.floor() as i32) {
        let x = px(k as f64);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.1}" y1="{}" x2="{x:.1}" y2="{}" stroke="black"/>"#,
            h - m,
            h - m + 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{x:.1}" y="{}" text-anchor="middle">1e{k}</text>"#,
            h - m + 18.0
        );
    }
    for k in (y0.ceil() as i32)..=(y1.floor() as i32) {
        let y = py(k as f64);
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{y:.1}" x2="{m}" y2="{y:.1}" stroke="black"/>"#,
            m - 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{:.1}" text-anchor="end">1e{k}</text>"#,
            m - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="steelblue" stroke-width="1.5"/>"#,
        px(x0),
        py(fit_at(x0)),
        px(x1),
        py(fit_at(x1))
    );
    for (x, y) in xs.iter().zip(&ys) {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.1}" cy="{:.1}" r="4" fill="firebrick"/>"#,
            px(*x),
            py(*y)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">n</text>"#,
        w / 2.0,
        h - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{} {} p={}: slope {:.3} ± {:.3}</text>"#,
        w / 2.0,
        m - 20.0,
        r.model_id,
        r.mode.as_str(),
        r.p,
        r.fit.slope,
        r.fit.stderr
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{}" transform="rotate(-90 18 {})" text-anchor="middle">Δn</text>"#,
        h / 2.0,
        h / 2.0
    );
    s.push_str("</svg>\n");
    s
}
