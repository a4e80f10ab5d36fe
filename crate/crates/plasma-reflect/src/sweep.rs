//! Parameter sweeps over (k, epsilon, alpha_p) grids with deterministic,
//! order-preserving parallel dispatch, plus the figure parameterizations and
//! the CSV/JSON/gnuplot emitters used by the command line front end.

use num_complex::Complex64;
use serde::Serialize;

use crate::asymptotics::longwave_reflectance;
use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;
use crate::reflection::amplitude_ratio;
use crate::spectrum::solve_dispersion;

/// Inclusive linear range, `count` points from `start` to `stop`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridRange {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridRange {
    pub fn fixed(v: f64) -> Self {
        Self { start: v, stop: v, count: 1 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 1 {
            return Err(Error::InvalidInput("range count must be >= 1".into()));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) || self.start > self.stop {
            return Err(Error::InvalidInput(format!(
                "bad range {}:{}:{}",
                self.start, self.stop, self.count
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        (0..self.count)
            .map(|i| {
                self.start + (self.stop - self.start) * i as f64 / (self.count - 1) as f64
            })
            .collect()
    }

    /// Logarithmically spaced values; requires positive endpoints.
    pub fn log_values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        (0..self.count)
            .map(|i| {
                self.start
                    * (self.stop / self.start).powf(i as f64 / (self.count - 1) as f64)
            })
            .collect()
    }
}

/// The four figure parameterizations of the source study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FigureId {
    Three,
    Four,
    Five,
    Six,
}

impl FigureId {
    pub fn from_number(n: u32) -> Result<Self> {
        match n {
            3 => Ok(Self::Three),
            4 => Ok(Self::Four),
            5 => Ok(Self::Five),
            6 => Ok(Self::Six),
            _ => Err(Error::InvalidInput(format!("no figure {n}; use 3..=6"))),
        }
    }

    /// Grid of (k, epsilon, alpha_p) points, ordered curve by curve.
    pub fn points(&self) -> Vec<(f64, f64, f64)> {
        let mut pts = Vec::new();
        match self {
            // R vs k at eps = 1e-2, one curve per accommodation coefficient
            FigureId::Three => {
                let ks = GridRange { start: 0.01, stop: 0.3, count: 30 }.values();
                for &alpha in &[0.1, 0.5, 1.0] {
                    for &k in &ks {
                        pts.push((k, 1e-2, alpha));
                    }
                }
            }
            // R vs eps at alpha_p = 1, one curve per wave number
            FigureId::Four => {
                let es = GridRange { start: 1e-4, stop: 1e-1, count: 25 }.log_values();
                for &k in &[0.001, 0.01, 0.05, 0.1, 0.2] {
                    for &eps in &es {
                        pts.push((k, eps, 1.0));
                    }
                }
            }
            // R vs alpha_p at eps = 1e-3, one curve per wave number
            FigureId::Five => {
                let als = GridRange { start: 0.0, stop: 1.0, count: 21 }.values();
                for &k in &[0.05, 0.1, 0.15, 0.25] {
                    for &alpha in &als {
                        pts.push((k, 1e-3, alpha));
                    }
                }
            }
            // phi vs eps at k = 0.2, one curve per accommodation coefficient
            FigureId::Six => {
                let es = GridRange { start: 1e-4, stop: 1e-1, count: 25 }.log_values();
                for &alpha in &[0.1, 0.5, 1.0] {
                    for &eps in &es {
                        pts.push((0.2, eps, alpha));
                    }
                }
            }
        }
        pts
    }
}

/// One output row of a reflection sweep. Result fields are absent when the
/// point failed; `status` says why.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepRow {
    pub k: f64,
    pub epsilon: f64,
    pub alpha_p: f64,
    pub r: Option<f64>,
    pub phi: Option<f64>,
    pub k_ratio: Option<Complex64>,
    pub eta0: Option<Complex64>,
    pub n_zeros: Option<u32>,
    pub qerr: Option<f64>,
    pub status: &'static str,
}

pub fn status_of(e: &Error) -> &'static str {
    match e {
        Error::InvalidInput(_) => "invalid-input",
        Error::OnCut { .. } => "on-cut",
        Error::QuadratureNonConvergence { .. } => "quadrature-non-convergence",
        Error::NonConvergence { .. } => "non-convergence",
        Error::NearCurveL => "near-L",
        Error::ModeAbsent => "mode-absent",
        Error::DegenerateDenominator { .. } => "degenerate-denominator",
        Error::FormulaMismatch { .. } => "formula-mismatch",
        Error::Io(_) => "io-error",
    }
}

/// Evaluates one sweep point; never panics on solver failure.
pub fn reflect_row(
    k: f64,
    epsilon: f64,
    alpha_p: f64,
    use_longwave: bool,
    spec: &QuadratureSpec,
) -> SweepRow {
    let outcome = if use_longwave {
        longwave_reflectance(k, epsilon, alpha_p, spec)
    } else {
        solve_dispersion(k, epsilon).and_then(|p| amplitude_ratio(&p, alpha_p, spec))
    };
    match outcome {
        Ok(res) => SweepRow {
            k,
            epsilon,
            alpha_p,
            r: Some(res.R),
            phi: Some(res.phi),
            k_ratio: Some(res.K),
            eta0: Some(res.eta0),
            n_zeros: Some(2),
            qerr: Some(res.quadrature_err),
            status: "ok",
        },
        Err(e) => SweepRow {
            k,
            epsilon,
            alpha_p,
            r: None,
            phi: None,
            k_ratio: None,
            eta0: None,
            n_zeros: None,
            qerr: None,
            status: status_of(&e),
        },
    }
}

/// Runs all points on a worker pool; output order follows input order
/// regardless of completion order or pool size.
pub fn run_points(
    points: &[(f64, f64, f64)],
    use_longwave: bool,
    spec: &QuadratureSpec,
    jobs: Option<usize>,
) -> Result<Vec<SweepRow>> {
    use rayon::prelude::*;
    let work = || {
        points
            .par_iter()
            .map(|&(k, eps, alpha)| reflect_row(k, eps, alpha, use_longwave, spec))
            .collect::<Vec<_>>()
    };
    match jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidInput(format!("worker pool: {e}")))?;
            Ok(pool.install(work))
        }
        None => Ok(work()),
    }
}

/// Cartesian product of the three ranges, k outermost, alpha innermost.
pub fn grid_points(
    k_range: &GridRange,
    eps_range: &GridRange,
    alpha_range: &GridRange,
) -> Result<Vec<(f64, f64, f64)>> {
    k_range.validate()?;
    eps_range.validate()?;
    alpha_range.validate()?;
    let mut pts = Vec::new();
    for &k in &k_range.values() {
        for &eps in &eps_range.values() {
            for &alpha in &alpha_range.values() {
                pts.push((k, eps, alpha));
            }
        }
    }
    Ok(pts)
}

fn fmt_opt_f64(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

fn fmt_opt_u32(v: Option<u32>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub const CSV_HEADER: &str =
    "k,epsilon,alpha_p,R,phi,K_re,K_im,eta0_re,eta0_im,n_zeros,qerr,status";

/// Fixed-format CSV: byte-identical output for identical rows.
pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(rows.len() * 200 + 128);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{},{},{},{},{},{},{},{},{}\n",
            r.k,
            r.epsilon,
            r.alpha_p,
            fmt_opt_f64(r.r),
            fmt_opt_f64(r.phi),
            fmt_opt_f64(r.k_ratio.map(|z| z.re)),
            fmt_opt_f64(r.k_ratio.map(|z| z.im)),
            fmt_opt_f64(r.eta0.map(|z| z.re)),
            fmt_opt_f64(r.eta0.map(|z| z.im)),
            fmt_opt_u32(r.n_zeros),
            fmt_opt_f64(r.qerr),
            r.status,
        ));
    }
    out
}

/// JSON array of row records (complex values as re/im pairs).
pub fn rows_to_json(rows: &[SweepRow]) -> Result<String> {
    serde_json::to_string_pretty(rows).map_err(|e| Error::Io(e.to_string()))
}

/// gnuplot script plotting the sweep CSV next to which it is written.
pub fn plot_script(figure: Option<FigureId>, csv_name: &str) -> String {
    let (x_col, x_label, y_col, y_label, logx) = match figure {
        Some(FigureId::Three) => (1, "k", 4, "R", false),
        Some(FigureId::Four) | None => (2, "epsilon", 4, "R", true),
        Some(FigureId::Five) => (3, "alpha_p", 4, "R", false),
        Some(FigureId::Six) => (2, "epsilon", 5, "phi", true),
    };
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set key autotitle columnhead\n");
    s.push_str(&format!("set xlabel '{x_label}'\n"));
    s.push_str(&format!("set ylabel '{y_label}'\n"));
    if logx {
        s.push_str("set logscale x\n");
    }
    s.push_str("set grid\n");
    s.push_str(&format!(
        "plot '{csv_name}' using {x_col}:{y_col} with linespoints title '{y_label}'\n"
    ));
    s.push_str("pause -1\n");
    s
}
