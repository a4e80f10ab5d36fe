//! Command line front end: single-point reflection, figure sweeps, zero
//! counting, the domain-boundary curve and dispersion-relation grids.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use plasma_reflect::error::Error;
use plasma_reflect::quadrature::QuadratureSpec;
use plasma_reflect::reflection::{amplitude_ratio, flow_diagnostics};
use plasma_reflect::spectrum::{domain_curve, find_eta0, solve_dispersion, tau_curve_onset};
use plasma_reflect::sweep::{
    grid_points, plot_script, rows_to_csv, rows_to_json, run_points, status_of, FigureId,
    GridRange,
};

#[derive(Parser)]
#[command(name = "plasma-reflect", version, about = "Plasma-wave reflectance from a degenerate-plasma half-space")]
struct Cli {
    /// Optional key=value config file mirroring the flags; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Relative quadrature tolerance override.
    #[arg(long)]
    tol: Option<f64>,
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Reflectance and phase at a single (k, eps, alpha) point.
    Reflect {
        #[arg(long)]
        k: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        /// Use the long-wave parameter formulas instead of the exact solve.
        #[arg(long)]
        longwave: bool,
        /// Include conservation-law diagnostics in the output record.
        #[arg(long)]
        diagnostics: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Sweep a (k, eps, alpha) grid or reproduce a figure parameterization.
    Sweep {
        /// Figure to reproduce: 3, 4, 5 or 6.
        #[arg(long, conflicts_with_all = ["k_range", "eps_range", "alpha_range"])]
        figure: Option<u32>,
        /// k range as start:stop:count.
        #[arg(long)]
        k_range: Option<String>,
        #[arg(long)]
        eps_range: Option<String>,
        #[arg(long)]
        alpha_range: Option<String>,
        /// Fixed values, used when the corresponding range is omitted.
        #[arg(long)]
        k: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        longwave: bool,
        /// Worker pool size; machine parallelism when omitted.
        #[arg(long)]
        jobs: Option<usize>,
        /// Emit a gnuplot script next to the CSV output.
        #[arg(long)]
        plot_script: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Zero count and plasma-mode location at a single (k, eps) point.
    Zeros {
        #[arg(long)]
        k: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// The domain-boundary curve L in the (gamma, eps) plane.
    DomainCurve {
        /// Number of tau points.
        #[arg(long, default_value_t = 400)]
        points: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Dispersion solve gamma(k, eps) over a (k, eps) grid.
    DispersionGrid {
        #[arg(long)]
        k_range: Option<String>,
        #[arg(long)]
        eps_range: Option<String>,
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn load_config(path: &Path) -> Result<HashMap<String, String>, Error> {
    let text = std::fs::read_to_string(path)?;
    let mut map = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidInput(format!(
                "{}:{}: expected key=value",
                path.display(),
                lineno + 1
            ))
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

struct Config(HashMap<String, String>);

impl Config {
    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, Error> {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::InvalidInput(format!("config: bad value for {key}: {v}"))),
        }
    }

    fn flag(&self, key: &str) -> bool {
        matches!(self.0.get(key).map(String::as_str), Some("true") | Some("1"))
    }
}

fn parse_range(s: &str) -> Result<GridRange, Error> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::InvalidInput(format!("range must be start:stop:count, got {s}"));
    match parts.as_slice() {
        [a, b, n] => {
            let r = GridRange {
                start: a.parse().map_err(|_| bad())?,
                stop: b.parse().map_err(|_| bad())?,
                count: n.parse().map_err(|_| bad())?,
            };
            r.validate()?;
            Ok(r)
        }
        [a] => Ok(GridRange::fixed(a.parse().map_err(|_| bad())?)),
        _ => Err(bad()),
    }
}

fn quad_spec(tol: Option<f64>) -> Result<QuadratureSpec, Error> {
    let mut spec = QuadratureSpec::default();
    if let Some(t) = tol {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::InvalidInput(format!("tol must be in (0, 1), got {t}")));
        }
        spec.rel_tol = t;
        spec.abs_tol = t * 1e-2;
    }
    spec.max_subdivisions = 400;
    Ok(spec)
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(Into::into),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

// exit 2: invalid input; exit 3: solver failure
fn exit_code_for(e: &Error) -> ExitCode {
    match e {
        Error::InvalidInput(_) | Error::Io(_) => ExitCode::from(2),
        _ => ExitCode::from(3),
    }
}

fn complex_json(z: num_complex::Complex64) -> serde_json::Value {
    json!({ "re": z.re, "im": z.im })
}

fn required<T>(v: Option<T>, name: &str) -> Result<T, Error> {
    v.ok_or_else(|| Error::InvalidInput(format!("missing required parameter --{name}")))
}

fn run(cli: Cli) -> Result<(), Error> {
    let cfg = Config(match &cli.config {
        Some(p) => load_config(p)?,
        None => HashMap::new(),
    });

    match cli.command {
        Command::Reflect { k, eps, alpha, longwave, diagnostics, common } => {
            let k = required(k.or(cfg.get("k")?), "k")?;
            let eps = required(eps.or(cfg.get("eps")?), "eps")?;
            let alpha = required(alpha.or(cfg.get("alpha")?), "alpha")?;
            let longwave = longwave || cfg.flag("longwave");
            let diagnostics = diagnostics || cfg.flag("diagnostics");
            let spec = quad_spec(common.tol.or(cfg.get("tol")?))?;
            let result = if longwave {
                plasma_reflect::asymptotics::longwave_reflectance(k, eps, alpha, &spec)?
            } else {
                let p = solve_dispersion(k, eps)?;
                amplitude_ratio(&p, alpha, &spec)?
            };
            let mut record = json!({
                "k": k,
                "epsilon": eps,
                "alpha_p": alpha,
                "longwave": longwave,
                "R": result.R,
                "phi": result.phi,
                "K": complex_json(result.K),
                "eta0": complex_json(result.eta0),
                "gamma": complex_json(result.params.gamma),
                "Qm": complex_json(result.Qm),
                "quadrature_err": result.quadrature_err,
            });
            if diagnostics {
                let d = flow_diagnostics(&result, &spec)?;
                record["diagnostics"] = json!({
                    "P_i": complex_json(d.p_i),
                    "P_r": complex_json(d.p_r),
                    "P_s": complex_json(d.p_s),
                    "A1": complex_json(d.a1),
                    "e0_residual": d.e0_residual,
                    "balance_residual": d.balance_residual,
                    "balance_rel": d.balance_rel,
                    "momentum_residual": d.momentum_residual,
                });
            }
            let text = match common.format {
                Some(Format::Csv) => {
                    let row = plasma_reflect::sweep::reflect_row(k, eps, alpha, longwave, &spec);
                    rows_to_csv(&[row])
                }
                _ => serde_json::to_string_pretty(&record)
                    .map_err(|e| Error::Io(e.to_string()))?,
            };
            write_out(&common.out, &text)
        }

        Command::Sweep {
            figure,
            k_range,
            eps_range,
            alpha_range,
            k,
            eps,
            alpha,
            longwave,
            jobs,
            plot_script: want_plot,
            common,
        } => {
            let figure = match figure.or(cfg.get("figure")?) {
                Some(n) => Some(FigureId::from_number(n)?),
                None => None,
            };
            let (points, fig) = match figure {
                Some(f) => (f.points(), Some(f)),
                None => {
                    let range_of = |flag: Option<String>,
                                    fixed: Option<f64>,
                                    key: &str|
                     -> Result<GridRange, Error> {
                        let from_cfg: Option<String> = cfg.get(&format!("{key}-range"))?;
                        if let Some(s) = flag.or(from_cfg) {
                            parse_range(&s)
                        } else if let Some(v) = fixed.or(cfg.get(key)?) {
                            Ok(GridRange::fixed(v))
                        } else {
                            Err(Error::InvalidInput(format!(
                                "sweep needs --figure or --{key}-range/--{key}"
                            )))
                        }
                    };
                    let kr = range_of(k_range, k, "k")?;
                    let er = range_of(eps_range, eps, "eps")?;
                    let ar = range_of(alpha_range, alpha, "alpha")?;
                    (grid_points(&kr, &er, &ar)?, None)
                }
            };
            let longwave = longwave || cfg.flag("longwave");
            let spec = quad_spec(common.tol.or(cfg.get("tol")?))?;
            let jobs = jobs.or(cfg.get("jobs")?);
            let rows = run_points(&points, longwave, &spec, jobs)?;
            let format = common.format.unwrap_or(Format::Csv);
            let text = match format {
                Format::Csv => rows_to_csv(&rows),
                Format::Json => rows_to_json(&rows)?,
            };
            write_out(&common.out, &text)?;
            if want_plot || cfg.flag("plot-script") {
                match &common.out {
                    Some(path) => {
                        let csv_name = path
                            .file_name()
                            .map(|s| s.to_string_lossy().into_owned())
                            .unwrap_or_else(|| "sweep.csv".into());
                        let script = plot_script(fig, &csv_name);
                        std::fs::write(path.with_extension("gp"), script)?;
                    }
                    None => eprintln!("--plot-script needs --out; skipped"),
                }
            }
            Ok(())
        }

        Command::Zeros { k, eps, common } => {
            let k = required(k.or(cfg.get("k")?), "k")?;
            let eps = required(eps.or(cfg.get("eps")?), "eps")?;
            let p = solve_dispersion(k, eps)?;
            let s = find_eta0(&p, None)?;
            let record = json!({
                "k": k,
                "epsilon": eps,
                "gamma": complex_json(p.gamma),
                "n_zeros": s.n_zeros,
                "winding_index": s.winding_index,
                "eta0": s.eta0.map(complex_json),
                "residual": s.residual,
                "newton_iters": s.newton_iters,
            });
            let text =
                serde_json::to_string_pretty(&record).map_err(|e| Error::Io(e.to_string()))?;
            write_out(&common.out, &text)
        }

        Command::DomainCurve { points, common } => {
            if points < 2 {
                return Err(Error::InvalidInput("need at least 2 points".into()));
            }
            let onset = tau_curve_onset();
            // grade toward tau = 1 where the curve runs off to eps -> 0
            let grid: Vec<f64> = (0..points)
                .map(|i| {
                    let u_hi = 1.0 - (onset + 1e-9);
                    let u = u_hi * (1e-9f64 / u_hi).powf(i as f64 / (points - 1) as f64);
                    1.0 - u
                })
                .collect();
            let curve = domain_curve(&grid);
            let text = match common.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut s = String::from("tau,gamma_L,epsilon_L\n");
                    for p in &curve {
                        s.push_str(&format!(
                            "{:.16e},{:.16e},{:.16e}\n",
                            p.tau, p.gamma_l, p.epsilon_l
                        ));
                    }
                    s
                }
                Format::Json => {
                    serde_json::to_string_pretty(&curve).map_err(|e| Error::Io(e.to_string()))?
                }
            };
            write_out(&common.out, &text)
        }

        Command::DispersionGrid { k_range, eps_range, jobs, common } => {
            let kr = parse_range(&required(
                k_range.or(cfg.get::<String>("k-range")?),
                "k-range",
            )?)?;
            let er = parse_range(&required(
                eps_range.or(cfg.get::<String>("eps-range")?),
                "eps-range",
            )?)?;
            let jobs = jobs.or(cfg.get("jobs")?);
            let points: Vec<(f64, f64)> = kr
                .values()
                .iter()
                .flat_map(|&k| er.values().into_iter().map(move |e| (k, e)))
                .collect();
            let solve_row = |&(k, eps): &(f64, f64)| match solve_dispersion(k, eps) {
                Ok(p) => {
                    let eta0 = p.eta0_from_k(k).unwrap();
                    format!(
                        "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},ok\n",
                        k, eps, p.gamma.re, p.gamma.im, eta0.re, eta0.im
                    )
                }
                Err(e) => format!("{:.16e},{:.16e},,,,,{}\n", k, eps, status_of(&e)),
            };
            use rayon::prelude::*;
            let body: Vec<String> = match jobs {
                Some(n) => rayon::ThreadPoolBuilder::new()
                    .num_threads(n.max(1))
                    .build()
                    .map_err(|e| Error::InvalidInput(format!("worker pool: {e}")))?
                    .install(|| points.par_iter().map(solve_row).collect()),
                None => points.par_iter().map(solve_row).collect(),
            };
            let mut text = String::from("k,epsilon,gamma_re,gamma_im,eta0_re,eta0_im,status\n");
            text.extend(body);
            write_out(&common.out, &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let record = json!({ "error": e.to_string(), "status": status_of(&e) });
            eprintln!("{record}");
            exit_code_for(&e)
        }
    }
}
