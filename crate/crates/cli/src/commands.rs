//! The five subcommands. Each has a `run_*` function returning structured
//! results (used directly by the test suites) and a `cmd_*` wrapper that
//! renders them.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use hdnet_core::quality::DEFAULT_NODE_LIMIT;
use hdnet_core::{
    apply_shift, default_shift_depth, exact_t_value, generate_points, interlace,
    interlaced_t_bound, min_dick_metric, rms_wce_mc, sample_shift_indexed, theoretical_bound,
    worst_case_error_floats, write_matrices, CtauMode, GeneratingMatrices, KernelParams,
    MinDickMetric, PointSet,
};

use crate::args::{BoundArgs, ConvergeArgs, GenArgs, IntegrateArgs, OutputFormat, VerifyArgs};
use crate::build::{build_matrices, build_sweep_net, parse_gamma, GeneratorKind};
use crate::error::{CliError, CliResult};
use crate::fit::{fit_rate, Fit};
use crate::integrands::Integrand;
use crate::output::{write_csv, write_json, Report, SCHEMA_VERSION};

/// Commands refuse configurations above this many kernel evaluations.
pub const KERNEL_EVAL_GUARD: f64 = 1e10;

const MC_SEED_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

fn ctau_mode(literal: bool) -> CtauMode {
    if literal {
        CtauMode::Literal
    } else {
        CtauMode::PiOverB
    }
}

fn check_m_range(m_min: usize, m_max: usize) -> CliResult<()> {
    if m_min == 0 || m_min > m_max {
        return Err(CliError::invalid(format!(
            "need 1 <= m-min <= m-max, got {}..{}",
            m_min, m_max
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------- gen

pub struct GenOutcome {
    pub net: GeneratingMatrices,
    pub points: Option<PointSet>,
}

pub fn run_gen(args: &GenArgs) -> CliResult<GenOutcome> {
    let kind = GeneratorKind::parse(&args.generator)?;
    let raw = match (&kind, args.m) {
        (GeneratorKind::File(_), _) => build_matrices(&kind, args.b, args.s, 0)?,
        (_, Some(m)) if m > 0 => build_matrices(&kind, args.b, args.s, m)?,
        _ => return Err(CliError::invalid("--m must be given and positive")),
    };
    let net = if args.interlace > 1 {
        interlace(&raw, args.interlace)?
    } else {
        raw
    };
    let points = if args.points_out.is_some() {
        Some(generate_points(&net)?)
    } else {
        None
    };
    Ok(GenOutcome { net, points })
}

pub fn cmd_gen(args: &GenArgs) -> CliResult<()> {
    let out = run_gen(args)?;
    match &args.out {
        Some(path) => {
            let mut f = std::fs::File::create(path)
                .map_err(|e| CliError::invalid(format!("cannot create {}: {}", path.display(), e)))?;
            write_matrices(&out.net, &mut f)?;
        }
        None => {
            let stdout = std::io::stdout();
            write_matrices(&out.net, &mut stdout.lock())?;
        }
    }
    if let (Some(path), Some(points)) = (&args.points_out, &out.points) {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path).map_err(|e| {
            CliError::invalid(format!("cannot create {}: {}", path.display(), e))
        })?);
        let floats = points.to_floats();
        let s = points.dimension();
        for h in 0..points.len() {
            let row: Vec<String> = floats[h * s..(h + 1) * s]
                .iter()
                .map(|v| v.to_string())
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- verify

#[derive(Debug)]
pub struct VerifyOutcome {
    pub order: u32,
    pub exact_t: u64,
    pub delta: MinDickMetric,
    /// Eq-style interlacing bound on t, when the net was interlaced here.
    pub t_bound: Option<u64>,
    /// delta_alpha > alpha*m - t.
    pub delta_check: bool,
}

pub fn run_verify(args: &VerifyArgs) -> CliResult<VerifyOutcome> {
    let kind = GeneratorKind::parse(&args.generator)?;
    let raw = match (&kind, args.m) {
        (GeneratorKind::File(_), _) => build_matrices(&kind, args.b, args.s, 0)?,
        (_, Some(m)) if m > 0 => build_matrices(&kind, args.b, args.s, m)?,
        _ => return Err(CliError::invalid("--m must be given and positive")),
    };
    let factor = args.interlace.max(1);
    let order = args.alpha.unwrap_or(factor as u32);
    let (net, t_bound) = if factor > 1 {
        if raw.dimension() % factor != 0 {
            return Err(CliError::invalid(format!(
                "cannot interlace {} matrices by factor {}",
                raw.dimension(),
                factor
            )));
        }
        let t_source = exact_t_value(&raw, 1, DEFAULT_NODE_LIMIT)?;
        let s_out = raw.dimension() / factor;
        let bound = interlaced_t_bound(t_source as usize, factor, s_out, raw.cols()) as u64;
        (interlace(&raw, factor)?, Some(bound))
    } else {
        (raw, None)
    };
    if net.rows() < order as usize * net.cols() {
        eprintln!(
            "note: digit depth {} below order*m = {}; order-{} verification is weaker than usual",
            net.rows(),
            order as usize * net.cols(),
            order
        );
    }
    let exact_t = exact_t_value(&net, order, DEFAULT_NODE_LIMIT)?;
    let budget = args.dual_budget.unwrap_or(net.rows() as u64);
    let delta = min_dick_metric(&net, order, budget)?;
    let delta_check = delta.value > order as u64 * net.cols() as u64 - exact_t;
    Ok(VerifyOutcome {
        order,
        exact_t,
        delta,
        t_bound,
        delta_check,
    })
}

pub fn cmd_verify(args: &VerifyArgs) -> CliResult<()> {
    let v = run_verify(args)?;
    println!("order: {}", v.order);
    println!("exact t-value: {}", v.exact_t);
    println!(
        "minimum Dick metric delta_{}: {}{}{}",
        v.order,
        v.delta.value,
        if v.delta.exact { "" } else { " (upper bound only)" },
        if v.delta.cap_bound {
            " [truncated at the depth cap]"
        } else {
            ""
        },
    );
    if let Some(bound) = v.t_bound {
        println!(
            "interlacing t bound: {} -> exact t <= bound: {}",
            bound,
            if v.exact_t <= bound { "PASS" } else { "FAIL" }
        );
    }
    println!(
        "delta > order*m - t: {}",
        if v.delta_check { "PASS" } else { "FAIL" }
    );
    Ok(())
}

// ---------------------------------------------------------------- converge

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRecord {
    pub m: usize,
    pub n_points: u64,
    pub rms: f64,
    pub rms_std_error: f64,
    pub best_shift_error: f64,
    pub bound: Option<f64>,
    pub mc_rms: f64,
    /// Wall-clock seconds; excluded from reproducibility comparisons.
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergeConfig {
    pub generator: String,
    pub b: u8,
    pub alpha: u32,
    pub beta: Option<u32>,
    pub s: usize,
    pub interlace: usize,
    pub m_min: usize,
    pub m_max: usize,
    pub shifts: u32,
    pub seed: u64,
    pub gamma: String,
    pub ctau: &'static str,
    pub fit_from: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RateSummary {
    pub fit_from_m: usize,
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    /// Slope after dividing the error by (log N)^((s-1)/2).
    pub slope_log_corrected: Option<f64>,
}

pub struct ConvergeOutcome {
    pub config: ConvergeConfig,
    pub records: Vec<ConvergenceRecord>,
    pub summary: RateSummary,
}

/// RMS worst-case error of plain Monte Carlo point sets of the same size,
/// deterministic in (seed, m, replicate).
fn mc_baseline(params: &KernelParams, n: usize, r: u32, seed: u64, m: usize) -> CliResult<f64> {
    let s = params.dimension();
    let errors: Vec<f64> = (0..r as u64)
        .into_par_iter()
        .map(|rep| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ MC_SEED_SALT);
            rng.set_stream((m as u64) << 32 | rep);
            let coords: Vec<f64> = (0..n * s).map(|_| rng.random::<f64>()).collect();
            worst_case_error_floats(params, &coords, n)
        })
        .collect::<Result<_, _>>()?;
    Ok((errors.iter().map(|e| e * e).sum::<f64>() / r as f64).sqrt())
}

fn converge_config(args: &ConvergeArgs, factor: usize, fit_from: usize) -> ConvergeConfig {
    ConvergeConfig {
        generator: args.generator.clone(),
        b: args.b,
        alpha: args.alpha,
        beta: args.beta,
        s: args.s,
        interlace: factor,
        m_min: args.m_min,
        m_max: args.m_max,
        shifts: args.r,
        seed: args.seed,
        gamma: args.gamma.clone().unwrap_or_else(|| "product:1".into()),
        ctau: if args.ctau_literal { "literal" } else { "pi-over-b" },
        fit_from,
    }
}

pub fn run_converge(args: &ConvergeArgs) -> CliResult<ConvergeOutcome> {
    check_m_range(args.m_min, args.m_max)?;
    if args.r < 2 {
        return Err(CliError::invalid("--R must be at least 2"));
    }
    let kind = GeneratorKind::parse(&args.generator)?;
    let factor = match args.beta {
        Some(beta) => {
            if beta < 2 * args.alpha {
                return Err(CliError::invalid(format!(
                    "the error bound needs beta >= 2*alpha, got alpha={} beta={}",
                    args.alpha, beta
                )));
            }
            let factor = args.interlace.unwrap_or(beta as usize);
            if factor != beta as usize {
                return Err(CliError::invalid(
                    "bound evaluation needs the interlacing factor to equal beta",
                ));
            }
            factor
        }
        None => args.interlace.unwrap_or(1),
    };
    let weights = parse_gamma(args.gamma.as_deref(), args.s)?;
    let params = KernelParams::new(args.alpha, weights.clone())?;
    let mode = ctau_mode(args.ctau_literal);

    let evals: f64 = (args.m_min..=args.m_max)
        .map(|m| {
            let n = (args.b as f64).powi(m as i32);
            2.0 * args.r as f64 * n * n * args.s as f64
        })
        .sum();
    if evals > KERNEL_EVAL_GUARD {
        return Err(CliError::CostGuard(format!(
            "estimated {:.2e} kernel evaluations exceed the {:.0e} cap",
            evals, KERNEL_EVAL_GUARD
        )));
    }

    let mut records = Vec::new();
    for m in args.m_min..=args.m_max {
        let start = Instant::now();
        let sweep = build_sweep_net(&kind, args.b, args.s, factor, m)?;
        let points = generate_points(&sweep.net)?;
        let est = rms_wce_mc(&params, &points, args.r, args.seed)?;
        let best = est
            .per_shift_errors
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        let bound = match args.beta {
            Some(beta) => Some(theoretical_bound(
                args.alpha,
                beta,
                sweep.net.base(),
                sweep.t_certified,
                m as u32,
                &weights,
                mode,
            )?),
            None => None,
        };
        let mc_rms = mc_baseline(&params, points.len(), args.r, args.seed, m)?;
        records.push(ConvergenceRecord {
            m,
            n_points: points.len() as u64,
            rms: est.estimate,
            rms_std_error: est.std_error,
            best_shift_error: best,
            bound,
            mc_rms,
            wall_time_s: start.elapsed().as_secs_f64(),
        });
    }

    let fit_from = args
        .fit_from
        .unwrap_or_else(|| (args.m_min + 1).min(args.m_max));
    let fit_points: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.m >= fit_from)
        .map(|r| (r.n_points as f64, r.rms))
        .collect();
    let fit = fit_rate(&fit_points).ok();
    let corrected: Vec<(f64, f64)> = fit_points
        .iter()
        .map(|&(n, e)| (n, e / n.ln().powf((args.s as f64 - 1.0) / 2.0)))
        .collect();
    let fit_corr = fit_rate(&corrected).ok();
    let summary = RateSummary {
        fit_from_m: fit_from,
        slope: fit.map(|f| f.slope),
        intercept: fit.map(|f| f.intercept),
        slope_log_corrected: fit_corr.map(|f| f.slope),
    };
    Ok(ConvergeOutcome {
        config: converge_config(args, factor, fit_from),
        records,
        summary,
    })
}

pub fn cmd_converge(args: &ConvergeArgs) -> CliResult<()> {
    let start = Instant::now();
    let out = run_converge(args)?;
    match args.format {
        OutputFormat::Csv => {
            write_csv(&out.records, args.out.as_deref())?;
            if let (Some(slope), Some(corr)) =
                (out.summary.slope, out.summary.slope_log_corrected)
            {
                eprintln!(
                    "fitted slope (m >= {}): {:.4}; log-corrected: {:.4}",
                    out.summary.fit_from_m, slope, corr
                );
            }
        }
        OutputFormat::Json => write_json(
            &Report {
                schema: SCHEMA_VERSION,
                command: "converge",
                config: out.config,
                records: out.records,
                summary: Some(out.summary),
                total_seconds: start.elapsed().as_secs_f64(),
            },
            args.out.as_deref(),
        )?,
    }
    Ok(())
}

// ---------------------------------------------------------------- integrate

#[derive(Debug, Clone, Serialize)]
pub struct IntegrationRecord {
    pub m: usize,
    pub n_points: u64,
    pub mean_abs_error: f64,
    pub exact_value: f64,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct IntegrateConfig {
    pub integrand: String,
    pub generator: String,
    pub b: u8,
    pub s: usize,
    pub interlace: usize,
    pub m_min: usize,
    pub m_max: usize,
    pub shifts: u32,
    pub seed: u64,
    pub fit_from: usize,
}

pub struct IntegrateOutcome {
    pub config: IntegrateConfig,
    pub records: Vec<IntegrationRecord>,
    pub summary: RateSummary,
}

pub fn run_integrate(args: &IntegrateArgs) -> CliResult<IntegrateOutcome> {
    check_m_range(args.m_min, args.m_max)?;
    if args.r < 1 {
        return Err(CliError::invalid("--R must be at least 1"));
    }
    let f = Integrand::from_id(&args.integrand)?;
    let kind = GeneratorKind::parse(&args.generator)?;
    let factor = args.interlace.max(1);
    let exact = f.exact_integral(args.s);

    let mut records = Vec::new();
    for m in args.m_min..=args.m_max {
        let start = Instant::now();
        let sweep = build_sweep_net(&kind, args.b, args.s, factor, m)?;
        let points = generate_points(&sweep.net)?;
        let depth = default_shift_depth(points.base(), points.digit_depth());
        let errors: Vec<f64> = (0..args.r as u64)
            .into_par_iter()
            .map(|idx| -> CliResult<f64> {
                let sigma = sample_shift_indexed(args.seed, idx, points.base(), args.s, depth);
                let shifted = apply_shift(&points, &sigma)?;
                let floats = shifted.to_floats();
                let mean = (0..shifted.len())
                    .map(|h| f.eval(&floats[h * args.s..(h + 1) * args.s]))
                    .sum::<f64>()
                    / shifted.len() as f64;
                Ok((mean - exact).abs())
            })
            .collect::<CliResult<_>>()?;
        records.push(IntegrationRecord {
            m,
            n_points: points.len() as u64,
            mean_abs_error: errors.iter().sum::<f64>() / errors.len() as f64,
            exact_value: exact,
            wall_time_s: start.elapsed().as_secs_f64(),
        });
    }

    let fit_from = args
        .fit_from
        .unwrap_or_else(|| (args.m_min + 1).min(args.m_max));
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.m >= fit_from)
        .map(|r| (r.n_points as f64, r.mean_abs_error))
        .collect();
    let fit: Option<Fit> = fit_rate(&pts).ok();
    let summary = RateSummary {
        fit_from_m: fit_from,
        slope: fit.map(|f| f.slope),
        intercept: fit.map(|f| f.intercept),
        slope_log_corrected: None,
    };
    Ok(IntegrateOutcome {
        config: IntegrateConfig {
            integrand: args.integrand.clone(),
            generator: args.generator.clone(),
            b: args.b,
            s: args.s,
            interlace: factor,
            m_min: args.m_min,
            m_max: args.m_max,
            shifts: args.r,
            seed: args.seed,
            fit_from,
        },
        records,
        summary,
    })
}

pub fn cmd_integrate(args: &IntegrateArgs) -> CliResult<()> {
    let start = Instant::now();
    let out = run_integrate(args)?;
    match args.format {
        OutputFormat::Csv => {
            write_csv(&out.records, args.out.as_deref())?;
            if let Some(slope) = out.summary.slope {
                eprintln!("fitted slope (m >= {}): {:.4}", out.summary.fit_from_m, slope);
            }
        }
        OutputFormat::Json => write_json(
            &Report {
                schema: SCHEMA_VERSION,
                command: "integrate",
                config: out.config,
                records: out.records,
                summary: Some(out.summary),
                total_seconds: start.elapsed().as_secs_f64(),
            },
            args.out.as_deref(),
        )?,
    }
    Ok(())
}

// ---------------------------------------------------------------- bound

#[derive(Debug, Clone, Serialize)]
pub struct BoundRecord {
    pub m: usize,
    pub n_points: u64,
    pub t: u64,
    pub t1: u64,
    pub bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundConfig {
    pub generator: String,
    pub b: u8,
    pub alpha: u32,
    pub beta: u32,
    pub s: usize,
    pub interlace: usize,
    pub m_min: usize,
    pub m_max: usize,
    pub gamma: String,
    pub ctau: &'static str,
}

pub struct BoundOutcome {
    pub config: BoundConfig,
    pub records: Vec<BoundRecord>,
}

pub fn run_bound(args: &BoundArgs) -> CliResult<BoundOutcome> {
    check_m_range(args.m_min, args.m_max)?;
    if args.beta < 2 * args.alpha {
        return Err(CliError::invalid(format!(
            "the error bound needs beta >= 2*alpha, got alpha={} beta={}",
            args.alpha, args.beta
        )));
    }
    let factor = args.interlace.unwrap_or(args.beta as usize);
    if factor != args.beta as usize {
        return Err(CliError::invalid(
            "bound evaluation needs the interlacing factor to equal beta",
        ));
    }
    let kind = GeneratorKind::parse(&args.generator)?;
    let weights = parse_gamma(args.gamma.as_deref(), args.s)?;
    let mode = ctau_mode(args.ctau_literal);
    let mut records = Vec::new();
    for m in args.m_min..=args.m_max {
        let sweep = build_sweep_net(&kind, args.b, args.s, factor, m)?;
        let bound = theoretical_bound(
            args.alpha,
            args.beta,
            sweep.net.base(),
            sweep.t_certified,
            m as u32,
            &weights,
            mode,
        )?;
        records.push(BoundRecord {
            m,
            n_points: (sweep.net.base() as u64).pow(m as u32),
            t: sweep.t_certified,
            t1: sweep.t_certified.div_ceil(args.beta as u64),
            bound,
        });
    }
    Ok(BoundOutcome {
        config: BoundConfig {
            generator: args.generator.clone(),
            b: args.b,
            alpha: args.alpha,
            beta: args.beta,
            s: args.s,
            interlace: factor,
            m_min: args.m_min,
            m_max: args.m_max,
            gamma: args.gamma.clone().unwrap_or_else(|| "product:1".into()),
            ctau: if args.ctau_literal { "literal" } else { "pi-over-b" },
        },
        records,
    })
}

pub fn cmd_bound(args: &BoundArgs) -> CliResult<()> {
    let start = Instant::now();
    let out = run_bound(args)?;
    match args.format {
        OutputFormat::Csv => write_csv(&out.records, args.out.as_deref())?,
        OutputFormat::Json => write_json(
            &Report::<_, _, ()> {
                schema: SCHEMA_VERSION,
                command: "bound",
                config: out.config,
                records: out.records,
                summary: None,
                total_seconds: start.elapsed().as_secs_f64(),
            },
            args.out.as_deref(),
        )?,
    }
    Ok(())
}
