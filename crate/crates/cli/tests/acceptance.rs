//! Acceptance suite: every criterion below prints one PASS/FAIL line and
//! asserts it. The two m-sweeps are computed once and shared.

use std::sync::OnceLock;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hdnet_cli::args::{ConvergeArgs, OutputFormat};
use hdnet_cli::commands::{run_converge, ConvergeOutcome};
use hdnet_core::quality::DEFAULT_NODE_LIMIT;
use hdnet_core::{
    apply_shift, default_shift_depth, exact_t_value, faure_matrices, generate_points, interlace,
    interlaced_t_bound, kernel, min_dick_metric, mse_upper_bound_bd, mu, rms_wce_mc,
    sample_shift_indexed, sobol_matrices, theoretical_bound, worst_case_error_floats, CtauMode,
    GeneratingMatrices, KernelParams, Weights,
};

const SEED: u64 = 20240803;

fn report(criterion: u32, pass: bool, detail: &str) {
    println!(
        "acceptance {:>2}: {} - {}",
        criterion,
        if pass { "PASS" } else { "FAIL" },
        detail
    );
    assert!(pass, "criterion {} failed: {}", criterion, detail);
}

/// The nets of criterion 1: interlaced Faure (b=5, s=2, alpha=2, m in 2..=4)
/// and interlaced base-2 Sobol' pairs (s=1, alpha=2, m in 2..=6), with their
/// brute-forced exact t-values.
struct VerifiedNet {
    net: GeneratingMatrices,
    alpha: u32,
    s: usize,
    m: usize,
    exact_t: u64,
    t_bound: u64,
}

fn criterion1_nets() -> &'static (Vec<VerifiedNet>, f64) {
    static NETS: OnceLock<(Vec<VerifiedNet>, f64)> = OnceLock::new();
    NETS.get_or_init(|| {
        let start = Instant::now();
        let mut nets = Vec::new();
        for m in 2..=4usize {
            let source = faure_matrices(5, 4, m).unwrap();
            let net = interlace(&source, 2).unwrap();
            let exact_t = exact_t_value(&net, 2, DEFAULT_NODE_LIMIT).unwrap();
            nets.push(VerifiedNet {
                net,
                alpha: 2,
                s: 2,
                m,
                exact_t,
                t_bound: interlaced_t_bound(0, 2, 2, m) as u64,
            });
        }
        for m in 2..=6usize {
            let source = sobol_matrices(2, m).unwrap();
            let net = interlace(&source, 2).unwrap();
            let exact_t = exact_t_value(&net, 2, DEFAULT_NODE_LIMIT).unwrap();
            nets.push(VerifiedNet {
                net,
                alpha: 2,
                s: 1,
                m,
                exact_t,
                t_bound: interlaced_t_bound(0, 2, 1, m) as u64,
            });
        }
        (nets, start.elapsed().as_secs_f64())
    })
}

#[test]
fn criterion_01_interlaced_t_values_meet_the_bound() {
    let (nets, seconds) = criterion1_nets();
    let ok = nets.iter().all(|n| n.exact_t <= n.t_bound);
    let worst = nets
        .iter()
        .map(|n| format!("(b={},s={},m={}): t={}<={}", n.net.base(), n.s, n.m, n.exact_t, n.t_bound))
        .collect::<Vec<_>>()
        .join(", ");
    report(
        1,
        ok && *seconds < 120.0,
        &format!("{} in {:.1}s", worst, seconds),
    );
}

#[test]
fn criterion_02_delta_exceeds_quality_bound() {
    let (nets, _) = criterion1_nets();
    let mut detail = String::new();
    let mut ok = true;
    for n in nets {
        let delta = min_dick_metric(&n.net, n.alpha, n.net.rows() as u64).unwrap();
        let floor = n.alpha as u64 * n.m as u64 - n.exact_t;
        ok &= delta.exact && delta.value > floor;
        detail.push_str(&format!(
            "(b={},s={},m={}): delta={}>{} ",
            n.net.base(),
            n.s,
            n.m,
            delta.value,
            floor
        ));
    }
    report(2, ok, detail.trim_end());
}

#[test]
fn criterion_03_metric_interpolation_fuzz() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let bases = [2u8, 3, 5];
    let mut violations = 0u64;
    let trials = 100_000;
    for _ in 0..trials {
        let k: u64 = rng.random_range(0..(1u64 << 40));
        let alpha: u32 = rng.random_range(2..=8);
        let beta: u32 = rng.random_range(alpha..=8);
        let b = bases[rng.random_range(0..bases.len())];
        let lhs = (beta as u64 - 1) * mu(alpha, k, b);
        let rhs = (alpha as u64 - 1) * mu(beta, k, b) + (beta - alpha) as u64 * mu(1, k, b);
        if lhs < rhs {
            violations += 1;
        }
    }
    report(
        3,
        violations == 0,
        &format!("{} violations in {} exact-integer trials", violations, trials),
    );
}

#[test]
fn criterion_04_kernel_identity_oracle() {
    let start = Instant::now();
    let cells: usize = 1 << 14;
    let h = 1.0 / cells as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let mut worst_rel = 0.0f64;
    for alpha in 1..=3u32 {
        let params = KernelParams::new(alpha, Weights::product(vec![1.0]).unwrap()).unwrap();
        // int int K over the unit square, shared by all point sets
        let grid: Vec<f64> = (0..cells).map(|i| (i as f64 + 0.5) * h).collect();
        let mut double = 0.0;
        for (i, &x) in grid.iter().enumerate() {
            let mut row = kernel(&params, &[x], &[x]).unwrap();
            for &y in &grid[i + 1..] {
                row += 2.0 * kernel(&params, &[x], &[y]).unwrap();
            }
            double += row;
        }
        double *= h * h;
        for _set in 0..20 {
            let pts: Vec<f64> = (0..8).map(|_| rng.random::<f64>()).collect();
            let mut cross = 0.0;
            for &x in &pts {
                let mut acc = 0.0;
                for &y in &grid {
                    acc += kernel(&params, &[x], &[y]).unwrap();
                }
                cross += acc * h;
            }
            cross *= 2.0 / pts.len() as f64;
            let mut grid_sum = 0.0;
            for &x in &pts {
                for &y in &pts {
                    grid_sum += kernel(&params, &[x], &[y]).unwrap();
                }
            }
            grid_sum /= (pts.len() * pts.len()) as f64;
            let oracle = (double - cross + grid_sum).max(0.0).sqrt();
            let direct = worst_case_error_floats(&params, &pts, pts.len()).unwrap();
            worst_rel = worst_rel.max((oracle - direct).abs() / direct);
        }
    }
    let seconds = start.elapsed().as_secs_f64();
    report(
        4,
        worst_rel < 1e-6 && seconds < 60.0,
        &format!(
            "worst relative disagreement {:.2e} over 60 sets in {:.1}s",
            worst_rel, seconds
        ),
    );
}

fn converge_args(s: usize, m_min: usize, m_max: usize, shifts: u32) -> ConvergeArgs {
    ConvergeArgs {
        generator: "sobol".into(),
        b: 2,
        alpha: 2,
        beta: Some(4),
        s,
        m_min,
        m_max,
        r: shifts,
        seed: SEED,
        interlace: None,
        gamma: None,
        out: None,
        format: OutputFormat::Csv,
        ctau_literal: false,
        fit_from: Some(m_min),
    }
}

fn sweep_s1() -> &'static (ConvergeOutcome, f64) {
    static SWEEP: OnceLock<(ConvergeOutcome, f64)> = OnceLock::new();
    SWEEP.get_or_init(|| {
        let start = Instant::now();
        let out = run_converge(&converge_args(1, 4, 12, 32)).unwrap();
        (out, start.elapsed().as_secs_f64())
    })
}

fn sweep_s2() -> &'static (ConvergeOutcome, f64) {
    static SWEEP: OnceLock<(ConvergeOutcome, f64)> = OnceLock::new();
    SWEEP.get_or_init(|| {
        let start = Instant::now();
        let out = run_converge(&converge_args(2, 4, 10, 16)).unwrap();
        (out, start.elapsed().as_secs_f64())
    })
}

#[test]
fn criterion_05_rate_reproduction_s1() {
    let (out, seconds) = sweep_s1();
    let slope = out.summary.slope.unwrap();
    report(
        5,
        (-2.4..=-1.85).contains(&slope) && *seconds < 600.0,
        &format!(
            "fitted slope {:.4} over m=4..12 (target [-2.4, -1.85]) in {:.1}s",
            slope, seconds
        ),
    );
}

#[test]
fn criterion_06_rate_reproduction_s2() {
    let (out, seconds) = sweep_s2();
    let slope = out.summary.slope_log_corrected.unwrap();
    report(
        6,
        slope <= -1.8 && *seconds < 600.0,
        &format!(
            "log-corrected slope {:.4} over m=4..10 (target <= -1.8) in {:.1}s",
            slope, seconds
        ),
    );
}

#[test]
fn criterion_07_bound_dominates_measurements() {
    let (s1, _) = sweep_s1();
    let (s2, _) = sweep_s2();
    let mut ok = true;
    for rec in s1.records.iter().chain(&s2.records) {
        ok &= rec.bound.unwrap() >= rec.rms;
        // the best-of-R shift exists below the bound as well
        ok &= rec.bound.unwrap() >= rec.best_shift_error;
    }
    // the literal sin(tau/b) reading, reported but not gated
    let weights1 = Weights::product(vec![1.0]).unwrap();
    let weights2 = Weights::product(vec![1.0, 1.0]).unwrap();
    let mut literal_ok = true;
    for (out, weights, s) in [(s1, &weights1, 1usize), (s2, &weights2, 2usize)] {
        for rec in &out.records {
            let source = sobol_matrices(4 * s, rec.m).unwrap();
            let t_src = exact_t_value(&source, 1, DEFAULT_NODE_LIMIT).unwrap();
            let t = interlaced_t_bound(t_src as usize, 4, s, rec.m) as u64;
            let lit =
                theoretical_bound(2, 4, 2, t, rec.m as u32, weights, CtauMode::Literal).unwrap();
            literal_ok &= lit >= rec.rms;
        }
    }
    report(
        7,
        ok,
        &format!(
            "pi/b-constant bound >= rms at every m: {}; literal sin(tau/b) variant dominates: {}",
            ok, literal_ok
        ),
    );
}

#[test]
fn criterion_08_dual_sum_bounds_mean_square_error() {
    let mut ok = true;
    let mut detail = String::new();
    let cases: Vec<(GeneratingMatrices, usize)> = (3..=6)
        .map(|m| (interlace(&sobol_matrices(4, m).unwrap(), 4).unwrap(), m))
        .chain((3..=5).map(|m| (interlace(&sobol_matrices(8, m).unwrap(), 4).unwrap(), m)))
        .chain((2..=3).map(|m| (interlace(&faure_matrices(5, 4, m).unwrap(), 2).unwrap(), m)))
        .collect();
    for (net, m) in cases {
        let s = net.dimension();
        let params = KernelParams::new(2, Weights::uniform_product(s, 1.0).unwrap()).unwrap();
        let points = generate_points(&net).unwrap();
        let est = rms_wce_mc(&params, &points, 64, SEED ^ 8).unwrap();
        let mean_sq = est.estimate * est.estimate;
        let bound = mse_upper_bound_bd(&params, &net, m as u64 + 10, CtauMode::PiOverB).unwrap();
        let pass = mean_sq <= bound.total();
        ok &= pass;
        detail.push_str(&format!(
            "(b={},s={},m={}): {:.3e}<={:.3e} ",
            net.base(),
            s,
            m,
            mean_sq,
            bound.total()
        ));
    }
    report(8, ok, detail.trim_end());
}

/// Cyclic Jacobi eigenvalue iteration for symmetric matrices.
fn jacobi_min_eigenvalue(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    for _sweep in 0..60 {
        let off: f64 = (0..n)
            .map(|p| (p + 1..n).map(|q| a[p][q] * a[p][q]).sum::<f64>())
            .sum();
        if off < 1e-24 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).fold(f64::INFINITY, f64::min)
}

#[test]
fn jacobi_sanity() {
    let min = jacobi_min_eigenvalue(vec![vec![2.0, 1.0], vec![1.0, 2.0]]);
    assert!((min - 1.0).abs() < 1e-12);
    let min = jacobi_min_eigenvalue(vec![
        vec![4.0, 0.0, 0.0],
        vec![0.0, -3.0, 0.0],
        vec![0.0, 0.0, 0.5],
    ]);
    assert!((min + 3.0).abs() < 1e-12);
}

#[test]
fn criterion_09_gram_matrices_are_positive_semidefinite() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let mut worst = f64::INFINITY;
    for s in 1..=3usize {
        for alpha in 1..=3u32 {
            let params = KernelParams::new(alpha, Weights::uniform_product(s, 1.0).unwrap()).unwrap();
            let pts: Vec<Vec<f64>> = (0..64)
                .map(|_| (0..s).map(|_| rng.random::<f64>()).collect())
                .collect();
            let gram: Vec<Vec<f64>> = pts
                .iter()
                .map(|x| pts.iter().map(|y| kernel(&params, x, y).unwrap()).collect())
                .collect();
            worst = worst.min(jacobi_min_eigenvalue(gram));
        }
    }
    report(
        9,
        worst >= -1e-9,
        &format!("minimum Gram eigenvalue {:.3e} over s<=3, alpha<=3", worst),
    );
}

#[test]
fn criterion_10_shifted_estimator_is_unbiased() {
    let s = 2;
    let net = sobol_matrices(s, 4).unwrap();
    let points = generate_points(&net).unwrap();
    let depth = default_shift_depth(2, points.digit_depth());
    let shifts = 1000u64;
    let mut estimates = Vec::with_capacity(shifts as usize);
    for idx in 0..shifts {
        let sigma = sample_shift_indexed(SEED ^ 10, idx, 2, s, depth);
        let shifted = apply_shift(&points, &sigma).unwrap();
        let floats = shifted.to_floats();
        let mean = (0..shifted.len())
            .map(|h| floats[h * s..(h + 1) * s].iter().map(|v| v * v).product::<f64>())
            .sum::<f64>()
            / shifted.len() as f64;
        estimates.push(mean);
    }
    let exact = (1.0 / 3.0f64).powi(s as i32);
    let mean = estimates.iter().sum::<f64>() / shifts as f64;
    let var = estimates.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>()
        / (shifts as f64 - 1.0);
    let se = (var / shifts as f64).sqrt();
    let dev = (mean - exact).abs();
    report(
        10,
        dev <= 4.0 * se,
        &format!(
            "mean estimate {:.8} vs exact {:.8}, |dev| = {:.2e} <= 4 se = {:.2e}",
            mean,
            exact,
            dev,
            4.0 * se
        ),
    );
}
