//! Explicit constants of the RMS worst-case error bound and the dual-sum
//! mean-square bound.
//!
//! For an order-beta digital (t,m,s)-net with beta >= 2*alpha, the RMS
//! worst-case error over random digital shifts obeys
//!
//! ```text
//! rms <= N^-alpha * sum_{u != 0} gamma_u^(1/2) C_u (log N)^((|u|-1)/2),
//! C_u  = b^(A t + B t1) * D^(|u|/2) * G_|u|^(1/2) * (3 / log b)^((|u|-1)/2),
//! ```
//!
//! with A = (alpha-1)/(beta-1), B = (beta-alpha)/(beta-1), t1 = ceil(t/beta),
//! and D, G the constants computed below. The mean-square error itself is
//! bounded by the truncated dual sum of [`mse_upper_bound_bd`].

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::kernel::{KernelParams, Weights};
use crate::net::GeneratingMatrices;
use crate::quality::{enumerate_dual, interpolation_coeffs, min_dick_metric};

/// Which reading of the sine argument the C_tau constants use. The
/// literature constant is sin(pi/b); the literal display reads sin(tau/b).
/// Both are exposed for sensitivity comparison and neither is resolved here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CtauMode {
    #[default]
    PiOverB,
    Literal,
}

/// C_{tau,b}: 1/(2 sin) for tau = 1 and
/// (1 + 1/b + 1/(b(b+1)))^(tau-2) / (2 sin)^tau for tau >= 2.
pub fn constant_c_tau(tau: u32, base: u8, mode: CtauMode) -> Result<f64> {
    if tau < 1 {
        return Err(Error::InvalidParameter("tau must be positive".into()));
    }
    let b = base as f64;
    let arg = match mode {
        CtauMode::PiOverB => std::f64::consts::PI / b,
        CtauMode::Literal => tau as f64 / b,
    };
    let sin = arg.sin();
    if sin <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "sin({:.4}) not positive; the literal C_tau reading breaks down at tau={} b={}",
            arg, tau, base
        )));
    }
    if tau == 1 {
        return Ok(1.0 / (2.0 * sin));
    }
    let growth = 1.0 + 1.0 / b + 1.0 / (b * (b + 1.0));
    Ok(growth.powi(tau as i32 - 2) / (2.0 * sin).powi(tau as i32))
}

/// D_{alpha,b} of the mean-square bound, with the maximizing v:
/// max_v { sum_{tau=v..alpha} C_tau^2 / b^(2(tau-v)) + 2 C_{2 alpha} / b^(2(alpha-v)) }.
pub fn constant_d(alpha: u32, base: u8, mode: CtauMode) -> Result<(f64, u32)> {
    if alpha < 1 {
        return Err(Error::InvalidParameter("alpha must be positive".into()));
    }
    let b = base as f64;
    let c2a = constant_c_tau(2 * alpha, base, mode)?;
    let mut best = f64::NEG_INFINITY;
    let mut best_v = 1;
    for v in 1..=alpha {
        let mut acc = 0.0;
        for tau in v..=alpha {
            let c = constant_c_tau(tau, base, mode)?;
            acc += c * c / b.powi(2 * (tau as i32 - v as i32));
        }
        acc += 2.0 * c2a / b.powi(2 * (alpha as i32 - v as i32));
        if acc > best {
            best = acc;
            best_v = v;
        }
    }
    Ok((best, best_v))
}

/// G_{alpha,beta,b,|u|} of the dual-sum tail:
/// (b-1)^c [ (b^2B/(b^2B - 1))^c + b (1/(b^2B - b))^c ], needing beta >= 2 alpha
/// so that b^2B > b.
pub fn constant_g(alpha: u32, beta: u32, base: u8, cardinality: usize) -> Result<f64> {
    if alpha < 1 || beta < 2 * alpha {
        return Err(Error::InvalidParameter(format!(
            "G constant needs beta >= 2*alpha, got alpha={} beta={}",
            alpha, beta
        )));
    }
    let coeffs = interpolation_coeffs(alpha.max(2), beta)?;
    let two_b = 2.0 * coeffs.b.to_f64().expect("small rational");
    let b = base as f64;
    let pw = b.powf(two_b);
    debug_assert!(pw > b);
    let c = cardinality as i32;
    Ok((b - 1.0).powi(c) * ((pw / (pw - 1.0)).powi(c) + b * (pw - b).recip().powi(c)))
}

/// All constants of the error bound for a given (alpha, beta, b, t),
/// cardinalities 1..=max_card.
#[derive(Debug, Clone)]
pub struct BoundConstants {
    pub a: num_rational::Rational64,
    pub b: num_rational::Rational64,
    pub t: u64,
    pub t1: u64,
    pub d: f64,
    pub d_maximizer: u32,
    /// C_{tau,b} for tau = 1..=2*alpha (index 0 holds tau = 1).
    pub c_tau: Vec<f64>,
    /// G per cardinality (index 0 holds |u| = 1).
    pub g: Vec<f64>,
    /// Full per-cardinality constant C (index 0 holds |u| = 1).
    pub c: Vec<f64>,
}

pub fn bound_constants(
    alpha: u32,
    beta: u32,
    base: u8,
    t: u64,
    max_card: usize,
    mode: CtauMode,
) -> Result<BoundConstants> {
    if alpha < 2 {
        return Err(Error::InvalidParameter("bound needs alpha >= 2".into()));
    }
    if beta < 2 * alpha {
        return Err(Error::InvalidParameter(format!(
            "bound needs beta >= 2*alpha, got alpha={} beta={}",
            alpha, beta
        )));
    }
    let coeffs = interpolation_coeffs(alpha, beta)?;
    let t1 = t.div_ceil(beta as u64);
    let (d, d_maximizer) = constant_d(alpha, base, mode)?;
    let c_tau = (1..=2 * alpha)
        .map(|tau| constant_c_tau(tau, base, mode))
        .collect::<Result<Vec<_>>>()?;
    let g = (1..=max_card)
        .map(|c| constant_g(alpha, beta, base, c))
        .collect::<Result<Vec<_>>>()?;
    let af = coeffs.a.to_f64().expect("small rational");
    let bf = coeffs.b.to_f64().expect("small rational");
    let bb = base as f64;
    let exponent = af * t as f64 + bf * t1 as f64;
    let log_factor = 3.0 / bb.ln();
    let c = (1..=max_card)
        .map(|card| {
            bb.powf(exponent)
                * d.powf(card as f64 / 2.0)
                * g[card - 1].sqrt()
                * log_factor.powf((card as f64 - 1.0) / 2.0)
        })
        .collect();
    Ok(BoundConstants {
        a: coeffs.a,
        b: coeffs.b,
        t,
        t1,
        d,
        d_maximizer,
        c_tau,
        g,
        c,
    })
}

/// The RMS worst-case error bound for an order-beta digital (t,m,s)-net
/// over Z_b in the smoothness-alpha space with the given weights.
pub fn theoretical_bound(
    alpha: u32,
    beta: u32,
    base: u8,
    t: u64,
    m: u32,
    weights: &Weights,
    mode: CtauMode,
) -> Result<f64> {
    if m < 1 {
        return Err(Error::InvalidParameter("bound needs m >= 1".into()));
    }
    if t > beta as u64 * m as u64 {
        return Err(Error::InvalidParameter(format!(
            "t = {} above beta*m = {}",
            t,
            beta as u64 * m as u64
        )));
    }
    let s = weights.dimension();
    if s > 24 {
        return Err(Error::InvalidParameter(format!(
            "subset sum over dimension {} is not desk-scale",
            s
        )));
    }
    let consts = bound_constants(alpha, beta, base, t, s, mode)?;
    let ln_n = m as f64 * (base as f64).ln();
    let mut sum = 0.0;
    for mask in 1..1u64 << s {
        let gamma = weights.gamma(mask);
        if gamma == 0.0 {
            continue;
        }
        let card = mask.count_ones() as usize;
        sum += gamma.sqrt() * consts.c[card - 1] * ln_n.powf((card as f64 - 1.0) / 2.0);
    }
    Ok((base as f64).powi(-(alpha as i32) * m as i32) * sum)
}

/// Closed-form bound on weighted binomial tails:
/// sum_{t >= t0} q^-t binom(t+k-1, k-1) <= q^-t0 binom(t0+k-1, k-1) (1 - 1/q)^-k.
pub fn binom_sum_bound(q: f64, k: usize, t0: u64) -> f64 {
    debug_assert!(q > 1.0 && t0 >= 1);
    q.powi(-(t0 as i32)) * binom_f64(t0 + k as u64 - 1, k - 1) * (1.0 - 1.0 / q).powi(-(k as i32))
}

fn binom_f64(n: u64, k: usize) -> f64 {
    if (k as u64) > n {
        return 0.0;
    }
    let mut acc = 1.0;
    for i in 0..k as u64 {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Truncated dual-net mean-square bound plus a certified tail.
#[derive(Debug, Clone, Copy)]
pub struct MseBound {
    /// sum over enumerated dual elements of gamma_u D^|u| b^(-2 mu_alpha).
    pub value: f64,
    /// Bound on the contribution of all non-enumerated dual elements, from
    /// the dual counting bound and the binomial-sum tail.
    pub tail: f64,
}

impl MseBound {
    pub fn total(&self) -> f64 {
        self.value + self.tail
    }
}

/// Mean-square worst-case error bound over random digital shifts: the
/// weighted dual sum sum_u gamma_u D^|u| sum_{k_u} b^(-2 mu_alpha(k_u)),
/// enumerated up to mu_1 <= dual_budget (clamped to the digit depth) with
/// the remainder estimated through the dual counting bound.
pub fn mse_upper_bound_bd(
    params: &KernelParams,
    g: &GeneratingMatrices,
    dual_budget: u64,
    mode: CtauMode,
) -> Result<MseBound> {
    let s = params.dimension();
    if g.dimension() != s {
        return Err(Error::DimensionMismatch(
            "net dimension vs space dimension".into(),
        ));
    }
    if s > 24 {
        return Err(Error::InvalidParameter(format!(
            "subset sum over dimension {} is not desk-scale",
            s
        )));
    }
    let b = g.base() as f64;
    let n = g.rows() as u64;
    let m = g.cols() as u64;
    let alpha = params.alpha();
    let (d, _) = constant_d(alpha, g.base(), mode)?;
    // Every unexplored element must land in the tail, so the enumeration may
    // not skip short vectors with a component at or beyond b^n.
    let budget = dual_budget.min(n);
    let delta1 = min_dick_metric(g, 1, m + 1)?.value;

    let mut value = 0.0;
    for e in enumerate_dual(g, budget)? {
        if e.is_zero() {
            continue;
        }
        let mut mask = 0u64;
        for (j, &kj) in e.k.iter().enumerate() {
            if kj != 0 {
                mask |= 1 << j;
            }
        }
        let gamma = params.weights().gamma(mask);
        if gamma == 0.0 {
            continue;
        }
        let card = mask.count_ones() as i32;
        value += gamma * d.powi(card) * b.powi(-2 * e.mu_alpha(alpha, g.base()) as i32);
    }

    let mut tail = 0.0;
    for mask in 1..1u64 << s {
        let gamma = params.weights().gamma(mask);
        if gamma == 0.0 {
            continue;
        }
        let card = mask.count_ones() as usize;
        // shapes with mu_1 sum h: at most binom(h-1, c-1) of them, each with
        // at most (b-1)^c elements up to h < delta1 + c and
        // (b-1)^c b^(h - delta1 - c + 1) beyond
        let mut series = 0.0;
        let mid_lo = (budget + 1).max(delta1);
        let mid_hi = delta1 + card as u64 - 1;
        for h in mid_lo..=mid_hi {
            series += binom_f64(h - 1, card - 1) * b.powi(-2 * h as i32);
        }
        let high_lo = (budget + 1).max(delta1 + card as u64);
        series += b.powi(-(delta1 as i32 + 2 * card as i32 - 1))
            * binom_sum_bound(b, card, high_lo - card as u64);
        tail += gamma * d.powi(card as i32) * (b - 1.0).powi(card as i32) * series;
    }
    Ok(MseBound { value, tail })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::{faure_matrices, generate_points, GeneratingMatrices};
    use crate::shift::rms_wce_mc;
    use crate::gf::GfMatrix;

    #[test]
    fn c_tau_base_two() {
        // sin(pi/2) = 1
        assert_eq!(constant_c_tau(1, 2, CtauMode::PiOverB).unwrap(), 0.5);
        let c2 = constant_c_tau(2, 2, CtauMode::PiOverB).unwrap();
        assert!((c2 - 0.25).abs() < 1e-15);
    }

    #[test]
    fn c_tau_two_matches_closed_form() {
        for b in [2u8, 3, 5, 7] {
            let s = (std::f64::consts::PI / b as f64).sin();
            let expected = 1.0 / (2.0 * s) / (2.0 * s);
            assert!((constant_c_tau(2, b, CtauMode::PiOverB).unwrap() - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn c_tau_scan_positive() {
        // note: C_tau is *not* monotone in tau for small bases, where
        // 2 sin(pi/b) > 1 outweighs the (1 + 1/b + 1/(b(b+1))) growth
        for b in [2u8, 3, 5, 7, 11] {
            for tau in 1..=8 {
                let c = constant_c_tau(tau, b, CtauMode::PiOverB).unwrap();
                assert!(c > 0.0, "tau={} b={}", tau, b);
            }
        }
        assert!(
            constant_c_tau(2, 2, CtauMode::PiOverB).unwrap()
                < constant_c_tau(1, 2, CtauMode::PiOverB).unwrap()
        );
    }

    #[test]
    fn c_tau_literal_mode() {
        let lit = constant_c_tau(1, 2, CtauMode::Literal).unwrap();
        assert!((lit - 1.0 / (2.0 * 0.5f64.sin())).abs() < 1e-15);
        // sin(7/2) < 0: the literal reading breaks down
        assert!(constant_c_tau(7, 2, CtauMode::Literal).is_err());
    }

    #[test]
    fn d_alpha_one_single_term() {
        for b in [2u8, 3, 5] {
            let c1 = constant_c_tau(1, b, CtauMode::PiOverB).unwrap();
            let c2 = constant_c_tau(2, b, CtauMode::PiOverB).unwrap();
            let (d, v) = constant_d(1, b, CtauMode::PiOverB).unwrap();
            assert!((d - (c1 * c1 + 2.0 * c2)).abs() < 1e-14);
            assert_eq!(v, 1);
        }
    }

    #[test]
    fn d_positive_and_maximizer_matches_scan() {
        for alpha in 1..=6u32 {
            for b in [2u8, 3, 5] {
                let (d, v) = constant_d(alpha, b, CtauMode::PiOverB).unwrap();
                assert!(d > 0.0);
                // independent re-scan
                let bb = b as f64;
                let mut best = (f64::NEG_INFINITY, 0u32);
                for cand in 1..=alpha {
                    let mut acc = 0.0;
                    for tau in cand..=alpha {
                        let c = constant_c_tau(tau, b, CtauMode::PiOverB).unwrap();
                        acc += c * c / bb.powi(2 * (tau - cand) as i32);
                    }
                    acc += 2.0 * constant_c_tau(2 * alpha, b, CtauMode::PiOverB).unwrap()
                        / bb.powi(2 * (alpha - cand) as i32);
                    if acc > best.0 {
                        best = (acc, cand);
                    }
                }
                assert_eq!(v, best.1);
                assert!((d - best.0).abs() < 1e-12 * d);
            }
        }
    }

    #[test]
    fn g_value_and_guards() {
        // b=2, alpha=2, beta=4: 2B = 4/3
        let g1 = constant_g(2, 4, 2, 1).unwrap();
        let pw = 2.0f64.powf(4.0 / 3.0);
        let expected = pw / (pw - 1.0) + 2.0 / (pw - 2.0);
        assert!((g1 - expected).abs() < 1e-12);
        assert!(g1 > 0.0);
        // grows geometrically in |u|
        let mut prev = g1;
        for c in 2..=6 {
            let g = constant_g(2, 4, 2, c).unwrap();
            assert!(g > prev);
            prev = g;
        }
        assert!(constant_g(2, 3, 2, 1).is_err());
        assert!(constant_g(2, 4, 3, 2).is_ok());
    }

    #[test]
    fn bound_constants_positive() {
        let c = bound_constants(2, 4, 2, 5, 3, CtauMode::PiOverB).unwrap();
        assert_eq!(c.t1, 2);
        assert!(c.d > 0.0);
        assert!(c.c_tau.iter().all(|&v| v > 0.0));
        assert!(c.g.iter().all(|&v| v > 0.0));
        assert!(c.c.iter().all(|&v| v > 0.0));
    }

    #[test]
    fn bound_decreases_in_m() {
        let w = Weights::product(vec![1.0, 1.0]).unwrap();
        let mut prev = f64::INFINITY;
        for m in 2..=12 {
            let v = theoretical_bound(2, 4, 2, 4, m, &w, CtauMode::PiOverB).unwrap();
            assert!(v < prev, "m={}", m);
            prev = v;
        }
    }

    #[test]
    fn bound_scales_as_sqrt_of_weights() {
        let w1 = Weights::product(vec![0.5, 1.5]).unwrap().to_explicit().unwrap();
        let Weights::Explicit { s, entries } = &w1 else {
            unreachable!()
        };
        let w2 = Weights::explicit(
            *s,
            entries.iter().map(|&(m, g)| (m, 2.0 * g)).collect(),
        )
        .unwrap();
        let b1 = theoretical_bound(2, 4, 2, 3, 6, &w1, CtauMode::PiOverB).unwrap();
        let b2 = theoretical_bound(2, 4, 2, 3, 6, &w2, CtauMode::PiOverB).unwrap();
        assert!((b2 - 2.0f64.sqrt() * b1).abs() < 1e-12 * b2);
    }

    #[test]
    fn bound_guards() {
        let w = Weights::product(vec![1.0]).unwrap();
        assert!(theoretical_bound(1, 4, 2, 0, 4, &w, CtauMode::PiOverB).is_err());
        assert!(theoretical_bound(2, 3, 2, 0, 4, &w, CtauMode::PiOverB).is_err());
        assert!(theoretical_bound(2, 4, 2, 100, 4, &w, CtauMode::PiOverB).is_err());
    }

    #[test]
    fn binomial_tail_bound_numeric() {
        for &q in &[1.5f64, 2.0, 3.0] {
            for k in 1..=6usize {
                for t0 in 1..=10u64 {
                    let partial: f64 = (t0..t0 + 1000)
                        .map(|t| q.powi(-(t as i32)) * binom_f64(t + k as u64 - 1, k - 1))
                        .sum();
                    let bound = binom_sum_bound(q, k, t0);
                    assert!(
                        partial <= bound * (1.0 + 1e-12),
                        "q={} k={} t0={}: {} > {}",
                        q,
                        k,
                        t0,
                        partial,
                        bound
                    );
                }
            }
        }
    }

    #[test]
    fn mse_zero_weights() {
        let params = KernelParams::new(2, Weights::explicit(1, vec![(0, 1.0)]).unwrap()).unwrap();
        let g = faure_matrices(2, 1, 3).unwrap();
        let bound = mse_upper_bound_bd(&params, &g, 10, CtauMode::PiOverB).unwrap();
        assert_eq!(bound.value, 0.0);
        assert_eq!(bound.tail, 0.0);
    }

    #[test]
    fn mse_identity_net_dominated_by_cap_element() {
        // s=1 identity: the in-range dual is trivial, the k = b^m element
        // dominates and lives in the tail
        let m = 4;
        let gamma = 0.8;
        let params = KernelParams::new(2, Weights::product(vec![gamma]).unwrap()).unwrap();
        let gmat = GeneratingMatrices::new(vec![GfMatrix::identity(2, m).unwrap()]).unwrap();
        let bound = mse_upper_bound_bd(&params, &gmat, m as u64, CtauMode::PiOverB).unwrap();
        assert_eq!(bound.value, 0.0);
        let (d, _) = constant_d(2, 2, CtauMode::PiOverB).unwrap();
        let lead = gamma * d * 2.0f64.powi(-2 * (m as i32 + 1));
        assert!(bound.tail >= lead);
        assert!(bound.tail <= lead * 2.0 * (1.0 + 1e-12));
    }

    #[test]
    fn mse_dominates_measured_mean_square() {
        let params = KernelParams::new(2, Weights::product(vec![1.0]).unwrap()).unwrap();
        let gmat = faure_matrices(2, 1, 4).unwrap();
        let p = generate_points(&gmat).unwrap();
        let est = rms_wce_mc(&params, &p, 16, 11).unwrap();
        let mean_sq = est.estimate * est.estimate;
        let bound = mse_upper_bound_bd(&params, &gmat, 12, CtauMode::PiOverB).unwrap();
        assert!(
            mean_sq <= bound.total(),
            "measured {} vs bound {}",
            mean_sq,
            bound.total()
        );
    }
}
