//! The weighted Sobolev reproducing kernel of integer smoothness alpha and
//! the exact worst-case error of equal-weight QMC rules in its space.
//!
//! One-dimensional factor:
//!
//! ```text
//! k_alpha(x, y) = sum_{r=1..alpha} B_r(x) B_r(y) / (r!)^2
//!                 + (-1)^(alpha+1) B_{2 alpha}(|x - y|) / (2 alpha)!
//! ```
//!
//! and the full kernel is K(x, y) = sum_u gamma_u prod_{j in u} k_alpha(x_j, y_j).
//!
//! Every factor integrates to zero over either argument (int B_r = 0 for
//! r >= 1, and the |x-y| term reduces to odd-degree Bernoulli values which
//! vanish at 0 and reflect oddly). In the squared-error identity
//! e^2 = int int K - (2/N) sum_x int K + (1/N^2) sum_{x,x'} K the first two
//! terms therefore collapse to the gamma_0 constant, which cancels, leaving
//!
//! ```text
//! e^2 = (1/N^2) sum_{x,x' in P} sum_{u != 0} gamma_u prod_{j in u} k_alpha(x_j, x'_j).
//! ```
//!
//! The quadrature-oracle tests hold this identity to account.

use std::sync::OnceLock;

use crate::bernoulli::{BernoulliTable, DEFAULT_MAX_DEGREE};
use crate::error::{Error, Result};
use crate::net::PointSet;

/// Largest supported smoothness (the shared Bernoulli table holds degree
/// 2 * MAX_ALPHA).
pub const MAX_ALPHA: u32 = (DEFAULT_MAX_DEGREE / 2) as u32;

fn table() -> &'static BernoulliTable {
    static TABLE: OnceLock<BernoulliTable> = OnceLock::new();
    TABLE.get_or_init(BernoulliTable::default)
}

fn coeffs() -> &'static [Vec<f64>] {
    static COEFFS: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let t = table();
        (0..=t.max_degree())
            .map(|r| t.coeffs_f64(r).expect("degree within table"))
            .collect()
    })
}

/// B_r(x) by exact-rational Horner evaluation, rounded once to float.
pub fn bernoulli(r: usize, x: f64) -> Result<f64> {
    table().eval(r, x)
}

#[inline]
fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &k| acc * x + k)
}

fn factorial(n: u32) -> f64 {
    (1..=n as u64).map(|v| v as f64).product()
}

/// One-dimensional kernel factor of smoothness alpha, for x, y in [0,1).
pub fn kernel_1d(alpha: u32, x: f64, y: f64) -> f64 {
    debug_assert!(alpha >= 1 && alpha <= MAX_ALPHA);
    let c = coeffs();
    let mut sum = 0.0;
    let mut fact = 1.0; // r!
    for r in 1..=alpha {
        fact *= r as f64;
        sum += horner(&c[r as usize], x) * horner(&c[r as usize], y) / (fact * fact);
    }
    let sign = if alpha % 2 == 0 { -1.0 } else { 1.0 };
    sum + sign * horner(&c[2 * alpha as usize], (x - y).abs()) / factorial(2 * alpha)
}

/// Subset weights gamma_u, either as a full map or in product form
/// gamma_u = prod_{j in u} gamma_j (with gamma_empty = 1).
#[derive(Debug, Clone, PartialEq)]
pub enum Weights {
    Product(Vec<f64>),
    Explicit {
        s: usize,
        /// (subset bitmask, gamma), sorted by mask; absent masks mean 0.
        entries: Vec<(u64, f64)>,
    },
}

impl Weights {
    pub fn product(gammas: Vec<f64>) -> Result<Self> {
        if gammas.is_empty() {
            return Err(Error::InvalidParameter("need at least one weight".into()));
        }
        if gammas.iter().any(|&g| !(g >= 0.0) || !g.is_finite()) {
            return Err(Error::InvalidParameter(
                "weights must be finite and non-negative".into(),
            ));
        }
        Ok(Weights::Product(gammas))
    }

    pub fn uniform_product(s: usize, gamma: f64) -> Result<Self> {
        Self::product(vec![gamma; s])
    }

    pub fn explicit(s: usize, mut entries: Vec<(u64, f64)>) -> Result<Self> {
        if s == 0 || s > 63 {
            return Err(Error::InvalidParameter(format!("dimension {} out of range", s)));
        }
        entries.sort_by_key(|&(mask, _)| mask);
        for pair in entries.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::InvalidParameter(format!(
                    "duplicate subset mask {:#b}",
                    pair[0].0
                )));
            }
        }
        for &(mask, g) in &entries {
            if mask >> s != 0 {
                return Err(Error::InvalidParameter(format!(
                    "subset mask {:#b} outside dimension {}",
                    mask, s
                )));
            }
            if !(g >= 0.0) || !g.is_finite() {
                return Err(Error::InvalidParameter(
                    "weights must be finite and non-negative".into(),
                ));
            }
        }
        Ok(Weights::Explicit { s, entries })
    }

    pub fn dimension(&self) -> usize {
        match self {
            Weights::Product(g) => g.len(),
            Weights::Explicit { s, .. } => *s,
        }
    }

    /// gamma_u for the subset encoded by `mask` (bit j = coordinate j+1).
    pub fn gamma(&self, mask: u64) -> f64 {
        match self {
            Weights::Product(g) => {
                let mut acc = 1.0;
                for (j, &gj) in g.iter().enumerate() {
                    if mask >> j & 1 == 1 {
                        acc *= gj;
                    }
                }
                acc
            }
            Weights::Explicit { entries, .. } => entries
                .binary_search_by_key(&mask, |&(m, _)| m)
                .map(|i| entries[i].1)
                .unwrap_or(0.0),
        }
    }

    /// Expand into the explicit form over all 2^s subsets.
    pub fn to_explicit(&self) -> Result<Weights> {
        let s = self.dimension();
        if s > 20 {
            return Err(Error::InvalidParameter(format!(
                "explicit expansion of dimension {} would need 2^{} entries",
                s, s
            )));
        }
        let entries = (0..1u64 << s).map(|mask| (mask, self.gamma(mask))).collect();
        Weights::explicit(s, entries)
    }
}

/// Parameters of the weighted space: smoothness and weights.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelParams {
    alpha: u32,
    weights: Weights,
}

impl KernelParams {
    pub fn new(alpha: u32, weights: Weights) -> Result<Self> {
        if alpha < 1 || alpha > MAX_ALPHA {
            return Err(Error::InvalidParameter(format!(
                "smoothness alpha must lie in 1..={}, got {}",
                MAX_ALPHA, alpha
            )));
        }
        Ok(Self { alpha, weights })
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn dimension(&self) -> usize {
        self.weights.dimension()
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }
}

fn check_point(params: &KernelParams, x: &[f64]) -> Result<()> {
    if x.len() != params.dimension() {
        return Err(Error::DimensionMismatch(format!(
            "point has {} coordinates, space has {}",
            x.len(),
            params.dimension()
        )));
    }
    Ok(())
}

/// Full kernel K(x, y).
pub fn kernel(params: &KernelParams, x: &[f64], y: &[f64]) -> Result<f64> {
    check_point(params, x)?;
    check_point(params, y)?;
    Ok(kernel_unchecked(params, x, y, true))
}

/// The anchored sum over subsets; `with_empty` controls the gamma_0 term.
fn kernel_unchecked(params: &KernelParams, x: &[f64], y: &[f64], with_empty: bool) -> f64 {
    match params.weights() {
        Weights::Product(gammas) => {
            let mut prod = 1.0;
            for (j, &gj) in gammas.iter().enumerate() {
                prod *= 1.0 + gj * kernel_1d(params.alpha, x[j], y[j]);
            }
            if with_empty {
                prod
            } else {
                prod - 1.0
            }
        }
        Weights::Explicit { s, entries } => {
            let k1: Vec<f64> = (0..*s)
                .map(|j| kernel_1d(params.alpha, x[j], y[j]))
                .collect();
            let mut acc = 0.0;
            for &(mask, g) in entries {
                if g == 0.0 || (mask == 0 && !with_empty) {
                    continue;
                }
                let mut term = g;
                let mut bits = mask;
                while bits != 0 {
                    let j = bits.trailing_zeros() as usize;
                    term *= k1[j];
                    bits &= bits - 1;
                }
                acc += term;
            }
            acc
        }
    }
}

#[derive(Clone, Copy, Default)]
struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    #[inline]
    fn add(&mut self, v: f64) {
        let y = v - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum
    }
}

/// Worst-case error of the equal-weight rule over raw float coordinates
/// (row-major N x s), for point sets that do not come from a digital net.
pub fn worst_case_error_floats(params: &KernelParams, coords: &[f64], n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one point".into()));
    }
    if coords.len() != n * params.dimension() {
        return Err(Error::DimensionMismatch(format!(
            "{} coordinates for {} points in dimension {}",
            coords.len(),
            n,
            params.dimension()
        )));
    }
    Ok(wce_floats_unchecked(params, coords, n))
}

fn wce_floats_unchecked(params: &KernelParams, coords: &[f64], n: usize) -> f64 {
    let s = params.dimension();
    debug_assert_eq!(coords.len(), n * s);
    let mut total = Kahan::default();
    let mut max_term = 0.0f64;
    for h in 0..n {
        let xh = &coords[h * s..(h + 1) * s];
        let mut row = Kahan::default();
        let diag = kernel_unchecked(params, xh, xh, false);
        max_term = max_term.max(diag.abs());
        row.add(diag);
        for h2 in h + 1..n {
            let xh2 = &coords[h2 * s..(h2 + 1) * s];
            let w = kernel_unchecked(params, xh, xh2, false);
            max_term = max_term.max(w.abs());
            row.add(2.0 * w);
        }
        total.add(row.value());
    }
    let mut e2 = total.value() / (n as f64 * n as f64);
    if e2 < 0.0 {
        debug_assert!(e2 >= -1e-14 * max_term, "e^2 = {} below round-off floor", e2);
        e2 = 0.0;
    }
    e2.sqrt()
}

/// Worst-case QMC integration error of the equal-weight rule over P in the
/// weighted space.
pub fn worst_case_error(params: &KernelParams, p: &PointSet) -> Result<f64> {
    if p.dimension() != params.dimension() {
        return Err(Error::DimensionMismatch(format!(
            "point set dimension {} vs space dimension {}",
            p.dimension(),
            params.dimension()
        )));
    }
    let coords = p.to_floats();
    Ok(wce_floats_unchecked(params, &coords, p.len()))
}

/// Integration error observed on the representer f = K(., y) together with
/// its certified bound e_wor * sqrt(K(y, y)): the first never exceeds the
/// second.
pub fn error_on_representer(params: &KernelParams, p: &PointSet, y: &[f64]) -> Result<(f64, f64)> {
    check_point(params, y)?;
    if p.dimension() != params.dimension() {
        return Err(Error::DimensionMismatch(
            "point set dimension vs space dimension".into(),
        ));
    }
    let coords = p.to_floats();
    let n = p.len();
    let s = params.dimension();
    let mut acc = Kahan::default();
    for h in 0..n {
        acc.add(kernel_unchecked(params, &coords[h * s..(h + 1) * s], y, true));
    }
    let gamma_empty = params.weights().gamma(0);
    let observed = (acc.value() / n as f64 - gamma_empty).abs();
    let e = wce_floats_unchecked(params, &coords, n);
    let norm2 = kernel_unchecked(params, y, y, true) - gamma_empty;
    let bound = e * norm2.max(0.0).sqrt();
    Ok((observed, bound))
}
