//! Net quality: Dick metric functions, dual-net enumeration, minimum Dick
//! metric, exhaustive order-alpha (t,m,s)-net verification and the metric
//! interpolation coefficients.
//!
//! Everything here is exact integer / rational arithmetic; no floats.

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::net::GeneratingMatrices;

/// Hard cap on dual-net enumeration candidates.
pub const DUAL_CANDIDATE_LIMIT: f64 = 1e8;

/// Default node budget for the exhaustive order verification.
pub const DEFAULT_NODE_LIMIT: u64 = 10_000_000;

const MAX_COLS: usize = 32;

/// Dick metric of a scalar: sum of the positions (1-indexed, counted from
/// the least significant digit) of the `alpha` most significant nonzero
/// base-b digits of k; 0 for k = 0.
pub fn mu(alpha: u32, k: u64, base: u8) -> u64 {
    let b = base as u64;
    let mut positions = Vec::new();
    let mut rest = k;
    let mut pos = 0u64;
    while rest > 0 {
        pos += 1;
        if rest % b != 0 {
            positions.push(pos);
        }
        rest /= b;
    }
    // positions is ascending; the alpha most significant are at the tail
    let take = (alpha as usize).min(positions.len());
    positions.iter().rev().take(take).sum()
}

/// Componentwise sum of [`mu`] over a vector.
pub fn mu_vec(alpha: u32, ks: &[u64], base: u8) -> u64 {
    ks.iter().map(|&k| mu(alpha, k, base)).sum()
}

/// An element of the dual net together with its cached mu_1 value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualNetElement {
    pub k: Vec<u64>,
    pub mu1: u64,
}

impl DualNetElement {
    pub fn is_zero(&self) -> bool {
        self.k.iter().all(|&x| x == 0)
    }

    pub fn mu_alpha(&self, alpha: u32, base: u8) -> u64 {
        mu_vec(alpha, &self.k, base)
    }
}

/// Number of s-vectors k with sum of mu_1 at most `budget` and each
/// component below base^n, evaluated in f64 for the guard.
fn dual_candidate_count(base: u8, s: usize, n: usize, budget: u64) -> f64 {
    let b = base as f64;
    let cap = (budget as usize).min(n);
    // per-coordinate count of k with mu_1(k) = l
    let per: Vec<f64> = (0..=cap)
        .map(|l| {
            if l == 0 {
                1.0
            } else {
                (b - 1.0) * b.powi(l as i32 - 1)
            }
        })
        .collect();
    let mut dp = vec![0.0f64; budget as usize + 1];
    dp[0] = 1.0;
    for _ in 0..s {
        let mut next = vec![0.0f64; dp.len()];
        for (total, &ways) in dp.iter().enumerate() {
            if ways == 0.0 {
                continue;
            }
            for (l, &cnt) in per.iter().enumerate() {
                if total + l < next.len() {
                    next[total + l] += ways * cnt;
                } else {
                    break;
                }
            }
        }
        dp = next;
    }
    dp.iter().sum()
}

/// Counting scanner over k = 0, 1, 2, ... below base^limit that maintains
/// the digit vector, mu_1 and the syndrome sum_i kappa_i * row_i(C) mod b.
struct DigitScanner<'a> {
    mat: &'a crate::gf::GfMatrix,
    base: u8,
    cols: usize,
    limit: usize,
    k: u64,
    digits: Vec<u8>,
    syndrome: [u8; MAX_COLS],
    top: usize,
}

impl<'a> DigitScanner<'a> {
    fn new(mat: &'a crate::gf::GfMatrix, limit: usize) -> Self {
        Self {
            mat,
            base: mat.base(),
            cols: mat.cols(),
            limit,
            k: 0,
            digits: vec![0; limit],
            syndrome: [0; MAX_COLS],
            top: 0,
        }
    }

    /// mu_1 of the current k.
    fn mu1(&self) -> u64 {
        self.top as u64
    }

    /// Advance to k+1; false once base^limit is reached.
    fn advance(&mut self) -> bool {
        let b = self.base;
        let mut i = 0;
        loop {
            if i == self.limit {
                return false;
            }
            let row = self.mat.row(i);
            for c in 0..self.cols {
                let v = self.syndrome[c] + row[c];
                self.syndrome[c] = if v >= b { v - b } else { v };
            }
            self.digits[i] += 1;
            if self.digits[i] == b {
                self.digits[i] = 0;
                i += 1;
            } else {
                break;
            }
        }
        self.k += 1;
        if i + 1 > self.top {
            self.top = i + 1;
        }
        true
    }
}

fn enumerate_rec(
    g: &GeneratingMatrices,
    j: usize,
    rem: u64,
    syn: &[u8; MAX_COLS],
    mu1_acc: u64,
    prefix: &mut Vec<u64>,
    out: &mut Vec<DualNetElement>,
) {
    let s = g.dimension();
    let cols = g.cols();
    if j == s {
        if syn[..cols].iter().all(|&d| d == 0) {
            out.push(DualNetElement {
                k: prefix.clone(),
                mu1: mu1_acc,
            });
        }
        return;
    }
    let limit = (rem as usize).min(g.rows());
    let b = g.base();
    let mut scan = DigitScanner::new(g.matrix(j), limit);
    loop {
        let mut total = *syn;
        for c in 0..cols {
            let v = total[c] + scan.syndrome[c];
            total[c] = if v >= b { v - b } else { v };
        }
        prefix.push(scan.k);
        enumerate_rec(g, j + 1, rem - scan.mu1(), &total, mu1_acc + scan.mu1(), prefix, out);
        prefix.pop();
        if !scan.advance() {
            break;
        }
    }
}

/// Enumerate the dual-net elements k with all components below base^n and
/// mu_1(k) <= max_mu1, the zero vector included.
pub fn enumerate_dual(g: &GeneratingMatrices, max_mu1: u64) -> Result<Vec<DualNetElement>> {
    if g.cols() > MAX_COLS {
        return Err(Error::InvalidParameter(format!(
            "dual enumeration supports at most {} columns",
            MAX_COLS
        )));
    }
    // mu_1 of an in-range vector never exceeds s*n
    let max_mu1 = max_mu1.min((g.dimension() * g.rows()) as u64);
    let candidates = dual_candidate_count(g.base(), g.dimension(), g.rows(), max_mu1);
    if candidates > DUAL_CANDIDATE_LIMIT {
        return Err(Error::BudgetTooLarge {
            candidates,
            limit: DUAL_CANDIDATE_LIMIT,
        });
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(g.dimension());
    enumerate_rec(g, 0, max_mu1, &[0; MAX_COLS], 0, &mut prefix, &mut out);
    Ok(out)
}

/// Result of a minimum-Dick-metric search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinDickMetric {
    /// min(mu_alpha over enumerated nonzero dual elements, n+1).
    pub value: u64,
    /// Whether `value` is certified to be the true minimum.
    pub exact: bool,
    /// Whether the reported value comes from the always-dual element
    /// k = base^n rather than an enumerated one.
    pub cap_bound: bool,
}

/// Minimum Dick metric delta_alpha of the net, searched over dual elements
/// with mu_1 <= budget.
///
/// The element with a single component base^n is dual unconditionally (its
/// first n digits vanish) and has mu_alpha = n+1, so n+1 caps the result for
/// every alpha; deeper components can only do worse.
pub fn min_dick_metric(g: &GeneratingMatrices, alpha: u32, budget: u64) -> Result<MinDickMetric> {
    let n = g.rows() as u64;
    let cap = n + 1;
    let found = enumerate_dual(g, budget)?
        .iter()
        .filter(|e| !e.is_zero())
        .map(|e| e.mu_alpha(alpha, g.base()))
        .min();
    let value = found.map_or(cap, |f| f.min(cap));
    let exact = value <= budget + 1 || budget >= n;
    if !exact && found.is_none() {
        return Err(Error::BudgetExhausted { budget });
    }
    Ok(MinDickMetric {
        value,
        exact,
        cap_bound: found.is_none_or(|f| f > cap) && value == cap,
    })
}

/// Incremental row-echelon basis over Z_b with LIFO undo.
struct Echelon {
    base: u8,
    rows: Vec<Vec<u8>>,
    pivots: Vec<usize>,
}

impl Echelon {
    fn new(base: u8) -> Self {
        Self {
            base,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    fn len(&self) -> usize {
        self.rows.len()
    }

    fn truncate(&mut self, len: usize) {
        self.rows.truncate(len);
        self.pivots.truncate(len);
    }

    /// Insert a row; false if it is dependent on the basis.
    fn insert(&mut self, row: &[u8]) -> bool {
        let b = self.base as u16;
        let mut v: Vec<u8> = row.to_vec();
        for (basis, &p) in self.rows.iter().zip(&self.pivots) {
            let f = v[p] as u16;
            if f == 0 {
                continue;
            }
            // basis rows are normalized to pivot value 1
            for (vi, &bi) in v.iter_mut().zip(basis) {
                *vi = ((*vi as u16 + (b - f) * bi as u16 % b) % b) as u8;
            }
        }
        let Some(p) = v.iter().position(|&d| d != 0) else {
            return false;
        };
        let inv = mod_inverse(v[p], self.base) as u16;
        for vi in v.iter_mut() {
            *vi = (*vi as u16 * inv % b) as u8;
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }
}

fn mod_inverse(a: u8, base: u8) -> u8 {
    let mut result = 1u32;
    let mut pow = a as u32;
    let mut exp = base as u32 - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * pow % base as u32;
        }
        pow = pow * pow % base as u32;
        exp >>= 1;
    }
    result as u8
}

struct VerifyCtx<'a> {
    g: &'a GeneratingMatrices,
    alpha: usize,
    nodes: u64,
    max_nodes: u64,
}

impl VerifyCtx<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            Err(Error::ExplosionGuard {
                visited: self.nodes,
                limit: self.max_nodes,
            })
        } else {
            Ok(())
        }
    }

    /// Enumerate row selections for coordinates j.. within the remaining
    /// counted-weight budget; false as soon as a dependent selection shows.
    fn explore(&mut self, j: usize, rem: u64, ech: &mut Echelon) -> Result<bool> {
        self.tick()?;
        if j == self.g.dimension() {
            return Ok(true);
        }
        // empty selection for this coordinate
        if !self.explore(j + 1, rem, ech)? {
            return Ok(false);
        }
        self.pick(j, 1, rem.min(self.g.rows() as u64), rem, ech)
    }

    /// Extend the current tuple for coordinate j by one more counted index
    /// (depth picks done so far is depth-1), largest allowed index `max_i`.
    fn pick(&mut self, j: usize, depth: usize, max_i: u64, rem: u64, ech: &mut Echelon) -> Result<bool> {
        self.tick()?;
        for i in 1..=max_i {
            let mark = ech.len();
            if !ech.insert(self.g.matrix(j).row(i as usize - 1)) {
                // the partial selection is itself a valid within-budget choice
                return Ok(false);
            }
            let rem_after = rem - i;
            let ok = if depth == self.alpha {
                // counted tuple complete: deeper rows carry no weight, so the
                // worst selection includes the whole prefix below index i
                let mut dependent = false;
                for low in 1..i {
                    if !ech.insert(self.g.matrix(j).row(low as usize - 1)) {
                        dependent = true;
                        break;
                    }
                }
                if dependent {
                    false
                } else {
                    self.explore(j + 1, rem_after, ech)?
                }
            } else {
                // the tuple as it stands is a valid selection...
                if !self.explore(j + 1, rem_after, ech)? {
                    false
                } else {
                    // ...and may be extended by a strictly smaller index
                    self.pick(j, depth + 1, (i - 1).min(rem_after), rem_after, ech)?
                }
            };
            ech.truncate(mark);
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Exhaustively check the order-alpha digital (t,m,s)-net condition: every
/// selection of rows whose counted weight (the min(alpha, v_j) largest
/// indices per coordinate) stays within alpha*m - t must be linearly
/// independent, rows below the alpha-th counted index included.
pub fn verify_order_t(
    g: &GeneratingMatrices,
    alpha: u32,
    t: u64,
    max_nodes: u64,
) -> Result<bool> {
    let m = g.cols() as u64;
    let bound = alpha as u64 * m;
    if t > bound {
        return Err(Error::InvalidParameter(format!(
            "t = {} above alpha*m = {}",
            t, bound
        )));
    }
    let mut ctx = VerifyCtx {
        g,
        alpha: alpha as usize,
        nodes: 0,
        max_nodes,
    };
    let mut ech = Echelon::new(g.base());
    ctx.explore(0, bound - t, &mut ech)
}

/// Smallest t for which [`verify_order_t`] holds; the condition is monotone
/// in t (larger t shrinks the budget), so binary search applies.
pub fn exact_t_value(g: &GeneratingMatrices, alpha: u32, max_nodes: u64) -> Result<u64> {
    let mut lo = 0u64;
    let mut hi = alpha as u64 * g.cols() as u64;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if verify_order_t(g, alpha, mid, max_nodes)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

/// t-value propagation to a lower order: ceil(t * alpha' / alpha).
pub fn propagate_t(t: u64, alpha: u32, alpha_prime: u32) -> Result<u64> {
    if alpha_prime == 0 || alpha_prime >= alpha {
        return Err(Error::InvalidParameter(format!(
            "propagation needs 1 <= alpha' < alpha, got alpha'={} alpha={}",
            alpha_prime, alpha
        )));
    }
    Ok((t * alpha_prime as u64).div_ceil(alpha as u64))
}

/// The convex-combination coefficients of the Dick-metric interpolation:
/// A = (alpha-1)/(beta-1) and B = (beta-alpha)/(beta-1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InterpolationCoeffs {
    pub a: Rational64,
    pub b: Rational64,
}

pub fn interpolation_coeffs(alpha: u32, beta: u32) -> Result<InterpolationCoeffs> {
    if alpha <= 1 || beta < alpha {
        return Err(Error::InvalidParameter(format!(
            "interpolation needs 1 < alpha <= beta, got alpha={} beta={}",
            alpha, beta
        )));
    }
    let den = beta as i64 - 1;
    Ok(InterpolationCoeffs {
        a: Rational64::new(alpha as i64 - 1, den),
        b: Rational64::new(beta as i64 - alpha as i64, den),
    })
}
