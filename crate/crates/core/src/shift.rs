//! Random digital shifts and Monte-Carlo estimation of the RMS worst-case
//! error over shifted nets.
//!
//! Shifts are drawn from a counter-based generator (ChaCha8 with the shift
//! index as stream), so shift r of a given seed is reproducible regardless
//! of thread scheduling; per-shift errors are reduced in fixed order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::{worst_case_error, KernelParams};
use crate::net::{exact_float_digits, PointSet};

/// A digital shift truncated to `depth` base-b digits per coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitalShift {
    base: u8,
    dimension: usize,
    depth: usize,
    /// [coordinate][digit], row-major.
    digits: Vec<u8>,
}

impl DigitalShift {
    pub fn new(base: u8, dimension: usize, depth: usize, digits: Vec<u8>) -> Result<Self> {
        if digits.len() != dimension * depth {
            return Err(Error::DimensionMismatch(format!(
                "shift needs {} digits, got {}",
                dimension * depth,
                digits.len()
            )));
        }
        for &d in &digits {
            if d >= base {
                return Err(Error::DigitOutOfRange {
                    digit: d as u64,
                    base: base as u64,
                });
            }
        }
        Ok(Self {
            base,
            dimension,
            depth,
            digits,
        })
    }

    pub fn base(&self) -> u8 {
        self.base
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn digit(&self, j: usize, i: usize) -> u8 {
        self.digits[j * self.depth + i]
    }

    pub fn coord_digits(&self, j: usize) -> &[u8] {
        &self.digits[j * self.depth..(j + 1) * self.depth]
    }

    /// Digitwise mod-b sum of two shifts of identical shape.
    pub fn combine(&self, other: &DigitalShift) -> Result<DigitalShift> {
        if self.base != other.base
            || self.dimension != other.dimension
            || self.depth != other.depth
        {
            return Err(Error::DimensionMismatch("shift shapes differ".into()));
        }
        let digits = self
            .digits
            .iter()
            .zip(&other.digits)
            .map(|(&a, &b)| (a + b) % self.base)
            .collect();
        DigitalShift::new(self.base, self.dimension, self.depth, digits)
    }
}

/// Default shift depth: at least the net's digit depth, and deep enough to
/// fill double precision while keeping digit-to-float conversion exact.
pub fn default_shift_depth(base: u8, net_depth: usize) -> usize {
    net_depth.max(exact_float_digits(base))
}

/// Draw the shift with the given index from the (seed, index) stream;
/// digits are i.i.d. uniform over {0, .., b-1}.
pub fn sample_shift_indexed(
    seed: u64,
    index: u64,
    base: u8,
    dimension: usize,
    depth: usize,
) -> DigitalShift {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let digits = (0..dimension * depth)
        .map(|_| rng.random_range(0..base))
        .collect();
    DigitalShift::new(base, dimension, depth, digits).expect("sampled digits in range")
}

/// Draw a single shift for the given seed (index 0 of the stream family).
pub fn sample_shift(seed: u64, base: u8, dimension: usize, depth: usize) -> DigitalShift {
    sample_shift_indexed(seed, 0, base, dimension, depth)
}

/// Digitally shift every point: digit i of coordinate j becomes
/// (xi_i + sigma_{j,i}) mod b for i below the net depth, and sigma_{j,i}
/// beyond it (net points have finite expansions, their tail digits are 0).
pub fn apply_shift(p: &PointSet, shift: &DigitalShift) -> Result<PointSet> {
    if shift.base() != p.base() || shift.dimension() != p.dimension() {
        return Err(Error::DimensionMismatch(
            "shift base/dimension do not match the point set".into(),
        ));
    }
    let n = p.digit_depth();
    let d = shift.depth();
    if d < n {
        return Err(Error::InvalidParameter(format!(
            "shift depth {} below net digit depth {}",
            d, n
        )));
    }
    let b = p.base();
    let count = p.len();
    let s = p.dimension();
    let mut digits = Vec::with_capacity(count * s * d);
    for h in 0..count {
        for j in 0..s {
            let x = p.coord_digits(h, j);
            let sigma = shift.coord_digits(j);
            for i in 0..n {
                digits.push((x[i] + sigma[i]) % b);
            }
            digits.extend_from_slice(&sigma[n..]);
        }
    }
    Ok(PointSet::from_raw(b, s, d, p.log_count(), digits))
}

/// Monte-Carlo RMS worst-case error estimate over R random shifts.
#[derive(Debug, Clone)]
pub struct RmsEstimate {
    /// sqrt of the mean squared worst-case error.
    pub estimate: f64,
    /// Delta-method standard error of `estimate`.
    pub std_error: f64,
    pub per_shift_errors: Vec<f64>,
}

/// Worst-case errors of P shifted by shifts 0..r of the seed's stream,
/// in index order.
pub fn shift_errors(params: &KernelParams, p: &PointSet, r: u32, seed: u64) -> Result<Vec<f64>> {
    if p.dimension() != params.dimension() {
        return Err(Error::DimensionMismatch(
            "point set dimension vs space dimension".into(),
        ));
    }
    let depth = default_shift_depth(p.base(), p.digit_depth());
    (0..r as u64)
        .into_par_iter()
        .map(|i| {
            let sigma = sample_shift_indexed(seed, i, p.base(), p.dimension(), depth);
            let shifted = apply_shift(p, &sigma)?;
            worst_case_error(params, &shifted)
        })
        .collect()
}

/// Estimate the RMS worst-case error over `r` random digital shifts.
pub fn rms_wce_mc(params: &KernelParams, p: &PointSet, r: u32, seed: u64) -> Result<RmsEstimate> {
    if r < 2 {
        return Err(Error::InvalidParameter(
            "rms estimation needs at least 2 shifts".into(),
        ));
    }
    let errors = shift_errors(params, p, r, seed)?;
    Ok(summarize(errors))
}

fn summarize(errors: Vec<f64>) -> RmsEstimate {
    let r = errors.len() as f64;
    let mean_sq = errors.iter().map(|e| e * e).sum::<f64>() / r;
    let estimate = mean_sq.sqrt();
    let var_sq = errors
        .iter()
        .map(|e| {
            let d = e * e - mean_sq;
            d * d
        })
        .sum::<f64>()
        / (r - 1.0);
    let se_mean_sq = (var_sq / r).sqrt();
    let std_error = if estimate > 0.0 {
        se_mean_sq / (2.0 * estimate)
    } else {
        0.0
    };
    RmsEstimate {
        estimate,
        std_error,
        per_shift_errors: errors,
    }
}

/// Best-of-R shift search over the same shift sample as [`rms_wce_mc`], so
/// the returned error never exceeds the RMS estimate of the same seed.
pub fn best_shift_search(
    params: &KernelParams,
    p: &PointSet,
    r: u32,
    seed: u64,
) -> Result<(DigitalShift, f64)> {
    if r < 1 {
        return Err(Error::InvalidParameter("need at least one shift".into()));
    }
    let errors = shift_errors(params, p, r, seed)?;
    let (best_idx, best_err) = errors
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, &e)| (i, e))
        .expect("r >= 1");
    let depth = default_shift_depth(p.base(), p.digit_depth());
    let shift = sample_shift_indexed(seed, best_idx as u64, p.base(), p.dimension(), depth);
    Ok((shift, best_err))
}
