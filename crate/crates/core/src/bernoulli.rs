//! Bernoulli polynomials with exact rational coefficients.
//!
//! Coefficients are regenerated at construction from the defining recurrence
//! rather than transcribed from a table. `eval` converts the (dyadic) `f64`
//! argument to an exact rational, runs Horner exactly and rounds once at the
//! end; the `coeffs_f64` export backs the fast kernel path.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default table depth: enough for smoothness up to alpha = 10 (degree 2*alpha).
pub const DEFAULT_MAX_DEGREE: usize = 20;

#[derive(Debug, Clone)]
pub struct BernoulliTable {
    /// `polys[r][k]` is the coefficient of x^k in B_r(x).
    polys: Vec<Vec<BigRational>>,
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

impl BernoulliTable {
    /// Build B_0..B_max_degree.
    pub fn new(max_degree: usize) -> Self {
        // Bernoulli numbers, B_1 = -1/2 so that B_1(x) = x - 1/2.
        let mut numbers: Vec<BigRational> = Vec::with_capacity(max_degree + 1);
        numbers.push(BigRational::one());
        for n in 1..=max_degree {
            let mut acc = BigRational::zero();
            for (j, bj) in numbers.iter().enumerate() {
                acc += BigRational::from(binomial(n + 1, j)) * bj;
            }
            numbers.push(-acc / BigRational::from(BigInt::from(n as i64 + 1)));
        }
        let polys = (0..=max_degree)
            .map(|n| {
                (0..=n)
                    .map(|k| BigRational::from(binomial(n, k)) * &numbers[n - k])
                    .collect()
            })
            .collect();
        Self { polys }
    }

    pub fn max_degree(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn coeffs(&self, r: usize) -> Result<&[BigRational]> {
        self.polys
            .get(r)
            .map(|c| c.as_slice())
            .ok_or_else(|| Error::InvalidParameter(format!("degree {} beyond table", r)))
    }

    /// Coefficients of B_r rounded once to f64, ascending powers.
    pub fn coeffs_f64(&self, r: usize) -> Result<Vec<f64>> {
        Ok(self
            .coeffs(r)?
            .iter()
            .map(|c| c.to_f64().expect("bernoulli coefficient fits f64"))
            .collect())
    }

    /// Exact-rational Horner evaluation of B_r(x), rounded once to f64.
    pub fn eval(&self, r: usize, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::InvalidParameter(format!(
                "bernoulli argument {} outside [0,1]",
                x
            )));
        }
        let coeffs = self.coeffs(r)?;
        let xr = BigRational::from_float(x).expect("finite float");
        let mut acc = BigRational::zero();
        for c in coeffs.iter().rev() {
            acc = acc * &xr + c;
        }
        Ok(acc.to_f64().expect("bernoulli value fits f64"))
    }
}

impl Default for BernoulliTable {
    fn default() -> Self {
        Self::new(DEFAULT_MAX_DEGREE)
    }
}
