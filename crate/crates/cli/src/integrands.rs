//! Built-in integrands with known exact integrals over [0,1)^s.

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrand {
    /// f = 1, integral 1.
    One,
    /// f = prod x_j, integral 2^-s.
    ProdX,
    /// f = prod x_j^2, integral 3^-s.
    ProdXSquared,
    /// f = exp(sum x_j), integral (e - 1)^s.
    ExpSum,
}

pub const CATALOG: &[(&str, Integrand)] = &[
    ("one", Integrand::One),
    ("prod-x", Integrand::ProdX),
    ("prod-x2", Integrand::ProdXSquared),
    ("exp-sum", Integrand::ExpSum),
];

impl Integrand {
    pub fn from_id(id: &str) -> CliResult<Self> {
        CATALOG
            .iter()
            .find(|(name, _)| *name == id)
            .map(|&(_, f)| f)
            .ok_or_else(|| {
                let names: Vec<&str> = CATALOG.iter().map(|(n, _)| *n).collect();
                CliError::invalid(format!(
                    "unknown integrand `{}` (catalog: {})",
                    id,
                    names.join(", ")
                ))
            })
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Integrand::One => 1.0,
            Integrand::ProdX => x.iter().product(),
            Integrand::ProdXSquared => x.iter().map(|v| v * v).product(),
            Integrand::ExpSum => x.iter().sum::<f64>().exp(),
        }
    }

    pub fn exact_integral(&self, s: usize) -> f64 {
        match self {
            Integrand::One => 1.0,
            Integrand::ProdX => 0.5f64.powi(s as i32),
            Integrand::ProdXSquared => (1.0 / 3.0f64).powi(s as i32),
            Integrand::ExpSum => (std::f64::consts::E - 1.0).powi(s as i32),
        }
    }
}
