//! Least-squares rate fitting on log-log data.

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
}

/// Ordinary least squares of log(e) against log(N).
pub fn fit_rate(points: &[(f64, f64)]) -> CliResult<Fit> {
    if points.len() < 3 {
        return Err(CliError::invalid(format!(
            "rate fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(&(n, e)) = points.iter().find(|&&(n, e)| !(n > 0.0) || !(e > 0.0)) {
        return Err(CliError::invalid(format!(
            "rate fit needs positive data, got (N, e) = ({}, {})",
            n, e
        )));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(n, e)| (n.ln(), e.ln())).collect();
    let k = logs.len() as f64;
    let sx: f64 = logs.iter().map(|p| p.0).sum();
    let sy: f64 = logs.iter().map(|p| p.1).sum();
    let sxx: f64 = logs.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = logs.iter().map(|p| p.0 * p.1).sum();
    let denom = k * sxx - sx * sx;
    if denom <= 1e-12 * k * sxx {
        return Err(CliError::invalid("rate fit needs distinct N values"));
    }
    let slope = (k * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / k;
    Ok(Fit { slope, intercept })
}
