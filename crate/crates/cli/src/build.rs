//! Turn CLI flags into nets and weights.

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use hdnet_core::quality::DEFAULT_NODE_LIMIT;
use hdnet_core::{
    exact_t_value, faure_matrices, interlace, interlaced_t_bound, read_matrices,
    sequence_to_net, sobol_matrices, GeneratingMatrices, Weights,
};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorKind {
    Faure,
    Sobol,
    File(PathBuf),
}

impl GeneratorKind {
    pub fn parse(spec: &str) -> CliResult<Self> {
        match spec {
            "faure" => Ok(GeneratorKind::Faure),
            "sobol" => Ok(GeneratorKind::Sobol),
            other => match other.strip_prefix("file:") {
                Some(path) if !path.is_empty() => Ok(GeneratorKind::File(path.into())),
                _ => Err(CliError::invalid(format!(
                    "unknown generator `{}` (expected faure, sobol or file:PATH)",
                    other
                ))),
            },
        }
    }
}

/// Build the raw (pre-interlacing) matrices of a generator.
pub fn build_matrices(
    kind: &GeneratorKind,
    b: u8,
    s: usize,
    m: usize,
) -> CliResult<GeneratingMatrices> {
    match kind {
        GeneratorKind::Faure => Ok(faure_matrices(b, s, m)?),
        GeneratorKind::Sobol => {
            if b != 2 {
                return Err(CliError::invalid(format!(
                    "sobol matrices are base 2, got --b {}",
                    b
                )));
            }
            Ok(sobol_matrices(s, m)?)
        }
        GeneratorKind::File(path) => {
            let file = File::open(path)
                .map_err(|e| CliError::invalid(format!("cannot open {}: {}", path.display(), e)))?;
            Ok(read_matrices(BufReader::new(file))?)
        }
    }
}

/// A net built for a sweep in target convention: `s` is the dimension of
/// the integration domain; the generator supplies s*factor order-1
/// coordinates which are interlaced down.
pub struct SweepNet {
    pub net: GeneratingMatrices,
    /// Exact order-1 t-value of the source.
    pub t_source: u64,
    /// Order-`factor` t-value certified by the interlacing bound.
    pub t_certified: u64,
}

pub fn build_sweep_net(
    kind: &GeneratorKind,
    b: u8,
    s: usize,
    factor: usize,
    m: usize,
) -> CliResult<SweepNet> {
    if factor == 0 {
        return Err(CliError::invalid("interlacing factor must be positive"));
    }
    let source = match kind {
        GeneratorKind::File(_) => {
            // a stored square digital sequence, truncated to its upper-left
            // m x m blocks for each sweep point
            let stored = build_matrices(kind, b, s * factor, m)?;
            if stored.rows() != stored.cols() {
                return Err(CliError::invalid(
                    "sweep sources from a file must be square sequence matrices",
                ));
            }
            if m > stored.cols() {
                return Err(CliError::invalid(format!(
                    "m = {} beyond the stored sequence size {}",
                    m,
                    stored.cols()
                )));
            }
            if stored.dimension() != s * factor {
                return Err(CliError::invalid(format!(
                    "file provides {} coordinates, the sweep needs s * interlace = {}",
                    stored.dimension(),
                    s * factor
                )));
            }
            sequence_to_net(&stored, m)?
        }
        _ => build_matrices(kind, b, s * factor, m)?,
    };
    let t_source = exact_t_value(&source, 1, DEFAULT_NODE_LIMIT)?;
    let t_certified = interlaced_t_bound(t_source as usize, factor, s, m) as u64;
    let net = if factor == 1 {
        source
    } else {
        interlace(&source, factor)?
    };
    Ok(SweepNet {
        net,
        t_source,
        t_certified,
    })
}

#[derive(Debug, Deserialize)]
struct GammaEntry {
    u: Vec<usize>,
    gamma: f64,
}

/// Parse the weight flag: `product:g1,g2,...` (one value replicates) or
/// `explicit:@file.json` with entries like {"u": [1,3], "gamma": 0.5}
/// (1-based coordinates, absent subsets weigh 0). Default: product 1.
pub fn parse_gamma(spec: Option<&str>, s: usize) -> CliResult<Weights> {
    let Some(spec) = spec else {
        return Ok(Weights::uniform_product(s, 1.0)?);
    };
    if let Some(list) = spec.strip_prefix("product:") {
        let values: Vec<f64> = list
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::invalid(format!("bad weight `{}`", v)))
            })
            .collect::<CliResult<_>>()?;
        let values = if values.len() == 1 {
            vec![values[0]; s]
        } else if values.len() == s {
            values
        } else {
            return Err(CliError::invalid(format!(
                "product weights need 1 or {} values, got {}",
                s,
                values.len()
            )));
        };
        return Ok(Weights::product(values)?);
    }
    if let Some(path) = spec.strip_prefix("explicit:@") {
        let file = File::open(path)
            .map_err(|e| CliError::invalid(format!("cannot open {}: {}", path, e)))?;
        let entries: Vec<GammaEntry> = serde_json::from_reader(BufReader::new(file))
            .map_err(|e| CliError::invalid(format!("bad weight file {}: {}", path, e)))?;
        let mut masks = Vec::with_capacity(entries.len());
        for e in &entries {
            let mut mask = 0u64;
            for &j in &e.u {
                if j == 0 || j > s {
                    return Err(CliError::invalid(format!(
                        "coordinate {} outside 1..={}",
                        j, s
                    )));
                }
                mask |= 1 << (j - 1);
            }
            masks.push((mask, e.gamma));
        }
        return Ok(Weights::explicit(s, masks)?);
    }
    Err(CliError::invalid(format!(
        "bad --gamma `{}` (expected product:... or explicit:@file.json)",
        spec
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_parsing() {
        assert_eq!(GeneratorKind::parse("faure").unwrap(), GeneratorKind::Faure);
        assert_eq!(GeneratorKind::parse("sobol").unwrap(), GeneratorKind::Sobol);
        assert_eq!(
            GeneratorKind::parse("file:/tmp/x.txt").unwrap(),
            GeneratorKind::File("/tmp/x.txt".into())
        );
        assert!(GeneratorKind::parse("halton").is_err());
        assert!(GeneratorKind::parse("file:").is_err());
    }

    #[test]
    fn gamma_defaults_and_product() {
        let w = parse_gamma(None, 3).unwrap();
        assert_eq!(w.gamma(0b111), 1.0);
        let w = parse_gamma(Some("product:0.5"), 3).unwrap();
        assert_eq!(w.gamma(0b11), 0.25);
        let w = parse_gamma(Some("product:0.5,0.25,1.0"), 3).unwrap();
        assert_eq!(w.gamma(0b011), 0.125);
        assert!(parse_gamma(Some("product:0.5,0.25"), 3).is_err());
        assert!(parse_gamma(Some("prod:1"), 3).is_err());
    }

    #[test]
    fn sweep_net_shapes() {
        let sn = build_sweep_net(&GeneratorKind::Sobol, 2, 1, 4, 3).unwrap();
        assert_eq!(sn.net.dimension(), 1);
        assert_eq!(sn.net.rows(), 12);
        assert_eq!(sn.net.cols(), 3);
        assert!(sn.t_certified <= 4 * 3);
    }

    #[test]
    fn sobol_base_guard() {
        assert!(build_matrices(&GeneratorKind::Sobol, 3, 2, 3).is_err());
    }
}
