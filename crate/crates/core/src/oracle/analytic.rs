use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Closed-form reference observables.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AnalyticCase {
    /// `⟨Z⟩(t) = cos(2ωt)` for `H = ω·X` starting from `|0⟩`, `ℏ = 1`.
    Rabi { omega: f64 },
    /// `σ(t) = σ₀·√(1 + (ℏt/(2mσ₀²))²)` for a free Gaussian packet.
    FreeWidth { sigma0: f64, mass: f64, hbar: f64 },
    /// `⟨x⟩(t) − center = x₀·cos(ωt) + p₀/(mω)·sin(ωt)` in a harmonic well.
    HarmonicMeanX { x0: f64, p0: f64, mass: f64, omega: f64 },
}

pub const ANALYTIC_CASES: [&str; 3] = ["rabi", "free_width", "harmonic_mean_x"];

impl AnalyticCase {
    /// Builds a case from its name and named parameters. `mass` and `hbar`
    /// default to 1 and `p0` to 0.
    pub fn from_name(name: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let get = |key: &str, default: Option<f64>| -> Result<f64> {
            params
                .get(key)
                .copied()
                .or(default)
                .ok_or_else(|| Error::validation(format!("analytic case `{name}` needs parameter `{key}`")))
        };
        let case = match name {
            "rabi" => AnalyticCase::Rabi { omega: get("omega", None)? },
            "free_width" => AnalyticCase::FreeWidth {
                sigma0: get("sigma0", None)?,
                mass: get("mass", Some(1.0))?,
                hbar: get("hbar", Some(1.0))?,
            },
            "harmonic_mean_x" => AnalyticCase::HarmonicMeanX {
                x0: get("x0", None)?,
                p0: get("p0", Some(0.0))?,
                mass: get("mass", Some(1.0))?,
                omega: get("omega", None)?,
            },
            other => return Err(Error::UnknownAnalyticCase(other.to_string())),
        };
        Ok(case)
    }

    pub fn value(&self, t: f64) -> f64 {
        match *self {
            AnalyticCase::Rabi { omega } => (2.0 * omega * t).cos(),
            AnalyticCase::FreeWidth { sigma0, mass, hbar } => {
                sigma0 * (1.0 + (hbar * t / (2.0 * mass * sigma0 * sigma0)).powi(2)).sqrt()
            }
            AnalyticCase::HarmonicMeanX { x0, p0, mass, omega } => {
                x0 * (omega * t).cos() + p0 / (mass * omega) * (omega * t).sin()
            }
        }
    }
}

pub fn analytic_suite(name: &str, params: &BTreeMap<String, f64>, t: f64) -> Result<f64> {
    Ok(AnalyticCase::from_name(name, params)?.value(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn params(kv: &[(&str, f64)]) -> BTreeMap<String, f64> {
        kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn closed_forms() {
        assert_eq!(analytic_suite("rabi", &params(&[("omega", 1.0)]), 0.0).unwrap(), 1.0);
        assert_eq!(analytic_suite("free_width", &params(&[("sigma0", 0.3)]), 0.0).unwrap(), 0.3);
        let x = analytic_suite("harmonic_mean_x", &params(&[("x0", 2.0), ("omega", 2.0)]), PI / 2.0).unwrap();
        assert!((x + 2.0).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            analytic_suite("morse", &BTreeMap::new(), 0.0),
            Err(Error::UnknownAnalyticCase(_))
        ));
        assert!(analytic_suite("rabi", &BTreeMap::new(), 0.0).is_err());
    }
}
