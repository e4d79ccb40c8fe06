//! Time-stepping plan shared by the spin and particle evolutions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// ±1, the sign in front of `i` in the literal step operator `I + i·sign·HΔt/ℏ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(format!("sign must be +1 or -1, got {v}")),
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepMode {
    /// Spins only: `I + i·sign·HΔt/ℏ` per term, applied verbatim.
    LiteralPaper,
    /// Spins only: `exp(−i·HΔt/ℏ)` per term.
    ExactTerm,
    /// Particles only: kinetic sweep, then potential.
    Lie,
    /// Symmetrized sweep, for either problem type.
    Strang,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolutionPlan {
    pub dt: f64,
    pub total_time: f64,
    pub mode: StepMode,
    pub sample_stride: u64,
    pub seed: u64,
    pub shots: u64,
    pub literal_sign: Sign,
    pub renormalize_after_step: bool,
    pub paper_literal_signs: bool,
    pub minimal_image: bool,
}

impl EvolutionPlan {
    pub fn new(dt: f64, total_time: f64, mode: StepMode) -> Self {
        Self {
            dt,
            total_time,
            mode,
            sample_stride: 1,
            seed: 0,
            shots: 0,
            literal_sign: Sign::Plus,
            renormalize_after_step: false,
            paper_literal_signs: false,
            minimal_image: false,
        }
    }

    pub fn with_stride(mut self, stride: u64) -> Self {
        self.sample_stride = stride;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidPlan(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.total_time > 0.0 && self.total_time.is_finite()) {
            return Err(Error::InvalidPlan(format!(
                "total time must be positive, got {}",
                self.total_time
            )));
        }
        if self.sample_stride == 0 {
            return Err(Error::InvalidPlan("sample_stride must be at least 1".into()));
        }
        if (self.total_time / self.dt).round() < 1.0 {
            return Err(Error::InvalidPlan(format!(
                "total time {} rounds to zero steps of {}",
                self.total_time, self.dt
            )));
        }
        Ok(())
    }

    /// `round(T/Δt)`.
    pub fn steps(&self) -> Result<u64> {
        self.validate()?;
        Ok((self.total_time / self.dt).round() as u64)
    }

    /// `steps·Δt`, the time actually simulated.
    pub fn realized_time(&self) -> Result<f64> {
        Ok(self.steps()? as f64 * self.dt)
    }

    pub fn is_sample_step(&self, step: u64) -> bool {
        step.is_multiple_of(self.sample_stride)
    }

    /// Number of trajectory records: `floor(steps/stride) + 1`.
    pub fn record_count(&self) -> Result<u64> {
        Ok(self.steps()? / self.sample_stride + 1)
    }
}

/// One sampled point of an evolution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub step: u64,
    pub time: f64,
    pub norm: f64,
    pub values: Vec<f64>,
}
