//! Precision policy shared by the determinant, solve and classification
//! routines.
//!
//! Two arithmetic modes exist. Double mode works in `f64` and decides
//! invertibility from singular values: a block is singular when
//! `sigma_min <= zero_tol * max(1, sigma_max)`, and verdicts within a factor
//! of ten of that threshold are reported as inconclusive rather than guessed.
//! Extended mode works in interval-tracked multiprecision arithmetic and
//! declares a block singular exactly when the computed |det| does not exceed
//! the accumulated rounding-error bound.
//!
//! Callers that need hard verdicts (the classifiers) re-verify double-mode
//! inconclusive verdicts at `escalation_bits` of extended precision; setting
//! that field to `None` lets the inconclusive band surface to the caller.

use serde::Serialize;

use crate::error::{Error, Result};

/// Smallest accepted extended-precision mantissa length.
pub const MIN_BITS: u32 = 53;
/// Largest accepted extended-precision mantissa length. Above this the
/// `f64`-typed error radii would underflow, so the cap is enforced here.
pub const MAX_BITS: u32 = 1024;
/// Extended precision used when a double-mode verdict lands in the
/// inconclusive band and has to be settled.
pub const DEFAULT_ESCALATION_BITS: u32 = 192;
/// Default relative threshold for the double-mode singularity test.
pub const DEFAULT_ZERO_TOL: f64 = 1e-9;
/// Default relative tolerance for residual and symmetry acceptance tests.
pub const DEFAULT_REL_TOL: f64 = 1e-12;

/// Arithmetic mode for determinant and solve kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// IEEE double precision, singular-value based verdicts.
    Double,
    /// Multiprecision with `bits` of mantissa and rigorous error radii.
    Extended { bits: u32 },
}

/// Numeric policy: mode, zero test threshold, residual tolerance, and the
/// escalation precision used to settle double-mode inconclusive verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrecisionConfig {
    pub mode: Mode,
    /// Relative singularity threshold for double mode; must be positive.
    pub zero_tol: f64,
    /// Relative tolerance for residual and Hermitian-symmetry checks.
    pub rel_tol: f64,
    /// Extended precision used to settle double-mode inconclusive verdicts.
    /// `None` disables escalation, letting inconclusive results stand.
    pub escalation_bits: Option<u32>,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Double,
            zero_tol: DEFAULT_ZERO_TOL,
            rel_tol: DEFAULT_REL_TOL,
            escalation_bits: Some(DEFAULT_ESCALATION_BITS),
        }
    }
}

impl PrecisionConfig {
    /// Double-precision policy with default tolerances.
    pub fn double() -> Self {
        Self::default()
    }

    /// Extended-precision policy at `bits` of mantissa.
    pub fn extended(bits: u32) -> Result<Self> {
        let cfg = Self {
            mode: Mode::Extended { bits },
            ..Self::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Same policy with a different zero-test threshold.
    pub fn with_zero_tol(mut self, zero_tol: f64) -> Result<Self> {
        self.zero_tol = zero_tol;
        self.validate()?;
        Ok(self)
    }

    /// Checks every field against its documented range.
    pub fn validate(&self) -> Result<()> {
        if !(self.zero_tol > 0.0 && self.zero_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "zero_tol must be positive and finite, got {}",
                self.zero_tol
            )));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "rel_tol must be positive and finite, got {}",
                self.rel_tol
            )));
        }
        if let Mode::Extended { bits } = self.mode {
            check_bits(bits)?;
        }
        if let Some(bits) = self.escalation_bits {
            check_bits(bits)?;
        }
        Ok(())
    }
}

pub(crate) fn check_bits(bits: u32) -> Result<()> {
    if !(MIN_BITS..=MAX_BITS).contains(&bits) {
        return Err(Error::InvalidConfig(format!(
            "precision must lie in [{MIN_BITS}, {MAX_BITS}] bits, got {bits}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_double_with_escalation() {
        let cfg = PrecisionConfig::default();
        assert_eq!(cfg.mode, Mode::Double);
        assert_eq!(cfg.zero_tol, 1e-9);
        assert_eq!(cfg.escalation_bits, Some(192));
        cfg.validate().unwrap();
    }

    #[test]
    fn bits_out_of_range_rejected() {
        assert!(PrecisionConfig::extended(52).is_err());
        assert!(PrecisionConfig::extended(1025).is_err());
        assert!(PrecisionConfig::extended(53).is_ok());
        assert!(PrecisionConfig::extended(1024).is_ok());
    }

    #[test]
    fn bad_tolerances_rejected() {
        assert!(PrecisionConfig::double().with_zero_tol(0.0).is_err());
        assert!(PrecisionConfig::double().with_zero_tol(f64::NAN).is_err());
        assert!(PrecisionConfig::double().with_zero_tol(1e-6).is_ok());
    }
}
