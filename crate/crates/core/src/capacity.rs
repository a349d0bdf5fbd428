//! Instantaneous capacity bounds and the outage indicator.
//!
//! With `x = osnr^(2 n_r) * det(H H^T)`:
//!
//! * lower bound `0.5 * ln(1 + L_l x)`,
//! * upper bound `0.5 * ln(L_u x)`, `-inf` when `det = 0`.
//!
//! Both are in nats. The upper bound is asymptotic, so it only dominates the
//! lower one once `x >= 1 / (L_u - L_l)` (see [`ordering_threshold`]).

use serde::{Deserialize, Serialize};

use crate::channel::{gram_determinant, gram_spectrum, ChannelConfig, ChannelMatrix};
use crate::error::{Error, Result};
use crate::power::capacity_constants;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CapacityBoundKind {
    Lower,
    Upper,
}

impl CapacityBoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CapacityBoundKind::Lower => "lower",
            CapacityBoundKind::Upper => "upper",
        }
    }
}

impl std::str::FromStr for CapacityBoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lower" => Ok(CapacityBoundKind::Lower),
            "upper" => Ok(CapacityBoundKind::Upper),
            _ => Err(Error::InvalidArgument(format!("bound must be 'lower' or 'upper', got '{s}'"))),
        }
    }
}

/// Capacity-bound evaluator with the constants computed once per config.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundConstants {
    pub l_l: f64,
    pub l_u: f64,
    pub n_r: usize,
}

impl BoundConstants {
    pub fn new(cfg: &ChannelConfig) -> Result<Self> {
        let (l_l, l_u) = capacity_constants(cfg)?;
        Ok(Self { l_l, l_u, n_r: cfg.n_r })
    }

    /// `osnr^(2 n_r)` computed in the log domain.
    fn scale(&self, osnr: f64) -> f64 {
        (2.0 * self.n_r as f64 * osnr.ln()).exp()
    }

    pub fn lower_from_det(&self, det: f64, osnr: f64) -> Result<f64> {
        check_inputs(det, osnr)?;
        if det == 0.0 || osnr == 0.0 {
            return Ok(0.0);
        }
        Ok(0.5 * (self.l_l * self.scale(osnr) * det).ln_1p())
    }

    pub fn upper_from_det(&self, det: f64, osnr: f64) -> Result<f64> {
        check_inputs(det, osnr)?;
        if det == 0.0 || osnr == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        Ok(0.5 * (self.l_u.ln() + 2.0 * self.n_r as f64 * osnr.ln() + det.ln()))
    }

    pub fn bound_from_det(&self, kind: CapacityBoundKind, det: f64, osnr: f64) -> Result<f64> {
        match kind {
            CapacityBoundKind::Lower => self.lower_from_det(det, osnr),
            CapacityBoundKind::Upper => self.upper_from_det(det, osnr),
        }
    }

    /// Outage iff the bound is strictly below `r * ln(osnr)`.
    pub fn outage_from_det(&self, kind: CapacityBoundKind, det: f64, osnr: f64, r: f64) -> Result<bool> {
        Ok(self.bound_from_det(kind, det, osnr)? < r * osnr.ln())
    }

    /// Smallest `x = osnr^(2 n_r) det` with lower bound <= upper bound.
    pub fn ordering_threshold(&self) -> f64 {
        1.0 / (self.l_u - self.l_l)
    }

    /// Limit of upper minus lower bound as `osnr -> inf`.
    pub fn asymptotic_gap(&self) -> f64 {
        0.5 * (self.l_u / self.l_l).ln()
    }
}

fn check_inputs(det: f64, osnr: f64) -> Result<()> {
    if !det.is_finite() || det < 0.0 {
        return Err(Error::InvalidArgument(format!("Gram determinant must be finite and >= 0, got {det}")));
    }
    if !osnr.is_finite() || osnr < 0.0 {
        return Err(Error::InvalidArgument(format!("osnr must be finite and >= 0, got {osnr}")));
    }
    Ok(())
}

fn det_of(h: &ChannelMatrix) -> Result<f64> {
    Ok(gram_determinant(&gram_spectrum(h)?))
}

pub fn capacity_lb(h: &ChannelMatrix, osnr: f64, cfg: &ChannelConfig) -> Result<f64> {
    BoundConstants::new(cfg)?.lower_from_det(det_of(h)?, osnr)
}

pub fn capacity_ub(h: &ChannelMatrix, osnr: f64, cfg: &ChannelConfig) -> Result<f64> {
    BoundConstants::new(cfg)?.upper_from_det(det_of(h)?, osnr)
}

pub fn outage_indicator(
    h: &ChannelMatrix,
    osnr: f64,
    r: f64,
    kind: CapacityBoundKind,
    cfg: &ChannelConfig,
) -> Result<bool> {
    if !(0.0..=cfg.n_r as f64).contains(&r) {
        return Err(Error::InvalidArgument(format!("r must lie in [0, n_r = {}], got {r}", cfg.n_r)));
    }
    BoundConstants::new(cfg)?.outage_from_det(kind, det_of(h)?, osnr, r)
}

/// `1 / (L_u - L_l)`; `+inf` when the constants coincide.
pub fn ordering_threshold(cfg: &ChannelConfig) -> Result<f64> {
    Ok(BoundConstants::new(cfg)?.ordering_threshold())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{sample_channel, sample_stream, FadingModel};
    use approx::assert_relative_eq;

    fn siso() -> ChannelConfig {
        ChannelConfig::new(1, 1, FadingModel::NegExp)
    }

    #[test]
    fn zero_determinant_edges() {
        let cfg = ChannelConfig::new(2, 2, FadingModel::NegExp);
        let h = ChannelMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(capacity_lb(&h, 1e3, &cfg).unwrap(), 0.0);
        assert_eq!(capacity_ub(&h, 1e3, &cfg).unwrap(), f64::NEG_INFINITY);
        assert!(outage_indicator(&h, 1e3, 2.0, CapacityBoundKind::Lower, &cfg).unwrap());
        assert!(!outage_indicator(&h, 1e3, 0.0, CapacityBoundKind::Lower, &cfg).unwrap());
        let one = ChannelMatrix::from_row_slice(1, 1, &[1.0]).unwrap();
        assert_eq!(capacity_lb(&one, 0.0, &siso()).unwrap(), 0.0);
    }

    #[test]
    fn siso_high_osnr_asymptote() {
        // The remainder is about 1/(2 L_l osnr^2); sigma_n = 2 puts L_l near 1.
        let cfg = siso().with_noise_sigma(2.0);
        let k = BoundConstants::new(&cfg).unwrap();
        let h = ChannelMatrix::from_row_slice(1, 1, &[1.0]).unwrap();
        let lb = capacity_lb(&h, 1e3, &cfg).unwrap();
        assert!((lb - 0.5 * (k.l_l * 1e6).ln()).abs() < 1e-6);
        let direct = 0.5 * (1.0 + k.l_l * 1e6 * 0.49).ln();
        let h = ChannelMatrix::from_row_slice(1, 1, &[0.7]).unwrap();
        assert_relative_eq!(capacity_lb(&h, 1e3, &cfg).unwrap(), direct, max_relative = 1e-12);
    }

    #[test]
    fn upper_bound_scaling() {
        let cfg = ChannelConfig::new(3, 2, FadingModel::NegExp);
        let h = sample_channel(&cfg, &mut sample_stream(4, 0)).unwrap();
        let a = capacity_ub(&h, 50.0, &cfg).unwrap();
        let b = capacity_ub(&h, 100.0, &cfg).unwrap();
        assert_relative_eq!(b - a, 2.0 * std::f64::consts::LN_2, max_relative = 1e-12);
        let k = BoundConstants::new(&cfg).unwrap();
        let x = 1.0 / k.l_u;
        assert_relative_eq!(k.upper_from_det(x, 1.0).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn gap_approaches_constant() {
        let cfg = ChannelConfig::new(3, 2, FadingModel::NegExp);
        let k = BoundConstants::new(&cfg).unwrap();
        let h = sample_channel(&cfg, &mut sample_stream(9, 0)).unwrap();
        let gap = capacity_ub(&h, 1e6, &cfg).unwrap() - capacity_lb(&h, 1e6, &cfg).unwrap();
        assert!((gap - k.asymptotic_gap()).abs() < 1e-4);
    }

    #[test]
    fn ordering_exactly_at_threshold() {
        let cfg = ChannelConfig::new(2, 1, FadingModel::NegExp);
        let k = BoundConstants::new(&cfg).unwrap();
        let x = k.ordering_threshold();
        let lb = k.lower_from_det(x, 1.0).unwrap();
        let ub = k.upper_from_det(x, 1.0).unwrap();
        assert!(lb <= ub + 1e-15);
        let below = k.lower_from_det(0.5 * x, 1.0).unwrap() > k.upper_from_det(0.5 * x, 1.0).unwrap();
        assert!(below);
    }

    #[test]
    fn strict_inequality_tie_is_not_outage() {
        let cfg = siso();
        let k = BoundConstants::new(&cfg).unwrap();
        let osnr = std::f64::consts::E;
        let det = 1.0 / (k.l_u * osnr);
        let ub = k.upper_from_det(det, osnr).unwrap();
        assert!(!k.outage_from_det(CapacityBoundKind::Upper, det, osnr, ub).unwrap());
        assert!(k.outage_from_det(CapacityBoundKind::Upper, det, osnr, ub + 1e-9).unwrap());
    }

    #[test]
    fn rejects_bad_inputs() {
        let k = BoundConstants::new(&siso()).unwrap();
        assert!(k.lower_from_det(f64::NAN, 10.0).is_err());
        assert!(k.upper_from_det(1.0, f64::INFINITY).is_err());
        let h = ChannelMatrix::from_row_slice(1, 1, &[1.0]).unwrap();
        assert!(outage_indicator(&h, 10.0, 1.5, CapacityBoundKind::Lower, &siso()).is_err());
        assert_eq!("upper".parse::<CapacityBoundKind>().unwrap(), CapacityBoundKind::Upper);
        assert!("mid".parse::<CapacityBoundKind>().is_err());
    }
}
