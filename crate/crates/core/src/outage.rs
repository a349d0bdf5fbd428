//! Monte Carlo outage probability and diversity-slope fitting.
//!
//! Sample `i` of a run draws its channel from stream `i` of the family keyed
//! by the seed, and hits are summed as integers, so the estimate does not
//! depend on how rayon splits the work. [`estimate_outage_sweep`] reuses each
//! draw for every OSNR point, which couples the estimates across the sweep.

use log::{info, warn};
use rayon::prelude::*;
use serde::Serialize;

use crate::capacity::{BoundConstants, CapacityBoundKind};
use crate::channel::{gram_determinant, gram_spectrum, ChannelConfig, ChannelSampler, StreamFamily};
use crate::error::{Error, Result};

/// Minimum hit count for a point to enter the slope fit.
pub const HIT_FLOOR: u64 = 20;
/// Fewest usable points for a slope fit.
pub const MIN_FIT_POINTS: usize = 3;
const Z_95: f64 = 1.96;

/// `10^(db / 10)`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Binomial proportion with a 95% normal-approximation half width.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EstimateWithCI {
    pub p_hat: f64,
    pub half_width: f64,
    pub n_samples: u64,
    pub n_hits: u64,
    pub seed: u64,
}

impl EstimateWithCI {
    pub fn from_counts(n_hits: u64, n_samples: u64, seed: u64) -> Self {
        let p = n_hits as f64 / n_samples as f64;
        Self { p_hat: p, half_width: Z_95 * (p * (1.0 - p) / n_samples as f64).sqrt(), n_samples, n_hits, seed }
    }

    /// Standard error `sqrt(p (1 - p) / n)`.
    pub fn std_error(&self) -> f64 {
        self.half_width / Z_95
    }
}

/// Least-squares fit of `log10 p` against `log10 osnr`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlopeFit {
    /// Negated slope.
    pub d_hat: f64,
    pub stderr: f64,
    /// `(osnr_db, log10 p_hat)` of the points used.
    pub points: Vec<(f64, f64)>,
    /// `(osnr_db, n_hits)` of the points dropped by the hit floor.
    pub excluded: Vec<(f64, u64)>,
}

fn check_request(cfg: &ChannelConfig, r: f64, osnrs: &[f64], n_samples: u64) -> Result<()> {
    cfg.validate()?;
    if n_samples == 0 {
        return Err(Error::InvalidArgument("n_samples must be at least 1".into()));
    }
    if !(r >= 0.0 && r <= cfg.n_r as f64) {
        return Err(Error::InvalidArgument(format!("r must lie in [0, n_r = {}], got {r}", cfg.n_r)));
    }
    if let Some(&bad) = osnrs.iter().find(|o| !(o.is_finite() && **o > 0.0)) {
        return Err(Error::InvalidArgument(format!("osnr must be finite and positive, got {bad}")));
    }
    Ok(())
}

/// True when the outage boundary `lower bound = r ln(osnr)` lies below the
/// bound-ordering threshold, where the two capacity bounds cross.
pub fn below_ordering_threshold(k: &BoundConstants, r: f64, osnr: f64) -> bool {
    if r == 0.0 {
        return false;
    }
    let x_boundary = (2.0 * r * osnr.ln()).exp_m1() / k.l_l;
    x_boundary < k.ordering_threshold()
}

/// Outage estimates at several OSNR values from one shared set of channel draws.
pub fn estimate_outage_sweep(
    cfg: &ChannelConfig,
    r: f64,
    osnrs: &[f64],
    n_samples: u64,
    seed: u64,
    kind: CapacityBoundKind,
) -> Result<Vec<EstimateWithCI>> {
    check_request(cfg, r, osnrs, n_samples)?;
    let k = BoundConstants::new(cfg)?;
    for &o in osnrs {
        if below_ordering_threshold(&k, r, o) {
            warn!(
                "osnr {o:.4e}: outage boundary lies below the bound-ordering threshold {:.4e}; bounds are not ordered there",
                k.ordering_threshold()
            );
        }
    }
    let sampler = ChannelSampler::new(cfg)?;
    let streams = StreamFamily::new(seed);
    let m = osnrs.len();
    let hits = (0..n_samples)
        .into_par_iter()
        .try_fold(
            || vec![0u64; m],
            |mut acc, i| -> Result<Vec<u64>> {
                let h = sampler.sample_indexed(&streams, seed, i);
                let det = gram_determinant(&gram_spectrum(&h)?);
                for (slot, &o) in acc.iter_mut().zip(osnrs) {
                    if k.outage_from_det(kind, det, o, r)? {
                        *slot += 1;
                    }
                }
                Ok(acc)
            },
        )
        .try_reduce(
            || vec![0u64; m],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )?;
    Ok(hits.into_iter().map(|h| EstimateWithCI::from_counts(h, n_samples, seed)).collect())
}

/// Fraction of `n_samples` channel draws in outage at one OSNR.
pub fn estimate_outage(
    cfg: &ChannelConfig,
    r: f64,
    osnr: f64,
    n_samples: u64,
    seed: u64,
    kind: CapacityBoundKind,
) -> Result<EstimateWithCI> {
    Ok(estimate_outage_sweep(cfg, r, &[osnr], n_samples, seed, kind)?[0])
}

/// Fit `-d log10 p / d log10 osnr` over points with at least `hit_floor` hits.
pub fn fit_slope(osnr_db: &[f64], estimates: &[EstimateWithCI], hit_floor: u64) -> Result<SlopeFit> {
    if osnr_db.len() != estimates.len() {
        return Err(Error::InvalidArgument("osnr list and estimates differ in length".into()));
    }
    let mut points = Vec::new();
    let mut excluded = Vec::new();
    for (&db, e) in osnr_db.iter().zip(estimates) {
        if e.n_hits >= hit_floor && e.p_hat > 0.0 {
            points.push((db, e.p_hat.log10()));
        } else {
            excluded.push((db, e.n_hits));
        }
    }
    for (db, hits) in &excluded {
        info!("slope fit drops osnr {db} dB with {hits} hits (floor {hit_floor})");
    }
    if points.len() < MIN_FIT_POINTS {
        return Err(Error::FitInfeasible {
            hit_floor,
            hits: osnr_db.iter().zip(estimates).map(|(&d, e)| (d, e.n_hits)).collect(),
        });
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0 / 10.0).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("slope fit needs distinct osnr values".into()));
    }
    let sxy: f64 = xs.iter().zip(&points).map(|(x, p)| (x - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let ssr: f64 = xs.iter().zip(&points).map(|(x, p)| (p.1 - my - slope * (x - mx)).powi(2)).sum();
    let stderr = (ssr / (n - 2.0) / sxx).sqrt();
    Ok(SlopeFit { d_hat: -slope, stderr, points, excluded })
}

/// Coupled sweep over `osnr_db_list` followed by [`fit_slope`] with [`HIT_FLOOR`].
pub fn sweep_and_fit(
    cfg: &ChannelConfig,
    r: f64,
    osnr_db_list: &[f64],
    n_samples: u64,
    seed: u64,
    kind: CapacityBoundKind,
) -> Result<(Vec<EstimateWithCI>, SlopeFit)> {
    let osnrs: Vec<f64> = osnr_db_list.iter().map(|&d| db_to_linear(d)).collect();
    let est = estimate_outage_sweep(cfg, r, &osnrs, n_samples, seed, kind)?;
    let fit = fit_slope(osnr_db_list, &est, HIT_FLOOR)?;
    Ok((est, fit))
}
