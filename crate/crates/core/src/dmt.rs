//! Closed-form diversity-multiplexing tradeoff curves.
//!
//! For the negative exponential channel the optimal diversity is
//! `(n_t - n_r + 1)(n_r - r)` once `l >= n_t - n_r + 1`, and is bracketed by
//! `[l (n_r - r), (n_t - n_r + 1)(n_r - r)]` below that block length.
//! Gamma-gamma and log-normal share this curve for `n_r > 1`; for a single
//! receive antenna their slopes become `rho n_t` and `theta n_t`, with
//! `theta = (ln(osnr)/2 + beta1) / sigma_l^2`.
//!
//! The RF reference curves (Rayleigh `(n_t - r)(n_r - r)` and its real-input
//! half) are included for comparison.

use serde::Serialize;

use crate::channel::{BlockLen, DistanceGrid};
use crate::error::{Error, Result};
use crate::exponent::ChannelKind;

const EXACT_TOL: f64 = 1e-12;

/// One point of a DMT curve.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DmtResult {
    pub r: f64,
    pub d_lower: f64,
    pub d_upper: f64,
    /// `d_lower == d_upper` within 1e-12.
    pub exact: bool,
    /// Block-length threshold of the regime.
    pub l_th: f64,
    /// Outage minimizer `[2(n_r - r), 0, ..., 0]`.
    pub achieving_a: Vec<f64>,
}

impl DmtResult {
    fn new(r: f64, d_lower: f64, d_upper: f64, l_th: f64, n_r: usize) -> Self {
        let mut achieving_a = vec![0.0; n_r];
        achieving_a[0] = 2.0 * (n_r as f64 - r);
        Self { r, d_lower, d_upper, exact: (d_upper - d_lower).abs() <= EXACT_TOL, l_th, achieving_a }
    }
}

fn check_sizes(n_t: usize, n_r: usize, r: f64) -> Result<()> {
    if n_r == 0 || n_r > n_t {
        return Err(Error::InvalidArgument(format!("need 1 <= n_r <= n_t, got n_t={n_t}, n_r={n_r}")));
    }
    if !(r >= 0.0 && r <= n_r as f64) {
        return Err(Error::InvalidArgument(format!("r must lie in [0, n_r = {n_r}], got {r}")));
    }
    Ok(())
}

/// Curve with slope `slope` and threshold `l_th`, lower bound `l (n_r - r)` below it.
fn thresholded(n_r: usize, l: BlockLen, r: f64, slope: f64, l_th: f64) -> DmtResult {
    let upper = slope * (n_r as f64 - r);
    let lower = match l {
        BlockLen::Infinite => upper,
        BlockLen::Finite(l) if l as f64 >= l_th => upper,
        BlockLen::Finite(l) => l as f64 * (n_r as f64 - r),
    };
    DmtResult::new(r, lower, upper, l_th, n_r)
}

/// Negative exponential channel.
pub fn dmt_negexp(n_t: usize, n_r: usize, l: BlockLen, r: f64) -> Result<DmtResult> {
    check_sizes(n_t, n_r, r)?;
    let slope = (n_t - n_r + 1) as f64;
    Ok(thresholded(n_r, l, r, slope, slope))
}

/// Gamma-gamma channel with `rho = min(rho1, rho2)`.
pub fn dmt_gammagamma(n_t: usize, n_r: usize, l: BlockLen, r: f64, rho: f64) -> Result<DmtResult> {
    check_sizes(n_t, n_r, r)?;
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::InvalidArgument(format!("rho must be positive, got {rho}")));
    }
    // Spreading evenly over all n_r entries costs rho * n_t per unit; loading the
    // first entry alone costs n_t - n_r + 1. With one receiver only the former exists.
    let even = rho * n_t as f64;
    let slope = if n_r == 1 { even } else { ((n_t - n_r + 1) as f64).min(even) };
    Ok(thresholded(n_r, l, r, slope, slope))
}

/// `theta = (ln(osnr)/2 + beta1) / sigma_l^2`.
pub fn lognormal_theta(sigma_l: f64, beta1: f64, osnr: f64) -> Result<f64> {
    if !(sigma_l.is_finite() && sigma_l > 0.0) {
        return Err(Error::InvalidArgument(format!("sigma_l must be positive, got {sigma_l}")));
    }
    if !(osnr.is_finite() && osnr > 1.0) {
        return Err(Error::InvalidArgument(format!("osnr must exceed 1, got {osnr}")));
    }
    let theta = (0.5 * osnr.ln() + beta1) / (sigma_l * sigma_l);
    if !(theta > 0.0) {
        return Err(Error::OutOfRegime(format!(
            "theta = {theta} <= 0; raise osnr or beta1 (beta1 = {beta1}, osnr = {osnr})"
        )));
    }
    Ok(theta)
}

/// Log-normal channel evaluated at a given `osnr`.
pub fn dmt_lognormal(
    n_t: usize,
    n_r: usize,
    l: BlockLen,
    r: f64,
    sigma_l: f64,
    beta1: f64,
    osnr: f64,
) -> Result<DmtResult> {
    check_sizes(n_t, n_r, r)?;
    let theta = lognormal_theta(sigma_l, beta1, osnr)?;
    if n_r > 1 {
        return dmt_negexp(n_t, n_r, l, r);
    }
    let slope = theta * n_t as f64;
    Ok(thresholded(1, l, r, slope, slope))
}

/// Dispatch on an exponent-level channel kind. The log-normal variant is
/// evaluated at `osnr = exp(log_osnr)`.
pub fn dmt_for_kind(kind: &ChannelKind, n_t: usize, n_r: usize, l: BlockLen, r: f64) -> Result<DmtResult> {
    match *kind {
        ChannelKind::NegExp => dmt_negexp(n_t, n_r, l, r),
        ChannelKind::GammaGamma { rho } => dmt_gammagamma(n_t, n_r, l, r, rho),
        ChannelKind::LogNormal { sigma_l, beta1, log_osnr } => {
            dmt_lognormal(n_t, n_r, l, r, sigma_l, beta1, log_osnr.exp())
        }
    }
}

/// Asymptotically relative diversity order of the single-receiver log-normal
/// channel, normalized by the SISO outage diversity at `r = 0`.
///
/// The block-length threshold `theta n_t` grows without bound with the OSNR,
/// so only `l = Infinite` is in the large-block regime; any finite `l` gives
/// the bracket `[0, n_t (1 - r)]`.
pub fn ardo_lognormal(n_t: usize, n_r: usize, l: BlockLen, r: f64) -> Result<(f64, f64)> {
    if n_r != 1 {
        return Err(Error::InvalidArgument(format!("ARDO is defined for n_r = 1 only, got n_r = {n_r}")));
    }
    check_sizes(n_t, n_r, r)?;
    let upper = n_t as f64 * (1.0 - r);
    Ok(match l {
        BlockLen::Infinite => (upper, upper),
        BlockLen::Finite(_) => (0.0, upper),
    })
}

/// Means of `mu_l - nu d_ij` and of its square over all antenna pairs.
pub fn beta_constants(geometry: &DistanceGrid, nu: f64, mu_l: f64) -> Result<(f64, f64)> {
    geometry.validate()?;
    if !nu.is_finite() || !mu_l.is_finite() {
        return Err(Error::InvalidArgument(format!("nu and mu_l must be finite, got nu={nu}, mu_l={mu_l}")));
    }
    let n = geometry.d.len() as f64;
    let (s1, s2) = geometry.d.iter().fold((0.0, 0.0), |(s1, s2), &d| {
        let x = mu_l - nu * d;
        (s1 + x, s2 + x * x)
    });
    Ok((s1 / n, s2 / n))
}

/// RF reference curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ReferenceScheme {
    /// Complex Rayleigh fading.
    ZhengTse,
    /// Real-valued inputs on negative exponential fading: half of `ZhengTse`.
    JaiswalBhatnagar,
}

impl ReferenceScheme {
    pub fn name(self) -> &'static str {
        match self {
            ReferenceScheme::ZhengTse => "zheng-tse",
            ReferenceScheme::JaiswalBhatnagar => "jaiswal-bhatnagar",
        }
    }
}

/// Reference curve; for `l < n_t + n_r - 1` and `r <= r_1` the lower bound is
/// `-l (r - r_1) + (n_t - r_1)(n_r - r_1)` with
/// `r_1 = n_r - ceil((l - |n_t - n_r| - 1)/2)`, clamped to `[0, upper]`.
pub fn dmt_reference(scheme: ReferenceScheme, n_t: usize, n_r: usize, l: BlockLen, r: f64) -> Result<DmtResult> {
    let m = n_t.min(n_r) as f64;
    if n_t == 0 || n_r == 0 || !(r >= 0.0 && r <= m) {
        return Err(Error::InvalidArgument(format!("r must lie in [0, min(n_t, n_r) = {m}], got {r}")));
    }
    let (nt, nr) = (n_t as f64, n_r as f64);
    let l_th = nt + nr - 1.0;
    let exact = (nt - r) * (nr - r);
    let mut lower = exact;
    if let BlockLen::Finite(l) = l {
        let lf = l as f64;
        if lf < l_th {
            let r1 = nr - ((lf - (nt - nr).abs() - 1.0) / 2.0).ceil();
            if r <= r1 {
                lower = (-lf * (r - r1) + (nt - r1) * (nr - r1)).clamp(0.0, exact);
            }
        }
    }
    let scale = match scheme {
        ReferenceScheme::ZhengTse => 1.0,
        ReferenceScheme::JaiswalBhatnagar => 0.5,
    };
    let mut res = DmtResult::new(r, scale * lower, scale * exact, l_th, n_r.max(1));
    res.achieving_a = Vec::new();
    Ok(res)
}

/// `floor((n_t + 1 + r) / 2)` clamped to `[1, n_t]`.
pub fn optimal_receive_antennas(n_t: usize, r: f64) -> Result<usize> {
    if n_t == 0 || !(r >= 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument(format!("need n_t >= 1 and r >= 0, got n_t={n_t}, r={r}")));
    }
    let n = ((n_t as f64 + 1.0 + r) / 2.0).floor() as usize;
    Ok(n.clamp(1, n_t))
}

/// Integer argmax of `(n_t - n_r + 1)(n_r - r)` over `n_r in [max(1, ceil r), n_t]`,
/// smallest `n_r` on ties.
pub fn argmax_receive_antennas(n_t: usize, r: f64) -> usize {
    let lo = (r.ceil() as usize).max(1).min(n_t);
    let mut best = (f64::NEG_INFINITY, lo);
    for n_r in lo..=n_t {
        let d = (n_t - n_r + 1) as f64 * (n_r as f64 - r);
        if d > best.0 {
            best = (d, n_r);
        }
    }
    best.1
}

/// Inclusive grid `start, start + step, ..., stop` with `round((stop - start)/step) + 1` points.
pub fn r_grid(start: f64, step: f64, stop: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(Error::InvalidArgument(format!("bad r grid {start}:{step}:{stop}")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..n)
        .map(
            |i| {
                if i + 1 == n && ((start + i as f64 * step) - stop).abs() < 1e-9 {
                    stop
                } else {
                    start + i as f64 * step
                }
            },
        )
        .collect())
}
