//! Random-coding simulation with ML decoding and the pairwise union bound.
//!
//! A codebook holds `M = round(osnr^(l r))` codewords of shape `n_t x l` with
//! i.i.d. truncated-exponential entries. The receiver sees `Y = H X + Z` with
//! `Z` i.i.d. `N(0, s^2)`, `s = E / osnr`, and decodes to the codeword
//! closest in Frobenius norm. Codeword 0 is always the one sent.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{gram_spectrum, BlockLen, ChannelConfig, ChannelMatrix, StreamFamily};
use crate::error::{Error, Result};
use crate::exponent::{infimum_analytic, ChannelKind, ExponentProblem};
use crate::outage::EstimateWithCI;
use crate::power::{g_factor, sample_input, InputLaw};

/// Largest codebook the simulator will build.
pub const M_CAP: usize = 1 << 16;

/// `round(osnr^(l r))`, computed in the log domain.
pub fn codebook_size(osnr: f64, l: u32, r: f64) -> f64 {
    (l as f64 * r * osnr.ln()).exp().round()
}

/// `M` codewords stored back to back, each `n_t x l` in column-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct Codebook {
    pub n_t: usize,
    pub l: usize,
    pub entries: Vec<f64>,
    pub law: InputLaw,
    pub seed: Option<u64>,
}

impl Codebook {
    pub fn len(&self) -> usize {
        self.entries.len() / (self.n_t * self.l)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn codeword(&self, m: usize) -> DMatrix<f64> {
        let w = self.n_t * self.l;
        DMatrix::from_column_slice(self.n_t, self.l, &self.entries[m * w..(m + 1) * w])
    }

    /// Codebook from explicit codewords.
    pub fn from_codewords(words: &[DMatrix<f64>], law: InputLaw) -> Result<Self> {
        let first = words.first().ok_or_else(|| Error::InvalidArgument("empty codebook".into()))?;
        let (n_t, l) = first.shape();
        if words.iter().any(|w| w.shape() != (n_t, l)) {
            return Err(Error::InvalidArgument("codewords differ in shape".into()));
        }
        let entries = words.iter().flat_map(|w| w.iter().copied()).collect();
        Ok(Self { n_t, l, entries, law, seed: None })
    }
}

fn checked_size(osnr: f64, l: u32, r: f64) -> Result<usize> {
    if !(osnr.is_finite() && osnr > 1.0) || l == 0 || !(r >= 0.0) {
        return Err(Error::InvalidArgument(format!("need osnr > 1, l >= 1, r >= 0; got osnr={osnr}, l={l}, r={r}")));
    }
    let m = codebook_size(osnr, l, r);
    if !(m >= 2.0 && m <= M_CAP as f64) {
        return Err(Error::CodebookInfeasible { m, cap: M_CAP });
    }
    Ok(m as usize)
}

/// Fresh codebook for rate `r` at `osnr` and block length `l`.
pub fn generate_codebook<R: Rng + ?Sized>(
    cfg: &ChannelConfig,
    r: f64,
    osnr: f64,
    l: u32,
    law: &InputLaw,
    rng: &mut R,
) -> Result<Codebook> {
    let m = checked_size(osnr, l, r)?;
    let len = m * cfg.n_t * l as usize;
    let entries = (0..len).map(|_| sample_input(law, rng)).collect();
    Ok(Codebook { n_t: cfg.n_t, l: l as usize, entries, law: *law, seed: None })
}

/// Index minimizing `||Y - H X(m)||_F`; the smallest index wins ties.
pub fn ml_decode(y: &DMatrix<f64>, h: &ChannelMatrix, codebook: &Codebook) -> Result<usize> {
    let (n_r, n_t) = h.entries.shape();
    if n_t != codebook.n_t || y.shape() != (n_r, codebook.l) {
        return Err(Error::InvalidArgument(format!(
            "shape mismatch: Y {:?}, H {n_r}x{n_t}, codewords {}x{}",
            y.shape(),
            codebook.n_t,
            codebook.l
        )));
    }
    let w = n_t * codebook.l;
    let mut best = (f64::INFINITY, 0);
    for (m, x) in codebook.entries.chunks_exact(w).enumerate() {
        let mut dist = 0.0;
        for t in 0..codebook.l {
            for i in 0..n_r {
                let mut v = y[(i, t)];
                for j in 0..n_t {
                    v -= h.entries[(i, j)] * x[t * n_t + j];
                }
                dist += v * v;
            }
        }
        if dist < best.0 {
            best = (dist, m);
        }
    }
    Ok(best.1)
}

/// `osnr^(l r) * prod_i (1 + (g/2) osnr^2 lambda_i)^(-l/2)`. Not capped at 1.
pub fn pairwise_union_bound(h: &ChannelMatrix, osnr: f64, l: u32, r: f64, law: &InputLaw) -> Result<f64> {
    if !(osnr.is_finite() && osnr > 0.0) {
        return Err(Error::InvalidArgument(format!("osnr must be finite and positive, got {osnr}")));
    }
    let g = g_factor(law);
    let lf = l as f64;
    let log_b = gram_spectrum(h)?
        .iter()
        .fold(lf * r * osnr.ln(), |acc, &lam| acc - 0.5 * lf * (0.5 * g * osnr * osnr * lam).ln_1p());
    Ok(log_b.exp())
}

/// Whether each trial draws its own codebook.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub enum CodebookMode {
    /// Ensemble average: a fresh codebook per trial.
    #[default]
    Ensemble,
    /// One codebook shared by every trial.
    Fixed,
}

fn noisy_observation<R: Rng + ?Sized>(h: &ChannelMatrix, x: &DMatrix<f64>, sigma: f64, rng: &mut R) -> DMatrix<f64> {
    let mut y = &h.entries * x;
    for v in y.iter_mut() {
        *v += sigma * rng.sample::<f64, _>(StandardNormal);
    }
    y
}

/// Frequency of ML decoding errors over `n_trials` at fixed `H`.
pub fn simulate_conditional_error(
    h: &ChannelMatrix,
    cfg: &ChannelConfig,
    r: f64,
    osnr: f64,
    l: u32,
    n_trials: u64,
    seed: u64,
) -> Result<EstimateWithCI> {
    simulate_conditional_error_with(h, cfg, r, osnr, l, n_trials, seed, CodebookMode::Ensemble)
}

/// [`simulate_conditional_error`] with an explicit codebook mode. Trial `t`
/// uses stream `t` of the seed's family; the fixed codebook uses stream
/// `u64::MAX`.
#[allow(clippy::too_many_arguments)]
pub fn simulate_conditional_error_with(
    h: &ChannelMatrix,
    cfg: &ChannelConfig,
    r: f64,
    osnr: f64,
    l: u32,
    n_trials: u64,
    seed: u64,
    mode: CodebookMode,
) -> Result<EstimateWithCI> {
    cfg.validate()?;
    if n_trials == 0 {
        return Err(Error::InvalidArgument("n_trials must be at least 1".into()));
    }
    if h.entries.shape() != (cfg.n_r, cfg.n_t) {
        return Err(Error::InvalidArgument("H does not match the configured dimensions".into()));
    }
    checked_size(osnr, l, r)?;
    let law = InputLaw::for_config(cfg)?;
    let sigma = cfg.avg_power / osnr;
    let streams = StreamFamily::new(seed);
    let fixed = match mode {
        CodebookMode::Fixed => Some(generate_codebook(cfg, r, osnr, l, &law, &mut streams.stream(u64::MAX))?),
        CodebookMode::Ensemble => None,
    };
    let errors = (0..n_trials)
        .into_par_iter()
        .map(|t| -> Result<u64> {
            let mut rng = streams.stream(t);
            let fresh;
            let book = match &fixed {
                Some(b) => b,
                None => {
                    fresh = generate_codebook(cfg, r, osnr, l, &law, &mut rng)?;
                    &fresh
                }
            };
            let y = noisy_observation(h, &book.codeword(0), sigma, &mut rng);
            Ok(u64::from(ml_decode(&y, h, book)? != 0))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(EstimateWithCI::from_counts(errors, n_trials, seed))
}

/// Outage exponent, coding exponent and their minimum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExponentComponents {
    pub d_out: f64,
    pub d_te: f64,
    pub combined: f64,
}

/// Exponents of the two error terms at rate `r` and block length `l`.
///
/// Both come from the analytic optimizer; `l = Infinite` drops the coding
/// term, which is unbounded.
pub fn error_exponent_components(
    kind: ChannelKind,
    n_t: usize,
    n_r: usize,
    r: f64,
    l: BlockLen,
) -> Result<ExponentComponents> {
    let d_out = infimum_analytic(&ExponentProblem::outage(kind, n_t, n_r, r))?.value;
    let d_te = match l {
        BlockLen::Infinite => f64::INFINITY,
        BlockLen::Finite(l) => infimum_analytic(&ExponentProblem::coding(kind, n_t, n_r, r, l))?.value,
    };
    Ok(ExponentComponents { d_out, d_te, combined: d_out.min(d_te) })
}
