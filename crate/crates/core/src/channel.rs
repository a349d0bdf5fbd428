//! Channel and fading data model.
//!
//! A channel realization is an `n_r x n_t` matrix with entries
//! `h_ij = exp(-nu * d_ij) * h^r`, where `h^r` is a turbulence draw from one of
//! three laws (negative exponential, gamma-gamma, log-normal). All entries are
//! independent. The spectral helpers work on the Gram matrix `H * H^T`.
//!
//! Randomness is always passed in explicitly. [`sample_stream`] derives an
//! independent ChaCha8 stream from `(seed, index)` so that Monte Carlo loops
//! can be split across workers without changing their output.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Seeded random stream used by every sampler in the crate.
pub type SeededStream = ChaCha8Rng;

/// Exponent assigned to eigenvalues clamped to zero.
pub const A_MAX_SENTINEL: f64 = 64.0;

/// Relative threshold below which Gram eigenvalues are clamped to zero.
pub const SPD_REL_EPS: f64 = 1e-12;

/// Stream number `index` of the family keyed by `seed`.
///
/// The key depends only on `seed`; the stream id is `index`. Two calls with
/// the same arguments always produce the same sequence.
pub fn sample_stream(seed: u64, index: u64) -> SeededStream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Builds per-index streams without re-deriving the key each time.
#[derive(Clone, Debug)]
pub struct StreamFamily {
    key: [u8; 32],
}

impl StreamFamily {
    pub fn new(seed: u64) -> Self {
        Self { key: ChaCha8Rng::seed_from_u64(seed).get_seed() }
    }

    /// Equal to `sample_stream(seed, index)`.
    pub fn stream(&self, index: u64) -> SeededStream {
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(index);
        rng
    }
}

/// Block length `l`: number of channel uses over which H stays fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockLen {
    Finite(u32),
    Infinite,
}

impl BlockLen {
    pub fn as_f64(self) -> f64 {
        match self {
            BlockLen::Finite(l) => l as f64,
            BlockLen::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, BlockLen::Infinite)
    }
}

impl std::fmt::Display for BlockLen {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BlockLen::Finite(l) => write!(f, "{l}"),
            BlockLen::Infinite => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for BlockLen {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinite") {
            return Ok(BlockLen::Infinite);
        }
        match t.parse::<u32>() {
            Ok(l) if l > 0 => Ok(BlockLen::Finite(l)),
            _ => Err(Error::InvalidArgument(format!("block length must be a positive integer or 'inf', got '{s}'"))),
        }
    }
}

impl Serialize for BlockLen {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            BlockLen::Finite(l) => s.serialize_u32(*l),
            BlockLen::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for BlockLen {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(l) if l > 0 && l <= u32::MAX as u64 => Ok(BlockLen::Finite(l as u32)),
            Raw::Int(l) => Err(serde::de::Error::custom(format!("block_len {l} out of range"))),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Turbulence law of the random part `h^r`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FadingModel {
    #[serde(alias = "negexp", alias = "ne")]
    NegExp,
    #[serde(rename = "gg", alias = "gammagamma")]
    GammaGamma { rho1: f64, rho2: f64 },
    #[serde(rename = "ln", alias = "lognormal")]
    LogNormal { mu_l: f64, sigma_l: f64 },
}

impl FadingModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            FadingModel::NegExp => Ok(()),
            FadingModel::GammaGamma { rho1, rho2 } => {
                if !(rho1.is_finite() && rho2.is_finite() && rho1 > 0.0 && rho2 > 0.0) {
                    return Err(Error::InvalidConfig(format!(
                        "gamma-gamma shapes must be positive and finite, got rho1={rho1}, rho2={rho2}"
                    )));
                }
                if rho2 > rho1 {
                    return Err(Error::InvalidConfig(format!(
                        "gamma-gamma requires rho2 <= rho1, got rho1={rho1}, rho2={rho2}"
                    )));
                }
                Ok(())
            }
            FadingModel::LogNormal { mu_l, sigma_l } => {
                if !mu_l.is_finite() || !(sigma_l.is_finite() && sigma_l > 0.0) {
                    return Err(Error::InvalidConfig(format!(
                        "log-normal requires finite mu_l and sigma_l > 0, got mu_l={mu_l}, sigma_l={sigma_l}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// `min(rho1, rho2)` for gamma-gamma, `None` otherwise.
    pub fn rho(&self) -> Option<f64> {
        match *self {
            FadingModel::GammaGamma { rho1, rho2 } => Some(rho1.min(rho2)),
            _ => None,
        }
    }

    /// Mean of one turbulence draw.
    pub fn mean(&self) -> f64 {
        match *self {
            FadingModel::NegExp | FadingModel::GammaGamma { .. } => 1.0,
            FadingModel::LogNormal { mu_l, sigma_l } => (mu_l + 0.5 * sigma_l * sigma_l).exp(),
        }
    }

    /// Variance of one turbulence draw.
    pub fn variance(&self) -> f64 {
        match *self {
            FadingModel::NegExp => 1.0,
            FadingModel::GammaGamma { rho1, rho2 } => (1.0 + 1.0 / rho1) * (1.0 + 1.0 / rho2) - 1.0,
            FadingModel::LogNormal { mu_l, sigma_l } => {
                let s2 = sigma_l * sigma_l;
                (s2.exp() - 1.0) * (2.0 * mu_l + s2).exp()
            }
        }
    }
}

/// Prepared sampler for a validated fading model.
#[derive(Clone, Copy, Debug)]
pub enum TurbulenceSampler {
    NegExp,
    GammaGamma(Gamma<f64>, Gamma<f64>),
    LogNormal(Normal<f64>),
}

impl TurbulenceSampler {
    pub fn new(model: &FadingModel) -> Result<Self> {
        model.validate()?;
        Ok(match *model {
            FadingModel::NegExp => TurbulenceSampler::NegExp,
            FadingModel::GammaGamma { rho1, rho2 } => {
                let g1 =
                    Gamma::new(rho1, 1.0 / rho1).map_err(|e| Error::InvalidConfig(format!("gamma factor 1: {e}")))?;
                let g2 =
                    Gamma::new(rho2, 1.0 / rho2).map_err(|e| Error::InvalidConfig(format!("gamma factor 2: {e}")))?;
                TurbulenceSampler::GammaGamma(g1, g2)
            }
            FadingModel::LogNormal { mu_l, sigma_l } => TurbulenceSampler::LogNormal(
                Normal::new(mu_l, sigma_l).map_err(|e| Error::InvalidConfig(format!("log-normal: {e}")))?,
            ),
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            TurbulenceSampler::NegExp => negexp_from_uniform(rng.random::<f64>()),
            TurbulenceSampler::GammaGamma(g1, g2) => g1.sample(rng) * g2.sample(rng),
            TurbulenceSampler::LogNormal(n) => n.sample(rng).exp(),
        }
    }
}

/// Inverse CDF of the unit exponential: `-ln(1 - u)`.
pub fn negexp_from_uniform(u: f64) -> f64 {
    -(-u).ln_1p()
}

/// One draw of the turbulence factor `h^r`.
pub fn sample_turbulence<R: Rng + ?Sized>(model: &FadingModel, rng: &mut R) -> Result<f64> {
    Ok(TurbulenceSampler::new(model)?.sample(rng))
}

/// Deterministic path gain `exp(-nu * d)`.
pub fn deterministic_gain(nu: f64, d: f64) -> Result<f64> {
    if !nu.is_finite() || !d.is_finite() {
        return Err(Error::InvalidArgument(format!("non-finite path parameters nu={nu}, d={d}")));
    }
    if nu < 0.0 || d <= 0.0 {
        return Err(Error::InvalidArgument(format!("need nu >= 0 and d > 0, got nu={nu}, d={d}")));
    }
    Ok((-nu * d).exp())
}

/// Transmitter-receiver distances, row-major `n_r x n_t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceGrid {
    pub n_r: usize,
    pub n_t: usize,
    pub d: Vec<f64>,
}

impl DistanceGrid {
    pub fn uniform(n_r: usize, n_t: usize, d: f64) -> Self {
        Self { n_r, n_t, d: vec![d; n_r * n_t] }
    }

    pub fn from_rows(n_r: usize, n_t: usize, d: Vec<f64>) -> Result<Self> {
        let g = Self { n_r, n_t, d };
        g.validate()?;
        Ok(g)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n_t + j]
    }

    pub fn validate(&self) -> Result<()> {
        if self.d.len() != self.n_r * self.n_t {
            return Err(Error::InvalidConfig(format!(
                "distance grid has {} entries, expected n_r*n_t = {}",
                self.d.len(),
                self.n_r * self.n_t
            )));
        }
        if let Some(bad) = self.d.iter().find(|&&x| !(x.is_finite() && x > 0.0)) {
            return Err(Error::InvalidConfig(format!("distances must be positive and finite, got {bad}")));
        }
        Ok(())
    }
}

/// Full description of one MIMO link.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelConfig {
    pub n_t: usize,
    pub n_r: usize,
    pub block_len: BlockLen,
    /// Peak amplitude `A`.
    pub amp: f64,
    /// Average power `E`.
    pub avg_power: f64,
    pub noise_sigma: f64,
    pub fading: FadingModel,
    /// Path attenuation parameter `nu`.
    pub nu: f64,
    pub geometry: DistanceGrid,
}

impl ChannelConfig {
    /// Unit geometry, `nu = 0`, `A = 1`, `E = A/2`, `sigma_n = 1`, infinite block length.
    pub fn new(n_t: usize, n_r: usize, fading: FadingModel) -> Self {
        Self {
            n_t,
            n_r,
            block_len: BlockLen::Infinite,
            amp: 1.0,
            avg_power: 0.5,
            noise_sigma: 1.0,
            fading,
            nu: 0.0,
            geometry: DistanceGrid::uniform(n_r, n_t, 1.0),
        }
    }

    pub fn with_power(mut self, amp: f64, avg_power: f64) -> Self {
        self.amp = amp;
        self.avg_power = avg_power;
        self
    }

    pub fn with_noise_sigma(mut self, sigma: f64) -> Self {
        self.noise_sigma = sigma;
        self
    }

    pub fn with_block_len(mut self, l: BlockLen) -> Self {
        self.block_len = l;
        self
    }

    pub fn with_geometry(mut self, nu: f64, geometry: DistanceGrid) -> Self {
        self.nu = nu;
        self.geometry = geometry;
        self
    }

    /// `alpha = E / A`.
    pub fn alpha(&self) -> f64 {
        self.avg_power / self.amp
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_t == 0 || self.n_r == 0 {
            return Err(Error::InvalidConfig("antenna counts must be positive".into()));
        }
        if self.n_r > self.n_t {
            return Err(Error::InvalidConfig(format!("n_r <= n_t required, got n_r={} > n_t={}", self.n_r, self.n_t)));
        }
        for (name, v) in [("amp", self.amp), ("avg_power", self.avg_power), ("noise_sigma", self.noise_sigma)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidConfig(format!("{name} must be positive and finite, got {v}")));
            }
        }
        let alpha = self.alpha();
        if !(alpha > 0.0 && alpha <= self.n_t as f64 / 2.0) {
            return Err(Error::InvalidConfig(format!(
                "alpha = avg_power/amp must lie in (0, n_t/2] = (0, {}], got {alpha}",
                self.n_t as f64 / 2.0
            )));
        }
        if !(self.nu.is_finite() && self.nu >= 0.0) {
            return Err(Error::InvalidConfig(format!("nu must be nonnegative, got {}", self.nu)));
        }
        if self.geometry.n_r != self.n_r || self.geometry.n_t != self.n_t {
            return Err(Error::InvalidConfig(format!(
                "geometry is {}x{}, expected {}x{}",
                self.geometry.n_r, self.geometry.n_t, self.n_r, self.n_t
            )));
        }
        self.geometry.validate()?;
        self.fading.validate()
    }

    /// Matrix of deterministic gains `exp(-nu * d_ij)`.
    pub fn gain_matrix(&self) -> Result<DMatrix<f64>> {
        let mut g = DMatrix::zeros(self.n_r, self.n_t);
        for i in 0..self.n_r {
            for j in 0..self.n_t {
                g[(i, j)] = deterministic_gain(self.nu, self.geometry.get(i, j))?;
            }
        }
        Ok(g)
    }

    /// Parse the JSON document format.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: RawConfig = serde_json::from_str(s)?;
        raw.into_config()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "n_t": self.n_t,
            "n_r": self.n_r,
            "block_len": self.block_len,
            "amp": self.amp,
            "avg_power": self.avg_power,
            "noise_sigma": self.noise_sigma,
            "fading": self.fading,
            "nu": self.nu,
            "distances": self.geometry.d,
        })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    n_t: usize,
    n_r: usize,
    #[serde(default = "default_block_len")]
    block_len: BlockLen,
    amp: f64,
    avg_power: f64,
    noise_sigma: f64,
    fading: FadingModel,
    #[serde(default)]
    nu: f64,
    #[serde(default)]
    distances: Option<RawDistances>,
}

fn default_block_len() -> BlockLen {
    BlockLen::Infinite
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawDistances {
    Scalar(f64),
    Flat(Vec<f64>),
    Rows(Vec<Vec<f64>>),
}

impl RawConfig {
    fn into_config(self) -> Result<ChannelConfig> {
        let geometry = match self.distances {
            None => DistanceGrid::uniform(self.n_r, self.n_t, 1.0),
            Some(RawDistances::Scalar(d)) => DistanceGrid::uniform(self.n_r, self.n_t, d),
            Some(RawDistances::Flat(d)) => DistanceGrid { n_r: self.n_r, n_t: self.n_t, d },
            Some(RawDistances::Rows(rows)) => {
                if rows.len() != self.n_r || rows.iter().any(|r| r.len() != self.n_t) {
                    return Err(Error::InvalidConfig(format!(
                        "distance rows must form an {}x{} array",
                        self.n_r, self.n_t
                    )));
                }
                DistanceGrid { n_r: self.n_r, n_t: self.n_t, d: rows.into_iter().flatten().collect() }
            }
        };
        let cfg = ChannelConfig {
            n_t: self.n_t,
            n_r: self.n_r,
            block_len: self.block_len,
            amp: self.amp,
            avg_power: self.avg_power,
            noise_sigma: self.noise_sigma,
            fading: self.fading,
            nu: self.nu,
            geometry,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Origin of a sampled matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub seed: u64,
    pub draw: u64,
}

/// One channel realization.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelMatrix {
    pub entries: DMatrix<f64>,
    pub provenance: Option<Provenance>,
}

impl ChannelMatrix {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if entries.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidArgument("channel entries must be finite and nonnegative".into()));
        }
        Ok(Self { entries, provenance: None })
    }

    pub fn from_row_slice(n_r: usize, n_t: usize, data: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_row_slice(n_r, n_t, data))
    }

    pub fn n_r(&self) -> usize {
        self.entries.nrows()
    }

    pub fn n_t(&self) -> usize {
        self.entries.ncols()
    }

    pub fn gram(&self) -> DMatrix<f64> {
        &self.entries * self.entries.transpose()
    }
}

/// Channel sampler with the gain matrix and turbulence law prepared once.
#[derive(Clone, Debug)]
pub struct ChannelSampler {
    gains: DMatrix<f64>,
    turbulence: TurbulenceSampler,
}

impl ChannelSampler {
    pub fn new(cfg: &ChannelConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self { gains: cfg.gain_matrix()?, turbulence: TurbulenceSampler::new(&cfg.fading)? })
    }

    /// Entries are drawn row by row.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ChannelMatrix {
        let (n_r, n_t) = self.gains.shape();
        let mut h = DMatrix::zeros(n_r, n_t);
        for i in 0..n_r {
            for j in 0..n_t {
                h[(i, j)] = self.gains[(i, j)] * self.turbulence.sample(rng);
            }
        }
        ChannelMatrix { entries: h, provenance: None }
    }

    /// Draw number `index` of the family keyed by `seed`.
    pub fn sample_indexed(&self, streams: &StreamFamily, seed: u64, index: u64) -> ChannelMatrix {
        let mut rng = streams.stream(index);
        let mut h = self.sample(&mut rng);
        h.provenance = Some(Provenance { seed, draw: index });
        h
    }
}

/// One channel draw from `cfg`.
pub fn sample_channel<R: Rng + ?Sized>(cfg: &ChannelConfig, rng: &mut R) -> Result<ChannelMatrix> {
    Ok(ChannelSampler::new(cfg)?.sample(rng))
}

/// Eigenvalues of `H * H^T`, ascending, with values below
/// `SPD_REL_EPS * lambda_max` clamped to zero.
pub fn gram_spectrum(h: &ChannelMatrix) -> Result<Vec<f64>> {
    if h.entries.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("channel matrix has non-finite entries".into()));
    }
    let g = h.gram();
    let n = g.nrows();
    let mut eig: Vec<f64> = if n == 1 {
        vec![g[(0, 0)]]
    } else {
        SymmetricEigen::try_new(g, f64::EPSILON, 10_000)
            .ok_or(Error::EigenNonConvergence(n))?
            .eigenvalues
            .iter()
            .copied()
            .collect()
    };
    eig.sort_by(|a, b| a.total_cmp(b));
    let lmax = eig.last().copied().unwrap_or(0.0).max(0.0);
    let floor = SPD_REL_EPS * lmax;
    for v in eig.iter_mut() {
        if *v < floor || *v <= 0.0 {
            *v = 0.0;
        }
    }
    Ok(eig)
}

/// `det(H * H^T)` as the product of the clamped spectrum.
pub fn gram_determinant(spectrum: &[f64]) -> f64 {
    spectrum.iter().product()
}

/// Eigenvalue exponents `a_i = -ln(lambda_i) / ln(osnr)`, descending.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentVector {
    pub a: Vec<f64>,
    pub osnr: f64,
}

impl ExponentVector {
    /// `lambda_i = osnr^(-a_i)`, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.a.iter().map(|&a| self.osnr.powf(-a)).collect()
    }
}

pub fn eigen_exponents(h: &ChannelMatrix, osnr: f64) -> Result<ExponentVector> {
    eigen_exponents_with_sentinel(h, osnr, A_MAX_SENTINEL)
}

pub fn eigen_exponents_with_sentinel(h: &ChannelMatrix, osnr: f64, a_max: f64) -> Result<ExponentVector> {
    if !(osnr.is_finite() && osnr > 1.0) {
        return Err(Error::InvalidArgument(format!("osnr must exceed 1, got {osnr}")));
    }
    let ln_osnr = osnr.ln();
    let mut a: Vec<f64> = gram_spectrum(h)?.iter().map(|&l| if l > 0.0 { -l.ln() / ln_osnr } else { a_max }).collect();
    a.sort_by(|x, y| y.total_cmp(x));
    Ok(ExponentVector { a, osnr })
}

/// Calls `f` with every `k`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// `sum over n_r-column subsets U of |det H_U|`.
pub fn minor_determinant_sum(h: &ChannelMatrix) -> Result<f64> {
    let (n_r, n_t) = h.entries.shape();
    if n_r > n_t {
        return Err(Error::InvalidArgument(format!("need n_r <= n_t, got {n_r}x{n_t}")));
    }
    let mut total = 0.0;
    for_each_combination(n_t, n_r, |cols| {
        let sub = h.entries.select_columns(cols);
        total += sub.determinant().abs();
    });
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gain_values() {
        assert_eq!(deterministic_gain(0.0, 5.0).unwrap(), 1.0);
        assert_relative_eq!(deterministic_gain(1.0, 1e-300).unwrap(), 1.0);
        assert_relative_eq!(deterministic_gain(0.1, 10.0).unwrap(), 0.367_879_441_171_442_33, epsilon = 1e-15);
        assert!(deterministic_gain(f64::NAN, 1.0).is_err());
        assert!(deterministic_gain(0.1, f64::INFINITY).is_err());
        assert!(deterministic_gain(0.1, 0.0).is_err());
    }

    #[test]
    fn negexp_inverse_cdf() {
        assert_eq!(negexp_from_uniform(0.0), 0.0);
        assert_relative_eq!(negexp_from_uniform(0.5), std::f64::consts::LN_2, epsilon = 1e-15);
    }

    #[test]
    fn lognormal_degenerate_limit() {
        let m = FadingModel::LogNormal { mu_l: 0.0, sigma_l: 1e-12 };
        let mut rng = sample_stream(1, 0);
        for _ in 0..100 {
            assert_relative_eq!(sample_turbulence(&m, &mut rng).unwrap(), 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn fading_validation() {
        assert!(FadingModel::GammaGamma { rho1: 2.0, rho2: 3.0 }.validate().is_err());
        assert!(FadingModel::GammaGamma { rho1: 3.0, rho2: 3.0 }.validate().is_ok());
        assert!(FadingModel::GammaGamma { rho1: 3.0, rho2: 2.0 }.validate().is_ok());
        assert!(FadingModel::LogNormal { mu_l: 0.0, sigma_l: 0.0 }.validate().is_err());
        assert_eq!(FadingModel::GammaGamma { rho1: 4.0, rho2: 2.5 }.rho(), Some(2.5));
    }

    #[test]
    fn config_validation() {
        let ok = ChannelConfig::new(3, 2, FadingModel::NegExp);
        assert!(ok.validate().is_ok());
        let bad = ChannelConfig::new(2, 3, FadingModel::NegExp);
        assert!(bad.validate().is_err());
        let alpha_hi = ChannelConfig::new(2, 1, FadingModel::NegExp).with_power(1.0, 1.01);
        assert!(alpha_hi.validate().is_err());
        let alpha_edge = ChannelConfig::new(2, 1, FadingModel::NegExp).with_power(1.0, 1.0);
        assert!(alpha_edge.validate().is_ok());
        let mut wrong_geom = ChannelConfig::new(2, 2, FadingModel::NegExp);
        wrong_geom.geometry.d.pop();
        assert!(wrong_geom.validate().is_err());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"n_t": 3, "n_r": 2, "block_len": 7, "amp": 2.0, "avg_power": 1.5,
            "noise_sigma": 0.5, "fading": {"kind": "gg", "rho1": 4.0, "rho2": 2.5},
            "nu": 0.1, "distances": [[1,2,3],[4,5,6]]}"#;
        let cfg = ChannelConfig::from_json_str(text).unwrap();
        assert_eq!(cfg.block_len, BlockLen::Finite(7));
        assert_eq!(cfg.geometry.get(1, 2), 6.0);
        assert_eq!(cfg.fading.rho(), Some(2.5));
        let back = ChannelConfig::from_json_str(&cfg.to_json_value().to_string()).unwrap();
        assert_eq!(back, cfg);

        let scalar = r#"{"n_t": 2, "n_r": 1, "block_len": "inf", "amp": 1, "avg_power": 1,
            "noise_sigma": 1, "fading": {"kind": "negexp"}, "distances": 2.5}"#;
        let cfg = ChannelConfig::from_json_str(scalar).unwrap();
        assert_eq!(cfg.geometry.d, vec![2.5, 2.5]);
        assert!(cfg.block_len.is_infinite());

        let bad = r#"{"n_t": 1, "n_r": 2, "amp": 1, "avg_power": 0.5, "noise_sigma": 1, "fading": {"kind": "negexp"}}"#;
        assert!(ChannelConfig::from_json_str(bad).is_err());
    }

    #[test]
    fn stream_family_matches_direct_streams() {
        let fam = StreamFamily::new(99);
        for idx in [0u64, 1, 17, 1 << 40] {
            let mut a = fam.stream(idx);
            let mut b = sample_stream(99, idx);
            for _ in 0..8 {
                assert_eq!(a.random::<u64>(), b.random::<u64>());
            }
        }
        let x: u64 = sample_stream(99, 0).random();
        let y: u64 = sample_stream(99, 1).random();
        assert_ne!(x, y);
    }

    #[test]
    fn replay_is_bit_exact() {
        let cfg = ChannelConfig::new(3, 2, FadingModel::NegExp);
        let s = ChannelSampler::new(&cfg).unwrap();
        let fam = StreamFamily::new(5);
        for i in 0..20 {
            assert_eq!(s.sample_indexed(&fam, 5, i), s.sample_indexed(&fam, 5, i));
        }
        let h = s.sample_indexed(&fam, 5, 3);
        assert_eq!(h.provenance, Some(Provenance { seed: 5, draw: 3 }));
    }

    #[test]
    fn siso_unit_gain_is_turbulence() {
        let cfg = ChannelConfig::new(1, 1, FadingModel::NegExp).with_geometry(1.0, DistanceGrid::uniform(1, 1, 1e-300));
        let h = sample_channel(&cfg, &mut sample_stream(3, 0)).unwrap();
        let hr = sample_turbulence(&FadingModel::NegExp, &mut sample_stream(3, 0)).unwrap();
        assert_eq!(h.entries[(0, 0)], hr);
    }

    #[test]
    fn spectrum_trivial_cases() {
        let id = ChannelMatrix::new(DMatrix::identity(3, 3)).unwrap();
        for v in gram_spectrum(&id).unwrap() {
            assert_relative_eq!(v, 1.0, epsilon = 1e-14);
        }
        let h = ChannelMatrix::from_row_slice(1, 1, &[0.7]).unwrap();
        assert_eq!(gram_spectrum(&h).unwrap(), vec![0.7 * 0.7]);
        let rank1 = ChannelMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]).unwrap();
        let s = gram_spectrum(&rank1).unwrap();
        assert_eq!(s[0], 0.0);
        assert_relative_eq!(s[1], 25.0, epsilon = 1e-12);
        assert!(
            gram_spectrum(&ChannelMatrix { entries: DMatrix::from_element(1, 2, f64::NAN), provenance: None }).is_err()
        );
    }

    #[test]
    fn spectrum_product_matches_lu_determinant() {
        let cfg = ChannelConfig::new(3, 2, FadingModel::NegExp);
        let s = ChannelSampler::new(&cfg).unwrap();
        let mut rng = sample_stream(11, 0);
        for _ in 0..50 {
            let h = s.sample(&mut rng);
            let det = h.gram().lu().determinant();
            let prod = gram_determinant(&gram_spectrum(&h).unwrap());
            assert_relative_eq!(prod, det, max_relative = 1e-10);
        }
    }

    #[test]
    fn exponents_trivial_and_round_trip() {
        let id = ChannelMatrix::new(DMatrix::identity(2, 2)).unwrap();
        let e = eigen_exponents(&id, 1e3).unwrap();
        assert!(e.a.iter().all(|a| a.abs() < 1e-14));
        let osnr = 100.0;
        let h = ChannelMatrix::from_row_slice(1, 1, &[1.0 / osnr]).unwrap();
        assert_relative_eq!(eigen_exponents(&h, osnr).unwrap().a[0], 2.0, epsilon = 1e-14);
        assert!(eigen_exponents(&id, 1.0).is_err());
        assert!(eigen_exponents(&id, 0.5).is_err());

        let cfg = ChannelConfig::new(4, 3, FadingModel::NegExp);
        let h = sample_channel(&cfg, &mut sample_stream(2, 0)).unwrap();
        let e = eigen_exponents(&h, 1e4).unwrap();
        let lam = gram_spectrum(&h).unwrap();
        for (x, y) in e.eigenvalues().iter().zip(&lam) {
            assert_relative_eq!(*x, *y, max_relative = 1e-9);
        }
        assert!(e.a.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn zero_eigenvalue_maps_to_sentinel() {
        let h = ChannelMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 0.0]).unwrap();
        let e = eigen_exponents(&h, 10.0).unwrap();
        assert_eq!(e.a[0], A_MAX_SENTINEL);
        let e = eigen_exponents_with_sentinel(&h, 10.0, 100.0).unwrap();
        assert_eq!(e.a[0], 100.0);
    }

    #[test]
    fn combinations_enumerated() {
        let mut seen = Vec::new();
        for_each_combination(4, 2, |c| seen.push(c.to_vec()));
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        let mut count = 0;
        for_each_combination(3, 3, |_| count += 1);
        assert_eq!(count, 1);
        for_each_combination(2, 3, |_| count += 1);
        assert_eq!(count, 1);
    }

    #[test]
    fn minor_sum_cases() {
        let h = ChannelMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 3.0]).unwrap();
        assert_relative_eq!(minor_determinant_sum(&h).unwrap(), 5.0, epsilon = 1e-12);
        let z = ChannelMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(minor_determinant_sum(&z).unwrap(), 0.0);
        // Cauchy-Binet on a random 2x4.
        let cfg = ChannelConfig::new(4, 2, FadingModel::NegExp);
        let h = sample_channel(&cfg, &mut sample_stream(8, 0)).unwrap();
        let mut sq = 0.0;
        for_each_combination(4, 2, |c| sq += h.entries.select_columns(c).determinant().powi(2));
        assert_relative_eq!(sq, h.gram().determinant(), max_relative = 1e-10);
    }
}
