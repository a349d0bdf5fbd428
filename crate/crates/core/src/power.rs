//! Peak- and average-power constrained input law.
//!
//! Each transmit coordinate follows the exponential law truncated to `[0, A]`
//! with density `mu/(A(1 - e^-mu)) * exp(-mu x / A)`. The parameter `mu`
//! solves `phi(mu) = alpha / n_t` with `phi(mu) = 1/mu - e^-mu/(1 - e^-mu)`.
//! At `alpha / n_t = 1/2` the law degenerates to the uniform distribution on
//! `[0, A]`, represented by [`Mu::UniformLimit`].
//!
//! Near `mu = 0`, `phi`, `g` and `T` switch to four-term series. The switch
//! points (all at or above `1e-3`) sit where the closed forms still carry full
//! precision and the dropped series terms are below `1e-17`.

use rand::Rng;

use crate::channel::ChannelConfig;
use crate::error::{Error, Result};

const PHI_SERIES_CUTOFF: f64 = 1e-2;
const G_SERIES_CUTOFF: f64 = 5e-2;
const T_SERIES_CUTOFF: f64 = 1e-3;
const BISECTION_ITERS: usize = 200;
/// Largest accepted `|phi(mu) - alpha/n_t|`.
pub const MU_RESIDUAL_TOL: f64 = 1e-12;

/// Shape parameter of the truncated exponential.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mu {
    Finite(f64),
    UniformLimit,
}

impl Mu {
    /// Numeric value, 0 for the uniform limit.
    pub fn value(self) -> f64 {
        match self {
            Mu::Finite(m) => m,
            Mu::UniformLimit => 0.0,
        }
    }
}

/// Truncated-exponential input law for one transmit coordinate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InputLaw {
    pub mu: Mu,
    pub amp: f64,
    pub alpha: f64,
    pub n_t: usize,
}

impl InputLaw {
    /// Law with a given `mu` (no equation solving); `alpha` is set from `phi(mu)`.
    pub fn from_mu(mu: f64, amp: f64, n_t: usize) -> Self {
        let mu_v = if mu == 0.0 { Mu::UniformLimit } else { Mu::Finite(mu) };
        Self { mu: mu_v, amp, alpha: phi(mu) * n_t as f64, n_t }
    }

    pub fn for_config(cfg: &ChannelConfig) -> Result<Self> {
        let mut law = solve_mu(cfg.alpha(), cfg.n_t)?;
        law.amp = cfg.amp;
        Ok(law)
    }
}

/// `phi(mu) = 1/mu - e^-mu/(1 - e^-mu)`, continuous at 0 with value 1/2.
pub fn phi(mu: f64) -> f64 {
    if mu < PHI_SERIES_CUTOFF {
        phi_series(mu)
    } else {
        1.0 / mu - 1.0 / mu.exp_m1()
    }
}

fn phi_series(mu: f64) -> f64 {
    let m2 = mu * mu;
    0.5 - mu / 12.0 + mu * m2 / 720.0 - mu * m2 * m2 / 30240.0
}

/// Solve `phi(mu) = alpha / n_t` by bisection.
///
/// The bracket is `[0, max(50, 2 n_t / alpha)]`; `phi` is strictly decreasing
/// and `phi(mu) < 1/mu`, so the upper end always lies past the root.
pub fn solve_mu(alpha: f64, n_t: usize) -> Result<InputLaw> {
    if n_t == 0 {
        return Err(Error::InvalidArgument("n_t must be positive".into()));
    }
    let target = alpha / n_t as f64;
    if !(target > 0.0 && target <= 0.5) {
        return Err(Error::InvalidArgument(format!("alpha/n_t must lie in (0, 1/2], got {target}")));
    }
    if target == 0.5 {
        return Ok(InputLaw { mu: Mu::UniformLimit, amp: 1.0, alpha, n_t });
    }
    let mut lo = 0.0_f64;
    let mut hi = (2.0 / target).max(50.0);
    for _ in 0..BISECTION_ITERS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if phi(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mu = if (phi(lo) - target).abs() <= (phi(hi) - target).abs() { lo } else { hi };
    let residual = (phi(mu) - target).abs();
    if residual >= MU_RESIDUAL_TOL || mu <= 0.0 {
        return Err(Error::OutOfRegime(format!(
            "mu bisection for alpha/n_t = {target} ended at mu = {mu} with residual {residual:e}"
        )));
    }
    Ok(InputLaw { mu: Mu::Finite(mu), amp: 1.0, alpha, n_t })
}

/// Mean of one coordinate, `A * phi(mu) = A * alpha / n_t`.
pub fn trunc_exp_mean(law: &InputLaw) -> f64 {
    law.amp * phi(law.mu.value())
}

/// Differential entropy of one coordinate in nats.
pub fn trunc_exp_entropy(law: &InputLaw) -> f64 {
    match law.mu {
        Mu::UniformLimit => law.amp.ln(),
        Mu::Finite(m) => {
            let one_minus = -(-m).exp_m1();
            law.amp.ln() + 1.0 - m / m.exp_m1() - (m / one_minus).ln()
        }
    }
}

/// `T = 2(1 - e^-mu)/mu * 2^(-mu e^-mu / (1 - e^-mu))`; 1 at the uniform limit.
pub fn t_of_mu(mu: f64) -> f64 {
    if mu < T_SERIES_CUTOFF {
        t_series(mu)
    } else {
        t_closed(mu)
    }
}

fn t_series(mu: f64) -> f64 {
    let m2 = mu * mu;
    1.0 - 0.153_426_409_720_027_36 * mu - 0.004_325_766_780_206_602 * m2 + 0.001_867_555_536_616_549_7 * m2 * mu
}

fn t_closed(mu: f64) -> f64 {
    2.0 * (-(-mu).exp_m1()) / mu * (-mu / mu.exp_m1()).exp2()
}

/// `g = 1/mu^2 - e^-mu/(1 - e^-mu)^2 = Var(X)/A^2`; 1/12 at the uniform limit.
pub fn g_of_mu(mu: f64) -> f64 {
    if mu < G_SERIES_CUTOFF {
        g_series(mu)
    } else {
        g_closed(mu)
    }
}

fn g_series(mu: f64) -> f64 {
    let m2 = mu * mu;
    1.0 / 12.0 - m2 / 240.0 + m2 * m2 / 6048.0 - m2 * m2 * m2 / 172_800.0
}

fn g_closed(mu: f64) -> f64 {
    let s = (0.5 * mu).sinh();
    1.0 / (mu * mu) - 1.0 / (4.0 * s * s)
}

pub fn t_factor(law: &InputLaw) -> f64 {
    t_of_mu(law.mu.value())
}

pub fn g_factor(law: &InputLaw) -> f64 {
    g_of_mu(law.mu.value())
}

/// Binomial coefficient as a float.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Capacity-bound constants `(L_l, L_u)`.
///
/// `L_l = (2 s^2 / (pi a^2 e))^n_r * (T/2)^(2 n_r)` and
/// `L_u = C(n_t, n_r) * (s^2 / (2 pi a^2 e))^n_r`, with `s = sigma_n`, `a = alpha`.
pub fn capacity_constants(cfg: &ChannelConfig) -> Result<(f64, f64)> {
    cfg.validate()?;
    let law = solve_mu(cfg.alpha(), cfg.n_t)?;
    let s2 = cfg.noise_sigma * cfg.noise_sigma;
    let a2 = cfg.alpha() * cfg.alpha();
    let pe = std::f64::consts::PI * std::f64::consts::E;
    let nr = cfg.n_r as i32;
    let half_t = 0.5 * t_factor(&law);
    let l_l = (2.0 * s2 / (pe * a2)).powi(nr) * half_t.powi(2 * nr);
    let l_u = binomial(cfg.n_t, cfg.n_r) * (s2 / (2.0 * pe * a2)).powi(nr);
    Ok((l_l, l_u))
}

/// Inverse CDF of the truncated exponential at `u in [0, 1)`.
pub fn trunc_exp_quantile(law: &InputLaw, u: f64) -> f64 {
    let x = match law.mu {
        Mu::UniformLimit => law.amp * u,
        Mu::Finite(m) => -(law.amp / m) * (u * (-m).exp_m1()).ln_1p(),
    };
    x.clamp(0.0, law.amp)
}

/// One coordinate draw.
pub fn sample_input<R: Rng + ?Sized>(law: &InputLaw, rng: &mut R) -> f64 {
    trunc_exp_quantile(law, rng.random::<f64>())
}

/// `n_t` independent coordinates.
pub fn sample_input_vector<R: Rng + ?Sized>(law: &InputLaw, n_t: usize, rng: &mut R) -> Vec<f64> {
    (0..n_t).map(|_| sample_input(law, rng)).collect()
}
