//! Exponent-level optimization.
//!
//! Writing the Gram eigenvalues as `lambda_i = osnr^(-a_i)` with
//! `a_1 >= ... >= a_n_r >= 0`, every diversity exponent in this crate is the
//! infimum of an objective in `a` over one of four ordered sets:
//!
//! | domain | constraint                        | used with            |
//! |--------|-----------------------------------|----------------------|
//! | `A'`   | `(2 n_r - sum a)^+ <= 2 r`         | outage               |
//! | `B'`   | `2 n_r - sum a <= 2 r`             | outage               |
//! | `A^c'` | `(2 n_r - sum a)^+ >= 2 r`         | truncated-exp coding |
//! | `B^c'` | `2 n_r - sum a >= 2 r`             | truncated-exp coding |
//!
//! `A'` and `B'` are the same set for every `r >= 0`. `A^c'` and `B^c'` agree
//! for `r > 0`; at `r = 0` the first is unconstrained while the second keeps
//! `sum a <= 2 n_r`.
//!
//! Objectives use the weights `c_i = (n_t - n_r + 2i - 1) / 2`:
//!
//! * outage, negative exponential: `sum c_i a_i`
//! * gamma-gamma adds `n_r n_t (rho - 1) a_n_r / 2`
//! * log-normal adds `-n_r n_t a_n_r / 2 + K (a_n_r^2 L / 4 + a_n_r beta1)`
//!   with `K = n_r n_t / (2 sigma_l^2)` and `L = ln(osnr)`
//! * coding adds `(l/2) (sum (2 - a_i)^+ - 2 r)` to the outage objective.
//!
//! [`infimum_analytic`] solves these problems exactly. For the piecewise
//! linear kinds the feasible set in the increment coordinates
//! `t_k = a_k - a_{k+1}` has only two coupling constraints, so every vertex
//! has at most two nonzero increments and the vertices are enumerated
//! directly. The log-normal objective is convex in `x = a_n_r` once the
//! remaining entries are optimized, which reduces it to a one-dimensional
//! convex search. [`infimum_bruteforce`] is the grid oracle.

use rayon::prelude::*;

use crate::channel::BlockLen;
use crate::error::{Error, Result};

/// Brute-force grids above this many ordered points are refused.
pub const GRID_POINT_LIMIT: f64 = 1e9;
/// Largest `n_r` handled by the brute-force oracle.
pub const BRUTEFORCE_MAX_NR: usize = 8;
/// Tolerance used by the brute-force domain tests on grid sums.
pub const GRID_DOMAIN_TOL: f64 = 1e-9;

const TIE_REL: f64 = 1e-12;

/// Exponent-level description of the fading law.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChannelKind {
    NegExp,
    GammaGamma { rho: f64 },
    LogNormal { sigma_l: f64, beta1: f64, log_osnr: f64 },
}

impl ChannelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ChannelKind::NegExp => "negexp",
            ChannelKind::GammaGamma { .. } => "gg",
            ChannelKind::LogNormal { .. } => "ln",
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            ChannelKind::NegExp => Ok(()),
            ChannelKind::GammaGamma { rho } if rho.is_finite() && rho > 0.0 => Ok(()),
            ChannelKind::GammaGamma { rho } => Err(Error::InvalidArgument(format!("rho must be positive, got {rho}"))),
            ChannelKind::LogNormal { sigma_l, beta1, log_osnr } => {
                if !(sigma_l.is_finite() && sigma_l > 0.0) {
                    return Err(Error::InvalidArgument(format!("sigma_l must be positive, got {sigma_l}")));
                }
                if !beta1.is_finite() {
                    return Err(Error::InvalidArgument(format!("beta1 must be finite, got {beta1}")));
                }
                if !(log_osnr.is_finite() && log_osnr > 0.0) {
                    return Err(Error::InvalidArgument(format!("log_osnr must be positive, got {log_osnr}")));
                }
                Ok(())
            }
        }
    }

    /// Kind-specific term that depends only on `x = a_n_r`.
    pub fn tail_term(&self, x: f64, n_t: usize, n_r: usize) -> f64 {
        let nn = (n_r * n_t) as f64;
        match *self {
            ChannelKind::NegExp => 0.0,
            ChannelKind::GammaGamma { rho } => 0.5 * nn * (rho - 1.0) * x,
            ChannelKind::LogNormal { sigma_l, beta1, log_osnr } => {
                let k = nn / (2.0 * sigma_l * sigma_l);
                -0.5 * nn * x + k * (0.25 * x * x * log_osnr + x * beta1)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Objective {
    Outage,
    TruncExpCoding,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    APrime,
    BPrime,
    AcPrime,
    BcPrime,
}

impl Domain {
    pub fn name(self) -> &'static str {
        match self {
            Domain::APrime => "A'",
            Domain::BPrime => "B'",
            Domain::AcPrime => "Ac'",
            Domain::BcPrime => "Bc'",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentProblem {
    pub kind: ChannelKind,
    pub n_t: usize,
    pub n_r: usize,
    pub r: f64,
    pub l: BlockLen,
    pub objective: Objective,
    pub domain: Domain,
}

impl ExponentProblem {
    pub fn outage(kind: ChannelKind, n_t: usize, n_r: usize, r: f64) -> Self {
        Self { kind, n_t, n_r, r, l: BlockLen::Infinite, objective: Objective::Outage, domain: Domain::BPrime }
    }

    pub fn coding(kind: ChannelKind, n_t: usize, n_r: usize, r: f64, l: u32) -> Self {
        Self {
            kind,
            n_t,
            n_r,
            r,
            l: BlockLen::Finite(l),
            objective: Objective::TruncExpCoding,
            domain: Domain::BcPrime,
        }
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    /// The other set of the same pair (`A'` <-> `B'`, `A^c'` <-> `B^c'`).
    pub fn partner_domain(&self) -> Domain {
        match self.domain {
            Domain::APrime => Domain::BPrime,
            Domain::BPrime => Domain::APrime,
            Domain::AcPrime => Domain::BcPrime,
            Domain::BcPrime => Domain::AcPrime,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_r == 0 || self.n_r > self.n_t {
            return Err(Error::InvalidArgument(format!(
                "need 1 <= n_r <= n_t, got n_t={}, n_r={}",
                self.n_t, self.n_r
            )));
        }
        if !(self.r >= 0.0 && self.r <= self.n_r as f64) {
            return Err(Error::InvalidArgument(format!("r must lie in [0, n_r = {}], got {}", self.n_r, self.r)));
        }
        self.kind.validate()?;
        match (self.objective, self.domain) {
            (Objective::Outage, Domain::APrime | Domain::BPrime) => Ok(()),
            (Objective::TruncExpCoding, Domain::AcPrime | Domain::BcPrime) => {
                if self.l.is_infinite() {
                    Err(Error::InvalidArgument("coding exponent needs a finite block length".into()))
                } else {
                    Ok(())
                }
            }
            (o, d) => Err(Error::InvalidArgument(format!("objective {o:?} does not pair with domain {}", d.name()))),
        }
    }

    fn l_f64(&self) -> f64 {
        self.l.as_f64()
    }

    /// `2 (n_r - r)`: lower limit on `sum a` for outage, budget for coding.
    fn sum_level(&self) -> f64 {
        2.0 * (self.n_r as f64 - self.r)
    }
}

/// Minimizer and value of one exponent problem.
#[derive(Clone, Debug, PartialEq)]
pub struct OptimResult {
    pub value: f64,
    pub argmin: Vec<f64>,
    /// Infimum over this domain equals the infimum over its partner.
    pub tight: bool,
}

/// Weights `c_i = (n_t - n_r + 2i - 1) / 2`, `i = 1..n_r`.
pub fn weights(n_t: usize, n_r: usize) -> Vec<f64> {
    (1..=n_r).map(|i| (n_t as f64 - n_r as f64 + 2.0 * i as f64 - 1.0) / 2.0).collect()
}

fn check_vector(a: &[f64], p: &ExponentProblem) -> Result<()> {
    if a.len() != p.n_r {
        return Err(Error::InvalidArgument(format!("exponent vector has length {}, expected {}", a.len(), p.n_r)));
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("exponent vector must be finite".into()));
    }
    Ok(())
}

fn channel_value(a: &[f64], p: &ExponentProblem) -> f64 {
    let c = weights(p.n_t, p.n_r);
    let lin: f64 = c.iter().zip(a).map(|(c, a)| c * a).sum();
    lin + p.kind.tail_term(a[p.n_r - 1], p.n_t, p.n_r)
}

fn coding_term(a: &[f64], r: f64, l: f64) -> f64 {
    let deficit: f64 = a.iter().map(|&x| (2.0 - x).max(0.0)).sum();
    0.5 * l * (deficit - 2.0 * r)
}

/// Outage objective `d_out(r, a)`.
pub fn dout_objective(a: &[f64], p: &ExponentProblem) -> Result<f64> {
    check_vector(a, p)?;
    Ok(channel_value(a, p))
}

/// Coding objective `d_te(r, a)`; needs a finite block length.
pub fn dte_objective(a: &[f64], p: &ExponentProblem) -> Result<f64> {
    check_vector(a, p)?;
    if p.l.is_infinite() {
        return Err(Error::InvalidArgument("coding objective undefined for infinite block length".into()));
    }
    Ok(channel_value(a, p) + coding_term(a, p.r, p.l_f64()))
}

/// Objective selected by `p.objective`.
pub fn objective_value(a: &[f64], p: &ExponentProblem) -> Result<f64> {
    match p.objective {
        Objective::Outage => dout_objective(a, p),
        Objective::TruncExpCoding => dte_objective(a, p),
    }
}

/// Exact membership test of `a` in `p.domain`.
pub fn in_domain(a: &[f64], p: &ExponentProblem) -> bool {
    in_domain_tol(a, p, 0.0)
}

/// Membership with the sum condition relaxed by `tol`.
pub fn in_domain_tol(a: &[f64], p: &ExponentProblem, tol: f64) -> bool {
    if a.len() != p.n_r || a.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return false;
    }
    if a.windows(2).any(|w| w[0] < w[1]) {
        return false;
    }
    let gap = 2.0 * p.n_r as f64 - a.iter().sum::<f64>();
    let two_r = 2.0 * p.r;
    match p.domain {
        Domain::APrime => gap.max(0.0) <= two_r + tol,
        Domain::BPrime => gap <= two_r + tol,
        Domain::AcPrime => gap.max(0.0) >= two_r - tol,
        Domain::BcPrime => gap >= two_r - tol,
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_REL * (1.0 + a.abs().max(b.abs()))
}

/// Vertex of the ordered box: entries `0..j` at `cap`, `j..k` at `tk`, rest 0.
#[derive(Clone, Copy)]
struct Vertex {
    value: f64,
    total: f64,
    nonzero: usize,
    j: usize,
    k: usize,
    tk: f64,
}

impl Vertex {
    fn preferred_over(&self, other: &Vertex) -> bool {
        if !close(self.value, other.value) {
            return self.value < other.value;
        }
        if !close(self.total, other.total) {
            return self.total < other.total;
        }
        self.nonzero < other.nonzero
    }
}

/// `min sum v_i a_i` over `cap >= a_1 >= ... >= a_n >= 0`, `sum a <= budget`.
///
/// Ties go to the smaller `sum a`, then to fewer nonzero entries.
fn box_budget_lp(v: &[f64], cap: f64, budget: f64) -> (f64, Vec<f64>) {
    let n = v.len();
    if cap <= 0.0 || budget <= 0.0 || n == 0 {
        return (0.0, vec![0.0; n]);
    }
    let mut prefix = vec![0.0; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] + v[i];
    }
    let make = |j: usize, k: usize, tk: f64| Vertex {
        value: cap * prefix[j] + tk * (prefix[k] - prefix[j]),
        total: cap * j as f64 + tk * (k - j) as f64,
        nonzero: if tk > 0.0 { k } else { j },
        j,
        k,
        tk,
    };
    let mut best = make(0, 0, 0.0);
    let mut offer = |cand: Vertex| {
        if cand.preferred_over(&best) {
            best = cand;
        }
    };
    for k in 1..=n {
        offer(make(0, k, cap.min(budget / k as f64)));
    }
    for j in 1..n {
        for k in j + 1..=n {
            let tk = (budget - cap * j as f64) / (k - j) as f64;
            if (0.0..=cap).contains(&tk) {
                offer(make(j, k, tk));
            }
        }
    }
    let a = (0..n)
        .map(|i| {
            if i < best.j {
                cap
            } else if i < best.k {
                best.tk
            } else {
                0.0
            }
        })
        .collect();
    (best.value, a)
}

/// `min sum w_i a_i` over ordered `a >= 0` with `sum a >= need`.
fn lower_budget_lp(w: &[f64], need: f64) -> Result<(f64, Vec<f64>)> {
    let n = w.len();
    let mut prefix = 0.0;
    let mut best: Option<(f64, usize)> = None;
    for k in 1..=n {
        prefix += w[k - 1];
        let per_unit = prefix / k as f64;
        if best.is_none_or(|(b, _)| per_unit < b && !close(per_unit, b)) {
            best = Some((per_unit, k));
        }
    }
    let (per_unit, k) = best.expect("n >= 1");
    if per_unit < 0.0 {
        return Err(Error::OutOfRegime(format!(
            "objective is unbounded below over the outage set (average weight {per_unit} over the first {k} entries)"
        )));
    }
    let mut a = vec![0.0; n];
    let level = need.max(0.0) / k as f64;
    for ai in a.iter_mut().take(k) {
        *ai = level;
    }
    Ok((per_unit * need.max(0.0), a))
}

/// Effective linear weights for the piecewise-linear kinds.
fn linear_weights(p: &ExponentProblem) -> Vec<f64> {
    let mut w = weights(p.n_t, p.n_r);
    let last = p.n_r - 1;
    w[last] += p.kind.tail_term(1.0, p.n_t, p.n_r);
    w
}

/// Upper limit on `sum a` for the coding domains, `None` when unconstrained.
fn coding_budget(p: &ExponentProblem) -> Option<f64> {
    match p.domain {
        Domain::AcPrime if p.r == 0.0 => None,
        _ => Some(p.sum_level()),
    }
}

fn solve_linear(p: &ExponentProblem) -> Result<(f64, Vec<f64>)> {
    let w = linear_weights(p);
    match p.objective {
        Objective::Outage => lower_budget_lp(&w, p.sum_level()),
        Objective::TruncExpCoding => {
            let mut prefix = 0.0;
            for (k, wi) in w.iter().enumerate() {
                prefix += wi;
                if prefix <= 0.0 {
                    return Err(Error::OutOfRegime(format!(
                        "coding objective needs positive prefix weight sums, sum of first {} is {prefix}",
                        k + 1
                    )));
                }
            }
            let l = p.l_f64();
            let v: Vec<f64> = w.iter().map(|wi| wi - 0.5 * l).collect();
            let budget = coding_budget(p).unwrap_or(f64::INFINITY).min(2.0 * p.n_r as f64);
            let (val, a) = box_budget_lp(&v, 2.0, budget);
            Ok((val + l * (p.n_r as f64 - p.r), a))
        }
    }
}

/// Minimizes a convex function on `[lo, hi]` by golden-section search.
fn golden_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if b - a <= f64::EPSILON * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    for x in [lo, hi] {
        let fx = f(x);
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}

/// Minimizer of `q2 x^2 + q1 x` on `[lo, hi]` with `q2 > 0`.
fn quad_min(q2: f64, q1: f64, lo: f64, hi: f64) -> f64 {
    (-q1 / (2.0 * q2)).clamp(lo, hi)
}

fn solve_lognormal(p: &ExponentProblem) -> Result<(f64, Vec<f64>)> {
    let ChannelKind::LogNormal { sigma_l, beta1, log_osnr } = p.kind else { unreachable!() };
    let n_r = p.n_r;
    let nn = (n_r * p.n_t) as f64;
    let k = nn / (2.0 * sigma_l * sigma_l);
    // sum_i c_i x + tail(x) = k (L x^2 / 4 + beta1 x) since sum_i c_i = n_r n_t / 2.
    let q2 = 0.25 * k * log_osnr;
    let q1 = k * beta1;
    let base = |x: f64| q2 * x * x + q1 * x;
    let c = weights(p.n_t, n_r);
    let s = p.sum_level();
    match p.objective {
        Objective::Outage => {
            if n_r == 1 {
                let x = quad_min(q2, q1, s, f64::INFINITY);
                return Ok((base(x), vec![x]));
            }
            // The cheapest way to raise sum a above n_r x is through a_1 (c is increasing).
            let m = c[0];
            let knee = s / n_r as f64;
            let x1 = quad_min(q2, q1 - m * n_r as f64, 0.0, knee);
            let f1 = base(x1) + m * (s - n_r as f64 * x1).max(0.0);
            let x2 = quad_min(q2, q1, knee, f64::INFINITY);
            let f2 = base(x2);
            let (x, val) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
            let mut a = vec![x; n_r];
            a[0] = x + (s - n_r as f64 * x).max(0.0);
            Ok((val, a))
        }
        Objective::TruncExpCoding => {
            let l = p.l_f64();
            let budget = coding_budget(p);
            let v: Vec<f64> = c[..n_r - 1].iter().map(|ci| ci - 0.5 * l).collect();
            let x_hi = budget.map_or(2.0, |b| (b / n_r as f64).min(2.0));
            let inner = |x: f64| {
                let cap = 2.0 - x;
                let room = budget.map_or(f64::INFINITY, |b| b - n_r as f64 * x);
                box_budget_lp(&v, cap, room.max(0.0))
            };
            let g = |x: f64| base(x) - 0.5 * l * n_r as f64 * x + inner(x).0;
            let (mut x, mut val) = golden_min(g, 0.0, x_hi);
            let mut beyond = false;
            if budget.is_none() {
                // Entries above 2 carry no coding credit; the remaining entries sit at x.
                let xb = quad_min(q2, q1, 2.0, f64::INFINITY);
                let vb = base(xb) - l * n_r as f64;
                if vb < val {
                    x = xb;
                    val = vb;
                    beyond = true;
                }
            }
            let mut a = vec![x; n_r];
            if !beyond {
                let (_, b) = inner(x);
                for (ai, bi) in a.iter_mut().zip(b) {
                    *ai += bi;
                }
            }
            Ok((val + l * (n_r as f64 - p.r), a))
        }
    }
}

fn solve_exact(p: &ExponentProblem) -> Result<(f64, Vec<f64>)> {
    match p.kind {
        ChannelKind::LogNormal { .. } => solve_lognormal(p),
        _ => solve_linear(p),
    }
}

/// Moves `a` into the closed domain if rounding left it just outside.
fn snap_into_domain(mut a: Vec<f64>, p: &ExponentProblem) -> Result<Vec<f64>> {
    // Remove the measured sum violation first, then finish with ulp nudges.
    for _ in 0..4 {
        if in_domain(&a, p) {
            return Ok(a);
        }
        let gap = 2.0 * p.n_r as f64 - a.iter().sum::<f64>();
        let mut excess = 2.0 * p.r - gap;
        match p.objective {
            Objective::Outage if excess < 0.0 => a[0] -= excess,
            Objective::TruncExpCoding if excess > 0.0 => {
                for x in a.iter_mut().rev() {
                    let cut = excess.min(*x);
                    *x -= cut;
                    excess -= cut;
                    if excess <= 0.0 {
                        break;
                    }
                }
            }
            _ => break,
        }
    }
    for _ in 0..64 {
        if in_domain(&a, p) {
            return Ok(a);
        }
        match p.objective {
            Objective::Outage => a[0] = a[0].next_up(),
            Objective::TruncExpCoding => {
                if let Some(i) = a.iter().rposition(|&x| x > 0.0) {
                    a[i] = a[i].next_down().max(0.0);
                }
            }
        }
    }
    if in_domain(&a, p) {
        Ok(a)
    } else {
        Err(Error::OutOfRegime(format!("minimizer {a:?} could not be placed inside {}", p.domain.name())))
    }
}

/// Exact infimum of the problem's objective over its domain.
pub fn infimum_analytic(p: &ExponentProblem) -> Result<OptimResult> {
    p.validate()?;
    let (value, argmin) = solve_exact(p)?;
    let partner = p.with_domain(p.partner_domain());
    let (partner_value, _) = solve_exact(&partner)?;
    let argmin = snap_into_domain(argmin, p)?;
    Ok(OptimResult { value, argmin, tight: close(value, partner_value) })
}

/// Grid specification for the brute-force oracle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub step: f64,
    pub a_max: f64,
    /// Constant added to every grid objective value; 0 except in failure-path tests.
    pub offset: f64,
}

impl GridSpec {
    pub fn new(step: f64, a_max: f64) -> Self {
        Self { step, a_max, offset: 0.0 }
    }

    /// Default grid for `n_r`: step 0.05, `a_max = 2 n_r + 2`.
    pub fn standard(n_r: usize) -> Self {
        Self::new(0.05, 2.0 * n_r as f64 + 2.0)
    }

    fn levels(&self) -> usize {
        (self.a_max / self.step + 1e-9).floor() as usize + 1
    }
}

/// Number of non-increasing `n_r`-tuples over `levels` grid values.
pub fn ordered_grid_points(levels: usize, n_r: usize) -> f64 {
    // C(levels + n_r - 1, n_r)
    let mut acc = 1.0;
    for i in 0..n_r {
        acc *= (levels + i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Lipschitz-style tolerance between the exact infimum and a grid minimum.
pub fn epsilon_lip(p: &ExponentProblem, step: f64, a_max: f64) -> f64 {
    let n_r = p.n_r as f64;
    let nn = (p.n_r * p.n_t) as f64;
    let mut slope: f64 = weights(p.n_t, p.n_r).iter().sum();
    if p.objective == Objective::TruncExpCoding {
        slope += 0.5 * p.l_f64() * n_r;
    }
    match p.kind {
        ChannelKind::NegExp => {}
        ChannelKind::GammaGamma { rho } => slope += 0.5 * nn * (rho - 1.0).abs(),
        ChannelKind::LogNormal { sigma_l, beta1, log_osnr } => {
            let k = nn / (2.0 * sigma_l * sigma_l);
            slope += 0.5 * nn + k * (0.5 * a_max * log_osnr + beta1.abs());
        }
    }
    slope * step * n_r
}

#[derive(Clone, Copy, Debug)]
struct Cell {
    value: f64,
    idx: [u16; BRUTEFORCE_MAX_NR],
}

impl Cell {
    const EMPTY: Cell = Cell { value: f64::INFINITY, idx: [0; BRUTEFORCE_MAX_NR] };

    fn better_than(&self, other: &Cell) -> bool {
        self.value < other.value || (self.value == other.value && self.idx < other.idx)
    }

    fn offer(&mut self, value: f64, idx: &[u16; BRUTEFORCE_MAX_NR]) {
        if value < self.value || (value == self.value && *idx < self.idx) {
            self.value = value;
            self.idx = *idx;
        }
    }
}

/// Grid minima of one channel kind, bucketed by the index sum of the tuple.
///
/// One pass over the ordered grid answers every `(r, domain)` outage query
/// and every `(r, l, domain)` coding query for the block lengths it was built
/// with.
#[derive(Clone, Debug)]
pub struct BruteForceTable {
    pub kind: ChannelKind,
    pub n_t: usize,
    pub n_r: usize,
    pub grid: GridSpec,
    pub block_lens: Vec<u32>,
    outage: Vec<Cell>,
    coding: Vec<Vec<Cell>>,
}

struct Tables {
    outage: Vec<Cell>,
    coding: Vec<Vec<Cell>>,
}

impl Tables {
    fn new(buckets: usize, n_l: usize) -> Self {
        Self { outage: vec![Cell::EMPTY; buckets], coding: vec![vec![Cell::EMPTY; buckets]; n_l] }
    }

    fn merge(mut self, other: Tables) -> Tables {
        for (a, b) in self.outage.iter_mut().zip(&other.outage) {
            if b.better_than(a) {
                *a = *b;
            }
        }
        for (ta, tb) in self.coding.iter_mut().zip(&other.coding) {
            for (a, b) in ta.iter_mut().zip(tb) {
                if b.better_than(a) {
                    *a = *b;
                }
            }
        }
        self
    }
}

struct Enumerator<'a> {
    n_r: usize,
    c: &'a [f64],
    a_of: &'a [f64],
    tail_of: &'a [f64],
    deficit_of: &'a [f64],
    half_l: &'a [f64],
    offset: f64,
}

impl Enumerator<'_> {
    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        pos: usize,
        max_idx: usize,
        sum: usize,
        lin: f64,
        deficit: f64,
        idx: &mut [u16; BRUTEFORCE_MAX_NR],
        t: &mut Tables,
    ) {
        let ci = self.c[pos];
        if pos + 1 == self.n_r {
            for i in 0..=max_idx {
                idx[pos] = i as u16;
                let s = sum + i;
                let f = lin + ci * self.a_of[i] + self.tail_of[i] + self.offset;
                let d = deficit + self.deficit_of[i];
                t.outage[s].offer(f, idx);
                for (cells, hl) in t.coding.iter_mut().zip(self.half_l) {
                    cells[s].offer(f + hl * d, idx);
                }
            }
            idx[pos] = 0;
        } else {
            for i in 0..=max_idx {
                idx[pos] = i as u16;
                self.walk(pos + 1, i, sum + i, lin + ci * self.a_of[i], deficit + self.deficit_of[i], idx, t);
            }
            idx[pos] = 0;
        }
    }
}

impl BruteForceTable {
    /// Exhaustive pass over the ordered grid, split over rayon workers by the
    /// value of `a_1`. The reduction is a minimum under a total order, so the
    /// result does not depend on the split.
    pub fn build(kind: ChannelKind, n_t: usize, n_r: usize, block_lens: &[u32], grid: GridSpec) -> Result<Self> {
        let probe = ExponentProblem::outage(kind, n_t, n_r, 0.0);
        probe.validate()?;
        if !(grid.step > 0.0 && grid.step <= 0.5) {
            return Err(Error::InvalidArgument(format!("grid_step must lie in (0, 0.5], got {}", grid.step)));
        }
        if !(grid.a_max >= 2.0 * n_r as f64 + 2.0) || !grid.a_max.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "a_max must be at least 2 n_r + 2 = {}, got {}",
                2 * n_r + 2,
                grid.a_max
            )));
        }
        if n_r > BRUTEFORCE_MAX_NR {
            return Err(Error::InvalidArgument(format!("brute force supports n_r <= {BRUTEFORCE_MAX_NR}")));
        }
        if block_lens.contains(&0) {
            return Err(Error::InvalidArgument("block lengths must be positive".into()));
        }
        let levels = grid.levels();
        let points = ordered_grid_points(levels, n_r);
        if points > GRID_POINT_LIMIT || levels > u16::MAX as usize {
            return Err(Error::GridTooLarge { points, limit: GRID_POINT_LIMIT });
        }
        let c = weights(n_t, n_r);
        let a_of: Vec<f64> = (0..levels).map(|i| i as f64 * grid.step).collect();
        let tail_of: Vec<f64> = a_of.iter().map(|&x| kind.tail_term(x, n_t, n_r)).collect();
        let deficit_of: Vec<f64> = a_of.iter().map(|&x| (2.0 - x).max(0.0)).collect();
        let half_l: Vec<f64> = block_lens.iter().map(|&l| 0.5 * l as f64).collect();
        let buckets = n_r * (levels - 1) + 1;
        let en = Enumerator {
            n_r,
            c: &c,
            a_of: &a_of,
            tail_of: &tail_of,
            deficit_of: &deficit_of,
            half_l: &half_l,
            offset: grid.offset,
        };
        let tables = (0..levels)
            .into_par_iter()
            .fold(
                || Tables::new(buckets, half_l.len()),
                |mut t, first| {
                    let mut idx = [0u16; BRUTEFORCE_MAX_NR];
                    if n_r == 1 {
                        idx[0] = first as u16;
                        let f = c[0] * a_of[first] + tail_of[first] + en.offset;
                        t.outage[first].offer(f, &idx);
                        for (cells, hl) in t.coding.iter_mut().zip(&half_l) {
                            cells[first].offer(f + hl * deficit_of[first], &idx);
                        }
                    } else {
                        idx[0] = first as u16;
                        en.walk(1, first, first, c[0] * a_of[first], deficit_of[first], &mut idx, &mut t);
                    }
                    t
                },
            )
            .reduce(|| Tables::new(buckets, half_l.len()), Tables::merge);
        Ok(Self { kind, n_t, n_r, grid, block_lens: block_lens.to_vec(), outage: tables.outage, coding: tables.coding })
    }

    /// Grid minimum for `p`, which must match this table's kind and sizes.
    pub fn query(&self, p: &ExponentProblem) -> Result<OptimResult> {
        p.validate()?;
        if p.kind != self.kind || p.n_t != self.n_t || p.n_r != self.n_r {
            return Err(Error::InvalidArgument("problem does not match the brute-force table".into()));
        }
        let own = self.query_domain(p)?;
        let partner = self.query_domain(&p.with_domain(p.partner_domain()))?;
        Ok(OptimResult { tight: close(own.value, partner.value), ..own })
    }

    fn query_domain(&self, p: &ExponentProblem) -> Result<OptimResult> {
        let step = self.grid.step;
        let s_level = p.sum_level();
        let (cells, shift, range) = match p.objective {
            Objective::Outage => {
                let lo = ((s_level - GRID_DOMAIN_TOL) / step).ceil().max(0.0) as usize;
                (&self.outage, 0.0, lo..self.outage.len())
            }
            Objective::TruncExpCoding => {
                let BlockLen::Finite(l) = p.l else { unreachable!("validated") };
                let li = self
                    .block_lens
                    .iter()
                    .position(|&x| x == l)
                    .ok_or_else(|| Error::InvalidArgument(format!("table was not built for l = {l}")))?;
                let cells = &self.coding[li];
                let hi = match coding_budget(p) {
                    None => cells.len(),
                    Some(b) => (((b + GRID_DOMAIN_TOL) / step).floor() as usize + 1).min(cells.len()),
                };
                (cells, -(l as f64) * p.r, 0..hi)
            }
        };
        let mut best = Cell::EMPTY;
        for cell in &cells[range] {
            if cell.better_than(&best) {
                best = *cell;
            }
        }
        if !best.value.is_finite() {
            return Err(Error::OutOfRegime(format!("no grid point inside {}", p.domain.name())));
        }
        let argmin = best.idx[..self.n_r].iter().map(|&i| i as f64 * step).collect();
        Ok(OptimResult { value: best.value + shift, argmin, tight: true })
    }
}

/// Grid minimum of `p` over `{0, step, ..., a_max}^n_r` intersected with the domain.
pub fn infimum_bruteforce(p: &ExponentProblem, grid_step: f64, a_max: f64) -> Result<OptimResult> {
    infimum_bruteforce_grid(p, GridSpec::new(grid_step, a_max))
}

pub fn infimum_bruteforce_grid(p: &ExponentProblem, grid: GridSpec) -> Result<OptimResult> {
    p.validate()?;
    let ls: Vec<u32> = match p.l {
        BlockLen::Finite(l) if p.objective == Objective::TruncExpCoding => vec![l],
        _ => Vec::new(),
    };
    BruteForceTable::build(p.kind, p.n_t, p.n_r, &ls, grid)?.query(p)
}
