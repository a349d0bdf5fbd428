//! Analytic-versus-grid audit of the exponent optimizer.
//!
//! For every channel kind, antenna pair, rate and block length in an
//! [`AuditSpec`], the analytic infimum is compared with the exhaustive grid
//! minimum. A case passes when the two differ by at most `epsilon_lip`.

use log::debug;
use serde::Serialize;

use crate::channel::BlockLen;
use crate::error::Result;
use crate::exponent::{
    epsilon_lip, infimum_analytic, BruteForceTable, ChannelKind, Domain, ExponentProblem, GridSpec, Objective,
};

/// Parameter grid of an audit.
#[derive(Clone, Debug, PartialEq)]
pub struct AuditSpec {
    pub kinds: Vec<ChannelKind>,
    /// `n_t` runs over `1..=max_nt` and `n_r` over `1..=n_t`.
    pub max_nt: usize,
    /// `r` runs over `0, r_step, ..., n_r`.
    pub r_step: f64,
    /// Block lengths `1..=l_factor * n_t`.
    pub l_factor: u32,
    pub grid_step: f64,
    /// Added to every grid value; nonzero only to exercise the failure path.
    pub offset: f64,
}

impl Default for AuditSpec {
    fn default() -> Self {
        Self {
            kinds: vec![
                ChannelKind::NegExp,
                ChannelKind::GammaGamma { rho: 2.5 },
                ChannelKind::LogNormal { sigma_l: 1.0, beta1: 0.0, log_osnr: 1e4f64.ln() },
            ],
            max_nt: 4,
            r_step: 0.25,
            l_factor: 2,
            grid_step: 0.05,
            offset: 0.0,
        }
    }
}

/// One audited case.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditCase {
    pub kind: &'static str,
    pub objective: &'static str,
    pub domain: &'static str,
    pub n_t: usize,
    pub n_r: usize,
    pub r: f64,
    pub l: Option<u32>,
    pub analytic: f64,
    pub grid: f64,
    pub eps_lip: f64,
}

impl AuditCase {
    pub fn delta(&self) -> f64 {
        (self.analytic - self.grid).abs()
    }

    pub fn passed(&self) -> bool {
        self.delta() <= self.eps_lip
    }
}

/// Per (kind, objective, domain) summary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditRow {
    pub kind: &'static str,
    pub objective: &'static str,
    pub domain: &'static str,
    pub cases: usize,
    pub max_delta: f64,
    /// Largest `delta / eps_lip`.
    pub max_ratio: f64,
    pub violations: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AuditReport {
    pub rows: Vec<AuditRow>,
    pub failures: Vec<AuditCase>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn total_cases(&self) -> usize {
        self.rows.iter().map(|r| r.cases).sum()
    }

    fn record(&mut self, c: AuditCase) {
        let pos = self.rows.iter().position(|r| r.kind == c.kind && r.objective == c.objective && r.domain == c.domain);
        let row = match pos {
            Some(i) => &mut self.rows[i],
            None => {
                self.rows.push(AuditRow {
                    kind: c.kind,
                    objective: c.objective,
                    domain: c.domain,
                    cases: 0,
                    max_delta: 0.0,
                    max_ratio: 0.0,
                    violations: 0,
                });
                self.rows.last_mut().expect("just pushed")
            }
        };
        row.cases += 1;
        row.max_delta = row.max_delta.max(c.delta());
        row.max_ratio = row.max_ratio.max(c.delta() / c.eps_lip);
        if !c.passed() {
            row.violations += 1;
            self.failures.push(c);
        }
    }
}

fn objective_name(o: Objective) -> &'static str {
    match o {
        Objective::Outage => "outage",
        Objective::TruncExpCoding => "coding",
    }
}

/// Run the audit. One grid table per `(kind, n_t, n_r)` serves every rate and block length.
pub fn run_audit(spec: &AuditSpec) -> Result<AuditReport> {
    let mut report = AuditReport::default();
    for kind in &spec.kinds {
        for n_t in 1..=spec.max_nt {
            let ls: Vec<u32> = (1..=spec.l_factor * n_t as u32).collect();
            for n_r in 1..=n_t {
                let mut grid = GridSpec::standard(n_r);
                grid.step = spec.grid_step;
                grid.offset = spec.offset;
                let table = BruteForceTable::build(*kind, n_t, n_r, &ls, grid)?;
                debug!("audit table {} {n_t}x{n_r} built", kind.name());
                let n_rates = (n_r as f64 / spec.r_step + 1e-9).floor() as usize;
                for ri in 0..=n_rates {
                    let r = (ri as f64 * spec.r_step).min(n_r as f64);
                    let mut problems = vec![ExponentProblem::outage(*kind, n_t, n_r, r)];
                    for &l in &ls {
                        let p = ExponentProblem::coding(*kind, n_t, n_r, r, l);
                        problems.push(p.with_domain(Domain::AcPrime));
                        problems.push(p);
                    }
                    for p in problems {
                        let analytic = infimum_analytic(&p)?;
                        let g = table.query(&p)?;
                        report.record(AuditCase {
                            kind: kind.name(),
                            objective: objective_name(p.objective),
                            domain: p.domain.name(),
                            n_t,
                            n_r,
                            r,
                            l: match p.l {
                                BlockLen::Finite(l) if p.objective == Objective::TruncExpCoding => Some(l),
                                _ => None,
                            },
                            analytic: analytic.value,
                            grid: g.value,
                            eps_lip: epsilon_lip(&p, grid.step, grid.a_max),
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Analytic coding-exponent minimizers for `l` in `ls`: `(l, value, argmin)`.
pub fn staircase(kind: ChannelKind, n_t: usize, n_r: usize, r: f64, ls: &[u32]) -> Result<Vec<(u32, f64, Vec<f64>)>> {
    ls.iter()
        .map(|&l| {
            let res = infimum_analytic(&ExponentProblem::coding(kind, n_t, n_r, r, l))?;
            Ok((l, res.value, res.argmin))
        })
        .collect()
}
