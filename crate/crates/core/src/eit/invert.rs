use super::{EitError, Evaluation, InversionConfig, Misfit, Objective};
use crate::fem_disk::{FieldRole, NodalField};
use serde::{Deserialize, Serialize};

/// Backtracking steps allowed before the line search gives up.
pub const MAX_BACKTRACKS: usize = 60;

/// Inner projected-gradient iterations of the proxy step when `β > 0`.
const PROXY_ITERS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    IterationCap,
    /// The step shrank to `s_stop` or below during backtracking.
    StepBelowStop,
    /// No acceptable step within [`MAX_BACKTRACKS`] reductions.
    Stagnation,
    /// The smoothed gradient vanished.
    Stationary,
}

/// One accepted step `σ_k → σ_{k+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    /// Index `k + 1` of the new iterate.
    pub iteration: usize,
    pub misfit: Misfit,
    /// `Φ(σ_{k+1})`.
    pub value: f64,
    /// Accepted step `s_k`.
    pub step: f64,
    /// `max_{0≤j<M} Φ(σ_{k−j})`.
    pub reference: f64,
    /// `‖σ_{k+1} − σ_k‖²` in H¹(Ω).
    pub h1_step_sq: f64,
    pub backtracks: usize,
    /// Step proposed for the next iteration.
    pub next_step: f64,
}

impl IterationRecord {
    /// Replays the nonmonotone acceptance test.
    pub fn satisfies_decrease(&self, tau: f64) -> bool {
        self.value < self.reference - tau / (2.0 * self.step) * self.h1_step_sq
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InversionRun {
    pub config: InversionConfig,
    /// `σ_0, σ_1, …`; entry `k` pairs with record `k − 1`.
    pub sigmas: Vec<Vec<f64>>,
    pub initial_value: f64,
    pub initial_misfit: Misfit,
    pub records: Vec<IterationRecord>,
    pub stop: StopReason,
}

impl InversionRun {
    pub fn final_sigma(&self) -> &[f64] {
        self.sigmas.last().expect("run holds at least σ0")
    }

    pub fn iterations(&self) -> usize {
        self.records.len()
    }

    pub fn final_value(&self) -> f64 {
        self.records.last().map_or(self.initial_value, |r| r.value)
    }
}

fn clip(v: f64, lo: f64, hi: f64) -> f64 {
    v.max(lo).min(hi)
}

/// Minimizer of `(1/2s)‖σ − γ‖² + βR(σ)` over the box, approximately.
fn proxy(obj: &Objective, gamma: &[f64], s: f64) -> Result<Vec<f64>, EitError> {
    let cfg = obj.config();
    let mut sigma: Vec<f64> = gamma.iter().map(|&g| clip(g, cfg.c0, cfg.c1)).collect();
    if cfg.beta > 0.0 {
        for _ in 0..PROXY_ITERS {
            let (_, rg) = super::total_variation(obj.mesh(), &sigma, super::TV_KAPPA);
            let rs = obj
                .smoother()
                .smooth(&NodalField::new(rg, FieldRole::GradientDensity))?;
            for ((x, g), r) in sigma.iter_mut().zip(gamma).zip(&rs.values) {
                let d = (*x - g) + s * cfg.beta * r;
                *x = clip(*x - 0.5 * d, cfg.c0, cfg.c1);
            }
        }
    }
    Ok(sigma)
}

/// Nonmonotone Barzilai–Borwein descent from `sigma0`.
///
/// Each outer iteration shrinks the current step by `ρ = (ρ₁ + ρ₂)/2` until
/// the trial point `σ₊ = proxy(σ_k − s ∇ₛJ)` satisfies
/// `Φ(σ₊) < max_{j<M} Φ(σ_{k−j}) − τ/(2s) ‖σ₊ − σ_k‖²_{H¹}`, then proposes
/// the next step from the H¹ BB quotient clamped to `[s_min, s_max]`. With a
/// W₂ misfit the first `warm_start_m` iterations use L², after which the
/// memory and the step are reset.
pub fn bb_invert(obj: &Objective, sigma0: &NodalField) -> Result<InversionRun, EitError> {
    let cfg = obj.config().clone();
    sigma0.check_len(obj.mesh().node_count())?;
    let phase = |k: usize| {
        if cfg.misfit == Misfit::W2 && k < cfg.warm_start_m {
            Misfit::L2
        } else {
            cfg.misfit
        }
    };
    let rho = cfg.rho();
    let h1 = obj.h1();

    let mut misfit = phase(0);
    let mut sigma = sigma0.clone();
    let mut eval: Evaluation = obj.evaluate(&sigma, misfit)?;
    let mut history = vec![eval.value];
    let mut run = InversionRun {
        config: cfg.clone(),
        sigmas: vec![sigma.values.clone()],
        initial_value: eval.value,
        initial_misfit: misfit,
        records: Vec::new(),
        stop: StopReason::IterationCap,
    };
    let mut s = cfg.s_max;
    let mut k = 0;
    while k < cfg.i_max {
        if phase(k) != misfit {
            misfit = phase(k);
            eval = obj.evaluate(&sigma, misfit)?;
            history = vec![eval.value];
            s = cfg.s_max;
        }
        if s <= cfg.s_stop {
            run.stop = StopReason::StepBelowStop;
            break;
        }
        let g = &eval.sobolev_gradient.values;
        if g.iter().all(|&v| v == 0.0) {
            run.stop = StopReason::Stationary;
            break;
        }
        let start = history.len().saturating_sub(cfg.memory);
        let reference = history[start..].iter().cloned().fold(f64::MIN, f64::max);
        let mut backtracks = 0;
        let accepted = loop {
            if backtracks == MAX_BACKTRACKS {
                break None;
            }
            s *= rho;
            backtracks += 1;
            if s <= cfg.s_stop {
                break None;
            }
            let gamma: Vec<f64> = sigma.values.iter().zip(g).map(|(x, d)| x - s * d).collect();
            let trial = proxy(obj, &gamma, s)?;
            let diff: Vec<f64> = trial.iter().zip(&sigma.values).map(|(a, b)| a - b).collect();
            let dn = h1.norm_sq(&diff);
            if dn == 0.0 {
                continue;
            }
            let trial = NodalField::new(trial, FieldRole::Conductivity);
            let value = obj.value(&trial, misfit)?;
            if value < reference - cfg.tau / (2.0 * s) * dn {
                break Some((trial, diff, dn, value));
            }
        };
        let Some((next, diff, dn, value)) = accepted else {
            run.stop = if s <= cfg.s_stop {
                StopReason::StepBelowStop
            } else {
                StopReason::Stagnation
            };
            break;
        };
        let next_eval = obj.evaluate(&next, misfit)?;
        let dg: Vec<f64> = next_eval
            .sobolev_gradient
            .values
            .iter()
            .zip(g)
            .map(|(a, b)| a - b)
            .collect();
        let y = h1.inner(&diff, &dg);
        let step = s;
        s = if y <= 0.0 {
            cfg.s_max
        } else {
            (dn / y).max(cfg.s_min).min(cfg.s_max)
        };
        k += 1;
        run.records.push(IterationRecord {
            iteration: k,
            misfit,
            value,
            step,
            reference,
            h1_step_sq: dn,
            backtracks,
            next_step: s,
        });
        run.sigmas.push(next.values.clone());
        history.push(next_eval.value);
        sigma = next;
        eval = next_eval;
    }
    Ok(run)
}
