//! Capacities: suprema of divergences between `R_p` and `Q_p` over input
//! distributions.
//!
//! The Holevo capacity `χ* = sup_p S(R_p‖Q_p)` is computed by a
//! multiplicative-update ascent (Blahut–Arimoto style). Its stationarity
//! condition — `S(W_x‖E_p)` constant on the support of the optimizer — gives
//! a computable certificate: for any `p`,
//! `Σ_x p(x) S(W_x‖E_p) ≤ χ* ≤ max_x S(W_x‖E_p)`, so the duality gap between
//! those two numbers bounds the distance from optimal.
//!
//! The Hoeffding capacity `χ*_r = sup_p H(R_p‖Q_p|r)`, the Chernoff capacity
//! `χ*_C = sup_p C(R_p‖Q_p)`, and `χ*_max = sup_p S_max(R_p‖Q_p)` have no
//! comparable certificate (concavity in `p` is not established), so they use
//! projected-gradient ascent with numerical gradients, a uniform start plus
//! seeded random restarts, and `certified = false`. For permutation-symmetric
//! channels the uniform start already sits on the symmetry point, and the
//! result is never below the uniform-weights evaluation.

use rayon::prelude::*;

use crate::channel::{Channel, WeightedEnsemble};
use crate::divergences::{chernoff_of, hoeffding_direct_of, max_relative_entropy, PairSpectrum};
use crate::hermitian::DensityOperator;
use crate::numeric::project_to_simplex;
use crate::rng::SplitMix64;
use crate::sample::random_simplex;
use crate::{Error, Result};

/// Default seed for optimizer restarts; per-restart streams are derived from
/// `(seed, restart index)`.
pub const DEFAULT_OPTIMIZER_SEED: u64 = 7;

const RESTARTS: usize = 20;
const MAX_ITERS: usize = 500;
const GRAD_STEP: f64 = 1e-6;
const IMPROVEMENT_TOL: f64 = 1e-9;
const BA_GAP_TOL: f64 = 1e-8;
const BA_MAX_ITERS: usize = 100_000;

/// Result of a capacity optimization.
#[derive(Debug, Clone)]
pub struct CapacityResult {
    /// Capacity value in bits.
    pub value: f64,
    /// Input distribution achieving `value`.
    pub weights: Vec<f64>,
    /// Iterations spent (summed over restarts for the gradient methods).
    pub iterations: usize,
    /// Final duality gap (Blahut–Arimoto) or last step improvement.
    pub residual: f64,
    /// True only when an optimality certificate held at termination.
    pub certified: bool,
}

// ---------------------------------------------------------------------------
// Blahut–Arimoto core (shared with the relative-entropy radius)
// ---------------------------------------------------------------------------

pub(crate) struct BlahutArimotoOutcome {
    pub weights: Vec<f64>,
    /// `Σ p(x) S(W_x‖E_p)` at the final weights (lower value).
    pub mutual_information: f64,
    /// `max_x S(W_x‖E_p)` at the final weights (upper value).
    pub radius_upper: f64,
    pub iterations: usize,
    pub gap: f64,
    pub converged: bool,
}

/// Multiplicative-update ascent `p ← p·2^{S(W_x‖E_p)} / Z` from the uniform
/// start, stopping when the duality gap drops below `gap_tol`.
pub(crate) fn blahut_arimoto(
    outputs: &[DensityOperator],
    gap_tol: f64,
    max_iters: usize,
) -> Result<BlahutArimotoOutcome> {
    let n = outputs.len();
    if n == 0 {
        return Err(Error::EmptyInput("no channel outputs"));
    }
    let dim = outputs[0].dim();
    let mut p = vec![1.0 / n as f64; n];
    let mut iterations = 0;
    let mut divs = vec![0.0f64; n];

    loop {
        // E_p
        let mut acc = crate::hermitian::HermitianMatrix::zeros(dim);
        for (x, &w) in p.iter().enumerate() {
            if w > 0.0 {
                acc = acc.add(&outputs[x].matrix().scale(w))?;
            }
        }
        let avg = DensityOperator::new(acc)?;
        for (x, div) in divs.iter_mut().enumerate() {
            *div = PairSpectrum::new(&outputs[x], &avg)?.relative_entropy_bits();
        }
        let lower: f64 = p
            .iter()
            .zip(&divs)
            .filter(|(&w, _)| w > 0.0)
            .map(|(&w, &d)| w * d)
            .sum();
        let upper = divs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let gap = upper - lower;
        if gap < gap_tol || iterations >= max_iters {
            return Ok(BlahutArimotoOutcome {
                weights: p,
                mutual_information: lower,
                radius_upper: upper,
                iterations,
                gap,
                converged: gap < gap_tol,
            });
        }
        iterations += 1;
        let mut z = 0.0;
        for (w, &d) in p.iter_mut().zip(&divs) {
            if *w > 0.0 {
                // 2^{d - upper} keeps the update in range; d is finite on supp p
                *w *= ((d - upper) * std::f64::consts::LN_2).exp();
                z += *w;
            }
        }
        for w in p.iter_mut() {
            *w /= z;
        }
    }
}

/// Holevo capacity `χ*(W) = sup_p S(R_p‖Q_p)`.
pub fn holevo_capacity(ch: &Channel) -> Result<CapacityResult> {
    let outcome = blahut_arimoto(ch.outputs(), BA_GAP_TOL, BA_MAX_ITERS)?;
    Ok(CapacityResult {
        value: outcome.mutual_information,
        weights: outcome.weights,
        iterations: outcome.iterations,
        residual: outcome.gap,
        certified: outcome.converged,
    })
}

// ---------------------------------------------------------------------------
// Projected-gradient ascent over the simplex
// ---------------------------------------------------------------------------

fn ascend_from(
    start: Vec<f64>,
    f: &(impl Fn(&[f64]) -> f64 + Sync),
) -> (Vec<f64>, f64, usize, f64) {
    let n = start.len();
    let mut p = project_to_simplex(&start);
    let mut value = f(&p);
    let mut step = 0.25;
    let mut iterations = 0;
    let mut last_improvement = f64::INFINITY;

    while iterations < MAX_ITERS {
        iterations += 1;
        let mut grad = vec![0.0; n];
        for x in 0..n {
            let mut plus = p.clone();
            plus[x] += GRAD_STEP;
            let mut minus = p.clone();
            minus[x] -= GRAD_STEP;
            grad[x] = (f(&project_to_simplex(&plus)) - f(&project_to_simplex(&minus)))
                / (2.0 * GRAD_STEP);
        }
        let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if norm == 0.0 {
            break;
        }
        let mut s = step;
        let mut improved = false;
        for _ in 0..40 {
            let cand: Vec<f64> = p
                .iter()
                .zip(&grad)
                .map(|(&pi, &gi)| pi + s * gi / norm)
                .collect();
            let cand = project_to_simplex(&cand);
            let cv = f(&cand);
            if cv > value {
                last_improvement = cv - value;
                p = cand;
                value = cv;
                step = (s * 1.5).min(0.5);
                improved = true;
                break;
            }
            s *= 0.5;
        }
        if !improved || last_improvement < IMPROVEMENT_TOL {
            break;
        }
    }
    (p, value, iterations, last_improvement)
}

/// Multi-start projected-gradient maximization of `f` over the simplex.
/// Deterministic given the seed; restarts run in parallel and are reduced in
/// index order.
fn maximize_over_simplex(
    n: usize,
    seed: u64,
    f: impl Fn(&[f64]) -> f64 + Sync,
) -> CapacityResult {
    let mut starts: Vec<Vec<f64>> = vec![vec![1.0 / n as f64; n]];
    for k in 0..RESTARTS {
        let mut rng = SplitMix64::stream(seed, k as u64);
        starts.push(random_simplex(n, &mut rng));
    }
    let runs: Vec<(Vec<f64>, f64, usize, f64)> = starts
        .into_par_iter()
        .map(|start| ascend_from(start, &f))
        .collect();
    let iterations = runs.iter().map(|r| r.2).sum();
    // index-ordered reduction keeps ties deterministic
    let mut best = runs[0].clone();
    for run in &runs[1..] {
        if run.1 > best.1 {
            best = run.clone();
        }
    }
    CapacityResult {
        value: best.1,
        weights: best.0,
        iterations,
        residual: best.3,
        certified: false,
    }
}

/// Hoeffding capacity `χ*_r(W) = sup_p H(R_p‖Q_p|r)` with seeded restarts.
pub fn hoeffding_capacity_seeded(ch: &Channel, r: f64, seed: u64) -> Result<CapacityResult> {
    if r < 0.0 {
        return Err(Error::Domain(format!("Hoeffding parameter r = {r} < 0")));
    }
    let objective = |w: &[f64]| -> f64 {
        let ensemble = match WeightedEnsemble::new(ch, w.to_vec()) {
            Ok(e) => e,
            Err(_) => return f64::NEG_INFINITY,
        };
        let js = match ensemble.joint_spectrum() {
            Ok(js) => js,
            Err(_) => return f64::NEG_INFINITY,
        };
        hoeffding_direct_of(&js, r, Some(js.relative_entropy_bits())).unwrap_or(f64::NEG_INFINITY)
    };
    Ok(maximize_over_simplex(ch.alphabet_size(), seed, objective))
}

pub fn hoeffding_capacity(ch: &Channel, r: f64) -> Result<CapacityResult> {
    hoeffding_capacity_seeded(ch, r, DEFAULT_OPTIMIZER_SEED)
}

/// Chernoff capacity `χ*_C(W) = sup_p C(R_p‖Q_p)`.
pub fn chernoff_capacity_seeded(ch: &Channel, seed: u64) -> Result<CapacityResult> {
    let objective = |w: &[f64]| -> f64 {
        let ensemble = match WeightedEnsemble::new(ch, w.to_vec()) {
            Ok(e) => e,
            Err(_) => return f64::NEG_INFINITY,
        };
        match ensemble.joint_spectrum() {
            Ok(js) => chernoff_of(&js),
            Err(_) => f64::NEG_INFINITY,
        }
    };
    Ok(maximize_over_simplex(ch.alphabet_size(), seed, objective))
}

pub fn chernoff_capacity(ch: &Channel) -> Result<CapacityResult> {
    chernoff_capacity_seeded(ch, DEFAULT_OPTIMIZER_SEED)
}

/// `χ*_max(W) = sup_p max_{x ∈ supp p} S_max(W_x‖E_p)`.
///
/// The objective is unbounded for some channels (letters with vanishing
/// weight can push `S_max(W_x‖E_p)` arbitrarily high while they remain in
/// the support), so the reported value is a lower bound on the supremum;
/// iteration limits stop the boundary chase.
pub fn max_capacity_seeded(ch: &Channel, seed: u64) -> Result<CapacityResult> {
    let objective = |w: &[f64]| -> f64 {
        let ensemble = match WeightedEnsemble::new(ch, w.to_vec()) {
            Ok(e) => e,
            Err(_) => return f64::NEG_INFINITY,
        };
        let avg = ensemble.average();
        let mut best = f64::NEG_INFINITY;
        for (x, &px) in w.iter().enumerate() {
            if px > 1e-12 {
                match max_relative_entropy(ch.output(x), &avg) {
                    Ok(v) => best = best.max(v.value),
                    Err(_) => return f64::NEG_INFINITY,
                }
            }
        }
        best
    };
    Ok(maximize_over_simplex(ch.alphabet_size(), seed, objective))
}

pub fn max_capacity(ch: &Channel) -> Result<CapacityResult> {
    max_capacity_seeded(ch, DEFAULT_OPTIMIZER_SEED)
}
