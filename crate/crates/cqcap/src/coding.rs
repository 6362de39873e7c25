//! Codes and capacity bounds.
//!
//! The achievability side rests on one random-coding estimate: codewords
//! drawn i.i.d. from `p` and decoded with the square-root measurement built
//! from the test projections
//!
//! ```text
//! π(x) = {(1+c)W_x − (2+c+1/c)(M−1)E_p(W) > 0}
//! ```
//!
//! have expected average error at most
//! `(1+c)ᵗ(2+c+1/c)^{1-t}(M-1)^{1-t}·Tr R_pᵗQ_p^{1-t}` for every `t ∈ [0,1]`.
//! From it follow a one-shot lower bound on the ε-capacity in terms of the
//! Hoeffding capacity, its n-use refinement, and a lower bound on the
//! exponential capacity. The converse side is the max-relative-entropy
//! radius: `C_ε ≤ R_max(ran W) − log₂(1-ε)`.
//!
//! For commuting channels an exact brute-force one-shot capacity is
//! available (maximum-likelihood decoding is optimal there), which sandwiches
//! the analytic bounds in the test suites.

use rayon::prelude::*;

use crate::capacities::{
    chernoff_capacity_seeded, hoeffding_capacity_seeded, DEFAULT_OPTIMIZER_SEED,
};
use crate::channel::{Channel, WeightedEnsemble};
use crate::discrimination::{max_radius, ml_measurement_commuting, Povm};
use crate::divergences::PsiFunction;
use crate::hermitian::{
    frac_power, min_eigenvalue, positive_part_projection, HermitianMatrix,
};
use crate::rng::SplitMix64;
use crate::{Error, Result};

/// Enumeration guard for the brute-force search: `M_max · |X|^{M_max}`.
pub const BRUTE_FORCE_GUARD: u64 = 10_000_000;

// ---------------------------------------------------------------------------
// Codes
// ---------------------------------------------------------------------------

/// An M-code: an encoding of messages into alphabet indices plus an M-element
/// decoding POVM.
#[derive(Debug, Clone)]
pub struct Code {
    encoding: Vec<usize>,
    decoding: Povm,
}

impl Code {
    pub fn new(encoding: Vec<usize>, decoding: Povm) -> Result<Self> {
        if encoding.is_empty() {
            return Err(Error::EmptyInput("code with no messages"));
        }
        if encoding.len() != decoding.len() {
            return Err(Error::SizeMismatch(encoding.len(), decoding.len()));
        }
        Ok(Self { encoding, decoding })
    }

    /// Build from channel labels instead of indices.
    pub fn from_labels(ch: &Channel, labels: &[&str], decoding: Povm) -> Result<Self> {
        let encoding = labels
            .iter()
            .map(|l| ch.label_index(l))
            .collect::<Result<Vec<_>>>()?;
        Self::new(encoding, decoding)
    }

    pub fn message_count(&self) -> usize {
        self.encoding.len()
    }

    pub fn encoding(&self) -> &[usize] {
        &self.encoding
    }

    pub fn decoding(&self) -> &Povm {
        &self.decoding
    }
}

/// Average and maximum error probability of a code on a channel.
pub fn error_statistics(ch: &Channel, code: &Code) -> Result<(f64, f64)> {
    let d = ch.dim();
    let identity = HermitianMatrix::identity(d);
    let mut sum = 0.0;
    let mut worst: f64 = 0.0;
    for (k, &x) in code.encoding().iter().enumerate() {
        if x >= ch.alphabet_size() {
            return Err(Error::UnknownLabel(format!("input index {x}")));
        }
        let miss = identity.sub(&code.decoding().elements()[k])?;
        let err = ch.output(x).matrix().trace_product(&miss)?;
        sum += err;
        worst = worst.max(err);
    }
    Ok((sum / code.message_count() as f64, worst))
}

/// `(1/M) Σ_k Tr W_{φ_k}(I - E_k)`.
pub fn average_error(ch: &Channel, code: &Code) -> Result<f64> {
    Ok(error_statistics(ch, code)?.0)
}

/// Square-root measurement over test operators `0 ≤ π_k ≤ I`:
/// `E_k = S^{-1/2} π_k S^{-1/2}` with `S = Σ_j π_j` (inverse square root on
/// the support of S, so `Σ E_k` is the support projection of `S`).
pub fn square_root_measurement(projections: &[HermitianMatrix]) -> Result<Povm> {
    let first = projections.first().ok_or(Error::EmptyInput("no test operators"))?;
    let d = first.dim();
    let mut s = HermitianMatrix::zeros(d);
    for p in projections {
        s = s.add(p)?;
    }
    let inv_sqrt = frac_power(&s, -0.5)?;
    let elements = projections
        .iter()
        .map(|p| inv_sqrt.sandwich(p))
        .collect::<Result<Vec<_>>>()?;
    Povm::new(elements)
}

/// Slack of the Hayashi–Nagaoka operator inequality: smallest eigenvalue of
/// `(1+c)(I-A) + (2+c+1/c)B − [I − (A+B)^{-1/2}A(A+B)^{-1/2}]`, which is
/// nonnegative (within roundoff) for all `0 ≤ A ≤ I`, `B ⪰ 0`, `c > 0`.
pub fn hn_operator_inequality_check(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    c: f64,
) -> Result<f64> {
    if c <= 0.0 {
        return Err(Error::Domain(format!("HN constant c = {c} must be > 0")));
    }
    let d = a.dim();
    let identity = HermitianMatrix::identity(d);
    let total = a.add(b)?;
    let inv_sqrt = frac_power(&total, -0.5)?;
    let recovered = inv_sqrt.sandwich(a)?;
    let lhs = identity.sub(&recovered)?;
    let rhs = identity
        .sub(a)?
        .scale(1.0 + c)
        .add(&b.scale(2.0 + c + 1.0 / c))?;
    min_eigenvalue(&rhs.sub(&lhs)?)
}

// ---------------------------------------------------------------------------
// Random coding
// ---------------------------------------------------------------------------

fn powf0(x: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else {
        x.powf(e)
    }
}

/// Random-coding error bound
/// `(1+c)ᵗ (2+c+1/c)^{1-t} (M-1)^{1-t} · 2^{ψ(R_p,Q_p|t)}`
/// (with the convention `x⁰ = 1`, including `M = 1`, `t = 1`).
pub fn random_coding_bound(
    ensemble: &WeightedEnsemble,
    m: usize,
    c: f64,
    t: f64,
) -> Result<f64> {
    if m < 1 {
        return Err(Error::Domain("message count M must be ≥ 1".into()));
    }
    if c <= 0.0 {
        return Err(Error::Domain(format!("constant c = {c} must be > 0")));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("exponent t = {t} outside [0,1]")));
    }
    let psi = ensemble.joint_spectrum()?.psi(t);
    Ok(powf0(1.0 + c, t)
        * powf0(2.0 + c + 1.0 / c, 1.0 - t)
        * powf0((m - 1) as f64, 1.0 - t)
        * 2f64.powf(psi))
}

fn sample_random_code_stream(
    ensemble: &WeightedEnsemble,
    m: usize,
    c: f64,
    mut rng: SplitMix64,
) -> Result<Code> {
    if m < 1 {
        return Err(Error::Domain("message count M must be ≥ 1".into()));
    }
    if c <= 0.0 {
        return Err(Error::Domain(format!("constant c = {c} must be > 0")));
    }
    let ch = ensemble.channel();
    let avg = ensemble.average();
    let penalty = (2.0 + c + 1.0 / c) * (m - 1) as f64;
    let codewords: Vec<usize> = (0..m)
        .map(|_| rng.next_categorical(ensemble.weights()))
        .collect();
    // π(x) depends only on the letter; repeated codewords still get their own
    // POVM elements below
    let mut pi_cache: std::collections::HashMap<usize, HermitianMatrix> =
        std::collections::HashMap::new();
    for &x in &codewords {
        if !pi_cache.contains_key(&x) {
            let test = ch
                .output(x)
                .matrix()
                .scale(1.0 + c)
                .sub(&avg.matrix().scale(penalty))?;
            pi_cache.insert(x, positive_part_projection(&test)?);
        }
    }
    let pis: Vec<HermitianMatrix> = codewords
        .iter()
        .map(|x| pi_cache.get(x).expect("cached above").clone())
        .collect();
    let decoding = square_root_measurement(&pis)?;
    Code::new(codewords, decoding)
}

/// One random code: codewords drawn i.i.d. from the ensemble weights
/// (splitmix stream from `seed`), decoded by the square-root measurement of
/// the test projections `{(1+c)W_x − (2+c+1/c)(M−1)E_p > 0}`. Deterministic
/// given `(seed, M, c)`.
pub fn sample_random_code(
    ensemble: &WeightedEnsemble,
    m: usize,
    c: f64,
    seed: u64,
) -> Result<Code> {
    sample_random_code_stream(ensemble, m, c, SplitMix64::new(seed))
}

/// Average errors of `trials` independently sampled codes; trial `i` uses the
/// stream `(seed, i)`, so results are reproducible across runs and across
/// worker partitions.
pub fn monte_carlo_errors(
    ensemble: &WeightedEnsemble,
    m: usize,
    c: f64,
    trials: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let code =
                sample_random_code_stream(ensemble, m, c, SplitMix64::stream(seed, i as u64))?;
            average_error(ensemble.channel(), &code)
        })
        .collect()
}

/// Mean, sample standard deviation, and minimum.
pub fn summarize_errors(errors: &[f64]) -> (f64, f64, f64) {
    let n = errors.len() as f64;
    let mean = errors.iter().sum::<f64>() / n;
    let var = if errors.len() > 1 {
        errors.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let min = errors.iter().cloned().fold(f64::INFINITY, f64::min);
    (mean, var.sqrt(), min)
}

// ---------------------------------------------------------------------------
// Capacity bounds
// ---------------------------------------------------------------------------

/// Which bound a report carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    OneShotLower,
    NShotLower,
    ExponentialLower,
    OneShotUpper,
    /// The ε threshold `2^{2-χ*_C}` below which the c = 1 lower bound is
    /// never positive.
    PositivityThreshold,
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundKind::OneShotLower => write!(f, "oneshot_lower"),
            BoundKind::NShotLower => write!(f, "nshot_lower"),
            BoundKind::ExponentialLower => write!(f, "exp_lower"),
            BoundKind::OneShotUpper => write!(f, "oneshot_upper"),
            BoundKind::PositivityThreshold => write!(f, "threshold"),
        }
    }
}

/// Parameters that produced a bound value.
#[derive(Debug, Clone, Copy, Default)]
pub struct BoundParams {
    pub epsilon: Option<f64>,
    pub c: Option<f64>,
    pub r: Option<f64>,
    pub n: Option<u32>,
    pub t: Option<f64>,
}

/// A named bound value. Lower bounds keep their raw (possibly negative)
/// value; `clamped` marks that the trivial bound 0 supersedes it.
#[derive(Debug, Clone, Copy)]
pub struct BoundReport {
    pub bound: BoundKind,
    pub value: f64,
    pub clamped: bool,
    pub params: BoundParams,
    /// Exponential bound only: whether `r < χ*_C(W)` predicts positivity.
    pub positive_predicted: Option<bool>,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain(format!("ε = {epsilon} outside (0,1)")));
    }
    Ok(())
}

/// One-shot lower bound at a fixed `c`:
/// `χ*_{log₂((1+c)/ε)}(W) − log₂((2+c+1/c)/ε)`.
pub fn one_shot_lower_bound_seeded(
    ch: &Channel,
    epsilon: f64,
    c: f64,
    seed: u64,
) -> Result<BoundReport> {
    check_epsilon(epsilon)?;
    if c <= 0.0 {
        return Err(Error::Domain(format!("constant c = {c} must be > 0")));
    }
    let r = ((1.0 + c) / epsilon).log2();
    let capacity = hoeffding_capacity_seeded(ch, r, seed)?;
    let value = capacity.value - ((2.0 + c + 1.0 / c) / epsilon).log2();
    Ok(BoundReport {
        bound: BoundKind::OneShotLower,
        value,
        clamped: value < 0.0,
        params: BoundParams {
            epsilon: Some(epsilon),
            c: Some(c),
            r: Some(r),
            ..Default::default()
        },
        positive_predicted: None,
    })
}

pub fn one_shot_lower_bound(ch: &Channel, epsilon: f64, c: f64) -> Result<BoundReport> {
    one_shot_lower_bound_seeded(ch, epsilon, c, DEFAULT_OPTIMIZER_SEED)
}

/// Logarithmic c-grid `2^{-6}, …, 2^{6}` (33 points) used when the caller
/// leaves `c` free.
pub fn c_scan_grid() -> Vec<f64> {
    (0..33)
        .map(|k| 2f64.powf(-6.0 + 12.0 * k as f64 / 32.0))
        .collect()
}

/// One-shot lower bound maximized over the c-grid. Returns the best report
/// and the per-c reports (grid order).
pub fn one_shot_lower_bound_scan(
    ch: &Channel,
    epsilon: f64,
    seed: u64,
) -> Result<(BoundReport, Vec<BoundReport>)> {
    check_epsilon(epsilon)?;
    let reports: Vec<BoundReport> = c_scan_grid()
        .into_par_iter()
        .map(|c| one_shot_lower_bound_seeded(ch, epsilon, c, seed))
        .collect::<Result<Vec<_>>>()?;
    let mut best = reports[0];
    for rep in &reports[1..] {
        if rep.value > best.value {
            best = *rep;
        }
    }
    Ok((best, reports))
}

/// Per-use n-shot lower bound:
/// `χ*_{(1/n)log₂((1+c)/ε)}(W) − (1/n)log₂((2+c+1/c)/ε)`, evaluated on the
/// single-letter channel.
pub fn n_shot_lower_bound_seeded(
    ch: &Channel,
    epsilon: f64,
    c: f64,
    n: u32,
    seed: u64,
) -> Result<BoundReport> {
    check_epsilon(epsilon)?;
    if n < 1 {
        return Err(Error::Domain("n must be ≥ 1".into()));
    }
    if c <= 0.0 {
        return Err(Error::Domain(format!("constant c = {c} must be > 0")));
    }
    let r = ((1.0 + c) / epsilon).log2() / n as f64;
    let capacity = hoeffding_capacity_seeded(ch, r, seed)?;
    let value = capacity.value - ((2.0 + c + 1.0 / c) / epsilon).log2() / n as f64;
    Ok(BoundReport {
        bound: BoundKind::NShotLower,
        value,
        clamped: value < 0.0,
        params: BoundParams {
            epsilon: Some(epsilon),
            c: Some(c),
            r: Some(r),
            n: Some(n),
            ..Default::default()
        },
        positive_predicted: None,
    })
}

pub fn n_shot_lower_bound(ch: &Channel, epsilon: f64, c: f64, n: u32) -> Result<BoundReport> {
    n_shot_lower_bound_seeded(ch, epsilon, c, n, DEFAULT_OPTIMIZER_SEED)
}

/// Exponential-capacity lower bound `χ*_r(W) − r`, positive exactly when
/// `r < χ*_C(W)`; the report carries that predicate.
pub fn exp_capacity_lower_bound_seeded(ch: &Channel, r: f64, seed: u64) -> Result<BoundReport> {
    if r < 0.0 {
        return Err(Error::Domain(format!("rate r = {r} < 0")));
    }
    let capacity = hoeffding_capacity_seeded(ch, r, seed)?;
    let chernoff = chernoff_capacity_seeded(ch, seed)?;
    let value = capacity.value - r;
    Ok(BoundReport {
        bound: BoundKind::ExponentialLower,
        value,
        clamped: value < 0.0,
        params: BoundParams {
            r: Some(r),
            ..Default::default()
        },
        positive_predicted: Some(r < chernoff.value),
    })
}

pub fn exp_capacity_lower_bound(ch: &Channel, r: f64) -> Result<BoundReport> {
    exp_capacity_lower_bound_seeded(ch, r, DEFAULT_OPTIMIZER_SEED)
}

/// One-shot upper bound `R_max(ran W) − log₂(1-ε)`.
pub fn one_shot_upper_bound(ch: &Channel, epsilon: f64) -> Result<BoundReport> {
    check_epsilon(epsilon)?;
    let radius = max_radius(ch.outputs())?;
    let value = radius.value - (1.0 - epsilon).log2();
    Ok(BoundReport {
        bound: BoundKind::OneShotUpper,
        value,
        clamped: false,
        params: BoundParams {
            epsilon: Some(epsilon),
            ..Default::default()
        },
        positive_predicted: None,
    })
}

/// The ε threshold `2^{2-χ*_C(W)}` below which the c = 1 one-shot lower
/// bound is never positive.
pub fn positivity_threshold_seeded(ch: &Channel, seed: u64) -> Result<BoundReport> {
    let chernoff = chernoff_capacity_seeded(ch, seed)?;
    Ok(BoundReport {
        bound: BoundKind::PositivityThreshold,
        value: 2f64.powf(2.0 - chernoff.value),
        clamped: false,
        params: BoundParams::default(),
        positive_predicted: None,
    })
}

pub fn positivity_threshold(ch: &Channel) -> Result<BoundReport> {
    positivity_threshold_seeded(ch, DEFAULT_OPTIMIZER_SEED)
}

// ---------------------------------------------------------------------------
// Brute-force one-shot capacity for commuting channels
// ---------------------------------------------------------------------------

/// Best achievable error for one message count.
#[derive(Debug, Clone)]
pub struct MessageCountRecord {
    pub m: usize,
    pub best_error: f64,
    /// Codebook achieving it (alphabet indices, nondecreasing).
    pub best_codebook: Vec<usize>,
}

/// Outcome of the exhaustive search.
#[derive(Debug, Clone)]
pub struct BruteForceOutcome {
    /// `C_ε = log₂(largest feasible M)` in bits.
    pub capacity_bits: f64,
    pub best_m: usize,
    pub per_m: Vec<MessageCountRecord>,
    /// Witness code for `best_m`.
    pub witness: Code,
}

/// Exact one-shot ε-capacity of a commuting channel by enumerating codebooks
/// up to permutation of messages and decoding each with the (optimal)
/// maximum-likelihood measurement.
pub fn brute_force_capacity_commuting(
    ch: &Channel,
    epsilon: f64,
    m_max: usize,
) -> Result<BruteForceOutcome> {
    check_epsilon(epsilon)?;
    if m_max < 1 {
        return Err(Error::Domain("M_max must be ≥ 1".into()));
    }
    if !ch.is_commuting(1e-10)? {
        return Err(Error::NonCommuting(ch.max_commutator_norm()?));
    }
    let letters = ch.alphabet_size() as u64;
    let needed = letters
        .checked_pow(m_max as u32)
        .and_then(|v| v.checked_mul(m_max as u64))
        .unwrap_or(u64::MAX);
    if needed > BRUTE_FORCE_GUARD {
        return Err(Error::GuardExceeded {
            needed,
            guard: BRUTE_FORCE_GUARD,
        });
    }

    // joint diagonalization once; every output becomes a probability vector
    let mats: Vec<HermitianMatrix> = ch.outputs().iter().map(|w| w.matrix().clone()).collect();
    let (_, diags) = crate::hermitian::simultaneous_diagonalize(&mats, 1e-8)?;
    let d = ch.dim();

    let mut per_m = Vec::new();
    for m in 1..=m_max {
        // multisets of m letters (codebooks up to message permutation)
        let mut best = (f64::INFINITY, Vec::new());
        let mut stack: Vec<usize> = vec![0; m];
        loop {
            // success = (1/m) Σ_k max over codewords of W(k)
            let mut sum = 0.0;
            for k in 0..d {
                let mk = stack
                    .iter()
                    .map(|&x| diags[x][k])
                    .fold(f64::NEG_INFINITY, f64::max);
                sum += mk.max(0.0);
            }
            let p_e = 1.0 - sum / m as f64;
            if p_e < best.0 {
                best = (p_e, stack.clone());
            }
            // next nondecreasing tuple
            let mut pos = m;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                stack[pos] += 1;
                if stack[pos] < ch.alphabet_size() {
                    for fill in (pos + 1)..m {
                        stack[fill] = stack[pos];
                    }
                    break;
                }
            }
            if pos == 0 && stack[0] >= ch.alphabet_size() {
                break;
            }
        }
        per_m.push(MessageCountRecord {
            m,
            best_error: best.0,
            best_codebook: best.1,
        });
    }

    let best_m = per_m
        .iter()
        .filter(|rec| rec.best_error <= epsilon + 1e-12)
        .map(|rec| rec.m)
        .max()
        .unwrap_or(1);
    let record = &per_m[best_m - 1];
    let states: Vec<_> = record
        .best_codebook
        .iter()
        .map(|&x| ch.output(x).clone())
        .collect();
    let witness = Code::new(
        record.best_codebook.clone(),
        ml_measurement_commuting(&states)?,
    )?;
    Ok(BruteForceOutcome {
        capacity_bits: (best_m as f64).log2(),
        best_m,
        per_m,
        witness,
    })
}
