//! Classical-quantum channels and weighted input ensembles.
//!
//! A channel maps a finite alphabet into density operators on a fixed output
//! space. A finitely supported distribution `p` over the alphabet induces the
//! classical-quantum block states
//!
//! ```text
//! R_p = Σ_x p(x) δ_x ⊗ W_x,      Q_p = (Σ_x p(x) δ_x) ⊗ E_p(W),
//! ```
//!
//! with `E_p(W) = Σ_x p(x) W_x`; `Q_p` is the product of the marginals of
//! `R_p`, so divergences between them measure input/output correlation. The
//! blocks are indexed by alphabet order restricted to the support of `p`
//! (zero-weight letters contribute no block).
//!
//! `Tr R_pᵗ Q_p^{1-t} = Σ_x p(x) Tr W_xᵗ E_p^{1-t}` is evaluated without ever
//! materializing the block matrices ([`WeightedEnsemble::joint_spectrum`]);
//! materialization is available behind a size guard for cross-checks.

use crate::divergences::{psi_from_terms, psi_grid_from_terms, PairSpectrum, PsiFunction};
use crate::hermitian::{DensityOperator, HermitianMatrix};
use crate::{Error, Result};

/// Largest block dimension (`|supp p| · d` or `|X|ⁿ · dⁿ`) this crate will
/// materialize eagerly.
pub const MATERIALIZATION_GUARD: u64 = 4096;

// ---------------------------------------------------------------------------
// Channel
// ---------------------------------------------------------------------------

/// A classical-quantum channel: ordered input labels plus one density
/// operator per label, all of equal output dimension.
#[derive(Debug, Clone)]
pub struct Channel {
    labels: Vec<String>,
    outputs: Vec<DensityOperator>,
}

impl Channel {
    pub fn new(labels: Vec<String>, outputs: Vec<DensityOperator>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidChannel("empty alphabet".into()));
        }
        if labels.len() != outputs.len() {
            return Err(Error::SizeMismatch(labels.len(), outputs.len()));
        }
        let dim = outputs[0].dim();
        for w in &outputs {
            if w.dim() != dim {
                return Err(Error::DimensionMismatch(dim, w.dim()));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.clone()) {
                return Err(Error::InvalidChannel(format!("duplicate label {l:?}")));
            }
        }
        Ok(Self { labels, outputs })
    }

    /// Classical depolarizing channel: `W_k = α δ_k + (1-α) I/d`, diagonal in
    /// the standard basis. `α` strictly inside `(0,1)`; the noiseless channel
    /// has its own constructor.
    pub fn depolarizing(d: usize, alpha: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::Domain(format!("depolarizing needs d ≥ 2, got {d}")));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain(format!(
                "depolarizing parameter α = {alpha} outside (0,1)"
            )));
        }
        let mut outputs = Vec::with_capacity(d);
        for k in 0..d {
            let mut diag = vec![(1.0 - alpha) / d as f64; d];
            diag[k] += alpha;
            outputs.push(DensityOperator::from_probabilities(&diag)?);
        }
        Ok(Self {
            labels: (1..=d).map(|k| k.to_string()).collect(),
            outputs,
        })
    }

    /// Noiseless channel: orthogonal pure outputs `W_k = δ_k`.
    pub fn noiseless(d: usize) -> Result<Self> {
        if d < 1 {
            return Err(Error::Domain("noiseless needs d ≥ 1".into()));
        }
        let mut outputs = Vec::with_capacity(d);
        for k in 0..d {
            let mut diag = vec![0.0; d];
            diag[k] = 1.0;
            outputs.push(DensityOperator::from_probabilities(&diag)?);
        }
        Ok(Self {
            labels: (1..=d).map(|k| k.to_string()).collect(),
            outputs,
        })
    }

    pub fn alphabet_size(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self) -> usize {
        self.outputs[0].dim()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn outputs(&self) -> &[DensityOperator] {
        &self.outputs
    }

    pub fn output(&self, x: usize) -> &DensityOperator {
        &self.outputs[x]
    }

    pub fn label_index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// All outputs pairwise commuting (classical channel)?
    pub fn is_commuting(&self, tol: f64) -> Result<bool> {
        let mats: Vec<HermitianMatrix> = self.outputs.iter().map(|w| w.matrix().clone()).collect();
        crate::hermitian::pairwise_commuting(&mats, tol)
    }

    /// Largest commutator entry over output pairs.
    pub fn max_commutator_norm(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for i in 0..self.outputs.len() {
            for j in (i + 1)..self.outputs.len() {
                worst = worst.max(
                    self.outputs[i]
                        .matrix()
                        .commutator_max_norm(self.outputs[j].matrix())?,
                );
            }
        }
        Ok(worst)
    }

    /// Output for an input word, built on demand as a tensor product.
    pub fn product_output(&self, word: &[usize]) -> Result<DensityOperator> {
        let first = *word.first().ok_or(Error::EmptyInput("empty input word"))?;
        let mut out = self.outputs[first].clone();
        for &x in &word[1..] {
            out = out.kron(&self.outputs[x]);
        }
        Ok(out)
    }

    /// The n-th product extension: alphabet `Xⁿ` (labels joined with `,`,
    /// enumerated lexicographically), outputs `W_{x₁} ⊗ … ⊗ W_{x_n}`.
    pub fn product_extension(&self, n: usize) -> Result<Channel> {
        if n == 0 {
            return Err(Error::Domain("product extension needs n ≥ 1".into()));
        }
        if n == 1 {
            return Ok(self.clone());
        }
        let letters = self.alphabet_size() as u64;
        let needed = letters
            .checked_pow(n as u32)
            .and_then(|a| (self.dim() as u64).checked_pow(n as u32).map(|b| (a, b)))
            .and_then(|(a, b)| a.checked_mul(b))
            .ok_or(Error::GuardExceeded {
                needed: u64::MAX,
                guard: MATERIALIZATION_GUARD,
            })?;
        if needed > MATERIALIZATION_GUARD {
            return Err(Error::GuardExceeded {
                needed,
                guard: MATERIALIZATION_GUARD,
            });
        }
        let mut labels = Vec::new();
        let mut outputs = Vec::new();
        let mut word = vec![0usize; n];
        loop {
            labels.push(
                word.iter()
                    .map(|&x| self.labels[x].as_str())
                    .collect::<Vec<_>>()
                    .join(","),
            );
            outputs.push(self.product_output(&word)?);
            // lexicographic increment
            let mut pos = n;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                word[pos] += 1;
                if word[pos] < self.alphabet_size() {
                    break;
                }
                word[pos] = 0;
            }
            if word.iter().all(|&x| x == 0) {
                break;
            }
        }
        Channel::new(labels, outputs)
    }
}

// ---------------------------------------------------------------------------
// WeightedEnsemble
// ---------------------------------------------------------------------------

/// A channel together with a probability vector over its alphabet.
#[derive(Debug, Clone)]
pub struct WeightedEnsemble<'a> {
    channel: &'a Channel,
    weights: Vec<f64>,
}

impl<'a> WeightedEnsemble<'a> {
    pub fn new(channel: &'a Channel, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != channel.alphabet_size() {
            return Err(Error::SizeMismatch(weights.len(), channel.alphabet_size()));
        }
        if let Some(&w) = weights.iter().find(|&&w| w < 0.0) {
            return Err(Error::Domain(format!("negative weight {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("weights sum to {total}, expected 1")));
        }
        Ok(Self { channel, weights })
    }

    pub fn uniform(channel: &'a Channel) -> Self {
        let n = channel.alphabet_size();
        Self {
            channel,
            weights: vec![1.0 / n as f64; n],
        }
    }

    /// Point mass on one letter.
    pub fn point_mass(channel: &'a Channel, x: usize) -> Self {
        let mut weights = vec![0.0; channel.alphabet_size()];
        weights[x] = 1.0;
        Self { channel, weights }
    }

    pub fn channel(&self) -> &Channel {
        self.channel
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Indices with strictly positive weight, in alphabet order.
    pub fn support(&self) -> Vec<usize> {
        (0..self.weights.len())
            .filter(|&x| self.weights[x] > 0.0)
            .collect()
    }

    /// `E_p(W) = Σ_x p(x) W_x` — exact convex combination, no renormalization.
    pub fn average(&self) -> DensityOperator {
        let d = self.channel.dim();
        let mut acc = HermitianMatrix::zeros(d);
        for (x, &w) in self.weights.iter().enumerate() {
            if w > 0.0 {
                acc = acc
                    .add(&self.channel.output(x).matrix().scale(w))
                    .expect("equal dims");
            }
        }
        DensityOperator::new(acc).expect("convex combination of states is a state")
    }

    /// Materialized block states `(R_p, Q_p)` over the support of `p`.
    pub fn joint_and_product_states(&self) -> Result<(DensityOperator, DensityOperator)> {
        let support = self.support();
        let d = self.channel.dim();
        let dim = support.len() * d;
        if (dim as u64) > MATERIALIZATION_GUARD {
            return Err(Error::GuardExceeded {
                needed: dim as u64,
                guard: MATERIALIZATION_GUARD,
            });
        }
        let avg = self.average();
        let mut r = vec![num_complex::Complex64::new(0.0, 0.0); dim * dim];
        let mut q = r.clone();
        for (block, &x) in support.iter().enumerate() {
            let w = self.weights[x];
            let wx = self.channel.output(x).matrix();
            for i in 0..d {
                for j in 0..d {
                    r[(block * d + i) * dim + (block * d + j)] = wx.get(i, j) * w;
                    q[(block * d + i) * dim + (block * d + j)] = avg.matrix().get(i, j) * w;
                }
            }
        }
        let rp = DensityOperator::new(HermitianMatrix::from_entries(dim, r)?)?;
        let qp = DensityOperator::new(HermitianMatrix::from_entries(dim, q)?)?;
        Ok((rp, qp))
    }

    /// Block-structured spectral data for `(R_p, Q_p)` that never
    /// materializes the blocks.
    pub fn joint_spectrum(&self) -> Result<JointSpectrum> {
        let avg = self.average();
        let mut terms = Vec::new();
        let mut s1 = 0.0;
        for &x in &self.support() {
            let w = self.weights[x];
            let pair = PairSpectrum::new(self.channel.output(x), &avg)?;
            let shift = w.ln();
            terms.extend(pair.terms().iter().map(|&(a, b)| (a, b + shift)));
            s1 += w * pair.relative_entropy_bits();
        }
        Ok(JointSpectrum { terms, s1 })
    }
}

/// `ψ(R_p, Q_p | t)` evaluated blockwise:
/// `log₂ Σ_x p(x) Tr W_xᵗ E_p^{1-t}`.
#[derive(Debug, Clone)]
pub struct JointSpectrum {
    terms: Vec<(f64, f64)>,
    s1: f64,
}

impl JointSpectrum {
    /// `S(R_p‖Q_p) = Σ_x p(x) S(W_x‖E_p)` (the relative-entropy identity).
    pub fn relative_entropy_bits(&self) -> f64 {
        self.s1
    }
}

impl PsiFunction for JointSpectrum {
    fn psi(&self, t: f64) -> f64 {
        psi_from_terms(&self.terms, t)
    }

    fn psi_grid(&self, t0: f64, dt: f64, n: usize) -> Vec<f64> {
        psi_grid_from_terms(&self.terms, t0, dt, n)
    }
}

/// `ψ(R_p,Q_p|t)` without materializing the blocks.
pub fn psi_joint(ensemble: &WeightedEnsemble, t: f64) -> Result<f64> {
    Ok(ensemble.joint_spectrum()?.psi(t))
}

// ---------------------------------------------------------------------------
// Depolarizing closed forms
// ---------------------------------------------------------------------------

/// Closed-form quantities for the classical depolarizing channel `W^{d,α}`.
#[derive(Debug, Clone, Copy)]
pub struct DepolarizingClosedForms {
    /// Holevo capacity `χ*` in bits.
    pub chi_star: f64,
    /// Max-relative-entropy radius of the channel image, in bits.
    pub r_max: f64,
    /// `R_max − χ*` (strictly positive for every `d ≥ 2`, `α ∈ (0,1)`).
    pub gap: f64,
    d: usize,
    alpha: f64,
}

impl DepolarizingClosedForms {
    /// Upper bound on the success probability of any M-code:
    /// `(1-α)/M + α`.
    pub fn success_bound(&self, m: usize) -> f64 {
        (1.0 - self.alpha) / m as f64 + self.alpha
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Closed forms for `W^{d,α}`:
/// `χ* = ((1+(d-1)α)/d)·log₂(1+(d-1)α) + ((d-1)/d)(1-α)·log₂(1-α)`,
/// `R_max = log₂(1+(d-1)α)`, and their gap.
pub fn depolarizing_closed_forms(d: usize, alpha: f64) -> Result<DepolarizingClosedForms> {
    if d < 2 || !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!(
            "depolarizing closed forms need d ≥ 2 and α ∈ (0,1), got d={d}, α={alpha}"
        )));
    }
    let df = d as f64;
    let top = 1.0 + (df - 1.0) * alpha;
    let chi_star = top / df * top.log2() + (df - 1.0) / df * (1.0 - alpha) * (1.0 - alpha).log2();
    let r_max = top.log2();
    let gap = (df - 1.0) * (1.0 - alpha) / df * ((1.0 - alpha + df * alpha) / (1.0 - alpha)).log2();
    Ok(DepolarizingClosedForms {
        chi_star,
        r_max,
        gap,
        d,
        alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divergences::{
        hoeffding_direct_of, max_relative_entropy, psi, relative_entropy,
    };

    const CHI_2_05: f64 = 0.18872187554086717;

    #[test]
    fn channel_validation() {
        assert!(Channel::depolarizing(2, 0.0).is_err());
        assert!(Channel::depolarizing(2, 1.0).is_err());
        assert!(Channel::depolarizing(1, 0.5).is_err());
        let ch = Channel::depolarizing(2, 0.5).unwrap();
        assert_eq!(ch.alphabet_size(), 2);
        let w1 = ch.output(0);
        assert!((w1.matrix().get(0, 0).re - 0.75).abs() < 1e-15);
        assert!((w1.matrix().get(1, 1).re - 0.25).abs() < 1e-15);
        assert!(ch.label_index("2").unwrap() == 1);
        assert!(ch.label_index("3").is_err());
    }

    #[test]
    fn depolarizing_outputs_are_permutations_of_each_other() {
        let ch = Channel::depolarizing(4, 0.3).unwrap();
        let reference = ch.output(0).eigenvalues().to_vec();
        for x in 1..4 {
            let mut eigs = ch.output(x).eigenvalues().to_vec();
            eigs.sort_by(|a, b| b.partial_cmp(a).unwrap());
            for (a, b) in eigs.iter().zip(&reference) {
                assert!((a - b).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn ensemble_average_examples() {
        let ch = Channel::depolarizing(2, 0.5).unwrap();
        let avg = WeightedEnsemble::uniform(&ch).average();
        assert!((avg.matrix().get(0, 0).re - 0.5).abs() < 1e-15);
        assert!(avg.matrix().get(0, 1).norm() < 1e-15);

        let point = WeightedEnsemble::point_mass(&ch, 0).average();
        assert!(
            point
                .matrix()
                .sub(ch.output(0).matrix())
                .unwrap()
                .max_abs_entry()
                < 1e-15
        );

        let nl = Channel::noiseless(2).unwrap();
        let e = WeightedEnsemble::new(&nl, vec![0.3, 0.7]).unwrap().average();
        assert!((e.matrix().get(0, 0).re - 0.3).abs() < 1e-15);
        assert!((e.matrix().get(1, 1).re - 0.7).abs() < 1e-15);
    }

    #[test]
    fn ensemble_weight_validation() {
        let ch = Channel::noiseless(2).unwrap();
        assert!(WeightedEnsemble::new(&ch, vec![0.5, 0.6]).is_err());
        assert!(WeightedEnsemble::new(&ch, vec![-0.1, 1.1]).is_err());
        assert!(WeightedEnsemble::new(&ch, vec![0.5]).is_err());
    }

    #[test]
    fn joint_and_product_states_examples() {
        let nl = Channel::noiseless(2).unwrap();
        let e = WeightedEnsemble::uniform(&nl);
        let (r, q) = e.joint_and_product_states().unwrap();
        for (i, want) in [0.5, 0.0, 0.0, 0.5].iter().enumerate() {
            assert!((r.matrix().get(i, i).re - want).abs() < 1e-15);
        }
        for i in 0..4 {
            assert!((q.matrix().get(i, i).re - 0.25).abs() < 1e-15);
        }

        let point = WeightedEnsemble::point_mass(&nl, 0);
        let (rp, qp) = point.joint_and_product_states().unwrap();
        assert!(relative_entropy(&rp, &qp).unwrap().value.abs() < 1e-12);

        let ch = Channel::depolarizing(2, 0.5).unwrap();
        let (r, q) = WeightedEnsemble::uniform(&ch)
            .joint_and_product_states()
            .unwrap();
        assert!((relative_entropy(&r, &q).unwrap().value - CHI_2_05).abs() < 1e-7);
    }

    #[test]
    fn psi_joint_examples() {
        let nl = Channel::noiseless(2).unwrap();
        let e = WeightedEnsemble::uniform(&nl);
        for t in [0.0, 0.3, 0.8, 1.0] {
            assert!((psi_joint(&e, t).unwrap() - (t - 1.0)).abs() < 1e-12);
        }

        let point = WeightedEnsemble::point_mass(&nl, 1);
        for t in [0.0, 0.5, 1.0] {
            assert!(psi_joint(&point, t).unwrap().abs() < 1e-12);
        }

        let ch = Channel::depolarizing(2, 0.5).unwrap();
        let e = WeightedEnsemble::uniform(&ch);
        let (r, q) = e.joint_and_product_states().unwrap();
        for t in [0.1, 0.5, 0.9] {
            let blockwise = psi_joint(&e, t).unwrap();
            let materialized = psi(&r, &q, t).unwrap();
            assert!((blockwise - materialized).abs() < 1e-10);
        }
    }

    #[test]
    fn joint_relative_entropy_identity() {
        let ch = Channel::depolarizing(3, 0.4).unwrap();
        let e = WeightedEnsemble::new(&ch, vec![0.5, 0.2, 0.3]).unwrap();
        let avg = e.average();
        let sum: f64 = e
            .support()
            .iter()
            .map(|&x| e.weights()[x] * relative_entropy(ch.output(x), &avg).unwrap().value)
            .sum();
        let (r, q) = e.joint_and_product_states().unwrap();
        let joint = relative_entropy(&r, &q).unwrap().value;
        assert!((joint - sum).abs() < 1e-9);
        assert!((e.joint_spectrum().unwrap().relative_entropy_bits() - sum).abs() < 1e-12);
    }

    #[test]
    fn joint_max_relative_entropy_identity() {
        let ch = Channel::depolarizing(3, 0.4).unwrap();
        let e = WeightedEnsemble::new(&ch, vec![0.5, 0.2, 0.3]).unwrap();
        let avg = e.average();
        let expected = e
            .support()
            .iter()
            .map(|&x| max_relative_entropy(ch.output(x), &avg).unwrap().value)
            .fold(f64::NEG_INFINITY, f64::max);
        let (r, q) = e.joint_and_product_states().unwrap();
        let joint = max_relative_entropy(&r, &q).unwrap().value;
        assert!((joint - expected).abs() < 1e-9);
    }

    #[test]
    fn product_extension_examples() {
        let ch = Channel::depolarizing(2, 0.5).unwrap();
        let p1 = ch.product_extension(1).unwrap();
        assert_eq!(p1.alphabet_size(), 2);

        let nl = Channel::noiseless(2).unwrap();
        let p2 = nl.product_extension(2).unwrap();
        assert_eq!(p2.alphabet_size(), 4);
        assert_eq!(p2.dim(), 4);
        for x in 0..4 {
            assert_eq!(p2.output(x).support_rank(), 1);
            for y in (x + 1)..4 {
                let overlap = p2
                    .output(x)
                    .matrix()
                    .trace_product(p2.output(y).matrix())
                    .unwrap();
                assert!(overlap.abs() < 1e-14, "outputs {x},{y} not orthogonal");
            }
        }
        assert_eq!(p2.labels()[1], "1,2");

        // guard
        assert!(nl.product_extension(7).is_err());
    }

    #[test]
    fn additivity_under_products() {
        let ch = Channel::depolarizing(2, 0.5).unwrap();
        let e1 = WeightedEnsemble::uniform(&ch);
        let ch2 = ch.product_extension(2).unwrap();
        let e2 = WeightedEnsemble::uniform(&ch2); // p⊗p for uniform p

        let t = 0.3;
        assert!((psi_joint(&e2, t).unwrap() - 2.0 * psi_joint(&e1, t).unwrap()).abs() < 1e-10);

        // H(R_{p⊗2}‖Q_{p⊗2}|r) = 2·H(R_p‖Q_p|r/2)
        let r = 0.12;
        let j1 = e1.joint_spectrum().unwrap();
        let j2 = e2.joint_spectrum().unwrap();
        let h2 = hoeffding_direct_of(&j2, r, Some(j2.relative_entropy_bits())).unwrap();
        let h1 = hoeffding_direct_of(&j1, r / 2.0, Some(j1.relative_entropy_bits())).unwrap();
        assert!((h2 - 2.0 * h1).abs() < 1e-8, "{h2} vs {}", 2.0 * h1);

        // S_max doubles exactly
        let (r1, q1) = e1.joint_and_product_states().unwrap();
        let (r2, q2) = e2.joint_and_product_states().unwrap();
        let m1 = max_relative_entropy(&r1, &q1).unwrap().value;
        let m2 = max_relative_entropy(&r2, &q2).unwrap().value;
        assert!((m2 - 2.0 * m1).abs() < 1e-9);
    }

    #[test]
    fn closed_forms_match_frozen_values() {
        let f = depolarizing_closed_forms(2, 0.5).unwrap();
        assert!((f.chi_star - CHI_2_05).abs() < 1e-12);
        assert!((f.r_max - 1.5f64.log2()).abs() < 1e-15);
        assert!((f.gap - 0.396240625180289).abs() < 1e-12);
        assert!((f.chi_star + f.gap - f.r_max).abs() < 1e-12);
        assert!((f.success_bound(2) - 0.75).abs() < 1e-15);

        let f4 = depolarizing_closed_forms(4, 0.5).unwrap();
        assert!((f4.chi_star - 0.45120505930460153).abs() < 1e-12);

        for d in [2usize, 3, 5, 8] {
            for alpha in [0.1, 0.35, 0.6, 0.9] {
                let f = depolarizing_closed_forms(d, alpha).unwrap();
                assert!(f.gap > 0.0, "gap must be strictly positive");
            }
        }
    }
}
