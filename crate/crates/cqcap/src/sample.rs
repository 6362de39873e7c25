//! Seeded generators for random operators.
//!
//! Used by simulations and by the test suites; everything is a pure function
//! of the generator state, so fixed seeds give fixed fixtures.

use num_complex::Complex64;

use crate::hermitian::{spectral_decompose, DensityOperator, HermitianMatrix};
use crate::rng::SplitMix64;

/// Hermitian matrix with Gaussian entries, ‖·‖ of order 1.
pub fn random_hermitian(dim: usize, rng: &mut SplitMix64) -> HermitianMatrix {
    let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            data[i * dim + j] = Complex64::new(rng.next_gaussian(), rng.next_gaussian());
        }
    }
    HermitianMatrix::from_entries(dim, data).expect("square by construction")
}

/// Ginibre-induced random density operator of the given rank
/// (`rank == dim` gives a full-rank state almost surely).
pub fn random_density(dim: usize, rank: usize, rng: &mut SplitMix64) -> DensityOperator {
    let rank = rank.max(1).min(dim);
    let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
    // G G† with G a dim×rank Ginibre matrix
    let mut g = vec![Complex64::new(0.0, 0.0); dim * rank];
    for entry in g.iter_mut() {
        *entry = Complex64::new(rng.next_gaussian(), rng.next_gaussian());
    }
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..rank {
                acc += g[i * rank + k] * g[j * rank + k].conj();
            }
            data[i * dim + j] = acc;
        }
    }
    let m = HermitianMatrix::from_entries(dim, data).expect("square by construction");
    DensityOperator::new_renormalized(m).expect("Gram matrix is PSD with positive trace")
}

/// Random PSD matrix with trace of order `scale`.
pub fn random_psd(dim: usize, scale: f64, rng: &mut SplitMix64) -> HermitianMatrix {
    let rho = random_density(dim, dim, rng);
    rho.matrix().scale(scale)
}

/// Random operator with `0 ⪯ A ⪯ I`: squash a Hermitian spectrum through a
/// logistic map.
pub fn random_contraction(dim: usize, rng: &mut SplitMix64) -> HermitianMatrix {
    let h = random_hermitian(dim, rng);
    let spec = spectral_decompose(&h).expect("hermitian");
    spec.apply(|x| 1.0 / (1.0 + (-x).exp()))
}

/// Random probability vector (flat Dirichlet via normalized exponentials).
pub fn random_simplex(n: usize, rng: &mut SplitMix64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n)
        .map(|_| {
            let u: f64 = loop {
                let u = rng.next_f64();
                if u > 0.0 {
                    break u;
                }
            };
            -u.ln()
        })
        .collect();
    let s: f64 = v.iter().sum();
    for x in v.iter_mut() {
        *x /= s;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::min_eigenvalue;

    #[test]
    fn densities_are_valid() {
        let mut rng = SplitMix64::new(3);
        for dim in [2, 3, 4] {
            let rho = random_density(dim, dim, &mut rng);
            assert!((rho.matrix().trace() - 1.0).abs() < 1e-12);
            assert_eq!(rho.support_rank(), dim);
            let low = random_density(dim, 1, &mut rng);
            assert_eq!(low.support_rank(), 1);
        }
    }

    #[test]
    fn contractions_are_between_zero_and_one() {
        let mut rng = SplitMix64::new(4);
        for _ in 0..10 {
            let a = random_contraction(3, &mut rng);
            assert!(min_eigenvalue(&a).unwrap() >= 0.0);
            let gap = HermitianMatrix::identity(3).sub(&a).unwrap();
            assert!(min_eigenvalue(&gap).unwrap() >= 0.0);
        }
    }

    #[test]
    fn simplex_sums_to_one() {
        let mut rng = SplitMix64::new(5);
        let p = random_simplex(6, &mut rng);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(p.iter().all(|&x| x > 0.0));
    }
}
