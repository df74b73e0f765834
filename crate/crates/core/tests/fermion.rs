mod common;

use std::f64::consts::{LN_2, PI};

use common::*;
use maxent_core::fermion::{
    fit_couplings, gaussian_entropy, ground_correlations, reconstructed_correlations, CorrelationMatrix,
    FermionRing, GaussianCouplings,
};
use maxent_core::solver::SolverOptions;
use maxent_core::{CMatrix, Complex, Error};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ring_hopping(len: usize, w: f64) -> DMatrix<f64> {
    let mut h = DMatrix::zeros(len, len);
    for x in 0..len {
        let y = (x + 1) % len;
        h[(x, y)] -= w;
        h[(y, x)] -= w;
    }
    h
}

/// `exp(−Σ h_xy c†_x c_y) / Z` in Fock space.
fn fock_gaussian(fock: &Fock, h: &DMatrix<f64>) -> CMatrix {
    let k = fock.quadratic(h) * c(-1.0, 0.0);
    let e = expm_taylor(&k);
    let z = e.trace();
    e / z
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-scale..scale));
    (&a + a.transpose()) * 0.5
}

#[test]
fn ground_correlations_match_the_fock_ground_band() {
    let fock = Fock::new(4);
    let h = fock.quadratic(&ring_hopping(4, 1.0));
    let eig = h.clone().symmetric_eigen();
    let e0 = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    let band: Vec<usize> = (0..16).filter(|&i| eig.eigenvalues[i] < e0 + 1e-9).collect();
    // Two zero modes free: every subset of them costs nothing.
    assert_eq!(band.len(), 4);
    let mut p = CMatrix::zeros(16, 16);
    for &i in &band {
        let v = eig.eigenvectors.column(i);
        p += v * v.adjoint();
    }
    let expected = fock.correlations(&(p / c(4.0, 0.0)));
    let g = ground_correlations(&FermionRing::new(4, 1.0).unwrap());
    assert!((g.matrix() - &expected).abs().max() < 1e-12, "{} vs {expected}", g.matrix());
}

#[test]
fn half_filling_and_continuum_limit() {
    for len in [6, 8, 13, 32] {
        let g = ground_correlations(&FermionRing::new(len, 0.7).unwrap());
        if len % 2 == 0 {
            assert!((g.entry(0, 0) - 0.5).abs() < 1e-14, "L={len}");
        }
        assert!(g.is_circulant(1e-13));
        // Discrete sum over the filled modes, cos(k) for |k| < π/2.
        let oracle: f64 = (0..len)
            .map(|n| {
                let k = 2.0 * PI * n as f64 / len as f64;
                let e = -k.cos();
                let f = if e.abs() < 1e-12 { 0.5 } else if e < 0.0 { 1.0 } else { 0.0 };
                f * k.cos() / len as f64
            })
            .sum();
        assert!((g.entry(0, 1) - oracle).abs() < 1e-13, "L={len}");
    }
    let far = ground_correlations(&FermionRing::new(402, 1.0).unwrap());
    assert!((far.entry(0, 1) - 1.0 / PI).abs() < 1e-4);
}

#[test]
fn reconstructed_correlations_match_a_complex_mode_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let len = 8;
    let lambdas: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.5..1.5)).collect();
    let g = reconstructed_correlations(&GaussianCouplings::new(lambdas.clone()).unwrap(), len).unwrap();
    for x in 0..len {
        for y in 0..len {
            let mut sum = Complex::new(0.0, 0.0);
            for n in 0..len {
                let k = 2.0 * PI * n as f64 / len as f64;
                let e: f64 = lambdas.iter().enumerate().map(|(d, l)| 2.0 * l * (d as f64 * k).cos()).sum();
                let phase = Complex::new(0.0, k * (x as f64 - y as f64)).exp();
                sum += phase / (e.exp() + 1.0);
            }
            sum /= len as f64;
            assert!(sum.im.abs() < 1e-13);
            assert!((g.entry(x, y) - sum.re).abs() < 1e-13, "({x},{y})");
        }
    }
}

#[test]
fn trivial_couplings() {
    let half = reconstructed_correlations(&GaussianCouplings::new(vec![0.0, 0.0]).unwrap(), 6).unwrap();
    assert!((half.matrix() - DMatrix::identity(6, 6) * 0.5).abs().max() < 1e-15);
    assert!((gaussian_entropy(&half).unwrap() - 6.0 * LN_2).abs() < 1e-12);

    let t = 0.8;
    let g = reconstructed_correlations(&GaussianCouplings::new(vec![t]).unwrap(), 5).unwrap();
    let n = 1.0 / ((2.0 * t).exp() + 1.0);
    assert!((g.matrix() - DMatrix::identity(5, 5) * n).abs().max() < 1e-15);
}

#[test]
fn gaussian_entropy_matches_fock_von_neumann() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let fock = Fock::new(4);
    for _ in 0..5 {
        let h = random_symmetric(&mut rng, 4, 1.5);
        let rho = fock_gaussian(&fock, &h);
        let g = CorrelationMatrix::new(fock.correlations(&rho)).unwrap();
        let s = gaussian_entropy(&g).unwrap();
        let oracle = entropy_oracle(&rho);
        assert!((s - oracle).abs() < 1e-9, "{s} vs {oracle}");
    }
}

#[test]
fn pure_fermi_sea_has_zero_entropy() {
    let g = ground_correlations(&FermionRing::new(30, 1.0).unwrap());
    assert!(gaussian_entropy(&g).unwrap().abs() < 1e-9);
    // L = 32 has two half-filled zero modes.
    let g = ground_correlations(&FermionRing::new(32, 1.0).unwrap());
    assert!((gaussian_entropy(&g).unwrap() - 2.0 * LN_2).abs() < 1e-9);
}

#[test]
fn out_of_range_occupation_is_rejected() {
    let g = CorrelationMatrix::new(DMatrix::from_diagonal_element(3, 3, 1.1)).unwrap();
    assert!(matches!(gaussian_entropy(&g), Err(Error::InvalidCorrelation(_))));
}

#[test]
fn fit_inverts_the_fermi_function() {
    let target = 1.0 / (2f64.exp() + 1.0);
    let fit = fit_couplings(&[(0, target)], 10, &SolverOptions::default()).unwrap();
    assert!(fit.converged);
    assert!((fit.couplings.lambdas[0] - 1.0).abs() < 1e-8, "{:?}", fit.couplings);
}

#[test]
fn half_filling_fits_have_zero_chemical_potential() {
    for len in [30, 32] {
        let g = ground_correlations(&FermionRing::new(len, 1.0).unwrap());
        for r in 0..=2 {
            let fit = fit_couplings(&g.window(r).unwrap(), len, &SolverOptions::default()).unwrap();
            assert!(fit.converged, "L={len} R={r}: {} {:?} {:?}", fit.residual, fit.stop_reason, fit.couplings);
            assert!(fit.couplings.lambdas[0].abs() < 1e-8, "L={len} R={r}: {:?}", fit.couplings);
        }
    }
}

#[test]
fn nearest_neighbour_window_drives_toward_the_fermi_sea() {
    let len = 30;
    let g = ground_correlations(&FermionRing::new(len, 1.0).unwrap());
    let opts = SolverOptions::default();
    let entropies: Vec<f64> = (0..=2)
        .map(|r| fit_couplings(&g.window(r).unwrap(), len, &opts).unwrap().entropy(len))
        .collect();
    assert!((entropies[0] - len as f64 * LN_2).abs() < 1e-9);
    assert!(entropies.windows(2).all(|w| w[1] <= w[0] + 1e-6), "{entropies:?}");
    assert!(entropies[1] < 1e-4 && entropies[2] < 1e-4, "{entropies:?}");

    let fit = fit_couplings(&g.window(1).unwrap(), len, &opts).unwrap();
    assert!(fit.couplings.lambdas[1] < -5.0, "{:?}", fit.couplings);
    assert!(fit.residual <= opts.tolerance_eps);
}

#[test]
fn window_mismatch_shrinks_as_the_hopping_coupling_grows() {
    // With λ_0 = 0, the R = 1 window of the Fermi sea is approached only as
    // λ_1 → −∞.
    let len = 30;
    let g = ground_correlations(&FermionRing::new(len, 1.0).unwrap());
    let mismatch: Vec<f64> = (0..=12)
        .map(|i| {
            let l1 = -0.5 * f64::powi(1.6, i);
            let gt = reconstructed_correlations(&GaussianCouplings::new(vec![0.0, l1]).unwrap(), len).unwrap();
            (0..=1).map(|d| (gt.entry(0, d) - g.entry(0, d)).abs()).fold(0.0, f64::max)
        })
        .collect();
    assert!(mismatch.windows(2).all(|w| w[1] < w[0]), "{mismatch:?}");
    assert!(mismatch[12] < 1e-8);
}

#[test]
fn fit_reproduces_a_reachable_window() {
    let len = 12;
    let truth = GaussianCouplings::new(vec![0.3, -0.8, 0.25]).unwrap();
    let g = reconstructed_correlations(&truth, len).unwrap();
    let opts = SolverOptions::default().with_tolerance(1e-12);
    let fit = fit_couplings(&g.window(2).unwrap(), len, &opts).unwrap();
    assert!(fit.converged);
    for (a, b) in fit.couplings.lambdas.iter().zip(&truth.lambdas) {
        assert!((a - b).abs() < 1e-8, "{:?}", fit.couplings);
    }
    let direct = gaussian_entropy(&g).unwrap();
    assert!((fit.entropy(len) - direct).abs() < 1e-9);
}

#[test]
fn malformed_windows_are_rejected() {
    let opts = SolverOptions::default();
    assert!(fit_couplings(&[], 8, &opts).is_err());
    assert!(fit_couplings(&[(1, 0.3)], 8, &opts).is_err());
    assert!(fit_couplings(&[(0, 0.5), (1, 0.3), (2, 0.0), (3, 0.0), (4, 0.0), (5, 0.0)], 8, &opts).is_err());
    assert!(FermionRing::new(6, 0.0).is_err());
    assert!(FermionRing::new(1, 1.0).is_err());
}
