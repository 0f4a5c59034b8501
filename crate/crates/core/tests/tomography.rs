use std::f64::consts::PI;

use catconv::converter::{LogicalBasis, ProtocolParams};
use catconv::fock::{loss_channel, uhlmann_fidelity, DensityMatrix, ModeLayout};
use catconv::sources::HybridSpec;
use catconv::tomography::{
    average_fidelity_from_process, average_pure_state_fidelity, maxlik_reconstruct, pauli_effects,
    pipeline_frequency_table, process_fidelity, process_reconstruct, sample_quadratures, standard_inputs,
    FrequencyTable, InputSet, MaxLikOptions, ProcessMatrix, ReconstructOptions,
};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type CMat = DMatrix<C64>;

fn completeness_max(chi: &CMat) -> f64 {
    let p = catconv::tomography::pauli_basis();
    let mut m = CMat::zeros(2, 2);
    for n in 0..4 {
        for k in 0..4 {
            m += (p[k].adjoint() * &p[n]) * chi[(n, k)];
        }
    }
    m.symmetric_eigenvalues().iter().cloned().fold(f64::MIN, f64::max)
}

/// Random CP trace-non-increasing χ: Wishart-like PSD matrix rescaled so the
/// completeness operator tops out at a random value in [0.5, 1].
fn random_chi(rng: &mut ChaCha8Rng) -> ProcessMatrix {
    let rank = rng.random_range(1..=4);
    let g = CMat::from_fn(4, rank, |_, _| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
    let chi = &g * g.adjoint();
    let top = completeness_max(&chi);
    let target = 0.5 + 0.5 * rng.random::<f64>();
    ProcessMatrix::new(chi.scale(target / top)).unwrap()
}

#[test]
fn round_trip_on_random_channels() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for k in 0..50 {
        let truth = random_chi(&mut rng);
        let table = FrequencyTable::exact(&truth, standard_inputs(InputSet::Four), pauli_effects()).unwrap();
        let got = process_reconstruct(&table, &ReconstructOptions::default()).unwrap();
        let err = (got.chi() - truth.chi()).norm();
        assert!(err < 1e-4, "channel {k}: Frobenius error {err}");
    }
}

#[test]
fn reconstruction_beats_feasible_comparison_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let truth = random_chi(&mut rng);
    let mut table = FrequencyTable::exact(&truth, standard_inputs(InputSet::Six), pauli_effects()).unwrap();
    // Perturb the data so the optimum is not an exact fit.
    let noisy: Vec<Vec<f64>> = table
        .values()
        .iter()
        .map(|row| row.iter().map(|v| (v + 0.02 * (rng.random::<f64>() - 0.5)).clamp(0.0, 1.0)).collect())
        .collect();
    table = FrequencyTable::new(table.inputs().to_vec(), table.effects().to_vec(), noisy).unwrap();
    let objective = |chi: &ProcessMatrix| -> f64 {
        let model = FrequencyTable::exact(chi, table.inputs().to_vec(), table.effects().to_vec()).unwrap();
        model
            .values()
            .iter()
            .flatten()
            .zip(table.values().iter().flatten())
            .map(|(a, b)| (a - b).powi(2))
            .sum()
    };
    let best = process_reconstruct(&table, &ReconstructOptions::default()).unwrap();
    let f_best = objective(&best);
    for cand in [truth.clone(), ProcessMatrix::identity(), ProcessMatrix::depolarizing()] {
        assert!(f_best <= objective(&cand) + 1e-9);
    }
    for _ in 0..20 {
        assert!(f_best <= objective(&random_chi(&mut rng)) + 1e-9);
    }
}

#[test]
fn experimental_relations() {
    let chi = ProcessMatrix::experiment();
    assert!((process_fidelity(&chi) - 0.578).abs() < 1e-12);
    assert!((average_fidelity_from_process(process_fidelity(&chi)) - 0.719).abs() < 1e-3);
    assert!((average_pure_state_fidelity(&chi) - 0.687).abs() < 5e-4);
    assert!(average_pure_state_fidelity(&chi) > 2.0 / 3.0);
}

#[test]
fn pipeline_process_regression() {
    let target = LogicalBasis::Cat { alpha: 0.9 };
    let p = ProtocolParams::table_s1();
    let table = pipeline_frequency_table(&p, &HybridSpec::default(), InputSet::Four, target).unwrap();
    let chi = process_reconstruct(&table, &ReconstructOptions::default()).unwrap();
    let f = process_fidelity(&chi);
    assert!((f - 0.42777).abs() < 1e-4, "{f}");
    let six = pipeline_frequency_table(&p, &HybridSpec::default(), InputSet::Six, target).unwrap();
    let chi6 = process_reconstruct(&six, &ReconstructOptions::default()).unwrap();
    assert!((process_fidelity(&chi6) - f).abs() < 1e-6);

    let ideal = pipeline_frequency_table(&ProtocolParams::ideal(), &HybridSpec::default(), InputSet::Four, target).unwrap();
    let chi = process_reconstruct(&ideal, &ReconstructOptions::default()).unwrap();
    assert!(process_fidelity(&chi) > 0.99);
}

fn qubit_state(p1: f64, coh: C64, dim: usize) -> DensityMatrix {
    let mut m = CMat::zeros(dim, dim);
    m[(0, 0)] = C64::new(1.0 - p1, 0.0);
    m[(1, 1)] = C64::new(p1, 0.0);
    m[(0, 1)] = coh;
    m[(1, 0)] = coh.conj();
    DensityMatrix::new(ModeLayout::single("C", dim).unwrap(), m, true).unwrap()
}

fn phases(n: usize) -> Vec<f64> {
    (0..n).map(|k| PI * k as f64 / n as f64).collect()
}

#[test]
fn maxlik_vacuum() {
    let vac = DensityMatrix::vacuum("C", 6).unwrap();
    let samples = sample_quadratures(&vac, &phases(6), 50_000 / 6, 1).unwrap();
    let res = maxlik_reconstruct(&samples, 6, 1.0, &MaxLikOptions::default()).unwrap();
    assert!(uhlmann_fidelity(&res.state, &vac).unwrap() >= 0.995);
}

#[test]
fn maxlik_loss_corrected_mixture() {
    let dim = 6;
    let truth = qubit_state(0.712, C64::new(0.0, 0.0), dim);
    let lossy = loss_channel(&truth, "C", 0.82).unwrap();
    let samples = sample_quadratures(&lossy, &phases(12), 50_000 / 12, 2).unwrap();
    let res = maxlik_reconstruct(&samples, dim, 0.82, &MaxLikOptions::default()).unwrap();
    let d = res.state.photon_distribution();
    assert!((d[0] - 0.288).abs() < 0.02 && (d[1] - 0.712).abs() < 0.02, "{d:?}");
    for w in res.log_likelihood.windows(2) {
        assert!(w[1] >= w[0] - 1e-9 * w[0].abs());
    }
}

#[test]
fn maxlik_balanced_qubit_phase() {
    let dim = 5;
    let phase = 0.9;
    let truth = qubit_state(0.5, C64::from_polar(0.45, -phase), dim);
    let samples = sample_quadratures(&truth, &phases(12), 2000, 3).unwrap();
    let res = maxlik_reconstruct(&samples, dim, 1.0, &MaxLikOptions::default()).unwrap();
    let got = res.state.element(0, 1);
    let diff = (got.arg() - (-phase)).abs();
    assert!(diff < 0.05, "{got}");
}

#[test]
fn maxlik_ignores_sample_order() {
    let truth = qubit_state(0.6, C64::new(0.2, 0.1), 4);
    let mut samples = sample_quadratures(&truth, &phases(4), 500, 4).unwrap();
    let opts = MaxLikOptions { max_iterations: 200, ..MaxLikOptions::default() };
    let a = maxlik_reconstruct(&samples, 4, 1.0, &opts).unwrap();
    samples.reverse();
    samples.swap(3, 700);
    let b = maxlik_reconstruct(&samples, 4, 1.0, &opts).unwrap();
    assert_eq!(a.state.data(), b.state.data());
}
