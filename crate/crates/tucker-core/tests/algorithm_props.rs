//! Behavioral properties of the decomposition drivers: monotone descent,
//! Grassmann invariance of traces, gradient-norm decay, inner-loop
//! convergence, baseline orderings and error-identity checks.

mod common;

use common::{gaussian_tensor, jacobi_eig, random_orthogonal};
use tucker_core::linalg::dominant_subspace;
use tucker_core::manifold::{random_stiefel, StiefelPoint};
use tucker_core::synth::{gen_noisy, SynthKind, SynthSpec};
use tucker_core::{
    core_of, decompose_from, euclid_cd, hooi, hosvd, reconstruct, rel_error_exact, rpcd, rpcd_plus,
    DecomposeConfig, DenseTensor, Init, Matrix, Method, TuckerModel,
};

fn lowrank(dims: &[usize], ranks: &[usize], seed: u64) -> DenseTensor {
    let spec = SynthSpec::new(dims.to_vec(), ranks.to_vec(), SynthKind::LowRank, seed);
    tucker_core::synth::gen_lowrank(&spec).unwrap()
}

fn noisy(dims: &[usize], ranks: &[usize], seed: u64) -> DenseTensor {
    let spec = SynthSpec::new(dims.to_vec(), ranks.to_vec(), SynthKind::Noisy, seed);
    gen_noisy(&spec).unwrap()
}

/// Per-outer relative errors: the record of the last mode of each sweep.
fn outer_errors(trace: &tucker_core::ConvergenceTrace, d: usize) -> Vec<f64> {
    let mut out = Vec::new();
    let mut cur_outer = 0;
    for rec in &trace.records {
        if rec.mode == d {
            if rec.outer != cur_outer {
                out.push(rec.rel_err);
                cur_outer = rec.outer;
            } else {
                *out.last_mut().unwrap() = rec.rel_err;
            }
        }
    }
    out
}

/// Sine of the largest principal angle between the column spans.
fn max_principal_angle_sin(u: &Matrix, v: &Matrix) -> f64 {
    let w = u.mul_tn(v);
    let gram = w.mul_nt(&w); // cos^2 spectrum
    let (vals, _) = jacobi_eig(&gram);
    let cos2_min = vals.last().copied().unwrap().clamp(0.0, 1.0);
    (1.0 - cos2_min).sqrt()
}

#[test]
fn rpcd_unit_step_descent_is_monotone() {
    let x = noisy(&[14, 12, 10], &[3, 2, 2], 7);
    let mut cfg = DecomposeConfig::new(vec![3, 2, 2], Method::Rpcd);
    cfg.eps = 1e-18;
    cfg.max_iter = 25;
    let (_, trace) = rpcd(&x, &cfg).unwrap();
    let errs = outer_errors(&trace, 3);
    assert!(errs.len() >= 5);
    for w in errs.windows(2) {
        assert!(
            w[1] <= w[0] + 1e-10,
            "E must be nonincreasing: {} -> {}",
            w[0],
            w[1]
        );
    }
}

#[test]
fn trace_is_invariant_under_right_rotation_of_init() {
    let x = noisy(&[12, 10, 8], &[3, 2, 2], 11);
    let mut cfg = DecomposeConfig::new(vec![3, 2, 2], Method::Rpcd);
    cfg.eps = 1e-18;
    cfg.max_iter = 6;
    let init = tucker_core::init_factors(&x, &cfg).unwrap();
    let rotated: Vec<StiefelPoint> = init
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let q = random_orthogonal(f.r(), 900 + i as u64);
            StiefelPoint::new(f.matrix().mul(&q)).unwrap()
        })
        .collect();

    let (_, t0) = decompose_from(&x, &cfg, init).unwrap();
    let (_, t1) = decompose_from(&x, &cfg, rotated).unwrap();
    assert_eq!(t0.records.len(), t1.records.len());
    for (a, b) in t0.records.iter().zip(&t1.records) {
        assert_eq!((a.outer, a.mode, a.inner), (b.outer, b.mode, b.inner));
        assert!(
            (a.rel_err - b.rel_err).abs() <= 1e-9,
            "rel_err differs: {} vs {}",
            a.rel_err,
            b.rel_err
        );
    }
}

#[test]
fn gradient_norm_running_min_decays_on_exact_data() {
    let x = lowrank(&[15, 12, 10], &[3, 2, 2], 13);
    let mut cfg = DecomposeConfig::new(vec![3, 2, 2], Method::Rpcd);
    cfg.eps = 1e-14;
    cfg.max_iter = 100;
    let (_, trace) = rpcd(&x, &cfg).unwrap();
    let mut running_min = f64::INFINITY;
    let mut mins = Vec::new();
    for &g in &trace.grad_norm_sums {
        running_min = running_min.min(g);
        mins.push(running_min);
    }
    for w in mins.windows(2) {
        assert!(w[1] <= w[0]);
    }
    assert!(
        *mins.last().unwrap() < 1e-6,
        "summed block gradient norms should drop below 1e-6, got {:?}",
        trace.grad_norm_sums
    );
}

#[test]
fn plus_variant_never_ends_worse() {
    let x = noisy(&[16, 13, 11], &[3, 3, 2], 17);
    let cfg = DecomposeConfig::new(vec![3, 3, 2], Method::Rpcd);
    let (_, plain) = rpcd(&x, &cfg).unwrap();
    let (_, plus) = rpcd_plus(&x, &cfg).unwrap();
    assert!(plus.final_rel_err <= plain.final_rel_err + 1e-9);
}

#[test]
fn plus_inner_loop_converges_to_dominant_subspace() {
    let x = noisy(&[18, 16, 14], &[3, 3, 3], 19);
    let mut cfg = DecomposeConfig::new(vec![3, 3, 3], Method::RpcdPlus);
    cfg.max_iter = 1;
    cfg.max_inner = 500;
    cfg.eps_inner = Some(1e-13);
    let init = tucker_core::init_factors(&x, &cfg).unwrap();

    // The tensor mode 1 sees during its (first) update.
    let y1 = x
        .mode_product_t(init[1].matrix(), 1)
        .unwrap()
        .mode_product_t(init[2].matrix(), 2)
        .unwrap();
    let y1_mat = y1.unfold(0).unwrap();

    let (model, _) = decompose_from(&x, &cfg, init).unwrap();
    let target = dominant_subspace(&y1_mat, 3).unwrap();
    let angle = max_principal_angle_sin(&model.factors[0], &target);
    assert!(angle <= 1e-4, "principal angle sine {}", angle);
}

#[test]
fn hooi_recovers_exact_data_quickly() {
    let x = lowrank(&[14, 12, 10], &[3, 2, 2], 23);
    let mut cfg = DecomposeConfig::new(vec![3, 2, 2], Method::Hooi);
    cfg.eps = 1e-9;
    let (model, trace) = hooi(&x, &cfg).unwrap();
    assert!(trace.iterations <= 5);
    assert!(rel_error_exact(&x, &model).unwrap() <= 1e-8);
}

#[test]
fn hooi_matrix_case_is_truncated_svd() {
    let x = gaussian_tensor(&[12, 9], 29);
    let mut cfg = DecomposeConfig::new(vec![3, 3], Method::Hooi);
    cfg.max_iter = 1;
    cfg.init = Init::Hosvd;
    let (model, _) = hooi(&x, &cfg).unwrap();

    let xmat = x.unfold(0).unwrap();
    let (_, left) = jacobi_eig(&xmat.mul_nt(&xmat));
    let left3 = Matrix::from_fn(12, 3, |i, j| left.get(i, j));
    assert!(max_principal_angle_sin(&model.factors[0], &left3) <= 1e-8);

    let (_, right) = jacobi_eig(&xmat.mul_tn(&xmat).sym_part());
    let right3 = Matrix::from_fn(9, 3, |i, j| right.get(i, j));
    assert!(max_principal_angle_sin(&model.factors[1], &right3) <= 1e-8);
}

#[test]
fn noisy_instance_method_agreement_and_hosvd_suboptimality() {
    let x = noisy(&[20, 18, 16], &[3, 3, 3], 31);
    let mut cfg = DecomposeConfig::new(vec![3, 3, 3], Method::RpcdPlus);
    cfg.eps = 1e-6;
    let (_, t_plus) = rpcd_plus(&x, &cfg).unwrap();
    let (m_hooi, t_hooi) = hooi(&x, &cfg).unwrap();
    assert!(
        (t_plus.final_rel_err - t_hooi.final_rel_err).abs() <= 1e-3,
        "rpcd-plus {} vs hooi {}",
        t_plus.final_rel_err,
        t_hooi.final_rel_err
    );

    let m_hosvd = hosvd(&x, &[3, 3, 3]).unwrap();
    let e_hosvd = rel_error_exact(&x, &m_hosvd).unwrap();
    let e_hooi = rel_error_exact(&x, &m_hooi).unwrap();
    assert!(e_hosvd >= e_hooi - 1e-12);
}

#[test]
fn euclidean_baseline_lags_preconditioned_descent() {
    let x = lowrank(&[24, 20, 16], &[3, 2, 2], 37);
    let mut cfg = DecomposeConfig::new(vec![3, 2, 2], Method::Rpcd);
    cfg.eps = 1e-15;
    cfg.max_iter = 50;
    let (_, t_rpcd) = rpcd(&x, &cfg).unwrap();
    let (_, t_euclid) = euclid_cd(&x, &cfg).unwrap();
    assert!(
        t_euclid.final_rel_err >= 10.0 * t_rpcd.final_rel_err,
        "euclid {} vs rpcd {}",
        t_euclid.final_rel_err,
        t_rpcd.final_rel_err
    );
    assert!(t_euclid.final_rel_err > 1e-4);
}

#[test]
fn zero_core_model_has_unit_error() {
    let x = gaussian_tensor(&[6, 5, 4], 901);
    let factors = vec![
        random_stiefel(6, 2, 902).unwrap().into_matrix(),
        random_stiefel(5, 2, 903).unwrap().into_matrix(),
        random_stiefel(4, 2, 904).unwrap().into_matrix(),
    ];
    let model = TuckerModel {
        core: DenseTensor::zeros(vec![2, 2, 2]).unwrap(),
        factors,
    };
    assert_eq!(rel_error_exact(&x, &model).unwrap(), 1.0);
}

#[test]
fn unit_step_over_rank_request_fails_as_rank_deficiency() {
    // At alpha = 1 the update target is exactly Y (Y^T U); asking for more
    // columns than the data's intrinsic mode rank makes that target rank
    // deficient, which the unique QR reports.
    let x = lowrank(&[10, 9, 8], &[2, 2, 2], 905);
    let cfg = DecomposeConfig::new(vec![3, 3, 3], Method::Rpcd);
    match rpcd(&x, &cfg) {
        Err(tucker_core::TuckerError::RankDeficient(_)) => {}
        other => panic!(
            "expected rank-deficiency signal, got {:?}",
            other.map(|_| ())
        ),
    }
}

#[test]
fn metric_gradient_variant_also_converges() {
    let x = lowrank(&[12, 10, 8], &[2, 2, 2], 43);
    let mut cfg = DecomposeConfig::new(vec![2, 2, 2], Method::Rpcd);
    cfg.grad_variant = tucker_core::GradVariant::Metric;
    let (model, trace) = rpcd(&x, &cfg).unwrap();
    assert!(trace.converged);
    assert!(rel_error_exact(&x, &model).unwrap() < 1e-8);
}

#[test]
fn fast_error_agrees_with_exact_reconstruction() {
    let x = noisy(&[13, 11, 9], &[2, 2, 2], 41);
    let cfg = DecomposeConfig::new(vec![2, 2, 2], Method::Rpcd);
    let (model, trace) = rpcd(&x, &cfg).unwrap();
    let exact = rel_error_exact(&x, &model).unwrap();
    assert!(
        (trace.final_rel_err - exact).abs() <= 1e-8,
        "fast {} vs exact {}",
        trace.final_rel_err,
        exact
    );
}

#[test]
fn reconstruction_identity_over_random_models() {
    for seed in 0..20u64 {
        let x = gaussian_tensor(&[7, 6, 5], 5000 + seed);
        let factors = vec![
            random_stiefel(7, 3, 6000 + seed).unwrap().into_matrix(),
            random_stiefel(6, 2, 7000 + seed).unwrap().into_matrix(),
            random_stiefel(5, 2, 8000 + seed).unwrap().into_matrix(),
        ];
        let core = core_of(&x, &factors).unwrap();
        let model = TuckerModel { core, factors };
        let rec = reconstruct(&model).unwrap();
        let nx2 = x.frobenius_norm().powi(2);
        let diff2: f64 = x
            .data()
            .iter()
            .zip(rec.data())
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        let nc2 = model.core.frobenius_norm().powi(2);
        assert!(
            (diff2 - (nx2 - nc2)).abs() <= 1e-8 * nx2,
            "seed {}: {} vs {}",
            seed,
            diff2,
            nx2 - nc2
        );
    }
}
