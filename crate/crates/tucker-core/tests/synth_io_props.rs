//! Generator rank structure and persistence fidelity.

mod common;

use common::jacobi_eig;
use proptest::prelude::*;
use tucker_core::io::{read_dten, read_model, write_dten, write_model};
use tucker_core::synth::{gen_lowrank_model, gen_noisy, SynthKind, SynthSpec};
use tucker_core::{rel_error_exact, DecomposeConfig, DenseTensor, Matrix, Method};

#[test]
fn lowrank_instance_fits_its_generating_model() {
    let spec = SynthSpec::new(vec![9, 8, 7], vec![3, 2, 2], SynthKind::LowRank, 3);
    let (x, model) = gen_lowrank_model(&spec).unwrap();
    assert!(rel_error_exact(&x, &model).unwrap() <= 1e-12);
}

#[test]
fn lowrank_unfoldings_have_exact_numerical_rank() {
    let spec = SynthSpec::new(vec![8, 7, 6], vec![3, 2, 2], SynthKind::LowRank, 5);
    let (x, _) = gen_lowrank_model(&spec).unwrap();
    for (mode, &r) in spec.ranks.iter().enumerate() {
        let m = x.unfold(mode).unwrap();
        let gram = m.mul_nt(&m);
        let (vals, vecs) = jacobi_eig(&gram);
        let sigma1 = vals[0].max(0.0).sqrt();
        // residual after projecting out the oracle top-r subspace bounds
        // sigma_{r+1} from above
        let n = m.rows();
        let top = Matrix::from_fn(n, r, |i, j| vecs.get(i, j));
        let resid = m.sub(&top.mul(&top.mul_tn(&m))).frobenius_norm();
        assert!(
            resid <= 1e-10 * sigma1,
            "mode {}: residual {} vs sigma1 {}",
            mode,
            resid,
            sigma1
        );
    }
}

#[test]
fn noisy_fit_sits_at_the_noise_floor() {
    let spec = SynthSpec::new(vec![20, 20, 20], vec![3, 3, 3], SynthKind::Noisy, 8);
    let x = gen_noisy(&spec).unwrap();
    let mut cfg = DecomposeConfig::new(vec![3, 3, 3], Method::RpcdPlus);
    cfg.eps = 1e-5;
    let (_, trace) = tucker_core::rpcd_plus(&x, &cfg).unwrap();
    assert!(
        trace.final_rel_err >= 0.08 && trace.final_rel_err <= 0.12,
        "rel_err {}",
        trace.final_rel_err
    );
}

#[test]
fn model_directory_roundtrip_preserves_error() {
    let spec = SynthSpec::new(vec![10, 9, 8], vec![2, 2, 2], SynthKind::Noisy, 12);
    let x = gen_noisy(&spec).unwrap();
    let cfg = DecomposeConfig::new(vec![2, 2, 2], Method::RpcdPlus);
    let (model, _) = tucker_core::rpcd_plus(&x, &cfg).unwrap();
    let in_memory = rel_error_exact(&x, &model).unwrap();

    let dir = tempfile::tempdir().unwrap();
    let model_dir = dir.path().join("model");
    write_model(&model_dir, &model).unwrap();
    let back = read_model(&model_dir).unwrap();
    for (a, b) in model.factors.iter().zip(&back.factors) {
        assert_eq!(a.data(), b.data());
    }
    assert_eq!(model.core.data(), back.core.data());
    let reread = rel_error_exact(&x, &back).unwrap();
    assert!((in_memory - reread).abs() <= 1e-15);
}

fn payload_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(
        prop_oneof![
            (-1e12f64..1e12),
            Just(-0.0f64),
            Just(0.0f64),
            Just(4.9e-324f64),  // smallest subnormal
            Just(-2.2e-308f64), // near the normal/subnormal boundary
        ],
        12,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn prop_dten_roundtrip_is_bit_exact(payload in payload_strategy()) {
        let t = DenseTensor::new(vec![3, 2, 2], payload).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.dten");
        write_dten(&p, &t).unwrap();
        let back = read_dten(&p).unwrap();
        prop_assert_eq!(back.dims(), t.dims());
        for (a, b) in back.data().iter().zip(t.data()) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}
