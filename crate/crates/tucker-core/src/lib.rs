//! Dense Tucker decomposition toolkit.
//!
//! Builds low multilinear-rank approximations of dense `f64` tensors with
//! Riemannian preconditioned coordinate descent on products of Grassmann
//! manifolds (`rpcd`, `rpcd_plus`), alongside the classical baselines
//! (`hooi`, `hosvd`, `st_hosvd`) and a plain Euclidean-metric coordinate
//! descent. Ships seeded synthetic generators, a bit-exact binary tensor
//! format and CSV convergence traces.
//!
//! Layout and conventions:
//! - tensors are linearized first-index-fastest (column-major
//!   generalization); modes are zero-based in code, 1-based in traces;
//! - every kernel is sequential with a fixed evaluation order, so identical
//!   inputs produce bit-identical outputs;
//! - factor matrices always carry orthonormal columns, maintained through a
//!   unique (positive-diagonal) QR retraction.
//!
//! ```
//! use tucker_core::synth::{gen_lowrank, SynthKind, SynthSpec};
//! use tucker_core::{decompose, DecomposeConfig, Method};
//!
//! let spec = SynthSpec::new(vec![20, 18, 16], vec![3, 3, 3], SynthKind::LowRank, 42);
//! let x = gen_lowrank(&spec)?;
//! let cfg = DecomposeConfig::new(vec![3, 3, 3], Method::RpcdPlus);
//! let (model, trace) = decompose(&x, &cfg)?;
//! assert_eq!(model.core.dims(), &[3, 3, 3]);
//! assert!(trace.final_rel_err < 1e-6);
//! # Ok::<(), tucker_core::TuckerError>(())
//! ```

pub mod algorithms;
pub mod bench;
pub mod error;
pub mod io;
pub mod linalg;
pub mod manifold;
pub mod matrix;
pub mod synth;
pub mod tensor;

pub use algorithms::{
    core_of, decompose, decompose_from, euclid_cd, hooi, hosvd, init_factors, reconstruct,
    rel_error_exact, rel_error_fast, rpcd, rpcd_mode_update, rpcd_plus, st_hosvd, ConvergenceTrace,
    DecomposeConfig, GradVariant, Init, Method, TraceRecord, TuckerModel,
};
pub use error::{Result, TuckerError};
pub use matrix::Matrix;
pub use tensor::DenseTensor;
