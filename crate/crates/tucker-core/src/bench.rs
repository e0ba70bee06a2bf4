//! Benchmark harness: runs a set of methods on freshly seeded synthetic
//! instances and reports mean parameter-update time and mean final relative
//! error per method.
//!
//! Repeat `j` generates one instance from seed `base_seed + j`; every method
//! runs on that same instance (random initialization also seeded with
//! `base_seed + j`), so the comparison between methods is paired. Reported
//! time is each run's accumulated parameter-update time; generation and any
//! IO are excluded.

use crate::algorithms::{decompose, DecomposeConfig, Init, Method};
use crate::error::Result;
use crate::synth::{generate, SynthKind, SynthSpec};

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub method: Method,
    pub mean_elapsed_s: f64,
    pub mean_rel_err: f64,
    pub repeats: usize,
}

#[derive(Debug, Clone)]
pub struct BenchSpec {
    pub dims: Vec<usize>,
    pub ranks: Vec<usize>,
    pub kind: SynthKind,
    pub noise: f64,
    pub seed: u64,
    pub repeat: usize,
    pub methods: Vec<Method>,
    /// Outer stopping threshold passed to every method (default 1e-3).
    pub eps: f64,
}

impl BenchSpec {
    pub fn new(
        dims: Vec<usize>,
        ranks: Vec<usize>,
        seed: u64,
        repeat: usize,
        methods: Vec<Method>,
    ) -> BenchSpec {
        BenchSpec {
            dims,
            ranks,
            kind: SynthKind::LowRank,
            noise: 0.1,
            seed,
            repeat,
            methods,
            eps: 1e-3,
        }
    }
}

pub fn run_bench(spec: &BenchSpec) -> Result<Vec<BenchRow>> {
    use crate::error::TuckerError;
    if spec.repeat == 0 {
        return Err(TuckerError::InvalidArgument(
            "repeat must be at least 1".into(),
        ));
    }
    if spec.methods.is_empty() {
        return Err(TuckerError::InvalidArgument(
            "at least one method is required".into(),
        ));
    }
    let mut elapsed_sums = vec![0.0f64; spec.methods.len()];
    let mut err_sums = vec![0.0f64; spec.methods.len()];

    for j in 0..spec.repeat {
        let instance_seed = spec.seed.wrapping_add(j as u64);
        let mut synth = SynthSpec::new(
            spec.dims.clone(),
            spec.ranks.clone(),
            spec.kind,
            instance_seed,
        );
        synth.noise = spec.noise;
        let x = generate(&synth)?;

        for (mi, &method) in spec.methods.iter().enumerate() {
            let mut cfg = DecomposeConfig::new(spec.ranks.clone(), method);
            cfg.eps = spec.eps;
            cfg.init = Init::Random;
            cfg.seed = instance_seed;
            let (_, trace) = decompose(&x, &cfg)?;
            elapsed_sums[mi] += trace.work_s;
            err_sums[mi] += trace.final_rel_err;
        }
    }

    Ok(spec
        .methods
        .iter()
        .enumerate()
        .map(|(mi, &method)| BenchRow {
            method,
            mean_elapsed_s: elapsed_sums[mi] / spec.repeat as f64,
            mean_rel_err: err_sums[mi] / spec.repeat as f64,
            repeats: spec.repeat,
        })
        .collect())
}

pub const BENCH_CSV_HEADER: &str = "method,mean_elapsed_s,mean_rel_err,repeats";

pub fn bench_rows_to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(BENCH_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.method,
            crate::io::format_f64(row.mean_elapsed_s),
            crate::io::format_f64(row.mean_rel_err),
            row.repeats
        ));
    }
    out
}
