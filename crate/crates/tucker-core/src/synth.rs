//! Seeded synthetic tensor generators: exact low multilinear rank, and
//! low rank plus normalized Gaussian noise.
//!
//! Seed derivation: a splitmix64 chain seeded with `spec.seed` hands out one
//! derived 64-bit seed per purpose, in this fixed order: core, factor for
//! mode 1, .., factor for mode d, noise, then retry seeds. Each purpose then
//! drives its own ChaCha8 stream (ziggurat standard normals), so streams are
//! independent and the whole construction is bit-reproducible for a fixed
//! seed.

use crate::algorithms::TuckerModel;
use crate::error::{Result, TuckerError};
use crate::manifold::random_stiefel;
use crate::tensor::DenseTensor;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthKind {
    LowRank,
    Noisy,
}

impl FromStr for SynthKind {
    type Err = TuckerError;

    fn from_str(s: &str) -> Result<SynthKind> {
        match s {
            "lowrank" => Ok(SynthKind::LowRank),
            "noisy" => Ok(SynthKind::Noisy),
            other => Err(TuckerError::InvalidArgument(format!(
                "unknown synth kind '{}' (expected lowrank|noisy)",
                other
            ))),
        }
    }
}

impl std::fmt::Display for SynthKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SynthKind::LowRank => "lowrank",
            SynthKind::Noisy => "noisy",
        })
    }
}

/// Parameters of one synthetic instance.
#[derive(Debug, Clone)]
pub struct SynthSpec {
    pub dims: Vec<usize>,
    pub ranks: Vec<usize>,
    pub kind: SynthKind,
    /// Noise coefficient for the noisy kind.
    pub noise: f64,
    pub seed: u64,
}

impl SynthSpec {
    pub fn new(dims: Vec<usize>, ranks: Vec<usize>, kind: SynthKind, seed: u64) -> SynthSpec {
        SynthSpec {
            dims,
            ranks,
            kind,
            noise: 0.1,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() {
            return Err(TuckerError::InvalidArgument("dims must be nonempty".into()));
        }
        if self.dims.len() != self.ranks.len() {
            return Err(TuckerError::InvalidArgument(format!(
                "got {} ranks for {} dims",
                self.ranks.len(),
                self.dims.len()
            )));
        }
        for (i, (&r, &n)) in self.ranks.iter().zip(&self.dims).enumerate() {
            if n == 0 || r == 0 || r > n {
                return Err(TuckerError::InvalidArgument(format!(
                    "rank {} invalid for dimension {} (mode {})",
                    r,
                    n,
                    i + 1
                )));
            }
        }
        if !(self.noise >= 0.0 && self.noise.is_finite()) {
            return Err(TuckerError::InvalidArgument(
                "noise must be finite and nonnegative".into(),
            ));
        }
        Ok(())
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derived seeds for one instance, in the documented order.
struct Streams {
    core: u64,
    factors: Vec<u64>,
    noise: u64,
    retry: u64,
}

fn derive_streams(seed: u64, d: usize) -> Streams {
    let mut state = seed;
    let core = splitmix64(&mut state);
    let factors = (0..d).map(|_| splitmix64(&mut state)).collect();
    let noise = splitmix64(&mut state);
    let retry = splitmix64(&mut state);
    Streams {
        core,
        factors,
        noise,
        retry,
    }
}

fn gaussian_tensor(dims: &[usize], seed: u64) -> DenseTensor {
    let len: usize = dims.iter().product();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: Vec<f64> = (0..len).map(|_| StandardNormal.sample(&mut rng)).collect();
    DenseTensor::from_parts(dims.to_vec(), data)
}

fn lowrank_from_streams(spec: &SynthSpec, streams: &Streams) -> Result<(DenseTensor, TuckerModel)> {
    let core = gaussian_tensor(&spec.ranks, streams.core);
    let mut t = core.clone();
    let mut factors = Vec::with_capacity(spec.dims.len());
    for (i, (&n, &r)) in spec.dims.iter().zip(&spec.ranks).enumerate() {
        let u = random_stiefel(n, r, streams.factors[i])?;
        t = t.mode_product(u.matrix(), i)?;
        factors.push(u.into_matrix());
    }
    Ok((t, TuckerModel { core, factors }))
}

/// Exact low multilinear rank instance: a standard normal core expanded by
/// per-mode random orthonormal factors. The multilinear rank equals
/// `spec.ranks` almost surely.
pub fn gen_lowrank(spec: &SynthSpec) -> Result<DenseTensor> {
    Ok(gen_lowrank_model(spec)?.0)
}

/// Like [`gen_lowrank`] but also returns the generating model (exact core
/// and factors), for tests that verify the instance fits its own model.
pub fn gen_lowrank_model(spec: &SynthSpec) -> Result<(DenseTensor, TuckerModel)> {
    spec.validate()?;
    if spec.kind != SynthKind::LowRank {
        return Err(TuckerError::InvalidArgument(
            "gen_lowrank needs kind = lowrank".into(),
        ));
    }
    let streams = derive_streams(spec.seed, spec.dims.len());
    lowrank_from_streams(spec, &streams)
}

/// Noisy instance `L / ||L|| + noise * N / ||N||` with `L` an exact low-rank
/// draw and `N` standard normal.
///
/// Zero-norm draws have probability zero; if one occurs anyway the draw is
/// retried once from the retry stream before failing.
pub fn gen_noisy(spec: &SynthSpec) -> Result<DenseTensor> {
    spec.validate()?;
    if spec.kind != SynthKind::Noisy {
        return Err(TuckerError::InvalidArgument(
            "gen_noisy needs kind = noisy".into(),
        ));
    }
    let streams = derive_streams(spec.seed, spec.dims.len());

    let low_spec = SynthSpec {
        kind: SynthKind::LowRank,
        ..spec.clone()
    };
    let mut low = lowrank_from_streams(&low_spec, &streams)?.0;
    let mut norm_l = low.frobenius_norm();
    if norm_l == 0.0 {
        let retry = derive_streams(streams.retry, spec.dims.len());
        low = lowrank_from_streams(&low_spec, &retry)?.0;
        norm_l = low.frobenius_norm();
        if norm_l == 0.0 {
            return Err(TuckerError::NumericFailure(
                "low-rank draw has zero norm twice".into(),
            ));
        }
    }

    let mut data: Vec<f64> = low.data().iter().map(|v| v / norm_l).collect();
    if spec.noise > 0.0 {
        let mut noise = gaussian_tensor(&spec.dims, streams.noise);
        let mut norm_n = noise.frobenius_norm();
        if norm_n == 0.0 {
            let mut retry_state = streams.retry;
            let retry_seed = splitmix64(&mut retry_state);
            noise = gaussian_tensor(&spec.dims, retry_seed);
            norm_n = noise.frobenius_norm();
            if norm_n == 0.0 {
                return Err(TuckerError::NumericFailure(
                    "noise draw has zero norm twice".into(),
                ));
            }
        }
        let scale = spec.noise / norm_n;
        for (d, n) in data.iter_mut().zip(noise.data()) {
            *d += scale * n;
        }
    }
    Ok(DenseTensor::from_parts(spec.dims.clone(), data))
}

/// Generates according to `spec.kind`.
pub fn generate(spec: &SynthSpec) -> Result<DenseTensor> {
    match spec.kind {
        SynthKind::LowRank => gen_lowrank(spec),
        SynthKind::Noisy => gen_noisy(spec),
    }
}
