//! Reproducible sample loops.
//!
//! Sample `i` draws from a ChaCha8 generator seeded with the run seed and
//! set to stream `i`, so its random numbers never depend on which worker
//! evaluates it. Results are gathered in index order and reduced by
//! pairwise summation, which keeps every statistic bit-identical across
//! thread counts.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ExecPolicy {
    Sequential,
    #[default]
    Parallel,
}

impl ExecPolicy {
    /// Whether the parallel path is compiled in.
    pub fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub seed: u64,
}

impl Estimate {
    pub fn from_samples(values: &[f64], seed: u64) -> Result<Self> {
        let n = values.len();
        if n < 2 {
            return Err(Error::OutOfRange(format!(
                "need at least 2 samples, got {n}"
            )));
        }
        let mean = pairwise_sum(values) / n as f64;
        let sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
        let var = pairwise_sum(&sq) / (n as f64 - 1.0);
        Ok(Self {
            mean,
            std_error: (var / n as f64).sqrt(),
            n_samples: n,
            seed,
        })
    }

    /// `|mean − target| ≤ k·SE`, with exact equality accepted when SE is 0.
    pub fn agrees_with(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_error
    }
}

pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n if n <= 8 => values.iter().sum(),
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// The generator for sample `index` of a run seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Evaluates `f` on `n` independent samples, returned in index order.
pub fn map_samples<T, F>(n: usize, seed: u64, policy: ExecPolicy, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, &mut ChaCha8Rng) -> Result<T> + Sync,
{
    let one = |i: usize| f(i, &mut sample_rng(seed, i as u64));
    match policy {
        ExecPolicy::Sequential => (0..n).map(one).collect(),
        ExecPolicy::Parallel => parallel_map(n, one),
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T: Send, G: Fn(usize) -> Result<T> + Sync + Send>(
    n: usize,
    g: G,
) -> Result<Vec<T>> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(g).collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T: Send, G: Fn(usize) -> Result<T> + Sync + Send>(
    n: usize,
    g: G,
) -> Result<Vec<T>> {
    (0..n).map(g).collect()
}

/// Mean and standard error of a scalar sampled `n` times.
pub fn run_samples<F>(n: usize, seed: u64, policy: ExecPolicy, f: F) -> Result<Estimate>
where
    F: Fn(&mut ChaCha8Rng) -> Result<f64> + Sync,
{
    let values = map_samples(n, seed, policy, |_, rng| f(rng))?;
    Estimate::from_samples(&values, seed)
}

/// Runs `f` on a dedicated pool of `threads` workers. Without the
/// `parallel` feature this just calls `f`.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    #[cfg(feature = "parallel")]
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::OutOfRange(format!("thread pool: {e}")))?;
        Ok(pool.install(f))
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        Ok(f())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn policies_agree_bitwise() {
        let f = |rng: &mut ChaCha8Rng| Ok(rng.random::<f64>().sin());
        let a = run_samples(1000, 9, ExecPolicy::Sequential, f).unwrap();
        let b = run_samples(1000, 9, ExecPolicy::Parallel, f).unwrap();
        let c = with_threads(3, || run_samples(1000, 9, ExecPolicy::Parallel, f).unwrap()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn estimate_statistics() {
        let e = Estimate::from_samples(&[1.0, 2.0, 3.0, 4.0], 0).unwrap();
        assert_eq!(e.mean, 2.5);
        assert!((e.std_error - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        assert!(Estimate::from_samples(&[1.0], 0).is_err());
        let c = Estimate::from_samples(&[1.0; 10], 0).unwrap();
        assert_eq!(c.std_error, 0.0);
        assert!(c.agrees_with(1.0, 3.0));
    }

    #[test]
    fn streams_differ() {
        let a: u64 = sample_rng(1, 0).random();
        let b: u64 = sample_rng(1, 1).random();
        assert_ne!(a, b);
    }
}
