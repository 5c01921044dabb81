//! CPU slicing benchmark over random hyperplanes.

use std::time::{Duration, Instant};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mesh4::SpacetimeMesh;
use crate::scalar::Real;
use crate::slicer::{slice_mesh, Hyperplane};

pub const DEFAULT_SAMPLES: usize = 50;

/// One benchmark sample.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchSample<T> {
    pub plane: Hyperplane<T>,
    pub triangles: usize,
    pub segments: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport<T> {
    pub seed: u64,
    pub samples: Vec<BenchSample<T>>,
}

impl<T: Real> BenchReport<T> {
    pub fn mean(&self) -> Duration {
        if self.samples.is_empty() {
            return Duration::ZERO;
        }
        self.samples.iter().map(|s| s.elapsed).sum::<Duration>() / self.samples.len() as u32
    }

    pub fn median(&self) -> Duration {
        let mut t: Vec<Duration> = self.samples.iter().map(|s| s.elapsed).collect();
        t.sort_unstable();
        match t.len() {
            0 => Duration::ZERO,
            n if n % 2 == 1 => t[n / 2],
            n => (t[n / 2 - 1] + t[n / 2]) / 2,
        }
    }

    pub fn total_primitives(&self) -> usize {
        self.samples.iter().map(|s| s.triangles + s.segments).sum()
    }

    pub fn primitives_per_sec(&self) -> f64 {
        let secs: f64 = self.samples.iter().map(|s| s.elapsed.as_secs_f64()).sum();
        if secs > 0.0 {
            self.total_primitives() as f64 / secs
        } else {
            0.0
        }
    }

    /// Everything except the timings, which vary between runs.
    pub fn fingerprint(&self) -> Vec<(Hyperplane<T>, usize, usize)> {
        self.samples.iter().map(|s| (s.plane, s.triangles, s.segments)).collect()
    }
}

/// Hyperplanes through a random time in the mesh's t-range, tilted by a
/// random spatial normal component of at most 0.5.
pub fn random_planes<T: Real>(mesh: &SpacetimeMesh<T>, samples: usize, seed: u64) -> Vec<Hyperplane<T>> {
    let (lo, hi) = mesh.bounding_box().unwrap_or(([T::zero(); 4], [T::zero(); 4]));
    let mid = |i: usize| (lo[i] + hi[i]).as_f64() / 2.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let n = [rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5), 1.0];
            let t = lo[3].as_f64() + rng.random::<f64>() * (hi[3] - lo[3]).as_f64();
            Hyperplane::new(n.map(T::lit), [mid(0), mid(1), mid(2), t].map(T::lit)).expect("nonzero normal")
        })
        .collect()
}

pub fn run_bench<T: Real>(mesh: &SpacetimeMesh<T>, samples: usize, seed: u64) -> BenchReport<T> {
    let samples = random_planes(mesh, samples, seed)
        .into_iter()
        .map(|plane| {
            let clock = Instant::now();
            let r = slice_mesh(mesh, &plane);
            let elapsed = clock.elapsed();
            BenchSample { plane, triangles: r.triangles.len(), segments: r.segments.len(), elapsed }
        })
        .collect();
    BenchReport { seed, samples }
}
