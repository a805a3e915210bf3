//! Monte Carlo estimate of the expected escape rate over random paths.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::bounds::ArchBounds;
use super::{lambda_local, Coefficients};
use crate::algebra::rational::Place;
use crate::correspondence::Correspondence;
use crate::error::{CorrdynError, Result};

const MAX_RETRIES: usize = 8;
const TAIL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
    /// Paths abandoned after a root-finding failure and drawn again.
    pub failures: usize,
}

fn sample_path(corr: &Correspondence, bounds: &ArchBounds, z: Complex64, depth: usize, rng: &mut ChaCha8Rng) -> Result<f64> {
    let q = bounds.ratio();
    let mut x = z;
    let mut w = 1.0;
    let mut tail = None;
    for step in 0..=depth {
        let m = x.norm();
        if bounds.escaped(m) {
            let (lo, hi) = bounds.tail(m, w);
            if !(lo.is_finite() && hi.is_finite()) {
                break;
            }
            tail = Some(0.5 * (lo + hi));
            // past the radius every continuation is inside the tail bound;
            // keep going only to narrow it
            if hi - lo <= TAIL_TOL {
                break;
            }
        }
        if step == depth || !corr.f().eval(x).is_finite() {
            break;
        }
        // roots arrive with multiplicity, so a uniform index is uniform by multiplicity
        let roots = corr.branch_step(x)?;
        x = roots[rng.gen_range(0..roots.len())];
        w *= q;
    }
    Ok(tail.unwrap_or_else(|| w * x.norm().ln().max(0.0)))
}

/// Average of truncated escape rates over `samples` random paths from z.
///
/// Sample i draws from its own stream of a generator keyed by `seed`, so the
/// result does not depend on the thread count.
pub fn expected_green_mc(corr: &Correspondence, z: Complex64, samples: usize, depth: usize, seed: u64) -> Result<McEstimate> {
    if samples == 0 {
        return Err(CorrdynError::InvalidInput("at least one sample is required".into()));
    }
    let lambda = lambda_local(Coefficients::Complex(corr), Place::Archimedean)?;
    let bounds = ArchBounds::new(corr, lambda);
    let draws: Vec<Result<(f64, usize)>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut failures = 0;
            loop {
                match sample_path(corr, &bounds, z, depth, &mut rng) {
                    Ok(v) => return Ok((v, failures)),
                    Err(CorrdynError::RootFinding { .. }) if failures < MAX_RETRIES => failures += 1,
                    Err(e) => return Err(e),
                }
            }
        })
        .collect();
    let mut values = Vec::with_capacity(samples);
    let mut failures = 0;
    for d in draws {
        let (v, f) = d?;
        values.push(v);
        failures += f;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Ok(McEstimate { mean, stderr: (var / n).sqrt(), samples, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::complex::ComplexPoly;

    #[test]
    fn single_branch_is_exact() {
        let c = Correspondence::new(ComplexPoly::from_real(&[0.0, 0.0, 1.0]), ComplexPoly::from_real(&[0.0, 1.0])).unwrap();
        let m = expected_green_mc(&c, Complex64::new(2.0, 0.0), 50, 30, 1).unwrap();
        assert!((m.mean - 2f64.ln()).abs() < 1e-12 && m.stderr < 1e-12);
    }

    #[test]
    fn symmetric_branches() {
        let c = Correspondence::new(
            ComplexPoly::from_real(&[0.0, 0.0, 0.0, 0.0, 1.0]),
            ComplexPoly::from_real(&[0.0, 0.0, 1.0]),
        )
        .unwrap();
        let m = expected_green_mc(&c, Complex64::new(3.0, 0.0), 40, 30, 7).unwrap();
        assert!((m.mean - 3f64.ln()).abs() < 1e-9, "{m:?}");
    }
}
