//! Dense complex polynomials and a simultaneous-iteration root finder.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CorrdynError, Result};

/// Default backward-error tolerance used by the dynamics code.
pub const ROOT_TOL: f64 = 1e-10;

const MAX_ITERATIONS: usize = 600;
const MAX_RESTARTS: usize = 4;

/// Dense polynomial with complex coefficients, index = degree.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl ComplexPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        ComplexPoly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self::new(vec![])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Complex64::new(0.0, 0.0)
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().unwrap()
    }

    pub fn coeff(&self, i: usize) -> Complex64 {
        self.coeffs.get(i).copied().unwrap_or_default()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first derivative by Horner's scheme.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// Sum of |a_i| |z|^i, the scale against which residuals are measured.
    pub fn abs_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * k).collect())
    }

    /// The polynomial x ↦ self(scale·x + shift).
    pub fn compose_affine(&self, scale: Complex64, shift: Complex64) -> Self {
        let lin = ComplexPoly::new(vec![shift, scale]);
        let mut acc = ComplexPoly::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&ComplexPoly::new(vec![c]));
        }
        acc
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut acc = ComplexPoly::new(vec![Complex64::new(1.0, 0.0)]);
        for &r in roots {
            acc = acc.mul(&ComplexPoly::new(vec![-r, Complex64::new(1.0, 0.0)]));
        }
        acc
    }
}

impl fmt::Display for ComplexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| format_complex(*c)).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// `<re>+<im>i` with no spaces.
pub fn format_complex(z: Complex64) -> String {
    // adding 0.0 turns -0 into 0
    let re = z.re + 0.0;
    if z.im < 0.0 {
        format!("{re}-{}i", -z.im)
    } else {
        format!("{re}+{}i", z.im + 0.0)
    }
}

/// Parses `<re>+<im>i`, `<re>-<im>i`, `<im>i`, a plain real, or `num/den`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let s = s.trim();
    let err = || CorrdynError::Parse(format!("bad complex number `{s}`"));
    if s.is_empty() {
        return Err(err());
    }
    if let Some(body) = s.strip_suffix('i') {
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                split = Some(k);
                break;
            }
        }
        return match split {
            Some(k) => {
                let re = parse_real(&body[..k]).ok_or_else(err)?;
                let im_str = &body[k..];
                let im = match im_str {
                    "+" => 1.0,
                    "-" => -1.0,
                    _ => parse_real(im_str).ok_or_else(err)?,
                };
                Ok(Complex64::new(re, im))
            }
            None => {
                let im = match body {
                    "" | "+" => 1.0,
                    "-" => -1.0,
                    _ => parse_real(body).ok_or_else(err)?,
                };
                Ok(Complex64::new(0.0, im))
            }
        };
    }
    parse_real(s).map(|re| Complex64::new(re, 0.0)).ok_or_else(err)
}

fn parse_real(s: &str) -> Option<f64> {
    if let Some((n, d)) = s.split_once('/') {
        let n: f64 = n.parse().ok()?;
        let d: f64 = d.parse().ok()?;
        if d == 0.0 {
            return None;
        }
        return Some(n / d);
    }
    s.parse().ok()
}

/// All `deg(p)` roots of `p` with multiplicity.
///
/// Aberth–Ehrlich simultaneous iteration, stopped on a backward-error
/// criterion. Roots whose Weierstrass inclusion disks overlap are reported as
/// one cluster at its centroid, repeated once per member. Every returned root
/// satisfies `|p(r)| <= tol * sum |a_i| |r|^i`; otherwise an error carrying the
/// residuals is returned.
pub fn roots_complex(p: &ComplexPoly, tol: f64) -> Result<Vec<Complex64>> {
    if p.is_zero() || p.degree() == 0 {
        return Err(CorrdynError::InvalidInput(
            "root finding needs degree >= 1".into(),
        ));
    }
    let zero_roots = p.coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    let reduced = ComplexPoly::new(p.coeffs[zero_roots..].to_vec());
    let mut roots = vec![Complex64::new(0.0, 0.0); zero_roots];
    if reduced.degree() > 0 {
        let found = match reduced.degree() {
            1 => vec![-reduced.coeffs[0] / reduced.coeffs[1]],
            2 => quadratic_roots(&reduced),
            _ => aberth(&reduced)?,
        };
        roots.extend(merge_clusters(&reduced, found));
    }
    certify(p, &roots, tol)?;
    sort_roots(&mut roots);
    Ok(roots)
}

/// Canonical ordering: by real part, then imaginary part.
pub fn sort_roots(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

fn certify(p: &ComplexPoly, roots: &[Complex64], tol: f64) -> Result<()> {
    let residuals: Vec<f64> = roots
        .iter()
        .map(|&r| {
            let scale = p.abs_scale(r);
            // relative accuracy is unattainable once the terms are subnormal
            if scale < 1e3 * f64::MIN_POSITIVE {
                0.0
            } else {
                p.eval(r).norm() / scale
            }
        })
        .collect();
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    if !(max_residual <= tol) {
        return Err(CorrdynError::RootFinding {
            iterations: MAX_ITERATIONS,
            max_residual,
            residuals,
        });
    }
    Ok(())
}

fn quadratic_roots(p: &ComplexPoly) -> Vec<Complex64> {
    let (c, b, a) = (p.coeffs[0], p.coeffs[1], p.coeffs[2]);
    let disc = (b * b - 4.0 * a * c).sqrt();
    let q1 = b + disc;
    let q2 = b - disc;
    let q = if q1.norm() >= q2.norm() { q1 } else { q2 } * -0.5;
    if q.norm() == 0.0 {
        return vec![Complex64::new(0.0, 0.0); 2];
    }
    let mut out = vec![q / a, c / q];
    for r in out.iter_mut() {
        *r = newton_polish(p, *r);
    }
    out
}

fn newton_polish(p: &ComplexPoly, z: Complex64) -> Complex64 {
    let mut z = z;
    for _ in 0..2 {
        let (v, dv) = p.eval_with_derivative(z);
        if dv.norm() == 0.0 || !v.is_finite() {
            break;
        }
        let step = v / dv;
        let next = z - step;
        if !next.is_finite() || p.eval(next).norm() > v.norm() {
            break;
        }
        z = next;
    }
    z
}

fn aberth(p: &ComplexPoly) -> Result<Vec<Complex64>> {
    let n = p.degree();
    let lead = p.leading();
    // geometric-mean radius, which is the right scale for the initial circle
    let radius = (p.coeffs[0] / lead).norm().powf(1.0 / n as f64).max(f64::MIN_POSITIVE);
    let bound = cauchy_upper_bound(p);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0ab3);
    let mut last_residuals = Vec::new();
    for restart in 0..=MAX_RESTARTS {
        let r0 = if restart == 0 { radius.min(bound) } else { rng.gen_range(0.3..1.0) * bound };
        let offset = if restart == 0 { 0.4 } else { rng.gen_range(0.0..std::f64::consts::TAU) };
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| Complex64::from_polar(r0, offset + std::f64::consts::TAU * k as f64 / n as f64))
            .collect();
        let mut done = vec![false; n];
        for _ in 0..MAX_ITERATIONS {
            let mut all_done = true;
            for i in 0..n {
                if done[i] {
                    continue;
                }
                let (v, dv) = p.eval_with_derivative(z[i]);
                let scale = p.abs_scale(z[i]);
                if v.norm() <= 4.0 * f64::EPSILON * scale {
                    done[i] = true;
                    continue;
                }
                all_done = false;
                let ratio = v / dv;
                let mut sum = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    if j != i {
                        let diff = z[i] - z[j];
                        if diff.norm() > 0.0 {
                            sum += diff.inv();
                        }
                    }
                }
                let denom = Complex64::new(1.0, 0.0) - ratio * sum;
                let step = if denom.norm() == 0.0 || !denom.is_finite() { ratio } else { ratio / denom };
                if step.is_finite() {
                    z[i] -= step;
                } else {
                    z[i] += Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * radius * 1e-3;
                }
            }
            if all_done {
                return Ok(z);
            }
        }
        last_residuals = z
            .iter()
            .map(|&zi| p.eval(zi).norm() / p.abs_scale(zi).max(f64::MIN_POSITIVE))
            .collect();
    }
    let max_residual = last_residuals.iter().cloned().fold(0.0, f64::max);
    Err(CorrdynError::RootFinding {
        iterations: MAX_ITERATIONS * (MAX_RESTARTS + 1),
        max_residual,
        residuals: last_residuals,
    })
}

/// Unique positive root of |a_n| r^n = sum_{i<n} |a_i| r^i; all roots lie in the closed disk.
pub fn cauchy_upper_bound(p: &ComplexPoly) -> f64 {
    let n = p.degree();
    let lead = p.leading().norm();
    let lower: Vec<f64> = p.coeffs[..n].iter().map(|c| c.norm()).collect();
    cauchy_radius(lead, &lower)
}

/// Positive root of `lead·r^n = sum_i lower[i]·r^i` (n = lower.len()), 0 if all lower terms vanish.
pub fn cauchy_radius(lead: f64, lower: &[f64]) -> f64 {
    let n = lower.len();
    if lower.iter().all(|&c| c == 0.0) {
        return 0.0;
    }
    let h = |r: f64| -> f64 {
        let mut rhs = 0.0;
        for &c in lower.iter().rev() {
            rhs = rhs * r + c;
        }
        lead * r.powi(n as i32) - rhs
    };
    // Fujiwara-type upper estimate to bracket the root.
    let mut hi = lower
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0.0)
        .map(|(i, &c)| 2.0 * (c / lead).powf(1.0 / (n - i) as f64))
        .fold(0.0, f64::max);
    if hi == 0.0 || !hi.is_finite() {
        hi = 1.0;
    }
    while h(hi) < 0.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Replace members of each overlapping-inclusion-disk component by the component centroid.
fn merge_clusters(p: &ComplexPoly, z: Vec<Complex64>) -> Vec<Complex64> {
    let n = z.len();
    if n < 2 {
        return z;
    }
    let lead = p.leading();
    let radii: Vec<f64> = (0..n)
        .map(|i| {
            let mut prod = lead;
            for j in 0..n {
                if j != i {
                    prod *= z[i] - z[j];
                }
            }
            let w = p.eval(z[i]).norm() / prod.norm();
            let r = n as f64 * w;
            if r.is_finite() {
                r.max(4.0 * f64::EPSILON * z[i].norm())
            } else {
                f64::INFINITY
            }
        })
        .collect();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut k = i;
        while parent[k] != r {
            let next = parent[k];
            parent[k] = r;
            k = next;
        }
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let dist = (z[i] - z[j]).norm();
            let touch = if radii[i].is_infinite() || radii[j].is_infinite() {
                dist <= 1e-6 * (1.0 + z[i].norm())
            } else {
                dist <= radii[i] + radii[j]
            };
            if touch {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut out = z.clone();
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    for members in groups.values() {
        if members.len() > 1 {
            let centroid = members.iter().map(|&i| z[i]).sum::<Complex64>() / members.len() as f64;
            for &i in members {
                out[i] = centroid;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn x_squared_minus_one() {
        let r = roots_complex(&ComplexPoly::from_real(&[-1.0, 0.0, 1.0]), 1e-12).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0] - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((r[1] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn triple_root_at_zero() {
        let r = roots_complex(&ComplexPoly::from_real(&[0.0, 0.0, 0.0, 1.0]), 1e-12).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|z| z.norm() < 1e-4));
    }

    #[test]
    fn shifted_triple_root_clusters() {
        // (x - 1)^3
        let p = ComplexPoly::from_real(&[-1.0, 3.0, -3.0, 1.0]);
        let r = roots_complex(&p, 1e-12).unwrap();
        assert_eq!(r.len(), 3);
        for z in &r {
            assert!((z - c(1.0, 0.0)).norm() < 1e-4, "{z}");
        }
    }

    #[test]
    fn sqrt_two_against_bisection() {
        let r = roots_complex(&ComplexPoly::from_real(&[-2.0, 0.0, 1.0]), 1e-12).unwrap();
        let (mut lo, mut hi) = (1.0f64, 2.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * mid < 2.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        assert!((r[1].re - lo).abs() < 1e-12);
        assert!((r[0].re + lo).abs() < 1e-12);
    }

    #[test]
    fn degree_zero_rejected() {
        assert!(roots_complex(&ComplexPoly::from_real(&[3.0]), 1e-12).is_err());
    }

    #[test]
    fn vieta_on_fixed_quintic() {
        let p = ComplexPoly::new(vec![c(1.0, 2.0), c(-3.0, 0.5), c(0.0, 1.0), c(2.0, -1.0), c(0.5, 0.0), c(1.0, 1.0)]);
        let r = roots_complex(&p, 1e-12).unwrap();
        let sum: Complex64 = r.iter().sum();
        let expect = -p.coeff(4) / p.leading();
        assert!((sum - expect).norm() <= 1e-8 * expect.norm().max(1.0));
        let prod: Complex64 = r.iter().product();
        let expect = -p.coeff(0) / p.leading();
        assert!((prod - expect).norm() <= 1e-8 * expect.norm().max(1.0));
    }

    #[test]
    fn complex_parse_format() {
        assert_eq!(parse_complex("5+0i").unwrap(), c(5.0, 0.0));
        assert_eq!(parse_complex("-1.5-2i").unwrap(), c(-1.5, -2.0));
        assert_eq!(parse_complex("1e-3+2e+1i").unwrap(), c(1e-3, 20.0));
        assert_eq!(parse_complex("3/4").unwrap(), c(0.75, 0.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(format_complex(c(1.0, -2.0)), "1-2i");
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn affine_composition() {
        // p(x) = x^2 + 1, composed with 2x + 1 gives 4x^2 + 4x + 2
        let p = ComplexPoly::from_real(&[1.0, 0.0, 1.0]);
        let q = p.compose_affine(c(2.0, 0.0), c(1.0, 0.0));
        assert_eq!(q, ComplexPoly::from_real(&[2.0, 4.0, 4.0]));
    }

    #[test]
    fn cauchy_radius_bounds_roots() {
        let p = ComplexPoly::from_real(&[-6.0, 11.0, -6.0, 1.0]);
        let b = cauchy_upper_bound(&p);
        assert!(b >= 3.0);
    }
}
