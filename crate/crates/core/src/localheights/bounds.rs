//! Explicit archimedean constants for escape certification.
//!
//! For |x| = X beyond `radius`, every child y of x has |y| > X, and along any
//! path the quantity L_n = log|x_n| + c0 with c0 = log|a_d/b_e| / (d - e)
//! satisfies L_{n+1} = (d/e) L_n + η_n with
//! |η_n| ≤ (1/e)(-log(1 - δ_f(X_n)) - log(1 - δ_g(X_n))). Summing the
//! geometric tail gives the enclosure in [`ArchBounds::tail`].
//!
//! Below the radius, [`ArchBounds::upper`] bounds the escape rate of every
//! path from a point using the majorant U(X) of child moduli.

use crate::algebra::complex::cauchy_radius;
use crate::correspondence::Correspondence;

const MAX_MAJORANT_STEPS: usize = 24;

#[derive(Clone, Debug)]
pub struct ArchBounds {
    d: usize,
    e: usize,
    a_abs: Vec<f64>,
    b_abs: Vec<f64>,
    c0: f64,
    radius: f64,
    x0: f64,
    kappa: f64,
}

impl ArchBounds {
    pub fn new(corr: &Correspondence, lambda: f64) -> Self {
        let a_abs: Vec<f64> = corr.f().coeffs().iter().map(|z| z.norm()).collect();
        let b_abs: Vec<f64> = corr.g().coeffs().iter().map(|z| z.norm()).collect();
        let (d, e) = (corr.d(), corr.e());
        let (ad, be) = (a_abs[d], b_abs[e]);
        // h(X) = |a_d| X^d - Σ_{i<d} |a_i| X^i - Σ_{j≤e} |b_j| X^j
        let mut lower = a_abs[..d].to_vec();
        for (j, &b) in b_abs.iter().enumerate() {
            lower[j] += b;
        }
        let rho_h = cauchy_radius(ad, &lower);
        let rho_g = cauchy_radius(be, &b_abs[..e]);
        let r_star = rho_h.max(rho_g) * (1.0 + 1e-9);
        let radius = (lambda.exp() * 1.01).max(r_star);

        let x0 = cauchy_radius(ad, &a_abs[..d]).max(1.0);
        let c_f = poly_abs(&a_abs, x0) / x0.powi(d as i32);
        let doubled: Vec<f64> = b_abs[..e].iter().map(|b| 2.0 * b).collect();
        let y0 = cauchy_radius(be, &doubled).max(1.0);
        let c_p = poly_abs(&b_abs[..e], y0) / y0.powi(e as i32);
        let k = (c_f / (be - c_p)).powf(1.0 / e as f64);
        let kappa = 0f64.max(k.ln()).max(x0.ln()).max(y0.ln());
        ArchBounds {
            d,
            e,
            a_abs,
            b_abs,
            c0: (ad / be).ln() / (d - e) as f64,
            radius,
            x0,
            kappa,
        }
    }

    /// Certified escape radius (at least exp(λ)·1.01).
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn ratio(&self) -> f64 {
        self.e as f64 / self.d as f64
    }

    pub fn escaped(&self, modulus: f64) -> bool {
        modulus > self.radius
    }

    fn delta_f(&self, x: f64) -> f64 {
        let d = self.d as i32;
        (0..self.d).map(|i| self.a_abs[i] / self.a_abs[self.d] * x.powi(i as i32 - d)).sum()
    }

    fn delta_g(&self, x: f64) -> f64 {
        let e = self.e as i32;
        (0..self.e).map(|j| self.b_abs[j] / self.b_abs[self.e] * x.powi(j as i32 - e)).sum()
    }

    /// Enclosure of the escape rate of any path through a vertex of modulus
    /// `x > radius` reached after a cumulative weight `w` = (e/d)^depth.
    pub fn tail(&self, x: f64, w: f64) -> (f64, f64) {
        let center = w * (x.ln() + self.c0);
        let eta = (-(-self.delta_f(x)).ln_1p() - (-self.delta_g(x)).ln_1p()) / self.e as f64;
        let err = w * eta * self.e as f64 / (self.d - self.e) as f64;
        ((center - err).max(0.0), (center + err).max(0.0))
    }

    /// |y| bound for every child of any point of modulus ≤ x.
    pub fn majorant(&self, x: f64) -> f64 {
        let fx = poly_abs(&self.a_abs, x);
        let mut lower = self.b_abs[..self.e].to_vec();
        lower[0] += fx;
        cauchy_radius(self.b_abs[self.e], &lower) * (1.0 + 1e-12)
    }

    /// Upper bound for the escape rate of every path from a point of modulus
    /// `x`, already multiplied by the weight `w`. Returns 0 when the majorant
    /// shows the forward orbit of the disk is bounded.
    pub fn upper(&self, x: f64, w: f64) -> f64 {
        let tail_const = self.kappa * self.e as f64 / (self.d - self.e) as f64;
        let mut best = f64::INFINITY;
        let mut xk = x;
        let mut wk = w;
        let cap = 1e8 * self.radius.max(self.x0);
        for _ in 0..=MAX_MAJORANT_STEPS {
            best = best.min(wk * (xk.max(self.x0).ln() + tail_const));
            let next = self.majorant(xk);
            if next <= xk {
                return 0.0;
            }
            if !next.is_finite() || xk > cap {
                break;
            }
            xk = next;
            wk *= self.ratio();
        }
        best
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }
}

fn poly_abs(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::complex::ComplexPoly;

    #[test]
    fn y_equals_x_squared_tail_is_exact() {
        let c = Correspondence::new(ComplexPoly::from_real(&[0.0, 0.0, 1.0]), ComplexPoly::from_real(&[0.0, 1.0])).unwrap();
        let b = ArchBounds::new(&c, 4f64.ln());
        let (lo, hi) = b.tail(16.0, 0.25);
        assert!((lo - 2f64.ln()).abs() < 1e-15 && (hi - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn bounded_disk_gives_zero() {
        // y = x^2 / 4: the unit disk maps into itself
        let c = Correspondence::new(ComplexPoly::from_real(&[0.0, 0.0, 0.25]), ComplexPoly::from_real(&[0.0, 1.0])).unwrap();
        let b = ArchBounds::new(&c, 0.0);
        assert_eq!(b.upper(1.0, 1.0), 0.0);
    }
}
