//! Local dynamics at one place: λ(C, v), escape rates and their minima.
//!
//! Archimedean escape rates are certified with explicit tail bounds, so every
//! interval returned here is a rigorous enclosure up to floating-point
//! rounding in the final logarithms. p-adic computations track exact
//! valuations through Newton polygons.

use std::fmt;

use num_traits::Zero;

use crate::algebra::complex::ComplexPoly;
use crate::algebra::rational::{padic_valuation, to_f64, Place, Rational, Valuation};
use crate::correspondence::{Correspondence, RationalCorrespondence};
use crate::error::{CorrdynError, Result};

pub mod bounds;
pub mod green;
pub mod mc;
pub mod padic;

pub use bounds::ArchBounds;
pub use green::{green, green_min, lambda_capital, BranchPolicy, GreenOutcome, GreenStart, PathSpec, SearchConfig};
pub use mc::{expected_green_mc, McEstimate};
pub use padic::{green_min_padic, lambda_capital_padic, PadicStart};

/// A certified enclosure of an escape rate or of Λ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EscapeInterval {
    pub lo: f64,
    pub hi: f64,
    pub depth: usize,
    /// Set when a p-adic Newton-polygon tie forced a conservative widening.
    pub tie: bool,
}

impl EscapeInterval {
    pub fn new(lo: f64, hi: f64, depth: usize) -> Self {
        let lo = lo.max(0.0);
        EscapeInterval { lo, hi: hi.max(lo), depth, tie: false }
    }

    pub fn point(v: f64, depth: usize) -> Self {
        Self::new(v, v, depth)
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64, slack: f64) -> bool {
        x >= self.lo - slack && x <= self.hi + slack
    }

    /// Interval sum, used for heights.
    pub fn sum(&self, o: &EscapeInterval) -> EscapeInterval {
        EscapeInterval {
            lo: self.lo + o.lo,
            hi: self.hi + o.hi,
            depth: self.depth.max(o.depth),
            tie: self.tie || o.tie,
        }
    }

    /// Interval max, used for Λ over critical points.
    pub fn max(&self, o: &EscapeInterval) -> EscapeInterval {
        EscapeInterval {
            lo: self.lo.max(o.lo),
            hi: self.hi.max(o.hi),
            depth: self.depth.max(o.depth),
            tie: self.tie || o.tie,
        }
    }

    pub fn zero(depth: usize) -> Self {
        Self::point(0.0, depth)
    }
}

impl fmt::Display for EscapeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lo={},hi={},depth={},tie={}", self.lo, self.hi, self.depth, self.tie)
    }
}

/// Which places receive the log(2d) correction in λ.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LambdaConvention {
    /// log(2d) at archimedean places, 0 at p-adic places.
    #[default]
    ArchimedeanCorrection,
    /// The flipped labels: log(2d) at p-adic places, 0 at the archimedean one.
    PadicCorrection,
}

/// Coefficient data tagged by kind, so λ can reject mismatched places.
#[derive(Clone, Copy, Debug)]
pub enum Coefficients<'a> {
    Complex(&'a Correspondence),
    Rational(&'a RationalCorrespondence),
}

/// λ(C, v) together with the derived certified escape radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalParams {
    pub lambda: f64,
    pub escape_radius: f64,
    pub place: Place,
}

/// log⁺ of the max of the three ratio families, from log-absolute values.
fn log_plus_max(d: usize, e: usize, log_a: &[f64], log_b: &[f64]) -> f64 {
    let (ld, le) = (log_a[d], log_b[e]);
    let mut m = 0.0f64;
    for (i, &la) in log_a.iter().enumerate().take(d) {
        if la.is_finite() {
            m = m.max((la - ld) / (d - i) as f64);
        }
    }
    for (j, &lb) in log_b.iter().enumerate().take(e) {
        if lb.is_finite() {
            m = m.max((lb - le) * e as f64 / (d * (e - j)) as f64);
        }
    }
    m.max((le - ld) * e as f64 / (d - e) as f64)
}

fn correction(d: usize, place: Place, conv: LambdaConvention) -> f64 {
    let arch = place.is_archimedean();
    let applies = match conv {
        LambdaConvention::ArchimedeanCorrection => arch,
        LambdaConvention::PadicCorrection => !arch,
    };
    if applies {
        (2.0 * d as f64).ln()
    } else {
        0.0
    }
}

/// λ(C, v) under the proof-consistent convention.
pub fn lambda_local(c: Coefficients<'_>, v: Place) -> Result<f64> {
    lambda_local_with(c, v, LambdaConvention::default())
}

pub fn lambda_local_with(c: Coefficients<'_>, v: Place, conv: LambdaConvention) -> Result<f64> {
    match (c, v) {
        (Coefficients::Complex(corr), Place::Archimedean) => {
            Ok(lambda_from_complex(corr.f(), corr.g()) + correction(corr.d(), v, conv))
        }
        (Coefficients::Rational(corr), Place::Archimedean) => {
            let cc = corr.to_complex();
            Ok(lambda_from_complex(cc.f(), cc.g()) + correction(corr.d(), v, conv))
        }
        (Coefficients::Rational(corr), Place::PAdic(p)) => {
            Ok(to_f64(&lambda_padic_valuation(corr, p)) * (p as f64).ln() + correction(corr.d(), v, conv))
        }
        (Coefficients::Complex(_), Place::PAdic(p)) => Err(CorrdynError::WrongPlace(format!(
            "complex coefficients cannot be evaluated at the {p}-adic place"
        ))),
    }
}

fn lambda_from_complex(f: &ComplexPoly, g: &ComplexPoly) -> f64 {
    let la: Vec<f64> = f.coeffs().iter().map(|z| z.norm().ln()).collect();
    let lb: Vec<f64> = g.coeffs().iter().map(|z| z.norm().ln()).collect();
    log_plus_max(f.degree(), g.degree(), &la, &lb)
}

/// The p-adic λ without correction, in units of log p (an exact rational).
pub fn lambda_padic_valuation(corr: &RationalCorrespondence, p: u64) -> Rational {
    let (d, e) = (corr.d(), corr.e());
    let vf: Vec<Valuation> = corr.f().coeffs().iter().map(|c| padic_valuation(c, p)).collect();
    let vg: Vec<Valuation> = corr.g().coeffs().iter().map(|c| padic_valuation(c, p)).collect();
    let vd = vf[d].finite().unwrap().clone();
    let ve = vg[e].finite().unwrap().clone();
    let mut m = Rational::zero();
    let int = |k: usize| Rational::from_integer(k.into());
    for (i, v) in vf.iter().enumerate().take(d) {
        if let Some(v) = v.finite() {
            m = m.max((&vd - v) / int(d - i));
        }
    }
    for (j, v) in vg.iter().enumerate().take(e) {
        if let Some(v) = v.finite() {
            m = m.max((&ve - v) * int(e) / int(d * (e - j)));
        }
    }
    m.max((&vd - &ve) * int(e) / int(d - e))
}

/// LocalParams at the archimedean place, with the rigorous escape radius.
pub fn local_params(corr: &Correspondence) -> Result<LocalParams> {
    let lambda = lambda_local(Coefficients::Complex(corr), Place::Archimedean)?;
    let b = ArchBounds::new(corr, lambda);
    Ok(LocalParams { lambda, escape_radius: b.radius(), place: Place::Archimedean })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::pure_power;

    #[test]
    fn lambda_examples() {
        let nf = pure_power(3, 2).unwrap();
        let c = nf.correspondence();
        let l = lambda_local(Coefficients::Complex(&c), Place::Archimedean).unwrap();
        assert!((l - (27.0f64 / 2.0).ln()).abs() < 1e-12, "{l}");
        let rc = RationalCorrespondence::parse("f=0,0,0,1/3;g=0,0,1/2").unwrap();
        assert_eq!(lambda_local(Coefficients::Rational(&rc), Place::PAdic(7)).unwrap(), 0.0);
        assert_eq!(lambda_local(Coefficients::Rational(&rc), Place::PAdic(3)).unwrap(), 0.0);
        assert!(lambda_local(Coefficients::Complex(&c), Place::PAdic(3)).is_err());
    }

    #[test]
    fn flipped_convention() {
        let rc = RationalCorrespondence::parse("f=0,0,0,1/3;g=0,0,1/2").unwrap();
        let arch = lambda_local_with(Coefficients::Rational(&rc), Place::Archimedean, LambdaConvention::PadicCorrection).unwrap();
        assert!((arch - (9.0f64 / 4.0).ln()).abs() < 1e-12);
        let p7 = lambda_local_with(Coefficients::Rational(&rc), Place::PAdic(7), LambdaConvention::PadicCorrection).unwrap();
        assert!((p7 - 6f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn interval_text() {
        let i = EscapeInterval::new(0.0, 0.5, 3);
        assert_eq!(i.to_string(), "lo=0,hi=0.5,depth=3,tie=false");
    }
}
