//! Dense polynomials with exact rational coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::complex::{roots_complex, ComplexPoly, ROOT_TOL};
use super::rational::{format_rational, parse_rational, prime_divisors, to_f64, Rational};
use crate::error::{CorrdynError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&k| BigRational::from_integer(BigInt::from(k))).collect())
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: vec![] }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn integral(&self) -> Self {
        let mut out = vec![Rational::zero()];
        for (i, c) in self.coeffs.iter().enumerate() {
            out.push(c / BigRational::from_integer(BigInt::from(i + 1)));
        }
        Self::new(out)
    }

    pub fn from_roots(roots: &[Rational]) -> Self {
        roots.iter().fold(Self::constant(Rational::one()), |acc, r| {
            acc.mul(&Self::new(vec![-r.clone(), Rational::one()]))
        })
    }

    /// x ↦ self(scale·x + shift)
    pub fn compose_affine(&self, scale: &Rational, shift: &Rational) -> Self {
        let lin = Self::new(vec![shift.clone(), scale.clone()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc.mul(&lin).add(&Self::constant(c.clone())))
    }

    /// Synthetic division by (x - r); returns quotient and remainder.
    pub fn deflate(&self, r: &Rational) -> (Self, Rational) {
        if self.is_zero() {
            return (Self::zero(), Rational::zero());
        }
        let n = self.coeffs.len();
        let mut q = vec![Rational::zero(); n - 1];
        let mut acc = Rational::zero();
        for i in (0..n).rev() {
            acc = acc * r + &self.coeffs[i];
            if i > 0 {
                q[i - 1] = acc.clone();
            }
        }
        (Self::new(q), acc)
    }

    pub fn to_complex(&self) -> ComplexPoly {
        ComplexPoly::new(self.coeffs.iter().map(|c| Complex64::new(to_f64(c), 0.0)).collect())
    }

    /// Integer polynomial with the same roots (denominators cleared).
    fn primitive_integer(&self) -> Vec<BigInt> {
        let l = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        self.coeffs.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect()
    }

    /// All rational roots with multiplicity, ascending.
    ///
    /// Candidates come from floating-point roots: a rational root n/q has q
    /// dividing the leading coefficient of the cleared polynomial, so each
    /// near-real approximation is tested exactly against every such q.
    pub fn rational_roots(&self) -> Result<Vec<Rational>> {
        let Some(deg) = self.degree() else {
            return Err(CorrdynError::ZeroPolynomial);
        };
        let mut out = Vec::new();
        let mut p = self.clone();
        while p.coeff(0).is_zero() && p.degree().unwrap_or(0) > 0 {
            out.push(Rational::zero());
            p = RatPoly::new(p.coeffs[1..].to_vec());
        }
        if p.degree().unwrap_or(0) == 0 {
            out.sort();
            return Ok(out);
        }
        let ints = p.primitive_integer();
        let lead = ints.last().unwrap().abs();
        let dens = divisors(&lead)?;
        let approx = roots_complex(&p.to_complex(), ROOT_TOL.max(1e-8))?;
        let mut tried: Vec<Rational> = Vec::new();
        for z in approx {
            if z.im.abs() > 1e-6 * (1.0 + z.re.abs()) {
                continue;
            }
            for q in &dens {
                let qf = q.to_f64().unwrap_or(f64::INFINITY);
                let num = (z.re * qf).round();
                if !num.is_finite() {
                    continue;
                }
                let cand = BigRational::new(BigInt::from(num as i128), q.clone());
                if tried.contains(&cand) {
                    continue;
                }
                tried.push(cand.clone());
                loop {
                    let (quot, rem) = p.deflate(&cand);
                    if !rem.is_zero() {
                        break;
                    }
                    out.push(cand.clone());
                    p = quot;
                    if p.degree().unwrap_or(0) == 0 {
                        break;
                    }
                }
            }
        }
        debug_assert!(out.len() <= deg);
        out.sort();
        Ok(out)
    }

    pub fn parse_list(s: &str) -> Result<Self> {
        let coeffs = s.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(coeffs))
    }
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let mut out = vec![BigInt::one()];
    let mut m = n.abs();
    for p in prime_divisors(n)? {
        let pb = BigInt::from(p);
        let mut k = 0;
        while (&m % &pb).is_zero() {
            m /= &pb;
            k += 1;
        }
        let base = out.clone();
        let mut pw = BigInt::one();
        for _ in 0..k {
            pw *= &pb;
            out.extend(base.iter().map(|d| d * &pw));
        }
    }
    out.sort();
    Ok(out)
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    #[test]
    fn rational_roots_with_multiplicity() {
        // (2x - 1)^2 (x + 3) x
        let p = RatPoly::from_ints(&[-1, 2]).mul(&RatPoly::from_ints(&[-1, 2])).mul(&RatPoly::from_ints(&[3, 1])).mul(&RatPoly::from_ints(&[0, 1]));
        let r = p.rational_roots().unwrap();
        assert_eq!(r, vec![rat(-3, 1), rat(0, 1), rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn irrational_roots_skipped() {
        let r = RatPoly::from_ints(&[-2, 0, 1]).rational_roots().unwrap();
        assert!(r.is_empty());
    }

    #[test]
    fn integral_and_derivative() {
        let p = RatPoly::from_roots(&[rat(1, 1), rat(-1, 1)]);
        let f = p.integral();
        assert_eq!(f.derivative(), p);
        assert_eq!(f.coeff(3), rat(1, 3));
    }

    #[test]
    fn affine() {
        let p = RatPoly::from_ints(&[0, 0, 1]);
        assert_eq!(p.compose_affine(&rat(2, 1), &rat(1, 1)), RatPoly::from_ints(&[1, 4, 4]));
    }
}
