//! Exact rationals, places of ℚ and p-adic valuations.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{CorrdynError, Result};

/// Exact rational scalar (always in lowest terms, positive denominator).
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `n`, `n/d` or a terminating decimal such as `-0.25`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || CorrdynError::Parse(format!("bad rational `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let ip_abs = ip.trim_start_matches(['-', '+']);
        let ip_val: BigInt = if ip_abs.is_empty() { BigInt::zero() } else { ip_abs.parse().map_err(|_| bad())? };
        let fp_val: BigInt = fp.parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), fp.len());
        let mag = BigRational::new(ip_val * &den + fp_val, den);
        return Ok(if neg { -mag } else { mag });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Natural log of |n| for a big integer, accurate to double precision.
pub fn log_abs_bigint(n: &BigInt) -> f64 {
    assert!(!n.is_zero(), "log of zero");
    let bits = n.bits();
    if bits <= 1000 {
        return n.abs().to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (n.abs() >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// log |x| for a nonzero rational.
pub fn log_abs(x: &Rational) -> f64 {
    log_abs_bigint(x.numer()) - log_abs_bigint(x.denom())
}

pub fn to_f64(x: &Rational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() && d != 0.0 => {
            let v = n / d;
            if v.is_finite() && v != 0.0 {
                return v;
            }
        }
        _ => {}
    }
    let sign = if x.is_negative() { -1.0 } else { 1.0 };
    sign * log_abs(x).exp()
}

/// A place of ℚ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Archimedean,
    PAdic(u64),
}

impl Place {
    pub fn padic(p: u64) -> Result<Place> {
        if is_prime(p) {
            Ok(Place::PAdic(p))
        } else {
            Err(CorrdynError::InvalidInput(format!("{p} is not prime")))
        }
    }

    pub fn is_archimedean(&self) -> bool {
        matches!(self, Place::Archimedean)
    }

    pub fn prime(&self) -> Option<u64> {
        match self {
            Place::Archimedean => None,
            Place::PAdic(p) => Some(*p),
        }
    }

    /// log |x|_v, or `-inf` for x = 0.
    pub fn log_abs(&self, x: &Rational) -> f64 {
        if x.is_zero() {
            return f64::NEG_INFINITY;
        }
        match self {
            Place::Archimedean => log_abs(x),
            Place::PAdic(p) => match padic_valuation(x, *p) {
                Valuation::Finite(v) => -to_f64(&v) * (*p as f64).ln(),
                Valuation::Infinity => f64::NEG_INFINITY,
            },
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Archimedean => write!(f, "inf"),
            Place::PAdic(p) => write!(f, "{p}"),
        }
    }
}

/// A valuation: a rational number or the +∞ of the zero element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(Rational),
    Infinity,
}

impl Valuation {
    pub fn int(v: i64) -> Self {
        Valuation::Finite(rat_int(v))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Valuation::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn add(&self, other: &Valuation) -> Valuation {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }

    /// Multiply by a non-negative rational (0·∞ is taken as ∞ so that v(0^k) stays ∞ for k ≥ 1).
    pub fn scale(&self, k: &Rational) -> Valuation {
        match self {
            Valuation::Finite(a) => Valuation::Finite(a * k),
            Valuation::Infinity => Valuation::Infinity,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinity) => Ordering::Less,
            (Valuation::Infinity, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinity, Valuation::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{}", format_rational(v)),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

fn int_valuation(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// v_p(x), with v_p(0) = +∞.
pub fn padic_valuation(x: &Rational, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinity;
    }
    Valuation::int(int_valuation(x.numer(), p) - int_valuation(x.denom(), p))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k.saturating_mul(k) <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| is_prime(k)).collect()
}

/// Prime divisors of |n| by trial division; intended for desk-scale inputs.
pub fn prime_divisors(n: &BigInt) -> Result<Vec<u64>> {
    let mut m = n.abs();
    let mut out = Vec::new();
    if m.is_zero() {
        return Ok(out);
    }
    let mut k: u64 = 2;
    while (BigInt::from(k) * BigInt::from(k)) <= m {
        if k > 50_000_000 {
            return Err(CorrdynError::BudgetExceeded(format!(
                "trial division of {n} beyond {k}"
            )));
        }
        let kb = BigInt::from(k);
        if (&m % &kb).is_zero() {
            out.push(k);
            while (&m % &kb).is_zero() {
                m /= &kb;
            }
        }
        k += if k == 2 { 1 } else { 2 };
    }
    if m > BigInt::one() {
        let last = m
            .to_u64()
            .ok_or_else(|| CorrdynError::BudgetExceeded("prime cofactor exceeds 64 bits".into()))?;
        out.push(last);
    }
    Ok(out)
}

/// Rational r with r^n = x, if one exists.
pub fn rational_nth_root(x: &Rational, n: u32) -> Option<Rational> {
    if n == 0 {
        return None;
    }
    if x.is_zero() {
        return Some(Rational::zero());
    }
    if x.is_negative() && n.is_multiple_of(2) {
        return None;
    }
    let num = int_nth_root(&x.numer().abs(), n)?;
    let den = int_nth_root(x.denom(), n)?;
    let r = BigRational::new(num, den);
    Some(if x.is_negative() { -r } else { r })
}

fn int_nth_root(x: &BigInt, n: u32) -> Option<BigInt> {
    let r = x.nth_root(n);
    if num_traits::pow(r.clone(), n as usize) == *x {
        Some(r)
    } else {
        None
    }
}

pub fn sign_of(x: &Rational) -> Sign {
    x.numer().sign()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(padic_valuation(&rat_int(9), 3), Valuation::int(2));
        assert_eq!(padic_valuation(&rat_int(0), 5), Valuation::Infinity);
        assert_eq!(padic_valuation(&rat(4, 6), 3), Valuation::int(-1));
    }

    #[test]
    fn valuation_order_puts_infinity_last() {
        assert!(Valuation::int(1_000_000) < Valuation::Infinity);
        assert!(Valuation::Finite(rat(-1, 2)) < Valuation::int(0));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert_eq!(format_rational(&rat(4, 2)), "2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn big_logs() {
        let big = num_traits::pow(BigInt::from(10), 400);
        assert!((log_abs_bigint(&big) - 400.0 * 10f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn divisors() {
        assert_eq!(prime_divisors(&BigInt::from(360)).unwrap(), vec![2, 3, 5]);
        assert_eq!(prime_divisors(&BigInt::from(-97)).unwrap(), vec![97]);
        assert!(prime_divisors(&BigInt::from(1)).unwrap().is_empty());
    }

    #[test]
    fn nth_roots() {
        assert_eq!(rational_nth_root(&rat(8, 27), 3), Some(rat(2, 3)));
        assert_eq!(rational_nth_root(&rat(-8, 27), 3), Some(rat(-2, 3)));
        assert_eq!(rational_nth_root(&rat(2, 1), 2), None);
        assert_eq!(rational_nth_root(&rat(-4, 1), 2), None);
    }

    #[test]
    fn place_logs() {
        let p3 = Place::padic(3).unwrap();
        assert!((p3.log_abs(&rat(3, 2)) + 3f64.ln()).abs() < 1e-15);
        assert!(Place::padic(4).is_err());
    }
}
