//! The unicritical family y^e = x^p + c over F_p and its period polynomials.
//!
//! Over a field of characteristic p the backward step
//! B(x) = (x^e - c)^{1/p} is single valued, so 0 lies on a critical cycle of
//! length n exactly when B^n(0) = 0. Raising to the p^n-th power clears the
//! roots and gives the recursion for f_n.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::algebra::fp::FpPoly;
use crate::algebra::gf::{least_irreducible, Elt, GaloisField, MAX_FIELD_ORDER};
use crate::algebra::rational::is_prime;
use crate::error::{CorrdynError, Result};

/// Default cap on deg f_n = p^{n-1}.
pub const DEFAULT_DEGREE_CAP: u64 = 60_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct UnicriticalFamily {
    p: u64,
    e: u64,
}

impl UnicriticalFamily {
    pub fn new(p: u64, e: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(CorrdynError::InvalidInput(format!("{p} is not prime")));
        }
        if e == 0 || e >= p {
            return Err(CorrdynError::InvalidInput(format!("need 1 <= e < p, got e={e}, p={p}")));
        }
        Ok(UnicriticalFamily { p, e })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u64 {
        self.e
    }

    fn check_degree(&self, n: u32, cap: u64) -> Result<()> {
        if n == 0 {
            return Ok(());
        }
        let deg = (self.p as u128).checked_pow(n - 1);
        match deg {
            Some(d) if d <= cap as u128 => Ok(()),
            _ => Err(CorrdynError::BudgetExceeded(format!(
                "deg f_{n} = {}^{} exceeds the degree cap {cap}",
                self.p,
                n - 1
            ))),
        }
    }

    /// f_0, ..., f_n.
    pub fn fn_sequence(&self, n: u32, cap: u64) -> Result<Vec<FpPoly>> {
        self.check_degree(n, cap)?;
        let p = self.p;
        let mut out = vec![FpPoly::zero(p)];
        for k in 0..n {
            let lead = FpPoly::monomial(p, 1, p.pow(k) as usize);
            let power = out[k as usize].pow(self.e);
            // c^{p^k} - (-f_k)^e: the sign only matters for odd e
            let next = if self.e.is_multiple_of(2) { lead.sub(&power) } else { lead.add(&power) };
            out.push(next);
        }
        Ok(out)
    }

    /// f_n with f_0 = 0 and f_{k+1} = c^{p^k} - (-f_k)^e, which is
    /// c^{p^k} - f_k^e for even e. The sign keeps the roots equal to the
    /// parameters with B^n(0) = 0 when e is odd.
    pub fn fn_poly(&self, n: u32, cap: u64) -> Result<FpPoly> {
        Ok(self.fn_sequence(n, cap)?.pop().unwrap())
    }

    /// v_pi(f_n), after checking that r is the least index with pi | f_r.
    pub fn valuation_profile(&self, n: u32, r: u32, pi: &FpPoly, cap: u64) -> Result<u32> {
        if r == 0 {
            return Err(CorrdynError::Precondition("r must be at least 1".into()));
        }
        if !pi.is_irreducible()? {
            return Err(CorrdynError::Precondition(format!("{pi} is not irreducible")));
        }
        let seq = self.fn_sequence(n.max(r), cap)?;
        let least = (1..seq.len()).find(|&j| pi.divides(&seq[j]).unwrap_or(false));
        if least != Some(r as usize) {
            let found = match least {
                Some(j) => format!("the least index is {j}"),
                None => format!("pi divides no f_j with j <= {}", n.max(r)),
            };
            return Err(CorrdynError::Precondition(format!("pi is not first a factor of f_{r}: {found}")));
        }
        seq[n as usize].valuation(pi)
    }

    /// rad(f_n) with the factors of f_m, m a proper divisor of n, divided out.
    /// Only divisors matter: a common root of f_n and f_m is a root of f_gcd.
    pub fn has_primitive_prime_factor(&self, n: u32, cap: u64) -> Result<(bool, FpPoly)> {
        if n == 0 {
            return Err(CorrdynError::InvalidInput("n must be at least 1".into()));
        }
        let seq = self.fn_sequence(n, cap)?;
        let mut q = seq[n as usize].radical()?;
        for m in (1..n).filter(|m| n.is_multiple_of(*m)) {
            let g = q.gcd(&seq[m as usize].radical()?)?;
            q = q.div_exact(&g)?;
        }
        let q = q.monic();
        Ok((!q.is_constant(), q))
    }

    /// Least N with p^{n-1} > e^{n-1} p + n p^{1+n/2} for every n ≥ N.
    ///
    /// Squaring removes the half-integer power, so the comparison is exact.
    /// The left side grows like p^n and the right like p^{n/2} n, so once the
    /// inequality holds past the scan window it keeps holding.
    pub fn bound_threshold(&self) -> u32 {
        let mut last_fail = 0;
        for n in 1..=BOUND_SCAN {
            if !self.bound_holds(n) {
                last_fail = n;
            }
        }
        last_fail + 1
    }

    pub fn bound_holds(&self, n: u32) -> bool {
        let p = BigUint::from(self.p);
        let e = BigUint::from(self.e);
        let lhs = p.pow(n - 1);
        let first = e.pow(n - 1) * &p;
        if lhs <= first {
            return false;
        }
        let gap = lhs - first;
        // gap > n p^{1+n/2}  ⇔  gap^2 > n^2 p^{n+2}
        &gap * &gap > BigUint::from(n) * BigUint::from(n) * p.pow(n + 2)
    }

    /// (e^{n-1} p + n p^{1+n/2}) / p^{n-1}, in floating point.
    pub fn bound_ratio(&self, n: u32) -> f64 {
        let (p, e, n) = (self.p as f64, self.e as f64, n as f64);
        let lp = p.ln();
        let a = ((n - 1.0) * e.ln() + lp - (n - 1.0) * lp).exp();
        let b = (n.ln() + (1.0 + n / 2.0) * lp - (n - 1.0) * lp).exp();
        a + b
    }

    /// Least m ≥ 1 with 0 reachable from 0 in m forward steps, by BFS over
    /// the e-valued path tree. Independent of the backward map.
    pub fn critical_period_bfs(&self, field: &GaloisField, c: Elt, max_n: u32) -> Option<u32> {
        let mut level: HashSet<Elt> = HashSet::from([0]);
        for m in 1..=max_n {
            let mut next = HashSet::new();
            for &x in &level {
                let w = field.add(field.pow(x, self.p), c);
                next.extend(field.nth_roots(w, self.e));
            }
            if next.contains(&0) {
                return Some(m);
            }
            level = next;
        }
        None
    }

    /// The cycle 0 = x_0 → ... → x_n = 0 along the backward map, if B^n(0) = 0.
    fn backward_cycle(&self, field: &GaloisField, c: Elt, n: u32) -> Option<Vec<Elt>> {
        let mut back = vec![0];
        for _ in 0..n {
            let x = *back.last().unwrap();
            let w = field.sub(field.pow(x, self.e), c);
            back.push(field.pth_root(w));
        }
        if *back.last().unwrap() != 0 {
            return None;
        }
        back.reverse();
        Some(back)
    }

    /// Parameters c ∈ F_{p^k} with a critical cycle of exact length n.
    ///
    /// Roots of the primitive witness of f_n in F_{p^k} are those of its gcd
    /// with c^{p^k} - c; they are extracted by evaluation on the field.
    pub fn period_search(&self, n: u32, k: u32, cap: u64) -> Result<Vec<PeriodCertificate>> {
        let field = field_for(self.p, k)?;
        let (found, witness) = self.has_primitive_prime_factor(n, cap)?;
        if !found {
            return Ok(vec![]);
        }
        let x = FpPoly::x(self.p);
        let frob = x.pow_mod_big(&BigUint::from(self.p).pow(k), &witness)?;
        let split = witness.gcd(&frob.sub(&x))?;
        let mut out = Vec::new();
        for c in field.elements() {
            if field.eval(&split, c) != 0 {
                continue;
            }
            let cycle = self
                .backward_cycle(&field, c, n)
                .ok_or_else(|| CorrdynError::Precondition("witness root without a cycle".into()))?;
            let cert = PeriodCertificate { p: self.p, e: self.e, k, n, modulus: field.modulus().clone(), c, cycle };
            if !cert.validate()? {
                return Err(CorrdynError::Precondition(format!("certificate failed to validate: {cert}")));
            }
            out.push(cert);
        }
        Ok(out)
    }

    /// Every c ∈ F_{p^k} whose BFS critical period is exactly n.
    pub fn exhaustive_periods(&self, n: u32, k: u32) -> Result<Vec<Elt>> {
        let field = field_for(self.p, k)?;
        Ok(field.elements().filter(|&c| self.critical_period_bfs(&field, c, n) == Some(n)).collect())
    }
}

const BOUND_SCAN: u32 = 200;

fn field_for(p: u64, k: u32) -> Result<GaloisField> {
    let q = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
    if q > MAX_FIELD_ORDER as u128 {
        return Err(CorrdynError::BudgetExceeded(format!("F_{{{p}^{k}}} is too large to enumerate")));
    }
    GaloisField::new(p, k)
}

/// A parameter c ∈ F_{p^k} with its critical cycle of exact length n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodCertificate {
    pub p: u64,
    pub e: u64,
    pub k: u32,
    pub n: u32,
    pub modulus: FpPoly,
    pub c: Elt,
    pub cycle: Vec<Elt>,
}

impl PeriodCertificate {
    /// Rebuilds the field and checks the cycle relation and minimality.
    pub fn validate(&self) -> Result<bool> {
        let fam = UnicriticalFamily::new(self.p, self.e)?;
        let field = GaloisField::new(self.p, self.k)?;
        if *field.modulus() != self.modulus {
            return Ok(false);
        }
        let n = self.n as usize;
        if self.cycle.len() != n + 1 || self.cycle[0] != 0 || self.cycle[n] != 0 {
            return Ok(false);
        }
        if self.cycle.iter().any(|&x| x as u64 >= field.order()) || self.c as u64 >= field.order() {
            return Ok(false);
        }
        for w in self.cycle.windows(2) {
            let lhs = field.pow(w[1], self.e);
            let rhs = field.add(field.pow(w[0], self.p), self.c);
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(fam.critical_period_bfs(&field, self.c, self.n) == Some(self.n))
    }
}

fn digits_text(digits: &[u64]) -> String {
    if digits.is_empty() {
        return "0".into();
    }
    digits.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(":")
}

fn elt_from_digits(p: u64, digits: &[u64]) -> Result<Elt> {
    let mut v: u64 = 0;
    for &d in digits.iter().rev() {
        if d >= p {
            return Err(CorrdynError::Parse(format!("digit {d} out of range mod {p}")));
        }
        v = v * p + d;
    }
    Elt::try_from(v).map_err(|_| CorrdynError::Parse("element too large".into()))
}

fn digits_of(p: u64, mut a: Elt) -> Vec<u64> {
    let mut out = Vec::new();
    while a > 0 {
        out.push(a as u64 % p);
        a /= p as Elt;
    }
    out
}

impl fmt::Display for PeriodCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycle: Vec<String> = self.cycle.iter().map(|&x| digits_text(&digits_of(self.p, x))).collect();
        write!(
            f,
            "{},{},{},{},modulus={},c={},cycle={}",
            self.p,
            self.e,
            self.k,
            self.n,
            digits_text(self.modulus.coeffs()),
            digits_text(&digits_of(self.p, self.c)),
            cycle.join(";")
        )
    }
}

impl FromStr for PeriodCertificate {
    type Err = CorrdynError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || CorrdynError::Parse(format!("malformed certificate `{s}`"));
        let parts: Vec<&str> = s.trim().split(',').collect();
        if parts.len() != 7 {
            return Err(bad());
        }
        let num = |t: &str| t.parse::<u64>().map_err(|_| bad());
        let (p, e, k, n) = (num(parts[0])?, num(parts[1])?, num(parts[2])? as u32, num(parts[3])? as u32);
        let field_value = |t: &str, key: &str| -> Result<Vec<u64>> {
            let v = t.strip_prefix(key).ok_or_else(bad)?;
            v.split(':').map(|d| d.parse::<u64>().map_err(|_| bad())).collect()
        };
        let modulus = FpPoly::new(p, field_value(parts[4], "modulus=")?);
        let c = elt_from_digits(p, &field_value(parts[5], "c=")?)?;
        let cycle = parts[6]
            .strip_prefix("cycle=")
            .ok_or_else(bad)?
            .split(';')
            .map(|t| {
                let digits: Vec<u64> = t.split(':').map(|d| d.parse::<u64>().map_err(|_| bad())).collect::<Result<_>>()?;
                elt_from_digits(p, &digits)
            })
            .collect::<Result<Vec<Elt>>>()?;
        Ok(PeriodCertificate { p, e, k, n, modulus, c, cycle })
    }
}

/// The modulus used for F_{p^k}: the least monic irreducible of degree k.
pub fn field_modulus(p: u64, k: u32) -> Result<FpPoly> {
    least_irreducible(p, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam() -> UnicriticalFamily {
        UnicriticalFamily::new(3, 2).unwrap()
    }

    #[test]
    fn recursion_examples() {
        let f = fam();
        assert_eq!(f.fn_poly(1, DEFAULT_DEGREE_CAP).unwrap(), FpPoly::x(3));
        assert_eq!(f.fn_poly(2, DEFAULT_DEGREE_CAP).unwrap(), FpPoly::new(3, vec![0, 0, 2, 1]));
        assert_eq!(
            f.fn_poly(3, DEFAULT_DEGREE_CAP).unwrap(),
            FpPoly::new(3, vec![0, 0, 0, 0, 2, 2, 2, 0, 0, 1])
        );
        assert!(f.fn_poly(12, DEFAULT_DEGREE_CAP).unwrap_err().is_budget());
    }

    #[test]
    fn valuation_examples() {
        let f = fam();
        let c = FpPoly::x(3);
        assert_eq!(f.valuation_profile(2, 1, &c, DEFAULT_DEGREE_CAP).unwrap(), 2);
        assert_eq!(f.valuation_profile(3, 1, &c, DEFAULT_DEGREE_CAP).unwrap(), 4);
        let c1 = FpPoly::new(3, vec![2, 1]);
        assert_eq!(f.valuation_profile(3, 2, &c1, DEFAULT_DEGREE_CAP).unwrap(), 0);
        let err = f.valuation_profile(3, 1, &c1, DEFAULT_DEGREE_CAP).unwrap_err();
        assert!(err.to_string().contains("least index is 2"), "{err}");
    }

    #[test]
    fn primitive_examples() {
        let f = fam();
        assert_eq!(f.has_primitive_prime_factor(2, DEFAULT_DEGREE_CAP).unwrap(), (true, FpPoly::new(3, vec![2, 1])));
        assert_eq!(f.has_primitive_prime_factor(1, DEFAULT_DEGREE_CAP).unwrap(), (true, FpPoly::x(3)));
    }

    #[test]
    fn threshold_scan() {
        let f = fam();
        assert!(!f.bound_holds(8) && f.bound_holds(9));
        assert!(f.bound_ratio(50) < 1e-6);
    }

    #[test]
    fn period_examples() {
        let f = fam();
        let certs = f.period_search(2, 1, DEFAULT_DEGREE_CAP).unwrap();
        assert_eq!(certs.len(), 1);
        assert_eq!(certs[0].c, 1);
        assert_eq!(certs[0].cycle, vec![0, 2, 0]);
        let one = f.period_search(1, 1, DEFAULT_DEGREE_CAP).unwrap();
        assert_eq!(one.iter().map(|c| c.c).collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn certificate_round_trip() {
        let certs = fam().period_search(3, 2, DEFAULT_DEGREE_CAP).unwrap();
        for c in certs {
            let back: PeriodCertificate = c.to_string().parse().unwrap();
            assert_eq!(back, c);
            assert!(back.validate().unwrap());
        }
    }
}
