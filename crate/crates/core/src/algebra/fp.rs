//! Dense univariate polynomials over a prime field F_p.
//!
//! Residues are stored as `u64` in `[0, p)`. Multiplication is schoolbook with
//! lazy reduction into `u128` accumulators, division and gcd are the classical
//! quadratic algorithms. At the degrees this crate needs (a few times 10^4) that
//! is comfortably fast, so no FFT or half-gcd is provided.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::rational::is_prime;
use crate::error::{CorrdynError, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut a: u64, mut k: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while k > 0 {
        if k & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        k >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> Result<u64> {
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return Err(CorrdynError::InvalidInput(format!("{a} is not invertible mod {p}")));
    }
    Ok(s0.rem_euclid(p as i128) as u64)
}

impl FpPoly {
    /// Builds a polynomial, reducing coefficients mod p and trimming leading zeros.
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % p).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }

    pub fn from_i64(p: u64, coeffs: &[i64]) -> Self {
        Self::new(p, coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect())
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: vec![] }
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    pub fn constant(p: u64, c: u64) -> Self {
        Self::new(p, vec![c])
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    /// c·x^k
    pub fn monomial(p: u64, c: u64, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        Self::new(p, v)
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            Err(CorrdynError::ModulusMismatch(self.p, other.p))
        } else {
            Ok(())
        }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.leading(), self.p).expect("nonzero residue mod a prime");
        self.scale(inv)
    }

    pub fn scale(&self, k: u64) -> Self {
        Self::new(self.p, self.coeffs.iter().map(|&c| mul_mod(c, k, self.p)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.p, self.coeffs.iter().map(|&c| (self.p - c) % self.p).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "modulus mismatch");
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(self.p, (0..n).map(|i| (self.coeff(i) + other.coeff(i)) % self.p).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "modulus mismatch");
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            self.p,
            (0..n).map(|i| (self.coeff(i) + self.p - other.coeff(i)) % self.p).collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "modulus mismatch");
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p;
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        if p < (1 << 32) {
            // products fit in 64 bits, so a u128 accumulator never overflows here
            let mut acc = vec![0u128; n];
            for (i, &a) in self.coeffs.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in other.coeffs.iter().enumerate() {
                    acc[i + j] += (a * b) as u128;
                }
            }
            Self::new(p, acc.into_iter().map(|c| (c % p as u128) as u64).collect())
        } else {
            let mut out = vec![0u64; n];
            for (i, &a) in self.coeffs.iter().enumerate() {
                for (j, &b) in other.coeffs.iter().enumerate() {
                    out[i + j] = (out[i + j] + mul_mod(a, b, p)) % p;
                }
            }
            Self::new(p, out)
        }
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.p);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.check(divisor)?;
        if divisor.is_zero() {
            return Err(CorrdynError::ZeroPolynomial);
        }
        let p = self.p;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((Self::zero(p), self.clone()));
        }
        let inv = inv_mod(divisor.leading(), p)?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = mul_mod(rem[i + dd], inv, p);
            quot[i] = c;
            if c == 0 {
                continue;
            }
            let neg = p - c;
            if p < (1 << 32) {
                for (j, &b) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] = (rem[i + j] + neg * b) % p;
                }
            } else {
                for (j, &b) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] = (rem[i + j] + mul_mod(neg, b, p)) % p;
                }
            }
        }
        rem.truncate(dd);
        Ok((Self::new(p, quot), Self::new(p, rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(CorrdynError::Precondition("division is not exact".into()));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Self) -> Result<bool> {
        Ok(other.rem(self)?.is_zero())
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        Self::new(
            p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, (i as u64) % p, p))
                .collect(),
        )
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, self.p) + c) % self.p)
    }

    /// Polynomial composition self(other).
    pub fn compose(&self, other: &Self) -> Self {
        let mut acc = Self::zero(self.p);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(other).add(&Self::constant(self.p, c));
        }
        acc
    }

    /// self^k mod m, with an arbitrary-size exponent.
    pub fn pow_mod_big(&self, k: &BigUint, m: &Self) -> Result<Self> {
        let mut base = self.rem(m)?;
        let mut acc = Self::one(self.p).rem(m)?;
        for i in 0..k.bits() {
            if k.bit(i) {
                acc = acc.mul(&base).rem(m)?;
            }
            base = base.mul(&base).rem(m)?;
        }
        Ok(acc)
    }

    pub fn pow_mod(&self, k: u64, m: &Self) -> Result<Self> {
        self.pow_mod_big(&BigUint::from(k), m)
    }

    /// Monic gcd by the Euclidean algorithm; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn lcm(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.p));
        }
        let g = self.gcd(other)?;
        Ok(self.div_exact(&g)?.mul(other).monic())
    }

    /// The p-th root of a polynomial whose derivative vanishes: a(c) = q(c^p) gives q.
    /// Coefficients are their own p-th roots in F_p.
    pub fn pth_root(&self) -> Result<Self> {
        let p = self.p as usize;
        if self.coeffs.iter().enumerate().any(|(i, &c)| c != 0 && i % p != 0) {
            return Err(CorrdynError::Precondition("not a p-th power".into()));
        }
        Ok(Self::new(self.p, self.coeffs.iter().step_by(p).copied().collect()))
    }

    /// Product of the distinct monic irreducible factors.
    pub fn radical(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(CorrdynError::ZeroPolynomial);
        }
        if self.is_constant() {
            return Ok(Self::one(self.p));
        }
        let a = self.monic();
        let da = a.derivative();
        if da.is_zero() {
            return a.pth_root()?.radical();
        }
        let g = a.gcd(&da)?;
        let squarefree_part = a.div_exact(&g)?;
        if g.is_constant() {
            return Ok(squarefree_part);
        }
        squarefree_part.lcm(&g.radical()?)
    }

    pub fn is_squarefree(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(CorrdynError::ZeroPolynomial);
        }
        let d = self.derivative();
        if d.is_zero() {
            return Ok(self.is_constant());
        }
        Ok(self.gcd(&d)?.is_constant())
    }

    /// Number of times `pi` divides `self`; `pi` must be non-constant.
    pub fn valuation(&self, pi: &Self) -> Result<u32> {
        if self.is_zero() {
            return Err(CorrdynError::ZeroPolynomial);
        }
        if pi.is_constant() {
            return Err(CorrdynError::InvalidInput("valuation at a constant".into()));
        }
        let mut a = self.clone();
        let mut v = 0;
        loop {
            let (q, r) = a.div_rem(pi)?;
            if !r.is_zero() {
                return Ok(v);
            }
            a = q;
            v += 1;
        }
    }

    pub fn is_irreducible(&self) -> Result<bool> {
        let Some(n) = self.degree() else {
            return Err(CorrdynError::ZeroPolynomial);
        };
        if n == 0 {
            return Ok(false);
        }
        let f = self.monic();
        let x = Self::x(self.p);
        let mut h = x.rem(&f)?;
        for k in 1..=n {
            h = h.pow_mod(self.p, &f)?;
            let g = h.sub(&x).gcd(&f)?;
            if k < n && !g.is_constant() {
                return Ok(false);
            }
            if k == n {
                return Ok(g == f);
            }
        }
        unreachable!()
    }

    /// Full factorization into monic irreducibles with multiplicities, sorted.
    pub fn factor(&self) -> Result<Vec<(FpPoly, u32)>> {
        if self.is_zero() {
            return Err(CorrdynError::ZeroPolynomial);
        }
        let mut out = Vec::new();
        for (sf, mult) in self.squarefree_decomposition()? {
            for (dd, deg) in sf.distinct_degree()? {
                for irr in dd.equal_degree(deg)? {
                    out.push((irr, mult));
                }
            }
        }
        out.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then(a.0.coeffs.cmp(&b.0.coeffs)));
        Ok(out)
    }

    /// Pairs (s_i, i) with self = lc · Π s_i^i, each s_i squarefree and coprime.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(FpPoly, u32)>> {
        let p = self.p;
        let mut out: Vec<(FpPoly, u32)> = Vec::new();
        let mut stack = vec![(self.monic(), 1u32)];
        while let Some((a, scale)) = stack.pop() {
            if a.is_constant() {
                continue;
            }
            let da = a.derivative();
            if da.is_zero() {
                stack.push((a.pth_root()?, scale * p as u32));
                continue;
            }
            // Yun-style splitting over the separable part
            let mut c = a.gcd(&da)?;
            let mut w = a.div_exact(&c)?;
            let mut i = 1u32;
            while !w.is_constant() {
                let y = w.gcd(&c)?;
                let z = w.div_exact(&y)?;
                if !z.is_constant() {
                    out.push((z, i * scale));
                }
                i += 1;
                w = y;
                c = c.div_exact(&w)?;
            }
            if !c.is_constant() {
                stack.push((c.pth_root()?, scale * p as u32));
            }
        }
        // merge equal exponents that came from different branches
        out.sort_by_key(|(_, m)| *m);
        let mut merged: Vec<(FpPoly, u32)> = Vec::new();
        for (f, m) in out {
            match merged.last_mut() {
                Some((g, k)) if *k == m => *g = g.mul(&f),
                _ => merged.push((f, m)),
            }
        }
        Ok(merged)
    }

    /// For a squarefree monic polynomial, pairs (product of its degree-k factors, k).
    pub fn distinct_degree(&self) -> Result<Vec<(FpPoly, usize)>> {
        let mut out = Vec::new();
        let mut f = self.monic();
        let x = Self::x(self.p);
        let mut h = x.rem(&f)?;
        let mut k = 0;
        while let Some(deg) = f.degree() {
            if deg < 2 * (k + 1) {
                break;
            }
            k += 1;
            h = h.pow_mod(self.p, &f)?;
            let g = h.sub(&x).gcd(&f)?;
            if !g.is_constant() {
                f = f.div_exact(&g)?;
                h = h.rem(&f)?;
                out.push((g, k));
            }
        }
        if let Some(deg) = f.degree() {
            if deg > 0 {
                out.push((f, deg));
            }
        }
        Ok(out)
    }

    /// Splits a squarefree product of degree-k irreducibles (Cantor–Zassenhaus).
    pub fn equal_degree(&self, k: usize) -> Result<Vec<FpPoly>> {
        let f = self.monic();
        let n = f.degree().unwrap_or(0);
        if n == k {
            return Ok(vec![f]);
        }
        if n == 0 {
            return Ok(vec![]);
        }
        let p = self.p;
        let mut rng = ChaCha8Rng::seed_from_u64(0xc0ffee ^ n as u64);
        let q = BigUint::from(p).pow(k as u32);
        loop {
            let r = Self::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
            if r.is_constant() {
                continue;
            }
            let candidate = if p == 2 {
                // trace map r + r^2 + ... + r^(2^(k-1))
                let mut t = r.rem(&f)?;
                let mut acc = t.clone();
                for _ in 1..k {
                    t = t.mul(&t).rem(&f)?;
                    acc = acc.add(&t);
                }
                acc
            } else {
                let e = (&q - BigUint::one()) >> 1;
                r.pow_mod_big(&e, &f)?.sub(&Self::one(p))
            };
            let g = candidate.gcd(&f)?;
            let dg = g.degree().unwrap_or(0);
            if dg > 0 && dg < n {
                let mut left = g.equal_degree(k)?;
                left.extend(f.div_exact(&g)?.equal_degree(k)?);
                return Ok(left);
            }
        }
    }

    /// All roots in F_p, ascending, without multiplicity.
    pub fn roots(&self) -> Vec<u64> {
        (0..self.p).filter(|&x| self.eval(x) == 0).collect()
    }
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list: Vec<String> = if self.coeffs.is_empty() {
            vec!["0".into()]
        } else {
            self.coeffs.iter().map(|c| c.to_string()).collect()
        };
        write!(f, "p={}; coeffs={}", self.p, list.join(","))
    }
}

impl FromStr for FpPoly {
    type Err = CorrdynError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| CorrdynError::Parse(format!("bad FpPoly `{s}`: {why}"));
        let (head, tail) = s.split_once(';').ok_or_else(|| bad("missing `;`"))?;
        let p: u64 = head
            .trim()
            .strip_prefix("p=")
            .ok_or_else(|| bad("missing p="))?
            .parse()
            .map_err(|_| bad("modulus"))?;
        if !is_prime(p) {
            return Err(bad("modulus is not prime"));
        }
        let list = tail.trim().strip_prefix("coeffs=").ok_or_else(|| bad("missing coeffs="))?;
        let mut coeffs = Vec::new();
        for tok in list.split(',') {
            let c: u64 = tok.parse().map_err(|_| bad("coefficient"))?;
            if c >= p {
                return Err(bad("coefficient out of range"));
            }
            coeffs.push(c);
        }
        Ok(Self::new(p, coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> FpPoly {
        FpPoly::from_i64(3, c)
    }

    #[test]
    fn gcd_examples() {
        let c2 = poly(&[0, 0, 1]);
        let c3mc2 = poly(&[0, 0, -1, 1]);
        assert_eq!(c2.gcd(&c3mc2).unwrap(), c2);
        let a = poly(&[0, 0, 2]);
        assert_eq!(a.gcd(&FpPoly::zero(3)).unwrap(), poly(&[0, 0, 1]));
        assert_eq!(c3mc2.gcd(&poly(&[-1, 1])).unwrap(), poly(&[-1, 1]));
    }

    #[test]
    fn mismatch() {
        let a = FpPoly::x(3);
        let b = FpPoly::x(5);
        assert_eq!(a.gcd(&b), Err(CorrdynError::ModulusMismatch(3, 5)));
    }

    #[test]
    fn radical_examples() {
        assert_eq!(poly(&[0, 0, -1, 1]).radical().unwrap(), poly(&[0, -1, 1]));
        assert_eq!(poly(&[0, 0, 0, 1]).radical().unwrap(), poly(&[0, 1]));
        assert_eq!(FpPoly::zero(3).radical(), Err(CorrdynError::ZeroPolynomial));
    }

    #[test]
    fn radical_of_mixed_inseparable_power() {
        // (c+1)^3 (c-1)^2 c
        let a = poly(&[1, 1]).pow(3).mul(&poly(&[-1, 1]).pow(2)).mul(&FpPoly::x(3));
        let expect = poly(&[1, 1]).mul(&poly(&[-1, 1])).mul(&FpPoly::x(3));
        assert_eq!(a.radical().unwrap(), expect);
    }

    #[test]
    fn factor_roundtrip() {
        let a = poly(&[2, 0, 1, 1]).mul(&poly(&[1, 0, 1])).pow(2).mul(&poly(&[0, 1]).pow(3));
        let fs = a.factor().unwrap();
        let mut back = FpPoly::one(3);
        for (f, m) in &fs {
            assert!(f.is_irreducible().unwrap());
            back = back.mul(&f.pow(*m as u64));
        }
        assert_eq!(back, a.monic());
    }

    #[test]
    fn factor_over_f2() {
        // x^4 + x = x (x+1) (x^2+x+1)
        let a = FpPoly::new(2, vec![0, 1, 0, 0, 1]);
        let fs = a.factor().unwrap();
        assert_eq!(fs.len(), 3);
        assert!(fs.iter().all(|(_, m)| *m == 1));
    }

    #[test]
    fn text_roundtrip() {
        let a = poly(&[0, 0, 0, 2, 2, 2, 0, 0, 0, 1]);
        let s = a.to_string();
        assert_eq!(s, "p=3; coeffs=0,0,0,2,2,2,0,0,0,1");
        assert_eq!(s.parse::<FpPoly>().unwrap(), a);
        assert!("p=4; coeffs=1".parse::<FpPoly>().is_err());
        assert!("p=3; coeffs=3".parse::<FpPoly>().is_err());
    }

    #[test]
    fn valuation_counts_powers() {
        let f = poly(&[0, 0, 0, 0, 2, 2, 2, 0, 0, 1]);
        assert_eq!(f.valuation(&FpPoly::x(3)).unwrap(), 4);
    }
}
