//! Small finite fields F_{p^k} with log/antilog tables.
//!
//! An element is encoded as the integer Σ c_i p^i where Σ c_i α^i is its
//! representative modulo the field's defining polynomial. The defining
//! polynomial is the least monic irreducible of degree k in that same
//! encoding order, so certificates are reproducible across runs.

use super::fp::FpPoly;
use super::rational::is_prime;
use crate::error::{CorrdynError, Result};

pub type Elt = u32;

/// Largest field order for which tables are built.
pub const MAX_FIELD_ORDER: u64 = 1 << 22;

#[derive(Clone, Debug)]
pub struct GaloisField {
    p: u64,
    k: u32,
    q: u64,
    modulus: FpPoly,
    exp: Vec<Elt>,
    log: Vec<u32>,
}

fn encode(p: u64, coeffs: &[u64]) -> Elt {
    coeffs.iter().rev().fold(0u64, |acc, &c| acc * p + c) as Elt
}

fn decode(p: u64, k: u32, mut x: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(k as usize);
    for _ in 0..k {
        out.push(x % p);
        x /= p;
    }
    out
}

/// Least monic irreducible of degree k over F_p, ordered by the base-p encoding
/// of its lower coefficients with the constant term least significant.
pub fn least_irreducible(p: u64, k: u32) -> Result<FpPoly> {
    if k == 0 {
        return Err(CorrdynError::InvalidInput("extension degree must be >= 1".into()));
    }
    let count = p.checked_pow(k).ok_or_else(|| CorrdynError::BudgetExceeded("field too large".into()))?;
    for m in 0..count {
        let mut c = decode(p, k, m);
        c.push(1);
        let f = FpPoly::new(p, c);
        if f.is_irreducible()? {
            return Ok(f);
        }
    }
    unreachable!("irreducibles of every degree exist")
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            out.push(f);
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl GaloisField {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(CorrdynError::InvalidInput(format!("{p} is not prime")));
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or_else(|| CorrdynError::BudgetExceeded(format!("F_{p}^{k} is too large for tables")))?;
        let modulus = least_irreducible(p, k)?;
        let slow_mul = |a: u64, b: u64| -> Elt {
            let pa = FpPoly::new(p, decode(p, k, a));
            let pb = FpPoly::new(p, decode(p, k, b));
            let r = pa.mul(&pb).rem(&modulus).expect("modulus nonzero");
            encode(p, r.coeffs())
        };
        let slow_pow = |a: u64, mut e: u64| -> u64 {
            let mut acc = 1u64;
            let mut base = a;
            while e > 0 {
                if e & 1 == 1 {
                    acc = slow_mul(acc, base) as u64;
                }
                base = slow_mul(base, base) as u64;
                e >>= 1;
            }
            acc
        };
        let order = q - 1;
        let factors = prime_factors(order);
        let generator = if q == 2 {
            1
        } else {
            (2..q)
                .find(|&g| factors.iter().all(|&f| slow_pow(g, order / f) != 1))
                .expect("multiplicative group is cyclic")
        };
        let mut exp = vec![0 as Elt; order as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u64;
        for i in 0..order {
            exp[i as usize] = x as Elt;
            log[x as usize] = i as u32;
            x = slow_mul(x, generator) as u64;
        }
        Ok(GaloisField { p, k, q, modulus, exp, log })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &FpPoly {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Elt> {
        0..self.q as Elt
    }

    pub fn from_int(&self, c: u64) -> Elt {
        (c % self.p) as Elt
    }

    pub fn from_poly(&self, a: &FpPoly) -> Result<Elt> {
        if a.modulus() != self.p {
            return Err(CorrdynError::ModulusMismatch(a.modulus(), self.p));
        }
        Ok(encode(self.p, a.rem(&self.modulus)?.coeffs()))
    }

    /// Coefficients of the representative, ascending, length k.
    pub fn digits(&self, a: Elt) -> Vec<u64> {
        decode(self.p, self.k, a as u64)
    }

    pub fn to_poly(&self, a: Elt) -> FpPoly {
        FpPoly::new(self.p, self.digits(a))
    }

    pub fn add(&self, a: Elt, b: Elt) -> Elt {
        if self.k == 1 {
            return ((a as u64 + b as u64) % self.p) as Elt;
        }
        let (mut a, mut b) = (a as u64, b as u64);
        let (mut out, mut place) = (0u64, 1u64);
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out as Elt
    }

    pub fn neg(&self, a: Elt) -> Elt {
        let mut a = a as u64;
        let (mut out, mut place) = (0u64, 1u64);
        while a > 0 {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out as Elt
    }

    pub fn sub(&self, a: Elt, b: Elt) -> Elt {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elt, b: Elt) -> Elt {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % (self.q - 1);
        self.exp[s as usize]
    }

    pub fn pow(&self, a: Elt, e: u64) -> Elt {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let s = (self.log[a as usize] as u128 * e as u128 % (self.q - 1) as u128) as usize;
        self.exp[s]
    }

    pub fn inv(&self, a: Elt) -> Result<Elt> {
        if a == 0 {
            return Err(CorrdynError::InvalidInput("inverse of zero".into()));
        }
        let s = (self.q - 1 - self.log[a as usize] as u64) % (self.q - 1);
        Ok(self.exp[s as usize])
    }

    /// Inverse Frobenius: the unique x with x^p = a.
    pub fn pth_root(&self, a: Elt) -> Elt {
        self.pow(a, self.q / self.p)
    }

    /// All x with x^e = a, ascending; a = 0 gives [0] (a root of multiplicity e).
    pub fn nth_roots(&self, a: Elt, e: u64) -> Vec<Elt> {
        if a == 0 {
            return vec![0];
        }
        let order = self.q - 1;
        let la = self.log[a as usize] as u64;
        let g = num_integer::gcd(e, order);
        if !la.is_multiple_of(g) {
            return vec![];
        }
        // solve e·t ≡ la (mod order); solutions t0 + j·order/g
        let (e_red, la_red, m) = (e / g, la / g, order / g);
        let t0 = if m == 1 {
            0
        } else {
            let inv = super::fp::inv_mod(e_red % m, m).expect("coprime after reduction");
            super::fp::mul_mod(la_red % m, inv, m)
        };
        let mut out: Vec<Elt> = (0..g).map(|j| self.exp[((t0 + j * m) % order) as usize]).collect();
        out.sort_unstable();
        out
    }

    /// Evaluate an F_p polynomial at an element.
    pub fn eval(&self, f: &FpPoly, x: Elt) -> Elt {
        f.coeffs()
            .iter()
            .rev()
            .fold(0, |acc, &c| self.add(self.mul(acc, x), self.from_int(c)))
    }

    /// Textual element: ascending coefficients joined by `:`.
    pub fn format_elt(&self, a: Elt) -> String {
        self.digits(a).iter().map(|c| c.to_string()).collect::<Vec<_>>().join(":")
    }

    pub fn parse_elt(&self, s: &str) -> Result<Elt> {
        let digits: Vec<u64> = s
            .split(':')
            .map(|t| t.parse::<u64>().map_err(|_| CorrdynError::Parse(format!("bad element `{s}`"))))
            .collect::<Result<_>>()?;
        if digits.len() != self.k as usize || digits.iter().any(|&d| d >= self.p) {
            return Err(CorrdynError::Parse(format!("bad element `{s}`")));
        }
        Ok(encode(self.p, &digits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moduli_are_least() {
        assert_eq!(least_irreducible(3, 1).unwrap(), FpPoly::x(3));
        // x^2 + 1 is the first irreducible quadratic over F_3 in encoding order
        assert_eq!(least_irreducible(3, 2).unwrap(), FpPoly::new(3, vec![1, 0, 1]));
        assert_eq!(least_irreducible(2, 3).unwrap(), FpPoly::new(2, vec![1, 1, 0, 1]));
    }

    #[test]
    fn field_axioms_f9() {
        let f = GaloisField::new(3, 2).unwrap();
        for a in f.elements() {
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            assert_eq!(f.pow(f.pth_root(a), 3), a);
            for b in f.elements() {
                let slow = f.to_poly(a).mul(&f.to_poly(b)).rem(f.modulus()).unwrap();
                assert_eq!(f.mul(a, b), f.from_poly(&slow).unwrap());
            }
        }
    }

    #[test]
    fn square_roots_in_f27() {
        let f = GaloisField::new(3, 3).unwrap();
        let mut hits = 0;
        for a in f.elements() {
            let r = f.nth_roots(a, 2);
            for &x in &r {
                assert_eq!(f.mul(x, x), a);
            }
            hits += r.len();
        }
        // 0 contributes one entry, each of the 13 nonzero squares two
        assert_eq!(hits, 1 + 26);
    }

    #[test]
    fn element_text() {
        let f = GaloisField::new(3, 2).unwrap();
        for a in f.elements() {
            assert_eq!(f.parse_elt(&f.format_elt(a)).unwrap(), a);
        }
        assert!(f.parse_elt("1:2:0").is_err());
    }
}
