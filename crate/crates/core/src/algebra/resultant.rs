//! Sylvester resultants and a brute-force oracle for the unicritical recursion.
//!
//! The oracle never uses the recursion it is meant to check. It builds
//! R_{k+1}(w, c) = Res_z(R_k(z, c), z^p + c - w^e) with R_0 = w by evaluating
//! Sylvester determinants at enough points and interpolating, first in w and
//! then in c. The interpolation nodes live in F_{p^n}, which has more than
//! deg_c = p^{n-1} elements.

use super::fp::FpPoly;
use super::gf::{Elt, GaloisField};
use crate::error::{CorrdynError, Result};

/// Largest n the oracle accepts.
pub const ORACLE_MAX_N: u32 = 4;

/// Determinant by Gaussian elimination over the field.
pub fn determinant(field: &GaloisField, mut m: Vec<Vec<Elt>>) -> Elt {
    let n = m.len();
    let mut det: Elt = 1;
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| m[r][col] != 0) else {
            return 0;
        };
        if pivot != col {
            m.swap(pivot, col);
            det = field.neg(det);
        }
        det = field.mul(det, m[col][col]);
        let inv = field.inv(m[col][col]).expect("pivot is nonzero");
        for r in (col + 1)..n {
            if m[r][col] == 0 {
                continue;
            }
            let factor = field.mul(m[r][col], inv);
            let (top, bottom) = m.split_at_mut(r);
            for (x, &y) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x = field.sub(*x, field.mul(factor, y));
            }
        }
    }
    det
}

/// Res(a, b) = det of the Sylvester matrix for the formal degrees len-1.
pub fn sylvester_resultant(field: &GaloisField, a: &[Elt], b: &[Elt]) -> Elt {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    if size == 0 {
        return 1;
    }
    let mut rows = vec![vec![0 as Elt; size]; size];
    // descending coefficients, a's n shifted copies then b's m shifted copies
    for i in 0..n {
        for (j, &c) in a.iter().rev().enumerate() {
            rows[i][i + j] = c;
        }
    }
    for i in 0..m {
        for (j, &c) in b.iter().rev().enumerate() {
            rows[n + i][i + j] = c;
        }
    }
    determinant(field, rows)
}

/// Coefficients (ascending) of the unique polynomial of degree < len through the points.
pub fn interpolate(field: &GaloisField, xs: &[Elt], ys: &[Elt]) -> Vec<Elt> {
    let n = xs.len();
    let mut out = vec![0 as Elt; n];
    for i in 0..n {
        // basis numerator Π_{j≠i} (x - x_j) and denominator Π (x_i - x_j)
        let mut basis = vec![1 as Elt];
        let mut denom: Elt = 1;
        for j in 0..n {
            if j == i {
                continue;
            }
            let mut next = vec![0 as Elt; basis.len() + 1];
            for (k, &b) in basis.iter().enumerate() {
                next[k + 1] = field.add(next[k + 1], b);
                next[k] = field.sub(next[k], field.mul(b, xs[j]));
            }
            basis = next;
            denom = field.mul(denom, field.sub(xs[i], xs[j]));
        }
        let scale = field.mul(ys[i], field.inv(denom).expect("distinct nodes"));
        for (k, &b) in basis.iter().enumerate() {
            out[k] = field.add(out[k], field.mul(scale, b));
        }
    }
    out
}

/// R_k(·, c0) as an ascending coefficient vector of formal degree e^k.
fn r_poly(field: &GaloisField, p: u64, e: u32, k: u32, c0: Elt) -> Vec<Elt> {
    if k == 0 {
        return vec![0, 1];
    }
    let prev = r_poly(field, p, e, k - 1, c0);
    let deg = (e as usize).pow(k);
    let xs: Vec<Elt> = (0..=deg as Elt).collect();
    let ys: Vec<Elt> = xs.iter().map(|&w| r_value(field, p, e, &prev, c0, w)).collect();
    interpolate(field, &xs, &ys)
}

/// Res_z(prev(z), z^p + c0 - w^e).
fn r_value(field: &GaloisField, p: u64, e: u32, prev: &[Elt], c0: Elt, w: Elt) -> Elt {
    let mut b = vec![0 as Elt; p as usize + 1];
    b[p as usize] = 1;
    b[0] = field.sub(c0, field.pow(w, e as u64));
    sylvester_resultant(field, prev, &b)
}

/// f_n(c) = R_n(0, c) over F_p, computed literally from resultants and
/// normalized to be monic.
pub fn resultant_oracle(p: u64, e: u32, n: u32) -> Result<FpPoly> {
    if e == 0 || e as u64 >= p {
        return Err(CorrdynError::Precondition(format!("need 1 <= e < p, got e={e}, p={p}")));
    }
    if n > ORACLE_MAX_N {
        return Err(CorrdynError::BudgetExceeded(format!(
            "resultant oracle handles n <= {ORACLE_MAX_N}, got {n}"
        )));
    }
    if n == 0 {
        return Ok(FpPoly::zero(p));
    }
    let field = GaloisField::new(p, n)?;
    let deg_c = p.pow(n - 1) as usize;
    let cs: Vec<Elt> = (0..=deg_c as Elt).collect();
    let values: Vec<Elt> = cs
        .iter()
        .map(|&c0| {
            let prev = r_poly(&field, p, e, n - 1, c0);
            r_value(&field, p, e, &prev, c0, 0)
        })
        .collect();
    let coeffs = interpolate(&field, &cs, &values);
    let mut out = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        if c as u64 >= p {
            return Err(CorrdynError::Precondition(
                "interpolated coefficient outside the prime field".into(),
            ));
        }
        out.push(c as u64);
    }
    // R_n(0, c) is ± a monic polynomial; the sign is a resultant convention
    Ok(FpPoly::new(p, out).monic())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(resultant_oracle(3, 2, 1).unwrap(), FpPoly::x(3));
        assert_eq!(resultant_oracle(3, 2, 2).unwrap(), FpPoly::new(3, vec![0, 0, 2, 1]));
        assert_eq!(resultant_oracle(5, 2, 1).unwrap(), FpPoly::x(5));
    }

    #[test]
    fn rejects_large_n() {
        assert!(resultant_oracle(3, 2, 5).unwrap_err().is_budget());
        assert!(resultant_oracle(3, 3, 1).is_err());
    }

    #[test]
    fn resultant_of_linear_factors() {
        // Res(z - 1, z - 2) over F_3 is 1 - 2 = -1 ≡ 2 up to the Sylvester sign convention
        let f = GaloisField::new(3, 1).unwrap();
        let r = sylvester_resultant(&f, &[2, 1], &[1, 1]);
        assert_eq!(r, 2);
    }
}
