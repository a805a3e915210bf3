//! p-adic escape rates computed on valuations.
//!
//! A vertex is abstracted to its valuation ν, known either exactly or only as
//! a lower bound v(x) ≥ ν. Exact vertices whose Newton polygons have no ties
//! produce exact children; a tie downgrades the children to lower bounds and
//! marks the result.
//!
//! A vertex escapes once the leading terms of f and g dominate strictly; from
//! then on ν_{n+1} = (v(a_d) + dν_n - v(b_e)) / e along every branch and the
//! escape rate is known in closed form with no error term.

use std::collections::BTreeSet;

use num_traits::Zero;

use super::EscapeInterval;
use crate::algebra::newton::newton_polygon_root_valuations;
use crate::algebra::rational::{is_prime, padic_valuation, to_f64, Rational, Valuation};
use crate::correspondence::{RationalCorrespondence, RationalCriticalStart};
use crate::error::{CorrdynError, Result};

const MAX_MAJORANT_STEPS: usize = 64;

/// Start of a p-adic tree search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PadicStart {
    Point(Rational),
    /// The critical points over a branch value w: roots of g(y) = w.
    Fibre(Rational),
}

impl From<RationalCriticalStart> for PadicStart {
    fn from(c: RationalCriticalStart) -> Self {
        match c {
            RationalCriticalStart::Point(x) => PadicStart::Point(x),
            RationalCriticalStart::Fibre(w) => PadicStart::Fibre(w),
        }
    }
}

type State = (Valuation, bool);

struct Data {
    d: usize,
    e: usize,
    va: Vec<Valuation>,
    vb: Vec<Valuation>,
    vad: Rational,
    vbe: Rational,
    /// (v(a_d) - v(b_e)) / (d - e)
    shift: Rational,
    ln_p: f64,
    /// Smallest μ found with U(μ) ≥ μ: the disk v ≥ μ is forward invariant.
    invariant_floor: Option<Rational>,
}

fn int(k: usize) -> Rational {
    Rational::from_integer(k.into())
}

fn lin(v: &Valuation, i: usize, nu: &Valuation) -> Valuation {
    if i == 0 {
        v.clone()
    } else {
        v.add(&nu.scale(&int(i)))
    }
}

impl Data {
    fn new(corr: &RationalCorrespondence, p: u64) -> Self {
        let (d, e) = (corr.d(), corr.e());
        let va: Vec<Valuation> = corr.f().coeffs().iter().map(|c| padic_valuation(c, p)).collect();
        let vb: Vec<Valuation> = corr.g().coeffs().iter().map(|c| padic_valuation(c, p)).collect();
        let vad = va[d].finite().unwrap().clone();
        let vbe = vb[e].finite().unwrap().clone();
        let shift = (&vad - &vbe) / int(d - e);
        let mut data = Data { d, e, va, vb, vad, vbe, shift, ln_p: (p as f64).ln(), invariant_floor: None };
        data.invariant_floor = data.find_invariant_floor();
        data
    }

    /// The majorant U is a min of affine pieces, so the limit of a
    /// decreasing orbit U^k(ν) is a fixed point of one piece. Testing those
    /// fixed points (and 0) catches orbits that converge without reaching it.
    fn find_invariant_floor(&self) -> Option<Rational> {
        let mut candidates = vec![Rational::zero()];
        for i in 0..=self.d {
            if let (Some(a), true) = (self.va[i].finite(), i != self.e) {
                candidates.push((a - &self.vbe) / (int(self.e) - int(i)));
            }
        }
        if let Some(b0) = self.vb[0].finite() {
            candidates.push((b0 - &self.vbe) / int(self.e));
        }
        for j in 1..self.e {
            if let Some(b) = self.vb[j].finite() {
                candidates.push((b - &self.vbe) / int(self.e - j));
            }
        }
        candidates
            .into_iter()
            .filter(|m| {
                let m = Valuation::Finite(m.clone());
                self.majorant(&m) >= m
            })
            .min()
    }

    fn ratio(&self) -> f64 {
        self.e as f64 / self.d as f64
    }

    /// v(f(x)) for a vertex state; exact unless a minimum is attained twice
    /// (or, for a lower-bound vertex, unless a_0 does not dominate).
    fn value_f(&self, (nu, exact): &State) -> State {
        if *nu == Valuation::Infinity {
            return (self.va[0].clone(), true);
        }
        let terms: Vec<Valuation> = (0..=self.d).map(|i| lin(&self.va[i], i, nu)).collect();
        let m = terms.iter().min().unwrap().clone();
        let ties = terms.iter().filter(|t| **t == m).count();
        let ok = if *exact {
            ties == 1
        } else {
            terms[0] == m && ties == 1
        };
        (m, ok)
    }

    /// v(b_0 - f(x)) given v(f(x)).
    fn constant_term(&self, (vf, exact): State) -> State {
        let v0 = &self.vb[0];
        if exact {
            if *v0 != vf {
                (v0.clone().min(vf), true)
            } else {
                (vf.clone(), vf == Valuation::Infinity)
            }
        } else if *v0 < vf {
            (v0.clone(), true)
        } else {
            (vf, false)
        }
    }

    /// Child states from v(c_0), c_0 the constant term of g(y) - f(x).
    fn children(&self, (vc0, exact): State) -> Result<Vec<State>> {
        if exact {
            let mut vals = vec![vc0];
            vals.extend(self.vb[1..].iter().cloned());
            let roots = newton_polygon_root_valuations(&vals)?;
            return Ok(roots.into_iter().map(|v| (v, true)).collect());
        }
        Ok(vec![(Valuation::Finite(self.child_bound(&vc0)), false)])
    }

    /// Lower bound for every root valuation when v(c_0) ≥ vc0 (finite).
    fn child_bound(&self, vc0: &Valuation) -> Rational {
        let mut best: Option<Rational> = None;
        for j in 0..self.e {
            let v = if j == 0 { vc0 } else { &self.vb[j] };
            if let Some(v) = v.finite() {
                let r = (v - &self.vbe) / int(self.e - j);
                best = Some(match best {
                    Some(b) if b <= r => b,
                    _ => r,
                });
            }
        }
        best.expect("a lower-bound constant term is finite")
    }

    /// Exact escape criterion at an exact finite valuation.
    fn escaped(&self, nu: &Rational) -> bool {
        let lead = &self.vad + nu * int(self.d);
        for i in 0..self.d {
            if let Some(a) = self.va[i].finite() {
                if a + nu * int(i) <= lead {
                    return false;
                }
            }
        }
        if let Some(b0) = self.vb[0].finite() {
            if lead >= *b0 {
                return false;
            }
        }
        self.dominated(&lead) && (&lead - &self.vbe) / int(self.e) < *nu
    }

    /// The points (j, v(b_j)), 0 < j < e, lie on or above the segment from
    /// (0, vc0) to (e, v(b_e)).
    fn dominated(&self, vc0: &Rational) -> bool {
        let e = self.e;
        (1..e).all(|j| match self.vb[j].finite() {
            Some(b) => b * int(e) >= vc0 * int(e - j) + &self.vbe * int(j),
            None => true,
        })
    }

    /// Escape rate of every path through an escaped vertex of weight w.
    fn closed_form(&self, nu: &Rational, w: f64) -> f64 {
        w * self.ln_p * to_f64(&(-(nu + &self.shift)))
    }

    /// Valuation lower bound for the children of any x with v(x) ≥ nu.
    fn majorant(&self, nu: &Valuation) -> Valuation {
        let f = (0..=self.d).map(|i| lin(&self.va[i], i, nu)).min().unwrap();
        let c0 = self.vb[0].clone().min(f);
        if c0 == Valuation::Infinity && (1..self.e).all(|j| !self.vb[j].is_finite()) {
            return Valuation::Infinity;
        }
        if c0 == Valuation::Infinity {
            // c_0 = 0: one root is 0, the rest come from the other terms
            let mut best: Option<Rational> = None;
            for j in 1..self.e {
                if let Some(v) = self.vb[j].finite() {
                    let r = (v - &self.vbe) / int(self.e - j);
                    best = Some(match best {
                        Some(b) if b <= r => b,
                        _ => r,
                    });
                }
            }
            return Valuation::Finite(best.unwrap());
        }
        Valuation::Finite(self.child_bound(&c0))
    }

    /// Lower-bound analogue of [`Data::escaped`]: ties are allowed.
    fn affine_regime(&self, nu: &Rational) -> bool {
        let lead = &self.vad + nu * int(self.d);
        (0..self.d).all(|i| self.va[i].finite().is_none_or(|a| a + nu * int(i) >= lead))
            && self.vb[0].finite().is_none_or(|b| *b >= lead)
            && (1..self.e).all(|j| {
                self.vb[j].finite().is_none_or(|b| {
                    (b - &self.vbe) * int(self.e) >= (&lead - &self.vbe) * int(self.e - j)
                })
            })
    }

    /// Upper bound for the escape rate of every path from a vertex with
    /// v(x) ≥ nu and weight w. Zero when a disk is shown to be forward
    /// invariant.
    fn upper(&self, nu: &Valuation, w: f64) -> f64 {
        if let Some(floor) = &self.invariant_floor {
            if *nu >= Valuation::Finite(floor.clone()) {
                return 0.0;
            }
        }
        let mut cur = nu.clone();
        let mut wk = w;
        for _ in 0..MAX_MAJORANT_STEPS {
            let next = self.majorant(&cur);
            if next >= cur {
                return 0.0;
            }
            if let Valuation::Finite(c) = &cur {
                if self.affine_regime(c) {
                    return (wk * self.ln_p * to_f64(&(-(c + &self.shift)))).max(0.0);
                }
            }
            cur = next;
            wk *= self.ratio();
        }
        f64::INFINITY
    }
}

/// Enclosure of the infimum p-adic escape rate over all paths from `start`.
///
/// The tree is explored on valuation states, so equal valuations at equal
/// depth merge. Escaped exact vertices contribute their closed-form value;
/// the search stops as soon as some vertex provably has rate 0 on every path.
pub fn green_min_padic(corr: &RationalCorrespondence, start: &PadicStart, p: u64, depth: usize) -> Result<EscapeInterval> {
    if !is_prime(p) {
        return Err(CorrdynError::InvalidInput(format!("{p} is not prime")));
    }
    let data = Data::new(corr, p);
    let q = data.ratio();
    let mut best_hi = f64::INFINITY;
    let mut tie = false;
    let mut leaf_lo = f64::INFINITY;

    let c0 = match start {
        PadicStart::Point(x) => {
            let nu = padic_valuation(x, p);
            if let Valuation::Finite(n) = &nu {
                if data.escaped(n) {
                    let g = data.closed_form(n, 1.0);
                    return Ok(EscapeInterval::point(g, 0));
                }
            }
            let hi = data.upper(&nu, 1.0);
            if hi == 0.0 {
                return Ok(EscapeInterval::zero(0));
            }
            best_hi = hi;
            padic_valuation(&(corr.g().coeff(0) - corr.f().eval(x)), p)
        }
        PadicStart::Fibre(w) => padic_valuation(&(corr.g().coeff(0) - w), p),
    };
    if depth == 0 {
        return Ok(EscapeInterval::new(0.0, best_hi, 0));
    }
    let mut frontier: BTreeSet<State> = data.children((c0, true))?.into_iter().collect();
    let mut w = q;
    let mut level = 1usize;
    loop {
        let mut survivors: Vec<State> = Vec::new();
        for state in std::mem::take(&mut frontier) {
            if let (Valuation::Finite(n), true) = &state {
                if data.escaped(n) {
                    let g = data.closed_form(n, w);
                    leaf_lo = leaf_lo.min(g);
                    best_hi = best_hi.min(g);
                    continue;
                }
            }
            let hi = data.upper(&state.0, w);
            if hi == 0.0 {
                let mut out = EscapeInterval::zero(level);
                out.tie = tie;
                return Ok(out);
            }
            best_hi = best_hi.min(hi);
            survivors.push(state);
        }
        if survivors.is_empty() {
            let mut out = EscapeInterval::point(leaf_lo, level);
            out.tie = tie;
            return Ok(out);
        }
        if level >= depth {
            let mut out = EscapeInterval::new(0.0, best_hi, level);
            out.tie = tie;
            return Ok(out);
        }
        for state in survivors {
            let c0 = data.constant_term(data.value_f(&state));
            let kids = data.children(c0)?;
            tie |= kids.iter().any(|k| !k.1);
            frontier.extend(kids);
        }
        w *= q;
        level += 1;
    }
}

/// Λ(C, p): the max over exact critical starts of the p-adic minimum.
pub fn lambda_capital_padic(corr: &RationalCorrespondence, p: u64, depth: usize) -> Result<EscapeInterval> {
    let mut acc: Option<EscapeInterval> = None;
    for s in corr.critical_starts()? {
        let i = green_min_padic(corr, &s.into(), p, depth)?;
        acc = Some(match acc {
            None => i,
            Some(a) => a.max(&i),
        });
    }
    Ok(acc.expect("every correspondence has a critical point"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{rat, rat_int};

    fn corr(text: &str) -> RationalCorrespondence {
        RationalCorrespondence::parse(text).unwrap()
    }

    #[test]
    fn integral_data_gives_zero() {
        let c = corr("f=1,0,0,1;g=0,0,1");
        let i = green_min_padic(&c, &PadicStart::Point(rat_int(0)), 5, 10).unwrap();
        assert_eq!((i.lo, i.hi), (0.0, 0.0));
    }

    #[test]
    fn negative_constant_escapes() {
        let c = corr("f=1/25,0,0,1;g=0,0,1");
        let i = green_min_padic(&c, &PadicStart::Point(rat_int(0)), 5, 10).unwrap();
        // v(x_1) = -1, then v(x_{n+1}) = 3 v(x_n) / 2
        let g = (2.0 / 3.0) * 5f64.ln();
        assert!((i.lo - g).abs() < 1e-12 && (i.hi - g).abs() < 1e-12, "{i}");
    }

    #[test]
    fn squaring_from_p() {
        let c = corr("f=0,0,1;g=0,1");
        for p in [2u64, 3, 7] {
            let i = green_min_padic(&c, &PadicStart::Point(rat(p as i64, 1)), p, 8).unwrap();
            assert_eq!((i.lo, i.hi), (0.0, 0.0));
        }
    }

    #[test]
    fn tie_is_flagged() {
        // v(x_1) = -1, where the x^2/3 and x^3 terms of f tie
        let c = corr("f=1/9,0,1/3,1;g=0,0,1");
        let i = green_min_padic(&c, &PadicStart::Point(rat_int(0)), 3, 6).unwrap();
        assert!(i.tie && i.lo == 0.0 && i.hi > 0.0 && i.hi.is_finite(), "{i}");
    }
}
