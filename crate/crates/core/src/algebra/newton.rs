//! Newton polygons over a discretely valued field.

use num_rational::BigRational;
use num_traits::Zero;

use super::rational::{Rational, Valuation};
use crate::error::{CorrdynError, Result};

/// One edge of the lower convex hull.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
    /// Valuation of the roots carried by this edge (minus the slope).
    pub root_valuation: Rational,
}

impl Segment {
    pub fn multiplicity(&self) -> usize {
        self.end - self.start
    }
}

/// Lower hull of the finite points (i, v_i); returns its edges left to right.
pub fn newton_polygon(vals: &[Valuation]) -> Result<Vec<Segment>> {
    let points: Vec<(usize, Rational)> = vals
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.finite().map(|x| (i, x.clone())))
        .collect();
    match vals.last() {
        Some(Valuation::Finite(_)) => {}
        _ => {
            return Err(CorrdynError::Precondition(
                "leading coefficient must have finite valuation".into(),
            ))
        }
    }
    let mut hull: Vec<(usize, Rational)> = Vec::new();
    for pt in points {
        while hull.len() >= 2 {
            let (x1, y1) = &hull[hull.len() - 2];
            let (x2, y2) = &hull[hull.len() - 1];
            // drop the middle point when it lies on or above the chord
            let lhs = (y2 - y1) * BigRational::from_integer((pt.0 - x1).into());
            let rhs = (&pt.1 - y1) * BigRational::from_integer((x2 - x1).into());
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    Ok(hull
        .windows(2)
        .map(|w| {
            let run = BigRational::from_integer((w[1].0 - w[0].0).into());
            Segment {
                start: w[0].0,
                end: w[1].0,
                root_valuation: (&w[0].1 - &w[1].1) / run,
            }
        })
        .collect())
}

/// The multiset of root valuations, ascending, with +∞ for each root at 0.
pub fn newton_polygon_root_valuations(vals: &[Valuation]) -> Result<Vec<Valuation>> {
    let segments = newton_polygon(vals)?;
    let zero_roots = vals.iter().take_while(|v| !v.is_finite()).count();
    let mut out: Vec<Valuation> = Vec::with_capacity(vals.len().saturating_sub(1));
    for seg in &segments {
        for _ in 0..seg.multiplicity() {
            out.push(Valuation::Finite(seg.root_valuation.clone()));
        }
    }
    out.extend(std::iter::repeat_n(Valuation::Infinity, zero_roots));
    out.sort();
    Ok(out)
}

/// Sum of the finite root valuations; equals v(a_0) - v(a_d) when a_0 ≠ 0.
pub fn finite_sum(vals: &[Valuation]) -> Rational {
    vals.iter()
        .filter_map(|v| v.finite())
        .fold(Rational::zero(), |acc, v| acc + v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{rat, rat_int};

    fn v(i: i64) -> Valuation {
        Valuation::int(i)
    }

    #[test]
    fn single_slope() {
        let r = newton_polygon_root_valuations(&[v(2), Valuation::Infinity, v(0)]).unwrap();
        assert_eq!(r, vec![v(1), v(1)]);
    }

    #[test]
    fn zero_root() {
        let r = newton_polygon_root_valuations(&[Valuation::Infinity, v(1), v(0)]).unwrap();
        assert_eq!(r, vec![v(1), Valuation::Infinity]);
    }

    #[test]
    fn cubic_with_bent_hull() {
        // x^3 + 3x + 9 at p = 3: (1,1) sits below the chord from (0,2) to (3,0),
        // so the hull bends there and the valuations split as {1, 1/2, 1/2}.
        let r = newton_polygon_root_valuations(&[v(2), v(1), Valuation::Infinity, v(0)]).unwrap();
        assert_eq!(r, vec![Valuation::Finite(rat(1, 2)), Valuation::Finite(rat(1, 2)), v(1)]);
        assert_eq!(finite_sum(&r), rat_int(2));
    }

    #[test]
    fn infinite_leading_rejected() {
        assert!(newton_polygon_root_valuations(&[v(0), Valuation::Infinity]).is_err());
    }
}
