//! Archimedean escape rates along single paths and minima over path trees.

use std::collections::HashMap;

use num_complex::Complex64;

use super::bounds::ArchBounds;
use super::{lambda_local, Coefficients, EscapeInterval};
use crate::algebra::rational::Place;
use crate::correspondence::{CriticalStart, Correspondence, PathPrefix};
use crate::error::{CorrdynError, Result};

/// Continuation rule for a path after its explicit prefix.
#[derive(Clone, Debug, PartialEq)]
pub enum BranchPolicy {
    LargestModulus,
    SmallestModulus,
    /// The k-th root in (re, im) order, clamped to the last one.
    Index(usize),
    /// Follow the cycle closed by the prefix (its last vertex repeats an
    /// earlier one), always taking the root nearest the expected vertex.
    RepeatCycle,
}

/// A path given by a prefix plus a continuation rule.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSpec {
    pub prefix: PathPrefix,
    pub policy: BranchPolicy,
}

/// Result of [`green`]: a value within tol, or an enclosure when the budget ran out.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GreenOutcome {
    Value(f64),
    Enclosure(EscapeInterval),
}

impl GreenOutcome {
    pub fn value(&self) -> Option<f64> {
        match self {
            GreenOutcome::Value(v) => Some(*v),
            GreenOutcome::Enclosure(_) => None,
        }
    }

    pub fn interval(&self, tol: f64) -> EscapeInterval {
        match self {
            GreenOutcome::Value(v) => EscapeInterval::new(v - tol, v + tol, 0),
            GreenOutcome::Enclosure(i) => *i,
        }
    }
}

fn choose(roots: &[Complex64], policy: &BranchPolicy, target: Option<Complex64>) -> Complex64 {
    match (policy, target) {
        (BranchPolicy::RepeatCycle, Some(t)) => *roots
            .iter()
            .min_by(|a, b| (*a - t).norm().total_cmp(&(*b - t).norm()))
            .unwrap(),
        (BranchPolicy::LargestModulus, _) | (BranchPolicy::RepeatCycle, None) => *roots
            .iter()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap(),
        (BranchPolicy::SmallestModulus, _) => *roots
            .iter()
            .min_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap(),
        (BranchPolicy::Index(k), _) => roots[(*k).min(roots.len() - 1)],
    }
}

/// The escape rate of one path to within `tol`.
///
/// The path follows `spec` for at most `max_depth` steps. Once a vertex
/// passes the certified escape radius the tail bound takes over; if it never
/// does, the majorant bound on the last vertex decides between `Value(0)` and
/// an enclosure.
pub fn green(corr: &Correspondence, spec: &PathSpec, tol: f64, max_depth: usize) -> Result<GreenOutcome> {
    let lambda = lambda_local(Coefficients::Complex(corr), Place::Archimedean)?;
    let bounds = ArchBounds::new(corr, lambda);
    let q = bounds.ratio();
    let prefix = spec.prefix.vertices();
    let cycle_start = if spec.policy == BranchPolicy::RepeatCycle {
        let last = *prefix.last().unwrap();
        let start = prefix[..prefix.len() - 1]
            .iter()
            .position(|&v| (v - last).norm() <= 1e-8 * last.norm().max(1.0))
            .ok_or_else(|| CorrdynError::InvalidInput("RepeatCycle needs a prefix that closes a cycle".into()))?;
        Some(start)
    } else {
        None
    };
    let mut x = prefix[0];
    let mut w = 1.0;
    let mut n = 0usize;
    loop {
        let m = x.norm();
        if bounds.escaped(m) {
            let (lo, hi) = bounds.tail(m, w);
            if hi - lo <= 2.0 * tol {
                return Ok(GreenOutcome::Value(0.5 * (lo + hi)));
            }
            if n >= max_depth || !corr.f().eval(x).is_finite() {
                return Ok(GreenOutcome::Enclosure(EscapeInterval::new(lo, hi, n)));
            }
        } else {
            let hi = bounds.upper(m, w);
            // every continuation is already below tol
            if hi <= tol {
                return Ok(GreenOutcome::Value(0.0));
            }
            if n >= max_depth {
                return Ok(GreenOutcome::Enclosure(EscapeInterval::new(0.0, hi, n)));
            }
        }
        n += 1;
        x = if n < prefix.len() {
            prefix[n]
        } else {
            let roots = corr.branch_step(x)?;
            let target = cycle_start.map(|s| {
                let period = prefix.len() - 1 - s;
                prefix[s + (n - s) % period]
            });
            choose(&roots, &spec.policy, target)
        };
        w *= q;
    }
}

/// Where a tree search starts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GreenStart {
    /// A single vertex at depth 0.
    Point(Complex64),
    /// The critical points over a branch value: their successors are the roots of g(y) = w.
    Fibre(Complex64),
}

impl From<CriticalStart> for GreenStart {
    fn from(c: CriticalStart) -> Self {
        match c {
            CriticalStart::Point(x) => GreenStart::Point(x),
            CriticalStart::Fibre(w) => GreenStart::Fibre(w),
        }
    }
}

/// Budgets for the tree search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchConfig {
    pub depth: usize,
    pub tol: f64,
    pub frontier_cap: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { depth: 20, tol: 1e-6, frontier_cap: 4096 }
    }
}

struct Node {
    x: Complex64,
    hi: f64,
}

fn dedup_key(x: Complex64) -> (i64, i64, i32) {
    let scale = x.norm().max(1.0);
    let expo = scale.log2().floor() as i32;
    let cell = 1e-9 * 2f64.powi(expo);
    ((x.re / cell).round() as i64, (x.im / cell).round() as i64, expo)
}

struct Leaf {
    x: Complex64,
    w: f64,
    lo: f64,
    hi: f64,
    frozen: bool,
}

const MAX_REFINEMENTS: usize = 20_000;

/// Certified enclosure of the infimum of G over all paths from `start`.
pub fn green_min(corr: &Correspondence, start: GreenStart, cfg: &SearchConfig) -> Result<EscapeInterval> {
    let lambda = lambda_local(Coefficients::Complex(corr), Place::Archimedean)?;
    let bounds = ArchBounds::new(corr, lambda);
    green_min_with(corr, &bounds, start, cfg)
}

/// Level-synchronous branch and bound. Every visited vertex contributes an
/// upper bound for the infimum; the lower bound is the minimum over a cut of
/// the tree made of escaped vertices, depth-limit survivors and vertices
/// dropped by the frontier cap. When every branch escapes, the escaped
/// leaves are refined best-first until the enclosure is narrower than tol.
pub(crate) fn green_min_with(
    corr: &Correspondence,
    bounds: &ArchBounds,
    start: GreenStart,
    cfg: &SearchConfig,
) -> Result<EscapeInterval> {
    let q = bounds.ratio();
    let (mut frontier, mut w, mut depth) = match start {
        GreenStart::Point(x) => (vec![x], 1.0, 0usize),
        GreenStart::Fibre(v) => (corr.fibre(v)?, q, 1usize),
    };
    let mut best_hi = f64::INFINITY;
    let mut open_cut = false;
    let mut leaves: Vec<Leaf> = Vec::new();
    loop {
        let mut survivors: Vec<Node> = Vec::new();
        let mut seen: HashMap<(i64, i64, i32), ()> = HashMap::new();
        for x in frontier.drain(..) {
            if seen.insert(dedup_key(x), ()).is_some() {
                continue;
            }
            let m = x.norm();
            if bounds.escaped(m) {
                let (lo, hi) = bounds.tail(m, w);
                best_hi = best_hi.min(hi);
                leaves.push(Leaf { x, w, lo, hi, frozen: false });
            } else {
                let hi = bounds.upper(m, w);
                best_hi = best_hi.min(hi);
                survivors.push(Node { x, hi });
            }
        }
        if survivors.is_empty() {
            break;
        }
        if depth >= cfg.depth {
            open_cut = true;
            break;
        }
        survivors.sort_by(|a, b| {
            a.hi.total_cmp(&b.hi).then(a.x.re.total_cmp(&b.x.re)).then(a.x.im.total_cmp(&b.x.im))
        });
        if survivors.len() > cfg.frontier_cap {
            survivors.truncate(cfg.frontier_cap);
            open_cut = true;
        }
        for node in &survivors {
            frontier.extend(corr.branch_step(node.x)?);
        }
        w *= q;
        depth += 1;
    }
    if open_cut {
        // some leaf of the cut only has the trivial lower bound 0
        return Ok(EscapeInterval::new(0.0, best_hi, depth));
    }
    for _ in 0..MAX_REFINEMENTS {
        leaves.retain(|l| l.lo <= best_hi);
        let Some(idx) = leaves
            .iter()
            .enumerate()
            .filter(|(_, l)| !l.frozen)
            .min_by(|a, b| a.1.lo.total_cmp(&b.1.lo))
            .map(|(i, _)| i)
        else {
            break;
        };
        let min_lo = leaves.iter().map(|l| l.lo).fold(f64::INFINITY, f64::min);
        if best_hi - min_lo <= cfg.tol {
            break;
        }
        let leaf = &leaves[idx];
        if leaf.hi - leaf.lo <= 0.25 * cfg.tol || !corr.f().eval(leaf.x).is_finite() {
            leaves[idx].frozen = true;
            continue;
        }
        let children = corr.branch_step(leaf.x)?;
        if children.iter().any(|c| !c.is_finite()) {
            leaves[idx].frozen = true;
            continue;
        }
        let (pw, plo, phi) = (leaf.w * q, leaf.lo, leaf.hi);
        leaves.swap_remove(idx);
        for y in children {
            let (lo, hi) = bounds.tail(y.norm(), pw);
            // a child encloses a subset of the parent's paths
            let (lo, hi) = (lo.max(plo).min(phi), hi.min(phi));
            best_hi = best_hi.min(hi);
            leaves.push(Leaf { x: y, w: pw, lo, hi, frozen: false });
        }
    }
    let lo = leaves.iter().map(|l| l.lo).fold(f64::INFINITY, f64::min);
    let lo = if lo.is_finite() { lo.min(best_hi) } else { best_hi };
    Ok(EscapeInterval::new(lo, best_hi, depth))
}

/// Λ(C, ∞): the max over critical starts of the minimal escape rate.
pub fn lambda_capital(corr: &Correspondence, cfg: &SearchConfig) -> Result<EscapeInterval> {
    let lambda = lambda_local(Coefficients::Complex(corr), Place::Archimedean)?;
    let bounds = ArchBounds::new(corr, lambda);
    let mut acc: Option<EscapeInterval> = None;
    for s in corr.critical_starts()? {
        let i = green_min_with(corr, &bounds, s.into(), cfg)?;
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
    use crate::algebra::complex::ComplexPoly;

    fn corr(f: &[f64], g: &[f64]) -> Correspondence {
        Correspondence::new(ComplexPoly::from_real(f), ComplexPoly::from_real(g)).unwrap()
    }

    fn z(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn green_closed_forms() {
        let c = corr(&[0.0, 0.0, 1.0], &[0.0, 1.0]);
        let spec = PathSpec { prefix: PathPrefix::new(z(2.0)), policy: BranchPolicy::LargestModulus };
        let v = green(&c, &spec, 1e-12, 64).unwrap().value().unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-12);

        let c = corr(&[0.0, 0.0, 0.0, 0.0, 1.0], &[0.0, 0.0, 1.0]);
        let spec = PathSpec { prefix: PathPrefix::new(z(3.0)), policy: BranchPolicy::LargestModulus };
        let v = green(&c, &spec, 1e-10, 64).unwrap().value().unwrap();
        assert!((v - 3f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn bounded_cycle_has_zero_rate() {
        let c = corr(&[1.0, 0.0, 0.0, 1.0], &[0.0, 0.0, 1.0]);
        let prefix = PathPrefix::from_vertices(vec![z(0.0), z(-1.0), z(0.0)]).unwrap();
        let spec = PathSpec { prefix, policy: BranchPolicy::RepeatCycle };
        assert_eq!(green(&c, &spec, 1e-8, 80).unwrap(), GreenOutcome::Value(0.0));
    }

    #[test]
    fn green_min_examples() {
        let c = corr(&[1.0, 0.0, 0.0, 1.0], &[0.0, 0.0, 1.0]);
        let cfg = SearchConfig { depth: 12, tol: 1e-8, frontier_cap: 4096 };
        let i = green_min(&c, GreenStart::Point(z(0.0)), &cfg).unwrap();
        assert_eq!(i.lo, 0.0);
        assert!(i.hi <= (2.0f64 / 3.0).powi(12) * 1.0, "{i}");

        let c = corr(&[1e6, 0.0, 0.0, 1.0], &[0.0, 0.0, 1.0]);
        assert!(green_min(&c, GreenStart::Point(z(0.0)), &cfg).unwrap().lo > 0.0);

        let c = corr(&[10.0, 0.0, 1.0], &[0.0, 1.0]);
        let i = green_min(&c, GreenStart::Point(z(0.0)), &cfg).unwrap();
        let spec = PathSpec { prefix: PathPrefix::new(z(0.0)), policy: BranchPolicy::LargestModulus };
        let g = green(&c, &spec, 1e-8, 64).unwrap().value().unwrap();
        assert!(i.contains(g, 1e-8) && i.width() <= 1e-8, "{i} vs {g}");
    }
}
