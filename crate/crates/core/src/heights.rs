//! Global heights over ℚ: the weighted Weil height, the critical height as a
//! sum of local Λ enclosures, and a sampling harness comparing the two.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::rational::{padic_valuation, prime_divisors, primes_up_to, to_f64, Place, Rational, Valuation};
use crate::correspondence::{RationalCorrespondence, RationalNormalForm};
use crate::error::Result;
use crate::localheights::{lambda_capital, lambda_capital_padic, EscapeInterval, SearchConfig};

/// One place's share of a height.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaceTerm {
    pub place: Place,
    pub weil: f64,
    pub crit: EscapeInterval,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeightReport {
    pub weil: f64,
    pub crit: EscapeInterval,
    pub places: Vec<PlaceTerm>,
}

fn collect_primes(values: &[Rational], d: usize, out: &mut BTreeSet<u64>) -> Result<()> {
    out.extend(primes_up_to(d as u64));
    for x in values.iter().filter(|x| !x.is_zero()) {
        out.extend(prime_divisors(x.numer())?);
        out.extend(prime_divisors(x.denom())?);
    }
    Ok(())
}

fn places_from(primes: BTreeSet<u64>) -> Vec<Place> {
    std::iter::once(Place::Archimedean).chain(primes.into_iter().map(Place::PAdic)).collect()
}

/// ∞, the primes up to d, and every prime in a numerator or denominator of s or t.
pub fn support_places(nf: &RationalNormalForm) -> Result<Vec<Place>> {
    let mut primes = BTreeSet::new();
    let all: Vec<Rational> = nf.s().iter().chain(nf.t()).cloned().collect();
    collect_primes(&all, nf.d(), &mut primes)?;
    Ok(places_from(primes))
}

/// Support places of a general rational correspondence: ∞, the primes up to
/// d and the primes in any coefficient. Elsewhere every nonzero coefficient
/// is a unit and all local terms vanish.
pub fn support_places_general(corr: &RationalCorrespondence) -> Result<Vec<Place>> {
    let mut primes = BTreeSet::new();
    let all: Vec<Rational> = corr.f().coeffs().iter().chain(corr.g().coeffs()).cloned().collect();
    collect_primes(&all, corr.d(), &mut primes)?;
    Ok(places_from(primes))
}

/// log max{1, ‖s‖_v, ‖t‖_v^{e/d}} at one place.
pub fn local_weil(nf: &RationalNormalForm, place: Place) -> f64 {
    let log_norm = |v: &[Rational]| -> f64 {
        v.iter()
            .filter(|x| !x.is_zero())
            .map(|x| match place {
                Place::Archimedean => to_f64(&x.abs()).ln(),
                Place::PAdic(p) => match padic_valuation(x, p) {
                    Valuation::Finite(k) => -to_f64(&k) * (p as f64).ln(),
                    Valuation::Infinity => f64::NEG_INFINITY,
                },
            })
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let ratio = nf.e() as f64 / nf.d() as f64;
    0f64.max(log_norm(nf.s())).max(ratio * log_norm(nf.t())) + 0.0
}

/// Σ_v log max{1, ‖s‖_v, ‖t‖_v^{e/d}} over all places of ℚ.
pub fn weil_height(nf: &RationalNormalForm) -> Result<f64> {
    Ok(support_places(nf)?.into_iter().map(|v| local_weil(nf, v)).sum())
}

fn local_crit(corr: &RationalCorrespondence, place: Place, cfg: &SearchConfig) -> Result<EscapeInterval> {
    match place {
        Place::Archimedean => lambda_capital(&corr.to_complex(), cfg),
        Place::PAdic(p) => lambda_capital_padic(corr, p, cfg.depth),
    }
}

/// Per-place weil and crit terms; headline numbers are the sums.
pub fn height_report(nf: &RationalNormalForm, cfg: &SearchConfig) -> Result<HeightReport> {
    let corr = nf.correspondence();
    let mut places = Vec::new();
    for v in support_places(nf)? {
        places.push(PlaceTerm { place: v, weil: local_weil(nf, v), crit: local_crit(&corr, v, cfg)? });
    }
    Ok(summed(places))
}

fn summed(places: Vec<PlaceTerm>) -> HeightReport {
    let weil = places.iter().map(|t| t.weil).sum();
    let crit = places.iter().fold(EscapeInterval::zero(0), |acc, t| acc.sum(&t.crit));
    HeightReport { weil, crit, places }
}

/// h_Crit as an interval sum of Λ over the support places.
pub fn crit_height(nf: &RationalNormalForm, cfg: &SearchConfig) -> Result<EscapeInterval> {
    Ok(height_report(nf, cfg)?.crit)
}

/// h_Crit for a correspondence that need not be in normal form. The critical
/// height is an invariant of the equivalence class, so this agrees with the
/// normal-form computation whenever both apply. Weil terms are reported as 0.
pub fn crit_height_general(corr: &RationalCorrespondence, cfg: &SearchConfig) -> Result<HeightReport> {
    let mut places = Vec::new();
    for v in support_places_general(corr)? {
        places.push(PlaceTerm { place: v, weil: 0.0, crit: local_crit(corr, v, cfg)? });
    }
    Ok(summed(places))
}

/// Result of searching for preperiodic critical paths.
#[derive(Clone, Debug, PartialEq)]
pub enum PccStatus {
    /// Every critical point has an explicit preperiodic path.
    Certified(Vec<(Complex64, Vec<Complex64>)>),
    /// h_Crit is not bounded away from 0, yet some critical point has no
    /// preperiodic path within the search length. Not a counterexample.
    Inconclusive,
    /// h_Crit.lo > 0, so the correspondence is not PCC.
    NotPcc,
}

/// Classifies a correspondence from its critical height and a bounded path search.
pub fn pcc_status(corr: &RationalCorrespondence, crit: &EscapeInterval, max_len: usize) -> Result<PccStatus> {
    if crit.lo > 0.0 {
        return Ok(PccStatus::NotPcc);
    }
    let c = corr.to_complex();
    let mut crit_points = c.critical_points()?;
    crit_points.dedup_by(|a, b| (*a - *b).norm() < 1e-9);
    let mut paths = Vec::new();
    for x in crit_points {
        match c.find_preperiodic_path(x, max_len)? {
            Some(p) => paths.push((x, p.vertices().to_vec())),
            None => return Ok(PccStatus::Inconclusive),
        }
    }
    Ok(PccStatus::Certified(paths))
}

/// What the comparison harness samples.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleSpec {
    pub count: usize,
    pub d: usize,
    pub e: usize,
    /// log10 of the coefficient height range.
    pub log10_min: f64,
    pub log10_max: f64,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct ComparisonRow {
    pub seed: u64,
    pub height: f64,
    pub form: RationalNormalForm,
    pub report: std::result::Result<HeightReport, String>,
}

impl ComparisonRow {
    pub fn difference(&self) -> Option<f64> {
        self.report.as_ref().ok().map(|r| r.crit.mid() - r.weil)
    }
}

impl fmt::Display for ComparisonRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (d, e) = (self.form.d(), self.form.e());
        match &self.report {
            Ok(r) => write!(
                f,
                "{d},{e},{},{},{},{},places={}",
                self.seed,
                r.weil,
                r.crit.lo,
                r.crit.hi,
                r.places.len()
            ),
            Err(msg) => write!(f, "{d},{e},{},error={msg}", self.seed),
        }
    }
}

fn random_rational(rng: &mut ChaCha8Rng, height: f64) -> Rational {
    let h = height.max(1.0) as i64;
    let num = rng.gen_range(-h..=h);
    let den = rng.gen_range(1..=h.min(9));
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// A normal form whose entries have height at most `height`, with the first
/// entry of s at height exactly round(height).
pub fn sample_normal_form(d: usize, e: usize, height: f64, seed: u64) -> Result<RationalNormalForm> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s: Vec<Rational> = (0..d - 1).map(|_| random_rational(&mut rng, height)).collect();
    let t: Vec<Rational> = (0..e - 1).map(|_| random_rational(&mut rng, height)).collect();
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    s[0] = Rational::from_integer(BigInt::from(sign * height.round().max(1.0) as i64)) / Rational::one();
    RationalNormalForm::new(s, t)
}

/// One HeightReport per sample, with log10 heights uniform in the range.
/// Sample i uses seed `spec.seed + i`; failures are kept as rows.
pub fn comparison_report(spec: &SampleSpec, cfg: &SearchConfig) -> Vec<ComparisonRow> {
    (0..spec.count)
        .into_par_iter()
        .map(|i| {
            let seed = spec.seed.wrapping_add(i as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let exp = if spec.count > 1 {
                spec.log10_min + (spec.log10_max - spec.log10_min) * i as f64 / (spec.count - 1) as f64
            } else {
                rng.gen_range(spec.log10_min..=spec.log10_max)
            };
            let height = 10f64.powf(exp);
            match sample_normal_form(spec.d, spec.e, height, seed) {
                Ok(form) => {
                    let report = height_report(&form, cfg).map_err(|e| e.to_string());
                    ComparisonRow { seed, height, form, report }
                }
                Err(e) => ComparisonRow {
                    seed,
                    height,
                    form: RationalNormalForm::new(vec![Rational::zero(); spec.d - 1], vec![Rational::zero(); spec.e - 1])
                        .expect("valid bidegree"),
                    report: Err(e.to_string()),
                },
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{rat, rat_int};

    fn nf(s: &[Rational], t: &[Rational]) -> RationalNormalForm {
        RationalNormalForm::new(s.to_vec(), t.to_vec()).unwrap()
    }

    #[test]
    fn support_examples() {
        let a = nf(&[rat_int(1), rat_int(-1)], &[rat_int(1)]);
        assert_eq!(support_places(&a).unwrap(), vec![Place::Archimedean, Place::PAdic(2), Place::PAdic(3)]);
        let b = nf(&[rat(2, 7), rat_int(0)], &[rat_int(0)]);
        assert_eq!(
            support_places(&b).unwrap(),
            vec![Place::Archimedean, Place::PAdic(2), Place::PAdic(3), Place::PAdic(7)]
        );
    }

    #[test]
    fn weil_examples() {
        let a = nf(&[rat_int(2), rat_int(0)], &[rat_int(3)]);
        assert!((weil_height(&a).unwrap() - (2.0 / 3.0) * 3f64.ln()).abs() < 1e-12);
        let z = nf(&[rat_int(0), rat_int(0)], &[rat_int(0)]);
        assert_eq!(weil_height(&z).unwrap(), 0.0);
        let h = nf(&[rat(1, 2), rat_int(0)], &[rat_int(0)]);
        assert!((weil_height(&h).unwrap() - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn pure_power_crit_is_small() {
        let z = nf(&[rat_int(0), rat_int(0)], &[rat_int(0)]);
        let r = height_report(&z, &SearchConfig::default()).unwrap();
        assert_eq!(r.crit.lo, 0.0);
        assert!(r.crit.hi < 1e-3, "{}", r.crit);
        let sum: f64 = r.places.iter().map(|t| t.crit.hi).sum();
        assert!((sum - r.crit.hi).abs() < 1e-9);
    }

    #[test]
    fn large_entry_escapes() {
        let a = nf(&[rat_int(1_000_000), rat_int(0)], &[rat_int(0)]);
        assert!(crit_height(&a, &SearchConfig::default()).unwrap().lo > 0.0);
    }
}
