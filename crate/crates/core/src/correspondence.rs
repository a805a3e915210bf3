//! Variable-separated correspondences g(y) = f(x) and their path trees.
//!
//! A correspondence of bidegree (d, e) with d > e ≥ 1 sends x to the e roots
//! of g(y) = f(x). Every such curve is equivalent, under one affine change of
//! coordinate on both sides and an affine rescaling of the common value, to
//! a normal form f_s(x) = g_t(y) with f_s' = Π(x - s_i), g_t' = Π(y - t_j)
//! and vanishing constant terms.

use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed};

use crate::algebra::complex::{roots_complex, ComplexPoly, ROOT_TOL};
use crate::algebra::fp::FpPoly;
use crate::algebra::ratpoly::RatPoly;
use crate::algebra::rational::{format_rational, parse_rational, rat_int, rational_nth_root, to_f64, Rational};
use crate::error::{CorrdynError, Result};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn check_bidegree(d: Option<usize>, e: Option<usize>) -> Result<(usize, usize)> {
    match (d, e) {
        (Some(d), Some(e)) if d > e && e >= 1 => Ok((d, e)),
        (d, e) => Err(CorrdynError::InvalidInput(format!(
            "bidegree must satisfy d > e >= 1, got d={d:?}, e={e:?}"
        ))),
    }
}

/// Antiderivative of a complex polynomial with zero constant term.
fn integral(p: &ComplexPoly) -> ComplexPoly {
    let mut out = vec![c(0.0)];
    out.extend(p.coeffs().iter().enumerate().map(|(i, &a)| a / (i + 1) as f64));
    ComplexPoly::new(out)
}

/// The argument in [0, 2π), with tiny negative angles snapped to 0.
fn nonneg_arg(z: Complex64) -> f64 {
    let a = z.im.atan2(z.re);
    if a > -1e-12 && a < 0.0 {
        0.0
    } else if a < 0.0 {
        a + std::f64::consts::TAU
    } else {
        a
    }
}

/// Sorting key for "smallest magnitude, ties by argument".
fn magnitude_then_arg(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    let (ma, mb) = (a.norm(), b.norm());
    if (ma - mb).abs() <= 1e-9 * ma.max(mb).max(1e-300) {
        nonneg_arg(*a).total_cmp(&nonneg_arg(*b))
    } else {
        ma.total_cmp(&mb)
    }
}

/// z ↦ scale·z + shift
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineMap {
    pub scale: Complex64,
    pub shift: Complex64,
}

impl AffineMap {
    pub fn new(scale: Complex64, shift: Complex64) -> Result<Self> {
        if scale.norm() == 0.0 || !scale.is_finite() {
            return Err(CorrdynError::InvalidInput("affine scale must be nonzero".into()));
        }
        Ok(AffineMap { scale, shift })
    }

    pub fn identity() -> Self {
        AffineMap { scale: c(1.0), shift: c(0.0) }
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        self.scale * z + self.shift
    }

    pub fn inverse(&self) -> Self {
        let inv = self.scale.inv();
        AffineMap { scale: inv, shift: -self.shift * inv }
    }
}

/// A complex correspondence g(y) = f(x).
#[derive(Clone, Debug, PartialEq)]
pub struct Correspondence {
    f: ComplexPoly,
    g: ComplexPoly,
}

impl Correspondence {
    pub fn new(f: ComplexPoly, g: ComplexPoly) -> Result<Self> {
        let df = if f.is_zero() { None } else { Some(f.degree()) };
        let dg = if g.is_zero() { None } else { Some(g.degree()) };
        check_bidegree(df, dg)?;
        Ok(Correspondence { f, g })
    }

    pub fn f(&self) -> &ComplexPoly {
        &self.f
    }

    pub fn g(&self) -> &ComplexPoly {
        &self.g
    }

    pub fn d(&self) -> usize {
        self.f.degree()
    }

    pub fn e(&self) -> usize {
        self.g.degree()
    }

    /// The e solutions y of g(y) = f(x), with multiplicity.
    pub fn branch_step(&self, x: Complex64) -> Result<Vec<Complex64>> {
        self.fibre(self.f.eval(x))
    }

    /// The e solutions y of g(y) = w, with multiplicity.
    pub fn fibre(&self, w: Complex64) -> Result<Vec<Complex64>> {
        let mut coeffs = self.g.coeffs().to_vec();
        coeffs[0] -= w;
        if self.e() == 1 {
            return Ok(vec![-coeffs[0] / coeffs[1]]);
        }
        roots_complex(&ComplexPoly::new(coeffs), ROOT_TOL)
    }

    /// |g(y) - f(x)| relative to max(1, |f(x)|).
    pub fn relation_residual(&self, x: Complex64, y: Complex64) -> f64 {
        let fx = self.f.eval(x);
        (self.g.eval(y) - fx).norm() / fx.norm().max(1.0)
    }

    /// Critical x-values: roots of f' together with f^{-1}(g(τ)) for each root τ of g'.
    pub fn critical_points(&self) -> Result<Vec<Complex64>> {
        let mut out = roots_complex(&self.f.derivative(), ROOT_TOL)?;
        for w in self.branch_values()? {
            let target = self.f.sub(&ComplexPoly::new(vec![w]));
            out.extend(roots_complex(&target, ROOT_TOL)?);
        }
        crate::algebra::complex::sort_roots(&mut out);
        Ok(out)
    }

    /// Values g(τ) at the roots τ of g', with multiplicity.
    pub fn branch_values(&self) -> Result<Vec<Complex64>> {
        if self.e() == 1 {
            return Ok(vec![]);
        }
        Ok(roots_complex(&self.g.derivative(), ROOT_TOL)?
            .into_iter()
            .map(|tau| self.g.eval(tau))
            .collect())
    }

    /// Starting data for the per-critical-point tree searches, one entry per
    /// distinct value. A fibre entry stands for all d critical points above a
    /// branch value w, whose successors are exactly the solutions of g(y) = w.
    pub fn critical_starts(&self) -> Result<Vec<CriticalStart>> {
        let mut out: Vec<CriticalStart> = Vec::new();
        let mut push = |s: CriticalStart| {
            if !out.iter().any(|o| o.close_to(&s)) {
                out.push(s);
            }
        };
        for sigma in roots_complex(&self.f.derivative(), ROOT_TOL)? {
            push(CriticalStart::Point(sigma));
        }
        for w in self.branch_values()? {
            push(CriticalStart::Fibre(w));
        }
        Ok(out)
    }

    /// All one-step extensions of a prefix (as a multiset).
    pub fn extend(&self, prefix: &PathPrefix) -> Result<Vec<PathPrefix>> {
        let last = *prefix.vertices.last().expect("prefix is nonempty");
        Ok(self
            .branch_step(last)?
            .into_iter()
            .map(|y| {
                let mut v = prefix.vertices.clone();
                v.push(y);
                PathPrefix { vertices: v }
            })
            .collect())
    }

    /// A path from `start` that revisits one of its own vertices within `max_len` steps.
    pub fn find_preperiodic_path(&self, start: Complex64, max_len: usize) -> Result<Option<PathPrefix>> {
        let same = |a: Complex64, b: Complex64| (a - b).norm() <= 1e-8 * a.norm().max(1.0);
        let mut level = vec![PathPrefix::new(start)];
        for _ in 0..max_len {
            let mut next: Vec<PathPrefix> = Vec::new();
            for path in &level {
                for ext in self.extend(path)? {
                    let y = *ext.vertices.last().unwrap();
                    if ext.vertices[..ext.vertices.len() - 1].iter().any(|&v| same(v, y)) {
                        return Ok(Some(ext));
                    }
                    if !next.iter().any(|p| same(*p.vertices.last().unwrap(), y)) {
                        next.push(ext);
                    }
                }
            }
            if next.len() > 4096 {
                next.truncate(4096);
            }
            level = next;
        }
        Ok(None)
    }

    /// Normal form with the witnessing coordinate change ψ and value change φ:
    /// φ(g(x)) = G(ψ(x)) and φ(f(x)) = F(ψ(x)).
    pub fn normalize(&self) -> Result<Normalization> {
        let (d, e) = (self.d(), self.e());
        let diff = self.g.sub(&self.f);
        let mut common = roots_complex(&diff, ROOT_TOL)?;
        common.sort_by(magnitude_then_arg);
        let a = common[0];
        let value = self.f.eval(a);
        let (ad, be) = (self.f.leading(), self.g.leading());
        let m = (d - e) as f64;
        let k = be * e as f64 / (ad * d as f64);
        let beta = (0..d - e)
            .map(|j| Complex64::from_polar(k.norm().powf(1.0 / m), (k.arg() + std::f64::consts::TAU * j as f64) / m))
            .min_by(|x, y| nonneg_arg(*x).total_cmp(&nonneg_arg(*y)))
            .unwrap();
        let alpha = (be * e as f64 * beta.powu(e as u32)).inv();
        let reduce = |p: &ComplexPoly, lead: f64| -> ComplexPoly {
            let mut q = p.compose_affine(beta, a).sub(&ComplexPoly::new(vec![value])).scale(alpha);
            let mut coeffs = q.coeffs().to_vec();
            coeffs[0] = c(0.0);
            *coeffs.last_mut().unwrap() = c(lead);
            q = ComplexPoly::new(coeffs);
            q
        };
        let big_f = reduce(&self.f, 1.0 / d as f64);
        let big_g = reduce(&self.g, 1.0 / e as f64);
        let s = roots_complex(&big_f.derivative(), ROOT_TOL)?;
        let t = if e == 1 { vec![] } else { roots_complex(&big_g.derivative(), ROOT_TOL)? };
        let pre = AffineMap::new(beta.inv(), -a / beta)?;
        let post = AffineMap::new(alpha, -alpha * value)?;
        Ok(Normalization { form: NormalForm::new(s, t)?, pre, post })
    }
}

/// Start of a critical tree search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CriticalStart {
    /// A critical x-value; its successors are the fibre over f(x).
    Point(Complex64),
    /// The d critical x-values over a branch value w; successors are g^{-1}(w).
    Fibre(Complex64),
}

impl CriticalStart {
    fn close_to(&self, o: &CriticalStart) -> bool {
        let near = |a: Complex64, b: Complex64| (a - b).norm() <= 1e-9 * a.norm().max(1.0);
        match (self, o) {
            (CriticalStart::Point(a), CriticalStart::Point(b)) => near(*a, *b),
            (CriticalStart::Fibre(a), CriticalStart::Fibre(b)) => near(*a, *b),
            _ => false,
        }
    }
}

/// Result of normalization.
#[derive(Clone, Debug, PartialEq)]
pub struct Normalization {
    pub form: NormalForm,
    /// ψ, the coordinate change on x and y.
    pub pre: AffineMap,
    /// φ, the change on the common value.
    pub post: AffineMap,
}

/// The tuples (s, t) of a normal form, sorted by (re, im).
#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm {
    s: Vec<Complex64>,
    t: Vec<Complex64>,
}

impl NormalForm {
    pub fn new(mut s: Vec<Complex64>, mut t: Vec<Complex64>) -> Result<Self> {
        let (d, e) = (s.len() + 1, t.len() + 1);
        check_bidegree(Some(d), Some(e))?;
        crate::algebra::complex::sort_roots(&mut s);
        crate::algebra::complex::sort_roots(&mut t);
        Ok(NormalForm { s, t })
    }

    pub fn s(&self) -> &[Complex64] {
        &self.s
    }

    pub fn t(&self) -> &[Complex64] {
        &self.t
    }

    pub fn d(&self) -> usize {
        self.s.len() + 1
    }

    pub fn e(&self) -> usize {
        self.t.len() + 1
    }

    pub fn f_s(&self) -> ComplexPoly {
        integral(&ComplexPoly::from_roots(&self.s))
    }

    pub fn g_t(&self) -> ComplexPoly {
        integral(&ComplexPoly::from_roots(&self.t))
    }

    pub fn correspondence(&self) -> Correspondence {
        Correspondence { f: self.f_s(), g: self.g_t() }
    }

    /// The de - 1 critical x-values with multiplicity: roots of f_s' · Π_j (f_s - g_t(t_j)).
    pub fn critical_points(&self) -> Result<Vec<Complex64>> {
        let f = self.f_s();
        let g = self.g_t();
        let mut out = self.s.clone();
        for &tj in &self.t {
            let target = f.sub(&ComplexPoly::new(vec![g.eval(tj)]));
            out.extend(roots_complex(&target, ROOT_TOL)?);
        }
        crate::algebra::complex::sort_roots(&mut out);
        Ok(out)
    }

    /// max(|s_i|) and max(|t_j|), the archimedean sizes entering heights.
    pub fn sup_norms(&self) -> (f64, f64) {
        let m = |v: &[Complex64]| v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        (m(&self.s), m(&self.t))
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Complex64]| {
            v.iter().map(|z| crate::algebra::complex::format_complex(*z)).collect::<Vec<_>>().join(",")
        };
        write!(f, "d={};e={};s={};t={}", self.d(), self.e(), join(&self.s), join(&self.t))
    }
}

/// A finite path x_0 → x_1 → ⋯ → x_n.
#[derive(Clone, Debug, PartialEq)]
pub struct PathPrefix {
    vertices: Vec<Complex64>,
}

impl PathPrefix {
    pub fn new(x0: Complex64) -> Self {
        PathPrefix { vertices: vec![x0] }
    }

    pub fn from_vertices(vertices: Vec<Complex64>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(CorrdynError::InvalidInput("a path needs at least one vertex".into()));
        }
        Ok(PathPrefix { vertices })
    }

    pub fn vertices(&self) -> &[Complex64] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn last(&self) -> Complex64 {
        *self.vertices.last().unwrap()
    }

    /// Drops x_0; a length-0 prefix has no shift.
    pub fn shift(&self) -> Option<PathPrefix> {
        if self.vertices.len() < 2 {
            None
        } else {
            Some(PathPrefix { vertices: self.vertices[1..].to_vec() })
        }
    }

    /// Largest relation residual along the prefix.
    pub fn max_residual(&self, corr: &Correspondence) -> f64 {
        self.vertices
            .windows(2)
            .map(|w| corr.relation_residual(w[0], w[1]))
            .fold(0.0, f64::max)
    }
}

/// A correspondence with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalCorrespondence {
    f: RatPoly,
    g: RatPoly,
}

/// Exact rational start data for critical tree searches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RationalCriticalStart {
    Point(Rational),
    Fibre(Rational),
}

impl RationalCorrespondence {
    pub fn new(f: RatPoly, g: RatPoly) -> Result<Self> {
        check_bidegree(f.degree(), g.degree())?;
        Ok(RationalCorrespondence { f, g })
    }

    pub fn f(&self) -> &RatPoly {
        &self.f
    }

    pub fn g(&self) -> &RatPoly {
        &self.g
    }

    pub fn d(&self) -> usize {
        self.f.degree().unwrap()
    }

    pub fn e(&self) -> usize {
        self.g.degree().unwrap()
    }

    pub fn to_complex(&self) -> Correspondence {
        Correspondence { f: self.f.to_complex(), g: self.g.to_complex() }
    }

    /// Parses `d=<d>;e=<e>;f=<c0>,...;g=<c0>,...`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut d = None;
        let mut e = None;
        let mut f = None;
        let mut g = None;
        for part in text.split(';') {
            let (key, val) = part
                .split_once('=')
                .ok_or_else(|| CorrdynError::Parse(format!("bad correspondence field `{part}`")))?;
            let key = key.trim();
            let val = val.trim();
            let int = |v: &str| v.parse::<usize>().map_err(|_| CorrdynError::Parse(format!("bad degree `{v}`")));
            match key {
                "d" => d = Some(int(val)?),
                "e" => e = Some(int(val)?),
                "f" => f = Some(RatPoly::parse_list(val)?),
                "g" => g = Some(RatPoly::parse_list(val)?),
                _ => return Err(CorrdynError::Parse(format!("unknown field `{key}`"))),
            }
        }
        let (f, g) = match (f, g) {
            (Some(f), Some(g)) => (f, g),
            _ => return Err(CorrdynError::Parse("need both f= and g=".into())),
        };
        let out = Self::new(f, g)?;
        if d.is_some_and(|d| d != out.d()) || e.is_some_and(|e| e != out.e()) {
            return Err(CorrdynError::Parse("declared bidegree does not match coefficients".into()));
        }
        Ok(out)
    }

    /// Exact critical start data; fails if f' or g' does not split over ℚ.
    pub fn critical_starts(&self) -> Result<Vec<RationalCriticalStart>> {
        let split = |p: &RatPoly, what: &str| -> Result<Vec<Rational>> {
            let mut r = p.rational_roots()?;
            if r.len() != p.degree().unwrap_or(0) {
                return Err(CorrdynError::ExtensionRequired(format!("{what} does not split over Q")));
            }
            r.dedup();
            Ok(r)
        };
        let mut out: Vec<RationalCriticalStart> = split(&self.f.derivative(), "f'")?
            .into_iter()
            .map(RationalCriticalStart::Point)
            .collect();
        if self.e() > 1 {
            let mut values: Vec<Rational> =
                split(&self.g.derivative(), "g'")?.iter().map(|tau| self.g.eval(tau)).collect();
            values.sort();
            values.dedup();
            out.extend(values.into_iter().map(RationalCriticalStart::Fibre));
        }
        Ok(out)
    }

    /// Exact normalization over ℚ. The deterministic conventions are applied
    /// among rational candidates; when none exists an extension is required.
    pub fn normalize(&self) -> Result<RationalNormalization> {
        let (d, e) = (self.d(), self.e());
        let mut common = self.g.sub(&self.f).rational_roots()?;
        if common.is_empty() {
            return Err(CorrdynError::ExtensionRequired("g - f has no rational root".into()));
        }
        common.sort_by(|x, y| x.abs().cmp(&y.abs()).then(y.cmp(x)));
        let a = common[0].clone();
        let value = self.f.eval(&a);
        let k = self.g.leading() * rat_int(e as i64) / (self.f.leading() * rat_int(d as i64));
        let beta = rational_nth_root(&k, (d - e) as u32)
            .ok_or_else(|| CorrdynError::ExtensionRequired(format!("no rational root of beta^{} = {}", d - e, format_rational(&k))))?;
        let alpha = Rational::one() / (self.g.leading() * rat_int(e as i64) * num_traits::pow(beta.clone(), e));
        let reduce = |p: &RatPoly| p.compose_affine(&beta, &a).sub(&RatPoly::constant(value.clone())).scale(&alpha);
        let big_f = reduce(&self.f);
        let big_g = reduce(&self.g);
        let s = big_f.derivative().rational_roots()?;
        let t = if e == 1 { vec![] } else { big_g.derivative().rational_roots()? };
        if s.len() != d - 1 || t.len() != e - 1 {
            return Err(CorrdynError::ExtensionRequired("derivative does not split over Q".into()));
        }
        Ok(RationalNormalization {
            form: RationalNormalForm::new(s, t)?,
            pre_scale: Rational::one() / &beta,
            pre_shift: -&a / &beta,
            post_scale: alpha.clone(),
            post_shift: -alpha * value,
        })
    }
}

impl fmt::Display for RationalCorrespondence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={};e={};f={};g={}", self.d(), self.e(), self.f, self.g)
    }
}

/// Exact normalization with witnessing affine maps x ↦ pre_scale·x + pre_shift
/// and z ↦ post_scale·z + post_shift.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalNormalization {
    pub form: RationalNormalForm,
    pub pre_scale: Rational,
    pub pre_shift: Rational,
    pub post_scale: Rational,
    pub post_shift: Rational,
}

/// A normal form with rational (s, t), sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalNormalForm {
    s: Vec<Rational>,
    t: Vec<Rational>,
}

impl RationalNormalForm {
    pub fn new(mut s: Vec<Rational>, mut t: Vec<Rational>) -> Result<Self> {
        check_bidegree(Some(s.len() + 1), Some(t.len() + 1))?;
        s.sort();
        t.sort();
        Ok(RationalNormalForm { s, t })
    }

    pub fn s(&self) -> &[Rational] {
        &self.s
    }

    pub fn t(&self) -> &[Rational] {
        &self.t
    }

    pub fn d(&self) -> usize {
        self.s.len() + 1
    }

    pub fn e(&self) -> usize {
        self.t.len() + 1
    }

    pub fn f_s(&self) -> RatPoly {
        RatPoly::from_roots(&self.s).integral()
    }

    pub fn g_t(&self) -> RatPoly {
        RatPoly::from_roots(&self.t).integral()
    }

    pub fn correspondence(&self) -> RationalCorrespondence {
        RationalCorrespondence { f: self.f_s(), g: self.g_t() }
    }

    pub fn to_complex(&self) -> NormalForm {
        NormalForm::new(
            self.s.iter().map(|x| c(to_f64(x))).collect(),
            self.t.iter().map(|x| c(to_f64(x))).collect(),
        )
        .expect("bidegree already checked")
    }

    /// Parses `s=<r>,...;t=<r>,...` (either list may be empty).
    pub fn parse(text: &str) -> Result<Self> {
        let mut s = None;
        let mut t = None;
        for part in text.split(';') {
            let (key, val) = part
                .split_once('=')
                .ok_or_else(|| CorrdynError::Parse(format!("bad normal-form field `{part}`")))?;
            let list = |v: &str| -> Result<Vec<Rational>> {
                if v.trim().is_empty() {
                    Ok(vec![])
                } else {
                    v.split(',').map(parse_rational).collect()
                }
            };
            match key.trim() {
                "s" => s = Some(list(val)?),
                "t" => t = Some(list(val)?),
                "d" | "e" => {}
                k => return Err(CorrdynError::Parse(format!("unknown field `{k}`"))),
            }
        }
        Self::new(s.unwrap_or_default(), t.unwrap_or_default())
    }
}

impl fmt::Display for RationalNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>().join(",");
        write!(f, "d={};e={};s={};t={}", self.d(), self.e(), join(&self.s), join(&self.t))
    }
}

/// A correspondence over F_p; the field need not contain all e branches.
#[derive(Clone, Debug, PartialEq)]
pub struct FpCorrespondence {
    f: FpPoly,
    g: FpPoly,
}

impl FpCorrespondence {
    pub fn new(f: FpPoly, g: FpPoly) -> Result<Self> {
        if f.modulus() != g.modulus() {
            return Err(CorrdynError::ModulusMismatch(f.modulus(), g.modulus()));
        }
        check_bidegree(f.degree(), g.degree())?;
        Ok(FpCorrespondence { f, g })
    }

    pub fn from_rational(corr: &RationalCorrespondence, p: u64) -> Result<Self> {
        let reduce = |poly: &RatPoly| -> Result<FpPoly> {
            let mut out = Vec::new();
            for q in poly.coeffs() {
                let den = mod_int(q.denom(), p);
                if den == 0 {
                    return Err(CorrdynError::InvalidInput(format!("coefficient not {p}-integral")));
                }
                let num = mod_int(q.numer(), p);
                out.push(crate::algebra::fp::mul_mod(num, crate::algebra::fp::inv_mod(den, p)?, p));
            }
            Ok(FpPoly::new(p, out))
        };
        Self::new(reduce(&corr.f)?, reduce(&corr.g)?)
    }

    /// Roots y ∈ F_p of g(y) = f(x), repeated by multiplicity.
    pub fn branch_step(&self, x: u64) -> Vec<u64> {
        let p = self.f.modulus();
        let poly = self.g.sub(&FpPoly::constant(p, self.f.eval(x)));
        let mut out = Vec::new();
        for r in poly.roots() {
            let lin = FpPoly::new(p, vec![(p - r) % p, 1]);
            let m = poly.valuation(&lin).expect("nonzero polynomial");
            out.extend(std::iter::repeat_n(r, m as usize));
        }
        out
    }
}

fn mod_int(n: &num_bigint::BigInt, p: u64) -> u64 {
    use num_traits::ToPrimitive;
    let r = n % num_bigint::BigInt::from(p);
    let r = if r.is_negative() { r + num_bigint::BigInt::from(p) } else { r };
    r.to_u64().unwrap()
}

/// Convenience for tests and the CLI: the pure-power form (1/e)y^e = (1/d)x^d.
pub fn pure_power(d: usize, e: usize) -> Result<NormalForm> {
    NormalForm::new(vec![c(0.0); d - 1], vec![c(0.0); e.max(1) - 1])
}
