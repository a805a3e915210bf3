//! Bounded-critical-path semi-decision and a raster renderer for slices of S_{d,e}.
//!
//! An escaped verdict is a certificate: every vertex beyond the radius has
//! only children of larger modulus, and such orbits leave every compact set.
//! A survived verdict is evidence only.

use std::collections::HashSet;
use std::fmt;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::algebra::complex::{cauchy_radius, ComplexPoly};
use crate::correspondence::{Correspondence, NormalForm};
use crate::error::{CorrdynError, Result};
use crate::localheights::{lambda_local, ArchBounds, Coefficients};
use crate::algebra::rational::Place;

pub const DEFAULT_FRONTIER_CAP: usize = 4096;
/// Shade of pixels whose computation failed.
pub const SENTINEL_SHADE: u8 = 255;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PixelVerdict {
    /// The frontier is nonempty at the full depth; `saturated` when the
    /// frontier cap was hit before that.
    Survived { saturated: bool },
    /// The frontier first empties at step k.
    Escaped(usize),
}

impl PixelVerdict {
    pub fn survived(&self) -> bool {
        matches!(self, PixelVerdict::Survived { .. })
    }
}

impl fmt::Display for PixelVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PixelVerdict::Survived { saturated } => write!(f, "status=survived,saturated={saturated}"),
            PixelVerdict::Escaped(k) => write!(f, "status=escaped,k={k}"),
        }
    }
}

fn cell_key(z: Complex64, cell: f64) -> (i64, i64) {
    ((z.re / cell).round() as i64, (z.im / cell).round() as i64)
}

/// Breadth-first frontier of vertices of modulus ≤ radius reachable from a.
fn frontier_search<F>(a: Complex64, depth: usize, radius: f64, cap: usize, step: F) -> Result<PixelVerdict>
where
    F: Fn(Complex64, &mut Vec<Complex64>) -> Result<()>,
{
    if a.norm() > radius {
        return Ok(PixelVerdict::Escaped(0));
    }
    let cell = radius * 1e-6;
    let mut frontier = vec![a];
    let mut children = Vec::new();
    for k in 1..=depth {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for &x in &frontier {
            children.clear();
            step(x, &mut children)?;
            for &y in &children {
                if y.norm() <= radius && seen.insert(cell_key(y, cell)) {
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            return Ok(PixelVerdict::Escaped(k));
        }
        if next.len() > cap {
            return Ok(PixelVerdict::Survived { saturated: true });
        }
        frontier = next;
    }
    Ok(PixelVerdict::Survived { saturated: false })
}

/// Verdict for the vertex a of a general correspondence.
pub fn bounded_path_witness(corr: &Correspondence, a: Complex64, depth: usize, radius: f64, cap: usize) -> Result<PixelVerdict> {
    frontier_search(a, depth, radius, cap, |x, out| {
        out.extend(corr.branch_step(x)?);
        Ok(())
    })
}

/// The e-th roots of x^d + c, in closed form.
fn pure_step(d: i32, e: usize, c: Complex64, x: Complex64, out: &mut Vec<Complex64>) {
    let w = x.powi(d) + c;
    if w == Complex64::new(0.0, 0.0) {
        out.extend(std::iter::repeat_n(w, e));
        return;
    }
    let (r, theta) = w.to_polar();
    let m = r.powf(1.0 / e as f64);
    for k in 0..e {
        let phi = (theta + 2.0 * std::f64::consts::PI * k as f64) / e as f64;
        out.push(Complex64::from_polar(m, phi));
    }
}

/// Radius for y^e = x^d + c: (2 max(1,|c|))^{1/d}, raised when needed to the
/// root of X^d - X^e - |c| so that children of outside points stay outside.
/// For |c| > 2^{e/(d-e)} the first term already dominates.
pub fn unicritical_radius(d: usize, e: usize, c: Complex64) -> f64 {
    let base = (2.0 * c.norm().max(1.0)).powf(1.0 / d as f64);
    let mut lower = vec![0.0; d];
    lower[0] = c.norm();
    lower[e] += 1.0;
    base.max(cauchy_radius(1.0, &lower) * (1.0 + 1e-9))
}

/// Verdict for y^e = x^d + c with critical point 0. The other critical
/// points (x^d = -c) step straight to 0, so 0 decides membership.
pub fn unicritical_witness(d: usize, e: usize, c: Complex64, depth: usize, cap: usize) -> Result<PixelVerdict> {
    check_bidegree(d, e)?;
    let radius = unicritical_radius(d, e, c);
    frontier_search(Complex64::new(0.0, 0.0), depth, radius, cap, |x, out| {
        pure_step(d as i32, e, c, x, out);
        Ok(())
    })
}

fn check_bidegree(d: usize, e: usize) -> Result<()> {
    if e == 0 || d <= e {
        return Err(CorrdynError::InvalidInput(format!("need d > e >= 1, got d={d}, e={e}")));
    }
    Ok(())
}

/// Which coordinate of a normal form a slice varies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SliceCoord {
    S(usize),
    T(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// y^e = x^d + c.
    Unicritical { d: usize, e: usize },
    /// A normal form with one coordinate replaced by the parameter c.
    NormalFormSlice { base: NormalForm, coord: SliceCoord },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RenderSpec {
    pub family: Family,
    pub center: Complex64,
    pub half_width: f64,
    pub half_height: f64,
    pub width: usize,
    pub height: usize,
    pub depth: usize,
    pub frontier_cap: usize,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            family: Family::Unicritical { d: 3, e: 2 },
            center: Complex64::new(0.0, 0.0),
            half_width: 4.5,
            half_height: 4.5,
            width: 256,
            height: 256,
            depth: 24,
            frontier_cap: DEFAULT_FRONTIER_CAP,
        }
    }
}

impl RenderSpec {
    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(CorrdynError::InvalidInput("resolution must be positive".into()));
        }
        if !(self.half_width > 0.0 && self.half_height > 0.0) {
            return Err(CorrdynError::InvalidInput("window half-widths must be positive".into()));
        }
        if self.depth == 0 {
            return Err(CorrdynError::InvalidInput("depth must be positive".into()));
        }
        if let Family::Unicritical { d, e } = self.family {
            check_bidegree(d, e)?;
        }
        Ok(())
    }

    /// Parameter value at the center of pixel (col, row); row 0 is the top.
    pub fn pixel_center(&self, col: usize, row: usize) -> Complex64 {
        let re = self.center.re - self.half_width + (col as f64 + 0.5) * 2.0 * self.half_width / self.width as f64;
        let im = self.center.im + self.half_height - (row as f64 + 0.5) * 2.0 * self.half_height / self.height as f64;
        Complex64::new(re, im)
    }

    pub fn pixel_diagonal(&self) -> f64 {
        let dx = 2.0 * self.half_width / self.width as f64;
        let dy = 2.0 * self.half_height / self.height as f64;
        dx.hypot(dy)
    }
}

/// Verdict at one parameter value of a family.
pub fn member(family: &Family, c: Complex64, depth: usize, cap: usize) -> Result<PixelVerdict> {
    match family {
        Family::Unicritical { d, e } => unicritical_witness(*d, *e, c, depth, cap),
        Family::NormalFormSlice { base, coord } => {
            let mut s = base.s().to_vec();
            let mut t = base.t().to_vec();
            match *coord {
                SliceCoord::S(i) if i < s.len() => s[i] = c,
                SliceCoord::T(j) if j < t.len() => t[j] = c,
                _ => return Err(CorrdynError::InvalidInput("slice coordinate out of range".into())),
            }
            let nf = NormalForm::new(s, t)?;
            let corr = nf.correspondence();
            let lambda = lambda_local(Coefficients::Complex(&corr), Place::Archimedean)?;
            let radius = ArchBounds::new(&corr, lambda).radius();
            // survived needs a bounded path from every critical point
            let mut worst: Option<PixelVerdict> = None;
            for x in nf.critical_points()? {
                let v = bounded_path_witness(&corr, x, depth, radius, cap)?;
                worst = Some(match (worst, v) {
                    (None, v) => v,
                    (Some(PixelVerdict::Escaped(a)), PixelVerdict::Escaped(b)) => PixelVerdict::Escaped(a.min(b)),
                    (Some(w @ PixelVerdict::Escaped(_)), _) => w,
                    (_, v @ PixelVerdict::Escaped(_)) => v,
                    (Some(PixelVerdict::Survived { saturated: a }), PixelVerdict::Survived { saturated: b }) => {
                        PixelVerdict::Survived { saturated: a || b }
                    }
                });
            }
            Ok(worst.expect("a normal form has critical points"))
        }
    }
}

/// Survived pixel count and the bounding box of their centers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RenderSummary {
    pub survived: usize,
    pub saturated: usize,
    pub failures: usize,
    /// (re0, re1, im0, im1)
    pub bbox: Option<(f64, f64, f64, f64)>,
}

impl fmt::Display for RenderSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.bbox {
            Some((a, b, c, d)) => write!(f, "survived_pixels={},bbox={a},{b},{c},{d}", self.survived),
            None => write!(f, "survived_pixels={},bbox=none", self.survived),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Render {
    pub spec: RenderSpec,
    /// Row-major; `None` marks a failed pixel.
    pub verdicts: Vec<Option<PixelVerdict>>,
    pub summary: RenderSummary,
}

impl Render {
    /// 255 (1 - k/N) for escape at step k, 0 for survived.
    pub fn shade(&self, v: Option<PixelVerdict>) -> u8 {
        match v {
            None => SENTINEL_SHADE,
            Some(PixelVerdict::Survived { .. }) => 0,
            Some(PixelVerdict::Escaped(k)) => {
                let n = self.spec.depth as f64;
                (255.0 * (1.0 - k as f64 / n)).round().clamp(0.0, 255.0) as u8
            }
        }
    }

    pub fn pixels(&self) -> Vec<u8> {
        self.verdicts.iter().map(|&v| self.shade(v)).collect()
    }

    /// Binary PGM (P5).
    pub fn write_pgm<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        write!(out, "P5\n{} {}\n255\n", self.spec.width, self.spec.height)?;
        out.write_all(&self.pixels())
    }

    pub fn verdict(&self, col: usize, row: usize) -> Option<PixelVerdict> {
        self.verdicts[row * self.spec.width + col]
    }
}

/// Per-pixel verdicts on the critical point(s) of the slice.
pub fn render(spec: &RenderSpec) -> Result<Render> {
    spec.validate()?;
    let verdicts: Vec<Option<PixelVerdict>> = (0..spec.width * spec.height)
        .into_par_iter()
        .map(|i| {
            let c = spec.pixel_center(i % spec.width, i / spec.width);
            member(&spec.family, c, spec.depth, spec.frontier_cap).ok()
        })
        .collect();
    let mut summary = RenderSummary { survived: 0, saturated: 0, failures: 0, bbox: None };
    for (i, v) in verdicts.iter().enumerate() {
        match v {
            None => summary.failures += 1,
            Some(PixelVerdict::Survived { saturated }) => {
                summary.survived += 1;
                summary.saturated += *saturated as usize;
                let c = spec.pixel_center(i % spec.width, i / spec.width);
                summary.bbox = Some(match summary.bbox {
                    None => (c.re, c.re, c.im, c.im),
                    Some((a, b, lo, hi)) => (a.min(c.re), b.max(c.re), lo.min(c.im), hi.max(c.im)),
                });
            }
            Some(PixelVerdict::Escaped(_)) => {}
        }
    }
    Ok(Render { spec: spec.clone(), verdicts, summary })
}

/// The correspondence y^e = x^d + c as (f, g).
pub fn unicritical_correspondence(d: usize, e: usize, c: Complex64) -> Result<Correspondence> {
    check_bidegree(d, e)?;
    let mut f = vec![Complex64::new(0.0, 0.0); d + 1];
    f[0] = c;
    f[d] = Complex64::new(1.0, 0.0);
    let mut g = vec![Complex64::new(0.0, 0.0); e + 1];
    g[e] = Complex64::new(1.0, 0.0);
    Correspondence::new(ComplexPoly::new(f), ComplexPoly::new(g))
}
