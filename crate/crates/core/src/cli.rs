//! Line-oriented command-line frontend.
//!
//! Records go to `out`, diagnostics to `err`. Exit status is 0 on success,
//! 1 on bad input and 2 when a budget runs out.

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::algebra::complex::{format_complex, parse_complex, roots_complex, ComplexPoly};
use crate::algebra::newton::newton_polygon_root_valuations;
use crate::algebra::rational::{format_rational, padic_valuation, parse_rational, Place, Rational};
use crate::algebra::resultant::resultant_oracle;
use crate::algebra::FpPoly;
use crate::correspondence::{PathPrefix, RationalCorrespondence, RationalCriticalStart, RationalNormalForm};
use crate::error::{CorrdynError, Result};
use crate::heights::{
    comparison_report, crit_height_general, height_report, pcc_status, support_places, weil_height, local_weil, PccStatus,
    SampleSpec,
};
use crate::localheights::{
    expected_green_mc, green, green_min, green_min_padic, lambda_capital, lambda_capital_padic, lambda_local_with,
    ArchBounds, BranchPolicy, Coefficients, GreenOutcome, GreenStart, LambdaConvention, PadicStart, PathSpec, SearchConfig,
};
use crate::sdset::{bounded_path_witness, render, unicritical_witness, Family, RenderSpec, SliceCoord};
use crate::unicritical::{UnicriticalFamily, DEFAULT_DEGREE_CAP};

/// Operation → the subcommand that exposes it.
pub const COVERAGE: &[(&str, &str)] = &[
    ("roots_complex", "branch"),
    ("padic_valuation", "crit"),
    ("newton_polygon_root_valuations", "branch"),
    ("fp_gcd", "primitive"),
    ("fp_radical", "primitive"),
    ("resultant_oracle", "fn"),
    ("normalize", "normalize"),
    ("critical_points", "crit"),
    ("branch_step", "branch"),
    ("extend", "branch"),
    ("lambda_local", "lambda"),
    ("green", "green-min"),
    ("green_min", "green-min"),
    ("green_min_padic", "green-min"),
    ("lambda_capital", "capital-lambda"),
    ("expected_green_mc", "mc-green"),
    ("support_places", "hweil"),
    ("weil_height", "hweil"),
    ("crit_height", "hcrit"),
    ("comparison_report", "compare-heights"),
    ("fn_poly", "fn"),
    ("valuation_profile", "primitive"),
    ("has_primitive_prime_factor", "primitive"),
    ("bound_threshold", "bound-threshold"),
    ("period_search", "period-search"),
    ("bounded_path_witness", "member"),
    ("render", "render"),
];

pub const SUBCOMMANDS: &[&str] = &[
    "normalize",
    "crit",
    "branch",
    "lambda",
    "green-min",
    "capital-lambda",
    "hweil",
    "hcrit",
    "compare-heights",
    "fn",
    "primitive",
    "bound-threshold",
    "period-search",
    "member",
    "render",
    "mc-green",
];

#[derive(Parser, Debug)]
#[command(name = "corrdyn", about = "Dynamics of polynomial correspondences", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// A correspondence, either as `f=<c0>,..;g=<c0>,..` or as a normal form `s=..;t=..`.
#[derive(Args, Debug)]
struct CorrArgs {
    #[arg(long)]
    corr: Option<String>,
    #[arg(long)]
    form: Option<String>,
}

impl CorrArgs {
    fn load(&self) -> Result<RationalCorrespondence> {
        match (&self.corr, &self.form) {
            (Some(c), None) => RationalCorrespondence::parse(c),
            (None, Some(f)) => Ok(RationalNormalForm::parse(f)?.correspondence()),
            _ => Err(CorrdynError::InvalidInput("give exactly one of --corr or --form".into())),
        }
    }
}

#[derive(Args, Debug)]
struct Budget {
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
    depth: u32,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long = "frontier-cap", default_value_t = 4096, value_parser = clap::value_parser!(u32).range(1..))]
    frontier_cap: u32,
}

impl Budget {
    fn config(&self) -> Result<SearchConfig> {
        if !(self.tol > 0.0) {
            return Err(CorrdynError::InvalidInput("--tol must be positive".into()));
        }
        Ok(SearchConfig { depth: self.depth as usize, tol: self.tol, frontier_cap: self.frontier_cap as usize })
    }
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    e: u64,
    #[arg(long = "degree-cap", default_value_t = DEFAULT_DEGREE_CAP, value_parser = clap::value_parser!(u64).range(1..))]
    degree_cap: u64,
}

impl FamilyArgs {
    fn family(&self) -> Result<UnicriticalFamily> {
        UnicriticalFamily::new(self.p, self.e)
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Normal form and witnessing affine maps.
    Normalize {
        #[command(flatten)]
        corr: CorrArgs,
    },
    /// Critical points and search starts; p-adic valuations with --p.
    Crit {
        #[command(flatten)]
        corr: CorrArgs,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Successors of --c, extensions of --path, roots of --poly, or child valuations with --p.
    Branch {
        #[command(flatten)]
        corr: CorrArgs,
        #[arg(long)]
        c: Option<String>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        path: Option<String>,
        #[arg(long)]
        poly: Option<String>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// The local constant λ at ∞ or at --p.
    Lambda {
        #[command(flatten)]
        corr: CorrArgs,
        #[arg(long)]
        p: Option<u64>,
        /// Put the log(2d) correction at the p-adic places instead.
        #[arg(long)]
        flipped: bool,
    },
    /// Minimal escape rate from --c, or the escape rate of one --path.
    GreenMin {
        #[command(flatten)]
        corr: CorrArgs,
        #[arg(long)]
        c: Option<String>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        path: Option<String>,
        /// largest, smallest, cycle, or a root index
        #[arg(long, default_value = "largest")]
        policy: String,
        #[command(flatten)]
        budget: Budget,
    },
    /// Maximum of the minimal escape rates over the critical starts.
    CapitalLambda {
        #[command(flatten)]
        corr: CorrArgs,
        #[arg(long)]
        p: Option<u64>,
        #[command(flatten)]
        budget: Budget,
    },
    /// Weil height of a rational normal form, by place.
    Hweil {
        #[arg(long)]
        form: String,
    },
    /// Critical height by place, with a PCC classification.
    Hcrit {
        #[command(flatten)]
        corr: CorrArgs,
        #[arg(long = "path-len", default_value_t = 12)]
        path_len: usize,
        #[command(flatten)]
        budget: Budget,
    },
    /// Sampled comparison of critical and Weil heights.
    CompareHeights {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        e: usize,
        /// number of samples
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "log10-min", default_value_t = 2.0)]
        log10_min: f64,
        #[arg(long = "log10-max", default_value_t = 8.0)]
        log10_max: f64,
        #[command(flatten)]
        budget: Budget,
    },
    /// The polynomial f_n over F_p; the resultant oracle with --oracle.
    Fn {
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        oracle: bool,
    },
    /// Primitive prime factor of f_n; v_pi(f_n) with --r and --pi.
    Primitive {
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: Option<u32>,
        #[arg(long)]
        pi: Option<String>,
    },
    /// Least n past which the degree bound always holds.
    BoundThreshold {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u64,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Certified critical cycles of exact length n over F_{p^k}.
    PeriodSearch {
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
    },
    /// Bounded-path verdict for y^e = x^d + c, or from vertex --c of --corr.
    Member {
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        e: usize,
        #[arg(long)]
        c: String,
        #[arg(long)]
        corr: Option<String>,
        #[arg(long, default_value_t = 24, value_parser = clap::value_parser!(u32).range(1..))]
        depth: u32,
        #[arg(long = "frontier-cap", default_value_t = 4096, value_parser = clap::value_parser!(u32).range(1..))]
        frontier_cap: u32,
    },
    /// Raster of a parameter slice as binary PGM.
    Render {
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        e: usize,
        /// vary one coordinate (s<i> or t<j>) of this normal form instead
        #[arg(long)]
        form: Option<String>,
        #[arg(long)]
        coord: Option<String>,
        #[arg(long, default_value = "0,0,4.5")]
        window: String,
        #[arg(long, default_value = "256x256")]
        res: String,
        #[arg(long, default_value_t = 24, value_parser = clap::value_parser!(u32).range(1..))]
        depth: u32,
        #[arg(long = "frontier-cap", default_value_t = 4096, value_parser = clap::value_parser!(u32).range(1..))]
        frontier_cap: u32,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Monte Carlo average escape rate over random paths from --c.
    McGreen {
        #[command(flatten)]
        corr: CorrArgs,
        #[arg(long)]
        c: String,
        /// number of samples
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u32).range(1..))]
        depth: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Runs one command line (without the program name) and returns the exit status.
pub fn dispatch<S: AsRef<str>>(args: &[S], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let argv = std::iter::once("corrdyn").chain(args.iter().map(|s| s.as_ref()));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                1
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let mut buf = Vec::new();
    let status = match with_thread_cap(|| run(cli.cmd, &mut buf)) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_budget() || matches!(e, CorrdynError::RootFinding { .. }) {
                2
            } else {
                1
            }
        }
    };
    let _ = out.write_all(&buf);
    status
}

/// Runs `f` on a pool limited by CORRDYN_THREADS when that is set.
pub fn with_thread_cap<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let cap = std::env::var("CORRDYN_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0);
    match cap.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

fn complex_list(s: &str) -> Result<Vec<Complex64>> {
    s.split(',').map(|z| parse_complex(z.trim())).collect()
}

fn place_of(p: Option<u64>) -> Result<Place> {
    match p {
        None => Ok(Place::Archimedean),
        Some(p) => Place::padic(p),
    }
}

fn need<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str> {
    v.as_deref().ok_or_else(|| CorrdynError::InvalidInput(format!("{flag} is required")))
}

fn policy(s: &str) -> Result<BranchPolicy> {
    Ok(match s {
        "largest" => BranchPolicy::LargestModulus,
        "smallest" => BranchPolicy::SmallestModulus,
        "cycle" => BranchPolicy::RepeatCycle,
        k => BranchPolicy::Index(
            k.parse().map_err(|_| CorrdynError::InvalidInput(format!("unknown branch policy `{k}`")))?,
        ),
    })
}

fn parse_window(s: &str) -> Result<(Complex64, f64)> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| CorrdynError::Parse(format!("bad window `{s}`, want cx,cy,hw")))?;
    match parts[..] {
        [cx, cy, hw] => Ok((Complex64::new(cx, cy), hw)),
        _ => Err(CorrdynError::Parse(format!("bad window `{s}`, want cx,cy,hw"))),
    }
}

fn parse_res(s: &str) -> Result<(usize, usize)> {
    let bad = || CorrdynError::Parse(format!("bad resolution `{s}`, want WxH"));
    let (w, h) = s.split_once('x').ok_or_else(bad)?;
    Ok((w.parse().map_err(|_| bad())?, h.parse().map_err(|_| bad())?))
}

fn parse_coord(s: &str) -> Result<SliceCoord> {
    let bad = || CorrdynError::Parse(format!("bad slice coordinate `{s}`, want s<i> or t<j>"));
    let (kind, idx) = s.split_at(1.min(s.len()));
    let i: usize = idx.parse().map_err(|_| bad())?;
    match kind {
        "s" => Ok(SliceCoord::S(i)),
        "t" => Ok(SliceCoord::T(i)),
        _ => Err(bad()),
    }
}

fn io(e: std::io::Error) -> CorrdynError {
    CorrdynError::InvalidInput(format!("i/o: {e}"))
}

fn run(cmd: Cmd, out: &mut Vec<u8>) -> Result<()> {
    macro_rules! emit {
        ($($t:tt)*) => { writeln!(out, $($t)*).map_err(io)? };
    }
    match cmd {
        Cmd::Normalize { corr } => {
            let corr = corr.load()?;
            match corr.normalize() {
                Ok(n) => {
                    emit!("form={}", n.form);
                    emit!("pre={},{}", format_rational(&n.pre_scale), format_rational(&n.pre_shift));
                    emit!("post={},{}", format_rational(&n.post_scale), format_rational(&n.post_shift));
                    emit!("exact=true");
                }
                Err(CorrdynError::ExtensionRequired(_)) => {
                    let n = corr.to_complex().normalize()?;
                    emit!("form={}", n.form);
                    emit!("pre={},{}", format_complex(n.pre.scale), format_complex(n.pre.shift));
                    emit!("post={},{}", format_complex(n.post.scale), format_complex(n.post.shift));
                    emit!("exact=false");
                }
                Err(e) => return Err(e),
            }
        }
        Cmd::Crit { corr, p } => {
            let corr = corr.load()?;
            match p {
                None => {
                    let c = corr.to_complex();
                    for x in c.critical_points()? {
                        emit!("x={}", format_complex(x));
                    }
                    for s in c.critical_starts()? {
                        match s {
                            crate::correspondence::CriticalStart::Point(x) => emit!("start=point,{}", format_complex(x)),
                            crate::correspondence::CriticalStart::Fibre(w) => emit!("start=fibre,{}", format_complex(w)),
                        }
                    }
                }
                Some(p) => {
                    Place::padic(p)?;
                    for s in corr.critical_starts()? {
                        let (kind, x) = match &s {
                            RationalCriticalStart::Point(x) => ("point", x),
                            RationalCriticalStart::Fibre(w) => ("fibre", w),
                        };
                        emit!("start={kind},{},v_{p}={}", format_rational(x), padic_valuation(x, p));
                    }
                }
            }
        }
        Cmd::Branch { corr, c, p, path, poly, tol } => {
            if let Some(poly) = poly {
                for r in roots_complex(&ComplexPoly::new(complex_list(&poly)?), tol)? {
                    emit!("root={}", format_complex(r));
                }
                return Ok(());
            }
            let corr = corr.load()?;
            if let Some(path) = path {
                let prefix = PathPrefix::from_vertices(complex_list(&path)?)?;
                for ext in corr.to_complex().extend(&prefix)? {
                    let v: Vec<String> = ext.vertices().iter().map(|z| format_complex(*z)).collect();
                    emit!("path={}", v.join(","));
                }
            } else if let Some(p) = p {
                Place::padic(p)?;
                let x = parse_rational(need(&c, "--c")?)?;
                // children of x are the roots of g(y) - f(x)
                let fx = corr.f().eval(&x);
                let vals: Vec<_> = corr
                    .g()
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(i, b)| if i == 0 { padic_valuation(&(b - &fx), p) } else { padic_valuation(b, p) })
                    .collect();
                for v in newton_polygon_root_valuations(&vals)? {
                    emit!("v_{p}={v}");
                }
            } else {
                let x = parse_complex(need(&c, "--c")?)?;
                for y in corr.to_complex().branch_step(x)? {
                    emit!("y={}", format_complex(y));
                }
            }
        }
        Cmd::Lambda { corr, p, flipped } => {
            let corr = corr.load()?;
            let place = place_of(p)?;
            let conv = if flipped { LambdaConvention::PadicCorrection } else { LambdaConvention::ArchimedeanCorrection };
            let l = lambda_local_with(Coefficients::Rational(&corr), place, conv)?;
            emit!("place={place},lambda={l}");
        }
        Cmd::GreenMin { corr, c, p, path, policy: pol, budget } => {
            let corr = corr.load()?;
            let cfg = budget.config()?;
            if let Some(path) = path {
                let spec = PathSpec { prefix: PathPrefix::from_vertices(complex_list(&path)?)?, policy: policy(&pol)? };
                match green(&corr.to_complex(), &spec, cfg.tol, cfg.depth)? {
                    GreenOutcome::Value(v) => emit!("value={v}"),
                    GreenOutcome::Enclosure(i) => emit!("{i}"),
                }
            } else if let Some(p) = p {
                let a: Rational = parse_rational(need(&c, "--c")?)?;
                emit!("{}", green_min_padic(&corr, &PadicStart::Point(a), p, cfg.depth)?);
            } else {
                let a = parse_complex(need(&c, "--c")?)?;
                emit!("{}", green_min(&corr.to_complex(), GreenStart::Point(a), &cfg)?);
            }
        }
        Cmd::CapitalLambda { corr, p, budget } => {
            let corr = corr.load()?;
            let cfg = budget.config()?;
            match p {
                None => emit!("{}", lambda_capital(&corr.to_complex(), &cfg)?),
                Some(p) => emit!("{}", lambda_capital_padic(&corr, p, cfg.depth)?),
            }
        }
        Cmd::Hweil { form } => {
            let nf = RationalNormalForm::parse(&form)?;
            for place in support_places(&nf)? {
                emit!("place={place},weil={}", local_weil(&nf, place));
            }
            emit!("hweil={}", weil_height(&nf)?);
        }
        Cmd::Hcrit { corr, path_len, budget } => {
            let cfg = budget.config()?;
            let (rc, report) = match &corr.form {
                Some(f) if corr.corr.is_none() => {
                    let nf = RationalNormalForm::parse(f)?;
                    let r = height_report(&nf, &cfg)?;
                    (nf.correspondence(), r)
                }
                _ => {
                    let rc = corr.load()?;
                    let r = crit_height_general(&rc, &cfg)?;
                    (rc, r)
                }
            };
            for t in &report.places {
                emit!("place={},{}", t.place, t.crit);
            }
            emit!("place=total,{}", report.crit);
            let status = match pcc_status(&rc, &report.crit, path_len)? {
                PccStatus::Certified(_) => "certified",
                PccStatus::Inconclusive => "inconclusive",
                PccStatus::NotPcc => "not-pcc",
            };
            emit!("pcc={status}");
        }
        Cmd::CompareHeights { d, e, n, seed, log10_min, log10_max, budget } => {
            if !(e >= 1 && d > e) {
                return Err(CorrdynError::InvalidInput(format!("need d > e >= 1, got d={d}, e={e}")));
            }
            if n == 0 || !(log10_min <= log10_max) || log10_min < 0.0 {
                return Err(CorrdynError::InvalidInput("need n > 0 and 0 <= log10-min <= log10-max".into()));
            }
            let spec = SampleSpec { count: n, d, e, log10_min, log10_max, seed };
            emit!("d,e,seed,weil,crit_lo,crit_hi,places");
            for row in comparison_report(&spec, &budget.config()?) {
                emit!("{row}");
            }
        }
        Cmd::Fn { fam, n, oracle } => {
            if oracle {
                let e = u32::try_from(fam.e).map_err(|_| CorrdynError::InvalidInput("e is too large".into()))?;
                fam.family()?;
                emit!("{}", resultant_oracle(fam.p, e, n)?);
            } else {
                emit!("{}", fam.family()?.fn_poly(n, fam.degree_cap)?);
            }
        }
        Cmd::Primitive { fam, n, r, pi } => {
            let family = fam.family()?;
            let (found, witness) = family.has_primitive_prime_factor(n, fam.degree_cap)?;
            emit!("primitive={found},witness={witness}");
            match (r, pi) {
                (Some(r), Some(pi)) => {
                    let pi: FpPoly = pi.parse()?;
                    emit!("valuation={}", family.valuation_profile(n, r, &pi, fam.degree_cap)?);
                }
                (None, None) => {}
                _ => return Err(CorrdynError::InvalidInput("--r and --pi go together".into())),
            }
        }
        Cmd::BoundThreshold { p, e, n } => {
            let family = UnicriticalFamily::new(p, e)?;
            emit!("threshold={}", family.bound_threshold());
            if let Some(n) = n {
                if n == 0 {
                    return Err(CorrdynError::InvalidInput("n must be at least 1".into()));
                }
                emit!("n={n},holds={},ratio={}", family.bound_holds(n), family.bound_ratio(n));
            }
        }
        Cmd::PeriodSearch { fam, n, k } => {
            if n == 0 || k == 0 {
                return Err(CorrdynError::InvalidInput("n and k must be at least 1".into()));
            }
            let certs = fam.family()?.period_search(n, k, fam.degree_cap)?;
            for cert in &certs {
                emit!("{cert}");
            }
            emit!("count={}", certs.len());
        }
        Cmd::Member { d, e, c, corr, depth, frontier_cap } => {
            let depth = depth as usize;
            let cap = frontier_cap as usize;
            let verdict = match corr {
                None => unicritical_witness(d, e, parse_complex(&c)?, depth, cap)?,
                Some(text) => {
                    let rc = RationalCorrespondence::parse(&text)?;
                    let cc = rc.to_complex();
                    let lambda = lambda_local_with(Coefficients::Complex(&cc), Place::Archimedean, LambdaConvention::default())?;
                    let radius = ArchBounds::new(&cc, lambda).radius();
                    bounded_path_witness(&cc, parse_complex(&c)?, depth, radius, cap)?
                }
            };
            emit!("{verdict}");
        }
        Cmd::Render { d, e, form, coord, window, res, depth, frontier_cap, out: path } => {
            let family = match (form, coord) {
                (None, None) => Family::Unicritical { d, e },
                (Some(f), Some(c)) => Family::NormalFormSlice {
                    base: RationalNormalForm::parse(&f)?.to_complex(),
                    coord: parse_coord(&c)?,
                },
                _ => return Err(CorrdynError::InvalidInput("--form and --coord go together".into())),
            };
            let (center, hw) = parse_window(&window)?;
            let (width, height) = parse_res(&res)?;
            let spec = RenderSpec {
                family,
                center,
                half_width: hw,
                half_height: hw * height as f64 / width.max(1) as f64,
                width,
                height,
                depth: depth as usize,
                frontier_cap: frontier_cap as usize,
            };
            let r = render(&spec)?;
            if let Some(path) = path {
                let file = std::fs::File::create(&path).map_err(io)?;
                r.write_pgm(std::io::BufWriter::new(file)).map_err(io)?;
            }
            emit!("{}", r.summary);
            emit!("failures={},saturated={}", r.summary.failures, r.summary.saturated);
        }
        Cmd::McGreen { corr, c, n, depth, seed } => {
            let corr = corr.load()?.to_complex();
            let m = expected_green_mc(&corr, parse_complex(&c)?, n, depth as usize, seed)?;
            emit!("mean={},stderr={},samples={},failures={}", m.mean, m.stderr, m.samples, m.failures);
        }
    }
    Ok(())
}
