use num_complex::Complex64;
use proptest::prelude::*;

use corrdyn::algebra::complex::{roots_complex, ComplexPoly};
use corrdyn::algebra::newton::newton_polygon_root_valuations;
use corrdyn::algebra::rational::{rat, rat_int, Rational, Valuation};
use corrdyn::algebra::{resultant_oracle, FpPoly};
use corrdyn::correspondence::{Correspondence, NormalForm, PathPrefix, RationalCorrespondence, RationalNormalForm};
use corrdyn::heights::{height_report, pcc_status, weil_height, PccStatus};
use corrdyn::localheights::*;
use corrdyn::sdset::{unicritical_correspondence, unicritical_witness, PixelVerdict};
use corrdyn::unicritical::{UnicriticalFamily, DEFAULT_DEGREE_CAP};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn complex_in(r: f64) -> impl Strategy<Value = Complex64> {
    (-r..r, -r..r).prop_map(|(a, b)| c(a, b))
}

fn bidegree() -> impl Strategy<Value = (usize, usize)> {
    prop_oneof![Just((3, 2)), Just((4, 2)), Just((5, 2)), Just((5, 3)), Just((3, 1))]
}

fn normal_form(r: f64) -> impl Strategy<Value = NormalForm> {
    bidegree().prop_flat_map(move |(d, e)| {
        (prop::collection::vec(complex_in(r), d - 1), prop::collection::vec(complex_in(r), e - 1))
            .prop_map(|(s, t)| NormalForm::new(s, t).unwrap())
    })
}

fn fp_poly() -> impl Strategy<Value = FpPoly> {
    prop_oneof![Just(2u64), Just(3), Just(5), Just(7)]
        .prop_flat_map(|p| prop::collection::vec(0..p, 1..12).prop_map(move |v| FpPoly::new(p, v)))
}

fn cfg(depth: usize) -> SearchConfig {
    SearchConfig { depth, tol: 1e-6, frontier_cap: 4096 }
}

fn rel_close(a: Complex64, b: Complex64, scale: f64, tol: f64) -> bool {
    (a - b).norm() <= tol * scale.max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gcd_divides_both(a in fp_poly(), b in fp_poly()) {
        prop_assume!(a.modulus() == b.modulus() && !(a.is_zero() && b.is_zero()));
        let g = a.gcd(&b).unwrap();
        prop_assert!(g.divides(&a).unwrap() && g.divides(&b).unwrap());
        prop_assert_eq!(a.div_exact(&g).unwrap().mul(&g), a);
    }

    #[test]
    fn radical_is_squarefree(a in fp_poly()) {
        prop_assume!(!a.is_zero());
        let r = a.radical().unwrap();
        prop_assert!(r.is_squarefree().unwrap());
        prop_assert!(r.divides(&a).unwrap());
        // every irreducible factor of a survives in the radical
        for (q, _) in a.factor().unwrap() {
            prop_assert!(q.divides(&r).unwrap());
        }
    }

    #[test]
    fn newton_root_valuations_sum(vals in prop::collection::vec(prop::option::weighted(0.8, -6i64..6), 2..8)) {
        let n = vals.len();
        let mut v: Vec<Valuation> = vals.iter().map(|x| x.map_or(Valuation::Infinity, Valuation::int)).collect();
        v[0] = Valuation::int(vals[0].unwrap_or(0));
        v[n - 1] = Valuation::int(vals[n - 1].unwrap_or(0));
        let roots = newton_polygon_root_valuations(&v).unwrap();
        prop_assert_eq!(roots.len(), n - 1);
        let sum: Rational = roots.iter().map(|r| r.finite().unwrap().clone()).sum();
        prop_assert_eq!(sum, v[0].finite().unwrap() - v[n - 1].finite().unwrap());
    }

    #[test]
    fn root_sum_and_product(coeffs in prop::collection::vec(complex_in(4.0), 2..9)) {
        prop_assume!(coeffs.last().unwrap().norm() > 0.3);
        let p = ComplexPoly::new(coeffs.clone());
        let d = p.degree();
        let roots = roots_complex(&p, 1e-12).unwrap();
        prop_assert_eq!(roots.len(), d);
        let lead = p.leading();
        let sum: Complex64 = roots.iter().sum();
        let want = -p.coeff(d - 1) / lead;
        prop_assert!(rel_close(sum, want, want.norm(), 1e-8), "{} vs {}", sum, want);
        let prod: Complex64 = roots.iter().product();
        let want = p.coeff(0) / lead * if d.is_multiple_of(2) { 1.0 } else { -1.0 };
        prop_assert!(rel_close(prod, want, want.norm(), 1e-8), "{} vs {}", prod, want);
    }

    #[test]
    fn normalize_is_idempotent(nf in normal_form(2.0), a in complex_in(2.0), b in complex_in(2.0), k in complex_in(2.0)) {
        prop_assume!(k.norm() > 0.2);
        // move the normal form by x -> k x + a and z -> z + b
        let f = nf.f_s().compose_affine(k, a).add(&ComplexPoly::new(vec![b]));
        let g = nf.g_t().compose_affine(k, a).add(&ComplexPoly::new(vec![b]));
        let corr = Correspondence::new(f, g).unwrap();
        let once = corr.normalize().unwrap();
        let twice = once.form.correspondence().normalize().unwrap();
        for (x, y) in once.form.s().iter().zip(twice.form.s()).chain(once.form.t().iter().zip(twice.form.t())) {
            prop_assert!(rel_close(*x, *y, x.norm(), 1e-9), "{} vs {}", once.form, twice.form);
        }
    }

    #[test]
    fn normalize_witnesses(nf in normal_form(2.0), a in complex_in(2.0), b in complex_in(2.0), k in complex_in(2.0)) {
        prop_assume!(k.norm() > 0.2);
        let f = nf.f_s().compose_affine(k, a).add(&ComplexPoly::new(vec![b]));
        let g = nf.g_t().compose_affine(k, a).add(&ComplexPoly::new(vec![b]));
        let corr = Correspondence::new(f.clone(), g.clone()).unwrap();
        let n = corr.normalize().unwrap();
        // φ(f(x)) = F(ψ(x)) and φ(g(x)) = G(ψ(x))
        for (p, big) in [(&f, n.form.f_s()), (&g, n.form.g_t())] {
            let lhs = p.scale(n.post.scale).add(&ComplexPoly::new(vec![n.post.shift]));
            let rhs = big.compose_affine(n.pre.scale, n.pre.shift);
            let scale = lhs.coeffs().iter().map(|z| z.norm()).fold(1.0, f64::max);
            for i in 0..=lhs.degree().max(rhs.degree()) {
                prop_assert!(rel_close(lhs.coeff(i), rhs.coeff(i), scale, 1e-9), "coeff {}: {} vs {}", i, lhs.coeff(i), rhs.coeff(i));
            }
        }
    }

    #[test]
    fn critical_count_and_branch_size(nf in normal_form(3.0), x in complex_in(5.0)) {
        let corr = nf.correspondence();
        prop_assert_eq!(corr.critical_points().unwrap().len(), nf.d() * nf.e() - 1);
        prop_assert_eq!(corr.branch_step(x).unwrap().len(), nf.e());
    }

    #[test]
    fn extended_prefixes_satisfy_the_relation(nf in normal_form(3.0), x in complex_in(3.0)) {
        let corr = nf.correspondence();
        let mut level = vec![PathPrefix::new(x)];
        for _ in 0..3 {
            level = level.iter().flat_map(|p| corr.extend(p).unwrap()).collect();
        }
        prop_assert_eq!(level.len(), nf.e().pow(3));
        for p in &level {
            let v = p.vertices();
            for w in v.windows(2) {
                let fx = corr.f().eval(w[0]);
                prop_assert!((corr.g().eval(w[1]) - fx).norm() <= 1e-8 * fx.norm().max(1.0));
            }
        }
    }

    #[test]
    fn transformation_law(nf in normal_form(2.0), x in complex_in(4.0), k in 0usize..3) {
        let corr = nf.correspondence();
        let tol = 1e-8;
        let x1 = corr.branch_step(x).unwrap()[k.min(nf.e() - 1)];
        let policy = BranchPolicy::Index(k);
        let whole = PathSpec { prefix: PathPrefix::from_vertices(vec![x, x1]).unwrap(), policy: policy.clone() };
        let shifted = PathSpec { prefix: PathPrefix::new(x1), policy };
        let (Ok(GreenOutcome::Value(g)), Ok(GreenOutcome::Value(gs))) = (green(&corr, &whole, tol, 400), green(&corr, &shifted, tol, 400)) else {
            return Ok(());
        };
        prop_assert!((gs - nf.d() as f64 / nf.e() as f64 * g).abs() <= 10.0 * tol, "{} vs {}", gs, g);
    }

    #[test]
    fn enclosure_holds_every_enumerated_path(nf in normal_form(2.0), x in complex_in(3.0)) {
        let corr = nf.correspondence();
        let tol = 1e-6;
        let depth = 4;
        let enc = green_min(&corr, GreenStart::Point(x), &SearchConfig { depth, tol, frontier_cap: 4096 }).unwrap();
        let mut level = vec![PathPrefix::new(x)];
        for _ in 0..depth {
            level = level.iter().flat_map(|p| corr.extend(p).unwrap()).collect();
        }
        for p in level {
            // the bound from the enumerated prefix alone
            let spec = PathSpec { prefix: p, policy: BranchPolicy::SmallestModulus };
            let i = green(&corr, &spec, tol, depth).unwrap().interval(tol);
            prop_assert!(enc.lo <= i.hi + tol, "{} above path {}", enc, i);
        }
    }

    #[test]
    fn green_min_tightens_with_depth(nf in normal_form(2.0), x in complex_in(3.0)) {
        let corr = nf.correspondence();
        let mut prev = green_min(&corr, GreenStart::Point(x), &cfg(2)).unwrap();
        for depth in [4, 8, 12] {
            let next = green_min(&corr, GreenStart::Point(x), &cfg(depth)).unwrap();
            prop_assert!(next.hi <= prev.hi + 1e-9 && next.lo + 1e-9 >= prev.lo, "{} then {}", prev, next);
            prev = next;
        }
    }

    #[test]
    fn capital_lambda_below_any_path_choice(nf in normal_form(3.0)) {
        let corr = nf.correspondence();
        let tol = 1e-6;
        let cap = lambda_capital(&corr, &cfg(12)).unwrap();
        // one path per critical point: always the largest child
        let mut worst: f64 = 0.0;
        for x in corr.critical_points().unwrap() {
            let spec = PathSpec { prefix: PathPrefix::new(x), policy: BranchPolicy::LargestModulus };
            worst = worst.max(green(&corr, &spec, tol, 400).unwrap().interval(tol).hi);
        }
        prop_assert!(cap.hi <= worst + tol, "{} vs {}", cap, worst);
    }

    #[test]
    fn monte_carlo_sits_above_the_minimum(nf in normal_form(2.0), x in complex_in(3.0), seed in 0u64..1000) {
        let corr = nf.correspondence();
        let m = expected_green_mc(&corr, x, 64, 40, seed).unwrap();
        let min = green_min(&corr, GreenStart::Point(x), &cfg(12)).unwrap();
        prop_assert!(m.mean + 4.0 * m.stderr + 1e-3 >= min.lo, "{:?} vs {}", m, min);
        let again = expected_green_mc(&corr, x, 64, 40, seed).unwrap();
        prop_assert_eq!(m, again);
    }

    #[test]
    fn integral_forms_are_padically_trivial(s in prop::collection::vec(-40i64..40, 2), t in -40i64..40, p in prop_oneof![Just(5u64), Just(7), Just(11)]) {
        let nf = RationalNormalForm::new(s.into_iter().map(rat_int).collect(), vec![rat_int(t)]).unwrap();
        let corr = nf.correspondence();
        prop_assert_eq!(lambda_padic_valuation(&corr, p), rat_int(0));
        for start in corr.critical_starts().unwrap() {
            let i = green_min_padic(&corr, &start.into(), p, 12).unwrap();
            prop_assert!(i.lo == 0.0 && i.hi == 0.0, "{}", i);
        }
    }

    #[test]
    fn weil_height_vanishes_exactly_on_units(s in prop::collection::vec(0usize..6, 2), t in 0usize..6) {
        let pool = [rat_int(0), rat_int(1), rat_int(-1), rat_int(2), rat(1, 2), rat(-3, 5)];
        let nf = RationalNormalForm::new(s.iter().map(|&i| pool[i].clone()).collect(), vec![pool[t].clone()]).unwrap();
        let h = weil_height(&nf).unwrap();
        prop_assert!(h >= 0.0);
        let units = s.iter().chain(std::iter::once(&t)).all(|&i| i < 3);
        prop_assert_eq!(h == 0.0, units);
    }

    #[test]
    fn headline_is_the_place_sum(s in prop::collection::vec(-20i64..20, 2), t in -20i64..20, den in 1i64..4) {
        let nf = RationalNormalForm::new(s.into_iter().map(|x| rat(x, den)).collect(), vec![rat_int(t)]).unwrap();
        let r = height_report(&nf, &cfg(12)).unwrap();
        let lo: f64 = r.places.iter().map(|p| p.crit.lo).sum();
        let hi: f64 = r.places.iter().map(|p| p.crit.hi).sum();
        let weil: f64 = r.places.iter().map(|p| p.weil).sum();
        prop_assert_eq!((r.crit.lo, r.crit.hi, r.weil), (lo, hi, weil));
    }

    #[test]
    fn outer_bound(r in 4.05f64..20.0, theta in 0.0f64..std::f64::consts::TAU) {
        let v = unicritical_witness(3, 2, Complex64::from_polar(r, theta), 24, 4096).unwrap();
        prop_assert!(matches!(v, PixelVerdict::Escaped(_)), "{}", v);
    }

    #[test]
    fn nesting_and_conjugation(z in complex_in(4.0), n in 2usize..16) {
        let short = unicritical_witness(3, 2, z, n, 4096).unwrap();
        let long = unicritical_witness(3, 2, z, 2 * n, 4096).unwrap();
        prop_assert!(!long.survived() || short.survived());
        prop_assert_eq!(long, unicritical_witness(3, 2, z.conj(), 2 * n, 4096).unwrap());
    }

    #[test]
    fn escape_verdicts_agree_with_green(z in complex_in(4.5)) {
        let v = unicritical_witness(3, 2, z, 24, 4096).unwrap();
        if let PixelVerdict::Escaped(_) = v {
            let corr = unicritical_correspondence(3, 2, z).unwrap();
            let g = green_min(&corr, GreenStart::Point(c(0.0, 0.0)), &cfg(24)).unwrap();
            prop_assert!(g.lo > 0.0, "{} escaped but {}", z, g);
        }
    }
}

#[test]
fn recursion_matches_resultant() {
    for (p, e) in [(3u64, 2u64), (5, 2), (5, 3)] {
        let fam = UnicriticalFamily::new(p, e).unwrap();
        for n in 1..=4 {
            assert_eq!(fam.fn_poly(n, DEFAULT_DEGREE_CAP).unwrap(), resultant_oracle(p, e as u32, n).unwrap(), "({p},{e},{n})");
        }
    }
}

#[test]
fn degree_of_f_n() {
    for (p, e) in [(3u64, 2u64), (5, 2), (5, 3), (7, 3)] {
        let seq = UnicriticalFamily::new(p, e).unwrap().fn_sequence(5, DEFAULT_DEGREE_CAP).unwrap();
        for (n, f) in seq.iter().enumerate().skip(1) {
            assert_eq!(f.degree(), Some(p.pow(n as u32 - 1) as usize));
        }
    }
}

#[test]
fn frobenius_congruence() {
    let fam = UnicriticalFamily::new(3, 2).unwrap();
    let seq = fam.fn_sequence(6, DEFAULT_DEGREE_CAP).unwrap();
    for r in 1..=3usize {
        for (pi, _) in seq[r].factor().unwrap() {
            if (1..r).any(|j| pi.divides(&seq[j]).unwrap()) {
                continue;
            }
            for j in 0..=3usize {
                let lhs = seq[r + j].rem(&pi).unwrap();
                let rhs = seq[j].pow_mod(3u64.pow(r as u32), &pi).unwrap();
                assert_eq!(lhs, rhs, "pi={pi} r={r} j={j}");
            }
        }
    }
}

#[test]
fn period_search_matches_enumeration() {
    let fam = UnicriticalFamily::new(3, 2).unwrap();
    for k in 1..=2 {
        for n in 1..=4 {
            let mut found: Vec<_> = fam.period_search(n, k, DEFAULT_DEGREE_CAP).unwrap().iter().map(|c| c.c).collect();
            found.sort_unstable();
            let mut brute = fam.exhaustive_periods(n, k).unwrap();
            brute.sort_unstable();
            assert_eq!(found, brute, "n={n} k={k}");
        }
    }
}

#[test]
fn certified_pcc_has_zero_lower_bound() {
    for text in ["f=1,0,0,1;g=0,0,1", "f=0,0,0,1;g=0,0,1", "f=-1,0,0,1;g=0,0,1"] {
        let corr = RationalCorrespondence::parse(text).unwrap();
        let r = corrdyn::heights::crit_height_general(&corr, &cfg(16)).unwrap();
        if let PccStatus::Certified(_) = pcc_status(&corr, &r.crit, 12).unwrap() {
            assert_eq!(r.crit.lo, 0.0, "{text}");
        }
    }
}
