// One PASS/FAIL line per acceptance criterion. Runs without the test harness
// so the lines always reach stdout; exits nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use extendlab::classify::{gallery, riemann_eval};
use extendlab::extend::{
    baire_witness, constant_extend_preimage, phi_star_preimage_chain, verify_operator, AnchorCase, BaireRoute,
    OperatorKind, Status,
};
use extendlab::retraction::AnchorPolicy;
use extendlab::roots::isolate_roots;
use extendlab::{Interval, Poly, RationalFunc, RationalRetraction, RationalSet};
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn retraction(a: &RationalSet) -> RationalRetraction {
    RationalRetraction::with_policy(a, &AnchorPolicy::NearestMemberEndpoint).expect("default anchors")
}

fn eps() -> Q {
    q(1, 1_000_000_000)
}

fn retraction_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(1);
    let mut checks = 0usize;
    for case in 0..25 {
        let a = random_set(&mut rng, 5, true);
        let r = retraction(&a);
        for _ in 0..1000 {
            let x = random_point_in(&mut rng, &a);
            ensure(r.apply(&x) == x, || format!("A={a}: phi({x}) != {x}"))?;
        }
        for p in r.phi().pieces() {
            let ok = if p.expr.is_constant() {
                a.contains(&p.expr.coeff(0))
            } else {
                p.expr == Poly::x() && RationalSet::interval(p.interval.clone()).is_subset(&a)
            };
            ensure(ok, || format!("A={a}: phi piece {}: {} leaves A", p.interval, p.expr))?;
        }
        let window = RationalSet::interval(Interval::closed(q(-15, 1), q(15, 1)));
        for _ in 0..20 {
            let f = random_closed(&mut rng);
            let flb = r.flb_preimage(&f).map_err(|e| e.to_string())?;
            ensure(flb.agree && flb.formula == flb.direct, || {
                format!("case {case}: A={a}, F={f}: {} vs {}", flb.formula, flb.direct)
            })?;
            let mut points = edge_points(&[&a, &f]);
            points.extend((0..1000 - points.len().min(1000)).map(|_| random_point_in(&mut rng, &window)));
            for x in points {
                ensure(flb.formula.contains(&x) == f.contains(&r.apply(&x)), || {
                    format!("A={a}, F={f}: oracle disagrees at {x}")
                })?;
                checks += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!("25 sets, {checks} oracle points, {elapsed:.2?}"))
}

fn operator_identities() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(2);
    let mut functions = 0;
    for _ in 0..10 {
        let a = random_set(&mut rng, 4, false);
        let mut fs = Vec::new();
        for i in 0..50 {
            let f = random_pw_affine(&mut rng, &a, 2, true);
            fs.push(if i % 3 == 0 { f.abs().func } else { f });
        }
        let coeffs = vec![(q(1, 1), q(1, 1)), (grid_value(&mut rng, -3, 3, 2), grid_value(&mut rng, -3, 3, 3))];
        let x0 = random_point_in(&mut rng, &a);
        let kinds = [
            OperatorKind::PhiStar(retraction(&a)),
            OperatorKind::constant_anchor(&a, x0).map_err(|e| e.to_string())?,
        ];
        for kind in &kinds {
            let report = verify_operator(kind, &fs, &coeffs, &eps()).map_err(|e| e.to_string())?;
            for (name, check) in [
                ("extension", &report.extension),
                ("linearity", &report.linear),
                ("unity", &report.unity),
                ("positivity", &report.positive),
                ("isometry", &report.isometry),
            ] {
                ensure(check.status == Status::Pass, || {
                    format!("{} on A={a}: {name} is {:?} ({:?})", kind.name(), check.status, check.witness)
                })?;
            }
            for pair in &report.norms {
                ensure(pair.on_set.exact.is_some() && pair.on_set.exact == pair.on_line.exact, || {
                    format!("{} on A={a}: inexact norms for {}", kind.name(), pair.function)
                })?;
            }
        }
        functions += fs.len();
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("10 sets x {} functions, 2 operators, {elapsed:.2?}", functions / 10))
}

fn anchor_case_split() -> Outcome {
    let mut rng = rng(3);
    let (mut inside, mut outside) = (0, 0);
    for case in 0..100 {
        let a = random_set(&mut rng, 4, true);
        let f = random_pw_affine(&mut rng, &a, 2, false);
        let x0 = random_point_in(&mut rng, &a);
        let v = f.eval(&x0).map_err(|e| e.to_string())?;
        let base = random_open(&mut rng);
        let u = if case % 2 == 0 {
            base.union(&RationalSet::interval(Interval::open(v.clone() - q(1, 2), v.clone() + q(1, 2))))
        } else {
            base.difference(&RationalSet::interval(Interval::closed(v.clone() - q(1, 8), v.clone() + q(1, 8))))
        };
        let out = constant_extend_preimage(&f, &x0, &u).map_err(|e| e.to_string())?;
        ensure(out.precision.is_exact() && out.agree && out.formula == out.direct, || {
            format!("f={f}, x0={x0}, U={u}: {} vs {}", out.formula, out.direct)
        })?;
        match out.case {
            AnchorCase::ValueInside => inside += 1,
            AnchorCase::ValueOutside => outside += 1,
        }
    }
    ensure(inside >= 20 && outside >= 20, || format!("cases hit {inside} and {outside} times"))?;
    Ok(format!("100 cases, f(x0) in U {inside} times, not in U {outside} times"))
}

fn preimage_chain() -> Outcome {
    let mut rng = rng(4);
    let mut worst = 0;
    for _ in 0..25 {
        let a = random_set(&mut rng, 4, true);
        let f = random_pw_affine(&mut rng, &a, 2, false);
        let u = random_open(&mut rng);
        let r = retraction(&a);
        let pieces = f.preimage(&u).set.pieces().len();
        let trace = phi_star_preimage_chain(&f, &r, &u, 3).map_err(|e| e.to_string())?;
        ensure(trace.agrees() && trace.final_union() == trace.direct, || {
            format!("A={a}, f={f}, U={u}: union {} vs direct {}", trace.final_union(), trace.direct)
        })?;
        let n = trace.stabilization_index.unwrap_or(usize::MAX);
        ensure(n <= pieces + 1, || format!("A={a}, f={f}, U={u}: N={n} with {pieces} pieces"))?;
        worst = worst.max(n);
    }
    Ok(format!("25 chains, largest stabilization index {worst}"))
}

/// Points of the 1/16 grid, so their distance to any quarter-grid jump is
/// zero or at least 1/16.
fn grid_samples(rng: &mut Rng8, count: usize) -> Vec<Q> {
    (0..count).map(|_| grid_value(rng, -12, 12, 16)).collect()
}

fn baire_case(f: &RationalFunc, r: &RationalRetraction, samples: &[Q], route: BaireRoute) -> Result<usize, String> {
    let probe = baire_witness(f, r, 1, samples).map_err(|e| e.to_string())?;
    let n_max = probe.samples.iter().map(|s| s.bound).max().unwrap_or(1) + 2;
    let report = baire_witness(f, r, n_max, samples).map_err(|e| e.to_string())?;
    ensure(report.route == route, || format!("A={}: route {:?}", r.set(), report.route))?;
    ensure(report.discontinuous.is_empty(), || {
        format!("A={}, f={f}: approximants {:?} jump", r.set(), report.discontinuous)
    })?;
    for s in &report.samples {
        ensure(s.within_bound(), || {
            format!("A={}, f={f}: x={} settles at {:?}, bound {}", r.set(), s.x, s.index, s.bound)
        })?;
    }
    Ok(n_max)
}

fn baire_witnesses() -> Outcome {
    let mut rng = rng(5);
    let mut n_max = 0;
    for _ in 0..20 {
        let a = random_interval(&mut rng);
        let f = random_pw_affine(&mut rng, &a, 4, false);
        ensure(f.jump_points().len() <= 4, || format!("f={f} has too many jumps"))?;
        let samples = grid_samples(&mut rng, 200);
        n_max = n_max.max(baire_case(&f, &retraction(&a), &samples, BaireRoute::Composition)?);
    }
    let mut disconnected = 0;
    while disconnected < 5 {
        let a = random_set(&mut rng, 3, false);
        if a.pieces().len() < 2 {
            continue;
        }
        let f = random_pw_affine(&mut rng, &a, 1, false);
        let samples = grid_samples(&mut rng, 200);
        n_max = n_max.max(baire_case(&f, &retraction(&a), &samples, BaireRoute::Direct)?);
        disconnected += 1;
    }
    Ok(format!("20 interval cases and 5 disconnected cases, 200 samples each, n_max up to {n_max}"))
}

/// `ceil(1/d) + 1` for the distance `d` from `x` to the nearest excluded
/// finite end of its piece, or 1 when there is none.
fn cover_cap(s: &RationalSet, x: &Q) -> usize {
    let iv = s.component_of(x).expect("x in s");
    [iv.lo(), iv.hi()]
        .into_iter()
        .filter(|e| e.is_open())
        .filter_map(|e| e.value())
        .map(|v| (v - x).abs())
        .min()
        .map_or(1, |d| (Q::from_integer(1.into()) / d).ceil().to_usize().unwrap() + 1)
}

fn decomposition_checks(s: &RationalSet, points: &[Q]) -> Result<(), String> {
    let fs: Vec<RationalSet> = (1..=11).map(|n| s.fsigma_decomposition(n).unwrap()).collect();
    let gs: Vec<RationalSet> = (1..=11).map(|n| s.gdelta_codecomposition(n).unwrap()).collect();
    let c = s.complement();
    for n in 0..10 {
        ensure(fs[n].is_closed() && gs[n].is_closed(), || format!("S={s}: F_{0} or G_{0} not closed", n + 1))?;
        ensure(fs[n].is_subset(&fs[n + 1]) && fs[n + 1].is_subset(s), || format!("S={s}: F chain at {}", n + 1))?;
        ensure(gs[n].is_subset(&gs[n + 1]) && gs[n + 1].is_subset(&c), || format!("S={s}: G chain at {}", n + 1))?;
        for g in &gs[..10] {
            ensure(fs[n].intersect(g).is_empty(), || format!("S={s}: F_{} meets {g}", n + 1))?;
        }
    }
    for x in points {
        let (side, label) = if s.contains(x) { (s, "F") } else { (&c, "G") };
        let cap = cover_cap(side, x);
        ensure(side.first_cover_index(x, cap).is_some(), || format!("S={s}: {x} not in {label}_{cap}"))?;
    }
    Ok(())
}

fn set_algebra() -> Outcome {
    let mut rng = rng(6);
    let window = RationalSet::interval(Interval::closed(q(-12, 1), q(12, 1)));
    for _ in 0..100 {
        let s = random_set(&mut rng, 5, true);
        let t = random_set(&mut rng, 5, true);
        let (u, i, d, c) = (s.union(&t), s.intersect(&t), s.difference(&t), s.complement());
        let mut points = edge_points(&[&s, &t]);
        points.extend((0..1000 - points.len().min(1000)).map(|_| random_point_in(&mut rng, &window)));
        for x in &points {
            let (a, b) = (s.contains(x), t.contains(x));
            ensure(u.contains(x) == (a || b), || format!("{s} U {t} at {x}"))?;
            ensure(i.contains(x) == (a && b), || format!("{s} n {t} at {x}"))?;
            ensure(d.contains(x) == (a && !b), || format!("{s} \\ {t} at {x}"))?;
            ensure(c.contains(x) == !a, || format!("complement of {s} at {x}"))?;
        }
        decomposition_checks(&s, &points)?;
        decomposition_checks(&t, &points)?;
    }
    Ok("100 pairs, 1000 points each, decompositions to index 10".into())
}

/// Sign of `p` at `-100 + i/1000`, in floating point unless the value is too
/// close to zero to trust.
fn grid_sign(p: &Poly<Q>, coeffs: &[f64], i: i64) -> i32 {
    let x = -100.0 + i as f64 / 1000.0;
    let v = coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
    let scale = coeffs.iter().map(|c| c.abs()).sum::<f64>() * x.abs().max(1.0).powi(coeffs.len() as i32);
    if v.abs() > scale * 1e-12 {
        return if v > 0.0 { 1 } else { -1 };
    }
    let exact = p.eval(&(q(i, 1000) - q(100, 1)));
    if exact.is_zero() {
        0
    } else if exact.is_positive() {
        1
    } else {
        -1
    }
}

fn scan_count(p: &Poly<Q>) -> usize {
    let coeffs: Vec<f64> = p.coeffs().iter().map(|c| c.to_f64().unwrap()).collect();
    let mut count = 0;
    let mut prev = grid_sign(p, &coeffs, 0);
    if prev == 0 {
        count += 1;
    }
    for i in 1..=200_000 {
        let s = grid_sign(p, &coeffs, i);
        if s == 0 || (prev != 0 && s != prev) {
            count += 1;
        }
        prev = s;
    }
    count
}

/// A product of linear factors with rational roots, quadratics with a pair of
/// conjugate surd roots, and root-free quadratics, with real roots in
/// `[-90, 90]` at least `1/100` apart.
fn separated_poly(rng: &mut Rng8) -> Poly<Q> {
    loop {
        let degree = rng.gen_range(1..=6);
        let mut p = Poly::constant(grid_value(rng, -4, 4, 3));
        if p.is_zero() {
            continue;
        }
        let mut roots: Vec<f64> = Vec::new();
        let mut d = 0;
        while d < degree {
            let kind = if degree - d >= 2 { rng.gen_range(0..3) } else { 0 };
            match kind {
                0 => {
                    let r = rational_in(rng, &q(-90, 1), &q(90, 1));
                    roots.push(r.to_f64().unwrap());
                    p = &p * &Poly::linear(-r, q(1, 1));
                    d += 1;
                }
                1 => {
                    let m = grid_value(rng, -80, 80, 5);
                    let s = q(rng.gen_range(2..200), rng.gen_range(1..5));
                    let w = s.to_f64().unwrap().sqrt();
                    roots.push(m.to_f64().unwrap() - w);
                    roots.push(m.to_f64().unwrap() + w);
                    let shifted = Poly::linear(-m, q(1, 1));
                    p = &p * &(&(&shifted * &shifted) - &Poly::constant(s));
                    d += 2;
                }
                _ => {
                    let m = grid_value(rng, -50, 50, 3);
                    let shifted = Poly::linear(-m, q(1, 1));
                    p = &p * &(&(&shifted * &shifted) + &Poly::constant(grid_value(rng, 1, 9, 7)));
                    d += 2;
                }
            }
        }
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let separated = roots.windows(2).all(|w| w[1] - w[0] >= 1e-2);
        if separated && roots.iter().all(|r| r.abs() <= 90.0) {
            return p;
        }
    }
}

fn root_isolation() -> Outcome {
    let mut rng = rng(7);
    let within = Interval::closed(q(-100, 1), q(100, 1));
    let (mut total, mut worst) = (0, 0);
    for _ in 0..100 {
        let p = separated_poly(&mut rng);
        let brackets = isolate_roots(&p, &within).map_err(|e| e.to_string())?;
        let expected = scan_count(&p);
        ensure(brackets.len() == expected, || format!("p={p}: {} brackets, scan finds {expected}", brackets.len()))?;
        for b in &brackets {
            let (fine, steps) = b.refine_counted(&eps()).map_err(|e| e.to_string())?;
            ensure(steps <= 40 && fine.width() <= eps(), || format!("p={p}: {steps} steps, width {}", fine.width()))?;
            worst = worst.max(steps);
        }
        total += brackets.len();
    }
    Ok(format!("100 polynomials, {total} roots, at most {worst} bisections per root"))
}

fn sup_norms() -> Outcome {
    let mut rng = rng(8);
    let mut affine = 0;
    for _ in 0..50 {
        let s = random_set(&mut rng, 3, false);
        let degree = rng.gen_range(0..=4);
        let p = Poly::new((0..=degree).map(|_| grid_value(&mut rng, -3, 3, 4)).collect());
        let f = RationalFunc::from_poly(&s, p.clone());
        let norm = f.sup_norm(&s, &eps()).map_err(|e| e.to_string())?;
        ensure(norm.width() <= eps(), || format!("p={p} on {s}: width {}", norm.width()))?;
        let (lo, hi) = finite_ends(&Interval::closed(
            s.boundary_points().first().cloned().unwrap(),
            s.boundary_points().last().cloned().unwrap(),
        ));
        let mut grid_max = Q::zero();
        for k in 0..10_000 {
            let x = lo.clone() + (hi.clone() - lo.clone()) * q(k, 9_999);
            if s.contains(&x) {
                grid_max = grid_max.max(p.eval(&x).abs());
            }
        }
        for x in s.boundary_points().into_iter().filter(|x| s.contains(x)) {
            grid_max = grid_max.max(p.eval(&x).abs());
        }
        ensure(grid_max <= norm.hi, || format!("p={p} on {s}: grid max {grid_max} above {}", norm.hi))?;
        if p.is_affine() {
            let endpoint_max = s.boundary_points().iter().map(|x| p.eval(x).abs()).max().unwrap();
            ensure(norm.exact.as_ref() == Some(&endpoint_max), || {
                format!("p={p} on {s}: affine norm {:?}, endpoints give {endpoint_max}", norm.exact)
            })?;
            affine += 1;
        }
    }
    Ok(format!("50 polynomials, {affine} affine cases exact"))
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn gallery_checks() -> Outcome {
    let mut rng = rng(9);
    for _ in 0..100 {
        let (n, d) = (rng.gen_range(-10_000..=10_000), rng.gen_range(1..=10_000));
        let expected = q(1, d / gcd(n, d));
        let got = riemann_eval(&q(n, d));
        ensure(got == expected, || format!("riemann({n}/{d}) = {got}, expected {expected}"))?;
    }
    let entries = gallery();
    let report = serde_json::to_string(&entries).map_err(|e| e.to_string())?;
    let mut count = 0;
    for e in &entries {
        ensure(!e.classifications.is_empty(), || format!("{} has no classifications", e.name))?;
        for c in &e.classifications {
            ensure(!c.reason.is_empty(), || format!("{}: {} has no reason", e.name, c.class))?;
            let quoted = serde_json::to_string(c.reason).unwrap();
            ensure(report.contains(&quoted), || format!("{}: reason for {} missing from report", e.name, c.class))?;
            count += 1;
        }
    }
    Ok(format!("100 rationals, {count} classifications carry their reasons"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("retraction suite", retraction_suite),
        ("operator identities", operator_identities),
        ("constant-anchor case split", anchor_case_split),
        ("preimage chain", preimage_chain),
        ("Baire-one witness", baire_witnesses),
        ("set algebra and decompositions", set_algebra),
        ("root isolation", root_isolation),
        ("sup-norm", sup_norms),
        ("gallery", gallery_checks),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
