//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_FAILURES` are expected to fail for reasons
//! recorded with the project decisions; the process exits nonzero only when
//! the set of failing criteria differs from that list.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{ensure, Context, Result};
use melforge::report::Report;
use melforge::repro::{fold_leading_reference, fold_next_reference, repro_theorem};
use melforge_core::averaging::{
    averaged_functions, bautin_at, bautin_family, cubic_fold_example, PerturbedOscillator, BAUTIN_PARAMS,
};
use melforge_core::bifurcate::{
    branch_count, center_conditions, non_center_in_variety, positive_roots_upoly, quadratic_xi, split_constant_factor,
    BranchMethod,
};
use melforge_core::ideals::{groebner, s_polynomial};
use melforge_core::numlab::{casimir_drift, displacement_numeric, find_limit_cycles, IntegratorConfig};
use melforge_core::poissonred::{
    euler_casimir, euler_reduce, euler_unperturbed, euler_vars, mb_casimir, mb_invariance_check, mb_reduce,
    mb_unperturbed, mb_vars, pushforward_check, EulerChart, EulerPerturbation, Hemisphere, LeafChart, MBChart,
    MBPerturbation, ReductionConvention,
};
use melforge_core::poly::{MPoly, Monomial, MonomialOrder, VarSet};
use melforge_core::Rat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria that fail as stated; see the decisions record for the analysis.
const KNOWN_FAILURES: [usize; 1] = [5];

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            passed,
            detail: detail.into(),
        }
    }
}

fn failed_checks(report: &Report, names: &[&str]) -> Vec<String> {
    report
        .checks
        .iter()
        .filter(|c| names.contains(&c.name.as_str()) && !c.passed)
        .map(|c| format!("{}: {}", c.name, c.detail))
        .collect()
}

fn criterion_1() -> Result<Outcome> {
    let t = Instant::now();
    let spec = averaged_functions(&bautin_family(), 2)?;
    let secs = t.elapsed().as_secs_f64();
    let shape = MPoly::parse(&format!("z^3*({})", quadratic_xi()[0].1), spec.vars())?;
    let pi = MPoly::parse("pi", spec.vars())?;
    // Look for f2 = c * pi^k * shape with rational c.
    let mut found = None;
    let mut candidate = shape.clone();
    for k in 0..=2 {
        if let Some(c) = spec.f(2).proportional(&candidate) {
            found = Some((c, k));
            break;
        }
        candidate = candidate.try_mul(&pi)?;
    }
    let f1_zero = spec.f(1).is_zero();
    let passed = f1_zero && found.is_some() && secs < 10.0;
    let constant = match &found {
        Some((c, k)) => format!("{c}*pi^{k}"),
        None => "none".into(),
    };
    Ok(Outcome::new(
        passed,
        format!("f1 zero {f1_zero}, f2 = ({constant}) z^3 a50 (a30 - a60), averaging {secs:.2} s"),
    ))
}

fn criterion_2(report: &Report) -> Outcome {
    let names: Vec<&str> = report
        .checks
        .iter()
        .map(|c| c.name.as_str())
        .filter(|n| !n.starts_with("I6") && !n.starts_with("non-center"))
        .collect();
    let failures = failed_checks(report, &names);
    let secs = report.timings_ms.values().sum::<u64>() as f64 / 1e3;
    let detail = if failures.is_empty() {
        format!("{} checks passed, averaging and chain {secs:.1} s", names.len())
    } else {
        failures.join("; ")
    };
    Outcome::new(failures.is_empty() && secs < 1800.0, detail)
}

fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    Rat::new(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

/// A random parameter point in center component `case`.
fn center_point(case: char, rng: &mut ChaCha8Rng) -> [Rat; 10] {
    // Pairs (a_i0, a_i1) for A2, A3, A4, A5, A6.
    let mut a: [[Rat; 2]; 5] = std::array::from_fn(|_| [random_rat(rng), random_rat(rng)]);
    let zero = || [Rat::zero(), Rat::zero()];
    let scaled = |c: &Rat, v: &[Rat; 2]| [c * &v[0], c * &v[1]];
    match case {
        'a' => {
            a[2] = zero();
            a[3] = zero();
        }
        'b' => a[1] = a[4].clone(),
        'c' => {
            let mut p = random_rat(rng);
            if p.is_zero() {
                p = Rat::one();
            }
            let q = &(&Rat::from_int(2) * &p) + &p.recip();
            a[4] = scaled(&p, &a[0]);
            a[1] = scaled(&q, &a[0]);
            let d = [&a[1][0] - &a[4][0], &a[1][1] - &a[4][1]];
            a[2] = scaled(&Rat::from_int(-5), &d);
            a[3] = zero();
        }
        'd' => {
            a[0] = zero();
            a[3] = zero();
        }
        _ => unreachable!(),
    }
    let flat: Vec<Rat> = a.iter().flat_map(|c| c.iter().cloned()).collect();
    flat.try_into().expect("ten parameters")
}

fn criterion_3() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut bad = Vec::new();
    let mut total = 0;
    for case in ['a', 'b', 'c', 'd'] {
        for _ in 0..20 {
            let lam = center_point(case, &mut rng);
            ensure!(center_conditions(&lam).contains(&case), "generator left case {case}");
            let spec = averaged_functions(&bautin_at(&lam), 6)?;
            total += 1;
            if let Some(i) = spec.first_nonzero_order() {
                bad.push(format!("case {case}: f{i} nonzero at {lam:?}"));
            }
        }
    }
    let detail = if bad.is_empty() {
        format!("{total} center points, f1..f6 identically zero at each")
    } else {
        bad.join("; ")
    };
    Ok(Outcome::new(bad.is_empty(), detail))
}

fn criterion_4() -> Result<Outcome> {
    let t = Instant::now();
    let spec = averaged_functions(&cubic_fold_example(), 4)?;
    let z = spec.vars().require("z")?;
    let mut notes = Vec::new();
    let vanish = spec.f(1).is_zero() && spec.f(2).is_zero();
    notes.push(format!("f1 = f2 = 0: {vanish}"));
    let (_, f3) = split_constant_factor(spec.f(3), z)?;
    let (c4, f4) = split_constant_factor(spec.f(4), z)?;
    let f3_ok = f3.monic() == fold_leading_reference().monic();
    let f4_ok = f4.monic() == fold_next_reference().monic();
    notes.push(format!("f3 shape {f3_ok}, f4 shape {f4_ok} (constant {c4})"));
    let roots = positive_roots_upoly(&f3)?;
    let root_ok = roots.count() == 1 && {
        let r = &roots.roots[0];
        let half = Rat::new(1, 2);
        r.multiplicity == 2 && r.lo.pow(2) < half && half <= r.hi.pow(2)
    };
    notes.push(format!("double root bracketing sqrt(2)/2: {root_ok}"));
    let verdict = branch_count(&spec, &BTreeMap::new())?;
    let signs = verdict
        .roots
        .first()
        .filter(|b| b.method == BranchMethod::Fold)
        .and_then(|b| b.fold.as_ref())
        .map(|f| (f.delta1, f.delta2));
    notes.push(format!("fold signs {signs:?}"));
    let secs = t.elapsed().as_secs_f64();
    notes.push(format!("{secs:.2} s"));
    let passed = vanish && f3_ok && f4_ok && root_ok && signs == Some((1, -1)) && secs < 60.0;
    Ok(Outcome::new(passed, notes.join(", ")))
}

const FOLD_Z: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Cycles of the cubic fold example on `z ∈ [0.3, 1.2]` at both signs of eps.
fn fold_cycles(sys: &PerturbedOscillator, params: &[f64], cfg: &IntegratorConfig) -> Result<[Vec<f64>; 2]> {
    let mut out = [Vec::new(), Vec::new()];
    for (slot, eps) in out.iter_mut().zip([1e-3, -1e-3]) {
        let found = find_limit_cycles(|z| displacement_numeric(sys, params, z, eps, cfg), 0.3, 1.2, 91, 1e-10)?;
        *slot = found.cycles.iter().map(|c| c.z).collect();
    }
    Ok(out)
}

fn criterion_5() -> Result<Outcome> {
    let t = Instant::now();
    let sys = cubic_fold_example();
    let params = sys.constant_param_values().context("square-root constants")?;
    let judge = |[plus, minus]: &[Vec<f64>; 2]| {
        plus.len() == 2 && plus.iter().all(|z| (z - FOLD_Z).abs() <= 0.05) && minus.is_empty()
    };
    let stated = fold_cycles(&sys, &params, &IntegratorConfig::with_tolerances(1e-10, 1e-16))?;
    let tight = fold_cycles(&sys, &params, &IntegratorConfig::with_tolerances(1e-14, 1e-20))?;
    let secs = t.elapsed().as_secs_f64();
    let distances: Vec<String> = tight[0].iter().map(|z| format!("{:.4}", (z - FOLD_Z).abs())).collect();
    Ok(Outcome::new(
        judge(&tight) && secs < 120.0,
        format!(
            "rtol 1e-14: cycles {:?} at eps=1e-3 (distance to fold {}), {:?} at eps=-1e-3; \
             rtol 1e-10: {:?} and {:?}; {secs:.1} s",
            tight[0],
            distances.join(", "),
            tight[1],
            stated[0],
            stated[1]
        ),
    ))
}

fn criterion_6() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cfg = IntegratorConfig::with_tolerances(1e-14, 1e-20);
    let mut worst = 0.0_f64;
    let mut bad = Vec::new();
    for _ in 0..5 {
        let lam: [Rat; 10] = std::array::from_fn(|_| Rat::new(rng.gen_range(-4..=4), 4));
        let sys = bautin_at(&lam);
        let spec = averaged_functions(&sys, 4)?;
        for z in [0.5, 1.0, 1.5] {
            let mut ratios = Vec::new();
            for eps in [1e-2, 5e-3, 2.5e-3] {
                let d = displacement_numeric(&sys, &[], z, eps, &cfg)?.value;
                let sum: f64 = (1..=4).map(|i| spec.eval_f64(i, &[], z) * eps.powi(i as i32)).sum();
                ratios.push((d - sum).abs() / eps.powi(5));
            }
            for w in ratios.windows(2) {
                let v = (w[1] / w[0] - 1.0).abs();
                worst = worst.max(v);
                if v.is_nan() || v >= 0.5 {
                    bad.push(format!("z {z}: ratios {ratios:?} at {lam:?}"));
                }
            }
        }
    }
    let detail = if bad.is_empty() {
        format!("15 (lambda, z) pairs, largest variation {:.1}%", 100.0 * worst)
    } else {
        bad.join("; ")
    };
    Ok(Outcome::new(bad.is_empty(), detail))
}

fn random_poly(rng: &mut ChaCha8Rng, vars: &VarSet, degs: std::ops::RangeInclusive<u32>, terms: usize) -> MPoly {
    let n = vars.len();
    let terms = (0..rng.gen_range(1..=terms)).map(|_| {
        let mut e = vec![0u32; n];
        for _ in 0..rng.gen_range(degs.clone()) {
            e[rng.gen_range(0..n)] += 1;
        }
        (
            Monomial::from_exps(e),
            Rat::new(rng.gen_range(-5..=5), rng.gen_range(1..=3)),
        )
    });
    MPoly::from_terms(vars, terms)
}

fn criterion_7() -> Result<Outcome> {
    let t = Instant::now();
    let names = ["w", "x", "y", "z"];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut pairs, mut combos, mut largest) = (0, 0, 0);
    for trial in 0..50 {
        let vars = VarSet::new(&names[..rng.gen_range(2..=4)])?;
        let mut gens = Vec::new();
        while gens.len() < rng.gen_range(1..=5) {
            let g = random_poly(&mut rng, &vars, 1..=3, 4);
            if !g.is_zero() {
                gens.push(g);
            }
        }
        let g = groebner(&vars, &gens, MonomialOrder::degrevlex(vars.len()))?;
        let b = g.basis();
        largest = largest.max(b.len());
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                let r = s_polynomial(&b[i], &b[j], g.order()).divmod(b, g.order())?.1;
                ensure!(r.is_zero(), "trial {trial}: S({i}, {j}) leaves {r}");
                pairs += 1;
            }
        }
        for _ in 0..20 {
            let mut combo = MPoly::zero(&vars);
            for f in &gens {
                combo = combo.try_add(&random_poly(&mut rng, &vars, 0..=2, 3).try_mul(f)?)?;
            }
            ensure!(
                g.normal_form(&combo)?.is_zero(),
                "trial {trial}: combination not reduced to 0"
            );
            combos += 1;
        }
    }
    let secs = t.elapsed().as_secs_f64();
    Ok(Outcome::new(
        secs < 300.0,
        format!("{pairs} S-polynomials and {combos} combinations reduce to 0, bases up to {largest}, {secs:.2} s"),
    ))
}

fn mb(text: &str) -> Result<MPoly> {
    Ok(MPoly::parse(text, &mb_vars())?)
}

fn euler(text: &str) -> Result<MPoly> {
    Ok(MPoly::parse(text, &euler_vars())?)
}

fn mu124() -> [Rat; 3] {
    [1, 2, 4].map(Rat::from_int)
}

fn criterion_8() -> Result<Outcome> {
    let cfg = IntegratorConfig::with_tolerances(1e-12, 1e-14);
    let eps = 0.01;
    let leaf = Rat::one();
    // C = (D - C0) R - x1 A with the leaf condition encoded in R.
    let a = mb("x2 - x3^2")?;
    let c = mb("x3 + 1/2*x1^2 - 1")?
        .try_mul(&mb("-1 + x2*x3")?)?
        .try_sub(&mb("x1")?.try_mul(&a)?)?;
    ensure!(
        mb_invariance_check(&a, &c, &leaf)?.is_some(),
        "constructed perturbation rejected"
    );
    let good = MBPerturbation::new(a, mb("x1*x2^2")?, c, leaf)?;
    let bad = MBPerturbation::new(mb("0")?, mb("0")?, mb("1")?, Rat::one())?;
    ensure!(
        mb_invariance_check(&bad.a, &bad.c, &bad.leaf)?.is_none(),
        "violating perturbation accepted"
    );
    let x0 = MBChart { leaf: 1.0 }.lift([0.4, 0.3]).context("lift")?;
    let mb_drift =
        |p: &MBPerturbation| casimir_drift(|_, x| p.eval_field(&[], *x, eps), |x| mb_casimir(*x), x0, 100.0, &cfg);
    let (mb_good, mb_bad) = (mb_drift(&good)?, mb_drift(&bad)?);

    let pert = EulerPerturbation::new(
        mu124(),
        euler("x2 - x1*D")?,
        euler("x1^2")?,
        euler("-1 + x1")?,
        Rat::one(),
    )?;
    let y0 = EulerChart::of(&pert, Hemisphere::Upper)
        .lift([0.2, 0.1])
        .context("lift")?;
    let eu_good = casimir_drift(
        |_, x| pert.eval_field(&[], *x, eps),
        |x| euler_casimir(*x),
        y0,
        100.0,
        &cfg,
    )?;
    let mu = pert.mu_f64();
    let violating = |_: f64, x: &[f64; 3]| {
        let u = euler_unperturbed(mu, *x);
        [u[0], u[1], u[2] + eps * x[2]]
    };
    let eu_bad = casimir_drift(violating, |x| euler_casimir(*x), y0, 100.0, &cfg)?;
    let passed = mb_good < 1e-8 && mb_bad > 1e-4 && eu_good < 1e-8 && eu_bad > 1e-4;
    Ok(Outcome::new(
        passed,
        format!(
            "drift over t in [0, 100]: Maxwell-Bloch {mb_good:.1e} kept, {mb_bad:.1e} violated; \
             Euler top {eu_good:.1e} kept, {eu_bad:.1e} violated"
        ),
    ))
}

/// Leaf points over random planar points of the annulus `r ∈ [0.1, r_max]`.
fn leaf_samples(chart: &dyn LeafChart, r_max: f64, seed: u64) -> Vec<[f64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < 20 {
        let r = rng.gen_range(0.1..r_max);
        let t = rng.gen_range(0.0..TAU);
        if let Some(x) = chart.lift([r * t.cos(), r * t.sin()]) {
            out.push(x);
        }
    }
    out
}

fn criterion_9() -> Result<Outcome> {
    let mut parts = Vec::new();
    let mut passed = true;
    let chart = MBChart { leaf: 1.0 };
    let red = mb_reduce(&MBPerturbation::zero(Rat::one()), ReductionConvention::ChainRule)?;
    let rep = pushforward_check(
        mb_unperturbed,
        &chart,
        |y| red.system.eval_field(&[], y, 0.0),
        &leaf_samples(&chart, 0.95, 9),
    );
    passed &= rep.checked == 20 && rep.max_residual < 1e-10;
    parts.push(format!(
        "Maxwell-Bloch {:.1e} at {} points",
        rep.max_residual, rep.checked
    ));

    let pert = EulerPerturbation::zero(mu124(), Rat::one())?;
    for h in [Hemisphere::Upper, Hemisphere::Lower] {
        let chart = EulerChart::of(&pert, h);
        let red = euler_reduce(&pert, h, ReductionConvention::ChainRule)?;
        let params = red.system.constant_param_values().context("square-root constants")?;
        let rep = pushforward_check(
            |x| euler_unperturbed(pert.mu_f64(), x),
            &chart,
            |y| red.system.eval_field(&params, y, 0.0),
            &leaf_samples(&chart, 0.45, 10),
        );
        passed &= rep.checked == 20 && rep.max_residual < 1e-10;
        parts.push(format!(
            "Euler {h:?} {:.1e} at {} points",
            rep.max_residual, rep.checked
        ));
    }
    Ok(Outcome::new(passed, format!("max residual: {}", parts.join(", "))))
}

fn criterion_10(report: &Report) -> Result<Outcome> {
    let mut failures = failed_checks(report, &["I6 strictly contains I5", "non-center point in V(I6)"]);
    let present = report
        .checks
        .iter()
        .filter(|c| c.name.starts_with("I6") || c.name.starts_with("non-center"))
        .count();
    if present != 2 {
        failures.push(format!("expected 2 chain checks, found {present}"));
    }
    // The witness, averaged on its own, has no nonzero function up to order 6
    // and yet satisfies none of the center conditions.
    let witness = non_center_in_variety();
    let spec = averaged_functions(&bautin_at(&witness), 6)?;
    if let Some(i) = spec.first_nonzero_order() {
        failures.push(format!("f{i} nonzero at the witness"));
    }
    if !center_conditions(&witness).is_empty() {
        failures.push("the witness satisfies a center condition".into());
    }
    let point: Vec<String> = BAUTIN_PARAMS
        .iter()
        .zip(&witness)
        .map(|(n, v)| format!("{n}={v}"))
        .collect();
    let stab = report
        .results
        .get("stabilization")
        .map(|v| v.to_string())
        .unwrap_or_default();
    let detail = if failures.is_empty() {
        format!("{stab}; witness {} lies in V(I6), is no center", point.join(" "))
    } else {
        failures.join("; ")
    };
    Ok(Outcome::new(failures.is_empty(), detail))
}

fn main() -> ExitCode {
    let start = Instant::now();
    // Criteria 2 and 10 share one reduction run, timed inside the report.
    let theorem = repro_theorem(6, None);
    let mut outcomes: Vec<(usize, &str, Result<Outcome>, f64)> = Vec::new();
    let mut run = |n: usize, title: &'static str, f: &dyn Fn() -> Result<Outcome>| {
        let t = Instant::now();
        let outcome = f();
        outcomes.push((n, title, outcome, t.elapsed().as_secs_f64()));
    };
    let theorem_outcome = |f: fn(&Report) -> Result<Outcome>| match &theorem {
        Ok(r) => f(r),
        Err(e) => Err(anyhow::anyhow!("repro-theorem failed: {e}")),
    };
    run(1, "Bautin spectrum", &criterion_1);
    run(2, "chain reduction of orders 2-6", &|| {
        theorem_outcome(|r| Ok(criterion_2(r)))
    });
    run(3, "center regression", &criterion_3);
    run(4, "cubic fold, symbolic", &criterion_4);
    run(5, "cubic fold, numeric", &criterion_5);
    run(6, "order consistency", &criterion_6);
    run(7, "Groebner soundness", &criterion_7);
    run(8, "leaf invariance", &criterion_8);
    run(9, "reduction correctness", &criterion_9);
    run(10, "chain non-stabilization", &|| theorem_outcome(criterion_10));

    println!();
    let mut failing = Vec::new();
    for (n, title, outcome, secs) in &outcomes {
        let (passed, detail) = match outcome {
            Ok(o) => (o.passed, o.detail.clone()),
            Err(e) => (false, format!("error: {e:#}")),
        };
        if !passed {
            failing.push(*n);
        }
        let tag = if passed { "PASS" } else { "FAIL" };
        println!("{tag} {n:>2} {title} [{secs:.1} s]: {detail}");
    }
    println!(
        "{} of {} criteria pass; known failures {KNOWN_FAILURES:?}; total {:.1} s",
        outcomes.len() - failing.len(),
        outcomes.len(),
        start.elapsed().as_secs_f64()
    );
    if failing == KNOWN_FAILURES {
        ExitCode::SUCCESS
    } else {
        println!("failing set {failing:?} differs from the known failures");
        ExitCode::FAILURE
    }
}
