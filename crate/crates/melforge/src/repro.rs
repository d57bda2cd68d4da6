//! Reproduction runs for the quadratic Bautin classification and the cubic
//! fold example, with built-in fixtures.

use std::collections::{BTreeMap, BTreeSet};

use melforge_core::averaging::{
    averaged_functions, bautin_family, cubic_fold_example, AveragedSpectrum, BAUTIN_PARAMS,
};
use melforge_core::bifurcate::{
    bautin_param_vars, center_conditions, fold_analysis, non_center_in_variety, positive_roots_upoly, quadratic_xi,
    split_constant_factor, EpsSide, QUADRATIC_XI_POSITIONS,
};
use melforge_core::ideals::{chain_stabilization_of, compare_hatted, reduce_averaged_chain, HattedMatch};
use melforge_core::numlab::{CycleSearch, IntegratorConfig};
use melforge_core::poly::{MPoly, UPoly, VarSet};
use melforge_core::{MonomialOrder, Rat};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::files::GoldenFile;
use crate::report::Report;
use crate::sweep::find_cycles;

/// Highest averaging order of the quadratic reproduction.
pub const MAX_THEOREM_ORDER: usize = 6;

/// The classification table: case, condition, number of cycles.
pub const CASE_TABLE: [(&str, &str, &str); 7] = [
    ("i", "xi20 != 0", "0"),
    ("ii", "xi20 = 0, xih30 != 0", "0"),
    ("iii", "xi20 = xih30 = xih42 = 0, xih40 != 0", "0"),
    (
        "iv",
        "xi20 = xih30 = 0, xih42 != 0, s1 = xih40/xih42",
        "1 if s1 < 0, else 0",
    ),
    ("v", "xi20 = xih30 = xih40 = xih42 = 0, xih51 != 0", "0"),
    (
        "vi",
        "xi20 = .. = xih51 = 0, xih63 != 0, s2 = xih61/xih63",
        "1 if s2 < 0, else 0",
    ),
    ("vi-degenerate", "xi20 = .. = xih51 = xih63 = 0, xih61 != 0", "0"),
];

/// Reference polynomials `(name, order, z_power, polynomial)` over the
/// Bautin parameters: the built-in ones, overridden by name from `golden`.
pub fn theorem_references(golden: Option<&GoldenFile>) -> Result<Vec<(String, usize, u32, MPoly)>> {
    let vars = bautin_param_vars();
    let builtin = quadratic_xi();
    if let Some(g) = golden {
        if let Some(unknown) = g.0.keys().find(|k| !builtin.iter().any(|(n, _)| n == k)) {
            let known: Vec<&str> = builtin.iter().map(|(n, _)| *n).collect();
            return Err(CliError::input(format!(
                "unknown reference `{unknown}`; expected one of {}",
                known.join(", ")
            )));
        }
    }
    builtin
        .into_iter()
        .zip(QUADRATIC_XI_POSITIONS)
        .map(|((name, poly), (order, zp))| {
            let poly = match golden.and_then(|g| g.0.get(name)) {
                Some(text) => MPoly::parse(text, &vars)?,
                None => poly,
            };
            Ok((name.to_string(), order, zp, poly))
        })
        .collect()
}

#[derive(Serialize)]
struct MatchRow {
    name: String,
    order: usize,
    z_power: u32,
    computed: String,
    reference: String,
    ratio: Option<String>,
    exact: bool,
}

impl From<&HattedMatch> for MatchRow {
    fn from(m: &HattedMatch) -> Self {
        MatchRow {
            name: m.name.clone(),
            order: m.order,
            z_power: m.z_power,
            computed: m.ours.to_string(),
            reference: m.reference.to_string(),
            ratio: m.ratio.as_ref().map(Rat::to_string),
            exact: m.exact,
        }
    }
}

#[derive(Serialize)]
struct HattedRow {
    order: usize,
    z_power: u32,
    pi_power: Option<u32>,
    coefficient: String,
}

#[derive(Serialize)]
struct CaseRow {
    case: &'static str,
    condition: &'static str,
    cycles: &'static str,
}

/// `c * pi^k` for a pi-free rational `c`.
fn constant_text(c: &Rat, pi_power: u32) -> String {
    match pi_power {
        0 => c.to_string(),
        1 => format!("{c}*pi"),
        k => format!("{c}*pi^{k}"),
    }
}

/// `f = c * pi^k * z^zp * reference` with rational `c`, if it holds.
fn single_term_multiple(f: &MPoly, zp: u32, reference: &MPoly, pvars: &VarSet) -> Result<Option<(Rat, u32)>> {
    let z = f.vars().require("z")?;
    let pi = f.vars().require("pi")?;
    let by_z = f.split_by_var(z);
    if by_z.len() != 1 || !by_z.contains_key(&zp) {
        return Ok(None);
    }
    let mut by_pi = by_z[&zp].split_by_var(pi);
    if by_pi.len() != 1 {
        return Ok(None);
    }
    let (k, c) = by_pi.pop_first().expect("one entry");
    let c = c.embed(pvars)?;
    Ok(c.proportional(&reference.embed(pvars)?).map(|r| (r, k)))
}

/// Recomputes the Bautin spectrum to `order`, reduces it along the ideal
/// chain and compares every hatted coefficient with the references.
pub fn repro_theorem(order: usize, golden: Option<&GoldenFile>) -> Result<Report> {
    if !(2..=MAX_THEOREM_ORDER).contains(&order) {
        return Err(CliError::input(format!(
            "order must be between 2 and {MAX_THEOREM_ORDER}, got {order}"
        )));
    }
    let golden_bytes = match golden {
        Some(g) => serde_json::to_vec(g).expect("serializable"),
        None => Vec::new(),
    };
    let mut report = Report::new("repro-theorem", &[order.to_string().as_bytes(), &golden_bytes]);
    let references = theorem_references(golden)?;
    let references: Vec<_> = references.into_iter().filter(|r| r.1 <= order).collect();

    let sys = bautin_family();
    let spec = report.timed("averaging", || averaged_functions(&sys, order))?;
    report.result(
        "function_terms",
        spec.functions().iter().map(MPoly::len).collect::<Vec<_>>(),
    );
    report.check("f1 vanishes", spec.f(1).is_zero(), format!("f1 = {}", spec.f(1)));

    let chain = report.timed("chain", || {
        reduce_averaged_chain(&spec, MonomialOrder::degrevlex_ascending(10))
    })?;
    let (_, o2, zp2, xi20) = references.iter().find(|r| r.1 == 2).expect("order-2 reference");
    match single_term_multiple(spec.f(2), *zp2, xi20, &chain.param_vars)? {
        Some((c, k)) => {
            let constant = constant_text(&c, k);
            report.check("f2 shape", true, format!("f{o2} = {constant} * z^{zp2} * ({xi20})"));
            report.result("f2_constant", constant);
        }
        None => {
            report.check(
                "f2 shape",
                false,
                format!("f2 = {} is not c*pi^k*z^{zp2}*({xi20})", spec.f(2)),
            );
        }
    }

    let matches = compare_hatted(&chain, &references)?;
    for m in &matches {
        let name = format!("{} matches", m.name);
        match (&m.ratio, m.exact) {
            (Some(c), true) => report.check(&name, true, format!("computed = {c} * reference")),
            (Some(c), false) => report.check(
                &name,
                true,
                format!(
                    "computed = {c} * reference modulo the ideal of orders below {}",
                    m.order
                ),
            ),
            (None, _) => report.check(
                &name,
                false,
                format!(
                    "order {} z^{}: computed `{}` is not a multiple of `{}` modulo the lower ideal",
                    m.order, m.z_power, m.ours, m.reference
                ),
            ),
        };
    }
    report.result("matches", matches.iter().map(MatchRow::from).collect::<Vec<_>>());

    let found: BTreeSet<(usize, u32)> = chain
        .nonzero()
        .iter()
        .filter(|(i, _, _)| *i >= 3)
        .map(|(i, z, _)| (*i, *z))
        .collect();
    let expected: BTreeSet<(usize, u32)> = QUADRATIC_XI_POSITIONS
        .iter()
        .copied()
        .filter(|(i, _)| *i >= 3 && *i <= order)
        .collect();
    report.check(
        "hatted support",
        found == expected,
        format!("nonzero hatted coefficients at (order, z power) {found:?}, expected {expected:?}"),
    );
    report.result(
        "hatted",
        chain
            .nonzero()
            .iter()
            .map(|(i, z, c)| HattedRow {
                order: *i,
                z_power: *z,
                pi_power: c.pi_power,
                coefficient: c.rational.to_string(),
            })
            .collect::<Vec<_>>(),
    );

    // The case ratios s1, s2 keep their sign only if both constants agree in sign.
    let ratio_of = |name: &str| matches.iter().find(|m| m.name == name).and_then(|m| m.ratio.clone());
    for (s, num, den) in [("s1", "xih40", "xih42"), ("s2", "xih61", "xih63")] {
        if matches.iter().any(|m| m.name == den) {
            let ok = match (ratio_of(num), ratio_of(den)) {
                (Some(a), Some(b)) => {
                    report.check(
                        &format!("{s} sign preserved"),
                        (&a * &b).is_positive(),
                        format!("constants {a} ({num}) and {b} ({den})"),
                    );
                    continue;
                }
                _ => false,
            };
            report.check(
                &format!("{s} sign preserved"),
                ok,
                format!("{num} or {den} did not match"),
            );
        }
    }

    let stab = chain_stabilization_of(&chain)?;
    let sizes: BTreeMap<String, usize> = chain
        .levels
        .iter()
        .map(|l| (format!("I{}", l.order), l.basis.basis().len()))
        .collect();
    report.result("basis_sizes", sizes);
    report.result("stabilization", &stab.note);
    if order == MAX_THEOREM_ORDER {
        let last = stab.steps.last().copied();
        report.check(
            "I6 strictly contains I5",
            last == Some((5, false)),
            format!("{}; last step {last:?}", stab.note),
        );
        let witness = non_center_in_variety();
        let point: BTreeMap<String, Rat> = BAUTIN_PARAMS
            .iter()
            .map(|n| n.to_string())
            .zip(witness.iter().cloned())
            .collect();
        let basis = &chain.level(order).expect("top level").basis;
        let mut nonzero = Vec::new();
        for g in basis.basis() {
            if !g.eval_named(&point)?.is_zero() {
                nonzero.push(g.to_string());
            }
        }
        let holding = center_conditions(&witness);
        let text: Vec<String> = BAUTIN_PARAMS
            .iter()
            .zip(&witness)
            .map(|(n, v)| format!("{n}={v}"))
            .collect();
        report.check(
            "non-center point in V(I6)",
            nonzero.is_empty() && holding.is_empty(),
            format!(
                "at {}: {} of {} basis elements nonzero, center conditions holding {holding:?}",
                text.join(", "),
                nonzero.len(),
                basis.basis().len()
            ),
        );
    }
    report.result(
        "case_table",
        CASE_TABLE
            .iter()
            .map(|&(case, condition, cycles)| CaseRow {
                case,
                condition,
                cycles,
            })
            .collect::<Vec<_>>(),
    );
    Ok(report)
}

/// `z^5 (8210368799 - 21687552313344 z^2 + 295572602880 z^4)`.
pub fn fold_next_reference() -> UPoly {
    let mut c = vec![Rat::zero(); 10];
    c[5] = Rat::from_int(8210368799);
    c[7] = Rat::from_int(-21687552313344);
    c[9] = Rat::from_int(295572602880);
    UPoly::new(c)
}

/// `z^3 (-1 + 2 z^2)^2`.
pub fn fold_leading_reference() -> UPoly {
    UPoly::from_ints(&[0, 0, 0, 1, 0, -4, 0, 4])
}

fn upoly_text(u: &UPoly) -> String {
    let vars = VarSet::new(&["z"]).expect("name");
    let z = MPoly::var_index(&vars, 0);
    u.coeffs()
        .iter()
        .enumerate()
        .fold(MPoly::zero(&vars), |acc, (k, c)| &acc + &z.pow(k as u32).scale(c))
        .to_string()
}

#[derive(Serialize)]
struct CycleRow {
    z: f64,
    lo: f64,
    hi: f64,
    error_bound: f64,
}

fn cycle_rows(search: &CycleSearch) -> Vec<CycleRow> {
    search
        .cycles
        .iter()
        .map(|c| CycleRow {
            z: c.z,
            lo: c.lo,
            hi: c.hi,
            error_bound: c.error_bound,
        })
        .collect()
}

/// Settings of the numeric leg of [`repro_proposition`].
#[derive(Clone, Debug)]
pub struct NumericLeg {
    pub eps: f64,
    pub config: IntegratorConfig,
    pub z_range: (f64, f64, usize),
    pub z_tol: f64,
}

impl Default for NumericLeg {
    fn default() -> Self {
        NumericLeg {
            eps: 1e-3,
            config: IntegratorConfig::with_tolerances(1e-14, 1e-20),
            z_range: (0.3, 1.2, 91),
            z_tol: 1e-10,
        }
    }
}

/// Checks the cubic fold example symbolically, then counts its cycles
/// numerically on both sides of `ε = 0`.
pub fn repro_proposition(leg: &NumericLeg) -> Result<Report> {
    if !(leg.eps > 0.0 && leg.eps.is_finite()) {
        return Err(CliError::input("eps must be positive; both signs are run"));
    }
    let inputs = format!(
        "{:e} {:e} {:e} {:?} {:e}",
        leg.eps, leg.config.rtol, leg.config.atol, leg.z_range, leg.z_tol
    );
    let mut report = Report::new("repro-proposition", &[inputs.as_bytes()]);
    let sys = cubic_fold_example();
    let params = sys.constant_param_values().expect("only square-root constants");
    let spec: AveragedSpectrum = report.timed("averaging", || averaged_functions(&sys, 4))?;
    let z = spec.vars().require("z")?;
    report.result("f", spec.functions().iter().map(MPoly::to_string).collect::<Vec<_>>());
    report.check(
        "f1 and f2 vanish",
        spec.f(1).is_zero() && spec.f(2).is_zero(),
        format!("f1 = {}, f2 = {}", spec.f(1), spec.f(2)),
    );

    let mut shape = |label: &str, f: &MPoly, reference: &UPoly| -> Result<Option<UPoly>> {
        let (c, u) = split_constant_factor(f, z)?;
        let ok = !u.is_zero() && u.monic() == reference.monic();
        let ratio = if ok {
            u.leading().expect("nonzero") / reference.leading().expect("nonzero")
        } else {
            Rat::zero()
        };
        report.check(
            &format!("{label} shape"),
            ok,
            if ok {
                format!("{label} = ({c}) * {ratio} * ({})", upoly_text(reference))
            } else {
                format!("{label} = {f} is not a multiple of {}", upoly_text(reference))
            },
        );
        Ok(ok.then_some(u))
    };
    let u3 = shape("f3", spec.f(3), &fold_leading_reference())?;
    shape("f4", spec.f(4), &fold_next_reference())?;
    let Some(u3) = u3 else {
        return Ok(report);
    };

    let roots = positive_roots_upoly(&u3)?;
    let half = Rat::new(1, 2);
    let single_double = roots.count() == 1 && roots.roots[0].multiplicity == 2;
    let root = roots.roots.first();
    let contains = root.is_some_and(|r| r.lo.pow(2) < half && r.hi.pow(2) >= half);
    report.check(
        "double root at sqrt(2)/2",
        single_double && contains,
        match root {
            Some(r) => format!(
                "{} root(s); first in ({}, {}] with multiplicity {}",
                roots.count(),
                r.lo,
                r.hi,
                r.multiplicity
            ),
            None => "no positive root".to_string(),
        },
    );
    let Some(root) = root.filter(|_| single_double) else {
        return Ok(report);
    };
    let fold = fold_analysis(spec.f(3), spec.f(4), z, root)?;
    report.check(
        "fold signs",
        (fold.delta1, fold.delta2) == (1, -1) && fold.two_branches == EpsSide::Positive,
        format!(
            "(delta1, delta2) = ({}, {}); two branches for {}",
            fold.delta1,
            fold.delta2,
            fold.two_branches.name()
        ),
    );
    report.result("fold_predicted_zeros", fold.predicted_zeros(leg.eps));

    let tol = format!(
        "rtol {:e}, atol {:e}, z_tol {:e}",
        leg.config.rtol, leg.config.atol, leg.z_tol
    );
    let z0 = std::f64::consts::FRAC_1_SQRT_2;
    for (sign, expected) in [(1.0, 2usize), (-1.0, 0usize)] {
        let eps = sign * leg.eps;
        let key = if sign > 0.0 { "positive" } else { "negative" };
        let search = report.timed(&format!("cycles_{key}"), || {
            find_cycles(&sys, &params, eps, leg.z_range, &leg.config, leg.z_tol)
        })?;
        let zs: Vec<f64> = search.cycles.iter().map(|c| c.z).collect();
        let mut ok = search.cycles.len() == expected && !search.degenerate;
        if expected == 2 && ok {
            ok = zs[0] < z0 && z0 < zs[1];
        }
        report.check_tol(
            &format!("{expected} cycles at eps = {eps:e}"),
            ok,
            format!("cycles at z = {zs:?}; {} suspect bracket(s)", search.suspects.len()),
            tol.clone(),
        );
        report.result(&format!("cycles_eps_{key}"), cycle_rows(&search));
        report.result(
            &format!("distance_to_fold_eps_{key}"),
            zs.iter().map(|z| (z - z0).abs()).collect::<Vec<_>>(),
        );
    }
    Ok(report)
}
