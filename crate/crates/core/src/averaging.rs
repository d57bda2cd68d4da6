//! Averaged functions of perturbed harmonic oscillators.
//!
//! A [`PerturbedOscillator`] is a harmonic oscillator turning in either
//! direction plus `ε(P, Q)`; see [`Orientation`]. In polar coordinates `dr/dθ = εG₁*/(θ̇₀ + εG₂*/r)` with `G₁* = cosθ P + sinθ Q`,
//! `G₂* = cosθ Q - sinθ P`; the averaged functions are the coefficients of
//! `r(2π) - z` in `ε`, with `θ` increasing.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::poly::{MPoly, Monomial, VarSet};
use crate::rat::Rat;
use crate::series::{EpsSeries, RadialComposer};
use crate::trig::{trig_monomial, FourierPoly, SecularPoly};

/// Sign of the unperturbed angular velocity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// `θ̇ = +1`: `ẏ₁ = -y₂`, `ẏ₂ = y₁`.
    ThetadotPlusOne,
    /// `θ̇ = -1`: `ẏ₁ = y₂`, `ẏ₂ = -y₁`.
    ThetadotMinusOne,
}

impl Orientation {
    /// The unperturbed `θ̇`.
    pub fn thetadot(self) -> i32 {
        match self {
            Orientation::ThetadotPlusOne => 1,
            Orientation::ThetadotMinusOne => -1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Orientation::ThetadotPlusOne => Orientation::ThetadotMinusOne,
            Orientation::ThetadotMinusOne => Orientation::ThetadotPlusOne,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Orientation::ThetadotPlusOne => "thetadot_plus_one",
            Orientation::ThetadotMinusOne => "thetadot_minus_one",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "thetadot_plus_one" | "+1" | "plus" => Ok(Orientation::ThetadotPlusOne),
            "thetadot_minus_one" | "-1" | "minus" => Ok(Orientation::ThetadotMinusOne),
            _ => Err(Error::usage(alloc::format!("unknown orientation `{s}`"))),
        }
    }
}

/// Planar perturbed harmonic oscillator with polynomial perturbation.
///
/// `P` and `Q` are `ε`-graded: `p[j]` is the coefficient of `ε^j` in `P`.
/// They live over `vars`, which holds the parameters followed by `y1`, `y2`.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbedOscillator {
    orientation: Orientation,
    vars: VarSet,
    p: Vec<MPoly>,
    q: Vec<MPoly>,
}

/// Structural diagnostics of a perturbation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PerturbationFlags {
    pub constant_part: bool,
    pub linear_part: bool,
    /// Maximal degree in `ε`.
    pub eps_degree: usize,
    /// Maximal total degree in `(y₁, y₂)`.
    pub y_degree: u32,
}

impl PerturbedOscillator {
    /// Builds an oscillator; `vars` must contain `y1` and `y2`.
    pub fn new(vars: &VarSet, orientation: Orientation, p: Vec<MPoly>, q: Vec<MPoly>) -> Result<Self> {
        vars.require("y1")?;
        vars.require("y2")?;
        for f in p.iter().chain(&q) {
            if f.vars() != vars {
                return Err(Error::usage("perturbation polynomial over a different variable set"));
            }
        }
        let mut sys = PerturbedOscillator {
            orientation,
            vars: vars.clone(),
            p,
            q,
        };
        sys.trim();
        Ok(sys)
    }

    fn trim(&mut self) {
        let n = self.p.len().max(self.q.len());
        self.p.resize(n, MPoly::zero(&self.vars));
        self.q.resize(n, MPoly::zero(&self.vars));
        while self.p.last().is_some_and(|x| x.is_zero()) && self.q.last().is_some_and(|x| x.is_zero()) {
            self.p.pop();
            self.q.pop();
        }
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn p(&self) -> &[MPoly] {
        &self.p
    }

    pub fn q(&self) -> &[MPoly] {
        &self.q
    }

    fn y_indices(&self) -> (usize, usize) {
        (
            self.vars.index_of("y1").expect("y1"),
            self.vars.index_of("y2").expect("y2"),
        )
    }

    /// Names of the parameters (every variable except `y1`, `y2`).
    pub fn param_names(&self) -> Vec<String> {
        self.vars
            .names()
            .iter()
            .filter(|n| *n != "y1" && *n != "y2")
            .cloned()
            .collect()
    }

    /// The parameter variable set, keeping square-root rules.
    pub fn param_vars(&self) -> Result<VarSet> {
        self.vars_with(&[])
    }

    /// Parameters followed by `z` and `pi`; the ring of averaged functions.
    pub fn averaging_vars(&self) -> Result<VarSet> {
        self.vars_with(&["z", "pi"])
    }

    fn vars_with(&self, extra: &[&str]) -> Result<VarSet> {
        let mut names = self.param_names();
        names.extend(extra.iter().map(|s| String::from(*s)));
        let mut v = VarSet::new(&names)?;
        for (i, n) in self.vars.names().iter().enumerate() {
            if let Some(q) = self.vars.sqrt_rule(i) {
                v = v.with_sqrt_rule(n, q.clone())?;
            }
        }
        Ok(v)
    }

    pub fn flags(&self) -> PerturbationFlags {
        let (i1, i2) = self.y_indices();
        let mut fl = PerturbationFlags {
            eps_degree: self.p.len().saturating_sub(1),
            ..Default::default()
        };
        for f in self.p.iter().chain(&self.q) {
            for (m, _) in f.terms() {
                let d = m.exp(i1) + m.exp(i2);
                fl.y_degree = fl.y_degree.max(d);
                match d {
                    0 => fl.constant_part = true,
                    1 => fl.linear_part = true,
                    _ => {}
                }
            }
        }
        fl
    }

    /// The unperturbed field plus `ε` times the perturbation, as a function
    /// of `(y₁, y₂)` at fixed parameters and `ε`, in floating point.
    pub fn eval_field(&self, params: &[f64], y: [f64; 2], eps: f64) -> [f64; 2] {
        let [p, q] = self.eval_perturbation(params, y, eps);
        let s = -self.orientation.thetadot() as f64;
        [s * y[1] + p, -s * y[0] + q]
    }

    /// `ε(P, Q)` at fixed parameters, `y` and `ε`, in floating point.
    pub fn eval_perturbation(&self, params: &[f64], y: [f64; 2], eps: f64) -> [f64; 2] {
        let (i1, i2) = self.y_indices();
        let mut pt: Vec<f64> = Vec::with_capacity(self.vars.len());
        let mut k = 0;
        for i in 0..self.vars.len() {
            if i == i1 {
                pt.push(y[0]);
            } else if i == i2 {
                pt.push(y[1]);
            } else {
                pt.push(params[k]);
                k += 1;
            }
        }
        let mut p = 0.0;
        let mut q = 0.0;
        let mut e = eps;
        for (pj, qj) in self.p.iter().zip(&self.q) {
            p += e * pj.eval_f64(&pt);
            q += e * qj.eval_f64(&pt);
            e *= eps;
        }
        [p, q]
    }

    /// Substitutes rational values for the named parameters and drops them
    /// from the variable set.
    pub fn specialize(&self, values: &BTreeMap<String, Rat>) -> Result<Self> {
        let mut idx = Vec::new();
        for (name, v) in values {
            let i = self.vars.require(name)?;
            if self.vars.sqrt_rule(i).is_some() {
                return Err(Error::usage(alloc::format!(
                    "`{name}` is a fixed square root and cannot be specialized"
                )));
            }
            idx.push((i, v));
        }
        let keep: Vec<String> = self
            .vars
            .names()
            .iter()
            .filter(|n| !values.contains_key(*n))
            .cloned()
            .collect();
        let mut vars = VarSet::new(&keep)?;
        for (i, n) in self.vars.names().iter().enumerate() {
            if let Some(q) = self.vars.sqrt_rule(i) {
                vars = vars.with_sqrt_rule(n, q.clone())?;
            }
        }
        let sub = |fs: &[MPoly]| -> Result<Vec<MPoly>> {
            fs.iter()
                .map(|f| {
                    idx.iter()
                        .fold(f.clone(), |acc, (i, v)| acc.substitute_value(*i, v))
                        .embed(&vars)
                })
                .collect()
        };
        PerturbedOscillator::new(&vars, self.orientation, sub(&self.p)?, sub(&self.q)?)
    }

    /// Default numeric values of the parameters: square roots for variables
    /// with a square-root rule, `None` if any other parameter is present.
    pub fn constant_param_values(&self) -> Option<Vec<f64>> {
        let (i1, i2) = self.y_indices();
        let mut out = Vec::new();
        for i in 0..self.vars.len() {
            if i == i1 || i == i2 {
                continue;
            }
            out.push(libm::sqrt(self.vars.sqrt_rule(i)?.to_f64()));
        }
        Some(out)
    }

    /// Maps `P`/`Q` term `(params, y₁^a y₂^b)` to `z^{a+b} cos^a sin^b`.
    fn to_fourier(&self, f: &MPoly, avars: &VarSet, cache: &mut BTreeMap<(u32, u32), FourierPoly>) -> FourierPoly {
        let (i1, i2) = self.y_indices();
        let zi = avars.index_of("z").expect("z");
        let mut groups: BTreeMap<(u32, u32), Vec<(Monomial, Rat)>> = BTreeMap::new();
        for (m, c) in f.terms() {
            let (a, b) = (m.exp(i1), m.exp(i2));
            let mut e = alloc::vec![0u32; avars.len()];
            let mut k = 0;
            for (i, &x) in m.exps().iter().enumerate() {
                if i == i1 || i == i2 {
                    continue;
                }
                e[k] = x;
                k += 1;
            }
            e[zi] = a + b;
            groups
                .entry((a, b))
                .or_default()
                .push((Monomial::from_exps(e), c.clone()));
        }
        let mut out = FourierPoly::zero(avars);
        for ((a, b), terms) in groups {
            let coeff = MPoly::from_terms(avars, terms);
            let basis = cache.entry((a, b)).or_insert_with(|| trig_monomial(avars, a, b));
            out = out.try_add(&basis.mul_poly(&coeff)).expect("same variables");
        }
        out
    }
}

/// Divides every coefficient by `z`; fails if some term is `z`-free.
fn divide_by_var(f: &FourierPoly, zi: usize) -> Option<FourierPoly> {
    let mut ok = true;
    let out = f.map_coeffs(|c| {
        let terms: Vec<(Monomial, Rat)> = c
            .terms()
            .iter()
            .map(|(m, a)| {
                if m.exp(zi) == 0 {
                    ok = false;
                    return (m.clone(), a.clone());
                }
                let mut e = m.exps().to_vec();
                e[zi] -= 1;
                (Monomial::from_exps(e), a.clone())
            })
            .collect();
        MPoly::from_terms(c.vars(), terms)
    });
    ok.then_some(out)
}

/// Lagrange standard form `dr/dθ = Σ_k ε^k G_k(θ, z)` truncated at `order`,
/// with `z` standing for `r`, over [`PerturbedOscillator::averaging_vars`].
pub fn to_standard_form(sys: &PerturbedOscillator, order: usize) -> Result<EpsSeries> {
    if order == 0 {
        return Err(Error::usage("truncation order must be at least 1"));
    }
    let flags = sys.flags();
    if flags.constant_part {
        return Err(Error::precondition(
            "perturbation has a nonzero constant part: G2*/r is not polynomial in r, so the polar standard form is not polynomial",
        ));
    }
    let avars = sys.averaging_vars()?;
    let zi = avars.require("z")?;
    let one = MPoly::one(&avars);
    let cos = FourierPoly::cos(1, one.clone());
    let sin = FourierPoly::sin(1, one);
    let mut cache = BTreeMap::new();
    let mut g1 = Vec::new();
    let mut h = Vec::new();
    for (pj, qj) in sys.p.iter().zip(&sys.q) {
        let pf = sys.to_fourier(pj, &avars, &mut cache);
        let qf = sys.to_fourier(qj, &avars, &mut cache);
        let g1j = cos.try_mul(&pf)?.try_add(&sin.try_mul(&qf)?)?;
        let g2j = cos.try_mul(&qf)?.try_sub(&sin.try_mul(&pf)?)?;
        let hj = divide_by_var(&g2j, zi).ok_or_else(|| Error::precondition("G2*/r is not polynomial in r"))?;
        g1.push(SecularPoly::from_fourier(g1j));
        h.push(SecularPoly::from_fourier(hj));
    }
    // εG₁* and εG₂*/r as ε-series.
    let mut a = alloc::vec![SecularPoly::zero(&avars)];
    a.extend(g1);
    let mut u = alloc::vec![SecularPoly::zero(&avars)];
    u.extend(h);
    let a = EpsSeries::from_coeffs(&avars, order, a)?;
    let u = EpsSeries::from_coeffs(&avars, order, u)?;
    let inv = EpsSeries::inv_unit(sys.orientation.thetadot(), &u)?;
    a.mul(&inv)
}

/// The averaged functions `f₁ .. f_N`.
#[derive(Clone, Debug, PartialEq)]
pub struct AveragedSpectrum {
    vars: VarSet,
    f: Vec<MPoly>,
}

impl AveragedSpectrum {
    pub fn new(vars: &VarSet, f: Vec<MPoly>) -> Result<Self> {
        vars.require("z")?;
        vars.require("pi")?;
        if f.iter().any(|p| p.vars() != vars) {
            return Err(Error::usage("averaged function over a different variable set"));
        }
        Ok(AveragedSpectrum { vars: vars.clone(), f })
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn order(&self) -> usize {
        self.f.len()
    }

    /// `f_i` for `1 ≤ i ≤ N`.
    pub fn f(&self, i: usize) -> &MPoly {
        &self.f[i - 1]
    }

    pub fn functions(&self) -> &[MPoly] {
        &self.f
    }

    /// First index with `f_ℓ ≢ 0`.
    pub fn first_nonzero_order(&self) -> Option<usize> {
        self.f.iter().position(|p| !p.is_zero()).map(|i| i + 1)
    }

    /// `f_i = Σ_k z^k c_k`, as a map `k -> c_k` of nonzero coefficients.
    pub fn z_coefficients(&self, i: usize) -> BTreeMap<u32, MPoly> {
        let zi = self.vars.index_of("z").expect("z");
        self.f(i).split_by_var(zi)
    }

    /// `δ = f_ℓ + f_{ℓ+1} ε + ...`, the displacement divided by `ε^ℓ`.
    pub fn reduced_displacement(&self) -> Result<ReducedDisplacement> {
        let ell = self.first_nonzero_order().ok_or_else(|| {
            Error::usage("all averaged functions vanish up to the truncation order: center up to this order")
        })?;
        Ok(ReducedDisplacement {
            ell,
            coeffs: self.f[ell - 1..].to_vec(),
        })
    }

    /// Substitutes numeric values for parameters and `pi`, leaving `z`.
    pub fn eval_f64(&self, i: usize, params: &[f64], z: f64) -> f64 {
        let mut pt: Vec<f64> = params.to_vec();
        pt.push(z);
        pt.push(core::f64::consts::PI);
        self.f(i).eval_f64(&pt)
    }
}

/// `d(z, ε) / ε^ℓ = Σ_i coeffs[i] ε^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedDisplacement {
    pub ell: usize,
    pub coeffs: Vec<MPoly>,
}

/// Computes `f₁ .. f_N` by the order-by-order recursion:
/// `r_n' = [ε^n] G(θ, z + Σ_{j<n} r_j ε^j)`, `r_n = ∫_0^θ r_n'`,
/// `f_n = r_n(2π)`.
pub fn averaged_functions(sys: &PerturbedOscillator, order: usize) -> Result<AveragedSpectrum> {
    let g = to_standard_form(sys, order)?;
    let vars = g.vars().clone();
    let zi = vars.require("z")?;
    let mut comp = RadialComposer::new(&g, zi)?;
    let mut f = Vec::with_capacity(order);
    for n in 1..=order {
        let rn = comp.coefficient(n)?.integrate_from_zero();
        f.push(rn.eval_at_2pi()?);
        if n < order {
            comp.push(rn)?;
        }
    }
    AveragedSpectrum::new(&vars, f)
}

/// Parameter names of the quadratic family in Bautin form.
pub const BAUTIN_PARAMS: [&str; 10] = ["a20", "a21", "a30", "a31", "a40", "a41", "a50", "a51", "a60", "a61"];

/// The quadratic perturbation in Bautin form,
/// `ẏ₁ = -y₂ + ε[-A₃y₁² + (2A₂ + A₅)y₁y₂ + A₆y₂²]`,
/// `ẏ₂ = y₁ + ε[A₂y₁² + (2A₃ + A₄)y₁y₂ - A₂y₂²]`, `A_i = a_{i0} + a_{i1}ε`.
pub fn bautin_family() -> PerturbedOscillator {
    let params = VarSet::new(&BAUTIN_PARAMS).expect("names");
    let vars = params.extended(&["y1", "y2"]).expect("names");
    let mut p = Vec::new();
    let mut q = Vec::new();
    for j in 0..2 {
        let a = |i: u32| alloc::format!("a{i}{j}");
        let pt = alloc::format!("-{}*y1^2 + (2*{} + {})*y1*y2 + {}*y2^2", a(3), a(2), a(5), a(6));
        let qt = alloc::format!("{}*y1^2 + (2*{} + {})*y1*y2 - {}*y2^2", a(2), a(3), a(4), a(2));
        p.push(MPoly::parse(&pt, &vars).expect("fixture"));
        q.push(MPoly::parse(&qt, &vars).expect("fixture"));
    }
    PerturbedOscillator::new(&vars, Orientation::ThetadotPlusOne, p, q).expect("fixture")
}

/// The Bautin family at a parameter point ordered as [`BAUTIN_PARAMS`].
pub fn bautin_at(lambda: &[Rat; 10]) -> PerturbedOscillator {
    let values = BAUTIN_PARAMS
        .iter()
        .map(|n| String::from(*n))
        .zip(lambda.iter().cloned())
        .collect();
    bautin_family().specialize(&values).expect("all parameters are plain")
}

/// The cubic example with `β = √145` (variable `b`, `b² = 145`), written in
/// `(x, y) = (y₁, y₂)`; `1/β = b/145`.
pub fn cubic_fold_example() -> PerturbedOscillator {
    let vars = VarSet::new(&["b", "y1", "y2"])
        .expect("names")
        .with_sqrt_rule("b", Rat::from_int(145))
        .expect("rule");
    let p0 = "289/2*y1^3 - 1/4*b*y1^2*y2 - 867/2*y1*y2^2 + 1/12*b*y2^3";
    let q0 = "-1/768*y1*y2 - 861/2*y1^2*y2 + 287/2*y2^3";
    // 18719/(884736 β) = 18719 b / (884736 * 145)
    let p1 = "18719/128286720*b*y1^3";
    let q1 = "y2^2 - 18719/128286720*b*y2^3";
    let parse = |s: &str| MPoly::parse(s, &vars).expect("fixture");
    PerturbedOscillator::new(
        &vars,
        Orientation::ThetadotMinusOne,
        alloc::vec![parse(p0), parse(p1)],
        alloc::vec![parse(q0), parse(q1)],
    )
    .expect("fixture")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specialization_matches_numeric_evaluation() {
        let lam = [1, 0, -2, 1, 3, 0, 1, -1, 2, 1].map(Rat::from_int);
        let sys = bautin_at(&lam);
        assert_eq!(sys.param_names(), alloc::vec::Vec::<String>::new());
        let lf: Vec<f64> = lam.iter().map(Rat::to_f64).collect();
        let a = bautin_family().eval_perturbation(&lf, [0.3, -0.7], 0.1);
        let b = sys.eval_perturbation(&[], [0.3, -0.7], 0.1);
        assert!((a[0] - b[0]).abs() < 1e-15 && (a[1] - b[1]).abs() < 1e-15);
    }

    #[test]
    fn zero_system_gives_zero_series() {
        let vars = VarSet::new(&["y1", "y2"]).unwrap();
        let sys = PerturbedOscillator::new(&vars, Orientation::ThetadotPlusOne, alloc::vec![], alloc::vec![]).unwrap();
        assert!(to_standard_form(&sys, 3).unwrap().is_zero());
        let spec = averaged_functions(&sys, 3).unwrap();
        assert_eq!(spec.first_nonzero_order(), None);
        assert!(spec.reduced_displacement().is_err());
    }

    #[test]
    fn single_monomial_standard_form() {
        // P = y1^2: G1* = r^2 cos^3, so G_1 = σ r^2 cos^3 θ.
        let vars = VarSet::new(&["y1", "y2"]).unwrap();
        let p = MPoly::parse("y1^2", &vars).unwrap();
        for o in [Orientation::ThetadotPlusOne, Orientation::ThetadotMinusOne] {
            let sys = PerturbedOscillator::new(&vars, o, alloc::vec![p.clone()], alloc::vec![]).unwrap();
            let g = to_standard_form(&sys, 2).unwrap();
            let av = sys.averaging_vars().unwrap();
            let z2 = MPoly::parse("z^2", &av)
                .unwrap()
                .scale(&Rat::from_int(o.thetadot() as i64));
            let want = SecularPoly::from_fourier(trig_monomial(&av, 3, 0).mul_poly(&z2));
            assert_eq!(g.coeff(1), &want);
            assert_eq!(
                g.coeff(1).parts()[0]
                    .cos_terms()
                    .values()
                    .map(|c| c.degree_in(av.index_of("z").unwrap()))
                    .max(),
                Some(Some(2))
            );
        }
    }

    #[test]
    fn constant_part_is_rejected() {
        let vars = VarSet::new(&["y1", "y2"]).unwrap();
        let sys = PerturbedOscillator::new(
            &vars,
            Orientation::ThetadotPlusOne,
            alloc::vec![MPoly::one(&vars)],
            alloc::vec![],
        )
        .unwrap();
        assert!(sys.flags().constant_part);
        assert!(matches!(to_standard_form(&sys, 2), Err(Error::Precondition(_))));
    }

    #[test]
    fn linear_damping_first_order() {
        // ẏ = rotation + ε y: r' = ε r, so r(2π) = z e^{2πε} and f_k = z (2π)^k / k!.
        let vars = VarSet::new(&["y1", "y2"]).unwrap();
        for o in [Orientation::ThetadotPlusOne, Orientation::ThetadotMinusOne] {
            let sys = PerturbedOscillator::new(
                &vars,
                o,
                alloc::vec![MPoly::parse("y1", &vars).unwrap()],
                alloc::vec![MPoly::parse("y2", &vars).unwrap()],
            )
            .unwrap();
            assert!(sys.flags().linear_part);
            let spec = averaged_functions(&sys, 4).unwrap();
            let av = spec.vars().clone();
            let mut fact = 1;
            for k in 1..=4usize {
                fact *= k as i64;
                let s = o.thetadot().pow(k as u32) as i64;
                let want = MPoly::parse(&alloc::format!("z*(2*pi)^{k}"), &av)
                    .unwrap()
                    .scale(&Rat::new(s, fact));
                assert_eq!(spec.f(k), &want);
            }
        }
    }

    #[test]
    fn bautin_second_order() {
        let sys = bautin_family();
        let spec = averaged_functions(&sys, 2).unwrap();
        assert!(spec.f(1).is_zero());
        let av = spec.vars();
        let xi20 = MPoly::parse("z^3*a50*(a30 - a60)", av).unwrap();
        let c = spec.f(2).proportional(&xi20).map(|_| ());
        let pi = av.index_of("pi").unwrap();
        let parts = spec.f(2).split_by_var(pi);
        assert_eq!(parts.keys().copied().collect::<Vec<_>>(), alloc::vec![1]);
        assert!(parts[&1].proportional(&xi20).is_some(), "{:?}", spec.f(2));
        let _ = c;
        assert_eq!(spec.first_nonzero_order(), Some(2));
    }
}
