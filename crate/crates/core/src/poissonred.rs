//! Reduction of two rank-two Poisson systems, the Maxwell-Bloch equations
//! and the Euler top, to planar perturbed harmonic oscillators on a
//! symplectic leaf, together with the numerical checks of that reduction.
//!
//! Both reductions exist in two conventions. [`ReductionConvention::ChainRule`]
//! is what the change of variables and the time rescaling actually produce;
//! [`ReductionConvention::AsPrinted`] reproduces the planar formulas in the
//! form they are usually quoted. The two agree on the unperturbed part and
//! differ in how the perturbation is scaled.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::averaging::{Orientation, PerturbationFlags, PerturbedOscillator};
use crate::error::{Error, Result};
use crate::poly::{MPoly, MonomialOrder, OrderKind, VarSet};
use crate::rat::Rat;

/// How the perturbation is carried to the planar system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum ReductionConvention {
    /// Push the 3D field through the chart and divide by `η`.
    #[default]
    ChainRule,
    /// Substitute into the quoted planar formulas literally.
    AsPrinted,
}

impl ReductionConvention {
    pub fn name(self) -> &'static str {
        match self {
            ReductionConvention::ChainRule => "chain_rule",
            ReductionConvention::AsPrinted => "as_printed",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "chain_rule" => Ok(ReductionConvention::ChainRule),
            "as_printed" => Ok(ReductionConvention::AsPrinted),
            _ => Err(Error::usage(format!(
                "unknown reduction convention `{s}` (expected chain_rule or as_printed)"
            ))),
        }
    }
}

/// Parity of a polynomial in one variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Zero,
    Even,
    Odd,
    Mixed,
}

impl Parity {
    pub fn of(f: &MPoly, var: usize) -> Parity {
        let mut even = false;
        let mut odd = false;
        for (m, _) in f.terms() {
            if m.exp(var) % 2 == 0 {
                even = true;
            } else {
                odd = true;
            }
        }
        match (even, odd) {
            (false, false) => Parity::Zero,
            (true, false) => Parity::Even,
            (false, true) => Parity::Odd,
            (true, true) => Parity::Mixed,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::Zero => "zero",
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::Mixed => "mixed",
        }
    }
}

/// Caches powers of the images of the source variables.
struct Substitution {
    target: VarSet,
    images: Vec<MPoly>,
    powers: Vec<Vec<MPoly>>,
}

impl Substitution {
    fn new(target: &VarSet, images: Vec<MPoly>) -> Self {
        let powers = images.iter().map(|_| alloc::vec![MPoly::one(target)]).collect();
        Substitution {
            target: target.clone(),
            images,
            powers,
        }
    }

    fn power(&mut self, i: usize, e: u32) -> Result<MPoly> {
        while self.powers[i].len() <= e as usize {
            let next = self.powers[i].last().expect("seeded").try_mul(&self.images[i])?;
            self.powers[i].push(next);
        }
        Ok(self.powers[i][e as usize].clone())
    }

    /// Image of `f`; `exps` maps each term's exponent vector to the powers
    /// of the images to use.
    fn apply(&mut self, f: &MPoly, mut exps: impl FnMut(&[u32]) -> Vec<u32>) -> Result<MPoly> {
        let mut acc = MPoly::zero(&self.target);
        for (m, c) in f.terms() {
            let mut t = MPoly::constant(&self.target, c.clone());
            for (i, e) in exps(m.exps()).into_iter().enumerate() {
                if e > 0 {
                    t = t.try_mul(&self.power(i, e)?)?;
                }
            }
            acc = acc.try_add(&t)?;
        }
        Ok(acc)
    }
}

fn check_tail(vars: &VarSet, tail: [&str; 3], what: &str) -> Result<usize> {
    let n = vars.len();
    if n < 3 || (0..3).any(|k| vars.name(n - 3 + k) != tail[k]) {
        return Err(Error::usage(format!(
            "{what} polynomials must be over parameters followed by {}, {}, {}",
            tail[0], tail[1], tail[2]
        )));
    }
    Ok(n - 3)
}

fn check_over(vars: &VarSet, fs: &[&MPoly]) -> Result<()> {
    if fs.iter().any(|f| f.vars() != vars) {
        return Err(Error::usage("perturbation polynomials over different variable sets"));
    }
    Ok(())
}

fn eval_at(f: &MPoly, params: &[f64], x: [f64; 3]) -> f64 {
    let mut pt = Vec::with_capacity(params.len() + 3);
    pt.extend_from_slice(params);
    pt.extend_from_slice(&x);
    f.eval_f64(&pt)
}

/// `max(1, |v|)`-relative tolerance for leaf membership.
const LEAF_TOL: f64 = 1e-9;

// ---------------------------------------------------------------------------
// Maxwell-Bloch

/// `ẋ = (x₂, x₁x₃, −x₁x₂)`.
pub fn mb_unperturbed(x: [f64; 3]) -> [f64; 3] {
    [x[1], x[0] * x[2], -x[0] * x[1]]
}

/// Casimir `D = x₃ + x₁²/2`.
pub fn mb_casimir(x: [f64; 3]) -> f64 {
    x[2] + 0.5 * x[0] * x[0]
}

/// A perturbation `(A, B, C)` of the Maxwell-Bloch field and a leaf `D = c`.
///
/// The polynomials live over the parameters followed by `x1, x2, x3`.
#[derive(Clone, Debug, PartialEq)]
pub struct MBPerturbation {
    vars: VarSet,
    pub a: MPoly,
    pub b: MPoly,
    pub c: MPoly,
    pub leaf: Rat,
}

impl MBPerturbation {
    pub fn new(a: MPoly, b: MPoly, c: MPoly, leaf: Rat) -> Result<Self> {
        let vars = a.vars().clone();
        check_tail(&vars, ["x1", "x2", "x3"], "Maxwell-Bloch")?;
        check_over(&vars, &[&b, &c])?;
        Ok(MBPerturbation { vars, a, b, c, leaf })
    }

    /// The zero perturbation over `x1, x2, x3`.
    pub fn zero(leaf: Rat) -> Self {
        let vars = mb_vars();
        let z = MPoly::zero(&vars);
        MBPerturbation {
            vars,
            a: z.clone(),
            b: z.clone(),
            c: z,
            leaf,
        }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn param_names(&self) -> Vec<String> {
        self.vars.names()[..self.vars.len() - 3].to_vec()
    }

    /// The perturbed 3D field at fixed parameters and `ε`.
    pub fn eval_field(&self, params: &[f64], x: [f64; 3], eps: f64) -> [f64; 3] {
        let u = mb_unperturbed(x);
        [
            u[0] + eps * eval_at(&self.a, params, x),
            u[1] + eps * eval_at(&self.b, params, x),
            u[2] + eps * eval_at(&self.c, params, x),
        ]
    }
}

/// `x1, x2, x3`.
pub fn mb_vars() -> VarSet {
    VarSet::new(&["x1", "x2", "x3"]).expect("names")
}

/// `D − c` over the variable set of `vars`, which ends with `x1, x2, x3`.
fn mb_leaf_poly(vars: &VarSet, leaf: &Rat) -> Result<MPoly> {
    let n = vars.len();
    let x1 = MPoly::var_index(vars, n - 3);
    let x3 = MPoly::var_index(vars, n - 1);
    let half = Rat::new(1, 2);
    x3.try_add(&x1.pow(2).scale(&half))?
        .try_sub(&MPoly::constant(vars, leaf.clone()))
}

/// Exact test of `D − c | x₁A + C`; returns the quotient `K` when the leaf
/// `D = c` is invariant and `None` otherwise.
///
/// Division is carried out in lex order with `x3` largest, where `D − c`
/// has leading monomial `x3`, so a zero remainder is equivalent to
/// divisibility.
pub fn mb_invariance_check(a: &MPoly, c: &MPoly, leaf: &Rat) -> Result<Option<MPoly>> {
    let vars = a.vars().clone();
    let n = check_tail(&vars, ["x1", "x2", "x3"], "Maxwell-Bloch")?;
    check_over(&vars, &[c])?;
    let x1 = MPoly::var_index(&vars, n);
    let dividend = x1.try_mul(a)?.try_add(c)?;
    let mut precedence = alloc::vec![n + 2];
    precedence.extend((0..n + 2).filter(|&i| i != n + 2));
    let order = MonomialOrder::new(OrderKind::Lex, precedence);
    let (q, r) = dividend.divmod(&[mb_leaf_poly(&vars, leaf)?], &order)?;
    Ok(r.is_zero().then(|| q.into_iter().next().expect("one divisor")))
}

/// Output of [`mb_reduce`].
#[derive(Clone, Debug, PartialEq)]
pub struct MBReduction {
    pub system: PerturbedOscillator,
    pub convention: ReductionConvention,
    pub quotient: MPoly,
    /// Parities of `A` and `B` in `x₁`.
    pub parity_a: Parity,
    pub parity_b: Parity,
    pub flags: PerturbationFlags,
}

/// Reduces a leaf-preserving Maxwell-Bloch perturbation to a planar
/// oscillator in `(y₁, y₂) = (x₂, x₃)` with `θ̇ = −1`, on the branch
/// `x₁ = √(2(c − y₂)) > 0`.
///
/// With the chain rule the planar perturbation is `P = B/x₁`, `Q = −A`, so
/// `B` must be odd and `A` even in `x₁`. As printed, `P = B` and `Q = −x₁A`,
/// which needs `B` even and `A` odd. Every surviving odd power of `x₁` is
/// reported as a non-polynomial reduction.
pub fn mb_reduce(pert: &MBPerturbation, convention: ReductionConvention) -> Result<MBReduction> {
    let quotient = mb_invariance_check(&pert.a, &pert.c, &pert.leaf)?.ok_or_else(|| {
        Error::precondition(format!(
            "D - c does not divide x1*A + C for c = {}: the leaf is not invariant",
            pert.leaf
        ))
    })?;
    let n = pert.vars.len() - 3;
    let parity_a = Parity::of(&pert.a, n);
    let parity_b = Parity::of(&pert.b, n);
    // Offset added to the x1 exponent before it is halved.
    let (shift_b, shift_a): (i64, i64) = match convention {
        ReductionConvention::ChainRule => (-1, 0),
        ReductionConvention::AsPrinted => (0, 1),
    };
    let bad = |f: &MPoly, shift: i64| {
        MPoly::from_terms(
            f.vars(),
            f.terms()
                .iter()
                .filter(|(m, _)| (m.exp(n) as i64 + shift).rem_euclid(2) != 0)
                .cloned(),
        )
    };
    let (bad_b, bad_a) = (bad(&pert.b, shift_b), bad(&pert.a, shift_a));
    if !bad_a.is_zero() || !bad_b.is_zero() {
        let mut parts = Vec::new();
        if !bad_b.is_zero() {
            parts.push(format!("B: {bad_b}"));
        }
        if !bad_a.is_zero() {
            parts.push(format!("A: {bad_a}"));
        }
        return Err(Error::precondition(format!(
            "non-polynomial reduction ({}): sqrt(2*(c - y2)) survives in {}",
            convention.name(),
            parts.join("; ")
        )));
    }
    let mut names = pert.param_names();
    names.extend(["y1".to_string(), "y2".to_string()]);
    let target = VarSet::new(&names)?;
    let y1 = MPoly::var(&target, "y1")?;
    let y2 = MPoly::var(&target, "y2")?;
    // x1^2 = 2(c - y2) on the leaf.
    let w = MPoly::constant(&target, &pert.leaf * &Rat::from_int(2)).try_sub(&y2.scale(&Rat::from_int(2)))?;
    let mut images: Vec<MPoly> = (0..n).map(|i| MPoly::var_index(&target, i)).collect();
    images.extend([w, y1, y2]);
    let mut sub = Substitution::new(&target, images);
    let halve = |shift: i64| {
        move |e: &[u32]| {
            let mut v = e.to_vec();
            v[n] = ((e[n] as i64 + shift) / 2) as u32;
            v
        }
    };
    let p = sub.apply(&pert.b, halve(shift_b))?;
    let q = -sub.apply(&pert.a, halve(shift_a))?;
    let system = PerturbedOscillator::new(&target, Orientation::ThetadotMinusOne, alloc::vec![p], alloc::vec![q])?;
    let flags = system.flags();
    Ok(MBReduction {
        system,
        convention,
        quotient,
        parity_a,
        parity_b,
        flags,
    })
}

// ---------------------------------------------------------------------------
// Euler top

/// Which half of the leaf `x₁² + x₂² + x₃² = c²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Hemisphere {
    /// `x₃ > 0`.
    Upper,
    /// `x₃ < 0`.
    Lower,
}

impl Hemisphere {
    pub fn sign(self) -> f64 {
        match self {
            Hemisphere::Upper => 1.0,
            Hemisphere::Lower => -1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Hemisphere::Upper => "+",
            Hemisphere::Lower => "-",
        }
    }

    pub fn from_symbol(s: &str) -> Result<Self> {
        match s {
            "+" | "upper" => Ok(Hemisphere::Upper),
            "-" | "lower" => Ok(Hemisphere::Lower),
            _ => Err(Error::usage(format!("unknown hemisphere `{s}` (expected + or -)"))),
        }
    }
}

/// `ẋ₁ = (μ₂−μ₃)/(μ₂μ₃) x₂x₃`, `ẋ₂ = (μ₃−μ₁)/(μ₃μ₁) x₃x₁`,
/// `ẋ₃ = (μ₁−μ₂)/(μ₁μ₂) x₁x₂`.
pub fn euler_unperturbed(mu: [f64; 3], x: [f64; 3]) -> [f64; 3] {
    let [m1, m2, m3] = mu;
    [
        (m2 - m3) / (m2 * m3) * x[1] * x[2],
        (m3 - m1) / (m3 * m1) * x[2] * x[0],
        (m1 - m2) / (m1 * m2) * x[0] * x[1],
    ]
}

/// Casimir `D = x₁² + x₂² + x₃²`.
pub fn euler_casimir(x: [f64; 3]) -> f64 {
    x[0] * x[0] + x[1] * x[1] + x[2] * x[2]
}

/// `κ = √(1/μᵢ − 1/μ₃)`: a rational, or a square-root variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kappa {
    Rational(Rat),
    Surd { name: String, square: Rat },
}

impl Kappa {
    fn new(name: &str, square: Rat) -> Kappa {
        match square.sqrt_exact() {
            Some(r) => Kappa::Rational(r),
            None => Kappa::Surd {
                name: name.to_string(),
                square,
            },
        }
    }

    pub fn square(&self) -> Rat {
        match self {
            Kappa::Rational(r) => r * r,
            Kappa::Surd { square, .. } => square.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        libm::sqrt(self.square().to_f64())
    }

    fn poly(&self, target: &VarSet) -> Result<MPoly> {
        match self {
            Kappa::Rational(r) => Ok(MPoly::constant(target, r.clone())),
            Kappa::Surd { name, .. } => MPoly::var(target, name),
        }
    }

    /// `1/κ`; for a surd `k` with `k² = q` this is `k/q`.
    fn recip_poly(&self, target: &VarSet) -> Result<MPoly> {
        match self {
            Kappa::Rational(r) => Ok(MPoly::constant(target, r.recip())),
            Kappa::Surd { square, .. } => Ok(self.poly(target)?.scale(&square.recip())),
        }
    }
}

/// A perturbation of the Euler top preserving both hemispheres of the leaf
/// `D = c²`: `A = x₃P`, `B = x₃Q`, `C = (D − c²)R/(2x₃) − x₁P − x₂Q` with
/// `P, Q, R` polynomials over the parameters followed by `x1, x2, D`.
#[derive(Clone, Debug, PartialEq)]
pub struct EulerPerturbation {
    vars: VarSet,
    pub mu: [Rat; 3],
    pub p: MPoly,
    pub q: MPoly,
    pub r: MPoly,
    pub c2: Rat,
}

/// `x1, x2, D`.
pub fn euler_vars() -> VarSet {
    VarSet::new(&["x1", "x2", "D"]).expect("names")
}

impl EulerPerturbation {
    pub fn new(mu: [Rat; 3], p: MPoly, q: MPoly, r: MPoly, c2: Rat) -> Result<Self> {
        let vars = p.vars().clone();
        check_tail(&vars, ["x1", "x2", "D"], "Euler-top")?;
        check_over(&vars, &[&q, &r])?;
        if mu.iter().any(|m| !m.is_positive()) {
            return Err(Error::usage("moments of inertia must be positive"));
        }
        if mu[2] <= mu[0] || mu[2] <= mu[1] {
            return Err(Error::usage("the reduction needs mu3 > mu1 and mu3 > mu2"));
        }
        if !c2.is_positive() {
            return Err(Error::usage("the leaf constant c^2 must be positive"));
        }
        Ok(EulerPerturbation { vars, mu, p, q, r, c2 })
    }

    /// The zero perturbation over `x1, x2, D`.
    pub fn zero(mu: [Rat; 3], c2: Rat) -> Result<Self> {
        let z = MPoly::zero(&euler_vars());
        Self::new(mu, z.clone(), z.clone(), z, c2)
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn param_names(&self) -> Vec<String> {
        self.vars.names()[..self.vars.len() - 3].to_vec()
    }

    /// `κ₁₃` and `κ₂₃`.
    pub fn kappas(&self) -> (Kappa, Kappa) {
        let k = |i: usize, name: &str| Kappa::new(name, &self.mu[i].recip() - &self.mu[2].recip());
        (k(0, "k13"), k(1, "k23"))
    }

    pub fn mu_f64(&self) -> [f64; 3] {
        [self.mu[0].to_f64(), self.mu[1].to_f64(), self.mu[2].to_f64()]
    }

    /// The perturbed 3D field at fixed parameters and `ε`; undefined on `x₃ = 0`.
    pub fn eval_field(&self, params: &[f64], x: [f64; 3], eps: f64) -> [f64; 3] {
        let d = euler_casimir(x);
        let at = [x[0], x[1], d];
        let p = eval_at(&self.p, params, at);
        let q = eval_at(&self.q, params, at);
        let r = eval_at(&self.r, params, at);
        let u = euler_unperturbed(self.mu_f64(), x);
        let c = (d - self.c2.to_f64()) / (2.0 * x[2]) * r - x[0] * p - x[1] * q;
        [u[0] + eps * x[2] * p, u[1] + eps * x[2] * q, u[2] + eps * c]
    }
}

/// Output of [`euler_reduce`].
#[derive(Clone, Debug, PartialEq)]
pub struct EulerReduction {
    pub system: PerturbedOscillator,
    pub convention: ReductionConvention,
    pub hemisphere: Hemisphere,
    pub kappa13: Kappa,
    pub kappa23: Kappa,
    pub flags: PerturbationFlags,
}

/// Reduces an Euler-top perturbation to a planar oscillator in
/// `(y₁, y₂) = (κ₁₃x₁, κ₂₃x₂)` with time `dτ = η dt`,
/// `η = −κ₁₃κ₂₃√(c² − x₁² − x₂²)`.
///
/// On the upper hemisphere the result has `θ̇ = −1`; on the lower one the
/// right-hand side changes sign and `θ̇ = +1`. With the chain rule the
/// perturbation is `(−P/κ₂₃, −Q/κ₁₃)` at `x₁ = y₁/κ₁₃`, `x₂ = y₂/κ₂₃`,
/// `D = c²`; as printed it is `(P, Q)` at `x₁ = y₁`, `x₂ = y₂`, `D = c²`.
/// Irrational `κ` become variables `k13`, `k23` with square-root rules.
/// A constant term in `P` or `Q` is passed through and shows up in `flags`.
pub fn euler_reduce(
    pert: &EulerPerturbation,
    hemisphere: Hemisphere,
    convention: ReductionConvention,
) -> Result<EulerReduction> {
    let (k13, k23) = pert.kappas();
    let n = pert.vars.len() - 3;
    let mut names = pert.param_names();
    for k in [&k13, &k23] {
        if let Kappa::Surd { name, .. } = k {
            names.push(name.clone());
        }
    }
    names.extend(["y1".to_string(), "y2".to_string()]);
    let mut target = VarSet::new(&names)?;
    for k in [&k13, &k23] {
        if let Kappa::Surd { name, square } = k {
            target = target.with_sqrt_rule(name, square.clone())?;
        }
    }
    let y1 = MPoly::var(&target, "y1")?;
    let y2 = MPoly::var(&target, "y2")?;
    let c2 = MPoly::constant(&target, pert.c2.clone());
    let mut images: Vec<MPoly> = (0..n).map(|i| MPoly::var_index(&target, i)).collect();
    let (sp, sq) = match convention {
        ReductionConvention::ChainRule => {
            images.extend([
                y1.try_mul(&k13.recip_poly(&target)?)?,
                y2.try_mul(&k23.recip_poly(&target)?)?,
                c2,
            ]);
            (-k23.recip_poly(&target)?, -k13.recip_poly(&target)?)
        }
        ReductionConvention::AsPrinted => {
            images.extend([y1, y2, c2]);
            (MPoly::one(&target), MPoly::one(&target))
        }
    };
    let (sp, sq, orientation) = match hemisphere {
        Hemisphere::Upper => (sp, sq, Orientation::ThetadotMinusOne),
        Hemisphere::Lower => (-sp, -sq, Orientation::ThetadotPlusOne),
    };
    let mut sub = Substitution::new(&target, images);
    let p = sub.apply(&pert.p, |e| e.to_vec())?.try_mul(&sp)?;
    let q = sub.apply(&pert.q, |e| e.to_vec())?.try_mul(&sq)?;
    let system = PerturbedOscillator::new(&target, orientation, alloc::vec![p], alloc::vec![q])?;
    let flags = system.flags();
    Ok(EulerReduction {
        system,
        convention,
        hemisphere,
        kappa13: k13,
        kappa23: k23,
        flags,
    })
}

// ---------------------------------------------------------------------------
// Numerical checks

/// The chart `x ↦ (y₁, y₂)` restricted to a leaf, its Jacobian and the
/// time-rescaling factor `η` with `dτ = η dt`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChartPoint {
    pub y: [f64; 2],
    pub jacobian: [[f64; 3]; 2],
    pub eta: f64,
}

/// A leaf of a Poisson system with its planar chart.
pub trait LeafChart {
    /// The chart at `x`, or `None` outside its domain or off the leaf.
    fn chart(&self, x: [f64; 3]) -> Option<ChartPoint>;
    /// The leaf point over a planar point, if any.
    fn lift(&self, y: [f64; 2]) -> Option<[f64; 3]>;
    fn casimir(&self, x: [f64; 3]) -> f64;
    fn leaf_value(&self) -> f64;
}

fn on_leaf(value: f64, leaf: f64) -> bool {
    (value - leaf).abs() <= LEAF_TOL * leaf.abs().max(1.0)
}

/// Maxwell-Bloch leaf `D = c` on the branch `x₁ > 0`, with
/// `(y₁, y₂) = (x₂, x₃)` and `η = x₁`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MBChart {
    pub leaf: f64,
}

impl LeafChart for MBChart {
    fn chart(&self, x: [f64; 3]) -> Option<ChartPoint> {
        if !(x[0] > 0.0 && x[1] != 0.0 && x[2] != 0.0) || !on_leaf(mb_casimir(x), self.leaf) {
            return None;
        }
        Some(ChartPoint {
            y: [x[1], x[2]],
            jacobian: [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            eta: x[0],
        })
    }

    fn lift(&self, y: [f64; 2]) -> Option<[f64; 3]> {
        let s = 2.0 * (self.leaf - y[1]);
        (s > 0.0).then(|| [libm::sqrt(s), y[0], y[1]])
    }

    fn casimir(&self, x: [f64; 3]) -> f64 {
        mb_casimir(x)
    }

    fn leaf_value(&self) -> f64 {
        self.leaf
    }
}

/// Euler-top leaf `D = c²` on one hemisphere, with
/// `(y₁, y₂) = (κ₁₃x₁, κ₂₃x₂)` and `η = −κ₁₃κ₂₃|x₃|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerChart {
    pub kappa13: f64,
    pub kappa23: f64,
    pub c2: f64,
    pub hemisphere: Hemisphere,
}

impl EulerChart {
    pub fn of(pert: &EulerPerturbation, hemisphere: Hemisphere) -> Self {
        let (k13, k23) = pert.kappas();
        EulerChart {
            kappa13: k13.to_f64(),
            kappa23: k23.to_f64(),
            c2: pert.c2.to_f64(),
            hemisphere,
        }
    }
}

impl LeafChart for EulerChart {
    fn chart(&self, x: [f64; 3]) -> Option<ChartPoint> {
        let inside = x[0] != 0.0 && x[1] != 0.0 && x[2] * self.hemisphere.sign() > 0.0;
        if !inside || !on_leaf(euler_casimir(x), self.c2) {
            return None;
        }
        Some(ChartPoint {
            y: [self.kappa13 * x[0], self.kappa23 * x[1]],
            jacobian: [[self.kappa13, 0.0, 0.0], [0.0, self.kappa23, 0.0]],
            eta: -self.kappa13 * self.kappa23 * x[2].abs(),
        })
    }

    fn lift(&self, y: [f64; 2]) -> Option<[f64; 3]> {
        let x1 = y[0] / self.kappa13;
        let x2 = y[1] / self.kappa23;
        let s = self.c2 - x1 * x1 - x2 * x2;
        (s > 0.0).then(|| [x1, x2, self.hemisphere.sign() * libm::sqrt(s)])
    }

    fn casimir(&self, x: [f64; 3]) -> f64 {
        euler_casimir(x)
    }

    fn leaf_value(&self) -> f64 {
        self.c2
    }
}

/// Outcome of [`pushforward_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct PushforwardReport {
    /// Largest componentwise `|Dφ·F(x)/η − G(φ(x))|` over accepted samples.
    pub max_residual: f64,
    pub checked: usize,
    /// Samples outside the chart domain or off the leaf.
    pub rejected: Vec<[f64; 3]>,
}

/// Compares the 3D field pushed through the chart and rescaled by `1/η`
/// with the planar field at each sample.
pub fn pushforward_check<F, G, C>(field: F, chart: &C, planar: G, samples: &[[f64; 3]]) -> PushforwardReport
where
    F: Fn([f64; 3]) -> [f64; 3],
    G: Fn([f64; 2]) -> [f64; 2],
    C: LeafChart + ?Sized,
{
    let mut report = PushforwardReport {
        max_residual: 0.0,
        checked: 0,
        rejected: Vec::new(),
    };
    for &x in samples {
        let Some(cp) = chart.chart(x) else {
            report.rejected.push(x);
            continue;
        };
        let f = field(x);
        let g = planar(cp.y);
        for (row, gk) in cp.jacobian.iter().zip(g) {
            let push: f64 = row.iter().zip(f).map(|(a, b)| a * b).sum::<f64>() / cp.eta;
            report.max_residual = report.max_residual.max((push - gk).abs());
        }
        report.checked += 1;
    }
    report
}

/// Named summary of a reduction for reports.
pub fn kappa_summary(k13: &Kappa, k23: &Kappa) -> BTreeMap<String, String> {
    let show = |k: &Kappa| match k {
        Kappa::Rational(r) => r.to_string(),
        Kappa::Surd { name, square } => format!("{name} = sqrt({square})"),
    };
    let mut m = BTreeMap::new();
    m.insert("kappa13".to_string(), show(k13));
    m.insert("kappa23".to_string(), show(k23));
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mb(text: &str) -> MPoly {
        MPoly::parse(text, &mb_vars()).unwrap()
    }

    fn planar(text: &str, sys: &PerturbedOscillator) -> MPoly {
        MPoly::parse(text, sys.vars()).unwrap()
    }

    #[test]
    fn invariance_trivial_cases() {
        let c = Rat::from_int(1);
        let a = mb("x1*x2 + x3^2");
        let k = mb_invariance_check(&a, &-mb("x1^2*x2 + x1*x3^2"), &c).unwrap();
        assert_eq!(k, Some(MPoly::zero(&mb_vars())));
        let k = mb_invariance_check(&MPoly::zero(&mb_vars()), &mb("(x3 + 1/2*x1^2 - 1)*x2"), &c).unwrap();
        assert_eq!(k, Some(mb("x2")));
        assert_eq!(mb_invariance_check(&mb("0"), &mb("1"), &c).unwrap(), None);
    }

    #[test]
    fn invariance_recovers_constructed_quotient() {
        let c = Rat::new(3, 2);
        let a = mb("x1^2*x2 - 3*x3 + x1*x2*x3");
        let r = mb("2*x1*x3^2 - x2 + 7/3");
        let leaf = mb_leaf_poly(&mb_vars(), &c).unwrap();
        let cc = leaf
            .try_mul(&r)
            .unwrap()
            .try_sub(&mb("x1").try_mul(&a).unwrap())
            .unwrap();
        assert_eq!(mb_invariance_check(&a, &cc, &c).unwrap(), Some(r));
    }

    #[test]
    fn mb_zero_perturbation_is_the_oscillator() {
        let red = mb_reduce(&MBPerturbation::zero(Rat::one()), ReductionConvention::ChainRule).unwrap();
        assert!(red.system.p().is_empty());
        assert_eq!(red.system.orientation(), Orientation::ThetadotMinusOne);
        assert_eq!(red.system.eval_field(&[], [0.3, 0.2], 0.1), [0.2, -0.3]);
    }

    #[test]
    fn mb_as_printed_examples() {
        let z = MPoly::zero(&mb_vars());
        let pert = MBPerturbation::new(z.clone(), mb("x2*x3"), z.clone(), Rat::one()).unwrap();
        let red = mb_reduce(&pert, ReductionConvention::AsPrinted).unwrap();
        assert_eq!(red.system.p()[0], planar("y1*y2", &red.system));
        assert!(red.system.q()[0].is_zero());

        let c = Rat::from_int(3);
        let pert = MBPerturbation::new(mb("x1"), z, mb("-x1^2 + 2*(x3 + 1/2*x1^2 - 3)"), c).unwrap();
        let red = mb_reduce(&pert, ReductionConvention::AsPrinted).unwrap();
        assert_eq!(red.quotient, mb("2"));
        assert_eq!(red.system.q()[0], planar("-2*(3 - y2)", &red.system));
        assert_eq!(red.parity_a, Parity::Odd);
    }

    #[test]
    fn mb_chain_rule_uses_the_opposite_parity() {
        let z = MPoly::zero(&mb_vars());
        let pert = MBPerturbation::new(z.clone(), mb("x2*x3"), z.clone(), Rat::one()).unwrap();
        let err = mb_reduce(&pert, ReductionConvention::ChainRule).unwrap_err();
        assert!(matches!(&err, Error::Precondition(m) if m.contains("non-polynomial") && m.contains("x2*x3")));

        // B = x1^3 x2, A = x2^2 - x3 (C = -x1 A keeps every leaf).
        let a = mb("x2^2 - x3");
        let c = -mb("x1").try_mul(&a).unwrap();
        let pert = MBPerturbation::new(a, mb("x1^3*x2"), c, Rat::from_int(2)).unwrap();
        let red = mb_reduce(&pert, ReductionConvention::ChainRule).unwrap();
        assert_eq!(red.system.p()[0], planar("2*(2 - y2)*y1", &red.system));
        assert_eq!(red.system.q()[0], planar("y2 - y1^2", &red.system));
        assert!(mb_reduce(&pert, ReductionConvention::AsPrinted).is_err());
    }

    #[test]
    fn mb_rejects_non_invariant_leaf() {
        let z = MPoly::zero(&mb_vars());
        let pert = MBPerturbation::new(z.clone(), z, mb("1"), Rat::one()).unwrap();
        let err = mb_reduce(&pert, ReductionConvention::ChainRule).unwrap_err();
        assert!(matches!(err, Error::Precondition(m) if m.contains("not invariant")));
    }

    fn euler(text: &str) -> MPoly {
        MPoly::parse(text, &euler_vars()).unwrap()
    }

    fn mu124() -> [Rat; 3] {
        [Rat::from_int(1), Rat::from_int(2), Rat::from_int(4)]
    }

    #[test]
    fn kappas_for_one_two_four() {
        let pert = EulerPerturbation::zero(mu124(), Rat::one()).unwrap();
        let (k13, k23) = pert.kappas();
        assert_eq!(
            k13,
            Kappa::Surd {
                name: "k13".into(),
                square: Rat::new(3, 4)
            }
        );
        assert_eq!(k23, Kappa::Rational(Rat::new(1, 2)));
    }

    #[test]
    fn euler_rejects_bad_moments() {
        let z = euler("0");
        let mu = [Rat::from_int(4), Rat::from_int(2), Rat::from_int(1)];
        assert!(EulerPerturbation::new(mu, z.clone(), z.clone(), z, Rat::one()).is_err());
    }

    #[test]
    fn euler_zero_perturbation() {
        let pert = EulerPerturbation::zero(mu124(), Rat::one()).unwrap();
        let up = euler_reduce(&pert, Hemisphere::Upper, ReductionConvention::ChainRule).unwrap();
        assert!(up.system.p().is_empty());
        assert_eq!(up.system.orientation(), Orientation::ThetadotMinusOne);
        let down = euler_reduce(&pert, Hemisphere::Lower, ReductionConvention::ChainRule).unwrap();
        assert_eq!(down.system.orientation(), Orientation::ThetadotPlusOne);
    }

    #[test]
    fn euler_chain_rule_scaling() {
        let z = euler("0");
        let pert = EulerPerturbation::new(mu124(), euler("x1"), -euler("x1"), z, Rat::one()).unwrap();
        let red = euler_reduce(&pert, Hemisphere::Upper, ReductionConvention::ChainRule).unwrap();
        let s = &red.system;
        // P = -(y1/k13)/(1/2) = -2 k13 y1 / (3/4); Q = (y1/k13)/k13 = 4/3 y1.
        assert_eq!(s.p()[0], planar("-8/3*k13*y1", s));
        assert_eq!(s.q()[0], planar("4/3*y1", s));
        let printed = euler_reduce(&pert, Hemisphere::Upper, ReductionConvention::AsPrinted).unwrap();
        assert_eq!(printed.system.p()[0], planar("y1", &printed.system));
        let lower = euler_reduce(&pert, Hemisphere::Lower, ReductionConvention::AsPrinted).unwrap();
        assert_eq!(lower.system.p()[0], planar("-y1", &lower.system));
    }

    #[test]
    fn euler_constant_part_is_flagged() {
        let z = euler("0");
        let pert = EulerPerturbation::new(mu124(), euler("1"), z.clone(), z, Rat::one()).unwrap();
        let red = euler_reduce(&pert, Hemisphere::Upper, ReductionConvention::AsPrinted).unwrap();
        assert!(red.flags.constant_part);
    }

    #[test]
    fn pushforward_of_zero_fields() {
        let chart = MBChart { leaf: 1.0 };
        let x = chart.lift([0.3, 0.4]).unwrap();
        let rep = pushforward_check(|_| [0.0; 3], &chart, |_| [0.0; 2], &[x, [0.0, 1.0, 1.0]]);
        assert_eq!(rep.max_residual, 0.0);
        assert_eq!(rep.checked, 1);
        assert_eq!(rep.rejected.len(), 1);
    }

    #[test]
    fn lifted_points_are_on_the_leaf() {
        let chart = EulerChart {
            kappa13: 0.75f64.sqrt(),
            kappa23: 0.5,
            c2: 1.0,
            hemisphere: Hemisphere::Lower,
        };
        let x = chart.lift([0.2, -0.1]).unwrap();
        assert!(x[2] < 0.0);
        let cp = chart.chart(x).unwrap();
        assert!((cp.y[0] - 0.2).abs() < 1e-15 && (cp.y[1] + 0.1).abs() < 1e-15);
        assert!(chart.lift([2.0, 0.0]).is_none());
    }

    #[test]
    fn convention_names_round_trip() {
        for c in [ReductionConvention::ChainRule, ReductionConvention::AsPrinted] {
            assert_eq!(ReductionConvention::from_name(c.name()).unwrap(), c);
        }
        assert_eq!(Hemisphere::from_symbol("-").unwrap(), Hemisphere::Lower);
    }
}
