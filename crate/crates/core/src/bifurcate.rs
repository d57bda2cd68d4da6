//! From averaged functions to limit-cycle counts: exact positive-root
//! isolation, the decision tree for the quadratic Bautin family, branch
//! counting at simple and double zeros, and the fold normal form.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::averaging::{AveragedSpectrum, BAUTIN_PARAMS};
use crate::error::{Error, Result};
use crate::poly::{Interval, MPoly, UPoly, VarSet};
use crate::rat::Rat;

/// Isolating intervals are refined below this width (2^-40).
pub fn default_isolation_width() -> Rat {
    Rat::from_bigints(1.into(), num_bigint::BigInt::from(1u64 << 40))
}

/// One distinct positive root: it is the only root of `factor` in `(lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PositiveRoot {
    pub lo: Rat,
    pub hi: Rat,
    pub multiplicity: usize,
    /// Monic square-free factor of the polynomial vanishing at the root.
    pub factor: UPoly,
}

impl PositiveRoot {
    pub fn is_simple(&self) -> bool {
        self.multiplicity == 1
    }

    pub fn approx(&self) -> f64 {
        0.5 * (self.lo.to_f64() + self.hi.to_f64())
    }

    pub fn enclosure(&self) -> Interval {
        Interval::new(Interval::from_rat(&self.lo).lo, Interval::from_rat(&self.hi).hi)
    }

    /// Halves the interval once, keeping the root inside.
    pub fn bisect(&mut self) {
        let mid = (&self.lo + &self.hi) / Rat::from_int(2);
        if self.factor.count_roots(&self.lo, &mid) == 1 {
            self.hi = mid;
        } else {
            self.lo = mid;
        }
    }

    pub fn refine(&mut self, width: &Rat) {
        while &self.hi - &self.lo > *width {
            self.bisect();
        }
    }

    /// Exact sign of `g` at the root.
    pub fn sign_of(&self, g: &UPoly) -> i32 {
        if g.is_zero() {
            return 0;
        }
        let common = self.factor.gcd(g);
        if common.degree().unwrap_or(0) > 0 && common.count_roots(&self.lo, &self.hi) == 1 {
            return 0;
        }
        let mut r = self.clone();
        while g.count_roots(&r.lo, &r.hi) > 0 {
            r.bisect();
        }
        g.sign_at(&r.hi)
    }
}

/// Distinct roots in `(0, inf)` of a univariate polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct RootReport {
    pub poly: UPoly,
    pub roots: Vec<PositiveRoot>,
}

impl RootReport {
    pub fn count(&self) -> usize {
        self.roots.len()
    }

    pub fn approximations(&self) -> Vec<f64> {
        self.roots.iter().map(PositiveRoot::approx).collect()
    }
}

/// Positive roots of a polynomial in at most one variable.
pub fn positive_roots(f: &MPoly) -> Result<RootReport> {
    let support = f.support();
    match support.as_slice() {
        [] if f.is_zero() => Err(Error::usage("positive_roots of the zero polynomial")),
        [] => Ok(RootReport {
            poly: UPoly::new(alloc::vec![f.as_constant().unwrap_or_default()]),
            roots: Vec::new(),
        }),
        [v] => positive_roots_upoly(&UPoly::from_mpoly(f, *v)?),
        _ => Err(Error::usage(format!(
            "positive_roots needs a univariate polynomial, got `{f}`"
        ))),
    }
}

pub fn positive_roots_upoly(f: &UPoly) -> Result<RootReport> {
    positive_roots_with_width(f, &default_isolation_width())
}

pub fn positive_roots_with_width(f: &UPoly, width: &Rat) -> Result<RootReport> {
    if f.is_zero() {
        return Err(Error::usage("positive_roots of the zero polynomial"));
    }
    let mut roots = Vec::new();
    for (factor, multiplicity) in f.square_free_decomposition() {
        for (lo, hi) in factor.isolate_roots_above(&Rat::zero(), width) {
            roots.push(PositiveRoot {
                lo,
                hi,
                multiplicity,
                factor: factor.clone(),
            });
        }
    }
    roots.sort_by(|a, b| a.lo.cmp_value(&b.lo));
    Ok(RootReport { poly: f.clone(), roots })
}

/// Enclosure of a polynomial whose variables are all known positive
/// constants: `pi` and variables carrying a square-root rule.
pub fn constant_enclosure(c: &MPoly) -> Result<Interval> {
    Ok(c.eval_interval(&constant_point(c, None)?))
}

/// Interval point for `c`: known constants, plus `z` as given.
fn constant_point(c: &MPoly, z: Option<(usize, Interval)>) -> Result<Vec<Interval>> {
    let vars = c.vars();
    let mut point = Vec::with_capacity(vars.len());
    let support = c.support();
    for i in 0..vars.len() {
        let iv = if let Some((_, iz)) = z.filter(|(zi, _)| *zi == i) {
            iz
        } else if vars.name(i) == "pi" {
            Interval::new(core::f64::consts::PI.next_down(), core::f64::consts::PI.next_up())
        } else if let Some(q) = vars.sqrt_rule(i) {
            let s = libm::sqrt(q.to_f64());
            Interval::new(s.next_down().next_down(), s.next_up().next_up())
        } else if support.contains(&i) {
            return Err(Error::usage(format!(
                "variable `{}` is not a known constant",
                vars.name(i)
            )));
        } else {
            Interval::point(0.0)
        };
        point.push(iv);
    }
    Ok(point)
}

/// Certified sign and approximate value of `f` at the root, for `f` whose
/// other variables are known constants. Refines a copy of the root until
/// the interval value excludes zero.
fn sign_at_root(f: &MPoly, z: usize, root: &PositiveRoot) -> Result<(i32, f64)> {
    if let Ok((c, u)) = split_constant_factor(f, z) {
        let s = root.sign_of(&u) * constant_sign(&c)?;
        return Ok((s, u.eval_f64(root.approx()) * constant_enclosure(&c)?.mid()));
    }
    let mut r = root.clone();
    for _ in 0..160 {
        let iv = f.eval_interval(&constant_point(f, Some((z, r.enclosure())))?);
        if let Some(s) = iv.certain_sign() {
            return Ok((s, iv.mid()));
        }
        r.bisect();
    }
    Err(Error::numeric(format!(
        "cannot certify the sign of `{f}` at the root near {}",
        root.approx()
    )))
}

pub fn constant_sign(c: &MPoly) -> Result<i32> {
    if c.is_zero() {
        return Ok(0);
    }
    constant_enclosure(c)?
        .certain_sign()
        .ok_or_else(|| Error::numeric(format!("cannot certify the sign of `{c}`")))
}

/// Writes `f = c * u(z)` with `c` free of `z` and `u` rational.
///
/// Fails when the z-coefficients are not all rational multiples of one
/// another, i.e. when `f` does not factor this way.
pub fn split_constant_factor(f: &MPoly, z: usize) -> Result<(MPoly, UPoly)> {
    if f.is_zero() {
        return Ok((MPoly::one(f.vars()), UPoly::zero()));
    }
    let coeffs = f.univariate_coeffs(z);
    let lead = coeffs
        .iter()
        .rev()
        .find(|c| !c.is_zero())
        .cloned()
        .unwrap_or_else(|| MPoly::one(f.vars()));
    let mut u = Vec::with_capacity(coeffs.len());
    for c in &coeffs {
        if c.is_zero() {
            u.push(Rat::zero());
            continue;
        }
        let r = c
            .proportional(&lead)
            .ok_or_else(|| Error::precondition(format!("`{f}` is not a constant multiple of a polynomial in z")))?;
        u.push(r);
    }
    Ok((lead, UPoly::new(u)))
}

/// Which sign of the perturbation parameter a branch count applies to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EpsSide {
    Positive,
    Negative,
    Both,
    Neither,
}

impl EpsSide {
    pub fn name(self) -> &'static str {
        match self {
            EpsSide::Positive => "eps>0",
            EpsSide::Negative => "eps<0",
            EpsSide::Both => "both",
            EpsSide::Neither => "none",
        }
    }

    pub fn includes(self, eps_sign: i32) -> bool {
        match self {
            EpsSide::Both => true,
            EpsSide::Neither => false,
            EpsSide::Positive => eps_sign > 0,
            EpsSide::Negative => eps_sign < 0,
        }
    }
}

/// Local model `delta1 * z^2 + delta2 * eps` of a double zero.
#[derive(Clone, Debug, PartialEq)]
pub struct FoldAnalysis {
    pub delta1: i32,
    pub delta2: i32,
    /// Sign of eps for which two branches exist; none on the other side.
    pub two_branches: EpsSide,
    pub root: PositiveRoot,
    /// `f_l''(z0) / 2`, floating.
    pub half_curvature: f64,
    /// `f_{l+1}(z0)`, floating.
    pub next_value: f64,
}

impl FoldAnalysis {
    /// Leading-order zeros `z0 +- sqrt(-eps f_{l+1}(z0) / (f_l''(z0)/2))`.
    pub fn predicted_zeros(&self, eps: f64) -> Vec<f64> {
        let z0 = self.root.approx();
        let d = -eps * self.next_value / self.half_curvature;
        if d <= 0.0 {
            return Vec::new();
        }
        let s = libm::sqrt(d);
        alloc::vec![z0 - s, z0 + s]
    }

    pub fn branches(&self, eps_sign: i32) -> u32 {
        if self.two_branches.includes(eps_sign) {
            2
        } else {
            0
        }
    }
}

/// Zeros of the normal form `delta1 z^2 + delta2 eps`.
pub fn normal_form_zeros(delta1: i32, delta2: i32, eps: f64) -> Vec<f64> {
    let d = -(delta2 as f64) * eps / delta1 as f64;
    if d < 0.0 {
        Vec::new()
    } else if d == 0.0 {
        alloc::vec![0.0]
    } else {
        let s = libm::sqrt(d);
        alloc::vec![-s, s]
    }
}

/// Certifies a double zero of `f_ell` at `root` and reads off the fold signs.
pub fn fold_analysis(f_ell: &MPoly, f_next: &MPoly, z: usize, root: &PositiveRoot) -> Result<FoldAnalysis> {
    let (c_ell, u_ell) = split_constant_factor(f_ell, z)?;
    let d1 = u_ell.derivative();
    let d2 = d1.derivative();
    if root.sign_of(&u_ell) != 0 || root.sign_of(&d1) != 0 {
        return Err(Error::precondition(
            "fold hypotheses fail: z0 is not a multiple zero of f_l",
        ));
    }
    let s2 = root.sign_of(&d2);
    if s2 == 0 {
        return Err(Error::precondition("fold hypotheses fail: z0 has multiplicity above 2"));
    }
    let (sn, next_value) = if f_next.is_zero() {
        (0, 0.0)
    } else {
        sign_at_root(f_next, z, root)?
    };
    if sn == 0 {
        return Err(Error::precondition("fold hypotheses fail: f_{l+1}(z0) = 0"));
    }
    let delta1 = s2 * constant_sign(&c_ell)?;
    let delta2 = sn;
    let two_branches = if delta1 * delta2 < 0 {
        EpsSide::Positive
    } else {
        EpsSide::Negative
    };
    let half_curvature = 0.5 * d2.eval_f64(root.approx()) * constant_enclosure(&c_ell)?.mid();
    Ok(FoldAnalysis {
        delta1,
        delta2,
        two_branches,
        root: root.clone(),
        half_curvature,
        next_value,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchMethod {
    Simple,
    Fold,
    BoundOnly,
}

impl BranchMethod {
    pub fn name(self) -> &'static str {
        match self {
            BranchMethod::Simple => "simple",
            BranchMethod::Fold => "fold",
            BranchMethod::BoundOnly => "bound-only",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootBranch {
    pub root: PositiveRoot,
    pub method: BranchMethod,
    /// Exact count for `Simple` and `Fold`, an upper bound for `BoundOnly`.
    pub count: u32,
    pub side: EpsSide,
    pub fold: Option<FoldAnalysis>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BranchVerdict {
    pub ell: usize,
    pub f_ell: MPoly,
    pub roots: Vec<RootBranch>,
}

impl BranchVerdict {
    /// Total branches for the given sign of eps and whether it is exact.
    pub fn total(&self, eps_sign: i32) -> (u32, bool) {
        let mut n = 0;
        let mut exact = true;
        for r in &self.roots {
            if r.method == BranchMethod::BoundOnly {
                exact = false;
                n += r.count;
            } else if r.side.includes(eps_sign) {
                n += r.count;
            }
        }
        (n, exact)
    }
}

/// Branch count for the spectrum specialised at the named parameter values.
pub fn branch_count(spec: &AveragedSpectrum, lambda: &BTreeMap<String, Rat>) -> Result<BranchVerdict> {
    branch_count_functions(spec.vars(), spec.functions(), lambda)
}

/// Same as [`branch_count`] for any list `f_1, f_2, ..` (e.g. hatted ones).
pub fn branch_count_functions(vars: &VarSet, fs: &[MPoly], lambda: &BTreeMap<String, Rat>) -> Result<BranchVerdict> {
    let z = vars.require("z")?;
    let mut idx = Vec::new();
    for (name, value) in lambda {
        idx.push((vars.require(name)?, value.clone()));
    }
    let special: Vec<MPoly> = fs
        .iter()
        .map(|f| idx.iter().fold(f.clone(), |acc, (i, v)| acc.substitute_value(*i, v)))
        .collect();
    let ell = special.iter().position(|f| !f.is_zero()).ok_or_else(|| {
        Error::precondition(format!(
            "every averaged function up to order {} vanishes at this parameter point; compute higher orders or check the center conditions",
            fs.len()
        ))
    })?;
    let f_ell = special[ell].clone();
    let (_, u) = split_constant_factor(&f_ell, z)?;
    let report = positive_roots_upoly(&u)?;
    let mut roots = Vec::new();
    for root in report.roots {
        if root.is_simple() {
            roots.push(RootBranch {
                root,
                method: BranchMethod::Simple,
                count: 1,
                side: EpsSide::Both,
                fold: None,
                note: None,
            });
            continue;
        }
        let bound = root.multiplicity as u32;
        let attempt = if root.multiplicity == 2 && ell + 1 < special.len() {
            fold_analysis(&f_ell, &special[ell + 1], z, &root)
        } else {
            Err(Error::precondition("no next averaged function for the fold analysis"))
        };
        match attempt {
            Ok(fold) => roots.push(RootBranch {
                root,
                method: BranchMethod::Fold,
                count: 2,
                side: fold.two_branches,
                fold: Some(fold),
                note: None,
            }),
            Err(e) => roots.push(RootBranch {
                root,
                method: BranchMethod::BoundOnly,
                count: bound,
                side: EpsSide::Both,
                fold: None,
                note: Some(e.to_string()),
            }),
        }
    }
    Ok(BranchVerdict {
        ell: ell + 1,
        f_ell,
        roots,
    })
}

/// The polynomials of the quadratic classification, as printed with the
/// result they come from. Names use `h` for a hat.
pub const QUADRATIC_XI: [(&str, &str); 7] = [
    ("xi20", "a50 (a30 - a60)"),
    ("xih30", "a31 a50 + a30 a51 - a51 a60 - a50 a61"),
    ("xih40", "a51 (a31 - a61)"),
    ("xih42", "-a20 a40 (5 a30 + a40 - 5 a60) (a30 - a60)"),
    (
        "xih51",
        "5 a21 a30^2 a40 + 10 a20 a30 a31 a40 + a21 a30 a40^2 + a20 a31 a40^2 + 5 a20 a30^2 a41 \
         + 2 a20 a30 a40 a41 - 10 a21 a30 a40 a60 - 10 a20 a31 a40 a60 - a21 a40^2 a60 \
         - 10 a20 a30 a41 a60 - 2 a20 a40 a41 a60 + 5 a21 a40 a60^2 + 5 a20 a41 a60^2 \
         - 10 a20 a30 a40 a61 - a20 a40^2 a61 + 10 a20 a40 a60 a61",
    ),
    (
        "xih61",
        "-10 a21 a30 a31 a40 - 5 a20 a31^2 a40 - a21 a31 a40^2 - 5 a21 a30^2 a41 - 10 a20 a30 a31 a41 \
         - 2 a21 a30 a40 a41 - 2 a20 a31 a40 a41 - a20 a30 a41^2 + 10 a21 a31 a40 a60 \
         + 10 a21 a30 a41 a60 + 10 a20 a31 a41 a60 + 2 a21 a40 a41 a60 + a20 a41^2 a60 \
         - 5 a21 a41 a60^2 + 10 a21 a30 a40 a61 + 10 a20 a31 a40 a61 + a21 a40^2 a61 \
         + 10 a20 a30 a41 a61 + 2 a20 a40 a41 a61 - 10 a21 a40 a60 a61 - 10 a20 a41 a60 a61 \
         - 5 a20 a40 a61^2",
    ),
    ("xih63", "a20 a40^2 (a30 - a60) (5 a20^2 + a40 a60 + 5 a60^2)"),
];

/// Where each classification polynomial sits: averaging order and z power.
pub const QUADRATIC_XI_POSITIONS: [(usize, u32); 7] = [(2, 3), (3, 3), (4, 3), (4, 5), (5, 5), (6, 5), (6, 7)];

pub fn bautin_param_vars() -> VarSet {
    VarSet::new(&BAUTIN_PARAMS).expect("static names")
}

/// The seven classification polynomials over the ten Bautin parameters.
pub fn quadratic_xi() -> Vec<(&'static str, MPoly)> {
    let vars = bautin_param_vars();
    QUADRATIC_XI
        .iter()
        .map(|(n, t)| (*n, MPoly::parse(t, &vars).expect("fixture parses")))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadraticCase {
    I,
    II,
    III,
    IV,
    V,
    VI,
    /// `xih63 = 0` but `xih61 != 0`: the sixth function is `z^5 xih61`.
    VIDegenerate,
    Undetermined,
}

impl QuadraticCase {
    pub fn label(self) -> &'static str {
        match self {
            QuadraticCase::I => "i",
            QuadraticCase::II => "ii",
            QuadraticCase::III => "iii",
            QuadraticCase::IV => "iv",
            QuadraticCase::V => "v",
            QuadraticCase::VI => "vi",
            QuadraticCase::VIDegenerate => "vi-degenerate",
            QuadraticCase::Undetermined => "undetermined",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticVerdict {
    pub case: QuadraticCase,
    pub n: Option<u32>,
    /// Values of the classification polynomials that were evaluated.
    pub witnesses: Vec<(&'static str, Rat)>,
    /// `s1` or `s2` when the case uses one.
    pub ratio: Option<(&'static str, Rat)>,
    pub warnings: Vec<String>,
    /// For undetermined verdicts, the names of the vanishing polynomials.
    pub reasons: Vec<String>,
}

/// `A_i(ε) = a_{i0} + a_{i1}ε` for `i = 2..=6`, as `[a_{i0}, a_{i1}]`.
fn bautin_coefficient(lambda: &[Rat; 10], i: usize) -> [Rat; 2] {
    let k = 2 * (i - 2);
    [lambda[k].clone(), lambda[k + 1].clone()]
}

/// Which of the four classical center conditions of the quadratic Bautin
/// family hold identically in `ε` at `lambda`, as labels `'a'..='d'`:
/// (a) `A₄ = A₅ ≡ 0`; (b) `A₃ ≡ A₆`;
/// (c) `A₅ = A₄ + 5(A₃ − A₆) = A₃A₆ − 2A₆² − A₂² ≡ 0`; (d) `A₂ = A₅ ≡ 0`.
pub fn center_conditions(lambda: &[Rat; 10]) -> Vec<char> {
    let a = |i| bautin_coefficient(lambda, i);
    let zero = |p: &[Rat]| p.iter().all(Rat::is_zero);
    let lin = |x: [Rat; 2], y: [Rat; 2], c: i64| -> [Rat; 2] {
        let c = Rat::from_int(c);
        [&x[0] + &(&c * &y[0]), &x[1] + &(&c * &y[1])]
    };
    let mul = |x: &[Rat; 2], y: &[Rat; 2]| -> [Rat; 3] {
        [&x[0] * &y[0], &(&x[0] * &y[1]) + &(&x[1] * &y[0]), &x[1] * &y[1]]
    };
    let (a2, a3, a4, a5, a6) = (a(2), a(3), a(4), a(5), a(6));
    let mut out = Vec::new();
    if zero(&a4) && zero(&a5) {
        out.push('a');
    }
    if zero(&lin(a3.clone(), a6.clone(), -1)) {
        out.push('b');
    }
    let diff = lin(a3.clone(), a6.clone(), -1);
    let c2 = lin(a4.clone(), diff, 5);
    let (p36, p66, p22) = (mul(&a3, &a6), mul(&a6, &a6), mul(&a2, &a2));
    let c3: Vec<Rat> = (0..3)
        .map(|k| &(&p36[k] - &(&Rat::from_int(2) * &p66[k])) - &p22[k])
        .collect();
    if zero(&a5) && zero(&c2) && zero(&c3) {
        out.push('c');
    }
    if zero(&a2) && zero(&a5) {
        out.push('d');
    }
    out
}

/// A parameter point on which every classification polynomial vanishes but
/// none of the center conditions holds: `A₅ ≡ 0`, `A₄ = −5(A₃ − A₆)` and
/// `A₃A₆ − 2A₆² − A₂²` vanishing at `ε = 0` only.
pub fn non_center_in_variety() -> [Rat; 10] {
    [1, 0, 3, 1, -10, -5, 0, 0, 1, 0].map(Rat::from_int)
}

/// Walks the decision tree for the quadratic Bautin family at `lambda`
/// (ordered as [`BAUTIN_PARAMS`]).
pub fn classify_quadratic(lambda: &[Rat; 10]) -> QuadraticVerdict {
    let values: Vec<Rat> = quadratic_xi()
        .iter()
        .map(|(_, p)| p.eval(lambda).expect("ten parameters"))
        .collect();
    let values: [Rat; 7] = values.try_into().expect("seven polynomials");
    classify_values(&values)
}

/// The decision tree on the values of the seven classification
/// polynomials, in the order of [`QUADRATIC_XI`].
pub fn classify_values(values: &[Rat; 7]) -> QuadraticVerdict {
    let [x20, x30, x40, x42, x51, x61, x63] = values;
    let mut v = QuadraticVerdict {
        case: QuadraticCase::Undetermined,
        n: None,
        witnesses: Vec::new(),
        ratio: None,
        warnings: Vec::new(),
        reasons: Vec::new(),
    };
    let seen = |v: &mut QuadraticVerdict, idx: &[usize]| {
        for &i in idx {
            v.witnesses.push((QUADRATIC_XI[i].0, values[i].clone()));
        }
    };
    seen(&mut v, &[0]);
    if !x20.is_zero() {
        return v.decided(QuadraticCase::I, 0);
    }
    seen(&mut v, &[1]);
    if !x30.is_zero() {
        return v.decided(QuadraticCase::II, 0);
    }
    seen(&mut v, &[2, 3]);
    if !x42.is_zero() {
        let s1 = x40 / x42;
        return v.with_ratio("s1", s1, QuadraticCase::IV);
    }
    if !x40.is_zero() {
        return v.decided(QuadraticCase::III, 0);
    }
    seen(&mut v, &[4]);
    if !x51.is_zero() {
        return v.decided(QuadraticCase::V, 0);
    }
    seen(&mut v, &[5, 6]);
    if !x63.is_zero() {
        let s2 = x61 / x63;
        return v.with_ratio("s2", s2, QuadraticCase::VI);
    }
    if !x61.is_zero() {
        return v.decided(QuadraticCase::VIDegenerate, 0);
    }
    v.reasons = QUADRATIC_XI.iter().map(|(n, _)| n.to_string()).collect();
    v.reasons
        .push("parameter point lies in the variety of the sixth chain ideal".to_string());
    v
}

impl QuadraticVerdict {
    fn decided(mut self, case: QuadraticCase, n: u32) -> Self {
        self.case = case;
        self.n = Some(n);
        self
    }

    /// `N = 1` iff the ratio is negative; zero counts as `N = 0`.
    fn with_ratio(mut self, name: &'static str, s: Rat, case: QuadraticCase) -> Self {
        let n = if s.is_negative() { 1 } else { 0 };
        if s.is_zero() {
            self.warnings
                .push(format!("{name} = 0: non-generic configuration, counted as N = 0"));
        }
        self.ratio = Some((name, s));
        self.decided(case, n)
    }
}
