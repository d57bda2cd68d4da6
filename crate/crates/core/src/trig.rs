//! Exact trigonometric polynomials in `θ`, optionally with secular powers
//! of `θ`.
//!
//! [`FourierPoly`] is `c_0 + Σ_k (a_k cos kθ + b_k sin kθ)` with polynomial
//! coefficients. [`SecularPoly`] is `Σ_n θ^n F_n(θ)` with Fourier
//! coefficients; it is closed under products and under `∫_0^θ`, which is
//! what the averaging recursion needs.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashMap;

use crate::error::{Error, Result};
use crate::poly::{reduce_by_rules, MPoly, TermAccumulator, VarSet};
use crate::rat::Rat;

/// One element of the Fourier basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Harmonic {
    Const,
    Cos(u32),
    Sin(u32),
}

/// A trigonometric polynomial with [`MPoly`] coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct FourierPoly {
    vars: VarSet,
    const_term: MPoly,
    cos_terms: BTreeMap<u32, MPoly>,
    sin_terms: BTreeMap<u32, MPoly>,
}

/// Output collector for products: every contribution is stored doubled so
/// that the halving of product-to-sum formulas happens once at the end.
struct Collector {
    rules: bool,
    map: HashMap<Harmonic, TermAccumulator>,
}

impl Collector {
    fn new(rules: bool) -> Self {
        Collector {
            rules,
            map: HashMap::new(),
        }
    }

    /// Adds `sign * a * b` to `targets`, each entry `(harmonic, weight)`.
    fn add_product(&mut self, a: &MPoly, b: &MPoly, targets: &[(Harmonic, i64)]) {
        let vars = a.vars();
        let weights: Vec<(Harmonic, Rat)> = targets
            .iter()
            .filter(|(h, w)| *w != 0 && *h != Harmonic::Sin(0))
            .map(|&(h, w)| (h, Rat::from_int(w)))
            .collect();
        if weights.is_empty() {
            return;
        }
        for (h, _) in &weights {
            self.map
                .entry(*h)
                .or_insert_with(|| TermAccumulator::with_capacity(a.len() * b.len()));
        }
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let mut m = ma.mul(mb);
                let mut c = ca * cb;
                if self.rules {
                    (m, c) = reduce_by_rules(vars, m, c);
                }
                let last = weights.len() - 1;
                for (k, (h, w)) in weights.iter().enumerate() {
                    let acc = self.map.get_mut(h).expect("accumulator");
                    let v = if w.is_one() { c.clone() } else { &c * w };
                    if k == last {
                        acc.add(m, v);
                        break;
                    }
                    acc.add(m.clone(), v);
                }
            }
        }
    }

    fn finish(self, vars: &VarSet) -> FourierPoly {
        let half = Rat::new(1, 2);
        let mut out = FourierPoly::zero(vars);
        for (h, acc) in self.map {
            let p = acc.into_poly(vars).scale(&half);
            out.set(h, p);
        }
        out
    }
}

/// Folds `cos(k)` / `sin(k)` with a signed `k` into the basis.
fn signed(h_cos: bool, k: i64, w: i64) -> (Harmonic, i64) {
    if k == 0 {
        return if h_cos {
            (Harmonic::Const, w)
        } else {
            (Harmonic::Sin(0), 0)
        };
    }
    let a = k.unsigned_abs() as u32;
    match (h_cos, k < 0) {
        (true, _) => (Harmonic::Cos(a), w),
        (false, false) => (Harmonic::Sin(a), w),
        (false, true) => (Harmonic::Sin(a), -w),
    }
}

/// Product-to-sum targets (doubled weights) for `x * y`.
fn product_targets(x: Harmonic, y: Harmonic) -> [(Harmonic, i64); 2] {
    use Harmonic::*;
    match (x, y) {
        (Const, Const) => [(Const, 2), (Sin(0), 0)],
        (Const, h) | (h, Const) => [(h, 2), (Sin(0), 0)],
        (Cos(a), Cos(b)) => {
            let (a, b) = (a as i64, b as i64);
            [signed(true, a - b, 1), signed(true, a + b, 1)]
        }
        (Sin(a), Sin(b)) => {
            let (a, b) = (a as i64, b as i64);
            [signed(true, a - b, 1), signed(true, a + b, -1)]
        }
        (Sin(a), Cos(b)) => {
            let (a, b) = (a as i64, b as i64);
            [signed(false, a + b, 1), signed(false, a - b, 1)]
        }
        (Cos(a), Sin(b)) => {
            let (a, b) = (a as i64, b as i64);
            [signed(false, a + b, 1), signed(false, b - a, 1)]
        }
    }
}

impl FourierPoly {
    pub fn zero(vars: &VarSet) -> Self {
        FourierPoly {
            vars: vars.clone(),
            const_term: MPoly::zero(vars),
            cos_terms: BTreeMap::new(),
            sin_terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: MPoly) -> Self {
        let mut f = FourierPoly::zero(c.vars());
        f.const_term = c;
        f
    }

    /// `c * h(θ)` for a single basis element.
    pub fn term(h: Harmonic, c: MPoly) -> Self {
        let mut f = FourierPoly::zero(c.vars());
        f.set(h, c);
        f
    }

    pub fn cos(k: u32, c: MPoly) -> Self {
        Self::term(if k == 0 { Harmonic::Const } else { Harmonic::Cos(k) }, c)
    }

    pub fn sin(k: u32, c: MPoly) -> Self {
        if k == 0 {
            return FourierPoly::zero(c.vars());
        }
        Self::term(Harmonic::Sin(k), c)
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn const_term(&self) -> &MPoly {
        &self.const_term
    }

    pub fn cos_terms(&self) -> &BTreeMap<u32, MPoly> {
        &self.cos_terms
    }

    pub fn sin_terms(&self) -> &BTreeMap<u32, MPoly> {
        &self.sin_terms
    }

    pub fn is_zero(&self) -> bool {
        self.const_term.is_zero() && self.cos_terms.is_empty() && self.sin_terms.is_empty()
    }

    /// Coefficient of one basis element (zero if absent).
    pub fn get(&self, h: Harmonic) -> MPoly {
        match h {
            Harmonic::Const => self.const_term.clone(),
            Harmonic::Cos(k) => self
                .cos_terms
                .get(&k)
                .cloned()
                .unwrap_or_else(|| MPoly::zero(&self.vars)),
            Harmonic::Sin(k) => self
                .sin_terms
                .get(&k)
                .cloned()
                .unwrap_or_else(|| MPoly::zero(&self.vars)),
        }
    }

    /// All nonzero `(harmonic, coefficient)` pairs in basis order.
    pub fn harmonics(&self) -> Vec<(Harmonic, &MPoly)> {
        let mut out = Vec::new();
        if !self.const_term.is_zero() {
            out.push((Harmonic::Const, &self.const_term));
        }
        out.extend(self.cos_terms.iter().map(|(k, c)| (Harmonic::Cos(*k), c)));
        out.extend(self.sin_terms.iter().map(|(k, c)| (Harmonic::Sin(*k), c)));
        out
    }

    fn set(&mut self, h: Harmonic, c: MPoly) {
        match h {
            Harmonic::Const => self.const_term = c,
            Harmonic::Cos(0) => self.const_term = c,
            Harmonic::Cos(k) => {
                if c.is_zero() {
                    self.cos_terms.remove(&k);
                } else {
                    self.cos_terms.insert(k, c);
                }
            }
            Harmonic::Sin(0) => {}
            Harmonic::Sin(k) => {
                if c.is_zero() {
                    self.sin_terms.remove(&k);
                } else {
                    self.sin_terms.insert(k, c);
                }
            }
        }
    }

    fn check(&self, other: &FourierPoly) -> Result<()> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::usage("Fourier polynomials over different variable sets"))
        }
    }

    pub fn try_add(&self, other: &FourierPoly) -> Result<FourierPoly> {
        self.check(other)?;
        Ok(self.combine(other, false))
    }

    pub fn try_sub(&self, other: &FourierPoly) -> Result<FourierPoly> {
        self.check(other)?;
        Ok(self.combine(other, true))
    }

    fn combine(&self, other: &FourierPoly, negate: bool) -> FourierPoly {
        let mut out = self.clone();
        for (h, c) in other.harmonics() {
            let cur = out.get(h);
            let next = if negate { &cur - c } else { &cur + c };
            out.set(h, next);
        }
        out
    }

    pub fn neg(&self) -> FourierPoly {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, c: &Rat) -> FourierPoly {
        self.map_coeffs(|p| p.scale(c))
    }

    /// Multiplies every coefficient by a polynomial.
    pub fn mul_poly(&self, p: &MPoly) -> FourierPoly {
        self.map_coeffs(|c| c * p)
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, mut f: impl FnMut(&MPoly) -> MPoly) -> FourierPoly {
        let mut out = FourierPoly::zero(&self.vars);
        for (h, c) in self.harmonics() {
            out.set(h, f(c));
        }
        out
    }

    pub fn try_mul(&self, other: &FourierPoly) -> Result<FourierPoly> {
        self.check(other)?;
        Ok(self.product(other))
    }

    fn product(&self, other: &FourierPoly) -> FourierPoly {
        let mut col = Collector::new(self.vars.has_rules());
        for (ha, a) in self.harmonics() {
            for (hb, b) in other.harmonics() {
                col.add_product(a, b, &product_targets(ha, hb));
            }
        }
        col.finish(&self.vars)
    }

    /// Partial derivative of every coefficient in variable `i`.
    pub fn diff_coeffs(&self, i: usize) -> FourierPoly {
        self.map_coeffs(|c| c.diff(i))
    }

    /// Derivative in `θ`.
    pub fn diff_theta(&self) -> FourierPoly {
        let mut out = FourierPoly::zero(&self.vars);
        for (k, c) in &self.cos_terms {
            out.set(Harmonic::Sin(*k), c.scale(&Rat::from_int(-(*k as i64))));
        }
        for (k, c) in &self.sin_terms {
            out.set(Harmonic::Cos(*k), c.scale(&Rat::from_int(*k as i64)));
        }
        out
    }

    /// `∫_0^{2π} f dθ = 2π * const_term`, with `π` the variable `pi`.
    pub fn integrate_0_2pi(&self) -> Result<MPoly> {
        let pi = MPoly::var(&self.vars, "pi")?;
        Ok(&self.const_term * &pi.scale(&Rat::from_int(2)))
    }

    /// Antiderivative split as `(periodic part, secular coefficient)`: the
    /// antiderivative is `periodic(θ) + secular * θ`.
    pub fn antiderivative(&self) -> (FourierPoly, MPoly) {
        let mut periodic = FourierPoly::zero(&self.vars);
        for (k, c) in &self.cos_terms {
            periodic.set(Harmonic::Sin(*k), c.scale(&Rat::new(1, *k as i64)));
        }
        for (k, c) in &self.sin_terms {
            periodic.set(Harmonic::Cos(*k), c.scale(&Rat::new(-1, *k as i64)));
        }
        (periodic, self.const_term.clone())
    }

    /// Value at `θ = 0` (sum of constant and cosine coefficients).
    pub fn at_zero(&self) -> MPoly {
        let mut acc = self.const_term.clone();
        for c in self.cos_terms.values() {
            acc = &acc + c;
        }
        acc
    }

    pub fn eval_f64(&self, theta: f64, point: &[f64]) -> f64 {
        let mut s = self.const_term.eval_f64(point);
        for (k, c) in &self.cos_terms {
            s += c.eval_f64(point) * libm::cos(*k as f64 * theta);
        }
        for (k, c) in &self.sin_terms {
            s += c.eval_f64(point) * libm::sin(*k as f64 * theta);
        }
        s
    }

    /// Debug dump: one `const:<poly>`, `k:cos:<poly>` or `k:sin:<poly>` line
    /// per nonzero coefficient.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (h, c) in self.harmonics() {
            let line = match h {
                Harmonic::Const => alloc::format!("const:{c}\n"),
                Harmonic::Cos(k) => alloc::format!("{k}:cos:{c}\n"),
                Harmonic::Sin(k) => alloc::format!("{k}:sin:{c}\n"),
            };
            out.push_str(&line);
        }
        out
    }

    /// Total number of polynomial terms across all coefficients.
    pub fn size(&self) -> usize {
        self.harmonics().iter().map(|(_, c)| c.len()).sum()
    }
}

impl fmt::Debug for FourierPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

/// `cos^a θ * sin^b θ` in the Fourier basis, with constant coefficients
/// over `vars`.
pub fn trig_monomial(vars: &VarSet, a: u32, b: u32) -> FourierPoly {
    let one = MPoly::one(vars);
    let c = FourierPoly::cos(1, one.clone());
    let s = FourierPoly::sin(1, one.clone());
    let mut out = FourierPoly::constant(one);
    for _ in 0..a {
        out = out.product(&c);
    }
    for _ in 0..b {
        out = out.product(&s);
    }
    out
}

/// `Σ_n θ^n F_n(θ)`; entry `n` of the vector multiplies `θ^n`. Trailing zero
/// entries are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct SecularPoly {
    vars: VarSet,
    parts: Vec<FourierPoly>,
}

impl SecularPoly {
    pub fn zero(vars: &VarSet) -> Self {
        SecularPoly {
            vars: vars.clone(),
            parts: Vec::new(),
        }
    }

    pub fn from_fourier(f: FourierPoly) -> Self {
        Self::from_parts(f.vars().clone(), alloc::vec![f])
    }

    pub fn constant(c: MPoly) -> Self {
        Self::from_fourier(FourierPoly::constant(c))
    }

    pub fn from_parts(vars: VarSet, mut parts: Vec<FourierPoly>) -> Self {
        while parts.last().is_some_and(|p| p.is_zero()) {
            parts.pop();
        }
        SecularPoly { vars, parts }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    /// Coefficient of `θ^n`.
    pub fn parts(&self) -> &[FourierPoly] {
        &self.parts
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// Highest power of `θ` present.
    pub fn theta_degree(&self) -> Option<usize> {
        self.parts.len().checked_sub(1)
    }

    /// The `θ`-free part, or an error when secular terms are present.
    pub fn as_fourier(&self) -> Option<FourierPoly> {
        match self.parts.len() {
            0 => Some(FourierPoly::zero(&self.vars)),
            1 => Some(self.parts[0].clone()),
            _ => None,
        }
    }

    pub fn try_add(&self, other: &SecularPoly) -> Result<SecularPoly> {
        self.combine(other, false)
    }

    pub fn try_sub(&self, other: &SecularPoly) -> Result<SecularPoly> {
        self.combine(other, true)
    }

    fn combine(&self, other: &SecularPoly, negate: bool) -> Result<SecularPoly> {
        if self.vars != other.vars {
            return Err(Error::usage("secular polynomials over different variable sets"));
        }
        let n = self.parts.len().max(other.parts.len());
        let zero = FourierPoly::zero(&self.vars);
        let parts = (0..n)
            .map(|i| {
                let a = self.parts.get(i).unwrap_or(&zero);
                let b = other.parts.get(i).unwrap_or(&zero);
                a.combine(b, negate)
            })
            .collect();
        Ok(Self::from_parts(self.vars.clone(), parts))
    }

    pub fn try_mul(&self, other: &SecularPoly) -> Result<SecularPoly> {
        if self.vars != other.vars {
            return Err(Error::usage("secular polynomials over different variable sets"));
        }
        if self.is_zero() || other.is_zero() {
            return Ok(SecularPoly::zero(&self.vars));
        }
        let n = self.parts.len() + other.parts.len() - 1;
        let mut parts: Vec<FourierPoly> = (0..n).map(|_| FourierPoly::zero(&self.vars)).collect();
        for (i, a) in self.parts.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.parts.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let prod = a.product(b);
                parts[i + j] = parts[i + j].combine(&prod, false);
            }
        }
        Ok(Self::from_parts(self.vars.clone(), parts))
    }

    pub fn scale(&self, c: &Rat) -> SecularPoly {
        self.map_coeffs(|p| p.scale(c))
    }

    pub fn neg(&self) -> SecularPoly {
        self.map_coeffs(|p| -p)
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(&MPoly) -> MPoly) -> SecularPoly {
        let parts = self.parts.iter().map(|p| p.map_coeffs(&mut f)).collect();
        Self::from_parts(self.vars.clone(), parts)
    }

    pub fn diff_coeffs(&self, i: usize) -> SecularPoly {
        self.map_coeffs(|c| c.diff(i))
    }

    /// `∫_0^θ f(s) ds`, exact, via repeated integration by parts.
    pub fn integrate_from_zero(&self) -> SecularPoly {
        let mut out: Vec<FourierPoly> = (0..=self.parts.len()).map(|_| FourierPoly::zero(&self.vars)).collect();
        for (n, f) in self.parts.iter().enumerate() {
            for (h, c) in f.harmonics() {
                for (p, hh, w) in unit_integral(n as u32, h) {
                    let cur = out[p as usize].get(hh);
                    out[p as usize].set(hh, &cur + &c.scale(&w));
                }
            }
        }
        Self::from_parts(self.vars.clone(), out)
    }

    /// Value at `θ = 2π`, with `π` the variable `pi`.
    pub fn eval_at_2pi(&self) -> Result<MPoly> {
        let mut acc = MPoly::zero(&self.vars);
        if self.is_zero() {
            return Ok(acc);
        }
        let two_pi = MPoly::var(&self.vars, "pi")?.scale(&Rat::from_int(2));
        let mut power = MPoly::one(&self.vars);
        for f in &self.parts {
            acc = &acc + &(&f.at_zero() * &power);
            power = &power * &two_pi;
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, theta: f64, point: &[f64]) -> f64 {
        let mut s = 0.0;
        let mut tp = 1.0;
        for f in &self.parts {
            s += tp * f.eval_f64(theta, point);
            tp *= theta;
        }
        s
    }

    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (n, f) in self.parts.iter().enumerate() {
            for line in f.dump().lines() {
                if n == 0 {
                    out.push_str(line);
                } else {
                    out.push_str(&alloc::format!("theta^{n}*{line}"));
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn size(&self) -> usize {
        self.parts.iter().map(|p| p.size()).sum()
    }
}

impl fmt::Debug for SecularPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

/// `∫_0^θ s^n h(s) ds` as a list of `(θ-power, harmonic, weight)`.
fn unit_integral(n: u32, h: Harmonic) -> Vec<(u32, Harmonic, Rat)> {
    let k = match h {
        Harmonic::Const => return alloc::vec![(n + 1, Harmonic::Const, Rat::new(1, n as i64 + 1))],
        Harmonic::Cos(k) | Harmonic::Sin(k) => k as i64,
    };
    // Antiderivative A(θ) without the lower limit, then subtract A(0).
    let mut terms: Vec<(u32, Harmonic, Rat)> = Vec::new();
    let mut weight = Rat::one();
    let mut cur = h;
    let mut p = n;
    loop {
        let (next, sign) = match cur {
            Harmonic::Cos(_) => (Harmonic::Sin(k as u32), 1),
            Harmonic::Sin(_) => (Harmonic::Cos(k as u32), -1),
            Harmonic::Const => unreachable!(),
        };
        // ∫ θ^p cos = θ^p sin/k - (p/k) ∫ θ^{p-1} sin
        // ∫ θ^p sin = -θ^p cos/k + (p/k) ∫ θ^{p-1} cos
        terms.push((p, next, &weight * &Rat::new(sign, k)));
        if p == 0 {
            break;
        }
        weight = &weight * &Rat::new(-sign * p as i64, k);
        cur = next;
        p -= 1;
    }
    let at_zero: Rat = terms
        .iter()
        .filter(|(p, hh, _)| *p == 0 && matches!(hh, Harmonic::Cos(_)))
        .fold(Rat::zero(), |s, (_, _, w)| s + w);
    if !at_zero.is_zero() {
        terms.push((0, Harmonic::Const, -at_zero));
    }
    terms
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs() -> VarSet {
        VarSet::new(&["x", "z", "pi"]).unwrap()
    }

    fn c(v: &VarSet, n: i64, d: i64) -> MPoly {
        MPoly::constant(v, Rat::new(n, d))
    }

    #[test]
    fn trig_monomial_examples() {
        let v = vs();
        assert_eq!(trig_monomial(&v, 1, 0), FourierPoly::cos(1, c(&v, 1, 1)));
        let cos2 = trig_monomial(&v, 2, 0);
        assert_eq!(cos2.dump(), "const:1/2\n2:cos:1/2\n");
        let c2s = trig_monomial(&v, 2, 1);
        assert_eq!(c2s.dump(), "1:sin:1/4\n3:sin:1/4\n");
    }

    #[test]
    fn integration_examples() {
        let v = vs();
        let pi = MPoly::var(&v, "pi").unwrap();
        assert!(FourierPoly::cos(3, c(&v, 1, 1)).integrate_0_2pi().unwrap().is_zero());
        assert_eq!(
            FourierPoly::constant(c(&v, 1, 1)).integrate_0_2pi().unwrap(),
            pi.scale(&Rat::from_int(2))
        );
        assert_eq!(trig_monomial(&v, 2, 0).integrate_0_2pi().unwrap(), pi);
    }

    #[test]
    fn antiderivative_examples() {
        let v = vs();
        let (p, s) = FourierPoly::sin(1, c(&v, 1, 1)).antiderivative();
        assert_eq!(p, FourierPoly::cos(1, c(&v, -1, 1)));
        assert!(s.is_zero());
        let def = SecularPoly::from_fourier(FourierPoly::sin(1, c(&v, 1, 1))).integrate_from_zero();
        assert_eq!(def.dump(), "const:1\n1:cos:-1\n");
        let (p, s) = FourierPoly::constant(c(&v, 3, 1)).antiderivative();
        assert!(p.is_zero());
        assert_eq!(s, c(&v, 3, 1));
        let (p, s) = FourierPoly::cos(2, c(&v, 1, 1)).antiderivative();
        assert_eq!(p, FourierPoly::sin(2, c(&v, 1, 2)));
        assert!(s.is_zero());
    }

    #[test]
    fn secular_integration_matches_quadrature() {
        let v = vs();
        let x = MPoly::var(&v, "x").unwrap();
        let f = SecularPoly::from_parts(
            v.clone(),
            alloc::vec![
                trig_monomial(&v, 3, 2).mul_poly(&x),
                FourierPoly::sin(2, c(&v, 1, 1)),
                FourierPoly::cos(1, c(&v, 2, 3))
                    .try_add(&FourierPoly::constant(c(&v, 1, 1)))
                    .unwrap(),
            ],
        );
        let g = f.integrate_from_zero();
        let pt = [0.7, 0.0, core::f64::consts::PI];
        for &t in &[0.3, 1.7, 4.0, 2.0 * core::f64::consts::PI] {
            let n = 4000;
            let h = t / n as f64;
            let mut s = f.eval_f64(0.0, &pt) + f.eval_f64(t, &pt);
            for i in 1..n {
                let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                s += w * f.eval_f64(i as f64 * h, &pt);
            }
            s *= h / 3.0;
            assert!((g.eval_f64(t, &pt) - s).abs() < 1e-9, "{t}");
        }
        let at = g.eval_at_2pi().unwrap().eval_f64(&pt);
        assert!((at - g.eval_f64(2.0 * core::f64::consts::PI, &pt)).abs() < 1e-9);
    }

    #[test]
    fn product_to_sum_signs() {
        let v = vs();
        let one = c(&v, 1, 1);
        let s2 = FourierPoly::sin(2, one.clone());
        let c3 = FourierPoly::cos(3, one.clone());
        let s5 = FourierPoly::sin(5, one.clone());
        // sin2 cos3 = (sin5 - sin1)/2, sin2 sin5 = (cos3 - cos7)/2
        assert_eq!(s2.try_mul(&c3).unwrap().dump(), "1:sin:-1/2\n5:sin:1/2\n");
        assert_eq!(s2.try_mul(&s5).unwrap().dump(), "3:cos:1/2\n7:cos:-1/2\n");
        assert!(s2.try_mul(&s2).unwrap().integrate_0_2pi().unwrap() == MPoly::var(&v, "pi").unwrap());
    }
}
