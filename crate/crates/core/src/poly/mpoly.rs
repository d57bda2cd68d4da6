use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Mul, Neg, Sub};

use hashbrown::HashMap;

use super::interval::Interval;
use super::monomial::{canonical_cmp, Monomial, MonomialOrder};
use super::varset::VarSet;
use crate::error::{Error, Result};
use crate::rat::Rat;

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in canonical order (degrevlex, last variable largest,
/// leading term first) without zero coefficients, so structural equality is
/// polynomial equality.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    vars: VarSet,
    terms: Vec<(Monomial, Rat)>,
}

/// Hash accumulator for building polynomials term by term.
pub struct TermAccumulator {
    map: HashMap<Monomial, Rat>,
}

impl TermAccumulator {
    pub fn new() -> Self {
        TermAccumulator { map: HashMap::new() }
    }

    pub fn with_capacity(n: usize) -> Self {
        TermAccumulator {
            map: HashMap::with_capacity(n),
        }
    }

    pub fn add(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.map.entry(m) {
            hashbrown::hash_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
            }
            hashbrown::hash_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add_ref(&mut self, m: &Monomial, c: &Rat) {
        if c.is_zero() {
            return;
        }
        if let Some(v) = self.map.get_mut(m) {
            *v += c;
        } else {
            self.map.insert(m.clone(), c.clone());
        }
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Adds `scale * p`.
    pub fn add_poly(&mut self, p: &MPoly, scale: &Rat) {
        for (m, c) in &p.terms {
            self.add(m.clone(), c * scale);
        }
    }

    pub fn into_poly(self, vars: &VarSet) -> MPoly {
        let mut terms: Vec<(Monomial, Rat)> = self.map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| canonical_cmp(&b.0, &a.0));
        MPoly {
            vars: vars.clone(),
            terms,
        }
    }
}

impl Default for TermAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

fn check_same(a: &VarSet, b: &VarSet) -> Result<()> {
    if a.same(b) {
        Ok(())
    } else {
        Err(Error::usage(alloc::format!("variable set mismatch: {a:?} vs {b:?}")))
    }
}

impl MPoly {
    pub fn zero(vars: &VarSet) -> Self {
        MPoly {
            vars: vars.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(vars: &VarSet, c: Rat) -> Self {
        if c.is_zero() {
            return Self::zero(vars);
        }
        MPoly {
            vars: vars.clone(),
            terms: alloc::vec![(Monomial::one(vars.len()), c)],
        }
    }

    pub fn one(vars: &VarSet) -> Self {
        Self::constant(vars, Rat::one())
    }

    pub fn var(vars: &VarSet, name: &str) -> Result<Self> {
        let i = vars.require(name)?;
        Ok(Self::var_index(vars, i))
    }

    pub fn var_index(vars: &VarSet, i: usize) -> Self {
        Self::from_terms(vars, [(Monomial::var(vars.len(), i, 1), Rat::one())])
    }

    pub fn monomial(vars: &VarSet, m: Monomial, c: Rat) -> Self {
        Self::from_terms(vars, [(m, c)])
    }

    /// Collects terms, merging duplicates and applying square-root rules.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rat)>>(vars: &VarSet, terms: I) -> Self {
        let mut acc = TermAccumulator::new();
        for (m, c) in terms {
            assert_eq!(m.len(), vars.len(), "monomial length does not match variable set");
            let (m, c) = reduce_by_rules(vars, m, c);
            acc.add(m, c);
        }
        acc.into_poly(vars)
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn terms(&self) -> &[(Monomial, Rat)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Rat)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.as_slice() {
            [] => Some(Rat::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.exp(i)).max()
    }

    /// Variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.vars.len())
            .filter(|&i| self.terms.iter().any(|(m, _)| m.exp(i) > 0))
            .collect()
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(&self.vars);
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Multiplies by a monomial `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(&self.vars);
        }
        if self.vars.has_rules() {
            return MPoly::from_terms(&self.vars, self.terms.iter().map(|(a, b)| (a.mul(m), b * c)));
        }
        // Multiplying by a monomial preserves the order.
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(a, b)| (a.mul(m), b * c)).collect(),
        }
    }

    pub fn try_add(&self, other: &MPoly) -> Result<MPoly> {
        check_same(&self.vars, &other.vars)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &MPoly) -> Result<MPoly> {
        check_same(&self.vars, &other.vars)?;
        Ok(self.merge(other, true))
    }

    pub fn try_mul(&self, other: &MPoly) -> Result<MPoly> {
        check_same(&self.vars, &other.vars)?;
        Ok(self.product(other))
    }

    fn merge(&self, other: &MPoly, negate: bool) -> MPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match canonical_cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(
            b[j..]
                .iter()
                .map(|(m, c)| (m.clone(), if negate { -c } else { c.clone() })),
        );
        MPoly {
            vars: self.vars.clone(),
            terms: out,
        }
    }

    fn product(&self, other: &MPoly) -> MPoly {
        if self.is_zero() || other.is_zero() {
            return MPoly::zero(&self.vars);
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, &other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut acc = TermAccumulator::with_capacity(self.terms.len() * other.terms.len() / 2 + 1);
        let rules = self.vars.has_rules();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                if rules {
                    let (m, c) = reduce_by_rules(&self.vars, m, c);
                    acc.add(m, c);
                } else {
                    acc.add(m, c);
                }
            }
        }
        acc.into_poly(&self.vars)
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut result = MPoly::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.product(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.product(&base);
            }
        }
        result
    }

    /// Formal partial derivative in variable `i`.
    pub fn diff(&self, i: usize) -> MPoly {
        let terms = self.terms.iter().filter(|(m, _)| m.exp(i) > 0).map(|(m, c)| {
            let e = m.exp(i);
            let mut m2 = m.clone();
            m2.exps_mut()[i] = e - 1;
            (m2, c * &Rat::from_int(e as i64))
        });
        MPoly::from_terms(&self.vars, terms)
    }

    pub fn diff_var(&self, name: &str) -> Result<MPoly> {
        Ok(self.diff(self.vars.require(name)?))
    }

    /// Exact evaluation at a full point.
    pub fn eval(&self, point: &[Rat]) -> Result<Rat> {
        if point.len() != self.vars.len() {
            return Err(Error::usage("evaluation point has the wrong dimension"));
        }
        let mut sum = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t *= &point[i].pow(e);
                }
            }
            sum += &t;
        }
        Ok(sum)
    }

    /// Exact evaluation with variables bound by name; every variable that
    /// occurs must be bound.
    pub fn eval_named(&self, point: &BTreeMap<String, Rat>) -> Result<Rat> {
        let mut full = Vec::with_capacity(self.vars.len());
        let support = self.support();
        for i in 0..self.vars.len() {
            match point.get(self.vars.name(i)) {
                Some(v) => full.push(v.clone()),
                None if support.contains(&i) => {
                    return Err(Error::usage(alloc::format!("unbound variable `{}`", self.vars.name(i))))
                }
                None => full.push(Rat::zero()),
            }
        }
        self.eval(&full)
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.vars.len());
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = c.to_f64();
                for (i, &e) in m.exps().iter().enumerate() {
                    if e > 0 {
                        t *= libm::pow(point[i], e as f64);
                    }
                }
                t
            })
            .sum()
    }

    /// Interval enclosure of the value over a box.
    pub fn eval_interval(&self, point: &[Interval]) -> Interval {
        assert_eq!(point.len(), self.vars.len());
        let mut sum = Interval::point(0.0);
        for (m, c) in &self.terms {
            let mut t = Interval::from_rat(c);
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t = t * point[i].powi(e);
                }
            }
            sum = sum + t;
        }
        sum
    }

    /// Floating value at a point of doubles, with a rigorous enclosure.
    pub fn eval_real(&self, point: &[f64]) -> (f64, Interval) {
        let boxed: Vec<Interval> = point.iter().map(|&x| Interval::point(x)).collect();
        let enc = self.eval_interval(&boxed);
        (self.eval_f64(point), enc)
    }

    /// Replaces variable `i` by `value`; the result lives over the same set.
    pub fn substitute(&self, i: usize, value: &MPoly) -> MPoly {
        let deg = self.degree_in(i).unwrap_or(0);
        let mut powers = Vec::with_capacity(deg as usize + 1);
        powers.push(MPoly::one(&self.vars));
        for k in 1..=deg as usize {
            let next = powers[k - 1].product(value);
            powers.push(next);
        }
        let mut acc = TermAccumulator::new();
        for (m, c) in &self.terms {
            let e = m.exp(i) as usize;
            let mut rest = m.clone();
            rest.exps_mut()[i] = 0;
            let piece = powers[e].mul_term(&rest, c);
            for (pm, pc) in piece.terms {
                acc.add(pm, pc);
            }
        }
        acc.into_poly(&self.vars)
    }

    pub fn substitute_value(&self, i: usize, value: &Rat) -> MPoly {
        let mut acc = TermAccumulator::new();
        for (m, c) in &self.terms {
            let e = m.exp(i);
            let mut rest = m.clone();
            rest.exps_mut()[i] = 0;
            acc.add(rest, c * &value.pow(e));
        }
        acc.into_poly(&self.vars)
    }

    /// Coefficient of `x_i^e`, as a polynomial free of `x_i`.
    pub fn coeff_of(&self, i: usize, e: u32) -> MPoly {
        let terms: Vec<(Monomial, Rat)> = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(i) == e)
            .map(|(m, c)| {
                let mut m2 = m.clone();
                m2.exps_mut()[i] = 0;
                (m2, c.clone())
            })
            .collect();
        // Removing one variable's fixed exponent keeps the relative order.
        MPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// `[c_0, c_1, ..]` with `self = sum c_k x_i^k`.
    pub fn univariate_coeffs(&self, i: usize) -> Vec<MPoly> {
        let deg = match self.degree_in(i) {
            Some(d) => d,
            None => return Vec::new(),
        };
        (0..=deg).map(|e| self.coeff_of(i, e)).collect()
    }

    /// Re-expresses the polynomial over another variable set by name.
    pub fn embed(&self, target: &VarSet) -> Result<MPoly> {
        let map: Vec<Option<usize>> = (0..self.vars.len())
            .map(|i| target.index_of(self.vars.name(i)))
            .collect();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut e = alloc::vec![0u32; target.len()];
            for (i, &x) in m.exps().iter().enumerate() {
                if x == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => e[j] = x,
                    None => {
                        return Err(Error::usage(alloc::format!(
                            "variable `{}` is not present in the target set",
                            self.vars.name(i)
                        )))
                    }
                }
            }
            terms.push((Monomial::from_exps(e), c.clone()));
        }
        Ok(MPoly::from_terms(target, terms))
    }

    /// Leading term under `order`.
    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Monomial, &Rat)> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(&a.0, &b.0))
            .map(|(m, c)| (m, c))
    }

    /// Terms sorted in decreasing `order`.
    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<(Monomial, Rat)> {
        let mut t = self.terms.clone();
        t.sort_by(|a, b| order.cmp(&b.0, &a.0));
        t
    }

    /// Positive rational `c` such that `self / c` has coprime integer
    /// coefficients.
    pub fn content(&self) -> Rat {
        self.terms.iter().fold(Rat::zero(), |g, (_, c)| g.gcd(c))
    }

    /// Divides out the content and fixes the sign so that the canonical
    /// leading coefficient is positive.
    pub fn primitive(&self) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.terms[0].1.is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }

    /// Scales so the leading coefficient under `order` is one.
    pub fn monic(&self, order: &MonomialOrder) -> MPoly {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// `c` with `self = c * other`, if it exists. Two zero polynomials are
    /// proportional with `c = 1`.
    pub fn proportional(&self, other: &MPoly) -> Option<Rat> {
        if self.vars != other.vars {
            return None;
        }
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Some(Rat::one()),
            (true, false) | (false, true) => return None,
            _ => {}
        }
        if self.terms.len() != other.terms.len() {
            return None;
        }
        let c = &self.terms[0].1 / &other.terms[0].1;
        for ((ma, ca), (mb, cb)) in self.terms.iter().zip(&other.terms) {
            if ma != mb || *ca != &c * cb {
                return None;
            }
        }
        Some(c)
    }

    /// Multivariate division: `self = sum q_i d_i + r` where no monomial of
    /// `r` is divisible by a leading monomial of the divisors.
    pub fn divmod(&self, divisors: &[MPoly], order: &MonomialOrder) -> Result<(Vec<MPoly>, MPoly)> {
        if divisors.is_empty() {
            return Err(Error::usage("empty divisor list"));
        }
        for d in divisors {
            check_same(&self.vars, &d.vars)?;
        }
        let (q, r) = divide(self, divisors, order, true);
        Ok((q, r))
    }

    /// Maps every coefficient through `f` (zeros are dropped).
    pub fn map_coeffs(&self, mut f: impl FnMut(&Rat) -> Rat) -> MPoly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), f(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        MPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// Splits `self = sum_k x_i^k * c_k` keeping only exponents of `x_i`
    /// (used to separate symbolic constants such as `pi`).
    pub fn split_by_var(&self, i: usize) -> BTreeMap<u32, MPoly> {
        let mut out = BTreeMap::new();
        if let Some(d) = self.degree_in(i) {
            for e in 0..=d {
                let c = self.coeff_of(i, e);
                if !c.is_zero() {
                    out.insert(e, c);
                }
            }
        }
        out
    }
}

/// Applies `v^2 -> q` rules to a single term.
pub(crate) fn reduce_by_rules(vars: &VarSet, mut m: Monomial, mut c: Rat) -> (Monomial, Rat) {
    if !vars.has_rules() {
        return (m, c);
    }
    for i in 0..vars.len() {
        if let Some(q) = vars.sqrt_rule(i) {
            let e = m.exp(i);
            if e >= 2 {
                c *= &q.pow(e / 2);
                m.exps_mut()[i] = e % 2;
            }
        }
    }
    (m, c)
}

/// Remainder of full division (no quotients).
pub(crate) fn divide_remainder(p: &MPoly, divisors: &[MPoly], order: &MonomialOrder) -> MPoly {
    divide(p, divisors, order, false).1
}

/// Core of the division algorithm; `want_quotients` avoids building the
/// quotients when only the remainder is needed.
pub(crate) fn divide(
    p: &MPoly,
    divisors: &[MPoly],
    order: &MonomialOrder,
    want_quotients: bool,
) -> (Vec<MPoly>, MPoly) {
    let vars = p.vars().clone();
    let leads: Vec<Option<(Monomial, Rat)>> = divisors
        .iter()
        .map(|d| d.leading_term(order).map(|(m, c)| (m.clone(), c.clone())))
        .collect();
    let mut work: BTreeMap<Vec<u32>, (Monomial, Rat)> = BTreeMap::new();
    for (m, c) in p.terms() {
        work.insert(order.sort_key(m), (m.clone(), c.clone()));
    }
    let mut quotients: Vec<TermAccumulator> = (0..divisors.len()).map(|_| TermAccumulator::new()).collect();
    let mut remainder = TermAccumulator::new();
    while let Some((_, (m, c))) = work.pop_last() {
        let hit = leads.iter().enumerate().find_map(|(k, lt)| match lt {
            Some((lm, lc)) if lm.divides(&m) => Some((k, lm, lc)),
            _ => None,
        });
        match hit {
            Some((k, lm, lc)) => {
                let qm = m.div(lm);
                let qc = &c / lc;
                for (dm, dc) in divisors[k].terms() {
                    if dm == lm {
                        continue;
                    }
                    let tm = dm.mul(&qm);
                    let tc = -(dc * &qc);
                    let (tm, tc) = reduce_by_rules(&vars, tm, tc);
                    let key = order.sort_key(&tm);
                    match work.get_mut(&key) {
                        Some(entry) => {
                            entry.1 += &tc;
                            if entry.1.is_zero() {
                                work.remove(&key);
                            }
                        }
                        None => {
                            work.insert(key, (tm, tc));
                        }
                    }
                }
                if want_quotients {
                    quotients[k].add(qm, qc);
                }
            }
            None => remainder.add(m, c),
        }
    }
    let q = quotients.into_iter().map(|a| a.into_poly(&vars)).collect();
    (q, remainder.into_poly(&vars))
}

macro_rules! poly_binop {
    ($tr:ident, $m:ident, $inner:ident) => {
        impl $tr<&MPoly> for &MPoly {
            type Output = MPoly;
            /// Panics on mismatched variable sets; use the `try_` form to
            /// handle that case.
            fn $m(self, rhs: &MPoly) -> MPoly {
                self.$inner(rhs).expect("variable set mismatch")
            }
        }
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly {
                (&self).$inner(&rhs).expect("variable set mismatch")
            }
        }
        impl $tr<&MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: &MPoly) -> MPoly {
                (&self).$inner(rhs).expect("variable set mismatch")
            }
        }
    };
}

poly_binop!(Add, add, try_add);
poly_binop!(Sub, sub, try_sub);
poly_binop!(Mul, mul, try_mul);

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&-Rat::one())
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}
