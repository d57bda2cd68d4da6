//! Dense univariate polynomials over the rationals: gcd, square-free
//! decomposition and Sturm sequences.

use alloc::vec::Vec;
use core::fmt;

use super::mpoly::MPoly;
use crate::error::{Error, Result};
use crate::rat::Rat;

/// `coeffs[k]` multiplies `x^k`; no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct UPoly {
    coeffs: Vec<Rat>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| Rat::from_int(x)).collect())
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UPoly::new(alloc::vec![Rat::one()])
    }

    /// Converts a polynomial in which only variable `var` occurs.
    pub fn from_mpoly(p: &MPoly, var: usize) -> Result<Self> {
        let mut coeffs = alloc::vec![Rat::zero(); p.degree_in(var).unwrap_or(0) as usize + 1];
        for (m, c) in p.terms() {
            for (i, &e) in m.exps().iter().enumerate() {
                if i != var && e > 0 {
                    return Err(Error::usage(alloc::format!(
                        "polynomial is not univariate in `{}`: contains `{}`",
                        p.vars().name(var),
                        p.vars().name(i)
                    )));
                }
            }
            coeffs[m.exp(var) as usize] = c.clone();
        }
        Ok(UPoly::new(coeffs))
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64())
    }

    pub fn sign_at(&self, x: &Rat) -> i32 {
        self.eval(x).signum()
    }

    /// Sign as `x -> +inf`.
    pub fn sign_at_infinity(&self) -> i32 {
        self.leading().map_or(0, Rat::signum)
    }

    pub fn scale(&self, c: &Rat) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = Rat::zero();
        UPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        self.add(&o.scale(&-Rat::one()))
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut c = alloc::vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += &(a * b);
            }
        }
        UPoly::new(c)
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &Rat::from_int(k as i64))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.leading().unwrap().clone();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut q = alloc::vec![Rat::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let t = &c * dc;
                    r[k + j] -= &t;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (UPoly::new(q), UPoly::new(r))
    }

    pub fn monic(&self) -> UPoly {
        match self.leading() {
            None => UPoly::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r.primitive_rat();
        }
        a.monic()
    }

    /// Rescales to integer coefficients with unit content (keeps sign).
    fn primitive_rat(&self) -> UPoly {
        let g = self.coeffs.iter().fold(Rat::zero(), |g, c| g.gcd(c));
        if g.is_zero() {
            self.clone()
        } else {
            self.scale(&g.recip())
        }
    }

    /// Yun's square-free factorisation: `[(a_1, 1), (a_2, 2), ..]` with
    /// `self = lc * prod a_i^i`, each `a_i` monic and square-free.
    pub fn square_free_decomposition(&self) -> Vec<(UPoly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let mut a = f.gcd(&fp);
        let mut b = f.divrem(&a).0;
        let mut c = fp.divrem(&a).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.divrem(&a).0;
            c = d.divrem(&a).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    pub fn square_free_part(&self) -> UPoly {
        if self.degree().unwrap_or(0) == 0 {
            return UPoly::one();
        }
        self.divrem(&self.gcd(&self.derivative())).0.monic()
    }

    /// Sturm sequence `p, p', -rem(p, p'), ..`.
    pub fn sturm_sequence(&self) -> Vec<UPoly> {
        let mut seq = alloc::vec![self.clone()];
        if self.is_zero() {
            return seq;
        }
        let mut prev = self.clone();
        let mut cur = self.derivative();
        while !cur.is_zero() {
            seq.push(cur.clone());
            let (_, r) = prev.divrem(&cur);
            prev = cur;
            cur = r.scale(&-Rat::one()).primitive_rat_positive_scale();
        }
        seq
    }

    /// Divides by a positive rational so integer coefficients stay small.
    fn primitive_rat_positive_scale(&self) -> UPoly {
        let g = self.coeffs.iter().fold(Rat::zero(), |g, c| g.gcd(c));
        if g.is_zero() {
            self.clone()
        } else {
            self.scale(&g.recip())
        }
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(&self, a: &Rat, b: &Rat) -> usize {
        let seq = self.sturm_sequence();
        let va = sign_changes(seq.iter().map(|p| p.sign_at(a)));
        let vb = sign_changes(seq.iter().map(|p| p.sign_at(b)));
        va.saturating_sub(vb)
    }

    /// Distinct real roots in `(a, +inf)`.
    pub fn count_roots_above(&self, a: &Rat) -> usize {
        let seq = self.sturm_sequence();
        let va = sign_changes(seq.iter().map(|p| p.sign_at(a)));
        let vinf = sign_changes(seq.iter().map(UPoly::sign_at_infinity));
        va.saturating_sub(vinf)
    }

    /// Cauchy bound: every real root has `|x| < bound`.
    pub fn root_bound(&self) -> Rat {
        let lead = match self.leading() {
            Some(l) => l.abs(),
            None => return Rat::one(),
        };
        let m = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(Rat::abs)
            .fold(Rat::zero(), |a, b| if b > a { b } else { a });
        Rat::one() + m / lead
    }

    /// Disjoint rational intervals `(lo, hi]`, each containing exactly one
    /// distinct root of `self` in `(lower, +inf)`, refined until narrower
    /// than `width`.
    pub fn isolate_roots_above(&self, lower: &Rat, width: &Rat) -> Vec<(Rat, Rat)> {
        let sf = self.square_free_part();
        let mut out = Vec::new();
        if sf.degree().unwrap_or(0) == 0 {
            return out;
        }
        let hi = sf.root_bound();
        let mut stack = alloc::vec![(lower.clone(), hi)];
        while let Some((a, b)) = stack.pop() {
            let n = sf.count_roots(&a, &b);
            if n == 0 {
                continue;
            }
            if n == 1 && &b - &a <= *width {
                out.push((a, b));
                continue;
            }
            let mid = (&a + &b) / Rat::from_int(2);
            stack.push((mid.clone(), b));
            stack.push((a, mid));
        }
        out.sort_by(|x, y| x.0.cmp_value(&y.0));
        out
    }
}

fn sign_changes<I: Iterator<Item = i32>>(signs: I) -> usize {
    let mut last = 0;
    let mut n = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<alloc::string::String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| alloc::format!("({c})x^{k}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}
