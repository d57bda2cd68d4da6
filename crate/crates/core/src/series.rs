//! Truncated power series in `ε` with [`SecularPoly`] coefficients.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::poly::{MPoly, VarSet};
use crate::rat::Rat;
use crate::trig::SecularPoly;

/// `Σ_{k=0}^{N} c_k ε^k`, truncated at a fixed order `N`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EpsSeries {
    vars: VarSet,
    coeffs: Vec<SecularPoly>,
}

impl EpsSeries {
    pub fn zero(vars: &VarSet, order: usize) -> Self {
        EpsSeries {
            vars: vars.clone(),
            coeffs: (0..=order).map(|_| SecularPoly::zero(vars)).collect(),
        }
    }

    /// Builds a series from `c_0, c_1, ..`; missing coefficients are zero and
    /// extra ones are dropped.
    pub fn from_coeffs(vars: &VarSet, order: usize, coeffs: Vec<SecularPoly>) -> Result<Self> {
        let mut s = EpsSeries::zero(vars, order);
        for (k, c) in coeffs.into_iter().enumerate().take(order + 1) {
            if c.vars() != vars {
                return Err(Error::usage("series coefficient over a different variable set"));
            }
            s.coeffs[k] = c;
        }
        Ok(s)
    }

    /// The constant series `c`.
    pub fn constant(c: SecularPoly, order: usize) -> Self {
        let vars = c.vars().clone();
        let mut s = EpsSeries::zero(&vars, order);
        s.coeffs[0] = c;
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn coeff(&self, k: usize) -> &SecularPoly {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[SecularPoly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check(&self, other: &EpsSeries) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::usage("series over different variable sets"));
        }
        if self.order() != other.order() {
            return Err(Error::usage("series truncated at different orders"));
        }
        Ok(())
    }

    pub fn add(&self, other: &EpsSeries) -> Result<EpsSeries> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.try_add(b))
            .collect::<Result<_>>()?;
        Ok(EpsSeries {
            vars: self.vars.clone(),
            coeffs,
        })
    }

    pub fn scale(&self, c: &Rat) -> EpsSeries {
        EpsSeries {
            vars: self.vars.clone(),
            coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Multiplies by `ε^s`, dropping what falls beyond the order.
    pub fn shift(&self, s: usize) -> EpsSeries {
        let mut out = EpsSeries::zero(&self.vars, self.order());
        for k in s..=self.order() {
            out.coeffs[k] = self.coeffs[k - s].clone();
        }
        out
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &EpsSeries) -> Result<EpsSeries> {
        self.check(other)?;
        let n = self.order();
        let mut out = EpsSeries::zero(&self.vars, n);
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=n - i {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let p = self.coeffs[i].try_mul(&other.coeffs[j])?;
                out.coeffs[i + j] = out.coeffs[i + j].try_add(&p)?;
            }
        }
        Ok(out)
    }

    /// `(σ + u)^{-1} = σ Σ_k (-σ u)^k` for `σ = ±1` and `u = O(ε)`.
    pub fn inv_unit(sigma: i32, u: &EpsSeries) -> Result<EpsSeries> {
        if sigma != 1 && sigma != -1 {
            return Err(Error::usage("unit must be +1 or -1"));
        }
        if !u.coeffs[0].is_zero() {
            return Err(Error::usage("series to invert around a unit has a nonzero ε^0 term"));
        }
        let s = Rat::from_int(sigma as i64);
        let step = u.scale(&-&s);
        let one = SecularPoly::constant(MPoly::one(&u.vars));
        let mut term = EpsSeries::constant(one, u.order());
        let mut sum = term.clone();
        for _ in 1..=u.order() {
            term = term.mul(&step)?;
            if term.is_zero() {
                break;
            }
            sum = sum.add(&term)?;
        }
        Ok(sum.scale(&s))
    }

    /// `(-1 + u)^{-1} = -Σ_k u^k` truncated at the order of `u`.
    pub fn inv_shifted(u: &EpsSeries) -> Result<EpsSeries> {
        Self::inv_unit(-1, u)
    }

    /// `F(θ, z + δ)` with `δ = Σ_{j≥1} r_j ε^j` given as `r_subst` (whose
    /// `ε^0` coefficient must be exactly `z`).
    pub fn compose_radial(&self, z: usize, r_subst: &EpsSeries) -> Result<EpsSeries> {
        self.check(r_subst).map_err(|_| {
            Error::usage("radial substitution must share the variable set and truncation order of the field")
        })?;
        let zpoly = SecularPoly::constant(MPoly::var_index(&self.vars, z));
        if r_subst.coeffs[0] != zpoly {
            return Err(Error::usage("radial substitution must start with the base variable"));
        }
        let mut comp = RadialComposer::new(self, z)?;
        for j in 1..=self.order() {
            comp.push(r_subst.coeffs[j].clone())?;
        }
        let coeffs = (0..=self.order()).map(|n| comp.coefficient(n)).collect::<Result<_>>()?;
        Ok(EpsSeries {
            vars: self.vars.clone(),
            coeffs,
        })
    }
}

/// Incremental form of [`EpsSeries::compose_radial`]: the `ε^n` coefficient
/// of `F(θ, z + δ)` only needs `r_1..r_{n-1}` when `F_0 = 0`, so the `r_j`
/// can be supplied one at a time as the averaging recursion produces them.
pub struct RadialComposer {
    vars: VarSet,
    order: usize,
    /// `taylor[k][m] = ∂_z^m F_k / m!`.
    taylor: Vec<Vec<SecularPoly>>,
    /// `powers[m][t] = [ε^t] δ^m`, for `t ≤` number of known `r_j`.
    powers: Vec<Vec<SecularPoly>>,
    known: usize,
}

impl RadialComposer {
    pub fn new(field: &EpsSeries, z: usize) -> Result<Self> {
        if z >= field.vars.len() {
            return Err(Error::usage("radial variable out of range"));
        }
        let order = field.order();
        let mut taylor = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut row = alloc::vec![field.coeffs[k].clone()];
            // Only derivatives that can meet a δ-power of order ≤ N - k matter.
            for m in 1..=order - k {
                let prev: &SecularPoly = &row[m - 1];
                if prev.is_zero() {
                    break;
                }
                let next = prev.diff_coeffs(z).scale(&Rat::new(1, m as i64));
                row.push(next);
            }
            taylor.push(row);
        }
        let one = SecularPoly::constant(MPoly::one(&field.vars));
        let powers = alloc::vec![alloc::vec![one]];
        Ok(RadialComposer {
            vars: field.vars.clone(),
            order,
            taylor,
            powers,
            known: 0,
        })
    }

    /// Number of `r_j` supplied so far.
    pub fn known(&self) -> usize {
        self.known
    }

    /// Supplies the next `r_j`.
    pub fn push(&mut self, r: SecularPoly) -> Result<()> {
        if r.vars() != &self.vars {
            return Err(Error::usage("radial coefficient over a different variable set"));
        }
        if self.known >= self.order {
            return Err(Error::usage("radial substitution beyond the truncation order"));
        }
        self.known += 1;
        let t = self.known;
        // powers[0][t] = 0
        self.powers[0].push(SecularPoly::zero(&self.vars));
        if self.powers.len() <= 1 {
            self.powers.push(alloc::vec![SecularPoly::zero(&self.vars)]);
        }
        // powers[1][t] = r_t
        self.powers[1].push(r);
        for m in 2..=t {
            if self.powers.len() <= m {
                self.powers
                    .push((0..m).map(|_| SecularPoly::zero(&self.vars)).collect());
            }
            // [ε^t] δ^m = Σ_j r_j [ε^{t-j}] δ^{m-1}
            let mut acc = SecularPoly::zero(&self.vars);
            for j in 1..=t - (m - 1) {
                let a = &self.powers[1][j];
                let b = &self.powers[m - 1][t - j];
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                acc = acc.try_add(&a.try_mul(b)?)?;
            }
            self.powers[m].push(acc);
        }
        Ok(())
    }

    /// `[ε^n] F(θ, z + δ)`.
    pub fn coefficient(&self, n: usize) -> Result<SecularPoly> {
        if n > self.order {
            return Err(Error::usage("coefficient beyond the truncation order"));
        }
        let need = if self.taylor[0].iter().all(|p| p.is_zero()) {
            n.saturating_sub(1)
        } else {
            n
        };
        if self.known < need {
            return Err(Error::usage(
                "insufficient radial substitution order for the requested coefficient",
            ));
        }
        let mut acc = SecularPoly::zero(&self.vars);
        for k in 0..=n {
            let t = n - k;
            for (m, d) in self.taylor[k].iter().enumerate() {
                if m > t || d.is_zero() {
                    continue;
                }
                let p = match self.powers.get(m).and_then(|row| row.get(t)) {
                    Some(p) => p,
                    None => continue,
                };
                if p.is_zero() {
                    continue;
                }
                acc = acc.try_add(&d.try_mul(p)?)?;
            }
        }
        Ok(acc)
    }
}
