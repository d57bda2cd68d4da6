//! Groebner bases over `Q[λ]` and the ascending chain of ideals generated by
//! averaged-function coefficients.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::averaging::AveragedSpectrum;
use crate::error::{Error, Result};
use crate::poly::{MPoly, Monomial, MonomialOrder, VarSet};
use crate::rat::Rat;

/// A finitely generated ideal with a fixed monomial order.
#[derive(Clone, Debug, PartialEq)]
pub struct Ideal {
    vars: VarSet,
    generators: Vec<MPoly>,
    order: MonomialOrder,
}

impl Ideal {
    /// Zero generators are dropped and duplicates (up to a constant
    /// factor) removed.
    pub fn new(vars: &VarSet, generators: &[MPoly], order: MonomialOrder) -> Result<Self> {
        if order.nvars() != vars.len() {
            return Err(Error::usage("monomial order does not match the variable set"));
        }
        let mut gens: Vec<MPoly> = Vec::new();
        for g in generators {
            if g.vars() != vars {
                return Err(Error::usage("generator over a different variable set"));
            }
            if g.is_zero() {
                continue;
            }
            let p = g.primitive();
            if !gens.contains(&p) {
                gens.push(p);
            }
        }
        Ok(Ideal {
            vars: vars.clone(),
            generators: gens,
            order,
        })
    }

    /// Degrevlex with the last variable largest.
    pub fn with_default_order(vars: &VarSet, generators: &[MPoly]) -> Result<Self> {
        Self::new(vars, generators, MonomialOrder::degrevlex_ascending(vars.len()))
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn generators(&self) -> &[MPoly] {
        &self.generators
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn groebner(&self) -> GroebnerBasis {
        buchberger(self)
    }
}

/// A reduced Groebner basis with monic elements, sorted by increasing
/// leading monomial.
#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerBasis {
    vars: VarSet,
    basis: Vec<MPoly>,
    order: MonomialOrder,
}

impl GroebnerBasis {
    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn basis(&self) -> &[MPoly] {
        &self.basis
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.basis.is_empty()
    }

    /// The whole ring (basis `{1}`).
    pub fn is_unit_ideal(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].as_constant().is_some_and(|c| !c.is_zero())
    }

    /// Unique remainder of `p` modulo the ideal.
    pub fn normal_form(&self, p: &MPoly) -> Result<MPoly> {
        if p.vars() != &self.vars {
            return Err(Error::usage("polynomial over a different variable set than the basis"));
        }
        Ok(self.reduce(p))
    }

    fn reduce(&self, p: &MPoly) -> MPoly {
        if self.basis.is_empty() || p.is_zero() {
            return p.clone();
        }
        crate::poly::divide_remainder(p, &self.basis, &self.order)
    }

    pub fn contains(&self, p: &MPoly) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    /// Every S-polynomial of basis pairs reduces to zero.
    pub fn check_buchberger_criterion(&self) -> bool {
        for i in 0..self.basis.len() {
            for j in i + 1..self.basis.len() {
                let s = s_polynomial(&self.basis[i], &self.basis[j], &self.order);
                if !self.reduce(&s).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// No monomial of an element is divisible by another element's leading
    /// monomial.
    pub fn is_autoreduced(&self) -> bool {
        let leads: Vec<Monomial> = self.basis.iter().map(|g| lead(g, &self.order).0).collect();
        for (i, g) in self.basis.iter().enumerate() {
            for (m, _) in g.terms() {
                for (j, l) in leads.iter().enumerate() {
                    if i != j && l.divides(m) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `I ⊆ J` for the ideal `I` of `self` and `J` of `other`.
    pub fn is_subset_of(&self, other: &GroebnerBasis) -> Result<bool> {
        for g in &self.basis {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn lead(p: &MPoly, order: &MonomialOrder) -> (Monomial, crate::rat::Rat) {
    let (m, c) = p.leading_term(order).expect("nonzero polynomial");
    (m.clone(), c.clone())
}

/// `S(f, g) = (L / LT(f)) f - (L / LT(g)) g` with `L = lcm(LM f, LM g)`.
pub fn s_polynomial(f: &MPoly, g: &MPoly, order: &MonomialOrder) -> MPoly {
    let (mf, cf) = lead(f, order);
    let (mg, cg) = lead(g, order);
    let l = mf.lcm(&mg);
    let a = f.mul_term(&l.div(&mf), &cf.recip());
    let b = g.mul_term(&l.div(&mg), &cg.recip());
    &a - &b
}

#[derive(Clone, PartialEq, Eq)]
struct Pair {
    degree: u32,
    key: Vec<u32>,
    i: usize,
    j: usize,
}

impl Ord for Pair {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.degree, &self.key, self.i, self.j).cmp(&(o.degree, &o.key, o.i, o.j))
    }
}

impl PartialOrd for Pair {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Reduced Groebner basis by Buchberger's algorithm with the normal
/// selection strategy (smallest lcm first) and both of Buchberger's
/// criteria for discarding pairs.
pub fn buchberger(ideal: &Ideal) -> GroebnerBasis {
    let order = ideal.order.clone();
    let vars = ideal.vars.clone();
    let mut g: Vec<MPoly> = Vec::new();
    let mut leads: Vec<Monomial> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: BTreeSet<Pair> = BTreeSet::new();
    // Tracks pairs not yet treated, for the chain criterion.
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();

    let add = |p: MPoly,
               g: &mut Vec<MPoly>,
               leads: &mut Vec<Monomial>,
               active: &mut Vec<bool>,
               pairs: &mut BTreeSet<Pair>,
               pending: &mut BTreeSet<(usize, usize)>| {
        let (lm, _) = lead(&p, &order);
        let k = g.len();
        for i in 0..k {
            if !active[i] {
                continue;
            }
            let l = leads[i].lcm(&lm);
            pairs.insert(Pair {
                degree: l.degree(),
                key: order.sort_key(&l),
                i,
                j: k,
            });
            pending.insert((i, k));
        }
        g.push(p);
        leads.push(lm);
        active.push(true);
    };

    let mut sorted: Vec<MPoly> = ideal.generators.iter().map(|p| p.primitive()).collect();
    sorted.sort_by(|a, b| order.cmp(&lead(a, &order).0, &lead(b, &order).0));
    for p in sorted {
        let r = if g.is_empty() {
            p
        } else {
            crate::poly::divide_remainder(&p, &g, &order)
        };
        if !r.is_zero() {
            add(r.primitive(), &mut g, &mut leads, &mut active, &mut pairs, &mut pending);
        }
    }

    while let Some(pair) = pairs.pop_first() {
        let (i, j) = (pair.i, pair.j);
        pending.remove(&(i, j));
        // Criterion 1: coprime leading monomials.
        if leads[i].is_coprime(&leads[j]) {
            continue;
        }
        // Criterion 2: some LM_k divides lcm with (i,k), (j,k) already treated.
        let l = leads[i].lcm(&leads[j]);
        let chain = (0..g.len()).any(|k| {
            k != i
                && k != j
                && leads[k].divides(&l)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = s_polynomial(&g[i], &g[j], &order);
        let r = crate::poly::divide_remainder(&s, &g, &order);
        if r.is_zero() {
            continue;
        }
        let r = r.primitive();
        if r.as_constant().is_some() {
            return GroebnerBasis {
                vars: vars.clone(),
                basis: alloc::vec![MPoly::one(&vars)],
                order,
            };
        }
        add(r, &mut g, &mut leads, &mut active, &mut pairs, &mut pending);
    }
    reduce_basis(&vars, g, order)
}

/// Minimizes and inter-reduces a Groebner basis, making it monic.
fn reduce_basis(vars: &VarSet, g: Vec<MPoly>, order: MonomialOrder) -> GroebnerBasis {
    let mut items: Vec<(Monomial, MPoly)> = g.into_iter().map(|p| (lead(&p, &order).0, p)).collect();
    items.sort_by(|a, b| order.cmp(&a.0, &b.0));
    let mut minimal: Vec<(Monomial, MPoly)> = Vec::new();
    for (m, p) in items {
        if minimal.iter().any(|(l, _)| l.divides(&m)) {
            continue;
        }
        minimal.push((m, p));
    }
    let polys: Vec<MPoly> = minimal.iter().map(|(_, p)| p.clone()).collect();
    let mut out = Vec::with_capacity(polys.len());
    for (k, p) in polys.iter().enumerate() {
        let others: Vec<MPoly> = polys
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, q)| q.clone())
            .collect();
        let r = if others.is_empty() {
            p.clone()
        } else {
            crate::poly::divide_remainder(p, &others, &order)
        };
        out.push(r.monic(&order));
    }
    out.sort_by(|a, b| order.cmp(&lead(a, &order).0, &lead(b, &order).0));
    GroebnerBasis {
        vars: vars.clone(),
        basis: out,
        order,
    }
}

/// Convenience: reduced Groebner basis of the ideal generated by `gens`.
pub fn groebner(vars: &VarSet, gens: &[MPoly], order: MonomialOrder) -> Result<GroebnerBasis> {
    Ok(buchberger(&Ideal::new(vars, gens, order)?))
}

/// `normal_form(p, G)`.
pub fn normal_form(p: &MPoly, g: &GroebnerBasis) -> Result<MPoly> {
    g.normal_form(p)
}

/// A coefficient of an averaged function after reduction modulo the ideal
/// of all lower-order coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct HattedCoefficient {
    /// Power of `z` it multiplies.
    pub z_power: u32,
    /// The raw coefficient (over parameters, `z`, `pi`).
    pub raw: MPoly,
    /// Its normal form, same ring.
    pub hatted: MPoly,
    /// `hatted = pi^k * rational`, if it has a single power of `pi`.
    pub pi_power: Option<u32>,
    /// The `pi`-free rational part of `hatted`, over the parameters.
    pub rational: MPoly,
}

/// One step `I_{i-1} -> I_i` of the chain.
#[derive(Clone, Debug)]
pub struct ChainLevel {
    pub order: usize,
    /// Nonzero hatted coefficients of `f_i`, by power of `z`.
    pub coefficients: Vec<HattedCoefficient>,
    /// Reassembled `f̂_i` (over parameters, `z`, `pi`).
    pub hatted_f: MPoly,
    /// Groebner basis of `I_i`.
    pub basis: GroebnerBasis,
}

/// The reduced averaged functions `f̂_2 .. f̂_N`.
#[derive(Clone, Debug)]
pub struct ChainReduction {
    pub param_vars: VarSet,
    pub levels: Vec<ChainLevel>,
}

impl ChainReduction {
    pub fn level(&self, order: usize) -> Option<&ChainLevel> {
        self.levels.iter().find(|l| l.order == order)
    }

    /// Every nonzero hatted coefficient, as `(order, z_power, coefficient)`.
    pub fn nonzero(&self) -> Vec<(usize, u32, &HattedCoefficient)> {
        self.levels
            .iter()
            .flat_map(|l| l.coefficients.iter().map(move |c| (l.order, c.z_power, c)))
            .collect()
    }

    /// The Groebner bases of `I_2 ⊆ I_3 ⊆ ...`.
    pub fn bases(&self) -> Vec<&GroebnerBasis> {
        self.levels.iter().map(|l| &l.basis).collect()
    }
}

/// Reduces each `f_i` modulo the ideal generated by the coefficients of all
/// `f_k`, `k < i`.
///
/// Coefficients carry powers of the symbolic `pi`; since the lower ideals
/// are generated by rational polynomials, the normal form is taken
/// separately for each power of `pi`. The `pi`-free parts of the reduced
/// coefficients generate the next ideal.
pub fn reduce_averaged_chain(spec: &AveragedSpectrum, order: MonomialOrder) -> Result<ChainReduction> {
    let avars = spec.vars().clone();
    let zi = avars.require("z")?;
    let pii = avars.require("pi")?;
    let names: Vec<String> = avars
        .names()
        .iter()
        .filter(|n| *n != "z" && *n != "pi")
        .cloned()
        .collect();
    let mut pvars = VarSet::new(&names)?;
    for (i, n) in avars.names().iter().enumerate() {
        if let Some(q) = avars.sqrt_rule(i) {
            pvars = pvars.with_sqrt_rule(n, q.clone())?;
        }
    }
    if order.nvars() != pvars.len() {
        return Err(Error::usage("monomial order does not match the parameter count"));
    }
    let pi_poly = MPoly::var_index(&avars, pii);
    let mut generators: Vec<MPoly> = Vec::new();
    let mut basis = buchberger(&Ideal::new(&pvars, &[], order.clone())?);
    let mut levels = Vec::new();
    for i in 1..=spec.order() {
        let f = spec.f(i);
        let mut coefficients = Vec::new();
        let mut hatted_f = MPoly::zero(&avars);
        let mut new_gens = Vec::new();
        for (zp, c) in f.split_by_var(zi) {
            let mut hatted = MPoly::zero(&avars);
            let mut rational = MPoly::zero(&pvars);
            let mut powers = Vec::new();
            for (pp, comp) in c.split_by_var(pii) {
                let comp_p = comp.embed(&pvars)?;
                let nf = basis.normal_form(&comp_p)?;
                if nf.is_zero() {
                    continue;
                }
                powers.push(pp);
                new_gens.push(nf.clone());
                rational = &rational + &nf;
                hatted = &hatted + &(&nf.embed(&avars)? * &pi_poly.pow(pp));
            }
            if hatted.is_zero() {
                continue;
            }
            let pi_power = if powers.len() == 1 { Some(powers[0]) } else { None };
            hatted_f = &hatted_f + &(&hatted * &MPoly::var_index(&avars, zi).pow(zp));
            coefficients.push(HattedCoefficient {
                z_power: zp,
                raw: c,
                hatted,
                pi_power,
                rational,
            });
        }
        if !new_gens.is_empty() {
            generators.extend(new_gens);
            basis = buchberger(&Ideal::new(&pvars, &generators, order.clone())?);
        }
        levels.push(ChainLevel {
            order: i,
            coefficients,
            hatted_f,
            basis: basis.clone(),
        });
    }
    Ok(ChainReduction {
        param_vars: pvars,
        levels,
    })
}

/// Outcome of comparing consecutive ideals of a chain.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilizationReport {
    /// `(s, I_s == I_{s+1})` for consecutive pairs, indexed by position.
    pub steps: Vec<(usize, bool)>,
    /// First index `s` with `I_s = I_{s+1}`.
    pub first_stable: Option<usize>,
    pub note: String,
}

/// Compares consecutive ideals by mutual membership of their bases.
/// `labels[k]` names the `k`-th ideal (e.g. its order `s`).
pub fn chain_stabilization(bases: &[&GroebnerBasis], labels: &[usize]) -> Result<StabilizationReport> {
    if bases.len() != labels.len() {
        return Err(Error::usage("one label per ideal is required"));
    }
    let mut steps = Vec::new();
    let mut first = None;
    for k in 0..bases.len().saturating_sub(1) {
        let eq = bases[k].is_subset_of(bases[k + 1])? && bases[k + 1].is_subset_of(bases[k])?;
        if eq && first.is_none() {
            first = Some(labels[k]);
        }
        steps.push((labels[k], eq));
    }
    let note = match (first, labels.last()) {
        (Some(s), _) => alloc::format!("chain is stationary from I_{s} to I_{}", s + 1),
        (None, Some(last)) => {
            alloc::format!("strictly growing: no stabilization observed up to I_{last}")
        }
        (None, None) => String::from("empty chain"),
    };
    Ok(StabilizationReport {
        steps,
        first_stable: first,
        note,
    })
}

/// Stabilization of the chain produced by [`reduce_averaged_chain`],
/// starting at the first nonzero ideal.
pub fn chain_stabilization_of(chain: &ChainReduction) -> Result<StabilizationReport> {
    let levels: Vec<&ChainLevel> = chain.levels.iter().skip_while(|l| l.basis.is_zero_ideal()).collect();
    let bases: Vec<&GroebnerBasis> = levels.iter().map(|l| &l.basis).collect();
    let labels: Vec<usize> = levels.iter().map(|l| l.order).collect();
    chain_stabilization(&bases, &labels)
}

/// Groups a list of polynomials into a readable map (used by reports).
pub fn index_by_order(chain: &ChainReduction) -> BTreeMap<(usize, u32), MPoly> {
    chain
        .nonzero()
        .into_iter()
        .map(|(i, z, c)| ((i, z), c.rational.clone()))
        .collect()
}

/// Agreement between a computed hatted coefficient and a reference one.
#[derive(Clone, Debug, PartialEq)]
pub struct HattedMatch {
    pub name: String,
    pub order: usize,
    pub z_power: u32,
    /// The computed `pi`-free coefficient, zero if absent.
    pub ours: MPoly,
    pub reference: MPoly,
    /// `c != 0` with `ours - c * reference` in the ideal of lower orders.
    pub ratio: Option<Rat>,
    /// `ours = c * reference` holds exactly, not only modulo the ideal.
    pub exact: bool,
}

impl HattedMatch {
    pub fn matched(&self) -> bool {
        self.ratio.is_some()
    }
}

/// Compares hatted coefficients with references `(name, order, z_power,
/// polynomial)`: first by exact proportionality, then modulo the Groebner
/// basis of the ideal below that order.
pub fn compare_hatted(chain: &ChainReduction, references: &[(String, usize, u32, MPoly)]) -> Result<Vec<HattedMatch>> {
    let mut out = Vec::with_capacity(references.len());
    for (name, order, z_power, reference) in references {
        let reference = reference.embed(&chain.param_vars)?;
        let ours = chain
            .level(*order)
            .and_then(|l| l.coefficients.iter().find(|c| c.z_power == *z_power))
            .map(|c| c.rational.clone())
            .unwrap_or_else(|| MPoly::zero(&chain.param_vars));
        let mut m = HattedMatch {
            name: name.clone(),
            order: *order,
            z_power: *z_power,
            ours,
            reference,
            ratio: None,
            exact: false,
        };
        if !m.ours.is_zero() && !m.reference.is_zero() {
            if let Some(c) = m.ours.proportional(&m.reference) {
                m.ratio = Some(c);
                m.exact = true;
            } else if let Some(lower) = order.checked_sub(1).and_then(|k| chain.level(k)) {
                let a = lower.basis.normal_form(&m.ours)?;
                let b = lower.basis.normal_form(&m.reference)?;
                if let Some(c) = a.proportional(&b).filter(|c| !c.is_zero() && !b.is_zero()) {
                    if lower.basis.normal_form(&(&m.ours - &m.reference.scale(&c)))?.is_zero() {
                        m.ratio = Some(c);
                    }
                }
            }
        }
        out.push(m);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs() -> VarSet {
        VarSet::new(&["x", "y"]).unwrap()
    }

    fn p(s: &str) -> MPoly {
        MPoly::parse(s, &vs()).unwrap()
    }

    #[test]
    fn principal_ideal() {
        let g = groebner(&vs(), &[p("x")], MonomialOrder::lex(2)).unwrap();
        assert_eq!(g.basis(), &[p("x")]);
        assert!(g.normal_form(&p("x^3*y + x")).unwrap().is_zero());
    }

    #[test]
    fn textbook_lex_basis() {
        let g = groebner(&vs(), &[p("x^2 - y"), p("y^2 - 1")], MonomialOrder::lex(2)).unwrap();
        assert!(g.basis().contains(&p("y^2 - 1")));
        assert!(g.basis().contains(&p("x^2 - y")));
        assert_eq!(g.basis().len(), 2);
        assert!(g.check_buchberger_criterion());
        assert!(g.is_autoreduced());
    }

    #[test]
    fn unit_and_zero_ideals() {
        let g = groebner(&vs(), &[p("x"), p("x - 1")], MonomialOrder::lex(2)).unwrap();
        assert!(g.is_unit_ideal());
        let z = groebner(&vs(), &[], MonomialOrder::lex(2)).unwrap();
        assert!(z.is_zero_ideal());
        assert_eq!(z.normal_form(&p("x + y")).unwrap(), p("x + y"));
    }

    #[test]
    fn nested_chain_is_growing() {
        let a = groebner(&vs(), &[p("x")], MonomialOrder::degrevlex(2)).unwrap();
        let b = groebner(&vs(), &[p("x"), p("y")], MonomialOrder::degrevlex(2)).unwrap();
        let r = chain_stabilization(&[&a, &b], &[1, 2]).unwrap();
        assert_eq!(r.first_stable, None);
        let r = chain_stabilization(&[&a, &a.clone(), &b], &[1, 2, 3]).unwrap();
        assert_eq!(r.first_stable, Some(1));
    }
}
