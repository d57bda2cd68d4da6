use alloc::vec::Vec;
use core::cmp::Ordering;

/// Exponent vector aligned with a [`VarSet`](super::VarSet).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(alloc::vec![0; nvars])
    }

    pub fn from_exps(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    /// `x_i^e` in `nvars` variables.
    pub fn var(nvars: usize, i: usize, e: u32) -> Self {
        let mut m = Monomial::one(nvars);
        m.0[i] = e;
        m
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self / other`, assuming `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        debug_assert!(other.divides(self));
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub(crate) fn exps_mut(&mut self) -> &mut Vec<u32> {
        &mut self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Lex,
    DegRevLex,
}

/// A monomial order: `precedence[0]` is the most significant variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    kind: OrderKind,
    precedence: Vec<usize>,
}

impl MonomialOrder {
    /// Panics unless `precedence` is a permutation of `0..n`.
    pub fn new(kind: OrderKind, precedence: Vec<usize>) -> Self {
        let mut seen = alloc::vec![false; precedence.len()];
        for &p in &precedence {
            assert!(p < seen.len() && !seen[p], "precedence must be a permutation");
            seen[p] = true;
        }
        MonomialOrder { kind, precedence }
    }

    /// Lex with the first variable of the set largest (`x > y > z`).
    pub fn lex(nvars: usize) -> Self {
        Self::new(OrderKind::Lex, (0..nvars).collect())
    }

    /// Degrevlex with the first variable largest.
    pub fn degrevlex(nvars: usize) -> Self {
        Self::new(OrderKind::DegRevLex, (0..nvars).collect())
    }

    /// Degrevlex with variables listed in ascending size: the last variable
    /// of the set is the largest. This is the canonical order.
    pub fn degrevlex_ascending(nvars: usize) -> Self {
        Self::new(OrderKind::DegRevLex, (0..nvars).rev().collect())
    }

    pub fn lex_ascending(nvars: usize) -> Self {
        Self::new(OrderKind::Lex, (0..nvars).rev().collect())
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn precedence(&self) -> &[usize] {
        &self.precedence
    }

    pub fn nvars(&self) -> usize {
        self.precedence.len()
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.kind {
            OrderKind::Lex => {
                for &v in &self.precedence {
                    match a.0[v].cmp(&b.0[v]) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            OrderKind::DegRevLex => {
                match a.degree().cmp(&b.degree()) {
                    Ordering::Equal => {}
                    o => return o,
                }
                for &v in self.precedence.iter().rev() {
                    match a.0[v].cmp(&b.0[v]) {
                        Ordering::Equal => continue,
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }
        }
    }

    /// A key whose lexicographic order agrees with this monomial order.
    pub(crate) fn sort_key(&self, m: &Monomial) -> Vec<u32> {
        match self.kind {
            OrderKind::Lex => self.precedence.iter().map(|&v| m.0[v]).collect(),
            OrderKind::DegRevLex => {
                let mut k = Vec::with_capacity(self.precedence.len() + 1);
                k.push(m.degree());
                k.extend(self.precedence.iter().rev().map(|&v| u32::MAX - m.0[v]));
                k
            }
        }
    }
}

/// The canonical printing and storage order: degrevlex, last variable largest.
pub(crate) fn canonical_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    match a.degree().cmp(&b.degree()) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.0.iter().zip(&b.0) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}
