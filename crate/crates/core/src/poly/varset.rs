use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::rat::Rat;

#[derive(PartialEq, Eq, Hash)]
struct Inner {
    names: Vec<String>,
    /// `Some(q)` marks an adjoined square root: `v^2` is rewritten to `q`.
    sqrt_rules: Vec<Option<Rat>>,
}

/// An ordered list of distinct variable names shared by every polynomial
/// built over it.
///
/// A variable may carry a square-root rule `v^2 -> q`, which turns the
/// polynomial ring into `Q[..][v]/(v^2 - q)`; this is how irrational
/// constants such as `sqrt(145)` stay exact.
#[derive(Clone)]
pub struct VarSet(Arc<Inner>);

impl VarSet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            if !is_identifier(n) {
                return Err(Error::usage(alloc::format!("invalid variable name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(Error::usage(alloc::format!("duplicate variable `{n}`")));
            }
        }
        let sqrt_rules = alloc::vec![None; names.len()];
        Ok(VarSet(Arc::new(Inner { names, sqrt_rules })))
    }

    /// Same variables, with `name^2 -> square` imposed.
    pub fn with_sqrt_rule(&self, name: &str, square: Rat) -> Result<Self> {
        let idx = self.require(name)?;
        let mut inner = Inner {
            names: self.0.names.clone(),
            sqrt_rules: self.0.sqrt_rules.clone(),
        };
        inner.sqrt_rules[idx] = Some(square);
        Ok(VarSet(Arc::new(inner)))
    }

    /// Appends variables (which must be new) at the end.
    pub fn extended<S: AsRef<str>>(&self, more: &[S]) -> Result<Self> {
        let mut names = self.0.names.clone();
        names.extend(more.iter().map(|s| s.as_ref().to_string()));
        let base = VarSet::new(&names)?;
        let mut inner = Inner {
            names,
            sqrt_rules: base.0.sqrt_rules.clone(),
        };
        inner.sqrt_rules[..self.len()].clone_from_slice(&self.0.sqrt_rules);
        Ok(VarSet(Arc::new(inner)))
    }

    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.names.iter().position(|n| n == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::usage(alloc::format!("unknown variable `{name}`")))
    }

    pub fn sqrt_rule(&self, i: usize) -> Option<&Rat> {
        self.0.sqrt_rules[i].as_ref()
    }

    pub fn has_rules(&self) -> bool {
        self.0.sqrt_rules.iter().any(Option::is_some)
    }

    pub(crate) fn same(&self, other: &VarSet) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl PartialEq for VarSet {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for VarSet {}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.names.iter()).finish()
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
