//! Field profiles: a residue base together with a tower of Laurent
//! variables, enough to compute `r_q` and `cd_q` without field arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{is_prime, Field, FieldKind};
use crate::lattice::Lattice;
use crate::laurent::Tower;

/// A cohomological dimension bound as declared or tabulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CdBound {
    Exactly(u32),
    AtMost(u32),
    Infinite,
}

impl fmt::Display for CdBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CdBound::Exactly(k) => write!(f, "={k}"),
            CdBound::AtMost(k) => write!(f, "<={k}"),
            CdBound::Infinite => write!(f, "=inf"),
        }
    }
}

/// A computed `cd_q(F)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CdValue {
    Finite(u32),
    AtMost(u32),
}

impl fmt::Display for CdValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CdValue::Finite(k) => write!(f, "{k}"),
            CdValue::AtMost(k) => write!(f, "<={k}"),
        }
    }
}

/// User-declared residue invariants: per-prime bounds, an optional bound
/// for every other prime, and the residue characteristic.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DeclaredBase {
    pub entries: BTreeMap<u64, CdBound>,
    pub wildcard: Option<CdBound>,
    pub characteristic: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResidueBase {
    /// A field with exact arithmetic: `F5`, `Q`, `F7[w]/(w^2+w+3)`, ...
    Exact(Field),
    /// The `p`-adic numbers, profile level only.
    PAdic(u64),
    Declared(DeclaredBase),
    /// An algebraically closed field of the given characteristic.
    Closed(u64),
}

impl ResidueBase {
    pub fn characteristic(&self) -> u64 {
        match self {
            ResidueBase::Exact(f) => f.characteristic(),
            ResidueBase::PAdic(_) => 0,
            ResidueBase::Declared(d) => d.characteristic,
            ResidueBase::Closed(p) => *p,
        }
    }

    /// Tabulated `cd_q` of the residue base, `None` when nothing is known.
    pub fn cd_bound(&self, q: u64) -> Option<CdBound> {
        match self {
            ResidueBase::Exact(f) if f.is_finite() => Some(CdBound::Exactly(1)),
            ResidueBase::Exact(f) => match (f.kind(), q) {
                (_, q) if q != 2 => Some(CdBound::Exactly(2)),
                (FieldKind::Rational, _) => Some(CdBound::Infinite),
                _ => None,
            },
            ResidueBase::PAdic(_) => Some(CdBound::Exactly(2)),
            ResidueBase::Declared(d) => d.entries.get(&q).copied().or(d.wildcard),
            ResidueBase::Closed(_) => Some(CdBound::Exactly(0)),
        }
    }
}

impl fmt::Display for ResidueBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidueBase::Exact(k) => write!(f, "{k}"),
            ResidueBase::PAdic(p) => write!(f, "Qp(p={p})"),
            ResidueBase::Closed(p) => write!(f, "closed(char={p})"),
            ResidueBase::Declared(d) => {
                let mut parts: Vec<String> = d.entries.iter().map(|(q, b)| format!("cd{q}{b}")).collect();
                if let Some(w) = d.wildcard {
                    parts.push(format!("cdq{w}"));
                }
                if d.characteristic != 0 {
                    parts.push(format!("char={}", d.characteristic));
                }
                write!(f, "decl({})", parts.join(", "))
            }
        }
    }
}

/// A residue base with `m` Laurent variables on top, innermost first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldProfile {
    base: ResidueBase,
    vars: Vec<String>,
    asserted: BTreeMap<u64, u32>,
}

impl FieldProfile {
    pub fn new(base: ResidueBase, vars: &[&str]) -> Result<Self> {
        let mut seen: Vec<&str> = Vec::new();
        for v in vars {
            if v.is_empty() || seen.contains(v) {
                return Err(Error::InvalidInput(format!("bad or repeated variable '{v}'")));
            }
            seen.push(v);
        }
        if let ResidueBase::Exact(f) = &base {
            if let Some(g) = f.generator_names().iter().find(|g| vars.contains(&g.as_str())) {
                return Err(Error::InvalidInput(format!("'{g}' names both a generator and a variable")));
            }
        }
        Ok(FieldProfile { base, vars: vars.iter().map(|s| s.to_string()).collect(), asserted: BTreeMap::new() })
    }

    pub fn of_tower(tower: &Tower) -> Self {
        FieldProfile::new(ResidueBase::Exact(tower.base().clone()), &tower.vars()).expect("tower variables are distinct")
    }

    pub fn base(&self) -> &ResidueBase {
        &self.base
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Number of Laurent layers `m`.
    pub fn height(&self) -> usize {
        self.vars.len()
    }

    pub fn residue_characteristic(&self) -> u64 {
        self.base.characteristic()
    }

    /// `Γ_F = ℤ^m`.
    pub fn value_group(&self) -> Lattice {
        Lattice::standard(self.height())
    }

    /// The `q`-rank of `Γ_F`.
    pub fn r_q(&self, q: u64) -> Result<usize> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        self.value_group().q_rank(q)
    }

    /// Residue `cd_q` plus one per layer. Undefined when `q` is the
    /// residue characteristic or the residue bound is infinite or unknown.
    pub fn cd_q(&self, q: u64) -> Result<CdValue> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        if q == self.residue_characteristic() {
            return Err(Error::InvalidInput(format!("cd_{q} is undefined: {q} is the residue characteristic")));
        }
        let r = self.r_q(q)? as u32;
        let computed = match self.base.cd_bound(q) {
            Some(CdBound::Exactly(k)) => CdValue::Finite(k + r),
            Some(CdBound::AtMost(k)) => CdValue::AtMost(k + r),
            Some(CdBound::Infinite) => {
                return Err(Error::Unsupported(format!("cd_{q} of the residue field {} is infinite", self.base)))
            }
            None => return Err(Error::InvalidInput(format!("no cd_{q} known or declared for {}", self.base))),
        };
        match (self.asserted.get(&q), computed) {
            (Some(&a), CdValue::AtMost(k)) if a <= k => Ok(CdValue::Finite(a)),
            (Some(&a), CdValue::Finite(k)) if a == k => Ok(computed),
            (Some(&a), _) => Err(Error::Inconsistent(format!("asserted cd_{q} = {a} contradicts computed {computed}"))),
            (None, _) => Ok(computed),
        }
    }

    /// Records an externally known `cd_q(F) = value`; it must be compatible
    /// with the computed bound.
    pub fn with_asserted_cd(&self, q: u64, value: u32) -> Result<Self> {
        let mut p = self.clone();
        p.asserted.insert(q, value);
        p.cd_q(q)?;
        Ok(p)
    }

    pub fn asserted_cd(&self, q: u64) -> Option<u32> {
        self.asserted.get(&q).copied()
    }

    /// The tower over an exact base.
    pub fn tower(&self, precision: usize) -> Result<Tower> {
        match &self.base {
            ResidueBase::Exact(f) => {
                let vars: Vec<&str> = self.vars.iter().map(|s| s.as_str()).collect();
                Tower::new(f, &vars, precision)
            }
            other => Err(Error::Unsupported(format!("no exact arithmetic over {other}"))),
        }
    }
}

impl fmt::Display for FieldProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        for v in &self.vars {
            write!(f, "(({v}))")?;
        }
        Ok(())
    }
}
