use num_traits::ToPrimitive;
use serde::Serialize;

use super::SymbolAlgebra;
use crate::error::{Error, Result};
use crate::lattice::{Lattice, QuotientStructure};
use crate::laurent::{Tower, TowerElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RamificationFlags {
    pub is_defectless: bool,
    pub is_totally_ramified: bool,
    pub is_semiramified: bool,
    pub is_tame: bool,
    pub is_inertial: bool,
}

/// Valuation-theoretic invariants of a symbol algebra.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RamificationReport {
    pub dimension: u64,
    pub degree: u64,
    pub value_group: Lattice,
    pub quotient: QuotientStructure,
    pub index: u64,
    pub residue_degree: u64,
    pub defect: u64,
    pub flags: RamificationFlags,
    /// `None` when no implemented criterion decides the question.
    pub is_division: Option<bool>,
}

impl RamificationReport {
    /// Human-readable ramification class.
    pub fn class_name(&self) -> String {
        let f = &self.flags;
        let shape = if self.degree == 1 {
            "trivial"
        } else if f.is_totally_ramified {
            "totally ramified"
        } else if f.is_semiramified {
            "semiramified"
        } else if f.is_inertial {
            "inertial"
        } else {
            "mixed"
        };
        if f.is_tame {
            format!("tame {shape}")
        } else {
            shape.to_string()
        }
    }

    /// `[D̄:F̄]·|Γ_D:Γ_F|`, the dimension of the associated graded algebra
    /// over the graded base.
    pub fn graded_dimension(&self) -> u64 {
        self.residue_degree * self.index
    }

    fn check(&self) -> Result<()> {
        if self.dimension != self.defect * self.residue_degree * self.index {
            return Err(Error::Inconsistent("[D:F] ≠ defect·[D̄:F̄]·|Γ_D:Γ_F|".into()));
        }
        if self.graded_dimension() > self.dimension {
            return Err(Error::Inconsistent("fundamental inequality violated".into()));
        }
        if self.flags.is_totally_ramified && (self.residue_degree != 1 || self.defect != 1) {
            return Err(Error::Inconsistent("totally ramified with nontrivial residue or defect".into()));
        }
        if self.degree > 1 && self.flags.is_totally_ramified && self.flags.is_semiramified {
            return Err(Error::Inconsistent("both totally ramified and semiramified".into()));
        }
        Ok(())
    }
}

fn is_unit(tower: &Tower, x: &TowerElement) -> Result<bool> {
    Ok(tower.valuation(x)?.is_some_and(|v| v.iter().all(|&e| e == 0)))
}

fn has_odd_coordinate(tower: &Tower, x: &TowerElement) -> Result<bool> {
    Ok(tower.valuation(x)?.is_some_and(|v| v.iter().any(|e| e % 2 != 0)))
}

/// `(u, t)` over a Henselian tower with `u` a unit and `v(t) ∉ 2Γ_F` is a
/// division algebra exactly when `u` is not a square.
pub fn quaternion_is_division(tower: &Tower, u: &TowerElement, t: &TowerElement) -> Result<bool> {
    if tower.base().characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    if !is_unit(tower, u)? {
        return Err(Error::NotAUnit);
    }
    if !has_odd_coordinate(tower, t)? {
        return Err(Error::InvalidInput(format!("v({t}) lies in 2Γ_F")));
    }
    Ok(!tower.unit_is_square(u)?)
}

fn division_status(alg: &SymbolAlgebra, totally_ramified: bool) -> Result<Option<bool>> {
    if alg.degree() == 1 || totally_ramified {
        return Ok(Some(true));
    }
    if alg.degree() == 2 {
        let tower = alg.tower();
        for (u, t) in [(alg.a(), alg.b()), (alg.b(), alg.a())] {
            if is_unit(tower, u)? && has_odd_coordinate(tower, t)? {
                return Ok(Some(quaternion_is_division(tower, u, t)?));
            }
        }
    }
    Ok(None)
}

pub(super) fn classify(alg: &SymbolAlgebra) -> Result<RamificationReport> {
    let n = alg.degree() as u64;
    let dimension = n * n;
    let tower = alg.tower();
    let gamma_f = tower.value_group();
    let value_group = if n == 1 { gamma_f.clone() } else { alg.value_group()? };
    let quotient = value_group.quotient(&gamma_f)?;
    let index = quotient
        .order_u64()
        .ok_or_else(|| Error::Inconsistent("index does not fit in 64 bits".into()))?;
    if !dimension.is_multiple_of(index) {
        return Err(Error::Inconsistent(format!("|Γ_D:Γ_F| = {index} does not divide {dimension}")));
    }
    let p = tower.base().characteristic();
    let tame_char = p == 0 || !n.is_multiple_of(p);
    // residue characteristic prime to n forces defect 1
    let defect = 1;
    let residue_degree = dimension / (defect * index);
    let flags = RamificationFlags {
        is_defectless: defect == 1,
        is_totally_ramified: index == dimension,
        is_semiramified: residue_degree == index && index == n,
        is_tame: tame_char && defect == 1,
        is_inertial: index == 1,
    };
    let is_division = division_status(alg, flags.is_totally_ramified)?;
    let report = RamificationReport {
        dimension,
        degree: n,
        value_group,
        index: quotient.order().to_u64().expect("checked above"),
        quotient,
        residue_degree,
        defect,
        flags,
        is_division,
    };
    report.check()?;
    Ok(report)
}
