use super::{Tower, TowerElement};
use crate::error::{Error, Result};
use crate::ring::Ring;

const MAX_NEWTON_STEPS: usize = 64;

impl Tower {
    /// Whether a unit is a square. Over a Henselian field with odd residue
    /// characteristic this is decided by the residue alone.
    pub fn unit_is_square(&self, u: &TowerElement) -> Result<bool> {
        Ok(self.sqrt_unit(u)?.is_some())
    }

    /// A square root of the unit `u`, lifted from a residue square root by
    /// Newton iteration and checked to the certified precision.
    pub fn sqrt_unit(&self, u: &TowerElement) -> Result<Option<TowerElement>> {
        if self.base.characteristic() == 2 {
            return Err(Error::CharacteristicTwo);
        }
        match self.valuation(u)? {
            Some(v) if v.iter().all(|&e| e == 0) => {}
            _ => return Err(Error::NotAUnit),
        }
        let r = self.residue(u)?;
        let Some(s0) = self.base.sqrt(&r)? else {
            return Ok(None);
        };
        let half = TowerElement::Const(self.base.from_i64(2).inv()?);
        let mut s = TowerElement::Const(s0);
        for _ in 0..MAX_NEWTON_STEPS {
            let err = &(&s * &s) - u;
            if err.is_zero() {
                return Ok(Some(s));
            }
            s = &(&s + &(u * &s.inv()?)) * &half;
        }
        Err(Error::PrecisionExhausted)
    }
}
