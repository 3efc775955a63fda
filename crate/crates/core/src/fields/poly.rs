use std::fmt;

use num_traits::Signed;

use super::{Field, FieldElement, FieldKind, ENUMERATION_LIMIT};
use crate::error::{Error, Result};
use crate::ring::Ring;

/// Dense univariate polynomial over a [`Field`], lowest degree first, with no
/// trailing zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Field) -> Self {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn constant(c: FieldElement) -> Self {
        let f = c.field().clone();
        Poly::new(&f, vec![c])
    }

    /// `X - c`
    pub fn linear(c: &FieldElement) -> Self {
        let f = c.field().clone();
        Poly::new(&f, vec![-c, f.one()])
    }

    pub fn monomial(field: &Field, degree: usize) -> Self {
        let mut c = vec![field.zero(); degree + 1];
        c[degree] = field.one();
        Poly { field: field.clone(), coeffs: c }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> FieldElement {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        Poly::new(&self.field, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn monic(&self) -> Result<Self> {
        Ok(self.scale(&self.leading().inv()?))
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &self.field.from_i64(i as i64))
            .collect();
        Poly::new(&self.field, c)
    }

    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = d.leading().inv()?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(&self.field), self.clone()));
        }
        let mut q = vec![self.field.zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = &r[k] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (i, m) in d.coeffs.iter().enumerate() {
                r[k - dd + i] = &r[k - dd + i] - &(&c * m);
            }
            q[k - dd] = c;
        }
        r.truncate(dd);
        Ok((Poly::new(&self.field, q), Poly::new(&self.field, r)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.divrem(d)?.1)
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        let (mut a, mut b) = (self.clone(), other.clone());
        while b.degree().is_some() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        if a.degree().is_none() {
            return Ok(a);
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·self + t·other = g`, `g` not normalized.
    pub fn ext_gcd(&self, other: &Poly) -> Result<(Poly, Poly, Poly)> {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::constant(f.one()), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::constant(f.one()));
        while r1.degree().is_some() {
            let (q, r) = r0.divrem(&r1)?;
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s);
            (t0, t1) = (t1, t);
        }
        Ok((r0, s0, t0))
    }

    /// Irreducibility over a finite base by exhaustive search: roots up to
    /// degree 3, roots and quadratic factors at degree 4. Higher degrees are
    /// trusted with a warning.
    pub fn is_irreducible_small(&self) -> Result<bool> {
        let deg = self.degree().ok_or(Error::DivisionByZero)?;
        if deg <= 1 {
            return Ok(true);
        }
        if deg > 4 {
            log::warn!("irreducibility of degree-{deg} modulus {self} is assumed, not checked");
            return Ok(true);
        }
        let size = self.field.size().unwrap_or(u128::MAX);
        if size > ENUMERATION_LIMIT {
            log::warn!("base field too large to check irreducibility of {self}");
            return Ok(true);
        }
        let elems = self.field.elements()?;
        if elems.iter().any(|x| self.eval(x).is_zero()) {
            return Ok(false);
        }
        if deg == 4 {
            if size * size > 1_000_000 {
                log::warn!("quadratic-factor search skipped for {self}");
                return Ok(true);
            }
            for c1 in &elems {
                for c0 in &elems {
                    let q = Poly::new(&self.field, vec![c0.clone(), c1.clone(), self.field.one()]);
                    if self.rem(&q)?.degree().is_none() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Printed with `var` as the indeterminate, highest degree first, e.g.
    /// `w^2+w+3` or `z^2-1/2`.
    pub fn display_in(&self, var: &str) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = match (c.field().kind(), c.as_rational()) {
                (FieldKind::Rational, Some(q)) if q.is_negative() => (true, -c),
                _ => (false, c.clone()),
            };
            let body = match k {
                0 => mag.to_string(),
                _ => {
                    let pw = if k == 1 { var.to_string() } else { format!("{var}^{k}") };
                    if mag.is_one() {
                        pw
                    } else {
                        format!("{}*{pw}", mag.display_atomic())
                    }
                }
            };
            if neg {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            out.push_str(&body);
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("X"))
    }
}

impl Ring for Poly {
    fn zero_like(&self) -> Self {
        Poly::zero(&self.field)
    }
    fn one_like(&self) -> Self {
        Poly::constant(self.field.one())
    }
    fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let z = self.field.zero();
        let c = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&z) + rhs.coeffs.get(i).unwrap_or(&z))
            .collect();
        Poly::new(&self.field, c)
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Poly::zero(&self.field);
        }
        let mut c = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            for (j, y) in rhs.coeffs.iter().enumerate() {
                c[i + j] = &c[i + j] + &(x * y);
            }
        }
        Poly::new(&self.field, c)
    }
    fn neg(&self) -> Self {
        Poly::new(&self.field, self.coeffs.iter().map(|x| -x).collect())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// The `n`-th cyclotomic polynomial over ℚ.
pub fn cyclotomic(n: u64) -> Result<Poly> {
    if n == 0 {
        return Err(Error::InvalidInput("cyclotomic index 0".into()));
    }
    let q = Field::rational();
    let mut p = Poly::monomial(&q, n as usize).sub(&Poly::constant(q.one()));
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        p = p.divrem(&cyclotomic(d)?)?.0;
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_of_x2_minus_1_and_x_minus_1() {
        let q = Field::rational();
        let a = Poly::new(&q, vec![q.from_i64(-1), q.zero(), q.one()]);
        let b = Poly::new(&q, vec![q.from_i64(-1), q.one()]);
        assert_eq!(a.gcd(&b).unwrap(), b);
    }

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic(4).unwrap().display_in("X"), "X^2+1");
        assert_eq!(cyclotomic(3).unwrap().display_in("X"), "X^2+X+1");
        assert_eq!(cyclotomic(8).unwrap().display_in("X"), "X^4+1");
        assert_eq!(cyclotomic(1).unwrap().display_in("X"), "X-1");
    }

    #[test]
    fn ext_gcd_identity() {
        let f7 = Field::prime(7).unwrap();
        let a = Poly::new(&f7, vec![f7.from_i64(3), f7.from_i64(2), f7.one()]);
        let b = Poly::new(&f7, vec![f7.from_i64(1), f7.one()]);
        let (g, s, t) = a.ext_gcd(&b).unwrap();
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }
}
