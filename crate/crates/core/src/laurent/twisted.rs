//! Twisted Laurent series `E((t, σ))` over a commutative coefficient field
//! `E` with multiplication `t·d = σ(d)·t`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::fields::{Field, FieldElement, FieldKind};
use crate::ring::Ring;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Twist {
    Identity,
    /// `x ↦ x^p` on a finite field.
    Frobenius,
    /// The nontrivial automorphism of a quadratic extension.
    Conjugation,
}

#[derive(Debug)]
struct RingData {
    field: Field,
    twist: Twist,
    order: usize,
    precision: usize,
}

/// The ring `E((t, σ))`.
#[derive(Debug, Clone)]
pub struct TwistedRing(Arc<RingData>);

impl PartialEq for TwistedRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.field == other.0.field && self.0.twist == other.0.twist)
    }
}

#[derive(Debug, Clone)]
pub struct TwistedSeries {
    ring: TwistedRing,
    val: i64,
    coeffs: Vec<FieldElement>,
    prec: Option<i64>,
}

impl PartialEq for TwistedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.val == other.val && self.coeffs == other.coeffs && self.prec == other.prec
    }
}

impl TwistedRing {
    pub fn new(field: &Field, twist: Twist, precision: usize) -> Result<Self> {
        let order = match twist {
            Twist::Identity => 1,
            Twist::Frobenius => {
                if !field.is_finite() {
                    return Err(Error::Unsupported(format!("Frobenius on {field}")));
                }
                field.absolute_degree()
            }
            Twist::Conjugation => {
                if field.relative_degree() != 2 {
                    return Err(Error::Unsupported(format!("conjugation on {field}")));
                }
                2
            }
        };
        if precision == 0 {
            return Err(Error::InvalidInput("precision must be positive".into()));
        }
        Ok(TwistedRing(Arc::new(RingData { field: field.clone(), twist, order, precision })))
    }

    pub fn field(&self) -> &Field {
        &self.0.field
    }

    pub fn twist(&self) -> Twist {
        self.0.twist
    }

    /// Order of σ.
    pub fn order(&self) -> usize {
        self.0.order
    }

    /// `σ^k(x)` for any integer `k`.
    pub fn sigma_pow(&self, x: &FieldElement, k: i64) -> FieldElement {
        let m = self.0.order as i64;
        let k = k.rem_euclid(m);
        let mut y = x.clone();
        for _ in 0..k {
            y = match self.0.twist {
                Twist::Identity => y,
                Twist::Frobenius => self.0.field.frobenius(&y).expect("finite field"),
                Twist::Conjugation => self.0.field.quadratic_conjugate(&y).expect("quadratic field"),
            };
        }
        y
    }

    fn build(&self, mut val: i64, mut coeffs: Vec<FieldElement>, prec: Option<i64>) -> TwistedSeries {
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        coeffs.drain(..lead);
        val += lead as i64;
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if let Some(p) = prec {
            coeffs.truncate((p - val).max(0) as usize);
            if coeffs.is_empty() {
                val = p;
            }
        } else if coeffs.is_empty() {
            val = 0;
        }
        TwistedSeries { ring: self.clone(), val, coeffs, prec }
    }

    pub fn zero(&self) -> TwistedSeries {
        self.build(0, Vec::new(), None)
    }

    pub fn one(&self) -> TwistedSeries {
        self.constant(&self.0.field.one())
    }

    pub fn constant(&self, d: &FieldElement) -> TwistedSeries {
        self.monomial(d, 0)
    }

    /// `d·t^k`
    pub fn monomial(&self, d: &FieldElement, k: i64) -> TwistedSeries {
        self.build(k, vec![d.clone()], None)
    }

    pub fn t(&self) -> TwistedSeries {
        self.monomial(&self.0.field.one(), 1)
    }

    pub fn big_o(&self, k: i64) -> TwistedSeries {
        self.build(k, Vec::new(), Some(k))
    }

    pub fn from_coeffs(&self, start: i64, coeffs: Vec<FieldElement>, prec: Option<i64>) -> TwistedSeries {
        self.build(start, coeffs, prec)
    }

    /// `x = a·t^m`, which commutes with everything when `σ^m = id` and
    /// `σ(a) = a`.
    pub fn central_indeterminate(&self, a: &FieldElement, m: usize) -> Result<TwistedSeries> {
        if m == 0 || !m.is_multiple_of(self.0.order) {
            return Err(Error::InvalidInput(format!("σ^{m} is not the identity")));
        }
        if a.is_zero() || self.sigma_pow(a, 1) != *a {
            return Err(Error::InvalidInput(format!("{a} is not a nonzero fixed element")));
        }
        Ok(self.monomial(a, m as i64))
    }

    /// `d·z·d⁻¹`
    pub fn conjugate(&self, d: &TwistedSeries, z: &TwistedSeries) -> Result<TwistedSeries> {
        d.mul(z)?.mul(&d.inv()?)
    }

    /// Residue of `t^γ·x·t^{-γ}`: the canonical homomorphism evaluated at the
    /// value `γ` on the residue element `x`.
    pub fn theta(&self, gamma: i64, x: &FieldElement) -> Result<FieldElement> {
        let tg = self.monomial(&self.0.field.one(), gamma);
        let c = self.conjugate(&tg, &self.constant(x))?;
        c.residue()
    }

    /// Basis element `w^j·t^r` where `w` generates `E` over its base.
    pub fn basis_element(&self, j: usize, r: usize) -> Result<TwistedSeries> {
        let w = self.0.field.generator()?;
        Ok(self.monomial(&w.pow(j as u64), r as i64))
    }

    fn check_cyclic_layout(&self) -> Result<(Field, usize)> {
        let f = &self.0.field;
        let FieldKind::Extension { base, .. } = f.kind() else {
            return Err(Error::Unsupported(format!("{f} is not an extension")));
        };
        let d = f.relative_degree();
        let fixed_is_base = match self.0.twist {
            Twist::Conjugation => true,
            Twist::Frobenius => base.depth() == 0,
            Twist::Identity => false,
        };
        if !fixed_is_base || d != self.0.order {
            return Err(Error::Unsupported(format!("{f} with {:?} is not a cyclic layout", self.0.twist)));
        }
        Ok((base.clone(), d))
    }

    /// Coordinates of `z` on the basis `{w^j t^r : j < d, r < m}` (ordered
    /// `j + d·r`) with coefficients in the central subring `K((t^m))`, where
    /// `K` is the fixed field of σ. Coefficients are returned as series with
    /// constant coefficients in `K ⊂ E`.
    pub fn decompose_over_center(&self, z: &TwistedSeries) -> Result<Vec<TwistedSeries>> {
        let (_, d) = self.check_cyclic_layout()?;
        let m = self.0.order as i64;
        let mut parts: Vec<Vec<(i64, FieldElement)>> = vec![Vec::new(); d * m as usize];
        for (i, c) in z.coeffs.iter().enumerate() {
            let e = z.val + i as i64;
            let r = e.rem_euclid(m);
            let comps = c.coefficients().expect("extension element");
            for (j, a) in comps.iter().enumerate() {
                if !a.is_zero() {
                    let a = self.0.field.embed(a)?;
                    parts[j + d * r as usize].push((e - r, a));
                }
            }
        }
        Ok(parts
            .into_iter()
            .enumerate()
            .map(|(idx, terms)| {
                let r = (idx / d) as i64;
                let mut s = self.zero();
                for (e, a) in terms {
                    s = s.add(&self.monomial(&a, e)).expect("same ring");
                }
                if let Some(p) = z.prec {
                    // coordinate r collects exponents e with e − r < p − r
                    let cut = p - r;
                    let cut = cut + (m - cut.rem_euclid(m)) % m;
                    s = s.add(&self.big_o(cut)).expect("same ring");
                }
                s
            })
            .collect())
    }

    /// `Σ c_{j,r}·w^j t^r`, the inverse of [`decompose_over_center`](Self::decompose_over_center).
    pub fn recombine(&self, coords: &[TwistedSeries]) -> Result<TwistedSeries> {
        let (_, d) = self.check_cyclic_layout()?;
        if coords.len() != d * self.0.order {
            return Err(Error::InvalidInput("wrong number of coordinates".into()));
        }
        let mut z = self.zero();
        for (idx, c) in coords.iter().enumerate() {
            z = z.add(&c.mul(&self.basis_element(idx % d, idx / d)?)?)?;
        }
        Ok(z)
    }

    /// Random element with up to `terms` monomials, exponents in
    /// `[-spread, spread]`.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R, terms: usize, spread: i64) -> TwistedSeries {
        let mut z = self.zero();
        for _ in 0..terms {
            let m = self.monomial(&self.0.field.random(rng), rng.gen_range(-spread..=spread));
            z = z.add(&m).expect("same ring");
        }
        z
    }
}

impl TwistedSeries {
    pub fn ring(&self) -> &TwistedRing {
        &self.ring
    }

    pub fn start(&self) -> i64 {
        self.val
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn abs_precision(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    fn rel(&self) -> Option<i64> {
        self.prec.map(|p| p - self.val)
    }

    /// `v_t(z) = min supp(z)`; `None` for exact zero.
    pub fn valuation(&self) -> Result<Option<i64>> {
        match (self.coeffs.is_empty(), self.prec) {
            (false, _) => Ok(Some(self.val)),
            (true, None) => Ok(None),
            (true, Some(_)) => Err(Error::PrecisionExhausted),
        }
    }

    /// Coefficient of `t^0` of an element with `v_t ≥ 0`.
    pub fn residue(&self) -> Result<FieldElement> {
        let zero = self.ring.0.field.zero();
        if self.coeffs.is_empty() {
            return match self.prec {
                Some(p) if p <= 0 => Err(Error::PrecisionExhausted),
                _ => Ok(zero),
            };
        }
        if self.val < 0 {
            return Err(Error::NegativeValuation);
        }
        Ok(if self.val == 0 { self.coeffs[0].clone() } else { zero })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if other.coeffs.is_empty() && other.prec.is_none() {
            return Ok(self.clone());
        }
        if self.coeffs.is_empty() && self.prec.is_none() {
            return Ok(other.clone());
        }
        let f = &self.ring.0.field;
        let prec = match (self.prec, other.prec) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, None) => a,
            (None, b) => b,
        };
        let lo = self.val.min(other.val);
        let mut hi = (self.val + self.coeffs.len() as i64).max(other.val + other.coeffs.len() as i64);
        if let Some(p) = prec {
            hi = hi.min(p);
        }
        let get = |s: &Self, e: i64| -> FieldElement {
            if e < s.val {
                return f.zero();
            }
            s.coeffs.get((e - s.val) as usize).cloned().unwrap_or_else(|| f.zero())
        };
        let coeffs = (lo..hi).map(|e| &get(self, e) + &get(other, e)).collect();
        Ok(self.ring.build(lo, coeffs, prec))
    }

    pub fn neg(&self) -> Self {
        self.ring.build(self.val, self.coeffs.iter().map(|c| -c).collect(), self.prec)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// `(Σ a_i t^i)(Σ b_j t^j) = Σ a_i σ^i(b_j) t^{i+j}`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let f = &self.ring.0.field;
        let val = self.val + other.val;
        let rel = match (self.rel(), other.rel()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, None) => a,
            (None, b) => b,
        };
        if (self.coeffs.is_empty() && self.prec.is_none()) || (other.coeffs.is_empty() && other.prec.is_none()) {
            return Ok(self.ring.zero());
        }
        let full = (self.coeffs.len() + other.coeffs.len()).saturating_sub(1);
        let len = rel.map_or(full, |r| full.min(r.max(0) as usize));
        let mut out = vec![f.zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            let shift = self.val + i as i64;
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = &out[i + j] + &(a * &self.ring.sigma_pow(b, shift));
            }
        }
        Ok(self.ring.build(val, out, rel.map(|r| val + r)))
    }

    /// Two-sided inverse, exact for monomials.
    pub fn inv(&self) -> Result<Self> {
        let a0 = self.coeffs.first().ok_or(if self.prec.is_some() {
            Error::PrecisionExhausted
        } else {
            Error::DivisionByZero
        })?;
        let ring = &self.ring;
        let v = self.val;
        let a0inv = a0.inv()?;
        if self.prec.is_none() && self.coeffs.len() == 1 {
            return Ok(ring.build(-v, vec![ring.sigma_pow(&a0inv, -v)], None));
        }
        let wp = ring.0.precision as i64;
        let r = self.rel().map_or(wp, |r| r.min(wp)).max(0) as usize;
        let f = &ring.0.field;
        let mut b: Vec<FieldElement> = Vec::with_capacity(r);
        if r > 0 {
            b.push(ring.sigma_pow(&a0inv, -v));
        }
        for k in 1..r {
            let mut acc = f.zero();
            for i in 1..=k.min(self.coeffs.len() - 1) {
                acc = &acc + &(&self.coeffs[i] * &ring.sigma_pow(&b[k - i], v + i as i64));
            }
            b.push(ring.sigma_pow(&-(&a0inv * &acc), -v));
        }
        Ok(ring.build(-v, b, Some(-v + r as i64)))
    }

    pub fn pow(&self, e: u64) -> Result<Self> {
        let mut acc = self.ring.one();
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `z·w = w·z` to the certified precision.
    pub fn commutes_with(&self, other: &Self) -> Result<bool> {
        Ok(self.mul(other)?.sub(&other.mul(self)?)?.is_zero())
    }

    /// Membership in the center `K((t^m))`: every exponent is a multiple of
    /// the order of σ and every coefficient is fixed by σ.
    pub fn is_central(&self) -> bool {
        let m = self.ring.0.order as i64;
        self.coeffs.iter().enumerate().all(|(i, c)| {
            c.is_zero() || ((self.val + i as i64).rem_euclid(m) == 0 && self.ring.sigma_pow(c, 1) == *c)
        })
    }
}

impl fmt::Display for TwistedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = self.val + i as i64;
            let mono = match k {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{k}"),
            };
            terms.push(match (mono.is_empty(), c.is_one()) {
                (true, _) => c.to_string(),
                (false, true) => mono,
                (false, false) => format!("{}*{mono}", c.display_atomic()),
            });
        }
        if let Some(p) = self.prec {
            terms.push(format!("O(t^{p})"));
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", terms.join(" + "))
    }
}
