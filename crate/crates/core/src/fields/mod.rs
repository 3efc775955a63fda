//! Exact coefficient fields: ℚ, prime fields 𝔽_p and simple extensions
//! `K[w]/(f)` stacked at most two deep.

mod poly;
mod roots;

pub use poly::{cyclotomic, Poly};
pub use roots::{has_exact_order, primitive_root_of_unity};

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ring::{DivisionRing, Ring};

/// Largest field size we are willing to enumerate element by element.
pub const ENUMERATION_LIMIT: u128 = 10_000;

#[derive(Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rational,
    Prime(u64),
    Extension {
        base: Field,
        /// Monic modulus over `base`, lowest degree first.
        modulus: Vec<FieldElement>,
        var: String,
    },
}

/// Shared handle on a field descriptor.
#[derive(Clone, Debug)]
pub struct Field(Arc<FieldKind>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}
impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p prime, a nonzero mod p
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p as i128) as u64
}

impl Field {
    pub fn rational() -> Self {
        Field(Arc::new(FieldKind::Rational))
    }

    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field(Arc::new(FieldKind::Prime(p))))
    }

    /// `base[var]/(modulus)`. The modulus must be monic of degree ≥ 1; over
    /// finite bases of small degree it is checked for irreducibility, over ℚ
    /// irreducibility is trusted.
    pub fn extension(base: &Field, modulus: &Poly, var: &str) -> Result<Self> {
        if modulus.field() != base {
            return Err(Error::FieldMismatch);
        }
        if base.depth() >= 2 {
            return Err(Error::Unsupported("extension towers deeper than 2".into()));
        }
        let deg = modulus
            .degree()
            .ok_or_else(|| Error::InvalidInput("zero modulus".into()))?;
        if deg == 0 {
            return Err(Error::InvalidInput("modulus must have degree at least 1".into()));
        }
        if !modulus.leading().is_one() {
            return Err(Error::InvalidInput("modulus must be monic".into()));
        }
        if var.is_empty() || base.generator_names().iter().any(|n| n == var) {
            return Err(Error::InvalidInput(format!("bad generator name '{var}'")));
        }
        if base.is_finite() {
            if !modulus.is_irreducible_small()? {
                return Err(Error::InvalidInput(format!("modulus {modulus} is reducible")));
            }
        } else if deg > 1 {
            log::warn!("irreducibility of {modulus} over {base} is assumed, not checked");
        }
        Ok(Field(Arc::new(FieldKind::Extension {
            base: base.clone(),
            modulus: modulus.coeffs().to_vec(),
            var: var.to_string(),
        })))
    }

    pub fn kind(&self) -> &FieldKind {
        &self.0
    }

    pub fn depth(&self) -> usize {
        match &*self.0 {
            FieldKind::Extension { base, .. } => base.depth() + 1,
            _ => 0,
        }
    }

    pub fn generator_names(&self) -> Vec<String> {
        match &*self.0 {
            FieldKind::Extension { base, var, .. } => {
                let mut v = base.generator_names();
                v.push(var.clone());
                v
            }
            _ => Vec::new(),
        }
    }

    pub fn prime_field(&self) -> Field {
        match &*self.0 {
            FieldKind::Extension { base, .. } => base.prime_field(),
            _ => self.clone(),
        }
    }

    pub fn characteristic(&self) -> u64 {
        match &*self.0 {
            FieldKind::Rational => 0,
            FieldKind::Prime(p) => *p,
            FieldKind::Extension { base, .. } => base.characteristic(),
        }
    }

    /// Degree of the extension over its immediate base (1 for prime fields).
    pub fn relative_degree(&self) -> usize {
        match &*self.0 {
            FieldKind::Extension { modulus, .. } => modulus.len() - 1,
            _ => 1,
        }
    }

    /// Degree over the prime field.
    pub fn absolute_degree(&self) -> usize {
        match &*self.0 {
            FieldKind::Extension { base, .. } => base.absolute_degree() * self.relative_degree(),
            _ => 1,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.characteristic() != 0
    }

    /// Number of elements of a finite field, if it fits in `u128`.
    pub fn size(&self) -> Option<u128> {
        let p = self.characteristic();
        if p == 0 {
            return None;
        }
        (p as u128).checked_pow(self.absolute_degree() as u32)
    }

    pub fn zero(&self) -> FieldElement {
        let repr = match &*self.0 {
            FieldKind::Rational => Repr::Rat(BigRational::zero()),
            FieldKind::Prime(_) => Repr::Fp(0),
            FieldKind::Extension { base, .. } => {
                Repr::Ext(vec![base.zero(); self.relative_degree()])
            }
        };
        FieldElement { field: self.clone(), repr }
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        let repr = match &*self.0 {
            FieldKind::Rational => Repr::Rat(BigRational::from_integer(n.into())),
            FieldKind::Prime(p) => Repr::Fp(n.rem_euclid(*p as i64) as u64),
            FieldKind::Extension { base, .. } => {
                let mut c = vec![base.zero(); self.relative_degree()];
                c[0] = base.from_i64(n);
                Repr::Ext(c)
            }
        };
        FieldElement { field: self.clone(), repr }
    }

    /// Embeds a rational number; fails in positive characteristic when the
    /// denominator vanishes.
    pub fn from_rational(&self, q: &BigRational) -> Result<FieldElement> {
        match &*self.0 {
            FieldKind::Rational => Ok(FieldElement { field: self.clone(), repr: Repr::Rat(q.clone()) }),
            FieldKind::Prime(p) => {
                let p = BigInt::from(*p);
                let residue = |n: &BigInt| -> i64 { ((n % &p + &p) % &p).to_i64().expect("residue fits") };
                let num = self.from_i64(residue(q.numer()));
                let den = self.from_i64(residue(q.denom()));
                Ok(&num * &den.inv()?)
            }
            FieldKind::Extension { base, .. } => self.embed(&base.from_rational(q)?),
        }
    }

    /// The adjoined generator of an extension.
    pub fn generator(&self) -> Result<FieldElement> {
        match &*self.0 {
            FieldKind::Extension { base, .. } => {
                let d = self.relative_degree();
                let mut c = vec![base.zero(); d];
                if d == 1 {
                    // degree-one modulus w + c0: the generator is -c0
                    let FieldKind::Extension { modulus, .. } = &*self.0 else { unreachable!() };
                    c[0] = -&modulus[0];
                } else {
                    c[1] = base.one();
                }
                Ok(FieldElement { field: self.clone(), repr: Repr::Ext(c) })
            }
            _ => Err(Error::InvalidInput(format!("{self} has no adjoined generator"))),
        }
    }

    /// Embeds an element of a subfield (base, base of base, ...).
    pub fn embed(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.field == *self {
            return Ok(x.clone());
        }
        match &*self.0 {
            FieldKind::Extension { base, .. } => {
                let inner = base.embed(x)?;
                let mut c = vec![base.zero(); self.relative_degree()];
                c[0] = inner;
                Ok(FieldElement { field: self.clone(), repr: Repr::Ext(c) })
            }
            _ => Err(Error::FieldMismatch),
        }
    }

    /// Element with the given index in the canonical enumeration of a finite
    /// field: base-`|base|` digits, lowest coefficient least significant.
    pub fn element_at(&self, mut index: u128) -> Result<FieldElement> {
        match &*self.0 {
            FieldKind::Rational => Err(Error::Unsupported("enumerating ℚ".into())),
            FieldKind::Prime(p) => Ok(FieldElement { field: self.clone(), repr: Repr::Fp((index % *p as u128) as u64) }),
            FieldKind::Extension { base, .. } => {
                let bs = base.size().ok_or_else(|| Error::Unsupported("enumerating an infinite field".into()))?;
                let mut c = Vec::with_capacity(self.relative_degree());
                for _ in 0..self.relative_degree() {
                    c.push(base.element_at(index % bs)?);
                    index /= bs;
                }
                Ok(FieldElement { field: self.clone(), repr: Repr::Ext(c) })
            }
        }
    }

    /// All elements of a finite field of size at most [`ENUMERATION_LIMIT`].
    pub fn elements(&self) -> Result<Vec<FieldElement>> {
        let q = self
            .size()
            .filter(|&q| q <= ENUMERATION_LIMIT)
            .ok_or_else(|| Error::Unsupported(format!("enumerating {self}")))?;
        (0..q).map(|i| self.element_at(i)).collect()
    }

    pub fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        match &*self.0 {
            FieldKind::Rational => {
                let num: i64 = rng.gen_range(-9..=9);
                let den: i64 = rng.gen_range(1..=4);
                FieldElement {
                    field: self.clone(),
                    repr: Repr::Rat(BigRational::new(num.into(), den.into())),
                }
            }
            FieldKind::Prime(p) => FieldElement { field: self.clone(), repr: Repr::Fp(rng.gen_range(0..*p)) },
            FieldKind::Extension { base, .. } => FieldElement {
                field: self.clone(),
                repr: Repr::Ext((0..self.relative_degree()).map(|_| base.random(rng)).collect()),
            },
        }
    }

    pub fn random_nonzero<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        loop {
            let x = self.random(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }

    fn modulus(&self) -> Option<(&Field, &[FieldElement])> {
        match &*self.0 {
            FieldKind::Extension { base, modulus, .. } => Some((base, modulus)),
            _ => None,
        }
    }

    /// The Frobenius map `x ↦ x^p` of a finite field.
    pub fn frobenius(&self, x: &FieldElement) -> Result<FieldElement> {
        let p = self.characteristic();
        if p == 0 {
            return Err(Error::Unsupported("Frobenius in characteristic 0".into()));
        }
        Ok(x.pow(p))
    }

    /// The nontrivial automorphism of a quadratic extension `K[z]/(z²+c₁z+c₀)`,
    /// sending `z` to the other root `−c₁ − z`.
    pub fn quadratic_conjugate(&self, x: &FieldElement) -> Result<FieldElement> {
        let (_, m) = self
            .modulus()
            .filter(|(_, m)| m.len() == 3)
            .ok_or_else(|| Error::Unsupported(format!("{self} is not a quadratic extension")))?;
        let Repr::Ext(c) = &x.repr else { return Err(Error::FieldMismatch) };
        // c0 + c1 z  ↦  c0 + c1(−m1 − z)
        let c0 = &c[0] - &(&c[1] * &m[1]);
        let c1 = -&c[1];
        Ok(FieldElement { field: self.clone(), repr: Repr::Ext(vec![c0, c1]) })
    }

    /// Smallest certificate-free square test: Euler's criterion over finite
    /// fields, perfect-square test over ℚ.
    pub fn is_square(&self, x: &FieldElement) -> Result<bool> {
        if self.characteristic() == 2 {
            return Err(Error::CharacteristicTwo);
        }
        if x.is_zero() {
            return Ok(true);
        }
        match &*self.0 {
            FieldKind::Rational => {
                let Repr::Rat(q) = &x.repr else { unreachable!() };
                Ok(!q.is_negative() && is_perfect_square(q.numer()) && is_perfect_square(q.denom()))
            }
            _ if self.is_finite() => {
                let q = self.size().ok_or_else(|| Error::Unsupported("field too large".into()))?;
                Ok(x.pow_u128((q - 1) / 2).is_one())
            }
            _ => Err(Error::Unsupported("square test over a number field".into())),
        }
    }

    /// A square root, if one exists in the field (Tonelli–Shanks over finite
    /// fields, integer roots over ℚ).
    pub fn sqrt(&self, x: &FieldElement) -> Result<Option<FieldElement>> {
        if !self.is_square(x)? {
            return Ok(None);
        }
        if x.is_zero() {
            return Ok(Some(x.clone()));
        }
        if let FieldKind::Rational = &*self.0 {
            let Repr::Rat(q) = &x.repr else { unreachable!() };
            let r = BigRational::new(q.numer().sqrt(), q.denom().sqrt());
            return Ok(Some(FieldElement { field: self.clone(), repr: Repr::Rat(r) }));
        }
        let q = self.size().expect("finite");
        let mut s = 0u32;
        let mut odd = q - 1;
        while odd.is_multiple_of(2) {
            odd /= 2;
            s += 1;
        }
        let mut z = None;
        for i in 1..q.min(ENUMERATION_LIMIT * 100) {
            let c = self.element_at(i)?;
            if !c.is_zero() && !self.is_square(&c)? {
                z = Some(c);
                break;
            }
        }
        let z = z.ok_or_else(|| Error::Unsupported("no quadratic non-residue found".into()))?;
        let mut m = s;
        let mut c = z.pow_u128(odd);
        let mut t = x.pow_u128(odd);
        let mut r = x.pow_u128(odd.div_ceil(2));
        while !t.is_one() {
            let mut i = 0;
            let mut tt = t.clone();
            while !tt.is_one() {
                tt = &tt * &tt;
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = &b * &b;
            }
            m = i;
            c = &b * &b;
            t = &t * &c;
            r = &r * &b;
        }
        Ok(Some(r))
    }
}

fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            FieldKind::Rational => write!(f, "Q"),
            FieldKind::Prime(p) => write!(f, "F{p}"),
            FieldKind::Extension { base, modulus, var } => {
                let poly = Poly::new(base, modulus.to_vec());
                write!(f, "{base}[{var}]/({})", poly.display_in(var))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    Rat(BigRational),
    Fp(u64),
    Ext(Vec<FieldElement>),
}

/// An element of a [`Field`], always stored fully reduced.
#[derive(Debug, Clone)]
pub struct FieldElement {
    field: Field,
    repr: Repr,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.repr == other.repr && self.field == other.field
    }
}
impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.repr {
            Repr::Rat(q) => q.hash(state),
            Repr::Fp(v) => v.hash(state),
            Repr::Ext(c) => c.hash(state),
        }
    }
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Rat(q) => q.is_one(),
            Repr::Fp(v) => *v == 1,
            Repr::Ext(c) => c[0].is_one() && c[1..].iter().all(|x| x.is_zero()),
        }
    }

    /// Rational value, for elements of ℚ.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Rat(q) => Some(q),
            _ => None,
        }
    }

    /// Residue value, for elements of a prime field.
    pub fn as_residue(&self) -> Option<u64> {
        match &self.repr {
            Repr::Fp(v) => Some(*v),
            _ => None,
        }
    }

    /// Coefficients over the immediate base, lowest degree first.
    pub fn coefficients(&self) -> Option<&[FieldElement]> {
        match &self.repr {
            Repr::Ext(c) => Some(c),
            _ => None,
        }
    }

    pub fn from_coefficients(field: &Field, coeffs: Vec<FieldElement>) -> Result<Self> {
        let Some((base, m)) = field.modulus() else {
            return Err(Error::InvalidInput("not an extension field".into()));
        };
        if coeffs.iter().any(|c| c.field != *base) {
            return Err(Error::FieldMismatch);
        }
        let d = m.len() - 1;
        let mut p = Poly::new(base, coeffs);
        if p.coeffs().len() > d {
            p = p.rem(&Poly::new(base, m.to_vec()))?;
        }
        let mut c = p.coeffs().to_vec();
        c.resize(d, base.zero());
        Ok(FieldElement { field: field.clone(), repr: Repr::Ext(c) })
    }

    /// Index in the canonical enumeration of a finite field.
    pub fn index(&self) -> Option<u128> {
        match &self.repr {
            Repr::Rat(_) => None,
            Repr::Fp(v) => Some(*v as u128),
            Repr::Ext(c) => {
                let FieldKind::Extension { base, .. } = &*self.field.0 else { unreachable!() };
                let bs = base.size()?;
                let mut acc = 0u128;
                for x in c.iter().rev() {
                    acc = acc * bs + x.index()?;
                }
                Some(acc)
            }
        }
    }

    fn check(&self, other: &Self) {
        debug_assert!(self.field == other.field, "field mismatch: {} vs {}", self.field, other.field);
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(self + other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(self * other)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let repr = match (&self.repr, &*self.field.0) {
            (Repr::Rat(q), _) => Repr::Rat(q.recip()),
            (Repr::Fp(v), FieldKind::Prime(p)) => Repr::Fp(inv_mod(*v, *p)),
            (Repr::Ext(c), FieldKind::Extension { base, modulus, .. }) => {
                let a = Poly::new(base, c.clone());
                let m = Poly::new(base, modulus.clone());
                let (g, s, _) = a.ext_gcd(&m)?;
                // g is a nonzero constant since the modulus is irreducible
                if g.degree() != Some(0) {
                    return Err(Error::Inconsistent("modulus is not irreducible".into()));
                }
                let ginv = g.coeffs()[0].inv()?;
                let s = s.scale(&ginv);
                let mut out = s.coeffs().to_vec();
                out.resize(c.len(), base.zero());
                Repr::Ext(out)
            }
            _ => unreachable!("representation matches descriptor"),
        };
        Ok(FieldElement { field: self.field.clone(), repr })
    }

    pub fn pow(&self, e: u64) -> Self {
        Ring::pow(self, e)
    }

    pub fn pow_u128(&self, mut e: u128) -> Self {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power, negative exponents allowed for nonzero elements.
    pub fn powi(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    fn is_composite_display(&self) -> bool {
        match &self.repr {
            Repr::Rat(_) => false,
            Repr::Fp(_) => false,
            Repr::Ext(c) => {
                let mut nz = c.iter().filter(|x| !x.is_zero());
                match (nz.next(), nz.next()) {
                    (Some(x), None) => x.is_composite_display(),
                    (Some(_), Some(_)) => true,
                    _ => false,
                }
            }
        }
    }

    /// Display with parentheses when the printed form is not atomic.
    pub fn display_atomic(&self) -> String {
        if self.is_composite_display() {
            format!("({self})")
        } else {
            self.to_string()
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.repr, &*self.field.0) {
            (Repr::Rat(q), _) => write!(f, "{q}"),
            (Repr::Fp(v), _) => write!(f, "{v}"),
            (Repr::Ext(c), FieldKind::Extension { base, var, .. }) => {
                write!(f, "{}", Poly::new(base, c.clone()).display_in(var))
            }
            _ => unreachable!(),
        }
    }
}

fn fp_add(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn fp_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

impl std::ops::Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.check(rhs);
        let repr = match (&self.repr, &rhs.repr, &*self.field.0) {
            (Repr::Rat(a), Repr::Rat(b), _) => Repr::Rat(a + b),
            (Repr::Fp(a), Repr::Fp(b), FieldKind::Prime(p)) => Repr::Fp(fp_add(*a, *b, *p)),
            (Repr::Ext(a), Repr::Ext(b), _) => Repr::Ext(a.iter().zip(b).map(|(x, y)| x + y).collect()),
            _ => panic!("field mismatch"),
        };
        FieldElement { field: self.field.clone(), repr }
    }
}

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let repr = match (&self.repr, &*self.field.0) {
            (Repr::Rat(a), _) => Repr::Rat(-a),
            (Repr::Fp(a), FieldKind::Prime(p)) => Repr::Fp((p - a) % p),
            (Repr::Ext(a), _) => Repr::Ext(a.iter().map(|x| -x).collect()),
            _ => unreachable!(),
        };
        FieldElement { field: self.field.clone(), repr }
    }
}

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl std::ops::Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self + &(-rhs)
    }
}

impl std::ops::Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.check(rhs);
        let repr = match (&self.repr, &rhs.repr, &*self.field.0) {
            (Repr::Rat(a), Repr::Rat(b), _) => Repr::Rat(a * b),
            (Repr::Fp(a), Repr::Fp(b), FieldKind::Prime(p)) => Repr::Fp(fp_mul(*a, *b, *p)),
            (Repr::Ext(a), Repr::Ext(b), FieldKind::Extension { base, modulus, .. }) => {
                let d = a.len();
                let mut prod = vec![base.zero(); 2 * d - 1];
                for (i, x) in a.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in b.iter().enumerate() {
                        if !y.is_zero() {
                            prod[i + j] = &prod[i + j] + &(x * y);
                        }
                    }
                }
                // reduce with the monic modulus from the top down
                for k in (d..prod.len()).rev() {
                    let c = prod[k].clone();
                    if c.is_zero() {
                        continue;
                    }
                    for (i, m) in modulus[..d].iter().enumerate() {
                        prod[k - d + i] = &prod[k - d + i] - &(&c * m);
                    }
                }
                prod.truncate(d);
                Repr::Ext(prod)
            }
            _ => panic!("field mismatch"),
        };
        FieldElement { field: self.field.clone(), repr }
    }
}

impl Ring for FieldElement {
    fn zero_like(&self) -> Self {
        self.field.zero()
    }
    fn one_like(&self) -> Self {
        self.field.one()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rat(q) => q.is_zero(),
            Repr::Fp(v) => *v == 0,
            Repr::Ext(c) => c.iter().all(|x| x.is_zero()),
        }
    }
}

impl DivisionRing for FieldElement {
    fn try_inv(&self) -> Result<Self> {
        self.inv()
    }
}
