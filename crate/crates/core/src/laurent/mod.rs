//! Truncated Laurent series and iterated towers `k((x₁))…((x_m))`.
//!
//! An element of the tower is either a constant of the base field or a
//! series in one of the tower variables whose coefficients live strictly
//! lower in the tower. Constants and lower-level elements embed into higher
//! levels as coefficients of `t⁰`, so operands at different levels combine
//! without explicit coercion.
//!
//! Every series is either exact (finitely many terms, all known) or known
//! modulo `t^N`. Arithmetic keeps the loss rules simple: sums take the
//! smaller absolute precision, products and inverses the smaller relative
//! precision. A value whose certified terms all vanish is kept as `O(t^N)`;
//! asking it for a leading term fails with [`Error::PrecisionExhausted`].

mod hensel;
pub mod twisted;

use std::borrow::Cow;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use rand::Rng;

use crate::error::{Error, Result};
use crate::fields::{Field, FieldElement, FieldKind};
use crate::lattice::{Lattice, QVector};
use crate::ring::{DivisionRing, Ring};

pub const DEFAULT_PRECISION: usize = 32;

#[derive(Debug)]
pub struct Level {
    depth: usize,
    var: String,
    field: Field,
    precision: usize,
}

impl Level {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    fn same(&self, other: &Level) -> bool {
        self.depth == other.depth && self.var == other.var
    }
}

/// A series `Σ_{k ≥ val} c_k t^k` at one level of a tower.
///
/// Coefficients past the stored ones are zero up to the absolute precision
/// (`None` means exact). The first stored coefficient is never the exact
/// zero constant.
#[derive(Debug, Clone)]
pub struct Series {
    level: Arc<Level>,
    val: i64,
    coeffs: Vec<TowerElement>,
    prec: Option<i64>,
}

impl PartialEq for Series {
    fn eq(&self, other: &Self) -> bool {
        self.level.same(&other.level) && self.val == other.val && self.prec == other.prec && self.coeffs == other.coeffs
    }
}

impl Eq for Series {}

impl Series {
    pub fn level(&self) -> &Level {
        &self.level
    }

    /// Exponent of the first stored coefficient.
    pub fn start(&self) -> i64 {
        self.val
    }

    pub fn coeffs(&self) -> &[TowerElement] {
        &self.coeffs
    }

    pub fn abs_precision(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    fn rel_precision(&self) -> Option<i64> {
        self.prec.map(|p| p - self.val)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TowerElement {
    Const(FieldElement),
    Series(Series),
}

/// A series-shaped view of any element at a given level.
struct Parts<'a> {
    val: i64,
    coeffs: Cow<'a, [TowerElement]>,
    prec: Option<i64>,
}

impl Parts<'_> {
    fn end(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    fn rel(&self) -> Option<i64> {
        self.prec.map(|p| p - self.val)
    }

    fn get(&self, e: i64) -> Option<&TowerElement> {
        if e < self.val {
            return None;
        }
        self.coeffs.get((e - self.val) as usize)
    }
}

/// Coefficient product on machine words, for series whose coefficients all
/// lie in a prime field below 2³¹.
fn small_prime_convolution(level: &Level, a: &[TowerElement], b: &[TowerElement], len: usize) -> Option<Vec<TowerElement>> {
    let FieldKind::Prime(p) = level.field.kind() else { return None };
    let p = *p;
    if p >= 1 << 31 {
        return None;
    }
    let words = |s: &[TowerElement]| -> Option<Vec<u64>> {
        s.iter().map(|c| c.as_const().and_then(|c| c.as_residue())).collect()
    };
    let (x, y) = (words(a)?, words(b)?);
    let mut out = vec![0u64; len];
    for (i, &u) in x.iter().enumerate().take(len) {
        if u == 0 {
            continue;
        }
        for (o, &v) in out[i..].iter_mut().zip(&y) {
            *o = (*o + u * v) % p;
        }
    }
    Some(out.into_iter().map(|r| TowerElement::Const(level.field.from_i64(r as i64))).collect())
}

/// Machine-word product for series whose coefficients are exact series one
/// level down, themselves with small prime field coefficients.
fn nested_small_prime_convolution(
    level: &Level,
    a: &[TowerElement],
    b: &[TowerElement],
    len: usize,
) -> Option<Vec<TowerElement>> {
    let FieldKind::Prime(p) = level.field.kind() else { return None };
    let p = *p;
    if p >= 1 << 31 || level.depth < 2 {
        return None;
    }
    let inner = a.iter().chain(b).find_map(|c| c.as_series())?.level.clone();
    if inner.depth + 1 != level.depth {
        return None;
    }
    let unpack = |c: &TowerElement| -> Option<(i64, Vec<u64>)> {
        match c {
            TowerElement::Const(x) => Some((0, vec![x.as_residue()?])),
            TowerElement::Series(s) if s.prec.is_none() && s.level.depth == inner.depth => Some((
                s.val,
                s.coeffs.iter().map(|c| c.as_const().and_then(|c| c.as_residue())).collect::<Option<_>>()?,
            )),
            _ => None,
        }
    };
    let xs: Vec<(i64, Vec<u64>)> = a.iter().map(unpack).collect::<Option<_>>()?;
    let ys: Vec<(i64, Vec<u64>)> = b.iter().map(unpack).collect::<Option<_>>()?;
    let span = |v: &[(i64, Vec<u64>)]| {
        let lo = v.iter().map(|(s, _)| *s).min().unwrap_or(0);
        let hi = v.iter().map(|(s, w)| s + w.len() as i64).max().unwrap_or(0);
        (lo, hi)
    };
    let ((alo, ahi), (blo, bhi)) = (span(&xs), span(&ys));
    let lo = alo + blo;
    let width = (ahi + bhi - lo).max(0) as usize;
    let mut out = vec![vec![0u64; width]; len];
    for (i, (sx, wx)) in xs.iter().enumerate().take(len) {
        if wx.iter().all(|&u| u == 0) {
            continue;
        }
        for ((sy, wy), acc) in ys.iter().zip(&mut out[i..]) {
            let base = (sx + sy - lo) as usize;
            for (k, &u) in wx.iter().enumerate() {
                if u == 0 {
                    continue;
                }
                for (o, &v) in acc[base + k..].iter_mut().zip(wy) {
                    *o = (*o + u * v) % p;
                }
            }
        }
    }
    Some(
        out.into_iter()
            .map(|w| {
                let coeffs = w.into_iter().map(|r| TowerElement::Const(level.field.from_i64(r as i64))).collect();
                TowerElement::build(&inner, lo, coeffs, None)
            })
            .collect(),
    )
}

fn small_prime_sum(level: &Level, a: &Parts<'_>, b: &Parts<'_>, lo: i64, hi: i64) -> Option<Vec<TowerElement>> {
    let FieldKind::Prime(p) = level.field.kind() else { return None };
    let mut out = vec![0u64; (hi - lo).max(0) as usize];
    for part in [a, b] {
        for (k, c) in part.coeffs.iter().enumerate() {
            let e = part.val + k as i64;
            if e >= hi {
                break;
            }
            let r = c.as_const().and_then(|c| c.as_residue())?;
            let slot = &mut out[(e - lo) as usize];
            *slot = (*slot + r) % p;
        }
    }
    Some(out.into_iter().map(|r| TowerElement::Const(level.field.from_i64(r as i64))).collect())
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl TowerElement {
    pub fn field(&self) -> &Field {
        match self {
            TowerElement::Const(c) => c.field(),
            TowerElement::Series(s) => &s.level.field,
        }
    }

    /// Level of the outermost variable present, 0 for constants.
    pub fn depth(&self) -> usize {
        match self {
            TowerElement::Const(_) => 0,
            TowerElement::Series(s) => s.level.depth,
        }
    }

    pub fn as_const(&self) -> Option<&FieldElement> {
        match self {
            TowerElement::Const(c) => Some(c),
            TowerElement::Series(_) => None,
        }
    }

    pub fn as_series(&self) -> Option<&Series> {
        match self {
            TowerElement::Series(s) => Some(s),
            TowerElement::Const(_) => None,
        }
    }

    /// Exact zero (not merely zero to the known precision).
    pub fn is_exact_zero(&self) -> bool {
        matches!(self, TowerElement::Const(c) if c.is_zero())
    }

    pub fn is_exact_one(&self) -> bool {
        matches!(self, TowerElement::Const(c) if c.is_one())
    }

    /// No precision was lost anywhere inside this element.
    pub fn is_exact(&self) -> bool {
        match self {
            TowerElement::Const(_) => true,
            TowerElement::Series(s) => s.prec.is_none() && s.coeffs.iter().all(|c| c.is_exact()),
        }
    }

    /// Number of stored base-field coefficients; a rough size measure.
    pub fn term_count(&self) -> usize {
        match self {
            TowerElement::Const(c) => usize::from(!c.is_zero()),
            TowerElement::Series(s) => s.coeffs.iter().map(|c| c.term_count()).sum(),
        }
    }

    fn parts(&self, level: &Level) -> Parts<'_> {
        match self {
            TowerElement::Series(s) if s.level.depth == level.depth => {
                debug_assert!(s.level.same(level));
                Parts { val: s.val, coeffs: Cow::Borrowed(&s.coeffs), prec: s.prec }
            }
            x if x.is_exact_zero() => Parts { val: 0, coeffs: Cow::Owned(Vec::new()), prec: None },
            x => Parts { val: 0, coeffs: Cow::Owned(vec![x.clone()]), prec: None },
        }
    }

    fn top_level<'a>(&'a self, other: &'a TowerElement) -> Option<&'a Arc<Level>> {
        match (self, other) {
            (TowerElement::Series(a), TowerElement::Series(b)) => {
                Some(if a.level.depth >= b.level.depth { &a.level } else { &b.level })
            }
            (TowerElement::Series(a), _) => Some(&a.level),
            (_, TowerElement::Series(b)) => Some(&b.level),
            _ => None,
        }
    }

    fn build(level: &Arc<Level>, mut val: i64, mut coeffs: Vec<TowerElement>, prec: Option<i64>) -> TowerElement {
        let lead = coeffs.iter().take_while(|c| c.is_exact_zero()).count();
        coeffs.drain(..lead);
        val += lead as i64;
        while coeffs.last().is_some_and(|c| c.is_exact_zero()) {
            coeffs.pop();
        }
        match prec {
            Some(p) => {
                let keep = (p - val).max(0) as usize;
                coeffs.truncate(keep);
                if coeffs.is_empty() {
                    val = p;
                }
                TowerElement::Series(Series { level: level.clone(), val, coeffs, prec })
            }
            None => {
                if coeffs.is_empty() {
                    return TowerElement::Const(level.field.zero());
                }
                if val == 0 && coeffs.len() == 1 {
                    return coeffs.pop().expect("one coefficient");
                }
                TowerElement::Series(Series { level: level.clone(), val, coeffs, prec })
            }
        }
    }

    fn add_impl(&self, rhs: &TowerElement) -> TowerElement {
        if self.is_exact_zero() {
            return rhs.clone();
        }
        if rhs.is_exact_zero() {
            return self.clone();
        }
        let Some(level) = self.top_level(rhs).cloned() else {
            let (a, b) = (self.as_const().expect("const"), rhs.as_const().expect("const"));
            return TowerElement::Const(a + b);
        };
        let (a, b) = (self.parts(&level), rhs.parts(&level));
        let prec = min_prec(a.prec, b.prec);
        let lo = a.val.min(b.val);
        let mut hi = a.end().max(b.end());
        if let Some(p) = prec {
            hi = hi.min(p);
        }
        if let Some(coeffs) = small_prime_sum(&level, &a, &b, lo, hi) {
            return TowerElement::build(&level, lo, coeffs, prec);
        }
        let coeffs = (lo..hi)
            .map(|e| match (a.get(e), b.get(e)) {
                (Some(x), Some(y)) => x.add_impl(y),
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => TowerElement::Const(level.field.zero()),
            })
            .collect();
        TowerElement::build(&level, lo, coeffs, prec)
    }

    fn mul_impl(&self, rhs: &TowerElement) -> TowerElement {
        if self.is_exact_zero() || rhs.is_exact_zero() {
            return TowerElement::Const(self.field().zero());
        }
        if self.is_exact_one() {
            return rhs.clone();
        }
        if rhs.is_exact_one() {
            return self.clone();
        }
        let Some(level) = self.top_level(rhs).cloned() else {
            let (a, b) = (self.as_const().expect("const"), rhs.as_const().expect("const"));
            return TowerElement::Const(a * b);
        };
        if self.depth() < level.depth || rhs.depth() < level.depth {
            let (s, scalar) = if self.depth() == level.depth { (self, rhs) } else { (rhs, self) };
            let s = s.as_series().expect("series at top level");
            let coeffs = s.coeffs.iter().map(|c| c.mul_impl(scalar)).collect();
            return TowerElement::build(&level, s.val, coeffs, s.prec);
        }
        let (a, b) = (self.parts(&level), rhs.parts(&level));
        let val = a.val + b.val;
        let rel = match (a.rel(), b.rel()) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        };
        let full = (a.coeffs.len() + b.coeffs.len()).saturating_sub(1);
        let len = rel.map_or(full, |r| full.min(r.max(0) as usize));
        let fast = small_prime_convolution(&level, &a.coeffs, &b.coeffs, len)
            .or_else(|| nested_small_prime_convolution(&level, &a.coeffs, &b.coeffs, len));
        if let Some(coeffs) = fast {
            return TowerElement::build(&level, val, coeffs, rel.map(|r| val + r));
        }
        let zero = TowerElement::Const(level.field.zero());
        let mut coeffs = vec![zero; len];
        for (i, x) in a.coeffs.iter().enumerate().take(len) {
            if x.is_exact_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate().take(len - i) {
                if y.is_exact_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add_impl(&x.mul_impl(y));
            }
        }
        TowerElement::build(&level, val, coeffs, rel.map(|r| val + r))
    }

    fn neg_impl(&self) -> TowerElement {
        match self {
            TowerElement::Const(c) => TowerElement::Const(-c),
            TowerElement::Series(s) => TowerElement::Series(Series {
                level: s.level.clone(),
                val: s.val,
                coeffs: s.coeffs.iter().map(|c| c.neg_impl()).collect(),
                prec: s.prec,
            }),
        }
    }

    /// Multiplicative inverse; the result is exact for monomials and carries
    /// the working precision of its level otherwise.
    pub fn inv(&self) -> Result<TowerElement> {
        match self {
            TowerElement::Const(c) => Ok(TowerElement::Const(c.inv()?)),
            TowerElement::Series(s) => {
                let c0 = s.coeffs.first().ok_or(Error::PrecisionExhausted)?;
                let c0inv = c0.inv()?;
                if s.prec.is_none() && s.coeffs.len() == 1 {
                    return Ok(TowerElement::build(&s.level, -s.val, vec![c0inv], None));
                }
                let wp = s.level.precision as i64;
                let r = s.rel_precision().map_or(wp, |r| r.min(wp)).max(0) as usize;
                let mut b: Vec<TowerElement> = Vec::with_capacity(r);
                if r > 0 {
                    b.push(c0inv.clone());
                }
                for k in 1..r {
                    let mut acc = TowerElement::Const(s.level.field.zero());
                    for j in 1..=k.min(s.coeffs.len() - 1) {
                        if s.coeffs[j].is_exact_zero() {
                            continue;
                        }
                        acc = acc.add_impl(&s.coeffs[j].mul_impl(&b[k - j]));
                    }
                    b.push(acc.mul_impl(&c0inv).neg_impl());
                }
                Ok(TowerElement::build(&s.level, -s.val, b, Some(-s.val + r as i64)))
            }
        }
    }

    pub fn pow(&self, e: u64) -> TowerElement {
        Ring::pow(self, e)
    }

    pub fn powi(&self, e: i64) -> Result<TowerElement> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// Multiply by a base-field scalar.
    pub fn scale(&self, c: &FieldElement) -> TowerElement {
        self.mul_impl(&TowerElement::Const(c.clone()))
    }

    /// Coefficient of `t^e` at this element's top level, `None` when it lies
    /// beyond the known precision.
    pub fn coeff(&self, e: i64) -> Option<TowerElement> {
        match self {
            TowerElement::Const(c) => Some(if e == 0 { self.clone() } else { TowerElement::Const(c.field().zero()) }),
            TowerElement::Series(s) => {
                if s.prec.is_some_and(|p| e >= p) {
                    return None;
                }
                let zero = TowerElement::Const(s.level.field.zero());
                Some(if e < s.val { zero } else { s.coeffs.get((e - s.val) as usize).cloned().unwrap_or(zero) })
            }
        }
    }

    /// Copy known only to relative precision `rel` at every series level.
    pub fn truncated(&self, rel: usize) -> TowerElement {
        match self {
            TowerElement::Const(_) => self.clone(),
            TowerElement::Series(s) => {
                let cap = s.val + rel as i64;
                let coeffs = s.coeffs.iter().take(rel).map(|c| c.truncated(rel)).collect();
                TowerElement::build(&s.level, s.val, coeffs, Some(s.prec.map_or(cap, |p| p.min(cap))))
            }
        }
    }

    /// Applies `f` to every base-field coefficient, keeping the shape.
    pub fn map_constants(&self, f: &dyn Fn(&FieldElement) -> FieldElement) -> TowerElement {
        match self {
            TowerElement::Const(c) => TowerElement::Const(f(c)),
            TowerElement::Series(s) => TowerElement::build(
                &s.level,
                s.val,
                s.coeffs.iter().map(|c| c.map_constants(f)).collect(),
                s.prec,
            ),
        }
    }

    fn is_atomic(&self) -> bool {
        match self {
            TowerElement::Const(c) => c.display_atomic() == c.to_string(),
            TowerElement::Series(s) => s.prec.is_none() && s.coeffs.len() == 1 && s.coeffs[0].is_exact_one(),
        }
    }

    fn display_atomic(&self) -> String {
        if self.is_atomic() {
            self.to_string()
        } else {
            format!("({self})")
        }
    }
}

fn monomial_str(var: &str, k: i64) -> String {
    match k {
        1 => var.to_string(),
        _ => format!("{var}^{k}"),
    }
}

impl fmt::Display for TowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TowerElement::Const(c) => return write!(f, "{c}"),
            TowerElement::Series(s) => s,
        };
        let var = &s.level.var;
        let mut terms: Vec<String> = Vec::new();
        for (i, c) in s.coeffs.iter().enumerate() {
            if c.is_exact_zero() {
                continue;
            }
            let k = s.val + i as i64;
            let term = if k == 0 {
                c.to_string()
            } else if c.is_exact_one() {
                monomial_str(var, k)
            } else if c.as_const().is_some_and(|x| (-x).is_one()) && c.field().characteristic() == 0 {
                format!("-{}", monomial_str(var, k))
            } else {
                format!("{}*{}", c.display_atomic(), monomial_str(var, k))
            };
            terms.push(term);
        }
        if let Some(p) = s.prec {
            terms.push(format!("O({})", monomial_str(var, p)));
        }
        for (i, t) in terms.iter().enumerate() {
            match (i, t.strip_prefix('-')) {
                (0, _) => write!(f, "{t}")?,
                (_, Some(rest)) => write!(f, " - {rest}")?,
                (_, None) => write!(f, " + {t}")?,
            }
        }
        Ok(())
    }
}

impl std::ops::Add for &TowerElement {
    type Output = TowerElement;
    fn add(self, rhs: &TowerElement) -> TowerElement {
        self.add_impl(rhs)
    }
}

impl std::ops::Sub for &TowerElement {
    type Output = TowerElement;
    fn sub(self, rhs: &TowerElement) -> TowerElement {
        self.add_impl(&rhs.neg_impl())
    }
}

impl std::ops::Mul for &TowerElement {
    type Output = TowerElement;
    fn mul(self, rhs: &TowerElement) -> TowerElement {
        self.mul_impl(rhs)
    }
}

impl std::ops::Neg for &TowerElement {
    type Output = TowerElement;
    fn neg(self) -> TowerElement {
        self.neg_impl()
    }
}

impl Ring for TowerElement {
    fn zero_like(&self) -> Self {
        TowerElement::Const(self.field().zero())
    }
    fn one_like(&self) -> Self {
        TowerElement::Const(self.field().one())
    }
    fn add(&self, rhs: &Self) -> Self {
        self.add_impl(rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add_impl(&rhs.neg_impl())
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.mul_impl(rhs)
    }
    fn neg(&self) -> Self {
        self.neg_impl()
    }
    fn is_zero(&self) -> bool {
        match self {
            TowerElement::Const(c) => c.is_zero(),
            TowerElement::Series(s) => s.coeffs.iter().all(|c| c.is_zero()),
        }
    }
}

impl DivisionRing for TowerElement {
    fn try_inv(&self) -> Result<Self> {
        self.inv()
    }

    fn pivot_weight(&self) -> i64 {
        fn certain(x: &TowerElement) -> bool {
            match x {
                TowerElement::Const(c) => !c.is_zero(),
                TowerElement::Series(s) => s.coeffs.first().is_some_and(certain),
            }
        }
        match self {
            TowerElement::Const(_) => 0,
            x if x.is_exact() => 1,
            x if certain(x) => 2,
            _ => 3,
        }
    }
}

/// The iterated Laurent series field `base((x₁))…((x_m))`, innermost
/// variable first.
#[derive(Debug, Clone)]
pub struct Tower {
    base: Field,
    levels: Vec<Arc<Level>>,
}

impl PartialEq for Tower {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.vars() == other.vars()
    }
}

impl Eq for Tower {}

impl Tower {
    pub fn new(base: &Field, vars: &[&str], precision: usize) -> Result<Self> {
        if precision == 0 {
            return Err(Error::InvalidInput("precision must be positive".into()));
        }
        for (i, v) in vars.iter().enumerate() {
            if v.is_empty() || !v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::InvalidInput(format!("bad variable name {v:?}")));
            }
            if vars[..i].contains(v) || base.generator_names().iter().any(|g| g == v) {
                return Err(Error::InvalidInput(format!("variable {v} used twice")));
            }
        }
        let levels = vars
            .iter()
            .enumerate()
            .map(|(i, v)| {
                Arc::new(Level { depth: i + 1, var: v.to_string(), field: base.clone(), precision })
            })
            .collect();
        Ok(Tower { base: base.clone(), levels })
    }

    /// The base field viewed as a tower of height 0.
    pub fn trivial(base: &Field) -> Self {
        Tower { base: base.clone(), levels: Vec::new() }
    }

    pub fn with_precision(&self, precision: usize) -> Result<Self> {
        let vars: Vec<&str> = self.levels.iter().map(|l| l.var.as_str()).collect();
        Tower::new(&self.base, &vars, precision)
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn height(&self) -> usize {
        self.levels.len()
    }

    pub fn precision(&self) -> usize {
        self.levels.first().map_or(DEFAULT_PRECISION, |l| l.precision)
    }

    /// Variable names, innermost first.
    pub fn vars(&self) -> Vec<&str> {
        self.levels.iter().map(|l| l.var.as_str()).collect()
    }

    pub fn zero(&self) -> TowerElement {
        TowerElement::Const(self.base.zero())
    }

    pub fn one(&self) -> TowerElement {
        TowerElement::Const(self.base.one())
    }

    pub fn from_i64(&self, n: i64) -> TowerElement {
        TowerElement::Const(self.base.from_i64(n))
    }

    pub fn constant(&self, c: &FieldElement) -> Result<TowerElement> {
        Ok(TowerElement::Const(self.base.embed(c)?))
    }

    pub fn from_rational(&self, q: &BigRational) -> Result<TowerElement> {
        Ok(TowerElement::Const(self.base.from_rational(q)?))
    }

    /// The variable at `depth` (1 = innermost).
    pub fn gen(&self, depth: usize) -> Result<TowerElement> {
        self.var_power(depth, 1)
    }

    pub fn var(&self, name: &str) -> Result<TowerElement> {
        let d = self.depth_of(name).ok_or_else(|| Error::InvalidInput(format!("unknown variable {name}")))?;
        self.gen(d)
    }

    pub fn depth_of(&self, name: &str) -> Option<usize> {
        self.levels.iter().position(|l| l.var == name).map(|i| i + 1)
    }

    fn level(&self, depth: usize) -> Result<&Arc<Level>> {
        depth
            .checked_sub(1)
            .and_then(|i| self.levels.get(i))
            .ok_or_else(|| Error::InvalidInput(format!("no tower level {depth}")))
    }

    /// `t^k` for the variable at `depth`.
    pub fn var_power(&self, depth: usize, k: i64) -> Result<TowerElement> {
        let level = self.level(depth)?;
        Ok(TowerElement::build(level, k, vec![self.one()], None))
    }

    /// `O(t^k)` for the variable at `depth`.
    pub fn big_o(&self, depth: usize, k: i64) -> Result<TowerElement> {
        let level = self.level(depth)?;
        Ok(TowerElement::build(level, k, Vec::new(), Some(k)))
    }

    /// `c · ∏ tᵢ^{eᵢ}` with exponents listed outermost first, matching the
    /// valuation vector.
    pub fn monomial(&self, c: &FieldElement, exps: &[i64]) -> Result<TowerElement> {
        if exps.len() != self.height() {
            return Err(Error::RankMismatch(self.height(), exps.len()));
        }
        let mut x = self.constant(c)?;
        for (i, &e) in exps.iter().enumerate() {
            if e != 0 {
                x = &x * &self.var_power(self.height() - i, e)?;
            }
        }
        Ok(x)
    }

    /// Builds a series from explicit coefficients at `depth`, starting at
    /// exponent `start`; `prec` is an absolute precision or `None` for exact.
    pub fn series(&self, depth: usize, start: i64, coeffs: Vec<TowerElement>, prec: Option<i64>) -> Result<TowerElement> {
        let level = self.level(depth)?;
        if let Some(c) = coeffs.iter().find(|c| c.depth() >= depth) {
            return Err(Error::InvalidInput(format!("coefficient {c} is not below level {depth}")));
        }
        Ok(TowerElement::build(level, start, coeffs, prec))
    }

    /// Whether `x` is built from this tower's base field and variables.
    pub fn contains(&self, x: &TowerElement) -> bool {
        match x {
            TowerElement::Const(c) => *c.field() == self.base,
            TowerElement::Series(s) => {
                self.levels.get(s.level.depth - 1).is_some_and(|l| l.same(&s.level))
                    && s.level.field == self.base
                    && s.coeffs.iter().all(|c| self.contains(c))
            }
        }
    }

    /// Lex valuation vector, outermost variable first; `None` for exact zero.
    pub fn valuation(&self, x: &TowerElement) -> Result<Option<Vec<i64>>> {
        let m = self.height();
        let mut v = vec![0i64; m];
        let mut cur = x;
        loop {
            match cur {
                TowerElement::Const(c) if c.is_zero() => {
                    return if std::ptr::eq(cur, x) { Ok(None) } else { Err(Error::PrecisionExhausted) };
                }
                TowerElement::Const(_) => return Ok(Some(v)),
                TowerElement::Series(s) => {
                    let lead = s.coeffs.first().ok_or(Error::PrecisionExhausted)?;
                    if s.level.depth > m {
                        return Err(Error::InvalidInput("element is not in this tower".into()));
                    }
                    v[m - s.level.depth] = s.val;
                    cur = lead;
                }
            }
        }
    }

    /// Valuation as a rational vector, for comparison with value groups.
    pub fn valuation_q(&self, x: &TowerElement) -> Result<Option<QVector>> {
        Ok(self.valuation(x)?.map(|v| v.into_iter().map(|e| BigRational::from_integer(e.into())).collect()))
    }

    /// Γ_F = ℤ^m.
    pub fn value_group(&self) -> Lattice {
        Lattice::standard(self.height())
    }

    /// Image in the residue field `base` of an element of the valuation ring.
    pub fn residue(&self, x: &TowerElement) -> Result<FieldElement> {
        match x {
            TowerElement::Const(c) => Ok(c.clone()),
            TowerElement::Series(s) => {
                if s.val > 0 {
                    return Ok(self.base.zero());
                }
                let lead = match s.coeffs.first() {
                    Some(c) => c,
                    None if s.val >= 0 && s.prec.is_some_and(|p| p > 0) => return Ok(self.base.zero()),
                    None => return Err(Error::PrecisionExhausted),
                };
                if s.val < 0 {
                    return if lead.pivot_weight() < 3 {
                        Err(Error::NegativeValuation)
                    } else {
                        Err(Error::PrecisionExhausted)
                    };
                }
                self.residue(lead)
            }
        }
    }

    /// The leading monomial `c·x^v`, or `None` for exact zero.
    pub fn leading_term(&self, x: &TowerElement) -> Result<Option<TowerElement>> {
        let Some(v) = self.valuation(x)? else {
            return Ok(None);
        };
        let neg: Vec<i64> = v.iter().map(|e| -e).collect();
        let u = x * &self.monomial(&self.base.one(), &neg)?;
        let c = self.residue(&u)?;
        Ok(Some(self.monomial(&c, &v)?))
    }

    /// Random Laurent polynomial with up to `terms` monomials whose
    /// exponents lie in `[-spread, spread]`.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, terms: usize, spread: i64) -> TowerElement {
        let mut x = self.zero();
        for _ in 0..terms {
            let exps: Vec<i64> = (0..self.height()).map(|_| rng.gen_range(-spread..=spread)).collect();
            let c = self.base.random(rng);
            x = &x + &self.monomial(&c, &exps).expect("exponent count matches");
        }
        x
    }

    /// Random element of valuation 0: a nonzero constant plus terms of
    /// strictly positive valuation.
    pub fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R, terms: usize, spread: i64) -> TowerElement {
        let mut x = TowerElement::Const(self.base.random_nonzero(rng));
        if self.height() == 0 {
            return x;
        }
        for _ in 0..terms {
            let mut exps: Vec<i64> = (0..self.height()).map(|_| rng.gen_range(0..=spread.max(1))).collect();
            if exps.iter().all(|&e| e == 0) {
                exps[0] = 1;
            }
            let c = self.base.random(rng);
            x = &x + &self.monomial(&c, &exps).expect("exponent count matches");
        }
        x
    }
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        for l in &self.levels {
            write!(f, "(({}))", l.var)?;
        }
        Ok(())
    }
}
