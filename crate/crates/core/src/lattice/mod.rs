//! Finitely generated subgroups of ℚ^r under the lexicographic order
//! (coordinate 1 most significant). These carry every value group used by
//! the crate: Γ_F = ℤ^m for towers, Γ_D for algebras.

mod snf;

pub use snf::{hermite, smith_diagonal};

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::is_prime;

pub type QVector = Vec<BigRational>;

/// Lexicographic comparison, coordinate 1 most significant.
pub fn lex_compare(v: &[BigRational], w: &[BigRational]) -> Result<Ordering> {
    if v.len() != w.len() {
        return Err(Error::RankMismatch(v.len(), w.len()));
    }
    Ok(v.iter()
        .zip(w)
        .map(|(a, b)| a.cmp(b))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal))
}

pub fn qvec(v: &[i64]) -> QVector {
    v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
}

/// `1/den · v`
pub fn qvec_frac(v: &[i64], den: i64) -> QVector {
    v.iter().map(|&x| BigRational::new(x.into(), den.into())).collect()
}

/// A lattice `(1/denominator)·span_ℤ(rows)` in canonical form: rows are the
/// Hermite normal form and `gcd(denominator, entries) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    ambient_rank: usize,
    denominator: BigInt,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn new(ambient_rank: usize, generators: &[QVector]) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.len() != ambient_rank) {
            return Err(Error::RankMismatch(ambient_rank, g.len()));
        }
        let den = generators
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let rows = generators
            .iter()
            .map(|g| g.iter().map(|x| (x * &den).to_integer()).collect())
            .collect();
        Ok(Self::from_integer_rows(ambient_rank, den, rows))
    }

    /// `(1/denominator)·span(rows)`; rows need not be reduced.
    pub fn from_integer_rows(ambient_rank: usize, denominator: BigInt, rows: Vec<Vec<BigInt>>) -> Self {
        let (mut rows, pivots) = hermite(rows, ambient_rank);
        let mut den = denominator.abs();
        let g = rows.iter().flatten().fold(den.clone(), |acc, x| acc.gcd(x));
        if !g.is_one() && !g.is_zero() {
            den /= &g;
            for x in rows.iter_mut().flatten() {
                *x /= &g;
            }
        }
        if rows.is_empty() {
            den = BigInt::one();
        }
        Lattice { ambient_rank, denominator: den, rows, pivots }
    }

    /// ℤ^r
    pub fn standard(r: usize) -> Self {
        Self::scaled(r, 1)
    }

    /// (1/den·ℤ)^r
    pub fn scaled(r: usize, den: i64) -> Self {
        let rows = (0..r)
            .map(|i| (0..r).map(|j| BigInt::from((i == j) as i64)).collect())
            .collect();
        Self::from_integer_rows(r, den.into(), rows)
    }

    pub fn trivial(r: usize) -> Self {
        Self::from_integer_rows(r, BigInt::one(), Vec::new())
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    pub fn integer_rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    /// Canonical basis as rational vectors.
    pub fn basis(&self) -> Vec<QVector> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|x| BigRational::new(x.clone(), self.denominator.clone())).collect())
            .collect()
    }

    pub fn canonicalize(&self) -> Self {
        Self::from_integer_rows(self.ambient_rank, self.denominator.clone(), self.rows.clone())
    }

    pub fn is_trivial(&self) -> bool {
        self.rows.is_empty()
    }

    /// dim_ℚ(L ⊗ ℚ)
    pub fn rational_rank(&self) -> usize {
        self.rows.len()
    }

    /// Integer coordinates of `v` in the canonical basis, if `v ∈ L`.
    pub fn coordinates(&self, v: &[BigRational]) -> Result<Option<Vec<BigInt>>> {
        if v.len() != self.ambient_rank {
            return Err(Error::RankMismatch(self.ambient_rank, v.len()));
        }
        let mut w = Vec::with_capacity(v.len());
        for x in v {
            let y = x * &self.denominator;
            if !y.is_integer() {
                return Ok(None);
            }
            w.push(y.to_integer());
        }
        let mut coords = Vec::with_capacity(self.rows.len());
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            if w[..pc].iter().any(|x| !x.is_zero()) {
                return Ok(None);
            }
            let (q, r) = w[pc].div_rem(&row[pc]);
            if !r.is_zero() {
                return Ok(None);
            }
            for (k, x) in row.iter().enumerate().skip(pc) {
                w[k] -= &q * x;
            }
            coords.push(q);
        }
        Ok(w.iter().all(|x| x.is_zero()).then_some(coords))
    }

    pub fn contains(&self, v: &[BigRational]) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    pub fn contains_lattice(&self, other: &Lattice) -> Result<bool> {
        for b in other.basis() {
            if !self.contains(&b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `L1 + L2`
    pub fn sum(&self, other: &Lattice) -> Result<Lattice> {
        if self.ambient_rank != other.ambient_rank {
            return Err(Error::RankMismatch(self.ambient_rank, other.ambient_rank));
        }
        let mut gens = self.basis();
        gens.extend(other.basis());
        Lattice::new(self.ambient_rank, &gens)
    }

    /// `k·L`
    pub fn scale(&self, k: &BigRational) -> Lattice {
        let gens: Vec<QVector> = self.basis().into_iter().map(|v| v.into_iter().map(|x| x * k).collect()).collect();
        Lattice::new(self.ambient_rank, &gens).expect("ranks agree")
    }

    /// Structure of the finite quotient `self / small`.
    pub fn quotient(&self, small: &Lattice) -> Result<QuotientStructure> {
        if self.ambient_rank != small.ambient_rank {
            return Err(Error::RankMismatch(self.ambient_rank, small.ambient_rank));
        }
        if small.rational_rank() != self.rational_rank() {
            if !self.contains_lattice(small)? {
                return Err(Error::NotContained);
            }
            return Err(Error::InfiniteIndex { big: self.rational_rank(), small: small.rational_rank() });
        }
        let mut change = Vec::with_capacity(small.rows.len());
        for b in small.basis() {
            change.push(self.coordinates(&b)?.ok_or(Error::NotContained)?);
        }
        let diag = smith_diagonal(change);
        Ok(QuotientStructure::from_diagonal(diag))
    }

    /// dim_{𝔽_q}(L / qL), read off the Smith form of `L ⊇ qL`.
    pub fn q_rank(&self, q: u64) -> Result<usize> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        let ql = self.scale(&BigRational::from_integer(q.into()));
        let quo = self.quotient(&ql)?;
        let q = BigInt::from(q);
        Ok(quo.invariant_factors.iter().filter(|d| (*d % &q).is_zero()).count())
    }

    /// `L ∩ ({0}^i × ℚ^{r−i})` for `i = 0..=r`, with repeats removed.
    pub fn convex_chain(&self) -> Vec<Lattice> {
        let mut chain: Vec<Lattice> = Vec::new();
        for i in 0..=self.ambient_rank {
            let rows: Vec<Vec<BigInt>> = self
                .rows
                .iter()
                .zip(&self.pivots)
                .filter(|(_, &pc)| pc >= i)
                .map(|(r, _)| r.clone())
                .collect();
            let sub = Lattice::from_integer_rows(self.ambient_rank, self.denominator.clone(), rows);
            if chain.last() != Some(&sub) {
                chain.push(sub);
            }
        }
        chain
    }

    /// Number of proper convex subgroups, i.e. the rank of the ordered group.
    pub fn rank(&self) -> usize {
        self.convex_chain().len() - 1
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, b) in self.basis().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let parts: Vec<String> = b.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(","))?;
        }
        write!(f, ">")
    }
}

/// Invariant factors `d₁ | d₂ | … | d_k`, each at least 2, of a finite
/// abelian group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientStructure {
    #[serde(with = "bigint_list")]
    pub invariant_factors: Vec<BigInt>,
}

impl QuotientStructure {
    pub fn trivial() -> Self {
        QuotientStructure { invariant_factors: Vec::new() }
    }

    pub fn from_diagonal(diag: Vec<BigInt>) -> Self {
        QuotientStructure { invariant_factors: diag.into_iter().filter(|d| !d.is_one()).collect() }
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.order().to_u64()
    }

    /// Minimal number of generators.
    pub fn torsion_rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn is_cyclic(&self) -> bool {
        self.torsion_rank() <= 1
    }

    /// Number of elements killed by `m`: ∏ gcd(m, dᵢ).
    pub fn count_killed_by(&self, m: &BigInt) -> BigInt {
        self.invariant_factors.iter().map(|d| d.gcd(m)).product()
    }
}

/// JSON shape `{ambient_rank, denominator, integer_rows}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct LatticeJson {
    ambient_rank: usize,
    #[serde(with = "bigint_repr")]
    denominator: BigInt,
    #[serde(with = "bigint_rows")]
    integer_rows: Vec<Vec<BigInt>>,
}

impl Serialize for Lattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LatticeJson {
            ambient_rank: self.ambient_rank,
            denominator: self.denominator.clone(),
            integer_rows: self.rows.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Lattice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = LatticeJson::deserialize(d)?;
        if j.denominator.is_zero() || j.integer_rows.iter().any(|r| r.len() != j.ambient_rank) {
            return Err(serde::de::Error::custom("malformed lattice"));
        }
        Ok(Lattice::from_integer_rows(j.ambient_rank, j.denominator, j.integer_rows))
    }
}

/// Integers travel as JSON numbers when they fit in `i64`, as decimal
/// strings otherwise.
mod bigint_repr {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(super) enum Raw {
        Int(i64),
        Str(String),
    }

    impl Raw {
        pub(super) fn into_bigint<E: serde::de::Error>(self) -> Result<BigInt, E> {
            match self {
                Raw::Int(i) => Ok(i.into()),
                Raw::Str(s) => s.parse().map_err(E::custom),
            }
        }
    }

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match x.to_i64() {
            Some(i) => s.serialize_i64(i),
            None => s.serialize_str(&x.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        Raw::deserialize(d)?.into_bigint()
    }
}

mod bigint_list {
    use super::bigint_repr::Raw;
    use num_bigint::BigInt;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&Wrap(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Raw>::deserialize(d)?.into_iter().map(|r| r.into_bigint()).collect()
    }

    pub(super) struct Wrap<'a>(pub &'a BigInt);
    impl serde::Serialize for Wrap<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            super::bigint_repr::serialize(self.0, s)
        }
    }
}

mod bigint_rows {
    use super::bigint_list::Wrap;
    use super::bigint_repr::Raw;
    use num_bigint::BigInt;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    struct Row<'a>(&'a [BigInt]);
    impl serde::Serialize for Row<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(self.0.len()))?;
            for x in self.0 {
                seq.serialize_element(&Wrap(x))?;
            }
            seq.end()
        }
    }

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&Row(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        Vec::<Vec<Raw>>::deserialize(d)?
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.into_bigint()).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn lex_examples() {
        assert_eq!(lex_compare(&qvec(&[1, 0]), &qvec(&[0, 5])).unwrap(), Ordering::Greater);
        assert_eq!(lex_compare(&qvec(&[0, 0]), &qvec(&[0, 0])).unwrap(), Ordering::Equal);
        let a = vec![BigRational::new(1.into(), 2.into()), BigRational::from_integer((-3).into())];
        let b = vec![BigRational::new(1.into(), 2.into()), BigRational::from_integer((-2).into())];
        assert_eq!(lex_compare(&a, &b).unwrap(), Ordering::Less);
        assert_eq!(lex_compare(&qvec(&[1]), &qvec(&[1, 2])), Err(Error::RankMismatch(1, 2)));
    }

    #[test]
    fn rational_rank_examples() {
        assert_eq!(Lattice::standard(2).rational_rank(), 2);
        assert_eq!(Lattice::new(2, &[qvec(&[1, 2]), qvec(&[2, 4])]).unwrap().rational_rank(), 1);
        let l = Lattice::new(
            2,
            &[qvec_frac(&[1, 0], 2), qvec_frac(&[0, 1], 3), qvec_frac(&[1, 1], 6)],
        )
        .unwrap();
        assert_eq!(l.rational_rank(), 2);
        // 3·(1/6,1/6) − (1/2,0) = (0,1/2), which with (0,1/3) gives (0,1/6)
        assert_eq!(l, Lattice::scaled(2, 6));
        assert_eq!(l.denominator(), &BigInt::from(6));
        assert_eq!(l.integer_rows(), &[big(&[1, 0]), big(&[0, 1])]);
    }

    #[test]
    fn q_rank_examples() {
        assert_eq!(Lattice::standard(2).q_rank(3).unwrap(), 2);
        assert_eq!(Lattice::trivial(3).q_rank(5).unwrap(), 0);
        let l = Lattice::new(2, &[qvec(&[2, 0]), qvec(&[0, 2])]).unwrap();
        assert_eq!(l.q_rank(2).unwrap(), 2);
        assert_eq!(Lattice::standard(1).q_rank(4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn quotient_examples() {
        for n in 2..6 {
            let q = Lattice::scaled(2, n).quotient(&Lattice::standard(2)).unwrap();
            assert_eq!(q.invariant_factors, big(&[n, n]));
            assert_eq!(q.order(), BigInt::from(n * n));
            assert_eq!(q.torsion_rank(), 2);
        }
        let l = Lattice::standard(2);
        assert_eq!(l.quotient(&l).unwrap(), QuotientStructure::trivial());
        let q = Lattice::scaled(1, 4).quotient(&Lattice::standard(1)).unwrap();
        assert_eq!(q.invariant_factors, big(&[4]));
        assert!(q.is_cyclic());
    }

    #[test]
    fn quotient_errors() {
        let z = Lattice::standard(2);
        let half = Lattice::scaled(2, 2);
        assert_eq!(z.quotient(&half), Err(Error::NotContained));
        let line = Lattice::new(2, &[qvec(&[1, 0])]).unwrap();
        assert!(matches!(z.quotient(&line), Err(Error::InfiniteIndex { big: 2, small: 1 })));
    }

    #[test]
    fn torsion_rank_and_cyclicity() {
        let q = QuotientStructure::from_diagonal(big(&[2, 6]));
        assert_eq!(q.torsion_rank(), 2);
        assert!(!QuotientStructure::from_diagonal(big(&[2, 2])).is_cyclic());
        assert!(QuotientStructure::from_diagonal(big(&[1, 4])).is_cyclic());
        assert_eq!(QuotientStructure::trivial().torsion_rank(), 0);
        assert_eq!(QuotientStructure::trivial().order(), BigInt::one());
    }

    #[test]
    fn convex_chain_examples() {
        let chain = Lattice::standard(2).convex_chain();
        assert_eq!(chain.len(), 3);
        assert_eq!(chain[1], Lattice::new(2, &[qvec(&[0, 1])]).unwrap());
        assert_eq!(Lattice::trivial(2).rank(), 0);
        assert_eq!(Lattice::new(2, &[qvec(&[1, 1])]).unwrap().rank(), 1);
    }

    #[test]
    fn sum_examples() {
        let s = Lattice::standard(2).sum(&Lattice::new(2, &[qvec_frac(&[1, 0], 2)]).unwrap()).unwrap();
        assert_eq!(s, Lattice::new(2, &[qvec_frac(&[1, 0], 2), qvec(&[0, 1])]).unwrap());
        let l = Lattice::scaled(2, 3);
        assert_eq!(l.sum(&Lattice::trivial(2)).unwrap(), l);
        let s = Lattice::scaled(1, 2).sum(&Lattice::scaled(1, 3)).unwrap();
        assert_eq!(s, Lattice::scaled(1, 6));
        assert!(Lattice::standard(1).sum(&Lattice::standard(2)).is_err());
    }

    #[test]
    fn json_shape() {
        let l = Lattice::scaled(2, 3);
        let j = serde_json::to_value(&l).unwrap();
        assert_eq!(j, serde_json::json!({"ambient_rank": 2, "denominator": 3, "integer_rows": [[1, 0], [0, 1]]}));
        let back: Lattice = serde_json::from_value(j).unwrap();
        assert_eq!(back, l);
    }
}
