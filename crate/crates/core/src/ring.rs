//! Minimal commutative-ring interface shared by the exact kernels, with the
//! division-free characteristic polynomial (Berkowitz) and Gaussian
//! elimination routines built on top of it.

use crate::error::{Error, Result};

/// A ring whose elements know enough about their parent to produce 0 and 1.
///
/// Methods take references so that big coefficients are never moved by
/// accident. `is_zero` means "no certified nonzero term": for truncated
/// series an `O(t^k)` value counts as zero.
pub trait Ring: Clone + std::fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// Rings in which every certified-nonzero element can be inverted.
pub trait DivisionRing: Ring {
    fn try_inv(&self) -> Result<Self>;

    /// Preference for pivots during elimination; smaller is better.
    fn pivot_weight(&self) -> i64 {
        0
    }
}

/// Coefficients of `det(X·I − M)`, leading coefficient first.
///
/// Division-free, so it works over any commutative ring (including the
/// non-field Kummer rings used for splitting representations).
pub fn charpoly<R: Ring>(m: &[Vec<R>], one: &R) -> Result<Vec<R>> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidInput("matrix is not square".into()));
    }
    let zero = one.zero_like();
    let mut vect = vec![one.clone()];
    for r in 0..n {
        // Toeplitz column: 1, -a_rr, -R C, -R A C, ..., -R A^{r-1} C
        let mut t = Vec::with_capacity(r + 2);
        t.push(one.clone());
        t.push(m[r][r].neg());
        let mut col: Vec<R> = (0..r).map(|i| m[i][r].clone()).collect();
        for _ in 0..r {
            let mut dot = zero.clone();
            for (k, c) in col.iter().enumerate() {
                dot = dot.add(&m[r][k].mul(c));
            }
            t.push(dot.neg());
            let next: Vec<R> = (0..r)
                .map(|i| {
                    let mut s = zero.clone();
                    for (k, c) in col.iter().enumerate() {
                        s = s.add(&m[i][k].mul(c));
                    }
                    s
                })
                .collect();
            col = next;
        }
        let mut next = Vec::with_capacity(r + 2);
        for i in 0..=r + 1 {
            let mut s = zero.clone();
            for j in 0..=i.min(r) {
                if i - j < t.len() {
                    s = s.add(&t[i - j].mul(&vect[j]));
                }
            }
            next.push(s);
        }
        vect = next;
    }
    Ok(vect)
}

const LAPLACE_MAX: usize = 6;

/// Division-free determinant by cofactor expansion along the rows, sharing
/// the minors of the lower rows across column subsets.
fn laplace_det<R: Ring>(m: &[Vec<R>], one: &R) -> Result<R> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidInput("matrix is not square".into()));
    }
    let mut minors: Vec<Option<R>> = vec![None; 1 << n];
    minors[0] = Some(one.clone());
    for k in 1..=n {
        let row = &m[n - k];
        for mask in 1usize..1 << n {
            if mask.count_ones() as usize != k {
                continue;
            }
            let mut acc: Option<R> = None;
            let mut positive = true;
            for c in (0..n).filter(|c| mask & (1 << c) != 0) {
                let term = row[c].mul(minors[mask & !(1 << c)].as_ref().expect("smaller minor"));
                acc = Some(match acc {
                    None if positive => term,
                    None => term.neg(),
                    Some(a) if positive => a.add(&term),
                    Some(a) => a.sub(&term),
                });
                positive = !positive;
            }
            minors[mask] = acc;
        }
    }
    Ok(minors[(1 << n) - 1].take().expect("full minor"))
}

/// Determinant, by cofactor expansion for small sizes and through the
/// characteristic polynomial otherwise.
pub fn det<R: Ring>(m: &[Vec<R>], one: &R) -> Result<R> {
    if m.len() <= LAPLACE_MAX {
        return laplace_det(m, one);
    }
    let cp = charpoly(m, one)?;
    let c = cp.last().cloned().unwrap_or_else(|| one.clone());
    Ok(if m.len() % 2 == 1 { c.neg() } else { c })
}

/// Reduced row echelon form in place; returns pivot columns.
fn echelon<R: DivisionRing>(m: &mut [Vec<R>]) -> Result<Vec<usize>> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let best = (r..rows)
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| m[i][c].pivot_weight());
        let Some(p) = best else { continue };
        m.swap(r, p);
        let inv = m[r][c].try_inv()?;
        for k in 0..cols {
            m[r][k] = m[r][k].mul(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..cols {
                    let d = f.mul(&m[r][k]);
                    m[i][k] = m[i][k].sub(&d);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Ok(pivots)
}

/// Determinant by Gaussian elimination over a division ring.
pub fn det_gauss<R: DivisionRing>(m: &[Vec<R>], one: &R) -> Result<R> {
    let n = m.len();
    let mut a: Vec<Vec<R>> = m.to_vec();
    let mut acc = one.clone();
    for c in 0..n {
        let best = (c..n)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| a[i][c].pivot_weight());
        let Some(p) = best else {
            return Ok(one.zero_like());
        };
        if p != c {
            a.swap(p, c);
            acc = acc.neg();
        }
        acc = acc.mul(&a[c][c]);
        let inv = a[c][c].try_inv()?;
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].mul(&inv);
            for k in c..n {
                let d = f.mul(&a[c][k]);
                a[i][k] = a[i][k].sub(&d);
            }
        }
    }
    Ok(acc)
}

/// Basis of the right nullspace `{x : M x = 0}`.
pub fn nullspace<R: DivisionRing>(m: &[Vec<R>], one: &R) -> Result<Vec<Vec<R>>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut a = m.to_vec();
    let pivots = echelon(&mut a)?;
    let zero = one.zero_like();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![zero.clone(); cols];
        v[free] = one.clone();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = a[row][free].neg();
        }
        basis.push(v);
    }
    Ok(basis)
}

/// Solves `M x = b` for square invertible `M`.
pub fn solve<R: DivisionRing>(m: &[Vec<R>], b: &[R]) -> Result<Vec<R>> {
    let n = m.len();
    if b.len() != n {
        return Err(Error::InvalidInput("right-hand side has wrong length".into()));
    }
    let mut aug: Vec<Vec<R>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = echelon(&mut aug)?;
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return Err(Error::NotAUnit);
    }
    Ok(aug.into_iter().map(|mut r| r.pop().expect("augmented column")).collect())
}
