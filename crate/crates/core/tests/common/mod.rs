#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use valdiv::lattice::{Lattice, QVector};
use valdiv::laurent::TowerElement;
use valdiv::ring::Ring;
use valdiv::symbol::AlgebraElement;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Rational coefficients of `v` in the span of `basis`, by plain Gaussian
/// elimination on the augmented transpose.
pub fn span_coords(basis: &[QVector], v: &[BigRational]) -> Option<Vec<BigRational>> {
    let k = basis.len();
    let r = v.len();
    let mut m: Vec<Vec<BigRational>> =
        (0..r).map(|row| basis.iter().map(|b| b[row].clone()).chain([v[row].clone()]).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..k {
        let Some(p) = (row..r).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..r {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for c in 0..=k {
                    let d = &f * &m[row][c];
                    m[i][c] -= d;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|line| !line[k].is_zero()) {
        return None;
    }
    let mut out = vec![BigRational::zero(); k];
    for (i, &c) in pivots.iter().enumerate() {
        out[c] = m[i][k].clone();
    }
    Some(out)
}

pub fn in_lattice(basis: &[QVector], v: &[BigRational]) -> bool {
    span_coords(basis, v).is_some_and(|c| c.iter().all(|x| x.is_integer()))
}

/// `big` of rational rank `k ≤ r` in ambient rank `r` and the sublattice
/// `M·big` for a random nonsingular integer `k×k` matrix `M`, with `|det M|`.
pub fn random_pair<R: Rng>(rng: &mut R, max_rank: usize, entry: i64) -> (Lattice, Lattice, BigInt) {
    let r = rng.gen_range(1..=max_rank);
    let k = rng.gen_range(0..=r);
    loop {
        let mut gens: Vec<QVector> =
            (0..k).map(|_| (0..r).map(|_| rat(rng.gen_range(-3..=3), rng.gen_range(1..=4))).collect()).collect();
        if k > 0 && rng.gen_bool(0.5) {
            let extra: QVector = (0..r)
                .map(|c| gens.iter().map(|g| &g[c] * rat(rng.gen_range(-1..=1), rng.gen_range(1..=3))).sum())
                .collect();
            gens.push(extra);
        }
        let big = Lattice::new(r, &gens).unwrap();
        if big.rational_rank() != k {
            continue;
        }
        let basis = big.basis();
        let m: Vec<Vec<i64>> = (0..k).map(|_| (0..k).map(|_| rng.gen_range(-entry..=entry)).collect()).collect();
        let det = leibniz_det_i64(&m);
        if k > 0 && det.is_zero() {
            continue;
        }
        let small_gens: Vec<QVector> = m
            .iter()
            .map(|row| (0..r).map(|c| row.iter().zip(&basis).map(|(&x, b)| rat(x, 1) * &b[c]).sum()).collect())
            .collect();
        let small = if k == 0 { Lattice::trivial(r) } else { Lattice::new(r, &small_gens).unwrap() };
        return (big, small, det.abs());
    }
}

fn leibniz_det_i64(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = BigInt::zero();
    permute(&mut perm, 0, &mut |p| {
        let mut sign = 1i64;
        for i in 0..n {
            for j in i + 1..n {
                if p[i] > p[j] {
                    sign = -sign;
                }
            }
        }
        let prod: BigInt = (0..n).map(|i| BigInt::from(m[i][p[i]])).product();
        total += prod * sign;
    });
    if n == 0 {
        BigInt::one()
    } else {
        total
    }
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Enumerates `big/small` as explicit cosets and returns, for every
/// `m = 1..=order`, how many cosets are killed by `m`.
pub fn brute_killed_counts(big: &Lattice, small: &Lattice) -> Vec<usize> {
    let sb = small.basis();
    let gens = big.basis();
    let r = big.ambient_rank();
    let mut reps: Vec<QVector> = vec![vec![BigRational::zero(); r]];
    let mut frontier = 0;
    while frontier < reps.len() {
        let base = reps[frontier].clone();
        for g in gens.iter().flat_map(|g| [g.clone(), g.iter().map(|x| -x).collect::<QVector>()]) {
            let cand: QVector = base.iter().zip(&g).map(|(a, b)| a + b).collect();
            let known = reps.iter().any(|w| {
                let d: QVector = cand.iter().zip(w).map(|(a, b)| a - b).collect();
                in_lattice(&sb, &d)
            });
            if !known {
                reps.push(cand);
            }
        }
        frontier += 1;
        assert!(reps.len() <= 4096, "quotient too large to enumerate");
    }
    let order = reps.len();
    (1..=order)
        .map(|m| {
            reps.iter()
                .filter(|w| in_lattice(&sb, &w.iter().map(|x| x * rat(m as i64, 1)).collect::<Vec<_>>()))
                .count()
        })
        .collect()
}

/// Determinant by expansion over column subsets, memoized on the set of
/// used columns.
pub fn subset_det<R: Ring>(m: &[Vec<R>], one: &R) -> R {
    let n = m.len();
    let mut memo: Vec<Option<R>> = vec![None; 1 << n];
    memo[(1 << n) - 1] = Some(one.clone());
    fn go<R: Ring>(m: &[Vec<R>], mask: usize, memo: &mut Vec<Option<R>>) -> R {
        if let Some(v) = &memo[mask] {
            return v.clone();
        }
        let n = m.len();
        let row = mask.count_ones() as usize;
        let mut acc = m[0][0].zero_like();
        let mut sign_pos = true;
        for c in 0..n {
            if mask & (1 << c) != 0 {
                continue;
            }
            let term = m[row][c].mul(&go(m, mask | (1 << c), memo));
            acc = if sign_pos { acc.add(&term) } else { acc.sub(&term) };
            sign_pos = !sign_pos;
        }
        memo[mask] = Some(acc.clone());
        acc
    }
    go(m, 0, &mut memo)
}

/// `c₀² − u·c₁² − t·c₂² + u·t·c₃²` for `c₀ + c₁i + c₂j + c₃ij` with
/// `i² = u`, `j² = t`.
pub fn quaternion_norm(x: &AlgebraElement) -> TowerElement {
    let alg = x.algebra();
    let (u, t) = (alg.a(), alg.b());
    let sq = |e: &TowerElement| e.mul(e);
    sq(x.coeff(0, 0))
        .sub(&u.mul(&sq(x.coeff(1, 0))))
        .sub(&t.mul(&sq(x.coeff(0, 1))))
        .add(&u.mul(t).mul(&sq(x.coeff(1, 1))))
}
