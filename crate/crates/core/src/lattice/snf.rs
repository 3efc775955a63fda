use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Row-style Hermite normal form: nonzero rows only, pivots strictly
/// increasing to the right and positive, entries above each pivot reduced
/// into `[0, pivot)`. Returns the rows together with their pivot columns.
pub fn hermite(mut m: Vec<Vec<BigInt>>, cols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        // Euclid between rows until a single nonzero entry remains in column c
        loop {
            let nz: Vec<usize> = (r..m.len()).filter(|&i| !m[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| m[i][c].abs()).expect("nonempty");
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = m[i][c].div_floor(&m[r][c]);
                for k in c..cols {
                    let d = &q * &m[r][k];
                    m[i][k] -= d;
                }
                if !m[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[r][c].is_zero() {
            continue;
        }
        if m[r][c].is_negative() {
            for k in c..cols {
                m[r][k] = -&m[r][k];
            }
        }
        for i in 0..r {
            let q = m[i][c].div_floor(&m[r][c]);
            if !q.is_zero() {
                for k in c..cols {
                    let d = &q * &m[r][k];
                    m[i][k] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

/// Nonzero diagonal of the Smith normal form, in divisibility order and
/// with positive entries.
pub fn smith_diagonal(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        'pivot: loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !m[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return diag;
            };
            m.swap(t, bi);
            for row in m.iter_mut() {
                row.swap(t, bj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                let q = m[i][t].div_floor(&m[t][t]);
                if !q.is_zero() {
                    for k in t..cols {
                        let d = &q * &m[t][k];
                        m[i][k] -= d;
                    }
                }
                clean &= m[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = m[t][j].div_floor(&m[t][t]);
                if !q.is_zero() {
                    for row in m.iter_mut().skip(t) {
                        let d = &q * &row[t];
                        row[j] -= d;
                    }
                }
                clean &= m[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&m[i][j] % &m[t][t]).is_zero() {
                        for k in t..cols {
                            let v = m[i][k].clone();
                            m[t][k] += v;
                        }
                        continue 'pivot;
                    }
                }
            }
            break;
        }
        diag.push(m[t][t].abs());
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn smith_examples() {
        let d = smith_diagonal(mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        assert_eq!(d, vec![2.into(), 6.into(), 12.into()]);
        let d = smith_diagonal(mat(&[&[4]]));
        assert_eq!(d, vec![4.into()]);
        let d = smith_diagonal(mat(&[&[2, 0], &[0, 3]]));
        assert_eq!(d, vec![1.into(), 6.into()]);
    }

    #[test]
    fn hermite_example() {
        let (h, p) = hermite(mat(&[&[2, 4], &[1, 2], &[0, 3]]), 2);
        assert_eq!(h, mat(&[&[1, 2], &[0, 3]]));
        assert_eq!(p, vec![0, 1]);
    }
}
