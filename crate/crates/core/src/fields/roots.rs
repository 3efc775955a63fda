use super::{cyclotomic, prime_factors, Field, FieldElement, FieldKind, ENUMERATION_LIMIT};
use crate::error::{Error, Result};

/// `x^n = 1` and `x^(n/r) ≠ 1` for every prime `r | n`.
pub fn has_exact_order(x: &FieldElement, n: u64) -> bool {
    if n == 0 || !x.pow(n).is_one() {
        return false;
    }
    prime_factors(n).into_iter().all(|r| !x.pow(n / r).is_one())
}

/// A primitive `n`-th root of unity.
///
/// Over finite fields the element with the smallest enumeration index is
/// returned. Over ℚ the cyclotomic field `ℚ[z]/(Φ_n)` is built for `n ≥ 3`
/// and its generator returned; the result then lives in that new field.
pub fn primitive_root_of_unity(field: &Field, n: u64) -> Result<FieldElement> {
    if n == 0 {
        return Err(Error::InvalidInput("root of unity of order 0".into()));
    }
    if n == 1 {
        return Ok(field.one());
    }
    let p = field.characteristic();
    if p != 0 && n.is_multiple_of(p) {
        return Err(Error::NoRootOfUnity(n));
    }
    if let Some(q) = field.size() {
        if (q - 1) % n as u128 != 0 {
            return Err(Error::NoRootOfUnity(n));
        }
        if field.depth() > 0 && q > ENUMERATION_LIMIT {
            return Err(Error::Unsupported(format!("searching {field} of size {q}")));
        }
        for i in 1..q {
            let x = field.element_at(i)?;
            if has_exact_order(&x, n) {
                return Ok(x);
            }
        }
        return Err(Error::NoRootOfUnity(n));
    }
    match field.kind() {
        FieldKind::Rational if n == 2 => Ok(field.from_i64(-1)),
        FieldKind::Rational => {
            let k = Field::extension(field, &cyclotomic(n)?, "z")?;
            k.generator()
        }
        _ => {
            // number field: look among ±g^k for the adjoined generators g
            let mut cands = vec![field.from_i64(-1)];
            let mut f = field.clone();
            loop {
                if let Ok(g) = f.generator() {
                    let g = field.embed(&g)?;
                    let mut pw = g.clone();
                    for _ in 0..(2 * n as usize * field.absolute_degree()) {
                        cands.push(pw.clone());
                        cands.push(-&pw);
                        pw = &pw * &g;
                    }
                }
                match f.kind() {
                    FieldKind::Extension { base, .. } => f = base.clone(),
                    _ => break,
                }
            }
            for c in &cands {
                for k in 1..=n {
                    let x = c.pow(k);
                    if has_exact_order(&x, n) {
                        return Ok(x);
                    }
                }
            }
            Err(Error::NoRootOfUnity(n))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Poly;

    #[test]
    fn smallest_primitive_fourth_root_mod_5() {
        let f5 = Field::prime(5).unwrap();
        assert_eq!(primitive_root_of_unity(&f5, 4).unwrap(), f5.from_i64(2));
        assert_eq!(primitive_root_of_unity(&f5, 1).unwrap(), f5.one());
        assert_eq!(primitive_root_of_unity(&f5, 3), Err(Error::NoRootOfUnity(3)));
        assert_eq!(primitive_root_of_unity(&f5, 5), Err(Error::NoRootOfUnity(5)));
    }

    #[test]
    fn corpus_roots() {
        let f7 = Field::prime(7).unwrap();
        assert_eq!(primitive_root_of_unity(&f7, 3).unwrap(), f7.from_i64(2));
        let f3 = Field::prime(3).unwrap();
        assert_eq!(primitive_root_of_unity(&f3, 2).unwrap(), f3.from_i64(2));
    }

    #[test]
    fn rational_fourth_root_builds_gaussian_field() {
        let q = Field::rational();
        let z = primitive_root_of_unity(&q, 4).unwrap();
        assert_eq!(z.field().to_string(), "Q[z]/(z^2+1)");
        assert!(has_exact_order(&z, 4));
        assert_eq!(primitive_root_of_unity(&q, 2).unwrap(), q.from_i64(-1));
    }

    #[test]
    fn exact_order_all_proper_powers() {
        for (p, n) in [(7u64, 6u64), (13, 12), (13, 4), (31, 5), (41, 8)] {
            let f = Field::prime(p).unwrap();
            let w = primitive_root_of_unity(&f, n).unwrap();
            for m in 1..n {
                assert!(!w.pow(m).is_one());
            }
            assert!(w.pow(n).is_one());
        }
    }

    #[test]
    fn root_in_extension() {
        let f3 = Field::prime(3).unwrap();
        let k = Field::extension(&f3, &Poly::new(&f3, vec![f3.one(), f3.zero(), f3.one()]), "w").unwrap();
        let w8 = primitive_root_of_unity(&k, 8).unwrap();
        assert!(has_exact_order(&w8, 8));
        let q = Field::rational();
        let qi = Field::extension(&q, &Poly::new(&q, vec![q.one(), q.zero(), q.one()]), "i").unwrap();
        let w4 = primitive_root_of_unity(&qi, 4).unwrap();
        assert!(has_exact_order(&w4, 4));
    }
}
