use std::sync::Arc;

use crate::laurent::TowerElement;
use crate::ring::Ring;

#[derive(Debug)]
pub(crate) struct KummerData {
    pub(crate) n: usize,
    pub(crate) a: TowerElement,
}

/// Element of the commutative ring `F[α]/(α^n − a)`, stored as the
/// coefficients of `1, α, …, α^{n−1}`.
///
/// The ring need not be a field; only ring operations are used on it.
#[derive(Debug, Clone)]
pub struct KummerElement {
    pub(crate) ring: Arc<KummerData>,
    pub(crate) c: Vec<TowerElement>,
}

impl KummerElement {
    pub(crate) fn new(ring: &Arc<KummerData>, c: Vec<TowerElement>) -> Self {
        debug_assert_eq!(c.len(), ring.n);
        KummerElement { ring: ring.clone(), c }
    }

    /// `x·α^k`
    pub(crate) fn monomial(ring: &Arc<KummerData>, x: TowerElement, k: usize) -> Self {
        let zero = x.zero_like();
        let mut c = vec![zero; ring.n];
        c[k] = x;
        KummerElement::new(ring, c)
    }

    pub fn components(&self) -> &[TowerElement] {
        &self.c
    }

    /// The component on `1` if every `α`-component vanishes.
    pub fn base_part(&self) -> Option<&TowerElement> {
        self.c[1..].iter().all(|x| x.is_zero()).then_some(&self.c[0])
    }
}

impl PartialEq for KummerElement {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c
    }
}

impl Ring for KummerElement {
    fn zero_like(&self) -> Self {
        let z = self.c[0].zero_like();
        KummerElement::new(&self.ring, vec![z; self.ring.n])
    }

    fn one_like(&self) -> Self {
        KummerElement::monomial(&self.ring, self.c[0].one_like(), 0)
    }

    fn add(&self, rhs: &Self) -> Self {
        let c = self.c.iter().zip(&rhs.c).map(|(x, y)| x + y).collect();
        KummerElement::new(&self.ring, c)
    }

    fn sub(&self, rhs: &Self) -> Self {
        let c = self.c.iter().zip(&rhs.c).map(|(x, y)| x - y).collect();
        KummerElement::new(&self.ring, c)
    }

    fn mul(&self, rhs: &Self) -> Self {
        let n = self.ring.n;
        let zero = self.c[0].zero_like();
        let mut prod = vec![zero; 2 * n - 1];
        for (i, x) in self.c.iter().enumerate() {
            if x.is_exact_zero() {
                continue;
            }
            for (j, y) in rhs.c.iter().enumerate() {
                if y.is_exact_zero() {
                    continue;
                }
                prod[i + j] = &prod[i + j] + &(x * y);
            }
        }
        for k in (n..2 * n - 1).rev() {
            if !prod[k].is_exact_zero() {
                let t = &prod[k] * &self.ring.a;
                prod[k - n] = &prod[k - n] + &t;
            }
        }
        prod.truncate(n);
        KummerElement::new(&self.ring, prod)
    }

    fn neg(&self) -> Self {
        KummerElement::new(&self.ring, self.c.iter().map(|x| -x).collect())
    }

    fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }
}

pub(crate) fn mat_mul<R: Ring>(a: &[Vec<R>], b: &[Vec<R>]) -> Vec<Vec<R>> {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let zero = a[0][0].zero_like();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    (0..b.len()).fold(zero.clone(), |acc, k| acc.add(&a[i][k].mul(&b[k][j])))
                })
                .collect()
        })
        .collect()
}
