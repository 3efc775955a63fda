//! Seeded property suites over every module, with a pass/fail summary.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corpus::corpus_algebras;
use crate::error::Result;
use crate::fields::{Field, Poly};
use crate::graded::{homog_mul, tilde};
use crate::lattice::{lex_compare, Lattice, QVector};
use crate::laurent::twisted::{Twist, TwistedRing};
use crate::laurent::Tower;
use crate::parse::{parse_algebra, parse_profile};
use crate::ring::{det_gauss, Ring};
use crate::sk1::{decompose_norm_one, random_norm_one};
use crate::symbol::SymbolAlgebra;

pub const DEFAULT_SIZE: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelftestOptions {
    pub seed: u64,
    /// Cases per suite; zero runs nothing.
    pub size: usize,
    pub precision: usize,
    /// Run the algebra suites against a copy whose multiplication drops the
    /// commutation twist.
    pub mutant: bool,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions { seed: 0, size: DEFAULT_SIZE, precision: 16, mutant: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelftestSummary {
    pub seed: u64,
    pub size: usize,
    pub mutant: bool,
    pub suites: Vec<SuiteResult>,
    pub passed: bool,
}

impl SelftestSummary {
    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }
}

type Case<'a> = dyn FnMut(&mut ChaCha8Rng) -> Result<Option<String>> + 'a;

fn run_suite(name: &str, index: u64, opts: &SelftestOptions, case: &mut Case<'_>) -> SuiteResult {
    let mut failures = 0;
    let mut first_failure = None;
    for k in 0..opts.size {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream((index << 32) | k as u64);
        let outcome = match case(&mut rng) {
            Ok(None) => None,
            Ok(Some(msg)) => Some(msg),
            Err(e) => Some(format!("error: {e}")),
        };
        if let Some(msg) = outcome {
            failures += 1;
            first_failure.get_or_insert_with(|| format!("case {k}: {msg}"));
        }
    }
    log::debug!("suite {name}: {failures}/{} failed", opts.size);
    SuiteResult { name: name.to_string(), cases: opts.size, failures, first_failure }
}

fn fail(cond: bool, msg: impl FnOnce() -> String) -> Option<String> {
    if cond {
        None
    } else {
        Some(msg())
    }
}

fn lattice_case(rng: &mut ChaCha8Rng) -> Result<Option<String>> {
    let r = rng.gen_range(1..=3usize);
    let q = Field::rational();
    let mut gens: Vec<QVector> = (0..r)
        .map(|i| {
            let den = rng.gen_range(1..=4i64);
            (0..r).map(|c| BigRational::new(BigInt::from(i64::from(c == i)), BigInt::from(den))).collect()
        })
        .collect();
    gens.push((0..r).map(|_| BigRational::new(rng.gen_range(-3..=3i64).into(), rng.gen_range(1..=6i64).into())).collect());
    let big = Lattice::new(r, &gens)?;
    let basis = big.basis();
    let (m, d) = loop {
        let m: Vec<Vec<i64>> = (0..r).map(|_| (0..r).map(|_| rng.gen_range(-4..=4)).collect()).collect();
        let rows: Vec<Vec<_>> = m.iter().map(|row| row.iter().map(|&x| q.from_i64(x)).collect()).collect();
        let d = det_gauss(&rows, &q.one())?;
        if !d.is_zero() {
            break (m, d);
        }
    };
    let small_gens: Vec<QVector> = m
        .iter()
        .map(|row| {
            (0..r)
                .map(|c| row.iter().zip(&basis).map(|(&k, b)| BigRational::from_integer(k.into()) * &b[c]).sum())
                .collect()
        })
        .collect();
    let small = Lattice::new(r, &small_gens)?;
    let quot = big.quotient(&small)?;
    let index = d.as_rational().expect("rational determinant").abs();
    Ok(fail(BigRational::from_integer(quot.order()) == index, || format!("order {} but |det| {index}", quot.order()))
        .or_else(|| fail(quot.torsion_rank() <= small.rational_rank(), || "torsion rank exceeds rational rank".into())))
}

fn hensel_case(rng: &mut ChaCha8Rng, precision: usize) -> Result<Option<String>> {
    let p = [3u64, 5, 7, 11][rng.gen_range(0..4)];
    let k = Field::prime(p)?;
    let tower = Tower::new(&k, &["t"], precision)?;
    let u = tower.random_unit(rng, 4, precision as i64 / 2);
    let r = tower.residue(&u)?;
    let expected = k.elements()?.iter().any(|s| s * s == r);
    match tower.sqrt_unit(&u)? {
        Some(s) => Ok(fail(expected, || format!("{u} called square over F{p}"))
            .or_else(|| fail(s.mul(&s).sub(&u).is_zero(), || format!("bad root of {u}")))),
        None => Ok(fail(!expected, || format!("{u} called non-square over F{p}"))),
    }
}

fn norm_case(algs: &[(String, SymbolAlgebra)], rng: &mut ChaCha8Rng) -> Result<Option<String>> {
    for (name, alg) in algs {
        let x = alg.random(rng, 3, 2);
        let y = alg.random(rng, 3, 2);
        let lhs = x.mul(&y).nrd()?;
        let rhs = x.nrd()?.mul(&y.nrd()?);
        if !lhs.sub(&rhs).is_zero() {
            return Ok(Some(format!("nrd(xy) != nrd(x)nrd(y) in {name}")));
        }
    }
    Ok(None)
}

fn valuation_case(algs: &[(String, SymbolAlgebra)], rng: &mut ChaCha8Rng) -> Result<Option<String>> {
    for (name, alg) in algs {
        let x = alg.random_nonzero(rng, 2, 2);
        let y = alg.random_nonzero(rng, 2, 2);
        let (vx, vy) = (x.v_d()?, y.v_d()?);
        let sum: QVector = vx.iter().zip(&vy).map(|(a, b)| a + b).collect();
        if x.mul(&y).v_d()? != sum {
            return Ok(Some(format!("v(xy) != v(x) + v(y) in {name}")));
        }
        let s = x.add(&y);
        if !s.is_zero() {
            let low = if lex_compare(&vx, &vy)?.is_le() { &vx } else { &vy };
            if lex_compare(&s.v_d()?, low)?.is_lt() {
                return Ok(Some(format!("ultrametric inequality fails in {name}")));
            }
        }
        let f = alg.tower().random_element(rng, 2, 2);
        if !f.is_zero() && Some(alg.scalar(&f).v_d()?) != alg.tower().valuation_q(&f)? {
            return Ok(Some(format!("v_D does not restrict to v in {name}")));
        }
    }
    Ok(None)
}

fn witness_case(algs: &[(String, SymbolAlgebra)], rng: &mut ChaCha8Rng) -> Result<Option<String>> {
    for (name, alg) in algs.iter().filter(|(_, a)| a.degree() == 2) {
        let a = random_norm_one(alg, rng, 2)?;
        let w = decompose_norm_one(&a, rng)?;
        if !w.verify()? {
            return Ok(Some(format!("witness for {} does not verify in {name}", a.element())));
        }
    }
    Ok(None)
}

fn graded_case(algs: &[(String, SymbolAlgebra)], rng: &mut ChaCha8Rng) -> Result<Option<String>> {
    for (name, alg) in algs {
        let x = alg.random_nonzero(rng, 2, 2);
        let y = alg.random_nonzero(rng, 2, 2);
        let (hx, hy) = (tilde(&x)?, tilde(&y)?);
        if !homog_mul(&hx, &hy)?.equals(&tilde(&x.mul(&y))?)? {
            return Ok(Some(format!("tilde is not multiplicative in {name}")));
        }
        if !homog_mul(&hx, &hx.inverse()?)?.equals(&tilde(&alg.one())?)? {
            return Ok(Some(format!("homogeneous inverse fails in {name}")));
        }
    }
    Ok(None)
}

/// A random field, profile or algebra description in the input grammar.
pub fn random_description<R: Rng + ?Sized>(rng: &mut R) -> String {
    const PRIMES: [u64; 5] = [2, 3, 5, 7, 11];
    let vars = ["x", "y", "t", "s"];
    let bound = |rng: &mut R| match rng.gen_range(0..3) {
        0 => format!("={}", rng.gen_range(0..4)),
        1 => format!("<={}", rng.gen_range(0..4)),
        _ => "=inf".to_string(),
    };
    let base = match rng.gen_range(0..6) {
        0 => "Q".to_string(),
        1 => format!("F{}", PRIMES[rng.gen_range(0..5)]),
        2 => "F3[w]/(w^2 + 1)".to_string(),
        3 => format!("Qp(p={})", PRIMES[rng.gen_range(0..5)]),
        4 => format!("closed(char={})", [0, 2, 3][rng.gen_range(0..3)]),
        _ => {
            let mut parts = Vec::new();
            for q in PRIMES {
                if rng.gen_bool(0.4) {
                    parts.push(format!("cd{q}{}", bound(rng)));
                }
            }
            if rng.gen_bool(0.5) {
                parts.push(format!("cdq{}", bound(rng)));
            }
            if rng.gen_bool(0.5) {
                parts.push(format!("char={}", [0, 5, 7][rng.gen_range(0..3)]));
            }
            format!("decl({})", parts.join(", "))
        }
    };
    let m = rng.gen_range(0..=3);
    let tower: String = vars[..m].iter().map(|v| format!("(({v}))")).collect();
    if m == 0 || rng.gen_bool(0.4) {
        return format!("{base}{tower}");
    }
    let expr = |rng: &mut R| {
        let v = vars[rng.gen_range(0..m)];
        match rng.gen_range(0..5) {
            0 => v.to_string(),
            1 => format!("{}*{v}^{}", rng.gen_range(1..9), rng.gen_range(-2..4)),
            2 => format!("-{v} + {}", rng.gen_range(0..9)),
            3 => format!("({v} - 1)/({v} + 2)"),
            _ => format!("{v} + O({v}^{})", rng.gen_range(2..6)),
        }
    };
    let (a, b) = (expr(rng), expr(rng));
    let omega = if rng.gen_bool(0.3) { format!(", omega={}", rng.gen_range(2..5)) } else { String::new() };
    format!("symbol(n={}{omega}, a={a}, b={b}) over {base}{tower}", rng.gen_range(2..5))
}

fn parse_case(rng: &mut ChaCha8Rng) -> Result<Option<String>> {
    let text = random_description(rng);
    if text.starts_with("symbol") {
        let spec = parse_algebra(&text)?;
        Ok(fail(parse_algebra(&spec.to_string())? == spec, || format!("round trip of '{text}'")))
    } else {
        let p = parse_profile(&text)?;
        Ok(fail(parse_profile(&p.to_string())? == p, || format!("round trip of '{text}'")))
    }
}

fn twisted_case(ring: &TwistedRing, rng: &mut ChaCha8Rng) -> Result<Option<String>> {
    let x = ring.central_indeterminate(&ring.field().one(), 2)?;
    let z = ring.random(rng, 4, 3);
    let d = ring.field().random(rng);
    let lhs = ring.t().mul(&ring.constant(&d))?;
    let rhs = ring.constant(&ring.field().frobenius(&d)?).mul(&ring.t())?;
    Ok(fail(x.commutes_with(&z)?, || "t^2 is not central".into())
        .or_else(|| fail(lhs == rhs, || format!("t·{d} != σ({d})·t"))))
}

/// Runs every suite with per-case seeded streams.
pub fn selftest(opts: &SelftestOptions) -> Result<SelftestSummary> {
    let mut algs = corpus_algebras(opts.precision)?;
    if opts.mutant {
        for (_, a) in algs.iter_mut() {
            *a = a.with_broken_commutation();
        }
    }
    let f3 = Field::prime(3)?;
    let f9 = Field::extension(&f3, &Poly::new(&f3, vec![f3.one(), f3.zero(), f3.one()]), "w")?;
    let twisted = TwistedRing::new(&f9, Twist::Frobenius, opts.precision)?;
    let precision = opts.precision;
    let suites = vec![
        run_suite("lattice", 0, opts, &mut lattice_case),
        run_suite("hensel", 1, opts, &mut |rng| hensel_case(rng, precision)),
        run_suite("norm-multiplicativity", 2, opts, &mut |rng| norm_case(&algs, rng)),
        run_suite("valuation", 3, opts, &mut |rng| valuation_case(&algs, rng)),
        run_suite("commutator-witness", 4, opts, &mut |rng| witness_case(&algs, rng)),
        run_suite("graded", 5, opts, &mut |rng| graded_case(&algs, rng)),
        run_suite("parse-round-trip", 6, opts, &mut parse_case),
        run_suite("twisted", 7, opts, &mut |rng| twisted_case(&twisted, rng)),
    ];
    let passed = suites.iter().all(SuiteResult::passed);
    Ok(SelftestSummary { seed: opts.seed, size: opts.size, mutant: opts.mutant, suites, passed })
}

impl std::fmt::Display for SelftestSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for s in &self.suites {
            let status = if s.passed() { "pass" } else { "FAIL" };
            write!(f, "{status} {:<22} {}/{}", s.name, s.cases - s.failures, s.cases)?;
            if let Some(m) = &s.first_failure {
                write!(f, "  ({m})")?;
            }
            writeln!(f)?;
        }
        write!(f, "{}", if self.passed { "all suites passed" } else { "some suites failed" })
    }
}
