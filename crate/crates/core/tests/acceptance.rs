//! Acceptance suite: one PASS/FAIL line per criterion, with its time limit.
//!
//! Every randomized suite uses a fixed seed. Checks pair a library result with
//! an oracle computed here from first principles wherever one exists.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pdnf::cli::{parse_expression, Context};
use pdnf::field::{Scalar, Spectrum, Weight};
use pdnf::ideals::{
    extract_semiinvariants, is_invariant, lf_extract_semiinvariants, single_resonance_primes, IdealHandle,
};
use pdnf::linalg::{confluent_vandermonde_matrix, ExactMatrix};
use pdnf::normalform::{is_pdnf, lg_nilpotency_bound, lg_nilpotency_index, normalize};
use pdnf::poly::{lie_derivative, Monomial, Series, VectorField};

const AC1_LIMIT: Duration = Duration::from_secs(1);
const AC2_LIMIT: Duration = Duration::from_secs(10);
const AC3_LIMIT: Duration = Duration::from_secs(60);
const AC4_LIMIT: Duration = Duration::from_secs(60);
const AC5_LIMIT: Duration = Duration::from_secs(60);
const AC6_LIMIT: Duration = Duration::from_secs(60);
const AC7_LIMIT: Duration = Duration::from_secs(60);
const AC8_LIMIT: Duration = Duration::from_secs(60);

const AC3_INSTANCES: usize = 200;
const AC4_INSTANCES: usize = 200;
const AC5_INSTANCES: usize = 100;
const AC6_LIE_INSTANCES: usize = 500;
const AC8_INSTANCES: usize = 1000;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn fail<E: std::fmt::Debug>(what: &str) -> impl FnOnce(E) -> String + '_ {
    move |e| format!("{what}: {e:?}")
}

fn int(v: i64) -> Scalar {
    Scalar::from_int(v)
}

fn s2(terms: &[(i64, &[u32])]) -> Series {
    Series::from_int_terms(2, terms)
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

/// `Σ α_j λ_j` for a monomial `x^α`.
fn int_weight(m: &Monomial, lambda: &[i64]) -> i64 {
    m.exponents().iter().zip(lambda).map(|(&a, &l)| i64::from(a) * l).sum()
}

fn vec_weight(m: &Monomial, lambda: &[Vec<i64>]) -> Vec<i64> {
    let d = lambda[0].len();
    (0..d)
        .map(|k| m.exponents().iter().zip(lambda).map(|(&a, l)| i64::from(a) * l[k]).sum())
        .collect()
}

fn monomials_between(n: usize, low: u32, high: u32) -> Vec<Monomial> {
    (low..=high).flat_map(|d| Monomial::all_of_degree(n, d)).collect()
}

fn small_coeff(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    loop {
        let c = rng.gen_range(-bound..=bound);
        if c != 0 {
            return c;
        }
    }
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, low: u32, high: u32, terms: usize) -> Series {
    let pool = monomials_between(n, low, high);
    let mut s = Series::zero(n);
    for _ in 0..terms {
        let m = pool.choose(rng).expect("nonempty").clone();
        s.add_term(m, int(small_coeff(rng, 3)));
    }
    s
}

/// Membership in `⟨gens⟩ + ⟨x⟩^N` by linear algebra on the span of all
/// products `m·g` below degree `N`, independent of any Gröbner basis.
struct Span {
    columns: Vec<Monomial>,
    index: BTreeMap<Monomial, usize>,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Span {
    fn new(n: usize, gens: &[Series], order: u32) -> Span {
        let columns = Monomial::all_below(n, order);
        let index: BTreeMap<Monomial, usize> = columns.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect();
        let mut raw = Vec::new();
        for g in gens {
            let g = g.truncated(order);
            let Some(low) = g.min_degree() else { continue };
            for m in Monomial::all_below(n, order - low) {
                let mut row = vec![Scalar::zero(); columns.len()];
                for (b, c) in g.terms() {
                    let prod = b.mul(&m);
                    if prod.degree() < order {
                        row[index[&prod]] = c.clone();
                    }
                }
                raw.push(row);
            }
        }
        if raw.is_empty() {
            return Span {
                columns,
                index,
                rows: Vec::new(),
                pivots: Vec::new(),
            };
        }
        let (rref, pivots) = ExactMatrix::from_rows(raw).expect("rectangular").rref();
        let rows = (0..pivots.len()).map(|r| rref.row(r).to_vec()).collect();
        Span {
            columns,
            index,
            rows,
            pivots,
        }
    }

    fn contains(&self, p: &Series) -> bool {
        let order = self.columns.last().map_or(0, |m| m.degree() + 1);
        let mut v = vec![Scalar::zero(); self.columns.len()];
        for (m, c) in p.truncated(order).terms() {
            v[self.index[m]] = c.clone();
        }
        for (row, &col) in self.rows.iter().zip(&self.pivots) {
            if v[col].is_zero() {
                continue;
            }
            let factor = v[col].clone();
            for (x, r) in v.iter_mut().zip(row) {
                *x -= &(&factor * r);
            }
        }
        v.iter().all(Zero::is_zero)
    }
}

// ---------------------------------------------------------------- AC1

fn ac1() -> Outcome {
    let f = vec![Series::var(2, 0), s2(&[(3, &[0, 1]), (1, &[3, 0])])];
    let vf = VectorField::new(f.clone()).map_err(fail("field"))?;
    ensure!(
        vf.semisimple().map_err(fail("B_s"))? == ExactMatrix::from_int_rows(&[&[1, 0], &[0, 3]]),
        "B_s is not diag(1, 3)"
    );
    let g = vf.perturbation().to_vec();
    ensure!(g == vec![Series::zero(2), s2(&[(1, &[3, 0])])], "g differs: {g:?}");

    let psi = s2(&[(1, &[3, 0]), (1, &[0, 1]), (1, &[0, 2])]);
    let l1 = lie_derivative(&g, &psi).map_err(fail("L_g"))?;
    ensure!(l1 == s2(&[(1, &[3, 0]), (2, &[3, 1])]), "L_g(psi) = {l1:?}");
    let l2 = lie_derivative(&g, &l1).map_err(fail("L_g^2"))?;
    ensure!(l2 == s2(&[(2, &[6, 0])]), "L_g^2(psi) = {l2:?}");
    let mut lk = l2;
    for k in 3..=8 {
        lk = lie_derivative(&g, &lk).map_err(fail("L_g^k"))?;
        ensure!(lk.is_zero(), "L_g^{k}(psi) = {lk:?}");
    }
    let index = lg_nilpotency_index(&vf, &psi, 8).map_err(fail("index"))?;
    ensure!(index == 3, "nilpotency index {index}");

    let closed = IdealHandle::new(2, vec![psi.clone()], 8)
        .and_then(|i| i.invariant_closure(&f))
        .map_err(fail("closure"))?;
    let ideal = closed.with_generators(vec![psi.clone()]).map_err(fail("ideal"))?;
    let out = lf_extract_semiinvariants(&ideal, &vf).map_err(fail("extraction"))?;
    let cert = &out.certificates[0];

    // W entry by entry, as C(l, p) * w^(l - p) written out
    let w: [[i64; 6]; 6] = [
        [1, 1, 0, 0, 0, 0],
        [3, 6, 1, 1, 0, 0],
        [3i64.pow(2), 6i64.pow(2), 2 * 3, 2 * 6, 1, 1],
        [3i64.pow(3), 6i64.pow(3), 3 * 3i64.pow(2), 3 * 6i64.pow(2), 3 * 3, 3 * 6],
        [3i64.pow(4), 6i64.pow(4), 4 * 3i64.pow(3), 4 * 6i64.pow(3), 6 * 3i64.pow(2), 6 * 6i64.pow(2)],
        [3i64.pow(5), 6i64.pow(5), 5 * 3i64.pow(4), 5 * 6i64.pow(4), 10 * 3i64.pow(3), 10 * 6i64.pow(3)],
    ];
    let rows: Vec<&[i64]> = w.iter().map(|r| &r[..]).collect();
    ensure!(cert.matrix == ExactMatrix::from_int_rows(&rows), "matrix differs: {:?}", cert.matrix);
    let det = cert.determinant.as_rational().map(|q| q.abs());
    ensure!(
        det == Some(BigRational::from_integer(BigInt::from(19683))) && 19683 == 3i64.pow(9),
        "|det W| = {det:?}"
    );
    let solution = vec![
        s2(&[(1, &[3, 0]), (1, &[0, 1])]),
        s2(&[(1, &[0, 2])]),
        s2(&[(1, &[3, 0])]),
        s2(&[(2, &[3, 1])]),
        Series::zero(2),
        s2(&[(2, &[6, 0])]),
    ];
    let got: Vec<Series> = cert.solution.iter().map(Series::as_polynomial).collect();
    ensure!(got == solution, "solution vector {got:?}");
    cert.verify(&ideal).map_err(fail("certificate"))?;
    let want = vec![s2(&[(1, &[3, 0]), (1, &[0, 1])]), s2(&[(1, &[0, 2])])];
    ensure!(out.generators == want, "generators {:?}", out.generators);

    // the same matrix printed by the command line
    let cli = Command::new(env!("CARGO_BIN_EXE_pdnf"))
        .args(["extract", "--close"])
        .arg(fixture("example.json"))
        .output()
        .map_err(fail("spawn"))?;
    ensure!(cli.status.code() == Some(0), "cli exit {:?}", cli.status.code());
    let report: serde_json::Value = serde_json::from_slice(&cli.stdout).map_err(fail("report"))?;
    let printed = &report["ideals"]["I"]["certificates"][0]["matrix"];
    let expected: Vec<Vec<String>> = w.iter().map(|r| r.iter().map(i64::to_string).collect()).collect();
    ensure!(*printed == serde_json::json!(expected), "printed matrix {printed}");
    ensure!(
        report["ideals"]["I"]["generators"] == serde_json::json!(["x^3 + y", "y^2"]),
        "printed generators {}",
        report["ideals"]["I"]["generators"]
    );
    Ok("L_g iterates, 6x6 matrix, |det W| = 19683 = 3^9, generators {x^3 + y, y^2}".into())
}

// ---------------------------------------------------------------- AC2

fn combinations(pool: &[i64], q: usize) -> Vec<Vec<i64>> {
    if q == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (k, &first) in pool.iter().enumerate() {
        for mut rest in combinations(&pool[k + 1..], q - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn binom(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn ac2() -> Outcome {
    let pool: Vec<i64> = (-5..=5).collect();
    let mut count = 0;
    for q in 1..=4 {
        for nodes in combinations(&pool, q) {
            let scalars: Vec<Scalar> = nodes.iter().map(|&v| int(v)).collect();
            for m in 1..=4usize {
                let w = confluent_vandermonde_matrix(&scalars, m).map_err(fail("matrix"))?;
                // entry (ℓ, p·q + k) = C(ℓ, p)·w_k^(ℓ−p)
                let size = q * m;
                for l in 0..size {
                    for p in 0..m {
                        for (k, &node) in nodes.iter().enumerate() {
                            let want = if l < p {
                                BigInt::zero()
                            } else {
                                binom(l, p) * BigInt::from(node).pow((l - p) as u32)
                            };
                            let got = w.get(l, p * q + k);
                            ensure!(
                                *got == Scalar::from_rational(BigRational::from_integer(want.clone())),
                                "nodes {nodes:?}, m = {m}: entry ({l}, {}) is {got}, expected {want}",
                                p * q + k
                            );
                        }
                    }
                }
                let det = w.determinant().map_err(fail("determinant"))?;
                let mut oracle = BigInt::one();
                for i in 0..q {
                    for j in i + 1..q {
                        oracle *= BigInt::from((nodes[j] - nodes[i]).abs()).pow((m * m) as u32);
                    }
                }
                ensure!(!det.is_zero(), "nodes {nodes:?}, m = {m}: singular");
                let abs = det.as_rational().map(|d| d.abs());
                ensure!(
                    abs == Some(BigRational::from_integer(oracle.clone())),
                    "nodes {nodes:?}, m = {m}: |det| = {det}, product formula {oracle}"
                );
                count += 1;
            }
        }
    }
    Ok(format!("{count} node sets x block counts, all nonsingular and matching the product formula"))
}

// ---------------------------------------------------------------- AC3 / AC6

struct PdnfInstance {
    field: VectorField,
    lambda: Vec<i64>,
    /// Linear nilpotent part, built here.
    nilpotent: ExactMatrix,
    order: u32,
    closure: IdealHandle,
}

const SPECTRA_2: [[i64; 2]; 8] = [[1, 2], [1, 3], [1, 1], [2, 1], [1, -1], [0, 1], [2, 2], [1, -2]];
const SPECTRA_3: [[i64; 3]; 8] = [
    [1, 2, 3],
    [1, 1, 2],
    [1, -1, 0],
    [1, 1, 1],
    [2, 1, 3],
    [1, 2, -1],
    [1, -2, 1],
    [1, 3, 2],
];

/// A field in PDNF at order `N`: `diag(λ)·x`, a random nilpotent part between
/// equal eigenvalues and random resonant monomials of degrees `2..=N`.
fn random_pdnf(rng: &mut ChaCha8Rng, n: usize, order: u32) -> (Vec<Series>, Vec<i64>, ExactMatrix) {
    let lambda: Vec<i64> = if n == 2 {
        SPECTRA_2.choose(rng).expect("nonempty").to_vec()
    } else {
        SPECTRA_3.choose(rng).expect("nonempty").to_vec()
    };
    let mut nil = ExactMatrix::zeros(n, n);
    let mut comps = Vec::with_capacity(n);
    for i in 0..n {
        let mut c = Series::monomial(Monomial::var(n, i), int(lambda[i]));
        for j in i + 1..n {
            if lambda[j] == lambda[i] && rng.gen_bool(0.6) {
                let a = small_coeff(rng, 2);
                nil.set(i, j, int(a));
                c.add_term(Monomial::var(n, j), int(a));
            }
        }
        let resonant: Vec<Monomial> = monomials_between(n, 2, order)
            .into_iter()
            .filter(|m| int_weight(m, &lambda) == lambda[i])
            .collect();
        for _ in 0..rng.gen_range(0..=3) {
            if let Some(m) = resonant.choose(rng) {
                c.add_term(m.clone(), int(small_coeff(rng, 3)));
            }
        }
        comps.push(c);
    }
    (comps, lambda, nil)
}

fn ac3(instances: &mut Vec<PdnfInstance>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x3);
    let mut proper = 0;
    for case in 0..AC3_INSTANCES {
        let n = if case % 2 == 0 { 2 } else { 3 };
        let order = [4, 5, 6][rng.gen_range(0..3)];
        let (comps, lambda, nilpotent) = random_pdnf(&mut rng, n, order);
        let field = VectorField::new(comps.clone()).map_err(fail("field"))?;
        ensure!(
            is_pdnf(&field, order).map_err(fail("is_pdnf"))?.pdnf,
            "case {case}: constructed field rejected as non-PDNF"
        );
        let gens: Vec<Series> = (0..rng.gen_range(1..=2))
            .map(|_| {
                let terms = rng.gen_range(1..=3);
                random_poly(&mut rng, n, 1, order - 1, terms)
            })
            .collect();
        let closure = IdealHandle::new(n, gens, order)
            .and_then(|i| i.invariant_closure(&comps))
            .map_err(fail("closure"))?;
        ensure!(
            is_invariant(&closure, &comps).map_err(fail("L_f"))?.invariant,
            "case {case}: closure is not L_f-invariant"
        );
        let bs: Vec<Series> = (0..n)
            .map(|i| Series::monomial(Monomial::var(n, i), int(lambda[i])))
            .collect();
        let check = is_invariant(&closure, &bs).map_err(fail("L_Bs"))?;
        ensure!(
            check.invariant,
            "case {case}: lambda {lambda:?}, N = {order}: not L_Bs-invariant, witness {:?}",
            check.witness
        );
        if (0..n).any(|i| !closure.member(&Series::var(n, i))) {
            proper += 1;
        }
        instances.push(PdnfInstance {
            field,
            lambda,
            nilpotent,
            order,
            closure,
        });
    }
    Ok(format!(
        "{AC3_INSTANCES} closed ideals of PDNF fields are L_Bs-invariant ({proper} strictly inside the maximal ideal)"
    ))
}

/// Smallest `s` with `m^s = 0`, or `u32::MAX` when `m` is not nilpotent.
fn nilpotency(m: &ExactMatrix) -> u32 {
    let mut power = ExactMatrix::identity(m.rows());
    for s in 0..=m.rows() as u32 {
        if power.is_zero() {
            return s;
        }
        power = power.checked_mul(m).expect("square");
    }
    u32::MAX
}

fn ac6(instances: &[PdnfInstance]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6);
    let mut nonzero = 0;
    for case in 0..AC6_LIE_INSTANCES {
        let n = rng.gen_range(2..=3);
        let j = rng.gen_range(2..=5u32);
        let field: Vec<Series> = (0..n)
            .map(|_| {
                let terms = rng.gen_range(0..=3);
                random_poly(&mut rng, n, j, j, terms)
            })
            .collect();
        let deg = rng.gen_range(0..=4u32);
        let m = Monomial::all_of_degree(n, deg).choose(&mut rng).expect("nonempty").clone();
        let image = lie_derivative(&field, &Series::monomial(m, Scalar::one())).map_err(fail("lie"))?;
        if image.is_zero() {
            continue;
        }
        nonzero += 1;
        let want = deg + j - 1;
        ensure!(
            image.min_degree() == Some(want) && image.degree() == Some(want) && want > deg,
            "case {case}: degree {deg} monomial, degree {j} field: image degrees {:?}..{:?}",
            image.min_degree(),
            image.degree()
        );
    }

    let mut checked = 0;
    let mut largest = 0;
    for (case, inst) in instances.iter().enumerate() {
        let n = inst.lambda.len();
        let s = u64::from(nilpotency(&inst.nilpotent));
        let comps = inst.field.components().map_err(fail("components"))?;
        let g: Vec<Series> = comps
            .iter()
            .enumerate()
            .map(|(i, c)| c - &Series::monomial(Monomial::var(n, i), int(inst.lambda[i])))
            .collect();
        for phi in inst.closure.generators() {
            let Some(low) = phi.min_degree() else { continue };
            let bound: u64 = (u64::from(low)..u64::from(inst.order)).map(|k| k * (s - 1) + 1).sum();
            let mut current = phi.truncated(inst.order);
            let mut steps = 0u64;
            while !current.is_zero() {
                ensure!(steps <= bound, "case {case}: L_g iteration passed the bound {bound}");
                current = lie_derivative(&g, &current).map_err(fail("L_g"))?.truncated(inst.order);
                steps += 1;
            }
            let index = lg_nilpotency_index(&inst.field, phi, inst.order).map_err(fail("index"))?;
            ensure!(u64::from(index) == steps, "case {case}: index {index}, direct count {steps}");
            ensure!(
                lg_nilpotency_bound(&inst.field, phi, inst.order) == bound,
                "case {case}: library bound differs from {bound}"
            );
            largest = largest.max(steps);
            checked += 1;
        }
    }
    Ok(format!(
        "{nonzero} nonzero Lie derivatives raise the degree by j - 1; {checked} L_g indices within the bound (max {largest})"
    ))
}

// ---------------------------------------------------------------- AC4

fn ac4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4);
    let mut certified = 0;
    let mut extracted = 0;
    for case in 0..AC4_INSTANCES {
        let n = if case % 2 == 0 { 2 } else { 3 };
        let order = if n == 2 { rng.gen_range(4..=6) } else { rng.gen_range(4..=5) };
        let concrete = case % 4 < 2;
        let lambda: Vec<Vec<i64>> = (0..n)
            .map(|_| {
                if concrete {
                    vec![rng.gen_range(-3..=3)]
                } else {
                    vec![rng.gen_range(-2..=2), rng.gen_range(-2..=2)]
                }
            })
            .collect();
        let spectrum = if concrete {
            Spectrum::concrete(&lambda.iter().map(|l| int(l[0])).collect::<Vec<_>>())
        } else {
            let weights = lambda
                .iter()
                .map(|l| Weight::from_ints(l))
                .collect();
            Spectrum::symbolic(weights, None).map_err(fail("spectrum"))?
        };

        let psi: Vec<Series> = (0..rng.gen_range(1..=2))
            .map(|_| {
                let terms = rng.gen_range(2..=4);
                random_poly(&mut rng, n, 1, order - 1, terms)
            })
            .collect();
        // the L_Bs-invariant ideal generated by psi and its weight components
        let mut all = psi.clone();
        for p in &psi {
            let mut parts: BTreeMap<Vec<i64>, Series> = BTreeMap::new();
            for (m, c) in p.terms() {
                parts
                    .entry(vec_weight(m, &lambda))
                    .or_insert_with(|| Series::zero(n))
                    .add_term(m.clone(), c.clone());
            }
            all.extend(parts.into_values());
        }
        let ambient = IdealHandle::new(n, all.clone(), order).map_err(fail("ideal"))?;
        let ideal = ambient.with_generators(psi.clone()).map_err(fail("generators"))?;
        let out = extract_semiinvariants(&ideal, &spectrum).map_err(fail(&format!("case {case}")))?;

        let span_in = Span::new(n, &all, order);
        let span_out = Span::new(n, &out.generators, order);
        for g in &out.generators {
            let ws: BTreeSet<Vec<i64>> = g.terms().map(|(m, _)| vec_weight(m, &lambda)).collect();
            ensure!(ws.len() == 1, "case {case}: generator {g:?} mixes weights {ws:?}");
            ensure!(span_in.contains(g), "case {case}: generator {g:?} is not a member");
        }
        for g in &all {
            ensure!(span_out.contains(g), "case {case}: {g:?} is not generated by the extraction");
        }
        for cert in &out.certificates {
            cert.verify(&ideal).map_err(fail("certificate"))?;
            certified += 1;
        }
        extracted += out.generators.len();
    }
    Ok(format!(
        "{AC4_INSTANCES} ideals, {extracted} weight-homogeneous members generating each ideal, {certified} Vandermonde certificates re-verified"
    ))
}

// ---------------------------------------------------------------- AC5

fn random_linear_part(rng: &mut ChaCha8Rng, n: usize) -> ExactMatrix {
    let kind = rng.gen_range(0..4);
    let mut j = ExactMatrix::zeros(n, n);
    match kind {
        // real diagonal
        0 => {
            for i in 0..n {
                j.set(i, i, int(rng.gen_range(-3..=3)));
            }
        }
        // a Jordan block
        1 => {
            let a = rng.gen_range(-2..=3);
            for i in 0..n {
                j.set(i, i, int(a));
            }
            j.set(0, 1, Scalar::one());
            if n == 3 && rng.gen_bool(0.5) {
                j.set(2, 2, int(rng.gen_range(-2..=3)));
            }
        }
        // a rotation block a ± b·i
        2 => {
            let a = rng.gen_range(-2..=2);
            let b = rng.gen_range(1..=2);
            j.set(0, 0, int(a));
            j.set(1, 1, int(a));
            j.set(0, 1, int(-b));
            j.set(1, 0, int(b));
            if n == 3 {
                j.set(2, 2, int(rng.gen_range(-2..=2)));
            }
        }
        // resonant diagonal
        _ => {
            let choices: &[&[i64]] = if n == 2 { &[&[1, 2], &[1, 3], &[2, 1]] } else { &[&[1, 2, 3], &[1, 1, 2]] };
            for (i, &v) in choices.choose(rng).expect("nonempty").iter().enumerate() {
                j.set(i, i, int(v));
            }
        }
    }
    // conjugate by a unimodular P = L·U
    let mut l = ExactMatrix::identity(n);
    let mut u = ExactMatrix::identity(n);
    for r in 0..n {
        for c in 0..r {
            l.set(r, c, int(rng.gen_range(-1..=1)));
            u.set(c, r, int(rng.gen_range(-1..=1)));
        }
    }
    let p = l.checked_mul(&u).expect("square");
    let p_inv = p.inverse().expect("unimodular");
    p.checked_mul(&j).and_then(|pj| pj.checked_mul(&p_inv)).expect("square")
}

/// `DH·g − f∘H` modulo `⟨x⟩^order`, computed directly.
fn conjugacy_defect(f: &[Series], g: &[Series], h: &[Series], order: u32) -> Vec<Series> {
    (0..f.len())
        .map(|i| {
            let mut lhs = Series::zero(f.len());
            for (j, gj) in g.iter().enumerate() {
                lhs = &lhs + &(&h[i].derivative(j) * gj);
            }
            let rhs = f[i].compose(h).expect("composition");
            (&lhs - &rhs).truncated(order)
        })
        .collect()
}

fn ac5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5);
    let mut diagonalized = 0;
    let mut kept = 0;
    for case in 0..AC5_INSTANCES {
        let n = if case % 3 == 2 { 3 } else { 2 };
        let order = if n == 2 { rng.gen_range(3..=6) } else { rng.gen_range(3..=5) };
        let b = random_linear_part(&mut rng, n);
        let f: Vec<Series> = (0..n)
            .map(|i| {
                let mut c = Series::zero(n);
                for j in 0..n {
                    c.add_term(Monomial::var(n, j), b.get(i, j).clone());
                }
                let terms = rng.gen_range(1..=3);
                &c + &random_poly(&mut rng, n, 2, order, terms)
            })
            .collect();
        let vf = VectorField::new(f.clone()).map_err(fail("field"))?;
        let res = normalize(&vf, order).map_err(fail(&format!("case {case}: normalize")))?;
        let library = res.conjugacy_residual().map_err(fail("residual"))?;
        ensure!(library.iter().all(Series::is_zero), "case {case}: library conjugacy residual {library:?}");
        let (fo, ho) = res.in_original_basis().map_err(fail("original basis"))?;
        let direct = conjugacy_defect(&f, &fo, &ho, order + 1);
        ensure!(direct.iter().all(Series::is_zero), "case {case}: conjugacy defect {direct:?}");
        for (i, hi) in ho.iter().enumerate() {
            let linear = hi.truncated(2);
            ensure!(linear == Series::var(n, i), "case {case}: H is not near the identity: {hi:?}");
        }
        ensure!(
            is_pdnf(&res.normalized, order).map_err(fail("is_pdnf"))?.pdnf,
            "case {case}: normalized field is not in PDNF"
        );
        let comps = res.normalized.components().map_err(fail("components"))?;
        // λ must be the spectrum of B, with L = diag(λ) + nilpotent commuting
        let lambda = res.normalized.eigenvalue_values().ok_or("no eigenvalues")?;
        let mut linear = ExactMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                linear.set(i, j, comps[i].coeff(&Monomial::var(n, j)));
            }
        }
        let d = ExactMatrix::diagonal(&lambda);
        for l in &lambda {
            let shifted = &b - &ExactMatrix::identity(n).scale(l);
            ensure!(shifted.determinant().map_err(fail("det"))?.is_zero(), "case {case}: {l} is not an eigenvalue");
        }
        let nil = &linear - &d;
        ensure!(
            nil.checked_mul(&d).ok() == d.checked_mul(&nil).ok() && nilpotency(&nil) <= n as u32,
            "case {case}: linear part {linear:?} does not split as diag(lambda) + nilpotent"
        );
        for (i, c) in comps.iter().enumerate() {
            for (m, _) in c.terms() {
                let w: Scalar = m
                    .exponents()
                    .iter()
                    .zip(&lambda)
                    .map(|(&a, l)| &int(i64::from(a)) * l)
                    .sum();
                ensure!(w == lambda[i], "case {case}: non-resonant term {m:?} in component {i}");
                if m.degree() >= 2 {
                    kept += 1;
                }
            }
        }
        if res.metadata.diagonalized {
            diagonalized += 1;
        }
    }
    Ok(format!(
        "{AC5_INSTANCES} fields conjugated to PDNF ({diagonalized} needed a diagonalizing basis, {kept} resonant nonlinear terms kept)"
    ))
}

// ---------------------------------------------------------------- AC7

fn ac7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7);
    let alphas = [
        BigRational::zero(),
        BigRational::from_integer((-1).into()),
        BigRational::from_integer((-2).into()),
        BigRational::new((-1).into(), 2.into()),
    ];
    for n in 2..=6usize {
        let free: Vec<Weight> = (0..n - 1).map(|k| Weight::unit(n - 1, k)).collect();
        let alpha: Vec<BigRational> = (0..n - 1).map(|_| alphas.choose(&mut rng).expect("nonempty").clone()).collect();
        let last = free
            .iter()
            .zip(&alpha)
            .fold(Weight::zero(n - 1), |acc, (w, a)| &acc + &w.scale(a));
        let mut eigs = free.clone();
        eigs.push(last);
        let out = single_resonance_primes(&eigs, &alpha).map_err(fail("enumeration"))?;
        let got: BTreeSet<Vec<usize>> = out.candidates.iter().cloned().collect();
        let want: BTreeSet<Vec<usize>> = (1u32..(1 << n))
            .map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect())
            .collect();
        ensure!(out.candidates.len() == (1 << n) - 1, "n = {n}: {} candidates", out.candidates.len());
        ensure!(got == want, "n = {n}: candidate set differs");

        let mut positive = alpha.clone();
        positive[0] = BigRational::one();
        ensure!(
            single_resonance_primes(&free, &positive).is_err(),
            "n = {n}: positive coefficient accepted"
        );
    }
    let run = |file: &str| {
        Command::new(env!("CARGO_BIN_EXE_pdnf"))
            .arg("resonance")
            .arg(fixture(file))
            .output()
            .map_err(fail("spawn"))
    };
    let ok = run("single_resonance.json")?;
    ensure!(ok.status.code() == Some(0), "resonance exit {:?}", ok.status.code());
    let report: serde_json::Value = serde_json::from_slice(&ok.stdout).map_err(fail("report"))?;
    ensure!(report["candidates"].as_array().map(Vec::len) == Some(7), "cli lists {}", report["candidates"]);
    let bad = run("positive_resonance.json")?;
    ensure!(bad.status.code() == Some(3), "positive coefficient exit {:?}", bad.status.code());
    Ok("2^n - 1 monomial primes for n = 2..6; positive coefficient rejected with exit code 3".into())
}

// ---------------------------------------------------------------- AC8

fn ac8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x8);
    let pool = ["x", "y", "z", "w", "u", "v", "x1", "y_2", "alpha", "beta"];
    for case in 0..AC8_INSTANCES {
        let n = rng.gen_range(1..=4);
        let names: Vec<String> = pool.choose_multiple(&mut rng, n).map(|s| s.to_string()).collect();
        let mut s = Series::zero(n);
        for _ in 0..rng.gen_range(0..=8) {
            let deg = rng.gen_range(0..=6);
            let m = Monomial::all_of_degree(n, deg).choose(&mut rng).expect("nonempty").clone();
            let re = BigRational::new(rng.gen_range(-20..=20).into(), rng.gen_range(1..=9).into());
            let im = if rng.gen_bool(0.5) {
                BigRational::zero()
            } else {
                BigRational::new(rng.gen_range(-20..=20).into(), rng.gen_range(1..=9).into())
            };
            s.add_term(m, Scalar::new(re, im));
        }
        let printed = s.to_string_with(&names);
        let parsed = parse_expression(&printed, &Context::new(&names))
            .map_err(|e| format!("case {case}: '{printed}' fails to parse: {e}"))?;
        ensure!(parsed == s, "case {case}: '{printed}' parses to a different series");
        ensure!(parsed.to_string_with(&names) == printed, "case {case}: printing is not stable");
    }
    Ok(format!("{AC8_INSTANCES} random series survive print and parse"))
}

// ---------------------------------------------------------------- runner

fn main() {
    let mut pdnf_instances = Vec::new();
    let mut results: Vec<(&str, &str, Duration, Duration, Outcome)> = Vec::new();
    let mut timed = |id, what, limit, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        results.push((id, what, limit, start.elapsed(), outcome));
    };
    timed("AC1", "golden example", AC1_LIMIT, &mut ac1);
    timed("AC2", "confluent Vandermonde sweep", AC2_LIMIT, &mut ac2);
    timed("AC3", "L_f-invariant ideals are L_Bs-invariant", AC3_LIMIT, &mut || {
        ac3(&mut pdnf_instances)
    });
    timed("AC4", "semi-invariant extraction", AC4_LIMIT, &mut ac4);
    timed("AC5", "normal form correctness", AC5_LIMIT, &mut ac5);
    timed("AC6", "degree growth and L_g nilpotency", AC6_LIMIT, &mut || ac6(&pdnf_instances));
    timed("AC7", "single resonance enumeration", AC7_LIMIT, &mut ac7);
    timed("AC8", "parser round trip", AC8_LIMIT, &mut ac8);

    let mut failed = 0;
    for (id, what, limit, elapsed, outcome) in &results {
        let timing = format!("{:.2} s, limit {} s", elapsed.as_secs_f64(), limit.as_secs());
        match outcome {
            Ok(detail) if elapsed <= limit => println!("{id} PASS {what} [{timing}]: {detail}"),
            Ok(detail) => {
                failed += 1;
                println!("{id} FAIL {what} [{timing}]: over the time limit; {detail}");
            }
            Err(reason) => {
                failed += 1;
                println!("{id} FAIL {what} [{timing}]: {reason}");
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
