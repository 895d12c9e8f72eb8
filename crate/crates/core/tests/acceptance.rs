//! Acceptance gates. Each test covers one numbered criterion, prints a
//! single `criterion N PASS` line with its elapsed time, and fails the
//! run if the checked facts or the time budget are violated.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use conelab::catalog::{closed_form_size, config_size, support_max, thresholds};
use conelab::cremona::{
    apply, apply_word, cremona_reduce, enumerate_neg1, reflect, Generator, OrbitBudget,
    Permutation,
};
use conelab::rays::{
    build_candidate_class, classify_ray, formula_k_degree, formula_self_int,
    orbit_k_invariance_check, search_candidate_degrees,
};
use conelab::resolution::{chain_length, resolution_chain, simulate_blowups, LocalType};
use conelab::{DivisorClass, LatticeContext, QMembership};

fn pass(num: u32, what: &str, start: Instant, budget_ms: u128) {
    let ms = start.elapsed().as_millis();
    println!("criterion {num} PASS: {what} ({ms} ms)");
    assert!(
        ms <= budget_ms,
        "criterion {num} exceeded its {budget_ms} ms budget: took {ms} ms"
    );
}

fn ctx(n: usize) -> LatticeContext {
    LatticeContext::new(n).unwrap()
}

fn class(d: i64, m: &[i64]) -> DivisorClass {
    DivisorClass::from_ints(d, m)
}

#[test]
fn criterion_1_configuration_sizes() {
    let t0 = Instant::now();
    assert_eq!(config_size(2).unwrap(), 13);
    assert_eq!(config_size(3).unwrap(), 13);
    assert_eq!(config_size(4).unwrap(), 12);
    for d in 2..=200 {
        assert_eq!(
            config_size(d).unwrap(),
            closed_form_size(d).unwrap(),
            "inventory total and closed form disagree at degree {d}"
        );
    }
    pass(1, "inventory totals equal the closed form for d in [2,200]", t0, 1_000);
}

#[test]
fn criterion_2_size_thresholds() {
    let t0 = Instant::now();
    assert_eq!(thresholds(), (12, 37));
    assert_eq!(config_size(4).unwrap(), 12);
    assert_eq!(config_size(6).unwrap(), 37);
    for d in 2..=200 {
        let size = config_size(d).unwrap();
        assert!(size >= 12);
        assert_eq!(size == 12, d == 4, "12 must be attained at degree 4 only");
        if d >= 5 {
            assert!(size >= 37);
            assert_eq!(size == 37, d == 6, "37 must be attained at degree 6 only");
        }
    }
    pass(2, "size minima are (12, 37), attained at degrees 4 and 6", t0, 1_000);
}

#[test]
fn criterion_3_resolution_oracle_equivalence() {
    let t0 = Instant::now();
    let mut pairs = 0u64;
    for rho in 1u64..=300 {
        for delta in 1u64..=300 {
            if num_integer::gcd(rho, delta) != 1 {
                continue;
            }
            pairs += 1;
            let chain = resolution_chain(rho, delta).unwrap();
            assert_eq!(chain, simulate_blowups(rho, delta).unwrap());
            let mults = chain.multiplicities();
            let sum: u64 = mults.iter().sum();
            let sq: u64 = mults.iter().map(|&v| v * v).sum();
            assert_eq!(sum, rho + delta - 1, "multiplicity sum failed at ({rho},{delta})");
            assert_eq!(sq, rho * delta, "square sum failed at ({rho},{delta})");
            assert_eq!(chain_length(&LocalType::new(rho, delta).unwrap()), mults.len() as u64);
        }
    }
    assert!(pairs > 50_000);
    pass(
        3,
        "subtractive chain equals the blow-up simulation on all coprime pairs up to 300",
        t0,
        5_000,
    );
}

fn random_class(rng: &mut ChaCha8Rng, n: usize) -> DivisorClass {
    let d = rng.gen_range(-6i64..=9);
    let m: Vec<i64> = (0..n).map(|_| rng.gen_range(-5i64..=5)).collect();
    DivisorClass::from_ints(d, &m)
}

// Forward-cone sample: d is pushed to at least ceil(sqrt(sum of m_i^2)),
// so x^2 >= 0 and d >= 1, the region where reduction lands in the sorted
// chamber and canonical forms decide orbit equality.
fn random_forward_class(rng: &mut ChaCha8Rng, n: usize) -> DivisorClass {
    let m: Vec<i64> = (0..n).map(|_| rng.gen_range(-4i64..=6)).collect();
    let sq: i64 = m.iter().map(|v| v * v).sum();
    let mut root = 0i64;
    while root * root < sq {
        root += 1;
    }
    DivisorClass::from_ints((root + rng.gen_range(0i64..=3)).max(1), &m)
}

fn random_triple(rng: &mut ChaCha8Rng, n: usize) -> (usize, usize, usize) {
    let i = rng.gen_range(0..n);
    let j = loop {
        let j = rng.gen_range(0..n);
        if j != i {
            break j;
        }
    };
    let k = loop {
        let k = rng.gen_range(0..n);
        if k != i && k != j {
            break k;
        }
    };
    (i, j, k)
}

fn random_generator(rng: &mut ChaCha8Rng, n: usize) -> Generator {
    if rng.gen_bool(0.5) {
        let (i, j, k) = random_triple(rng, n);
        Generator::Reflect(i, j, k)
    } else {
        let i = rng.gen_range(0..n);
        let j = loop {
            let j = rng.gen_range(0..n);
            if j != i {
                break j;
            }
        };
        Generator::Permute(Permutation::transposition(n, i, j).unwrap())
    }
}

#[test]
fn criterion_4_isometry_suite() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(424_242);
    let mut checks = 0u64;
    for _ in 0..2_500 {
        let n = rng.gen_range(3usize..=10);
        let c = ctx(n);
        let x = random_class(&mut rng, n);
        let y = random_class(&mut rng, n);
        let g = random_generator(&mut rng, n);

        let gx = apply(&c, &x, &g).unwrap();
        let gy = apply(&c, &y, &g).unwrap();
        assert_eq!(c.pair(&gx, &gy).unwrap(), c.pair(&x, &y).unwrap());
        checks += 1;

        let (i, j, k) = random_triple(&mut rng, n);
        let twice = reflect(&c, &reflect(&c, &x, i, j, k).unwrap(), i, j, k).unwrap();
        assert_eq!(twice, x);
        checks += 1;

        let kan = c.canonical_class();
        assert_eq!(apply(&c, &kan, &g).unwrap(), kan);
        checks += 1;

        if !x.is_zero() {
            let s = rng.gen_range(1i64..=3);
            let scaled = DivisorClass::new(
                x.degree() * s,
                x.mults().iter().map(|v| v * s).collect(),
            );
            let a = c.primitive(&apply(&c, &scaled, &g).unwrap()).unwrap();
            let b = apply(&c, &c.primitive(&scaled).unwrap(), &g).unwrap();
            assert_eq!(a, b);
        }
        checks += 1;
    }
    assert_eq!(checks, 10_000);
    pass(4, "10^4 randomized isometry checks", t0, 5_000);
}

#[test]
fn criterion_5_reduction_invariance() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(51_515);
    for _ in 0..1_000 {
        let n = rng.gen_range(3usize..=10);
        let c = ctx(n);
        let x = random_forward_class(&mut rng, n);
        let word: Vec<Generator> = (0..rng.gen_range(0usize..=20))
            .map(|_| random_generator(&mut rng, n))
            .collect();
        let moved = apply_word(&c, &x, &word).unwrap();
        let a = cremona_reduce(&c, &x).unwrap();
        let b = cremona_reduce(&c, &moved).unwrap();
        assert_eq!(a.canonical, b.canonical, "canonical forms split for {x}");
        assert_eq!(apply_word(&c, &x, &a.witness).unwrap(), a.canonical);
        assert_eq!(apply_word(&c, &moved, &b.witness).unwrap(), b.canonical);
    }
    // Witness replay does not need the forward cone: the recorded word
    // reproduces the terminal class for arbitrary inputs.
    for _ in 0..1_000 {
        let n = rng.gen_range(3usize..=10);
        let c = ctx(n);
        let x = random_class(&mut rng, n);
        let r = cremona_reduce(&c, &x).unwrap();
        assert_eq!(apply_word(&c, &x, &r.witness).unwrap(), r.canonical);
    }
    pass(
        5,
        "reduction is word-invariant on 10^3 forward-cone classes and witnesses always replay",
        t0,
        30_000,
    );
}

// Independent check for the (-1)-class lists: a direct digit-by-digit
// search over 0 <= m_i <= d for each degree, plus the pure exceptional
// classes, pruned only by sum and square feasibility.
fn oracle_neg1(n: usize, bound: u64) -> Vec<DivisorClass> {
    let mut out = Vec::new();
    for i in 0..n {
        let mut m = vec![0i64; n];
        m[i] = -1;
        out.push(class(0, &m));
    }
    let mut slots = vec![0i64; n];
    for d in 1..=bound as i64 {
        oracle_dfs(d, 3 * d - 1, d * d + 1, 0, &mut slots, &mut out);
    }
    out.sort();
    out
}

fn oracle_dfs(
    d: i64,
    need_sum: i64,
    need_sq: i64,
    pos: usize,
    slots: &mut Vec<i64>,
    out: &mut Vec<DivisorClass>,
) {
    let left = (slots.len() - pos) as i64;
    if need_sum < 0 || need_sq < 0 || need_sum > left * d {
        return;
    }
    if need_sq > need_sum * d || need_sum * need_sum > left * need_sq {
        return;
    }
    if pos == slots.len() {
        if need_sum == 0 && need_sq == 0 {
            out.push(class(d, slots));
        }
        return;
    }
    for v in (0..=d.min(need_sum)).rev() {
        slots[pos] = v;
        oracle_dfs(d, need_sum - v, need_sq - v * v, pos + 1, slots, out);
        slots[pos] = 0;
    }
}

#[test]
fn criterion_6_neg1_enumeration() {
    let t0 = Instant::now();
    // Counts recorded from the oracle on its first run.
    let stable_counts = [1usize, 3, 6, 10, 16, 27, 56, 240];
    for n in 1..=8usize {
        let c = ctx(n);
        let at7 = enumerate_neg1(&c, 7);
        let at13 = enumerate_neg1(&c, 13);
        let at20 = enumerate_neg1(&c, 20);
        assert_eq!(at7, at13, "list still growing past bound 7 at rank {n}");
        assert_eq!(at13, at20, "list still growing past bound 13 at rank {n}");
        assert_eq!(at20, oracle_neg1(n, 20), "oracle mismatch at rank {n}");
        assert_eq!(at20.len(), stable_counts[n - 1], "count drifted at rank {n}");
    }
    for n in 3..=8usize {
        let c = ctx(n);
        let mut exceptional = vec![0i64; n];
        exceptional[n - 1] = -1;
        let target = class(0, &exceptional);
        for x in enumerate_neg1(&c, 20) {
            let r = cremona_reduce(&c, &x).unwrap();
            assert_eq!(r.canonical, target, "{x} did not reduce to the exceptional shape");
            assert_eq!(apply_word(&c, &x, &r.witness).unwrap(), r.canonical);
        }
    }
    // Rank 9 has no stable bound: counts recorded from the first run,
    // strictly increasing across five bound increments.
    let c9 = ctx(9);
    let recorded = [171usize, 936, 3024, 7596, 15786, 29592];
    let counts: Vec<usize> = [2u64, 4, 6, 8, 10, 12]
        .iter()
        .map(|&b| enumerate_neg1(&c9, b).len())
        .collect();
    assert_eq!(counts, recorded);
    for w in counts.windows(2) {
        assert!(w[0] < w[1], "rank-9 count failed to grow: {counts:?}");
    }
    pass(
        6,
        "(-1)-class lists stabilize and match the Diophantine oracle for n <= 8, grow without bound at n = 9",
        t0,
        60_000,
    );
}

#[test]
fn criterion_7_candidate_class_consistency() {
    let t0 = Instant::now();
    let found = search_candidate_degrees(4, 6, 3, true).unwrap();
    assert!(!found.is_empty());
    assert_eq!(found.len(), 1, "the degree-4 elliptic search has one solution");
    let w = &found[0];
    assert_eq!(w.pencil_degree, 6);
    assert_eq!(w.weights, vec![3, 3, 3, 1, 1, 1, 1, 1, 1, 1, 1, 1]);

    let n = config_size(4).unwrap() as usize;
    assert_eq!(n, 12);
    let c = ctx(n);
    let built = build_candidate_class(&c, w).unwrap();
    assert_eq!(c.self_int(&built).unwrap(), BigInt::zero());
    assert_eq!(c.k_degree(&built).unwrap(), BigInt::zero());
    assert_eq!(formula_self_int(w).unwrap(), c.self_int(&built).unwrap());
    assert_eq!(formula_k_degree(w).unwrap(), c.k_degree(&built).unwrap());

    let report = classify_ray(&c, &built).unwrap();
    assert_eq!(report.genus, BigRational::from_integer(BigInt::from(1)));
    assert_eq!(report.support, 12);
    assert_eq!(report.q_region, QMembership::Boundary);
    pass(
        7,
        "the quartic pencil class lands on the null cone with K-degree 0, genus 1, support 12",
        t0,
        10_000,
    );
}

#[test]
fn criterion_8_orbit_k_invariance() {
    let t0 = Instant::now();
    let c = ctx(12);
    let seeds = vec![
        class(1, &[0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]),
        class(2, &[1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]),
        class(3, &[1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0]),
        class(3, &[2, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0]),
        class(4, &[2, 2, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0]),
        class(6, &[3, 3, 3, 1, 1, 1, 1, 1, 1, 1, 1, 1]),
        class(2, &[1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0]),
        class(4, &[2, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0]),
        class(5, &[2, 2, 2, 1, 1, 1, 1, 0, 0, 0, 0, 0]),
        class(7, &[3, 3, 2, 2, 2, 1, 1, 1, 1, 0, 0, 0]),
    ];
    let report =
        orbit_k_invariance_check(&c, &seeds, OrbitBudget::classes(1_200).unwrap()).unwrap();
    assert_eq!(report.seeds.len(), 10);
    for s in &report.seeds {
        assert!(
            s.ball_size >= 1_000,
            "ball around {} stopped at {} classes",
            s.seed,
            s.ball_size
        );
        assert!(s.k_constant, "K-degree moved on the ball around {}", s.seed);
        assert!(
            s.primitive_k_constant,
            "primitive K-degree moved on the ball around {}",
            s.seed
        );
    }
    assert!(report.all_invariant());
    pass(
        8,
        "10 orbit balls of 10^3+ classes keep K-degree and primitive K-degree constant",
        t0,
        60_000,
    );
}

#[test]
fn criterion_9_distinctness_ledger() {
    let t0 = Instant::now();
    let mut sizes: Vec<(u64, u64)> = (2u64..=200)
        .map(|d| (config_size(d).unwrap(), d))
        .collect();
    sizes.sort();
    for pair in sizes.windows(2) {
        let ((s1, d1), (s2, d2)) = (pair[0], pair[1]);
        if s1 == s2 {
            assert_eq!(
                (d1.min(d2), d1.max(d2)),
                (2, 3),
                "degrees {d1} and {d2} collide at size {s1}"
            );
        }
    }

    let mut prev = 0u64;
    for n in 1..=10_000u64 {
        if let Some(s) = support_max(n) {
            assert!(s >= prev, "support_max dropped at n = {n}");
            assert!(s <= n);
            prev = s;
        } else {
            assert!(n < 12, "support_max must exist from n = 12 on");
        }
    }
    assert_eq!(support_max(10_000), Some(9_901));
    let decades: Vec<u64> = [100u64, 1_000, 10_000]
        .iter()
        .map(|&n| support_max(n).unwrap())
        .collect();
    assert!(decades[0] < decades[1] && decades[1] < decades[2]);
    pass(
        9,
        "configuration sizes separate degrees (outside {2,3}) and support_max climbs through 9901",
        t0,
        5_000,
    );
}
