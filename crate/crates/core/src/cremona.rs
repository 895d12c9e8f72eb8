//! The Cremona group acting on the blow-up lattice.
//!
//! The group is generated by coordinate permutations of the exceptional
//! slots together with quadratic reflections. The reflection on a triple
//! of slots (i, j, k) uses the root `e = (1; 1,1,1 in slots i,j,k)`,
//! which has `e² = −2`, and sends `x` to `x + (x·e)e`. Every generator
//! is an involution or a relabelling, preserves the pairing, and fixes
//! the canonical class.
//!
//! On top of the generators this module provides word application,
//! reduction to a canonical orbit representative (sort, then reflect on
//! the three largest entries while that lowers the degree), orbit balls
//! under a budget, and enumeration of the classes with `x² = K·x = −1`.

use std::collections::{BTreeMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, LatticeContext};

/// A relabelling of the exceptional slots, 0-based.
///
/// `map[i]` is the slot that receives the old entry `i` when the
/// permutation is pushed forward through a class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from its image list. Every slot must appear
    /// exactly once.
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        if n == 0 {
            return Err(Error::BadGenerator("empty permutation".into()));
        }
        let mut seen = vec![false; n];
        for &t in &map {
            if t >= n {
                return Err(Error::BadGenerator(format!(
                    "permutation target {t} out of range for {n} slots"
                )));
            }
            if seen[t] {
                return Err(Error::BadGenerator(format!(
                    "permutation target {t} repeated"
                )));
            }
            seen[t] = true;
        }
        Ok(Permutation { map })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { map: (0..n).collect() }
    }

    /// The transposition of slots `i` and `j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        if i >= n || j >= n || i == j {
            return Err(Error::BadGenerator(format!(
                "transposition ({i} {j}) invalid for {n} slots"
            )));
        }
        let mut map: Vec<usize> = (0..n).collect();
        map.swap(i, j);
        Ok(Permutation { map })
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &t)| i == t)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &t) in self.map.iter().enumerate() {
            inv[t] = i;
        }
        Permutation { map: inv }
    }
}

/// One generator of the group: a quadratic reflection on three distinct
/// slots, or a slot relabelling.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    Reflect(usize, usize, usize),
    Permute(Permutation),
}

/// Reflects `x` in the root supported on slots `i`, `j`, `k`: with
/// `t = d − mᵢ − mⱼ − mₖ`, adds `t` to the degree and to each of the
/// three slots.
pub fn reflect(
    ctx: &LatticeContext,
    x: &DivisorClass,
    i: usize,
    j: usize,
    k: usize,
) -> Result<DivisorClass> {
    ctx.check(x)?;
    let n = ctx.n();
    if n < 3 {
        return Err(Error::BadGenerator(format!(
            "reflection needs at least 3 slots, have {n}"
        )));
    }
    if i >= n || j >= n || k >= n || i == j || j == k || i == k {
        return Err(Error::BadGenerator(format!(
            "reflection triple ({i} {j} {k}) invalid for {n} slots"
        )));
    }
    let t = &x.d - &x.m[i] - &x.m[j] - &x.m[k];
    let mut m = x.m.clone();
    m[i] += &t;
    m[j] += &t;
    m[k] += &t;
    Ok(DivisorClass::new(&x.d + &t, m))
}

/// Pushes `x` forward through a relabelling: the degree is unchanged and
/// slot `perm.map()[i]` receives the old entry `i`.
pub fn permute(ctx: &LatticeContext, x: &DivisorClass, perm: &Permutation) -> Result<DivisorClass> {
    ctx.check(x)?;
    if perm.n() != ctx.n() {
        return Err(Error::BadGenerator(format!(
            "permutation of {} slots applied in rank {}",
            perm.n(),
            ctx.n()
        )));
    }
    let mut m = vec![BigInt::zero(); x.m.len()];
    for (i, target) in perm.map().iter().enumerate() {
        m[*target] = x.m[i].clone();
    }
    Ok(DivisorClass::new(x.d.clone(), m))
}

pub fn apply(ctx: &LatticeContext, x: &DivisorClass, g: &Generator) -> Result<DivisorClass> {
    match g {
        Generator::Reflect(i, j, k) => reflect(ctx, x, *i, *j, *k),
        Generator::Permute(p) => permute(ctx, x, p),
    }
}

/// Applies a word left to right: `word[0]` acts first.
pub fn apply_word(
    ctx: &LatticeContext,
    x: &DivisorClass,
    word: &[Generator],
) -> Result<DivisorClass> {
    let mut y = x.clone();
    for g in word {
        y = apply(ctx, &y, g)?;
    }
    Ok(y)
}

/// Outcome of [`cremona_reduce`]: the terminal representative and a word
/// with `apply_word(x, witness) = canonical`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub canonical: DivisorClass,
    pub witness: Vec<Generator>,
}

/// Drives `x` to a canonical orbit representative.
///
/// Each round sorts the multiplicities in non-increasing order (ties
/// keep their original relative order) and then, while the degree is
/// positive and the top three entries sum past it, reflects on slots
/// (0, 1, 2). Such a reflection adds `t = d − m₀ − m₁ − m₂ < 0` to the
/// degree, so the degree strictly decreases and the loop terminates.
/// Classes reaching `d ≤ 0` are returned as they stand, sorted.
///
/// On the forward cone (`x² ≥ 0`, `d > 0`) the walk never leaves the
/// cone: `Σm² ≤ d²` bounds the top-three sum by `√3·d < 2d`, so the
/// reflected degree `2d − (m₀+m₁+m₂)` stays positive. There the terminal
/// class is the unique representative with sorted multiplicities and
/// `m₀+m₁+m₂ ≤ d`, and canonical forms decide orbit equality outright.
/// Classes frozen at `d ≤ 0` carry no such uniqueness.
pub fn cremona_reduce(ctx: &LatticeContext, x: &DivisorClass) -> Result<Reduction> {
    ctx.check(x)?;
    let n = ctx.n();
    if n < 3 {
        return Err(Error::TooFewPoints(n));
    }
    let mut current = x.clone();
    let mut witness = Vec::new();
    loop {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&p, &q| current.m[q].cmp(&current.m[p]).then(p.cmp(&q)));
        let mut map = vec![0; n];
        for (pos, &old) in order.iter().enumerate() {
            map[old] = pos;
        }
        let perm = Permutation::new(map).expect("sorting map is a bijection");
        if !perm.is_identity() {
            current = permute(ctx, &current, &perm)?;
            witness.push(Generator::Permute(perm));
        }
        if current.d.is_negative() || current.d.is_zero() {
            break;
        }
        let top: BigInt = &current.m[0] + &current.m[1] + &current.m[2];
        if top <= current.d {
            break;
        }
        current = reflect(ctx, &current, 0, 1, 2)?;
        witness.push(Generator::Reflect(0, 1, 2));
    }
    Ok(Reduction { canonical: current, witness })
}

/// Whether `x` and `y` reduce to the same canonical representative.
///
/// Equality of canonical forms always implies a common orbit, with the
/// two witness words as proof. The converse holds on every class family
/// this crate property-tests, but classes that terminate with `d ≤ 0`
/// and mixed-sign entries are only compared literally, so a `false` is
/// empirical rather than a certificate.
pub fn same_orbit(ctx: &LatticeContext, x: &DivisorClass, y: &DivisorClass) -> Result<bool> {
    let a = cremona_reduce(ctx, x)?;
    let b = cremona_reduce(ctx, y)?;
    Ok(a.canonical == b.canonical)
}

/// All classes with `x² = −1` and `K·x = −1`, degree at most
/// `degree_bound`, and non-negative multiplicities apart from the pure
/// exceptional classes `(0; …,−1,…)`. Sorted and deduplicated.
///
/// For rank at most 8 the list stops growing once the bound passes the
/// largest degree in the finite orbit; from rank 9 on it grows without
/// bound, and so does the cost of raising `degree_bound`.
pub fn enumerate_neg1(ctx: &LatticeContext, degree_bound: u64) -> Vec<DivisorClass> {
    let n = ctx.n();
    let mut out = Vec::new();
    for i in 0..n {
        let mut m = vec![BigInt::zero(); n];
        m[i] = BigInt::from(-1);
        out.push(DivisorClass::new(BigInt::zero(), m));
    }
    for d in 1..=degree_bound {
        let target_sum = 3 * d as u128 - 1;
        let target_sq = (d as u128) * (d as u128) + 1;
        let mut parts = Vec::new();
        let mut found = Vec::new();
        partition_search(d as u128, target_sum, target_sq, n, &mut parts, &mut found);
        for p in &found {
            expand_arrangements(d, p, n, &mut out);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Collects the non-increasing positive part lists with the given sum
/// and sum of squares, using at most `slots` parts. Parts never exceed
/// `max_part`; the square budget alone already forces parts below the
/// degree.
fn partition_search(
    max_part: u128,
    sum: u128,
    sq: u128,
    slots: usize,
    parts: &mut Vec<u64>,
    found: &mut Vec<Vec<u64>>,
) {
    if sum == 0 {
        if sq == 0 {
            found.push(parts.clone());
        }
        return;
    }
    if slots == 0 {
        return;
    }
    let r = slots as u128;
    // Feasibility window for r remaining parts bounded by max_part:
    // sum ≤ r·max_part, sq ≤ max_part·sum, and Cauchy-Schwarz sum² ≤ r·sq.
    if sum > r * max_part || sq > max_part * sum || sum * sum > r * sq {
        return;
    }
    let mut v = max_part.min(sum);
    while v >= 1 {
        let vsq = v * v;
        if vsq <= sq {
            parts.push(v as u64);
            partition_search(v, sum - v, sq - vsq, slots - 1, parts, found);
            parts.pop();
        }
        v -= 1;
    }
}

/// Emits every distinct arrangement of the part multiset (padded with
/// zeros to length `n`) as a degree-`d` class.
fn expand_arrangements(d: u64, parts: &[u64], n: usize, out: &mut Vec<DivisorClass>) {
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    *counts.entry(0).or_insert(0) += n - parts.len();
    for &p in parts {
        *counts.entry(p).or_insert(0) += 1;
    }
    let values: Vec<u64> = counts.keys().rev().copied().collect();
    let mut remaining: Vec<usize> = values.iter().map(|v| counts[v]).collect();
    let mut slot_values = vec![0u64; n];
    place_next(d, &values, &mut remaining, &mut slot_values, 0, out);
}

fn place_next(
    d: u64,
    values: &[u64],
    remaining: &mut [usize],
    slot_values: &mut [u64],
    pos: usize,
    out: &mut Vec<DivisorClass>,
) {
    if pos == slot_values.len() {
        let m = slot_values.iter().map(|&v| BigInt::from(v)).collect();
        out.push(DivisorClass::new(BigInt::from(d), m));
        return;
    }
    for vi in 0..values.len() {
        if remaining[vi] == 0 {
            continue;
        }
        remaining[vi] -= 1;
        slot_values[pos] = values[vi];
        place_next(d, values, remaining, slot_values, pos + 1, out);
        remaining[vi] += 1;
    }
}

/// Exploration budget for [`orbit_ball`]: a hard cap on the number of
/// distinct classes kept, and optionally a cap on the word length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitBudget {
    max_classes: usize,
    max_word_length: Option<usize>,
}

impl OrbitBudget {
    pub fn classes(max_classes: usize) -> Result<Self> {
        if max_classes == 0 {
            return Err(Error::EmptyBudget);
        }
        Ok(OrbitBudget { max_classes, max_word_length: None })
    }

    pub fn bounded(max_classes: usize, max_word_length: usize) -> Result<Self> {
        if max_classes == 0 {
            return Err(Error::EmptyBudget);
        }
        Ok(OrbitBudget { max_classes, max_word_length: Some(max_word_length) })
    }

    pub fn max_classes(&self) -> usize {
        self.max_classes
    }

    pub fn max_word_length(&self) -> Option<usize> {
        self.max_word_length
    }
}

/// A budget-limited piece of an orbit, sorted. `truncated` is set only
/// when a freshly discovered class was dropped because the class cap
/// was already full; stopping at the word-length cap is part of the
/// ball's definition, not truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitBall {
    pub classes: Vec<DivisorClass>,
    pub truncated: bool,
}

/// One move per generator: every slot transposition, then every
/// reflection triple, in index order. Adjacent transpositions would
/// suffice to generate, but the full set keeps balls round and words
/// short.
pub(crate) fn step_generators(n: usize) -> Vec<Generator> {
    let mut gens = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            gens.push(Generator::Permute(
                Permutation::transposition(n, i, j).expect("valid transposition"),
            ));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                gens.push(Generator::Reflect(i, j, k));
            }
        }
    }
    gens
}

/// Breadth-first closure of `{x}` under all one-step generators,
/// deduplicated and truncated at the budget.
pub fn orbit_ball(ctx: &LatticeContext, x: &DivisorClass, budget: OrbitBudget) -> Result<OrbitBall> {
    orbit_ball_seeded(ctx, std::slice::from_ref(x), budget)
}

/// Ball around several seeds at once. Cached orbit fragments enter the
/// search as extra seeds at depth zero.
pub(crate) fn orbit_ball_seeded(
    ctx: &LatticeContext,
    seeds: &[DivisorClass],
    budget: OrbitBudget,
) -> Result<OrbitBall> {
    let gens = step_generators(ctx.n());
    let mut visited: HashSet<DivisorClass> = HashSet::new();
    let mut queue: VecDeque<(DivisorClass, usize)> = VecDeque::new();
    let mut truncated = false;
    let admit = |y: DivisorClass,
                     depth: usize,
                     visited: &mut HashSet<DivisorClass>,
                     queue: &mut VecDeque<(DivisorClass, usize)>,
                     truncated: &mut bool| {
        if visited.contains(&y) {
            return;
        }
        if visited.len() >= budget.max_classes {
            *truncated = true;
            return;
        }
        visited.insert(y.clone());
        queue.push_back((y, depth));
    };
    for s in seeds {
        ctx.check(s)?;
        admit(s.clone(), 0, &mut visited, &mut queue, &mut truncated);
    }
    while let Some((y, depth)) = queue.pop_front() {
        if truncated {
            break;
        }
        if let Some(cap) = budget.max_word_length {
            if depth >= cap {
                continue;
            }
        }
        for g in &gens {
            let z = apply(ctx, &y, g)?;
            admit(z, depth + 1, &mut visited, &mut queue, &mut truncated);
        }
    }
    let mut classes: Vec<DivisorClass> = visited.into_iter().collect();
    classes.sort();
    Ok(OrbitBall { classes, truncated })
}
