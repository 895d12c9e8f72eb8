//! Ray-level analysis that ties the other modules together.
//!
//! A ray report bundles every number this crate can attach to a class.
//! The screen sorts classes into the shapes relevant to negativity
//! questions on blow-ups of the plane. Candidate pencil classes are
//! assembled from a family inventory and a weight per dicritical point,
//! and a bounded Diophantine search looks for weight assignments whose
//! class lands on the null cone. The orbit check runs the canonical
//! degree invariant over budget-limited orbit balls.
//!
//! Everything here is numerical. A verdict never asserts that a class is
//! represented by an actual curve.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::catalog::{config_size, inventory};
use crate::cremona::{cremona_reduce, orbit_ball, OrbitBudget};
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, LatticeContext, QMembership};
use crate::resolution::resolved_chain;

/// Sign of the canonical degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KRegion {
    Negative,
    Zero,
    Positive,
}

impl fmt::Display for KRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KRegion::Negative => "K<0",
            KRegion::Zero => "K=0",
            KRegion::Positive => "K>0",
        })
    }
}

/// Everything the lattice knows about one nonzero class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayReport {
    pub input: DivisorClass,
    pub primitive_gen: DivisorClass,
    pub self_int: BigInt,
    pub k_degree: BigInt,
    pub support: usize,
    pub q_region: QMembership,
    pub k_region: KRegion,
    pub genus: BigRational,
}

pub fn classify_ray(ctx: &LatticeContext, x: &DivisorClass) -> Result<RayReport> {
    ctx.check(x)?;
    if x.is_zero() {
        return Err(Error::ZeroClass);
    }
    let k_degree = ctx.k_degree(x)?;
    let k_region = if k_degree.is_negative() {
        KRegion::Negative
    } else if k_degree.is_zero() {
        KRegion::Zero
    } else {
        KRegion::Positive
    };
    Ok(RayReport {
        input: x.clone(),
        primitive_gen: ctx.primitive(x)?,
        self_int: ctx.self_int(x)?,
        k_degree,
        support: ctx.support_count(x)?,
        q_region: ctx.q_membership(x)?,
        k_region,
        genus: ctx.adjunction_genus(x)?,
    })
}

/// Numerical screening verdict. Only the last shape could ever violate
/// the negativity conjectures, and only if some integral curve actually
/// represented the class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScreenVerdict {
    /// `x² = −1` and `K·x = −1`.
    Neg1Class,
    /// `x² ≥ 0`.
    Consistent,
    /// `x² < 0` and `K·x < 0` without the shape above. Such a class is
    /// never an integral curve on a very general blow-up.
    NegativeNotNeg1KNegative,
    /// `x² < 0` and `K·x ≥ 0`.
    CounterexampleCandidate,
}

impl fmt::Display for ScreenVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScreenVerdict::Neg1Class => "neg1-class",
            ScreenVerdict::Consistent => "conjecture-consistent",
            ScreenVerdict::NegativeNotNeg1KNegative => "negative-not-neg1 (K<0)",
            ScreenVerdict::CounterexampleCandidate => "counterexample-candidate",
        })
    }
}

pub fn conjecture_screen(ctx: &LatticeContext, x: &DivisorClass) -> Result<ScreenVerdict> {
    ctx.check(x)?;
    if x.is_zero() {
        return Err(Error::ZeroClass);
    }
    let sq = ctx.self_int(x)?;
    let k = ctx.k_degree(x)?;
    let minus_one = BigInt::from(-1);
    Ok(if sq == minus_one && k == minus_one {
        ScreenVerdict::Neg1Class
    } else if !sq.is_negative() {
        ScreenVerdict::Consistent
    } else if k.is_negative() {
        ScreenVerdict::NegativeNotNeg1KNegative
    } else {
        ScreenVerdict::CounterexampleCandidate
    })
}

/// A pencil-degree guess for one family: the degree `m` of the members
/// and one positive weight per dicritical point, in inventory order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightAssignment {
    pub family_degree: u64,
    pub pencil_degree: u64,
    pub weights: Vec<u64>,
}

fn checked_assignment(w: &WeightAssignment) -> Result<crate::catalog::FamilyInventory> {
    let inv = inventory(w.family_degree)?;
    let expected = inv.total_points() as usize;
    if w.weights.len() != expected {
        return Err(Error::WeightCount {
            degree: w.family_degree,
            expected,
            found: w.weights.len(),
        });
    }
    if w.weights.contains(&0) {
        return Err(Error::ZeroWeight);
    }
    if w.pencil_degree == 0 {
        return Err(Error::ZeroWeight);
    }
    Ok(inv)
}

/// Self-intersection of the class an assignment builds, straight from
/// the local data: `m² − Σ k_p²·a_p·b_p`.
pub fn formula_self_int(w: &WeightAssignment) -> Result<BigInt> {
    let inv = checked_assignment(w)?;
    let m = BigInt::from(w.pencil_degree);
    let mut acc = &m * &m;
    for (k, t) in w.weights.iter().zip(inv.expanded_types()) {
        acc -= BigInt::from(*k) * k * t.a() * t.b();
    }
    Ok(acc)
}

/// Canonical degree of the built class: `−3m + Σ k_p·g_p·(ρ_p+δ_p−1)`,
/// with `g` the extracted gcd of the local type. The gcd folds into the
/// weight because the chain of `u^{gρ}/v^{gδ}` is the coprime chain
/// scaled by `g`.
pub fn formula_k_degree(w: &WeightAssignment) -> Result<BigInt> {
    let inv = checked_assignment(w)?;
    let mut acc = BigInt::from(-3) * w.pencil_degree;
    for (k, t) in w.weights.iter().zip(inv.expanded_types()) {
        let nt = t.normalized();
        acc += BigInt::from(*k) * nt.weight * (nt.rho + nt.delta - 1);
    }
    Ok(acc)
}

/// The class of a weighted pencil guess: degree `m`, and for each
/// dicritical point its resolution chain multiplicities scaled by the
/// point's weight, laid out in inventory order and zero-padded to the
/// lattice rank.
pub fn build_candidate_class(ctx: &LatticeContext, w: &WeightAssignment) -> Result<DivisorClass> {
    let inv = checked_assignment(w)?;
    let needed = config_size(w.family_degree)? as usize;
    if ctx.n() < needed {
        return Err(Error::LatticeTooSmall { needed, have: ctx.n() });
    }
    let mut m = Vec::with_capacity(ctx.n());
    for (k, t) in w.weights.iter().zip(inv.expanded_types()) {
        for mult in resolved_chain(&t).multiplicities() {
            m.push(BigInt::from(mult) * k);
        }
    }
    m.resize(ctx.n(), BigInt::zero());
    Ok(DivisorClass::new(BigInt::from(w.pencil_degree), m))
}

/// Searches all weight assignments for one family with `m` and every
/// weight inside the given bounds whose class lands on the null cone
/// (`x² = 0`). `require_elliptic` further demands `K·x = 0`; families of
/// degree 5 and up are instead required to satisfy `K·x ≥ m`.
///
/// Points sharing an inventory entry are interchangeable, so weights are
/// kept non-increasing within each entry: the result is one assignment
/// per weight multiset. Sorted by `m`, then by weights.
pub fn search_candidate_degrees(
    family_degree: u64,
    m_bound: u64,
    k_bound: u64,
    require_elliptic: bool,
) -> Result<Vec<WeightAssignment>> {
    if m_bound == 0 || k_bound == 0 {
        return Err(Error::EmptySearchBounds);
    }
    let inv = inventory(family_degree)?;
    // Flatten to one (square factor, linear factor, entry id) per point.
    let mut points = Vec::new();
    for (entry_id, e) in inv.entries().iter().enumerate() {
        let t = e.local_type;
        let nt = t.normalized();
        let sq = (t.a() as u128) * (t.b() as u128);
        let lin = (nt.weight as u128) * ((nt.rho + nt.delta - 1) as u128);
        for _ in 0..e.count {
            points.push((sq, lin, entry_id));
        }
    }
    let kb = k_bound as u128;
    let mut suffix_min = vec![0u128; points.len() + 1];
    let mut suffix_max = vec![0u128; points.len() + 1];
    for i in (0..points.len()).rev() {
        suffix_min[i] = suffix_min[i + 1] + points[i].0;
        suffix_max[i] = suffix_max[i + 1] + points[i].0 * kb * kb;
    }

    let mut out = Vec::new();
    for m in 1..=m_bound {
        let target = (m as u128) * (m as u128);
        let mut weights = Vec::with_capacity(points.len());
        search_weights(
            &points,
            &suffix_min,
            &suffix_max,
            kb,
            target,
            0,
            0,
            0,
            &mut weights,
            &mut |weights, lin_sum| {
                let k_deg = lin_sum as i128 - 3 * m as i128;
                if require_elliptic && k_deg != 0 {
                    return;
                }
                if family_degree >= 5 && k_deg < m as i128 {
                    return;
                }
                out.push(WeightAssignment {
                    family_degree,
                    pencil_degree: m,
                    weights: weights.to_vec(),
                });
            },
        );
    }
    out.sort_by(|a, b| {
        a.pencil_degree
            .cmp(&b.pencil_degree)
            .then_with(|| a.weights.cmp(&b.weights))
    });
    Ok(out)
}

/// Depth-first assignment of weights with square-sum pruning. Within an
/// inventory entry the weight may not exceed its predecessor.
#[allow(clippy::too_many_arguments)]
fn search_weights(
    points: &[(u128, u128, usize)],
    suffix_min: &[u128],
    suffix_max: &[u128],
    k_bound: u128,
    target: u128,
    pos: usize,
    sq_sum: u128,
    lin_sum: u128,
    weights: &mut Vec<u64>,
    emit: &mut impl FnMut(&[u64], u128),
) {
    if pos == points.len() {
        if sq_sum == target {
            emit(weights, lin_sum);
        }
        return;
    }
    if sq_sum + suffix_min[pos] > target || sq_sum + suffix_max[pos] < target {
        return;
    }
    let (sq, lin, entry_id) = points[pos];
    let cap = if pos > 0 && points[pos - 1].2 == entry_id {
        weights[pos - 1] as u128
    } else {
        k_bound
    };
    for k in (1..=cap).rev() {
        let add_sq = sq * k * k;
        if sq_sum + add_sq + suffix_min[pos + 1] > target {
            continue;
        }
        weights.push(k as u64);
        search_weights(
            points,
            suffix_min,
            suffix_max,
            k_bound,
            target,
            pos + 1,
            sq_sum + add_sq,
            lin_sum + lin * k,
            weights,
            emit,
        );
        weights.pop();
    }
}

/// Ball statistics for one seed of the orbit check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedReport {
    pub seed: DivisorClass,
    pub ball_size: usize,
    pub truncated: bool,
    pub k_degree: BigInt,
    pub primitive_k_degree: BigInt,
    pub k_constant: bool,
    pub primitive_k_constant: bool,
    pub canonical: DivisorClass,
}

/// Outcome of [`orbit_k_invariance_check`]: one report per seed, plus
/// the partition of the seed indices by canonical form, cells ordered by
/// first appearance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitInvarianceReport {
    pub seeds: Vec<SeedReport>,
    pub partition: Vec<Vec<usize>>,
}

impl OrbitInvarianceReport {
    /// True when every ball kept both canonical degrees constant.
    pub fn all_invariant(&self) -> bool {
        self.seeds.iter().all(|s| s.k_constant && s.primitive_k_constant)
    }
}

/// Explores a budget ball around each seed, records whether the
/// canonical degree and the canonical degree of the primitive generator
/// stay constant across the ball, and groups seeds by canonical form.
pub fn orbit_k_invariance_check(
    ctx: &LatticeContext,
    xs: &[DivisorClass],
    budget: OrbitBudget,
) -> Result<OrbitInvarianceReport> {
    let mut seeds = Vec::with_capacity(xs.len());
    let mut cells: Vec<(DivisorClass, Vec<usize>)> = Vec::new();
    for (i, x) in xs.iter().enumerate() {
        ctx.check(x)?;
        if x.is_zero() {
            return Err(Error::ZeroClass);
        }
        let k_degree = ctx.k_degree(x)?;
        let primitive_k_degree = ctx.k_degree(&ctx.primitive(x)?)?;
        let ball = orbit_ball(ctx, x, budget)?;
        let mut k_constant = true;
        let mut primitive_k_constant = true;
        for y in &ball.classes {
            if ctx.k_degree(y)? != k_degree {
                k_constant = false;
            }
            if ctx.k_degree(&ctx.primitive(y)?)? != primitive_k_degree {
                primitive_k_constant = false;
            }
        }
        let canonical = cremona_reduce(ctx, x)?.canonical;
        match cells.iter_mut().find(|(c, _)| *c == canonical) {
            Some((_, members)) => members.push(i),
            None => cells.push((canonical.clone(), vec![i])),
        }
        seeds.push(SeedReport {
            seed: x.clone(),
            ball_size: ball.classes.len(),
            truncated: ball.truncated,
            k_degree,
            primitive_k_degree,
            k_constant,
            primitive_k_constant,
            canonical,
        });
    }
    Ok(OrbitInvarianceReport {
        seeds,
        partition: cells.into_iter().map(|(_, members)| members).collect(),
    })
}
