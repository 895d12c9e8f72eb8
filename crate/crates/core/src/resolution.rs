//! Multiplicity chains of local pencils `λ u^a + μ v^b`.
//!
//! Blowing up the common zero of two monomials is subtractive Euclid on
//! the exponent pair: the base point has multiplicity `min(a, b)`, and the
//! strict transforms meet the next chart in a pencil whose exponents are
//! `(a, b)` with the larger entry reduced by the smaller. Members separate
//! exactly when the exponents tie, which for a coprime pair means `(1, 1)`.
//!
//! A point of the chain is *satellite* when it lies on two exceptional
//! divisors. In Euclid terms: the first base point is never satellite, and
//! a later point is satellite iff the earlier states have already been on
//! both sides of the `a < b` divide (once both coordinate curves through
//! the point are exceptional, they stay exceptional). [`resolution_chain`]
//! computes the flags from that side history; [`simulate_blowups`] instead
//! tracks the two coordinate curves chart by chart and serves as an
//! independent oracle. The two must agree exactly.

use std::fmt;

use crate::error::{Error, Result};

/// An exponent pair `a/b`, the local model `λ u^a + μ v^b`.
///
/// Both exponents are at least 1. `a/b` and the transposed `b/a` describe
/// the same geometry; normalization orders them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LocalType {
    a: u64,
    b: u64,
}

impl LocalType {
    pub fn new(a: u64, b: u64) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::BadLocalType { a, b });
        }
        Ok(LocalType { a, b })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    /// Coprime ordered form: `a/b = weight · (rho/delta)` with
    /// `rho ≥ delta` and `gcd(rho, delta) = 1`.
    pub fn normalized(&self) -> NormalizedType {
        let g = gcd(self.a, self.b);
        let (mut rho, mut delta) = (self.a / g, self.b / g);
        let swapped = rho < delta;
        if swapped {
            std::mem::swap(&mut rho, &mut delta);
        }
        NormalizedType {
            rho,
            delta,
            weight: g,
            swapped,
        }
    }
}

impl fmt::Display for LocalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.a, self.b)
    }
}

/// Result of [`LocalType::normalized`]: the coprime core `rho/delta`
/// (with `rho ≥ delta ≥ 1`), the extracted gcd as a weight multiplier,
/// and whether the two exponents had to be swapped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormalizedType {
    pub rho: u64,
    pub delta: u64,
    pub weight: u64,
    pub swapped: bool,
}

/// One infinitely near base point: its multiplicity and whether it is a
/// satellite point (lies on two exceptional divisors).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChainStep {
    pub multiplicity: u64,
    pub satellite: bool,
}

/// The full multiplicity chain of a local pencil.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionChain {
    steps: Vec<ChainStep>,
}

impl ResolutionChain {
    pub fn steps(&self) -> &[ChainStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn multiplicities(&self) -> Vec<u64> {
        self.steps.iter().map(|s| s.multiplicity).collect()
    }

    pub fn satellite_flags(&self) -> Vec<bool> {
        self.steps.iter().map(|s| s.satellite).collect()
    }

    /// The same chain with every multiplicity scaled by `k` (the chain
    /// shape and the satellite flags do not change).
    pub fn scaled(&self, k: u64) -> ResolutionChain {
        ResolutionChain {
            steps: self
                .steps
                .iter()
                .map(|s| ChainStep {
                    multiplicity: s.multiplicity * k,
                    satellite: s.satellite,
                })
                .collect(),
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

fn check_coprime(rho: u64, delta: u64) -> Result<()> {
    if rho == 0 || delta == 0 {
        return Err(Error::BadLocalType { a: rho, b: delta });
    }
    if gcd(rho, delta) != 1 {
        return Err(Error::NotCoprime { rho, delta });
    }
    Ok(())
}

/// Multiplicity chain of the coprime pencil `λ u^rho + μ v^delta`:
/// emit `min`, subtract the smaller from the larger, stop at `(1, 1)`.
///
/// Satellite flags come from the side history (see the module docs).
/// Symmetric in its arguments; for non-coprime exponents normalize first.
pub fn resolution_chain(rho: u64, delta: u64) -> Result<ResolutionChain> {
    check_coprime(rho, delta)?;
    let (mut a, mut b) = (rho, delta);
    let (mut a_was_min, mut b_was_min) = (false, false);
    let mut steps = Vec::new();
    loop {
        steps.push(ChainStep {
            multiplicity: a.min(b),
            satellite: a_was_min && b_was_min,
        });
        if a == b {
            // Coprimality makes this (1, 1): members now separate.
            break;
        }
        if a > b {
            b_was_min = true;
            a -= b;
        } else {
            a_was_min = true;
            b -= a;
        }
    }
    Ok(ResolutionChain { steps })
}

/// Chart-by-chart simulation of the same pencil, kept as an independent
/// oracle for [`resolution_chain`].
///
/// State: exponents over the two coordinate curves through the current
/// base point, plus whether each curve is exceptional. With `a > b` the
/// members are tangent to `{v = 0}`, so the next point is the meet of the
/// new exceptional divisor with the strict transform of `{v = 0}`; it is
/// satellite exactly when that inherited curve was itself exceptional.
pub fn simulate_blowups(rho: u64, delta: u64) -> Result<ResolutionChain> {
    check_coprime(rho, delta)?;
    let (mut u_exp, mut v_exp) = (rho, delta);
    let (mut u_exceptional, mut v_exceptional) = (false, false);
    // The first base point sits on the two separatrices, not on any
    // exceptional divisor.
    let mut current_is_satellite = false;
    let mut steps = Vec::new();
    loop {
        steps.push(ChainStep {
            multiplicity: u_exp.min(v_exp),
            satellite: current_is_satellite,
        });
        if u_exp == v_exp {
            // One more blow-up separates the members; no new base point.
            break;
        }
        if u_exp > v_exp {
            current_is_satellite = v_exceptional;
            u_exp -= v_exp;
            u_exceptional = true; // the u-side curve is now the fresh divisor
        } else {
            current_is_satellite = u_exceptional;
            v_exp -= u_exp;
            v_exceptional = true;
        }
    }
    Ok(ResolutionChain { steps })
}

/// Chain length without materializing the chain: the sum of the partial
/// quotients of the continued fraction of `rho/delta` (after
/// normalization). Division-based, so cheap even for huge exponents.
pub fn chain_length(t: &LocalType) -> u64 {
    let nt = t.normalized();
    let (mut rho, mut delta) = (nt.rho, nt.delta);
    let mut len = 0u64;
    while delta > 0 {
        len += rho / delta;
        let r = rho % delta;
        rho = delta;
        delta = r;
    }
    len
}

/// The chain of an arbitrary (possibly non-coprime) type: the chain of the
/// coprime core with every multiplicity scaled by the extracted gcd.
///
/// `λ u^{gρ} + μ v^{gδ}` behaves like the coprime pencil until the state
/// reaches `(g, g)`, whose blow-up separates the members; the chain shape
/// is that of `(ρ, δ)` and every multiplicity picks up the factor `g`.
pub fn resolved_chain(t: &LocalType) -> ResolutionChain {
    let nt = t.normalized();
    let base = resolution_chain(nt.rho, nt.delta).expect("normalized core is coprime");
    if nt.weight == 1 {
        base
    } else {
        base.scaled(nt.weight)
    }
}
