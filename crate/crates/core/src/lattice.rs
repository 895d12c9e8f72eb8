//! The Picard lattice of the plane blown up at `n` points.
//!
//! A class is written `(d; m_1, ..., m_n)` and stands for
//! `d·L - m_1·E_1 - ... - m_n·E_n`, where `L` is the pullback of a line
//! and `E_i` are the exceptional classes. The intersection form is
//! diagonal of signature `(1, n)`:
//!
//! ```text
//! L·L = 1,    E_i·E_i = -1,    L·E_i = 0
//! ```
//!
//! so `x·y = d_x·d_y - Σ m_{x,i}·m_{y,i}`. In these coordinates the
//! canonical class `-3L + ΣE_i` is `(-3; -1, ..., -1)`.
//!
//! Coordinates are arbitrary-precision integers: orbit degrees grow
//! without bound, and every operation here is exact.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A divisor class `(d; m_1, ..., m_n)` on the blow-up of the plane.
///
/// The derived ordering is lexicographic on `(d, m)`, which is the order
/// used by every enumeration in this crate.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DivisorClass {
    pub(crate) d: BigInt,
    pub(crate) m: Vec<BigInt>,
}

impl DivisorClass {
    pub fn new(d: impl Into<BigInt>, m: Vec<BigInt>) -> Self {
        DivisorClass { d: d.into(), m }
    }

    /// Convenience constructor from machine integers.
    pub fn from_ints(d: i64, m: &[i64]) -> Self {
        DivisorClass {
            d: BigInt::from(d),
            m: m.iter().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn zero(n: usize) -> Self {
        DivisorClass {
            d: BigInt::zero(),
            m: vec![BigInt::zero(); n],
        }
    }

    /// Number of blown-up points this class is written against.
    pub fn n(&self) -> usize {
        self.m.len()
    }

    /// Coefficient of the line class `L`.
    pub fn degree(&self) -> &BigInt {
        &self.d
    }

    /// Multiplicities `m_1, ..., m_n` (the class is `dL - Σ m_i E_i`).
    pub fn mults(&self) -> &[BigInt] {
        &self.m
    }

    pub fn is_zero(&self) -> bool {
        self.d.is_zero() && self.m.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for DivisorClass {
    /// Canonical text form `d;m1,m2,...,mn`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.d)?;
        for (i, v) in self.m.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Position of a nonzero class relative to the forward cone
/// `{x·x ≥ 0, d ≥ 0}`.
///
/// `d ≥ 0` picks the forward nappe: a nonzero class with `x·x ≥ 0` cannot
/// have `d = 0` (then `x·x = -Σ m_i² ≤ 0` forces `x = 0`), so membership
/// below is decided by the signs of `x·x` and `d` alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QMembership {
    Interior,
    Boundary,
    Outside,
    Zero,
}

impl fmt::Display for QMembership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QMembership::Interior => "interior",
            QMembership::Boundary => "boundary",
            QMembership::Outside => "outside",
            QMembership::Zero => "zero",
        })
    }
}

/// The lattice `Z^{1,n}` for a fixed number of blown-up points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeContext {
    n: usize,
}

impl LatticeContext {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyLattice);
        }
        Ok(LatticeContext { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The canonical class `(-3; -1, ..., -1)`.
    pub fn canonical_class(&self) -> DivisorClass {
        DivisorClass {
            d: BigInt::from(-3),
            m: vec![BigInt::from(-1); self.n],
        }
    }

    /// The line class `(1; 0, ..., 0)`.
    pub fn line_class(&self) -> DivisorClass {
        DivisorClass {
            d: BigInt::one(),
            m: vec![BigInt::zero(); self.n],
        }
    }

    /// The exceptional class over the `i`-th point (0-based):
    /// `(0; 0, ..., -1, ..., 0)`.
    pub fn exceptional_class(&self, i: usize) -> Result<DivisorClass> {
        if i >= self.n {
            return Err(Error::BadGenerator(format!(
                "point index {i} out of range for n = {}",
                self.n
            )));
        }
        let mut m = vec![BigInt::zero(); self.n];
        m[i] = BigInt::from(-1);
        Ok(DivisorClass { d: BigInt::zero(), m })
    }

    pub(crate) fn check(&self, x: &DivisorClass) -> Result<()> {
        if x.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.n(),
            });
        }
        Ok(())
    }

    /// Intersection number `x·y = d_x·d_y - Σ m_{x,i}·m_{y,i}`.
    pub fn pair(&self, x: &DivisorClass, y: &DivisorClass) -> Result<BigInt> {
        self.check(x)?;
        self.check(y)?;
        let mut acc = &x.d * &y.d;
        for (a, b) in x.m.iter().zip(&y.m) {
            acc -= a * b;
        }
        Ok(acc)
    }

    /// Self-intersection `x·x = d² - Σ m_i²`.
    pub fn self_int(&self, x: &DivisorClass) -> Result<BigInt> {
        self.pair(x, x)
    }

    /// Degree against the canonical class: `K·x = -3d + Σ m_i`.
    pub fn k_degree(&self, x: &DivisorClass) -> Result<BigInt> {
        self.check(x)?;
        let mut acc = BigInt::from(-3) * &x.d;
        for v in &x.m {
            acc += v;
        }
        Ok(acc)
    }

    /// Adjunction genus `1 + (x·x + K·x)/2`, as an exact reduced rational.
    ///
    /// On integral classes the parity of `x·x + K·x` is always even
    /// (`d(d-3)` and each `m_i(m_i-1)` are even), but the exact rational
    /// is returned rather than baking that argument into the type.
    pub fn adjunction_genus(&self, x: &DivisorClass) -> Result<BigRational> {
        let num = self.self_int(x)? + self.k_degree(x)?;
        Ok(BigRational::one() + BigRational::new(num, BigInt::from(2)))
    }

    /// The primitive class spanning the same ray: all coordinates divided
    /// by their (positive) gcd, so the direction is preserved.
    pub fn primitive(&self, x: &DivisorClass) -> Result<DivisorClass> {
        self.check(x)?;
        if x.is_zero() {
            return Err(Error::ZeroClass);
        }
        let mut g = x.d.abs();
        for v in &x.m {
            g = g.gcd(v);
        }
        Ok(DivisorClass {
            d: &x.d / &g,
            m: x.m.iter().map(|v| v / &g).collect(),
        })
    }

    /// Number of nonzero multiplicities (the size of the point
    /// configuration the class actually touches).
    pub fn support_count(&self, x: &DivisorClass) -> Result<usize> {
        self.check(x)?;
        Ok(x.m.iter().filter(|v| !v.is_zero()).count())
    }

    /// Membership in the forward cone `{x·x ≥ 0, d ≥ 0}`.
    pub fn q_membership(&self, x: &DivisorClass) -> Result<QMembership> {
        self.check(x)?;
        if x.is_zero() {
            return Ok(QMembership::Zero);
        }
        let s = self.self_int(x)?;
        if s.is_negative() || x.d.sign() == Sign::Minus {
            return Ok(QMembership::Outside);
        }
        // Nonzero with x·x ≥ 0 forces d > 0 (see QMembership docs).
        Ok(if s.is_zero() {
            QMembership::Boundary
        } else {
            QMembership::Interior
        })
    }
}
