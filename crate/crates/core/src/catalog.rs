//! The catalog of degree-`d` pencil families and their base-point
//! bookkeeping.
//!
//! Each family of degree `d ≥ 2` comes with a fixed inventory: how many
//! dicritical points it has of each local type. The three low degrees are
//! sporadic; from degree 5 on the inventory depends only on `d mod 3`,
//! through `r ≈ d/3`:
//!
//! ```text
//! d = 2      2 x 2/1,  3 x 3/2                      size 13
//! d = 3      3 x 1/1,  5 x 2/1                      size 13
//! d = 4      12 x 1/1                               size 12
//! d = 3r-1   3r² x 3/2,  2r x r/2                   (r ≥ 2)
//! d = 3r     1 x 1/1,  3r² x 2/1,  2r x r/1,  2r x r/2
//! d = 3r+1   (3r²+3) x 1/1,  6r x r/1
//! ```
//!
//! The *size* of a configuration is the total number of infinitely near
//! base points: `Σ count · chain_length(type)`. Sizes admit closed forms
//! (checked against the table in the tests and sweeps), grow
//! quadratically, and — apart from the accidental tie between degrees 2
//! and 3 — never collide.

use crate::error::{Error, Result};
use crate::resolution::{chain_length, LocalType};

/// One line of a family inventory: `count` dicritical points sharing a
/// local type.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InventoryEntry {
    pub count: u64,
    pub local_type: LocalType,
}

/// The fixed base-point inventory of the degree-`d` family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyInventory {
    degree: u64,
    entries: Vec<InventoryEntry>,
}

impl FamilyInventory {
    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn entries(&self) -> &[InventoryEntry] {
        &self.entries
    }

    /// Number of dicritical points (inventory counts, not chain lengths).
    pub fn total_points(&self) -> u64 {
        self.entries.iter().map(|e| e.count).sum()
    }

    /// The local types point by point, in inventory order.
    pub fn expanded_types(&self) -> Vec<LocalType> {
        let mut out = Vec::new();
        for e in &self.entries {
            for _ in 0..e.count {
                out.push(e.local_type);
            }
        }
        out
    }
}

fn entry(count: u64, a: u64, b: u64) -> InventoryEntry {
    InventoryEntry {
        count,
        local_type: LocalType::new(a, b).expect("catalog types are positive"),
    }
}

/// The inventory of the degree-`d` family (`d ≥ 2`).
pub fn inventory(d: u64) -> Result<FamilyInventory> {
    if d < 2 {
        return Err(Error::DegreeOutOfRange(d));
    }
    let entries = match d {
        2 => vec![entry(2, 2, 1), entry(3, 3, 2)],
        3 => vec![entry(3, 1, 1), entry(5, 2, 1)],
        4 => vec![entry(12, 1, 1)],
        _ => match d % 3 {
            2 => {
                let r = (d + 1) / 3;
                vec![entry(3 * r * r, 3, 2), entry(2 * r, r, 2)]
            }
            0 => {
                let r = d / 3;
                vec![
                    entry(1, 1, 1),
                    entry(3 * r * r, 2, 1),
                    entry(2 * r, r, 1),
                    entry(2 * r, r, 2),
                ]
            }
            _ => {
                let r = (d - 1) / 3;
                vec![entry(3 * r * r + 3, 1, 1), entry(6 * r, r, 1)]
            }
        },
    };
    Ok(FamilyInventory { degree: d, entries })
}

/// Total number of infinitely near base points of the degree-`d` family:
/// `Σ count · chain_length(type)` over the inventory.
pub fn config_size(d: u64) -> Result<u64> {
    let inv = inventory(d)?;
    let mut total: u64 = 0;
    for e in &inv.entries {
        total = total
            .checked_add(
                e.count
                    .checked_mul(chain_length(&e.local_type))
                    .expect("configuration size exceeds u64"),
            )
            .expect("configuration size exceeds u64");
    }
    Ok(total)
}

/// The closed form for [`config_size`], split on `d mod 3` with the three
/// sporadic degrees up front. The parity term `3(1-(-1)^r)r/2` is `3r`
/// for odd `r` and `0` for even `r`.
pub fn closed_form_size(d: u64) -> Result<u64> {
    if d < 2 {
        return Err(Error::DegreeOutOfRange(d));
    }
    let parity = |r: u64| if r % 2 == 1 { 3 * r } else { 0 };
    Ok(match d {
        2 | 3 => 13,
        4 => 12,
        _ => match d % 3 {
            1 => {
                let r = (d - 1) / 3;
                9 * r * r + 3
            }
            2 => {
                let r = (d + 1) / 3;
                10 * r * r + parity(r)
            }
            _ => {
                let r = d / 3;
                9 * r * r + 1 + parity(r)
            }
        },
    })
}

// For d ≥ 5 write d = 3r+1, 3r-1 or 3r (r ≥ 2); the closed forms give
// size ≥ 9r² with r ≥ (d-1)/3, hence size ≥ (d-1)². Scans over d may
// therefore stop as soon as (d-1)² clears the bound being tested.
fn growth_floor(d: u64) -> u64 {
    (d - 1) * (d - 1)
}

/// All degrees `d ≥ 2` whose configuration fits in a lattice of rank `n`:
/// `{d : config_size(d) ≤ n}`, ascending. Complete by the quadratic
/// growth floor above.
pub fn admissible_degrees(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for d in 2..=4 {
        if config_size(d).expect("catalog degree") <= n {
            out.push(d);
        }
    }
    let mut d = 5;
    while growth_floor(d) <= n {
        if config_size(d).expect("catalog degree") <= n {
            out.push(d);
        }
        d += 1;
    }
    out
}

/// Largest configuration size among the degrees admissible at rank `n`,
/// or `None` when no family fits (n < 12).
pub fn support_max(n: u64) -> Option<u64> {
    admissible_degrees(n)
        .into_iter()
        .map(|d| config_size(d).expect("admissible degree"))
        .max()
}

/// The two rank thresholds of the catalog: the smallest configuration
/// size over all families, and over the families of degree ≥ 5.
///
/// Returns `(12, 37)`, attained in degrees 4 and 6; the scans below are
/// complete because sizes grow at least like `(d-1)²` past degree 4.
pub fn thresholds() -> (u64, u64) {
    let size = |d: u64| config_size(d).expect("catalog degree");
    let mut min_all = size(2).min(size(3)).min(size(4));
    let mut d = 5;
    while growth_floor(d) <= min_all {
        min_all = min_all.min(size(d));
        d += 1;
    }
    let mut min_high = size(5);
    let mut d = 6;
    while growth_floor(d) <= min_high {
        min_high = min_high.min(size(d));
        d += 1;
    }
    (min_all, min_high)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sporadic_inventories() {
        let inv = inventory(2).unwrap();
        assert_eq!(inv.entries().len(), 2);
        assert_eq!(inv.total_points(), 5);

        let inv = inventory(3).unwrap();
        assert_eq!(inv.total_points(), 8);

        let inv = inventory(4).unwrap();
        assert_eq!(inv.entries(), &[entry(12, 1, 1)]);
        assert_eq!(inv.total_points(), 12);

        assert!(matches!(inventory(1), Err(Error::DegreeOutOfRange(1))));
        assert!(inventory(0).is_err());
    }

    #[test]
    fn generic_inventory_shapes() {
        // d = 9 = 3r with r = 3.
        let inv = inventory(9).unwrap();
        assert_eq!(
            inv.entries(),
            &[entry(1, 1, 1), entry(27, 2, 1), entry(6, 3, 1), entry(6, 3, 2)]
        );
        // d = 5 = 3r-1 with r = 2; the r/2 type is non-coprime here.
        let inv = inventory(5).unwrap();
        assert_eq!(inv.entries(), &[entry(12, 3, 2), entry(4, 2, 2)]);
        // d = 7 = 3r+1 with r = 2.
        let inv = inventory(7).unwrap();
        assert_eq!(inv.entries(), &[entry(15, 1, 1), entry(12, 2, 1)]);
    }

    #[test]
    fn config_sizes_low_degrees() {
        let sizes: Vec<u64> = (2..=12).map(|d| config_size(d).unwrap()).collect();
        assert_eq!(sizes, vec![13, 13, 12, 40, 37, 39, 99, 91, 84, 160, 145]);
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_size(7).unwrap(), 39);
        assert_eq!(closed_form_size(5).unwrap(), 40);
        assert_eq!(closed_form_size(6).unwrap(), 37);
    }

    #[test]
    fn closed_form_matches_inventory_sum() {
        for d in 2..=400 {
            assert_eq!(
                config_size(d).unwrap(),
                closed_form_size(d).unwrap(),
                "degree {d}"
            );
        }
    }

    #[test]
    fn admissible_degree_examples() {
        assert!(admissible_degrees(11).is_empty());
        assert_eq!(admissible_degrees(12), vec![4]);
        assert_eq!(admissible_degrees(36), vec![2, 3, 4]);
        assert_eq!(admissible_degrees(37), vec![2, 3, 4, 6]);
    }

    #[test]
    fn support_max_examples() {
        assert_eq!(support_max(11), None);
        assert_eq!(support_max(12), Some(12));
        assert_eq!(support_max(36), Some(13));
        assert_eq!(support_max(37), Some(37));
    }

    #[test]
    fn thresholds_match_brute_scans() {
        assert_eq!(thresholds(), (12, 37));
        assert_eq!(config_size(4).unwrap(), 12);
        assert_eq!(config_size(6).unwrap(), 37);
        // The bounded scans are stable: widening the window changes nothing.
        let brute_min = |lo: u64, hi: u64| (lo..=hi).map(|d| config_size(d).unwrap()).min();
        assert_eq!(brute_min(2, 100), brute_min(2, 1000));
        assert_eq!(brute_min(5, 100), brute_min(5, 1000));
        assert_eq!(brute_min(2, 1000), Some(12));
        assert_eq!(brute_min(5, 1000), Some(37));
    }

    #[test]
    fn growth_floor_is_a_lower_bound() {
        for d in 5..=2000 {
            assert!(
                config_size(d).unwrap() >= growth_floor(d),
                "degree {d}: size {} under floor {}",
                config_size(d).unwrap(),
                growth_floor(d)
            );
        }
    }
}
