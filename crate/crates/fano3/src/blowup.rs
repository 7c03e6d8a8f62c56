//! Closed-form invariants of a blowup along a smooth curve, plus the
//! numerical necessary conditions used as filters by the table generators.
//!
//! Everything here is a polynomial identity in the input integers; the
//! geometric content (when a curve actually exists) lives in the per-source
//! branch catalogs of the `enumerate` module.

use serde::{Deserialize, Serialize};

/// Invariants of `X = Bl_C Y` in terms of `deg Y = (-K_Y)^3`,
/// `kC = (-K_Y).C` and `pa = p_a(C)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupResult {
    /// `(-K_X)^3`
    pub deg_x: i64,
    /// `(-K_X)^2 . E`
    pub k2e: i64,
    /// `(-K_X) . E^2`
    pub ke2: i64,
    /// `E^3 = -deg N_{C/Y}`
    pub e3: i64,
}

pub fn blowup_invariants(deg_y: i64, kc: i64, pa: i64) -> BlowupResult {
    BlowupResult {
        deg_x: deg_y - 2 * kc + 2 * pa - 2,
        k2e: kc - 2 * pa + 2,
        ke2: 2 * pa - 2,
        e3: -(kc + 2 * pa - 2),
    }
}

/// Necessary numerical conditions for `Bl_C Y` to be Fano when `Y` is.
///
/// This encodes only necessary conditions: `kC > 2 pa - 2`, positive degree
/// drop, and positivity of `(-K_X)^2 . E`. It never asserts Fano-ness;
/// enumerators combine it with per-source admissible sets.
pub fn fano_filter(deg_y: i64, kc: i64, pa: i64) -> bool {
    let r = blowup_invariants(deg_y, kc, pa);
    kc > 2 * pa - 2 && r.deg_x > 0 && r.deg_x < deg_y && r.k2e > 0
}

/// The only `(pa, kC)` pairs with degree deficit exactly four.
pub fn deficit4_cases() -> [(i64, i64); 3] {
    [(0, 1), (1, 2), (2, 3)]
}

/// `D . B_Y < (-K_Y)^2 . D` for a prime divisor `D` not containing the
/// centre; the search bound used for centres on `P2 x P1`.
pub fn center_divisor_bound(db: i64, k2d: i64) -> bool {
    db < k2d
}

/// Ray-length condition `mu_1 + mu_2 > r_V` for a two-centre blowup of a
/// rank-one Fano `V` to stay Fano.
pub fn mu_sum_filter(mu1: i64, mu2: i64, rv: i64) -> bool {
    mu1 + mu2 > rv
}
