//! Divisor-class calculus on the three base surfaces of the conic bundles
//! in the classification: the plane, the quadric `P1 x P1`, and the
//! Hirzebruch surface `F1`.
//!
//! Coordinates are fixed once and for all:
//! * `P2`: `(d)` in the basis of a line, `K = -3l`;
//! * `P1xP1`: `(d1, d2)` in the ruling basis, `K = (-2, -2)`;
//! * `F1`: `(a, b)` in the basis `(l, e)` where `l` is the pullback of a
//!   line and `e` is the `(-1)`-curve, so `l^2 = 1`, `e^2 = -1`, `l.e = 0`
//!   and `K = -3l + e`. A pulled-back plane curve of degree `k` is `(k, 0)`
//!   and the `(-1)`-curve itself is `(0, 1)`.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Base {
    P2,
    P1xP1,
    F1,
}

impl Base {
    pub fn name(self) -> &'static str {
        match self {
            Base::P2 => "P2",
            Base::P1xP1 => "P1xP1",
            Base::F1 => "F1",
        }
    }

    pub fn coord_len(self) -> usize {
        match self {
            Base::P2 => 1,
            Base::P1xP1 | Base::F1 => 2,
        }
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A divisor class on one of the three base surfaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SurfaceClass {
    pub base: Base,
    // second coordinate unused for P2
    coords: [i64; 2],
}

impl Serialize for SurfaceClass {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Shadow<'a> {
            base: Base,
            coords: &'a [i64],
        }
        Shadow {
            base: self.base,
            coords: self.coords(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for SurfaceClass {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Shadow {
            base: Base,
            coords: Vec<i64>,
        }
        let s = Shadow::deserialize(de)?;
        if s.coords.len() != s.base.coord_len() {
            return Err(D::Error::custom(format!(
                "class on {} needs {} coordinates, got {}",
                s.base,
                s.base.coord_len(),
                s.coords.len()
            )));
        }
        let mut coords = [0i64; 2];
        coords[..s.coords.len()].copy_from_slice(&s.coords);
        Ok(SurfaceClass {
            base: s.base,
            coords,
        })
    }
}

impl SurfaceClass {
    pub fn p2(d: i64) -> Self {
        SurfaceClass {
            base: Base::P2,
            coords: [d, 0],
        }
    }

    pub fn p1xp1(d1: i64, d2: i64) -> Self {
        SurfaceClass {
            base: Base::P1xP1,
            coords: [d1, d2],
        }
    }

    pub fn f1(a: i64, b: i64) -> Self {
        SurfaceClass {
            base: Base::F1,
            coords: [a, b],
        }
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords[..self.base.coord_len()]
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|&c| c == 0)
    }

    /// Self-intersection `c^2` in the fixed pairings.
    pub fn self_int(&self) -> i64 {
        let c = self.coords;
        match self.base {
            Base::P2 => c[0] * c[0],
            Base::P1xP1 => 2 * c[0] * c[1],
            Base::F1 => c[0] * c[0] - c[1] * c[1],
        }
    }

    /// `K_S . c` for the canonical class of the base surface.
    pub fn k_dot(&self) -> i64 {
        let c = self.coords;
        match self.base {
            Base::P2 => -3 * c[0],
            Base::P1xP1 => -2 * c[0] - 2 * c[1],
            // K = -3l + e, so K.(a l + b e) = -3a - b
            Base::F1 => -3 * c[0] - c[1],
        }
    }

    /// `(-K_S) . c`, the anticanonical degree of the class.
    pub fn anti_k_dot(&self) -> i64 {
        -self.k_dot()
    }

    /// Arithmetic genus by adjunction, `1 + (c^2 + K.c)/2`.
    ///
    /// Panics if the adjunction number is odd; on these three lattices that
    /// cannot happen for any integer class, so a violation means memory
    /// corruption rather than bad input.
    pub fn genus(&self) -> i64 {
        let n = self.self_int() + self.k_dot();
        assert!(n % 2 == 0, "odd adjunction number on {self}");
        1 + n / 2
    }

    /// Coordinate-wise sum; errors when the bases differ.
    pub fn plus(&self, other: &SurfaceClass) -> Result<SurfaceClass> {
        if self.base != other.base {
            return Err(Error::BaseMismatch(self.base.name(), other.base.name()));
        }
        Ok(SurfaceClass {
            base: self.base,
            coords: [
                self.coords[0] + other.coords[0],
                self.coords[1] + other.coords[1],
            ],
        })
    }
}

impl fmt::Display for SurfaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.base {
            Base::P2 => write!(f, "({})", self.coords[0]),
            _ => write!(f, "({},{})", self.coords[0], self.coords[1]),
        }
    }
}

/// All nonzero effective classes of bounded anticanonical degree, in
/// deterministic lexicographic order, filtered by `pred`.
///
/// Effective here means: nonnegative coordinates on `P2` and `P1xP1`; on
/// `F1` the pulled-back classes `(a, 0)` with `a >= 1` together with the
/// `(-1)`-curve `(0, 1)` itself, which is how blowup centres appear in the
/// searches.
pub fn enumerate_classes(
    base: Base,
    degree_cap: i64,
    mut pred: impl FnMut(&SurfaceClass) -> bool,
) -> Vec<SurfaceClass> {
    let mut out = Vec::new();
    let mut push = |c: SurfaceClass, out: &mut Vec<SurfaceClass>| {
        if !c.is_zero() && c.anti_k_dot() <= degree_cap && pred(&c) {
            out.push(c);
        }
    };
    match base {
        Base::P2 => {
            let mut d = 0;
            while 3 * d <= degree_cap {
                push(SurfaceClass::p2(d), &mut out);
                d += 1;
            }
        }
        Base::P1xP1 => {
            let mut d1 = 0;
            while 2 * d1 <= degree_cap {
                let mut d2 = 0;
                while 2 * (d1 + d2) <= degree_cap {
                    push(SurfaceClass::p1xp1(d1, d2), &mut out);
                    d2 += 1;
                }
                d1 += 1;
            }
        }
        Base::F1 => {
            // the (-1)-curve first: (0,1) precedes every (a,0) lexicographically
            push(SurfaceClass::f1(0, 1), &mut out);
            let mut a = 1;
            while 3 * a <= degree_cap {
                push(SurfaceClass::f1(a, 0), &mut out);
                a += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_pairings() {
        let b = SurfaceClass::p1xp1(1, 1);
        assert_eq!(b.self_int(), 2);
        assert_eq!(b.k_dot(), -4);

        let e = SurfaceClass::f1(0, 1);
        assert_eq!(e.self_int(), -1);
        assert_eq!(e.k_dot(), -1);
        assert_eq!(e.anti_k_dot(), 1);

        let z = SurfaceClass::p2(0);
        assert_eq!(z.self_int(), 0);
        assert_eq!(z.k_dot(), 0);
    }

    #[test]
    fn genus_examples() {
        assert_eq!(SurfaceClass::p1xp1(2, 2).genus(), 1);
        assert_eq!(SurfaceClass::p2(4).genus(), 3);
        assert_eq!(SurfaceClass::p2(1).genus(), 0);
        assert_eq!(SurfaceClass::f1(0, 1).genus(), 0);
    }

    #[test]
    fn genus_closed_forms() {
        for d in 1..=10i64 {
            assert_eq!(SurfaceClass::p2(d).genus(), (d - 1) * (d - 2) / 2);
        }
        for d1 in 0..=10i64 {
            for d2 in 0..=10i64 {
                assert_eq!(
                    SurfaceClass::p1xp1(d1, d2).genus(),
                    (d1 - 1) * (d2 - 1),
                    "({d1},{d2})"
                );
            }
        }
    }

    #[test]
    fn f1_pullback_matches_plane_genus() {
        for a in 1..=10i64 {
            assert_eq!(SurfaceClass::f1(a, 0).genus(), SurfaceClass::p2(a).genus());
        }
    }

    #[test]
    fn enumerate_small_caps() {
        // brute force over d: -K.(d line) = 3d <= 6 gives d in {1, 2}
        let p2 = enumerate_classes(Base::P2, 6, |_| true);
        assert_eq!(p2, vec![SurfaceClass::p2(1), SurfaceClass::p2(2)]);

        // brute force: -K.(d1,d2) = 2(d1+d2) <= 4
        let quad = enumerate_classes(Base::P1xP1, 4, |_| true);
        assert_eq!(
            quad,
            vec![
                SurfaceClass::p1xp1(0, 1),
                SurfaceClass::p1xp1(0, 2),
                SurfaceClass::p1xp1(1, 0),
                SurfaceClass::p1xp1(1, 1),
                SurfaceClass::p1xp1(2, 0),
            ]
        );

        assert!(enumerate_classes(Base::F1, 0, |_| true).is_empty());
        assert!(enumerate_classes(Base::P2, 0, |_| true).is_empty());
    }

    #[test]
    fn base_mismatch() {
        let a = SurfaceClass::p2(1);
        let b = SurfaceClass::f1(1, 0);
        assert!(a.plus(&b).is_err());
    }

    #[test]
    fn discriminant_union_is_coordinatewise() {
        let g = SurfaceClass::f1(2, 0);
        let b = SurfaceClass::f1(0, 1);
        assert_eq!(g.plus(&b).unwrap(), SurfaceClass::f1(2, 1));
        assert_eq!(
            SurfaceClass::p2(3).plus(&SurfaceClass::p2(1)).unwrap(),
            SurfaceClass::p2(4)
        );
    }
}
