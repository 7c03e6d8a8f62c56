//! Exact numerical intersection rings for smooth threefolds.
//!
//! A [`NumRing`] stores the divisor lattice of a threefold as a basis of
//! labelled classes together with the symmetric trilinear form of top
//! intersection numbers, keyed on sorted index triples. Everything is exact
//! `i64` arithmetic with checked operations; there is no floating point in
//! this crate.
//!
//! The module also ships a seed catalog ([`seed_space`]) of the ambient
//! spaces that occur as blowup targets in the classification, and the
//! blowup-along-a-curve construction ([`NumRing::blowup_ring`]) which adjoins
//! an exceptional class `E` to a ring.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A divisor class, written in the basis of its owning ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DivisorClass(pub Vec<i64>);

impl DivisorClass {
    pub fn zero(rank: usize) -> Self {
        DivisorClass(vec![0; rank])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Negated class, for passing `-K` around.
    pub fn neg(&self) -> Self {
        DivisorClass(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Numerical data of a curve used as a blowup centre: arithmetic genus and
/// the intersection numbers against each basis divisor of the ambient ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveData {
    pub pa: i64,
    pub dot: Vec<i64>,
}

impl CurveData {
    pub fn new(pa: i64, dot: Vec<i64>) -> Self {
        CurveData { pa, dot }
    }
}

fn checked_mul(a: i64, b: i64, what: &'static str) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow(what))
}

fn checked_add(a: i64, b: i64, what: &'static str) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow(what))
}

/// The divisor lattice of a threefold with its trilinear top-intersection
/// form and canonical class.
///
/// The form is stored sparsely on sorted triples `(i, j, k)` with
/// `i <= j <= k`; symmetry of the form is by construction, never by
/// duplicated storage. Rings are immutable after construction and safe to
/// share across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumRing {
    rank: usize,
    basis_labels: Vec<String>,
    form: BTreeMap<[usize; 3], i64>,
    canonical: DivisorClass,
}

impl NumRing {
    /// Build a ring from basis labels, the nonzero monomials of the form
    /// (in any index order) and the canonical class.
    pub fn new(
        basis_labels: Vec<String>,
        monomials: &[([usize; 3], i64)],
        canonical: DivisorClass,
    ) -> Result<Self> {
        let rank = basis_labels.len();
        if canonical.len() != rank {
            return Err(Error::DimensionMismatch {
                rank,
                got: canonical.len(),
            });
        }
        let mut form = BTreeMap::new();
        for &(idx, val) in monomials {
            let mut key = idx;
            key.sort_unstable();
            if key[2] >= rank {
                return Err(Error::DimensionMismatch {
                    rank,
                    got: key[2] + 1,
                });
            }
            if val != 0 {
                form.insert(key, val);
            }
        }
        Ok(NumRing {
            rank,
            basis_labels,
            form,
            canonical,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis_labels
    }

    pub fn canonical(&self) -> &DivisorClass {
        &self.canonical
    }

    pub fn anticanonical(&self) -> DivisorClass {
        self.canonical.neg()
    }

    /// The stored nonzero monomials, sorted by index triple.
    pub fn monomials(&self) -> impl Iterator<Item = ([usize; 3], i64)> + '_ {
        self.form.iter().map(|(&k, &v)| (k, v))
    }

    fn check_class(&self, c: &DivisorClass) -> Result<()> {
        if c.len() != self.rank {
            return Err(Error::DimensionMismatch {
                rank: self.rank,
                got: c.len(),
            });
        }
        Ok(())
    }

    /// Trilinear extension of the stored form: `sum a_i b_j c_k form(i,j,k)`.
    pub fn triple(&self, a: &DivisorClass, b: &DivisorClass, c: &DivisorClass) -> Result<i64> {
        self.check_class(a)?;
        self.check_class(b)?;
        self.check_class(c)?;
        let mut acc: i64 = 0;
        // Iterate only over the nonzero monomials; each sorted key (i,j,k)
        // contributes through every distinct permutation of its indices.
        for (&[i, j, k], &v) in &self.form {
            let mut sym = 0i64;
            for (p, q, r) in permutations3(i, j, k) {
                let t = checked_mul(a.0[p], checked_mul(b.0[q], c.0[r], "triple")?, "triple")?;
                sym = checked_add(sym, t, "triple")?;
            }
            acc = checked_add(acc, checked_mul(sym, v, "triple")?, "triple")?;
        }
        Ok(acc)
    }

    /// `(-K)^3`, the anticanonical degree.
    pub fn anticanonical_degree(&self) -> i64 {
        let mk = self.anticanonical();
        self.triple(&mk, &mk, &mk)
            .expect("canonical class always matches its own ring")
    }

    /// Intersection of a divisor class with a curve given by its dot vector.
    pub fn dot_curve(&self, a: &DivisorClass, curve: &CurveData) -> Result<i64> {
        self.check_class(a)?;
        if curve.dot.len() != self.rank {
            return Err(Error::DimensionMismatch {
                rank: self.rank,
                got: curve.dot.len(),
            });
        }
        let mut acc = 0i64;
        for (x, y) in a.0.iter().zip(&curve.dot) {
            acc = checked_add(acc, checked_mul(*x, *y, "dot_curve")?, "dot_curve")?;
        }
        Ok(acc)
    }

    /// Blowup along a smooth curve with the given numerical data.
    ///
    /// The result has rank `n+1` with a new exceptional class `E` appended:
    /// pulled-back monomials keep their value, `A.B.E = 0`,
    /// `A.E^2 = -(A.C)`, and `E^3 = -deg N` where
    /// `deg N = (-K).C + 2 p_a - 2`. The canonical class becomes `K + E`.
    pub fn blowup_ring(&self, centre: &CurveData) -> Result<NumRing> {
        if centre.dot.len() != self.rank {
            return Err(Error::DimensionMismatch {
                rank: self.rank,
                got: centre.dot.len(),
            });
        }
        let n = self.rank;
        let mut labels = self.basis_labels.clone();
        let mut e_label = String::from("E");
        // keep labels unique under repeated blowups
        let mut suffix = 1;
        while labels.contains(&e_label) {
            suffix += 1;
            e_label = format!("E{suffix}");
        }
        labels.push(e_label);

        let mk = self.anticanonical();
        let k_dot_c = self.dot_curve(&mk, centre)?;
        let deg_normal = checked_add(
            k_dot_c,
            checked_mul(2, centre.pa, "blowup_ring")? - 2,
            "blowup_ring",
        )?;

        let mut monos: Vec<([usize; 3], i64)> = self.form.iter().map(|(&k, &v)| (k, v)).collect();
        for (i, &c) in centre.dot.iter().enumerate() {
            if c != 0 {
                monos.push(([i, n, n], -c));
            }
        }
        if deg_normal != 0 {
            monos.push(([n, n, n], -deg_normal));
        }

        let mut canonical = self.canonical.0.clone();
        canonical.push(1);
        NumRing::new(labels, &monos, DivisorClass(canonical))
    }

    /// JSON dump: `{rank, basis, monomials: [{idx, val}], canonical}`.
    pub fn dump_json(&self) -> serde_json::Value {
        let monomials: Vec<_> = self
            .form
            .iter()
            .map(|(k, v)| serde_json::json!({ "idx": k, "val": v }))
            .collect();
        serde_json::json!({
            "rank": self.rank,
            "basis": self.basis_labels,
            "monomials": monomials,
            "canonical": self.canonical.0,
        })
    }
}

fn permutations3(i: usize, j: usize, k: usize) -> Vec<(usize, usize, usize)> {
    let mut out = vec![
        (i, j, k),
        (i, k, j),
        (j, i, k),
        (j, k, i),
        (k, i, j),
        (k, j, i),
    ];
    out.sort_unstable();
    out.dedup();
    out
}

/// Canonical names of every seed space in the catalog, in catalog order.
pub fn seed_names() -> Vec<String> {
    let mut names = vec![
        "P3".to_string(),
        "Q".to_string(),
        "V_1".to_string(),
        "V_2".to_string(),
        "V_3".to_string(),
        "V_4".to_string(),
        "V_5".to_string(),
        "P2xP1".to_string(),
        "P1xP1xP1".to_string(),
        "F1xP1".to_string(),
        "W".to_string(),
        "P(O+O(1))/P2".to_string(),
        "P(O+O(2))/P2".to_string(),
        "P(O+O(1,1))/P1xP1".to_string(),
    ];
    for g in 2..=12 {
        names.push(format!("Ind1-g{g}"));
    }
    names
}

/// Fano index of a seed space (largest integer dividing `-K` in the lattice).
pub fn seed_index(name: &str) -> Result<i64> {
    Ok(match canonical_seed_name(name)?.as_str() {
        "P3" => 4,
        "Q" => 3,
        "V_1" | "V_2" | "V_3" | "V_4" | "V_5" => 2,
        "W" | "P1xP1xP1" | "P(O+O(1))/P2" => 2,
        _ => 1,
    })
}

fn canonical_seed_name(name: &str) -> Result<String> {
    let n = name.replace('\u{2295}', "+"); // accept the direct-sum glyph
    let n = n.trim();
    let canon = match n {
        "V7" | "V_7" => "P(O+O(1))/P2".to_string(),
        "V1" | "V2" | "V3" | "V4" | "V5" => format!("V_{}", &n[1..]),
        other => other.to_string(),
    };
    Ok(canon)
}

/// Look up a seed space by name and build its intersection ring.
///
/// Accepted names are those of [`seed_names`]; `V7` is an alias for
/// `P(O+O(1))/P2` and `V1..V5` for `V_1..V_5`.
pub fn seed_space(name: &str) -> Result<NumRing> {
    let canon = canonical_seed_name(name)?;
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let ring = match canon.as_str() {
        "P3" => NumRing::new(s(&["H"]), &[([0, 0, 0], 1)], DivisorClass(vec![-4]))?,
        "Q" => NumRing::new(s(&["H"]), &[([0, 0, 0], 2)], DivisorClass(vec![-3]))?,
        "V_1" | "V_2" | "V_3" | "V_4" | "V_5" => {
            let d: i64 = canon[2..].parse().unwrap();
            // basis H = -K/2, so H^3 = d and K = -2H
            NumRing::new(s(&["H"]), &[([0, 0, 0], d)], DivisorClass(vec![-2]))?
        }
        "P2xP1" => NumRing::new(
            s(&["h", "f"]),
            &[([0, 0, 1], 1)],
            DivisorClass(vec![-3, -2]),
        )?,
        "P1xP1xP1" => NumRing::new(
            s(&["f1", "f2", "f3"]),
            &[([0, 1, 2], 1)],
            DivisorClass(vec![-2, -2, -2]),
        )?,
        "F1xP1" => NumRing::new(
            // l = pullback of a line under F1 -> P2, e = the (-1)-curve, f = the P1 factor
            s(&["l", "e", "f"]),
            &[([0, 0, 2], 1), ([1, 1, 2], -1)],
            DivisorClass(vec![-3, 1, -2]),
        )?,
        "W" => NumRing::new(
            s(&["h1", "h2"]),
            &[([0, 0, 1], 1), ([0, 1, 1], 1)],
            DivisorClass(vec![-2, -2]),
        )?,
        // P(O + O(1)) over P2: xi^2 = xi.h, so xi^3 = xi^2 h = xi h^2 = 1
        "P(O+O(1))/P2" => NumRing::new(
            s(&["xi", "h"]),
            &[([0, 0, 0], 1), ([0, 0, 1], 1), ([0, 1, 1], 1)],
            DivisorClass(vec![-2, -2]),
        )?,
        // P(O + O(2)) over P2: xi^2 = 2 xi.h
        "P(O+O(2))/P2" => NumRing::new(
            s(&["xi", "h"]),
            &[([0, 0, 0], 4), ([0, 0, 1], 2), ([0, 1, 1], 1)],
            DivisorClass(vec![-2, -1]),
        )?,
        // P(O + O(1,1)) over P1xP1: xi^2 = xi.(f1 + f2)
        "P(O+O(1,1))/P1xP1" => NumRing::new(
            s(&["xi", "f1", "f2"]),
            &[
                ([0, 0, 0], 2),
                ([0, 0, 1], 1),
                ([0, 0, 2], 1),
                ([0, 1, 2], 1),
            ],
            DivisorClass(vec![-2, -1, -1]),
        )?,
        other => {
            if let Some(gs) = other.strip_prefix("Ind1-g") {
                let g: i64 = gs
                    .parse()
                    .map_err(|_| Error::UnknownSeed(name.to_string()))?;
                if !(2..=12).contains(&g) {
                    return Err(Error::UnknownSeed(name.to_string()));
                }
                // rank one, index one, H = -K with H^3 = 2g - 2
                NumRing::new(
                    s(&["H"]),
                    &[([0, 0, 0], 2 * g - 2)],
                    DivisorClass(vec![-1]),
                )?
            } else {
                return Err(Error::UnknownSeed(name.to_string()));
            }
        }
    };
    Ok(ring)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cls(v: &[i64]) -> DivisorClass {
        DivisorClass(v.to_vec())
    }

    #[test]
    fn triple_on_p1_cubed() {
        let r = seed_space("P1xP1xP1").unwrap();
        let mk = r.anticanonical();
        assert_eq!(mk, cls(&[2, 2, 2]));
        assert_eq!(r.triple(&mk, &mk, &mk).unwrap(), 48);
        let zero = DivisorClass::zero(3);
        assert_eq!(r.triple(&zero, &mk, &mk).unwrap(), 0);
    }

    #[test]
    fn triple_on_v7_expands_monomial_table() {
        // independently expanded by hand from xi^3 = xi^2 h = xi h^2 = 1,
        // h^3 = 0: (2xi + 2h)^3 = 8 + 3*8 + 3*8 + 0 = 56
        let r = seed_space("V7").unwrap();
        let mk = r.anticanonical();
        assert_eq!(mk, cls(&[2, 2]));
        assert_eq!(r.triple(&mk, &mk, &mk).unwrap(), 56);
    }

    #[test]
    fn anticanonical_degrees_of_rank_one_seeds() {
        assert_eq!(seed_space("P3").unwrap().anticanonical_degree(), 64);
        assert_eq!(seed_space("Q").unwrap().anticanonical_degree(), 54);
        for d in 1..=5 {
            let r = seed_space(&format!("V_{d}")).unwrap();
            assert_eq!(r.anticanonical_degree(), 8 * d);
        }
        for g in 2..=12 {
            let r = seed_space(&format!("Ind1-g{g}")).unwrap();
            assert_eq!(r.anticanonical_degree(), 2 * g - 2);
        }
    }

    #[test]
    fn anticanonical_degrees_of_bundle_seeds() {
        for (name, deg) in [
            ("W", 48),
            ("P2xP1", 54),
            ("P1xP1xP1", 48),
            ("F1xP1", 48),
            ("P(O+O(1))/P2", 56),
            ("P(O+O(2))/P2", 62),
            ("P(O+O(1,1))/P1xP1", 52),
        ] {
            assert_eq!(
                seed_space(name).unwrap().anticanonical_degree(),
                deg,
                "seed {name}"
            );
        }
    }

    #[test]
    fn unknown_seed_is_an_error() {
        assert!(matches!(seed_space("P5"), Err(Error::UnknownSeed(_))));
        assert!(matches!(seed_space("Ind1-g13"), Err(Error::UnknownSeed(_))));
    }

    #[test]
    fn seed_name_aliases() {
        assert_eq!(seed_space("V7").unwrap(), seed_space("P(O+O(1))/P2").unwrap());
        assert_eq!(seed_space("V3").unwrap(), seed_space("V_3").unwrap());
        // the direct-sum glyph is accepted too
        assert_eq!(
            seed_space("P(O\u{2295}O(2))/P2").unwrap().anticanonical_degree(),
            62
        );
    }

    #[test]
    fn blowup_of_p3_along_a_line() {
        let p3 = seed_space("P3").unwrap();
        let x = p3.blowup_ring(&CurveData::new(0, vec![1])).unwrap();
        assert_eq!(x.rank(), 2);
        assert_eq!(x.anticanonical_degree(), 54);
        // exceptional monomials: H.E^2 = -1, E^3 = -deg N = -(4 + 0 - 2) = -2
        let e2h = x.triple(&cls(&[1, 0]), &cls(&[0, 1]), &cls(&[0, 1])).unwrap();
        assert_eq!(e2h, -1);
        let e3 = x.triple(&cls(&[0, 1]), &cls(&[0, 1]), &cls(&[0, 1])).unwrap();
        assert_eq!(e3, -2);
    }

    #[test]
    fn blowup_of_q_along_a_conic() {
        let q = seed_space("Q").unwrap();
        // conic: H.C = 2, pa = 0
        let x = q.blowup_ring(&CurveData::new(0, vec![2])).unwrap();
        assert_eq!(x.anticanonical_degree(), 40);
    }

    #[test]
    fn blowup_along_elliptic_flop_degree_centre_keeps_degree() {
        // pa = 1 and (-K).C = 0: every correction term vanishes
        let w = seed_space("W").unwrap();
        let x = w.blowup_ring(&CurveData::new(1, vec![0, 0])).unwrap();
        assert_eq!(x.anticanonical_degree(), w.anticanonical_degree());
        let e = cls(&[0, 0, 1]);
        assert_eq!(x.triple(&e, &e, &e).unwrap(), 0);
    }

    #[test]
    fn blowup_exceptional_identities() {
        // (-K_X)^2.E = kC - 2pa + 2 and (-K_X).E^2 = 2pa - 2
        let q = seed_space("Q").unwrap();
        for (pa, h_dot) in [(0, 1), (0, 2), (1, 3), (2, 4), (5, 8)] {
            let c = CurveData::new(pa, vec![h_dot]);
            let kc = q.dot_curve(&q.anticanonical(), &c).unwrap();
            let x = q.blowup_ring(&c).unwrap();
            let mk = x.anticanonical();
            let e = cls(&[0, 1]);
            assert_eq!(x.triple(&mk, &mk, &e).unwrap(), kc - 2 * pa + 2);
            assert_eq!(x.triple(&mk, &e, &e).unwrap(), 2 * pa - 2);
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let q = seed_space("Q").unwrap();
        let bad = cls(&[1, 2]);
        assert!(matches!(
            q.triple(&bad, &bad, &bad),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(q.blowup_ring(&CurveData::new(0, vec![1, 0])).is_err());
    }

    #[test]
    fn dump_json_shape() {
        let v = seed_space("P(O+O(2))/P2").unwrap().dump_json();
        assert_eq!(v["rank"], 2);
        assert_eq!(v["canonical"], serde_json::json!([-2, -1]));
        let monos = v["monomials"].as_array().unwrap();
        assert_eq!(monos.len(), 3);
    }
}
