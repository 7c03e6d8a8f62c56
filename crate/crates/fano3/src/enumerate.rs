//! Bounded searches that regenerate the classification tables.
//!
//! Each stage iterates a frozen, per-source parameter space of blowup
//! centres, pushes every branch through the elementary-transform calculus,
//! filters by the admissible target degrees of the stage, and identifies
//! the resulting families against the atlas. Searches are deterministic,
//! and doubling the cap must not change any output; a surviving row at the
//! cap boundary is a hard error.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::atlas::{Atlas, IdentifyHints, RayType};
use crate::blowup;
use crate::error::{Error, Result};
use crate::numring::{seed_space, DivisorClass};
use crate::surfaces::{Base, SurfaceClass};
use crate::transform::{transform, FanoStatus, TransformInput};

/// Hard cap on each degree coordinate of a search. Every table is already
/// exhausted well below it; tests re-run everything at twice the cap.
pub const DEFAULT_CAP: i64 = 12;

/// Far side of a transform row: a named family or a non-Fano threefold.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Target {
    Id(String),
    NonFano,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Id(s) => f.write_str(s),
            Target::NonFano => f.write_str("non-Fano"),
        }
    }
}

/// One elementary-transform outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransformRow {
    /// Families matching `(rho, deg_x)` and the conic-bundle pair.
    pub x_candidates: Vec<String>,
    pub y_id: String,
    pub yp: Target,
    /// Candidate set for the far side before resolution, when the degree
    /// alone is ambiguous.
    pub yp_candidates: Vec<String>,
    pub deg_x: i64,
    pub curve: SurfaceClass,
    pub pa: i64,
    pub k_yb: i64,
    pub k_ypbp: i64,
}

impl TransformRow {
    /// Sort/dedupe key; the full numeric content of the row.
    fn key(&self) -> (i64, String, String, Vec<i64>, i64, i64, i64) {
        (
            self.deg_x,
            self.y_id.clone(),
            self.yp.to_string(),
            self.curve.coords().to_vec(),
            self.pa,
            self.k_yb,
            self.k_ypbp,
        )
    }
}

/// One branch of a source's parameter space: a candidate blowup centre.
#[derive(Debug, Clone)]
struct Branch {
    curve: SurfaceClass,
    k_yb: i64,
    pa: i64,
    /// Fibre-of-projection centres transform along the base exchange
    /// between `P1 x P1` and `F1`, which resolves deg-48 ambiguity.
    is_fibre: bool,
    /// Set when a search parameter sits on the cap boundary.
    at_cap: bool,
}

impl Branch {
    fn new(curve: SurfaceClass, k_yb: i64, pa: i64) -> Self {
        Branch {
            curve,
            k_yb,
            pa,
            is_fibre: false,
            at_cap: false,
        }
    }

    fn fibre(curve: SurfaceClass, k_yb: i64) -> Self {
        Branch {
            curve,
            k_yb,
            pa: 0,
            is_fibre: true,
            at_cap: false,
        }
    }

    fn cap(mut self, at_cap: bool) -> Self {
        self.at_cap = at_cap;
        self
    }
}

struct Source {
    id: &'static str,
    deg: i64,
    branches: Vec<Branch>,
    /// Whether this source's geometry admits a non-Fano far side.
    non_fano_allowed: bool,
}

fn plane_genus(d: i64) -> i64 {
    SurfaceClass::p2(d).genus()
}

fn normalize(c: SurfaceClass) -> SurfaceClass {
    // bidegrees on P1 x P1 are only defined up to swapping the rulings
    if c.base == Base::P1xP1 {
        let (a, b) = (c.coords()[0], c.coords()[1]);
        if a > b {
            return SurfaceClass::p1xp1(b, a);
        }
    }
    c
}

// ---------------------------------------------------------------------
// stage: transforms over P2 (rho = 3)
// ---------------------------------------------------------------------

/// Length of the extremal ray away from the plane bundle on a rank-two
/// family, used in the bound `deg B < mu + mu'` for centres on the trivial
/// bundle. The bundle side is one of the C2 rays; the other ray is what
/// remains after removing it.
fn p2_mu_other(id: &str) -> i64 {
    let record = Atlas::get().lookup(id).expect("known source");
    let mut types: Vec<RayType> = record.rays.iter().map(|r| r.ray_type).collect();
    if let Some(pos) = types.iter().position(|t| matches!(t, RayType::C2)) {
        types.remove(pos);
    }
    types.first().map(|t| t.length()).unwrap_or(1)
}

fn p2_sources(cap: i64) -> Vec<Source> {
    let mut out = Vec::new();

    // degree 30: the centre is forced to be a smooth fibre of the second
    // conic bundle, a conic over a plane conic
    out.push(Source {
        id: "2-24",
        deg: 30,
        branches: vec![Branch::new(SurfaceClass::p2(2), 2, 0)],
        non_fano_allowed: false,
    });

    // degree 38: either a fibre of the exceptional ruled surface, or a
    // centre disjoint from it with -K.B = 2d
    let mut b27 = vec![Branch::new(SurfaceClass::p2(1), 1, 0)];
    for d in 1..=cap {
        b27.push(Branch::new(SurfaceClass::p2(d), 2 * d, plane_genus(d)).cap(d == cap));
    }
    out.push(Source {
        id: "2-27",
        deg: 38,
        branches: b27,
        non_fano_allowed: false,
    });

    // degree 46: same shape with -K.B = 3d away from the exceptional locus
    let mut b31 = vec![Branch::new(SurfaceClass::p2(1), 1, 0)];
    for d in 1..=cap {
        b31.push(Branch::new(SurfaceClass::p2(d), 3 * d, plane_genus(d)).cap(d == cap));
    }
    out.push(Source {
        id: "2-31",
        deg: 46,
        branches: b31,
        non_fano_allowed: false,
    });

    // degree 48: centres carry a bidegree (d1, d2) on the two projections;
    // the centre is a fibre of the far projection, or a regular subsection
    // of both, in which case both plane images are smooth of the same genus
    let mut b32 = vec![
        Branch::new(SurfaceClass::p2(1), 2, 0), // fibre, bidegree (1,0)
        Branch::new(SurfaceClass::p2(1), 6, 0), // bidegree (1,2)
        Branch::new(SurfaceClass::p2(2), 6, 0), // bidegree (2,1)
    ];
    for d in 1..=cap {
        // the balanced family (d, d)
        b32.push(Branch::new(SurfaceClass::p2(d), 4 * d, plane_genus(d)).cap(d == cap));
    }
    out.push(Source {
        id: "2-32",
        deg: 48,
        branches: b32,
        non_fano_allowed: false,
    });

    // degree 54: -K.B = 2m + 3d where m is the pairing against a plane
    // fibre, bounded by (-K)^2 . plane computed on the product ring
    let ring = seed_space("P2xP1").expect("seed");
    let mk = ring.anticanonical();
    let plane = DivisorClass(vec![0, 1]);
    let k2_plane = ring.triple(&mk, &mk, &plane).expect("rank matches");
    let mut b34 = Vec::new();
    for d in 1..=cap {
        for m in 0.. {
            if !blowup::center_divisor_bound(m, k2_plane) {
                break;
            }
            b34.push(Branch::new(SurfaceClass::p2(d), 2 * m + 3 * d, plane_genus(d)).cap(d == cap));
        }
    }
    out.push(Source {
        id: "2-34",
        deg: 54,
        branches: b34,
        non_fano_allowed: true,
    });

    // degree 56: -K.B = 4d + 2u where u in {-1, 0, 1} is the pairing with
    // the exceptional plane; u = -1 means a line on that plane
    let mut b35 = vec![Branch::new(SurfaceClass::p2(1), 2, 0)];
    for d in 1..=cap {
        for u in [0, 1] {
            b35.push(Branch::new(SurfaceClass::p2(d), 4 * d + 2 * u, plane_genus(d)).cap(d == cap));
        }
    }
    out.push(Source {
        id: "2-35",
        deg: 56,
        branches: b35,
        non_fano_allowed: false,
    });

    // degree 62: centres avoid the exceptional plane, -K.B = 5d
    let mut b36 = Vec::new();
    for d in 1..=cap {
        b36.push(Branch::new(SurfaceClass::p2(d), 5 * d, plane_genus(d)).cap(d == cap));
    }
    out.push(Source {
        id: "2-36",
        deg: 62,
        branches: b36,
        non_fano_allowed: false,
    });

    out
}

/// Regenerate the table of elementary transforms over the plane.
pub fn enumerate_p2(cap: i64) -> Result<Vec<TransformRow>> {
    let sources = p2_sources(cap);
    let degree_of = |id: &str| sources.iter().find(|s| s.id == id).map(|s| s.deg);
    let id_of_degree = |deg: i64| -> Option<&'static str> {
        sources
            .iter()
            .find(|s| s.deg == deg)
            .map(|s| s.id)
    };

    let mut rows: Vec<(TransformRow, bool)> = Vec::new();
    for src in &sources {
        for br in &src.branches {
            let out = transform(&TransformInput {
                deg_y: src.deg,
                k_yb: br.k_yb,
                curve: br.curve,
                pa: br.pa,
            });
            if !blowup::fano_filter(src.deg, br.k_yb, br.pa) {
                continue;
            }
            match out.fano_prime {
                FanoStatus::NonFanoCandidate if src.non_fano_allowed => {
                    rows.push((
                        RawRow {
                            y_id: src.id.to_string(),
                            yp: Target::NonFano,
                            yp_candidates: vec![],
                            deg_x: out.deg_x,
                            curve: br.curve,
                            pa: br.pa,
                            k_yb: br.k_yb,
                            k_ypbp: out.k_ypbp,
                        }
                        .identify(3),
                        br.at_cap,
                    ));
                }
                FanoStatus::NonFanoCandidate => {} // excluded geometrically
                FanoStatus::Fano => {
                    let Some(yp_id) = id_of_degree(out.deg_yp) else {
                        continue;
                    };
                    // bound on the centre degree over the trivial bundle
                    if src.id == "2-34" {
                        let d = br.curve.coords()[0];
                        if d >= 3 + p2_mu_other(yp_id) {
                            continue;
                        }
                    }
                    let (y, yp, k1, k2) = orient(
                        (src.id, src.deg, br.k_yb),
                        (yp_id, out.deg_yp, out.k_ypbp),
                    );
                    debug_assert!(degree_of(y).is_some());
                    rows.push((
                        RawRow {
                            y_id: y.to_string(),
                            yp: Target::Id(yp.to_string()),
                            yp_candidates: vec![],
                            deg_x: out.deg_x,
                            curve: br.curve,
                            pa: br.pa,
                            k_yb: k1,
                            k_ypbp: k2,
                        }
                        .identify(3),
                        br.at_cap,
                    ));
                }
            }
        }
    }
    finish(rows, cap)
}

/// Numeric sort key of an `a-b` family id.
fn id_key(id: &str) -> (u32, u32) {
    let mut it = id.split('-').map(|s| s.parse().unwrap_or(u32::MAX));
    (it.next().unwrap_or(u32::MAX), it.next().unwrap_or(u32::MAX))
}

/// Canonical orientation: the lower-degree side is `Y`; ties fall back to
/// the smaller pairing and then to the id numbering.
fn orient<'a>(
    a: (&'a str, i64, i64),
    b: (&'a str, i64, i64),
) -> (&'a str, &'a str, i64, i64) {
    if (b.1, b.2, id_key(b.0)) < (a.1, a.2, id_key(a.0)) {
        (b.0, a.0, b.2, a.2)
    } else {
        (a.0, b.0, a.2, b.2)
    }
}

/// A row before the ambient family has been identified.
struct RawRow {
    y_id: String,
    yp: Target,
    yp_candidates: Vec<String>,
    deg_x: i64,
    curve: SurfaceClass,
    pa: i64,
    k_yb: i64,
    k_ypbp: i64,
}

impl RawRow {
    /// Attach the families matching `(rho, deg_x)` and the bundle pair.
    fn identify(self, rho: u32) -> TransformRow {
        let pair = [
            self.y_id.clone(),
            match &self.yp {
                Target::Id(s) => s.clone(),
                Target::NonFano => "non-Fano".to_string(),
            },
        ];
        let hints = IdentifyHints {
            cb_base: Some(self.curve.base),
            cb_pair: Some(pair),
            ..Default::default()
        };
        let x_candidates = Atlas::get()
            .identify(rho, self.deg_x, &hints)
            .iter()
            .map(|r| r.id.clone())
            .collect();
        TransformRow {
            x_candidates,
            y_id: self.y_id,
            yp: self.yp,
            yp_candidates: self.yp_candidates,
            deg_x: self.deg_x,
            curve: normalize(self.curve),
            pa: self.pa,
            k_yb: self.k_yb,
            k_ypbp: self.k_ypbp,
        }
    }
}

fn finish(rows: Vec<(TransformRow, bool)>, cap: i64) -> Result<Vec<TransformRow>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (row, at_cap) in rows {
        if at_cap {
            return Err(Error::CapExhausted {
                cap,
                what: format!("row {} vs {} at degree {}", row.y_id, row.yp, row.deg_x),
            });
        }
        if seen.insert(row.key()) {
            out.push(row);
        }
    }
    out.sort_by_key(|r| r.key());
    Ok(out)
}

// ---------------------------------------------------------------------
// stage: transforms over P1 x P1 (rho = 4)
// ---------------------------------------------------------------------

fn genus_compatible(d1: i64, d2: i64, d3: i64) -> bool {
    let p12 = (d1 - 1) * (d2 - 1);
    let p23 = (d2 - 1) * (d3 - 1);
    let p31 = (d3 - 1) * (d1 - 1);
    p12 == p23 && p23 == p31
}

fn p1p1_sources(cap: i64) -> Vec<Source> {
    let mut out = Vec::new();

    // degree 36: the centre is a smooth fibre of the plane conic bundle
    out.push(Source {
        id: "3-17",
        deg: 36,
        branches: vec![Branch::new(SurfaceClass::p1xp1(1, 1), 2, 0)],
        non_fano_allowed: false,
    });

    // degree 44: a fibre of one exceptional ruled surface, or a line away
    // from both; longer centres fail the subsection genus constraint
    {
        let mut bs = vec![
            Branch::new(SurfaceClass::p1xp1(0, 1), 1, 0),
            Branch::new(SurfaceClass::p1xp1(1, 1), 4, 0),
            Branch::new(SurfaceClass::p1xp1(3, 3), 12, 0),
            Branch::new(SurfaceClass::p1xp1(4, 4), 16, 1),
        ];
        bs.retain(|b| b.curve.genus() == b.pa);
        // a far side of the same degree would need (d1+2)(d2+2) = kYB + 4,
        // which none of the surviving centres satisfies
        for b in &bs {
            let (d1, d2) = (b.curve.coords()[0], b.curve.coords()[1]);
            assert_ne!((d1 + 2) * (d2 + 2), b.k_yb + 4, "self-transform excluded");
        }
        out.push(Source {
            id: "3-25",
            deg: 44,
            branches: bs,
            non_fano_allowed: false,
        });
    }

    // degree 48, triple product: centres carry a tridegree; a regular
    // subsection of all three projections has one genus, so the pairwise
    // adjunction numbers must agree
    {
        let mut bs = vec![Branch::fibre(SurfaceClass::p1xp1(0, 1), 2)]; // (0,1,0)
        for d1 in 0..=cap {
            for d2 in d1..=cap {
                for d3 in 0..=cap {
                    if (d1, d2) == (0, 0) {
                        continue;
                    }
                    let regular = genus_compatible(d1, d2, d3);
                    // far side degenerates only over thin centres
                    let non_fano_shape = d3 == 2 * d1 * d2 + 1 && d2 <= 1;
                    if !regular && !non_fano_shape {
                        continue;
                    }
                    let at_cap = d1 == cap || d2 == cap || d3 == cap;
                    bs.push(
                        Branch::new(
                            SurfaceClass::p1xp1(d1, d2),
                            2 * (d1 + d2 + d3),
                            (d1 - 1) * (d2 - 1),
                        )
                        .cap(at_cap),
                    );
                }
            }
        }
        out.push(Source {
            id: "3-27",
            deg: 48,
            branches: bs,
            non_fano_allowed: true,
        });
    }

    // degree 48, F1 x P1: bidegree (d1, d2) plus the pairing gamma with
    // the pulled-back (-1)-curve; centres either hit it on a fibre, equal
    // it, or avoid it entirely
    {
        let mut bs = vec![
            Branch::fibre(SurfaceClass::p1xp1(0, 1), 2),
            // the (-1)-curve itself: gamma = -1
            Branch::new(SurfaceClass::p1xp1(1, 0), 1, 0),
        ];
        for d2 in 0..=cap {
            // d1 = 1: any plane image is a line
            bs.push(Branch::new(SurfaceClass::p1xp1(1, d2), 3 + 2 * d2, 0).cap(d2 == cap));
        }
        for t in 1..=cap / 2 {
            // d1 = 2 d2: plane image of degree d1 with matching genus
            bs.push(
                Branch::new(SurfaceClass::p1xp1(2 * t, t), 8 * t, (2 * t - 1) * (t - 1))
                    .cap(2 * t + 2 > cap),
            );
        }
        out.push(Source {
            id: "3-28",
            deg: 48,
            branches: bs,
            non_fano_allowed: true,
        });
    }

    // degree 52: the negative section is disjoint from every centre, so
    // -K.B = 3(d1 + d2); the bundle geometry forces a Fano far side
    {
        let classes = crate::surfaces::enumerate_classes(Base::P1xP1, 4 * cap, |c| {
            let (d1, d2) = (c.coords()[0], c.coords()[1]);
            // (0, d2) is a subsection only for d2 = 1
            d1 <= d2 && (d1 - 1) * (d2 - 1) >= 0
        });
        let bs = classes
            .into_iter()
            .map(|c| {
                let (d1, d2) = (c.coords()[0], c.coords()[1]);
                Branch::new(c, 3 * (d1 + d2), (d1 - 1) * (d2 - 1)).cap(d2 >= cap)
            })
            .collect();
        out.push(Source {
            id: "3-31",
            deg: 52,
            branches: bs,
            non_fano_allowed: false,
        });
    }

    out
}

/// Resolve a far side of degree 48, which two families share.
///
/// The far side of a transform is itself a transform source, so its centre
/// must appear in the candidate's own branch catalog with the same curve
/// class, pairing and genus. When exactly one candidate matches, that
/// settles it; when both match (the fibre rows and the `(1,2)` rows), the
/// transform descends to the base exchange between `P1 x P1` and `F1`, so
/// the far side is the other product family. No reverse branch at all
/// means the transform does not exist and the hit is dropped.
fn resolve_48(
    sources: &[Source],
    source_id: &str,
    curve: SurfaceClass,
    k_ypbp: i64,
    pa: i64,
    is_fibre: bool,
) -> Option<&'static str> {
    let c = normalize(curve);
    let mut matches: Vec<&'static str> = Vec::new();
    for cand in sources.iter().filter(|s| s.deg == 48) {
        let hit = cand
            .branches
            .iter()
            .any(|b| normalize(b.curve) == c && b.k_yb == k_ypbp && b.pa == pa);
        if hit {
            matches.push(cand.id);
        }
    }
    match matches.as_slice() {
        [] => None,
        [one] => Some(one),
        _ => {
            let tied_on_exchange = is_fibre || (c == SurfaceClass::p1xp1(1, 2) && k_ypbp == 8);
            assert!(tied_on_exchange, "unexpected degree-48 tie over {c}");
            Some(match source_id {
                "3-27" => "3-28",
                "3-28" => "3-27",
                other => panic!("tie from a non-product source {other}"),
            })
        }
    }
}

/// Regenerate the table of elementary transforms over `P1 x P1` at
/// Picard rank four.
pub fn enumerate_p1p1_rho4(cap: i64) -> Result<Vec<TransformRow>> {
    let sources = p1p1_sources(cap);
    let ids_of_degree = |deg: i64| -> Vec<&'static str> {
        sources
            .iter()
            .filter(|s| s.deg == deg)
            .map(|s| s.id)
            .collect()
    };

    let mut rows: Vec<(TransformRow, bool)> = Vec::new();
    for src in &sources {
        for br in &src.branches {
            let out = transform(&TransformInput {
                deg_y: src.deg,
                k_yb: br.k_yb,
                curve: br.curve,
                pa: br.pa,
            });
            if !blowup::fano_filter(src.deg, br.k_yb, br.pa) {
                continue;
            }
            match out.fano_prime {
                FanoStatus::NonFanoCandidate if src.non_fano_allowed => rows.push((
                    RawRow {
                            y_id: src.id.to_string(),
                            yp: Target::NonFano,
                            yp_candidates: vec![],
                            deg_x: out.deg_x,
                            curve: br.curve,
                            pa: br.pa,
                            k_yb: br.k_yb,
                            k_ypbp: out.k_ypbp,
                        }
                        .identify(4),
                    br.at_cap,
                )),
                FanoStatus::NonFanoCandidate => {}
                FanoStatus::Fano => {
                    let cands = ids_of_degree(out.deg_yp);
                    let (yp_id, yp_cands) = match cands.len() {
                        0 => continue,
                        1 => (cands[0], vec![]),
                        _ => {
                            let Some(resolved) = resolve_48(
                                &sources,
                                src.id,
                                br.curve,
                                out.k_ypbp,
                                br.pa,
                                br.is_fibre,
                            ) else {
                                // no reverse branch: the far side cannot
                                // carry such a centre
                                continue;
                            };
                            (resolved, cands.iter().map(|s| s.to_string()).collect())
                        }
                    };
                    let deg_of = |id: &str| sources.iter().find(|s| s.id == id).unwrap().deg;
                    let (y, yp, k1, k2) = orient(
                        (src.id, src.deg, br.k_yb),
                        (yp_id, deg_of(yp_id), out.k_ypbp),
                    );
                    rows.push((
                        RawRow {
                            y_id: y.to_string(),
                            yp: Target::Id(yp.to_string()),
                            yp_candidates: yp_cands,
                            deg_x: out.deg_x,
                            curve: br.curve,
                            pa: br.pa,
                            k_yb: k1,
                            k_ypbp: k2,
                        }
                        .identify(4),
                        br.at_cap,
                    ));
                }
            }
        }
    }
    finish(rows, cap)
}

// ---------------------------------------------------------------------
// stage: conic bundles over F1 at rho = 3 (point blowups of the base)
// ---------------------------------------------------------------------

/// One row of the rank-three classification over `F1`: blowing up a smooth
/// fibre of a rank-two conic bundle over the plane.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FibreLiftRow {
    pub x_id: String,
    pub deg_x: i64,
    pub source_id: String,
    pub deg_source: i64,
    /// degree of the source's discriminant on the plane
    pub delta_deg: i64,
}

/// Scan the rank-two families with a conic bundle over the plane and keep
/// those whose fibre blowup stays Fano.
pub fn enumerate_f1_rho3() -> Result<Vec<FibreLiftRow>> {
    let atlas = Atlas::get();
    let mut out = Vec::new();
    for r in atlas.list(|r| r.rho == 2) {
        let mut emitted = false;
        for (i, f) in r.rays.iter().enumerate() {
            if emitted {
                break;
            }
            if !matches!(f.ray_type, RayType::C1 | RayType::C2) {
                continue;
            }
            // the other extremal ray decides whether a fibre blowup can
            // stay Fano
            let Some(h) = r.rays.iter().enumerate().find(|(j, _)| *j != i).map(|(_, h)| h)
            else {
                continue;
            };
            match h.ray_type {
                RayType::E3orE4 | RayType::E5 | RayType::C1 => continue,
                RayType::E1 => {
                    // only allowed onto an index-two target under the far
                    // bundle being untwisted
                    if f.ray_type != RayType::C2 {
                        continue;
                    }
                    let idx = crate::numring::seed_index(&h.target).unwrap_or(1);
                    if idx != 2 {
                        continue;
                    }
                }
                _ => {}
            }
            let deg_x = r.degree - 6;
            if deg_x <= 0 {
                continue;
            }
            let delta_deg = f
                .delta
                .as_ref()
                .map(|d| d.coords()[0])
                .unwrap_or_default();
            let hints = IdentifyHints {
                cb_base: Some(Base::F1),
                ..Default::default()
            };
            let xs = atlas.identify(3, deg_x, &hints);
            let x_id = match xs.as_slice() {
                [x] => x.id.clone(),
                other => {
                    return Err(Error::BadAtlas(format!(
                        "fibre lift of {} matches {} families",
                        r.id,
                        other.len()
                    )))
                }
            };
            out.push(FibreLiftRow {
                x_id,
                deg_x,
                source_id: r.id.clone(),
                deg_source: r.degree,
                delta_deg,
            });
            emitted = true;
        }
    }
    out.sort_by_key(|r| r.deg_x);
    Ok(out)
}

// ---------------------------------------------------------------------
// stage: transforms over F1 (rho = 4)
// ---------------------------------------------------------------------

fn f1_sources(cap: i64) -> Vec<Source> {
    let gamma = SurfaceClass::f1(0, 1);
    let pullback = SurfaceClass::f1;
    let mut out = Vec::new();

    // degree 42: the centre is a fibre of one of the two plane projections
    out.push(Source {
        id: "3-24",
        deg: 42,
        branches: vec![Branch::new(pullback(1, 0), 2, 0)],
        non_fano_allowed: false,
    });

    // degree 48: the (-1)-curve, or a pulled-back plane curve with an
    // extra fibre degree d2; plane images are lines (d1 = 1) or have the
    // balanced shape d1 = 2 d2
    {
        let mut bs = vec![Branch::new(gamma, 1, 0)];
        for d2 in 0..=cap {
            bs.push(Branch::new(pullback(1, 0), 3 + 2 * d2, 0).cap(d2 == cap));
        }
        for t in 1..=cap / 2 {
            bs.push(
                Branch::new(pullback(2 * t, 0), 8 * t, (2 * t - 1) * (t - 1)).cap(2 * t + 2 > cap),
            );
        }
        out.push(Source {
            id: "3-28",
            deg: 48,
            branches: bs,
            non_fano_allowed: true,
        });
    }

    // degree 50: the effective classes are exactly the centre candidates,
    // the (-1)-curve with pairing 1 or a pulled-back plane curve disjoint
    // from the negative section with -K.B = 4d
    {
        let bs = crate::surfaces::enumerate_classes(Base::F1, 3 * cap, |_| true)
            .into_iter()
            .map(|c| {
                if c == gamma {
                    Branch::new(c, 1, 0)
                } else {
                    let d = c.coords()[0];
                    Branch::new(c, 4 * d, plane_genus(d)).cap(d >= cap)
                }
            })
            .collect();
        out.push(Source {
            id: "3-30",
            deg: 50,
            branches: bs,
            non_fano_allowed: true,
        });
    }

    out
}

/// Regenerate the table of elementary transforms over `F1` at Picard rank
/// four. Sources are the rank-three conic bundles over `F1` minus the two
/// small-degree families, whose second bundle is too twisted to admit a
/// regular subsection.
pub fn enumerate_f1_rho4(cap: i64) -> Result<Vec<TransformRow>> {
    let sources = f1_sources(cap);
    let mut rows: Vec<(TransformRow, bool)> = Vec::new();
    for src in &sources {
        for br in &src.branches {
            let out = transform(&TransformInput {
                deg_y: src.deg,
                k_yb: br.k_yb,
                curve: br.curve,
                pa: br.pa,
            });
            if !blowup::fano_filter(src.deg, br.k_yb, br.pa) {
                continue;
            }
            match out.fano_prime {
                FanoStatus::NonFanoCandidate if src.non_fano_allowed => rows.push((
                    RawRow {
                            y_id: src.id.to_string(),
                            yp: Target::NonFano,
                            yp_candidates: vec![],
                            deg_x: out.deg_x,
                            curve: br.curve,
                            pa: br.pa,
                            k_yb: br.k_yb,
                            k_ypbp: out.k_ypbp,
                        }
                        .identify(4),
                    br.at_cap,
                )),
                FanoStatus::NonFanoCandidate => {}
                FanoStatus::Fano => {
                    let Some(yp) = sources.iter().find(|s| s.deg == out.deg_yp) else {
                        continue;
                    };
                    let (y, yp, k1, k2) = orient(
                        (src.id, src.deg, br.k_yb),
                        (yp.id, yp.deg, out.k_ypbp),
                    );
                    rows.push((
                        RawRow {
                            y_id: y.to_string(),
                            yp: Target::Id(yp.to_string()),
                            yp_candidates: vec![],
                            deg_x: out.deg_x,
                            curve: br.curve,
                            pa: br.pa,
                            k_yb: k1,
                            k_ypbp: k2,
                        }
                        .identify(4),
                        br.at_cap,
                    ));
                }
            }
        }
    }
    finish(rows, cap)
}

// ---------------------------------------------------------------------
// stage: fibre blowups at rho = 4
// ---------------------------------------------------------------------

/// One Fano conic bundle obtained by blowing up a smooth fibre of a
/// rank-three conic bundle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FibreBlowupRow {
    pub x_id: String,
    pub source_id: String,
    pub deg_x: i64,
    pub deg_source: i64,
    pub base: Base,
    /// discriminant of the source bundle
    pub delta: SurfaceClass,
}

fn lift_to_f1(id: &str) -> Option<&'static str> {
    match id {
        "2-32" => Some("3-24"),
        "2-34" => Some("3-28"),
        "2-35" => Some("3-30"),
        _ => None,
    }
}

/// Fibre blowups of rank-three conic bundles that stay Fano: either the
/// plane case, where the blowup is the base change to `F1` of an entire
/// transform row, or a product family, where the blowup is again a product.
pub fn enumerate_fibre_blowups_rho4(cap: i64) -> Result<Vec<FibreBlowupRow>> {
    let atlas = Atlas::get();
    let p2_rows = enumerate_p2(cap)?;
    let f1_rows = enumerate_f1_rho4(cap)?;
    let mut out = Vec::new();

    for row in &p2_rows {
        let Some(y_lift) = lift_to_f1(&row.y_id) else {
            continue;
        };
        let yp_lift = match &row.yp {
            Target::NonFano => Target::NonFano,
            Target::Id(id) => match lift_to_f1(id) {
                Some(l) => Target::Id(l.to_string()),
                None => continue,
            },
        };
        let d = row.curve.coords()[0];
        let lifted_curve = SurfaceClass::f1(d, 0);
        let matched = f1_rows.iter().find(|f| {
            f.y_id == y_lift
                && f.yp == yp_lift
                && f.curve == lifted_curve
                && f.pa == row.pa
                && f.k_yb == row.k_yb
                && f.k_ypbp == row.k_ypbp
        });
        let Some(f1_row) = matched else { continue };
        debug_assert_eq!(f1_row.deg_x, row.deg_x - 6);
        let x_id = match f1_row.x_candidates.as_slice() {
            [x] => x.clone(),
            _ => {
                return Err(Error::BadAtlas(format!(
                    "ambiguous fibre blowup over {}",
                    row.y_id
                )))
            }
        };
        let x_prime = match row.x_candidates.as_slice() {
            [x] => x.clone(),
            _ => {
                return Err(Error::BadAtlas(format!(
                    "ambiguous plane bundle for {}",
                    row.y_id
                )))
            }
        };
        // the source discriminant is the union of the transform source's
        // (empty) discriminant with the centre class
        let delta = crate::transform::discriminant_union(&SurfaceClass::p2(0), &row.curve)?;
        out.push(FibreBlowupRow {
            x_id,
            source_id: x_prime,
            deg_x: f1_row.deg_x,
            deg_source: row.deg_x,
            base: Base::P2,
            delta,
        });
    }

    // product families: blowing up a fibre keeps the product structure and
    // lands on the degree-42 product; each degree-48 family contributes
    // through its untwisted bundle
    for r in atlas.list(|r| {
        r.rho == 3
            && r.degree == 48
            && r.conic_bundles
                .iter()
                .any(|cb| matches!(&cb.delta, crate::atlas::Delta::Class(c) if c.is_zero()))
    }) {
        let base = if r.has_conic_bundle_over(Base::F1) {
            Base::F1
        } else {
            Base::P1xP1
        };
        let delta = match base {
            Base::F1 => SurfaceClass::f1(0, 0),
            _ => SurfaceClass::p1xp1(0, 0),
        };
        out.push(FibreBlowupRow {
            x_id: "4-10".to_string(),
            source_id: r.id.clone(),
            deg_x: r.degree - 6,
            deg_source: r.degree,
            base,
            delta,
        });
    }

    out.sort_by(|a, b| (a.deg_x, &a.source_id).cmp(&(b.deg_x, &b.source_id)));
    Ok(out)
}

// ---------------------------------------------------------------------
// stage: rho = 5 fibre squares
// ---------------------------------------------------------------------

/// One rank-five family presented as a fibre square `Y x_Z Y'` of two
/// rank-four conic bundles over the same rank-three base.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FibreSquareRow {
    pub y_id: String,
    pub yp_id: String,
    pub z_id: String,
    pub deg_x: i64,
}

/// Pair the rank-four transforms over `F1` whose base curves can be made
/// disjoint, one over the `(-1)`-curve and one over a pulled-back curve.
pub fn enumerate_rho5(cap: i64) -> Result<Vec<FibreSquareRow>> {
    let atlas = Atlas::get();
    let f1_rows = enumerate_f1_rho4(cap)?;

    // collect blowdown edges (x, z, curve on F1, -K_Z . C) from both sides
    // of every row
    #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
    struct Edge {
        x: String,
        z: String,
        curve: SurfaceClass,
        kc: i64,
        pa: i64,
    }
    let mut edges = BTreeSet::new();
    for row in &f1_rows {
        let x = match row.x_candidates.as_slice() {
            [x] => x.clone(),
            _ => continue,
        };
        edges.insert(Edge {
            x: x.clone(),
            z: row.y_id.clone(),
            curve: row.curve,
            kc: row.k_yb,
            pa: row.pa,
        });
        if let Target::Id(yp) = &row.yp {
            edges.insert(Edge {
                x,
                z: yp.clone(),
                curve: row.curve,
                kc: row.k_ypbp,
                pa: row.pa,
            });
        }
    }
    let edges: Vec<Edge> = edges.into_iter().collect();

    // a second blowup is only Fano when the intermediate stage has no
    // conic bundle over P1 x P1 with ample discriminant
    let tame = |id: &str| -> bool {
        let r = atlas.lookup(id).expect("rank-four id");
        !r.conic_bundles.iter().any(|cb| {
            cb.base == Base::P1xP1
                && matches!(&cb.delta,
                    crate::atlas::Delta::Class(c) if c.coords().iter().all(|&x| x > 0))
        })
    };
    let f1_dot = |a: &SurfaceClass, b: &SurfaceClass| -> i64 {
        let (x, y) = (a.coords(), b.coords());
        x[0] * y[0] - x[1] * y[1]
    };

    let mut out = BTreeSet::new();
    for (i, e1) in edges.iter().enumerate() {
        for e2 in &edges[i..] {
            if e1.x == e2.x || e1.z != e2.z {
                continue;
            }
            if e1.curve == e2.curve || f1_dot(&e1.curve, &e2.curve) != 0 {
                continue;
            }
            if !tame(&e1.x) || !tame(&e2.x) {
                continue;
            }
            let deg1 = atlas.lookup(&e1.x).expect("id").degree;
            let deg2 = atlas.lookup(&e2.x).expect("id").degree;
            let from_1 = blowup::blowup_invariants(deg1, e2.kc, e2.pa).deg_x;
            let from_2 = blowup::blowup_invariants(deg2, e1.kc, e1.pa).deg_x;
            assert_eq!(from_1, from_2, "fibre square degree must match");
            let (a, b) = if id_key(&e1.x) <= id_key(&e2.x) {
                (e1.x.clone(), e2.x.clone())
            } else {
                (e2.x.clone(), e1.x.clone())
            };
            out.insert(FibreSquareRow {
                y_id: a,
                yp_id: b,
                z_id: e1.z.clone(),
                deg_x: from_1,
            });
        }
    }
    let mut rows: Vec<_> = out.into_iter().collect();
    rows.sort_by_key(|r| (r.deg_x, id_key(&r.y_id), id_key(&r.yp_id)));
    Ok(rows)
}

// ---------------------------------------------------------------------
// stage: disjoint two-curve blowups of P3 and Q
// ---------------------------------------------------------------------

/// A rank-three family built by blowing up two disjoint curves on a
/// rank-one threefold, with the bidegree of the resulting discriminant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DisjointPairRow {
    pub v: String,
    pub y1_id: String,
    pub y2_id: String,
    pub x_id: String,
    pub deg_x: i64,
    pub delta: SurfaceClass,
}

/// Enumerate the unordered pairs of intermediate blowups of `V` whose
/// union of centres still has Fano blowup.
pub fn enumerate_disjoint_pairs(v: &str) -> Result<Vec<DisjointPairRow>> {
    if v != "P3" && v != "Q" {
        return Err(Error::UnknownSeed(v.to_string()));
    }
    let atlas = Atlas::get();
    let deg_v = seed_space(v)?.anticanonical_degree();
    let r_v = crate::numring::seed_index(v)?;

    // candidates: rank-two blowups of V whose second ray is a fibration
    let mut cands: Vec<_> = atlas
        .list(|r| {
            r.rho == 2
                && r.blowdowns.iter().any(|e| e.target == v)
                && r.rays
                    .iter()
                    .any(|ray| matches!(ray.ray_type, RayType::D1 | RayType::D2 | RayType::D3))
        })
        .into_iter()
        .collect();
    cands.sort_by_key(|r| std::cmp::Reverse(r.degree));

    let mu = |r: &crate::atlas::FanoRecord| -> i64 {
        r.rays
            .iter()
            .filter(|ray| matches!(ray.ray_type, RayType::D1 | RayType::D2 | RayType::D3))
            .map(|ray| ray.ray_type.length())
            .next()
            .unwrap_or(1)
    };

    let mut out = Vec::new();
    for (i, y1) in cands.iter().enumerate() {
        for y2 in &cands[i..] {
            let deg_x = deg_v - (deg_v - y1.degree) - (deg_v - y2.degree);
            if deg_x <= 0 {
                continue;
            }
            if !blowup::mu_sum_filter(mu(y1), mu(y2), r_v) {
                continue;
            }
            let hints = IdentifyHints {
                cb_base: Some(Base::P1xP1),
                ..Default::default()
            };
            let xs = atlas.identify(3, deg_x, &hints);
            let [x] = xs.as_slice() else {
                return Err(Error::BadAtlas(format!(
                    "disjoint pair ({}, {}) matches {} families",
                    y1.id,
                    y2.id,
                    xs.len()
                )));
            };
            // read the stored (-K_X)^2 . f^* D values off the product
            // bundle and convert them to a discriminant bidegree
            let cb = x
                .conic_bundles
                .iter()
                .find(|cb| cb.base == Base::P1xP1 && cb.k2_fd.is_some())
                .ok_or_else(|| {
                    Error::BadAtlas(format!("{} lacks stored fibration pairings", x.id))
                })?;
            let k2 = cb.k2_fd.as_ref().unwrap();
            let d2 = crate::transform::discriminant_degree(k2[0], -2);
            let d1 = crate::transform::discriminant_degree(k2[1], -2);
            out.push(DisjointPairRow {
                v: v.to_string(),
                y1_id: y1.id.clone(),
                y2_id: y2.id.clone(),
                x_id: x.id.clone(),
                deg_x,
                delta: SurfaceClass::p1xp1(d1, d2),
            });
        }
    }
    out.sort_by_key(|r| std::cmp::Reverse(r.deg_x));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p2_row_count_and_spot_rows() {
        let rows = enumerate_p2(DEFAULT_CAP).unwrap();
        assert_eq!(rows.len(), 21);
        // degree-34 row out of the degree-38 source
        let r = rows
            .iter()
            .find(|r| r.deg_x == 34 && r.y_id == "2-27")
            .unwrap();
        assert_eq!(r.yp, Target::Id("2-32".into()));
        assert_eq!(
            (r.curve, r.pa, r.k_yb, r.k_ypbp),
            (SurfaceClass::p2(1), 0, 1, 6)
        );
        assert_eq!(r.x_candidates, vec!["3-16".to_string()]);
    }

    #[test]
    fn p2_self_transform_of_w_forces_conic() {
        // the balanced family over the degree-48 source collapses to d = 2
        let rows = enumerate_p2(DEFAULT_CAP).unwrap();
        let selfs: Vec<_> = rows
            .iter()
            .filter(|r| r.y_id == "2-32" && r.yp == Target::Id("2-32".into()))
            .collect();
        assert_eq!(selfs.len(), 1);
        assert_eq!(selfs[0].curve, SurfaceClass::p2(2));
        assert_eq!(selfs[0].deg_x, 30);
    }

    #[test]
    fn p1p1_row_count() {
        let rows = enumerate_p1p1_rho4(DEFAULT_CAP).unwrap();
        assert_eq!(rows.len(), 14);
        let r42 = rows.iter().find(|r| r.deg_x == 28).unwrap();
        assert_eq!(r42.y_id, "3-31");
        assert_eq!(r42.yp, Target::Id("3-31".into()));
        assert_eq!(
            (r42.curve, r42.pa, r42.k_yb, r42.k_ypbp),
            (SurfaceClass::p1xp1(2, 2), 1, 12, 12)
        );
    }

    #[test]
    fn f1_rho3_rows() {
        let rows = enumerate_f1_rho3().unwrap();
        let pairs: Vec<_> = rows
            .iter()
            .map(|r| (r.x_id.as_str(), r.source_id.as_str(), r.delta_deg))
            .collect();
        assert_eq!(
            pairs,
            vec![
                ("3-4", "2-18", 4),
                ("3-8", "2-24", 3),
                ("3-24", "2-32", 0),
                ("3-28", "2-34", 0),
                ("3-30", "2-35", 0),
            ]
        );
    }

    #[test]
    fn f1_rho4_rows() {
        let rows = enumerate_f1_rho4(DEFAULT_CAP).unwrap();
        assert_eq!(rows.len(), 7);
        let r = rows.iter().find(|r| r.deg_x == 40).unwrap();
        assert_eq!((r.y_id.as_str(), r.k_yb, r.k_ypbp), ("3-28", 3, 4));
        assert_eq!(r.yp, Target::Id("3-30".into()));
        assert_eq!(r.curve, SurfaceClass::f1(1, 0));
    }

    #[test]
    fn fibre_blowups() {
        let rows = enumerate_fibre_blowups_rho4(DEFAULT_CAP).unwrap();
        assert_eq!(rows.len(), 7);
        let r = rows
            .iter()
            .find(|r| r.x_id == "4-10" && r.base == Base::P1xP1)
            .unwrap();
        assert_eq!((r.source_id.as_str(), r.deg_x, r.deg_source), ("3-27", 42, 48));
    }

    #[test]
    fn rho5_triples() {
        let rows = enumerate_rho5(DEFAULT_CAP).unwrap();
        let triples: Vec<_> = rows
            .iter()
            .map(|r| (r.y_id.as_str(), r.yp_id.as_str(), r.z_id.as_str(), r.deg_x))
            .collect();
        assert_eq!(
            triples,
            vec![
                ("4-4", "4-12", "3-30", 28),
                ("4-9", "4-11", "3-28", 36),
                ("4-9", "4-12", "3-30", 36),
            ]
        );
    }

    #[test]
    fn disjoint_pairs() {
        let p3 = enumerate_disjoint_pairs("P3").unwrap();
        let rows: Vec<_> = p3
            .iter()
            .map(|r| (r.y1_id.as_str(), r.y2_id.as_str(), r.deg_x, r.delta))
            .collect();
        assert_eq!(
            rows,
            vec![
                ("2-33", "2-33", 44, SurfaceClass::p1xp1(0, 0)),
                ("2-33", "2-25", 22, SurfaceClass::p1xp1(2, 3)),
            ]
        );
        let q = enumerate_disjoint_pairs("Q").unwrap();
        assert_eq!(q.len(), 1);
        assert_eq!(
            (q[0].y1_id.as_str(), q[0].y2_id.as_str(), q[0].deg_x, q[0].delta),
            ("2-29", "2-29", 26, SurfaceClass::p1xp1(2, 2))
        );
    }

    #[test]
    fn cap_doubling_changes_nothing() {
        assert_eq!(
            enumerate_p2(DEFAULT_CAP).unwrap(),
            enumerate_p2(2 * DEFAULT_CAP).unwrap()
        );
        assert_eq!(
            enumerate_p1p1_rho4(DEFAULT_CAP).unwrap(),
            enumerate_p1p1_rho4(2 * DEFAULT_CAP).unwrap()
        );
        assert_eq!(
            enumerate_f1_rho4(DEFAULT_CAP).unwrap(),
            enumerate_f1_rho4(2 * DEFAULT_CAP).unwrap()
        );
    }
}
