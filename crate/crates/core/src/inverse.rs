//! The family `γ_c(i) = (1 - c) γ(i) + c γ(i + n)` of half-area polygons
//! sharing `E` and `M` with `γ`.

use rayon::prelude::*;
use serde::Serialize;

use crate::envelope::{discrete_envelope, hyperbolic_arc, midpoints_envelope, HyperbolicArc};
use crate::error::{Error, Result};
use crate::geom::{bracket, line_intersection, Line, Point};
use crate::halfarea::{edge_table, HalfAreaPolygon};
use crate::polygon::Polygon;

/// Coarse scan step of [`compute_valid_interval`].
pub const SCAN_STEP: f64 = 1e-4;
/// Final bisection width of [`compute_valid_interval`].
pub const BISECT_WIDTH: f64 = 1e-8;
/// Relative tolerance of the E/M invariance check (times the diameter).
pub const INVARIANCE_REL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct InverseFamily {
    pub source: HalfAreaPolygon,
    /// Open interval of `c` around 0 on which `γ_c` stays convex.
    pub valid_c_interval: (f64, f64),
}

impl InverseFamily {
    pub fn new(source: HalfAreaPolygon) -> Self {
        let valid_c_interval = compute_valid_interval(&source);
        InverseFamily {
            source,
            valid_c_interval,
        }
    }

    pub fn contains(&self, c: f64) -> bool {
        let (lo, hi) = self.valid_c_interval;
        lo < c && c < hi
    }
}

/// Raw vertices `(1 - c_i) γ(i) + c_i γ(i + n)` for per-vertex `c_i`.
pub fn involute(source: &HalfAreaPolygon, c: &[f64]) -> Vec<Point> {
    let m = 2 * source.n();
    assert_eq!(c.len(), m, "one parameter per vertex");
    (0..m)
        .map(|i| source.vertex(i).lerp(source.vertex(i + source.n()), c[i]))
        .collect()
}

fn constant_involute(source: &HalfAreaPolygon, c: f64) -> Vec<Point> {
    involute(source, &vec![c; 2 * source.n()])
}

/// `c` of the single member equal to `γ_{c1}` followed by the `c2` map.
pub fn compose_parameters(c1: f64, c2: f64) -> f64 {
    c1 + c2 - 2.0 * c1 * c2
}

pub fn family_member(f: &InverseFamily, c: f64) -> Result<HalfAreaPolygon> {
    if !f.contains(c) {
        let (lo, hi) = f.valid_c_interval;
        return Err(Error::OutsideValidInterval { c, lo, hi });
    }
    let h = HalfAreaPolygon::from_vertices(constant_involute(&f.source, c))
        .map_err(|e| Error::ValidationFailed(format!("γ_c for c = {c}: {e}")))?;
    let r = lemma_residual(&f.source, &h, c);
    let tol = f.source.tolerance().area();
    if r > tol {
        return Err(Error::ValidationFailed(format!(
            "edge identities of γ_c off by {r:.3e} for c = {c}"
        )));
    }
    Ok(h)
}

/// Largest deviation from `v̄ = (1 - 2c) v`, `ā- = (1 - 2c)(a- - c a)` and
/// `ā+(i) = ā-(i + n)`. The vector identity is measured in area units
/// (times the diameter).
pub fn lemma_residual(source: &HalfAreaPolygon, member: &HalfAreaPolygon, c: f64) -> f64 {
    let n = source.n();
    let d = source.polygon().diameter();
    let k = 1.0 - 2.0 * c;
    (0..2 * n)
        .map(|i| {
            let (q, qb) = (source.edge(i), member.edge(i));
            let dv = (qb.v - q.v * k).length() * d;
            let dam = (qb.a_minus - k * (q.a_minus - c * q.a)).abs();
            let dap = (qb.a_plus - member.edge(i + n).a_minus).abs();
            dv.max(dam).max(dap)
        })
        .fold(0.0, f64::max)
}

/// Smallest turn (cross product of consecutive edges) of `γ_c`.
fn min_cross(source: &HalfAreaPolygon, c: f64) -> f64 {
    let v = constant_involute(source, c);
    let m = v.len();
    (0..m)
        .map(|i| bracket(v[i] - v[(i + m - 1) % m], v[(i + 1) % m] - v[i]))
        .fold(f64::INFINITY, f64::min)
}

/// The open interval around 0, inside `(-1/2, 1/2)`, on which every turn of
/// `γ_c` stays above `-tolerance`. Each end is the bisected first failing
/// `c`, or `±1/2` if none fails.
pub fn compute_valid_interval(source: &HalfAreaPolygon) -> (f64, f64) {
    let tol = source.tolerance().area();
    let good = |c: f64| min_cross(source, c) >= -tol;
    let edge = |dir: f64| -> f64 {
        let steps = (0.5 / SCAN_STEP).round() as usize;
        let mut last_good = 0.0;
        for s in 1..steps {
            let c = dir * s as f64 * SCAN_STEP;
            if !good(c) {
                let (mut g, mut b) = (last_good, c);
                while (b - g).abs() > BISECT_WIDTH {
                    let mid = 0.5 * (g + b);
                    if good(mid) {
                        g = mid;
                    } else {
                        b = mid;
                    }
                }
                return b;
            }
            last_good = c;
        }
        dir * 0.5
    };
    (edge(-1.0), edge(1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmSample {
    pub c: f64,
    /// `max_i |M̄(i) - M(i)|`.
    pub max_m: f64,
    /// `max_i |Ē(i) - E(i)|`.
    pub max_e: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmReport {
    pub threshold: f64,
    pub samples: Vec<EmSample>,
}

impl EmReport {
    pub fn all_pass(&self) -> bool {
        self.samples.iter().all(|s| s.pass)
    }
}

fn max_distance(a: &[Point], b: &[Point]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| p.distance(*q))
        .fold(0.0, f64::max)
}

/// Compares `M` and `E` of `γ_c` with those of the source for each `c`.
pub fn verify_em_invariance(f: &InverseFamily, samples: &[f64]) -> Result<EmReport> {
    let threshold = INVARIANCE_REL * f.source.polygon().diameter();
    let m0 = midpoints_envelope(&f.source);
    let e0 = discrete_envelope(&f.source);
    let samples = samples
        .par_iter()
        .map(|&c| {
            let h = family_member(f, c)?;
            let max_m = max_distance(&midpoints_envelope(&h), &m0);
            let max_e = max_distance(&discrete_envelope(&h), &e0);
            Ok(EmSample {
                c,
                max_m,
                max_e,
                pass: max_m < threshold && max_e < threshold,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EmReport { threshold, samples })
}

/// `(max |M̄ - M|, max |Ē - E|)` for an arbitrary even polygon against a
/// half-area source, with `Ē(i) = γ̄(i) + ā-(i)/ā(i) v̄(i)` taken from the
/// closed form even when the polygon is not half-area.
pub fn em_discrepancy(source: &HalfAreaPolygon, vertices: Vec<Point>) -> Result<(f64, f64)> {
    let n = source.n();
    if vertices.len() != 2 * n {
        return Err(Error::DegenerateInput(format!(
            "expected {} vertices, got {}",
            2 * n,
            vertices.len()
        )));
    }
    let p = Polygon::new(vertices)?;
    let table = edge_table(&p)?;
    let mids: Vec<Point> = (0..n)
        .map(|i| p.vertex(i).midpoint(p.vertex(i + n)))
        .collect();
    let es: Vec<Point> = (0..n)
        .map(|i| p.vertex(i) + table[i].v * (table[i].a_minus / table[i].a))
        .collect();
    Ok((
        max_distance(&mids, &midpoints_envelope(source)),
        max_distance(&es, &discrete_envelope(source)),
    ))
}

/// Negative control: `c` is constant except at vertices `j` and `j + n`,
/// where it is `c + bump`. Moving both ends of one principal chord keeps
/// `M` unchanged, so any failure comes from `E`.
pub fn perturbed_involute(source: &HalfAreaPolygon, c: f64, j: usize, bump: f64) -> Vec<Point> {
    let n = source.n();
    let mut cs = vec![c; 2 * n];
    cs[j % n] += bump;
    cs[j % n + n] += bump;
    involute(source, &cs)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HEdge {
    pub edge: usize,
    /// Distance between the asymptote centers (support-line intersections)
    /// of `γ` and `γ_c`.
    pub center_shift: f64,
    pub k_source: f64,
    /// Frame product of `γ_c`'s arc start in the source's frame.
    pub k_member: f64,
    /// `max(center_shift / diameter, |k_member - k_source| / k_source)`.
    pub discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HReport {
    pub c: f64,
    pub edges: Vec<HEdge>,
    /// Sides with (numerically) parallel opposite sides, left out.
    pub skipped: Vec<usize>,
}

impl HReport {
    pub fn max_discrepancy(&self) -> f64 {
        self.edges.iter().map(|e| e.discrepancy).fold(0.0, f64::max)
    }
}

fn asymptote_center(h: &HalfAreaPolygon, i: usize) -> Result<Point> {
    let n = h.n();
    line_intersection(
        &Line::through(h.vertex(i), h.vertex(i + 1))?,
        &Line::through(h.vertex(i + n), h.vertex(i + n + 1))?,
    )
}

/// Measures how far `H(γ_c)` moves from `H(γ)` on each side with
/// non-parallel opposite sides.
pub fn verify_h_changes(f: &InverseFamily, c: f64) -> Result<HReport> {
    let member = if c == 0.0 {
        f.source.clone()
    } else {
        family_member(f, c)?
    };
    let src = &f.source;
    let d = src.polygon().diameter();
    let mut edges = Vec::new();
    let mut skipped = Vec::new();
    for i in 0..src.n() {
        let (arc, arc_c) = (hyperbolic_arc(src, i)?, hyperbolic_arc(&member, i)?);
        let (HyperbolicArc::Hyperbola { k, .. }, HyperbolicArc::Hyperbola { start, .. }) =
            (&arc, &arc_c)
        else {
            skipped.push(i);
            continue;
        };
        let center_shift = asymptote_center(src, i)?.distance(asymptote_center(&member, i)?);
        let k_member = arc.product(*start).expect("hyperbola");
        edges.push(HEdge {
            edge: i,
            center_shift,
            k_source: *k,
            k_member,
            discrepancy: (center_shift / d).max((k_member - k).abs() / k),
        });
    }
    if edges.is_empty() {
        return Err(Error::AllEdgesParallel);
    }
    Ok(HReport { c, edges, skipped })
}
