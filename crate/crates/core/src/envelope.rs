//! The three envelope objects of a half-area polygon and their cusps.
//!
//! * `M(i)`: midpoints of the principal chords, `i in 0..n`.
//! * `E(i)`: intersections of consecutive principal lines `l(i) ∩ l(i + 1)`.
//! * `H`: the true envelope of all bisecting lines, one hyperbolic arc per
//!   pair of opposite sides, asymptotic to their support lines.
//!
//! A vertex `i` is a cusp when `δ(i - 1)` and `δ(i)` have strictly opposite
//! signs.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{
    asymptote_frame, bracket, diameter, line_intersection, AffineMap, Line, Point, Vec2,
};
use crate::halfarea::HalfAreaPolygon;
use crate::polygon::{bisecting_chord_from, default_area_tol, BoundaryPoint, EdgeIndex};

/// Interior samples per arc used by the arc-separation cusp test.
pub const SEPARATION_SAMPLES: usize = 16;

/// Default polyline resolution of a rendered arc.
pub const ARC_SAMPLES: usize = 64;

/// Relative disagreement of the two endpoint products that makes an arc
/// inconsistent.
const ARC_CONSISTENCY_REL: f64 = 1e-6;

/// Relative tolerance for `λ` alternation and for `λ(i-1) λ(i) = 1`.
pub const LAMBDA_REL: f64 = 3.162_277_660_168_379_5e-5; // sqrt(1e-9)

pub fn midpoints_envelope(h: &HalfAreaPolygon) -> Vec<Point> {
    let n = h.n();
    (0..n)
        .map(|i| h.vertex(i).midpoint(h.vertex(i + n)))
        .collect()
}

/// `E(i) = γ(i) + a-(i) / a(i) * v(i)` for each side `i in 0..n`.
pub fn discrete_envelope(h: &HalfAreaPolygon) -> Vec<Point> {
    (0..h.n())
        .map(|i| {
            let q = h.edge(i);
            h.vertex(i) + q.v * (q.a_minus / q.a)
        })
        .collect()
}

/// `l(i) ∩ l(i + 1)` computed as a line intersection; `None` when parallel.
pub fn discrete_envelope_by_intersection(h: &HalfAreaPolygon) -> Vec<Option<Point>> {
    (0..h.n())
        .map(|i| line_intersection(&h.principal_line(i), &h.principal_line(i + 1)).ok())
        .collect()
}

/// One piece of the hyperbolic envelope, between `M(i)` and `M(i + 1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HyperbolicArc {
    /// Arc of `u * w = k` in the frame sending the two side support lines to
    /// the axes (unit-determinant scaling, endpoints in the open first
    /// quadrant).
    Hyperbola {
        frame: AffineMap,
        #[serde(skip)]
        inverse: AffineMap,
        k: f64,
        start: Point,
        end: Point,
    },
    /// Opposite sides are parallel: every bisecting chord from this side pair
    /// passes through the common midpoint, so the arc is the segment
    /// `M(i) M(i + 1)` (a single point).
    Segment { start: Point, end: Point },
}

impl HyperbolicArc {
    pub fn start(&self) -> Point {
        match self {
            HyperbolicArc::Hyperbola { start, .. } | HyperbolicArc::Segment { start, .. } => *start,
        }
    }

    pub fn end(&self) -> Point {
        match self {
            HyperbolicArc::Hyperbola { end, .. } | HyperbolicArc::Segment { end, .. } => *end,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, HyperbolicArc::Segment { .. })
    }

    /// The point at parameter `t in [0, 1]`; logarithmic in `u` for
    /// hyperbolas, linear for segments.
    pub fn point_at(&self, t: f64) -> Point {
        match self {
            HyperbolicArc::Hyperbola {
                frame,
                inverse,
                k,
                start,
                end,
            } => {
                let u0 = frame.apply(*start).x;
                let u1 = frame.apply(*end).x;
                let u = u0.powf(1.0 - t) * u1.powf(t);
                inverse.apply(Point::new(u, k / u))
            }
            HyperbolicArc::Segment { start, end } => start.lerp(*end, t),
        }
    }

    /// `count >= 2` points from start to end, endpoints exact.
    pub fn sample(&self, count: usize) -> Vec<Point> {
        let count = count.max(2);
        let last = (count - 1) as f64;
        (0..count)
            .map(|j| match j {
                0 => self.start(),
                j if j == count - 1 => self.end(),
                j => self.point_at(j as f64 / last),
            })
            .collect()
    }

    /// `count` strictly interior points.
    pub fn interior_samples(&self, count: usize) -> Vec<Point> {
        let denom = (count + 1) as f64;
        (1..=count)
            .map(|j| self.point_at(j as f64 / denom))
            .collect()
    }

    /// Product `u * w` of `x` in the arc frame (`None` for segments).
    pub fn product(&self, x: Point) -> Option<f64> {
        match self {
            HyperbolicArc::Hyperbola { frame, .. } => {
                let p = frame.apply(x);
                Some(p.x * p.y)
            }
            HyperbolicArc::Segment { .. } => None,
        }
    }

    pub fn k(&self) -> Option<f64> {
        match self {
            HyperbolicArc::Hyperbola { k, .. } => Some(*k),
            HyperbolicArc::Segment { .. } => None,
        }
    }
}

/// Unit-determinant frame sending the support lines of sides `i` and
/// `i + n` to the axes, oriented so that `anchor` has positive coordinates.
pub fn side_pair_frame(h: &HalfAreaPolygon, i: usize, anchor: Point) -> Result<AffineMap> {
    let n = h.n();
    let d1 = h
        .polygon()
        .edge(i)
        .normalized()
        .ok_or(Error::ParallelLines)?;
    let d2 = h
        .polygon()
        .edge(i + n)
        .normalized()
        .ok_or(Error::ParallelLines)?;
    let det = bracket(d1, d2).abs();
    if det <= crate::geom::PARALLEL_EPS {
        return Err(Error::ParallelLines);
    }
    let scale = det.sqrt().recip();
    let (mut d1, mut d2) = (d1 * scale, d2 * scale);
    let l = |base: Point, dir: Vec2| Line { base, dir };
    let frame = asymptote_frame(&l(h.vertex(i), d1), &l(h.vertex(i + n), d2))?;
    let p = frame.apply(anchor);
    if p.x < 0.0 {
        d1 = -d1;
    }
    if p.y < 0.0 {
        d2 = -d2;
    }
    asymptote_frame(&l(h.vertex(i), d1), &l(h.vertex(i + n), d2))
}

/// The arc of `H` for side `i` (paired with side `i + n`).
pub fn hyperbolic_arc(h: &HalfAreaPolygon, i: usize) -> Result<HyperbolicArc> {
    let n = h.n();
    let start = h.vertex(i).midpoint(h.vertex(i + n));
    let end = h.vertex(i + 1).midpoint(h.vertex(i + 1 + n));
    if h.edge(i).delta.abs() <= h.tolerance().area() {
        return Ok(HyperbolicArc::Segment { start, end });
    }
    let frame = side_pair_frame(h, i, start)?;
    let p0 = frame.apply(start);
    let p1 = frame.apply(end);
    let (k0, k1) = (p0.x * p0.y, p1.x * p1.y);
    if !(k0 > 0.0) || (k0 - k1).abs() > ARC_CONSISTENCY_REL * k0 || p1.x <= 0.0 {
        return Err(Error::InconsistentArc {
            edge: i % (2 * n),
            k0,
            k1,
        });
    }
    Ok(HyperbolicArc::Hyperbola {
        inverse: frame.inverse()?,
        frame,
        k: k0,
        start,
        end,
    })
}

pub fn hyperbolic_envelope(h: &HalfAreaPolygon) -> Result<Vec<HyperbolicArc>> {
    (0..h.n()).map(|i| hyperbolic_arc(h, i)).collect()
}

/// Brute-force check of one arc: bisecting chords started at `samples`
/// interior points of side `i` must end on side `i + n`, and their midpoints
/// must lie on the arc.
///
/// Returns, per chord, `|u w - k| / k` for hyperbolas or
/// `|midpoint - M(i)| / diameter` for segments.
pub fn arc_oracle(h: &HalfAreaPolygon, i: usize, samples: usize) -> Result<Vec<f64>> {
    let n = h.n();
    let m = 2 * n;
    let arc = hyperbolic_arc(h, i)?;
    let poly = h.polygon();
    let tol = default_area_tol(poly);
    let far = (i + n) % m;
    (1..=samples)
        .into_par_iter()
        .map(|j| {
            let t = j as f64 / (samples + 1) as f64;
            let b = BoundaryPoint {
                edge: EdgeIndex(i % m),
                t,
            };
            let q = bisecting_chord_from(poly, b, tol)?;
            let on_far = q.edge.0 == far || (q.edge.0 == (far + 1) % m && q.t == 0.0);
            if !on_far {
                return Err(Error::ValidationFailed(format!(
                    "chord from side {i} ended on side {} instead of {far}",
                    q.edge.0
                )));
            }
            let mid = poly
                .boundary_point_coords(b)
                .midpoint(poly.boundary_point_coords(q));
            Ok(match &arc {
                HyperbolicArc::Hyperbola { k, .. } => {
                    (arc.product(mid).expect("hyperbola") - k).abs() / k
                }
                HyperbolicArc::Segment { start, .. } => mid.distance(*start) / poly.diameter(),
            })
        })
        .collect()
}

/// Cusp flags and counts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CuspReport {
    /// One flag per vertex, `2n` entries; `flags[i] == flags[i + n]`.
    pub flags: Vec<bool>,
    /// Flagged vertices among `0..n`.
    pub count: usize,
    pub odd: bool,
    /// Vertices in `0..n` where an adjacent `|δ|` is within tolerance.
    pub degenerate: Vec<usize>,
}

pub fn detect_cusps(h: &HalfAreaPolygon) -> CuspReport {
    let m = 2 * h.n();
    let thr = h.tolerance().area();
    let delta = |i: usize| h.edge(i).delta;
    let flags: Vec<bool> = (0..m)
        .map(|i| delta(i + m - 1) * delta(i) < -thr * thr)
        .collect();
    let degenerate = (0..h.n())
        .filter(|&i| delta(i + m - 1).abs().min(delta(i).abs()) <= thr)
        .collect();
    let count = flags[..h.n()].iter().filter(|f| **f).count();
    CuspReport {
        flags,
        count,
        odd: count % 2 == 1,
        degenerate,
    }
}

/// The four cusp criteria evaluated independently at one vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CuspCriteria {
    pub vertex: usize,
    /// `δ(i - 1) δ(i) < 0`.
    pub delta_sign_change: bool,
    /// `M(i)` lies outside the segment `E(i - 1) E(i)`.
    pub midpoint_outside_e: bool,
    /// `l(i)` separates `M(i - 1)` from `M(i + 1)`.
    pub m_cusp: bool,
    /// `l(i)` separates the interiors of the arcs meeting at `M(i)`.
    pub h_cusp: bool,
}

impl CuspCriteria {
    pub fn agree(&self) -> bool {
        let v = self.delta_sign_change;
        self.midpoint_outside_e == v && self.m_cusp == v && self.h_cusp == v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CuspEquivalenceReport {
    pub vertices: Vec<CuspCriteria>,
    /// Degenerate vertices that were not evaluated.
    pub skipped: Vec<usize>,
}

impl CuspEquivalenceReport {
    pub fn all_agree(&self) -> bool {
        self.vertices.iter().all(CuspCriteria::agree)
    }
}

/// Evaluates the four criteria at every non-degenerate vertex in `0..n`.
pub fn cusp_criteria(h: &HalfAreaPolygon) -> Result<CuspEquivalenceReport> {
    let n = h.n();
    let mids = midpoints_envelope(h);
    let es = discrete_envelope(h);
    let arcs = hyperbolic_envelope(h)?;
    let cusps = detect_cusps(h);
    let mut vertices = Vec::with_capacity(n);
    for i in 0..n {
        if cusps.degenerate.contains(&i) {
            continue;
        }
        let line = h.principal_line(i);
        let v = line.dir;
        let along = |x: Point| (x - line.base).dot(v) / v.dot(v);

        let m_here = mids[i];
        let e_prev = es[(i + n - 1) % n];
        let e_next = es[i];
        let s_m = along(m_here);
        let midpoint_outside_e = (s_m - along(e_prev)) * (s_m - along(e_next)) > 0.0;

        let m_prev = mids[(i + n - 1) % n];
        let m_next = mids[(i + 1) % n];
        let m_cusp = line.side(m_prev) * line.side(m_next) < 0.0;

        let arc_prev = &arcs[(i + n - 1) % n];
        let arc_next = &arcs[i];
        let side_of = |pts: Vec<Point>| -> i8 {
            let signs: Vec<f64> = pts.iter().map(|p| line.side(*p)).collect();
            if signs.iter().all(|s| *s > 0.0) {
                1
            } else if signs.iter().all(|s| *s < 0.0) {
                -1
            } else {
                0
            }
        };
        let sp = side_of(arc_prev.interior_samples(SEPARATION_SAMPLES));
        let sn = side_of(arc_next.interior_samples(SEPARATION_SAMPLES));
        let h_cusp = sp != 0 && sn != 0 && sp != sn;

        vertices.push(CuspCriteria {
            vertex: i,
            delta_sign_change: cusps.flags[i],
            midpoint_outside_e,
            m_cusp,
            h_cusp,
        });
    }
    Ok(CuspEquivalenceReport {
        vertices,
        skipped: cusps.degenerate,
    })
}

/// Like [`cusp_criteria`] but fails on the first disagreeing vertex.
pub fn cusp_equivalence_report(h: &HalfAreaPolygon) -> Result<CuspEquivalenceReport> {
    let report = cusp_criteria(h)?;
    if let Some(bad) = report.vertices.iter().find(|c| !c.agree()) {
        return Err(Error::CriteriaDisagree(bad.vertex));
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum Symmetry {
    /// Every principal chord has midpoint `center`.
    Symmetric {
        center: Point,
    },
    /// `λ` alternates `c, 1/c` starting at side 0; `E` is a single point.
    SkewSymmetric {
        c: f64,
    },
    Generic,
}

/// True when `λ(i) = c` for even `i` and `1/c` for odd `i`, `c = λ(0)`.
pub fn lambda_alternates(h: &HalfAreaPolygon, rel: f64) -> bool {
    let c = h.edge(0).lambda;
    h.edges().iter().enumerate().all(|(i, q)| {
        let expected = if i % 2 == 0 { c } else { c.recip() };
        (q.lambda / expected - 1.0).abs() <= rel
    })
}

pub fn classify_symmetry(h: &HalfAreaPolygon) -> Result<Symmetry> {
    let len_tol = h.tolerance().length();
    let mids = midpoints_envelope(h);
    if diameter(&mids) <= len_tol {
        let n = mids.len() as f64;
        let sum = mids.iter().fold(Vec2::ZERO, |acc, p| acc + p.to_vec2());
        return Ok(Symmetry::Symmetric {
            center: (sum * n.recip()).to_point(),
        });
    }
    let lambda_ok = lambda_alternates(h, LAMBDA_REL);
    let e_point = diameter(&discrete_envelope(h)) <= len_tol;
    match (lambda_ok, e_point) {
        (true, true) => Ok(Symmetry::SkewSymmetric {
            c: h.edge(0).lambda,
        }),
        (false, false) => Ok(Symmetry::Generic),
        _ => Err(Error::ClassificationConflict),
    }
}

/// `M`, `E`, `H` and the cusp flags of a half-area polygon.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvelopeSet {
    pub midpoints: Vec<Point>,
    pub discrete: Vec<Point>,
    pub arcs: Vec<HyperbolicArc>,
    pub cusp_flags: Vec<bool>,
}

impl EnvelopeSet {
    pub fn compute(h: &HalfAreaPolygon) -> Result<Self> {
        Ok(EnvelopeSet {
            midpoints: midpoints_envelope(h),
            discrete: discrete_envelope(h),
            arcs: hyperbolic_envelope(h)?,
            cusp_flags: detect_cusps(h).flags,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hexagon() -> HalfAreaPolygon {
        HalfAreaPolygon::from_vertices(vec![
            Point::new(0.0, 0.0),
            Point::new(0.5, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.5, 0.5),
            Point::new(0.0, 1.0),
            Point::new(0.0, 0.5),
        ])
        .unwrap()
    }

    fn square() -> HalfAreaPolygon {
        HalfAreaPolygon::from_vertices(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap()
    }

    fn near(a: Point, x: f64, y: f64) -> bool {
        a.distance(Point::new(x, y)) < 1e-12
    }

    #[test]
    fn midpoints_of_examples() {
        let m = midpoints_envelope(&square());
        assert!(m.iter().all(|p| near(*p, 0.5, 0.5)));
        let m = midpoints_envelope(&hexagon());
        assert!(near(m[0], 0.25, 0.25));
        assert!(near(m[1], 0.25, 0.5));
        assert!(near(m[2], 0.5, 0.25));
        let h = hexagon();
        for (i, p) in m.iter().enumerate() {
            assert!(h.principal_line(i).distance(*p) < 1e-15);
        }
    }

    #[test]
    fn discrete_envelope_of_examples() {
        for p in discrete_envelope(&hexagon()) {
            assert!(near(p, 1.0 / 3.0, 1.0 / 3.0));
        }
        for p in discrete_envelope(&square()) {
            assert!(near(p, 0.5, 0.5));
        }
        let h = hexagon();
        for (a, b) in discrete_envelope(&h)
            .iter()
            .zip(discrete_envelope_by_intersection(&h))
        {
            assert!(a.distance(b.unwrap()) < 1e-12);
        }
    }

    #[test]
    fn hexagon_arc_constant() {
        let h = hexagon();
        let arcs = hyperbolic_envelope(&h).unwrap();
        assert_eq!(arcs.len(), 3);
        for arc in &arcs {
            let k = arc.k().unwrap();
            assert!((k - 0.125).abs() < 1e-12, "{k}");
            assert!((arc.product(arc.end()).unwrap() - k).abs() < 1e-12);
        }
        // side y = 0 paired with the side on x + y = 1
        assert!(near(arcs[0].start(), 0.25, 0.25));
        assert!(near(arcs[0].end(), 0.25, 0.5));
    }

    #[test]
    fn arc_is_tangent_to_principal_lines_at_ends() {
        let h = hexagon();
        for (i, arc) in hyperbolic_envelope(&h).unwrap().iter().enumerate() {
            let eps = 1e-6;
            let d0 = arc.point_at(eps) - arc.start();
            let d1 = arc.end() - arc.point_at(1.0 - eps);
            let sin0 = bracket(d0, h.v(i)) / (d0.length() * h.v(i).length());
            let sin1 = bracket(d1, h.v(i + 1)) / (d1.length() * h.v(i + 1).length());
            assert!(sin0.abs() < 1e-5 && sin1.abs() < 1e-5);
        }
    }

    #[test]
    fn square_arcs_degenerate_to_center() {
        let arcs = hyperbolic_envelope(&square()).unwrap();
        assert!(arcs.iter().all(HyperbolicArc::is_degenerate));
        for a in arcs {
            assert!(near(a.start(), 0.5, 0.5) && near(a.end(), 0.5, 0.5));
        }
    }

    #[test]
    fn arc_oracle_on_hexagon_and_square() {
        let h = hexagon();
        for i in 0..3 {
            for r in arc_oracle(&h, i, 16).unwrap() {
                assert!(r < 1e-9, "{r}");
            }
        }
        let s = square();
        for i in 0..2 {
            for r in arc_oracle(&s, i, 16).unwrap() {
                assert!(r < 1e-12);
            }
        }
    }

    #[test]
    fn hexagon_cusps() {
        let c = detect_cusps(&hexagon());
        assert!(c.flags.iter().all(|f| *f));
        assert_eq!(c.count, 3);
        assert!(c.odd);
        assert!(c.degenerate.is_empty());
    }

    #[test]
    fn square_cusps_all_degenerate() {
        let c = detect_cusps(&square());
        assert_eq!(c.count, 0);
        assert_eq!(c.degenerate, vec![0, 1]);
        let r = cusp_equivalence_report(&square()).unwrap();
        assert!(r.vertices.is_empty());
        assert_eq!(r.skipped, vec![0, 1]);
    }

    #[test]
    fn hexagon_criteria_all_true() {
        let r = cusp_equivalence_report(&hexagon()).unwrap();
        assert_eq!(r.vertices.len(), 3);
        for c in r.vertices {
            assert!(c.delta_sign_change && c.midpoint_outside_e && c.m_cusp && c.h_cusp);
        }
    }

    #[test]
    fn classification_examples() {
        match classify_symmetry(&square()).unwrap() {
            Symmetry::Symmetric { center } => assert!(near(center, 0.5, 0.5)),
            other => panic!("{other:?}"),
        }
        match classify_symmetry(&hexagon()).unwrap() {
            Symmetry::SkewSymmetric { c } => {
                assert!((c - 0.5).abs() < 1e-12 || (c - 2.0).abs() < 1e-12)
            }
            other => panic!("{other:?}"),
        }
        let h = hexagon();
        let lam: Vec<f64> = h.edges().iter().map(|q| q.lambda).collect();
        for (i, l) in lam.iter().enumerate() {
            let want = if i % 2 == 0 { 0.5 } else { 2.0 };
            assert!((l - want).abs() < 1e-12);
        }
    }

    #[test]
    fn envelope_set_shapes() {
        let env = EnvelopeSet::compute(&hexagon()).unwrap();
        assert_eq!(env.midpoints.len(), 3);
        assert_eq!(env.discrete.len(), 3);
        assert_eq!(env.arcs.len(), 3);
        assert_eq!(env.cusp_flags.len(), 6);
        for (i, arc) in env.arcs.iter().enumerate() {
            assert_eq!(arc.start(), env.midpoints[i]);
            assert_eq!(arc.end(), env.midpoints[(i + 1) % 3]);
        }
    }

    #[test]
    fn arc_sampling_has_exact_endpoints() {
        let arcs = hyperbolic_envelope(&hexagon()).unwrap();
        let s = arcs[1].sample(ARC_SAMPLES);
        assert_eq!(s.len(), ARC_SAMPLES);
        assert_eq!(s[0], arcs[1].start());
        assert_eq!(s[ARC_SAMPLES - 1], arcs[1].end());
        for p in &s {
            assert!((arcs[1].product(*p).unwrap() - 0.125).abs() < 1e-12);
        }
    }
}
