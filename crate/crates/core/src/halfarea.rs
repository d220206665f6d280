//! Half-area polygons and their per-side quantities.
//!
//! For a polygon with `2n` vertices `γ(0..2n)` (indices mod `2n`) and side
//! `i` joining `γ(i)` to `γ(i + 1)`:
//!
//! ```text
//! v(i)  = γ(i + n) - γ(i)
//! a+(i) = [γ'(i), v(i)]        a-(i) = [γ'(i), v(i + 1)]
//! a(i)  = a+(i) + a-(i)        δ(i)  = [γ'(i), γ'(i + n)]
//! λ(i)  = |γ(i+1) γ(i+n)| / |γ(i) γ(i+n+1)|     g(i) = δ(i) / a(i)
//! ```
//!
//! where `γ'(i) = γ(i + 1) - γ(i)`. The polygon is half-area when every
//! principal chord `γ(i) γ(i + n)` bisects its area, which happens exactly
//! when the central diagonals `γ(i) γ(i+n+1)` and `γ(i+1) γ(i+n)` of every
//! side are parallel.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{bracket, line_intersection, Line, Point, Tolerance, Vec2};
use crate::polygon::Polygon;

/// Per-side quantities of an even polygon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeQuantities {
    /// `v(i) = γ(i + n) - γ(i)`.
    pub v: Vec2,
    pub a_plus: f64,
    pub a_minus: f64,
    pub a: f64,
    pub delta: f64,
    pub lambda: f64,
    pub g: f64,
}

/// Per-side quantities for every side of an even polygon (half-area or not).
pub fn edge_table(p: &Polygon) -> Result<Vec<EdgeQuantities>> {
    let m = p.len();
    if !m.is_multiple_of(2) {
        return Err(Error::OddVertexCount(m));
    }
    let n = m / 2;
    Ok((0..m)
        .map(|i| {
            let side = p.edge(i);
            let v0 = p.vertex(i + n) - p.vertex(i);
            let v1 = p.vertex(i + 1 + n) - p.vertex(i + 1);
            let a_plus = bracket(side, v0);
            let a_minus = bracket(side, v1);
            let a = a_plus + a_minus;
            let delta = bracket(side, p.edge(i + n));
            let lambda = p.vertex(i + 1).distance(p.vertex(i + n))
                / p.vertex(i).distance(p.vertex(i + n + 1));
            EdgeQuantities {
                v: v0,
                a_plus,
                a_minus,
                a,
                delta,
                lambda,
                g: delta / a,
            }
        })
        .collect())
}

/// Diagnostic for the parallel-central-diagonal test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HalfAreaReport {
    pub is_half_area: bool,
    /// `[γ(i+n+1) - γ(i), γ(i+n) - γ(i+1)]` per side.
    pub central_brackets: Vec<f64>,
    /// `|central_brackets[i]| / a(i)`.
    pub residuals: Vec<f64>,
    /// Area threshold the raw brackets were compared against.
    pub threshold: f64,
}

impl HalfAreaReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Parallel-central-diagonal test.
///
/// The verdict compares each raw bracket against the area tolerance of the
/// polygon; the normalized residuals are reported alongside.
pub fn is_half_area(p: &Polygon) -> Result<HalfAreaReport> {
    let m = p.len();
    if !m.is_multiple_of(2) {
        return Err(Error::OddVertexCount(m));
    }
    let n = m / 2;
    let table = edge_table(p)?;
    let threshold = p.tolerance().area();
    let central_brackets: Vec<f64> = (0..m)
        .map(|i| {
            let d1 = p.vertex(i + n + 1) - p.vertex(i);
            let d2 = p.vertex(i + n) - p.vertex(i + 1);
            bracket(d1, d2)
        })
        .collect();
    let residuals = central_brackets
        .iter()
        .zip(&table)
        .map(|(b, q)| b.abs() / q.a.abs())
        .collect();
    Ok(HalfAreaReport {
        is_half_area: central_brackets.iter().all(|b| b.abs() <= threshold),
        central_brackets,
        residuals,
        threshold,
    })
}

/// `a+(i) - a-(i + n)` for every side; zero on half-area polygons.
pub fn apm_residuals(p: &Polygon) -> Result<Vec<f64>> {
    let table = edge_table(p)?;
    let m = table.len();
    let n = m / 2;
    Ok((0..m)
        .map(|i| table[i].a_plus - table[(i + n) % m].a_minus)
        .collect())
}

/// Verdict of the shoelace oracle: every principal chord bisects the area.
pub fn chord_oracle_holds(p: &Polygon) -> Result<bool> {
    let threshold = p.tolerance().area();
    Ok(p.principal_chord_residuals()?
        .iter()
        .all(|r| r.abs() <= threshold))
}

/// A convex polygon with `2n` vertices whose principal chords all bisect
/// its area.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfAreaPolygon {
    polygon: Polygon,
    n: usize,
    edges: Vec<EdgeQuantities>,
}

impl HalfAreaPolygon {
    /// Validates `polygon` by both the central-diagonal test and the
    /// shoelace chord oracle.
    pub fn new(polygon: Polygon) -> Result<Self> {
        let m = polygon.len();
        if !m.is_multiple_of(2) {
            return Err(Error::OddVertexCount(m));
        }
        if m < 4 {
            return Err(Error::DegenerateInput(
                "half-area polygon needs n >= 2".into(),
            ));
        }
        let report = is_half_area(&polygon)?;
        if !report.is_half_area {
            return Err(Error::NotHalfArea {
                residual: report.max_residual(),
            });
        }
        if !chord_oracle_holds(&polygon)? {
            let worst = polygon
                .principal_chord_residuals()?
                .into_iter()
                .fold(0.0, |acc: f64, r| acc.max(r.abs()));
            return Err(Error::NotHalfArea { residual: worst });
        }
        let edges = edge_table(&polygon)?;
        Ok(HalfAreaPolygon {
            n: m / 2,
            polygon,
            edges,
        })
    }

    pub fn from_vertices(vertices: Vec<Point>) -> Result<Self> {
        HalfAreaPolygon::new(Polygon::new(vertices)?)
    }

    pub fn polygon(&self) -> &Polygon {
        &self.polygon
    }

    pub fn into_polygon(self) -> Polygon {
        self.polygon
    }

    /// Half the vertex count.
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn vertex(&self, i: usize) -> Point {
        self.polygon.vertex(i)
    }

    /// Quantities of side `i` (mod `2n`).
    #[inline]
    pub fn edge(&self, i: usize) -> &EdgeQuantities {
        &self.edges[i % self.edges.len()]
    }

    pub fn edges(&self) -> &[EdgeQuantities] {
        &self.edges
    }

    /// `v(i)` (mod `2n`).
    #[inline]
    pub fn v(&self, i: usize) -> Vec2 {
        self.edge(i).v
    }

    /// Principal line `l(i)` through `γ(i)` and `γ(i + n)`.
    pub fn principal_line(&self, i: usize) -> Line {
        Line {
            base: self.vertex(i),
            dir: self.v(i),
        }
    }

    /// Support line of side `i`.
    pub fn side_line(&self, i: usize) -> Line {
        Line {
            base: self.vertex(i),
            dir: self.polygon.edge(i),
        }
    }

    pub fn tolerance(&self) -> Tolerance {
        self.polygon.tolerance()
    }
}

/// Coefficients of `v'(i) = α1 v(i) + β1 γ'(i) = α2 v(i+1) + β2 γ'(i)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameCoefficients {
    pub alpha1: f64,
    pub beta1: f64,
    pub alpha2: f64,
    pub beta2: f64,
    /// Largest reconstruction error of `v'(i)`, in length units.
    pub residual: f64,
}

pub fn frame_coefficients(h: &HalfAreaPolygon, i: usize) -> Result<FrameCoefficients> {
    let q = h.edge(i);
    let tol = h.tolerance().area();
    if q.a_plus.abs() <= tol || q.a_minus.abs() <= tol {
        return Err(Error::DegenerateEdge(i % (2 * h.n())));
    }
    let alpha1 = q.delta / q.a_plus;
    let beta1 = -q.a / q.a_plus;
    let alpha2 = q.delta / q.a_minus;
    let beta2 = -q.a / q.a_minus;

    let side = h.polygon().edge(i);
    let v0 = h.v(i);
    let v1 = h.v(i + 1);
    let dv = v1 - v0;
    let r1 = (dv - (v0 * alpha1 + side * beta1)).length();
    let r2 = (dv - (v1 * alpha2 + side * beta2)).length();
    Ok(FrameCoefficients {
        alpha1,
        beta1,
        alpha2,
        beta2,
        residual: r1.max(r2),
    })
}

/// Builds a half-area `2n`-gon from `n + 1` free vertices and `n - 2` free
/// scalars.
///
/// With zero-based labels, vertices `0..=n` are the seed. For `k` in
/// `2..n`, vertex `n + k - 1` lies on the line through `γ(k - 2)` parallel
/// to `γ(k - 1) γ(n + k - 2)`, at
/// `γ(k - 2) + s * (γ(n + k - 2) - γ(k - 1))` with `s = positions[k - 2]`.
/// The last vertex closes two parallelism conditions at once.
pub fn construct_from_seed(seed: &[Point], positions: &[f64]) -> Result<HalfAreaPolygon> {
    if seed.len() < 3 {
        return Err(Error::InvalidConfig(format!(
            "seed needs n + 1 >= 3 points, got {}",
            seed.len()
        )));
    }
    let n = seed.len() - 1;
    if positions.len() != n - 2 {
        return Err(Error::InvalidConfig(format!(
            "expected {} position scalars, got {}",
            n - 2,
            positions.len()
        )));
    }
    if seed.iter().any(|p| !p.is_finite()) || positions.iter().any(|s| !s.is_finite()) {
        return Err(Error::NonFinite);
    }

    // g(j) is the one-based γ(j).
    let mut verts: Vec<Point> = seed.to_vec();
    verts.resize(2 * n, Point::ORIGIN);
    let g = |verts: &[Point], j: usize| verts[j - 1];
    for k in 2..n {
        let base = g(&verts, k - 1);
        let dir = g(&verts, n + k - 1) - g(&verts, k);
        verts[n + k - 1] = base + dir * positions[k - 2];
    }
    let l1 = Line::new(g(&verts, n - 1), g(&verts, 2 * n - 1) - g(&verts, n))?;
    let l2 = Line::new(g(&verts, n + 1), g(&verts, n) - g(&verts, 1))?;
    verts[2 * n - 1] = line_intersection(&l1, &l2)?;

    let polygon = match Polygon::new(verts) {
        Ok(p) => p,
        Err(Error::NotConvex { .. }) | Err(Error::DegenerateInput(_)) => {
            return Err(Error::NonConvexResult)
        }
        Err(e) => return Err(e),
    };
    HalfAreaPolygon::new(polygon)
}
