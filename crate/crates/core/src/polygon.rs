//! Convex polygons with cyclic indexing, area-bisecting chords and the
//! augmentation of an arbitrary convex polygon to a half-area polygon.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{self, bracket, polygon_signed_area, Point, Tolerance, Vec2};
use crate::halfarea::HalfAreaPolygon;

/// Iteration cap for the bisection fallback of [`bisecting_chord_from`].
pub const MAX_BISECTION_STEPS: usize = 200;

/// Relative distance (in diameters) under which an inserted chord endpoint
/// is merged with an existing vertex.
pub const DEDUP_REL: f64 = 1e-9;

/// A convex polygon stored counterclockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point>,
    area: f64,
    diameter: f64,
}

/// Index of the side joining vertex `i` to vertex `i + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeIndex(pub usize);

/// The point `(1 - t) * v[edge] + t * v[edge + 1]` of the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub edge: EdgeIndex,
    pub t: f64,
}

impl BoundaryPoint {
    pub fn vertex(i: usize) -> Self {
        BoundaryPoint {
            edge: EdgeIndex(i),
            t: 0.0,
        }
    }
}

impl Polygon {
    /// Validates and stores a convex polygon. Clockwise input is reversed.
    ///
    /// Collinear consecutive vertices are accepted; repeated vertices,
    /// reflex turns and self-overlapping (multiply wound) cycles are not.
    pub fn new(mut vertices: Vec<Point>) -> Result<Self> {
        let m = vertices.len();
        if m < 3 {
            return Err(Error::DegenerateInput(format!(
                "polygon needs at least 3 vertices, got {m}"
            )));
        }
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut area = polygon_signed_area(&vertices);
        if area < 0.0 {
            vertices.reverse();
            area = -area;
        }
        let diameter = geom::diameter(&vertices);
        if !(area > 0.0) || diameter == 0.0 {
            return Err(Error::DegenerateInput("polygon has zero area".into()));
        }
        let tol = Tolerance::for_area(area);
        let mut turning = 0.0;
        for i in 0..m {
            let e0 = vertices[(i + 1) % m] - vertices[i];
            let e1 = vertices[(i + 2) % m] - vertices[(i + 1) % m];
            if e0.length() <= 1e-12 * diameter {
                return Err(Error::DegenerateInput(format!("repeated vertex {i}")));
            }
            let turn = bracket(e0, e1);
            if turn < -tol.area() {
                return Err(Error::NotConvex {
                    vertex: (i + 1) % m,
                    turn,
                });
            }
            turning += turn.atan2(e0.dot(e1));
        }
        if (turning - std::f64::consts::TAU).abs() > 1e-6 {
            return Err(Error::NotConvex {
                vertex: 0,
                turn: turning,
            });
        }
        Ok(Polygon {
            vertices,
            area,
            diameter,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Point> {
        self.vertices
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    /// Vertex `i` with the index taken mod the vertex count.
    #[inline]
    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i % self.vertices.len()]
    }

    /// Side vector `v[i + 1] - v[i]`.
    #[inline]
    pub fn edge(&self, i: usize) -> Vec2 {
        self.vertex(i + 1) - self.vertex(i)
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn tolerance(&self) -> Tolerance {
        Tolerance::for_area(self.area)
    }

    /// Smallest turn `[e_i, e_{i+1}]` over all vertices.
    pub fn min_turn(&self) -> f64 {
        (0..self.len())
            .map(|i| bracket(self.edge(i), self.edge(i + 1)))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn boundary_point_coords(&self, b: BoundaryPoint) -> Point {
        let i = b.edge.0;
        self.vertex(i).lerp(self.vertex(i + 1), b.t)
    }

    /// For an even vertex count `2n`, the area to the left of each principal
    /// chord `v[i] -> v[i + n]` minus half the total, for `i` in `0..n`.
    ///
    /// This is a direct shoelace computation on the sub-polygon
    /// `v[i], ..., v[i + n]`.
    pub fn principal_chord_residuals(&self) -> Result<Vec<f64>> {
        let m = self.len();
        if !m.is_multiple_of(2) {
            return Err(Error::OddVertexCount(m));
        }
        let n = m / 2;
        let half = 0.5 * self.area;
        Ok((0..n)
            .map(|i| {
                let piece: Vec<Point> = (i..=i + n).map(|k| self.vertex(k)).collect();
                polygon_signed_area(&piece) - half
            })
            .collect())
    }
}

/// Area enclosed by the chord from `start` along the boundary walk
/// `walk[1..=k]` and back through `q`.
fn swept_area(start: Point, walk: &[Point], k: usize, q: Point) -> f64 {
    let mut piece = Vec::with_capacity(k + 2);
    piece.push(start);
    piece.extend_from_slice(&walk[1..=k]);
    piece.push(q);
    polygon_signed_area(&piece)
}

/// The far endpoint of the area-bisecting chord starting at `b`.
///
/// The boundary is walked counterclockwise from `b`; the area swept by the
/// chord grows monotonically and is piecewise linear along each side, so the
/// crossing side is found from cumulative fan areas and solved in closed
/// form. The result is re-checked by shoelace on the cut-off piece and, if
/// that check fails, refined by bisection on the swept-area parameter.
pub fn bisecting_chord_from(p: &Polygon, b: BoundaryPoint, area_tol: f64) -> Result<BoundaryPoint> {
    if !(area_tol > 0.0) {
        return Err(Error::DegenerateInput(
            "area tolerance must be positive".into(),
        ));
    }
    let m = p.len();
    let e = b.edge.0 % m;
    let tb = b.t.clamp(0.0, 1.0);
    let start = p.boundary_point_coords(BoundaryPoint {
        edge: EdgeIndex(e),
        t: tb,
    });
    let half = 0.5 * p.area();

    // walk[0] = start, walk[k] = v[e + k] for k in 1..=m, walk[m + 1] = start.
    let mut walk = Vec::with_capacity(m + 2);
    walk.push(start);
    walk.extend((1..=m).map(|k| p.vertex(e + k)));
    walk.push(start);

    // Segment k runs from walk[k] to walk[k + 1].
    let to_boundary = |k: usize, t: f64| -> BoundaryPoint {
        let (edge, t) = if k == 0 {
            (e, tb + t * (1.0 - tb))
        } else if k == m {
            (e, t * tb)
        } else {
            ((e + k) % m, t)
        };
        if t >= 1.0 - 1e-15 {
            BoundaryPoint::vertex((edge + 1) % m)
        } else {
            BoundaryPoint {
                edge: EdgeIndex(edge),
                t: t.max(0.0),
            }
        }
    };

    let mut cum = 0.0;
    let mut found = None;
    for k in 0..=m {
        let tri = 0.5 * bracket(walk[k] - start, walk[k + 1] - start);
        if tri > 0.0 && cum + tri >= half {
            found = Some((k, ((half - cum) / tri).clamp(0.0, 1.0)));
            break;
        }
        cum += tri;
    }
    let (k, t) = found.unwrap_or((m - 1, 1.0));
    let q = walk[k].lerp(walk[k + 1], t);
    let residual = swept_area(start, &walk, k, q) - half;
    if residual.abs() <= area_tol {
        return Ok(to_boundary(k, t));
    }

    // Bisection on sigma in [0, m + 1): segment index plus position.
    let area_at = |sigma: f64| -> (usize, f64, f64) {
        let k = (sigma.floor() as usize).min(m);
        let t = (sigma - k as f64).clamp(0.0, 1.0);
        let q = walk[k].lerp(walk[k + 1], t);
        (k, t, swept_area(start, &walk, k, q))
    };
    let (mut lo, mut hi) = (0.0_f64, (m + 1) as f64);
    let mut best = (k, t, residual);
    for _ in 0..MAX_BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        let (k, t, a) = area_at(mid);
        let r = a - half;
        if r.abs() < best.2.abs() {
            best = (k, t, r);
        }
        if r.abs() <= area_tol {
            return Ok(to_boundary(k, t));
        }
        if r < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence { residual: best.2 })
}

/// Default area tolerance for chord searches on `p`.
pub fn default_area_tol(p: &Polygon) -> f64 {
    1e-12 * p.area()
}

/// Inserts the far endpoint of the bisecting chord through every vertex.
///
/// The resulting vertex set is closed under "other end of the bisecting
/// chord", so it has an even count `2n` with vertex `i` opposite `i + n`.
/// Labelling starts at the input's vertex 0.
pub fn augment_to_half_area(p: &Polygon) -> Result<HalfAreaPolygon> {
    let m = p.len();
    let area_tol = default_area_tol(p);
    let merge_dist = DEDUP_REL * p.diameter();

    // (position key along the boundary, point, is original vertex)
    let mut items: Vec<(f64, Point, bool)> =
        (0..m).map(|i| (i as f64, p.vertex(i), true)).collect();
    for i in 0..m {
        let q = bisecting_chord_from(p, BoundaryPoint::vertex(i), area_tol)?;
        items.push((q.edge.0 as f64 + q.t, p.boundary_point_coords(q), false));
    }
    items.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.2.cmp(&a.2)));

    let mut merged: Vec<(Point, bool)> = Vec::with_capacity(items.len());
    for (_, pt, original) in items {
        match merged.last_mut() {
            Some(last) if last.0.distance(pt) <= merge_dist => {
                if original && !last.1 {
                    *last = (pt, true);
                }
            }
            _ => merged.push((pt, original)),
        }
    }
    while merged.len() > 1 && merged[merged.len() - 1].0.distance(merged[0].0) <= merge_dist {
        let (pt, original) = merged.pop().expect("non-empty");
        if original && !merged[0].1 {
            merged[0] = (pt, true);
        }
    }

    let count = merged.len();
    if count < 4 {
        return Err(Error::DegenerateInput(format!(
            "augmentation left only {count} vertices"
        )));
    }
    if !count.is_multiple_of(2) {
        return Err(Error::ValidationFailed(format!(
            "augmentation produced an odd vertex count {count}"
        )));
    }
    let poly = Polygon::new(merged.into_iter().map(|(pt, _)| pt).collect())?;
    HalfAreaPolygon::new(poly)
}
