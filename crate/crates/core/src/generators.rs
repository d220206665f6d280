//! Seeded generators for the example families.
//!
//! Every generator is a pure function of its [`GeneratorConfig`]; the RNG is
//! ChaCha8 seeded from `seed`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::envelope::{classify_symmetry, detect_cusps, Symmetry, LAMBDA_REL};
use crate::error::{Error, Result};
use crate::geom::{bracket, line_intersection, polygon_signed_area, AffineMap, Line, Point, Vec2};
use crate::halfarea::{construct_from_seed, HalfAreaPolygon};
use crate::polygon::{augment_to_half_area, Polygon};

pub const DEFAULT_MAX_RETRIES: usize = 1000;
pub const DEFAULT_NOISE: f64 = 0.1;
/// The position scalars feed a recursion that amplifies their error, so they
/// get a fifth of the vertex noise.
const POSITION_NOISE_RATIO: f64 = 0.2;
/// Default outward push for the strictly convex maximal-cusp variant,
/// relative to the base diameter.
pub const DEFAULT_EPS_REL: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeneratorKind {
    /// Perturbed regular `2n`-gon pushed through [`construct_from_seed`].
    Random,
    /// Centrally symmetric `2n`-gon.
    Symmetric,
    /// Skew-symmetric `2n`-gon with `λ` alternating `c, 1/c`; `n` odd.
    SkewSymmetric { c: f64 },
    /// `2n`-gon with `n - 1` cusps, `n` even, built on a skew-symmetric
    /// `2(n-1)`-gon. `eps = None` picks a default push and halves it on
    /// failure.
    /// `base_c = None` uses [`default_skew_c`].
    MaximalCusps {
        eps: Option<f64>,
        base_c: Option<f64>,
    },
    /// Regular `sides`-gon augmented to half-area.
    RegularAugmented { sides: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    /// Half the vertex count. Ignored by `RegularAugmented`.
    pub n: usize,
    pub seed: u64,
    pub kind: GeneratorKind,
    pub max_retries: usize,
    /// Perturbation amplitude of the random generator, relative to the
    /// regular polygon's side length (position scalars get a fifth of it).
    pub noise: f64,
}

impl GeneratorConfig {
    pub fn new(kind: GeneratorKind, n: usize, seed: u64) -> Self {
        GeneratorConfig {
            n,
            seed,
            kind,
            max_retries: DEFAULT_MAX_RETRIES,
            noise: DEFAULT_NOISE,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.max_retries == 0 {
            return bad("max_retries must be positive".into());
        }
        match self.kind {
            GeneratorKind::RegularAugmented { sides } => {
                if sides < 3 {
                    return bad(format!("regular polygon needs >= 3 sides, got {sides}"));
                }
                return Ok(());
            }
            GeneratorKind::Random => {
                if !(self.noise.is_finite() && self.noise >= 0.0) {
                    return bad(format!("noise must be finite and >= 0, got {}", self.noise));
                }
            }
            GeneratorKind::Symmetric => {}
            GeneratorKind::SkewSymmetric { c } => {
                check_skew_c(c)?;
                if self.n.is_multiple_of(2) || self.n < 3 {
                    return bad(format!(
                        "skew-symmetric polygons need n odd and >= 3, got {}",
                        self.n
                    ));
                }
            }
            GeneratorKind::MaximalCusps { eps, base_c } => {
                if let Some(c) = base_c {
                    check_skew_c(c)?;
                }
                if let Some(e) = eps {
                    if !(e.is_finite() && e >= 0.0) {
                        return bad(format!("eps must be finite and >= 0, got {e}"));
                    }
                }
                if !self.n.is_multiple_of(2) || self.n < 4 {
                    return bad(format!(
                        "maximal-cusp polygons need n even and >= 4, got {}",
                        self.n
                    ));
                }
            }
        }
        if self.n < 2 {
            return bad(format!("n must be >= 2, got {}", self.n));
        }
        Ok(())
    }
}

fn check_skew_c(c: f64) -> Result<()> {
    if !(c.is_finite() && c > 0.0) || c == 1.0 {
        return Err(Error::InvalidConfig(format!(
            "c must be positive and different from 1, got {c}"
        )));
    }
    Ok(())
}

pub fn generate(config: &GeneratorConfig) -> Result<HalfAreaPolygon> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    match config.kind {
        GeneratorKind::RegularAugmented { sides } => regular_augmented(sides),
        GeneratorKind::MaximalCusps { eps, base_c } => {
            let base_c = base_c.unwrap_or_else(|| default_skew_c(config.n - 1));
            let mut attempt = 0;
            let base = retry(config.max_retries, || {
                attempt += 1;
                skew_symmetric_attempt(&mut rng, config.n - 1, base_c, skew_jitter(attempt - 1))
            })?;
            match eps {
                Some(e) => maximal_cusp_polygon(&base, e),
                None => {
                    let mut e = DEFAULT_EPS_REL * base.polygon().diameter();
                    for _ in 0..config.max_retries {
                        match maximal_cusp_polygon(&base, e) {
                            Err(Error::EpsilonTooLarge) => e *= 0.5,
                            other => return other,
                        }
                    }
                    Err(Error::RetriesExhausted(config.max_retries))
                }
            }
        }
        GeneratorKind::Random => retry(config.max_retries, || {
            random_attempt(&mut rng, config.n, config.noise)
        }),
        GeneratorKind::Symmetric => {
            retry(config.max_retries, || symmetric_attempt(&mut rng, config.n))
        }
        GeneratorKind::SkewSymmetric { c } => {
            let mut attempt = 0;
            retry(config.max_retries, || {
                attempt += 1;
                skew_symmetric_attempt(&mut rng, config.n, c, skew_jitter(attempt - 1))
            })
        }
    }
}

/// Runs `attempt` until it yields a polygon; `Ok(None)` and construction
/// errors count as rejections.
fn retry(
    max: usize,
    mut attempt: impl FnMut() -> Result<Option<HalfAreaPolygon>>,
) -> Result<HalfAreaPolygon> {
    for _ in 0..max {
        match attempt() {
            Ok(Some(h)) => return Ok(h),
            Ok(None)
            | Err(Error::NonConvexResult)
            | Err(Error::NotConvex { .. })
            | Err(Error::DegenerateInput(_))
            | Err(Error::NotHalfArea { .. })
            | Err(Error::ParallelLines)
            | Err(Error::ClassificationConflict) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::RetriesExhausted(max))
}

fn regular(m: usize, radius: f64) -> Vec<Point> {
    (0..m)
        .map(|j| {
            let t = 2.0 * PI * j as f64 / m as f64;
            Point::new(radius * t.cos(), radius * t.sin())
        })
        .collect()
}

fn regular_augmented(sides: usize) -> Result<HalfAreaPolygon> {
    augment_to_half_area(&Polygon::new(regular(sides, 1.0))?)
}

fn random_attempt(rng: &mut ChaCha8Rng, n: usize, noise: f64) -> Result<Option<HalfAreaPolygon>> {
    let base = regular(2 * n, 1.0);
    let side = base[0].distance(base[1]);
    let amp = noise * side;
    let seed: Vec<Point> = base[..=n]
        .iter()
        .map(|p| {
            *p + Vec2::new(
                amp * rng.random_range(-1.0..=1.0),
                amp * rng.random_range(-1.0..=1.0),
            )
        })
        .collect();
    let positions: Vec<f64> = (0..n - 2)
        .map(|_| 1.0 + POSITION_NOISE_RATIO * noise * rng.random_range(-1.0..=1.0))
        .collect();
    let h = construct_from_seed(&seed, &positions)?;
    // every half-area hexagon is skew-symmetric and every half-area
    // quadrilateral is a parallelogram, so any class is accepted here
    classify_symmetry(&h)?;
    Ok(Some(h))
}

/// Convex polygon from `n` edge vectors with increasing angles in `[0, π)`
/// followed by their negatives.
fn symmetric_attempt(rng: &mut ChaCha8Rng, n: usize) -> Result<Option<HalfAreaPolygon>> {
    let mut angles: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..PI)).collect();
    angles.sort_by(f64::total_cmp);
    let min_gap = 1e-3;
    let gaps_ok = angles.windows(2).all(|w| w[1] - w[0] > min_gap)
        && angles[0] + PI - angles[n - 1] > min_gap;
    let center = Point::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0));
    if !gaps_ok {
        return Ok(None);
    }
    let edges: Vec<Vec2> = angles
        .iter()
        .map(|t| Vec2::new(t.cos(), t.sin()) * rng.random_range(0.5..1.5))
        .collect();
    let mut verts = Vec::with_capacity(2 * n);
    let mut cur = Vec2::ZERO;
    for e in edges
        .iter()
        .chain(edges.iter().map(|e| -*e).collect::<Vec<_>>().iter())
    {
        verts.push(cur);
        cur += *e;
    }
    let mean = verts.iter().fold(Vec2::ZERO, |a, v| a + *v) * (verts.len() as f64).recip();
    let verts: Vec<Point> = verts.into_iter().map(|v| center + (v - mean)).collect();
    let h = HalfAreaPolygon::from_vertices(verts)?;
    Ok(match classify_symmetry(&h)? {
        Symmetry::Symmetric { .. } => Some(h),
        _ => None,
    })
}

/// Vertices `r_j u_j` and `-s_j u_j` on `n` lines through a center, with
/// `s_j = k_j r_j` and `k_j` alternating `c, 1/c`. For odd `n` this makes
/// `r_j r_{j+1} = s_j s_{j+1}` around the whole polygon.
///
/// Directions start evenly spaced and radii at `ρ / sqrt(k_j)`, then get
/// jittered by `jitter`; a random orientation-preserving affine map is
/// applied last. With `jitter = 0` the polygon is convex exactly when
/// `max(c, 1/c) <= 1 / cos(π / n)`, with collinear vertices at equality.
fn skew_symmetric_attempt(
    rng: &mut ChaCha8Rng,
    n: usize,
    c: f64,
    jitter: f64,
) -> Result<Option<HalfAreaPolygon>> {
    let step = PI / n as f64;
    let k = |j: usize| if j.is_multiple_of(2) { c } else { c.recip() };
    let mut dirs = Vec::with_capacity(n);
    let mut r = Vec::with_capacity(n);
    for j in 0..n {
        let t = (j as f64 + jitter * rng.random_range(-0.5..=0.5)) * step;
        dirs.push(Vec2::new(t.cos(), t.sin()));
        r.push((1.0 + jitter * rng.random_range(-0.5..=0.5)) / k(j).sqrt());
    }
    let s: Vec<f64> = (0..n).map(|j| k(j) * r[j]).collect();
    for j in 0..n {
        let (a, b) = if j + 1 < n {
            (r[j] * r[j + 1], s[j] * s[j + 1])
        } else {
            (r[j] * s[0], s[j] * r[0])
        };
        debug_assert!((a - b).abs() <= 1e-12 * a.max(b));
    }
    let map = random_affine(rng);
    let mut verts: Vec<Point> = (0..n)
        .map(|j| map.apply((dirs[j] * r[j]).to_point()))
        .collect();
    verts.extend((0..n).map(|j| map.apply((dirs[j] * -s[j]).to_point())));
    if polygon_signed_area(&verts) <= 0.0 {
        return Ok(None);
    }
    let h = HalfAreaPolygon::from_vertices(verts)?;
    Ok(match classify_symmetry(&h)? {
        Symmetry::SkewSymmetric { c: got } if (got / c - 1.0).abs() <= LAMBDA_REL => Some(h),
        _ => None,
    })
}

/// Rotation, bounded shear and anisotropic scale with positive determinant,
/// plus a translation in `[-1, 1]²`.
fn random_affine(rng: &mut ChaCha8Rng) -> AffineMap {
    let t: f64 = rng.random_range(0.0..2.0 * PI);
    let (sx, sy) = (rng.random_range(0.7..1.4), rng.random_range(0.7..1.4));
    let sh: f64 = rng.random_range(-0.3..=0.3);
    let (co, si) = (t.cos(), t.sin());
    // R * [[sx, sh], [0, sy]]
    let linear = [[co * sx, co * sh - si * sy], [si * sx, si * sh + co * sy]];
    let shift = Vec2::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0));
    AffineMap::new(linear, shift)
}

/// Largest `c > 1` for which the unjittered skew-symmetric `2n`-gon is
/// convex.
pub fn skew_c_limit(n: usize) -> f64 {
    (PI / n as f64).cos().recip()
}

/// A `c` halfway between 1 and [`skew_c_limit`], which leaves room for
/// jitter.
pub fn default_skew_c(n: usize) -> f64 {
    0.5 * (1.0 + skew_c_limit(n))
}

/// Jitter for the `attempt`-th skew-symmetric try: it halves every ten
/// attempts and is exactly zero after a few hundred, so configurations on
/// the convexity boundary are still reached.
fn skew_jitter(attempt: usize) -> f64 {
    let j = 0.3 * 0.5f64.powi((attempt / 10) as i32);
    if j < 1e-12 {
        0.0
    } else {
        j
    }
}

/// Affine map sending `A, B, D` to `(0,0), (1,0), (0,1)` and the `c` with
/// `C ↦ (c², 1)`.
fn trapezoid_frame(a: Point, b: Point, c: Point, d: Point) -> Result<(AffineMap, f64)> {
    let pts = [a, b, c, d];
    if pts.iter().any(|p| !p.is_finite()) {
        return Err(Error::NonFinite);
    }
    let (ab, ad) = (b - a, d - a);
    let det = bracket(ab, ad);
    let scale = ab.length().max(ad.length()).max((c - a).length());
    if det <= 1e-12 * scale * scale {
        return Err(Error::NotATrapezoid(
            "A, B, D are not counter-clockwise".into(),
        ));
    }
    let to_frame = AffineMap::new([[ab.x, ad.x], [ab.y, ad.y]], a.to_vec2()).inverse()?;
    let cc = to_frame.apply(c);
    if (cc.y - 1.0).abs() > 1e-9 {
        return Err(Error::NotATrapezoid(format!(
            "AB and CD are not parallel (C maps to height {})",
            cc.y
        )));
    }
    if cc.x <= 0.0 {
        return Err(Error::NotATrapezoid("ABCD is not convex".into()));
    }
    Ok((to_frame, cc.x.sqrt()))
}

/// The points `P` on `BC` and `Q` on `AD` of the trapezoid lemma, for which
/// `Q` is the companion of `P` and `PQ ∥ AB`.
///
/// In the frame `A=(0,0), B=(1,0), D=(0,1), C=(c²,1)` they are
/// `P = (c, 1/(1+c))` and `Q = (0, 1/(1+c))`.
pub fn trapezoid_parallel_bisector(
    a: Point,
    b: Point,
    c: Point,
    d: Point,
) -> Result<(Point, Point)> {
    let (to_frame, cf) = trapezoid_frame(a, b, c, d)?;
    let from_frame = to_frame.inverse()?;
    let y0 = (1.0 + cf).recip();
    let p = from_frame.apply(Point::new(cf, y0));
    let q = from_frame.apply(Point::new(0.0, y0));
    Ok((p, q))
}

/// Areas of the parts of `ABCD` on the `AB` side and on the `CD` side of
/// the segment `PQ` (`P` on `BC`, `Q` on `AD`).
pub fn trapezoid_split_areas(
    a: Point,
    b: Point,
    c: Point,
    d: Point,
    p: Point,
    q: Point,
) -> (f64, f64) {
    (
        polygon_signed_area(&[a, b, p, q]),
        polygon_signed_area(&[q, p, c, d]),
    )
}

/// `Q = (line through B ∥ PD) ∩ (line through C ∥ PA)`.
///
/// `Q` is strictly left of `AD` exactly when `P` is strictly right of `BC`
/// (and on it exactly when `P` is on `BC`); the relation is checked.
pub fn trapezoid_companion_point(
    a: Point,
    b: Point,
    c: Point,
    d: Point,
    p: Point,
) -> Result<Point> {
    trapezoid_frame(a, b, c, d)?;
    let q = line_intersection(&Line::new(b, d - p)?, &Line::new(c, a - p)?)?;
    let scale = (b - a).length().max((d - a).length());
    let eps = 1e-12 * scale * scale;
    let sign = |x: f64| {
        if x > eps {
            1
        } else if x < -eps {
            -1
        } else {
            0
        }
    };
    let sp = sign(bracket(c - b, p - b));
    let sq = sign(bracket(d - a, q - a));
    if sp != -sq {
        return Err(Error::ValidationFailed(format!(
            "companion side relation violated (P side {sp}, Q side {sq})"
        )));
    }
    Ok(q)
}

/// Inserts the trapezoid-lemma pair into a skew-symmetric `2N`-gon (`N`
/// odd), giving a `2(N+1)`-gon whose cusps are exactly the `N` old midpoints.
///
/// With one-based labels the trapezoid is `A=γ(N+1), B=γ(2N), C=γ(1),
/// D=γ(N)`. `P` goes between `γ(2N)` and `γ(1)`, `Q` between `γ(N)` and
/// `γ(N+1)`. For `eps > 0`, `P` is pushed outward by `eps` along the normal
/// of `BC` and `Q` is its companion, so no three vertices are collinear.
pub fn maximal_cusp_polygon(base: &HalfAreaPolygon, eps: f64) -> Result<HalfAreaPolygon> {
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(Error::InvalidConfig(format!(
            "eps must be finite and >= 0, got {eps}"
        )));
    }
    let big_n = base.n();
    if big_n.is_multiple_of(2) || big_n < 3 {
        return Err(Error::InvalidConfig(format!(
            "base must have 2N vertices with N odd and >= 3, got N = {big_n}"
        )));
    }
    match classify_symmetry(base)? {
        Symmetry::SkewSymmetric { .. } => {}
        other => {
            return Err(Error::InvalidConfig(format!(
                "base polygon is not skew-symmetric ({other:?})"
            )))
        }
    }
    let g = |j: usize| base.vertex(j - 1);
    let (a, b, c, d) = (g(big_n + 1), g(2 * big_n), g(1), g(big_n));
    let (p0, q0) = trapezoid_parallel_bisector(a, b, c, d)?;
    let (p, q) = if eps == 0.0 {
        (p0, q0)
    } else {
        let bc = c - b;
        let outward = Vec2::new(bc.y, -bc.x)
            .normalized()
            .ok_or(Error::ParallelLines)?;
        let p = p0 + outward * eps;
        (p, trapezoid_companion_point(a, b, c, d, p)?)
    };

    let mut verts: Vec<Point> = (1..=big_n).map(g).collect();
    verts.push(q);
    verts.extend((big_n + 1..=2 * big_n).map(g));
    verts.push(p);

    let h = HalfAreaPolygon::from_vertices(verts).map_err(|_| Error::EpsilonTooLarge)?;
    if eps > 0.0 {
        let tol = h.tolerance().area();
        if h.polygon().min_turn() <= tol || detect_cusps(&h).count != big_n {
            return Err(Error::EpsilonTooLarge);
        }
    }
    Ok(h)
}
