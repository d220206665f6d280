//! Acceptance criteria 1 to 11, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so that every criterion is evaluated
//! and printed even when an earlier one fails; the process exits non-zero
//! if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use bisect_core::envelope::{
    arc_oracle, classify_symmetry, cusp_criteria, detect_cusps, discrete_envelope,
    hyperbolic_envelope, midpoints_envelope, HyperbolicArc, Symmetry,
};
use bisect_core::generators::{
    generate, maximal_cusp_polygon, trapezoid_companion_point, trapezoid_parallel_bisector,
    trapezoid_split_areas, GeneratorConfig, GeneratorKind,
};
use bisect_core::geom::{bracket, diameter, Point, Vec2};
use bisect_core::halfarea::{chord_oracle_holds, is_half_area, HalfAreaPolygon};
use bisect_core::inverse::{
    em_discrepancy, perturbed_involute, verify_em_invariance, verify_h_changes, InverseFamily,
};
use bisect_core::io::{read_polygon, write_polygon, PolygonDocument};
use bisect_core::polygon::{augment_to_half_area, Polygon};
use bisect_core::svg::{render_svg, RenderOptions};
use bisect_core::verify::g_sums;
use bisect_core::EnvelopeSet;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn triangle_hexagon() -> HalfAreaPolygon {
    let tri = Polygon::new(vec![
        Point::new(0.0, 0.0),
        Point::new(1.0, 0.0),
        Point::new(0.0, 1.0),
    ])
    .unwrap();
    augment_to_half_area(&tri).unwrap()
}

fn random(n: usize, seed: u64) -> HalfAreaPolygon {
    generate(&GeneratorConfig::new(GeneratorKind::Random, n, seed)).unwrap()
}

/// Random polygons for n = 3..=8, cycling n with the seed.
fn random_stream() -> impl Iterator<Item = HalfAreaPolygon> {
    (0u64..).map(|seed| random(3 + (seed % 6) as usize, seed))
}

/// Every generator family plus the worked examples.
fn corpus() -> Vec<(String, HalfAreaPolygon)> {
    let mut out = vec![("triangle-hexagon".to_string(), triangle_hexagon())];
    let square = HalfAreaPolygon::from_vertices(vec![
        Point::new(0.0, 0.0),
        Point::new(1.0, 0.0),
        Point::new(1.0, 1.0),
        Point::new(0.0, 1.0),
    ])
    .unwrap();
    out.push(("unit-square".into(), square));
    let mut add = |kind: GeneratorKind, n: usize, seeds: std::ops::Range<u64>| {
        for seed in seeds {
            let h = generate(&GeneratorConfig::new(kind, n, seed)).unwrap();
            out.push((format!("{kind:?} n={n} seed={seed}"), h));
        }
    };
    for n in 2..=8 {
        add(GeneratorKind::Random, n, 0..10);
    }
    for n in [2, 3, 5] {
        add(GeneratorKind::Symmetric, n, 0..3);
    }
    add(GeneratorKind::SkewSymmetric { c: 1.5 }, 3, 0..3);
    add(GeneratorKind::SkewSymmetric { c: 2.0 }, 3, 0..2);
    add(GeneratorKind::SkewSymmetric { c: 1.1 }, 5, 0..3);
    for n in [4, 6] {
        add(
            GeneratorKind::MaximalCusps {
                eps: Some(0.0),
                base_c: None,
            },
            n,
            0..2,
        );
        add(
            GeneratorKind::MaximalCusps {
                eps: None,
                base_c: None,
            },
            n,
            0..2,
        );
    }
    for sides in 3..=9 {
        add(GeneratorKind::RegularAugmented { sides }, 0, 0..1);
    }
    out
}

fn close(p: Point, q: Point, eps: f64) -> bool {
    p.distance(q) <= eps
}

fn criterion_1() -> Outcome {
    let h = triangle_hexagon();
    let mids = midpoints_envelope(&h);
    let want = [
        Point::new(0.25, 0.25),
        Point::new(0.25, 0.5),
        Point::new(0.5, 0.25),
    ];
    let m_ok = want
        .iter()
        .all(|w| mids.iter().any(|m| close(*m, *w, 1e-12)))
        && mids.len() == want.len();
    let centroid = Point::new(1.0 / 3.0, 1.0 / 3.0);
    let es = discrete_envelope(&h);
    let e_err = es.iter().map(|e| e.distance(centroid)).fold(0.0, f64::max);
    let count = detect_cusps(&h).count;
    outcome(
        h.polygon().len() == 6 && m_ok && e_err <= 1e-12 && count == 3,
        format!("6-gon, M = {mids:?}, max |E - centroid| = {e_err:.1e}, cusps = {count}"),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let mut skipped = 0;
    let mut bad = Vec::new();
    let mut histogram = [0usize; 9];
    for h in random_stream() {
        if checked == 1000 {
            break;
        }
        let c = detect_cusps(&h);
        if !c.degenerate.is_empty() {
            skipped += 1;
            continue;
        }
        checked += 1;
        histogram[c.count.min(8)] += 1;
        if !(c.odd && c.count >= 3 && c.count <= h.n()) {
            bad.push((h.n(), c.count));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        checked == 1000 && bad.is_empty() && secs < 60.0,
        format!(
            "{checked} polygons ({skipped} degenerate skipped), cusp count histogram {histogram:?}, violations {bad:?}, {secs:.1} s"
        ),
    )
}

fn criterion_3() -> Outcome {
    let corpus = corpus();
    let mut worst_g = 0.0f64;
    let mut worst_gm = 0.0f64;
    let mut bad = Vec::new();
    for (name, h) in &corpus {
        let (sg, sgm, _) = g_sums(h);
        let d = h.polygon().diameter();
        worst_g = worst_g.max(sg);
        worst_gm = worst_gm.max(sgm / d);
        if sg >= 1e-9 || sgm >= 1e-9 * d {
            bad.push(name.clone());
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{} polygons, max |sum g| = {worst_g:.1e}, max |sum g midpoint| / diameter = {worst_gm:.1e}, failures {bad:?}",
            corpus.len()
        ),
    )
}

/// Moves one vertex by `1e-3` diameters, keeping convexity.
fn perturb(h: &HalfAreaPolygon, k: usize) -> Polygon {
    let verts = h.polygon().vertices();
    let d = h.polygon().diameter();
    for attempt in 0..verts.len() {
        let j = (k + attempt) % verts.len();
        let t = 0.7 * (k + attempt) as f64;
        let mut v = verts.to_vec();
        v[j] = v[j] + Vec2::new(t.cos(), t.sin()) * (1e-3 * d);
        if let Ok(p) = Polygon::new(v) {
            if p.min_turn() > 0.0 {
                return p;
            }
        }
    }
    panic!("no convex perturbation found");
}

/// Central diagonals parallel, measured as the sine of their angle.
fn parallel_test(p: &Polygon) -> bool {
    let m = p.len();
    let n = m / 2;
    (0..m).all(|i| {
        let d1 = p.vertex(i + n + 1) - p.vertex(i);
        let d2 = p.vertex(i + n) - p.vertex(i + 1);
        bracket(d1, d2).abs() <= 1e-9 * d1.length() * d2.length()
    })
}

fn criterion_4() -> Outcome {
    let mut disagreements = 0;
    let mut verdicts = [0usize; 2];
    for (k, h) in random_stream().take(200).enumerate() {
        let p = if k % 2 == 0 {
            h.polygon().clone()
        } else {
            perturb(&h, k)
        };
        let algebraic = is_half_area(&p).unwrap().is_half_area;
        let parallel = parallel_test(&p);
        let oracle = chord_oracle_holds(&p).unwrap();
        if algebraic != parallel || algebraic != oracle {
            disagreements += 1;
        }
        verdicts[usize::from(oracle)] += 1;
    }
    outcome(
        disagreements == 0 && verdicts == [100, 100],
        format!(
            "200 polygons, {} half-area / {} not, disagreements = {disagreements}",
            verdicts[1], verdicts[0]
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut vertices = 0;
    let mut skipped = 0;
    let mut disagreements = Vec::new();
    for (k, h) in random_stream().take(500).enumerate() {
        let r = cusp_criteria(&h).unwrap();
        vertices += r.vertices.len();
        skipped += r.skipped.len();
        for c in r.vertices.iter().filter(|c| !c.agree()) {
            disagreements.push((k, c.vertex));
        }
    }
    outcome(
        disagreements.is_empty(),
        format!(
            "500 polygons, {vertices} vertices checked ({skipped} degenerate skipped), disagreements {disagreements:?}"
        ),
    )
}

fn lambda_alternation_error(h: &HalfAreaPolygon, c: f64) -> f64 {
    h.edges()
        .iter()
        .enumerate()
        .map(|(i, q)| {
            let want = if i % 2 == 0 { c } else { 1.0 / c };
            (q.lambda / want - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

fn criterion_6() -> Outcome {
    let mut worst_e = 0.0f64;
    let mut worst_l = 0.0f64;
    let mut counts = Vec::new();
    for c in [1.5, 2.0, 0.7] {
        for seed in 0..5 {
            let h = generate(&GeneratorConfig::new(
                GeneratorKind::SkewSymmetric { c },
                3,
                seed,
            ))
            .unwrap();
            let d = h.polygon().diameter();
            worst_e = worst_e.max(diameter(&discrete_envelope(&h)) / d);
            worst_l = worst_l.max(lambda_alternation_error(&h, c));
            counts.push(detect_cusps(&h).count);
        }
    }
    let tri = classify_symmetry(&triangle_hexagon()).unwrap();
    let tri_ok = match tri {
        Symmetry::SkewSymmetric { c } => {
            let (lo, hi) = (c.min(1.0 / c), c.max(1.0 / c));
            (lo - 0.5).abs() < 1e-9 && (hi - 2.0).abs() < 1e-9
        }
        _ => false,
    };
    outcome(
        worst_e < 1e-9 && worst_l < 1e-9 && counts.iter().all(|c| *c == 3) && tri_ok,
        format!(
            "15 hexagons (c = 1.5, 2, 0.7): max E-diameter / diameter = {worst_e:.1e}, max lambda error = {worst_l:.1e}, cusps {counts:?}; triangle hexagon {tri:?}"
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut rows = Vec::new();
    let mut ok = true;
    for seed in 0..3 {
        let base = generate(&GeneratorConfig::new(
            GeneratorKind::SkewSymmetric { c: 1.5 },
            3,
            seed,
        ))
        .unwrap();
        let d = base.polygon().diameter();
        for eps in [0.0, 1e-3 * d, 1e-2 * d] {
            let h = maximal_cusp_polygon(&base, eps).unwrap();
            let cusps = detect_cusps(&h).count;
            let arcs = hyperbolic_envelope(&h).unwrap().len();
            let strict = eps == 0.0 || h.polygon().min_turn() > 0.0;
            ok &= h.polygon().len() == 8 && cusps == 3 && arcs == 4 && strict;
            rows.push(format!("eps={eps:.1e}: {cusps} cusps / {arcs} arcs"));
        }
    }
    outcome(ok, rows.join(", "))
}

fn criterion_8() -> Outcome {
    let c: f64 = 0.5;
    let (a, b, cc, d) = (
        Point::new(0.0, 0.0),
        Point::new(1.0, 0.0),
        Point::new(c * c, 1.0),
        Point::new(0.0, 1.0),
    );
    let (p, q) = trapezoid_parallel_bisector(a, b, cc, d).unwrap();
    let q2 = trapezoid_companion_point(a, b, cc, d, p).unwrap();
    let points_ok = close(p, Point::new(0.5, 2.0 / 3.0), 1e-12)
        && close(q, Point::new(0.0, 2.0 / 3.0), 1e-12)
        && close(q, q2, 1e-12);
    let (lower, upper) = trapezoid_split_areas(a, b, cc, d, p, q);
    let rel = (lower - upper).abs() / (lower + upper);
    outcome(
        points_ok && rel <= 1e-12,
        format!(
            "P = ({:.15}, {:.15}), Q = ({:.15}, {:.15}), companion matches: {}; areas {lower:.6} / {upper:.6} (relative gap {rel:.3})",
            p.x, p.y, q.x, q.y, close(q, q2, 1e-12)
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut worst = 0.0f64;
    let mut tested = 0;
    let mut em_fail = Vec::new();
    let mut control_eligible = 0;
    let mut control_missed = Vec::new();
    let mut h_static = Vec::new();
    for seed in 0..20u64 {
        let n = 4 + (seed % 4) as usize;
        let src = random(n, 1000 + seed);
        let d = src.polygon().diameter();
        let f = InverseFamily::new(src.clone());
        let cs: Vec<f64> = [-0.1, 0.05, 0.2]
            .into_iter()
            .filter(|c| f.contains(*c))
            .collect();
        let r = verify_em_invariance(&f, &cs).unwrap();
        for s in &r.samples {
            tested += 1;
            worst = worst.max(s.max_m.max(s.max_e) / d);
            if !(s.max_m < 1e-9 * d && s.max_e < 1e-9 * d) {
                em_fail.push((seed, s.c));
            }
        }
        let tol = src.tolerance().area();
        if src.edges().iter().all(|q| q.delta.abs() > 10.0 * tol) {
            control_eligible += 1;
            let c = cs.first().copied().unwrap_or(0.0);
            let v = perturbed_involute(&src, c, 1, 1e-3);
            let (dm, de) = em_discrepancy(&src, v).unwrap();
            if dm < 1e-9 * d && de < 1e-9 * d {
                control_missed.push(seed);
            }
        }
        if let Some(&c) = cs.iter().find(|c| **c != 0.0) {
            let hr = verify_h_changes(&f, c).unwrap();
            if hr.edges.iter().any(|e| e.center_shift <= 1e-9 * d) {
                h_static.push(seed);
            }
        }
    }
    outcome(
        tested > 0 && em_fail.is_empty() && control_missed.is_empty() && control_eligible > 0 && h_static.is_empty(),
        format!(
            "20 polygons, {tested} (polygon, c) pairs, max drift / diameter = {worst:.1e}, failures {em_fail:?}; negative control failed invariance on {}/{control_eligible} eligible polygons; H unchanged on {h_static:?}",
            control_eligible - control_missed.len()
        ),
    )
}

fn criterion_10() -> Outcome {
    let corpus = corpus();
    let mut worst_oracle = 0.0f64;
    let mut worst_ends = 0.0f64;
    let mut arcs = 0;
    let mut bad = Vec::new();
    for (name, h) in &corpus {
        for (i, arc) in hyperbolic_envelope(h).unwrap().iter().enumerate() {
            arcs += 1;
            let oracle = arc_oracle(h, i, 16)
                .unwrap()
                .into_iter()
                .fold(0.0, f64::max);
            worst_oracle = worst_oracle.max(oracle);
            let ends = match arc {
                HyperbolicArc::Hyperbola { k, start, end, .. } => {
                    let (k0, k1) = (arc.product(*start).unwrap(), arc.product(*end).unwrap());
                    (k0 - k1).abs() / k.abs()
                }
                HyperbolicArc::Segment { .. } => 0.0,
            };
            worst_ends = worst_ends.max(ends);
            if oracle > 1e-6 || ends > 1e-9 {
                bad.push(format!("{name} arc {i}"));
            }
        }
    }
    let hex_k: Vec<f64> = hyperbolic_envelope(&triangle_hexagon())
        .unwrap()
        .iter()
        .map(|a| a.k().unwrap_or(f64::NAN))
        .collect();
    let hex_ok = hex_k.iter().all(|k| (k - 0.125).abs() < 1e-12);
    outcome(
        bad.is_empty() && hex_ok,
        format!(
            "{arcs} arcs on {} polygons, max oracle residual = {worst_oracle:.1e}, max endpoint k gap = {worst_ends:.1e}, triangle hexagon k = {hex_k:?}, failures {bad:?}",
            corpus.len()
        ),
    )
}

fn criterion_11() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    let kinds = [
        (GeneratorKind::Random, 6),
        (GeneratorKind::SkewSymmetric { c: 1.5 }, 3),
        (
            GeneratorKind::MaximalCusps {
                eps: None,
                base_c: None,
            },
            4,
        ),
        (GeneratorKind::RegularAugmented { sides: 5 }, 0),
    ];
    for (kind, n) in kinds {
        let render = || {
            let h = generate(&GeneratorConfig::new(kind, n, 77)).unwrap();
            let doc = PolygonDocument::from_points(None, h.polygon().vertices());
            let env = EnvelopeSet::compute(&h).unwrap();
            let svg = render_svg(&h, &env, &RenderOptions::default()).unwrap();
            (write_polygon(&doc), svg, doc)
        };
        let (j1, s1, doc) = render();
        let (j2, s2, _) = render();
        let same = j1 == j2 && s1 == s2;
        let xml = roxmltree::Document::parse(&s1).is_ok();
        let round = read_polygon(&j1).map(|d| d == doc).unwrap_or(false);
        ok &= same && xml && round;
        notes.push(format!(
            "{kind:?}: identical={same} xml={xml} round-trip={round}"
        ));
    }
    outcome(ok, notes.join(", "))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("triangle chain", criterion_1),
        ("odd cusp count >= 3", criterion_2),
        ("sum identities", criterion_3),
        ("half-area characterizations agree", criterion_4),
        ("cusp criteria agree", criterion_5),
        ("skew-symmetric hexagons", criterion_6),
        ("maximal cusps", criterion_7),
        ("trapezoid closed form", criterion_8),
        ("inverse family", criterion_9),
        ("hyperbolic arc oracle", criterion_10),
        ("determinism and formats", criterion_11),
    ];
    let mut failed = Vec::new();
    for (k, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        let verdict = if result.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {verdict} [{title}] ({:.2} s): {}",
            k + 1,
            start.elapsed().as_secs_f64(),
            result.detail
        );
        if !result.pass {
            failed.push(k + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 11 criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
