//! The numerical invariant suite run by `bisect verify`.

use serde::Serialize;

use crate::envelope::{
    arc_oracle, classify_symmetry, cusp_criteria, detect_cusps, discrete_envelope,
    discrete_envelope_by_intersection,
};
use crate::error::Error;
use crate::geom::Vec2;
use crate::halfarea::{chord_oracle_holds, frame_coefficients, is_half_area, HalfAreaPolygon};

/// Relative tolerance of the arc oracle.
pub const ARC_ORACLE_REL: f64 = 1e-6;
/// Relative tolerance of the sum identities.
pub const SUM_REL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    /// Measured residual (or count), compared against `threshold`.
    pub value: f64,
    pub threshold: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn check(name: &'static str, value: f64, threshold: f64) -> Check {
    Check {
        name,
        pass: value <= threshold,
        value,
        threshold,
        note: None,
    }
}

fn failed(name: &'static str, err: Error) -> Check {
    Check {
        name,
        pass: false,
        value: f64::NAN,
        threshold: 0.0,
        note: Some(err.to_string()),
    }
}

/// `(|Σ g|, |Σ g γ̄|, Σ |g|)` with `γ̄` the side midpoints.
pub fn g_sums(h: &HalfAreaPolygon) -> (f64, f64, f64) {
    let m = 2 * h.n();
    let mut sum = 0.0;
    let mut abs = 0.0;
    let mut weighted = Vec2::ZERO;
    for i in 0..m {
        let g = h.edge(i).g;
        sum += g;
        abs += g.abs();
        weighted += h.vertex(i).midpoint(h.vertex(i + 1)).to_vec2() * g;
    }
    (sum.abs(), weighted.length(), abs)
}

/// Runs every invariant; `samples` chords per arc for the arc oracle.
pub fn run_invariant_suite(h: &HalfAreaPolygon, samples: usize) -> VerifyReport {
    let n = h.n();
    let m = 2 * n;
    let tol = h.tolerance();
    let diam = h.polygon().diameter();
    let mut checks = Vec::new();

    match is_half_area(h.polygon()) {
        Ok(r) => {
            let raw = r
                .central_brackets
                .iter()
                .map(|b| b.abs())
                .fold(0.0, f64::max);
            checks.push(check("half_area_algebraic", raw, tol.area()));
            match chord_oracle_holds(h.polygon()) {
                Ok(oracle) => {
                    let mut c = check("characterization_agreement", 0.0, 0.0);
                    c.pass = oracle == r.is_half_area;
                    c.value = if c.pass { 0.0 } else { 1.0 };
                    checks.push(c);
                }
                Err(e) => checks.push(failed("characterization_agreement", e)),
            }
        }
        Err(e) => checks.push(failed("half_area_algebraic", e)),
    }

    let (mut apm, mut dsym) = (0.0f64, 0.0f64);
    for i in 0..m {
        let (q, o) = (h.edge(i), h.edge(i + n));
        apm = apm
            .max((q.a_plus - o.a_minus).abs())
            .max((q.a_minus - o.a_plus).abs());
        dsym = dsym.max((q.delta + o.delta).abs());
    }
    checks.push(check("a_plus_minus_pairing", apm, tol.area()));
    checks.push(check("delta_antisymmetry", dsym, tol.area()));

    let (sg, sgm, abs) = g_sums(h);
    let scale = abs.max(1.0);
    checks.push(check("sum_g", sg, SUM_REL * scale));
    checks.push(check("sum_g_midpoint", sgm, SUM_REL * scale * diam));

    let mut frame = 0.0f64;
    let mut frame_skipped = 0;
    for i in 0..m {
        match frame_coefficients(h, i) {
            Ok(f) => frame = frame.max(f.residual),
            Err(Error::DegenerateEdge(_)) => frame_skipped += 1,
            Err(_) => frame = f64::INFINITY,
        }
    }
    let mut c = check("frame_coefficients", frame, tol.area());
    if frame_skipped > 0 {
        c.note = Some(format!("{frame_skipped} degenerate edges skipped"));
    }
    checks.push(c);

    let es = discrete_envelope(h);
    let ex = discrete_envelope_by_intersection(h);
    let e_gap = es
        .iter()
        .zip(&ex)
        .filter_map(|(a, b)| b.map(|b| a.distance(b)))
        .fold(0.0, f64::max);
    checks.push(check("discrete_envelope_intersection", e_gap, tol.length()));

    checks.push(match classify_symmetry(h) {
        Ok(s) => {
            let mut c = check("classification", 0.0, 0.0);
            c.note = Some(format!("{s:?}"));
            c
        }
        Err(e) => failed("classification", e),
    });

    checks.push(match cusp_criteria(h) {
        Ok(r) => {
            let bad = r.vertices.iter().filter(|c| !c.agree()).count();
            let mut c = check("cusp_criteria_agreement", bad as f64, 0.0);
            if !r.skipped.is_empty() {
                c.note = Some(format!("degenerate vertices skipped: {:?}", r.skipped));
            }
            c
        }
        Err(e) => failed("cusp_criteria_agreement", e),
    });

    let cusps = detect_cusps(h);
    let mut c = check("cusp_count_odd_at_least_3", 0.0, 0.0);
    if cusps.degenerate.is_empty() {
        c.pass = cusps.odd && cusps.count >= 3;
        c.value = cusps.count as f64;
        c.threshold = 3.0;
    } else {
        c.note = Some("polygon has degenerate vertices; theorem does not apply".into());
    }
    checks.push(c);

    let mut worst = 0.0f64;
    let mut err = None;
    for i in 0..n {
        match arc_oracle(h, i, samples) {
            Ok(v) => worst = v.into_iter().fold(worst, f64::max),
            Err(e) => {
                err = Some(e);
                break;
            }
        }
    }
    checks.push(match err {
        None => check("arc_oracle", worst, ARC_ORACLE_REL),
        Some(e) => failed("arc_oracle", e),
    });

    VerifyReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, GeneratorConfig, GeneratorKind};
    use crate::geom::Point;

    #[test]
    fn hexagon_passes_everything() {
        let h = HalfAreaPolygon::from_vertices(vec![
            Point::new(0.0, 0.0),
            Point::new(0.5, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.5, 0.5),
            Point::new(0.0, 1.0),
            Point::new(0.0, 0.5),
        ])
        .unwrap();
        let r = run_invariant_suite(&h, 16);
        assert!(r.all_pass(), "{r:#?}");
        assert_eq!(r.get("cusp_count_odd_at_least_3").unwrap().value, 3.0);
    }

    #[test]
    fn generator_outputs_pass() {
        let kinds = [
            (GeneratorKind::Random, 6),
            (GeneratorKind::Symmetric, 4),
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
            for seed in 0..3 {
                let h = generate(&GeneratorConfig::new(kind, n, seed)).unwrap();
                let r = run_invariant_suite(&h, 8);
                assert!(r.all_pass(), "{kind:?} seed {seed}: {r:#?}");
            }
        }
    }
}
