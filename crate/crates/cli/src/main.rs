//! `bisect`: half-area polygons, bisecting-line envelopes and cusps from the
//! shell.
//!
//! Exit codes: 0 success, 1 validation or oracle failure (the report is
//! still printed), 2 usage error.

mod human;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bisect_core::envelope::{classify_symmetry, cusp_criteria, detect_cusps, EnvelopeSet};
use bisect_core::generators::{default_skew_c, generate, GeneratorConfig, GeneratorKind};
use bisect_core::halfarea::{chord_oracle_holds, is_half_area, HalfAreaPolygon};
use bisect_core::inverse::{family_member, InverseFamily};
use bisect_core::io::{read_polygon, write_polygon, PolygonDocument};
use bisect_core::polygon::augment_to_half_area;
use bisect_core::svg::{render_svg, RenderOptions};
use bisect_core::verify::run_invariant_suite;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(
    name = "bisect",
    version,
    about = "Half-area polygons and the envelopes of their bisecting lines"
)]
struct Cli {
    /// Print reports as indented text instead of JSON.
    #[arg(long, global = true)]
    human: bool,
    /// Do not auto-augment inputs that are not half-area.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Half-area diagnostic of a polygon.
    Check { input: PathBuf },
    /// Insert the far ends of the vertex bisecting chords.
    Augment {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// M, E, H and cusp flags; optional SVG figure.
    Envelope {
        input: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Points per rendered hyperbolic arc.
        #[arg(long, default_value_t = 64)]
        arc_samples: usize,
    },
    /// Cusp count, parity and degenerate vertices.
    Cusps { input: PathBuf },
    /// Member of the family sharing E and M, or the valid parameter range.
    Family {
        input: PathBuf,
        #[arg(
            short = 'c',
            allow_negative_numbers = true,
            conflicts_with = "interval",
            requires = "output"
        )]
        c: Option<f64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        interval: bool,
    },
    /// Generate an example polygon.
    Generate {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Half the vertex count (number of sides for regular-augmented).
        #[arg(short = 'n')]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Skew-symmetry constant (skew-symmetric, maximal-cusps base).
        #[arg(short = 'c')]
        c: Option<f64>,
        /// Outward push for maximal-cusps; 0 keeps P and Q on the sides.
        #[arg(long)]
        eps: Option<f64>,
        /// Vertex noise of the random generator, relative to side length.
        #[arg(long)]
        noise: Option<f64>,
        #[arg(long)]
        max_retries: Option<usize>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run the invariant suite.
    Verify {
        input: PathBuf,
        /// Brute-force chords per hyperbolic arc.
        #[arg(long, default_value_t = 16)]
        samples: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Random,
    Symmetric,
    SkewSymmetric,
    MaximalCusps,
    RegularAugmented,
}

enum Failure {
    Usage(String),
    /// Validation failure; the optional report goes to stdout.
    Invalid(String, Option<Value>),
}

type CmdResult = Result<Value, Failure>;

fn invalid(e: impl ToString) -> Failure {
    Failure::Invalid(e.to_string(), None)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let human = cli.human;
    match run(cli) {
        Ok(report) => {
            print_report(&report, human);
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Invalid(msg, report)) => {
            let report = report.unwrap_or_else(|| json!({ "ok": false, "error": msg }));
            print_report(&report, human);
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn print_report(report: &Value, human: bool) {
    let text = if human {
        human::render(report)
    } else {
        serde_json::to_string_pretty(report).expect("reports serialize") + "\n"
    };
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = std::io::stdout().write_all(text.as_bytes());
}

fn run(cli: Cli) -> CmdResult {
    let strict = cli.strict;
    match cli.command {
        Command::Check { input } => check(&input),
        Command::Augment { input, output } => augment(&input, &output),
        Command::Envelope {
            input,
            svg,
            json,
            arc_samples,
        } => envelope(&input, svg.as_deref(), json.as_deref(), arc_samples, strict),
        Command::Cusps { input } => cusps(&input, strict),
        Command::Family {
            input,
            c,
            output,
            interval,
        } => family(&input, c, output.as_deref(), interval),
        Command::Generate {
            kind,
            n,
            seed,
            c,
            eps,
            noise,
            max_retries,
            output,
        } => {
            let kind = match kind {
                Kind::Random => GeneratorKind::Random,
                Kind::Symmetric => GeneratorKind::Symmetric,
                Kind::SkewSymmetric => GeneratorKind::SkewSymmetric {
                    c: c.unwrap_or_else(|| default_skew_c(n)),
                },
                Kind::MaximalCusps => GeneratorKind::MaximalCusps { eps, base_c: c },
                Kind::RegularAugmented => GeneratorKind::RegularAugmented { sides: n },
            };
            let mut config = GeneratorConfig::new(kind, n, seed);
            if let Some(x) = noise {
                config.noise = x;
            }
            if let Some(r) = max_retries {
                config.max_retries = r;
            }
            generate_cmd(&config, &output)
        }
        Command::Verify { input, samples } => verify(&input, samples),
    }
}

fn load(path: &Path) -> Result<PolygonDocument, Failure> {
    let bytes = fs::read(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    read_polygon(&bytes).map_err(invalid)
}

fn save(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| invalid(format!("cannot write {}: {e}", path.display())))
}

/// The document as a half-area polygon, augmenting it (with a notice) unless
/// `strict`.
fn load_half_area(
    path: &Path,
    strict: bool,
) -> Result<(PolygonDocument, HalfAreaPolygon, bool), Failure> {
    let doc = load(path)?;
    let poly = doc.to_polygon().map_err(invalid)?;
    if poly.len() % 2 == 0 && poly.len() >= 4 {
        if let Ok(h) = HalfAreaPolygon::new(poly.clone()) {
            return Ok((doc, h, false));
        }
    }
    if strict {
        return Err(invalid(format!(
            "{} is not a half-area polygon (--strict)",
            path.display()
        )));
    }
    let h = augment_to_half_area(&poly).map_err(invalid)?;
    eprintln!(
        "notice: {} is not half-area; augmented from {} to {} vertices",
        path.display(),
        poly.len(),
        h.polygon().len()
    );
    Ok((doc, h, true))
}

fn check(input: &Path) -> CmdResult {
    let doc = load(input)?;
    let poly = doc.to_polygon().map_err(invalid)?;
    let mut report = json!({
        "vertices": poly.len(),
        "area": poly.area(),
        "reversed_from_clockwise": doc.was_reversed(),
    });
    if poly.len() % 2 != 0 || poly.len() < 4 {
        report["half_area"] = json!(false);
        report["reason"] = json!("vertex count is not an even number >= 4");
        return Err(Failure::Invalid(
            "not a half-area polygon".into(),
            Some(report),
        ));
    }
    let r = is_half_area(&poly).map_err(invalid)?;
    let oracle = chord_oracle_holds(&poly).map_err(invalid)?;
    report["half_area"] = json!(r.is_half_area);
    report["chord_oracle"] = json!(oracle);
    report["threshold"] = json!(r.threshold);
    report["central_brackets"] = json!(r.central_brackets);
    report["residuals"] = json!(r.residuals);
    report["max_residual"] = json!(r.max_residual());
    if !r.is_half_area || !oracle {
        return Err(Failure::Invalid(
            "not a half-area polygon".into(),
            Some(report),
        ));
    }
    let h = HalfAreaPolygon::new(poly).map_err(invalid)?;
    report["n"] = json!(h.n());
    report["classification"] = match classify_symmetry(&h) {
        Ok(s) => serde_json::to_value(s).expect("serializes"),
        Err(e) => json!({ "error": e.to_string() }),
    };
    Ok(report)
}

fn augment(input: &Path, output: &Path) -> CmdResult {
    let doc = load(input)?;
    let poly = doc.to_polygon().map_err(invalid)?;
    let h = augment_to_half_area(&poly).map_err(invalid)?;
    let mut out = PolygonDocument::from_points(doc.name.clone(), h.polygon().vertices());
    out.set_meta("augmented_from_vertices", poly.len());
    save(output, &write_polygon(&out))?;
    Ok(json!({
        "input_vertices": poly.len(),
        "output_vertices": h.polygon().len(),
        "output": output.display().to_string(),
    }))
}

fn envelope(
    input: &Path,
    svg: Option<&Path>,
    json_out: Option<&Path>,
    arc_samples: usize,
    strict: bool,
) -> CmdResult {
    let (_, h, augmented) = load_half_area(input, strict)?;
    let env = EnvelopeSet::compute(&h).map_err(invalid)?;
    let cusps = detect_cusps(&h);
    let report = json!({
        "augmented": augmented,
        "n": h.n(),
        "vertices": h.polygon().vertices(),
        "envelope": env,
        "cusp_count": cusps.count,
        "classification": classify_symmetry(&h).ok(),
    });
    if let Some(path) = json_out {
        let mut text = serde_json::to_vec_pretty(&report).expect("serializes");
        text.push(b'\n');
        save(path, &text)?;
    }
    if let Some(path) = svg {
        let opts = RenderOptions {
            arc_samples,
            ..RenderOptions::default()
        };
        let text = render_svg(&h, &env, &opts).map_err(|e| Failure::Usage(e.to_string()))?;
        save(path, text.as_bytes())?;
    }
    Ok(report)
}

fn cusps(input: &Path, strict: bool) -> CmdResult {
    let (_, h, augmented) = load_half_area(input, strict)?;
    let c = detect_cusps(&h);
    let cusp_vertices: Vec<usize> = (0..h.n()).filter(|&i| c.flags[i]).collect();
    let mut report = json!({
        "augmented": augmented,
        "n": h.n(),
        "count": c.count,
        "odd": c.odd,
        "cusp_vertices": cusp_vertices,
        "degenerate": c.degenerate,
    });
    match cusp_criteria(&h) {
        Ok(r) => {
            report["criteria_agree"] = json!(r.all_agree());
            if !r.all_agree() {
                report["criteria"] = serde_json::to_value(&r.vertices).expect("serializes");
                return Err(Failure::Invalid(
                    "cusp criteria disagree".into(),
                    Some(report),
                ));
            }
        }
        Err(e) => report["criteria_error"] = json!(e.to_string()),
    }
    Ok(report)
}

fn family(input: &Path, c: Option<f64>, output: Option<&Path>, interval: bool) -> CmdResult {
    if c.is_none() && !interval {
        return Err(Failure::Usage(
            "family needs either -c C -o OUT or --interval".into(),
        ));
    }
    let doc = load(input)?;
    let h = HalfAreaPolygon::new(doc.to_polygon().map_err(invalid)?).map_err(invalid)?;
    let f = InverseFamily::new(h);
    let (lo, hi) = f.valid_c_interval;
    if interval {
        return Ok(json!({ "c_lo": lo, "c_hi": hi }));
    }
    let c = c.expect("checked above");
    let member = family_member(&f, c).map_err(invalid)?;
    let mut out = PolygonDocument::from_points(doc.name.clone(), member.polygon().vertices());
    out.set_meta("family_c", c);
    save(
        output.expect("clap requires -o with -c"),
        &write_polygon(&out),
    )?;
    Ok(json!({ "c": c, "c_lo": lo, "c_hi": hi, "vertices": member.polygon().len() }))
}

fn generate_cmd(config: &GeneratorConfig, output: &Path) -> CmdResult {
    config
        .validate()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let h = generate(config).map_err(invalid)?;
    let class = classify_symmetry(&h).ok();
    let mut doc = PolygonDocument::from_points(None, h.polygon().vertices());
    doc.set_meta("seed", config.seed);
    doc.set_meta("n", config.n);
    doc.set_meta(
        "generator",
        serde_json::to_value(config.kind).expect("serializes"),
    );
    doc.set_meta(
        "classification",
        serde_json::to_value(class).expect("serializes"),
    );
    save(output, &write_polygon(&doc))?;
    Ok(json!({
        "output": output.display().to_string(),
        "vertices": h.polygon().len(),
        "seed": config.seed,
        "classification": class,
    }))
}

fn verify(input: &Path, samples: usize) -> CmdResult {
    let doc = load(input)?;
    let h = HalfAreaPolygon::new(doc.to_polygon().map_err(invalid)?).map_err(invalid)?;
    let r = run_invariant_suite(&h, samples);
    let pass = r.all_pass();
    let report = json!({ "pass": pass, "checks": r.checks });
    if pass {
        Ok(report)
    } else {
        Err(Failure::Invalid(
            "invariant suite failed".into(),
            Some(report),
        ))
    }
}
