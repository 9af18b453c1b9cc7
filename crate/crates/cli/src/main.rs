mod expr;
mod input;
mod report;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sphericity_core::curvature::{propagate_check, pseudospherical_verdict, Verdict};
use sphericity_core::hypersurface::{
    levi_det_at, levi_form_at, levi_locus_sample, levi_matrix, recenter, signature_at, LatticeSpec, SurfacePoint,
};
use sphericity_core::pde::associate_system;
use sphericity_core::Error;

use expr::{parse_equation, parse_expr, parse_list, ParseError};
use input::{build_graph, build_point, rational, Input};

#[derive(Parser)]
#[command(
    name = "sphericity",
    version,
    about = "Decide local (pseudo)sphericity of real hypersurfaces from a defining equation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    /// Defining equation: `w = …` in z, conj(z), conj(w), or `v = …` in x, y, u.
    equation: String,
    /// Truncation order of the computation.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..=200))]
    order: u32,
    /// CR dimension n, when it cannot be read off the variable names.
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Treat the right-hand side as a jet known through --order rather than a polynomial.
    #[arg(long)]
    jet: bool,
    /// Include wall-clock timing (makes the output non-reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Pseudosphericity verdict at a point.
    Check {
        #[command(flatten)]
        common: Common,
        /// Point "z1, …, zn, w" on the hypersurface (default: origin).
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// Include the obstruction series in the report.
        #[arg(long)]
        components: bool,
    },
    /// The associated second-order system w_{z_a z_b} = Φ_ab(z, w, w_z).
    Associate {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
    /// Levi determinant, nondegeneracy, and an optional numeric sample of the degenerate locus.
    Levi {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// Sample |Δ| on a lattice of points of the hypersurface.
        #[arg(long)]
        sample: bool,
        /// Lattice spacing of the sample.
        #[arg(long, default_value = "1/2")]
        grid_step: String,
        /// Lowest lattice index on every real axis.
        #[arg(long, default_value_t = -2, allow_hyphen_values = true)]
        grid_min: i64,
        /// Highest lattice index on every real axis.
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        grid_max: i64,
        /// Points with |Δ| below this are flagged.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Write the sample as CSV (implies --sample).
        #[arg(long)]
        locus_csv: Option<PathBuf>,
    },
    /// Signature (k, n − k) of the Levi form at a point.
    Signature {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
    /// Verdicts at two points and the numerator transport identity at each.
    Propagate {
        #[command(flatten)]
        common: Common,
        /// Give exactly two points.
        #[arg(long, allow_hyphen_values = true, required = true)]
        point: Vec<String>,
    },
}

/// Everything that ends a run without a report.
enum Failure {
    Syntax { source: String, err: ParseError },
    Pipeline(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Pipeline(e)
    }
}

impl Failure {
    fn code(&self) -> &'static str {
        match self {
            Failure::Syntax { .. } => "syntax",
            Failure::Pipeline(e) => e.code(),
            Failure::Io(_) => "io",
        }
    }

    fn exit(&self) -> u8 {
        match self {
            Failure::Pipeline(Error::LeviDegenerate) => 2,
            _ => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Syntax { source, err } => err.render(source),
            Failure::Pipeline(e) => e.to_string(),
            Failure::Io(m) => m.clone(),
        }
    }
}

struct Outcome {
    json: Value,
    text: String,
    exit: u8,
}

fn syntax(source: &str, err: ParseError) -> Failure {
    Failure::Syntax {
        source: source.to_string(),
        err,
    }
}

fn load(common: &Common) -> Result<(Input, String), Failure> {
    let eq = parse_equation(&common.equation).map_err(|e| syntax(&common.equation, e))?;
    let input = build_graph(&eq, common.dim, common.order, common.jet)?;
    Ok((input, eq.to_string()))
}

fn load_point(text: Option<&str>, input: &Input) -> Result<SurfacePoint, Failure> {
    match text {
        None => Ok(SurfacePoint::origin(input.n)),
        Some(t) => {
            let coords = parse_list(t).map_err(|e| syntax(t, e))?;
            Ok(build_point(&coords, &input.graph)?)
        }
    }
}

fn header(command: &str, common: &Common, input: &Input, canonical: &str) -> Value {
    json!({
        "schema_version": report::SCHEMA_VERSION,
        "tool": {"name": "sphericity", "version": env!("CARGO_PKG_VERSION")},
        "command": command,
        "input": {
            "equation": canonical,
            "form": input.form.name(),
            "n": input.n,
            "exact": input.graph.is_exact(),
            "order": common.order,
        },
    })
}

fn text_header(input: &Input, canonical: &str, common: &Common) -> String {
    format!(
        "equation: {canonical}\nform: {}, n = {}, {}, order {}\n",
        input.form.name(),
        input.n,
        if input.graph.is_exact() {
            "exact polynomial"
        } else {
            "jet"
        },
        common.order
    )
}

fn check(common: &Common, point: Option<&str>, components: bool) -> Result<Outcome, Failure> {
    let (input, canonical) = load(common)?;
    let p = load_point(point, &input)?;
    let det = levi_det_at(&input.graph, &p)?;
    let rep = pseudospherical_verdict(&input.graph, &p, common.order)?;
    let mut json = header("check", common, &input, &canonical);
    json["point"] = report::point(&p);
    json["levi"] = json!({"determinant_at_point": report::coeff(&det), "nondegenerate": rep.levi_nondegenerate});
    json["obstruction"] = report::obstruction(&rep, components);
    let mut text = text_header(&input, &canonical, common);
    let _ = writeln!(text, "point: {}", report::point_text(&p));
    let _ = writeln!(text, "Levi determinant at point: {det}");
    if let Some((k, l)) = rep.signature {
        let _ = writeln!(text, "signature: ({k}, {l})");
    }
    let _ = writeln!(text, "verdict: {}", report::verdict_text(&rep));
    if components {
        for (l, s) in &rep.components {
            let _ = writeln!(text, "component {l}: {s}");
        }
    }
    for note in &rep.notes {
        let _ = writeln!(text, "note: {note}");
    }
    let exit = if rep.verdict == Verdict::NotApplicableLeviDegenerate {
        2
    } else {
        0
    };
    Ok(Outcome { json, text, exit })
}

fn associate(common: &Common, point: Option<&str>) -> Result<Outcome, Failure> {
    let (input, canonical) = load(common)?;
    let p = load_point(point, &input)?;
    let local = recenter(&input.graph, &p)?.with_order(common.order);
    let sys = associate_system(&local)?;
    let n = sys.n();
    let mut entries = Vec::new();
    let mut text = text_header(&input, &canonical, common);
    let _ = writeln!(text, "point: {}", report::point_text(&p));
    let _ = writeln!(text, "variables: {}", sys.vars().names().join(", "));
    if sys.jet_shift().iter().any(|c| !num_traits::Zero::is_zero(c)) {
        let shift: Vec<String> = sys.jet_shift().iter().map(ToString::to_string).collect();
        let _ = writeln!(text, "p_k measures w_(z_k) minus ({})", shift.join(", "));
    }
    for a in 0..n {
        for b in a..n {
            entries.push(json!({"index": [a + 1, b + 1], "series": report::series(sys.phi(a, b))}));
            let _ = writeln!(text, "Phi[{},{}] = {}", a + 1, b + 1, sys.phi(a, b));
        }
    }
    let mut json = header("associate", common, &input, &canonical);
    json["point"] = report::point(&p);
    json["system"] = json!({
        "variables": sys.vars().names().to_vec(),
        "certified_order": sys.order(),
        "jet_shift": sys.jet_shift().iter().map(report::coeff).collect::<Vec<_>>(),
        "entries": entries,
    });
    Ok(Outcome { json, text, exit: 0 })
}

struct SampleOptions<'a> {
    enabled: bool,
    step: &'a str,
    lower: i64,
    upper: i64,
    tol: f64,
    csv: Option<&'a PathBuf>,
}

fn levi(common: &Common, point: Option<&str>, sample: SampleOptions<'_>) -> Result<Outcome, Failure> {
    let (input, canonical) = load(common)?;
    let p = load_point(point, &input)?;
    let local = recenter(&input.graph, &p)?.with_order(common.order);
    let data = levi_matrix(&local)?;
    let det0 = data.det.constant_term();
    let nondegenerate = !num_traits::Zero::is_zero(&det0);
    let mut json = header("levi", common, &input, &canonical);
    json["point"] = report::point(&p);
    json["levi"] = json!({
        "determinant": report::series(&data.det),
        "determinant_at_point": report::coeff(&det0),
        "nondegenerate": nondegenerate,
    });
    let mut text = text_header(&input, &canonical, common);
    let _ = writeln!(text, "point: {}", report::point_text(&p));
    let _ = writeln!(text, "Levi determinant near the point: {}", data.det);
    let _ = writeln!(
        text,
        "at the point: {det0} ({})",
        if nondegenerate { "nondegenerate" } else { "degenerate" }
    );
    if sample.enabled || sample.csv.is_some() {
        let step_expr = parse_expr(sample.step).map_err(|e| syntax(sample.step, e))?;
        let grid = LatticeSpec {
            step: rational(&step_expr)?,
            lower: sample.lower,
            upper: sample.upper,
        };
        let points = levi_locus_sample(&input.graph, &grid, sample.tol)?;
        let flagged: Vec<&sphericity_core::hypersurface::LocusSample> = points.iter().filter(|s| s.flagged).collect();
        json["locus"] = json!({
            "step": report::coeff(&grid.step.clone().into()),
            "lower": grid.lower,
            "upper": grid.upper,
            "tolerance": sample.tol,
            "sampled": points.len(),
            "flagged": flagged.len(),
            "advisory": true,
        });
        let _ = writeln!(
            text,
            "locus sample (floating point, advisory): {} of {} lattice points with |Δ| < {}",
            flagged.len(),
            points.len(),
            sample.tol
        );
        if let Some(path) = sample.csv {
            write_csv(path, input.n, &points).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            let _ = writeln!(text, "sample written to {}", path.display());
        }
    }
    Ok(Outcome { json, text, exit: 0 })
}

fn write_csv(
    path: &PathBuf,
    n: usize,
    points: &[sphericity_core::hypersurface::LocusSample],
) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_path(path)?;
    let mut head: Vec<String> = (1..=n).map(|k| format!("x{k}")).collect();
    head.extend((1..=n).map(|k| format!("y{k}")));
    head.extend(["u", "v", "abs_delta", "flagged"].map(String::from));
    w.write_record(&head)?;
    for s in points {
        let mut row: Vec<String> = s.coords.iter().map(|c| c.to_string()).collect();
        row.push(s.abs_delta.to_string());
        row.push(s.flagged.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn signature(common: &Common, point: Option<&str>) -> Result<Outcome, Failure> {
    let (input, canonical) = load(common)?;
    let p = load_point(point, &input)?;
    let form = levi_form_at(&input.graph, &p)?;
    let (k, l) = signature_at(&input.graph, &p)?;
    let mut json = header("signature", common, &input, &canonical);
    json["point"] = report::point(&p);
    json["signature"] = json!([k, l]);
    json["levi_form"] = form
        .iter()
        .map(|row| row.iter().map(report::coeff).collect::<Vec<_>>())
        .collect();
    let mut text = text_header(&input, &canonical, common);
    let _ = writeln!(text, "point: {}", report::point_text(&p));
    let _ = writeln!(text, "signature: ({k}, {l})");
    Ok(Outcome { json, text, exit: 0 })
}

fn propagate(common: &Common, points: &[String]) -> Result<Outcome, Failure> {
    let (input, canonical) = load(common)?;
    if points.len() != 2 {
        return Err(Failure::Pipeline(Error::Dimension(format!(
            "propagate needs exactly two --point values, got {}",
            points.len()
        ))));
    }
    let p = load_point(Some(&points[0]), &input)?;
    let q = load_point(Some(&points[1]), &input)?;
    let rep = propagate_check(&input.graph, &p, &q, common.order)?;
    let mut json = header("propagate", common, &input, &canonical);
    json["points"] = json!([report::point(&p), report::point(&q)]);
    json["transport"] = json!([report::transport(&rep.transport_p), report::transport(&rep.transport_q)]);
    json["reports"] = json!([
        report::obstruction(&rep.report_p, false),
        report::obstruction(&rep.report_q, false)
    ]);
    json["verdicts_agree"] = json!(rep.verdicts_agree);
    let mut text = text_header(&input, &canonical, common);
    for (name, pt, t, r) in [
        ("p", &p, &rep.transport_p, &rep.report_p),
        ("q", &q, &rep.transport_q, &rep.report_q),
    ] {
        let _ = writeln!(text, "{name}: {}", report::point_text(pt));
        let _ = writeln!(
            text,
            "  numerator transport through order {}: {}",
            t.order,
            if t.holds { "holds" } else { "FAILS" }
        );
        let _ = writeln!(text, "  verdict: {}", report::verdict_text(r));
    }
    let _ = writeln!(text, "verdicts agree: {}", rep.verdicts_agree);
    Ok(Outcome { json, text, exit: 0 })
}

fn run(cli: &Cli) -> (Result<Outcome, Failure>, &Common) {
    match &cli.command {
        Command::Check {
            common,
            point,
            components,
        } => (check(common, point.as_deref(), *components), common),
        Command::Associate { common, point } => (associate(common, point.as_deref()), common),
        Command::Levi {
            common,
            point,
            sample,
            grid_step,
            grid_min,
            grid_max,
            tol,
            locus_csv,
        } => (
            levi(
                common,
                point.as_deref(),
                SampleOptions {
                    enabled: *sample,
                    step: grid_step,
                    lower: *grid_min,
                    upper: *grid_max,
                    tol: *tol,
                    csv: locus_csv.as_ref(),
                },
            ),
            common,
        ),
        Command::Signature { common, point } => (signature(common, point.as_deref()), common),
        Command::Propagate { common, point } => (propagate(common, point), common),
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(s: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

fn main() -> ExitCode {
    // Exit code 2 is reserved for Levi-degenerate points, so usage errors use 1.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let start = Instant::now();
    let (result, common) = run(&cli);
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    match result {
        Ok(mut out) => {
            match common.format {
                Format::Json => {
                    out.json["exit_code"] = json!(out.exit);
                    if common.timing {
                        out.json["timing_ms"] = json!(elapsed_ms);
                    }
                    emit(&format!(
                        "{}\n",
                        serde_json::to_string_pretty(&out.json).expect("serializable")
                    ));
                }
                Format::Text => {
                    if common.timing {
                        let _ = writeln!(out.text, "time: {elapsed_ms:.1} ms");
                    }
                    emit(&out.text);
                }
            }
            ExitCode::from(out.exit)
        }
        Err(f) => {
            if common.format == Format::Json {
                let v = json!({
                    "schema_version": report::SCHEMA_VERSION,
                    "error": {"code": f.code(), "message": f.message()},
                    "exit_code": f.exit(),
                });
                emit(&format!(
                    "{}\n",
                    serde_json::to_string_pretty(&v).expect("serializable")
                ));
            }
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit())
        }
    }
}
