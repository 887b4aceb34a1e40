use std::io::{IsTerminal, Write};
use std::path::Path;
use std::process::ExitCode;

use eqpal::equilibrium::{solve, SolverConfig};
use eqpal::evaluation::{contrast_curves, jnd_report};
use eqpal::metrics::ContrastMetric;
use eqpal::parallel::Execution;
use eqpal::render::{self, Projection, SvgDocument};
use eqpal::schemes::{generate_palette, Palette, PaletteSpec};
use eqpal::Error;

use crate::formats;
use crate::{
    Command, EvalArgs, GenerateArgs, MetricArg, PaletteFormat, PaletteOptions, PieArgs,
    ProjectionArg, ScatterArgs, Source, SwatchArgs, VerifyArgs,
};

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or input values; exit code 2.
    Usage(String),
    /// The request was valid but could not be carried out; exit code 1.
    Runtime(String),
}

impl CliError {
    /// Writes a one-line JSON error to stderr and returns the exit code.
    pub fn report(self) -> ExitCode {
        let (kind, message, code) = match self {
            CliError::Usage(m) => ("usage", m, 2),
            CliError::Runtime(m) => ("runtime", m, 1),
        };
        let line = serde_json::json!({ "error": { "kind": kind, "message": message } });
        eprintln!("{line}");
        ExitCode::from(code)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) | Error::CenterOutOfGamut { .. } => {
                CliError::Usage(e.to_string())
            }
            Error::AtCount { ref source, .. }
                if matches!(
                    **source,
                    Error::InvalidInput(_) | Error::CenterOutOfGamut { .. }
                ) =>
            {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

pub fn run(command: Command) -> CliResult {
    match command {
        Command::Generate(a) => generate(a),
        Command::Eval(a) => eval(a),
        Command::VerifyPlatonic(a) => verify_platonic(a),
        Command::Swatch(a) => swatch(a),
        Command::Pie(a) => pie(a),
        Command::Scatter(a) => scatter(a),
    }
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn solver(seed: u64, sequential: bool) -> SolverConfig {
    SolverConfig::default()
        .with_seed(seed)
        .with_execution(execution(sequential))
}

fn spec_for(n: usize, o: &PaletteOptions) -> PaletteSpec {
    PaletteSpec {
        n,
        scheme: o.scheme,
        center: o.center,
        radius: o.radius,
        gamut_mode: o.gamut.into(),
        seed: o.seed,
    }
}

fn build_palette(n: usize, o: &PaletteOptions) -> CliResult<Palette> {
    let spec = spec_for(n, o);
    Ok(generate_palette(&spec, &solver(o.seed, o.sequential))?)
}

fn write_output(out: Option<&Path>, text: &str) -> CliResult {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| CliError::Runtime(format!("cannot write to stdout: {e}")))
        }
    }
}

fn generate(a: GenerateArgs) -> CliResult {
    let palette = build_palette(a.n as usize, &a.palette)?;
    let text = match a.format {
        PaletteFormat::Json => formats::to_json(&palette),
        PaletteFormat::Gpl => formats::to_gpl(&palette),
        PaletteFormat::Hex => {
            eprintln!("seed={}", palette.spec().seed);
            formats::to_hex_list(&palette)
        }
    };
    write_output(a.out.as_deref(), &text)
}

fn metric_of(m: MetricArg) -> ContrastMetric {
    match m {
        MetricArg::Cie76 => ContrastMetric::CIE76,
        MetricArg::Ciede2000 => ContrastMetric::CIEDE2000,
    }
}

fn eval(a: EvalArgs) -> CliResult {
    let mut metrics: Vec<ContrastMetric> = Vec::new();
    for m in a.metrics.iter().copied().map(metric_of) {
        if !metrics.contains(&m) {
            metrics.push(m);
        }
    }
    let mut schemes = a.schemes.clone();
    schemes.sort();
    schemes.dedup();
    if a.out_svg.is_some() && metrics.len() != 1 {
        return Err(CliError::Usage(
            "--out-svg draws one metric; pass a single --metric".into(),
        ));
    }
    std::fs::create_dir_all(&a.out_dir)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", a.out_dir.display())))?;

    let defaults = PaletteSpec {
        n: a.n.start,
        scheme: schemes[0],
        center: a.center,
        radius: a.radius,
        gamut_mode: a.gamut.into(),
        seed: a.seed,
    };
    let cfg = solver(a.seed, a.sequential);
    let mut by_metric: Vec<Vec<_>> = vec![Vec::new(); metrics.len()];
    let mut summary = String::new();
    for &scheme in &schemes {
        let reports = contrast_curves(scheme, &metrics, a.n, &defaults, &cfg)?;
        for (k, report) in reports.into_iter().enumerate() {
            let path = a
                .out_dir
                .join(format!("{}_{}.csv", scheme, report.metric().name()));
            write_output(Some(&path), &report.to_csv())?;
            summary.push_str(&format!(
                "{}\n  csv: {}\n",
                jnd_report(&report),
                path.display()
            ));
            by_metric[k].push(report);
        }
    }
    if let Some(path) = &a.out_svg {
        let chart = render::render_contrast_chart(&by_metric[0])?;
        write_output(Some(path), chart.as_str())?;
        summary.push_str(&format!("chart: {}\n", path.display()));
    }
    summary.push_str(&format!("seed={}\n", a.seed));
    write_output(None, &summary)
}

struct PlatonicRow {
    n: usize,
    solid: &'static str,
    edge: f64,
    expected: f64,
    /// The Thomson minimum is not this solid.
    diverges: bool,
}

#[allow(clippy::approx_constant)]
const PLATONIC: [PlatonicRow; 5] = [
    PlatonicRow {
        n: 4,
        solid: "tetrahedron",
        edge: 1.632993161855452,
        expected: 1.63299,
        diverges: false,
    },
    PlatonicRow {
        n: 6,
        solid: "octahedron",
        edge: std::f64::consts::SQRT_2,
        expected: 1.41421,
        diverges: false,
    },
    PlatonicRow {
        n: 8,
        solid: "cube",
        edge: 1.1547005383792515,
        expected: 1.1712,
        diverges: true,
    },
    PlatonicRow {
        n: 12,
        solid: "icosahedron",
        edge: 1.0514622242382672,
        expected: 1.05146,
        diverges: false,
    },
    PlatonicRow {
        n: 20,
        solid: "dodecahedron",
        edge: 0.7136441795461799,
        expected: 0.782961,
        diverges: true,
    },
];

fn verify_platonic(a: VerifyArgs) -> CliResult {
    if !(a.tolerance.is_finite() && a.tolerance > 0.0) {
        return Err(CliError::Usage(format!(
            "tolerance must be positive, got {}",
            a.tolerance
        )));
    }
    let cfg = solver(a.seed, a.sequential);
    let color = std::io::stdout().is_terminal() && std::env::var_os("NO_COLOR").is_none();
    let paint = |ok: bool| -> String {
        let word = if ok { "ok" } else { "MISS" };
        match (color, ok) {
            (false, _) => word.to_string(),
            (true, true) => format!("\x1b[32m{word}\x1b[0m"),
            (true, false) => format!("\x1b[31m{word}\x1b[0m"),
        }
    };

    let mut out = format!(
        "{:>3}  {:<13} {:>10} {:>11} {:>10} {:>9}  {}\n",
        "n", "solid", "solid_edge", "expected", "achieved", "abs_diff", "status"
    );
    let mut misses = 0;
    for row in &PLATONIC {
        let config = solve(row.n, &cfg)?;
        let achieved = config.min_distance();
        let diff = (achieved - row.expected).abs();
        let ok = diff <= a.tolerance;
        if !ok {
            misses += 1;
        }
        let expected = format!(
            "{:.6}{}",
            row.expected,
            if row.diverges { "*" } else { " " }
        );
        out.push_str(&format!(
            "{:>3}  {:<13} {:>10.6} {:>11} {:>10.6} {:>9.1e}  {}\n",
            row.n,
            row.solid,
            row.edge,
            expected,
            achieved,
            diff,
            paint(ok)
        ));
    }
    out.push_str(
        "* the equilibrium is not this solid; expected is the known minimum-energy value\n",
    );
    out.push_str(&format!("tolerance={} seed={}\n", a.tolerance, a.seed));
    write_output(None, &out)?;
    if misses > 0 {
        return Err(CliError::Runtime(format!(
            "{misses} configuration(s) outside tolerance {}",
            a.tolerance
        )));
    }
    Ok(())
}

fn load_source(s: &Source) -> CliResult<Palette> {
    match (&s.from, s.n) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", path.display())))?;
            formats::from_json(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
        }
        (None, Some(n)) => build_palette(n as usize, &s.palette),
        (None, None) => Err(CliError::Usage("pass --n or --from".into())),
    }
}

fn emit_svg(s: &Source, doc: &SvgDocument) -> CliResult {
    write_output(s.out.as_deref(), doc.as_str())
}

fn swatch(a: SwatchArgs) -> CliResult {
    let palette = load_source(&a.source)?;
    emit_svg(
        &a.source,
        &render::render_swatches(&palette, a.columns as usize),
    )
}

fn pie(a: PieArgs) -> CliResult {
    let palette = load_source(&a.source)?;
    let doc = render::render_pie(&palette, a.weights.as_deref())?;
    emit_svg(&a.source, &doc)
}

fn scatter(a: ScatterArgs) -> CliResult {
    let palette = load_source(&a.source)?;
    let projection = match a.projection {
        ProjectionArg::Ab => Projection::AbPlane,
        ProjectionArg::ThreeQuarter => Projection::ThreeQuarter,
    };
    emit_svg(&a.source, &render::render_lab_scatter(&palette, projection))
}
