mod commands;
mod formats;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eqpal::color_space::LabColor;
use eqpal::evaluation::CountRange;
use eqpal::schemes::{GamutMode, Radius, Scheme};

/// Perceptually uniform categorical palettes on a CIELAB sphere.
#[derive(Debug, Parser)]
#[command(name = "eqpal", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a palette and write it as JSON, a hex list or a GIMP palette.
    Generate(GenerateArgs),
    /// Sweep palette sizes and report minimum pairwise contrast per scheme.
    Eval(EvalArgs),
    /// Solve the sphere problem for 4, 6, 8, 12 and 20 charges and compare
    /// the minimum separations with the reference table.
    VerifyPlatonic(VerifyArgs),
    /// Render a palette as a grid of swatches on mid-gray.
    Swatch(SwatchArgs),
    /// Render a palette as a pie chart on mid-gray.
    Pie(PieArgs),
    /// Plot palette colors in Lab space.
    Scatter(ScatterArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GamutArg {
    /// Shrink the sphere to the largest one inside the sRGB gamut.
    Inscribed,
    /// Keep the radius and pull out-of-gamut colors toward the center.
    Clip,
}

impl From<GamutArg> for GamutMode {
    fn from(g: GamutArg) -> Self {
        match g {
            GamutArg::Inscribed => GamutMode::InscribedSphere,
            GamutArg::Clip => GamutMode::ClipToGamut,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PaletteFormat {
    Json,
    Hex,
    Gpl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProjectionArg {
    /// a* to the right, b* up.
    Ab,
    /// Oblique view with L* pointing up.
    ThreeQuarter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricArg {
    Cie76,
    Ciede2000,
}

fn parse_lab(s: &str) -> Result<LabColor, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [l, a, b] = parts.as_slice() else {
        return Err(format!("expected L,a,b but got {s:?}"));
    };
    let num = |t: &str| t.parse::<f64>().map_err(|_| format!("not a number: {t:?}"));
    LabColor::new(num(l)?, num(a)?, num(b)?).map_err(|e| e.to_string())
}

/// Shape of the palette apart from its size.
#[derive(Debug, Args)]
struct PaletteOptions {
    #[arg(long, default_value = "equilibrium")]
    scheme: Scheme,
    /// Sphere radius in ΔE*ab, or `auto` for the largest in-gamut sphere.
    #[arg(long, default_value = "auto")]
    radius: Radius,
    #[arg(long, value_enum, default_value = "inscribed")]
    gamut: GamutArg,
    /// Sphere center as L,a,b.
    #[arg(long, default_value = "50,0,0", value_parser = parse_lab, allow_hyphen_values = true)]
    center: LabColor,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run the solver on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// Number of colors.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=1000))]
    n: u64,
    #[command(flatten)]
    palette: PaletteOptions,
    #[arg(long, value_enum, default_value = "json")]
    format: PaletteFormat,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Schemes to evaluate, comma separated.
    #[arg(
        long = "scheme",
        value_delimiter = ',',
        default_value = "equilibrium,harmonic"
    )]
    schemes: Vec<Scheme>,
    /// Contrast metrics, comma separated.
    #[arg(
        long = "metric",
        value_enum,
        value_delimiter = ',',
        default_value = "cie76"
    )]
    metrics: Vec<MetricArg>,
    /// Palette sizes as start:end or start:end:stride, inclusive.
    #[arg(long, default_value = "2:100")]
    n: CountRange,
    #[arg(long, default_value = "auto")]
    radius: Radius,
    #[arg(long, value_enum, default_value = "inscribed")]
    gamut: GamutArg,
    #[arg(long, default_value = "50,0,0", value_parser = parse_lab, allow_hyphen_values = true)]
    center: LabColor,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    sequential: bool,
    /// Directory for the `<scheme>_<metric>.csv` files.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Also draw the curves as an SVG chart; needs a single metric.
    #[arg(long)]
    out_svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Largest accepted absolute difference in minimum separation.
    #[arg(long, default_value_t = 1e-3)]
    tolerance: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    sequential: bool,
}

/// Where a rendered palette comes from.
#[derive(Debug, Args)]
struct Source {
    /// Palette JSON written by `generate`.
    #[arg(long, conflicts_with = "n")]
    from: Option<PathBuf>,
    /// Number of colors when generating inline.
    #[arg(long, required_unless_present = "from", value_parser = clap::value_parser!(u64).range(1..=1000))]
    n: Option<u64>,
    #[command(flatten)]
    palette: PaletteOptions,
    /// SVG output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SwatchArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    columns: u64,
}

#[derive(Debug, Args)]
struct PieArgs {
    #[command(flatten)]
    source: Source,
    /// Relative sector sizes, comma separated, one per color.
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
struct ScatterArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, value_enum, default_value = "ab")]
    projection: ProjectionArg,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                e.exit();
            }
            let msg = e.render().to_string();
            let first = msg
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ");
            return commands::CliError::Usage(first.to_string()).report();
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => e.report(),
    }
}
