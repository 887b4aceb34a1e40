//! Palette interchange formats: JSON, flat hex list and GIMP `.gpl`.

use std::fmt::Write as _;

use eqpal::color_space::LabColor;
use eqpal::color_space::SrgbColor;
use eqpal::schemes::{Palette, PaletteColor, PaletteSpec, SphereSummary};
use serde::{Deserialize, Serialize};

/// Rounds to 9 significant digits. Idempotent, so a loaded file re-emits
/// byte for byte.
pub fn sig9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.8e}").parse().unwrap_or(x)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PaletteFile {
    spec: PaletteSpec,
    radius: Option<f64>,
    sphere: Option<SphereSummary>,
    colors: Vec<ColorEntry>,
    metrics: MetricsEntry,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ColorEntry {
    lab: [f64; 3],
    srgb_hex: String,
    in_gamut: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MetricsEntry {
    min_de76: Option<f64>,
    min_de2000: Option<f64>,
}

pub fn to_json(p: &Palette) -> String {
    let mut spec = p.spec().clone();
    spec.center = LabColor::from_array(spec.center.to_array().map(sig9)).unwrap_or(spec.center);
    if let eqpal::schemes::Radius::Fixed(r) = spec.radius {
        spec.radius = eqpal::schemes::Radius::Fixed(sig9(r));
    }
    let file = PaletteFile {
        spec,
        radius: p.radius().map(sig9),
        sphere: p.sphere().map(|s| SphereSummary {
            energy: sig9(s.energy),
            unit_min_distance: sig9(s.unit_min_distance),
            ..*s
        }),
        colors: p
            .colors()
            .iter()
            .map(|c| ColorEntry {
                lab: c.lab.to_array().map(sig9),
                srgb_hex: c.hex(),
                in_gamut: c.in_gamut,
            })
            .collect(),
        metrics: MetricsEntry {
            min_de76: p.min_de76().map(sig9),
            min_de2000: p.min_de2000().map(sig9),
        },
    };
    let mut out = serde_json::to_string_pretty(&file).expect("palette serializes");
    out.push('\n');
    out
}

pub fn from_json(text: &str) -> Result<Palette, String> {
    let file: PaletteFile =
        serde_json::from_str(text).map_err(|e| format!("bad palette JSON: {e}"))?;
    let colors = file
        .colors
        .into_iter()
        .map(|c| {
            let lab = LabColor::from_array(c.lab).map_err(|e| e.to_string())?;
            let srgb = SrgbColor::from_hex(&c.srgb_hex).map_err(|e| e.to_string())?;
            Ok(PaletteColor {
                lab,
                srgb,
                in_gamut: c.in_gamut,
            })
        })
        .collect::<Result<Vec<_>, String>>()?;
    Palette::from_stored(
        colors,
        file.spec,
        file.radius,
        file.sphere,
        file.metrics.min_de76,
        file.metrics.min_de2000,
    )
    .map_err(|e| e.to_string())
}

/// One `#rrggbb` per line.
pub fn to_hex_list(p: &Palette) -> String {
    p.colors().iter().map(|c| c.hex() + "\n").collect()
}

pub fn to_gpl(p: &Palette) -> String {
    let spec = p.spec();
    let mut out = String::from("GIMP Palette\n");
    let _ = writeln!(
        out,
        "Name: eqpal {} n={} seed={}",
        spec.scheme, spec.n, spec.seed
    );
    let _ = writeln!(out, "Columns: 8");
    let _ = writeln!(out, "# gamut_mode={}", spec.gamut_mode.name());
    for (i, c) in p.colors().iter().enumerate() {
        let [r, g, b] = c.srgb.to_rgb8();
        let _ = writeln!(out, "{r:>3} {g:>3} {b:>3}\t{i} {}", c.hex());
    }
    out
}
