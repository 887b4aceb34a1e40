//! Concrete palettes: the equilibrium scheme and the hue-wheel baseline.
//!
//! An equilibrium palette takes the unit-sphere charge configuration for
//! `n`, scales it by a radius and centers it on a Lab color (mid-gray by
//! default). Unit vector components map to (L, a, b) in that order. With the
//! default inscribed radius every color is displayable and exactly
//! equidistant from the center.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::color_space::{is_in_gamut, lab_to_srgb, srgb_to_lab, LabColor, SrgbColor, WhitePoint};
use crate::equilibrium::{self, SolverConfig, SphereConfiguration, Vec3};
use crate::error::{Error, Result};
use crate::metrics::{min_pairwise_contrast, ContrastMetric};

/// Bisection tolerance, in Lab units, for radius and clipping searches.
pub const RADIUS_TOLERANCE: f64 = 0.01;

/// Icosphere subdivision level of the inscribed-radius probe (2562 directions).
pub const PROBE_SUBDIVISIONS: u32 = 4;

/// Any ray from an in-gamut center leaves the gamut before this distance.
const MAX_SEARCH_RADIUS: f64 = 256.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Equilibrium,
    Harmonic,
}

impl Scheme {
    pub const fn name(&self) -> &'static str {
        match self {
            Scheme::Equilibrium => "equilibrium",
            Scheme::Harmonic => "harmonic",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "equilibrium" => Ok(Scheme::Equilibrium),
            "harmonic" => Ok(Scheme::Harmonic),
            other => Err(Error::invalid(format!("unknown scheme {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GamutMode {
    /// Shrink the sphere until it fits inside the sRGB gamut.
    #[default]
    InscribedSphere,
    /// Keep the requested radius and pull stray colors toward the center.
    ClipToGamut,
}

impl GamutMode {
    pub const fn name(&self) -> &'static str {
        match self {
            GamutMode::InscribedSphere => "inscribed_sphere",
            GamutMode::ClipToGamut => "clip_to_gamut",
        }
    }
}

/// Sphere radius in Lab units; `Auto` picks the largest inscribed sphere.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Radius {
    #[default]
    Auto,
    Fixed(f64),
}

impl Serialize for Radius {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Radius::Auto => s.serialize_str("auto"),
            Radius::Fixed(r) => s.serialize_f64(*r),
        }
    }
}

impl<'de> Deserialize<'de> for Radius {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Number(f64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Number(r) => Ok(Radius::Fixed(r)),
            Repr::Text(t) if t == "auto" => Ok(Radius::Auto),
            Repr::Text(t) => Err(serde::de::Error::custom(format!(
                "radius must be a number or \"auto\", got {t:?}"
            ))),
        }
    }
}

impl FromStr for Radius {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(Radius::Auto);
        }
        s.parse::<f64>()
            .map(Radius::Fixed)
            .map_err(|_| Error::invalid(format!("radius must be a number or \"auto\", got {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaletteSpec {
    pub n: usize,
    pub scheme: Scheme,
    pub center: LabColor,
    pub radius: Radius,
    pub gamut_mode: GamutMode,
    pub seed: u64,
}

impl PaletteSpec {
    pub fn new(n: usize, scheme: Scheme) -> Self {
        Self {
            n,
            scheme,
            center: LabColor::MID_GRAY,
            radius: Radius::Auto,
            gamut_mode: GamutMode::InscribedSphere,
            seed: 0,
        }
    }

    pub fn with_count(&self, n: usize) -> Self {
        Self { n, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::invalid("palette needs at least one color"));
        }
        if let Radius::Fixed(r) = self.radius {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::invalid(format!("radius must be positive, got {r}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PaletteColor {
    pub lab: LabColor,
    /// Clamped display value.
    pub srgb: SrgbColor,
    pub in_gamut: bool,
}

impl PaletteColor {
    pub fn from_lab(lab: LabColor, wp: WhitePoint) -> Self {
        let (srgb, in_gamut) = lab_to_srgb(lab, wp);
        Self {
            lab,
            srgb,
            in_gamut,
        }
    }

    pub fn hex(&self) -> String {
        self.srgb.to_hex()
    }
}

/// Solver outcome recorded alongside an equilibrium palette.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereSummary {
    pub energy: f64,
    pub unit_min_distance: f64,
    pub iterations: usize,
    pub converged: bool,
    pub seed: u64,
}

impl From<&SphereConfiguration> for SphereSummary {
    fn from(s: &SphereConfiguration) -> Self {
        Self {
            energy: s.energy(),
            unit_min_distance: s.min_distance(),
            iterations: s.iterations(),
            converged: s.converged(),
            seed: s.seed(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Palette {
    colors: Vec<PaletteColor>,
    spec: PaletteSpec,
    radius: Option<f64>,
    sphere: Option<SphereSummary>,
    min_de76: Option<f64>,
    min_de2000: Option<f64>,
}

impl Palette {
    fn assemble(
        colors: Vec<PaletteColor>,
        spec: PaletteSpec,
        radius: Option<f64>,
        sphere: Option<SphereSummary>,
    ) -> Self {
        let labs: Vec<LabColor> = colors.iter().map(|c| c.lab).collect();
        let min_de76 = min_pairwise_contrast(&labs, ContrastMetric::CIE76).ok();
        let min_de2000 = min_pairwise_contrast(&labs, ContrastMetric::CIEDE2000).ok();
        Self {
            colors,
            spec,
            radius,
            sphere,
            min_de76,
            min_de2000,
        }
    }

    /// Rebuilds a palette from previously recorded values. Contrast minima
    /// are taken as given rather than recomputed.
    pub fn from_stored(
        colors: Vec<PaletteColor>,
        spec: PaletteSpec,
        radius: Option<f64>,
        sphere: Option<SphereSummary>,
        min_de76: Option<f64>,
        min_de2000: Option<f64>,
    ) -> Result<Self> {
        spec.validate()?;
        if colors.len() != spec.n {
            return Err(Error::invalid(format!(
                "palette lists {} colors but its spec says n={}",
                colors.len(),
                spec.n
            )));
        }
        Ok(Self {
            colors,
            spec,
            radius,
            sphere,
            min_de76,
            min_de2000,
        })
    }

    pub fn colors(&self) -> &[PaletteColor] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn spec(&self) -> &PaletteSpec {
        &self.spec
    }

    pub fn labs(&self) -> Vec<LabColor> {
        self.colors.iter().map(|c| c.lab).collect()
    }

    /// Sphere radius actually used; `None` for the harmonic scheme.
    pub fn radius(&self) -> Option<f64> {
        self.radius
    }

    pub fn sphere(&self) -> Option<&SphereSummary> {
        self.sphere.as_ref()
    }

    /// Minimum pairwise ΔE*ab; `None` for single-color palettes.
    pub fn min_de76(&self) -> Option<f64> {
        self.min_de76
    }

    /// Minimum pairwise ΔE*00; `None` for single-color palettes.
    pub fn min_de2000(&self) -> Option<f64> {
        self.min_de2000
    }

    pub fn min_contrast(&self, metric: ContrastMetric) -> Option<f64> {
        match metric {
            ContrastMetric::CIE76 => self.min_de76,
            _ => self.min_de2000,
        }
    }
}

fn offset(center: [f64; 3], dir: &Vec3, t: f64) -> [f64; 3] {
    [
        center[0] + t * dir[0],
        center[1] + t * dir[1],
        center[2] + t * dir[2],
    ]
}

/// Inside the Lab bounds and displayable in sRGB.
fn displayable(lab: [f64; 3], wp: WhitePoint) -> bool {
    LabColor::from_array(lab).is_ok() && is_in_gamut(lab, wp)
}

/// Distance from `center` to the gamut boundary along the unit direction
/// `dir`, to within `tolerance`. Returns a lower bound.
fn boundary_distance(center: [f64; 3], dir: &Vec3, wp: WhitePoint, tolerance: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, MAX_SEARCH_RADIUS);
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        if displayable(offset(center, dir, mid), wp) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Vertices of a geodesic icosphere: 12 after 0 subdivisions, then
/// `10·4^k + 2`.
pub fn icosphere(subdivisions: u32) -> Vec<Vec3> {
    use std::collections::HashMap;

    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut vertices: Vec<Vec3> = [
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ]
    .into_iter()
    .map(unit)
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..subdivisions {
        let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, vertices: &mut Vec<Vec3>| {
            let key = (a.min(b), a.max(b));
            *midpoints.entry(key).or_insert_with(|| {
                let (p, q) = (vertices[a], vertices[b]);
                vertices.push(unit([p[0] + q[0], p[1] + q[1], p[2] + q[2]]));
                vertices.len() - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for [a, b, c] in faces {
            let ab = midpoint(a, b, &mut vertices);
            let bc = midpoint(b, c, &mut vertices);
            let ca = midpoint(c, a, &mut vertices);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    vertices
}

fn unit(v: Vec3) -> Vec3 {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

/// Rotates `dir` by small angles `(s, t)` along a tangent basis.
fn nudge(dir: &Vec3, s: f64, t: f64) -> Vec3 {
    let helper = if dir[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let e1 = unit([
        dir[1] * helper[2] - dir[2] * helper[1],
        dir[2] * helper[0] - dir[0] * helper[2],
        dir[0] * helper[1] - dir[1] * helper[0],
    ]);
    let e2 = [
        dir[1] * e1[2] - dir[2] * e1[1],
        dir[2] * e1[0] - dir[0] * e1[2],
        dir[0] * e1[1] - dir[1] * e1[0],
    ];
    unit([
        dir[0] + s * e1[0] + t * e2[0],
        dir[1] + s * e1[1] + t * e2[1],
        dir[2] + s * e1[2] + t * e2[2],
    ])
}

/// Pattern search for a local minimum of the boundary distance near `dir`.
fn refine_boundary_minimum(center: [f64; 3], dir: Vec3, wp: WhitePoint) -> f64 {
    const FINE: f64 = 1e-9;
    let mut best_dir = dir;
    let mut best = boundary_distance(center, &dir, wp, FINE);
    let mut delta = 0.05;
    while delta > 1e-7 {
        let mut improved = false;
        for (s, t) in [(delta, 0.0), (-delta, 0.0), (0.0, delta), (0.0, -delta)] {
            let cand = nudge(&best_dir, s, t);
            let rho = boundary_distance(center, &cand, wp, FINE);
            if rho < best {
                best = rho;
                best_dir = cand;
                improved = true;
            }
        }
        if !improved {
            delta *= 0.5;
        }
    }
    best
}

/// Radius of the largest sphere around `center` that stays inside the sRGB
/// gamut.
///
/// The radius is bisected against a 2562-direction icosphere probe; the
/// probe directions nearest the boundary are then refined by a local search
/// so that directions falling between probes are covered too. The result is
/// a lower bound, within [`RADIUS_TOLERANCE`] of the true inscribed radius.
pub fn max_inscribed_radius(center: LabColor, wp: WhitePoint) -> Result<f64> {
    let c = center.to_array();
    if !is_in_gamut(c, wp) {
        return Err(Error::CenterOutOfGamut {
            l: c[0],
            a: c[1],
            b: c[2],
        });
    }
    let probes = icosphere(PROBE_SUBDIVISIONS);
    let sphere_fits = |r: f64| probes.iter().all(|d| displayable(offset(c, d, r), wp));

    let (mut lo, mut hi) = (0.0, MAX_SEARCH_RADIUS);
    while hi - lo > RADIUS_TOLERANCE / 4.0 {
        let mid = 0.5 * (lo + hi);
        if sphere_fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    // Directions that leave the gamut within the bracket are where the
    // boundary is closest; refine each to its local minimum.
    let mut closest: Vec<(f64, Vec3)> = probes
        .iter()
        .filter(|d| !displayable(offset(c, d, hi + RADIUS_TOLERANCE), wp))
        .map(|d| (boundary_distance(c, d, wp, 1e-6), *d))
        .collect();
    closest.sort_by(|x, y| x.0.total_cmp(&y.0));
    let refined = closest
        .iter()
        .take(16)
        .map(|&(_, d)| refine_boundary_minimum(c, d, wp))
        .fold(lo, f64::min);

    Ok((refined - RADIUS_TOLERANCE / 2.0).max(0.0))
}

fn sort_for_display(colors: &mut [PaletteColor]) {
    colors.sort_by(|x, y| {
        y.lab
            .l()
            .total_cmp(&x.lab.l())
            .then_with(|| x.lab.hue_angle().total_cmp(&y.lab.hue_angle()))
    });
}

/// Pulls `target` toward `center` until it is displayable; the result lies
/// on the segment between them.
fn clip_toward_center(center: [f64; 3], target: [f64; 3], wp: WhitePoint) -> [f64; 3] {
    if displayable(target, wp) {
        return target;
    }
    let span = [
        target[0] - center[0],
        target[1] - center[1],
        target[2] - center[2],
    ];
    let length = (span[0] * span[0] + span[1] * span[1] + span[2] * span[2]).sqrt();
    let at = |t: f64| offset(center, &span, t);
    let (mut lo, mut hi) = (0.0, 1.0);
    while (hi - lo) * length > RADIUS_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if displayable(at(mid), wp) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(lo)
}

/// Equilibrium palette for `spec`, solving the sphere configuration with
/// `cfg` (whose seed is replaced by `spec.seed`).
pub fn equilibrium_palette(spec: &PaletteSpec, cfg: &SolverConfig) -> Result<Palette> {
    let radius = match spec.radius {
        Radius::Auto => {
            spec.validate()?;
            max_inscribed_radius(spec.center, WhitePoint::D65)?
        }
        Radius::Fixed(r) => r,
    };
    equilibrium_palette_with_radius(spec, cfg, radius)
}

/// Like [`equilibrium_palette`] with the radius already resolved, so that
/// sweeps over `n` do not repeat the inscribed-radius search.
pub fn equilibrium_palette_with_radius(
    spec: &PaletteSpec,
    cfg: &SolverConfig,
    radius: f64,
) -> Result<Palette> {
    spec.validate()?;
    if spec.scheme != Scheme::Equilibrium {
        return Err(Error::invalid(
            "equilibrium_palette needs the equilibrium scheme",
        ));
    }
    let wp = WhitePoint::D65;
    let center = spec.center.to_array();
    if spec.gamut_mode == GamutMode::ClipToGamut && !is_in_gamut(center, wp) {
        return Err(Error::CenterOutOfGamut {
            l: center[0],
            a: center[1],
            b: center[2],
        });
    }

    let (directions, sphere) = if spec.n == 1 {
        (vec![[1.0, 0.0, 0.0]], None)
    } else {
        let solver_cfg = SolverConfig {
            seed: spec.seed,
            ..cfg.clone()
        };
        let solution = equilibrium::solve(spec.n, &solver_cfg)?;
        let summary = SphereSummary::from(&solution);
        (solution.points().to_vec(), Some(summary))
    };

    let mut colors = directions
        .iter()
        .map(|d| {
            let ideal = offset(center, d, radius);
            let placed = match spec.gamut_mode {
                GamutMode::InscribedSphere => ideal,
                GamutMode::ClipToGamut => clip_toward_center(center, ideal, wp),
            };
            LabColor::from_array(placed).map(|lab| PaletteColor::from_lab(lab, wp))
        })
        .collect::<Result<Vec<_>>>()?;
    sort_for_display(&mut colors);
    Ok(Palette::assemble(
        colors,
        spec.clone(),
        Some(radius),
        sphere,
    ))
}

/// `n` hues evenly spaced on the HSV wheel, starting at red, at full
/// saturation and value.
pub fn harmonic_palette(spec: &PaletteSpec) -> Result<Palette> {
    spec.validate()?;
    if spec.scheme != Scheme::Harmonic {
        return Err(Error::invalid("harmonic_palette needs the harmonic scheme"));
    }
    let wp = WhitePoint::D65;
    let colors = (0..spec.n)
        .map(|i| {
            let hue = 360.0 * i as f64 / spec.n as f64;
            let srgb = SrgbColor::from_hsv(hue, 1.0, 1.0);
            srgb_to_lab(srgb, wp).map(|lab| PaletteColor {
                lab,
                srgb,
                in_gamut: true,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Palette::assemble(colors, spec.clone(), None, None))
}

pub fn generate_palette(spec: &PaletteSpec, cfg: &SolverConfig) -> Result<Palette> {
    match spec.scheme {
        Scheme::Equilibrium => equilibrium_palette(spec, cfg),
        Scheme::Harmonic => harmonic_palette(spec),
    }
}
