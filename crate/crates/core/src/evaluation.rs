//! Minimum-contrast curves over palette size.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::color_space::WhitePoint;
use crate::equilibrium::SolverConfig;
use crate::error::{Error, Result};
use crate::metrics::{min_pairwise_contrast, ContrastMetric};
use crate::schemes::{
    equilibrium_palette_with_radius, harmonic_palette, max_inscribed_radius, Palette, PaletteSpec,
    Radius, Scheme,
};

pub const MIN_CURVE_N: usize = 2;
pub const MAX_CURVE_N: usize = 200;

/// Inclusive range of palette sizes, optionally strided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRange {
    pub start: usize,
    pub end: usize,
    pub stride: usize,
}

impl CountRange {
    pub fn new(start: usize, end: usize) -> Result<Self> {
        Self::with_stride(start, end, 1)
    }

    pub fn with_stride(start: usize, end: usize, stride: usize) -> Result<Self> {
        if start < MIN_CURVE_N || end > MAX_CURVE_N || start > end {
            return Err(Error::invalid(format!(
                "count range {start}:{end} must satisfy {MIN_CURVE_N} <= start <= end <= {MAX_CURVE_N}"
            )));
        }
        if stride == 0 {
            return Err(Error::invalid("stride must be at least 1"));
        }
        Ok(Self { start, end, stride })
    }

    pub fn counts(&self) -> Vec<usize> {
        (self.start..=self.end).step_by(self.stride).collect()
    }
}

impl FromStr for CountRange {
    type Err = Error;

    /// `start:end` or `start:end:stride`.
    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(':')
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::invalid(format!("bad count range {s:?}")))?;
        match parts[..] {
            [start, end] => Self::new(start, end),
            [start, end, stride] => Self::with_stride(start, end, stride),
            _ => Err(Error::invalid(format!(
                "count range must be start:end[:stride], got {s:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub n: usize,
    pub min_contrast: f64,
}

/// Minimum pairwise contrast as a function of palette size, for one scheme
/// under one metric.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContrastReport {
    scheme: Scheme,
    metric: ContrastMetric,
    series: Vec<CurvePoint>,
    jnd_crossing: Option<usize>,
    spec: PaletteSpec,
    solver: SolverConfig,
}

impl ContrastReport {
    /// Checks the series (non-empty, strictly increasing `n`, non-negative
    /// contrast) and locates the first JND crossing.
    pub fn new(
        scheme: Scheme,
        metric: ContrastMetric,
        series: Vec<CurvePoint>,
        spec: PaletteSpec,
        solver: SolverConfig,
    ) -> Result<Self> {
        if series.is_empty() {
            return Err(Error::invalid("contrast series is empty"));
        }
        if series.windows(2).any(|w| w[0].n >= w[1].n) {
            return Err(Error::invalid(
                "contrast series must have strictly increasing n",
            ));
        }
        if let Some(p) = series
            .iter()
            .find(|p| p.min_contrast.is_nan() || p.min_contrast < 0.0)
        {
            return Err(Error::invalid(format!(
                "negative or NaN contrast {} at n={}",
                p.min_contrast, p.n
            )));
        }
        let threshold = metric.jnd_threshold();
        let jnd_crossing = series
            .iter()
            .find(|p| p.min_contrast < threshold)
            .map(|p| p.n);
        Ok(Self {
            scheme,
            metric,
            series,
            jnd_crossing,
            spec,
            solver,
        })
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn metric(&self) -> ContrastMetric {
        self.metric
    }

    pub fn series(&self) -> &[CurvePoint] {
        &self.series
    }

    /// First `n` whose minimum contrast falls below the metric's JND.
    pub fn jnd_crossing(&self) -> Option<usize> {
        self.jnd_crossing
    }

    pub fn spec(&self) -> &PaletteSpec {
        &self.spec
    }

    pub fn solver(&self) -> &SolverConfig {
        &self.solver
    }

    pub fn at(&self, n: usize) -> Option<f64> {
        self.series
            .binary_search_by_key(&n, |p| p.n)
            .ok()
            .map(|i| self.series[i].min_contrast)
    }

    /// `n,min_contrast` CSV with LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,min_contrast\n");
        for p in &self.series {
            let _ = writeln!(out, "{},{}", p.n, p.min_contrast);
        }
        out
    }
}

fn palette_for(
    scheme: Scheme,
    spec: &PaletteSpec,
    cfg: &SolverConfig,
    radius: Option<f64>,
) -> Result<Palette> {
    match scheme {
        Scheme::Harmonic => harmonic_palette(spec),
        Scheme::Equilibrium => {
            equilibrium_palette_with_radius(spec, cfg, radius.expect("radius resolved"))
        }
    }
}

/// Curves for several metrics from a single sweep; each palette is generated
/// once and measured under every metric.
pub fn contrast_curves(
    scheme: Scheme,
    metrics: &[ContrastMetric],
    counts: CountRange,
    spec_defaults: &PaletteSpec,
    cfg: &SolverConfig,
) -> Result<Vec<ContrastReport>> {
    let template = PaletteSpec {
        scheme,
        ..spec_defaults.clone()
    };
    let radius = match (scheme, template.radius) {
        (Scheme::Harmonic, _) => None,
        (Scheme::Equilibrium, Radius::Fixed(r)) => Some(r),
        (Scheme::Equilibrium, Radius::Auto) => {
            Some(max_inscribed_radius(template.center, WhitePoint::D65)?)
        }
    };

    let counts = counts.counts();
    let rows = cfg.execution.map_indexed(counts.len(), |i| {
        let n = counts[i];
        let measure = || -> Result<Vec<f64>> {
            let palette = palette_for(scheme, &template.with_count(n), cfg, radius)?;
            let labs = palette.labs();
            metrics
                .iter()
                .map(|&m| min_pairwise_contrast(&labs, m))
                .collect()
        };
        measure().map_err(|e| Error::AtCount {
            n,
            source: Box::new(e),
        })
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;

    metrics
        .iter()
        .enumerate()
        .map(|(k, &metric)| {
            let series = counts
                .iter()
                .zip(&rows)
                .map(|(&n, values)| CurvePoint {
                    n,
                    min_contrast: values[k],
                })
                .collect();
            ContrastReport::new(scheme, metric, series, template.clone(), cfg.clone())
        })
        .collect()
}

/// Minimum contrast of `scheme` palettes under `metric` for every size in
/// `counts`. Contrast is measured on the colors as placed, after any gamut
/// handling.
pub fn contrast_curve(
    scheme: Scheme,
    metric: ContrastMetric,
    counts: CountRange,
    spec_defaults: &PaletteSpec,
    cfg: &SolverConfig,
) -> Result<ContrastReport> {
    let mut reports = contrast_curves(scheme, &[metric], counts, spec_defaults, cfg)?;
    Ok(reports.remove(0))
}

/// Headline numbers of a contrast curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JndSummary {
    pub scheme: Scheme,
    pub metric: ContrastMetric,
    pub jnd_threshold: f64,
    pub n_min: usize,
    pub n_max: usize,
    pub min_contrast: f64,
    pub max_contrast: f64,
    pub jnd_crossing: Option<usize>,
    /// Contrast at the largest `n` minus the JND threshold.
    pub margin_at_max_n: f64,
}

pub fn jnd_report(report: &ContrastReport) -> JndSummary {
    let series = report.series();
    let first = series.first().expect("reports are never empty");
    let last = series.last().expect("reports are never empty");
    let (min, max) = series
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.min_contrast), hi.max(p.min_contrast))
        });
    let threshold = report.metric().jnd_threshold();
    JndSummary {
        scheme: report.scheme(),
        metric: report.metric(),
        jnd_threshold: threshold,
        n_min: first.n,
        n_max: last.n,
        min_contrast: min,
        max_contrast: max,
        jnd_crossing: report.jnd_crossing(),
        margin_at_max_n: last.min_contrast - threshold,
    }
}

impl fmt::Display for JndSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} under {} (JND {}), n = {}..{}",
            self.scheme,
            self.metric.label(),
            self.jnd_threshold,
            self.n_min,
            self.n_max
        )?;
        writeln!(
            f,
            "  min contrast {:.4}, max contrast {:.4}",
            self.min_contrast, self.max_contrast
        )?;
        match self.jnd_crossing {
            Some(n) => writeln!(f, "  first drops below JND at n = {n}")?,
            None => writeln!(f, "  stays above JND over the whole range")?,
        }
        write!(
            f,
            "  margin at n = {}: {:+.4}",
            self.n_max, self.margin_at_max_n
        )
    }
}
