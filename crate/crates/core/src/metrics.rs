//! Perceptual color differences and their just-noticeable-difference levels.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::color_space::LabColor;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Cie76,
    Ciede2000,
}

/// A color-difference formula together with its JND threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "MetricKind", into = "MetricKind")]
pub struct ContrastMetric {
    kind: MetricKind,
}

impl ContrastMetric {
    pub const CIE76: ContrastMetric = ContrastMetric {
        kind: MetricKind::Cie76,
    };
    pub const CIEDE2000: ContrastMetric = ContrastMetric {
        kind: MetricKind::Ciede2000,
    };

    pub const fn new(kind: MetricKind) -> Self {
        Self { kind }
    }

    pub const fn kind(&self) -> MetricKind {
        self.kind
    }

    pub const fn jnd_threshold(&self) -> f64 {
        match self.kind {
            MetricKind::Cie76 => 5.0,
            MetricKind::Ciede2000 => 1.0,
        }
    }

    pub fn distance(&self, x: &LabColor, y: &LabColor) -> f64 {
        match self.kind {
            MetricKind::Cie76 => delta_e_76(x, y),
            MetricKind::Ciede2000 => ciede2000(x, y, &ParametricFactors::default()),
        }
    }

    pub const fn name(&self) -> &'static str {
        match self.kind {
            MetricKind::Cie76 => "cie76",
            MetricKind::Ciede2000 => "ciede2000",
        }
    }

    pub const fn label(&self) -> &'static str {
        match self.kind {
            MetricKind::Cie76 => "ΔE*ab (CIE76)",
            MetricKind::Ciede2000 => "ΔE*00 (CIEDE2000)",
        }
    }
}

impl From<MetricKind> for ContrastMetric {
    fn from(kind: MetricKind) -> Self {
        Self::new(kind)
    }
}

impl From<ContrastMetric> for MetricKind {
    fn from(m: ContrastMetric) -> Self {
        m.kind
    }
}

impl fmt::Display for ContrastMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Euclidean distance in CIELAB.
pub fn delta_e_76(x: &LabColor, y: &LabColor) -> f64 {
    let dl = x.l() - y.l();
    let da = x.a() - y.a();
    let db = x.b() - y.b();
    (dl * dl + da * da + db * db).sqrt()
}

/// Weights `kL`, `kC`, `kH` of the CIEDE2000 formula; 1 under reference
/// viewing conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParametricFactors {
    pub lightness: f64,
    pub chroma: f64,
    pub hue: f64,
}

impl Default for ParametricFactors {
    fn default() -> Self {
        Self {
            lightness: 1.0,
            chroma: 1.0,
            hue: 1.0,
        }
    }
}

impl ParametricFactors {
    fn validate(&self) -> Result<()> {
        let ok = |k: f64| k.is_finite() && k > 0.0;
        if ok(self.lightness) && ok(self.chroma) && ok(self.hue) {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "CIEDE2000 parametric factors must be positive, got {self:?}"
            )))
        }
    }
}

const POW25_7: f64 = 6_103_515_625.0; // 25^7

/// Hue angle in degrees, normalized to [0, 360); zero for the achromatic
/// case where both components vanish.
fn hue_degrees(b: f64, a_prime: f64) -> f64 {
    if b == 0.0 && a_prime == 0.0 {
        return 0.0;
    }
    let h = b.atan2(a_prime).to_degrees();
    if h < 0.0 {
        h + 360.0
    } else {
        h
    }
}

/// Full CIEDE2000 color difference.
pub fn delta_e_2000(x: &LabColor, y: &LabColor, k: ParametricFactors) -> Result<f64> {
    k.validate()?;
    Ok(ciede2000(x, y, &k))
}

fn ciede2000(x: &LabColor, y: &LabColor, k: &ParametricFactors) -> f64 {
    let (l1, a1, b1) = (x.l(), x.a(), x.b());
    let (l2, a2, b2) = (y.l(), y.a(), y.b());

    let c_bar = 0.5 * (a1.hypot(b1) + a2.hypot(b2));
    let c_bar7 = c_bar.powi(7);
    let g = 0.5 * (1.0 - (c_bar7 / (c_bar7 + POW25_7)).sqrt());

    let a1p = (1.0 + g) * a1;
    let a2p = (1.0 + g) * a2;
    let c1p = a1p.hypot(b1);
    let c2p = a2p.hypot(b2);
    let h1p = hue_degrees(b1, a1p);
    let h2p = hue_degrees(b2, a2p);

    let dl = l2 - l1;
    let dc = c2p - c1p;
    let chroma_product = c1p * c2p;
    let dh_angle = if chroma_product == 0.0 {
        0.0
    } else {
        let d = h2p - h1p;
        if d > 180.0 {
            d - 360.0
        } else if d < -180.0 {
            d + 360.0
        } else {
            d
        }
    };
    let dh = 2.0 * chroma_product.sqrt() * (dh_angle.to_radians() / 2.0).sin();

    let l_bar = 0.5 * (l1 + l2);
    let c_bar_p = 0.5 * (c1p + c2p);
    let h_bar_p = if chroma_product == 0.0 {
        h1p + h2p
    } else if (h1p - h2p).abs() <= 180.0 {
        0.5 * (h1p + h2p)
    } else if h1p + h2p < 360.0 {
        0.5 * (h1p + h2p + 360.0)
    } else {
        0.5 * (h1p + h2p - 360.0)
    };

    let t = 1.0 - 0.17 * (h_bar_p - 30.0).to_radians().cos()
        + 0.24 * (2.0 * h_bar_p).to_radians().cos()
        + 0.32 * (3.0 * h_bar_p + 6.0).to_radians().cos()
        - 0.20 * (4.0 * h_bar_p - 63.0).to_radians().cos();

    let d_theta = 30.0 * (-((h_bar_p - 275.0) / 25.0).powi(2)).exp();
    let c_bar_p7 = c_bar_p.powi(7);
    let rc = 2.0 * (c_bar_p7 / (c_bar_p7 + POW25_7)).sqrt();
    let l50 = (l_bar - 50.0).powi(2);
    let sl = 1.0 + 0.015 * l50 / (20.0 + l50).sqrt();
    let sc = 1.0 + 0.045 * c_bar_p;
    let sh = 1.0 + 0.015 * c_bar_p * t;
    let rt = -(2.0 * d_theta).to_radians().sin() * rc;

    let tl = dl / (k.lightness * sl);
    let tc = dc / (k.chroma * sc);
    let th = dh / (k.hue * sh);
    (tl * tl + tc * tc + th * th + rt * tc * th).max(0.0).sqrt()
}

/// Smallest metric value over all unordered pairs.
pub fn min_pairwise_contrast(colors: &[LabColor], metric: ContrastMetric) -> Result<f64> {
    if colors.len() < 2 {
        return Err(Error::invalid(format!(
            "minimum contrast needs at least 2 colors, got {}",
            colors.len()
        )));
    }
    let mut min = f64::INFINITY;
    for (i, x) in colors.iter().enumerate() {
        for y in &colors[i + 1..] {
            min = min.min(metric.distance(x, y));
        }
    }
    Ok(min)
}
