//! sRGB, CIE XYZ and CIELAB conversions.
//!
//! The chain is the standard one: piecewise sRGB transfer curve, the sRGB
//! primaries matrix to XYZ under D65, then the CIE 1976 cube-root transform.
//! All functions are pure.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack on each sRGB channel before a color counts as out of gamut.
pub const GAMUT_EPSILON: f64 = 1e-6;

/// Reference white tristimulus values, scaled so that `y` is 100.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WhitePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl WhitePoint {
    /// CIE D65, 2° observer.
    pub const D65: WhitePoint = WhitePoint {
        x: 95.047,
        y: 100.0,
        z: 108.883,
    };
}

impl Default for WhitePoint {
    fn default() -> Self {
        Self::D65
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XyzColor {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// A display color. Channels are nominally in `[0, 1]` but may fall outside
/// when produced from an out-of-gamut Lab value before clamping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SrgbColor {
    pub r: f64,
    pub g: f64,
    pub b: f64,
}

impl SrgbColor {
    pub const fn new(r: f64, g: f64, b: f64) -> Self {
        Self { r, g, b }
    }

    pub fn channels(&self) -> [f64; 3] {
        [self.r, self.g, self.b]
    }

    pub fn is_finite(&self) -> bool {
        self.channels().iter().all(|c| c.is_finite())
    }

    /// True iff every channel lies within `[-ε, 1 + ε]`.
    pub fn is_displayable(&self) -> bool {
        self.channels()
            .iter()
            .all(|&c| (-GAMUT_EPSILON..=1.0 + GAMUT_EPSILON).contains(&c))
    }

    pub fn clamped(&self) -> Self {
        Self::new(
            self.r.clamp(0.0, 1.0),
            self.g.clamp(0.0, 1.0),
            self.b.clamp(0.0, 1.0),
        )
    }

    /// Fully saturated HSV color; `hue` in degrees, `saturation`/`value` in [0,1].
    pub fn from_hsv(hue: f64, saturation: f64, value: f64) -> Self {
        let h = hue.rem_euclid(360.0) / 60.0;
        let chroma = value * saturation;
        let x = chroma * (1.0 - ((h % 2.0) - 1.0).abs());
        let m = value - chroma;
        let (r, g, b) = match h as u32 {
            0 => (chroma, x, 0.0),
            1 => (x, chroma, 0.0),
            2 => (0.0, chroma, x),
            3 => (0.0, x, chroma),
            4 => (x, 0.0, chroma),
            _ => (chroma, 0.0, x),
        };
        Self::new(r + m, g + m, b + m)
    }

    /// 8-bit quantized channels, clamped first, rounding half up.
    pub fn to_rgb8(&self) -> [u8; 3] {
        let c = self.clamped();
        [c.r, c.g, c.b].map(|v| (v * 255.0 + 0.5).floor() as u8)
    }

    /// Lowercase `#rrggbb`.
    pub fn to_hex(&self) -> String {
        let [r, g, b] = self.to_rgb8();
        format!("#{r:02x}{g:02x}{b:02x}")
    }

    pub fn from_hex(hex: &str) -> Result<Self> {
        let digits = hex.strip_prefix('#').unwrap_or(hex);
        if digits.len() != 6 || !digits.is_ascii() {
            return Err(Error::invalid(format!("not a 6-digit hex color: {hex:?}")));
        }
        let channel = |i: usize| {
            u8::from_str_radix(&digits[i..i + 2], 16)
                .map(|v| f64::from(v) / 255.0)
                .map_err(|_| Error::invalid(format!("not a 6-digit hex color: {hex:?}")))
        };
        Ok(Self::new(channel(0)?, channel(2)?, channel(4)?))
    }
}

/// A CIELAB color with `L` in [0,100] and `a`, `b` in [-128,127].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct LabColor {
    l: f64,
    a: f64,
    b: f64,
}

impl LabColor {
    pub const L_RANGE: (f64, f64) = (0.0, 100.0);
    pub const AB_RANGE: (f64, f64) = (-128.0, 127.0);

    /// Mid-gray, the neutral point at half lightness.
    pub const MID_GRAY: LabColor = LabColor {
        l: 50.0,
        a: 0.0,
        b: 0.0,
    };

    pub fn new(l: f64, a: f64, b: f64) -> Result<Self> {
        let in_range = |v: f64, (lo, hi): (f64, f64)| v.is_finite() && v >= lo && v <= hi;
        if !in_range(l, Self::L_RANGE)
            || !in_range(a, Self::AB_RANGE)
            || !in_range(b, Self::AB_RANGE)
        {
            return Err(Error::invalid(format!(
                "Lab ({l}, {a}, {b}) outside L∈[0,100], a,b∈[-128,127]"
            )));
        }
        Ok(Self { l, a, b })
    }

    pub fn from_array(v: [f64; 3]) -> Result<Self> {
        Self::new(v[0], v[1], v[2])
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.l, self.a, self.b]
    }

    /// Hue angle atan2(b, a) in radians.
    pub fn hue_angle(&self) -> f64 {
        self.b.atan2(self.a)
    }
}

impl TryFrom<[f64; 3]> for LabColor {
    type Error = Error;

    fn try_from(v: [f64; 3]) -> Result<Self> {
        Self::from_array(v)
    }
}

impl From<LabColor> for [f64; 3] {
    fn from(c: LabColor) -> Self {
        c.to_array()
    }
}

type Mat3 = [[f64; 3]; 3];

/// sRGB primaries to XYZ (D65), as commonly tabulated to seven digits.
const SRGB_TO_XYZ_TABULATED: Mat3 = [
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
];

/// Rows rescaled so that RGB (1,1,1) lands exactly on the D65 white; the
/// tabulated Y row sums to 1.0000001.
const SRGB_TO_XYZ: Mat3 = balance_rows(SRGB_TO_XYZ_TABULATED, WhitePoint::D65);
const XYZ_TO_SRGB: Mat3 = invert(SRGB_TO_XYZ);

const fn balance_rows(m: Mat3, white: WhitePoint) -> Mat3 {
    let target = [white.x / 100.0, white.y / 100.0, white.z / 100.0];
    let mut out = m;
    let mut i = 0;
    while i < 3 {
        let scale = target[i] / (m[i][0] + m[i][1] + m[i][2]);
        let mut j = 0;
        while j < 3 {
            out[i][j] = m[i][j] * scale;
            j += 1;
        }
        i += 1;
    }
    out
}

const fn invert(m: Mat3) -> Mat3 {
    let c00 = m[1][1] * m[2][2] - m[1][2] * m[2][1];
    let c01 = m[1][2] * m[2][0] - m[1][0] * m[2][2];
    let c02 = m[1][0] * m[2][1] - m[1][1] * m[2][0];
    let det = m[0][0] * c00 + m[0][1] * c01 + m[0][2] * c02;
    [
        [
            c00 / det,
            (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det,
            (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det,
        ],
        [
            c01 / det,
            (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det,
            (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det,
        ],
        [
            c02 / det,
            (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det,
            (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det,
        ],
    ]
}

fn mul(m: &Mat3, v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

fn decode_channel(c: f64) -> f64 {
    if c <= 0.04045 {
        c / 12.92
    } else {
        ((c + 0.055) / 1.055).powf(2.4)
    }
}

fn encode_channel(c: f64) -> f64 {
    if c <= 0.0031308 {
        c * 12.92
    } else {
        1.055 * c.powf(1.0 / 2.4) - 0.055
    }
}

const DELTA: f64 = 6.0 / 29.0;

fn lab_f(t: f64) -> f64 {
    if t > DELTA * DELTA * DELTA {
        t.cbrt()
    } else {
        t / (3.0 * DELTA * DELTA) + 4.0 / 29.0
    }
}

fn lab_f_inv(t: f64) -> f64 {
    if t > DELTA {
        t * t * t
    } else {
        3.0 * DELTA * DELTA * (t - 4.0 / 29.0)
    }
}

pub fn srgb_to_xyz(c: SrgbColor) -> XyzColor {
    let linear = c.channels().map(decode_channel);
    let [x, y, z] = mul(&SRGB_TO_XYZ, linear);
    XyzColor {
        x: x * 100.0,
        y: y * 100.0,
        z: z * 100.0,
    }
}

pub fn xyz_to_srgb(c: XyzColor) -> SrgbColor {
    let [r, g, b] = mul(&XYZ_TO_SRGB, [c.x / 100.0, c.y / 100.0, c.z / 100.0]).map(encode_channel);
    SrgbColor::new(r, g, b)
}

/// Unchecked `[L, a, b]` from XYZ.
pub fn xyz_to_lab_components(c: XyzColor, wp: WhitePoint) -> [f64; 3] {
    let fx = lab_f(c.x / wp.x);
    let fy = lab_f(c.y / wp.y);
    let fz = lab_f(c.z / wp.z);
    [116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)]
}

/// XYZ from unchecked `[L, a, b]`.
pub fn lab_components_to_xyz(lab: [f64; 3], wp: WhitePoint) -> XyzColor {
    let fy = (lab[0] + 16.0) / 116.0;
    let fx = fy + lab[1] / 500.0;
    let fz = fy - lab[2] / 200.0;
    XyzColor {
        x: wp.x * lab_f_inv(fx),
        y: wp.y * lab_f_inv(fy),
        z: wp.z * lab_f_inv(fz),
    }
}

pub fn srgb_to_lab(c: SrgbColor, wp: WhitePoint) -> Result<LabColor> {
    if !c.is_finite() {
        return Err(Error::invalid(format!("non-finite sRGB channel in {c:?}")));
    }
    LabColor::from_array(xyz_to_lab_components(srgb_to_xyz(c), wp))
}

/// sRGB for arbitrary Lab coordinates, without clamping. Works outside the
/// `LabColor` bounds, which the gamut searches rely on.
pub fn lab_to_srgb_unclamped(lab: [f64; 3], wp: WhitePoint) -> SrgbColor {
    xyz_to_srgb(lab_components_to_xyz(lab, wp))
}

pub fn is_in_gamut(lab: [f64; 3], wp: WhitePoint) -> bool {
    lab_to_srgb_unclamped(lab, wp).is_displayable()
}

/// Returns the clamped sRGB color and whether the unclamped value was
/// displayable.
pub fn lab_to_srgb(c: LabColor, wp: WhitePoint) -> (SrgbColor, bool) {
    let raw = lab_to_srgb_unclamped(c.to_array(), wp);
    (raw.clamped(), raw.is_displayable())
}

/// Largest per-channel deviation after sRGB → Lab → sRGB under D65.
pub fn round_trip_error(c: SrgbColor) -> f64 {
    let wp = WhitePoint::D65;
    match srgb_to_lab(c, wp) {
        Ok(lab) => {
            let back = lab_to_srgb_unclamped(lab.to_array(), wp);
            back.channels()
                .iter()
                .zip(c.channels())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max)
        }
        Err(_) => f64::INFINITY,
    }
}
