use eqpal::color_space::{is_in_gamut, LabColor, WhitePoint};
use eqpal::equilibrium::{sample_uniform_sphere, solve, SolverConfig, Vec3};
use eqpal::metrics::{min_pairwise_contrast, ContrastMetric};
use eqpal::schemes::{
    equilibrium_palette_with_radius, generate_palette, icosphere, max_inscribed_radius, GamutMode,
    PaletteSpec, Radius, Scheme,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const D65: WhitePoint = WhitePoint::D65;

fn at(center: [f64; 3], d: Vec3, r: f64) -> [f64; 3] {
    [
        center[0] + r * d[0],
        center[1] + r * d[1],
        center[2] + r * d[2],
    ]
}

fn inside(lab: [f64; 3]) -> bool {
    LabColor::from_array(lab).is_ok() && is_in_gamut(lab, D65)
}

/// Brute-force estimate of the inscribed radius: the nearest boundary hit
/// over many random rays, each located by plain bisection.
fn sampled_radius(center: [f64; 3], rays: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut best = f64::INFINITY;
    for _ in 0..rays {
        let d = sample_uniform_sphere(&mut rng);
        let (mut lo, mut hi) = (0.0, 200.0);
        for _ in 0..50 {
            let mid = 0.5 * (lo + hi);
            if inside(at(center, d, mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        best = best.min(lo);
    }
    best
}

#[test]
fn inscribed_radius_agrees_with_ray_sampling() {
    for center in [[50.0, 0.0, 0.0], [99.0, 0.0, 0.0], [30.0, 10.0, -10.0]] {
        let lab = LabColor::from_array(center).unwrap();
        let r = max_inscribed_radius(lab, D65).unwrap();
        let sampled = sampled_radius(center, 20_000);
        assert!(r <= sampled, "{center:?}: {r} above sampled {sampled}");
        assert!(sampled - r < 0.015, "{center:?}: {r} vs sampled {sampled}");
    }
}

#[test]
fn inscribed_radius_is_tight() {
    let probes = icosphere(4);
    for center in [[50.0, 0.0, 0.0], [99.0, 0.0, 0.0]] {
        let r = max_inscribed_radius(LabColor::from_array(center).unwrap(), D65).unwrap();
        assert!(probes.iter().any(|d| !inside(at(center, *d, r + 0.5))));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10_000 {
            let d = sample_uniform_sphere(&mut rng);
            assert!(inside(at(center, d, r)), "{center:?} r={r} {d:?}");
        }
    }
    let near_white = max_inscribed_radius(LabColor::new(99.0, 0.0, 0.0).unwrap(), D65).unwrap();
    assert!(near_white < 1.5);
}

#[test]
fn inscribed_palettes_sit_on_the_sphere() {
    let cfg = SolverConfig::default();
    let r = max_inscribed_radius(LabColor::MID_GRAY, D65).unwrap();
    for n in [1, 2, 3, 8, 13, 40] {
        let p = generate_palette(&PaletteSpec::new(n, Scheme::Equilibrium), &cfg).unwrap();
        assert_eq!(p.len(), n);
        assert_eq!(p.radius(), Some(r));
        for c in p.colors() {
            let [l, a, b] = c.lab.to_array();
            let dist = ((l - 50.0).powi(2) + a * a + b * b).sqrt();
            assert!((dist - r).abs() < 1e-9, "n={n}: {dist}");
            assert!(c.in_gamut);
        }
    }
}

#[test]
fn contrast_scales_with_radius() {
    let cfg = SolverConfig::default();
    let spec = PaletteSpec::new(16, Scheme::Equilibrium);
    let small = equilibrium_palette_with_radius(&spec, &cfg, 10.0).unwrap();
    let large = equilibrium_palette_with_radius(&spec, &cfg, 20.0).unwrap();
    for (s, l) in small.colors().iter().zip(large.colors()) {
        let (s, l) = (s.lab.to_array(), l.lab.to_array());
        let ds = [s[0] - 50.0, s[1], s[2]];
        let dl = [l[0] - 50.0, l[1], l[2]];
        for k in 0..3 {
            assert!((2.0 * ds[k] - dl[k]).abs() < 1e-9);
        }
    }
    let (a, b) = (small.min_de76().unwrap(), large.min_de76().unwrap());
    assert!((2.0 * a - b).abs() < 1e-9);
}

#[test]
fn twenty_colors_inherit_the_sphere_spacing() {
    let cfg = SolverConfig::default();
    let r = max_inscribed_radius(LabColor::MID_GRAY, D65).unwrap();
    let p = generate_palette(&PaletteSpec::new(20, Scheme::Equilibrium), &cfg).unwrap();
    let want = 0.782961 * r;
    let got = p.min_de76().unwrap();
    assert!((got - want).abs() / want < 1e-2, "{got} vs {want}");
    let unit = solve(20, &cfg).unwrap().min_distance();
    assert!((got - unit * r).abs() < 1e-9);
}

#[test]
fn clipping_pulls_colors_straight_toward_the_center() {
    let cfg = SolverConfig::default();
    let mut spec = PaletteSpec::new(24, Scheme::Equilibrium);
    spec.radius = Radius::Fixed(45.0);
    let raw = equilibrium_palette_with_radius(&spec, &cfg, 45.0).unwrap();
    spec.gamut_mode = GamutMode::ClipToGamut;
    let clipped = equilibrium_palette_with_radius(&spec, &cfg, 45.0).unwrap();
    assert!(raw.colors().iter().any(|c| !c.in_gamut));

    let offsets = |p: &eqpal::schemes::Palette| -> Vec<[f64; 3]> {
        p.labs()
            .iter()
            .map(|c| [c.l() - 50.0, c.a(), c.b()])
            .collect()
    };
    let ideal = offsets(&raw);
    for (c, o) in clipped.colors().iter().zip(offsets(&clipped)) {
        assert!(c.in_gamut);
        let norm = (o[0] * o[0] + o[1] * o[1] + o[2] * o[2]).sqrt();
        assert!(norm <= 45.0 + 1e-9);
        let parent = ideal
            .iter()
            .find(|u| {
                let dot = (o[0] * u[0] + o[1] * u[1] + o[2] * u[2]) / (norm * 45.0);
                (dot - 1.0).abs() < 1e-9
            })
            .expect("every clipped color lies on a ray of the unclipped palette");
        let was_inside = is_in_gamut([parent[0] + 50.0, parent[1], parent[2]], D65);
        if was_inside {
            assert!((norm - 45.0).abs() < 1e-9);
        }
    }
}

#[test]
fn harmonic_wheel_hits_the_primaries() {
    let p = generate_palette(
        &PaletteSpec::new(6, Scheme::Harmonic),
        &SolverConfig::default(),
    )
    .unwrap();
    let hex: Vec<String> = p.colors().iter().map(|c| c.hex()).collect();
    assert_eq!(
        hex,
        ["#ff0000", "#ffff00", "#00ff00", "#00ffff", "#0000ff", "#ff00ff"]
    );
    assert!(p.colors().iter().all(|c| c.in_gamut));
    assert_eq!(p.radius(), None);
    let labs = p.labs();
    assert_eq!(
        p.min_de2000(),
        Some(min_pairwise_contrast(&labs, ContrastMetric::CIEDE2000).unwrap())
    );
}

#[test]
fn palettes_are_reproducible_and_seeded() {
    let cfg = SolverConfig::default();
    let mut spec = PaletteSpec::new(9, Scheme::Equilibrium);
    let a = generate_palette(&spec, &cfg).unwrap();
    assert_eq!(a, generate_palette(&spec, &cfg).unwrap());
    spec.seed = 1234;
    let b = generate_palette(&spec, &cfg).unwrap();
    assert_eq!(b.spec().seed, 1234);
    assert!(b.sphere().unwrap().seed >= 1234);
}

#[test]
fn rejects_bad_requests() {
    let cfg = SolverConfig::default();
    assert!(generate_palette(&PaletteSpec::new(0, Scheme::Equilibrium), &cfg).is_err());
    let mut spec = PaletteSpec::new(4, Scheme::Equilibrium);
    spec.radius = Radius::Fixed(-1.0);
    assert!(generate_palette(&spec, &cfg).is_err());
    let mut spec = PaletteSpec::new(4, Scheme::Equilibrium);
    spec.center = LabColor::new(50.0, 100.0, 100.0).unwrap();
    assert!(matches!(
        generate_palette(&spec, &cfg),
        Err(eqpal::Error::CenterOutOfGamut { .. })
    ));
}
