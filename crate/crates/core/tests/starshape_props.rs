use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use starnav::*;
use std::f64::consts::PI;

// Smooth random room profile with occasional steps, sampled on 360 beams.
fn fuzzed_scan(seed: u64) -> Scand {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = rng.random_range(1.0..4.0);
    let harmonics: Vec<(f64, f64, f64)> = (0..4)
        .map(|k| (k as f64 + 1.0, rng.random_range(0.0..0.3), rng.random_range(0.0..6.3)))
        .collect();
    let steps: Vec<(f64, f64, f64)> = (0..rng.random_range(0..3))
        .map(|_| {
            let a = rng.random_range(-PI..PI);
            (a, a + rng.random_range(0.2..1.0), rng.random_range(-0.8..1.5))
        })
        .collect();
    let origin = Point2d::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
    let ranges: Vec<f64> = (0..360)
        .map(|k| {
            let t = -PI + k as f64 * PI / 180.0;
            let mut r = base + harmonics.iter().map(|(f, a, ph)| a * (f * t + ph).sin()).sum::<f64>();
            for (lo, hi, h) in &steps {
                if ccw_distance(*lo, t) < ccw_distance(*lo, *hi) {
                    r += h;
                }
            }
            r.clamp(0.3, 5.0)
        })
        .collect();
    Scand::from_ranges(origin, &ranges, 5.0).unwrap()
}

fn fuzzed_region(seed: u64) -> Regiond {
    let scan = fuzzed_scan(seed);
    fit_region(scan.origin(), &scan, &FitConfigd::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn fitted_regions_are_starshaped(seed in any::<u64>(), probes in prop::collection::vec((-PI..PI, 0.0..=1.0f64), 50)) {
        let region = fuzzed_region(seed);
        for (theta, lambda) in probes {
            let p = region.p_ref + Point2d::from_angle(theta) * (lambda * region.eval_radius(theta));
            prop_assert!(region.contains(p, -1e-9));
        }
    }

    #[test]
    fn gamma_decreases_along_rays(seed in any::<u64>(), theta in -PI..PI, a in 0.01..3.0f64, b in 0.01..3.0f64, sigma in 0.2..4.0f64) {
        prop_assume!((a - b).abs() > 1e-6);
        let region = fuzzed_region(seed);
        let (l1, l2) = if a < b { (a, b) } else { (b, a) };
        let dir = Point2d::from_angle(theta);
        let g1 = region.gamma(region.p_ref + dir * l1, sigma);
        let g2 = region.gamma(region.p_ref + dir * l2, sigma);
        prop_assert!(g1 > g2);
    }

    #[test]
    fn contains_iff_gamma_at_least_one(seed in any::<u64>(), x in -6.0..6.0f64, y in -6.0..6.0f64, sigma in 0.2..4.0f64) {
        let region = fuzzed_region(seed);
        let p = region.p_ref + Point2d::new(x, y);
        prop_assert_eq!(region.contains(p, 0.0), region.gamma(p, sigma) >= 1.0);
    }

    #[test]
    fn derivative_matches_finite_difference(seed in any::<u64>(), theta in -3.1..3.1f64) {
        let region = fuzzed_region(seed);
        let h = 1e-6;
        let seg = region.boundary.segment_at(theta);
        prop_assume!(theta - h > seg.theta_lo && theta + h <= seg.theta_hi);
        let fd = (seg.eval(theta + h) - seg.eval(theta - h)) / (2.0 * h);
        prop_assert!((fd - seg.eval_deriv(theta)).abs() < 1e-6 * fd.abs().max(1.0));
    }
}

#[test]
fn segments_tile_the_circle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for seed in 0..10 {
        let region = fuzzed_region(seed);
        let segs = region.boundary.segments();
        for _ in 0..1000 {
            let t = wrap_angle(rng.random_range(-10.0..10.0));
            let hits = segs
                .iter()
                .enumerate()
                .filter(|(i, s)| if *i == 0 { t >= s.theta_lo && t <= s.theta_hi } else { t > s.theta_lo && t <= s.theta_hi })
                .count();
            assert_eq!(hits, 1, "theta {t}");
        }
    }
}

#[test]
fn circle_fit_error_below_one_centimetre() {
    for (r, cx, cy) in [(1.0, 0.0, 0.0), (2.5, 3.0, -1.0), (4.0, -7.0, 2.0)] {
        let c = Point2d::new(cx, cy);
        let scan = Scand::from_ranges(c, &[r; 360], 5.0).unwrap();
        let region = fit_region(c, &scan, &FitConfigd::default()).unwrap();
        let worst = (0..3600)
            .map(|k| (region.eval_radius(-PI + k as f64 * PI / 1800.0) - r).abs())
            .fold(0.0, f64::max);
        assert!(worst < 0.01, "max error {worst}");
    }
}

#[test]
fn off_centre_circle_fit() {
    // Reference point offset inside a circle of radius 3: exact boundary is known.
    let centre = Point2d::new(0.0, 0.0);
    let radius = 3.0;
    let p_ref = Point2d::new(0.7, -0.4);
    let ranges: Vec<f64> = (0..360)
        .map(|k| {
            let d = Point2d::from_angle(-PI + k as f64 * PI / 180.0);
            let f = p_ref - centre;
            let b = d.dot(f);
            -b + (b * b - f.norm_squared() + radius * radius).sqrt()
        })
        .collect();
    let scan = Scand::from_ranges(p_ref, &ranges, 5.0).unwrap();
    let region = fit_region(p_ref, &scan, &FitConfigd::default()).unwrap();
    let worst = (0..720)
        .map(|k| region.boundary_point(-PI + k as f64 * PI / 360.0).distance(centre) - radius)
        .fold(0.0f64, |m, e| m.max(e.abs()));
    assert!(worst < 0.01, "max error {worst}");
}

#[test]
fn serialized_region_round_trips() {
    let region = fuzzed_region(42);
    let json = serde_json::to_string(&region).unwrap();
    let back: Regiond = serde_json::from_str(&json).unwrap();
    assert_eq!(region, back);
}
