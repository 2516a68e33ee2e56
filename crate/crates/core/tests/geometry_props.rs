use proptest::prelude::*;
use starnav::*;
use std::f64::consts::PI;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn polar_round_trip(rx in -1e3..1e3f64, ry in -1e3..1e3f64, px in -1e3..1e3f64, py in -1e3..1e3f64) {
        let r = Point2d::new(rx, ry);
        let p = Point2d::new(px, py);
        prop_assume!(r.distance(p) > 1e-9);
        let back = polar_to_cart(r, cart_to_polar(r, p).unwrap());
        prop_assert!(back.distance(p) <= 1e-9 * p.norm().max(1.0));
    }

    #[test]
    fn wrap_is_idempotent_and_in_range(a in -1e4..1e4f64) {
        let w = wrap_angle(a);
        prop_assert!((-PI..PI).contains(&w));
        prop_assert_eq!(wrap_angle(w), w);
        prop_assert!(((a - w) / std::f64::consts::TAU - ((a - w) / std::f64::consts::TAU).round()).abs() < 1e-9);
    }

    #[test]
    fn polar_distance_symmetric(ax in -50.0..50.0f64, ay in -50.0..50.0f64, bx in -50.0..50.0f64, by in -50.0..50.0f64) {
        let a = Point2d::new(ax, ay);
        let b = Point2d::new(bx, by);
        prop_assume!(a.distance(b) > 1e-9);
        prop_assert_eq!(cart_to_polar(a, b).unwrap().dist, cart_to_polar(b, a).unwrap().dist);
    }
}

#[test]
fn f32_and_f64_agree() {
    let r = Point2f::new(1.0, 2.0);
    let p = Point2f::new(-3.0, 0.5);
    let pc = cart_to_polar(r, p).unwrap();
    let pd = cart_to_polar(r.cast::<f64>(), p.cast::<f64>()).unwrap();
    assert!((pc.theta as f64 - pd.theta).abs() < 1e-6);
    assert!((pc.dist as f64 - pd.dist).abs() < 1e-5);
}
