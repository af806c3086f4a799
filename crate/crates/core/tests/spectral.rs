use ctht_core::characters::phi_real;
use ctht_core::families::{bundled_family, by_name};
use ctht_core::spectral::{
    forward_on_nodes, forward_transform, inverse_transform, lp_norm_spectral, lp_norm_weighted, modulus_of_continuity,
    round_trip_error, translate, GridFunction, QuadratureSpec,
};
use ctht_core::JacobiParams;

fn quad() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn sample(name: &str) -> GridFunction {
    by_name(name).unwrap().sample(quad().output_spacing).unwrap()
}

#[test]
fn plancherel_holds_on_the_smooth_family() {
    let q = JacobiParams::new(1.0, 0.0).unwrap();
    for m in bundled_family() {
        let f = m.sample(quad().output_spacing).unwrap();
        let (s, _) = forward_on_nodes(&f, &q, &quad()).unwrap();
        let a = lp_norm_weighted(&f, &q, 2.0, &quad()).unwrap();
        let b = lp_norm_spectral(&s, &q, 2.0, &quad()).unwrap();
        assert!((a - b).abs() <= 1e-6 * a, "{}: {a} vs {b}", m.name);
    }
}

#[test]
fn round_trip_recovers_smooth_members() {
    let q = JacobiParams::new(0.5, 0.5).unwrap();
    for name in ["gaussian_wide", "cosine_bump", "mollified_indicator"] {
        let f = sample(name);
        let rel = round_trip_error(&f, &q, 2.0, &quad()).unwrap() / lp_norm_weighted(&f, &q, 2.0, &quad()).unwrap();
        assert!(rel <= 1e-5, "{name}: {rel:e}");
    }
}

#[test]
fn off_node_inverse_matches_samples() {
    let q = JacobiParams::new(0.5, 0.5).unwrap();
    let f = sample("gaussian_wide");
    let (s, _) = forward_on_nodes(&f, &q, &quad()).unwrap();
    let xs = [0.0, 0.37, 1.1, 2.5];
    let back = inverse_transform(&s, &q, &xs, &quad()).unwrap();
    for &x in &xs {
        assert!((back.eval(x) - f.eval(x)).abs() <= 1e-6, "x = {x}");
    }
}

#[test]
fn translation_multiplies_the_transform_by_the_character() {
    let q = JacobiParams::new(2.0, 0.5).unwrap();
    let f = sample("gaussian_narrow");
    let lambdas: Vec<f64> = (0..25).map(|i| 0.1 + 0.8 * i as f64).collect();
    let ff = forward_transform(&f, &q, &lambdas, &quad()).unwrap();
    let scale = ff.sup_abs();
    for x0 in [0.25, 1.0, 2.0] {
        let g = translate(&f, x0, &q, &quad()).unwrap();
        let fg = forward_transform(&g, &q, &lambdas, &quad()).unwrap();
        for (i, &l) in lambdas.iter().enumerate() {
            let expect = phi_real(&q, l, x0).unwrap().value * ff.values[i];
            assert!((fg.values[i] - expect).abs() <= 1e-6 * scale, "x0 = {x0}, lambda = {l}");
        }
    }
}

#[test]
fn transform_is_bounded_by_the_l1_norm_and_translation_contracts() {
    let q = JacobiParams::new(1.0, 0.0).unwrap();
    for name in ["spline_tent", "gaussian_wide"] {
        let f = sample(name);
        let (s, _) = forward_on_nodes(&f, &q, &quad()).unwrap();
        let n1 = lp_norm_weighted(&f, &q, 1.0, &quad()).unwrap();
        assert!(s.sup_abs() <= n1 * (1.0 + 1e-6));
        for x0 in [0.5, 2.0] {
            let g = translate(&f, x0, &q, &quad()).unwrap();
            for p in [1.0, 2.0] {
                let (a, b) = (lp_norm_weighted(&g, &q, p, &quad()).unwrap(), lp_norm_weighted(&f, &q, p, &quad()).unwrap());
                assert!(a <= b * (1.0 + 1e-6), "{name} x0 = {x0} p = {p}: {a} > {b}");
            }
        }
    }
}

#[test]
fn zero_function_has_zero_transform_and_modulus() {
    let q = JacobiParams::new(0.5, 0.5).unwrap();
    let z = GridFunction::zero(2.0, quad().output_spacing).unwrap();
    let (s, _) = forward_on_nodes(&z, &q, &quad()).unwrap();
    assert_eq!(s.sup_abs(), 0.0);
    assert_eq!(modulus_of_continuity(&z, 0.1, 1.5, &q, &quad()).unwrap(), 0.0);
}

#[test]
fn modulus_shrinks_with_delta_and_respects_the_triangle_bound() {
    let q = JacobiParams::new(1.0, 0.0).unwrap();
    let f = sample("cosine_bump");
    let norm = lp_norm_weighted(&f, &q, 2.0, &quad()).unwrap();
    let w: Vec<f64> = [0.01, 0.1, 1.0]
        .iter()
        .map(|&d| modulus_of_continuity(&f, d, 2.0, &q, &quad()).unwrap())
        .collect();
    assert!(w[0] < w[1] && w[1] < w[2], "{w:?}");
    assert!(w[2] <= 2.0 * norm);
}

#[test]
fn truncation_radius_is_enforced() {
    let q = JacobiParams::new(1.0, 0.0).unwrap();
    let f = sample("gaussian_wide");
    assert!(translate(&f, 4.0, &q, &quad()).is_err());
    assert!(modulus_of_continuity(&f, 0.1, 0.5, &q, &quad()).is_err());
}
