//! Optimized paths against naive double-loop references.

mod common;

use common::*;
use reynoldsflow::flow::{
    boundary_terms, combined_flow, domain_terms, flow_magnitude, lucas_kanade, reynolds_flow,
    reynolds_flow_pair, spatial_gradient, FlowField, LkConfig, ReynoldsConfig,
};
use reynoldsflow::imgcore::{
    apply_kernel3, frame_delta, gaussian_blur, BorderPolicy, Frame, GaussianSpec, Kernel3,
};

const TOL: f64 = 1e-6;
const INSTANCES: u64 = 50;
const BORDERS: [BorderPolicy; 3] = [
    BorderPolicy::Replicate,
    BorderPolicy::Reflect,
    BorderPolicy::Zero,
];

fn named_kernels() -> [(Kernel3, [[f64; 3]; 3], f64); 5] {
    [
        (Kernel3::simpson_x(), SIMPSON_X, 1.0 / 3.0),
        (Kernel3::simpson_y(), SIMPSON_Y, 1.0 / 3.0),
        (Kernel3::sobel_x(), SOBEL_X, 1.0),
        (Kernel3::sobel_y(), SOBEL_Y, 1.0),
        (Kernel3::box_ones(), ONES, 1.0),
    ]
}

#[test]
fn sobel_on_5x5_matches_loop() {
    let mut r = rng(5);
    let f = random_frame(&mut r, 5, 5, 0.0, 255.0);
    let fast = apply_kernel3(&f, &Kernel3::sobel_x(), BorderPolicy::Replicate).unwrap();
    let slow = naive_correlate3(&f, SOBEL_X, 1.0, BorderPolicy::Replicate);
    assert!(max_abs_diff(fast.data(), &slow) <= TOL);
}

#[test]
fn stencils_match_loop() {
    let mut r = rng(1);
    for _ in 0..INSTANCES {
        let f = random_frame(&mut r, 64, 64, -255.0, 255.0);
        for border in BORDERS {
            for (k, coeffs, norm) in named_kernels() {
                let fast = apply_kernel3(&f, &k, border).unwrap();
                let slow = naive_correlate3(&f, coeffs, norm, border);
                assert!(max_abs_diff(fast.data(), &slow) <= TOL, "{border:?}");
            }
        }
    }
}

#[test]
fn blur_matches_2d_gaussian() {
    let mut r = rng(2);
    for i in 0..INSTANCES {
        let f = random_frame(&mut r, 64, 64, 0.0, 255.0);
        let sigma = [0.5, 1.0, 1.5, 2.3][i as usize % 4];
        for border in BORDERS {
            let fast = gaussian_blur(&f, &GaussianSpec::new(sigma).unwrap(), border).unwrap();
            let slow = naive_gaussian(&f, sigma, border);
            assert!(
                max_abs_diff(fast.data(), &slow) <= TOL,
                "sigma {sigma} {border:?}"
            );
        }
    }
}

#[test]
fn impulse_blur_peak_and_mass() {
    let f = Frame::from_fn(31, 31, |x, y| if x == 15 && y == 15 { 1.0 } else { 0.0 });
    let out = gaussian_blur(
        &f,
        &GaussianSpec::new(1.0).unwrap(),
        BorderPolicy::Replicate,
    )
    .unwrap();
    let mut total = 0.0;
    for j in -3i32..=3 {
        for i in -3i32..=3 {
            total += (-((i * i + j * j) as f64) / 2.0).exp();
        }
    }
    assert!((out.get(15, 15) - 1.0 / total).abs() <= 1e-12);
    assert!((out.data().iter().sum::<f64>() - 1.0).abs() <= TOL);
}

#[test]
fn gradient_matches_loop() {
    let mut r = rng(3);
    for _ in 0..INSTANCES {
        let f = random_frame(&mut r, 64, 64, 0.0, 255.0);
        let (gx, gy) = spatial_gradient(&f).unwrap();
        let (ox, oy) = naive_gradient(&f);
        assert!(max_abs_diff(gx.data(), &ox) <= TOL);
        assert!(max_abs_diff(gy.data(), &oy) <= TOL);
    }
}

#[test]
fn lucas_kanade_matches_eigen_solver() {
    let mut r = rng(4);
    for i in 0..INSTANCES {
        let cur = random_texture(&mut r, 64, 64);
        let noise = random_frame(&mut r, 64, 64, -2.0, 2.0);
        let next = Frame::from_fn(64, 64, |x, y| cur.get((x + 1).min(63), y) + noise.get(x, y));
        let window = [3, 5, 7][i as usize % 3];
        let cfg = LkConfig {
            window,
            ..LkConfig::default()
        };
        let fast = lucas_kanade(&cur, &next, &cfg).unwrap();
        let (u, v) = naive_lk(&cur, &next, window, cfg.eigen_threshold);
        assert!(max_abs_diff(fast.u(), &u) <= TOL, "window {window}");
        assert!(max_abs_diff(fast.v(), &v) <= TOL, "window {window}");
    }
}

#[test]
fn lucas_kanade_on_noise_matches_eigen_solver() {
    // White noise gives poorly conditioned tensors, exercising the threshold.
    let mut r = rng(40);
    for _ in 0..INSTANCES {
        let cur = random_frame(&mut r, 64, 64, 0.0, 1.0);
        let next = random_frame(&mut r, 64, 64, 0.0, 1.0);
        let cfg = LkConfig::default();
        let fast = lucas_kanade(&cur, &next, &cfg).unwrap();
        let (u, v) = naive_lk(&cur, &next, cfg.window, cfg.eigen_threshold);
        assert!(max_abs_diff(fast.u(), &u) <= TOL);
        assert!(max_abs_diff(fast.v(), &v) <= TOL);
    }
}

#[test]
fn reynolds_matches_composition() {
    let mut r = rng(6);
    for i in 0..INSTANCES {
        let delta = random_frame(&mut r, 64, 64, -50.0, 50.0);
        let border = BORDERS[i as usize % 3];
        let sigma = [1.0, 0.7, 1.6][i as usize % 3];
        let flow = reynolds_flow(&delta, &ReynoldsConfig { sigma, border }).unwrap();
        let (u, v) = naive_reynolds(&delta, sigma, border);
        assert!(
            max_abs_diff(flow.u(), &u) <= TOL,
            "{border:?} sigma {sigma}"
        );
        assert!(
            max_abs_diff(flow.v(), &v) <= TOL,
            "{border:?} sigma {sigma}"
        );
    }
}

#[test]
fn reynolds_pair_equals_reynolds_of_delta() {
    let mut r = rng(7);
    for _ in 0..10 {
        let cur = random_frame(&mut r, 64, 48, 0.0, 255.0);
        let next = random_frame(&mut r, 64, 48, 0.0, 255.0);
        let cfg = ReynoldsConfig::default();
        let a = reynolds_flow_pair(&cur, &next, &cfg).unwrap();
        let b = reynolds_flow(&frame_delta(&cur, &next).unwrap(), &cfg).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn boundary_impulse_response_is_flipped_kernel() {
    let delta = Frame::from_fn(5, 5, |x, y| if x == 2 && y == 2 { 1.0 } else { 0.0 });
    let (bx, by) = boundary_terms(&delta, BorderPolicy::Replicate).unwrap();
    for (out, k) in [(&bx, SIMPSON_X), (&by, SIMPSON_Y)] {
        for y in 0..5 {
            for x in 0..5 {
                // Correlation: out(x, y) = k[2 - y'][2 - x'] around the impulse.
                let expect = if (1..=3).contains(&x) && (1..=3).contains(&y) {
                    k[3 - y][3 - x] / 3.0
                } else {
                    0.0
                };
                assert!((out.get(x, y) - expect).abs() <= 1e-15, "({x}, {y})");
            }
        }
        let slow = naive_correlate3(&delta, k, 1.0 / 3.0, BorderPolicy::Replicate);
        assert!(max_abs_diff(out.data(), &slow) <= TOL);
    }
}

#[test]
fn domain_terms_on_7x7_match_two_stage_loop() {
    let mut r = rng(8);
    for border in BORDERS {
        let delta = random_frame(&mut r, 7, 7, -10.0, 10.0);
        let (dx, dy) = domain_terms(&delta, border).unwrap();
        let sx = to_frame(7, 7, naive_correlate3(&delta, SOBEL_X, 1.0, border));
        let sy = to_frame(7, 7, naive_correlate3(&delta, SOBEL_Y, 1.0, border));
        assert!(max_abs_diff(dx.data(), &naive_correlate3(&sx, ONES, 1.0, border)) <= TOL);
        assert!(max_abs_diff(dy.data(), &naive_correlate3(&sy, ONES, 1.0, border)) <= TOL);
    }
}

#[test]
fn delta_combine_and_magnitude_match_loops() {
    let mut r = rng(9);
    let a = random_frame(&mut r, 17, 11, 0.0, 255.0);
    let b = random_frame(&mut r, 17, 11, 0.0, 255.0);
    let d = frame_delta(&a, &b).unwrap();
    for i in 0..a.data().len() {
        assert_eq!(d.data()[i], b.data()[i] - a.data()[i]);
    }
    let p = random_frame(&mut r, 17, 11, -3.0, 3.0);
    let q = random_frame(&mut r, 17, 11, -3.0, 3.0);
    let f1 = FlowField::new(17, 11, a.data().to_vec(), b.data().to_vec()).unwrap();
    let f2 = FlowField::new(17, 11, p.data().to_vec(), q.data().to_vec()).unwrap();
    let sum = combined_flow(&f1, &f2).unwrap();
    let mag = flow_magnitude(&f2);
    for i in 0..a.data().len() {
        assert_eq!(sum.u()[i], f1.u()[i] + f2.u()[i]);
        assert_eq!(sum.v()[i], f1.v()[i] + f2.v()[i]);
        assert!((mag.data()[i] - (p.data()[i].powi(2) + q.data()[i].powi(2)).sqrt()).abs() <= TOL);
    }
}
