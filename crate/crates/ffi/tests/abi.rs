use std::ffi::{CStr, CString};
use std::ptr;

use gegenpsd_ffi::*;

fn last_error() -> String {
    let p = gp_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn version_is_crate_version() {
    let v = unsafe { CStr::from_ptr(gp_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn gegenbauer_values() {
    let mut g = 0.0;
    assert_eq!(unsafe { gp_gegenbauer_eval(5, 2, 0.5, &mut g) }, GpStatus::Ok);
    assert!((g - (5.0 * 0.25 - 1.0) / 4.0).abs() < 1e-15);
    assert!(gp_last_error().is_null());

    let u = [0.3];
    let v = [-0.2];
    let mut mv = 0.0;
    assert_eq!(unsafe { gp_gegenbauer_eval_mv(5, 0, 0.1, u.as_ptr(), v.as_ptr(), 1, &mut mv) }, GpStatus::Ok);
    assert_eq!(mv, 1.0);
}

#[test]
fn errors_carry_messages() {
    let mut g = 0.0;
    assert_eq!(unsafe { gp_gegenbauer_eval(1, 2, 0.5, &mut g) }, GpStatus::InvalidArgument);
    assert!(last_error().contains("at least 2"));
    assert_eq!(unsafe { gp_gegenbauer_eval(4, 2, 0.5, ptr::null_mut()) }, GpStatus::NullPointer);
    assert!(last_error().contains("result"));
    assert_eq!(unsafe { gp_gegenbauer_eval(4, 2, 0.5, &mut g) }, GpStatus::Ok);
    assert!(gp_last_error().is_null());
}

#[test]
fn matrix_round_trip_and_psd() {
    let data = [2.0, 1.0, 1.0, 2.0];
    let mut m = ptr::null_mut();
    unsafe {
        assert_eq!(gp_matrix_new(2, data.as_ptr(), &mut m), GpStatus::Ok);
        let mut dim = 0;
        assert_eq!(gp_matrix_dim(m, &mut dim), GpStatus::Ok);
        assert_eq!(dim, 2);
        let mut x = 0.0;
        assert_eq!(gp_matrix_get(m, 1, 0, &mut x), GpStatus::Ok);
        assert_eq!(x, 1.0);
        assert_eq!(gp_matrix_get(m, 2, 0, &mut x), GpStatus::InvalidArgument);
        let mut buf = [0.0; 4];
        assert_eq!(gp_matrix_copy(m, buf.as_mut_ptr(), 3), GpStatus::BufferTooSmall);
        assert_eq!(gp_matrix_copy(m, buf.as_mut_ptr(), 4), GpStatus::Ok);
        assert_eq!(buf, data);
        let mut r = GpPsdResult::default();
        assert_eq!(gp_matrix_is_psd(m, 1e-8, &mut r), GpStatus::Ok);
        assert!(r.is_psd);
        assert!((r.min_eigenvalue - 1.0).abs() < 1e-12);
        assert!((r.matrix_scale - 3.0).abs() < 1e-12);
        gp_matrix_free(m);
    }
    let bad = [1.0, 2.0, 2.0, 1.0];
    unsafe {
        assert_eq!(gp_matrix_new(2, bad.as_ptr(), &mut m), GpStatus::Ok);
        let mut r = GpPsdResult::default();
        assert_eq!(gp_matrix_is_psd(m, 1e-8, &mut r), GpStatus::Ok);
        assert!(!r.is_psd);
        gp_matrix_free(m);
        gp_matrix_free(ptr::null_mut());
    }
}

#[test]
fn kernel_of_sampled_points_is_psd() {
    unsafe {
        let mut pts = ptr::null_mut();
        assert_eq!(gp_points_sample(5, 20, 3, &mut pts), GpStatus::Ok);
        let (mut n, mut r) = (0, 0);
        assert_eq!(gp_points_shape(pts, &mut n, &mut r), GpStatus::Ok);
        assert_eq!((n, r), (5, 20));
        for m in 0..=3 {
            let mut k = ptr::null_mut();
            assert_eq!(gp_kernel_matrix(pts, m, 3, &mut k), GpStatus::Ok);
            let mut res = GpPsdResult::default();
            assert_eq!(gp_matrix_is_psd(k, 1e-8, &mut res), GpStatus::Ok);
            assert!(res.is_psd, "m={m} {res:?}");
            gp_matrix_free(k);
        }
        let mut k = ptr::null_mut();
        assert_eq!(gp_kernel_matrix(pts, 4, 1, &mut k), GpStatus::InvalidArgument);
        assert!(k.is_null());
        gp_points_free(pts);
    }
}

#[test]
fn points_constructors() {
    unsafe {
        let raw = [3.0, 4.0, 0.0, 2.0];
        let mut pts = ptr::null_mut();
        assert_eq!(gp_points_new(2, 2, raw.as_ptr(), false, &mut pts), GpStatus::InvalidArgument);
        assert_eq!(gp_points_new(2, 2, raw.as_ptr(), true, &mut pts), GpStatus::Ok);
        gp_points_free(pts);

        let name = CString::new("cross_polytope(3)").unwrap();
        assert_eq!(gp_points_named(name.as_ptr(), &mut pts), GpStatus::Ok);
        let (mut n, mut r) = (0, 0);
        gp_points_shape(pts, &mut n, &mut r);
        assert_eq!((n, r), (3, 6));
        gp_points_free(pts);

        let bogus = CString::new("dodecahedron").unwrap();
        assert_eq!(gp_points_named(bogus.as_ptr(), &mut pts), GpStatus::UnknownCode);
        assert!(last_error().contains("dodecahedron"));
    }
}

#[test]
fn pairs_and_membership() {
    unsafe {
        let mut pts = ptr::null_mut();
        assert_eq!(gp_points_sample(4, 8, 11, &mut pts), GpStatus::Ok);
        let mut pair = ptr::null_mut();
        assert_eq!(gp_pair_from_points(pts, &mut pair), GpStatus::Ok);
        let mut member = false;
        for m in 0..=2 {
            assert_eq!(gp_pair_lambda_member(pair, m, 4, 1e-8, &mut member), GpStatus::Ok);
            assert!(member);
        }
        assert_eq!(gp_pair_delta_member(pair, 1e-8, &mut member), GpStatus::Ok);
        assert!(member);
        assert_eq!(gp_pair_lambda_member(pair, 3, 4, 1e-8, &mut member), GpStatus::InvalidArgument);
        gp_pair_free(pair);
        gp_points_free(pts);

        let t = [1.0, 2.0, 2.0, 1.0];
        let u = [0.0, 0.0, 0.0, 0.0];
        assert_eq!(gp_pair_new(3, 2, t.as_ptr(), u.as_ptr(), &mut pair), GpStatus::Infeasible);
        assert!(last_error().contains("outside [-1, 1]"));
        let t = [1.0, 0.5, 0.5, 1.0];
        assert_eq!(gp_pair_new(3, 2, t.as_ptr(), u.as_ptr(), &mut pair), GpStatus::Ok);
        gp_pair_free(pair);
    }
}

#[test]
fn delsarte_cross_polytope() {
    // t (t + 1) at n = 4, theta = pi/2 gives 2n.
    let coeffs = [0.0, 1.0, 1.0];
    let mut bound = 0.0;
    let theta = std::f64::consts::FRAC_PI_2;
    unsafe {
        assert_eq!(gp_delsarte_bound(coeffs.as_ptr(), 3, 4, theta, &mut bound), GpStatus::Ok);
        assert!((bound - 8.0).abs() < 1e-9);
        assert_eq!(
            gp_delsarte_bound(coeffs.as_ptr(), 3, 4, std::f64::consts::FRAC_PI_3, &mut bound),
            GpStatus::CertificateRejected
        );
        let mut fk = [f64::NAN; 5];
        assert_eq!(gp_delsarte_lp(4, theta, 4, 512, &mut bound, fk.as_mut_ptr()), GpStatus::Ok);
        assert!((8.0 - 1e-9..8.5).contains(&bound), "{bound}");
        assert!(fk.iter().all(|c| c.is_finite() && *c >= -1e-12));
    }
}

#[test]
fn q_omega_counts() {
    let mut count = 0;
    unsafe {
        assert_eq!(gp_q_omega([1u32, 1].as_ptr(), 2, 5, &mut count), GpStatus::Ok);
        assert_eq!(count, 4);
        assert_eq!(gp_q_omega([2u32].as_ptr(), 1, 5, &mut count), GpStatus::Ok);
        assert_eq!(count, 1);
        assert_ne!(gp_q_omega([0u32].as_ptr(), 1, 5, &mut count), GpStatus::Ok);
    }
}
