use std::ffi::{c_char, CStr, CString};
use std::ptr;

use transversal_ffi::*;

const SQUARES: [(f64, f64); 3] = [(0.0, 0.0), (4.0, 0.0), (2.0, 3.0)];

fn three_squares() -> *mut TvConfiguration {
    let counts = [4usize; 3];
    let mut xy = Vec::new();
    for (cx, cy) in SQUARES {
        for (dx, dy) in [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)] {
            xy.extend([cx + dx, cy + dy]);
        }
    }
    let mut cfg = ptr::null_mut();
    let st = unsafe { tv_configuration_from_arrays(3, counts.as_ptr(), xy.as_ptr(), &mut cfg) };
    assert_eq!(st, TvStatus::Ok);
    cfg
}

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    let n = unsafe { tv_last_error_message(buf.as_mut_ptr(), buf.len()) };
    let s = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap().to_owned();
    assert_eq!(n, s.len());
    s
}

#[test]
fn solve_three_squares() {
    let cfg = three_squares();
    assert_eq!(unsafe { tv_configuration_len(cfg) }, 3);
    let mut sol = ptr::null_mut();
    assert_eq!(unsafe { tv_solve(cfg, ptr::null(), &mut sol) }, TvStatus::Ok);
    unsafe {
        assert!((tv_solution_c_m(sol) - 1.2).abs() < 1e-9);
        assert!(!tv_solution_is_degenerate(sol));
        assert!(!tv_solution_has_transversal(sol));
        assert_eq!(tv_solution_line_count(sol), 2);
        for k in 0..2 {
            let (mut theta, mut offset) = (0.0, 0.0);
            assert_eq!(tv_solution_line(sol, k, &mut theta, &mut offset), TvStatus::Ok);
            assert!((0.0..std::f64::consts::PI).contains(&theta));
            let mut n = 0;
            assert_eq!(tv_solution_certificate_len(sol, k, &mut n), TvStatus::Ok);
            assert_eq!(n, 3);
            let mut sides = Vec::new();
            for j in 0..n {
                let mut t = TvTangency { polygon: 99, side: 0, contact: TvContact::None, residual: 1.0 };
                assert_eq!(tv_solution_certificate_entry(sol, k, j, &mut t), TvStatus::Ok);
                assert_eq!(t.polygon, j);
                assert_ne!(t.contact, TvContact::None);
                assert!(t.residual < 1e-7);
                sides.push(t.side);
            }
            assert!(sides.contains(&1) && sides.contains(&-1));
            let mut f = 0.0;
            assert_eq!(tv_correcting_factor(cfg, 0, theta, offset, &mut f), TvStatus::Ok);
            assert!((f - 1.2).abs() < 1e-7);
        }
        let mut theta = 0.0;
        let mut offset = 0.0;
        assert_eq!(tv_solution_line(sol, 2, &mut theta, &mut offset), TvStatus::OutOfRange);
        assert!(last_error().contains("no line 2"));

        let mut est = 0.0;
        assert_eq!(tv_brute_force_c_m(cfg, 20_000, 1e-9, &mut est), TvStatus::Ok);
        assert!((est - 1.2).abs() < 1e-4);

        let mut json = ptr::null_mut();
        assert_eq!(tv_solution_to_json(sol, cfg, &mut json), TvStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        tv_string_free(json);
        let parsed = transversal::io::parse_result(&text).unwrap();
        assert_eq!(parsed.lines.len(), 2);

        tv_solution_free(sol);
        tv_configuration_free(cfg);
    }
}

#[test]
fn json_round_trip() {
    let cfg = three_squares();
    unsafe {
        let mut text = ptr::null_mut();
        assert_eq!(tv_configuration_to_json(cfg, &mut text), TvStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(tv_configuration_from_json(text, &mut back), TvStatus::Ok);
        assert_eq!(tv_configuration_len(back), 3);
        let mut text2 = ptr::null_mut();
        assert_eq!(tv_configuration_to_json(back, &mut text2), TvStatus::Ok);
        assert_eq!(CStr::from_ptr(text), CStr::from_ptr(text2));
        tv_string_free(text);
        tv_string_free(text2);
        tv_configuration_free(back);
        tv_configuration_free(cfg);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut cfg = ptr::null_mut();
        let bad = CString::new("{\"version\":1,").unwrap();
        assert_eq!(tv_configuration_from_json(bad.as_ptr(), &mut cfg), TvStatus::ParseError);
        assert!(cfg.is_null());
        assert!(!last_error().is_empty());

        let reflex = CString::new(r#"{"version":1,"polygons":[[[0,0],[2,1],[0,2],[1,1]]]}"#).unwrap();
        assert_eq!(tv_configuration_from_json(reflex.as_ptr(), &mut cfg), TvStatus::ValidationError);
        assert!(last_error().contains("polygon 1"));

        let counts = [3usize];
        let xy = [0.0, 0.0, 1.0, 0.0, 2.0, 0.0];
        assert_eq!(
            tv_configuration_from_arrays(1, counts.as_ptr(), xy.as_ptr(), &mut cfg),
            TvStatus::ValidationError
        );
        assert_eq!(
            tv_configuration_from_arrays(0, counts.as_ptr(), xy.as_ptr(), &mut cfg),
            TvStatus::ValidationError
        );
        assert_eq!(tv_configuration_from_json(ptr::null(), &mut cfg), TvStatus::NullPointer);

        let cfg = three_squares();
        let mut opts = tv_solver_options_default();
        assert_eq!(opts.grid_size, 4096);
        opts.grid_size = 1;
        let mut sol = ptr::null_mut();
        assert_eq!(tv_solve(cfg, &opts, &mut sol), TvStatus::InvalidArgument);
        assert!(sol.is_null());
        let mut f = 0.0;
        assert_eq!(tv_correcting_factor(cfg, 3, 0.0, 0.0, &mut f), TvStatus::OutOfRange);
        assert_eq!(tv_correcting_factor(cfg, 0, f64::NAN, 0.0, &mut f), TvStatus::InvalidArgument);
        assert_eq!(tv_brute_force_c_m(cfg, 1, 1e-9, &mut f), TvStatus::InvalidArgument);

        // a successful call clears the message
        assert_eq!(tv_correcting_factor(cfg, 0, 0.0, 0.0, &mut f), TvStatus::Ok);
        assert_eq!(tv_last_error_message(ptr::null_mut(), 0), 0);
        tv_configuration_free(cfg);

        // null handles are tolerated by getters and destructors
        assert!(tv_solution_c_m(ptr::null()).is_nan());
        assert_eq!(tv_solution_line_count(ptr::null()), 0);
        tv_solution_free(ptr::null_mut());
        tv_configuration_free(ptr::null_mut());
    }
}

#[test]
fn degenerate_solution_has_no_certificates() {
    let counts = [3usize; 3];
    let mut xy = Vec::new();
    for cx in [0.0, 3.0, 7.0] {
        xy.extend([cx, 0.0, cx + 1.0, -0.5, cx + 1.0, 0.5]);
    }
    unsafe {
        let mut cfg = ptr::null_mut();
        assert_eq!(tv_configuration_from_arrays(3, counts.as_ptr(), xy.as_ptr(), &mut cfg), TvStatus::Ok);
        let mut sol = ptr::null_mut();
        assert_eq!(tv_solve(cfg, ptr::null(), &mut sol), TvStatus::Ok);
        assert!(tv_solution_is_degenerate(sol));
        assert!(tv_solution_has_transversal(sol));
        assert_eq!(tv_solution_c_m(sol), 0.0);
        assert_eq!(tv_solution_line_count(sol), 1);
        let mut n = 0;
        assert_eq!(tv_solution_certificate_len(sol, 0, &mut n), TvStatus::OutOfRange);
        tv_solution_free(sol);
        tv_configuration_free(cfg);
    }
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(tv_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
