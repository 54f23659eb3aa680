use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use teamcoil::benchmark::REFERENCE_RADII;
use teamcoil_ffi::*;

fn last_error() -> Option<String> {
    let p = tc_last_error_message();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

#[test]
fn layout_field_matches_core() {
    unsafe {
        let mut layout = ptr::null_mut();
        assert_eq!(
            tc_layout_from_radii(REFERENCE_RADII.as_ptr(), 10, &mut layout),
            TcStatus::Ok
        );
        assert_eq!(tc_layout_len(layout), 20);
        let (mut br, mut bz) = (f64::NAN, f64::NAN);
        assert_eq!(
            tc_layout_field(layout, 0.003, 0.001, &mut br, &mut bz),
            TcStatus::Ok
        );
        let cfg = teamcoil::benchmark::BenchmarkConfig::default();
        let x = teamcoil::benchmark::DesignVector::reference();
        let l = teamcoil::benchmark::decode_design(&x, &cfg).unwrap();
        let s = teamcoil::field::field_coil(
            &l,
            teamcoil::field::EvalPoint { r: 0.003, z: 0.001 },
            &cfg.quad,
        )
        .unwrap();
        assert_eq!((br, bz), (s.b_r, s.b_z));
        tc_layout_free(layout);
    }
}

#[test]
fn turn_field_and_custom_layout_agree() {
    let t = TcTurn {
        r_inner: 0.01,
        r_outer: 0.012,
        z_lower: -0.001,
        z_upper: 0.001,
        current: 2.0,
    };
    unsafe {
        let (mut br1, mut bz1) = (0.0, 0.0);
        assert_eq!(
            tc_turn_field(&t, 0.004, 0.003, &mut br1, &mut bz1),
            TcStatus::Ok
        );
        let mut layout = ptr::null_mut();
        assert_eq!(tc_layout_from_turns(&t, 1, &mut layout), TcStatus::Ok);
        let (mut br2, mut bz2) = (0.0, 0.0);
        assert_eq!(
            tc_layout_field(layout, 0.004, 0.003, &mut br2, &mut bz2),
            TcStatus::Ok
        );
        assert_eq!((br1, bz1), (br2, bz2));
        tc_layout_free(layout);
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let mut layout = ptr::null_mut();
        assert_eq!(
            tc_layout_from_radii(ptr::null(), 10, &mut layout),
            TcStatus::NullPointer
        );
        assert!(layout.is_null());
        assert!(last_error().unwrap().contains("radii"));

        let mut radii = REFERENCE_RADII;
        radii[3] = 0.2;
        assert_eq!(
            tc_layout_from_radii(radii.as_ptr(), 10, &mut layout),
            TcStatus::OutOfBounds
        );

        let bad = TcTurn {
            r_inner: 0.02,
            r_outer: 0.01,
            z_lower: 0.0,
            z_upper: 0.001,
            current: 1.0,
        };
        assert_eq!(
            tc_turn_field(&bad, 0.0, 0.0, ptr::null_mut(), ptr::null_mut()),
            TcStatus::InvalidArgument
        );

        // Inner radius vanishing on the axis: the corner log argument is zero.
        let corner = TcTurn {
            r_inner: 1e-16,
            r_outer: 0.02,
            z_lower: 0.0,
            z_upper: 0.001,
            current: 1.0,
        };
        assert_eq!(
            tc_turn_field(&corner, 0.0, 0.0, ptr::null_mut(), ptr::null_mut()),
            TcStatus::CornerSingularity
        );

        assert_eq!(
            tc_layout_field(ptr::null(), 0.0, 0.0, ptr::null_mut(), ptr::null_mut()),
            TcStatus::NullPointer
        );
        let good = TcTurn {
            r_inner: 0.01,
            r_outer: 0.02,
            z_lower: 0.0,
            z_upper: 0.001,
            current: 1.0,
        };
        assert_eq!(
            tc_turn_field(&good, 0.0, 0.01, ptr::null_mut(), ptr::null_mut()),
            TcStatus::Ok
        );
        assert!(last_error().is_none());
    }
}

#[test]
fn status_strings_are_static_and_distinct() {
    let all = [
        TcStatus::Ok,
        TcStatus::NullPointer,
        TcStatus::InvalidArgument,
        TcStatus::OutOfBounds,
        TcStatus::CornerSingularity,
        TcStatus::Io,
        TcStatus::Parse,
        TcStatus::EvaluatorFailure,
        TcStatus::IndexOutOfRange,
        TcStatus::Panic,
    ];
    let names: std::collections::HashSet<String> = all
        .iter()
        .map(|&s| {
            unsafe { CStr::from_ptr(tc_status_string(s)) }
                .to_string_lossy()
                .into_owned()
        })
        .collect();
    assert_eq!(names.len(), all.len());
    let v = unsafe { CStr::from_ptr(tc_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn benchmark_config_optimize_and_archive() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "population = 10\ngenerations = 3\n").unwrap();
    let conf_c = CString::new(conf.to_str().unwrap()).unwrap();
    unsafe {
        let mut bench = ptr::null_mut();
        assert_eq!(
            tc_benchmark_from_config(conf_c.as_ptr(), &mut bench),
            TcStatus::Ok
        );
        let (mut f1, mut f2) = (0.0, 0.0);
        assert_eq!(
            tc_benchmark_evaluate(bench, REFERENCE_RADII.as_ptr(), 10, &mut f1, &mut f2),
            TcStatus::Ok
        );
        assert!(f1 > 0.0 && (f2 - 0.10515).abs() < 1e-12);

        let mut a = ptr::null_mut();
        let mut b = ptr::null_mut();
        assert_eq!(tc_optimize(bench, 0, 0, 9, &mut a), TcStatus::Ok);
        assert_eq!(tc_optimize(bench, 0, 0, 9, &mut b), TcStatus::Ok);
        let n = tc_archive_len(a);
        assert!(n > 0);
        assert_eq!(n, tc_archive_len(b));
        let mut genes = [0.0; 10];
        for i in 0..n {
            assert_eq!(
                tc_archive_member(a, i, &mut f1, &mut f2, genes.as_mut_ptr(), 10),
                TcStatus::Ok
            );
            assert!(genes.iter().all(|g| (0.005..=0.05).contains(g)));
            assert!((genes.iter().sum::<f64>() - f2).abs() < 1e-12);
        }
        let mut short = [0.0; 4];
        assert_eq!(
            tc_archive_member(a, 0, &mut f1, &mut f2, short.as_mut_ptr(), 4),
            TcStatus::InvalidArgument
        );
        assert_eq!(
            tc_archive_member(a, n, &mut f1, &mut f2, ptr::null_mut(), 0),
            TcStatus::IndexOutOfRange
        );

        let csv = [dir.path().join("a.csv"), dir.path().join("b.csv")];
        for (h, p) in [a, b].iter().zip(&csv) {
            let pc = CString::new(p.to_str().unwrap()).unwrap();
            assert_eq!(tc_archive_write_csv(*h, pc.as_ptr()), TcStatus::Ok);
        }
        assert_eq!(
            std::fs::read(&csv[0]).unwrap(),
            std::fs::read(&csv[1]).unwrap()
        );

        tc_archive_free(a);
        tc_archive_free(b);
        tc_benchmark_free(bench);
        tc_archive_free(ptr::null_mut());
        tc_benchmark_free(ptr::null_mut());
        tc_layout_free(ptr::null_mut());
    }
}

#[test]
fn config_errors_map_to_statuses() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.conf");
    std::fs::write(&bad, "colour = blue\n").unwrap();
    let missing = CString::new(dir.path().join("none.conf").to_str().unwrap()).unwrap();
    let bad = CString::new(bad.to_str().unwrap()).unwrap();
    unsafe {
        let mut bench = ptr::null_mut();
        assert_eq!(
            tc_benchmark_from_config(missing.as_ptr(), &mut bench),
            TcStatus::Io
        );
        assert_eq!(
            tc_benchmark_from_config(bad.as_ptr(), &mut bench),
            TcStatus::Parse
        );
        assert!(last_error().unwrap().contains("colour"));
        assert_eq!(
            tc_benchmark_from_config(ptr::null(), &mut bench),
            TcStatus::NullPointer
        );
        assert!(bench.is_null());
    }
}

fn target_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

/// Compiles the C smoke program against the generated header and the
/// static library, then runs it. Skipped when no C compiler is present.
#[test]
fn c_program_links_and_runs() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("libteamcoil_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping: no cc or no {}", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).contains(" ok"));
}
