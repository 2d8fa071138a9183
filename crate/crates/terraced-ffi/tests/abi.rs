//! Exercises the exported C surface the way a foreign caller would: build
//! handles, pull certified brackets and verdicts through out-pointers, and
//! release everything.

use std::ptr;

use terraced_ffi::*;

#[test]
fn norm_and_essential_brackets_through_the_abi() {
    let mut seq: *mut TerracedSeq = ptr::null_mut();
    assert_eq!(terraced_seq_cesaro(&mut seq), TerracedStatus::Ok);

    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    let mut bounded = TerracedVerdict::Undetermined;
    assert_eq!(
        terraced_norm_bracket(seq, 256, &mut lo, &mut hi, &mut bounded),
        TerracedStatus::Ok
    );
    assert_eq!(bounded, TerracedVerdict::Yes);
    assert!(lo <= 2.0 && 2.0 <= hi, "bracket [{lo}, {hi}]");

    let mut compact = TerracedVerdict::Undetermined;
    assert_eq!(
        terraced_essential_norm_bracket(seq, &mut lo, &mut hi, &mut compact),
        TerracedStatus::Ok
    );
    assert_eq!(compact, TerracedVerdict::No);
    assert!(lo <= 2.0 && 2.0 <= hi);

    let mut verdict = TerracedVerdict::Undetermined;
    assert_eq!(
        terraced_schatten_test(seq, 2.0, 12, &mut verdict, &mut lo, &mut hi),
        TerracedStatus::Ok
    );
    assert_eq!(verdict, TerracedVerdict::No);

    unsafe { terraced_seq_free(seq) };
}

#[test]
fn interval_and_cut_sequence_round_trip() {
    let re = [1.0f64, 1.0];
    let im = [0.0f64, 0.0];
    let mut seq: *mut TerracedSeq = ptr::null_mut();
    assert_eq!(
        terraced_seq_finite(re.as_ptr(), im.as_ptr(), 2, &mut seq),
        TerracedStatus::Ok
    );

    let mut report = TerracedIntervalReport {
        a: 0,
        b: 0,
        mu: 0.0,
        l: 0.0,
        k: 0.0,
        j: 0.0,
        argmin_c: 0,
    };
    assert_eq!(
        terraced_interval_report(seq, 0, 1, &mut report),
        TerracedStatus::Ok
    );
    assert!((report.mu - 2.0).abs() < 1e-12);
    assert!((report.l - 1.0).abs() < 1e-9);
    assert!((report.k - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
    assert!((report.j - 1.0).abs() < 1e-12);

    // Inverted endpoints are an argument error.
    assert_eq!(
        terraced_interval_report(seq, 5, 3, &mut report),
        TerracedStatus::InvalidArgument
    );

    let mut cuts: *mut TerracedEpsl = ptr::null_mut();
    assert_eq!(
        terraced_epsl_build(seq, 0.5, 256, &mut cuts),
        TerracedStatus::Ok
    );
    let mut len = 0usize;
    assert_eq!(terraced_epsl_len(cuts, &mut len), TerracedStatus::Ok);
    assert_eq!(len, 2);
    let mut cut = u64::MAX;
    assert_eq!(terraced_epsl_cut(cuts, 1, &mut cut), TerracedStatus::Ok);
    assert_eq!(cut, 2);
    assert_eq!(
        terraced_epsl_cut(cuts, 9, &mut cut),
        TerracedStatus::InvalidArgument
    );
    let mut kind = TerracedEpslStatusKind::Undetermined;
    let mut length = usize::MAX;
    assert_eq!(
        terraced_epsl_status(cuts, &mut kind, &mut length),
        TerracedStatus::Ok
    );
    assert_eq!(kind, TerracedEpslStatusKind::Finite);
    assert_eq!(length, 1);

    unsafe {
        terraced_epsl_free(cuts);
        terraced_seq_free(seq);
    }
}

#[test]
fn json_report_and_string_release() {
    let mut seq: *mut TerracedSeq = ptr::null_mut();
    assert_eq!(terraced_seq_power(1.5, 1.0, &mut seq), TerracedStatus::Ok);
    let mut text: *mut std::ffi::c_char = ptr::null_mut();
    assert_eq!(terraced_analyze_json(seq, &mut text), TerracedStatus::Ok);
    let rendered = unsafe { std::ffi::CStr::from_ptr(text) }
        .to_str()
        .unwrap()
        .to_string();
    assert!(rendered.contains("\"bounded\": \"yes\""));
    assert!(rendered.contains("\"compact\": \"yes\""));
    unsafe {
        terraced_string_free(text);
        terraced_seq_free(seq);
    }
}

#[test]
fn save_and_load_through_the_abi() {
    let dir = std::env::temp_dir().join(format!("terraced-abi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("seq.txt");
    let path_c = std::ffi::CString::new(path.to_str().unwrap()).unwrap();

    let re = [0.25f64, -1.5];
    let im = [0.0f64, 2.0];
    let mut seq: *mut TerracedSeq = ptr::null_mut();
    assert_eq!(
        terraced_seq_finite(re.as_ptr(), im.as_ptr(), 2, &mut seq),
        TerracedStatus::Ok
    );
    assert_eq!(terraced_seq_save(seq, path_c.as_ptr()), TerracedStatus::Ok);

    let mut loaded: *mut TerracedSeq = ptr::null_mut();
    assert_eq!(
        terraced_seq_load(path_c.as_ptr(), &mut loaded),
        TerracedStatus::Ok
    );
    for (k, (r, i)) in re.iter().zip(&im).enumerate() {
        let (mut lr, mut li) = (0.0, 0.0);
        assert_eq!(
            terraced_seq_eval(loaded, k as u64, &mut lr, &mut li),
            TerracedStatus::Ok
        );
        assert_eq!((lr, li), (*r, *i));
    }
    assert_eq!(
        terraced_seq_load(c"/definitely/not/here.seq".as_ptr(), &mut loaded),
        TerracedStatus::IoError
    );

    unsafe {
        terraced_seq_free(seq);
        terraced_seq_free(loaded);
    }
    std::fs::remove_dir_all(&dir).ok();
}
