use std::f64::consts::PI;
use std::ffi::CStr;
use std::ptr;

use qpc_ffi::*;

fn handle(f: impl FnOnce(*mut *mut QpcProcess) -> QpcStatus) -> *mut QpcProcess {
    let mut p = ptr::null_mut();
    assert_eq!(f(&mut p), QpcStatus::Ok);
    assert!(!p.is_null());
    p
}

fn last_error() -> String {
    let m = qpc_last_error_message();
    assert!(!m.is_null());
    unsafe { CStr::from_ptr(m) }.to_string_lossy().into_owned()
}

#[test]
fn entries_round_trip() {
    unsafe {
        let cz = handle(|out| qpc_process_cz(out));
        assert_eq!(qpc_process_dim(cz), 4);
        let mut buf = vec![0.0; 2 * 256];
        assert_eq!(qpc_process_entries(cz, buf.as_mut_ptr(), buf.len()), QpcStatus::Ok);
        let trace: f64 = (0..16).map(|i| buf[2 * (i * 16 + i)]).sum();
        assert!((trace - 1.0).abs() < 1e-12);

        let copy = handle(|out| qpc_process_from_entries(4, buf.as_ptr(), 1e-9, out));
        let mut f = 0.0;
        assert_eq!(qpc_process_fidelity(copy, cz, &mut f), QpcStatus::Ok);
        assert!((f - 1.0).abs() < 1e-12);

        assert_eq!(qpc_process_entries(cz, buf.as_mut_ptr(), 10), QpcStatus::BufferTooSmall);
        qpc_process_free(copy);
        qpc_process_free(cz);
    }
}

#[test]
fn demo_measures() {
    unsafe {
        let chi = handle(|out| qpc_process_demo(PI, 0.02, out));
        let mut a = 0.0;
        assert_eq!(qpc_alpha(chi, QPC_KIND_ENTANGLEMENT, &mut a), QpcStatus::Ok);
        assert!((a - 0.909).abs() < 5e-3, "{a}");
        let mut b = 0.0;
        assert_eq!(qpc_beta(chi, QPC_KIND_COHERENCE_CREATION, &mut b), QpcStatus::Ok);
        assert!(b.abs() < 1e-6, "{b}");
        qpc_process_free(chi);

        let cz = handle(|out| qpc_process_cz(out));
        let mut f = 0.0;
        assert_eq!(qpc_fidelity_threshold(cz, QPC_KIND_ENTANGLEMENT, &mut f), QpcStatus::Ok);
        assert!((f - 0.5).abs() < 5e-3, "{f}");
        qpc_process_free(cz);
    }
}

#[test]
fn compose_and_mix() {
    unsafe {
        let a = handle(|out| qpc_process_demo(PI / 2.0, 0.0, out));
        let twice = handle(|out| qpc_process_compose(a, a, out));
        let target = handle(|out| qpc_process_demo(PI, 0.0, out));
        let mut f = 0.0;
        assert_eq!(qpc_process_fidelity(twice, target, &mut f), QpcStatus::Ok);
        assert!((f - 1.0).abs() < 1e-10);

        let id = handle(|out| qpc_process_identity(4, out));
        let mixed = handle(|out| qpc_process_mix(0.25, target, id, out));
        let mut g = 0.0;
        assert_eq!(qpc_process_fidelity(mixed, target, &mut g), QpcStatus::Ok);
        // tr(chi_id chi_cz) = 1/4 for the CZ gate
        assert!((g - (0.25 + 0.75 * 0.25)).abs() < 1e-10, "{g}");
        for p in [a, twice, target, id, mixed] {
            qpc_process_free(p);
        }
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(qpc_process_identity(0, &mut p), QpcStatus::InvalidArgument);
        assert!(last_error().contains("dimension"));

        let mut bad = vec![0.0; 2 * 16];
        bad[0] = 2.0;
        assert_eq!(qpc_process_from_entries(2, bad.as_ptr(), 1e-9, &mut p), QpcStatus::NotPhysical);
        assert!(p.is_null());

        let mut v = 0.0;
        assert_eq!(qpc_alpha(ptr::null(), QPC_KIND_ENTANGLEMENT, &mut v), QpcStatus::NullPointer);
        let id = handle(|out| qpc_process_identity(4, out));
        assert_eq!(qpc_alpha(id, 99, &mut v), QpcStatus::InvalidArgument);
        assert!(last_error().contains("kind"));
        assert_eq!(qpc_process_demo(-1.0, 0.0, &mut p), QpcStatus::InvalidArgument);
        assert_eq!(qpc_process_dim(ptr::null()), 0);
        qpc_process_free(ptr::null_mut());
        qpc_process_free(id);
    }
}

#[test]
fn header_declares_the_interface() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/qpc.h")).unwrap();
    for name in [
        "typedef struct QpcProcess QpcProcess",
        "QPC_STATUS_SOLVER_FAILURE",
        "QPC_KIND_SUPERPOSITION",
        "qpc_process_from_entries",
        "qpc_process_free",
        "qpc_alpha",
        "qpc_beta",
        "qpc_fidelity_threshold",
        "qpc_last_error_message",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
