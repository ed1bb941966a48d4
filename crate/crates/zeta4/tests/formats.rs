use zeta4::formats::{
    read_ladder, read_samples, read_zeros, sidecar_path, write_ladder, write_samples, write_zeros, GeometryRecord,
    LadderMeta, Sample,
};
use zeta4_core::ladder::{Convention, LadderCurve};
use zeta4_core::zeros::ZeroGeometry;

fn curve() -> LadderCurve {
    let phi: Vec<f64> = (0..=40).map(|i| (i as f64 * 0.05).powi(3) + 0.1 * i as f64).collect();
    LadderCurve::from_samples(100.0, 102.0, 0.05, phi, Convention::LocalLog, 100.0, 1e-9).unwrap()
}

#[test]
fn ladder_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("phi.csv");
    let c = curve();
    write_ladder(&path, &c).unwrap();
    assert!(sidecar_path(&path).exists());
    let back = read_ladder(&path).unwrap();
    assert_eq!(back.phi, c.phi);
    assert_eq!((back.t0, back.t1, back.step), (c.t0, c.t1, c.step));
    assert_eq!(back.convention, Convention::LocalLog);

    let meta: LadderMeta = serde_json::from_str(&std::fs::read_to_string(sidecar_path(&path)).unwrap()).unwrap();
    assert_eq!(meta.convention, Convention::LocalLog);
    assert_eq!(meta.tol_ladder, 1e-9);

    let header = std::fs::read_to_string(&path).unwrap();
    assert!(header.starts_with("t,phi\n"));
}

#[test]
fn missing_sidecar_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("phi.csv");
    write_ladder(&path, &curve()).unwrap();
    std::fs::remove_file(sidecar_path(&path)).unwrap();
    assert!(read_ladder(&path).is_err());
}

#[test]
fn zero_lists_round_trip() {
    let zeros = vec![14.134_725_141_734_693, 21.022_039_638_771_555, 25.010_857_580_145_688];
    let mut buf = Vec::new();
    write_zeros(&mut buf, &zeros).unwrap();
    assert!(buf.starts_with(b"gamma\n"));
    assert_eq!(read_zeros(&buf[..]).unwrap(), zeros);
}

#[test]
fn samples_round_trip() {
    let samples = vec![
        Sample {
            t: 10240.0,
            value: 1.5e7,
            err_bound: 3e-2,
        },
        Sample {
            t: 20480.0,
            value: 3.9e7,
            err_bound: 8e-2,
        },
    ];
    let mut buf = Vec::new();
    write_samples(&mut buf, &samples).unwrap();
    assert!(buf.starts_with(b"T,value,err_bound\n"));
    assert_eq!(read_samples(&buf[..]).unwrap(), samples);
}

#[test]
fn geometry_record_fields() {
    let geom = ZeroGeometry {
        rho: Some(17.0),
        tan_beta: Some(0.4),
        ..ZeroGeometry::new(14.1, 21.0).unwrap()
    };
    let v = serde_json::to_value(GeometryRecord::new(&geom, vec![])).unwrap();
    for key in ["gamma", "gamma_next", "rho", "tan_beta", "gamma_bar", "delta_gap", "rho_bar", "checks"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert!(v["gamma_bar"].is_null());
    assert_eq!(v["rho"], 17.0);
}
