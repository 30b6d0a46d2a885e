mod common;

use common::*;
use rand::Rng;
use tcvqe::analysis::cbs::{cardinal, cbs_corr, cbs_rhf, composite_energy};
use tcvqe::analysis::morse::{morse, morse_fit, morse_fit_window};
use tcvqe::analysis::scan::{read_curve, run_scan, scan_csv, FlatConfig, ScanConfig};
use tcvqe::analysis::AnalysisError;
use tcvqe::integrals::ReferenceTable;

fn grid() -> Vec<f64> {
    (0..15).map(|i| 0.60 + 0.02 * i as f64).collect()
}

#[test]
fn morse_offset_and_scale_invariance() {
    let r = grid();
    let e: Vec<f64> = r.iter().map(|&x| morse(x, 0.16, 2.0, 0.74, -1.15)).collect();
    let base = morse_fit(&r, &e, 0.5039).unwrap();
    let shifted: Vec<f64> = e.iter().map(|v| v + 0.3).collect();
    let f = morse_fit(&r, &shifted, 0.5039).unwrap();
    assert!((f.req - base.req).abs() < 1e-9);
    assert!((f.e0 - base.e0 - 0.3).abs() < 1e-9);
    assert!((f.omega - base.omega).abs() < 1e-6);
    let scaled: Vec<f64> = e.iter().map(|v| 2.0 * v).collect();
    let f = morse_fit(&r, &scaled, 0.5039).unwrap();
    assert!((f.de - 2.0 * base.de).abs() < 1e-9);
    assert!((f.a - base.a).abs() < 1e-8);
}

#[test]
fn morse_sigma_matches_bootstrap_spread() {
    let r = grid();
    let clean: Vec<f64> = r.iter().map(|&x| morse(x, 0.17, 1.9, 0.745, -1.15)).collect();
    let mut rng = rng(7);
    let noisy = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<f64> {
        clean
            .iter()
            .map(|v| v + 2e-5 * rng.random_range(-1.0..1.0f64))
            .collect()
    };
    let fit = morse_fit(&r, &noisy(&mut rng), 0.5039).unwrap();
    let reqs: Vec<f64> = (0..200)
        .map(|_| morse_fit(&r, &noisy(&mut rng), 0.5039).unwrap().req)
        .collect();
    let mean = reqs.iter().sum::<f64>() / reqs.len() as f64;
    let sd = (reqs.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (reqs.len() - 1) as f64).sqrt();
    let ratio = fit.sigma[2] / sd;
    assert!(ratio > 0.5 && ratio < 2.0, "sigma {} vs spread {sd}", fit.sigma[2]);
}

#[test]
fn morse_window_and_errors() {
    let r = grid();
    let e: Vec<f64> = r.iter().map(|&x| morse(x, 0.17, 1.9, 0.745, -1.15)).collect();
    let f = morse_fit_window(&r, &e, 0.5039, 7).unwrap();
    assert_eq!(f.n_points, 7);
    assert!((f.req - 0.745).abs() < 1e-8);
    assert!(matches!(morse_fit(&r[..4], &e[..4], 0.5), Err(AnalysisError::Input(_))));
    let falling: Vec<f64> = r.iter().map(|x| -x).collect();
    assert!(matches!(morse_fit(&r, &falling, 0.5), Err(AnalysisError::NoMinimum)));
}

#[test]
fn fixture_cbs_limits() {
    let table = ReferenceTable::load(fixture("cbs/h2_cbs.csv")).unwrap();
    let series = |method: &str, corr: bool| -> (Vec<f64>, Vec<f64>) {
        let mut v: Vec<(f64, f64)> = table
            .rows
            .iter()
            .filter(|r| r.method == method)
            .map(|r| {
                let x = f64::from(cardinal(&r.basis).unwrap());
                (
                    x,
                    if corr {
                        r.correlation_energy.unwrap()
                    } else {
                        r.total_energy
                    },
                )
            })
            .collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v.into_iter().unzip()
    };
    let (x, e) = series("rhf", false);
    assert_eq!(x, vec![2.0, 3.0, 4.0, 5.0]);
    let rhf = cbs_rhf(&x, &e).unwrap();
    assert!(rhf.flag.is_none());
    assert!((rhf.e_cbs - e[3]).abs() < (e[3] - e[2]).abs());
    let (x, c) = series("ccsd", true);
    let corr = cbs_corr(&x, &c).unwrap();
    // more negative than the largest basis
    assert!(corr.e_cbs < c[c.len() - 1]);
    assert!(corr.params[1] > 0.0);
    let total = composite_energy(rhf.e_cbs, corr.e_cbs);
    assert!(total < -1.17 && total > -1.18, "{total}");
}

#[test]
fn cbs_rejects_short_series() {
    assert!(cbs_rhf(&[2.0, 3.0], &[-1.0, -1.1]).is_err());
    assert!(cbs_corr(&[2.0], &[-0.03]).is_err());
}

#[test]
fn scan_handles_missing_points() {
    let dir = tempfile::tempdir().unwrap();
    let src = fixture("h2_631g/h2_631g_0.7400.fcidump");
    std::fs::copy(&src, dir.path().join("a.fcidump")).unwrap();
    std::fs::write(
        dir.path().join("index.csv"),
        "species,basis,geometry,file\nH2,6-31G,0.7400,a.fcidump\nH2,6-31G,0.7600,missing.fcidump\n",
    )
    .unwrap();
    std::fs::write(
        dir.path().join("scan.cfg"),
        "index = index.csv\nengine = sector\njobs = 2\n",
    )
    .unwrap();
    let cfg = FlatConfig::parse(&std::fs::read_to_string(dir.path().join("scan.cfg")).unwrap()).unwrap();
    let cfg = ScanConfig::from_flat(&cfg, dir.path()).unwrap();
    let rows = run_scan(&cfg).unwrap();
    assert_eq!(rows.len(), 2);
    let (v, e) = (rows[0].vqe.unwrap(), rows[0].exact.unwrap());
    assert!((v - e).abs() < 1e-6);
    assert!(rows[0].correlation.unwrap() < 0.0);
    assert!(rows[1].vqe.is_none() && rows[1].note.contains("missing"));
    let csv = scan_csv(&rows);
    assert!(csv.lines().nth(2).unwrap().contains(",NA,"));
    let curve = read_curve(&csv, "vqe").unwrap();
    assert_eq!(curve.len(), 1);
    // same inputs, same bytes, regardless of worker count
    let mut one = cfg.clone();
    one.jobs = 1;
    assert_eq!(scan_csv(&run_scan(&one).unwrap()), csv);
}
