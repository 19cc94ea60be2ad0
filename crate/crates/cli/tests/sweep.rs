use std::path::PathBuf;

use ptscatter::RegimeFlag;
use ptscatter_cli::singularity::default_window;
use ptscatter_cli::{
    compute_singularity, compute_sweep, run_sweep, OutputFormat, Range, SingularityRequest,
    SweepConfig, SweepOutput, SweepOverrides, SweepRecord,
};

fn config(a: &str, b: &str, k: &str) -> SweepConfig {
    SweepOverrides {
        a_range: Some(a.parse().unwrap()),
        b_range: Some(b.parse().unwrap()),
        k_range: Some(k.parse().unwrap()),
        output: Some(PathBuf::from("-")),
        ..Default::default()
    }
    .resolve(None)
    .unwrap()
}

fn values(r: &SweepRecord) -> Vec<Option<f64>> {
    vec![
        Some(r.A),
        Some(r.B),
        Some(r.k),
        r.T,
        r.R_left,
        r.R_right,
        r.unitarity_defect,
        r.reciprocity_defect,
        r.pseudo_unitarity_defect,
        r.oracle_dt,
        r.oracle_dr_left,
        r.oracle_dr_right,
    ]
}

fn bits(v: &[Option<f64>]) -> Vec<Option<u64>> {
    v.iter().map(|x| x.map(f64::to_bits)).collect()
}

#[test]
fn half_integer_a_sweep_is_unitary() {
    let out = compute_sweep(&config("0.5", "0.25", "0.1:3:30")).unwrap();
    assert_eq!(out.records.len(), 30);
    for r in &out.records {
        assert!(r.unitarity_defect.unwrap().abs() < 1e-10);
        assert!(r.reciprocity_defect.unwrap().abs() < 1e-10);
    }
    assert_eq!(out.regime_reports.len(), 1);
    let report = &out.regime_reports[0];
    assert!(report.has(RegimeFlag::UnitaryCase1));
    assert!(report.has(RegimeFlag::Reciprocal));
    assert!(report.has(RegimeFlag::PseudoUnitary));
}

#[test]
fn generic_point_is_pseudo_unitary_but_handed() {
    let out = compute_sweep(&config("0.3", "0.8", "0.1:3:30")).unwrap();
    for r in &out.records {
        assert!(r.pseudo_unitarity_defect.unwrap().abs() < 1e-9);
    }
    assert!(out.records[0].reciprocity_defect.unwrap().abs() >= 1e-2);
    let report = &out.regime_reports[0];
    assert!(report.has(RegimeFlag::GenericHanded));
    assert!(report.residual(RegimeFlag::Reciprocal) > 1e-3);
}

#[test]
fn degenerate_grid_gives_one_row() {
    let out = compute_sweep(&config("0.3", "0.8", "1")).unwrap();
    assert_eq!(out.records.len(), 1);
    assert_eq!(out.regime_reports.len(), 1);
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config("0.3", "0.8", "1");
    cfg.output_path = dir.path().join("one.csv");
    run_sweep(&cfg).unwrap();
    let text = std::fs::read_to_string(&cfg.output_path).unwrap();
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn records_follow_grid_order() {
    let cfg = config("-1:1:3", "0:1:2", "0.5:1.5:4");
    let out = compute_sweep(&cfg).unwrap();
    assert_eq!(out.records.len(), 24);
    let mut expected = Vec::new();
    for a in [-1.0, 0.0, 1.0] {
        for b in [0.0, 1.0] {
            for k in "0.5:1.5:4".parse::<Range>().unwrap().values() {
                expected.push((a, b, k));
            }
        }
    }
    let got: Vec<_> = out.records.iter().map(|r| (r.A, r.B, r.k)).collect();
    assert_eq!(got, expected);
    let again = compute_sweep(&cfg).unwrap();
    assert_eq!(out, again);
}

#[test]
fn json_round_trip_is_bit_exact() {
    let mut cfg = config("-1.3:1.7:4", "-0.4:0.9:3", "0.05:2.9:7");
    cfg.output_format = OutputFormat::Json;
    let out = compute_sweep(&cfg).unwrap();
    let mut buf = Vec::new();
    out.write_json(&mut buf).unwrap();
    let back: SweepOutput = serde_json::from_slice(&buf).unwrap();
    assert_eq!(back.config, out.config);
    assert_eq!(back.records.len(), out.records.len());
    for (x, y) in out.records.iter().zip(&back.records) {
        assert_eq!(bits(&values(x)), bits(&values(y)));
    }
    assert_eq!(back.regime_reports, out.regime_reports);
    for (x, y) in out.regime_reports.iter().zip(&back.regime_reports) {
        for (a, b) in x.residuals.values().zip(y.residuals.values()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}

#[test]
fn csv_and_json_agree() {
    let mut cfg = config("0.1:1.1:3", "0.25:1.75:3", "0.2:2.2:5");
    cfg.oracle_enabled = true;
    let out = compute_sweep(&cfg).unwrap();
    let mut csv_buf = Vec::new();
    out.write_csv(&mut csv_buf).unwrap();
    let mut json_buf = Vec::new();
    out.write_json(&mut json_buf).unwrap();
    let from_json: SweepOutput = serde_json::from_slice(&json_buf).unwrap();

    let mut reader = csv::Reader::from_reader(csv_buf.as_slice());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header.join(","),
        "A,B,k,T,R_left,R_right,unitarity_defect,reciprocity_defect,pseudo_unitarity_defect,oracle_dt,oracle_dr_left,oracle_dr_right"
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), from_json.records.len());
    for (row, rec) in rows.iter().zip(&from_json.records) {
        let parsed: Vec<Option<f64>> = row
            .iter()
            .map(|f| (!f.is_empty()).then(|| f.parse::<f64>().unwrap()))
            .collect();
        assert_eq!(bits(&parsed), bits(&values(rec)));
        // every printed value carries at most 17 significant digits
        for f in row.iter() {
            let digits = f
                .split(['e', 'E'])
                .next()
                .unwrap()
                .chars()
                .filter(char::is_ascii_digit)
                .collect::<String>();
            assert!(digits.trim_start_matches('0').len() <= 17, "{f}");
        }
    }
    for rec in &from_json.records {
        assert!(rec.oracle_dt.unwrap() < 1e-8);
        assert!(rec.oracle_dr_left.unwrap() < 1e-8);
        assert!(rec.oracle_dr_right.unwrap() < 1e-8);
    }
}

#[test]
fn csv_without_oracle_has_base_columns_only() {
    let out = compute_sweep(&config("0.5", "0.25", "1")).unwrap();
    let mut buf = Vec::new();
    out.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "A,B,k,T,R_left,R_right,unitarity_defect,reciprocity_defect,pseudo_unitarity_defect"
    );
}

#[test]
fn oracle_failure_is_recorded_not_fatal() {
    let mut cfg = config("0.3", "0.8", "0.5:1:2");
    cfg.oracle_enabled = true;
    cfg.tolerances.oracle.max_steps = 5;
    let out = compute_sweep(&cfg).unwrap();
    assert_eq!(out.oracle_failures(), 2);
    for r in &out.records {
        assert!(r.T.is_some());
        assert!(r.oracle_dt.is_none());
        assert!(r.error.as_deref().unwrap().starts_with("oracle"));
    }
}

#[test]
fn writes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config("0.5", "0.5", "0.1:1:4");
    cfg.output_format = OutputFormat::Json;
    cfg.output_path = dir.path().join("nested").join("out.json");
    let out = run_sweep(&cfg).unwrap();
    let text = std::fs::read_to_string(&cfg.output_path).unwrap();
    let back: SweepOutput = serde_json::from_str(&text).unwrap();
    assert_eq!(back, out);
    assert!(back.regime_reports[0].has(RegimeFlag::Invisible));
}

fn singularity(n: u32, alpha: f64, window: Option<(f64, f64)>) -> ptscatter::SingularityScan {
    compute_singularity(&SingularityRequest {
        n,
        alpha,
        window: window.unwrap_or_else(|| default_window(alpha)),
        samples: 201,
        format: OutputFormat::Csv,
        output: PathBuf::from("-"),
    })
    .unwrap()
}

#[test]
fn singularity_reports() {
    let scan = singularity(0, 1.0, None);
    assert!(scan.pole_confirmed);
    assert!((scan.k_star - 1.0).abs() <= scan.spacing);
    assert_eq!(scan.samples.len(), 201);

    let away = singularity(0, 1.0, Some((2.0, 3.0)));
    assert!(away.pole_k.is_none());
    assert!(!away.pole_confirmed);

    let higher = singularity(2, 0.7, None);
    assert!(higher.pole_confirmed);
    assert!((higher.pole_k.unwrap() - 0.7).abs() < 1e-12);
    assert!((higher.k_star - 0.7).abs() <= higher.spacing);
}

#[test]
fn singularity_csv_layout() {
    let scan = singularity(0, 1.0, None);
    let mut buf = Vec::new();
    ptscatter_cli::singularity::write_singularity_csv(&scan, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.contains("# pole_confirmed = true"));
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "k,T,R_left,R_right,capped");
    assert_eq!(data.len(), 202);
}
