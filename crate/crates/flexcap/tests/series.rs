use flexcap::series::{file_name, read_series, read_set, write_series, write_set};
use flexcap_core::domain::{HourlySeries, SeriesUnit};
use flexcap_core::synth::{generate, SynthSpec};

#[test]
fn series_round_trip_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let values: Vec<f64> = (0..8784).map(|h| (h as f64 * 0.37).sin().abs() / 3.0).collect();
    let s = HourlySeries::new(2008, SeriesUnit::Fraction, values).unwrap();
    let p = dir.path().join(file_name("pv", 2008));
    write_series(&p, &s).unwrap();
    let text = std::fs::read_to_string(&p).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "timestamp,value");
    assert_eq!(lines.len(), 8785);
    assert!(lines[1].starts_with("2008-01-01T00:00:00Z,"));
    assert!(lines[8784].starts_with("2008-12-31T23:00:00Z,"));
    assert!(text.contains("2008-02-29T12:00:00Z"));
    assert_eq!(read_series(&p, 2008, SeriesUnit::Fraction).unwrap(), s);
}

#[test]
fn malformed_files_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("x_2009.csv");
    std::fs::write(&p, "time,value\n2009-01-01T00:00:00Z,1\n").unwrap();
    assert!(read_series(&p, 2009, SeriesUnit::GwEl).is_err());
    std::fs::write(&p, "timestamp,value\n2009-01-01T01:00:00Z,1\n").unwrap();
    assert!(read_series(&p, 2009, SeriesUnit::GwEl).is_err());
    // too short
    std::fs::write(&p, "timestamp,value\n2009-01-01T00:00:00Z,1\n").unwrap();
    assert!(read_series(&p, 2009, SeriesUnit::GwEl).is_err());
    let mut rows = String::from("timestamp,value\n");
    let s = HourlySeries::new(2009, SeriesUnit::GwEl, vec![1.0; 8760]).unwrap();
    write_series(&p, &s).unwrap();
    let ok = std::fs::read_to_string(&p).unwrap();
    rows.push_str(&ok.lines().skip(1).map(|l| l.replace(",1", ",abc")).collect::<Vec<_>>().join("\n"));
    std::fs::write(&p, rows).unwrap();
    assert!(read_series(&p, 2009, SeriesUnit::GwEl).is_err());
    // availability above one violates the unit
    let over = HourlySeries {
        weather_year: 2009,
        unit: SeriesUnit::GwEl,
        values: vec![1.5; 8760],
    };
    write_series(&p, &over).unwrap();
    assert!(read_series(&p, 2009, SeriesUnit::Fraction).is_err());
}

#[test]
fn synthetic_sets_write_identically_and_read_back() {
    let spec = SynthSpec {
        first_year: 2009,
        last_year: 2010,
        ..SynthSpec::default()
    };
    let set = generate(&spec);
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let fa = write_set(a.path(), &set).unwrap();
    let fb = write_set(b.path(), &set).unwrap();
    assert_eq!(fa.len(), 16);
    for (x, y) in fa.iter().zip(&fb) {
        assert_eq!(std::fs::read(x).unwrap(), std::fs::read(y).unwrap());
    }
    let wanted: Vec<(String, SeriesUnit)> = set
        .iter()
        .map(|(n, y)| (n.clone(), y.values().next().unwrap().unit))
        .collect();
    let (back, files) = read_set(a.path(), &wanted, &[2009, 2010]).unwrap();
    assert_eq!(files.len(), 16);
    assert_eq!(back, set);
    assert!(read_set(a.path(), &wanted, &[2011]).is_err());
}
