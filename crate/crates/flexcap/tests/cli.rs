use std::path::Path;
use std::process::Command;

use flexcap_core::lp::import_interchange;
use serde_json::Value;

fn flexcap(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_flexcap")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(flexcap(&["run", "--no-such-flag"]).0, 2);
    assert_eq!(flexcap(&["frobnicate"]).0, 2);
    assert_eq!(flexcap(&["run", "--scenario", "strategic"]).0, 2);
    assert_eq!(flexcap(&["--help"]).0, 0);
}

#[test]
fn synth_validate_run_compare() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    let (code, _, err) = flexcap(&["synth", "--out", s(&data), "--first-year", "2009", "--last-year", "2010"]);
    assert_eq!(code, 0, "{err}");
    assert!(data.join("load_2009.csv").exists() && data.join("params.toml").exists());
    let params = data.join("params.toml");

    let (code, out, _) = flexcap(&["validate", "--params", s(&params), "--series", s(&data)]);
    assert_eq!(code, 0);
    assert!(out.contains("capacity-market: ok") && out.contains("reserve: ok"), "{out}");

    let res = dir.path().join("res");
    let common = ["--params", s(&params), "--series", s(&data), "--horizon-hours", "24"];
    let mut args = vec!["run", "--scenario", "capacity-market", "--invest-year", "2009", "--out", s(&res)];
    args.extend(common);
    let (code, _, err) = flexcap(&args);
    assert_eq!(code, 0, "{err}");
    let mut args = vec!["run", "--scenario", "reserve", "--activation-price", "500", "--out", s(&res)];
    args.extend(common);
    let (code, _, err) = flexcap(&args);
    assert_eq!(code, 0, "{err}");
    for f in [
        "capacity-market/prices_2009.csv",
        "capacity-market/dispatch_2009.csv",
        "capacity-market/reserve_2009.csv",
        "capacity-market/capacities.csv",
        "capacity-market/metrics.csv",
        "capacity-market/pdc_capacity-market_2009.csv",
        "reserve/metrics.csv",
        "reserve/result.json",
        "manifest.json",
        "flex_portfolio.csv",
    ] {
        assert!(res.join(f).exists(), "{f}");
    }
    let prices = std::fs::read_to_string(res.join("reserve/prices_2009.csv")).unwrap();
    assert_eq!(prices.lines().count(), 25);
    assert_eq!(prices.lines().next(), Some("hour,price"));
    let metrics = std::fs::read_to_string(res.join("reserve/metrics.csv")).unwrap();
    assert!(metrics.starts_with("window,avg_price,avg_price_simple,levy,supply_cost"));

    let manifest: Value = serde_json::from_slice(&std::fs::read(res.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["scenarios"][0]["name"], "reserve");
    assert!(manifest["series_files"]["load_2009.csv"].as_str().unwrap().len() == 64);
    assert!(manifest["outputs"]["reserve/prices_2009.csv"].is_string());
    assert!(manifest["params_toml"].as_str().unwrap().contains("activation_price = 500.0"));

    let cmp = dir.path().join("cmp.csv");
    let (code, _, err) = flexcap(&[
        "compare",
        s(&res.join("reserve")),
        s(&res.join("capacity-market")),
        "--out",
        s(&cmp),
    ]);
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(&cmp).unwrap();
    assert!(text.starts_with("section,key,market,reserve,ratio\n"));
    assert!(text.contains("\nflex-family,total,"));
    let size = text.lines().find(|l| l.starts_with("reserve,size,")).unwrap();
    assert!(size.starts_with("reserve,size,0,"), "{size}");

    // different inputs are not comparable
    let other = dir.path().join("other");
    let mut args = vec!["run", "--scenario", "reserve", "--carbon-price", "100", "--out", s(&other)];
    args.extend(common);
    assert_eq!(flexcap(&args).0, 0);
    let (code, _, err) = flexcap(&[
        "compare",
        s(&res.join("capacity-market")),
        s(&other.join("reserve")),
        "--out",
        s(&cmp),
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("hash"), "{err}");
}

#[test]
fn failures_write_a_tagged_error_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let (code, _, _) = flexcap(&[
        "run",
        "--scenario",
        "reserve",
        "--activation-price",
        "100",
        "--horizon-hours",
        "24",
        "--out",
        s(&out),
    ]);
    assert_eq!(code, 1);
    let e: Value = serde_json::from_slice(&std::fs::read(out.join("error.json")).unwrap()).unwrap();
    assert_eq!(e["stage"], "validate");
    assert_eq!(e["scenario"], "reserve");
    assert!(e["message"].as_str().unwrap().contains("activation_price"));

    let (code, _, _) = flexcap(&["run", "--series", s(&dir.path().join("missing")), "--out", s(&out)]);
    assert_eq!(code, 1);
    let e: Value = serde_json::from_slice(&std::fs::read(out.join("error.json")).unwrap()).unwrap();
    assert_eq!(e["stage"], "load-series");
}

#[test]
fn export_lp_writes_a_readable_interchange_file() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = flexcap(&[
        "export-lp",
        "--scenario",
        "capacity-market",
        "--horizon-hours",
        "24",
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(code, 0, "{err}");
    let mps = dir.path().join("capacity-market_2009_invest.mps");
    let p = import_interchange(&std::fs::read(&mps).unwrap()).unwrap();
    let index = std::fs::read_to_string(dir.path().join("capacity-market_2009_invest_index.csv")).unwrap();
    assert_eq!(index.lines().count(), 1 + p.num_vars() + p.num_rows());
    assert!(index.contains("balance"));

    let (code, _, err) = flexcap(&[
        "export-lp",
        "--scenario",
        "reserve",
        "--stage",
        "dispatch",
        "--horizon-hours",
        "24",
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(dir.path().join("reserve_2009_dispatch.mps").exists());
}
