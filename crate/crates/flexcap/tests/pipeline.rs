use flexcap::backend::BackendChoice;
use flexcap::params::{Params, CAPACITY_MARKET, RESERVE};
use flexcap::pipeline::{execute, DataSource, RunPlan};
use flexcap_core::domain::FlexMode;
use flexcap_core::synth::SynthSpec;

fn plan(out: &std::path::Path, jobs: usize) -> RunPlan {
    let mut params = Params::desk();
    params.run.horizon_hours = Some(24);
    params.run.dispatch_years = vec![2009, 2010];
    RunPlan {
        params,
        data: DataSource::Synthetic(SynthSpec::default()),
        backend: BackendChoice::Reference { size_limit: 100_000 },
        out_dir: out.to_path_buf(),
        jobs,
        emit_lp: false,
    }
}

#[test]
fn parallel_windows_match_sequential_ones() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let scen = vec![RESERVE.to_string()];
    let ra = execute(&plan(a.path(), 1), &scen).unwrap();
    let rb = execute(&plan(b.path(), 3), &scen).unwrap();
    assert_eq!(ra.results[0].result, rb.results[0].result);
    assert_eq!(ra.results[0].result.windows.len(), 2);
    for f in ["reserve/prices_2010.csv", "reserve/metrics.csv", "manifest.json"] {
        assert_eq!(
            std::fs::read(a.path().join(f)).unwrap(),
            std::fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
    let r = &ra.results[0].result;
    for (w, m) in r.windows.iter().zip(&r.metrics) {
        assert_eq!(w.prices.len(), 24);
        assert_eq!(m.activation_hours, w.activation_hours());
        assert!((m.supply_cost - m.avg_price - m.levy).abs() < 1e-9);
    }
}

#[test]
fn reoptimized_flex_is_reported_per_window() {
    let dir = tempfile::tempdir().unwrap();
    let mut p = plan(dir.path(), 2);
    p.params.run.flex_mode = FlexMode::ReoptimizePerYear;
    let r = execute(&p, &[CAPACITY_MARKET.to_string()]).unwrap();
    let res = &r.results[0].result;
    assert!(res.windows.iter().all(|w| !w.flex_energy.is_empty()));
    let table = std::fs::read_to_string(dir.path().join("capacity-market/flex_energy.csv")).unwrap();
    assert!(table.starts_with("window,id,family,energy\n"));
    assert!(table.lines().any(|l| l.starts_with("2010,")));
    assert!(table.lines().any(|l| l.starts_with("invest,")));
}
