//! Hourly series files: `{name}_{year}.csv` with header `timestamp,value`,
//! one row per hour of the calendar year, ISO-8601 UTC timestamps.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use chrono::{Duration, NaiveDate, NaiveDateTime};
use flexcap_core::domain::{hours_in_year, HourlySeries, SeriesUnit};
use flexcap_core::synth::SeriesSet;

const TS_FORMAT: &str = "%Y-%m-%dT%H:%M:%SZ";

pub fn file_name(name: &str, year: i32) -> String {
    format!("{name}_{year}.csv")
}

fn year_start(year: i32) -> anyhow::Result<NaiveDateTime> {
    NaiveDate::from_ymd_opt(year, 1, 1)
        .and_then(|d| d.and_hms_opt(0, 0, 0))
        .with_context(|| format!("year {year} out of range"))
}

pub fn write_series(path: &Path, s: &HourlySeries) -> anyhow::Result<()> {
    let start = year_start(s.weather_year)?;
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(["timestamp", "value"])?;
    for (h, v) in s.values.iter().enumerate() {
        let ts = (start + Duration::hours(h as i64)).format(TS_FORMAT).to_string();
        w.write_record([ts, v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_series(path: &Path, year: i32, unit: SeriesUnit) -> anyhow::Result<HourlySeries> {
    let ctx = || format!("reading {}", path.display());
    let mut r = csv::Reader::from_path(path).with_context(ctx)?;
    let header = r.headers().with_context(ctx)?.clone();
    if header.iter().collect::<Vec<_>>() != ["timestamp", "value"] {
        bail!("{}: header must be `timestamp,value`", path.display());
    }
    let start = year_start(year)?;
    let mut values = Vec::with_capacity(hours_in_year(year));
    for (h, rec) in r.records().enumerate() {
        let rec = rec.with_context(ctx)?;
        let line = h + 2;
        let ts = NaiveDateTime::parse_from_str(&rec[0], TS_FORMAT)
            .with_context(|| format!("{} line {line}: bad timestamp {:?}", path.display(), &rec[0]))?;
        if ts != start + Duration::hours(h as i64) {
            bail!("{} line {line}: expected hour {h} of {year}, got {}", path.display(), &rec[0]);
        }
        let v: f64 = rec[1]
            .trim()
            .parse()
            .with_context(|| format!("{} line {line}: bad value {:?}", path.display(), &rec[1]))?;
        values.push(v);
    }
    HourlySeries::new(year, unit, values).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

/// Writes every series of the set; returns the files in write order.
pub fn write_set(dir: &Path, set: &SeriesSet) -> anyhow::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut out = Vec::new();
    for (name, years) in set {
        for (year, s) in years {
            let p = dir.join(file_name(name, *year));
            write_series(&p, s)?;
            out.push(p);
        }
    }
    Ok(out)
}

/// Reads the named series for the given years.
pub fn read_set(dir: &Path, wanted: &[(String, SeriesUnit)], years: &[i32]) -> anyhow::Result<(SeriesSet, Vec<PathBuf>)> {
    let mut set = SeriesSet::new();
    let mut files = Vec::new();
    for (name, unit) in wanted {
        for &year in years {
            let p = dir.join(file_name(name, year));
            if !p.exists() {
                bail!("missing series file {}", p.display());
            }
            set.entry(name.clone()).or_default().insert(year, read_series(&p, year, *unit)?);
            files.push(p);
        }
    }
    Ok((set, files))
}
