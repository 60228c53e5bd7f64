//! Deterministic synthetic weather, load and heat series.
//!
//! Each calendar year is drawn from its own ChaCha stream keyed by seed and
//! year, so any subset of years reproduces exactly. Every January carries a
//! multi-day cold, dark and calm spell.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::defaults::{
    DH_COP_SERIES, DH_DEMAND_SERIES, INFLOW_SERIES, LOAD_SERIES, OFFSHORE_SERIES, ONSHORE_SERIES, PV_SERIES,
    ROR_SERIES,
};
use crate::domain::{hours_in_year, HourlySeries, SeriesUnit};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub seed: u64,
    pub first_year: i32,
    pub last_year: i32,
    /// Annual base electric load (TWh).
    pub base_load_twh: f64,
    /// Annual district heat (TWh_th), met exactly in every calendar year.
    pub dh_heat_twh: f64,
    /// Mean reservoir inflow (GW).
    pub reservoir_inflow_gw: f64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            seed: 42,
            first_year: 2008,
            last_year: 2015,
            base_load_twh: 500.0,
            dh_heat_twh: 95.0,
            reservoir_inflow_gw: 0.25,
        }
    }
}

pub type SeriesSet = BTreeMap<String, BTreeMap<i32, HourlySeries>>;

struct Noise {
    rng: ChaCha8Rng,
}

impl Noise {
    fn normal(&mut self) -> f64 {
        let u1: f64 = 1.0 - self.rng.gen::<f64>();
        let u2: f64 = self.rng.gen::<f64>();
        libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * PI * u2)
    }
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + libm::exp(-x))
}

fn scale_to(values: &mut [f64], total: f64) {
    let s: f64 = values.iter().sum();
    if s > 0.0 {
        let k = total / s;
        for v in values.iter_mut() {
            *v *= k;
        }
    }
}

/// Weekday of January 1 (0 = Monday), Gregorian calendar.
fn jan1_weekday(year: i32) -> i32 {
    let y = year - 1;
    (1 + 5 * (y % 4) + 4 * (y % 100) + 6 * (y % 400)).rem_euclid(7) as i32 - 1
}

/// All series of one calendar year.
pub fn generate_year(spec: &SynthSpec, year: i32) -> Vec<(&'static str, HourlySeries)> {
    let n = hours_in_year(year);
    let days = n / 24;
    let key = spec.seed ^ (year as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut noise = Noise {
        rng: ChaCha8Rng::seed_from_u64(key),
    };
    // calm spell in January
    let spell_start = (4 + (noise.rng.gen::<u32>() % 16) as usize) * 24;
    let spell_len = 72 + (noise.rng.gen::<u32>() % 49) as usize;

    let (mut temp_a, mut wind_a, mut wind_b, mut cloud_a, mut ror_a, mut inflow_a) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    let mut load = Vec::with_capacity(n);
    let mut pv = Vec::with_capacity(n);
    let mut onshore = Vec::with_capacity(n);
    let mut offshore = Vec::with_capacity(n);
    let mut ror = Vec::with_capacity(n);
    let mut inflow = Vec::with_capacity(n);
    let mut heat = Vec::with_capacity(n);
    let mut cop = Vec::with_capacity(n);
    let wd0 = jan1_weekday(year);
    for h in 0..n {
        let d = h / 24;
        let hd = (h % 24) as f64;
        let theta = 2.0 * PI * (d as f64 - 15.0) / days as f64;
        let winter = libm::cos(theta);
        let in_spell = h >= spell_start && h < spell_start + spell_len;

        temp_a = 0.995 * temp_a + 0.35 * noise.normal();
        wind_a = 0.985 * wind_a + 0.17 * noise.normal();
        wind_b = 0.985 * wind_b + 0.17 * noise.normal();
        cloud_a = 0.97 * cloud_a + 0.24 * noise.normal();
        ror_a = 0.999 * ror_a + 0.02 * noise.normal();
        inflow_a = 0.99 * inflow_a + 0.1 * noise.normal();

        let mut t = 9.5 - 9.0 * winter + 3.0 * libm::sin(2.0 * PI * (hd - 9.0) / 24.0) + temp_a;
        if in_spell {
            t -= 7.0;
        }

        let calm = if in_spell { 0.12 } else { 1.0 };
        onshore.push((logistic(-1.3 + 0.8 * winter + 1.3 * wind_a) * calm).clamp(0.0, 1.0));
        offshore.push((logistic(-0.3 + 0.6 * winter + 1.4 * (0.8 * wind_a + 0.6 * wind_b)) * calm).clamp(0.0, 1.0));

        let daylen = 12.0 - 4.0 * winter;
        let rise = 12.0 - daylen / 2.0;
        let sun = libm::sin(PI * (hd + 0.5 - rise) / daylen).max(0.0);
        let sun = if hd + 0.5 < rise || hd + 0.5 > rise + daylen { 0.0 } else { sun };
        let cloud = (0.75 + 0.25 * cloud_a).clamp(0.2, 1.0) * if in_spell { 0.4 } else { 1.0 };
        pv.push((sun * (0.55 - 0.3 * winter) * cloud).clamp(0.0, 1.0));

        let spring = libm::cos(2.0 * PI * (d as f64 - 150.0) / days as f64);
        ror.push((0.55 + 0.15 * spring + ror_a).clamp(0.0, 1.0));
        inflow.push((spec.reservoir_inflow_gw * (1.0 + 0.6 * spring + inflow_a)).max(0.0));

        let weekday = (wd0 + d as i32).rem_euclid(7);
        let week = if weekday >= 5 { 0.9 } else { 1.0 };
        let diurnal = 1.0 + 0.12 * libm::sin(2.0 * PI * (hd - 7.0) / 24.0) - 0.06 * libm::cos(4.0 * PI * hd / 24.0);
        let cold = (15.0 - t).max(0.0);
        load.push(((1.0 + 0.08 * winter) * diurnal * week + 0.006 * cold).max(0.05));

        heat.push((16.0 - t).max(0.0) + 1.5);
        cop.push((3.6 + 0.02 * (t - 5.0)).clamp(2.5, 4.5));
    }
    let frac = n as f64 / 8760.0;
    scale_to(&mut load, spec.base_load_twh * 1000.0 * frac);
    scale_to(&mut heat, spec.dh_heat_twh * 1000.0);

    let mk = |unit, v| HourlySeries {
        weather_year: year,
        unit,
        values: v,
    };
    alloc::vec![
        (LOAD_SERIES, mk(SeriesUnit::GwEl, load)),
        (PV_SERIES, mk(SeriesUnit::Fraction, pv)),
        (ONSHORE_SERIES, mk(SeriesUnit::Fraction, onshore)),
        (OFFSHORE_SERIES, mk(SeriesUnit::Fraction, offshore)),
        (ROR_SERIES, mk(SeriesUnit::Fraction, ror)),
        (INFLOW_SERIES, mk(SeriesUnit::GwEl, inflow)),
        (DH_DEMAND_SERIES, mk(SeriesUnit::GwTh, heat)),
        (DH_COP_SERIES, mk(SeriesUnit::Ratio, cop)),
    ]
}

/// Series for every year of the spec.
pub fn generate(spec: &SynthSpec) -> SeriesSet {
    let mut out: SeriesSet = BTreeMap::new();
    for year in spec.first_year..=spec.last_year {
        for (name, s) in generate_year(spec, year) {
            out.entry(name.into()).or_default().insert(year, s);
        }
    }
    out
}
