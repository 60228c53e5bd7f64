//! Hourly series and summer-to-summer weather windows.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::DomainError;

pub const HOURS_PER_YEAR: usize = 8760;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesUnit {
    GwEl,
    GwTh,
    Fraction,
    EurPerMwh,
    /// Dimensionless ratio other than a fraction (e.g. a heat pump COP).
    Ratio,
}

pub fn is_leap_year(year: i32) -> bool {
    (year % 4 == 0 && year % 100 != 0) || year % 400 == 0
}

pub fn hours_in_year(year: i32) -> usize {
    if is_leap_year(year) {
        8784
    } else {
        8760
    }
}

/// A calendar-year hourly series (8760 or 8784 values).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HourlySeries {
    pub weather_year: i32,
    pub unit: SeriesUnit,
    pub values: Vec<f64>,
}

impl HourlySeries {
    pub fn new(weather_year: i32, unit: SeriesUnit, values: Vec<f64>) -> Result<Self, DomainError> {
        let s = Self {
            weather_year,
            unit,
            values,
        };
        s.check("series")?;
        Ok(s)
    }

    pub fn check(&self, field: &str) -> Result<(), DomainError> {
        let expected = hours_in_year(self.weather_year);
        if self.values.len() != expected {
            return Err(DomainError::invariant(
                field,
                &alloc::format!("length {} does not match year {} ({expected} hours)", self.values.len(), self.weather_year),
            ));
        }
        check_values(field, self.unit, &self.values)
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

pub fn check_values(field: &str, unit: SeriesUnit, values: &[f64]) -> Result<(), DomainError> {
    for (h, &v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(DomainError::invariant(field, &alloc::format!("non-finite value at hour {h}")));
        }
        match unit {
            SeriesUnit::Fraction if !(0.0..=1.0).contains(&v) => {
                return Err(DomainError::invariant(
                    field,
                    &alloc::format!("fraction out of [0,1] at hour {h}: {v}"),
                ));
            }
            SeriesUnit::GwEl | SeriesUnit::GwTh if v < 0.0 => {
                return Err(DomainError::invariant(field, &alloc::format!("negative demand at hour {h}: {v}")));
            }
            SeriesUnit::Ratio if v <= 0.0 => {
                return Err(DomainError::invariant(field, &alloc::format!("non-positive ratio at hour {h}: {v}")));
            }
            _ => {}
        }
    }
    Ok(())
}

/// July of `start_year` through June of `start_year + 1`, 8760 hours; a
/// February 29 inside the window is dropped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WeatherWindow {
    pub start_year: i32,
}

/// Days before July 1 in a year.
fn days_before_july(year: i32) -> usize {
    if is_leap_year(year) {
        182
    } else {
        181
    }
}

impl WeatherWindow {
    pub fn new(start_year: i32) -> Self {
        Self { start_year }
    }

    pub fn label(&self) -> String {
        alloc::format!("{}", self.start_year)
    }

    /// The (calendar year, hour-of-year) of every hour in the window.
    pub fn hours(&self) -> Vec<(i32, usize)> {
        let first = self.start_year;
        let second = first + 1;
        let mut out = Vec::with_capacity(HOURS_PER_YEAR);
        let start = days_before_july(first) * 24;
        for h in start..hours_in_year(first) {
            out.push((first, h));
        }
        // Feb 29 occupies day index 59 of a leap year
        let feb29 = if is_leap_year(second) { Some((59 * 24, 60 * 24)) } else { None };
        for h in 0..days_before_july(second) * 24 {
            if let Some((a, b)) = feb29 {
                if h >= a && h < b {
                    continue;
                }
            }
            out.push((second, h));
        }
        out
    }

    /// Cuts the window out of the two calendar-year series.
    pub fn extract(&self, first: &HourlySeries, second: &HourlySeries) -> Result<Vec<f64>, DomainError> {
        if first.weather_year != self.start_year || second.weather_year != self.start_year + 1 {
            return Err(DomainError::MissingSeries(alloc::format!(
                "window {} needs years {} and {}, got {} and {}",
                self.start_year,
                self.start_year,
                self.start_year + 1,
                first.weather_year,
                second.weather_year
            )));
        }
        first.check("first year")?;
        second.check("second year")?;
        Ok(self
            .hours()
            .into_iter()
            .map(|(y, h)| if y == first.weather_year { first.values[h] } else { second.values[h] })
            .collect())
    }
}

/// Hour range inside a window that a model is built on. The full window is
/// `start = 0, hours = 8760`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Horizon {
    pub start: usize,
    pub hours: usize,
}

impl Default for Horizon {
    fn default() -> Self {
        Self {
            start: 0,
            hours: HOURS_PER_YEAR,
        }
    }
}

impl Horizon {
    pub fn check(&self) -> Result<(), DomainError> {
        if self.hours == 0 || self.start + self.hours > HOURS_PER_YEAR {
            return Err(DomainError::invariant(
                "horizon",
                "horizon must be non-empty and lie inside the 8760-hour window",
            ));
        }
        Ok(())
    }

    pub fn slice<'a>(&self, window: &'a [f64]) -> &'a [f64] {
        &window[self.start..self.start + self.hours]
    }

    /// Share of a year covered, used to scale annual cost terms.
    pub fn year_fraction(&self) -> f64 {
        self.hours as f64 / HOURS_PER_YEAR as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn window_lengths_and_boundary() {
        for y in [2008, 2009, 2011, 2015, 1999] {
            let w = WeatherWindow::new(y);
            let hours = w.hours();
            assert_eq!(hours.len(), 8760, "window {y}");
            // contiguous except the dropped leap day, crosses exactly one boundary
            let crossings = hours.windows(2).filter(|p| p[0].0 != p[1].0).count();
            assert_eq!(crossings, 1);
            assert_eq!(hours[0].0, y);
            assert_eq!(hours.last().unwrap().0, y + 1);
        }
    }

    #[test]
    fn leap_day_dropped() {
        // 2011-07 .. 2012-06 crosses Feb 29 2012
        let w = WeatherWindow::new(2011);
        let hours = w.hours();
        assert!(!hours.iter().any(|&(y, h)| y == 2012 && (1416..1440).contains(&h)));
        // 2008 starts in a leap year after Feb: July 1 is day 182
        let w = WeatherWindow::new(2008);
        assert_eq!(w.hours()[0], (2008, 182 * 24));
    }

    #[test]
    fn extract_concatenates() {
        let a = HourlySeries::new(2009, SeriesUnit::Fraction, vec![0.25; 8760]).unwrap();
        let b = HourlySeries::new(2010, SeriesUnit::Fraction, vec![0.75; 8760]).unwrap();
        let v = WeatherWindow::new(2009).extract(&a, &b).unwrap();
        assert_eq!(v.len(), 8760);
        assert_eq!(v[0], 0.25);
        assert_eq!(v[8759], 0.75);
        assert_eq!(v.iter().filter(|&&x| x == 0.25).count(), (365 - 181) * 24);
    }

    #[test]
    fn series_checks() {
        assert!(HourlySeries::new(2012, SeriesUnit::GwEl, vec![1.0; 8760]).is_err());
        assert!(HourlySeries::new(2012, SeriesUnit::GwEl, vec![1.0; 8784]).is_ok());
        let mut v = vec![0.5; 8760];
        v[10] = 1.2;
        let e = HourlySeries::new(2009, SeriesUnit::Fraction, v).unwrap_err();
        assert!(alloc::format!("{e}").contains("fraction out of [0,1]"));
    }
}
