use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "snr_db,metric,value,ci_low,ci_high,scenario";

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub snr_db: f64,
    pub metric: String,
    pub value: f64,
    pub ci: Option<(f64, f64)>,
    pub scenario: String,
}

/// Long-format table of curves; a series is a `(metric, scenario)` pair.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CurveTable {
    rows: Vec<CurveRow>,
}

/// Fixed textual form for CSV values, so output bytes depend only on the number.
pub fn format_value(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e7).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

impl CurveTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, snr_db: f64, metric: &str, value: f64, scenario: &str) {
        self.rows.push(CurveRow {
            snr_db,
            metric: metric.to_string(),
            value,
            ci: None,
            scenario: scenario.to_string(),
        });
    }

    pub fn push_with_ci(&mut self, snr_db: f64, metric: &str, value: f64, ci: (f64, f64), scenario: &str) {
        self.rows.push(CurveRow {
            snr_db,
            metric: metric.to_string(),
            value,
            ci: Some(ci),
            scenario: scenario.to_string(),
        });
    }

    pub fn extend(&mut self, other: CurveTable) {
        self.rows.extend(other.rows);
    }

    pub fn rows(&self) -> &[CurveRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Distinct `(metric, scenario)` pairs in first-appearance order.
    pub fn series_keys(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = Vec::new();
        for r in &self.rows {
            if !out.iter().any(|(m, s)| *m == r.metric && *s == r.scenario) {
                out.push((r.metric.clone(), r.scenario.clone()));
            }
        }
        out
    }

    /// `(snr_db, value)` points of one series.
    pub fn series(&self, metric: &str, scenario: &str) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.metric == metric && r.scenario == scenario)
            .map(|r| (r.snr_db, r.value))
            .collect()
    }

    pub fn value_at(&self, metric: &str, scenario: &str, snr_db: f64) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.metric == metric && r.scenario == scenario && r.snr_db == snr_db)
            .map(|r| r.value)
    }

    /// Sub-table with the rows of one series.
    pub fn select(&self, metric: &str, scenario: &str) -> CurveTable {
        CurveTable {
            rows: self
                .rows
                .iter()
                .filter(|r| r.metric == metric && r.scenario == scenario)
                .cloned()
                .collect(),
        }
    }

    /// Checks that values are finite and every series has increasing SNR.
    pub fn check(&self) -> Result<()> {
        let mut last: BTreeMap<(&str, &str), f64> = BTreeMap::new();
        for r in &self.rows {
            if !r.value.is_finite() || !r.snr_db.is_finite() {
                return Err(Error::Numerical(format!(
                    "non-finite value in series {}/{} at {} dB",
                    r.metric, r.scenario, r.snr_db
                )));
            }
            let key = (r.metric.as_str(), r.scenario.as_str());
            if let Some(&prev) = last.get(&key) {
                if r.snr_db <= prev {
                    return Err(Error::Numerical(format!(
                        "series {}/{} is not increasing in SNR",
                        r.metric, r.scenario
                    )));
                }
            }
            last.insert(key, r.snr_db);
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let (lo, hi) = match r.ci {
                Some((lo, hi)) => (format_value(lo), format_value(hi)),
                None => (String::new(), String::new()),
            };
            writeln!(
                out,
                "{},{},{},{},{},{}",
                format_value(r.snr_db),
                r.metric,
                format_value(r.value),
                lo,
                hi,
                r.scenario
            )
            .unwrap();
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        self.check()?;
        let path = path.as_ref();
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)?;
            }
        }
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = CurveTable::new();
        t.push(0.0, "pep", 0.25, "a");
        t.push_with_ci(2.0, "ber", 1.5e-7, (1e-7, 2e-7), "a");
        assert_eq!(
            t.to_csv(),
            "snr_db,metric,value,ci_low,ci_high,scenario\n0,pep,0.25,,,a\n2,ber,1.5e-7,1e-7,2e-7,a\n"
        );
        assert_eq!(t.series_keys().len(), 2);
        assert_eq!(t.series("pep", "a"), vec![(0.0, 0.25)]);
    }

    #[test]
    fn check_rejects_bad_series() {
        let mut t = CurveTable::new();
        t.push(2.0, "x", 1.0, "s");
        t.push(0.0, "x", 1.0, "s");
        assert!(t.check().is_err());
        let mut t = CurveTable::new();
        t.push(0.0, "x", f64::NAN, "s");
        assert!(t.check().is_err());
    }
}
