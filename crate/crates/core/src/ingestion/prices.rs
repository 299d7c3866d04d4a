use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::SeriesEntry;
use crate::error::{Error, Result};
use crate::tailstats::pearson_correlation;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PriceRecord {
    pub period: String,
    pub initial_price: f64,
    pub final_price: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PriceSeries {
    pub records: Vec<PriceRecord>,
}

impl PriceSeries {
    pub fn new(records: Vec<PriceRecord>) -> Result<Self> {
        for r in &records {
            if !(r.initial_price > 0.0 && r.final_price > 0.0) {
                return Err(Error::Domain(format!("prices for `{}` must be positive", r.period)));
            }
        }
        Ok(PriceSeries { records })
    }

    /// Reads a CSV with header `period,initial_price,final_price`.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
        let headers = reader.headers()?.clone();
        for want in ["period", "initial_price", "final_price"] {
            if !headers.iter().any(|h| h == want) {
                return Err(Error::Parse(format!("price CSV lacks a `{want}` column")));
            }
        }
        let records = reader.deserialize().collect::<std::result::Result<Vec<PriceRecord>, _>>()?;
        Self::new(records)
    }

    pub fn get(&self, period: &str) -> Option<&PriceRecord> {
        self.records.iter().find(|r| r.period == period)
    }
}

/// `(initial - final) / initial` for `period`.
pub fn shrinkage_ratio(series: &PriceSeries, period: &str) -> Result<f64> {
    let r = series
        .get(period)
        .ok_or_else(|| Error::Lookup(format!("no prices for period `{period}`")))?;
    Ok((r.initial_price - r.final_price) / r.initial_price)
}

/// Which period of a consecutive pair supplies the shrinkage ratio.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Alignment {
    First,
    #[default]
    Second,
}

impl std::str::FromStr for Alignment {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first" => Ok(Alignment::First),
            "second" => Ok(Alignment::Second),
            other => Err(Error::Parse(format!("unknown alignment `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlignedRow {
    pub pair: String,
    pub lambda: f64,
    pub shrinkage: f64,
}

/// Pairs each non-degenerate UTD value with the shrinkage ratio of the
/// period chosen by `alignment`.
pub fn align_with_prices(
    series: &[SeriesEntry],
    prices: &PriceSeries,
    alignment: Alignment,
) -> Result<Vec<AlignedRow>> {
    series
        .iter()
        .filter(|e| !e.degenerate)
        .filter_map(|e| e.estimate.map(|est| (e, est)))
        .map(|(e, est)| {
            let period = match alignment {
                Alignment::First => &e.first,
                Alignment::Second => &e.second,
            };
            let shrinkage = shrinkage_ratio(prices, period)
                .map_err(|err| Error::Alignment(format!("pair `{}`: {err}", e.pair)))?;
            Ok(AlignedRow {
                pair: e.pair.clone(),
                lambda: est.lambda_hat,
                shrinkage,
            })
        })
        .collect()
}

pub fn correlate_series(utd: &[f64], shrinkage: &[f64]) -> Result<f64> {
    if utd.len() != shrinkage.len() {
        return Err(Error::Alignment(format!(
            "{} UTD values against {} shrinkage ratios",
            utd.len(),
            shrinkage.len()
        )));
    }
    if utd.len() < 2 {
        return Err(Error::Alignment("need at least two aligned points".into()));
    }
    pearson_correlation(utd, shrinkage)
}

/// `pair,lambda,shrinkage`.
pub fn write_aligned_csv<W: Write>(rows: &[AlignedRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["pair", "lambda", "shrinkage"])?;
    for r in rows {
        w.write_record([r.pair.clone(), r.lambda.to_string(), r.shrinkage.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
