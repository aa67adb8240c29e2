//! Bundled USPTO monthly application counts, Sep 1977 – Dec 2016 (472 months).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{parse_csv, MonthStamp, TimeSeries};

const PATENTS_CSV: &str = include_str!("../../../data/patents.csv");
const TRADEMARKS_CSV: &str = include_str!("../../../data/trademarks.csv");

/// SHA-256 of `data/patents.csv`.
pub const PATENTS_SHA256: &str = "7b01f0a4ad6251be2a48f6ed593555d5af80b3090418da0b584d831ae69ca47c";
/// SHA-256 of `data/trademarks.csv`.
pub const TRADEMARKS_SHA256: &str =
    "60b1de63e3ed511549437bf065a79c0947db47f8dfe42c961c408add17ea9783";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fixture {
    Patents,
    Trademarks,
}

impl Fixture {
    pub const ALL: [Fixture; 2] = [Fixture::Patents, Fixture::Trademarks];

    pub fn name(self) -> &'static str {
        match self {
            Fixture::Patents => "patents",
            Fixture::Trademarks => "trademarks",
        }
    }

    pub fn csv(self) -> &'static str {
        match self {
            Fixture::Patents => PATENTS_CSV,
            Fixture::Trademarks => TRADEMARKS_CSV,
        }
    }

    pub fn sha256(self) -> &'static str {
        match self {
            Fixture::Patents => PATENTS_SHA256,
            Fixture::Trademarks => TRADEMARKS_SHA256,
        }
    }

    /// The raw (uncleaned) series.
    pub fn series(self) -> TimeSeries {
        parse_csv(self.csv()).expect("bundled fixture parses")
    }

    /// Months whose values the reference analysis replaced by neighbour averages.
    pub fn paper_outlier_months(self) -> Vec<MonthStamp> {
        let months: &[(i32, u32)] = match self {
            Fixture::Patents => &[(1982, 9), (1995, 6), (2007, 10), (2013, 3)],
            Fixture::Trademarks => &[(1982, 9), (1989, 11), (1999, 6)],
        };
        months
            .iter()
            .map(|&(y, m)| MonthStamp::new(y, m).expect("valid month"))
            .collect()
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Fixture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "patents" => Ok(Fixture::Patents),
            "trademarks" => Ok(Fixture::Trademarks),
            other => Err(Error::InvalidParameter(format!(
                "unknown fixture {other:?} (expected patents or trademarks)"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::sha256_hex;

    #[test]
    fn fixtures_have_472_months_ending_dec_2016() {
        for f in Fixture::ALL {
            let s = f.series();
            assert_eq!(s.len(), 472);
            assert_eq!(s.start(), MonthStamp::new(1977, 9).unwrap());
            assert_eq!(s.end(), MonthStamp::new(2016, 12).unwrap());
            assert!(s.values().iter().all(|v| *v >= 0.0 && v.fract() == 0.0));
        }
        assert_eq!(Fixture::Trademarks.series().values()[471], 33063.0);
    }

    #[test]
    fn digests_match_checksum_file_and_canonical_form() {
        let sums = include_str!("../../../data/SHA256SUMS");
        for f in Fixture::ALL {
            assert_eq!(sha256_hex(f.csv().as_bytes()), f.sha256());
            assert_eq!(f.series().digest(), f.sha256());
            let line = format!("{}  {}.csv", f.sha256(), f.name());
            assert!(sums.lines().any(|l| l == line), "{line} missing");
        }
    }

    #[test]
    fn first_patent_difference() {
        let s = Fixture::Patents.series();
        assert_eq!(s.values()[1] - s.values()[0], 138.0);
    }
}
