//! Machine-readable record types: decimal strings for exact integers, and
//! {value, prec} pairs for high-precision reals. JSON documents carry the
//! versioned `schema` field.

use crate::arith::Factorization;
use crate::critical::CaEntry;
use crate::error::{Error, Result};
use crate::hp::HPReal;
use crate::sieve::{CounterexampleRecord, PartialSumReport, ScanCriterion, ThetaCheck};
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "robin-kappa/1";

/// A high-precision real as a decimal string with its precision tag.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HpJson {
    pub value: String,
    pub prec: u32,
}

impl From<&HPReal> for HpJson {
    fn from(v: &HPReal) -> Self {
        HpJson {
            value: v.to_decimal_string(),
            prec: v.precision_bits(),
        }
    }
}

impl HpJson {
    pub fn to_hp(&self) -> Result<HPReal> {
        HPReal::parse_decimal(&self.value, self.prec)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanRecordJson {
    pub n: u64,
    pub criterion: String,
    pub sigma_kappa: String,
    pub lhs: HpJson,
    pub rhs: HpJson,
    pub margin: HpJson,
}

pub fn criterion_name(c: ScanCriterion) -> &'static str {
    match c {
        ScanCriterion::Robin => "robin",
        ScanCriterion::LagariasStrong => "lagarias-strong",
        ScanCriterion::LagariasWeak => "lagarias-weak",
    }
}

impl ScanRecordJson {
    pub fn from_record(r: &CounterexampleRecord, sigma_kappa: String) -> Self {
        ScanRecordJson {
            n: r.n,
            criterion: criterion_name(r.criterion).to_string(),
            sigma_kappa,
            lhs: HpJson::from(&r.lhs),
            rhs: HpJson::from(&r.rhs),
            margin: HpJson::from(&r.margin),
        }
    }
}

pub const SCAN_CSV_HEADER: &str = "n,criterion,sigma_kappa,lhs,rhs,margin";

pub fn scan_record_csv(r: &ScanRecordJson) -> String {
    format!(
        "{},{},{},{},{},{}",
        r.n, r.criterion, r.sigma_kappa, r.lhs.value, r.rhs.value, r.margin.value
    )
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeanValueJson {
    pub schema: String,
    pub x: u64,
    pub kappa: String,
    pub sum: String,
    pub main: HpJson,
    pub secondary: HpJson,
    pub residual: HpJson,
}

pub const MEANVALUE_CSV_HEADER: &str = "x,sum,main,secondary,residual";

impl MeanValueJson {
    pub fn from_report(r: &PartialSumReport, kappa: &str, prec: u32) -> Self {
        let sum = match &r.sum {
            crate::arith::SigmaKappaValue::Exact(v) => v.to_string(),
            crate::arith::SigmaKappaValue::Approx(v) => v.to_decimal_string(),
        };
        let _ = prec;
        MeanValueJson {
            schema: SCHEMA.to_string(),
            x: r.x,
            kappa: kappa.to_string(),
            sum,
            main: HpJson::from(&r.main_term),
            secondary: HpJson::from(&r.secondary_term),
            residual: HpJson::from(&r.residual),
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.x, self.sum, self.main.value, self.secondary.value, self.residual.value
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaEntryJson {
    pub i: usize,
    pub eps: HpJson,
    pub eps_next: HpJson,
    pub factors: Vec<(u64, u32)>,
    #[serde(rename = "logN")]
    pub log_n: HpJson,
    #[serde(rename = "loglogN")]
    pub log_log_n: HpJson,
    pub g: Option<HpJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaTableJson {
    pub schema: String,
    pub kappa: String,
    pub precision: u32,
    pub entries: Vec<CaEntryJson>,
}

impl CaEntryJson {
    pub fn from_entry(e: &CaEntry) -> Self {
        CaEntryJson {
            i: e.index,
            eps: HpJson::from(&e.eps),
            eps_next: HpJson::from(&e.eps_next),
            factors: e.factorization.pairs().to_vec(),
            log_n: HpJson::from(&e.log_n),
            log_log_n: HpJson::from(&e.log_log_n),
            g: e.g.as_ref().map(HpJson::from),
        }
    }
}

impl CaTableJson {
    pub fn new(kappa: &str, precision: u32, entries: &[CaEntry]) -> Self {
        CaTableJson {
            schema: SCHEMA.to_string(),
            kappa: kappa.to_string(),
            precision,
            entries: entries.iter().map(CaEntryJson::from_entry).collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let table: CaTableJson = serde_json::from_str(text)
            .map_err(|e| Error::InvalidConfig(format!("bad CA table: {e}")))?;
        if table.schema != SCHEMA {
            return Err(Error::InvalidConfig(format!(
                "unsupported schema {:?} (expected {SCHEMA:?})",
                table.schema
            )));
        }
        Ok(table)
    }

    /// N for one row, reconstructed exactly from the factor list.
    pub fn entry_value(entry: &CaEntryJson) -> Result<rug::Integer> {
        Ok(Factorization::from_pairs(entry.factors.clone())?.value())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ThetaCheckJson {
    pub x: u64,
    pub theta: HpJson,
    pub mertens_product: HpJson,
    pub chebyshev_band_holds: Option<bool>,
    pub mertens_bracket_holds: Option<bool>,
}

pub const THETA_CSV_HEADER: &str = "x,theta,mertens_product,chebyshev_band_holds,mertens_bracket_holds";

impl ThetaCheckJson {
    pub fn from_check(c: &ThetaCheck) -> Self {
        ThetaCheckJson {
            x: c.x,
            theta: HpJson::from(&c.theta),
            mertens_product: HpJson::from(&c.mertens_product),
            chebyshev_band_holds: c.chebyshev_band_holds,
            mertens_bracket_holds: c.mertens_bracket_holds,
        }
    }

    pub fn csv_row(&self) -> String {
        let opt = |v: Option<bool>| match v {
            Some(true) => "true",
            Some(false) => "false",
            None => "",
        };
        format!(
            "{},{},{},{},{}",
            self.x,
            self.theta.value,
            self.mertens_product.value,
            opt(self.chebyshev_band_holds),
            opt(self.mertens_bracket_holds)
        )
    }
}
