//! Output documents: JSON (tagged by `kind`) and CSV renderings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::modforms::QuasimodularPoly;
use crate::report::VerificationReport;
use crate::series::{QExpansion, UNITS_PER_Q};

/// A series on integral q-powers, coefficients as exact fraction strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesDocument {
    pub weight: Option<u32>,
    pub exponent_unit: u32,
    /// Exclusive bound on the exponents, in `exponent_unit`s.
    pub truncation: i64,
    pub coefficients: Vec<(i64, String)>,
    pub metadata: BTreeMap<String, String>,
}

impl SeriesDocument {
    /// Dense listing of every integral exponent below the truncation.
    pub fn from_series(s: &QExpansion, weight: Option<u32>, metadata: BTreeMap<String, String>) -> Result<Self> {
        if !s.is_integral() {
            return Err(Error::OutOfContract("only integral-grid series are serialized".into()));
        }
        let coefficients = s
            .q_coefficients()
            .into_iter()
            .enumerate()
            .map(|(n, c)| (n as i64, c.to_string()))
            .collect::<Vec<_>>();
        Ok(SeriesDocument {
            weight,
            exponent_unit: 1,
            truncation: coefficients.len() as i64,
            coefficients,
            metadata,
        })
    }

    pub fn to_series(&self) -> Result<QExpansion> {
        self.validate()?;
        let terms = self
            .coefficients
            .iter()
            .map(|(e, c)| Ok((UNITS_PER_Q * e, parse_fraction(c)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(QExpansion::from_terms(terms, UNITS_PER_Q * self.truncation))
    }

    /// Strictly increasing exponents below the truncation and canonical
    /// fraction strings.
    pub fn validate(&self) -> Result<()> {
        if self.exponent_unit != 1 {
            return Err(Error::OutOfContract(format!("unsupported exponent unit {}", self.exponent_unit)));
        }
        let mut last = None;
        for (e, c) in &self.coefficients {
            if last.map_or(false, |l| *e <= l) || *e >= self.truncation || *e < 0 {
                return Err(Error::OutOfContract(format!("exponent {e} out of order or range")));
            }
            last = Some(*e);
            if parse_fraction(c)?.to_string() != *c {
                return Err(Error::OutOfContract(format!("coefficient '{c}' is not in lowest terms")));
            }
        }
        Ok(())
    }
}

pub fn parse_fraction(text: &str) -> Result<Rational> {
    text.parse::<Rational>()
        .map_err(|_| Error::OutOfContract(format!("'{text}' is not an exact fraction")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionDocument {
    pub weight: u32,
    /// `(a, b, c, coefficient)` for `E2^a E4^b E6^c`.
    pub terms: Vec<(u32, u32, u32, String)>,
    pub metadata: BTreeMap<String, String>,
}

impl DecompositionDocument {
    pub fn from_poly(d: &QuasimodularPoly, metadata: BTreeMap<String, String>) -> Self {
        DecompositionDocument {
            weight: d.weight(),
            terms: d.terms().map(|(&(a, b, c), x)| (a, b, c, x.to_string())).collect(),
            metadata,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationDocument {
    pub weight: u32,
    pub p: u64,
    pub filtration: u32,
    pub zero: bool,
    pub metadata: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Document {
    QExpansion(SeriesDocument),
    Report(VerificationReport),
    Suite { reports: Vec<VerificationReport> },
    Decomposition(DecompositionDocument),
    Filtration(FiltrationDocument),
}

fn split_fraction(text: &str) -> (String, String) {
    match text.split_once('/') {
        Some((n, d)) => (n.to_string(), d.to_string()),
        None => (text.to_string(), "1".to_string()),
    }
}

impl Document {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("documents always serialize");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Document = serde_json::from_str(text)
            .map_err(|e| Error::Parse { pos: e.column(), message: e.to_string() })?;
        if let Document::QExpansion(s) = &doc {
            s.validate()?;
        }
        Ok(doc)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut row = |fields: Vec<String>| w.write_record(&fields).expect("in-memory write");
        match self {
            Document::QExpansion(s) => {
                row(vec!["exponent".into(), "numerator".into(), "denominator".into()]);
                for (e, c) in &s.coefficients {
                    let (n, d) = split_fraction(c);
                    row(vec![e.to_string(), n, d]);
                }
            }
            Document::Report(r) => report_rows(std::slice::from_ref(r), &mut row),
            Document::Suite { reports } => report_rows(reports, &mut row),
            Document::Decomposition(d) => {
                row(["a", "b", "c", "numerator", "denominator"].map(String::from).to_vec());
                for (a, b, c, x) in &d.terms {
                    let (n, den) = split_fraction(x);
                    row(vec![a.to_string(), b.to_string(), c.to_string(), n, den]);
                }
            }
            Document::Filtration(f) => {
                row(["weight", "p", "filtration", "zero"].map(String::from).to_vec());
                row(vec![f.weight.to_string(), f.p.to_string(), f.filtration.to_string(), f.zero.to_string()]);
            }
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is utf-8")
    }
}

fn report_rows(reports: &[VerificationReport], row: &mut impl FnMut(Vec<String>)) {
    row(["claim", "parameters", "verdict", "truncation", "exponent_unit", "witness_exponent", "witness_lhs", "witness_rhs"]
        .map(String::from)
        .to_vec());
    for r in reports {
        let params: Vec<String> = r.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let verdict = serde_json::to_value(r.verdict).expect("verdict serializes");
        let (e, lhs, rhs) = match &r.witness {
            Some(w) => (w.exponent.map(|e| e.to_string()).unwrap_or_default(), w.lhs.clone(), w.rhs.clone()),
            None => Default::default(),
        };
        row(vec![
            r.claim.to_string(),
            params.join(";"),
            verdict.as_str().unwrap_or_default().to_string(),
            r.truncation.to_string(),
            r.exponent_unit.to_string(),
            e,
            lhs,
            rhs,
        ]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{frac, rat};
    use crate::report::{Claim, Witness};

    fn sample_series() -> SeriesDocument {
        let s = QExpansion::from_q_coefficients([frac(-1, 24), rat(1), rat(0), rat(4)]);
        SeriesDocument::from_series(&s, Some(2), BTreeMap::from([("k".into(), "2".into())])).unwrap()
    }

    #[test]
    fn series_document_is_dense_and_canonical() {
        let d = sample_series();
        assert_eq!(d.truncation, 4);
        assert_eq!(d.coefficients[0], (0, "-1/24".to_string()));
        assert_eq!(d.coefficients[2], (2, "0".to_string()));
        assert_eq!(d.to_series().unwrap().q_coefficient(3), rat(4));
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let report = VerificationReport::new(Claim::ThmE, 1)
            .param("p", 5)
            .conclude(10, Some(Witness::at(3, "4", "-1")));
        for doc in [
            Document::QExpansion(sample_series()),
            Document::Report(report.clone()),
            Document::Suite { reports: vec![report] },
        ] {
            let text = doc.to_json();
            let back = Document::from_json(&text).unwrap();
            assert_eq!(back, doc);
            assert_eq!(back.to_json(), text);
        }
    }

    #[test]
    fn rejects_non_canonical_documents() {
        let mut d = sample_series();
        d.coefficients[1].1 = "2/2".into();
        assert!(d.validate().is_err());
        let mut d = sample_series();
        d.coefficients.swap(0, 1);
        assert!(d.validate().is_err());
        assert!(Document::from_json("{\"kind\": \"nope\"}").is_err());
    }

    #[test]
    fn csv_rows() {
        let csv = Document::QExpansion(sample_series()).to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "exponent,numerator,denominator");
        assert_eq!(lines[1], "0,-1,24");
        assert_eq!(lines[4], "3,4,1");
    }
}
