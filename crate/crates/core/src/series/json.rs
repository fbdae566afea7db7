//! JSON interchange form of a series:
//! `{"alpha":0.5,"beta":1.0,"base":0.0,"side":"right","cutoff":6.0,"terms":[{"m":0,"n":0,"c":1.0}]}`.

use serde::{Deserialize, Serialize};

use super::{ExponentKey, FracIndexPair, FracSeries, Side};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermDoc {
    pub m: i32,
    pub n: i32,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesDoc {
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    pub base: f64,
    pub side: Side,
    pub cutoff: f64,
    pub terms: Vec<TermDoc>,
}

impl From<&FracSeries> for SeriesDoc {
    fn from(series: &FracSeries) -> Self {
        let indices = series.indices();
        SeriesDoc {
            alpha: indices.alpha(),
            beta: indices.beta(),
            base: indices.base(),
            side: indices.side(),
            cutoff: series.cutoff(),
            terms: series
                .terms()
                .into_iter()
                .map(|t| TermDoc {
                    m: t.key.m,
                    n: t.key.n,
                    c: t.coefficient,
                })
                .collect(),
        }
    }
}

impl From<FracSeries> for SeriesDoc {
    fn from(series: FracSeries) -> Self {
        SeriesDoc::from(&series)
    }
}

impl TryFrom<SeriesDoc> for FracSeries {
    type Error = crate::error::FracError;

    fn try_from(doc: SeriesDoc) -> Result<Self> {
        let indices = FracIndexPair::new(doc.alpha, doc.beta, doc.base, doc.side)?;
        FracSeries::from_terms(
            indices,
            doc.cutoff,
            doc.terms
                .into_iter()
                .map(|t| (ExponentKey::new(t.m, t.n), t.c)),
        )
    }
}

impl FracSeries {
    pub fn to_doc(&self) -> SeriesDoc {
        SeriesDoc::from(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("series documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SeriesDoc = serde_json::from_str(text)?;
        FracSeries::try_from(doc)
    }
}
