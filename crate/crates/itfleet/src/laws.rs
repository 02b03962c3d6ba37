//! `law.json`: fitted reliability laws plus fit summaries.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use itfleet_core::survival::SurvivalCurve;
use itfleet_core::weibull::reference_laws;
use itfleet_core::{FitDiagnostics, PerClass, Quantile, VoltageClass, WeibullLaw};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LawSource {
    Mle,
    RankRegression,
    Reference,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LawEntry {
    pub family: VoltageClass,
    pub beta: f64,
    pub eta: f64,
    pub source: LawSource,
}

/// Survival summary of one fitted family. Quantiles are years, or the
/// string `"unbounded"` when the Kaplan-Meier curve never gets that low.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub family: VoltageClass,
    pub observations: usize,
    pub events: usize,
    pub censored: usize,
    pub median: Value,
    /// Time by which 10 % of the population has failed.
    pub b10: Value,
    pub weibull_median: f64,
    pub diagnostics: FitDiagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawFile {
    /// Maximum-likelihood laws come first, so consumers that take the first
    /// law per family use them.
    pub laws: Vec<LawEntry>,
    #[serde(default)]
    pub fits: Vec<FitSummary>,
}

pub fn quantile_value(q: Quantile) -> Value {
    match q {
        Quantile::Finite(t) => Value::from(t),
        Quantile::Unbounded => Value::from("unbounded"),
    }
}

pub fn fit_summary(
    family: VoltageClass,
    curve: &SurvivalCurve,
    law: &WeibullLaw,
    diagnostics: &FitDiagnostics,
) -> Result<FitSummary> {
    let events = curve.event_count();
    Ok(FitSummary {
        family,
        observations: curve.n_total,
        events,
        censored: curve.n_total - events,
        median: quantile_value(curve.median()),
        b10: quantile_value(curve.quantile(0.1)?),
        weibull_median: law.median(),
        diagnostics: diagnostics.clone(),
    })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum LawDocument {
    File(LawFile),
    Bare(Vec<LawEntry>),
}

/// Parses a law document: a full `law.json` or a bare array of entries.
pub fn parse_laws(text: &str, file: &str) -> Result<Vec<LawEntry>> {
    let doc: LawDocument = serde_json::from_str(text).map_err(|e| Error::Document {
        file: file.into(),
        message: format!("expected a law file or an array of laws: {e}"),
    })?;
    let laws = match doc {
        LawDocument::File(f) => f.laws,
        LawDocument::Bare(v) => v,
    };
    for l in &laws {
        WeibullLaw::new(l.beta, l.eta).map_err(|e| Error::Document {
            file: file.into(),
            message: format!("law for {}: {e}", l.family),
        })?;
    }
    Ok(laws)
}

/// First law listed for each family.
pub fn laws_by_family(entries: &[LawEntry]) -> PerClass<Option<WeibullLaw>> {
    PerClass::from_fn(|c| entries.iter().find(|e| e.family == c).map(|e| WeibullLaw { beta: e.beta, eta: e.eta }))
}

pub fn reference_entries() -> Vec<LawEntry> {
    reference_laws()
        .iter()
        .map(|(family, l)| LawEntry { family, beta: l.beta, eta: l.eta, source: LawSource::Reference })
        .collect()
}
