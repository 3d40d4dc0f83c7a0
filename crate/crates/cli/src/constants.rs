use std::collections::BTreeMap;

use loewner_core::scalar::{harmonic_h, harmonic_h_limit, kantorovich, mu_constant};
use loewner_core::{FamilySpec, SpectrumBound};

/// A table entry: a value rounded to 12 significant digits, or the reason
/// it is undefined for this row.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Value(f64),
    Invalid { invalid: String },
}

impl Cell {
    fn from(r: loewner_core::Result<f64>) -> Self {
        match r {
            Ok(v) => Cell::Value(round12(v)),
            Err(e) => Cell::Invalid { invalid: e.to_string() },
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Cell::Value(v) => Some(*v),
            Cell::Invalid { .. } => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Value(v) => format!("{v}"),
            Cell::Invalid { .. } => "invalid".to_string(),
        }
    }
}

pub fn round12(v: f64) -> f64 {
    format!("{v:.11e}").parse().unwrap_or(v)
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ConstantsRow {
    pub m: f64,
    #[serde(rename = "M")]
    pub big_m: f64,
    pub t: f64,
    #[serde(rename = "K")]
    pub k: Cell,
    #[serde(rename = "H")]
    pub h: Cell,
    /// `mu(m, M, f)` per function label.
    pub mu: BTreeMap<String, Cell>,
    #[serde(rename = "H_limit")]
    pub h_limit: Cell,
}

/// Rows `(m, M, t, K, H, mu_f..., H_limit)` for every bound and `t`.
pub fn constants_table(bounds: &[SpectrumBound], t_grid: &[f64], functions: &[FamilySpec]) -> Vec<ConstantsRow> {
    let mut rows = Vec::new();
    for &b in bounds {
        let mu: BTreeMap<String, Cell> = functions
            .iter()
            .map(|f| (f.to_string(), Cell::from(f.build(b).and_then(|g| mu_constant(&g, b)))))
            .collect();
        let h_limit = Cell::from(harmonic_h_limit(b));
        for &t in t_grid {
            let k = if t < 0.0 {
                Cell::from(kantorovich(b, t))
            } else {
                Cell::Invalid {
                    invalid: format!("K is used for t < 0, got t = {t}"),
                }
            };
            rows.push(ConstantsRow {
                m: b.lower(),
                big_m: b.upper(),
                t,
                k,
                h: Cell::from(harmonic_h(b, t)),
                mu: mu.clone(),
                h_limit: h_limit.clone(),
            });
        }
    }
    rows
}

pub fn constants_csv(rows: &[ConstantsRow]) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let labels: Vec<String> = rows.first().map(|r| r.mu.keys().cloned().collect()).unwrap_or_default();
    let mut header = vec!["m".to_string(), "M".into(), "t".into(), "K".into(), "H".into()];
    header.extend(labels.iter().map(|l| format!("mu[{l}]")));
    header.push("H_limit".into());
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![r.m.to_string(), r.big_m.to_string(), r.t.to_string(), r.k.render(), r.h.render()];
        rec.extend(labels.iter().map(|l| r.mu.get(l).map(Cell::render).unwrap_or_default()));
        rec.push(r.h_limit.render());
        w.write_record(&rec)?;
    }
    Ok(w.into_inner()?)
}
