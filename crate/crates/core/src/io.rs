//! JSON exchange formats for connections, gauges and GK forms.
//!
//! Indices are 1-based on the wire; polynomials and fiber elements are
//! carried as strings in the text grammar.

use serde::{Deserialize, Serialize};

use crate::chart::{Gauge, GkForm};
use crate::comm::BasePoly;
use crate::conn::ConnectionData;
use crate::dga::DgaElement;
use crate::error::{Error, Result};
use crate::form::FormIdx;
use crate::text::check_index;
use crate::word::Word;

/// One term `coeff_poly · db_form ⊗ ξ_word` of `D(ξ_from)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectionEntryJson {
    pub from: usize,
    pub form: usize,
    pub word: Vec<usize>,
    pub coeff_poly: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NablaJson {
    pub k: usize,
    pub entries: Vec<ConnectionEntryJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectionJson {
    pub n: usize,
    pub fiber_trunc: usize,
    pub base_trunc: usize,
    pub leading: Vec<ConnectionEntryJson>,
    pub nabla: Vec<NablaJson>,
}

impl ConnectionData {
    pub fn to_json(&self) -> ConnectionJson {
        let mut leading = Vec::new();
        let mut nabla: Vec<NablaJson> = (0..self.fiber_trunc())
            .map(|k| NablaJson {
                k,
                entries: Vec::new(),
            })
            .collect();
        for (i, image) in self.images().iter().enumerate() {
            for ((form, word), p) in image.terms() {
                let entry = ConnectionEntryJson {
                    from: i + 1,
                    form: form.indices().next().expect("one-form") + 1,
                    word: word.letters().map(|l| l + 1).collect(),
                    coeff_poly: p.to_text("b"),
                };
                match word.degree() {
                    0 => leading.push(entry),
                    d => nabla[d - 1].entries.push(entry),
                }
            }
        }
        ConnectionJson {
            n: self.n(),
            fiber_trunc: self.fiber_trunc(),
            base_trunc: self.base_trunc(),
            leading,
            nabla,
        }
    }

    pub fn from_json(j: &ConnectionJson) -> Result<ConnectionData> {
        let (n, nt, bt) = (j.n, j.fiber_trunc, j.base_trunc);
        if n == 0 {
            return Err(Error::Invalid("n must be positive".into()));
        }
        let mut images = vec![DgaElement::zero(n, nt, bt); n];
        let mut add = |e: &ConnectionEntryJson, degree: usize| -> Result<()> {
            if e.word.len() != degree {
                return Err(Error::Invalid(format!(
                    "entry of D(xi{}) has word length {} where {} was expected",
                    e.from,
                    e.word.len(),
                    degree
                )));
            }
            let i = check_index(e.from, n)?;
            let form = FormIdx::single(check_index(e.form, n)?);
            let letters = e
                .word
                .iter()
                .map(|&l| check_index(l, n))
                .collect::<Result<Vec<_>>>()?;
            let p = BasePoly::parse(&e.coeff_poly, "b", n)?.truncate(bt);
            images[i].add_term(form, Word::from_letters(letters), p);
            Ok(())
        };
        for e in &j.leading {
            add(e, 0)?;
        }
        for block in &j.nabla {
            for e in &block.entries {
                add(e, block.k + 1)?;
            }
        }
        ConnectionData::new(images)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<ConnectionData> {
        let j: ConnectionJson = serde_json::from_str(s).map_err(json_error)?;
        ConnectionData::from_json(&j)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaugeJson {
    pub n: usize,
    pub fiber_trunc: usize,
    pub base_trunc: usize,
    pub phi: Vec<String>,
    pub tail: Vec<String>,
}

impl Gauge {
    /// Serializes with the tail truncated at `(fiber_trunc, base_trunc)`.
    pub fn to_json(&self, fiber_trunc: usize, base_trunc: usize) -> GaugeJson {
        GaugeJson {
            n: self.n(),
            fiber_trunc,
            base_trunc,
            phi: self.phi().iter().map(|p| p.to_text("b")).collect(),
            tail: self
                .tail()
                .iter()
                .map(|t| t.retruncate(fiber_trunc, base_trunc).to_string())
                .collect(),
        }
    }

    pub fn from_json(j: &GaugeJson) -> Result<Gauge> {
        let phi = j
            .phi
            .iter()
            .map(|s| BasePoly::parse(s, "b", j.n))
            .collect::<Result<Vec<_>>>()?;
        let tail = j
            .tail
            .iter()
            .map(|s| DgaElement::parse(s, j.n, j.fiber_trunc, j.base_trunc))
            .collect::<Result<Vec<_>>>()?;
        Gauge::new(phi, tail)
    }

    pub fn from_json_str(s: &str) -> Result<Gauge> {
        let j: GaugeJson = serde_json::from_str(s).map_err(json_error)?;
        Gauge::from_json(&j)
    }
}

/// `theta[j][i]` is the text of `θ_j(ξ_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GkFormJson {
    pub n: usize,
    pub fiber_trunc: usize,
    pub base_trunc: usize,
    pub theta: Vec<Vec<String>>,
}

impl GkForm {
    pub fn to_json(&self) -> GkFormJson {
        GkFormJson {
            n: self.n(),
            fiber_trunc: self.fiber_trunc(),
            base_trunc: self.base_trunc(),
            theta: self
                .rows()
                .iter()
                .map(|row| row.iter().map(ToString::to_string).collect())
                .collect(),
        }
    }

    pub fn from_json(j: &GkFormJson) -> Result<GkForm> {
        let theta = j
            .theta
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| DgaElement::parse(s, j.n, j.fiber_trunc, j.base_trunc))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        GkForm::new(theta)
    }

    pub fn from_json_str(s: &str) -> Result<GkForm> {
        let j: GkFormJson = serde_json::from_str(s).map_err(json_error)?;
        GkForm::from_json(&j)
    }
}

pub(crate) fn json_error(e: serde_json::Error) -> Error {
    Error::Invalid(format!("JSON: {e}"))
}
