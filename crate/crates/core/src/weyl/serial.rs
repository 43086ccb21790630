//! Canonical JSON form of Weyl elements.

use serde::{Deserialize, Serialize};

use super::{CoeffExpr, WeylElement, WeylError};
use crate::symplectic::{format_rational, format_vector, parse_rational, parse_vector, SpaceLiteral};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermDoc {
    pub amp: [String; 2],
    pub p: String,
    pub q: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelDoc {
    pub label: Vec<String>,
    pub coeff: Vec<TermDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementDoc {
    pub space: SpaceLiteral,
    pub terms: Vec<LabelDoc>,
}

impl CoeffExpr {
    pub fn to_doc(&self) -> Vec<TermDoc> {
        self.terms()
            .into_iter()
            .map(|(re, im, p, q)| TermDoc {
                amp: [format_rational(&re), format_rational(&im)],
                p: format_rational(&p),
                q: format_rational(&q),
            })
            .collect()
    }

    pub fn from_doc(doc: &[TermDoc]) -> Result<Self, WeylError> {
        let mut out = CoeffExpr::zero();
        for t in doc {
            out = out.add(&CoeffExpr::term(
                parse_rational(&t.amp[0])?,
                parse_rational(&t.amp[1])?,
                &parse_rational(&t.p)?,
                parse_rational(&t.q)?,
            ));
        }
        Ok(out)
    }
}

impl WeylElement {
    /// Labels in sorted order, each with its canonical term list.
    pub fn to_doc(&self) -> ElementDoc {
        ElementDoc {
            space: SpaceLiteral::from_space(self.space()),
            terms: self
                .terms()
                .map(|(f, c)| LabelDoc {
                    label: format_vector(f),
                    coeff: c.to_doc(),
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: &ElementDoc) -> Result<Self, WeylError> {
        let space = doc.space.build()?;
        let mut terms = Vec::with_capacity(doc.terms.len());
        for t in &doc.terms {
            terms.push((parse_vector(&t.label)?, CoeffExpr::from_doc(&t.coeff)?));
        }
        WeylElement::from_terms(&space, terms)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("element documents serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, WeylError> {
        let doc: ElementDoc =
            serde_json::from_str(s).map_err(|e| WeylError::Format(e.to_string()))?;
        Self::from_doc(&doc)
    }
}
