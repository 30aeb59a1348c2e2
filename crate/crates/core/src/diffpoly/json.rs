//! JSON form: `[{"coeff": "p/q", "jets": [{"field": "u", "order": 1, "power": 2}]}]`.

use serde::{Deserialize, Serialize};

use super::{DiffPoly, FieldRegistry, PowerProduct, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JetJson {
    pub field: String,
    pub order: u32,
    pub power: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialJson {
    pub coeff: String,
    pub jets: Vec<JetJson>,
}

impl DiffPoly {
    /// Canonical JSON form; monomials in canonical order.
    pub fn to_json(&self) -> Vec<MonomialJson> {
        self.terms()
            .map(|(pp, c)| MonomialJson {
                coeff: c.to_string(),
                jets: pp
                    .factors()
                    .iter()
                    .map(|(j, p)| JetJson {
                        field: j.field.name().to_string(),
                        order: j.order,
                        power: *p,
                    })
                    .collect(),
            })
            .collect()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_json()).expect("serializable")
    }

    /// Field spins are resolved through `registry`.
    pub fn from_json(monomials: &[MonomialJson], registry: &FieldRegistry) -> Result<Self> {
        let mut terms = Vec::with_capacity(monomials.len());
        for m in monomials {
            let coeff: Rational = m
                .coeff
                .parse()
                .map_err(|_| Error::Json(format!("bad coefficient {:?}", m.coeff)))?;
            if m.jets.iter().any(|j| j.power == 0) {
                return Err(Error::Json("jet power must be positive".into()));
            }
            let mut factors = Vec::with_capacity(m.jets.len());
            for j in &m.jets {
                factors.push((registry.field(&j.field)?.jet(j.order), j.power));
            }
            terms.push((PowerProduct::from_factors(factors), coeff));
        }
        Ok(DiffPoly::from_terms(terms))
    }

    pub fn from_json_value(value: &serde_json::Value, registry: &FieldRegistry) -> Result<Self> {
        let ms: Vec<MonomialJson> =
            serde_json::from_value(value.clone()).map_err(|e| Error::Json(e.to_string()))?;
        DiffPoly::from_json(&ms, registry)
    }
}
