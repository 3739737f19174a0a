use std::path::Path;

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{Arrangement, Curve, FixedPoint, Model, ModelError};
use crate::ring::{parse_poly, Exponents, Rat};

/// On-disk model declaration. Characters are monomials such as
/// `"h^{1/2}*a^{-1}"`; rationals are `"p/q"` strings or integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDoc {
    pub name: String,
    #[serde(default)]
    pub symplectic: bool,
    #[serde(default = "minus_one")]
    pub effective_sign: i32,
    /// Wall families `alpha` (walls at `alpha * s` integral).
    pub walls: Vec<String>,
    pub fixed_points: Vec<PointDoc>,
    #[serde(default)]
    pub curves: Vec<CurveDoc>,
    /// Label of the mirror fixed point for each fixed point, in order.
    pub dual: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointDoc {
    pub label: String,
    pub tangent: Vec<String>,
    pub chi: String,
    #[serde(default = "zero_str")]
    pub chi_hbar: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveDoc {
    pub from: String,
    pub to: String,
    pub weight: String,
    pub class: String,
}

fn minus_one() -> i32 {
    -1
}

fn zero_str() -> String {
    "0".into()
}

fn parse_rat(s: &str) -> Result<Rat, ModelError> {
    let bad = || ModelError::Invalid(format!("bad rational '{s}'"));
    let (n, d) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: i64 = n.parse().map_err(|_| bad())?;
    let d: i64 = d.parse().map_err(|_| bad())?;
    if d == 0 {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

fn parse_char(s: &str) -> Result<Exponents, ModelError> {
    let p = parse_poly(s, 1 << 10).map_err(|e| ModelError::Invalid(format!("character '{s}': {e}")))?;
    match p.as_monomial() {
        Some(m) if m.coeff.is_one() => Ok(m.exps),
        _ => Err(ModelError::Invalid(format!("character '{s}' is not a monic monomial"))),
    }
}

fn fmt_rat(r: &Rat) -> String {
    r.to_string()
}

impl Model {
    pub fn to_doc(&self) -> ModelDoc {
        let label = |i: usize| self.fixed_points[i].label.clone();
        ModelDoc {
            name: self.name.clone(),
            symplectic: self.symplectic,
            effective_sign: self.effective_sign,
            walls: self.walls.alphas().iter().map(fmt_rat).collect(),
            fixed_points: self
                .fixed_points
                .iter()
                .map(|p| PointDoc {
                    label: p.label.clone(),
                    tangent: p.tangent.iter().map(|w| w.to_string()).collect(),
                    chi: fmt_rat(&p.chi_a),
                    chi_hbar: fmt_rat(&p.chi_hbar),
                })
                .collect(),
            curves: self
                .curves
                .iter()
                .map(|c| CurveDoc {
                    from: label(c.from),
                    to: label(c.to),
                    weight: c.weight.to_string(),
                    class: fmt_rat(&c.class),
                })
                .collect(),
            dual: self.dual.iter().map(|&i| label(i)).collect(),
        }
    }

    pub fn from_doc(doc: &ModelDoc) -> Result<Model, ModelError> {
        let fixed_points = doc
            .fixed_points
            .iter()
            .map(|p| {
                Ok(FixedPoint {
                    label: p.label.clone(),
                    tangent: p.tangent.iter().map(|w| parse_char(w)).collect::<Result<_, _>>()?,
                    chi_a: parse_rat(&p.chi)?,
                    chi_hbar: parse_rat(&p.chi_hbar)?,
                })
            })
            .collect::<Result<Vec<_>, ModelError>>()?;
        let index = |l: &str| {
            fixed_points
                .iter()
                .position(|p| p.label == l)
                .ok_or_else(|| ModelError::UnknownPoint(l.into()))
        };
        let curves = doc
            .curves
            .iter()
            .map(|c| {
                Ok(Curve {
                    from: index(&c.from)?,
                    to: index(&c.to)?,
                    weight: parse_char(&c.weight)?,
                    class: parse_rat(&c.class)?,
                })
            })
            .collect::<Result<Vec<_>, ModelError>>()?;
        let dual = doc.dual.iter().map(|l| index(l)).collect::<Result<Vec<_>, _>>()?;
        if doc.effective_sign.abs() != 1 {
            return Err(ModelError::Invalid("effective_sign must be 1 or -1".into()));
        }
        let m = Model {
            name: doc.name.clone(),
            fixed_points,
            curves,
            walls: Arrangement::new(doc.walls.iter().map(|w| parse_rat(w)).collect::<Result<Vec<_>, _>>()?),
            symplectic: doc.symplectic,
            effective_sign: doc.effective_sign,
            dual,
        };
        m.validate()?;
        Ok(m)
    }
}

pub fn model_from_json(text: &str) -> Result<Model, ModelError> {
    let doc: ModelDoc = serde_json::from_str(text).map_err(|e| ModelError::Invalid(e.to_string()))?;
    Model::from_doc(&doc)
}

pub fn load_model(path: &Path) -> Result<Model, ModelError> {
    let text = std::fs::read_to_string(path).map_err(|e| ModelError::Invalid(format!("{}: {e}", path.display())))?;
    model_from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{cotangent_p1, hilb, toy};

    #[test]
    fn round_trip() {
        for m in [toy(), cotangent_p1(), hilb(2), hilb(3)] {
            let text = serde_json::to_string(&m.to_doc()).unwrap();
            assert_eq!(model_from_json(&text).unwrap(), m);
        }
    }

    #[test]
    fn rejects_inconsistent_chi() {
        let mut doc = toy().to_doc();
        doc.fixed_points[1].chi = "1".into();
        let err = Model::from_doc(&doc).unwrap_err();
        assert!(matches!(err, ModelError::CurveCheck { .. }));
        let mut doc = toy().to_doc();
        doc.fixed_points[0].tangent[0] = "2*a".into();
        assert!(Model::from_doc(&doc).is_err());
        assert!(model_from_json("{").is_err());
    }
}
