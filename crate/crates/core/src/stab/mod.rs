//! Stable-envelope matrices: the elliptic toy matrix, the window solver for
//! K-theoretic stable envelopes, `q -> 0` limits and their factorization at
//! walls.

mod factor;
mod limit;
mod solver;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::linalg::{LinalgError, Mat};
use crate::models::{Model, ModelError};
use crate::ring::{rat, Exponents, Rat, RingError, Var};
use crate::theta::{ThetaError, ThetaExpr};

pub use factor::{
    chi_twist, factorize_limit, infer_diagonal_h, is_signed_monomial, monomial_split, FactorizationResult,
    MonomialSplit,
};
pub use limit::{limit_kahler_matrix, limit_slope_matrix, transpose_relabel};
pub use solver::{diagonal_poly, euler_poly, kstab_solve, KStab, SolverCertificate};

pub const MATRIX_SCHEMA: &str = "envlab.matrix/1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StabError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("slope {0} lies on a wall")]
    OnWall(Rat),
    #[error("no solution: constraint '{0}' cannot be satisfied")]
    NoSolution(String),
    #[error("solution not unique: rank {rank} of {unknowns} unknowns")]
    NonUnique { rank: usize, unknowns: usize },
    #[error("entry ({0},{1}) diverges with q-order {2}")]
    Divergent(String, String, Rat),
    #[error("entry ({0},{1}) still depends on {2} at a regular point")]
    ResidualDependence(String, String, String),
    #[error("entry ({0},{1}) = {2} is not an a-monomial times an a-free function")]
    NonMonomial(String, String, String),
    #[error("entry ({0},{1}): {2}")]
    Violation(String, String, String),
    #[error("no diagonal conjugation: {0}")]
    NoConjugation(String),
}

/// Elliptic matrix `T̃`, with `None` for structurally zero entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipticMatrix {
    pub labels: Vec<String>,
    pub chamber: i32,
    pub entries: Vec<Vec<Option<ThetaExpr>>>,
}

/// `f(z, a) = θ(az) / (θ(a) θ(z))`.
pub fn toy_f() -> ThetaExpr {
    let a = Exponents::var(Var::a(), rat(1, 1));
    let z = Exponents::var(Var::z(), rat(1, 1));
    let t = |x: Exponents| ThetaExpr::theta(x, rat(0, 1)).expect("valid argument");
    t(a.mul(&z)).div(&t(a)).and_then(|x| x.div(&t(z))).expect("nonzero")
}

/// Normalized elliptic stable envelope matrix of the toy model, chamber
/// `σ > 0`, indexed `(p-, p+)`: `[[1, 0], [f, 1]]`.
pub fn toy_elliptic_matrix() -> EllipticMatrix {
    EllipticMatrix {
        labels: vec!["p-".into(), "p+".into()],
        chamber: 1,
        entries: vec![
            vec![Some(ThetaExpr::one()), None],
            vec![Some(toy_f()), Some(ThetaExpr::one())],
        ],
    }
}

impl EllipticMatrix {
    pub fn map(&self, f: impl Fn(&ThetaExpr) -> ThetaExpr) -> EllipticMatrix {
        EllipticMatrix {
            labels: self.labels.clone(),
            chamber: self.chamber,
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(|x| x.as_ref().map(&f)).collect())
                .collect(),
        }
    }

    pub fn to_doc(&self, model: &str) -> MatrixDoc {
        MatrixDoc {
            schema: MATRIX_SCHEMA.into(),
            kind: "elliptic".into(),
            model: model.into(),
            index: self.labels.clone(),
            slope: None,
            chamber: chamber_str(self.chamber).into(),
            entries: self
                .entries
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|x| x.as_ref().map_or("0".into(), |e| e.to_string()))
                        .collect()
                })
                .collect(),
            meta: BTreeMap::new(),
        }
    }
}

/// K-theoretic matrix with its metadata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabMatrix {
    pub labels: Vec<String>,
    pub slope: Rat,
    pub chamber: i32,
    pub normalized: bool,
    pub mat: Mat,
}

/// Serialized matrix: index set, slope, chamber, canonical entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatrixDoc {
    pub schema: String,
    pub kind: String,
    pub model: String,
    pub index: Vec<String>,
    pub slope: Option<String>,
    pub chamber: String,
    pub entries: Vec<Vec<String>>,
    pub meta: BTreeMap<String, serde_json::Value>,
}

pub fn chamber_str(sigma: i32) -> &'static str {
    if sigma >= 0 {
        "+"
    } else {
        "-"
    }
}

impl MatrixDoc {
    pub fn new(kind: &str, model: &str, index: Vec<String>, slope: Option<Rat>, chamber: i32, m: &Mat) -> Self {
        MatrixDoc {
            schema: MATRIX_SCHEMA.into(),
            kind: kind.into(),
            model: model.into(),
            index,
            slope: slope.map(|s| s.to_string()),
            chamber: chamber_str(chamber).into(),
            entries: m.canonical(),
            meta: BTreeMap::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, v: impl Into<serde_json::Value>) -> Self {
        self.meta.insert(key.into(), v.into());
        self
    }
}

impl StabMatrix {
    pub fn to_doc(&self, model: &Model) -> MatrixDoc {
        MatrixDoc::new(
            "stab",
            &model.name,
            self.labels.clone(),
            Some(self.slope),
            self.chamber,
            &self.mat,
        )
        .with_meta("normalized", self.normalized)
    }
}

/// Working lattice for a model at slope `s`: model lattice refined by the
/// slope denominator.
pub fn lattice_for(model: &Model, s: Rat) -> u32 {
    crate::ring::lcm_u32(model.lattice(), 2 * *s.denom() as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toy_elliptic_shape() {
        let t = toy_elliptic_matrix();
        assert_eq!(t.entries[0][1], None);
        assert_eq!(t.entries[0][0], Some(ThetaExpr::one()));
        assert_eq!(t.entries[1][0].as_ref().unwrap().to_string(), toy_f().to_string());
        let doc = t.to_doc("toy");
        assert_eq!(doc.entries[0][1], "0");
        assert_eq!(doc.schema, MATRIX_SCHEMA);
    }

    #[test]
    fn toy_quasiperiods() {
        use crate::ring::Monomial;
        use crate::theta::quasiperiod_identity;
        let f = toy_f();
        let m = rat(8, 1);
        for (v, w) in [(Var::z(), Var::a()), (Var::a(), Var::z())] {
            let c = Monomial::var(w, rat(-1, 1));
            let r = quasiperiod_identity(&f, v, &c, m).unwrap();
            assert!(r.symbolic && r.series, "{v}: {r:?}");
            let wrong = Monomial::var(w, rat(1, 1));
            let r = quasiperiod_identity(&f, v, &wrong, m).unwrap();
            assert!(!r.symbolic && !r.series);
        }
    }
}
