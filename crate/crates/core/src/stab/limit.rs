use super::{lattice_for, EllipticMatrix, StabError};
use crate::linalg::Mat;
use crate::models::Model;
use crate::ring::{lcm_u32, Rat, RationalFn, Var};
use crate::theta::{q_limit_on, Limit, ThetaExpr};

fn entrywise_limit(t: &EllipticMatrix, v: Var, shift: Rat, lattice: u32) -> Result<Mat, StabError> {
    let n = t.labels.len();
    let mut rows = Vec::with_capacity(n);
    let mut lat = lattice;
    for (i, r) in t.entries.iter().enumerate() {
        let mut row = Vec::with_capacity(n);
        for (j, e) in r.iter().enumerate() {
            let Some(e) = e else {
                row.push(RationalFn::zero(lattice));
                continue;
            };
            let shifted: ThetaExpr = e.substitute_shift(v, shift);
            match q_limit_on(&shifted, lattice)? {
                Limit::Finite(res) => {
                    lat = lcm_u32(lat, res.value.lattice());
                    row.push(res.value.reduced());
                }
                Limit::Divergent { q_order } => {
                    return Err(StabError::Divergent(t.labels[i].clone(), t.labels[j].clone(), q_order))
                }
            }
        }
        rows.push(row);
    }
    Ok(Mat::new(rows, lat)?)
}

fn assert_free_of(m: &Mat, labels: &[String], v: Var) -> Result<(), StabError> {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if m.get(i, j).reduced().contains_var(v) {
                return Err(StabError::ResidualDependence(
                    labels[i].clone(),
                    labels[j].clone(),
                    v.to_string(),
                ));
            }
        }
    }
    Ok(())
}

/// `lim_{q->0} T̃(z q^s, a)`; at a regular slope the result must be free of
/// `z`.
pub fn limit_slope_matrix(t: &EllipticMatrix, model: &Model, s: Rat) -> Result<Mat, StabError> {
    let m = entrywise_limit(t, Var::z(), s, lattice_for(model, s))?;
    if !model.walls.contains(s) {
        assert_free_of(&m, &t.labels, Var::z())?;
    }
    Ok(m)
}

/// `lim_{q->0} T̃(z, a q^w)`; at a non-resonant `w` the result must be free
/// of `a`.
pub fn limit_kahler_matrix(t: &EllipticMatrix, model: &Model, w: Rat) -> Result<Mat, StabError> {
    let m = entrywise_limit(t, Var::a(), w, lattice_for(model, w))?;
    if !model.resonances().contains(w) {
        assert_free_of(&m, &t.labels, Var::a())?;
    }
    Ok(m)
}

/// Transpose, move `(p, r)` to `(p!, r!)`, and swap equivariant and Kähler
/// variables.
pub fn transpose_relabel(m: &Mat, dual: &[usize]) -> Result<Mat, StabError> {
    Ok(m.transpose().permute(dual).map(|x| x.rename(Var::mirror))?)
}
