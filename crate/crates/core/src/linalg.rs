//! Dense matrices over [`RationalFn`] and exact Gaussian elimination.

use std::fmt;

use crate::ring::{lcm_u32, RationalFn, RingError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    lattice: u32,
    rows: Vec<Vec<RationalFn>>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("matrix is singular")]
    Singular,
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// Result of solving `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<RationalFn>),
    /// Inconsistent; carries the index of a constraint row that reduced to
    /// `0 = c` with `c != 0`.
    Inconsistent {
        row: usize,
    },
    /// Underdetermined; carries the rank and the free columns.
    Underdetermined {
        rank: usize,
        free: Vec<usize>,
    },
}

impl Mat {
    pub fn new(rows: Vec<Vec<RationalFn>>, lattice: u32) -> Result<Mat, LinalgError> {
        let n = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != n) {
            return Err(LinalgError::Shape("ragged rows".into()));
        }
        let lattice = rows.iter().flatten().fold(lattice, |acc, x| lcm_u32(acc, x.lattice()));
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.refine(lattice)).collect())
            .collect::<Result<_, _>>()?;
        Ok(Mat { lattice, rows })
    }

    pub fn zero(n: usize, m: usize, lattice: u32) -> Mat {
        Mat {
            lattice,
            rows: vec![vec![RationalFn::zero(lattice); m]; n],
        }
    }

    pub fn identity(n: usize, lattice: u32) -> Mat {
        let mut m = Mat::zero(n, n, lattice);
        for i in 0..n {
            m.rows[i][i] = RationalFn::one(lattice);
        }
        m
    }

    pub fn diagonal(d: Vec<RationalFn>, lattice: u32) -> Result<Mat, LinalgError> {
        let n = d.len();
        let mut rows = vec![vec![RationalFn::zero(lattice); n]; n];
        for (i, x) in d.into_iter().enumerate() {
            rows[i][i] = x;
        }
        Mat::new(rows, lattice)
    }

    pub fn lattice(&self) -> u32 {
        self.lattice
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    pub fn get(&self, i: usize, j: usize) -> &RationalFn {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: RationalFn) -> Result<(), LinalgError> {
        let l = lcm_u32(self.lattice, x.lattice());
        if l != self.lattice {
            *self = self.refine(l)?;
        }
        self.rows[i][j] = x.refine(l)?;
        Ok(())
    }

    pub fn rows(&self) -> &[Vec<RationalFn>] {
        &self.rows
    }

    pub fn refine(&self, n: u32) -> Result<Mat, LinalgError> {
        let l = lcm_u32(self.lattice, n);
        Ok(Mat {
            lattice: l,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|x| x.refine(l)).collect())
                .collect::<Result<_, _>>()?,
        })
    }

    fn common(&self, o: &Mat) -> Result<(Mat, Mat), LinalgError> {
        let l = lcm_u32(self.lattice, o.lattice);
        Ok((self.refine(l)?, o.refine(l)?))
    }

    pub fn map(&self, f: impl Fn(&RationalFn) -> RationalFn) -> Result<Mat, LinalgError> {
        Mat::new(
            self.rows.iter().map(|r| r.iter().map(&f).collect()).collect(),
            self.lattice,
        )
    }

    pub fn try_map<E>(&self, f: impl Fn(usize, usize, &RationalFn) -> Result<RationalFn, E>) -> Result<Mat, LinalgError>
    where
        LinalgError: From<E>,
    {
        let mut rows = Vec::with_capacity(self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            let mut row = Vec::with_capacity(r.len());
            for (j, x) in r.iter().enumerate() {
                row.push(f(i, j, x)?);
            }
            rows.push(row);
        }
        Mat::new(rows, self.lattice)
    }

    pub fn transpose(&self) -> Mat {
        let (n, m) = (self.nrows(), self.ncols());
        Mat {
            lattice: self.lattice,
            rows: (0..m)
                .map(|j| (0..n).map(|i| self.rows[i][j].clone()).collect())
                .collect(),
        }
    }

    /// `P M P^{-1}` for the permutation `i -> perm[i]`: entry `(i, j)` moves
    /// to `(perm[i], perm[j])`.
    pub fn permute(&self, perm: &[usize]) -> Mat {
        let mut out = self.clone();
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                out.rows[perm[i]][perm[j]] = self.rows[i][j].clone();
            }
        }
        out
    }

    pub fn mul(&self, o: &Mat) -> Result<Mat, LinalgError> {
        if self.ncols() != o.nrows() {
            return Err(LinalgError::Shape(format!(
                "{}x{} times {}x{}",
                self.nrows(),
                self.ncols(),
                o.nrows(),
                o.ncols()
            )));
        }
        let (a, b) = self.common(o)?;
        let mut out = Mat::zero(a.nrows(), b.ncols(), a.lattice);
        for i in 0..a.nrows() {
            for j in 0..b.ncols() {
                let mut acc = RationalFn::zero(a.lattice);
                for k in 0..a.ncols() {
                    if a.rows[i][k].is_zero() || b.rows[k][j].is_zero() {
                        continue;
                    }
                    acc = acc.try_add(&a.rows[i][k].try_mul(&b.rows[k][j])?)?;
                }
                out.rows[i][j] = acc.reduced();
            }
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Mat) -> Result<Mat, LinalgError> {
        let (a, b) = self.common(o)?;
        if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
            return Err(LinalgError::Shape("sub".into()));
        }
        let mut out = a.clone();
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                out.rows[i][j] = a.rows[i][j].try_sub(&b.rows[i][j])?.reduced();
            }
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        self.nrows() == self.ncols()
            && self.rows.iter().enumerate().all(|(i, r)| {
                r.iter()
                    .enumerate()
                    .all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
            })
    }

    /// Entrywise equality after lattice refinement.
    pub fn same(&self, o: &Mat) -> bool {
        match self.common(o) {
            Ok((a, b)) => a == b,
            Err(_) => false,
        }
    }

    /// First entry where the matrices differ.
    pub fn first_difference(&self, o: &Mat) -> Option<(usize, usize)> {
        let (a, b) = self.common(o).ok()?;
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                if a.rows[i][j] != b.rows[i][j] {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Triangular with respect to `ge`: nonzero `(i, j)` only if `ge(i, j)`.
    pub fn supported_on(&self, ge: impl Fn(usize, usize) -> bool) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, r)| r.iter().enumerate().all(|(j, x)| x.is_zero() || ge(i, j)))
    }

    pub fn inverse(&self) -> Result<Mat, LinalgError> {
        let n = self.nrows();
        if n != self.ncols() {
            return Err(LinalgError::Shape("inverse of non-square matrix".into()));
        }
        let mut a = self.rows.clone();
        let mut inv = Mat::identity(n, self.lattice).rows;
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero()).ok_or(LinalgError::Singular)?;
            a.swap(c, p);
            inv.swap(c, p);
            let piv = a[c][c].inv()?;
            for j in 0..n {
                a[c][j] = a[c][j].try_mul(&piv)?.reduced();
                inv[c][j] = inv[c][j].try_mul(&piv)?.reduced();
            }
            for r in 0..n {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].clone();
                for j in 0..n {
                    if !a[c][j].is_zero() {
                        a[r][j] = a[r][j].try_sub(&f.try_mul(&a[c][j])?)?.reduced();
                    }
                    if !inv[c][j].is_zero() {
                        inv[r][j] = inv[r][j].try_sub(&f.try_mul(&inv[c][j])?)?.reduced();
                    }
                }
            }
        }
        Ok(Mat {
            lattice: self.lattice,
            rows: inv,
        })
    }

    /// Canonical strings, row by row.
    pub fn canonical(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|x| x.canonical()).collect())
            .collect()
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in self.canonical() {
            writeln!(f, "[{}]", r.join(", "))?;
        }
        Ok(())
    }
}

/// Gaussian elimination for `A x = b` over the field of rational functions.
pub fn solve(a: &[Vec<RationalFn>], b: &[RationalFn], lattice: u32) -> Result<Solution, LinalgError> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    if b.len() != m {
        return Err(LinalgError::Shape("rhs length".into()));
    }
    let mut rows: Vec<(usize, Vec<RationalFn>)> = Vec::with_capacity(m);
    for (k, (r, c)) in a.iter().zip(b).enumerate() {
        let mut row: Vec<RationalFn> = r.iter().map(|x| x.refine(lattice)).collect::<Result<_, _>>()?;
        row.push(c.refine(lattice)?);
        rows.push((k, row));
    }
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..n {
        let Some(p) = (rank..m).find(|&r| !rows[r].1[c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let piv = rows[rank].1[c].inv()?;
        for j in c..=n {
            rows[rank].1[j] = rows[rank].1[j].try_mul(&piv)?.reduced();
        }
        for r in 0..m {
            if r == rank || rows[r].1[c].is_zero() {
                continue;
            }
            let f = rows[r].1[c].clone();
            for j in c..=n {
                if !rows[rank].1[j].is_zero() {
                    let t = f.try_mul(&rows[rank].1[j])?;
                    rows[r].1[j] = rows[r].1[j].try_sub(&t)?.reduced();
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    if let Some((k, _)) = rows[rank..].iter().find(|(_, r)| !r[n].is_zero()) {
        return Ok(Solution::Inconsistent { row: *k });
    }
    if rank < n {
        let free = (0..n).filter(|c| !pivots.contains(c)).collect();
        return Ok(Solution::Underdetermined { rank, free });
    }
    Ok(Solution::Unique((0..n).map(|c| rows[c].1[n].clone()).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_ratfn;

    fn r(s: &str) -> RationalFn {
        parse_ratfn(s, 2).unwrap()
    }

    fn m(rows: &[&[&str]]) -> Mat {
        Mat::new(rows.iter().map(|x| x.iter().map(|s| r(s)).collect()).collect(), 2).unwrap()
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&["1", "0"], &["1/(a - 1)", "1"]]);
        let ai = a.inverse().unwrap();
        assert_eq!(*ai.get(1, 0), r("-1/(a - 1)"));
        assert!(a.mul(&ai).unwrap().is_identity());
        let b = m(&[&["a", "h"], &["1", "a^{-1}"]]);
        assert!(b.inverse().unwrap().mul(&b).unwrap().is_identity());
        assert_eq!(m(&[&["1", "1"], &["1", "1"]]).inverse(), Err(LinalgError::Singular));
    }

    #[test]
    fn solving() {
        let a = vec![vec![r("1"), r("h")], vec![r("1"), r("-1")]];
        let b = vec![r("1 + h"), r("0")];
        assert_eq!(solve(&a, &b, 2).unwrap(), Solution::Unique(vec![r("1"), r("1")]));
        let a = vec![vec![r("1"), r("1")], vec![r("2"), r("2")]];
        assert_eq!(
            solve(&a, &[r("1"), r("3")], 2).unwrap(),
            Solution::Inconsistent { row: 1 }
        );
        assert_eq!(
            solve(&a, &[r("1"), r("2")], 2).unwrap(),
            Solution::Underdetermined { rank: 1, free: vec![1] }
        );
    }

    #[test]
    fn permute_swaps() {
        let a = m(&[&["1", "0"], &["a", "1"]]);
        let p = a.permute(&[1, 0]);
        assert_eq!(*p.get(0, 1), r("a"));
    }
}
