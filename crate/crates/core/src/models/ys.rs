use super::{cotangent_p1, hilb, partitions, Arrangement, Curve, FixedPoint, Model, ModelError, Partition};
use crate::ring::{Rat, Var};

/// Compositions of `n` into `b` nonnegative parts, lexicographically
/// decreasing: `(n,0,..,0)` first.
pub fn compositions(n: u32, b: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, b: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if b == 1 {
            prefix.push(n);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=n).rev() {
            prefix.push(k);
            go(n - k, b - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if b > 0 {
        go(n, b, &mut Vec::new(), &mut out);
    }
    out
}

/// Number of boxes of `λ` with content `i - j ≡ r (mod b)` for each `r`.
pub fn content_coloring(l: &Partition, b: u32) -> Vec<u32> {
    let mut c = vec![0u32; b as usize];
    for (i, j) in l.boxes() {
        c[(i - j).rem_euclid(b as i64) as usize] += 1;
    }
    c
}

/// Components of `Y_s` for `Hilb(n)` and the component of each fixed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YsComponents {
    pub b: u32,
    pub components: Vec<Vec<u32>>,
    /// Index into `components` for each partition of `n`, in
    /// [`partitions`] order.
    pub assignment: Vec<usize>,
}

impl YsComponents {
    pub fn same_component(&self, p: usize, r: usize) -> bool {
        self.assignment[p] == self.assignment[r]
    }

    /// Fixed points grouped by component, empty groups dropped.
    pub fn fibers(&self) -> Vec<(Vec<u32>, Vec<usize>)> {
        self.components
            .iter()
            .enumerate()
            .filter_map(|(k, c)| {
                let f: Vec<usize> = (0..self.assignment.len())
                    .filter(|&p| self.assignment[p] == k)
                    .collect();
                (!f.is_empty()).then(|| (c.clone(), f))
            })
            .collect()
    }
}

/// `Y_s` for `s = a/b` in lowest terms: one component per composition of
/// `n` into `b` parts, fixed points colored by content residues.
pub fn ys_components(n: u32, s: Rat) -> YsComponents {
    let b = *s.denom() as u32;
    let components = compositions(n, b);
    let assignment = partitions(n)
        .iter()
        .map(|l| {
            let c = content_coloring(l, b);
            components.iter().position(|x| *x == c).unwrap()
        })
        .collect();
    YsComponents {
        b,
        components,
        assignment,
    }
}

/// Fixed locus of the slope-twisted torus: the same fixed points, keeping
/// only characters `w` with `s * deg_a(w)` integral, and the curves whose
/// weight survives.
pub fn ys_restrict(model: &Model, s: Rat) -> Model {
    let keep = |w: &crate::ring::Exponents| (s * Model::deg_a(w)).is_integer();
    let fixed_points: Vec<FixedPoint> = model
        .fixed_points
        .iter()
        .map(|fp| FixedPoint {
            tangent: fp.tangent.iter().filter(|w| keep(w)).cloned().collect(),
            ..fp.clone()
        })
        .collect();
    let curves: Vec<Curve> = model.curves.iter().filter(|c| keep(&c.weight)).cloned().collect();
    Model {
        name: format!("{}-Y{}", model.name, s),
        walls: Arrangement::new(curves.iter().map(|c| c.class)),
        fixed_points,
        curves,
        symplectic: model.symplectic,
        effective_sign: model.effective_sign,
        dual: (0..model.len()).collect(),
    }
}

/// Substitutes `a -> a^k` in every character and rescales `χ` to match.
pub fn scale_a(model: &Model, k: i64) -> Model {
    let k = Rat::from_integer(k);
    let sc = |w: &crate::ring::Exponents| {
        let mut w = w.clone();
        w.set(Var::a(), w.get(Var::a()) * k);
        w
    };
    let mut m = model.clone();
    for fp in &mut m.fixed_points {
        fp.tangent = fp.tangent.iter().map(sc).collect();
        fp.tangent.sort();
        fp.chi_a *= k;
    }
    for c in &mut m.curves {
        c.weight = sc(&c.weight);
    }
    m
}

/// Declared model of `Y_s` for `Hilb(n)` where one is available: `Y_s` is
/// `Hilb(n)` itself for integral `s`, and `T^*P^1` in the variable `a^2` for
/// `n = 2`, `b = 2`. Fixed points carry the labels of their `Hilb(n)`
/// counterparts.
pub fn ys_hilb_component(n: u32, s: Rat) -> Result<Model, ModelError> {
    match (n, *s.denom()) {
        (_, 1) => Ok(hilb(n)),
        (2, 2) => {
            let mut m = scale_a(&cotangent_p1(), 2);
            m.name = "ys-hilb2-1/2".into();
            for (fp, l) in m.fixed_points.iter_mut().zip(partitions(2)) {
                fp.label = l.to_string();
            }
            m.validate()?;
            Ok(m)
        }
        _ => Err(ModelError::Invalid(format!(
            "no declared Y_s model for Hilb({n}) at s = {s}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    #[test]
    fn compositions_enumerated() {
        assert_eq!(compositions(3, 2), vec![vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]]);
        assert_eq!(compositions(1, 1), vec![vec![1]]);
        assert_eq!(compositions(3, 3).len(), 10);
    }

    #[test]
    fn coloring() {
        assert_eq!(content_coloring(&Partition::new(vec![3]), 2), vec![2, 1]);
        let y = ys_components(3, rat(1, 2));
        let got: Vec<Vec<u32>> = y.assignment.iter().map(|&k| y.components[k].clone()).collect();
        assert_eq!(got, vec![vec![2, 1], vec![1, 2], vec![2, 1]]);
        let sizes: usize = y.fibers().iter().map(|f| f.1.len()).sum();
        assert_eq!(sizes, 3);
    }

    #[test]
    fn declared_component_matches_restriction() {
        let declared = ys_hilb_component(2, rat(1, 2)).unwrap();
        let restricted = ys_restrict(&hilb(2), rat(1, 2));
        restricted.validate().unwrap();
        for (d, r) in declared.fixed_points.iter().zip(&restricted.fixed_points) {
            assert_eq!(d.label, r.label);
            assert_eq!(d.tangent, r.tangent);
        }
        let chi = |m: &Model| m.fixed_points[1].chi_a - m.fixed_points[0].chi_a;
        assert_eq!(chi(&declared), chi(&restricted));
        assert_eq!(declared.walls, restricted.walls);
    }
}
