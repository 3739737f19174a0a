use num_traits::Zero;

use super::{partitions, Arrangement, Curve, FixedPoint, Model, Partition};
use crate::ring::{rat, Exponents, Rat, Var};

/// `t1^x t2^y` with `t1 = a ħ^{1/2}`, `t2 = a^{-1} ħ^{1/2}`.
fn t1t2(x: i64, y: i64) -> Exponents {
    Exponents::from_pairs([(Var::Hbar, rat(x + y, 2)), (Var::a(), Rat::from_integer(x - y))])
}

/// Arm-leg tangent characters at the fixed point `λ`.
pub fn hilb_tangent(l: &Partition) -> Vec<Exponents> {
    let mut out = Vec::new();
    for (i, j) in l.boxes() {
        let (arm, leg) = (l.arm(i, j), l.leg(i, j));
        out.push(t1t2(arm + 1, -leg));
        out.push(t1t2(-arm, leg + 1));
    }
    out.sort();
    out
}

/// Hilbert scheme of `n` points in the plane.
pub fn hilb(n: u32) -> Model {
    let parts = partitions(n);
    let fixed_points: Vec<FixedPoint> = parts
        .iter()
        .map(|l| FixedPoint {
            label: l.to_string(),
            tangent: hilb_tangent(l),
            chi_a: Rat::from_integer(l.content_sum()),
            chi_hbar: l.boxes().map(|(i, j)| rat(i + j, 2)).sum(),
        })
        .collect();
    // a curve joins λ and μ when a simple tangent character at λ is inverse
    // to one at μ and yields an integral class
    let mut curves = Vec::new();
    for (p, fp) in fixed_points.iter().enumerate() {
        for (r, fr) in fixed_points.iter().enumerate().skip(p + 1) {
            for w in &fp.tangent {
                let da = Model::deg_a(w);
                if da.is_zero() || fp.tangent.iter().filter(|x| *x == w).count() != 1 {
                    continue;
                }
                let winv = w.inv();
                if fr.tangent.iter().filter(|x| **x == winv).count() != 1 {
                    continue;
                }
                let class = (fp.chi_a - fr.chi_a) / da;
                if class.is_integer() {
                    curves.push(Curve {
                        from: p,
                        to: r,
                        weight: w.clone(),
                        class,
                    });
                }
            }
        }
    }
    let dual = parts
        .iter()
        .map(|l| parts.iter().position(|m| *m == l.transpose()).unwrap())
        .collect();
    Model {
        name: format!("hilb{n}"),
        fixed_points,
        curves,
        walls: Arrangement::new((1..=n as i64).map(Rat::from_integer)),
        symplectic: true,
        effective_sign: -1,
        dual,
    }
}
