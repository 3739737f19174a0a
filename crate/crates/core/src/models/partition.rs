use std::fmt;

/// Integer partition with weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Boxes `(i, j)`: column `i`, row `j`, both from 0.
    pub fn boxes(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(j, &len)| (0..len as i64).map(move |i| (i, j as i64)))
    }

    pub fn transpose(&self) -> Partition {
        let w = self.0.first().copied().unwrap_or(0);
        Partition(
            (0..w)
                .map(|i| self.0.iter().filter(|&&p| p > i).count() as u32)
                .collect(),
        )
    }

    /// Boxes to the right of `(i, j)` in its row.
    pub fn arm(&self, i: i64, j: i64) -> i64 {
        self.0[j as usize] as i64 - i - 1
    }

    /// Boxes below `(i, j)` in its column.
    pub fn leg(&self, i: i64, j: i64) -> i64 {
        self.transpose().0[i as usize] as i64 - j - 1
    }

    /// Sum of contents `i - j`.
    pub fn content_sum(&self) -> i64 {
        self.boxes().map(|(i, j)| i - j).sum()
    }

    /// Dominance order `self >= other` (same size assumed).
    pub fn dominates(&self, other: &Partition) -> bool {
        let (mut a, mut b) = (0u32, 0u32);
        let len = self.0.len().max(other.0.len());
        for k in 0..len {
            a += self.0.get(k).copied().unwrap_or(0);
            b += other.0.get(k).copied().unwrap_or(0);
            if a < b {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", inner.join(","))
    }
}

/// All partitions of `n`, in reverse lexicographic order: `(n)` first, `(1^n)` last.
pub fn partitions(n: u32) -> Vec<Partition> {
    fn go(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition(prefix.clone()));
            return;
        }
        for k in (1..=n.min(max)).rev() {
            prefix.push(k);
            go(n - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration() {
        assert_eq!(partitions(0), vec![Partition::new(vec![])]);
        assert_eq!(partitions(2), vec![Partition::new(vec![2]), Partition::new(vec![1, 1])]);
        assert_eq!(partitions(4).len(), 5);
        assert_eq!(partitions(7).len(), 15);
    }

    #[test]
    fn arms_legs_contents() {
        let l = Partition::new(vec![3, 1]);
        assert_eq!(l.transpose(), Partition::new(vec![2, 1, 1]));
        assert_eq!(l.arm(0, 0), 2);
        assert_eq!(l.leg(0, 0), 1);
        assert_eq!(l.content_sum(), 0 + 1 + 2 - 1);
        assert_eq!(l.to_string(), "(3,1)");
    }

    #[test]
    fn dominance() {
        let p = partitions(4);
        assert!(p[0].dominates(&p[4]));
        assert!(!p[4].dominates(&p[0]));
        // (3,1,0..) vs (2,2): comparable; (2,1,1) vs (2,2): (2,2) dominates
        assert!(Partition::new(vec![2, 2]).dominates(&Partition::new(vec![2, 1, 1])));
    }
}
