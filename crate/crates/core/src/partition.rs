//! Integer partitions.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Weakly decreasing sequence of positive integers.
///
/// The derived order is lexicographic on the parts; [`partitions`] lists a
/// weight in *descending* lexicographic order, `(n)` first and `(1^n)` last.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Validates and wraps `parts`.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Invalid("partition parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Invalid("partition parts must be weakly decreasing".into()));
        }
        Ok(Partition(parts))
    }

    /// Sorts arbitrary positive parts into a partition; zeros are dropped.
    pub fn from_parts_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// `(s^r)`: `r` parts equal to `s`.
    pub fn rectangle(r: u32, s: u32) -> Self {
        Partition(vec![s; r as usize])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest part, 0 for the empty partition.
    pub fn first(&self) -> u32 {
        self.0.first().copied().unwrap_or(0)
    }

    /// Partition with the first part removed.
    pub fn tail(&self) -> Partition {
        Partition(self.0.get(1..).unwrap_or(&[]).to_vec())
    }

    /// Prepends a part no smaller than the current first part.
    pub fn prepend(&self, part: u32) -> Partition {
        debug_assert!(part >= self.first());
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(part);
        v.extend_from_slice(&self.0);
        Partition(v)
    }

    /// Multiset union.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut v = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            if j == other.0.len() || (i < self.0.len() && self.0[i] >= other.0[j]) {
                v.push(self.0[i]);
                i += 1;
            } else {
                v.push(other.0[j]);
                j += 1;
            }
        }
        Partition(v)
    }

    /// `(part, multiplicity)` pairs with parts decreasing.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// `z_λ = prod_i i^{m_i} m_i!`.
    pub fn z_lambda(&self) -> u64 {
        self.multiplicities()
            .iter()
            .map(|&(i, m)| (i as u64).pow(m) * (1..=m as u64).product::<u64>())
            .product()
    }

    /// Conjugate partition.
    pub fn transpose(&self) -> Partition {
        let n = self.first();
        Partition(
            (1..=n)
                .map(|k| self.0.iter().filter(|&&p| p >= k).count() as u32)
                .collect(),
        )
    }

    /// Non-strict dominance `self <= other`; both must have equal weight.
    pub fn dominated_by(&self, other: &Partition) -> Result<bool> {
        if self.weight() != other.weight() {
            return Err(Error::Invalid(format!(
                "dominance needs equal weights, got {} and {}",
                self.weight(),
                other.weight()
            )));
        }
        let (mut a, mut b) = (0u32, 0u32);
        for i in 0..self.len().max(other.len()) {
            a += self.0.get(i).copied().unwrap_or(0);
            b += other.0.get(i).copied().unwrap_or(0);
            if a > b {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Strict dominance `self < other`.
    pub fn dominance_less(&self, other: &Partition) -> Result<bool> {
        Ok(self != other && self.dominated_by(other)?)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

impl std::str::FromStr for Partition {
    type Err = Error;
    /// Comma-separated parts, e.g. `2,2,1`; the empty string is `∅`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Invalid(format!("bad partition part '{p}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

fn generate(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if n == 0 {
        out.push(Partition(prefix.clone()));
        return;
    }
    for k in (1..=n.min(max)).rev() {
        prefix.push(k);
        generate(n - k, k, prefix, out);
        prefix.pop();
    }
}

/// All partitions of `n`, descending lexicographic order.
pub fn partitions(n: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    generate(n, n, &mut Vec::new(), &mut out);
    out
}

/// Number of partitions of `n`.
pub fn partition_count(n: u32) -> usize {
    let n = n as usize;
    let mut p = vec![0usize; n + 1];
    p[0] = 1;
    for k in 1..=n {
        for m in k..=n {
            p[m] += p[m - k];
        }
    }
    p[n]
}

/// Partitions of a fixed weight with their positions.
#[derive(Debug)]
pub struct PartitionIndex {
    list: Vec<Partition>,
    pos: HashMap<Partition, usize>,
}

impl PartitionIndex {
    fn build(n: u32) -> Self {
        let list = partitions(n);
        let pos = list.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        PartitionIndex { list, pos }
    }

    pub fn list(&self) -> &[Partition] {
        &self.list
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn position(&self, p: &Partition) -> Option<usize> {
        self.pos.get(p).copied()
    }
}

/// Shared, lazily built index for weight `n`.
pub fn index(n: u32) -> Arc<PartitionIndex> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<PartitionIndex>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(ix) = cache.lock().expect("index cache").get(&n) {
        return ix.clone();
    }
    let ix = Arc::new(PartitionIndex::build(n));
    cache
        .lock()
        .expect("index cache")
        .entry(n)
        .or_insert(ix)
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn enumeration_order() {
        assert_eq!(partitions(0), vec![Partition::empty()]);
        let four: Vec<String> = partitions(4).iter().map(|p| p.to_string()).collect();
        assert_eq!(four, ["(4)", "(3,1)", "(2,2)", "(2,1,1)", "(1,1,1,1)"]);
        assert_eq!(partitions(6).len(), 11);
        for n in 0..=12 {
            assert_eq!(partitions(n).len(), partition_count(n));
        }
    }

    #[test]
    fn z_values() {
        assert_eq!(p("1,1").z_lambda(), 2);
        assert_eq!(p("2").z_lambda(), 2);
        assert_eq!(p("2,2,1").z_lambda(), 8);
        assert_eq!(Partition::empty().z_lambda(), 1);
    }

    #[test]
    fn dominance() {
        assert!(p("1,1").dominance_less(&p("2")).unwrap());
        assert!(p("2,2").dominance_less(&p("3,1")).unwrap());
        assert!(!p("3,1,1,1").dominance_less(&p("2,2,2")).unwrap());
        assert!(!p("2,2,2").dominance_less(&p("3,1,1,1")).unwrap());
        assert!(!p("2").dominance_less(&p("2")).unwrap());
        assert!(p("2").dominance_less(&p("3")).is_err());
    }

    #[test]
    fn validation_and_helpers() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert_eq!(p("3,1").transpose(), p("2,1,1"));
        assert_eq!(p("3,1").union(&p("2,1")), p("3,2,1,1"));
        assert_eq!(Partition::rectangle(2, 3), p("3,3"));
        assert_eq!(p("").weight(), 0);
    }
}
