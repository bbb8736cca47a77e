use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;

use super::numtheory::{factorize, reduce};

/// A finitely generated abelian group presented as a direct sum of cyclic groups on
/// chosen generators: generator `i` has order `orders[i]`, with `0` meaning infinite.
///
/// This is the carrier for chain groups, where the generator layout matters (summands
/// of `A[G^l]` etc.). Use [`FinAb`] for isomorphism classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct AbGroup {
    orders: Vec<u64>,
}

impl AbGroup {
    pub fn new(orders: Vec<u64>) -> Self {
        AbGroup { orders }
    }

    pub fn trivial() -> Self {
        AbGroup { orders: Vec::new() }
    }

    pub fn cyclic(n: u64) -> Self {
        AbGroup { orders: vec![n] }
    }

    pub fn free(rank: usize) -> Self {
        AbGroup { orders: vec![0; rank] }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn order_of(&self, gen: usize) -> u64 {
        self.orders[gen]
    }

    /// Number of generators.
    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn is_finite(&self) -> bool {
        self.orders.iter().all(|&o| o != 0)
    }

    /// `None` when infinite.
    pub fn order(&self) -> Option<BigUint> {
        self.is_finite().then(|| self.orders.iter().fold(BigUint::from(1u32), |acc, &o| acc * o))
    }

    pub fn direct_sum(&self, other: &AbGroup) -> AbGroup {
        let mut orders = self.orders.clone();
        orders.extend_from_slice(&other.orders);
        AbGroup { orders }
    }

    /// `k` copies of `self`, copy-major.
    pub fn power(&self, k: usize) -> AbGroup {
        let mut orders = Vec::with_capacity(self.orders.len() * k);
        for _ in 0..k {
            orders.extend_from_slice(&self.orders);
        }
        AbGroup { orders }
    }

    pub fn reduce(&self, gen: usize, v: i64) -> i64 {
        reduce(v, self.orders[gen])
    }

    pub fn canonical(&self) -> FinAb {
        FinAb::from_orders(&self.orders)
    }

    /// All elements as dense coordinate vectors (finite groups only). Intended for
    /// brute-force checks on small groups.
    pub fn elements(&self) -> Vec<Vec<i64>> {
        assert!(self.is_finite(), "cannot enumerate an infinite group");
        let mut out = vec![Vec::with_capacity(self.orders.len())];
        for &o in &self.orders {
            let mut next = Vec::with_capacity(out.len() * o as usize);
            for e in &out {
                for c in 0..o as i64 {
                    let mut v = e.clone();
                    v.push(c);
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }
}

/// Isomorphism class of a finitely generated abelian group in invariant-factor form:
/// `Z/d_1 + ... + Z/d_k` with `d_1 | d_2 | ... | d_k`, no `d_j = 1`, and `0` (an
/// infinite cyclic factor) only at the end.
///
/// Equality of values is isomorphism of groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct FinAb {
    factors: Vec<u64>,
}

impl FinAb {
    pub fn zero() -> Self {
        FinAb { factors: Vec::new() }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::from_orders(&[n])
    }

    pub fn free(rank: usize) -> Self {
        FinAb { factors: vec![0; rank] }
    }

    /// Canonical form of the direct sum of cyclic groups of the given orders.
    pub fn from_orders(orders: &[u64]) -> Self {
        let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        let mut free = 0;
        for &o in orders {
            if o == 0 {
                free += 1;
                continue;
            }
            for (p, e) in factorize(o) {
                by_prime.entry(p).or_default().push(p.pow(e));
            }
        }
        let k = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; k];
        for powers in by_prime.values_mut() {
            powers.sort_unstable();
            let offset = k - powers.len();
            for (j, q) in powers.iter().enumerate() {
                factors[offset + j] *= q;
            }
        }
        factors.extend(std::iter::repeat(0).take(free));
        FinAb { factors }
    }

    /// Builds from factors that are already canonical; used when a Smith form hands
    /// them over. Panics on a broken divisibility chain.
    pub fn from_invariant_factors(factors: Vec<u64>) -> Self {
        let canon = Self::from_orders(&factors);
        assert_eq!(canon.factors, factors, "not in invariant-factor form: {factors:?}");
        canon
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.factors.iter().all(|&d| d != 0)
    }

    pub fn order(&self) -> Option<BigUint> {
        self.as_group().order()
    }

    pub fn free_rank(&self) -> usize {
        self.factors.iter().filter(|&&d| d == 0).count()
    }

    pub fn as_group(&self) -> AbGroup {
        AbGroup::new(self.factors.clone())
    }

    pub fn direct_sum(&self, other: &FinAb) -> FinAb {
        let mut all = self.factors.clone();
        all.extend_from_slice(&other.factors);
        FinAb::from_orders(&all)
    }
}

impl fmt::Display for FinAb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.factors.iter().map(|&d| if d == 0 { "Z".to_string() } else { format!("Z/{d}") }).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl std::str::FromStr for FinAb {
    type Err = String;

    /// Parses the `Display` form, e.g. `Z/2 + Z/4 + Z` or `0`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(FinAb::zero());
        }
        let mut orders = Vec::new();
        for part in s.split('+') {
            let part = part.trim();
            if part == "Z" {
                orders.push(0);
            } else if let Some(n) = part.strip_prefix("Z/") {
                orders.push(n.trim().parse::<u64>().map_err(|e| format!("{part}: {e}"))?);
            } else {
                return Err(format!("cannot parse group summand `{part}`"));
            }
        }
        Ok(FinAb::from_orders(&orders))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_merges_primes() {
        assert_eq!(FinAb::from_orders(&[2, 3]).invariant_factors(), &[6]);
        assert_eq!(FinAb::from_orders(&[4, 2, 6]).invariant_factors(), &[2, 2, 12]);
        assert_eq!(FinAb::from_orders(&[1, 1]).invariant_factors(), &[] as &[u64]);
        assert_eq!(FinAb::from_orders(&[0, 2, 1, 0]).invariant_factors(), &[2, 0, 0]);
        assert_eq!(FinAb::from_orders(&[6, 10, 15]).invariant_factors(), &[30, 30]);
    }

    #[test]
    fn display_and_parse() {
        let g = FinAb::from_orders(&[2, 4, 0]);
        assert_eq!(g.to_string(), "Z/2 + Z/4 + Z");
        assert_eq!("Z/2 + Z/4 + Z".parse::<FinAb>().unwrap(), g);
        assert_eq!("0".parse::<FinAb>().unwrap(), FinAb::zero());
        assert_eq!(FinAb::zero().to_string(), "0");
    }

    #[test]
    fn orders() {
        assert_eq!(FinAb::from_orders(&[2, 6]).order().unwrap(), BigUint::from(12u32));
        assert!(FinAb::free(1).order().is_none());
        assert_eq!(AbGroup::new(vec![2, 3]).elements().len(), 6);
    }
}
