//! Finite groups as multiplication tables, quotient maps and cartesian powers.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::abelian::tower::{Arrow, Tower};
use crate::error::{Error, Result};

pub const DEFAULT_POWER_CAP: u64 = 1_000_000;

/// Elements are `0..n` with `0` the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
    generators: Vec<usize>,
    labels: Option<Vec<String>>,
}

pub fn make_group(table: &[Vec<usize>]) -> Result<FiniteGroup> {
    let n = table.len();
    if n == 0 {
        return Err(Error::MalformedTable("empty table".into()));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(Error::MalformedTable(format!("row {i} has {} entries, expected {n}", row.len())));
        }
        if let Some(&bad) = row.iter().find(|&&x| x >= n) {
            return Err(Error::MalformedTable(format!("entry {bad} in row {i} is out of range")));
        }
    }
    let flat: Vec<usize> = table.iter().flatten().copied().collect();
    let at = |a: usize, b: usize| flat[a * n + b];
    if (0..n).any(|a| at(0, a) != a || at(a, 0) != a) {
        return Err(Error::NoIdentity);
    }
    let mut inverses = vec![0; n];
    for a in 0..n {
        match (0..n).find(|&b| at(a, b) == 0 && at(b, a) == 0) {
            Some(b) => inverses[a] = b,
            None => return Err(Error::NoInverse(a)),
        }
    }
    for a in 0..n {
        for b in 0..n {
            let ab = at(a, b);
            for c in 0..n {
                if at(ab, c) != at(a, at(b, c)) {
                    return Err(Error::NotAssociative { a, b, c });
                }
            }
        }
    }
    let mut g = FiniteGroup { n, table: flat, inverses, generators: Vec::new(), labels: None };
    g.generators = g.greedy_generators();
    Ok(g)
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.n).map(<[usize]>::to_vec).collect()
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::MalformedTable(format!("{} labels for {} elements", labels.len(), self.n)));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Replaces the generating set; it must generate the whole group.
    pub fn with_generators(mut self, gens: Vec<usize>) -> Result<Self> {
        if gens.iter().any(|&g| g >= self.n) || self.closure(&gens).len() != self.n {
            return Err(Error::NotSubgroup(format!("{gens:?} does not generate the group")));
        }
        self.generators = gens;
        Ok(self)
    }

    pub fn power_of(&self, g: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, g))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Smallest element generating the whole group, if cyclic.
    pub fn cyclic_generator(&self) -> Option<usize> {
        (0..self.n).find(|&g| self.element_order(g) == self.n)
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.n).filter(|&i| seen[i]).collect()
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![0];
        while span.len() < self.n {
            let mut inside = vec![false; self.n];
            for &x in &span {
                inside[x] = true;
            }
            let g = (1..self.n).find(|&g| !inside[g]).unwrap();
            gens.push(g);
            span = self.closure(&gens);
        }
        gens
    }

    pub fn is_subgroup(&self, subset: &[usize]) -> bool {
        let set: BTreeSet<usize> = subset.iter().copied().collect();
        set.contains(&0) && set.iter().all(|&a| set.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    /// First `(g, n)` with `g n g^-1` outside the subgroup.
    pub fn normality_witness(&self, subgroup: &[usize]) -> Option<(usize, usize)> {
        let mut inside = vec![false; self.n];
        for &k in subgroup {
            inside[k] = true;
        }
        for g in 0..self.n {
            for &k in subgroup {
                if !inside[self.mul(self.mul(g, k), self.inv(g))] {
                    return Some((g, k));
                }
            }
        }
        None
    }

    /// All subgroups, each sorted, listed in order of size then lexicographically.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let trivial = vec![0];
        found.insert(trivial.clone());
        let mut queue = VecDeque::from([trivial]);
        while let Some(h) = queue.pop_front() {
            let mut inside = vec![false; self.n];
            for &x in &h {
                inside[x] = true;
            }
            for g in 0..self.n {
                if inside[g] {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(g);
                let k = self.closure(&gens);
                if found.insert(k.clone()) {
                    queue.push_back(k);
                }
            }
        }
        let mut out: Vec<Vec<usize>> = found.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    pub fn normal_subgroups(&self) -> Vec<Vec<usize>> {
        self.subgroups().into_iter().filter(|h| self.normality_witness(h).is_none()).collect()
    }

    pub fn trivial() -> FiniteGroup {
        make_group(&[vec![0]]).unwrap()
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let g = make_group(&table).expect("cyclic table");
        if n > 1 {
            g.with_generators(vec![1]).unwrap()
        } else {
            g
        }
    }

    /// Dihedral group of order `2m`: element `r^a s^b` is `a + m b`.
    pub fn dihedral(m: usize) -> FiniteGroup {
        let n = 2 * m;
        let decode = |x: usize| (x % m, x / m);
        let table: Vec<Vec<usize>> = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        let (a, b) = decode(x);
                        let (c, d) = decode(y);
                        let rot = if b == 0 { (a + c) % m } else { (a + m - c) % m };
                        rot + m * ((b + d) % 2)
                    })
                    .collect()
            })
            .collect();
        make_group(&table).expect("dihedral table")
    }

    pub fn symmetric3() -> FiniteGroup {
        from_permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]]).expect("S3 generators")
    }

    /// Quaternion group; element `2u + s` is `(-1)^s` times unit `u` of `1, i, j, k`.
    pub fn quaternion() -> FiniteGroup {
        // unit products: (u, v) -> (sign, unit)
        let unit_mul = |u: usize, v: usize| -> (usize, usize) {
            match (u, v) {
                (0, v) => (0, v),
                (u, 0) => (0, u),
                (u, v) if u == v => (1, 0),
                (1, 2) => (0, 3),
                (2, 3) => (0, 1),
                (3, 1) => (0, 2),
                (2, 1) => (1, 3),
                (3, 2) => (1, 1),
                (1, 3) => (1, 2),
                _ => unreachable!(),
            }
        };
        let table: Vec<Vec<usize>> = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (s, u) = unit_mul(x / 2, y / 2);
                        2 * u + (s + x % 2 + y % 2) % 2
                    })
                    .collect()
            })
            .collect();
        make_group(&table).expect("quaternion table")
    }

    /// `(g, h)` is `g * |H| + h`.
    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let m = other.n;
        let n = self.n * m;
        let table: Vec<Vec<usize>> = (0..n)
            .map(|x| (0..n).map(|y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m)).collect())
            .collect();
        make_group(&table).expect("product table")
    }
}

/// Closure of permutations of `0..degree`, elements numbered in breadth-first order
/// from the identity.
pub fn from_permutations(degree: usize, gens: &[Vec<usize>]) -> Result<FiniteGroup> {
    for (k, p) in gens.iter().enumerate() {
        let mut seen = vec![false; degree];
        if p.len() != degree {
            return Err(Error::BadPermutation(format!("generator {k} has length {}, expected {degree}", p.len())));
        }
        for &x in p {
            if x >= degree || std::mem::replace(&mut seen[x], true) {
                return Err(Error::BadPermutation(format!("generator {k} is not a bijection")));
            }
        }
    }
    let identity: Vec<usize> = (0..degree).collect();
    let compose = |p: &[usize], q: &[usize]| -> Vec<usize> { q.iter().map(|&i| p[i]).collect() };
    let mut elements = vec![identity.clone()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
    let mut k = 0;
    while k < elements.len() {
        for g in gens {
            let next = compose(&elements[k], g);
            if !index.contains_key(&next) {
                if elements.len() >= 5000 {
                    return Err(Error::SizeOverflow { size: elements.len() as u128 + 1, cap: 5000 });
                }
                index.insert(next.clone(), elements.len());
                elements.push(next);
            }
        }
        k += 1;
    }
    let table: Vec<Vec<usize>> =
        elements.iter().map(|a| elements.iter().map(|b| index[&compose(a, b)]).collect()).collect();
    let gen_idx: Vec<usize> = gens.iter().map(|g| index[g]).filter(|&i| i != 0).collect();
    let g = make_group(&table)?;
    if gen_idx.is_empty() {
        Ok(g)
    } else {
        g.with_generators(gen_idx)
    }
}

/// A surjective homomorphism, with its kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientMap {
    source: FiniteGroup,
    target: FiniteGroup,
    map: Vec<usize>,
    kernel: Vec<usize>,
}

impl QuotientMap {
    pub fn new(source: FiniteGroup, target: FiniteGroup, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.n || map.iter().any(|&x| x >= target.n) {
            return Err(Error::MalformedTable(format!(
                "element map has {} entries for a group of order {}",
                map.len(),
                source.n
            )));
        }
        for a in 0..source.n {
            for b in 0..source.n {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(Error::NotHomomorphism { a, b });
                }
            }
        }
        let mut hit = vec![false; target.n];
        for &x in &map {
            hit[x] = true;
        }
        if let Some(miss) = hit.iter().position(|&h| !h) {
            return Err(Error::NotSurjective(miss));
        }
        let kernel = (0..source.n).filter(|&a| map[a] == 0).collect();
        Ok(QuotientMap { source, target, map, kernel })
    }

    pub fn identity(g: &FiniteGroup) -> Self {
        QuotientMap { source: g.clone(), target: g.clone(), map: (0..g.n).collect(), kernel: vec![0] }
    }

    pub fn source(&self) -> &FiniteGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.target
    }

    pub fn apply(&self, g: usize) -> usize {
        self.map[g]
    }

    pub fn element_map(&self) -> &[usize] {
        &self.map
    }

    pub fn kernel(&self) -> &[usize] {
        &self.kernel
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &QuotientMap) -> Result<QuotientMap> {
        if first.target != self.source {
            return Err(Error::GroupMismatch("composite of quotient maps does not chain".into()));
        }
        let map: Vec<usize> = first.map.iter().map(|&x| self.map[x]).collect();
        let kernel = (0..first.source.n).filter(|&a| map[a] == 0).collect();
        Ok(QuotientMap { source: first.source.clone(), target: self.target.clone(), map, kernel })
    }
}

impl Arrow for QuotientMap {
    type Object = FiniteGroup;
    fn source(&self) -> &FiniteGroup {
        &self.source
    }
    fn target(&self) -> &FiniteGroup {
        &self.target
    }
}

/// Quotient by a normal subgroup; cosets are numbered by their least element.
pub fn make_quotient(source: &FiniteGroup, kernel: &[usize]) -> Result<(FiniteGroup, QuotientMap)> {
    let n = source.n;
    if kernel.iter().any(|&k| k >= n) {
        return Err(Error::NotSubgroup("element out of range".into()));
    }
    let kernel: Vec<usize> = kernel.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    if !source.is_subgroup(&kernel) {
        return Err(Error::NotSubgroup(format!("{kernel:?} is not closed or misses the identity")));
    }
    if let Some((g, k)) = source.normality_witness(&kernel) {
        return Err(Error::NotNormal { g, n: k });
    }
    let mut coset = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for g in 0..n {
        if coset[g] != usize::MAX {
            continue;
        }
        let idx = reps.len();
        reps.push(g);
        for &k in &kernel {
            coset[source.mul(g, k)] = idx;
        }
    }
    let m = reps.len();
    let table: Vec<Vec<usize>> =
        (0..m).map(|a| (0..m).map(|b| coset[source.mul(reps[a], reps[b])]).collect()).collect();
    let mut target = make_group(&table)?;
    let images: Vec<usize> = source.generators.iter().map(|&g| coset[g]).filter(|&c| c != 0).collect();
    if !images.is_empty() {
        target = target.with_generators(dedup_keep_order(images))?;
    }
    let map = QuotientMap { source: source.clone(), target: target.clone(), map: coset, kernel };
    Ok((target, map))
}

fn dedup_keep_order(v: Vec<usize>) -> Vec<usize> {
    let mut seen = BTreeSet::new();
    v.into_iter().filter(|x| seen.insert(*x)).collect()
}

/// Lexicographic numbering of `G^l`; the first entry is the most significant digit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PowerIndex {
    base: usize,
    length: usize,
    size: usize,
}

pub fn power(g: &FiniteGroup, l: usize) -> Result<PowerIndex> {
    power_with_cap(g.n, l, DEFAULT_POWER_CAP)
}

pub fn power_with_cap(base: usize, l: usize, cap: u64) -> Result<PowerIndex> {
    let size = (base as u128).checked_pow(l as u32).unwrap_or(u128::MAX);
    if size > cap as u128 {
        return Err(Error::SizeOverflow { size, cap });
    }
    Ok(PowerIndex { base, length: l, size: size as usize })
}

impl PowerIndex {
    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn tuple(&self, mut idx: usize) -> Vec<usize> {
        let mut t = vec![0; self.length];
        for slot in t.iter_mut().rev() {
            *slot = idx % self.base;
            idx /= self.base;
        }
        t
    }

    pub fn index(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &x| acc * self.base + x)
    }

    pub fn tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.size).map(|i| self.tuple(i))
    }
}

/// `G/N_0 <- G/N_1 <- ...`.
pub type GroupTower = Tower<QuotientMap>;

/// Validates adjacency (quotient maps are already verified) and that orders do not
/// decrease. A tower whose transitions are all isomorphisms is read as constant and
/// carries stabilization index 0.
pub fn group_tower(groups: Vec<FiniteGroup>, maps: Vec<QuotientMap>) -> Result<GroupTower> {
    for i in 1..groups.len() {
        if groups[i].n < groups[i - 1].n {
            return Err(Error::OrderDecreasing { level: i });
        }
    }
    let t = Tower::new(groups, maps)?;
    let constant = t.depth() > 1 && t.maps().iter().all(|m| m.kernel.len() == 1);
    Ok(if constant { t.with_stabilization_unchecked(0) } else { t })
}

/// `Z/p^0 <- Z/p^1 <- ... <- Z/p^{depth-1}` with reduction maps.
pub fn cyclic_p_tower(p: usize, depth: usize) -> Result<GroupTower> {
    let groups: Vec<FiniteGroup> = (0..depth).map(|i| FiniteGroup::cyclic(p.pow(i as u32))).collect();
    let maps = (0..depth.saturating_sub(1))
        .map(|i| {
            let m = p.pow(i as u32);
            QuotientMap::new(groups[i + 1].clone(), groups[i].clone(), (0..p * m).map(|x| x % m).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    group_tower(groups, maps)
}

/// `G <- G <- ...` with identity maps.
pub fn constant_tower(g: &FiniteGroup, depth: usize) -> Result<GroupTower> {
    let maps = (0..depth.saturating_sub(1)).map(|_| QuotientMap::identity(g)).collect();
    group_tower(vec![g.clone(); depth], maps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables() {
        assert_eq!(make_group(&[vec![0, 1], vec![1, 0]]).unwrap().order(), 2);
        assert_eq!(make_group(&[vec![0, 1], vec![1, 1]]), Err(Error::NoInverse(1)));
        let z4 = FiniteGroup::cyclic(4);
        assert_eq!(z4.generators(), &[1]);
        assert_eq!(make_group(&[vec![1, 0], vec![0, 1]]), Err(Error::NoIdentity));
    }

    #[test]
    fn non_associative_table() {
        // a loop of order 5 that is not a group
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(make_group(&t), Err(Error::NotAssociative { .. })));
    }

    #[test]
    fn standard_groups() {
        let s3 = FiniteGroup::symmetric3();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        let q8 = FiniteGroup::quaternion();
        assert_eq!(q8.order(), 8);
        assert_eq!((0..8).filter(|&g| q8.element_order(g) == 4).count(), 6);
        let d4 = FiniteGroup::dihedral(4);
        assert_eq!((0..8).filter(|&g| d4.element_order(g) == 2).count(), 5);
        assert_eq!(FiniteGroup::cyclic(2).direct_product(&FiniteGroup::cyclic(2)).cyclic_generator(), None);
        assert_eq!(FiniteGroup::cyclic(6).subgroups().len(), 4);
        assert_eq!(d4.subgroups().len(), 10);
        assert_eq!(q8.normal_subgroups().len(), 6);
    }

    #[test]
    fn quotients() {
        let z4 = FiniteGroup::cyclic(4);
        let (q, pi) = make_quotient(&z4, &[0, 2]).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(pi.element_map(), &[0, 1, 0, 1]);
        let s3 = FiniteGroup::symmetric3();
        let (q, pi) = make_quotient(&s3, &[0]).unwrap();
        assert_eq!(q, make_group(&s3.table()).unwrap().with_generators(s3.generators().to_vec()).unwrap());
        assert_eq!(pi.element_map(), &[0, 1, 2, 3, 4, 5]);
        let t = (1..6).find(|&g| s3.element_order(g) == 2).unwrap();
        assert!(matches!(make_quotient(&s3, &[0, t]), Err(Error::NotNormal { .. })));
        assert!(matches!(make_quotient(&z4, &[0, 1]), Err(Error::NotSubgroup(_))));
    }

    #[test]
    fn powers() {
        let z2 = FiniteGroup::cyclic(2);
        let p = power(&z2, 3).unwrap();
        assert_eq!(p.len(), 8);
        assert_eq!(p.tuple(1), vec![0, 0, 1]);
        assert_eq!(p.tuple(6), vec![1, 1, 0]);
        assert_eq!(p.index(&[1, 0, 1]), 5);
        assert_eq!(power(&z2, 0).unwrap().tuples().collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert!(matches!(power(&FiniteGroup::cyclic(6), 8), Err(Error::SizeOverflow { .. })));
    }

    #[test]
    fn towers() {
        for p in [2, 3, 5] {
            let t = cyclic_p_tower(p, 4).unwrap();
            assert_eq!(t.object(3).order(), p.pow(3));
        }
        let z4 = FiniteGroup::cyclic(4);
        let z2 = FiniteGroup::cyclic(2);
        assert!(matches!(QuotientMap::new(z2.clone(), z4.clone(), vec![0, 2]), Err(Error::NotSurjective(1))));
        assert!(matches!(QuotientMap::new(z4, z2, vec![0, 1, 1, 0]), Err(Error::NotHomomorphism { .. })));
    }
}
