//! The complex `A[G^•]`: degree `l` is a copy of `A` for every `(g_1, ..., g_l)`.
//!
//! Faces on the summand `(g_1, ..., g_l)`: `d_0` drops `g_1`, `d_j` multiplies
//! `g_j g_{j+1}`, and `d_l` drops `g_l` after acting on the coefficient by `g_l`. The
//! differential is `Σ (-1)^j d_j`. The normalized variant keeps only tuples without the
//! identity; faces landing on a degenerate tuple are dropped.

use crate::abelian::complex::complex_homology_lattice;
use crate::abelian::sparse::{normalize, SparseVec};
use crate::abelian::{complex_homology, AbGroup, AbHom, ChainComplex, FinAb, Homology};
use crate::error::{Error, Result};
use crate::gmod::{equivariance_witness, GModule};
use crate::groups::{FiniteGroup, QuotientMap};

pub const DEFAULT_CAP: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BarOptions {
    pub normalized: bool,
    /// Maximum number of generators of any chain group.
    pub cap: u64,
}

impl Default for BarOptions {
    fn default() -> Self {
        BarOptions { normalized: true, cap: DEFAULT_CAP }
    }
}

impl BarOptions {
    pub fn moore() -> Self {
        BarOptions { normalized: false, ..Self::default() }
    }

    pub fn with_cap(self, cap: u64) -> Self {
        BarOptions { cap, ..self }
    }
}

/// Numbering of summands: tuples in lexicographic order, then coefficient generators.
/// Normalized tuples use digits `g - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BarLayout {
    order: usize,
    rank: usize,
    normalized: bool,
}

impl BarLayout {
    pub fn new(group_order: usize, rank: usize, normalized: bool) -> Self {
        BarLayout { order: group_order, rank, normalized }
    }

    fn base(&self) -> usize {
        if self.normalized {
            self.order - 1
        } else {
            self.order
        }
    }

    pub fn tuple_count(&self, l: usize) -> u128 {
        (self.base() as u128).saturating_pow(l as u32)
    }

    pub fn generator_count(&self, l: usize) -> u128 {
        self.tuple_count(l).saturating_mul(self.rank as u128)
    }

    pub fn check(&self, l: usize, cap: u64) -> Result<usize> {
        let size = self.generator_count(l);
        if size > cap as u128 {
            return Err(Error::SizeOverflow { size, cap });
        }
        Ok(size as usize)
    }

    /// `None` for degenerate tuples in the normalized layout.
    pub fn encode(&self, tuple: &[usize]) -> Option<usize> {
        let mut idx = 0;
        for &g in tuple {
            let digit = if self.normalized {
                g.checked_sub(1)?
            } else {
                g
            };
            idx = idx * self.base() + digit;
        }
        Some(idx)
    }

    pub fn decode(&self, mut idx: usize, l: usize) -> Vec<usize> {
        let mut t = vec![0; l];
        let shift = usize::from(self.normalized);
        for slot in t.iter_mut().rev() {
            *slot = idx % self.base() + shift;
            idx /= self.base();
        }
        t
    }

    pub fn chain_group(&self, a: &AbGroup, l: usize) -> AbGroup {
        a.power(self.tuple_count(l) as usize)
    }

    /// Position of coefficient generator `j` in summand `tuple`.
    pub fn position(&self, tuple: &[usize], j: usize) -> Option<usize> {
        self.encode(tuple).map(|t| t * self.rank + j)
    }
}

/// `d_l : A[G^l] -> A[G^{l-1}]`, `l >= 1`.
pub fn bar_differential(m: &GModule, layout: &BarLayout, l: usize) -> AbHom {
    assert!(l >= 1);
    let g = m.group();
    let a = m.abgroup();
    let r = a.rank();
    let source = layout.chain_group(a, l);
    let target = layout.chain_group(a, l - 1);
    let tuples = layout.tuple_count(l) as usize;
    let mut columns = Vec::with_capacity(tuples * r);
    let mut face = Vec::with_capacity(l);
    for t in 0..tuples {
        let tuple = layout.decode(t, l);
        let mut targets: Vec<(Option<usize>, i64)> = Vec::with_capacity(l);
        face.clear();
        face.extend_from_slice(&tuple[1..]);
        targets.push((layout.encode(&face), 1));
        for j in 1..l {
            face.clear();
            face.extend_from_slice(&tuple[..j - 1]);
            face.push(g.mul(tuple[j - 1], tuple[j]));
            face.extend_from_slice(&tuple[j + 1..]);
            targets.push((layout.encode(&face), if j % 2 == 0 { 1 } else { -1 }));
        }
        let last = layout.encode(&tuple[..l - 1]);
        let last_sign = if l % 2 == 0 { 1 } else { -1 };
        let act = m.action(tuple[l - 1]);
        for j in 0..r {
            let mut col: SparseVec = Vec::with_capacity(l * 2);
            for &(s, sign) in &targets {
                if let Some(s) = s {
                    col.push((s * r + j, sign));
                }
            }
            if let Some(s) = last {
                for &(i, c) in act.column(j) {
                    col.push((s * r + i, last_sign * c));
                }
            }
            columns.push(normalize(col, &target));
        }
    }
    AbHom::new_unchecked(source, target, columns)
}

#[derive(Clone, Debug)]
pub struct BarComplex {
    layout: BarLayout,
    complex: ChainComplex,
}

impl BarComplex {
    pub fn layout(&self) -> &BarLayout {
        &self.layout
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }
}

/// The complex through degree `length`, with `d² = 0` verified.
pub fn bar_complex(m: &GModule, length: usize, opts: BarOptions) -> Result<BarComplex> {
    let layout = BarLayout::new(m.group().order(), m.abgroup().rank(), opts.normalized);
    for l in 0..=length {
        layout.check(l, opts.cap)?;
    }
    let groups = (0..=length).map(|l| layout.chain_group(m.abgroup(), l)).collect();
    let diffs = (1..=length).map(|l| bar_differential(m, &layout, l)).collect();
    Ok(BarComplex { layout, complex: ChainComplex::new(groups, diffs)? })
}

/// `H_p(G, A)` with lifts to the bar complex.
#[derive(Debug)]
pub struct BarHomology {
    degree: usize,
    layout: BarLayout,
    homology: Homology,
}

impl BarHomology {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn group(&self) -> &FinAb {
        self.homology.group()
    }

    pub fn layout(&self) -> &BarLayout {
        &self.layout
    }

    pub fn homology(&self) -> &Homology {
        &self.homology
    }
}

pub fn group_homology(m: &GModule, p: usize) -> Result<FinAb> {
    Ok(bar_homology(m, p, BarOptions::default())?.group().clone())
}

pub fn bar_homology(m: &GModule, p: usize, opts: BarOptions) -> Result<BarHomology> {
    Ok(bar_homology_range(m, p, p, opts)?.pop().unwrap())
}

/// Degrees `lo..=hi`, sharing the differentials.
pub fn bar_homology_range(m: &GModule, lo: usize, hi: usize, opts: BarOptions) -> Result<Vec<BarHomology>> {
    let layout = BarLayout::new(m.group().order(), m.abgroup().rank(), opts.normalized);
    for l in lo..=hi + 1 {
        layout.check(l, opts.cap)?;
    }
    let a = m.abgroup();
    let diff = |l: usize| -> AbHom {
        if l == 0 {
            AbHom::zero(layout.chain_group(a, 0), AbGroup::trivial())
        } else {
            bar_differential(m, &layout, l)
        }
    };
    let mut out = Vec::with_capacity(hi + 1 - lo);
    let mut d_out = diff(lo);
    for p in lo..=hi {
        let d_in = diff(p + 1);
        let homology = complex_homology(&d_in, &d_out)?;
        out.push(BarHomology { degree: p, layout, homology });
        d_out = d_in;
    }
    Ok(out)
}

/// The chain map `A'[G'^p] -> A[G^p]`, `(g'_i; a) ↦ (q(g'_i); f a)`.
pub fn bar_chain_map(
    q: &QuotientMap,
    f: &AbHom,
    source: &BarLayout,
    target: &BarLayout,
    target_group: &AbGroup,
    p: usize,
) -> AbHom {
    let src_group = f.source().power(source.tuple_count(p) as usize);
    let r = f.source().rank();
    let rt = f.target().rank();
    let mut columns = Vec::with_capacity(src_group.rank());
    for t in 0..source.tuple_count(p) as usize {
        let tuple: Vec<usize> = source.decode(t, p).into_iter().map(|g| q.apply(g)).collect();
        let image = target.encode(&tuple);
        for j in 0..r {
            columns.push(match image {
                Some(s) => f.column(j).iter().map(|&(i, c)| (s * rt + i, c)).collect(),
                None => Vec::new(),
            });
        }
    }
    AbHom::new_unchecked(src_group, target_group.clone(), columns)
}

/// `H_p(G', M') -> H_p(G, M)` induced by `q` and an equivariant `f : M' -> M`.
pub fn induced_homology_map(
    q: &QuotientMap,
    source: &GModule,
    target: &GModule,
    f: &AbHom,
    p: usize,
) -> Result<AbHom> {
    let hs = bar_homology(source, p, BarOptions::default())?;
    let ht = bar_homology(target, p, BarOptions::default())?;
    induced_between(q, source, target, f, &hs, &ht)
}

/// As [`induced_homology_map`], reusing computed homology at both ends.
pub fn induced_between(
    q: &QuotientMap,
    source: &GModule,
    target: &GModule,
    f: &AbHom,
    hs: &BarHomology,
    ht: &BarHomology,
) -> Result<AbHom> {
    if q.source() != source.group() || q.target() != target.group() {
        return Err(Error::GroupMismatch("modules are not over the quotient map".into()));
    }
    if let Some(g) = equivariance_witness(source, target, q, f) {
        return Err(Error::NotEquivariant { level: None, element: g });
    }
    if hs.degree != ht.degree || hs.layout.normalized != ht.layout.normalized {
        return Err(Error::IncompatibleMaps("homology computed in different degrees or variants".into()));
    }
    let chain = bar_chain_map(q, f, &hs.layout, &ht.layout, ht.homology.ambient(), hs.degree);
    ht.homology.induced_from(&hs.homology, &chain)
}

/// Homology of a cyclic group from the periodic resolution: `H_0 = A/(g-1)A`,
/// `H_odd = ker(g-1)/N A`, `H_even = ker N/(g-1)A` with `N = Σ g^j`.
pub fn cyclic_homology_oracle(m: &GModule, p: usize) -> Result<FinAb> {
    let g = m.group().cyclic_generator().ok_or(Error::NotCyclic)?;
    let a = m.abgroup().clone();
    let id = AbHom::identity(a.clone());
    let t = m.action(g).clone();
    let t_minus_1 = t.add(&id.neg())?;
    let mut norm = AbHom::zero(a.clone(), a.clone());
    let mut power = id;
    for _ in 0..m.group().order() {
        norm = norm.add(&power)?;
        power = t.compose(&power)?;
    }
    let h = if p == 0 {
        complex_homology_lattice(&t_minus_1, &AbHom::zero(a, AbGroup::trivial()))?
    } else if p % 2 == 1 {
        complex_homology_lattice(&norm, &t_minus_1)?
    } else {
        complex_homology_lattice(&t_minus_1, &norm)?
    };
    Ok(h.group().clone())
}

/// `Z/n` with `g` acting by `signs[g]`, which must be a homomorphism to `{±1}`.
pub fn sign_module(group: &FiniteGroup, n: u64, signs: &[i64]) -> Result<GModule> {
    let a = AbGroup::cyclic(n);
    let action = signs
        .iter()
        .map(|&s| AbHom::from_dense(a.clone(), a.clone(), &[vec![s]]))
        .collect::<Result<Vec<_>>>()?;
    GModule::from_action(group, a, action)
}
