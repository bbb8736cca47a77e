//! The spectral sequence of the column filtration of a bicomplex.
//!
//! `E_1` and `E_2` come from the sparse homology engine. Later pages are read off the
//! support of `E_2` when every `d_r` is forced to vanish, and otherwise from the
//! filtration formula `E_r^p = Z_r^p / (Z_{r-1}^{p-1} + d Z_{r-1}^{p+r-1})` on the
//! total complex, which needs the total complex to be small.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::bicomplex::{Bicomplex, BicomplexMap, TotalHomology};
use crate::abelian::lattice::{preimage_of_relations, relation_columns, sparse_to_big, Lattice};
use crate::abelian::{complex_homology, AbGroup, AbHom, FinAb, Homology, IntMatrix, SparseVec, Subquotient};
use crate::error::{Error, Result};

/// Largest total-complex rank the filtration route accepts.
pub const LATTICE_CAP: u64 = 600;

/// Homology of one column at one spot. `Whole` stands for the chain group itself when
/// both vertical maps there vanish.
#[derive(Debug)]
pub(crate) enum ColumnHomology {
    Whole(AbGroup),
    Cycles(Homology),
}

impl ColumnHomology {
    fn build(d_in: &AbHom, d_out: &AbHom) -> Result<Self> {
        if d_in.is_zero() && d_out.is_zero() {
            Ok(ColumnHomology::Whole(d_out.source().clone()))
        } else {
            Ok(ColumnHomology::Cycles(complex_homology(d_in, d_out)?))
        }
    }

    pub(crate) fn group(&self) -> AbGroup {
        match self {
            ColumnHomology::Whole(a) => a.clone(),
            ColumnHomology::Cycles(h) => h.group().as_group(),
        }
    }

    fn lifts(&self) -> Vec<SparseVec> {
        match self {
            ColumnHomology::Whole(a) => (0..a.rank()).map(|i| vec![(i, 1)]).collect(),
            ColumnHomology::Cycles(h) => h.lifts().to_vec(),
        }
    }

    fn classify(&self, v: &SparseVec) -> Option<SparseVec> {
        match self {
            ColumnHomology::Whole(_) => Some(v.clone()),
            ColumnHomology::Cycles(h) => {
                Some(h.classify(v)?.into_iter().enumerate().filter(|&(_, c)| c != 0).collect())
            }
        }
    }

    /// The map `source -> self` induced by a chain-level `f`.
    pub(crate) fn induced(&self, source: &ColumnHomology, f: &AbHom) -> Result<AbHom> {
        if let (ColumnHomology::Whole(_), ColumnHomology::Whole(_)) = (source, self) {
            return Ok(f.clone());
        }
        let columns = source
            .lifts()
            .iter()
            .map(|z| self.classify(&f.apply(z)).ok_or_else(|| Error::Internal("chain map does not preserve cycles".into())))
            .collect::<Result<Vec<_>>>()?;
        AbHom::new(source.group(), self.group(), columns)
    }
}

/// `E_1`, `d_1` and `E_2` from the homology engine over a triangle `p + q <= top`.
#[derive(Debug)]
pub struct EngineE2 {
    top: usize,
    pub(crate) e1: Vec<Vec<Option<ColumnHomology>>>,
    d1: Vec<Vec<Option<AbHom>>>,
    pub(crate) e2: Vec<Vec<Option<Homology>>>,
}

impl EngineE2 {
    /// `E_1` through total degree `top + 1` (so `d_1` into the triangle is known) and
    /// `E_2` through `top`.
    pub fn new(b: &Bicomplex, top: usize) -> Result<Self> {
        let (pm, qm) = (b.p_max(), b.q_max());
        let reach = top + 1;
        let mut e1: Vec<Vec<Option<ColumnHomology>>> = (0..=pm).map(|_| (0..=qm).map(|_| None).collect()).collect();
        for (p, col) in e1.iter_mut().enumerate() {
            for (q, slot) in col.iter_mut().enumerate() {
                if p + q > reach {
                    continue;
                }
                let d_in = if q < qm { b.dv(p, q + 1).clone() } else { AbHom::zero(AbGroup::trivial(), b.group(p, q).clone()) };
                let d_out = if q > 0 { b.dv(p, q).clone() } else { AbHom::zero(b.group(p, q).clone(), AbGroup::trivial()) };
                *slot = Some(ColumnHomology::build(&d_in, &d_out)?);
            }
        }
        let mut d1: Vec<Vec<Option<AbHom>>> = (0..=pm).map(|_| (0..=qm).map(|_| None).collect()).collect();
        for p in 1..=pm {
            for q in 0..=qm {
                if let (Some(src), Some(tgt)) = (&e1[p][q], &e1[p - 1][q]) {
                    d1[p][q] = Some(tgt.induced(src, b.dh(p, q))?);
                }
            }
        }
        let mut e2: Vec<Vec<Option<Homology>>> = (0..=pm).map(|_| (0..=qm).map(|_| None).collect()).collect();
        for p in 0..=pm {
            for q in 0..=qm {
                if p + q > top {
                    continue;
                }
                let here = e1[p][q].as_ref().expect("inside the triangle").group();
                let d_in = match d1.get(p + 1).and_then(|c| c[q].clone()) {
                    Some(d) => d,
                    None => AbHom::zero(AbGroup::trivial(), here.clone()),
                };
                let d_out = if p > 0 { d1[p][q].clone().expect("inside the triangle") } else { AbHom::zero(here, AbGroup::trivial()) };
                e2[p][q] = Some(complex_homology(&d_in, &d_out)?);
            }
        }
        Ok(EngineE2 { top, e1, d1, e2 })
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn e2(&self, p: usize, q: usize) -> Option<&FinAb> {
        self.e2.get(p)?.get(q)?.as_ref().map(Homology::group)
    }

    /// Induced maps on `E_2` over the triangle, `source -> self`.
    pub fn induced(&self, source: &EngineE2, f: &BicomplexMap) -> Result<Vec<Vec<Option<AbHom>>>> {
        let mut out = Vec::with_capacity(self.e2.len());
        for p in 0..self.e2.len() {
            let mut col = Vec::with_capacity(self.e2[p].len());
            for q in 0..self.e2[p].len() {
                col.push(match (&source.e2[p][q], &self.e2[p][q], &source.e1[p][q], &self.e1[p][q]) {
                    (Some(hs), Some(ht), Some(cs), Some(ct)) => {
                        let e1_map = ct.induced(cs, f.block(p, q))?;
                        Some(ht.induced_from(hs, &e1_map)?)
                    }
                    _ => None,
                });
            }
            out.push(col);
        }
        Ok(out)
    }
}

/// One page: entries inside the computed triangle and `d_r` leaving each of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Page {
    pub r: usize,
    pub entries: Vec<Vec<Option<FinAb>>>,
    pub differentials: Vec<Vec<Option<AbHom>>>,
}

impl Page {
    pub fn entry(&self, p: usize, q: usize) -> Option<&FinAb> {
        self.entries.get(p)?.get(q)?.as_ref()
    }

    pub fn has_nonzero_differential(&self) -> bool {
        self.differentials.iter().flatten().flatten().any(|d| !d.is_zero())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Every `d_r` with `r >= 2` vanishes for lack of a nonzero source or target.
    Support,
    /// Pages from the filtration of the total complex.
    Filtration,
}

/// Free rank and order of the torsion part.
pub fn size_of(a: &FinAb) -> (usize, BigUint) {
    let torsion = a.invariant_factors().iter().filter(|&&d| d != 0).fold(BigUint::one(), |acc, &d| acc * BigUint::from(d));
    (a.free_rank(), torsion)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceRow {
    pub degree: usize,
    pub graded: (usize, BigUint),
    pub total: FinAb,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralPages {
    pub pages: Vec<Page>,
    pub e_infinity: Vec<Vec<Option<FinAb>>>,
    /// Page from which all later differentials vanish (at least 2).
    pub collapse_page: usize,
    pub convergence: Vec<ConvergenceRow>,
    pub reliable: Option<usize>,
    pub route: Route,
}

impl SpectralPages {
    pub fn page(&self, r: usize) -> Option<&Page> {
        self.pages.iter().find(|pg| pg.r == r)
    }

    pub fn converges(&self) -> bool {
        self.convergence.iter().all(|c| c.agrees)
    }

    pub fn collapses_at_e2(&self) -> bool {
        self.collapse_page == 2
    }
}

fn grid<T: Clone>(b: &Bicomplex, v: T) -> Vec<Vec<T>> {
    vec![vec![v; b.q_max() + 1]; b.p_max() + 1]
}

/// Last page that can carry a nonzero differential is `E_{min(P, Q+1)}`.
fn infinity_page(b: &Bicomplex) -> usize {
    b.p_max().min(b.q_max() + 1).max(1) + 1
}

pub fn ss_pages(b: &Bicomplex, r_max: usize) -> Result<SpectralPages> {
    let Some(top) = b.reliable_degree() else {
        return Err(Error::Indeterminate("the truncation leaves no reliable degree".into()));
    };
    let total = super::bicomplex::total_homology_through(b, top)?;
    let engine = EngineE2::new(b, top)?;
    ss_pages_with(b, r_max, &engine, &total)
}

/// As [`ss_pages`], reusing `E_2` and total homology computed elsewhere.
pub fn ss_pages_with(b: &Bicomplex, r_max: usize, engine: &EngineE2, total: &TotalHomology) -> Result<SpectralPages> {
    let top = engine.top();
    let inside = |p: usize, q: usize| p + q <= top;
    let mut page1 = Page { r: 1, entries: grid(b, None), differentials: grid(b, None) };
    let mut page2 = Page { r: 2, entries: grid(b, None), differentials: grid(b, None) };
    for p in 0..=b.p_max() {
        for q in 0..=b.q_max() {
            if !inside(p, q) {
                continue;
            }
            page1.entries[p][q] = engine.e1[p][q].as_ref().map(|c| c.group().canonical());
            page1.differentials[p][q] = if p > 0 { engine.d1[p][q].clone() } else { None };
            page2.entries[p][q] = engine.e2(p, q).cloned();
        }
    }
    let r_inf = infinity_page(b);
    let forced_zero = support_vanishes(b, engine);
    let (later, route) = if forced_zero {
        let mut pages = Vec::new();
        for r in 2..=r_inf {
            let mut pg = Page { r, entries: page2.entries.clone(), differentials: grid(b, None) };
            for p in 0..=b.p_max() {
                for q in 0..=b.q_max() {
                    if let Some(e) = &pg.entries[p][q] {
                        let target = if p >= r && q + r - 1 <= b.q_max() && inside(p - r, q + r - 1) {
                            pg.entries[p - r][q + r - 1].clone().expect("inside").as_group()
                        } else {
                            AbGroup::trivial()
                        };
                        pg.differentials[p][q] = Some(AbHom::zero(e.as_group(), target));
                    }
                }
            }
            pages.push(pg);
        }
        (pages, Route::Support)
    } else {
        let pages = Filtration::new(b, top)?.pages(r_inf)?;
        for p in 0..=b.p_max() {
            for q in 0..=b.q_max() {
                if pages[0].entries[p][q] != page2.entries[p][q] {
                    return Err(Error::Internal(format!("E_2 at ({p}, {q}) differs between the two routes")));
                }
            }
        }
        (pages, Route::Filtration)
    };
    let e_infinity = later.last().expect("at least page 2").entries.clone();
    let collapse_page = (2..=r_inf)
        .find(|&r| later.iter().filter(|pg| pg.r >= r).all(|pg| !pg.has_nonzero_differential()))
        .unwrap_or(r_inf);
    let mut convergence = Vec::new();
    for n in 0..=top.min(total.groups.len().saturating_sub(1)) {
        let mut free = 0;
        let mut order = BigUint::one();
        for p in 0..=n.min(b.p_max()) {
            let q = n - p;
            if q > b.q_max() {
                continue;
            }
            if let Some(e) = &e_infinity[p][q] {
                let (f, o) = size_of(e);
                free += f;
                order *= o;
            }
        }
        let t = total.groups[n].clone();
        let agrees = size_of(&t) == (free, order.clone());
        convergence.push(ConvergenceRow { degree: n, graded: (free, order), total: t, agrees });
    }
    let mut pages = vec![page1];
    let keep = r_max.max(1);
    for r in 2..=keep {
        let src = later.iter().find(|pg| pg.r == r).unwrap_or_else(|| later.last().unwrap());
        let mut pg = src.clone();
        pg.r = r;
        pages.push(pg);
    }
    Ok(SpectralPages { pages, e_infinity, collapse_page, convergence, reliable: b.reliable_degree(), route })
}

/// True when no `d_r`, `r >= 2`, can be nonzero: for every spot with nonzero `E_2`
/// (or, one degree past the triangle, nonzero `E_1`), each possible target is zero.
fn support_vanishes(b: &Bicomplex, engine: &EngineE2) -> bool {
    let top = engine.top();
    let nonzero = |p: usize, q: usize| -> bool {
        if p + q <= top {
            engine.e2(p, q).is_some_and(|e| !e.is_zero())
        } else {
            engine.e1[p][q].as_ref().map_or(true, |c| c.group().rank() > 0)
        }
    };
    for p in 0..=b.p_max() {
        for q in 0..=b.q_max() {
            if p + q > top + 1 || !nonzero(p, q) {
                continue;
            }
            for r in 2..=p {
                let tq = q + r - 1;
                if tq <= b.q_max() && nonzero(p - r, tq) {
                    return false;
                }
            }
        }
    }
    true
}

/// Lattice description of the column filtration of `Tot`.
struct Filtration<'a> {
    b: &'a Bicomplex,
    top: usize,
    tot: Vec<AbGroup>,
    /// `(p, offset)` blocks of each `Tot_n`.
    blocks: Vec<Vec<(usize, usize)>>,
    d: Vec<IntMatrix<BigInt>>,
}

impl<'a> Filtration<'a> {
    fn new(b: &'a Bicomplex, top: usize) -> Result<Self> {
        let last = (top + 1).min(b.max_degree());
        let mut tot = Vec::new();
        let mut blocks = Vec::new();
        let mut d = Vec::new();
        for n in 0..=last {
            let g = b.tot_group(n);
            if g.rank() as u64 > LATTICE_CAP {
                return Err(Error::SizeOverflow { size: g.rank() as u128, cap: LATTICE_CAP });
            }
            blocks.push(b.tot_layout(n).blocks);
            let dn = b.tot_differential(n);
            let cols: Vec<Vec<BigInt>> = dn.columns().iter().map(|c| sparse_to_big(c, dn.target().rank())).collect();
            d.push(IntMatrix::from_columns(dn.target().rank(), &cols));
            tot.push(g);
        }
        Ok(Filtration { b, top, tot, blocks, d })
    }

    fn block_of(&self, n: usize, coord: usize) -> usize {
        let mut p = self.blocks[n][0].0;
        for &(b, o) in &self.blocks[n] {
            if o <= coord {
                p = b;
            }
        }
        p
    }

    /// Preimage of `F_p Tot_n` in `Z^{rank}`: units of blocks `<= p`, relations elsewhere.
    fn filtration(&self, n: usize, p: isize) -> Lattice {
        let g = &self.tot[n];
        let rank = g.rank();
        let mut out = Vec::with_capacity(rank);
        for i in 0..rank {
            let mut v = vec![BigInt::zero(); rank];
            if (self.block_of(n, i) as isize) <= p {
                v[i] = BigInt::one();
            } else if g.order_of(i) != 0 {
                v[i] = BigInt::from(g.order_of(i));
            } else {
                continue;
            }
            out.push(v);
        }
        out
    }

    /// `Z_r^p` in `Tot_n`: elements of `F_p` whose boundary lies in `F_{p-r}`.
    fn cycles(&self, n: usize, p: isize, r: usize) -> Lattice {
        let basis = self.filtration(n, p);
        if n == 0 || basis.is_empty() {
            return basis;
        }
        let target = &self.tot[n - 1];
        let bound = p - r as isize;
        let rows: Vec<usize> = (0..target.rank()).filter(|&i| self.block_of(n - 1, i) as isize > bound).collect();
        if rows.is_empty() {
            return basis;
        }
        let bmat = IntMatrix::from_columns(self.tot[n].rank(), &basis);
        let m = self.d[n].mul(&bmat).expect("shapes").select_rows(&rows);
        let sub = AbGroup::new(rows.iter().map(|&i| target.order_of(i)).collect());
        preimage_of_relations(&m, &sub).into_iter().map(|y| bmat.mul_vec(&y)).collect()
    }

    fn boundaries_of(&self, n: usize, lattice: &Lattice) -> Lattice {
        lattice.iter().map(|v| self.d[n].mul_vec(v)).collect()
    }

    /// `E_r^{p, n-p}`.
    fn entry(&self, n: usize, p: usize, r: usize) -> Result<Subquotient> {
        let rank = self.tot[n].rank();
        let p = p as isize;
        let numerator = self.cycles(n, p, r);
        let mut denominator = self.cycles(n, p - 1, r - 1);
        denominator.extend(relation_columns(&self.tot[n]));
        if n < self.tot.len() - 1 {
            let above = self.cycles(n + 1, p + r as isize - 1, r - 1);
            denominator.extend(self.boundaries_of(n + 1, &above));
        }
        Subquotient::new(rank, &numerator, &denominator)
    }

    fn pages(&self, r_inf: usize) -> Result<Vec<Page>> {
        let b = self.b;
        let mut pages = Vec::new();
        for r in 2..=r_inf {
            let mut entries: Vec<Vec<Option<Subquotient>>> = (0..=b.p_max()).map(|_| (0..=b.q_max()).map(|_| None).collect()).collect();
            for p in 0..=b.p_max() {
                for q in 0..=b.q_max() {
                    if p + q <= self.top {
                        entries[p][q] = Some(self.entry(p + q, p, r)?);
                    }
                }
            }
            let mut differentials = grid(b, None);
            for p in 0..=b.p_max() {
                for q in 0..=b.q_max() {
                    let Some(src) = &entries[p][q] else { continue };
                    let n = p + q;
                    let target = if p >= r && q + r - 1 <= b.q_max() { entries[p - r][q + r - 1].as_ref() } else { None };
                    let tgt_group = target.map_or_else(AbGroup::trivial, |t| t.group().as_group());
                    let columns = match target {
                        None => vec![Vec::new(); src.group().invariant_factors().len()],
                        Some(t) => src
                            .lifts()
                            .iter()
                            .map(|x| {
                                let image = self.d[n].mul_vec(x);
                                let c = t.classify(&image).ok_or_else(|| Error::Internal("d_r leaves the cycles".into()))?;
                                Ok(c.into_iter()
                                    .enumerate()
                                    .filter(|(_, v)| !v.is_zero())
                                    .map(|(i, v)| (i, i64::try_from(v).expect("coordinate fits")))
                                    .collect())
                            })
                            .collect::<Result<Vec<SparseVec>>>()?,
                    };
                    differentials[p][q] = Some(AbHom::new(src.group().as_group(), tgt_group, columns)?);
                }
            }
            let entries = entries.into_iter().map(|c| c.into_iter().map(|e| e.map(|s| s.group().clone())).collect()).collect();
            pages.push(Page { r, entries, differentials });
        }
        Ok(pages)
    }
}
