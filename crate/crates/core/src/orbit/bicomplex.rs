//! First-quadrant bicomplexes of abelian groups and their total complexes.

use crate::abelian::{complex_homology, AbGroup, AbHom, FinAb, Homology, SparseVec};
use crate::error::{Error, Result};

/// `B_{p,q}` for `0 <= p <= P`, `0 <= q <= Q`, with `d^h : B_{p,q} -> B_{p-1,q}` and
/// `d^v : B_{p,q} -> B_{p,q-1}` anticommuting. The total differential is `d^h + d^v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bicomplex {
    groups: Vec<Vec<AbGroup>>,
    horizontal: Vec<Vec<AbHom>>,
    vertical: Vec<Vec<AbHom>>,
    truncated: bool,
}

impl Bicomplex {
    /// `groups[p][q]`; `horizontal[p - 1][q]` leaves `(p, q)` and `vertical[p][q - 1]`
    /// leaves `(p, q)`.
    pub fn new(groups: Vec<Vec<AbGroup>>, horizontal: Vec<Vec<AbHom>>, vertical: Vec<Vec<AbHom>>) -> Result<Self> {
        let b = Self::new_unverified(groups, horizontal, vertical)?;
        b.verify()?;
        Ok(b)
    }

    /// Shapes are checked; the differential identities are not.
    pub fn new_unverified(groups: Vec<Vec<AbGroup>>, horizontal: Vec<Vec<AbHom>>, vertical: Vec<Vec<AbHom>>) -> Result<Self> {
        let cols = groups.len();
        if cols == 0 || groups[0].is_empty() || groups.iter().any(|c| c.len() != groups[0].len()) {
            return Err(Error::BicomplexAxiom { p: 0, q: 0, what: "ragged grid" });
        }
        let rows = groups[0].len();
        if horizontal.len() != cols - 1 || horizontal.iter().any(|c| c.len() != rows) {
            return Err(Error::BicomplexAxiom { p: 0, q: 0, what: "horizontal maps do not fill the grid" });
        }
        if vertical.len() != cols || vertical.iter().any(|c| c.len() != rows - 1) {
            return Err(Error::BicomplexAxiom { p: 0, q: 0, what: "vertical maps do not fill the grid" });
        }
        for p in 0..cols {
            for q in 0..rows {
                if p > 0 {
                    let h = &horizontal[p - 1][q];
                    if h.source() != &groups[p][q] || h.target() != &groups[p - 1][q] {
                        return Err(Error::BicomplexAxiom { p, q, what: "horizontal map shape" });
                    }
                }
                if q > 0 {
                    let v = &vertical[p][q - 1];
                    if v.source() != &groups[p][q] || v.target() != &groups[p][q - 1] {
                        return Err(Error::BicomplexAxiom { p, q, what: "vertical map shape" });
                    }
                }
            }
        }
        Ok(Bicomplex { groups, horizontal, vertical, truncated: false })
    }

    fn verify(&self) -> Result<()> {
        for p in 0..=self.p_max() {
            for q in 0..=self.q_max() {
                if p >= 2 && !self.dh(p - 1, q).compose(self.dh(p, q))?.is_zero() {
                    return Err(Error::BicomplexAxiom { p, q, what: "d^h d^h != 0" });
                }
                if q >= 2 && !self.dv(p, q - 1).compose(self.dv(p, q))?.is_zero() {
                    return Err(Error::BicomplexAxiom { p, q, what: "d^v d^v != 0" });
                }
                if p >= 1 && q >= 1 {
                    let hv = self.dh(p, q - 1).compose(self.dv(p, q))?;
                    let vh = self.dv(p - 1, q).compose(self.dh(p, q))?;
                    if !hv.add(&vh)?.is_zero() {
                        return Err(Error::BicomplexAxiom { p, q, what: "d^h d^v + d^v d^h != 0" });
                    }
                }
            }
        }
        Ok(())
    }

    /// Marks columns beyond `P` as dropped rather than zero.
    pub fn truncated(mut self) -> Self {
        self.truncated = true;
        self
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn p_max(&self) -> usize {
        self.groups.len() - 1
    }

    pub fn q_max(&self) -> usize {
        self.groups[0].len() - 1
    }

    pub fn group(&self, p: usize, q: usize) -> &AbGroup {
        &self.groups[p][q]
    }

    /// `B_{p,q}`, or the trivial group outside the grid.
    pub fn entry(&self, p: isize, q: isize) -> AbGroup {
        if p < 0 || q < 0 || p as usize > self.p_max() || q as usize > self.q_max() {
            AbGroup::trivial()
        } else {
            self.groups[p as usize][q as usize].clone()
        }
    }

    pub fn dh(&self, p: usize, q: usize) -> &AbHom {
        &self.horizontal[p - 1][q]
    }

    pub fn dv(&self, p: usize, q: usize) -> &AbHom {
        &self.vertical[p][q - 1]
    }

    /// Highest total degree whose homology the truncation does not affect; `None`
    /// when no degree is reliable.
    pub fn reliable_degree(&self) -> Option<usize> {
        if self.truncated {
            self.p_max().checked_sub(1)
        } else {
            Some(self.p_max() + self.q_max())
        }
    }

    pub fn max_degree(&self) -> usize {
        self.p_max() + self.q_max()
    }

    pub(crate) fn tot_layout(&self, n: usize) -> TotLayout {
        let mut blocks = Vec::new();
        let mut offset = 0;
        for p in 0..=n.min(self.p_max()) {
            let q = n - p;
            if q > self.q_max() {
                continue;
            }
            blocks.push((p, offset));
            offset += self.groups[p][q].rank();
        }
        TotLayout { n, blocks, rank: offset }
    }

    /// `Tot_n = ⊕_{p+q=n} B_{p,q}`, summands in increasing `p`.
    pub fn tot_group(&self, n: usize) -> AbGroup {
        let layout = self.tot_layout(n);
        let mut orders = Vec::with_capacity(layout.rank);
        for &(p, _) in &layout.blocks {
            orders.extend_from_slice(self.groups[p][n - p].orders());
        }
        AbGroup::new(orders)
    }

    /// `Tot_n -> Tot_{n-1}`; zero to the trivial group for `n = 0`.
    pub fn tot_differential(&self, n: usize) -> AbHom {
        let source = self.tot_group(n);
        if n == 0 || n > self.max_degree() + 1 {
            let target = if n == 0 { AbGroup::trivial() } else { self.tot_group(n - 1) };
            return AbHom::zero(source, target);
        }
        let src = self.tot_layout(n);
        let tgt = self.tot_layout(n - 1);
        let offset_of = |p: usize| tgt.blocks.iter().find(|&&(b, _)| b == p).map(|&(_, o)| o);
        let mut columns = Vec::with_capacity(src.rank);
        for &(p, _) in &src.blocks {
            let q = n - p;
            for j in 0..self.groups[p][q].rank() {
                let mut col: SparseVec = Vec::new();
                if p > 0 {
                    let o = offset_of(p - 1).expect("horizontal target in range");
                    col.extend(self.dh(p, q).column(j).iter().map(|&(i, c)| (o + i, c)));
                }
                if q > 0 {
                    let o = offset_of(p).expect("vertical target in range");
                    col.extend(self.dv(p, q).column(j).iter().map(|&(i, c)| (o + i, c)));
                }
                col.sort_unstable_by_key(|&(i, _)| i);
                columns.push(col);
            }
        }
        AbHom::new(source, self.tot_group(n - 1), columns).expect("total differential is well defined")
    }
}

#[derive(Clone, Debug)]
pub(crate) struct TotLayout {
    #[allow(dead_code)]
    pub n: usize,
    /// `(p, offset)` for each summand present.
    pub blocks: Vec<(usize, usize)>,
    pub rank: usize,
}

impl TotLayout {
    pub fn offset(&self, p: usize) -> Option<usize> {
        self.blocks.iter().find(|&&(b, _)| b == p).map(|&(_, o)| o)
    }
}

/// Homology of the total complex, with classes kept for induced maps.
#[derive(Debug)]
pub struct TotalHomology {
    pub groups: Vec<FinAb>,
    pub reliable: Option<usize>,
    pub(crate) homology: Vec<Homology>,
}

impl TotalHomology {
    pub fn group(&self, n: usize) -> &FinAb {
        &self.groups[n]
    }

    pub fn homology(&self, n: usize) -> &Homology {
        &self.homology[n]
    }
}

/// All degrees `0..=P+Q`.
pub fn total_homology(b: &Bicomplex) -> Result<TotalHomology> {
    total_homology_through(b, b.max_degree())
}

/// Degrees `0..=n_max`.
pub fn total_homology_through(b: &Bicomplex, n_max: usize) -> Result<TotalHomology> {
    let mut homology = Vec::with_capacity(n_max + 1);
    let mut d_out = b.tot_differential(0);
    for n in 0..=n_max {
        let d_in = b.tot_differential(n + 1);
        homology.push(complex_homology(&d_in, &d_out)?);
        d_out = d_in;
    }
    Ok(TotalHomology { groups: homology.iter().map(|h| h.group().clone()).collect(), reliable: b.reliable_degree(), homology })
}

/// Componentwise maps `B'_{p,q} -> B_{p,q}` commuting with both differentials.
#[derive(Clone, Debug)]
pub struct BicomplexMap {
    blocks: Vec<Vec<AbHom>>,
}

impl BicomplexMap {
    pub fn new(source: &Bicomplex, target: &Bicomplex, blocks: Vec<Vec<AbHom>>) -> Result<Self> {
        let f = Self::new_unverified(source, target, blocks)?;
        for p in 0..=source.p_max() {
            for q in 0..=source.q_max() {
                if p > 0 && target.dh(p, q).compose(f.block(p, q))? != f.block(p - 1, q).compose(source.dh(p, q))? {
                    return Err(Error::BicomplexAxiom { p, q, what: "map does not commute with d^h" });
                }
                if q > 0 && target.dv(p, q).compose(f.block(p, q))? != f.block(p, q - 1).compose(source.dv(p, q))? {
                    return Err(Error::BicomplexAxiom { p, q, what: "map does not commute with d^v" });
                }
            }
        }
        Ok(f)
    }

    pub fn new_unverified(source: &Bicomplex, target: &Bicomplex, blocks: Vec<Vec<AbHom>>) -> Result<Self> {
        if source.p_max() != target.p_max() || source.q_max() != target.q_max() || blocks.len() != source.p_max() + 1 {
            return Err(Error::BicomplexAxiom { p: 0, q: 0, what: "map between grids of different shape" });
        }
        for (p, col) in blocks.iter().enumerate() {
            if col.len() != source.q_max() + 1 {
                return Err(Error::BicomplexAxiom { p, q: 0, what: "map between grids of different shape" });
            }
            for (q, f) in col.iter().enumerate() {
                if f.source() != source.group(p, q) || f.target() != target.group(p, q) {
                    return Err(Error::BicomplexAxiom { p, q, what: "map block shape" });
                }
            }
        }
        Ok(BicomplexMap { blocks })
    }

    pub fn block(&self, p: usize, q: usize) -> &AbHom {
        &self.blocks[p][q]
    }

    /// `Tot_n(B') -> Tot_n(B)`.
    pub fn tot(&self, source: &Bicomplex, target: &Bicomplex, n: usize) -> AbHom {
        let src = source.tot_layout(n);
        let tgt = target.tot_layout(n);
        let mut columns = Vec::with_capacity(src.rank);
        for &(p, _) in &src.blocks {
            let o = tgt.offset(p).expect("same shape");
            let f = self.block(p, n - p);
            columns.extend(f.columns().iter().map(|c| c.iter().map(|&(i, x)| (o + i, x)).collect::<SparseVec>()));
        }
        AbHom::new(source.tot_group(n), target.tot_group(n), columns).expect("blockwise map is well defined")
    }
}
