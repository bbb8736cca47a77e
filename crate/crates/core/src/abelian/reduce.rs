//! Homology of `C_{n+1} -> C_n -> C_{n-1}` by sparse elimination, one prime at a time.
//!
//! For a prime `p`, every generator of order `d` contributes its `p`-primary part, a
//! cyclic group of order `p^v`. Unit entries joining two generators of the same order
//! split off contractible pieces `Z/p^v -> Z/p^v`; what is left is handed to the lattice
//! code. The elimination log is kept so that cycles of the original complex can be
//! classified and generators lifted back.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::group::{AbGroup, FinAb};
use super::lattice::{preimage_of_relations, relation_columns, Subquotient};
use super::matrix::IntMatrix;
use super::numtheory::{crt, mod_inverse, mul_mod, valuation};
use super::sparse::SparseVec;
use super::hom::AbHom;
use crate::error::Result;

type Col = Vec<(usize, u64)>;

struct Pivot {
    x: usize,
    y: usize,
    phi: u64,
    row: Vec<(usize, u64)>,
    col: Col,
}

struct Elimination {
    cols: Vec<Option<Col>>,
    row_alive: Vec<bool>,
    pivots: Vec<Pivot>,
}

/// Exponent-indexed moduli `p^e`.
struct Moduli {
    p: u64,
    pow: Vec<u64>,
}

impl Moduli {
    fn new(p: u64, max_exp: u32) -> Self {
        let mut pow = vec![1u64];
        for _ in 0..max_exp {
            pow.push(pow.last().unwrap() * p);
        }
        Moduli { p, pow }
    }

    fn m(&self, e: u32) -> u64 {
        self.pow[e as usize]
    }
}

/// Sparse Gaussian elimination on unit pivots between generators of equal order.
/// The Schur complement stays inside this matrix; callers drop the matching rows and
/// columns of the neighbouring differentials.
///
/// Columns are visited shortest first, by current length, and the pivot row is the
/// candidate with the fewest entries. Columns touched by an update are queued again.
fn eliminate(
    mut cols: Vec<Option<Col>>,
    row_exp: &[u32],
    col_exp: &[u32],
    md: &Moduli,
    keep_rows: bool,
    keep_cols: bool,
) -> Elimination {
    let nrows = row_exp.len();
    let mut occ: Vec<Vec<usize>> = vec![Vec::new(); nrows];
    let mut queue = BinaryHeap::new();
    let mut queued = vec![usize::MAX; cols.len()];
    let mut scratch = Col::new();
    for (j, c) in cols.iter().enumerate() {
        if let Some(c) = c {
            for &(i, _) in c {
                occ[i].push(j);
            }
            if !c.is_empty() && col_exp[j] > 0 {
                queued[j] = c.len();
                queue.push(Reverse((c.len(), j)));
            }
        }
    }
    let mut row_alive = vec![true; nrows];
    let mut pivots = Vec::new();
    while let Some(Reverse((len, x))) = queue.pop() {
        let Some(cx) = cols[x].as_ref() else { continue };
        if queued[x] != len {
            continue;
        }
        if cx.len() > len {
            queued[x] = cx.len();
            queue.push(Reverse((cx.len(), x)));
            continue;
        }
        queued[x] = usize::MAX;
        let ex = col_exp[x];
        let mut best: Option<(usize, usize, u64)> = None;
        for &(r, v) in cx {
            if row_exp[r] != ex || v % md.p == 0 {
                continue;
            }
            let load = occ[r].len();
            if best.map_or(true, |(l, br, _)| (load, r) < (l, br)) {
                best = Some((load, r, v));
            }
        }
        let Some((_, y, phi)) = best else { continue };
        let col_x = cols[x].take().unwrap();
        let my = md.m(ex);
        let phi_inv = mod_inverse(phi, my).expect("unit pivot");
        let mut members = std::mem::take(&mut occ[y]);
        members.sort_unstable();
        members.dedup();
        let mut row = Vec::new();
        for b in members {
            if b == x {
                continue;
            }
            let Some(cb) = cols[b].as_mut() else { continue };
            let Ok(pos) = cb.binary_search_by_key(&y, |&(i, _)| i) else { continue };
            let vb = cb[pos].1;
            row.push((b, vb));
            let k = mul_mod(vb, phi_inv, my);
            sub_scaled(cb, &col_x, k, row_exp, md, |r| occ[r].push(b), &mut scratch);
            std::mem::swap(cb, &mut scratch);
            if !cb.is_empty() && col_exp[b] > 0 && cb.len() < queued[b] {
                queued[b] = cb.len();
                queue.push(Reverse((cb.len(), b)));
            }
        }
        row_alive[y] = false;
        pivots.push(Pivot {
            x,
            y,
            phi,
            row: if keep_rows { row } else { Vec::new() },
            col: if keep_cols { col_x } else { Vec::new() },
        });
    }
    Elimination { cols, row_alive, pivots }
}

/// `a - k * b` with entries reduced modulo their row order; `fresh` is told about rows
/// that become nonzero.
fn sub_scaled(
    a: &Col,
    b: &Col,
    k: u64,
    row_exp: &[u32],
    md: &Moduli,
    mut fresh: impl FnMut(usize),
    out: &mut Col,
) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
            continue;
        }
        let r = b[j].0;
        let m = md.m(row_exp[r]);
        let kb = mul_mod(k % m, b[j].1, m);
        if i < a.len() && a[i].0 == r {
            let v = (a[i].1 + m - kb) % m;
            if v != 0 {
                out.push((r, v));
            }
            i += 1;
        } else {
            let v = (m - kb) % m;
            if v != 0 {
                out.push((r, v));
                fresh(r);
            }
        }
        j += 1;
    }
}

/// Orders of the `p`-parts and the unit `m_j^{-1} mod p^{v_j}` converting global
/// coefficients to local ones (`m_j = d_j / p^{v_j}`).
struct LocalLayout {
    exp: Vec<u32>,
    cofactor: Vec<u64>,
    to_local: Vec<u64>,
}

impl LocalLayout {
    fn new(group: &AbGroup, md: &Moduli) -> Self {
        let mut exp = Vec::with_capacity(group.rank());
        let mut cofactor = Vec::with_capacity(group.rank());
        let mut to_local = Vec::with_capacity(group.rank());
        for &d in group.orders() {
            let v = valuation(d, md.p);
            let pe = md.m(v);
            let m = d / pe;
            exp.push(v);
            cofactor.push(m);
            to_local.push(if v == 0 { 0 } else { mod_inverse(m % pe, pe).unwrap() });
        }
        LocalLayout { exp, cofactor, to_local }
    }

    fn local_coeff(&self, j: usize, c: i64, md: &Moduli) -> u64 {
        let m = md.m(self.exp[j]);
        mul_mod(c.rem_euclid(m as i64) as u64, self.to_local[j], m)
    }
}

fn local_columns(f: &AbHom, src: &LocalLayout, tgt: &LocalLayout, md: &Moduli) -> Vec<Option<Col>> {
    f.columns()
        .iter()
        .enumerate()
        .map(|(j, col)| {
            if src.exp[j] == 0 {
                return Some(Vec::new());
            }
            let mut out = Vec::new();
            for &(i, c) in col {
                if tgt.exp[i] == 0 {
                    continue;
                }
                let m = md.m(tgt.exp[i]);
                let v = mul_mod(tgt.local_coeff(i, c, md), src.cofactor[j] % m, m);
                if v != 0 {
                    out.push((i, v));
                }
            }
            Some(out)
        })
        .collect()
}

struct PrimePart {
    md: Moduli,
    mid: LocalLayout,
    out_x: Vec<usize>,
    lift_log: Vec<(usize, u64, u32, Vec<(usize, u64)>)>,
    class_log: Vec<(usize, u64, u32, Col)>,
    residual_mid: Vec<usize>,
    residual: Subquotient,
}

impl PrimePart {
    fn build(d_in: &AbHom, d_out: &AbHom, p: u64, max_exp: u32) -> Result<Self> {
        let md = Moduli::new(p, max_exp);
        let top = LocalLayout::new(d_in.source(), &md);
        let mid = LocalLayout::new(d_out.source(), &md);
        let bot = LocalLayout::new(d_out.target(), &md);

        let out = eliminate(local_columns(d_out, &mid, &bot, &md), &bot.exp, &mid.exp, &md, true, false);
        let mut mid_alive = vec![true; mid.exp.len()];
        let mut lift_log = Vec::with_capacity(out.pivots.len());
        let mut out_x = Vec::with_capacity(out.pivots.len());
        for pv in out.pivots {
            mid_alive[pv.x] = false;
            out_x.push(pv.x);
            lift_log.push((pv.x, pv.phi, bot.exp[pv.y], pv.row));
        }

        let mut in_cols = local_columns(d_in, &top, &mid, &md);
        for c in in_cols.iter_mut().flatten() {
            c.retain(|&(i, _)| mid_alive[i]);
        }
        let inn = eliminate(in_cols, &mid.exp, &top.exp, &md, false, true);
        let mut class_log = Vec::with_capacity(inn.pivots.len());
        for pv in inn.pivots {
            class_log.push((pv.y, pv.phi, mid.exp[pv.y], pv.col));
        }
        for (i, alive) in inn.row_alive.iter().enumerate() {
            if !alive {
                mid_alive[i] = false;
            }
        }

        let residual_mid: Vec<usize> = (0..mid.exp.len()).filter(|&i| mid_alive[i] && mid.exp[i] > 0).collect();
        let residual_bot: Vec<usize> =
            (0..bot.exp.len()).filter(|&i| out.row_alive[i] && bot.exp[i] > 0).collect();
        let residual_top: Vec<usize> =
            (0..top.exp.len()).filter(|&j| inn.cols[j].is_some() && top.exp[j] > 0).collect();
        let mid_pos = position_map(&residual_mid, mid.exp.len());
        let bot_pos = position_map(&residual_bot, bot.exp.len());

        let mid_group = AbGroup::new(residual_mid.iter().map(|&i| md.m(mid.exp[i])).collect());
        let bot_group = AbGroup::new(residual_bot.iter().map(|&i| md.m(bot.exp[i])).collect());
        let mut dout = IntMatrix::<BigInt>::zeros(residual_bot.len(), residual_mid.len());
        for (k, &j) in residual_mid.iter().enumerate() {
            for &(i, v) in out.cols[j].as_ref().unwrap() {
                if let Some(r) = bot_pos[i] {
                    dout[(r, k)] = BigInt::from(v);
                }
            }
        }
        let mut num = preimage_of_relations(&dout, &bot_group);
        let rel = relation_columns(&mid_group);
        num.extend(rel.iter().cloned());
        let mut den: Vec<Vec<BigInt>> = residual_top
            .iter()
            .map(|&j| {
                let mut v = vec![BigInt::zero(); residual_mid.len()];
                for &(i, c) in inn.cols[j].as_ref().unwrap() {
                    if let Some(r) = mid_pos[i] {
                        v[r] = BigInt::from(c);
                    }
                }
                v
            })
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .collect();
        den.extend(rel);
        let residual = Subquotient::new(residual_mid.len(), &num, &den)?;
        Ok(PrimePart { md, mid, out_x, lift_log, class_log, residual_mid, residual })
    }

    fn factors(&self) -> &[u64] {
        self.residual.group().invariant_factors()
    }

    /// Local coordinates of the `p`-component of `v`.
    fn localize(&self, v: &SparseVec) -> Vec<u64> {
        let mut w = vec![0u64; self.mid.exp.len()];
        for &(j, c) in v {
            if self.mid.exp[j] > 0 {
                w[j] = self.mid.local_coeff(j, c, &self.md);
            }
        }
        w
    }

    fn classify(&self, v: &SparseVec) -> Option<Vec<BigInt>> {
        let mut w = self.localize(v);
        for &x in &self.out_x {
            w[x] = 0;
        }
        for (y, phi, e, col) in &self.class_log {
            if w[*y] == 0 {
                continue;
            }
            let m = self.md.m(*e);
            let k = mul_mod(w[*y], mod_inverse(*phi, m).unwrap(), m);
            for &(r, c) in col {
                let mr = self.md.m(self.mid.exp[r]);
                w[r] = (w[r] + mr - mul_mod(k % mr, c, mr)) % mr;
            }
            debug_assert_eq!(w[*y], 0);
        }
        let res: Vec<BigInt> = self.residual_mid.iter().map(|&i| BigInt::from(w[i])).collect();
        self.residual.classify(&res)
    }

    /// Generator `k` as a global cycle.
    fn lift(&self, k: usize) -> SparseVec {
        let mut w = vec![0u64; self.mid.exp.len()];
        for (pos, &i) in self.residual_mid.iter().enumerate() {
            let m = self.md.m(self.mid.exp[i]);
            let x = self.residual.lift(k)[pos].clone();
            let r = ((x % BigInt::from(m)) + BigInt::from(m)) % BigInt::from(m);
            w[i] = r.to_u64().unwrap();
        }
        for (x, phi, e, row) in self.lift_log.iter().rev() {
            let m = self.md.m(*e);
            let mut dot = 0u64;
            for &(b, c) in row {
                if w[b] != 0 {
                    dot = (dot + mul_mod(c, w[b] % m, m)) % m;
                }
            }
            if dot == 0 {
                continue;
            }
            let mx = self.md.m(self.mid.exp[*x]);
            let t = mul_mod(dot, mod_inverse(*phi, m).unwrap(), m);
            w[*x] = (mx - t % mx) % mx;
        }
        w.iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| {
                let d = self.md.m(self.mid.exp[j]) * self.mid.cofactor[j];
                (j, ((c as u128 * self.mid.cofactor[j] as u128) % d as u128) as i64)
            })
            .collect()
    }
}

fn position_map(keep: &[usize], len: usize) -> Vec<Option<usize>> {
    let mut pos = vec![None; len];
    for (k, &i) in keep.iter().enumerate() {
        pos[i] = Some(k);
    }
    pos
}

/// Primary pieces and how their generators line up with the canonical factors.
pub(crate) struct Primary {
    parts: Vec<(u64, PrimePart, usize)>,
    group: FinAb,
}

impl Primary {
    /// `None` when the complex has infinite generators or orders too large for
    /// word-sized modular arithmetic.
    pub(crate) fn build(d_in: &AbHom, d_out: &AbHom) -> Result<Option<Self>> {
        let groups = [d_in.source(), d_out.source(), d_out.target()];
        if groups.iter().any(|g| !g.is_finite()) {
            return Ok(None);
        }
        let mut primes = std::collections::BTreeMap::<u64, u32>::new();
        for g in groups {
            for &d in g.orders() {
                for (p, e) in super::numtheory::factorize(d) {
                    let slot = primes.entry(p).or_insert(0);
                    *slot = (*slot).max(e);
                }
            }
        }
        if primes.iter().any(|(&p, &e)| (p as u128).pow(e) >= 1 << 32) {
            return Ok(None);
        }
        let mut parts = Vec::new();
        for (&p, &e) in &primes {
            if !d_out.source().orders().iter().any(|&d| d % p == 0) {
                continue;
            }
            parts.push((p, PrimePart::build(d_in, d_out, p, e)?));
        }
        let k = parts.iter().map(|(_, pp)| pp.factors().len()).max().unwrap_or(0);
        let mut factors = vec![1u64; k];
        let parts: Vec<(u64, PrimePart, usize)> = parts
            .into_iter()
            .map(|(p, pp)| {
                let offset = k - pp.factors().len();
                for (i, &f) in pp.factors().iter().enumerate() {
                    factors[offset + i] *= f;
                }
                (p, pp, offset)
            })
            .collect();
        Ok(Some(Primary { parts, group: FinAb::from_invariant_factors(factors) }))
    }

    pub(crate) fn group(&self) -> &FinAb {
        &self.group
    }

    pub(crate) fn lifts(&self, ambient: &AbGroup) -> Vec<SparseVec> {
        let k = self.group.invariant_factors().len();
        (0..k)
            .map(|g| {
                let mut v = Vec::new();
                for (_, pp, offset) in &self.parts {
                    if g >= *offset {
                        v = super::sparse::add_scaled(&v, &pp.lift(g - offset), 1, ambient);
                    }
                }
                v
            })
            .collect()
    }

    pub(crate) fn classify(&self, v: &SparseVec) -> Option<Vec<i64>> {
        let k = self.group.invariant_factors().len();
        let mut residues: Vec<Vec<(u64, u64)>> = vec![Vec::new(); k];
        for (_, pp, offset) in &self.parts {
            let c = pp.classify(v)?;
            for (i, x) in c.into_iter().enumerate() {
                residues[offset + i].push((x.to_u64().unwrap(), pp.factors()[i]));
            }
        }
        Some(residues.iter().map(|r| crt(r) as i64).collect())
    }
}
