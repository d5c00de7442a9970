//! Sparse integer columns and incremental column-echelon reduction.
//!
//! This is the scalable path for the boundary matrices of bar and tuple
//! complexes, whose column counts dwarf their row counts. Columns are kept
//! sorted by row; the echelon keeps one column per pivot row, each column's
//! topmost nonzero being its pivot. Reduction uses only unimodular column
//! operations, so companions of columns that reduce to zero form a genuine
//! basis of the kernel lattice.
//!
//! All arithmetic is checked: the `i64` instantiation reports overflow through
//! `Outcome::Overflow`, and callers re-run over `BigInt`.

use super::scalar::ExactInt;
use super::Int;
use std::collections::BTreeMap;

/// Sorted (row, value) pairs, values nonzero.
pub type SparseVec<Z> = Vec<(u32, Z)>;

#[derive(Debug)]
pub enum Outcome {
    Overflow,
}

pub type SResult<T> = std::result::Result<T, Outcome>;

/// c += q * p, merging sorted columns.
pub fn axpy<Z: ExactInt>(c: &SparseVec<Z>, q: &Z, p: &SparseVec<Z>) -> SResult<SparseVec<Z>> {
    if q.is_zero() {
        return Ok(c.clone());
    }
    let mut out = Vec::with_capacity(c.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < c.len() || j < p.len() {
        let take_c = j >= p.len() || (i < c.len() && c[i].0 < p[j].0);
        let take_p = i >= c.len() || (j < p.len() && p[j].0 < c[i].0);
        if take_c {
            out.push(c[i].clone());
            i += 1;
        } else if take_p {
            let v = q.checked_mul(&p[j].1).ok_or(Outcome::Overflow)?;
            if !v.is_zero() {
                out.push((p[j].0, v));
            }
            j += 1;
        } else {
            let v = q.checked_mul(&p[j].1).ok_or(Outcome::Overflow)?;
            let s = c[i].1.checked_add(&v).ok_or(Outcome::Overflow)?;
            if !s.is_zero() {
                out.push((c[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    Ok(out)
}

/// a*x + b*y for sparse columns.
pub fn combine<Z: ExactInt>(
    a: &Z,
    x: &SparseVec<Z>,
    b: &Z,
    y: &SparseVec<Z>,
) -> SResult<SparseVec<Z>> {
    let ax = scale(a, x)?;
    axpy(&ax, b, y)
}

pub fn scale<Z: ExactInt>(a: &Z, x: &SparseVec<Z>) -> SResult<SparseVec<Z>> {
    if a.is_zero() {
        return Ok(Vec::new());
    }
    x.iter()
        .map(|(r, v)| Ok((*r, a.checked_mul(v).ok_or(Outcome::Overflow)?)))
        .collect()
}

pub fn negate<Z: ExactInt>(x: &SparseVec<Z>) -> SparseVec<Z> {
    x.iter().map(|(r, v)| (*r, v.neg())).collect()
}

pub fn to_bigint_vec<Z: ExactInt>(v: &SparseVec<Z>) -> SparseVec<Int> {
    v.iter().map(|(r, x)| (*r, x.to_bigint())).collect()
}

pub fn dense_to_sparse(v: &[Int]) -> SparseVec<Int> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !num_traits::Zero::is_zero(*x))
        .map(|(i, x)| (i as u32, x.clone()))
        .collect()
}

pub fn sparse_to_dense(v: &SparseVec<Int>, len: usize) -> Vec<Int> {
    let mut out = vec![num_traits::Zero::zero(); len];
    for (r, x) in v {
        out[*r as usize] = x.clone();
    }
    out
}

/// Column-major sparse matrix.
#[derive(Clone, Debug)]
pub struct SparseMat<Z> {
    pub rows: usize,
    pub cols: Vec<SparseVec<Z>>,
}

impl<Z: ExactInt> SparseMat<Z> {
    pub fn zero(rows: usize, ncols: usize) -> Self {
        SparseMat {
            rows,
            cols: vec![Vec::new(); ncols],
        }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn mul_col(&self, x: &SparseVec<Z>) -> SResult<SparseVec<Z>> {
        let mut acc: SparseVec<Z> = Vec::new();
        for (j, c) in x {
            acc = axpy(&acc, c, &self.cols[*j as usize])?;
        }
        Ok(acc)
    }

    pub fn to_bigint(&self) -> SparseMat<Int> {
        SparseMat {
            rows: self.rows,
            cols: self.cols.iter().map(|c| to_bigint_vec(c)).collect(),
        }
    }

    /// Deterministic byte serialization, usable as a cache key preimage.
    pub fn content_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&(self.rows as u64).to_le_bytes());
        out.extend_from_slice(&(self.cols.len() as u64).to_le_bytes());
        for c in &self.cols {
            out.extend_from_slice(&(c.len() as u64).to_le_bytes());
            for (r, v) in c {
                out.extend_from_slice(&r.to_le_bytes());
                let b = v.to_bigint().to_signed_bytes_le();
                out.extend_from_slice(&(b.len() as u32).to_le_bytes());
                out.extend_from_slice(&b);
            }
        }
        out
    }
}

/// What happened to an inserted column.
pub enum Inserted<Z> {
    /// Column was independent; stored under its pivot row.
    Placed,
    /// Column reduced to zero; the companion (combination certificate) is returned.
    Reduced(Option<SparseVec<Z>>),
}

/// Incremental integer column echelon with optional companion tracking.
pub struct Echelon<Z> {
    pub rows: usize,
    cols: BTreeMap<u32, SparseVec<Z>>,
    comps: Option<BTreeMap<u32, SparseVec<Z>>>,
}

impl<Z: ExactInt> Echelon<Z> {
    pub fn new(rows: usize, with_companions: bool) -> Self {
        Echelon {
            rows,
            cols: BTreeMap::new(),
            comps: with_companions.then(BTreeMap::new),
        }
    }

    pub fn npivots(&self) -> usize {
        self.cols.len()
    }

    pub fn pivot_rows(&self) -> impl Iterator<Item = u32> + '_ {
        self.cols.keys().copied()
    }

    pub fn pivot_col(&self, row: u32) -> Option<&SparseVec<Z>> {
        self.cols.get(&row)
    }

    pub fn companion(&self, row: u32) -> Option<&SparseVec<Z>> {
        self.comps.as_ref().and_then(|m| m.get(&row))
    }

    /// Reduce `col` against the echelon and either place it or return its
    /// (zero-combination) companion.
    ///
    /// The echelon is kept size-reduced: every stored entry sitting in a pivot
    /// row is a symmetric remainder mod that pivot, and pivots are positive.
    /// Without this, chained gcd rotations grow entries multiplicatively and
    /// bar-complex boundary matrices become intractable.
    pub fn insert(&mut self, mut col: SparseVec<Z>, comp: SparseVec<Z>) -> SResult<Inserted<Z>> {
        let mut comp = self.comps.is_some().then_some(comp);
        loop {
            let Some(&(r, ref b0)) = col.first() else {
                return Ok(Inserted::Reduced(comp));
            };
            let b = b0.clone();
            let Some(p) = self.cols.get(&r) else {
                if col[0].1 < Z::zero() {
                    col = negate(&col);
                    comp = comp.as_ref().map(|c| negate(c));
                }
                let (col, comp) = self.normalize_tail(col, comp, r)?;
                self.cols.insert(r, col);
                if let (Some(m), Some(c)) = (&mut self.comps, comp) {
                    m.insert(r, c);
                }
                self.back_reduce(r)?;
                return Ok(Inserted::Placed);
            };
            let a = p[0].1.clone();
            debug_assert_eq!(p[0].0, r);
            // Symmetric reduction mod the pivot; cancels the row entirely
            // when the pivot divides the entry.
            let q = if a.divides(&b) {
                a.exact_div_into(&b)
            } else {
                a.div_round(&b).ok_or(Outcome::Overflow)?
            };
            if !q.is_zero() {
                col = axpy(&col, &q.neg(), p)?;
                if let Some(c) = &comp {
                    let pc = &self.comps.as_ref().unwrap()[&r];
                    comp = Some(axpy(c, &q.neg(), pc)?);
                }
            }
            match col.first() {
                None => return Ok(Inserted::Reduced(comp)),
                Some(&(r2, _)) if r2 != r => continue,
                _ => {}
            }
            let b = col[0].1.clone();
            // Unimodular rotation of (pivot, col):
            //   new pivot = s*p + t*col   (entry g at row r)
            //   new col   = -(b/g)*p + (a/g)*col  (zero at row r)
            // g properly divides a, so dependents of row r need re-reduction.
            let p = self.cols.get(&r).unwrap();
            let (g, s, t) = Z::gcd_ext(&a, &b).ok_or(Outcome::Overflow)?;
            let (ag, bg) = (g.exact_div_into(&a), g.exact_div_into(&b));
            let newp = combine(&s, p, &t, &col)?;
            let newc = combine(&bg.neg(), p, &ag, &col)?;
            debug_assert_eq!(newp.first().map(|x| x.0), Some(r));
            debug_assert!(newc.first().map(|x| x.0 > r).unwrap_or(true));
            let mut newpc = None;
            if let Some(c) = &comp {
                let pc = self.comps.as_ref().unwrap()[&r].clone();
                newpc = Some(combine(&s, &pc, &t, c)?);
                comp = Some(combine(&bg.neg(), &pc, &ag, c)?);
            }
            let (newp, newpc) = self.normalize_tail(newp, newpc, r)?;
            self.cols.insert(r, newp);
            if let Some(c) = newpc {
                self.comps.as_mut().unwrap().insert(r, c);
            }
            self.back_reduce(r)?;
            col = newc;
        }
    }

    /// Symmetric-reduce the entries of `col` below its pivot row against the
    /// stored pivots, mirroring every operation on the companion.
    fn normalize_tail(
        &self,
        mut col: SparseVec<Z>,
        mut comp: Option<SparseVec<Z>>,
        own_row: u32,
    ) -> SResult<(SparseVec<Z>, Option<SparseVec<Z>>)> {
        let mut i = 1;
        while i < col.len() {
            let (rr, ref v) = col[i];
            debug_assert!(rr > own_row);
            let Some(p) = self.cols.get(&rr) else {
                i += 1;
                continue;
            };
            let q = p[0].1.div_round(v).ok_or(Outcome::Overflow)?;
            if q.is_zero() {
                i += 1;
                continue;
            }
            col = axpy(&col, &q.neg(), p)?;
            if let Some(c) = &comp {
                comp = Some(axpy(c, &q.neg(), &self.comps.as_ref().unwrap()[&rr])?);
            }
        }
        Ok((col, comp))
    }

    /// After the pivot at `r` appears or shrinks, re-reduce the row-`r` entry
    /// of every earlier pivot column (only those can reach row `r`).
    fn back_reduce(&mut self, r: u32) -> SResult<()> {
        let pr = self.cols[&r].clone();
        let a = pr[0].1.clone();
        let prc = self.comps.as_ref().map(|m| m[&r].clone());
        let keys: Vec<u32> = self.cols.range(..r).map(|(k, _)| *k).collect();
        for k in keys {
            let ck = &self.cols[&k];
            let Ok(idx) = ck.binary_search_by_key(&r, |e| e.0) else {
                continue;
            };
            let q = a.div_round(&ck[idx].1).ok_or(Outcome::Overflow)?;
            if q.is_zero() {
                continue;
            }
            let ck = self.cols.remove(&k).unwrap();
            let compk = self.comps.as_mut().and_then(|m| m.remove(&k));
            let newck = axpy(&ck, &q.neg(), &pr)?;
            let newcompk = match (&prc, compk) {
                (Some(prc), Some(c)) => Some(axpy(&c, &q.neg(), prc)?),
                (_, c) => c,
            };
            let (newck, newcompk) = self.normalize_tail(newck, newcompk, k)?;
            self.cols.insert(k, newck);
            if let (Some(m), Some(c)) = (&mut self.comps, newcompk) {
                m.insert(k, c);
            }
        }
        Ok(())
    }

    /// Express `v` over the echelon columns: returns per-pivot-row quotients,
    /// or None when `v` is not in the column lattice. Non-destructive.
    pub fn solve(&self, v: &SparseVec<Z>) -> SResult<Option<Vec<(u32, Z)>>> {
        let mut v = v.clone();
        let mut coeffs = Vec::new();
        while let Some(&(r, ref b0)) = v.first() {
            let b = b0.clone();
            let Some(p) = self.cols.get(&r) else {
                return Ok(None);
            };
            let a = &p[0].1;
            if !a.divides(&b) {
                return Ok(None);
            }
            let q = a.exact_div_into(&b);
            v = axpy(&v, &q.neg(), p)?;
            coeffs.push((r, q));
        }
        Ok(Some(coeffs))
    }

    /// Combine per-pivot-row quotients with the stored companions.
    pub fn expand_companion(&self, coeffs: &[(u32, Z)]) -> SResult<SparseVec<Z>> {
        let comps = self.comps.as_ref().expect("companions not tracked");
        let mut acc: SparseVec<Z> = Vec::new();
        for (r, q) in coeffs {
            acc = axpy(&acc, q, &comps[r])?;
        }
        Ok(acc)
    }

    /// The pivot columns, in pivot-row order.
    pub fn basis(&self) -> Vec<SparseVec<Z>> {
        self.cols.values().cloned().collect()
    }
}

/// Reduce the columns of `m` to an independent basis of the image lattice.
/// The span is order-independent, so columns go in sparsest first, deduped
/// up to sign; both cut the reduction work substantially.
pub fn image_basis<Z: ExactInt>(m: &SparseMat<Z>) -> SResult<Vec<SparseVec<Z>>> {
    let mut cols: Vec<SparseVec<Z>> = m
        .cols
        .iter()
        .map(|c| {
            if c.first().map(|e| e.1 < Z::zero()).unwrap_or(false) {
                negate(c)
            } else {
                c.clone()
            }
        })
        .collect();
    cols.sort_unstable_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    cols.dedup();
    let mut ech = Echelon::new(m.rows, false);
    for c in cols {
        ech.insert(c, Vec::new())?;
    }
    Ok(ech.basis())
}

/// Image basis and kernel basis of `m`, via companion tracking.
pub fn image_and_kernel<Z: ExactInt>(
    m: &SparseMat<Z>,
) -> SResult<(Vec<SparseVec<Z>>, Vec<SparseVec<Z>>)> {
    let mut ech = Echelon::new(m.rows, true);
    let mut kernel = Vec::new();
    for (j, c) in m.cols.iter().enumerate() {
        let e = vec![(j as u32, Z::one())];
        if let Inserted::Reduced(comp) = ech.insert(c.clone(), e)? {
            kernel.push(comp.unwrap());
        }
    }
    Ok((ech.basis(), kernel))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(pairs: &[(u32, i64)]) -> SparseVec<i64> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn axpy_merges_and_cancels() {
        let c = sv(&[(0, 1), (2, 3)]);
        let p = sv(&[(0, 1), (1, 2)]);
        assert_eq!(axpy(&c, &-1, &p).unwrap(), sv(&[(1, -2), (2, 3)]));
    }

    #[test]
    fn kernel_certificates_multiply_to_zero() {
        // columns: (2,0), (3,0), (0,5), (6,5) over 2 rows
        let m = SparseMat {
            rows: 2,
            cols: vec![
                sv(&[(0, 2)]),
                sv(&[(0, 3)]),
                sv(&[(1, 5)]),
                sv(&[(0, 6), (1, 5)]),
            ],
        };
        let (im, ker) = image_and_kernel(&m).unwrap();
        assert_eq!(im.len(), 2);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            assert!(m.mul_col(k).unwrap().is_empty());
        }
    }

    #[test]
    fn solve_finds_exact_combination() {
        let m = SparseMat {
            rows: 3,
            cols: vec![sv(&[(0, 2), (2, 1)]), sv(&[(1, 3)])],
        };
        let (im, _) = image_and_kernel(&m).unwrap();
        let mut ech = Echelon::new(3, false);
        for c in im {
            ech.insert(c, Vec::new()).unwrap();
        }
        // 2*col0 + col1
        let v = sv(&[(0, 4), (1, 3), (2, 2)]);
        let coeffs = ech.solve(&v).unwrap().unwrap();
        let mut acc: SparseVec<i64> = Vec::new();
        for (r, q) in &coeffs {
            acc = axpy(&acc, q, ech.pivot_col(*r).unwrap()).unwrap();
        }
        assert_eq!(acc, v);
        // (1,1,0) is not in the lattice
        assert!(ech.solve(&sv(&[(0, 1), (1, 1)])).unwrap().is_none());
    }

    #[test]
    fn i64_overflow_reported() {
        let big = i64::MAX / 2 + 1;
        let m = SparseMat {
            rows: 1,
            cols: vec![vec![(0u32, big)], vec![(0u32, big)], vec![(0u32, 1)]],
        };
        // forcing a divide chain: inserting big twice is fine (divides), the
        // overflow shows up in scale/axpy paths
        let c = vec![(0u32, big)];
        assert!(matches!(
            scale(&2i64, &c),
            Err(Outcome::Overflow)
        ));
        let _ = m;
    }

    #[test]
    fn empty_matrix_edges() {
        let m: SparseMat<i64> = SparseMat::zero(0, 3);
        let (im, ker) = image_and_kernel(&m).unwrap();
        assert!(im.is_empty());
        assert_eq!(ker.len(), 3);
        let m2: SparseMat<i64> = SparseMat::zero(5, 0);
        let (im2, ker2) = image_and_kernel(&m2).unwrap();
        assert!(im2.is_empty() && ker2.is_empty());
    }
}
