//! Chain complexes of free Z-modules and their integral homology.
//!
//! The driver is built for boundary matrices with many more columns than
//! rows: kernels come from companion tracking in the sparse echelon, the
//! image of the next boundary is reduced to a column basis, and the
//! resulting relation matrix is shrunk by unit-pivot substitution before
//! the dense Smith step. Everything first runs over checked `i64` and is
//! redone over `BigInt` if anything overflows.

use super::dense::DenseMat;
use super::group::FpAbelianGroup;
use super::morphism::AbMorphism;
use super::scalar::ExactInt;
use super::sparse::{
    dense_to_sparse, image_and_kernel, image_basis, sparse_to_dense, to_bigint_vec, Echelon,
    Inserted, Outcome, SResult, SparseMat, SparseVec,
};
use super::Int;
use crate::{CoreError, Result};
use num_traits::Zero;

/// A bounded chain complex: dims[i] is the rank of the degree-i module and
/// d[i] maps degree i+1 to degree i.
#[derive(Clone, Debug)]
pub struct ZComplex {
    dims: Vec<usize>,
    d: Vec<SparseMat<i64>>,
}

impl ZComplex {
    /// Validates shapes and that consecutive boundaries compose to zero.
    pub fn new(dims: Vec<usize>, d: Vec<SparseMat<i64>>) -> Result<Self> {
        if dims.is_empty() {
            return Err(CoreError::Internal("complex needs at least degree 0".into()));
        }
        if d.len() + 1 != dims.len() {
            return Err(CoreError::Internal(format!(
                "expected {} boundary maps, got {}",
                dims.len() - 1,
                d.len()
            )));
        }
        for (k, m) in d.iter().enumerate() {
            if m.rows != dims[k] || m.ncols() != dims[k + 1] {
                return Err(CoreError::Internal(format!(
                    "boundary {} has shape {}x{}, expected {}x{}",
                    k,
                    m.rows,
                    m.ncols(),
                    dims[k],
                    dims[k + 1]
                )));
            }
            for c in &m.cols {
                if let Some(&(r, _)) = c.last() {
                    if r as usize >= m.rows {
                        return Err(CoreError::Internal(format!(
                            "boundary {} has an entry past row {}",
                            k, m.rows
                        )));
                    }
                }
            }
        }
        for k in 0..d.len().saturating_sub(1) {
            for (j, c) in d[k + 1].cols.iter().enumerate() {
                let ok = match d[k].mul_col(c) {
                    Ok(v) => v.is_empty(),
                    Err(Outcome::Overflow) => {
                        let big = to_bigint_vec(c);
                        d[k].to_bigint().mul_col(&big).expect("bigint").is_empty()
                    }
                };
                if !ok {
                    return Err(CoreError::Internal(format!(
                        "d{} . d{} nonzero at column {}",
                        k + 1,
                        k + 2,
                        j
                    )));
                }
            }
        }
        Ok(ZComplex { dims, d })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    /// Boundary from degree k+1 to degree k.
    pub fn boundary(&self, k: usize) -> &SparseMat<i64> {
        &self.d[k]
    }

    /// Deterministic serialization for cache keys.
    pub fn content_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&(self.dims.len() as u64).to_le_bytes());
        for d in &self.dims {
            out.extend_from_slice(&(*d as u64).to_le_bytes());
        }
        for m in &self.d {
            out.extend_from_slice(&m.content_bytes());
        }
        out
    }

    /// Homology at degree n with representatives and a class solver.
    pub fn homology(&self, n: usize) -> Result<Homology> {
        if n >= self.dims.len() {
            return Err(CoreError::Internal(format!(
                "degree {} out of range for complex of top degree {}",
                n,
                self.top()
            )));
        }
        let raw = match self.raw::<i64>(n) {
            Ok(r) => r,
            Err(Outcome::Overflow) => self.raw::<Int>(n).expect("bigint path cannot overflow"),
        };
        self.finish(n, raw)
    }

    /// Kernel basis of d_n and the image of d_{n+1} expressed in kernel
    /// coordinates, over the scalar Z.
    fn raw<Z: ExactInt>(&self, n: usize) -> SResult<RawHomology> {
        let ambient = self.dims[n];
        let k_cols: Vec<SparseVec<Z>> = if n == 0 {
            (0..ambient).map(|i| vec![(i as u32, Z::one())]).collect()
        } else {
            let m = convert::<Z>(&self.d[n - 1]);
            image_and_kernel(&m)?.1
        };
        let mut ech: Echelon<Z> = Echelon::new(ambient, true);
        for (i, c) in k_cols.iter().enumerate() {
            match ech.insert(c.clone(), vec![(i as u32, Z::one())])? {
                Inserted::Placed => {}
                Inserted::Reduced(_) => unreachable!("kernel basis columns are independent"),
            }
        }
        let b_cols: Vec<SparseVec<Z>> = if n + 1 < self.dims.len() {
            image_basis(&convert::<Z>(&self.d[n]))?
        } else {
            Vec::new()
        };
        let mut rels: Vec<SparseVec<Int>> = Vec::with_capacity(b_cols.len());
        for b in &b_cols {
            let q = ech
                .solve(b)?
                .expect("image of the next boundary consists of cycles");
            let c = ech.expand_companion(&q)?;
            rels.push(to_bigint_vec(&c));
        }
        Ok(RawHomology {
            kernel: SparseMat {
                rows: ambient,
                cols: k_cols.iter().map(|c| to_bigint_vec(c)).collect(),
            },
            rels,
        })
    }

    fn finish(&self, n: usize, raw: RawHomology) -> Result<Homology> {
        let ambient = self.dims[n];
        let k = raw.kernel.ncols();
        let (presimp, residual) = presimp_build(k, &raw.rels);
        let group0 = FpAbelianGroup::new(presimp.kept.len(), residual);
        let (group, to_red0, from_red0) = group0.reduced();
        let to_red = to_red0;

        let mut solver: Echelon<Int> = Echelon::new(ambient, true);
        for (i, c) in raw.kernel.cols.iter().enumerate() {
            match solver
                .insert(c.clone(), vec![(i as u32, Int::from(1))])
                .expect("bigint echelon cannot overflow")
            {
                Inserted::Placed => {}
                Inserted::Reduced(_) => unreachable!("kernel basis columns are independent"),
            }
        }

        let mut rep_cols: Vec<Vec<Int>> = Vec::with_capacity(group.gens());
        for j in 0..group.gens() {
            let w = from_red0.col(j);
            let v = presimp.include(&w);
            let mut amb = vec![Int::zero(); ambient];
            for (i, vi) in v.iter().enumerate() {
                if vi.is_zero() {
                    continue;
                }
                for (r, x) in &raw.kernel.cols[i] {
                    amb[*r as usize] += vi * x;
                }
            }
            rep_cols.push(amb);
        }
        Ok(Homology {
            degree: n,
            ambient,
            group,
            reps: DenseMat::from_cols(ambient, &rep_cols),
            solver,
            presimp,
            to_red,
        })
    }
}

fn convert<Z: ExactInt>(m: &SparseMat<i64>) -> SparseMat<Z> {
    SparseMat {
        rows: m.rows,
        cols: m
            .cols
            .iter()
            .map(|c| c.iter().map(|(r, v)| (*r, Z::from_i64(*v))).collect())
            .collect(),
    }
}

struct RawHomology {
    kernel: SparseMat<Int>,
    rels: Vec<SparseVec<Int>>,
}

/// Homology group at one degree, with cycle representatives in chain
/// coordinates and a solver assigning classes to arbitrary cycles.
pub struct Homology {
    degree: usize,
    ambient: usize,
    group: FpAbelianGroup,
    /// ambient x group.gens(): representative cycle of each generator
    reps: DenseMat,
    solver: Echelon<Int>,
    presimp: Presimp,
    to_red: DenseMat,
}

impl Homology {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn group(&self) -> &FpAbelianGroup {
        &self.group
    }

    /// Representative cycle of generator j, in chain coordinates.
    pub fn rep(&self, j: usize) -> Vec<Int> {
        self.reps.col(j)
    }

    pub fn reps(&self) -> &DenseMat {
        &self.reps
    }

    /// Class of a cycle in group coordinates (canonical form). Errors when
    /// the vector is not a cycle.
    pub fn class_of(&self, v: &[Int]) -> Result<Vec<Int>> {
        assert_eq!(v.len(), self.ambient);
        let sv = dense_to_sparse(v);
        let q = self
            .solver
            .solve(&sv)
            .expect("bigint echelon cannot overflow")
            .ok_or_else(|| CoreError::Internal("vector is not a cycle".into()))?;
        let c = self
            .solver
            .expand_companion(&q)
            .expect("bigint echelon cannot overflow");
        let dense = sparse_to_dense(&c, self.solver_k());
        let w = self.presimp.project(&dense);
        Ok(self.group.canonical(&self.to_red.mul_vec(&w)))
    }

    pub fn is_boundary(&self, v: &[Int]) -> Result<bool> {
        Ok(self.group.is_zero_elt(&self.class_of(v)?))
    }

    fn solver_k(&self) -> usize {
        self.presimp.k
    }
}

impl std::fmt::Debug for Homology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "H_{} = {}", self.degree, self.group.describe())
    }
}

/// Map on homology induced by a chain-level map given degreewise on cycles.
pub fn induced_map(
    src: &Homology,
    dst: &Homology,
    chain_map: impl Fn(&[Int]) -> Vec<Int>,
) -> Result<AbMorphism> {
    let mut cols = Vec::with_capacity(src.group().gens());
    for j in 0..src.group().gens() {
        let y = chain_map(&src.rep(j));
        cols.push(dst.class_of(&y)?);
    }
    AbMorphism::new(
        src.group().clone(),
        dst.group().clone(),
        DenseMat::from_cols(dst.group().gens(), &cols),
    )
}

/// Unit-pivot substitution on a presentation: any relation with a +-1
/// coefficient eliminates that generator. `project` maps old generator
/// coordinates to kept ones, `include` is the section.
struct Presimp {
    k: usize,
    kept: Vec<usize>,
    /// (eliminated generator, substitution coefficients over original indices)
    ops: Vec<(usize, Vec<(usize, Int)>)>,
}

impl Presimp {
    fn project(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(v.len(), self.k);
        let mut v = v.to_vec();
        for (i, sub) in &self.ops {
            if v[*i].is_zero() {
                continue;
            }
            let coeff = std::mem::replace(&mut v[*i], Int::zero());
            for (t, s) in sub {
                let add = &coeff * s;
                v[*t] += add;
            }
        }
        self.kept.iter().map(|&i| v[i].clone()).collect()
    }

    fn include(&self, w: &[Int]) -> Vec<Int> {
        assert_eq!(w.len(), self.kept.len());
        let mut v = vec![Int::zero(); self.k];
        for (slot, &i) in self.kept.iter().enumerate() {
            v[i] = w[slot].clone();
        }
        v
    }
}

/// Eliminate unit pivots from the sparse relation columns, returning the
/// substitution record and the dense residual presentation on kept gens.
fn presimp_build(k: usize, rels: &[SparseVec<Int>]) -> (Presimp, DenseMat) {
    use std::collections::{BTreeMap, BTreeSet, VecDeque};
    let one = Int::from(1);
    let neg_one = Int::from(-1);

    let mut cols: Vec<Option<BTreeMap<usize, Int>>> = rels
        .iter()
        .map(|c| {
            Some(
                c.iter()
                    .map(|(r, v)| (*r as usize, v.clone()))
                    .collect::<BTreeMap<_, _>>(),
            )
        })
        .collect();
    let mut row_cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k];
    for (j, c) in cols.iter().enumerate() {
        for r in c.as_ref().unwrap().keys() {
            row_cols[*r].insert(j);
        }
    }
    let mut row_alive = vec![true; k];
    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
    for (j, c) in cols.iter().enumerate() {
        for (r, v) in c.as_ref().unwrap() {
            if *v == one || *v == neg_one {
                queue.push_back((j, *r));
            }
        }
    }
    let mut ops: Vec<(usize, Vec<(usize, Int)>)> = Vec::new();

    while let Some((j, i)) = queue.pop_front() {
        let Some(pivcol) = cols[j].clone() else { continue };
        if !row_alive[i] {
            continue;
        }
        let Some(u) = pivcol.get(&i) else { continue };
        if *u != one && *u != neg_one {
            continue;
        }
        let u = u.clone();
        // substitution g_i = sum sub_t g_t, from the relation column
        let sub: Vec<(usize, Int)> = pivcol
            .iter()
            .filter(|(t, _)| **t != i)
            .map(|(t, c)| (*t, -(&u) * c))
            .collect();
        // eliminate row i from every other column
        let touching: Vec<usize> = row_cols[i].iter().copied().filter(|&c| c != j).collect();
        for cj in touching {
            let Some(col) = cols[cj].as_mut() else { continue };
            let Some(f) = col.get(&i).cloned() else { continue };
            let factor = -(&f) * (&u);
            for (t, p) in &pivcol {
                let entry = col.entry(*t).or_insert_with(Int::zero);
                *entry += &factor * p;
                if entry.is_zero() {
                    col.remove(t);
                    row_cols[*t].remove(&cj);
                } else {
                    row_cols[*t].insert(cj);
                }
            }
            debug_assert!(!col.contains_key(&i));
            if col.is_empty() {
                cols[cj] = None;
            } else {
                for (t, v) in cols[cj].as_ref().unwrap() {
                    if (*v == one || *v == neg_one) && row_alive[*t] {
                        queue.push_back((cj, *t));
                    }
                }
            }
        }
        // retire the pivot column and generator
        for (t, _) in &pivcol {
            row_cols[*t].remove(&j);
        }
        cols[j] = None;
        row_alive[i] = false;
        ops.push((i, sub));
    }

    let kept: Vec<usize> = (0..k).filter(|&i| row_alive[i]).collect();
    let slot: BTreeMap<usize, usize> = kept.iter().enumerate().map(|(s, &i)| (i, s)).collect();
    let mut residual: Vec<Vec<Int>> = Vec::new();
    for c in cols.into_iter().flatten() {
        let mut v = vec![Int::zero(); kept.len()];
        for (r, x) in c {
            debug_assert!(row_alive[r]);
            v[slot[&r]] = x;
        }
        if v.iter().any(|x| !x.is_zero()) {
            residual.push(v);
        }
    }
    (
        Presimp { k, kept, ops },
        DenseMat::from_cols(slot.len(), &residual),
    )
}
