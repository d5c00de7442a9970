//! Bar-resolution homology of small finite matrix groups, relative homology
//! of pairs via the quotient of bar complexes, the S_n = H_n(B,T) groups,
//! monomial-subgroup checks, commutator classes in H_2, and the relative
//! SL2/SM2 diagnostics.

use crate::abgrp::{
    induced_map, wedge_square, AbMorphism, DenseMat, FpAbelianGroup, Homology,
    Int, SparseMat, SparseVec, ZComplex,
};
use crate::grpring::SquareClassGroup;
use crate::ring::{h0_units_on_a, Elem, FiniteRing, UnitGroup};
use crate::sl2::{elem_d, elem_e12, enumerate_group, GroupTable, Mat2, Which};
use crate::{Caps, CoreError, Result};
use num_traits::Zero;
use std::collections::HashMap;

/// A finite-rank integer representation of a group table: one matrix per
/// element, stored column-wise. Enough for trivial coefficients and the
/// permutation-style modules used by the relative pairs.
pub struct GModule {
    rank: usize,
    /// cols[g][j] = column j of the action matrix of element g
    cols: Vec<Vec<Vec<(u32, i64)>>>,
}

impl GModule {
    pub fn trivial(group_size: usize) -> Self {
        GModule {
            rank: 1,
            cols: vec![vec![vec![(0, 1)]]; group_size],
        }
    }

    pub fn from_action(rank: usize, cols: Vec<Vec<Vec<(u32, i64)>>>) -> Self {
        for per_g in &cols {
            assert_eq!(per_g.len(), rank);
        }
        GModule { rank, cols }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn col(&self, g: u32, j: usize) -> &[(u32, i64)] {
        &self.cols[g as usize][j]
    }

    fn apply(&self, g: u32, v: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.rank];
        for (j, x) in v.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (i, a) in self.col(g, j) {
                out[*i as usize] += a * x;
            }
        }
        out
    }

    /// rho(id) = I and rho(g)rho(h) = rho(gh), exhaustively.
    pub fn verify(&self, r: &FiniteRing, g: &GroupTable) -> Result<()> {
        assert_eq!(self.cols.len(), g.n());
        for j in 0..self.rank {
            let mut e = vec![0i64; self.rank];
            e[j] = 1;
            if self.apply(g.id(), &e) != e {
                return Err(CoreError::Internal("module action: rho(id) != I".into()));
            }
        }
        for x in 0..g.n() as u32 {
            for y in 0..g.n() as u32 {
                for j in 0..self.rank {
                    let mut e = vec![0i64; self.rank];
                    e[j] = 1;
                    let lhs = self.apply(x, &self.apply(y, &e));
                    let rhs = self.apply(g.mul(r, x, y), &e);
                    if lhs != rhs {
                        return Err(CoreError::Internal(
                            "module action is not a homomorphism".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

fn checked_dims(n: usize, rank: usize, top: usize, caps: &Caps) -> Result<Vec<usize>> {
    let mut dims = Vec::with_capacity(top + 1);
    let mut t: usize = 1;
    for k in 0..=top {
        let d = t.checked_mul(rank).filter(|&d| d <= caps.complex_basis);
        match d {
            Some(d) => dims.push(d),
            None => {
                return Err(CoreError::CapExceeded {
                    what: format!("bar complex basis at degree {k}"),
                    cap: caps.complex_basis,
                    actual: t.saturating_mul(rank),
                })
            }
        }
        t = match t.checked_mul(n) {
            Some(t) if k < top => t,
            None if k < top => {
                return Err(CoreError::CapExceeded {
                    what: format!("bar complex basis at degree {}", k + 1),
                    cap: caps.complex_basis,
                    actual: usize::MAX,
                })
            }
            _ => t,
        };
    }
    Ok(dims)
}

fn decode(mut idx: usize, n: usize, len: usize) -> Vec<u32> {
    let mut d = vec![0u32; len];
    for i in (0..len).rev() {
        d[i] = (idx % n) as u32;
        idx /= n;
    }
    d
}

fn encode(digits: &[u32], n: usize) -> usize {
    digits.iter().fold(0usize, |acc, &d| acc * n + d as usize)
}

/// Bar complex of G with coefficients in M, built to chain degree `top`.
/// C_k is free on (k-tuple, module basis) pairs, tuple-major; `perm` relabels
/// elements inside the basis ordering (identity if None), which permutes the
/// basis without changing the abstract complex.
pub fn bar_complex(
    r: &FiniteRing,
    g: &GroupTable,
    m: &GModule,
    top: usize,
    perm: Option<&[u32]>,
    caps: &Caps,
) -> Result<ZComplex> {
    let n = g.n();
    let rank = m.rank();
    let dims = checked_dims(n, rank, top, caps)?;
    let ident: Vec<u32> = (0..n as u32).collect();
    let relab = perm.unwrap_or(&ident);
    assert_eq!(relab.len(), n);
    let mut unrelab = vec![0u32; n];
    for (gid, &slot) in relab.iter().enumerate() {
        unrelab[slot as usize] = gid as u32;
    }
    let mut ds: Vec<SparseMat<i64>> = Vec::with_capacity(top);
    for k in 1..=top {
        let mut mat = SparseMat::zero(dims[k - 1], 0);
        for t in 0..dims[k] / rank {
            let digits = decode(t, n, k);
            let tuple: Vec<u32> = digits.iter().map(|&d| unrelab[d as usize]).collect();
            for j in 0..rank {
                let mut acc: HashMap<u32, i64> = HashMap::new();
                // face 0 drops g1 and moves it onto the coefficient
                let tail: Vec<u32> = tuple[1..].iter().map(|&x| relab[x as usize]).collect();
                let tail_idx = encode(&tail, n);
                for (row, v) in m.col(g.inv(tuple[0]), j) {
                    *acc.entry((tail_idx * rank) as u32 + row).or_insert(0) += v;
                }
                // inner faces merge adjacent entries
                for i in 1..k {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    let mut merged = tuple.clone();
                    merged[i - 1] = g.mul(r, tuple[i - 1], tuple[i]);
                    merged.remove(i);
                    let digs: Vec<u32> = merged.iter().map(|&x| relab[x as usize]).collect();
                    let idx = encode(&digs, n) * rank + j;
                    *acc.entry(idx as u32).or_insert(0) += sign;
                }
                // last face drops g_k
                let sign = if k % 2 == 0 { 1 } else { -1 };
                let init: Vec<u32> = tuple[..k - 1].iter().map(|&x| relab[x as usize]).collect();
                let idx = encode(&init, n) * rank + j;
                *acc.entry(idx as u32).or_insert(0) += sign;

                let mut col: SparseVec<i64> =
                    acc.into_iter().filter(|(_, v)| *v != 0).collect();
                col.sort_unstable_by_key(|e| e.0);
                mat.cols.push(col);
            }
        }
        ds.push(mat);
    }
    ZComplex::new(dims, ds)
}

/// H_n(G; M) via the sparse bar complex; degree cap and basis cap enforced.
pub fn group_homology_m(
    r: &FiniteRing,
    g: &GroupTable,
    m: &GModule,
    n: usize,
    caps: &Caps,
) -> Result<Homology> {
    if n + 1 > caps.max_degree {
        return Err(CoreError::CapExceeded {
            what: "bar homology degree".into(),
            cap: caps.max_degree - 1,
            actual: n,
        });
    }
    if g.n() > caps.bar_cap(n) {
        return Err(CoreError::CapExceeded {
            what: format!("group order for H_{n}"),
            cap: caps.bar_cap(n),
            actual: g.n(),
        });
    }
    let c = bar_complex(r, g, m, n + 1, None, caps)?;
    c.homology(n)
}

pub fn group_homology(r: &FiniteRing, g: &GroupTable, n: usize, caps: &Caps) -> Result<Homology> {
    group_homology_m(r, g, &GModule::trivial(g.n()), n, caps)
}

/// Invariant factors of G^ab by commutator-subgroup enumeration; independent
/// of the bar machinery, used as the H_1 oracle.
pub fn abelianization_invariants(r: &FiniteRing, g: &GroupTable) -> Vec<u64> {
    let n = g.n();
    // commutator subgroup: closure of all [x,y] (already conjugation-stable)
    let mut comm: Vec<u32> = Vec::new();
    let mut in_comm = vec![false; n];
    for x in 0..n as u32 {
        for y in 0..n as u32 {
            let c = g.mul(r, g.mul(r, x, y), g.mul(r, g.inv(x), g.inv(y)));
            if !in_comm[c as usize] {
                in_comm[c as usize] = true;
                comm.push(c);
            }
        }
    }
    let gens = comm.clone();
    let mut queue: std::collections::VecDeque<u32> = comm.iter().copied().collect();
    while let Some(x) = queue.pop_front() {
        for &y in &gens {
            let p = g.mul(r, x, y);
            if !in_comm[p as usize] {
                in_comm[p as usize] = true;
                queue.push_back(p);
            }
        }
    }
    // cosets of the commutator subgroup
    let mut coset_of = vec![u32::MAX; n];
    let mut reps: Vec<u32> = Vec::new();
    for x in 0..n as u32 {
        if coset_of[x as usize] != u32::MAX {
            continue;
        }
        let c = reps.len() as u32;
        reps.push(x);
        for y in 0..n as u32 {
            if in_comm[y as usize] {
                coset_of[g.mul(r, x, y) as usize] = c;
            }
        }
    }
    let mul = |a: u32, b: u32| coset_of[g.mul(r, reps[a as usize], reps[b as usize]) as usize];
    abelian_invariants(reps.len(), coset_of[g.id() as usize], &mul)
}

/// Invariant factors of a finite abelian group given by a multiplication
/// closure: greedy generators plus a triangular relation lattice.
fn abelian_invariants(n: usize, id: u32, mul: &dyn Fn(u32, u32) -> u32) -> Vec<u64> {
    let order = |x: u32| {
        let mut k = 1u64;
        let mut a = x;
        while a != id {
            a = mul(a, x);
            k += 1;
        }
        k
    };
    let mut cand: Vec<u32> = (0..n as u32).collect();
    cand.sort_by_key(|&x| std::cmp::Reverse(order(x)));
    let mut span: HashMap<u32, Vec<u64>> = HashMap::new();
    span.insert(id, Vec::new());
    let mut ngens = 0usize;
    let mut rel_cols: Vec<Vec<i64>> = Vec::new();
    for &u in &cand {
        if span.contains_key(&u) {
            continue;
        }
        let mut j = 1u64;
        let mut p = u;
        while !span.contains_key(&p) {
            p = mul(p, u);
            j += 1;
        }
        let mut col: Vec<i64> = span[&p].iter().map(|&c| -(c as i64)).collect();
        col.resize(ngens, 0);
        col.push(j as i64);
        rel_cols.push(col);
        let old: Vec<(u32, Vec<u64>)> = span.drain().collect();
        let mut pw = id;
        for k in 0..j {
            for (e, c) in &old {
                let mut cc = c.clone();
                cc.resize(ngens, 0);
                cc.push(k);
                span.insert(mul(*e, pw), cc);
            }
            pw = mul(pw, u);
        }
        ngens += 1;
    }
    assert_eq!(span.len(), n, "span must exhaust the group");
    let mut rels = DenseMat::zero(ngens, rel_cols.len());
    for (cj, col) in rel_cols.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            rels.set(i, cj, Int::from(v));
        }
    }
    FpAbelianGroup::new(ngens, rels)
        .torsion()
        .iter()
        .map(|t| u64::try_from(t).expect("small torsion"))
        .collect()
}

/// Cyclic group of order m realized as a diagonal matrix group over F_p for
/// the least prime p = 1 mod m.
pub fn cyclic_group_table(m: u64) -> Result<(FiniteRing, GroupTable)> {
    assert!(m >= 1);
    let mut p = 2u64;
    loop {
        if crate::ring::factorize(p).len() == 1 && crate::ring::factorize(p)[0].1 == 1 && (p - 1) % m == 0
        {
            break;
        }
        p += 1;
    }
    let r = FiniteRing::parse(&format!("gf:{p}"))?;
    let units = UnitGroup::new(&r);
    assert_eq!(units.gens().len(), 1, "prime field units are cyclic");
    let g0 = units.gens()[0];
    let u = r.pow(g0, (p - 1) / m);
    let mut elems = Vec::with_capacity(m as usize);
    let mut acc = r.one();
    for _ in 0..m {
        elems.push(elem_d(&r, acc)?);
        acc = r.mul(acc, u);
    }
    let gens = vec![elem_d(&r, u)?];
    let t = GroupTable::new_checked(&r, elems, &gens)?;
    Ok((r, t))
}

/// H_n(Z/m) from the 2-periodic resolution: after tensoring down, the
/// differentials alternate 0 and multiplication by m.
pub fn periodic_cyclic_oracle(m: u64, n: usize) -> FpAbelianGroup {
    if n == 0 {
        return FpAbelianGroup::free(1);
    }
    if n % 2 == 1 {
        FpAbelianGroup::cyclic(m)
    } else {
        FpAbelianGroup::trivial()
    }
}

/// Pair (G, G') with coefficient pair (M, M'): the sub bar complex embeds
/// into the big one basis-to-basis, and the relative complex is the quotient.
pub struct RelativePair {
    top: usize,
    big: ZComplex,
    sub: ZComplex,
    quot: ZComplex,
    /// per degree, per sub basis index: (big basis index, sign)
    sub_to_big: Vec<Vec<(u32, i64)>>,
    /// per degree, per big basis index: quotient index or -1 if killed
    big_to_quot: Vec<Vec<i64>>,
}

impl RelativePair {
    /// `embed` sends each M' basis vector to a signed M basis vector.
    pub fn new(
        r: &FiniteRing,
        big_t: &GroupTable,
        sub_t: &GroupTable,
        m_big: &GModule,
        m_sub: &GModule,
        embed: &[(u32, i64)],
        top: usize,
        caps: &Caps,
    ) -> Result<RelativePair> {
        let emb_elems = big_t.embed_indices(sub_t)?;
        assert_eq!(embed.len(), m_sub.rank());
        {
            let mut seen = vec![false; m_big.rank()];
            for &(t, s) in embed {
                assert!(s == 1 || s == -1, "module embedding must be signed basis");
                assert!(!seen[t as usize], "module embedding must be injective");
                seen[t as usize] = true;
            }
        }
        // module compatibility on subgroup generators
        for &gs in sub_t.gens() {
            let gb = emb_elems[gs as usize];
            for j in 0..m_sub.rank() {
                let mut e = vec![0i64; m_sub.rank()];
                e[j] = 1;
                let through_sub = m_sub.apply(gs, &e);
                let mut lhs = vec![0i64; m_big.rank()];
                for (i, v) in through_sub.iter().enumerate() {
                    let (t, s) = embed[i];
                    lhs[t as usize] += v * s;
                }
                let mut e_big = vec![0i64; m_big.rank()];
                let (t, s) = embed[j];
                e_big[t as usize] = s;
                if lhs != m_big.apply(gb, &e_big) {
                    return Err(CoreError::IllDefinedMap(j));
                }
            }
        }
        let big = bar_complex(r, big_t, m_big, top, None, caps)?;
        let sub = bar_complex(r, sub_t, m_sub, top, None, caps)?;
        let nb = big_t.n();
        let ns = sub_t.n();
        let rb = m_big.rank();
        let rs = m_sub.rank();
        let mut sub_to_big: Vec<Vec<(u32, i64)>> = Vec::with_capacity(top + 1);
        let mut big_to_quot: Vec<Vec<i64>> = Vec::with_capacity(top + 1);
        for k in 0..=top {
            let mut map_k = Vec::with_capacity(sub.dims()[k]);
            let mut killed = vec![false; big.dims()[k]];
            for t in 0..sub.dims()[k] / rs {
                let digits = decode(t, ns, k);
                let big_digits: Vec<u32> =
                    digits.iter().map(|&d| emb_elems[d as usize]).collect();
                let bt = encode(&big_digits, nb);
                for j in 0..rs {
                    let (mj, s) = embed[j];
                    let bidx = bt * rb + mj as usize;
                    if killed[bidx] {
                        return Err(CoreError::Internal(
                            "sub complex does not embed injectively".into(),
                        ));
                    }
                    killed[bidx] = true;
                    map_k.push((bidx as u32, s));
                }
            }
            let mut quot_map = vec![-1i64; big.dims()[k]];
            let mut next = 0i64;
            for (i, k_) in killed.iter().enumerate() {
                if !k_ {
                    quot_map[i] = next;
                    next += 1;
                }
            }
            sub_to_big.push(map_k);
            big_to_quot.push(quot_map);
        }
        // the embedded sub complex must be a subcomplex of the big one
        for k in 0..top {
            for (s_col, &(b_col, cs)) in sub_to_big[k + 1].iter().enumerate() {
                let mut expected: Vec<(u32, i64)> = sub.boundary(k).cols[s_col]
                    .iter()
                    .map(|&(row, v)| {
                        let (b_row, rs) = sub_to_big[k][row as usize];
                        (b_row, v * rs * cs)
                    })
                    .collect();
                expected.sort_unstable_by_key(|e| e.0);
                let actual = &big.boundary(k).cols[b_col as usize];
                if expected != *actual {
                    return Err(CoreError::Internal(
                        "sub bar complex is not a subcomplex of the big one".into(),
                    ));
                }
            }
        }
        let mut quot_d: Vec<SparseMat<i64>> = Vec::with_capacity(top);
        let mut quot_dims = Vec::with_capacity(top + 1);
        for k in 0..=top {
            quot_dims.push(big_to_quot[k].iter().filter(|&&v| v >= 0).count());
        }
        for k in 0..top {
            let mut mat = SparseMat::zero(quot_dims[k], 0);
            for (c, col) in big.boundary(k).cols.iter().enumerate() {
                if big_to_quot[k + 1][c] < 0 {
                    continue;
                }
                let mut out: SparseVec<i64> = col
                    .iter()
                    .filter_map(|&(row, v)| {
                        let q = big_to_quot[k][row as usize];
                        if q >= 0 {
                            Some((q as u32, v))
                        } else {
                            None
                        }
                    })
                    .collect();
                out.sort_unstable_by_key(|e| e.0);
                mat.cols.push(out);
            }
            quot_d.push(mat);
        }
        let quot = ZComplex::new(quot_dims, quot_d)?;
        Ok(RelativePair {
            top,
            big,
            sub,
            quot,
            sub_to_big,
            big_to_quot,
        })
    }

    pub fn trivial_coeffs(
        r: &FiniteRing,
        big_t: &GroupTable,
        sub_t: &GroupTable,
        top: usize,
        caps: &Caps,
    ) -> Result<RelativePair> {
        RelativePair::new(
            r,
            big_t,
            sub_t,
            &GModule::trivial(big_t.n()),
            &GModule::trivial(sub_t.n()),
            &[(0, 1)],
            top,
            caps,
        )
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn big(&self) -> &ZComplex {
        &self.big
    }

    pub fn sub(&self) -> &ZComplex {
        &self.sub
    }

    pub fn quot(&self) -> &ZComplex {
        &self.quot
    }

    pub fn homology(&self, n: usize) -> Result<Homology> {
        self.quot.homology(n)
    }

    fn incl_chain(&self, k: usize, v: &[Int]) -> Vec<Int> {
        let mut out = vec![Int::zero(); self.big.dims()[k]];
        for (s, x) in v.iter().enumerate() {
            if !x.is_zero() {
                let (b, sg) = self.sub_to_big[k][s];
                out[b as usize] = x * Int::from(sg);
            }
        }
        out
    }

    fn proj_chain(&self, k: usize, v: &[Int]) -> Vec<Int> {
        let dims = self.quot.dims()[k];
        let mut out = vec![Int::zero(); dims];
        for (b, x) in v.iter().enumerate() {
            let q = self.big_to_quot[k][b];
            if q >= 0 {
                out[q as usize] = x.clone();
            }
        }
        out
    }

    fn lift_chain(&self, k: usize, v: &[Int]) -> Vec<Int> {
        let mut out = vec![Int::zero(); self.big.dims()[k]];
        for (b, q) in self.big_to_quot[k].iter().enumerate() {
            if *q >= 0 {
                out[b] = v[*q as usize].clone();
            }
        }
        out
    }

    fn restrict_chain(&self, k: usize, v: &[Int]) -> Result<Vec<Int>> {
        let mut out = vec![Int::zero(); self.sub.dims()[k]];
        let mut seen = vec![false; self.big.dims()[k]];
        for (s, &(b, sg)) in self.sub_to_big[k].iter().enumerate() {
            out[s] = &v[b as usize] * Int::from(sg);
            seen[b as usize] = true;
        }
        for (b, x) in v.iter().enumerate() {
            if !seen[b] && !x.is_zero() {
                return Err(CoreError::Internal(
                    "chain is not supported on the sub complex".into(),
                ));
            }
        }
        Ok(out)
    }

    /// All homologies through degree n, with the inclusion, projection, and
    /// connecting morphisms and an exactness verdict per checked position.
    pub fn les(&self, n: usize) -> Result<(PairHomology, Vec<(String, bool)>)> {
        assert!(n + 1 <= self.top, "les needs complexes one degree above n");
        let mut sub_h = Vec::new();
        let mut big_h = Vec::new();
        let mut quot_h = Vec::new();
        for k in 0..=n {
            sub_h.push(self.sub.homology(k)?);
            big_h.push(self.big.homology(k)?);
            quot_h.push(self.quot.homology(k)?);
        }
        let mut incl = Vec::new();
        let mut proj = Vec::new();
        for k in 0..=n {
            incl.push(induced_map(&sub_h[k], &big_h[k], |v| self.incl_chain(k, v))?);
            proj.push(induced_map(&big_h[k], &quot_h[k], |v| self.proj_chain(k, v))?);
        }
        let mut conn = Vec::new();
        for k in 0..=n {
            if k == 0 {
                conn.push(AbMorphism::zero(quot_h[0].group(), &FpAbelianGroup::trivial()));
                continue;
            }
            let src = quot_h[k].group().clone();
            let dst = sub_h[k - 1].group().clone();
            let mut cols: Vec<Vec<Int>> = Vec::new();
            for j in 0..src.gens() {
                let lifted = self.lift_chain(k, &quot_h[k].rep(j));
                let dv = apply_boundary(self.big.boundary(k - 1), &lifted);
                let restricted = self.restrict_chain(k - 1, &dv)?;
                cols.push(sub_h[k - 1].class_of(&restricted)?);
            }
            conn.push(AbMorphism::new(
                src,
                dst.clone(),
                DenseMat::from_cols(dst.gens(), &cols),
            )?);
        }
        let mut report = Vec::new();
        for k in (0..=n).rev() {
            if k < n {
                report.push((
                    format!("H{k}(G')"),
                    crate::abgrp::is_exact_at(&conn[k + 1], &incl[k])?,
                ));
            }
            report.push((
                format!("H{k}(G)"),
                crate::abgrp::is_exact_at(&incl[k], &proj[k])?,
            ));
            report.push((
                format!("H{k}(G,G')"),
                crate::abgrp::is_exact_at(&proj[k], &conn[k])?,
            ));
        }
        Ok((
            PairHomology {
                sub_h,
                big_h,
                quot_h,
                incl,
                proj,
                conn,
            },
            report,
        ))
    }
}

pub struct PairHomology {
    pub sub_h: Vec<Homology>,
    pub big_h: Vec<Homology>,
    pub quot_h: Vec<Homology>,
    pub incl: Vec<AbMorphism>,
    pub proj: Vec<AbMorphism>,
    /// conn[k]: H_k(G,G') -> H_{k-1}(G'); conn[0] maps to the zero group
    pub conn: Vec<AbMorphism>,
}

fn apply_boundary(d: &SparseMat<i64>, v: &[Int]) -> Vec<Int> {
    let mut out = vec![Int::zero(); d.rows];
    for (j, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for &(row, val) in &d.cols[j] {
            out[row as usize] += Int::from(val) * x;
        }
    }
    out
}

fn relative_gate(big_order: usize, n: usize, caps: &Caps) -> Result<()> {
    if big_order > caps.bar_cap(n) {
        return Err(CoreError::CapExceeded {
            what: format!("ambient group order for relative H_{n}"),
            cap: caps.bar_cap(n),
            actual: big_order,
        });
    }
    Ok(())
}

/// H_n(G, G'; Z): the quotient-complex homology with trivial coefficients.
pub fn relative_homology(
    r: &FiniteRing,
    big_t: &GroupTable,
    sub_t: &GroupTable,
    n: usize,
    caps: &Caps,
) -> Result<FpAbelianGroup> {
    relative_gate(big_t.n(), n, caps)?;
    let pair = RelativePair::trivial_coeffs(r, big_t, sub_t, n + 1, caps)?;
    Ok(pair.homology(n)?.group().clone())
}

pub struct SnReport {
    pub ring: String,
    pub n: usize,
    pub s: FpAbelianGroup,
    pub h_b: FpAbelianGroup,
    pub h_t: FpAbelianGroup,
    pub split_ok: bool,
}

/// S_n = H_n(B, T; Z), plus the splitting check H_n(B) = H_n(T) + S_n.
pub fn s_groups(r: &FiniteRing, n: usize, caps: &Caps) -> Result<SnReport> {
    let b = enumerate_group(r, Which::B, caps)?;
    let t = enumerate_group(r, Which::T, caps)?;
    let s = relative_homology(r, &b, &t, n, caps)?;
    let h_b = group_homology(r, &b, n, caps)?.group().clone();
    let h_t = group_homology(r, &t, n, caps)?.group().clone();
    let split_ok = h_b.isomorphic(&h_t.direct_sum(&s));
    Ok(SnReport {
        ring: r.spec().to_string(),
        n,
        s,
        h_b,
        h_t,
        split_ok,
    })
}

pub struct Sm2Report {
    pub ring: String,
    pub sm2_order: usize,
    pub h1: FpAbelianGroup,
    pub g_a_order: usize,
    /// |H1(SM2)| = 2|G_A|
    pub h1_order_matches: bool,
    /// mu_2 = {1, -1}, the hypothesis of the H2 comparison
    pub mu2_hypothesis: bool,
    pub h2: Option<FpAbelianGroup>,
    pub wedge_quotient: Option<FpAbelianGroup>,
    pub h2_matches: Option<bool>,
    pub skip_reason: Option<String>,
}

/// Lambda^2(A*) / (A* wedge mu_2): cokernel of the evaluation pairing.
pub fn wedge_mod_mu2(r: &FiniteRing, units: &UnitGroup) -> FpAbelianGroup {
    let (l2, pi) = wedge_square(units.group());
    let ngens = units.gens().len();
    let mut cols: Vec<Vec<Int>> = Vec::new();
    for z in r.mu2() {
        let zc: Vec<Int> = units.dlog(z).unwrap().iter().map(|&e| Int::from(e)).collect();
        for i in 0..ngens {
            let mut e = vec![Int::zero(); ngens];
            e[i] = Int::from(1);
            cols.push(pi.eval(&e, &zc));
        }
    }
    let rels = l2.rels().hstack(&DenseMat::from_cols(l2.gens(), &cols));
    FpAbelianGroup::new(l2.gens(), rels)
}

pub fn sm2_checks(r: &FiniteRing, caps: &Caps) -> Result<Sm2Report> {
    let sm2 = enumerate_group(r, Which::Sm2, caps)?;
    let units = UnitGroup::new(r);
    let g_a = SquareClassGroup::new(r, &units);
    let h1 = group_homology(r, &sm2, 1, caps)?.group().clone();
    let h1_order_matches = h1.order() == Some(Int::from(2 * g_a.order() as u64));
    let mut mu2 = r.mu2();
    mu2.sort_unstable();
    let mut pm = vec![r.one(), r.neg_one()];
    pm.sort_unstable();
    pm.dedup();
    let mu2_hypothesis = mu2 == pm;
    let (h2, wedge_quotient, h2_matches, skip_reason) = if !mu2_hypothesis {
        (
            None,
            None,
            None,
            Some("mu_2 != {1,-1}: comparison hypothesis fails".to_string()),
        )
    } else {
        match group_homology(r, &sm2, 2, caps) {
            Ok(h2) => {
                let wq = wedge_mod_mu2(r, &units);
                let ok = h2.group().isomorphic(&wq);
                (Some(h2.group().clone()), Some(wq), Some(ok), None)
            }
            Err(CoreError::CapExceeded { what, .. }) => {
                (None, None, None, Some(format!("cap exceeded: {what}")))
            }
            Err(e) => return Err(e),
        }
    };
    Ok(Sm2Report {
        ring: r.spec().to_string(),
        sm2_order: sm2.n(),
        h1,
        g_a_order: g_a.order(),
        h1_order_matches,
        mu2_hypothesis,
        h2,
        wedge_quotient,
        h2_matches,
        skip_reason,
    })
}

/// Class of the 2-cycle [g|g'] - [g'|g] in H_2; g and g' must commute.
/// `h2` must come from the bar complex of `g_t` in its canonical order.
pub fn commutator_class(
    r: &FiniteRing,
    g_t: &GroupTable,
    h2: &Homology,
    x: u32,
    y: u32,
) -> Result<Vec<Int>> {
    if g_t.mul(r, x, y) != g_t.mul(r, y, x) {
        return Err(CoreError::Hypothesis(
            "commutator class needs commuting elements".into(),
        ));
    }
    let n = g_t.n();
    assert_eq!(h2.ambient_dim(), n * n, "H2 data does not match the group");
    let mut v = vec![Int::zero(); n * n];
    v[x as usize * n + y as usize] += Int::from(1);
    v[y as usize * n + x as usize] -= Int::from(1);
    h2.class_of(&v)
}

/// x_a = class of c(E12(a), diag(b,b)) in H_2(B); b must lie in mu_2.
pub fn x_class(
    r: &FiniteRing,
    b_t: &GroupTable,
    h2: &Homology,
    a: Elem,
    b: Elem,
) -> Result<Vec<Int>> {
    if !r.mu2().contains(&b) {
        return Err(CoreError::Hypothesis(format!(
            "{} is not a square root of 1",
            r.label(b)
        )));
    }
    let u = b_t
        .index_of(&elem_e12(r, a))
        .ok_or_else(|| CoreError::Internal("E12(a) not in the group".into()))?;
    let s = b_t
        .index_of(&Mat2::new(b, r.zero(), r.zero(), b))
        .ok_or_else(|| CoreError::Internal("diag(b,b) not in the group".into()))?;
    commutator_class(r, b_t, h2, u, s)
}

pub struct RelSl2Report {
    pub ring: String,
    /// H_0, H_1, H_2 of the pair (SL2, SM2)
    pub h: Vec<FpAbelianGroup>,
    pub les_report: Vec<(String, bool)>,
    pub les_ok: bool,
    /// (hypothesis, holds); None = not computable under caps
    pub hypotheses: Vec<(String, Option<bool>)>,
    /// H_0(A*, A), the source of the degree-1 surjection
    pub h0_units: FpAbelianGroup,
}

/// Relative homology of (SL2, SM2) through degree 2 with the hypothesis
/// report attached; comparison against W(A) happens at the caller, which is
/// why the computed groups are returned whole.
pub fn relative_sl2_sm2(r: &FiniteRing, caps: &Caps) -> Result<RelSl2Report> {
    let sl2 = enumerate_group(r, Which::Sl2, caps)?;
    relative_gate(sl2.n(), 2, caps)?;
    let sm2 = enumerate_group(r, Which::Sm2, caps)?;
    let pair = RelativePair::trivial_coeffs(r, &sl2, &sm2, 3, caps)?;
    let (ph, les_report) = pair.les(2)?;
    let les_ok = les_report.iter().all(|(_, ok)| *ok);
    let h: Vec<FpAbelianGroup> = ph.quot_h.iter().map(|x| x.group().clone()).collect();

    let mut mu2 = r.mu2();
    mu2.sort_unstable();
    let mut pm = vec![r.one(), r.neg_one()];
    pm.sort_unstable();
    pm.dedup();
    let mu2_ok = mu2 == pm;
    let neg_one_square = r.units().iter().any(|&u| r.sq(u) == r.neg_one());
    let tb = (|| -> Result<bool> {
        let t = enumerate_group(r, Which::T, caps)?;
        let b = enumerate_group(r, Which::B, caps)?;
        for i in 1..=2 {
            let ht = group_homology(r, &t, i, caps)?;
            let hb = group_homology(r, &b, i, caps)?;
            if !ht.group().isomorphic(hb.group()) {
                return Ok(false);
            }
        }
        Ok(true)
    })();
    let tb = match tb {
        Ok(v) => Some(v),
        Err(CoreError::CapExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    let units = UnitGroup::new(r);
    Ok(RelSl2Report {
        ring: r.spec().to_string(),
        h,
        les_report,
        les_ok,
        hypotheses: vec![
            ("mu_2 = {1,-1}".into(), Some(mu2_ok)),
            ("-1 is a square".into(), Some(neg_one_square)),
            ("H_i(T) = H_i(B) for i = 1,2".into(), tb),
        ],
        h0_units: h0_units_on_a(r, &units),
    })
}
