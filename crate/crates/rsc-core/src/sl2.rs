//! 2x2 matrix groups over a finite commutative ring: the elementary
//! generators E(x), E12, E21, D(a), the matrix w = E(0), the defining
//! relations of GE2, and enumeration of SL2, E2 (closure of the E(x)),
//! the monomial subgroup SM2, the torus T, and the Borel B.

use crate::ring::{factorize, Elem, FiniteRing, RingSpec};
use crate::{Caps, CoreError, Result};
use std::collections::HashMap;

/// Matrix [[a,b],[c,d]]; members of the groups here have determinant 1.
/// Derived lexicographic order on (a,b,c,d) is the canonical element order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mat2 {
    pub a: Elem,
    pub b: Elem,
    pub c: Elem,
    pub d: Elem,
}

impl Mat2 {
    pub fn new(a: Elem, b: Elem, c: Elem, d: Elem) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity(r: &FiniteRing) -> Self {
        Mat2::new(r.one(), r.zero(), r.zero(), r.one())
    }

    pub fn mul(&self, r: &FiniteRing, o: &Mat2) -> Mat2 {
        Mat2 {
            a: r.add(r.mul(self.a, o.a), r.mul(self.b, o.c)),
            b: r.add(r.mul(self.a, o.b), r.mul(self.b, o.d)),
            c: r.add(r.mul(self.c, o.a), r.mul(self.d, o.c)),
            d: r.add(r.mul(self.c, o.b), r.mul(self.d, o.d)),
        }
    }

    pub fn det(&self, r: &FiniteRing) -> Elem {
        r.sub(r.mul(self.a, self.d), r.mul(self.b, self.c))
    }

    /// Inverse of a determinant-1 matrix: the adjugate.
    pub fn inv_det1(&self, r: &FiniteRing) -> Mat2 {
        Mat2 {
            a: self.d,
            b: r.neg(self.b),
            c: r.neg(self.c),
            d: self.a,
        }
    }

    pub fn is_identity(&self, r: &FiniteRing) -> bool {
        *self == Mat2::identity(r)
    }

    /// Column action on A^2.
    pub fn apply(&self, r: &FiniteRing, v: (Elem, Elem)) -> (Elem, Elem) {
        (
            r.add(r.mul(self.a, v.0), r.mul(self.b, v.1)),
            r.add(r.mul(self.c, v.0), r.mul(self.d, v.1)),
        )
    }

    pub fn pow(&self, r: &FiniteRing, e: u32) -> Mat2 {
        let mut acc = Mat2::identity(r);
        for _ in 0..e {
            acc = acc.mul(r, self);
        }
        acc
    }

    pub fn render(&self, r: &FiniteRing) -> String {
        format!(
            "[[{},{}],[{},{}]]",
            r.label(self.a),
            r.label(self.b),
            r.label(self.c),
            r.label(self.d)
        )
    }
}

/// E(x) = [[x,1],[-1,0]].
pub fn elem_e(r: &FiniteRing, x: Elem) -> Mat2 {
    Mat2::new(x, r.one(), r.neg_one(), r.zero())
}

/// w = E(0) = [[0,1],[-1,0]].
pub fn elem_w(r: &FiniteRing) -> Mat2 {
    elem_e(r, r.zero())
}

pub fn elem_e12(r: &FiniteRing, x: Elem) -> Mat2 {
    Mat2::new(r.one(), x, r.zero(), r.one())
}

pub fn elem_e21(r: &FiniteRing, x: Elem) -> Mat2 {
    Mat2::new(r.one(), r.zero(), x, r.one())
}

/// D(a) = diag(a, a^{-1}) for a unit a.
pub fn elem_d(r: &FiniteRing, a: Elem) -> Result<Mat2> {
    let ai = r.inv(a).ok_or(CoreError::NotAUnit(a))?;
    Ok(Mat2::new(a, r.zero(), r.zero(), ai))
}

/// Local factors (size, residue field size) of the ring; every finite
/// commutative ring here is a product of such.
fn local_factors(spec: &RingSpec) -> Vec<(u64, u64)> {
    match spec {
        RingSpec::ZMod(n) => factorize(*n)
            .into_iter()
            .map(|(p, k)| (p.pow(k), p))
            .collect(),
        RingSpec::Gf(q) => vec![(*q, *q)],
        RingSpec::Prod(parts) => parts.iter().flat_map(local_factors).collect(),
    }
}

/// |SL2(A)| = prod over local factors of m^3 (1 - q^{-2}).
pub fn sl2_expected_order(r: &FiniteRing) -> u128 {
    let mut total: u128 = 1;
    for (m, q) in local_factors(r.spec()) {
        let m = m as u128;
        let q = q as u128;
        total *= (m * m * m / (q * q)) * (q * q - 1);
    }
    total
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Sl2,
    E2,
    Sm2,
    T,
    B,
}

impl Which {
    pub fn name(&self) -> &'static str {
        match self {
            Which::Sl2 => "SL2",
            Which::E2 => "E2",
            Which::Sm2 => "SM2",
            Which::T => "T",
            Which::B => "B",
        }
    }
}

/// Elements above this count get on-the-fly products instead of a table.
const TABLE_CAP: usize = 1500;

/// A finite matrix group: canonically ordered elements, inverse table,
/// optional multiplication table, and the generator set used to build it.
pub struct GroupTable {
    elems: Vec<Mat2>,
    index: HashMap<Mat2, u32>,
    id: u32,
    inv: Vec<u32>,
    table: Option<Vec<u32>>,
    gens: Vec<u32>,
}

impl GroupTable {
    /// Closure is verified exhaustively while building the product table;
    /// above TABLE_CAP only generator translates are checked.
    pub fn new_checked(r: &FiniteRing, mut elems: Vec<Mat2>, gens: &[Mat2]) -> Result<Self> {
        elems.sort_unstable();
        elems.dedup();
        let n = elems.len();
        let mut index = HashMap::with_capacity(n);
        for (i, m) in elems.iter().enumerate() {
            if m.det(r) != r.one() {
                return Err(CoreError::Internal(format!(
                    "group element {} has determinant {}",
                    m.render(r),
                    r.label(m.det(r))
                )));
            }
            index.insert(*m, i as u32);
        }
        let id = *index
            .get(&Mat2::identity(r))
            .ok_or_else(|| CoreError::Internal("identity missing from group".into()))?;
        let mut inv = vec![0u32; n];
        for (i, m) in elems.iter().enumerate() {
            inv[i] = *index.get(&m.inv_det1(r)).ok_or_else(|| {
                CoreError::Internal(format!("inverse of {} missing", m.render(r)))
            })?;
        }
        let lookup = |m: &Mat2, index: &HashMap<Mat2, u32>| -> Result<u32> {
            index.get(m).copied().ok_or_else(|| {
                CoreError::Internal(format!("product {} escapes the set", m.render(r)))
            })
        };
        let table = if n <= TABLE_CAP {
            let mut t = vec![0u32; n * n];
            for (i, x) in elems.iter().enumerate() {
                for (j, y) in elems.iter().enumerate() {
                    t[i * n + j] = lookup(&x.mul(r, y), &index)?;
                }
            }
            Some(t)
        } else {
            for g in gens {
                for x in &elems {
                    lookup(&g.mul(r, x), &index)?;
                }
            }
            None
        };
        let mut gidx = Vec::with_capacity(gens.len());
        for g in gens {
            gidx.push(lookup(g, &index)?);
        }
        gidx.sort_unstable();
        gidx.dedup();
        Ok(GroupTable {
            elems,
            index,
            id,
            inv,
            table,
            gens: gidx,
        })
    }

    pub fn n(&self) -> usize {
        self.elems.len()
    }

    pub fn elems(&self) -> &[Mat2] {
        &self.elems
    }

    pub fn elem(&self, i: u32) -> &Mat2 {
        &self.elems[i as usize]
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn gens(&self) -> &[u32] {
        &self.gens
    }

    pub fn index_of(&self, m: &Mat2) -> Option<u32> {
        self.index.get(m).copied()
    }

    pub fn contains(&self, m: &Mat2) -> bool {
        self.index.contains_key(m)
    }

    pub fn mul(&self, r: &FiniteRing, i: u32, j: u32) -> u32 {
        match &self.table {
            Some(t) => t[i as usize * self.elems.len() + j as usize],
            None => self.index[&self.elems[i as usize].mul(r, &self.elems[j as usize])],
        }
    }

    pub fn inv(&self, i: u32) -> u32 {
        self.inv[i as usize]
    }

    pub fn elem_order(&self, r: &FiniteRing, i: u32) -> u32 {
        let mut k = 1;
        let mut acc = i;
        while acc != self.id {
            acc = self.mul(r, acc, i);
            k += 1;
        }
        k
    }

    /// Index in self of each element of sub; error if sub is not contained.
    pub fn embed_indices(&self, sub: &GroupTable) -> Result<Vec<u32>> {
        sub.elems
            .iter()
            .map(|m| {
                self.index_of(m).ok_or_else(|| {
                    CoreError::Internal("subgroup element missing from ambient group".into())
                })
            })
            .collect()
    }

    pub fn is_subgroup_of(&self, big: &GroupTable) -> bool {
        self.elems.iter().all(|m| big.contains(m))
    }
}

impl std::fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GroupTable(n = {})", self.n())
    }
}

fn enumerate_sl2(r: &FiniteRing) -> Vec<Mat2> {
    let n = r.size() as u32;
    let one = r.one();
    let mut out = Vec::new();
    for a in 0..n {
        if let Some(ai) = r.inv(a) {
            for b in 0..n {
                for c in 0..n {
                    let d = r.mul(ai, r.add(one, r.mul(b, c)));
                    out.push(Mat2::new(a, b, c, d));
                }
            }
        } else {
            // all d with a*d = v, indexed by v
            let mut sols: Vec<Vec<Elem>> = vec![Vec::new(); n as usize];
            for d in 0..n {
                sols[r.mul(a, d) as usize].push(d);
            }
            for b in 0..n {
                for c in 0..n {
                    let v = r.add(one, r.mul(b, c));
                    for &d in &sols[v as usize] {
                        out.push(Mat2::new(a, b, c, d));
                    }
                }
            }
        }
    }
    out
}

fn enumerate_e2(r: &FiniteRing) -> Vec<Mat2> {
    let gens: Vec<Mat2> = r.elements().map(|x| elem_e(r, x)).collect();
    let mut seen: HashMap<Mat2, ()> = HashMap::new();
    let mut queue = std::collections::VecDeque::new();
    let id = Mat2::identity(r);
    seen.insert(id, ());
    queue.push_back(id);
    while let Some(m) = queue.pop_front() {
        for g in &gens {
            let p = m.mul(r, g);
            if seen.insert(p, ()).is_none() {
                queue.push_back(p);
            }
        }
    }
    seen.into_keys().collect()
}

pub fn enumerate_group(r: &FiniteRing, which: Which, caps: &Caps) -> Result<GroupTable> {
    let expected = sl2_expected_order(r);
    if matches!(which, Which::Sl2 | Which::E2) && expected > caps.sl2_order as u128 {
        return Err(CoreError::CapExceeded {
            what: format!("{} enumeration over {}", which.name(), r.spec()),
            cap: caps.sl2_order,
            actual: expected.min(usize::MAX as u128) as usize,
        });
    }
    let units = r.units().to_vec();
    let d_gens: Vec<Mat2> = units.iter().map(|&a| elem_d(r, a).unwrap()).collect();
    let (elems, gens): (Vec<Mat2>, Vec<Mat2>) = match which {
        Which::Sl2 => {
            let elems = enumerate_sl2(r);
            (elems.clone(), elems)
        }
        Which::E2 => {
            let elems = enumerate_e2(r);
            let gens = r.elements().map(|x| elem_e(r, x)).collect();
            (elems, gens)
        }
        Which::Sm2 => {
            let w = elem_w(r);
            let mut elems = d_gens.clone();
            for d in &d_gens {
                elems.push(d.mul(r, &w));
            }
            let mut gens = d_gens;
            gens.push(w);
            (elems, gens)
        }
        Which::T => (d_gens.clone(), d_gens),
        Which::B => {
            let mut elems = Vec::with_capacity(units.len() * r.size());
            for &a in &units {
                let ai = r.inv(a).unwrap();
                for b in r.elements() {
                    elems.push(Mat2::new(a, b, r.zero(), ai));
                }
            }
            let mut gens = d_gens;
            gens.extend(r.elements().map(|x| elem_e12(r, x)));
            (elems, gens)
        }
    };
    GroupTable::new_checked(r, elems, &gens)
}

/// True iff the closure of {E(x)} is all of SL2.
pub fn is_ge2_ring(r: &FiniteRing, caps: &Caps) -> Result<bool> {
    let e2 = enumerate_group(r, Which::E2, caps)?;
    let sl2 = enumerate_group(r, Which::Sl2, caps)?;
    Ok(e2.n() == sl2.n())
}

/// Exhaustive below this ring size; deterministic stride sample above.
const RELATION_EXHAUSTIVE_CAP: usize = 64;

#[derive(Clone, Debug)]
pub struct Ge2Report {
    pub ring: String,
    pub exhaustive: bool,
    pub pairs_checked: [usize; 3],
    pub failures: Vec<String>,
}

impl Ge2Report {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn sample(all: &[Elem], cap: usize) -> Vec<Elem> {
    if all.len() <= cap {
        return all.to_vec();
    }
    let stride = all.len().div_ceil(cap);
    all.iter().step_by(stride).copied().collect()
}

/// Checks the three defining relations of GE2:
///   (1) E(x)E(0)E(y) = D(-1)E(x+y)
///   (2) E(x)D(a) = D(a^{-1})E(a^2 x)
///   (3) D(a)D(b) = D(ab)
pub fn verify_ge2_relations(r: &FiniteRing) -> Ge2Report {
    let exhaustive = r.size() <= RELATION_EXHAUSTIVE_CAP;
    let all: Vec<Elem> = r.elements().collect();
    let xs = sample(&all, RELATION_EXHAUSTIVE_CAP);
    let us = sample(r.units(), RELATION_EXHAUSTIVE_CAP);
    let mut failures = Vec::new();
    let mut pairs = [0usize; 3];
    let w = elem_w(r);
    let d_neg1 = elem_d(r, r.neg_one()).unwrap();
    for &x in &xs {
        for &y in &xs {
            pairs[0] += 1;
            let lhs = elem_e(r, x).mul(r, &w).mul(r, &elem_e(r, y));
            let rhs = d_neg1.mul(r, &elem_e(r, r.add(x, y)));
            if lhs != rhs {
                failures.push(format!(
                    "relation (1) fails at x={}, y={}",
                    r.label(x),
                    r.label(y)
                ));
            }
        }
    }
    for &x in &xs {
        for &a in &us {
            pairs[1] += 1;
            let ai = r.inv(a).unwrap();
            let lhs = elem_e(r, x).mul(r, &elem_d(r, a).unwrap());
            let rhs = elem_d(r, ai)
                .unwrap()
                .mul(r, &elem_e(r, r.mul(r.sq(a), x)));
            if lhs != rhs {
                failures.push(format!(
                    "relation (2) fails at x={}, a={}",
                    r.label(x),
                    r.label(a)
                ));
            }
        }
    }
    for &a in &us {
        for &b in &us {
            pairs[2] += 1;
            let lhs = elem_d(r, a).unwrap().mul(r, &elem_d(r, b).unwrap());
            let rhs = elem_d(r, r.mul(a, b)).unwrap();
            if lhs != rhs {
                failures.push(format!(
                    "relation (3) fails at a={}, b={}",
                    r.label(a),
                    r.label(b)
                ));
            }
        }
    }
    Ge2Report {
        ring: r.spec().to_string(),
        exhaustive,
        pairs_checked: pairs,
        failures,
    }
}
