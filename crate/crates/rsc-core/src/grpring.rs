//! The square class group G = A*/(A*)^2, the integer group ring Z[G], the
//! elements <<a>> = <a> - 1 and p = <-1> + 1, the augmentation ideal and its
//! square, and presentations of Z[G]-modules flattened to abelian groups.
//!
//! G is elementary abelian 2, so classes are encoded as bitmasks over a basis
//! extracted from the unit group generators of even order; class products are
//! XOR and group-ring multiplication is XOR convolution.

use crate::abgrp::{AbMorphism, DenseMat, FpAbelianGroup, Int};
use crate::ring::{Elem, FiniteRing, UnitGroup};
use crate::{CoreError, Result};
use num_traits::Zero;

/// A*/(A*)^2 with bitmask class encoding. Class 0 is the square class of 1.
pub struct SquareClassGroup {
    nbits: usize,
    /// least unit representative per class
    reps: Vec<Elem>,
    /// class per ring element, u32::MAX on non-units
    class_map: Vec<u32>,
    neg_one_class: u32,
    /// units whose classes form the bitmask basis
    basis_units: Vec<Elem>,
}

pub fn square_class_group(ring: &FiniteRing, units: &UnitGroup) -> SquareClassGroup {
    SquareClassGroup::new(ring, units)
}

impl SquareClassGroup {
    pub fn new(ring: &FiniteRing, units: &UnitGroup) -> Self {
        // generators of even order survive in A*/(A*)^2; odd-order ones die
        let even: Vec<usize> = units
            .orders()
            .iter()
            .enumerate()
            .filter(|(_, o)| *o % 2 == 0)
            .map(|(i, _)| i)
            .collect();
        let nbits = even.len();
        assert!(nbits < 31, "square class group too large");
        let basis_units: Vec<Elem> = even.iter().map(|&i| units.gens()[i]).collect();
        let mut class_map = vec![u32::MAX; ring.size()];
        let mut reps = vec![Elem::MAX; 1 << nbits];
        for &u in ring.units() {
            let d = units.dlog(u).expect("unit has a discrete log");
            let mut cls = 0u32;
            for (bit, &i) in even.iter().enumerate() {
                if d[i] % 2 == 1 {
                    cls |= 1 << bit;
                }
            }
            class_map[u as usize] = cls;
            if u < reps[cls as usize] {
                reps[cls as usize] = u;
            }
        }
        let neg_one_class = class_map[ring.neg_one() as usize];
        SquareClassGroup {
            nbits,
            reps,
            class_map,
            neg_one_class,
            basis_units,
        }
    }

    pub fn order(&self) -> usize {
        1 << self.nbits
    }

    pub fn nbits(&self) -> usize {
        self.nbits
    }

    pub fn basis_units(&self) -> &[Elem] {
        &self.basis_units
    }

    pub fn classes(&self) -> impl Iterator<Item = u32> {
        0..(1u32 << self.nbits)
    }

    pub fn class_of(&self, a: Elem) -> Result<u32> {
        let c = self.class_map[a as usize];
        if c == u32::MAX {
            return Err(CoreError::NotAUnit(a));
        }
        Ok(c)
    }

    /// Least unit representative of a class.
    pub fn rep(&self, cls: u32) -> Elem {
        self.reps[cls as usize]
    }

    pub fn neg_one_class(&self) -> u32 {
        self.neg_one_class
    }

    pub fn zero_elem(&self) -> GroupRingElem {
        GroupRingElem::zero(self.order())
    }

    pub fn one_elem(&self) -> GroupRingElem {
        GroupRingElem::basis(self.order(), 0)
    }

    /// The group-like element <a> for a unit a.
    pub fn gen_elem(&self, a: Elem) -> Result<GroupRingElem> {
        Ok(GroupRingElem::basis(self.order(), self.class_of(a)?))
    }

    /// <<a>> = <a> - 1.
    pub fn bracket(&self, a: Elem) -> Result<GroupRingElem> {
        let mut e = self.gen_elem(a)?;
        e.coeffs[0] -= 1;
        Ok(e)
    }

    /// p = <-1> + 1.
    pub fn p_minus_one_plus(&self) -> GroupRingElem {
        let mut e = GroupRingElem::basis(self.order(), self.neg_one_class);
        e.coeffs[0] += 1;
        e
    }
}

impl std::fmt::Debug for SquareClassGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SquareClassGroup(order {})", self.order())
    }
}

/// Element of Z[G]: one integer coefficient per class index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingElem {
    pub coeffs: Vec<Int>,
}

impl GroupRingElem {
    pub fn zero(order: usize) -> Self {
        GroupRingElem {
            coeffs: vec![Int::zero(); order],
        }
    }

    pub fn basis(order: usize, cls: u32) -> Self {
        let mut e = GroupRingElem::zero(order);
        e.coeffs[cls as usize] = Int::from(1);
        e
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &GroupRingElem) -> GroupRingElem {
        GroupRingElem {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, o: &GroupRingElem) -> GroupRingElem {
        GroupRingElem {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> GroupRingElem {
        GroupRingElem {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, k: &Int) -> GroupRingElem {
        GroupRingElem {
            coeffs: self.coeffs.iter().map(|a| a * k).collect(),
        }
    }

    /// XOR convolution: classes multiply as an elementary abelian 2-group.
    pub fn mul(&self, o: &GroupRingElem) -> GroupRingElem {
        assert_eq!(self.order(), o.order());
        let mut out = GroupRingElem::zero(self.order());
        for (a, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in o.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                out.coeffs[a ^ b] += x * y;
            }
        }
        out
    }

    /// Multiplication by the class c.
    pub fn translate(&self, c: u32) -> GroupRingElem {
        let mut out = GroupRingElem::zero(self.order());
        for (a, x) in self.coeffs.iter().enumerate() {
            out.coeffs[a ^ c as usize] = x.clone();
        }
        out
    }

    /// Coefficient sum; group ring -> Z killing all classes.
    pub fn augmentation(&self) -> Int {
        self.coeffs.iter().sum()
    }

    /// Formal-sum rendering with classes named by least representative;
    /// positive terms come first.
    pub fn render(&self, g: &SquareClassGroup, ring: &FiniteRing) -> String {
        let mut terms: Vec<(usize, &Int)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .collect();
        terms.sort_by_key(|(c, x)| (x.sign() == num_bigint::Sign::Minus, *c));
        let mut out = String::new();
        for (c, x) in terms {
            if out.is_empty() {
                if x.sign() == num_bigint::Sign::Minus {
                    out.push('−');
                }
            } else if x.sign() == num_bigint::Sign::Minus {
                out.push_str(" − ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&format!(
                "{}·⟨{}⟩",
                x.magnitude(),
                ring.label(g.rep(c as u32))
            ));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// Z[G] as a free abelian group on the class basis.
pub fn group_ring_group(g: &SquareClassGroup) -> FpAbelianGroup {
    FpAbelianGroup::free(g.order())
}

/// The augmentation ideal I, free on {<<g>> : g != 1}, with its inclusion
/// into Z[G]. Class index c >= 1 corresponds to basis vector <<c>>.
pub fn augmentation_ideal(g: &SquareClassGroup) -> (FpAbelianGroup, AbMorphism) {
    let n = g.order();
    let ideal = FpAbelianGroup::free(n - 1);
    let mut mat = DenseMat::zero(n, n - 1);
    for c in 1..n {
        mat.set(c, c - 1, Int::from(1));
        mat.set(0, c - 1, Int::from(-1));
    }
    let incl = AbMorphism::new(ideal.clone(), group_ring_group(g), mat)
        .expect("free source has no relations");
    (ideal, incl)
}

/// Coordinates of an augmentation-zero element over the <<g>> basis of I.
pub fn into_ideal_coords(e: &GroupRingElem) -> Result<Vec<Int>> {
    if !e.augmentation().is_zero() {
        return Err(CoreError::Internal(
            "element has nonzero augmentation, not in I".into(),
        ));
    }
    Ok(e.coeffs[1..].to_vec())
}

/// I^2 as a subgroup of I, spanned by the pairwise products <<g>><<h>>,
/// with its inclusion into the free group I.
pub fn power_ideal_squared(g: &SquareClassGroup) -> (FpAbelianGroup, AbMorphism) {
    let n = g.order();
    let (ideal, _) = augmentation_ideal(g);
    let mut prods: Vec<Vec<Int>> = Vec::new();
    for a in 1..n as u32 {
        for b in a..n as u32 {
            let pa = GroupRingElem::basis(n, a).sub(&GroupRingElem::basis(n, 0));
            let pb = GroupRingElem::basis(n, b).sub(&GroupRingElem::basis(n, 0));
            prods.push(into_ideal_coords(&pa.mul(&pb)).expect("products lie in I"));
        }
    }
    let free = FpAbelianGroup::free(prods.len());
    let span = AbMorphism::new(
        free,
        ideal,
        DenseMat::from_cols(n - 1, &prods),
    )
    .expect("free source has no relations");
    span.image().expect("image of a free group")
}

/// Presentation of a Z[G]-module: abstract generators and relations with
/// group-ring coefficients. Flattening emits each relation once per class and
/// yields an abelian group on (class, generator) pairs.
pub struct GModulePresentation {
    ngens: usize,
    rels: Vec<Vec<GroupRingElem>>,
    order: usize,
}

impl GModulePresentation {
    pub fn new(order: usize, ngens: usize, rels: Vec<Vec<GroupRingElem>>) -> Self {
        for r in &rels {
            assert_eq!(r.len(), ngens);
            for e in r {
                assert_eq!(e.order(), order);
            }
        }
        GModulePresentation { ngens, rels, order }
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn nrels(&self) -> usize {
        self.rels.len()
    }

    pub fn flat_dim(&self) -> usize {
        self.ngens * self.order
    }

    /// Integer generator index of class c acting on abstract generator j.
    pub fn flat_index(&self, j: usize, c: u32) -> usize {
        j * self.order + c as usize
    }

    pub fn flatten_elem(&self, elem: &[GroupRingElem]) -> Vec<Int> {
        assert_eq!(elem.len(), self.ngens);
        let mut out = vec![Int::zero(); self.flat_dim()];
        for (j, e) in elem.iter().enumerate() {
            for (c, x) in e.coeffs.iter().enumerate() {
                out[self.flat_index(j, c as u32)] = x.clone();
            }
        }
        out
    }

    /// The class action on flattened coordinates (a permutation).
    pub fn act_flat(&self, c: u32, v: &[Int]) -> Vec<Int> {
        assert_eq!(v.len(), self.flat_dim());
        let mut out = vec![Int::zero(); v.len()];
        for j in 0..self.ngens {
            for d in 0..self.order as u32 {
                out[self.flat_index(j, d ^ c)] = v[self.flat_index(j, d)].clone();
            }
        }
        out
    }

    /// Quotient of the free module by all class translates of the relations.
    pub fn flatten(&self) -> FpAbelianGroup {
        let mut cols: Vec<Vec<Int>> = Vec::with_capacity(self.rels.len() * self.order);
        for r in &self.rels {
            for c in 0..self.order as u32 {
                let translated: Vec<GroupRingElem> =
                    r.iter().map(|e| e.translate(c)).collect();
                cols.push(self.flatten_elem(&translated));
            }
        }
        FpAbelianGroup::new(self.flat_dim(), DenseMat::from_cols(self.flat_dim(), &cols))
    }

    /// Flatten a module map given by generator images into an integer matrix
    /// acting on flattened coordinates. `images[j]` lives in the target.
    pub fn flatten_map(&self, target: &GModulePresentation, images: &[Vec<GroupRingElem>]) -> DenseMat {
        assert_eq!(images.len(), self.ngens);
        assert_eq!(target.order, self.order);
        let mut cols: Vec<Vec<Int>> = Vec::with_capacity(self.flat_dim());
        for j in 0..self.ngens {
            for c in 0..self.order as u32 {
                let translated: Vec<GroupRingElem> =
                    images[j].iter().map(|e| e.translate(c)).collect();
                cols.push(target.flatten_elem(&translated));
            }
        }
        DenseMat::from_cols(target.flat_dim(), &cols)
    }
}
