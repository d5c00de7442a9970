//! Presented (generators-and-relations) models of the scissors-congruence
//! machinery: the refined pre-Bloch group RP̄(A) with its lambda map and the
//! subgroup RP̄₁(A), the Grothendieck-Witt chain ḠW(A) ⊇ Ī(A) with the Witt
//! quotient W(A) and the filtration step Ī², Milnor-Witt K₁ as a fiber
//! product, the map Θ into Λ²(A*) ⊕ S²(A*), and the square-class/µ₂ pairing
//! whose kernel is bounded for fields.
//!
//! Everything here is finitely presented over Z and exact; the companion
//! coinvariant models computed from the unimodular-vector complex live in
//! `unimod`, and the two sides are compared there.

use std::collections::HashMap;

use crate::abgrp::{
    fiber_product, is_exact_at, sym2_square, tensor_product, wedge_square, AbMorphism, DenseMat,
    FpAbelianGroup, Int,
};
use crate::grpring::{group_ring_group, into_ideal_coords, GModulePresentation, GroupRingElem, SquareClassGroup};
use crate::ring::{Elem, FiniteRing, UnitGroup};
use crate::{CoreError, Result};
use num_traits::Zero;

/// `true` exactly when the unit group misses only zero.
pub fn is_field(ring: &FiniteRing) -> bool {
    ring.units().len() == ring.size() - 1
}

fn dlog_int(units: &UnitGroup, u: Elem) -> Vec<Int> {
    units
        .dlog(u)
        .expect("unit expected")
        .iter()
        .map(|&e| Int::from(e))
        .collect()
}

/// The square-class group as a plain abelian group, (Z/2)^nbits on the
/// square-class basis bits.
fn square_class_f2_group(sq: &SquareClassGroup) -> FpAbelianGroup {
    let n = sq.nbits();
    let mut rels = DenseMat::zero(n, n);
    for i in 0..n {
        rels.set(i, i, Int::from(2));
    }
    FpAbelianGroup::new(n, rels)
}

/// The presented refined pre-Bloch group: the free Z[G_A]-module on symbols
/// [x], x in W_A, modulo the G_A-translates of the five-term relations, with
/// the lambda map [x] -> -<<x>><<1-x>> into Z[G_A].
pub struct RpBar {
    ring: FiniteRing,
    units: UnitGroup,
    sq: SquareClassGroup,
    w: Vec<Elem>,
    windex: HashMap<Elem, usize>,
    pairs: Vec<(Elem, Elem)>,
    pres: GModulePresentation,
    group: FpAbelianGroup,
    lambda: AbMorphism,
    rp1: FpAbelianGroup,
    rp1_incl: AbMorphism,
}

impl RpBar {
    pub fn new(ring: &FiniteRing) -> Result<Self> {
        let units = UnitGroup::new(ring);
        let sq = SquareClassGroup::new(ring, &units);
        let w = ring.w_set();
        let windex: HashMap<Elem, usize> = w.iter().enumerate().map(|(j, &x)| (x, j)).collect();

        // Ordered pairs (x, y) with x, y, x/y all admissible; x = y is
        // excluded automatically since 1 - x/y must be a unit.
        let mut pairs = Vec::new();
        for &x in &w {
            for &y in &w {
                let ratio = ring.mul(x, ring.inv(y).expect("W elements are units"));
                if windex.contains_key(&ratio) {
                    pairs.push((x, y));
                }
            }
        }

        let mut rels = Vec::with_capacity(pairs.len());
        for &(x, y) in &pairs {
            rels.push(five_term(ring, &sq, &windex, w.len(), x, y)?);
        }
        let pres = GModulePresentation::new(sq.order(), w.len(), rels);
        let group = pres.flatten();

        // lambda on the flat generator <c>[x] is the translate by c of
        // -<<x>><<1-x>>; the morphism constructor verifies it kills every
        // relation, which is the well-definedness claim.
        let zg = group_ring_group(&sq);
        let mut cols = Vec::with_capacity(pres.flat_dim());
        for &x in &w {
            let one_minus = ring.sub(ring.one(), x);
            let lam = sq.bracket(x)?.mul(&sq.bracket(one_minus)?).neg();
            for c in sq.classes() {
                cols.push(lam.translate(c).coeffs.clone());
            }
        }
        let lambda = AbMorphism::new(
            group.clone(),
            zg,
            DenseMat::from_cols(sq.order(), &cols),
        )?;
        let (rp1, rp1_incl) = lambda.kernel()?;

        Ok(RpBar {
            ring: ring.clone(),
            units,
            sq,
            w,
            windex,
            pairs,
            pres,
            group,
            lambda,
            rp1,
            rp1_incl,
        })
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn units(&self) -> &UnitGroup {
        &self.units
    }

    pub fn sq(&self) -> &SquareClassGroup {
        &self.sq
    }

    /// The admissible symbols, i.e. W_A in element order.
    pub fn w_symbols(&self) -> &[Elem] {
        &self.w
    }

    /// Ordered five-term index pairs.
    pub fn pairs(&self) -> &[(Elem, Elem)] {
        &self.pairs
    }

    pub fn presentation(&self) -> &GModulePresentation {
        &self.pres
    }

    /// RP̄(A) as a flattened abelian group on |G_A|·|W_A| generators.
    pub fn group(&self) -> &FpAbelianGroup {
        &self.group
    }

    pub fn lambda(&self) -> &AbMorphism {
        &self.lambda
    }

    /// RP̄₁(A) = ker(lambda) with its inclusion.
    pub fn rp1(&self) -> &FpAbelianGroup {
        &self.rp1
    }

    pub fn rp1_incl(&self) -> &AbMorphism {
        &self.rp1_incl
    }

    fn symbol_index(&self, x: Elem) -> Result<usize> {
        self.windex.get(&x).copied().ok_or(CoreError::NotInW(x))
    }

    /// Flat coordinates of the generator <c>[x].
    pub fn symbol(&self, c: u32, x: Elem) -> Result<Vec<Int>> {
        let j = self.symbol_index(x)?;
        let mut v = vec![Int::zero(); self.pres.flat_dim()];
        v[self.pres.flat_index(j, c)] = Int::from(1);
        Ok(v)
    }

    /// psi1(a) = [a] + <-1>[a^-1], in flat coordinates. Requires a in W_A.
    pub fn psi1(&self, a: Elem) -> Result<Vec<Int>> {
        let ja = self.symbol_index(a)?;
        let inv = self.ring.inv(a).ok_or(CoreError::NotAUnit(a))?;
        let jinv = self.symbol_index(inv)?;
        let mut sym = vec![GroupRingElem::zero(self.sq.order()); self.w.len()];
        sym[ja] = sym[ja].add(&self.sq.one_elem());
        sym[jinv] = sym[jinv].add(&GroupRingElem::basis(self.sq.order(), self.sq.neg_one_class()));
        Ok(self.pres.flatten_elem(&sym))
    }

    /// g(a) = p_{-1}^+ [a] + <<1-a>> psi1(a), in flat coordinates.
    pub fn g_elem(&self, a: Elem) -> Result<Vec<Int>> {
        let ja = self.symbol_index(a)?;
        let inv = self.ring.inv(a).ok_or(CoreError::NotAUnit(a))?;
        let jinv = self.symbol_index(inv)?;
        let br = self.sq.bracket(self.ring.sub(self.ring.one(), a))?;
        let mut sym = vec![GroupRingElem::zero(self.sq.order()); self.w.len()];
        sym[ja] = sym[ja].add(&self.sq.p_minus_one_plus().add(&br));
        sym[jinv] = sym[jinv].add(&br.translate(self.sq.neg_one_class()));
        Ok(self.pres.flatten_elem(&sym))
    }

    /// lambda of a flat element, as a group-ring element.
    pub fn lambda_elem(&self, v: &[Int]) -> GroupRingElem {
        GroupRingElem {
            coeffs: self.lambda.apply(v),
        }
    }

    /// Membership of a flat element in RP̄₁ = ker(lambda).
    pub fn in_rp1(&self, v: &[Int]) -> bool {
        self.lambda.dst().is_zero_elt(&self.lambda.apply(v))
    }

    /// Coordinates of a flat element over the RP̄₁ presentation, when it lies
    /// in the kernel.
    pub fn rp1_coords(&self, v: &[Int]) -> Option<Vec<Int>> {
        if !self.in_rp1(v) {
            return None;
        }
        self.rp1_incl.solve(v)
    }

    /// "⟨g⟩[x]" rendering of a flat generator.
    pub fn render_symbol(&self, c: u32, x: Elem) -> String {
        format!(
            "⟨{}⟩[{}]",
            self.ring.label(self.sq.rep(c)),
            self.ring.label(x)
        )
    }

    /// One CSV row per flattened relation; columns are the flat generators.
    pub fn relations_csv(&self) -> String {
        let mut out = String::new();
        let mut header: Vec<String> = Vec::with_capacity(self.pres.flat_dim());
        for &x in &self.w {
            for c in self.sq.classes() {
                header.push(self.render_symbol(c, x));
            }
        }
        out.push_str(&header.join(","));
        out.push('\n');
        let rels = self.group.rels();
        for j in 0..rels.cols() {
            let col = rels.col(j);
            let row: Vec<String> = (0..self.w.len())
                .flat_map(|i| {
                    let pres = &self.pres;
                    let col = &col;
                    self.sq
                        .classes()
                        .map(move |c| col[pres.flat_index(i, c)].to_string())
                })
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// The five-term boundary relation attached to an admissible pair (x, y),
/// as Z[G_A]-coefficients over the symbols. Coefficients are evaluated
/// verbatim; the arguments of all five symbols stay inside W_A.
pub(crate) fn five_term(
    ring: &FiniteRing,
    sq: &SquareClassGroup,
    windex: &HashMap<Elem, usize>,
    nsym: usize,
    x: Elem,
    y: Elem,
) -> Result<Vec<GroupRingElem>> {
    let one = ring.one();
    let xi = ring.inv(x).ok_or(CoreError::NotAUnit(x))?;
    let yi = ring.inv(y).ok_or(CoreError::NotAUnit(y))?;
    let arg3 = ring.mul(y, xi);
    let n4 = ring.sub(one, xi);
    let d4 = ring.sub(one, yi);
    let arg4 = ring.mul(n4, ring.inv(d4).ok_or(CoreError::NotAUnit(d4))?);
    let n5 = ring.sub(one, x);
    let d5 = ring.sub(one, y);
    let arg5 = ring.mul(n5, ring.inv(d5).ok_or(CoreError::NotAUnit(d5))?);

    let idx = |a: Elem| -> Result<usize> {
        windex
            .get(&a)
            .copied()
            .ok_or_else(|| CoreError::Internal(format!("five-term argument {} escapes W", ring.label(a))))
    };
    let mut rel = vec![GroupRingElem::zero(sq.order()); nsym];
    let mut add = |j: usize, t: GroupRingElem| {
        rel[j] = rel[j].add(&t);
    };
    add(idx(x)?, sq.one_elem());
    add(idx(y)?, sq.one_elem().neg());
    add(idx(arg3)?, sq.gen_elem(x)?);
    add(idx(arg4)?, sq.gen_elem(ring.sub(xi, one))?.neg());
    add(idx(arg5)?, sq.gen_elem(n5)?);
    Ok(rel)
}

/// The presented Grothendieck-Witt chain: ḠW(A) = Z[G_A] modulo the
/// translated products <<a>><<1-a>>, its augmentation, the fundamental ideal
/// Ī(A) with Ī² and Ī/Ī², and the Witt quotient W(A).
pub struct WittData {
    pub units: UnitGroup,
    pub sq: SquareClassGroup,
    pub gw_bar: FpAbelianGroup,
    /// Augmentation ḠW -> Z.
    pub eps_bar: AbMorphism,
    /// Ī(A) on the nonzero-class bracket basis.
    pub i_bar: FpAbelianGroup,
    /// Ī -> ḠW, basis class c -> <c> - <1>.
    pub i_bar_incl: AbMorphism,
    /// W(A) = ḠW / <p_{-1}^+> with its projection.
    pub witt: FpAbelianGroup,
    pub witt_proj: AbMorphism,
    /// Ī² as the image of the pairwise bracket products, inside Ī.
    pub i_bar_sq: FpAbelianGroup,
    pub i_bar_sq_incl: AbMorphism,
    pub i_mod_i2: FpAbelianGroup,
    pub i_mod_i2_proj: AbMorphism,
}

pub fn witt_data(ring: &FiniteRing) -> Result<WittData> {
    let units = UnitGroup::new(ring);
    let sq = SquareClassGroup::new(ring, &units);
    let order = sq.order();
    let w = ring.w_set();

    let mut products = Vec::with_capacity(w.len());
    for &a in &w {
        let p = sq.bracket(a)?.mul(&sq.bracket(ring.sub(ring.one(), a))?);
        products.push(p);
    }

    let gw_rels: Vec<Vec<GroupRingElem>> = products.iter().map(|p| vec![p.clone()]).collect();
    let gw_bar = GModulePresentation::new(order, 1, gw_rels.clone()).flatten();

    let mut witt_rels = gw_rels;
    witt_rels.push(vec![sq.p_minus_one_plus()]);
    let witt = GModulePresentation::new(order, 1, witt_rels).flatten();
    let witt_proj = AbMorphism::new(gw_bar.clone(), witt.clone(), DenseMat::identity(order))?;

    let eps_bar = AbMorphism::new(
        gw_bar.clone(),
        FpAbelianGroup::free(1),
        DenseMat::from_fn(1, order, |_, _| Int::from(1)),
    )?;

    // Ī: coordinates are the nonzero square classes; every translated
    // product has augmentation zero, so it lives there.
    let mut i_rels = Vec::new();
    for p in &products {
        for c in sq.classes() {
            i_rels.push(into_ideal_coords(&p.translate(c))?);
        }
    }
    let i_bar = FpAbelianGroup::new(order - 1, DenseMat::from_cols(order - 1, &i_rels));
    let mut incl_cols = Vec::with_capacity(order - 1);
    for c in 1..order as u32 {
        let mut v = vec![Int::zero(); order];
        v[c as usize] = Int::from(1);
        v[0] = Int::from(-1);
        incl_cols.push(v);
    }
    let i_bar_incl = AbMorphism::new(
        i_bar.clone(),
        gw_bar.clone(),
        DenseMat::from_cols(order, &incl_cols),
    )?;

    // Ī² from all pairwise products of basis brackets.
    let mut sq_cols = Vec::new();
    for cu in 1..order as u32 {
        for cv in 1..order as u32 {
            let p = sq.bracket(sq.rep(cu))?.mul(&sq.bracket(sq.rep(cv))?);
            sq_cols.push(into_ideal_coords(&p)?);
        }
    }
    let span = AbMorphism::new(
        FpAbelianGroup::free(sq_cols.len()),
        i_bar.clone(),
        DenseMat::from_cols(order - 1, &sq_cols),
    )?;
    let (i_bar_sq, i_bar_sq_incl) = span.image()?;
    let (i_mod_i2, i_mod_i2_proj) = i_bar_sq_incl.cokernel()?;

    Ok(WittData {
        units,
        sq,
        gw_bar,
        eps_bar,
        i_bar,
        i_bar_incl,
        witt,
        witt_proj,
        i_bar_sq,
        i_bar_sq_incl,
        i_mod_i2,
        i_mod_i2_proj,
    })
}

/// Milnor-Witt K₁ as the pullback of A* -> Ī/Ī² (a -> <<a>>) against
/// Ī -> Ī/Ī², together with the exactness checks of the two short sequences
/// it must fit in.
pub struct MwK1Data {
    pub group: FpAbelianGroup,
    pub to_units: AbMorphism,
    pub to_ibar: AbMorphism,
    /// The defining square commutes on every generator.
    pub square_commutes: bool,
    /// 0 -> Ī² -> K₁^MW -> A* -> 0.
    pub mw1_exact: bool,
    /// 0 -> 2A* -> K₁^MW -> Ī -> 0.
    pub mw2_exact: bool,
}

pub fn k1mw(ring: &FiniteRing, wd: &WittData) -> Result<MwK1Data> {
    if wd.units.order() != ring.units().len() {
        return Err(CoreError::Internal(
            "Witt data belongs to a different ring".into(),
        ));
    }
    let units_grp = wd.units.group().clone();
    let q = &wd.i_mod_i2;

    // a -> <<a>> mod Ī²; a homomorphism because <<ab>> - <<a>> - <<b>> is a
    // bracket product.
    let mut f_cols = Vec::with_capacity(units_grp.gens());
    for &g in wd.units.gens() {
        let br = into_ideal_coords(&wd.sq.bracket(g)?)?;
        f_cols.push(wd.i_mod_i2_proj.apply(&br));
    }
    let f = AbMorphism::new(
        units_grp.clone(),
        q.clone(),
        DenseMat::from_cols(q.gens(), &f_cols),
    )?;
    let (group, to_units, to_ibar) = fiber_product(&f, &wd.i_mod_i2_proj)?;

    let square_commutes = {
        let left = f.compose(&to_units)?;
        let right = wd.i_mod_i2_proj.compose(&to_ibar)?;
        (0..group.gens()).all(|j| q.elts_equal(&left.mat().col(j), &right.mat().col(j)))
    };

    // Solving in the product A* (+) Ī recovers fiber coordinates.
    let ambient = units_grp.direct_sum(&wd.i_bar);
    let pair_mat = to_units.mat().vstack(to_ibar.mat());
    let into_fiber = AbMorphism::new(group.clone(), ambient.clone(), pair_mat)?;
    let solve_pair = |u: &[Int], z: &[Int]| -> Result<Vec<Int>> {
        let mut v = u.to_vec();
        v.extend_from_slice(z);
        into_fiber
            .solve(&v)
            .ok_or_else(|| CoreError::Internal("pair escapes the fiber product".into()))
    };

    // Ī² -> K₁^MW, z -> (0, z).
    let zero_u = vec![Int::zero(); units_grp.gens()];
    let mut m1_cols = Vec::with_capacity(wd.i_bar_sq.gens());
    for j in 0..wd.i_bar_sq.gens() {
        m1_cols.push(solve_pair(&zero_u, &wd.i_bar_sq_incl.mat().col(j))?);
    }
    let m1 = AbMorphism::new(
        wd.i_bar_sq.clone(),
        group.clone(),
        DenseMat::from_cols(group.gens(), &m1_cols),
    )?;

    // A* -> K₁^MW, u -> (2u, 0); lands in the fiber since 2<<u>> = <<u²>>
    // modulo Ī².
    let zero_z = vec![Int::zero(); wd.i_bar.gens()];
    let mut m2_cols = Vec::with_capacity(units_grp.gens());
    for k in 0..units_grp.gens() {
        let mut u = vec![Int::zero(); units_grp.gens()];
        u[k] = Int::from(2);
        m2_cols.push(solve_pair(&u, &zero_z)?);
    }
    let m2 = AbMorphism::new(
        units_grp.clone(),
        group.clone(),
        DenseMat::from_cols(group.gens(), &m2_cols),
    )?;

    let mw1_exact =
        m1.is_injective()? && is_exact_at(&m1, &to_units)? && to_units.is_surjective()?;
    let mw2_exact = is_exact_at(&m2, &to_ibar)? && to_ibar.is_surjective()?;

    Ok(MwK1Data {
        group,
        to_units,
        to_ibar,
        square_commutes,
        mw1_exact,
        mw2_exact,
    })
}

/// Θ: RP̄(A) -> Λ²(A*) ⊕ S²(A*), generator-wise <c>[x] -> (x∧(1-x), -x⊙(1-x))
/// with the coefficient acting trivially on the target.
pub struct ThetaData {
    pub target: FpAbelianGroup,
    pub map: AbMorphism,
    /// Slot count of the Λ² block inside the target coordinates.
    pub wedge_len: usize,
    /// Θ(g(a)) = 2(a∧(1-a), -a⊙(1-a)) held for every a in W_A.
    pub g_identity: bool,
}

pub fn theta(rp: &RpBar) -> Result<ThetaData> {
    let ring = rp.ring();
    let ug = rp.units().group();
    let (wg, pw) = wedge_square(ug);
    let (sg, ps) = sym2_square(ug);
    let target = wg.direct_sum(&sg);

    let image_of = |x: Elem| -> (Vec<Int>, Vec<Int>) {
        let dx = dlog_int(rp.units(), x);
        let d1x = dlog_int(rp.units(), ring.sub(ring.one(), x));
        (pw.eval(&dx, &d1x), ps.eval(&dx, &d1x))
    };

    let mut cols = Vec::with_capacity(rp.presentation().flat_dim());
    for &x in rp.w_symbols() {
        let (wpart, spart) = image_of(x);
        let mut col = wpart;
        col.extend(spart.iter().map(|v| -v.clone()));
        for _c in rp.sq().classes() {
            cols.push(col.clone());
        }
    }
    let map = AbMorphism::new(
        rp.group().clone(),
        target.clone(),
        DenseMat::from_cols(target.gens(), &cols),
    )
    .map_err(|e| {
        CoreError::Internal(format!("theta is not well-defined on {}: {e}", ring.spec()))
    })?;

    let mut g_identity = true;
    for &a in rp.w_symbols() {
        let lhs = map.apply(&rp.g_elem(a)?);
        let (wpart, spart) = image_of(a);
        let mut rhs: Vec<Int> = wpart.iter().map(|v| v.clone() * 2).collect();
        rhs.extend(spart.iter().map(|v| v.clone() * -2));
        if !target.elts_equal(&lhs, &rhs) {
            g_identity = false;
        }
    }

    Ok(ThetaData {
        target,
        map,
        wedge_len: pw.len(),
        g_identity,
    })
}

/// The pairing G_A ⊗ µ₂(A) -> Λ²(A*), <a> ⊗ b -> a∧b, with its kernel.
/// For a field the kernel has at most two elements; a larger kernel on a
/// field is reported as a fatal inconsistency.
pub struct Z2KernelData {
    pub domain: FpAbelianGroup,
    pub kernel: FpAbelianGroup,
    pub kernel_order: Int,
    pub is_field: bool,
}

pub fn z2_kernel(ring: &FiniteRing) -> Result<Z2KernelData> {
    let units = UnitGroup::new(ring);
    let sq = SquareClassGroup::new(ring, &units);
    let n = sq.nbits();
    let ga = square_class_f2_group(&sq);

    // µ₂ is generated by the half-order powers of the even-order unit
    // generators, one per square-class bit.
    let mu2 = ga.clone();
    let mut mu2_gens = Vec::with_capacity(n);
    for (k, (&g, &ord)) in units.gens().iter().zip(units.orders()).enumerate() {
        if ord % 2 == 0 {
            mu2_gens.push(ring.pow(g, ord / 2));
        }
        let _ = k;
    }
    assert_eq!(mu2_gens.len(), n);

    let domain = tensor_product(&ga, &mu2);
    let (wedge, pi) = wedge_square(units.group());
    let mut cols = Vec::with_capacity(n * n);
    for i in 0..n {
        let da = dlog_int(&units, sq.rep(1 << i));
        for &z in &mu2_gens {
            let dz = dlog_int(&units, z);
            cols.push(pi.eval(&da, &dz));
        }
    }
    let m = AbMorphism::new(
        domain.clone(),
        wedge,
        DenseMat::from_cols(pi.len(), &cols),
    )?;
    let (kernel, _) = m.kernel()?;
    let kernel_order = kernel
        .order()
        .ok_or_else(|| CoreError::Internal("2-torsion kernel must be finite".into()))?;
    let field = is_field(ring);
    if field && kernel_order > Int::from(2) {
        return Err(CoreError::Internal(format!(
            "square-class pairing kernel has order {} > 2 on the field {}",
            kernel_order,
            ring.spec()
        )));
    }
    Ok(Z2KernelData {
        domain,
        kernel,
        kernel_order,
        is_field: field,
    })
}
