//! Smith normal form over the integers.
//!
//! Fraction-free elimination, pivoting on the least nonzero |entry|, with
//! optional tracking of the unimodular transforms and their inverses:
//! `u * m * v = diag(d)` with `d[0] | d[1] | ...`, all `d[i] >= 0`.
//!
//! Arbitrary precision throughout; intermediate entries may exceed any fixed
//! word size even for small inputs, which is the classic failure mode of
//! machine-integer eliminations.

use super::dense::DenseMat;
use super::scalar::ExactInt;
use super::Int;
use num_traits::{Signed, Zero};

#[derive(Clone, Copy, Default)]
pub struct SmithOpts {
    pub u: bool,
    pub uinv: bool,
    pub v: bool,
    pub vinv: bool,
}

impl SmithOpts {
    pub fn all() -> Self {
        SmithOpts {
            u: true,
            uinv: true,
            v: true,
            vinv: true,
        }
    }
    pub fn with_u() -> Self {
        SmithOpts {
            u: true,
            ..Default::default()
        }
    }
    pub fn with_uv() -> Self {
        SmithOpts {
            u: true,
            v: true,
            ..Default::default()
        }
    }
}

/// Result of a Smith normal form computation.
pub struct Smith {
    pub rows: usize,
    pub cols: usize,
    /// Full diagonal of length min(rows, cols): positive invariant factors in a
    /// divisibility chain, then zeros.
    pub diag: Vec<Int>,
    pub rank: usize,
    pub u: Option<DenseMat>,
    pub uinv: Option<DenseMat>,
    pub v: Option<DenseMat>,
    pub vinv: Option<DenseMat>,
}

impl Smith {
    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<Int> {
        self.diag
            .iter()
            .filter(|d| !d.is_zero() && **d != Int::from(1))
            .cloned()
            .collect()
    }
}

struct Work {
    a: DenseMat,
    u: Option<DenseMat>,
    uinv: Option<DenseMat>,
    v: Option<DenseMat>,
    vinv: Option<DenseMat>,
}

impl Work {
    fn swap_rows(&mut self, x: usize, y: usize) {
        self.a.swap_rows(x, y);
        if let Some(u) = &mut self.u {
            u.swap_rows(x, y);
        }
        if let Some(ui) = &mut self.uinv {
            ui.swap_cols(x, y);
        }
    }

    fn swap_cols(&mut self, x: usize, y: usize) {
        self.a.swap_cols(x, y);
        if let Some(v) = &mut self.v {
            v.swap_cols(x, y);
        }
        if let Some(vi) = &mut self.vinv {
            vi.swap_rows(x, y);
        }
    }

    /// row[x] += q * row[y]
    fn row_axpy(&mut self, x: usize, y: usize, q: &Int) {
        self.a.row_axpy(x, y, q);
        if let Some(u) = &mut self.u {
            u.row_axpy(x, y, q);
        }
        if let Some(ui) = &mut self.uinv {
            ui.col_axpy(y, x, &-q);
        }
    }

    /// col[x] += q * col[y]
    fn col_axpy(&mut self, x: usize, y: usize, q: &Int) {
        self.a.col_axpy(x, y, q);
        if let Some(v) = &mut self.v {
            v.col_axpy(x, y, q);
        }
        if let Some(vi) = &mut self.vinv {
            vi.row_axpy(y, x, &-q);
        }
    }

    /// rows (x, y) <- (p x + q y, r x + s y), with ps - qr = 1.
    fn two_row_op(&mut self, x: usize, y: usize, p: &Int, q: &Int, r: &Int, s: &Int) {
        self.a.two_row_op(x, y, p, q, r, s);
        if let Some(u) = &mut self.u {
            u.two_row_op(x, y, p, q, r, s);
        }
        if let Some(ui) = &mut self.uinv {
            // inverse block [[s, -q], [-r, p]] applied on the right: columns mix
            ui.two_col_op(x, y, s, &-r.clone(), &-q.clone(), p);
        }
    }

    /// cols (x, y) <- (p x + q y, r x + s y), with ps - qr = 1.
    fn two_col_op(&mut self, x: usize, y: usize, p: &Int, q: &Int, r: &Int, s: &Int) {
        self.a.two_col_op(x, y, p, q, r, s);
        if let Some(v) = &mut self.v {
            v.two_col_op(x, y, p, q, r, s);
        }
        if let Some(vi) = &mut self.vinv {
            vi.two_row_op(x, y, s, &-r.clone(), &-q.clone(), p);
        }
    }

    fn negate_row(&mut self, x: usize) {
        self.a.negate_row(x);
        if let Some(u) = &mut self.u {
            u.negate_row(x);
        }
        if let Some(ui) = &mut self.uinv {
            ui.negate_col(x);
        }
    }
}

pub fn smith(m: &DenseMat, opts: SmithOpts) -> Smith {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        a: m.clone(),
        u: opts.u.then(|| DenseMat::identity(rows)),
        uinv: opts.uinv.then(|| DenseMat::identity(rows)),
        v: opts.v.then(|| DenseMat::identity(cols)),
        vinv: opts.vinv.then(|| DenseMat::identity(cols)),
    };
    let n = rows.min(cols);

    for t in 0..n {
        let Some((pi, pj)) = least_entry(&w.a, t) else {
            break;
        };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);

        'outer: loop {
            // Clear column t, then row t; column rotations during the row pass
            // can repopulate the column, hence the loop.
            loop {
                let mut touched = false;
                for i in (t + 1)..rows {
                    if w.a.get(i, t).is_zero() {
                        continue;
                    }
                    let a = w.a.get(t, t).clone();
                    let b = w.a.get(i, t).clone();
                    if a.divides(&b) {
                        let q = -a.exact_div_into(&b);
                        w.row_axpy(i, t, &q);
                    } else {
                        let (g, s, tt) = Int::gcd_ext(&a, &b).expect("bigint gcd");
                        let (ag, bg) = (g.exact_div_into(&a), g.exact_div_into(&b));
                        w.two_row_op(t, i, &s, &tt, &-bg, &ag);
                        touched = true;
                    }
                }
                let mut row_clear = true;
                for j in (t + 1)..cols {
                    if w.a.get(t, j).is_zero() {
                        continue;
                    }
                    let a = w.a.get(t, t).clone();
                    let b = w.a.get(t, j).clone();
                    if a.divides(&b) {
                        let q = -a.exact_div_into(&b);
                        w.col_axpy(j, t, &q);
                    } else {
                        let (g, s, tt) = Int::gcd_ext(&a, &b).expect("bigint gcd");
                        let (ag, bg) = (g.exact_div_into(&a), g.exact_div_into(&b));
                        w.two_col_op(t, j, &s, &tt, &-bg, &ag);
                        touched = true;
                        row_clear = false;
                    }
                }
                let col_clear = ((t + 1)..rows).all(|i| w.a.get(i, t).is_zero());
                if col_clear && row_clear && !touched {
                    break;
                }
                if col_clear && ((t + 1)..cols).all(|j| w.a.get(t, j).is_zero()) {
                    break;
                }
            }

            // Make the pivot divide the rest of the submatrix.
            let p = w.a.get(t, t).clone();
            if !p.is_zero() {
                for i in (t + 1)..rows {
                    for j in (t + 1)..cols {
                        if !p.divides(w.a.get(i, j)) {
                            w.row_axpy(t, i, &Int::from(1));
                            continue 'outer;
                        }
                    }
                }
            }
            break;
        }

        if w.a.get(t, t).is_negative() {
            w.negate_row(t);
        }
    }

    let diag: Vec<Int> = (0..n).map(|t| w.a.get(t, t).clone()).collect();
    let rank = diag.iter().take_while(|d| !d.is_zero()).count();
    debug_assert!(diag.iter().skip(rank).all(|d| d.is_zero()));
    Smith {
        rows,
        cols,
        diag,
        rank,
        u: w.u,
        uinv: w.uinv,
        v: w.v,
        vinv: w.vinv,
    }
}

fn least_entry(a: &DenseMat, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(Int, usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let v = a.get(i, j);
            if v.is_zero() {
                continue;
            }
            let av = v.abs();
            match &best {
                Some((b, _, _)) if *b <= av => {}
                _ => best = Some((av, i, j)),
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Basis of the integer kernel of `m`, as columns.
pub fn kernel_basis(m: &DenseMat) -> DenseMat {
    let s = smith(
        m,
        SmithOpts {
            v: true,
            ..Default::default()
        },
    );
    let v = s.v.unwrap();
    let keep: Vec<usize> = (s.rank..m.cols()).collect();
    v.submatrix_cols(&keep)
}

/// Whether `vec` lies in the lattice spanned by the columns whose Smith form
/// (with `u` tracked) is `s`.
pub fn lattice_contains(s: &Smith, vec: &[Int]) -> bool {
    reduce_against(s, vec).is_some()
}

/// Solve `m * x = vec` for integer `x` given the Smith form of `m` with `u`
/// and `v` tracked.
pub fn lattice_solve(s: &Smith, vec: &[Int]) -> Option<Vec<Int>> {
    let y = reduce_against(s, vec)?;
    let v = s.v.as_ref().expect("lattice_solve needs v");
    let mut padded = vec![Int::zero(); s.cols];
    padded[..y.len().min(s.cols)].clone_from_slice(&y[..y.len().min(s.cols)]);
    Some(v.mul_vec(&padded))
}

/// Coordinates `y` with `diag * y = u * vec` when solvable.
fn reduce_against(s: &Smith, vec: &[Int]) -> Option<Vec<Int>> {
    assert_eq!(vec.len(), s.rows);
    let u = s.u.as_ref().expect("lattice ops need u");
    let w = u.mul_vec(vec);
    let mut y = vec![Int::zero(); s.rank];
    for (i, wi) in w.iter().enumerate() {
        if i < s.rank {
            let d = &s.diag[i];
            if !d.divides(wi) {
                return None;
            }
            y[i] = d.exact_div_into(wi);
        } else if !wi.is_zero() {
            return None;
        }
    }
    Some(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_full(m: &DenseMat) -> Smith {
        let s = smith(m, SmithOpts::all());
        let u = s.u.as_ref().unwrap();
        let v = s.v.as_ref().unwrap();
        let d = u.mul(m).mul(v);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let expect = if i == j && i < s.diag.len() {
                    s.diag[i].clone()
                } else {
                    Int::zero()
                };
                assert_eq!(*d.get(i, j), expect, "diag mismatch at ({i},{j})");
            }
        }
        assert_eq!(
            u.mul(s.uinv.as_ref().unwrap()),
            DenseMat::identity(m.rows())
        );
        assert_eq!(
            v.mul(s.vinv.as_ref().unwrap()),
            DenseMat::identity(m.cols())
        );
        for w in s.diag.windows(2) {
            if !w[0].is_zero() && !w[1].is_zero() {
                assert!(w[0].divides(&w[1]), "divisibility chain broken");
            }
        }
        s
    }

    #[test]
    fn diag_2_3() {
        let s = check_full(&DenseMat::from_i64_rows(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.diag, vec![Int::from(1), Int::from(6)]);
    }

    #[test]
    fn five_term_presentation_matrix() {
        // Known oracle: [[3, -2], [-2, 3]] has invariant factors (1, 5).
        let s = check_full(&DenseMat::from_i64_rows(&[&[3, -2], &[-2, 3]]));
        assert_eq!(s.diag, vec![Int::from(1), Int::from(5)]);
    }

    #[test]
    fn rank_deficient() {
        let s = check_full(&DenseMat::from_i64_rows(&[&[2, 4], &[1, 2], &[3, 6]]));
        assert_eq!(s.rank, 1);
        assert_eq!(s.diag, vec![Int::from(1), Int::from(0)]);
    }

    #[test]
    fn empty_matrices() {
        let s = smith(&DenseMat::zero(0, 4), SmithOpts::all());
        assert_eq!(s.rank, 0);
        assert!(s.diag.is_empty());
        let s = smith(&DenseMat::zero(4, 0), SmithOpts::all());
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn kernel_of_projection() {
        let m = DenseMat::from_i64_rows(&[&[1, 0, 2]]);
        let k = kernel_basis(&m);
        assert_eq!(k.cols(), 2);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn solve_in_lattice() {
        let m = DenseMat::from_i64_rows(&[&[2, 0], &[0, 3]]);
        let s = smith(&m, SmithOpts::with_uv());
        let x = lattice_solve(&s, &[Int::from(4), Int::from(-3)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![Int::from(4), Int::from(-3)]);
        assert!(lattice_solve(&s, &[Int::from(1), Int::from(0)]).is_none());
        assert!(lattice_contains(
            &smith(&m, SmithOpts::with_u()),
            &[Int::from(-2), Int::from(6)]
        ));
    }

    #[test]
    fn known_entry_growth_case() {
        // Dense random-ish matrix whose naive elimination overflows i32 ranges;
        // exact arithmetic must handle it.
        let m = DenseMat::from_i64_rows(&[
            &[84, -61, 91, 3],
            &[-7, 59, -42, 88],
            &[61, -86, 78, -5],
            &[12, 44, -33, 97],
        ]);
        let s = check_full(&m);
        // |det| equals the product of invariant factors when full rank
        let det = det_cofactor(&m);
        if s.rank == 4 {
            let prod: Int = s.diag.iter().product();
            assert_eq!(prod, det.abs());
        } else {
            assert!(det.is_zero());
        }
    }

    fn det_cofactor(m: &DenseMat) -> Int {
        let n = m.rows();
        if n == 0 {
            return Int::from(1);
        }
        let mut acc = Int::zero();
        for i in 0..n {
            if m.get(i, 0).is_zero() {
                continue;
            }
            let keep_r: Vec<usize> = (0..n).filter(|&r| r != i).collect();
            let keep_c: Vec<usize> = (1..n).collect();
            let minor = m.submatrix_rows(&keep_r).submatrix_cols(&keep_c);
            let term = m.get(i, 0) * det_cofactor(&minor);
            if i % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }
}
