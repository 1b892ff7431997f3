use super::{Matrix, Ring, Valuation};

/// Smith normal form `M = U·D·V` with `D` diagonal, entries pure powers of
/// the uniformizer in non-decreasing order, followed by zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snf<R: Ring> {
    pub u: Matrix<R>,
    pub u_inv: Matrix<R>,
    pub d: Matrix<R>,
    pub v: Matrix<R>,
    pub v_inv: Matrix<R>,
    rank: usize,
}

impl<R: Ring> Snf<R> {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Valuations of the non-zero diagonal entries, non-decreasing.
    pub fn exponents(&self) -> Vec<u32> {
        let r = self.d.ring();
        (0..self.rank)
            .map(|i| r.valuation(self.d.get(i, i)).finite().expect("non-zero pivot"))
            .collect()
    }

    /// Columns spanning the kernel of `M` (a free summand of the source).
    pub fn kernel_basis(&self) -> Matrix<R> {
        let c = self.v_inv.cols();
        self.v_inv.submatrix(0, c, self.rank, c)
    }

    /// Some `x` with `M·x = b`, if one exists over the ring.
    pub fn solve(&self, b: &Matrix<R>) -> Option<Matrix<R>> {
        let r = self.d.ring();
        let c = self.u_inv.try_mul(b).ok()?;
        let n = self.v.rows();
        let mut y = Matrix::zeros(r, n, b.cols());
        for j in 0..b.cols() {
            for i in 0..c.rows() {
                let ci = c.get(i, j);
                if i < self.rank {
                    y.set(i, j, r.divide(ci, self.d.get(i, i))?);
                } else if !r.is_zero(ci) {
                    return None;
                }
            }
        }
        Some(&self.v_inv * &y)
    }
}

/// Smith normal form by minimum-valuation pivoting; valid over any ring
/// implementing [`Ring`], since all of them are local with a valuation.
pub fn smith_normal_form<R: Ring>(m: &Matrix<R>) -> Snf<R> {
    let ring = m.ring();
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut u = Matrix::identity(ring, rows);
    let mut u_inv = Matrix::identity(ring, rows);
    let mut v = Matrix::identity(ring, cols);
    let mut v_inv = Matrix::identity(ring, cols);
    // Invariant: m = u · a · v, with u_inv, v_inv the inverses.
    let mut rank = 0;
    for t in 0..rows.min(cols) {
        // Minimal valuation, then smallest entry.
        let mut best: Option<((Valuation, usize), usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let entry = a.get(i, j);
                let key = (ring.valuation(entry), ring.size(entry));
                if key.0 != Valuation::Infinite && best.as_ref().is_none_or(|(b, _, _)| key < *b) {
                    best = Some((key, i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };

        // Row swap on a: column swap on u, row swap on u_inv.
        a.swap_rows(t, pi);
        u.swap_cols(t, pi);
        u_inv.swap_rows(t, pi);
        // Column swap on a: row swap on v, column swap on v_inv.
        a.swap_cols(t, pj);
        v.swap_rows(t, pj);
        v_inv.swap_cols(t, pj);

        let (unit, _) = ring.split_unit(a.get(t, t)).expect("non-zero pivot");
        let unit_inv = ring.inverse(&unit).expect("unit part");
        a.scale_row(t, &unit_inv);
        u.scale_col(t, &unit);
        u_inv.scale_row(t, &unit_inv);

        let pivot = a.get(t, t).clone();
        for i in t + 1..rows {
            if ring.is_zero(a.get(i, t)) {
                continue;
            }
            let q = ring.divide(a.get(i, t), &pivot).expect("pivot has minimal valuation");
            // row_i -= q row_t on a; the inverse adds q col_i into col_t of u.
            a.add_row_multiple(i, t, &ring.neg(&q));
            u.add_col_multiple(t, i, &q);
            u_inv.add_row_multiple(i, t, &ring.neg(&q));
        }
        for j in t + 1..cols {
            if ring.is_zero(a.get(t, j)) {
                continue;
            }
            let q = ring.divide(a.get(t, j), &pivot).expect("pivot has minimal valuation");
            // col_j -= q col_t on a; the inverse adds q row_j into row_t of v.
            a.add_col_multiple(j, t, &ring.neg(&q));
            v.add_row_multiple(t, j, &q);
            v_inv.add_col_multiple(j, t, &ring.neg(&q));
        }
        rank += 1;
    }
    Snf { u, u_inv, d: a, v, v_inv, rank }
}

/// Rank over the fraction field.
pub fn rank<R: Ring>(m: &Matrix<R>) -> usize {
    smith_normal_form(m).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Dvr, QtLocal, Rationals, ZLocal};

    fn check<R: Ring>(m: &Matrix<R>) -> Snf<R> {
        let s = smith_normal_form(m);
        assert_eq!(&(&s.u * &s.d) * &s.v, *m);
        assert!((&s.u * &s.u_inv).is_identity());
        assert!((&s.v * &s.v_inv).is_identity());
        s
    }

    #[test]
    fn reorders_by_valuation() {
        let r = ZLocal::new(5).unwrap();
        let s = check(&Matrix::from_ints(r, 2, 2, &[5, 0, 0, 1]));
        assert_eq!(s.d, Matrix::from_ints(r, 2, 2, &[1, 0, 0, 5]));
        assert_eq!(s.exponents(), vec![0, 1]);
    }

    #[test]
    fn zero_matrix() {
        let r = ZLocal::new(5).unwrap();
        let s = check(&Matrix::zeros(r, 2, 2));
        assert!(s.d.is_zero());
        assert!(s.u.is_identity() && s.v.is_identity());
        assert_eq!(s.kernel_basis(), Matrix::identity(r, 2));
    }

    #[test]
    fn column_reduction() {
        let r = ZLocal::new(5).unwrap();
        let s = check(&Matrix::from_ints(r, 2, 2, &[5, 5, 0, 5]));
        assert_eq!(s.d, Matrix::from_ints(r, 2, 2, &[5, 0, 0, 5]));
    }

    #[test]
    fn unit_parts_are_absorbed() {
        let r = ZLocal::new(5).unwrap();
        let s = check(&Matrix::from_ints(r, 2, 3, &[3, 10, 0, 6, 20, 75]));
        assert_eq!(s.d, Matrix::from_ints(r, 2, 3, &[1, 0, 0, 0, 25, 0]));
        let q = QtLocal;
        let m = Matrix::new(q, 1, 1, vec![q.parse("(2*t^2)/(1 + t)").unwrap()]).unwrap();
        assert_eq!(check(&m).d.get(0, 0), &q.uniformizer_power(2));
    }

    #[test]
    fn kernel_and_solve() {
        let r = ZLocal::new(5).unwrap();
        let m = Matrix::from_ints(r, 2, 3, &[1, 2, 3, 2, 4, 6]);
        let s = check(&m);
        assert_eq!(s.rank(), 1);
        let k = s.kernel_basis();
        assert_eq!(k.cols(), 2);
        assert!((&m * &k).is_zero());
        let b = Matrix::from_ints(r, 2, 1, &[5, 10]);
        let x = s.solve(&b).unwrap();
        assert_eq!(&m * &x, b);
        assert!(s.solve(&Matrix::from_ints(r, 2, 1, &[1, 1])).is_none());
        // 5x = 1 has no solution in Z@5.
        let five = Matrix::from_ints(r, 1, 1, &[5]);
        assert!(smith_normal_form(&five).solve(&Matrix::from_ints(r, 1, 1, &[1])).is_none());
    }

    #[test]
    fn over_a_field() {
        let m = Matrix::from_ints(Rationals, 2, 2, &[2, 4, 1, 2]);
        let s = check(&m);
        assert_eq!(s.rank(), 1);
        assert_eq!(s.exponents(), vec![0]);
    }
}
