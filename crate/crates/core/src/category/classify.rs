use crate::algebra::{smith_normal_form, Dvr, Matrix};
use crate::chain::{ChainComplex, ChainMap};

use super::{CMorphism, CObject, CategoryError};

/// A two-term complex identified with a standard object, with the explicit
/// chain isomorphism `witness : x → (n,m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification<R: Dvr> {
    pub object: CObject<R>,
    pub witness: ChainMap<R>,
}

/// Identifies `[x_1 --d--> x_0]` with some `(n,m)` via the Smith form of `d`.
pub fn classify<R: Dvr>(x: &ChainComplex<R>) -> Result<Classification<R>, CategoryError> {
    let ring = x.ring();
    if x.ranks().keys().any(|&n| n != 0 && n != 1) {
        return Err(CategoryError::ShapeMismatch("complex is not concentrated in degrees 1 and 0".into()));
    }
    let d = x.d(1);
    if d.rows() != d.cols() {
        return Err(CategoryError::RankMismatch { rows: d.rows(), cols: d.cols() });
    }
    let snf = smith_normal_form(&d);
    if snf.rank() < d.cols() {
        return Err(CategoryError::NotInjective);
    }
    let exponents = snf.exponents();
    if let Some(&a) = exponents.iter().find(|&&a| a >= 2) {
        return Err(CategoryError::NotInC(a));
    }
    let m = exponents.iter().filter(|&&a| a == 0).count();
    let n = exponents.len() - m;
    let object = CObject::new(ring, n, m);

    // Smith order is diag(E_m, g E_n); reorder to diag(g E_n, E_m).
    let size = n + m;
    let mut perm = Matrix::zeros(ring, size, size);
    for k in 0..size {
        let row = if k < m { n + k } else { k - m };
        perm.set(row, k, ring.one());
    }
    let w1 = &perm * &snf.v;
    let w0 = &perm * &snf.u_inv;
    let witness = ChainMap::new(x.clone(), object.to_complex(), [(1, w1), (0, w0)])?;
    Ok(Classification { object, witness })
}

/// Splitting data for a short exact sequence `(n,0) → (n',0) → (n'',0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitWitness<R: Dvr> {
    /// `γ` with `βγ = id`.
    pub section: CMorphism<R>,
    /// `ρ` with `ρα = id` and `αρ + γβ = id`.
    pub retraction: CMorphism<R>,
}

/// Splits `α, β` between objects with no unit part, given `βα = 0` and a
/// short exact residue sequence.
pub fn split_exactness<R: Dvr>(alpha: &CMorphism<R>, beta: &CMorphism<R>) -> Result<SplitWitness<R>, CategoryError> {
    let ring = alpha.ring();
    let (a, b, c) = (alpha.source(), alpha.target(), beta.target());
    if a.m != 0 || b.m != 0 || c.m != 0 || beta.source() != b {
        return Err(CategoryError::ShapeMismatch("expected (n,0) → (n',0) → (n'',0)".into()));
    }
    let composite = beta.compose(alpha)?;
    if !composite.nn.is_zero() {
        return Err(CategoryError::NotAComplexPair);
    }
    let (alpha_bar, beta_bar) = (alpha.h0(), beta.h0());
    let (rank_a, rank_b) = (crate::algebra::rank(&alpha_bar), crate::algebra::rank(&beta_bar));
    if rank_a != a.n || rank_b != c.n || b.n != a.n + c.n {
        return Err(CategoryError::ResidueNotExact(format!(
            "ranks {rank_a}, {rank_b} for dimensions {} → {} → {}",
            a.n, b.n, c.n
        )));
    }
    let field = ring.residue_field();
    let gamma_bar = smith_normal_form(&beta_bar)
        .solve(&Matrix::identity(field, c.n))
        .expect("a surjection over a field has a section");
    let gamma = Matrix::lift(ring, &gamma_bar);
    let correction = (&beta.nn * &gamma).inverse()?;
    let gamma = &gamma * &correction;
    let basis = alpha.nn.hstack(&gamma).inverse()?;
    let retraction = basis.submatrix(0, a.n, 0, b.n);
    let empty = |rows, cols| Matrix::zeros(ring, rows, cols);
    Ok(SplitWitness {
        section: CMorphism::new(c, b, gamma, empty(b.n, 0), empty(0, c.n), empty(0, 0))?,
        retraction: CMorphism::new(b, a, retraction, empty(a.n, 0), empty(0, b.n), empty(0, 0))?,
    })
}

/// The complex `[0 → k^rank]` over the residue field.
pub fn section_of_h0<R: Dvr>(ring: R, rank: usize) -> ChainComplex<R::Residue> {
    ChainComplex::concentrated(ring.residue_field(), 0, rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ZLocal;
    use crate::chain::homology;

    fn z5() -> ZLocal {
        ZLocal::new(5).unwrap()
    }

    fn ints(r: ZLocal, rows: usize, cols: usize, v: &[i64]) -> Matrix<ZLocal> {
        Matrix::from_ints(r, rows, cols, v)
    }

    fn torsion_only(r: ZLocal, n: usize, target: usize, nn: Matrix<ZLocal>) -> CMorphism<ZLocal> {
        let (s, t) = (CObject::new(r, n, 0), CObject::new(r, target, 0));
        CMorphism::new(s, t, nn, Matrix::zeros(r, target, 0), Matrix::zeros(r, 0, n), Matrix::zeros(r, 0, 0)).unwrap()
    }

    #[test]
    fn standard_object_classifies_to_itself() {
        let r = z5();
        let x = CObject::new(r, 1, 1);
        let c = classify(&x.to_complex()).unwrap();
        assert_eq!(c.object, x);
        assert_eq!(c.witness, ChainMap::identity(&x.to_complex()));
    }

    #[test]
    fn permuted_diagonal() {
        let r = z5();
        // diag(5, 1) with the target rows swapped.
        let x = ChainComplex::two_term(ints(r, 2, 2, &[0, 1, 5, 0])).unwrap();
        let c = classify(&x).unwrap();
        assert_eq!(c.object, CObject::new(r, 1, 1));
        let (w1, w0) = (c.witness.component(1), c.witness.component(0));
        assert_eq!(&(&w0 * &x.d(1)) * &w1.inverse().unwrap(), c.object.boundary());
    }

    #[test]
    fn errors() {
        let r = z5();
        let x = ChainComplex::two_term(ints(r, 1, 1, &[25])).unwrap();
        assert_eq!(classify(&x), Err(CategoryError::NotInC(2)));
        let y = ChainComplex::two_term(ints(r, 2, 2, &[1, 1, 1, 1])).unwrap();
        assert_eq!(classify(&y), Err(CategoryError::NotInjective));
        let z = ChainComplex::two_term(ints(r, 2, 1, &[1, 0])).unwrap();
        assert_eq!(classify(&z), Err(CategoryError::RankMismatch { rows: 2, cols: 1 }));
    }

    #[test]
    fn already_split() {
        let r = z5();
        let alpha = torsion_only(r, 1, 2, ints(r, 2, 1, &[1, 0]));
        let beta = torsion_only(r, 2, 1, ints(r, 1, 2, &[0, 1]));
        let w = split_exactness(&alpha, &beta).unwrap();
        assert_eq!(w.section.nn, ints(r, 2, 1, &[0, 1]));
        assert_eq!(w.retraction.nn, ints(r, 1, 2, &[1, 0]));
    }

    #[test]
    fn nontrivial_split() {
        let r = z5();
        let alpha = torsion_only(r, 1, 2, ints(r, 2, 1, &[1, 5]));
        let beta = torsion_only(r, 2, 1, ints(r, 1, 2, &[-5, 1]));
        let w = split_exactness(&alpha, &beta).unwrap();
        assert!(beta.compose(&w.section).unwrap().nn.is_identity());
        assert!(w.retraction.compose(&alpha).unwrap().nn.is_identity());
        let sum = &(&alpha.nn * &w.retraction.nn) + &(&w.section.nn * &beta.nn);
        assert!(sum.is_identity());
    }

    #[test]
    fn split_errors() {
        let r = z5();
        let alpha = torsion_only(r, 1, 2, ints(r, 2, 1, &[1, 0]));
        let beta = torsion_only(r, 2, 1, ints(r, 1, 2, &[1, 1]));
        assert_eq!(split_exactness(&alpha, &beta), Err(CategoryError::NotAComplexPair));
        let alpha = torsion_only(r, 1, 2, ints(r, 2, 1, &[5, 0]));
        let beta = torsion_only(r, 2, 1, ints(r, 1, 2, &[0, 1]));
        assert!(matches!(split_exactness(&alpha, &beta), Err(CategoryError::ResidueNotExact(_))));
    }

    #[test]
    fn section_recovers_rank() {
        let r = z5();
        for rank in 0..=5 {
            let s = section_of_h0(r, rank);
            let h0 = homology(&s).into_iter().find(|h| h.degree == 0).map_or(0, |h| h.free_rank);
            assert_eq!(h0, rank);
        }
    }
}
