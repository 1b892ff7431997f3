//! The category of standard two-term complexes `(n,m)` with boundary
//! `diag(g E_n, E_m)`, and its morphisms in four-block form.

mod classify;

use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{AlgebraError, Dvr, Matrix};
use crate::chain::{ChainComplex, ChainError, ChainMap};

pub use classify::{classify, section_of_h0, split_exactness, Classification, SplitWitness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("chain map does not come from a morphism of standard objects: {0}")]
    NotAMorphismOfC(String),
    #[error("the (m,m) block is not invertible")]
    BlockNotInvertible,
    #[error("boundary has an invariant factor g^{0}; H_0 is not killed by g")]
    NotInC(u32),
    #[error("boundary is not injective")]
    NotInjective,
    #[error("boundary is {rows}x{cols}; ranks must agree")]
    RankMismatch { rows: usize, cols: usize },
    #[error("composite of the pair is not zero")]
    NotAComplexPair,
    #[error("residue sequence is not short exact: {0}")]
    ResidueNotExact(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn shape_err(what: impl Into<String>) -> CategoryError {
    CategoryError::ShapeMismatch(what.into())
}

/// The standard object `(n,m)`: `B^n ⊕ B^m --diag(g E_n, E_m)--> B^n ⊕ B^m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CObject<R: Dvr> {
    pub ring: R,
    pub n: usize,
    pub m: usize,
}

impl<R: Dvr> CObject<R> {
    pub fn new(ring: R, n: usize, m: usize) -> Self {
        CObject { ring, n, m }
    }

    pub fn boundary(&self) -> Matrix<R> {
        let g = Matrix::scalar(self.ring, self.n, &self.ring.uniformizer());
        g.direct_sum(&Matrix::identity(self.ring, self.m))
    }

    pub fn to_complex(&self) -> ChainComplex<R> {
        ChainComplex::two_term(self.boundary()).expect("standard objects are complexes")
    }

    /// The upside-down involution on objects: `(n,m) ↦ (m,n)`.
    pub fn upside_down(&self) -> Self {
        CObject { ring: self.ring, n: self.m, m: self.n }
    }

    /// Rank of `H_0` over the residue field.
    pub fn h0(&self) -> usize {
        self.n
    }

    pub fn to_json(&self) -> Value {
        json!({ "n": self.n, "m": self.m, "ring": self.ring.descriptor() })
    }
}

/// A morphism `(n,m) → (n',m')` as blocks `(nn nm; mn mm)`, where `nn` is
/// `n'×n`, `nm` is `n'×m`, `mn` is `m'×n` and `mm` is `m'×m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CMorphism<R: Dvr> {
    source: CObject<R>,
    target: CObject<R>,
    pub nn: Matrix<R>,
    pub nm: Matrix<R>,
    pub mn: Matrix<R>,
    pub mm: Matrix<R>,
}

impl<R: Dvr> CMorphism<R> {
    pub fn new(
        source: CObject<R>,
        target: CObject<R>,
        nn: Matrix<R>,
        nm: Matrix<R>,
        mn: Matrix<R>,
        mm: Matrix<R>,
    ) -> Result<Self, CategoryError> {
        let (n, m, n2, m2) = (source.n, source.m, target.n, target.m);
        let expected = [(n2, n), (n2, m), (m2, n), (m2, m)];
        let actual = [nn.shape(), nm.shape(), mn.shape(), mm.shape()];
        if expected != actual {
            return Err(shape_err(format!("blocks {actual:?} for ({n},{m}) → ({n2},{m2})")));
        }
        Ok(CMorphism { source, target, nn, nm, mn, mm })
    }

    pub fn identity(x: CObject<R>) -> Self {
        let r = x.ring;
        CMorphism {
            source: x,
            target: x,
            nn: Matrix::identity(r, x.n),
            nm: Matrix::zeros(r, x.n, x.m),
            mn: Matrix::zeros(r, x.m, x.n),
            mm: Matrix::identity(r, x.m),
        }
    }

    pub fn zero(source: CObject<R>, target: CObject<R>) -> Self {
        let r = source.ring;
        CMorphism {
            source,
            target,
            nn: Matrix::zeros(r, target.n, source.n),
            nm: Matrix::zeros(r, target.n, source.m),
            mn: Matrix::zeros(r, target.m, source.n),
            mm: Matrix::zeros(r, target.m, source.m),
        }
    }

    pub fn source(&self) -> CObject<R> {
        self.source
    }

    pub fn target(&self) -> CObject<R> {
        self.target
    }

    pub fn ring(&self) -> R {
        self.source.ring
    }

    /// `self ∘ inner` by the block composition law of the category.
    pub fn compose(&self, inner: &Self) -> Result<Self, CategoryError> {
        if inner.target != self.source {
            return Err(shape_err("composition: target of the inner morphism is not the source of the outer"));
        }
        let g = self.ring().uniformizer();
        let (p, f) = (self, inner);
        let nn = &(&p.nn * &f.nn) + &(&p.nm * &f.mn).scale(&g);
        let nm = &(&p.nn * &f.nm) + &(&p.nm * &f.mm);
        let mn = &(&p.mn * &f.nn) + &(&p.mm * &f.mn);
        let mm = &(&p.mn * &f.nm).scale(&g) + &(&p.mm * &f.mm);
        Self::new(inner.source, self.target, nn, nm, mn, mm)
    }

    /// Degree 1 component `(nn nm; g·mn mm)`.
    pub fn degree_one(&self) -> Matrix<R> {
        let g = self.ring().uniformizer();
        Matrix::block2(&self.nn, &self.nm, &self.mn.scale(&g), &self.mm)
    }

    /// Degree 0 component `(nn g·nm; mn mm)`.
    pub fn degree_zero(&self) -> Matrix<R> {
        let g = self.ring().uniformizer();
        Matrix::block2(&self.nn, &self.nm.scale(&g), &self.mn, &self.mm)
    }

    pub fn to_chain_map(&self) -> ChainMap<R> {
        ChainMap::new(
            self.source.to_complex(),
            self.target.to_complex(),
            [(1, self.degree_one()), (0, self.degree_zero())],
        )
        .expect("every block quadruple is a chain map")
    }

    /// Recovers the blocks of a chain map between standard complexes.
    pub fn from_chain_map(f: &ChainMap<R>, source: CObject<R>, target: CObject<R>) -> Result<Self, CategoryError> {
        if f.source() != &source.to_complex() || f.target() != &target.to_complex() {
            return Err(shape_err("chain map endpoints are not the given standard objects"));
        }
        let g = source.ring.uniformizer();
        let (n, n2) = (source.n, target.n);
        let (f1, f0) = (f.component(1), f.component(0));
        let block = |m: &Matrix<R>, top: bool, left: bool| {
            let (r0, r1) = if top { (0, n2) } else { (n2, m.rows()) };
            let (c0, c1) = if left { (0, n) } else { (n, m.cols()) };
            m.submatrix(r0, r1, c0, c1)
        };
        let nn = block(&f1, true, true);
        let nm = block(&f1, true, false);
        let mm = block(&f1, false, false);
        let mn = block(&f0, false, true);
        let not_c = |what: &str| CategoryError::NotAMorphismOfC(what.to_string());
        if block(&f0, true, true) != nn || block(&f0, false, false) != mm {
            return Err(not_c("diagonal blocks differ between degrees"));
        }
        if block(&f1, false, true) != mn.scale(&g) {
            return Err(not_c("(m',n) block of the degree 1 map is not g times the degree 0 block"));
        }
        if block(&f0, true, false) != nm.scale(&g) {
            return Err(not_c("(n',m) block of the degree 0 map is not g times the degree 1 block"));
        }
        Self::new(source, target, nn, nm, mn, mm)
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.mn.is_zero()
    }

    pub fn is_lower_triangular(&self) -> bool {
        self.nm.is_zero()
    }

    /// The upside-down involution: blocks become `(mm mn; nm nn)`.
    pub fn upside_down(&self) -> Self {
        CMorphism {
            source: self.source.upside_down(),
            target: self.target.upside_down(),
            nn: self.mm.clone(),
            nm: self.mn.clone(),
            mn: self.nm.clone(),
            mm: self.nn.clone(),
        }
    }

    /// The lower triangular correction `(E 0; -mm⁻¹ mn  E)` making
    /// `self ∘ UT(self)` upper triangular.
    pub fn upper_triangulation(&self) -> Result<Self, CategoryError> {
        if self.source != self.target {
            return Err(shape_err("upper triangulation needs an endomorphism"));
        }
        let mm_inv = self.mm.inverse().map_err(|_| CategoryError::BlockNotInvertible)?;
        let x = self.source;
        let r = self.ring();
        Self::new(
            x,
            x,
            Matrix::identity(r, x.n),
            Matrix::zeros(r, x.n, x.m),
            (&mm_inv * &self.mn).neg(),
            Matrix::identity(r, x.m),
        )
    }

    /// The inverse, when both chain components are invertible over `B`.
    pub fn inverse(&self) -> Option<Self> {
        self.block_inverse().or_else(|| self.chain_inverse())
    }

    /// Inverse from the blocks and the Schur complements
    /// `nn - g·nm·mm⁻¹·mn` and `mm - g·mn·nn⁻¹·nm`, checked on both sides.
    fn block_inverse(&self) -> Option<Self> {
        let g = self.ring().uniformizer();
        let nn_inv = self.nn.inverse().ok()?;
        let mm_inv = self.mm.inverse().ok()?;
        let a = (&self.nn - &(&(&self.nm * &mm_inv) * &self.mn).scale(&g)).inverse().ok()?;
        let d = (&self.mm - &(&(&self.mn * &nn_inv) * &self.nm).scale(&g)).inverse().ok()?;
        let b = (&(&a * &self.nm) * &mm_inv).neg();
        let c = (&(&d * &self.mn) * &nn_inv).neg();
        let inv = Self::new(self.target, self.source, a, b, c, d).ok()?;
        let two_sided = inv.compose(self).ok()? == Self::identity(self.source)
            && self.compose(&inv).ok()? == Self::identity(self.target);
        two_sided.then_some(inv)
    }

    fn chain_inverse(&self) -> Option<Self> {
        let inv1 = self.degree_one().inverse().ok()?;
        let inv0 = self.degree_zero().inverse().ok()?;
        let f = ChainMap::from_parts(self.target.to_complex(), self.source.to_complex(), [(1, inv1), (0, inv0)]).ok()?;
        Self::from_chain_map(&f, self.target, self.source).ok()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.inverse().is_some()
    }

    /// Induced map on `H_0`: the residue of the `(n',n)` block.
    pub fn h0(&self) -> Matrix<R::Residue> {
        self.nn.residue()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "blocks": {
                "nn": self.nn.to_json(),
                "nm": self.nm.to_json(),
                "mn": self.mn.to_json(),
                "mm": self.mm.to_json(),
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ZLocal;

    fn z5() -> ZLocal {
        ZLocal::new(5).unwrap()
    }

    fn ints(r: ZLocal, rows: usize, cols: usize, v: &[i64]) -> Matrix<ZLocal> {
        Matrix::from_ints(r, rows, cols, v)
    }

    fn all_ones(r: ZLocal) -> CMorphism<ZLocal> {
        let x = CObject::new(r, 1, 1);
        let one = ints(r, 1, 1, &[1]);
        CMorphism::new(x, x, one.clone(), one.clone(), one.clone(), one).unwrap()
    }

    #[test]
    fn block_composition_example() {
        let r = z5();
        let phi = all_ones(r);
        let sq = phi.compose(&phi).unwrap();
        assert_eq!(sq.nn, ints(r, 1, 1, &[6]));
        assert_eq!(sq.mm, ints(r, 1, 1, &[6]));
        assert_eq!(sq.nm, ints(r, 1, 1, &[2]));
        assert_eq!(sq.to_chain_map(), phi.to_chain_map().compose(&phi.to_chain_map()));
        let id = CMorphism::identity(phi.source());
        assert_eq!(id.compose(&phi).unwrap(), phi);
        assert_eq!(phi.compose(&id).unwrap(), phi);
    }

    #[test]
    fn chain_map_form() {
        let r = z5();
        let phi = all_ones(r);
        assert_eq!(phi.degree_one(), ints(r, 2, 2, &[1, 1, 5, 1]));
        assert_eq!(phi.degree_zero(), ints(r, 2, 2, &[1, 5, 1, 1]));
        let back = CMorphism::from_chain_map(&phi.to_chain_map(), phi.source(), phi.target()).unwrap();
        assert_eq!(back, phi);
        let x = CObject::new(r, 2, 1);
        let id = CMorphism::identity(x);
        assert_eq!(id.to_chain_map(), ChainMap::identity(&x.to_complex()));
    }

    #[test]
    fn rejects_non_morphisms() {
        let r = z5();
        let x = CObject::new(r, 1, 1);
        // Degree 1 block (m',n) = 1 is not divisible by g.
        let f = ChainMap::from_parts(x.to_complex(), x.to_complex(), [(1, ints(r, 2, 2, &[1, 0, 1, 1])), (0, ints(r, 2, 2, &[1, 0, 1, 1]))]).unwrap();
        assert!(matches!(CMorphism::from_chain_map(&f, x, x), Err(CategoryError::NotAMorphismOfC(_))));
    }

    #[test]
    fn triangularity() {
        let r = z5();
        let x = CObject::new(r, 1, 1);
        let id = CMorphism::identity(x);
        assert!(id.is_upper_triangular() && id.is_lower_triangular());
        let one = ints(r, 1, 1, &[1]);
        let zero = ints(r, 1, 1, &[0]);
        let lower = CMorphism::new(x, x, one.clone(), zero, one.clone(), one.clone()).unwrap();
        assert!(lower.is_lower_triangular() && !lower.is_upper_triangular());
        let full = all_ones(r);
        assert!(!full.is_lower_triangular() && !full.is_upper_triangular());
    }

    #[test]
    fn upside_down() {
        let r = z5();
        assert_eq!(CObject::new(r, 2, 1).upside_down(), CObject::new(r, 1, 2));
        let id = CMorphism::identity(CObject::new(r, 2, 1));
        assert_eq!(id.upside_down(), CMorphism::identity(CObject::new(r, 1, 2)));
        let phi = all_ones(r);
        assert_eq!(phi.upside_down().upside_down(), phi);
    }

    #[test]
    fn upper_triangulation_example() {
        let r = z5();
        let x = CObject::new(r, 1, 1);
        let one = ints(r, 1, 1, &[1]);
        let zero = ints(r, 1, 1, &[0]);
        let phi = CMorphism::new(x, x, one.clone(), zero.clone(), one.clone(), one.clone()).unwrap();
        let ut = phi.upper_triangulation().unwrap();
        assert_eq!(ut, CMorphism::new(x, x, one.clone(), zero.clone(), ints(r, 1, 1, &[-1]), one.clone()).unwrap());
        let product = phi.compose(&ut).unwrap();
        assert!(product.is_upper_triangular());
        assert_eq!(product.nn, one);
        let id = CMorphism::identity(x);
        assert_eq!(id.upper_triangulation().unwrap(), id);
    }

    #[test]
    fn isomorphism_test() {
        let r = z5();
        let x = CObject::new(r, 2, 1);
        let id = CMorphism::identity(x);
        assert_eq!(id.inverse(), Some(id.clone()));
        let y = CObject::new(r, 1, 0);
        let five = ints(r, 1, 1, &[5]);
        let empty = Matrix::zeros(r, 1, 0);
        let phi = CMorphism::new(y, y, five, empty.clone(), empty.transpose(), Matrix::zeros(r, 0, 0)).unwrap();
        assert!(!phi.is_isomorphism());
        let full = all_ones(r);
        // det(degree one) = 1 - 5 = -4, a unit.
        let inv = full.inverse().unwrap();
        assert_eq!(full.compose(&inv).unwrap(), CMorphism::identity(full.source()));
    }

    #[test]
    fn residue_on_h0() {
        let r = z5();
        let x = CObject::new(r, 3, 2);
        assert_eq!(x.h0(), 3);
        assert!(CMorphism::identity(x).h0().is_identity());
    }
}
