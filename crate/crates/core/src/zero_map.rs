//! The projections `μ1, μ2` onto the torsion part, the comparison map `δ`,
//! and rectification of isomorphism chains into upper triangular form.

use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{Dvr, Matrix};
use crate::category::{classify, CMorphism, CObject, CategoryError};
use crate::chain::{ChainComplex, ChainError, ChainHomotopy, ChainMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZeroMapError {
    #[error("morphism is neither upper nor lower triangular")]
    NotTriangular,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("objects of the chain are not all equal")]
    ObjectsNotEqual,
    #[error("arrow {0} is not an isomorphism")]
    NotAnIsomorphism(usize),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// `μ1(φ) : (n,0) → (n',0)` with both components `φ_(n',n)`.
pub fn mu1<R: Dvr>(phi: &CMorphism<R>) -> CMorphism<R> {
    let r = phi.ring();
    let (s, t) = (phi.source(), phi.target());
    CMorphism::new(
        CObject::new(r, s.n, 0),
        CObject::new(r, t.n, 0),
        phi.nn.clone(),
        Matrix::zeros(r, t.n, 0),
        Matrix::zeros(r, 0, s.n),
        Matrix::zeros(r, 0, 0),
    )
    .expect("block shapes")
}

/// `μ2(φ) : (0,n) → (0,n')` with both components `φ_(n',n)`.
pub fn mu2<R: Dvr>(phi: &CMorphism<R>) -> CMorphism<R> {
    let r = phi.ring();
    let (s, t) = (phi.source(), phi.target());
    CMorphism::new(
        CObject::new(r, 0, s.n),
        CObject::new(r, 0, t.n),
        Matrix::zeros(r, 0, 0),
        Matrix::zeros(r, 0, s.n),
        Matrix::zeros(r, t.n, 0),
        phi.nn.clone(),
    )
    .expect("block shapes")
}

/// After forgetting the boundaries, `μ1(φ)` and `μ2(φ)` carry the same
/// modules and the same component matrices in each degree.
pub fn s1s2_equality_check<R: Dvr>(phi: &CMorphism<R>) -> bool {
    let (a, b) = (mu1(phi).to_chain_map(), mu2(phi).to_chain_map());
    [0, 1].iter().all(|&n| {
        a.source().rank(n) == b.source().rank(n)
            && a.target().rank(n) == b.target().rank(n)
            && a.component(n) == b.component(n)
    })
}

/// `δ : (n,m) → (n,0)` with homotopy inverse data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Delta<R: Dvr> {
    /// The projection `(E_n 0)` in both degrees.
    pub map: ChainMap<R>,
    /// The inclusion `(E_n; 0)` in both degrees.
    pub inverse: ChainMap<R>,
    /// Homotopy from `id` to `inverse ∘ map`, with `h_0 = diag(0, E_m)`.
    pub homotopy: ChainHomotopy<R>,
}

pub fn delta<R: Dvr>(x: CObject<R>) -> Delta<R> {
    let r = x.ring;
    let (n, m) = (x.n, x.m);
    let source = x.to_complex();
    let target = CObject::new(r, n, 0).to_complex();
    let proj = Matrix::identity(r, n).hstack(&Matrix::zeros(r, n, m));
    let incl = proj.transpose();
    let map = ChainMap::new(source.clone(), target.clone(), [(1, proj.clone()), (0, proj)]).expect("δ is a chain map");
    let inverse = ChainMap::new(target, source.clone(), [(1, incl.clone()), (0, incl)]).expect("inclusion is a chain map");
    let h0 = Matrix::zeros(r, n, n).direct_sum(&Matrix::identity(r, m));
    let homotopy = ChainHomotopy::new(ChainMap::identity(&source), inverse.compose(&map), [(0, h0)])
        .expect("diag(0, E_m) contracts the unit part");
    Delta { map, inverse, homotopy }
}

/// How `δ` commutes with a triangular morphism `φ : x → y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeltaNaturality<R: Dvr> {
    /// Lower triangular: `μ1(φ) δ_x = δ_y φ` exactly.
    Strict,
    /// Upper triangular: the unique homotopy from `μ1(φ) δ_x` to `δ_y φ`,
    /// and their difference as a morphism `x → (n',0)`.
    Homotopy { homotopy: ChainHomotopy<R>, difference: CMorphism<R> },
}

pub fn delta_naturality<R: Dvr>(phi: &CMorphism<R>) -> Result<DeltaNaturality<R>, ZeroMapError> {
    let upper = phi.is_upper_triangular();
    let lower = phi.is_lower_triangular();
    if !upper && !lower {
        return Err(ZeroMapError::NotTriangular);
    }
    let (x, y) = (phi.source(), phi.target());
    let along_mu = mu1(phi).to_chain_map().compose(&delta(x).map);
    let along_eta = delta(y).map.compose(&phi.to_chain_map());
    if lower {
        return if along_mu == along_eta {
            Ok(DeltaNaturality::Strict)
        } else {
            Err(ZeroMapError::PreconditionViolated("lower triangular square does not commute".into()))
        };
    }
    let diff = along_mu.sub(&along_eta);
    let difference = CMorphism::from_chain_map(&diff, x, CObject::new(x.ring, y.n, 0))?;
    // The target boundary is g·E, so h_0 is forced: h_0 = diff_0 / g.
    let h0 = diff
        .component(0)
        .divide_by(&x.ring.uniformizer())
        .ok_or_else(|| ZeroMapError::PreconditionViolated("difference is not divisible by g".into()))?;
    let homotopy = ChainHomotopy::new(along_mu, along_eta, [(0, h0)])?;
    Ok(DeltaNaturality::Homotopy { homotopy, difference })
}

/// A chain of isomorphisms `x(0) → x(1) → … → x(n)` in the category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoChain<R: Dvr> {
    objects: Vec<CObject<R>>,
    arrows: Vec<CMorphism<R>>,
}

impl<R: Dvr> IsoChain<R> {
    pub fn new(objects: Vec<CObject<R>>, arrows: Vec<CMorphism<R>>) -> Result<Self, ZeroMapError> {
        if objects.is_empty() || arrows.len() + 1 != objects.len() {
            return Err(ZeroMapError::PreconditionViolated("a chain of length n has n + 1 objects".into()));
        }
        for (i, a) in arrows.iter().enumerate() {
            if a.source() != objects[i] || a.target() != objects[i + 1] {
                return Err(ZeroMapError::PreconditionViolated(format!("arrow {i} has the wrong endpoints")));
            }
            if !a.is_isomorphism() {
                return Err(ZeroMapError::NotAnIsomorphism(i));
            }
        }
        Ok(IsoChain { objects, arrows })
    }

    pub fn identities(x: CObject<R>, length: usize) -> Self {
        IsoChain { objects: vec![x; length + 1], arrows: vec![CMorphism::identity(x); length] }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn objects(&self) -> &[CObject<R>] {
        &self.objects
    }

    pub fn arrows(&self) -> &[CMorphism<R>] {
        &self.arrows
    }

    /// Whether each arrow is upper triangular.
    pub fn flags(&self) -> Vec<bool> {
        self.arrows.iter().map(CMorphism::is_upper_triangular).collect()
    }

    /// Whether arrows `k..` are all upper triangular.
    pub fn in_class(&self, k: usize) -> bool {
        self.arrows.iter().skip(k).all(CMorphism::is_upper_triangular)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "objects": self.objects.iter().map(CObject::to_json).collect::<Vec<_>>(),
            "arrows": self.arrows.iter().map(CMorphism::to_json).collect::<Vec<_>>(),
            "flags": self.flags(),
        })
    }
}

/// Output of one rectification step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rectified<R: Dvr> {
    pub chain: IsoChain<R>,
    /// The natural equivalence `q_k(x) → x`: `α` at position `k`, identities elsewhere.
    pub gamma: Vec<CMorphism<R>>,
    /// `α = UT(x(k ≤ k+1))`.
    pub alpha: CMorphism<R>,
}

/// Moves a chain whose arrows `k+1..` are upper triangular into the class
/// where arrows `k..` are, twisting by `α = UT(x(k ≤ k+1))`.
pub fn rectify<R: Dvr>(chain: &IsoChain<R>, k: usize) -> Result<Rectified<R>, ZeroMapError> {
    if k >= chain.len() {
        return Err(ZeroMapError::PreconditionViolated(format!("k = {k} but the chain has {} arrows", chain.len())));
    }
    if !chain.in_class(k + 1) {
        return Err(ZeroMapError::PreconditionViolated(format!("arrows after {k} must be upper triangular")));
    }
    let x = chain.objects[0];
    if chain.objects.iter().any(|o| *o != x) {
        return Err(ZeroMapError::ObjectsNotEqual);
    }
    let alpha = chain.arrows[k].upper_triangulation()?;
    let alpha_inv = alpha.inverse().ok_or(ZeroMapError::NotAnIsomorphism(k))?;
    let mut arrows = chain.arrows.clone();
    if k >= 1 {
        arrows[k - 1] = alpha_inv.compose(&chain.arrows[k - 1])?;
    }
    arrows[k] = chain.arrows[k].compose(&alpha)?;
    let gamma = (0..chain.objects.len())
        .map(|i| if i == k { alpha.clone() } else { CMorphism::identity(x) })
        .collect();
    Ok(Rectified { chain: IsoChain { objects: chain.objects.clone(), arrows }, gamma, alpha })
}

/// `q_k(θ)` for a morphism of chains `θ : x → y`: `α_y⁻¹ θ(k) α_x` at `k`.
pub fn rectify_morphism<R: Dvr>(
    theta: &[CMorphism<R>],
    x: &Rectified<R>,
    y: &Rectified<R>,
    k: usize,
) -> Result<Vec<CMorphism<R>>, ZeroMapError> {
    let alpha_y_inv = y.alpha.inverse().ok_or(ZeroMapError::NotAnIsomorphism(k))?;
    theta
        .iter()
        .enumerate()
        .map(|(i, t)| {
            if i == k {
                Ok(alpha_y_inv.compose(&t.compose(&x.alpha)?)?)
            } else {
                Ok(t.clone())
            }
        })
        .collect()
}

/// Whether `theta` (one morphism per object) commutes with the arrows of
/// `from` and `to`: `to(i ≤ i+1) θ(i) = θ(i+1) from(i ≤ i+1)`.
pub fn is_chain_morphism<R: Dvr>(theta: &[CMorphism<R>], from: &IsoChain<R>, to: &IsoChain<R>) -> bool {
    if theta.len() != from.objects.len() || theta.len() != to.objects.len() {
        return false;
    }
    (0..from.len()).all(|i| {
        let left = to.arrows[i].compose(&theta[i]);
        let right = theta[i + 1].compose(&from.arrows[i]);
        matches!((left, right), (Ok(l), Ok(r)) if l == r)
    })
}

/// Replaces a chain of isomorphisms between arbitrary two-term complexes
/// by an [`IsoChain`] of standard objects, using [`classify`] on each term.
/// Returns the chain and the transport isomorphisms `x(i) → standard`.
pub fn normalize_chain<R: Dvr>(
    complexes: &[ChainComplex<R>],
    arrows: &[ChainMap<R>],
) -> Result<(IsoChain<R>, Vec<ChainMap<R>>), ZeroMapError> {
    if complexes.is_empty() || arrows.len() + 1 != complexes.len() {
        return Err(ZeroMapError::PreconditionViolated("a chain of length n has n + 1 objects".into()));
    }
    let classes = complexes.iter().map(classify).collect::<Result<Vec<_>, _>>()?;
    let inverses = classes
        .iter()
        .map(|c| invert_chain_map(&c.witness))
        .collect::<Result<Vec<_>, _>>()?;
    let mut transported = Vec::with_capacity(arrows.len());
    for (i, f) in arrows.iter().enumerate() {
        let g = classes[i + 1].witness.try_compose(&f.try_compose(&inverses[i])?)?;
        transported.push(CMorphism::from_chain_map(&g, classes[i].object, classes[i + 1].object)?);
    }
    let objects = classes.iter().map(|c| c.object).collect();
    let chain = IsoChain::new(objects, transported)?;
    Ok((chain, classes.into_iter().map(|c| c.witness).collect()))
}

fn invert_chain_map<R: Dvr>(f: &ChainMap<R>) -> Result<ChainMap<R>, ZeroMapError> {
    let mut components = Vec::new();
    if let Some((lo, hi)) = f.source().support() {
        for n in lo..=hi {
            components.push((n, f.component(n).inverse().map_err(ChainError::from)?));
        }
    }
    Ok(ChainMap::new(f.target().clone(), f.source().clone(), components)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ZLocal;
    use crate::chain::is_quasi_iso;

    fn z5() -> ZLocal {
        ZLocal::new(5).unwrap()
    }

    fn ints(r: ZLocal, rows: usize, cols: usize, v: &[i64]) -> Matrix<ZLocal> {
        Matrix::from_ints(r, rows, cols, v)
    }

    fn one_one(r: ZLocal, nn: i64, nm: i64, mn: i64, mm: i64) -> CMorphism<ZLocal> {
        let x = CObject::new(r, 1, 1);
        CMorphism::new(x, x, ints(r, 1, 1, &[nn]), ints(r, 1, 1, &[nm]), ints(r, 1, 1, &[mn]), ints(r, 1, 1, &[mm])).unwrap()
    }

    #[test]
    fn mu_images() {
        let r = z5();
        let id = CMorphism::identity(CObject::new(r, 2, 1));
        assert_eq!(mu1(&id), CMorphism::identity(CObject::new(r, 2, 0)));
        let phi = one_one(r, 1, 1, 1, 1);
        assert_eq!(mu1(&phi).nn, ints(r, 1, 1, &[1]));
        assert!(s1s2_equality_check(&phi));
        assert!(s1s2_equality_check(&CMorphism::zero(phi.source(), phi.target())));
    }

    #[test]
    fn delta_examples() {
        let r = z5();
        let torsion = CObject::new(r, 2, 0);
        assert_eq!(delta(torsion).map, ChainMap::identity(&torsion.to_complex()));
        let unit = CObject::new(r, 0, 2);
        assert!(delta(unit).map.target().is_zero());
        let d = delta(CObject::new(r, 1, 1));
        assert_eq!(d.map.component(1), ints(r, 1, 2, &[1, 0]));
        assert!(is_quasi_iso(&d.map));
        assert!(d.map.compose(&d.inverse).component(0).is_identity());
    }

    #[test]
    fn naturality_cases() {
        let r = z5();
        let id = CMorphism::identity(CObject::new(r, 1, 1));
        assert_eq!(delta_naturality(&id), Ok(DeltaNaturality::Strict));
        let upper = one_one(r, 1, 1, 0, 1);
        match delta_naturality(&upper).unwrap() {
            DeltaNaturality::Homotopy { homotopy, difference } => {
                assert_eq!(homotopy.component(0), ints(r, 1, 2, &[0, -1]));
                assert_eq!(difference.nm, ints(r, 1, 1, &[-1]));
                assert!(difference.nn.is_zero());
            }
            DeltaNaturality::Strict => panic!("upper triangular with a non-zero corner is not strict"),
        }
        assert_eq!(delta_naturality(&one_one(r, 1, 1, 1, 1)), Err(ZeroMapError::NotTriangular));
    }

    #[test]
    fn rectify_identities_is_a_fixed_point() {
        let r = z5();
        let chain = IsoChain::identities(CObject::new(r, 1, 1), 2);
        let out = rectify(&chain, 0).unwrap();
        assert_eq!(out.chain, chain);
        assert!(out.gamma.iter().all(|g| *g == CMorphism::identity(CObject::new(r, 1, 1))));
    }

    #[test]
    fn rectify_single_arrow() {
        let r = z5();
        let phi = one_one(r, 1, 0, 1, 1);
        let x = phi.source();
        let chain = IsoChain::new(vec![x, x], vec![phi.clone()]).unwrap();
        let out = rectify(&chain, 0).unwrap();
        let ut = phi.upper_triangulation().unwrap();
        assert_eq!(out.chain.arrows()[0], phi.compose(&ut).unwrap());
        assert!(out.chain.in_class(0));
        assert_eq!(out.gamma[0], ut);
        assert!(out.gamma.iter().all(CMorphism::is_lower_triangular));
        assert!(is_chain_morphism(&out.gamma, &out.chain, &chain));
        // A second pass changes nothing.
        assert_eq!(rectify(&out.chain, 0).unwrap().chain, out.chain);
    }

    #[test]
    fn rectify_preconditions() {
        let r = z5();
        let phi = one_one(r, 1, 0, 1, 1);
        let x = phi.source();
        let chain = IsoChain::new(vec![x, x, x], vec![phi.clone(), phi]).unwrap();
        assert!(matches!(rectify(&chain, 0), Err(ZeroMapError::PreconditionViolated(_))));
        assert!(rectify(&chain, 1).is_ok());
        assert!(IsoChain::new(vec![x, x], vec![one_one(r, 5, 0, 0, 1)]).is_err());
    }

    #[test]
    fn normalize_permuted_chain() {
        let r = z5();
        let x = ChainComplex::two_term(ints(r, 2, 2, &[0, 1, 5, 0])).unwrap();
        let swap = ints(r, 2, 2, &[0, 1, 1, 0]);
        let y = ChainComplex::two_term(&(&swap * &x.d(1)) * &swap).unwrap();
        let f = ChainMap::new(x.clone(), y.clone(), [(1, swap.clone()), (0, swap)]).unwrap();
        let (chain, transports) = normalize_chain(&[x, y], &[f]).unwrap();
        assert_eq!(chain.objects(), &[CObject::new(r, 1, 1); 2]);
        assert_eq!(transports.len(), 2);
    }
}
