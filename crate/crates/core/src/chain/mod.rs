//! Bounded chain complexes of finite free modules, in homological indexing.
//!
//! Complexes, maps and homotopies are stored sparsely: zero ranks and zero
//! matrices are dropped on construction, so derived equality is exact
//! degreewise equality.

mod cone;
mod homology;
mod homotopy;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{Map, Value};
use thiserror::Error;

use crate::algebra::{AlgebraError, Matrix, Ring};

pub use cone::{cone, cone_map, cone_of_sum_split, iota, mapping_cone, r_map};
pub use homology::{homology, is_acyclic, is_quasi_iso, HomologyGroup};
pub use homotopy::{star, CHomotopy, ChainHomotopy, HSquare};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("d∘d ≠ 0 at degree {0}")]
    NotAComplex(i32),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("components do not commute with the boundary at degree {0}")]
    NotAChainMap(i32),
    #[error("homotopy identity fails at degree {0}")]
    NotAHomotopy(i32),
    #[error("second block of the C-homotopy differs from f - g at degree {0}")]
    BlockMismatch(i32),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn shape_err(what: impl Into<String>) -> ChainError {
    ChainError::ShapeMismatch(what.into())
}

/// Smallest and largest degree with a non-zero module, over several complexes.
fn span<'a, R: Ring + 'a>(complexes: impl IntoIterator<Item = &'a ChainComplex<R>>) -> Option<(i32, i32)> {
    complexes
        .into_iter()
        .filter_map(ChainComplex::support)
        .reduce(|(a, b), (c, d)| (a.min(c), b.max(d)))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChainComplex<R: Ring> {
    ring: R,
    ranks: BTreeMap<i32, usize>,
    d: Arc<BTreeMap<i32, Matrix<R>>>,
}

impl<R: Ring> ChainComplex<R> {
    /// Validates shapes (`d_n` is `rank(n-1) × rank(n)`) and `d∘d = 0`.
    pub fn new(
        ring: R,
        ranks: impl IntoIterator<Item = (i32, usize)>,
        boundaries: impl IntoIterator<Item = (i32, Matrix<R>)>,
    ) -> Result<Self, ChainError> {
        let ranks: BTreeMap<i32, usize> = ranks.into_iter().filter(|&(_, r)| r > 0).collect();
        let mut x = ChainComplex { ring, ranks, d: Arc::default() };
        let mut d = BTreeMap::new();
        for (n, m) in boundaries {
            if m.shape() != (x.rank(n - 1), x.rank(n)) {
                return Err(shape_err(format!(
                    "d_{n} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    x.rank(n - 1),
                    x.rank(n)
                )));
            }
            if !m.is_zero() {
                d.insert(n, m);
            }
        }
        for (&n, m) in &d {
            if let Some(next) = d.get(&(n + 1)) {
                if !(m * next).is_zero() {
                    return Err(ChainError::NotAComplex(n));
                }
            }
        }
        x.d = Arc::new(d);
        Ok(x)
    }

    pub fn zero(ring: R) -> Self {
        ChainComplex { ring, ranks: BTreeMap::new(), d: Arc::default() }
    }

    /// `B^rank` in a single degree.
    pub fn concentrated(ring: R, degree: i32, rank: usize) -> Self {
        Self::new(ring, [(degree, rank)], []).expect("no boundaries")
    }

    /// `[x_1 --d--> x_0]` in degrees 1 and 0.
    pub fn two_term(d: Matrix<R>) -> Result<Self, ChainError> {
        Self::new(d.ring(), [(1, d.cols()), (0, d.rows())], [(1, d)])
    }

    pub fn ring(&self) -> R {
        self.ring
    }

    pub fn rank(&self, n: i32) -> usize {
        self.ranks.get(&n).copied().unwrap_or(0)
    }

    /// `d_n : x_n → x_{n-1}`, zero where not stored.
    pub fn d(&self, n: i32) -> Matrix<R> {
        self.d
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.ring, self.rank(n - 1), self.rank(n)))
    }

    /// Lowest and highest degree with a non-zero module.
    pub fn support(&self) -> Option<(i32, i32)> {
        Some((*self.ranks.keys().next()?, *self.ranks.keys().next_back()?))
    }

    pub fn is_zero(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn ranks(&self) -> &BTreeMap<i32, usize> {
        &self.ranks
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let degrees = span([self, other]);
        let mut ranks = BTreeMap::new();
        let mut d = Vec::new();
        if let Some((lo, hi)) = degrees {
            for n in lo..=hi {
                ranks.insert(n, self.rank(n) + other.rank(n));
                d.push((n, self.d(n).direct_sum(&other.d(n))));
            }
        }
        Self::new(self.ring, ranks, d).expect("direct sum of complexes")
    }

    pub fn to_json(&self) -> Value {
        let ranks: Map<String, Value> = self.ranks.iter().map(|(n, r)| (n.to_string(), (*r).into())).collect();
        let d: Map<String, Value> = self.d.iter().map(|(n, m)| (n.to_string(), m.to_json())).collect();
        serde_json::json!({ "ranks": ranks, "d": d })
    }

    pub fn from_json(ring: R, value: &Value) -> Result<Self, ChainError> {
        let bad = |reason: &str| AlgebraError::Parse { input: value.to_string(), reason: reason.into() };
        let ranks = value.get("ranks").and_then(Value::as_object).ok_or_else(|| bad("missing `ranks`"))?;
        let ranks = ranks
            .iter()
            .map(|(k, v)| {
                let n: i32 = k.parse().map_err(|_| bad("degree keys must be integers"))?;
                let r = v.as_u64().ok_or_else(|| bad("ranks must be non-negative integers"))?;
                Ok((n, r as usize))
            })
            .collect::<Result<Vec<_>, AlgebraError>>()?;
        let empty = Map::new();
        let d = match value.get("d") {
            None => &empty,
            Some(v) => v.as_object().ok_or_else(|| bad("`d` must be an object"))?,
        };
        let d = d
            .iter()
            .map(|(k, v)| {
                let n: i32 = k.parse().map_err(|_| bad("degree keys must be integers"))?;
                Ok((n, Matrix::from_json(ring, v)?))
            })
            .collect::<Result<Vec<_>, AlgebraError>>()?;
        Self::new(ring, ranks, d)
    }
}

/// Degreewise map `f_n : x_n → y_n` commuting with the boundaries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChainMap<R: Ring> {
    source: ChainComplex<R>,
    target: ChainComplex<R>,
    components: BTreeMap<i32, Matrix<R>>,
}

impl<R: Ring> ChainMap<R> {
    pub fn new(
        source: ChainComplex<R>,
        target: ChainComplex<R>,
        components: impl IntoIterator<Item = (i32, Matrix<R>)>,
    ) -> Result<Self, ChainError> {
        let f = Self::from_parts(source, target, components)?;
        f.check_commutes()?;
        Ok(f)
    }

    /// Shape-checked but not required to commute with the boundaries.
    pub fn from_parts(
        source: ChainComplex<R>,
        target: ChainComplex<R>,
        components: impl IntoIterator<Item = (i32, Matrix<R>)>,
    ) -> Result<Self, ChainError> {
        let mut stored = BTreeMap::new();
        for (n, m) in components {
            if m.shape() != (target.rank(n), source.rank(n)) {
                return Err(shape_err(format!(
                    "component {n} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.rank(n),
                    source.rank(n)
                )));
            }
            if !m.is_zero() {
                stored.insert(n, m);
            }
        }
        Ok(ChainMap { source, target, components: stored })
    }

    /// Builds components degree by degree over the joint support and checks
    /// that they commute with the boundaries.
    pub fn from_fn(
        source: ChainComplex<R>,
        target: ChainComplex<R>,
        mut component: impl FnMut(i32) -> Matrix<R>,
    ) -> Result<Self, ChainError> {
        let components: Vec<_> = span([&source, &target])
            .map(|(lo, hi)| (lo..=hi).map(|n| (n, component(n))).collect())
            .unwrap_or_default();
        Self::new(source, target, components)
    }

    fn check_commutes(&self) -> Result<(), ChainError> {
        if let Some((lo, hi)) = span([&self.source, &self.target]) {
            for n in lo..=hi + 1 {
                let left = &self.target.d(n) * &self.component(n);
                let right = &self.component(n - 1) * &self.source.d(n);
                if left != right {
                    return Err(ChainError::NotAChainMap(n));
                }
            }
        }
        Ok(())
    }

    pub fn is_chain_map(&self) -> bool {
        self.check_commutes().is_ok()
    }

    pub fn identity(x: &ChainComplex<R>) -> Self {
        let components = x.ranks.iter().map(|(&n, &r)| (n, Matrix::identity(x.ring, r)));
        Self::from_parts(x.clone(), x.clone(), components).expect("identity")
    }

    pub fn zero(source: &ChainComplex<R>, target: &ChainComplex<R>) -> Self {
        ChainMap { source: source.clone(), target: target.clone(), components: BTreeMap::new() }
    }

    pub fn source(&self) -> &ChainComplex<R> {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex<R> {
        &self.target
    }

    pub fn ring(&self) -> R {
        self.source.ring
    }

    pub fn component(&self, n: i32) -> Matrix<R> {
        self.components
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.ring(), self.target.rank(n), self.source.rank(n)))
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    fn degrees(&self) -> Vec<i32> {
        match span([&self.source, &self.target]) {
            Some((lo, hi)) => (lo..=hi).collect(),
            None => Vec::new(),
        }
    }

    /// `self ∘ inner`.
    pub fn try_compose(&self, inner: &Self) -> Result<Self, ChainError> {
        if inner.target != self.source {
            return Err(shape_err("composition: target of the inner map is not the source of the outer"));
        }
        let components = inner
            .components
            .iter()
            .filter_map(|(n, b)| self.components.get(n).map(|a| (*n, a * b)))
            .filter(|(_, m)| !m.is_zero())
            .collect();
        Ok(ChainMap { source: inner.source.clone(), target: self.target.clone(), components })
    }

    /// Whether `self = outer ∘ inner`, comparing components only.
    pub fn is_composite(&self, outer: &Self, inner: &Self) -> bool {
        let mut expected = 0;
        for (n, b) in &inner.components {
            let Some(a) = outer.components.get(n) else { continue };
            let product = a * b;
            if product.is_zero() {
                continue;
            }
            expected += 1;
            if self.components.get(n) != Some(&product) {
                return false;
            }
        }
        expected == self.components.len()
    }

    pub fn compose(&self, inner: &Self) -> Self {
        self.try_compose(inner).expect("composable chain maps")
    }

    fn zip(&self, other: &Self, f: impl Fn(&Matrix<R>, &Matrix<R>) -> Matrix<R>) -> Result<Self, ChainError> {
        if self.source != other.source || self.target != other.target {
            return Err(shape_err("chain maps have different endpoints"));
        }
        let components = self.degrees().into_iter().map(|n| (n, f(&self.component(n), &other.component(n))));
        Self::from_parts(self.source.clone(), self.target.clone(), components)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ChainError> {
        self.zip(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ChainError> {
        self.zip(other, |a, b| a - b)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("same endpoints")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.try_sub(other).expect("same endpoints")
    }

    pub fn neg(&self) -> Self {
        self.scale(&self.ring().from_int(-1))
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let components = self.components.iter().map(|(&n, m)| (n, m.scale(c)));
        Self::from_parts(self.source.clone(), self.target.clone(), components).expect("same shapes")
    }

    /// `(f; g) : x → y ⊕ z` for `f : x → y`, `g : x → z`.
    pub fn pair(f: &Self, g: &Self) -> Result<Self, ChainError> {
        if f.source != g.source {
            return Err(shape_err("pair: maps have different sources"));
        }
        let target = f.target.direct_sum(&g.target);
        let components = span([&f.source, &target])
            .map(|(lo, hi)| (lo..=hi).map(|n| (n, f.component(n).vstack(&g.component(n)))).collect())
            .unwrap_or_else(Vec::new);
        Self::from_parts(f.source.clone(), target, components)
    }

    /// `(f g) : x ⊕ y → z` for `f : x → z`, `g : y → z`.
    pub fn copair(f: &Self, g: &Self) -> Result<Self, ChainError> {
        if f.target != g.target {
            return Err(shape_err("copair: maps have different targets"));
        }
        let source = f.source.direct_sum(&g.source);
        let components = span([&source, &f.target])
            .map(|(lo, hi)| (lo..=hi).map(|n| (n, f.component(n).hstack(&g.component(n)))).collect())
            .unwrap_or_else(Vec::new);
        Self::from_parts(source, f.target.clone(), components)
    }

    /// `(a b; c d) : x ⊕ y → z ⊕ w`.
    pub fn block2(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self, ChainError> {
        Self::pair(&Self::copair(a, b)?, &Self::copair(c, d)?)
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let zero_xy = Self::zero(&self.source, &other.target);
        let zero_yx = Self::zero(&other.source, &self.target);
        Self::block2(self, &zero_yx, &zero_xy, other).expect("direct sum")
    }

    pub fn to_json(&self) -> Value {
        let components: Map<String, Value> =
            self.components.iter().map(|(n, m)| (n.to_string(), m.to_json())).collect();
        serde_json::json!({
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "components": components,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Ring, ZLocal};

    fn z5() -> ZLocal {
        ZLocal::new(5).unwrap()
    }

    fn five(r: ZLocal) -> ChainComplex<ZLocal> {
        ChainComplex::two_term(Matrix::from_ints(r, 1, 1, &[5])).unwrap()
    }

    #[test]
    fn valid_complexes() {
        let r = z5();
        let x = ChainComplex::concentrated(r, 0, 1);
        assert_eq!(x.support(), Some((0, 0)));
        assert_eq!(five(r).d(1), Matrix::from_ints(r, 1, 1, &[5]));
        assert_eq!(five(r).d(2).shape(), (1, 0));
    }

    #[test]
    fn rejects_non_complexes() {
        let r = z5();
        let one = Matrix::from_ints(r, 1, 1, &[1]);
        let bad = ChainComplex::new(r, [(0, 1), (1, 1), (2, 1)], [(1, one.clone()), (2, one.clone())]);
        assert_eq!(bad, Err(ChainError::NotAComplex(1)));
        let shape = ChainComplex::new(r, [(0, 2), (1, 1)], [(1, one)]);
        assert!(matches!(shape, Err(ChainError::ShapeMismatch(_))));
    }

    #[test]
    fn chain_map_commutation() {
        let r = z5();
        let x = five(r);
        let y = ChainComplex::two_term(Matrix::from_ints(r, 1, 1, &[1])).unwrap();
        // (f_1, f_0) = (5, 1): 1·5 = 1·5 commutes.
        let f = ChainMap::new(x.clone(), y.clone(), [(1, Matrix::from_ints(r, 1, 1, &[5])), (0, Matrix::from_ints(r, 1, 1, &[1]))]);
        assert!(f.is_ok());
        let g = ChainMap::new(x, y, [(1, Matrix::from_ints(r, 1, 1, &[1]))]);
        assert_eq!(g, Err(ChainError::NotAChainMap(1)));
    }

    #[test]
    fn sums_and_blocks() {
        let r = z5();
        let x = five(r);
        let id = ChainMap::identity(&x);
        let s = id.direct_sum(&id);
        assert_eq!(s, ChainMap::identity(&x.direct_sum(&x)));
        assert!(s.is_chain_map());
        let twice = id.add(&id);
        assert_eq!(twice.component(0), Matrix::from_ints(r, 1, 1, &[2]));
        assert!(id.sub(&id).is_zero());
        assert_eq!(id.compose(&id), id);
        assert_eq!(r.from_int(-1), id.neg().component(1).get(0, 0).clone());
    }

    #[test]
    fn json_round_trip() {
        let r = z5();
        let x = five(r).direct_sum(&ChainComplex::concentrated(r, 2, 1));
        assert_eq!(ChainComplex::from_json(r, &x.to_json()).unwrap(), x);
    }
}
