use std::collections::BTreeMap;

use crate::algebra::{Matrix, Ring};

use super::{cone, cone_map, iota, shape_err, span, ChainComplex, ChainError, ChainMap};

/// Components `h_n : x_n → y_{n+1}` with `d h + h d = f - g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainHomotopy<R: Ring> {
    f: ChainMap<R>,
    g: ChainMap<R>,
    components: BTreeMap<i32, Matrix<R>>,
}

impl<R: Ring> ChainHomotopy<R> {
    pub fn new(
        f: ChainMap<R>,
        g: ChainMap<R>,
        components: impl IntoIterator<Item = (i32, Matrix<R>)>,
    ) -> Result<Self, ChainError> {
        if f.source() != g.source() || f.target() != g.target() {
            return Err(shape_err("homotopy between maps with different endpoints"));
        }
        let (x, y) = (f.source().clone(), f.target().clone());
        let mut stored = BTreeMap::new();
        for (n, m) in components {
            if m.shape() != (y.rank(n + 1), x.rank(n)) {
                return Err(shape_err(format!("h_{n} has the wrong shape")));
            }
            if !m.is_zero() {
                stored.insert(n, m);
            }
        }
        let h = ChainHomotopy { f, g, components: stored };
        if let Some((lo, hi)) = span([&x, &y]) {
            for n in lo..=hi {
                let lhs = &(&y.d(n + 1) * &h.component(n)) + &(&h.component(n - 1) * &x.d(n));
                let rhs = &h.f.component(n) - &h.g.component(n);
                if lhs != rhs {
                    return Err(ChainError::NotAHomotopy(n));
                }
            }
        }
        Ok(h)
    }

    pub fn f(&self) -> &ChainMap<R> {
        &self.f
    }

    pub fn g(&self) -> &ChainMap<R> {
        &self.g
    }

    pub fn component(&self, n: i32) -> Matrix<R> {
        self.components.get(&n).cloned().unwrap_or_else(|| {
            Matrix::zeros(self.f.ring(), self.f.target().rank(n + 1), self.f.source().rank(n))
        })
    }

    /// `H_n = (-h_{n-1}, f_n - g_n) : Cx → y`.
    pub fn to_c_homotopy(&self) -> CHomotopy<R> {
        let (x, y) = (self.f.source(), self.f.target());
        let cx = cone(x);
        let components = match span([&cx, y]) {
            Some((lo, hi)) => (lo..=hi)
                .map(|n| {
                    let diff = &self.f.component(n) - &self.g.component(n);
                    (n, self.component(n - 1).neg().hstack(&diff))
                })
                .collect(),
            None => Vec::new(),
        };
        let map = ChainMap::new(cx, y.clone(), components).expect("a chain homotopy yields a chain map");
        CHomotopy { f: self.f.clone(), g: self.g.clone(), map }
    }
}

/// A chain map `H : Cx → y` with `H ι_x = f - g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CHomotopy<R: Ring> {
    f: ChainMap<R>,
    g: ChainMap<R>,
    map: ChainMap<R>,
}

impl<R: Ring> CHomotopy<R> {
    pub fn new(f: ChainMap<R>, g: ChainMap<R>, map: ChainMap<R>) -> Result<Self, ChainError> {
        check_witness(&map, &f.sub(&g), f.source())?;
        Ok(CHomotopy { f, g, map })
    }

    /// The zero C-homotopy from `f` to itself.
    pub fn zero(f: &ChainMap<R>) -> Self {
        let map = ChainMap::zero(&cone(f.source()), f.target());
        CHomotopy { f: f.clone(), g: f.clone(), map }
    }

    pub fn f(&self) -> &ChainMap<R> {
        &self.f
    }

    pub fn g(&self) -> &ChainMap<R> {
        &self.g
    }

    pub fn map(&self) -> &ChainMap<R> {
        &self.map
    }

    /// `h_{n-1} = -(first block of H_n)`; the second block must equal `f_n - g_n`.
    pub fn to_chain_homotopy(&self) -> Result<ChainHomotopy<R>, ChainError> {
        let x = self.f.source();
        let mut components = Vec::new();
        if let Some((lo, hi)) = span([&cone(x), self.f.target()]) {
            for n in lo..=hi {
                let h_n = self.map.component(n);
                let split = x.rank(n - 1);
                let first = h_n.submatrix(0, h_n.rows(), 0, split);
                let second = h_n.submatrix(0, h_n.rows(), split, h_n.cols());
                if second != &self.f.component(n) - &self.g.component(n) {
                    return Err(ChainError::BlockMismatch(n));
                }
                components.push((n - 1, first.neg()));
            }
        }
        ChainHomotopy::new(self.f.clone(), self.g.clone(), components)
    }
}

/// Checks that `map : Cx → y` is a chain map with `map ι_x = expected`.
fn check_witness<R: Ring>(map: &ChainMap<R>, expected: &ChainMap<R>, x: &ChainComplex<R>) -> Result<(), ChainError> {
    if map.source() != &cone(x) || map.target() != expected.target() {
        return Err(shape_err("witness must be a map Cx → y"));
    }
    if !map.is_chain_map() {
        return Err(shape_err("witness is not a chain map"));
    }
    let restricted = map.compose(&iota(x));
    if let Some((lo, hi)) = span([x, expected.target()]) {
        for n in lo..=hi {
            if restricted.component(n) != expected.component(n) {
                return Err(ChainError::NotAHomotopy(n));
            }
        }
    }
    Ok(())
}

/// A homotopy commutative square `(a, b, H)` from `[f : x → x']` to
/// `[g : y → y']`, with `H ι_x = g a - b f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HSquare<R: Ring> {
    pub f: ChainMap<R>,
    pub g: ChainMap<R>,
    pub a: ChainMap<R>,
    pub b: ChainMap<R>,
    pub witness: ChainMap<R>,
}

impl<R: Ring> HSquare<R> {
    pub fn new(
        f: ChainMap<R>,
        g: ChainMap<R>,
        a: ChainMap<R>,
        b: ChainMap<R>,
        witness: ChainMap<R>,
    ) -> Result<Self, ChainError> {
        let square = HSquare { f, g, a, b, witness };
        square.validate()?;
        Ok(square)
    }

    /// A strictly commuting square with zero witness.
    pub fn strict(f: ChainMap<R>, g: ChainMap<R>, a: ChainMap<R>, b: ChainMap<R>) -> Result<Self, ChainError> {
        let witness = ChainMap::zero(&cone(f.source()), g.target());
        Self::new(f, g, a, b, witness)
    }

    pub fn identity(f: &ChainMap<R>) -> Self {
        Self::strict(f.clone(), f.clone(), ChainMap::identity(f.source()), ChainMap::identity(f.target()))
            .expect("identity square")
    }

    pub fn validate(&self) -> Result<(), ChainError> {
        let endpoints_ok = self.a.source() == self.f.source()
            && self.a.target() == self.g.source()
            && self.b.source() == self.f.target()
            && self.b.target() == self.g.target();
        if !endpoints_ok {
            return Err(shape_err("square maps do not connect f to g"));
        }
        let expected = self.g.try_compose(&self.a)?.try_sub(&self.b.try_compose(&self.f)?)?;
        check_witness(&self.witness, &expected, self.f.source())
    }

    /// `(a', b', H')(a, b, H) = (a'a, b'b, H' ⋆ H)`.
    pub fn then(&self, next: &HSquare<R>) -> Result<HSquare<R>, ChainError> {
        if next.f != self.g {
            return Err(shape_err("squares are not composable"));
        }
        Ok(HSquare {
            f: self.f.clone(),
            g: next.g.clone(),
            a: next.a.try_compose(&self.a)?,
            b: next.b.try_compose(&self.b)?,
            witness: star(&next.witness, &self.witness, &self.a, &next.b)?,
        })
    }
}

/// `H' ⋆ H = b' H + H' · Ca`.
pub fn star<R: Ring>(
    h_next: &ChainMap<R>,
    h: &ChainMap<R>,
    a: &ChainMap<R>,
    b_next: &ChainMap<R>,
) -> Result<ChainMap<R>, ChainError> {
    b_next.try_compose(h)?.try_add(&h_next.try_compose(&cone_map(a))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Ring, ZLocal};
    use crate::chain::r_map;

    fn z5() -> ZLocal {
        ZLocal::new(5).unwrap()
    }

    fn five(r: ZLocal) -> ChainComplex<ZLocal> {
        ChainComplex::two_term(Matrix::from_ints(r, 1, 1, &[5])).unwrap()
    }

    #[test]
    fn zero_homotopy() {
        let r = z5();
        let x = five(r);
        let id = ChainMap::identity(&x);
        let h = ChainHomotopy::new(id.clone(), id.clone(), []).unwrap();
        let big_h = h.to_c_homotopy();
        assert!(big_h.map().is_zero());
        assert_eq!(big_h.to_chain_homotopy().unwrap(), h);
    }

    #[test]
    fn invalid_homotopy_is_rejected() {
        let r = z5();
        let x = five(r);
        let id = ChainMap::identity(&x);
        let zero = ChainMap::zero(&x, &x);
        let h = ChainHomotopy::new(id, zero, [(0, Matrix::from_ints(r, 1, 1, &[0]))]);
        assert_eq!(h, Err(ChainError::NotAHomotopy(0)));
    }

    #[test]
    fn scalar_homotopy_round_trip() {
        // On [B --5--> B], h_0 = 1 is a homotopy from 5·id to 0.
        let r = z5();
        let x = five(r);
        let f = ChainMap::identity(&x).scale(&r.from_int(5));
        let zero = ChainMap::zero(&x, &x);
        let h = ChainHomotopy::new(f.clone(), zero.clone(), [(0, Matrix::from_ints(r, 1, 1, &[1]))]).unwrap();
        let big_h = h.to_c_homotopy();
        assert_eq!(CHomotopy::new(f, zero, big_h.map().clone()).unwrap(), big_h);
        assert_eq!(big_h.to_chain_homotopy().unwrap(), h);
    }

    #[test]
    fn block_mismatch() {
        let r = z5();
        let x = five(r);
        let id = ChainMap::identity(&x);
        let f = id.scale(&r.from_int(5));
        let h = ChainHomotopy::new(f, ChainMap::zero(&x, &x), [(0, Matrix::from_ints(r, 1, 1, &[1]))]).unwrap();
        let bogus = CHomotopy { f: id.clone(), g: id, map: h.to_c_homotopy().map().clone() };
        assert!(matches!(bogus.to_chain_homotopy(), Err(ChainError::BlockMismatch(_))));
    }

    #[test]
    fn r_is_a_c_homotopy_from_identity_to_zero() {
        let r = z5();
        let cx = cone(&five(r));
        let id = ChainMap::identity(&cx);
        let zero = ChainMap::zero(&cx, &cx);
        assert!(CHomotopy::new(id, zero, r_map(&five(r))).is_ok());
    }

    #[test]
    fn star_collapses_for_zero_second_witness() {
        let r = z5();
        let x = five(r);
        let y = ChainComplex::two_term(Matrix::from_ints(r, 1, 1, &[1])).unwrap();
        // f = 5·id on x; g = 0 on y; a = (5, 1) in degrees (1, 0).
        let a = ChainMap::new(x.clone(), y.clone(), [(1, Matrix::from_ints(r, 1, 1, &[5])), (0, Matrix::from_ints(r, 1, 1, &[1]))]).unwrap();
        let f = ChainMap::identity(&x).scale(&r.from_int(5));
        let g = ChainMap::zero(&y, &y);
        let b = a.clone();
        // g a - b f = -5a = (-25, -5), null-homotopic through h_0 = -5.
        let target_diff = g.compose(&a).sub(&b.compose(&f));
        let h = ChainHomotopy::new(target_diff.clone(), ChainMap::zero(&x, &y), [(0, Matrix::from_ints(r, 1, 1, &[-5]))]).unwrap();
        let first = HSquare::new(f, g.clone(), a, b, h.to_c_homotopy().map().clone()).unwrap();
        let second = HSquare::identity(&g);
        let composite = first.then(&second).unwrap();
        composite.validate().unwrap();
        assert_eq!(composite.witness, first.witness);
        let back = HSquare::identity(&first.f).then(&first).unwrap();
        assert_eq!(back.witness, first.witness);
    }
}
