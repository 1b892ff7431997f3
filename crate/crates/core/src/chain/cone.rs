use crate::algebra::{Matrix, Ring};

use super::{span, ChainComplex, ChainMap};

/// Mapping cone of `f : x → y`: `(Cf)_n = x_{n-1} ⊕ y_n` with boundary
/// `(-d^x_{n-1}, 0; -f_{n-1}, d^y_n)`.
pub fn mapping_cone<R: Ring>(f: &ChainMap<R>) -> ChainComplex<R> {
    let (x, y) = (f.source(), f.target());
    let ring = f.ring();
    let Some((lo, hi)) = span([x, y]) else {
        return ChainComplex::zero(ring);
    };
    let ranks = (lo..=hi + 1).map(|n| (n, x.rank(n - 1) + y.rank(n)));
    let boundaries = (lo..=hi + 1).map(|n| {
        let d = Matrix::block2(
            &x.d(n - 1).neg(),
            &Matrix::zeros(ring, x.rank(n - 2), y.rank(n)),
            &f.component(n - 1).neg(),
            &y.d(n),
        );
        (n, d)
    });
    ChainComplex::new(ring, ranks, boundaries.collect::<Vec<_>>()).expect("mapping cone of a chain map")
}

/// Cone of the identity of `x`.
pub fn cone<R: Ring>(x: &ChainComplex<R>) -> ChainComplex<R> {
    mapping_cone(&ChainMap::identity(x))
}

/// `ι_x : x → Cx`, `(ι_x)_n = (0; id)`.
pub fn iota<R: Ring>(x: &ChainComplex<R>) -> ChainMap<R> {
    let ring = x.ring();
    let components = x
        .ranks()
        .iter()
        .map(|(&n, &r)| (n, Matrix::zeros(ring, x.rank(n - 1), r).vstack(&Matrix::identity(ring, r))))
        .collect::<Vec<_>>();
    ChainMap::from_parts(x.clone(), cone(x), components).expect("iota shapes")
}

/// `r_x : CCx → Cx`, `(r_x)_n = (0 id id 0; 0 0 0 id)` on
/// `x_{n-2} ⊕ x_{n-1} ⊕ x_{n-1} ⊕ x_n`.
pub fn r_map<R: Ring>(x: &ChainComplex<R>) -> ChainMap<R> {
    let ring = x.ring();
    let cx = cone(x);
    let ccx = cone(&cx);
    let components = match ccx.support() {
        Some((lo, hi)) => (lo..=hi)
            .map(|n| {
                let (a, b, c) = (x.rank(n - 2), x.rank(n - 1), x.rank(n));
                let top = Matrix::zeros(ring, b, a)
                    .hstack(&Matrix::identity(ring, b))
                    .hstack(&Matrix::identity(ring, b))
                    .hstack(&Matrix::zeros(ring, b, c));
                let bottom = Matrix::zeros(ring, c, a + 2 * b).hstack(&Matrix::identity(ring, c));
                (n, top.vstack(&bottom))
            })
            .collect(),
        None => Vec::new(),
    };
    ChainMap::from_parts(ccx, cx, components).expect("r_x shapes")
}

/// `Ca = diag(a_{n-1}, a_n) : Cx → Cy`.
pub fn cone_map<R: Ring>(a: &ChainMap<R>) -> ChainMap<R> {
    let cx = cone(a.source());
    let cy = cone(a.target());
    let components = match span([&cx, &cy]) {
        Some((lo, hi)) => (lo..=hi).map(|n| (n, a.component(n - 1).direct_sum(&a.component(n)))).collect(),
        None => Vec::new(),
    };
    ChainMap::from_parts(cx, cy, components).expect("cone map shapes")
}

/// The canonical isomorphism `C(x ⊕ y) → Cx ⊕ Cy`, which reorders
/// `x_{n-1} ⊕ y_{n-1} ⊕ x_n ⊕ y_n` into `x_{n-1} ⊕ x_n ⊕ y_{n-1} ⊕ y_n`.
pub fn cone_of_sum_split<R: Ring>(x: &ChainComplex<R>, y: &ChainComplex<R>) -> ChainMap<R> {
    let ring = x.ring();
    let source = cone(&x.direct_sum(y));
    let target = cone(x).direct_sum(&cone(y));
    let components = match source.support() {
        Some((lo, hi)) => (lo..=hi)
            .map(|n| {
                let sizes = [x.rank(n - 1), y.rank(n - 1), x.rank(n), y.rank(n)];
                let order = [0, 2, 1, 3];
                let offsets: Vec<usize> = sizes.iter().scan(0, |acc, s| {
                    let o = *acc;
                    *acc += s;
                    Some(o)
                }).collect();
                let total: usize = sizes.iter().sum();
                let mut p = Matrix::zeros(ring, total, total);
                let mut row = 0;
                for &block in &order {
                    for k in 0..sizes[block] {
                        p.set(row, offsets[block] + k, ring.one());
                        row += 1;
                    }
                }
                (n, p)
            })
            .collect(),
        None => Vec::new(),
    };
    ChainMap::new(source, target, components).expect("cone of a sum splits")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ZLocal;

    fn z5() -> ZLocal {
        ZLocal::new(5).unwrap()
    }

    fn five(r: ZLocal) -> ChainComplex<ZLocal> {
        ChainComplex::two_term(Matrix::from_ints(r, 1, 1, &[5])).unwrap()
    }

    #[test]
    fn cone_of_zero_is_zero() {
        let r = z5();
        assert!(cone(&ChainComplex::zero(r)).is_zero());
        assert!(iota(&ChainComplex::zero(r)).is_zero());
        assert!(r_map(&ChainComplex::zero(r)).is_zero());
    }

    #[test]
    fn cone_of_multiplication_by_five() {
        let r = z5();
        let cx = cone(&five(r));
        assert_eq!((cx.rank(2), cx.rank(1), cx.rank(0)), (1, 2, 1));
        assert_eq!(cx.d(2), Matrix::from_ints(r, 2, 1, &[-5, -1]));
        assert_eq!(cx.d(1), Matrix::from_ints(r, 1, 2, &[-1, 5]));
        assert!((&cx.d(1) * &cx.d(2)).is_zero());
    }

    #[test]
    fn cone_of_single_module() {
        let r = z5();
        let cx = cone(&ChainComplex::concentrated(r, 0, 1));
        assert_eq!(cx, ChainComplex::two_term(Matrix::from_ints(r, 1, 1, &[-1])).unwrap());
    }

    #[test]
    fn iota_and_r_are_chain_maps() {
        let r = z5();
        let x = five(r);
        let i = iota(&x);
        assert!(i.is_chain_map());
        assert_eq!(i.component(1), Matrix::from_ints(r, 2, 1, &[0, 1]));
        let rx = r_map(&x);
        assert!(rx.is_chain_map());
        // r_x ι_{Cx} = id_{Cx}, worked through the 4x4 blocks at degree 1.
        let cx = cone(&x);
        assert_eq!(rx.compose(&iota(&cx)), ChainMap::identity(&cx));
        assert_eq!(rx.compose(&cone_map(&iota(&x))), ChainMap::identity(&cx));
    }

    #[test]
    fn cone_map_is_functorial() {
        let r = z5();
        let x = five(r);
        assert_eq!(cone_map(&ChainMap::identity(&x)), ChainMap::identity(&cone(&x)));
        assert!(cone_map(&ChainMap::zero(&x, &x)).is_zero());
        let twice = ChainMap::identity(&x).scale(&r.from_int(2));
        assert!(cone_map(&twice).is_chain_map());
        assert_eq!(cone_map(&twice.compose(&twice)), cone_map(&twice).compose(&cone_map(&twice)));
    }

    #[test]
    fn mapping_cone_of_identity_is_cone() {
        let r = z5();
        let x = five(r).direct_sum(&ChainComplex::concentrated(r, 1, 2));
        assert_eq!(mapping_cone(&ChainMap::identity(&x)), cone(&x));
    }

    #[test]
    fn cone_of_sum_split_is_an_isomorphism() {
        let r = z5();
        let x = five(r);
        let y = ChainComplex::concentrated(r, 1, 2);
        let s = cone_of_sum_split(&x, &y);
        assert!(s.is_chain_map());
        for n in 0..=3 {
            assert!(s.component(n).is_invertible());
        }
    }
}
