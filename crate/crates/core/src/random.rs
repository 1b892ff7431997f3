//! Seeded generators for matrices, complexes, chain maps, morphisms of the
//! two-term category and coherent homotopy natural transformations.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{smith_normal_form, Dvr, Matrix, Poly, QtLocal, RatFunc, Ring, ZLocal};
use crate::category::{CMorphism, CObject};
use crate::chain::{ChainComplex, ChainHomotopy, ChainMap, HSquare};
use crate::hnat::{FiniteCat, Functor, HNat};
use crate::zero_map::IsoChain;

/// Rings with a sampler for small units.
pub trait Sample: Dvr {
    fn random_unit(&self, rng: &mut impl Rng) -> Self::Elem;

    /// Zero with probability 1/5, otherwise `unit · g^v` with `v ≤ max_val`.
    fn random_element(&self, rng: &mut impl Rng, max_val: u32) -> Self::Elem {
        if rng.gen_ratio(1, 5) {
            return self.zero();
        }
        let v = rng.gen_range(0..=max_val);
        self.mul(&self.random_unit(rng), &self.uniformizer_power(v))
    }
}

fn small_nonzero(rng: &mut impl Rng, bound: i64, avoid: i64) -> i64 {
    loop {
        let k = rng.gen_range(-bound..=bound);
        if k != 0 && k % avoid != 0 {
            return k;
        }
    }
}

impl Sample for ZLocal {
    fn random_unit(&self, rng: &mut impl Rng) -> BigRational {
        let p = self.prime() as i64;
        let num = small_nonzero(rng, 9, p);
        let den = if rng.gen_ratio(2, 3) { 1 } else { small_nonzero(rng, 9, p).abs() };
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

impl Sample for QtLocal {
    fn random_unit(&self, rng: &mut impl Rng) -> RatFunc {
        let q = |k: i64| BigRational::from_integer(BigInt::from(k));
        let num = Poly::new(vec![q(small_nonzero(rng, 5, i64::MAX)), q(rng.gen_range(-3..=3))]);
        let den = if rng.gen_ratio(2, 3) { Poly::one() } else { Poly::new(vec![q(1), q(rng.gen_range(-2..=2))]) };
        RatFunc::new(num, den).expect("constant term of the denominator is 1")
    }
}

pub fn random_matrix<R: Sample>(ring: R, rng: &mut impl Rng, rows: usize, cols: usize, max_val: u32) -> Matrix<R> {
    Matrix::from_fn(ring, rows, cols, |_, _| ring.random_element(rng, max_val))
}

/// `L · U · P` with unit diagonals and a random permutation.
pub fn random_invertible<R: Sample>(ring: R, rng: &mut impl Rng, n: usize, max_val: u32) -> Matrix<R> {
    let mut lower = Matrix::from_fn(ring, n, n, |i, j| if i > j { ring.random_element(rng, max_val) } else { ring.zero() });
    let mut upper = Matrix::from_fn(ring, n, n, |i, j| if i < j { ring.random_element(rng, max_val) } else { ring.zero() });
    for i in 0..n {
        lower.set(i, i, ring.random_unit(rng));
        upper.set(i, i, ring.one());
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let perm = Matrix::from_fn(ring, n, n, |i, j| if order[i] == j { ring.one() } else { ring.zero() });
    &(&lower * &upper) * &perm
}

pub fn random_object<R: Sample>(ring: R, rng: &mut impl Rng, max_dim: usize) -> CObject<R> {
    loop {
        let (n, m) = (rng.gen_range(0..=max_dim), rng.gen_range(0..=max_dim));
        if n + m > 0 {
            return CObject::new(ring, n, m);
        }
    }
}

pub fn random_morphism<R: Sample>(rng: &mut impl Rng, source: CObject<R>, target: CObject<R>, max_val: u32) -> CMorphism<R> {
    let r = source.ring;
    CMorphism::new(
        source,
        target,
        random_matrix(r, rng, target.n, source.n, max_val),
        random_matrix(r, rng, target.n, source.m, max_val),
        random_matrix(r, rng, target.m, source.n, max_val),
        random_matrix(r, rng, target.m, source.m, max_val),
    )
    .expect("block shapes")
}

/// An automorphism of `x`: invertible diagonal blocks, arbitrary corners.
pub fn random_iso<R: Sample>(rng: &mut impl Rng, x: CObject<R>, max_val: u32) -> CMorphism<R> {
    let r = x.ring;
    CMorphism::new(
        x,
        x,
        random_invertible(r, rng, x.n, max_val),
        random_matrix(r, rng, x.n, x.m, max_val),
        random_matrix(r, rng, x.m, x.n, max_val),
        random_invertible(r, rng, x.m, max_val),
    )
    .expect("block shapes")
}

/// A morphism with the `mn` corner (upper) or the `nm` corner (lower) zeroed.
pub fn random_triangular<R: Sample>(
    rng: &mut impl Rng,
    source: CObject<R>,
    target: CObject<R>,
    upper: bool,
    max_val: u32,
) -> CMorphism<R> {
    let mut phi = random_morphism(rng, source, target, max_val);
    let r = source.ring;
    if upper {
        phi.mn = Matrix::zeros(r, target.m, source.n);
    } else {
        phi.nm = Matrix::zeros(r, target.n, source.m);
    }
    phi
}

pub fn random_triangular_iso<R: Sample>(rng: &mut impl Rng, x: CObject<R>, upper: bool, max_val: u32) -> CMorphism<R> {
    let mut phi = random_iso(rng, x, max_val);
    if upper {
        phi.mn = Matrix::zeros(x.ring, x.m, x.n);
    } else {
        phi.nm = Matrix::zeros(x.ring, x.n, x.m);
    }
    phi
}

/// A chain of `length` automorphisms of `x` whose arrows from `first_upper`
/// on are upper triangular.
pub fn random_iso_chain<R: Sample>(
    rng: &mut impl Rng,
    x: CObject<R>,
    length: usize,
    first_upper: usize,
    max_val: u32,
) -> IsoChain<R> {
    let arrows = (0..length)
        .map(|i| if i >= first_upper { random_triangular_iso(rng, x, true, max_val) } else { random_iso(rng, x, max_val) })
        .collect();
    IsoChain::new(vec![x; length + 1], arrows).expect("automorphisms")
}

/// `[x_1 → x_0]` with boundary `P · diag(g^{a_i}) · Q` for the given exponents.
pub fn planted_two_term<R: Sample>(ring: R, rng: &mut impl Rng, exponents: &[u32], max_val: u32) -> ChainComplex<R> {
    let k = exponents.len();
    let diag: Vec<_> = exponents.iter().map(|&a| ring.uniformizer_power(a)).collect();
    let d = &(&random_invertible(ring, rng, k, max_val) * &Matrix::diagonal(ring, &diag)) * &random_invertible(ring, rng, k, max_val);
    ChainComplex::two_term(d).expect("two-term complex")
}

/// A bounded complex in degrees `lo..=hi`, built from pieces `[B --g^a--> B]`
/// and free summands, then conjugated by random invertible matrices.
pub fn random_complex<R: Sample>(
    ring: R,
    rng: &mut impl Rng,
    lo: i32,
    hi: i32,
    max_rank: usize,
    max_val: u32,
) -> ChainComplex<R> {
    let degrees = (hi - lo + 1) as usize;
    // pieces[k] are the summands [B --c--> B] of the boundary out of degree lo + k.
    let mut ranks = vec![0usize; degrees];
    let mut pieces: Vec<Vec<R::Elem>> = vec![Vec::new(); degrees];
    for k in 0..degrees {
        let budget = max_rank.saturating_sub(ranks[k]);
        if k + 1 < degrees {
            let count = rng.gen_range(0..=budget.min(2));
            for _ in 0..count {
                let a = rng.gen_range(0..=max_val);
                pieces[k + 1].push(ring.mul(&ring.random_unit(rng), &ring.uniformizer_power(a)));
            }
            ranks[k] += count;
            ranks[k + 1] += count;
        }
        let budget = max_rank.saturating_sub(ranks[k]);
        ranks[k] += rng.gen_range(0..=budget.min(1));
    }
    // Inside each degree the sources of outgoing pieces come first.
    let outgoing: Vec<usize> = pieces.iter().map(Vec::len).collect();
    let mut boundaries = Vec::new();
    for k in 1..degrees {
        let mut d = Matrix::zeros(ring, ranks[k - 1], ranks[k]);
        for (t, coeff) in pieces[k].iter().enumerate() {
            d.set(outgoing[k - 1] + t, t, coeff.clone());
        }
        boundaries.push(d);
    }
    let bases: Vec<Matrix<R>> = ranks.iter().map(|&r| random_invertible(ring, rng, r, max_val)).collect();
    let inverses: Vec<Matrix<R>> = bases.iter().map(|b| b.inverse().expect("invertible")).collect();
    let conjugated = boundaries
        .iter()
        .enumerate()
        .map(|(k, d)| (lo + k as i32 + 1, &(&bases[k] * d) * &inverses[k + 1]));
    let ranks = ranks.iter().enumerate().map(|(k, &r)| (lo + k as i32, r));
    ChainComplex::new(ring, ranks, conjugated.collect::<Vec<_>>()).expect("conjugate of a complex")
}

/// A random element of the module of chain maps `x → y`, taken from a basis
/// of the kernel of `f ↦ (d f - f d)`.
pub fn random_chain_map<R: Sample>(rng: &mut impl Rng, x: &ChainComplex<R>, y: &ChainComplex<R>, max_val: u32) -> ChainMap<R> {
    let ring = x.ring();
    let degrees: Vec<i32> = match (x.support(), y.support()) {
        (Some((a, b)), Some((c, d))) => (a.max(c)..=b.min(d)).collect(),
        _ => Vec::new(),
    };
    let offsets: Vec<usize> = degrees
        .iter()
        .scan(0, |acc, &n| {
            let o = *acc;
            *acc += y.rank(n) * x.rank(n);
            Some(o)
        })
        .collect();
    let unknowns: usize = degrees.iter().map(|&n| y.rank(n) * x.rank(n)).sum();
    if unknowns == 0 {
        return ChainMap::zero(x, y);
    }
    let slot = |k: usize, i: usize, j: usize| offsets[k] + i * x.rank(degrees[k]) + j;
    let mut rows: Vec<Vec<R::Elem>> = Vec::new();
    // (d^y_n f_n - f_{n-1} d^x_n)_{ij} = 0 for every n where either side can be non-zero.
    let (first, last) = (degrees[0], *degrees.last().expect("non-empty"));
    for n in first..=last + 1 {
        let (dy, dx) = (y.d(n), x.d(n));
        let here = degrees.iter().position(|&m| m == n);
        let below = degrees.iter().position(|&m| m == n - 1);
        for i in 0..y.rank(n - 1) {
            for j in 0..x.rank(n) {
                let mut row = vec![ring.zero(); unknowns];
                if let Some(k) = here {
                    for l in 0..y.rank(n) {
                        let s = slot(k, l, j);
                        row[s] = ring.add(&row[s], dy.get(i, l));
                    }
                }
                if let Some(k) = below {
                    for l in 0..x.rank(n - 1) {
                        let s = slot(k, i, l);
                        row[s] = ring.sub(&row[s], dx.get(l, j));
                    }
                }
                if row.iter().any(|e| !ring.is_zero(e)) {
                    rows.push(row);
                }
            }
        }
    }
    let basis = if rows.is_empty() {
        Matrix::identity(ring, unknowns)
    } else {
        let system = Matrix::new(ring, rows.len(), unknowns, rows.concat()).expect("row lengths");
        smith_normal_form(&system).kernel_basis()
    };
    let coefficients = random_matrix(ring, rng, basis.cols(), 1, max_val);
    let solution = &basis * &coefficients;
    let components = degrees.iter().enumerate().map(|(k, &n)| {
        let m = Matrix::from_fn(ring, y.rank(n), x.rank(n), |i, j| solution.get(slot(k, i, j), 0).clone());
        (n, m)
    });
    ChainMap::new(x.clone(), y.clone(), components.collect::<Vec<_>>()).expect("kernel elements commute")
}

/// Random maps `h_n : x_n → y_{n+1}`.
pub fn random_degree_one<R: Sample>(
    rng: &mut impl Rng,
    x: &ChainComplex<R>,
    y: &ChainComplex<R>,
    max_val: u32,
) -> Vec<(i32, Matrix<R>)> {
    let ring = x.ring();
    match x.support() {
        Some((lo, hi)) => (lo..=hi).map(|n| (n, random_matrix(ring, rng, y.rank(n + 1), x.rank(n), max_val))).collect(),
        None => Vec::new(),
    }
}

/// `dh + hd` for degree-one maps `h : x → y`.
pub fn boundary_of<R: Ring>(x: &ChainComplex<R>, y: &ChainComplex<R>, h: &[(i32, Matrix<R>)]) -> ChainMap<R> {
    let ring = x.ring();
    let get = |n: i32| {
        h.iter()
            .find(|(m, _)| *m == n)
            .map(|(_, m)| m.clone())
            .unwrap_or_else(|| Matrix::zeros(ring, y.rank(n + 1), x.rank(n)))
    };
    ChainMap::from_fn(x.clone(), y.clone(), |n| &(&y.d(n + 1) * &get(n)) + &(&get(n - 1) * &x.d(n)))
        .expect("a boundary is a chain map")
}

/// A chain homotopy `f ⇒ g` with `g` random and `f = g + dh + hd`.
pub fn random_homotopy<R: Sample>(
    rng: &mut impl Rng,
    x: &ChainComplex<R>,
    y: &ChainComplex<R>,
    max_val: u32,
) -> ChainHomotopy<R> {
    let g = random_chain_map(rng, x, y, max_val);
    let h = random_degree_one(rng, x, y, max_val);
    let f = g.add(&boundary_of(x, y, &h));
    ChainHomotopy::new(f, g, h).expect("dh + hd")
}

/// A homotopy commutative square out of `[f : x → x']`: the target is
/// `[g : x ⊕ z → y']` with `a = (id; 0)`, random `b`, and
/// `g = (bf + dh + hd, k)` for random `h` and `k`.
pub fn random_square_from<R: Sample>(rng: &mut impl Rng, f: &ChainMap<R>, max_rank: usize, max_val: u32) -> HSquare<R> {
    let ring = f.ring();
    let (x, x_prime) = (f.source(), f.target());
    let (lo, hi) = x.support().or(x_prime.support()).unwrap_or((0, 1));
    let z = random_complex(ring, rng, lo, hi, max_rank, max_val);
    let y_prime = random_complex(ring, rng, lo, hi + 1, max_rank, max_val);
    let b = random_chain_map(rng, x_prime, &y_prime, max_val);
    let h = random_degree_one(rng, x, &y_prime, max_val);
    let on_x = b.compose(f).add(&boundary_of(x, &y_prime, &h));
    let k = random_chain_map(rng, &z, &y_prime, max_val);
    let g = ChainMap::copair(&on_x, &k).expect("same target");
    let a = ChainMap::pair(&ChainMap::identity(x), &ChainMap::zero(x, &z)).expect("same source");
    let witness = ChainHomotopy::new(g.compose(&a), b.compose(f), h).expect("dh + hd").to_c_homotopy();
    HSquare::new(f.clone(), g, a, b, witness.map().clone()).expect("square by construction")
}

/// A random chain map between random complexes in degrees `0..=1`.
pub fn random_arrow<R: Sample>(ring: R, rng: &mut impl Rng, max_rank: usize, max_val: u32) -> ChainMap<R> {
    let x = random_complex(ring, rng, 0, 1, max_rank, max_val);
    let y = random_complex(ring, rng, 0, 1, max_rank, max_val);
    random_chain_map(rng, &x, &y, max_val)
}

/// A coherent `θ : f ⇒ g` over a free category: `g` is `f` transported
/// along random isomorphisms `u_i`, `θ_i = u_i + d s_i + s_i d` and the
/// witness on `a : i → j` comes from `s_j f_a - g_a s_i`.
pub fn random_coherent_hnat<R: Sample>(
    ring: R,
    rng: &mut impl Rng,
    cat: Arc<FiniteCat>,
    max_rank: usize,
    max_val: u32,
) -> HNat<R> {
    let objects: Vec<_> = (0..cat.object_count()).map(|_| random_complex(ring, rng, 0, 1, max_rank, max_val)).collect();
    let generators = cat.generators();
    let maps = generators
        .iter()
        .map(|&a| {
            let arrow = cat.arrow(a);
            random_chain_map(rng, &objects[arrow.source], &objects[arrow.target], max_val)
        })
        .collect();
    let f = Functor::from_generators(cat.clone(), objects.clone(), maps).expect("free category");

    let mut transported = Vec::new();
    let mut isos = Vec::new();
    for x in &objects {
        let (lo, hi) = x.support().unwrap_or((0, 0));
        let bases: Vec<(i32, Matrix<R>)> =
            (lo..=hi).map(|n| (n, random_invertible(ring, rng, x.rank(n), max_val))).collect();
        let basis = |n: i32| bases.iter().find(|(m, _)| *m == n).map(|(_, b)| b.clone());
        let boundaries: Vec<_> = (lo + 1..=hi)
            .map(|n| {
                let inv = basis(n).expect("in range").inverse().expect("invertible");
                (n, &(&basis(n - 1).expect("in range") * &x.d(n)) * &inv)
            })
            .collect();
        let y = ChainComplex::new(ring, x.ranks().iter().map(|(&n, &r)| (n, r)), boundaries).expect("conjugate");
        isos.push(ChainMap::new(x.clone(), y.clone(), bases.clone()).expect("conjugation"));
        transported.push(y);
    }
    let inverse = |i: usize| {
        let u = &isos[i];
        ChainMap::from_fn(u.target().clone(), u.source().clone(), |n| u.component(n).inverse().expect("invertible"))
            .expect("inverse of a chain isomorphism")
    };
    let g_maps = generators
        .iter()
        .map(|&a| {
            let arrow = cat.arrow(a);
            isos[arrow.target].compose(f.arrow(a)).compose(&inverse(arrow.source))
        })
        .collect();
    let g = Functor::from_generators(cat.clone(), transported.clone(), g_maps).expect("free category");

    let s: Vec<Vec<(i32, Matrix<R>)>> = (0..objects.len())
        .map(|i| random_degree_one(rng, &objects[i], &transported[i], max_val))
        .collect();
    let thetas: Vec<ChainMap<R>> = (0..objects.len())
        .map(|i| isos[i].add(&boundary_of(&objects[i], &transported[i], &s[i])))
        .collect();
    let witnesses = generators
        .iter()
        .map(|&a| {
            let arrow = cat.arrow(a);
            let (i, j) = (arrow.source, arrow.target);
            let (fa, ga) = (f.arrow(a), g.arrow(a));
            let h = (0..=1)
                .map(|n| {
                    let sj = lookup(&s[j], n, transported[j].rank(n + 1), objects[j].rank(n), ring);
                    let si = lookup(&s[i], n, transported[i].rank(n + 1), objects[i].rank(n), ring);
                    (n, &(&sj * &fa.component(n)) - &(&ga.component(n + 1) * &si))
                })
                .collect::<Vec<_>>();
            let homotopy = ChainHomotopy::new(thetas[j].compose(fa), ga.compose(&thetas[i]), h).expect("s_j f_a - g_a s_i");
            homotopy.to_c_homotopy().map().clone()
        })
        .collect();
    HNat::extend_from_generators(f, g, thetas, witnesses).expect("coherent by construction")
}

fn lookup<R: Ring>(h: &[(i32, Matrix<R>)], n: i32, rows: usize, cols: usize, ring: R) -> Matrix<R> {
    h.iter()
        .find(|(m, _)| *m == n)
        .map(|(_, m)| m.clone())
        .unwrap_or_else(|| Matrix::zeros(ring, rows, cols))
}
