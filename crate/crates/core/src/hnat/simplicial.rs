use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{Matrix, Ring};
use crate::chain::{cone, cone_map, ChainComplex, ChainMap};

use super::{Functor, HNat, HNatError, StrictNat};

/// A monotone map `[n] → [m]`, stored by its values.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonotoneMap {
    target: usize,
    values: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(values: Vec<usize>, target: usize) -> Option<Self> {
        let monotone = values.windows(2).all(|w| w[0] <= w[1]);
        let bounded = values.iter().all(|&v| v <= target);
        (!values.is_empty() && monotone && bounded).then_some(MonotoneMap { target, values })
    }

    pub fn identity(n: usize) -> Self {
        MonotoneMap { target: n, values: (0..=n).collect() }
    }

    pub fn source_dim(&self) -> usize {
        self.values.len() - 1
    }

    pub fn target_dim(&self) -> usize {
        self.target
    }

    pub fn apply(&self, k: usize) -> usize {
        self.values[k]
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &MonotoneMap) -> Option<MonotoneMap> {
        (inner.target == self.source_dim())
            .then(|| MonotoneMap { target: self.target, values: inner.values.iter().map(|&v| self.values[v]).collect() })
    }

    /// The `(n+1)×(m+1)` matrix with a one at `(k, φ(k))`, which acts on
    /// `(m+1)` copies contravariantly.
    pub fn pullback_matrix<R: Ring>(&self, ring: R) -> Matrix<R> {
        Matrix::from_fn(ring, self.values.len(), self.target + 1, |k, l| {
            if self.values[k] == l {
                ring.one()
            } else {
                ring.zero()
            }
        })
    }
}

impl fmt::Display for MonotoneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let values: Vec<String> = self.values.iter().map(usize::to_string).collect();
        write!(f, "({}):[{}]→[{}]", values.join(","), self.source_dim(), self.target)
    }
}

/// Every monotone map `[n] → [m]`.
pub fn monotone_maps(n: usize, m: usize) -> Vec<MonotoneMap> {
    let mut out = Vec::new();
    let mut current = vec![0; n + 1];
    loop {
        out.push(MonotoneMap { target: m, values: current.clone() });
        let Some(k) = (0..=n).rev().find(|&k| current[k] < m) else {
            return out;
        };
        let v = current[k] + 1;
        current[k..].iter_mut().for_each(|c| *c = v);
    }
}

/// Levels `θ_0, …, θ_N` of a simplicial homotopy natural transformation,
/// with strict transformations `f_φ : f_m → f_n` and `g_φ : g_m → g_n`
/// for every monotone `φ : [n] → [m]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialHNat<R: Ring> {
    pub levels: Vec<HNat<R>>,
    pub source_maps: BTreeMap<MonotoneMap, StrictNat<R>>,
    pub target_maps: BTreeMap<MonotoneMap, StrictNat<R>>,
}

fn all_maps(top: usize) -> impl Iterator<Item = MonotoneMap> {
    (0..=top).flat_map(move |n| (0..=top).flat_map(move |m| monotone_maps(n, m)))
}

fn kron<R: Ring>(p: &Matrix<R>, m: &Matrix<R>) -> Matrix<R> {
    let ring = m.ring();
    Matrix::from_fn(ring, p.rows() * m.rows(), p.cols() * m.cols(), |i, j| {
        ring.mul(p.get(i / m.rows(), j / m.cols()), m.get(i % m.rows(), j % m.cols()))
    })
}

fn power<R: Ring>(x: &ChainComplex<R>, copies: usize) -> ChainComplex<R> {
    (1..copies).fold(x.clone(), |acc, _| acc.direct_sum(x))
}

fn map_power<R: Ring>(f: &ChainMap<R>, copies: usize) -> ChainMap<R> {
    (1..copies).fold(f.clone(), |acc, _| acc.direct_sum(f))
}

/// `H^{⊕k} : C(x^k) → y^k` for `H : Cx → y`.
fn witness_power<R: Ring>(h: &ChainMap<R>, x: &ChainComplex<R>, y: &ChainComplex<R>, copies: usize) -> ChainMap<R> {
    let ring = x.ring();
    let id = Matrix::identity(ring, copies);
    ChainMap::from_fn(cone(&power(x, copies)), power(y, copies), |n| {
        let component = h.component(n);
        let split = x.rank(n - 1);
        let shifted = component.submatrix(0, component.rows(), 0, split);
        let same = component.submatrix(0, component.rows(), split, component.cols());
        kron(&id, &shifted).hstack(&kron(&id, &same))
    })
    .expect("copies of a chain map")
}

fn pullback<R: Ring>(phi: &MonotoneMap, x: &ChainComplex<R>) -> ChainMap<R> {
    let p = phi.pullback_matrix(x.ring());
    ChainMap::from_fn(power(x, phi.target_dim() + 1), power(x, phi.source_dim() + 1), |n| {
        kron(&p, &Matrix::identity(x.ring(), x.rank(n)))
    })
    .expect("pullback along a monotone map")
}

impl<R: Ring> SimplicialHNat<R> {
    /// The same `θ` in every level, with identity structure maps.
    pub fn constant(theta: &HNat<R>, top: usize) -> Self {
        let identity_f = StrictNat::identity(theta.source());
        let identity_g = StrictNat::identity(theta.target());
        SimplicialHNat {
            levels: vec![theta.clone(); top + 1],
            source_maps: all_maps(top).map(|phi| (phi, identity_f.clone())).collect(),
            target_maps: all_maps(top).map(|phi| (phi, identity_g.clone())).collect(),
        }
    }

    /// Level `n` is `θ^{⊕(n+1)}`, indexed by the vertices of `[n]`, and
    /// `φ : [n] → [m]` pulls copy `φ(k)` back to copy `k`.
    pub fn from_copies(theta: &HNat<R>, top: usize) -> Result<Self, HNatError> {
        let (f, g) = (theta.source(), theta.target());
        let cat = f.cat().clone();
        let functor_power = |h: &Functor<R>, k: usize| {
            let objects = (0..cat.object_count()).map(|i| power(h.object(i), k)).collect();
            let arrows = (0..cat.arrow_count()).map(|a| map_power(h.arrow(a), k)).collect();
            Functor::new(cat.clone(), objects, arrows)
        };
        let mut sources = Vec::new();
        let mut targets = Vec::new();
        let mut levels = Vec::new();
        for n in 0..=top {
            let (fk, gk) = (functor_power(f, n + 1)?, functor_power(g, n + 1)?);
            let objects = (0..cat.object_count()).map(|i| map_power(theta.object(i), n + 1)).collect();
            let arrows = (0..cat.arrow_count())
                .map(|a| {
                    let arrow = cat.arrow(a);
                    witness_power(theta.arrow(a), f.object(arrow.source), g.object(arrow.target), n + 1)
                })
                .collect();
            levels.push(HNat::new(fk.clone(), gk.clone(), objects, arrows)?);
            sources.push(fk);
            targets.push(gk);
        }
        let mut source_maps = BTreeMap::new();
        let mut target_maps = BTreeMap::new();
        for phi in all_maps(top) {
            let (n, m) = (phi.source_dim(), phi.target_dim());
            let along = |h: &Functor<R>| (0..cat.object_count()).map(|i| pullback(&phi, h.object(i))).collect();
            source_maps.insert(phi.clone(), StrictNat::new(sources[m].clone(), sources[n].clone(), along(f))?);
            target_maps.insert(phi.clone(), StrictNat::new(targets[m].clone(), targets[n].clone(), along(g))?);
        }
        Ok(SimplicialHNat { levels, source_maps, target_maps })
    }

    pub fn top(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }
}

/// Counts from a successful [`simplicial_levels_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimplicialReport {
    pub top: usize,
    pub maps_checked: usize,
    pub pairs_checked: usize,
}

/// Checks `θ_n f_φ = g_φ θ_m` for every monotone `φ : [n] → [m]` up to the
/// top level, simplicial functoriality of `f`, `g` and of the levelwise
/// cylinder, and compatibility of `J₁`, `J₂` with the structure maps.
pub fn simplicial_levels_check<R: Ring>(data: &SimplicialHNat<R>) -> Result<SimplicialReport, HNatError> {
    let top = data.top();
    let incompatible = |phi: &MonotoneMap| HNatError::LevelIncompatible(phi.to_string());
    for level in &data.levels {
        level.validate()?;
    }
    let cylinders = data.levels.iter().map(HNat::cylinder).collect::<Result<Vec<_>, _>>()?;
    let mut cylinder_maps = BTreeMap::new();
    let mut maps_checked = 0;
    for phi in all_maps(top) {
        let (n, m) = (phi.source_dim(), phi.target_dim());
        let f_phi = data.source_maps.get(&phi).ok_or_else(|| incompatible(&phi))?;
        let g_phi = data.target_maps.get(&phi).ok_or_else(|| incompatible(&phi))?;
        let endpoints = f_phi.source() == data.levels[m].source()
            && f_phi.target() == data.levels[n].source()
            && g_phi.source() == data.levels[m].target()
            && g_phi.target() == data.levels[n].target();
        if !endpoints {
            return Err(incompatible(&phi));
        }
        let left = data.levels[n].precompose(f_phi).map_err(|_| incompatible(&phi))?;
        let right = data.levels[m].postcompose(g_phi).map_err(|_| incompatible(&phi))?;
        if left != right {
            return Err(incompatible(&phi));
        }
        let components = (0..f_phi.components().len())
            .map(|i| g_phi.component(i).direct_sum(&cone_map(f_phi.component(i))))
            .collect();
        let y_phi = StrictNat::new(cylinders[m].functor.clone(), cylinders[n].functor.clone(), components)
            .map_err(|_| incompatible(&phi))?;
        let j1_ok = y_phi.compose(&cylinders[m].from_source)? == cylinders[n].from_source.compose(f_phi)?;
        let j2_ok = y_phi.compose(&cylinders[m].from_target)? == cylinders[n].from_target.compose(g_phi)?;
        if !j1_ok || !j2_ok {
            return Err(incompatible(&phi));
        }
        cylinder_maps.insert(phi, y_phi);
        maps_checked += 1;
    }
    let mut pairs_checked = 0;
    for phi in all_maps(top) {
        if phi == MonotoneMap::identity(phi.source_dim()) {
            let n = phi.source_dim();
            let identities = data.source_maps[&phi] == StrictNat::identity(data.levels[n].source())
                && data.target_maps[&phi] == StrictNat::identity(data.levels[n].target());
            if !identities {
                return Err(incompatible(&phi));
            }
        }
        for psi in all_maps(top).filter(|psi| psi.source_dim() == phi.target_dim()) {
            let composite = psi.after(&phi).expect("composable");
            let label = || HNatError::LevelIncompatible(format!("{psi} ∘ {phi}"));
            // Endpoints were matched above, so only components need comparing.
            let agrees = |maps: &BTreeMap<MonotoneMap, StrictNat<R>>| {
                let (outer, inner) = (maps[&phi].components(), maps[&psi].components());
                maps[&composite].components().iter().zip(outer.iter().zip(inner)).all(|(c, (a, b))| c.is_composite(a, b))
            };
            let f_ok = agrees(&data.source_maps);
            let g_ok = agrees(&data.target_maps);
            let y_ok = agrees(&cylinder_maps);
            if !(f_ok && g_ok && y_ok) {
                return Err(label());
            }
            pairs_checked += 1;
        }
    }
    Ok(SimplicialReport { top, maps_checked, pairs_checked })
}
