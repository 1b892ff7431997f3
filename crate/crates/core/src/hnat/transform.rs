use serde_json::{json, Value};

use crate::algebra::Ring;
use crate::chain::{cone, cone_map, iota, is_quasi_iso, star, ChainMap, HSquare};

use super::{Functor, HNatError, StrictNat};

/// A homotopy natural transformation `θ : f ⇒ g`: chain maps
/// `θ_i : f_i → g_i` and, for every arrow `a : i → j`, a witness
/// `θ_a : C(f_i) → g_j` with `θ_a ι = θ_j f_a - g_a θ_i`.
///
/// Coherence: `θ_id = 0` and `θ_{ba} = g_b θ_a + θ_b C(f_a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HNat<R: Ring> {
    f: Functor<R>,
    g: Functor<R>,
    objects: Vec<ChainMap<R>>,
    arrows: Vec<ChainMap<R>>,
}

/// The cylinder `Y(θ)` with `J₁ : f → Y(θ)` and `J₂ : g → Y(θ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cylinder<R: Ring> {
    pub functor: Functor<R>,
    pub from_source: StrictNat<R>,
    pub from_target: StrictNat<R>,
}

impl<R: Ring> HNat<R> {
    pub fn new(f: Functor<R>, g: Functor<R>, objects: Vec<ChainMap<R>>, arrows: Vec<ChainMap<R>>) -> Result<Self, HNatError> {
        let theta = Self::new_unchecked(f, g, objects, arrows)?;
        theta.validate()?;
        Ok(theta)
    }

    /// Checks endpoints only; coherence and the square identities are not checked.
    pub fn new_unchecked(
        f: Functor<R>,
        g: Functor<R>,
        objects: Vec<ChainMap<R>>,
        arrows: Vec<ChainMap<R>>,
    ) -> Result<Self, HNatError> {
        let cat = f.cat().clone();
        if g.cat() != &cat || objects.len() != cat.object_count() || arrows.len() != cat.arrow_count() {
            return Err(HNatError::ShapeMismatch("transformation data does not match the index category".into()));
        }
        for (i, t) in objects.iter().enumerate() {
            if t.source() != f.object(i) || t.target() != g.object(i) {
                return Err(HNatError::ShapeMismatch(format!("component at object {i}")));
            }
        }
        for (a, h) in arrows.iter().enumerate() {
            let arrow = cat.arrow(a);
            if h.source() != &cone(f.object(arrow.source)) || h.target() != g.object(arrow.target) {
                return Err(HNatError::ShapeMismatch(format!("witness for {}", arrow.label)));
            }
        }
        Ok(HNat { f, g, objects, arrows })
    }

    /// A strict transformation with zero witnesses.
    pub fn from_strict(kappa: &StrictNat<R>) -> Self {
        let (f, g) = (kappa.source().clone(), kappa.target().clone());
        let cat = f.cat().clone();
        let arrows = (0..cat.arrow_count())
            .map(|a| {
                let arrow = cat.arrow(a);
                ChainMap::zero(&cone(f.object(arrow.source)), g.object(arrow.target))
            })
            .collect();
        HNat { f, g, objects: kappa.components().to_vec(), arrows }
    }

    /// Over a free category, extends witnesses on generators to all paths by
    /// iterated `⋆`.
    pub fn extend_from_generators(
        f: Functor<R>,
        g: Functor<R>,
        objects: Vec<ChainMap<R>>,
        generator_witnesses: Vec<ChainMap<R>>,
    ) -> Result<Self, HNatError> {
        let cat = f.cat().clone();
        if !cat.is_free() {
            return Err(HNatError::NotFree);
        }
        let generators = cat.generators();
        if generator_witnesses.len() != generators.len() {
            return Err(HNatError::ShapeMismatch("one witness per generator expected".into()));
        }
        let n = cat.object_count();
        let mut arrows = Vec::with_capacity(cat.arrow_count());
        for a in 0..cat.arrow_count() {
            let path = cat.factorization(a).expect("free");
            let witness = match path.split_first() {
                None => ChainMap::zero(&cone(f.object(a)), g.object(a)),
                Some((&first, rest)) => {
                    let mut done = first;
                    let mut acc = generator_witnesses[first - n].clone();
                    for &next in rest {
                        acc = star(&generator_witnesses[next - n], &acc, f.arrow(done), g.arrow(next))?;
                        done = cat.compose(next, done).expect("path continues");
                    }
                    acc
                }
            };
            arrows.push(witness);
        }
        Self::new(f, g, objects, arrows)
    }

    pub fn validate(&self) -> Result<(), HNatError> {
        let cat = self.f.cat().clone();
        for (i, t) in self.objects.iter().enumerate() {
            if !t.is_chain_map() {
                return Err(HNatError::ShapeMismatch(format!("component at object {i} is not a chain map")));
            }
        }
        for i in 0..cat.object_count() {
            let id = cat.identity(i);
            if !self.arrows[id].is_zero() {
                let label = cat.arrow(id).label.clone();
                return Err(HNatError::CoherenceFailure { outer: label.clone(), inner: label });
            }
        }
        for a in 0..cat.arrow_count() {
            self.square(a)
                .validate()
                .map_err(|_| HNatError::NotASquare(cat.arrow(a).label.clone()))?;
        }
        for (b, a) in cat.composable_pairs() {
            if cat.is_identity(a) || cat.is_identity(b) {
                continue;
            }
            let ba = cat.compose(b, a).expect("listed pair");
            let pasted = star(&self.arrows[b], &self.arrows[a], self.f.arrow(a), self.g.arrow(b))?;
            if self.arrows[ba] != pasted {
                return Err(HNatError::CoherenceFailure {
                    outer: cat.arrow(b).label.clone(),
                    inner: cat.arrow(a).label.clone(),
                });
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Functor<R> {
        &self.f
    }

    pub fn target(&self) -> &Functor<R> {
        &self.g
    }

    pub fn object(&self, i: usize) -> &ChainMap<R> {
        &self.objects[i]
    }

    pub fn arrow(&self, a: usize) -> &ChainMap<R> {
        &self.arrows[a]
    }

    /// The square `(f_a, g_a, θ_a)` from `[θ_i]` to `[θ_j]`.
    pub fn square(&self, a: usize) -> HSquare<R> {
        let arrow = self.f.cat().arrow(a);
        HSquare {
            f: self.objects[arrow.source].clone(),
            g: self.objects[arrow.target].clone(),
            a: self.f.arrow(a).clone(),
            b: self.g.arrow(a).clone(),
            witness: self.arrows[a].clone(),
        }
    }

    /// `βα` for strict `α : e → f` and `β = self : f ⇒ g`:
    /// `(βα)_i = β_i α_i`, `(βα)_a = β_a C(α_i)`. Coherent whenever `self` is.
    pub fn precompose(&self, alpha: &StrictNat<R>) -> Result<Self, HNatError> {
        if alpha.target() != &self.f {
            return Err(HNatError::ShapeMismatch("strict transformation does not end at the source".into()));
        }
        let cat = self.f.cat().clone();
        let objects = self.objects.iter().zip(alpha.components()).map(|(b, a)| b.compose(a)).collect();
        let arrows = (0..cat.arrow_count())
            .map(|a| self.arrows[a].compose(&cone_map(alpha.component(cat.arrow(a).source))))
            .collect();
        Self::new_unchecked(alpha.source().clone(), self.g.clone(), objects, arrows)
    }

    /// `γβ` for `β = self : f ⇒ g` and strict `γ : g → h`:
    /// `(γβ)_i = γ_i β_i`, `(γβ)_a = γ_j β_a`. Coherent whenever `self` is.
    pub fn postcompose(&self, gamma: &StrictNat<R>) -> Result<Self, HNatError> {
        if gamma.source() != &self.g {
            return Err(HNatError::ShapeMismatch("strict transformation does not start at the target".into()));
        }
        let cat = self.f.cat().clone();
        let objects = gamma.components().iter().zip(&self.objects).map(|(c, b)| c.compose(b)).collect();
        let arrows = (0..cat.arrow_count())
            .map(|a| gamma.component(cat.arrow(a).target).compose(&self.arrows[a]))
            .collect();
        Self::new_unchecked(self.f.clone(), gamma.target().clone(), objects, arrows)
    }

    /// `Y(θ)_i = g_i ⊕ C(f_i)`, `Y(θ)_a = (g_a, -θ_a; 0, C f_a)`, with
    /// `J₁ = (θ_i; -ι)` and `J₂ = (id; 0)`. Functoriality of `Y(θ)` is
    /// checked, so an incoherent `θ` is rejected here.
    pub fn cylinder(&self) -> Result<Cylinder<R>, HNatError> {
        let cat = self.f.cat().clone();
        let objects: Vec<_> = (0..cat.object_count())
            .map(|i| self.g.object(i).direct_sum(&cone(self.f.object(i))))
            .collect();
        let mut arrows = Vec::with_capacity(cat.arrow_count());
        for a in 0..cat.arrow_count() {
            let arrow = cat.arrow(a);
            let corner = ChainMap::zero(self.g.object(arrow.source), &cone(self.f.object(arrow.target)));
            let block = ChainMap::block2(self.g.arrow(a), &self.arrows[a].neg(), &corner, &cone_map(self.f.arrow(a)))?;
            arrows.push(block);
        }
        let functor = Functor::new(cat.clone(), objects, arrows)?;
        let j1 = (0..cat.object_count())
            .map(|i| ChainMap::pair(&self.objects[i], &iota(self.f.object(i)).neg()))
            .collect::<Result<Vec<_>, _>>()?;
        let j2 = (0..cat.object_count())
            .map(|i| {
                let y = self.g.object(i);
                ChainMap::pair(&ChainMap::identity(y), &ChainMap::zero(y, &cone(self.f.object(i))))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Cylinder {
            from_source: StrictNat::new(self.f.clone(), functor.clone(), j1)?,
            from_target: StrictNat::new(self.g.clone(), functor.clone(), j2)?,
            functor,
        })
    }

    /// The zig-zag `f → Y(θ) ← g` for a componentwise equivalence `θ`.
    pub fn zigzag(&self) -> Result<Cylinder<R>, HNatError> {
        let cat = self.f.cat().clone();
        for (i, t) in self.objects.iter().enumerate() {
            if !is_quasi_iso(t) {
                return Err(HNatError::ComponentNotEquivalence(cat.objects()[i].clone()));
            }
        }
        let cylinder = self.cylinder()?;
        for i in 0..cat.object_count() {
            if !is_quasi_iso(cylinder.from_source.component(i)) || !is_quasi_iso(cylinder.from_target.component(i)) {
                return Err(HNatError::ComponentNotEquivalence(cat.objects()[i].clone()));
            }
        }
        Ok(cylinder)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "f": self.f.to_json(),
            "g": self.g.to_json(),
            "theta_obj": self.objects.iter().map(ChainMap::to_json).collect::<Vec<_>>(),
            "theta_arr": self.arrows.iter().map(ChainMap::to_json).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::{Matrix, Ring, ZLocal};
    use crate::chain::{ChainComplex, ChainHomotopy};
    use crate::hnat::FiniteCat;

    fn z5() -> ZLocal {
        ZLocal::new(5).unwrap()
    }

    fn five() -> ChainComplex<ZLocal> {
        ChainComplex::two_term(Matrix::from_ints(z5(), 1, 1, &[5])).unwrap()
    }

    fn scalar_map(x: &ChainComplex<ZLocal>, c: i64) -> ChainMap<ZLocal> {
        ChainMap::identity(x).scale(&x.ring().from_int(c))
    }

    /// On `[B -5-> B]` over a path with scalar arrows: `θ_i = id + d s_i + s_i d`
    /// for `s_i = i + 1`, so `θ_i = (6 + 5i)·id`, and the witness on `a : i → j`
    /// comes from `h_a = s_j f_a - g_a s_i`.
    fn deformed_identity(scalars: &[i64]) -> HNat<ZLocal> {
        let r = z5();
        let x = five();
        let cat = Arc::new(FiniteCat::path(scalars.len()));
        let maps: Vec<_> = scalars.iter().map(|&c| scalar_map(&x, c)).collect();
        let f = Functor::from_generators(cat, vec![x.clone(); scalars.len() + 1], maps).unwrap();
        let thetas: Vec<_> = (0..=scalars.len()).map(|i| scalar_map(&x, 6 + 5 * i as i64)).collect();
        let witnesses = scalars
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let fa = scalar_map(&x, c);
                let h = Matrix::from_ints(r, 1, 1, &[c]);
                let h = ChainHomotopy::new(thetas[i + 1].compose(&fa), fa.compose(&thetas[i]), [(0, h)]).unwrap();
                h.to_c_homotopy().map().clone()
            })
            .collect();
        HNat::extend_from_generators(f.clone(), f, thetas, witnesses).unwrap()
    }

    /// A chain map `C[B -5-> B] → [B -5-> B]` restricting to `5·id`.
    fn stray_witness() -> ChainMap<ZLocal> {
        let x = five();
        let h = ChainHomotopy::new(scalar_map(&x, 5), ChainMap::zero(&x, &x), [(0, Matrix::from_ints(z5(), 1, 1, &[1]))])
            .unwrap();
        h.to_c_homotopy().map().clone()
    }

    #[test]
    fn strict_transformation_is_coherent() {
        let x = five();
        let cat = Arc::new(FiniteCat::path(2));
        let f = Functor::from_generators(cat, vec![x.clone(); 3], vec![scalar_map(&x, 2), scalar_map(&x, 3)]).unwrap();
        let kappa = StrictNat::new(f.clone(), f, vec![scalar_map(&x, 7); 3]).unwrap();
        let theta = HNat::from_strict(&kappa);
        assert!(theta.validate().is_ok());
        let y = theta.cylinder().unwrap();
        assert_eq!(y.functor.object(0).rank(0), 2);
        assert!(y.functor.arrow(3).component(0).submatrix(0, 1, 1, 2).is_zero());
    }

    #[test]
    fn witnesses_are_non_trivial() {
        let theta = deformed_identity(&[2, 3]);
        assert!(!theta.arrow(3).is_zero());
        let ba = theta.source().cat().compose(4, 3).unwrap();
        let expected = star(theta.arrow(4), theta.arrow(3), theta.source().arrow(3), theta.target().arrow(4)).unwrap();
        assert_eq!(theta.arrow(ba), &expected);
    }

    #[test]
    fn nonzero_identity_witness_fails() {
        let theta = deformed_identity(&[2]);
        let mut arrows = theta.arrows.clone();
        arrows[0] = stray_witness();
        let broken = HNat::new_unchecked(theta.f.clone(), theta.g.clone(), theta.objects.clone(), arrows).unwrap();
        assert!(matches!(broken.validate(), Err(HNatError::CoherenceFailure { .. })));
    }

    #[test]
    fn extension_over_a_path() {
        let theta = deformed_identity(&[2, 3, 4]);
        assert!(theta.validate().is_ok());
        let cylinder = theta.zigzag().unwrap();
        assert!(cylinder.functor.check_functorial().is_ok());
    }

    #[test]
    fn incoherent_theta_breaks_the_cylinder() {
        let theta = deformed_identity(&[2, 3]);
        let ba = theta.f.cat().compose(4, 3).unwrap();
        let mut arrows = theta.arrows.clone();
        arrows[ba] = arrows[ba].add(&stray_witness());
        let broken = HNat::new_unchecked(theta.f.clone(), theta.g.clone(), theta.objects.clone(), arrows).unwrap();
        assert!(broken.validate().is_err());
        assert!(matches!(broken.cylinder(), Err(HNatError::NotFunctorial(_))));
    }

    #[test]
    fn mixed_composition_with_identities() {
        let theta = deformed_identity(&[2, 3]);
        assert_eq!(theta.precompose(&StrictNat::identity(theta.source())).unwrap(), theta);
        assert_eq!(theta.postcompose(&StrictNat::identity(theta.target())).unwrap(), theta);
        let x = five();
        let scale = |c| {
            let comps = vec![scalar_map(&x, c); 3];
            StrictNat::new(theta.source().clone(), theta.source().clone(), comps).unwrap()
        };
        let twice = theta.precompose(&scale(2)).unwrap();
        assert_eq!(twice.arrow(3), &theta.arrow(3).scale(&z5().from_int(2)));
        assert!(theta.postcompose(&scale(3)).is_ok());
    }

    #[test]
    fn zero_component_is_not_an_equivalence() {
        let x = five();
        let cat = Arc::new(FiniteCat::path(0));
        let f = Functor::new(cat, vec![x.clone()], vec![ChainMap::identity(&x)]).unwrap();
        let kappa = StrictNat::new(f.clone(), f, vec![ChainMap::zero(&x, &x)]).unwrap();
        assert!(matches!(HNat::from_strict(&kappa).zigzag(), Err(HNatError::ComponentNotEquivalence(_))));
    }
}
