use std::sync::Arc;

use serde_json::{json, Value};

use crate::algebra::Ring;
use crate::chain::{ChainComplex, ChainMap};

use super::{FiniteCat, HNatError};

/// A functor from a finite category into chain complexes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Functor<R: Ring> {
    cat: Arc<FiniteCat>,
    objects: Vec<ChainComplex<R>>,
    arrows: Vec<ChainMap<R>>,
}

impl<R: Ring> Functor<R> {
    pub fn new(cat: Arc<FiniteCat>, objects: Vec<ChainComplex<R>>, arrows: Vec<ChainMap<R>>) -> Result<Self, HNatError> {
        let f = Self::new_unchecked(cat, objects, arrows)?;
        f.check_functorial()?;
        Ok(f)
    }

    /// Checks only that every arrow goes between the right complexes.
    pub fn new_unchecked(
        cat: Arc<FiniteCat>,
        objects: Vec<ChainComplex<R>>,
        arrows: Vec<ChainMap<R>>,
    ) -> Result<Self, HNatError> {
        if objects.len() != cat.object_count() || arrows.len() != cat.arrow_count() {
            return Err(HNatError::ShapeMismatch("functor data does not match the index category".into()));
        }
        for (a, map) in arrows.iter().enumerate() {
            let arrow = cat.arrow(a);
            if map.source() != &objects[arrow.source] || map.target() != &objects[arrow.target] {
                return Err(HNatError::ShapeMismatch(format!("image of {} has the wrong endpoints", arrow.label)));
            }
        }
        Ok(Functor { cat, objects, arrows })
    }

    /// Extends images of the generators of a free category along composition.
    pub fn from_generators(
        cat: Arc<FiniteCat>,
        objects: Vec<ChainComplex<R>>,
        generator_maps: Vec<ChainMap<R>>,
    ) -> Result<Self, HNatError> {
        let generators = cat.generators();
        if !cat.is_free() {
            return Err(HNatError::NotFree);
        }
        if generator_maps.len() != generators.len() || objects.len() != cat.object_count() {
            return Err(HNatError::ShapeMismatch("one map per generator expected".into()));
        }
        let image = |g: usize| &generator_maps[g - cat.object_count()];
        let mut arrows = Vec::with_capacity(cat.arrow_count());
        for a in 0..cat.arrow_count() {
            let path = cat.factorization(a).expect("free");
            let map = match path.split_first() {
                None => ChainMap::identity(&objects[a]),
                Some((&first, rest)) => rest
                    .iter()
                    .try_fold(image(first).clone(), |acc, &g| image(g).try_compose(&acc))?,
            };
            arrows.push(map);
        }
        Self::new(cat, objects, arrows)
    }

    /// Every object goes to `x` and every arrow to the identity.
    pub fn constant(cat: Arc<FiniteCat>, x: &ChainComplex<R>) -> Self {
        let objects = vec![x.clone(); cat.object_count()];
        let arrows = vec![ChainMap::identity(x); cat.arrow_count()];
        Functor { cat, objects, arrows }
    }

    pub fn check_functorial(&self) -> Result<(), HNatError> {
        let cat = &self.cat;
        for (a, map) in self.arrows.iter().enumerate() {
            if !map.is_chain_map() {
                return Err(HNatError::NotFunctorial(format!("{} is not a chain map", cat.arrow(a).label)));
            }
        }
        for i in 0..cat.object_count() {
            if self.arrows[cat.identity(i)] != ChainMap::identity(&self.objects[i]) {
                return Err(HNatError::NotFunctorial(cat.arrow(i).label.clone()));
            }
        }
        for (b, a) in cat.composable_pairs() {
            let ba = cat.compose(b, a).expect("listed pair");
            if self.arrows[ba] != self.arrows[b].compose(&self.arrows[a]) {
                return Err(HNatError::NotFunctorial(format!("{} ∘ {}", cat.arrow(b).label, cat.arrow(a).label)));
            }
        }
        Ok(())
    }

    pub fn cat(&self) -> &Arc<FiniteCat> {
        &self.cat
    }

    pub fn object(&self, i: usize) -> &ChainComplex<R> {
        &self.objects[i]
    }

    pub fn arrow(&self, a: usize) -> &ChainMap<R> {
        &self.arrows[a]
    }

    pub fn to_json(&self) -> Value {
        json!({
            "objects": self.objects.iter().map(ChainComplex::to_json).collect::<Vec<_>>(),
            "arrows": self.arrows.iter().map(ChainMap::to_json).collect::<Vec<_>>(),
        })
    }
}

/// A strict natural transformation between functors on the same category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrictNat<R: Ring> {
    source: Functor<R>,
    target: Functor<R>,
    components: Vec<ChainMap<R>>,
}

impl<R: Ring> StrictNat<R> {
    pub fn new(source: Functor<R>, target: Functor<R>, components: Vec<ChainMap<R>>) -> Result<Self, HNatError> {
        if source.cat != target.cat || components.len() != source.cat.object_count() {
            return Err(HNatError::ShapeMismatch("natural transformation between unrelated functors".into()));
        }
        for (i, c) in components.iter().enumerate() {
            if c.source() != source.object(i) || c.target() != target.object(i) || !c.is_chain_map() {
                return Err(HNatError::ShapeMismatch(format!("component at object {i}")));
            }
        }
        let cat = source.cat.clone();
        for a in 0..cat.arrow_count() {
            let arrow = cat.arrow(a);
            let left = target.arrow(a).compose(&components[arrow.source]);
            let right = components[arrow.target].compose(source.arrow(a));
            if left != right {
                return Err(HNatError::NotNatural(arrow.label.clone()));
            }
        }
        Ok(StrictNat { source, target, components })
    }

    pub fn identity(f: &Functor<R>) -> Self {
        let components = f.objects.iter().map(ChainMap::identity).collect();
        StrictNat { source: f.clone(), target: f.clone(), components }
    }

    pub fn source(&self) -> &Functor<R> {
        &self.source
    }

    pub fn target(&self) -> &Functor<R> {
        &self.target
    }

    pub fn component(&self, i: usize) -> &ChainMap<R> {
        &self.components[i]
    }

    pub fn components(&self) -> &[ChainMap<R>] {
        &self.components
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self, HNatError> {
        if inner.target != self.source {
            return Err(HNatError::ShapeMismatch("natural transformations are not composable".into()));
        }
        let components = self.components.iter().zip(&inner.components).map(|(a, b)| a.compose(b)).collect();
        Ok(StrictNat { source: inner.source.clone(), target: self.target.clone(), components })
    }
}
