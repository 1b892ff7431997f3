//! Finitely generated modules over a discrete valuation ring, their
//! classes in `K₀`, and short exact sequences certifying the relations.

use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{smith_normal_form, AlgebraError, Dvr, Matrix, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum K0Error {
    #[error("element is a unit")]
    UnitElement,
    #[error("element is zero")]
    ZeroElement,
    #[error("module is not torsion")]
    NotTorsion,
    #[error("sequence is not exact: {0}")]
    NotExact(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// The cokernel of `presentation : R^relations → R^generators`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FLModule<R: Dvr> {
    presentation: Matrix<R>,
    exponents: Vec<u32>,
    free_rank: usize,
}

/// Reads off invariant factors `π^{a_i}` (`a_i ≥ 1`, ascending) and the free rank.
pub fn classify_module<R: Dvr>(presentation: Matrix<R>) -> FLModule<R> {
    let snf = smith_normal_form(&presentation);
    let mut exponents: Vec<u32> = snf.exponents().into_iter().filter(|&a| a > 0).collect();
    exponents.sort_unstable();
    let free_rank = presentation.rows() - snf.rank();
    FLModule { presentation, exponents, free_rank }
}

impl<R: Dvr> FLModule<R> {
    pub fn free(ring: R, rank: usize) -> Self {
        classify_module(Matrix::zeros(ring, rank, 0))
    }

    /// `R/π^a`.
    pub fn cyclic(ring: R, a: u32) -> Self {
        classify_module(Matrix::diagonal(ring, &[ring.uniformizer_power(a)]))
    }

    /// `R/(f)`.
    pub fn quotient(ring: R, f: &R::Elem) -> Self {
        classify_module(Matrix::diagonal(ring, std::slice::from_ref(f)))
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        classify_module(self.presentation.direct_sum(&other.presentation))
    }

    pub fn ring(&self) -> R {
        self.presentation.ring()
    }

    pub fn presentation(&self) -> &Matrix<R> {
        &self.presentation
    }

    pub fn generators(&self) -> usize {
        self.presentation.rows()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn is_torsion(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.exponents.is_empty()
    }

    /// Length of the torsion part, `Σ a_i`.
    pub fn length(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// Modules are isomorphic iff the invariants agree.
    pub fn is_isomorphic(&self, other: &Self) -> bool {
        self.free_rank == other.free_rank && self.exponents == other.exponents
    }

    pub fn to_json(&self) -> Value {
        json!({
            "generators": self.generators(),
            "relations": self.presentation.to_json(),
            "exponents": self.exponents,
            "free_rank": self.free_rank,
        })
    }

    /// Accepts `{"generators": k, "relations": matrix}`; the matrix may be
    /// omitted for a free module.
    pub fn from_json(ring: R, value: &Value) -> Result<Self, K0Error> {
        let generators = value
            .get("generators")
            .and_then(Value::as_u64)
            .ok_or_else(|| K0Error::ShapeMismatch("missing generator count".into()))? as usize;
        let presentation = match value.get("relations") {
            Some(m) => Matrix::from_json(ring, m)?,
            None => Matrix::zeros(ring, generators, 0),
        };
        if presentation.rows() != generators {
            return Err(K0Error::ShapeMismatch("relations must have one row per generator".into()));
        }
        Ok(classify_module(presentation))
    }
}

/// The class in `K₀` of all finitely generated modules, which is `ℤ` via the rank.
pub fn k0_class<R: Dvr>(module: &FLModule<R>) -> i64 {
    module.free_rank as i64
}

/// `0 → A → B → C → 0` with maps given on generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SESWitness<R: Dvr> {
    pub sub: FLModule<R>,
    pub middle: FLModule<R>,
    pub quotient: FLModule<R>,
    /// `generators(B) × generators(A)`.
    pub inclusion: Matrix<R>,
    /// `generators(C) × generators(B)`.
    pub projection: Matrix<R>,
}

/// Whether every column of `m` lies in the column span of `span`.
fn in_span<R: Ring>(span: &Matrix<R>, m: &Matrix<R>) -> bool {
    if m.cols() == 0 {
        return true;
    }
    if span.cols() == 0 {
        return m.is_zero();
    }
    smith_normal_form(span).solve(m).is_some()
}

/// First `rows` coordinates of a basis of `ker (left | right)`.
fn kernel_head<R: Ring>(left: &Matrix<R>, right: &Matrix<R>) -> Matrix<R> {
    let kernel = smith_normal_form(&left.hstack(right)).kernel_basis();
    kernel.submatrix(0, left.cols(), 0, kernel.cols())
}

impl<R: Dvr> SESWitness<R> {
    pub fn new(
        sub: FLModule<R>,
        middle: FLModule<R>,
        quotient: FLModule<R>,
        inclusion: Matrix<R>,
        projection: Matrix<R>,
    ) -> Result<Self, K0Error> {
        let witness = SESWitness { sub, middle, quotient, inclusion, projection };
        witness.validate()?;
        Ok(witness)
    }

    /// Certifies exactness with Smith forms: both maps are well defined,
    /// the composite vanishes, `ker ᾱ = 0`, `ker β̄ ⊆ im ᾱ` and `β̄` is onto.
    pub fn validate(&self) -> Result<(), K0Error> {
        let (pa, pb, pc) = (&self.sub.presentation, &self.middle.presentation, &self.quotient.presentation);
        let (alpha, beta) = (&self.inclusion, &self.projection);
        if alpha.shape() != (pb.rows(), pa.rows()) || beta.shape() != (pc.rows(), pb.rows()) {
            return Err(K0Error::ShapeMismatch("maps do not match the generators".into()));
        }
        let fail = |what: &str| Err(K0Error::NotExact(what.into()));
        if !in_span(pb, &(alpha * pa)) || !in_span(pc, &(beta * pb)) {
            return fail("a map does not respect the relations");
        }
        if !in_span(pc, &(beta * alpha)) {
            return fail("the composite is not zero");
        }
        if !in_span(pa, &kernel_head(alpha, pb)) {
            return fail("the inclusion is not injective");
        }
        if !in_span(&alpha.hstack(pb), &kernel_head(beta, pc)) {
            return fail("the kernel of the projection is larger than the image");
        }
        let onto = smith_normal_form(&beta.hstack(pc));
        if onto.rank() < pc.rows() || onto.exponents().iter().any(|&a| a > 0) {
            return fail("the projection is not onto");
        }
        Ok(())
    }

    /// `class(B) = class(A) + class(C)`.
    pub fn k0_additive(&self) -> bool {
        k0_class(&self.middle) == k0_class(&self.sub) + k0_class(&self.quotient)
    }

    /// Length additivity, for sequences of torsion modules.
    pub fn length_additive(&self) -> bool {
        self.middle.length() == self.sub.length() + self.quotient.length()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "sub": self.sub.to_json(),
            "middle": self.middle.to_json(),
            "quotient": self.quotient.to_json(),
            "inclusion": self.inclusion.to_json(),
            "projection": self.projection.to_json(),
        })
    }
}

/// `0 → R --f--> R → R/(f) → 0` with the resulting class of `R/(f)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Telescope<R: Dvr> {
    pub witness: SESWitness<R>,
    /// `class(R) - class(R)`, read off the sequence.
    pub quotient_class: i64,
}

pub fn telescope_witness<R: Dvr>(ring: R, f: &R::Elem) -> Result<Telescope<R>, K0Error> {
    if ring.is_zero(f) {
        return Err(K0Error::ZeroElement);
    }
    if ring.is_unit(f) {
        return Err(K0Error::UnitElement);
    }
    let witness = SESWitness::new(
        FLModule::free(ring, 1),
        FLModule::free(ring, 1),
        FLModule::quotient(ring, f),
        Matrix::diagonal(ring, std::slice::from_ref(f)),
        Matrix::identity(ring, 1),
    )?;
    let quotient_class = k0_class(&witness.middle) - k0_class(&witness.sub);
    Ok(Telescope { witness, quotient_class })
}

/// `[M] = Σ_i [R/π^{a_i}]`, and `[R/π^a] = a·[R/π]` through the chain
/// `R/π ↪ R/π^a ↠ R/π^{a-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition<R: Dvr> {
    pub exponents: Vec<u32>,
    /// Coefficient of `[R/π]`.
    pub multiple: u32,
    /// For each summand `R/π^a`, the sequences for `a, a-1, …, 2`.
    pub chains: Vec<Vec<SESWitness<R>>>,
}

impl<R: Dvr> Decomposition<R> {
    pub fn to_json(&self) -> Value {
        let chains: Vec<Vec<Value>> = self.chains.iter().map(|c| c.iter().map(SESWitness::to_json).collect()).collect();
        json!({ "exponents": self.exponents, "multiple": self.multiple, "chains": chains })
    }
}

/// `0 → R/π → R/π^a → R/π^{a-1} → 0` for `a ≥ 2`.
pub fn peel_sequence<R: Dvr>(ring: R, a: u32) -> Result<SESWitness<R>, K0Error> {
    SESWitness::new(
        FLModule::cyclic(ring, 1),
        FLModule::cyclic(ring, a),
        FLModule::cyclic(ring, a - 1),
        Matrix::diagonal(ring, &[ring.uniformizer_power(a - 1)]),
        Matrix::identity(ring, 1),
    )
}

pub fn generator_decompose<R: Dvr>(module: &FLModule<R>) -> Result<Decomposition<R>, K0Error> {
    if !module.is_torsion() {
        return Err(K0Error::NotTorsion);
    }
    let ring = module.ring();
    let mut chains = Vec::new();
    for &a in &module.exponents {
        let chain = (2..=a).rev().map(|k| peel_sequence(ring, k)).collect::<Result<Vec<_>, _>>()?;
        if chain.iter().any(|s| !s.length_additive()) {
            return Err(K0Error::NotExact("length is not additive".into()));
        }
        chains.push(chain);
    }
    Ok(Decomposition { exponents: module.exponents.clone(), multiple: module.length(), chains })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ZLocal;

    fn z5() -> ZLocal {
        ZLocal::new(5).unwrap()
    }

    #[test]
    fn classify_examples() {
        let r = z5();
        let m = classify_module(Matrix::from_ints(r, 1, 1, &[5]));
        assert_eq!((m.exponents(), m.free_rank()), (&[1][..], 0));
        assert_eq!(classify_module(Matrix::from_ints(r, 1, 1, &[25])).exponents(), &[2]);
        assert_eq!(classify_module(Matrix::zeros(r, 1, 0)).free_rank(), 1);
        // Units in the presentation kill generators.
        let m = classify_module(Matrix::from_ints(r, 2, 2, &[3, 0, 0, 50]));
        assert_eq!((m.exponents(), m.free_rank()), (&[2][..], 0));
    }

    #[test]
    fn classes() {
        let r = z5();
        assert_eq!(k0_class(&FLModule::free(r, 1)), 1);
        assert_eq!(k0_class(&FLModule::cyclic(r, 1)), 0);
        assert_eq!(k0_class(&FLModule::free(r, 1).direct_sum(&FLModule::cyclic(r, 2))), 1);
    }

    #[test]
    fn telescopes() {
        let r = z5();
        for f in [5, 25, 10, -75] {
            let t = telescope_witness(r, &r.from_int(f)).unwrap();
            assert_eq!(t.quotient_class, 0);
            assert_eq!(k0_class(&t.witness.quotient), t.quotient_class);
            assert!(t.witness.k0_additive());
        }
        assert_eq!(telescope_witness(r, &r.from_int(3)), Err(K0Error::UnitElement));
        assert_eq!(telescope_witness(r, &r.zero()), Err(K0Error::ZeroElement));
    }

    #[test]
    fn non_exact_sequences_are_rejected() {
        let r = z5();
        let one = FLModule::free(r, 1);
        // R --5--> R → R/25 is not exact in the middle.
        let bad = SESWitness::new(
            one.clone(),
            one.clone(),
            FLModule::cyclic(r, 2),
            Matrix::from_ints(r, 1, 1, &[5]),
            Matrix::identity(r, 1),
        );
        assert!(matches!(bad, Err(K0Error::NotExact(_))));
        // R --25--> R → R/5 has a non-zero composite.
        let bad = SESWitness::new(
            one.clone(),
            one.clone(),
            FLModule::cyclic(r, 1),
            Matrix::from_ints(r, 1, 1, &[1]),
            Matrix::identity(r, 1),
        );
        assert!(matches!(bad, Err(K0Error::NotExact(_))));
        // R/5 → R/25 by 1 is not well defined.
        let bad = SESWitness::new(
            FLModule::cyclic(r, 1),
            FLModule::cyclic(r, 2),
            FLModule::cyclic(r, 1),
            Matrix::from_ints(r, 1, 1, &[1]),
            Matrix::identity(r, 1),
        );
        assert!(bad.is_err());
        // R → R ⊕ R → R with a zero projection is not onto.
        let bad = SESWitness::new(
            one.clone(),
            FLModule::free(r, 2),
            one,
            Matrix::from_ints(r, 2, 1, &[1, 0]),
            Matrix::from_ints(r, 1, 2, &[0, 0]),
        );
        assert!(bad.is_err());
    }

    #[test]
    fn decompositions() {
        let r = z5();
        let d = generator_decompose(&FLModule::cyclic(r, 1)).unwrap();
        assert_eq!((d.multiple, d.chains[0].len()), (1, 0));
        let d = generator_decompose(&FLModule::cyclic(r, 2)).unwrap();
        assert_eq!(d.multiple, 2);
        let s = &d.chains[0][0];
        assert!(s.sub.is_isomorphic(&FLModule::cyclic(r, 1)) && s.quotient.is_isomorphic(&FLModule::cyclic(r, 1)));
        let d = generator_decompose(&FLModule::cyclic(r, 1).direct_sum(&FLModule::cyclic(r, 2))).unwrap();
        assert_eq!(d.multiple, 3);
        assert_eq!(generator_decompose(&FLModule::free(r, 1)), Err(K0Error::NotTorsion));
    }

    #[test]
    fn json_round_trip() {
        let r = z5();
        let m = FLModule::cyclic(r, 2).direct_sum(&FLModule::free(r, 1));
        let back = FLModule::from_json(r, &m.to_json()).unwrap();
        assert_eq!(back, m);
        let free = FLModule::from_json(r, &serde_json::json!({ "generators": 2 })).unwrap();
        assert_eq!(free.free_rank(), 2);
    }
}
