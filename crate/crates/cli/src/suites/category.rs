use gersten_core::algebra::{rank, Dvr, Matrix};
use gersten_core::category::{classify, split_exactness, CMorphism, CObject, CategoryError};
use gersten_core::chain::{is_quasi_iso, ChainMap};
use gersten_core::random::{
    planted_two_term, random_invertible, random_iso, random_matrix, random_morphism, random_object, random_triangular_iso,
    Sample,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{ensure, Check, OrFail, Outcome, Params};
use crate::config::Sabotage;

pub(super) fn checks<R: Sample>() -> Vec<Check<R>> {
    vec![
        Check { anchor: "category/composition-oracle", run: composition_oracle },
        Check { anchor: "category/triangulation", run: triangulation },
        Check { anchor: "category/triangulation-of-upper", run: triangulation_of_upper },
        Check { anchor: "category/block-invertibility", run: block_invertibility },
        Check { anchor: "category/upside-down-functor", run: upside_down_functor },
        Check { anchor: "category/split-sequences", run: split_sequences },
        Check { anchor: "category/quasi-iso-iff-iso", run: quasi_iso_iff_iso },
        Check { anchor: "category/classify-planted", run: classify_planted },
        Check { anchor: "category/classify-rejects-g-squared", run: classify_rejects },
    ]
}

/// `ψ ∘ φ` through the block law; `composition-g` drops the `g` in the
/// `(n',n)` corner term.
pub(super) fn composite<R: Dvr>(p: &Params<R>, psi: &CMorphism<R>, phi: &CMorphism<R>) -> Result<CMorphism<R>, CategoryError> {
    let mut c = psi.compose(phi)?;
    if p.sabotaged(Sabotage::CompositionG) {
        let corner = &psi.nm * &phi.mn;
        c.nn = &(&c.nn - &corner.scale(&p.ring.uniformizer())) + &corner;
    }
    Ok(c)
}

fn composition_oracle<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let r = p.ring;
    let dim = p.max_dim.min(4);
    let (x, y, z) = (random_object(r, rng, dim), random_object(r, rng, dim), random_object(r, rng, dim));
    let phi = random_morphism(rng, x, y, p.max_val);
    let psi = random_morphism(rng, y, z, p.max_val);
    let input = || json!({ "phi": phi.to_json(), "psi": psi.to_json() });
    let blocks = composite(p, &psi, &phi).or_fail("block composition", input)?;
    let chain = psi.to_chain_map().compose(&phi.to_chain_map());
    ensure(blocks.to_chain_map() == chain, "block composite equals the chain-map composite", input)?;
    let recovered = CMorphism::from_chain_map(&chain, x, z).or_fail("chain composite has block form", input)?;
    ensure(recovered == blocks, "blocks recovered from the chain composite", input)
}

/// `φ ∘ UT(φ)`, with `ut-sign` flipping the correction block of `UT(φ)`.
fn triangulated<R: Dvr>(p: &Params<R>, phi: &CMorphism<R>) -> Result<(CMorphism<R>, CMorphism<R>), CategoryError> {
    let mut ut = phi.upper_triangulation()?;
    if p.sabotaged(Sabotage::UtSign) {
        ut.mn = ut.mn.neg();
    }
    Ok((phi.compose(&ut)?, ut))
}

fn triangulation<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let r = p.ring;
    let x = random_object(r, rng, p.max_dim);
    let phi = random_iso(rng, x, p.max_val);
    let input = || json!({ "phi": phi.to_json() });
    let (product, ut) = triangulated(p, &phi).or_fail("UT(phi) exists", input)?;
    ensure(product.is_upper_triangular(), "phi UT(phi) is upper triangular", input)?;
    ensure(ut.is_lower_triangular() && ut.nn.is_identity() && ut.mm.is_identity(), "UT(phi) is unipotent lower", input)?;
    // Display: (nn - g nm mm^-1 mn, nm; 0, mm).
    let mm_inv = phi.mm.inverse().or_fail("mm invertible", input)?;
    let g = r.uniformizer();
    let expected_nn = &phi.nn - &(&(&phi.nm * &mm_inv) * &phi.mn).scale(&g);
    ensure(
        product.nn == expected_nn && product.nm == phi.nm && product.mm == phi.mm,
        "phi UT(phi) matches the closed form entrywise",
        input,
    )
}

fn triangulation_of_upper<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let x = random_object(p.ring, rng, p.max_dim);
    let phi = random_triangular_iso(rng, x, true, p.max_val);
    let input = || json!({ "phi": phi.to_json() });
    let (product, ut) = triangulated(p, &phi).or_fail("UT(phi) exists", input)?;
    ensure(ut == CMorphism::identity(x), "UT(upper) = id", input)?;
    ensure(product == phi, "phi UT(phi) = phi for upper phi", input)
}

fn chain_invertible<R: Dvr>(phi: &CMorphism<R>) -> bool {
    phi.degree_one().is_invertible() && phi.degree_zero().is_invertible()
}

fn block_invertibility<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let x = random_object(p.ring, rng, p.max_dim);
    // A product of isomorphisms has no reason to keep invertible diagonal
    // blocks except the residue argument.
    let factors: Vec<_> = (0..3).map(|_| random_iso(rng, x, p.max_val)).collect();
    let phi = factors[1..].iter().try_fold(factors[0].clone(), |acc, f| f.compose(&acc));
    let input = || json!({ "factors": factors.iter().map(CMorphism::to_json).collect::<Vec<_>>() });
    let phi = phi.or_fail("composable", input)?;
    ensure(chain_invertible(&phi) && phi.is_isomorphism(), "product of isomorphisms is an isomorphism", input)?;
    ensure(phi.nn.is_invertible() && phi.mm.is_invertible(), "diagonal blocks of an isomorphism are invertible", input)?;

    let any = random_morphism(rng, x, x, p.max_val);
    let input = || json!({ "phi": any.to_json() });
    ensure(any.is_isomorphism() == chain_invertible(&any), "is_isomorphism agrees with chain invertibility", input)?;
    if any.is_isomorphism() {
        ensure(any.nn.is_invertible() && any.mm.is_invertible(), "diagonal blocks of an isomorphism are invertible", input)?;
    }
    Ok(())
}

fn upside_down_functor<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let r = p.ring;
    let (x, y, z) = (random_object(r, rng, p.max_dim), random_object(r, rng, p.max_dim), random_object(r, rng, p.max_dim));
    let phi = random_morphism(rng, x, y, p.max_val);
    let psi = random_morphism(rng, y, z, p.max_val);
    let input = || json!({ "phi": phi.to_json(), "psi": psi.to_json() });
    ensure(phi.upside_down().upside_down() == phi, "UD(UD(phi)) = phi", input)?;
    ensure(CMorphism::identity(x).upside_down() == CMorphism::identity(x.upside_down()), "UD(id) = id", input)?;
    let left = psi.compose(&phi).or_fail("composable", input)?.upside_down();
    let right = psi.upside_down().compose(&phi.upside_down()).or_fail("composable", input)?;
    ensure(left == right, "UD(psi phi) = UD(psi) UD(phi)", input)
}

fn plain<R: Dvr>(x: CObject<R>, y: CObject<R>, nn: Matrix<R>) -> CMorphism<R> {
    let r = x.ring;
    CMorphism::new(x, y, nn, Matrix::zeros(r, y.n, 0), Matrix::zeros(r, 0, x.n), Matrix::zeros(r, 0, 0)).expect("shapes")
}

fn chain_sum<R: Dvr>(a: &CMorphism<R>, b: &CMorphism<R>) -> ChainMap<R> {
    a.to_chain_map().add(&b.to_chain_map())
}

/// `α, β, γ, ρ` with `βα = 0`, `βγ = id`, `ρα = id`, `αρ + γβ = id`.
fn splitting_identities<R: Dvr>(
    alpha: &CMorphism<R>,
    beta: &CMorphism<R>,
    gamma: &CMorphism<R>,
    rho: &CMorphism<R>,
) -> Result<bool, CategoryError> {
    let (a, b, c) = (alpha.source(), alpha.target(), beta.target());
    Ok(beta.compose(alpha)? == CMorphism::zero(a, c)
        && beta.compose(gamma)? == CMorphism::identity(c)
        && rho.compose(alpha)? == CMorphism::identity(a)
        && chain_sum(&alpha.compose(rho)?, &gamma.compose(beta)?) == ChainMap::identity(&b.to_complex()))
}

fn split_sequences<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let r = p.ring;
    let (a, c) = loop {
        let (a, c) = (rng.gen_range(0..=p.max_dim), rng.gen_range(0..=p.max_dim));
        if a + c > 0 {
            break (a, c);
        }
    };
    let (xa, xb, xc) = (CObject::new(r, a, 0), CObject::new(r, a + c, 0), CObject::new(r, c, 0));
    let u = random_invertible(r, rng, a + c, p.max_val);
    let (s, t) = (random_invertible(r, rng, a, p.max_val), random_invertible(r, rng, c, p.max_val));
    let incl = Matrix::identity(r, a).vstack(&Matrix::zeros(r, c, a));
    let proj = Matrix::zeros(r, c, a).hstack(&Matrix::identity(r, c));
    let input = || json!({ "U": u.to_json(), "S": s.to_json(), "T": t.to_json() });
    let u_inv = u.inverse().or_fail("U invertible", input)?;
    let alpha = plain(xa, xb, &(&u * &incl) * &s);
    let beta = plain(xb, xc, &(&t * &proj) * &u_inv);
    let split = split_exactness(&alpha, &beta).or_fail("sequence splits", input)?;
    let (gamma, rho) = (split.section, split.retraction);
    ensure(splitting_identities(&alpha, &beta, &gamma, &rho) == Ok(true), "splitting identities", input)?;
    let ud = |m: &CMorphism<R>| m.upside_down();
    let flipped = splitting_identities(&ud(&alpha), &ud(&beta), &ud(&gamma), &ud(&rho));
    ensure(flipped == Ok(true), "UD preserves the splitting identities", input)?;
    let (ra, rb) = (rank(&alpha.h0()), rank(&beta.h0()));
    ensure(ra == a && rb == c && ra + rb == xb.h0(), "H0 ranks add along the sequence", input)?;
    ensure((&beta.h0() * &alpha.h0()).is_zero(), "H0 of the composite vanishes", input)
}

fn quasi_iso_iff_iso<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let r = p.ring;
    let n = rng.gen_range(1..=p.max_dim);
    let x = CObject::new(r, n, 0);
    let exps: Vec<u32> = (0..n).map(|_| if rng.gen_ratio(3, 4) { 0 } else { rng.gen_range(1..=2) }).collect();
    let diag: Vec<_> = exps.iter().map(|&e| r.uniformizer_power(e)).collect();
    let nn = if rng.gen_bool(0.2) {
        random_matrix(r, rng, n, n, p.max_val)
    } else {
        let (u, v) = (random_invertible(r, rng, n, p.max_val), random_invertible(r, rng, n, p.max_val));
        &(&u * &Matrix::diagonal(r, &diag)) * &v
    };
    let a = plain(x, x, nn);
    let input = || json!({ "a": a.to_json() });
    ensure(is_quasi_iso(&a.to_chain_map()) == a.is_isomorphism(), "quasi-isomorphism iff isomorphism on (n,0)", input)
}

fn classify_planted<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let r = p.ring;
    let k = rng.gen_range(1..=p.max_dim + 1);
    let exps: Vec<u32> = (0..k).map(|_| rng.gen_range(0..=1)).collect();
    let x = planted_two_term(r, rng, &exps, p.max_val);
    let input = || json!({ "complex": x.to_json(), "planted": exps });
    let c = classify(&x).or_fail("planted complex classifies", input)?;
    let n = exps.iter().filter(|&&a| a == 1).count();
    ensure((c.object.n, c.object.m) == (n, k - n), "classifies to the planted (n,m)", input)?;
    let w = &c.witness;
    let standard = c.object.to_complex();
    ensure(w.source() == &x && w.target() == &standard, "witness runs from x to the standard complex", input)?;
    ensure(&standard.d(1) * &w.component(1) == &w.component(0) * &x.d(1), "witness commutes with the boundaries", input)?;
    ensure(w.component(0).is_invertible() && w.component(1).is_invertible(), "witness is an isomorphism", input)
}

fn classify_rejects<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let r = p.ring;
    let k = rng.gen_range(1..=p.max_dim + 1);
    let mut exps: Vec<u32> = (0..k).map(|_| rng.gen_range(0..=1)).collect();
    let spot = rng.gen_range(0..k);
    exps[spot] = 2;
    let x = planted_two_term(r, rng, &exps, p.max_val);
    let input = || json!({ "complex": x.to_json(), "planted": exps });
    let result = classify(&x).map(|c| c.object.to_json());
    ensure(matches!(result, Err(CategoryError::NotInC(2))), "g^2 invariant factor is rejected with NotInC", input)
}
