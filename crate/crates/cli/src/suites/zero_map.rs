use gersten_core::algebra::{Dvr, Matrix};
use gersten_core::category::{CMorphism, CObject};
use gersten_core::chain::{is_quasi_iso, ChainMap};
use gersten_core::random::{
    boundary_of, random_iso, random_iso_chain, random_morphism, random_object, random_triangular, random_triangular_iso,
    Sample,
};
use gersten_core::zero_map::{
    delta, delta_naturality, is_chain_morphism, mu1, mu2, rectify, rectify_morphism, s1s2_equality_check,
    DeltaNaturality, IsoChain, ZeroMapError,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{ensure, Check, OrFail, Outcome, Params};
use crate::config::Sabotage;

pub(super) fn checks<R: Sample>() -> Vec<Check<R>> {
    vec![
        Check { anchor: "zero-map/mu-data-equality", run: mu_data_equality },
        Check { anchor: "zero-map/mu-triangular-composition", run: mu_triangular_composition },
        Check { anchor: "zero-map/mu-split-sequences", run: mu_split_sequences },
        Check { anchor: "zero-map/mu-isomorphisms", run: mu_isomorphisms },
        Check { anchor: "zero-map/delta-equivalence", run: delta_equivalence },
        Check { anchor: "zero-map/delta-naturality", run: delta_naturality_check },
        Check { anchor: "zero-map/rectification", run: rectification },
        Check { anchor: "zero-map/rectification-idempotent", run: rectification_idempotent },
        Check { anchor: "zero-map/rectification-naturality", run: rectification_naturality },
    ]
}

fn mu_data_equality<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let r = p.ring;
    let (x, y) = (random_object(r, rng, p.max_dim), random_object(r, rng, p.max_dim));
    let phi = random_morphism(rng, x, y, p.max_val);
    let input = || json!({ "phi": phi.to_json() });
    ensure(s1s2_equality_check(&phi), "mu1 and mu2 carry the same data", input)?;
    let (a, b) = (mu1(&phi).to_chain_map(), mu2(&phi).to_chain_map());
    let same = [0, 1].iter().all(|&n| a.component(n) == phi.nn && b.component(n) == phi.nn);
    ensure(same, "every component of mu1(phi), mu2(phi) is the (n',n) block", input)
}

fn mu_triangular_composition<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let r = p.ring;
    let (x, y, z) = (random_object(r, rng, p.max_dim), random_object(r, rng, p.max_dim), random_object(r, rng, p.max_dim));
    let upper = rng.gen_bool(0.5);
    let phi = random_triangular(rng, x, y, upper, p.max_val);
    let psi = random_triangular(rng, y, z, upper, p.max_val);
    let input = || json!({ "phi": phi.to_json(), "psi": psi.to_json(), "upper": upper });
    let both = psi.compose(&phi).or_fail("composable", input)?;
    for (name, mu) in [("mu1", mu1::<R> as fn(&CMorphism<R>) -> CMorphism<R>), ("mu2", mu2::<R>)] {
        let split = mu(&psi).compose(&mu(&phi)).or_fail("composable", input)?;
        ensure(mu(&both) == split, name, input)?;
    }
    Ok(())
}

fn block_inclusion<R: Dvr>(x: CObject<R>, sum: CObject<R>, first: bool) -> CMorphism<R> {
    let r = x.ring;
    let place = |k: usize, total: usize| {
        let (before, after) = if first { (0, total - k) } else { (total - k, 0) };
        Matrix::zeros(r, before, k).vstack(&Matrix::identity(r, k)).vstack(&Matrix::zeros(r, after, k))
    };
    CMorphism::new(x, sum, place(x.n, sum.n), Matrix::zeros(r, sum.n, x.m), Matrix::zeros(r, sum.m, x.n), place(x.m, sum.m))
        .expect("shapes")
}

fn block_projection<R: Dvr>(sum: CObject<R>, x: CObject<R>, first: bool) -> CMorphism<R> {
    let t = block_inclusion(x, sum, first);
    CMorphism::new(sum, x, t.nn.transpose(), Matrix::zeros(x.ring, x.n, sum.m), Matrix::zeros(x.ring, x.m, sum.n), t.mm.transpose())
        .expect("shapes")
}

fn mu_split_sequences<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let r = p.ring;
    let xa = random_object(r, rng, p.max_dim);
    let xc = random_object(r, rng, p.max_dim);
    let xb = CObject::new(r, xa.n + xc.n, xa.m + xc.m);
    let (alpha, rho) = (block_inclusion(xa, xb, true), block_projection(xb, xa, true));
    let (gamma, beta) = (block_inclusion(xc, xb, false), block_projection(xb, xc, false));
    let input = || json!({ "sub": xa.to_json(), "quotient": xc.to_json() });
    for (name, mu) in [("mu1", mu1::<R> as fn(&CMorphism<R>) -> CMorphism<R>), ("mu2", mu2::<R>)] {
        let (a, b, g, q) = (mu(&alpha), mu(&beta), mu(&gamma), mu(&rho));
        let id = |m: &CMorphism<R>| ChainMap::identity(&m.source().to_complex());
        let ok = b.compose(&a).map(|c| c.to_chain_map().is_zero()) == Ok(true)
            && b.compose(&g).map(|c| c.to_chain_map() == id(&g)) == Ok(true)
            && q.compose(&a).map(|c| c.to_chain_map() == id(&a)) == Ok(true)
            && match (a.compose(&q), g.compose(&b)) {
                (Ok(s), Ok(t)) => s.to_chain_map().add(&t.to_chain_map()) == id(&b),
                _ => false,
            };
        ensure(ok, name, input)?;
    }
    Ok(())
}

fn mu_isomorphisms<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let x = random_object(p.ring, rng, p.max_dim);
    let phi = random_iso(rng, x, p.max_val);
    let input = || json!({ "phi": phi.to_json() });
    ensure(mu1(&phi).is_isomorphism() && mu2(&phi).is_isomorphism(), "mu1, mu2 of an isomorphism are isomorphisms", input)
}

fn delta_equivalence<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let r = p.ring;
    let x = random_object(r, rng, p.max_dim);
    let input = || json!({ "x": x.to_json() });
    let d = delta(x);
    let torsion = CObject::new(r, x.n, 0).to_complex();
    ensure(d.map.compose(&d.inverse) == ChainMap::identity(&torsion), "delta after inclusion is the identity", input)?;
    let h0 = Matrix::zeros(r, x.n, x.n).direct_sum(&Matrix::identity(r, x.m));
    ensure(d.homotopy.component(0) == h0, "homotopy is diag(0, E_m)", input)?;
    let source = x.to_complex();
    let difference = ChainMap::identity(&source).sub(&d.inverse.compose(&d.map));
    ensure(boundary_of(&source, &source, &[(0, h0)]) == difference, "d h + h d = id - inclusion delta", input)?;
    ensure(is_quasi_iso(&d.map), "delta is a quasi-isomorphism", input)
}

fn delta_naturality_check<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let r = p.ring;
    let (x, y) = (random_object(r, rng, p.max_dim), random_object(r, rng, p.max_dim));
    let kind = rng.gen_range(0..3);
    let phi = match kind {
        0 => random_triangular(rng, x, y, false, p.max_val),
        1 => random_triangular(rng, x, y, true, p.max_val),
        _ => random_morphism(rng, x, y, p.max_val),
    };
    let input = || json!({ "phi": phi.to_json() });
    let result = delta_naturality(&phi);
    let along_mu = mu1(&phi).to_chain_map().compose(&delta(x).map);
    let along_eta = delta(y).map.compose(&phi.to_chain_map());
    if !phi.is_upper_triangular() && !phi.is_lower_triangular() {
        return ensure(matches!(result, Err(ZeroMapError::NotTriangular)), "generic morphism is rejected", input);
    }
    match result.or_fail("triangular morphism has a witness", input)? {
        DeltaNaturality::Strict => {
            ensure(phi.is_lower_triangular(), "strict only for lower triangular", input)?;
            ensure(along_mu == along_eta, "mu1(phi) delta = delta phi", input)
        }
        DeltaNaturality::Homotopy { homotopy, difference } => {
            let mut h = homotopy.component(0);
            if p.sabotaged(Sabotage::DeltaSign) {
                h = h.neg();
            }
            let expected = Matrix::zeros(r, y.n, x.n).hstack(&phi.nm.neg());
            ensure(h == expected, "witness is (0, -phi_(n',m))", input)?;
            let target = CObject::new(r, y.n, 0).to_complex();
            let dh = boundary_of(&x.to_complex(), &target, &[(0, h)]);
            ensure(dh == along_mu.sub(&along_eta), "d h + h d = mu1(phi) delta - delta phi", input)?;
            ensure(difference.nn.is_zero() && difference.nm == phi.nm.neg(), "difference is (0, -phi_(n',m))", input)
        }
    }
}

fn chain_json<R: Dvr>(c: &IsoChain<R>) -> Value {
    c.to_json()
}

/// `(E 0; -mm⁻¹ mn  E)` from the blocks.
fn expected_alpha<R: Dvr>(phi: &CMorphism<R>) -> Option<CMorphism<R>> {
    let x = phi.source();
    let r = x.ring;
    let mn = (&phi.mm.inverse().ok()? * &phi.mn).neg();
    CMorphism::new(x, x, Matrix::identity(r, x.n), Matrix::zeros(r, x.n, x.m), mn, Matrix::identity(r, x.m)).ok()
}

fn random_chain<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> (IsoChain<R>, usize) {
    let x = random_object(p.ring, rng, p.max_dim);
    let length = rng.gen_range(1..=3);
    let k = rng.gen_range(0..length);
    (random_iso_chain(rng, x, length, k + 1, p.max_val), k)
}

fn rectification<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let (chain, k) = random_chain(p, rng);
    let input = || json!({ "chain": chain_json(&chain), "k": k });
    let x = chain.objects()[0];
    let out = rectify(&chain, k).or_fail("rectify", input)?;
    ensure(out.chain.in_class(k), "q_k lands in the smaller class", input)?;
    let alpha = expected_alpha(&chain.arrows()[k]).or_fail("(m,m) block invertible", input)?;
    ensure(out.alpha == alpha, "alpha = UT of arrow k", input)?;
    let alpha_inv = alpha.inverse().or_fail("alpha invertible", input)?;
    let formula = (0..chain.len()).all(|i| {
        let a = &chain.arrows()[i];
        let expected = match i {
            _ if i + 1 == k => alpha_inv.compose(a),
            _ if i == k => a.compose(&alpha),
            _ => Ok(a.clone()),
        };
        expected.as_ref() == Ok(&out.chain.arrows()[i])
    });
    ensure(formula, "arrows follow the case formula", input)?;
    let gamma_ok = out.gamma.len() == chain.objects().len()
        && out.gamma.iter().enumerate().all(|(i, g)| g.is_lower_triangular() && (i == k || *g == CMorphism::identity(x)));
    ensure(gamma_ok, "gamma is alpha at k, identities elsewhere, all lower triangular", input)?;
    ensure(is_chain_morphism(&out.gamma, &out.chain, &chain), "gamma is a morphism q_k(x) -> x", input)?;

    // q_k j_k = id: a chain already in the smaller class is fixed.
    let fixed = random_iso_chain(rng, x, chain.len(), k, p.max_val);
    let input = || json!({ "chain": chain_json(&fixed), "k": k });
    let again = rectify(&fixed, k).or_fail("rectify", input)?;
    ensure(again.chain == fixed, "q_k j_k = id", input)?;
    ensure(again.gamma.iter().all(|g| *g == CMorphism::identity(x)), "gamma is the identity on the smaller class", input)
}

fn rectification_idempotent<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let (chain, k) = random_chain(p, rng);
    let input = || json!({ "chain": chain_json(&chain), "k": k });
    let once = rectify(&chain, k).or_fail("rectify", input)?;
    let twice = rectify(&once.chain, k).or_fail("rectify again", input)?;
    ensure(twice.chain == once.chain, "second rectification changes nothing", input)?;
    ensure(twice.alpha == CMorphism::identity(chain.objects()[0]), "second alpha is the identity", input)
}

fn rectification_naturality<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let (chain, k) = random_chain(p, rng);
    let x = chain.objects()[0];
    // Upper triangular isomorphisms keep the class of the transported chain.
    let theta: Vec<_> = (0..=chain.len()).map(|_| random_triangular_iso(rng, x, true, p.max_val)).collect();
    let input = || {
        json!({ "chain": chain_json(&chain), "k": k, "theta": theta.iter().map(CMorphism::to_json).collect::<Vec<_>>() })
    };
    let arrows = (0..chain.len())
        .map(|i| {
            let inv = theta[i].inverse()?;
            theta[i + 1].compose(&chain.arrows()[i]).ok()?.compose(&inv).ok()
        })
        .collect::<Option<Vec<_>>>()
        .or_fail("transport along theta", input)?;
    let target = IsoChain::new(chain.objects().to_vec(), arrows).or_fail("transported chain", input)?;
    ensure(is_chain_morphism(&theta, &chain, &target), "theta is a morphism of chains", input)?;
    let (rx, ry) = (rectify(&chain, k).or_fail("rectify", input)?, rectify(&target, k).or_fail("rectify", input)?);
    let q_theta = rectify_morphism(&theta, &rx, &ry, k).or_fail("rectify the morphism", input)?;
    ensure(is_chain_morphism(&q_theta, &rx.chain, &ry.chain), "q_k(theta) is a morphism of chains", input)?;
    let square = (0..theta.len()).all(|i| {
        ry.gamma[i].compose(&q_theta[i]).ok() == theta[i].compose(&rx.gamma[i]).ok()
    });
    ensure(square, "gamma_y q_k(theta) = theta gamma_x", input)
}
