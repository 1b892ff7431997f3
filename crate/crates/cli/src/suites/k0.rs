use gersten_core::algebra::{Matrix, Valuation};
use gersten_core::k0::{classify_module, generator_decompose, k0_class, telescope_witness, FLModule, K0Error, SESWitness};
use gersten_core::random::{random_invertible, random_matrix, Sample};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{ensure, Check, OrFail, Outcome, Params};

pub(super) fn checks<R: Sample>() -> Vec<Check<R>> {
    vec![
        Check { anchor: "k0/telescope", run: telescope },
        Check { anchor: "k0/additivity", run: additivity },
        Check { anchor: "k0/peel-chains", run: peel_chains },
    ]
}

fn telescope<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let r = p.ring;
    let v = rng.gen_range(1..=p.max_val.max(1) + 1);
    let f = r.mul(&r.random_unit(rng), &r.uniformizer_power(v));
    let input = || json!({ "f": r.format(&f) });
    let t = telescope_witness(r, &f).or_fail("telescope", input)?;
    t.witness.validate().or_fail("sequence is exact", input)?;
    ensure(t.quotient_class == 0 && k0_class(&FLModule::quotient(r, &f)) == 0, "class of R/(f) is 0", input)?;
    ensure(t.witness.k0_additive(), "class is additive", input)?;
    ensure(t.witness.quotient.length() == v, "length of R/(f) is v(f)", input)?;
    let u = r.random_unit(rng);
    let input = || json!({ "f": r.format(&u) });
    ensure(matches!(telescope_witness(r, &u), Err(K0Error::UnitElement)), "units are rejected", input)
}

fn random_module<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng, torsion: bool) -> FLModule<R> {
    let r = p.ring;
    let gens = rng.gen_range(1..=p.max_dim);
    let relations = if torsion { gens } else { rng.gen_range(0..=gens) };
    if torsion {
        let exps: Vec<_> = (0..gens).map(|_| r.uniformizer_power(rng.gen_range(0..=p.max_val))).collect();
        let d = Matrix::diagonal(r, &exps);
        let (u, v) = (random_invertible(r, rng, gens, p.max_val), random_invertible(r, rng, gens, p.max_val));
        return classify_module(&(&u * &d) * &v);
    }
    classify_module(random_matrix(r, rng, gens, relations, p.max_val))
}

fn additivity<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let r = p.ring;
    let torsion = rng.gen_bool(0.5);
    let (a, c) = (random_module(p, rng, torsion), random_module(p, rng, torsion));
    let input = || json!({ "sub": a.to_json(), "quotient": c.to_json() });
    let b = a.direct_sum(&c);
    let (na, nc) = (a.generators(), c.generators());
    let inclusion = Matrix::identity(r, na).vstack(&Matrix::zeros(r, nc, na));
    let projection = Matrix::zeros(r, nc, na).hstack(&Matrix::identity(r, nc));
    let ses = SESWitness::new(a.clone(), b, c.clone(), inclusion, projection).or_fail("split sequence is exact", input)?;
    ensure(ses.k0_additive(), "class is additive on split sequences", input)?;
    if torsion {
        ensure(ses.length_additive(), "length is additive on split sequences", input)?;
        ensure(k0_class(&a) == 0 && k0_class(&c) == 0, "torsion modules have class 0", input)?;
    }

    // Non-split: 0 → R/π^s → R/π^(s+t) → R/π^t → 0 by multiplication with π^t.
    let (s, t) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
    let input = || json!({ "s": s, "t": t });
    let ses = SESWitness::new(
        FLModule::cyclic(r, s),
        FLModule::cyclic(r, s + t),
        FLModule::cyclic(r, t),
        Matrix::diagonal(r, &[r.uniformizer_power(t)]),
        Matrix::identity(r, 1),
    )
    .or_fail("non-split sequence is exact", input)?;
    ensure(ses.k0_additive() && ses.length_additive(), "class and length are additive", input)?;
    let wrong = SESWitness::new(
        FLModule::cyclic(r, s),
        FLModule::cyclic(r, s + t),
        FLModule::cyclic(r, t),
        Matrix::diagonal(r, &[r.uniformizer_power(t + 1)]),
        Matrix::identity(r, 1),
    );
    ensure(wrong.is_err(), "a non-injective inclusion is rejected", input)
}

fn peel_chains<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let r = p.ring;
    let a = rng.gen_range(1..=5);
    let input = || json!({ "a": a });
    let d = generator_decompose(&FLModule::cyclic(r, a)).or_fail("decomposes", input)?;
    ensure(d.multiple == a && d.chains.len() == 1, "[R/pi^a] = a [R/pi]", input)?;
    let chain = &d.chains[0];
    ensure(chain.len() as u32 == a - 1, "a - 1 peeling sequences", input)?;
    for (i, ses) in chain.iter().enumerate() {
        let k = a - i as u32;
        ses.validate().or_fail("peeling sequence is exact", input)?;
        let shape = ses.sub.exponents() == [1] && ses.middle.exponents() == [k] && ses.quotient.exponents() == [k - 1];
        ensure(shape && ses.length_additive(), "R/pi -> R/pi^k -> R/pi^(k-1)", input)?;
    }

    // Any torsion module: the multiple equals v(det) of a square presentation.
    let m = random_module(p, rng, true);
    let input = || json!({ "module": m.to_json() });
    let d = generator_decompose(&m).or_fail("decomposes", input)?;
    let det = m.presentation().det().or_fail("determinant", input)?;
    ensure(r.valuation(&det) == Valuation::Finite(d.multiple), "multiple is v(det)", input)?;
    ensure(d.chains.iter().all(|c| c.iter().all(|s| s.validate().is_ok())), "all peeling sequences are exact", input)
}
