use gersten_core::chain::{
    cone, cone_map, iota, is_acyclic, mapping_cone, r_map, CHomotopy, ChainComplex, ChainMap, HSquare,
};
use gersten_core::random::{random_arrow, random_chain_map, random_complex, random_homotopy, random_square_from, Sample};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{ensure, Check, OrFail, Outcome, Params};
use crate::config::Sabotage;

pub(super) fn checks<R: Sample>() -> Vec<Check<R>> {
    vec![
        Check { anchor: "chain/boundary-squares-to-zero", run: boundary_squares },
        Check { anchor: "chain/homotopy-round-trip", run: homotopy_round_trip },
        Check { anchor: "chain/cone-contraction", run: cone_contraction },
        Check { anchor: "chain/cone-functorial", run: cone_functorial },
        Check { anchor: "chain/star-contract", run: star_contract },
    ]
}

pub(super) fn small_complex<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> ChainComplex<R> {
    let lo = rng.gen_range(-1..=0);
    let hi = lo + rng.gen_range(0..=2);
    random_complex(p.ring, rng, lo, hi, p.max_dim.min(4), p.max_val)
}

fn squares_to_zero<R: Sample>(x: &ChainComplex<R>) -> bool {
    match x.support() {
        None => true,
        Some((lo, hi)) => (lo..=hi + 1).all(|n| (&x.d(n) * &x.d(n + 1)).is_zero()),
    }
}

fn boundary_squares<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let x = small_complex(p, rng);
    let y = small_complex(p, rng);
    let f = random_chain_map(rng, &x, &y, p.max_val);
    let input = || json!({ "x": x.to_json(), "y": y.to_json(), "f": f.to_json() });
    let commutes = (-3..=4).all(|n| &y.d(n) * &f.component(n) == &f.component(n - 1) * &x.d(n));
    ensure(commutes, "generated chain map commutes with the boundaries", input)?;
    for (what, z) in [("x", &x), ("Cx", &cone(&x)), ("mapping cone", &mapping_cone(&f)), ("x + y", &x.direct_sum(&y))] {
        ensure(squares_to_zero(z), what, input)?;
    }
    Ok(())
}

fn homotopy_round_trip<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let x = small_complex(p, rng);
    let y = small_complex(p, rng);
    let h = random_homotopy(rng, &x, &y, p.max_val);
    let input = || json!({ "x": x.to_json(), "y": y.to_json(), "f": h.f().to_json(), "g": h.g().to_json() });
    let big = h.to_c_homotopy();
    ensure(big.map().compose(&iota(&x)) == h.f().sub(h.g()), "H iota = f - g", input)?;
    let back = big.to_chain_homotopy().or_fail("C-homotopy converts back", input)?;
    ensure(back == h, "homotopy -> C-homotopy -> homotopy is the identity", input)?;

    // The other direction: start from an arbitrary chain map Cx -> y.
    let map = random_chain_map(rng, &cone(&x), &y, p.max_val);
    let g = random_chain_map(rng, &x, &y, p.max_val);
    let f = g.add(&map.compose(&iota(&x)));
    let input = || json!({ "x": x.to_json(), "y": y.to_json(), "H": map.to_json(), "g": g.to_json() });
    let big = CHomotopy::new(f, g.clone(), map.clone()).or_fail("H is a C-homotopy from g + H iota to g", input)?;
    let h = big.to_chain_homotopy().or_fail("C-homotopy converts", input)?;
    ensure(h.to_c_homotopy().map() == &map, "C-homotopy -> homotopy -> C-homotopy is the identity", input)
}

fn cone_contraction<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let x = small_complex(p, rng);
    let input = || json!({ "x": x.to_json() });
    let cx = cone(&x);
    let r = r_map(&x);
    ensure(r.is_chain_map(), "r_x is a chain map", input)?;
    ensure(r.compose(&iota(&cx)) == ChainMap::identity(&cx), "r_x iota = id - 0", input)?;
    CHomotopy::new(ChainMap::identity(&cx), ChainMap::zero(&cx, &cx), r).or_fail("r_x witnesses id => 0", input)?;
    ensure(is_acyclic(&cx), "Cx is acyclic", input)
}

fn cone_functorial<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let x = small_complex(p, rng);
    let y = small_complex(p, rng);
    let z = small_complex(p, rng);
    let a = random_chain_map(rng, &x, &y, p.max_val);
    let b = random_chain_map(rng, &y, &z, p.max_val);
    let input = || json!({ "a": a.to_json(), "b": b.to_json() });
    ensure(cone_map(&ChainMap::identity(&x)) == ChainMap::identity(&cone(&x)), "C(id) = id", input)?;
    ensure(cone_map(&b.compose(&a)) == cone_map(&b).compose(&cone_map(&a)), "C(ba) = C(b) C(a)", input)
}

pub(super) fn square_json<R: Sample>(s: &HSquare<R>) -> Value {
    json!({
        "f": s.f.to_json(),
        "g": s.g.to_json(),
        "a": s.a.to_json(),
        "b": s.b.to_json(),
        "witness": s.witness.to_json(),
    })
}

/// Pastes `first` then `second`; under `star-term` the `b'H` summand is lost.
pub(super) fn paste<R: Sample>(p: &Params<R>, first: &HSquare<R>, second: &HSquare<R>) -> Result<HSquare<R>, Value> {
    let input = || json!({ "first": square_json(first), "second": square_json(second) });
    let mut composite = first.then(second).or_fail("squares paste", input)?;
    if p.sabotaged(Sabotage::StarTerm) {
        composite.witness = second.witness.compose(&cone_map(&first.a));
    }
    Ok(composite)
}

/// `W iota = g a - b f`, computed without the pasting formula.
pub(super) fn witness_holds<R: Sample>(s: &HSquare<R>) -> bool {
    s.witness.is_chain_map() && s.witness.compose(&iota(s.f.source())) == s.g.compose(&s.a).sub(&s.b.compose(&s.f))
}

fn star_contract<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let rank = p.max_dim.min(3);
    let f = random_arrow(p.ring, rng, rank, p.max_val);
    let first = random_square_from(rng, &f, rank, p.max_val);
    let second = random_square_from(rng, &first.g, rank, p.max_val);
    let input = || json!({ "first": square_json(&first), "second": square_json(&second) });
    ensure(witness_holds(&first) && witness_holds(&second), "generated squares commute up to their witnesses", input)?;
    let composite = paste(p, &first, &second)?;
    ensure(witness_holds(&composite), "pasted witness satisfies W iota = g'' a'a - b'b f", input)?;

    // Strict square on the right: the witness collapses to b' H.
    let w = random_complex(p.ring, rng, 0, 3, rank, p.max_val);
    let b = random_chain_map(rng, first.g.target(), &w, p.max_val);
    let strict = HSquare::strict(first.g.clone(), b.compose(&first.g), ChainMap::identity(first.g.source()), b.clone())
        .or_fail("strict square", input)?;
    let right = paste(p, &first, &strict)?;
    ensure(right.witness == b.compose(&first.witness), "strict second square gives b' H", input)?;

    // Strict square on the left: the witness collapses to H' C(a).
    let b0 = random_chain_map(rng, f.target(), first.g.target(), p.max_val);
    let left_strict = HSquare::strict(f.clone(), b0.compose(&f), ChainMap::identity(f.source()), b0.clone())
        .or_fail("strict square", input)?;
    let after = random_square_from(rng, &left_strict.g, rank, p.max_val);
    let left = paste(p, &left_strict, &after)?;
    ensure(
        left.witness == after.witness.compose(&cone_map(&left_strict.a)),
        "strict first square gives H' C(a)",
        input,
    )
}
