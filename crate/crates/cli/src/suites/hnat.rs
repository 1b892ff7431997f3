use std::sync::Arc;

use gersten_core::chain::{cone, cone_map, is_quasi_iso, ChainHomotopy, ChainMap, HSquare};
use gersten_core::hnat::{epsilon_p_instance, simplicial_levels_check, FiniteCat, HNat, HNatError, SimplicialHNat};
use gersten_core::random::{boundary_of, random_arrow, random_coherent_hnat, random_degree_one, random_square_from, Sample};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::chain::{paste, square_json, witness_holds};
use super::{ensure, Check, OrFail, Outcome, Params};

pub(super) fn checks<R: Sample>() -> Vec<Check<R>> {
    vec![
        Check { anchor: "hnat/cylinder-coherent", run: cylinder_coherent },
        Check { anchor: "hnat/cylinder-negative-control", run: cylinder_negative_control },
        Check { anchor: "hnat/epsilon-p-triangles", run: epsilon_p_triangles },
        Check { anchor: "hnat/star-associative", run: star_associative },
        Check { anchor: "hnat/simplicial-levels", run: simplicial_levels },
    ]
}

/// Free categories on paths of length 1 to 3, a fork and a triangle.
fn free_quiver(rng: &mut ChaCha8Rng, need_composite: bool) -> Arc<FiniteCat> {
    let shapes: &[(usize, &[(usize, usize)])] = &[
        (2, &[(0, 1)]),
        (3, &[(0, 1), (1, 2)]),
        (4, &[(0, 1), (1, 2), (2, 3)]),
        (3, &[(0, 1), (0, 2)]),
        (3, &[(0, 1), (1, 2), (0, 2)]),
    ];
    let usable: Vec<_> = shapes.iter().filter(|(_, gens)| !need_composite || gens.len() >= 2 && gens[1].0 == 1).collect();
    let (objects, gens) = usable[rng.gen_range(0..usable.len())];
    Arc::new(FiniteCat::free(*objects, gens).expect("acyclic quiver"))
}

fn rank_bound<R>(p: &Params<R>) -> usize {
    p.max_dim.min(3)
}

fn cylinder_coherent<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let cat = free_quiver(rng, false);
    let theta = random_coherent_hnat(p.ring, rng, cat.clone(), rank_bound(p), p.max_val);
    let input = || json!({ "category": cat.to_json(), "theta": theta.to_json() });
    theta.validate().or_fail("generated theta is coherent", input)?;
    let cyl = theta.cylinder().or_fail("Y(theta) is a functor", input)?;
    cyl.functor.check_functorial().or_fail("Y(theta) functorial", input)?;
    let (f, g, y) = (theta.source(), theta.target(), &cyl.functor);
    for a in 0..cat.arrow_count() {
        let arrow = cat.arrow(a);
        let (i, j) = (arrow.source, arrow.target);
        let j1 = y.arrow(a).compose(cyl.from_source.component(i)) == cyl.from_source.component(j).compose(f.arrow(a));
        let j2 = y.arrow(a).compose(cyl.from_target.component(i)) == cyl.from_target.component(j).compose(g.arrow(a));
        ensure(j1, "J1 naturality square", input)?;
        ensure(j2, "J2 naturality square", input)?;
    }
    for i in 0..cat.object_count() {
        let target = g.object(i);
        let proj = ChainMap::copair(&ChainMap::identity(target), &ChainMap::zero(&cone(f.object(i)), target))
            .or_fail("projection", input)?;
        let j2 = cyl.from_target.component(i);
        ensure(proj.compose(j2) == ChainMap::identity(target), "p j2 = id", input)?;
        ensure(is_quasi_iso(&proj) && is_quasi_iso(j2), "p and j2 are quasi-isomorphisms", input)?;
    }
    Ok(())
}

fn cylinder_negative_control<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    // Retry until the chosen complexes leave room for a non-zero witness.
    for _ in 0..32 {
        let cat = free_quiver(rng, true);
        let theta = random_coherent_hnat(p.ring, rng, cat.clone(), rank_bound(p), p.max_val);
        let Some(ba) = (0..cat.arrow_count()).find(|&a| cat.factorization(a).is_some_and(|path| path.len() >= 2)) else {
            continue;
        };
        let arrow = cat.arrow(ba);
        let (x, y) = (theta.source().object(arrow.source), theta.target().object(arrow.target));
        let h = random_degree_one(rng, x, y, p.max_val);
        if h.iter().all(|(_, m)| m.is_zero()) {
            continue;
        }
        let stray = ChainHomotopy::new(boundary_of(x, y, &h), ChainMap::zero(x, y), h).expect("d h + h d").to_c_homotopy();
        let mut arrows: Vec<_> = (0..cat.arrow_count()).map(|a| theta.arrow(a).clone()).collect();
        arrows[ba] = arrows[ba].add(stray.map());
        let objects = (0..cat.object_count()).map(|i| theta.object(i).clone()).collect();
        let broken = HNat::new_unchecked(theta.source().clone(), theta.target().clone(), objects, arrows)
            .or_fail("broken theta has the right shapes", || json!({ "theta": theta.to_json() }))?;
        let input = || json!({ "category": cat.to_json(), "theta": broken.to_json() });
        ensure(broken.validate().is_err(), "incoherent theta is rejected", input)?;
        return ensure(
            matches!(broken.cylinder(), Err(HNatError::NotFunctorial(_))),
            "Y of an incoherent theta is not functorial",
            input,
        );
    }
    Err(json!({ "violated": "could not place a non-zero stray witness" }))
}

fn epsilon_p_triangles<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let rank = rank_bound(p).min(2);
    let f = random_arrow(p.ring, rng, rank, p.max_val);
    let length = rng.gen_range(1..=2);
    let mut squares: Vec<HSquare<R>> = Vec::new();
    for _ in 0..length {
        let from = squares.last().map_or(&f, |s| &s.g).clone();
        squares.push(random_square_from(rng, &from, rank, p.max_val));
    }
    let input = || json!({ "squares": squares.iter().map(square_json).collect::<Vec<_>>() });
    let report = epsilon_p_instance(&squares).or_fail("instance builds", input)?;
    let input = || json!({ "squares": squares.iter().map(square_json).collect::<Vec<_>>(), "report": report.to_json() });
    ensure(report.all_passed(), "epsilon/p identities", input)
}

fn star_associative<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let rank = rank_bound(p).min(2);
    let f = random_arrow(p.ring, rng, rank, p.max_val);
    let s1 = random_square_from(rng, &f, rank, p.max_val);
    let s2 = random_square_from(rng, &s1.g, rank, p.max_val);
    let s3 = random_square_from(rng, &s2.g, rank, p.max_val);
    let input = || json!({ "squares": [square_json(&s1), square_json(&s2), square_json(&s3)] });
    let left = paste(p, &paste(p, &s1, &s2)?, &s3)?;
    let right = paste(p, &s1, &paste(p, &s2, &s3)?)?;
    // Expanded: b3 b2 H1 + b3 H2 C(a1) + H3 C(a2 a1).
    let expanded = s3
        .b
        .compose(&s2.b)
        .compose(&s1.witness)
        .add(&s3.b.compose(&s2.witness).compose(&cone_map(&s1.a)))
        .add(&s3.witness.compose(&cone_map(&s2.a.compose(&s1.a))));
    ensure(left.witness == expanded, "(S3 S2) S1 matches the expansion", input)?;
    ensure(right.witness == expanded, "S3 (S2 S1) matches the expansion", input)?;
    ensure(witness_holds(&left), "pasted witness closes the outer square", input)
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Monotone maps `[n] → [m]`: `C(n + m + 1, n + 1)`.
fn monotone_count(n: usize, m: usize) -> usize {
    binomial(n + m + 1, n + 1)
}

fn simplicial_levels<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let length = rng.gen_range(1..=2);
    let cat = Arc::new(FiniteCat::path(length));
    let theta = random_coherent_hnat(p.ring, rng, cat.clone(), 2, p.max_val);
    let input = || json!({ "theta": theta.to_json(), "level": p.level });
    let top = p.level;
    let maps: usize = (0..=top).flat_map(|n| (0..=top).map(move |m| monotone_count(n, m))).sum();
    let pairs: usize = (0..=top)
        .flat_map(|n| (0..=top).flat_map(move |m| (0..=top).map(move |l| monotone_count(n, m) * monotone_count(m, l))))
        .sum();
    for (name, data) in [
        ("constant", Ok(SimplicialHNat::constant(&theta, top))),
        ("copies", SimplicialHNat::from_copies(&theta, top)),
    ] {
        let data = data.or_fail("levels build", input)?;
        let report = simplicial_levels_check(&data).or_fail(name, input)?;
        ensure(report.maps_checked == maps && report.pairs_checked == pairs, "every map and composable pair checked", input)?;
    }
    Ok(())
}
