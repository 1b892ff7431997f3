use gersten_core::algebra::{rank, smith_normal_form, Dvr, Ring, Valuation};
use gersten_core::random::{random_invertible, random_matrix, Sample};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{ensure, Check, OrFail, Outcome, Params};

pub(super) fn checks<R: Sample>() -> Vec<Check<R>> {
    vec![
        Check { anchor: "algebra/valuation-laws", run: valuation_laws },
        Check { anchor: "algebra/residue-homomorphism", run: residue_homomorphism },
        Check { anchor: "algebra/smith-form", run: smith_form },
        Check { anchor: "algebra/inverse", run: inverse },
    ]
}

/// Valuation by repeated exact division by the uniformizer.
fn valuation_by_division<R: Dvr>(r: R, a: &R::Elem) -> Valuation {
    if r.is_zero(a) {
        return Valuation::Infinite;
    }
    let g = r.uniformizer();
    let mut v = 0;
    let mut rest = a.clone();
    while let Some(q) = r.divide(&rest, &g) {
        rest = q;
        v += 1;
    }
    Valuation::Finite(v)
}

fn valuation_laws<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let r = p.ring;
    let (a, b) = (r.random_element(rng, p.max_val), r.random_element(rng, p.max_val));
    let input = || json!({ "a": r.format(&a), "b": r.format(&b) });
    let (va, vb) = (r.valuation(&a), r.valuation(&b));
    ensure(va == valuation_by_division(r, &a), "valuation matches repeated division", input)?;
    let expected = match (va, vb) {
        (Valuation::Finite(x), Valuation::Finite(y)) => Valuation::Finite(x + y),
        _ => Valuation::Infinite,
    };
    ensure(r.valuation(&r.mul(&a, &b)) == expected, "v(ab) = v(a) + v(b)", input)?;
    ensure(r.valuation(&r.add(&a, &b)) >= va.min(vb), "v(a + b) >= min(v(a), v(b))", input)?;
    ensure(r.is_unit(&a) == (va == Valuation::Finite(0)), "units are exactly the valuation-zero elements", input)
}

fn residue_homomorphism<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let r = p.ring;
    let k = r.residue_field();
    let (a, b) = (r.random_element(rng, p.max_val), r.random_element(rng, p.max_val));
    let input = || json!({ "a": r.format(&a), "b": r.format(&b) });
    let (ra, rb) = (r.residue(&a), r.residue(&b));
    ensure(r.residue(&r.add(&a, &b)) == k.add(&ra, &rb), "residue is additive", input)?;
    ensure(r.residue(&r.mul(&a, &b)) == k.mul(&ra, &rb), "residue is multiplicative", input)?;
    ensure(k.is_zero(&r.residue(&r.uniformizer())), "residue(g) = 0", input)?;
    ensure(r.residue(&r.lift(&ra)) == ra, "residue(lift(x)) = x", input)?;
    let diff = r.sub(&a, &r.lift(&ra));
    ensure(r.divide(&diff, &r.uniformizer()).is_some(), "a - lift(residue(a)) is divisible by g", input)
}

fn smith_form<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let r = p.ring;
    let bound = p.max_dim + 3;
    let (rows, cols) = (rng.gen_range(0..=bound), rng.gen_range(0..=bound));
    let m = random_matrix(r, rng, rows, cols, p.max_val);
    let input = || json!({ "matrix": m.to_json() });
    let snf = smith_normal_form(&m);
    ensure(&(&snf.u * &snf.d) * &snf.v == m, "M = U D V", input)?;
    ensure((&snf.u * &snf.u_inv).is_identity() && (&snf.v * &snf.v_inv).is_identity(), "U, V invertible", input)?;
    let du = snf.u.det().or_fail("det(U)", input)?;
    let dv = snf.v.det().or_fail("det(V)", input)?;
    ensure(r.is_unit(&du) && r.is_unit(&dv), "det(U), det(V) are units", input)?;
    let exps = snf.exponents();
    ensure(exps.windows(2).all(|w| w[0] <= w[1]), "exponents non-decreasing", input)?;
    let diagonal_ok = (0..rows).all(|i| {
        (0..cols).all(|j| {
            let e = snf.d.get(i, j);
            match (i == j, exps.get(i)) {
                (true, Some(&a)) => *e == r.uniformizer_power(a),
                _ => r.is_zero(e),
            }
        })
    });
    ensure(diagonal_ok, "D is diagonal with pure powers of g", input)
}

fn inverse<R: Sample>(p: &Params<R>, rng: &mut ChaCha8Rng) -> Outcome {
    let r = p.ring;
    let n = rng.gen_range(0..=p.max_dim + 2);
    let a = if rng.gen_bool(0.5) { random_invertible(r, rng, n, p.max_val) } else { random_matrix(r, rng, n, n, p.max_val) };
    let input = || json!({ "matrix": a.to_json() });
    let det = a.det().or_fail("det", input)?;
    match a.inverse() {
        Ok(b) => {
            ensure(r.is_unit(&det), "an inverse exists only for unit determinant", input)?;
            ensure((&a * &b).is_identity() && (&b * &a).is_identity(), "A A^-1 = A^-1 A = E", input)
        }
        Err(_) => {
            ensure(!r.is_unit(&det), "unit determinant but no inverse", input)?;
            // Over the residue field the matrix is singular exactly when the rank drops.
            ensure(rank(&a.residue()) < n, "residue matrix has full rank but no inverse", input)
        }
    }
}
