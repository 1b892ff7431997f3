use std::sync::Arc;

use serde_json::{json, Value};

use crate::algebra::Ring;
use crate::chain::{cone, cone_of_sum_split, iota, is_quasi_iso, r_map, ChainComplex, ChainMap, HSquare};

use super::{FiniteCat, Functor, HNat, HNatError, StrictNat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: Option<String>,
}

/// Outcome of [`epsilon_p_instance`], one entry per identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquaresReport {
    pub checks: Vec<SquareCheck>,
}

impl SquaresReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
            .collect();
        json!({ "checks": checks })
    }
}

fn outcome<T>(name: &'static str, result: Result<T, HNatError>) -> (SquareCheck, Option<T>) {
    match result {
        Ok(value) => (SquareCheck { name, passed: true, detail: None }, Some(value)),
        Err(e) => (SquareCheck { name, passed: false, detail: Some(e.to_string()) }, None),
    }
}

fn check(name: &'static str, passed: bool) -> SquareCheck {
    SquareCheck { name, passed, detail: None }
}

/// Restricts the functors `s, t, Y` and the transformations `ε, p, j₁, j₂`
/// to the path of objects `[f_0] → [f_1] → …` given by composable squares,
/// and checks coherence, naturality and `p j₁ = ε`, `p j₂ = id`.
pub fn epsilon_p_instance<R: Ring>(squares: &[HSquare<R>]) -> Result<SquaresReport, HNatError> {
    let Some(first) = squares.first() else {
        return Err(HNatError::ShapeMismatch("at least one square expected".into()));
    };
    for s in squares {
        s.validate()?;
    }
    for pair in squares.windows(2) {
        if pair[1].f != pair[0].g {
            return Err(HNatError::ShapeMismatch("squares are not composable".into()));
        }
    }
    let cat = Arc::new(FiniteCat::path(squares.len()));
    let mut objects: Vec<ChainMap<R>> = vec![first.f.clone()];
    objects.extend(squares.iter().map(|s| s.g.clone()));

    let mut arrow_squares = Vec::with_capacity(cat.arrow_count());
    for a in 0..cat.arrow_count() {
        let path = cat.factorization(a).expect("free");
        let square = match path.split_first() {
            None => HSquare::identity(&objects[a]),
            Some((&g, rest)) => {
                let n = cat.object_count();
                rest.iter().try_fold(squares[g - n].clone(), |acc, &next| acc.then(&squares[next - n]))?
            }
        };
        arrow_squares.push(square);
    }

    let sources: Vec<ChainComplex<R>> = objects.iter().map(|f| f.source().clone()).collect();
    let targets: Vec<ChainComplex<R>> = objects.iter().map(|f| f.target().clone()).collect();
    let s = Functor::new(cat.clone(), sources.clone(), arrow_squares.iter().map(|q| q.a.clone()).collect())?;
    let t = Functor::new(cat.clone(), targets.clone(), arrow_squares.iter().map(|q| q.b.clone()).collect())?;

    let mut checks = Vec::new();

    let (c, cylinder) = outcome("Y functorial", {
        let objs = (0..objects.len()).map(|i| targets[i].direct_sum(&cone(&sources[i]))).collect();
        let maps = arrow_squares
            .iter()
            .map(|q| {
                let corner = ChainMap::zero(q.f.target(), &cone(q.g.source()));
                ChainMap::block2(&q.b, &q.witness.neg(), &corner, &crate::chain::cone_map(&q.a)).map_err(HNatError::from)
            })
            .collect::<Result<Vec<_>, _>>();
        maps.and_then(|maps| Functor::new(cat.clone(), objs, maps))
    });
    checks.push(c);
    let Some(y) = cylinder else {
        return Ok(SquaresReport { checks });
    };

    let (c, epsilon) = outcome(
        "epsilon coherent",
        HNat::new(s.clone(), t.clone(), objects.clone(), arrow_squares.iter().map(|q| q.witness.clone()).collect()),
    );
    checks.push(c);

    let projections: Vec<_> = (0..objects.len())
        .map(|i| ChainMap::copair(&ChainMap::identity(&targets[i]), &ChainMap::zero(&cone(&sources[i]), &targets[i])))
        .collect::<Result<_, _>>()?;
    let p_witnesses = (0..cat.arrow_count())
        .map(|a| {
            let arrow = cat.arrow(a);
            let (x, y_src) = (&sources[arrow.source], &targets[arrow.source]);
            let target = &targets[arrow.target];
            let h = &arrow_squares[a].witness;
            let map = ChainMap::copair(&ChainMap::zero(&cone(y_src), target), &h.compose(&r_map(x)).neg())?;
            Ok(map.compose(&cone_of_sum_split(y_src, &cone(x))))
        })
        .collect::<Result<Vec<_>, HNatError>>()?;
    let (c, p) = outcome("p coherent", HNat::new(y.clone(), t.clone(), projections, p_witnesses));
    checks.push(c);

    let j1 = (0..objects.len())
        .map(|i| ChainMap::pair(&objects[i], &iota(&sources[i]).neg()))
        .collect::<Result<Vec<_>, _>>()?;
    let (c, j1) = outcome("j1 natural", StrictNat::new(s.clone(), y.clone(), j1));
    checks.push(c);
    let j2 = (0..objects.len())
        .map(|i| ChainMap::pair(&ChainMap::identity(&targets[i]), &ChainMap::zero(&targets[i], &cone(&sources[i]))))
        .collect::<Result<Vec<_>, _>>()?;
    let (c, j2) = outcome("j2 natural", StrictNat::new(t.clone(), y.clone(), j2));
    checks.push(c);

    if let (Some(p), Some(j1), Some(epsilon)) = (&p, &j1, &epsilon) {
        let composite = p.precompose(j1);
        checks.push(check("p j1 = epsilon", composite.as_ref() == Ok(epsilon)));
    }
    if let (Some(p), Some(j2)) = (&p, &j2) {
        let identity = HNat::from_strict(&StrictNat::identity(&t));
        checks.push(check("p j2 = id", p.precompose(j2).as_ref() == Ok(&identity)));
        let equivalences = (0..objects.len()).all(|i| is_quasi_iso(p.object(i)) && is_quasi_iso(j2.component(i)));
        checks.push(check("p and j2 quasi-isomorphisms", equivalences));
    }
    Ok(SquaresReport { checks })
}
