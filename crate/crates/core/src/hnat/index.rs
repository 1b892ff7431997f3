use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Value};

use super::HNatError;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
    pub label: String,
}

/// A finite category given by its full composition table.
///
/// Arrow `i` for `i < object_count()` is the identity of object `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCat {
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    table: BTreeMap<(usize, usize), usize>,
    /// Generator factorisation of every arrow, first generator first, when free.
    paths: Option<Vec<Vec<usize>>>,
}

fn invalid(what: impl Into<String>) -> HNatError {
    HNatError::InvalidCategory(what.into())
}

impl FiniteCat {
    /// `arrows` are the non-identity arrows, numbered from `objects.len()`;
    /// `table` lists `(b, a, b∘a)` for every composable pair of them.
    pub fn new(
        objects: Vec<String>,
        arrows: Vec<(usize, usize, String)>,
        table: &[(usize, usize, usize)],
    ) -> Result<Self, HNatError> {
        let n = objects.len();
        let mut all: Vec<Arrow> = objects
            .iter()
            .enumerate()
            .map(|(i, o)| Arrow { source: i, target: i, label: format!("id_{o}") })
            .collect();
        for (source, target, label) in arrows {
            if source >= n || target >= n {
                return Err(invalid(format!("arrow {label} has an unknown endpoint")));
            }
            all.push(Arrow { source, target, label });
        }
        let mut map = BTreeMap::new();
        for &(b, a, c) in table {
            if b.max(a).max(c) >= all.len() || a < n || b < n {
                return Err(invalid(format!("table entry ({b}, {a}, {c}) is out of range")));
            }
            let typed = all[a].target == all[b].source
                && all[c].source == all[a].source
                && all[c].target == all[b].target;
            if !typed {
                return Err(invalid(format!("{} ∘ {} has the wrong type", all[b].label, all[a].label)));
            }
            if map.insert((b, a), c).is_some() {
                return Err(invalid(format!("{} ∘ {} is listed twice", all[b].label, all[a].label)));
            }
        }
        Self::from_parts(objects, all, map, None)
    }

    fn from_parts(
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        mut table: BTreeMap<(usize, usize), usize>,
        paths: Option<Vec<Vec<usize>>>,
    ) -> Result<Self, HNatError> {
        for (a, arrow) in arrows.iter().enumerate() {
            table.insert((arrow.target, a), a);
            table.insert((a, arrow.source), a);
        }
        for (a, first) in arrows.iter().enumerate() {
            for (b, second) in arrows.iter().enumerate() {
                if first.target == second.source && !table.contains_key(&(b, a)) {
                    return Err(invalid(format!("{} ∘ {} is missing", second.label, first.label)));
                }
            }
        }
        let cat = FiniteCat { objects, arrows, table, paths };
        cat.check_associative()?;
        Ok(cat)
    }

    fn check_associative(&self) -> Result<(), HNatError> {
        for (&(b, a), &ba) in &self.table {
            for c in 0..self.arrows.len() {
                let Some(&cb) = self.table.get(&(c, b)) else { continue };
                if self.table[&(c, ba)] != self.table[&(cb, a)] {
                    return Err(invalid(format!("composition is not associative at {c}, {b}, {a}")));
                }
            }
        }
        Ok(())
    }

    /// The free category on an acyclic quiver; arrows are the paths.
    /// Generator `k` becomes arrow `objects + k`.
    pub fn free(objects: usize, generators: &[(usize, usize)]) -> Result<Self, HNatError> {
        if generators.iter().any(|&(s, t)| s >= objects || t >= objects) {
            return Err(invalid("generator with an unknown endpoint"));
        }
        let names: Vec<String> = (0..objects).map(|i| i.to_string()).collect();
        let mut arrows: Vec<Arrow> = (0..objects)
            .map(|i| Arrow { source: i, target: i, label: format!("id_{i}") })
            .collect();
        let mut paths: Vec<Vec<usize>> = vec![Vec::new(); objects];
        let mut frontier: Vec<Vec<usize>> = (0..generators.len()).map(|k| vec![k]).collect();
        while !frontier.is_empty() {
            if frontier[0].len() > objects {
                return Err(invalid("quiver has a cycle"));
            }
            let mut next = Vec::new();
            for path in frontier {
                let end = generators[*path.last().expect("non-empty path")].1;
                let label = path.iter().rev().map(|k| format!("a{k}")).collect::<Vec<_>>().join("∘");
                arrows.push(Arrow { source: generators[path[0]].0, target: end, label });
                for (k, &(s, _)) in generators.iter().enumerate() {
                    if s == end {
                        let mut longer = path.clone();
                        longer.push(k);
                        next.push(longer);
                    }
                }
                paths.push(path);
            }
            frontier = next;
        }
        let index: HashMap<&[usize], usize> = paths.iter().enumerate().skip(objects).map(|(a, p)| (p.as_slice(), a)).collect();
        let mut table = BTreeMap::new();
        for a in objects..arrows.len() {
            for b in objects..arrows.len() {
                if arrows[a].target == arrows[b].source {
                    let joined: Vec<usize> = paths[a].iter().chain(&paths[b]).copied().collect();
                    table.insert((b, a), index[joined.as_slice()]);
                }
            }
        }
        let generator_arrows = paths.iter().map(|p| p.iter().map(|k| objects + k).collect()).collect();
        Self::from_parts(names, arrows, table, Some(generator_arrows))
    }

    /// `0 → 1 → … → length`.
    pub fn path(length: usize) -> Self {
        let generators: Vec<_> = (0..length).map(|i| (i, i + 1)).collect();
        Self::free(length + 1, &generators).expect("a path has no cycles")
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrow(&self, a: usize) -> &Arrow {
        &self.arrows[a]
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn identity(&self, object: usize) -> usize {
        object
    }

    pub fn is_identity(&self, a: usize) -> bool {
        a < self.objects.len()
    }

    /// `b ∘ a` when `a` ends where `b` starts.
    pub fn compose(&self, b: usize, a: usize) -> Option<usize> {
        self.table.get(&(b, a)).copied()
    }

    /// All `(b, a)` with `b ∘ a` defined.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.table.keys().copied()
    }

    pub fn is_free(&self) -> bool {
        self.paths.is_some()
    }

    /// Generating arrows of a free category.
    pub fn generators(&self) -> Vec<usize> {
        match &self.paths {
            Some(paths) => (0..self.arrows.len()).filter(|&a| paths[a].len() == 1).collect(),
            None => Vec::new(),
        }
    }

    /// The generators whose composite is `a`, first one first.
    pub fn factorization(&self, a: usize) -> Option<&[usize]> {
        self.paths.as_ref().map(|p| p[a].as_slice())
    }

    pub fn to_json(&self) -> Value {
        let n = self.objects.len();
        let arrows: Vec<Value> = self.arrows[n..]
            .iter()
            .map(|a| json!({ "source": a.source, "target": a.target, "label": a.label }))
            .collect();
        let compose: Vec<Value> = self
            .table
            .iter()
            .filter(|(&(b, a), _)| b >= n && a >= n)
            .map(|(&(b, a), &c)| json!([b, a, c]))
            .collect();
        json!({ "objects": self.objects, "arrows": arrows, "compose": compose })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paths() {
        let p = FiniteCat::path(3);
        assert_eq!(p.object_count(), 4);
        // 4 identities, 3 + 2 + 1 paths.
        assert_eq!(p.arrow_count(), 10);
        assert_eq!(p.generators(), vec![4, 5, 6]);
        let ba = p.compose(5, 4).unwrap();
        assert_eq!(p.arrow(ba).label, "a1∘a0");
        assert_eq!(p.factorization(ba), Some(&[4, 5][..]));
        assert_eq!(p.compose(4, 5), None);
        assert_eq!(p.compose(ba, 0), Some(ba));
    }

    #[test]
    fn single_arrow_and_cycles() {
        let one = FiniteCat::free(2, &[(0, 1)]).unwrap();
        assert_eq!(one.arrow_count(), 3);
        assert!(FiniteCat::free(1, &[(0, 0)]).is_err());
        assert!(FiniteCat::free(2, &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn idempotent_from_table() {
        let objects = vec!["x".to_string()];
        let e = FiniteCat::new(objects.clone(), vec![(0, 0, "e".into())], &[(1, 1, 1)]).unwrap();
        assert!(!e.is_free());
        assert_eq!(e.compose(1, 1), Some(1));
        assert!(FiniteCat::new(objects.clone(), vec![(0, 0, "e".into())], &[]).is_err());
        // Two arrows e, f with ef = f, fe = e, ee = e, ff = f: associative.
        let table = [(1, 1, 1), (1, 2, 1), (2, 1, 2), (2, 2, 2)];
        assert!(FiniteCat::new(objects.clone(), vec![(0, 0, "e".into()), (0, 0, "f".into())], &table).is_ok());
        // ee = ef = f, fe = ff = e: (ee)e = e but e(ee) = f.
        let broken = [(1, 1, 2), (1, 2, 2), (2, 1, 1), (2, 2, 1)];
        assert!(FiniteCat::new(objects, vec![(0, 0, "e".into()), (0, 0, "f".into())], &broken).is_err());
    }
}
