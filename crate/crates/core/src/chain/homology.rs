use crate::algebra::{smith_normal_form, Ring};

use super::{mapping_cone, ChainComplex, ChainMap};

/// `H_n ≅ B^free_rank ⊕ ⨁ B/g^a` for `a` in `torsion`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyGroup {
    pub degree: i32,
    pub free_rank: usize,
    pub torsion: Vec<u32>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

/// Homology in every degree of the support, from Smith forms of the boundaries.
pub fn homology<R: Ring>(x: &ChainComplex<R>) -> Vec<HomologyGroup> {
    let Some((lo, hi)) = x.support() else {
        return Vec::new();
    };
    let snfs: Vec<_> = (lo..=hi + 1).map(|n| smith_normal_form(&x.d(n))).collect();
    (lo..=hi)
        .map(|n| {
            let out = &snfs[(n - lo) as usize];
            let incoming = &snfs[(n - lo + 1) as usize];
            HomologyGroup {
                degree: n,
                free_rank: x.rank(n) - out.rank() - incoming.rank(),
                torsion: incoming.exponents().into_iter().filter(|&a| a > 0).collect(),
            }
        })
        .collect()
}

pub fn is_acyclic<R: Ring>(x: &ChainComplex<R>) -> bool {
    homology(x).iter().all(HomologyGroup::is_zero)
}

/// A map is a quasi-isomorphism iff its mapping cone is acyclic.
pub fn is_quasi_iso<R: Ring>(f: &ChainMap<R>) -> bool {
    is_acyclic(&mapping_cone(f))
}
