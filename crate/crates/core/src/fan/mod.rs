//! Rational polyhedral cones and fans over a lattice `N = ℤ^n`, with the
//! combinatorics needed for Cox constructions and orbit closures.
//!
//! Rays are stored as primitive `i64` vectors; every computation that could
//! grow (normals, kernels, pairings) runs on [`Int`](crate::lattice::Int).

mod complex;
mod cone;
mod ops;
mod orbit;

pub use complex::{validate_fan, Fan, FanJson, FanViolation};
pub use cone::{make_cone, Cone, ConeClass};
pub use ops::{
    is_refinement, preimage_orbit_closure, primitive_collections, star_quotient_fan,
    star_subdivision, StarQuotient,
};
pub use orbit::{orbit_relation_data, orbit_relation_matrix, OrbitRelationDatum};

use std::collections::BTreeSet;

use itertools::Itertools;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::lattice::{dot, ints, kernel_basis, rank, Int, IntMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error("vector of length {found} in a lattice of rank {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("zero vector supplied as a generator")]
    ZeroVector,
    #[error("cone is not strongly convex")]
    NotStronglyConvex,
    #[error("ray {0} is not primitive")]
    NonPrimitiveRay(usize),
    #[error("ray {0} is listed twice")]
    DuplicateRay(usize),
    #[error("ray index {0} out of range")]
    RayIndexOutOfRange(usize),
    #[error("ray {ray} is not an extreme ray of cone {cone:?}")]
    NotExtreme { cone: Vec<usize>, ray: usize },
    #[error("ray {0} lies in no cone")]
    UnusedRay(usize),
    #[error("cone is not a cone of the fan")]
    ConeNotInFan,
    #[error("index {0} is not a ray of the fan")]
    NotARay(usize),
    #[error("the zero cone has no star vector")]
    ZeroCone,
    #[error("first fan does not refine the second")]
    NotARefinement,
}

pub(crate) fn gcd_i64(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// `v / gcd(v)`; the zero vector is returned unchanged.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = gcd_i64(v);
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

pub(crate) fn rows_matrix(n: usize, vs: &[&Vec<i64>]) -> IntMatrix {
    let rows: Vec<Vec<i64>> = vs.iter().map(|v| (*v).clone()).collect();
    IntMatrix::from_rows(n, &rows)
}

pub(crate) fn rank_of(n: usize, vs: &[&Vec<i64>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    rank(&rows_matrix(n, vs))
}

pub(crate) fn pair(u: &[Int], x: &[i64]) -> Int {
    dot(u, &ints(x))
}

/// A face of the cone spanned by `rays[idx]`, together with a supporting
/// normal that is non-negative on the cone and vanishes exactly on the face.
pub(crate) struct Facet {
    pub face: Vec<usize>,
    pub normal: Vec<Int>,
}

/// Facets of `cone(rays[i] : i ∈ idx)` by brute force over `(d-1)`-subsets.
/// For a cone with a lineality space the minimal faces have no facets.
pub(crate) fn facets_of(n: usize, rays: &[Vec<i64>], idx: &[usize]) -> Vec<Facet> {
    let all: Vec<&Vec<i64>> = idx.iter().map(|&i| &rays[i]).collect();
    let d = rank_of(n, &all);
    if d == 0 {
        return Vec::new();
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for subset in idx.iter().copied().combinations(d - 1) {
        let sub: Vec<&Vec<i64>> = subset.iter().map(|&i| &rays[i]).collect();
        if rank_of(n, &sub) != d - 1 {
            continue;
        }
        let k = if sub.is_empty() {
            IntMatrix::identity(n)
        } else {
            kernel_basis(&rows_matrix(n, &sub))
        };
        for u in k.column_vecs() {
            let p: Vec<Int> = idx.iter().map(|&i| pair(&u, &rays[i])).collect();
            if p.iter().all(Zero::is_zero) {
                continue;
            }
            let pos = p.iter().any(Signed::is_positive);
            let neg = p.iter().any(Signed::is_negative);
            if pos && neg {
                break;
            }
            let face: Vec<usize> = idx
                .iter()
                .zip(&p)
                .filter(|(_, x)| x.is_zero())
                .map(|(&i, _)| i)
                .collect();
            if seen.insert(face.clone()) {
                let normal = if neg {
                    u.iter().map(|x| -x).collect()
                } else {
                    u
                };
                out.push(Facet {
                    face,
                    normal: primitive_int(&normal),
                });
            }
            break;
        }
    }
    out
}

fn primitive_int(v: &[Int]) -> Vec<Int> {
    let g = v.iter().fold(Int::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// All faces of `cone(rays[idx])` as index sets, ordered by (dimension, indices).
pub(crate) fn faces_of(n: usize, rays: &[Vec<i64>], idx: &[usize]) -> Vec<Vec<usize>> {
    let mut all = BTreeSet::new();
    let mut stack = vec![idx.to_vec()];
    while let Some(f) = stack.pop() {
        if all.insert(f.clone()) {
            stack.extend(facets_of(n, rays, &f).into_iter().map(|x| x.face));
        }
    }
    let mut out: Vec<Vec<usize>> = all.into_iter().collect();
    out.sort_by_cached_key(|f| {
        let vs: Vec<&Vec<i64>> = f.iter().map(|&i| &rays[i]).collect();
        (rank_of(n, &vs), f.clone())
    });
    out
}
