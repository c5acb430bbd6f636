use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{faces_of, facets_of, gcd_i64, pair, primitive, rank_of, rows_matrix, FanError};
use crate::lattice::{cokernel, kernel_basis, rank, to_i64, Int, IntMatrix};

/// A strongly convex rational polyhedral cone, stored by its primitive
/// extreme rays in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cone {
    ambient_rank: usize,
    rays: Vec<Vec<i64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConeClass {
    Smooth,
    Simplicial,
    General,
}

pub fn make_cone(ambient_rank: usize, generators: &[Vec<i64>]) -> Result<Cone, FanError> {
    Cone::new(ambient_rank, generators)
}

impl Cone {
    pub fn new(ambient_rank: usize, generators: &[Vec<i64>]) -> Result<Cone, FanError> {
        let mut gens = BTreeSet::new();
        for g in generators {
            if g.len() != ambient_rank {
                return Err(FanError::DimensionMismatch {
                    expected: ambient_rank,
                    found: g.len(),
                });
            }
            if g.iter().all(|&x| x == 0) {
                return Err(FanError::ZeroVector);
            }
            gens.insert(primitive(g));
        }
        let gens: Vec<Vec<i64>> = gens.into_iter().collect();
        let idx: Vec<usize> = (0..gens.len()).collect();
        let faces = faces_of(ambient_rank, &gens, &idx);
        if !gens.is_empty() && !faces.contains(&Vec::new()) {
            return Err(FanError::NotStronglyConvex);
        }
        let rays = faces
            .iter()
            .filter(|f| f.len() == 1)
            .map(|f| gens[f[0]].clone())
            .sorted()
            .collect();
        Ok(Cone { ambient_rank, rays })
    }

    /// Builds a cone from rays already known to be primitive and extreme.
    pub(crate) fn from_extreme_rays(ambient_rank: usize, mut rays: Vec<Vec<i64>>) -> Cone {
        rays.sort();
        Cone { ambient_rank, rays }
    }

    pub fn zero(ambient_rank: usize) -> Cone {
        Cone {
            ambient_rank,
            rays: Vec::new(),
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn dim(&self) -> usize {
        rank_of(self.ambient_rank, &self.rays.iter().collect::<Vec<_>>())
    }

    fn all_idx(&self) -> Vec<usize> {
        (0..self.rays.len()).collect()
    }

    fn sub_cone(&self, idx: &[usize]) -> Cone {
        Cone::from_extreme_rays(
            self.ambient_rank,
            idx.iter().map(|&i| self.rays[i].clone()).collect(),
        )
    }

    /// All faces, including the zero cone and the cone itself, ordered by
    /// dimension.
    pub fn faces(&self) -> Vec<Cone> {
        faces_of(self.ambient_rank, &self.rays, &self.all_idx())
            .iter()
            .map(|f| self.sub_cone(f))
            .collect()
    }

    pub fn facets(&self) -> Vec<Cone> {
        facets_of(self.ambient_rank, &self.rays, &self.all_idx())
            .iter()
            .map(|f| self.sub_cone(&f.face))
            .collect()
    }

    pub fn is_simplicial(&self) -> bool {
        self.dim() == self.rays.len()
    }

    pub fn classify(&self) -> ConeClass {
        if !self.is_simplicial() {
            return ConeClass::General;
        }
        let m = rows_matrix(self.ambient_rank, &self.rays.iter().collect::<Vec<_>>());
        if cokernel(&m.transpose()).is_torsion_free() {
            ConeClass::Smooth
        } else {
            ConeClass::Simplicial
        }
    }

    pub fn is_smooth(&self) -> bool {
        self.classify() == ConeClass::Smooth
    }

    /// Primitive generator of the ray through the sum of the rays.
    pub fn star_vector(&self) -> Result<Vec<i64>, FanError> {
        if self.rays.is_empty() {
            return Err(FanError::ZeroCone);
        }
        let sum: Vec<i64> = (0..self.ambient_rank)
            .map(|j| self.rays.iter().map(|r| r[j]).sum())
            .collect();
        debug_assert!(gcd_i64(&sum) > 0);
        Ok(primitive(&sum))
    }

    /// Inequality description: a basis of `σ^⊥` (equalities) and the facet
    /// normals (inequalities `≥ 0`).
    pub(crate) fn h_rep(&self) -> (Vec<Vec<Int>>, Vec<Vec<Int>>) {
        let eq = if self.rays.is_empty() {
            IntMatrix::identity(self.ambient_rank)
        } else {
            kernel_basis(&rows_matrix(
                self.ambient_rank,
                &self.rays.iter().collect::<Vec<_>>(),
            ))
        };
        let ineq = facets_of(self.ambient_rank, &self.rays, &self.all_idx())
            .into_iter()
            .map(|f| f.normal)
            .collect();
        (eq.column_vecs(), ineq)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        let (eq, ineq) = self.h_rep();
        eq.iter().all(|u| pair(u, x).is_zero()) && ineq.iter().all(|u| !pair(u, x).is_negative())
    }

    pub fn contains_in_relint(&self, x: &[i64]) -> bool {
        let (eq, ineq) = self.h_rep();
        eq.iter().all(|u| pair(u, x).is_zero()) && ineq.iter().all(|u| pair(u, x).is_positive())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        let (eq, ineq) = self.h_rep();
        other.rays.iter().all(|x| {
            eq.iter().all(|u| pair(u, x).is_zero())
                && ineq.iter().all(|u| !pair(u, x).is_negative())
        })
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        other.faces().contains(self)
    }

    /// Intersection of two cones, computed from their inequality descriptions
    /// by enumerating candidate extreme rays.
    pub fn intersect(&self, other: &Cone) -> Cone {
        assert_eq!(self.ambient_rank, other.ambient_rank);
        let n = self.ambient_rank;
        let (mut eqs, mut ineqs) = self.h_rep();
        let (e2, i2) = other.h_rep();
        eqs.extend(e2);
        ineqs.extend(i2);
        let eqm = IntMatrix::from_rows(n, &eqs);
        let r = rank(&eqm);
        if r >= n {
            return Cone::zero(n);
        }
        let ineqm = IntMatrix::from_rows(n, &ineqs);
        let mut found = Vec::new();
        for s in (0..ineqs.len()).combinations(n - 1 - r) {
            let m = eqm.vstack(&ineqm.select_rows(&s));
            if rank(&m) != n - 1 {
                continue;
            }
            let x: Vec<i64> = kernel_basis(&m).column(0).iter().map(to_i64).collect();
            for sign in [1i64, -1] {
                let y: Vec<i64> = x.iter().map(|v| v * sign).collect();
                if ineqs.iter().all(|u| !pair(u, &y).is_negative()) {
                    found.push(y);
                }
            }
        }
        Cone::new(n, &found).expect("intersection of pointed cones is pointed")
    }

    /// Index of the sublattice spanned by the rays inside its saturation.
    pub fn multiplicity(&self) -> Int {
        if self.rays.is_empty() {
            return Int::one();
        }
        let m = rows_matrix(self.ambient_rank, &self.rays.iter().collect::<Vec<_>>());
        cokernel(&m.transpose()).torsion.iter().product()
    }
}
