use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::cone::Cone;
use super::{faces_of, gcd_i64, rank_of, FanError};

/// A fan given by primitive rays (indexed in input order) and maximal cones
/// as sorted ray-index sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    ambient_rank: usize,
    rays: Vec<Vec<i64>>,
    maximal: Vec<Vec<usize>>,
    // every face of every maximal cone, sorted by (dimension, indices)
    cones: Vec<Vec<usize>>,
    dims: BTreeMap<Vec<usize>, usize>,
}

/// Interchange format: `{"rank": n, "rays": [[..]], "max_cones": [[..]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanJson {
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

impl Fan {
    /// Checks rays (length, primitive, distinct), strong convexity of each
    /// listed cone and that every listed ray is extreme. Listed cones that are
    /// faces of other listed cones are dropped. The fan axioms themselves are
    /// checked by [`validate_fan`].
    pub fn new(
        ambient_rank: usize,
        rays: Vec<Vec<i64>>,
        max_cones: Vec<Vec<usize>>,
    ) -> Result<Fan, FanError> {
        let mut seen = BTreeSet::new();
        for (i, r) in rays.iter().enumerate() {
            if r.len() != ambient_rank {
                return Err(FanError::DimensionMismatch {
                    expected: ambient_rank,
                    found: r.len(),
                });
            }
            match gcd_i64(r) {
                0 => return Err(FanError::ZeroVector),
                1 => {}
                _ => return Err(FanError::NonPrimitiveRay(i)),
            }
            if !seen.insert(r.clone()) {
                return Err(FanError::DuplicateRay(i));
            }
        }

        let mut listed: BTreeSet<Vec<usize>> = BTreeSet::new();
        for c in &max_cones {
            let mut c = c.clone();
            c.sort_unstable();
            c.dedup();
            if let Some(&bad) = c.iter().find(|&&i| i >= rays.len()) {
                return Err(FanError::RayIndexOutOfRange(bad));
            }
            listed.insert(c);
        }
        if listed.is_empty() {
            listed.insert(Vec::new());
        }

        let mut face_sets: Vec<(Vec<usize>, Vec<Vec<usize>>)> = Vec::new();
        for c in &listed {
            let vs: Vec<Vec<i64>> = c.iter().map(|&i| rays[i].clone()).collect();
            let cone = Cone::new(ambient_rank, &vs)?;
            if cone.rays().len() != c.len() {
                let ray = *c
                    .iter()
                    .find(|&&i| !cone.rays().contains(&rays[i]))
                    .expect("a generator was dropped");
                return Err(FanError::NotExtreme {
                    cone: c.clone(),
                    ray,
                });
            }
            face_sets.push((c.clone(), faces_of(ambient_rank, &rays, c)));
        }

        let maximal: Vec<Vec<usize>> = face_sets
            .iter()
            .filter(|(c, _)| {
                !face_sets
                    .iter()
                    .any(|(d, faces)| d != c && faces.contains(c))
            })
            .map(|(c, _)| c.clone())
            .collect();

        let all: BTreeSet<Vec<usize>> = face_sets.into_iter().flat_map(|(_, f)| f).collect();
        let dims: BTreeMap<Vec<usize>, usize> = all
            .into_iter()
            .map(|c| {
                let vs: Vec<&Vec<i64>> = c.iter().map(|&i| &rays[i]).collect();
                let d = rank_of(ambient_rank, &vs);
                (c, d)
            })
            .collect();
        let mut cones: Vec<Vec<usize>> = dims.keys().cloned().collect();
        cones.sort_by(|a, b| (dims[a], a).cmp(&(dims[b], b)));

        let used: BTreeSet<usize> = maximal.iter().flatten().copied().collect();
        if let Some(i) = (0..rays.len()).find(|i| !used.contains(i)) {
            return Err(FanError::UnusedRay(i));
        }

        Ok(Fan {
            ambient_rank,
            rays,
            maximal,
            cones,
            dims,
        })
    }

    /// The fan of all faces of `c`, with rays in the cone's order.
    pub fn from_cone(c: &Cone) -> Fan {
        let idx: Vec<usize> = (0..c.rays().len()).collect();
        Fan::new(c.ambient_rank(), c.rays().to_vec(), vec![idx]).expect("a cone is a fan")
    }

    /// Fan generated by the given cones; rays are numbered by first occurrence.
    pub fn from_cones(ambient_rank: usize, cones: &[Cone]) -> Result<Fan, FanError> {
        let mut rays: Vec<Vec<i64>> = Vec::new();
        let mut max = Vec::new();
        for c in cones {
            let mut idx = Vec::new();
            for r in c.rays() {
                let i = match rays.iter().position(|x| x == r) {
                    Some(i) => i,
                    None => {
                        rays.push(r.clone());
                        rays.len() - 1
                    }
                };
                idx.push(i);
            }
            max.push(idx);
        }
        Fan::new(ambient_rank, rays, max)
    }

    pub fn zero(ambient_rank: usize) -> Fan {
        Fan::new(ambient_rank, Vec::new(), Vec::new()).expect("zero fan")
    }

    pub fn from_json(j: &FanJson) -> Result<Fan, FanError> {
        Fan::new(j.rank, j.rays.clone(), j.max_cones.clone())
    }

    pub fn to_json(&self) -> FanJson {
        FanJson {
            rank: self.ambient_rank,
            rays: self.rays.clone(),
            max_cones: self.maximal.clone(),
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn n_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn maximal_cones(&self) -> &[Vec<usize>] {
        &self.maximal
    }

    /// All cones as ray-index sets, ordered by dimension and then indices.
    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn cones_of_dim(&self, d: usize) -> Vec<Vec<usize>> {
        self.cones
            .iter()
            .filter(|c| self.dims[*c] == d)
            .cloned()
            .collect()
    }

    pub fn cone_dim(&self, idx: &[usize]) -> Option<usize> {
        self.dims.get(idx).copied()
    }

    pub fn is_cone(&self, idx: &[usize]) -> bool {
        self.dims.contains_key(idx)
    }

    pub fn cone(&self, idx: &[usize]) -> Cone {
        Cone::from_extreme_rays(
            self.ambient_rank,
            idx.iter().map(|&i| self.rays[i].clone()).collect(),
        )
    }

    pub fn maximal_cone_objects(&self) -> Vec<Cone> {
        self.maximal.iter().map(|c| self.cone(c)).collect()
    }

    pub fn ray_index(&self, v: &[i64]) -> Option<usize> {
        self.rays.iter().position(|r| r == v)
    }

    /// Ray-index set of `c` if it is a cone of the fan.
    pub fn index_of(&self, c: &Cone) -> Option<Vec<usize>> {
        let mut idx = c
            .rays()
            .iter()
            .map(|r| self.ray_index(r))
            .collect::<Option<Vec<usize>>>()?;
        idx.sort_unstable();
        self.is_cone(&idx).then_some(idx)
    }

    /// True iff the rays `idx` all lie in one maximal cone.
    pub fn in_common_cone(&self, idx: &[usize]) -> bool {
        self.maximal
            .iter()
            .any(|m| idx.iter().all(|i| m.binary_search(i).is_ok()))
    }

    /// Rank of the sublattice spanned by the rays.
    pub fn ray_span_rank(&self) -> usize {
        rank_of(self.ambient_rank, &self.rays.iter().collect::<Vec<_>>())
    }

    pub fn is_simplicial(&self) -> bool {
        self.maximal.iter().all(|c| self.cone(c).is_simplicial())
    }

    pub fn is_smooth(&self) -> bool {
        self.maximal.iter().all(|c| self.cone(c).is_smooth())
    }

    /// Smallest cone of the fan containing `x`, if `x` lies in the support.
    pub fn cone_containing(&self, x: &[i64]) -> Option<Vec<usize>> {
        self.cones
            .iter()
            .find(|c| self.cone(c).contains(x))
            .cloned()
    }
}

/// An offending pair of maximal cones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanViolation {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    pub intersection: Vec<Vec<i64>>,
}

impl fmt::Display for FanViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cones {:?} and {:?} meet in cone({:?}), which is not a common face",
            self.first, self.second, self.intersection
        )
    }
}

/// Checks the fan axioms. Faces of listed cones are closed by construction;
/// pairwise intersections of maximal cones are computed exactly and must be a
/// face of both (this implies the same for all smaller cones).
pub fn validate_fan(f: &Fan) -> Result<(), FanViolation> {
    let cones = f.maximal_cone_objects();
    let faces: Vec<Vec<Cone>> = cones.iter().map(Cone::faces).collect();
    for i in 0..cones.len() {
        for j in i + 1..cones.len() {
            let inter = cones[i].intersect(&cones[j]);
            if !faces[i].contains(&inter) || !faces[j].contains(&inter) {
                return Err(FanViolation {
                    first: f.maximal[i].clone(),
                    second: f.maximal[j].clone(),
                    intersection: inter.rays().to_vec(),
                });
            }
        }
    }
    Ok(())
}
