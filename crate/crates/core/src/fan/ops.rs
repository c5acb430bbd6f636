use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_traits::Zero;

use super::complex::Fan;
use super::cone::Cone;
use super::{facets_of, gcd_i64, pair, FanError};
use crate::lattice::{cokernel, ints, to_i64, IntMatrix};

/// Star subdivision of `f` at the cone `c`. The new ray is appended after the
/// existing ones.
pub fn star_subdivision(f: &Fan, c: &Cone) -> Result<Fan, FanError> {
    let s = f.index_of(c).ok_or(FanError::ConeNotInFan)?;
    let v = c.star_vector()?;
    if s.len() == 1 {
        return Ok(f.clone());
    }
    let n = f.ambient_rank();
    let new = f.n_rays();
    let mut rays = f.rays().to_vec();
    rays.push(v);
    let contains_s = |m: &[usize]| s.iter().all(|i| m.contains(i));
    let mut max = Vec::new();
    for m in f.maximal_cones() {
        if !contains_s(m) {
            max.push(m.clone());
            continue;
        }
        for facet in facets_of(n, f.rays(), m) {
            if !contains_s(&facet.face) {
                let mut cone = facet.face;
                cone.push(new);
                max.push(cone);
            }
        }
    }
    Fan::new(n, rays, max)
}

/// Minimal ray sets not contained in a single cone, each sorted, in
/// lexicographic order.
pub fn primitive_collections(f: &Fan) -> Vec<Vec<usize>> {
    let n = f.n_rays();
    let mut out = Vec::new();
    // sets of the current size that lie in some cone
    let mut level: BTreeSet<Vec<usize>> = BTreeSet::new();
    level.insert(Vec::new());
    while !level.is_empty() {
        let mut next = BTreeSet::new();
        for base in &level {
            let start = base.last().map_or(0, |&x| x + 1);
            for j in start..n {
                let mut cand = base.clone();
                cand.push(j);
                let subsets_ok = (0..cand.len()).all(|k| {
                    let mut sub = cand.clone();
                    sub.remove(k);
                    level.contains(&sub)
                });
                if !subsets_ok {
                    continue;
                }
                if f.in_common_cone(&cand) {
                    next.insert(cand);
                } else {
                    out.push(cand);
                }
            }
        }
        level = next;
    }
    out.sort();
    out
}

/// True iff every cone of `f2` lies in a cone of `f1` and the supports agree.
///
/// Support equality is checked cone by cone: the top-dimensional cones of
/// `f2` inside a maximal cone `σ` of `f1` must cover `σ`, which for a fan means
/// every interior codimension-one face is shared by exactly two of them.
pub fn is_refinement(f2: &Fan, f1: &Fan) -> bool {
    if f2.ambient_rank() != f1.ambient_rank() {
        return false;
    }
    let big = f1.maximal_cone_objects();
    let inside_some = f2
        .maximal_cone_objects()
        .iter()
        .all(|c| big.iter().any(|b| b.contains_cone(c)));
    if !inside_some {
        return false;
    }
    let n = f2.ambient_rank();
    for b in &big {
        let d = b.dim();
        if d == 0 {
            continue;
        }
        let (_, normals) = b.h_rep();
        let pieces: Vec<Vec<usize>> = f2
            .cones_of_dim(d)
            .into_iter()
            .filter(|c| b.contains_cone(&f2.cone(c)))
            .collect();
        if pieces.is_empty() {
            return false;
        }
        let mut walls: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for p in &pieces {
            for facet in facets_of(n, f2.rays(), p) {
                *walls.entry(facet.face).or_default() += 1;
            }
        }
        for (wall, count) in walls {
            let on_boundary = normals
                .iter()
                .any(|u| wall.iter().all(|&i| pair(u, &f2.rays()[i]).is_zero()));
            if !on_boundary && count != 2 {
                return false;
            }
        }
    }
    true
}

/// Minimal cones of `f2` whose relative interior meets the relative interior
/// of `c ∈ f1`.
pub fn preimage_orbit_closure(f2: &Fan, f1: &Fan, c: &Cone) -> Result<Vec<Cone>, FanError> {
    f1.index_of(c).ok_or(FanError::ConeNotInFan)?;
    if !is_refinement(f2, f1) {
        return Err(FanError::NotARefinement);
    }
    // relint of a cone of a refinement lies in the relint of exactly one cone
    // of f1, so testing one interior point decides.
    let hits: Vec<Vec<usize>> = f2
        .cones()
        .iter()
        .filter(|t| {
            let x: Vec<i64> = (0..f2.ambient_rank())
                .map(|j| t.iter().map(|&i| f2.rays()[i][j]).sum())
                .collect();
            c.contains_in_relint(&x)
        })
        .cloned()
        .collect();
    let minimal = hits
        .iter()
        .filter(|t| {
            !hits
                .iter()
                .any(|s| s != *t && s.iter().all(|i| t.contains(i)))
        })
        .map(|t| f2.cone(t))
        .collect();
    Ok(minimal)
}

/// The fan of the orbit closure of a ray, in the quotient lattice `N/ℤu`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarQuotient {
    pub fan: Fan,
    /// `(n-1) × n` matrix of the projection `N → N/ℤu` in the chosen basis.
    pub projection: IntMatrix,
    /// For each ray of the original fan, its index in the quotient fan.
    pub correspondence: Vec<Option<usize>>,
    /// Index of the projected ray generator in the image of the original one.
    pub multiplicities: Vec<Option<i64>>,
}

pub fn star_quotient_fan(f: &Fan, ray: usize) -> Result<StarQuotient, FanError> {
    if ray >= f.n_rays() {
        return Err(FanError::NotARay(ray));
    }
    let n = f.ambient_rank();
    let u = IntMatrix::from_columns(n, &[f.rays()[ray].clone()]);
    let q = cokernel(&u);
    debug_assert!(q.is_torsion_free() && q.free_rank == n - 1);
    let projection = q.projection.clone();

    let star: Vec<&Vec<usize>> = f
        .maximal_cones()
        .iter()
        .filter(|m| m.contains(&ray))
        .collect();
    let neighbours: BTreeSet<usize> = star
        .iter()
        .flat_map(|m| m.iter().copied())
        .filter(|&i| i != ray)
        .collect();

    let mut correspondence = vec![None; f.n_rays()];
    let mut multiplicities = vec![None; f.n_rays()];
    let mut rays = Vec::new();
    for &i in &neighbours {
        let img: Vec<i64> = projection
            .mul_vec(&ints(&f.rays()[i]))
            .iter()
            .map(to_i64)
            .collect();
        let g = gcd_i64(&img);
        correspondence[i] = Some(rays.len());
        multiplicities[i] = Some(g);
        rays.push(img.iter().map(|x| x / g).collect::<Vec<i64>>());
    }
    let cones = star
        .iter()
        .map(|m| {
            m.iter()
                .filter(|&&i| i != ray)
                .map(|&i| correspondence[i].expect("neighbour"))
                .collect_vec()
        })
        .collect();
    let fan = Fan::new(n - 1, rays, cones)?;
    Ok(StarQuotient {
        fan,
        projection,
        correspondence,
        multiplicities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{make_cone, validate_fan};

    fn sigma() -> Cone {
        make_cone(
            3,
            &[vec![1, 0, 1], vec![0, -1, 1], vec![-1, 0, 1], vec![0, 1, 1]],
        )
        .unwrap()
    }

    fn sigma_fan() -> Fan {
        Fan::new(
            3,
            vec![vec![1, 0, 1], vec![0, -1, 1], vec![-1, 0, 1], vec![0, 1, 1]],
            vec![vec![0, 1, 2, 3]],
        )
        .unwrap()
    }

    fn plane() -> Fan {
        Fan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1]]).unwrap()
    }

    #[test]
    fn subdivide_square_cone() {
        let f = sigma_fan();
        let s = star_subdivision(&f, &sigma()).unwrap();
        assert_eq!(s.n_rays(), 5);
        assert_eq!(s.rays()[4], vec![0, 0, 1]);
        assert_eq!(s.maximal_cones().len(), 4);
        assert!(s.maximal_cones().contains(&vec![0, 1, 4]));
        assert!(validate_fan(&s).is_ok());
        assert!(is_refinement(&s, &f));
        assert!(!is_refinement(&f, &s));
        assert!(is_refinement(&f, &f));
    }

    #[test]
    fn blowup_of_plane() {
        let c = make_cone(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        let b = star_subdivision(&plane(), &c).unwrap();
        assert_eq!(b.rays()[2], vec![1, 1]);
        assert_eq!(b.maximal_cones(), &[vec![0, 2], vec![1, 2]]);
        let r = make_cone(2, &[vec![1, 0]]).unwrap();
        assert_eq!(star_subdivision(&plane(), &r).unwrap(), plane());
        let other = make_cone(2, &[vec![1, 2]]).unwrap();
        assert_eq!(
            star_subdivision(&plane(), &other),
            Err(FanError::ConeNotInFan)
        );
    }

    #[test]
    fn collections() {
        let s = star_subdivision(&sigma_fan(), &sigma()).unwrap();
        assert_eq!(primitive_collections(&s), vec![vec![0, 2], vec![1, 3]]);
        assert!(primitive_collections(&sigma_fan()).is_empty());
        let p1 = Fan::new(1, vec![vec![1], vec![-1]], vec![vec![0], vec![1]]).unwrap();
        assert_eq!(primitive_collections(&p1), vec![vec![0, 1]]);
    }

    #[test]
    fn partial_cover_is_not_refinement() {
        let half = Fan::new(2, vec![vec![1, 0], vec![1, 1]], vec![vec![0, 1]]).unwrap();
        assert!(!is_refinement(&half, &plane()));
    }

    #[test]
    fn preimages() {
        let f = sigma_fan();
        let s = star_subdivision(&f, &sigma()).unwrap();
        let p = preimage_orbit_closure(&s, &f, &sigma()).unwrap();
        assert_eq!(p, vec![make_cone(3, &[vec![0, 0, 1]]).unwrap()]);
        let common = make_cone(3, &[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        assert_eq!(
            preimage_orbit_closure(&s, &f, &common).unwrap(),
            vec![common]
        );

        let c = make_cone(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        let b = star_subdivision(&plane(), &c).unwrap();
        let p = preimage_orbit_closure(&b, &plane(), &c).unwrap();
        assert_eq!(p, vec![make_cone(2, &[vec![1, 1]]).unwrap()]);
        assert_eq!(
            preimage_orbit_closure(&plane(), &b, &c),
            Err(FanError::ConeNotInFan)
        );
    }

    #[test]
    fn quotient_fans() {
        let s = star_subdivision(&sigma_fan(), &sigma()).unwrap();
        let q = star_quotient_fan(&s, 4).unwrap();
        assert_eq!(
            q.fan.rays(),
            &[vec![1, 0], vec![0, -1], vec![-1, 0], vec![0, 1]]
        );
        assert_eq!(q.fan.maximal_cones().len(), 4);
        assert_eq!(
            q.correspondence,
            vec![Some(0), Some(1), Some(2), Some(3), None]
        );
        assert!(q.multiplicities.iter().flatten().all(|&m| m == 1));

        let c = make_cone(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        let b = star_subdivision(&plane(), &c).unwrap();
        let q = star_quotient_fan(&b, 2).unwrap();
        let mut rays = q.fan.rays().to_vec();
        rays.sort();
        assert_eq!(rays, vec![vec![-1], vec![1]]);
        assert_eq!(q.fan.maximal_cones().len(), 2);

        let iso = Fan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0], vec![1]]).unwrap();
        let q = star_quotient_fan(&iso, 0).unwrap();
        assert_eq!(q.fan, Fan::zero(1));
        assert_eq!(star_quotient_fan(&iso, 5), Err(FanError::NotARay(5)));
    }
}
