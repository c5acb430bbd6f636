use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::{to_i64, Int, IntMatrix};
use super::normal_form::{hnf, kernel_basis, snf, unimodular_inverse};

/// A finitely generated abelian group `ℤ^a / R` in normal form
/// `ℤ/d_1 ⊕ … ⊕ ℤ/d_t ⊕ ℤ^free_rank`.
///
/// Coordinates are ordered torsion first, then free. `projection` maps the
/// ambient `ℤ^a` onto these coordinates (torsion rows reduced into
/// `[0, d_i)`), and the columns of `section` are ambient lifts of the
/// coordinate generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<Int>,
    pub projection: IntMatrix,
    pub section: IntMatrix,
}

impl AbelianGroup {
    pub fn ambient_rank(&self) -> usize {
        self.projection.cols()
    }

    /// Total number of normal-form coordinates.
    pub fn n_coords(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.n_coords() == 0
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Order of the coordinate `i`, zero for free coordinates.
    pub fn coord_order(&self, i: usize) -> Int {
        self.torsion.get(i).cloned().unwrap_or_else(Int::zero)
    }

    /// Reduces torsion coordinates into their canonical range.
    pub fn reduce(&self, coords: &mut [Int]) {
        for (c, d) in coords.iter_mut().zip(&self.torsion) {
            *c = c.mod_floor(d);
        }
    }

    pub fn project(&self, v: &[Int]) -> Vec<Int> {
        let mut c = self.projection.mul_vec(v);
        self.reduce(&mut c);
        c
    }

    /// Diagonal relation matrix of the normal form: columns `d_i e_i`.
    pub fn relation_matrix(&self) -> IntMatrix {
        let n = self.n_coords();
        let mut m = IntMatrix::zeros(n, self.torsion.len());
        for (i, d) in self.torsion.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    pub fn summary(&self) -> GroupSummary {
        GroupSummary {
            free_rank: self.free_rank,
            torsion: self.torsion.iter().map(to_i64).collect(),
        }
    }

    /// The trivial group on an ambient lattice of rank `n`.
    pub fn trivial(n: usize) -> Self {
        AbelianGroup {
            free_rank: 0,
            torsion: Vec::new(),
            projection: IntMatrix::zeros(0, n),
            section: IntMatrix::zeros(n, 0),
        }
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.summary().fmt(f)
    }
}

/// Isomorphism type of a finitely generated abelian group.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSummary {
    pub free_rank: usize,
    pub torsion: Vec<i64>,
}

impl fmt::Display for GroupSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `ℤ^rows / (column span of m)` in normal form.
pub fn cokernel(m: &IntMatrix) -> AbelianGroup {
    let n = m.rows();
    let s = snf(m);
    let factors = s.invariant_factors();
    let r = factors.len();
    let torsion_rows: Vec<usize> = (0..r).filter(|&i| !factors[i].is_one()).collect();
    let torsion: Vec<Int> = torsion_rows.iter().map(|&i| factors[i].clone()).collect();

    // Free coordinates are canonicalized by putting their rows in HNF; this is
    // an automorphism of the free summand.
    let free_rows: Vec<usize> = (r..n).collect();
    let (free_hnf, _) = hnf(&s.u.select_rows(&free_rows));
    let mut u = s.u.clone();
    for (k, &i) in free_rows.iter().enumerate() {
        u.row_mut(i).clone_from_slice(free_hnf.row(k));
    }
    let u_inv = unimodular_inverse(&u);

    let coord_rows: Vec<usize> = torsion_rows.iter().copied().chain(free_rows).collect();
    let mut projection = u.select_rows(&coord_rows);
    for (k, d) in torsion.iter().enumerate() {
        for x in projection.row_mut(k) {
            *x = x.mod_floor(d);
        }
    }
    let section = u_inv.select_columns(&coord_rows);
    AbelianGroup {
        free_rank: n - r,
        torsion,
        projection,
        section,
    }
}

/// Decides whether the homomorphism `source → target` given on normal-form
/// coordinates by `map` (target coords × source coords) is an isomorphism.
/// The caller is responsible for `map` being well defined.
pub fn is_isomorphism(source: &AbelianGroup, target: &AbelianGroup, map: &IntMatrix) -> bool {
    assert_eq!(map.shape(), (target.n_coords(), source.n_coords()));
    if source.summary() != target.summary() {
        return false;
    }
    let stacked = map.hstack(&target.relation_matrix());
    if !cokernel(&stacked).is_trivial() {
        return false;
    }
    // Injectivity: every x with map·x ∈ relations of target must be zero in source.
    let kernel = kernel_basis(&stacked);
    let a = source.n_coords();
    (0..kernel.cols()).all(|j| {
        (0..a).all(|i| {
            let x = &kernel[(i, j)];
            let d = source.coord_order(i);
            if d.is_zero() {
                x.is_zero()
            } else {
                x.is_multiple_of(&d)
            }
        })
    })
}

/// Checks that `map` sends every relation of `source` into the relations of
/// `target`, i.e. that it defines a homomorphism.
pub fn is_well_defined_hom(source: &AbelianGroup, target: &AbelianGroup, map: &IntMatrix) -> bool {
    let rel = map.mul(&source.relation_matrix());
    (0..rel.cols()).all(|j| target.project(&rel.column(j)).iter().all(Zero::is_zero))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows.first().map_or(0, Vec::len), rows)
    }

    #[test]
    fn cokernel_of_square_cone_transpose() {
        let beta_t = m(&[vec![1, 0, 1], vec![0, -1, 1], vec![-1, 0, 1], vec![0, 1, 1]]);
        // The four rays only span an index-2 sublattice, so the cokernel
        // carries a Z/2 next to the weight row (1,-1,1,-1).
        let g = cokernel(&beta_t);
        assert_eq!(g.free_rank, 1);
        assert_eq!(g.torsion, vec![Int::from(2)]);
        assert_eq!(g.projection.row(1), m(&[vec![1, -1, 1, -1]]).row(0));
        assert_eq!(g.to_string(), "Z/2 + Z");
    }

    #[test]
    fn cokernel_with_torsion() {
        let rel = m(&[vec![1, 0, -1, 0], vec![0, -1, 0, 1], vec![1, 1, 1, 1]]).transpose();
        let g = cokernel(&rel);
        assert_eq!(g.summary().to_string(), "Z/2 + Z");
        // projection kills relations, section lifts coordinates
        for j in 0..rel.cols() {
            assert!(g.project(&rel.column(j)).iter().all(Zero::is_zero));
        }
        for j in 0..g.n_coords() {
            let mut e = vec![Int::zero(); g.n_coords()];
            e[j] = Int::one();
            assert_eq!(g.project(&g.section.column(j)), e);
        }
    }

    #[test]
    fn cokernel_of_identity_is_trivial() {
        assert!(cokernel(&IntMatrix::identity(3)).is_trivial());
        assert_eq!(cokernel(&IntMatrix::identity(3)).to_string(), "0");
    }

    #[test]
    fn iso_detection() {
        let z = cokernel(&IntMatrix::zeros(1, 0));
        assert!(is_isomorphism(&z, &z, &m(&[vec![-1]])));
        assert!(!is_isomorphism(&z, &z, &m(&[vec![2]])));
        let z2 = cokernel(&m(&[vec![2]]));
        assert!(is_isomorphism(&z2, &z2, &m(&[vec![1]])));
        assert!(!is_isomorphism(&z2, &z2, &m(&[vec![0]])));
    }
}
