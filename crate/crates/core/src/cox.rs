//! The Cox quotient presentation of a toric variety: `β`, the character
//! group `X(G) = coker(βᵀ)`, per-ray weights, and the linear-equivalence and
//! Stanley-Reisner ideal data in their Chow and K-theoretic readings.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fan::{primitive_collections, Fan, FanError};
use crate::lattice::{
    cokernel, ints, row_lattice_basis, solve_in_span, to_i64, AbelianGroup, Int, IntMatrix,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoxError {
    #[error("rays span a sublattice of rank {span} in N of rank {rank}; torus factors are not supported")]
    NotFullDimensional { rank: usize, span: usize },
    #[error("weight matrix has {found} columns but the fan has {expected} rays")]
    WeightShape { expected: usize, found: usize },
    #[error("ray index {0} out of range")]
    RayOutOfRange(usize),
    #[error(transparent)]
    Fan(#[from] FanError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxData {
    pub fan: Fan,
    /// `n × r`, column `ρ` is `u_ρ`.
    pub beta: IntMatrix,
    pub char_group: AbelianGroup,
    /// Column `ρ` is the class of `e_ρ` in the normal-form coordinates of `X(G)`.
    pub weights: IntMatrix,
    /// Rows form the HNF basis of `ker(ℤ^r → X(G)) = im βᵀ`.
    pub kernel: IntMatrix,
    pub primitive_collections: Vec<Vec<usize>>,
}

pub fn cox(f: &Fan) -> Result<CoxData, CoxError> {
    let n = f.ambient_rank();
    let span = f.ray_span_rank();
    if span != n {
        return Err(CoxError::NotFullDimensional { rank: n, span });
    }
    let beta = IntMatrix::from_columns(n, f.rays());
    let char_group = cokernel(&beta.transpose());
    let weights = char_group.projection.clone();
    let kernel = row_lattice_basis(&beta);
    Ok(CoxData {
        fan: f.clone(),
        beta,
        char_group,
        weights,
        kernel,
        primitive_collections: primitive_collections(f),
    })
}

impl CoxData {
    pub fn n_rays(&self) -> usize {
        self.beta.cols()
    }

    /// Class of `e_ρ` in `X(G)`.
    pub fn weight(&self, ray: usize) -> Vec<Int> {
        self.weights.column(ray)
    }

    /// Weight vectors restricted to the free part of `X(G)`, as `i64`.
    pub fn free_weights(&self) -> Vec<Vec<i64>> {
        let t = self.char_group.torsion.len();
        (0..self.n_rays())
            .map(|j| self.weights.column(j)[t..].iter().map(to_i64).collect())
            .collect()
    }

    /// Strongness report using the actual character group, torsion included.
    pub fn strongness(&self, m: usize, bound: u64) -> Result<Vec<ChartReport>, CoxError> {
        chart_reports(
            &self.weights,
            &self.char_group.relation_matrix(),
            &self.fan,
            m,
            bound,
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IdealKind {
    Chow,
    K,
}

/// Linear-equivalence and Stanley-Reisner data. For `Chow` a linear generator
/// `a` is the form `Σ a_i t_i` and a collection `I` is `Π_{i∈I} t_i`; for `K`
/// they are `e^a − 1` and `Π_{i∈I} (1 − e_i^{-1})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealPresentation {
    pub kind: IdealKind,
    pub n_vars: usize,
    pub linear_gens: Vec<Vec<i64>>,
    pub monomial_gens: Vec<Vec<usize>>,
}

fn ideals(cd: &CoxData, kind: IdealKind) -> IdealPresentation {
    IdealPresentation {
        kind,
        n_vars: cd.n_rays(),
        linear_gens: cd.kernel.to_i64_rows(),
        monomial_gens: cd.primitive_collections.clone(),
    }
}

pub fn chow_ideals(cd: &CoxData) -> IdealPresentation {
    ideals(cd, IdealKind::Chow)
}

pub fn k_ideals(cd: &CoxData) -> IdealPresentation {
    ideals(cd, IdealKind::K)
}

/// One Cox chart `D(x^σ)`: the coordinates of rays outside `σ` are units.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartReport {
    pub cone: Vec<usize>,
    pub invertible: Vec<usize>,
    pub in_span: bool,
    /// Smallest `k ≥ 1` with `k·w_m` in the span; `None` if none up to the bound.
    pub min_power: Option<u64>,
}

/// For each maximal cone, decides whether `w_m` lies in the subgroup generated
/// by the weights of the invertible coordinates, and the least multiple that
/// does. `weights` is taken literally as a free presentation of `X(G)`.
pub fn strong_divisor_check(
    weights: &IntMatrix,
    f: &Fan,
    m: usize,
    bound: u64,
) -> Result<Vec<ChartReport>, CoxError> {
    chart_reports(weights, &IntMatrix::zeros(weights.rows(), 0), f, m, bound)
}

fn chart_reports(
    weights: &IntMatrix,
    relations: &IntMatrix,
    f: &Fan,
    m: usize,
    bound: u64,
) -> Result<Vec<ChartReport>, CoxError> {
    if weights.cols() != f.n_rays() {
        return Err(CoxError::WeightShape {
            expected: f.n_rays(),
            found: weights.cols(),
        });
    }
    if m >= f.n_rays() {
        return Err(CoxError::RayOutOfRange(m));
    }
    let w = weights.column(m);
    let mut out = Vec::new();
    for cone in f.maximal_cones() {
        let invertible: Vec<usize> = (0..f.n_rays()).filter(|i| !cone.contains(i)).collect();
        let span = weights.select_columns(&invertible).hstack(relations);
        let solvable = |k: u64| {
            let target: Vec<Int> = w.iter().map(|x| x * Int::from(k)).collect();
            solve_in_span(&span, &target)
                .expect("shapes agree")
                .is_some()
        };
        let min_power = (1..=bound).find(|&k| solvable(k));
        out.push(ChartReport {
            cone: cone.clone(),
            invertible,
            in_span: min_power == Some(1),
            min_power,
        });
    }
    Ok(out)
}

/// Least common multiple of the per-chart minima, if all are known.
pub fn global_power(reports: &[ChartReport]) -> Option<u64> {
    use num_integer::Integer;
    reports
        .iter()
        .try_fold(1u64, |acc, r| r.min_power.map(|k| acc.lcm(&k)))
}

/// Class in `X(G)` of an integer vector on the rays.
pub fn class_of(cd: &CoxData, v: &[i64]) -> Vec<Int> {
    cd.char_group.project(&ints(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{make_cone, star_subdivision};
    use crate::lattice::same_column_lattice;

    fn sigma_fan() -> Fan {
        Fan::new(
            3,
            vec![vec![1, 0, 1], vec![0, -1, 1], vec![-1, 0, 1], vec![0, 1, 1]],
            vec![vec![0, 1, 2, 3]],
        )
        .unwrap()
    }

    fn sigma_star() -> Fan {
        let f = sigma_fan();
        let c = make_cone(3, f.rays()).unwrap();
        star_subdivision(&f, &c).unwrap()
    }

    #[test]
    fn square_cone_weights() {
        let cd = cox(&sigma_fan()).unwrap();
        assert_eq!(cd.char_group.free_rank, 1);
        assert_eq!(
            cd.free_weights(),
            vec![vec![1], vec![-1], vec![1], vec![-1]]
        );
        assert!(cd.primitive_collections.is_empty());
        // kernel vectors vanish in X(G)
        for row in cd.kernel.row_vecs() {
            assert!(cd
                .char_group
                .project(&row)
                .iter()
                .all(|x| *x == Int::from(0)));
        }
    }

    #[test]
    fn subdivided_cone() {
        let cd = cox(&sigma_star()).unwrap();
        assert_eq!(cd.char_group.to_string(), "Z^2");
        assert_eq!(cd.primitive_collections, vec![vec![0, 2], vec![1, 3]]);
        let expected = IntMatrix::from_rows(
            5,
            &[
                vec![1, 0, -1, 0, 0],
                vec![0, 1, 0, -1, 0],
                vec![1, 1, 1, 1, 1],
            ],
        );
        assert!(same_column_lattice(
            &cd.kernel.transpose(),
            &expected.transpose()
        ));
        let ch = chow_ideals(&cd);
        let k = k_ideals(&cd);
        assert_eq!(ch.linear_gens, k.linear_gens);
        assert_eq!(ch.monomial_gens, k.monomial_gens);
    }

    #[test]
    fn affine_plane() {
        let f = Fan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1]]).unwrap();
        let cd = cox(&f).unwrap();
        assert!(cd.char_group.is_trivial());
        let ch = chow_ideals(&cd);
        assert!(ch.monomial_gens.is_empty());
        assert_eq!(ch.linear_gens, vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn projective_line() {
        let f = Fan::new(1, vec![vec![1], vec![-1]], vec![vec![0], vec![1]]).unwrap();
        let ch = chow_ideals(&cox(&f).unwrap());
        assert_eq!(ch.linear_gens, vec![vec![1, -1]]);
        assert_eq!(ch.monomial_gens, vec![vec![0, 1]]);
    }

    #[test]
    fn torus_factor_rejected() {
        let f = Fan::new(2, vec![vec![1, 0]], vec![vec![0]]).unwrap();
        assert_eq!(
            cox(&f),
            Err(CoxError::NotFullDimensional { rank: 2, span: 1 })
        );
    }

    #[test]
    fn trivial_action_is_strong() {
        let f = sigma_star();
        let w = IntMatrix::zeros(2, 5);
        for r in strong_divisor_check(&w, &f, 4, 5).unwrap() {
            assert!(r.in_span);
            assert_eq!(r.min_power, Some(1));
        }
        assert!(matches!(
            strong_divisor_check(&IntMatrix::zeros(2, 3), &f, 0, 5),
            Err(CoxError::WeightShape { .. })
        ));
    }
}
