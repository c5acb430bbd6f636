//! Degree-by-degree evaluation of graded quotients
//! `ℤ[t_1..t_n] / (linear forms, homogeneous polynomials)` as abelian groups.
//!
//! The linear generators are eliminated first: `ℤ[t]/(L) ≅ ℤ[z_1..z_m]/(d_j z_j)`
//! where `ℤ^n/L ≅ ⊕ ℤ/d_j ⊕ ℤ^f` in normal form. Homogeneous generators are
//! rewritten in the `z` variables and each degree is the cokernel of an
//! explicit integer matrix on the `z`-monomials of that degree.

mod poly;

pub use poly::{deg, monomials, Monomial, Poly};

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cox::{IdealKind, IdealPresentation};
use crate::lattice::{cokernel, is_isomorphism, AbelianGroup, GroupSummary, Int, IntMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradedError {
    #[error("expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("generator {0} is not homogeneous")]
    NotHomogeneous(usize),
    #[error("element is not homogeneous of degree {expected}")]
    DegreeMismatch { expected: usize },
    #[error(
        "map is not well defined: relation {relation} maps to a non-zero class in degree {degree}"
    )]
    NotWellDefined { relation: String, degree: usize },
    #[error("presentation describes a K-theoretic ideal, not a graded one")]
    WrongKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPresentation {
    pub n_vars: usize,
    pub linear_gens: Vec<Vec<i64>>,
    pub homogeneous_gens: Vec<Poly>,
}

impl GradedPresentation {
    pub fn new(
        n_vars: usize,
        linear_gens: Vec<Vec<i64>>,
        homogeneous_gens: Vec<Poly>,
    ) -> Result<Self, GradedError> {
        for l in &linear_gens {
            if l.len() != n_vars {
                return Err(GradedError::DimensionMismatch {
                    expected: n_vars,
                    found: l.len(),
                });
            }
        }
        for (i, g) in homogeneous_gens.iter().enumerate() {
            if g.n_vars() != n_vars {
                return Err(GradedError::DimensionMismatch {
                    expected: n_vars,
                    found: g.n_vars(),
                });
            }
            if !g.is_zero() && g.homogeneous_degree().is_none() {
                return Err(GradedError::NotHomogeneous(i));
            }
        }
        Ok(GradedPresentation {
            n_vars,
            linear_gens,
            homogeneous_gens,
        })
    }

    /// The polynomial ring itself.
    pub fn free(n_vars: usize) -> Self {
        GradedPresentation {
            n_vars,
            linear_gens: Vec::new(),
            homogeneous_gens: Vec::new(),
        }
    }

    /// Chow reading of an ideal presentation: linear forms plus the
    /// square-free monomials of the collections.
    pub fn from_ideals(p: &IdealPresentation) -> Result<Self, GradedError> {
        if p.kind != IdealKind::Chow {
            return Err(GradedError::WrongKind);
        }
        let gens = p
            .monomial_gens
            .iter()
            .map(|c| Poly::product_of_vars(p.n_vars, c))
            .collect();
        GradedPresentation::new(p.n_vars, p.linear_gens.clone(), gens)
    }
}

/// The degree-`k` component as an abelian group on the reduced monomials.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub degree: usize,
    /// Degree-`k` monomials in the reduced variables `z`.
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    pub group: AbelianGroup,
}

impl GradedPiece {
    pub fn summary(&self) -> GroupSummary {
        self.group.summary()
    }

    fn coords_of_z(&self, z: &Poly) -> Vec<Int> {
        let mut v = vec![Int::from(0); self.monomials.len()];
        for (m, c) in z.terms() {
            v[self.index[m]] = c.clone();
        }
        self.group.project(&v)
    }

    /// A `z`-polynomial representing the given normal-form coordinates.
    fn lift_z(&self, n_z: usize, coords: &[Int]) -> Poly {
        let v = self.group.section.mul_vec(coords);
        Poly::from_terms(n_z, self.monomials.iter().cloned().zip(v))
    }
}

/// Serializable per-degree structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSummary {
    pub degree: usize,
    pub free_rank: usize,
    pub torsion: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct GradedRing {
    pres: GradedPresentation,
    linear: AbelianGroup,
    to_z: Vec<Poly>,
    from_z: Vec<Poly>,
    z_gens: Vec<(usize, Poly)>,
}

impl GradedRing {
    pub fn new(pres: &GradedPresentation) -> GradedRing {
        let n = pres.n_vars;
        let lin = IntMatrix::from_columns(n, &pres.linear_gens);
        let linear = cokernel(&lin);
        let m = linear.n_coords();
        let to_z: Vec<Poly> = (0..n)
            .map(|i| Poly::linear(&linear.projection.column(i)))
            .collect();
        let from_z: Vec<Poly> = (0..m)
            .map(|j| Poly::linear(&linear.section.column(j)))
            .collect();
        let z_gens = pres
            .homogeneous_gens
            .iter()
            .filter_map(|g| {
                let d = g.homogeneous_degree()?;
                let z = substitute_into(g, &to_z, m);
                Some((d, z))
            })
            .collect();
        GradedRing {
            pres: pres.clone(),
            linear,
            to_z,
            from_z,
            z_gens,
        }
    }

    pub fn presentation(&self) -> &GradedPresentation {
        &self.pres
    }

    /// Number of variables left after eliminating the linear generators.
    pub fn n_reduced_vars(&self) -> usize {
        self.linear.n_coords()
    }

    pub fn piece(&self, k: usize) -> GradedPiece {
        let m = self.n_reduced_vars();
        let mons = monomials(m, k);
        let index: HashMap<Monomial, usize> = mons
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, x)| (x, i))
            .collect();
        let mut cols: Vec<Vec<Int>> = Vec::new();
        let column = |p: &Poly| {
            let mut c = vec![Int::from(0); mons.len()];
            for (mono, x) in p.terms() {
                c[index[mono]] = x.clone();
            }
            c
        };
        if k >= 1 {
            let lower = monomials(m, k - 1);
            for (j, d) in self.linear.torsion.iter().enumerate() {
                for mu in &lower {
                    let mut e = mu.clone();
                    e[j] += 1;
                    cols.push(column(&Poly::monomial(e, d.clone())));
                }
            }
        }
        for (d, g) in &self.z_gens {
            if *d > k {
                continue;
            }
            for mu in monomials(m, k - d) {
                let p = g.mul(&Poly::monomial(mu, Int::from(1)));
                if !p.is_zero() {
                    cols.push(column(&p));
                }
            }
        }
        let rel = IntMatrix::from_columns(mons.len(), &cols);
        GradedPiece {
            degree: k,
            monomials: mons,
            index,
            group: cokernel(&rel),
        }
    }

    /// Rewrites a `t`-polynomial in the reduced variables.
    pub fn reduce(&self, p: &Poly) -> Poly {
        substitute_into(p, &self.to_z, self.n_reduced_vars())
    }

    /// Rewrites a reduced polynomial back in the `t` variables.
    pub fn lift(&self, z: &Poly) -> Poly {
        if self.n_reduced_vars() == 0 {
            return Poly::constant(self.pres.n_vars, z.coeff(&[]));
        }
        z.substitute(&self.from_z)
    }

    pub fn normal_form(&self, piece: &GradedPiece, p: &Poly) -> Result<Vec<Int>, GradedError> {
        if p.n_vars() != self.pres.n_vars {
            return Err(GradedError::DimensionMismatch {
                expected: self.pres.n_vars,
                found: p.n_vars(),
            });
        }
        if !p.is_homogeneous_of(piece.degree) {
            return Err(GradedError::DegreeMismatch {
                expected: piece.degree,
            });
        }
        Ok(piece.coords_of_z(&self.reduce(p)))
    }

    /// A `t`-polynomial with the given normal-form coordinates.
    pub fn element(&self, piece: &GradedPiece, coords: &[Int]) -> Poly {
        self.lift(&piece.lift_z(self.n_reduced_vars(), coords))
    }

    /// Product of homogeneous elements of degrees `j` and `k`, in normal form
    /// in degree `j + k`.
    pub fn multiply(
        &self,
        a: &Poly,
        j: usize,
        b: &Poly,
        k: usize,
    ) -> Result<Vec<Int>, GradedError> {
        for (p, d) in [(a, j), (b, k)] {
            if !p.is_homogeneous_of(d) {
                return Err(GradedError::DegreeMismatch { expected: d });
            }
        }
        let piece = self.piece(j + k);
        self.normal_form(&piece, &a.mul(b))
    }

    pub fn summaries(&self, max_deg: usize) -> Vec<PieceSummary> {
        (0..=max_deg)
            .map(|k| {
                let s = self.piece(k).summary();
                PieceSummary {
                    degree: k,
                    free_rank: s.free_rank,
                    torsion: s.torsion,
                }
            })
            .collect()
    }
}

/// `p(forms)`, where the forms live in a ring with `target_vars` variables.
fn substitute_into(p: &Poly, forms: &[Poly], target_vars: usize) -> Poly {
    if target_vars == 0 {
        // every variable maps to zero; only the constant term survives
        return Poly::constant(0, p.coeff(&vec![0; p.n_vars()]));
    }
    p.substitute(forms)
}

pub fn graded_piece(p: &GradedPresentation, k: usize) -> GradedPiece {
    GradedRing::new(p).piece(k)
}

/// A degree-preserving ring map given by sending each source variable to a
/// linear form in the target variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingMap {
    pub source: GradedPresentation,
    pub target: GradedPresentation,
    pub substitution: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegreeVerdict {
    pub degree: usize,
    pub source: GroupSummary,
    pub target: GroupSummary,
    pub iso: bool,
}

/// Source and target rings with the map composed down to the reduced
/// variables: `z_src ↦ t_src ↦ t_tgt ↦ z_tgt`.
struct MapEvaluator {
    src: GradedRing,
    tgt: GradedRing,
    t_forms: Vec<Poly>,
    z_forms: Vec<Poly>,
}

impl MapEvaluator {
    fn new(rm: &RingMap) -> Result<Self, GradedError> {
        if rm.substitution.len() != rm.source.n_vars {
            return Err(GradedError::DimensionMismatch {
                expected: rm.source.n_vars,
                found: rm.substitution.len(),
            });
        }
        if let Some(bad) = rm.substitution.iter().find(|f| f.len() != rm.target.n_vars) {
            return Err(GradedError::DimensionMismatch {
                expected: rm.target.n_vars,
                found: bad.len(),
            });
        }
        let src = GradedRing::new(&rm.source);
        let tgt = GradedRing::new(&rm.target);
        let t_forms: Vec<Poly> = rm.substitution.iter().map(|f| Poly::linear(f)).collect();
        let z_forms = (0..src.n_reduced_vars())
            .map(|j| {
                let z = Poly::var(src.n_reduced_vars(), j);
                let t_src = src.lift(&z);
                let t_tgt = map_t(&t_src, &t_forms, rm.target.n_vars);
                tgt.reduce(&t_tgt)
            })
            .collect();
        Ok(MapEvaluator {
            src,
            tgt,
            t_forms,
            z_forms,
        })
    }

    fn certify(&self) -> Result<(), GradedError> {
        let mut pieces: BTreeMap<usize, GradedPiece> = BTreeMap::new();
        let mut check = |p: &Poly, d: usize, label: String| -> Result<(), GradedError> {
            let img = map_t(p, &self.t_forms, self.tgt.pres.n_vars);
            let piece = pieces.entry(d).or_insert_with(|| self.tgt.piece(d));
            let nf = self.tgt.normal_form(piece, &img)?;
            if nf.iter().all(|x| *x == Int::from(0)) {
                Ok(())
            } else {
                Err(GradedError::NotWellDefined {
                    relation: label,
                    degree: d,
                })
            }
        };
        for l in &self.src.pres.linear_gens {
            let p = Poly::linear(l);
            check(&p, 1, p.to_string())?;
        }
        for g in &self.src.pres.homogeneous_gens {
            if let Some(d) = g.homogeneous_degree() {
                check(g, d, g.to_string())?;
            }
        }
        Ok(())
    }

    fn induced(&self, k: usize) -> (GradedPiece, GradedPiece, IntMatrix) {
        let sp = self.src.piece(k);
        let tp = self.tgt.piece(k);
        let m_src = self.src.n_reduced_vars();
        let m_tgt = self.tgt.n_reduced_vars();
        let cols: Vec<Vec<Int>> = (0..sp.group.n_coords())
            .map(|j| {
                let mut e = vec![Int::from(0); sp.group.n_coords()];
                e[j] = Int::from(1);
                let z = sp.lift_z(m_src, &e);
                let img = substitute_into(&z, &self.z_forms, m_tgt);
                tp.coords_of_z(&img)
            })
            .collect();
        let map = IntMatrix::from_columns(tp.group.n_coords(), &cols);
        (sp, tp, map)
    }
}

fn map_t(p: &Poly, forms: &[Poly], target_vars: usize) -> Poly {
    if forms.is_empty() {
        return Poly::constant(target_vars, p.coeff(&[]));
    }
    p.substitute(forms)
}

/// Checks that every source generator maps into the target ideal. Generators
/// are finitely many, so this certifies the map in all degrees.
pub fn certify_well_defined(rm: &RingMap) -> Result<(), GradedError> {
    MapEvaluator::new(rm)?.certify()
}

/// Matrix of the induced map on degree-`k` normal-form coordinates.
pub fn induced_map(rm: &RingMap, k: usize) -> Result<IntMatrix, GradedError> {
    Ok(MapEvaluator::new(rm)?.induced(k).2)
}

/// Per-degree isomorphism verdicts for `k = 0..=max_deg`; fails if the map is
/// not well defined.
pub fn is_iso_up_to(rm: &RingMap, max_deg: usize) -> Result<Vec<DegreeVerdict>, GradedError> {
    let ev = MapEvaluator::new(rm)?;
    ev.certify()?;
    Ok((0..=max_deg)
        .map(|k| {
            let (sp, tp, map) = ev.induced(k);
            DegreeVerdict {
                degree: k,
                source: sp.summary(),
                target: tp.summary(),
                iso: is_isomorphism(&sp.group, &tp.group, &map),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// ℤ[s1..s5]/(s1−s3, s2−s4, s1+..+s5, s1s3, s2s4)
    fn sigma_star() -> GradedPresentation {
        GradedPresentation::new(
            5,
            vec![
                vec![1, 0, -1, 0, 0],
                vec![0, 1, 0, -1, 0],
                vec![1, 1, 1, 1, 1],
            ],
            vec![
                Poly::product_of_vars(5, &[0, 2]),
                Poly::product_of_vars(5, &[1, 3]),
            ],
        )
        .unwrap()
    }

    fn ranks(p: &GradedPresentation, d: usize) -> Vec<usize> {
        GradedRing::new(p)
            .summaries(d)
            .iter()
            .map(|s| s.free_rank)
            .collect()
    }

    #[test]
    fn free_ring_counts_monomials() {
        let p = GradedPresentation::free(2);
        assert_eq!(graded_piece(&p, 2).summary().to_string(), "Z^3");
        assert_eq!(ranks(&p, 3), vec![1, 2, 3, 4]);
    }

    #[test]
    fn sigma_star_ranks() {
        let p = sigma_star();
        assert_eq!(ranks(&p, 4), vec![1, 2, 1, 0, 0]);
        assert!(GradedRing::new(&p)
            .summaries(4)
            .iter()
            .all(|s| s.torsion.is_empty()));
    }

    #[test]
    fn normal_forms_and_products() {
        let r = GradedRing::new(&sigma_star());
        let p1 = r.piece(1);
        let p2 = r.piece(2);
        let s = |i| Poly::var(5, i);
        let zero1 = vec![Int::from(0); 2];
        assert_eq!(r.normal_form(&p1, &s(0).sub(&s(2))).unwrap(), zero1);
        assert_eq!(
            r.normal_form(&p2, &s(0).mul(&s(2))).unwrap(),
            vec![Int::from(0)]
        );
        assert_eq!(r.normal_form(&p1, &Poly::zero(5)).unwrap(), zero1);
        assert_eq!(r.multiply(&s(0), 1, &s(0), 1).unwrap(), vec![Int::from(0)]);
        let s1s2 = r.multiply(&s(0), 1, &s(1), 1).unwrap();
        assert!(s1s2[0] == Int::from(1) || s1s2[0] == Int::from(-1));
        let one = Poly::one(5);
        assert_eq!(
            r.multiply(&one, 0, &s(1), 1).unwrap(),
            r.normal_form(&p1, &s(1)).unwrap()
        );
        assert!(matches!(
            r.normal_form(&p1, &s(0).mul(&s(1))),
            Err(GradedError::DegreeMismatch { expected: 1 })
        ));
    }

    #[test]
    fn torsion_is_detected() {
        let p = GradedPresentation::new(
            4,
            vec![vec![1, 0, -1, 0], vec![0, -1, 0, 1], vec![1, 1, 1, 1]],
            vec![],
        )
        .unwrap();
        let r = GradedRing::new(&p);
        assert_eq!(r.piece(1).summary().to_string(), "Z/2 + Z");
        // z1^2 and z1*z2 are 2-torsion, z2^2 is free
        assert_eq!(r.piece(2).summary().to_string(), "Z/2 + Z/2 + Z");
    }

    #[test]
    fn identity_and_zero_maps() {
        let p = sigma_star();
        let id: Vec<Vec<i64>> = (0..5)
            .map(|i| (0..5).map(|j| i64::from(i == j)).collect())
            .collect();
        let rm = RingMap {
            source: p.clone(),
            target: p.clone(),
            substitution: id,
        };
        certify_well_defined(&rm).unwrap();
        let v = is_iso_up_to(&rm, 3).unwrap();
        assert!(v.iter().all(|d| d.iso));
        assert_eq!(induced_map(&rm, 1).unwrap(), IntMatrix::identity(2));

        let zero = RingMap {
            source: p.clone(),
            target: p,
            substitution: vec![vec![0; 5]; 5],
        };
        certify_well_defined(&zero).unwrap();
        assert!(induced_map(&zero, 1).unwrap().is_zero());
        let v = is_iso_up_to(&zero, 1).unwrap();
        assert!(v[0].iso);
        assert!(!v[1].iso);
    }

    #[test]
    fn ill_defined_map_is_reported() {
        let src =
            GradedPresentation::new(1, vec![], vec![Poly::product_of_vars(1, &[0, 0])]).unwrap();
        let tgt = GradedPresentation::free(1);
        let rm = RingMap {
            source: src,
            target: tgt,
            substitution: vec![vec![1]],
        };
        assert!(matches!(
            certify_well_defined(&rm),
            Err(GradedError::NotWellDefined { degree: 2, .. })
        ));
    }
}
