//! Chow rings of canonical toric stacks, Chow groups of toric varieties, and
//! the exceptional-divisor comparison behind the vanishing of positive-degree
//! operational classes on affine toric varieties.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cox::{chow_ideals, cox, CoxData, CoxError};
use crate::fan::{
    orbit_relation_data, preimage_orbit_closure, star_quotient_fan, star_subdivision, Cone, Fan,
    FanError, FanJson, OrbitRelationDatum,
};
use crate::graded::{
    is_iso_up_to, DegreeVerdict, GradedError, GradedPresentation, GradedRing, PieceSummary, Poly,
};
use crate::lattice::{cokernel, ints, solve_in_span, to_i64, AbelianGroup, Int, IntMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChowError {
    #[error("degree {k} is outside 0..={rank}")]
    DegreeOutOfRange { k: usize, rank: usize },
    #[error("cone of dimension {dim} in a lattice of rank {rank} is not full-dimensional")]
    NotFullDimensional { dim: usize, rank: usize },
    #[error("expected the fan of a single cone, found {0} maximal cones")]
    NotAffine(usize),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Cox(#[from] CoxError),
    #[error(transparent)]
    Graded(#[from] GradedError),
}

pub fn chow_ring_stack(f: &Fan) -> Result<GradedPresentation, ChowError> {
    Ok(presentation_of(&cox(f)?))
}

fn presentation_of(cd: &CoxData) -> GradedPresentation {
    GradedPresentation::from_ideals(&chow_ideals(cd)).expect("Chow ideals are graded")
}

/// `A_k(X(Δ))`: classes `[V(σ)]` for cones of dimension `n − k`, modulo the
/// divisors of characters on the `(k+1)`-dimensional orbit closures.
pub fn chow_groups(f: &Fan, k: usize) -> Result<AbelianGroup, ChowError> {
    chow_groups_with(f, k, |_, d| d)
}

/// As [`chow_groups`], with a hook that may rewrite the relation data of each
/// `τ` (a different basis of `M(τ)`, other choices of `n_{σ,τ}`).
pub fn chow_groups_with<F>(f: &Fan, k: usize, mut adjust: F) -> Result<AbelianGroup, ChowError>
where
    F: FnMut(&Cone, Vec<OrbitRelationDatum>) -> Vec<OrbitRelationDatum>,
{
    let n = f.ambient_rank();
    if k > n {
        return Err(ChowError::DegreeOutOfRange { k, rank: n });
    }
    let gens = f.cones_of_dim(n - k);
    let mut relations: Vec<Vec<Int>> = Vec::new();
    if k < n {
        for t in f.cones_of_dim(n - k - 1) {
            let tau = f.cone(&t);
            let data = adjust(&tau, orbit_relation_data(f, &tau)?);
            let Some(first) = data.first() else { continue };
            for u in &first.m_tau_basis {
                let u = ints(u);
                let mut col = vec![Int::from(0); gens.len()];
                for d in &data {
                    let j = gens
                        .iter()
                        .position(|g| *g == d.sigma_index)
                        .expect("σ is a generator");
                    col[j] += crate::lattice::dot(&u, &ints(&d.n_gen));
                }
                relations.push(col);
            }
        }
    }
    Ok(cokernel(&IntMatrix::from_columns(gens.len(), &relations)))
}

/// Pieces of the comparison between `A*(𝒳(σ*))` and `A*(𝓔)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExceptionalComparison {
    pub subdivision: FanJson,
    /// Index of the new ray `ρ_v` in the subdivision.
    pub star_ray: usize,
    pub exceptional_fan: FanJson,
    /// Ray of `σ*` to ray of the exceptional fan.
    pub correspondence: Vec<Option<usize>>,
    /// Coefficients of the linear form substituted for `t_v`, on the
    /// exceptional variables; `None` if the class of `e_v` has no integral
    /// expression in the other classes.
    pub extra_form: Option<Vec<i64>>,
    pub well_defined: bool,
    pub verdicts: Vec<DegreeVerdict>,
}

impl ExceptionalComparison {
    pub fn all_iso(&self) -> bool {
        self.well_defined && !self.verdicts.is_empty() && self.verdicts.iter().all(|v| v.iso)
    }

    /// The substituted form in `s_i` notation.
    pub fn extra_form_text(&self) -> Option<String> {
        self.extra_form
            .as_ref()
            .map(|c| Poly::linear(c).render("s"))
    }
}

struct Pipeline {
    star: Fan,
    star_cox: CoxData,
    v: usize,
    e_fan: Fan,
    correspondence: Vec<Option<usize>>,
}

fn single_cone(f: &Fan) -> Result<Cone, ChowError> {
    if f.maximal_cones().len() != 1 {
        return Err(ChowError::NotAffine(f.maximal_cones().len()));
    }
    let c = f.cone(&f.maximal_cones()[0]);
    let dim = c.dim();
    if dim != f.ambient_rank() {
        return Err(ChowError::NotFullDimensional {
            dim,
            rank: f.ambient_rank(),
        });
    }
    Ok(c)
}

fn pipeline(f: &Fan) -> Result<Pipeline, ChowError> {
    let sigma = single_cone(f)?;
    let star = star_subdivision(f, &sigma)?;
    let v = star
        .ray_index(&sigma.star_vector()?)
        .expect("star vector is a ray of the subdivision");
    let q = star_quotient_fan(&star, v)?;
    Ok(Pipeline {
        star_cox: cox(&star)?,
        star,
        v,
        e_fan: q.fan,
        correspondence: q.correspondence,
    })
}

/// Compares the Chow rings of `𝒳(σ*)` and of the exceptional divisor for the
/// single-cone fan `f`, keeping its ray order.
pub fn exceptional_comparison_for(
    f: &Fan,
    max_deg: usize,
) -> Result<ExceptionalComparison, ChowError> {
    let p = pipeline(f)?;
    let source = presentation_of(&p.star_cox);
    let target = chow_ring_stack(&p.e_fan)?;
    let n_src = p.star.n_rays();
    let n_tgt = p.e_fan.n_rays();

    // e_v = Σ c_i e_i in X(G), solved over ℤ against the other weights
    let others: Vec<usize> = (0..n_src).filter(|&i| i != p.v).collect();
    let g = &p.star_cox.char_group;
    let span = p
        .star_cox
        .weights
        .select_columns(&others)
        .hstack(&g.relation_matrix());
    let sol = solve_in_span(&span, &p.star_cox.weights.column(p.v)).expect("shapes agree");

    let mut out = ExceptionalComparison {
        subdivision: p.star.to_json(),
        star_ray: p.v,
        exceptional_fan: p.e_fan.to_json(),
        correspondence: p.correspondence.clone(),
        extra_form: None,
        well_defined: false,
        verdicts: Vec::new(),
    };
    let Some(sol) = sol else { return Ok(out) };

    let mut extra = vec![0i64; n_tgt];
    for (k, &i) in others.iter().enumerate() {
        let c = to_i64(&sol[k]);
        if c != 0 {
            let j = p.correspondence[i].expect("rays of σ survive in the star");
            extra[j] += c;
        }
    }
    let substitution: Vec<Vec<i64>> = (0..n_src)
        .map(|i| {
            if i == p.v {
                extra.clone()
            } else {
                let mut row = vec![0; n_tgt];
                row[p.correspondence[i].expect("rays of σ survive in the star")] = 1;
                row
            }
        })
        .collect();
    out.extra_form = Some(extra);
    let rm = crate::graded::RingMap {
        source,
        target,
        substitution,
    };
    match is_iso_up_to(&rm, max_deg) {
        Ok(v) => {
            out.well_defined = true;
            out.verdicts = v;
        }
        Err(GradedError::NotWellDefined { .. }) => {}
        Err(e) => return Err(e.into()),
    }
    Ok(out)
}

pub fn exceptional_comparison(
    sigma: &Cone,
    max_deg: usize,
) -> Result<ExceptionalComparison, ChowError> {
    exceptional_comparison_for(&Fan::from_cone(sigma), max_deg)
}

/// Serializable form of a graded presentation with square-free monomial
/// generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationJson {
    pub n_vars: usize,
    pub linear_gens: Vec<Vec<i64>>,
    pub monomial_gens: Vec<Vec<usize>>,
}

fn presentation_json(cd: &CoxData) -> PresentationJson {
    let p = chow_ideals(cd);
    PresentationJson {
        n_vars: p.n_vars,
        linear_gens: p.linear_gens,
        monomial_gens: p.monomial_gens,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VanishingReport {
    pub cone: Vec<Vec<i64>>,
    pub max_deg: usize,
    pub subdivision_presentation: PresentationJson,
    pub exceptional_presentation: PresentationJson,
    pub comparison: ExceptionalComparison,
    /// Graded pieces of `A*(𝒳(σ*))` for degrees `0..=max_deg`.
    pub pieces: Vec<PieceSummary>,
    /// `φ⁻¹(V(σ))` is exactly `V(ρ_v)`.
    pub preimage_ok: bool,
    pub conclusion: bool,
}

impl VanishingReport {
    pub fn torsion_free(&self) -> bool {
        self.pieces.iter().all(|p| p.torsion.is_empty())
    }
}

pub fn verify_vanishing_for(f: &Fan, max_deg: usize) -> Result<VanishingReport, ChowError> {
    let comparison = exceptional_comparison_for(f, max_deg)?;
    let p = pipeline(f)?;
    let pieces = GradedRing::new(&presentation_of(&p.star_cox)).summaries(max_deg);
    let e_cox = cox(&p.e_fan)?;
    let preimage_ok = preimage_check_for(f)?.ok;
    let torsion_free = pieces.iter().all(|s| s.torsion.is_empty());
    let conclusion = comparison.all_iso() && torsion_free;
    Ok(VanishingReport {
        cone: f.rays().to_vec(),
        max_deg,
        subdivision_presentation: presentation_json(&p.star_cox),
        exceptional_presentation: presentation_json(&e_cox),
        comparison,
        pieces,
        preimage_ok,
        conclusion,
    })
}

pub fn verify_vanishing(sigma: &Cone, max_deg: usize) -> Result<VanishingReport, ChowError> {
    verify_vanishing_for(&Fan::from_cone(sigma), max_deg)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PreimageCheck {
    pub star_vector: Vec<i64>,
    pub minimal_cones: Vec<Vec<Vec<i64>>>,
    pub ok: bool,
}

pub fn preimage_check_for(f: &Fan) -> Result<PreimageCheck, ChowError> {
    let sigma = single_cone(f)?;
    let v = sigma.star_vector()?;
    let star = star_subdivision(f, &sigma)?;
    let cones = preimage_orbit_closure(&star, f, &sigma)?;
    let ok = cones.len() == 1 && cones[0].rays() == [v.clone()];
    Ok(PreimageCheck {
        star_vector: v,
        minimal_cones: cones.iter().map(|c| c.rays().to_vec()).collect(),
        ok,
    })
}

pub fn preimage_check(sigma: &Cone) -> Result<PreimageCheck, ChowError> {
    preimage_check_for(&Fan::from_cone(sigma))
}
