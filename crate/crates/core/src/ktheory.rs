//! Grothendieck rings of canonical toric stacks as quotients of the group
//! algebra `ℤ[X(G)]`, evaluated on finite boxes of exponents.
//!
//! Exponents are written additively in the normal-form coordinates of
//! `X(G)` (torsion coordinates first). The linear relations `e^v − 1` are
//! absorbed by working in `X(G)` directly; only the Stanley-Reisner products
//! `Π (1 − e_j^{-1})` remain as relations.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use itertools::Itertools;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cox::{cox, CoxData, CoxError};
use crate::fan::{star_quotient_fan, star_subdivision, Fan, FanError};
use crate::lattice::{
    cokernel, in_column_lattice, is_isomorphism, is_well_defined_hom, kernel_basis, to_i64,
    AbelianGroup, GroupSummary, Int, IntMatrix,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KError {
    #[error("box radius {radius} is smaller than the exponent {needed} of a relation")]
    BoxTooSmall { radius: i64, needed: i64 },
    #[error("box radius must be at least 1")]
    RadiusTooSmall,
    #[error("exponent vector has length {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("expected the fan of a single full-dimensional cone")]
    NotAffine,
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Cox(#[from] CoxError),
}

/// Finite ℤ-combination of group elements, terms sorted by exponent.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LaurentElem {
    pub terms: Vec<(Vec<i64>, i64)>,
}

impl LaurentElem {
    fn from_map(m: BTreeMap<Vec<i64>, i64>) -> Self {
        LaurentElem {
            terms: m.into_iter().filter(|(_, c)| *c != 0).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Renders in multiplicative notation with the given stem.
    pub fn render(&self, stem: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, &x)| {
                    if x == 1 {
                        format!("{stem}{}", i + 1)
                    } else {
                        format!("{stem}{}^{x}", i + 1)
                    }
                })
                .collect();
            let a = c.abs();
            let body = match (mono.is_empty(), a == 1) {
                (true, _) => a.to_string(),
                (false, true) => mono.join("*"),
                (false, false) => format!("{a}*{}", mono.join("*")),
            };
            let sign = if *c < 0 { "-" } else { "+" };
            if k == 0 {
                s.push_str(if *c < 0 { "-" } else { "" });
                s.push_str(&body);
            } else {
                s.push_str(&format!(" {sign} {body}"));
            }
        }
        s
    }
}

/// `K⁰(𝒳(Δ)) ≅ ℤ[X(G)] / (Π_{j∈I} (1 − e_j^{-1}) : I primitive)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgebraPresentation {
    pub group: AbelianGroup,
    /// Class of `e_ρ` per ray, in normal-form coordinates.
    pub generator_images: Vec<Vec<i64>>,
    pub ideal_gens: Vec<LaurentElem>,
}

impl GroupAlgebraPresentation {
    fn reduce(&self, e: &mut [i64]) {
        for (x, d) in e.iter_mut().zip(&self.group.torsion) {
            *x = x.rem_euclid(to_i64(d));
        }
    }

    fn torsion_orders(&self) -> Vec<i64> {
        self.group.torsion.iter().map(to_i64).collect()
    }

    /// `Π_{j∈idx} (1 − e_j^{-1})`.
    pub fn collection_class(&self, idx: &[usize]) -> LaurentElem {
        let n = self.group.n_coords();
        let mut acc: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
        acc.insert(vec![0; n], 1);
        for &j in idx {
            let w = &self.generator_images[j];
            let mut next = acc.clone();
            for (e, c) in &acc {
                let mut f: Vec<i64> = e.iter().zip(w).map(|(a, b)| a - b).collect();
                self.reduce(&mut f);
                *next.entry(f).or_insert(0) -= c;
            }
            acc = next;
        }
        LaurentElem::from_map(acc)
    }

    /// Element from `(coefficient, exponents on the rays)` pairs, e.g.
    /// `e_1^2 − 1` as `[(1, [2,0,..]), (-1, [0,..])]`.
    pub fn element_from_rays(&self, terms: &[(i64, Vec<i64>)]) -> Result<LaurentElem, KError> {
        let n = self.group.n_coords();
        let mut acc: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
        for (c, a) in terms {
            if a.len() != self.generator_images.len() {
                return Err(KError::DimensionMismatch {
                    expected: self.generator_images.len(),
                    found: a.len(),
                });
            }
            let mut e = vec![0i64; n];
            for (k, w) in a.iter().zip(&self.generator_images) {
                for (x, y) in e.iter_mut().zip(w) {
                    *x += k * y;
                }
            }
            self.reduce(&mut e);
            *acc.entry(e).or_insert(0) += c;
        }
        Ok(LaurentElem::from_map(acc))
    }
}

pub fn k_ring_stack(f: &Fan) -> Result<GroupAlgebraPresentation, KError> {
    Ok(presentation_of(&cox(f)?))
}

fn presentation_of(cd: &CoxData) -> GroupAlgebraPresentation {
    let generator_images = (0..cd.n_rays())
        .map(|j| cd.weights.column(j).iter().map(to_i64).collect())
        .collect();
    let mut p = GroupAlgebraPresentation {
        group: cd.char_group.clone(),
        generator_images,
        ideal_gens: Vec::new(),
    };
    p.ideal_gens = cd
        .primitive_collections
        .iter()
        .map(|c| p.collection_class(c))
        .collect();
    p
}

/// Group elements with free exponents in `[-r, r]` and any torsion part.
fn box_elements(torsion: &[i64], free_rank: usize, r: i64) -> Vec<Vec<i64>> {
    let ranges: Vec<Vec<i64>> = torsion
        .iter()
        .map(|&d| (0..d).collect())
        .chain((0..free_rank).map(|_| (-r..=r).collect()))
        .collect();
    product(ranges)
}

fn product(ranges: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    if ranges.is_empty() {
        return vec![Vec::new()];
    }
    ranges.into_iter().multi_cartesian_product().collect()
}

struct BoxData {
    elements: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    relations: IntMatrix,
}

fn build_box(p: &GroupAlgebraPresentation, r: i64) -> BoxData {
    let tors = p.torsion_orders();
    let t = tors.len();
    let free = p.group.free_rank;
    let elements = box_elements(&tors, free, r);
    let index: HashMap<Vec<i64>, usize> = elements
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, e)| (e, i))
        .collect();
    let mut cols: Vec<Vec<Int>> = Vec::new();
    for g in &p.ideal_gens {
        for shift in &elements_for_shifts(&tors, free, g, r) {
            let mut col = vec![Int::zero(); elements.len()];
            for (e, c) in &g.terms {
                let mut x: Vec<i64> = e.iter().zip(shift).map(|(a, b)| a + b).collect();
                for (v, d) in x.iter_mut().zip(&tors).take(t) {
                    *v = v.rem_euclid(*d);
                }
                col[index[&x]] += Int::from(*c);
            }
            cols.push(col);
        }
    }
    let relations = IntMatrix::from_columns(elements.len(), &cols);
    BoxData {
        elements,
        index,
        relations,
    }
}

/// Shifts `a` such that every term of `g·e^a` stays in the box of radius `r`.
fn elements_for_shifts(tors: &[i64], free: usize, g: &LaurentElem, r: i64) -> Vec<Vec<i64>> {
    let t = tors.len();
    let ranges = (0..free).map(|k| {
        let lo = g.terms.iter().map(|(e, _)| e[t + k]).min().unwrap_or(0);
        let hi = g.terms.iter().map(|(e, _)| e[t + k]).max().unwrap_or(0);
        (-r - lo..=r - hi).collect::<Vec<_>>()
    });
    let all: Vec<Vec<i64>> = tors
        .iter()
        .map(|&d| (0..d).collect::<Vec<_>>())
        .chain(ranges)
        .collect();
    product(all)
}

/// Lattice `ℤ^W ∩ R` in window coordinates, as columns.
fn window_lattice(b: &BoxData, window: &[Vec<i64>]) -> IntMatrix {
    let w_rows: Vec<usize> = window.iter().map(|e| b.index[e]).collect();
    let w_set: BTreeSet<usize> = w_rows.iter().copied().collect();
    let outside: Vec<usize> = (0..b.elements.len())
        .filter(|i| !w_set.contains(i))
        .collect();
    let m = &b.relations;
    if m.cols() == 0 {
        return IntMatrix::zeros(window.len(), 0);
    }
    let k = if outside.is_empty() {
        IntMatrix::identity(m.cols())
    } else {
        kernel_basis(&m.select_rows(&outside))
    };
    m.select_rows(&w_rows).mul(&k)
}

/// True iff `ℤ^W + R = ℤ^{box}`.
fn window_surjects(b: &BoxData, window: &[Vec<i64>]) -> bool {
    let n = b.elements.len();
    let mut emb = IntMatrix::zeros(n, window.len());
    for (j, e) in window.iter().enumerate() {
        emb[(b.index[e], j)] = Int::from(1);
    }
    cokernel(&emb.hstack(&b.relations)).is_trivial()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxedQuotient {
    #[serde(rename = "box")]
    pub radius: i64,
    pub n_monomials: usize,
    pub n_relations: usize,
    /// Quotient of the whole box.
    pub box_group: GroupSummary,
    /// Quotient of the inner window `[-B+1, B-1]` by the relations it contains.
    pub window_group: GroupSummary,
    pub window_rank: usize,
    pub torsion: Vec<i64>,
    pub stabilized: bool,
}

pub fn boxed_quotient(p: &GroupAlgebraPresentation, radius: i64) -> Result<BoxedQuotient, KError> {
    if radius < 1 {
        return Err(KError::RadiusTooSmall);
    }
    let t = p.group.torsion.len();
    let needed = p
        .ideal_gens
        .iter()
        .flat_map(|g| g.terms.iter())
        .flat_map(|(e, _)| e[t..].iter().map(|x| x.abs()))
        .max()
        .unwrap_or(0);
    if needed > radius {
        return Err(KError::BoxTooSmall { radius, needed });
    }
    let tors = p.torsion_orders();
    let window = box_elements(&tors, p.group.free_rank, radius - 1);
    let b = build_box(p, radius);
    let b1 = build_box(p, radius + 1);
    let lat = window_lattice(&b, &window);
    let lat1 = window_lattice(&b1, &window);
    let same = lat1
        .column_vecs()
        .iter()
        .all(|c| in_column_lattice(&lat, c));
    let stabilized = same && window_surjects(&b, &window) && window_surjects(&b1, &window);
    let window_group = cokernel(&lat).summary();
    Ok(BoxedQuotient {
        radius,
        n_monomials: b.elements.len(),
        n_relations: b.relations.cols(),
        box_group: cokernel(&b.relations).summary(),
        window_rank: window_group.free_rank,
        torsion: window_group.torsion.clone(),
        window_group,
        stabilized,
    })
}

/// Membership of `x` in the relation lattice of the box of the given radius.
/// `false` also when `x` does not fit in the box.
pub fn certify_in_ideal(p: &GroupAlgebraPresentation, radius: i64, x: &LaurentElem) -> bool {
    let b = build_box(p, radius);
    let mut v = vec![Int::zero(); b.elements.len()];
    for (e, c) in &x.terms {
        match b.index.get(e) {
            Some(&i) => v[i] += Int::from(*c),
            None => return false,
        }
    }
    if b.relations.cols() == 0 {
        return v.iter().all(Zero::is_zero);
    }
    in_column_lattice(&b.relations, &v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KComparison {
    #[serde(rename = "box")]
    pub radius: i64,
    /// `X(G') → X(G)` induced by `e_i ↦ e_i` is a well-defined isomorphism.
    pub characters_iso: bool,
    /// The exceptional ideal generators map onto those of `𝒳(σ*)`.
    pub generators_match: bool,
    pub subdivision: BoxedQuotient,
    pub exceptional: BoxedQuotient,
    pub matched: bool,
    pub stabilized: bool,
}

impl KComparison {
    pub fn iso_on_window(&self) -> bool {
        self.matched && self.stabilized
    }
}

struct KPipeline {
    star_cox: CoxData,
    e_cox: CoxData,
    correspondence: Vec<Option<usize>>,
}

fn k_pipeline(f: &Fan) -> Result<KPipeline, KError> {
    if f.maximal_cones().len() != 1 {
        return Err(KError::NotAffine);
    }
    let sigma = f.cone(&f.maximal_cones()[0]);
    if sigma.dim() != f.ambient_rank() {
        return Err(KError::NotAffine);
    }
    let star = star_subdivision(f, &sigma)?;
    let v = star
        .ray_index(&sigma.star_vector()?)
        .expect("star vector is a ray");
    let q = star_quotient_fan(&star, v)?;
    Ok(KPipeline {
        star_cox: cox(&star)?,
        e_cox: cox(&q.fan)?,
        correspondence: q.correspondence,
    })
}

pub fn k_exceptional_comparison(f: &Fan, radius: i64) -> Result<KComparison, KError> {
    let p = k_pipeline(f)?;
    let src = presentation_of(&p.star_cox);
    let tgt = presentation_of(&p.e_cox);
    let g = &p.star_cox.char_group;
    let h = &p.e_cox.char_group;

    // Φ on normal-form coordinates: lift, relabel rays, project.
    let back: HashMap<usize, usize> = p
        .correspondence
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.map(|j| (j, i)))
        .collect();
    let cols: Vec<Vec<Int>> = (0..h.n_coords())
        .map(|j| {
            let lift = h.section.column(j);
            let mut v = vec![Int::zero(); p.star_cox.n_rays()];
            for (k, x) in lift.iter().enumerate() {
                v[back[&k]] += x;
            }
            g.project(&v)
        })
        .collect();
    let phi = IntMatrix::from_columns(g.n_coords(), &cols);
    let characters_iso = is_well_defined_hom(h, g, &phi) && is_isomorphism(h, g, &phi);

    let mapped: BTreeSet<LaurentElem> = tgt
        .ideal_gens
        .iter()
        .map(|x| {
            let mut m = BTreeMap::new();
            for (e, c) in &x.terms {
                let mut y: Vec<i64> = phi
                    .mul_vec(&crate::lattice::ints(e))
                    .iter()
                    .map(to_i64)
                    .collect();
                src.reduce(&mut y);
                *m.entry(y).or_insert(0) += c;
            }
            LaurentElem::from_map(m)
        })
        .collect();
    let own: BTreeSet<LaurentElem> = src.ideal_gens.iter().cloned().collect();
    let generators_match = characters_iso && mapped == own;

    let subdivision = boxed_quotient(&src, radius)?;
    let exceptional = boxed_quotient(&tgt, radius)?;
    let stabilized = subdivision.stabilized && exceptional.stabilized;
    let matched = generators_match && subdivision.window_group == exceptional.window_group;
    Ok(KComparison {
        radius,
        characters_iso,
        generators_match,
        subdivision,
        exceptional,
        matched,
        stabilized,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KVanishingReport {
    pub cone: Vec<Vec<i64>>,
    pub comparison: KComparison,
    pub torsion_free: bool,
    /// `None` when the boxed computation did not stabilize.
    pub conclusion: Option<bool>,
}

pub fn verify_k_vanishing(f: &Fan, radius: i64) -> Result<KVanishingReport, KError> {
    let comparison = k_exceptional_comparison(f, radius)?;
    let torsion_free = comparison.subdivision.torsion.is_empty();
    let conclusion = if comparison.stabilized {
        Some(comparison.matched && torsion_free)
    } else {
        None
    };
    Ok(KVanishingReport {
        cone: f.rays().to_vec(),
        comparison,
        torsion_free,
        conclusion,
    })
}
