use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::complex::Fan;
use super::cone::Cone;
use super::{pair, rows_matrix, FanError};
use crate::lattice::{dot, kernel_basis, solve_in_span, to_i64, Int, IntMatrix};

/// Data for one relation term `⟨u, n_{σ,τ}⟩ [V(σ)]` with `τ` a facet of `σ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRelationDatum {
    pub tau: Cone,
    pub sigma: Cone,
    /// Ray indices of `σ` in the fan.
    pub sigma_index: Vec<usize>,
    /// Basis of `M(τ) = τ^⊥ ∩ M`.
    pub m_tau_basis: Vec<Vec<i64>>,
    /// A lattice point of `N_σ` whose class generates `N_σ / N_τ`, pointing into `σ`.
    pub n_gen: Vec<i64>,
}

fn perp_basis(n: usize, vs: &[Vec<i64>]) -> IntMatrix {
    if vs.is_empty() {
        IntMatrix::identity(n)
    } else {
        kernel_basis(&rows_matrix(n, &vs.iter().collect::<Vec<_>>()))
    }
}

/// Basis (as columns) of the saturated lattice `span(vs) ∩ N`.
fn saturation(n: usize, vs: &[Vec<i64>]) -> IntMatrix {
    let perp = perp_basis(n, vs);
    if perp.cols() == 0 {
        IntMatrix::identity(n)
    } else {
        kernel_basis(&perp.transpose())
    }
}

pub fn orbit_relation_data(f: &Fan, tau: &Cone) -> Result<Vec<OrbitRelationDatum>, FanError> {
    let t = f.index_of(tau).ok_or(FanError::ConeNotInFan)?;
    let n = f.ambient_rank();
    let d = f.cone_dim(&t).expect("cone of fan");
    let m_tau = perp_basis(n, tau.rays());
    let m_tau_basis: Vec<Vec<i64>> = m_tau
        .column_vecs()
        .iter()
        .map(|c| c.iter().map(to_i64).collect())
        .collect();

    let mut out = Vec::new();
    for s in f.cones_of_dim(d + 1) {
        if !t.iter().all(|i| s.contains(i)) {
            continue;
        }
        let sigma = f.cone(&s);
        let extra = s
            .iter()
            .copied()
            .find(|i| !t.contains(i))
            .expect("σ has a ray outside τ");
        let w = &f.rays()[extra];
        // a functional on N_σ with kernel N_τ
        let ell = m_tau
            .column_vecs()
            .into_iter()
            .find(|u| !pair(u, w).is_zero())
            .expect("M(τ) detects the extra ray");
        let basis = saturation(n, sigma.rays());
        let values: Vec<Int> = basis.column_vecs().iter().map(|b| dot(&ell, b)).collect();
        let g = values.iter().fold(Int::zero(), |g, x| g.gcd(x));
        let row = IntMatrix::from_rows(values.len(), &[values]);
        let c = solve_in_span(&row, &[g])
            .expect("shapes agree")
            .expect("gcd is attained");
        let mut x = basis.mul_vec(&c);
        if (dot(&ell, &x) * pair(&ell, w)).is_negative() {
            x = x.iter().map(|v| -v).collect();
        }
        out.push(OrbitRelationDatum {
            tau: tau.clone(),
            sigma,
            sigma_index: s.clone(),
            m_tau_basis: m_tau_basis.clone(),
            n_gen: x.iter().map(to_i64).collect(),
        });
    }
    Ok(out)
}

/// Matrix with rows indexed by the `M(τ)` basis and columns by the data:
/// entry `⟨u_i, n_{σ_j,τ}⟩`.
pub fn orbit_relation_matrix(data: &[OrbitRelationDatum]) -> IntMatrix {
    let Some(first) = data.first() else {
        return IntMatrix::zeros(0, 0);
    };
    let rows: Vec<Vec<Int>> = first
        .m_tau_basis
        .iter()
        .map(|u| {
            let u: Vec<Int> = u.iter().map(|&x| Int::from(x)).collect();
            data.iter().map(|d| pair(&u, &d.n_gen)).collect()
        })
        .collect();
    IntMatrix::from_rows(data.len(), &rows)
}
