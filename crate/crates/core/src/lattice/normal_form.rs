use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{Int, IntMatrix};
use super::LatticeError;

/// Row Hermite normal form.
///
/// Returns `(h, u)` with `u` unimodular and `u·m = h`. `h` is in row echelon
/// form, every pivot is positive and the entries above a pivot lie in
/// `[0, pivot)`.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (rows, cols) = m.shape();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut p = 0;
    for col in 0..cols {
        if p == rows {
            break;
        }
        loop {
            let best = (p..rows)
                .filter(|&r| !h[(r, col)].is_zero())
                .min_by(|&a, &b| h[(a, col)].abs().cmp(&h[(b, col)].abs()));
            let Some(best) = best else { break };
            h.swap_rows(best, p);
            u.swap_rows(best, p);
            let mut reduced = true;
            for r in p + 1..rows {
                if h[(r, col)].is_zero() {
                    continue;
                }
                let q = &h[(r, col)] / &h[(p, col)];
                let neg = -q;
                h.add_row_multiple(r, p, &neg);
                u.add_row_multiple(r, p, &neg);
                if !h[(r, col)].is_zero() {
                    reduced = false;
                }
            }
            if reduced {
                break;
            }
        }
        if h[(p, col)].is_zero() {
            continue;
        }
        if h[(p, col)].is_negative() {
            h.negate_row(p);
            u.negate_row(p);
        }
        for r in 0..p {
            let q = h[(r, col)].div_floor(&h[(p, col)]);
            if !q.is_zero() {
                let neg = -q;
                h.add_row_multiple(r, p, &neg);
                u.add_row_multiple(r, p, &neg);
            }
        }
        p += 1;
    }
    (h, u)
}

/// Number of non-zero rows of a row-echelon matrix.
fn echelon_rank(h: &IntMatrix) -> usize {
    (0..h.rows())
        .take_while(|&i| h.row(i).iter().any(|x| !x.is_zero()))
        .count()
}

pub fn rank(m: &IntMatrix) -> usize {
    echelon_rank(&hnf(m).0)
}

/// Smith normal form `u·m·v = d`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Non-zero diagonal entries, in order; each divides the next.
    pub fn invariant_factors(&self) -> Vec<Int> {
        let k = self.d.rows().min(self.d.cols());
        (0..k)
            .map(|i| self.d[(i, i)].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }
}

fn is_diagonal(m: &IntMatrix) -> bool {
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| i == j || m[(i, j)].is_zero()))
}

/// Smith normal form by alternating row and column Hermite reduction, then
/// gcd/lcm merging of diagonal pairs to obtain the divisibility chain.
pub fn snf(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = m.shape();
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    // Column operations are tracked on vᵀ as row operations.
    let mut vt = IntMatrix::identity(cols);
    loop {
        let (h, t) = hnf(&d);
        d = h;
        u = t.mul(&u);
        if is_diagonal(&d) {
            break;
        }
        let (h, t) = hnf(&d.transpose());
        d = h.transpose();
        vt = t.mul(&vt);
        if is_diagonal(&d) {
            break;
        }
    }

    let k = (0..rows.min(cols))
        .take_while(|&i| !d[(i, i)].is_zero())
        .count();
    for i in 0..k {
        for j in i + 1..k {
            let a = d[(i, i)].clone();
            let b = d[(j, j)].clone();
            if b.is_multiple_of(&a) {
                continue;
            }
            let eg = a.extended_gcd(&b);
            let g = eg.gcd;
            // col_i += col_j
            vt.add_row_multiple(i, j, &Int::one());
            // (row_i, row_j) <- (x row_i + y row_j, -(b/g) row_i + (a/g) row_j)
            let r = -(&b / &g);
            let s = &a / &g;
            u.combine_rows(i, j, &eg.x, &eg.y, &r, &s);
            // col_j -= (y b / g) col_i
            let c = -(&eg.y * &b / &g);
            vt.add_row_multiple(j, i, &c);
            d[(i, i)] = g.clone();
            d[(j, j)] = &a * &b / &g;
        }
    }
    SmithForm {
        d,
        u,
        v: vt.transpose(),
    }
}

/// Canonical basis of the row lattice of `m`: the non-zero rows of its HNF.
pub fn row_lattice_basis(m: &IntMatrix) -> IntMatrix {
    let (h, _) = hnf(m);
    let r = echelon_rank(&h);
    h.select_rows(&(0..r).collect::<Vec<_>>())
}

/// Columns form a ℤ-basis of `{x : m·x = 0}`, in canonical (HNF) form.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let c = m.cols();
    let (h, u) = hnf(&m.transpose());
    let r = echelon_rank(&h);
    let raw = u.select_rows(&(r..c).collect::<Vec<_>>());
    row_lattice_basis(&raw).transpose()
}

/// Some `x` with `m·x = b`, or `None` if `b` is not in the column lattice of
/// `m`. The result is a deterministic function of `(m, b)`.
pub fn solve_in_span(m: &IntMatrix, b: &[Int]) -> Result<Option<Vec<Int>>, LatticeError> {
    if b.len() != m.rows() {
        return Err(LatticeError::DimensionMismatch {
            expected: m.rows(),
            found: b.len(),
        });
    }
    let (h, u) = hnf(&m.transpose());
    let r = echelon_rank(&h);
    let mut y = vec![Int::zero(); m.cols()];
    for i in 0..r {
        let p = (0..h.cols())
            .find(|&j| !h[(i, j)].is_zero())
            .expect("echelon row has a pivot");
        let mut rhs = b[p].clone();
        for (k, yk) in y.iter().enumerate().take(i) {
            rhs -= &h[(k, p)] * yk;
        }
        let (q, rem) = rhs.div_rem(&h[(i, p)]);
        if !rem.is_zero() {
            return Ok(None);
        }
        y[i] = q;
    }
    // m·uᵀ = hᵀ, so check hᵀ·y = b on every row.
    let ht = h.transpose();
    if ht.mul_vec(&y) != b {
        return Ok(None);
    }
    Ok(Some(u.transpose().mul_vec(&y)))
}

pub fn in_column_lattice(m: &IntMatrix, v: &[Int]) -> bool {
    matches!(solve_in_span(m, v), Ok(Some(_)))
}

/// True iff the column lattices of `a` and `b` coincide.
pub fn same_column_lattice(a: &IntMatrix, b: &IntMatrix) -> bool {
    a.rows() == b.rows() && row_lattice_basis(&a.transpose()) == row_lattice_basis(&b.transpose())
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(u: &IntMatrix) -> IntMatrix {
    let (h, t) = hnf(u);
    assert!(
        h == IntMatrix::identity(u.rows()),
        "matrix is not unimodular"
    );
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows.first().map_or(0, Vec::len), rows)
    }

    #[test]
    fn hnf_small_example() {
        let a = m(&[vec![2, 4], vec![1, 3]]);
        let (h, u) = hnf(&a);
        assert_eq!(h, m(&[vec![1, 1], vec![0, 2]]));
        assert_eq!(u.mul(&a), h);
        assert!(u.is_unimodular());
    }

    #[test]
    fn hnf_of_zero_and_identity() {
        let z = IntMatrix::zeros(2, 2);
        let (h, u) = hnf(&z);
        assert_eq!(h, z);
        assert_eq!(u, IntMatrix::identity(2));
        let id = IntMatrix::identity(4);
        let (h, u) = hnf(&id);
        assert_eq!(h, id);
        assert_eq!(u, id);
    }

    #[test]
    fn snf_examples() {
        let a = m(&[vec![2, 4], vec![1, 3]]);
        let s = snf(&a);
        assert_eq!(s.invariant_factors(), vec![Int::from(1), Int::from(2)]);
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);

        let rel = m(&[vec![1, 0, -1, 0], vec![0, -1, 0, 1], vec![1, 1, 1, 1]]);
        let s = snf(&rel);
        assert_eq!(
            s.invariant_factors(),
            vec![Int::from(1), Int::from(1), Int::from(2)]
        );
        assert_eq!(s.d.shape(), (3, 4));
        assert_eq!(s.u.mul(&rel).mul(&s.v), s.d);

        let z = IntMatrix::zeros(3, 2);
        assert!(snf(&z).d.is_zero());
    }

    #[test]
    fn snf_needs_divisibility_fix() {
        let a = IntMatrix::diagonal(&[Int::from(6), Int::from(4)]);
        let s = snf(&a);
        assert_eq!(s.invariant_factors(), vec![Int::from(2), Int::from(12)]);
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
    }

    #[test]
    fn kernel_of_square_cone_rays() {
        // rays as columns
        let beta = m(&[vec![1, 0, -1, 0], vec![0, -1, 0, 1], vec![1, 1, 1, 1]]);
        let k = kernel_basis(&beta);
        assert_eq!(k.shape(), (4, 1));
        let col = k.column(0);
        let expected: Vec<Int> = [1, -1, 1, -1].iter().map(|&x| Int::from(x)).collect();
        let negated: Vec<Int> = expected.iter().map(|x| -x).collect();
        assert!(col == expected || col == negated);
    }

    #[test]
    fn kernel_trivial_cases() {
        assert_eq!(kernel_basis(&IntMatrix::identity(3)).cols(), 0);
        assert_eq!(
            kernel_basis(&IntMatrix::zeros(1, 3)),
            IntMatrix::identity(3)
        );
    }

    #[test]
    fn solve_in_span_strongness_weights() {
        let w = m(&[vec![3, -2], vec![2, -3]]);
        let one = [Int::from(0), Int::from(1)];
        assert_eq!(solve_in_span(&w, &one).unwrap(), None);
        let fifteen = [Int::from(0), Int::from(15)];
        let x = solve_in_span(&w, &fifteen).unwrap().unwrap();
        assert_eq!(x, vec![Int::from(-6), Int::from(-9)]);
        let zero = [Int::from(0), Int::from(0)];
        assert_eq!(
            solve_in_span(&w, &zero).unwrap().unwrap(),
            vec![Int::from(0), Int::from(0)]
        );
        assert!(matches!(
            solve_in_span(&w, &[Int::from(1)]),
            Err(LatticeError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn unimodular_inverse_roundtrip() {
        let u = m(&[vec![2, 1], vec![1, 1]]);
        let inv = unimodular_inverse(&u);
        assert_eq!(inv.mul(&u), IntMatrix::identity(2));
    }

    #[test]
    fn determinant_bareiss() {
        let a = m(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]);
        assert_eq!(a.determinant(), Int::from(6));
        assert_eq!(m(&[vec![0, 1], vec![1, 0]]).determinant(), Int::from(-1));
    }
}
