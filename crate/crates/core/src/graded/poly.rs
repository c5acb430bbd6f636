use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::lattice::Int;

pub type Monomial = Vec<u32>;

/// Sparse polynomial over ℤ in a fixed number of variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    n_vars: usize,
    terms: BTreeMap<Monomial, Int>,
}

impl Poly {
    pub fn zero(n_vars: usize) -> Poly {
        Poly {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_vars: usize, c: Int) -> Poly {
        let mut p = Poly::zero(n_vars);
        p.add_term(vec![0; n_vars], c);
        p
    }

    pub fn one(n_vars: usize) -> Poly {
        Poly::constant(n_vars, Int::one())
    }

    pub fn var(n_vars: usize, i: usize) -> Poly {
        let mut e = vec![0; n_vars];
        e[i] = 1;
        Poly::monomial(e, Int::one())
    }

    pub fn monomial(exps: Monomial, c: Int) -> Poly {
        let mut p = Poly::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    /// The linear form `Σ a_i t_i`.
    pub fn linear<T: Clone + Into<Int>>(coeffs: &[T]) -> Poly {
        let n = coeffs.len();
        let mut p = Poly::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone().into());
        }
        p
    }

    /// `Π_{i∈idx} t_i`.
    pub fn product_of_vars(n_vars: usize, idx: &[usize]) -> Poly {
        let mut e = vec![0; n_vars];
        for &i in idx {
            e[i] += 1;
        }
        Poly::monomial(e, Int::one())
    }

    pub fn from_terms(n_vars: usize, terms: impl IntoIterator<Item = (Monomial, Int)>) -> Poly {
        let mut p = Poly::zero(n_vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Int> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &[u32]) -> Int {
        self.terms.get(m).cloned().unwrap_or_else(Int::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Int) {
        assert_eq!(
            m.len(),
            self.n_vars,
            "monomial has wrong number of variables"
        );
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `Some(d)` if every term has degree `d`; the zero polynomial is
    /// homogeneous of every degree and returns `None`.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(|m| deg(m));
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    pub fn is_homogeneous_of(&self, d: usize) -> bool {
        self.terms.keys().all(|m| deg(m) == d)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.n_vars, other.n_vars);
        let mut p = self.clone();
        for (m, c) in &other.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    pub fn scale(&self, k: &Int) -> Poly {
        if k.is_zero() {
            return Poly::zero(self.n_vars);
        }
        Poly {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-Int::one())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.n_vars, other.n_vars);
        let mut p = Poly::zero(self.n_vars);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let m: Monomial = a.iter().zip(b).map(|(i, j)| i + j).collect();
                p.add_term(m, x * y);
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one(self.n_vars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Replaces variable `i` by `forms[i]`; all forms share a target ring.
    pub fn substitute(&self, forms: &[Poly]) -> Poly {
        assert_eq!(forms.len(), self.n_vars, "one form per variable");
        let target = forms.first().map_or(0, Poly::n_vars);
        let mut out = Poly::zero(target);
        let mut powers: BTreeMap<(usize, u32), Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = powers
                    .entry((i, e))
                    .or_insert_with(|| forms[i].pow(e))
                    .clone();
                t = t.mul(&p);
            }
            out = out.add(&t);
        }
        out
    }
}

pub fn deg(m: &[u32]) -> usize {
    m.iter().map(|&e| e as usize).sum()
}

/// All monomials of degree `k` in `n` variables, graded-lex descending
/// (`t_1^k` first).
pub fn monomials(n: usize, k: usize) -> Vec<Monomial> {
    fn rec(n: usize, k: usize, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == n {
            prefix.push(k as u32);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=k).rev() {
            prefix.push(e as u32);
            rec(n, k - e, prefix, out);
            prefix.pop();
        }
    }
    if n == 0 {
        return if k == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    rec(n, k, &mut Vec::new(), &mut out);
    out
}

impl Poly {
    /// Renders with the given variable stem, e.g. `s` gives `2*s1*s2^2 - s3`.
    pub fn render(&self, stem: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("{stem}{}", i + 1)
                    } else {
                        format!("{stem}{}^{e}", i + 1)
                    }
                })
                .collect();
            let a = c.abs();
            let body = match (mono.is_empty(), a.is_one()) {
                (true, _) => a.to_string(),
                (false, true) => mono.join("*"),
                (false, false) => format!("{a}*{}", mono.join("*")),
            };
            match (k, c.is_negative()) {
                (0, true) => s.push_str(&format!("-{body}")),
                (0, false) => s.push_str(&body),
                (_, true) => s.push_str(&format!(" - {body}")),
                (_, false) => s.push_str(&format!(" + {body}")),
            }
        }
        s
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("t"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomials(3, 0), vec![vec![0, 0, 0]]);
        assert_eq!(monomials(4, 3).len(), 20);
        assert_eq!(monomials(0, 0).len(), 1);
        assert!(monomials(0, 1).is_empty());
    }

    #[test]
    fn arithmetic() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let s = x.add(&y);
        let sq = s.mul(&s);
        assert_eq!(sq.coeff(&[1, 1]), Int::from(2));
        assert_eq!(sq.homogeneous_degree(), Some(2));
        assert!(s.sub(&s).is_zero());
        assert_eq!(s.pow(3).terms().len(), 4);
        assert_eq!(x.sub(&y).render("s"), "s1 - s2");
        assert_eq!(Poly::zero(2).homogeneous_degree(), None);
    }

    #[test]
    fn substitution() {
        // t1*t2 with t1 -> z1 + z2, t2 -> z1 - z2 gives z1^2 - z2^2
        let p = Poly::product_of_vars(2, &[0, 1]);
        let forms = vec![Poly::linear(&[1, 1]), Poly::linear(&[1, -1])];
        let q = p.substitute(&forms);
        assert_eq!(
            q,
            Poly::from_terms(2, [(vec![2, 0], Int::from(1)), (vec![0, 2], Int::from(-1))])
        );
    }
}
