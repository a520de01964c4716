//! Differential forms in the coordinate basis `dx1..dx4`.
//!
//! A k-form stores one component per strictly increasing index tuple, so
//! antisymmetry holds by construction. Components follow the convention
//! `ω = Σ_{I increasing} ω_I dx^I`, hence `(α∧β)_{ab} = α_a β_b − α_b β_a` for
//! one-forms.

use std::fmt;

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::sym::{Coordinate, Differentiator, EvalError, Evaluator, Expr};

use super::GeometryError;

/// Increasing index tuples of length `k` over `0..4`, in lexicographic order.
pub fn index_tuples(k: usize) -> &'static [&'static [usize]] {
    const T0: &[&[usize]] = &[&[]];
    const T1: &[&[usize]] = &[&[0], &[1], &[2], &[3]];
    const T2: &[&[usize]] = &[&[0, 1], &[0, 2], &[0, 3], &[1, 2], &[1, 3], &[2, 3]];
    const T3: &[&[usize]] = &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]];
    const T4: &[&[usize]] = &[&[0, 1, 2, 3]];
    match k {
        0 => T0,
        1 => T1,
        2 => T2,
        3 => T3,
        4 => T4,
        _ => &[],
    }
}

fn tuple_position(k: usize, sorted: &[usize]) -> usize {
    index_tuples(k)
        .iter()
        .position(|t| *t == sorted)
        .expect("sorted tuple is listed")
}

/// Sort `indices`, returning the permutation sign, or `None` on a repeat.
fn sort_with_sign(indices: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut v = indices.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return None;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

#[derive(Clone, Debug, PartialEq)]
pub struct KForm {
    degree: usize,
    comps: Vec<Expr>,
}

impl KForm {
    pub fn zero(degree: usize) -> Self {
        assert!(degree <= 4, "form degree {degree} exceeds dimension 4");
        KForm {
            degree,
            comps: vec![Expr::zero(); index_tuples(degree).len()],
        }
    }

    pub fn scalar(f: Expr) -> Self {
        KForm {
            degree: 0,
            comps: vec![f],
        }
    }

    pub fn one_form(c: [Expr; 4]) -> Self {
        KForm {
            degree: 1,
            comps: c.to_vec(),
        }
    }

    /// `dx^{slot+1}`
    pub fn dx(slot: usize) -> Self {
        let mut c: [Expr; 4] = std::array::from_fn(|_| Expr::zero());
        c[slot] = Expr::one();
        KForm::one_form(c)
    }

    /// Build from components listed in `index_tuples(degree)` order.
    pub fn from_components(degree: usize, comps: Vec<Expr>) -> Self {
        assert_eq!(
            comps.len(),
            index_tuples(degree).len(),
            "component count for degree {degree}"
        );
        KForm { degree, comps }
    }

    /// Two-form from the upper triangle of an antisymmetric matrix.
    pub fn two_form_from_matrix(m: &[[Expr; 4]; 4]) -> Self {
        let comps = index_tuples(2).iter().map(|t| m[t[0]][t[1]].clone()).collect();
        KForm { degree: 2, comps }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> &[Expr] {
        &self.comps
    }

    /// Component with arbitrary (possibly unsorted) indices; antisymmetric.
    pub fn component(&self, indices: &[usize]) -> Expr {
        assert_eq!(indices.len(), self.degree);
        match sort_with_sign(indices) {
            None => Expr::zero(),
            Some((sorted, sign)) => {
                let c = &self.comps[tuple_position(self.degree, &sorted)];
                if sign < 0 {
                    -c
                } else {
                    c.clone()
                }
            }
        }
    }

    /// Full antisymmetric 4×4 matrix of a two-form.
    pub fn matrix(&self) -> [[Expr; 4]; 4] {
        assert_eq!(self.degree, 2, "matrix() needs a two-form");
        std::array::from_fn(|a| std::array::from_fn(|b| self.component(&[a, b])))
    }

    pub fn is_literal_zero(&self) -> bool {
        self.comps.iter().all(Expr::is_zero)
    }

    pub fn map(&self, f: impl Fn(&Expr) -> Expr) -> Self {
        KForm {
            degree: self.degree,
            comps: self.comps.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, s: &Expr) -> Self {
        self.map(|c| c * s)
    }

    pub fn conj(&self) -> Self {
        self.map(Expr::conj)
    }

    pub fn add(&self, other: &KForm) -> Self {
        assert_eq!(self.degree, other.degree);
        KForm {
            degree: self.degree,
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &KForm) -> Self {
        assert_eq!(self.degree, other.degree);
        KForm {
            degree: self.degree,
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn wedge(&self, other: &KForm) -> Self {
        let p = self.degree;
        let q = other.degree;
        assert!(p + q <= 4, "wedge degree {} exceeds 4", p + q);
        let comps = index_tuples(p + q)
            .iter()
            .map(|tuple| {
                let mut parts = Vec::new();
                for left in index_tuples(p) {
                    if !left.iter().all(|i| tuple.contains(i)) {
                        continue;
                    }
                    let right: Vec<usize> = tuple.iter().copied().filter(|i| !left.contains(i)).collect();
                    let mut joined = left.to_vec();
                    joined.extend_from_slice(&right);
                    let (_, sign) = sort_with_sign(&joined).expect("disjoint split");
                    let term = &self.component(left) * &other.component(&right);
                    parts.push(if sign < 0 { -term } else { term });
                }
                Expr::sum(parts)
            })
            .collect();
        KForm { degree: p + q, comps }
    }

    /// Exterior derivative `d`.
    pub fn exterior_derivative(&self, diff: &mut Differentiator) -> Result<KForm, GeometryError> {
        if self.degree >= 4 {
            return Err(GeometryError::TopDegree);
        }
        let k = self.degree + 1;
        let comps = index_tuples(k)
            .iter()
            .map(|tuple| {
                let mut parts = Vec::with_capacity(k);
                for (j, &c) in tuple.iter().enumerate() {
                    let rest: Vec<usize> = tuple.iter().copied().filter(|&i| i != c).collect();
                    let d = diff.d(&self.component(&rest), Coordinate::from_slot(c));
                    parts.push(if j % 2 == 1 { -d } else { d });
                }
                Expr::sum(parts)
            })
            .collect();
        Ok(KForm { degree: k, comps })
    }

    pub fn eval(&self, ev: &mut Evaluator<'_>) -> Result<Vec<Complex64>, EvalError> {
        self.comps.iter().map(|c| ev.eval(c)).collect()
    }

    /// Numeric antisymmetric matrix of a two-form.
    pub fn eval_matrix(&self, ev: &mut Evaluator<'_>) -> Result<Matrix4<Complex64>, EvalError> {
        assert_eq!(self.degree, 2);
        let vals = self.eval(ev)?;
        let mut m = Matrix4::zeros();
        for (t, v) in index_tuples(2).iter().zip(vals) {
            m[(t[0], t[1])] = v;
            m[(t[1], t[0])] = -v;
        }
        Ok(m)
    }
}

/// Exterior derivative of `w`.
pub fn exterior_derivative(w: &KForm) -> Result<KForm, GeometryError> {
    w.exterior_derivative(&mut Differentiator::new())
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (t, c) in index_tuples(self.degree).iter().zip(&self.comps) {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (n, i) in t.iter().enumerate() {
                write!(f, "{}dx{}", if n == 0 { " " } else { "^" }, i + 1)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
