//! Symbolic 4×4 determinant and inverse via 2×2 minors.

use crate::sym::Expr;

pub type ExprMatrix = [[Expr; 4]; 4];

fn minor(a: &Expr, b: &Expr, c: &Expr, d: &Expr) -> Expr {
    &(a * b) - &(c * d)
}

fn lin3(s: [i64; 3], x: [&Expr; 3], y: [&Expr; 3]) -> Expr {
    Expr::sum((0..3).map(|k| {
        let t = x[k] * y[k];
        if s[k] < 0 {
            -t
        } else {
            t
        }
    }))
}

/// Determinant and adjugate (`adj · m = det · I`).
pub fn det_adjugate(m: &ExprMatrix) -> (Expr, ExprMatrix) {
    let a = |i: usize, j: usize| &m[i][j];
    let s0 = minor(a(0, 0), a(1, 1), a(1, 0), a(0, 1));
    let s1 = minor(a(0, 0), a(1, 2), a(1, 0), a(0, 2));
    let s2 = minor(a(0, 0), a(1, 3), a(1, 0), a(0, 3));
    let s3 = minor(a(0, 1), a(1, 2), a(1, 1), a(0, 2));
    let s4 = minor(a(0, 1), a(1, 3), a(1, 1), a(0, 3));
    let s5 = minor(a(0, 2), a(1, 3), a(1, 2), a(0, 3));
    let c5 = minor(a(2, 2), a(3, 3), a(3, 2), a(2, 3));
    let c4 = minor(a(2, 1), a(3, 3), a(3, 1), a(2, 3));
    let c3 = minor(a(2, 1), a(3, 2), a(3, 1), a(2, 2));
    let c2 = minor(a(2, 0), a(3, 3), a(3, 0), a(2, 3));
    let c1 = minor(a(2, 0), a(3, 2), a(3, 0), a(2, 2));
    let c0 = minor(a(2, 0), a(3, 1), a(3, 0), a(2, 1));

    let det = Expr::sum([&s0 * &c5, -(&s1 * &c4), &s2 * &c3, &s3 * &c2, -(&s4 * &c1), &s5 * &c0]);

    let p = [1, -1, 1];
    let n = [-1, 1, -1];
    let adj = [
        [
            lin3(p, [a(1, 1), a(1, 2), a(1, 3)], [&c5, &c4, &c3]),
            lin3(n, [a(0, 1), a(0, 2), a(0, 3)], [&c5, &c4, &c3]),
            lin3(p, [a(3, 1), a(3, 2), a(3, 3)], [&s5, &s4, &s3]),
            lin3(n, [a(2, 1), a(2, 2), a(2, 3)], [&s5, &s4, &s3]),
        ],
        [
            lin3(n, [a(1, 0), a(1, 2), a(1, 3)], [&c5, &c2, &c1]),
            lin3(p, [a(0, 0), a(0, 2), a(0, 3)], [&c5, &c2, &c1]),
            lin3(n, [a(3, 0), a(3, 2), a(3, 3)], [&s5, &s2, &s1]),
            lin3(p, [a(2, 0), a(2, 2), a(2, 3)], [&s5, &s2, &s1]),
        ],
        [
            lin3(p, [a(1, 0), a(1, 1), a(1, 3)], [&c4, &c2, &c0]),
            lin3(n, [a(0, 0), a(0, 1), a(0, 3)], [&c4, &c2, &c0]),
            lin3(p, [a(3, 0), a(3, 1), a(3, 3)], [&s4, &s2, &s0]),
            lin3(n, [a(2, 0), a(2, 1), a(2, 3)], [&s4, &s2, &s0]),
        ],
        [
            lin3(n, [a(1, 0), a(1, 1), a(1, 2)], [&c3, &c1, &c0]),
            lin3(p, [a(0, 0), a(0, 1), a(0, 2)], [&c3, &c1, &c0]),
            lin3(n, [a(3, 0), a(3, 1), a(3, 2)], [&s3, &s1, &s0]),
            lin3(p, [a(2, 0), a(2, 1), a(2, 2)], [&s3, &s1, &s0]),
        ],
    ];
    (det, adj)
}

/// Determinant and inverse `adj / det`.
pub fn det_inverse(m: &ExprMatrix) -> (Expr, ExprMatrix) {
    let (det, adj) = det_adjugate(m);
    let inv_det = det.recip();
    let inv = std::array::from_fn(|i| std::array::from_fn(|j| &adj[i][j] * &inv_det));
    (det, inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sym::{Evaluator, Point};
    use nalgebra::Matrix4;

    #[test]
    fn inverse_matches_numeric() {
        let x = |k| Expr::x(k);
        let m: ExprMatrix = [
            [&x(1) + &Expr::int(3), x(2), Expr::int(1), x(3)],
            [x(4), Expr::int(2), &x(1) * &x(2), Expr::zero()],
            [Expr::ratio(1, 3), x(3), &x(4) + &Expr::int(5), x(1)],
            [x(2), Expr::zero(), Expr::int(-1), &x(1) * &x(1) + Expr::int(2)],
        ];
        let (det, inv) = det_inverse(&m);
        let p = Point::new([0.7, -1.1, 0.4, 2.3]);
        let mut ev = Evaluator::new(&p);
        let num = Matrix4::from_fn(|i, j| ev.eval(&m[i][j]).unwrap().re);
        let d = ev.eval(&det).unwrap().re;
        assert!((d - num.determinant()).abs() < 1e-12 * num.determinant().abs().max(1.0));
        let ninv = num.try_inverse().unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let v = ev.eval(&inv[i][j]).unwrap().re;
                assert!((v - ninv[(i, j)]).abs() < 1e-12, "({i},{j}) {v} vs {}", ninv[(i, j)]);
            }
        }
    }
}
