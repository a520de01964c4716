//! Nijenhuis tensor of an almost-complex structure.

use crate::geometry::Rank3;
use crate::sym::{Coordinate, Differentiator, EvalError, Evaluator, Expr, Point};

use super::structure::AlmostComplexStructure;

/// `N^a_{bc}`, antisymmetric in `(b, c)` by construction.
#[derive(Clone, Debug)]
pub struct NijenhuisField {
    comps: Rank3,
}

impl NijenhuisField {
    pub fn get(&self, a: usize, b: usize, c: usize) -> &Expr {
        &self.comps[a][b][c]
    }

    pub fn components(&self) -> &Rank3 {
        &self.comps
    }

    pub fn is_literal_zero(&self) -> bool {
        self.comps.iter().flatten().flatten().all(Expr::is_zero)
    }

    /// Largest `|N^a_{bc}|` at `p`.
    pub fn max_abs_at(&self, p: &Point) -> Result<f64, EvalError> {
        let mut ev = Evaluator::new(p);
        let mut worst: f64 = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                for c in (b + 1)..4 {
                    worst = worst.max(ev.eval(&self.comps[a][b][c])?.norm());
                }
            }
        }
        Ok(worst)
    }

    /// Largest `|N^a_{bc}|` over `points`.
    pub fn max_abs(&self, points: &[Point]) -> Result<f64, EvalError> {
        points.iter().try_fold(0.0f64, |m, p| Ok(m.max(self.max_abs_at(p)?)))
    }
}

/// `N^a_{bc} = J^d_b ∂_d J^a_c − J^d_c ∂_d J^a_b − J^a_d(∂_b J^d_c − ∂_c J^d_b)`.
pub fn nijenhuis_tensor(j: &AlmostComplexStructure) -> NijenhuisField {
    let mut diff = Differentiator::new();
    let jc = j.components();
    // dj[d][a][b] = ∂_d J^a_b
    let dj: Vec<Vec<Vec<Expr>>> = (0..4)
        .map(|d| {
            (0..4)
                .map(|a| (0..4).map(|b| diff.d(&jc[a][b], Coordinate::from_slot(d))).collect())
                .collect()
        })
        .collect();
    let prod = |x: &Expr, y: &Expr| {
        if x.is_zero() || y.is_zero() {
            Expr::zero()
        } else {
            x * y
        }
    };
    let upper: Vec<Vec<Vec<Expr>>> = (0..4)
        .map(|a| {
            (0..4)
                .map(|b| {
                    (0..4)
                        .map(|c| {
                            if c <= b {
                                return Expr::zero();
                            }
                            let mut parts = Vec::new();
                            for d in 0..4 {
                                parts.push(prod(&jc[d][b], &dj[d][a][c]));
                                parts.push(-prod(&jc[d][c], &dj[d][a][b]));
                                let bracket = &dj[b][d][c] - &dj[c][d][b];
                                parts.push(-prod(&jc[a][d], &bracket));
                            }
                            Expr::sum(parts)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let comps = std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            std::array::from_fn(|c| {
                if b < c {
                    upper[a][b][c].clone()
                } else if c < b {
                    -&upper[a][c][b]
                } else {
                    Expr::zero()
                }
            })
        })
    });
    NijenhuisField { comps }
}
