//! Przanowski's type-D ansatz generated by one real potential `K(v, z₂, z̄₂)`.

use crate::domain::DomainSpec;
use crate::geometry::MetricField;
use crate::sym::{
    probable_zero, u, CRational, Coordinate, Differentiator, Evaluator, Expr, Point, DEFAULT_SEED, DEFAULT_ZERO_TOL,
};

use super::fh::{dz1, dz1b, dz2, dz2b, lin};
use super::ConstructionError;

/// Potential `K` with the sign `ε` and the region where it is meant to be used.
#[derive(Clone, Debug)]
pub struct PrzanowskiData {
    k: Expr,
    epsilon: i8,
    domain: DomainSpec,
}

/// The derivatives of `K` that enter the ansatz, with `∂_v = ½∂_{x¹}`.
#[derive(Clone, Debug)]
struct Derivatives {
    kv: Expr,
    kvv: Expr,
    kv2: Expr,
    kv2b: Expr,
    k22b: Expr,
}

/// Outcome of the sign conditions `K_v > 0`, `εK_vv > 0` over a point set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Admissibility {
    pub min_kv: f64,
    pub min_eps_kvv: f64,
}

impl Admissibility {
    pub fn holds(&self) -> bool {
        self.min_kv > 0.0 && self.min_eps_kvv > 0.0
    }
}

impl PrzanowskiData {
    /// Checks that `K` is real and independent of `x²` by sampling `domain`.
    pub fn new(k: Expr, epsilon: i8, domain: DomainSpec) -> Result<Self, ConstructionError> {
        assert!(epsilon == 1 || epsilon == -1, "ε must be ±1");
        let dx2 = Differentiator::new().d(&k, Coordinate::from_slot(1));
        if !dx2.is_zero() {
            let v = probable_zero(&dx2, &domain, 20, DEFAULT_SEED, DEFAULT_ZERO_TOL)?;
            if !v.is_zero {
                return Err(ConstructionError::Dependence {
                    what: "K",
                    coordinate: "x2 = Im z1",
                });
            }
        }
        if !k.is_real() {
            let v = probable_zero(&k.im(), &domain, 20, DEFAULT_SEED, DEFAULT_ZERO_TOL)?;
            if !v.is_zero {
                return Err(ConstructionError::NotReal(k.to_string()));
            }
        }
        Ok(PrzanowskiData { k, epsilon, domain })
    }

    pub fn potential(&self) -> &Expr {
        &self.k
    }

    pub fn epsilon(&self) -> i8 {
        self.epsilon
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn with_epsilon(&self, epsilon: i8) -> Self {
        assert!(epsilon == 1 || epsilon == -1, "ε must be ±1");
        PrzanowskiData {
            epsilon,
            ..self.clone()
        }
    }

    fn derivatives(&self) -> Derivatives {
        let mut d = Differentiator::new();
        let x1 = Coordinate::from_slot(0);
        let half = CRational::ratio(1, 2);
        let kv = d.d(&self.k, x1).scale(&half);
        let kvv = d.d(&kv, x1).scale(&half);
        let kv2 = d.wirtinger(&kv, 2, false);
        let kv2b = d.wirtinger(&kv, 2, true);
        let k2 = d.wirtinger(&self.k, 2, false);
        let k22b = d.wirtinger(&k2, 2, true);
        Derivatives {
            kv,
            kvv,
            kv2,
            kv2b,
            k22b,
        }
    }

    /// Minimum of `K_v` and of `εK_vv` over `points`.
    pub fn admissibility(&self, points: &[Point]) -> Result<Admissibility, ConstructionError> {
        let d = self.derivatives();
        let eps = f64::from(self.epsilon);
        let mut out = Admissibility {
            min_kv: f64::INFINITY,
            min_eps_kvv: f64::INFINITY,
        };
        for p in points {
            let mut ev = Evaluator::new(p);
            out.min_kv = out.min_kv.min(ev.eval_real(&d.kv)?);
            out.min_eps_kvv = out.min_eps_kvv.min(eps * ev.eval_real(&d.kvv)?);
        }
        Ok(out)
    }

    /// Fails at the first point where `K_v > 0` or `εK_vv > 0` is violated.
    pub fn check_admissible(&self, points: &[Point]) -> Result<(), ConstructionError> {
        let d = self.derivatives();
        let eps = f64::from(self.epsilon);
        for p in points {
            let mut ev = Evaluator::new(p);
            let kv = ev.eval_real(&d.kv)?;
            if !(kv > 0.0) {
                return Err(ConstructionError::Admissibility {
                    condition: "K_v > 0",
                    value: kv,
                    point: p.coords,
                });
            }
            let ekvv = eps * ev.eval_real(&d.kvv)?;
            if !(ekvv > 0.0) {
                return Err(ConstructionError::Admissibility {
                    condition: "eps*K_vv > 0",
                    value: ekvv,
                    point: p.coords,
                });
            }
        }
        Ok(())
    }
}

/// `K = log(v − 2z₂z̄₂)` with `ε = −1` on 𝒰′.
pub fn bialecki_potential() -> PrzanowskiData {
    PrzanowskiData {
        k: u().log(),
        epsilon: -1,
        domain: DomainSpec::u_prime(),
    }
}

/// `K_vv K_{22̄} − K_{v2̄} K_{v2} − 2e^{−K}(K_vv + 2K_v²)`.
pub fn przanowski_residual(d: &PrzanowskiData) -> Expr {
    let k = d.derivatives();
    Expr::sum([
        &k.kvv * &k.k22b,
        -(&k.kv2b * &k.kv2),
        -(&(-&d.k).exp() * &(&k.kvv + &(&k.kv * &k.kv).scale(&CRational::int(2)))).scale(&CRational::int(2)),
    ])
}

/// Symmetric product `½(A⊗B + B⊗A)`.
pub(crate) fn sym_product(a: &[Expr; 4], b: &[Expr; 4]) -> [[Expr; 4]; 4] {
    let half = CRational::ratio(1, 2);
    std::array::from_fn(|r| std::array::from_fn(|s| (&(&a[r] * &b[s]) + &(&b[r] * &a[s])).scale(&half)))
}

/// `g = (εK_vv/K_v^{3/2}) A·Ā + 4e^{−K}(K_v^{1/2}/(εK_vv)) dz₂·dz̄₂`,
/// `A = dz₁ + (K_{v2}/K_vv) dz₂`, with juxtaposition the symmetric product.
/// Admissibility is checked at `probe`.
pub fn przanowski_metric(d: &PrzanowskiData, probe: &[Point]) -> Result<MetricField, ConstructionError> {
    d.check_admissible(probe)?;
    let k = d.derivatives();
    let eps = CRational::int(i64::from(d.epsilon));
    let ekvv = k.kvv.scale(&eps);
    let a = lin(&[(&Expr::one(), &dz1()), (&(&k.kv2 / &k.kvv), &dz2())]);
    let ab = lin(&[(&Expr::one(), &dz1b()), (&(&k.kv2b / &k.kvv), &dz2b())]);
    let c1 = &ekvv * &k.kv.pow_ratio(-3, 2);
    let c2 = Expr::product([Expr::int(4), (-&d.k).exp(), k.kv.sqrt(), ekvv.recip()]);
    let s1 = sym_product(&a, &ab);
    let s2 = sym_product(&dz2(), &dz2b());
    let upper = std::array::from_fn(|r| std::array::from_fn(|s| &(&c1 * &s1[r][s]) + &(&c2 * &s2[r][s])));
    Ok(MetricField::from_upper(upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sym::parse_expression;

    #[test]
    fn residual_of_linear_potential() {
        let d = PrzanowskiData::new(parse_expression("v", &[]).unwrap(), 1, DomainSpec::u_prime()).unwrap();
        let r = przanowski_residual(&d);
        let val = Evaluator::new(&Point::new([1.0, 0.3, 0.2, -0.4])).eval(&r).unwrap();
        assert!((val.re + 4.0 * (-2.0f64).exp()).abs() < 1e-14 && val.im.abs() < 1e-14);
        let err = przanowski_metric(&d, &[Point::new([1.0, 0.0, 0.0, 0.0])]).unwrap_err();
        assert!(matches!(
            err,
            ConstructionError::Admissibility {
                condition: "eps*K_vv > 0",
                ..
            }
        ));
    }

    #[test]
    fn constant_potential_solves_but_is_inadmissible() {
        let d = PrzanowskiData::new(Expr::int(3), -1, DomainSpec::u_prime()).unwrap();
        assert!(przanowski_residual(&d).is_zero());
        let a = d.admissibility(&[Point::new([1.0, 0.0, 0.0, 0.0])]).unwrap();
        assert!(!a.holds());
    }

    #[test]
    fn rejects_im_z1_dependence() {
        let err = PrzanowskiData::new(parse_expression("v + x2", &[]).unwrap(), 1, DomainSpec::u_prime()).unwrap_err();
        assert!(matches!(err, ConstructionError::Dependence { .. }));
    }

    #[test]
    fn log_v_is_well_formed_but_not_a_solution() {
        let d = PrzanowskiData::new(parse_expression("log(v)", &[]).unwrap(), -1, DomainSpec::u_prime()).unwrap();
        let p = Point::new([1.2, 0.1, 0.3, 0.2]);
        let g = przanowski_metric(&d, std::slice::from_ref(&p)).unwrap();
        g.check_positive_definite(std::slice::from_ref(&p)).unwrap();
        let r = Evaluator::new(&p).eval(&przanowski_residual(&d)).unwrap();
        assert!(r.norm() > 1e-3);
    }
}
