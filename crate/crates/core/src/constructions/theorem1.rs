//! The Ricci-flat almost-Kähler metric on 𝒰′ = {v − 2z₂z̄₂ > 0}.

use crate::domain::DomainSpec;
use crate::geometry::{CoframeField, KForm, MetricField, Orientation};
use crate::hermitian::AlmostComplexStructure;
use crate::sym::{u, z2, CRational, Expr, Point};

use super::fh::{coframe_from_fh, dz1, dz1b, dz2, dz2b, lemma2_structure, lin};
use super::przanowski::sym_product;
use super::ConstructionError;

fn probe() -> Point {
    Point::new([1.0, 0.0, 0.0, 0.0])
}

/// `f = 1/(√2 u^{1/4})`
pub fn theorem1_f() -> Expr {
    (&Expr::int(2).sqrt() * &u().pow_ratio(1, 4)).recip()
}

/// `h = −2z̄₂`
pub fn theorem1_h() -> Expr {
    z2().conj().scale(&CRational::int(-2))
}

pub fn theorem1_coframe() -> CoframeField {
    coframe_from_fh(&theorem1_f(), &theorem1_h(), &[probe()]).expect("f is real and nonzero at the probe")
}

/// Direct transcription
/// `g = u^{−1/2}(dz₁ − 2z̄₂dz₂)(dz̄₁ − 2z₂dz̄₂) + 4u^{1/2} dz₂dz̄₂`.
pub fn theorem1_metric() -> MetricField {
    let z2b = z2().conj();
    let a = lin(&[(&Expr::one(), &dz1()), (&z2b.scale(&CRational::int(-2)), &dz2())]);
    let ab = lin(&[(&Expr::one(), &dz1b()), (&z2().scale(&CRational::int(-2)), &dz2b())]);
    let c1 = u().pow_ratio(-1, 2);
    let c2 = u().sqrt().scale(&CRational::int(4));
    let s1 = sym_product(&a, &ab);
    let s2 = sym_product(&dz2(), &dz2b());
    MetricField::from_upper(std::array::from_fn(|r| {
        std::array::from_fn(|s| &(&c1 * &s1[r][s]) + &(&c2 * &s2[r][s]))
    }))
    .with_orientation(Orientation::Positive)
}

#[derive(Clone, Debug)]
pub struct Theorem1Package {
    pub metric: MetricField,
    pub structure: AlmostComplexStructure,
    pub form: KForm,
    pub domain: DomainSpec,
}

/// Metric, `J⁺_{e^{iφ}}` and `ω⁺_{e^{iφ}}` for a coordinate-free real `phi`
/// (a number or a bound parameter).
pub fn theorem1_package(phi: &Expr) -> Result<Theorem1Package, ConstructionError> {
    let (metric, structure, form) = lemma2_structure(&theorem1_f(), &theorem1_h(), phi, &probe())?;
    Ok(Theorem1Package {
        metric,
        structure,
        form,
        domain: DomainSpec::u_prime(),
    })
}
