//! Coframes `M = f(dz₁ + h dz₂)`, `N = dz₂/f` and the almost-Kähler structures they carry.

use crate::geometry::{metric_from_coframe, CoframeField, KForm, MetricField, Side};
use crate::hermitian::AlmostComplexStructure;
use crate::sym::{CRational, Evaluator, Expr, Point};

use super::ConstructionError;

pub fn dz1() -> [Expr; 4] {
    [Expr::one(), Expr::imag_unit(), Expr::zero(), Expr::zero()]
}

pub fn dz2() -> [Expr; 4] {
    [Expr::zero(), Expr::zero(), Expr::one(), Expr::imag_unit()]
}

pub fn dz1b() -> [Expr; 4] {
    conj(&dz1())
}

pub fn dz2b() -> [Expr; 4] {
    conj(&dz2())
}

fn conj(v: &[Expr; 4]) -> [Expr; 4] {
    std::array::from_fn(|k| v[k].conj())
}

/// Components of `∂/∂z_k` (or `∂/∂z̄_k`) as a vector field.
pub fn wirtinger_vector(k: u8, barred: bool) -> [Expr; 4] {
    let half = Expr::ratio(1, 2);
    let im = Expr::imag_unit().scale(&CRational::ratio(if barred { 1 } else { -1 }, 2));
    let mut v: [Expr; 4] = std::array::from_fn(|_| Expr::zero());
    let s = 2 * (k as usize - 1);
    v[s] = half;
    v[s + 1] = im;
    v
}

pub(crate) fn lin(terms: &[(&Expr, &[Expr; 4])]) -> [Expr; 4] {
    std::array::from_fn(|a| Expr::sum(terms.iter().map(|(c, v)| *c * &v[a])))
}

/// `M = f(dz₁ + h dz₂)`, `N = (1/f) dz₂`. `f` must be real and nonzero at every probe point.
pub fn coframe_from_fh(f: &Expr, h: &Expr, probe: &[Point]) -> Result<CoframeField, ConstructionError> {
    if !f.is_real() {
        // structurally complex: accept only if it evaluates real everywhere we look
        for p in probe.iter().chain(std::iter::once(&Point::new([1.0, 0.0, 0.0, 0.0]))) {
            if Evaluator::new(p).eval(f)?.im.abs() > 1e-12 {
                return Err(ConstructionError::NotReal(f.to_string()));
            }
        }
    }
    for p in probe {
        if Evaluator::new(p).eval(f)?.norm() == 0.0 {
            return Err(ConstructionError::Vanishing { point: p.coords });
        }
    }
    let m = lin(&[(f, &dz1()), (&(f * h), &dz2())]);
    let n = lin(&[(&f.recip(), &dz2())]);
    Ok(CoframeField::new(m, n))
}

/// `ω = i(e^{iφ} dz₂∧dz₁ − e^{−iφ} dz̄₂∧dz̄₁)`.
pub fn lemma2_form(phi: &Expr) -> KForm {
    let i = Expr::imag_unit();
    let e = (&i * phi).exp();
    let w = |a: [Expr; 4], b: [Expr; 4]| KForm::one_form(a).wedge(&KForm::one_form(b));
    w(dz2(), dz1())
        .scale(&e)
        .sub(&w(dz2b(), dz1b()).scale(&e.conj()))
        .scale(&i)
}

/// Metric, structure and fundamental form of the (f, h) construction:
/// `J = 2 Re{ i e^{iφ} [ f²(dz₁ + h dz₂)⊗(∂_{z̄₂} − h̄ ∂_{z̄₁}) − f⁻² dz₂⊗∂_{z̄₁} ] }`.
pub fn lemma2_structure(
    f: &Expr,
    h: &Expr,
    phi: &Expr,
    probe: &Point,
) -> Result<(MetricField, AlmostComplexStructure, KForm), ConstructionError> {
    let c = coframe_from_fh(f, h, std::slice::from_ref(probe))?;
    let g = metric_from_coframe(&c, probe)?;
    let i = Expr::imag_unit();
    let pre = &i * &(&i * phi).exp();
    let f2 = f * f;
    let a = lin(&[(&f2, &dz1()), (&(&f2 * h), &dz2())]);
    let hb = h.conj();
    let va = lin(&[
        (&Expr::one(), &wirtinger_vector(2, true)),
        (&-&hb, &wirtinger_vector(1, true)),
    ]);
    let b = lin(&[(&f2.recip(), &dz2())]);
    let vb = wirtinger_vector(1, true);
    let j = std::array::from_fn(|r| {
        std::array::from_fn(|s| {
            let t = &pre * &(&(&va[r] * &a[s]) - &(&vb[r] * &b[s]));
            &t + &t.conj()
        })
    });
    Ok((
        g,
        AlmostComplexStructure::new(j).with_side(Side::Plus),
        lemma2_form(phi),
    ))
}
