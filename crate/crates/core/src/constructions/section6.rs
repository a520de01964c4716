//! A Kähler structure on the Ricci-flat metric, of orientation opposite to `J⁺`.

use crate::geometry::{KForm, Side};
use crate::hermitian::{fundamental_form, AlmostComplexStructure};
use crate::sym::{z2, CRational, Expr};

use super::fh::{dz1, dz2, dz2b, lin, wirtinger_vector};
use super::theorem1::theorem1_metric;

/// `J = i[A⊗∂₁ − Ā⊗∂₁̄ + dz̄₂⊗(∂₂̄ + 2z₂∂₁̄) − dz₂⊗(∂₂ + 2z̄₂∂₁)]`,
/// `A = dz₁ − 2z̄₂ dz₂`, with its fundamental form for the Ricci-flat metric.
pub fn section6_structure() -> (AlmostComplexStructure, KForm) {
    let z2 = z2();
    let z2b = z2.conj();
    let two = CRational::int(2);
    let one = Expr::one();
    let a = lin(&[(&one, &dz1()), (&z2b.scale(&CRational::int(-2)), &dz2())]);
    let a_bar: [Expr; 4] = std::array::from_fn(|k| a[k].conj());
    let d1 = wirtinger_vector(1, false);
    let d1b = wirtinger_vector(1, true);
    let v3 = lin(&[(&one, &wirtinger_vector(2, true)), (&z2.scale(&two), &d1b)]);
    let v4 = lin(&[(&one, &wirtinger_vector(2, false)), (&z2b.scale(&two), &d1)]);
    let terms: [(i64, &[Expr; 4], [Expr; 4]); 4] = [(1, &a, d1), (-1, &a_bar, d1b), (1, &dz2b(), v3), (-1, &dz2(), v4)];
    let i = Expr::imag_unit();
    let j = std::array::from_fn(|r| {
        std::array::from_fn(|s| {
            let parts = terms.iter().map(|(sign, form, vec)| {
                let t = &vec[r] * &form[s];
                if *sign < 0 {
                    -t
                } else {
                    t
                }
            });
            &i * &Expr::sum(parts)
        })
    });
    let j = AlmostComplexStructure::new(j).with_side(Side::Minus);
    let omega = fundamental_form(&theorem1_metric(), &j);
    (j, omega)
}
