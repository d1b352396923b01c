//! Classical Hermitian positive Jordan triple systems: kinds, elements, the
//! triple product and the operators built from it.
//!
//! Every kind carries a fixed basis that is orthonormal for the generic trace
//! m₁, so self-adjoint operators such as `D(z,z)` and `B(z,z)` are Hermitian
//! matrices in coordinates:
//!
//! * type I: matrix units `E_jk`;
//! * type II: `E_jk − E_kj` for `j < k` (m₁ is `½ tr XYᴴ` here);
//! * type III: `E_jj` and `(E_jk + E_kj)/√2`;
//! * type IV: `e_j/√2`, with m₁ equal to twice the standard form of `ℂⁿ`.

mod element;
mod embed;
mod isotropy;
mod kind;
mod ops;

pub use element::{complex_pairs, Element};
pub use embed::{embed, embedding_matrix, restrict};
pub use isotropy::{isotropy_action, random_orthogonal, random_unitary, IsotropyParams};
pub use kind::JtsKind;
pub use ops::{
    bergman_operator, box_operator, d_operator, genus, m1_form, q_operator, triple_product, AntilinearOperator,
    LinearOperator,
};

use crate::error::Result;

/// Whether `z` lies in the bounded symmetric domain, i.e. its largest
/// spectral value is below one.
pub fn in_domain(z: &Element) -> Result<bool> {
    Ok(crate::spectral::spectral_radius(z)? < 1.0)
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::{Element, JtsKind};
    use crate::linalg::testutil::gaussian;
    use rand_chacha::ChaCha20Rng;

    pub const KINDS: [&str; 9] =
        ["I:1,1", "I:2,2", "I:1,3", "I:3,2", "II:4", "II:5", "III:3", "IV:4", "prod(I:1,1;IV:3)"];

    /// Standard complex Gaussian coordinates, scaled by `1/√dim`.
    pub fn random_element(rng: &mut ChaCha20Rng, kind: &JtsKind) -> Element {
        let d = kind.ambient_dim();
        let s = 1.0 / (d as f64).sqrt();
        Element::new(kind, (0..d).map(|_| gaussian(rng) * s).collect()).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::testutil::{random_element, KINDS};
    use super::*;
    use crate::linalg::testutil::rng;
    use crate::linalg::CMatrix;
    use proptest::prelude::*;

    fn jordan_residual(x: &Element, y: &Element, u: &Element, v: &Element, w: &Element) -> f64 {
        // {x,y,{u,v,w}} − {u,v,{x,y,w}} = {{x,y,u},v,w} − {u,{v,x,y},w}
        let t = |a: &Element, b: &Element, c: &Element| triple_product(a, b, c).unwrap();
        let lhs = &t(x, y, &t(u, v, w)) - &t(u, v, &t(x, y, w));
        let rhs = &t(&t(x, y, u), v, w) - &t(u, &t(v, x, y), w);
        lhs.distance(&rhs)
    }

    #[test]
    fn jordan_identity_every_kind() {
        let mut g = rng(31);
        for k in KINDS {
            let kind: JtsKind = k.parse().unwrap();
            for _ in 0..50 {
                let e: Vec<Element> = (0..5).map(|_| random_element(&mut g, &kind)).collect();
                let scale = e.iter().map(Element::norm).product::<f64>().max(1.0);
                assert!(jordan_residual(&e[0], &e[1], &e[2], &e[3], &e[4]) <= 1e-10 * scale, "{kind}");
            }
        }
    }

    #[test]
    fn d_of_z_z_is_hermitian_psd() {
        let mut g = rng(32);
        for k in KINDS {
            let kind: JtsKind = k.parse().unwrap();
            for _ in 0..20 {
                let z = random_element(&mut g, &kind);
                let d = d_operator(&z, &z).unwrap();
                assert!(d.matrix().hermitian_defect() <= 1e-10, "{kind}");
                let eig = crate::linalg::hermitian_eigen(d.matrix()).unwrap();
                assert!(*eig.values.last().unwrap() >= -1e-10, "{kind}");
            }
        }
    }

    #[test]
    fn trace_of_d_is_positive() {
        let mut g = rng(33);
        for k in KINDS {
            let kind: JtsKind = k.parse().unwrap();
            for _ in 0..1000 {
                let z = random_element(&mut g, &kind);
                if z.norm() == 0.0 {
                    continue;
                }
                assert!(d_operator(&z, &z).unwrap().trace().re > 0.0, "{kind}");
            }
        }
    }

    #[test]
    fn bergman_operator_is_hermitian_at_diagonal() {
        let mut g = rng(34);
        for k in KINDS {
            let kind: JtsKind = k.parse().unwrap();
            let z = random_element(&mut g, &kind);
            let b = bergman_operator(&z, &z).unwrap();
            assert!(b.matrix().hermitian_defect() <= 1e-12 * b.matrix().frobenius_norm(), "{kind}");
        }
    }

    #[test]
    fn domain_membership() {
        let disc = JtsKind::TypeI { p: 1, q: 1 };
        assert!(in_domain(&Element::zero(&disc)).unwrap());
        assert!(in_domain(&Element::from_real(&disc, &[0.999]).unwrap()).unwrap());
        assert!(!in_domain(&Element::from_real(&disc, &[1.0]).unwrap()).unwrap());
        let sq = JtsKind::TypeI { p: 2, q: 2 };
        let z = Element::from_matrix(&sq, &CMatrix::diag_real(&[0.5, 1.2])).unwrap();
        assert!(!in_domain(&z).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn triple_product_symmetric_in_outer_arguments(seed in any::<u64>(), which in 0usize..KINDS.len()) {
            let kind: JtsKind = KINDS[which].parse().unwrap();
            let mut g = rng(seed);
            let (u, v, w) = (random_element(&mut g, &kind), random_element(&mut g, &kind), random_element(&mut g, &kind));
            let a = triple_product(&u, &v, &w).unwrap();
            let b = triple_product(&w, &v, &u).unwrap();
            prop_assert!(a.distance(&b) <= 1e-13);
        }

        #[test]
        fn triple_product_sesquilinear(seed in any::<u64>(), which in 0usize..KINDS.len(), re in -2.0f64..2.0, im in -2.0f64..2.0) {
            let kind: JtsKind = KINDS[which].parse().unwrap();
            let mut g = rng(seed);
            let (u, v, w) = (random_element(&mut g, &kind), random_element(&mut g, &kind), random_element(&mut g, &kind));
            let alpha = crate::linalg::C64::new(re, im);
            let base = triple_product(&u, &v, &w).unwrap();
            let lin = triple_product(&u.scale(alpha), &v, &w).unwrap();
            let anti = triple_product(&u, &v.scale(alpha), &w).unwrap();
            prop_assert!(lin.distance(&base.scale(alpha)) <= 1e-12);
            prop_assert!(anti.distance(&base.scale(alpha.conj())) <= 1e-12);
        }
    }
}
