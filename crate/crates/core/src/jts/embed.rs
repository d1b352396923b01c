use super::{Element, JtsKind};
use crate::error::{HjtsError, Result};
use crate::linalg::{CMatrix, C64};

/// Placement of each simple factor of `sub` as a diagonal block of the
/// `super` matrix: `(factor, coordinate range, row offset, column offset)`.
type Blocks<'a> = Vec<(&'a JtsKind, std::ops::Range<usize>, usize, usize)>;

fn block_layout<'a>(sub: &'a JtsKind, sup: &JtsKind) -> Result<Blocks<'a>> {
    let unsupported = || HjtsError::contract(format!("no embedding of {sub} into {sup}"));
    let (p, q) = match *sup {
        JtsKind::TypeI { p, q } => (p, q),
        _ => return Err(unsupported()),
    };
    let mut out = Vec::new();
    let (mut r0, mut c0) = (0, 0);
    for (f, range) in sub.factors() {
        let (fr, fc) = f.matrix_shape().ok_or_else(unsupported)?;
        out.push((f, range, r0, c0));
        r0 += fr;
        c0 += fc;
    }
    if r0 > p || c0 > q {
        return Err(unsupported());
    }
    Ok(out)
}

/// Embeds `z ∈ sub` into `sup` as a sub-triple-system.
///
/// Supported: identical kinds; `III(n) ↪ I(n,n)` and `II(n) ↪ I(n,n)` as
/// matrices; `I(p′,q′) ↪ I(p,q)` as the top-left block; `IV(m) ↪ IV(n)` on
/// the leading coordinates; products factor by factor into products with the
/// same number of factors; and products of matrix-family factors into
/// block-diagonal position of a type I target.
pub fn embed(sub: &JtsKind, sup: &JtsKind, z: &Element) -> Result<Element> {
    if z.kind() != sub {
        return Err(HjtsError::contract(format!("element of {} passed as {sub}", z.kind())));
    }
    if sub == sup {
        return Ok(z.clone());
    }
    match (sub, sup) {
        (JtsKind::TypeIV { n: m }, JtsKind::TypeIV { n }) if m <= n => {
            let mut coords = z.coords().to_vec();
            coords.resize(*n, C64::new(0.0, 0.0));
            return Ok(Element::from_parts(sup, coords));
        }
        (JtsKind::Product(a), JtsKind::Product(b)) if a.len() == b.len() => {
            let parts = a
                .iter()
                .zip(b)
                .zip(z.split())
                .map(|((fa, fb), part)| embed(fa, fb, &part))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Element::join(sup, &parts));
        }
        _ => {}
    }
    let blocks = block_layout(sub, sup)?;
    let JtsKind::TypeI { p, q } = *sup else { unreachable!() };
    let mut m = CMatrix::zeros(p, q);
    for (f, range, r0, c0) in blocks {
        m.set_block(r0, c0, &f.coords_to_matrix(&z.coords()[range]));
    }
    Element::from_matrix(sup, &m)
}

/// Matrix of the embedding (`dim sup × dim sub`); its columns are the images
/// of the basis of `sub`.
pub fn embedding_matrix(sub: &JtsKind, sup: &JtsKind) -> Result<CMatrix> {
    let d = sub.ambient_dim();
    let cols = (0..d)
        .map(|k| embed(sub, sup, &Element::basis(sub, k)).map(Element::into_coords))
        .collect::<Result<Vec<_>>>()?;
    Ok(CMatrix::from_columns(sup.ambient_dim(), &cols))
}

/// Orthogonal projection of `x ∈ sup` onto the embedded copy of `sub`,
/// returned in `sub` coordinates together with the distance from `x` to
/// that subspace.
pub fn restrict(sub: &JtsKind, sup: &JtsKind, x: &Element) -> Result<(Element, f64)> {
    if x.kind() != sup {
        return Err(HjtsError::contract(format!("element of {} passed as {sup}", x.kind())));
    }
    let e = embedding_matrix(sub, sup)?;
    // The embedded basis vectors have disjoint supports, so the Gram matrix
    // is diagonal.
    let eh = e.adjoint();
    let gram = eh.matmul(&e);
    let proj = eh.mul_vec(x.coords());
    let coords: Vec<C64> = proj.iter().enumerate().map(|(k, &c)| c / gram[(k, k)].re).collect();
    let y = Element::from_parts(sub, coords);
    let back = embed(sub, sup, &y)?;
    let residual = back.distance(x);
    Ok((y, residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jts::testutil::random_element;
    use crate::jts::{bergman_operator, triple_product};
    use crate::linalg::testutil::rng;

    fn pairs() -> Vec<(JtsKind, JtsKind)> {
        [
            ("I:1,1", "I:2,2"),
            ("I:2,1", "I:3,3"),
            ("III:3", "I:3,3"),
            ("III:2", "I:2,2"),
            ("II:4", "I:4,4"),
            ("II:3", "I:3,3"),
            ("prod(I:1,1;III:2)", "I:3,3"),
            ("prod(II:2;I:1,2)", "I:3,4"),
            ("IV:3", "IV:3"),
            ("IV:3", "IV:5"),
            ("prod(I:1,1;IV:3)", "prod(I:2,2;IV:4)"),
        ]
        .iter()
        .map(|(a, b)| (a.parse().unwrap(), b.parse().unwrap()))
        .collect()
    }

    #[test]
    fn zero_maps_to_zero() {
        for (sub, sup) in pairs() {
            assert_eq!(embed(&sub, &sup, &Element::zero(&sub)).unwrap(), Element::zero(&sup));
        }
    }

    #[test]
    fn scalar_into_corner() {
        let sub = JtsKind::TypeI { p: 1, q: 1 };
        let sup = JtsKind::TypeI { p: 2, q: 2 };
        let z = Element::from_real(&sub, &[0.6]).unwrap();
        let m = embed(&sub, &sup, &z).unwrap().to_matrix().unwrap();
        assert!((&m - &CMatrix::diag_real(&[0.6, 0.0])).frobenius_norm() < 1e-16);
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let mut g = rng(21);
        for (sub, sup) in pairs() {
            for _ in 0..5 {
                let (u, v, w) =
                    (random_element(&mut g, &sub), random_element(&mut g, &sub), random_element(&mut g, &sub));
                let e = |x: &Element| embed(&sub, &sup, x).unwrap();
                let lhs = e(&triple_product(&u, &v, &w).unwrap());
                let rhs = triple_product(&e(&u), &e(&v), &e(&w)).unwrap();
                assert!(lhs.distance(&rhs) <= 1e-12 * (1.0 + lhs.norm()), "{sub} -> {sup}");
            }
        }
    }

    #[test]
    fn intertwines_bergman_operators() {
        let mut g = rng(22);
        for (sub, sup) in pairs() {
            let (u, v) = (random_element(&mut g, &sub), random_element(&mut g, &sub));
            let e = embedding_matrix(&sub, &sup).unwrap();
            let bs = bergman_operator(&embed(&sub, &sup, &u).unwrap(), &embed(&sub, &sup, &v).unwrap()).unwrap();
            let bb = bergman_operator(&u, &v).unwrap();
            let lhs = bs.matrix().matmul(&e);
            let rhs = e.matmul(bb.matrix());
            assert!((&lhs - &rhs).frobenius_norm() <= 1e-10 * (1.0 + lhs.frobenius_norm()), "{sub} -> {sup}");
        }
    }

    #[test]
    fn restrict_inverts_embed() {
        let mut g = rng(23);
        for (sub, sup) in pairs() {
            let z = random_element(&mut g, &sub);
            let (back, res) = restrict(&sub, &sup, &embed(&sub, &sup, &z).unwrap()).unwrap();
            assert!(res < 1e-14 && back.distance(&z) < 1e-14, "{sub} -> {sup}");
        }
        let sup = JtsKind::TypeI { p: 2, q: 2 };
        let off = Element::basis(&sup, 1);
        let (_, res) = restrict(&JtsKind::TypeIII { n: 2 }, &sup, &off).unwrap();
        assert!((res - 0.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn unsupported_pairs_are_rejected() {
        let bad = [
            ("I:2,2", "I:1,1"),
            ("IV:3", "I:3,3"),
            ("III:3", "I:2,2"),
            ("I:1,1", "IV:3"),
            ("IV:4", "IV:3"),
            ("prod(I:1,1;IV:3)", "prod(IV:3;I:1,1)"),
            ("prod(I:2,2;I:2,2)", "I:3,3"),
        ];
        for (a, b) in bad {
            let (sub, sup): (JtsKind, JtsKind) = (a.parse().unwrap(), b.parse().unwrap());
            assert!(matches!(embed(&sub, &sup, &Element::zero(&sub)), Err(HjtsError::Contract(_))), "{a} -> {b}");
        }
    }
}
