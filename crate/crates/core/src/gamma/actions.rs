use num_bigint::BigUint;
use num_traits::One;

use super::{GammaElement, MonomialBasis, SymElement};
use crate::error::{Error, Result};
use crate::matrix::FieldMatrix;
use crate::multiindex::{multinomial, Composition};
use crate::scalars::FieldSpec;

fn factorial_product(c: &Composition) -> BigUint {
    let mut acc = BigUint::one();
    for &k in c.parts() {
        for i in 2..=k as u64 {
            acc *= i;
        }
    }
    acc
}

fn parts_u64(c: &Composition) -> Vec<u64> {
    c.parts().iter().map(|&k| k as u64).collect()
}

/// `v_1 ⋯ v_n ↦ [v_1]_1 ⋯ [v_n]_1`; on monomials `e^a ↦ (Π a_i!) [e]_a`.
pub fn sym_to_gamma(x: &SymElement) -> GammaElement {
    let f = x.field();
    let terms = x.terms().map(|(c, s)| (c.clone(), s * &f.from_biguint(&factorial_product(c))));
    GammaElement::from_terms(f, x.dim(), x.degree(), terms).expect("same shape")
}

/// `[v]_n ↦ vⁿ`; on symbols `[e]_a ↦ multinomial(a) e^a`.
pub fn gamma_to_sym(y: &GammaElement) -> SymElement {
    let f = y.field();
    let terms = y.terms().map(|(c, s)| (c.clone(), s * &f.from_biguint(&multinomial(&parts_u64(c)))));
    SymElement::from_terms(f, y.dim(), y.degree(), terms).expect("same shape")
}

/// Matrix of [`sym_to_gamma`] in the monomial bases.
pub fn sym_to_gamma_matrix(field: FieldSpec, dim: usize, n: u32) -> FieldMatrix {
    let basis = MonomialBasis::new(dim, n);
    let cols: Vec<_> = basis
        .compositions()
        .iter()
        .map(|c| sym_to_gamma(&SymElement::basis(field, c.clone())).to_dense(&basis).expect("shape"))
        .collect();
    FieldMatrix::from_columns(field, basis.len(), &cols).expect("shape")
}

/// Matrix of [`gamma_to_sym`] in the monomial bases.
pub fn gamma_to_sym_matrix(field: FieldSpec, dim: usize, n: u32) -> FieldMatrix {
    let basis = MonomialBasis::new(dim, n);
    let cols: Vec<_> = basis
        .compositions()
        .iter()
        .map(|c| gamma_to_sym(&GammaElement::basis(field, c.clone())).to_dense(&basis).expect("shape"))
        .collect();
    FieldMatrix::from_columns(field, basis.len(), &cols).expect("shape")
}

fn check_square(m: &FieldMatrix, dim: usize) -> Result<()> {
    if !m.is_square() {
        return Err(Error::InvalidArgument("matrix must be square".into()));
    }
    if m.rows() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: m.rows() });
    }
    Ok(())
}

/// Pure symbols `[g e_i]_k` for all `i` and `k <= n`.
struct PureCache {
    by_column: Vec<Vec<GammaElement>>,
}

impl PureCache {
    fn new(g: &FieldMatrix, n: u32) -> Result<Self> {
        let by_column = (0..g.cols())
            .map(|i| {
                let v = g.column(i);
                (0..=n).map(|k| GammaElement::pure_symbol(g.field(), &v, k)).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PureCache { by_column })
    }

    fn image_of_symbol(&self, field: FieldSpec, c: &Composition) -> Result<GammaElement> {
        let mut acc: Option<GammaElement> = None;
        for (i, &k) in c.parts().iter().enumerate() {
            if k == 0 {
                continue;
            }
            let f = &self.by_column[i][k as usize];
            acc = Some(match acc {
                None => f.clone(),
                Some(a) => a.mul(f)?,
            });
        }
        Ok(acc.unwrap_or_else(|| GammaElement::basis(field, c.clone())))
    }
}

/// `g · x` for the action of `GL(V)` on `Γⁿ(V)` by algebra automorphisms:
/// `[e]_a ↦ Π_i [g e_i]_{a_i}`.
pub fn apply_gl(g: &FieldMatrix, x: &GammaElement) -> Result<GammaElement> {
    check_square(g, x.dim())?;
    x.field().check(g.field())?;
    let cache = PureCache::new(g, x.degree())?;
    let mut out = GammaElement::zero(x.field(), x.dim(), x.degree());
    for (c, s) in x.terms() {
        let img = cache.image_of_symbol(x.field(), c)?;
        for (c2, s2) in img.terms() {
            out.add_term(c2.clone(), &(s * s2));
        }
    }
    Ok(out)
}

/// The matrix of `g` acting on `Γⁿ(V)`, columns in [`MonomialBasis`] order.
pub fn induced_gl_action(g: &FieldMatrix, n: u32) -> Result<FieldMatrix> {
    check_square(g, g.rows())?;
    let field = g.field();
    let basis = MonomialBasis::new(g.rows(), n);
    let cache = PureCache::new(g, n)?;
    let cols = basis
        .compositions()
        .iter()
        .map(|c| cache.image_of_symbol(field, c)?.to_dense(&basis))
        .collect::<Result<Vec<_>>>()?;
    FieldMatrix::from_columns(field, basis.len(), &cols)
}

/// The ε-coefficient of `(Id + εu) · x`:
/// `[e]_a ↦ Σ_i [u e_i]_1 [e_i]_{a_i-1} Π_{j≠i} [e_j]_{a_j}`.
pub fn apply_derivation(u: &FieldMatrix, x: &GammaElement) -> Result<GammaElement> {
    check_square(u, x.dim())?;
    x.field().check(u.field())?;
    let d = x.dim();
    let mut out = GammaElement::zero(x.field(), d, x.degree());
    for (a, s) in x.terms() {
        for i in 0..d {
            let Some(b) = a.shifted(i, -1) else { continue };
            for k in 0..d {
                let uki = u.get(k, i);
                if uki.is_zero() {
                    continue;
                }
                // [e_k]_1 [e]_b = (b_k + 1) [e]_{b + δ_k}
                let factor = (b.parts()[k] + 1) as u64;
                let coeff = (s * uki).scale_u64(factor);
                out.add_term(b.shifted(k, 1).expect("increment"), &coeff);
            }
        }
    }
    Ok(out)
}

/// The matrix of [`apply_derivation`] on `Γⁿ(V)`.
pub fn derivation_action(u: &FieldMatrix, n: u32) -> Result<FieldMatrix> {
    check_square(u, u.rows())?;
    let field = u.field();
    let basis = MonomialBasis::new(u.rows(), n);
    let cols = basis
        .compositions()
        .iter()
        .map(|c| apply_derivation(u, &GammaElement::basis(field, c.clone()))?.to_dense(&basis))
        .collect::<Result<Vec<_>>>()?;
    FieldMatrix::from_columns(field, basis.len(), &cols)
}
