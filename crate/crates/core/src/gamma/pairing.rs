use super::{GammaElement, MonomialBasis, SymElement};
use crate::error::{Error, Result};
use crate::matrix::FieldMatrix;
use crate::scalars::{FieldSpec, Scalar};

/// The pairing `Γⁿ(V∨) × Symⁿ(V) → F` in which the symbol basis
/// `[e_1*]_{a_1} ⋯ [e_d*]_{a_d}` is dual to the monomial basis
/// `e_1^{a_1} ⋯ e_d^{a_d}`.
///
/// On pure symbols it evaluates as `⟨[φ]_n, x_1 ⋯ x_n⟩ = φ(x_1) ⋯ φ(x_n)`.
pub fn pairing(phi: &GammaElement, x: &SymElement) -> Result<Scalar> {
    phi.field().check(x.field())?;
    if phi.dim() != x.dim() {
        return Err(Error::DimensionMismatch { expected: phi.dim(), got: x.dim() });
    }
    if phi.degree() != x.degree() {
        return Err(Error::DegreeMismatch { expected: phi.degree(), got: x.degree() });
    }
    let mut acc = phi.field().zero();
    // Iterate over the sparser side.
    if phi.len() <= x.len() {
        for (c, s) in phi.terms() {
            let t = x.coeff(c);
            if !t.is_zero() {
                acc += &(s * &t);
            }
        }
    } else {
        for (c, t) in x.terms() {
            let s = phi.coeff(c);
            if !s.is_zero() {
                acc += &(&s * t);
            }
        }
    }
    Ok(acc)
}

/// Gram matrix of [`pairing`] between the two monomial bases.
pub fn pairing_gram_matrix(field: FieldSpec, dim: usize, n: u32) -> FieldMatrix {
    let basis = MonomialBasis::new(dim, n);
    let comps = basis.compositions();
    let mut g = FieldMatrix::zeros(field, comps.len(), comps.len());
    for (i, a) in comps.iter().enumerate() {
        let phi = GammaElement::basis(field, a.clone());
        for (j, b) in comps.iter().enumerate() {
            let v = pairing(&phi, &SymElement::basis(field, b.clone())).expect("same shape");
            g.set(i, j, v);
        }
    }
    g
}
