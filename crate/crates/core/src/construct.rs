//! Builders for the explicit objects: the free tensor with trivial projective
//! stabilizer, the multiplication maps `M_y` and `τ`, and the subspace
//! `L = M_{w₀}(L_Z)` together with its shape-separation certificate.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::{pure_symbol, GammaElement, MonomialBasis, SymElement};
use crate::matrix::FieldMatrix;
use crate::multiindex::{compositions, gen_f_disjoint, is_f_disjoint};
use crate::scalars::{FieldSpec, Scalar};
use crate::stab::lie_stab_subspace;

fn basis_vector(field: FieldSpec, d: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); d];
    v[i] = field.one();
    v
}

fn degree(k: u64) -> Result<u32> {
    u32::try_from(k).map_err(|_| Error::InvalidArgument(format!("degree {k} too large")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeTensorSpec {
    pub d: usize,
    #[serde(rename = "char")]
    pub field: FieldSpec,
    pub a: Vec<u64>,
    pub r: u64,
    pub x: GammaElement,
}

/// `x = [e_1]_{a_1} ⋯ [e_d]_{a_d} [e_1 + ⋯ + e_d]_{a_{d+1}}` in `Γʳ(F^d)`.
/// Without `a`, the sequence `p, p², …` (or `2, 4, …` over `Q`) is used.
pub fn build_free_tensor(d: usize, field: FieldSpec, a: Option<&[u64]>) -> Result<FreeTensorSpec> {
    if d < 3 {
        return Err(Error::InvalidArgument(format!("dimension {d} < 3")));
    }
    let a = match a {
        Some(a) => a.to_vec(),
        None => gen_f_disjoint(d + 1, field, false)?,
    };
    if a.len() != d + 1 {
        return Err(Error::InvalidArgument(format!("expected {} exponents, got {}", d + 1, a.len())));
    }
    let mut seq = vec![1];
    seq.extend_from_slice(&a);
    if !is_f_disjoint(&seq, field) {
        return Err(Error::NotDisjoint(seq, field.characteristic()));
    }
    let r: u64 = a.iter().sum();
    degree(r)?;
    let mut points: Vec<Vec<Scalar>> = (0..d).map(|i| basis_vector(field, d, i)).collect();
    points.push(vec![field.one(); d]);
    let x = tau_eval(field, &points, &a)?;
    assert!(!x.is_zero(), "a disjoint product of pure symbols of nonzero vectors is nonzero");
    Ok(FreeTensorSpec { d, field, a, r, x })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultMapReport {
    /// Columns indexed by the monomial basis of `Γᵃ`, rows by that of `Γ^{a+b}`.
    pub matrix: FieldMatrix,
    pub disjoint: bool,
    pub rank: usize,
    pub full_column_rank: bool,
}

/// The matrix of `M_y: x ↦ x [y]_b` from `Γᵃ(F^d)` to `Γ^{a+b}(F^d)`.
/// Non-disjoint `(a, b)` is allowed and flagged.
pub fn mult_map_matrix(field: FieldSpec, y: &[Scalar], a: u32, b: u32) -> Result<MultMapReport> {
    if y.iter().all(Scalar::is_zero) {
        return Err(Error::ZeroVector);
    }
    let d = y.len();
    let source = MonomialBasis::new(d, a);
    let target = MonomialBasis::new(d, a + b);
    let yb = pure_symbol(field, y, b)?;
    let cols = source
        .compositions()
        .iter()
        .map(|c| GammaElement::basis(field, c.clone()).mul(&yb)?.to_dense(&target))
        .collect::<Result<Vec<_>>>()?;
    let matrix = FieldMatrix::from_columns(field, target.len(), &cols)?;
    let rank = matrix.rank();
    Ok(MultMapReport {
        disjoint: is_f_disjoint(&[a as u64, b as u64], field),
        full_column_rank: rank == source.len(),
        rank,
        matrix,
    })
}

/// `τ(x_1, …, x_k) = [x_1]_{a_1} ⋯ [x_k]_{a_k}`.
pub fn tau_eval(field: FieldSpec, points: &[Vec<Scalar>], a: &[u64]) -> Result<GammaElement> {
    if points.len() != a.len() || points.is_empty() {
        return Err(Error::InvalidArgument("one exponent per point".into()));
    }
    if !is_f_disjoint(a, field) {
        return Err(Error::NotDisjoint(a.to_vec(), field.characteristic()));
    }
    let d = points[0].len();
    let factors = points
        .iter()
        .zip(a)
        .map(|(x, &k)| {
            if x.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: x.len() });
            }
            if x.iter().all(Scalar::is_zero) {
                return Err(Error::ZeroVector);
            }
            pure_symbol(field, x, degree(k)?)
        })
        .collect::<Result<Vec<_>>>()?;
    GammaElement::product(field, d, &factors)
}

/// `q = m + 1` over `Q`, the smallest power of `p` exceeding `m` over `F_p`.
pub fn shift_power(m: u64, field: FieldSpec) -> Result<u64> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    match field.order() {
        None => Ok(m + 1),
        Some(p) => {
            let mut q = p;
            while q <= m {
                q = q.checked_mul(p).ok_or_else(|| Error::InvalidArgument("shift power overflows".into()))?;
            }
            Ok(q)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TannakaData {
    pub w_dim: usize,
    pub m: u32,
    pub q: u32,
    pub n: u32,
    pub l_z: Vec<GammaElement>,
    pub w0: Vec<Scalar>,
    pub l: Vec<GammaElement>,
    /// `m + 1 ≠ 0` in the field.
    pub m_plus_one_nonzero: bool,
}

/// `L = L_Z · [w₀]_q ⊂ Γ^{m+q}(W)`.
pub fn build_l(l_z: &[GammaElement], w0: &[Scalar]) -> Result<TannakaData> {
    let first = l_z.first().ok_or_else(|| Error::InvalidArgument("empty L_Z".into()))?;
    let (field, w_dim, m) = (first.field(), first.dim(), first.degree());
    if w0.len() != w_dim {
        return Err(Error::DimensionMismatch { expected: w_dim, got: w0.len() });
    }
    if w0.iter().all(Scalar::is_zero) {
        return Err(Error::ZeroVector);
    }
    if span_rank(l_z)? < l_z.len() {
        return Err(Error::LinearlyDependent);
    }
    let q = degree(shift_power(m as u64, field)?)?;
    let shift = pure_symbol(field, w0, q)?;
    let l = l_z.iter().map(|z| z.mul(&shift)).collect::<Result<Vec<_>>>()?;
    // Injectivity of M_{w₀}, asserted rather than assumed.
    if span_rank(&l)? < l.len() {
        return Err(Error::LinearlyDependent);
    }
    Ok(TannakaData {
        w_dim,
        m,
        q,
        n: m + q,
        l_z: l_z.to_vec(),
        w0: w0.to_vec(),
        l,
        m_plus_one_nonzero: !field.from_u64(m as u64 + 1).is_zero(),
    })
}

fn span_rank(span: &[GammaElement]) -> Result<usize> {
    let first = span.first().ok_or_else(|| Error::InvalidArgument("empty span".into()))?;
    let basis = MonomialBasis::new(first.dim(), first.degree());
    let cols = span.iter().map(|x| x.to_dense(&basis)).collect::<Result<Vec<_>>>()?;
    Ok(FieldMatrix::from_columns(first.field(), basis.len(), &cols)?.rank())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShapeReport {
    pub m: u64,
    pub q: u64,
    pub n: u64,
    pub w_dim: usize,
    pub compositions: usize,
    /// Symbols `[w_0]_{a_0} ⋯` with `a_0 ≥ q`.
    pub shape_a: usize,
    /// Symbols with `a_1 ≥ q`.
    pub shape_b: usize,
    /// Symbols with two distinct coordinates `≥ q`; the certificate needs 0.
    pub overlapping: usize,
    pub n_below_2q: bool,
    pub certified: bool,
}

/// Enumerates `Γⁿ(W)` symbols, `n = m + q`, and checks that no symbol has
/// two coordinates `≥ q`.
pub fn shape_separation_check(m: u64, field: FieldSpec, w_dim: usize) -> Result<ShapeReport> {
    if w_dim < 2 {
        return Err(Error::InvalidArgument("dim W must be at least 2".into()));
    }
    let q = shift_power(m, field)?;
    let n = m + q;
    let comps = compositions(degree(n)?, w_dim);
    let large = |k: u32| k as u64 >= q;
    let mut report = ShapeReport {
        m,
        q,
        n,
        w_dim,
        compositions: comps.len(),
        shape_a: 0,
        shape_b: 0,
        overlapping: 0,
        n_below_2q: n < 2 * q,
        certified: false,
    };
    for c in &comps {
        let parts = c.parts();
        report.shape_a += usize::from(large(parts[0]));
        report.shape_b += usize::from(large(parts[1]));
        if parts.iter().filter(|&&k| large(k)).count() >= 2 {
            report.overlapping += 1;
        }
    }
    report.certified = report.overlapping == 0 && report.n_below_2q;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TannakaLieReport {
    pub dim_l: usize,
    pub dim_l_z: usize,
    /// Dimension of `Lie Stab(L_Z) ∩ Lie Stab(F w₀)`.
    pub dim_l_z_fixing_w0: usize,
    /// Every element of `Lie Stab(L_Z)` preserves the line `F w₀`.
    pub w0_fixed: bool,
}

/// Compares Lie stabilizers of `L` and `L_Z` inside `End(W)`.
pub fn tannaka_lie_check(data: &TannakaData) -> Result<TannakaLieReport> {
    let field = data.w0.first().map(Scalar::field).ok_or(Error::ZeroVector)?;
    let on_l = lie_stab_subspace(&data.l)?;
    let on_l_z = lie_stab_subspace(&data.l_z)?;
    // Σ t_j u_j w₀ = c w₀ in the unknowns (t, c).
    let mut cols = Vec::with_capacity(on_l_z.basis.len() + 1);
    for sol in &on_l_z.basis {
        cols.push(sol.u.mul_vec(&data.w0)?);
    }
    cols.push(data.w0.iter().map(|s| -s).collect());
    let system = FieldMatrix::from_columns(field, data.w_dim, &cols)?;
    let fixing = system.kernel().len();
    Ok(TannakaLieReport {
        dim_l: on_l.dimension,
        dim_l_z: on_l_z.dimension,
        dim_l_z_fixing_w0: fixing,
        w0_fixed: fixing == on_l_z.dimension,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPoint {
    pub n_block: usize,
    pub a1: u64,
    pub r: u64,
    /// Indices (0-based) of `e_n` and `e_{2n}` in `V = F^n ⊕ F^n`.
    pub indices: (usize, usize),
    pub symbol: GammaElement,
}

/// `(w₀) = [e_n]_{a_1} [e_{2n}]_{r - a_1}` in `Γʳ(F^{2n})`.
pub fn fixed_point_w0(field: FieldSpec, n_block: usize, a1: u64, r: u64) -> Result<FixedPoint> {
    if n_block == 0 {
        return Err(Error::IndexOutOfRange { index: 0, dim: 0 });
    }
    if a1 >= r {
        return Err(Error::InvalidArgument(format!("a1 = {a1} must be below r = {r}")));
    }
    let d = 2 * n_block;
    let mut parts = vec![0u32; d];
    parts[n_block - 1] = degree(a1)?;
    parts[d - 1] = degree(r - a1)?;
    Ok(FixedPoint {
        n_block,
        a1,
        r,
        indices: (n_block - 1, d - 1),
        symbol: GammaElement::basis(field, crate::multiindex::Composition::new(parts)),
    })
}

/// Smallest `n ≥ 2` with `2n - 1 > dim G`.
pub fn min_block_size(dim_g: usize) -> usize {
    (dim_g.div_ceil(2) + 1).max(2)
}

/// `g ↦ diag(g, g)`.
pub fn diagonal_embedding(g: &FieldMatrix) -> Result<FieldMatrix> {
    g.block_diag(g)
}

/// `GL_{n-1} ⊂ GL_n`, fixing the last basis vector.
pub fn extend_fixing_last(g: &FieldMatrix) -> Result<FieldMatrix> {
    g.block_diag(&FieldMatrix::identity(g.field(), 1))
}

/// `w ≠ l` and `w ≠ dim V - l`.
pub fn final_side_conditions(w: u64, l: u64, dim_v: u64) -> bool {
    w != l && Some(w) != dim_v.checked_sub(l)
}

/// `L_X ⊂ Γ^m(W)`: the annihilator of `E_X ⊂ Sym^m(W^∨)` under the perfect
/// pairing.
pub fn gamma_annihilator(e_x: &[SymElement]) -> Result<Vec<GammaElement>> {
    let first = e_x.first().ok_or_else(|| Error::InvalidArgument("empty E_X".into()))?;
    let (field, d, m) = (first.field(), first.dim(), first.degree());
    let basis = MonomialBasis::new(d, m);
    // Monomial bases are dual, so the pairing is the dot product of coordinates.
    let rows = e_x.iter().map(|e| e.to_dense(&basis)).collect::<Result<Vec<_>>>()?;
    FieldMatrix::from_rows(field, rows)?
        .kernel()
        .into_iter()
        .map(|v| GammaElement::from_dense(field, &basis, &v))
        .collect()
}

/// For a point `z`: whether `[z]_m ∈ L_X`, and whether every form of `E_X`
/// vanishes at `z`. The two always agree.
pub fn annihilator_membership(e_x: &[SymElement], z: &[Scalar]) -> Result<(bool, bool)> {
    let l_x = gamma_annihilator(e_x)?;
    let first = &e_x[0];
    let field = first.field();
    let zm = pure_symbol(field, z, first.degree())?;
    let in_l = if l_x.is_empty() {
        zm.is_zero()
    } else {
        let mut span = l_x.clone();
        let base = span_rank(&span)?;
        span.push(zm);
        span_rank(&span)? == base
    };
    let mut vanishes = true;
    for e in e_x {
        vanishes &= e.evaluate(z)?.is_zero();
    }
    Ok((in_l, vanishes))
}
