//! Stabilizers of lines and subspaces of `Γⁿ(V)` under `PGL(V)`: Lie algebras
//! over the dual numbers, point groups over small prime fields by exhaustive
//! search, and the tangency probe for the Veronese embedding.

mod fast;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::{apply_derivation, apply_gl, derivation_action, GammaElement, MonomialBasis};
use crate::matrix::FieldMatrix;
use crate::scalars::{FieldSpec, Scalar};

/// Default cap on `|GL_d(F_q)|` for [`brute_point_stab_line`].
pub const DEFAULT_ENUMERATION_GUARD: u128 = 10_000_000;

/// Environment variable overriding [`DEFAULT_ENUMERATION_GUARD`].
pub const ENUMERATION_GUARD_VAR: &str = "DIVPOW_ENUM_GUARD";

/// One solution of the linearized fixing condition: `D(u) ℓ_j = Σ_l c_{l,j} ℓ_l`.
/// For a line `c` is `1 × 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LieSolution {
    pub u: FieldMatrix,
    pub c: FieldMatrix,
}

impl LieSolution {
    /// The eigenvalue in the line case.
    pub fn scalar(&self) -> &Scalar {
        self.c.get(0, 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LieStabReport {
    /// Dimension of the space of `u ∈ End(V)` preserving the line or subspace.
    pub dimension: usize,
    pub basis: Vec<LieSolution>,
    /// `dimension - 1`: the scalars always stabilize.
    pub pgl_dimension: usize,
    pub pgl_trivial: bool,
}

impl LieStabReport {
    /// Re-checks every basis solution against [`apply_derivation`].
    pub fn verify(&self, span: &[GammaElement]) -> Result<bool> {
        for sol in &self.basis {
            for (j, l) in span.iter().enumerate() {
                let mut rhs = GammaElement::zero(l.field(), l.dim(), l.degree());
                for (i, m) in span.iter().enumerate() {
                    rhs = rhs.add(&m.scale(sol.c.get(i, j)))?;
                }
                if apply_derivation(&sol.u, l)? != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Solutions of `D(u) x = c x` in the unknowns `(u, c)`.
pub fn lie_stab_line(x: &GammaElement) -> Result<LieStabReport> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    lie_stab_subspace(std::slice::from_ref(x))
}

/// Solutions `u` of `D(u) L ⊂ L`, with `L` spanned by the given independent
/// elements. The induced endomorphism `c` of `L` is solved for alongside `u`;
/// independence makes it a function of `u`.
pub fn lie_stab_subspace(span: &[GammaElement]) -> Result<LieStabReport> {
    let first = span.first().ok_or_else(|| Error::InvalidArgument("empty spanning list".into()))?;
    let (field, d, n) = (first.field(), first.dim(), first.degree());
    for l in span {
        field.check(l.field())?;
        if l.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, got: l.dim() });
        }
        if l.degree() != n {
            return Err(Error::DegreeMismatch { expected: n, got: l.degree() });
        }
    }
    let basis = MonomialBasis::new(d, n);
    let r = span.len();
    let dense: Vec<Vec<Scalar>> = span.iter().map(|l| l.to_dense(&basis)).collect::<Result<_>>()?;
    if FieldMatrix::from_columns(field, basis.len(), &dense)?.rank() < r {
        return Err(Error::LinearlyDependent);
    }

    // Unknowns: u_{k,i} row-major, then c_{l,j} row-major.
    // Equation block j: Σ u_{k,i} D(E_{k,i}) ℓ_j - Σ_l c_{l,j} ℓ_l = 0.
    let unknowns = d * d + r * r;
    let rows = basis.len() * r;
    let mut system = FieldMatrix::zeros(field, rows, unknowns);
    for k in 0..d {
        for i in 0..d {
            let mut e = FieldMatrix::zeros(field, d, d);
            e.set(k, i, field.one());
            for (j, l) in span.iter().enumerate() {
                let img = apply_derivation(&e, l)?.to_dense(&basis)?;
                for (row, v) in img.into_iter().enumerate() {
                    system.set(j * basis.len() + row, k * d + i, v);
                }
            }
        }
    }
    for l in 0..r {
        for j in 0..r {
            for (row, v) in dense[l].iter().enumerate() {
                system.set(j * basis.len() + row, d * d + l * r + j, -v);
            }
        }
    }

    let solutions: Vec<LieSolution> = system
        .kernel()
        .into_iter()
        .map(|v| LieSolution {
            u: FieldMatrix::from_vec(field, d, d, v[..d * d].to_vec()).expect("shape"),
            c: FieldMatrix::from_vec(field, r, r, v[d * d..].to_vec()).expect("shape"),
        })
        .collect();
    let dimension = solutions.len();
    Ok(LieStabReport {
        dimension,
        basis: solutions,
        pgl_dimension: dimension.saturating_sub(1),
        pgl_trivial: dimension == 1,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointStabReport {
    /// `|GL_d(F_q)|`; every element is visited.
    pub group_order: u64,
    pub scanned: u64,
    /// Stabilizing elements normalized so that the first nonzero entry
    /// (row-major) is 1, in enumeration order.
    pub elements: Vec<FieldMatrix>,
    /// `g · x = λ x` for each entry of `elements`.
    pub eigenvalues: Vec<Scalar>,
    pub trivial: bool,
}

/// `|GL_d(F_q)| = Π_{i<d} (q^d - q^i)`, or `None` on overflow.
pub fn gl_order(d: usize, q: u64) -> Option<u128> {
    let qd = (q as u128).checked_pow(d as u32)?;
    let mut acc: u128 = 1;
    let mut qi: u128 = 1;
    for _ in 0..d {
        acc = acc.checked_mul(qd - qi)?;
        qi = qi.checked_mul(q as u128)?;
    }
    Some(acc)
}

fn enumeration_guard() -> u128 {
    std::env::var(ENUMERATION_GUARD_VAR)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_ENUMERATION_GUARD)
}

/// Exhaustive `Stab_{PGL_d(F_q)}(F_q x)`. The guard defaults to
/// [`DEFAULT_ENUMERATION_GUARD`] and can be set through
/// [`ENUMERATION_GUARD_VAR`].
pub fn brute_point_stab_line(x: &GammaElement, q: u64) -> Result<PointStabReport> {
    brute_point_stab_line_with_guard(x, q, enumeration_guard())
}

pub fn brute_point_stab_line_with_guard(x: &GammaElement, q: u64, guard: u128) -> Result<PointStabReport> {
    let field = x.field();
    if !field.is_finite() {
        return Err(Error::InfiniteField);
    }
    if field.characteristic() != q {
        return Err(Error::FieldMismatch(field.characteristic(), q));
    }
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let d = x.dim();
    let count = gl_order(d, q).unwrap_or(u128::MAX);
    if count > guard {
        return Err(Error::EnumerationGuard { count, guard });
    }

    let mut engine = if q < 1 << 32 { fast::FpGamma::new(q, d, x.degree()) } else { None };
    let sparse = engine.as_ref().map(|e| e.from_element(x));

    let mut entries = vec![0u64; d * d];
    let mut scanned = 0u64;
    let mut elements = Vec::new();
    let mut eigenvalues = Vec::new();
    loop {
        if fast::invertible_mod_p(&entries, d, q) {
            scanned += 1;
            // Only the representative with leading entry 1 is tested.
            if entries.iter().find(|&&v| v != 0) == Some(&1) {
                let lambda = match (&mut engine, &sparse) {
                    (Some(engine), Some(sparse)) => {
                        let columns: Vec<Vec<u64>> =
                            (0..d).map(|i| (0..d).map(|k| entries[k * d + i]).collect()).collect();
                        let image = engine.act(&columns, sparse);
                        engine.proportional(sparse, &image).map(|v| field.from_u64(v))
                    }
                    _ => {
                        let g = to_matrix(field, d, &entries);
                        x.proportionality(&apply_gl(&g, x)?)
                    }
                };
                if let Some(lambda) = lambda {
                    elements.push(to_matrix(field, d, &entries));
                    eigenvalues.push(lambda);
                }
            }
        }
        // Row-major odometer: the last entry moves fastest.
        let mut pos = d * d;
        loop {
            if pos == 0 {
                let trivial = elements.len() == 1;
                return Ok(PointStabReport { group_order: count as u64, scanned, elements, eigenvalues, trivial });
            }
            pos -= 1;
            entries[pos] += 1;
            if entries[pos] < q {
                break;
            }
            entries[pos] = 0;
        }
    }
}

fn to_matrix(field: FieldSpec, d: usize, entries: &[u64]) -> FieldMatrix {
    FieldMatrix::from_vec(field, d, d, entries.iter().map(|&v| field.from_u64(v)).collect()).expect("shape")
}

/// Scales `g` so that its first nonzero entry (row-major) is 1.
pub fn normalize_mod_scalars(g: &FieldMatrix) -> Option<FieldMatrix> {
    let lead = g.entries().iter().find(|s| !s.is_zero())?;
    Some(g.scale(&lead.inv()?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TangencyReport {
    pub dim: usize,
    pub degree: u32,
    pub points_per_sample: usize,
    /// Sampled `u ∈ End(V)`; the induced derivation must always be tangent.
    pub induced_tested: usize,
    pub induced_failures: usize,
    /// Sampled `U ∈ End(Γⁿ(V))` outside the induced image.
    pub random_tested: usize,
    /// How many of those move some sampled Veronese point off its tangent space.
    pub random_failures: usize,
    /// Samples discarded because they were induced.
    pub random_skipped: usize,
}

/// Probes the Veronese embedding `[v] ↦ [v]_n`: induced derivations map
/// `[v]_n` into `span{[w]_1 [v]_{n-1}}`, while a generic endomorphism of
/// `Γⁿ(V)` does not. Statistics, not a proof.
pub fn veronese_tangency_check(
    field: FieldSpec,
    d: usize,
    n: u32,
    samples: usize,
    seed: u64,
) -> Result<TangencyReport> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidArgument("need d >= 1 and n >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = MonomialBasis::new(d, n);
    let big = basis.len();
    let points_per_sample = 4.max(d + 1);

    let random_scalar = |rng: &mut ChaCha8Rng| match field.order() {
        Some(p) => field.from_u64(rng.gen_range(0..p)),
        None => field.from_i64(rng.gen_range(-5..=5)),
    };
    let points = |rng: &mut ChaCha8Rng| -> Vec<Vec<Scalar>> {
        (0..points_per_sample)
            .map(|_| loop {
                let v: Vec<Scalar> = (0..d).map(|_| random_scalar(rng)).collect();
                if v.iter().any(|s| !s.is_zero()) {
                    break v;
                }
            })
            .collect()
    };

    // Tangent data at a point: the Veronese image and the span it must land in.
    let tangent = |v: &[Scalar]| -> Result<(Vec<Scalar>, FieldMatrix)> {
        let pure = GammaElement::pure_symbol(field, v, n)?;
        let lower = GammaElement::pure_symbol(field, v, n - 1)?;
        let mut cols = vec![pure.to_dense(&basis)?];
        for j in 0..d {
            let mut w = vec![field.zero(); d];
            w[j] = field.one();
            cols.push(GammaElement::pure_symbol(field, &w, 1)?.mul(&lower)?.to_dense(&basis)?);
        }
        Ok((cols[0].clone(), FieldMatrix::from_columns(field, big, &cols)?))
    };
    let inside = |span: &FieldMatrix, w: Vec<Scalar>| -> Result<bool> {
        let mut cols: Vec<Vec<Scalar>> = (0..span.cols()).map(|c| span.column(c)).collect();
        let before = span.rank();
        cols.push(w);
        Ok(FieldMatrix::from_columns(field, big, &cols)?.rank() == before)
    };

    // Flattened images of the elementary derivations, to recognize induced U.
    let mut induced_cols = Vec::with_capacity(d * d);
    for k in 0..d {
        for i in 0..d {
            let mut e = FieldMatrix::zeros(field, d, d);
            e.set(k, i, field.one());
            induced_cols.push(derivation_action(&e, n)?.entries().to_vec());
        }
    }
    let induced_rank = FieldMatrix::from_columns(field, big * big, &induced_cols)?.rank();

    let mut report = TangencyReport {
        dim: d,
        degree: n,
        points_per_sample,
        induced_tested: 0,
        induced_failures: 0,
        random_tested: 0,
        random_failures: 0,
        random_skipped: 0,
    };
    for _ in 0..samples {
        let pts = points(&mut rng);
        let u_entries: Vec<Scalar> = (0..d * d).map(|_| random_scalar(&mut rng)).collect();
        let u = FieldMatrix::from_vec(field, d, d, u_entries)?;
        let du = derivation_action(&u, n)?;
        report.induced_tested += 1;
        for v in &pts {
            let (x, span) = tangent(v)?;
            if !inside(&span, du.mul_vec(&x)?)? {
                report.induced_failures += 1;
                break;
            }
        }

        let big_entries: Vec<Scalar> = (0..big * big).map(|_| random_scalar(&mut rng)).collect();
        let big_u = FieldMatrix::from_vec(field, big, big, big_entries)?;
        let mut cols = induced_cols.clone();
        cols.push(big_u.entries().to_vec());
        if FieldMatrix::from_columns(field, big * big, &cols)?.rank() == induced_rank {
            report.random_skipped += 1;
            continue;
        }
        report.random_tested += 1;
        for v in &pts {
            let (x, span) = tangent(v)?;
            if !inside(&span, big_u.mul_vec(&x)?)? {
                report.random_failures += 1;
                break;
            }
        }
    }
    Ok(report)
}
