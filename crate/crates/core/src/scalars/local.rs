use std::fmt;
use std::sync::Arc;

use super::{FieldSpec, Scalar};
use crate::error::{Error, Result};

/// A finite-dimensional commutative local algebra with residue field equal
/// to the base field, given by structure constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalAlgebra {
    base: FieldSpec,
    labels: Vec<String>,
    // table[(i * dim + j) * dim + k]: coefficient of b_k in b_i * b_j.
    table: Vec<Scalar>,
    unit: Vec<Scalar>,
    maximal: Vec<usize>,
    residue: Vec<Scalar>,
}

impl LocalAlgebra {
    /// `F[ε]/(ε²)` with basis `(1, ε)`.
    pub fn dual_numbers(base: FieldSpec) -> Arc<Self> {
        let mut alg = Self::truncated_unchecked(base, 2);
        alg.labels = vec!["1".into(), "eps".into()];
        Arc::new(alg)
    }

    /// `F[t]/(t^k)` with basis `(1, t, …, t^{k-1})`.
    pub fn truncated(base: FieldSpec, k: usize) -> Result<Arc<Self>> {
        if k == 0 {
            return Err(Error::InvalidArgument("truncation order must be positive".into()));
        }
        Ok(Arc::new(Self::truncated_unchecked(base, k)))
    }

    fn truncated_unchecked(base: FieldSpec, k: usize) -> Self {
        let mut table = vec![base.zero(); k * k * k];
        for i in 0..k {
            for j in 0..k {
                if i + j < k {
                    table[(i * k + j) * k + i + j] = base.one();
                }
            }
        }
        let mut unit = vec![base.zero(); k];
        unit[0] = base.one();
        let residue = unit.clone();
        LocalAlgebra {
            base,
            labels: (0..k)
                .map(|i| match i {
                    0 => "1".to_string(),
                    1 => "t".to_string(),
                    _ => format!("t^{i}"),
                })
                .collect(),
            table,
            unit,
            maximal: (1..k).collect(),
            residue,
        }
    }

    /// Builds an algebra from explicit structure constants and checks that it
    /// is commutative, associative, unital and local with the given residue
    /// map and maximal ideal.
    pub fn from_structure(
        base: FieldSpec,
        labels: Vec<String>,
        table: Vec<Scalar>,
        unit: Vec<Scalar>,
        maximal: Vec<usize>,
        residue: Vec<Scalar>,
    ) -> Result<Arc<Self>> {
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::InvalidArgument("algebra must be nonzero".into()));
        }
        for (len, expected) in [(table.len(), dim * dim * dim), (unit.len(), dim), (residue.len(), dim)] {
            if len != expected {
                return Err(Error::DimensionMismatch { expected, got: len });
            }
        }
        for s in table.iter().chain(&unit).chain(&residue) {
            base.check(s.field())?;
        }
        if let Some(&bad) = maximal.iter().find(|&&i| i >= dim) {
            return Err(Error::IndexOutOfRange { index: bad, dim });
        }
        let alg = Arc::new(LocalAlgebra { base, labels, table, unit, maximal, residue });
        alg.validate()?;
        Ok(alg)
    }

    fn validate(self: &Arc<Self>) -> Result<()> {
        let dim = self.dim();
        let basis: Vec<LocalElem> = (0..dim).map(|i| LocalElem::basis(self, i)).collect();
        let one = LocalElem::one(self);
        let fail = |what: &str| Err(Error::InvalidArgument(format!("structure constants: {what}")));
        for x in &basis {
            if x.mul(&one)? != *x {
                return fail("not unital");
            }
            for y in &basis {
                let xy = x.mul(y)?;
                if xy != y.mul(x)? {
                    return fail("not commutative");
                }
                if xy.residue() != &x.residue() * &y.residue() {
                    return fail("residue map is not multiplicative");
                }
                for z in &basis {
                    if xy.mul(z)? != x.mul(&y.mul(z)?)? {
                        return fail("not associative");
                    }
                }
            }
        }
        if !one.residue().is_one() {
            return fail("residue of 1 is not 1");
        }
        for &i in &self.maximal {
            if !basis[i].residue().is_zero() || !basis[i].pow(dim as u64).is_zero() {
                return fail("maximal ideal generator is not a nilpotent residue-zero element");
            }
        }
        // dim m = dim A - 1 means the kernel of the residue map is exactly m.
        if self.maximal.len() + 1 != dim {
            return fail("maximal ideal must have codimension one");
        }
        Ok(())
    }

    pub fn base(&self) -> FieldSpec {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Indices of the basis elements spanning the maximal ideal.
    pub fn maximal_ideal(&self) -> &[usize] {
        &self.maximal
    }

    /// Residue coordinates: image of each basis element in the base field.
    pub fn residue_map(&self) -> &[Scalar] {
        &self.residue
    }

    fn structure(&self, i: usize, j: usize, k: usize) -> &Scalar {
        let d = self.dim();
        &self.table[(i * d + j) * d + k]
    }

    /// Every element of the algebra, enumerated as coordinate odometer.
    pub fn elements(self: &Arc<Self>) -> Result<Vec<LocalElem>> {
        let field = self.base.elements()?;
        let count = (field.len() as u128).pow(self.dim() as u32);
        let mut out = Vec::with_capacity(count as usize);
        for idx in 0..count {
            let mut rest = idx;
            let coords = (0..self.dim())
                .map(|_| {
                    let c = field[(rest % field.len() as u128) as usize].clone();
                    rest /= field.len() as u128;
                    c
                })
                .collect();
            out.push(LocalElem { algebra: Arc::clone(self), coords });
        }
        Ok(out)
    }
}

/// Dual numbers `F[ε]`, `ε² = 0`.
pub fn make_dual_numbers(spec: FieldSpec) -> Arc<LocalAlgebra> {
    LocalAlgebra::dual_numbers(spec)
}

/// `F[t]/(t^k)`.
pub fn truncated_poly_algebra(spec: FieldSpec, k: usize) -> Result<Arc<LocalAlgebra>> {
    LocalAlgebra::truncated(spec, k)
}

/// Product of two elements of the same local algebra.
pub fn local_mul(x: &LocalElem, y: &LocalElem) -> Result<LocalElem> {
    x.mul(y)
}

/// An element of a [`LocalAlgebra`], in basis coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct LocalElem {
    algebra: Arc<LocalAlgebra>,
    coords: Vec<Scalar>,
}

impl LocalElem {
    pub fn new(algebra: &Arc<LocalAlgebra>, coords: Vec<Scalar>) -> Result<Self> {
        if coords.len() != algebra.dim() {
            return Err(Error::DimensionMismatch { expected: algebra.dim(), got: coords.len() });
        }
        for c in &coords {
            algebra.base.check(c.field())?;
        }
        Ok(LocalElem { algebra: Arc::clone(algebra), coords })
    }

    pub fn from_ints(algebra: &Arc<LocalAlgebra>, coords: &[i64]) -> Result<Self> {
        Self::new(algebra, algebra.base.vector(coords))
    }

    pub fn zero(algebra: &Arc<LocalAlgebra>) -> Self {
        LocalElem { algebra: Arc::clone(algebra), coords: vec![algebra.base.zero(); algebra.dim()] }
    }

    pub fn one(algebra: &Arc<LocalAlgebra>) -> Self {
        LocalElem { algebra: Arc::clone(algebra), coords: algebra.unit.clone() }
    }

    pub fn basis(algebra: &Arc<LocalAlgebra>, i: usize) -> Self {
        let mut e = Self::zero(algebra);
        e.coords[i] = algebra.base.one();
        e
    }

    /// The image of a base-field scalar.
    pub fn from_scalar(algebra: &Arc<LocalAlgebra>, s: &Scalar) -> Self {
        Self::one(algebra).scale(s)
    }

    pub fn algebra(&self) -> &Arc<LocalAlgebra> {
        &self.algebra
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    fn same_algebra(&self, other: &LocalElem) -> Result<()> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    /// The residue `ρ(x)` in the base field.
    pub fn residue(&self) -> Scalar {
        let mut acc = self.algebra.base.zero();
        for (c, r) in self.coords.iter().zip(&self.algebra.residue) {
            acc += &(c * r);
        }
        acc
    }

    pub fn is_unit(&self) -> bool {
        !self.residue().is_zero()
    }

    pub fn add(&self, other: &LocalElem) -> Result<LocalElem> {
        self.same_algebra(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(LocalElem { algebra: Arc::clone(&self.algebra), coords })
    }

    pub fn sub(&self, other: &LocalElem) -> Result<LocalElem> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LocalElem {
        LocalElem {
            algebra: Arc::clone(&self.algebra),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> LocalElem {
        LocalElem {
            algebra: Arc::clone(&self.algebra),
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    pub fn mul(&self, other: &LocalElem) -> Result<LocalElem> {
        self.same_algebra(other)?;
        let alg = &self.algebra;
        let d = alg.dim();
        let mut coords = vec![alg.base.zero(); d];
        for (i, x) in self.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coords.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, out) in coords.iter_mut().enumerate() {
                    let s = alg.structure(i, j, k);
                    if !s.is_zero() {
                        *out += &(&xy * s);
                    }
                }
            }
        }
        Ok(LocalElem { algebra: Arc::clone(alg), coords })
    }

    pub fn pow(&self, e: u64) -> LocalElem {
        let mut acc = LocalElem::one(&self.algebra);
        for _ in 0..e {
            acc = acc.mul(self).expect("same algebra");
        }
        acc
    }
}

impl fmt::Debug for LocalElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, l) in self.coords.iter().zip(&self.algebra.labels) {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}*{l}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    #[test]
    fn dual_numbers_table() {
        let f2 = FieldSpec::prime(2).unwrap();
        let a = make_dual_numbers(f2);
        let eps = LocalElem::basis(&a, 1);
        assert!(local_mul(&eps, &eps).unwrap().is_zero());
        assert_eq!(a.maximal_ideal(), &[1]);
    }

    #[test]
    fn one_plus_eps_times_one_minus_eps() {
        let a = make_dual_numbers(q());
        let x = LocalElem::from_ints(&a, &[1, 1]).unwrap();
        let y = LocalElem::from_ints(&a, &[1, -1]).unwrap();
        assert_eq!(x.mul(&y).unwrap(), LocalElem::one(&a));
    }

    #[test]
    fn residue_of_dual_number() {
        let f5 = FieldSpec::prime(5).unwrap();
        let a = make_dual_numbers(f5);
        let x = LocalElem::from_ints(&a, &[3, 2]).unwrap();
        assert_eq!(x.residue(), f5.from_i64(3));
    }

    #[test]
    fn dual_product_expands() {
        let a = make_dual_numbers(q());
        let x = LocalElem::from_ints(&a, &[2, 1]).unwrap();
        let y = LocalElem::from_ints(&a, &[3, 1]).unwrap();
        assert_eq!(x.mul(&y).unwrap(), LocalElem::from_ints(&a, &[6, 5]).unwrap());
    }

    #[test]
    fn truncation_rule() {
        let f2 = FieldSpec::prime(2).unwrap();
        let a = truncated_poly_algebra(f2, 3).unwrap();
        assert_eq!(a.dim(), 3);
        let t = LocalElem::basis(&a, 1);
        let t2 = t.mul(&t).unwrap();
        assert_eq!(t2, LocalElem::basis(&a, 2));
        assert!(t2.mul(&t).unwrap().is_zero());
    }

    #[test]
    fn small_truncations() {
        let f = FieldSpec::prime(3).unwrap();
        let one = truncated_poly_algebra(f, 1).unwrap();
        assert_eq!(one.dim(), 1);
        assert!(one.maximal_ideal().is_empty());
        let two = truncated_poly_algebra(f, 2).unwrap();
        let dual = make_dual_numbers(f);
        assert_eq!(two.table, dual.table);
        assert!(truncated_poly_algebra(f, 0).is_err());
    }

    #[test]
    fn mismatched_algebras() {
        let a = make_dual_numbers(q());
        let b = truncated_poly_algebra(q(), 3).unwrap();
        assert_eq!(
            local_mul(&LocalElem::one(&a), &LocalElem::one(&b)).unwrap_err(),
            Error::AlgebraMismatch
        );
    }

    #[test]
    fn maximal_ideal_is_nilpotent() {
        for p in [0, 2, 3, 5] {
            let f = FieldSpec::new(p).unwrap();
            for k in 1..6 {
                let a = truncated_poly_algebra(f, k).unwrap();
                for &i in a.maximal_ideal() {
                    assert!(LocalElem::basis(&a, i).pow(k as u64).is_zero());
                }
            }
        }
    }

    #[test]
    fn every_maximal_element_is_nilpotent_f2_cubed() {
        let f2 = FieldSpec::prime(2).unwrap();
        let a = truncated_poly_algebra(f2, 3).unwrap();
        for x in a.elements().unwrap() {
            if x.residue().is_zero() {
                assert!(x.pow(3).is_zero(), "{x:?}");
            }
        }
    }

    #[test]
    fn from_structure_rejects_non_local() {
        // F x F with componentwise product is not local.
        let f = q();
        let (z, o) = (f.zero(), f.one());
        let mut table = vec![z.clone(); 8];
        table[0] = o.clone(); // b0*b0 = b0
        table[7] = o.clone(); // b1*b1 = b1
        let res = LocalAlgebra::from_structure(
            f,
            vec!["a".into(), "b".into()],
            table,
            vec![o.clone(), o.clone()],
            vec![1],
            vec![o.clone(), z],
        );
        assert!(res.is_err());
    }

    #[test]
    fn from_structure_accepts_dual_numbers() {
        let f = FieldSpec::prime(3).unwrap();
        let d = make_dual_numbers(f);
        let rebuilt = LocalAlgebra::from_structure(
            f,
            d.labels.clone(),
            d.table.clone(),
            d.unit.clone(),
            d.maximal.clone(),
            d.residue.clone(),
        )
        .unwrap();
        assert_eq!(*rebuilt, *d);
    }
}
