//! Sparse elements of the divided powers `Γⁿ(V)` and symmetric powers
//! `Symⁿ(V)` of `V = F^d`, written in their monomial bases.
//!
//! A basis symbol of `Γⁿ(V)` is `[e_1]_{a_1} ⋯ [e_d]_{a_d}` and multiplies by
//! `[e]_a · [e]_b = Π_i C(a_i + b_i, a_i) [e]_{a+b}`; a basis monomial of
//! `Symⁿ(V)` is `e_1^{a_1} ⋯ e_d^{a_d}` and multiplies without coefficients.
//! Both are stored as maps from [`Composition`] to nonzero [`Scalar`].
//!
//! Pure symbols do not span `Γⁿ(V)` over small fields, so nothing here is
//! ever expressed through them.

mod actions;
mod pairing;

pub use actions::{
    apply_derivation, apply_gl, derivation_action, gamma_to_sym, gamma_to_sym_matrix, induced_gl_action,
    sym_to_gamma, sym_to_gamma_matrix,
};
pub use pairing::{pairing, pairing_gram_matrix};

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fmt;
use std::marker::PhantomData;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::multiindex::{binomial_scalar, compositions, Composition};
use crate::scalars::{FieldSpec, Scalar};

/// Multiplication rule distinguishing the two graded algebras.
pub trait Algebra: Clone + fmt::Debug + PartialEq + Eq + Send + Sync + 'static {
    const NAME: &'static str;
    /// Whether basis products carry the binomial factors `Π C(a_i+b_i, a_i)`.
    const DIVIDED: bool;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Divided;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Symmetric;

impl Algebra for Divided {
    const NAME: &'static str = "gamma";
    const DIVIDED: bool = true;
}

impl Algebra for Symmetric {
    const NAME: &'static str = "sym";
    const DIVIDED: bool = false;
}

/// A homogeneous element of degree `degree` in `d = dim` variables.
#[derive(Clone, PartialEq, Eq)]
pub struct Graded<K: Algebra> {
    field: FieldSpec,
    dim: usize,
    degree: u32,
    terms: BTreeMap<Composition, Scalar>,
    _kind: PhantomData<K>,
}

pub type GammaElement = Graded<Divided>;
pub type SymElement = Graded<Symmetric>;

impl<K: Algebra> Graded<K> {
    pub fn zero(field: FieldSpec, dim: usize, degree: u32) -> Self {
        Graded { field, dim, degree, terms: BTreeMap::new(), _kind: PhantomData }
    }

    /// The basis element indexed by `c`.
    pub fn basis(field: FieldSpec, c: Composition) -> Self {
        let mut x = Self::zero(field, c.dim(), c.degree());
        x.terms.insert(c, field.one());
        x
    }

    pub fn from_terms<I>(field: FieldSpec, dim: usize, degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Composition, Scalar)>,
    {
        let mut x = Self::zero(field, dim, degree);
        for (c, s) in terms {
            field.check(s.field())?;
            if c.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: c.dim() });
            }
            if c.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, got: c.degree() });
            }
            x.add_term(c, &s);
        }
        Ok(x)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Composition, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, c: &Composition) -> Scalar {
        self.terms.get(c).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub(crate) fn add_term(&mut self, c: Composition, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        match self.terms.entry(c) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(s.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += s;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        self.field.check(other.field)?;
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, got: other.degree });
        }
        let mut out = self.clone();
        for (c, s) in &other.terms {
            out.add_term(c.clone(), s);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-self.field.one())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero(self.field, self.dim, self.degree);
        if s.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(c, v)| (c.clone(), v * s)).collect();
        out
    }

    /// The product in `Γ(V)` or `Sym(V)`; degrees add.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let mut out = Self::zero(self.field, self.dim, self.degree + other.degree);
        if self.is_zero() || other.is_zero() {
            return Ok(out);
        }
        let table = K::DIVIDED.then(|| BinomialTable::new(self.field, self.degree, other.degree));
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut coeff = x * y;
                if let Some(t) = &table {
                    for (&ai, &bi) in a.parts().iter().zip(b.parts()) {
                        let f = t.get(ai, bi);
                        if f.is_zero() {
                            coeff = self.field.zero();
                            break;
                        }
                        if !f.is_one() {
                            coeff *= f;
                        }
                    }
                }
                if !coeff.is_zero() {
                    out.add_term(a.add(b), &coeff);
                }
            }
        }
        Ok(out)
    }

    /// Product of several factors; the empty product is `1` in degree zero.
    pub fn product(field: FieldSpec, dim: usize, factors: &[Self]) -> Result<Self> {
        let mut acc = Self::basis(field, Composition::new(vec![0; dim]));
        for f in factors {
            acc = acc.mul(f)?;
        }
        Ok(acc)
    }

    /// Dense coordinates in the order of [`MonomialBasis`].
    pub fn to_dense(&self, basis: &MonomialBasis) -> Result<Vec<Scalar>> {
        if (basis.dim, basis.degree) != (self.dim, self.degree) {
            return Err(Error::DegreeMismatch { expected: basis.degree, got: self.degree });
        }
        let mut v = vec![self.field.zero(); basis.len()];
        for (c, s) in &self.terms {
            v[basis.index_of(c).expect("composition of the right shape")] = s.clone();
        }
        Ok(v)
    }

    pub fn from_dense(field: FieldSpec, basis: &MonomialBasis, v: &[Scalar]) -> Result<Self> {
        if v.len() != basis.len() {
            return Err(Error::DimensionMismatch { expected: basis.len(), got: v.len() });
        }
        Self::from_terms(field, basis.dim, basis.degree, basis.comps.iter().cloned().zip(v.iter().cloned()))
    }

    /// `Some(λ)` with `other = λ · self`, `λ ≠ 0`.
    pub fn proportionality(&self, other: &Self) -> Option<Scalar> {
        if self.field != other.field || self.dim != other.dim || self.degree != other.degree {
            return None;
        }
        if self.is_zero() || self.terms.len() != other.terms.len() {
            return None;
        }
        let (c0, x0) = self.terms.iter().next()?;
        let lambda = &other.terms.get(c0)?.clone() / x0;
        self.terms
            .iter()
            .all(|(c, x)| other.terms.get(c) == Some(&(x * &lambda)))
            .then_some(lambda)
    }
}

impl GammaElement {
    /// `[v]_n = Σ_{|a| = n} (Π_i v_i^{a_i}) [e]_a`.
    pub fn pure_symbol(field: FieldSpec, v: &[Scalar], n: u32) -> Result<Self> {
        let mut x = Self::zero(field, v.len(), n);
        for s in v {
            field.check(s.field())?;
        }
        let support: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
        if support.is_empty() {
            if n == 0 {
                x.terms.insert(Composition::new(vec![0; v.len()]), field.one());
            }
            return Ok(x);
        }
        // Powers v_i^k for k <= n.
        let powers: Vec<Vec<Scalar>> = support
            .iter()
            .map(|&i| {
                let mut row = Vec::with_capacity(n as usize + 1);
                let mut acc = field.one();
                for _ in 0..=n {
                    row.push(acc.clone());
                    acc = &acc * &v[i];
                }
                row
            })
            .collect();
        for sub in compositions(n, support.len()) {
            let mut coeff = field.one();
            let mut parts = vec![0u32; v.len()];
            for (slot, (&i, &k)) in support.iter().zip(sub.parts()).enumerate() {
                parts[i] = k;
                coeff *= &powers[slot][k as usize];
            }
            x.terms.insert(Composition::new(parts), coeff);
        }
        Ok(x)
    }

    /// The Veronese point `[v]_n` of a nonzero vector.
    pub fn veronese(field: FieldSpec, v: &[Scalar], n: u32) -> Result<Self> {
        if v.iter().all(Scalar::is_zero) {
            return Err(Error::ZeroVector);
        }
        Self::pure_symbol(field, v, n)
    }
}

impl SymElement {
    /// The degree-one element `Σ v_i e_i`.
    pub fn linear(field: FieldSpec, v: &[Scalar]) -> Result<Self> {
        let d = v.len();
        Self::from_terms(field, d, 1, v.iter().enumerate().map(|(i, s)| (Composition::unit(d, i, 1), s.clone())))
    }

    /// `v_1 v_2 ⋯ v_n` for vectors of a common length.
    pub fn product_of_linear(field: FieldSpec, dim: usize, vs: &[Vec<Scalar>]) -> Result<Self> {
        let factors = vs.iter().map(|v| Self::linear(field, v)).collect::<Result<Vec<_>>>()?;
        Self::product(field, dim, &factors)
    }

    /// Evaluates the polynomial function at `point` (a vector of `V∨` when
    /// this element lives in `Sym(V)`).
    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: point.len() });
        }
        let mut acc = self.field.zero();
        for (c, s) in &self.terms {
            let mut term = s.clone();
            for (x, &k) in point.iter().zip(c.parts()) {
                term *= &x.pow(k as u64);
            }
            acc += &term;
        }
        Ok(acc)
    }
}

/// `C(a+b, a)` as scalars for `a <= max_a`, `b <= max_b`.
pub(crate) struct BinomialTable {
    width: usize,
    values: Vec<Scalar>,
}

impl BinomialTable {
    pub(crate) fn new(field: FieldSpec, max_a: u32, max_b: u32) -> Self {
        let width = max_b as usize + 1;
        let mut values = Vec::with_capacity((max_a as usize + 1) * width);
        for a in 0..=max_a as u64 {
            for b in 0..=max_b as u64 {
                values.push(binomial_scalar(field, a, b));
            }
        }
        BinomialTable { width, values }
    }

    pub(crate) fn get(&self, a: u32, b: u32) -> &Scalar {
        &self.values[a as usize * self.width + b as usize]
    }
}

/// The monomial basis of degree `degree` in `dim` variables, with a
/// position index.
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    dim: usize,
    degree: u32,
    comps: Vec<Composition>,
    index: HashMap<Composition, usize>,
}

impl MonomialBasis {
    pub fn new(dim: usize, degree: u32) -> Self {
        let comps = compositions(degree, dim);
        let index = comps.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        MonomialBasis { dim, degree, comps, index }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn compositions(&self) -> &[Composition] {
        &self.comps
    }

    pub fn index_of(&self, c: &Composition) -> Option<usize> {
        self.index.get(c).copied()
    }
}

impl<K: Algebra> fmt::Debug for Graded<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(c, s)| format!("{s}*{c:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// JSON shape shared by both element kinds.
#[derive(Serialize, Deserialize)]
struct RawElement {
    char: u64,
    dim: usize,
    degree: u32,
    terms: Vec<(Vec<u32>, String)>,
}

impl<K: Algebra> Serialize for Graded<K> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawElement {
            char: self.field.characteristic(),
            dim: self.dim,
            degree: self.degree,
            terms: self.terms.iter().map(|(c, v)| (c.parts().to_vec(), v.to_string())).collect(),
        }
        .serialize(s)
    }
}

impl<'de, K: Algebra> Deserialize<'de> for Graded<K> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawElement::deserialize(d)?;
        let field = FieldSpec::new(raw.char).map_err(D::Error::custom)?;
        let terms = raw
            .terms
            .into_iter()
            .map(|(parts, s)| Ok((Composition::new(parts), field.parse_scalar(&s)?)))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Self::from_terms(field, raw.dim, raw.degree, terms).map_err(D::Error::custom)
    }
}

/// `[x]_a [y]_b` for vectors of `field`; a convenience used throughout.
pub fn gamma_mul(x: &GammaElement, y: &GammaElement) -> Result<GammaElement> {
    x.mul(y)
}

/// `[v]_n`.
pub fn pure_symbol(field: FieldSpec, v: &[Scalar], n: u32) -> Result<GammaElement> {
    GammaElement::pure_symbol(field, v, n)
}

/// `[v]_n` for `v ≠ 0`.
pub fn veronese(field: FieldSpec, v: &[Scalar], n: u32) -> Result<GammaElement> {
    GammaElement::veronese(field, v, n)
}
