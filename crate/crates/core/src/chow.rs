//! `CH¹` and `CH²` of the blow-up of `Pᴺ` along two disjoint centers with
//! cyclic Picard groups, the automorphism obstruction search, and point
//! counts of projective bundles.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalars::is_prime;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BlowupModel {
    /// Dimension of the ambient projective space.
    pub n: u32,
    /// Dimensions of the centers `Y_1`, `Y_2`.
    pub dims: [u32; 2],
    /// `ι_i^*[H] = deg_i · h_i` in `Pic(Y_i) = Z h_i`.
    pub degs: [i64; 2],
}

impl BlowupModel {
    pub fn new(n: u32, dims: [u32; 2], degs: [i64; 2]) -> Result<Self> {
        for i in 0..2 {
            if dims[i] == 0 {
                return Err(Error::InvalidArgument(format!("center {} has dimension 0", i + 1)));
            }
            if dims[i] + 3 > n {
                return Err(Error::InvalidArgument(format!("center {} has codimension below 3", i + 1)));
            }
            if degs[i] < 1 {
                return Err(Error::InvalidArgument(format!("center {} has degree below 1", i + 1)));
            }
        }
        Ok(BlowupModel { n, dims, degs })
    }

    pub fn codims(&self) -> [u32; 2] {
        [self.n - self.dims[0], self.n - self.dims[1]]
    }
}

/// `a β*H + b_1 E_1 + b_2 E_2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct ChowClassDeg1 {
    pub a: i64,
    pub b: [i64; 2],
}

impl ChowClassDeg1 {
    pub const H: Self = ChowClassDeg1 { a: 1, b: [0, 0] };
    pub const E1: Self = ChowClassDeg1 { a: 0, b: [1, 0] };
    pub const E2: Self = ChowClassDeg1 { a: 0, b: [0, 1] };

    pub fn new(a: i64, b1: i64, b2: i64) -> Self {
        ChowClassDeg1 { a, b: [b1, b2] }
    }

    pub fn exceptional(i: usize) -> Self {
        [Self::E1, Self::E2][i]
    }
}

/// `h2 (β*H)² + Σ_i (y_i π_i^* h_i + z_i ζ_i)`, the `i`-th pair living in
/// `Pic(E_i) ⊂ CH²`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ChowClassDeg2 {
    pub h2: i64,
    pub y: [i64; 2],
    pub z: [i64; 2],
}

impl ChowClassDeg2 {
    pub fn is_zero(&self) -> bool {
        *self == Self::default()
    }
}

/// The product `CH¹ × CH¹ → CH²`, bilinear from
/// `(β*H)² = (β*H)²`, `β*H · E_i = deg_i π_i^* h_i`, `E_i² = -ζ_i`,
/// `E_1 · E_2 = 0`.
pub fn mul_deg1(model: &BlowupModel, x: &ChowClassDeg1, y: &ChowClassDeg1) -> ChowClassDeg2 {
    let mut out = ChowClassDeg2 { h2: x.a * y.a, ..Default::default() };
    for i in 0..2 {
        out.y[i] = model.degs[i] * (x.a * y.b[i] + y.a * x.b[i]);
        out.z[i] = -x.b[i] * y.b[i];
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Both images mixed: the `(β*H)²` part `a_1 a_2` is nonzero.
    BothMixed,
    /// One `E_j` fixed, the other image mixed: the `π_j^* h_j` part
    /// `a deg_j` is nonzero.
    OneFixed,
    /// Some `f(E_i) = E_j` with `i ≠ j`, excluded since `E_1 ≇ E_2`.
    Exchanged,
    Identity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub images: [ChowClassDeg1; 2],
    pub branch: Branch,
    pub product: ChowClassDeg2,
    pub obstructed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiIsoReport {
    pub model: BlowupModel,
    pub bound: i64,
    pub candidates: Vec<Candidate>,
    pub both_mixed: usize,
    pub one_fixed: usize,
    pub exchanged: usize,
    /// Candidates other than the identity surviving every check.
    pub unobstructed_nontrivial: usize,
}

/// Runs through images `f(E_i) ∈ {E_1, E_2} ∪ {a β*H - b E_1 - c E_2 :
/// 1 ≤ a ≤ bound, 0 ≤ b, c ≤ bound}` and checks each pair against
/// `f(E_1) · f(E_2) = E_1 · E_2 = 0`.
pub fn phi_iso_search(model: &BlowupModel, bound: i64) -> Result<PhiIsoReport> {
    if bound < 1 {
        return Err(Error::InvalidArgument("bound must be at least 1".into()));
    }
    let mut mixed = Vec::new();
    for a in 1..=bound {
        for b in 0..=bound {
            for c in 0..=bound {
                mixed.push(ChowClassDeg1::new(a, -b, -c));
            }
        }
    }
    let choices: Vec<(Option<usize>, ChowClassDeg1)> = [0, 1]
        .into_iter()
        .map(|j| (Some(j), ChowClassDeg1::exceptional(j)))
        .chain(mixed.iter().map(|&m| (None, m)))
        .collect();
    let target = mul_deg1(model, &ChowClassDeg1::E1, &ChowClassDeg1::E2);

    let mut report = PhiIsoReport {
        model: *model,
        bound,
        candidates: Vec::new(),
        both_mixed: 0,
        one_fixed: 0,
        exchanged: 0,
        unobstructed_nontrivial: 0,
    };
    for &(j1, f1) in &choices {
        for &(j2, f2) in &choices {
            let product = mul_deg1(model, &f1, &f2);
            let branch = match (j1, j2) {
                (Some(0), Some(1)) => Branch::Identity,
                (Some(1), _) | (_, Some(0)) => Branch::Exchanged,
                (None, None) => Branch::BothMixed,
                _ => Branch::OneFixed,
            };
            let obstructed = match branch {
                Branch::BothMixed => product.h2 != 0,
                Branch::OneFixed => {
                    let j = j1.or(j2).expect("one image fixed");
                    product.y[j] != 0
                }
                Branch::Exchanged => true,
                Branch::Identity => product != target,
            };
            match branch {
                Branch::BothMixed => report.both_mixed += 1,
                Branch::OneFixed => report.one_fixed += 1,
                Branch::Exchanged => report.exchanged += 1,
                Branch::Identity => {}
            }
            if !obstructed && branch != Branch::Identity {
                report.unobstructed_nontrivial += 1;
            }
            report.candidates.push(Candidate { images: [f1, f2], branch, product, obstructed });
        }
    }
    Ok(report)
}

/// `p` with `q = p^k`, if any.
pub fn prime_power_base(q: u64) -> Option<u64> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|&d| q % d == 0)?;
    let mut rest = q;
    while rest % p == 0 {
        rest /= p;
    }
    (rest == 1 && is_prime(p)).then_some(p)
}

/// `|P^{a-1} × P^{m-1}|(F_q) = (q^a - 1)(q^m - 1) / (q - 1)²`, the point count of
/// any Zariski-locally trivial `P^{m-1}`-bundle over `P^{a-1}`.
pub fn projective_bundle_count(a: u32, m: u32, q: u64) -> Result<BigUint> {
    if a < 2 || m < 2 {
        return Err(Error::InvalidArgument("a and m must be at least 2".into()));
    }
    if prime_power_base(q).is_none() {
        return Err(Error::InvalidArgument(format!("{q} is not a prime power")));
    }
    let q = BigUint::from(q);
    let one = BigUint::one();
    let num = (q.pow(a) - &one) * (q.pow(m) - &one);
    let den = (&q - &one) * (&q - &one);
    debug_assert!((&num % &den).is_zero());
    Ok(num / den)
}

/// Coefficients of `(X^a - 1)(X^m - 1)`, constant term first.
pub fn bundle_polynomial(a: u32, m: u32) -> Vec<i64> {
    let mut c = vec![0i64; (a + m) as usize + 1];
    c[(a + m) as usize] += 1;
    c[a as usize] -= 1;
    c[m as usize] -= 1;
    c[0] += 1;
    c
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LemEndVerdict {
    pub polynomials_equal: bool,
    /// `m_1 = a_2` and `m_2 = a_1`.
    pub swapped: bool,
}

/// Compares `(X^{a_1} - 1)(X^{m_1} - 1)` with `(X^{a_2} - 1)(X^{m_2} - 1)`.
/// Equality forces `m_1 = a_2`, `m_2 = a_1`; this is asserted.
pub fn lemend_conclude(a1: u32, m1: u32, a2: u32, m2: u32) -> Result<LemEndVerdict> {
    if [a1, m1, a2, m2].iter().any(|&k| k < 2) {
        return Err(Error::InvalidArgument("exponents must be at least 2".into()));
    }
    if a1 == a2 {
        return Err(Error::InvalidArgument("a1 = a2".into()));
    }
    let equal = bundle_polynomial(a1, m1) == bundle_polynomial(a2, m2);
    let swapped = m1 == a2 && m2 == a1;
    if equal {
        assert!(swapped, "equal bundle polynomials with a1 != a2 must swap exponents");
    }
    Ok(LemEndVerdict { polynomials_equal: equal, swapped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn model() -> BlowupModel {
        BlowupModel::new(10, [2, 3], [1, 5]).unwrap()
    }

    #[test]
    fn product_table() {
        let m = model();
        let (h, e1, e2) = (ChowClassDeg1::H, ChowClassDeg1::E1, ChowClassDeg1::E2);
        assert!(mul_deg1(&m, &e1, &e2).is_zero());
        assert_eq!(mul_deg1(&m, &e1, &e1), ChowClassDeg2 { z: [-1, 0], ..Default::default() });
        assert_eq!(mul_deg1(&m, &e2, &e2), ChowClassDeg2 { z: [0, -1], ..Default::default() });
        assert_eq!(mul_deg1(&m, &h, &h), ChowClassDeg2 { h2: 1, ..Default::default() });
        assert_eq!(mul_deg1(&m, &h, &e2), ChowClassDeg2 { y: [0, 5], ..Default::default() });
    }

    #[test]
    fn mixed_times_exceptional() {
        let m = model();
        for a1 in 1..5 {
            for c1 in 0..5 {
                let f = ChowClassDeg1::new(a1, 0, -c1);
                let p = mul_deg1(&m, &f, &ChowClassDeg1::E2);
                assert_eq!((p.y[1], p.z[1]), (a1 * 5, c1));
                assert_eq!((p.h2, p.y[0], p.z[0]), (0, 0, 0));
            }
        }
    }

    #[test]
    fn model_validation() {
        assert!(BlowupModel::new(10, [0, 3], [1, 1]).is_err());
        assert!(BlowupModel::new(10, [8, 3], [1, 1]).is_err());
        assert!(BlowupModel::new(10, [7, 3], [1, 0]).is_err());
        assert_eq!(model().codims(), [8, 7]);
    }

    #[test]
    fn search_counts() {
        let r = phi_iso_search(&model(), 3).unwrap();
        assert_eq!(r.both_mixed, 9 * 16 * 16);
        assert_eq!(r.one_fixed, 2 * 48);
        assert_eq!(r.exchanged, 2 * 48 + 2 + 1);
        assert_eq!(r.candidates.len(), 50 * 50);
        assert_eq!(r.unobstructed_nontrivial, 0);
        let id: Vec<_> = r.candidates.iter().filter(|c| c.branch == Branch::Identity).collect();
        assert_eq!(id.len(), 1);
        assert!(!id[0].obstructed);
        assert!(phi_iso_search(&model(), 0).is_err());
    }

    #[test]
    fn one_fixed_example() {
        let m = BlowupModel::new(8, [1, 2], [1, 1]).unwrap();
        let r = phi_iso_search(&m, 1).unwrap();
        let c = r
            .candidates
            .iter()
            .find(|c| c.images == [ChowClassDeg1::new(1, 0, 0), ChowClassDeg1::E2])
            .unwrap();
        assert_eq!(c.branch, Branch::OneFixed);
        assert_eq!(c.product.y[1], 1);
        assert!(c.obstructed);
    }

    #[test]
    fn bundle_counts() {
        assert_eq!(projective_bundle_count(2, 2, 2).unwrap(), BigUint::from(9u32));
        assert_eq!(projective_bundle_count(2, 3, 2).unwrap(), BigUint::from(21u32));
        assert!(projective_bundle_count(2, 3, 6).is_err());
        assert!(projective_bundle_count(1, 3, 2).is_err());
        for q in [2, 3, 4, 5, 8, 9] {
            let p = projective_bundle_count(4, 4, q).unwrap();
            let base = BigUint::from((q.pow(4) - 1) / (q - 1));
            assert_eq!(p, &base * &base);
        }
    }

    #[test]
    fn prime_powers() {
        let found: Vec<u64> = (0..30).filter(|&q| prime_power_base(q).is_some()).collect();
        assert_eq!(found, vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29]);
        assert_eq!(prime_power_base(27), Some(3));
    }

    #[test]
    fn lemend_examples() {
        assert_eq!(lemend_conclude(2, 3, 3, 2).unwrap(), LemEndVerdict { polynomials_equal: true, swapped: true });
        assert!(!lemend_conclude(2, 5, 3, 4).unwrap().polynomials_equal);
        for m in 2..=10 {
            assert!(!lemend_conclude(2, 2, 3, m).unwrap().polynomials_equal);
        }
        assert!(lemend_conclude(3, 2, 3, 4).is_err());
        assert_eq!(bundle_polynomial(2, 5), vec![1, 0, -1, 0, 0, -1, 0, 1]);
    }

    proptest! {
        #[test]
        fn product_is_symmetric_and_bilinear(
            xs in proptest::collection::vec(-20i64..20, 9),
            lam in -5i64..5,
        ) {
            let m = model();
            let x = ChowClassDeg1::new(xs[0], xs[1], xs[2]);
            let y = ChowClassDeg1::new(xs[3], xs[4], xs[5]);
            let z = ChowClassDeg1::new(xs[6], xs[7], xs[8]);
            prop_assert_eq!(mul_deg1(&m, &x, &y), mul_deg1(&m, &y, &x));
            let yz = ChowClassDeg1::new(y.a + lam * z.a, y.b[0] + lam * z.b[0], y.b[1] + lam * z.b[1]);
            let (p, q, r) = (mul_deg1(&m, &x, &yz), mul_deg1(&m, &x, &y), mul_deg1(&m, &x, &z));
            prop_assert_eq!(p.h2, q.h2 + lam * r.h2);
            for i in 0..2 {
                prop_assert_eq!(p.y[i], q.y[i] + lam * r.y[i]);
                prop_assert_eq!(p.z[i], q.z[i] + lam * r.z[i]);
            }
        }

        #[test]
        fn search_never_leaves_survivors(
            n in 6u32..14, d1 in 1u32..4, d2 in 1u32..4, g1 in 1i64..6, g2 in 1i64..6, bound in 1i64..=4,
        ) {
            prop_assume!(d1 + 3 <= n && d2 + 3 <= n);
            let m = BlowupModel::new(n, [d1, d2], [g1, g2]).unwrap();
            prop_assert_eq!(phi_iso_search(&m, bound).unwrap().unobstructed_nontrivial, 0);
        }
    }
}
