//! Exhaustive certification of the Artinian Nakayama statements: over a
//! finite local algebra `A`, a map of free modules is surjective (resp.
//! injective) as soon as its reduction to the residue field is.

use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;

use super::{LocalAlgebra, LocalElem, Scalar};
use crate::error::{Error, Result};
use crate::matrix::FieldMatrix;

/// Largest module the verifier is willing to enumerate.
pub const NAKAYAMA_ENUMERATION_LIMIT: u128 = 1 << 22;

/// A `rows x cols` matrix with entries in a local algebra, viewed as a map
/// `A^cols -> A^rows`.
#[derive(Debug, Clone)]
pub struct LocalMatrix {
    algebra: Arc<LocalAlgebra>,
    rows: usize,
    cols: usize,
    entries: Vec<LocalElem>,
}

impl LocalMatrix {
    pub fn new(algebra: &Arc<LocalAlgebra>, rows: usize, cols: usize, entries: Vec<LocalElem>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, got: entries.len() });
        }
        if entries.iter().any(|e| e.algebra() != algebra) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(LocalMatrix { algebra: Arc::clone(algebra), rows, cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> &LocalElem {
        &self.entries[r * self.cols + c]
    }

    /// The matrix of residues over the base field.
    pub fn residue_matrix(&self) -> FieldMatrix {
        let data = self.entries.iter().map(LocalElem::residue).collect();
        FieldMatrix::from_vec(self.algebra.base(), self.rows, self.cols, data)
            .expect("shape is consistent")
    }

    pub fn apply(&self, x: &[LocalElem]) -> Result<Vec<LocalElem>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: x.len() });
        }
        (0..self.rows)
            .map(|r| {
                let mut acc = LocalElem::zero(&self.algebra);
                for (c, xc) in x.iter().enumerate() {
                    acc = acc.add(&self.entry(r, c).mul(xc)?)?;
                }
                Ok(acc)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NakayamaMode {
    Surjective,
    Injective,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NakayamaOutcome {
    /// The lift was certified by enumeration.
    Pass,
    /// The residue map has the property but the lift does not.
    Fail,
    /// The residue map lacks the property; nothing to certify.
    PreconditionFailed,
    /// The module cannot be enumerated.
    Unsupported,
}

#[derive(Debug, Clone, Serialize)]
pub struct NakayamaReport {
    pub mode: NakayamaMode,
    pub outcome: NakayamaOutcome,
    pub residue_rank: usize,
    pub elements_scanned: u128,
    pub reason: Option<String>,
    /// Coordinates (one vector per module component) of a counterexample:
    /// an unreachable target for surjectivity, a nonzero kernel element for
    /// injectivity.
    pub witness: Option<Vec<Vec<Scalar>>>,
}

impl NakayamaReport {
    pub fn passed(&self) -> bool {
        self.outcome == NakayamaOutcome::Pass
    }
}

fn coords_of(v: &[LocalElem]) -> Vec<Vec<Scalar>> {
    v.iter().map(|e| e.coords().to_vec()).collect()
}

fn enumerate_module(algebra: &Arc<LocalAlgebra>, rank: usize) -> Result<Vec<Vec<LocalElem>>> {
    let elems = algebra.elements()?;
    let mut out: Vec<Vec<LocalElem>> = vec![Vec::new()];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                elems.iter().map(move |e| {
                    let mut v = prefix.clone();
                    v.push(e.clone());
                    v
                })
            })
            .collect();
    }
    Ok(out)
}

/// Checks the residue precondition for `mode` and, when it holds, certifies
/// the corresponding property of `phi` by enumerating the source module.
pub fn nakayama_verify(phi: &LocalMatrix, mode: NakayamaMode) -> NakayamaReport {
    let residue_rank = phi.residue_matrix().rank();
    let mut report = NakayamaReport {
        mode,
        outcome: NakayamaOutcome::Unsupported,
        residue_rank,
        elements_scanned: 0,
        reason: None,
        witness: None,
    };
    let base = phi.algebra.base();
    let Some(q) = base.order() else {
        report.reason = Some("base field is infinite; enumeration impossible".into());
        return report;
    };
    let precondition = match mode {
        NakayamaMode::Surjective => residue_rank == phi.rows,
        NakayamaMode::Injective => residue_rank == phi.cols,
    };
    if !precondition {
        report.outcome = NakayamaOutcome::PreconditionFailed;
        report.reason = Some(match mode {
            NakayamaMode::Surjective => "residue not surjective".into(),
            NakayamaMode::Injective => "residue not injective".into(),
        });
        return report;
    }
    let size = (q as u128).pow((phi.algebra.dim() * phi.cols) as u32);
    if size > NAKAYAMA_ENUMERATION_LIMIT {
        report.reason = Some(format!("source module has {size} elements"));
        return report;
    }
    let source = enumerate_module(&phi.algebra, phi.cols).expect("finite field");
    report.elements_scanned = source.len() as u128;
    match mode {
        NakayamaMode::Surjective => {
            let image: HashSet<Vec<Vec<Scalar>>> = source
                .iter()
                .map(|x| coords_of(&phi.apply(x).expect("shape checked")))
                .collect();
            // The image is an A-submodule, so it is everything once it
            // contains the F-spanning set {b_k e_j}.
            for j in 0..phi.rows {
                for k in 0..phi.algebra.dim() {
                    let mut target = vec![LocalElem::zero(&phi.algebra); phi.rows];
                    target[j] = LocalElem::basis(&phi.algebra, k);
                    let target = coords_of(&target);
                    if !image.contains(&target) {
                        report.outcome = NakayamaOutcome::Fail;
                        report.reason = Some("spanning vector not in the image".into());
                        report.witness = Some(target);
                        return report;
                    }
                }
            }
        }
        NakayamaMode::Injective => {
            for x in &source {
                if x.iter().all(LocalElem::is_zero) {
                    continue;
                }
                let y = phi.apply(x).expect("shape checked");
                if y.iter().all(LocalElem::is_zero) {
                    report.outcome = NakayamaOutcome::Fail;
                    report.reason = Some("nonzero kernel element".into());
                    report.witness = Some(coords_of(x));
                    return report;
                }
            }
        }
    }
    report.outcome = NakayamaOutcome::Pass;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::FieldSpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f2() -> FieldSpec {
        FieldSpec::prime(2).unwrap()
    }

    #[test]
    fn unit_one_by_one_is_surjective() {
        let a = LocalAlgebra::dual_numbers(f2());
        let m = LocalMatrix::new(&a, 1, 1, vec![LocalElem::from_ints(&a, &[1, 1]).unwrap()]).unwrap();
        let r = nakayama_verify(&m, NakayamaMode::Surjective);
        assert!(r.passed());
        assert_eq!(r.elements_scanned, 4);
    }

    #[test]
    fn eps_fails_precondition() {
        let a = LocalAlgebra::dual_numbers(f2());
        let m = LocalMatrix::new(&a, 1, 1, vec![LocalElem::basis(&a, 1)]).unwrap();
        let r = nakayama_verify(&m, NakayamaMode::Surjective);
        assert_eq!(r.outcome, NakayamaOutcome::PreconditionFailed);
        assert_eq!(r.reason.as_deref(), Some("residue not surjective"));
    }

    #[test]
    fn rationals_unsupported() {
        let a = LocalAlgebra::dual_numbers(FieldSpec::rationals());
        let m = LocalMatrix::new(&a, 1, 1, vec![LocalElem::one(&a)]).unwrap();
        let r = nakayama_verify(&m, NakayamaMode::Injective);
        assert_eq!(r.outcome, NakayamaOutcome::Unsupported);
        assert!(r.reason.unwrap().contains("infinite"));
    }

    #[test]
    fn random_invertible_residue_over_truncated_cube() {
        let a = LocalAlgebra::truncated(f2(), 3).unwrap();
        let elems = a.elements().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut tested = 0;
        while tested < 40 {
            let entries: Vec<LocalElem> =
                (0..4).map(|_| elems[rng.gen_range(0..elems.len())].clone()).collect();
            let m = LocalMatrix::new(&a, 2, 2, entries).unwrap();
            if m.residue_matrix().rank() < 2 {
                continue;
            }
            tested += 1;
            for mode in [NakayamaMode::Surjective, NakayamaMode::Injective] {
                let r = nakayama_verify(&m, mode);
                assert!(r.passed(), "{mode:?} {m:?}");
                assert_eq!(r.elements_scanned, 64);
            }
        }
    }

    #[test]
    fn rectangular_maps() {
        let a = LocalAlgebra::dual_numbers(f2());
        let one = LocalElem::one(&a);
        let eps = LocalElem::basis(&a, 1);
        // A -> A^2, x -> (x, eps x): injective residue (1, 0).
        let col = LocalMatrix::new(&a, 2, 1, vec![one.clone(), eps.clone()]).unwrap();
        assert!(nakayama_verify(&col, NakayamaMode::Injective).passed());
        assert_eq!(
            nakayama_verify(&col, NakayamaMode::Surjective).outcome,
            NakayamaOutcome::PreconditionFailed
        );
        // A^2 -> A, (x, y) -> x + eps y: surjective residue, not injective.
        let row = LocalMatrix::new(&a, 1, 2, vec![one, eps]).unwrap();
        assert!(nakayama_verify(&row, NakayamaMode::Surjective).passed());
        assert_eq!(
            nakayama_verify(&row, NakayamaMode::Injective).outcome,
            NakayamaOutcome::PreconditionFailed
        );
    }
}
