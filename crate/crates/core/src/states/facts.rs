//! Per-trial checks of the three maximally-correlated-state facts:
//! (1) a tensor product is MC iff both factors are, (2) every state in the
//! support of an MC state is MC, (3) a PPT MC state is separable, with the
//! partial-transpose spectrum containing ±|a_ij| for every off-diagonal
//! coefficient.

use crate::qlinalg::{partial_trace, BipartiteDims, Subsystem};
use crate::states::{
    derive_seed, detect_mc, grouped_tensor, is_ppt, mc_from_coefficients, random_mc,
    random_support_state, DensityMatrix, McVerdict,
};
use crate::{Error, Result};

pub const FACT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy)]
pub struct FactOutcome {
    pub pass: bool,
    /// Worst off-pattern modulus (facts 1 and 2) or spectrum mismatch
    /// |min PT eigenvalue + max off-diagonal| (fact 3) seen in the trial.
    pub defect: f64,
}

fn verdict_defect(v: &McVerdict) -> f64 {
    match v {
        McVerdict::Mc(_) => 0.0,
        McVerdict::NotMc { modulus, .. } => *modulus,
    }
}

/// Fact 1: draws an MC state with local dimension `d` and an MC partner with
/// local dimension 2, checks that the grouped tensor product is MC, and that
/// both factors recovered by partial trace are MC. The partner is kept at
/// d = 2 so the grouped product stays inside the dense-solver cap.
pub fn fact1_trial(d: usize, seed: u64) -> Result<FactOutcome> {
    let rho = mc_from_coefficients(&random_mc(d, derive_seed(seed, 0x11, 0))?);
    let sigma = mc_from_coefficients(&random_mc(2, derive_seed(seed, 0x12, 0))?);

    let grouped = grouped_tensor(&rho, &sigma)?;
    let forward = detect_mc(&grouped, FACT_TOL)?;

    // factors recovered from the ungrouped product (AB)(A'B')
    let pair_dims = BipartiteDims::new(rho.dim(), sigma.dim())?;
    let raw = crate::qlinalg::tensor_product(rho.mat(), sigma.mat());
    let rho_rec = DensityMatrix::new(
        partial_trace(&raw, pair_dims, Subsystem::A)?,
        rho.dims(),
    )?;
    let sigma_rec = DensityMatrix::new(
        partial_trace(&raw, pair_dims, Subsystem::B)?,
        sigma.dims(),
    )?;
    let conv_a = detect_mc(&rho_rec, FACT_TOL)?;
    let conv_b = detect_mc(&sigma_rec, FACT_TOL)?;

    let defect = verdict_defect(&forward)
        .max(verdict_defect(&conv_a))
        .max(verdict_defect(&conv_b));
    Ok(FactOutcome {
        pass: forward.is_mc() && conv_a.is_mc() && conv_b.is_mc(),
        defect,
    })
}

/// Fact 2: draws a random state supported on range(ρ) and checks it is MC.
/// The input must itself be MC; anything else is rejected at the
/// precondition.
pub fn fact2_trial(rho: &DensityMatrix, seed: u64) -> Result<FactOutcome> {
    match detect_mc(rho, FACT_TOL)? {
        McVerdict::Mc(_) => {}
        McVerdict::NotMc { row, col, modulus } => {
            return Err(Error::NotMc { row, col, modulus })
        }
    }
    let sample = random_support_state(rho, derive_seed(seed, 0x21, 0));
    let verdict = detect_mc(&sample, FACT_TOL)?;
    Ok(FactOutcome {
        pass: verdict.is_mc(),
        defect: verdict_defect(&verdict),
    })
}

#[derive(Debug, Clone, Copy)]
pub struct Fact3Outcome {
    pub pass: bool,
    /// |min PT eigenvalue + max off-diagonal| when a dominant off-diagonal
    /// is present, else 0.
    pub defect: f64,
    pub min_pt_eigenvalue: f64,
    pub max_off_diagonal: f64,
}

/// Fact 3: ρ is PPT iff the coefficient matrix is diagonal (the separable
/// members of the family), and the PT spectrum reaches −max|a_ij|. Checks
/// the random draw and its diagonal part.
pub fn fact3_trial(d: usize, seed: u64) -> Result<Fact3Outcome> {
    let coeffs = random_mc(d, derive_seed(seed, 0x31, 0))?;
    let rho = mc_from_coefficients(&coeffs);
    let check = is_ppt(&rho, FACT_TOL);
    let max_off = coeffs.max_off_diagonal();

    let iff_ok = check.is_ppt == (max_off < 1e-8);

    let (spectrum_ok, defect) = if max_off >= 1e-3 {
        let mismatch = (check.min_pt_eigenvalue + max_off).abs();
        (mismatch <= 1e-9, mismatch)
    } else {
        (true, 0.0)
    };

    // the diagonal part is PPT (and separable: a classical |ii> mixture)
    let diag = mc_from_coefficients(&coeffs.diagonal_part());
    let diag_ok = is_ppt(&diag, FACT_TOL).is_ppt;

    Ok(Fact3Outcome {
        pass: iff_ok && spectrum_ok && diag_ok,
        defect,
        min_pt_eigenvalue: check.min_pt_eigenvalue,
        max_off_diagonal: max_off,
    })
}
