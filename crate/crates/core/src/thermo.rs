//! The irreversibility analysis: per-state gap records E_c − E_d^ppt across
//! the Bell-diagonal family, the bound-entanglement ledger E_b, the
//! MC-specialized PPT entanglement of formation, and the consolidated
//! MC-facts and relative-entropy-contraction suites.

use crate::measures::{
    eof_ensemble_upper, eof_two_qubit, hashing_quantity, negativity, ree_ppt, EofOpts, ReeOpts,
};
use crate::qlinalg::{relative_entropy, BipartiteDims, C64};
use crate::states::facts::{fact1_trial, fact2_trial, fact3_trial};
use crate::states::{
    bell_diagonal, derive_seed, detect_mc, mc_from_coefficients, random_channel, random_density,
    random_mc, apply_channel, DensityMatrix, McVerdict,
};
use crate::{Error, Result};

/// Points of the family where the theorem allows a vanishing gap.
pub const REVERSIBLE_POINTS: [f64; 3] = [0.0, 0.5, 1.0];

/// Grid points closer than this to a reversible point are excluded from the
/// strict-gap assertion.
pub const EXCLUSION_RADIUS: f64 = 1e-6;

/// Per-state report of the cost/distillation ledger.
///
/// E_c is the single-letter entanglement of formation, valid as the
/// entanglement cost on this family because E_f is additive there; E_d^ppt
/// is the hashing quantity S(ρ_A) − S(ρ); E_b = E_c − E_d^ppt is the bound
/// entanglement ledger.
#[derive(Debug, Clone)]
pub struct GapRecord {
    pub p: f64,
    pub e_c: f64,
    pub e_d_ppt: f64,
    pub e_r_numeric: f64,
    pub negativity: f64,
    pub e_b: f64,
    pub gap: f64,
    pub ree_converged: bool,
}

pub fn distance_to_reversible(p: f64) -> f64 {
    REVERSIBLE_POINTS
        .iter()
        .map(|r| (p - r).abs())
        .fold(f64::INFINITY, f64::min)
}

pub fn gap_analysis(p: f64, opts: &ReeOpts) -> Result<GapRecord> {
    let rho = bell_diagonal(p)?;
    let e_c = eof_two_qubit(&rho)?;
    let e_d_ppt = hashing_quantity(&rho);
    let ree = ree_ppt(&rho, opts);
    Ok(GapRecord {
        p,
        e_c,
        e_d_ppt,
        e_r_numeric: ree.value,
        negativity: negativity(&rho),
        e_b: e_c - e_d_ppt,
        gap: e_c - e_d_ppt,
        ree_converged: ree.converged,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub p_start: f64,
    pub p_end: f64,
    pub steps: usize,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub records: Vec<GapRecord>,
    pub grid: GridSpec,
    pub opts: ReeOpts,
    /// Interior grid points (outside the exclusion radius) whose gap failed
    /// to clear 1e-6.
    pub violations: Vec<f64>,
    pub pass: bool,
}

/// Uniform grid sweep, endpoints inclusive. Each record is independent;
/// the summary flags strict-gap violations at interior points.
pub fn sweep(p_start: f64, p_end: f64, steps: usize, opts: &ReeOpts) -> Result<SweepReport> {
    if !(0.0..=1.0).contains(&p_start) || !(0.0..=1.0).contains(&p_end) || p_start >= p_end {
        return Err(Error::BadParameter(format!(
            "grid needs 0 <= p_start < p_end <= 1, got [{p_start}, {p_end}]"
        )));
    }
    if steps < 2 {
        return Err(Error::BadParameter(format!("steps = {steps}, need at least 2")));
    }
    let mut records = Vec::with_capacity(steps);
    let width = (p_end - p_start) / (steps - 1) as f64;
    for i in 0..steps {
        let p = if i == steps - 1 { p_end } else { p_start + width * i as f64 };
        records.push(gap_analysis(p, opts)?);
    }
    let violations: Vec<f64> = records
        .iter()
        .filter(|r| distance_to_reversible(r.p) > EXCLUSION_RADIUS && r.gap <= 1e-6)
        .map(|r| r.p)
        .collect();
    let pass = violations.is_empty();
    Ok(SweepReport {
        records,
        grid: GridSpec { p_start, p_end, steps },
        opts: opts.clone(),
        violations,
        pass,
    })
}

/// How an MC-specialized E_f^ppt value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EofPptRoute {
    /// dims (2,2): the exact concurrence closed form.
    TwoQubitClosedForm,
    /// larger MC states: the ensemble-search upper bound.
    EnsembleSearch,
}

#[derive(Debug, Clone)]
pub struct EofPptMc {
    pub value: f64,
    pub route: EofPptRoute,
}

/// E_f^ppt for maximally correlated states. Phase-separated decompositions
/// of an MC state contain no PPT pieces, so the infimum reduces to the
/// ordinary pure-state ensembles of E_f; non-MC inputs are rejected because
/// the reduction is only established for MC states.
pub fn eof_ppt_mc(rho: &DensityMatrix, tol: f64) -> Result<EofPptMc> {
    match detect_mc(rho, tol)? {
        McVerdict::NotMc { row, col, modulus } => Err(Error::NotMc { row, col, modulus }),
        McVerdict::Mc(_) => {
            if (rho.dims().da, rho.dims().db) == (2, 2) {
                Ok(EofPptMc {
                    value: eof_two_qubit(rho)?,
                    route: EofPptRoute::TwoQubitClosedForm,
                })
            } else {
                Ok(EofPptMc {
                    value: eof_ensemble_upper(rho, &EofOpts::default())?,
                    route: EofPptRoute::EnsembleSearch,
                })
            }
        }
    }
}

/// Pass counts and worst defects for one local dimension.
#[derive(Debug, Clone, Copy)]
pub struct FactCounts {
    pub d: usize,
    pub samples: usize,
    pub fact1_passes: usize,
    pub fact2_passes: usize,
    pub fact3_passes: usize,
    pub fact1_worst_defect: f64,
    pub fact2_worst_defect: f64,
    pub fact3_worst_defect: f64,
}

#[derive(Debug, Clone)]
pub struct FactsReport {
    pub seed: u64,
    pub per_d: Vec<FactCounts>,
    pub pass: bool,
}

/// Runs the three MC-fact suites at every local dimension d = 2..=d_max
/// with `n_samples` trials each.
pub fn verify_mc_facts(n_samples: usize, d_max: usize, seed: u64) -> Result<FactsReport> {
    if !(2..=3).contains(&d_max) {
        return Err(Error::BadParameter(format!("d_max = {d_max} not in {{2, 3}}")));
    }
    let mut per_d = Vec::new();
    for d in 2..=d_max {
        let mut counts = FactCounts {
            d,
            samples: n_samples,
            fact1_passes: 0,
            fact2_passes: 0,
            fact3_passes: 0,
            fact1_worst_defect: 0.0,
            fact2_worst_defect: 0.0,
            fact3_worst_defect: 0.0,
        };
        for trial in 0..n_samples as u64 {
            let out = fact1_trial(d, derive_seed(seed, 0x100 + d as u64, trial))?;
            counts.fact1_passes += out.pass as usize;
            counts.fact1_worst_defect = counts.fact1_worst_defect.max(out.defect);

            let mc = mc_from_coefficients(&random_mc(d, derive_seed(seed, 0x200 + d as u64, trial))?);
            let out = fact2_trial(&mc, derive_seed(seed, 0x300 + d as u64, trial))?;
            counts.fact2_passes += out.pass as usize;
            counts.fact2_worst_defect = counts.fact2_worst_defect.max(out.defect);

            let out = fact3_trial(d, derive_seed(seed, 0x400 + d as u64, trial))?;
            counts.fact3_passes += out.pass as usize;
            counts.fact3_worst_defect = counts.fact3_worst_defect.max(out.defect);
        }
        per_d.push(counts);
    }
    let pass = per_d.iter().all(|c| {
        c.fact1_passes == c.samples && c.fact2_passes == c.samples && c.fact3_passes == c.samples
    });
    Ok(FactsReport { seed, per_d, pass })
}

#[derive(Debug, Clone, Copy)]
pub struct UhlmannReport {
    pub seed: u64,
    pub trials: usize,
    /// Trials where S(Λρ‖Λσ) exceeded S(ρ‖σ) by more than 1e-8.
    pub violations: usize,
    /// Largest observed S(Λρ‖Λσ) − S(ρ‖σ).
    pub max_violation: f64,
}

/// Relative-entropy contraction under random channels on two qubits:
/// seeded (ρ, σ, Λ) triples with σ kept away from singularity by a small
/// admixture of the maximally mixed state.
pub fn uhlmann_suite(n_trials: usize, seed: u64) -> Result<UhlmannReport> {
    if n_trials == 0 {
        return Err(Error::BadParameter("n_trials must be at least 1".into()));
    }
    let dims = BipartiteDims::new(2, 2)?;
    let mut violations = 0usize;
    let mut max_violation = f64::NEG_INFINITY;
    for trial in 0..n_trials as u64 {
        let rho = random_density(dims, 1 + (trial as usize % 4), derive_seed(seed, 0x51, trial))?;
        let raw = random_density(dims, 4, derive_seed(seed, 0x52, trial))?;
        let sigma = DensityMatrix::new(
            raw.mat() * C64::new(1.0 - 1e-6, 0.0)
                + crate::qlinalg::identity(4) * C64::new(1e-6 / 4.0, 0.0),
            dims,
        )?;
        let env = 2 + (trial as usize % 3);
        let channel = random_channel(4, 4, env, derive_seed(seed, 0x53, trial))?;

        let lhs = relative_entropy(
            apply_channel(&rho, &channel)?.mat(),
            apply_channel(&sigma, &channel)?.mat(),
        )?;
        let rhs = relative_entropy(rho.mat(), sigma.mat())?;
        let excess = lhs - rhs;
        max_violation = max_violation.max(excess);
        if excess > 1e-8 {
            violations += 1;
        }
    }
    Ok(UhlmannReport {
        seed,
        trials: n_trials,
        violations,
        max_violation,
    })
}
