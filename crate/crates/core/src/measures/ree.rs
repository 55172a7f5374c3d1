//! Relative entropy of entanglement over the PPT set, by projected gradient
//! descent on the closest-state variable σ.
//!
//! The objective S(ρ‖σ) is convex in σ and the feasible set
//! {σ ⪰ 0, σ^Γ ⪰ 0, Tr σ = 1} is an intersection of a cone slice and a
//! hyperplane, so the descent converges to the global minimum and every
//! iterate certifies an upper bound on E_R^ppt.

use crate::qlinalg::{
    herm_eig, hermitize, identity, partial_transpose, relative_entropy, BipartiteDims, C64,
    CMatrix, Subsystem,
};
use crate::states::DensityMatrix;

const LN_2: f64 = std::f64::consts::LN_2;

/// Set-membership tolerance for the alternating projections.
const MEMBERSHIP_TOL: f64 = 1e-11;
const MAX_DYKSTRA_CYCLES: usize = 2000;

/// Support floor: σ is mixed with FLOOR_EPS of the maximally mixed state
/// after every projection, keeping its spectrum strictly above the
/// relative-entropy support cutoff so the objective stays finite.
const FLOOR_EPS: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct ReeOpts {
    pub max_iters: usize,
    /// Convergence threshold on the norm of the accepted projected step.
    pub tol: f64,
    pub step_init: f64,
    pub seed: u64,
}

impl Default for ReeOpts {
    fn default() -> Self {
        Self {
            max_iters: 5000,
            tol: 1e-7,
            step_init: 1.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReeResult {
    /// S(ρ‖σ*) in ebits; an upper bound on E_R^ppt by construction.
    pub value: f64,
    pub closest_state: DensityMatrix,
    pub iterations: usize,
    /// Norm of the final accepted projected step.
    pub residual: f64,
    pub converged: bool,
}

fn psd_clip(m: &CMatrix) -> CMatrix {
    herm_eig(&hermitize(m))
        .expect("Hermitian by construction")
        .apply_fn(|v| v.max(0.0))
}

fn pt_psd_clip(m: &CMatrix, dims: BipartiteDims) -> CMatrix {
    let pt = partial_transpose(m, dims, Subsystem::B).expect("dims fixed by caller");
    let clipped = psd_clip(&pt);
    partial_transpose(&clipped, dims, Subsystem::B).expect("dims fixed by caller")
}

fn trace_shift(m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    let defect = (crate::qlinalg::trace_re(m) - 1.0) / n as f64;
    m - identity(n) * C64::new(defect, 0.0)
}

fn min_eig(m: &CMatrix) -> f64 {
    herm_eig(&hermitize(m)).expect("Hermitian").min()
}

/// Dykstra-corrected alternating projections onto
/// {PSD} ∩ {PSD partial transpose} ∩ {unit trace}. Cycles until the iterate
/// both satisfies membership and has stopped moving, so the result is the
/// metric projection rather than just some feasible point.
pub(crate) fn project_onto_ppt_states(x0: &CMatrix, dims: BipartiteDims) -> CMatrix {
    let n = x0.nrows();
    let mut x = hermitize(x0);
    let mut inc_psd = CMatrix::zeros(n, n);
    let mut inc_pt = CMatrix::zeros(n, n);
    let mut inc_tr = CMatrix::zeros(n, n);
    for _ in 0..MAX_DYKSTRA_CYCLES {
        let start = x.clone();

        let y = psd_clip(&(&x + &inc_psd));
        inc_psd = &x + &inc_psd - &y;
        x = y;

        let y = pt_psd_clip(&(&x + &inc_pt), dims);
        inc_pt = &x + &inc_pt - &y;
        x = y;

        let y = trace_shift(&(&x + &inc_tr));
        inc_tr = &x + &inc_tr - &y;
        x = y;

        let moved = (&x - start).norm();
        let pt = partial_transpose(&x, dims, Subsystem::B).expect("dims fixed");
        if moved < 1e-13
            && min_eig(&x) >= -MEMBERSHIP_TOL
            && min_eig(&pt) >= -MEMBERSHIP_TOL
            && (crate::qlinalg::trace_re(&x) - 1.0).abs() <= MEMBERSHIP_TOL
        {
            break;
        }
    }
    x
}

fn floor_support(m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    m * C64::new(1.0 - FLOOR_EPS, 0.0) + identity(n) * C64::new(FLOOR_EPS / n as f64, 0.0)
}

/// S(ρ‖σ) for a full-support σ, evaluated smoothly in σ's eigenbasis.
fn objective(tr_rho_log_rho: f64, rho: &CMatrix, sigma: &CMatrix) -> f64 {
    let eig = herm_eig(&hermitize(sigma)).expect("Hermitian");
    let mut value = tr_rho_log_rho;
    for j in 0..eig.values.len() {
        let v_j = eig.vectors.column(j);
        let p_j = (v_j.adjoint() * rho * v_j)[(0, 0)].re.max(0.0);
        let s_j = eig.values[j].max(1e-300);
        value -= p_j * s_j.log2();
    }
    value
}

/// Euclidean gradient of σ ↦ −Tr ρ log₂ σ via the first divided difference
/// of ln across σ's eigenbasis.
fn gradient(rho: &CMatrix, sigma: &CMatrix) -> CMatrix {
    let eig = herm_eig(&hermitize(sigma)).expect("Hermitian");
    let n = eig.values.len();
    let rho_t = eig.vectors.adjoint() * rho * &eig.vectors;
    let mut g = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (eig.values[i].max(1e-300), eig.values[j].max(1e-300));
            let phi = if (a - b).abs() <= 1e-12 * (a + b) {
                2.0 / (a + b)
            } else {
                (a.ln() - b.ln()) / (a - b)
            };
            g[(i, j)] = rho_t[(i, j)] * C64::new(-phi / LN_2, 0.0);
        }
    }
    hermitize(&(&eig.vectors * g * eig.vectors.adjoint()))
}

/// Minimizes S(ρ‖σ) over PPT states σ. Non-convergence inside
/// `opts.max_iters` is reported through `converged`, not as an error.
pub fn ree_ppt(rho: &DensityMatrix, opts: &ReeOpts) -> ReeResult {
    let dims = rho.dims();
    let n = rho.dim();

    let tr_rho_log_rho: f64 = herm_eig(rho.mat())
        .expect("validated state")
        .values
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| v * v.log2())
        .sum();

    // σ₀: halfway between the maximally mixed state and ρ projected onto
    // the PPT set, then floored to full support.
    let projected_rho = project_onto_ppt_states(rho.mat(), dims);
    let mut sigma = floor_support(
        &(identity(n) * C64::new(0.5 / n as f64, 0.0) + projected_rho * C64::new(0.5, 0.0)),
    );
    let mut obj = objective(tr_rho_log_rho, rho.mat(), &sigma);

    let mut iterations = 0;
    let mut residual = f64::INFINITY;
    let mut converged = false;

    for _ in 0..opts.max_iters {
        iterations += 1;
        let grad = gradient(rho.mat(), &sigma);

        let mut accepted: Option<(CMatrix, f64)> = None;
        let mut alpha = opts.step_init;
        while alpha >= 1e-14 {
            let trial = &sigma - &grad * C64::new(alpha, 0.0);
            let candidate = floor_support(&project_onto_ppt_states(&trial, dims));
            let cand_obj = objective(tr_rho_log_rho, rho.mat(), &candidate);
            // Armijo condition on the gradient mapping: the decrease must
            // scale with the realized step, not just rounding noise.
            let step_sq = (&candidate - &sigma).norm_squared();
            if cand_obj <= obj - 1e-4 * step_sq / alpha {
                accepted = Some((candidate, cand_obj));
                break;
            }
            alpha *= 0.5;
        }

        match accepted {
            None => {
                // no descent direction at any step length: stationary
                residual = 0.0;
                converged = true;
                break;
            }
            Some((next, next_obj)) => {
                assert!(next_obj <= obj, "descent step increased the objective");
                residual = (&next - &sigma).norm();
                sigma = next;
                obj = next_obj;
                if residual < opts.tol {
                    converged = true;
                    break;
                }
            }
        }
    }

    let closest_state = DensityMatrix::new(sigma, dims)
        .expect("projected and floored iterate is a valid state");
    let value = relative_entropy(rho.mat(), closest_state.mat())
        .expect("floored closest state has full support");
    ReeResult {
        value,
        closest_state,
        iterations,
        residual,
        converged,
    }
}
