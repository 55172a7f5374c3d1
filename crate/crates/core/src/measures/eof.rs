//! Ensemble-search upper bound on the entanglement of formation.
//!
//! Every size-k ensemble {w_i} with Σ|w_i⟩⟨w_i| = ρ can be written
//! w_i = Σ_a T_ia √λ_a |e_a⟩ with T a k×rank matrix with orthonormal
//! columns, so the search space is the isometry T. The average reduction
//! entropy Σ ‖w_i‖² S(w_i/‖w_i‖) is minimized by derivative-free greedy
//! descent (random perturbations with an annealed radius), best of
//! `restarts` seeded starts. Any iterate is a valid ensemble, so the
//! returned value is always an upper bound on E_f.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::measures::entropy_clamped;
use crate::qlinalg::{herm_eig, C64, CMatrix};
use crate::states::{DensityMatrix, RANK_CUTOFF};
use crate::{Error, Result};

/// Dimension cap for the ensemble search.
const EOF_MAX_DIM: usize = 16;

const PERTURB_INIT: f64 = 0.3;
const PERTURB_SHRINK: f64 = 0.6;
const PERTURB_MIN: f64 = 1e-7;
const FAIL_LIMIT: usize = 25;

#[derive(Debug, Clone)]
pub struct EofOpts {
    /// Ensemble size k; defaults to twice the rank.
    pub ensemble_size: Option<usize>,
    pub restarts: usize,
    pub seed: u64,
    /// Perturbation trials per restart.
    pub max_iters: usize,
}

impl Default for EofOpts {
    fn default() -> Self {
        Self {
            ensemble_size: None,
            restarts: 16,
            seed: 0,
            max_iters: 4000,
        }
    }
}

fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize, scale: f64) -> CMatrix {
    let mut m = CMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            m[(i, j)] = C64::new(re * scale, im * scale);
        }
    }
    m
}

/// Orthonormalizes the columns (thin Q of the QR factorization).
fn orthonormalize(m: &CMatrix) -> CMatrix {
    m.clone().qr().q()
}

struct Objective {
    /// Columns are √λ_a |e_a⟩ over the support of ρ.
    scaled_support: CMatrix,
    da: usize,
    db: usize,
}

impl Objective {
    /// Σ_i ‖w_i‖² S(reduction of w_i/‖w_i‖) for the ensemble T.
    fn eval(&self, t: &CMatrix) -> f64 {
        let w = &self.scaled_support * t.transpose(); // column i is w_i
        let mut total = 0.0;
        for i in 0..w.ncols() {
            let col = w.column(i);
            let weight = col.norm_squared();
            if weight < 1e-14 {
                continue;
            }
            let mut red = CMatrix::zeros(self.da, self.da);
            for p in 0..self.da {
                for q in 0..self.da {
                    let mut acc = C64::new(0.0, 0.0);
                    for b in 0..self.db {
                        acc += col[p * self.db + b] * col[q * self.db + b].conj();
                    }
                    red[(p, q)] = acc / C64::new(weight, 0.0);
                }
            }
            let vals = herm_eig(&red).expect("Hermitian by construction").values;
            total += weight * entropy_clamped(&vals);
        }
        total
    }
}

/// Upper bound on E_f by ensemble search. Seeded and deterministic: restart
/// r uses the stream `opts.seed`/`r` of a counter-based generator, so the
/// best-of reduction is order-independent with ties won by the lowest
/// restart index.
pub fn eof_ensemble_upper(rho: &DensityMatrix, opts: &EofOpts) -> Result<f64> {
    if rho.dim() > EOF_MAX_DIM {
        return Err(Error::TooLarge {
            dim: rho.dim(),
            cap: EOF_MAX_DIM,
        });
    }
    let eig = herm_eig(rho.mat()).expect("validated state");
    let support: Vec<usize> = (0..eig.values.len())
        .filter(|&k| eig.values[k] > RANK_CUTOFF)
        .collect();
    let rank = support.len();
    let k = opts.ensemble_size.unwrap_or(2 * rank);
    if k < rank {
        return Err(Error::EnsembleTooSmall { k, rank });
    }

    let mut scaled_support = CMatrix::zeros(rho.dim(), rank);
    for (dst, &src) in support.iter().enumerate() {
        let root = C64::new(eig.values[src].sqrt(), 0.0);
        for row in 0..rho.dim() {
            scaled_support[(row, dst)] = eig.vectors[(row, src)] * root;
        }
    }
    let objective = Objective {
        scaled_support,
        da: rho.dims().da,
        db: rho.dims().db,
    };

    let mut best = f64::INFINITY;
    for restart in 0..opts.restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(restart as u64);

        let mut t = orthonormalize(&gaussian(&mut rng, k, rank, 1.0));
        let mut current = objective.eval(&t);
        let mut radius = PERTURB_INIT;
        let mut fails = 0usize;

        for _ in 0..opts.max_iters {
            let candidate = orthonormalize(&(&t + gaussian(&mut rng, k, rank, radius)));
            let value = objective.eval(&candidate);
            if value < current {
                t = candidate;
                current = value;
                fails = 0;
            } else {
                fails += 1;
                if fails >= FAIL_LIMIT {
                    fails = 0;
                    radius *= PERTURB_SHRINK;
                    if radius < PERTURB_MIN {
                        break;
                    }
                }
            }
        }
        if current < best {
            best = current;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{entropy_of_entanglement, eof_two_qubit};
    use crate::qlinalg::{BipartiteDims, CVector};
    use crate::states::{bell_diagonal, DensityMatrix, PureKet};

    const EF_08: f64 = 0.4689955935892812;

    #[test]
    fn pure_input_gives_its_entanglement_entropy() {
        let dims = BipartiteDims::new(2, 2).unwrap();
        let mut v = CVector::zeros(4);
        v[0] = C64::new(0.6, 0.0);
        v[3] = C64::new(0.8, 0.0);
        let psi = PureKet::new(v, dims).unwrap();
        let rho = DensityMatrix::from_pure(&psi);
        let direct = entropy_of_entanglement(&psi).unwrap();
        let searched = eof_ensemble_upper(&rho, &EofOpts::default()).unwrap();
        assert!((searched - direct).abs() < 1e-12, "{searched} vs {direct}");
    }

    #[test]
    fn family_search_reaches_the_closed_form() {
        let rho = bell_diagonal(0.8).unwrap();
        let opts = EofOpts {
            ensemble_size: Some(4),
            seed: 17,
            ..EofOpts::default()
        };
        let got = eof_ensemble_upper(&rho, &opts).unwrap();
        assert!(got >= EF_08 - 1e-9, "search dipped below E_f: {got}");
        assert!(got <= EF_08 + 1e-4, "search quality: {got} vs {EF_08}");
    }

    #[test]
    fn separable_point_reaches_zero() {
        let rho = bell_diagonal(0.5).unwrap();
        let opts = EofOpts {
            ensemble_size: Some(4),
            seed: 17,
            ..EofOpts::default()
        };
        let got = eof_ensemble_upper(&rho, &opts).unwrap();
        assert!(got < 1e-6, "got {got}");
    }

    #[test]
    fn rejects_undersized_ensembles() {
        let rho = bell_diagonal(0.8).unwrap(); // rank 2
        let opts = EofOpts {
            ensemble_size: Some(1),
            ..EofOpts::default()
        };
        assert!(matches!(
            eof_ensemble_upper(&rho, &opts),
            Err(Error::EnsembleTooSmall { k: 1, rank: 2 })
        ));
    }

    #[test]
    fn upper_bound_dominates_exact_eof() {
        let seed = 4096;
        println!("seed = {seed}");
        let dims = BipartiteDims::new(2, 2).unwrap();
        let cheap = EofOpts {
            restarts: 4,
            max_iters: 1500,
            seed,
            ..EofOpts::default()
        };
        for trial in 0..50 {
            let rho = crate::states::random_density(
                dims,
                1 + (trial as usize % 4),
                crate::states::derive_seed(seed, 1, trial),
            )
            .unwrap();
            let exact = eof_two_qubit(&rho).unwrap();
            let upper = eof_ensemble_upper(&rho, &cheap).unwrap();
            assert!(
                upper >= exact - 1e-9,
                "trial {trial}: upper {upper} < exact {exact}"
            );
        }
    }
}
