//! State model: density matrices and pure kets with bipartite metadata,
//! the Bell-diagonal family, maximally correlated (MC) states, PPT checks,
//! and seeded random states and channels.

pub mod facts;
pub mod io;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::qlinalg::{
    self, hermiticity_defect, hermitize, herm_eig, identity, partial_trace, partial_transpose,
    permute_systems, tensor_product, trace_re, BipartiteDims, C64, CMatrix, CVector, Subsystem,
    HERM_TOL, MAX_DIM, PSD_TOL, TRACE_TOL,
};
use crate::{Error, Result};

/// Eigenvalues above this count toward the support/rank of a state.
pub const RANK_CUTOFF: f64 = 1e-10;

/// Deterministic seed split: all fan-out of a user seed into per-trial or
/// per-restart generators goes through this one SplitMix64-style mix, so a
/// run is reproducible from the single recorded seed.
pub fn derive_seed(seed: u64, tag: u64, index: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    mix(seed
        .wrapping_add(mix(tag.wrapping_add(0x9E37_79B9_7F4A_7C15)))
        .wrapping_add(mix(index.wrapping_mul(0xD1B5_4A32_D192_ED03).wrapping_add(1))))
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    let mut m = CMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            m[(i, j)] = C64::new(re, im);
        }
    }
    m
}

// ---------------------------------------------------------------------------
// Core state types
// ---------------------------------------------------------------------------

/// Report-style diagnostics of a candidate density matrix.
#[derive(Debug, Clone, Copy)]
pub struct ValidationReport {
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
    pub pass: bool,
}

/// Checks a raw matrix against the density-matrix invariants without
/// erroring; the eigenvalue is taken from the Hermitian part.
pub fn validate(mat: &CMatrix) -> ValidationReport {
    let hdef = if mat.nrows() == mat.ncols() {
        hermiticity_defect(mat)
    } else {
        f64::INFINITY
    };
    let tdef = trace_re(mat) - 1.0;
    let min_eigenvalue = if mat.nrows() == mat.ncols() {
        nalgebra::SymmetricEigen::new(hermitize(mat))
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    } else {
        f64::NAN
    };
    ValidationReport {
        hermiticity_defect: hdef,
        trace_defect: tdef,
        min_eigenvalue,
        pass: hdef <= HERM_TOL && tdef.abs() <= TRACE_TOL && min_eigenvalue >= -PSD_TOL,
    }
}

/// A validated density matrix with its A|B cut.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
    dims: BipartiteDims,
}

impl DensityMatrix {
    pub fn new(mat: CMatrix, dims: BipartiteDims) -> Result<Self> {
        dims.check_total(mat.nrows())?;
        if mat.nrows() != mat.ncols() {
            return Err(Error::BadDims(format!(
                "expected square matrix, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if mat.nrows() > MAX_DIM {
            return Err(Error::TooLarge {
                dim: mat.nrows(),
                cap: MAX_DIM,
            });
        }
        let report = validate(&mat);
        if !report.pass {
            return Err(Error::NotAState(format!(
                "hermiticity defect {:.3e}, trace defect {:.3e}, min eigenvalue {:.3e}",
                report.hermiticity_defect, report.trace_defect, report.min_eigenvalue
            )));
        }
        Ok(Self { mat, dims })
    }

    pub fn from_pure(ket: &PureKet) -> Self {
        let mat = &ket.vec * ket.vec.adjoint();
        Self {
            mat: hermitize(&mat),
            dims: ket.dims,
        }
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Reduced state of the kept subsystem.
    pub fn reduction(&self, keep: Subsystem) -> CMatrix {
        partial_trace(&self.mat, self.dims, keep).expect("dims validated at construction")
    }

    /// Eigenvalues above RANK_CUTOFF.
    pub fn rank(&self) -> usize {
        herm_eig(&self.mat)
            .expect("validated Hermitian")
            .values
            .iter()
            .filter(|&&v| v > RANK_CUTOFF)
            .count()
    }
}

/// A normalized pure state with its A|B cut.
#[derive(Debug, Clone, PartialEq)]
pub struct PureKet {
    vec: CVector,
    dims: BipartiteDims,
}

impl PureKet {
    pub fn new(vec: CVector, dims: BipartiteDims) -> Result<Self> {
        dims.check_total(vec.len())?;
        let defect = (vec.norm() - 1.0).abs();
        if defect > 1e-10 {
            return Err(Error::NotNormalized(defect));
        }
        Ok(Self { vec, dims })
    }

    /// Rescales to unit norm; errors on the zero vector.
    pub fn normalized(vec: CVector, dims: BipartiteDims) -> Result<Self> {
        let n = vec.norm();
        if n <= 0.0 {
            return Err(Error::NotNormalized(1.0));
        }
        Self::new(vec / C64::new(n, 0.0), dims)
    }

    pub fn vec(&self) -> &CVector {
        &self.vec
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn schmidt(&self) -> Result<qlinalg::Schmidt> {
        qlinalg::schmidt_decompose(&self.vec, self.dims)
    }
}

/// (|00⟩ + |11⟩)/√2
pub fn psi_plus() -> PureKet {
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut v = CVector::zeros(4);
    v[0] = s;
    v[3] = s;
    PureKet::new(v, BipartiteDims { da: 2, db: 2 }).expect("normalized by construction")
}

/// (|00⟩ − |11⟩)/√2
pub fn psi_minus() -> PureKet {
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut v = CVector::zeros(4);
    v[0] = s;
    v[3] = -s;
    PureKet::new(v, BipartiteDims { da: 2, db: 2 }).expect("normalized by construction")
}

/// p |ψ₊⟩⟨ψ₊| + (1−p) |ψ₋⟩⟨ψ₋| on a 2⊗2 cut.
pub fn bell_diagonal(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::BadParameter(format!("p = {p} outside [0,1]")));
    }
    let plus = DensityMatrix::from_pure(&psi_plus());
    let minus = DensityMatrix::from_pure(&psi_minus());
    let mat = plus.mat * C64::new(p, 0.0) + minus.mat * C64::new(1.0 - p, 0.0);
    DensityMatrix::new(mat, BipartiteDims { da: 2, db: 2 })
}

// ---------------------------------------------------------------------------
// PPT check
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct PptCheck {
    pub is_ppt: bool,
    pub min_pt_eigenvalue: f64,
}

/// Peres–Horodecki test: positivity of the partial transpose.
pub fn is_ppt(rho: &DensityMatrix, tol: f64) -> PptCheck {
    let pt = partial_transpose(rho.mat(), rho.dims(), Subsystem::B)
        .expect("dims validated at construction");
    let min = herm_eig(&pt).expect("PT of Hermitian is Hermitian").min();
    PptCheck {
        is_ppt: min >= -tol,
        min_pt_eigenvalue: min,
    }
}

// ---------------------------------------------------------------------------
// Maximally correlated states: ρ = Σ_ij a_ij |ii⟩⟨jj|
// ---------------------------------------------------------------------------

/// Coefficient matrix of an MC state; it is the state compressed onto the
/// |ii⟩ subspace, so it must itself be a valid d×d density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MCCoefficients {
    a: CMatrix,
}

impl MCCoefficients {
    pub fn new(a: CMatrix) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::BadDims(format!(
                "coefficient matrix is {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        let d = a.nrows();
        if d * d > MAX_DIM {
            return Err(Error::TooLarge {
                dim: d * d,
                cap: MAX_DIM,
            });
        }
        let report = validate(&a);
        if !report.pass {
            return Err(Error::NotAState(format!(
                "coefficients: hermiticity defect {:.3e}, trace defect {:.3e}, min eigenvalue {:.3e}",
                report.hermiticity_defect, report.trace_defect, report.min_eigenvalue
            )));
        }
        Ok(Self { a })
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn d(&self) -> usize {
        self.a.nrows()
    }

    /// Largest |a_ij| with i ≠ j.
    pub fn max_off_diagonal(&self) -> f64 {
        let d = self.d();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    worst = worst.max(self.a[(i, j)].norm());
                }
            }
        }
        worst
    }

    /// Drops all off-diagonal coefficients (the separable member of the MC
    /// family with the same populations).
    pub fn diagonal_part(&self) -> Self {
        let d = self.d();
        let mut a = CMatrix::zeros(d, d);
        for i in 0..d {
            a[(i, i)] = C64::new(self.a[(i, i)].re, 0.0);
        }
        Self { a }
    }
}

/// Embeds the coefficient matrix as ρ = Σ a_ij |ii⟩⟨jj| on a d⊗d cut.
pub fn mc_from_coefficients(coeffs: &MCCoefficients) -> DensityMatrix {
    let d = coeffs.d();
    let n = d * d;
    let mut mat = CMatrix::zeros(n, n);
    for i in 0..d {
        for j in 0..d {
            mat[(i * d + i, j * d + j)] = coeffs.a[(i, j)];
        }
    }
    DensityMatrix::new(mat, BipartiteDims { da: d, db: d })
        .expect("embedding of a valid coefficient matrix is a valid state")
}

/// Outcome of scanning a state for the MC pattern in the fixed
/// computational basis.
#[derive(Debug, Clone)]
pub enum McVerdict {
    Mc(MCCoefficients),
    NotMc { row: usize, col: usize, modulus: f64 },
}

impl McVerdict {
    pub fn is_mc(&self) -> bool {
        matches!(self, McVerdict::Mc(_))
    }

    pub fn coefficients(self) -> Option<MCCoefficients> {
        match self {
            McVerdict::Mc(c) => Some(c),
            McVerdict::NotMc { .. } => None,
        }
    }
}

/// Largest entry of ρ outside the {|ii⟩⟨jj|} pattern, with its position.
fn max_off_pattern(rho: &DensityMatrix) -> (usize, usize, f64) {
    let d = rho.dims().da;
    let n = rho.dim();
    let mut worst = (0usize, 0usize, 0.0f64);
    for r in 0..n {
        for c in 0..n {
            let on_pattern = r % (d + 1) == 0 && c % (d + 1) == 0;
            if !on_pattern {
                let m = rho.mat()[(r, c)].norm();
                if m > worst.2 {
                    worst = (r, c, m);
                }
            }
        }
    }
    worst
}

/// Detects the MC pattern (fixed computational basis, dA = dB required) and
/// returns the coefficient matrix, or the largest offending entry.
pub fn detect_mc(rho: &DensityMatrix, tol: f64) -> Result<McVerdict> {
    let dims = rho.dims();
    if dims.da != dims.db {
        return Err(Error::NotSquareCut {
            da: dims.da,
            db: dims.db,
        });
    }
    let d = dims.da;
    let (row, col, modulus) = max_off_pattern(rho);
    if modulus >= tol {
        return Ok(McVerdict::NotMc { row, col, modulus });
    }
    let mut a = CMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            a[(i, j)] = rho.mat()[(i * d + i, j * d + j)];
        }
    }
    let coeffs = MCCoefficients::new(hermitize(&a))
        .expect("compression of a valid state onto the |ii> subspace");
    Ok(McVerdict::Mc(coeffs))
}

// ---------------------------------------------------------------------------
// Grouped tensor products (the AA'|BB' regrouping used by the MC facts
// and by regularization)
// ---------------------------------------------------------------------------

/// ρ_AB ⊗ σ_A'B' regrouped to the (AA')|(BB') cut.
pub fn grouped_tensor(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<DensityMatrix> {
    let (d1, d2) = (rho.dims(), sigma.dims());
    let raw = tensor_product(rho.mat(), sigma.mat());
    let grouped = permute_systems(&raw, &[d1.da, d1.db, d2.da, d2.db], &[0, 2, 1, 3])?;
    DensityMatrix::new(
        grouped,
        BipartiteDims {
            da: d1.da * d2.da,
            db: d1.db * d2.db,
        },
    )
}

/// ρ^⊗n regrouped to the (A…A)|(B…B) cut.
pub fn tensor_power_grouped(rho: &DensityMatrix, n: usize) -> Result<DensityMatrix> {
    if n == 0 {
        return Err(Error::BadParameter("tensor power needs n >= 1".into()));
    }
    if rho.dim().pow(n as u32) > MAX_DIM {
        return Err(Error::TooLarge {
            dim: rho.dim().pow(n as u32),
            cap: MAX_DIM,
        });
    }
    let mut out = rho.clone();
    for _ in 1..n {
        out = grouped_tensor(&out, rho)?;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Seeded random states
// ---------------------------------------------------------------------------

/// G G†/Tr with G a dim×rank standard complex Gaussian (Hilbert–Schmidt
/// style); deterministic per seed.
pub fn random_density(dims: BipartiteDims, rank: usize, seed: u64) -> Result<DensityMatrix> {
    let dim = dims.total();
    if rank == 0 || rank > dim {
        return Err(Error::BadRank { rank, dim });
    }
    let mut rng = rng_for(seed);
    let g = gaussian_matrix(&mut rng, dim, rank);
    let raw = &g * g.adjoint();
    let tr = trace_re(&raw);
    DensityMatrix::new(hermitize(&(raw / C64::new(tr, 0.0))), dims)
}

/// Random normalized ket, deterministic per seed.
pub fn random_pure(dims: BipartiteDims, seed: u64) -> PureKet {
    let mut rng = rng_for(seed);
    let g = gaussian_matrix(&mut rng, dims.total(), 1);
    PureKet::normalized(g.column(0).into_owned(), dims)
        .expect("Gaussian vector is nonzero almost surely")
}

/// Random MC coefficient matrix (a d×d Hilbert–Schmidt density).
pub fn random_mc(d: usize, seed: u64) -> Result<MCCoefficients> {
    if d == 0 {
        return Err(Error::BadParameter("d must be positive".into()));
    }
    if d * d > MAX_DIM {
        return Err(Error::TooLarge {
            dim: d * d,
            cap: MAX_DIM,
        });
    }
    let mut rng = rng_for(seed);
    let g = gaussian_matrix(&mut rng, d, d);
    let raw = &g * g.adjoint();
    let tr = trace_re(&raw);
    MCCoefficients::new(hermitize(&(raw / C64::new(tr, 0.0))))
}

/// Random density supported exactly on range(ρ): a full-rank random mixture
/// in the support basis of ρ.
pub fn random_support_state(rho: &DensityMatrix, seed: u64) -> DensityMatrix {
    let eig = herm_eig(rho.mat()).expect("validated Hermitian");
    let support: Vec<usize> = (0..eig.values.len())
        .filter(|&k| eig.values[k] > RANK_CUTOFF)
        .collect();
    let r = support.len();
    let mut basis = CMatrix::zeros(rho.dim(), r);
    for (dst, &src) in support.iter().enumerate() {
        basis.set_column(dst, &eig.vectors.column(src));
    }
    let mut rng = rng_for(seed);
    let g = gaussian_matrix(&mut rng, r, r);
    let small = &g * g.adjoint();
    let small = &small / C64::new(trace_re(&small), 0.0);
    let embedded = &basis * small * basis.adjoint();
    DensityMatrix::new(hermitize(&embedded), rho.dims())
        .expect("support mixture of a valid state is a valid state")
}

// ---------------------------------------------------------------------------
// Quantum channels
// ---------------------------------------------------------------------------

/// A completely positive trace-preserving map in Kraus form.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    kraus: Vec<CMatrix>,
    dim_in: usize,
    dim_out: usize,
}

impl KrausChannel {
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::BadParameter("channel needs at least one Kraus operator".into()))?;
        let (dim_out, dim_in) = (first.nrows(), first.ncols());
        let mut sum = CMatrix::zeros(dim_in, dim_in);
        for k in &kraus {
            if k.nrows() != dim_out || k.ncols() != dim_in {
                return Err(Error::BadDims("Kraus operators have mixed shapes".into()));
            }
            sum += k.adjoint() * k;
        }
        let defect = (&sum - identity(dim_in)).norm();
        if defect > 1e-8 {
            return Err(Error::BadParameter(format!(
                "channel is not trace preserving: |sum K'K - I| = {defect:.3e}"
            )));
        }
        Ok(Self {
            kraus,
            dim_in,
            dim_out,
        })
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            kraus: vec![identity(dim)],
            dim_in: dim,
            dim_out: dim,
        }
    }

    /// Kraus set {|i⟩⟨j|/√d}: sends every state to I/d.
    pub fn completely_depolarizing(dim: usize) -> Self {
        let scale = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
        let mut kraus = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let mut k = CMatrix::zeros(dim, dim);
                k[(i, j)] = scale;
                kraus.push(k);
            }
        }
        Self {
            kraus,
            dim_in: dim,
            dim_out: dim,
        }
    }
}

/// Σ K ρ K†. The output keeps the input cut when the dimension is
/// unchanged; otherwise it is annotated as (dim_out, 1).
pub fn apply_channel(rho: &DensityMatrix, ch: &KrausChannel) -> Result<DensityMatrix> {
    if ch.dim_in != rho.dim() {
        return Err(Error::BadDims(format!(
            "channel input dim {} vs state dim {}",
            ch.dim_in,
            rho.dim()
        )));
    }
    let mut out = CMatrix::zeros(ch.dim_out, ch.dim_out);
    for k in &ch.kraus {
        out += k * rho.mat() * k.adjoint();
    }
    let dims = if ch.dim_out == rho.dim() {
        rho.dims()
    } else {
        BipartiteDims {
            da: ch.dim_out,
            db: 1,
        }
    };
    DensityMatrix::new(hermitize(&out), dims)
}

/// Random channel from a seeded random isometry: QR-orthonormalized Gaussian
/// columns of shape (dim_out·env)×dim_in, sliced along the environment.
pub fn random_channel(dim_in: usize, dim_out: usize, env: usize, seed: u64) -> Result<KrausChannel> {
    if dim_in == 0 || dim_out == 0 || env == 0 {
        return Err(Error::BadParameter("channel dims must be positive".into()));
    }
    if dim_out * env < dim_in {
        return Err(Error::BadParameter(format!(
            "no isometry from dim {dim_in} into {dim_out}x{env}"
        )));
    }
    let mut rng = rng_for(seed);
    let g = gaussian_matrix(&mut rng, dim_out * env, dim_in);
    let q = g.qr().q();
    let mut kraus = Vec::with_capacity(env);
    for e in 0..env {
        let mut k = CMatrix::zeros(dim_out, dim_in);
        for o in 0..dim_out {
            for i in 0..dim_in {
                k[(o, i)] = q[(o * env + e, i)];
            }
        }
        kraus.push(k);
    }
    KrausChannel::new(kraus)
}
