//! Independent numeric route to the spectrum: the operator behind the coupled
//! Bargmann system, truncated in the Fock basis and diagonalized.
//!
//! Reading z as a† and d/dz as a, the two equations say Hψ = Eψ with
//! H = ω a†a + 2g(a² + a†²)⊗σ(+,−) + (ω₀/2)⊗σ(flip): diagonal ωn, spin
//! coupling ω₀/2 between (n,0)↔(n,1), photon coupling ±2g√((n+1)(n+2))
//! between (n,s)↔(n+2,s) with sign + for spin 0 and − for spin 1. Photon
//! parity commutes with H, so even and odd sectors may be built separately.
//!
//! Floating point enters the crate only here. Matrix entries are formed from
//! the exact rational parameters and rounded once; everything upstream of the
//! eigensolver stays exact. Convergence is estimated by comparing two photon
//! cutoffs level-by-level (matched by sorted index, so degenerate pairs stay
//! paired), and each reported eigenvector gets a Bargmann-norm diagnostic:
//! in Fock coefficients the squared norm is Σ|cₙ|², in raw monomial
//! coefficients Σ|cₙ|²·n!, and both are tracked as log-scale partial sums.

use crate::exact::{rat, GaussianRational, Rational};
use crate::gfunction::{g_root_scan, ScanPoint};
use crate::series::{InitialConditions, ModelParams, SeriesError};
use nalgebra::DMatrix;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Iteration cap handed to the tridiagonal QL stage; generous next to the
/// usual two or three sweeps per eigenvalue.
const MAX_QL_ITERATIONS: usize = 50_000;

#[derive(Debug, Error)]
pub enum SpectrumError {
    #[error("photon cutoff n_max = {got} is below the minimum 2")]
    TruncationTooSmall { got: usize },
    #[error(
        "spectral collapse: omega0 = 0 and |4g| = {four_g} >= |omega| = {omega}; \
         the squeezed-oscillator spectrum is continuous there and truncation \
         produces garbage, so the build is refused"
    )]
    SpectralCollapse { four_g: String, omega: String },
    #[error("matrix contains non-finite entries")]
    NonFiniteEntries,
    #[error("symmetric eigensolver did not converge within {iterations} QL iterations")]
    SolverDidNotConverge { iterations: usize },
    #[error("eigenpair residual bound {bound:.3e} exceeds tol * ||H|| = {limit:.3e}")]
    ResidualTooLarge { bound: f64, limit: f64 },
    #[error("truncation pair must be strictly increasing, got ({n1}, {n2})")]
    BadTruncationPair { n1: usize, n2: usize },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Photon-number parity of a sector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn label(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }

    fn offset(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn matches(self, photons: usize) -> bool {
        photons % 2 == self.offset()
    }
}

/// One Fock-basis state: photon number and spin (0 or 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisState {
    pub photons: usize,
    pub spin: u8,
}

/// The truncated operator. E in `params` plays no role here. Without a
/// parity block the basis is (n, s) for n ≤ n_max ordered by index 2n + s,
/// dimension 2(n_max + 1); with one, only the chosen photon parity appears,
/// in the same photon-then-spin order.
#[derive(Clone, Debug)]
pub struct TruncatedHamiltonian {
    pub params: ModelParams,
    pub n_max: usize,
    pub parity_block: Option<Parity>,
    pub matrix: DMatrix<f64>,
    pub basis: Vec<BasisState>,
}

fn approx(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Build the truncated matrix. Refuses n_max < 2 (the photon coupling first
/// acts at n = 2) and the ω₀ = 0 collapse region |4g| ≥ |ω|, where the
/// squeezed-oscillator closed form loses its discrete spectrum.
pub fn build_hamiltonian(
    params: &ModelParams,
    n_max: usize,
    parity_block: Option<Parity>,
) -> Result<TruncatedHamiltonian, SpectrumError> {
    if n_max < 2 {
        return Err(SpectrumError::TruncationTooSmall { got: n_max });
    }
    if params.omega0.is_zero() && params.g.abs() * rat(4, 1) >= params.omega.abs() {
        return Err(SpectrumError::SpectralCollapse {
            four_g: (params.g.abs() * rat(4, 1)).to_string(),
            omega: params.omega.abs().to_string(),
        });
    }
    Ok(build_unchecked(params, n_max, parity_block))
}

/// No validation; lets tests exercise the degenerate n_max = 0 block.
pub(crate) fn build_unchecked(
    params: &ModelParams,
    n_max: usize,
    parity_block: Option<Parity>,
) -> TruncatedHamiltonian {
    let photons: Vec<usize> = (0..=n_max)
        .filter(|&n| parity_block.map_or(true, |p| p.matches(n)))
        .collect();
    let dim = 2 * photons.len();
    let omega = approx(&params.omega);
    let half_omega0 = approx(&(&params.omega0 / rat(2, 1)));
    let two_g = approx(&(&params.g * rat(2, 1)));

    let mut basis = Vec::with_capacity(dim);
    for &n in &photons {
        basis.push(BasisState { photons: n, spin: 0 });
        basis.push(BasisState { photons: n, spin: 1 });
    }

    let rank = |n: usize| match parity_block {
        None => n,
        Some(p) => (n - p.offset()) / 2,
    };
    let mut matrix = DMatrix::zeros(dim, dim);
    for &n in &photons {
        let r = 2 * rank(n);
        let diag = omega * n as f64;
        matrix[(r, r)] = diag;
        matrix[(r + 1, r + 1)] = diag;
        matrix[(r, r + 1)] = half_omega0;
        matrix[(r + 1, r)] = half_omega0;
        if n + 2 <= n_max {
            let r2 = 2 * rank(n + 2);
            let coupling = two_g * (((n + 1) * (n + 2)) as f64).sqrt();
            for s in 0..2 {
                let signed = if s == 0 { coupling } else { -coupling };
                matrix[(r + s, r2 + s)] = signed;
                matrix[(r2 + s, r + s)] = signed;
            }
        }
    }
    TruncatedHamiltonian {
        params: params.clone(),
        n_max,
        parity_block,
        matrix,
        basis,
    }
}

// ---- Eigensolve ----

/// Full eigendecomposition: eigenvalues ascending, eigenvector columns in the
/// same order, per-pair residuals ‖Hv − λv‖₂/‖v‖₂ and their maximum.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
    pub residuals: Vec<f64>,
    pub residual_bound: f64,
}

/// Spectrum of one or two truncations. `eigenvalues` is the full ascending
/// list from the (finer) truncation; the leading `converged_count` of them
/// are the levels stable across the truncation pair, and only that prefix is
/// meant when the result is read as "the spectrum". A single-truncation
/// result carries converged_count = 0: nothing has been cross-checked.
#[derive(Clone, Debug)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    pub residual_bound: f64,
    pub truncation_pair: (usize, usize),
    pub converged_count: usize,
    pub tolerance: f64,
}

impl SpectrumResult {
    /// The converged prefix.
    pub fn spectrum(&self) -> &[f64] {
        &self.eigenvalues[..self.converged_count]
    }

    pub fn converged_flag(&self, index: usize) -> bool {
        index < self.converged_count
    }
}

/// Dense symmetric eigensolve (tridiagonalization + implicit QL), orthogonal
/// transformations only. Enforces the residual contract: the returned bound
/// must not exceed tol·‖H‖₂, with ‖H‖₂ read off the computed eigenvalues.
pub fn diagonalize_full(
    h: &TruncatedHamiltonian,
    tol: f64,
) -> Result<Decomposition, SpectrumError> {
    if !h.matrix.iter().all(|x| x.is_finite()) {
        return Err(SpectrumError::NonFiniteEntries);
    }
    let eigen =
        nalgebra::SymmetricEigen::try_new(h.matrix.clone(), f64::EPSILON, MAX_QL_ITERATIONS)
            .ok_or(SpectrumError::SolverDidNotConverge {
                iterations: MAX_QL_ITERATIONS,
            })?;
    let dim = h.matrix.nrows();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eigen.eigenvalues[a].total_cmp(&eigen.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eigen.eigenvalues[i]).collect();
    let mut eigenvectors = DMatrix::zeros(dim, dim);
    for (target, &source) in order.iter().enumerate() {
        eigenvectors
            .column_mut(target)
            .copy_from(&eigen.eigenvectors.column(source));
    }
    let image = &h.matrix * &eigenvectors;
    let mut residuals = Vec::with_capacity(dim);
    for (i, &lambda) in eigenvalues.iter().enumerate() {
        let v = eigenvectors.column(i);
        let r = (&image.column(i) - &(v * lambda)).norm() / v.norm();
        residuals.push(r);
    }
    let residual_bound = residuals.iter().cloned().fold(0.0, f64::max);
    let norm_h = eigenvalues.iter().fold(0.0f64, |m, &l| m.max(l.abs()));
    if residual_bound > tol * norm_h {
        return Err(SpectrumError::ResidualTooLarge {
            bound: residual_bound,
            limit: tol * norm_h,
        });
    }
    Ok(Decomposition {
        eigenvalues,
        eigenvectors,
        residuals,
        residual_bound,
    })
}

/// Single-truncation spectrum: all eigenvalues ascending with residuals,
/// truncation pair (n_max, n_max), no convergence assessment.
pub fn diagonalize(h: &TruncatedHamiltonian, tol: f64) -> Result<SpectrumResult, SpectrumError> {
    let decomp = diagonalize_full(h, tol)?;
    Ok(SpectrumResult {
        eigenvalues: decomp.eigenvalues,
        residuals: decomp.residuals,
        residual_bound: decomp.residual_bound,
        truncation_pair: (h.n_max, h.n_max),
        converged_count: 0,
        tolerance: tol,
    })
}

/// Eigenvalues only, ascending; used for cutoff ladders where vectors are
/// never needed.
pub fn eigenvalues_only(h: &TruncatedHamiltonian) -> Vec<f64> {
    let mut values: Vec<f64> = h.matrix.symmetric_eigenvalues().iter().cloned().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// A converged-spectrum run that keeps the finer truncation's decomposition
/// and basis around, for eigenvector-level diagnostics.
#[derive(Clone, Debug)]
pub struct ConvergedSpectrum {
    pub result: SpectrumResult,
    pub hamiltonian: TruncatedHamiltonian,
    pub decomposition: Decomposition,
}

impl ConvergedSpectrum {
    /// Spin components of eigenvector `index` (sorted order), each a Fock
    /// coefficient sequence over the basis's ascending photon numbers.
    pub fn eigenvector_spin_components(&self, index: usize) -> (Vec<f64>, Vec<f64>) {
        let v = self.decomposition.eigenvectors.column(index);
        let mut up = Vec::with_capacity(self.hamiltonian.basis.len() / 2);
        let mut down = Vec::with_capacity(self.hamiltonian.basis.len() / 2);
        for (j, state) in self.hamiltonian.basis.iter().enumerate() {
            if state.spin == 0 {
                up.push(v[j]);
            } else {
                down.push(v[j]);
            }
        }
        (up, down)
    }
}

/// Diagonalize at two cutoffs and keep as converged the longest leading run
/// of eigenvalues that agree pairwise within tol, matching by sorted index
/// so degenerate pairs never cross-match. Eigenvalues and residuals come
/// from the finer cutoff; the residual bound covers the converged prefix.
pub fn converged_spectrum_full(
    params: &ModelParams,
    parity_block: Option<Parity>,
    n_max: usize,
    n_max_fine: usize,
    tol: f64,
) -> Result<ConvergedSpectrum, SpectrumError> {
    if n_max >= n_max_fine {
        return Err(SpectrumError::BadTruncationPair {
            n1: n_max,
            n2: n_max_fine,
        });
    }
    let coarse = eigenvalues_only(&build_hamiltonian(params, n_max, parity_block)?);
    let hamiltonian = build_hamiltonian(params, n_max_fine, parity_block)?;
    let decomposition = diagonalize_full(&hamiltonian, tol)?;
    let fine = &decomposition.eigenvalues;
    let mut converged_count = 0;
    while converged_count < coarse.len()
        && converged_count < fine.len()
        && (coarse[converged_count] - fine[converged_count]).abs() <= tol
    {
        converged_count += 1;
    }
    if converged_count == 0 {
        log::warn!(
            "no eigenvalue is stable between cutoffs {} and {} at tol {:e}; \
             the parameters may sit near spectral collapse",
            n_max,
            n_max_fine,
            tol
        );
    }
    let residual_bound = decomposition.residuals[..converged_count]
        .iter()
        .cloned()
        .fold(0.0, f64::max);
    let result = SpectrumResult {
        eigenvalues: fine.clone(),
        residuals: decomposition.residuals.clone(),
        residual_bound,
        truncation_pair: (n_max, n_max_fine),
        converged_count,
        tolerance: tol,
    };
    Ok(ConvergedSpectrum {
        result,
        hamiltonian,
        decomposition,
    })
}

/// The two-cutoff spectrum without retained eigenvectors.
pub fn converged_spectrum(
    params: &ModelParams,
    n_max: usize,
    n_max_fine: usize,
    tol: f64,
) -> Result<SpectrumResult, SpectrumError> {
    converged_spectrum_full(params, None, n_max, n_max_fine, tol).map(|c| c.result)
}

// ---- Bargmann norm diagnostics ----

/// How a coefficient sequence is weighted in the squared Bargmann norm:
/// orthonormal Fock coefficients contribute |cₙ|², raw monomial coefficients
/// of zⁿ contribute |cₙ|²·n!.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormWeighting {
    Fock,
    Monomial,
}

impl NormWeighting {
    pub fn label(self) -> &'static str {
        match self {
            NormWeighting::Fock => "fock",
            NormWeighting::Monomial => "monomial",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormClass {
    Converging,
    Diverging,
    Inconclusive,
}

impl NormClass {
    pub fn label(self) -> &'static str {
        match self {
            NormClass::Converging => "converging",
            NormClass::Diverging => "diverging",
            NormClass::Inconclusive => "inconclusive",
        }
    }
}

/// Log-scale partial sums of the weighted squared norm and their tail
/// classification.
#[derive(Clone, Debug)]
pub struct BargmannNormDiag {
    pub weighting: NormWeighting,
    pub partial_log_sums: Vec<f64>,
    pub classification: NormClass,
}

fn logaddexp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Increment of consecutive log partial sums; two empty sums count as no
/// growth, so an identically zero tail classifies as converging.
fn log_increment(prev: f64, cur: f64) -> f64 {
    if prev == f64::NEG_INFINITY && cur == f64::NEG_INFINITY {
        0.0
    } else {
        cur - prev
    }
}

/// Tail rule, deterministic: with fewer than 11 partial sums nothing can be
/// said; otherwise converging when each of the last 10 increments is below
/// 1e-12, diverging when each exceeds 1e-6, inconclusive between.
fn classify(partial_log_sums: &[f64]) -> NormClass {
    if partial_log_sums.len() < 11 {
        return NormClass::Inconclusive;
    }
    let tail = &partial_log_sums[partial_log_sums.len() - 11..];
    let increments: Vec<f64> = tail.windows(2).map(|w| log_increment(w[0], w[1])).collect();
    if increments.iter().all(|&d| d < 1e-12) {
        NormClass::Converging
    } else if increments.iter().all(|&d| d > 1e-6) {
        NormClass::Diverging
    } else {
        NormClass::Inconclusive
    }
}

/// Partial sums of the squared Bargmann norm of a coefficient sequence, in
/// log scale (so factorially weighted tails cannot overflow), with the tail
/// classification.
pub fn bargmann_norm_diag(coeffs: &[f64], weighting: NormWeighting) -> BargmannNormDiag {
    let mut partial_log_sums = Vec::with_capacity(coeffs.len());
    let mut partial = f64::NEG_INFINITY;
    let mut ln_factorial = 0.0;
    for (n, &c) in coeffs.iter().enumerate() {
        if n > 0 {
            ln_factorial += (n as f64).ln();
        }
        let log_term = match weighting {
            NormWeighting::Fock => 2.0 * c.abs().ln(),
            NormWeighting::Monomial => 2.0 * c.abs().ln() + ln_factorial,
        };
        partial = logaddexp(partial, log_term);
        partial_log_sums.push(partial);
    }
    let classification = classify(&partial_log_sums);
    BargmannNormDiag {
        weighting,
        partial_log_sums,
        classification,
    }
}

// ---- Spectrum against the root scan ----

/// The two routes side by side: a discrete converged spectrum from the
/// truncated operator, and a root scan of the vanishing combination over the
/// same energy grid, which is exactly zero at every grid point and therefore
/// singles out none of them.
#[derive(Clone, Debug)]
pub struct ComparisonReport {
    pub spectrum: SpectrumResult,
    pub scan: Vec<ScanPoint>,
    pub scan_zero_count: usize,
    pub scan_all_zero: bool,
}

impl ComparisonReport {
    pub fn conclusion(&self) -> String {
        if self.scan_all_zero {
            format!(
                "the combination evaluates to exactly zero at all {} grid energies, \
                 so a root condition on it holds everywhere and selects no levels; \
                 the truncated-basis computation nevertheless finds {} converged \
                 discrete eigenvalues",
                self.scan.len(),
                self.spectrum.converged_count
            )
        } else {
            format!(
                "the scan is nonzero at {} of {} grid energies (control run); \
                 the truncated-basis computation finds {} converged discrete \
                 eigenvalues",
                self.scan.len() - self.scan_zero_count,
                self.scan.len(),
                self.spectrum.converged_count
            )
        }
    }
}

/// Scan with explicit initial conditions and phase; the canonical entry point
/// [`spectrum_vs_gscan`] fixes the vanishing member (even ics, c = +1).
#[allow(clippy::too_many_arguments)]
pub fn spectrum_vs_gscan_with(
    params: &ModelParams,
    grid: &[Rational],
    z0: &GaussianRational,
    order: usize,
    cutoffs: (usize, usize),
    tol: f64,
    ics: &InitialConditions<GaussianRational>,
    phase: &GaussianRational,
) -> Result<ComparisonReport, SpectrumError> {
    let spectrum = converged_spectrum(params, cutoffs.0, cutoffs.1, tol)?;
    let scan = g_root_scan(params, grid, z0, order, ics, phase)?;
    let scan_zero_count = scan.iter().filter(|p| p.is_zero).count();
    let scan_all_zero = scan_zero_count == scan.len();
    Ok(ComparisonReport {
        spectrum,
        scan,
        scan_zero_count,
        scan_all_zero,
    })
}

pub fn spectrum_vs_gscan(
    params: &ModelParams,
    grid: &[Rational],
    z0: &GaussianRational,
    order: usize,
    cutoffs: (usize, usize),
    tol: f64,
) -> Result<ComparisonReport, SpectrumError> {
    spectrum_vs_gscan_with(
        params,
        grid,
        z0,
        order,
        cutoffs,
        tol,
        &InitialConditions::even(),
        &num_traits::One::one(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{gauss_real, Energy};

    fn params(g: Rational, omega: Rational, omega0: Rational) -> ModelParams {
        ModelParams::new(g, omega, omega0, Energy::Value(rat(0, 1)))
    }

    fn defaults() -> ModelParams {
        params(rat(1, 10), rat(1, 1), rat(7, 10))
    }

    #[test]
    fn build_rejects_small_cutoff() {
        for n_max in [0, 1] {
            assert!(matches!(
                build_hamiltonian(&defaults(), n_max, None),
                Err(SpectrumError::TruncationTooSmall { got }) if got == n_max
            ));
        }
        assert!(build_hamiltonian(&defaults(), 2, None).is_ok());
    }

    #[test]
    fn collapse_guard() {
        // omega0 = 0, 4g = 1 >= omega = 1: refused
        assert!(matches!(
            build_hamiltonian(&params(rat(1, 4), rat(1, 1), rat(0, 1)), 10, None),
            Err(SpectrumError::SpectralCollapse { .. })
        ));
        // 4g = 0.96 < 1: allowed
        assert!(build_hamiltonian(&params(rat(24, 100), rat(1, 1), rat(0, 1)), 10, None).is_ok());
        // omega0 != 0 never triggers the guard
        assert!(build_hamiltonian(&params(rat(1, 2), rat(1, 1), rat(7, 10)), 10, None).is_ok());
    }

    #[test]
    fn degenerate_two_by_two_block() {
        // n_max = 0 via the internal path: [[0, w0/2], [w0/2, 0]]
        let h = build_unchecked(&defaults(), 0, None);
        assert_eq!(h.matrix.nrows(), 2);
        let half = 0.35;
        assert_eq!(h.matrix[(0, 0)], 0.0);
        assert_eq!(h.matrix[(1, 1)], 0.0);
        assert_eq!(h.matrix[(0, 1)], half);
        assert_eq!(h.matrix[(1, 0)], half);
        let d = diagonalize(&h, 1e-10).unwrap();
        assert!((d.eigenvalues[0] + half).abs() < 1e-12);
        assert!((d.eigenvalues[1] - half).abs() < 1e-12);
        assert_eq!(d.converged_count, 0);
        assert_eq!(d.truncation_pair, (0, 0));
    }

    #[test]
    fn matrix_is_exactly_symmetric_with_stated_pattern() {
        let h = build_hamiltonian(&defaults(), 12, None).unwrap();
        assert_eq!(h.matrix, h.matrix.transpose());
        assert_eq!(h.matrix.nrows(), 2 * 13);
        let two_g = 0.2;
        for n in 0..=12usize {
            let r = 2 * n;
            assert_eq!(h.matrix[(r, r)], n as f64);
            assert_eq!(h.matrix[(r + 1, r + 1)], n as f64);
            assert_eq!(h.matrix[(r, r + 1)], 0.35);
            if n + 2 <= 12 {
                let expect = two_g * (((n + 1) * (n + 2)) as f64).sqrt();
                assert_eq!(h.matrix[(r, r + 4)], expect);
                assert_eq!(h.matrix[(r + 1, r + 5)], -expect);
                // no spin flip along the photon coupling
                assert_eq!(h.matrix[(r, r + 5)], 0.0);
                assert_eq!(h.matrix[(r + 1, r + 4)], 0.0);
            }
        }
        // entry between (0,s) and (2,s) is +-2g*sqrt(2)
        let root2 = 2.0f64.sqrt();
        assert_eq!(h.matrix[(0, 4)], two_g * root2);
        assert_eq!(h.matrix[(1, 5)], -two_g * root2);
        // bandwidth 4: nothing beyond the fourth off-diagonal
        for i in 0..h.matrix.nrows() {
            for j in 0..h.matrix.ncols() {
                if i.abs_diff(j) > 4 {
                    assert_eq!(h.matrix[(i, j)], 0.0);
                }
            }
        }
    }

    #[test]
    fn basis_ordering_and_parity_blocks() {
        let h = build_hamiltonian(&defaults(), 6, Some(Parity::Even)).unwrap();
        let photons: Vec<usize> = h.basis.iter().map(|b| b.photons).collect();
        assert_eq!(photons, vec![0, 0, 2, 2, 4, 4, 6, 6]);
        let spins: Vec<u8> = h.basis.iter().map(|b| b.spin).collect();
        assert_eq!(spins, vec![0, 1, 0, 1, 0, 1, 0, 1]);
        let h = build_hamiltonian(&defaults(), 6, Some(Parity::Odd)).unwrap();
        let photons: Vec<usize> = h.basis.iter().map(|b| b.photons).collect();
        assert_eq!(photons, vec![1, 1, 3, 3, 5, 5]);
    }

    #[test]
    fn identity_matrix_eigenvalues_all_one() {
        let mut h = build_unchecked(&defaults(), 3, None);
        h.matrix = DMatrix::identity(8, 8);
        let d = diagonalize(&h, 1e-10).unwrap();
        assert!(d.eigenvalues.iter().all(|&l| (l - 1.0).abs() < 1e-14));
    }

    #[test]
    fn residuals_within_contract() {
        let h = build_hamiltonian(&defaults(), 60, None).unwrap();
        let d = diagonalize_full(&h, 1e-10).unwrap();
        let norm_h = d.eigenvalues.iter().fold(0.0f64, |m, &l| m.max(l.abs()));
        assert!(d.residual_bound <= 1e-10 * norm_h);
        assert!(d.residuals.iter().all(|&r| r <= d.residual_bound));
        // columns are orthonormal to solver precision
        let gram = d.eigenvectors.transpose() * &d.eigenvectors;
        let identity = DMatrix::identity(gram.nrows(), gram.ncols());
        assert!((gram - identity).norm() < 1e-10);
    }

    #[test]
    fn decoupled_limit_matches_closed_form() {
        // g = 0: eigenvalues are {omega*n +- omega0/2}, exact to 1e-12
        let h = build_hamiltonian(&params(rat(0, 1), rat(1, 1), rat(7, 10)), 50, None).unwrap();
        let got = eigenvalues_only(&h);
        let mut expect = Vec::new();
        for n in 0..=50 {
            expect.push(n as f64 - 0.35);
            expect.push(n as f64 + 0.35);
        }
        expect.sort_by(f64::total_cmp);
        assert_eq!(got.len(), expect.len());
        for (a, b) in got.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn squeezed_limit_matches_closed_form() {
        // omega0 = 0, g = 1/10: E_n = sqrt(omega^2-16g^2)(n+1/2) - omega/2,
        // each level twice (the two spin sectors are +-2g copies with the
        // same squeezed spectrum)
        let h = build_hamiltonian(&params(rat(1, 10), rat(1, 1), rat(0, 1)), 600, None).unwrap();
        let got = eigenvalues_only(&h);
        let epsilon = 0.84f64.sqrt();
        for k in 0..10 {
            let expect = epsilon * ((k / 2) as f64 + 0.5) - 0.5;
            assert!(
                (got[k] - expect).abs() < 1e-8,
                "level {k}: {} vs {expect}",
                got[k]
            );
        }
        assert!((got[0] - (-0.041_742_430_504_416_02)).abs() < 1e-10);
        assert!((got[2] - 0.874_772_708_486_725_3).abs() < 1e-10);
        // degenerate pairs
        for k in (0..10).step_by(2) {
            assert!((got[k + 1] - got[k]).abs() < 1e-8);
        }
    }

    #[test]
    fn parity_union_equals_full_spectrum() {
        let p = defaults();
        let full = eigenvalues_only(&build_hamiltonian(&p, 40, None).unwrap());
        let even = eigenvalues_only(&build_hamiltonian(&p, 40, Some(Parity::Even)).unwrap());
        let odd = eigenvalues_only(&build_hamiltonian(&p, 40, Some(Parity::Odd)).unwrap());
        let mut union = even;
        union.extend(odd);
        union.sort_by(f64::total_cmp);
        assert_eq!(union.len(), full.len());
        for (a, b) in union.iter().zip(&full) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn eigenvalues_monotone_in_cutoff() {
        // Cauchy interlacing: growing the cutoff can only lower each level
        let p = defaults();
        let ladder: Vec<Vec<f64>> = [10usize, 20, 40, 80]
            .iter()
            .map(|&n| eigenvalues_only(&build_hamiltonian(&p, n, None).unwrap()))
            .collect();
        for pair in ladder.windows(2) {
            for k in 0..pair[0].len().min(22) {
                assert!(pair[1][k] <= pair[0][k] + 1e-10);
            }
        }
    }

    #[test]
    fn converged_spectrum_decoupled_full_overlap() {
        let r = converged_spectrum(&params(rat(0, 1), rat(1, 1), rat(7, 10)), 10, 14, 1e-10)
            .unwrap();
        // every coarse level reappears exactly in the finer truncation
        assert_eq!(r.converged_count, 22);
        assert_eq!(r.eigenvalues.len(), 30);
        assert_eq!(r.spectrum().len(), 22);
        assert_eq!(r.truncation_pair, (10, 14));
        assert!(r.converged_flag(21) && !r.converged_flag(22));
    }

    #[test]
    fn converged_spectrum_rejects_bad_pair() {
        assert!(matches!(
            converged_spectrum(&defaults(), 20, 20, 1e-10),
            Err(SpectrumError::BadTruncationPair { n1: 20, n2: 20 })
        ));
    }

    #[test]
    fn converged_spectrum_defaults_oracle_third_cutoff() {
        // (500, 600) at 1e-10 must converge at least 10 levels, and those
        // levels must be confirmed by an independent 700 run
        let p = defaults();
        let r = converged_spectrum(&p, 500, 600, 1e-10).unwrap();
        assert!(r.converged_count >= 10, "converged {}", r.converged_count);
        let oracle = eigenvalues_only(&build_hamiltonian(&p, 700, None).unwrap());
        for k in 0..10 {
            assert!((r.eigenvalues[k] - oracle[k]).abs() <= 1e-10);
        }
        assert!(r.residual_bound <= 1e-10 * r.eigenvalues.last().unwrap().abs());
    }

    #[test]
    fn near_collapse_spacing_matches_squeezed_form() {
        // g = 0.24: radicand 1 - 16*0.0576 = 0.0784, spacing sqrt = 0.28
        let r = converged_spectrum(&params(rat(24, 100), rat(1, 1), rat(0, 1)), 500, 600, 1e-10)
            .unwrap();
        assert!(r.converged_count >= 4, "converged {}", r.converged_count);
        let spacing = r.eigenvalues[2] - r.eigenvalues[0];
        assert!((spacing - 0.28).abs() < 1e-6, "spacing {spacing}");
        assert!((r.eigenvalues[1] - r.eigenvalues[0]).abs() < 1e-8);
    }

    #[test]
    fn norm_diag_unit_vector() {
        let mut c = vec![0.0; 32];
        c[0] = 1.0;
        let d = bargmann_norm_diag(&c, NormWeighting::Fock);
        assert_eq!(d.classification, NormClass::Converging);
        assert!(d.partial_log_sums.iter().all(|&s| s.abs() < 1e-15));
    }

    #[test]
    fn norm_diag_exponential_function() {
        // monomial coefficients of e^z are 1/n!; norm^2 = sum 1/n! = e
        let coeffs: Vec<f64> = std::iter::successors(Some(1.0f64), {
            let mut n = 0.0;
            move |c| {
                n += 1.0;
                Some(c / n)
            }
        })
        .take(40)
        .collect();
        let d = bargmann_norm_diag(&coeffs, NormWeighting::Monomial);
        assert_eq!(d.classification, NormClass::Converging);
        let total = d.partial_log_sums.last().unwrap();
        assert!((total - 1.0).abs() < 1e-12, "log norm^2 {total}");
    }

    #[test]
    fn norm_diag_constant_terms_diverge() {
        // c_n = 1/sqrt(n!) as monomial coefficients: every term is 1
        let mut ln_fact = 0.0;
        let coeffs: Vec<f64> = (0..60)
            .map(|n| {
                if n > 0 {
                    ln_fact += (n as f64).ln();
                }
                (-0.5 * ln_fact).exp()
            })
            .collect();
        let d = bargmann_norm_diag(&coeffs, NormWeighting::Monomial);
        assert_eq!(d.classification, NormClass::Diverging);
        for (m, s) in d.partial_log_sums.iter().enumerate() {
            assert!((s - ((m + 1) as f64).ln()).abs() < 1e-9);
        }
    }

    #[test]
    fn norm_diag_short_input_inconclusive() {
        let d = bargmann_norm_diag(&[1.0; 10], NormWeighting::Fock);
        assert_eq!(d.classification, NormClass::Inconclusive);
    }

    #[test]
    fn eigenvector_components_normalized_and_converging() {
        let c = converged_spectrum_full(&defaults(), None, 30, 40, 1e-10).unwrap();
        let (up, down) = c.eigenvector_spin_components(0);
        assert_eq!(up.len(), 41);
        assert_eq!(down.len(), 41);
        let total: f64 = up.iter().chain(&down).map(|x| x * x).sum();
        assert!((total - 1.0).abs() < 1e-10);
        for component in [up, down] {
            let d = bargmann_norm_diag(&component, NormWeighting::Fock);
            assert_eq!(d.classification, NormClass::Converging);
        }
    }

    #[test]
    fn comparison_report_zero_scan_and_control() {
        let p = ModelParams::defaults(Energy::Value(rat(1, 2)));
        let grid: Vec<Rational> = (0..5).map(|k| rat(k, 2)).collect();
        let z0 = gauss_real(rat(1, 3));
        let report = spectrum_vs_gscan(&p, &grid, &z0, 24, (30, 40), 1e-8).unwrap();
        assert!(report.scan_all_zero);
        assert_eq!(report.scan_zero_count, 5);
        assert!(report.spectrum.converged_count > 0);
        assert!(report.conclusion().contains("all 5 grid energies"));

        let control = spectrum_vs_gscan_with(
            &p,
            &grid,
            &z0,
            24,
            (30, 40),
            1e-8,
            &InitialConditions::new(
                gauss_real(rat(1, 1)),
                gauss_real(rat(1, 1)),
                gauss_real(rat(1, 1)),
                gauss_real(rat(0, 1)),
            ),
            &num_traits::One::one(),
        )
        .unwrap();
        assert!(!control.scan_all_zero);
        assert_eq!(control.scan_zero_count, 0);
    }
}
