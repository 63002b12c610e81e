//! Binary template matching with inputs on a great circle.
//!
//! Three strategies are compared:
//!
//! * the optimal collective measurement: project onto the nonnegative eigenspace of
//!   `W_0 - W_1`;
//! * separate measurements on each copy followed by a majority vote;
//! * optimal covariant state estimation (a square-root measurement over `M > N`
//!   equatorial guesses) followed by classical comparison with the templates.
//!
//! `W_0 - W_1 = cos θ · D` where `D` does not depend on `θ`, so every strategy scores
//! `1/2 + K cos θ` with `K` depending only on `N` and the strategy.

use num_complex::Complex;

use crate::combinatorics::{binomial, double_factorial_ratio};
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, EigenDecomposition, Matrix};
use crate::pom::{square_root_measurement, Pom};
use crate::qstates::{
    check_copies, equatorial_state, n_copy_bosonic, overlap_sq, template_pair_v, BasisTag,
};
use crate::scalar::{from_usize, lit, Real};
use crate::scoreops::binary_diff_operator;

pub use crate::pom::{average_score, verify_optimality, OptimalityReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    Optimal,
    MajorityVoting,
    Estimation,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Optimal => "optimal",
            Strategy::MajorityVoting => "majority-voting",
            Strategy::Estimation => "estimation",
        }
    }
}

/// Average score achieved by one strategy.
#[derive(Clone, Debug, PartialEq)]
pub struct StrategyScore<T> {
    pub strategy: Strategy,
    pub n_copies: usize,
    pub theta: T,
    pub score: T,
    /// Number of estimation outcomes, estimation strategy only.
    pub estimates: Option<usize>,
    /// Offset of the estimation grid, estimation strategy only.
    pub phase: Option<T>,
    /// Set at `θ = π/2`, where the templates coincide and every strategy scores 1/2.
    pub degenerate: bool,
}

impl<T: Real> StrategyScore<T> {
    fn new(strategy: Strategy, n_copies: usize, theta: T, score: T) -> Self {
        Self {
            strategy,
            n_copies,
            theta,
            score,
            estimates: None,
            phase: None,
            degenerate: theta == T::FRAC_PI_2(),
        }
    }
}

fn check_theta<T: Real>(theta: T) -> Result<()> {
    if theta >= T::zero() && theta <= T::FRAC_PI_2() {
        Ok(())
    } else {
        Err(Error::Domain(format!("template angle {theta} outside [0, pi/2]")))
    }
}

/// Eigen-decomposition of `D = (W_0 - W_1)/cos θ`.
///
/// Eigenvalues are the `λ_0 > ... > λ_N`, which come in `±` pairs.
pub fn diff_spectrum<T: Real>(n: usize) -> Result<EigenDecomposition<T>> {
    let d = binary_diff_operator(n, T::zero())?;
    eig_hermitian(&d, lit(crate::linalg::DEFAULT_HERMITIAN_TOL))
}

/// The unitary `P` with `P (W_0 - W_1) P^† = cos θ · diag(λ_0, ..., λ_N)`.
/// Row `k` of `P` is the conjugated `k`-th eigenvector.
pub fn diagonalizing_operator<T: Real>(eig: &EigenDecomposition<T>) -> Matrix<T> {
    eig.eigenvectors.adjoint()
}

fn majority_split(n: usize) -> usize {
    n / 2 + 1
}

/// Optimal binary POM, its score, and the eigen-decomposition of `(W_0 - W_1)/cos θ`.
///
/// `Π_0` projects onto the `⌊N/2⌋ + 1` leading eigenvectors, which includes the zero
/// eigenvalue when `N` is even. `Π_1` projects onto the remaining ones.
pub fn optimal_binary_pom<T: Real>(
    n: usize,
    theta: T,
) -> Result<(Pom<T>, StrategyScore<T>, EigenDecomposition<T>)> {
    check_copies(n)?;
    check_theta(theta)?;
    let eig = diff_spectrum::<T>(n)?;
    let split = majority_split(n);
    let pi0 = eig.projector_onto(0..split);
    let pi1 = eig.projector_onto(split..=n);
    let pom = Pom::new(vec![pi0, pi1], BasisTag::UpDown)?;
    let lead = eig.eigenvalues[..split].iter().fold(T::zero(), |s, &x| s + x);
    let score = lit::<T>(0.5) + lead * theta.cos();
    Ok((pom, StrategyScore::new(Strategy::Optimal, n, theta, score), eig))
}

/// Separate up/down measurements with a majority vote. Ties at even `N` go to `g_0`.
pub fn majority_voting_pom<T: Real>(n: usize) -> Result<Pom<T>> {
    check_copies(n)?;
    let split = majority_split(n);
    let diag0: Vec<T> = (0..=n).map(|k| if k < split { T::one() } else { T::zero() }).collect();
    let diag1: Vec<T> = diag0.iter().map(|&x| T::one() - x).collect();
    Pom::new(
        vec![Matrix::from_diagonal(&diag0)?, Matrix::from_diagonal(&diag1)?],
        BasisTag::UpDown,
    )
}

/// Closed-form majority-voting score,
/// `1/2 + cos θ Σ_{k≤⌊N/2⌋} C(N,k) (2k-1)!!(2N-2k-1)!!/(2N)!! (N-2k)/(N+1)`.
pub fn majority_voting_score<T: Real>(n: usize, theta: T) -> Result<StrategyScore<T>> {
    check_copies(n)?;
    check_theta(theta)?;
    let ni = n as i64;
    let k_sum: f64 = (0..majority_split(n))
        .map(|k| {
            let k = k as i64;
            binomial(n as u64, k as u64) as f64
                * double_factorial_ratio(2 * k - 1, 2 * ni - 2 * k - 1, 2 * ni)
                * (ni - 2 * k) as f64
                / (ni + 1) as f64
        })
        .sum();
    let score = lit::<T>(0.5) + lit::<T>(k_sum) * theta.cos();
    Ok(StrategyScore::new(Strategy::MajorityVoting, n, theta, score))
}

fn check_estimation_args(n: usize, count: usize) -> Result<()> {
    check_copies(n)?;
    if count <= n {
        return Err(Error::Domain(format!(
            "optimal estimation needs more outcomes than copies (M = {count}, N = {n})"
        )));
    }
    Ok(())
}

/// Class of the `m`-th estimate: 0 if it is at least as close to `g_0` as to `g_1`.
///
/// The boundary is independent of `θ` below `π/2` (it is the sign of
/// `sin(φ + 2mπ/M)`), so templates at `θ = 0` decide it. Near-ties are resolved to 0.
fn estimate_class<T: Real>(m: usize, count: usize, phase: T) -> Result<usize> {
    let (g0, g1) = template_pair_v(T::zero())?;
    let f = equatorial_state(m, count, phase)?;
    let diff = overlap_sq(&g0, &f)? - overlap_sq(&g1, &f)?;
    Ok(if diff >= -lit::<T>(1e-12) { 0 } else { 1 })
}

/// The `M`-outcome square-root measurement for covariant state estimation, in the
/// v-basis. Outcome `m` is labelled with the template class of its estimate.
pub fn srm_estimation_measurement<T: Real>(n: usize, count: usize, phase: T) -> Result<Pom<T>> {
    check_estimation_args(n, count)?;
    let states = (0..count)
        .map(|m| n_copy_bosonic(&equatorial_state(m, count, phase)?, n))
        .collect::<Result<Vec<_>>>()?;
    let vectors = square_root_measurement(&states)?;
    let elements = vectors
        .iter()
        .map(|v| Matrix::projector(v))
        .collect::<Result<Vec<_>>>()?;
    let labels = (0..count)
        .map(|m| estimate_class(m, count, phase))
        .collect::<Result<Vec<_>>>()?;
    Pom::with_labels(elements, labels, BasisTag::VBasis)
}

/// Two-outcome POM obtained by grouping the estimation outcomes by template class.
pub fn srm_estimation_pom<T: Real>(n: usize, count: usize, phase: T) -> Result<Pom<T>> {
    let fine = srm_estimation_measurement(n, count, phase)?;
    let mut pi = [Matrix::zeros(n + 1)?, Matrix::zeros(n + 1)?];
    for (e, &class) in fine.elements().iter().zip(fine.labels()) {
        pi[class] = &pi[class] + e;
    }
    let [pi0, pi1] = pi;
    Pom::new(vec![pi0, pi1], BasisTag::VBasis)
}

/// Closed-form score of the estimation strategy,
/// `1/2 + cos θ K / (2^{N+1} M) Σ_m |sin(φ + 2mπ/M)|` with
/// `K = Σ_{k<N} C(N,k) sqrt((N-k)/(k+1))`.
///
/// For even `M` and `φ ∈ [0, 2π/M]` the sum over `m` is `2 cos(φ - π/M)/sin(π/M)`.
pub fn estimation_matching_score<T: Real>(
    n: usize,
    count: usize,
    phase: T,
    theta: T,
) -> Result<StrategyScore<T>> {
    check_estimation_args(n, count)?;
    check_theta(theta)?;
    let k_sum: f64 = (0..n)
        .map(|k| binomial(n as u64, k as u64) as f64 * (((n - k) as f64) / ((k + 1) as f64)).sqrt())
        .sum();
    let mm = from_usize::<T>(count);
    let sines = (0..count).fold(T::zero(), |s, m| {
        s + (phase + lit::<T>(2.0) * T::PI() * from_usize(m) / mm).sin().abs()
    });
    let pre = lit::<T>(k_sum / 2f64.powi(n as i32 + 1)) / mm;
    let score = lit::<T>(0.5) + theta.cos() * pre * sines;
    let mut out = StrategyScore::new(Strategy::Estimation, n, theta, score);
    out.estimates = Some(count);
    out.phase = Some(phase);
    Ok(out)
}

/// Estimation configuration used for the strategy comparison: `M = N + 1`, `φ = π/(N+1)`.
pub fn default_estimation_config<T: Real>(n: usize) -> (usize, T) {
    (n + 1, T::PI() / from_usize(n + 1))
}

/// Amplitudes `e^{-i(N-2k)(φ/2 + mπ/M)}/√M` of the square-root measurement vectors.
pub fn srm_estimation_vector<T: Real>(n: usize, count: usize, phase: T, m: usize) -> Vec<Complex<T>> {
    let mm = from_usize::<T>(count);
    let angle = phase / lit(2.0) + T::PI() * from_usize(m) / mm;
    let norm = T::one() / mm.sqrt();
    (0..=n)
        .map(|k| {
            let w = from_usize::<T>(n) - lit::<T>(2.0) * from_usize(k);
            Complex::from_polar(norm, -w * angle)
        })
        .collect()
}
