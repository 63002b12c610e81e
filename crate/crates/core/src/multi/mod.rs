//! Matching against `M` templates spread uniformly around a great circle, with inputs
//! drawn uniformly from the whole Bloch sphere.
//!
//! The score operators form a single orbit `W_m = V^m W_0 V^{†m}` of the cyclic shift
//! `V`, so an optimal measurement can be sought among covariant POMs
//! `Π_m = V^m Π_0 V^{†m}`.

mod fixed_point;
mod known;

pub use fixed_point::{covariant_pom_optimizer, OptimizerRun, DEFAULT_CONV_TOL, DEFAULT_MAX_ITERS};
pub use known::{known_pom, KnownCase, KnownPom};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, is_psd, EigenDecomposition, Matrix, DEFAULT_HERMITIAN_TOL};
use crate::pom::{average_score, verify_optimality, OptimalityReport, Pom, POM_TOL};
use crate::qstates::{check_copies, BasisTag};
use crate::scalar::{from_usize, lit, to_f64, Real};
use crate::scoreops::{multi_score_operator, ScoreOperator};

fn check_count(count: usize) -> Result<()> {
    if count < 2 {
        return Err(Error::Domain(format!("need at least two templates, got {count}")));
    }
    Ok(())
}

/// The cyclic shift `V = diag(e^{-i(N-2k)π/M})` on the symmetric subspace.
#[derive(Clone, Debug)]
pub struct ShiftOperator<T> {
    matrix: Matrix<T>,
    n_copies: usize,
    count: usize,
}

impl<T: Real> ShiftOperator<T> {
    pub fn new(n: usize, count: usize) -> Result<Self> {
        check_copies(n)?;
        check_count(count)?;
        let matrix = shift_power(n, count, 1);
        Ok(Self {
            matrix,
            n_copies: n,
            count,
        })
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn n_copies(&self) -> usize {
        self.n_copies
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// `V^p`, computed from the phases directly.
    pub fn power(&self, p: usize) -> Matrix<T> {
        shift_power(self.n_copies, self.count, p)
    }

    /// `V^p A V^{†p}`
    pub fn shift(&self, a: &Matrix<T>, p: usize) -> Matrix<T> {
        a.conjugate_by(&self.power(p))
    }
}

/// `e^{iπ num/den}`, exact at multiples of `π/2`.
fn cis_pi<T: Real>(num: i64, den: i64) -> Complex<T> {
    let r = num.rem_euclid(2 * den);
    if (2 * r) % den == 0 {
        let (re, im) = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)][(2 * r / den) as usize];
        return Complex::new(lit(re), lit(im));
    }
    Complex::from_polar(T::one(), T::PI() * from_usize::<T>(r as usize) / from_usize(den as usize))
}

/// `V^p = diag(e^{-i p (N-2k) π/M})`
fn shift_power<T: Real>(n: usize, count: usize, p: usize) -> Matrix<T> {
    let diag: Vec<Complex<T>> = (0..=n)
        .map(|k| {
            let w = n as i64 - 2 * k as i64;
            cis_pi(-w * (p % (2 * count)) as i64, count as i64)
        })
        .collect();
    Matrix::from_fn(n + 1, |k, l| if k == l { diag[k] } else { Complex::new(T::zero(), T::zero()) })
        .expect("valid dimension")
}

/// Convenience constructor for [`ShiftOperator::new`].
pub fn shift_operator<T: Real>(n: usize, count: usize) -> Result<ShiftOperator<T>> {
    ShiftOperator::new(n, count)
}

/// `W_0, ..., W_{M-1}` for `N` copies.
pub fn multi_score_operators<T: Real>(n: usize, count: usize) -> Result<Vec<ScoreOperator<T>>> {
    (0..count).map(|m| multi_score_operator(n, count, m)).collect()
}

/// `Σ_m V^m A V^{†m}`. Only entries with `k - l ≡ 0 (mod M)` survive, scaled by `M`.
fn orbit_sum<T: Real>(a: &Matrix<T>, count: usize) -> Matrix<T> {
    let dim = a.dim();
    let mm = from_usize::<T>(count);
    Matrix::from_fn(dim, |k, l| {
        if k.abs_diff(l) % count == 0 {
            a[(k, l)] * mm
        } else {
            Complex::new(T::zero(), T::zero())
        }
    })
    .expect("valid dimension")
}

/// A POM generated from one seed by the shift operator.
#[derive(Clone, Debug)]
pub struct CovariantPom<T> {
    seed: Matrix<T>,
    shift: ShiftOperator<T>,
}

impl<T: Real> CovariantPom<T> {
    /// Checks that the seed is PSD with trace `(N+1)/M` and that its orbit sums to `I`.
    pub fn new(seed: Matrix<T>, n: usize, count: usize) -> Result<Self> {
        let shift = ShiftOperator::new(n, count)?;
        if seed.dim() != n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                found: seed.dim(),
            });
        }
        let tol = lit::<T>(POM_TOL);
        let (psd, min) = is_psd(&seed, tol)?;
        if !psd {
            return Err(Error::InvalidPom(format!("seed has eigenvalue {:e}", to_f64(min))));
        }
        let trace = seed.trace().re;
        let want = from_usize::<T>(n + 1) / from_usize(count);
        if (trace - want).abs() > tol {
            return Err(Error::InvalidPom(format!(
                "seed trace {} differs from (N+1)/M = {}",
                to_f64(trace),
                to_f64(want)
            )));
        }
        let residual = orbit_sum(&seed, count).max_abs_diff(&Matrix::identity(n + 1)?);
        if residual > tol {
            return Err(Error::InvalidPom(format!(
                "orbit of the seed resolves the identity only within {:e}",
                to_f64(residual)
            )));
        }
        Ok(Self { seed, shift })
    }

    pub fn seed(&self) -> &Matrix<T> {
        &self.seed
    }

    pub fn n_copies(&self) -> usize {
        self.shift.n_copies()
    }

    pub fn count(&self) -> usize {
        self.shift.count()
    }

    pub fn shift_operator(&self) -> &ShiftOperator<T> {
        &self.shift
    }

    /// `Π_m = V^m Π_0 V^{†m}` for `m = 0..M`.
    pub fn elements(&self) -> Vec<Matrix<T>> {
        (0..self.count()).map(|m| self.shift.shift(&self.seed, m)).collect()
    }

    pub fn to_pom(&self) -> Result<Pom<T>> {
        Pom::new(self.elements(), BasisTag::UpDown)
    }

    /// Average score against the full-sphere score operators.
    pub fn score(&self) -> Result<T> {
        average_score(&self.to_pom()?, &multi_score_operators(self.n_copies(), self.count())?)
    }
}

/// Square-root measurement built from the templates, valid for `M > N`:
/// `Π_0 = |μ_0><μ_0|` with `|μ_0> = M^{-1/2} Σ_k |k>`.
pub fn srm_template_pom<T: Real>(n: usize, count: usize) -> Result<CovariantPom<T>> {
    check_copies(n)?;
    if count <= n {
        return Err(Error::Domain(format!(
            "a rank-one covariant orbit cannot resolve the identity for M = {count} <= N = {n}"
        )));
    }
    let amp = Complex::new(T::one() / from_usize::<T>(count).sqrt(), T::zero());
    let mu = vec![amp; n + 1];
    CovariantPom::new(Matrix::projector(&mu)?, n, count)
}

/// `1/2 + Σ_{k<N} sqrt((N-k)(k+1)) / ((N+1)(N+2))`
pub fn max_score_srm<T: Real>(n: usize) -> Result<T> {
    check_copies(n)?;
    let denom = from_usize::<T>((n + 1) * (n + 2));
    Ok((0..n).fold(lit::<T>(0.5), |s, k| {
        s + from_usize::<T>((n - k) * (k + 1)).sqrt() / denom
    }))
}

/// Optimality conditions for a covariant POM: `Γ = Σ_m V^m W_0 Π_0 V^{†m}` must be
/// Hermitian and `Γ - W_0` PSD (covariance makes the other `Γ - W_m` unitarily
/// equivalent; all `M` gaps are reported anyway).
pub fn covariant_optimality_check<T: Real>(
    seed: &Matrix<T>,
    n: usize,
    count: usize,
    tol: T,
) -> Result<OptimalityReport<T>> {
    check_copies(n)?;
    check_count(count)?;
    if seed.dim() != n + 1 {
        return Err(Error::DimensionMismatch {
            expected: n + 1,
            found: seed.dim(),
        });
    }
    let ops = multi_score_operators::<T>(n, count)?;
    let gamma = orbit_sum(&(ops[0].matrix() * seed), count);
    let score = gamma.trace().re;
    let mats: Vec<&Matrix<T>> = ops.iter().map(|w| w.matrix()).collect();
    OptimalityReport::from_gamma(gamma, &mats, score, tol)
}

/// Eigen-decomposition of `W_0` sorted by increasing eigenvalue, so column `k` is
/// `|ω_k>` with `ω_k = (k+1)/((N+1)(N+2))`.
pub fn w0_eigenbasis<T: Real>(n: usize, count: usize) -> Result<EigenDecomposition<T>> {
    let w0 = multi_score_operator::<T>(n, count, 0)?;
    let eig = eig_hermitian(w0.matrix(), lit(DEFAULT_HERMITIAN_TOL))?;
    let dim = n + 1;
    let vectors = Matrix::from_fn(dim, |k, j| eig.eigenvectors[(k, dim - 1 - j)])?;
    Ok(EigenDecomposition {
        eigenvalues: eig.eigenvalues.iter().rev().copied().collect(),
        eigenvectors: vectors,
        source_dim: dim,
    })
}

/// `|<ω_k|v>|` for every `k`.
pub fn overlaps_in_w0_basis<T: Real>(basis: &EigenDecomposition<T>, v: &[Complex<T>]) -> Vec<T> {
    (0..basis.source_dim)
        .map(|k| {
            basis
                .eigenvector(k)
                .iter()
                .zip(v)
                .fold(Complex::new(T::zero(), T::zero()), |acc, (w, x)| acc + w.conj() * x)
                .norm()
        })
        .collect()
}

/// Result of the two-template analysis, where `W_0` and `W_1` commute.
#[derive(Clone, Debug)]
pub struct CommutingCheck<T> {
    pub commutator_norm: T,
    pub pom: Pom<T>,
    pub score: T,
    pub report: OptimalityReport<T>,
}

impl<T: Real> CommutingCheck<T> {
    pub fn passes(&self, commutator_tol: T, residual_tol: T, gap_tol: T) -> bool {
        self.commutator_norm <= commutator_tol && self.report.passes(residual_tol, gap_tol)
    }
}

/// For `M = 2`, measures in the common eigenbasis of `W_0` and `W_1` and assigns every
/// eigenvector to whichever template scores higher on it (ties to template 0).
pub fn m2_commuting_check<T: Real>(n: usize) -> Result<CommutingCheck<T>> {
    let ops = multi_score_operators::<T>(n, 2)?;
    let (w0, w1) = (ops[0].matrix(), ops[1].matrix());
    let commutator_norm = w0.commutator(w1).max_abs();
    let eig = eig_hermitian(w0, lit(DEFAULT_HERMITIAN_TOL))?;
    let mut to0 = Vec::new();
    let mut to1 = Vec::new();
    for j in 0..=n {
        let v = eig.eigenvector(j);
        let e0 = expectation(w0, &v);
        let e1 = expectation(w1, &v);
        if e0 >= e1 {
            to0.push(j);
        } else {
            to1.push(j);
        }
    }
    let pom = Pom::new(
        vec![eig.projector_onto(to0), eig.projector_onto(to1)],
        BasisTag::UpDown,
    )?;
    let score = average_score(&pom, &ops)?;
    let report = verify_optimality(&pom, &ops, lit(DEFAULT_HERMITIAN_TOL))?;
    Ok(CommutingCheck {
        commutator_norm,
        pom,
        score,
        report,
    })
}

fn expectation<T: Real>(a: &Matrix<T>, v: &[Complex<T>]) -> T {
    a.apply(v)
        .iter()
        .zip(v)
        .fold(T::zero(), |s, (av, x)| s + (x.conj() * av).re)
}

/// `max |Σ_m Π_m - I|` for the orbit of `(N+1)/M |ω_N><ω_N|`, the covariant POM one
/// would build from the top eigenvector of `W_0` alone. Nonzero values mean that
/// orbit is not a measurement.
pub fn top_eigenvector_orbit_residual<T: Real>(n: usize, count: usize) -> Result<T> {
    check_count(count)?;
    let basis = w0_eigenbasis::<T>(n, count)?;
    let top = basis.eigenvector(n);
    let seed = Matrix::projector(&top)?.scale(from_usize::<T>(n + 1) / from_usize(count));
    Ok(orbit_sum(&seed, count).max_abs_diff(&Matrix::identity(n + 1)?))
}
