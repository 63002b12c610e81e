use num_complex::Complex;

use crate::error::Result;
use crate::linalg::{inv_sqrt_psd, Matrix, DEFAULT_RANK_TOL};
use crate::pom::trace_product;
use crate::qstates::check_copies;
use crate::scalar::{from_usize, lit, Real};

use super::{check_count, multi_score_operators, orbit_sum, CovariantPom, ShiftOperator};

pub const DEFAULT_MAX_ITERS: usize = 10_000;
pub const DEFAULT_CONV_TOL: f64 = 1e-12;

/// Outcome of [`covariant_pom_optimizer`].
#[derive(Clone, Debug)]
pub struct OptimizerRun<T> {
    /// Best POM found, averaged over the shift orbit.
    pub pom: CovariantPom<T>,
    pub score: T,
    pub iterations: usize,
    /// False when `max_iters` ran out before the improvement fell below `conv_tol`.
    pub converged: bool,
    /// Score after initialization and after every iteration.
    pub trace: Vec<T>,
}

fn total_score<T: Real>(elements: &[Matrix<T>], ops: &[Matrix<T>]) -> T {
    elements
        .iter()
        .zip(ops)
        .fold(T::zero(), |s, (p, w)| s + trace_product(w, p).re)
}

fn sandwich<T: Real>(b: &Matrix<T>, a: &Matrix<T>) -> Matrix<T> {
    (&(b * a) * b).hermitian_part()
}

fn initial_elements<T: Real>(shift: &ShiftOperator<T>) -> Result<Vec<Matrix<T>>> {
    let n = shift.n_copies();
    let count = shift.count();
    let dim = n + 1;
    let mm = from_usize::<T>(count);
    let u = vec![Complex::new(T::one() / from_usize::<T>(dim).sqrt(), T::zero()); dim];
    let rank_one = Matrix::projector(&u)?.scale(from_usize::<T>(dim) / mm);
    let flat = Matrix::identity(dim)?.scale(T::one() / mm);
    let half = lit::<T>(0.5);
    let seed = (&flat + &rank_one).scale(half);
    let total = orbit_sum(&seed, count);
    let root = inv_sqrt_psd(&total, lit(DEFAULT_RANK_TOL))?;
    Ok((0..count)
        .map(|m| sandwich(&root, &shift.shift(&seed, m)))
        .collect())
}

/// Numerical search for an optimal covariant POM by the fixed-point iteration
/// `Π_m ← R^{-1/2} W_m Π_m W_m R^{-1/2}` with `R = Σ_m W_m Π_m W_m`.
///
/// The iteration starts from an even mix of `I/M` and the orbit of `(N+1)/M |u><u|`
/// (`u` uniform), renormalised to resolve the identity. Full rank is needed because
/// the update never raises the rank of an element. It stops once the score improves by
/// less than `conv_tol`. The best iterate is averaged over the shift orbit before being
/// returned.
pub fn covariant_pom_optimizer<T: Real>(
    n: usize,
    count: usize,
    max_iters: usize,
    conv_tol: T,
) -> Result<OptimizerRun<T>> {
    check_copies(n)?;
    check_count(count)?;
    let shift = ShiftOperator::<T>::new(n, count)?;
    let ops: Vec<Matrix<T>> = multi_score_operators::<T>(n, count)?
        .into_iter()
        .map(|w| w.into_matrix())
        .collect();

    let mut elements = initial_elements(&shift)?;
    let mut score = total_score(&elements, &ops);
    let mut trace = vec![score];
    let mut best = (score, elements.clone());
    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_iters {
        iterations += 1;
        let updated: Vec<Matrix<T>> = elements
            .iter()
            .zip(&ops)
            .map(|(p, w)| &(w * p) * w)
            .collect();
        let mut r = Matrix::zeros(n + 1)?;
        for u in &updated {
            r = &r + u;
        }
        let root = inv_sqrt_psd(&r.hermitian_part(), lit(DEFAULT_RANK_TOL))?;
        elements = updated.iter().map(|u| sandwich(&root, u)).collect();
        let next = total_score(&elements, &ops);
        trace.push(next);
        let improvement = next - score;
        score = next;
        if score > best.0 {
            best = (score, elements.clone());
        }
        if improvement < conv_tol {
            converged = true;
            break;
        }
    }

    let mm = from_usize::<T>(count);
    let mut seed = Matrix::zeros(n + 1)?;
    for (m, p) in best.1.iter().enumerate() {
        let back = shift.power(m).adjoint();
        seed = &seed + &p.conjugate_by(&back);
    }
    let seed = seed.scale(T::one() / mm).hermitian_part();
    let pom = CovariantPom::new(seed, n, count)?;
    let score = pom.score()?;
    Ok(OptimizerRun {
        pom,
        score,
        iterations,
        converged,
        trace,
    })
}
