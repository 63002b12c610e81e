//! Measurements (POMs), the average score they achieve, and the optimality certificate.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, is_psd, Matrix};
use crate::qstates::{same_basis, BasisTag};
use crate::scalar::{lit, to_f64, Real};
use crate::scoreops::ScoreOperator;

/// Tolerance used when validating POM elements and completeness.
pub const POM_TOL: f64 = 1e-10;

/// Residual bound on `Γ - Γ^H` accepted as optimal by the acceptance checks.
pub const OPTIMALITY_RESIDUAL_TOL: f64 = 1e-10;

/// Lower bound on `min eig(Γ - W_j)` accepted as optimal by the acceptance checks.
pub const OPTIMALITY_GAP_TOL: f64 = 1e-9;

/// A probability operator measure: PSD elements summing to the identity.
#[derive(Clone, Debug)]
pub struct Pom<T> {
    elements: Vec<Matrix<T>>,
    labels: Vec<usize>,
    basis: BasisTag,
}

impl<T: Real> Pom<T> {
    /// Builds a POM whose outcome `j` selects template `j`.
    pub fn new(elements: Vec<Matrix<T>>, basis: BasisTag) -> Result<Self> {
        let labels = (0..elements.len()).collect();
        Self::with_labels(elements, labels, basis)
    }

    pub fn with_labels(elements: Vec<Matrix<T>>, labels: Vec<usize>, basis: BasisTag) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidPom("no elements".into()));
        }
        if labels.len() != elements.len() {
            return Err(Error::DimensionMismatch {
                expected: elements.len(),
                found: labels.len(),
            });
        }
        let dim = elements[0].dim();
        if let Some(bad) = elements.iter().find(|e| e.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        let tol = lit::<T>(POM_TOL);
        for (j, e) in elements.iter().enumerate() {
            let (ok, min) = is_psd(e, tol).map_err(|err| Error::InvalidPom(format!("element {j}: {err}")))?;
            if !ok {
                return Err(Error::InvalidPom(format!(
                    "element {j} has eigenvalue {:e}",
                    to_f64(min)
                )));
            }
        }
        let pom = Self {
            elements,
            labels,
            basis,
        };
        let residual = pom.completeness_residual();
        if residual > tol {
            return Err(Error::InvalidPom(format!(
                "elements sum to identity only within {:e}",
                to_f64(residual)
            )));
        }
        Ok(pom)
    }

    pub fn elements(&self) -> &[Matrix<T>] {
        &self.elements
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    /// `max |Σ_j Π_j - I|`
    pub fn completeness_residual(&self) -> T {
        let total = self.sum();
        total.max_abs_diff(&Matrix::identity(self.dim()).expect("valid dimension"))
    }

    fn sum(&self) -> Matrix<T> {
        let mut it = self.elements.iter();
        let first = it.next().expect("non-empty").clone();
        it.fold(first, |acc, e| &acc + e)
    }
}

/// `Tr(AB)` without forming the product.
pub(crate) fn trace_product<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Complex<T> {
    let n = a.dim();
    let mut acc = Complex::zero();
    for k in 0..n {
        for l in 0..n {
            acc = acc + a[(k, l)] * b[(l, k)];
        }
    }
    acc
}

fn check_pairing<T: Real>(pom: &Pom<T>, scores: &[ScoreOperator<T>]) -> Result<()> {
    if pom.len() != scores.len() {
        return Err(Error::DimensionMismatch {
            expected: pom.len(),
            found: scores.len(),
        });
    }
    for w in scores {
        if w.dim() != pom.dim() {
            return Err(Error::DimensionMismatch {
                expected: pom.dim(),
                found: w.dim(),
            });
        }
        same_basis(pom.basis(), w.basis())?;
    }
    Ok(())
}

/// `S = Σ_j Tr(W_j Π_j)`, with outcome `j` paired to `scores[j]`.
pub fn average_score<T: Real>(pom: &Pom<T>, scores: &[ScoreOperator<T>]) -> Result<T> {
    check_pairing(pom, scores)?;
    Ok(pom
        .elements()
        .iter()
        .zip(scores)
        .fold(T::zero(), |s, (p, w)| s + trace_product(w.matrix(), p).re))
}

/// Outcome of checking the Holevo–Yuen optimality conditions.
#[derive(Clone, Debug)]
pub struct OptimalityReport<T> {
    /// `Γ = Σ_j W_j Π_j`
    pub gamma: Matrix<T>,
    /// `max |Γ - Γ^H|`
    pub hermiticity_residual: T,
    /// `min eig(Γ - W_j)` for each `j`, computed on the Hermitian part of `Γ`.
    pub min_eig_gaps: Vec<T>,
    /// Average score, `Tr Γ`.
    pub score: T,
    pub tol: T,
}

impl<T: Real> OptimalityReport<T> {
    pub(crate) fn from_gamma(gamma: Matrix<T>, scores: &[&Matrix<T>], score: T, tol: T) -> Result<Self> {
        let hermiticity_residual = gamma.hermiticity_residual();
        let sym = gamma.hermitian_part();
        let herm_tol = lit::<T>(1e-8).max(tol);
        let min_eig_gaps = scores
            .iter()
            .map(|w| {
                let diff = (&sym - w).hermitian_part();
                eig_hermitian(&diff, herm_tol).map(|e| e.min_eigenvalue())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            gamma,
            hermiticity_residual,
            min_eig_gaps,
            score,
            tol,
        })
    }

    /// Both conditions hold within the given bounds.
    pub fn passes(&self, residual_tol: T, gap_tol: T) -> bool {
        self.hermiticity_residual <= residual_tol && self.min_eig_gaps.iter().all(|&g| g >= -gap_tol)
    }

    /// Both conditions hold within the report's own `tol`.
    pub fn is_optimal(&self) -> bool {
        self.passes(self.tol, self.tol)
    }

    pub fn min_gap(&self) -> T {
        self.min_eig_gaps.iter().fold(T::infinity(), |m, &g| m.min(g))
    }
}

/// Evaluates the optimality conditions for a POM. Failed conditions are reported,
/// not raised.
pub fn verify_optimality<T: Real>(
    pom: &Pom<T>,
    scores: &[ScoreOperator<T>],
    tol: T,
) -> Result<OptimalityReport<T>> {
    check_pairing(pom, scores)?;
    let mut gamma = Matrix::zeros(pom.dim())?;
    for (p, w) in pom.elements().iter().zip(scores) {
        gamma = &gamma + &(w.matrix() * p);
    }
    let score = gamma.trace().re;
    let mats: Vec<&Matrix<T>> = scores.iter().map(|w| w.matrix()).collect();
    OptimalityReport::from_gamma(gamma, &mats, score, tol)
}

/// Square-root measurement vectors `|μ_m> = G^{-1/2}|ψ_m>` with `G = Σ_m |ψ_m><ψ_m|`.
///
/// The projectors `|μ_m><μ_m|` resolve the projector onto the span of the inputs,
/// which is the identity whenever the states span the space.
pub fn square_root_measurement<T: Real>(
    states: &[crate::qstates::BosonicState<T>],
) -> Result<Vec<Vec<Complex<T>>>> {
    let first = states.first().ok_or_else(|| Error::InvalidPom("no states".into()))?;
    let mut gram = Matrix::zeros(first.dim())?;
    for s in states {
        same_basis(first.basis(), s.basis())?;
        if s.dim() != first.dim() {
            return Err(Error::DimensionMismatch {
                expected: first.dim(),
                found: s.dim(),
            });
        }
        gram = &gram + &s.projector();
    }
    let root = crate::linalg::inv_sqrt_psd(&gram, lit(crate::linalg::DEFAULT_RANK_TOL))?;
    Ok(states.iter().map(|s| root.apply(s.amps())).collect())
}
