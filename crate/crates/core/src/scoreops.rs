//! Bayes score operators `W_j = ∫ df P(f) |<f|g_j>|^2 |F><F|`.
//!
//! Two independent routes are provided: the closed forms (double-factorial entries for
//! the binary circle prior, tridiagonal form for the full-sphere prior), and
//! [`score_operator_quadrature`], which integrates the defining expression on a rule
//! that is exact for the trigonometric/polynomial integrands involved.

use num_complex::Complex;

use crate::combinatorics::{binomial, double_factorial_ratio};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::qstates::{
    bloch_state, check_copies, feature_state, feature_state_v, n_copy_bosonic, overlap_sq,
    BasisTag, QubitState,
};
use crate::scalar::{from_usize, lit, Real};

/// Prior over input states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Setting {
    /// Uniform on the great circle through the two binary templates.
    BinaryCircle,
    /// Uniform on the whole Bloch sphere.
    FullSphere,
}

/// A score operator on the (N+1)-dimensional symmetric subspace.
#[derive(Clone, Debug)]
pub struct ScoreOperator<T> {
    matrix: Matrix<T>,
    template_index: usize,
    basis: BasisTag,
    n_copies: usize,
    setting: Setting,
}

impl<T: Real> ScoreOperator<T> {
    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.matrix
    }

    pub fn template_index(&self) -> usize {
        self.template_index
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    pub fn n_copies(&self) -> usize {
        self.n_copies
    }

    pub fn setting(&self) -> Setting {
        self.setting
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

fn check_binary_args<T: Real>(n: usize, theta: T) -> Result<()> {
    check_copies(n)?;
    if !(theta >= T::zero() && theta <= T::FRAC_PI_2()) {
        return Err(Error::Domain(format!("template angle {theta} outside [0, pi/2]")));
    }
    Ok(())
}

fn sqrt_binomial_product(n: usize, k: usize, l: usize) -> f64 {
    let ck = binomial(n as u64, k as u64) as f64;
    let cl = binomial(n as u64, l as u64) as f64;
    (ck * cl).sqrt()
}

fn real<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// Binary score operator `W_j` for the circle prior, in the up/down occupation basis.
///
/// `j = 0` uses `θ_0 = θ`, `j = 1` uses `θ_1 = π - θ`.
pub fn binary_score_operator<T: Real>(n: usize, theta: T, j: usize) -> Result<ScoreOperator<T>> {
    check_binary_args(n, theta)?;
    let cos_j = match j {
        0 => theta.cos(),
        1 => -theta.cos(),
        _ => return Err(Error::Index { index: j, len: 2 }),
    };
    let sin_j = theta.sin();
    let (ni, nn) = (n as i64, from_usize::<T>(n));
    let matrix = Matrix::from_fn(n + 1, |k, l| {
        let s = (k + l) as i64;
        let root = sqrt_binomial_product(n, k, l);
        if s % 2 == 0 {
            let coef: T = lit(root * double_factorial_ratio(s - 1, 2 * ni - s - 1, 2 * ni + 2));
            real(coef * ((nn - from_usize(k + l)) * cos_j + nn + T::one()))
        } else {
            let coef: T = lit(root * double_factorial_ratio(s, 2 * ni - s, 2 * ni + 2));
            real(coef * sin_j)
        }
    })?;
    Ok(ScoreOperator {
        matrix,
        template_index: j,
        basis: BasisTag::UpDown,
        n_copies: n,
        setting: Setting::BinaryCircle,
    })
}

/// `W_0 - W_1` for the circle prior. Real symmetric, zero wherever `k + l` is odd.
pub fn binary_diff_operator<T: Real>(n: usize, theta: T) -> Result<Matrix<T>> {
    check_binary_args(n, theta)?;
    let ni = n as i64;
    let cos = theta.cos();
    let (nn, n1) = (n as f64, (n + 1) as f64);
    Matrix::from_fn(n + 1, |k, l| {
        let s = (k + l) as i64;
        if s % 2 != 0 {
            return real(T::zero());
        }
        let coef = sqrt_binomial_product(n, k, l)
            * double_factorial_ratio(s - 1, 2 * ni - s - 1, 2 * ni)
            * (nn - (k + l) as f64)
            / n1;
        real(lit::<T>(coef) * cos)
    })
}

/// Binary score operator `W_j` for the circle prior, written in the v-basis.
///
/// `W_0` is tridiagonal with diagonal `C(N,k)/2^{N+1}` and sub-diagonal
/// `C(N,k) sqrt((N-k)/(k+1)) e^{i(π/2-θ)} / 2^{N+2}`; `W_1` is its complex conjugate.
pub fn binary_score_operator_v<T: Real>(n: usize, theta: T, j: usize) -> Result<ScoreOperator<T>> {
    check_binary_args(n, theta)?;
    if j > 1 {
        return Err(Error::Index { index: j, len: 2 });
    }
    let scale = lit::<T>(2f64.powi(-(n as i32) - 2));
    let angle = T::FRAC_PI_2() - theta;
    let phase = Complex::from_polar(T::one(), if j == 0 { angle } else { -angle });
    let mut matrix = Matrix::zeros(n + 1)?;
    for k in 0..=n {
        let c = binomial(n as u64, k as u64) as f64;
        matrix[(k, k)] = real(lit::<T>(2.0 * c) * scale);
        if k < n {
            let off = lit::<T>(c * (((n - k) as f64) / ((k + 1) as f64)).sqrt()) * scale;
            matrix[(k + 1, k)] = phase * off;
            matrix[(k, k + 1)] = phase.conj() * off;
        }
    }
    Ok(ScoreOperator {
        matrix,
        template_index: j,
        basis: BasisTag::VBasis,
        n_copies: n,
        setting: Setting::BinaryCircle,
    })
}

/// Score operator `W_m` for the full-sphere prior with `M` templates on the x-y circle.
///
/// `W_m = (1/(2(N+1))) [I + Σ_k sqrt((N-k)(k+1))/(N+2) (e^{2imπ/M}|k+1><k| + h.c.)]`,
/// which equals `V^m W_0 V^{†m}` for the shift operator `V`.
pub fn multi_score_operator<T: Real>(n: usize, count: usize, m: usize) -> Result<ScoreOperator<T>> {
    check_copies(n)?;
    if count < 2 {
        return Err(Error::Domain(format!("need at least two templates, got {count}")));
    }
    if m >= count {
        return Err(Error::Index { index: m, len: count });
    }
    let pre = T::one() / from_usize::<T>(2 * (n + 1));
    let phase = Complex::from_polar(
        T::one(),
        lit::<T>(2.0) * T::PI() * from_usize(m) / from_usize(count),
    );
    let mut matrix = Matrix::identity(n + 1)?.scale(pre);
    for k in 0..n {
        let w = pre * from_usize::<T>((n - k) * (k + 1)).sqrt() / from_usize(n + 2);
        matrix[(k + 1, k)] = phase * w;
        matrix[(k, k + 1)] = phase.conj() * w;
    }
    Ok(ScoreOperator {
        matrix,
        template_index: m,
        basis: BasisTag::UpDown,
        n_copies: n,
        setting: Setting::FullSphere,
    })
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1);
    let nn = from_usize::<T>(n);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (T::PI() * (from_usize::<T>(i) + lit(0.75)) / (nn + lit(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (mut p0, mut p1) = (T::one(), x);
            for k in 2..=n {
                let kk = from_usize::<T>(k);
                let p2 = ((lit::<T>(2.0) * kk - T::one()) * x * p1 - (kk - T::one()) * p0) / kk;
                p0 = p1;
                p1 = p2;
            }
            let (p, pm1) = if n == 1 { (x, T::one()) } else { (p1, p0) };
            dp = nn * (x * p - pm1) / (x * x - T::one());
            let dx = p / dp;
            x = x - dx;
            if dx.abs() <= T::epsilon() * lit(4.0) {
                break;
            }
        }
        // Refresh the derivative at the converged node.
        let (mut p0, mut p1) = (T::one(), x);
        for k in 2..=n {
            let kk = from_usize::<T>(k);
            let p2 = ((lit::<T>(2.0) * kk - T::one()) * x * p1 - (kk - T::one()) * p0) / kk;
            p0 = p1;
            p1 = p2;
        }
        let (p, pm1) = if n == 1 { (x, T::one()) } else { (p1, p0) };
        if x * x != T::one() {
            dp = nn * (x * p - pm1) / (x * x - T::one());
        }
        nodes.push(x);
        weights.push(lit::<T>(2.0) / ((T::one() - x * x) * dp * dp));
    }
    (nodes, weights)
}

/// Score operator by direct integration over the prior.
///
/// `BinaryCircle` averages over `L = 4(N+2)` equally spaced φ nodes, using
/// [`feature_state`] or [`feature_state_v`] according to the template basis.
/// `FullSphere` combines the same φ rule with `N+4` Gauss-Legendre nodes in `cos θ`.
/// Both rules are exact for these integrands, so the result differs from the
/// closed form only by rounding.
pub fn score_operator_quadrature<T: Real>(
    n: usize,
    templates: &[QubitState<T>],
    setting: Setting,
    j: usize,
) -> Result<ScoreOperator<T>> {
    check_copies(n)?;
    let template = templates.get(j).ok_or(Error::Index {
        index: j,
        len: templates.len(),
    })?;
    let basis = template.basis();
    let l_nodes = 4 * (n + 2);
    let step = T::TAU() / from_usize(l_nodes);
    let mut acc = Matrix::zeros(n + 1)?;

    let mut add = |f: &QubitState<T>, weight: T| -> Result<()> {
        let score = overlap_sq(f, template)?;
        let big = n_copy_bosonic(f, n)?;
        let amps = big.amps();
        let w = weight * score;
        for k in 0..=n {
            let ak = amps[k] * w;
            for l in 0..=n {
                acc[(k, l)] = acc[(k, l)] + ak * amps[l].conj();
            }
        }
        Ok(())
    };

    match setting {
        Setting::BinaryCircle => {
            let weight = T::one() / from_usize(l_nodes);
            for i in 0..l_nodes {
                let phi = step * from_usize(i);
                let f = match basis {
                    BasisTag::UpDown => feature_state(phi),
                    BasisTag::VBasis => feature_state_v(phi),
                };
                add(&f, weight)?;
            }
        }
        Setting::FullSphere => {
            if basis != BasisTag::UpDown {
                return Err(Error::BasisMismatch {
                    left: BasisTag::UpDown,
                    right: basis,
                });
            }
            let (xs, ws) = gauss_legendre::<T>(n + 4);
            let denom = lit::<T>(2.0) * from_usize(l_nodes);
            for (&x, &wx) in xs.iter().zip(&ws) {
                let theta = x.acos();
                for i in 0..l_nodes {
                    let phi = step * from_usize(i);
                    add(&bloch_state(theta, phi), wx / denom)?;
                }
            }
        }
    }

    Ok(ScoreOperator {
        matrix: acc,
        template_index: j,
        basis,
        n_copies: n,
        setting,
    })
}
