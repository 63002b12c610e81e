//! Qubit feature and template states and their images in the bosonic subspace.
//!
//! N copies of a qubit state live in the (N+1)-dimensional totally symmetric
//! subspace. Its occupation basis `|k>` counts the copies in the second basis state:
//! `|down>` in the up/down basis, `|v1>` in the v-basis. Every state carries a
//! [`BasisTag`], and mixing states from different bases is an error.

use std::fmt;

use num_complex::Complex;
use num_traits::Zero;

use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{from_usize, lit, to_f64, Real};

/// Largest supported number of copies.
pub const MAX_COPIES: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisTag {
    /// `{|up>, |down>}`
    UpDown,
    /// `{|v0>, |v1>}`, in which the binary input circle is the equator.
    VBasis,
}

impl BasisTag {
    pub fn name(self) -> &'static str {
        match self {
            BasisTag::UpDown => "up-down",
            BasisTag::VBasis => "v-basis",
        }
    }
}

impl fmt::Display for BasisTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub(crate) fn same_basis(left: BasisTag, right: BasisTag) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::BasisMismatch { left, right })
    }
}

fn norm_tol<T: Real>() -> T {
    lit::<T>(1e-12).max(T::epsilon() * lit(16.0))
}

fn cis<T: Real>(angle: T) -> Complex<T> {
    Complex::from_polar(T::one(), angle)
}

fn real<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// A normalized single-qubit pure state.
///
/// `amp_up` / `amp_down` are the amplitudes of the first and second basis vectors of
/// `basis`. In the v-basis they are the `|v0>` and `|v1>` amplitudes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitState<T> {
    amp_up: Complex<T>,
    amp_down: Complex<T>,
    basis: BasisTag,
}

impl<T: Real> QubitState<T> {
    pub fn new(amp_up: Complex<T>, amp_down: Complex<T>, basis: BasisTag) -> Result<Self> {
        let n2 = amp_up.norm_sqr() + amp_down.norm_sqr();
        if (n2 - T::one()).abs() > norm_tol() {
            return Err(Error::NotNormalized(to_f64(n2)));
        }
        Ok(Self {
            amp_up,
            amp_down,
            basis,
        })
    }

    pub fn amp_up(&self) -> Complex<T> {
        self.amp_up
    }

    pub fn amp_down(&self) -> Complex<T> {
        self.amp_down
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        same_basis(self.basis, other.basis)?;
        Ok(self.amp_up.conj() * other.amp_up + self.amp_down.conj() * other.amp_down)
    }
}

fn reduce_angle<T: Real>(phi: T) -> T {
    let period = T::TAU();
    phi - (phi / period).floor() * period
}

/// Input state on the binary great circle, `cos(phi/2)|up> + sin(phi/2)|down>`.
///
/// `phi` is reduced modulo 2π first.
pub fn feature_state<T: Real>(phi: T) -> QubitState<T> {
    let half = reduce_angle(phi) / lit(2.0);
    QubitState {
        amp_up: real(half.cos()),
        amp_down: real(half.sin()),
        basis: BasisTag::UpDown,
    }
}

fn check_template_angle<T: Real>(theta: T) -> Result<()> {
    if theta >= T::zero() && theta <= T::FRAC_PI_2() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "template angle {theta} outside [0, pi/2]"
        )))
    }
}

/// The binary templates `g0 = (cos θ/2, sin θ/2)` and `g1 = (sin θ/2, cos θ/2)`.
pub fn template_pair<T: Real>(theta: T) -> Result<(QubitState<T>, QubitState<T>)> {
    check_template_angle(theta)?;
    let (s, c) = (theta / lit(2.0)).sin_cos();
    let g0 = QubitState {
        amp_up: real(c),
        amp_down: real(s),
        basis: BasisTag::UpDown,
    };
    let g1 = QubitState {
        amp_up: real(s),
        amp_down: real(c),
        basis: BasisTag::UpDown,
    };
    Ok((g0, g1))
}

/// The binary templates written symmetrically in the v-basis,
/// `g0 = (e^{-i(π/4-θ/2)}, e^{i(π/4-θ/2)})/√2` and `g1` its complex conjugate.
pub fn template_pair_v<T: Real>(theta: T) -> Result<(QubitState<T>, QubitState<T>)> {
    check_template_angle(theta)?;
    let beta = T::FRAC_PI_4() - theta / lit(2.0);
    let r = T::FRAC_1_SQRT_2();
    let g0 = QubitState {
        amp_up: cis(-beta) * r,
        amp_down: cis(beta) * r,
        basis: BasisTag::VBasis,
    };
    let g1 = QubitState {
        amp_up: cis(beta) * r,
        amp_down: cis(-beta) * r,
        basis: BasisTag::VBasis,
    };
    Ok((g0, g1))
}

fn equator<T: Real>(angle: T, basis: BasisTag) -> QubitState<T> {
    let r = T::FRAC_1_SQRT_2();
    QubitState {
        amp_up: cis(-angle) * r,
        amp_down: cis(angle) * r,
        basis,
    }
}

/// Input state on the binary great circle expressed in the v-basis,
/// `(e^{-iφ/2}|v0> + e^{iφ/2}|v1>)/√2`.
pub fn feature_state_v<T: Real>(phi: T) -> QubitState<T> {
    equator(phi / lit(2.0), BasisTag::VBasis)
}

/// The `m`-th of `M` equally spaced equatorial states in the v-basis, rotated by `phase`.
pub fn equatorial_state<T: Real>(m: usize, count: usize, phase: T) -> Result<QubitState<T>> {
    if count < 2 {
        return Err(Error::Domain(format!("need at least two equatorial states, got {count}")));
    }
    if m >= count {
        return Err(Error::Index { index: m, len: count });
    }
    let angle = phase / lit(2.0) + T::PI() * from_usize(m) / from_usize(count);
    Ok(equator(angle, BasisTag::VBasis))
}

/// General qubit state `e^{-iφ/2} cos(θ/2)|up> + e^{iφ/2} sin(θ/2)|down>`.
pub fn bloch_state<T: Real>(theta: T, phi: T) -> QubitState<T> {
    let (s, c) = (theta / lit(2.0)).sin_cos();
    let half = phi / lit(2.0);
    QubitState {
        amp_up: cis(-half) * c,
        amp_down: cis(half) * s,
        basis: BasisTag::UpDown,
    }
}

/// The `m`-th of `M` templates spread uniformly around the x-y great circle,
/// `(e^{-imπ/M}|up> + e^{imπ/M}|down>)/√2`.
pub fn circle_template<T: Real>(m: usize, count: usize) -> Result<QubitState<T>> {
    if count < 2 {
        return Err(Error::Domain(format!("need at least two templates, got {count}")));
    }
    if m >= count {
        return Err(Error::Index { index: m, len: count });
    }
    let angle = T::PI() * from_usize(m) / from_usize(count);
    Ok(equator(angle, BasisTag::UpDown))
}

/// `|<a|b>|^2`
pub fn overlap_sq<T: Real>(a: &QubitState<T>, b: &QubitState<T>) -> Result<T> {
    Ok(a.inner(b)?.norm_sqr().min(T::one()))
}

/// `|f>^{⊗N}` restricted to the symmetric subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct BosonicState<T> {
    n_copies: usize,
    amps: Vec<Complex<T>>,
    basis: BasisTag,
}

pub(crate) fn check_copies(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("number of copies must be at least 1".into()));
    }
    if n > MAX_COPIES {
        return Err(Error::TooManyCopies(n));
    }
    Ok(())
}

impl<T: Real> BosonicState<T> {
    pub fn n_copies(&self) -> usize {
        self.n_copies
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    pub fn norm(&self) -> T {
        self.amps.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt()
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        same_basis(self.basis, other.basis)?;
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .fold(Complex::zero(), |acc, (a, b)| acc + a.conj() * b))
    }

    /// `|F><F|`
    pub fn projector(&self) -> Matrix<T> {
        Matrix::projector(&self.amps).expect("dimension bounded by MAX_COPIES + 1")
    }
}

/// `amps[k] = sqrt(C(N,k)) up^{N-k} down^k` for `k = 0..=N`.
pub fn n_copy_bosonic<T: Real>(q: &QubitState<T>, n: usize) -> Result<BosonicState<T>> {
    check_copies(n)?;
    let mut up_pow = vec![Complex::new(T::one(), T::zero()); n + 1];
    let mut down_pow = up_pow.clone();
    for k in 1..=n {
        up_pow[k] = up_pow[k - 1] * q.amp_up;
        down_pow[k] = down_pow[k - 1] * q.amp_down;
    }
    let amps = (0..=n)
        .map(|k| {
            let c = T::from_u64(binomial(n as u64, k as u64)).expect("binomial fits in scalar");
            up_pow[n - k] * down_pow[k] * c.sqrt()
        })
        .collect();
    Ok(BosonicState {
        n_copies: n,
        amps,
        basis: q.basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_3, PI};

    fn close(a: Complex<f64>, re: f64, im: f64) -> bool {
        (a - Complex::new(re, im)).norm() < 1e-15
    }

    #[test]
    fn feature_state_examples() {
        let f = feature_state(0.0);
        assert!(close(f.amp_up(), 1.0, 0.0) && close(f.amp_down(), 0.0, 0.0));
        let f = feature_state(PI);
        assert!(f.amp_up().norm() < 1e-15 && close(f.amp_down(), 1.0, 0.0));
        let f = feature_state(FRAC_PI_2);
        assert!(close(f.amp_up(), FRAC_1_SQRT_2, 0.0) && close(f.amp_down(), FRAC_1_SQRT_2, 0.0));
    }

    #[test]
    fn template_pair_examples() {
        let (g0, g1) = template_pair(0.0).unwrap();
        assert!(close(g0.amp_up(), 1.0, 0.0) && close(g1.amp_down(), 1.0, 0.0));
        assert_eq!(overlap_sq(&g0, &g1).unwrap(), 0.0);

        let (g0, g1) = template_pair(FRAC_PI_2).unwrap();
        assert!((g0.amp_up() - g1.amp_up()).norm() < 1e-15);
        assert!(close(g0.amp_down(), FRAC_1_SQRT_2, 0.0));

        let (g0, g1) = template_pair(FRAC_PI_3).unwrap();
        assert!((g0.inner(&g1).unwrap().re - FRAC_PI_3.sin()).abs() < 1e-15);
    }

    #[test]
    fn template_angle_domain() {
        assert!(matches!(template_pair(-0.1), Err(Error::Domain(_))));
        assert!(matches!(template_pair(2.0), Err(Error::Domain(_))));
        assert!(matches!(template_pair_v(2.0), Err(Error::Domain(_))));
    }

    #[test]
    fn v_basis_templates_share_overlap() {
        for theta in [0.0, 0.3, FRAC_PI_3, FRAC_PI_2] {
            let (g0, g1) = template_pair_v(theta).unwrap();
            assert!((g0.inner(&g1).unwrap().norm() - theta.sin()).abs() < 1e-15);
        }
    }

    #[test]
    fn equatorial_examples() {
        let s = equatorial_state(0, 4, 0.0).unwrap();
        assert!(close(s.amp_up(), FRAC_1_SQRT_2, 0.0) && close(s.amp_down(), FRAC_1_SQRT_2, 0.0));
        let s = equatorial_state(2, 4, 0.0).unwrap();
        assert!(close(s.amp_up(), 0.0, -FRAC_1_SQRT_2) && close(s.amp_down(), 0.0, FRAC_1_SQRT_2));
        for m in 0..7 {
            let s = equatorial_state(m, 7, 0.4f64).unwrap();
            assert!((s.amp_up().norm_sqr() + s.amp_down().norm_sqr() - 1.0).abs() < 1e-15);
        }
        assert_eq!(
            equatorial_state::<f64>(4, 4, 0.0).unwrap_err(),
            Error::Index { index: 4, len: 4 }
        );
    }

    #[test]
    fn n_copy_examples() {
        let up = QubitState::new(Complex::new(1.0, 0.0), Complex::zero(), BasisTag::UpDown).unwrap();
        let f = n_copy_bosonic(&up, 3).unwrap();
        assert_eq!(f.amps()[0], Complex::new(1.0, 0.0));
        assert!(f.amps()[1..].iter().all(|z| z.is_zero()));

        let plus = feature_state(FRAC_PI_2);
        let f = n_copy_bosonic(&plus, 2).unwrap();
        assert!(close(f.amps()[0], 0.5, 0.0));
        assert!(close(f.amps()[1], FRAC_1_SQRT_2, 0.0));
        assert!(close(f.amps()[2], 0.5, 0.0));

        assert_eq!(n_copy_bosonic(&plus, 41).unwrap_err(), Error::TooManyCopies(41));
        assert!(matches!(n_copy_bosonic(&plus, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn overlap_matches_half_angle_formula() {
        for theta in [0.0, 0.5, 1.2] {
            let (g0, _) = template_pair(theta).unwrap();
            for i in 0..16 {
                let phi = i as f64 * 0.4;
                let want = ((phi - theta) / 2.0).cos().powi(2);
                assert!((overlap_sq(&feature_state(phi), &g0).unwrap() - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn mixed_bases_rejected() {
        let a = feature_state(0.2);
        let b = feature_state_v(0.2);
        assert_eq!(
            overlap_sq(&a, &b).unwrap_err(),
            Error::BasisMismatch {
                left: BasisTag::UpDown,
                right: BasisTag::VBasis
            }
        );
        let fa = n_copy_bosonic(&a, 2).unwrap();
        let fb = n_copy_bosonic(&b, 2).unwrap();
        assert!(fa.inner(&fb).is_err());
    }

    #[test]
    fn new_validates_norm() {
        let z = Complex::new(0.8, 0.0);
        assert!(matches!(
            QubitState::new(z, z, BasisTag::UpDown),
            Err(Error::NotNormalized(_))
        ));
    }
}
