use crate::error::Result;
use crate::linalg::{eig_hermitian, EigenDecomposition, Matrix, DEFAULT_HERMITIAN_TOL};
use crate::scalar::{lit, Real};

use super::CovariantPom;

/// Cases with `M ≤ N` for which an optimal rank-2 covariant seed is known in closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KnownCase {
    /// Three templates, three copies.
    M3N3,
    /// Three templates, four copies.
    M3N4,
}

impl KnownCase {
    pub fn n_copies(self) -> usize {
        match self {
            KnownCase::M3N3 => 3,
            KnownCase::M3N4 => 4,
        }
    }

    pub fn count(self) -> usize {
        3
    }

    pub fn name(self) -> &'static str {
        match self {
            KnownCase::M3N3 => "m3n3",
            KnownCase::M3N4 => "m3n4",
        }
    }
}

/// A known optimal covariant POM with its closed-form score.
#[derive(Clone, Debug)]
pub struct KnownPom<T> {
    pub case: KnownCase,
    pub pom: CovariantPom<T>,
    pub score: T,
    pub seed_eigen: EigenDecomposition<T>,
}

/// Builds the seed from its closed-form entries.
///
/// For `M = N = 3`, with `a = (√21+√5)/24`, `c = (√35-√3)/24`, `b = 6ac`:
///
/// ```text
/// [1/3  a    c    0  ]
/// [a    1/3  b    c  ]
/// [c    b    1/3  a  ]
/// [0    c    a    1/3]
/// ```
///
/// scoring `(5 + 3√3 a + 3b)/10`.
///
/// For `M = 3, N = 4`, with `b = sqrt(29+√201)/24`, `c = (√67-√3)/(24√2)`, `a = 6bc`
/// and `r = sqrt(3/8) c`:
///
/// ```text
/// [1/3  a    c    0    -r ]
/// [a    1/3  b    r    0  ]
/// [c    b    1/3  b    c  ]
/// [0    r    b    1/3  a  ]
/// [-r   0    c    a    1/3]
/// ```
///
/// scoring `(5 + 4a + 2√6 b)/10`.
pub fn known_pom<T: Real>(case: KnownCase) -> Result<KnownPom<T>> {
    let third = 1.0 / 3.0;
    let (entries, dim, score): (Vec<f64>, usize, f64) = match case {
        KnownCase::M3N3 => {
            let a = (21f64.sqrt() + 5f64.sqrt()) / 24.0;
            let c = (35f64.sqrt() - 3f64.sqrt()) / 24.0;
            let b = 6.0 * a * c;
            #[rustfmt::skip]
            let m = vec![
                third, a, c, 0.0,
                a, third, b, c,
                c, b, third, a,
                0.0, c, a, third,
            ];
            (m, 4, (5.0 + 3.0 * 3f64.sqrt() * a + 3.0 * b) / 10.0)
        }
        KnownCase::M3N4 => {
            let b = (29.0 + 201f64.sqrt()).sqrt() / 24.0;
            let c = (67f64.sqrt() - 3f64.sqrt()) / (24.0 * 2f64.sqrt());
            let a = 6.0 * b * c;
            let r = (3.0f64 / 8.0).sqrt() * c;
            #[rustfmt::skip]
            let m = vec![
                third, a, c, 0.0, -r,
                a, third, b, r, 0.0,
                c, b, third, b, c,
                0.0, r, b, third, a,
                -r, 0.0, c, a, third,
            ];
            (m, 5, (5.0 + 4.0 * a + 2.0 * 6f64.sqrt() * b) / 10.0)
        }
    };
    let entries: Vec<T> = entries.into_iter().map(lit).collect();
    let seed = Matrix::from_real(dim, &entries)?;
    let seed_eigen = eig_hermitian(&seed, lit(DEFAULT_HERMITIAN_TOL))?;
    let pom = CovariantPom::new(seed, case.n_copies(), case.count())?;
    Ok(KnownPom {
        case,
        pom,
        score: lit(score),
        seed_eigen,
    })
}
