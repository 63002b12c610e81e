use std::f64::consts::PI;
use std::str::FromStr;

use qtm_core::binary::{
    majority_voting_pom, optimal_binary_pom, srm_estimation_pom, verify_optimality,
};
use qtm_core::linalg::Matrix;
use qtm_core::multi::{
    covariant_optimality_check, covariant_pom_optimizer, known_pom, srm_template_pom, KnownCase,
    DEFAULT_CONV_TOL, DEFAULT_MAX_ITERS,
};
use qtm_core::qstates::BasisTag;
use qtm_core::scoreops::{binary_score_operator, binary_score_operator_v};
use qtm_core::{CovariantPom, OptimalityReport, Pom, ScoreOperator};

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrategySpec {
    BinaryOpt,
    BinaryMv,
    BinaryEst,
    MultiSrm,
    MultiKnown(KnownCase),
    MultiFixedPoint,
}

impl FromStr for StrategySpec {
    type Err = Failure;

    fn from_str(s: &str) -> Result<Self, Failure> {
        Ok(match s {
            "binary-opt" => Self::BinaryOpt,
            "binary-mv" => Self::BinaryMv,
            "binary-est" => Self::BinaryEst,
            "multi-srm" => Self::MultiSrm,
            "multi-known:m3n3" => Self::MultiKnown(KnownCase::M3N3),
            "multi-known:m3n4" => Self::MultiKnown(KnownCase::M3N4),
            "multi-fixedpoint" => Self::MultiFixedPoint,
            other => {
                return Err(Failure::usage(format!(
                    "unknown strategy '{other}' (expected binary-opt, binary-mv, binary-est, \
                     multi-srm, multi-known:m3n3, multi-known:m3n4 or multi-fixedpoint)"
                )))
            }
        })
    }
}

impl StrategySpec {
    pub fn name(self) -> String {
        match self {
            Self::BinaryOpt => "binary-opt".into(),
            Self::BinaryMv => "binary-mv".into(),
            Self::BinaryEst => "binary-est".into(),
            Self::MultiSrm => "multi-srm".into(),
            Self::MultiKnown(case) => format!("multi-known:{}", case.name()),
            Self::MultiFixedPoint => "multi-fixedpoint".into(),
        }
    }
}

/// Problem parameters after defaults have been filled in.
#[derive(Clone, Copy, Debug)]
pub struct Params {
    pub n: usize,
    pub m: Option<usize>,
    pub theta: f64,
    pub phase: Option<f64>,
    pub tol: f64,
}

/// A measurement built for one strategy, with the operators it is scored against.
pub enum Built {
    Binary { pom: Pom, ops: Vec<ScoreOperator> },
    Covariant { pom: CovariantPom, note: Option<String> },
}

pub struct Evaluated {
    pub strategy: String,
    pub n: usize,
    pub m: usize,
    pub theta: Option<f64>,
    pub score: f64,
    pub report: OptimalityReport,
    pub basis: BasisTag,
    /// Element that selects the first template (binary) or the covariant seed (multi).
    pub first_element: Matrix<f64>,
    pub note: Option<String>,
}

fn binary_ops(n: usize, theta: f64, basis: BasisTag) -> Result<Vec<ScoreOperator>, Failure> {
    (0..2)
        .map(|j| match basis {
            BasisTag::UpDown => binary_score_operator(n, theta, j),
            BasisTag::VBasis => binary_score_operator_v(n, theta, j),
        })
        .collect::<Result<_, _>>()
        .map_err(Failure::from)
}

fn default_multi(spec: StrategySpec, p: &Params) -> (usize, usize) {
    match spec {
        StrategySpec::MultiKnown(case) => (case.n_copies(), case.count()),
        _ => (p.n, p.m.unwrap_or(p.n + 1)),
    }
}

pub fn build(spec: StrategySpec, p: &Params) -> Result<Built, Failure> {
    Ok(match spec {
        StrategySpec::BinaryOpt => Built::Binary {
            pom: optimal_binary_pom(p.n, p.theta)?.0,
            ops: binary_ops(p.n, p.theta, BasisTag::UpDown)?,
        },
        StrategySpec::BinaryMv => Built::Binary {
            pom: majority_voting_pom(p.n)?,
            ops: binary_ops(p.n, p.theta, BasisTag::UpDown)?,
        },
        StrategySpec::BinaryEst => {
            let count = p.m.unwrap_or(p.n + 1);
            let phase = p.phase.unwrap_or(PI / count as f64);
            Built::Binary {
                pom: srm_estimation_pom(p.n, count, phase)?,
                ops: binary_ops(p.n, p.theta, BasisTag::VBasis)?,
            }
        }
        StrategySpec::MultiSrm => {
            let (n, count) = default_multi(spec, p);
            Built::Covariant {
                pom: srm_template_pom(n, count)?,
                note: None,
            }
        }
        StrategySpec::MultiKnown(case) => Built::Covariant {
            pom: known_pom(case)?.pom,
            note: None,
        },
        StrategySpec::MultiFixedPoint => {
            let (n, count) = default_multi(spec, p);
            let run = covariant_pom_optimizer(n, count, DEFAULT_MAX_ITERS, DEFAULT_CONV_TOL)?;
            let note = format!(
                "{} iterations, {}",
                run.iterations,
                if run.converged { "converged" } else { "iteration cap reached" }
            );
            Built::Covariant {
                pom: run.pom,
                note: Some(note),
            }
        }
    })
}

pub fn evaluate(spec: StrategySpec, p: &Params) -> Result<Evaluated, Failure> {
    let name = spec.name();
    Ok(match build(spec, p)? {
        Built::Binary { pom, ops } => {
            let report = verify_optimality(&pom, &ops, p.tol)?;
            let m = match spec {
                StrategySpec::BinaryEst => p.m.unwrap_or(p.n + 1),
                _ => 2,
            };
            Evaluated {
                strategy: name,
                n: p.n,
                m,
                theta: Some(p.theta),
                score: report.score,
                basis: pom.basis(),
                first_element: pom.elements()[0].clone(),
                report,
                note: None,
            }
        }
        Built::Covariant { pom, note } => {
            let report = covariant_optimality_check(pom.seed(), pom.n_copies(), pom.count(), p.tol)?;
            Evaluated {
                strategy: name,
                n: pom.n_copies(),
                m: pom.count(),
                theta: None,
                score: report.score,
                basis: BasisTag::UpDown,
                first_element: pom.seed().clone(),
                report,
                note,
            }
        }
    })
}
