use clap::ValueEnum;
use etube::complexify::{check_action_invariants, check_free_action};
use etube::spec::DomainSpec;
use etube::verify::{
    verify_c_convexity, verify_duality_identity, verify_exhaustion_monotone, verify_homeomorphism, verify_linear_convexity,
    verify_metric_consistency,
};
use etube::{ConvexDomain, Error, Execution, ProjectiveMap, Representation, Tube, VerifierReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Linconv,
    Cconv,
    Duality,
    Metric,
    Homeo,
    Exhaust,
    Action,
}

const ALL: [Suite; 7] = [Suite::Linconv, Suite::Cconv, Suite::Duality, Suite::Metric, Suite::Homeo, Suite::Exhaust, Suite::Action];

pub struct Params {
    pub samples: usize,
    pub lines: usize,
    pub grid: usize,
    pub tol: Option<f64>,
    pub seed: u64,
    pub exec: Execution,
}

pub const EXHAUSTION_DELTAS: [f64; 4] = [0.5, 0.25, 0.1, 0.01];
const WORD_LENGTH: usize = 8;

/// Kernel samples per exterior point in the linear-convexity suite.
const KERNEL_SAMPLES: usize = 100;

/// Outcome of one suite: a report, or the reason it does not apply.
pub enum Outcome {
    Ran(VerifierReport),
    NotApplicable(String),
}

fn vertex_form(d: &ConvexDomain) -> Result<ConvexDomain, Error> {
    match d.representation() {
        Representation::VPolytope { .. } => Ok(d.clone()),
        Representation::HDomain { .. } => ConvexDomain::vpolytope(d.vertex_lifts()?, d.chart().clone(), Some(d.reference().clone())),
        Representation::Ellipsoid { .. } => Err(Error::Representation("polytope")),
    }
}

pub fn run_suite(suite: Suite, spec: &DomainSpec, p: &Params) -> Result<Outcome, Error> {
    let d = spec.to_domain()?;
    let na = |why: &str| Ok(Outcome::NotApplicable(why.into()));
    let report = match suite {
        Suite::All => unreachable!("expanded by the caller"),
        Suite::Linconv => {
            if !d.is_polytope() {
                return na("needs a polytope");
            }
            verify_linear_convexity(&Tube::new(d)?, p.samples, KERNEL_SAMPLES, p.seed, p.exec)?
        }
        Suite::Cconv => verify_c_convexity(&spec.tube()?, p.lines, p.grid, p.seed, p.exec)?,
        Suite::Duality => {
            if !d.is_polytope() {
                return na("needs a polytope");
            }
            verify_duality_identity(&vertex_form(&d)?, p.samples, p.seed, p.exec)?
        }
        Suite::Metric => verify_metric_consistency(&d, p.samples, p.seed, p.exec)?,
        Suite::Homeo => {
            let mut group = spec.generators()?;
            group.push(ProjectiveMap::identity(d.dim()));
            verify_homeomorphism(&Tube::new(d)?, p.samples, &group, p.seed, p.exec)?
        }
        Suite::Exhaust => verify_exhaustion_monotone(&d, &EXHAUSTION_DELTAS, p.samples, p.seed, p.exec)?,
        Suite::Action => {
            if spec.generators.is_none() {
                return na("the domain file lists no generators");
            }
            let m = spec.manifold()?;
            let mut r = VerifierReport::new("action", 0.0, p.seed);
            r.absorb(check_free_action(&m, WORD_LENGTH, p.exec));
            r.absorb(check_action_invariants(&m, WORD_LENGTH.min(4), p.samples, p.seed, p.exec));
            r
        }
    };
    Ok(Outcome::Ran(report))
}

pub fn expand(suite: Suite) -> Vec<Suite> {
    if suite == Suite::All { ALL.to_vec() } else { vec![suite] }
}

/// Applies `--tol` as an extra bound on each report's largest recorded error.
pub fn apply_tol(report: &mut VerifierReport, tol: Option<f64>) {
    if let Some(t) = tol {
        if report.max_error > t {
            let e = report.max_error;
            report.violation("max_error within --tol", format!("{e:e} > {t:e}"), e);
        }
    }
}
