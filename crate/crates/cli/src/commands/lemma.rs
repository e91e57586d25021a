use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use nitsche_core::linalg::{adjugate_identity_residual, verify_with_factor, CrossCheck};

use crate::args::{GlobalOpts, LemmaArgs};
use crate::error::Result;
use crate::report::RunReport;

/// Relative tolerance for equality cases and the adjugate identity.
pub const EQUALITY_TOL: f64 = 1e-10;
/// Offending matrices kept in the report.
const MAX_RECORDED: usize = 20;
/// Bound-factor multiplier of the negative control.
const SABOTAGE_SCALE: f64 = 0.5;

#[derive(Serialize)]
struct FamilyCase {
    family: String,
    lhs: f64,
    rhs: f64,
    relative_gap: f64,
    holds: bool,
}

#[derive(Serialize)]
struct RandomSummary {
    family: &'static str,
    trials: usize,
    rank_deficient: usize,
    max_ratio: f64,
    max_adjugate_residual: f64,
    violations: usize,
}

#[derive(Serialize)]
pub struct Offender {
    family: String,
    matrix: Vec<Vec<f64>>,
    vectors: [[f64; 3]; 2],
    lhs: f64,
    rhs: f64,
    adjugate_residual: f64,
}

fn rows(a: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..a.nrows()).map(|i| a.row(i).iter().copied().collect()).collect()
}

fn random_vec(rng: &mut ChaCha8Rng) -> [f64; 3] {
    std::array::from_fn(|_| rng.random_range(-1.0..1.0))
}

fn random_matrix(rng: &mut ChaCha8Rng, rank: usize) -> DMatrix<f64> {
    let scale = 10f64.powf(rng.random_range(-3.0..3.0));
    let mut m = DMatrix::from_fn(3, 3, |_, _| scale * rng.random_range(-1.0..1.0));
    if rank < 3 {
        let (c1, c2): (f64, f64) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let r0 = m.row(0).clone_owned();
        let r1 = if rank == 2 { m.row(1).clone_owned() } else { r0.clone() * 0.5 };
        m.set_row(1, &r1);
        m.set_row(2, &(r0 * c1 + r1 * c2));
    }
    m
}

fn random_orthogonal(rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let m = DMatrix::from_fn(3, 3, |_, _| rng.random_range(-1.0..1.0));
    m.qr().q()
}

fn e(i: usize) -> [f64; 3] {
    let mut v = [0.0; 3];
    v[i] = 1.0;
    v
}

/// Normalized adjugate residual `|...| / (|A|_2^2 |x||y|)`.
fn adjugate_relative(a: &DMatrix<f64>, x: &[f64; 3], y: &[f64; 3]) -> Result<f64> {
    let res = adjugate_identity_residual(a, &[x, y])?;
    let len = |v: &[f64; 3]| v.iter().map(|c| c * c).sum::<f64>().sqrt();
    let scale = a.iter().map(|v| v * v).sum::<f64>() * len(x) * len(y);
    Ok(if scale == 0.0 { res } else { res / scale })
}

fn offender(family: String, a: &DMatrix<f64>, x: [f64; 3], y: [f64; 3], c: &CrossCheck, adj: f64) -> Offender {
    Offender {
        family,
        matrix: rows(a),
        vectors: [x, y],
        lhs: c.lhs,
        rhs: c.rhs,
        adjugate_residual: adj,
    }
}

/// Returns the report and the offending cases.
type Family = (String, DMatrix<f64>, [f64; 3], [f64; 3]);

pub fn run(global: &GlobalOpts, args: &LemmaArgs) -> Result<(RunReport, Vec<Offender>)> {
    let mut report = RunReport::new("verify-lemma", global, args)?;
    let scale = if args.sabotage { SABOTAGE_SCALE } else { 1.0 };
    let mut rng = ChaCha8Rng::seed_from_u64(global.seed);
    let mut offenders = Vec::new();
    let mut violations = 0;

    let mut families: Vec<Family> = [1.0, 2.0, 10.0]
        .iter()
        .map(|&k| {
            let a = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&[1.0, k, k]));
            (format!("diag(1,{k},{k})"), a, e(1), e(2))
        })
        .collect();
    let singular = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&[0.0, 1.0, 1.0]));
    families.push(("diag(0,1,1)".into(), singular, e(1), e(2)));
    for i in 0..10 {
        let q = random_orthogonal(&mut rng);
        let (x, y) = (random_vec(&mut rng), random_vec(&mut rng));
        families.push((format!("orthogonal#{i}"), q, x, y));
    }
    for (name, a, x, y) in families {
        let c = verify_with_factor(&a, &[&x, &y], scale)?;
        let gap = (c.lhs - c.rhs).abs() / c.rhs;
        let adj = adjugate_relative(&a, &x, &y)?;
        let holds = c.holds && gap < EQUALITY_TOL && adj < EQUALITY_TOL;
        if !holds {
            violations += 1;
            offenders.push(offender(name.clone(), &a, x, y, &c, adj));
        }
        report.push(&FamilyCase {
            family: name,
            lhs: c.lhs,
            rhs: c.rhs,
            relative_gap: gap,
            holds,
        })?;
    }

    let mut summary = RandomSummary {
        family: "random",
        trials: args.trials,
        rank_deficient: 0,
        max_ratio: 0.0,
        max_adjugate_residual: 0.0,
        violations: 0,
    };
    for trial in 0..args.trials {
        // Every fifth matrix has rank 2, every tenth rank 1.
        let rank = match trial % 10 {
            4 => 2,
            9 => 1,
            _ => 3,
        };
        if rank < 3 {
            summary.rank_deficient += 1;
        }
        let a = random_matrix(&mut rng, rank);
        let (x, y) = (random_vec(&mut rng), random_vec(&mut rng));
        let c = verify_with_factor(&a, &[&x, &y], scale)?;
        let adj = adjugate_relative(&a, &x, &y)?;
        if c.rhs > 0.0 {
            summary.max_ratio = summary.max_ratio.max(c.lhs / c.rhs);
        }
        summary.max_adjugate_residual = summary.max_adjugate_residual.max(adj);
        if !c.holds || adj >= EQUALITY_TOL {
            summary.violations += 1;
            if offenders.len() < MAX_RECORDED {
                offenders.push(offender(format!("random#{trial}"), &a, x, y, &c, adj));
            }
        }
    }
    violations += summary.violations;
    report.push(&summary)?;
    for o in &offenders {
        report.push(o)?;
    }
    report.aggregate.violations = violations;
    Ok((report, offenders))
}
