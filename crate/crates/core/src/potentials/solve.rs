//! Coefficient solvers: genus-0 invariants of rank-one models from
//! associativity and genus-1 invariants from Getzler's relation.
//!
//! At each degree `d` the single unknown invariant enters the residual
//! affinely. The residual is evaluated with the unknown set to 0 and to 1;
//! the coefficients at Novikov degree exactly `d` then give equations
//! `a_i + b_i x = 0`.

use std::sync::Arc;

use super::{build_potential, InvariantEntry, PotentialError};
use crate::builtin;
use crate::frobenius::{Calculus, FrobeniusError};
use crate::model::CohomologyModel;
use crate::scalar::Scalar;
use crate::series::{Monomial, Series, Window};
use crate::virasoro::Virasoro;

#[derive(Debug, Clone, PartialEq)]
pub struct SolveStep<S> {
    pub degree: u32,
    pub value: S,
    /// Coefficient equations at this degree that are not identically zero.
    pub equations: usize,
    /// Equations in which the unknown actually appears.
    pub determining: usize,
    /// Truncation used for this degree.
    pub window: Window,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome<S> {
    pub table: Vec<InvariantEntry<S>>,
    pub steps: Vec<SolveStep<S>>,
}

/// Genus-0 invariants `N_d` of P² for `1 ≤ d ≤ d_max`.
pub fn genus0_p2_table<S: Scalar>(d_max: u32) -> Vec<InvariantEntry<S>> {
    solve_genus0_wdvv(Arc::new(builtin::p2_model()), d_max)
        .expect("associativity determines the plane curve counts")
        .table
}

fn from_frobenius(degree: u32) -> impl Fn(FrobeniusError) -> PotentialError {
    move |e| match e {
        FrobeniusError::Series(s) => PotentialError::Series(s),
        other => PotentialError::Unsolvable {
            degree,
            reason: other.to_string(),
        },
    }
}

/// Number of top-class insertions making a genus-`g` degree-`d` invariant
/// satisfy the dimension axiom, if integral.
fn point_insertions<S: Scalar>(model: &CohomologyModel<S>, genus: i64, d: u32) -> Option<usize> {
    let dim = model.dim() as i64;
    if dim < 2 {
        return None;
    }
    let c1 = model.c1_degree(&[d]);
    let numer = S::from_i64((dim - 3) * (1 - genus)) + c1;
    let n = numer / S::from_i64(dim - 1);
    if !n.is_integer() {
        return None;
    }
    let text = n.to_fraction_string();
    let whole = text.split('/').next()?.parse::<i64>().ok()?;
    usize::try_from(whole).ok()
}

fn require_rank_one<S: Scalar>(model: &CohomologyModel<S>) -> Result<(), PotentialError> {
    if model.curve_rank() != 1 || model.divisor_classes().is_empty() || model.dim() < 2 {
        return Err(PotentialError::Unsolvable {
            degree: 0,
            reason: format!(
                "model {} is not a rank-one model of dimension at least 2",
                model.name()
            ),
        });
    }
    Ok(())
}

fn point_entry<S: Scalar>(
    model: &CohomologyModel<S>,
    genus: u8,
    d: u32,
    value: S,
) -> Result<InvariantEntry<S>, PotentialError> {
    let count = point_insertions(model, genus as i64, d).ok_or(PotentialError::Unsolvable {
        degree: d,
        reason: "no integral number of point insertions satisfies the dimension axiom".into(),
    })?;
    Ok(InvariantEntry {
        genus,
        beta: vec![d],
        insertions: vec![model.n() - 1; count],
        value,
    })
}

/// Coefficients of the residual at Novikov degree exactly `d`, keyed by
/// (residual index, monomial).
fn degree_slice<S: Scalar>(residuals: &[Series<S>], d: u32) -> Vec<((usize, Monomial), S)> {
    let mut out = Vec::new();
    for (i, r) in residuals.iter().enumerate() {
        for (m, c) in r.terms() {
            if m.novikov() == [d] {
                out.push(((i, m.clone()), c.clone()));
            }
        }
    }
    out
}

fn solve_affine<S: Scalar>(
    degree: u32,
    window: Window,
    at_zero: &[Series<S>],
    at_one: &[Series<S>],
) -> Result<SolveStep<S>, PotentialError> {
    use std::collections::BTreeMap;
    let mut eqs: BTreeMap<(usize, Monomial), (S, S)> = BTreeMap::new();
    for (k, c) in degree_slice(at_zero, degree) {
        eqs.entry(k).or_insert((S::zero(), S::zero())).0 = c;
    }
    for (k, c) in degree_slice(at_one, degree) {
        eqs.entry(k).or_insert((S::zero(), S::zero())).1 = c;
    }
    // (a, b) with residual a + b x
    let eqs: Vec<(S, S)> = eqs
        .into_values()
        .map(|(r0, r1)| {
            let b = r1 - r0.clone();
            (r0, b)
        })
        .filter(|(a, b)| !(a.is_zero() && b.is_zero()))
        .collect();
    let determining = eqs.iter().filter(|(_, b)| !b.is_zero()).count();
    let Some((a, b)) = eqs.iter().find(|(_, b)| !b.is_zero()) else {
        return Err(PotentialError::Unsolvable {
            degree,
            reason: format!(
                "underdetermined: the unknown does not appear in any of {} equations",
                eqs.len()
            ),
        });
    };
    let x = -(a.clone() / b.clone());
    if let Some((a, b)) = eqs
        .iter()
        .find(|(a, b)| a.clone() + b.clone() * x.clone() != S::zero())
    {
        return Err(PotentialError::Unsolvable {
            degree,
            reason: format!(
                "inconsistent: equation {} + {} x = 0 rejects x = {}",
                a.to_fraction_string(),
                b.to_fraction_string(),
                x.to_fraction_string()
            ),
        });
    }
    Ok(SolveStep {
        degree,
        value: x,
        equations: eqs.len(),
        determining,
        window,
    })
}

/// Solves associativity of the quantum product degree by degree with the
/// degree-one seed `N₁ = 1`. The unknown at degree `d` is the invariant
/// with only top-class insertions.
pub fn solve_genus0_wdvv<S: Scalar>(
    model: Arc<CohomologyModel<S>>,
    d_max: u32,
) -> Result<SolveOutcome<S>, PotentialError> {
    require_rank_one(&model)?;
    let mut table = Vec::new();
    let mut steps = Vec::new();
    for d in 1..=d_max {
        let count = point_insertions(&model, 0, d).ok_or(PotentialError::Unsolvable {
            degree: d,
            reason: "no integral number of point insertions".into(),
        })?;
        let window = Window::truncated(count as u32 + 3, d, 1);
        if d == 1 {
            table.push(point_entry(&model, 0, 1, S::one())?);
            steps.push(SolveStep {
                degree: 1,
                value: S::one(),
                equations: 0,
                determining: 0,
                window,
            });
            continue;
        }
        let residual = |x: S| -> Result<Vec<Series<S>>, PotentialError> {
            let mut trial = table.clone();
            trial.push(point_entry(&model, 0, d, x)?);
            let pot = build_potential(model.clone(), &trial, window.clone())?;
            let calc = Calculus::new(&pot);
            let n = model.n();
            let mut out = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    let ab = calc
                        .quantum_product(&calc.basis(a), &calc.basis(b))
                        .map_err(from_frobenius(d))?;
                    for c in 0..n {
                        let gc = calc.basis(c);
                        let left = calc.quantum_product(&ab, &gc).map_err(from_frobenius(d))?;
                        let bc = calc
                            .quantum_product(&calc.basis(b), &gc)
                            .map_err(from_frobenius(d))?;
                        let right = calc
                            .quantum_product(&calc.basis(a), &bc)
                            .map_err(from_frobenius(d))?;
                        let diff = left.try_sub(&right)?;
                        out.extend(diff.components().iter().cloned());
                    }
                }
            }
            Ok(out)
        };
        let step = solve_affine(
            d,
            window.clone(),
            &residual(S::zero())?,
            &residual(S::one())?,
        )?;
        table.push(point_entry(&model, 0, d, step.value.clone())?);
        steps.push(step);
    }
    Ok(SolveOutcome { table, steps })
}

/// Solves `G₀ + G₁ = 0` on the pattern `(D, D, D, D)`, `D` the divisor
/// class, for the genus-1 invariants with only top-class insertions.
/// The genus-0 table must reach Novikov degree `d_max`.
pub fn solve_genus1_getzler<S: Scalar>(
    model: Arc<CohomologyModel<S>>,
    genus0: &[InvariantEntry<S>],
    d_max: u32,
) -> Result<SolveOutcome<S>, PotentialError> {
    require_rank_one(&model)?;
    let divisor = model.divisor_classes()[0];
    let mut table: Vec<InvariantEntry<S>> = Vec::new();
    let mut steps = Vec::new();
    for d in 1..=d_max {
        let count = point_insertions(&model, 1, d).ok_or(PotentialError::Unsolvable {
            degree: d,
            reason: "no integral number of point insertions".into(),
        })?;
        let window = Window::truncated(count as u32 + 3, d, 1);
        let residual = |x: S| -> Result<Vec<Series<S>>, PotentialError> {
            let mut trial: Vec<InvariantEntry<S>> = genus0.to_vec();
            trial.extend(table.iter().cloned());
            trial.push(point_entry(&model, 1, d, x)?);
            let pot = build_potential(model.clone(), &trial, window.clone())?;
            let vir = Virasoro::new(&pot);
            let v = vir.calculus().basis(divisor);
            let g0 = vir.g0_tensor([&v, &v, &v, &v]).map_err(from_frobenius(d))?;
            let g1 = vir.g1_tensor([&v, &v, &v, &v]).map_err(from_frobenius(d))?;
            Ok(vec![g0.try_add(&g1)?])
        };
        let step = solve_affine(
            d,
            window.clone(),
            &residual(S::zero())?,
            &residual(S::one())?,
        )?;
        table.push(point_entry(&model, 1, d, step.value.clone())?);
        steps.push(step);
    }
    Ok(SolveOutcome { table, steps })
}
