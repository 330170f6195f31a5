//! Shipped models and the closed-form potentials of the point and P¹.

use std::sync::Arc;

use crate::model::CohomologyModel;
use crate::potentials::{classical_cubic, classical_genus1, GwPotential, PotentialError};
use crate::scalar::Scalar;
use crate::series::{divisor_exponential, Monomial, Series, Window};

pub const POINT_JSON: &str = include_str!("../../../data/models/point.json");
pub const P1_JSON: &str = include_str!("../../../data/models/p1.json");
pub const P2_JSON: &str = include_str!("../../../data/models/p2.json");

pub const NAMES: [&str; 3] = ["point", "p1", "p2"];

pub fn point_model<S: Scalar>() -> CohomologyModel<S> {
    CohomologyModel::from_json(POINT_JSON).expect("shipped point model is valid")
}

pub fn p1_model<S: Scalar>() -> CohomologyModel<S> {
    CohomologyModel::from_json(P1_JSON).expect("shipped P1 model is valid")
}

pub fn p2_model<S: Scalar>() -> CohomologyModel<S> {
    CohomologyModel::from_json(P2_JSON).expect("shipped P2 model is valid")
}

pub fn model<S: Scalar>(name: &str) -> Option<CohomologyModel<S>> {
    match name {
        "point" => Some(point_model()),
        "p1" => Some(p1_model()),
        "p2" => Some(p2_model()),
        _ => None,
    }
}

/// Potentials written down directly rather than assembled from a table:
/// `F₀ = (t¹)³/6, F₁ = 0` for the point and
/// `F₀ = ½(t¹)²t² + q e^{t²}, F₁ = −t²/24` for P¹.
pub fn closed_form<S: Scalar>(
    name: &str,
    window: &Window,
) -> Result<GwPotential<S>, PotentialError> {
    match name {
        "point" => {
            let model = Arc::new(point_model::<S>());
            let f0 = Series::from_terms(
                1,
                0,
                window.clone(),
                [(Monomial::new(&[3], &[]), S::from_fraction(1, 6))],
            );
            let f1 = Series::zero(1, 0, window.clone());
            GwPotential::from_parts(model, f0, f1, Vec::new(), vec!["closed form: point".into()])
        }
        "p1" => {
            let model = Arc::new(p1_model::<S>());
            let half_cubic = Series::from_terms(
                2,
                1,
                window.clone(),
                [(Monomial::new(&[2, 1], &[0]), S::from_fraction(1, 2))],
            );
            let f0 = half_cubic.try_add(&divisor_exponential(&model, &[1], window)?)?;
            let f1 = Series::from_terms(
                2,
                1,
                window.clone(),
                [(Monomial::new(&[0, 1], &[0]), S::from_fraction(-1, 24))],
            );
            GwPotential::from_parts(model, f0, f1, Vec::new(), vec!["closed form: P1".into()])
        }
        _ => Err(PotentialError::BadEntry {
            entry: name.to_string(),
            reason: "no closed form for this model".into(),
        }),
    }
}

/// Potential with every quantum term removed.
pub fn classical_potential<S: Scalar>(model: Arc<CohomologyModel<S>>) -> GwPotential<S> {
    let w = Window::unbounded(model.curve_rank());
    let f0 = classical_cubic(&model, &w);
    let f1 = classical_genus1(&model, &w);
    GwPotential::from_parts(
        model,
        f0,
        f1,
        Vec::new(),
        vec!["classical part only".into()],
    )
    .expect("classical parts share a window")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn shipped_models_load() {
        for name in NAMES {
            assert!(model::<BigRational>(name).is_some());
        }
        assert!(model::<BigRational>("p3").is_none());
    }

    #[test]
    fn p1_closed_form_coefficients() {
        let pot = closed_form::<BigRational>("p1", &Window::truncated(4, 4, 1)).unwrap();
        let f0 = pot.f0();
        assert_eq!(f0.coeff_of(&[2, 1], &[0]), BigRational::from_fraction(1, 2));
        assert_eq!(f0.coeff_of(&[0, 3], &[1]), BigRational::from_fraction(1, 6));
        assert_eq!(f0.coeff_of(&[0, 0], &[2]), BigRational::from_i64(0));
    }
}
