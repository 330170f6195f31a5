//! Cohomological input data of a target variety and the constants derived
//! from it.
//!
//! A model file supplies the Hodge bidegrees of a homogeneous basis, the
//! triple intersection numbers `k_abc = ∫ γ_a ∪ γ_b ∪ γ_c`, the first Chern
//! class, the pairing `I_α = ∫ γ_α ∪ c_{d-1}` and the curve-class lattice.
//! Everything else (`η`, `η⁻¹`, `b_α`, cup structure constants, the matrix of
//! multiplication by `c₁`) is derived here and validated eagerly.
//!
//! Indices are 0-based in the Rust API and 1-based in files and messages.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("cannot parse model document: {0}")]
    Parse(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("field `{field}`: `{text}` is not an integer or num/den rational")]
    BadScalar { field: String, text: String },
    #[error("basis element 1 must be the identity with (p,q) = (0,0), found ({p},{q})")]
    Identity { p: u32, q: u32 },
    #[error(
        "basis element {index}: bidegree ({p},{q}) is outside 0..={dim} or has odd total degree"
    )]
    Hodge {
        index: usize,
        p: u32,
        q: u32,
        dim: u32,
    },
    #[error("basis ordering violated at elements {prev} and {next}: degree p+q must be non-decreasing, ties by non-decreasing p")]
    Ordering { prev: usize, next: usize },
    #[error(
        "triple intersection ({a},{b},{c}) given conflicting values for different index orders"
    )]
    TripleAsymmetric { a: usize, b: usize, c: usize },
    #[error("triple intersection ({a},{b},{c}) is nonzero but the bidegrees do not sum to (d,d)")]
    TripleGrading { a: usize, b: usize, c: usize },
    #[error("triple intersection index out of range in entry ({a},{b},{c})")]
    TripleIndex { a: usize, b: usize, c: usize },
    #[error("intersection pairing η_ab = k_1ab is degenerate")]
    DegenerateEta,
    #[error("cup product is not associative for ({a},{b},{c})")]
    NonAssociative { a: usize, b: usize, c: usize },
    #[error("dual pair ({a},{b}) violates b_a + b_b = 1")]
    DualGrading { a: usize, b: usize },
    #[error("`{field}` has a nonzero component {index} on a class that is not of type (1,1)")]
    NotDivisorial { field: &'static str, index: usize },
    #[error("`{field}` has length {found}, expected {expected}")]
    Length {
        field: &'static str,
        found: usize,
        expected: usize,
    },
    #[error("int_c1_cdm1 given as {given} but the data imply {derived}")]
    IntC1Cdm1 { given: String, derived: String },
}

/// A value in a model or table file: an integer or a `num/den` string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawScalar {
    Int(i64),
    Text(String),
}

impl RawScalar {
    pub fn parse<S: Scalar>(&self, field: &str) -> Result<S, ModelError> {
        match self {
            RawScalar::Int(n) => Ok(S::from_i64(*n)),
            RawScalar::Text(t) => S::parse_fraction(t).ok_or_else(|| ModelError::BadScalar {
                field: field.to_string(),
                text: t.clone(),
            }),
        }
    }

    pub fn from_scalar<S: Scalar>(value: &S) -> RawScalar {
        let text = value.to_fraction_string();
        match text.strip_suffix("/1").and_then(|n| n.parse::<i64>().ok()) {
            Some(n) => RawScalar::Int(n),
            None => RawScalar::Text(text),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisDocument {
    pub label: String,
    pub p: u32,
    pub q: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvesDocument {
    pub rank: usize,
    pub divisor_pairing: Vec<Vec<i64>>,
}

/// On-disk model schema.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub name: String,
    pub dim_c: u32,
    pub basis: Vec<BasisDocument>,
    pub triple: Vec<Vec<RawScalar>>,
    pub c1: Vec<RawScalar>,
    pub cdm1_pairing: Vec<RawScalar>,
    pub curves: CurvesDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub int_c1_cdm1: Option<RawScalar>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisClass {
    pub label: String,
    pub p: u32,
    pub q: u32,
}

/// Validated cohomology data with all derived constants.
#[derive(Debug, Clone, PartialEq)]
pub struct CohomologyModel<S> {
    name: String,
    dim: u32,
    basis: Vec<BasisClass>,
    /// Dense symmetric `k_abc`, index `(a*N + b)*N + c`.
    triple: Vec<S>,
    c1: Vec<S>,
    cdm1: Vec<S>,
    curve_rank: usize,
    divisor_pairing: Vec<Vec<i64>>,
    divisor_classes: Vec<usize>,
    eta: Vec<Vec<S>>,
    eta_inv: Vec<Vec<S>>,
    b: Vec<S>,
    /// `cup[a][b][c] = k_ab^c`, the coefficient of `γ_c` in `γ_a ∪ γ_b`.
    cup: Vec<Vec<Vec<S>>>,
    /// `c1_action[a][b] = C_a^b`: `c₁ ∪ γ_a = C_a^b γ_b`.
    c1_action: Vec<Vec<S>>,
    /// `c1_pairing[a][b] = C_ab = ∫ c₁ ∪ γ_a ∪ γ_b`.
    c1_pairing: Vec<Vec<S>>,
    int_c1_cdm1: S,
    document: ModelDocument,
}

/// Exact inverse by Gauss-Jordan elimination; `None` if singular.
pub(crate) fn invert<S: Scalar>(m: &[Vec<S>]) -> Option<Vec<Vec<S>>> {
    let n = m.len();
    let mut a: Vec<Vec<S>> = m.to_vec();
    let mut inv: Vec<Vec<S>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { S::one() } else { S::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = a[col][j].clone() / p.clone();
            inv[col][j] = inv[col][j].clone() / p.clone();
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let x = f.clone() * a[col][j].clone();
                a[r][j] -= &x;
                let y = f.clone() * inv[col][j].clone();
                inv[r][j] -= &y;
            }
        }
    }
    Some(inv)
}

impl<S: Scalar> CohomologyModel<S> {
    /// Parses and validates a JSON model document.
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let doc: ModelDocument =
            serde_json::from_str(text).map_err(|e| ModelError::Parse(e.to_string()))?;
        Self::from_document(doc)
    }

    pub fn from_document(doc: ModelDocument) -> Result<Self, ModelError> {
        let n = doc.basis.len();
        let d = doc.dim_c;
        if n == 0 {
            return Err(ModelError::Schema("basis must not be empty".into()));
        }
        let basis: Vec<BasisClass> = doc
            .basis
            .iter()
            .map(|b| BasisClass {
                label: b.label.clone(),
                p: b.p,
                q: b.q,
            })
            .collect();

        if (basis[0].p, basis[0].q) != (0, 0) {
            return Err(ModelError::Identity {
                p: basis[0].p,
                q: basis[0].q,
            });
        }
        for (i, bc) in basis.iter().enumerate() {
            if bc.p > d || bc.q > d || (bc.p + bc.q) % 2 != 0 {
                return Err(ModelError::Hodge {
                    index: i + 1,
                    p: bc.p,
                    q: bc.q,
                    dim: d,
                });
            }
        }
        for i in 1..n {
            let (prev, next) = (&basis[i - 1], &basis[i]);
            let key = |b: &BasisClass| (b.p + b.q, b.p);
            if key(prev) > key(next) {
                return Err(ModelError::Ordering {
                    prev: i,
                    next: i + 1,
                });
            }
        }

        // Triple intersections: fill every permutation, reject conflicts.
        let idx = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
        let mut triple: Vec<Option<S>> = vec![None; n * n * n];
        for entry in &doc.triple {
            if entry.len() != 4 {
                return Err(ModelError::Schema(
                    "triple entries must be [a, b, c, value]".into(),
                ));
            }
            let mut ix = [0usize; 3];
            for (k, raw) in entry[..3].iter().enumerate() {
                ix[k] = match raw {
                    RawScalar::Int(v) if *v >= 1 && (*v as usize) <= n => *v as usize - 1,
                    RawScalar::Int(_) => {
                        let as_usize = |r: &RawScalar| match r {
                            RawScalar::Int(v) => *v as usize,
                            RawScalar::Text(_) => 0,
                        };
                        return Err(ModelError::TripleIndex {
                            a: as_usize(&entry[0]),
                            b: as_usize(&entry[1]),
                            c: as_usize(&entry[2]),
                        });
                    }
                    RawScalar::Text(_) => {
                        return Err(ModelError::Schema("triple indices must be integers".into()))
                    }
                };
            }
            let value: S = entry[3].parse("triple")?;
            let [a, b, c] = ix;
            for (x, y, z) in [
                (a, b, c),
                (a, c, b),
                (b, a, c),
                (b, c, a),
                (c, a, b),
                (c, b, a),
            ] {
                match &triple[idx(x, y, z)] {
                    Some(prev) if *prev != value => {
                        return Err(ModelError::TripleAsymmetric {
                            a: a + 1,
                            b: b + 1,
                            c: c + 1,
                        })
                    }
                    _ => triple[idx(x, y, z)] = Some(value.clone()),
                }
            }
        }
        let triple: Vec<S> = triple
            .into_iter()
            .map(|v| v.unwrap_or_else(S::zero))
            .collect();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let graded = basis[a].p + basis[b].p + basis[c].p == d
                        && basis[a].q + basis[b].q + basis[c].q == d;
                    if !triple[idx(a, b, c)].is_zero() && !graded {
                        return Err(ModelError::TripleGrading {
                            a: a + 1,
                            b: b + 1,
                            c: c + 1,
                        });
                    }
                }
            }
        }

        let eta: Vec<Vec<S>> = (0..n)
            .map(|a| (0..n).map(|b| triple[idx(0, a, b)].clone()).collect())
            .collect();
        let eta_inv = invert(&eta).ok_or(ModelError::DegenerateEta)?;

        let cup: Vec<Vec<Vec<S>>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        (0..n)
                            .map(|c| {
                                (0..n).fold(S::zero(), |acc, e| {
                                    acc + triple[idx(a, b, e)].clone() * eta_inv[e][c].clone()
                                })
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for f in 0..n {
                        let mut left = S::zero();
                        let mut right = S::zero();
                        #[allow(clippy::needless_range_loop)]
                        for e in 0..n {
                            left += &(cup[a][b][e].clone() * cup[e][c][f].clone());
                            right += &(cup[a][e][f].clone() * cup[b][c][e].clone());
                        }
                        if left != right {
                            return Err(ModelError::NonAssociative {
                                a: a + 1,
                                b: b + 1,
                                c: c + 1,
                            });
                        }
                    }
                }
            }
        }

        let half = S::from_fraction(1, 2);
        let shift = half.clone() * (S::from_i64(d as i64) - S::one());
        let b: Vec<S> = basis
            .iter()
            .map(|bc| S::from_i64(bc.p as i64) - shift.clone())
            .collect();
        for a in 0..n {
            for c in 0..n {
                if !eta_inv[a][c].is_zero() && b[a].clone() + b[c].clone() != S::one() {
                    return Err(ModelError::DualGrading { a: a + 1, b: c + 1 });
                }
            }
        }

        let parse_vec = |raw: &[RawScalar], field: &'static str| -> Result<Vec<S>, ModelError> {
            if raw.len() != n {
                return Err(ModelError::Length {
                    field,
                    found: raw.len(),
                    expected: n,
                });
            }
            raw.iter().map(|r| r.parse(field)).collect()
        };
        let c1 = parse_vec(&doc.c1, "c1")?;
        let cdm1 = parse_vec(&doc.cdm1_pairing, "cdm1_pairing")?;
        let is_divisor = |i: usize| basis[i].p == 1 && basis[i].q == 1;
        for i in 0..n {
            if !c1[i].is_zero() && !is_divisor(i) {
                return Err(ModelError::NotDivisorial {
                    field: "c1",
                    index: i + 1,
                });
            }
            // ∫ γ_α ∪ c_{d-1} can only be nonzero on classes of type (1,1).
            if !cdm1[i].is_zero() && !is_divisor(i) {
                return Err(ModelError::NotDivisorial {
                    field: "cdm1_pairing",
                    index: i + 1,
                });
            }
        }

        let divisor_classes: Vec<usize> = (0..n).filter(|&i| is_divisor(i)).collect();
        let r = doc.curves.rank;
        if doc.curves.divisor_pairing.len() != r {
            return Err(ModelError::Length {
                field: "curves.divisor_pairing",
                found: doc.curves.divisor_pairing.len(),
                expected: r,
            });
        }
        for row in &doc.curves.divisor_pairing {
            if row.len() != divisor_classes.len() {
                return Err(ModelError::Length {
                    field: "curves.divisor_pairing row",
                    found: row.len(),
                    expected: divisor_classes.len(),
                });
            }
        }

        let c1_action: Vec<Vec<S>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|c| {
                        (0..n).fold(S::zero(), |acc, e| {
                            acc + c1[e].clone() * cup[e][a][c].clone()
                        })
                    })
                    .collect()
            })
            .collect();
        let c1_pairing: Vec<Vec<S>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|c| {
                        (0..n).fold(S::zero(), |acc, e| {
                            acc + c1[e].clone() * triple[idx(e, a, c)].clone()
                        })
                    })
                    .collect()
            })
            .collect();
        let int_c1_cdm1 = (0..n).fold(S::zero(), |acc, e| acc + c1[e].clone() * cdm1[e].clone());
        if let Some(raw) = &doc.int_c1_cdm1 {
            let given: S = raw.parse("int_c1_cdm1")?;
            if given != int_c1_cdm1 {
                return Err(ModelError::IntC1Cdm1 {
                    given: given.to_fraction_string(),
                    derived: int_c1_cdm1.to_fraction_string(),
                });
            }
        }

        Ok(CohomologyModel {
            name: doc.name.clone(),
            dim: d,
            basis,
            triple,
            c1,
            cdm1,
            curve_rank: r,
            divisor_pairing: doc.curves.divisor_pairing.clone(),
            divisor_classes,
            eta,
            eta_inv,
            b,
            cup,
            c1_action,
            c1_pairing,
            int_c1_cdm1,
            document: doc,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Complex dimension `d`.
    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Rank `N` of the cohomology.
    pub fn n(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisClass] {
        &self.basis
    }

    pub fn curve_rank(&self) -> usize {
        self.curve_rank
    }

    pub fn document(&self) -> &ModelDocument {
        &self.document
    }

    pub fn triple(&self, a: usize, b: usize, c: usize) -> &S {
        let n = self.n();
        &self.triple[(a * n + b) * n + c]
    }

    pub fn eta(&self, a: usize, b: usize) -> &S {
        &self.eta[a][b]
    }

    pub fn eta_inv(&self, a: usize, b: usize) -> &S {
        &self.eta_inv[a][b]
    }

    /// `b_α = p_α − (d−1)/2`.
    pub fn b(&self, alpha: usize) -> &S {
        &self.b[alpha]
    }

    pub fn grading(&self) -> &[S] {
        &self.b
    }

    pub fn c1(&self) -> &[S] {
        &self.c1
    }

    /// `I_α = ∫ γ_α ∪ c_{d−1}`.
    pub fn cdm1_pairing(&self) -> &[S] {
        &self.cdm1
    }

    /// `∫ c₁ ∪ c_{d−1}`.
    pub fn int_c1_cdm1(&self) -> &S {
        &self.int_c1_cdm1
    }

    /// `C_a^b`, defined by `c₁ ∪ γ_a = C_a^b γ_b`.
    pub fn c1_action(&self, a: usize, b: usize) -> &S {
        &self.c1_action[a][b]
    }

    /// `C_ab = ∫ c₁ ∪ γ_a ∪ γ_b`.
    pub fn c1_pairing(&self, a: usize, b: usize) -> &S {
        &self.c1_pairing[a][b]
    }

    /// Coefficients of `γ_a ∪ γ_b` in the basis.
    pub fn cup(&self, a: usize, b: usize) -> &[S] {
        &self.cup[a][b]
    }

    /// Coefficient vector of `γ^α = η^{αβ} γ_β`.
    pub fn raise_index(&self, alpha: usize) -> Vec<S> {
        self.eta_inv[alpha].clone()
    }

    /// `(c₁, (b₁ + 1 − b_α)_α)`: the constant part and the linear
    /// coefficients of `E = c₁ + Σ (b₁+1−b_α) t^α γ_α`.
    pub fn euler_constants(&self) -> (Vec<S>, Vec<S>) {
        let b1 = self.b[0].clone();
        let linear = self
            .b
            .iter()
            .map(|ba| b1.clone() + S::one() - ba.clone())
            .collect();
        (self.c1.clone(), linear)
    }

    /// Indices of the (1,1) basis classes, in basis order.
    pub fn divisor_classes(&self) -> &[usize] {
        &self.divisor_classes
    }

    pub fn is_divisor(&self, alpha: usize) -> bool {
        self.divisor_classes.contains(&alpha)
    }

    /// `β · D_δ` for a curve class in lattice coordinates and a divisor
    /// basis index `delta` (an index into the full basis).
    pub fn curve_pairing(&self, beta: &[u32], delta: usize) -> S {
        let Some(col) = self.divisor_classes.iter().position(|&d| d == delta) else {
            return S::zero();
        };
        let total: i64 = beta
            .iter()
            .zip(&self.divisor_pairing)
            .map(|(&n, row)| n as i64 * row[col])
            .sum();
        S::from_i64(total)
    }

    /// `c₁ · β`.
    pub fn c1_degree(&self, beta: &[u32]) -> S {
        self.divisor_classes.iter().fold(S::zero(), |acc, &delta| {
            acc + self.c1[delta].clone() * self.curve_pairing(beta, delta)
        })
    }

    /// Complex degree `(p+q)/2` of a basis class.
    pub fn complex_degree(&self, alpha: usize) -> u32 {
        (self.basis[alpha].p + self.basis[alpha].q) / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_fraction(n, d)
    }

    const P2: &str = r#"{
        "name": "P2", "dim_c": 2,
        "basis": [{"label":"1","p":0,"q":0},{"label":"H","p":1,"q":1},{"label":"H^2","p":2,"q":2}],
        "triple": [[1,1,3,1],[1,2,2,1]],
        "c1": [0,3,0], "cdm1_pairing": [0,3,0],
        "curves": {"rank": 1, "divisor_pairing": [[1]]},
        "int_c1_cdm1": 9
    }"#;

    #[test]
    fn p2_constants() {
        let m = CohomologyModel::<Q>::from_json(P2).unwrap();
        assert_eq!(m.grading(), &[q(-1, 2), q(1, 2), q(3, 2)]);
        assert_eq!(m.raise_index(1), vec![q(0, 1), q(1, 1), q(0, 1)]);
        assert_eq!(m.raise_index(0), vec![q(0, 1), q(0, 1), q(1, 1)]);
        let (c1, lin) = m.euler_constants();
        assert_eq!(c1, vec![q(0, 1), q(3, 1), q(0, 1)]);
        assert_eq!(lin, vec![q(1, 1), q(0, 1), q(-1, 1)]);
        assert_eq!(*m.int_c1_cdm1(), q(9, 1));
        // c₁ ∪ H = 3H²
        assert_eq!(*m.c1_action(1, 2), q(3, 1));
        assert_eq!(*m.c1_pairing(0, 1), q(3, 1));
        assert_eq!(*m.c1_pairing(1, 1), q(0, 1));
        assert_eq!(m.c1_degree(&[2]), q(6, 1));
    }

    #[test]
    fn rejects_unknown_keys() {
        let text = P2.replace("\"dim_c\": 2,", "\"dim_c\": 2, \"extra\": 1,");
        assert!(matches!(
            CohomologyModel::<Q>::from_json(&text),
            Err(ModelError::Parse(_))
        ));
    }

    #[test]
    fn rejects_asymmetric_triple() {
        let text = P2.replace("[[1,1,3,1],[1,2,2,1]]", "[[1,1,3,1],[1,2,2,1],[3,1,1,2]]");
        assert_eq!(
            CohomologyModel::<Q>::from_json(&text),
            Err(ModelError::TripleAsymmetric { a: 3, b: 1, c: 1 })
        );
    }

    #[test]
    fn rejects_degenerate_pairing() {
        let text = P2.replace("[[1,1,3,1],[1,2,2,1]]", "[[1,1,3,1]]");
        assert_eq!(
            CohomologyModel::<Q>::from_json(&text),
            Err(ModelError::DegenerateEta)
        );
    }

    #[test]
    fn rejects_bad_ordering() {
        let text = P2.replace(
            r#"{"label":"H","p":1,"q":1},{"label":"H^2","p":2,"q":2}"#,
            r#"{"label":"H^2","p":2,"q":2},{"label":"H","p":1,"q":1}"#,
        );
        assert_eq!(
            CohomologyModel::<Q>::from_json(&text),
            Err(ModelError::Ordering { prev: 2, next: 3 })
        );
    }

    #[test]
    fn rejects_ungraded_triple() {
        let text = P2.replace("[[1,1,3,1],[1,2,2,1]]", "[[1,1,3,1],[1,2,2,1],[2,2,2,1]]");
        assert_eq!(
            CohomologyModel::<Q>::from_json(&text),
            Err(ModelError::TripleGrading { a: 2, b: 2, c: 2 })
        );
    }

    #[test]
    fn rejects_wrong_c1_c_dm1_scalar() {
        let text = P2.replace("\"int_c1_cdm1\": 9", "\"int_c1_cdm1\": \"17/2\"");
        assert!(matches!(
            CohomologyModel::<Q>::from_json(&text),
            Err(ModelError::IntC1Cdm1 { .. })
        ));
    }

    #[test]
    fn rejects_identity_not_first() {
        let text = P2.replace(
            r#"{"label":"1","p":0,"q":0}"#,
            r#"{"label":"1","p":1,"q":1}"#,
        );
        assert!(matches!(
            CohomologyModel::<Q>::from_json(&text),
            Err(ModelError::Identity { .. })
        ));
    }

    #[test]
    fn rejects_non_associative_cup() {
        // Fourfold with two divisors A1, A2, one middle class B and
        // A_i ∪ A_j = δ_ij B. Then (A1∪A1)∪A2 = C2 but A1∪(A1∪A2) = 0.
        let doc = r#"{
            "name": "bad", "dim_c": 4,
            "basis": [{"label":"1","p":0,"q":0},{"label":"A1","p":1,"q":1},
                      {"label":"A2","p":1,"q":1},{"label":"B","p":2,"q":2},
                      {"label":"C1","p":3,"q":3},{"label":"C2","p":3,"q":3},
                      {"label":"pt","p":4,"q":4}],
            "triple": [[1,1,7,1],[1,2,5,1],[1,3,6,1],[1,4,4,1],[2,2,4,1],[3,3,4,1]],
            "c1": [0,0,0,0,0,0,0], "cdm1_pairing": [0,0,0,0,0,0,0],
            "curves": {"rank": 0, "divisor_pairing": []}
        }"#;
        assert!(matches!(
            CohomologyModel::<Q>::from_json(doc),
            Err(ModelError::NonAssociative { .. })
        ));
    }

    #[test]
    fn eta_times_inverse_is_identity() {
        let m = CohomologyModel::<Q>::from_json(P2).unwrap();
        for a in 0..3 {
            for c in 0..3 {
                let s = (0..3).fold(q(0, 1), |acc, e| {
                    acc + m.eta(a, e).clone() * m.eta_inv(e, c).clone()
                });
                assert_eq!(s, if a == c { q(1, 1) } else { q(0, 1) });
            }
        }
    }
}
