//! Φ, Ψ, the tensors `G₀` and `G₁`, Getzler's relation and the checks that
//! `ΔΨ = 0`.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock};
use std::time::Instant;

use serde::Serialize;

use crate::builtin;
use crate::frobenius::{self, Calculus, FrobeniusError, VectorField, Verdict};
use crate::potentials::{check_quasi_homogeneity, GwPotential};
use crate::scalar::Scalar;
use crate::series::Series;

/// Result of one named check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    pub window: String,
    /// Empty when `pass`.
    pub residual: String,
    pub millis: Option<u64>,
    #[serde(skip)]
    pub first_failure: Option<String>,
    #[serde(skip)]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn from_verdict(name: &str, verdict: Verdict) -> Self {
        CheckReport {
            name: name.to_string(),
            pass: verdict.pass,
            window: verdict.window.to_string(),
            residual: if verdict.pass {
                String::new()
            } else {
                verdict.residual
            },
            millis: None,
            first_failure: verdict.first_failure,
            notes: Vec::new(),
        }
    }

    pub fn error(name: &str, message: String) -> Self {
        CheckReport {
            name: name.to_string(),
            pass: false,
            window: String::new(),
            residual: message.clone(),
            millis: None,
            first_failure: Some(message),
            notes: Vec::new(),
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

const PERMUTATIONS: [[usize; 4]; 24] = [
    [0, 1, 2, 3],
    [0, 1, 3, 2],
    [0, 2, 1, 3],
    [0, 2, 3, 1],
    [0, 3, 1, 2],
    [0, 3, 2, 1],
    [1, 0, 2, 3],
    [1, 0, 3, 2],
    [1, 2, 0, 3],
    [1, 2, 3, 0],
    [1, 3, 0, 2],
    [1, 3, 2, 0],
    [2, 0, 1, 3],
    [2, 0, 3, 1],
    [2, 1, 0, 3],
    [2, 1, 3, 0],
    [2, 3, 0, 1],
    [2, 3, 1, 0],
    [3, 0, 1, 2],
    [3, 0, 2, 1],
    [3, 1, 0, 2],
    [3, 1, 2, 0],
    [3, 2, 0, 1],
    [3, 2, 1, 0],
];

fn sorted<const K: usize>(mut xs: [usize; K]) -> [usize; K] {
    xs.sort_unstable();
    xs
}

/// Genus-1 layer on top of [`Calculus`], caching `Φ`, `Ψ`, `⟨⟨E²⟩⟩₁` and
/// the contracted tensors.
pub struct Virasoro<'a, S> {
    calc: Calculus<'a, S>,
    e2_genus1: OnceLock<Series<S>>,
    phi: OnceLock<Series<S>>,
    psi: OnceLock<Series<S>>,
    g0_contracted: OnceLock<Series<S>>,
    g1_contracted: OnceLock<Series<S>>,
}

impl<'a, S: Scalar> Virasoro<'a, S> {
    pub fn new(potential: &'a GwPotential<S>) -> Self {
        Virasoro {
            calc: Calculus::new(potential),
            e2_genus1: OnceLock::new(),
            phi: OnceLock::new(),
            psi: OnceLock::new(),
            g0_contracted: OnceLock::new(),
            g1_contracted: OnceLock::new(),
        }
    }

    pub fn calculus(&self) -> &Calculus<'a, S> {
        &self.calc
    }

    fn cached(
        cell: &OnceLock<Series<S>>,
        f: impl FnOnce() -> Result<Series<S>, FrobeniusError>,
    ) -> Result<&Series<S>, FrobeniusError> {
        if let Some(v) = cell.get() {
            return Ok(v);
        }
        let v = f()?;
        Ok(cell.get_or_init(|| v))
    }

    /// `½ Σ_α (b_α(1−b_α) − (b₁+1)/6) ⟨⟨γ_α γ^α⟩⟩_0`.
    fn two_point_sum(&self) -> Result<Series<S>, FrobeniusError> {
        let c = &self.calc;
        let m = c.model();
        let b1 = c.b1().clone();
        let mut acc = c.zero_series();
        for a in 0..c.n() {
            let ba = m.b(a).clone();
            let w = ba.clone() * (S::one() - ba) - (b1.clone() + S::one()) / S::from_i64(6);
            if w.is_zero() {
                continue;
            }
            let corr = c.correlator(0, &[&c.basis(a), &c.raised(a)])?;
            acc = acc.try_add(&corr.scale(&w))?;
        }
        Ok(acc.scale(&S::from_fraction(1, 2)))
    }

    /// `Σ_α ⟨⟨E E γ_α γ^α⟩⟩_0`.
    fn eeaa_sum(&self) -> Result<Series<S>, FrobeniusError> {
        let c = &self.calc;
        let e = c.euler_field();
        let mut acc = c.zero_series();
        for a in 0..c.n() {
            acc = acc.try_add(&c.correlator(0, &[e, e, &c.basis(a), &c.raised(a)])?)?;
        }
        Ok(acc)
    }

    /// `⟨⟨E²⟩⟩₁`.
    pub fn e2_genus1(&self) -> Result<&Series<S>, FrobeniusError> {
        Self::cached(&self.e2_genus1, || {
            let e2 = self.calc.euler_square()?;
            self.calc.correlator(1, &[e2])
        })
    }

    /// `Φ = −(1/24) Σ_α ⟨⟨E E γ_α γ^α⟩⟩_0 + ½ Σ_α (b_α(1−b_α) − (b₁+1)/6) ⟨⟨γ_α γ^α⟩⟩_0`.
    pub fn phi(&self) -> Result<&Series<S>, FrobeniusError> {
        Self::cached(&self.phi, || {
            let first = self.eeaa_sum()?.scale(&S::from_fraction(-1, 24));
            Ok(first.try_add(&self.two_point_sum()?)?)
        })
    }

    /// `Ψ = ⟨⟨E²⟩⟩₁ + (1/24) Σ_α ⟨⟨E E γ_α γ^α⟩⟩_0 − ½ Σ_α (⋯) ⟨⟨γ_α γ^α⟩⟩_0`,
    /// assembled term by term.
    pub fn psi(&self) -> Result<&Series<S>, FrobeniusError> {
        Self::cached(&self.psi, || {
            let c = &self.calc;
            let m = c.model();
            let e = c.euler_field();
            let mut acc = self.e2_genus1()?.clone();
            let b1 = c.b1().clone();
            for a in 0..c.n() {
                let up = c.raised(a);
                let down = c.basis(a);
                let four = c.correlator(0, &[e, e, &down, &up])?;
                acc = acc.try_add(&four.scale(&S::from_fraction(1, 24)))?;
                let ba = m.b(a).clone();
                let w = ba.clone() * (S::one() - ba) - (b1.clone() + S::one()) / S::from_i64(6);
                let two = c.correlator(0, &[&down, &up])?;
                acc = acc.try_sub(&two.scale(&(w / S::from_i64(2))))?;
            }
            Ok(acc)
        })
    }

    /// `G₀(v₁, v₂, v₃, v₄)` as a literal sum over `S₄`. Sub-terms that depend
    /// only on which inputs occupy symmetric slots are computed once.
    pub fn g0_tensor(&self, v: [&VectorField<S>; 4]) -> Result<Series<S>, FrobeniusError> {
        let c = &self.calc;
        let n = c.n();
        let ups: Vec<VectorField<S>> = (0..n).map(|a| c.raised(a)).collect();
        let downs: Vec<VectorField<S>> = (0..n).map(|a| c.basis(a)).collect();
        // ⟨⟨γ_α γ_β γ^β⟩⟩ and Σ_β ⟨⟨γ_α w γ_β γ^β⟩⟩ contractions
        let mut trace3 = Vec::with_capacity(n);
        for a in 0..n {
            let mut acc = c.zero_series();
            for b in 0..n {
                acc = acc.try_add(&c.correlator(0, &[&downs[a], &downs[b], &ups[b]])?)?;
            }
            trace3.push(acc);
        }
        let mut memo: HashMap<(u8, [usize; 4]), Series<S>> = HashMap::new();
        let mut total = c.zero_series();
        for p in PERMUTATIONS {
            let [p1, p2, p3, p4] = p;
            let k1 = sorted([p1, p2, p3]);
            let key = (1u8, [k1[0], k1[1], k1[2], p4]);
            if let Entry::Vacant(slot) = memo.entry(key) {
                let mut acc = c.zero_series();
                for a in 0..n {
                    let left = c.correlator(0, &[v[p1], v[p2], v[p3], &ups[a]])?;
                    let mut right = c.zero_series();
                    for b in 0..n {
                        right = right
                            .try_add(&c.correlator(0, &[&downs[a], v[p4], &downs[b], &ups[b]])?)?;
                    }
                    acc = acc.try_add(&left.try_mul(&right)?)?;
                }
                slot.insert(acc.scale(&S::from_fraction(1, 6)));
            }
            total = total.try_add(&memo[&key])?;

            let key = (2u8, [0, 1, 2, 3]);
            if let Entry::Vacant(slot) = memo.entry(key) {
                let mut acc = c.zero_series();
                for a in 0..n {
                    let five = c.correlator(0, &[v[0], v[1], v[2], v[3], &ups[a]])?;
                    acc = acc.try_add(&five.try_mul(&trace3[a])?)?;
                }
                slot.insert(acc.scale(&S::from_fraction(1, 24)));
            }
            total = total.try_add(&memo[&key])?;

            let (l, r) = (sorted([p1, p2]), sorted([p3, p4]));
            let key = (3u8, [l[0], l[1], r[0], r[1]]);
            if let Entry::Vacant(slot) = memo.entry(key) {
                let mut acc = c.zero_series();
                for a in 0..n {
                    for b in 0..n {
                        let left = c.correlator(0, &[v[p1], v[p2], &ups[a], &ups[b]])?;
                        let right = c.correlator(0, &[&downs[a], &downs[b], v[p3], v[p4]])?;
                        acc = acc.try_add(&left.try_mul(&right)?)?;
                    }
                }
                slot.insert(acc.scale(&S::from_fraction(-1, 4)));
            }
            total = total.try_add(&memo[&key])?;
        }
        Ok(total)
    }

    /// `G₁(v₁, v₂, v₃, v₄)` as a literal sum over `S₄`.
    pub fn g1_tensor(&self, v: [&VectorField<S>; 4]) -> Result<Series<S>, FrobeniusError> {
        let c = &self.calc;
        let n = c.n();
        let ups: Vec<VectorField<S>> = (0..n).map(|a| c.raised(a)).collect();
        let downs: Vec<VectorField<S>> = (0..n).map(|a| c.basis(a)).collect();
        let one_point: Vec<Series<S>> = downs
            .iter()
            .map(|d| c.correlator(1, &[d]))
            .collect::<Result<_, _>>()?;
        let mut products: HashMap<[usize; 2], Arc<VectorField<S>>> = HashMap::new();
        let mut product = |i: usize, j: usize| -> Result<Arc<VectorField<S>>, FrobeniusError> {
            let key = sorted([i, j]);
            if let Some(p) = products.get(&key) {
                return Ok(p.clone());
            }
            let p = Arc::new(c.quantum_product(v[i], v[j])?);
            products.insert(key, p.clone());
            Ok(p)
        };
        let mut memo: HashMap<(u8, [usize; 4]), Series<S>> = HashMap::new();
        let mut total = c.zero_series();
        for p in PERMUTATIONS {
            let [p1, p2, p3, p4] = p;
            let (l, r) = (sorted([p1, p2]), sorted([p3, p4]));

            let key = (1u8, [l[0], l[1], r[0], r[1]]);
            if let Entry::Vacant(slot) = memo.entry(key) {
                let (a, b) = (product(p1, p2)?, product(p3, p4)?);
                let value = c.correlator(1, &[&a, &b])?.scale(&S::from_i64(3));
                slot.insert(value);
            }
            total = total.try_add(&memo[&key])?;

            let key = (2u8, [l[0], l[1], p3, p4]);
            if let Entry::Vacant(slot) = memo.entry(key) {
                let a = product(p1, p2)?;
                let triple = c.quantum_product(&a, v[p3])?;
                let value = c.correlator(1, &[&triple, v[p4]])?.scale(&S::from_i64(-4));
                slot.insert(value);
            }
            total = total.try_add(&memo[&key])?;

            let key = (3u8, [l[0], l[1], r[0], r[1]]);
            if let Entry::Vacant(slot) = memo.entry(key) {
                let a = product(p1, p2)?;
                let mut acc = c.zero_series();
                for al in 0..n {
                    let four = c.correlator(0, &[&a, v[p3], v[p4], &ups[al]])?;
                    acc = acc.try_add(&four.try_mul(&one_point[al])?)?;
                }
                slot.insert(acc.scale(&-S::one()));
            }
            total = total.try_add(&memo[&key])?;

            let k3 = sorted([p1, p2, p3]);
            let key = (4u8, [k3[0], k3[1], k3[2], p4]);
            if let Entry::Vacant(slot) = memo.entry(key) {
                let mut acc = c.zero_series();
                for al in 0..n {
                    let four = c.correlator(0, &[v[p1], v[p2], v[p3], &ups[al]])?;
                    let prod = c.quantum_product(&downs[al], v[p4])?;
                    let one = c.correlator(1, &[&prod])?;
                    acc = acc.try_add(&four.try_mul(&one)?)?;
                }
                slot.insert(acc.scale(&S::from_i64(2)));
            }
            total = total.try_add(&memo[&key])?;
        }
        Ok(total)
    }

    /// `G₀ + G₁` on four fields, compared with zero.
    pub fn getzler_residual(&self, v: [&VectorField<S>; 4]) -> Result<Verdict, FrobeniusError> {
        let g0 = self.g0_tensor(v)?;
        let g1 = self.g1_tensor(v)?;
        Ok(Verdict::from_comparison(g0.compare(&g1.scale(&-S::one()))?))
    }

    fn contracted(
        &self,
        cell: &OnceLock<Series<S>>,
        tensor: impl Fn(&Self, [&VectorField<S>; 4]) -> Result<Series<S>, FrobeniusError>,
    ) -> Result<Series<S>, FrobeniusError> {
        Self::cached(cell, || {
            let c = &self.calc;
            let e = c.euler_field();
            let mut acc = c.zero_series();
            for a in 0..c.n() {
                let (up, down) = (c.raised(a), c.basis(a));
                acc = acc.try_add(&tensor(self, [e, e, &up, &down])?)?;
            }
            Ok(acc)
        })
        .cloned()
    }

    /// `Σ_α G₀(E, E, γ^α, γ_α)`.
    pub fn g0_contracted(&self) -> Result<Series<S>, FrobeniusError> {
        self.contracted(&self.g0_contracted, Self::g0_tensor)
    }

    /// `Σ_α G₁(E, E, γ^α, γ_α)`.
    pub fn g1_contracted(&self) -> Result<Series<S>, FrobeniusError> {
        self.contracted(&self.g1_contracted, Self::g1_tensor)
    }

    fn delta_of(&self, f: &Series<S>) -> Result<Series<S>, FrobeniusError> {
        self.calc.directional(self.calc.delta_field()?, f)
    }

    /// `Σ_α G₁(E,E,γ^α,γ_α) = 24 Δ⟨⟨E²⟩⟩₁`.
    pub fn check_lemma_g1(&self) -> Result<Verdict, FrobeniusError> {
        let lhs = self.g1_contracted()?;
        let rhs = self.delta_of(self.e2_genus1()?)?.scale(&S::from_i64(24));
        Ok(Verdict::from_comparison(lhs.compare(&rhs)?))
    }

    /// `Σ_α G₀(E,E,γ^α,γ_α) = −24 ΔΦ`.
    pub fn check_lemma_g0(&self) -> Result<Verdict, FrobeniusError> {
        let lhs = self.g0_contracted()?;
        let rhs = self.delta_of(self.phi()?)?.scale(&S::from_i64(-24));
        Ok(Verdict::from_comparison(lhs.compare(&rhs)?))
    }

    /// `ΔΨ = 0`, and `24 ΔΨ = Σ_α (G₀ + G₁)(E, E, γ^α, γ_α)`.
    pub fn check_main_theorem(&self) -> Result<Verdict, FrobeniusError> {
        let d_psi = self.delta_of(self.psi()?)?;
        let direct = Verdict::from_comparison(d_psi.compare(&self.calc.zero_series())?);
        let assembled = self.g0_contracted()?.try_add(&self.g1_contracted()?)?;
        let via_lemmas =
            Verdict::from_comparison(d_psi.scale(&S::from_i64(24)).compare(&assembled)?);
        Ok(direct.and(via_lemmas))
    }

    /// `Ψ = 0`.
    pub fn check_virasoro_small(&self) -> Result<Verdict, FrobeniusError> {
        Ok(Verdict::from_comparison(
            self.psi()?.compare(&self.calc.zero_series())?,
        ))
    }

    /// `EΨ = Ψ`.
    pub fn check_e_psi(&self) -> Result<Verdict, FrobeniusError> {
        let psi = self.psi()?;
        let e_psi = self.calc.directional(self.calc.euler_field(), psi)?;
        Ok(Verdict::from_comparison(e_psi.compare(psi)?))
    }

    /// `γ₁Ψ = 0`.
    pub fn check_string_psi(&self) -> Result<Verdict, FrobeniusError> {
        let d = self.calc.directional(&self.calc.basis(0), self.psi()?)?;
        Ok(Verdict::from_comparison(
            d.compare(&self.calc.zero_series())?,
        ))
    }

    /// `Ψ = ⟨⟨E²⟩⟩₁ − Φ`.
    pub fn check_psi_phi_structure(&self) -> Result<Verdict, FrobeniusError> {
        let rhs = self.e2_genus1()?.try_sub(self.phi()?)?;
        Ok(Verdict::from_comparison(self.psi()?.compare(&rhs)?))
    }

    /// `Σ_α ⟨⟨Δ γ^α γ_α⟩⟩_0` and the same sum weighted by `b_α²`.
    fn delta_traces(&self) -> Result<(Series<S>, Series<S>), FrobeniusError> {
        let c = &self.calc;
        let delta = c.delta_field()?;
        let mut plain = c.zero_series();
        let mut weighted = c.zero_series();
        for a in 0..c.n() {
            let t = c.correlator(0, &[delta, &c.raised(a), &c.basis(a)])?;
            let ba = c.model().b(a).clone();
            weighted = weighted.try_add(&t.scale(&(ba.clone() * ba)))?;
            plain = plain.try_add(&t)?;
        }
        Ok((plain, weighted))
    }

    /// The intermediate identities (a) through (g) of the proof.
    pub fn check_proof_identity(&self, which: char) -> Result<Verdict, FrobeniusError> {
        let c = &self.calc;
        let n = c.n();
        let b1 = c.b1().clone();
        let half = S::from_fraction(1, 2);
        let e = c.euler_field();
        match which {
            'a' => c.check_gaua(),
            'b' => {
                let mut lhs = c.zero_field();
                for a in 0..n {
                    let inner = c.quantum_product(e, &c.raised(a))?;
                    lhs = lhs.try_add(&c.quantum_product(&c.grading(&inner), &c.basis(a))?)?;
                }
                let rhs = c.quantum_product(e, c.delta_field()?)?.scale(&half);
                Ok(lhs.compare(&rhs)?)
            }
            'c' => {
                let lhs = c.contracted_four_point(e)?;
                let delta = c.delta_field()?;
                let rhs = delta.scale(&(S::one() - b1)).try_sub(&c.grading(delta))?;
                Ok(lhs.compare(&rhs)?)
            }
            'd' => {
                let g_delta = c.grading(c.delta_field()?);
                let mut lhs = c.zero_series();
                for a in 0..n {
                    lhs = lhs.try_add(&c.correlator(0, &[&g_delta, &c.raised(a), &c.basis(a)])?)?;
                }
                let (plain, _) = self.delta_traces()?;
                Ok(Verdict::from_comparison(lhs.compare(&plain.scale(&half))?))
            }
            'e' => {
                let delta = c.delta_field()?;
                let mut lhs = c.zero_series();
                for m in 0..n {
                    lhs = lhs.try_add(&c.correlator(0, &[delta, e, &c.raised(m), &c.basis(m)])?)?;
                }
                let (plain, _) = self.delta_traces()?;
                Ok(Verdict::from_comparison(
                    lhs.compare(&plain.scale(&(half - b1)))?,
                ))
            }
            'f' | 'g' => {
                let mut lhs = c.zero_series();
                for a in 0..n {
                    let ga = if which == 'f' {
                        c.basis(a)
                    } else {
                        c.grading(&c.basis(a))
                    };
                    for b in 0..n {
                        for m in 0..n {
                            let right =
                                c.correlator(0, &[&c.basis(m), &c.raised(a), &c.raised(b)])?;
                            let left = c.correlator(0, &[e, &ga, &c.basis(b), &c.raised(m)])?;
                            lhs = lhs.try_add(&left.try_mul(&right)?)?;
                        }
                    }
                }
                let (plain, weighted) = self.delta_traces()?;
                let rhs = if which == 'f' {
                    plain.scale(&(half - b1))
                } else {
                    weighted.try_sub(&plain.scale(&(b1 * half)))?
                };
                Ok(Verdict::from_comparison(lhs.compare(&rhs)?))
            }
            other => panic!("no proof identity ({other})"),
        }
    }
}

/// Every check name, sorted.
pub const CHECK_NAMES: &[&str] = &[
    "bracket_e2_delta",
    "cup_associativity",
    "ddelta_e2",
    "dekd_k1",
    "dekd_k2",
    "dekd_k3",
    "deuler",
    "dhomog_g0_k1",
    "dhomog_g0_k2",
    "dhomog_g0_k3",
    "dhomog_g1_k1",
    "dhomog_g1_k2",
    "dhomog_g1_k3",
    "dual_grading",
    "e_psi",
    "eg04pt",
    "eta_inverse",
    "gaua_classical",
    "getzler_residual",
    "lemma_g0",
    "lemma_g1",
    "main_theorem",
    "proof_a",
    "proof_b",
    "proof_c",
    "proof_d",
    "proof_e",
    "proof_f",
    "proof_g",
    "psi_phi_structure",
    "quasi_homogeneity_g0",
    "quasi_homogeneity_g1",
    "string_psi",
    "virasoro_small",
    "wdvv",
];

/// Resolves a selector token to check names: an exact name, or a family
/// prefix such as `dhomog` or `proof`.
pub fn select_checks(token: &str) -> Vec<&'static str> {
    if token == "all" {
        return CHECK_NAMES.to_vec();
    }
    let prefix = format!("{token}_");
    CHECK_NAMES
        .iter()
        .copied()
        .filter(|name| *name == token || name.starts_with(&prefix))
        .collect()
}

/// Non-decreasing index tuples of length `k` over `0..n`.
pub fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

impl<'a, S: Scalar> Virasoro<'a, S> {
    fn over_tuples(
        &self,
        k: usize,
        f: impl Fn(&[&VectorField<S>]) -> Result<Verdict, FrobeniusError>,
    ) -> Result<Verdict, FrobeniusError> {
        let c = &self.calc;
        let basis: Vec<VectorField<S>> = (0..c.n()).map(|a| c.basis(a)).collect();
        let mut verdicts = Vec::new();
        for tuple in multisets(c.n(), k) {
            let fields: Vec<&VectorField<S>> = tuple.iter().map(|&a| &basis[a]).collect();
            let mut v = f(&fields)?;
            if !v.pass {
                let labels: Vec<String> = tuple.iter().map(|a| format!("g{}", a + 1)).collect();
                v.residual = format!("({}) {}", labels.join(","), v.residual);
            }
            verdicts.push(v);
        }
        Ok(Verdict::all(verdicts, c.r()))
    }

    fn evaluate(&self, name: &str) -> Result<Verdict, FrobeniusError> {
        let c = &self.calc;
        let model = c.model();
        let r = c.r();
        if let Some(rest) = name.strip_prefix("dhomog_g") {
            let (g, k) = rest.split_once("_k").expect("dhomog name");
            let (g, k): (usize, usize) = (g.parse().expect("genus"), k.parse().expect("arity"));
            return self.over_tuples(k, |fields| c.check_dhomog(g, fields));
        }
        if let Some(k) = name.strip_prefix("dekd_k") {
            return c.check_dekd(k.parse().expect("power"));
        }
        if let Some(x) = name.strip_prefix("proof_") {
            return self.check_proof_identity(x.chars().next().expect("letter"));
        }
        match name {
            "bracket_e2_delta" => c.check_bracket_e2_delta(),
            "cup_associativity" => Ok(frobenius::check_cup_associativity(model)),
            "ddelta_e2" => c.check_ddelta_e2(),
            "deuler" => {
                let mut verdicts = Vec::new();
                for a in 0..c.n() {
                    verdicts.push(c.check_deuler(&c.basis(a))?);
                }
                verdicts.push(c.check_deuler(c.euler_field())?);
                Ok(Verdict::all(verdicts, r))
            }
            "dual_grading" => Ok(frobenius::check_dual_grading(model)),
            "e_psi" => self.check_e_psi(),
            "eg04pt" => self.over_tuples(2, |f| c.check_eg04pt(f[0], f[1])),
            "eta_inverse" => Ok(frobenius::check_eta_inverse(model)),
            "gaua_classical" => {
                let classical = builtin::classical_potential(c.potential().model().clone());
                Calculus::new(&classical).check_gaua()
            }
            "getzler_residual" => {
                self.over_tuples(4, |f| self.getzler_residual([f[0], f[1], f[2], f[3]]))
            }
            "lemma_g0" => self.check_lemma_g0(),
            "lemma_g1" => self.check_lemma_g1(),
            "main_theorem" => self.check_main_theorem(),
            "psi_phi_structure" => self.check_psi_phi_structure(),
            "quasi_homogeneity_g0" => Ok(Verdict::from_comparison(check_quasi_homogeneity(
                c.potential(),
                0,
            )?)),
            "quasi_homogeneity_g1" => Ok(Verdict::from_comparison(check_quasi_homogeneity(
                c.potential(),
                1,
            )?)),
            "string_psi" => self.check_string_psi(),
            "virasoro_small" => self.check_virasoro_small(),
            "wdvv" => c.check_wdvv(),
            other => panic!("unknown check {other}"),
        }
    }

    /// Runs one named check. Panics on a name not in [`CHECK_NAMES`].
    pub fn run(&self, name: &str) -> CheckReport {
        assert!(CHECK_NAMES.contains(&name), "unknown check {name}");
        let start = Instant::now();
        let mut report = match self.evaluate(name) {
            Ok(v) => CheckReport::from_verdict(name, v),
            Err(e) => CheckReport::error(name, e.to_string()),
        };
        report.millis = Some(start.elapsed().as_millis() as u64);
        report
    }
}

/// Runs the named checks on `workers` threads sharing one cache. Reports come
/// back sorted by name.
pub fn run_checks<S: Scalar>(
    potential: &GwPotential<S>,
    names: &[&str],
    workers: usize,
) -> Vec<CheckReport> {
    use std::sync::atomic::{AtomicUsize, Ordering};
    use std::sync::Mutex;

    let mut names: Vec<&str> = names.to_vec();
    names.sort_unstable();
    names.dedup();
    let vir = Virasoro::new(potential);
    let next = AtomicUsize::new(0);
    let out = Mutex::new(Vec::with_capacity(names.len()));
    std::thread::scope(|scope| {
        for _ in 0..workers.max(1).min(names.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(name) = names.get(i) else { break };
                let report = vir.run(name);
                out.lock().expect("report lock").push(report);
            });
        }
    });
    let mut reports = out.into_inner().expect("report lock");
    reports.sort_by(|a, b| a.name.cmp(&b.name));
    reports
}
