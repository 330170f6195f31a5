//! Vector fields on the small phase space, correlators, the quantum product,
//! the Euler field, the grading operator, the quantum volume element and the
//! identities satisfied by them.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::model::CohomologyModel;
use crate::potentials::{euler_components, GwPotential};
use crate::scalar::Scalar;
use crate::series::{Comparison, Monomial, Series, SeriesError, Window};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrobeniusError {
    #[error("a correlator needs at least one insertion")]
    EmptyCorrelator,
    #[error("genus {0} is not available")]
    Genus(usize),
    #[error("field has {found} components, expected {expected}")]
    FieldShape { expected: usize, found: usize },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// `v = Σ f_α γ_α` with power-series coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField<S> {
    components: Vec<Series<S>>,
}

impl<S: Scalar> VectorField<S> {
    pub fn new(components: Vec<Series<S>>) -> Self {
        VectorField { components }
    }

    pub fn zero(n: usize, r: usize) -> Self {
        Self::new(
            (0..n)
                .map(|_| Series::zero(n, r, Window::unbounded(r)))
                .collect(),
        )
    }

    /// Constant field with the given coefficients.
    pub fn constant(n: usize, r: usize, coeffs: &[S]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|c| Series::constant(n, r, c.clone()))
                .collect(),
        )
    }

    /// The coordinate field `γ_alpha` (0-based).
    pub fn basis(n: usize, r: usize, alpha: usize) -> Self {
        let coeffs: Vec<S> = (0..n)
            .map(|b| if b == alpha { S::one() } else { S::zero() })
            .collect();
        Self::constant(n, r, &coeffs)
    }

    /// `γ^alpha = η^{alpha β} γ_β`.
    pub fn raised(model: &CohomologyModel<S>, alpha: usize) -> Self {
        Self::constant(model.n(), model.curve_rank(), &model.raise_index(alpha))
    }

    pub fn components(&self) -> &[Series<S>] {
        &self.components
    }

    pub fn component(&self, alpha: usize) -> &Series<S> {
        &self.components[alpha]
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    /// Meet of the component windows.
    pub fn window(&self) -> Window {
        let mut it = self.components.iter();
        let first = it
            .next()
            .map(|c| c.window().clone())
            .unwrap_or_else(|| Window::unbounded(0));
        it.fold(first, |w, c| w.meet(c.window()))
    }

    pub fn is_constant(&self) -> bool {
        self.components.iter().all(|c| c.as_constant().is_some())
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&Series<S>, &Series<S>) -> Result<Series<S>, SeriesError>,
    ) -> Result<Self, SeriesError> {
        if self.n() != other.n() {
            return Err(SeriesError::ShapeMismatch(self.n(), 0, other.n(), 0));
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| f(a, b))
            .collect::<Result<_, _>>()?;
        Ok(Self::new(components))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.zip_with(other, Series::try_add)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.zip_with(other, Series::try_sub)
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.components.iter().map(|f| f.scale(c)).collect())
    }

    /// Multiplication by a function.
    pub fn times(&self, f: &Series<S>) -> Result<Self, SeriesError> {
        let components = self
            .components
            .iter()
            .map(|c| c.try_mul(f))
            .collect::<Result<_, _>>()?;
        Ok(Self::new(components))
    }

    /// `G(v) = Σ b_α f_α γ_α`.
    pub fn graded(&self, model: &CohomologyModel<S>) -> Self {
        Self::new(
            self.components
                .iter()
                .enumerate()
                .map(|(a, f)| f.scale(model.b(a)))
                .collect(),
        )
    }

    pub fn compare(&self, other: &Self) -> Result<Verdict, SeriesError> {
        if self.n() != other.n() {
            return Err(SeriesError::ShapeMismatch(self.n(), 0, other.n(), 0));
        }
        let mut verdict: Option<Verdict> = None;
        for (a, (x, y)) in self.components.iter().zip(&other.components).enumerate() {
            let v = Verdict::labelled(x.compare(y)?, &format!("g{}", a + 1));
            verdict = Some(match verdict {
                None => v,
                Some(prev) => prev.and(v),
            });
        }
        Ok(verdict.unwrap_or_else(|| Verdict::exact(true, 0)))
    }
}

/// Outcome of a two-sided evaluation: whether both sides agree inside
/// `window`, the textual residual and the first offending monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub pass: bool,
    pub window: Window,
    pub residual: String,
    pub first_failure: Option<String>,
}

impl Verdict {
    pub fn from_comparison<S: Scalar>(c: Comparison<S>) -> Self {
        Self::labelled(c, "")
    }

    fn labelled<S: Scalar>(c: Comparison<S>, label: &str) -> Self {
        if c.equal {
            return Verdict {
                pass: true,
                window: c.window,
                residual: String::new(),
                first_failure: None,
            };
        }
        let prefix = if label.is_empty() {
            String::new()
        } else {
            format!("{label}: ")
        };
        let first = c
            .residual
            .terms()
            .next()
            .map(|(m, v)| format!("{prefix}{m}:{}", v.to_fraction_string()));
        Verdict {
            pass: false,
            window: c.window,
            residual: format!("{prefix}{}", c.residual),
            first_failure: first,
        }
    }

    /// A verdict for an identity between exact constants.
    pub fn exact(pass: bool, curve_rank: usize) -> Self {
        Verdict {
            pass,
            window: Window::unbounded(curve_rank),
            residual: String::new(),
            first_failure: None,
        }
    }

    pub fn failed(curve_rank: usize, what: String) -> Self {
        Verdict {
            pass: false,
            window: Window::unbounded(curve_rank),
            residual: what.clone(),
            first_failure: Some(what),
        }
    }

    /// Conjunction: both must pass; the window is the common one.
    pub fn and(self, other: Verdict) -> Verdict {
        let residual = match (self.residual.is_empty(), other.residual.is_empty()) {
            (true, _) => other.residual,
            (_, true) => self.residual,
            _ => format!("{}; {}", self.residual, other.residual),
        };
        Verdict {
            pass: self.pass && other.pass,
            window: self.window.meet(&other.window),
            residual,
            first_failure: self.first_failure.or(other.first_failure),
        }
    }

    pub fn all(verdicts: impl IntoIterator<Item = Verdict>, curve_rank: usize) -> Verdict {
        verdicts
            .into_iter()
            .reduce(Verdict::and)
            .unwrap_or_else(|| Verdict::exact(true, curve_rank))
    }
}

type DerivKey = (usize, Vec<usize>);
type FieldRef<S> = Arc<VectorField<S>>;

/// The small-phase-space calculus of one potential. Derivatives of `F_g`,
/// the structure fields `γ_i ∘ γ_j`, `E`, `E²` and `Δ` are computed once and
/// cached.
pub struct Calculus<'a, S> {
    potential: &'a GwPotential<S>,
    model: &'a CohomologyModel<S>,
    derivatives: Mutex<HashMap<DerivKey, Arc<Series<S>>>>,
    structure: Mutex<HashMap<(usize, usize), FieldRef<S>>>,
    euler: OnceLock<VectorField<S>>,
    euler_square: OnceLock<VectorField<S>>,
    delta: OnceLock<VectorField<S>>,
}

impl<'a, S: Scalar> Calculus<'a, S> {
    pub fn new(potential: &'a GwPotential<S>) -> Self {
        Calculus {
            potential,
            model: potential.model(),
            derivatives: Mutex::new(HashMap::new()),
            structure: Mutex::new(HashMap::new()),
            euler: OnceLock::new(),
            euler_square: OnceLock::new(),
            delta: OnceLock::new(),
        }
    }

    pub fn potential(&self) -> &GwPotential<S> {
        self.potential
    }

    pub fn model(&self) -> &CohomologyModel<S> {
        self.model
    }

    pub fn n(&self) -> usize {
        self.model.n()
    }

    pub fn r(&self) -> usize {
        self.model.curve_rank()
    }

    pub fn b1(&self) -> &S {
        self.model.b(0)
    }

    pub fn basis(&self, alpha: usize) -> VectorField<S> {
        VectorField::basis(self.n(), self.r(), alpha)
    }

    pub fn raised(&self, alpha: usize) -> VectorField<S> {
        VectorField::raised(self.model, alpha)
    }

    pub fn zero_field(&self) -> VectorField<S> {
        VectorField::zero(self.n(), self.r())
    }

    pub fn zero_series(&self) -> Series<S> {
        Series::zero(self.n(), self.r(), Window::unbounded(self.r()))
    }

    /// `∂^k F_g / ∂t^{i_1} ⋯ ∂t^{i_k}` for a multi-index in any order.
    pub fn derivative(
        &self,
        genus: usize,
        index: &[usize],
    ) -> Result<Arc<Series<S>>, FrobeniusError> {
        if genus > 1 {
            return Err(FrobeniusError::Genus(genus));
        }
        let mut key = index.to_vec();
        key.sort_unstable();
        self.derivative_sorted(genus, key)
    }

    fn derivative_sorted(
        &self,
        genus: usize,
        key: Vec<usize>,
    ) -> Result<Arc<Series<S>>, FrobeniusError> {
        if key.is_empty() {
            return Ok(Arc::new(self.potential.f(genus).clone()));
        }
        if let Some(hit) = self
            .derivatives
            .lock()
            .expect("cache lock")
            .get(&(genus, key.clone()))
        {
            return Ok(hit.clone());
        }
        let (last, prefix) = key.split_last().expect("non-empty");
        let parent = self.derivative_sorted(genus, prefix.to_vec())?;
        let value = Arc::new(parent.partial_derivative(*last)?);
        self.derivatives
            .lock()
            .expect("cache lock")
            .insert((genus, key), value.clone());
        Ok(value)
    }

    /// `⟨⟨v_1 ⋯ v_k⟩⟩_g = Σ f¹_{α1} ⋯ f^k_{αk} ∂^k F_g / ∂t^{α1} ⋯ ∂t^{αk}`.
    pub fn correlator(
        &self,
        genus: usize,
        fields: &[&VectorField<S>],
    ) -> Result<Series<S>, FrobeniusError> {
        if fields.is_empty() {
            return Err(FrobeniusError::EmptyCorrelator);
        }
        if genus > 1 {
            return Err(FrobeniusError::Genus(genus));
        }
        for f in fields {
            if f.n() != self.n() {
                return Err(FrobeniusError::FieldShape {
                    expected: self.n(),
                    found: f.n(),
                });
            }
        }
        // Group coefficient products by the sorted multi-index they multiply.
        let mut grouped: BTreeMap<Vec<usize>, Series<S>> = BTreeMap::new();
        let mut stack: Vec<(usize, Vec<usize>, Series<S>)> =
            vec![(0, Vec::new(), Series::one(self.n(), self.r()))];
        while let Some((depth, idx, coeff)) = stack.pop() {
            if depth == fields.len() {
                let mut key = idx;
                key.sort_unstable();
                match grouped.get_mut(&key) {
                    Some(acc) => *acc = acc.try_add(&coeff)?,
                    None => {
                        grouped.insert(key, coeff);
                    }
                }
                continue;
            }
            for (alpha, f) in fields[depth].components.iter().enumerate() {
                if f.is_zero() {
                    continue;
                }
                let mut next = idx.clone();
                next.push(alpha);
                stack.push((depth + 1, next, coeff.try_mul(f)?));
            }
        }
        let window = fields.iter().fold(
            self.potential
                .f(genus)
                .window()
                .lowered(fields.len() as i64),
            |w, f| w.meet(&f.window()),
        );
        let mut out = Series::zero(self.n(), self.r(), window);
        for (key, coeff) in grouped {
            if coeff.is_zero() {
                continue;
            }
            let d = self.derivative_sorted(genus, key)?;
            out = out.try_add(&coeff.try_mul(&d)?)?;
        }
        Ok(out)
    }

    /// `γ_i ∘ γ_j = ⟨⟨γ_i γ_j γ^α⟩⟩_0 γ_α`.
    pub fn structure_field(
        &self,
        i: usize,
        j: usize,
    ) -> Result<Arc<VectorField<S>>, FrobeniusError> {
        let key = (i.min(j), i.max(j));
        if let Some(hit) = self.structure.lock().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let (gi, gj) = (self.basis(i), self.basis(j));
        let components = (0..self.n())
            .map(|a| self.correlator(0, &[&gi, &gj, &self.raised(a)]))
            .collect::<Result<_, _>>()?;
        let field = Arc::new(VectorField::new(components));
        self.structure
            .lock()
            .expect("cache lock")
            .insert(key, field.clone());
        Ok(field)
    }

    /// `v ∘ w`, expanded bilinearly over the structure fields.
    pub fn quantum_product(
        &self,
        v: &VectorField<S>,
        w: &VectorField<S>,
    ) -> Result<VectorField<S>, FrobeniusError> {
        let window = self
            .potential
            .f0()
            .window()
            .lowered(3)
            .meet(&v.window())
            .meet(&w.window());
        let mut out = VectorField::new(
            (0..self.n())
                .map(|_| Series::zero(self.n(), self.r(), window.clone()))
                .collect(),
        );
        for (i, vi) in v.components.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, wj) in w.components.iter().enumerate() {
                if wj.is_zero() {
                    continue;
                }
                let c = vi.try_mul(wj)?;
                out = out.try_add(&self.structure_field(i, j)?.times(&c)?)?;
            }
        }
        Ok(out)
    }

    /// Left-associated product of several fields.
    pub fn product_chain(
        &self,
        fields: &[&VectorField<S>],
    ) -> Result<VectorField<S>, FrobeniusError> {
        let (first, rest) = fields
            .split_first()
            .ok_or(FrobeniusError::EmptyCorrelator)?;
        let mut acc = (*first).clone();
        for f in rest {
            acc = self.quantum_product(&acc, f)?;
        }
        Ok(acc)
    }

    /// `E = c₁ + Σ (b₁+1−b_α) t^α γ_α`.
    pub fn euler_field(&self) -> &VectorField<S> {
        self.euler
            .get_or_init(|| VectorField::new(euler_components(self.model)))
    }

    pub fn grading(&self, v: &VectorField<S>) -> VectorField<S> {
        v.graded(self.model)
    }

    /// `v f = Σ v^α ∂_α f`.
    pub fn directional(
        &self,
        v: &VectorField<S>,
        f: &Series<S>,
    ) -> Result<Series<S>, FrobeniusError> {
        let mut out = Series::zero(self.n(), self.r(), f.window().lowered(1).meet(&v.window()));
        for (a, va) in v.components.iter().enumerate() {
            if va.is_zero() {
                continue;
            }
            out = out.try_add(&va.try_mul(&f.partial_derivative(a)?)?)?;
        }
        Ok(out)
    }

    /// `(∇_v w)^β = Σ v^α ∂_α w^β` for the trivial connection.
    pub fn nabla(
        &self,
        v: &VectorField<S>,
        w: &VectorField<S>,
    ) -> Result<VectorField<S>, FrobeniusError> {
        let components = w
            .components
            .iter()
            .map(|wb| self.directional(v, wb))
            .collect::<Result<_, _>>()?;
        Ok(VectorField::new(components))
    }

    /// `[v, w] = ∇_v w − ∇_w v`.
    pub fn bracket(
        &self,
        v: &VectorField<S>,
        w: &VectorField<S>,
    ) -> Result<VectorField<S>, FrobeniusError> {
        Ok(self.nabla(v, w)?.try_sub(&self.nabla(w, v)?)?)
    }

    /// `Δ = Σ_α γ^α ∘ γ_α`.
    pub fn delta_field(&self) -> Result<&VectorField<S>, FrobeniusError> {
        if let Some(d) = self.delta.get() {
            return Ok(d);
        }
        let mut acc = self.zero_field();
        for a in 0..self.n() {
            acc = acc.try_add(&self.quantum_product(&self.raised(a), &self.basis(a))?)?;
        }
        Ok(self.delta.get_or_init(|| acc))
    }

    /// `E^k`, with `E⁰ = γ₁`.
    pub fn euler_power(&self, k: usize) -> Result<VectorField<S>, FrobeniusError> {
        match k {
            0 => Ok(self.basis(0)),
            1 => Ok(self.euler_field().clone()),
            2 => self.euler_square().cloned(),
            _ => {
                let prev = self.euler_power(k - 1)?;
                self.quantum_product(&prev, self.euler_field())
            }
        }
    }

    pub fn euler_square(&self) -> Result<&VectorField<S>, FrobeniusError> {
        if let Some(e2) = self.euler_square.get() {
            return Ok(e2);
        }
        let e = self.euler_field();
        let e2 = self.quantum_product(e, e)?;
        Ok(self.euler_square.get_or_init(|| e2))
    }

    /// `½ Σ C_{αβ} t^α t^β`.
    pub fn c1_quadratic(&self) -> Series<S> {
        let (n, r) = (self.n(), self.r());
        let half = S::from_fraction(1, 2);
        let mut terms = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let c = self.model.c1_pairing(a, b);
                if c.is_zero() {
                    continue;
                }
                let mut t = vec![0u32; n];
                t[a] += 1;
                t[b] += 1;
                terms.push((Monomial::new(&t, &vec![0; r]), c.clone() * half.clone()));
            }
        }
        Series::from_terms(n, r, Window::unbounded(r), terms)
    }

    /// Field whose `β` component is `Σ_α ⟨⟨fields γ^α γ_α γ^β⟩⟩_0`.
    pub fn contracted_four_point(
        &self,
        v: &VectorField<S>,
    ) -> Result<VectorField<S>, FrobeniusError> {
        let n = self.n();
        let mut components = Vec::with_capacity(n);
        for b in 0..n {
            let upper_b = self.raised(b);
            let mut acc = self.zero_series();
            for a in 0..n {
                acc = acc.try_add(
                    &self.correlator(0, &[v, &self.raised(a), &self.basis(a), &upper_b])?,
                )?;
            }
            components.push(acc);
        }
        Ok(VectorField::new(components))
    }

    // ---- identities -------------------------------------------------------

    /// `⟨⟨E v_1 ⋯ v_k⟩⟩_g = Σ_i ⟨⟨⋯ G(v_i) ⋯⟩⟩_g − (2g+k−2)(b₁+1)⟨⟨v_1 ⋯ v_k⟩⟩_g
    /// + δ_{g,0} ∇^k(½ C_{αβ} t^α t^β)` for constant `v_i`.
    pub fn check_dhomog(
        &self,
        genus: usize,
        fields: &[&VectorField<S>],
    ) -> Result<Verdict, FrobeniusError> {
        let k = fields.len();
        let e = self.euler_field();
        let mut with_e: Vec<&VectorField<S>> = vec![e];
        with_e.extend_from_slice(fields);
        let lhs = self.correlator(genus, &with_e)?;

        let mut rhs = self.zero_series();
        for i in 0..k {
            let g = self.grading(fields[i]);
            let mut swapped: Vec<&VectorField<S>> = fields.to_vec();
            swapped[i] = &g;
            rhs = rhs.try_add(&self.correlator(genus, &swapped)?)?;
        }
        let weight = S::from_i64(2 * genus as i64 + k as i64 - 2) * (self.b1().clone() + S::one());
        rhs = rhs.try_sub(&self.correlator(genus, fields)?.scale(&weight))?;
        if genus == 0 {
            let mut q = self.c1_quadratic();
            for v in fields {
                q = self.directional(v, &q)?;
            }
            rhs = rhs.try_add(&q)?;
        }
        Ok(Verdict::from_comparison(lhs.compare(&rhs)?))
    }

    /// `⟨⟨E v₁ v₂ γ^α⟩⟩_0 γ_α = G(v₁)∘v₂ + v₁∘G(v₂) − G(v₁∘v₂) − b₁ v₁∘v₂`.
    pub fn check_eg04pt(
        &self,
        v1: &VectorField<S>,
        v2: &VectorField<S>,
    ) -> Result<Verdict, FrobeniusError> {
        let e = self.euler_field();
        let lhs = VectorField::new(
            (0..self.n())
                .map(|a| self.correlator(0, &[e, v1, v2, &self.raised(a)]))
                .collect::<Result<_, _>>()?,
        );
        let prod = self.quantum_product(v1, v2)?;
        let rhs = self
            .quantum_product(&self.grading(v1), v2)?
            .try_add(&self.quantum_product(v1, &self.grading(v2))?)?
            .try_sub(&self.grading(&prod))?
            .try_sub(&prod.scale(self.b1()))?;
        Ok(lhs.compare(&rhs)?)
    }

    /// `∇_{E^k} Δ = ⟨⟨E^k γ^α γ_α γ^β⟩⟩ γ_β = (k−b₁)E^{k−1}∘Δ − G(E^{k−1}∘Δ)
    /// − Σ_{i=1}^{k−1} Δ∘E^{i−1}∘G(E^{k−i}) − Σ_{i=1}^{k−1} G(Δ∘E^{i−1})∘E^{k−i}`.
    pub fn check_dekd(&self, k: usize) -> Result<Verdict, FrobeniusError> {
        let delta = self.delta_field()?;
        let ek = self.euler_power(k)?;
        let by_nabla = self.nabla(&ek, delta)?;
        let by_correlator = self.contracted_four_point(&ek)?;

        let powers: Vec<VectorField<S>> = (0..k)
            .map(|i| self.euler_power(i))
            .collect::<Result<_, _>>()?;
        let ekm1_delta = self.quantum_product(&powers[k - 1], delta)?;
        let coeff = S::from_i64(k as i64) - self.b1().clone();
        let mut rhs = ekm1_delta
            .scale(&coeff)
            .try_sub(&self.grading(&ekm1_delta))?;
        for i in 1..k {
            let d_e = self.quantum_product(delta, &powers[i - 1])?;
            let t1 = self.quantum_product(&d_e, &self.grading(&powers[k - i]))?;
            let t2 = self.quantum_product(&self.grading(&d_e), &powers[k - i])?;
            rhs = rhs.try_sub(&t1)?.try_sub(&t2)?;
        }
        Ok(by_nabla.compare(&rhs)?.and(by_correlator.compare(&rhs)?))
    }

    /// `∇_v E = −G(v) + (b₁+1) v`.
    pub fn check_deuler(&self, v: &VectorField<S>) -> Result<Verdict, FrobeniusError> {
        let lhs = self.nabla(v, self.euler_field())?;
        let rhs = v
            .scale(&(self.b1().clone() + S::one()))
            .try_sub(&self.grading(v))?;
        Ok(lhs.compare(&rhs)?)
    }

    /// `∇_Δ E² = Δ∘G(E) − G(Δ)∘E − G(Δ∘E) + (b₁+2) Δ∘E`.
    pub fn check_ddelta_e2(&self) -> Result<Verdict, FrobeniusError> {
        let delta = self.delta_field()?;
        let e = self.euler_field();
        let lhs = self.nabla(delta, self.euler_square()?)?;
        let de = self.quantum_product(delta, e)?;
        let rhs = self
            .quantum_product(delta, &self.grading(e))?
            .try_sub(&self.quantum_product(&self.grading(delta), e)?)?
            .try_sub(&self.grading(&de))?
            .try_add(&de.scale(&(self.b1().clone() + S::from_i64(2))))?;
        Ok(lhs.compare(&rhs)?)
    }

    /// `[E², Δ] = −2b₁ E∘Δ − 2 G(E)∘Δ`.
    pub fn check_bracket_e2_delta(&self) -> Result<Verdict, FrobeniusError> {
        let delta = self.delta_field()?;
        let e = self.euler_field();
        let lhs = self.bracket(self.euler_square()?, delta)?;
        let two = S::from_i64(2);
        let rhs = self
            .quantum_product(e, delta)?
            .scale(&-(two.clone() * self.b1().clone()))
            .try_sub(&self.quantum_product(&self.grading(e), delta)?.scale(&two))?;
        Ok(lhs.compare(&rhs)?)
    }

    /// Associativity and commutativity of `∘` on basis triples, and `γ₁` as
    /// its unit.
    pub fn check_wdvv(&self) -> Result<Verdict, FrobeniusError> {
        let n = self.n();
        let mut verdicts = Vec::new();
        for a in 0..n {
            let ga = self.basis(a);
            verdicts.push(self.quantum_product(&self.basis(0), &ga)?.compare(&ga)?);
            for b in 0..n {
                let gb = self.basis(b);
                let ab = self.quantum_product(&ga, &gb)?;
                verdicts.push(ab.compare(&self.quantum_product(&gb, &ga)?)?);
                for c in b..n {
                    let gc = self.basis(c);
                    let left = self.quantum_product(&ab, &gc)?;
                    let right = self.quantum_product(&ga, &self.quantum_product(&gb, &gc)?)?;
                    verdicts.push(left.compare(&right)?);
                }
            }
        }
        Ok(Verdict::all(verdicts, self.r()))
    }

    /// `Σ G(γ^α)∘γ_α = Σ γ^α∘G(γ_α) = ½Δ`.
    pub fn check_gaua(&self) -> Result<Verdict, FrobeniusError> {
        let mut left = self.zero_field();
        let mut right = self.zero_field();
        for a in 0..self.n() {
            let up = self.raised(a);
            let down = self.basis(a);
            left = left.try_add(&self.quantum_product(&self.grading(&up), &down)?)?;
            right = right.try_add(&self.quantum_product(&up, &self.grading(&down))?)?;
        }
        let half_delta = self.delta_field()?.scale(&S::from_fraction(1, 2));
        Ok(left.compare(&half_delta)?.and(right.compare(&half_delta)?))
    }
}

// ---- truncation-free model identities --------------------------------------

/// `η · η⁻¹ = Id` and symmetry of `η`.
pub fn check_eta_inverse<S: Scalar>(model: &CohomologyModel<S>) -> Verdict {
    let n = model.n();
    for a in 0..n {
        for b in 0..n {
            if model.eta(a, b) != model.eta(b, a) {
                return Verdict::failed(
                    model.curve_rank(),
                    format!("eta not symmetric at ({}, {})", a + 1, b + 1),
                );
            }
            let mut s = S::zero();
            for c in 0..n {
                s += model.eta(a, c).clone() * model.eta_inv(c, b).clone();
            }
            let expected = if a == b { S::one() } else { S::zero() };
            if s != expected {
                return Verdict::failed(
                    model.curve_rank(),
                    format!(
                        "(eta eta^-1)_{}{} = {}",
                        a + 1,
                        b + 1,
                        s.to_fraction_string()
                    ),
                );
            }
        }
    }
    Verdict::exact(true, model.curve_rank())
}

/// `(γ_a∪γ_b)∪γ_c = γ_a∪(γ_b∪γ_c)` through the structure constants.
pub fn check_cup_associativity<S: Scalar>(model: &CohomologyModel<S>) -> Verdict {
    let n = model.n();
    let times = |x: &[S], c: usize| -> Vec<S> {
        let mut out = vec![S::zero(); n];
        for (e, xe) in x.iter().enumerate() {
            if xe.is_zero() {
                continue;
            }
            for (f, k) in model.cup(e, c).iter().enumerate() {
                out[f] += xe.clone() * k.clone();
            }
        }
        out
    };
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let left = times(model.cup(a, b), c);
                let right = times(model.cup(b, c), a);
                if left != right {
                    return Verdict::failed(
                        model.curve_rank(),
                        format!(
                            "cup product not associative on ({}, {}, {})",
                            a + 1,
                            b + 1,
                            c + 1
                        ),
                    );
                }
            }
        }
    }
    Verdict::exact(true, model.curve_rank())
}

/// `b_α + b_β = 1` for every dual pair and `G(γ^α) = (1 − b_α) γ^α`.
pub fn check_dual_grading<S: Scalar>(model: &CohomologyModel<S>) -> Verdict {
    let n = model.n();
    for a in 0..n {
        let up = model.raise_index(a);
        for (b, c) in up.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if model.b(a).clone() + model.b(b).clone() != S::one() {
                return Verdict::failed(
                    model.curve_rank(),
                    format!("b_{} + b_{} != 1", a + 1, b + 1),
                );
            }
            let graded = c.clone() * model.b(b).clone();
            let expected = c.clone() * (S::one() - model.b(a).clone());
            if graded != expected {
                return Verdict::failed(model.curve_rank(), format!("G(gamma^{}) mismatch", a + 1));
            }
        }
    }
    Verdict::exact(true, model.curve_rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_fraction(n, d)
    }

    #[test]
    fn p1_product_and_delta() {
        let pot = builtin::closed_form::<Q>("p1", &Window::truncated(6, 3, 1)).unwrap();
        let calc = Calculus::new(&pot);
        let g2 = calc.basis(1);
        let sq = calc.quantum_product(&g2, &g2).unwrap();
        assert!(sq.component(1).is_zero());
        assert_eq!(sq.component(0).coeff_of(&[0, 2], &[1]), q(1, 2));
        let delta = calc.delta_field().unwrap();
        assert_eq!(delta.component(1).as_constant(), Some(q(2, 1)));
        assert!(delta.component(0).is_zero());
        let e = calc.euler_field();
        assert_eq!(e.component(1).as_constant(), Some(q(2, 1)));
        assert_eq!(e.component(0).coeff_of(&[1, 0], &[0]), q(1, 1));
    }

    #[test]
    fn point_powers() {
        let pot = builtin::closed_form::<Q>("point", &Window::unbounded(0)).unwrap();
        let calc = Calculus::new(&pot);
        let e2 = calc.euler_power(2).unwrap();
        assert_eq!(e2.component(0).coeff_of(&[2], &[]), q(1, 1));
        assert_eq!(e2.component(0).len(), 1);
        assert!(calc.check_bracket_e2_delta().unwrap().pass);
        assert!(calc.check_ddelta_e2().unwrap().pass);
        assert!(calc.correlator(0, &[]).is_err());
    }

    #[test]
    fn p1_checks() {
        let pot = builtin::closed_form::<Q>("p1", &Window::truncated(8, 4, 1)).unwrap();
        let calc = Calculus::new(&pot);
        for k in 1..=3 {
            let v = calc.check_dekd(k).unwrap();
            assert!(v.pass, "k={k}: {}", v.residual);
        }
        assert!(calc.check_wdvv().unwrap().pass);
        assert!(calc.check_gaua().unwrap().pass);
        let g2 = calc.basis(1);
        assert!(calc.check_eg04pt(&g2, &g2).unwrap().pass);
        assert!(calc.check_dhomog(0, &[&g2, &g2]).unwrap().pass);
        assert!(calc.check_dhomog(1, &[&g2]).unwrap().pass);
    }

    #[test]
    fn p2_classical_delta_is_three_points() {
        let model = Arc::new(builtin::p2_model::<Q>());
        let pot = builtin::classical_potential(model);
        let calc = Calculus::new(&pot);
        let delta = calc.delta_field().unwrap();
        assert_eq!(delta.component(2).as_constant(), Some(q(3, 1)));
        assert!(delta.component(0).is_zero() && delta.component(1).is_zero());
        assert!(calc.check_deuler(&calc.basis(2)).unwrap().pass);
    }

    #[test]
    fn model_identities() {
        for name in builtin::NAMES {
            let m = builtin::model::<Q>(name).unwrap();
            assert!(check_eta_inverse(&m).pass);
            assert!(check_cup_associativity(&m).pass);
            assert!(check_dual_grading(&m).pass);
        }
    }
}
