//! Truncated multivariate formal power series with exact coefficients.
//!
//! A [`Series`] in the coordinates `t^1..t^N` carries, for every term, a
//! Novikov tag recording the curve class the term came from. Novikov tags
//! multiply like monomials but are never evaluated. Each series also carries
//! a [`Window`]: the set of monomials at which its coefficients are known to
//! be exact. Operations propagate windows conservatively:
//!
//! * `add`, `mul`: componentwise minimum of the two windows;
//! * `partial_derivative`: the t-degree bound drops by one.
//!
//! Terms outside the window are never stored, and zero coefficients are
//! never stored, so two series are equal iff their term maps and windows are.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use smallvec::SmallVec;
use thiserror::Error;

use crate::model::CohomologyModel;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("shape mismatch: ({0}, {1}) vs ({2}, {3})")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("coordinate index {index} out of range for {n} coordinates")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("empty verification window {0}: more truncation depth requested than available")]
    EmptyWindow(Window),
    #[error("exponential of a nonzero linear form needs a finite t-degree window")]
    UnboundedExpansion,
    #[error("cannot parse series: {0}")]
    Parse(String),
}

/// Upper bound on a degree; `Finite(-1)` and below denote an empty range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bound {
    Finite(i64),
    Unbounded,
}

impl Bound {
    pub fn admits(self, degree: u64) -> bool {
        match self {
            Bound::Finite(b) => (degree as i128) <= b as i128,
            Bound::Unbounded => true,
        }
    }

    pub fn lowered(self, by: i64) -> Bound {
        match self {
            Bound::Finite(b) => Bound::Finite(b - by),
            Bound::Unbounded => Bound::Unbounded,
        }
    }

    pub fn is_empty(self) -> bool {
        matches!(self, Bound::Finite(b) if b < 0)
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Bound::Finite(b) => Some(b),
            Bound::Unbounded => None,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(b) => write!(f, "{b}"),
            Bound::Unbounded => f.write_str("inf"),
        }
    }
}

impl FromStr for Bound {
    type Err = SeriesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" => Ok(Bound::Unbounded),
            other => other
                .parse::<i64>()
                .map(Bound::Finite)
                .map_err(|_| SeriesError::Parse(format!("bad bound `{other}`"))),
        }
    }
}

/// Region of exactness: total t-degree bound plus a componentwise Novikov bound.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Window {
    pub t_degree: Bound,
    pub novikov: Vec<Bound>,
}

impl Window {
    pub fn unbounded(curve_rank: usize) -> Self {
        Window {
            t_degree: Bound::Unbounded,
            novikov: vec![Bound::Unbounded; curve_rank],
        }
    }

    /// Finite window: total t-degree `<= t_max`, every Novikov component `<= d_max`.
    pub fn truncated(t_max: u32, d_max: u32, curve_rank: usize) -> Self {
        Window {
            t_degree: Bound::Finite(t_max as i64),
            novikov: vec![Bound::Finite(d_max as i64); curve_rank],
        }
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.t_degree.admits(m.degree as u64)
            && self
                .novikov
                .iter()
                .zip(&m.q)
                .all(|(b, &e)| b.admits(e as u64))
    }

    pub fn is_empty(&self) -> bool {
        self.t_degree.is_empty() || self.novikov.iter().any(|b| b.is_empty())
    }

    pub fn is_unbounded(&self) -> bool {
        self.t_degree == Bound::Unbounded && self.novikov.iter().all(|b| *b == Bound::Unbounded)
    }

    pub fn meet(&self, other: &Window) -> Window {
        Window {
            t_degree: self.t_degree.min(other.t_degree),
            novikov: self
                .novikov
                .iter()
                .zip(&other.novikov)
                .map(|(a, b)| *a.min(b))
                .collect(),
        }
    }

    pub fn lowered(&self, by: i64) -> Window {
        Window {
            t_degree: self.t_degree.lowered(by),
            novikov: self.novikov.clone(),
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t<={},q<=[", self.t_degree)?;
        for (i, b) in self.novikov.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for Window {
    type Err = SeriesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SeriesError::Parse(format!("bad window `{s}`"));
        let rest = s.trim().strip_prefix("t<=").ok_or_else(bad)?;
        let (t, rest) = rest.split_once(",q<=[").ok_or_else(bad)?;
        let inner = rest.strip_suffix(']').ok_or_else(bad)?;
        let novikov = if inner.is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(Bound::from_str)
                .collect::<Result<_, _>>()?
        };
        Ok(Window {
            t_degree: t.parse()?,
            novikov,
        })
    }
}

/// Exponent vector in the coordinates plus a Novikov (curve class) tag.
///
/// The derived ordering is graded lexicographic: total t-degree first, then
/// the t exponents, then the Novikov exponents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    degree: u32,
    t: SmallVec<[u32; 4]>,
    q: SmallVec<[u32; 2]>,
}

impl Monomial {
    pub fn new(t: &[u32], q: &[u32]) -> Self {
        Monomial {
            degree: t.iter().sum(),
            t: SmallVec::from_slice(t),
            q: SmallVec::from_slice(q),
        }
    }

    pub fn one(n_vars: usize, n_novikov: usize) -> Self {
        Monomial {
            degree: 0,
            t: SmallVec::from_elem(0, n_vars),
            q: SmallVec::from_elem(0, n_novikov),
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn t_exponents(&self) -> &[u32] {
        &self.t
    }

    pub fn novikov(&self) -> &[u32] {
        &self.q
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial {
            degree: self.degree + other.degree,
            t: self.t.iter().zip(&other.t).map(|(a, b)| a + b).collect(),
            q: self.q.iter().zip(&other.q).map(|(a, b)| a + b).collect(),
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, e) in self.t.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("|")?;
        for (i, e) in self.q.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

fn parse_exponents(text: &str) -> Result<Vec<u32>, SeriesError> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|e| {
            e.parse::<u32>()
                .map_err(|_| SeriesError::Parse(format!("bad exponent `{e}`")))
        })
        .collect()
}

/// A truncated formal power series over `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct Series<S> {
    n_vars: usize,
    n_novikov: usize,
    terms: BTreeMap<Monomial, S>,
    window: Window,
}

/// Outcome of comparing two series inside their common window.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison<S> {
    pub equal: bool,
    pub window: Window,
    /// `lhs - rhs` restricted to the window; zero iff `equal`.
    pub residual: Series<S>,
}

impl<S: Scalar> Series<S> {
    pub fn zero(n_vars: usize, n_novikov: usize, window: Window) -> Self {
        debug_assert_eq!(window.novikov.len(), n_novikov);
        Series {
            n_vars,
            n_novikov,
            terms: BTreeMap::new(),
            window,
        }
    }

    /// The constant `c` as an exact polynomial.
    pub fn constant(n_vars: usize, n_novikov: usize, c: S) -> Self {
        let mut s = Series::zero(n_vars, n_novikov, Window::unbounded(n_novikov));
        if !c.is_zero() {
            s.terms.insert(Monomial::one(n_vars, n_novikov), c);
        }
        s
    }

    pub fn one(n_vars: usize, n_novikov: usize) -> Self {
        Series::constant(n_vars, n_novikov, S::one())
    }

    /// The coordinate function `t^alpha` (0-based) as an exact polynomial.
    pub fn coordinate(n_vars: usize, n_novikov: usize, alpha: usize) -> Result<Self, SeriesError> {
        if alpha >= n_vars {
            return Err(SeriesError::IndexOutOfRange {
                index: alpha,
                n: n_vars,
            });
        }
        let mut t = vec![0; n_vars];
        t[alpha] = 1;
        Ok(Series::from_terms(
            n_vars,
            n_novikov,
            Window::unbounded(n_novikov),
            [(Monomial::new(&t, &vec![0; n_novikov]), S::one())],
        ))
    }

    /// Builds a series from terms, summing duplicates and dropping zeros and
    /// anything outside `window`.
    pub fn from_terms<I>(n_vars: usize, n_novikov: usize, window: Window, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, S)>,
    {
        let mut s = Series::zero(n_vars, n_novikov, window);
        for (m, c) in terms {
            assert_eq!(
                m.t.len(),
                n_vars,
                "monomial has wrong number of coordinates"
            );
            assert_eq!(m.q.len(), n_novikov, "monomial has wrong Novikov rank");
            s.accumulate(m, c);
        }
        s.normalize();
        s
    }

    fn accumulate(&mut self, m: Monomial, c: S) {
        if !self.window.contains(&m) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => *slot += &c,
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn normalize(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_novikov(&self) -> usize {
        self.n_novikov
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when no term is stored (the series vanishes inside its window).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    /// Coefficient by exponent vectors.
    pub fn coeff_of(&self, t: &[u32], q: &[u32]) -> S {
        self.coeff(&Monomial::new(t, q))
    }

    /// The constant term, if the series is exactly a constant.
    pub fn as_constant(&self) -> Option<S> {
        match self.terms.len() {
            0 => Some(S::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree == 0 && m.q.iter().all(|&e| e == 0)).then(|| c.clone())
            }
            _ => None,
        }
    }

    fn check_shape(&self, other: &Series<S>) -> Result<(), SeriesError> {
        if self.n_vars != other.n_vars || self.n_novikov != other.n_novikov {
            return Err(SeriesError::ShapeMismatch(
                self.n_vars,
                self.n_novikov,
                other.n_vars,
                other.n_novikov,
            ));
        }
        Ok(())
    }

    /// Narrows the window, dropping any terms that fall outside it.
    pub fn truncate(&self, window: &Window) -> Series<S> {
        let window = self.window.meet(window);
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| window.contains(m))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Series {
            n_vars: self.n_vars,
            n_novikov: self.n_novikov,
            terms,
            window,
        }
    }

    pub fn try_add(&self, other: &Series<S>) -> Result<Series<S>, SeriesError> {
        self.check_shape(other)?;
        let mut out = self.truncate(&other.window);
        for (m, c) in &other.terms {
            out.accumulate(m.clone(), c.clone());
        }
        out.normalize();
        Ok(out)
    }

    pub fn try_sub(&self, other: &Series<S>) -> Result<Series<S>, SeriesError> {
        self.try_add(&other.neg_ref())
    }

    /// Cauchy product. Pairs whose product leaves the result window are
    /// skipped without being formed.
    pub fn try_mul(&self, other: &Series<S>) -> Result<Series<S>, SeriesError> {
        self.check_shape(other)?;
        let window = self.window.meet(&other.window);
        if let Some(c) = self.as_constant() {
            return Ok(other.scale(&c).truncate(&window));
        }
        if let Some(c) = other.as_constant() {
            return Ok(self.scale(&c).truncate(&window));
        }
        let t_bound = window.t_degree.finite();
        let mut acc: BTreeMap<Monomial, S> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            if let Some(b) = t_bound {
                if ma.degree as i64 > b {
                    break;
                }
            }
            for (mb, cb) in &other.terms {
                if let Some(b) = t_bound {
                    if (ma.degree + mb.degree) as i64 > b {
                        break;
                    }
                }
                let novikov_ok = window
                    .novikov
                    .iter()
                    .zip(ma.q.iter().zip(&mb.q))
                    .all(|(bound, (x, y))| bound.admits((x + y) as u64));
                if !novikov_ok {
                    continue;
                }
                let m = ma.times(mb);
                let mut c = ca.clone();
                c *= cb;
                match acc.get_mut(&m) {
                    Some(slot) => *slot += &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let mut out = Series {
            n_vars: self.n_vars,
            n_novikov: self.n_novikov,
            terms: acc,
            window,
        };
        out.normalize();
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Series<S> {
        if c.is_zero() {
            return Series::zero(self.n_vars, self.n_novikov, self.window.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, x)| {
                let mut y = x.clone();
                y *= c;
                (m.clone(), y)
            })
            .collect();
        Series {
            n_vars: self.n_vars,
            n_novikov: self.n_novikov,
            terms,
            window: self.window.clone(),
        }
    }

    fn neg_ref(&self) -> Series<S> {
        self.scale(&-S::one())
    }

    /// Formal `∂/∂t^alpha` (0-based index).
    pub fn partial_derivative(&self, alpha: usize) -> Result<Series<S>, SeriesError> {
        if alpha >= self.n_vars {
            return Err(SeriesError::IndexOutOfRange {
                index: alpha,
                n: self.n_vars,
            });
        }
        let window = self.window.lowered(1);
        let mut out = Series::zero(self.n_vars, self.n_novikov, window);
        for (m, c) in &self.terms {
            let e = m.t[alpha];
            if e == 0 {
                continue;
            }
            let mut t = m.t.clone();
            t[alpha] -= 1;
            let dm = Monomial {
                degree: m.degree - 1,
                t,
                q: m.q.clone(),
            };
            let mut dc = c.clone();
            dc *= &S::from_i64(e as i64);
            out.accumulate(dm, dc);
        }
        out.normalize();
        Ok(out)
    }

    /// Evaluates the listed coordinates at zero (a ring homomorphism; it does
    /// not commute with differentiation in those coordinates).
    pub fn vanish_coordinates(&self, coords: &[usize]) -> Series<S> {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| coords.iter().all(|&i| m.t[i] == 0))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Series {
            n_vars: self.n_vars,
            n_novikov: self.n_novikov,
            terms,
            window: self.window.clone(),
        }
    }

    /// Agreement on every monomial of the common window.
    pub fn equal_within_window(&self, other: &Series<S>) -> Result<(bool, Window), SeriesError> {
        let c = self.compare(other)?;
        Ok((c.equal, c.window))
    }

    pub fn compare(&self, other: &Series<S>) -> Result<Comparison<S>, SeriesError> {
        self.check_shape(other)?;
        let window = self.window.meet(&other.window);
        if window.is_empty() {
            return Err(SeriesError::EmptyWindow(window));
        }
        let residual = self.try_sub(other)?.truncate(&window);
        Ok(Comparison {
            equal: residual.is_zero(),
            window,
            residual,
        })
    }

    /// Truncated `exp(Σ w_i t^{i}) · q^novikov`.
    pub fn exp_linear(
        n_vars: usize,
        novikov: &[u32],
        weights: &[(usize, S)],
        window: &Window,
    ) -> Result<Series<S>, SeriesError> {
        let n_novikov = novikov.len();
        let weights: Vec<(usize, S)> = weights
            .iter()
            .filter(|(_, w)| !w.is_zero())
            .cloned()
            .collect();
        for (i, _) in &weights {
            if *i >= n_vars {
                return Err(SeriesError::IndexOutOfRange {
                    index: *i,
                    n: n_vars,
                });
            }
        }
        let mut out = Series::zero(n_vars, n_novikov, window.clone());
        let tag = Monomial::new(&vec![0; n_vars], novikov);
        if !window.contains(&tag) {
            return Ok(out);
        }
        if weights.is_empty() {
            out.terms.insert(tag, S::one());
            return Ok(out);
        }
        let max_degree = window
            .t_degree
            .finite()
            .ok_or(SeriesError::UnboundedExpansion)?;
        // Each exponent vector e contributes Π w_i^{e_i} / e_i!.
        let mut exps = vec![0u32; weights.len()];
        loop {
            let mut t = vec![0u32; n_vars];
            let mut c = S::one();
            for ((i, w), &e) in weights.iter().zip(&exps) {
                t[*i] += e;
                for _ in 0..e {
                    c *= w;
                }
                c /= S::factorial(e);
            }
            out.accumulate(Monomial::new(&t, novikov), c);

            // Odometer over exponent vectors of total degree <= max_degree.
            let total: i64 = exps.iter().map(|&e| e as i64).sum();
            let mut k = 0;
            if total < max_degree {
                exps[0] += 1;
            } else {
                loop {
                    if k + 1 >= exps.len() {
                        out.normalize();
                        return Ok(out);
                    }
                    exps[k] = 0;
                    k += 1;
                    let total: i64 = exps.iter().map(|&e| e as i64).sum();
                    if total < max_degree {
                        exps[k] += 1;
                        break;
                    }
                }
            }
        }
    }
}

/// `exp(Σ_δ (β·D_δ) t^δ) q^β`, the divisor-equation factor of class `beta`,
/// truncated to `window`. `D_δ` ranges over the (1,1) basis classes.
pub fn divisor_exponential<S: Scalar>(
    model: &CohomologyModel<S>,
    beta: &[u32],
    window: &Window,
) -> Result<Series<S>, SeriesError> {
    let weights: Vec<(usize, S)> = model
        .divisor_classes()
        .iter()
        .map(|&delta| (delta, model.curve_pairing(beta, delta)))
        .collect();
    Series::exp_linear(model.n(), beta, &weights, window)
}

impl<S: Scalar> Add for &Series<S> {
    type Output = Series<S>;

    /// Panics on shape mismatch; use [`Series::try_add`] for a checked sum.
    fn add(self, rhs: &Series<S>) -> Series<S> {
        self.try_add(rhs).expect("series shape mismatch")
    }
}

impl<S: Scalar> Sub for &Series<S> {
    type Output = Series<S>;

    fn sub(self, rhs: &Series<S>) -> Series<S> {
        self.try_sub(rhs).expect("series shape mismatch")
    }
}

impl<S: Scalar> Mul for &Series<S> {
    type Output = Series<S>;

    fn mul(self, rhs: &Series<S>) -> Series<S> {
        self.try_mul(rhs).expect("series shape mismatch")
    }
}

impl<S: Scalar> Neg for &Series<S> {
    type Output = Series<S>;

    fn neg(self) -> Series<S> {
        self.neg_ref()
    }
}

impl<S: Scalar> fmt::Display for Series<S> {
    /// `series(N=2,r=1,t<=8,q<=[4]) [2,1|0]:1/2 [0,0|1]:1/1`, terms in
    /// graded lexicographic order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "series(N={},r={},{})",
            self.n_vars, self.n_novikov, self.window
        )?;
        for (m, c) in &self.terms {
            write!(f, " {m}:{}", c.to_fraction_string())?;
        }
        Ok(())
    }
}

impl<S: Scalar> FromStr for Series<S> {
    type Err = SeriesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |what: &str| SeriesError::Parse(what.to_string());
        let s = s.trim();
        let header = s
            .strip_prefix("series(N=")
            .ok_or_else(|| bad("missing header"))?;
        let close = header.find(')').ok_or_else(|| bad("unterminated header"))?;
        // The window contains ')' never, but does contain ']' and ','.
        let (head, body) = (&header[..close], &header[close + 1..]);
        let (n, rest) = head.split_once(",r=").ok_or_else(|| bad("missing rank"))?;
        let (r, window) = rest.split_once(',').ok_or_else(|| bad("missing window"))?;
        let n: usize = n.parse().map_err(|_| bad("bad N"))?;
        let r: usize = r.parse().map_err(|_| bad("bad r"))?;
        let window: Window = window.parse()?;
        if window.novikov.len() != r {
            return Err(bad("window rank disagrees with r"));
        }
        let mut terms = Vec::new();
        for token in body.split_whitespace() {
            let (mono, coeff) = token
                .strip_prefix('[')
                .and_then(|t| t.split_once("]:"))
                .ok_or_else(|| bad("bad term"))?;
            let (t, q) = mono.split_once('|').ok_or_else(|| bad("bad monomial"))?;
            let t = parse_exponents(t)?;
            let q = parse_exponents(q)?;
            if t.len() != n || q.len() != r {
                return Err(bad("monomial shape disagrees with header"));
            }
            let c = S::parse_fraction(coeff).ok_or_else(|| bad("bad coefficient"))?;
            terms.push((Monomial::new(&t, &q), c));
        }
        Ok(Series::from_terms(n, r, window, terms))
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

    fn var(n: usize, r: usize, i: usize) -> Series<Q> {
        Series::coordinate(n, r, i).unwrap()
    }

    fn exp_t(n: usize, i: usize, t_max: u32) -> Series<Q> {
        let w = Window {
            t_degree: Bound::Finite(t_max as i64),
            novikov: vec![],
        };
        Series::exp_linear(n, &[], &[(i, Q::from_i64(1))], &w).unwrap()
    }

    #[test]
    fn additive_inverse_is_zero() {
        let a = var(2, 0, 0);
        let s = &a + &(-&a);
        assert!(s.is_zero());
        assert!(s.window().is_unbounded());
    }

    #[test]
    fn sum_takes_smaller_window() {
        let t2 = var(2, 0, 1).truncate(&Window {
            t_degree: Bound::Finite(3),
            novikov: vec![],
        });
        let t2sq = (&var(2, 0, 1) * &var(2, 0, 1)).truncate(&Window {
            t_degree: Bound::Finite(5),
            novikov: vec![],
        });
        let s = &t2 + &t2sq;
        assert_eq!(s.window().t_degree, Bound::Finite(3));
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn doubling_exponential() {
        let e = exp_t(2, 1, 4);
        let s = &e + &e;
        let expected = [q(2, 1), q(2, 1), q(1, 1), q(1, 3), q(1, 12)];
        for (k, c) in expected.iter().enumerate() {
            assert_eq!(s.coeff_of(&[0, k as u32], &[]), *c);
        }
        assert_eq!(s.len(), 5);
    }

    #[test]
    fn product_of_coordinates() {
        let p = &var(2, 0, 0) * &var(2, 0, 1);
        assert_eq!(p.coeff_of(&[1, 1], &[]), q(1, 1));
        assert_eq!(p.len(), 1);
        assert!(p.window().is_unbounded());
    }

    #[test]
    fn product_drops_terms_outside_window() {
        let w = Window {
            t_degree: Bound::Finite(1),
            novikov: vec![],
        };
        let a = (&Series::one(2, 0) + &var(2, 0, 1)).truncate(&w);
        let p = &a * &a;
        assert_eq!(p.coeff_of(&[0, 0], &[]), q(1, 1));
        assert_eq!(p.coeff_of(&[0, 1], &[]), q(2, 1));
        assert_eq!(p.len(), 2);
        assert_eq!(p.window().t_degree, Bound::Finite(1));
    }

    #[test]
    fn novikov_exponents_add() {
        let w = Window::truncated(4, 3, 1);
        let a = Series::<Q>::from_terms(1, 1, w.clone(), [(Monomial::new(&[0], &[1]), q(1, 1))]);
        let p = &a * &a;
        assert_eq!(p.coeff_of(&[0], &[2]), q(1, 1));
        let p3 = &(&p * &a) * &a;
        assert!(p3.is_zero(), "q^4 lies outside the Novikov window");
    }

    #[test]
    fn derivative_of_monomial() {
        // ∂/∂t¹ of ½(t¹)²t² = t¹t²
        let f = Series::<Q>::from_terms(
            2,
            0,
            Window::unbounded(0),
            [(Monomial::new(&[2, 1], &[]), q(1, 2))],
        );
        let d = f.partial_derivative(0).unwrap();
        assert_eq!(d.coeff_of(&[1, 1], &[]), q(1, 1));
        assert_eq!(d.len(), 1);
        assert!(f.partial_derivative(2).is_err());
    }

    #[test]
    fn derivative_shrinks_window() {
        let e = exp_t(2, 1, 4);
        let d = e.partial_derivative(1).unwrap();
        assert_eq!(d, exp_t(2, 1, 3));
        let z = e.partial_derivative(0).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn comparison_ignores_terms_outside_window() {
        let w3 = Window {
            t_degree: Bound::Finite(3),
            novikov: vec![],
        };
        let w5 = Window {
            t_degree: Bound::Finite(5),
            novikov: vec![],
        };
        let a = var(1, 0, 0).truncate(&w3);
        let t5 = Series::<Q>::from_terms(1, 0, w5.clone(), [(Monomial::new(&[5], &[]), q(1, 1))]);
        let b = &var(1, 0, 0).truncate(&w5) + &t5;
        let (eq, w) = a.equal_within_window(&b).unwrap();
        assert!(eq);
        assert_eq!(w.t_degree, Bound::Finite(3));

        let (eq, _) = Series::zero(1, 0, Window::unbounded(0))
            .equal_within_window(&var(1, 0, 0))
            .unwrap();
        assert!(!eq);
    }

    #[test]
    fn empty_window_is_an_error() {
        let w = Window {
            t_degree: Bound::Finite(0),
            novikov: vec![],
        };
        let a = var(1, 0, 0).truncate(&w);
        let d = a.partial_derivative(0).unwrap();
        assert!(matches!(d.compare(&d), Err(SeriesError::EmptyWindow(_))));
    }

    #[test]
    fn shape_mismatch_reported() {
        let a = var(2, 0, 0);
        let b = var(3, 0, 0);
        assert!(matches!(a.try_add(&b), Err(SeriesError::ShapeMismatch(..))));
        assert!(matches!(a.try_mul(&b), Err(SeriesError::ShapeMismatch(..))));
    }

    #[test]
    fn exp_linear_two_weights() {
        // exp(t1 + 2 t2) up to degree 2: 1 + t1 + 2t2 + t1²/2 + 2 t1 t2 + 2 t2²
        let w = Window {
            t_degree: Bound::Finite(2),
            novikov: vec![],
        };
        let e = Series::<Q>::exp_linear(2, &[], &[(0, q(1, 1)), (1, q(2, 1))], &w).unwrap();
        assert_eq!(e.len(), 6);
        assert_eq!(e.coeff_of(&[1, 1], &[]), q(2, 1));
        assert_eq!(e.coeff_of(&[0, 2], &[]), q(2, 1));
        assert_eq!(e.coeff_of(&[2, 0], &[]), q(1, 2));
    }

    #[test]
    fn exp_needs_finite_window() {
        let r = Series::<Q>::exp_linear(1, &[], &[(0, q(1, 1))], &Window::unbounded(0));
        assert_eq!(r, Err(SeriesError::UnboundedExpansion));
    }

    #[test]
    fn text_round_trip() {
        let w = Window::truncated(4, 2, 1);
        let s = Series::<Q>::from_terms(
            2,
            1,
            w,
            [
                (Monomial::new(&[2, 1], &[0]), q(1, 2)),
                (Monomial::new(&[0, 0], &[1]), q(-3, 7)),
            ],
        );
        let text = s.to_string();
        assert_eq!(text, "series(N=2,r=1,t<=4,q<=[2]) [0,0|1]:-3/7 [2,1|0]:1/2");
        let back: Series<Q> = text.parse().unwrap();
        assert_eq!(back, s);
        let empty: Series<Q> = "series(N=1,r=0,t<=inf,q<=[])".parse().unwrap();
        assert!(empty.is_zero());
    }
}
