//! Functions on a group: dense evaluation tables and the structured solution
//! forms (positive and Hermitian), with evaluation and synthesis.
//!
//! Real-valued biadditive and additive functions vanish on torsion (a finite
//! subgroup of the reals is trivial), so [`QuadraticForm`] and
//! [`AdditiveMap`] only store their free-coordinate block; torsion slots are
//! zero by construction.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::group::{fmt_coords, CosetIndex, Domain, GroupElement, GroupError, GroupSpec, SubgroupSpec, Window};
use crate::numeric::{rat, wrap_turn, Rational, Real, Value, DEFAULT_TOL};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("table has {got} values but its domain has {expected} points")]
    WrongSize { expected: usize, got: usize },
    #[error("value {value} at {point} is not allowed in a {kind} table")]
    BadValue {
        kind: Kind,
        point: String,
        value: String,
    },
    #[error("point {0} listed twice")]
    DuplicatePoint(String),
    #[error("point {0} is outside the domain")]
    OutsideDomain(String),
    #[error("tables live on different windows")]
    WindowMismatch,
    #[error("{0}")]
    Invalid(String),
    #[error("malformed table JSON: {0}")]
    Json(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    #[serde(alias = "positivereal", alias = "positive_real")]
    Positive,
    Complex,
    Sign,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Positive => "positive",
            Kind::Complex => "complex",
            Kind::Sign => "sign",
        })
    }
}

/// Dense table of function values over a [`Window`].
#[derive(Clone, Debug, PartialEq)]
pub struct FuncTable {
    window: Window,
    kind: Kind,
    values: Vec<Value>,
}

impl FuncTable {
    pub fn new(window: Window, kind: Kind, values: Vec<Value>) -> Result<Self, ModelError> {
        if values.len() != window.len() {
            return Err(ModelError::WrongSize {
                expected: window.len(),
                got: values.len(),
            });
        }
        let mut values = values;
        for (i, v) in values.iter_mut().enumerate() {
            let ok = match kind {
                Kind::Complex => true,
                Kind::Positive => match v {
                    Value::Zero => false,
                    Value::Polar { turn, .. } => turn == &Rational::from_integer(0),
                    Value::Approx(z) => z.im == 0.0 && z.re > 0.0,
                },
                Kind::Sign => match v.as_sign(0.0) {
                    Some(neg) => {
                        *v = Value::sign(neg);
                        true
                    }
                    None => false,
                },
            };
            if !ok {
                return Err(ModelError::BadValue {
                    kind,
                    point: fmt_coords(window.coords(i)),
                    value: v.to_string(),
                });
            }
        }
        Ok(FuncTable {
            window,
            kind,
            values,
        })
    }

    pub fn from_fn(
        window: Window,
        kind: Kind,
        f: impl Fn(&[i64]) -> Value,
    ) -> Result<Self, ModelError> {
        let values = (0..window.len()).map(|i| f(window.coords(i))).collect();
        Self::new(window, kind, values)
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn group(&self) -> &GroupSpec {
        self.window.group()
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn at(&self, idx: usize) -> &Value {
        &self.values[idx]
    }

    pub fn get(&self, x: &GroupElement) -> Option<&Value> {
        self.window.index_of(&x.0).map(|i| &self.values[i])
    }

    pub fn is_exact(&self) -> bool {
        self.values.iter().all(Value::is_exact)
    }

    /// Same values, different kind label (revalidated).
    pub fn with_kind(&self, kind: Kind) -> Result<Self, ModelError> {
        Self::new(self.window.clone(), kind, self.values.clone())
    }

    /// Replaces the value at one point.
    pub fn with_value(&self, x: &GroupElement, v: Value) -> Result<Self, ModelError> {
        let idx = self
            .window
            .index_of(&x.0)
            .ok_or_else(|| ModelError::OutsideDomain(x.to_string()))?;
        let mut values = self.values.clone();
        values[idx] = v;
        Self::new(self.window.clone(), self.kind, values)
    }

    /// Restricts to a smaller box window of the same group.
    pub fn restrict(&self, window: &Window) -> Result<Self, ModelError> {
        if window.group() != self.group() {
            return Err(ModelError::WindowMismatch);
        }
        let values = (0..window.len())
            .map(|i| {
                self.window
                    .index_of(window.coords(i))
                    .map(|j| self.values[j].clone())
                    .ok_or_else(|| ModelError::OutsideDomain(fmt_coords(window.coords(i))))
            })
            .collect::<Result<_, _>>()?;
        Self::new(window.clone(), self.kind, values)
    }

    /// `log |f|`; fails on zeros.
    pub fn log_modulus(&self) -> Result<RealTable, ModelError> {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.log_modulus().map(Some).ok_or_else(|| ModelError::BadValue {
                    kind: self.kind,
                    point: fmt_coords(self.window.coords(i)),
                    value: v.to_string(),
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(RealTable {
            window: self.window.clone(),
            values,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let values: Vec<serde_json::Value> = (0..self.window.len())
            .map(|i| json!([self.window.coords(i), self.values[i].to_json()]))
            .collect();
        json!({
            "group": self.group().to_string(),
            "domain": self.window.domain(),
            "kind": self.kind,
            "values": values,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, ModelError> {
        let jerr = |m: &str| ModelError::Json(m.to_string());
        let group: GroupSpec = v
            .get("group")
            .and_then(|g| g.as_str())
            .ok_or_else(|| jerr("missing \"group\""))?
            .parse()?;
        let domain: Domain = match v.get("domain") {
            Some(d) => serde_json::from_value(d.clone()).map_err(|e| jerr(&e.to_string()))?,
            None => Domain::Full,
        };
        let kind: Kind = serde_json::from_value(v.get("kind").cloned().ok_or_else(|| jerr("missing \"kind\""))?)
            .map_err(|e| jerr(&e.to_string()))?;
        let window = Window::new(group.clone(), domain)?;
        let entries = v
            .get("values")
            .and_then(|x| x.as_array())
            .ok_or_else(|| jerr("missing \"values\" array"))?;
        let mut slots: Vec<Option<Value>> = vec![None; window.len()];
        for entry in entries {
            let pair = entry
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| jerr("each value must be [coords, value]"))?;
            let coords: Vec<i64> =
                serde_json::from_value(pair[0].clone()).map_err(|e| jerr(&e.to_string()))?;
            let x = group.element(&coords)?;
            let idx = window
                .index_of(&x.0)
                .ok_or_else(|| ModelError::OutsideDomain(x.to_string()))?;
            if slots[idx].is_some() {
                return Err(ModelError::DuplicatePoint(x.to_string()));
            }
            slots[idx] = Some(Value::from_json(&pair[1]).map_err(ModelError::Json)?);
        }
        let values = slots
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| jerr(&format!("no value for {}", fmt_coords(window.coords(i))))))
            .collect::<Result<_, _>>()?;
        Self::new(window, kind, values)
    }
}

/// Real-valued table; points may be undefined (differences shrink domains).
#[derive(Clone, Debug, PartialEq)]
pub struct RealTable {
    window: Window,
    values: Vec<Option<Real>>,
}

impl RealTable {
    pub fn new(window: Window, values: Vec<Option<Real>>) -> Result<Self, ModelError> {
        if values.len() != window.len() {
            return Err(ModelError::WrongSize {
                expected: window.len(),
                got: values.len(),
            });
        }
        Ok(RealTable { window, values })
    }

    pub fn from_fn(window: Window, f: impl Fn(&[i64]) -> Real) -> Self {
        let values = (0..window.len()).map(|i| Some(f(window.coords(i)))).collect();
        RealTable { window, values }
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn group(&self) -> &GroupSpec {
        self.window.group()
    }

    pub fn values(&self) -> &[Option<Real>] {
        &self.values
    }

    pub fn at(&self, idx: usize) -> Option<&Real> {
        self.values[idx].as_ref()
    }

    pub fn get(&self, x: &[i64]) -> Option<&Real> {
        self.window.index_of(x).and_then(|i| self.values[i].as_ref())
    }

    pub fn defined_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }

    pub fn is_exact(&self) -> bool {
        self.values.iter().flatten().all(Real::is_exact)
    }

    pub fn map(&self, f: impl Fn(&[i64], &Real) -> Real) -> RealTable {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| v.as_ref().map(|r| f(self.window.coords(i), r)))
            .collect();
        RealTable {
            window: self.window.clone(),
            values,
        }
    }

    pub fn zip_with(
        &self,
        other: &RealTable,
        f: impl Fn(&Real, &Real) -> Real,
    ) -> Result<RealTable, ModelError> {
        if self.window != other.window {
            return Err(ModelError::WindowMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => Some(f(a, b)),
                _ => None,
            })
            .collect();
        Ok(RealTable {
            window: self.window.clone(),
            values,
        })
    }
}

/// Splits `T` into `T_even(x) = (T(x)+T(-x))/2` and `T_odd(x) = (T(x)-T(-x))/2`.
pub fn table_even_odd_split(t: &RealTable) -> (RealTable, RealTable) {
    let w = &t.window;
    let half = rat(1, 2);
    let mut even = Vec::with_capacity(w.len());
    let mut odd = Vec::with_capacity(w.len());
    for i in 0..w.len() {
        match (t.at(i), t.at(w.neg(i))) {
            (Some(a), Some(b)) => {
                even.push(Some((a + b).scale(&half)));
                odd.push(Some((a - b).scale(&half)));
            }
            _ => {
                even.push(None);
                odd.push(None);
            }
        }
    }
    (
        RealTable {
            window: w.clone(),
            values: even,
        },
        RealTable {
            window: w.clone(),
            values: odd,
        },
    )
}

/// `P(x) = Σ B_ij x_i x_j` over free coordinates, `B` symmetric.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticForm {
    matrix: Vec<Vec<Real>>,
}

impl QuadraticForm {
    pub fn zero(rank: usize) -> Self {
        QuadraticForm {
            matrix: vec![vec![Real::zero(); rank]; rank],
        }
    }

    pub fn new(matrix: Vec<Vec<Real>>) -> Result<Self, ModelError> {
        let n = matrix.len();
        if matrix.iter().any(|row| row.len() != n) {
            return Err(ModelError::Invalid("quadratic form matrix must be square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if !matrix[i][j].close_to(&matrix[j][i], DEFAULT_TOL) {
                    return Err(ModelError::Invalid(format!(
                        "quadratic form matrix is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(QuadraticForm { matrix })
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<Real>] {
        &self.matrix
    }

    /// Entry over all coordinates; torsion rows and columns are zero.
    pub fn entry(&self, i: usize, j: usize) -> Real {
        if i < self.rank() && j < self.rank() {
            self.matrix[i][j].clone()
        } else {
            Real::zero()
        }
    }

    /// Associated symmetric biadditive function `A(x, y) = xᵀ B y`.
    pub fn biadditive(&self, x: &[i64], y: &[i64]) -> Real {
        let mut acc = Real::zero();
        for i in 0..self.rank() {
            if x[i] == 0 {
                continue;
            }
            for j in 0..self.rank() {
                if y[j] != 0 {
                    acc = &acc + &self.matrix[i][j].scale(&Rational::from_integer((x[i] * y[j]) as i128));
                }
            }
        }
        acc
    }

    pub fn eval(&self, x: &[i64]) -> Real {
        self.biadditive(x, x)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.matrix.iter().flatten().all(|e| e.is_zero_within(tol))
    }

    pub fn close_to(&self, other: &QuadraticForm, tol: f64) -> bool {
        self.rank() == other.rank()
            && self
                .matrix
                .iter()
                .flatten()
                .zip(other.matrix.iter().flatten())
                .all(|(a, b)| a.close_to(b, tol))
    }
}

/// `l(x) = Σ c_j x_j` over free coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdditiveMap {
    coeffs: Vec<Real>,
}

impl AdditiveMap {
    pub fn zero(rank: usize) -> Self {
        AdditiveMap {
            coeffs: vec![Real::zero(); rank],
        }
    }

    pub fn new(coeffs: Vec<Real>) -> Self {
        AdditiveMap { coeffs }
    }

    pub fn coeffs(&self) -> &[Real] {
        &self.coeffs
    }

    pub fn eval(&self, x: &[i64]) -> Real {
        self.coeffs
            .iter()
            .zip(x)
            .filter(|(_, &xi)| xi != 0)
            .fold(Real::zero(), |acc, (c, &xi)| {
                &acc + &c.scale(&Rational::from_integer(xi as i128))
            })
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.is_zero_within(tol))
    }

    pub fn close_to(&self, other: &AdditiveMap, tol: f64) -> bool {
        self.coeffs.len() == other.coeffs.len()
            && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a.close_to(b, tol))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CosetEntry<T> {
    pub coset: Vec<i64>,
    pub value: T,
}

/// Function constant on cosets of `X^(2)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CosetConstantMap {
    entries: Vec<CosetEntry<Real>>,
}

impl CosetConstantMap {
    pub const MODULUS: u32 = 2;

    pub fn zero(group: &GroupSpec) -> Self {
        Self::from_fn(group, |_| Real::zero())
    }

    pub fn from_fn(group: &GroupSpec, f: impl Fn(&CosetIndex) -> Real) -> Self {
        let entries = group
            .coset_indices(Self::MODULUS)
            .into_iter()
            .map(|idx| CosetEntry {
                value: f(&idx),
                coset: idx.residues,
            })
            .collect();
        CosetConstantMap { entries }
    }

    pub fn entries(&self) -> &[CosetEntry<Real>] {
        &self.entries
    }

    pub fn get(&self, idx: &CosetIndex) -> Option<&Real> {
        self.entries
            .binary_search_by(|e| e.coset.cmp(&idx.residues))
            .ok()
            .map(|i| &self.entries[i].value)
    }

    pub fn eval(&self, group: &GroupSpec, x: &[i64]) -> Real {
        let idx = group.coset_index_of(x, Self::MODULUS);
        self.get(&idx).cloned().unwrap_or_else(Real::zero)
    }

    pub fn negated(&self) -> Self {
        CosetConstantMap {
            entries: self
                .entries
                .iter()
                .map(|e| CosetEntry {
                    coset: e.coset.clone(),
                    value: -&e.value,
                })
                .collect(),
        }
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.entries.iter().all(|e| e.value.is_zero_within(tol))
    }

    pub fn close_to(&self, other: &CosetConstantMap, tol: f64) -> bool {
        self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.coset == b.coset && a.value.close_to(&b.value, tol))
    }

    pub fn validate(&self, group: &GroupSpec) -> Result<(), ModelError> {
        let expected = group.coset_indices(Self::MODULUS);
        if expected.len() != self.entries.len()
            || expected.iter().zip(&self.entries).any(|(a, b)| a.residues != b.coset)
        {
            return Err(ModelError::Invalid(format!(
                "coset map must list the {} cosets of X^(2) in order",
                expected.len()
            )));
        }
        Ok(())
    }
}

/// Character `α(x) = exp{2πi(Σ θ_j x_j + Σ k_i x_i / n_i)}` with rational
/// free turns `θ_j` and torsion exponents `k_i ∈ [0, n_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterSpec {
    #[serde(with = "rational_vec")]
    pub free_turns: Vec<Rational>,
    pub torsion_exponents: Vec<u64>,
}

impl CharacterSpec {
    pub fn trivial(group: &GroupSpec) -> Self {
        CharacterSpec {
            free_turns: vec![Rational::from_integer(0); group.rank()],
            torsion_exponents: vec![0; group.torsion().len()],
        }
    }

    pub fn new(
        group: &GroupSpec,
        free_turns: Vec<Rational>,
        torsion_exponents: Vec<u64>,
    ) -> Result<Self, ModelError> {
        let c = CharacterSpec {
            free_turns: free_turns.into_iter().map(wrap_turn).collect(),
            torsion_exponents,
        };
        c.validate(group)?;
        Ok(c)
    }

    pub fn validate(&self, group: &GroupSpec) -> Result<(), ModelError> {
        if self.free_turns.len() != group.rank() || self.torsion_exponents.len() != group.torsion().len() {
            return Err(ModelError::Invalid(format!("character shape does not match {group}")));
        }
        if let Some((k, n)) = self
            .torsion_exponents
            .iter()
            .zip(group.torsion())
            .find(|(k, n)| k >= n)
        {
            return Err(ModelError::Invalid(format!("torsion exponent {k} not below order {n}")));
        }
        Ok(())
    }

    /// Phase of `α(x)` in turns, in `[0, 1)`.
    pub fn turn(&self, group: &GroupSpec, x: &[i64]) -> Rational {
        let mut t = Rational::from_integer(0);
        for (theta, &xi) in self.free_turns.iter().zip(x) {
            t += theta * Rational::from_integer(xi as i128);
        }
        for (i, (&k, &n)) in self.torsion_exponents.iter().zip(group.torsion()).enumerate() {
            let xi = x[group.rank() + i];
            t += rat(k as i128 * xi as i128, n as i128);
        }
        wrap_turn(t)
    }

    pub fn value(&self, group: &GroupSpec, x: &[i64]) -> Value {
        Value::polar(Rational::from_integer(0), self.turn(group, x))
    }

    pub fn is_trivial(&self) -> bool {
        self.free_turns.iter().all(|t| *t.numer() == 0) && self.torsion_exponents.iter().all(|&k| k == 0)
    }
}

/// A ±1-valued function constant on cosets of `X^(modulus)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignMap {
    modulus: u32,
    entries: Vec<CosetEntry<i8>>,
}

impl SignMap {
    pub fn constant_one(group: &GroupSpec, modulus: u32) -> Self {
        Self::from_fn(group, modulus, |_| false)
    }

    /// `negative(idx)` gives the sign on each coset.
    pub fn from_fn(group: &GroupSpec, modulus: u32, negative: impl Fn(&CosetIndex) -> bool) -> Self {
        let entries = group
            .coset_indices(modulus)
            .into_iter()
            .map(|idx| CosetEntry {
                value: if negative(&idx) { -1 } else { 1 },
                coset: idx.residues,
            })
            .collect();
        SignMap { modulus, entries }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn entries(&self) -> &[CosetEntry<i8>] {
        &self.entries
    }

    pub fn sign_of_coset(&self, idx: &CosetIndex) -> i8 {
        self.entries
            .binary_search_by(|e| e.coset.cmp(&idx.residues))
            .map(|i| self.entries[i].value)
            .unwrap_or(1)
    }

    pub fn eval(&self, group: &GroupSpec, x: &[i64]) -> i8 {
        self.sign_of_coset(&group.coset_index_of(x, self.modulus))
    }

    /// Same function viewed on the finer cosets of `X^(4)`.
    pub fn refine_to_four(&self, group: &GroupSpec) -> SignMap {
        if self.modulus == 4 {
            return self.clone();
        }
        SignMap::from_fn(group, 4, |idx| self.eval(group, &idx.residues) < 0)
    }

    /// Sign map on `X^(2)` cosets if this map is constant on them.
    pub fn coarsen_to_two(&self, group: &GroupSpec) -> Option<SignMap> {
        if self.modulus == 2 {
            return Some(self.clone());
        }
        let coarse = SignMap::from_fn(group, 2, |idx| self.eval(group, &idx.residues) < 0);
        group
            .coset_indices(4)
            .iter()
            .all(|idx| self.eval(group, &idx.residues) == coarse.eval(group, &idx.residues))
            .then_some(coarse)
    }

    pub fn is_constant_one(&self) -> bool {
        self.entries.iter().all(|e| e.value == 1)
    }

    /// Values in {±1}, complete coset list, `1` on cosets inside `X^(2)`, even.
    pub fn validate(&self, group: &GroupSpec) -> Result<(), ModelError> {
        if self.modulus != 2 && self.modulus != 4 {
            return Err(GroupError::BadModulus(self.modulus).into());
        }
        let expected = group.coset_indices(self.modulus);
        if expected.len() != self.entries.len()
            || expected.iter().zip(&self.entries).any(|(a, b)| a.residues != b.coset)
        {
            return Err(ModelError::Invalid("sign map must list every coset in order".into()));
        }
        for e in &self.entries {
            if e.value != 1 && e.value != -1 {
                return Err(ModelError::Invalid(format!("sign map value {} is not ±1", e.value)));
            }
            let rep = GroupElement(e.coset.clone());
            if group.coset_index_of(&rep.0, 2).is_trivial() && e.value != 1 {
                return Err(ModelError::Invalid(format!(
                    "sign map must be 1 on X^(2), but is -1 at {rep}"
                )));
            }
            let neg = group.neg(&rep);
            if self.eval(group, &neg.0) != e.value {
                return Err(ModelError::Invalid(format!("sign map is not even at {rep}")));
            }
        }
        Ok(())
    }

    /// First coset pair (in lexicographic order of representatives) with
    /// `a(x+y) ≠ a(x)a(y)`, or `None` if the map is multiplicative.
    pub fn multiplicativity_witness(&self, group: &GroupSpec) -> Option<(GroupElement, GroupElement)> {
        let idx = group.coset_indices(self.modulus);
        for x in &idx {
            for y in &idx {
                let s = group.coset_add(x, y);
                if self.sign_of_coset(&s) != self.sign_of_coset(x) * self.sign_of_coset(y) {
                    return Some((GroupElement(x.residues.clone()), GroupElement(y.residues.clone())));
                }
            }
        }
        None
    }
}

/// Anything that evaluates to an `(f, g)` pair pointwise.
pub trait SolutionForm {
    fn group(&self) -> &GroupSpec;
    fn kind(&self) -> Kind;
    fn eval_pair(&self, x: &[i64]) -> (Value, Value);
}

/// `f = exp{P + l + r}`, `g = exp{P + m - r}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositiveSolutionForm {
    pub group: GroupSpec,
    pub p: QuadraticForm,
    pub l: AdditiveMap,
    pub m: AdditiveMap,
    pub r: CosetConstantMap,
}

impl PositiveSolutionForm {
    pub fn zero(group: &GroupSpec) -> Self {
        PositiveSolutionForm {
            group: group.clone(),
            p: QuadraticForm::zero(group.rank()),
            l: AdditiveMap::zero(group.rank()),
            m: AdditiveMap::zero(group.rank()),
            r: CosetConstantMap::zero(group),
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let rank = self.group.rank();
        if self.p.rank() != rank || self.l.coeffs().len() != rank || self.m.coeffs().len() != rank {
            return Err(ModelError::Invalid(format!(
                "form components do not match the rank of {}",
                self.group
            )));
        }
        QuadraticForm::new(self.p.matrix.clone())?;
        self.r.validate(&self.group)
    }

    /// `(log f(x), log g(x))`.
    pub fn eval_logs(&self, x: &[i64]) -> (Real, Real) {
        let p = self.p.eval(x);
        let r = self.r.eval(&self.group, x);
        (&(&p + &self.l.eval(x)) + &r, &(&p + &self.m.eval(x)) - &r)
    }

    pub fn eval(&self, x: &GroupElement) -> Result<(Value, Value), ModelError> {
        if !self.group.contains(x) {
            return Err(GroupError::Mismatch {
                element: x.to_string(),
                group: self.group.to_string(),
            }
            .into());
        }
        Ok(self.eval_pair(&x.0))
    }
}

impl SolutionForm for PositiveSolutionForm {
    fn group(&self) -> &GroupSpec {
        &self.group
    }

    fn kind(&self) -> Kind {
        Kind::Positive
    }

    fn eval_pair(&self, x: &[i64]) -> (Value, Value) {
        let (tf, tg) = self.eval_logs(x);
        let zero = Rational::from_integer(0);
        (Value::from_log_turn(&tf, &zero), Value::from_log_turn(&tg, &zero))
    }
}

/// `f = s·α·a·exp{P + r}`, `g = s·β·b·exp{P - r}` on the support (everywhere if
/// no support subgroup is given), `0` off it; `s = ±1` is a global sign.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HermitianSolutionForm {
    pub group: GroupSpec,
    pub alpha: CharacterSpec,
    pub beta: CharacterSpec,
    pub a: SignMap,
    pub b: SignMap,
    pub p: QuadraticForm,
    pub r: CosetConstantMap,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<SubgroupSpec>,
    #[serde(default = "one_i8")]
    pub sign: i8,
}

fn one_i8() -> i8 {
    1
}

impl HermitianSolutionForm {
    pub fn trivial(group: &GroupSpec) -> Self {
        HermitianSolutionForm {
            group: group.clone(),
            alpha: CharacterSpec::trivial(group),
            beta: CharacterSpec::trivial(group),
            a: SignMap::constant_one(group, 4),
            b: SignMap::constant_one(group, 4),
            p: QuadraticForm::zero(group.rank()),
            r: CosetConstantMap::zero(group),
            support: None,
            sign: 1,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        self.alpha.validate(&self.group)?;
        self.beta.validate(&self.group)?;
        self.a.validate(&self.group)?;
        self.b.validate(&self.group)?;
        if self.p.rank() != self.group.rank() {
            return Err(ModelError::Invalid("quadratic form rank mismatch".into()));
        }
        self.r.validate(&self.group)?;
        if self.sign != 1 && self.sign != -1 {
            return Err(ModelError::Invalid("global sign must be ±1".into()));
        }
        if let Some(s) = &self.support {
            if s.generators.iter().any(|g| !self.group.contains(g)) {
                return Err(ModelError::Invalid("support generators must be reduced group elements".into()));
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: &GroupElement) -> Result<(Value, Value), ModelError> {
        if !self.group.contains(x) {
            return Err(GroupError::Mismatch {
                element: x.to_string(),
                group: self.group.to_string(),
            }
            .into());
        }
        Ok(self.eval_pair(&x.0))
    }
}

impl SolutionForm for HermitianSolutionForm {
    fn group(&self) -> &GroupSpec {
        &self.group
    }

    fn kind(&self) -> Kind {
        Kind::Complex
    }

    fn eval_pair(&self, x: &[i64]) -> (Value, Value) {
        if let Some(s) = &self.support {
            if !s.contains(&self.group, &GroupElement(x.to_vec())) {
                return (Value::Zero, Value::Zero);
            }
        }
        let g = &self.group;
        let p = self.p.eval(x);
        let r = self.r.eval(g, x);
        let global = if self.sign < 0 { rat(1, 2) } else { Rational::from_integer(0) };
        let half_if = |neg: bool| if neg { rat(1, 2) } else { Rational::from_integer(0) };
        let tf = self.alpha.turn(g, x) + half_if(self.a.eval(g, x) < 0) + global;
        let tg = self.beta.turn(g, x) + half_if(self.b.eval(g, x) < 0) + global;
        (
            Value::from_log_turn(&(&p + &r), &tf),
            Value::from_log_turn(&(&p - &r), &tg),
        )
    }
}

/// Dense `(f, g)` tables of a form over a window.
pub fn synth_table(form: &impl SolutionForm, window: &Window) -> Result<(FuncTable, FuncTable), ModelError> {
    if window.group() != form.group() {
        return Err(ModelError::WindowMismatch);
    }
    let (fs, gs): (Vec<Value>, Vec<Value>) = (0..window.len()).map(|i| form.eval_pair(window.coords(i))).unzip();
    Ok((
        FuncTable::new(window.clone(), form.kind(), fs)?,
        FuncTable::new(window.clone(), form.kind(), gs)?,
    ))
}

mod rational_vec {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::numeric::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<serde_json::Value>::deserialize(d)?;
        raw.iter()
            .map(|v| match v {
                serde_json::Value::String(s) => parse_rational(s),
                serde_json::Value::Number(n) => n.as_i64().map(|i| Rational::from_integer(i as i128)),
                _ => None,
            })
            .map(|q| q.ok_or_else(|| serde::de::Error::custom("expected a rational turn")))
            .collect()
    }
}
