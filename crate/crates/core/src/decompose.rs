//! Recovery of structured solution forms from value tables.
//!
//! Every successful decomposition ends with a certificate: the recovered form
//! is re-evaluated on the whole window and compared with the input. The
//! triple-difference condition on `log f` is implied by an exact residual, so
//! it is only evaluated separately to explain a failure.

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::check::{
    check_coset_constant, check_doubled_second_difference, check_doubled_second_difference_steps,
    check_hermitian, check_kac_bernstein, check_sign_pair, scan, unit_steps, CheckError, CheckReport, Outcome,
    Witness,
};
use crate::func::{
    synth_table, table_even_odd_split, AdditiveMap, CharacterSpec, CosetConstantMap, FuncTable,
    HermitianSolutionForm, Kind, ModelError, PositiveSolutionForm, QuadraticForm, RealTable, SignMap,
    SolutionForm,
};
use crate::group::{mixed_radix, Domain, GroupElement, GroupError, GroupSpec, SubgroupSpec, Window};
use crate::numeric::{rat, wrap_turn, Rational, Real, Value};

/// Smallest box radius on free coordinates accepted for decomposition.
pub const MIN_DECOMPOSE_RADIUS: u32 = 4;

/// Above this many triples the triple-difference diagnostic only uses unit steps.
const FULL_TRIPLE_LIMIT: usize = 50_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecomposeError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error("{0}")]
    Sizing(String),
    #[error("{0}")]
    Hypothesis(String),
    #[error("{what}")]
    Failed { what: String, witness: Option<Witness> },
}

impl DecomposeError {
    fn failed(what: impl Into<String>, witness: Option<Witness>) -> Self {
        DecomposeError::Failed {
            what: what.into(),
            witness,
        }
    }

    fn from_report(what: &str, report: CheckReport) -> Self {
        Self::failed(what, report.witness)
    }

    /// `true` for malformed or out-of-contract input, `false` when the input
    /// is well-formed but is not a solution of the required shape.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, DecomposeError::Failed { .. })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let kind = match self {
            DecomposeError::Group(_) | DecomposeError::Model(_) | DecomposeError::Check(_) => "input",
            DecomposeError::Sizing(_) => "sizing",
            DecomposeError::Hypothesis(_) => "hypothesis",
            DecomposeError::Failed { .. } => "validation",
        };
        let witness = match self {
            DecomposeError::Failed { witness, .. } => serde_json::to_value(witness).expect("witness serializes"),
            _ => serde_json::Value::Null,
        };
        json!({ "error": kind, "message": self.to_string(), "witness": witness })
    }
}

fn point_witness(w: &Window, i: usize, lhs: serde_json::Value, rhs: serde_json::Value) -> Witness {
    Witness {
        x: w.point(i),
        y: None,
        k: None,
        lhs,
        rhs,
    }
}

fn real_json(r: &Real) -> serde_json::Value {
    serde_json::to_value(r).expect("reals serialize")
}

fn check_sizing(w: &Window) -> Result<(), DecomposeError> {
    if let Domain::Box { radius } = w.domain() {
        if let Some(r) = radius.iter().copied().min() {
            if r < MIN_DECOMPOSE_RADIUS {
                return Err(DecomposeError::Sizing(format!(
                    "decomposition needs box radius >= {MIN_DECOMPOSE_RADIUS} on every free coordinate, got {r}"
                )));
            }
        }
    }
    Ok(())
}

fn index(w: &Window, coords: &[i64]) -> Result<usize, DecomposeError> {
    w.index_of(coords)
        .ok_or_else(|| DecomposeError::Sizing(format!("window does not contain {}", GroupElement(coords.to_vec()))))
}

fn total(t: &RealTable) -> Result<(), DecomposeError> {
    match t.values().iter().position(Option::is_none) {
        Some(i) => Err(DecomposeError::failed(
            format!("table is undefined at {}", t.window().point(i)),
            None,
        )),
        None => Ok(()),
    }
}

fn value_at<'a>(t: &'a RealTable, w: &Window, coords: &[i64]) -> Result<&'a Real, DecomposeError> {
    let i = index(w, coords)?;
    t.at(i)
        .ok_or_else(|| DecomposeError::failed(format!("table is undefined at {}", w.point(i)), None))
}

/// Pointwise residual `T - model`; the first nonzero point is the witness.
fn residual(t: &RealTable, tol: f64, model: impl Fn(&[i64]) -> Real) -> Option<Witness> {
    let w = t.window();
    (0..w.len()).find_map(|i| {
        let v = t.at(i)?;
        let m = model(w.coords(i));
        (!v.close_to(&m, tol)).then(|| point_witness(w, i, real_json(v), real_json(&m)))
    })
}

/// `½ Δ_h Δ_k T(0)` for points given by coordinates.
fn half_mixed_difference(t: &RealTable, h: &[i64], k: &[i64]) -> Result<Real, DecomposeError> {
    let w = t.window();
    let g = w.group();
    let sum = g.element(&h.iter().zip(k).map(|(a, b)| a + b).collect::<Vec<_>>())?;
    let hh = g.element(h)?;
    let kk = g.element(k)?;
    let zero = vec![0; g.ncoords()];
    let v = &(value_at(t, w, &sum.0)? - value_at(t, w, &hh.0)?) - value_at(t, w, &kk.0)?;
    Ok((&v + value_at(t, w, &zero)?).scale(&rat(1, 2)))
}

/// Degree-two recovery: `T(x) = xᵀBx + l(x) + c`, validated on the window.
pub fn recover_deg2(t: &RealTable, tol: f64) -> Result<(QuadraticForm, AdditiveMap, Real), DecomposeError> {
    total(t)?;
    let w = t.window();
    let g = w.group();
    let rank = g.rank();
    let zero = vec![0; g.ncoords()];
    let c = value_at(t, w, &zero)?.clone();
    let mut matrix = vec![vec![Real::zero(); rank]; rank];
    for i in 0..rank {
        for j in 0..rank {
            matrix[i][j] = half_mixed_difference(t, &g.basis(i).0, &g.basis(j).0)?;
        }
    }
    let p = QuadraticForm::new(matrix)?;
    let coeffs = (0..rank)
        .map(|i| {
            let e = g.basis(i);
            Ok(&(value_at(t, w, &e.0)? - &c) - &p.eval(&e.0))
        })
        .collect::<Result<Vec<_>, DecomposeError>>()?;
    let l = AdditiveMap::new(coeffs);
    if let Some(wit) = residual(t, tol, |x| &(&p.eval(x) + &l.eval(x)) + &c) {
        return Err(DecomposeError::failed("table is not a polynomial of degree at most 2", Some(wit)));
    }
    Ok((p, l, c))
}

fn is_zero(r: &Real, tol: f64) -> bool {
    r.is_zero_within(tol)
}

/// `Ã(x, y) = ¼ A(2x, 2y)` from the values of `A` on doubled generators
/// (`doubled[i][j] = A(2e_i, 2e_j)` over all coordinates).
pub fn extend_biadditive(group: &GroupSpec, doubled: &[Vec<Real>], tol: f64) -> Result<QuadraticForm, DecomposeError> {
    let k = group.ncoords();
    if doubled.len() != k || doubled.iter().any(|r| r.len() != k) {
        return Err(DecomposeError::failed(format!("expected a {k}×{k} matrix"), None));
    }
    let rank = group.rank();
    for i in 0..k {
        for j in 0..k {
            if (i >= rank || j >= rank) && !is_zero(&doubled[i][j], tol) {
                return Err(DecomposeError::failed(
                    format!("biadditive function is nonzero on a torsion generator at ({i},{j})"),
                    None,
                ));
            }
        }
    }
    let quarter = rat(1, 4);
    let m = (0..rank)
        .map(|i| (0..rank).map(|j| doubled[i][j].scale(&quarter)).collect())
        .collect();
    QuadraticForm::new(m).map_err(|e| DecomposeError::failed(e.to_string(), None))
}

/// `l̃(x) = ½ l(2x)` from `doubled[j] = l(2e_j)` over all coordinates.
pub fn extend_additive(group: &GroupSpec, doubled: &[Real], tol: f64) -> Result<AdditiveMap, DecomposeError> {
    if doubled.len() != group.ncoords() {
        return Err(DecomposeError::failed(format!("expected {} values", group.ncoords()), None));
    }
    let rank = group.rank();
    if let Some(j) = (rank..doubled.len()).find(|&j| !is_zero(&doubled[j], tol)) {
        return Err(DecomposeError::failed(
            format!("additive function is nonzero on torsion generator {j}"),
            None,
        ));
    }
    Ok(AdditiveMap::new(doubled[..rank].iter().map(|v| v.scale(&rat(1, 2))).collect()))
}

/// Explains a residual failure by the triple-difference condition, if it fails.
fn diagnose(t: &RealTable, tol: f64, fallback: Witness, what: &str) -> DecomposeError {
    let w = t.window();
    let report = if w.len().pow(3) <= FULL_TRIPLE_LIMIT {
        check_doubled_second_difference(t, tol)
    } else {
        check_doubled_second_difference_steps(t, &unit_steps(w), tol)
    };
    if report.holds {
        DecomposeError::failed(what, Some(fallback))
    } else {
        DecomposeError::from_report("table violates the doubled second-difference identity", report)
    }
}

/// `T = P + l + r` with `P` quadratic, `l` additive and `r` constant on the
/// cosets of `X^(2)`; normalized by `P(0) = l(0) = 0`.
pub fn decompose_real(
    t: &RealTable,
    tol: f64,
) -> Result<(QuadraticForm, AdditiveMap, CosetConstantMap), DecomposeError> {
    let w = t.window();
    check_sizing(w)?;
    total(t)?;
    let g = w.group();
    let (even, odd) = table_even_odd_split(t);

    let l = AdditiveMap::new(
        (0..g.rank())
            .map(|i| value_at(&odd, w, &g.basis(i).0).cloned())
            .collect::<Result<_, _>>()?,
    );
    if let Some(wit) = residual(&odd, tol, |x| l.eval(x)) {
        return Err(diagnose(t, tol, wit, "odd part is not additive"));
    }

    let k = g.ncoords();
    let doubled: Vec<GroupElement> = (0..k).map(|i| g.scale(2, &g.basis(i))).collect();
    let mut a = vec![vec![Real::zero(); k]; k];
    for i in 0..k {
        for j in 0..k {
            a[i][j] = half_mixed_difference(&even, &doubled[i].0, &doubled[j].0)?;
        }
    }
    let p = match extend_biadditive(g, &a, tol) {
        Ok(p) => p,
        Err(e) => {
            let wit = point_witness(w, w.zero_index(), json!(null), json!(null));
            return Err(diagnose(t, tol, wit, &e.to_string()));
        }
    };

    let reps = g.coset_indices(CosetConstantMap::MODULUS);
    let mut r_values = Vec::with_capacity(reps.len());
    for idx in &reps {
        r_values.push(value_at(&even, w, &idx.residues)? - &p.eval(&idx.residues));
    }
    let r = CosetConstantMap::from_fn(g, |idx| {
        let pos = reps.iter().position(|x| x == idx).expect("enumerated cosets");
        r_values[pos].clone()
    });
    if let Some(wit) = residual(t, tol, |x| &(&p.eval(x) + &l.eval(x)) + &r.eval(g, x)) {
        return Err(diagnose(t, tol, wit, "residual T - P - l - r is not zero"));
    }
    Ok((p, l, r))
}

fn require_positive(f: &FuncTable, tol: f64) -> Result<RealTable, DecomposeError> {
    let w = f.window();
    for (i, v) in f.values().iter().enumerate() {
        let ok = match v {
            Value::Zero => false,
            Value::Polar { turn, .. } => *turn.numer() == 0,
            Value::Approx(z) => z.re > 0.0 && z.im.abs() <= tol,
        };
        if !ok {
            return Err(DecomposeError::failed(
                "table is not positive",
                Some(point_witness(w, i, v.to_json(), json!("positive"))),
            ));
        }
    }
    Ok(f.log_modulus()?)
}

/// Positive solutions: `f = exp{P + l + r}`, `g = exp{P + m - r}`.
pub fn decompose_positive(f: &FuncTable, g: &FuncTable, tol: f64) -> Result<PositiveSolutionForm, DecomposeError> {
    check_sizing(f.window())?;
    let t = require_positive(f, tol)?;
    let s = require_positive(g, tol)?;
    explain_failure(f, g, tol, || positive_parts(f, g, &t, &s, tol))
}

fn positive_parts(
    f: &FuncTable,
    g: &FuncTable,
    t: &RealTable,
    s: &RealTable,
    tol: f64,
) -> Result<PositiveSolutionForm, DecomposeError> {
    let (p, l, r) = decompose_real(t, tol)?;
    let (q, m, s_map) = decompose_real(s, tol)?;
    if !p.close_to(&q, tol) {
        return Err(DecomposeError::failed("quadratic parts of log f and log g differ", None));
    }
    if !s_map.close_to(&r.negated(), tol) {
        return Err(DecomposeError::failed("coset parts of log f and log g are not opposite", None));
    }
    let form = PositiveSolutionForm {
        group: f.group().clone(),
        p,
        l,
        m,
        r,
    };
    certify(&form, f, g, tol)?;
    Ok(form)
}

/// Runs `attempt`; when it fails, reports an equation violation instead if
/// the pair has one. A successful attempt ends in a certificate against a
/// solution form, so the equation itself need not be scanned then.
fn explain_failure<T>(
    f: &FuncTable,
    g: &FuncTable,
    tol: f64,
    attempt: impl FnOnce() -> Result<T, DecomposeError>,
) -> Result<T, DecomposeError> {
    match attempt() {
        Err(e @ DecomposeError::Failed { .. }) => {
            let report = check_kac_bernstein(f, g, tol)?;
            if report.holds {
                Err(e)
            } else {
                Err(DecomposeError::from_report("the pair does not satisfy the equation", report))
            }
        }
        other => other,
    }
}

fn certify(form: &impl SolutionForm, f: &FuncTable, g: &FuncTable, tol: f64) -> Result<(), DecomposeError> {
    let (sf, sg) = synth_table(form, f.window())?;
    for (name, want, got) in [("f", f, &sf), ("g", g, &sg)] {
        if let Some(i) = (0..want.values().len()).find(|&i| !want.at(i).close_to(got.at(i), tol)) {
            return Err(DecomposeError::failed(
                format!("recovered form does not reproduce {name}"),
                Some(point_witness(f.window(), i, want.at(i).to_json(), got.at(i).to_json())),
            ));
        }
    }
    Ok(())
}

/// Order of `2e` for torsion coordinate `i` of order `n`.
fn doubled_order(n: u64) -> i128 {
    (if n % 2 == 0 { n / 2 } else { n }) as i128
}

/// Extends a character of `X^(2)`, given by its turns on the doubled
/// generators `2e_j`, to a character of `X`.
///
/// Square roots take the principal turn in `[0, ½)`; on odd-order torsion
/// the root is the unique one of order dividing `n`.
pub fn extend_character(group: &GroupSpec, doubled_turns: &[Rational]) -> Result<CharacterSpec, DecomposeError> {
    if doubled_turns.len() != group.ncoords() {
        return Err(DecomposeError::failed(
            format!("expected {} turns, got {}", group.ncoords(), doubled_turns.len()),
            None,
        ));
    }
    let rank = group.rank();
    let free: Vec<Rational> = doubled_turns[..rank].iter().map(|t| wrap_turn(*t) / 2).collect();
    let mut exps = Vec::with_capacity(group.torsion().len());
    for (i, &n) in group.torsion().iter().enumerate() {
        let t = wrap_turn(doubled_turns[rank + i]);
        let scaled = t * Rational::from_integer(doubled_order(n));
        if !scaled.is_integer() {
            return Err(DecomposeError::failed(
                format!("turn {t} on the doubled generator of Z/{n} is not a character value"),
                None,
            ));
        }
        let n128 = n as i128;
        let k = if n % 2 == 0 {
            (t / 2 * Rational::from_integer(n128)).to_integer()
        } else {
            let k2 = (t * Rational::from_integer(n128)).to_integer();
            (k2 * ((n128 + 1) / 2)).rem_euclid(n128)
        };
        exps.push(k as u64);
    }
    let alpha = CharacterSpec::new(group, free, exps)?;
    for (j, t) in doubled_turns.iter().enumerate() {
        let two_e = group.scale(2, &group.basis(j));
        if alpha.turn(group, &two_e.0) != wrap_turn(*t) {
            return Err(DecomposeError::failed(format!("extension does not restrict to the input on 2e_{j}"), None));
        }
    }
    Ok(alpha)
}

/// `s·v/|v|`.
fn unit_part(v: &Value, negate: bool) -> Value {
    let half = if negate { rat(1, 2) } else { Rational::from_integer(0) };
    match v {
        Value::Zero => Value::Zero,
        Value::Polar { turn, .. } => Value::polar(Rational::from_integer(0), turn + half),
        Value::Approx(z) => {
            let u = z / z.norm();
            Value::Approx(if negate { -u } else { u })
        }
    }
}

fn abs_table(f: &FuncTable, negate: bool) -> Result<(FuncTable, Vec<Value>), DecomposeError> {
    let w = f.window();
    let mut mods = Vec::with_capacity(w.len());
    let mut units = Vec::with_capacity(w.len());
    for (i, v) in f.values().iter().enumerate() {
        let m = v.log_modulus().ok_or_else(|| {
            DecomposeError::failed("table vanishes", Some(point_witness(w, i, json!(0), json!("nonzero"))))
        })?;
        mods.push(Value::from_log_turn(&m, &Rational::from_integer(0)));
        units.push(unit_part(v, negate));
    }
    Ok((FuncTable::new(w.clone(), Kind::Positive, mods)?, units))
}

/// Checks `p(2x) = p(x)²` and `p²(x+y) = p²(x) p²(y)` on the window.
fn check_phase(w: &Window, p: &[Value], name: &str, tol: f64) -> Result<(), DecomposeError> {
    for i in 0..w.len() {
        if let Some(d) = w.combine(i, 2, i, 0) {
            let sq = p[i].mul(&p[i]);
            if !p[d].close_to(&sq, tol) {
                return Err(DecomposeError::failed(
                    format!("{name}(2x) differs from {name}(x)^2"),
                    Some(point_witness(w, i, p[d].to_json(), sq.to_json())),
                ));
            }
        }
    }
    let sq: Vec<Value> = p.iter().map(|v| v.mul(v)).collect();
    let s = scan(w.len(), w.len(), |x, y| {
        let Some(s) = w.add(x, y) else {
            return Outcome::Skip;
        };
        let rhs = sq[x].mul(&sq[y]);
        if sq[s].close_to(&rhs, tol) {
            Outcome::Pass
        } else {
            Outcome::Fail((sq[s].to_json(), rhs.to_json()))
        }
    });
    if let Some((x, y, (lhs, rhs))) = s.first {
        return Err(DecomposeError::failed(
            format!("{name}^2 is not multiplicative"),
            Some(Witness {
                x: w.point(x),
                y: Some(w.point(y)),
                k: None,
                lhs,
                rhs,
            }),
        ));
    }
    Ok(())
}

fn fit_character(w: &Window, p: &[Value]) -> Result<CharacterSpec, DecomposeError> {
    let g = w.group();
    let turns = (0..g.ncoords())
        .map(|j| {
            let i = index(w, &g.scale(2, &g.basis(j)).0)?;
            Ok(p[i].turn().expect("unit values are nonzero"))
        })
        .collect::<Result<Vec<_>, DecomposeError>>()?;
    extend_character(g, &turns)
}

/// Sign table `p / α` and its sign map on the cosets of `X^(4)`.
fn split_sign(
    w: &Window,
    p: &[Value],
    alpha: &CharacterSpec,
    name: &str,
    tol: f64,
) -> Result<(FuncTable, SignMap), DecomposeError> {
    let g = w.group();
    let mut signs = Vec::with_capacity(w.len());
    for (i, v) in p.iter().enumerate() {
        let a = v.mul(&alpha.value(g, w.coords(i)).conj());
        match a.as_sign(tol) {
            Some(neg) => signs.push(Value::sign(neg)),
            None => {
                return Err(DecomposeError::failed(
                    format!("{name} = p/α is not ±1"),
                    Some(point_witness(w, i, a.to_json(), json!("±1"))),
                ))
            }
        }
    }
    let table = FuncTable::new(w.clone(), Kind::Sign, signs)?;
    let reps = g.coset_indices(4);
    let mut negative = Vec::with_capacity(reps.len());
    for idx in &reps {
        let i = index(w, &idx.residues)?;
        negative.push(table.at(i).as_sign(0.0) == Some(true));
    }
    let map = SignMap::from_fn(g, 4, |idx| negative[reps.iter().position(|r| r == idx).expect("enumerated")]);
    Ok((table, map))
}

/// Hermitian nonvanishing solutions:
/// `f = s·α·a·exp{P + r}`, `g = s·β·b·exp{P - r}`.
pub fn decompose_hermitian(f: &FuncTable, g: &FuncTable, tol: f64) -> Result<HermitianSolutionForm, DecomposeError> {
    let w = f.window();
    check_sizing(w)?;
    if g.window() != w {
        return Err(CheckError::WindowMismatch.into());
    }
    for (name, t) in [("f", f), ("g", g)] {
        if let Some(i) = t.values().iter().position(|v| v.is_zero_within(tol)) {
            return Err(DecomposeError::failed(
                format!("{name} vanishes"),
                Some(point_witness(w, i, t.at(i).to_json(), json!("nonzero"))),
            ));
        }
        let h = check_hermitian(t, tol);
        if !h.holds {
            return Err(DecomposeError::from_report(&format!("{name} is not Hermitian"), h));
        }
    }
    explain_failure(f, g, tol, || hermitian_parts(f, g, tol))
}

fn hermitian_parts(f: &FuncTable, g: &FuncTable, tol: f64) -> Result<HermitianSolutionForm, DecomposeError> {
    let w = f.window();
    let zero = w.zero_index();
    let negate = f.at(zero).to_complex().re < 0.0;
    let (fa, p) = abs_table(f, negate)?;
    let (ga, q) = abs_table(g, negate)?;
    let modulus = decompose_positive(&fa, &ga, tol)?;
    if !modulus.l.is_zero(tol) || !modulus.m.is_zero(tol) {
        return Err(DecomposeError::failed("|f| or |g| has an additive part", None));
    }

    check_phase(w, &p, "p", tol)?;
    check_phase(w, &q, "q", tol)?;
    let alpha = fit_character(w, &p)?;
    let beta = fit_character(w, &q)?;
    let (a_table, a) = split_sign(w, &p, &alpha, "a", tol)?;
    let (b_table, b) = split_sign(w, &q, &beta, "b", tol)?;

    for (name, table, map) in [("a", &a_table, &a), ("b", &b_table, &b)] {
        map.validate(w.group())
            .map_err(|e| DecomposeError::failed(format!("sign map {name}: {e}"), None))?;
        let c = check_coset_constant(table, 4, 0.0)?;
        if !c.holds {
            return Err(DecomposeError::from_report(&format!("{name} is not constant on cosets of X^(4)"), c));
        }
    }
    let sp = check_sign_pair(&a_table, &b_table)?;
    if !sp.holds {
        return Err(DecomposeError::from_report("sign maps do not satisfy their pair equation", sp));
    }

    let form = HermitianSolutionForm {
        group: w.group().clone(),
        alpha,
        beta,
        a,
        b,
        p: modulus.p,
        r: modulus.r,
        support: None,
        sign: if negate { -1 } else { 1 },
    };
    certify(&form, f, g, tol)?;
    Ok(form)
}

/// Result of the single-function decomposition `f = s·α·a·exp{P}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelfDecomposition {
    pub alpha: CharacterSpec,
    pub a: SignMap,
    pub p: QuadraticForm,
    pub sign: i8,
    /// First coset pair where `a(x+y) ≠ a(x) a(y)`, if any.
    pub multiplicativity_witness: Option<(GroupElement, GroupElement)>,
}

pub fn decompose_self(f: &FuncTable, tol: f64) -> Result<SelfDecomposition, DecomposeError> {
    let form = decompose_hermitian(f, f, tol)?;
    let group = &form.group;
    if form.alpha != form.beta || form.a != form.b || !form.r.is_zero(tol) {
        return Err(DecomposeError::failed("components for f and g disagree", None));
    }
    let a = form.a.coarsen_to_two(group).ok_or_else(|| {
        let table = FuncTable::from_fn(f.window().clone(), Kind::Sign, |x| Value::sign(form.a.eval(group, x) < 0));
        let witness = table
            .ok()
            .and_then(|t| check_coset_constant(&t, 2, 0.0).ok())
            .and_then(|r| r.witness);
        DecomposeError::failed("a is not constant on cosets of X^(2)", witness)
    })?;
    let multiplicativity_witness = a.multiplicativity_witness(group);
    Ok(SelfDecomposition {
        alpha: form.alpha,
        a,
        p: form.p,
        sign: form.sign,
        multiplicativity_witness,
    })
}

/// Result of the vanishing-case decomposition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VanishingDecomposition {
    pub form: HermitianSolutionForm,
    pub support: SubgroupSpec,
    pub support_size: usize,
    /// Invariant factors of `X / G` (`0` marks a free summand).
    pub quotient_invariants: Vec<i128>,
    pub quotient_has_order2: bool,
}

/// Solutions that may vanish, on groups with `X^(2) = X`:
/// `f = ±α·exp{r}` and `g = ±β·exp{-r}` on a subgroup `G`, zero off it.
pub fn decompose_vanishing(f: &FuncTable, g: &FuncTable, tol: f64) -> Result<VanishingDecomposition, DecomposeError> {
    let w = f.window();
    let group = w.group();
    if g.window() != w {
        return Err(CheckError::WindowMismatch.into());
    }
    if !group.doubling_is_onto() {
        return Err(DecomposeError::Hypothesis(format!(
            "doubling is not onto on {group}, so X^(2) ≠ X"
        )));
    }
    if !group.is_finite() {
        return Err(DecomposeError::Hypothesis("X^(2) = X forces a finite group here".into()));
    }
    for (name, t) in [("f", f), ("g", g)] {
        if t.values().iter().all(|v| v.is_zero_within(tol)) {
            return Err(DecomposeError::failed(format!("{name} is identically zero"), None));
        }
        let h = check_hermitian(t, tol);
        if !h.holds {
            return Err(DecomposeError::from_report(&format!("{name} is not Hermitian"), h));
        }
    }
    let report = check_kac_bernstein(f, g, tol)?;
    if !report.holds {
        return Err(DecomposeError::from_report("the pair does not satisfy the equation", report));
    }
    let zero = w.zero_index();
    let prod = f.at(zero).mul(g.at(zero));
    if !prod.close_to(&Value::one(), tol) {
        return Err(DecomposeError::failed(
            "f(0)g(0) ≠ 1",
            Some(point_witness(w, zero, prod.to_json(), json!(1))),
        ));
    }
    for i in 0..w.len() {
        let (a, b) = (f.at(i).to_complex().norm(), g.at(i).to_complex().norm());
        let equal = match (f.at(i).log_modulus(), g.at(i).log_modulus()) {
            (None, None) => true,
            (Some(x), Some(y)) => x.close_to(&y, tol),
            _ => false,
        };
        if !equal {
            return Err(DecomposeError::failed(
                "|f| ≠ |g|",
                Some(point_witness(w, i, json!(a), json!(b))),
            ));
        }
    }

    let support_idx: Vec<usize> = (0..w.len()).filter(|&i| !f.at(i).is_zero_within(tol)).collect();
    let mut gens: Vec<GroupElement> = Vec::new();
    for &i in &support_idx {
        let x = w.point(i);
        if !SubgroupSpec::new(gens.clone()).contains(group, &x) {
            gens.push(x);
        }
    }
    let support = SubgroupSpec::new(gens);
    let members = support.elements(group).expect("finite group");
    if members.len() != support_idx.len() {
        let outside = members
            .iter()
            .find(|x| f.get(x).is_some_and(|v| v.is_zero_within(tol)))
            .cloned()
            .unwrap_or_else(|| group.zero());
        return Err(DecomposeError::failed(
            "support is not a subgroup",
            Some(Witness {
                x: outside,
                y: None,
                k: None,
                lhs: json!(0),
                rhs: json!("nonzero"),
            }),
        ));
    }
    if !support.doubling_is_onto(group) {
        return Err(DecomposeError::failed("support G has G^(2) ≠ G", None));
    }
    if support.quotient_has_order2(group) {
        return Err(DecomposeError::failed("X/G contains an element of order 2", None));
    }

    let negate = f.at(zero).to_complex().re < 0.0;
    let log0 = f.at(zero).log_modulus().expect("f(0) ≠ 0");
    for &i in &support_idx {
        let (lf, lg) = (f.at(i).log_modulus().expect("in support"), g.at(i).log_modulus().expect("in support"));
        if !lf.close_to(&log0, tol) || !lg.close_to(&-&log0, tol) {
            return Err(DecomposeError::failed(
                "|f| is not constant on the support",
                Some(point_witness(w, i, real_json(&lf), real_json(&log0))),
            ));
        }
    }
    let p: Vec<Value> = f.values().iter().map(|v| unit_part(v, negate)).collect();
    let q: Vec<Value> = g.values().iter().map(|v| unit_part(v, negate)).collect();
    let alpha = character_matching(group, w, &p, &support_idx, tol)
        .ok_or_else(|| DecomposeError::failed("f/|f| is not a character on the support", None))?;
    let beta = character_matching(group, w, &q, &support_idx, tol)
        .ok_or_else(|| DecomposeError::failed("g/|g| is not a character on the support", None))?;

    let form = HermitianSolutionForm {
        group: group.clone(),
        alpha,
        beta,
        a: SignMap::constant_one(group, 4),
        b: SignMap::constant_one(group, 4),
        p: QuadraticForm::zero(0),
        r: CosetConstantMap::from_fn(group, |_| log0.clone()),
        support: Some(support.clone()),
        sign: if negate { -1 } else { 1 },
    };
    certify(&form, f, g, tol)?;
    Ok(VanishingDecomposition {
        form,
        support_size: members.len(),
        quotient_invariants: support.quotient_invariants(group),
        quotient_has_order2: false,
        support,
    })
}

/// Lexicographically first character of a finite group agreeing with `p` on the listed points.
fn character_matching(
    group: &GroupSpec,
    w: &Window,
    p: &[Value],
    points: &[usize],
    tol: f64,
) -> Option<CharacterSpec> {
    mixed_radix(group.torsion())
        .map(|k| CharacterSpec {
            free_turns: Vec::new(),
            torsion_exponents: k.into_iter().map(|e| e as u64).collect(),
        })
        .find(|alpha| {
            points
                .iter()
                .all(|&i| alpha.value(group, w.coords(i)).close_to(&p[i], tol))
        })
}
