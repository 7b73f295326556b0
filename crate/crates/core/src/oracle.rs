//! Brute-force ground truth: built-in example tables, exhaustive solution
//! enumeration on small finite groups, random forms and the cross-check suite.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::check::{check_coset_constant, check_kac_bernstein, check_kac_bernstein_self};
use crate::decompose::{decompose_hermitian, decompose_positive, decompose_self, decompose_vanishing};
use crate::func::{
    synth_table, AdditiveMap, CharacterSpec, CosetConstantMap, FuncTable, HermitianSolutionForm, Kind, ModelError,
    PositiveSolutionForm, QuadraticForm, SignMap,
};
use crate::group::{GroupElement, GroupError, GroupSpec, Window};
use crate::numeric::{int, lcm_of_denominators, rat, Rational, Real, Value};

/// Default bound on `|X|` for the sign census.
pub const DEFAULT_CENSUS_MAX_ORDER: u64 = 256;
/// Default bound on search nodes for both enumerators.
pub const DEFAULT_BUDGET: u64 = 2_000_000_000;
/// Enumerations with more solutions than this must use the visitor interface.
pub const MAX_MATERIALIZED: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{0} is not finite")]
    NotFinite(GroupSpec),
    #[error("group of order {order} exceeds the bound {bound}")]
    TooLarge { order: u64, bound: u64 },
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
    #[error("{0} solutions exceed the materialization limit; use the visitor interface")]
    TooManySolutions(usize),
    #[error("value grid must be non-empty")]
    EmptyGrid,
}

fn full_window(group: &GroupSpec, bound: u64) -> Result<Window, OracleError> {
    let order = group.order().ok_or_else(|| OracleError::NotFinite(group.clone()))?;
    if order > bound {
        return Err(OracleError::TooLarge { order, bound });
    }
    Ok(Window::standard(group.clone(), 1)?)
}

/// The `(Z/4)²` pair whose sign parts are constant on cosets of `X^(4)` but
/// not of `X^(2)`.
pub fn builtin_counterexample() -> (FuncTable, FuncTable) {
    let group = GroupSpec::finite(&[4, 4]).expect("valid group");
    let window = Window::standard(group, 1).expect("finite window");
    let f_minus = [(1, 2), (3, 2), (2, 1), (2, 3), (1, 3), (3, 1)];
    let g_minus = [(1, 2), (3, 2), (2, 1), (2, 3), (1, 1), (3, 3)];
    let table = |minus: &[(i64, i64)]| {
        FuncTable::from_fn(window.clone(), Kind::Sign, |x| Value::sign(minus.contains(&(x[0], x[1]))))
            .expect("sign values")
    };
    (table(&f_minus), table(&g_minus))
}

/// `f(m, n) = exp{iπmn} = (-1)^{mn}` on the radius-`radius` box of `Z²`.
pub fn builtin_odd_quadratic(radius: u32) -> Result<FuncTable, OracleError> {
    let window = Window::standard(GroupSpec::free(2), radius)?;
    Ok(FuncTable::from_fn(window, Kind::Complex, |x| Value::sign((x[0] * x[1]).rem_euclid(2) == 1))?)
}

/// `f = g = χ·1_⟨3⟩` on `Z/9` with `χ(x) = exp{2πi x/9}`.
pub fn builtin_vanishing() -> (FuncTable, FuncTable) {
    let group = GroupSpec::finite(&[9]).expect("valid group");
    let window = Window::standard(group, 1).expect("finite window");
    let f = FuncTable::from_fn(window, Kind::Complex, |x| {
        if x[0] % 3 == 0 {
            Value::polar(int(0), rat(x[0] as i128, 9))
        } else {
            Value::Zero
        }
    })
    .expect("complex values");
    (f.clone(), f)
}

/// How `a` and `b` relate on one coset of `X^(2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CosetRelation {
    Equal,
    Opposite,
    Mixed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SignPair {
    pub a: FuncTable,
    pub b: FuncTable,
    pub a_x4_constant: bool,
    pub b_x4_constant: bool,
    pub a_x2_constant: bool,
    pub b_x2_constant: bool,
    /// Relation on each coset of `X^(2)`, keyed by coset residues.
    pub relations: Vec<(Vec<i64>, CosetRelation)>,
}

impl SignPair {
    fn new(a: FuncTable, b: FuncTable) -> Self {
        let constant = |t: &FuncTable, m: u32| check_coset_constant(t, m, 0.0).expect("valid modulus").holds;
        let w = a.window().clone();
        let mut by_coset: BTreeMap<Vec<i64>, (bool, bool)> = BTreeMap::new();
        for i in 0..w.len() {
            let same = a.at(i) == b.at(i);
            let e = by_coset.entry(w.coset_of(i, 2).residues).or_insert((true, true));
            e.0 &= same;
            e.1 &= !same;
        }
        let relations = by_coset
            .into_iter()
            .map(|(c, (eq, opp))| {
                let r = match (eq, opp) {
                    (true, _) => CosetRelation::Equal,
                    (_, true) => CosetRelation::Opposite,
                    _ => CosetRelation::Mixed,
                };
                (c, r)
            })
            .collect();
        SignPair {
            a_x4_constant: constant(&a, 4),
            b_x4_constant: constant(&b, 4),
            a_x2_constant: constant(&a, 2),
            b_x2_constant: constant(&b, 2),
            a,
            b,
            relations,
        }
    }

    fn signs(t: &FuncTable) -> Vec<i8> {
        t.values()
            .iter()
            .map(|v| if v.as_sign(0.0) == Some(true) { -1 } else { 1 })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "a": Self::signs(&self.a),
            "b": Self::signs(&self.b),
            "a_x4_constant": self.a_x4_constant,
            "b_x4_constant": self.b_x4_constant,
            "a_x2_constant": self.a_x2_constant,
            "b_x2_constant": self.b_x2_constant,
            "relations": self.relations.iter().map(|(c, r)| json!({"coset": c, "relation": r})).collect::<Vec<_>>(),
        })
    }
}

/// All even sign pairs `(a, b)`, equal to 1 on `X^(2)`, with
/// `a(x+y) b(x-y) = a(x) a(y) b(x) b(y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SignSolutionCensus {
    pub group: GroupSpec,
    pub pairs: Vec<SignPair>,
    pub search_nodes: u64,
}

impl SignSolutionCensus {
    pub fn count(&self) -> usize {
        self.pairs.len()
    }

    pub fn contains(&self, a: &FuncTable, b: &FuncTable) -> bool {
        self.pairs.iter().any(|p| p.a.values() == a.values() && p.b.values() == b.values())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let w = self.pairs.first().map(|p| p.a.window().clone());
        let elements: Vec<GroupElement> = w.map(|w| w.points().collect()).unwrap_or_default();
        json!({
            "group": self.group.to_string(),
            "elements": elements,
            "count": self.count(),
            "search_nodes": self.search_nodes,
            "all_x4_constant": self.pairs.iter().all(|p| p.a_x4_constant && p.b_x4_constant),
            "some_not_x2_constant": self.pairs.iter().any(|p| !p.a_x2_constant || !p.b_x2_constant),
            "pairs": self.pairs.iter().map(SignPair::to_json).collect::<Vec<_>>(),
        })
    }
}

struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    fn tick(&mut self) -> Result<(), OracleError> {
        self.used += 1;
        if self.used > self.limit {
            Err(OracleError::BudgetExceeded(self.limit))
        } else {
            Ok(())
        }
    }
}

/// Pair constraints `(s, d, x, y)` bucketed by the search level at which their
/// last unknown gets assigned; constraints with no unknowns are dropped.
fn bucket_constraints(w: &Window, level_of: &[Option<usize>], levels: usize, involve_neg_y: bool) -> Vec<Vec<[usize; 5]>> {
    let mut buckets: Vec<Vec<(usize, [usize; 5])>> = vec![Vec::new(); levels];
    for x in 0..w.len() {
        for y in 0..w.len() {
            let s = w.add(x, y).expect("full window");
            let d = w.sub(x, y).expect("full window");
            let ny = if involve_neg_y { w.neg(y) } else { y };
            let pts = [s, d, x, y, ny];
            let Some(level) = pts.iter().filter_map(|&p| level_of[p]).max() else {
                continue;
            };
            let mut distinct = pts.to_vec();
            distinct.sort_unstable();
            distinct.dedup();
            buckets[level].push((distinct.len(), pts));
        }
    }
    buckets
        .into_iter()
        .map(|mut b| {
            // Constraints touching few points tend to fail first.
            b.sort_by_key(|(n, _)| *n);
            b.into_iter().map(|(_, c)| c).collect()
        })
        .collect()
}

/// Exhaustive census of sign solutions on a finite group.
pub fn enum_sign_solutions(group: &GroupSpec, max_order: u64, budget: u64) -> Result<SignSolutionCensus, OracleError> {
    let w = full_window(group, max_order)?;
    let n = w.len();
    let mut in_x2 = vec![false; n];
    for i in 0..n {
        in_x2[w.combine(i, 2, i, 0).expect("full window")] = true;
    }
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    let mut level_of: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        if in_x2[i] || level_of[i].is_some() {
            continue;
        }
        let j = w.neg(i);
        level_of[i] = Some(orbits.len());
        level_of[j] = Some(orbits.len());
        orbits.push(if i == j { vec![i] } else { vec![i, j] });
    }
    let buckets = bucket_constraints(&w, &level_of, orbits.len(), false);

    struct Search<'a> {
        orbits: &'a [Vec<usize>],
        buckets: &'a [Vec<[usize; 5]>],
        a: Vec<bool>,
        b: Vec<bool>,
        budget: Budget,
        found: Vec<(Vec<bool>, Vec<bool>)>,
    }
    impl Search<'_> {
        fn run(&mut self, level: usize) -> Result<(), OracleError> {
            if level == self.orbits.len() {
                self.found.push((self.a.clone(), self.b.clone()));
                return Ok(());
            }
            for choice in 0..4u8 {
                self.budget.tick()?;
                let (na, nb) = (choice & 2 != 0, choice & 1 != 0);
                for &p in &self.orbits[level] {
                    self.a[p] = na;
                    self.b[p] = nb;
                }
                let ok = self.buckets[level]
                    .iter()
                    .all(|&[s, d, x, y, _]| (self.a[s] ^ self.b[d]) == (self.a[x] ^ self.a[y] ^ self.b[x] ^ self.b[y]));
                if ok {
                    self.run(level + 1)?;
                }
            }
            Ok(())
        }
    }
    let mut search = Search {
        orbits: &orbits,
        buckets: &buckets,
        a: vec![false; n],
        b: vec![false; n],
        budget: Budget { limit: budget, used: 0 },
        found: Vec::new(),
    };
    search.run(0)?;
    let nodes = search.budget.used;
    let mut found = search.found;
    found.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
    let to_table = |neg: &[bool]| {
        FuncTable::new(w.clone(), Kind::Sign, neg.iter().map(|&s| Value::sign(s)).collect()).expect("sign values")
    };
    let pairs = found
        .iter()
        .map(|(a, b)| SignPair::new(to_table(a), to_table(b)))
        .collect();
    Ok(SignSolutionCensus {
        group: group.clone(),
        pairs,
        search_nodes: nodes,
    })
}

/// The default grid of logarithms `{-1, 0, 1}`, i.e. values `{1/e, 1, e}`.
pub fn default_log_grid() -> Vec<Rational> {
    vec![int(-1), int(0), int(1)]
}

/// Enumerates every pair `(f, g)` with `log f, log g` taking values in `grid`
/// that satisfies the equation on a finite group, in lexicographic order of
/// `(log f(x_0), log g(x_0), log f(x_1), …)` by grid position.
///
/// The visitor receives grid positions for `log f` and `log g` per element
/// (window order). Returns the number of search nodes used.
pub fn enum_restricted_kb_visit(
    group: &GroupSpec,
    grid: &[Rational],
    budget: u64,
    mut visit: impl FnMut(&[usize], &[usize]),
) -> Result<u64, OracleError> {
    if grid.is_empty() {
        return Err(OracleError::EmptyGrid);
    }
    let w = full_window(group, u64::MAX)?;
    let n = w.len();
    let mut sorted = grid.to_vec();
    sorted.sort();
    sorted.dedup();
    let den = lcm_of_denominators(sorted.iter());
    let ints: Vec<i128> = sorted.iter().map(|q| (q * Rational::from_integer(den)).to_integer()).collect();
    let ints: Vec<i64> = ints.iter().map(|&v| i64::try_from(v).expect("grid values fit in i64")).collect();
    let rows = echelon(2 * n, linear_constraints(&w));

    struct Search<'a, V: FnMut(&[usize], &[usize])> {
        ints: &'a [i64],
        rows: &'a [Option<(Vec<(usize, i128)>, i128)>],
        vals: Vec<i64>,
        ti: Vec<usize>,
        si: Vec<usize>,
        budget: Budget,
        visit: V,
    }
    impl<V: FnMut(&[usize], &[usize])> Search<'_, V> {
        fn assign(&mut self, var: usize, i: usize) -> Result<(), OracleError> {
            self.vals[var] = self.ints[i];
            if var % 2 == 0 {
                self.ti[var / 2] = i;
            } else {
                self.si[var / 2] = i;
            }
            self.run(var + 1)
        }

        fn run(&mut self, var: usize) -> Result<(), OracleError> {
            if var == self.vals.len() {
                (self.visit)(&self.ti, &self.si);
                return Ok(());
            }
            if let Some((terms, top)) = &self.rows[var] {
                self.budget.tick()?;
                let sum: i128 = terms.iter().map(|&(j, c)| c * self.vals[j] as i128).sum();
                let found = (sum % top == 0)
                    .then(|| i64::try_from(-sum / top).ok())
                    .flatten()
                    .and_then(|v| self.ints.binary_search(&v).ok());
                if let Some(i) = found {
                    self.assign(var, i)?;
                }
                return Ok(());
            }
            for i in 0..self.ints.len() {
                self.budget.tick()?;
                self.assign(var, i)?;
            }
            Ok(())
        }
    }
    let mut search = Search {
        ints: &ints,
        rows: &rows,
        vals: vec![0; 2 * n],
        ti: vec![0; n],
        si: vec![0; n],
        budget: Budget { limit: budget, used: 0 },
        visit: |t: &[usize], s: &[usize]| visit(t, s),
    };
    search.run(0)?;
    Ok(search.budget.used)
}

/// The equation for `log f = T`, `log g = S` as linear forms over the
/// variables `T(i) ↦ 2i`, `S(i) ↦ 2i + 1`, without duplicates or trivial
/// forms.
fn linear_constraints(w: &Window) -> Vec<Vec<(usize, i64)>> {
    let n = w.len();
    let mut seen = std::collections::HashSet::new();
    let mut forms = Vec::new();
    for x in 0..n {
        w.for_each_balanced_pair(x, |y, s, d, ny| {
            let mut terms = std::collections::BTreeMap::new();
            for (var, k) in [(2 * s, 1), (2 * d + 1, 1), (2 * x, -1), (2 * y, -1), (2 * x + 1, -1), (2 * ny + 1, -1)] {
                *terms.entry(var).or_insert(0i64) += k;
            }
            let mut form: Vec<(usize, i64)> = terms.into_iter().filter(|&(_, k)| k != 0).collect();
            let Some(&(_, lead)) = form.first() else {
                return;
            };
            if lead < 0 {
                form.iter_mut().for_each(|t| t.1 = -t.1);
            }
            if seen.insert(form.clone()) {
                forms.push(form);
            }
        });
    }
    forms
}

/// Echelon form of the constraints: row `v`, if present, fixes variable `v`
/// as `-Σ c_j x_j / c_v` over variables `j < v`, all coefficients integral.
fn echelon(nvars: usize, forms: Vec<Vec<(usize, i64)>>) -> Vec<Option<(Vec<(usize, i128)>, i128)>> {
    let mut basis: Vec<Option<Vec<Rational>>> = vec![None; nvars];
    for form in forms {
        let mut row = vec![int(0); nvars];
        for (j, c) in form {
            row[j] = int(c as i128);
        }
        for v in (0..nvars).rev() {
            if row[v] == int(0) {
                continue;
            }
            match &basis[v] {
                Some(b) => {
                    let c = row[v];
                    for j in 0..=v {
                        row[j] -= c * b[j];
                    }
                }
                None => {
                    let c = row[v];
                    row.iter_mut().for_each(|x| *x /= c);
                    basis[v] = Some(row);
                    break;
                }
            }
        }
    }
    basis
        .into_iter()
        .enumerate()
        .map(|(v, row)| {
            let row = row?;
            let den = lcm_of_denominators(row[..=v].iter());
            let scaled = |q: &Rational| (q * Rational::from_integer(den)).to_integer();
            let terms = (0..v).filter(|&j| row[j] != int(0)).map(|j| (j, scaled(&row[j]))).collect();
            Some((terms, scaled(&row[v])))
        })
        .collect()
}

/// Materialized form of [`enum_restricted_kb_visit`] with values `exp(grid)`.
pub fn enum_restricted_kb(
    group: &GroupSpec,
    grid: &[Rational],
    budget: u64,
) -> Result<Vec<(FuncTable, FuncTable)>, OracleError> {
    let mut sorted = grid.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut raw: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    let mut overflow = false;
    enum_restricted_kb_visit(group, grid, budget, |t, s| {
        if raw.len() < MAX_MATERIALIZED {
            raw.push((t.to_vec(), s.to_vec()));
        } else {
            overflow = true;
        }
    })?;
    if overflow {
        return Err(OracleError::TooManySolutions(MAX_MATERIALIZED));
    }
    let w = full_window(group, u64::MAX)?;
    let table = |idx: &[usize]| {
        FuncTable::new(
            w.clone(),
            Kind::Positive,
            idx.iter().map(|&i| Value::polar(sorted[i], int(0))).collect(),
        )
    };
    raw.iter()
        .map(|(t, s)| Ok((table(t)?, table(s)?)))
        .collect()
}

/// Abelian groups of order at most `max_order`, one per isomorphism type,
/// in invariant-factor form `Z/d_1 × … × Z/d_k` with `d_1 | d_2 | …`.
pub fn abelian_groups_up_to(max_order: u64) -> Vec<GroupSpec> {
    fn chains(rest: u64, prev: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 1 {
            out.push(prefix.clone());
            return;
        }
        for d in (2..=rest).filter(|d| d % prev == 0 && rest % d == 0) {
            let left = rest / d;
            if left == 1 || left % d == 0 {
                prefix.push(d);
                chains(left, d, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    for order in 1..=max_order {
        chains(order, 1, &mut Vec::new(), &mut out);
    }
    out.iter()
        .map(|t| GroupSpec::finite(t).expect("factors are at least 2"))
        .collect()
}

fn random_rational(rng: &mut impl Rng, max_num: i128) -> Rational {
    const DENS: [i128; 5] = [1, 2, 3, 4, 6];
    rat(rng.gen_range(-max_num..=max_num), DENS[rng.gen_range(0..DENS.len())])
}

fn random_real(rng: &mut impl Rng, max_num: i128) -> Real {
    Real::Exact(random_rational(rng, max_num))
}

fn random_quadratic(group: &GroupSpec, rng: &mut impl Rng) -> QuadraticForm {
    let r = group.rank();
    let mut m = vec![vec![Real::zero(); r]; r];
    for i in 0..r {
        for j in i..r {
            let v = random_real(rng, 2);
            m[i][j] = v.clone();
            m[j][i] = v;
        }
    }
    QuadraticForm::new(m).expect("symmetric by construction")
}

/// Random positive form with small rational coefficients.
pub fn random_positive_form(group: &GroupSpec, rng: &mut impl Rng) -> PositiveSolutionForm {
    let r = group.rank();
    let p = random_quadratic(group, rng);
    let l = AdditiveMap::new((0..r).map(|_| random_real(rng, 3)).collect());
    let m = AdditiveMap::new((0..r).map(|_| random_real(rng, 3)).collect());
    let values: Vec<Real> = group.coset_indices(2).iter().map(|_| random_real(rng, 3)).collect();
    let cosets = group.coset_indices(2);
    let rmap = CosetConstantMap::from_fn(group, |idx| values[cosets.iter().position(|c| c == idx).expect("enumerated")].clone());
    PositiveSolutionForm {
        group: group.clone(),
        p,
        l,
        m,
        r: rmap,
    }
}

/// Random character with rational free turns and uniform torsion exponents.
pub fn random_character(group: &GroupSpec, rng: &mut impl Rng) -> CharacterSpec {
    let free = (0..group.rank()).map(|_| rat(rng.gen_range(0..12), 12)).collect();
    let exps = group.torsion().iter().map(|&n| rng.gen_range(0..n)).collect();
    CharacterSpec::new(group, free, exps).expect("valid by construction")
}

/// Random Hermitian form from the sufficient family: `a = b` constant on the
/// cosets of `X^(2)` and equal to 1 on `X^(2)`, so `a·b ≡ 1`.
pub fn random_sufficient_hermitian_form(group: &GroupSpec, rng: &mut impl Rng) -> HermitianSolutionForm {
    let cosets = group.coset_indices(2);
    let flips: Vec<bool> = cosets.iter().map(|c| !c.is_trivial() && rng.gen_bool(0.5)).collect();
    let a = SignMap::from_fn(group, 2, |idx| flips[cosets.iter().position(|c| c == idx).expect("enumerated")]);
    let values: Vec<Real> = cosets.iter().map(|_| random_real(rng, 3)).collect();
    let r = CosetConstantMap::from_fn(group, |idx| values[cosets.iter().position(|c| c == idx).expect("enumerated")].clone());
    HermitianSolutionForm {
        group: group.clone(),
        alpha: random_character(group, rng),
        beta: random_character(group, rng),
        a: a.refine_to_four(group),
        b: a.refine_to_four(group),
        p: random_quadratic(group, rng),
        r,
        support: None,
        sign: 1,
    }
}

/// Groups exercised by the default suite.
pub fn default_suite_groups() -> Vec<GroupSpec> {
    ["Z", "Z^2", "Z x Z/2", "Z/4 x Z/4", "Z/9", "Z/2 x Z/6", "Z^2 x Z/4 x Z/3"]
        .iter()
        .map(|s| s.parse().expect("valid group"))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteCheck {
    pub name: String,
    pub group: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub trials: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_invariant: Option<String>,
    pub checks: Vec<SuiteCheck>,
}

struct SuiteRun {
    checks: Vec<SuiteCheck>,
}

impl SuiteRun {
    /// Records a check; returns `false` once something failed.
    fn record(&mut self, name: &str, group: &GroupSpec, outcome: Result<(), String>) -> bool {
        let passed = outcome.is_ok();
        self.checks.push(SuiteCheck {
            name: name.to_string(),
            group: group.to_string(),
            passed,
            detail: outcome.err(),
        });
        passed
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Radius used for random forms on groups with free part.
pub const SUITE_RADIUS: u32 = 4;

/// Soundness, round trip, census and built-in checks; stops at the first
/// failing invariant. Verdicts do not depend on the seed.
pub fn run_cross_check_suite(groups: &[GroupSpec], trials: usize, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut run = SuiteRun { checks: Vec::new() };
    let finish = |run: SuiteRun| {
        let failed = run.checks.iter().find(|c| !c.passed).map(|c| c.name.clone());
        SuiteReport {
            seed,
            trials,
            passed: failed.is_none(),
            failed_invariant: failed,
            checks: run.checks,
        }
    };

    for group in groups {
        let window = match Window::standard(group.clone(), SUITE_RADIUS) {
            Ok(w) => w,
            Err(e) => {
                run.record("window", group, Err(e.to_string()));
                return finish(run);
            }
        };
        let positive = (0..trials).try_for_each(|t| {
            let form = random_positive_form(group, &mut rng);
            let (f, g) = synth_table(&form, &window).map_err(|e| e.to_string())?;
            let report = check_kac_bernstein(&f, &g, 0.0).map_err(|e| e.to_string())?;
            ensure(report.holds, || format!("trial {t}: synthesized positive pair fails the equation"))?;
            let back = decompose_positive(&f, &g, 0.0).map_err(|e| format!("trial {t}: {e}"))?;
            ensure(back == form, || format!("trial {t}: round trip changed the form"))
        });
        if !run.record("positive soundness and round trip", group, positive) {
            return finish(run);
        }
        let hermitian = (0..trials).try_for_each(|t| {
            let form = random_sufficient_hermitian_form(group, &mut rng);
            let (f, g) = synth_table(&form, &window).map_err(|e| e.to_string())?;
            let report = check_kac_bernstein(&f, &g, 0.0).map_err(|e| e.to_string())?;
            ensure(report.holds, || format!("trial {t}: synthesized Hermitian pair fails the equation"))?;
            let back = decompose_hermitian(&f, &g, 0.0).map_err(|e| format!("trial {t}: {e}"))?;
            let (f2, g2) = synth_table(&back, &window).map_err(|e| e.to_string())?;
            ensure(f2 == f && g2 == g, || format!("trial {t}: decomposition does not reproduce the tables"))
        });
        if !run.record("Hermitian soundness and decomposition", group, hermitian) {
            return finish(run);
        }
        if group.order().is_some_and(|n| n <= 16) {
            let census = enum_sign_solutions(group, DEFAULT_CENSUS_MAX_ORDER, DEFAULT_BUDGET)
                .map_err(|e| e.to_string())
                .and_then(|c| {
                    ensure(
                        c.pairs.iter().all(|p| p.a_x4_constant && p.b_x4_constant),
                        || "a census pair is not constant on cosets of X^(4)".into(),
                    )
                });
            if !run.record("sign census constancy on X^(4) cosets", group, census) {
                return finish(run);
            }
        }
    }

    let (f, g) = builtin_counterexample();
    let cgroup = f.group().clone();
    let counter = (|| {
        let r = check_kac_bernstein(&f, &g, 0.0).map_err(|e| e.to_string())?;
        ensure(r.holds && r.pairs_checked == 256, || "counterexample fails the equation".into())?;
        let form = decompose_hermitian(&f, &g, 0.0).map_err(|e| e.to_string())?;
        ensure(form.alpha.is_trivial() && form.beta.is_trivial(), || "nontrivial characters".into())?;
        let flipped = f
            .with_value(&GroupElement(vec![1, 0]), Value::sign(true))
            .map_err(|e| e.to_string())?;
        let m = check_kac_bernstein(&flipped, &g, 0.0).map_err(|e| e.to_string())?;
        ensure(!m.holds && m.witness.is_some(), || "mutated counterexample still passes".into())
    })();
    if !run.record("counterexample", &cgroup, counter) {
        return finish(run);
    }

    let odd = (|| {
        let f = builtin_odd_quadratic(8).map_err(|e| e.to_string())?;
        ensure(check_kac_bernstein_self(&f, 0.0).holds, || "odd quadratic fails the equation".into())?;
        let d = decompose_self(&f, 0.0).map_err(|e| e.to_string())?;
        ensure(d.multiplicativity_witness.is_some(), || "sign map unexpectedly multiplicative".into())
    })();
    if !run.record("odd quadratic", &GroupSpec::free(2), odd) {
        return finish(run);
    }

    let (f, g) = builtin_vanishing();
    let vanishing = (|| {
        let d = decompose_vanishing(&f, &g, 0.0).map_err(|e| e.to_string())?;
        ensure(d.support_size == 3 && !d.quotient_has_order2, || "wrong support".into())
    })();
    run.record("vanishing support", f.group(), vanishing);
    finish(run)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::check_sign_pair;

    #[test]
    fn counterexample_values() {
        let (f, g) = builtin_counterexample();
        let at = |t: &FuncTable, x: [i64; 2]| t.get(&GroupElement(x.to_vec())).unwrap().clone();
        assert_eq!(at(&f, [1, 1]), Value::one());
        assert_eq!(at(&g, [1, 1]), Value::sign(true));
        assert_eq!(at(&f, [2, 2]), Value::one());
    }

    #[test]
    fn odd_quadratic_values() {
        let f = builtin_odd_quadratic(3).unwrap();
        let at = |x: [i64; 2]| f.get(&GroupElement(x.to_vec())).unwrap().clone();
        assert_eq!(at([1, 1]), Value::sign(true));
        assert_eq!(at([2, 3]), Value::one());
        assert_eq!(at([0, 3]), Value::one());
        assert_eq!(at([-1, 3]), Value::sign(true));
    }

    #[test]
    fn census_on_z3_is_trivial() {
        let c = enum_sign_solutions(&"Z/3".parse().unwrap(), 256, 1000).unwrap();
        assert_eq!(c.count(), 1);
        assert!(c.pairs[0].a.values().iter().all(|v| *v == Value::one()));
    }

    #[test]
    fn census_on_z2_matches_brute_force() {
        let group: GroupSpec = "Z/2".parse().unwrap();
        let c = enum_sign_solutions(&group, 256, 1000).unwrap();
        let w = Window::standard(group, 1).unwrap();
        let mut brute = 0;
        for a1 in [false, true] {
            for b1 in [false, true] {
                let a = FuncTable::new(w.clone(), Kind::Sign, vec![Value::one(), Value::sign(a1)]).unwrap();
                let b = FuncTable::new(w.clone(), Kind::Sign, vec![Value::one(), Value::sign(b1)]).unwrap();
                if check_sign_pair(&a, &b).unwrap().holds {
                    brute += 1;
                    assert!(c.contains(&a, &b));
                }
            }
        }
        assert_eq!(c.count(), brute);
    }

    #[test]
    fn census_budget_and_size_limits() {
        let g: GroupSpec = "Z/4 x Z/4".parse().unwrap();
        assert!(matches!(enum_sign_solutions(&g, 8, 1000), Err(OracleError::TooLarge { .. })));
        assert!(matches!(enum_sign_solutions(&g, 256, 3), Err(OracleError::BudgetExceeded(3))));
        assert!(matches!(enum_sign_solutions(&"Z".parse().unwrap(), 256, 10), Err(OracleError::NotFinite(_))));
    }

    #[test]
    fn restricted_kb_small_cases() {
        let z3: GroupSpec = "Z/3".parse().unwrap();
        let sols = enum_restricted_kb(&z3, &default_log_grid(), 1_000_000).unwrap();
        assert_eq!(sols.len(), 3);
        for (f, g) in &sols {
            assert!(f.values().iter().all(|v| v == f.at(0)));
            assert_eq!(g.at(0).mul(f.at(0)), Value::one());
        }
        let ones = enum_restricted_kb(&"Z/2".parse().unwrap(), &[int(0)], 100).unwrap();
        assert_eq!(ones.len(), 1);
        let z2 = enum_restricted_kb(&"Z/2".parse().unwrap(), &default_log_grid(), 10_000).unwrap();
        assert_eq!(z2.len(), 9);
    }

    #[test]
    fn group_list_counts() {
        let groups = abelian_groups_up_to(16);
        assert_eq!(groups.len(), 25);
        let names: Vec<String> = groups.iter().map(|g| g.to_string()).collect();
        assert!(names.contains(&"Z/2 x Z/2 x Z/2 x Z/2".to_string()));
        assert!(names.contains(&"Z/2 x Z/6".to_string()));
        assert!(names.contains(&"Z/4 x Z/4".to_string()));
    }

    #[test]
    fn suite_passes_on_small_list() {
        let groups: Vec<GroupSpec> = ["Z", "Z/4 x Z/4"].iter().map(|s| s.parse().unwrap()).collect();
        let a = run_cross_check_suite(&groups, 2, 1);
        let b = run_cross_check_suite(&groups, 2, 99);
        assert!(a.passed, "{:?}", a.failed_invariant);
        let verdicts = |r: &SuiteReport| r.checks.iter().map(|c| (c.name.clone(), c.passed)).collect::<Vec<_>>();
        assert_eq!(verdicts(&a), verdicts(&b));
    }
}
