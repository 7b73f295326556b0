//! Finite differences and exhaustive checkers with witness reporting.
//!
//! On box windows a tuple is tested only when every point the identity
//! touches lies inside the window; `coverage` reports the tested fraction.
//! Witnesses are the lexicographically first failing tuple in window order.

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::func::{FuncTable, Kind, RealTable};
use crate::group::{GroupElement, GroupError, Window};
use crate::numeric::{round_sig, Rational, Real, Value};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CheckError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("tables live on different windows")]
    WindowMismatch,
    #[error("tables have different kinds ({0} and {1})")]
    KindMismatch(Kind, Kind),
    #[error("expected a {expected} table, got {got}")]
    WrongKind { expected: Kind, got: Kind },
    #[error("the shifted domain is empty")]
    EmptyDomain,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub x: GroupElement,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<GroupElement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<GroupElement>,
    pub lhs: serde_json::Value,
    pub rhs: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub holds: bool,
    pub pairs_checked: u64,
    pub witness: Option<Witness>,
    #[serde(serialize_with = "rounded")]
    pub coverage: f64,
}

fn rounded<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig(*x))
}

impl CheckReport {
    fn from_scan(scan: Scan, conceivable: f64, witness: impl FnOnce(usize, usize, Mismatch) -> Witness) -> Self {
        let coverage = if conceivable > 0.0 {
            scan.checked as f64 / conceivable
        } else {
            0.0
        };
        CheckReport {
            holds: scan.first.is_none(),
            pairs_checked: scan.checked,
            witness: scan.first.map(|(i, j, m)| witness(i, j, m)),
            coverage,
        }
    }
}

pub(crate) type Mismatch = (serde_json::Value, serde_json::Value);

pub(crate) enum Outcome {
    Skip,
    Pass,
    Fail(Mismatch),
}

pub(crate) struct Scan {
    pub checked: u64,
    pub first: Option<(usize, usize, Mismatch)>,
}

fn scan_row(i: usize, inner: usize, test: &(impl Fn(usize, usize) -> Outcome + Sync)) -> Scan {
    let mut checked = 0;
    let mut first = None;
    for j in 0..inner {
        match test(i, j) {
            Outcome::Skip => {}
            Outcome::Pass => checked += 1,
            Outcome::Fail(m) => {
                checked += 1;
                if first.is_none() {
                    first = Some((i, j, m));
                }
            }
        }
    }
    Scan { checked, first }
}

/// Runs `test` over `outer × inner`; the witness is the first failure in
/// row-major order regardless of how rows are scheduled.
pub(crate) fn scan(outer: usize, inner: usize, test: impl Fn(usize, usize) -> Outcome + Sync) -> Scan {
    #[cfg(feature = "parallel")]
    let rows: Vec<Scan> = {
        use rayon::prelude::*;
        (0..outer).into_par_iter().map(|i| scan_row(i, inner, &test)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Scan> = (0..outer).map(|i| scan_row(i, inner, &test)).collect();
    merge(rows)
}

/// Like [`scan`] over pairs `(x, y)` with `x ± y` in the window; the test
/// receives `(x, y, x+y, x-y, -y)`.
pub(crate) fn scan_balanced(w: &Window, test: impl Fn(usize, usize, usize, usize, usize) -> Outcome + Sync) -> Scan {
    let row = |x: usize| {
        let mut checked = 0;
        let mut first = None;
        w.for_each_balanced_pair(x, |y, s, d, ny| {
            checked += 1;
            if let Outcome::Fail(m) = test(x, y, s, d, ny) {
                if first.is_none() {
                    first = Some((x, y, m));
                }
            }
        });
        Scan { checked, first }
    };
    #[cfg(feature = "parallel")]
    let rows: Vec<Scan> = {
        use rayon::prelude::*;
        (0..w.len()).into_par_iter().map(row).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Scan> = (0..w.len()).map(row).collect();
    merge(rows)
}

fn merge(rows: Vec<Scan>) -> Scan {
    let mut out = Scan {
        checked: 0,
        first: None,
    };
    for row in rows {
        out.checked += row.checked;
        if out.first.is_none() {
            out.first = row.first;
        }
    }
    out
}

fn real_json(r: &Real) -> serde_json::Value {
    serde_json::to_value(r).expect("reals serialize")
}

fn same_window(a: &Window, b: &Window) -> Result<(), CheckError> {
    if a == b {
        Ok(())
    } else {
        Err(CheckError::WindowMismatch)
    }
}

/// `Δ_h T(x) = T(x+h) - T(x)`, undefined where `x+h` leaves the window.
pub fn delta(t: &RealTable, h: &GroupElement) -> Result<RealTable, CheckError> {
    let w = t.window();
    let h = w.group().element(&h.0)?;
    let mut shifted = vec![0i64; h.0.len()];
    let values: Vec<Option<Real>> = (0..w.len())
        .map(|i| {
            for (s, (a, b)) in shifted.iter_mut().zip(w.coords(i).iter().zip(&h.0)) {
                *s = a + b;
            }
            w.group().reduce_in_place(&mut shifted);
            match (t.get(&shifted), t.at(i)) {
                (Some(a), Some(b)) => Some(a - b),
                _ => None,
            }
        })
        .collect();
    if values.iter().all(Option::is_none) {
        return Err(CheckError::EmptyDomain);
    }
    Ok(RealTable::new(w.clone(), values).expect("same window size"))
}

fn binomial_row(n: usize) -> Vec<i128> {
    let mut row = vec![1i128];
    for k in 0..n {
        let next = row[k] * (n - k) as i128 / (k as i128 + 1);
        row.push(next);
    }
    row
}

/// Whether `Δ_h^{n+1} T(x) = 0` for every in-range `(x, h)`.
pub fn check_polynomial(t: &RealTable, n: usize, tol: f64) -> CheckReport {
    let w = t.window();
    let len = w.len();
    let order = n + 1;
    let signed: Vec<Rational> = binomial_row(order)
        .into_iter()
        .enumerate()
        .map(|(k, c)| Rational::from_integer(if (order - k) % 2 == 0 { c } else { -c }))
        .collect();
    let s = scan(len, len, |x, h| {
        let mut acc = Real::zero();
        for (k, c) in signed.iter().enumerate() {
            let Some(p) = w.combine(x, 1, h, k as i64) else {
                return Outcome::Skip;
            };
            let Some(v) = t.at(p) else {
                return Outcome::Skip;
            };
            acc = &acc + &v.scale(c);
        }
        if acc.is_zero_within(tol) {
            Outcome::Pass
        } else {
            Outcome::Fail((real_json(&acc), serde_json::json!("0")))
        }
    });
    CheckReport::from_scan(s, (len * len) as f64, |x, h, (lhs, rhs)| Witness {
        x: w.point(x),
        y: Some(w.point(h)),
        k: None,
        lhs,
        rhs,
    })
}

/// `Δ_{2k} Δ_h² T(x)` at one triple, `None` if out of range.
fn doubled_second_difference(t: &RealTable, x: usize, h: usize, k: usize) -> Option<Real> {
    let w = t.window();
    let x2k = w.combine(x, 1, k, 2)?;
    let at = |base: usize, m: i64| w.combine(base, 1, h, m).and_then(|p| t.at(p));
    let two = Rational::from_integer(2);
    let shifted = &(at(x2k, 2)? - &at(x2k, 1)?.scale(&two)) + at(x2k, 0)?;
    let base = &(at(x, 2)? - &at(x, 1)?.scale(&two)) + at(x, 0)?;
    Some(&shifted - &base)
}

/// Whether `Δ_{2k} Δ_h² T(x) = 0` for every in-range triple `(x, h, k)`.
pub fn check_doubled_second_difference(t: &RealTable, tol: f64) -> CheckReport {
    let steps: Vec<usize> = (0..t.window().len()).collect();
    check_doubled_second_difference_steps(t, &steps, tol)
}

/// Same identity with `h` and `k` restricted to the listed window indices.
pub fn check_doubled_second_difference_steps(t: &RealTable, steps: &[usize], tol: f64) -> CheckReport {
    let w = t.window();
    let ns = steps.len();
    let s = scan(w.len(), ns * ns, |x, hk| {
        let (h, k) = (steps[hk / ns], steps[hk % ns]);
        match doubled_second_difference(t, x, h, k) {
            None => Outcome::Skip,
            Some(v) if v.is_zero_within(tol) => Outcome::Pass,
            Some(v) => Outcome::Fail((real_json(&v), serde_json::json!("0"))),
        }
    });
    CheckReport::from_scan(s, (w.len() * ns * ns) as f64, |x, hk, (lhs, rhs)| Witness {
        x: w.point(x),
        y: Some(w.point(steps[hk / ns])),
        k: Some(w.point(steps[hk % ns])),
        lhs,
        rhs,
    })
}

/// Window indices with every free coordinate in `{-1, 0, 1}`.
pub fn unit_steps(w: &Window) -> Vec<usize> {
    let rank = w.group().rank();
    (0..w.len())
        .filter(|&i| w.coords(i)[..rank].iter().all(|c| c.abs() <= 1))
        .collect()
}

/// Exact values scaled to integers: `log·L` and `turn·D mod D`; zeros are
/// flagged and carry `(0, 0)`.
struct Packed {
    zero: Vec<bool>,
    log: Vec<i128>,
    turn: Vec<i128>,
}

struct PackedTables {
    f: Packed,
    g: Packed,
    turn_den: i128,
}

impl PackedTables {
    /// Whether `f(s) g(d) = f(x) f(y) g(x) g(ny)`.
    fn holds(&self, x: usize, y: usize, s: usize, d: usize, ny: usize) -> bool {
        let (f, g) = (&self.f, &self.g);
        let lz = f.zero[s] || g.zero[d];
        let rz = f.zero[x] || f.zero[y] || g.zero[x] || g.zero[ny];
        if lz || rz {
            return lz == rz;
        }
        f.log[s] + g.log[d] == f.log[x] + f.log[y] + g.log[x] + g.log[ny]
            && (self.turn_den == 1
                || (f.turn[s] + g.turn[d] - f.turn[x] - f.turn[y] - g.turn[x] - g.turn[ny]) % self.turn_den == 0)
    }
}

/// Logs are bounded by this after scaling so sums of four cannot overflow.
const PACK_LIMIT: i128 = 1 << 100;

fn pack(f: &FuncTable, g: &FuncTable) -> Option<PackedTables> {
    let polar = |v: &Value| match v {
        Value::Polar { log_modulus, turn } => Some((*log_modulus, *turn)),
        _ => None,
    };
    let all = || f.values().iter().chain(g.values()).filter_map(polar);
    let logs: Vec<Rational> = all().map(|p| p.0).collect();
    let turns: Vec<Rational> = all().map(|p| p.1).collect();
    let log_den = lcm_checked(&logs)?;
    let turn_den = lcm_checked(&turns)?;
    let conv = |t: &FuncTable| -> Option<Packed> {
        let mut p = Packed {
            zero: Vec::with_capacity(t.values().len()),
            log: Vec::with_capacity(t.values().len()),
            turn: Vec::with_capacity(t.values().len()),
        };
        for v in t.values() {
            let (z, l, r) = match v {
                Value::Zero => (true, 0, 0),
                Value::Polar { log_modulus, turn } => {
                    let l = log_modulus.numer().checked_mul(log_den / log_modulus.denom())?;
                    if l.abs() >= PACK_LIMIT {
                        return None;
                    }
                    let r = turn.numer() * (turn_den / turn.denom());
                    (false, l, r.rem_euclid(turn_den))
                }
                Value::Approx(_) => return None,
            };
            p.zero.push(z);
            p.log.push(l);
            p.turn.push(r);
        }
        Some(p)
    };
    Some(PackedTables {
        f: conv(f)?,
        g: conv(g)?,
        turn_den,
    })
}

fn lcm_checked(qs: &[Rational]) -> Option<i128> {
    let mut acc = 1i128;
    for q in qs {
        acc = num_integer::Integer::lcm(&acc, q.denom());
        if acc > 1 << 60 {
            return None;
        }
    }
    Some(acc)
}

/// `f(x+y) g(x-y) = f(x) f(y) g(x) g(-y)` at every in-range pair.
///
/// Exact tables are compared exactly; otherwise `|lhs - rhs| <= tol`.
pub fn check_kac_bernstein(f: &FuncTable, g: &FuncTable, tol: f64) -> Result<CheckReport, CheckError> {
    same_window(f.window(), g.window())?;
    if f.kind() != g.kind() {
        return Err(CheckError::KindMismatch(f.kind(), g.kind()));
    }
    let w = f.window();
    let len = w.len();
    let s = if let Some(p) = pack(f, g) {
        scan_balanced(w, |x, y, s, d, ny| {
            if p.holds(x, y, s, d, ny) {
                Outcome::Pass
            } else {
                let l = f.at(s).mul(g.at(d));
                let r = f.at(x).mul(f.at(y)).mul(&g.at(x).mul(g.at(ny)));
                Outcome::Fail((l.to_json(), r.to_json()))
            }
        })
    } else {
        let exact = f.is_exact() && g.is_exact();
        let fc: Vec<_> = f.values().iter().map(Value::to_complex).collect();
        let gc: Vec<_> = g.values().iter().map(Value::to_complex).collect();
        scan_balanced(w, |x, y, s, d, ny| {
            let ok = if exact {
                let l = f.at(s).mul(g.at(d));
                let r = f.at(x).mul(f.at(y)).mul(&g.at(x).mul(g.at(ny)));
                l == r
            } else {
                (fc[s] * gc[d] - fc[x] * fc[y] * gc[x] * gc[ny]).norm() <= tol
            };
            if ok {
                Outcome::Pass
            } else {
                let l = f.at(s).mul(g.at(d));
                let r = f.at(x).mul(f.at(y)).mul(&g.at(x).mul(g.at(ny)));
                Outcome::Fail((l.to_json(), r.to_json()))
            }
        })
    };
    Ok(CheckReport::from_scan(s, (len * len) as f64, |x, y, (lhs, rhs)| Witness {
        x: w.point(x),
        y: Some(w.point(y)),
        k: None,
        lhs,
        rhs,
    }))
}

/// `f(x+y) f(x-y) = f(x)² f(y) f(-y)`.
pub fn check_kac_bernstein_self(f: &FuncTable, tol: f64) -> CheckReport {
    check_kac_bernstein(f, f, tol).expect("a table is compatible with itself")
}

/// `f(-x) = conj f(x)` at every point.
pub fn check_hermitian(f: &FuncTable, tol: f64) -> CheckReport {
    let w = f.window();
    let s = scan(w.len(), 1, |x, _| {
        let lhs = f.at(w.neg(x));
        let rhs = f.at(x).conj();
        if lhs.close_to(&rhs, tol) {
            Outcome::Pass
        } else {
            Outcome::Fail((lhs.to_json(), rhs.to_json()))
        }
    });
    CheckReport::from_scan(s, w.len() as f64, |x, _, (lhs, rhs)| Witness {
        x: w.point(x),
        y: None,
        k: None,
        lhs,
        rhs,
    })
}

/// `a(x+y) b(x-y) = a(x) a(y) b(x) b(y)` for sign tables, exactly.
pub fn check_sign_pair(a: &FuncTable, b: &FuncTable) -> Result<CheckReport, CheckError> {
    for t in [a, b] {
        if t.kind() != Kind::Sign {
            return Err(CheckError::WrongKind {
                expected: Kind::Sign,
                got: t.kind(),
            });
        }
    }
    same_window(a.window(), b.window())?;
    let w = a.window();
    let len = w.len();
    let neg = |i: usize| a.at(i).as_sign(0.0).expect("validated sign table");
    let an: Vec<bool> = (0..len).map(neg).collect();
    let bn: Vec<bool> = (0..len).map(|i| b.at(i).as_sign(0.0).expect("validated sign table")).collect();
    let s = scan_balanced(w, |x, y, s, d, _| {
        let lhs = an[s] ^ bn[d];
        let rhs = an[x] ^ an[y] ^ bn[x] ^ bn[y];
        if lhs == rhs {
            Outcome::Pass
        } else {
            let j = |neg: bool| serde_json::json!(if neg { -1 } else { 1 });
            Outcome::Fail((j(lhs), j(rhs)))
        }
    });
    Ok(CheckReport::from_scan(s, (len * len) as f64, |x, y, (lhs, rhs)| Witness {
        x: w.point(x),
        y: Some(w.point(y)),
        k: None,
        lhs,
        rhs,
    }))
}

/// Whether the table depends only on the coset of `X^(modulus)`.
///
/// Counts unordered same-coset pairs; the witness is the first point that
/// disagrees with some point of its coset, paired with the first such point.
pub fn check_coset_constant(t: &FuncTable, modulus: u32, tol: f64) -> Result<CheckReport, CheckError> {
    let w = t.window();
    if modulus != 2 && modulus != 4 {
        return Err(GroupError::BadModulus(modulus).into());
    }
    let classes = coset_classes(w, modulus);
    let mut checked = 0u64;
    for members in classes.values() {
        let k = members.len() as u64;
        checked += k * (k.saturating_sub(1)) / 2;
    }
    let mut witness = None;
    'outer: for x in 0..w.len() {
        for &y in &classes[&w.coset_of(x, modulus).residues] {
            if !t.at(x).close_to(t.at(y), tol) {
                witness = Some(Witness {
                    x: w.point(x),
                    y: Some(w.point(y)),
                    k: None,
                    lhs: t.at(x).to_json(),
                    rhs: t.at(y).to_json(),
                });
                break 'outer;
            }
        }
    }
    let n = w.len() as f64;
    Ok(CheckReport {
        holds: witness.is_none(),
        pairs_checked: checked,
        witness,
        coverage: if n > 1.0 { checked as f64 / (n * (n - 1.0) / 2.0) } else { 0.0 },
    })
}

fn coset_classes(w: &Window, modulus: u32) -> std::collections::BTreeMap<Vec<i64>, Vec<usize>> {
    let mut classes: std::collections::BTreeMap<Vec<i64>, Vec<usize>> = Default::default();
    for i in 0..w.len() {
        classes.entry(w.coset_of(i, modulus).residues).or_default().push(i);
    }
    classes
}

/// Every unordered pair `x < y` in a common coset with different values.
pub fn coset_violations(t: &FuncTable, modulus: u32, tol: f64) -> Vec<(GroupElement, GroupElement)> {
    let w = t.window();
    let classes = coset_classes(w, modulus);
    let mut out = Vec::new();
    for x in 0..w.len() {
        for &y in &classes[&w.coset_of(x, modulus).residues] {
            if y > x && !t.at(x).close_to(t.at(y), tol) {
                out.push((w.point(x), w.point(y)));
            }
        }
    }
    out
}

fn real_pair_check(
    t: &RealTable,
    tol: f64,
    side: impl Fn(usize, usize) -> Option<(Real, Real)> + Sync,
) -> CheckReport {
    let w = t.window();
    let len = w.len();
    let s = scan(len, len, |x, y| match side(x, y) {
        None => Outcome::Skip,
        Some((l, r)) if l.close_to(&r, tol) => Outcome::Pass,
        Some((l, r)) => Outcome::Fail((real_json(&l), real_json(&r))),
    });
    CheckReport::from_scan(s, (len * len) as f64, |x, y, (lhs, rhs)| Witness {
        x: w.point(x),
        y: Some(w.point(y)),
        k: None,
        lhs,
        rhs,
    })
}

/// `P(x+y) + P(x-y) = 2P(x) + 2P(y)`.
pub fn check_quadratic(p: &RealTable, tol: f64) -> CheckReport {
    let w = p.window();
    let two = Rational::from_integer(2);
    real_pair_check(p, tol, |x, y| {
        let l = p.at(w.add(x, y)?)? + p.at(w.sub(x, y)?)?;
        let r = (p.at(x)? + p.at(y)?).scale(&two);
        Some((l, r))
    })
}

/// `l(x+y) = l(x) + l(y)`.
pub fn check_cauchy(l: &RealTable, tol: f64) -> CheckReport {
    let w = l.window();
    real_pair_check(l, tol, |x, y| Some((l.at(w.add(x, y)?)?.clone(), l.at(x)? + l.at(y)?)))
}

/// `α(x+y) = α(x) α(y)` on pairs and `|α(x)| = 1` at points.
pub fn check_character(alpha: &FuncTable, tol: f64) -> CheckReport {
    let w = alpha.window();
    let len = w.len();
    let unimodular = scan(len, 1, |x, _| {
        let ok = match alpha.at(x) {
            Value::Zero => false,
            Value::Polar { log_modulus, .. } => *log_modulus.numer() == 0,
            Value::Approx(z) => (z.norm() - 1.0).abs() <= tol,
        };
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail((alpha.at(x).to_json(), serde_json::json!(1)))
        }
    });
    if let Some((x, _, (lhs, rhs))) = unimodular.first {
        return CheckReport {
            holds: false,
            pairs_checked: unimodular.checked,
            witness: Some(Witness {
                x: w.point(x),
                y: None,
                k: None,
                lhs,
                rhs,
            }),
            coverage: 1.0,
        };
    }
    let s = scan(len, len, |x, y| {
        let Some(sum) = w.add(x, y) else {
            return Outcome::Skip;
        };
        let lhs = alpha.at(sum);
        let rhs = alpha.at(x).mul(alpha.at(y));
        if lhs.close_to(&rhs, tol) {
            Outcome::Pass
        } else {
            Outcome::Fail((lhs.to_json(), rhs.to_json()))
        }
    });
    CheckReport::from_scan(s, (len * len) as f64, |x, y, (lhs, rhs)| Witness {
        x: w.point(x),
        y: Some(w.point(y)),
        k: None,
        lhs,
        rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::numeric::{int, rat};
    use num_complex::Complex64;

    fn window(s: &str, radius: u32) -> Window {
        Window::standard(s.parse::<GroupSpec>().unwrap(), radius).unwrap()
    }

    fn real_table(w: &Window, f: impl Fn(i128) -> Rational) -> RealTable {
        RealTable::from_fn(w.clone(), |x| Real::Exact(f(x[0] as i128)))
    }

    #[test]
    fn delta_examples() {
        let w = window("Z", 6);
        let c = delta(&real_table(&w, |_| int(5)), &GroupElement(vec![1])).unwrap();
        assert!(c.values().iter().flatten().all(|v| v.is_zero_within(0.0)));
        let lin = delta(&real_table(&w, int), &GroupElement(vec![1])).unwrap();
        assert!(lin.values().iter().flatten().all(|v| *v == Real::from_int(1)));
        assert_eq!(lin.defined_count(), 12);
        let sq = delta(&real_table(&w, |x| int(x * x)), &GroupElement(vec![3])).unwrap();
        for i in 0..w.len() {
            let x = w.coords(i)[0] as i128;
            match sq.at(i) {
                Some(v) => assert_eq!(*v, Real::from_int(6 * x + 9)),
                None => assert!(x + 3 > 6),
            }
        }
        assert_eq!(delta(&real_table(&window("Z", 1), int), &GroupElement(vec![5])), Err(CheckError::EmptyDomain));
    }

    #[test]
    fn deltas_commute() {
        let w = window("Z^2", 4);
        let t = RealTable::from_fn(w.clone(), |x| Real::from_int((x[0] * x[0] * x[1] + 3 * x[1]) as i128));
        let (h, k) = (GroupElement(vec![1, 2]), GroupElement(vec![-1, 1]));
        let a = delta(&delta(&t, &h).unwrap(), &k).unwrap();
        let b = delta(&delta(&t, &k).unwrap(), &h).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn polynomial_degree() {
        let w = window("Z", 5);
        let sq = real_table(&w, |x| int(x * x));
        assert!(check_polynomial(&sq, 2, 0.0).holds);
        let r = check_polynomial(&sq, 1, 0.0);
        assert!(!r.holds);
        assert!(r.witness.is_some());
    }

    #[test]
    fn doubled_second_difference_examples() {
        let z = window("Z", 6);
        let grp: GroupSpec = "Z".parse().unwrap();
        let t = RealTable::from_fn(z.clone(), |x| {
            let c = x[0] as i128;
            Real::Exact(int(c * c) + rat(c, 2) + if grp.coset_index_of(x, 2).is_trivial() { int(0) } else { int(1) })
        });
        assert!(check_doubled_second_difference(&t, 0.0).holds);
        assert!(!check_doubled_second_difference(&real_table(&z, |x| int(x * x * x)), 0.0).holds);
        assert!(check_doubled_second_difference(&real_table(&z, |_| int(0)), 0.0).holds);
    }

    fn positive(w: &Window, c: Rational) -> FuncTable {
        FuncTable::from_fn(w.clone(), Kind::Positive, |_| Value::polar(c, int(0))).unwrap()
    }

    #[test]
    fn kac_bernstein_constants() {
        let w = window("Z/3", 1);
        let r = check_kac_bernstein(&positive(&w, int(0)), &positive(&w, int(0)), 1e-9).unwrap();
        assert!(r.holds && r.pairs_checked == 9 && r.coverage == 1.0);
        let two = FuncTable::from_fn(w.clone(), Kind::Positive, |_| Value::Approx(Complex64::new(2.0, 0.0))).unwrap();
        let half = FuncTable::from_fn(w.clone(), Kind::Positive, |_| Value::Approx(Complex64::new(0.5, 0.0))).unwrap();
        assert!(check_kac_bernstein(&two, &half, 1e-9).unwrap().holds);
        assert!(!check_kac_bernstein(&two, &two, 1e-9).unwrap().holds);
    }

    #[test]
    fn kac_bernstein_self_examples() {
        let w = window("Z^2", 4);
        let f = FuncTable::from_fn(w.clone(), Kind::Complex, |x| Value::polar(int(0), rat((x[0] * x[1]) as i128, 2))).unwrap();
        assert!(check_kac_bernstein_self(&f, 0.0).holds);
        let w = window("Z", 6);
        let gauss = FuncTable::from_fn(w, Kind::Positive, |x| Value::polar(int((x[0] * x[0]) as i128), int(0))).unwrap();
        assert!(check_kac_bernstein_self(&gauss, 0.0).holds);
    }

    #[test]
    fn kac_bernstein_rejects_mismatch() {
        let a = positive(&window("Z/3", 1), int(0));
        let b = positive(&window("Z/5", 1), int(0));
        assert_eq!(check_kac_bernstein(&a, &b, 0.0), Err(CheckError::WindowMismatch));
    }

    #[test]
    fn float_and_exact_paths_agree() {
        let w = window("Z x Z/4", 3);
        let f = FuncTable::from_fn(w.clone(), Kind::Positive, |x| Value::polar(rat((x[0] * x[0]) as i128, 3), int(0))).unwrap();
        let approx = FuncTable::from_fn(w, Kind::Positive, |x| Value::Approx(Complex64::new(((x[0] * x[0]) as f64 / 3.0).exp(), 0.0))).unwrap();
        let a = check_kac_bernstein_self(&f, 0.0);
        let b = check_kac_bernstein_self(&approx, 1e-6);
        assert!(a.holds && b.holds);
        assert_eq!(a.pairs_checked, b.pairs_checked);
    }

    #[test]
    fn hermitian_examples() {
        let w = window("Z", 2);
        let even = FuncTable::from_fn(w.clone(), Kind::Complex, |x| Value::polar(int((x[0] * x[0]) as i128), int(0))).unwrap();
        assert!(check_hermitian(&even, 0.0).holds);
        let chr = FuncTable::from_fn(w.clone(), Kind::Complex, |x| Value::polar(int(0), rat(x[0] as i128, 7))).unwrap();
        assert!(check_hermitian(&chr, 0.0).holds);
        let bad = FuncTable::from_fn(w.clone(), Kind::Complex, |x| {
            if x[0].abs() == 1 { Value::polar(int(0), rat(1, 4)) } else { Value::one() }
        })
        .unwrap();
        let r = check_hermitian(&bad, 0.0);
        assert_eq!(r.witness.unwrap().x, GroupElement(vec![-1]));
    }

    #[test]
    fn sign_pair_examples() {
        let w = window("Z/2", 1);
        let ones = FuncTable::from_fn(w.clone(), Kind::Sign, |_| Value::one()).unwrap();
        assert!(check_sign_pair(&ones, &ones).unwrap().holds);
        let parity = FuncTable::from_fn(w.clone(), Kind::Sign, |x| Value::sign(x[0] == 1)).unwrap();
        assert!(check_sign_pair(&parity, &parity).unwrap().holds);
        let pos = positive(&w, int(0));
        assert!(check_sign_pair(&pos, &pos).is_err());
    }

    #[test]
    fn coset_constant_examples() {
        let w = window("Z/4 x Z/4", 1);
        let grp = w.group().clone();
        let t = FuncTable::from_fn(w.clone(), Kind::Sign, |x| Value::sign(grp.coset_index_of(x, 2).residues == vec![1, 1])).unwrap();
        assert!(check_coset_constant(&t, 2, 0.0).unwrap().holds);
        let u = FuncTable::from_fn(w.clone(), Kind::Sign, |x| Value::sign(x == [1, 3])).unwrap();
        let r = check_coset_constant(&u, 2, 0.0).unwrap();
        assert!(!r.holds);
        assert!(coset_violations(&u, 2, 0.0).contains(&(GroupElement(vec![1, 1]), GroupElement(vec![1, 3]))));
        assert!(check_coset_constant(&u, 4, 0.0).unwrap().holds);
        assert!(check_coset_constant(&u, 3, 0.0).is_err());
    }

    #[test]
    fn component_equations() {
        let w = window("Z", 5);
        assert!(check_quadratic(&real_table(&w, |x| int(x * x)), 0.0).holds);
        assert!(!check_quadratic(&real_table(&w, |x| int(x * x * x)), 0.0).holds);
        assert!(check_cauchy(&real_table(&w, |x| rat(3 * x, 2)), 0.0).holds);
        assert!(!check_cauchy(&real_table(&w, |x| int(x * x)), 0.0).holds);
        let z4 = window("Z/4", 1);
        let chr = FuncTable::from_fn(z4.clone(), Kind::Complex, |x| Value::polar(int(0), rat(x[0] as i128, 4))).unwrap();
        let r = check_character(&chr, 0.0);
        assert!(r.holds && r.pairs_checked == 16);
        let not_unit = FuncTable::from_fn(z4, Kind::Complex, |x| Value::polar(int(x[0] as i128), int(0))).unwrap();
        assert!(!check_character(&not_unit, 0.0).holds);
    }

    #[test]
    fn witness_is_lexicographically_first() {
        let w = window("Z/5", 1);
        let f = FuncTable::from_fn(w.clone(), Kind::Positive, |x| Value::polar(int((x[0] == 3) as i128), int(0))).unwrap();
        let r = check_kac_bernstein_self(&f, 0.0);
        let wit = r.witness.unwrap();
        let brute = (0..5)
            .flat_map(|x| (0..5).map(move |y| (x, y)))
            .find(|&(x, y)| {
                let v = |p: i64| if p.rem_euclid(5) == 3 { 1 } else { 0 };
                v(x + y) + v(x - y) != 2 * v(x) + v(y) + v(-y)
            })
            .unwrap();
        assert_eq!((wit.x.0[0], wit.y.unwrap().0[0]), brute);
    }
}
