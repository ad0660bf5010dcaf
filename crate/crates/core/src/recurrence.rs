//! Linear recurrences with polynomial coefficients for the constrained
//! partition function `F0`.
//!
//! A recurrence in direction `i` of order `R` asserts
//! `Σ_{r=0}^{R} P_r(λ, b) · F0(b + r·e_i) = 0` for all `b ≥ 0`,
//! with coefficients `P_r` polynomial in `b_1..b_m` (and optionally
//! `λ_1..λ_n`). One recurrence per direction gives linear-time,
//! constant-memory evaluation of `F0(b)` via `march`; `verify` checks a
//! candidate recurrence exactly against the series oracle on a window.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{Signed, Zero};

use crate::genfun::{self, ConstraintMatrix, Rates, Value};
use crate::poly::MultiPoly;
use crate::rational::{parse_rational, to_fraction_string, BigRational};
use crate::{Error, Result};

/// One pure linear recurrence with polynomial coefficients, advancing
/// `F0` along coordinate `direction` (1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PRecurrence {
    direction: usize,
    order: usize,
    coeffs: Vec<MultiPoly>, // P_0 ..= P_order
}

/// Variable names a coefficient polynomial may use: `lam<j>` with
/// `1 ≤ j ≤ n` (n = 0 allowed) and `b<i>` with `1 ≤ i ≤ m`. Returns
/// `(n, m)` as declared by the highest indices present in the list.
fn classify_vars(vars: &[String]) -> Result<(usize, usize)> {
    let mut n = 0usize;
    let mut m = 0usize;
    for v in vars {
        if let Some(idx) = v.strip_prefix("lam") {
            let j: usize = idx
                .parse()
                .map_err(|_| Error::invalid(format!("bad coefficient variable `{v}`")))?;
            n = n.max(j);
        } else if let Some(idx) = v.strip_prefix('b') {
            let i: usize = idx
                .parse()
                .map_err(|_| Error::invalid(format!("bad coefficient variable `{v}`")))?;
            m = m.max(i);
        } else {
            return Err(Error::invalid(format!(
                "coefficient variable `{v}` is neither lam<j> nor b<i>"
            )));
        }
    }
    Ok((n, m))
}

impl PRecurrence {
    pub fn new(direction: usize, coeffs: Vec<MultiPoly>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::invalid("a recurrence needs order >= 1 (at least two coefficients)"));
        }
        let order = coeffs.len() - 1;
        if coeffs[order].is_zero() {
            return Err(Error::invalid("leading recurrence coefficient is the zero polynomial"));
        }
        let vars = coeffs[0].vars().to_vec();
        if coeffs.iter().any(|c| c.vars() != vars.as_slice()) {
            return Err(Error::invalid("recurrence coefficients use different variable lists"));
        }
        let (_, m) = classify_vars(&vars)?;
        if direction == 0 || (m > 0 && direction > m) {
            return Err(Error::invalid(format!(
                "direction {direction} out of range for coefficients in b1..b{m}"
            )));
        }
        Ok(PRecurrence { direction, order, coeffs })
    }

    pub fn direction(&self) -> usize {
        self.direction
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    fn assignment(&self, lambda: &[BigRational], b: &[u32]) -> BTreeMap<String, BigRational> {
        let mut map = BTreeMap::new();
        for v in self.coeffs[0].vars() {
            if let Some(idx) = v.strip_prefix("lam") {
                let j: usize = idx.parse().unwrap();
                map.insert(v.clone(), lambda[j - 1].clone());
            } else {
                let i: usize = v[1..].parse().unwrap();
                map.insert(v.clone(), BigRational::from_integer(b[i - 1].into()));
            }
        }
        map
    }

    /// Evaluate coefficient `P_r` at numeric `(λ, b)`.
    pub fn coeff_value(&self, r: usize, lambda: &[BigRational], b: &[u32]) -> Result<BigRational> {
        self.coeffs[r].eval(&self.assignment(lambda, b))
    }

    /// Coefficient `P_r` with `b` substituted, still polynomial in λ.
    fn coeff_in_lambda(&self, r: usize, b: &[u32]) -> MultiPoly {
        let mut map = BTreeMap::new();
        for v in self.coeffs[0].vars() {
            if let Some(idx) = v.strip_prefix('b') {
                let i: usize = idx.parse().unwrap();
                map.insert(v.clone(), BigRational::from_integer(b[i - 1].into()));
            }
        }
        self.coeffs[r].eval_partial(&map)
    }

    /// One forward step: from the window
    /// `known[r] = F0(b + r·e_i)`, `r = 0..order`, compute
    /// `F0(b + order·e_i) = −(Σ_{r<order} P_r(λ,b)·known[r]) / P_order(λ,b)`.
    /// `b` is the base point of the window.
    pub fn step(&self, known: &[BigRational], b: &[u32], lambda: &[BigRational]) -> Result<BigRational> {
        if known.len() != self.order {
            return Err(Error::dim(format!(
                "step needs the {} previous values, got {}",
                self.order,
                known.len()
            )));
        }
        let lead = self.coeff_value(self.order, lambda, b)?;
        if lead.is_zero() {
            return Err(Error::DiscreteSingularity(format!(
                "leading coefficient vanishes at b={b:?} (direction {})",
                self.direction
            )));
        }
        let mut acc = BigRational::zero();
        for r in 0..self.order {
            let c = self.coeff_value(r, lambda, b)?;
            if !c.is_zero() {
                acc += c * &known[r];
            }
        }
        Ok(-acc / lead)
    }

    /// Serialize to the line-based text format (see module docs of
    /// [`from_text`](Self::from_text) for the grammar). Round-trips
    /// bit-exactly.
    pub fn to_text(&self) -> String {
        let (n, m) = classify_vars(self.coeffs[0].vars()).expect("validated at construction");
        let mut s = String::new();
        writeln!(s, "rec direction={} order={} lambdas={} rows={}", self.direction, self.order, n, m)
            .unwrap();
        for (r, p) in self.coeffs.iter().enumerate() {
            write!(s, "P {r} :").unwrap();
            if p.is_zero() {
                write!(s, " 0").unwrap();
            } else {
                let mut first = true;
                for (e, c) in p.terms() {
                    if !first {
                        write!(s, " ;").unwrap();
                    }
                    first = false;
                    write!(s, " {} @", to_fraction_string(c)).unwrap();
                    for x in e {
                        write!(s, " {x}").unwrap();
                    }
                }
            }
            writeln!(s).unwrap();
        }
        writeln!(s, "endrec").unwrap();
        s
    }

    /// Parse the text format:
    ///
    /// ```text
    /// rec direction=1 order=2 lambdas=3 rows=2
    /// P 0 : -1/1 @ 1 0 1 0 0 ; -1/2 @ 0 2 0 0 0
    /// P 1 : ...
    /// P 2 : ...
    /// endrec
    /// ```
    ///
    /// Coefficient `P r` is a `;`-separated list of `num/den @ e1 .. eK`
    /// terms over the variables `lam1..lamN, b1..bM` (K = N + M), or the
    /// literal `0` for the zero polynomial.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let rec = parse_rec_block(&mut lines)?;
        for (lno, line) in lines {
            if !line.trim().is_empty() {
                return Err(Error::parse(lno + 1, 1, "trailing content after endrec"));
            }
        }
        Ok(rec)
    }
}

fn parse_kv(token: &str, key: &str, lno: usize) -> Result<usize> {
    let val = token
        .strip_prefix(key)
        .and_then(|s| s.strip_prefix('='))
        .ok_or_else(|| Error::parse(lno + 1, 1, format!("expected `{key}=<int>`, got `{token}`")))?;
    val.parse()
        .map_err(|_| Error::parse(lno + 1, 1, format!("bad integer in `{token}`")))
}

/// Parse one `rec ... endrec` block from a line iterator (shared by
/// [`PRecurrence::from_text`] and [`RecurrenceSystem::from_text`]).
fn parse_rec_block<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>) -> Result<PRecurrence> {
    let (lno, header) = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or_else(|| Error::parse(1, 1, "missing `rec` header"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 5 || toks[0] != "rec" {
        return Err(Error::parse(lno + 1, 1, "expected `rec direction=I order=R lambdas=N rows=M`"));
    }
    let direction = parse_kv(toks[1], "direction", lno)?;
    let order = parse_kv(toks[2], "order", lno)?;
    let n = parse_kv(toks[3], "lambdas", lno)?;
    let m = parse_kv(toks[4], "rows", lno)?;
    let mut var_names: Vec<String> = (1..=n).map(|j| format!("lam{j}")).collect();
    var_names.extend((1..=m).map(|i| format!("b{i}")));
    let vars: Vec<&str> = var_names.iter().map(|s| s.as_str()).collect();

    let mut coeffs: Vec<MultiPoly> = Vec::with_capacity(order + 1);
    for r in 0..=order {
        let (lno, line) = lines
            .next()
            .ok_or_else(|| Error::parse(lno + 1, 1, format!("missing coefficient line P {r}")))?;
        let body = line
            .trim()
            .strip_prefix(&format!("P {r} :"))
            .ok_or_else(|| Error::parse(lno + 1, 1, format!("expected `P {r} : ...`")))?
            .trim();
        let mut p = MultiPoly::zero(&vars);
        if body != "0" {
            for term in body.split(';') {
                let (coef, exps) = term
                    .split_once('@')
                    .ok_or_else(|| Error::parse(lno + 1, 1, "term missing `@`"))?;
                let c = parse_rational(coef.trim())?;
                let e: Vec<u32> = exps
                    .split_whitespace()
                    .map(|t| t.parse::<u32>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::parse(lno + 1, 1, "bad exponent"))?;
                if e.len() != vars.len() {
                    return Err(Error::parse(
                        lno + 1,
                        1,
                        format!("exponent vector has {} entries, want {}", e.len(), vars.len()),
                    ));
                }
                p.add_term(e, c);
            }
        }
        coeffs.push(p);
    }
    match lines.next() {
        Some((_, l)) if l.trim() == "endrec" => PRecurrence::new(direction, coeffs),
        Some((lno, _)) => Err(Error::parse(lno + 1, 1, "expected `endrec`")),
        None => Err(Error::parse(lno + 1, 1, "unterminated rec block")),
    }
}

// ---------------------------------------------------------------------------
// verification
// ---------------------------------------------------------------------------

/// Result of checking a recurrence against the series oracle on a window.
#[derive(Clone, Debug)]
pub struct VerifyOutcome {
    pub pass: bool,
    /// First failing point and its (nonzero) residual, if any.
    pub counterexample: Option<(Vec<u32>, Value)>,
}

/// Iterate a box `lo..=hi` componentwise in lexicographic order.
fn box_points(lo: &[u32], hi: &[u32]) -> Vec<Vec<u32>> {
    let mut pts = vec![lo.to_vec()];
    let mut out = Vec::new();
    while let Some(p) = pts.pop() {
        out.push(p.clone());
        // odometer increment, last coordinate fastest
        let mut q = p;
        for i in (0..q.len()).rev() {
            if q[i] < hi[i] {
                q[i] += 1;
                pts.push(q);
                break;
            }
            q[i] = lo[i];
        }
    }
    out
}

/// Check `Σ_r P_r(λ, b)·F0(b + r·e_i) = 0` exactly for every `b` in
/// `lo..=hi`. With `Rates::Symbolic` the identity is checked as a
/// polynomial identity in λ at each window point. Reference `F0` values
/// come from the truncated-series oracle.
pub fn verify(
    rec: &PRecurrence,
    a: &ConstraintMatrix,
    rates: &Rates,
    lo: &[u32],
    hi: &[u32],
) -> Result<VerifyOutcome> {
    a.check_b(lo)?;
    a.check_b(hi)?;
    rates.check_against(a)?;
    if lo.iter().zip(hi).any(|(l, h)| l > h) {
        return Err(Error::invalid("empty verification window"));
    }
    let i = rec.direction - 1;
    if rec.direction > a.rows() {
        return Err(Error::invalid(format!(
            "recurrence direction {} exceeds {} constraint rows",
            rec.direction,
            a.rows()
        )));
    }
    let mut ext = hi.to_vec();
    ext[i] += rec.order as u32;

    match rates {
        Rates::Numeric(lam) => {
            let table = genfun::series_table(a, lam, &ext)?;
            for b in box_points(lo, hi) {
                let mut residual = BigRational::zero();
                let mut shifted = b.clone();
                for r in 0..=rec.order {
                    shifted[i] = b[i] + r as u32;
                    let c = rec.coeff_value(r, lam, &b)?;
                    if !c.is_zero() {
                        residual += c * table.value(&shifted);
                    }
                }
                if !residual.is_zero() {
                    return Ok(VerifyOutcome { pass: false, counterexample: Some((b, Value::Exact(residual))) });
                }
            }
            Ok(VerifyOutcome { pass: true, counterexample: None })
        }
        Rates::Symbolic(n) => {
            let table = genfun::series_table_poly(a, &ext)?;
            let var_names: Vec<String> = (1..=*n).map(|j| format!("lam{j}")).collect();
            let vars: Vec<&str> = var_names.iter().map(|s| s.as_str()).collect();
            for b in box_points(lo, hi) {
                let mut residual = MultiPoly::zero(&vars);
                let mut shifted = b.clone();
                for r in 0..=rec.order {
                    shifted[i] = b[i] + r as u32;
                    let c = rec.coeff_in_lambda(r, &b).align_to(&vars)?;
                    if !c.is_zero() {
                        let f = &table[genfun::poly_table_index(&ext, &shifted)];
                        residual = residual.add(&c.mul(f)?)?;
                    }
                }
                if !residual.is_zero() {
                    return Ok(VerifyOutcome { pass: false, counterexample: Some((b, Value::Poly(residual))) });
                }
            }
            Ok(VerifyOutcome { pass: true, counterexample: None })
        }
    }
}

// ---------------------------------------------------------------------------
// marching
// ---------------------------------------------------------------------------

/// A complete set of recurrences (one per constraint row) plus the seed
/// block of `F0` values on the corner box `Π [0, R_i)`, stored as
/// polynomials in λ. Seeds are always regenerated from the series method
/// at construction, never supplied by the caller.
#[derive(Clone, Debug)]
pub struct RecurrenceSystem {
    a: ConstraintMatrix,
    recs: Vec<PRecurrence>, // index i-1 = direction i
    seed_dims: Vec<u32>,    // R_i - 1 per coordinate
    seeds: Vec<MultiPoly>,  // series values over the corner box
}

impl RecurrenceSystem {
    pub fn new(a: ConstraintMatrix, mut recs: Vec<PRecurrence>) -> Result<Self> {
        if recs.len() != a.rows() {
            return Err(Error::invalid(format!(
                "need one recurrence per constraint row: {} rows, {} recurrences",
                a.rows(),
                recs.len()
            )));
        }
        recs.sort_by_key(|r| r.direction);
        for (i, r) in recs.iter().enumerate() {
            if r.direction != i + 1 {
                return Err(Error::invalid("recurrence directions must be exactly 1..=m, no repeats"));
            }
            let (n, m) = classify_vars(r.coeffs[0].vars())?;
            if n > a.cols() || m > a.rows() {
                return Err(Error::dim(format!(
                    "recurrence coefficients reference lam{n}/b{m} but the matrix is {}x{}",
                    a.rows(),
                    a.cols()
                )));
            }
        }
        let seed_dims: Vec<u32> = recs.iter().map(|r| r.order as u32 - 1).collect();
        let seeds = genfun::series_table_poly(&a, &seed_dims)?;
        Ok(RecurrenceSystem { a, recs, seed_dims, seeds })
    }

    pub fn matrix(&self) -> &ConstraintMatrix {
        &self.a
    }

    pub fn recurrences(&self) -> &[PRecurrence] {
        &self.recs
    }

    pub fn recurrence(&self, direction: usize) -> &PRecurrence {
        &self.recs[direction - 1]
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "recsys").unwrap();
        writeln!(s, "matrix {}", self.a).unwrap();
        for r in &self.recs {
            s.push_str(&r.to_text());
        }
        writeln!(s, "end").unwrap();
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().peekable();
        match lines.next() {
            Some((_, l)) if l.trim() == "recsys" => {}
            _ => return Err(Error::parse(1, 1, "expected `recsys` header")),
        }
        let a = match lines.next() {
            Some((lno, l)) => {
                let body = l
                    .trim()
                    .strip_prefix("matrix ")
                    .ok_or_else(|| Error::parse(lno + 1, 1, "expected `matrix <rows>`"))?;
                ConstraintMatrix::parse(body)?
            }
            None => return Err(Error::parse(2, 1, "missing matrix line")),
        };
        let mut recs = Vec::new();
        loop {
            match lines.peek() {
                Some((_, l)) if l.trim() == "end" => break,
                Some((_, l)) if l.trim().is_empty() => {
                    lines.next();
                }
                Some(_) => recs.push(parse_rec_block(&mut lines)?),
                None => return Err(Error::parse(1, 1, "unterminated recsys block (missing `end`)")),
            }
        }
        RecurrenceSystem::new(a, recs)
    }
}

/// Evaluation counters for one `march` call. `peak_window_values` is the
/// largest total number of window rationals retained at any moment — the
/// structural memory bound (≤ Σ_i R_i regardless of the target point).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MarchStats {
    /// Recurrence steps taken.
    pub steps: u64,
    /// Singularities rerouted through another direction.
    pub reroutes: u64,
    /// Blocked points computed by the series method directly.
    pub series_fallbacks: u64,
    /// Peak number of simultaneously retained window values.
    pub peak_window_values: usize,
}

struct Marcher<'a> {
    sys: &'a RecurrenceSystem,
    lambda: &'a [BigRational],
    seed_values: Vec<BigRational>,
    stats: MarchStats,
    live_values: usize,
}

impl<'a> Marcher<'a> {
    fn seed(&self, b: &[u32]) -> Option<&BigRational> {
        if b.iter().zip(&self.sys.seed_dims).all(|(x, d)| x <= d) {
            Some(&self.seed_values[genfun::poly_table_index(&self.sys.seed_dims, b)])
        } else {
            None
        }
    }

    /// `F0(b)`, choosing the highest non-excluded direction whose
    /// coordinate is large enough to march. `excluded` carries the
    /// directions already blocked by singularities upstream, so the
    /// reroute chain always terminates.
    fn value(&mut self, b: &[u32], excluded: &mut Vec<usize>) -> Result<BigRational> {
        if let Some(v) = self.seed(b) {
            return Ok(v.clone());
        }
        let pick = (0..b.len())
            .rev()
            .find(|&i| !excluded.contains(&i) && b[i] >= self.sys.recs[i].order as u32);
        match pick {
            Some(i) => self.march_direction(i, b, excluded),
            None => {
                // every admissible direction is blocked: compute this one
                // point directly and let the caller resume
                self.stats.series_fallbacks += 1;
                Ok(genfun::f0(&self.sys.a, &Rates::Numeric(self.lambda.to_vec()), b)?.unwrap_exact())
            }
        }
    }

    /// Slide a window of `R_i` values from the low edge up to `b` along
    /// direction `i` (0-based here), holding the other coordinates fixed.
    fn march_direction(&mut self, i: usize, b: &[u32], excluded: &mut Vec<usize>) -> Result<BigRational> {
        let rec = &self.sys.recs[i];
        let order = rec.order;
        let mut window: Vec<BigRational> = Vec::with_capacity(order);
        for r in 0..order as u32 {
            let mut p = b.to_vec();
            p[i] = r;
            let v = self.value(&p, excluded)?;
            window.push(v);
            self.live_values += 1;
            self.stats.peak_window_values = self.stats.peak_window_values.max(self.live_values);
        }
        let mut base = b.to_vec();
        for t in 0..=(b[i] - order as u32) {
            base[i] = t;
            let next = match rec.step(&window, &base, self.lambda) {
                Ok(v) => {
                    self.stats.steps += 1;
                    v
                }
                Err(Error::DiscreteSingularity(_)) => {
                    // blocked at base + order·e_i: reroute via the
                    // remaining directions, or compute it directly
                    self.stats.reroutes += 1;
                    let mut blocked = b.to_vec();
                    blocked[i] = t + order as u32;
                    excluded.push(i);
                    let v = self.value(&blocked, excluded);
                    excluded.pop();
                    v?
                }
                Err(e) => return Err(e),
            };
            window.rotate_left(1);
            let last = window.len() - 1;
            window[last] = next;
        }
        self.live_values -= order;
        Ok(window.pop().expect("order >= 1"))
    }
}

/// Exact `F0(b)` using only the recurrence system, the seed block, and
/// `O(Σ_i R_i)` retained values. Work is `O(Σ b_i)` recurrence steps (for
/// fixed orders and dimension).
pub fn march(sys: &RecurrenceSystem, lambda: &[BigRational], b: &[u32]) -> Result<BigRational> {
    march_with_stats(sys, lambda, b).map(|(v, _)| v)
}

pub fn march_with_stats(
    sys: &RecurrenceSystem,
    lambda: &[BigRational],
    b: &[u32],
) -> Result<(BigRational, MarchStats)> {
    sys.a.check_b(b)?;
    if lambda.len() != sys.a.cols() {
        return Err(Error::dim(format!(
            "{} rates for a matrix with {} columns",
            lambda.len(),
            sys.a.cols()
        )));
    }
    if lambda.iter().any(|x| !x.is_positive()) {
        return Err(Error::invalid("rates must be positive"));
    }
    let assignment: BTreeMap<String, BigRational> = (1..=sys.a.cols())
        .map(|j| (format!("lam{j}"), lambda[j - 1].clone()))
        .collect();
    let seed_values: Vec<BigRational> = sys
        .seeds
        .iter()
        .map(|p| p.eval(&assignment))
        .collect::<Result<_>>()?;
    let mut m = Marcher { sys, lambda, seed_values, stats: MarchStats::default(), live_values: 0 };
    let v = m.value(b, &mut Vec::new())?;
    Ok((v, m.stats))
}
