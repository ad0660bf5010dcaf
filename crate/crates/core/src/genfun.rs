//! Joint law of independent Poisson variables `X_1..X_n` conditioned on
//! linear constraints `A·X = b`.
//!
//! Everything reduces to the partition function
//! `F0(b) = Σ_{A k = b} Π_j λ_j^{k_j} / k_j!`,
//! the coefficient of `z^b` in `exp(Σ_j λ_j z^{A_j})` where `A_j` is the
//! j-th column. Conditional factorial moments are ratios of shifted `F0`
//! values scaled by powers of λ:
//!
//! * `E[X_j^(r) | Y=b] = λ_j^r · F0(b − r·A_j) / F0(b)`
//! * `E[X_i X_j | Y=b] = λ_i λ_j · F0(b − A_i − A_j) / F0(b)` for `i ≠ j`.
//!
//! The default `F0` algorithm multiplies truncated power series over a
//! dense box (exact, polynomial time); `enumerate_support` provides the
//! independent brute-force oracle the tests check it against.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::poly::MultiPoly;
use crate::rational::{factorial, ln, to_f64, BigRational};
use crate::{Error, Result};

/// Non-negative integer constraint matrix (m rows, n columns). Columns are
/// per-variable exponent vectors; a column of zeros would leave its
/// variable unconstrained (conditional law plain Poisson, partition
/// function divergent), so such matrices are rejected at construction.
#[derive(Clone, PartialEq, Eq)]
pub struct ConstraintMatrix {
    m: usize,
    n: usize,
    entries: Vec<u32>, // row-major
}

impl ConstraintMatrix {
    pub fn new(m: usize, n: usize, entries: Vec<u32>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::invalid("constraint matrix needs at least one row and one column"));
        }
        if entries.len() != m * n {
            return Err(Error::dim(format!(
                "constraint matrix {}x{} needs {} entries, got {}",
                m,
                n,
                m * n,
                entries.len()
            )));
        }
        let a = ConstraintMatrix { m, n, entries };
        for j in 0..n {
            if (0..m).all(|i| a.at(i, j) == 0) {
                return Err(Error::ZeroColumn { col: j + 1 });
            }
        }
        Ok(a)
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::dim("ragged constraint matrix rows"));
        }
        Self::new(m, n, rows.concat())
    }

    /// Parse `"1 0 1; 0 1 1"` (rows separated by `;` or newlines, entries
    /// by whitespace).
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for (lno, line) in text.split([';', '\n']).enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut row = Vec::new();
            for tok in line.split_whitespace() {
                let v: u32 = tok.parse().map_err(|_| {
                    Error::parse(lno + 1, 1, format!("bad matrix entry `{tok}` (want a non-negative integer)"))
                })?;
                row.push(v);
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::invalid("empty constraint matrix"));
        }
        Self::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n + j]
    }

    /// Column j as an exponent vector of length m.
    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.m).map(|i| self.at(i, j)).collect()
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn check_b(&self, b: &[u32]) -> Result<()> {
        if b.len() != self.m {
            return Err(Error::dim(format!(
                "constraint vector has {} entries but the matrix has {} rows",
                b.len(),
                self.m
            )));
        }
        Ok(())
    }

    /// Canonical polynomial variable list for this matrix: `lam1..lamN`
    /// then `b1..bM`.
    pub fn poly_vars(&self) -> Vec<String> {
        let mut v: Vec<String> = (1..=self.n).map(|j| format!("lam{j}")).collect();
        v.extend((1..=self.m).map(|i| format!("b{i}")));
        v
    }
}

impl fmt::Display for ConstraintMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.m {
            if i > 0 {
                write!(f, " ; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for ConstraintMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConstraintMatrix[{}]", self)
    }
}

/// Poisson rates: positive numeric values, or symbolic indeterminates
/// `lam1..lamN`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rates {
    Numeric(Vec<BigRational>),
    Symbolic(usize),
}

impl Rates {
    pub fn numeric(v: Vec<BigRational>) -> Result<Self> {
        if v.iter().any(|x| !x.is_positive()) {
            return Err(Error::invalid("rates must be positive"));
        }
        Ok(Rates::Numeric(v))
    }

    pub fn len(&self) -> usize {
        match self {
            Rates::Numeric(v) => v.len(),
            Rates::Symbolic(n) => *n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn check_against(&self, a: &ConstraintMatrix) -> Result<()> {
        if self.len() != a.cols() {
            return Err(Error::dim(format!(
                "{} rates for a matrix with {} columns",
                self.len(),
                a.cols()
            )));
        }
        Ok(())
    }
}

/// Exact value of an `F0`-type quantity: a rational for numeric rates, a
/// polynomial in `lam1..lamN` for symbolic rates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Exact(BigRational),
    Poly(MultiPoly),
}

impl Value {
    pub fn unwrap_exact(self) -> BigRational {
        match self {
            Value::Exact(r) => r,
            Value::Poly(p) => panic!("expected numeric value, got polynomial {p}"),
        }
    }

    pub fn unwrap_poly(self) -> MultiPoly {
        match self {
            Value::Poly(p) => p,
            Value::Exact(r) => panic!("expected polynomial value, got rational {r}"),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) => write!(f, "{r}"),
            Value::Poly(p) => write!(f, "{p}"),
        }
    }
}

/// All `k ≥ 0` with `A k = b`, in lexicographic order (deterministic).
pub fn enumerate_support(a: &ConstraintMatrix, b: &[u32]) -> Result<Vec<Vec<u32>>> {
    a.check_b(b)?;
    fn rec(a: &ConstraintMatrix, j: usize, cur: &mut Vec<u32>, rem: &[u32], out: &mut Vec<Vec<u32>>) {
        if j == a.cols() {
            if rem.iter().all(|&r| r == 0) {
                out.push(cur.clone());
            }
            return;
        }
        // tightest bound on k_j from the remaining budget
        let mut kmax = u32::MAX;
        for i in 0..a.rows() {
            let aij = a.at(i, j);
            if aij > 0 {
                kmax = kmax.min(rem[i] / aij);
            }
        }
        debug_assert!(kmax < u32::MAX); // no zero columns by construction
        let mut next: Vec<u32> = rem.to_vec();
        for k in 0..=kmax {
            cur[j] = k;
            rec(a, j + 1, cur, &next, out);
            if k < kmax {
                for i in 0..a.rows() {
                    next[i] -= a.at(i, j);
                }
            }
        }
        cur[j] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; a.cols()];
    rec(a, 0, &mut cur, b, &mut out);
    Ok(out)
}

/// Brute-force `F0(b)` by summing over the support. Exponential in the
/// worst case; used as the independent oracle and for tiny instances.
pub fn f0_enumerate(a: &ConstraintMatrix, rates: &Rates, b: &[u32]) -> Result<Value> {
    rates.check_against(a)?;
    let support = enumerate_support(a, b)?;
    match rates {
        Rates::Numeric(lam) => {
            let mut acc = BigRational::zero();
            for k in &support {
                let mut t = BigRational::one();
                for (j, &kj) in k.iter().enumerate() {
                    t *= lam[j].pow(kj as i32);
                    t /= BigRational::from_integer(factorial(kj));
                }
                acc += t;
            }
            Ok(Value::Exact(acc))
        }
        Rates::Symbolic(n) => {
            let var_names: Vec<String> = (1..=*n).map(|j| format!("lam{j}")).collect();
            let vars: Vec<&str> = var_names.iter().map(|s| s.as_str()).collect();
            let mut p = MultiPoly::zero(&vars);
            for k in &support {
                let denom: BigInt = k.iter().map(|&kj| factorial(kj)).product();
                p.add_term(k.clone(), BigRational::new(BigInt::one(), denom));
            }
            Ok(Value::Poly(p))
        }
    }
}

// ---------------------------------------------------------------------------
// dense truncated-series engine
// ---------------------------------------------------------------------------

/// Exact `F0` values on the whole box `0 ≤ b ≤ bmax`, stored as scaled
/// integers over one common denominator so the hot loop is pure bigint
/// multiply-add.
pub struct F0Table {
    dims: Vec<u32>,
    strides: Vec<usize>,
    numerators: Vec<BigInt>,
    denominator: BigInt,
}

impl F0Table {
    fn index(&self, b: &[u32]) -> Option<usize> {
        if b.len() != self.dims.len() {
            return None;
        }
        let mut idx = 0usize;
        for (i, &bi) in b.iter().enumerate() {
            if bi > self.dims[i] {
                return None;
            }
            idx += bi as usize * self.strides[i];
        }
        Some(idx)
    }

    /// `F0(b)`, reduced. Panics if `b` is outside the box.
    pub fn value(&self, b: &[u32]) -> BigRational {
        self.try_value(b).expect("point outside the precomputed box")
    }

    pub fn try_value(&self, b: &[u32]) -> Option<BigRational> {
        let idx = self.index(b)?;
        Some(BigRational::new(self.numerators[idx].clone(), self.denominator.clone()))
    }

    /// `F0(b - delta)` treating any negative coordinate as an empty
    /// support (value 0).
    pub fn shifted_value(&self, b: &[u32], delta: &[u32]) -> BigRational {
        let mut s = Vec::with_capacity(b.len());
        for (bi, di) in b.iter().zip(delta) {
            if di > bi {
                return BigRational::zero();
            }
            s.push(bi - di);
        }
        self.value(&s)
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }
}

/// Multiply the truncated expansions of `exp(λ_j z^{A_j})` over the box
/// `0 ≤ e ≤ bmax`; entry `e` of the result is `F0(e)`.
pub fn series_table(a: &ConstraintMatrix, lambda: &[BigRational], bmax: &[u32]) -> Result<F0Table> {
    a.check_b(bmax)?;
    if lambda.len() != a.cols() {
        return Err(Error::dim(format!(
            "{} rates for a matrix with {} columns",
            lambda.len(),
            a.cols()
        )));
    }
    let m = a.rows();
    let mut strides = vec![0usize; m];
    let mut size = 1usize;
    for i in (0..m).rev() {
        strides[i] = size;
        size *= bmax[i] as usize + 1;
    }
    let mut data = vec![BigInt::zero(); size];
    data[0] = BigInt::one();
    let mut denominator = BigInt::one();

    for j in 0..a.cols() {
        // truncation order of exp(λ_j z^{A_j}) within the box
        let mut cap = u32::MAX;
        for i in 0..m {
            let aij = a.at(i, j);
            if aij > 0 {
                cap = cap.min(bmax[i] / aij);
            }
        }
        debug_assert!(cap < u32::MAX);
        // term k of the factor is λ^k/k!; with λ = p/q we scale the whole
        // factor by q^cap * cap!: term_k = p^k q^(cap-k) cap!/k!  (integer)
        let p = lambda[j].numer().clone();
        let q = lambda[j].denom().clone();
        let capf = factorial(cap);
        let mut terms: Vec<BigInt> = Vec::with_capacity(cap as usize + 1);
        let mut kf_quot = capf.clone(); // cap!/k!
        for k in 0..=cap {
            let t = p.pow(k) * q.pow(cap - k) * &kf_quot;
            terms.push(t);
            if k < cap {
                kf_quot /= BigInt::from(k + 1);
            }
        }
        denominator *= q.pow(cap) * capf;

        // column offset in the linear index
        let col = a.column(j);
        let step: usize = (0..m).map(|i| col[i] as usize * strides[i]).sum();
        if step == 0 {
            unreachable!("zero column rejected at construction");
        }

        // in-place update in descending index order: reads are at strictly
        // smaller indices, still holding previous-factor values
        let mut e = bmax.to_vec();
        for idx in (0..size).rev() {
            let mut acc = &data[idx] * &terms[0];
            let mut back = idx;
            for (k, term) in terms.iter().enumerate().skip(1) {
                // check e >= k*col componentwise
                if (0..m).any(|i| (k as u64) * col[i] as u64 > e[i] as u64) {
                    break;
                }
                back -= step;
                if !data[back].is_zero() {
                    acc += term * &data[back];
                }
            }
            data[idx] = acc;
            // decrement odometer e
            if idx > 0 {
                for i in (0..m).rev() {
                    if e[i] > 0 {
                        e[i] -= 1;
                        break;
                    }
                    e[i] = bmax[i];
                }
            }
        }
    }

    Ok(F0Table { dims: bmax.to_vec(), strides, numerators: data, denominator })
}

/// Symbolic variant: the table entries are polynomials in `lam1..lamN`.
/// Intended for small boxes (fixture tables, symbolic verification).
pub fn series_table_poly(a: &ConstraintMatrix, bmax: &[u32]) -> Result<Vec<MultiPoly>> {
    a.check_b(bmax)?;
    let m = a.rows();
    let n = a.cols();
    let var_names: Vec<String> = (1..=n).map(|j| format!("lam{j}")).collect();
    let vars: Vec<&str> = var_names.iter().map(|s| s.as_str()).collect();
    let mut strides = vec![0usize; m];
    let mut size = 1usize;
    for i in (0..m).rev() {
        strides[i] = size;
        size *= bmax[i] as usize + 1;
    }
    let shared = MultiPoly::zero(&vars).shared_vars();
    let mut data: Vec<MultiPoly> = vec![MultiPoly::zero_with(Arc::clone(&shared)); size];
    data[0] = MultiPoly::constant(&vars, BigRational::one());

    for j in 0..n {
        let mut cap = u32::MAX;
        for i in 0..m {
            let aij = a.at(i, j);
            if aij > 0 {
                cap = cap.min(bmax[i] / aij);
            }
        }
        // term k: lam_j^k / k!
        let mut terms: Vec<MultiPoly> = Vec::with_capacity(cap as usize + 1);
        for k in 0..=cap {
            let mut e = vec![0u32; n];
            e[j] = k;
            terms.push(
                MultiPoly::from_terms(
                    &vars,
                    vec![(e, BigRational::new(BigInt::one(), factorial(k)))],
                )
                .unwrap(),
            );
        }
        let col = a.column(j);
        let step: usize = (0..m).map(|i| col[i] as usize * strides[i]).sum();
        let mut e = bmax.to_vec();
        for idx in (0..size).rev() {
            let mut acc = data[idx].clone(); // k = 0 term is identity
            let mut back = idx;
            for (k, term) in terms.iter().enumerate().skip(1) {
                if (0..m).any(|i| (k as u64) * col[i] as u64 > e[i] as u64) {
                    break;
                }
                back -= step;
                if !data[back].is_zero() {
                    acc = acc.add(&data[back].mul(term).unwrap()).unwrap();
                }
            }
            data[idx] = acc;
            if idx > 0 {
                for i in (0..m).rev() {
                    if e[i] > 0 {
                        e[i] -= 1;
                        break;
                    }
                    e[i] = bmax[i];
                }
            }
        }
    }
    Ok(data)
}

/// Linear index into a `series_table_poly` result.
pub fn poly_table_index(bmax: &[u32], b: &[u32]) -> usize {
    let mut idx = 0usize;
    let mut stride = 1usize;
    for i in (0..bmax.len()).rev() {
        assert!(b[i] <= bmax[i]);
        idx += b[i] as usize * stride;
        stride *= bmax[i] as usize + 1;
    }
    idx
}

/// `F0(b)` by the truncated-series product (default algorithm).
pub fn f0(a: &ConstraintMatrix, rates: &Rates, b: &[u32]) -> Result<Value> {
    rates.check_against(a)?;
    a.check_b(b)?;
    match rates {
        Rates::Numeric(lam) => {
            if lam.iter().any(|x| !x.is_positive()) {
                return Err(Error::invalid("rates must be positive"));
            }
            let table = series_table(a, lam, b)?;
            Ok(Value::Exact(table.value(b)))
        }
        Rates::Symbolic(_) => {
            let table = series_table_poly(a, b)?;
            Ok(Value::Poly(table[poly_table_index(b, b)].clone()))
        }
    }
}

/// Closed single-sum fast path for two-row 0/1 matrices. With
/// `czi = Σ λ_j` over columns equal to the i-th unit vector and
/// `c11 = Σ λ_j` over columns `(1,1)`:
/// `F0(b1,b2) = Σ_k c11^k c1^(b1-k) c2^(b2-k) / (k! (b1-k)! (b2-k)!)`.
pub fn two_row_f0(a: &ConstraintMatrix, rates: &Rates, b: &[u32]) -> Result<Value> {
    rates.check_against(a)?;
    a.check_b(b)?;
    if a.rows() != 2 {
        return Err(Error::UnsupportedShape(format!(
            "two_row_f0 needs a two-row matrix, got {} rows",
            a.rows()
        )));
    }
    if (0..a.rows()).any(|i| (0..a.cols()).any(|j| a.at(i, j) > 1)) {
        return Err(Error::UnsupportedShape(
            "two_row_f0 needs 0/1 entries".into(),
        ));
    }
    match rates {
        Rates::Numeric(lam) => {
            let mut c1 = BigRational::zero();
            let mut c2 = BigRational::zero();
            let mut c11 = BigRational::zero();
            for j in 0..a.cols() {
                match (a.at(0, j), a.at(1, j)) {
                    (1, 0) => c1 += &lam[j],
                    (0, 1) => c2 += &lam[j],
                    (1, 1) => c11 += &lam[j],
                    _ => unreachable!("zero column rejected at construction"),
                }
            }
            let (b1, b2) = (b[0], b[1]);
            let mut acc = BigRational::zero();
            for k in 0..=b1.min(b2) {
                let mut t = c11.pow(k as i32);
                t *= c1.pow((b1 - k) as i32);
                t *= c2.pow((b2 - k) as i32);
                let den = factorial(k) * factorial(b1 - k) * factorial(b2 - k);
                acc += t / BigRational::from_integer(den);
            }
            Ok(Value::Exact(acc))
        }
        Rates::Symbolic(n) => {
            let var_names: Vec<String> = (1..=*n).map(|j| format!("lam{j}")).collect();
            let vars: Vec<&str> = var_names.iter().map(|s| s.as_str()).collect();
            let mut c1 = MultiPoly::zero(&vars);
            let mut c2 = MultiPoly::zero(&vars);
            let mut c11 = MultiPoly::zero(&vars);
            for j in 0..a.cols() {
                let mut e = vec![0u32; *n];
                e[j] = 1;
                let target = match (a.at(0, j), a.at(1, j)) {
                    (1, 0) => &mut c1,
                    (0, 1) => &mut c2,
                    (1, 1) => &mut c11,
                    _ => unreachable!(),
                };
                target.add_term(e, BigRational::one());
            }
            let (b1, b2) = (b[0], b[1]);
            let mut acc = MultiPoly::zero(&vars);
            for k in 0..=b1.min(b2) {
                let t = c11.pow(k).mul(&c1.pow(b1 - k)).unwrap().mul(&c2.pow(b2 - k)).unwrap();
                let den = factorial(k) * factorial(b1 - k) * factorial(b2 - k);
                acc = acc
                    .add(&t.scale(&BigRational::new(BigInt::one(), den)))
                    .unwrap();
            }
            Ok(Value::Poly(acc))
        }
    }
}

/// Joint probability `P(Y = b) = e^{-Σλ} F0(b)`: the exact pair
/// `(F0(b), Σλ)` plus a float rendering (the only non-exact part).
pub struct JointProbability {
    pub f0: BigRational,
    pub rate_sum: BigRational,
    pub float: f64,
}

pub fn prob(a: &ConstraintMatrix, lambda: &[BigRational], b: &[u32]) -> Result<JointProbability> {
    let rates = Rates::numeric(lambda.to_vec())?;
    let f0v = f0(a, &rates, b)?.unwrap_exact();
    let s = crate::rational::sum(lambda);
    let float = if f0v.is_zero() {
        0.0
    } else {
        // exp(ln F0 - Σλ) is stable for F0 far outside the f64 range
        (ln(&f0v) - to_f64(&s)).exp()
    };
    Ok(JointProbability { f0: f0v, rate_sum: s, float })
}

// ---------------------------------------------------------------------------
// conditional moments
// ---------------------------------------------------------------------------

/// Conditioning context: holds the `F0` table over the box `0..=b` so all
/// moments of one conditioning event share a single series computation.
pub struct Conditional {
    a: ConstraintMatrix,
    lambda: Vec<BigRational>,
    b: Vec<u32>,
    table: F0Table,
    f0_b: BigRational,
}

impl Conditional {
    pub fn new(a: &ConstraintMatrix, lambda: &[BigRational], b: &[u32]) -> Result<Self> {
        a.check_b(b)?;
        if lambda.len() != a.cols() {
            return Err(Error::dim(format!(
                "{} rates for a matrix with {} columns",
                lambda.len(),
                a.cols()
            )));
        }
        if lambda.iter().any(|x| !x.is_positive()) {
            return Err(Error::invalid("rates must be positive"));
        }
        let table = series_table(a, lambda, b)?;
        let f0_b = table.value(b);
        if f0_b.is_zero() {
            return Err(Error::NullConditioningEvent(format!("{b:?}")));
        }
        Ok(Conditional { a: a.clone(), lambda: lambda.to_vec(), b: b.to_vec(), table, f0_b })
    }

    pub fn f0(&self) -> &BigRational {
        &self.f0_b
    }

    fn check_j(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.a.cols() {
            return Err(Error::invalid(format!(
                "variable index {} out of range 1..={}",
                j,
                self.a.cols()
            )));
        }
        Ok(())
    }

    /// Falling factorial moment `E[X_j (X_j-1) ... (X_j-r+1) | Y=b]`.
    /// Indices are 1-based; `r ≥ 1`.
    pub fn factorial_moment(&self, j: usize, r: u32) -> Result<BigRational> {
        self.check_j(j)?;
        if r == 0 {
            return Err(Error::invalid("moment order r must be >= 1"));
        }
        let col = self.a.column(j - 1);
        let mut delta = Vec::with_capacity(col.len());
        for c in &col {
            delta.push(c.checked_mul(r).ok_or_else(|| Error::invalid("moment order overflow"))?);
        }
        let shifted = self.table.shifted_value(&self.b, &delta);
        Ok(self.lambda[j - 1].pow(r as i32) * shifted / &self.f0_b)
    }

    /// Mixed product moment `E[X_i X_j | Y=b]` for distinct i, j.
    pub fn mixed_factorial_moment(&self, i: usize, j: usize) -> Result<BigRational> {
        self.check_j(i)?;
        self.check_j(j)?;
        if i == j {
            return Err(Error::invalid(
                "mixed moment needs distinct indices; use factorial_moment for E[X_j(X_j-1)]",
            ));
        }
        let ci = self.a.column(i - 1);
        let cj = self.a.column(j - 1);
        let delta: Vec<u32> = ci.iter().zip(&cj).map(|(x, y)| x + y).collect();
        let shifted = self.table.shifted_value(&self.b, &delta);
        Ok(&self.lambda[i - 1] * &self.lambda[j - 1] * shifted / &self.f0_b)
    }

    pub fn mean(&self, j: usize) -> Result<BigRational> {
        self.factorial_moment(j, 1)
    }

    pub fn variance(&self, j: usize) -> Result<BigRational> {
        let m1 = self.factorial_moment(j, 1)?;
        let m2 = self.factorial_moment(j, 2)?;
        Ok(m2 + &m1 - &m1 * &m1)
    }

    /// Raw moment `E[X_j^r | Y=b]` via the Stirling-number expansion
    /// `x^r = Σ_s S(r,s) x^(s)`.
    pub fn raw_moment(&self, j: usize, r: u32) -> Result<BigRational> {
        self.check_j(j)?;
        if r == 0 {
            return Ok(BigRational::one());
        }
        let s2 = stirling2_row(r);
        let mut acc = BigRational::zero();
        for s in 1..=r {
            let fm = self.factorial_moment(j, s)?;
            acc += BigRational::from_integer(s2[s as usize].clone()) * fm;
        }
        Ok(acc)
    }

    /// Full second-order report: means, variances, covariance matrix
    /// (exact) and correlation matrix (float rendering).
    pub fn stats(&self) -> Result<StatReport> {
        let n = self.a.cols();
        let mut means = Vec::with_capacity(n);
        let mut variances = Vec::with_capacity(n);
        for j in 1..=n {
            means.push(self.mean(j)?);
            variances.push(self.variance(j)?);
        }
        let mut covariance = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            covariance[i][i] = variances[i].clone();
            for j in i + 1..n {
                let mixed = self.mixed_factorial_moment(i + 1, j + 1)?;
                let c = mixed - &means[i] * &means[j];
                covariance[i][j] = c.clone();
                covariance[j][i] = c;
            }
        }
        let mut correlation = vec![vec![None; n]; n];
        for i in 0..n {
            for j in 0..n {
                if variances[i].is_zero() || variances[j].is_zero() {
                    correlation[i][j] = None; // undefined, not a number
                } else if i == j {
                    correlation[i][j] = Some(1.0);
                } else {
                    let denom = (to_f64(&variances[i]) * to_f64(&variances[j])).sqrt();
                    correlation[i][j] = Some(to_f64(&covariance[i][j]) / denom);
                }
            }
        }
        Ok(StatReport {
            f0: self.f0_b.clone(),
            means,
            variances,
            covariance,
            correlation,
        })
    }
}

/// Second-order conditional statistics. The covariance matrix is exact and
/// symmetric; correlations are float renderings, `None` where a variance is
/// zero (correlation undefined).
#[derive(Clone, Debug)]
pub struct StatReport {
    pub f0: BigRational,
    pub means: Vec<BigRational>,
    pub variances: Vec<BigRational>,
    pub covariance: Vec<Vec<BigRational>>,
    pub correlation: Vec<Vec<Option<f64>>>,
}

/// Row `r` of the Stirling numbers of the second kind:
/// `S(r, 0..=r)`, computed exactly on demand.
pub fn stirling2_row(r: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()]; // S(0,0) = 1
    for n in 1..=r {
        let mut next = vec![BigInt::zero(); n as usize + 1];
        for k in 1..=n as usize {
            let prev_k = if k < row.len() { row[k].clone() } else { BigInt::zero() };
            next[k] = prev_k * k as u64 + &row[k - 1];
        }
        row = next;
    }
    row
}

/// Convenience wrappers mirroring the `Conditional` methods for one-shot
/// calls.
pub fn factorial_moment(
    a: &ConstraintMatrix,
    lambda: &[BigRational],
    b: &[u32],
    j: usize,
    r: u32,
) -> Result<BigRational> {
    Conditional::new(a, lambda, b)?.factorial_moment(j, r)
}

pub fn mixed_factorial_moment(
    a: &ConstraintMatrix,
    lambda: &[BigRational],
    b: &[u32],
    i: usize,
    j: usize,
) -> Result<BigRational> {
    Conditional::new(a, lambda, b)?.mixed_factorial_moment(i, j)
}

pub fn stats(a: &ConstraintMatrix, lambda: &[BigRational], b: &[u32]) -> Result<StatReport> {
    Conditional::new(a, lambda, b)?.stats()
}
