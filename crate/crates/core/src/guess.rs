//! Empirical discovery of P-recurrences for `F0` from exact data.
//!
//! For a fixed numeric λ and direction `i`, a candidate recurrence of
//! order `R` with coefficients of total degree ≤ `d` in `b_1..b_m` is a
//! linear object: each window point `b` yields one linear equation
//! `Σ_r Σ_μ c_{r,μ} · b^μ · F0(b + r·e_i) = 0` in the unknown
//! coefficients `c_{r,μ}`. The fit solves this system exactly over the
//! rationals on an overdetermined window, then keeps a candidate only if
//! it also annihilates the data on a disjoint validation window.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::genfun::{self, ConstraintMatrix};
use crate::matrix::RatMatrix;
use crate::poly::MultiPoly;
use crate::rational::BigRational;
use crate::recurrence::PRecurrence;
use crate::{Error, Result};

/// Fit shape: direction, order, coefficient degree, and the two disjoint
/// data windows (inclusive boxes).
#[derive(Clone, Debug)]
pub struct GuessAnsatz {
    pub direction: usize,
    pub order: usize,
    pub degree: u32,
    pub fit_lo: Vec<u32>,
    pub fit_hi: Vec<u32>,
    pub val_lo: Vec<u32>,
    pub val_hi: Vec<u32>,
}

impl GuessAnsatz {
    /// Default windows: along the marching direction the fit sweeps
    /// `max(R,2) ..= R+d+m+4` (widened when that alone would not be
    /// strictly overdetermined, which happens for single-row matrices)
    /// and the validation box follows right after it (disjoint by
    /// construction); transverse coordinates sweep `0 ..= d+2` in both.
    pub fn with_default_windows(m: usize, direction: usize, order: usize, degree: u32) -> Self {
        let i = direction - 1;
        let r = order as u32;
        let d = degree;
        let mut fit_lo = vec![0u32; m];
        let mut fit_hi = vec![d + 2; m];
        fit_lo[i] = r.max(2);
        fit_hi[i] = r + d + m as u32 + 4;
        let unknowns = (order + 1) * monomials(m, degree).len();
        loop {
            let equations: usize =
                (0..m).map(|k| (fit_hi[k] - fit_lo[k] + 1) as usize).product();
            if equations > unknowns {
                break;
            }
            fit_hi[i] += 1;
        }
        let mut val_lo = fit_lo.clone();
        let mut val_hi = fit_hi.clone();
        val_lo[i] = fit_hi[i] + 1;
        val_hi[i] = fit_hi[i] + d + m as u32 + 4;
        GuessAnsatz { direction, order, degree, fit_lo, fit_hi, val_lo, val_hi }
    }

    fn check(&self, a: &ConstraintMatrix) -> Result<()> {
        let m = a.rows();
        if self.direction == 0 || self.direction > m {
            return Err(Error::invalid(format!("direction {} out of range 1..={m}", self.direction)));
        }
        if self.order == 0 {
            return Err(Error::invalid("ansatz order must be >= 1"));
        }
        for w in [&self.fit_lo, &self.fit_hi, &self.val_lo, &self.val_hi] {
            a.check_b(w)?;
        }
        if self.fit_lo.iter().zip(&self.fit_hi).any(|(l, h)| l > h)
            || self.val_lo.iter().zip(&self.val_hi).any(|(l, h)| l > h)
        {
            return Err(Error::invalid("empty ansatz window"));
        }
        let overlap = (0..m).all(|i| self.fit_lo[i] <= self.val_hi[i] && self.val_lo[i] <= self.fit_hi[i]);
        if overlap {
            return Err(Error::invalid("fitting and validation windows overlap"));
        }
        let equations: usize = (0..m).map(|i| (self.fit_hi[i] - self.fit_lo[i] + 1) as usize).product();
        let unknowns = (self.order + 1) * monomials(m, self.degree).len();
        if equations <= unknowns {
            return Err(Error::invalid(format!(
                "fitting window gives {equations} equations for {unknowns} unknowns; it must be strictly overdetermined"
            )));
        }
        Ok(())
    }
}

/// Exponent vectors over `m` variables with total degree ≤ `d`, graded,
/// lexicographic within each degree. The fixed enumeration order makes
/// fits deterministic.
pub fn monomials(m: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(m: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == m - 1 {
            let mut e = cur.clone();
            e.push(left);
            out.push(e);
            return;
        }
        for x in (0..=left).rev() {
            cur.push(x);
            rec(m, left - x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for deg in 0..=d {
        rec(m, deg, &mut Vec::new(), &mut out);
    }
    out
}

fn box_points(lo: &[u32], hi: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![lo.to_vec()];
    loop {
        let last = out.last().unwrap().clone();
        let mut q = last;
        let mut carried = true;
        for i in (0..q.len()).rev() {
            if q[i] < hi[i] {
                q[i] += 1;
                carried = false;
                break;
            }
            q[i] = lo[i];
        }
        if carried {
            return out;
        }
        out.push(q);
    }
}

fn pow_u(base: u32, exp: u32) -> BigInt {
    BigInt::from(base).pow(exp)
}

// --- modular screen ---------------------------------------------------------

const SCREEN_PRIME: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn rat_mod(x: &BigRational, p: u64) -> Option<u64> {
    let pm = BigInt::from(p);
    let num = ((x.numer() % &pm) + &pm) % &pm;
    let den = ((x.denom() % &pm) + &pm) % &pm;
    let den: u64 = den.try_into().unwrap();
    if den == 0 {
        return None; // denominator divisible by the screen prime
    }
    let num: u64 = num.try_into().unwrap();
    Some(mul_mod(num, pow_mod(den, p - 2, p), p))
}

/// Nullity of the matrix mod a prime. Since reduction can only lower the
/// rank, `0` here certifies an empty rational nullspace; a positive value
/// just means the exact solve is worth running.
fn nullity_mod_p(rows: &[Vec<u64>], cols: usize, p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let mut rank = 0usize;
    for c in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = pow_mod(m[rank][c], p - 2, p);
        for x in &mut m[rank] {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = row[c];
                for (x, pv) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + p - mul_mod(f, *pv, p)) % p;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    cols - rank
}

// --- fitting -----------------------------------------------------------------

/// Fit a recurrence of the ansatz shape to exact `F0` data. Returns
/// `Ok(None)` when no candidate passes exact validation. The returned
/// recurrence has coefficients polynomial in `b_1..b_m` only (it is tied
/// to the given numeric λ), with the leading coefficient normalized to
/// content 1 and positive leading term.
pub fn fit(a: &ConstraintMatrix, lambda: &[BigRational], ansatz: &GuessAnsatz) -> Result<Option<PRecurrence>> {
    ansatz.check(a)?;
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
    let m = a.rows();
    let i = ansatz.direction - 1;
    let mons = monomials(m, ansatz.degree);
    let unknowns = (ansatz.order + 1) * mons.len();

    // one table covers both windows plus the order shift
    let mut hi_all = vec![0u32; m];
    for k in 0..m {
        hi_all[k] = ansatz.fit_hi[k].max(ansatz.val_hi[k]);
    }
    hi_all[i] += ansatz.order as u32;
    let table = genfun::series_table(a, lambda, &hi_all)?;

    let fit_points = box_points(&ansatz.fit_lo, &ansatz.fit_hi);
    let entry = |b: &[u32], r: usize, mu: &[u32]| -> BigRational {
        let mut shifted = b.to_vec();
        shifted[i] += r as u32;
        let mut v = table.value(&shifted);
        for (k, &e) in mu.iter().enumerate() {
            if e > 0 {
                v *= BigRational::from_integer(pow_u(b[k], e));
            }
        }
        v
    };

    // cheap certificate first: full column rank mod p means no recurrence
    // of this shape exists, skipping the exact elimination
    let mut screen_rows: Vec<Vec<u64>> = Vec::with_capacity(fit_points.len());
    let mut screen_ok = true;
    'rows: for b in &fit_points {
        let mut row = Vec::with_capacity(unknowns);
        for r in 0..=ansatz.order {
            for mu in &mons {
                match rat_mod(&entry(b, r, mu), SCREEN_PRIME) {
                    Some(x) => row.push(x),
                    None => {
                        screen_ok = false;
                        break 'rows;
                    }
                }
            }
        }
        screen_rows.push(row);
    }
    if screen_ok && nullity_mod_p(&screen_rows, unknowns, SCREEN_PRIME) == 0 {
        return Ok(None);
    }

    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(fit_points.len());
    for b in &fit_points {
        let mut row = Vec::with_capacity(unknowns);
        for r in 0..=ansatz.order {
            for mu in &mons {
                row.push(entry(b, r, mu));
            }
        }
        rows.push(row);
    }
    let kernel = RatMatrix::from_rows(&rows)?.nullspace();
    if kernel.is_empty() {
        return Ok(None);
    }

    // basis vectors of the fitted kernel; when several true recurrences
    // fit the shape, any kernel element is true, so validating basis
    // vectors in a deterministic preference order suffices
    let mut candidates: Vec<PRecurrence> = Vec::new();
    let var_names: Vec<String> = (1..=m).map(|k| format!("b{k}")).collect();
    let vars: Vec<&str> = var_names.iter().map(|s| s.as_str()).collect();
    'next_kernel: for v in &kernel {
        let mut coeffs: Vec<MultiPoly> = Vec::with_capacity(ansatz.order + 1);
        for r in 0..=ansatz.order {
            let mut p = MultiPoly::zero(&vars);
            for (t, mu) in mons.iter().enumerate() {
                let c = &v[r * mons.len() + t];
                if !c.is_zero() {
                    p.add_term(mu.clone(), c.clone());
                }
            }
            coeffs.push(p);
        }
        if coeffs[ansatz.order].is_zero() {
            continue 'next_kernel; // effectively lower order; not this shape
        }
        // normalize: leading coefficient polynomial gets content 1 and a
        // positive leading rational
        let lead = &coeffs[ansatz.order];
        let mut scale = lead.content();
        if lead.leading_coefficient().is_negative() {
            scale = -scale;
        }
        let inv = BigRational::one() / scale;
        let coeffs: Vec<MultiPoly> = coeffs.iter().map(|p| p.scale(&inv)).collect();
        candidates.push(PRecurrence::new(ansatz.direction, coeffs)?);
    }
    candidates.sort_by_key(|r| {
        let deg = r.coeffs().iter().map(|p| p.total_degree()).max().unwrap_or(0);
        (deg, r.to_text())
    });

    let val_points = box_points(&ansatz.val_lo, &ansatz.val_hi);
    'next_candidate: for cand in candidates {
        for b in &val_points {
            let mut residual = BigRational::zero();
            let mut shifted = b.clone();
            for r in 0..=ansatz.order {
                shifted[i] = b[i] + r as u32;
                let c = cand.coeff_value(r, &[], b)?;
                if !c.is_zero() {
                    residual += c * table.value(&shifted);
                }
            }
            if !residual.is_zero() {
                continue 'next_candidate;
            }
        }
        return Ok(Some(cand));
    }
    Ok(None)
}

/// Search ansatz shapes in increasing `R+d`, then increasing `R`, with
/// default windows; return the first fit that validates. Degenerate
/// bounds (`max_order == 0`) yield `None`.
pub fn minimal_fit(
    a: &ConstraintMatrix,
    lambda: &[BigRational],
    direction: usize,
    max_order: usize,
    max_degree: u32,
) -> Result<Option<PRecurrence>> {
    minimal_fit_inner(a, lambda, direction, max_order, max_degree, None)
}

/// Like [`minimal_fit`], but every fitted candidate is additionally
/// confirmed by exact verification over the box `0 ≤ b ≤ confirm_hi`;
/// candidates that fail there are discarded and the shape search
/// continues. This guards against accidental fits — with generous
/// coefficient degrees, a spurious solution can survive the default
/// validation window yet fail a few steps further out.
pub fn minimal_fit_confirmed(
    a: &ConstraintMatrix,
    lambda: &[BigRational],
    direction: usize,
    max_order: usize,
    max_degree: u32,
    confirm_hi: &[u32],
) -> Result<Option<PRecurrence>> {
    minimal_fit_inner(a, lambda, direction, max_order, max_degree, Some(confirm_hi))
}

fn minimal_fit_inner(
    a: &ConstraintMatrix,
    lambda: &[BigRational],
    direction: usize,
    max_order: usize,
    max_degree: u32,
    confirm_hi: Option<&[u32]>,
) -> Result<Option<PRecurrence>> {
    for total in 1..=(max_order + max_degree as usize) {
        for order in 1..=total.min(max_order) {
            let degree = (total - order) as u32;
            if degree > max_degree {
                continue;
            }
            let ansatz = GuessAnsatz::with_default_windows(a.rows(), direction, order, degree);
            if let Some(rec) = fit(a, lambda, &ansatz)? {
                match confirm_hi {
                    None => return Ok(Some(rec)),
                    Some(hi) => {
                        let rates = crate::genfun::Rates::numeric(lambda.to_vec())?;
                        let lo = vec![0u32; a.rows()];
                        if crate::recurrence::verify(&rec, a, &rates, &lo, hi)?.pass {
                            return Ok(Some(rec));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genfun::Rates;
    use crate::rational::parse_rational;
    use crate::recurrence;

    fn rat(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn rats(ss: &[&str]) -> Vec<BigRational> {
        ss.iter().map(|s| rat(s)).collect()
    }

    fn pair_sum() -> ConstraintMatrix {
        ConstraintMatrix::from_rows(&[vec![1, 1]]).unwrap()
    }

    fn capture() -> ConstraintMatrix {
        ConstraintMatrix::from_rows(&[vec![1, 0, 1], vec![0, 1, 1]]).unwrap()
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials(1, 2), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(
            monomials(2, 1),
            vec![vec![0, 0], vec![1, 0], vec![0, 1]]
        );
        assert_eq!(monomials(2, 2).len(), 6); // C(4,2)
        assert_eq!(monomials(3, 3).len(), 20); // C(6,3)
    }

    #[test]
    fn recovers_sum_recurrence() {
        let lam = rats(&["1", "1"]);
        let rec = minimal_fit(&pair_sum(), &lam, 1, 3, 3).unwrap().unwrap();
        assert_eq!(rec.order(), 1);
        // normalized form: (1 + b1)·F0(b1+1) − 2·F0(b1) = 0
        let vars = ["b1"];
        let mut p0 = MultiPoly::zero(&vars);
        p0.add_term(vec![0], rat("-2"));
        let mut p1 = MultiPoly::zero(&vars);
        p1.add_term(vec![0], rat("1"));
        p1.add_term(vec![1], rat("1"));
        assert_eq!(rec.coeffs(), &[p0, p1]);
    }

    #[test]
    fn capture_needs_order_two() {
        let lam = rats(&["1", "1", "1"]);
        for direction in [1, 2] {
            let rec = minimal_fit(&capture(), &lam, direction, 3, 3).unwrap().unwrap();
            assert_eq!(rec.order(), 2, "direction {direction}");
            // soundness gate: exact verification on a larger window
            let out = recurrence::verify(
                &rec,
                &capture(),
                &Rates::numeric(lam.clone()).unwrap(),
                &[0, 0],
                &[20, 20],
            )
            .unwrap();
            assert!(out.pass, "direction {direction}: {:?}", out.counterexample);
        }
    }

    #[test]
    fn constant_coefficients_do_not_fit() {
        let lam = rats(&["1", "1", "1"]);
        let ansatz = GuessAnsatz::with_default_windows(2, 1, 1, 0);
        assert!(fit(&capture(), &lam, &ansatz).unwrap().is_none());
    }

    #[test]
    fn deterministic_output() {
        let lam = rats(&["1", "1"]);
        // over-parameterized shape: kernel dimension > 1, tie-break applies
        let ansatz = GuessAnsatz::with_default_windows(1, 1, 2, 2);
        let a = fit(&pair_sum(), &lam, &ansatz).unwrap().unwrap();
        let b = fit(&pair_sum(), &lam, &ansatz).unwrap().unwrap();
        assert_eq!(a, b);
        let out = recurrence::verify(
            &a,
            &pair_sum(),
            &Rates::numeric(lam).unwrap(),
            &[0],
            &[30],
        )
        .unwrap();
        assert!(out.pass);
    }

    #[test]
    fn window_validation_errors() {
        let lam = rats(&["1", "1"]);
        let mut ansatz = GuessAnsatz::with_default_windows(1, 1, 1, 1);
        ansatz.val_lo = ansatz.fit_lo.clone(); // force overlap
        ansatz.val_hi = ansatz.fit_hi.clone();
        assert!(fit(&pair_sum(), &lam, &ansatz).is_err());

        let mut tiny = GuessAnsatz::with_default_windows(1, 1, 1, 1);
        tiny.fit_hi = tiny.fit_lo.clone(); // one equation for four unknowns
        assert!(fit(&pair_sum(), &lam, &tiny).is_err());
    }

    #[test]
    fn degenerate_bounds_give_none() {
        let lam = rats(&["1", "1"]);
        assert!(minimal_fit(&pair_sum(), &lam, 1, 0, 0).unwrap().is_none());
    }

    #[test]
    fn guessed_recurrence_marches() {
        // the guessed system is good enough to evaluate F0 on its own
        let lam = rats(&["1", "1", "1"]);
        let recs: Vec<PRecurrence> = [1, 2]
            .iter()
            .map(|&d| minimal_fit(&capture(), &lam, d, 3, 3).unwrap().unwrap())
            .collect();
        let sys = recurrence::RecurrenceSystem::new(capture(), recs).unwrap();
        for b in [[6u32, 9], [12, 12]] {
            let got = recurrence::march(&sys, &lam, &b).unwrap();
            let want = genfun::f0(&capture(), &Rates::Numeric(lam.clone()), &b)
                .unwrap()
                .unwrap_exact();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn modular_helpers() {
        let p = SCREEN_PRIME;
        assert_eq!(mul_mod(p - 1, p - 1, p), 1); // (-1)^2
        assert_eq!(pow_mod(3, p - 1, p), 1); // Fermat
        let x = rat("-7/3");
        let v = rat_mod(&x, p).unwrap();
        assert_eq!(mul_mod(v, 3, p), p - 7);
        // nullity of [[1,1],[1,1]] mod p is 1
        assert_eq!(nullity_mod_p(&[vec![1, 1], vec![1, 1]], 2, p), 1);
        assert_eq!(nullity_mod_p(&[vec![1, 0], vec![0, 1]], 2, p), 0);
    }

    #[test]
    fn confirmed_search_rejects_accidental_fits() {
        // With generous coefficient degrees, the 2x3 matrix below admits a
        // spurious order-2 candidate in direction 1 that survives the default
        // validation window but breaks a few steps further out. The confirmed
        // search must discard it and keep going until the true order-3
        // recurrence appears.
        let a = ConstraintMatrix::from_rows(&[vec![1, 0, 1], vec![0, 2, 1]]).unwrap();
        let lam = rats(&["2/3", "5/7", "3/2"]);
        let rates = Rates::numeric(lam.clone()).unwrap();
        let wide = [14u32, 14];

        let loose = minimal_fit(&a, &lam, 1, 4, 4).unwrap().unwrap();
        assert_eq!(loose.order(), 2);
        let out = recurrence::verify(&loose, &a, &rates, &[0, 0], &wide).unwrap();
        assert!(!out.pass, "loose fit should fail on the wider box");

        let sound = minimal_fit_confirmed(&a, &lam, 1, 4, 4, &wide).unwrap().unwrap();
        assert_eq!(sound.order(), 3);
        let out = recurrence::verify(&sound, &a, &rates, &[0, 0], &wide).unwrap();
        assert!(out.pass);
    }
}
