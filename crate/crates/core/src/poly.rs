//! Sparse multivariate polynomials over arbitrary-precision rationals.
//!
//! A polynomial owns an ordered variable list fixed at construction; terms
//! are kept in a `BTreeMap` from exponent vector to coefficient, so equality
//! and iteration order are canonical. Zero coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{to_short_string, BigRational};
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Arc<Vec<String>>,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl MultiPoly {
    /// Zero polynomial in the given variables.
    pub fn zero(vars: &[&str]) -> Self {
        MultiPoly {
            vars: Arc::new(vars.iter().map(|s| s.to_string()).collect()),
            terms: BTreeMap::new(),
        }
    }

    pub fn zero_with(vars: Arc<Vec<String>>) -> Self {
        MultiPoly { vars, terms: BTreeMap::new() }
    }

    /// Constant polynomial.
    pub fn constant(vars: &[&str], c: BigRational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; p.vars.len()], c);
        }
        p
    }

    /// The variable `name` as a degree-1 polynomial.
    pub fn var(vars: &[&str], name: &str) -> Result<Self> {
        let mut p = Self::zero(vars);
        let idx = p
            .vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnboundVariable(name.to_string()))?;
        let mut e = vec![0; p.vars.len()];
        e[idx] = 1;
        p.terms.insert(e, BigRational::one());
        Ok(p)
    }

    /// Build from explicit terms (exponent vector, coefficient).
    pub fn from_terms(vars: &[&str], terms: Vec<(Vec<u32>, BigRational)>) -> Result<Self> {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            if e.len() != p.vars.len() {
                return Err(Error::dim(format!(
                    "exponent vector length {} but {} variables",
                    e.len(),
                    p.vars.len()
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn shared_vars(&self) -> Arc<Vec<String>> {
        Arc::clone(&self.vars)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().iter().all(|&e| e == 0))
    }

    /// Constant value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            return Some(BigRational::zero());
        }
        if self.is_constant() {
            return Some(self.terms.values().next().unwrap().clone());
        }
        None
    }

    /// Total degree (0 for the zero polynomial).
    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        debug_assert_eq!(e.len(), self.vars.len());
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same_vars(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::dim(format!(
                "polynomials over different variables: {:?} vs {:?}",
                self.vars, other.vars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = MultiPoly::zero_with(Arc::clone(&self.vars));
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_vars(other)?;
        let mut out = MultiPoly::zero_with(Arc::clone(&self.vars));
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return MultiPoly::zero_with(Arc::clone(&self.vars));
        }
        let mut out = MultiPoly::zero_with(Arc::clone(&self.vars));
        for (e, v) in &self.terms {
            out.terms.insert(e.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = MultiPoly::constant(
            &self.vars.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
            BigRational::one(),
        );
        for _ in 0..k {
            acc = acc.mul(self).unwrap();
        }
        acc
    }

    /// Full evaluation. Every variable occurring with a nonzero exponent
    /// must be assigned, otherwise an unbound-variable error is returned.
    pub fn eval(&self, assignment: &BTreeMap<String, BigRational>) -> Result<BigRational> {
        let mut values: Vec<Option<&BigRational>> = Vec::with_capacity(self.vars.len());
        for v in self.vars.iter() {
            values.push(assignment.get(v));
        }
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &exp) in e.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                match values[i] {
                    Some(x) => t *= x.pow(exp as i32),
                    None => return Err(Error::UnboundVariable(self.vars[i].clone())),
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitute a subset of the variables, returning a polynomial in the
    /// same variable list (substituted variables no longer occur).
    pub fn eval_partial(&self, assignment: &BTreeMap<String, BigRational>) -> Self {
        let values: Vec<Option<&BigRational>> =
            self.vars.iter().map(|v| assignment.get(v)).collect();
        let mut out = MultiPoly::zero_with(Arc::clone(&self.vars));
        for (e, c) in &self.terms {
            let mut coef = c.clone();
            let mut rest = e.clone();
            for (i, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    if let Some(x) = values[i] {
                        coef *= x.pow(exp as i32);
                        rest[i] = 0;
                    }
                }
            }
            out.add_term(rest, coef);
        }
        out
    }

    /// Positive rational `c` such that `self / c` has coprime integer
    /// coefficients. Zero polynomial has content 1.
    pub fn content(&self) -> BigRational {
        if self.terms.is_empty() {
            return BigRational::one();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(&c.numer().abs());
            den_lcm = den_lcm.lcm(c.denom());
        }
        BigRational::new(num_gcd, den_lcm)
    }

    /// Leading coefficient in the canonical (ascending exponent) term order:
    /// the coefficient of the last term.
    pub fn leading_coefficient(&self) -> BigRational {
        self.terms
            .values()
            .next_back()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Rename/extend to a new variable list (a superset, possibly reordered).
    pub fn align_to(&self, vars: &[&str]) -> Result<Self> {
        let mut out = MultiPoly::zero(vars);
        let map: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| out.vars.iter().position(|w| w == v))
            .collect();
        for (e, c) in &self.terms {
            let mut ne = vec![0u32; out.vars.len()];
            for (i, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    match map[i] {
                        Some(j) => ne[j] = exp,
                        None => {
                            return Err(Error::UnboundVariable(self.vars[i].clone()));
                        }
                    }
                }
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // highest terms first reads more naturally
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &exp) in e.iter().enumerate() {
                if exp == 1 {
                    factors.push(self.vars[i].clone());
                } else if exp > 1 {
                    factors.push(format!("{}^{}", self.vars[i], exp));
                }
            }
            if factors.is_empty() {
                write!(f, "{}", to_short_string(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", to_short_string(&mag), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;
    use proptest::prelude::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_i64(n).unwrap()
    }

    fn q2(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn eval_example() {
        // lam1*lam2 + lam3 at (1,1,1) -> 2
        let vars = ["lam1", "lam2", "lam3"];
        let p = MultiPoly::from_terms(
            &vars,
            vec![(vec![1, 1, 0], q(1)), (vec![0, 0, 1], q(1))],
        )
        .unwrap();
        let mut a = BTreeMap::new();
        a.insert("lam1".to_string(), q(1));
        a.insert("lam2".to_string(), q(1));
        a.insert("lam3".to_string(), q(1));
        assert_eq!(p.eval(&a).unwrap(), q(2));
    }

    #[test]
    fn eval_missing_variable_errors() {
        let vars = ["x", "y"];
        let p = MultiPoly::from_terms(&vars, vec![(vec![1, 1], q(1))]).unwrap();
        let mut a = BTreeMap::new();
        a.insert("x".to_string(), q(3));
        assert!(matches!(p.eval(&a), Err(Error::UnboundVariable(v)) if v == "y"));
        // but a variable that never occurs may be missing
        let p2 = MultiPoly::from_terms(&vars, vec![(vec![2, 0], q(5))]).unwrap();
        assert_eq!(p2.eval(&a).unwrap(), q(45));
    }

    #[test]
    fn zero_polynomial_evaluates_to_zero() {
        let p = MultiPoly::zero(&["x"]);
        assert_eq!(p.eval(&BTreeMap::new()).unwrap(), q(0));
        assert!(p.is_zero());
        assert_eq!(p.total_degree(), 0);
    }

    #[test]
    fn cancellation_removes_terms() {
        let vars = ["x"];
        let p = MultiPoly::from_terms(&vars, vec![(vec![1], q(2))]).unwrap();
        let r = p.sub(&p).unwrap();
        assert!(r.is_zero());
        assert_eq!(r.num_terms(), 0); // no zero coefficients stored
    }

    #[test]
    fn partial_evaluation() {
        let vars = ["b1", "lam1"];
        // (b1 + 2) * lam1
        let p = MultiPoly::from_terms(
            &vars,
            vec![(vec![1, 1], q(1)), (vec![0, 1], q(2))],
        )
        .unwrap();
        let mut a = BTreeMap::new();
        a.insert("b1".to_string(), q(3));
        let r = p.eval_partial(&a);
        assert_eq!(
            r,
            MultiPoly::from_terms(&vars, vec![(vec![0, 1], q(5))]).unwrap()
        );
    }

    #[test]
    fn content_and_leading() {
        let vars = ["x", "y"];
        let p = MultiPoly::from_terms(
            &vars,
            vec![(vec![1, 0], q2(4, 3)), (vec![0, 2], q2(-2, 9))],
        )
        .unwrap();
        // content = gcd(4,2)/lcm(3,9) = 2/9
        assert_eq!(p.content(), q2(2, 9));
        let s = p.scale(&p.content().recip());
        assert_eq!(s.content(), q(1));
    }

    #[test]
    fn display_is_readable() {
        let vars = ["lam1", "b1"];
        let p = MultiPoly::from_terms(
            &vars,
            vec![(vec![1, 1], q(1)), (vec![0, 0], q2(-1, 2))],
        )
        .unwrap();
        assert_eq!(format!("{p}"), "lam1*b1 - 1/2");
    }

    proptest! {
        #[test]
        fn ring_laws(
            a in prop::collection::vec((prop::collection::vec(0u32..4, 2), -5i64..6), 0..5),
            b in prop::collection::vec((prop::collection::vec(0u32..4, 2), -5i64..6), 0..5),
            c in prop::collection::vec((prop::collection::vec(0u32..4, 2), -5i64..6), 0..5),
        ) {
            let vars = ["x", "y"];
            let mk = |ts: &Vec<(Vec<u32>, i64)>| {
                MultiPoly::from_terms(&vars, ts.iter().map(|(e, n)| (e.clone(), q(*n))).collect()).unwrap()
            };
            let (pa, pb, pc) = (mk(&a), mk(&b), mk(&c));
            // (a+b)-b = a
            prop_assert_eq!(pa.add(&pb).unwrap().sub(&pb).unwrap(), pa.clone());
            // a*(b+c) = a*b + a*c
            let lhs = pa.mul(&pb.add(&pc).unwrap()).unwrap();
            let rhs = pa.mul(&pb).unwrap().add(&pa.mul(&pc).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            // commutativity
            prop_assert_eq!(pa.mul(&pb).unwrap(), pb.mul(&pa).unwrap());
        }
    }
}
