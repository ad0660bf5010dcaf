//! Mass-action reaction network analysis.
//!
//! Networks are finite sets of reactions `source → target` between
//! complexes (multisets of species) with positive rational rate
//! constants. The module computes the classical structural quantities
//! (complex count, linkage classes, stoichiometric rank, deficiency,
//! weak reversibility), conservation laws in constraint-matrix form,
//! and verifies complex balance and the product-form stationary
//! solution of the chemical master equation — all in exact arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use petgraph::algo::{connected_components, tarjan_scc};
use petgraph::graph::DiGraph;

use crate::genfun::ConstraintMatrix;
use crate::matrix::{integerize_row, normalize_int_row, RatMatrix};
use crate::rational::{parse_rational, pow_i64, BigRational};
use crate::{Error, Result};

/// A complex: non-negative multiplicity per species. The zero vector is
/// the empty complex (written `0` in the text grammar).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Complex(pub Vec<u32>);

impl Complex {
    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

/// One reaction `source → target` with rate constant `rate > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reaction {
    pub source: Complex,
    pub target: Complex,
    pub rate: BigRational,
    pub label: Option<String>,
}

/// Structural summary of a network.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkReport {
    pub complexes: usize,
    pub linkage_classes: usize,
    pub rank: usize,
    pub deficiency: i64,
    pub weakly_reversible: bool,
}

impl fmt::Display for NetworkReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "c={} l={} rank={} deficiency={} weakly_reversible={}",
            self.complexes, self.linkage_classes, self.rank, self.deficiency, self.weakly_reversible
        )
    }
}

/// Conservation laws of a network. `Constraints` is the non-negative
/// integer form usable as a conditioning matrix; `Basis` is the flagged
/// fallback when no non-negative basis was found (rows are an exact
/// rational basis of the left nullspace of Γ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConservationLaws {
    Constraints(ConstraintMatrix),
    Basis(Vec<Vec<BigRational>>),
}

/// A reaction network over named species. Species order is first
/// appearance in the input; the complex list is deduplicated in first
/// appearance order.
#[derive(Clone, Debug)]
pub struct ReactionNetwork {
    species: Vec<String>,
    reactions: Vec<Reaction>,
    complexes: Vec<Complex>,
}

impl ReactionNetwork {
    pub fn new(species: Vec<String>, reactions: Vec<Reaction>) -> Result<Self> {
        let n = species.len();
        if reactions.is_empty() {
            return Err(Error::invalid("a network needs at least one reaction"));
        }
        let mut complexes: Vec<Complex> = Vec::new();
        for (i, r) in reactions.iter().enumerate() {
            if r.source.0.len() != n || r.target.0.len() != n {
                return Err(Error::dim(format!("reaction {} complex size != {} species", i + 1, n)));
            }
            if r.source == r.target {
                return Err(Error::invalid(format!("reaction {} has equal source and target", i + 1)));
            }
            if !r.rate.is_positive() {
                return Err(Error::invalid(format!("reaction {} has non-positive rate", i + 1)));
            }
            for c in [&r.source, &r.target] {
                if !complexes.contains(c) {
                    complexes.push(c.clone());
                }
            }
        }
        Ok(ReactionNetwork { species, reactions, complexes })
    }

    /// Parse the line-oriented grammar:
    ///
    /// ```text
    /// # comment
    /// X1 + X2 <-> X3 @ k1=1, k2=1
    /// 2 B -> 2 A @ 1
    /// ```
    ///
    /// One reaction per line: `complex ("->"|"<->") complex "@" rates`,
    /// complexes are `+`-separated terms `[coefficient] species` (or the
    /// literal `0` for the empty complex), rates are decimal or fraction
    /// literals with an optional `name=` prefix; `<->` takes two rates
    /// (forward, backward) and expands to two reactions.
    pub fn parse(text: &str) -> Result<Self> {
        let mut species: Vec<String> = Vec::new();
        // complexes as sparse maps until the species set is complete
        type RawReaction = (BTreeMap<usize, u32>, BTreeMap<usize, u32>, BigRational, Option<String>);
        let mut raw: Vec<RawReaction> = Vec::new();
        for (lno0, raw_line) in text.lines().enumerate() {
            let lno = lno0 + 1;
            let line = match raw_line.find('#') {
                Some(p) => &raw_line[..p],
                None => raw_line,
            };
            if line.trim().is_empty() {
                continue;
            }
            let (arrow_pos, arrow_len, reversible) = match (line.find("<->"), line.find("->")) {
                (Some(p), _) => (p, 3, true),
                (None, Some(p)) => (p, 2, false),
                (None, None) => return Err(Error::parse(lno, 1, "missing `->` or `<->`")),
            };
            let lhs = &line[..arrow_pos];
            let rest = &line[arrow_pos + arrow_len..];
            let at = rest
                .find('@')
                .ok_or_else(|| Error::parse(lno, arrow_pos + arrow_len + 1, "missing `@ rate`"))?;
            let rhs = &rest[..at];
            let rates_text = &rest[at + 1..];

            let source = parse_complex(lhs, &mut species, lno, 1)?;
            let target = parse_complex(rhs, &mut species, lno, arrow_pos + arrow_len + 1)?;
            let rate_col = arrow_pos + arrow_len + at + 2;
            let rates: Vec<&str> = rates_text.split(',').collect();
            let expect = if reversible { 2 } else { 1 };
            if rates.len() != expect {
                return Err(Error::parse(
                    lno,
                    rate_col,
                    format!(
                        "`{}` takes {} rate{}, got {}",
                        if reversible { "<->" } else { "->" },
                        expect,
                        if expect == 1 { "" } else { "s" },
                        rates.len()
                    ),
                ));
            }
            let mut parsed_rates = Vec::with_capacity(expect);
            for rt in rates {
                let rt = rt.trim();
                let (label, value) = match rt.split_once('=') {
                    Some((name, v)) => (Some(name.trim().to_string()), v.trim()),
                    None => (None, rt),
                };
                let v = parse_rational(value).map_err(|_| {
                    Error::parse(lno, rate_col, format!("bad rate literal `{value}`"))
                })?;
                if !v.is_positive() {
                    return Err(Error::parse(lno, rate_col, format!("rate `{rt}` must be positive")));
                }
                parsed_rates.push((v, label));
            }
            if source == target {
                return Err(Error::parse(lno, 1, "source and target complexes are equal"));
            }
            let (fwd, fwd_label) = parsed_rates[0].clone();
            raw.push((source.clone(), target.clone(), fwd, fwd_label));
            if reversible {
                let (bwd, bwd_label) = parsed_rates[1].clone();
                raw.push((target, source, bwd, bwd_label));
            }
        }
        if raw.is_empty() {
            return Err(Error::invalid("no reactions in input"));
        }
        let n = species.len();
        let materialize = |m: &BTreeMap<usize, u32>| {
            let mut v = vec![0u32; n];
            for (&s, &c) in m {
                v[s] = c;
            }
            Complex(v)
        };
        let reactions: Vec<Reaction> = raw
            .iter()
            .map(|(s, t, k, label)| Reaction {
                source: materialize(s),
                target: materialize(t),
                rate: k.clone(),
                label: label.clone(),
            })
            .collect();
        ReactionNetwork::new(species, reactions)
    }

    /// Same network with species listed in the given order (a permutation
    /// of the current names). Complex entries are permuted accordingly.
    pub fn reorder_species(&self, order: &[&str]) -> Result<Self> {
        if order.len() != self.species.len() {
            return Err(Error::dim(format!(
                "{} names for {} species",
                order.len(),
                self.species.len()
            )));
        }
        let perm: Vec<usize> = order
            .iter()
            .map(|name| {
                self.species
                    .iter()
                    .position(|s| s == name)
                    .ok_or_else(|| Error::invalid(format!("unknown species `{name}`")))
            })
            .collect::<Result<_>>()?;
        {
            let mut seen = perm.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != perm.len() {
                return Err(Error::invalid("species order contains a duplicate"));
            }
        }
        let remap = |c: &Complex| Complex(perm.iter().map(|&old| c.0[old]).collect());
        let reactions = self
            .reactions
            .iter()
            .map(|r| Reaction {
                source: remap(&r.source),
                target: remap(&r.target),
                rate: r.rate.clone(),
                label: r.label.clone(),
            })
            .collect();
        ReactionNetwork::new(order.iter().map(|s| s.to_string()).collect(), reactions)
    }

    pub fn species(&self) -> &[String] {
        &self.species
    }

    pub fn n_species(&self) -> usize {
        self.species.len()
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn complexes(&self) -> &[Complex] {
        &self.complexes
    }

    pub fn complex_index(&self, c: &Complex) -> Option<usize> {
        self.complexes.iter().position(|x| x == c)
    }

    /// Render a complex with species names (`"X1 + 2 X3"`, `"0"`).
    pub fn format_complex(&self, c: &Complex) -> String {
        if c.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (s, &k) in c.0.iter().enumerate() {
            match k {
                0 => {}
                1 => parts.push(self.species[s].clone()),
                _ => parts.push(format!("{} {}", k, self.species[s])),
            }
        }
        parts.join(" + ")
    }

    /// Stoichiometric matrix Γ: n×m, column i = target(i) − source(i).
    pub fn stoichiometric_matrix(&self) -> RatMatrix {
        let n = self.n_species();
        let m = self.reactions.len();
        let mut g = RatMatrix::zero(n, m);
        for (i, r) in self.reactions.iter().enumerate() {
            for s in 0..n {
                let d = r.target.0[s] as i64 - r.source.0[s] as i64;
                g.set(s, i, BigRational::from_integer(d.into()));
            }
        }
        g
    }

    fn complex_graph(&self) -> DiGraph<(), ()> {
        let mut g = DiGraph::<(), ()>::new();
        let nodes: Vec<_> = self.complexes.iter().map(|_| g.add_node(())).collect();
        for r in &self.reactions {
            let s = self.complex_index(&r.source).unwrap();
            let t = self.complex_index(&r.target).unwrap();
            g.add_edge(nodes[s], nodes[t], ());
        }
        g
    }

    /// Complex count, linkage classes, rank, deficiency `c − ℓ − r`, and
    /// weak reversibility (every linkage class strongly connected).
    pub fn analyze(&self) -> NetworkReport {
        let g = self.complex_graph();
        let c = self.complexes.len();
        let l = connected_components(&g);
        let scc = tarjan_scc(&g).len();
        let r = self.stoichiometric_matrix().rank();
        NetworkReport {
            complexes: c,
            linkage_classes: l,
            rank: r,
            deficiency: c as i64 - l as i64 - r as i64,
            weakly_reversible: scc == l,
        }
    }

    /// Mass-action reaction rates `R_i(x) = k_i · x^{source(i)}`.
    pub fn reaction_rates(&self, x: &[BigRational]) -> Result<Vec<BigRational>> {
        self.check_x(x, false)?;
        Ok(self
            .reactions
            .iter()
            .map(|r| {
                let mut v = r.rate.clone();
                for (s, &e) in r.source.0.iter().enumerate() {
                    if e > 0 {
                        v *= x[s].pow(e as i32);
                    }
                }
                v
            })
            .collect())
    }

    /// Deterministic drift `ẋ = Γ·R(x)`, exact.
    pub fn mass_action_rhs(&self, x: &[BigRational]) -> Result<Vec<BigRational>> {
        let rates = self.reaction_rates(x)?;
        let gamma = self.stoichiometric_matrix();
        gamma.mul_vec(&rates)
    }

    fn check_x(&self, x: &[BigRational], strict: bool) -> Result<()> {
        if x.len() != self.n_species() {
            return Err(Error::dim(format!(
                "{} concentrations for {} species",
                x.len(),
                self.n_species()
            )));
        }
        if strict && x.iter().any(|v| !v.is_positive()) {
            return Err(Error::invalid("concentrations must be positive"));
        }
        if !strict && x.iter().any(|v| v.is_negative()) {
            return Err(Error::invalid("concentrations must be non-negative"));
        }
        Ok(())
    }

    /// Per-complex balance residual `inflow(c) − outflow(c)` at `x̄`:
    /// `Σ_{target(i)=c} k_i x̄^{source(i)} − Σ_{source(i)=c} k_i x̄^{source(i)}`.
    /// `x̄` is complex balanced iff every residual is zero.
    pub fn complex_balance_residuals(&self, xbar: &[BigRational]) -> Result<Vec<(Complex, BigRational)>> {
        self.check_x(xbar, true)?;
        let rates = self.reaction_rates(xbar)?;
        let mut res: Vec<BigRational> = vec![BigRational::zero(); self.complexes.len()];
        for (i, r) in self.reactions.iter().enumerate() {
            let s = self.complex_index(&r.source).unwrap();
            let t = self.complex_index(&r.target).unwrap();
            res[t] += &rates[i];
            res[s] -= &rates[i];
        }
        Ok(self.complexes.iter().cloned().zip(res).collect())
    }

    pub fn is_complex_balanced(&self, xbar: &[BigRational]) -> Result<bool> {
        Ok(self.complex_balance_residuals(xbar)?.iter().all(|(_, r)| r.is_zero()))
    }

    /// Conservation laws: a basis of the left nullspace of Γ, brought to
    /// non-negative integer constraint form when possible (clearing
    /// denominators, gcd/sign normalization, then a bounded search over
    /// integer recombinations with coefficients in [−3, 3]).
    pub fn conservation_matrix(&self) -> ConservationLaws {
        let gamma = self.stoichiometric_matrix();
        let basis = gamma.left_nullspace();
        if basis.is_empty() {
            return ConservationLaws::Basis(Vec::new());
        }
        // integerize_row clears denominators and gcd/sign-normalizes
        let int_rows: Vec<Vec<BigInt>> = basis.iter().map(|r| integerize_row(r)).collect();
        let k = int_rows.len();
        let nonneg = |row: &[BigInt]| row.iter().all(|x| !x.is_negative());

        let chosen: Option<Vec<Vec<BigInt>>> = if int_rows.iter().all(|r| nonneg(r)) {
            let mut rows = int_rows.clone();
            rows.sort_by_key(row_sort_key);
            Some(rows)
        } else if k <= 6 {
            // enumerate small integer combinations of the basis rows and
            // greedily pick k independent non-negative ones, smallest
            // entry-sum first
            let mut candidates: Vec<Vec<BigInt>> = Vec::new();
            let mut combo = vec![-3i64; k];
            loop {
                if combo.iter().any(|&c| c != 0) {
                    let mut v = vec![BigInt::zero(); self.n_species()];
                    for (ci, row) in combo.iter().zip(&int_rows) {
                        if *ci != 0 {
                            for (x, y) in v.iter_mut().zip(row) {
                                *x += y * *ci;
                            }
                        }
                    }
                    if v.iter().any(|x| !x.is_zero()) && nonneg(&v) {
                        normalize_int_row(&mut v);
                        if !candidates.contains(&v) {
                            candidates.push(v);
                        }
                    }
                }
                // odometer over [-3,3]^k
                let mut done = true;
                for c in combo.iter_mut().rev() {
                    if *c < 3 {
                        *c += 1;
                        done = false;
                        break;
                    }
                    *c = -3;
                }
                if done {
                    break;
                }
            }
            candidates.sort_by_key(row_sort_key);
            let mut picked: Vec<Vec<BigInt>> = Vec::new();
            for cand in candidates {
                if picked.len() == k {
                    break;
                }
                let mut trial = picked.clone();
                trial.push(cand);
                let rat_rows: Vec<Vec<BigRational>> = trial
                    .iter()
                    .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
                    .collect();
                if RatMatrix::from_rows(&rat_rows).unwrap().rank() == trial.len() {
                    picked = trial;
                }
            }
            if picked.len() == k {
                Some(picked)
            } else {
                None
            }
        } else {
            None
        };

        match chosen {
            Some(rows) => {
                let as_u32: Option<Vec<Vec<u32>>> = rows
                    .iter()
                    .map(|r| r.iter().map(|x| u32::try_from(x.clone()).ok()).collect())
                    .collect();
                match as_u32.and_then(|rs| ConstraintMatrix::from_rows(&rs).ok()) {
                    Some(a) => ConservationLaws::Constraints(a),
                    // non-negative basis exists but is unusable as a
                    // conditioning matrix (zero column / huge entries)
                    None => ConservationLaws::Basis(to_rational_rows(&rows)),
                }
            }
            None => ConservationLaws::Basis(basis),
        }
    }

    /// Stochastic propensity `A_i(N) = k_i · N!/(N−source(i))!`, zero when
    /// `N` lacks the reactant copies.
    pub fn propensity(&self, i: usize, n: &[u32]) -> Result<BigRational> {
        if i >= self.reactions.len() {
            return Err(Error::invalid(format!(
                "reaction index {} out of range 0..{}",
                i,
                self.reactions.len()
            )));
        }
        if n.len() != self.n_species() {
            return Err(Error::dim(format!("{} counts for {} species", n.len(), self.n_species())));
        }
        let r = &self.reactions[i];
        let mut ways = BigInt::one();
        for (s, &need) in r.source.0.iter().enumerate() {
            if n[s] < need {
                return Ok(BigRational::zero());
            }
            for x in (n[s] - need + 1)..=n[s] {
                ways *= BigInt::from(x);
            }
        }
        Ok(&r.rate * BigRational::from_integer(ways))
    }

    /// Steady-state master-equation residual at state `N` for the
    /// product-form candidate `P(M) = x̄^M / M!`:
    /// `Σ_i A_i(M_i)·P(M_i) − P(N)·Σ_i A_i(N)` with `M_i = N − target(i)
    /// + source(i)` (terms with a negative entry in `M_i` contribute 0).
    ///
    /// Since `A_i(M)·P(M) = k_i · x̄^M / (M − source(i))!` whenever the
    /// propensity is nonzero, each term reduces to a single big-integer
    /// fraction; that identity is used here to keep full lattice sweeps
    /// cheap.
    pub fn sscme_residual(&self, xbar: &[BigRational], n: &[u32]) -> Result<BigRational> {
        self.check_x(xbar, true)?;
        if n.len() != self.n_species() {
            return Err(Error::dim(format!("{} counts for {} species", n.len(), self.n_species())));
        }
        // k · x̄^m / fact!, assembled as one fraction (single reduction)
        let term = |k: &BigRational, m: &[u32], fact: &[u32]| -> BigRational {
            let mut num = k.numer().clone();
            let mut den = k.denom().clone();
            for (s, &e) in m.iter().enumerate() {
                if e > 0 {
                    num *= xbar[s].numer().pow(e);
                    den *= xbar[s].denom().pow(e);
                }
            }
            for &f in fact {
                for x in 2..=f {
                    den *= BigInt::from(x);
                }
            }
            BigRational::new(num, den)
        };
        let mut residual = BigRational::zero();
        for r in &self.reactions {
            // inflow: A_i(M)P(M) = k_i x̄^M/(M−S)!, M−S = N−T; needs N ≥ T
            if n.iter().zip(&r.target.0).all(|(&ns, &t)| ns >= t) {
                let m: Vec<u32> = (0..n.len())
                    .map(|s| n[s] - r.target.0[s] + r.source.0[s])
                    .collect();
                let shift: Vec<u32> = (0..n.len()).map(|s| n[s] - r.target.0[s]).collect();
                residual += term(&r.rate, &m, &shift);
            }
            // outflow: A_i(N)P(N) = k_i x̄^N/(N−S)!; needs N ≥ S
            if n.iter().zip(&r.source.0).all(|(&ns, &s)| ns >= s) {
                let shift: Vec<u32> = (0..n.len()).map(|s| n[s] - r.source.0[s]).collect();
                residual -= term(&r.rate, n, &shift);
            }
        }
        Ok(residual)
    }

    /// Residual of the complex-balance summation identity:
    /// `Σ_i k_i x̄^{source(i)−target(i)} α(target(i)) − Σ_i k_i α(source(i))`
    /// for a function `α` given per complex (indexed like `complexes()`).
    /// Zero for every `α` when `x̄` is complex balanced.
    pub fn key_lemma_residual(&self, xbar: &[BigRational], alpha: &[BigRational]) -> Result<BigRational> {
        self.check_x(xbar, true)?;
        if alpha.len() != self.complexes.len() {
            return Err(Error::dim(format!(
                "alpha has {} entries for {} complexes",
                alpha.len(),
                self.complexes.len()
            )));
        }
        let mut lhs = BigRational::zero();
        let mut rhs = BigRational::zero();
        for r in &self.reactions {
            let s = self.complex_index(&r.source).unwrap();
            let t = self.complex_index(&r.target).unwrap();
            let mut w = r.rate.clone();
            for (sp, x) in xbar.iter().enumerate() {
                let e = r.source.0[sp] as i64 - r.target.0[sp] as i64;
                if e != 0 {
                    w *= pow_i64(x, e);
                }
            }
            lhs += w * &alpha[t];
            rhs += &r.rate * &alpha[s];
        }
        Ok(lhs - rhs)
    }
}

fn to_rational_rows(rows: &[Vec<BigInt>]) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect()
}

/// Deterministic row order: by entry sum, then lexicographically.
fn row_sort_key(row: &Vec<BigInt>) -> (BigInt, Vec<BigInt>) {
    (row.iter().sum(), row.clone())
}

fn parse_complex(
    text: &str,
    species: &mut Vec<String>,
    lno: usize,
    col0: usize,
) -> Result<BTreeMap<usize, u32>> {
    let trimmed = text.trim();
    if trimmed == "0" {
        return Ok(BTreeMap::new());
    }
    let mut out: BTreeMap<usize, u32> = BTreeMap::new();
    let mut offset = 0usize;
    for term in text.split('+') {
        let col = col0 + offset + (term.len() - term.trim_start().len());
        offset += term.len() + 1;
        let toks: Vec<&str> = term.split_whitespace().collect();
        let (coeff, name) = match toks.as_slice() {
            [name] => (1u32, *name),
            [coeff, name] => {
                let c: u32 = coeff
                    .parse()
                    .map_err(|_| Error::parse(lno, col, format!("bad coefficient `{coeff}`")))?;
                if c == 0 {
                    return Err(Error::parse(lno, col, "zero coefficient"));
                }
                (c, *name)
            }
            [] => return Err(Error::parse(lno, col, "empty complex term")),
            _ => return Err(Error::parse(lno, col, format!("malformed term `{}`", term.trim()))),
        };
        let mut chars = name.chars();
        let head_ok = chars.next().map(|c| c.is_ascii_alphabetic()).unwrap_or(false);
        if !head_ok || !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(Error::parse(lno, col, format!("bad species name `{name}`")));
        }
        let idx = match species.iter().position(|s| s == name) {
            Some(i) => i,
            None => {
                species.push(name.to_string());
                species.len() - 1
            }
        };
        if out.contains_key(&idx) {
            return Err(Error::parse(
                lno,
                col,
                format!("species `{name}` repeated within a complex; write a coefficient instead"),
            ));
        }
        out.insert(idx, coeff);
    }
    Ok(out)
}
