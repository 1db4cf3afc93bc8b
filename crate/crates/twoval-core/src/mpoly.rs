//! Sparse multivariate polynomial arithmetic over exact coefficient domains.
//!
//! Polynomials are stored as maps from exponent vectors to nonzero
//! coefficients, with a per-polynomial variable list drawn from a fixed
//! global registry. The registry order is the canonical variable order used
//! for serialization and for the graded-lexicographic term order, so golden
//! files and JSON output are stable across runs.
//!
//! The module provides the elimination toolkit needed for two-valued group
//! computations: Sylvester resultants (fraction-free Bareiss expansion),
//! discriminants, simultaneous rational substitution with exact denominator
//! bookkeeping, exact multivariate division, gcd by primitive
//! pseudo-remainder sequences, and the classical rewriting of symmetric
//! polynomials in the elementary symmetric generators.

use crate::exactnum::{rat_parse, rat_to_string, Coefficient, FqElement, Rational};
use anyhow::{bail, Context, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Global variable registry, in canonical order. Earlier variables are
/// larger in the lexicographic part of the term order. `x0,x1,…` are the
/// homogeneous partners of `x,y,z`; `a1,a2,a3 / a,b,c / g2,g3` are family
/// parameters; `s1,s2,s3` denote the elementary symmetric functions
/// σ₁,σ₂,σ₃.
pub const REGISTRY: [&str; 24] = [
    "x", "y", "z", "w", "u", "v", "t", "x0", "x1", "y0", "y1", "z0", "z1", "a1", "a2", "a3",
    "a", "b", "c", "g2", "g3", "s1", "s2", "s3",
];

/// Index of a variable in [`REGISTRY`].
pub type VarId = usize;

/// Looks up a registry variable by name.
pub fn var_id(name: &str) -> Result<VarId> {
    REGISTRY
        .iter()
        .position(|&v| v == name)
        .with_context(|| format!("unknown variable {name:?}; registry: {REGISTRY:?}"))
}

/// Panicking variant of [`var_id`] for statically known names.
pub fn vid(name: &str) -> VarId {
    var_id(name).expect("registered variable")
}

/// Exponent vector relative to a polynomial's variable list, ordered by
/// graded lexicographic comparison (total degree first, then lex with
/// earlier registry variables weighing more).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    fn total(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with coefficients in `K` (one coefficient
/// domain per polynomial). Canonical form: variables strictly increasing by
/// registry id, no zero coefficients, no unused variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly<K: Coefficient> {
    vars: Vec<VarId>,
    terms: BTreeMap<Mono, K>,
}

/// Polynomial over ℚ — the workhorse domain.
pub type QPoly = MultiPoly<Rational>;

impl<K: Coefficient> MultiPoly<K> {
    /// Canonicalizing constructor: drops zero coefficients and unused
    /// variables. All operations funnel through here so that structural
    /// equality coincides with mathematical equality.
    fn from_terms(vars: Vec<VarId>, terms: BTreeMap<Mono, K>) -> Self {
        let mut terms: BTreeMap<Mono, K> =
            terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        // Identify unused variable positions.
        let mut used = vec![false; vars.len()];
        for mono in terms.keys() {
            for (i, &e) in mono.0.iter().enumerate() {
                if e > 0 {
                    used[i] = true;
                }
            }
        }
        if used.iter().all(|&u| u) {
            return MultiPoly { vars, terms };
        }
        let kept: Vec<VarId> = vars
            .iter()
            .zip(&used)
            .filter(|(_, &u)| u)
            .map(|(&v, _)| v)
            .collect();
        let new_terms = terms
            .iter()
            .map(|(mono, c)| {
                let exps: Vec<u32> = mono
                    .0
                    .iter()
                    .zip(&used)
                    .filter(|(_, &u)| u)
                    .map(|(&e, _)| e)
                    .collect();
                (Mono(exps), c.clone())
            })
            .collect();
        terms.clear();
        MultiPoly {
            vars: kept,
            terms: new_terms,
        }
    }

    pub fn zero() -> Self {
        MultiPoly {
            vars: Vec::new(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: K) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono(Vec::new()), c);
        }
        MultiPoly {
            vars: Vec::new(),
            terms,
        }
    }

    /// The monomial `c · v^e`.
    pub fn monomial(c: K, v: VarId, e: u32) -> Self {
        if c.is_zero() || e == 0 {
            return Self::constant(c);
        }
        let mut terms = BTreeMap::new();
        terms.insert(Mono(vec![e]), c);
        MultiPoly {
            vars: vec![v],
            terms,
        }
    }

    pub fn variable(v: VarId, one: K) -> Self {
        Self::monomial(one, v, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.vars.is_empty()
    }

    pub fn as_constant(&self) -> Option<K> {
        if self.is_zero() {
            return None; // callers handle zero explicitly
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterates terms in descending graded-lex order (leading term first),
    /// with exponents relative to `self.vars()`.
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Mono, &K)> {
        self.terms.iter().rev()
    }

    /// Total degree; 0 for constants and the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.total() as u32)
            .max()
            .unwrap_or(0)
    }

    /// Degree in a single variable (0 if the variable does not occur).
    pub fn degree_in(&self, v: VarId) -> u32 {
        match self.vars.iter().position(|&w| w == v) {
            None => 0,
            Some(i) => self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0),
        }
    }

    /// Merges two variable lists and remaps both term maps onto the union.
    fn aligned(&self, other: &Self) -> (Vec<VarId>, BTreeMap<Mono, K>, BTreeMap<Mono, K>) {
        let mut vars: Vec<VarId> = self.vars.clone();
        for &v in &other.vars {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        vars.sort_unstable();
        let a = remap_terms(&self.terms, &self.vars, &vars);
        let b = remap_terms(&other.terms, &other.vars, &vars);
        (vars, a, b)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (vars, mut a, b) = self.aligned(other);
        for (m, c) in b {
            match a.get_mut(&m) {
                Some(existing) => *existing = existing.add_ref(&c),
                None => {
                    a.insert(m, c);
                }
            }
        }
        Self::from_terms(vars, a)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg_ref()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let (vars, a, b) = self.aligned(other);
        let mut acc: BTreeMap<Mono, K> = BTreeMap::new();
        for (ma, ca) in &a {
            for (mb, cb) in &b {
                let exps: Vec<u32> = ma.0.iter().zip(&mb.0).map(|(x, y)| x + y).collect();
                let prod = ca.mul_ref(cb);
                let key = Mono(exps);
                match acc.get_mut(&key) {
                    Some(existing) => *existing = existing.add_ref(&prod),
                    None => {
                        acc.insert(key, prod);
                    }
                }
            }
        }
        Self::from_terms(vars, acc)
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k.mul_ref(c)))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        if exp == 0 {
            let one = match self.terms.values().next() {
                Some(c) => c.one_like(),
                None => K::generic_one(),
            };
            return Self::constant(one);
        }
        let mut acc = self.clone();
        for _ in 1..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial evaluation: substitutes constants for some variables.
    pub fn assign(&self, values: &[(VarId, K)]) -> Self {
        let mut result = self.clone();
        for (v, c) in values {
            result = result.assign_one(*v, c);
        }
        result
    }

    fn assign_one(&self, v: VarId, c: &K) -> Self {
        let Some(pos) = self.vars.iter().position(|&w| w == v) else {
            return self.clone();
        };
        let mut vars = self.vars.clone();
        vars.remove(pos);
        let mut acc: BTreeMap<Mono, K> = BTreeMap::new();
        for (m, k) in &self.terms {
            let e = m.0[pos];
            let mut exps = m.0.clone();
            exps.remove(pos);
            let mut coeff = k.clone();
            for _ in 0..e {
                coeff = coeff.mul_ref(c);
            }
            let key = Mono(exps);
            match acc.get_mut(&key) {
                Some(existing) => *existing = existing.add_ref(&coeff),
                None => {
                    acc.insert(key, coeff);
                }
            }
        }
        Self::from_terms(vars, acc)
    }

    /// Full evaluation at a point. Every variable of `self` must be covered.
    pub fn eval(&self, values: &[(VarId, K)]) -> Result<K> {
        let p = self.assign(values);
        if !p.vars.is_empty() {
            bail!(
                "evaluation left free variables: {:?}",
                p.vars.iter().map(|&v| REGISTRY[v]).collect::<Vec<_>>()
            );
        }
        if let Some(c) = p.terms.values().next() {
            return Ok(c.clone());
        }
        // Result is zero; recover the domain context from any available value.
        Ok(values
            .first()
            .map(|(_, v)| v.zero_like())
            .or_else(|| self.terms.values().next().map(|c| c.zero_like()))
            .unwrap_or_else(|| K::generic_one().zero_like()))
    }

    /// Coefficient polynomials with respect to one variable: entry `i` is
    /// the coefficient of `v^i`, a polynomial in the remaining variables.
    pub fn coeffs_wrt(&self, v: VarId) -> Vec<Self> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![Self::zero(); d + 1];
        let pos = self.vars.iter().position(|&w| w == v);
        for (m, c) in &self.terms {
            let (e, exps) = match pos {
                None => (0usize, m.0.clone()),
                Some(i) => {
                    let mut exps = m.0.clone();
                    let e = exps.remove(i);
                    (e as usize, exps)
                }
            };
            let mut vars = self.vars.clone();
            if let Some(i) = pos {
                vars.remove(i);
            }
            let single = Self::from_terms(vars, BTreeMap::from([(Mono(exps), c.clone())]));
            out[e] = out[e].add(&single);
        }
        out
    }

    /// Leading coefficient with respect to one variable.
    pub fn leading_coeff_wrt(&self, v: VarId) -> Self {
        self.coeffs_wrt(v).pop().unwrap_or_else(Self::zero)
    }

    /// Rebuilds `Σ coeffs[i] · v^i`.
    pub fn from_coeffs_wrt(v: VarId, coeffs: &[Self], one: &K) -> Self {
        let vp = Self::variable(v, one.clone());
        let mut acc = Self::zero();
        for (i, c) in coeffs.iter().enumerate() {
            acc = acc.add(&c.mul(&vp.pow(i as u32)));
        }
        acc
    }

    /// Partial derivative.
    pub fn derivative(&self, v: VarId) -> Self {
        let Some(pos) = self.vars.iter().position(|&w| w == v) else {
            return Self::zero();
        };
        let mut acc: BTreeMap<Mono, K> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[pos];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[pos] = e - 1;
            let factor = c.mul_i64(e as i64);
            acc.insert(Mono(exps), factor);
        }
        Self::from_terms(self.vars.clone(), acc)
    }

    /// Leading term in graded-lex order over the polynomial's variables,
    /// as (exponents aligned to `self.vars`, coefficient).
    fn leading_term(&self) -> Option<(Mono, K)> {
        self.terms
            .iter()
            .next_back()
            .map(|(m, c)| (m.clone(), c.clone()))
    }

    /// Exact multivariate division: `Some(q)` with `p = q·d` if `d` divides
    /// `self` exactly, else `None`. Reduction with respect to the graded-lex
    /// leading term of `d`; complete for single-divisor divisibility testing.
    pub fn divides_into(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (vars, a, b) = self.aligned(d);
        let mut rem = MultiPoly {
            vars: vars.clone(),
            terms: a,
        };
        let dpoly = MultiPoly {
            vars: vars.clone(),
            terms: b,
        };
        let (dlt, dlc) = dpoly.leading_term().expect("nonzero divisor");
        let mut quot: BTreeMap<Mono, K> = BTreeMap::new();
        while !rem.is_zero() {
            // rem's vars may have shrunk below `vars`; realign.
            let rts = remap_terms(&rem.terms, &rem.vars, &vars);
            let (rlt, rlc) = rts
                .iter()
                .next_back()
                .map(|(m, c)| (m.clone(), c.clone()))
                .expect("nonzero remainder");
            if rlt.0.iter().zip(&dlt.0).any(|(r, d)| r < d) {
                return None;
            }
            let qexp: Vec<u32> = rlt.0.iter().zip(&dlt.0).map(|(r, d)| r - d).collect();
            let qc = rlc.div_exact(&dlc)?;
            let qterm = MultiPoly::from_terms(
                vars.clone(),
                BTreeMap::from([(Mono(qexp.clone()), qc.clone())]),
            );
            quot.insert(Mono(qexp), qc);
            rem = rem.sub(&qterm.mul(&dpoly));
        }
        Some(MultiPoly::from_terms(vars, quot))
    }

    fn one_coeff(&self) -> K {
        self.terms
            .values()
            .next()
            .map(|c| c.one_like())
            .unwrap_or_else(K::generic_one)
    }
}

fn remap_terms<K: Coefficient>(
    terms: &BTreeMap<Mono, K>,
    from: &[VarId],
    to: &[VarId],
) -> BTreeMap<Mono, K> {
    if from == to {
        return terms.clone();
    }
    let positions: Vec<usize> = from
        .iter()
        .map(|v| to.iter().position(|w| w == v).expect("superset vars"))
        .collect();
    terms
        .iter()
        .map(|(m, c)| {
            let mut exps = vec![0u32; to.len()];
            for (i, &e) in m.0.iter().enumerate() {
                exps[positions[i]] = e;
            }
            (Mono(exps), c.clone())
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Resultants and discriminants
// ---------------------------------------------------------------------------

/// Determinant of the Sylvester matrix of `p` and `q` with respect to `var`,
/// with entries in the remaining-variable polynomial ring. Expanded by
/// fraction-free Bareiss elimination (all intermediate divisions exact).
pub fn resultant<K: Coefficient>(
    p: &MultiPoly<K>,
    q: &MultiPoly<K>,
    var: VarId,
) -> Result<MultiPoly<K>> {
    let m = p.degree_in(var) as usize;
    let n = q.degree_in(var) as usize;
    if m == 0 || n == 0 {
        bail!(
            "resultant requires positive degree in {} for both arguments (got {m} and {n})",
            REGISTRY[var]
        );
    }
    let pc = p.coeffs_wrt(var);
    let qc = q.coeffs_wrt(var);
    let size = m + n;
    let zero = MultiPoly::<K>::zero();
    let mut mat = vec![vec![zero.clone(); size]; size];
    // n rows of p-coefficients (descending), then m rows of q-coefficients.
    for row in 0..n {
        for (j, c) in pc.iter().rev().enumerate() {
            mat[row][row + j] = c.clone();
        }
    }
    for row in 0..m {
        for (j, c) in qc.iter().rev().enumerate() {
            mat[n + row][row + j] = c.clone();
        }
    }
    Ok(bareiss_det(mat))
}

/// Fraction-free determinant of a matrix of polynomials (Bareiss).
fn bareiss_det<K: Coefficient>(mut m: Vec<Vec<MultiPoly<K>>>) -> MultiPoly<K> {
    let n = m.len();
    if n == 0 {
        return MultiPoly::zero();
    }
    let Some(sample) = m.iter().flatten().find(|p| !p.is_zero()) else {
        return MultiPoly::zero();
    };
    let one = sample.one_coeff();
    let mut sign_flip = false;
    let mut prev = MultiPoly::constant(one);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return MultiPoly::zero();
            };
            m.swap(k, swap);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num
                    .divides_into(&prev)
                    .expect("Bareiss interior division is exact");
            }
            m[i][k] = MultiPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        det.neg()
    } else {
        det
    }
}

/// Discriminant with respect to `var`:
/// `disc = (−1)^{d(d−1)/2} · Res(p, ∂p/∂var) / lc_var(p)` with `d = deg_var(p)`.
/// The division is exact; failure indicates an internal inconsistency.
pub fn discriminant<K: Coefficient>(p: &MultiPoly<K>, var: VarId) -> Result<MultiPoly<K>> {
    let d = p.degree_in(var);
    if d < 2 {
        bail!(
            "discriminant requires degree ≥ 2 in {} (got {d})",
            REGISTRY[var]
        );
    }
    let res = resultant(p, &p.derivative(var), var)?;
    let lc = p.leading_coeff_wrt(var);
    let quot = res
        .divides_into(&lc)
        .context("internal-consistency fault: discriminant division by the leading coefficient was not exact")?;
    let sign_exp = (d as u64) * (d as u64 - 1) / 2;
    Ok(if sign_exp % 2 == 1 { quot.neg() } else { quot })
}

// ---------------------------------------------------------------------------
// Rational substitution
// ---------------------------------------------------------------------------

/// Simultaneous substitution `xᵢ → numᵢ/denᵢ`. Variables not listed are left
/// fixed (identity substitution).
#[derive(Clone, Debug, Default)]
pub struct RationalSubst {
    entries: BTreeMap<VarId, (QPoly, QPoly)>,
}

impl RationalSubst {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(mut self, v: VarId, num: QPoly, den: QPoly) -> Result<Self> {
        if den.is_zero() {
            bail!("zero denominator in substitution for {}", REGISTRY[v]);
        }
        self.entries.insert(v, (num, den));
        Ok(self)
    }

    /// Polynomial substitution (denominator 1).
    pub fn set_poly(self, v: VarId, num: QPoly) -> Self {
        self.set(v, num, QPoly::constant(Rational::one()))
            .expect("unit denominator")
    }
}

/// Applies a simultaneous rational substitution to `p`, returning `(N, D)`
/// with `p∘s = N/D` and `D = ∏ᵢ denᵢ^{degᵢ(p)}` (per-variable degrees of
/// `p`). No gcd cancellation is performed; the caller normalizes.
pub fn substitute(p: &QPoly, s: &RationalSubst) -> Result<(QPoly, QPoly)> {
    let one = QPoly::constant(Rational::one());
    // Per-variable data: (position in p.vars, degree, num powers, den powers)
    struct Entry {
        degree: u32,
        num_pows: Vec<QPoly>,
        den_pows: Vec<QPoly>,
    }
    let mut entries: Vec<Option<Entry>> = Vec::new();
    let mut denominator = one.clone();
    for &v in p.vars() {
        match s.entries.get(&v) {
            None => entries.push(None),
            Some((num, den)) => {
                if den.is_zero() {
                    bail!("zero denominator in substitution for {}", REGISTRY[v]);
                }
                let d = p.degree_in(v);
                let mut num_pows = vec![one.clone()];
                let mut den_pows = vec![one.clone()];
                for i in 1..=d {
                    num_pows.push(num_pows[i as usize - 1].mul(num));
                    den_pows.push(den_pows[i as usize - 1].mul(den));
                }
                denominator = denominator.mul(&den_pows[d as usize]);
                entries.push(Some(Entry {
                    degree: d,
                    num_pows,
                    den_pows,
                }));
            }
        }
    }
    let mut numerator = QPoly::zero();
    for (mono, c) in p.terms_desc() {
        let mut term = QPoly::constant(c.clone());
        for (i, &e) in mono.0.iter().enumerate() {
            match &entries[i] {
                None => {
                    term = term.mul(&QPoly::monomial(Rational::one(), p.vars()[i], e));
                }
                Some(entry) => {
                    term = term.mul(&entry.num_pows[e as usize]);
                    term = term.mul(&entry.den_pows[(entry.degree - e) as usize]);
                }
            }
        }
        numerator = numerator.add(&term);
    }
    Ok((numerator, denominator))
}

// ---------------------------------------------------------------------------
// ℚ-specific operations: content normalization, gcd, symmetric rewriting
// ---------------------------------------------------------------------------

impl QPoly {
    /// Convenience: the polynomial `n` (integer constant).
    pub fn qint(n: i64) -> QPoly {
        QPoly::constant(Rational::from_integer(BigInt::from(n)))
    }

    /// Convenience: the variable `name` as a ℚ-polynomial.
    pub fn qvar(name: &str) -> QPoly {
        QPoly::variable(vid(name), Rational::one())
    }

    /// Rational content: the positive rational `c` such that `p/c` has
    /// coprime integer coefficients. Zero polynomial has content 0.
    pub fn content(&self) -> Rational {
        use num_integer::Integer;
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        if num_gcd.is_zero() {
            return Rational::zero();
        }
        Rational::new(num_gcd, den_lcm)
    }

    /// Divides by the rational content and fixes the sign of the graded-lex
    /// leading term positive. Two polynomials are proportional over ℚ iff
    /// their normalizations are equal. Errors on the zero polynomial.
    pub fn content_normalize(&self) -> Result<QPoly> {
        if self.is_zero() {
            bail!("content_normalize of the zero polynomial");
        }
        let mut c = self.content();
        let (_, lead) = self.leading_term().expect("nonzero");
        if lead.is_negative() {
            c = -c;
        }
        let inv = c.recip();
        Ok(self.scale(&inv))
    }

    /// True iff `self` and `other` agree up to a nonzero rational constant.
    pub fn proportional(&self, other: &QPoly) -> bool {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => true,
            (true, false) | (false, true) => false,
            _ => {
                self.content_normalize().expect("nonzero")
                    == other.content_normalize().expect("nonzero")
            }
        }
    }

    /// Multivariate gcd over ℚ by primitive pseudo-remainder sequences,
    /// returned content-normalized (so gcd of coprime inputs is 1).
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let g = gcd_inner(self, other);
        if g.is_zero() {
            g
        } else {
            g.content_normalize().expect("nonzero")
        }
    }
}

/// Reduces a rational-coefficient polynomial mod q, coefficient by
/// coefficient. Errors when any coefficient has a denominator divisible
/// by q.
pub fn reduce_mod_q(p: &QPoly, q: u64) -> Result<MultiPoly<FqElement>> {
    let mut terms = BTreeMap::new();
    for (m, c) in &p.terms {
        let r = FqElement::from_rational(c, q)?;
        if !Coefficient::is_zero(&r) {
            terms.insert(m.clone(), r);
        }
    }
    Ok(MultiPoly::from_terms(p.vars.clone(), terms))
}

fn gcd_inner(p: &QPoly, q: &QPoly) -> QPoly {
    if p.is_zero() {
        return q.clone();
    }
    if q.is_zero() {
        return p.clone();
    }
    if p.is_constant() || q.is_constant() {
        return QPoly::qint(1);
    }
    // Main variable: the highest registry variable present in either.
    let v = *p.vars().iter().chain(q.vars()).max().expect("non-constant");
    let (a_cont, a_prim) = primitive_part(p, v);
    let (b_cont, b_prim) = primitive_part(q, v);
    let cont_gcd = gcd_inner(&a_cont, &b_cont);
    let (mut a, mut b) = if a_prim.degree_in(v) >= b_prim.degree_in(v) {
        (a_prim, b_prim)
    } else {
        (b_prim, a_prim)
    };
    loop {
        if b.is_zero() {
            break;
        }
        if b.degree_in(v) == 0 {
            // Nonzero constant in the main variable ⇒ primitive parts coprime.
            a = QPoly::qint(1);
            break;
        }
        let r = pseudo_rem(&a, &b, v);
        a = b;
        b = if r.is_zero() {
            r
        } else {
            primitive_part(&r, v).1
        };
    }
    let a_final = if a.degree_in(v) == 0 {
        QPoly::qint(1)
    } else {
        primitive_part(&a, v).1
    };
    cont_gcd.mul(&a_final)
}

/// Content (gcd of the coefficient polynomials w.r.t. `v`) and primitive part.
fn primitive_part(p: &QPoly, v: VarId) -> (QPoly, QPoly) {
    let coeffs = p.coeffs_wrt(v);
    let mut cont = QPoly::zero();
    for c in &coeffs {
        cont = gcd_inner(&cont, c);
        if !cont.is_zero() && cont.is_constant() {
            break;
        }
    }
    if cont.is_zero() {
        return (QPoly::zero(), QPoly::zero());
    }
    let cont = cont.content_normalize().expect("nonzero");
    let prim = p.divides_into(&cont).expect("content divides");
    (cont, prim)
}

/// Pseudo-remainder of `a` by `b` in the main variable `v`:
/// `lc(b)^{deg a − deg b + 1} · a ≡ prem (mod b)`.
fn pseudo_rem(a: &QPoly, b: &QPoly, v: VarId) -> QPoly {
    let db = b.degree_in(v);
    let lc_b = b.leading_coeff_wrt(v);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lc_r = r.leading_coeff_wrt(v);
        let shift = QPoly::monomial(Rational::one(), v, dr - db);
        // r ← lc(b)·r − lc(r)·v^{dr−db}·b
        r = r.mul(&lc_b).sub(&lc_r.mul(&shift).mul(b));
    }
    r
}

/// Elementary symmetric polynomials e₁, e₂, e₃ in x, y, z.
pub fn elementary_symmetric() -> (QPoly, QPoly, QPoly) {
    let x = QPoly::qvar("x");
    let y = QPoly::qvar("y");
    let z = QPoly::qvar("z");
    let e1 = x.add(&y).add(&z);
    let e2 = x.mul(&y).add(&y.mul(&z)).add(&z.mul(&x));
    let e3 = x.mul(&y).mul(&z);
    (e1, e2, e3)
}

/// Rewrites a polynomial that is symmetric in x, y, z (coefficients may
/// involve the parameter variables) in the elementary symmetric generators
/// σ₁, σ₂, σ₃ (registry variables `s1,s2,s3`), by the classical leading-term
/// elimination. Errors when the input is not symmetric under all 6
/// permutations.
pub fn to_sigma(p: &QPoly) -> Result<QPoly> {
    let (xv, yv, zv) = (vid("x"), vid("y"), vid("z"));
    for v in [vid("s1"), vid("s2"), vid("s3")] {
        if p.vars().contains(&v) {
            bail!("input already involves {}", REGISTRY[v]);
        }
    }
    // Full symmetry check: all 6 permutations of (x, y, z).
    for perm in [
        [xv, zv, yv],
        [yv, xv, zv],
        [yv, zv, xv],
        [zv, xv, yv],
        [zv, yv, xv],
    ] {
        if &permute_xyz(p, perm) != p {
            bail!("polynomial is not symmetric in x, y, z");
        }
    }
    let (e1, e2, e3) = elementary_symmetric();
    let (s1, s2, s3) = (QPoly::qvar("s1"), QPoly::qvar("s2"), QPoly::qvar("s3"));
    let mut rem = p.clone();
    let mut out = QPoly::zero();
    while !rem.is_zero() {
        // Leading exponent triple in pure lex on (x, y, z); symmetry forces
        // α ≥ β ≥ γ.
        let (alpha, beta, gamma, coeff) = lead_xyz(&rem, xv, yv, zv);
        debug_assert!(alpha >= beta && beta >= gamma);
        let basis = e1.pow(alpha - beta).mul(&e2.pow(beta - gamma)).mul(&e3.pow(gamma));
        let sigma = s1.pow(alpha - beta).mul(&s2.pow(beta - gamma)).mul(&s3.pow(gamma));
        rem = rem.sub(&coeff.mul(&basis));
        out = out.add(&coeff.mul(&sigma));
    }
    Ok(out)
}

/// Substitutes σᵢ → eᵢ(x,y,z); the round-trip inverse of [`to_sigma`].
pub fn from_sigma(p: &QPoly) -> QPoly {
    let (e1, e2, e3) = elementary_symmetric();
    let s = RationalSubst::new()
        .set_poly(vid("s1"), e1)
        .set_poly(vid("s2"), e2)
        .set_poly(vid("s3"), e3);
    let (n, d) = substitute(p, &s).expect("polynomial substitution");
    debug_assert!(d.as_constant().map(|c| c.is_one()).unwrap_or(false));
    n
}

fn permute_xyz(p: &QPoly, images: [VarId; 3]) -> QPoly {
    // Renames (x, y, z) → images simultaneously via fresh substitution.
    let s = RationalSubst::new()
        .set_poly(vid("x"), QPoly::variable(images[0], Rational::one()))
        .set_poly(vid("y"), QPoly::variable(images[1], Rational::one()))
        .set_poly(vid("z"), QPoly::variable(images[2], Rational::one()));
    let (n, _) = substitute(p, &s).expect("variable permutation");
    n
}

/// Largest (α, β, γ) in pure lex among exponent triples of (x,y,z), with its
/// coefficient (a polynomial in the remaining variables).
fn lead_xyz(p: &QPoly, xv: VarId, yv: VarId, zv: VarId) -> (u32, u32, u32, QPoly) {
    let pos = |v: VarId| p.vars().iter().position(|&w| w == v);
    let (px, py, pz) = (pos(xv), pos(yv), pos(zv));
    let get = |m: &Mono, p: Option<usize>| p.map(|i| m.0[i]).unwrap_or(0);
    let mut best: Option<(u32, u32, u32)> = None;
    for (m, _) in p.terms_desc() {
        let t = (get(m, px), get(m, py), get(m, pz));
        if best.map(|b| t > b).unwrap_or(true) {
            best = Some(t);
        }
    }
    let (a, b, g) = best.expect("nonzero polynomial");
    // Collect the coefficient of x^a y^b z^g.
    let mut coeff = QPoly::zero();
    for (m, c) in p.terms_desc() {
        if (get(m, px), get(m, py), get(m, pz)) == (a, b, g) {
            let mut vars = Vec::new();
            let mut exps = Vec::new();
            for (i, &v) in p.vars().iter().enumerate() {
                if v != xv && v != yv && v != zv {
                    vars.push(v);
                    exps.push(m.0[i]);
                }
            }
            let single = QPoly::from_terms(vars, BTreeMap::from([(Mono(exps), c.clone())]));
            coeff = coeff.add(&single);
        }
    }
    (a, b, g, coeff)
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

impl QPoly {
    /// JSON interchange form:
    /// `{"vars": [names…], "terms": [{"coeff": "p/q", "exps": [e…]}…]}`
    /// with terms in descending graded-lex order (leading term first).
    pub fn to_json(&self) -> Value {
        let vars: Vec<&str> = self.vars.iter().map(|&v| REGISTRY[v]).collect();
        let terms: Vec<Value> = self
            .terms_desc()
            .map(|(m, c)| {
                json!({
                    "coeff": rat_to_string(c),
                    "exps": m.0,
                })
            })
            .collect();
        json!({ "vars": vars, "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<QPoly> {
        let vars_json = v
            .get("vars")
            .and_then(Value::as_array)
            .context("polynomial JSON: missing \"vars\" array")?;
        let mut vars = Vec::new();
        for name in vars_json {
            let name = name.as_str().context("variable names must be strings")?;
            vars.push(var_id(name)?);
        }
        let mut sorted = vars.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != vars.len() || sorted != vars {
            bail!("polynomial JSON: variables must be unique and in registry order");
        }
        let terms_json = v
            .get("terms")
            .and_then(Value::as_array)
            .context("polynomial JSON: missing \"terms\" array")?;
        let mut terms = BTreeMap::new();
        for t in terms_json {
            let coeff = rat_parse(
                t.get("coeff")
                    .and_then(Value::as_str)
                    .context("term: missing \"coeff\" string")?,
            )?;
            let exps_json = t
                .get("exps")
                .and_then(Value::as_array)
                .context("term: missing \"exps\" array")?;
            if exps_json.len() != vars.len() {
                bail!("term exponent vector length mismatch");
            }
            let mut exps = Vec::new();
            for e in exps_json {
                exps.push(
                    u32::try_from(e.as_u64().context("exponents are nonnegative integers")?)
                        .context("exponent too large")?,
                );
            }
            if terms.insert(Mono(exps), coeff).is_some() {
                bail!("duplicate exponent vector in polynomial JSON");
            }
        }
        Ok(QPoly::from_terms(vars, terms))
    }
}

impl<K: Coefficient> fmt::Display for MultiPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms_desc() {
            let cs = c.coeff_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
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
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        REGISTRY[self.vars[i]].to_string()
                    } else {
                        format!("{}^{}", REGISTRY[self.vars[i]], e)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, mono.join("*"))?;
            }
        }
        Ok(())
    }
}
