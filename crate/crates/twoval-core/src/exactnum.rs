//! Exact scalar arithmetic: arbitrary-precision rationals, odd-prime fields
//! 𝔽_q, and cyclotomic fields ℚ(ζ_N).
//!
//! Every computation in this crate is exact. Identity checks over ℚ reduce to
//! equality of normalized big-rational coefficients; finite-field checks are
//! integer arithmetic modulo an odd prime; the N-valued multiplication
//! constructions need N-th roots of unity, which live in ℚ(ζ_N) represented
//! modulo the cyclotomic polynomial Φ_N (a field, so representations are
//! unique). No floating point is used anywhere on a verification path.

use anyhow::{bail, Context, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator (the representation `num_rational` maintains).
pub type Rational = num_rational::BigRational;

/// Convenience constructor for small integer rationals.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational `p/q` from small integers. Panics on `q = 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"` or `"p"` (reduced automatically).
pub fn rat_parse(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).with_context(|| format!("invalid rational literal {s:?}"))
}

/// Serializes a rational as `"p/q"`, or `"p"` when the denominator is 1.
pub fn rat_to_string(r: &Rational) -> String {
    r.to_string()
}

/// Exact rational square root: `Some(s)` with `s ≥ 0` and `s² = r`, or `None`
/// when `r` is not a perfect square in ℚ.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let num = r.numer().sqrt();
    let den = r.denom().sqrt();
    if &(&num * &num) == r.numer() && &(&den * &den) == r.denom() {
        Some(Rational::new(num, den))
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Prime fields 𝔽_q, q an odd prime
// ---------------------------------------------------------------------------

/// Element of the prime field 𝔽_q. The modulus travels with the value so
/// that polynomial coefficients are self-describing; mixing moduli is a
/// programming error and panics.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FqElement {
    residue: u64,
    q: u64,
}

impl fmt::Debug for FqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.residue, self.q)
    }
}

impl fmt::Display for FqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

/// Deterministic Miller–Rabin primality test, valid for all `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

impl FqElement {
    /// Constructs the residue class of `value` in 𝔽_q. `q` must be an odd
    /// prime (prime powers are not supported).
    pub fn new(value: i64, q: u64) -> Result<Self> {
        if q < 3 || !is_prime_u64(q) {
            bail!("modulus {q} is not an odd prime");
        }
        Ok(Self::reduce(value, q))
    }

    /// As `new`, but panics on an invalid modulus; for internal call sites
    /// where `q` has already been validated.
    pub fn of(value: i64, q: u64) -> Self {
        Self::new(value, q).expect("valid odd-prime modulus")
    }

    /// Reduces a rational number mod q. Errors when the denominator lies in
    /// (q) or the modulus is invalid.
    pub fn from_rational(r: &Rational, q: u64) -> Result<Self> {
        use num_traits::ToPrimitive;
        let m = BigInt::from(q);
        let num = r.numer().mod_floor(&m).to_u64().expect("reduced residue");
        let den = r.denom().mod_floor(&m).to_u64().expect("reduced residue");
        let num = Self::new(num as i64, q)?;
        let den = Self::new(den as i64, q)?;
        if den.is_zero() {
            bail!("denominator of {r} vanishes mod {q}");
        }
        Ok(num.div(den))
    }

    fn reduce(value: i64, q: u64) -> Self {
        let m = q as i64;
        let r = ((value % m) + m) % m;
        FqElement { residue: r as u64, q }
    }

    pub fn zero(q: u64) -> Self {
        FqElement { residue: 0, q }
    }

    pub fn one(q: u64) -> Self {
        FqElement { residue: 1 % q, q }
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }

    fn check(self, other: Self) -> Self {
        assert_eq!(
            self.q, other.q,
            "mixed field moduli {} and {}",
            self.q, other.q
        );
        other
    }

    pub fn add(self, other: Self) -> Self {
        let other = self.check(other);
        FqElement {
            residue: (self.residue + other.residue) % self.q,
            q: self.q,
        }
    }

    pub fn sub(self, other: Self) -> Self {
        let other = self.check(other);
        FqElement {
            residue: (self.residue + self.q - other.residue) % self.q,
            q: self.q,
        }
    }

    pub fn neg(self) -> Self {
        FqElement {
            residue: (self.q - self.residue) % self.q,
            q: self.q,
        }
    }

    pub fn mul(self, other: Self) -> Self {
        let other = self.check(other);
        FqElement {
            residue: mul_mod(self.residue, other.residue, self.q),
            q: self.q,
        }
    }

    pub fn pow(self, exp: u64) -> Self {
        FqElement {
            residue: pow_mod(self.residue, exp, self.q),
            q: self.q,
        }
    }

    /// Multiplicative inverse via Fermat's little theorem. Panics on zero.
    pub fn inv(self) -> Self {
        assert!(!self.is_zero(), "division by zero in F_{}", self.q);
        self.pow(self.q - 2)
    }

    pub fn div(self, other: Self) -> Self {
        self.mul(other.inv())
    }

    /// Legendre symbol (a/q) ∈ {−1, 0, 1} via Euler's criterion.
    pub fn legendre(self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        if self.pow((self.q - 1) / 2).residue == 1 {
            1
        } else {
            -1
        }
    }
}

/// Number of square roots of `a` in 𝔽_q: `#{u ∈ 𝔽_q : u² = a}`.
/// Returns 1 iff `a = 0`, 2 iff `a` is a nonzero square, 0 otherwise.
pub fn count_sqrt(a: FqElement) -> u8 {
    match a.legendre() {
        0 => 1,
        1 => 2,
        _ => 0,
    }
}

/// Canonical square root in 𝔽_q via Tonelli–Shanks (with an Euler-criterion
/// pre-test). When `a` is a square, returns the numerically smaller of the
/// two roots (`residue ≤ q − residue`); otherwise `None`.
pub fn fq_sqrt(a: FqElement) -> Option<FqElement> {
    let q = a.q;
    if a.is_zero() {
        return Some(a);
    }
    if a.legendre() != 1 {
        return None;
    }
    let r = if q % 4 == 3 {
        pow_mod(a.residue, (q + 1) / 4, q)
    } else {
        tonelli_shanks(a.residue, q)
    };
    let canonical = r.min(q - r);
    Some(FqElement {
        residue: canonical,
        q,
    })
}

/// Tonelli–Shanks for q ≡ 1 (mod 4), assuming `a` is a nonzero square.
fn tonelli_shanks(a: u64, q: u64) -> u64 {
    let mut s = 0u32;
    let mut d = q - 1;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // Find a quadratic non-residue z.
    let mut z = 2u64;
    while pow_mod(z, (q - 1) / 2, q) != q - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, d, q);
    let mut t = pow_mod(a, d, q);
    let mut r = pow_mod(a, (d + 1) / 2, q);
    while t != 1 {
        let mut i = 0u32;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, q);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), q);
        m = i;
        c = mul_mod(b, b, q);
        t = mul_mod(t, c, q);
        r = mul_mod(r, b, q);
    }
    r
}

// ---------------------------------------------------------------------------
// Cyclotomic fields ℚ(ζ_N)
// ---------------------------------------------------------------------------

/// Element of ℚ(ζ_N), stored as a vector of rational coordinates in the
/// power basis 1, ζ, …, ζ^{φ(N)−1} modulo the N-th cyclotomic polynomial
/// Φ_N. Working modulo Φ_N (rather than ζ^N − 1) makes this a field with
/// unique representations, so equality is coordinate-wise.
#[derive(Clone, PartialEq, Eq)]
pub struct CyclotomicElement {
    order: u32,
    /// Coordinates, length φ(N).
    coeffs: Vec<Rational>,
}

impl fmt::Debug for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic(N={}; {:?})", self.order, self.coeffs)
    }
}

/// Monic N-th cyclotomic polynomial Φ_N as ascending integer coefficients,
/// computed by the classical recursion Φ_N = (x^N − 1) / ∏_{d|N, d<N} Φ_d.
fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    assert!(n >= 1);
    if n == 1 {
        return vec![BigInt::from(-1), BigInt::from(1)]; // x − 1
    }
    // numerator x^N − 1
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            num = poly_div_exact(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

/// Exact division of integer polynomials (ascending coefficients), panicking
/// if the division is not exact; used only for the cyclotomic recursion.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "cyclotomic divisors are monic");
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quot[i - dd] = c.clone();
        for (j, dj) in den.iter().enumerate() {
            let idx = i - dd + j;
            rem[idx] -= &c * dj;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact cyclotomic division");
    quot
}

fn euler_phi(n: u32) -> u32 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

impl CyclotomicElement {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn zero(n: u32) -> Self {
        assert!(n >= 1, "cyclotomic order must be at least 1");
        CyclotomicElement {
            order: n,
            coeffs: vec![Rational::zero(); euler_phi(n) as usize],
        }
    }

    pub fn from_rational(n: u32, r: Rational) -> Self {
        let mut e = Self::zero(n);
        e.coeffs[0] = r;
        e
    }

    pub fn one(n: u32) -> Self {
        Self::from_rational(n, Rational::one())
    }

    /// The primitive root of unity ζ_N. For N = 1 this is the rational 1.
    pub fn zeta(n: u32) -> Self {
        let mut e = Self::zero(n);
        if e.coeffs.len() == 1 {
            // φ(N) = 1, i.e. N ∈ {1, 2}: ζ_1 = 1, ζ_2 = −1.
            e.coeffs[0] = if n == 2 { -Rational::one() } else { Rational::one() };
        } else {
            e.coeffs[1] = Rational::one();
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| Zero::is_zero(c))
    }

    fn check(&self, other: &Self) {
        assert_eq!(
            self.order, other.order,
            "mixed cyclotomic orders {} and {}",
            self.order, other.order
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        CyclotomicElement {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        CyclotomicElement {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        CyclotomicElement {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CyclotomicElement {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| a * r).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let phi = self.coeffs.len();
        // Raw convolution of degree ≤ 2φ(N) − 2, then reduction modulo Φ_N.
        let mut raw = vec![Rational::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if Zero::is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if Zero::is_zero(b) {
                    continue;
                }
                raw[i + j] += a * b;
            }
        }
        let phi_n: Vec<Rational> = cyclotomic_polynomial(self.order)
            .into_iter()
            .map(Rational::from_integer)
            .collect();
        // Reduce: for each degree ≥ φ(N), ζ^d = −(lower terms of Φ_N)·ζ^{d−φ}.
        for d in (phi..raw.len()).rev() {
            let c = std::mem::replace(&mut raw[d], Rational::zero());
            if Zero::is_zero(&c) {
                continue;
            }
            for k in 0..phi {
                let adj = &c * &phi_n[k];
                raw[d - phi + k] -= adj;
            }
        }
        raw.truncate(phi);
        CyclotomicElement {
            order: self.order,
            coeffs: raw,
        }
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut acc = Self::one(self.order);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    /// If the element lies in ℚ (all higher coordinates vanish), returns it
    /// as a `Rational`.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(|c| Zero::is_zero(c)) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }
}

impl CyclotomicElement {
    /// Multiplicative inverse, by solving the φ(N)×φ(N) linear system of
    /// the multiplication-by-`self` matrix over ℚ. `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let phi = self.coeffs.len();
        // Column j of the matrix: coordinates of self · ζ^j.
        let mut cols = Vec::with_capacity(phi);
        let mut power = self.clone();
        for _ in 0..phi {
            cols.push(power.coeffs.clone());
            power = power.mul(&Self::zeta(self.order));
        }
        // Solve M x = e₀ by Gaussian elimination with augmented column.
        let mut m = vec![vec![Rational::zero(); phi + 1]; phi];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..phi {
                m[i][j] = col[i].clone();
            }
        }
        m[0][phi] = Rational::one();
        for col in 0..phi {
            let pivot = (col..phi).find(|&r| !Zero::is_zero(&m[r][col]))?;
            m.swap(col, pivot);
            let p = m[col][col].clone();
            for j in col..=phi {
                m[col][j] = &m[col][j] / &p;
            }
            for r in 0..phi {
                if r != col && !Zero::is_zero(&m[r][col]) {
                    let f = m[r][col].clone();
                    for j in col..=phi {
                        let adj = &f * &m[col][j];
                        m[r][j] -= adj;
                    }
                }
            }
        }
        Some(CyclotomicElement {
            order: self.order,
            coeffs: (0..phi).map(|i| m[i][phi].clone()).collect(),
        })
    }
}

/// Sums `f(k)` over k = 0..N−1 in ℚ(ζ_N) and returns the result as a
/// `Rational`. Sums that are symmetric over all N-th roots of unity (the use
/// case: averaging branch values of an N-valued multiplication) always land
/// in ℚ; a non-rational sum is an error.
pub fn cyclotomic_pow_sum(
    n: u32,
    f: impl Fn(u32) -> CyclotomicElement,
) -> Result<Rational> {
    if n == 0 {
        bail!("cyclotomic order N = 0 is rejected");
    }
    let mut acc = CyclotomicElement::zero(n);
    for k in 0..n {
        acc = acc.add(&f(k));
    }
    acc.to_rational()
        .context("symmetric cyclotomic sum did not reduce to a rational")
}

// ---------------------------------------------------------------------------
// Common coefficient interface for polynomial arithmetic
// ---------------------------------------------------------------------------

/// Scalar domains usable as polynomial coefficients. All three exact domains
/// (ℚ, 𝔽_q, ℚ(ζ_N)) are fields, so `div_exact` fails only on division by
/// zero. Context-carrying domains (modulus, cyclotomic order) propagate
/// their context through `one_like`/`zero_like`; `generic_one` exists only
/// for the context-free rationals and panics otherwise.
pub trait Coefficient: Clone + PartialEq + Eq + fmt::Debug {
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Multiplicative identity in the same domain instance as `self`.
    fn one_like(&self) -> Self;
    fn zero_like(&self) -> Self {
        self.sub_ref(self)
    }
    /// Exact division; `None` iff `other` is zero.
    fn div_exact(&self, other: &Self) -> Option<Self>;
    /// Multiplication by a small integer (for derivatives).
    fn mul_i64(&self, n: i64) -> Self;
    /// A unit with no ambient context; only the rationals provide one.
    fn generic_one() -> Self;
    fn coeff_string(&self) -> String;
}

impl Coefficient for Rational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(other) {
            None
        } else {
            Some(self / other)
        }
    }
    fn mul_i64(&self, n: i64) -> Self {
        self * Rational::from_integer(BigInt::from(n))
    }
    fn generic_one() -> Self {
        Rational::one()
    }
    fn coeff_string(&self) -> String {
        rat_to_string(self)
    }
}

impl Coefficient for FqElement {
    fn is_zero(&self) -> bool {
        FqElement::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.add(*other)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.sub(*other)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(*other)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn one_like(&self) -> Self {
        FqElement::one(self.q)
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            None
        } else {
            Some(self.div(*other))
        }
    }
    fn mul_i64(&self, n: i64) -> Self {
        self.mul(FqElement::reduce(n, self.q))
    }
    fn generic_one() -> Self {
        panic!("a finite-field unit requires a modulus; no generic one exists")
    }
    fn coeff_string(&self) -> String {
        self.residue.to_string()
    }
}

impl Coefficient for CyclotomicElement {
    fn is_zero(&self) -> bool {
        CyclotomicElement::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn one_like(&self) -> Self {
        CyclotomicElement::one(self.order)
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }
    fn mul_i64(&self, n: i64) -> Self {
        self.scale(&Rational::from_integer(BigInt::from(n)))
    }
    fn generic_one() -> Self {
        panic!("a cyclotomic unit requires an order; no generic one exists")
    }
    fn coeff_string(&self) -> String {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !Zero::is_zero(*c))
            .map(|(i, c)| match i {
                0 => rat_to_string(c),
                1 => format!("{}*zeta", rat_to_string(c)),
                _ => format!("{}*zeta^{}", rat_to_string(c), i),
            })
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            format!("({})", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_serialization_round_trip() {
        let r = ratio(-6, 4);
        assert_eq!(rat_to_string(&r), "-3/2");
        assert_eq!(rat_parse("-3/2").unwrap(), r);
        assert_eq!(rat_to_string(&rat(7)), "7");
        assert_eq!(rat_parse("7").unwrap(), rat(7));
        assert!(rat_parse("x").is_err());
    }

    #[test]
    fn rational_sqrt_exact() {
        assert_eq!(rational_sqrt(&ratio(9, 4)), Some(ratio(3, 2)));
        assert_eq!(rational_sqrt(&rat(2)), None);
        assert_eq!(rational_sqrt(&rat(-4)), None);
        assert_eq!(rational_sqrt(&rat(0)), Some(rat(0)));
    }

    #[test]
    fn modulus_validation() {
        assert!(FqElement::new(1, 2).is_err());
        assert!(FqElement::new(1, 9).is_err());
        assert!(FqElement::new(1, 10).is_err());
        assert!(FqElement::new(1, 101).is_ok());
    }

    #[test]
    fn count_sqrt_table_mod_7() {
        // Squares mod 7 are {0, 1, 2, 4}.
        assert_eq!(count_sqrt(FqElement::of(0, 7)), 1);
        assert_eq!(count_sqrt(FqElement::of(4, 7)), 2);
        assert_eq!(count_sqrt(FqElement::of(3, 7)), 0);
    }

    #[test]
    fn count_sqrt_matches_brute_force() {
        for q in [3u64, 5, 7, 11, 13, 17, 101] {
            for a in 0..q {
                let brute = (0..q).filter(|u| (u * u) % q == a).count() as u8;
                assert_eq!(count_sqrt(FqElement::of(a as i64, q)), brute, "a={a} q={q}");
            }
        }
    }

    #[test]
    fn fq_sqrt_canonical_and_consistent() {
        assert_eq!(fq_sqrt(FqElement::of(4, 7)).unwrap().residue(), 2);
        assert_eq!(fq_sqrt(FqElement::of(0, 13)).unwrap().residue(), 0);
        assert!(fq_sqrt(FqElement::of(5, 7)).is_none());
        // q ≡ 1 (mod 4) exercises the full Tonelli–Shanks loop.
        for q in [5u64, 13, 17, 29, 97, 101] {
            for a in 0..q {
                let e = FqElement::of(a as i64, q);
                match fq_sqrt(e) {
                    Some(r) => {
                        assert_eq!(r.mul(r), e);
                        assert!(r.residue() <= q - r.residue() || r.residue() == 0);
                        assert!(count_sqrt(e) >= 1);
                    }
                    None => assert_eq!(count_sqrt(e), 0),
                }
            }
        }
    }

    #[test]
    fn legendre_vs_count() {
        for q in [3u64, 5, 7, 11, 13] {
            for a in 1..q {
                let e = FqElement::of(a as i64, q);
                assert_eq!(count_sqrt(e) as i32, 1 + e.legendre());
            }
        }
    }

    #[test]
    fn field_arithmetic_basics() {
        let q = 11;
        let a = FqElement::of(7, q);
        let b = FqElement::of(5, q);
        assert_eq!(a.add(b).residue(), 1);
        assert_eq!(a.sub(b).residue(), 2);
        assert_eq!(a.mul(b).residue(), 2);
        assert_eq!(a.mul(a.inv()).residue(), 1);
        assert_eq!(a.pow(10).residue(), 1); // Fermat
        assert_eq!(FqElement::of(-3, q).residue(), 8);
    }

    #[test]
    fn cyclotomic_relation_order_3() {
        // ζ₃² + ζ₃ + 1 = 0
        let z = CyclotomicElement::zeta(3);
        let rel = z.pow(2).add(&z).add(&CyclotomicElement::one(3));
        assert!(rel.is_zero());
    }

    #[test]
    fn cyclotomic_cube_identity() {
        // (1 + ζ₃)³ = −1 since 1 + ζ₃ = −ζ₃².
        let z = CyclotomicElement::zeta(3);
        let v = CyclotomicElement::one(3).add(&z).pow(3);
        assert_eq!(v.to_rational(), Some(rat(-1)));
    }

    #[test]
    fn cyclotomic_order_one_degenerates() {
        // φ(1) = 1 and ζ_1 = 1: arithmetic is plain rational arithmetic.
        let z = CyclotomicElement::zeta(1);
        assert_eq!(z.to_rational(), Some(rat(1)));
        let v = z
            .scale(&ratio(3, 2))
            .add(&CyclotomicElement::from_rational(1, ratio(1, 2)));
        assert_eq!(v.to_rational(), Some(rat(2)));
    }

    #[test]
    fn cyclotomic_primitive_order() {
        // ζ_N has exact multiplicative order N for the N used by the product
        // constructions (2..6).
        for n in 2..=6u32 {
            let z = CyclotomicElement::zeta(n);
            assert_eq!(z.pow(n as u64).to_rational(), Some(rat(1)), "N={n}");
            for k in 1..n {
                assert_ne!(z.pow(k as u64).to_rational(), Some(rat(1)), "N={n} k={k}");
            }
        }
    }

    #[test]
    fn cyclotomic_polynomials_small() {
        let as_i64 = |v: Vec<BigInt>| -> Vec<i64> {
            v.into_iter().map(|c| i64::try_from(c).unwrap()).collect()
        };
        assert_eq!(as_i64(cyclotomic_polynomial(3)), vec![1, 1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(4)), vec![1, 0, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(5)), vec![1, 1, 1, 1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(6)), vec![1, -1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(12)), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn cyclotomic_inverse() {
        for n in [3u32, 4, 5, 6] {
            let a = CyclotomicElement::zeta(n)
                .scale(&ratio(2, 3))
                .add(&CyclotomicElement::one(n));
            let inv = a.inv().unwrap();
            assert_eq!(a.mul(&inv), CyclotomicElement::one(n));
        }
        assert!(CyclotomicElement::zero(5).inv().is_none());
    }

    #[test]
    fn pow_sum_symmetric_lands_in_q() {
        // Σ_k ζ₃^k = 0, and Σ_k (1 + ζ₃^k)³ = 2³ + (−1) + (−1) = 6.
        let s = cyclotomic_pow_sum(3, |k| CyclotomicElement::zeta(3).pow(k as u64)).unwrap();
        assert_eq!(s, rat(0));
        let s = cyclotomic_pow_sum(3, |k| {
            CyclotomicElement::one(3)
                .add(&CyclotomicElement::zeta(3).pow(k as u64))
                .pow(3)
        })
        .unwrap();
        assert_eq!(s, rat(6));
        assert!(cyclotomic_pow_sum(0, |_| CyclotomicElement::one(1)).is_err());
        // A non-symmetric sum that stays irrational is rejected.
        assert!(cyclotomic_pow_sum(3, |_| CyclotomicElement::zeta(3)).is_err());
    }
}
