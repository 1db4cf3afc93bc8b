//! Elliptic curves and the coset realization of the two-valued laws.
//!
//! A curve E: w² = cubic(t) carries the involution ι(t,w) = (t,−w), and the
//! quotient map π: E → E/ι ≅ ℙ¹ is the t-coordinate. The two-valued product
//! of x, y ∈ ℙ¹ is the unordered pair {π(x̂+ŷ), π(x̂−ŷ)} for any lifts x̂, ŷ —
//! exactly the root pair of the D-family quadratic A·z² + B·z + C. This
//! module provides exact chord–tangent arithmetic over ℚ and 𝔽_q, lifting,
//! coset multiplication with the quadratic cross-check, the collinearity
//! determinant, the chord/Viète identities, and intersection counts of pairs
//! of cubic models.

use crate::exactnum::{count_sqrt, fq_sqrt, Coefficient, FqElement, Rational};
use crate::families::{law_triple, KontsevichParams};
use crate::mpoly::{reduce_mod_q, vid, MultiPoly};
use anyhow::{bail, ensure, Result};

/// Which cubic model the curve uses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CubicForm<K> {
    /// w² = t³ + a·t² + b·t + c.
    Monic { a: K, b: K, c: K },
    /// w² = 4t³ − g₂·t − g₃.
    Weierstrass { g2: K, g3: K },
}

/// An elliptic curve w² = cubic(t) over ℚ or 𝔽_q (the scalar type decides).
/// Degenerate cubics (zero discriminant) may be constructed — they are
/// flagged by [`EllipticCurve::is_nondegenerate`] and rejected by the group
/// operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipticCurve<K: Coefficient> {
    form: CubicForm<K>,
}

/// A point of E: affine (t, w) with w² = cubic(t) exactly, or the point at
/// infinity O (the neutral element).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurvePoint<K> {
    Infinity,
    Affine(K, K),
}

/// A point of the base ℙ¹ = E/ι; π(O) = ∞.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasePoint<K> {
    Finite(K),
    Infinity,
}

/// π: E → ℙ¹, forgetting w.
pub fn project<K: Coefficient>(p: &CurvePoint<K>) -> BasePoint<K> {
    match p {
        CurvePoint::Infinity => BasePoint::Infinity,
        CurvePoint::Affine(t, _) => BasePoint::Finite(t.clone()),
    }
}

impl<K: Coefficient> EllipticCurve<K> {
    pub fn monic(a: K, b: K, c: K) -> Self {
        EllipticCurve {
            form: CubicForm::Monic { a, b, c },
        }
    }

    pub fn weierstrass(g2: K, g3: K) -> Self {
        EllipticCurve {
            form: CubicForm::Weierstrass { g2, g3 },
        }
    }

    pub fn form(&self) -> &CubicForm<K> {
        &self.form
    }

    /// Cubic coefficients [c₀, c₁, c₂, c₃] with cubic(t) = Σ cᵢtⁱ.
    pub fn cubic_coeffs(&self) -> [K; 4] {
        match &self.form {
            CubicForm::Monic { a, b, c } => {
                let one = a.one_like();
                [c.clone(), b.clone(), a.clone(), one]
            }
            CubicForm::Weierstrass { g2, g3 } => {
                let zero = g2.zero_like();
                let four = g2.one_like().mul_i64(4);
                [g3.neg_ref(), g2.neg_ref(), zero, four]
            }
        }
    }

    pub fn cubic_value(&self, t: &K) -> K {
        let [c0, c1, c2, c3] = self.cubic_coeffs();
        // Horner: ((c₃t + c₂)t + c₁)t + c₀.
        c3.mul_ref(t)
            .add_ref(&c2)
            .mul_ref(t)
            .add_ref(&c1)
            .mul_ref(t)
            .add_ref(&c0)
    }

    /// Discriminant of the cubic: 18c₃c₂c₁c₀ − 4c₂³c₀ + c₂²c₁² − 4c₃c₁³
    /// − 27c₃²c₀². Nonzero iff the curve is a smooth genus-1 curve.
    pub fn discriminant(&self) -> K {
        let [c0, c1, c2, c3] = self.cubic_coeffs();
        let t1 = c3.mul_ref(&c2).mul_ref(&c1).mul_ref(&c0).mul_i64(18);
        let t2 = c2.mul_ref(&c2).mul_ref(&c2).mul_ref(&c0).mul_i64(4);
        let t3 = c2.mul_ref(&c2).mul_ref(&c1).mul_ref(&c1);
        let t4 = c3.mul_ref(&c1).mul_ref(&c1).mul_ref(&c1).mul_i64(4);
        let t5 = c3.mul_ref(&c3).mul_ref(&c0).mul_ref(&c0).mul_i64(27);
        t1.sub_ref(&t2).add_ref(&t3).sub_ref(&t4).sub_ref(&t5)
    }

    pub fn is_nondegenerate(&self) -> bool {
        !Coefficient::is_zero(&self.discriminant())
    }

    pub fn contains(&self, p: &CurvePoint<K>) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine(t, w) => w.mul_ref(w) == self.cubic_value(t),
        }
    }

    /// −P = (t, −w); −O = O.
    pub fn neg(&self, p: &CurvePoint<K>) -> CurvePoint<K> {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(t, w) => CurvePoint::Affine(t.clone(), w.neg_ref()),
        }
    }

    /// Chord–tangent addition. For w² = c₃t³ + c₂t² + c₁t + c₀ and the line
    /// w = λt + μ through P and Q, the third intersection satisfies
    /// t₁ + t₂ + t₃ = (λ² − c₂)/c₃, and P + Q = ι(third point).
    /// Errors on a degenerate curve or an off-curve argument.
    pub fn add(&self, p: &CurvePoint<K>, q: &CurvePoint<K>) -> Result<CurvePoint<K>> {
        ensure!(
            self.is_nondegenerate(),
            "chord-tangent arithmetic requires a nondegenerate cubic"
        );
        ensure!(self.contains(p) && self.contains(q), "point not on curve");
        let (t1, w1) = match p {
            CurvePoint::Infinity => return Ok(q.clone()),
            CurvePoint::Affine(t, w) => (t, w),
        };
        let (t2, w2) = match q {
            CurvePoint::Infinity => return Ok(p.clone()),
            CurvePoint::Affine(t, w) => (t, w),
        };
        let [_, c1, c2, c3] = self.cubic_coeffs();
        let lambda = if t1 == t2 {
            if Coefficient::is_zero(&w1.add_ref(w2)) {
                // Vertical chord (or 2-torsion tangent): P + (−P) = O.
                return Ok(CurvePoint::Infinity);
            }
            // Tangent slope (3c₃t² + 2c₂t + c₁) / (2w).
            let num = c3
                .mul_i64(3)
                .mul_ref(t1)
                .mul_ref(t1)
                .add_ref(&c2.mul_i64(2).mul_ref(t1))
                .add_ref(&c1);
            num.div_exact(&w1.mul_i64(2))
                .expect("nonzero 2w in a field of odd characteristic")
        } else {
            w2.sub_ref(w1)
                .div_exact(&t2.sub_ref(t1))
                .expect("distinct abscissae")
        };
        let t3 = lambda
            .mul_ref(&lambda)
            .sub_ref(&c2)
            .div_exact(&c3)
            .expect("nonzero leading cubic coefficient")
            .sub_ref(t1)
            .sub_ref(t2);
        let w3 = w1.add_ref(&lambda.mul_ref(&t3.sub_ref(t1))).neg_ref();
        Ok(CurvePoint::Affine(t3, w3))
    }

    /// n-fold sum by repeated addition (n ≥ 0).
    pub fn mul_scalar(&self, n: u64, p: &CurvePoint<K>) -> Result<CurvePoint<K>> {
        let mut acc = CurvePoint::Infinity;
        for _ in 0..n {
            acc = self.add(&acc, p)?;
        }
        Ok(acc)
    }
}

impl EllipticCurve<FqElement> {
    /// Reduction of a rational monic model t³ + at² + bt + c mod q.
    pub fn monic_from_rational(p: &KontsevichParams, q: u64) -> Result<Self> {
        let mut vals = Vec::new();
        for poly in [&p.a, &p.b, &p.c] {
            let c = match poly.as_constant() {
                Some(c) => c,
                None if poly.is_zero() => Rational::from_integer(0.into()),
                None => bail!("reduction mod q requires rational parameters"),
            };
            vals.push(FqElement::from_rational(&c, q)?);
        }
        Ok(Self::monic(vals[0], vals[1], vals[2]))
    }

    /// All points of E over 𝔽_q with t-coordinate `x`: none, one (w = 0), or
    /// a conjugate pair ordered by residue of w.
    pub fn lift(&self, x: FqElement) -> Vec<CurvePoint<FqElement>> {
        let v = self.cubic_value(&x);
        match count_sqrt(v) {
            0 => Vec::new(),
            1 => vec![CurvePoint::Affine(x, FqElement::zero(x.modulus()))],
            _ => {
                let r = fq_sqrt(v).expect("two square roots");
                vec![
                    CurvePoint::Affine(x, r),
                    CurvePoint::Affine(x, r.neg()),
                ]
            }
        }
    }

    /// The canonical lift of a base point: the point at infinity for ∞, else
    /// the lift with the smaller w-residue. `None` when x is not liftable.
    pub fn canonical_lift(&self, x: &BasePoint<FqElement>) -> Option<CurvePoint<FqElement>> {
        match x {
            BasePoint::Infinity => Some(CurvePoint::Infinity),
            BasePoint::Finite(t) => self.lift(*t).into_iter().next(),
        }
    }

    /// All points of E(𝔽_q), O first, then by (t, w) residue order.
    pub fn points(&self) -> Vec<CurvePoint<FqElement>> {
        let q = self.modulus();
        let mut pts = vec![CurvePoint::Infinity];
        for t in 0..q {
            pts.extend(self.lift(FqElement::of(t as i64, q)));
        }
        pts
    }

    fn modulus(&self) -> u64 {
        match &self.form {
            CubicForm::Monic { a, .. } => a.modulus(),
            CubicForm::Weierstrass { g2, .. } => g2.modulus(),
        }
    }

    /// Coset multiplication on ℙ¹ = E/ι: the unordered pair
    /// {π(x̂ + ŷ), π(x̂ − ŷ)} for canonical lifts, sorted (finite values by
    /// residue, then ∞). Independent of the lift choice. Errors when a base
    /// point has no lift or the curve is degenerate.
    pub fn coset_mul(
        &self,
        x: &BasePoint<FqElement>,
        y: &BasePoint<FqElement>,
    ) -> Result<[BasePoint<FqElement>; 2]> {
        let xp = match self.canonical_lift(x) {
            Some(p) => p,
            None => bail!("x has no lift to the curve"),
        };
        let yp = match self.canonical_lift(y) {
            Some(p) => p,
            None => bail!("y has no lift to the curve"),
        };
        let s1 = self.add(&xp, &yp)?;
        let s2 = self.add(&xp, &self.neg(&yp))?;
        Ok(sort_base_pair(project(&s1), project(&s2)))
    }
}

fn base_key(p: &BasePoint<FqElement>) -> u64 {
    match p {
        BasePoint::Finite(t) => t.residue(),
        BasePoint::Infinity => u64::MAX,
    }
}

/// Sorts an unordered ℙ¹ pair: finite points by residue, ∞ last.
pub fn sort_base_pair(
    a: BasePoint<FqElement>,
    b: BasePoint<FqElement>,
) -> [BasePoint<FqElement>; 2] {
    if base_key(&a) <= base_key(&b) {
        [a, b]
    } else {
        [b, a]
    }
}

/// Coset multiplication with caller-supplied lifts (the ℚ route, where
/// lifting is not algorithmic): returns (π(P+Q), π(P−Q)) in that order.
pub fn coset_mul_points<K: Coefficient>(
    e: &EllipticCurve<K>,
    p: &CurvePoint<K>,
    q: &CurvePoint<K>,
) -> Result<(BasePoint<K>, BasePoint<K>)> {
    let s1 = e.add(p, q)?;
    let s2 = e.add(p, &e.neg(q))?;
    Ok((project(&s1), project(&s2)))
}

/// Root multiset of A·z² + B·z + C in ℙ¹(𝔽_q).
///
/// * A ≠ 0: both roots if the discriminant is a square (`Some`, sorted), a
///   double root when it vanishes, `None` when the roots live in 𝔽_{q²}.
/// * A = 0, B ≠ 0: the affine root −C/B together with ∞.
/// * A = B = 0, C ≠ 0: ∞ twice.
/// * A = B = C = 0: error (degenerate quadratic).
pub fn projective_quadratic_roots(
    a: FqElement,
    b: FqElement,
    c: FqElement,
) -> Result<Option<[BasePoint<FqElement>; 2]>> {
    if !a.is_zero() {
        let disc = b.mul(b).sub(a.mul(c).mul(FqElement::of(4, a.modulus())));
        let two_a = a.add(a);
        return Ok(match count_sqrt(disc) {
            0 => None,
            1 => {
                let r = b.neg().div(two_a);
                Some([BasePoint::Finite(r), BasePoint::Finite(r)])
            }
            _ => {
                let s = fq_sqrt(disc).expect("square discriminant");
                let r1 = b.neg().add(s).div(two_a);
                let r2 = b.neg().sub(s).div(two_a);
                Some(sort_base_pair(BasePoint::Finite(r1), BasePoint::Finite(r2)))
            }
        });
    }
    if !b.is_zero() {
        let r = c.neg().div(b);
        return Ok(Some([BasePoint::Finite(r), BasePoint::Infinity]));
    }
    if !c.is_zero() {
        return Ok(Some([BasePoint::Infinity, BasePoint::Infinity]));
    }
    bail!("identically zero quadratic has no root multiset")
}

/// Outcome of the coset-versus-quadratic cross-check at one (x, y).
#[derive(Clone, Debug)]
pub struct CosetCrossCheck {
    pub coset: [BasePoint<FqElement>; 2],
    /// Root multiset of the law quadratic, when it splits over 𝔽_q.
    pub quadratic: Option<[BasePoint<FqElement>; 2]>,
    /// Multiset equality verdict; `None` when the quadratic does not split
    /// (the cross-check is then vacuous — the product lives upstairs).
    pub agree: Option<bool>,
}

/// Realization theorem at work: multiplies x, y ∈ 𝔽_q ⊂ ℙ¹ through the curve
/// w² = t³ + at² + bt + c and cross-checks against the root multiset of the
/// law triple A(x,y)·z² + B(x,y)·z + C(x,y) of D_{a,b,c}.
pub fn coset_vs_law(
    params: &KontsevichParams,
    q: u64,
    x: FqElement,
    y: FqElement,
) -> Result<CosetCrossCheck> {
    let e = EllipticCurve::monic_from_rational(params, q)?;
    ensure!(e.is_nondegenerate(), "degenerate curve");
    let coset = e.coset_mul(&BasePoint::Finite(x), &BasePoint::Finite(y))?;
    let triple = law_triple(params);
    let eval_at = |p: &MultiPoly<Rational>| -> Result<FqElement> {
        reduce_mod_q(p, q)?.eval(&[(vid("x"), x), (vid("y"), y)])
    };
    let (a, b, c) = (eval_at(&triple.a)?, eval_at(&triple.b)?, eval_at(&triple.c)?);
    let quadratic = projective_quadratic_roots(a, b, c)?;
    let agree = quadratic.as_ref().map(|roots| roots == &coset);
    Ok(CosetCrossCheck {
        coset,
        quadratic,
        agree,
    })
}

/// Burnside's collinearity determinant det [[1, tᵢ, wᵢ]]: zero iff the three
/// affine points are collinear. Errors on O.
pub fn burnside_det<K: Coefficient>(
    p1: &CurvePoint<K>,
    p2: &CurvePoint<K>,
    p3: &CurvePoint<K>,
) -> Result<K> {
    let row = |p: &CurvePoint<K>| -> Result<(K, K)> {
        match p {
            CurvePoint::Infinity => bail!("collinearity determinant needs affine points"),
            CurvePoint::Affine(t, w) => Ok((t.clone(), w.clone())),
        }
    };
    let (t1, w1) = row(p1)?;
    let (t2, w2) = row(p2)?;
    let (t3, w3) = row(p3)?;
    // Cofactor expansion along the all-ones column.
    let m1 = t2.mul_ref(&w3).sub_ref(&t3.mul_ref(&w2));
    let m2 = t1.mul_ref(&w3).sub_ref(&t3.mul_ref(&w1));
    let m3 = t1.mul_ref(&w2).sub_ref(&t2.mul_ref(&w1));
    Ok(m1.sub_ref(&m2).add_ref(&m3))
}

/// Report of the chord construction on w² = 4t³ − g₂t − g₃.
#[derive(Clone, Debug)]
pub struct ChordReport<K> {
    /// Chord w = λt + μ through P₁ and P₂.
    pub slope: K,
    pub intercept: K,
    /// The third chord point −(P₁+P₂).
    pub third: CurvePoint<K>,
    /// The chord cubic 4ξ³ − g₂ξ − g₃ − (λξ+μ)² vanishes at all three
    /// abscissae.
    pub roots_pass: bool,
    /// Viète's relations: σ₁ = λ²/4, σ₂ = −λμ/2 − g₂/4, σ₃ = μ²/4 + g₃/4.
    pub viete_pass: bool,
}

/// Chord/Viète verification: intersects the chord through two affine points
/// with distinct abscissae with the curve and checks both the root property
/// and the symmetric-function identities. Requires the Weierstrass form.
pub fn chord_cubic_check<K: Coefficient>(
    e: &EllipticCurve<K>,
    p1: &CurvePoint<K>,
    p2: &CurvePoint<K>,
) -> Result<ChordReport<K>> {
    let (g2, g3) = match e.form() {
        CubicForm::Weierstrass { g2, g3 } => (g2.clone(), g3.clone()),
        CubicForm::Monic { .. } => {
            bail!("chord/Viète identities are stated for the form w² = 4t³ − g₂t − g₃")
        }
    };
    ensure!(e.contains(p1) && e.contains(p2), "point not on curve");
    let (t1, w1, t2, w2) = match (p1, p2) {
        (CurvePoint::Affine(t1, w1), CurvePoint::Affine(t2, w2)) => (t1, w1, t2, w2),
        _ => bail!("chord construction needs affine points"),
    };
    ensure!(t1 != t2, "chord construction needs distinct abscissae");
    let lambda = w2
        .sub_ref(w1)
        .div_exact(&t2.sub_ref(t1))
        .expect("distinct abscissae");
    let mu = w1.sub_ref(&lambda.mul_ref(t1));
    let third = e.neg(&e.add(p1, p2)?);
    let t3 = match &third {
        CurvePoint::Affine(t, _) => t.clone(),
        CurvePoint::Infinity => bail!("chord through distinct abscissae cannot pass through O"),
    };
    // Chord cubic 4ξ³ − g₂ξ − g₃ − (λξ + μ)² vanishes at t₁, t₂, t₃.
    let chord_value = |t: &K| -> K {
        let line = lambda.mul_ref(t).add_ref(&mu);
        e.cubic_value(t).sub_ref(&line.mul_ref(&line))
    };
    let roots_pass = [t1, t2, &t3]
        .into_iter()
        .all(|t| Coefficient::is_zero(&chord_value(t)));
    // Viète for 4ξ³ − λ²ξ² − (g₂ + 2λμ)ξ − (g₃ + μ²):
    //   σ₁ = λ²/4, σ₂ = −(g₂ + 2λμ)/4, σ₃ = (g₃ + μ²)/4.
    let four = lambda.one_like().mul_i64(4);
    let div4 = |v: K| v.div_exact(&four).expect("division by 4");
    let s1 = t1.add_ref(t2).add_ref(&t3);
    let s2 = t1
        .mul_ref(t2)
        .add_ref(&t1.mul_ref(&t3))
        .add_ref(&t2.mul_ref(&t3));
    let s3 = t1.mul_ref(t2).mul_ref(&t3);
    let viete_pass = s1 == div4(lambda.mul_ref(&lambda))
        && s2 == div4(g2.add_ref(&lambda.mul_ref(&mu).mul_i64(2))).neg_ref()
        && s3 == div4(g3.add_ref(&mu.mul_ref(&mu)));
    Ok(ChordReport {
        slope: lambda,
        intercept: mu,
        third,
        roots_pass,
        viete_pass,
    })
}

/// Intersection data of w² = t³+at²+bt+c with w² = (t−x)(t−y)(t−z) over 𝔽_q.
#[derive(Clone, Debug)]
pub struct IntersectionReport {
    /// Number of distinct affine points (t, w) on both curves.
    pub count: usize,
    /// Number of distinct common abscissae.
    pub distinct_t: usize,
    /// Whether the difference quadratic has a double root — equivalent to
    /// D_{a,b,c}(x,y,z) = 0.
    pub double_root: bool,
}

/// Counts the affine intersection of the curve with the root-form cubic
/// w² = (t−x)(t−y)(t−z): the difference of the cubics is the quadratic
/// (a+σ₁)t² + (b−σ₂)t + (c+σ₃), whose roots carry all common points.
/// Identical cubics are reported as an error (infinite intersection).
pub fn intersection_count(
    e: &EllipticCurve<FqElement>,
    x: FqElement,
    y: FqElement,
    z: FqElement,
) -> Result<IntersectionReport> {
    let (a, b, c) = match e.form() {
        CubicForm::Monic { a, b, c } => (*a, *b, *c),
        CubicForm::Weierstrass { .. } => {
            bail!("intersection counting expects the monic model")
        }
    };
    let s1 = x.add(y).add(z);
    let s2 = x.mul(y).add(y.mul(z)).add(z.mul(x));
    let s3 = x.mul(y).mul(z);
    let (qa, qb, qc) = (a.add(s1), b.sub(s2), c.add(s3));
    if qa.is_zero() && qb.is_zero() && qc.is_zero() {
        bail!("the two cubic models are identical: intersection is the whole curve");
    }
    // Affine roots of qa·t² + qb·t + qc.
    let mut roots: Vec<FqElement> = Vec::new();
    let mut double_root = false;
    if !qa.is_zero() {
        let disc = qb.mul(qb).sub(qa.mul(qc).mul(FqElement::of(4, qa.modulus())));
        match count_sqrt(disc) {
            0 => {}
            1 => {
                roots.push(qb.neg().div(qa.add(qa)));
                double_root = true;
            }
            _ => {
                let s = fq_sqrt(disc).expect("square discriminant");
                roots.push(qb.neg().add(s).div(qa.add(qa)));
                roots.push(qb.neg().sub(s).div(qa.add(qa)));
            }
        }
    } else if !qb.is_zero() {
        roots.push(qc.neg().div(qb));
    }
    let count = roots
        .iter()
        .map(|t| count_sqrt(e.cubic_value(t)) as usize)
        .sum();
    Ok(IntersectionReport {
        count,
        distinct_t: roots.len(),
        double_root,
    })
}
