//! Constructors for the named polynomial families.
//!
//! The central objects are symmetric polynomials F(x,y,z) of degree 2 in
//! each variable that define two-valued multiplications: the product x ⋆ y
//! is the unordered root pair of F(x,y,·). Two families cover the theory:
//!
//! * the three-parameter family
//!   `B_{a₁,a₂,a₃} = (x+y+z − a₂xyz)² − 4(1 + a₃xyz)(xy+yz+zx + a₁xyz)`,
//! * the discriminant family of a cubic f(t) = t³ + at² + bt + c,
//!   `D_{a,b,c} = disc_t(f(t) − (t−x)(t−y)(t−z)) = (σ₂−b)² − 4(σ₃+c)(σ₁+a)`.
//!
//! Wherever two independent construction routes exist, both are computed and
//! compared exactly, so the constructors cross-validate each other. Symbolic
//! parameters are ordinary polynomial variables, so identities proved here
//! hold over ℚ[a₁,a₂,a₃] (i.e. for every specialization).

use crate::exactnum::{rat, CyclotomicElement, FqElement, Rational};
use crate::mpoly::{
    discriminant, substitute, vid, MultiPoly, QPoly, RationalSubst, VarId,
};
use anyhow::{bail, ensure, Context, Result};
use num_traits::One;

/// Parameters (a₁, a₂, a₃) of the `B` family; rational constants or the
/// symbolic registry variables `a1,a2,a3`.
#[derive(Clone, Debug)]
pub struct BuchstaberParams {
    pub a1: QPoly,
    pub a2: QPoly,
    pub a3: QPoly,
}

impl BuchstaberParams {
    pub fn symbolic() -> Self {
        BuchstaberParams {
            a1: QPoly::qvar("a1"),
            a2: QPoly::qvar("a2"),
            a3: QPoly::qvar("a3"),
        }
    }

    pub fn rational(a1: Rational, a2: Rational, a3: Rational) -> Self {
        BuchstaberParams {
            a1: QPoly::constant(a1),
            a2: QPoly::constant(a2),
            a3: QPoly::constant(a3),
        }
    }
}

/// Parameters (a, b, c) of the cubic t³ + at² + bt + c generating the `D`
/// family; rational constants or the symbolic registry variables `a,b,c`.
#[derive(Clone, Debug)]
pub struct KontsevichParams {
    pub a: QPoly,
    pub b: QPoly,
    pub c: QPoly,
}

impl KontsevichParams {
    pub fn symbolic() -> Self {
        KontsevichParams {
            a: QPoly::qvar("a"),
            b: QPoly::qvar("b"),
            c: QPoly::qvar("c"),
        }
    }

    pub fn rational(a: Rational, b: Rational, c: Rational) -> Self {
        KontsevichParams {
            a: QPoly::constant(a),
            b: QPoly::constant(b),
            c: QPoly::constant(c),
        }
    }

    /// The Weierstrass specialization (0, −g₂/4, −g₃/4) of w² = 4t³ − g₂t − g₃,
    /// with g₂, g₃ symbolic.
    pub fn weierstrass_symbolic() -> Self {
        let quarter = QPoly::constant(crate::exactnum::ratio(-1, 4));
        KontsevichParams {
            a: QPoly::zero(),
            b: QPoly::qvar("g2").mul(&quarter),
            c: QPoly::qvar("g3").mul(&quarter),
        }
    }

    /// The cubic f(t) = t³ + at² + bt + c as a polynomial in `t`.
    pub fn cubic(&self) -> QPoly {
        let t = QPoly::qvar("t");
        t.pow(3)
            .add(&self.a.mul(&t.pow(2)))
            .add(&self.b.mul(&t))
            .add(&self.c)
    }

    /// The cubic discriminant Δ_f = 18abc − 4a³c + a²b² − 4b³ − 27c².
    pub fn cubic_discriminant(&self) -> QPoly {
        let (a, b, c) = (&self.a, &self.b, &self.c);
        a.mul(b)
            .mul(c)
            .scale(&rat(18))
            .sub(&a.pow(3).mul(c).scale(&rat(4)))
            .add(&a.pow(2).mul(&b.pow(2)))
            .sub(&b.pow(3).scale(&rat(4)))
            .sub(&c.pow(2).scale(&rat(27)))
    }
}

fn sigma_polys() -> (QPoly, QPoly, QPoly) {
    crate::mpoly::elementary_symmetric()
}

/// Asserts 𝔖₃-symmetry in x, y, z under all 6 permutations.
fn assert_s3_symmetric(p: &QPoly, what: &str) {
    let perms: [[&str; 3]; 5] = [
        ["x", "z", "y"],
        ["y", "x", "z"],
        ["y", "z", "x"],
        ["z", "x", "y"],
        ["z", "y", "x"],
    ];
    for perm in perms {
        let s = RationalSubst::new()
            .set_poly(vid("x"), QPoly::qvar(perm[0]))
            .set_poly(vid("y"), QPoly::qvar(perm[1]))
            .set_poly(vid("z"), QPoly::qvar(perm[2]));
        let (n, _) = substitute(p, &s).expect("permutation substitution");
        assert_eq!(&n, p, "{what} is not S3-symmetric under {perm:?}");
    }
}

/// The family `B_{a₁,a₂,a₃}`, expanded in x, y, z (parameters appear as
/// extra variables when symbolic). Symmetric of degree 2 in each variable.
pub fn buchstaber(p: &BuchstaberParams) -> QPoly {
    let (e1, e2, e3) = sigma_polys();
    let one = QPoly::qint(1);
    let first = e1.sub(&p.a2.mul(&e3));
    let second = one
        .add(&p.a3.mul(&e3))
        .mul(&e2.add(&p.a1.mul(&e3)))
        .scale(&rat(4));
    let out = first.pow(2).sub(&second);
    assert_s3_symmetric(&out, "buchstaber family");
    out
}

/// The family `D_{a,b,c}`, built by BOTH routes — as
/// disc_t(f(t) − (t−x)(t−y)(t−z)) and from the explicit σ-expansion — which
/// must agree exactly.
pub fn kontsevich(p: &KontsevichParams) -> QPoly {
    let (e1, e2, e3) = sigma_polys();
    // Route 1: discriminant of the degree-2 Lagrange difference
    // f(t) − (t−x)(t−y)(t−z) = (a+σ₁)t² + (b−σ₂)t + (c+σ₃).
    let t = QPoly::qvar("t");
    let diff = p
        .a
        .add(&e1)
        .mul(&t.pow(2))
        .add(&p.b.sub(&e2).mul(&t))
        .add(&p.c.add(&e3));
    let route1 = discriminant(&diff, vid("t")).expect("quadratic discriminant");
    // Route 2: explicit (σ₂ − b)² − 4(σ₃ + c)(σ₁ + a).
    let route2 = e2
        .sub(&p.b)
        .pow(2)
        .sub(&e3.add(&p.c).mul(&e1.add(&p.a)).scale(&rat(4)));
    assert_eq!(
        route1, route2,
        "build fault: discriminant route disagrees with the explicit expansion"
    );
    assert_s3_symmetric(&route2, "kontsevich family");
    route2
}

/// The classical one-parameter polynomial
/// `P_t(x,y,z) = (xy+yz+zx − t)² − 4xyz(1 + t + (x+y+z))` over ℚ;
/// `t_param` may be the symbolic variable `t` or any rational constant.
pub fn kontsevich_classical(t_param: &QPoly) -> QPoly {
    let (e1, e2, e3) = sigma_polys();
    let out = e2.sub(t_param).pow(2).sub(
        &e3.mul(&QPoly::qint(1).add(t_param).add(&e1))
            .scale(&rat(4)),
    );
    assert_s3_symmetric(&out, "classical family");
    out
}

/// `P_t` over a prime field 𝔽_q, for the operator realization.
pub fn kontsevich_classical_fq(t: FqElement) -> MultiPoly<FqElement> {
    let q = t.modulus();
    let one = FqElement::one(q);
    let v = |name: &str| MultiPoly::variable(vid(name), one);
    let (x, y, z) = (v("x"), v("y"), v("z"));
    let e1 = x.add(&y).add(&z);
    let e2 = x.mul(&y).add(&y.mul(&z)).add(&z.mul(&x));
    let e3 = x.mul(&y).mul(&z);
    let tc = MultiPoly::constant(t);
    let onec = MultiPoly::constant(one);
    e2.sub(&tc)
        .pow(2)
        .sub(&e3.mul(&onec.add(&tc).add(&e1)).scale(&FqElement::of(4, q)))
}

/// Coefficients (A, B, C) of the multiplication law `A·z² + B·z + C` for the
/// `D` family, as polynomials in x, y (and parameters).
#[derive(Clone, Debug)]
pub struct LawTriple {
    /// Coefficient of z²: (x−y)².
    pub a: QPoly,
    /// Coefficient of z: −2[(b+xy)(x+y) + 2(c+axy)].
    pub b: QPoly,
    /// Constant term: (xy−b)² − 4c(x+y+a).
    pub c: QPoly,
}

impl LawTriple {
    /// Reassembles A·z² + B·z + C.
    pub fn quadratic_in_z(&self) -> QPoly {
        let z = QPoly::qvar("z");
        self.a
            .mul(&z.pow(2))
            .add(&self.b.mul(&z))
            .add(&self.c)
    }
}

/// The law triple of the `D` family. Asserts the reconciliation
/// `A·z² + B·z + C = kontsevich(p)` exactly.
pub fn law_triple(p: &KontsevichParams) -> LawTriple {
    let x = QPoly::qvar("x");
    let y = QPoly::qvar("y");
    let xy = x.mul(&y);
    let xpy = x.add(&y);
    let a_coef = x.sub(&y).pow(2);
    let b_coef = p
        .b
        .add(&xy)
        .mul(&xpy)
        .add(&p.c.add(&p.a.mul(&xy)).scale(&rat(2)))
        .scale(&rat(-2));
    let c_coef = xy
        .sub(&p.b)
        .pow(2)
        .sub(&p.c.mul(&xpy.add(&p.a)).scale(&rat(4)));
    let triple = LawTriple {
        a: a_coef,
        b: b_coef,
        c: c_coef,
    };
    assert_eq!(
        triple.quadratic_in_z(),
        kontsevich(p),
        "reconciliation failure: law triple does not reassemble the family polynomial"
    );
    triple
}

/// The N-valued power-construction polynomial `p_N(z; x, y)`:
/// the expansion of `∏_{k=0}^{N−1} (z − (x^{1/N} + ζ_N^k y^{1/N})^N)`,
/// computed exactly in ℚ(ζ_N) with auxiliary variables u = x^{1/N},
/// v = y^{1/N}. Every exponent of u and v in the product is a multiple of N
/// and every coefficient is rational (both asserted); the result is a
/// polynomial in z, x, y with integer coefficients.
pub fn p_n(n: u32) -> Result<QPoly> {
    ensure!((2..=6).contains(&n), "p_N is implemented for 2 ≤ N ≤ 6 (got {n})");
    type CPoly = MultiPoly<CyclotomicElement>;
    let one = CyclotomicElement::one(n);
    let s = CPoly::variable(vid("u"), one.clone());
    let r = CPoly::variable(vid("v"), one.clone());
    let zv = CPoly::variable(vid("z"), one.clone());
    let zeta = CyclotomicElement::zeta(n);
    let mut prod = CPoly::constant(one);
    for k in 0..n {
        let branch = s.add(&r.scale(&zeta.pow(k as u64))).pow(n);
        prod = prod.mul(&zv.sub(&branch));
    }
    // Map u^(N·i) v^(N·j) z^k → x^i y^j z^k with rational coefficients.
    let pos = |v: VarId| prod.vars().iter().position(|&w| w == v);
    let (pu, pv, pz) = (pos(vid("u")), pos(vid("v")), pos(vid("z")));
    let mut out = QPoly::zero();
    for (mono, coeff) in prod.terms_desc() {
        let get = |p: Option<usize>| p.map(|i| mono.0[i]).unwrap_or(0);
        let (eu, ev, ez) = (get(pu), get(pv), get(pz));
        ensure!(
            eu % n == 0 && ev % n == 0,
            "internal fault: exponent not a multiple of N in p_N expansion"
        );
        let c = coeff
            .to_rational()
            .context("internal fault: non-rational coefficient in p_N expansion")?;
        let term = QPoly::constant(c)
            .mul(&QPoly::qvar("x").pow(eu / n))
            .mul(&QPoly::qvar("y").pow(ev / n))
            .mul(&QPoly::qvar("z").pow(ez));
        out = out.add(&term);
    }
    // Integrality: the expansion has integer coefficients.
    for (_, c) in out.terms_desc() {
        ensure!(
            c.denom().is_one(),
            "internal fault: non-integer coefficient in p_N"
        );
    }
    Ok(out)
}

/// The two named toy laws.
#[derive(Clone, Debug)]
pub struct NamedToys {
    /// Multiplicative toy law z² − 2xyz + x² + y² − 1 (two-valued structure
    /// on cosets of the unit circle / hyperbola).
    pub multiplicative: QPoly,
    /// Its Mordell shift z² − 2(x+y+xy)z + (x−y)².
    pub mordell: QPoly,
}

/// Constructs the toy laws and asserts the shift identity: substituting
/// x→x+1, y→y+1, z→z+1 in the multiplicative law yields the Mordell law.
pub fn named_toys() -> NamedToys {
    let x = QPoly::qvar("x");
    let y = QPoly::qvar("y");
    let z = QPoly::qvar("z");
    let multiplicative = z
        .pow(2)
        .sub(&x.mul(&y).mul(&z).scale(&rat(2)))
        .add(&x.pow(2))
        .add(&y.pow(2))
        .sub(&QPoly::qint(1));
    let mordell = z
        .pow(2)
        .sub(&x.add(&y).add(&x.mul(&y)).mul(&z).scale(&rat(2)))
        .add(&x.sub(&y).pow(2));
    let shift = RationalSubst::new()
        .set_poly(vid("x"), x.add(&QPoly::qint(1)))
        .set_poly(vid("y"), y.add(&QPoly::qint(1)))
        .set_poly(vid("z"), z.add(&QPoly::qint(1)));
    let (shifted, _) = substitute(&multiplicative, &shift).expect("polynomial shift");
    assert_eq!(
        shifted, mordell,
        "shift identity between the toy laws failed"
    );
    NamedToys {
        multiplicative,
        mordell,
    }
}

/// Tri-homogenization: multiplies by (x₀y₀z₀)² and substitutes x→x₁/x₀,
/// y→y₁/y₀, z→z₁/z₀. Requires degree ≤ 2 in each of x, y, z; the result is
/// multi-homogeneous of degree 2 in each pair.
pub fn homogenize(f: &QPoly) -> Result<QPoly> {
    let pairs = [("x", "x1", "x0"), ("y", "y1", "y0"), ("z", "z1", "z0")];
    let mut s = RationalSubst::new();
    let mut extra = QPoly::qint(1);
    for (affine, num, den) in pairs {
        let d = f.degree_in(vid(affine));
        ensure!(
            d <= 2,
            "homogenize requires degree ≤ 2 in {affine} (got {d})"
        );
        s = s.set(vid(affine), QPoly::qvar(num), QPoly::qvar(den))?;
        // Pad so every pair reaches homogeneity degree exactly 2.
        extra = extra.mul(&QPoly::qvar(den).pow(2 - d));
    }
    let (n, _) = substitute(f, &s)?;
    Ok(n.mul(&extra))
}

/// Sets x₀ = y₀ = z₀ = 1 and renames x₁,y₁,z₁ → x,y,z; the left inverse of
/// [`homogenize`].
pub fn dehomogenize(f: &QPoly) -> QPoly {
    let one = Rational::one();
    let fixed = f.assign(&[
        (vid("x0"), one.clone()),
        (vid("y0"), one.clone()),
        (vid("z0"), one.clone()),
    ]);
    let s = RationalSubst::new()
        .set_poly(vid("x1"), QPoly::qvar("x"))
        .set_poly(vid("y1"), QPoly::qvar("y"))
        .set_poly(vid("z1"), QPoly::qvar("z"));
    let (n, _) = substitute(&fixed, &s).expect("renaming substitution");
    n
}

/// Swaps the homogeneous pairs x₁↔x₀, y₁↔y₀, z₁↔z₀ as selected; on the
/// affine chart this realizes x → 1/x (etc.) up to a monomial factor.
pub fn chart_swap(f: &QPoly, swap: [bool; 3]) -> QPoly {
    let pairs = [("x1", "x0"), ("y1", "y0"), ("z1", "z0")];
    let mut s = RationalSubst::new();
    for (i, (hi, lo)) in pairs.iter().enumerate() {
        if swap[i] {
            s = s
                .set_poly(vid(hi), QPoly::qvar(lo))
                .set_poly(vid(lo), QPoly::qvar(hi));
        }
    }
    let (n, _) = substitute(f, &s).expect("chart swap substitution");
    n
}

/// Family selector shared by the CLI and the Python bindings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Buchstaber,
    Kontsevich,
    Classical,
    PowerN(u32),
    ToyMultiplicative,
    ToyMordell,
}

impl FamilyKind {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "buchstaber" => FamilyKind::Buchstaber,
            "kontsevich" => FamilyKind::Kontsevich,
            "classical" => FamilyKind::Classical,
            "toy-multiplicative" => FamilyKind::ToyMultiplicative,
            "toy-mordell" => FamilyKind::ToyMordell,
            other => {
                if let Some(n) = other.strip_prefix("p") {
                    if let Ok(n) = n.parse::<u32>() {
                        return Ok(FamilyKind::PowerN(n));
                    }
                }
                bail!(
                    "unknown family {other:?}; expected buchstaber, kontsevich, classical, \
                     pN (2 ≤ N ≤ 6), toy-multiplicative, or toy-mordell"
                )
            }
        })
    }
}

impl std::fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FamilyKind::Buchstaber => write!(f, "buchstaber"),
            FamilyKind::Kontsevich => write!(f, "kontsevich"),
            FamilyKind::Classical => write!(f, "classical"),
            FamilyKind::PowerN(n) => write!(f, "p{n}"),
            FamilyKind::ToyMultiplicative => write!(f, "toy-multiplicative"),
            FamilyKind::ToyMordell => write!(f, "toy-mordell"),
        }
    }
}
