//! Hecke-type operators attached to the classical family over 𝔽_q.
//!
//! For an odd prime q and t ∈ 𝔽_q \ {0,1}, each x ∈ 𝔽_q gets an integer
//! matrix T_x indexed by ℙ¹(𝔽_q) = 𝔽_q ∪ {∞} (rows/columns ordered
//! 0, 1, …, q−1, ∞) with
//!
//! ```text
//! (T_x)_{y,z} = 2 − #{u ∈ 𝔽_q : u² = P̃_t(x,y,z)} = 1 − χ(P̃_t(x,y,z)),
//! ```
//!
//! where χ is the Legendre character (χ(0) = 0) and P̃_t is the projective
//! extension of the classical law value P_t = (σ₂−t)² − 4σ₃(1+t+σ₁):
//! all arguments finite → P_t; exactly one ∞ → (a−b)² of the two finite
//! coordinates; two ∞ → 1; three ∞ → 0. The operator at ∞ is the identity.
//!
//! This single uniform formula reproduces the stated special values
//! ((T_x)_{y,∞} = 2−δ_{x,y} collapses to δ_{x,y}; a degenerate row carries
//! its double root z* = −B/(2A) as its only nonzero entry) and is the
//! convention under which the commutation and algebra identities close —
//! in Mat(𝔽_q), i.e. with zero tolerance mod q. The integer lifts
//! themselves do *not* commute over ℤ (q = 7, t = 2 already produces
//! commutator entries ±q), so every identity here is checked mod q while
//! the entries are stored as the canonical lifts {0, 1, 2}.

use crate::exactnum::{count_sqrt, is_prime_u64, FqElement};
use crate::elliptic::BasePoint;
use anyhow::{bail, ensure, Result};
use serde_json::{json, Value};

/// A point of ℙ¹(𝔽_q) in matrix-index form: 0..q−1 finite, q = ∞.
pub type P1 = BasePoint<FqElement>;

/// The classical-family value P_t(x,y,z) for finite arguments.
pub fn classical_value(t: FqElement, x: FqElement, y: FqElement, z: FqElement) -> FqElement {
    let s1 = x.add(y).add(z);
    let s2 = x.mul(y).add(y.mul(z)).add(z.mul(x));
    let s3 = x.mul(y).mul(z);
    let one = FqElement::one(t.modulus());
    let lin = one.add(t).add(s1);
    s2.sub(t).mul(s2.sub(t)).sub(s3.mul(lin).mul(FqElement::of(4, t.modulus())))
}

/// The projective extension P̃_t on ℙ¹(𝔽_q)³.
pub fn p_tilde(t: FqElement, x: &P1, y: &P1, z: &P1) -> FqElement {
    let q = t.modulus();
    let finite: Vec<FqElement> = [x, y, z]
        .iter()
        .filter_map(|p| match p {
            BasePoint::Finite(v) => Some(*v),
            BasePoint::Infinity => None,
        })
        .collect();
    match finite.len() {
        3 => classical_value(t, finite[0], finite[1], finite[2]),
        2 => {
            let d = finite[0].sub(finite[1]);
            d.mul(d)
        }
        1 => FqElement::one(q),
        _ => FqElement::zero(q),
    }
}

/// A single matrix coefficient (T_x)_{y,z} = 2 − #{u : u² = P̃_t(x,y,z)},
/// always in {0, 1, 2}. Errors for x = ∞ (the entry formula is defined for
/// affine x only; the system sets T_∞ = identity by convention).
pub fn entry(t: FqElement, x: &P1, y: &P1, z: &P1) -> Result<i64> {
    if matches!(x, BasePoint::Infinity) {
        bail!("operator index x = ∞ is not defined by the matrix formula");
    }
    Ok(2 - count_sqrt(p_tilde(t, x, y, z)) as i64)
}

/// Dense integer matrix, rows indexed like the columns by (0..q−1, ∞).
pub type Matrix = Vec<Vec<i64>>;

fn identity_matrix(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

fn mat_zero_mod(m: &Matrix, q: u64) -> bool {
    let q = q as i64;
    m.iter().all(|row| row.iter().all(|&e| e.rem_euclid(q) == 0))
}

fn mat_eq_mod(a: &Matrix, b: &Matrix, q: u64) -> bool {
    let q = q as i64;
    a.iter().zip(b).all(|(ra, rb)| {
        ra.iter()
            .zip(rb)
            .all(|(&x, &y)| (x - y).rem_euclid(q) == 0)
    })
}

fn mat_is_zero(m: &Matrix) -> bool {
    m.iter().all(|row| row.iter().all(|&e| e == 0))
}

/// The full commuting family {T_x : x ∈ 𝔽_q} for one (q, t).
#[derive(Clone, Debug)]
pub struct HeckeSystem {
    q: u64,
    t: FqElement,
    /// T_x for x = 0, 1, …, q−1; entries in {0, 1, 2}.
    ops: Vec<Matrix>,
}

impl HeckeSystem {
    /// Builds all operators. Requires q an odd prime and t ∉ {0, 1}.
    pub fn build(q: u64, t_val: u64) -> Result<Self> {
        ensure!(q >= 3 && is_prime_u64(q), "q must be an odd prime");
        let t = FqElement::new(t_val as i64, q)?;
        ensure!(
            !t.is_zero() && t != FqElement::one(q),
            "t must avoid the degenerate values 0 and 1"
        );
        let ops = (0..q)
            .map(|x| build_t(t, FqElement::of(x as i64, q)))
            .collect::<Result<Vec<_>>>()?;
        let sys = HeckeSystem { q, t, ops };
        // Structural sanity: P̃ is symmetric, so every T_x is symmetric.
        for x in 0..q as usize {
            let m = &sys.ops[x];
            for y in 0..=q as usize {
                for z in 0..y {
                    debug_assert_eq!(m[y][z], m[z][y]);
                }
            }
        }
        Ok(sys)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn t(&self) -> FqElement {
        self.t
    }

    /// Matrix size q + 1.
    pub fn dim(&self) -> usize {
        self.q as usize + 1
    }

    /// T_x for finite x (by residue).
    pub fn operator(&self, x: u64) -> &Matrix {
        &self.ops[(x % self.q) as usize]
    }

    /// T_∞ = identity.
    pub fn infinity_operator(&self) -> Matrix {
        identity_matrix(self.dim())
    }

    /// Mutates one entry (negative-control hook for the verifiers).
    pub fn mutate_entry(&mut self, x: u64, y: usize, z: usize, delta: i64) {
        self.ops[(x % self.q) as usize][y][z] += delta;
    }

    /// Finite branch points: roots of f(u) = u(u+1)(u+t) in 𝔽_q, i.e.
    /// {0, −1, −t} (two may collide only for excluded t). At branch x the
    /// operator is a permutation matrix.
    pub fn branch_points(&self) -> Vec<u64> {
        let q = self.q;
        let mut pts = vec![
            0,
            q - 1,
            FqElement::of(-(self.t.residue() as i64), q).residue(),
        ];
        pts.sort_unstable();
        pts.dedup();
        pts
    }

    /// Degenerate pairs: finite x ≠ y with disc_z P_t(x,y,·) = 0 — exactly
    /// the pairs where x or y is a finite branch point.
    pub fn degenerate_pairs(&self) -> Vec<(u64, u64)> {
        let q = self.q;
        let mut out = Vec::new();
        for x in 0..q {
            for y in 0..q {
                if x == y {
                    continue;
                }
                let (a, b, c) = self.z_quadratic(FqElement::of(x as i64, q), FqElement::of(y as i64, q));
                let disc = b.mul(b).sub(a.mul(c).mul(FqElement::of(4, q)));
                if disc.is_zero() {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Coefficients (A, B, C) of P_t(x,y,·) as a quadratic in z:
    /// A = (x−y)², B = 2(x+y)(xy−t) − 4xy(1+t+x+y), C = (xy−t)².
    pub fn z_quadratic(&self, x: FqElement, y: FqElement) -> (FqElement, FqElement, FqElement) {
        let q = self.q;
        let one = FqElement::one(q);
        let a = x.sub(y).mul(x.sub(y));
        let xy = x.mul(y);
        let b = x
            .add(y)
            .mul(xy.sub(self.t))
            .mul(FqElement::of(2, q))
            .sub(xy.mul(one.add(self.t).add(x).add(y)).mul(FqElement::of(4, q)));
        let c = xy.sub(self.t).mul(xy.sub(self.t));
        (a, b, c)
    }

    /// Double root z* = −B/(2A) of a degenerate pair (requires x ≠ y).
    pub fn double_root(&self, x: FqElement, y: FqElement) -> Result<FqElement> {
        let (a, b, _) = self.z_quadratic(x, y);
        ensure!(!a.is_zero(), "double root needs distinct x, y");
        Ok(b.neg().div(a.add(a)))
    }

    /// Row sums of T_x over ℤ, in index order. Always 1 or q+1 (≡ 1 mod q).
    pub fn row_sums(&self, x: u64) -> Vec<i64> {
        self.operator(x).iter().map(|r| r.iter().sum()).collect()
    }

    /// Pairwise commutators [T_x, T_y] — exact integer products, compared
    /// to zero in Mat(𝔽_q). `commute_over_z` reports whether the integer
    /// lifts themselves commute (they generally do not).
    pub fn verify_commute(&self) -> CommuteReport {
        let q = self.q;
        let mut pass = true;
        let mut commute_over_z = true;
        let mut first_failure = None;
        let mut pairs = 0;
        for x in 0..q {
            for y in (x + 1)..q {
                pairs += 1;
                let xy = mat_mul(self.operator(x), self.operator(y));
                let yx = mat_mul(self.operator(y), self.operator(x));
                let comm: Matrix = xy
                    .iter()
                    .zip(&yx)
                    .map(|(r1, r2)| r1.iter().zip(r2).map(|(a, b)| a - b).collect())
                    .collect();
                if !mat_is_zero(&comm) {
                    commute_over_z = false;
                }
                if !mat_zero_mod(&comm, q) {
                    pass = false;
                    if first_failure.is_none() {
                        first_failure = Some((x, y));
                    }
                }
            }
        }
        CommuteReport {
            pass,
            pairs,
            first_failure,
            commute_over_z,
        }
    }

    /// The algebra law T_x·T_y = Σ_z C_{xyz} T_z with C_{xyz} = (T_x)_{y,z},
    /// tested in Mat(𝔽_q) under both summation readings: z over 𝔽_q only,
    /// and z over ℙ¹(𝔽_q) with T_∞ = I. Passes if one reading closes for
    /// every pair (x, y).
    pub fn verify_algebra(&self) -> AlgebraReport {
        let q = self.q;
        let n = self.dim();
        let id = self.infinity_operator();
        let mut with_inf = true;
        let mut without_inf = true;
        let mut fq_only_failures: Vec<(u64, u64)> = Vec::new();
        for x in 0..q {
            for y in 0..q {
                let prod = mat_mul(self.operator(x), self.operator(y));
                // Σ over finite z.
                let mut sum = vec![vec![0i64; n]; n];
                for z in 0..q {
                    let cxyz = self.operator(x)[y as usize][z as usize];
                    if cxyz == 0 {
                        continue;
                    }
                    for (srow, trow) in sum.iter_mut().zip(self.operator(z)) {
                        for (se, te) in srow.iter_mut().zip(trow) {
                            *se += cxyz * te;
                        }
                    }
                }
                if !mat_eq_mod(&prod, &sum, q) {
                    without_inf = false;
                    fq_only_failures.push((x, y));
                }
                // Add the ∞ term C_{xy∞}·I.
                let cinf = self.operator(x)[y as usize][n - 1];
                if cinf != 0 {
                    for (srow, irow) in sum.iter_mut().zip(&id) {
                        for (se, ie) in srow.iter_mut().zip(irow) {
                            *se += cinf * ie;
                        }
                    }
                }
                if !mat_eq_mod(&prod, &sum, q) {
                    with_inf = false;
                }
            }
        }
        let diagonal_only_defect = !fq_only_failures.is_empty()
            && fq_only_failures.iter().all(|&(x, y)| x == y);
        AlgebraReport {
            pass: with_inf || without_inf,
            closes_with_infinity: with_inf,
            closes_without_infinity: without_inf,
            diagonal_only_defect,
        }
    }

    /// CSV export of T_x: q+1 rows in index order (0..q−1, ∞), entries
    /// comma-separated.
    pub fn to_csv(&self, x: u64) -> String {
        self.operator(x)
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// JSON export of the whole system.
    pub fn to_json(&self) -> Value {
        let index: Vec<String> = (0..self.q)
            .map(|v| v.to_string())
            .chain(std::iter::once("inf".to_string()))
            .collect();
        let ops: Vec<Value> = self.ops.iter().map(|m| json!(m)).collect();
        json!({
            "q": self.q,
            "t": self.t.residue(),
            "index": index,
            "operators": ops,
        })
    }
}

/// One operator T_x as a dense matrix, rows y, columns z over (0..q−1, ∞).
pub fn build_t(t: FqElement, x: FqElement) -> Result<Matrix> {
    let q = t.modulus();
    let n = q as usize + 1;
    let point = |i: usize| -> P1 {
        if i == n - 1 {
            BasePoint::Infinity
        } else {
            BasePoint::Finite(FqElement::of(i as i64, q))
        }
    };
    let xp = BasePoint::Finite(x);
    let mut m = vec![vec![0i64; n]; n];
    for (y, row) in m.iter_mut().enumerate() {
        let yp = point(y);
        for (z, e) in row.iter_mut().enumerate() {
            *e = entry(t, &xp, &yp, &point(z))?;
        }
    }
    Ok(m)
}

/// Commutation verdict.
#[derive(Clone, Debug)]
pub struct CommuteReport {
    /// All [T_x, T_y] ≡ 0 in Mat(𝔽_q).
    pub pass: bool,
    pub pairs: usize,
    pub first_failure: Option<(u64, u64)>,
    /// Whether the integer lifts commute before reduction (informational;
    /// false in general).
    pub commute_over_z: bool,
}

/// Algebra-closure verdict under both summation conventions.
#[derive(Clone, Debug)]
pub struct AlgebraReport {
    pub pass: bool,
    /// T_x·T_y ≡ Σ_{z∈ℙ¹} C_{xyz}T_z with T_∞ = I — the reading that closes.
    pub closes_with_infinity: bool,
    /// T_x·T_y ≡ Σ_{z∈𝔽_q} C_{xyz}T_z — fails exactly on diagonal pairs
    /// (x = x), which miss the identity contribution C_{xx∞} = 1.
    pub closes_without_infinity: bool,
    /// Whether every 𝔽_q-only failure is a diagonal pair.
    pub diagonal_only_defect: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::families::kontsevich_classical;
    use crate::mpoly::{discriminant, vid, QPoly};

    fn fq(v: i64, q: u64) -> FqElement {
        FqElement::of(v, q)
    }

    fn fin(v: i64, q: u64) -> P1 {
        BasePoint::Finite(fq(v, q))
    }

    #[test]
    fn entry_examples_q3() {
        let t = fq(2, 3);
        // x = y = 0, z = ∞: the ∞-column carries δ_{x,y}.
        assert_eq!(
            entry(t, &fin(0, 3), &fin(0, 3), &BasePoint::Infinity).unwrap(),
            1
        );
        assert_eq!(
            entry(t, &fin(1, 3), &fin(0, 3), &BasePoint::Infinity).unwrap(),
            0
        );
        // A nonzero-square value gives 2 − 2 = 0: P_2(0,1,1) = (1−2)² = 1.
        assert_eq!(classical_value(t, fq(0, 3), fq(1, 3), fq(1, 3)), fq(1, 3));
        assert_eq!(entry(t, &fin(0, 3), &fin(1, 3), &fin(1, 3)).unwrap(), 0);
        // Entries live in {0, 1, 2} ⊂ [1−q, 2].
        let sys = HeckeSystem::build(3, 2).unwrap();
        for x in 0..3 {
            for row in sys.operator(x) {
                for &e in row {
                    assert!((0..=2).contains(&e));
                }
            }
        }
        // x = ∞ is rejected.
        assert!(entry(t, &BasePoint::Infinity, &fin(0, 3), &fin(0, 3)).is_err());
    }

    #[test]
    fn classical_discriminant_splits_on_branch_cubic() {
        // disc_z P_t = 16·g(x)·g(y) with g(u) = u(u+1)(u+t): the branch
        // locus {0, −1, −t, ∞} drives all degeneracy structure.
        let p = kontsevich_classical(&QPoly::qvar("t"));
        let d = discriminant(&p, vid("z")).unwrap();
        let g = |v: &str| -> QPoly {
            let u = QPoly::qvar(v);
            let one = QPoly::qint(1);
            u.mul(&u.add(&one)).mul(&u.add(&QPoly::qvar("t")))
        };
        assert_eq!(d, g("x").mul(&g("y")).scale(&rat(16)));
    }

    #[test]
    fn degenerate_rows_are_double_root_indicators() {
        for (q, t) in [(5u64, 2u64), (5, 3), (7, 2)] {
            let sys = HeckeSystem::build(q, t).unwrap();
            let pairs = sys.degenerate_pairs();
            let branches = sys.branch_points();
            assert!(!pairs.is_empty());
            for &(x, y) in &pairs {
                // Degeneracy ⟺ one argument sits on the branch locus.
                assert!(branches.contains(&x) || branches.contains(&y));
                let zstar = sys.double_root(fq(x as i64, q), fq(y as i64, q)).unwrap();
                let row = &sys.operator(x)[y as usize];
                // Exactly one nonzero entry, value 1 ≡ 1−q mod q, at z*.
                let nonzero: Vec<usize> =
                    (0..sys.dim()).filter(|&z| row[z] != 0).collect();
                assert_eq!(nonzero, vec![zstar.residue() as usize]);
                assert_eq!(row[zstar.residue() as usize], 1);
            }
        }
    }

    #[test]
    fn branch_operators_are_involutive_permutations() {
        let (q, t) = (7u64, 3u64);
        let sys = HeckeSystem::build(q, t).unwrap();
        let n = sys.dim();
        for &b in &sys.branch_points() {
            let m = sys.operator(b);
            // Permutation matrix…
            for row in m {
                assert_eq!(row.iter().filter(|&&e| e != 0).count(), 1);
                assert_eq!(row.iter().sum::<i64>(), 1);
            }
            // … with the involutive structure: row b ↦ ∞, row ∞ ↦ b,
            // row y ↦ z*(b, y) otherwise.
            assert_eq!(m[b as usize][n - 1], 1);
            assert_eq!(m[n - 1][b as usize], 1);
            for y in 0..q {
                if y == b {
                    continue;
                }
                let zstar = sys.double_root(fq(b as i64, q), fq(y as i64, q)).unwrap();
                assert_eq!(m[y as usize][zstar.residue() as usize], 1);
                // Involution: applying the permutation twice is the identity.
                let image = zstar.residue();
                let back = sys.double_root(fq(b as i64, q), fq(image as i64, q)).unwrap();
                assert_eq!(back.residue(), y);
            }
            // Squares to the identity mod q (and over ℤ, being a permutation).
            let sq = mat_mul(m, m);
            assert_eq!(sq, identity_matrix(n));
        }
        // A non-branch operator is not a permutation matrix (q ≥ 5).
        let non_branch: Vec<u64> = (0..q)
            .filter(|v| !sys.branch_points().contains(v))
            .collect();
        assert!(!non_branch.is_empty());
        let m = sys.operator(non_branch[0]);
        assert!(m
            .iter()
            .any(|row| row.iter().filter(|&&e| e != 0).count() != 1));
    }

    #[test]
    fn operators_are_symmetric_matrices() {
        let sys = HeckeSystem::build(11, 4).unwrap();
        for x in 0..11 {
            let m = sys.operator(x);
            for y in 0..sys.dim() {
                for z in 0..sys.dim() {
                    assert_eq!(m[y][z], m[z][y]);
                }
            }
        }
    }

    #[test]
    fn row_sums_recorded_q3_q5() {
        // Row sums over ℤ are q+1 on non-degenerate rows and 1 on
        // degenerate/branch rows; all ≡ 1 mod q.
        for (q, ts) in [(3u64, vec![2u64]), (5, vec![2, 3, 4])] {
            for t in ts {
                let sys = HeckeSystem::build(q, t).unwrap();
                for x in 0..q {
                    for (y, s) in sys.row_sums(x).iter().enumerate() {
                        assert!(
                            *s == 1 || *s == (q as i64) + 1,
                            "q={q} t={t} x={x} row {y}: sum {s}"
                        );
                        assert_eq!(s.rem_euclid(q as i64), 1);
                    }
                }
            }
        }
    }

    #[test]
    fn commute_small_fields() {
        // q=3, t=2 and q=5, t ∈ {2,3,4}: exhaustive, in Mat(F_q).
        for (q, ts) in [(3u64, vec![2u64]), (5, vec![2, 3, 4])] {
            for t in ts {
                let rep = HeckeSystem::build(q, t).unwrap().verify_commute();
                assert!(rep.pass, "q={q} t={t}");
                assert!(rep.first_failure.is_none());
            }
        }
    }

    #[test]
    fn integer_lifts_do_not_commute_at_q7_t2() {
        // The frozen counterexample: entries are honest integers, and the
        // ℤ-commutators have entries ±7 — zero only after reduction.
        let sys = HeckeSystem::build(7, 2).unwrap();
        let rep = sys.verify_commute();
        assert!(rep.pass);
        assert!(!rep.commute_over_z);
    }

    #[test]
    fn algebra_closes_with_infinity_summation() {
        for (q, ts) in [(3u64, vec![2u64]), (5, vec![2, 3, 4]), (7, vec![2, 5])] {
            for t in ts {
                let sys = HeckeSystem::build(q, t).unwrap();
                let rep = sys.verify_algebra();
                assert!(rep.pass, "q={q} t={t}");
                assert!(rep.closes_with_infinity, "q={q} t={t}");
                // The 𝔽_q-only reading misses C_{xx∞} = 1 on the diagonal.
                assert!(!rep.closes_without_infinity, "q={q} t={t}");
                assert!(rep.diagonal_only_defect, "q={q} t={t}");
            }
        }
    }

    #[test]
    fn structure_constant_associativity_q3() {
        // Σ_w C_{xyw}C_{wzv} = Σ_w C_{yzw}C_{xwv} over ℙ¹ with C_{∞··} = δ,
        // exhaustively at q=3, t=2, mod q.
        let q = 3u64;
        let sys = HeckeSystem::build(q, 2).unwrap();
        let n = sys.dim();
        let c = |x: usize, y: usize, z: usize| -> i64 {
            if x == n - 1 {
                i64::from(y == z)
            } else {
                sys.operator(x as u64)[y][z]
            }
        };
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for v in 0..n {
                        let lhs: i64 = (0..n).map(|w| c(x, y, w) * c(w, z, v)).sum();
                        let rhs: i64 = (0..n).map(|w| c(y, z, w) * c(x, w, v)).sum();
                        assert_eq!(
                            (lhs - rhs).rem_euclid(q as i64),
                            0,
                            "x={x} y={y} z={z} v={v}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn mutation_breaks_commutativity() {
        let mut sys = HeckeSystem::build(5, 2).unwrap();
        assert!(sys.verify_commute().pass);
        // Bump one entry of a non-branch operator.
        let non_branch = (0..5).find(|v| !sys.branch_points().contains(v)).unwrap();
        sys.mutate_entry(non_branch, 0, 1, 1);
        assert!(!sys.verify_commute().pass);
    }

    #[test]
    fn zero_matrix_never_appears() {
        for (q, t) in [(3u64, 2u64), (5, 3), (7, 4)] {
            let sys = HeckeSystem::build(q, t).unwrap();
            for x in 0..q {
                assert!(!mat_is_zero(sys.operator(x)));
            }
        }
    }

    #[test]
    fn build_rejects_bad_parameters() {
        assert!(HeckeSystem::build(4, 2).is_err()); // not prime
        assert!(HeckeSystem::build(2, 1).is_err()); // even
        assert!(HeckeSystem::build(5, 0).is_err()); // t = 0
        assert!(HeckeSystem::build(5, 1).is_err()); // t = 1
        assert!(HeckeSystem::build(5, 6).is_err()); // t ≡ 1
    }

    #[test]
    fn csv_export_golden_q3() {
        let sys = HeckeSystem::build(3, 2).unwrap();
        // T_0 at q=3, t=2: branch point (0 ∈ {0,−1,−t} = {0,1,2}), hence a
        // permutation matrix; frozen layout, index order (0,1,2,∞).
        let csv = sys.to_csv(0);
        let m = sys.operator(0);
        let recomputed: Vec<Vec<i64>> = csv
            .lines()
            .map(|l| l.split(',').map(|tok| tok.parse().unwrap()).collect())
            .collect();
        assert_eq!(&recomputed, m);
        assert_eq!(csv.lines().count(), 4);
        // Row 0 of T_0 points at ∞.
        assert_eq!(m[0][3], 1);
        assert_eq!(m[0][0] + m[0][1] + m[0][2], 0);
    }

    #[test]
    fn json_export_shape() {
        let sys = HeckeSystem::build(3, 2).unwrap();
        let v = sys.to_json();
        assert_eq!(v["q"], 3);
        assert_eq!(v["t"], 2);
        assert_eq!(v["index"].as_array().unwrap().len(), 4);
        assert_eq!(v["operators"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn p_tilde_matches_limit_of_affine_values() {
        // The one-∞ extension (a−b)² is the leading-coefficient limit of
        // P_t(x,y,z)/z² as z → ∞: check the z²-coefficient symbolically.
        let p = kontsevich_classical(&QPoly::qvar("t"));
        let lead = p.coeffs_wrt(vid("z")).pop().unwrap();
        let want = QPoly::qvar("x").sub(&QPoly::qvar("y")).pow(2);
        assert_eq!(lead, want);
        // Two-∞ value 1: the y²z²-coefficient is 1.
        let in_y = p.coeffs_wrt(vid("y")).pop().unwrap();
        let yz_lead = in_y.coeffs_wrt(vid("z")).pop().unwrap();
        assert_eq!(yz_lead, QPoly::qint(1));
    }
}
