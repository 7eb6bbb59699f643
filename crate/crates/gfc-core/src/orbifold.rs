//! Orbifold signatures of quotients of a generalized Fermat curve and the
//! genus bookkeeping identities that tie them together.
//!
//! A curve of type (k, n) has genus g = 1 + k^{n-1}((n-1)k - n - 1)/2. For
//! a subgroup K of Z_k^n, the quotient S/K is an orbifold whose signature
//! (genus; cone orders) is computed here exactly from the intersection of K
//! with the cyclic subgroups fixing the branch fibers.
//!
//! The helper psi(q, r) counts, for each subset size r, the exponent
//! patterns contributing a factor, and satisfies a binomial-weighted sum
//! recovering the total genus. The closed form and the exhaustive count are
//! implemented independently so each can check the other.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::group::{Character, GroupType, Subgroup};

/// Ceiling on (q-1)^(r-1) for the exhaustive psi count.
pub const MAX_PSI_ENUMERATION: u64 = 100_000_000;

/// An orbifold signature: underlying genus plus the multiset of cone point
/// orders, stored sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    genus: u64,
    cone_orders: Vec<u64>,
}

impl Signature {
    /// Build a signature; cone orders are sorted, each must be >= 2.
    pub fn new(genus: u64, mut cone_orders: Vec<u64>) -> Result<Signature> {
        if cone_orders.iter().any(|&o| o < 2) {
            return Err(Error::Input("cone orders must be >= 2".into()));
        }
        cone_orders.sort_unstable();
        Ok(Signature { genus, cone_orders })
    }

    /// Underlying genus.
    pub fn genus(&self) -> u64 {
        self.genus
    }

    /// Sorted cone point orders.
    pub fn cone_orders(&self) -> &[u64] {
        &self.cone_orders
    }

    /// Number of cone points.
    pub fn cone_count(&self) -> usize {
        self.cone_orders.len()
    }
}

impl fmt::Display for Signature {
    /// Renders as `(g; -)` or `(g; o^c, ...)` with equal orders grouped,
    /// e.g. `(4; 3^9)` or `(1; 2^2, 3^3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; ", self.genus)?;
        if self.cone_orders.is_empty() {
            write!(f, "-")?;
        } else {
            let mut parts: Vec<String> = Vec::new();
            let mut i = 0;
            while i < self.cone_orders.len() {
                let o = self.cone_orders[i];
                let mut c = 1usize;
                while i + c < self.cone_orders.len() && self.cone_orders[i + c] == o {
                    c += 1;
                }
                if c == 1 {
                    parts.push(format!("{o}"));
                } else {
                    parts.push(format!("{o}^{c}"));
                }
                i += c;
            }
            write!(f, "{}", parts.join(", "))?;
        }
        write!(f, ")")
    }
}

fn big(v: u64) -> BigInt {
    BigInt::from(v)
}

/// 2g - 2 numerator helper: phi(p, n) = p^{n-1}((n-1)p - n - 1).
///
/// May be negative for (2, 2), the only guarded type of genus zero.
pub fn phi(p: u64, n: usize) -> Result<BigInt> {
    if p < 2 || n < 2 {
        return Err(Error::Input(format!(
            "phi requires p >= 2 and n >= 2, got ({p}, {n})"
        )));
    }
    let p_big = big(p);
    let pow = p_big.pow((n as u32) - 1);
    let factor = BigInt::from(n as i64 - 1) * &p_big - BigInt::from(n as i64 + 1);
    Ok(pow * factor)
}

/// Genus of the generalized Fermat curve of type (p, n): 1 + phi(p, n)/2.
pub fn total_genus(p: u64, n: usize) -> Result<u64> {
    let ph = phi(p, n)?;
    if (&ph % 2u8) != BigInt::zero() {
        return Err(Error::Internal(format!("phi({p},{n}) is odd")));
    }
    let g = BigInt::one() + ph / BigInt::from(2);
    if g.is_negative() {
        return Err(Error::Internal(format!("negative genus for ({p},{n})")));
    }
    g.to_u64()
        .ok_or_else(|| Error::Resource(format!("genus of ({p},{n}) exceeds u64")))
}

/// Closed form psi(q, r) = (-1)^{r+1}((1-q)^{r-1} - 1)/q for q >= 2, r >= 2.
///
/// Counts exponent tuples (alpha_2, ..., alpha_r) in {1..q-1}^{r-1} with
/// 1 + sum(alpha) divisible by q; see [`psi_bruteforce`] for the direct
/// count this formula is checked against.
pub fn psi_closed(q: u64, r: u64) -> Result<BigInt> {
    if q < 2 || r < 2 {
        return Err(Error::Input(format!(
            "psi requires q >= 2 and r >= 2, got ({q}, {r})"
        )));
    }
    let one_minus_q = BigInt::one() - big(q);
    let pow = one_minus_q.pow((r as u32) - 1);
    let numer = pow - BigInt::one();
    let sign = if r.is_multiple_of(2) {
        BigInt::from(-1)
    } else {
        BigInt::one()
    };
    let val = sign * numer;
    if (&val % big(q)) != BigInt::zero() {
        return Err(Error::Internal(format!("psi({q},{r}) not integral")));
    }
    Ok(val / big(q))
}

/// Exhaustive count of tuples (alpha_1, ..., alpha_r) with alpha_1 = 1,
/// alpha_j in {1, ..., q-1}, and sum divisible by q.
///
/// Kept as a genuinely independent enumeration (no shortcut through the
/// closed form). Guarded by (q-1)^{r-1} <= 10^8.
pub fn psi_bruteforce(q: u64, r: u64) -> Result<BigInt> {
    if q < 2 || r < 2 {
        return Err(Error::Input(format!(
            "psi requires q >= 2 and r >= 2, got ({q}, {r})"
        )));
    }
    let mut space: u64 = 1;
    for _ in 0..(r - 1) {
        space = space
            .checked_mul(q - 1)
            .filter(|&s| s <= MAX_PSI_ENUMERATION)
            .ok_or_else(|| {
                Error::Resource(format!(
                    "psi enumeration space ({q}-1)^{} exceeds {MAX_PSI_ENUMERATION}",
                    r - 1
                ))
            })?;
    }
    // odometer over (alpha_2, ..., alpha_r) in {1..q-1}^{r-1}
    let digits = (r - 1) as usize;
    let mut alpha = vec![1u64; digits];
    let mut count: u64 = 0;
    loop {
        let sum: u64 = 1 + alpha.iter().sum::<u64>();
        if sum.is_multiple_of(q) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == digits {
                return Ok(BigInt::from(count));
            }
            alpha[i] += 1;
            if alpha[i] < q {
                break;
            }
            alpha[i] = 1;
            i += 1;
        }
    }
}

/// One term of the genus bookkeeping identity.
#[derive(Debug, Clone)]
pub struct GenusIdentityTerm {
    /// Subset size r.
    pub r: u64,
    /// psi(q, r).
    pub psi: BigInt,
    /// Number of contributing subsets times psi: C(n+1, r) * psi(q, r).
    pub count: BigInt,
    /// Total genus contributed at this r: count * (r-2)(q-1)/2.
    pub genus_total: BigRational,
}

/// Result of checking 1 + phi(q, n)/2 against the binomial-weighted psi sum.
#[derive(Debug, Clone)]
pub struct GenusIdentity {
    pub q: u64,
    pub n: usize,
    /// Left side: the curve genus 1 + phi/2.
    pub genus: BigInt,
    /// Right side: the sum over r of the term totals.
    pub sum: BigRational,
    pub terms: Vec<GenusIdentityTerm>,
    /// Whether the two sides agree.
    pub holds: bool,
}

/// Check the bookkeeping identity
/// `1 + phi(q,n)/2 = sum_{r} C(n+1, r) * ((r-2)(q-1)/2) * psi(q, r)`
/// where r runs from 4 (q = 2) or 3 (q >= 3) up to n+1.
pub fn genus_sum_identity(q: u64, n: usize) -> Result<GenusIdentity> {
    if q < 2 || n < 2 {
        return Err(Error::Input(format!(
            "identity requires q >= 2 and n >= 2, got ({q}, {n})"
        )));
    }
    let ph = phi(q, n)?;
    let genus = BigInt::one() + ph / BigInt::from(2);
    let r_min = if q == 2 { 4 } else { 3 };
    let mut terms = Vec::new();
    let mut sum = BigRational::zero();
    for r in r_min..=(n as u64 + 1) {
        let psi = psi_closed(q, r)?;
        let count = num_integer::binomial(big(n as u64 + 1), big(r)) * &psi;
        let genus_each = BigRational::new(
            BigInt::from((r as i64 - 2) * (q as i64 - 1)),
            BigInt::from(2),
        );
        let genus_total = BigRational::from(count.clone()) * genus_each;
        sum += &genus_total;
        terms.push(GenusIdentityTerm {
            r,
            psi,
            count,
            genus_total,
        });
    }
    let holds = sum == BigRational::from(genus.clone());
    Ok(GenusIdentity {
        q,
        n,
        genus,
        sum,
        terms,
        holds,
    })
}

/// Signature of the quotient orbifold S/K for a subgroup K of Z_k^n acting
/// on the generalized Fermat curve S of type (k, n).
///
/// Over the branch point b_j the cone points have order d_j = |K n <a_j>|
/// (none when d_j = 1) and count k^{n-1} d_j / |K|; the genus is solved
/// from the orbifold Euler characteristic
/// `2 - 2*gamma - sum(1 - 1/d) = [Z_k^n : K] * (2 - (n+1)(1 - 1/k))`.
/// Non-integral or negative genus is an internal consistency failure.
pub fn quotient_signature(subgroup: &Subgroup, gt: &GroupType) -> Result<Signature> {
    if subgroup.group_type() != gt {
        return Err(Error::Input(
            "subgroup does not belong to the given group".into(),
        ));
    }
    let k = gt.k();
    let n = gt.n();
    let order = subgroup.order();
    let k_pow_nm1 = gt.order() / k;

    let mut cone_orders: Vec<u64> = Vec::new();
    let mut cone_sum = BigRational::zero(); // sum of (1 - 1/d) over cone points
    for j in 1..=(n + 1) {
        let d = subgroup.intersect_cyclic_order(j)?;
        if d <= 1 {
            continue;
        }
        let numer = k_pow_nm1
            .checked_mul(d)
            .ok_or_else(|| Error::Resource("cone point count overflow".into()))?;
        if numer % order != 0 {
            return Err(Error::Internal(format!(
                "cone count over branch point {j} is not integral"
            )));
        }
        let count = numer / order;
        for _ in 0..count {
            cone_orders.push(d);
        }
        let frac = BigRational::new(big(d - 1), big(d)) * BigRational::from(big(count));
        cone_sum += frac;
    }

    // index * (2 - (n+1)(1 - 1/k))
    let index = gt.order() / order;
    let base = BigRational::from(big(2))
        - BigRational::from(big(n as u64 + 1)) * BigRational::new(big(k - 1), big(k));
    let rhs = BigRational::from(big(index)) * base;

    // 2 - 2*gamma - cone_sum = rhs  =>  gamma = (2 - cone_sum - rhs)/2
    let gamma2 = BigRational::from(big(2)) - cone_sum - rhs;
    let gamma = gamma2 / BigRational::from(big(2));
    if !gamma.is_integer() || gamma.is_negative() {
        return Err(Error::Internal(format!(
            "quotient genus {gamma} is not a nonnegative integer"
        )));
    }
    let genus = gamma
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::Resource("quotient genus exceeds u64".into()))?;
    Signature::new(genus, cone_orders)
}

/// Signature of S/ker(chi) computed by the hyperplane fast path: with
/// r = #{j : chi(a_j) != 0} among the n+1 distinguished generators, the
/// signature is ((r-2)(p-1)/2 ; p^{p(n+1-r)}).
///
/// Independent of [`quotient_signature`] applied to the kernel; the two are
/// cross-checked in tests.
pub fn hyperplane_signature(chi: &Character, gt: &GroupType) -> Result<Signature> {
    if gt.k() != chi.p() || gt.n() != chi.coefficients().len() {
        return Err(Error::Input(
            "character does not match the group type".into(),
        ));
    }
    let p = chi.p();
    let n = gt.n();
    let r = (1..=(n + 1))
        .filter(|&j| chi.value_on_generator(j).unwrap_or(0) != 0)
        .count() as u64;
    let numer = (r - 2) * (p - 1);
    if !numer.is_multiple_of(2) {
        return Err(Error::Internal(format!(
            "hyperplane genus (r-2)(p-1)/2 not integral for r={r}, p={p}"
        )));
    }
    let genus = numer / 2;
    let cone_count = p
        .checked_mul(n as u64 + 1 - r)
        .ok_or_else(|| Error::Resource("cone count overflow".into()))?;
    Signature::new(genus, vec![p; cone_count as usize])
}
