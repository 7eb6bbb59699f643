//! The abelian group Z_k^n acting on a generalized Fermat curve, together
//! with its distinguished generators, subgroups, and (for prime k)
//! characters and their kernels.
//!
//! The curve of type (k, n) carries the group H = Z_k^n with distinguished
//! generators a_1, ..., a_n (the standard basis) and
//! a_{n+1} = (a_1 * ... * a_n)^{-1}, each generator fixing the fiber over
//! one of the n+1 branch points. Everything here is plain modular linear
//! algebra; subgroups are stored as explicit sorted element sets so that
//! orders, intersections, and products are exact.

use std::fmt;

use crate::error::{Error, Result};

/// Default ceiling on k^n for explicit group enumeration.
pub const DEFAULT_MAX_GROUP_ORDER: u64 = 20_000_000;

/// Environment variable overriding [`DEFAULT_MAX_GROUP_ORDER`].
pub const MAX_GROUP_ORDER_ENV: &str = "GFC_MAX_GROUP_ORDER";

fn max_group_order() -> u64 {
    std::env::var(MAX_GROUP_ORDER_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<u64>().ok())
        .unwrap_or(DEFAULT_MAX_GROUP_ORDER)
}

/// Trial-division primality test; adequate for the guarded group sizes.
pub fn is_prime(k: u64) -> bool {
    if k < 2 {
        return false;
    }
    if k.is_multiple_of(2) {
        return k == 2;
    }
    let mut d = 3u64;
    while d * d <= k {
        if k.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The ambient group Z_k^n with its exponent k and rank n.
///
/// Construction enforces the enumeration guard k^n <= 2*10^7 (overridable
/// through the `GFC_MAX_GROUP_ORDER` environment variable), so that every
/// subgroup can be materialized explicitly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupType {
    k: u64,
    n: usize,
    order: u64,
}

impl GroupType {
    /// Create Z_k^n, validating k >= 2, n >= 1, and the order guard.
    pub fn new(k: u64, n: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::Input(format!("exponent k must be >= 2, got {k}")));
        }
        if n < 1 {
            return Err(Error::Input("rank n must be >= 1".into()));
        }
        let limit = max_group_order();
        let mut order: u64 = 1;
        for _ in 0..n {
            order = order
                .checked_mul(k)
                .filter(|&o| o <= limit)
                .ok_or_else(|| {
                    Error::Resource(format!(
                        "group order {k}^{n} exceeds the enumeration limit {limit} \
                     (set {MAX_GROUP_ORDER_ENV} to raise it)"
                    ))
                })?;
        }
        Ok(GroupType { k, n, order })
    }

    /// The exponent k of Z_k^n.
    pub fn k(&self) -> u64 {
        self.k
    }

    /// The rank n of Z_k^n.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The group order k^n.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// The identity element.
    pub fn identity(&self) -> GroupElement {
        GroupElement {
            exps: vec![0; self.n],
        }
    }

    /// The distinguished generator a_j for 1 <= j <= n+1.
    ///
    /// For j <= n this is the j-th standard basis vector; a_{n+1} is the
    /// inverse of the product of the others, i.e. every coordinate k-1.
    pub fn generator(&self, j: usize) -> Result<GroupElement> {
        if j == 0 || j > self.n + 1 {
            return Err(Error::Input(format!(
                "generator index must be in 1..={}, got {j}",
                self.n + 1
            )));
        }
        let mut exps = vec![0u64; self.n];
        if j <= self.n {
            exps[j - 1] = 1;
        } else {
            exps.iter_mut().for_each(|e| *e = self.k - 1);
        }
        Ok(GroupElement { exps })
    }

    /// Build an element from raw exponents, reducing each modulo k.
    pub fn element(&self, exps: &[i64]) -> Result<GroupElement> {
        if exps.len() != self.n {
            return Err(Error::Input(format!(
                "element needs {} exponents, got {}",
                self.n,
                exps.len()
            )));
        }
        let k = self.k as i64;
        Ok(GroupElement {
            exps: exps.iter().map(|&e| e.rem_euclid(k) as u64).collect(),
        })
    }

    /// Sum of two elements in Z_k^n.
    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement {
            exps: a
                .exps
                .iter()
                .zip(&b.exps)
                .map(|(&x, &y)| (x + y) % self.k)
                .collect(),
        }
    }

    /// Scalar multiple m*a in Z_k^n.
    pub fn mul(&self, a: &GroupElement, m: u64) -> GroupElement {
        let m = m % self.k;
        GroupElement {
            exps: a.exps.iter().map(|&x| (x * m) % self.k).collect(),
        }
    }

    /// Inverse of an element.
    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement {
            exps: a.exps.iter().map(|&x| (self.k - x) % self.k).collect(),
        }
    }

    /// Multiplicative order of an element.
    pub fn element_order(&self, a: &GroupElement) -> u64 {
        // lcm over coordinates of k / gcd(k, e)
        let mut ord = 1u64;
        for &e in &a.exps {
            let o = self.k / gcd(self.k, e);
            ord = ord / gcd(ord, o) * o;
        }
        ord
    }

    /// Pack an element into a single integer rank (mixed-radix, coordinate 0
    /// most significant) for compact storage and ordering.
    fn rank(&self, a: &GroupElement) -> u64 {
        a.exps.iter().fold(0u64, |acc, &e| acc * self.k + e)
    }

    fn unrank(&self, mut r: u64) -> GroupElement {
        let mut exps = vec![0u64; self.n];
        for i in (0..self.n).rev() {
            exps[i] = r % self.k;
            r /= self.k;
        }
        GroupElement { exps }
    }

    /// Parse a multiplicative word in the generators, e.g. `a1*a2^5` or
    /// `a3^-1`. Indices run from 1 to n+1; exponents may be negative.
    pub fn parse_word(&self, word: &str) -> Result<GroupElement> {
        let word = word.trim();
        if word.is_empty() || word == "1" {
            return Ok(self.identity());
        }
        let mut acc = self.identity();
        for token in word.split('*') {
            let token = token.trim();
            let rest = token
                .strip_prefix('a')
                .ok_or_else(|| Error::Input(format!("expected aJ or aJ^E, got `{token}`")))?;
            let (idx_str, exp_str) = match rest.split_once('^') {
                Some((i, e)) => (i, e),
                None => (rest, "1"),
            };
            let j: usize = idx_str
                .parse()
                .map_err(|_| Error::Input(format!("bad generator index in `{token}`")))?;
            let e: i64 = exp_str
                .parse()
                .map_err(|_| Error::Input(format!("bad exponent in `{token}`")))?;
            let gen = self.generator(j)?;
            let e = e.rem_euclid(self.k as i64) as u64;
            acc = self.add(&acc, &self.mul(&gen, e));
        }
        Ok(acc)
    }

    /// Iterate over all k^n elements in rank order.
    pub fn all_elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(|r| self.unrank(r))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// An element of Z_k^n, stored as its exponent vector on a_1, ..., a_n.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    exps: Vec<u64>,
}

impl GroupElement {
    /// Exponents on the standard generators a_1, ..., a_n.
    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }

    /// True when all exponents vanish.
    pub fn is_identity(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }
}

impl fmt::Display for GroupElement {
    /// Compact multiplicative word: generators with exponent zero are
    /// suppressed, exponent one prints bare, the identity prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "a{}", i + 1)?;
            } else {
                write!(f, "a{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

/// A subgroup of Z_k^n, stored with a generating set and the full sorted
/// element list.
#[derive(Debug, Clone)]
pub struct Subgroup {
    gt: GroupType,
    generators: Vec<GroupElement>,
    /// Sorted ranks of all elements; always contains the identity (rank 0).
    elements: Vec<u64>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.gt == other.gt && self.elements == other.elements
    }
}
impl Eq for Subgroup {}

impl Subgroup {
    /// Subgroup generated by the given elements (empty set gives the
    /// trivial subgroup).
    pub fn span(gt: &GroupType, generators: &[GroupElement]) -> Result<Subgroup> {
        for g in generators {
            if g.exps.len() != gt.n() {
                return Err(Error::Input(format!(
                    "generator has {} coordinates, group rank is {}",
                    g.exps.len(),
                    gt.n()
                )));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        seen.insert(gt.rank(&gt.identity()));
        let mut frontier = vec![gt.identity()];
        while let Some(cur) = frontier.pop() {
            for g in generators {
                let next = gt.add(&cur, g);
                if seen.insert(gt.rank(&next)) {
                    frontier.push(next);
                }
            }
        }
        Ok(Subgroup {
            gt: gt.clone(),
            generators: generators.to_vec(),
            elements: seen.into_iter().collect(),
        })
    }

    /// The trivial subgroup {1}.
    pub fn trivial(gt: &GroupType) -> Subgroup {
        Subgroup {
            gt: gt.clone(),
            generators: Vec::new(),
            elements: vec![0],
        }
    }

    /// The full group Z_k^n.
    pub fn full(gt: &GroupType) -> Result<Subgroup> {
        let generators = (1..=gt.n())
            .map(|j| gt.generator(j))
            .collect::<Result<Vec<_>>>()?;
        Ok(Subgroup {
            gt: gt.clone(),
            generators,
            elements: (0..gt.order()).collect(),
        })
    }

    /// Build a subgroup from an explicit element list (must be closed; this
    /// is checked) with a reduced generating set computed greedily.
    fn from_elements(gt: &GroupType, mut ranks: Vec<u64>) -> Result<Subgroup> {
        ranks.sort_unstable();
        ranks.dedup();
        let target = ranks.len() as u64;
        let mut gens: Vec<GroupElement> = Vec::new();
        let mut current = Subgroup::trivial(gt);
        for &r in &ranks {
            if current.order() == target {
                break;
            }
            if !current.contains_rank(r) {
                gens.push(gt.unrank(r));
                current = Subgroup::span(gt, &gens)?;
            }
        }
        if current.order() != target || current.elements != ranks {
            return Err(Error::Internal(
                "element set is not closed under the group operation".into(),
            ));
        }
        Ok(current)
    }

    /// The ambient group type.
    pub fn group_type(&self) -> &GroupType {
        &self.gt
    }

    /// Number of elements.
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    /// The stored generating set.
    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    /// Iterate over all elements in sorted order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.elements.iter().map(move |&r| self.gt.unrank(r))
    }

    fn contains_rank(&self, r: u64) -> bool {
        self.elements.binary_search(&r).is_ok()
    }

    /// Membership test.
    pub fn contains(&self, e: &GroupElement) -> bool {
        e.exps.len() == self.gt.n() && self.contains_rank(self.gt.rank(e))
    }

    /// Index [Z_k^n : K].
    pub fn index(&self) -> u64 {
        self.gt.order() / self.order()
    }

    /// The product subgroup K1*K2 (the subgroup generated by both).
    pub fn product(&self, other: &Subgroup) -> Result<Subgroup> {
        if self.gt != other.gt {
            return Err(Error::Input(
                "cannot form the product of subgroups of different groups".into(),
            ));
        }
        let mut gens = self.generators.clone();
        gens.extend_from_slice(&other.generators);
        Subgroup::span(&self.gt, &gens)
    }

    /// Order of the intersection K with the cyclic subgroup generated by
    /// the distinguished generator a_j (1 <= j <= n+1).
    pub fn intersect_cyclic_order(&self, j: usize) -> Result<u64> {
        let gen = self.gt.generator(j)?;
        let mut count = 0u64;
        let mut cur = self.gt.identity();
        for _ in 0..self.gt.k() {
            if self.contains(&cur) {
                count += 1;
            }
            cur = self.gt.add(&cur, &gen);
        }
        Ok(count)
    }

    /// True if the subgroup is cyclic (has an element whose order equals
    /// the subgroup order).
    pub fn is_cyclic(&self) -> bool {
        self.elements()
            .any(|e| self.gt.element_order(&e) == self.order())
    }

    /// Short textual form: the generating set as words.
    pub fn describe(&self) -> String {
        if self.generators.is_empty() {
            return "<1>".to_string();
        }
        let words: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        format!("<{}>", words.join(", "))
    }
}

/// A character Z_p^n -> Z_p for prime p, determined by its coefficient
/// vector on the standard generators a_1, ..., a_n.
///
/// The value on the dependent generator a_{n+1} is forced by the relation
/// a_1 * ... * a_{n+1} = 1, i.e. it is minus the coefficient sum mod p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    p: u64,
    coeffs: Vec<u64>,
}

impl Character {
    /// Build a character from coefficients mod p; rejects the zero vector
    /// and non-prime p.
    pub fn new(p: u64, coeffs: &[i64]) -> Result<Character> {
        if !is_prime(p) {
            return Err(Error::Unsupported(format!(
                "characters require a prime exponent, got {p}"
            )));
        }
        let coeffs: Vec<u64> = coeffs
            .iter()
            .map(|&c| c.rem_euclid(p as i64) as u64)
            .collect();
        if coeffs.iter().all(|&c| c == 0) {
            return Err(Error::Input("the zero character is not allowed".into()));
        }
        Ok(Character { p, coeffs })
    }

    /// The prime p.
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Coefficients on a_1, ..., a_n.
    pub fn coefficients(&self) -> &[u64] {
        &self.coeffs
    }

    /// Value on the distinguished generator a_j for 1 <= j <= n+1.
    pub fn value_on_generator(&self, j: usize) -> Result<u64> {
        let n = self.coeffs.len();
        if j == 0 || j > n + 1 {
            return Err(Error::Input(format!(
                "generator index must be in 1..={}, got {j}",
                n + 1
            )));
        }
        if j <= n {
            Ok(self.coeffs[j - 1])
        } else {
            let sum: u64 = self.coeffs.iter().sum();
            Ok((self.p - sum % self.p) % self.p)
        }
    }

    /// Value on an arbitrary element.
    pub fn value(&self, e: &GroupElement) -> Result<u64> {
        if e.exps.len() != self.coeffs.len() {
            return Err(Error::Input(
                "element rank does not match character rank".into(),
            ));
        }
        Ok(e.exps
            .iter()
            .zip(&self.coeffs)
            .map(|(&x, &c)| x * c % self.p)
            .sum::<u64>()
            % self.p)
    }

    /// Canonical representative of the line spanned by this character:
    /// scaled so the first nonzero coefficient is 1.
    pub fn canonical(&self) -> Character {
        let lead = self.coeffs.iter().copied().find(|&c| c != 0).unwrap_or(1);
        let inv = mod_inverse(lead, self.p);
        Character {
            p: self.p,
            coeffs: self.coeffs.iter().map(|&c| c * inv % self.p).collect(),
        }
    }

    /// The kernel subgroup {v : sum c_i v_i = 0 mod p}, of index p.
    pub fn kernel(&self, gt: &GroupType) -> Result<Subgroup> {
        if gt.k() != self.p || gt.n() != self.coeffs.len() {
            return Err(Error::Input(
                "character does not match the group type".into(),
            ));
        }
        let ranks: Vec<u64> = (0..gt.order())
            .filter(|&r| {
                let e = gt.unrank(r);
                // unwrap is safe: rank checked above
                self.value(&e).unwrap() == 0
            })
            .collect();
        Subgroup::from_elements(gt, ranks)
    }

    /// Stable textual label, e.g. `chi(1,0,2)`.
    pub fn label(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!("chi({})", parts.join(","))
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // extended Euclid; p prime and a nonzero mod p
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, (a % p) as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p as i64) as u64
}

/// All characters of Z_p^n up to scaling, i.e. one canonical representative
/// per index-p subgroup (hyperplane). There are (p^n - 1)/(p - 1) of them,
/// returned sorted by coefficient vector.
pub fn enumerate_hyperplanes(gt: &GroupType) -> Result<Vec<Character>> {
    let p = gt.k();
    if !is_prime(p) {
        return Err(Error::Unsupported(format!(
            "hyperplane enumeration requires a prime exponent, got {p}"
        )));
    }
    let n = gt.n();
    let mut out = Vec::new();
    // one representative per line: first nonzero coefficient equals 1
    for lead in 0..n {
        let free = n - lead - 1;
        let mut count: u64 = 1;
        for _ in 0..free {
            count = count
                .checked_mul(p)
                .ok_or_else(|| Error::Resource("hyperplane enumeration overflow".into()))?;
        }
        for idx in 0..count {
            let mut coeffs = vec![0u64; n];
            coeffs[lead] = 1;
            let mut rest = idx;
            for slot in (lead + 1..n).rev() {
                coeffs[slot] = rest % p;
                rest /= p;
            }
            out.push(Character { p, coeffs });
        }
    }
    out.sort_by(|a, b| a.coeffs.cmp(&b.coeffs));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gt(k: u64, n: usize) -> GroupType {
        GroupType::new(k, n).unwrap()
    }

    #[test]
    fn rejects_group_order_over_the_limit() {
        let err = GroupType::new(100, 4).unwrap_err();
        assert!(matches!(err, Error::Resource(_)));
    }

    #[test]
    fn dependent_generator_is_inverse_of_product() {
        let g = gt(6, 2);
        let a3 = g.generator(3).unwrap();
        assert_eq!(a3.exponents(), &[5, 5]);
        let prod = g.add(
            &g.add(&g.generator(1).unwrap(), &g.generator(2).unwrap()),
            &a3,
        );
        assert!(prod.is_identity());
    }

    #[test]
    fn empty_span_is_trivial() {
        let g = gt(5, 2);
        assert_eq!(Subgroup::span(&g, &[]).unwrap().order(), 1);
    }

    #[test]
    fn span_of_three_basis_vectors_has_order_eight() {
        let g = gt(2, 5);
        let gens = vec![
            g.generator(2).unwrap(),
            g.generator(3).unwrap(),
            g.generator(5).unwrap(),
        ];
        assert_eq!(Subgroup::span(&g, &gens).unwrap().order(), 8);
    }

    #[test]
    fn span_in_z6_squared_has_order_twelve() {
        let g = gt(6, 2);
        let gens = vec![
            g.parse_word("a1*a2^-1").unwrap(),
            g.parse_word("a1^3").unwrap(),
        ];
        let h = Subgroup::span(&g, &gens).unwrap();
        assert_eq!(h.order(), 12);
        assert!(!h.is_cyclic());
    }

    #[test]
    fn word_parsing_reduces_exponents() {
        let g = gt(6, 2);
        let e = g.parse_word("a1^7*a2^-1").unwrap();
        assert_eq!(e.exponents(), &[1, 5]);
        assert_eq!(e.to_string(), "a1*a2^5");
    }

    #[test]
    fn element_order_is_lcm_of_coordinate_orders() {
        let g = gt(6, 2);
        assert_eq!(g.element_order(&g.element(&[3, 2]).unwrap()), 6);
        assert_eq!(g.element_order(&g.element(&[2, 4]).unwrap()), 3);
        assert_eq!(g.element_order(&g.identity()), 1);
    }

    #[test]
    fn hyperplane_count_matches_projective_space() {
        // (p^n - 1)/(p - 1) canonical characters
        let cases = [(2u64, 4usize, 15u64), (3, 3, 13), (3, 4, 40), (2, 7, 127)];
        for (p, n, want) in cases {
            let g = gt(p, n);
            let chars = enumerate_hyperplanes(&g).unwrap();
            assert_eq!(chars.len() as u64, want, "({p},{n})");
            // all canonical and distinct
            for c in &chars {
                assert_eq!(c.canonical(), *c);
            }
        }
    }

    #[test]
    fn hyperplane_enumeration_rejects_composite_exponent() {
        let g = gt(6, 2);
        assert!(matches!(
            enumerate_hyperplanes(&g),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn kernel_has_index_p_and_value_respects_relation() {
        let g = gt(3, 3);
        let chi = Character::new(3, &[1, 2, 0]).unwrap();
        let ker = chi.kernel(&g).unwrap();
        assert_eq!(ker.order(), 9);
        assert_eq!(ker.index(), 3);
        // chi(a_{n+1}) = -(sum of coefficients)
        assert_eq!(chi.value_on_generator(4).unwrap(), 3 % 3);
        // kernel membership agrees with the value map
        for e in ker.elements() {
            assert_eq!(chi.value(&e).unwrap(), 0);
        }
    }

    #[test]
    fn canonical_scales_first_nonzero_to_one() {
        let chi = Character::new(5, &[0, 3, 1]).unwrap();
        let canon = chi.canonical();
        assert_eq!(canon.coefficients(), &[0, 1, 2]); // 3^{-1} = 2 mod 5
    }

    #[test]
    fn product_of_distinct_hyperplane_kernels_is_everything() {
        let g = gt(2, 4);
        let chars = enumerate_hyperplanes(&g).unwrap();
        let k1 = chars[0].kernel(&g).unwrap();
        let k2 = chars[1].kernel(&g).unwrap();
        assert_eq!(k1.product(&k2).unwrap().order(), g.order());
    }

    #[test]
    fn intersect_cyclic_counts_shared_powers() {
        let g = gt(6, 2);
        let h = Subgroup::span(&g, &[g.element(&[3, 2]).unwrap()]).unwrap();
        assert_eq!(h.order(), 6);
        // <a_1> = {(0,0),(1,0),...,(5,0)}; h contains only (0,0) and (3,0)
        assert_eq!(h.intersect_cyclic_order(1).unwrap(), 2);
    }
}
