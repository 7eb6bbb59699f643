//! Explicitly named subgroup families: the permutation-indexed subgroups
//! decomposing the hyperelliptic types (2, n), and the census of cyclic
//! order-k subgroups acting on the classical Fermat curve of degree k.

use crate::error::{Error, Result};
use crate::group::{Character, GroupElement, GroupType, Subgroup};
use crate::orbifold::{quotient_signature, Signature};

/// One member of the permutation-indexed family: the index tuple, the
/// permutation it induces, the subgroup, the character cutting it out,
/// and the quotient signature.
#[derive(Debug, Clone)]
pub struct FamilySubgroup {
    /// The strictly increasing index tuple from {1, ..., n+1}.
    pub tuple: Vec<usize>,
    /// Image table of the permutation, sigma[i-1] = sigma(i).
    pub sigma: Vec<usize>,
    pub subgroup: Subgroup,
    /// The subgroup is the kernel of this character.
    pub character: Character,
    pub signature: Signature,
}

/// Apply transpositions right-to-left: (1,i_1)(2,i_2)...(m,i_m) acting on x.
fn apply_sigma(transpositions: &[(usize, usize)], x: usize) -> usize {
    let mut y = x;
    for &(a, b) in transpositions.iter().rev() {
        if y == a {
            y = b;
        } else if y == b {
            y = a;
        }
    }
    y
}

fn increasing_tuples(n_max: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(
        start: usize,
        n_max: usize,
        size: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for v in start..=n_max {
            cur.push(v);
            rec(v + 1, n_max, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n_max, size, &mut Vec::new(), &mut out);
    out
}

/// Build one family member for the type (2, n) from an index tuple.
fn family_member(
    gt: &GroupType,
    n: usize,
    tuple: &[usize],
    predicted: &Signature,
) -> Result<FamilySubgroup> {
    let m = tuple.len();
    let transpositions: Vec<(usize, usize)> =
        tuple.iter().enumerate().map(|(t, &i)| (t + 1, i)).collect();
    let sigma: Vec<usize> = (1..=(n + 1))
        .map(|x| apply_sigma(&transpositions, x))
        .collect();

    // generators: the a_i for i in the tuple, then the products
    // a_{sigma(m+1)} a_{sigma(q)} for q = m+2, ..., n
    let mut gens: Vec<GroupElement> = Vec::new();
    for &i in tuple {
        gens.push(gt.generator(i)?);
    }
    let head = sigma[m]; // sigma(m+1)
    for q in (m + 2)..=n {
        let prod = gt.add(&gt.generator(head)?, &gt.generator(sigma[q - 1])?);
        gens.push(prod);
    }
    let subgroup = Subgroup::span(gt, &gens)?;

    // the same subgroup as a character kernel: coefficients supported on
    // the complement of the tuple
    let complement: Vec<usize> = (1..=(n + 1)).filter(|i| !tuple.contains(i)).collect();
    let mut coeffs = vec![0i64; n];
    for &i in &complement {
        if i <= n {
            coeffs[i - 1] = 1;
        }
    }
    let chi = Character::new(2, &coeffs)?;
    // consistency of the complement with the forced value on a_{n+1}
    let wants_last = complement.contains(&(n + 1));
    let has_last = chi.value_on_generator(n + 1)? != 0;
    if wants_last != has_last {
        return Err(Error::Internal(format!(
            "complement {complement:?} is inconsistent on the last generator"
        )));
    }
    if subgroup != chi.kernel(gt)? {
        return Err(Error::Internal(format!(
            "family subgroup for tuple {tuple:?} is not the predicted character kernel"
        )));
    }

    let signature = quotient_signature(&subgroup, gt)?;
    if signature != *predicted {
        return Err(Error::Internal(format!(
            "family subgroup for tuple {tuple:?} has signature {signature}, predicted {predicted}"
        )));
    }
    Ok(FamilySubgroup {
        tuple: tuple.to_vec(),
        sigma,
        subgroup,
        character: chi,
        signature,
    })
}

/// The permutation-indexed family of subgroups decomposing the Jacobian
/// of the hyperelliptic type (2, n), n >= 6.
///
/// For even n, index tuples are the increasing (2j-1)-tuples from
/// {1, ..., n+1} for j = 1, ..., (n-2)/2, giving quotient signature
/// ((n-2j)/2; 2^(2(2j-1))). For odd n, tuples have size 2j for
/// j = 0, ..., (n-3)/2, giving ((n-2j-1)/2; 2^(4j)).
pub fn named_family_subgroups(n: usize) -> Result<Vec<FamilySubgroup>> {
    if n < 6 {
        return Err(Error::Input(format!(
            "the permutation-indexed family needs n >= 6, got {n}"
        )));
    }
    let gt = GroupType::new(2, n)?;
    let mut out = Vec::new();
    if n.is_multiple_of(2) {
        for j in 1..=((n - 2) / 2) {
            let genus = ((n - 2 * j) / 2) as u64;
            let cones = 2 * (2 * j - 1);
            let predicted = Signature::new(genus, vec![2u64; cones])?;
            for tuple in increasing_tuples(n + 1, 2 * j - 1) {
                out.push(family_member(&gt, n, &tuple, &predicted)?);
            }
        }
    } else {
        for j in 0..=((n - 3) / 2) {
            let genus = ((n - 2 * j - 1) / 2) as u64;
            let cones = 4 * j;
            let predicted = Signature::new(genus, vec![2u64; cones])?;
            for tuple in increasing_tuples(n + 1, 2 * j) {
                out.push(family_member(&gt, n, &tuple, &predicted)?);
            }
        }
    }
    Ok(out)
}

/// A cyclic order-k subgroup of the group of the classical Fermat curve
/// of degree k (type (k, 2)), with its quotient signature.
#[derive(Debug, Clone)]
pub struct ScanSubgroup {
    /// A generator of the subgroup.
    pub generator: GroupElement,
    pub subgroup: Subgroup,
    pub signature: Signature,
}

/// Enumerate all cyclic subgroups of order k inside Z_k^2 acting on the
/// degree-k Fermat curve, deduplicated, in a deterministic order, each
/// with its quotient signature. Callers typically keep the ones with
/// positive quotient genus.
pub fn fermat_cyclic_scan(k: u64) -> Result<Vec<ScanSubgroup>> {
    let gt = GroupType::new(k, 2)?;
    let mut out: Vec<ScanSubgroup> = Vec::new();
    for e in gt.all_elements() {
        if gt.element_order(&e) != k {
            continue;
        }
        let sub = Subgroup::span(&gt, std::slice::from_ref(&e))?;
        if out.iter().any(|s| s.subgroup == sub) {
            continue;
        }
        let signature = quotient_signature(&sub, &gt)?;
        out.push(ScanSubgroup {
            generator: e,
            subgroup: sub,
            signature,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_family_counts_match_binomials() {
        let fam = named_family_subgroups(6).unwrap();
        // j=1: C(7,1)=7 of genus 2; j=2: C(7,3)=35 of genus 1
        assert_eq!(fam.len(), 42);
        let g2 = fam.iter().filter(|f| f.signature.genus() == 2).count();
        let g1 = fam.iter().filter(|f| f.signature.genus() == 1).count();
        assert_eq!((g2, g1), (7, 35));
        let total: u64 = fam.iter().map(|f| f.signature.genus()).sum();
        assert_eq!(total, 49);
    }

    #[test]
    fn odd_family_counts_match_binomials() {
        let fam = named_family_subgroups(7).unwrap();
        // j=0: 1 of genus 3; j=1: C(8,2)=28 of genus 2; j=2: C(8,4)=70 of genus 1
        assert_eq!(fam.len(), 99);
        let by_genus = |g: u64| fam.iter().filter(|f| f.signature.genus() == g).count();
        assert_eq!((by_genus(3), by_genus(2), by_genus(1)), (1, 28, 70));
        let total: u64 = fam.iter().map(|f| f.signature.genus()).sum();
        assert_eq!(total, 129);
    }

    #[test]
    fn family_members_are_distinct_kernels() {
        let fam = named_family_subgroups(6).unwrap();
        for i in 0..fam.len() {
            for j in (i + 1)..fam.len() {
                assert_ne!(fam[i].subgroup, fam[j].subgroup);
            }
        }
    }

    #[test]
    fn small_n_is_rejected() {
        assert!(named_family_subgroups(5).is_err());
    }

    #[test]
    fn fermat_quartic_scan_finds_three_elliptic_quotients() {
        let scan = fermat_cyclic_scan(4).unwrap();
        assert_eq!(scan.len(), 6, "six cyclic order-4 subgroups of Z_4^2");
        let positive: Vec<_> = scan.iter().filter(|s| s.signature.genus() > 0).collect();
        assert_eq!(positive.len(), 3);
        for s in &positive {
            assert_eq!(s.signature, Signature::new(1, vec![2, 2]).unwrap());
        }
    }

    #[test]
    fn fermat_sextic_scan_signatures() {
        let scan = fermat_cyclic_scan(6).unwrap();
        assert_eq!(scan.len(), 12, "twelve cyclic order-6 subgroups of Z_6^2");
        let positive: Vec<_> = scan.iter().filter(|s| s.signature.genus() > 0).collect();
        assert_eq!(positive.len(), 9);
        let g1 = positive
            .iter()
            .filter(|s| s.signature == Signature::new(1, vec![2, 2, 3, 3, 3]).unwrap())
            .count();
        let g2 = positive
            .iter()
            .filter(|s| s.signature == Signature::new(2, vec![2, 2]).unwrap())
            .count();
        assert_eq!((g1, g2), (6, 3));
    }
}
