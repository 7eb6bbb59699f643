//! Conjectural decomposition for composite exponents: enumerate exponent
//! tuple classes modulo units together with branch subsets modulo the
//! symmetries of the branch set, and emit one cyclic cover per class.

use crate::curves::PGonalCurve;
use crate::decompose::{Decomposition, DecompositionFactor, DecompositionMode};
use crate::error::{Error, Result};
use crate::orbifold::{total_genus, MAX_PSI_ENUMERATION};
use crate::scalar::{symmetries_of_branch_set, BranchSet, ScalarMode};

/// An equivalence class of exponent tuples (alpha_1, ..., alpha_r) with
/// entries in Z_k - {0} summing to 0 mod k, modulo the diagonal action
/// of the units of Z_k. The representative is the lexicographically
/// smallest orbit member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitTupleClass {
    pub representative: Vec<u64>,
    /// gcd of the entries with k exceeds 1: the cover y^k = prod (x-a_j)^{alpha_j}
    /// is reducible and contributes no single factor.
    pub reducible: bool,
}

/// Enumerate the unit classes of admissible exponent tuples of length r
/// for modulus k, in lexicographic order of representatives.
pub fn unit_tuple_classes(k: u64, r: usize) -> Result<Vec<UnitTupleClass>> {
    if k < 2 || r < 2 {
        return Err(Error::Input(format!(
            "tuple classes need k >= 2 and r >= 2, got k={k}, r={r}"
        )));
    }
    let work = (k - 1)
        .checked_pow(r as u32)
        .ok_or_else(|| Error::Resource(format!("(k-1)^r overflows for k={k}, r={r}")))?;
    if work > MAX_PSI_ENUMERATION {
        return Err(Error::Resource(format!(
            "enumerating {work} tuples exceeds the limit {MAX_PSI_ENUMERATION}"
        )));
    }
    let units: Vec<u64> = (1..k).filter(|u| gcd(*u, k) == 1).collect();

    let mut out = Vec::new();
    let mut tuple = vec![1u64; r];
    loop {
        let sum: u64 = tuple.iter().sum();
        if sum.is_multiple_of(k) {
            // keep the tuple only when it is minimal in its unit orbit
            let mut minimal = true;
            for &u in &units[1..] {
                let scaled: Vec<u64> = tuple.iter().map(|a| a * u % k).collect();
                if scaled < tuple {
                    minimal = false;
                    break;
                }
            }
            if minimal {
                let g = tuple.iter().fold(k, |acc, &a| gcd(acc, a));
                out.push(UnitTupleClass {
                    representative: tuple.clone(),
                    reducible: g > 1,
                });
            }
        }
        // odometer over digits 1..k-1
        let mut pos = r;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < k {
                break;
            }
            tuple[pos] = 1;
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Branch subsets of size r modulo the symmetries of the whole branch
/// set. For symbolic branch sets no reduction is attempted and every
/// subset is its own class.
#[derive(Debug, Clone)]
pub struct SubsetFamily {
    /// All size-r index subsets, lexicographic.
    pub all: Vec<Vec<usize>>,
    /// Orbit representatives (lexicographically smallest member).
    pub representatives: Vec<Vec<usize>>,
    /// Orbit sizes, parallel to `representatives`.
    pub orbit_sizes: Vec<u64>,
    /// False when the branch set is symbolic and reduction was skipped.
    pub reduced: bool,
}

/// Compute size-r subsets of the branch set modulo its Moebius symmetries.
pub fn subset_representatives(branch: &BranchSet, r: usize) -> Result<SubsetFamily> {
    let m = branch.len();
    if r < 2 || r > m {
        return Err(Error::Input(format!(
            "subset size {r} out of range 2..={m}"
        )));
    }
    let all = index_subsets(m, r);
    if branch.mode() == ScalarMode::Symbolic {
        let orbit_sizes = vec![1u64; all.len()];
        return Ok(SubsetFamily {
            representatives: all.clone(),
            all,
            orbit_sizes,
            reduced: false,
        });
    }
    let symmetries = symmetries_of_branch_set(branch)?;
    let mut representatives = Vec::new();
    let mut orbit_sizes = Vec::new();
    for subset in &all {
        let mut orbit: Vec<Vec<usize>> = Vec::new();
        for sym in &symmetries {
            let img = sym.image_of_subset(subset);
            if !orbit.contains(&img) {
                orbit.push(img);
            }
        }
        let min = orbit.iter().min().expect("identity is always present");
        if min == subset {
            representatives.push(subset.clone());
            orbit_sizes.push(orbit.len() as u64);
        }
    }
    Ok(SubsetFamily {
        all,
        representatives,
        orbit_sizes,
        reduced: true,
    })
}

fn index_subsets(m: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for v in start..m {
            cur.push(v);
            rec(v + 1, m, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, r, &mut Vec::new(), &mut out);
    out
}

/// Conjectural decomposition for arbitrary exponent k >= 2: one cyclic
/// cover per (branch subset class, exponent tuple class) pair, over
/// subset sizes r from the smallest admissible value up to n+1.
/// Reducible covers are flagged and carry no genus. No isogeny
/// certificate is produced; for prime k the enumeration reproduces the
/// proved decomposition factor by factor.
pub fn conjectural_enumeration(
    k: u64,
    n: usize,
    branch: &BranchSet,
    _precision: u32,
) -> Result<Decomposition> {
    if k < 2 || n < 2 {
        return Err(Error::Input(format!(
            "curve type needs k >= 2 and n >= 2, got ({k}, {n})"
        )));
    }
    if branch.len() != n + 1 {
        return Err(Error::Input(format!(
            "type (_, {n}) takes {} branch points, got {}",
            n + 1,
            branch.len()
        )));
    }
    let symbolic = branch.mode() == ScalarMode::Symbolic;
    let r_min = if k == 2 { 4 } else { 3 };

    let mut factors = Vec::new();
    for r in r_min..=(n + 1) {
        let tuples = unit_tuple_classes(k, r)?;
        if tuples.is_empty() {
            continue;
        }
        let subsets = subset_representatives(branch, r)?;
        for (subset, orbit_size) in subsets.representatives.iter().zip(&subsets.orbit_sizes) {
            for class in &tuples {
                let mut terms = Vec::new();
                let mut inf_exp = None;
                for (pos, &idx) in subset.iter().enumerate() {
                    let pt = &branch.points()[idx];
                    let e = class.representative[pos];
                    if pt.is_infinity() {
                        inf_exp = Some(e);
                    } else {
                        terms.push((pt.clone(), e));
                    }
                }
                let raw = PGonalCurve::new(k, terms, inf_exp)?;
                let label = format!(
                    "r={r} subset={:?} alpha={:?}",
                    subset.iter().map(|i| i + 1).collect::<Vec<_>>(),
                    class.representative
                );
                if class.reducible {
                    factors.push(DecompositionFactor {
                        label,
                        curve: raw,
                        genus: None,
                        reducible: true,
                        multiplicity: *orbit_size,
                        j: None,
                    });
                    continue;
                }
                let curve = if symbolic {
                    raw
                } else {
                    raw.normalize_first_three()?.0
                };
                let genus = curve.genus()?;
                let j = if genus == 1 {
                    super::elliptic_j(&curve)?
                } else {
                    None
                };
                factors.push(DecompositionFactor {
                    label,
                    curve,
                    genus: Some(genus),
                    reducible: false,
                    multiplicity: *orbit_size,
                    j,
                });
            }
        }
    }

    factors.sort_by(|a, b| {
        (a.genus, a.curve.equation(), &a.label).cmp(&(b.genus, b.curve.equation(), &b.label))
    });

    Ok(Decomposition {
        k,
        n,
        total_genus: total_genus(k, n)?,
        branch: branch.clone(),
        factors,
        certificate: None,
        mode: DecompositionMode::Conjectural,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::decompose_prime;
    use crate::orbifold::psi_closed;
    use crate::scalar::Scalar;
    use num_traits::ToPrimitive;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::rational(n, d).unwrap()
    }

    #[test]
    fn octic_triple_classes_are_the_frozen_twelve() {
        let classes = unit_tuple_classes(8, 3).unwrap();
        let reps: Vec<Vec<u64>> = classes.iter().map(|c| c.representative.clone()).collect();
        assert_eq!(
            reps,
            vec![
                vec![1, 1, 6],
                vec![1, 2, 5],
                vec![1, 3, 4],
                vec![1, 4, 3],
                vec![1, 5, 2],
                vec![1, 6, 1],
                vec![2, 1, 5],
                vec![2, 2, 4],
                vec![2, 3, 3],
                vec![2, 4, 2],
                vec![4, 1, 3],
                vec![4, 2, 2],
            ]
        );
        let reducible: Vec<Vec<u64>> = classes
            .iter()
            .filter(|c| c.reducible)
            .map(|c| c.representative.clone())
            .collect();
        assert_eq!(reducible, vec![vec![2, 2, 4], vec![2, 4, 2], vec![4, 2, 2]]);
    }

    #[test]
    fn prime_class_counts_match_psi() {
        for (k, r) in [
            (3u64, 3usize),
            (3, 4),
            (5, 3),
            (5, 4),
            (7, 3),
            (2, 4),
            (2, 6),
        ] {
            let classes = unit_tuple_classes(k, r).unwrap();
            let psi = psi_closed(k, r as u64).unwrap().to_usize().unwrap();
            assert_eq!(classes.len(), psi, "k={k}, r={r}");
            assert!(classes.iter().all(|c| !c.reducible));
        }
    }

    #[test]
    fn four_point_branch_set_subsets_reduce_under_klein_symmetries() {
        // {inf, 0, 1, l} has the Klein four-group of symmetries; the four
        // 3-subsets fall into a single orbit... unless l is special.
        let b = BranchSet::from_lambdas(&[q(7, 3)]).unwrap();
        let fam = subset_representatives(&b, 3).unwrap();
        assert!(fam.reduced);
        assert_eq!(fam.all.len(), 4);
        assert_eq!(fam.representatives.len(), 1);
        assert_eq!(fam.orbit_sizes, vec![4]);
    }

    #[test]
    fn generic_five_point_branch_set_has_trivial_reduction() {
        let b = BranchSet::from_lambdas(&[q(2, 1), q(7, 1)]).unwrap();
        let fam = subset_representatives(&b, 4).unwrap();
        assert!(fam.reduced);
        assert_eq!(fam.representatives.len(), fam.all.len());
    }

    #[test]
    fn conjecture_reproduces_the_proved_case_for_prime_exponent() {
        let b = BranchSet::from_lambdas(&[q(2, 1), q(7, 1)]).unwrap();
        let proved = decompose_prime(2, 4, &b, 128).unwrap();
        let guessed = conjectural_enumeration(2, 4, &b, 128).unwrap();
        assert_eq!(guessed.mode, DecompositionMode::Conjectural);
        let eq_proved: Vec<String> = proved.factors.iter().map(|f| f.curve.equation()).collect();
        let eq_guessed: Vec<String> = guessed.factors.iter().map(|f| f.curve.equation()).collect();
        assert_eq!(eq_proved, eq_guessed);
    }

    #[test]
    fn octic_fermat_enumeration_counts() {
        let b = BranchSet::from_lambdas(&[]).unwrap();
        let dec = conjectural_enumeration(8, 2, &b, 128).unwrap();
        assert_eq!(dec.factors.len(), 12);
        assert_eq!(dec.factors.iter().filter(|f| f.reducible).count(), 3);
        assert!(dec.certificate.is_none());
    }
}
