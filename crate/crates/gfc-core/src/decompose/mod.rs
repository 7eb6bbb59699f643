//! Decomposition of the Jacobian of a generalized Fermat curve into
//! Jacobians of cyclic p-gonal quotient curves, together with the group
//! theoretic certificates that prove (or refute) a candidate
//! decomposition.

mod conjecture;
mod families;
mod report;

pub use conjecture::{
    conjectural_enumeration, subset_representatives, unit_tuple_classes, SubsetFamily,
    UnitTupleClass,
};
pub use families::{fermat_cyclic_scan, named_family_subgroups, FamilySubgroup, ScanSubgroup};
pub use report::{render_text, report, CertificateReport, FactorReport, Report, TypeReport};

use crate::curves::{pgonal_from_character, PGonalCurve};
use crate::error::{Error, Result};
use crate::group::{GroupType, Subgroup};
use crate::orbifold::{hyperplane_signature, quotient_signature, total_genus};
use crate::scalar::{j_invariant, BranchSet, Scalar, ScalarMode};

/// How a decomposition statement is backed: by the proved criterion, or
/// by the conjectural enumeration for composite exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecompositionMode {
    Theorem,
    Conjectural,
}

/// Result of checking the product criterion for a family of subgroups
/// H_1, ..., H_s: every pairwise product must uniformize a genus zero
/// quotient and the quotient genera must sum to the curve genus.
#[derive(Debug, Clone)]
pub struct CorollaryCertificate {
    /// genus of C/(H_i H_j); diagonal entries are the factor genera.
    pub pairwise_genera: Vec<Vec<u64>>,
    /// All off-diagonal entries vanish.
    pub pairwise_zero: bool,
    /// Sum of the diagonal (factor) genera.
    pub genus_sum: u64,
    /// Genus of the covering curve.
    pub expected_genus: u64,
}

impl CorollaryCertificate {
    pub fn passes(&self) -> bool {
        self.pairwise_zero && self.genus_sum == self.expected_genus
    }
}

/// Check the product criterion for the given subgroups of the standard
/// abelian group of the type (k, n).
pub fn check_corollary(gt: &GroupType, subgroups: &[Subgroup]) -> Result<CorollaryCertificate> {
    let s = subgroups.len();
    let mut matrix = vec![vec![0u64; s]; s];
    let mut pairwise_zero = true;
    for i in 0..s {
        matrix[i][i] = quotient_signature(&subgroups[i], gt)?.genus();
        for j in (i + 1)..s {
            let prod = subgroups[i].product(&subgroups[j])?;
            let g = quotient_signature(&prod, gt)?.genus();
            matrix[i][j] = g;
            matrix[j][i] = g;
            if g != 0 {
                pairwise_zero = false;
            }
        }
    }
    let genus_sum = (0..s).map(|i| matrix[i][i]).sum();
    let expected_genus = total_genus(gt.k(), gt.n())?;
    Ok(CorollaryCertificate {
        pairwise_genera: matrix,
        pairwise_zero,
        genus_sum,
        expected_genus,
    })
}

/// Result of checking the weighted isogeny relation for subgroups
/// H_1, ..., H_s with integer weights n_1, ..., n_s: for every i,
/// sum_j n_j g(C/(H_i H_j)) = 0 (diagonal included), and the double sum
/// sum_{i,j} n_i n_j g(C/(H_i H_j)) = 0.
#[derive(Debug, Clone)]
pub struct GeneralCertificate {
    pub pairwise_genera: Vec<Vec<u64>>,
    pub weights: Vec<i64>,
    /// The row sums sum_j n_j g_ij.
    pub row_sums: Vec<i64>,
    /// The double sum with both weights.
    pub total: i64,
}

impl GeneralCertificate {
    pub fn passes(&self) -> bool {
        self.row_sums.iter().all(|&r| r == 0) && self.total == 0
    }
}

/// Check the weighted isogeny relation.
pub fn check_general(
    gt: &GroupType,
    subgroups: &[Subgroup],
    weights: &[i64],
) -> Result<GeneralCertificate> {
    let s = subgroups.len();
    if weights.len() != s {
        return Err(Error::Input(format!(
            "{} weights for {} subgroups",
            weights.len(),
            s
        )));
    }
    let mut matrix = vec![vec![0u64; s]; s];
    for i in 0..s {
        for j in i..s {
            let g = if i == j {
                quotient_signature(&subgroups[i], gt)?.genus()
            } else {
                quotient_signature(&subgroups[i].product(&subgroups[j])?, gt)?.genus()
            };
            matrix[i][j] = g;
            matrix[j][i] = g;
        }
    }
    let row_sums: Vec<i64> = (0..s)
        .map(|i| (0..s).map(|j| weights[j] * matrix[i][j] as i64).sum())
        .collect();
    let total: i64 = (0..s).map(|i| weights[i] * row_sums[i]).sum();
    Ok(GeneralCertificate {
        pairwise_genera: matrix,
        weights: weights.to_vec(),
        row_sums,
        total,
    })
}

/// One factor of a decomposition: a cyclic cover of the line together
/// with its provenance label and invariants.
#[derive(Debug, Clone)]
pub struct DecompositionFactor {
    /// Identifies the construction, e.g. the character `chi(1,0,1,1)` or
    /// a tuple class `r=3 alpha=(1,2,5) subset={inf,0,1}`.
    pub label: String,
    pub curve: PGonalCurve,
    /// None for a reducible (conjectural) cover.
    pub genus: Option<u64>,
    pub reducible: bool,
    /// Orbit size of the branch subset class (1 in theorem mode).
    pub multiplicity: u64,
    /// j-invariant for elliptic factors with numeric parameters.
    pub j: Option<Scalar>,
}

/// A full decomposition statement for one curve.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub k: u64,
    pub n: usize,
    pub total_genus: u64,
    pub branch: BranchSet,
    pub factors: Vec<DecompositionFactor>,
    /// Present in theorem mode; conjectural runs carry no certificate.
    pub certificate: Option<CorollaryCertificate>,
    pub mode: DecompositionMode,
}

impl Decomposition {
    /// Sum of the factor genera (reducible factors contribute nothing).
    pub fn genus_sum(&self) -> u64 {
        self.factors
            .iter()
            .filter_map(|f| f.genus.map(|g| g * f.multiplicity))
            .sum()
    }
}

/// j-invariant of an elliptic cyclic cover in normalized position, when
/// one is defined: for a double cover of the line branched over four
/// points the Legendre parameter does the job; a 3-gonal cover branched
/// over three points has j = 0.
fn elliptic_j(curve: &PGonalCurve) -> Result<Option<Scalar>> {
    if curve.is_symbolic() {
        return Ok(None);
    }
    let p = curve.degree();
    let r = curve.branch_count() as u64;
    if p == 3 && r == 3 {
        return Ok(Some(Scalar::integer(0)));
    }
    if p == 2 && r == 4 {
        // normalized curve has branch points {inf, 0, 1, lambda}
        let zero = Scalar::zero();
        let one = Scalar::one();
        for (pt, _) in curve.terms() {
            if !pt.math_eq(&zero)? && !pt.math_eq(&one)? {
                return Ok(Some(j_invariant(pt)?));
            }
        }
        return Err(Error::Internal(
            "branched double cover without a Legendre parameter".into(),
        ));
    }
    Ok(None)
}

/// Decompose the Jacobian of the generalized Fermat curve of type (p, n),
/// p prime, over the given branch set: every index-p subgroup whose
/// quotient has positive genus contributes one cyclic p-gonal factor, and
/// the product criterion certifies the isogeny.
///
/// With numeric branch points each factor is renormalized so that its
/// first three branch points sit at (inf, 0, 1); symbolic branch sets
/// keep raw branch subsets.
pub fn decompose_prime(
    p: u64,
    n: usize,
    branch: &BranchSet,
    _precision: u32,
) -> Result<Decomposition> {
    let gt = GroupType::new(p, n)?;
    if !crate::group::is_prime(p) {
        return Err(Error::Unsupported(format!(
            "exponent {p} is composite; use the conjectural enumeration"
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

    let mut kernels: Vec<Subgroup> = Vec::new();
    let mut factors: Vec<DecompositionFactor> = Vec::new();
    for chi in crate::group::enumerate_hyperplanes(&gt)? {
        let sig = hyperplane_signature(&chi, &gt)?;
        if sig.genus() == 0 {
            continue;
        }
        let raw = pgonal_from_character(&chi, branch)?;
        let curve = if symbolic {
            raw
        } else {
            raw.normalize_first_three()?.0
        };
        let genus = curve.genus()?;
        if genus != sig.genus() {
            return Err(Error::Internal(format!(
                "curve genus {genus} disagrees with quotient signature {sig}"
            )));
        }
        let j = if genus == 1 {
            elliptic_j(&curve)?
        } else {
            None
        };
        kernels.push(chi.kernel(&gt)?);
        factors.push(DecompositionFactor {
            label: chi.label(),
            curve,
            genus: Some(genus),
            reducible: false,
            multiplicity: 1,
            j,
        });
    }

    // deterministic factor order: by genus, then by equation text
    let mut order: Vec<usize> = (0..factors.len()).collect();
    order.sort_by(|&a, &b| {
        (
            factors[a].genus,
            factors[a].curve.equation(),
            &factors[a].label,
        )
            .cmp(&(
                factors[b].genus,
                factors[b].curve.equation(),
                &factors[b].label,
            ))
    });
    let kernels: Vec<Subgroup> = order.iter().map(|&i| kernels[i].clone()).collect();
    let factors: Vec<DecompositionFactor> = order.into_iter().map(|i| factors[i].clone()).collect();

    let certificate = check_corollary(&gt, &kernels)?;
    if !certificate.passes() {
        return Err(Error::Certificate(format!(
            "product criterion failed: pairwise_zero={}, genus sum {} vs {}",
            certificate.pairwise_zero, certificate.genus_sum, certificate.expected_genus
        )));
    }
    Ok(Decomposition {
        k: p,
        n,
        total_genus: total_genus(p, n)?,
        branch: branch.clone(),
        factors,
        certificate: Some(certificate),
        mode: DecompositionMode::Theorem,
    })
}

/// A class of isogenous factors sharing a j-invariant (elliptic factors)
/// or grouped by genus (everything else).
#[derive(Debug, Clone)]
pub struct JClass {
    /// C1, C2, ... in order of first appearance.
    pub label: String,
    pub genus: Option<u64>,
    /// Common j-invariant for elliptic classes.
    pub j: Option<Scalar>,
    /// Total multiplicity of the class.
    pub multiplicity: u64,
    /// Indices into the decomposition's factor list.
    pub members: Vec<usize>,
}

/// Group the factors of a decomposition into isogeny classes: elliptic
/// factors by j-invariant, other factors by genus.
pub fn group_by_j(dec: &Decomposition) -> Result<Vec<JClass>> {
    let mut classes: Vec<JClass> = Vec::new();
    for (idx, f) in dec.factors.iter().enumerate() {
        let mut placed = false;
        for class in classes.iter_mut() {
            let same = match (&f.j, &class.j) {
                (Some(a), Some(b)) => f.genus == class.genus && a.math_eq(b)?,
                (None, None) => f.genus == class.genus && f.reducible == (class.genus.is_none()),
                _ => false,
            };
            if same {
                class.multiplicity += f.multiplicity;
                class.members.push(idx);
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(JClass {
                label: format!("C{}", classes.len() + 1),
                genus: f.genus,
                j: f.j.clone(),
                multiplicity: f.multiplicity,
                members: vec![idx],
            });
        }
    }
    Ok(classes)
}

/// One of the three coincidence conditions for the five-branch-point
/// family with lambda_2 = 1/lambda_1.
#[derive(Debug, Clone)]
pub struct SpecialCondition {
    pub name: &'static str,
    /// The Legendre parameter compared against lambda_1.
    pub argument: Scalar,
    /// Direct test j(argument) = j(lambda_1).
    pub j_equal: bool,
    /// Factored polynomial whose vanishing characterizes the coincidence.
    pub polynomial: &'static str,
    /// Whether some factor vanishes at lambda_1.
    pub polynomial_vanishes: bool,
}

/// Report for all three coincidence conditions at a given lambda_1.
#[derive(Debug, Clone)]
pub struct SpecialConditions {
    pub lambda1: Scalar,
    pub lambda2: Scalar,
    pub j_lambda1: Scalar,
    pub conditions: Vec<SpecialCondition>,
}

fn eval_poly(coeffs: &[i64], x: &Scalar) -> Result<Scalar> {
    // Horner, constant term last
    let mut acc = Scalar::integer(coeffs[0]);
    for c in &coeffs[1..] {
        acc = acc.try_mul(x)?.try_add(&Scalar::integer(*c))?;
    }
    Ok(acc)
}

fn any_factor_vanishes(factors: &[&[i64]], x: &Scalar) -> Result<bool> {
    let zero = Scalar::zero();
    for f in factors {
        if eval_poly(f, x)?.math_eq(&zero)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// For the five-point family with lambda_2 = 1/lambda_1, test the three
/// parameter coincidences that make extra elliptic factors isogenous:
///
/// * (a) j(l2 (1-l1)/(l2-l1)) = j(l1), vanishing locus
///   (1+l1^2)(l1^2-l1-1)(l1^2+l1-1);
/// * (b) j(l2/l1) = j(l1), vanishing locus
///   (l1^2-l1-1)(l1^2+l1-1)(l1^2+l1+1)(l1^3-l1+1)(l1^3-l1^2+1);
/// * (c) j((l2-1)/(l1-1)) = j(l1), same locus as (a).
pub fn special_parameter_conditions(lambda1: &Scalar) -> Result<SpecialConditions> {
    let zero = Scalar::zero();
    let one = Scalar::one();
    if lambda1.is_infinity() || lambda1.is_symbolic() {
        return Err(Error::Input(
            "lambda_1 must be a finite numeric scalar".into(),
        ));
    }
    if lambda1.math_eq(&zero)? || lambda1.math_eq(&one)? || lambda1.math_eq(&Scalar::integer(-1))? {
        return Err(Error::Input(
            "lambda_1 must avoid 0 and +-1 so that lambda_2 = 1/lambda_1 is admissible".into(),
        ));
    }
    let lambda2 = lambda1.recip()?;
    let j1 = j_invariant(lambda1)?;

    let arg_a = lambda2
        .try_mul(&one.try_sub(lambda1)?)?
        .try_div(&lambda2.try_sub(lambda1)?)?;
    let arg_b = lambda2.try_div(lambda1)?;
    let arg_c = lambda2.try_sub(&one)?.try_div(&lambda1.try_sub(&one)?)?;

    const POLY_A: &str = "(1+l1^2)*(l1^2-l1-1)*(l1^2+l1-1)";
    const POLY_B: &str = "(l1^2-l1-1)*(l1^2+l1-1)*(l1^2+l1+1)*(l1^3-l1+1)*(l1^3-l1^2+1)";
    let factors_a: [&[i64]; 3] = [&[1, 0, 1], &[1, -1, -1], &[1, 1, -1]];
    let factors_b: [&[i64]; 5] = [
        &[1, -1, -1],
        &[1, 1, -1],
        &[1, 1, 1],
        &[1, 0, -1, 1],
        &[1, -1, 0, 1],
    ];

    let mut conditions = Vec::with_capacity(3);
    for (name, arg, poly_text, vanishes) in [
        (
            "a",
            arg_a,
            POLY_A,
            any_factor_vanishes(&factors_a, lambda1)?,
        ),
        (
            "b",
            arg_b,
            POLY_B,
            any_factor_vanishes(&factors_b, lambda1)?,
        ),
        (
            "c",
            arg_c,
            POLY_A,
            any_factor_vanishes(&factors_a, lambda1)?,
        ),
    ] {
        if arg.math_eq(&zero)? || arg.math_eq(&one)? {
            return Err(Error::Domain(format!(
                "condition ({name}) argument {arg} is degenerate"
            )));
        }
        let j_equal = j_invariant(&arg)?.math_eq(&j1)?;
        conditions.push(SpecialCondition {
            name,
            argument: arg,
            j_equal,
            polynomial: poly_text,
            polynomial_vanishes: vanishes,
        });
    }
    Ok(SpecialConditions {
        lambda1: lambda1.clone(),
        lambda2,
        j_lambda1: j1,
        conditions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::rational(n, d).unwrap()
    }

    #[test]
    fn smallest_hyperelliptic_type_decomposes_into_five_elliptics() {
        let b = BranchSet::from_lambdas(&[q(2, 1), q(7, 1)]).unwrap();
        let dec = decompose_prime(2, 4, &b, 128).unwrap();
        assert_eq!(dec.total_genus, 5);
        assert_eq!(dec.factors.len(), 5);
        assert!(dec.factors.iter().all(|f| f.genus == Some(1)));
        assert!(dec.certificate.as_ref().unwrap().passes());
        let classes = group_by_j(&dec).unwrap();
        assert_eq!(classes.len(), 5, "five distinct j-invariants");
    }

    #[test]
    fn genus_zero_and_one_types_are_consistent() {
        let b = BranchSet::from_lambdas(&[]).unwrap();
        let dec = decompose_prime(2, 2, &b, 128).unwrap();
        assert_eq!(dec.total_genus, 0);
        assert!(dec.factors.is_empty());

        let b = BranchSet::from_lambdas(&[q(3, 1)]).unwrap();
        let dec = decompose_prime(2, 3, &b, 128).unwrap();
        assert_eq!(dec.total_genus, 1);
        assert_eq!(dec.factors.len(), 1);
        assert_eq!(dec.factors[0].genus, Some(1));
    }

    #[test]
    fn trigonal_type_splits_by_genus() {
        let b = BranchSet::from_lambdas(&[q(5, 2)]).unwrap();
        let dec = decompose_prime(3, 3, &b, 128).unwrap();
        assert_eq!(dec.total_genus, 10);
        let g1 = dec.factors.iter().filter(|f| f.genus == Some(1)).count();
        let g2 = dec.factors.iter().filter(|f| f.genus == Some(2)).count();
        assert_eq!((g1, g2), (4, 3));
        assert_eq!(dec.genus_sum(), 10);
        // the elliptic factors here all carry complex multiplication: j = 0
        for f in dec.factors.iter().filter(|f| f.genus == Some(1)) {
            assert_eq!(f.j, Some(Scalar::integer(0)));
        }
    }

    #[test]
    fn symbolic_mode_lists_branch_subsets_without_j() {
        let b = BranchSet::generic(2).unwrap();
        let dec = decompose_prime(2, 4, &b, 128).unwrap();
        assert_eq!(dec.factors.len(), 5);
        assert!(dec.factors.iter().all(|f| f.j.is_none()));
        // each factor keeps its raw 4-point branch subset
        for f in &dec.factors {
            assert_eq!(f.curve.branch_count(), 4);
        }
    }

    #[test]
    fn composite_exponent_is_rejected_in_theorem_mode() {
        let b = BranchSet::from_lambdas(&[]).unwrap();
        assert!(matches!(
            decompose_prime(4, 2, &b, 128),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn general_certificate_recovers_the_product_criterion() {
        // H_1, ..., H_s passing the product criterion is the weighted
        // relation with weights (-1, ..., -1, 1) after appending the
        // trivial subgroup
        let gt = GroupType::new(2, 4).unwrap();
        let b = BranchSet::from_lambdas(&[q(2, 1), q(7, 1)]).unwrap();
        let dec = decompose_prime(2, 4, &b, 128).unwrap();
        let mut subs: Vec<Subgroup> = Vec::new();
        for f in &dec.factors {
            // recover kernels from labels
            let coeffs: Vec<i64> = f
                .label
                .trim_start_matches("chi(")
                .trim_end_matches(')')
                .split(',')
                .map(|s| s.parse().unwrap())
                .collect();
            let chi = crate::group::Character::new(2, &coeffs).unwrap();
            subs.push(chi.kernel(&gt).unwrap());
        }
        subs.push(Subgroup::trivial(&gt));
        let mut weights = vec![-1i64; subs.len() - 1];
        weights.push(1);
        let cert = check_general(&gt, &subs, &weights).unwrap();
        assert!(cert.passes());
    }

    #[test]
    fn golden_ratio_parameter_satisfies_all_three_conditions() {
        let l1 = Scalar::quadratic(
            BigRational::new(1.into(), 2.into()),
            BigRational::new((-1).into(), 2.into()),
            5,
        )
        .unwrap();
        let report = special_parameter_conditions(&l1).unwrap();
        assert_eq!(report.j_lambda1, q(8, 1));
        for c in &report.conditions {
            assert!(c.j_equal, "condition ({}) should hold", c.name);
            assert!(c.polynomial_vanishes, "locus ({}) should vanish", c.name);
        }
    }

    #[test]
    fn generic_parameter_satisfies_no_condition() {
        let report = special_parameter_conditions(&q(2, 1)).unwrap();
        for c in &report.conditions {
            assert!(!c.j_equal);
            assert!(!c.polynomial_vanishes);
        }
    }
}
