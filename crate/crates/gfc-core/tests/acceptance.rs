//! End-to-end acceptance checks for the decomposition engine.
//!
//! Each test exercises one externally visible guarantee: exact counting
//! identities, factor censuses for small curve types, exact special
//! values in quadratic fields, round trips between branch parameters and
//! involution data, and the certificate checks on the classical Fermat
//! curves.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gfc_core::curves::{genus4_family, hyperelliptic_split_params, split_lambdas_from_mus};
use gfc_core::decompose::{check_corollary, decompose_prime, group_by_j, Decomposition};
use gfc_core::group::{enumerate_hyperplanes, GroupType, Subgroup};
use gfc_core::orbifold::{
    genus_sum_identity, hyperplane_signature, psi_bruteforce, psi_closed, quotient_signature,
    total_genus, Signature,
};
use gfc_core::scalar::{
    j_invariant, symmetries_of_branch_set, BigComplex, BigFloat, BranchSet, Mobius, Scalar,
};

const PREC: u32 = 256;

fn s(text: &str) -> Scalar {
    Scalar::parse(text, PREC).unwrap()
}

fn rational_branch(lambdas: &[i64]) -> BranchSet {
    let ls: Vec<Scalar> = lambdas.iter().map(|&v| Scalar::integer(v)).collect();
    BranchSet::from_lambdas(&ls).unwrap()
}

/// Count factors of each genus, ignoring multiplicities.
fn genus_census(dec: &Decomposition) -> Vec<(u64, usize)> {
    let mut rows: Vec<(u64, usize)> = Vec::new();
    for f in &dec.factors {
        let g = f.genus.expect("theorem-mode factors have a genus");
        match rows.iter_mut().find(|r| r.0 == g) {
            Some(r) => r.1 += 1,
            None => rows.push((g, 1)),
        }
    }
    rows.sort_unstable();
    rows
}

/// Assert that two j-invariant lists agree as multisets under exact
/// mathematical equality.
fn assert_j_multiset(actual: &[Scalar], expected: &[Scalar]) {
    assert_eq!(actual.len(), expected.len());
    let mut remaining: Vec<Scalar> = actual.to_vec();
    for e in expected {
        let pos = remaining
            .iter()
            .position(|a| a.math_eq(e).unwrap())
            .unwrap_or_else(|| panic!("no factor with j = {e} in {remaining:?}"));
        remaining.swap_remove(pos);
    }
}

#[test]
fn tuple_count_closed_form_matches_enumeration() {
    for q in 2..=7u64 {
        for r in 2..=9u64 {
            let closed = psi_closed(q, r).unwrap();
            let brute = psi_bruteforce(q, r).unwrap();
            assert_eq!(closed, brute, "tuple count mismatch at q={q}, r={r}");
        }
    }
}

#[test]
fn genus_identity_holds_for_all_small_types() {
    for q in 2..=7u64 {
        let n_min = if q == 2 { 3 } else { 2 };
        for n in n_min..=7usize {
            let id = genus_sum_identity(q, n).unwrap();
            assert!(id.holds, "genus identity fails at q={q}, n={n}");
        }
    }
}

#[test]
fn type_2_4_five_elliptic_factors_with_table_branch_data() {
    // rational parameters lambda1 = 2, lambda2 = 7
    let branch = rational_branch(&[2, 7]);
    let dec = decompose_prime(2, 4, &branch, PREC).unwrap();
    assert_eq!(dec.total_genus, 5);
    assert_eq!(dec.factors.len(), 5);
    assert!(dec.factors.iter().all(|f| f.genus == Some(1)));
    let cert = dec.certificate.as_ref().unwrap();
    assert!(cert.passes());

    // the five elliptic factors carry the Legendre parameters
    // (l2-1)/(l1-1), l2/l1, l2(1-l1)/(l2-l1), l2, l1 up to the projective
    // normalization, i.e. up to j-equivalence
    let actual: Vec<Scalar> = dec.factors.iter().map(|f| f.j.clone().unwrap()).collect();
    let expected: Vec<Scalar> = [s("6"), s("7/2"), s("-7/5"), s("7"), s("2")]
        .iter()
        .map(|l| j_invariant(l).unwrap())
        .collect();
    assert_j_multiset(&actual, &expected);

    // symbolic parameters: five genus-1 factors, one per 4-point subset
    // of the branch set
    let sym = decompose_prime(2, 4, &BranchSet::generic(2).unwrap(), PREC).unwrap();
    assert_eq!(sym.factors.len(), 5);
    assert!(sym.factors.iter().all(|f| f.genus == Some(1)));
    assert!(sym.certificate.as_ref().unwrap().passes());
    let mut subsets: Vec<Vec<String>> = sym
        .factors
        .iter()
        .map(|f| {
            f.curve
                .all_branches()
                .iter()
                .map(|(b, _)| b.to_string())
                .collect()
        })
        .collect();
    subsets.sort();
    let full = ["inf", "0", "1", "lambda1", "lambda2"];
    let mut expected_subsets: Vec<Vec<String>> = (0..5)
        .map(|skip| {
            full.iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, p)| p.to_string())
                .collect()
        })
        .collect();
    expected_subsets.sort();
    assert_eq!(subsets, expected_subsets);
}

#[test]
fn type_2_5_fifteen_elliptic_and_one_genus_two_factor() {
    let branch = rational_branch(&[2, 7, 11]);
    let dec = decompose_prime(2, 5, &branch, PREC).unwrap();
    assert_eq!(dec.total_genus, 17);
    assert_eq!(dec.factors.len(), 16);
    assert_eq!(genus_census(&dec), vec![(1, 15), (2, 1)]);
    assert_eq!(dec.genus_sum(), 17);
    assert!(dec.certificate.as_ref().unwrap().passes());
    let g2 = dec.factors.iter().find(|f| f.genus == Some(2)).unwrap();
    assert_eq!(
        g2.curve.equation(),
        "y^2 = (x)^1*(x-1)^1*(x-2)^1*(x-7)^1*(x-11)^1"
    );

    // same census with symbolic parameters
    let sym = decompose_prime(2, 5, &BranchSet::generic(3).unwrap(), PREC).unwrap();
    assert_eq!(genus_census(&sym), vec![(1, 15), (2, 1)]);
    assert!(sym.certificate.as_ref().unwrap().passes());
}

#[test]
fn type_3_3_census_and_genus_two_branch_sets() {
    let branch = rational_branch(&[2]);
    let dec = decompose_prime(3, 3, &branch, PREC).unwrap();
    assert_eq!(dec.total_genus, 10);
    assert_eq!(genus_census(&dec), vec![(1, 4), (2, 3)]);
    assert!(dec.certificate.as_ref().unwrap().passes());
    for f in dec.factors.iter().filter(|f| f.genus == Some(2)) {
        // genus-2 factors are order-3 cyclic covers branched over the
        // whole set {inf, 0, 1, lambda}
        assert_eq!(f.curve.degree(), 3);
        assert_eq!(f.curve.branch_count(), 4);
        let pts: Vec<String> = f
            .curve
            .all_branches()
            .iter()
            .map(|(b, _)| b.to_string())
            .collect();
        assert_eq!(pts, vec!["inf", "0", "1", "2"]);
        assert!(f.curve.terms().iter().all(|(_, e)| *e == 1 || *e == 2));
    }
}

/// Scale a full exponent tuple so the entry at infinity becomes 1, then
/// return the sorted finite part; this is the comparison class up to
/// unit scaling and branch point reordering.
fn canonical_exponents(k: u64, infinity: u64, finite: &[u64]) -> Vec<u64> {
    let unit = (1..k)
        .find(|u| (u * infinity) % k == 1)
        .expect("infinity exponent must be a unit");
    let mut scaled: Vec<u64> = finite.iter().map(|&a| (a * unit) % k).collect();
    scaled.sort_unstable();
    scaled
}

#[test]
fn type_3_4_census_and_genus_three_exponent_tuples() {
    let branch = rational_branch(&[2, 7]);
    let dec = decompose_prime(3, 4, &branch, PREC).unwrap();
    assert_eq!(dec.total_genus, 55);
    assert_eq!(genus_census(&dec), vec![(1, 10), (2, 15), (3, 5)]);
    assert!(dec.certificate.as_ref().unwrap().passes());

    let mut actual: Vec<Vec<u64>> = Vec::new();
    for f in dec.factors.iter().filter(|f| f.genus == Some(3)) {
        let inf = f.curve.infinity_exponent().expect("branched at infinity");
        let finite: Vec<u64> = f.curve.terms().iter().map(|(_, e)| *e).collect();
        assert_eq!(finite.len(), 4);
        actual.push(canonical_exponents(3, inf, &finite));
    }
    actual.sort();

    // published finite tuples; the entry at infinity is determined by
    // the sum condition modulo 3
    let published: [[u64; 4]; 5] = [
        [1, 2, 2, 2],
        [2, 1, 1, 1],
        [2, 2, 1, 2],
        [2, 2, 2, 1],
        [2, 2, 2, 2],
    ];
    let mut expected: Vec<Vec<u64>> = published
        .iter()
        .map(|t| {
            let s: u64 = t.iter().sum();
            let inf = (3 - s % 3) % 3;
            assert_ne!(inf, 0, "published tuple must leave a unit at infinity");
            canonical_exponents(3, inf, t)
        })
        .collect();
    expected.sort();
    assert_eq!(actual, expected);
}

#[test]
fn quadratic_special_point_collapses_all_j_values() {
    // lambda1 = (1 - sqrt5)/2 and lambda2 = -(1 + sqrt5)/2 = 1/lambda1:
    // all five elliptic factors become isogenous with j = 8
    let l1 = s("1/2-1/2*sqrt(5)");
    let l2 = s("-1/2-1/2*sqrt(5)");
    let branch = BranchSet::from_lambdas(&[l1, l2]).unwrap();
    let dec = decompose_prime(2, 4, &branch, PREC).unwrap();
    let classes = group_by_j(&dec).unwrap();
    assert_eq!(classes.len(), 1);
    assert_eq!(classes[0].multiplicity, 5);
    let j = classes[0].j.clone().unwrap();
    assert!(j.math_eq(&Scalar::integer(8)).unwrap());

    // generic rational parameters give five distinct classes
    let generic = decompose_prime(2, 4, &rational_branch(&[2, 7]), PREC).unwrap();
    assert_eq!(group_by_j(&generic).unwrap().len(), 5);
}

#[test]
fn genus_four_family_exact_values() {
    assert!(j_invariant(&Scalar::integer(-1))
        .unwrap()
        .math_eq(&s("27/4"))
        .unwrap());
    assert!(j_invariant(&s("1/5"))
        .unwrap()
        .math_eq(&s("9261/400"))
        .unwrap());

    let fam = genus4_family(&s("4+1*sqrt(11)"), &s("-3-1*sqrt(11)"), PREC).unwrap();
    assert!(fam.l21.math_eq(&s("3/2-1/2*sqrt(11)")).unwrap());
    assert!(fam.l22.math_eq(&s("1/2+1/2*sqrt(11)")).unwrap());

    // the four elliptic factors fall into j-classes of sizes 3 and 1
    let mut sizes: Vec<usize> = Vec::new();
    let mut reps: Vec<Scalar> = Vec::new();
    for j in &fam.factor_js {
        match reps.iter().position(|r| r.math_eq(j).unwrap()) {
            Some(i) => sizes[i] += 1,
            None => {
                reps.push(j.clone());
                sizes.push(1);
            }
        }
    }
    sizes.sort_unstable();
    assert_eq!(sizes, vec![1, 3]);
    let small = reps
        .iter()
        .find(|r| r.math_eq(&s("343/50")).unwrap())
        .expect("one class has j = 343/50");
    let _ = small;
}

fn random_mu_config(rng: &mut ChaCha8Rng, genus: usize) -> Vec<Scalar> {
    loop {
        let mut mus: Vec<Scalar> = Vec::new();
        let mut squares: Vec<Scalar> = Vec::new();
        while mus.len() < genus {
            let num = rng.gen_range(2i64..60);
            let den = rng.gen_range(1i64..10);
            let mu = Scalar::rational(num, den).unwrap();
            if mu.math_eq(&Scalar::one()).unwrap() {
                continue;
            }
            let sq = mu.try_mul(&mu).unwrap();
            if squares.iter().any(|s| s.math_eq(&sq).unwrap()) {
                continue;
            }
            squares.push(sq);
            mus.push(mu);
        }
        // reject configurations the forward map degenerates on
        if split_lambdas_from_mus(&mus).is_ok() {
            return mus;
        }
    }
}

#[test]
fn involution_split_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);
    let tol = BigFloat::from_rational(
        &BigRational::new(BigInt::from(1), BigInt::from(10).pow(30)),
        PREC,
    );
    for case in 0..20usize {
        let genus = 2 + case % 5;
        let mus = random_mu_config(&mut rng, genus);
        let lambdas = split_lambdas_from_mus(&mus).unwrap();
        let split = hyperelliptic_split_params(&lambdas, PREC).unwrap();
        assert_eq!(split.mu_squares.len(), genus);
        for (recovered, mu) in split.mu_squares.iter().zip(&mus) {
            let expected = mu.try_mul(mu).unwrap();
            assert!(
                recovered.math_eq(&expected).unwrap(),
                "case {case}: recovered {recovered} != {expected}"
            );
        }
        assert_eq!(split.model.genus(), genus as u64);
        assert_eq!(split.factor1.genus() + split.factor2.genus(), genus as u64);

        // numeric route: feed the same parameters as floating point data
        let numeric_lambdas: Vec<Scalar> = lambdas
            .iter()
            .map(|l| Scalar::complex(l.to_complex(PREC).unwrap()))
            .collect();
        let numeric = hyperelliptic_split_params(&numeric_lambdas, PREC).unwrap();
        for (approx, mu) in numeric.mu_squares.iter().zip(&mus) {
            let expected = mu.try_mul(mu).unwrap();
            let diff = approx
                .try_sub(&expected)
                .unwrap()
                .to_complex(PREC)
                .unwrap()
                .abs()
                .unwrap();
            assert!(
                diff.sub(&tol).is_negative(),
                "case {case}: numeric recovery off by {}",
                diff.to_decimal_string(40)
            );
        }
    }
}

#[test]
fn fermat_quartic_certificate_passes() {
    let gt = GroupType::new(4, 2).unwrap();
    let words = ["a1*a2^2", "a2*a1^2", "a3*a2^2"];
    let subs: Vec<Subgroup> = words
        .iter()
        .map(|w| {
            let gens: Vec<_> = w.split(',').map(|t| gt.parse_word(t).unwrap()).collect();
            Subgroup::span(&gt, &gens).unwrap()
        })
        .collect();
    for sub in &subs {
        let sig = quotient_signature(sub, &gt).unwrap();
        assert_eq!(sig, Signature::new(1, vec![2, 2]).unwrap());
        assert!(sub.is_cyclic());
    }
    let cert = check_corollary(&gt, &subs).unwrap();
    assert!(cert.pairwise_zero);
    assert_eq!(cert.genus_sum, 3);
    assert_eq!(cert.expected_genus, 3);
    assert!(cert.passes());
}

#[test]
fn fermat_sextic_family_fails_the_product_criterion() {
    let gt = GroupType::new(6, 2).unwrap();
    let mut subs: Vec<Subgroup> = Vec::new();
    for word in [
        "a1*a2^-1,a1^3", // signature (1; 2,2,2)
        "a1^3,a2^2",
        "a1^3,a3^2",
        "a1^2,a2^3",
        "a1^2,a3^3",
        "a2^3,a3^2",
        "a2^2,a3^3", // six with signature (1; 2,2,3,3,3)
        "a1*a2^-1",
        "a1*a3^-1",
        "a2*a3^-1", // three with signature (2; 2,2)
    ] {
        let gens: Vec<_> = word.split(',').map(|t| gt.parse_word(t).unwrap()).collect();
        subs.push(Subgroup::span(&gt, &gens).unwrap());
    }
    let sigs: Vec<Signature> = subs
        .iter()
        .map(|s| quotient_signature(s, &gt).unwrap())
        .collect();
    assert_eq!(sigs[0], Signature::new(1, vec![2, 2, 2]).unwrap());
    for sig in &sigs[1..7] {
        assert_eq!(*sig, Signature::new(1, vec![2, 2, 3, 3, 3]).unwrap());
    }
    for sig in &sigs[7..] {
        assert_eq!(*sig, Signature::new(2, vec![2, 2]).unwrap());
    }
    // the product criterion must fail for this family: the genus sum is
    // 13 against a curve genus of 10
    let cert = check_corollary(&gt, &subs).unwrap();
    assert_eq!(cert.expected_genus, 10);
    assert_eq!(cert.genus_sum, 13);
    assert!(!cert.passes());
}

#[test]
fn fermat_octic_seven_subgroup_certificate() {
    let gt = GroupType::new(8, 2).unwrap();
    let order_16_words = ["a1^-2,a1*a2^4", "a2^-2,a1^4*a2^-1"];
    for word in order_16_words {
        let gens: Vec<_> = word.split(',').map(|t| gt.parse_word(t).unwrap()).collect();
        let sub = Subgroup::span(&gt, &gens).unwrap();
        assert_eq!(
            quotient_signature(&sub, &gt).unwrap(),
            Signature::new(2, vec![4, 4, 4, 4]).unwrap(),
            "subgroup <{word}>"
        );
    }
    let seven_words = [
        "a1^-1*a2",
        "a1^2*a2^-1",
        "a1*a2^-2",
        "a1^-3*a2^-1",
        "a1^-3*a2",
        "a1*a2^2",
        "a1^2*a2",
    ];
    let subs: Vec<Subgroup> = seven_words
        .iter()
        .map(|w| Subgroup::span(&gt, &[gt.parse_word(w).unwrap()]).unwrap())
        .collect();
    for (word, sub) in seven_words.iter().zip(&subs) {
        assert_eq!(
            quotient_signature(sub, &gt).unwrap(),
            Signature::new(3, vec![2, 2]).unwrap(),
            "subgroup <{word}>"
        );
    }
    let cert = check_corollary(&gt, &subs).unwrap();
    assert!(cert.pairwise_zero, "pairwise quotient genera must vanish");
    assert_eq!(cert.expected_genus, 21);
    assert_eq!(cert.genus_sum, 21);
    assert!(cert.passes());
}

#[test]
fn signature_engine_cross_validation() {
    for (k, n) in [(2, 4), (2, 5), (3, 3), (3, 4), (5, 2), (5, 3)] {
        let gt = GroupType::new(k, n).unwrap();
        for chi in enumerate_hyperplanes(&gt).unwrap() {
            let fast = hyperplane_signature(&chi, &gt).unwrap();
            let kernel = chi.kernel(&gt).unwrap();
            let slow = quotient_signature(&kernel, &gt).unwrap();
            assert_eq!(
                fast,
                slow,
                "signature mismatch at ({k},{n}) {}",
                chi.label()
            );
        }
    }

    // a non-hyperplane check: <a1, a2 a3> inside the type (3,4) group has
    // quotient signature (4; 3^9)
    let gt = GroupType::new(3, 4).unwrap();
    let gens = vec![
        gt.generator(1).unwrap(),
        gt.add(&gt.generator(2).unwrap(), &gt.generator(3).unwrap()),
    ];
    let sub = Subgroup::span(&gt, &gens).unwrap();
    assert_eq!(
        quotient_signature(&sub, &gt).unwrap(),
        Signature::new(4, vec![3; 9]).unwrap()
    );
}

#[test]
fn heptagonal_branch_set_decomposition() {
    // branch set built from the 7th roots of unity, sent through the
    // Mobius map that fixes (1, w, w^2) -> (inf, 0, 1)
    let start = std::time::Instant::now();
    let omega = BigComplex::root_of_unity(7, PREC).unwrap();
    let pow = |e: u64| Scalar::complex(omega.pow(e));
    let map = Mobius::from_triple(
        &[pow(0), pow(1), pow(2)],
        &[Scalar::infinity(), Scalar::zero(), Scalar::one()],
    )
    .unwrap();
    let lambdas: Vec<Scalar> = (3..7).map(|e| map.apply(&pow(e)).unwrap()).collect();
    let branch = BranchSet::from_lambdas(&lambdas).unwrap();

    let symmetries = symmetries_of_branch_set(&branch).unwrap();
    assert!(
        symmetries.iter().any(|sym| sym.order() == 7),
        "expected an order-7 rotation of the branch set"
    );

    let dec = decompose_prime(2, 6, &branch, PREC).unwrap();
    assert_eq!(dec.total_genus, 49);
    assert_eq!(dec.factors.len(), 42);
    assert_eq!(dec.genus_sum(), 49);
    assert!(dec.certificate.as_ref().unwrap().passes());
    assert_eq!(genus_census(&dec), vec![(1, 35), (2, 7)]);
    assert!(
        start.elapsed() < std::time::Duration::from_secs(10),
        "heptagonal decomposition exceeded its time budget"
    );
}

#[test]
fn total_genus_reference_values() {
    for (p, n, g) in [
        (2, 4, 5),
        (2, 5, 17),
        (2, 6, 49),
        (2, 7, 129),
        (3, 3, 10),
        (3, 4, 55),
        (3, 5, 244),
        (4, 2, 3),
        (5, 2, 6),
        (6, 2, 10),
        (8, 2, 21),
    ] {
        assert_eq!(total_genus(p, n).unwrap(), g, "genus of type ({p},{n})");
    }
}
