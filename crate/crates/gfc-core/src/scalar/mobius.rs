//! Moebius transformations of the Riemann sphere over [`Scalar`] entries,
//! triple-to-triple interpolation, and the finite symmetry group of a
//! branch point set.

use crate::error::{Error, Result};

use super::{BranchSet, Scalar, ScalarMode};

/// A Moebius transformation z -> (a z + b)/(c z + d), stored as a 2x2
/// matrix with nonzero determinant. Entries are finite non-symbolic
/// scalars; the matrix is only meaningful up to a common factor.
#[derive(Debug, Clone)]
pub struct Mobius {
    a: Scalar,
    b: Scalar,
    c: Scalar,
    d: Scalar,
}

impl Mobius {
    /// Build from matrix entries; rejects symbolic or infinite entries and
    /// zero determinant.
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Result<Mobius> {
        for e in [&a, &b, &c, &d] {
            if e.is_infinity() || e.is_symbolic() {
                return Err(Error::Input(
                    "Moebius entries must be finite numeric scalars".into(),
                ));
            }
        }
        let det = a.try_mul(&d)?.try_sub(&b.try_mul(&c)?)?;
        if det.math_eq(&Scalar::zero())? {
            return Err(Error::Input("Moebius matrix is singular".into()));
        }
        Ok(Mobius { a, b, c, d })
    }

    pub fn identity() -> Mobius {
        Mobius {
            a: Scalar::one(),
            b: Scalar::zero(),
            c: Scalar::zero(),
            d: Scalar::one(),
        }
    }

    /// Matrix entries (a, b, c, d).
    pub fn entries(&self) -> [&Scalar; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Apply to a point of the sphere; infinity maps to a/c.
    pub fn apply(&self, x: &Scalar) -> Result<Scalar> {
        let zero = Scalar::zero();
        if x.is_symbolic() {
            return Err(Error::Unsupported(
                "cannot apply a Moebius map to a symbolic scalar".into(),
            ));
        }
        if x.is_infinity() {
            if self.c.math_eq(&zero)? {
                return Ok(Scalar::Infinity);
            }
            return self.a.try_div(&self.c);
        }
        let num = self.a.try_mul(x)?.try_add(&self.b)?;
        let den = self.c.try_mul(x)?.try_add(&self.d)?;
        if den.math_eq(&zero)? {
            return Ok(Scalar::Infinity);
        }
        num.try_div(&den)
    }

    /// Composition self after other: (self . other)(z) = self(other(z)).
    pub fn compose(&self, other: &Mobius) -> Result<Mobius> {
        let a = self
            .a
            .try_mul(&other.a)?
            .try_add(&self.b.try_mul(&other.c)?)?;
        let b = self
            .a
            .try_mul(&other.b)?
            .try_add(&self.b.try_mul(&other.d)?)?;
        let c = self
            .c
            .try_mul(&other.a)?
            .try_add(&self.d.try_mul(&other.c)?)?;
        let d = self
            .c
            .try_mul(&other.b)?
            .try_add(&self.d.try_mul(&other.d)?)?;
        Mobius::new(a, b, c, d)
    }

    /// Projective inverse (the adjugate matrix).
    pub fn inverse(&self) -> Result<Mobius> {
        Mobius::new(
            self.d.clone(),
            self.b.try_neg()?,
            self.c.try_neg()?,
            self.a.clone(),
        )
    }

    /// The matrix sending (z1, z2, z3) to (0, 1, infinity).
    fn to_zero_one_inf(z: &[Scalar; 3]) -> Result<Mobius> {
        let [z1, z2, z3] = z;
        if z1.is_infinity() {
            // z -> (z2 - z3)/(z - z3)
            return Mobius::new(
                Scalar::zero(),
                z2.try_sub(z3)?,
                Scalar::one(),
                z3.try_neg()?,
            );
        }
        if z2.is_infinity() {
            // z -> (z - z1)/(z - z3)
            return Mobius::new(Scalar::one(), z1.try_neg()?, Scalar::one(), z3.try_neg()?);
        }
        if z3.is_infinity() {
            // z -> (z - z1)/(z2 - z1)
            return Mobius::new(
                Scalar::one(),
                z1.try_neg()?,
                Scalar::zero(),
                z2.try_sub(z1)?,
            );
        }
        // z -> ((z - z1)(z2 - z3)) / ((z - z3)(z2 - z1))
        let p = z2.try_sub(z3)?; // z2 - z3
        let q = z2.try_sub(z1)?; // z2 - z1
        Mobius::new(
            p.clone(),
            z1.try_neg()?.try_mul(&p)?,
            q.clone(),
            z3.try_neg()?.try_mul(&q)?,
        )
    }

    /// The unique Moebius transformation sending one ordered triple of
    /// distinct points to another.
    pub fn from_triple(src: &[Scalar; 3], dst: &[Scalar; 3]) -> Result<Mobius> {
        for triple in [src, dst] {
            for i in 0..3 {
                for j in (i + 1)..3 {
                    if triple[i].math_eq(&triple[j])? {
                        return Err(Error::Input(format!(
                            "triple has coincident points {} and {}",
                            triple[i], triple[j]
                        )));
                    }
                }
            }
        }
        let m_src = Mobius::to_zero_one_inf(src)?;
        let m_dst = Mobius::to_zero_one_inf(dst)?;
        m_dst.inverse()?.compose(&m_src)
    }
}

/// A Moebius symmetry of a branch set together with the permutation it
/// induces on the (ordered) branch points.
#[derive(Debug, Clone)]
pub struct BranchSymmetry {
    map: Mobius,
    permutation: Vec<usize>,
}

impl BranchSymmetry {
    pub fn map(&self) -> &Mobius {
        &self.map
    }

    /// permutation[i] is the index of the image of the i-th branch point.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn is_identity(&self) -> bool {
        self.permutation.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// Multiplicative order of the induced permutation (equals the order
    /// of the Moebius map, which is determined by its action on >= 3
    /// points).
    pub fn order(&self) -> u64 {
        let n = self.permutation.len();
        let mut seen = vec![false; n];
        let mut order: u64 = 1;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len: u64 = 0;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = self.permutation[cur];
                len += 1;
            }
            order = order / gcd(order, len) * len;
        }
        order
    }

    /// Image of an index subset under the induced permutation, sorted.
    pub fn image_of_subset(&self, subset: &[usize]) -> Vec<usize> {
        let mut img: Vec<usize> = subset.iter().map(|&i| self.permutation[i]).collect();
        img.sort_unstable();
        img
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// All Moebius transformations of the sphere mapping the branch set onto
/// itself, found by interpolating the first three points to every ordered
/// triple and filtering. Exact scalars compare exactly; complex scalars at
/// the working tolerance. Symbolic branch sets are not supported.
///
/// The result always contains the identity and is closed under
/// composition (it is the stabilizer group of the set).
pub fn symmetries_of_branch_set(branch: &BranchSet) -> Result<Vec<BranchSymmetry>> {
    if branch.mode() == ScalarMode::Symbolic {
        return Err(Error::Unsupported(
            "symmetry search needs numeric or exact branch points".into(),
        ));
    }
    let pts = branch.points();
    let n = pts.len();
    if n < 3 {
        return Err(Error::Input(
            "symmetry search needs at least 3 points".into(),
        ));
    }
    let base: [Scalar; 3] = [pts[0].clone(), pts[1].clone(), pts[2].clone()];
    let mut found: Vec<BranchSymmetry> = Vec::new();
    let mut seen_perms = std::collections::BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            if j == i {
                continue;
            }
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let dst: [Scalar; 3] = [pts[i].clone(), pts[j].clone(), pts[k].clone()];
                let map = Mobius::from_triple(&base, &dst)?;
                if let Some(perm) = induced_permutation(&map, pts)? {
                    if seen_perms.insert(perm.clone()) {
                        found.push(BranchSymmetry {
                            map,
                            permutation: perm,
                        });
                    }
                }
            }
        }
    }
    Ok(found)
}

/// The permutation induced on `pts` by `map`, or None if the map does not
/// stabilize the set.
fn induced_permutation(map: &Mobius, pts: &[Scalar]) -> Result<Option<Vec<usize>>> {
    let n = pts.len();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for (idx, p) in pts.iter().enumerate() {
        let img = map.apply(p)?;
        let mut matched = None;
        for (t, q) in pts.iter().enumerate() {
            if !used[t] && img.math_eq(q)? {
                matched = Some(t);
                break;
            }
        }
        match matched {
            Some(t) => {
                perm[idx] = t;
                used[t] = true;
            }
            None => return Ok(None),
        }
    }
    Ok(Some(perm))
}
