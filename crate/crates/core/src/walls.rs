//! Wall-divisor numerics and wall enumeration: inside negative definite
//! sublattices and across rational polyhedral cones of a hyperbolic Picard
//! lattice.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::enumerate;
use crate::error::{Error, Result};
use crate::lattice::{IntVec, Lattice, QVec, Sublattice};
use crate::mat;
use crate::scalar::{rat_int, Int, Rat};

/// One numerical wall rule: a required square and an optional divisibility
/// divisor ("any" when absent).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallRule {
    pub square: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub div: Option<u64>,
}

/// The numerical characterization of wall divisors for a deformation type:
/// a list of rules plus the square bound N.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallNumerics {
    pub bound: u64,
    pub rules: Vec<WallRule>,
}

impl WallNumerics {
    pub fn new(bound: u64, rules: Vec<WallRule>) -> Result<Self> {
        if bound == 0 {
            return Err(Error::InvalidNumerics("bound must be positive".into()));
        }
        for r in &rules {
            if r.square >= 0 || r.square <= -(bound as i64) {
                return Err(Error::InvalidNumerics(format!(
                    "rule square {} outside (-{bound}, 0)",
                    r.square
                )));
            }
            if r.div == Some(0) {
                return Err(Error::InvalidNumerics("rule divisibility must be positive".into()));
            }
        }
        for (i, r) in rules.iter().enumerate() {
            if rules[..i].contains(r) {
                return Err(Error::InvalidNumerics(format!(
                    "duplicate rule (square {}, div {:?})",
                    r.square, r.div
                )));
            }
        }
        Ok(WallNumerics { bound, rules })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let parsed: WallNumerics = serde_json::from_str(s)
            .map_err(|e| Error::InvalidNumerics(e.to_string()))?;
        WallNumerics::new(parsed.bound, parsed.rules)
    }

    /// Numerics of the K3 surface: squares -2, any divisibility.
    pub fn k3() -> Self {
        WallNumerics::new(3, vec![WallRule { square: -2, div: None }]).unwrap()
    }

    /// Numerics of the Hilbert square of a K3: squares -2 (any divisibility)
    /// and -10 with divisibility 2.
    pub fn k3_hilb2() -> Self {
        WallNumerics::new(
            12,
            vec![
                WallRule { square: -2, div: None },
                WallRule { square: -10, div: Some(2) },
            ],
        )
        .unwrap()
    }
}

/// Rational polyhedral cone given by generators in a fixed lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub generators: Vec<QVec>,
}

impl Cone {
    pub fn new(generators: Vec<QVec>) -> Result<Self> {
        if generators.iter().any(|g| g.is_zero()) {
            return Err(Error::InvalidCone("zero generator".into()));
        }
        Ok(Cone { generators })
    }
}

/// A finite set of primitive wall classes, canonical sign, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallSet {
    pub walls: Vec<IntVec>,
}

impl WallSet {
    pub fn empty() -> Self {
        WallSet { walls: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.walls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walls.is_empty()
    }
}

/// Whether D is a primitive class matching some rule: q(D) equals the rule's
/// square and the rule's divisibility divides the divisibility of D in L.
pub fn is_wall_class(l: &Lattice, numerics: &WallNumerics, d: &IntVec) -> Result<bool> {
    if d.is_zero() {
        return Err(Error::ZeroVector);
    }
    if !d.is_primitive() {
        return Ok(false);
    }
    let q = l.q_int(d)?;
    let dv = l.divisibility(d)?;
    Ok(numerics.rules.iter().any(|r| {
        q == Int::from(r.square)
            && match r.div {
                None => true,
                Some(m) => (&dv % Int::from(m)).is_zero(),
            }
    }))
}

/// All primitive wall classes lying in a negative definite sublattice S of L,
/// expressed in ambient coordinates; divisibility is taken in L.
pub fn walls_in_definite_sublattice(
    l: &Lattice,
    s: &Sublattice,
    numerics: &WallNumerics,
) -> Result<WallSet> {
    if s.rank() == 0 {
        return Ok(WallSet::empty());
    }
    let g = mat::int_to_rat_mat(&s.gram);
    let (pos, _neg, zero) = mat::inertia_sym(&g);
    if pos > 0 || zero > 0 {
        return Err(Error::NotNegativeDefinite);
    }
    let neg_g: Vec<Vec<Rat>> = g
        .iter()
        .map(|row| row.iter().map(|x| -x.clone()).collect())
        .collect();
    let radius = rat_int(numerics.bound as i64 - 1);
    let mut walls = Vec::new();
    for z in enumerate::enumerate_ball(&neg_g, &radius)? {
        // ambient vector sum z_i * basis_i
        let mut amb = vec![Int::zero(); l.rank()];
        for (zi, b) in z.0.iter().zip(&s.basis) {
            for (a, bi) in amb.iter_mut().zip(&b.0) {
                *a += zi * bi;
            }
        }
        let amb = IntVec(amb);
        if is_wall_class(l, numerics, &amb)? {
            walls.push(amb.canonical_sign());
        }
    }
    walls.sort();
    walls.dedup();
    Ok(WallSet { walls })
}

/// The finite set of primitive walls D with -bound < q(D) < 0 matching the
/// numerics whose orthogonal hyperplane meets the cone nontrivially.
///
/// Termination: on the hyperbolic lattice the majorant
/// q_omega(z) = 2 (z, omega)^2 / q(omega) - q(z) is positive definite, and a
/// wall meeting the cone satisfies
/// (D, omega)^2 <= N * max_i ((omega, g_i)^2 / q(g_i) - q(omega)),
/// the maximum of the Rayleigh-type quotient over the cone being attained at
/// a generator. All candidates therefore lie in an exactly computable
/// q_omega-ball; the filter below is exact, so the bound only needs to be
/// valid, not tight.
pub fn walls_meeting_cone(
    pic: &Lattice,
    numerics: &WallNumerics,
    cone: &Cone,
    omega: &QVec,
) -> Result<WallSet> {
    let (pos, _neg, _disc) = pic.signature_disc()?;
    if pos != 1 {
        return Err(Error::NotHyperbolic);
    }
    let q_omega = pic.q_q(omega)?;
    if !q_omega.is_positive() {
        return Err(Error::NonPositiveReference);
    }
    if cone.generators.is_empty() {
        return Ok(WallSet::empty());
    }
    let mut ratio_max = Rat::zero();
    for g in &cone.generators {
        let qg = pic.q_q(g)?;
        if qg.is_zero() {
            return Err(Error::IsotropicGenerator);
        }
        if qg.is_negative() {
            return Err(Error::InvalidCone("generator with negative square".into()));
        }
        let pg = pic.pair_q(omega, g)?;
        if !pg.is_positive() {
            return Err(Error::InvalidCone(
                "omega does not lie in the cone interior".into(),
            ));
        }
        let ratio = &pg * &pg / qg;
        if ratio > ratio_max {
            ratio_max = ratio;
        }
    }
    let n = rat_int(numerics.bound as i64);
    let pair_sq_bound = &n * (&ratio_max - &q_omega);
    if pair_sq_bound.is_negative() {
        return Ok(WallSet::empty());
    }
    // q_omega(D) = 2 (D,omega)^2/q(omega) - q(D) <= 2*bound/q(omega) + N
    let radius = rat_int(2) * &pair_sq_bound / &q_omega + &n;
    // Gram of the majorant: H = 2 (G omega)(G omega)^T / q(omega) - G
    let gw = pic.gram_apply_q(omega);
    let r = pic.rank();
    let mut h = vec![vec![Rat::zero(); r]; r];
    let gram = pic.gram_rat();
    for i in 0..r {
        for j in 0..r {
            h[i][j] = rat_int(2) * &gw[i] * &gw[j] / &q_omega - &gram[i][j];
        }
    }
    let mut walls = Vec::new();
    for d in enumerate::enumerate_ball(&h, &radius)? {
        let q = pic.q_int(&d)?;
        if !q.is_negative() || q <= Int::from(-(numerics.bound as i64)) {
            continue;
        }
        if !is_wall_class(pic, numerics, &d)? {
            continue;
        }
        if !hyperplane_meets_cone(pic, &d, cone)? {
            continue;
        }
        walls.push(d.canonical_sign());
    }
    walls.sort();
    walls.dedup();
    Ok(WallSet { walls })
}

/// D^perp meets the cone away from 0 iff the linear form (D, .) attains both
/// strict signs on the generators or vanishes on one of them.
fn hyperplane_meets_cone(pic: &Lattice, d: &IntVec, cone: &Cone) -> Result<bool> {
    let dq = d.to_qvec();
    let mut seen_pos = false;
    let mut seen_neg = false;
    for g in &cone.generators {
        let p = pic.pair_q(&dq, g)?;
        if p.is_zero() {
            return Ok(true);
        }
        if p.is_positive() {
            seen_pos = true;
        } else {
            seen_neg = true;
        }
    }
    Ok(seen_pos && seen_neg)
}

/// Replace each wall by the sign representative pairing positively with
/// omega; a vanishing pairing means omega itself lies on that wall.
pub fn orient_walls(l: &Lattice, walls: &WallSet, omega: &QVec) -> Result<WallSet> {
    let mut out = Vec::with_capacity(walls.len());
    for d in &walls.walls {
        let p = l.pair_q(&d.to_qvec(), omega)?;
        if p.is_zero() {
            return Err(Error::ReferenceOnWall);
        }
        out.push(if p.is_negative() { d.neg() } else { d.clone() });
    }
    Ok(WallSet { walls: out })
}
