//! Positive-cone and Kaehler-chamber membership relative to a trusted
//! reference class, plus the generic positive-3-space predicate.

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::lattice::{Constraint, ExtVec, Lattice, QVec};
use crate::scalar::ExtScalar;
use crate::walls::{orient_walls, walls_meeting_cone, Cone, WallNumerics, WallSet};

/// Sign of a pairing against an oriented wall.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Zero,
    Minus,
}

impl Sign {
    pub fn of_rat(r: &crate::scalar::Rat) -> Sign {
        if r.is_positive() {
            Sign::Plus
        } else if r.is_zero() {
            Sign::Zero
        } else {
            Sign::Minus
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Zero => "0",
            Sign::Minus => "-",
        }
    }
}

use num_traits::Zero;

/// Oriented walls together with the pairing signs of a query class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberSignature {
    pub walls: WallSet,
    pub signs: Vec<Sign>,
}

impl ChamberSignature {
    pub fn empty() -> Self {
        ChamberSignature {
            walls: WallSet::empty(),
            signs: Vec::new(),
        }
    }

    pub fn all_plus(&self) -> bool {
        self.signs.iter().all(|s| *s == Sign::Plus)
    }
}

/// Membership in the positive-cone component containing omega_ref:
/// q(alpha) > 0 and (alpha, omega_ref) > 0.
pub fn in_positive_cone(l: &Lattice, omega_ref: &QVec, alpha: &QVec) -> Result<bool> {
    if !l.q_q(omega_ref)?.is_positive() {
        return Err(Error::NonPositiveReference);
    }
    Ok(l.q_q(alpha)?.is_positive() && l.pair_q(alpha, omega_ref)?.is_positive())
}

/// Kaehler verdict for alpha relative to the trusted Kaehler class omega_ref:
/// every wall meeting the cone spanned by the two classes, oriented toward
/// omega_ref, must pair strictly positively with alpha.
pub fn is_kaehler(
    pic: &Lattice,
    numerics: &WallNumerics,
    omega_ref: &QVec,
    alpha: &QVec,
) -> Result<(bool, ChamberSignature)> {
    let sig = chamber_signature(pic, numerics, omega_ref, alpha)?;
    let inside = in_positive_cone(pic, omega_ref, alpha)?;
    Ok((inside && sig.all_plus(), sig))
}

/// The sign vector of alpha against the oriented walls meeting
/// cone(omega_ref, alpha); two classes get equal signatures iff no enumerated
/// wall separates them.
pub fn chamber_signature(
    pic: &Lattice,
    numerics: &WallNumerics,
    omega_ref: &QVec,
    alpha: &QVec,
) -> Result<ChamberSignature> {
    if !pic.q_q(omega_ref)?.is_positive() {
        return Err(Error::NonPositiveReference);
    }
    if !in_positive_cone(pic, omega_ref, alpha)? {
        return Ok(ChamberSignature::empty());
    }
    // degenerate cone: alpha proportional to omega_ref spans no 2-cone
    let walls = if proportional(omega_ref, alpha) {
        WallSet::empty()
    } else {
        let cone = Cone::new(vec![omega_ref.clone(), alpha.clone()])?;
        let witness = omega_ref.add(alpha);
        walls_meeting_cone(pic, numerics, &cone, &witness)?
    };
    let oriented = orient_walls(pic, &walls, omega_ref)?;
    let signs = oriented
        .walls
        .iter()
        .map(|d| Ok(Sign::of_rat(&pic.pair_q(&d.to_qvec(), alpha)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ChamberSignature {
        walls: oriented,
        signs,
    })
}

fn proportional(a: &QVec, b: &QVec) -> bool {
    // rank-1 test on the 2 x n matrix via vanishing 2 x 2 minors
    let n = a.len();
    for i in 0..n {
        for j in i + 1..n {
            if !(&a.0[i] * &b.0[j] - &a.0[j] * &b.0[i]).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Whether a positive definite 3-space W (three generators over Q(sqrt n))
/// meets the lattice only in 0 orthogonally: W^perp cap Lambda = 0.
pub fn is_generic_3space(lambda: &Lattice, w: &[ExtVec]) -> Result<bool> {
    if w.len() != 3 {
        return Err(Error::NotThreeGenerators(w.len()));
    }
    let mut gram = Vec::with_capacity(3);
    for a in w {
        let mut row = Vec::with_capacity(3);
        for b in w {
            row.push(lambda.pair_ext(a, b)?);
        }
        gram.push(row);
    }
    if !ext_gram_positive_definite(&gram) {
        return Err(Error::NotPositiveThreeSpace);
    }
    let constraints: Vec<Constraint> = w.iter().map(|v| Constraint::Ext(v.clone())).collect();
    let sub = lambda.orth_complement(&constraints)?;
    Ok(sub.rank() == 0)
}

/// Sylvester criterion on a symmetric 3 x 3 ExtScalar matrix using exact
/// signs of the leading principal minors.
pub(crate) fn ext_gram_positive_definite(g: &[Vec<ExtScalar>]) -> bool {
    let m1 = &g[0][0];
    if !m1.is_positive() {
        return false;
    }
    let m2 = g[0][0].mul(&g[1][1]).sub(&g[0][1].mul(&g[1][0]));
    if !m2.is_positive() {
        return false;
    }
    ext_det3(g).is_positive()
}

pub(crate) fn ext_det3(g: &[Vec<ExtScalar>]) -> ExtScalar {
    let a = g[0][0].mul(&g[1][1].mul(&g[2][2]).sub(&g[1][2].mul(&g[2][1])));
    let b = g[0][1].mul(&g[1][0].mul(&g[2][2]).sub(&g[1][2].mul(&g[2][0])));
    let c = g[0][2].mul(&g[1][0].mul(&g[2][1]).sub(&g[1][1].mul(&g[2][0])));
    a.sub(&b).add(&c)
}
