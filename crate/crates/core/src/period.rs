//! Period-domain membership, connected components, and the mirror involution
//! m_j attached to a hyperbolic summand U(n), all over Q(sqrt n).

use num_traits::{One, Signed, Zero};

use crate::chambers::{ext_det3, ext_gram_positive_definite};
use crate::error::{Error, Result};
use crate::lattice::{Block, BlockKind, CVec, Constraint, ExtVec, IntVec, Lattice, Sublattice};
use crate::mat;
use crate::scalar::{CScalar, ExtScalar, Int, Rat};
use crate::walls::{walls_in_definite_sublattice, WallNumerics};

/// An embedded hyperbolic plane U(n) inside a lattice: isotropic vectors v,
/// vstar with v.vstar = n, spanning a primitive direct summand, together with
/// a basis of the orthogonal complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct USummand {
    pub v: IntVec,
    pub vstar: IntVec,
    pub n: u64,
    pub complement: Vec<IntVec>,
}

impl USummand {
    pub fn new(l: &Lattice, v: IntVec, vstar: IntVec) -> Result<Self> {
        if !l.q_int(&v)?.is_zero() || !l.q_int(&vstar)?.is_zero() {
            return Err(Error::InvalidSummand("v and vstar must be isotropic".into()));
        }
        let n = l.pair_int(&v, &vstar)?;
        if !n.is_positive() {
            return Err(Error::InvalidSummand("v.vstar must be positive".into()));
        }
        let n: u64 = n
            .try_into()
            .map_err(|_| Error::InvalidSummand("v.vstar out of range".into()))?;
        let sub = l.orth_complement(&[
            Constraint::Q(v.to_qvec()),
            Constraint::Q(vstar.to_qvec()),
        ])?;
        if sub.rank() + 2 != l.rank() {
            return Err(Error::InvalidSummand("complement has wrong rank".into()));
        }
        // direct summand: (v, vstar, complement) must be a Z-basis of the lattice
        let mut rows: Vec<Vec<Int>> = vec![v.0.clone(), vstar.0.clone()];
        rows.extend(sub.basis.iter().map(|b| b.0.clone()));
        let det = mat::det_bareiss(&rows);
        if det != Int::one() && det != -Int::one() {
            return Err(Error::InvalidSummand(
                "span(v, vstar) is not a direct summand".into(),
            ));
        }
        Ok(USummand {
            v,
            vstar,
            n,
            complement: sub.basis,
        })
    }

    /// Pick the U(n) block with the given index (counting only U blocks) of a
    /// block-built lattice as the summand.
    pub fn from_block(l: &Lattice, idx: usize) -> Result<Self> {
        let ublocks: Vec<&Block> = l
            .blocks()
            .iter()
            .filter(|b| matches!(b.kind, BlockKind::U(_)))
            .collect();
        let b = ublocks.get(idx).ok_or_else(|| {
            Error::InvalidSummand(format!(
                "no U block with index {idx} (found {})",
                ublocks.len()
            ))
        })?;
        let unit = |i: usize| {
            let mut c = vec![Int::zero(); l.rank()];
            c[i] = Int::one();
            IntVec(c)
        };
        USummand::new(l, unit(b.start), unit(b.start + 1))
    }
}

/// A point (alpha, beta + i x) of the period domain, coordinates in Q(sqrt n).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedPeriod {
    pub alpha: CVec,
    pub beta: ExtVec,
    pub x: ExtVec,
}

impl MarkedPeriod {
    pub fn new(alpha: CVec, beta: ExtVec, x: ExtVec) -> Result<Self> {
        for len in [beta.len(), x.len()] {
            if len != alpha.len() {
                return Err(Error::DimensionMismatch {
                    expected: alpha.len(),
                    got: len,
                });
            }
        }
        let n = alpha.radicand();
        for m in [beta.radicand(), x.radicand()] {
            if m != n {
                return Err(Error::MixedRadicand { left: n, right: m });
            }
        }
        Ok(MarkedPeriod { alpha, beta, x })
    }

    pub fn radicand(&self) -> u64 {
        self.alpha.radicand()
    }
}

/// Membership in G: alpha^2 = 0, alpha.conj(alpha) > 0, alpha.x = 0, x^2 > 0.
pub fn in_g(l: &Lattice, p: &MarkedPeriod) -> Result<bool> {
    let sq = l.q_c(&p.alpha)?;
    if !sq.is_zero() {
        return Ok(false);
    }
    let herm = l.pair_c(&p.alpha, &p.alpha, true)?;
    if !herm.re.is_positive() {
        return Ok(false);
    }
    let ax = l.pair_c(&p.alpha, &p.x.to_cvec(), false)?;
    if !ax.is_zero() {
        return Ok(false);
    }
    Ok(l.q_ext(&p.x)?.is_positive())
}

fn hodge_complement(l: &Lattice, p: &MarkedPeriod) -> Result<Sublattice> {
    l.orth_complement(&[
        Constraint::Ext(p.alpha.re.clone()),
        Constraint::Ext(p.alpha.im.clone()),
        Constraint::Ext(p.x.clone()),
    ])
}

/// Membership in the wall-free locus: the negative definite complement of
/// (Re alpha, Im alpha, x) must contain no wall class.
pub fn in_d_tilde(l: &Lattice, numerics: &WallNumerics, p: &MarkedPeriod) -> Result<bool> {
    let s = hodge_complement(l, p)?;
    match walls_in_definite_sublattice(l, &s, numerics) {
        Ok(ws) => Ok(ws.is_empty()),
        Err(Error::NotNegativeDefinite) => Err(Error::DegenerateHodge),
        Err(e) => Err(e),
    }
}

/// Cramer solution of a 3x3 system over Q(sqrt n); None if the determinant
/// vanishes.
fn ext_solve3(g: &[Vec<ExtScalar>], rhs: &[ExtScalar]) -> Option<Vec<ExtScalar>> {
    let det = ext_det3(g);
    if det.is_zero() {
        return None;
    }
    let mut out = Vec::with_capacity(3);
    for col in 0..3 {
        let mut m: Vec<Vec<ExtScalar>> = g.to_vec();
        for row in 0..3 {
            m[row][col] = rhs[row].clone();
        }
        out.push(ext_det3(&m).div(&det).expect("nonzero determinant"));
    }
    Some(out)
}

/// Connected component of a G point: the sign of the determinant of
/// (Re alpha, Im alpha, x) projected onto the declared positively oriented
/// positive definite 3-space Wref; + maps to 1, - maps to 2.
pub fn component(l: &Lattice, p: &MarkedPeriod, wref: &[ExtVec]) -> Result<u8> {
    if wref.len() != 3 {
        return Err(Error::NotThreeGenerators(wref.len()));
    }
    let mut g = Vec::with_capacity(3);
    for a in wref {
        let mut row = Vec::with_capacity(3);
        for b in wref {
            row.push(l.pair_ext(a, b)?);
        }
        g.push(row);
    }
    if !ext_gram_positive_definite(&g) {
        return Err(Error::NotPositiveThreeSpace);
    }
    let coords_of = |y: &ExtVec| -> Result<Vec<ExtScalar>> {
        let rhs: Vec<ExtScalar> = wref
            .iter()
            .map(|w| l.pair_ext(y, w))
            .collect::<Result<Vec<_>>>()?;
        Ok(ext_solve3(&g, &rhs).expect("positive definite Gram"))
    };
    let m = vec![
        coords_of(&p.alpha.re)?,
        coords_of(&p.alpha.im)?,
        coords_of(&p.x)?,
    ];
    match ext_det3(&m).sign() {
        1 => Ok(1),
        -1 => Ok(2),
        _ => Err(Error::ZeroOrientation),
    }
}

/// The library default reference 3-space for a summand and period:
/// ( (v+vstar)/2, pr(Im alpha), pr(x) ), declared positively oriented.
pub fn default_wref(l: &Lattice, s: &USummand, p: &MarkedPeriod) -> Result<Vec<ExtVec>> {
    let n = p.radicand();
    let half = crate::scalar::rat(1, 2);
    let w1 = s.v.to_qvec().add(&s.vstar.to_qvec()).scale(&half).to_extvec(n);
    let w2 = pr_ext(l, s, &p.alpha.im)?;
    let w3 = pr_ext(l, s, &p.x)?;
    Ok(vec![w1, w2, w3])
}

/// Orthogonal projection away from the summand:
/// z - (z.vstar/n) v - (z.v/n) vstar.
pub fn pr_ext(l: &Lattice, s: &USummand, z: &ExtVec) -> Result<ExtVec> {
    let n = z.radicand();
    let ninv = Rat::new(Int::one(), Int::from(s.n));
    let cv = l.pair_ext_int(z, &s.vstar)?.scale(&ninv);
    let cvs = l.pair_ext_int(z, &s.v)?.scale(&ninv);
    Ok(z
        .sub(&s.v.to_extvec(n).scale(&cv))
        .sub(&s.vstar.to_extvec(n).scale(&cvs)))
}

pub fn pr_c(l: &Lattice, s: &USummand, z: &CVec) -> Result<CVec> {
    CVec::new(pr_ext(l, s, &z.re)?, pr_ext(l, s, &z.im)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainLevel {
    G,
    Full,
}

/// Membership in the domain of the mirror involution. Level G checks the four
/// pairing conditions against v; level Full additionally requires the
/// wall-free condition on the point and on its mirror image.
pub fn in_dom_mj(
    l: &Lattice,
    s: &USummand,
    numerics: &WallNumerics,
    p: &MarkedPeriod,
    level: DomainLevel,
) -> Result<bool> {
    let im_v = l.pair_ext_int(&p.alpha.im, &s.v)?;
    let re_v = l.pair_ext_int(&p.alpha.re, &s.v)?;
    let x_v = l.pair_ext_int(&p.x, &s.v)?;
    let b_v = l.pair_ext_int(&p.beta, &s.v)?;
    let level_g = im_v.is_zero() && !re_v.is_zero() && x_v.is_zero() && b_v.is_zero();
    if level == DomainLevel::G || !level_g {
        return Ok(level_g);
    }
    if !in_d_tilde(l, numerics, p)? {
        return Ok(false);
    }
    let q = mirror(l, s, p)?;
    in_d_tilde(l, numerics, &q)
}

/// The mirror involution m_j:
/// alpha_new = [sqrt(n) pr(beta+ix) - (1/2)(beta+ix)^2 v + vstar] / (Re alpha.v)
/// beta_new + i x_new = [sqrt(n) pr(alpha) - (alpha.beta) v] / (Re alpha.v).
pub fn mirror(l: &Lattice, s: &USummand, p: &MarkedPeriod) -> Result<MarkedPeriod> {
    let n = p.radicand();
    let r = l.pair_ext_int(&p.alpha.re, &s.v)?;
    if r.is_zero() {
        return Err(Error::OutsideDomain("Re alpha . v = 0".into()));
    }
    let sqrt_n = ExtScalar::sqrt_n(n);
    let v_c = s.v.to_extvec(n).to_cvec();
    let vstar_c = s.vstar.to_extvec(n).to_cvec();

    let z = CVec::new(p.beta.clone(), p.x.clone())?;
    let half = ExtScalar::from_rat(crate::scalar::rat(1, 2), n);
    let zsq = l.q_c(&z)?; // complex bilinear square of beta + i x
    let alpha_new = pr_c(l, s, &z)?
        .scale_ext(&sqrt_n)
        .sub(&v_c.scale_c(&zsq.mul_ext(&half)))
        .add(&vstar_c)
        .div_ext(&r)?;

    let ab = l.pair_c(&p.alpha, &p.beta.to_cvec(), false)?;
    let bx_new = pr_c(l, s, &p.alpha)?
        .scale_ext(&sqrt_n)
        .sub(&v_c.scale_c(&ab))
        .div_ext(&r)?;

    MarkedPeriod::new(alpha_new, bx_new.re, bx_new.im)
}

/// A projective point of the 2-plane Grassmannian over the extended lattice
/// Lambda + U'(n): two slot vectors plus the coordinates of both hyperbolic
/// summands inside the extended lattice.
#[derive(Clone, Debug)]
pub struct GrPoint {
    pub a1: CVec,
    pub a2: CVec,
    pub ext: Lattice,
    pub v: IntVec,
    pub vstar: IntVec,
    pub w: IntVec,
    pub wstar: IntVec,
    pub n: u64,
}

/// The embedding h of a period point into the extended Grassmannian:
/// a1 = sqrt(n) alpha - (alpha.beta) w,
/// a2 = sqrt(n) beta + (1/2)(x^2 - beta^2) w + wstar + i (sqrt(n) x - (x.beta) w).
pub fn embed_h(l: &Lattice, s: &USummand, p: &MarkedPeriod) -> Result<GrPoint> {
    let n = p.radicand();
    let r = l.rank();
    // extended lattice: append a U(n) block for (w, wstar)
    let mut gram: Vec<Vec<Int>> = l
        .gram()
        .iter()
        .map(|row| {
            let mut v = row.clone();
            v.extend([Int::zero(), Int::zero()]);
            v
        })
        .collect();
    let nn = Int::from(s.n);
    let mut row_w = vec![Int::zero(); r + 2];
    row_w[r + 1] = nn.clone();
    let mut row_ws = vec![Int::zero(); r + 2];
    row_ws[r] = nn;
    gram.push(row_w);
    gram.push(row_ws);
    let ext = Lattice::from_gram(gram, None)?;

    let unit = |i: usize| {
        let mut c = vec![Int::zero(); r + 2];
        c[i] = Int::one();
        IntVec(c)
    };
    let w = unit(r);
    let wstar = unit(r + 1);

    let lift_ext = |z: &ExtVec| -> ExtVec {
        let mut coords = z.coords().to_vec();
        coords.extend([ExtScalar::zero(n), ExtScalar::zero(n)]);
        ExtVec::new(coords).expect("consistent radicand")
    };
    let lift_c = |z: &CVec| -> CVec {
        CVec::new(lift_ext(&z.re), lift_ext(&z.im)).expect("consistent radicand")
    };

    let sqrt_n = ExtScalar::sqrt_n(n);
    let w_c = w.to_extvec(n).to_cvec();

    let ab = l.pair_c(&p.alpha, &p.beta.to_cvec(), false)?;
    let a1 = lift_c(&p.alpha)
        .scale_ext(&sqrt_n)
        .sub(&w_c.scale_c(&ab));

    let xsq = l.q_ext(&p.x)?;
    let bsq = l.q_ext(&p.beta)?;
    let half = ExtScalar::from_rat(crate::scalar::rat(1, 2), n);
    let coeff = xsq.sub(&bsq).mul(&half);
    let xb = l.pair_ext(&p.x, &p.beta)?;
    let re2 = lift_ext(&p.beta)
        .scale(&sqrt_n)
        .add(&w.to_extvec(n).scale(&coeff))
        .add(&wstar.to_extvec(n));
    let im2 = lift_ext(&p.x).scale(&sqrt_n).sub(&w.to_extvec(n).scale(&xb));
    let a2 = CVec::new(re2, im2)?;

    let mut v = s.v.0.clone();
    v.extend([Int::zero(), Int::zero()]);
    let mut vstar = s.vstar.0.clone();
    vstar.extend([Int::zero(), Int::zero()]);

    Ok(GrPoint {
        a1,
        a2,
        ext,
        v: IntVec(v),
        vstar: IntVec(vstar),
        w,
        wstar,
        n: s.n,
    })
}

/// The lattice involution behind the mirror on the Grassmannian side: swap
/// the two slots and exchange the (v, vstar) and (w, wstar) coordinates.
pub fn mirror_bar(g: &GrPoint) -> Result<GrPoint> {
    let nr = Rat::new(Int::one(), Int::from(g.n));
    let swap = |z: &CVec| -> Result<CVec> {
        let coeff = |z: &CVec, dual: &IntVec| -> Result<CScalar> {
            Ok(g.ext.pair_c_int(z, dual)?.mul_ext(&ExtScalar::from_rat(
                nr.clone(),
                z.radicand(),
            )))
        };
        let cv = coeff(z, &g.vstar)?;
        let cvs = coeff(z, &g.v)?;
        let cw = coeff(z, &g.wstar)?;
        let cws = coeff(z, &g.w)?;
        let n = z.radicand();
        let as_c = |v: &IntVec| v.to_extvec(n).to_cvec();
        let rest = z
            .sub(&as_c(&g.v).scale_c(&cv))
            .sub(&as_c(&g.vstar).scale_c(&cvs))
            .sub(&as_c(&g.w).scale_c(&cw))
            .sub(&as_c(&g.wstar).scale_c(&cws));
        Ok(rest
            .add(&as_c(&g.v).scale_c(&cw))
            .add(&as_c(&g.vstar).scale_c(&cws))
            .add(&as_c(&g.w).scale_c(&cv))
            .add(&as_c(&g.wstar).scale_c(&cvs)))
    };
    Ok(GrPoint {
        a1: swap(&g.a2)?,
        a2: swap(&g.a1)?,
        ext: g.ext.clone(),
        v: g.v.clone(),
        vstar: g.vstar.clone(),
        w: g.w.clone(),
        wstar: g.wstar.clone(),
        n: g.n,
    })
}

/// Slotwise projective equality of two Grassmannian points: each pair of slot
/// vectors must be nonzero and proportional over the complex field, decided
/// by vanishing of all 2x2 coordinate cross minors.
pub fn projectively_equal(g1: &GrPoint, g2: &GrPoint) -> Result<bool> {
    if g1.ext.rank() != g2.ext.rank() {
        return Err(Error::DimensionMismatch {
            expected: g1.ext.rank(),
            got: g2.ext.rank(),
        });
    }
    Ok(slot_proportional(&g1.a1, &g2.a1) && slot_proportional(&g1.a2, &g2.a2))
}

fn slot_proportional(a: &CVec, b: &CVec) -> bool {
    if a.is_zero() || b.is_zero() {
        return false;
    }
    let n = a.len();
    for i in 0..n {
        for j in i + 1..n {
            let m = a
                .component(i)
                .mul(&b.component(j))
                .sub(&a.component(j).mul(&b.component(i)));
            if !m.is_zero() {
                return false;
            }
        }
    }
    true
}

/// Canonical phase rotation making Im(sigma).v vanish:
/// (a, b) = (Re sigma.v, -Im sigma.v), or (1, 0) when Im sigma.v = 0 already;
/// rotated = (a + i b) sigma. With require_transverse set, errors when both
/// pairings vanish (the rotated real part would stay orthogonal to v).
pub fn rotate_phase(
    l: &Lattice,
    sigma: &CVec,
    v: &IntVec,
    require_transverse: bool,
) -> Result<(ExtScalar, ExtScalar, CVec)> {
    if sigma.is_zero() {
        return Err(Error::ZeroVector);
    }
    let n = sigma.radicand();
    let re_v = l.pair_ext_int(&sigma.re, v)?;
    let im_v = l.pair_ext_int(&sigma.im, v)?;
    if require_transverse && re_v.is_zero() && im_v.is_zero() {
        return Err(Error::OrthogonalPeriod);
    }
    let (a, b) = if im_v.is_zero() {
        (ExtScalar::one(n), ExtScalar::zero(n))
    } else {
        (re_v, im_v.neg())
    };
    let rotated = sigma.scale_c(&CScalar::new(a.clone(), b.clone()));
    Ok((a, b, rotated))
}

/// First candidate scale lambda such that (alpha, lambda beta + i x) lies in
/// the full mirror domain.
pub fn find_bfield_scale(
    l: &Lattice,
    s: &USummand,
    numerics: &WallNumerics,
    p: &MarkedPeriod,
    candidates: &[Rat],
) -> Result<Option<Rat>> {
    for lam in candidates {
        let scaled = MarkedPeriod::new(
            p.alpha.clone(),
            p.beta.scale(&ExtScalar::from_rat(lam.clone(), p.radicand())),
            p.x.clone(),
        )?;
        if in_dom_mj(l, s, numerics, &scaled, DomainLevel::Full)? {
            return Ok(Some(lam.clone()));
        }
    }
    Ok(None)
}

/// The mirror of a polarizing sublattice N: the primitive complement of
/// N together with (v, vstar), with its restricted Gram. Returns a warning
/// flag when N had to be saturated first.
pub fn mirror_polarized(
    l: &Lattice,
    nbasis: &[IntVec],
    s: &USummand,
) -> Result<(bool, Sublattice)> {
    for z in nbasis {
        if !l.pair_int(z, &s.v)?.is_zero() || !l.pair_int(z, &s.vstar)?.is_zero() {
            return Err(Error::SummandNotOrthogonal);
        }
    }
    let (is_primitive, saturated) = if nbasis.is_empty() {
        (true, Vec::new())
    } else {
        l.saturate(nbasis)?
    };
    let mut constraints: Vec<Constraint> = saturated
        .iter()
        .map(|z| Constraint::Q(z.to_qvec()))
        .collect();
    constraints.push(Constraint::Q(s.v.to_qvec()));
    constraints.push(Constraint::Q(s.vstar.to_qvec()));
    let sub = l.orth_complement(&constraints)?;
    Ok((!is_primitive, sub))
}
