//! Shared randomized fixtures: exact level-G domain points over Q(sqrt n)
//! built constructively inside U + U + U(n), so every membership condition
//! holds by algebra rather than by rejection sampling.

use bblattice::lattice::{CVec, ExtVec, IntVec, Lattice};
use bblattice::period::{MarkedPeriod, USummand};
use bblattice::scalar::{rat_int, ExtScalar, Rat};
use rand::Rng;

pub fn domain_lattice(n: u64) -> Lattice {
    Lattice::parse(&format!("U(1)+U(1)+U({n})")).unwrap()
}

pub fn domain_summand(l: &Lattice) -> USummand {
    USummand::from_block(l, 2).unwrap()
}

fn small_ext<R: Rng>(rng: &mut R, n: u64, lo: i64, hi: i64) -> ExtScalar {
    ExtScalar::new(
        rat_int(rng.gen_range(lo..=hi)),
        rat_int(rng.gen_range(lo..=hi)),
        n,
    )
}

/// A random point of the level-G mirror domain in U + U + U(n), basis
/// (e1, f1, e2, f2, v, vstar):
///   Im a = e1 + f1,  x = e2 + f2 + lam v,  beta in v-perp without vstar,
///   Re a = c1 e1 + c2 f1 + c3 e2 + c4 f2 + c5 v + vstar
/// with c2 = -c1, c4 = -c3 - lam n, c5 = (1 - c1 c2 - c3 c4)/n, which forces
/// a^2 = 0, a.conj(a) = 4 > 0, a.x = 0, x^2 = 2, Im a.v = x.v = beta.v = 0
/// and Re a.v = n != 0.
pub fn random_domain_point<R: Rng>(rng: &mut R, n: u64) -> MarkedPeriod {
    let one = ExtScalar::one(n);
    let nr = ExtScalar::from_rat(rat_int(n as i64), n);
    let c1 = small_ext(rng, n, -1, 1);
    let c3 = small_ext(rng, n, -1, 1);
    let lam = ExtScalar::from_int(rng.gen_range(-1..=1), n);
    let c2 = c1.neg();
    let c4 = c3.neg().sub(&lam.mul(&nr));
    let c5 = one
        .sub(&c1.mul(&c2))
        .sub(&c3.mul(&c4))
        .div(&nr)
        .unwrap();
    let zero = ExtScalar::zero(n);
    let ev = |c: [&ExtScalar; 6]| ExtVec::new(c.iter().map(|&x| x.clone()).collect()).unwrap();
    let im = ev([&one, &one, &zero, &zero, &zero, &zero]);
    let x = ev([&zero, &zero, &one, &one, &lam, &zero]);
    let re = ev([&c1, &c2, &c3, &c4, &c5, &one]);
    let b = [
        small_ext(rng, n, -2, 2),
        small_ext(rng, n, -2, 2),
        small_ext(rng, n, -2, 2),
        small_ext(rng, n, -2, 2),
        small_ext(rng, n, -2, 2),
    ];
    let beta = ev([&b[0], &b[1], &b[2], &b[3], &b[4], &zero]);
    MarkedPeriod::new(CVec::new(re, im).unwrap(), beta, x).unwrap()
}

pub fn random_intvec<R: Rng>(rng: &mut R, len: usize, lo: i64, hi: i64) -> IntVec {
    IntVec::from_i64(&(0..len).map(|_| rng.gen_range(lo..=hi)).collect::<Vec<_>>())
}

pub fn random_qvec<R: Rng>(rng: &mut R, len: usize) -> bblattice::lattice::QVec {
    bblattice::lattice::QVec(
        (0..len)
            .map(|_| Rat::new(rng.gen_range(-5i64..=5).into(), rng.gen_range(1i64..=3).into()))
            .collect(),
    )
}
