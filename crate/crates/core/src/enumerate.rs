//! Exact short-vector enumeration on definite forms (Fincke-Pohst with a
//! rational LDL^T decomposition and integer range bounds).

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{IntVec, Lattice};
use crate::mat;
use crate::scalar::{Int, Rat};

/// LDL^T of a symmetric positive definite rational matrix: unit lower
/// triangular l and positive diagonal d. Errors if the form is not positive
/// definite.
fn ldl(g: &[Vec<Rat>]) -> Result<(Vec<Vec<Rat>>, Vec<Rat>)> {
    let n = g.len();
    let mut l = vec![vec![Rat::zero(); n]; n];
    let mut d = vec![Rat::zero(); n];
    for j in 0..n {
        let mut dj = g[j][j].clone();
        for k in 0..j {
            dj -= &l[j][k] * &l[j][k] * &d[k];
        }
        if !dj.is_positive() {
            return Err(Error::NotDefinite);
        }
        d[j] = dj;
        l[j][j] = Rat::from_integer(Int::from(1));
        for i in j + 1..n {
            let mut x = g[i][j].clone();
            for k in 0..j {
                x -= &l[i][k] * &l[j][k] * &d[k];
            }
            l[i][j] = x / &d[j];
        }
    }
    Ok((l, d))
}

/// floor(sqrt(f)) for a nonnegative rational f, exactly.
fn rat_sqrt_floor(f: &Rat) -> Int {
    debug_assert!(!f.is_negative());
    // start from floor(sqrt(p*q))/q (within 1 of the answer), adjust exactly
    let pq = f.numer() * f.denom();
    let mut r = pq.sqrt() / f.denom();
    while Rat::from_integer(r.clone()).pow(2) > *f {
        r -= 1;
    }
    while Rat::from_integer(&r + 1).pow(2) <= *f {
        r += 1;
    }
    r
}

/// All nonzero integer vectors z with q_gram(z) <= hi for a positive definite
/// rational Gram matrix; both signs included, lexicographic order.
pub fn enumerate_ball(gram: &[Vec<Rat>], hi: &Rat) -> Result<Vec<IntVec>> {
    let n = gram.len();
    if n == 0 || hi.is_negative() {
        return Ok(Vec::new());
    }
    let (l, d) = ldl(gram)?;
    // q(x) = sum_i d_i (x_i + sum_{j>i} l[j][i] x_j)^2, recurse from x_{n-1}
    let mut out = Vec::new();
    let mut x = vec![Int::zero(); n];
    descend(&l, &d, n, hi.clone(), &mut x, &mut out);
    out.retain(|v| !v.is_zero());
    out.sort();
    Ok(out)
}

fn descend(
    l: &[Vec<Rat>],
    d: &[Rat],
    level: usize,
    budget: Rat,
    x: &mut Vec<Int>,
    out: &mut Vec<IntVec>,
) {
    if level == 0 {
        out.push(IntVec(x.clone()));
        return;
    }
    let i = level - 1;
    let c: Rat = (i + 1..l.len())
        .map(|j| &l[j][i] * Rat::from_integer(x[j].clone()))
        .sum();
    // d_i (x_i + c)^2 <= budget
    // admissible x_i form the interval [-c - sqrt(f), -c + sqrt(f)]; bracket
    // it with floor(sqrt f) + 1 on both sides, the exact budget check below
    // discards the overshoot
    let f = &budget / &d[i];
    let r = rat_sqrt_floor(&f);
    let neg_c = -c.clone();
    let lo: Int = ceil_rat(&neg_c) - &r - 1;
    let hi: Int = floor_rat(&neg_c) + &r + 1;
    let mut xi = lo;
    while xi <= hi {
        let t = Rat::from_integer(xi.clone()) + &c;
        let used = &d[i] * &t * &t;
        if used <= budget {
            x[i] = xi.clone();
            descend(l, d, i, budget.clone() - used, x, out);
        }
        xi += 1;
    }
    x[i] = Int::zero();
}

fn floor_rat(r: &Rat) -> Int {
    r.floor().to_integer()
}

fn ceil_rat(r: &Rat) -> Int {
    r.ceil().to_integer()
}

/// All nonzero z in a definite lattice with lo <= q(z) <= hi, canonically
/// ordered. Errors on an indefinite or degenerate lattice.
pub fn short_vectors(l: &Lattice, lo: &Int, hi: &Int) -> Result<Vec<IntVec>> {
    if l.rank() == 0 {
        return Ok(Vec::new());
    }
    let (pos, neg, _disc) = l.signature_disc()?;
    let (gram, qlo, qhi) = if neg == 0 && pos == l.rank() {
        (l.gram_rat(), lo.clone(), hi.clone())
    } else if pos == 0 && neg == l.rank() {
        let g: Vec<Vec<Rat>> = l
            .gram_rat()
            .iter()
            .map(|row| row.iter().map(|x| -x.clone()).collect())
            .collect();
        (g, -hi.clone(), -lo.clone())
    } else {
        return Err(Error::NotDefinite);
    };
    if qhi < qlo || qhi.is_negative() || qhi.is_zero() {
        return Ok(Vec::new());
    }
    let ball = enumerate_ball(&gram, &Rat::from_integer(qhi.clone()))?;
    let mut out = Vec::new();
    for z in ball {
        let q = l.q_int(&z)?;
        let q_flip = if pos == 0 { -q } else { q };
        if q_flip >= qlo && q_flip <= qhi {
            out.push(z);
        }
    }
    Ok(out)
}

/// Brute-force oracle: scan the full coordinate box implied by
/// q(z) <= hi -> z_i^2 <= hi * (G^-1)_ii for a positive definite Gram.
/// Only intended for small ranks in tests.
pub fn enumerate_ball_box(gram: &[Vec<Rat>], hi: &Rat) -> Result<Vec<IntVec>> {
    let n = gram.len();
    if n == 0 || hi.is_negative() {
        return Ok(Vec::new());
    }
    let inv = mat::inverse_rat(gram).ok_or(Error::DegenerateLattice)?;
    let mut bounds = Vec::with_capacity(n);
    for i in 0..n {
        if !inv[i][i].is_positive() {
            return Err(Error::NotDefinite);
        }
        bounds.push(rat_sqrt_floor(&(hi * &inv[i][i])));
    }
    let mut out = Vec::new();
    let mut x = vec![Int::zero(); n];
    scan_box(gram, hi, &bounds, 0, &mut x, &mut out);
    out.sort();
    Ok(out)
}

fn scan_box(
    gram: &[Vec<Rat>],
    hi: &Rat,
    bounds: &[Int],
    i: usize,
    x: &mut Vec<Int>,
    out: &mut Vec<IntVec>,
) {
    if i == gram.len() {
        let v = IntVec(x.clone());
        if v.is_zero() {
            return;
        }
        let q: Rat = (0..gram.len())
            .flat_map(|a| (0..gram.len()).map(move |b| (a, b)))
            .map(|(a, b)| &gram[a][b] * Rat::from_integer(&x[a] * &x[b]))
            .sum();
        if q <= *hi {
            out.push(v);
        }
        return;
    }
    let mut c = -bounds[i].clone();
    while c <= bounds[i] {
        x[i] = c.clone();
        scan_box(gram, hi, bounds, i + 1, x, out);
        c += 1;
    }
    x[i] = Int::zero();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;

    fn diag(vals: &[i64]) -> Lattice {
        let n = vals.len();
        let g: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { vals[i] } else { 0 }).collect())
            .collect();
        Lattice::from_gram_i64(&g).unwrap()
    }

    #[test]
    fn neg_definite_roots() {
        let l = diag(&[-2, -2, -2]);
        let v = short_vectors(&l, &Int::from(-2), &Int::from(-2)).unwrap();
        assert_eq!(v.len(), 6);
        let v = short_vectors(&l, &Int::from(-10), &Int::from(-10)).unwrap();
        assert_eq!(v.len(), 24);
        // even lattice: no square -3
        let v = short_vectors(&l, &Int::from(-3), &Int::from(-3)).unwrap();
        assert!(v.is_empty());
    }

    #[test]
    fn indefinite_rejected() {
        let l = Lattice::parse("U(1)").unwrap();
        assert!(matches!(
            short_vectors(&l, &Int::from(-2), &Int::from(-2)),
            Err(Error::NotDefinite)
        ));
    }

    #[test]
    fn matches_box_oracle() {
        let cases: Vec<Vec<Vec<i64>>> = vec![
            vec![vec![2, 1], vec![1, 2]],
            vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]],
            vec![vec![1, 0, 0, 0], vec![0, 2, 1, 0], vec![0, 1, 3, 1], vec![0, 0, 1, 4]],
        ];
        for g in cases {
            let l = Lattice::from_gram_i64(&g).unwrap();
            for hi in 1..=50i64 {
                let a = short_vectors(&l, &Int::from(1), &Int::from(hi)).unwrap();
                let b = enumerate_ball_box(&l.gram_rat(), &crate::scalar::rat_int(hi)).unwrap();
                assert_eq!(a, b, "gram {g:?} hi {hi}");
            }
        }
    }

    #[test]
    fn deterministic_lex_order() {
        let l = diag(&[-2, -2, -2]);
        let v = short_vectors(&l, &Int::from(-2), &Int::from(-2)).unwrap();
        let mut sorted = v.clone();
        sorted.sort();
        assert_eq!(v, sorted);
        assert_eq!(v[0], IntVec::from_i64(&[-1, 0, 0]));
    }
}
