//! The Ringel (Euler) bilinear form, its symmetrization the Cartan form, and
//! the Tits quadratic form.

use crate::error::{QuiverError, Result};
use crate::quiver::{Quiver, QuiverPair, VertexValues};
#[cfg(test)]
use crate::quiver::DimVector;

fn check<A: VertexValues + ?Sized>(q: &Quiver, a: &A) -> Result<()> {
    if a.len() != q.vertex_count() {
        return Err(QuiverError::VertexMismatch { expected: q.vertex_count(), got: a.len() });
    }
    Ok(())
}

fn narrow(x: i128) -> Result<i64> {
    i64::try_from(x).map_err(|_| QuiverError::Overflow)
}

/// `<a,b>_Q = sum_v a(v)b(v) - sum_arrows a(s)b(t)`.
pub fn ringel_form<A, B>(q: &Quiver, a: &A, b: &B) -> Result<i64>
where
    A: VertexValues + ?Sized,
    B: VertexValues + ?Sized,
{
    check(q, a)?;
    check(q, b)?;
    let mut acc: i128 = 0;
    for v in 0..q.vertex_count() {
        acc = acc.checked_add(a.at(v).checked_mul(b.at(v)).ok_or(QuiverError::Overflow)?).ok_or(QuiverError::Overflow)?;
    }
    for arrow in q.arrows() {
        let term = a.at(arrow.source).checked_mul(b.at(arrow.target)).ok_or(QuiverError::Overflow)?;
        acc = acc.checked_sub(term).ok_or(QuiverError::Overflow)?;
    }
    narrow(acc)
}

/// `(a,b)_Q = <a,b>_Q + <b,a>_Q`.
pub fn cartan_form<A, B>(q: &Quiver, a: &A, b: &B) -> Result<i64>
where
    A: VertexValues + ?Sized,
    B: VertexValues + ?Sized,
{
    ringel_form(q, a, b)?.checked_add(ringel_form(q, b, a)?).ok_or(QuiverError::Overflow)
}

/// The Tits form `<a,a>_Q`.
pub fn tits_form<A: VertexValues + ?Sized>(q: &Quiver, a: &A) -> Result<i64> {
    ringel_form(q, a, a)
}

/// Matrix of the Cartan form in the basis of unit vectors. Symmetric and
/// independent of orientation.
pub fn cartan_matrix(q: &Quiver) -> Vec<Vec<i64>> {
    let n = q.vertex_count();
    let mut c = vec![vec![0i64; n]; n];
    for (v, row) in c.iter_mut().enumerate() {
        row[v] = 2;
    }
    for a in q.arrows() {
        c[a.source][a.target] -= 1;
        c[a.target][a.source] -= 1;
    }
    c
}

/// `(alpha, e_v)_Q = 2 alpha(v) - sum_{s a = v} alpha(t a) - sum_{t a = v} alpha(s a)`.
pub fn cartan_with_unit(pair: &QuiverPair, v: usize) -> i64 {
    let alpha = pair.alpha();
    2 * alpha.0[v] as i64 - pair.out_sum(v) as i64 - pair.in_sum(v) as i64
}

/// `<alpha, e_v>_Q = alpha(v) - sum_{t a = v} alpha(s a)`.
pub fn ringel_alpha_unit(pair: &QuiverPair, v: usize) -> i64 {
    pair.alpha().0[v] as i64 - pair.in_sum(v) as i64
}

/// `<e_v, alpha>_Q = alpha(v) - sum_{s a = v} alpha(t a)`.
pub fn ringel_unit_alpha(pair: &QuiverPair, v: usize) -> i64 {
    pair.alpha().0[v] as i64 - pair.out_sum(v) as i64
}

/// Tits form of the pair's own dimension vector.
pub fn pair_tits(pair: &QuiverPair) -> Result<i64> {
    tits_form(pair.quiver(), pair.alpha())
}

/// `1 - <alpha,alpha>_Q`, the dimension of the moduli space when alpha is stable.
pub fn expected_dimension(pair: &QuiverPair) -> Result<i64> {
    1i64.checked_sub(pair_tits(pair)?).ok_or(QuiverError::Overflow)
}

/// Membership in the fundamental set: nonzero, `(alpha, e_v) <= 0` everywhere
/// and connected support.
pub fn in_fundamental_set(pair: &QuiverPair) -> bool {
    let alpha = pair.alpha();
    if alpha.is_zero() {
        return false;
    }
    if (0..alpha.0.len()).any(|v| cartan_with_unit(pair, v) > 0) {
        return false;
    }
    match pair.support_restrict(None) {
        Ok((support, _)) => support.quiver().is_connected(),
        Err(_) => false,
    }
}

#[cfg(test)]
fn unit(q: &Quiver, v: usize) -> DimVector {
    DimVector::unit(q.vertex_count(), v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Weight;

    fn kronecker(m: usize) -> Quiver {
        let edges: Vec<(&str, &str)> = (0..m).map(|_| ("v1", "v2")).collect();
        Quiver::from_edges(&["v1", "v2"], &edges).unwrap()
    }

    fn fig1() -> QuiverPair {
        let q = Quiver::from_edges(&["v1", "v2", "v3"], &[("v1", "v3"), ("v1", "v3"), ("v1", "v2"), ("v3", "v2")]).unwrap();
        QuiverPair::new(q, DimVector(vec![2, 1, 3])).unwrap()
    }

    #[test]
    fn ringel_examples() {
        let k2 = kronecker(2);
        let one = DimVector(vec![1, 1]);
        assert_eq!(ringel_form(&k2, &one, &one).unwrap(), 0);
        let p = fig1();
        assert_eq!(ringel_form(p.quiver(), p.alpha(), p.alpha()).unwrap(), -3);
        for v in 0..3 {
            let e = unit(p.quiver(), v);
            assert_eq!(ringel_form(p.quiver(), &e, &e).unwrap(), 1);
        }
    }

    #[test]
    fn mismatched_lengths_are_rejected() {
        let k2 = kronecker(2);
        let bad = DimVector(vec![1, 1, 1]);
        assert!(matches!(ringel_form(&k2, &bad, &bad), Err(QuiverError::VertexMismatch { .. })));
    }

    #[test]
    fn cartan_examples() {
        let p = fig1();
        let e3 = unit(p.quiver(), 2);
        assert_eq!(cartan_form(p.quiver(), p.alpha(), &e3).unwrap(), 1);
        assert_eq!(cartan_with_unit(&p, 2), 1);

        let lp = Quiver::from_edges(&["v"], &[("v", "v")]).unwrap();
        for n in 1..5 {
            let pair = QuiverPair::new(lp.clone(), DimVector(vec![n])).unwrap();
            assert_eq!(cartan_with_unit(&pair, 0), 0);
        }
        let a2 = Quiver::from_edges(&["a", "b"], &[("a", "b")]).unwrap();
        assert_eq!(cartan_matrix(&a2), vec![vec![2, -1], vec![-1, 2]]);
        assert_eq!(cartan_matrix(&lp), vec![vec![0]]);
    }

    #[test]
    fn weights_are_accepted_as_arguments() {
        let k2 = kronecker(2);
        let t = Weight(vec![-1, 1]);
        assert_eq!(ringel_form(&k2, &t, &t).unwrap(), 1 + 1 + 2);
    }

    #[test]
    fn fundamental_set_examples() {
        let k3 = QuiverPair::new(kronecker(3), DimVector(vec![1, 1])).unwrap();
        assert!(in_fundamental_set(&k3));
        assert!(!in_fundamental_set(&fig1()));
        let zero = QuiverPair::new(kronecker(3), DimVector(vec![0, 0])).unwrap();
        assert!(!in_fundamental_set(&zero));
        // disconnected support
        let q = Quiver::from_edges(&["a", "b"], &[("a", "a"), ("b", "b")]).unwrap();
        let pair = QuiverPair::new(q, DimVector(vec![1, 1])).unwrap();
        assert!(!in_fundamental_set(&pair));
    }
}
