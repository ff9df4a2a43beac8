//! Exact scalars and echelon-form subspaces.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Field operations used by the module lab. No floating point anywhere.
pub trait Field: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Multiplicative inverse; only called on nonzero values.
    fn inv(&self) -> Self;
    fn from_int(n: i64) -> Self;
}

/// Exact rationals.
pub type Q = BigRational;

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn inv(&self) -> Self {
        self.recip()
    }
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

/// The prime field `F_P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp<const P: u64>(pub u64);

impl<const P: u64> Field for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1 % P)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, other: &Self) -> Self {
        Fp((self.0 + other.0) % P)
    }
    fn sub(&self, other: &Self) -> Self {
        Fp((self.0 + P - other.0) % P)
    }
    fn mul(&self, other: &Self) -> Self {
        Fp(self.0 * other.0 % P)
    }
    fn inv(&self) -> Self {
        // Fermat
        let (mut base, mut exp, mut acc) = (self.0, P - 2, 1);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % P;
            }
            base = base * base % P;
            exp >>= 1;
        }
        Fp(acc)
    }
    fn from_int(n: i64) -> Self {
        Fp(n.rem_euclid(P as i64) as u64)
    }
}

pub type F2 = Fp<2>;
pub type F3 = Fp<3>;

/// A subspace of `F^n` kept as rows with distinct pivots; each row is
/// reduced against all earlier ones.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace<F> {
    pub ambient: usize,
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            rows: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let mut s = Self::zero(ambient);
        for i in 0..ambient {
            s.insert(unit(ambient, i));
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> impl Iterator<Item = &Vec<F>> {
        self.rows.iter().map(|(_, r)| r)
    }

    fn reduce(&self, mut v: Vec<F>) -> Vec<F> {
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let c = v[*p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    if !r.is_zero() {
                        *x = x.sub(&c.mul(r));
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v.to_vec()).iter().all(F::is_zero)
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: Vec<F>) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length");
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let c = v[p].inv();
        for x in v.iter_mut() {
            *x = x.mul(&c);
        }
        self.rows.push((p, v));
        true
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.basis().all(|v| other.contains(v))
    }
}

pub fn unit<F: Field>(n: usize, i: usize) -> Vec<F> {
    let mut v = vec![F::zero(); n];
    v[i] = F::one();
    v
}

/// Rank of the matrix with the given rows.
pub fn rank<F: Field>(rows: &[Vec<F>]) -> usize {
    let n = rows.first().map_or(0, Vec::len);
    let mut s = Subspace::zero(n);
    for r in rows {
        s.insert(r.clone());
    }
    s.dim()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    #[test]
    fn rational_rank() {
        let rows = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(0), q(1), q(1)]];
        assert_eq!(rank(&rows), 2);
        let mut s = Subspace::zero(3);
        for r in &rows {
            s.insert(r.clone());
        }
        assert!(s.contains(&[q(1), q(3), q(4)]));
        assert!(!s.contains(&[q(0), q(0), q(1)]));
    }

    #[test]
    fn characteristic_matters() {
        // rows of the matrix [[1,1],[1,-1]] have determinant -2
        let m = |a: i64, b: i64| vec![a, b];
        let rows = [m(1, 1), m(1, -1)];
        assert_eq!(rank(&rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect::<Vec<_>>()), 2);
        assert_eq!(rank(&rows.iter().map(|r| r.iter().map(|&x| F2::from_int(x)).collect()).collect::<Vec<_>>()), 1);
        assert_eq!(rank(&rows.iter().map(|r| r.iter().map(|&x| F3::from_int(x)).collect()).collect::<Vec<_>>()), 2);
    }

    #[test]
    fn inverses_mod_p() {
        for a in 1..7 {
            let x = Fp::<7>(a);
            assert_eq!(x.mul(&x.inv()), Fp::<7>(1));
        }
    }
}
