//! The coordinate ring of the unit sphere and exact sample points on it.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poly::{Monomial, MultiPoly, PolyBuilder};
use crate::scalar::{Coeff, Rational};

/// `R[v_1..v_{n+1}] / (v_1^2 + ... + v_{n+1}^2 - 1)`, the polynomial functions on `S^n`.
///
/// Normal forms have degree at most one in the last variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SphereContext {
    nvars: usize,
}

impl SphereContext {
    /// Context for `S^n`, i.e. `n + 1` variables.
    pub fn for_sphere(n: usize) -> Self {
        SphereContext { nvars: n + 1 }
    }

    pub fn with_nvars(nvars: usize) -> Self {
        assert!(nvars >= 1, "sphere context needs at least one variable");
        SphereContext { nvars }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn dim(&self) -> usize {
        self.nvars - 1
    }

    /// `v_1^2 + ... + v_{n+1}^2 - 1`.
    pub fn generator<C: Coeff>(&self) -> MultiPoly<C> {
        &MultiPoly::sum_of_squares(self.nvars) - &MultiPoly::one(self.nvars)
    }

    /// Canonical representative of `p` modulo the sphere ideal.
    ///
    /// Every `v_last^(2k+b)` is rewritten as `v_last^b * (1 - v_1^2 - ... - v_n^2)^k`.
    pub fn nf_reduce<C: Coeff>(&self, p: &MultiPoly<C>) -> Result<MultiPoly<C>> {
        if p.nvars() != self.nvars {
            return Err(Error::VarCountMismatch { expected: self.nvars, found: p.nvars() });
        }
        let last = self.nvars - 1;
        if p.degree_in(last) <= 1 {
            return Ok(p.clone());
        }
        // powers of s = 1 - sum_{i<last} v_i^2
        let mut s_pows: Vec<MultiPoly<C>> = vec![MultiPoly::one(self.nvars)];
        let mut b = PolyBuilder::with_capacity(self.nvars, p.len());
        for (m, c) in p.terms() {
            let e = m.exps()[last];
            if e <= 1 {
                b.add_term_ref(m.clone(), c);
                continue;
            }
            let k = usize::from(e / 2);
            while s_pows.len() <= k {
                let s = self.complement_square::<C>();
                let next = &s_pows[s_pows.len() - 1] * &s;
                s_pows.push(next);
            }
            b.add_scaled(&s_pows[k], &m.with_exp(last, e % 2), c);
        }
        Ok(b.finish())
    }

    fn complement_square<C: Coeff>(&self) -> MultiPoly<C> {
        let mut b = PolyBuilder::new(self.nvars);
        b.add_term(Monomial::one(self.nvars), C::one());
        for i in 0..self.nvars - 1 {
            b.add_term(Monomial::var(self.nvars, i, 2), -C::one());
        }
        b.finish()
    }

    /// True when `p` vanishes identically on the sphere.
    pub fn is_zero_mod<C: Coeff>(&self, p: &MultiPoly<C>) -> Result<bool> {
        Ok(self.nf_reduce(p)?.is_zero())
    }

    /// NF equality of two functions on the sphere.
    pub fn equal_mod<C: Coeff>(&self, a: &MultiPoly<C>, b: &MultiPoly<C>) -> Result<bool> {
        self.is_zero_mod(&a.checked_sub(b)?)
    }
}

/// Exact rational points of `S^n ⊂ R^{n+1}`, deterministic in `seed`.
///
/// A random rational `t ∈ Q^n` is sent to `((1-|t|^2), 2t) / (1+|t|^2)`.
pub fn rational_sphere_points(n: usize, count: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let t: Vec<Rational> = (0..n).map(|_| random_rational(&mut rng, 12, 9)).collect();
            inverse_stereographic(&t)
        })
        .collect()
}

/// `((1-|t|^2), 2t_1, ..., 2t_n) / (1+|t|^2)`.
pub fn inverse_stereographic(t: &[Rational]) -> Vec<Rational> {
    let s: Rational = t.iter().map(|x| x * x).fold(Rational::zero(), |a, b| a + b);
    let denom = Rational::one() + &s;
    let mut out = Vec::with_capacity(t.len() + 1);
    out.push((Rational::one() - &s) / &denom);
    let two = Rational::from_integer(BigInt::from(2));
    out.extend(t.iter().map(|x| x * &two / &denom));
    out
}

pub(crate) fn random_rational(rng: &mut impl Rng, num_bound: i64, den_bound: i64) -> Rational {
    let n: i64 = rng.random_range(-num_bound..=num_bound);
    let d: i64 = rng.random_range(1..=den_bound);
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn norm_sqr(v: &[Rational]) -> Rational {
    v.iter().map(|x| x * x).fold(Rational::zero(), |a, b| a + b)
}
