//! Sparse multivariate polynomials with exact coefficients.
//!
//! Terms are kept sorted in descending graded-lexicographic order with no zero
//! coefficients, so two polynomials are equal exactly when their term lists are.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use hashbrown::HashMap;

use crate::error::{Error, Result};
use crate::scalar::{Coeff, GaussianRational, Rational};

/// Dense exponent vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Box<[u16]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars].into_boxed_slice())
    }

    pub fn new(exps: Vec<u16>) -> Self {
        Monomial(exps.into_boxed_slice())
    }

    /// `v_i^e` (0-based `i`).
    pub fn var(nvars: usize, i: usize, e: u16) -> Self {
        let mut m = vec![0; nvars];
        m[i] = e;
        Monomial::new(m)
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(
            self.0.iter().zip(other.0.iter()).map(|(a, b)| a.checked_add(*b).expect("exponent overflow")).collect(),
        )
    }

    pub(crate) fn with_exp(&self, i: usize, e: u16) -> Monomial {
        let mut m = self.0.clone();
        m[i] = e;
        Monomial(m)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial in `nvars` variables `v1..v_nvars`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiPoly<C: Coeff = Rational> {
    nvars: usize,
    terms: Vec<(Monomial, C)>,
}

/// Hash-map accumulator used to build polynomials term by term.
pub struct PolyBuilder<C: Coeff> {
    nvars: usize,
    map: HashMap<Monomial, C>,
}

impl<C: Coeff> PolyBuilder<C> {
    pub fn new(nvars: usize) -> Self {
        PolyBuilder { nvars, map: HashMap::new() }
    }

    pub fn with_capacity(nvars: usize, cap: usize) -> Self {
        PolyBuilder { nvars, map: HashMap::with_capacity(cap) }
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.map.get_mut(&m) {
            Some(acc) => *acc += &c,
            None => {
                self.map.insert(m, c);
            }
        }
    }

    pub fn add_term_ref(&mut self, m: Monomial, c: &C) {
        match self.map.get_mut(&m) {
            Some(acc) => *acc += c,
            None => {
                if !c.is_zero() {
                    self.map.insert(m, c.clone());
                }
            }
        }
    }

    pub fn add_poly(&mut self, p: &MultiPoly<C>) {
        for (m, c) in &p.terms {
            self.add_term_ref(m.clone(), c);
        }
    }

    /// Adds `c * m * p`.
    pub fn add_scaled(&mut self, p: &MultiPoly<C>, m: &Monomial, c: &C) {
        for (pm, pc) in &p.terms {
            self.add_term(pm.mul(m), pc.mul_ref(c));
        }
    }

    pub fn finish(self) -> MultiPoly<C> {
        let mut terms: Vec<(Monomial, C)> = self.map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MultiPoly { nvars: self.nvars, terms }
    }
}

impl<C: Coeff> MultiPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        if c.is_zero() {
            return Self::zero(nvars);
        }
        MultiPoly { nvars, terms: vec![(Monomial::one(nvars), c)] }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    /// The coordinate `v_{i+1}` (0-based `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        MultiPoly { nvars, terms: vec![(Monomial::var(nvars, i, 1), C::one())] }
    }

    pub fn monomial(m: Monomial, c: C) -> Self {
        let nvars = m.nvars();
        if c.is_zero() {
            return Self::zero(nvars);
        }
        MultiPoly { nvars, terms: vec![(m, c)] }
    }

    /// Builds from `(exponents, coefficient)` pairs, merging repeats.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u16>, C)>,
    {
        let mut b = PolyBuilder::new(nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::VarCountMismatch { expected: nvars, found: exps.len() });
            }
            b.add_term(Monomial::new(exps), c);
        }
        Ok(b.finish())
    }

    /// `v_1^2 + ... + v_nvars^2`.
    pub fn sum_of_squares(nvars: usize) -> Self {
        let mut b = PolyBuilder::new(nvars);
        for i in 0..nvars {
            b.add_term(Monomial::var(nvars, i, 2), C::one());
        }
        b.finish()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; zero for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|(m, _)| m.degree()).unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.total_degree() == 0
    }

    pub fn constant_term(&self) -> C {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => C::zero(),
        }
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.iter().map(|(m, _)| m.exps()[var]).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => {
                let d = m.degree();
                self.terms.iter().all(|(m, _)| m.degree() == d)
            }
        }
    }

    /// Homogeneous components as `(degree, part)`, highest degree first.
    pub fn homogeneous_parts(&self) -> Vec<(u32, MultiPoly<C>)> {
        let mut out: Vec<(u32, MultiPoly<C>)> = Vec::new();
        for (m, c) in &self.terms {
            let d = m.degree();
            match out.last_mut() {
                Some((ld, p)) if *ld == d => p.terms.push((m.clone(), c.clone())),
                _ => out.push((d, MultiPoly { nvars: self.nvars, terms: vec![(m.clone(), c.clone())] })),
            }
        }
        out
    }

    fn check_nvars(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VarCountMismatch { expected: self.nvars, found: other.nvars });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_nvars(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_nvars(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_nvars(other)?;
        Ok(self.mul_unchecked(other))
    }

    // sorted merge of two canonical term lists
    fn merge(&self, other: &Self, negate: bool) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => Ordering::Greater,
                _ => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    terms.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -b[j].1.clone() } else { b[j].1.clone() };
                    terms.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let mut c = a[i].1.clone();
                    if negate {
                        c -= &b[j].1;
                    } else {
                        c += &b[j].1;
                    }
                    if !c.is_zero() {
                        terms.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        MultiPoly { nvars: self.nvars, terms }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars);
        }
        if core::ptr::eq(self, other) {
            return self.square();
        }
        let mut b = PolyBuilder::with_capacity(self.nvars, self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                b.add_term(m1.mul(m2), c1.mul_ref(c2));
            }
        }
        b.finish()
    }

    /// `self^2`, using the symmetry of the product.
    pub fn square(&self) -> Self {
        let n = self.terms.len();
        let mut b = PolyBuilder::with_capacity(self.nvars, n * (n + 1) / 2);
        let two = C::from_int(2);
        for (i, (m1, c1)) in self.terms.iter().enumerate() {
            b.add_term(m1.mul(m1), c1.mul_ref(c1));
            let c1x2 = c1.mul_ref(&two);
            for (m2, c2) in &self.terms[i + 1..] {
                b.add_term(m1.mul(m2), c1x2.mul_ref(c2));
            }
        }
        b.finish()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        result
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, x)| (m.clone(), x.mul_ref(c))).collect() }
    }

    /// Multiplies by a monomial.
    pub fn shift(&self, m: &Monomial) -> Self {
        MultiPoly { nvars: self.nvars, terms: self.terms.iter().map(|(pm, c)| (pm.mul(m), c.clone())).collect() }
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> MultiPoly<D> {
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let d = f(c);
                (!d.is_zero()).then(|| (m.clone(), d))
            })
            .collect();
        MultiPoly { nvars: self.nvars, terms }
    }

    /// Conjugates the coefficients (variables are real).
    pub fn conj(&self) -> Self {
        self.map_coeffs(|c| c.conj())
    }

    pub fn re_part(&self) -> MultiPoly<Rational> {
        self.map_coeffs(|c| c.re())
    }

    pub fn im_part(&self) -> MultiPoly<Rational> {
        self.map_coeffs(|c| c.im())
    }

    /// `∂/∂v_{var+1}`.
    pub fn derivative(&self, var: usize) -> Self {
        let mut b = PolyBuilder::new(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exps()[var];
            if e == 0 {
                continue;
            }
            b.add_term(m.with_exp(var, e - 1), c.mul_ref(&C::from_int(i64::from(e))));
        }
        b.finish()
    }

    /// Evaluates at a point of `C^nvars`.
    pub fn eval(&self, point: &[C]) -> Result<C> {
        if point.len() != self.nvars {
            return Err(Error::VarCountMismatch { expected: self.nvars, found: point.len() });
        }
        let mut powers: Vec<Vec<C>> = point.iter().map(|x| vec![C::one(), x.clone()]).collect();
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = &mut powers[i];
                while pw.len() <= usize::from(e) {
                    let next = pw[pw.len() - 1].mul_ref(&pw[1]);
                    pw.push(next);
                }
                t *= &pw[usize::from(e)];
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Evaluates at a real rational point.
    pub fn eval_rational(&self, point: &[Rational]) -> Result<C> {
        let p: Vec<C> = point.iter().cloned().map(C::from_rational).collect();
        self.eval(&p)
    }

    /// Substitutes `images[i]` for `v_{i+1}`; all images share one variable count.
    pub fn substitute(&self, images: &[MultiPoly<C>]) -> Result<MultiPoly<C>> {
        if images.len() != self.nvars {
            return Err(Error::Arity { expected: self.nvars, found: images.len() });
        }
        let target = match images.first() {
            Some(p) => p.nvars,
            None => 0,
        };
        if let Some(bad) = images.iter().find(|p| p.nvars != target) {
            return Err(Error::VarCountMismatch { expected: target, found: bad.nvars });
        }
        let mut powers: Vec<Vec<MultiPoly<C>>> =
            images.iter().map(|p| vec![MultiPoly::one(target), p.clone()]).collect();
        let mut acc = PolyBuilder::new(target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = &mut powers[i];
                while pw.len() <= usize::from(e) {
                    let next = pw[pw.len() - 1].mul_unchecked(&pw[1]);
                    pw.push(next);
                }
                t = t.mul_unchecked(&pw[usize::from(e)]);
                if t.is_zero() {
                    break;
                }
            }
            acc.add_poly(&t);
        }
        Ok(acc.finish())
    }

    /// Sets `v_{var+1} = 0` and removes that variable.
    pub fn drop_var(&self, var: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exps()[var] == 0)
            .map(|(m, c)| {
                let mut e = m.exps().to_vec();
                e.remove(var);
                (Monomial::new(e), c.clone())
            })
            .collect();
        MultiPoly { nvars: self.nvars - 1, terms }
    }

    /// Sets every variable from index `keep` on to zero and removes them.
    pub fn truncate_vars(&self, keep: usize) -> Self {
        let idx: Vec<usize> = (0..keep).collect();
        self.restrict_vars(&idx)
    }

    /// Sets every variable outside `keep` (sorted indices) to zero and renumbers the rest.
    pub fn restrict_vars(&self, keep: &[usize]) -> Self {
        let mut kept = vec![false; self.nvars];
        for &i in keep {
            kept[i] = true;
        }
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exps().iter().zip(&kept).all(|(&e, &k)| k || e == 0))
            .map(|(m, c)| (Monomial::new(keep.iter().map(|&i| m.exps()[i]).collect()), c.clone()))
            .collect();
        MultiPoly { nvars: keep.len(), terms }
    }

    /// Re-embeds into `new_nvars` variables, sending `v_{i+1}` to `v_{map[i]+1}`.
    pub fn reindex(&self, new_nvars: usize, map: &[usize]) -> Self {
        let mut b = PolyBuilder::new(new_nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0u16; new_nvars];
            for (i, &x) in m.exps().iter().enumerate() {
                e[map[i]] += x;
            }
            b.add_term(Monomial::new(e), c.clone());
        }
        b.finish()
    }
}

impl MultiPoly<Rational> {
    /// Views a real polynomial as one with Gaussian coefficients.
    pub fn to_gaussian(&self) -> MultiPoly<GaussianRational> {
        self.map_coeffs(|c| GaussianRational::from(c.clone()))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a, C: Coeff> $tr<&'a MultiPoly<C>> for &'a MultiPoly<C> {
            type Output = MultiPoly<C>;
            fn $method(self, rhs: &'a MultiPoly<C>) -> MultiPoly<C> {
                self.$checked(rhs).expect("polynomial variable counts differ")
            }
        }

        impl<C: Coeff> $tr for MultiPoly<C> {
            type Output = MultiPoly<C>;
            fn $method(self, rhs: MultiPoly<C>) -> MultiPoly<C> {
                self.$checked(&rhs).expect("polynomial variable counts differ")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl<C: Coeff> Neg for MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn neg(self) -> MultiPoly<C> {
        MultiPoly { nvars: self.nvars, terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl<C: Coeff> fmt::Display for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let mut parts = Vec::new();
            let show_coeff = !c.is_one() || m.is_one();
            if show_coeff {
                parts.push(if C::COMPLEX { format!("({c})") } else { format!("{c}") });
            }
            for (i, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(format!("v{}", i + 1)),
                    _ => parts.push(format!("v{}^{}", i + 1, e)),
                }
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use alloc::string::ToString;

    type P = MultiPoly<Rational>;

    fn v(n: usize, i: usize) -> P {
        P::var(n, i)
    }

    #[test]
    fn add_two_variables() {
        let s = &v(2, 0) + &v(2, 1);
        assert_eq!(s.len(), 2);
        assert_eq!(s.to_string(), "v1 + v2");
    }

    #[test]
    fn binomial_substitution() {
        let p = v(2, 0).pow(2);
        let q = p.substitute(&[&v(2, 0) + &v(2, 1), v(2, 1)]).unwrap();
        let expected = &(&v(2, 0).pow(2) + &v(2, 0).mul(v(2, 1)).scale(&int(2))) + &v(2, 1).pow(2);
        assert_eq!(q, expected);
    }

    #[test]
    fn difference_of_squares() {
        let a = &v(2, 0).pow(2) - &v(2, 1).pow(2);
        let b = &v(2, 0).pow(2) + &v(2, 1).pow(2);
        assert_eq!(&a * &b, &v(2, 0).pow(4) - &v(2, 1).pow(4));
    }

    #[test]
    fn substitution_arity_checked() {
        let p = v(2, 0);
        assert!(matches!(p.substitute(&[v(2, 0)]), Err(Error::Arity { .. })));
        assert!(matches!(p.checked_add(&v(3, 0)), Err(Error::VarCountMismatch { .. })));
    }

    #[test]
    fn square_matches_product() {
        let p = &(&v(3, 0).scale(&rat(1, 3)) + &v(3, 1).pow(2)) - &P::one(3);
        assert_eq!(p.square(), p.clone().mul(p.clone()));
        assert_eq!(p.pow(3), &p.square() * &p);
    }

    #[test]
    fn derivative_and_eval() {
        let p = &v(2, 0).pow(3) + &v(2, 1).scale(&int(5));
        assert_eq!(p.derivative(0), v(2, 0).pow(2).scale(&int(3)));
        assert_eq!(p.eval(&[int(2), rat(1, 5)]).unwrap(), int(9));
    }

    #[test]
    fn canonical_order_is_graded() {
        let p = &(&v(2, 1) + &v(2, 0).pow(2)) + &P::one(2);
        let degs: Vec<u32> = p.terms().iter().map(|(m, _)| m.degree()).collect();
        assert_eq!(degs, vec![2, 1, 0]);
        assert_eq!(p.constant_term(), int(1));
        assert_eq!(p.homogeneous_parts().len(), 3);
    }
}
