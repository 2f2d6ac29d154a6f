//! Clifford systems, normed bilinear maps and the Hopf construction.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::maps::{compose, equatorial_inclusion, SphereMap};
use crate::poly::MultiPoly;
use crate::scalar::{int, Rational};

/// `ρ(m) = 8d + 2^c` for `m = odd · 2^{c + 4d}`, `0 ≤ c ≤ 3`.
pub fn radon_hurwitz(m: u64) -> u64 {
    assert!(m >= 1, "Radon-Hurwitz number needs m >= 1");
    let k = m.trailing_zeros() as u64;
    let (d, c) = (k / 4, k % 4);
    8 * d + (1 << c)
}

/// Anticommuting orthogonal complex structures `J_1, ..., J_k` on `R^dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordSystem {
    dim: usize,
    structures: Vec<Matrix<i64>>,
}

impl CliffordSystem {
    pub fn new(dim: usize, structures: Vec<Matrix<i64>>) -> Result<Self> {
        if let Some(bad) = structures.iter().find(|j| j.rows() != dim || j.cols() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "structure of size {}x{} on R^{dim}",
                bad.rows(),
                bad.cols()
            )));
        }
        Ok(CliffordSystem { dim, structures })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structures(&self) -> &[Matrix<i64>] {
        &self.structures
    }

    pub fn len(&self) -> usize {
        self.structures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.structures.is_empty()
    }

    /// Checks `JᵢᵀJᵢ = I`, `Jᵢ² = -I` and `JᵢJⱼ + JⱼJᵢ = 0`; returns the first violation.
    pub fn check(&self) -> Result<()> {
        let id = Matrix::<i64>::identity(self.dim);
        for (i, a) in self.structures.iter().enumerate() {
            if !a.transpose().mul(a).is_identity() {
                return Err(Error::Unverified(format!("J{} is not orthogonal", i + 1)));
            }
            if a.mul(a) != id.neg() {
                return Err(Error::Unverified(format!("J{} does not square to -I", i + 1)));
            }
            for (j, b) in self.structures.iter().enumerate().skip(i + 1) {
                if !a.mul(b).add(&b.mul(a)).is_zero() {
                    return Err(Error::Unverified(format!("J{} and J{} do not anticommute", i + 1, j + 1)));
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.check().is_ok()
    }

    /// The first `k` structures.
    pub fn truncate(&self, k: usize) -> Self {
        CliffordSystem { dim: self.dim, structures: self.structures[..k.min(self.len())].to_vec() }
    }
}

// Cayley-Dickson product on R^{2^k}: (a,b)(c,d) = (ac - d̄b, da + bc̄)
fn cd_mul(x: &[i64], y: &[i64]) -> Vec<i64> {
    let n = x.len();
    if n == 1 {
        return vec![x[0] * y[0]];
    }
    let h = n / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let ac = cd_mul(a, c);
    let dbar_b = cd_mul(&cd_conj(d), b);
    let da = cd_mul(d, a);
    let b_cbar = cd_mul(b, &cd_conj(c));
    let mut out: Vec<i64> = ac.iter().zip(&dbar_b).map(|(p, q)| p - q).collect();
    out.extend(da.iter().zip(&b_cbar).map(|(p, q)| p + q));
    out
}

fn cd_conj(x: &[i64]) -> Vec<i64> {
    let mut out: Vec<i64> = x.iter().map(|v| -v).collect();
    out[0] = x[0];
    out
}

// left multiplications by the imaginary units of the algebra of dimension n ∈ {2, 4, 8}
fn cayley_dickson_units(n: usize) -> Vec<Matrix<i64>> {
    (1..n)
        .map(|a| {
            let mut unit = vec![0i64; n];
            unit[a] = 1;
            let mut m = Matrix::zeros(n, n);
            for j in 0..n {
                let mut e = vec![0i64; n];
                e[j] = 1;
                for (i, v) in cd_mul(&unit, &e).into_iter().enumerate() {
                    m[(i, j)] = v;
                }
            }
            m
        })
        .collect()
}

// eight anticommuting structures on R^16 and their volume element
fn sixteen_dim_generators() -> (Vec<Matrix<i64>>, Matrix<i64>) {
    let z = Matrix::from_rows(vec![vec![1i64, 0], vec![0, -1]]).expect("2x2");
    let eps = Matrix::from_rows(vec![vec![0i64, -1], vec![1, 0]]).expect("2x2");
    let mut gens: Vec<Matrix<i64>> = cayley_dickson_units(8).iter().map(|e| e.kron(&z)).collect();
    gens.push(Matrix::identity(8).kron(&eps));
    let mut omega = Matrix::identity(16);
    for g in &gens {
        omega = omega.mul(g);
    }
    (gens, omega)
}

fn power_of_two_system(k: u32) -> Vec<Matrix<i64>> {
    match k {
        0 => Vec::new(),
        1..=3 => cayley_dickson_units(1 << k),
        _ => {
            let inner = power_of_two_system(k - 4);
            let size = 1usize << (k - 4);
            let (gens, omega) = sixteen_dim_generators();
            let mut out: Vec<Matrix<i64>> = inner.iter().map(|j| j.kron(&omega)).collect();
            let id = Matrix::<i64>::identity(size);
            out.extend(gens.iter().map(|g| id.kron(g)));
            out
        }
    }
}

/// A Clifford system on `R^m` with `ρ(m) - 1` structures.
pub fn clifford_system(m: usize) -> CliffordSystem {
    assert!(m >= 1, "Clifford system needs m >= 1");
    let k = m.trailing_zeros();
    let odd = m >> k;
    let structures = power_of_two_system(k).iter().map(|j| j.block_repeat(odd)).collect();
    CliffordSystem { dim: m, structures }
}

/// Bilinear `F: R^r × R^s -> R^t`, `F_k(x, y) = Σ T[k][i][j] x_i y_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormedBilinear {
    r: usize,
    s: usize,
    t: usize,
    tensor: Vec<Rational>,
}

impl NormedBilinear {
    pub fn new(r: usize, s: usize, t: usize, tensor: Vec<Rational>) -> Result<Self> {
        if tensor.len() != r * s * t {
            return Err(Error::DimensionMismatch(format!(
                "{} tensor entries for a {t}x{r}x{s} bilinear map",
                tensor.len()
            )));
        }
        if r == 0 || s == 0 || t == 0 {
            return Err(Error::DimensionMismatch("bilinear map dimensions must be positive".into()));
        }
        Ok(NormedBilinear { r, s, t, tensor })
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.r, self.s, self.t)
    }

    pub fn tensor(&self) -> &[Rational] {
        &self.tensor
    }

    pub fn coeff(&self, k: usize, i: usize, j: usize) -> &Rational {
        &self.tensor[(k * self.r + i) * self.s + j]
    }

    /// Components `F_k` as polynomials in `x_1..x_r, y_1..y_s` (in that order).
    pub fn components(&self) -> Vec<MultiPoly> {
        let n = self.r + self.s;
        (0..self.t)
            .map(|k| {
                let mut p = MultiPoly::zero(n);
                for i in 0..self.r {
                    for j in 0..self.s {
                        let c = self.coeff(k, i, j);
                        if !c.is_zero() {
                            let xy = &MultiPoly::var(n, i) * &MultiPoly::var(n, self.r + j);
                            p = &p + &xy.scale(c);
                        }
                    }
                }
                p
            })
            .collect()
    }

    pub fn eval(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        (0..self.t)
            .map(|k| {
                let mut acc = Rational::zero();
                for (i, xi) in x.iter().enumerate() {
                    for (j, yj) in y.iter().enumerate() {
                        acc += self.coeff(k, i, j) * xi * yj;
                    }
                }
                acc
            })
            .collect()
    }
}

/// `F(x, y) = y_0 x + Σ_j y_j J_j x`, using all structures of the system.
pub fn normed_bilinear_from_clifford(cs: &CliffordSystem) -> Result<NormedBilinear> {
    cs.check()?;
    let m = cs.dim;
    let s = cs.len() + 1;
    let mut tensor = vec![Rational::zero(); m * m * s];
    for k in 0..m {
        tensor[(k * m + k) * s] = Rational::one();
        for (j, jm) in cs.structures.iter().enumerate() {
            for i in 0..m {
                let v = jm[(k, i)];
                if v != 0 {
                    tensor[(k * m + i) * s + j + 1] = int(v);
                }
            }
        }
    }
    NormedBilinear::new(m, s, m, tensor)
}

/// True when `|F(x,y)|^2 = |x|^2 |y|^2` as a polynomial identity.
pub fn verify_normed(f: &NormedBilinear) -> bool {
    let n = f.r + f.s;
    let mut lhs = MultiPoly::zero(n);
    for c in f.components() {
        lhs = &lhs + &c.square();
    }
    let x2 = sum_of_squares_range(n, 0, f.r);
    let y2 = sum_of_squares_range(n, f.r, n);
    lhs == &x2 * &y2
}

fn sum_of_squares_range(nvars: usize, from: usize, to: usize) -> MultiPoly {
    let mut p = MultiPoly::zero(nvars);
    for i in from..to {
        p = &p + &MultiPoly::var(nvars, i).pow(2);
    }
    p
}

/// `H(x, y) = (|x|^2 - |y|^2, 2F(x, y))`, a map `S^{r+s-1} -> S^t`.
pub fn hopf_construction(f: &NormedBilinear) -> Result<SphereMap> {
    if !verify_normed(f) {
        return Err(Error::Unverified("bilinear map is not norm-multiplicative".into()));
    }
    let n = f.r + f.s;
    let first = &sum_of_squares_range(n, 0, f.r) - &sum_of_squares_range(n, f.r, n);
    let two = int(2);
    let mut coords = vec![first];
    coords.extend(f.components().iter().map(|c| c.scale(&two)));
    SphereMap::new(n - 1, coords)
}

/// The Hopf map `S^{m+s-1} -> S^m` built from the first `s - 1` structures on `R^m`.
pub fn clifford_hopf_map(m: usize, s: usize) -> Result<SphereMap> {
    let cs = clifford_system(m);
    if s == 0 || s > cs.len() + 1 {
        return Err(Error::OutOfRange(format!("R^{m} carries at most {} structures", cs.len())));
    }
    hopf_construction(&normed_bilinear_from_clifford(&cs.truncate(s - 1))?)
}

/// The quadratic map `S^{2k+1} -> S^{2k}` from `F(x, y) = y_1 x + y_2 J x`.
pub fn odd_sphere_fibration(k: usize) -> Result<SphereMap> {
    if k < 1 {
        return Err(Error::OutOfRange("odd sphere fibration needs k >= 1".into()));
    }
    let eps = Matrix::from_rows(vec![vec![0i64, -1], vec![1, 0]]).expect("2x2");
    let cs = CliffordSystem::new(2 * k, vec![eps.block_repeat(k)])?;
    hopf_construction(&normed_bilinear_from_clifford(&cs)?)
}

/// Source coordinates of a great `S^n` inside the source `S^{r+s-1}` of a Hopf map on
/// `R^r × R^s`, keeping both factors so the restriction stays non-constant.
pub fn hopf_restriction_coords(r: usize, s: usize, n: usize) -> Vec<usize> {
    assert!(n >= 1 && n < r + s, "great sphere must be proper and nontrivial");
    let xs = (n + 1).saturating_sub(s).max(1).min(r);
    let ys = n + 1 - xs;
    (0..xs).chain(r..r + ys).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChainName {
    /// `S^31 -> S^24 -> S^16`.
    S31ToS16,
    /// `S^47 -> S^40 ↪ S^41 -> S^32`.
    S47ToS32,
}

impl ChainName {
    pub fn name(self) -> &'static str {
        match self {
            ChainName::S31ToS16 => "S31_to_S16",
            ChainName::S47ToS32 => "S47_to_S32",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "S31_to_S16" => Ok(ChainName::S31ToS16),
            "S47_to_S32" => Ok(ChainName::S47ToS32),
            other => Err(Error::UnknownName(other.into())),
        }
    }

    pub fn source_dim(self) -> usize {
        match self {
            ChainName::S31ToS16 => 31,
            ChainName::S47ToS32 => 47,
        }
    }

    pub fn target_dim(self) -> usize {
        match self {
            ChainName::S31ToS16 => 16,
            ChainName::S47ToS32 => 32,
        }
    }
}

/// Composite Hopf maps into `S^16` and `S^32`.
pub fn chain_witness(name: ChainName) -> Result<SphereMap> {
    match name {
        ChainName::S31ToS16 => {
            let first = clifford_hopf_map(24, 8)?;
            let second = clifford_hopf_map(16, 9)?;
            compose(&first, &second)
        }
        ChainName::S47ToS32 => {
            let first = clifford_hopf_map(40, 8)?;
            let lifted = compose(&first, &equatorial_inclusion(40))?;
            let second = clifford_hopf_map(32, 10)?;
            compose(&lifted, &second)
        }
    }
}
