//! Exterior algebra of `R^{2n}`: Hodge star, self-dual splitting and the intertwiner
//! `p(v)α = 2Π⁻(v ∧ ⋆(α ∧ v))` from `Λ⁺` to `Λ⁻`.
//!
//! The orthonormal bases `α_I^± = √2 Π^±(e_1 ∧ e_I)` are kept implicit: we store
//! `β_I^± = Π^±(e_1 ∧ e_I)`, so every matrix entry `⟨Lα_I, α_J⟩ = 2⟨Lβ_I, β_J⟩` is exact.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{rank, rational_rotation, Matrix};
use crate::maps::SphereMap;
use crate::poly::MultiPoly;
use crate::scalar::{Coeff, GaussianRational, Rational};
use crate::sphere::{norm_sqr, rational_sphere_points};

/// `Λ^*(R^dim)` with the standard orientation `e_1 ∧ ... ∧ e_dim`; blades are bitmasks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeContext {
    dim: usize,
    bases: Vec<Vec<u16>>,
    index: Vec<usize>,
}

impl HodgeContext {
    /// Context for `R^dim`, `dim` even with `2 ≤ dim ≤ 16`.
    pub fn new(dim: usize) -> Result<Self> {
        if !(2..=16).contains(&dim) || !dim.is_multiple_of(2) {
            return Err(Error::OutOfRange(format!("ambient dimension {dim} must be even in 2..=16")));
        }
        let mut bases = vec![Vec::new(); dim + 1];
        for (k, basis) in bases.iter_mut().enumerate() {
            combinations(dim, k, &mut |mask| basis.push(mask));
        }
        let mut index = vec![0; 1 << dim];
        for basis in &bases {
            for (i, &m) in basis.iter().enumerate() {
                index[usize::from(m)] = i;
            }
        }
        Ok(HodgeContext { dim, bases, index })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `n` for `R^{2n}`.
    pub fn half(&self) -> usize {
        self.dim / 2
    }

    /// True when the middle-degree star squares to `-1` and Gaussian coefficients are needed.
    pub fn needs_complex(&self) -> bool {
        self.half() % 2 == 1
    }

    /// Lexicographic basis of `Λ^k`.
    pub fn basis(&self, k: usize) -> &[u16] {
        &self.bases[k]
    }

    pub fn grade_dim(&self, k: usize) -> usize {
        self.bases[k].len()
    }

    pub fn index_of(&self, mask: u16) -> usize {
        self.index[usize::from(mask)]
    }

    pub fn zero<C: Coeff>(&self, grade: usize) -> ExtElement<C> {
        ExtElement { grade, coeffs: vec![C::zero(); self.grade_dim(grade)] }
    }

    /// `e_{i_1} ∧ ... ∧ e_{i_k}` for the set bits of `mask`.
    pub fn blade<C: Coeff>(&self, mask: u16) -> ExtElement<C> {
        let grade = mask.count_ones() as usize;
        let mut out = self.zero(grade);
        out.coeffs[self.index_of(mask)] = C::one();
        out
    }

    pub fn vector<C: Coeff>(&self, v: &[C]) -> Result<ExtElement<C>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch(format!("vector of length {} in R^{}", v.len(), self.dim)));
        }
        Ok(ExtElement { grade: 1, coeffs: v.to_vec() })
    }

    pub fn wedge<C: Coeff>(&self, a: &ExtElement<C>, b: &ExtElement<C>) -> ExtElement<C> {
        let grade = a.grade + b.grade;
        if grade > self.dim {
            return ExtElement { grade, coeffs: Vec::new() };
        }
        let mut out = self.zero(grade);
        for (i, x) in a.coeffs.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            let ma = self.bases[a.grade][i];
            for (j, y) in b.coeffs.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                let mb = self.bases[b.grade][j];
                if ma & mb != 0 {
                    continue;
                }
                let t = x.mul_ref(y);
                let slot = &mut out.coeffs[self.index_of(ma | mb)];
                if wedge_sign(ma, mb) {
                    *slot -= &t;
                } else {
                    *slot += &t;
                }
            }
        }
        out
    }

    /// `⋆e_I = sign(I, I^c) e_{I^c}`.
    pub fn star<C: Coeff>(&self, a: &ExtElement<C>) -> ExtElement<C> {
        let full: u16 = ((1u32 << self.dim) - 1) as u16;
        let mut out = self.zero(self.dim - a.grade);
        for (i, x) in a.coeffs.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            let m = self.bases[a.grade][i];
            let c = full & !m;
            let slot = &mut out.coeffs[self.index_of(c)];
            *slot = if wedge_sign(m, c) { -x.clone() } else { x.clone() };
        }
        out
    }

    /// `⟨a, b⟩ = Σ a_I conj(b_I)`; lexicographic blades are orthonormal.
    pub fn inner<C: Coeff>(&self, a: &ExtElement<C>, b: &ExtElement<C>) -> C {
        assert_eq!(a.grade, b.grade, "inner product of different grades");
        let mut acc = C::zero();
        for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
            if !x.is_zero() && !y.is_zero() {
                acc += &x.mul_ref(&y.conj());
            }
        }
        acc
    }

    /// `Π^±` on the middle degree: `(id ± ⋆)/2` for `n` even, `(id ∓ i⋆)/2` for `n` odd.
    pub fn project<C: Coeff>(&self, sign: Sign, a: &ExtElement<C>) -> Result<ExtElement<C>> {
        if a.grade != self.half() {
            return Err(Error::DimensionMismatch(format!("Π± acts on Λ^{}, got grade {}", self.half(), a.grade)));
        }
        let mut s = self.star(a);
        if self.needs_complex() {
            let i = C::imaginary_unit().ok_or(Error::NeedsComplex)?;
            s = s.scale(&-i);
        }
        if sign == Sign::Minus {
            s = s.scale(&-C::one());
        }
        let half = C::from_int(2).inv();
        Ok(a.add(&s).scale(&half))
    }

    pub fn projector_matrix<C: Coeff>(&self, sign: Sign) -> Result<Matrix<C>> {
        let n = self.half();
        let d = self.grade_dim(n);
        let mut m = Matrix::zeros(d, d);
        for (j, &mask) in self.bases[n].iter().enumerate() {
            let col = self.project(sign, &self.blade::<C>(mask))?;
            for (i, c) in col.coeffs.into_iter().enumerate() {
                m[(i, j)] = c;
            }
        }
        Ok(m)
    }

    /// Matrix of `Λ^k R` on the lexicographic basis.
    pub fn exterior_power<C: Coeff>(&self, r: &Matrix<C>, k: usize) -> Result<Matrix<C>> {
        if r.rows() != self.dim || r.cols() != self.dim {
            return Err(Error::DimensionMismatch(format!("{}x{} matrix on R^{}", r.rows(), r.cols(), self.dim)));
        }
        let cols: Vec<ExtElement<C>> = (0..self.dim).map(|j| ExtElement { grade: 1, coeffs: r.column(j) }).collect();
        let d = self.grade_dim(k);
        let mut out = Matrix::zeros(d, d);
        for (j, &mask) in self.bases[k].iter().enumerate() {
            let mut acc = self.blade::<C>(0);
            for (b, col) in cols.iter().enumerate().take(self.dim) {
                if mask & (1 << b) != 0 {
                    acc = self.wedge(&acc, col);
                }
            }
            for (i, c) in acc.coeffs.into_iter().enumerate() {
                out[(i, j)] = c;
            }
        }
        Ok(out)
    }
}

// sign of moving e_a ∧ e_b into increasing order; true means negative
fn wedge_sign(a: u16, b: u16) -> bool {
    let mut swaps = 0u32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        swaps += (u32::from(a) >> (j + 1)).count_ones();
        bb &= bb - 1;
    }
    swaps % 2 == 1
}

// k-subsets of {0..n} in lexicographic order of their index sequences
fn combinations(n: usize, k: usize, f: &mut impl FnMut(u16)) {
    fn go(start: usize, n: usize, k: usize, acc: u16, f: &mut impl FnMut(u16)) {
        if k == 0 {
            f(acc);
            return;
        }
        for i in start..=n - k {
            go(i + 1, n, k - 1, acc | (1 << i), f);
        }
    }
    go(0, n, k, 0, f);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// A homogeneous element of `Λ^grade` in the lexicographic blade basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtElement<C: Coeff> {
    grade: usize,
    coeffs: Vec<C>,
}

impl<C: Coeff> ExtElement<C> {
    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.grade, other.grade);
        ExtElement {
            grade: self.grade,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add_ref(b)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.grade, other.grade);
        ExtElement {
            grade: self.grade,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub_ref(b)).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        ExtElement { grade: self.grade, coeffs: self.coeffs.iter().map(|a| a.mul_ref(c)).collect() }
    }

    pub fn apply(&self, m: &Matrix<C>) -> Self {
        ExtElement { grade: self.grade, coeffs: m.mul_vec(&self.coeffs) }
    }
}

/// `Λ^n = Λ⁺ ⊕ Λ⁻` with the bases `β_I^± = Π^±(e_1 ∧ e_I)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfDualSplit<C: Coeff> {
    pub plus: Vec<ExtElement<C>>,
    pub minus: Vec<ExtElement<C>>,
}

/// The self-dual splitting of the middle degree; `C` must contain `i` when `n` is odd.
pub fn sd_split<C: Coeff>(ctx: &HodgeContext) -> Result<SelfDualSplit<C>> {
    if ctx.needs_complex() && !C::COMPLEX {
        return Err(Error::NeedsComplex);
    }
    let n = ctx.half();
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for &mask in ctx.basis(n).iter().filter(|&&m| m & 1 == 1) {
        let e = ctx.blade::<C>(mask);
        plus.push(ctx.project(Sign::Plus, &e)?);
        minus.push(ctx.project(Sign::Minus, &e)?);
    }
    Ok(SelfDualSplit { plus, minus })
}

impl<C: Coeff> SelfDualSplit<C> {
    pub fn dim(&self) -> usize {
        self.plus.len()
    }

    /// Matrix `⟨L α_I^from, α_J^to⟩` of a linear map given on representatives.
    pub fn matrix_of(
        &self,
        ctx: &HodgeContext,
        from: Sign,
        to: Sign,
        mut image: impl FnMut(&ExtElement<C>) -> ExtElement<C>,
    ) -> Matrix<C> {
        let (src, dst) = (self.basis(from), self.basis(to));
        let two = C::from_int(2);
        let mut m = Matrix::zeros(dst.len(), src.len());
        for (i, b) in src.iter().enumerate() {
            let y = image(b);
            for (j, t) in dst.iter().enumerate() {
                m[(j, i)] = ctx.inner(&y, t).mul_ref(&two);
            }
        }
        m
    }

    pub fn basis(&self, sign: Sign) -> &[ExtElement<C>] {
        match sign {
            Sign::Plus => &self.plus,
            Sign::Minus => &self.minus,
        }
    }
}

fn p_apply<C: Coeff>(ctx: &HodgeContext, v: &ExtElement<C>, w: &ExtElement<C>, x: &ExtElement<C>) -> ExtElement<C> {
    let inner = ctx.star(&ctx.wedge(x, w));
    let y = ctx.wedge(v, &inner);
    ctx.project(Sign::Minus, &y).expect("middle degree").scale(&C::from_int(2))
}

/// Matrix of `p(v): Λ⁺ -> Λ⁻` in the orthonormal `α` bases.
pub fn intertwiner_p<C: Coeff>(ctx: &HodgeContext, split: &SelfDualSplit<C>, v: &[Rational]) -> Result<Matrix<C>> {
    if v.len() != ctx.dim() {
        return Err(Error::DimensionMismatch(format!("vector of length {} in R^{}", v.len(), ctx.dim())));
    }
    if !norm_sqr(v).is_one() {
        return Err(Error::NotUnit);
    }
    let w = ctx.vector(&v.iter().cloned().map(C::from_rational).collect::<Vec<_>>())?;
    Ok(split.matrix_of(ctx, Sign::Plus, Sign::Minus, |x| p_apply(ctx, &w, &w, x)))
}

/// `p(v)` with entries quadratic polynomials in `v_1, ..., v_{2n}`.
pub fn intertwiner_poly<C: Coeff>(ctx: &HodgeContext, split: &SelfDualSplit<C>) -> Matrix<MultiPoly<C>> {
    let d = ctx.dim();
    let size = split.dim();
    let mut out = Matrix::from_fn(size, size, |_, _| MultiPoly::zero(d));
    for a in 0..d {
        let ea = ctx.blade::<C>(1 << a);
        for b in 0..d {
            let eb = ctx.blade::<C>(1 << b);
            let m = split.matrix_of(ctx, Sign::Plus, Sign::Minus, |x| p_apply(ctx, &ea, &eb, x));
            let vab = &MultiPoly::var(d, a) * &MultiPoly::var(d, b);
            for j in 0..size {
                for i in 0..size {
                    let c = &m[(j, i)];
                    if !c.is_zero() {
                        out[(j, i)] = &out[(j, i)] + &vab.scale(c);
                    }
                }
            }
        }
    }
    out
}

/// `v ↦` coordinates of `p(v)α_1⁺` in `(α_1⁻, α_2⁻, α_3⁻)`, a map `S^3 -> S^2`.
pub fn extract_fiber_map(ctx: &HodgeContext) -> Result<SphereMap> {
    if ctx.dim() != 4 {
        return Err(Error::DimensionMismatch(format!("fiber map needs R^4, got R^{}", ctx.dim())));
    }
    let split = sd_split::<Rational>(ctx)?;
    let p = intertwiner_poly(ctx, &split);
    SphereMap::new(3, p.column(0))
}

/// `(v₁²+v₂²−v₃²−v₄², 2(v₂v₃−v₁v₄), 2(v₁v₃+v₂v₄))`, the classical form of the Hopf map.
pub fn classical_hopf_map() -> SphereMap {
    let v = |i| MultiPoly::<Rational>::var(4, i);
    let sq = |i| &v(i) * &v(i);
    let two = Rational::from_integer(2.into());
    let coords = alloc::vec![
        &(&sq(0) + &sq(1)) - &(&sq(2) + &sq(3)),
        (&(&v(1) * &v(2)) - &(&v(0) * &v(3))).scale(&two),
        (&(&v(0) * &v(2)) + &(&v(1) * &v(3))).scale(&two),
    ];
    SphereMap::new(3, coords).expect("four variables")
}

/// Coordinatewise equality, modulo the sphere ideal, of the extracted fiber map and the classical form.
pub fn fiber_map_matches_hopf() -> Result<bool> {
    let f = extract_fiber_map(&HodgeContext::new(4)?)?;
    let h = classical_hopf_map();
    let ctx = crate::sphere::SphereContext::for_sphere(3);
    for (a, b) in f.coords().iter().zip(h.coords()) {
        if !ctx.equal_mod(a, b)? {
            return Ok(false);
        }
    }
    Ok(f.target_dim() == h.target_dim())
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EquivarianceReport {
    pub trials: usize,
    /// Trials where `p(Rv) ∘ ΛⁿR ≠ ΛⁿR ∘ p(v)` on `Λ⁺`.
    pub failures: usize,
    /// Trials where `p(v)` or `p(Rv)` was not an isometry.
    pub isometry_failures: usize,
    /// Trials where `ΛⁿR` was not orthogonal or did not commute with `⋆`.
    pub lambda_failures: usize,
}

impl EquivarianceReport {
    pub fn pass(&self) -> bool {
        self.failures == 0 && self.isometry_failures == 0 && self.lambda_failures == 0
    }
}

/// True when `M*M = I`.
pub fn is_isometry<C: Coeff>(m: &Matrix<C>) -> bool {
    m.is_unitary()
}

/// One equivariance trial for an explicit rotation and unit vector.
pub fn check_equivariance<C: Coeff>(
    ctx: &HodgeContext,
    split: &SelfDualSplit<C>,
    r: &Matrix<Rational>,
    v: &[Rational],
) -> Result<EquivarianceReport> {
    let rc = Matrix::from_fn(r.rows(), r.cols(), |i, j| C::from_rational(r[(i, j)].clone()));
    let n = ctx.half();
    let lam = ctx.exterior_power(&rc, n)?;
    let mut report = EquivarianceReport { trials: 1, ..Default::default() };
    let orthogonal = is_isometry(&lam);
    // Λⁿ⋆ is a signed permutation, so Λⁿ·⋆ = ⋆·Λⁿ is checked column by column
    let commutes = ctx.basis(n).iter().enumerate().all(|(j, &mask)| {
        let col = ExtElement { grade: n, coeffs: lam.column(j) };
        let star_e = ctx.star(&ctx.blade::<C>(mask));
        let lam_star = star_e.apply(&lam);
        ctx.star(&col) == lam_star
    });
    if !orthogonal || !commutes {
        report.lambda_failures = 1;
    }
    let rv = r.mul_vec(v);
    let pv = intertwiner_p(ctx, split, v)?;
    let prv = intertwiner_p(ctx, split, &rv)?;
    if !is_isometry(&pv) || !is_isometry(&prv) {
        report.isometry_failures = 1;
    }
    let a_plus = split.matrix_of(ctx, Sign::Plus, Sign::Plus, |x| x.apply(&lam));
    let a_minus = split.matrix_of(ctx, Sign::Minus, Sign::Minus, |x| x.apply(&lam));
    if prv.mul(&a_plus) != a_minus.mul(&pv) {
        report.failures = 1;
    }
    Ok(report)
}

/// Seeded `(R, v)` pairs: Cayley-rational rotations and exact unit vectors.
pub fn equivariance_inputs(
    ctx: &HodgeContext,
    trials: usize,
    seed: u64,
) -> Result<Vec<(Matrix<Rational>, Vec<Rational>)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| {
            let (rs, vs): (u64, u64) = (rng.random(), rng.random());
            let r = rational_rotation(ctx.dim(), rs)?;
            let v = rational_sphere_points(ctx.dim() - 1, 1, vs).remove(0);
            Ok((r, v))
        })
        .collect()
}

impl EquivarianceReport {
    pub fn merge(mut self, other: &Self) -> Self {
        self.trials += other.trials;
        self.failures += other.failures;
        self.isometry_failures += other.isometry_failures;
        self.lambda_failures += other.lambda_failures;
        self
    }
}

/// Exact equivariance checks over seeded Cayley rotations and rational unit vectors.
pub fn verify_p_equivariance<C: Coeff>(ctx: &HodgeContext, trials: usize, seed: u64) -> Result<EquivarianceReport> {
    if trials == 0 {
        return Err(Error::OutOfRange("at least one trial required".into()));
    }
    let split = sd_split::<C>(ctx)?;
    let mut total = EquivarianceReport::default();
    for (r, v) in equivariance_inputs(ctx, trials, seed)? {
        total = total.merge(&check_equivariance(ctx, &split, &r, &v)?);
    }
    Ok(total)
}

/// Weight multiplicities of a `U(1)`-representation.
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct LaurentChar(BTreeMap<i64, u64>);

impl LaurentChar {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, u64)>) -> Self {
        let mut m = BTreeMap::new();
        for (w, c) in pairs {
            if c > 0 {
                *m.entry(w).or_insert(0) += c;
            }
        }
        LaurentChar(m)
    }

    pub fn multiplicity(&self, weight: i64) -> u64 {
        self.0.get(&weight).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn weights(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.0.iter().map(|(&w, &c)| (w, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        LaurentChar::from_pairs(self.weights().chain(other.weights()))
    }
}

/// Character of `Λ^k` of `n` copies of the standard rotation: the `t^k` coefficient of `Π(1 + zt)(1 + z⁻¹t)`.
pub fn u1_char_exterior(n: usize, k: usize) -> Result<LaurentChar> {
    if k > 2 * n {
        return Err(Error::OutOfRange(format!("exterior degree {k} exceeds {}", 2 * n)));
    }
    // coefficients indexed by t-degree, each a map weight -> multiplicity
    let mut poly: Vec<BTreeMap<i64, u64>> = vec![BTreeMap::from([(0, 1)])];
    for _ in 0..n {
        for z in [1i64, -1] {
            let mut next = vec![BTreeMap::new(); poly.len() + 1];
            for (deg, coeff) in poly.iter().enumerate() {
                for (&w, &c) in coeff {
                    *next[deg].entry(w).or_insert(0) += c;
                    *next[deg + 1].entry(w + z).or_insert(0) += c;
                }
            }
            poly = next;
        }
    }
    Ok(LaurentChar::from_pairs(poly[k].iter().map(|(&w, &c)| (w, c))))
}

/// Characters of `Λ⁺` and `Λ⁻` under the diagonal `U(1)` rotating each plane `(e_{2j-1}, e_{2j})`.
///
/// Weight vectors `f_j = e_{2j-1} - i e_{2j}` (weight 1) and their conjugates span `C^{2n}`;
/// the multiplicity of a weight in `Λ^±` is the rank of `Π^±` on that weight space.
pub fn sd_characters(n: usize) -> Result<(LaurentChar, LaurentChar)> {
    if n < 2 {
        return Err(Error::OutOfRange("self-dual characters need n >= 2".into()));
    }
    let ctx = HodgeContext::new(2 * n)?;
    let i = GaussianRational::i();
    let one = GaussianRational::one();
    let weight_vectors: Vec<(i64, ExtElement<GaussianRational>)> = (0..n)
        .flat_map(|j| {
            let mut f = vec![GaussianRational::zero(); 2 * n];
            f[2 * j] = one.clone();
            f[2 * j + 1] = -i.clone();
            let fbar: Vec<GaussianRational> = f.iter().map(Coeff::conj).collect();
            [(1, ExtElement { grade: 1, coeffs: f }), (-1, ExtElement { grade: 1, coeffs: fbar })]
        })
        .collect();
    let mut spaces: BTreeMap<i64, Vec<ExtElement<GaussianRational>>> = BTreeMap::new();
    combinations(2 * n, n, &mut |mask| {
        let mut acc = ctx.blade::<GaussianRational>(0);
        let mut weight = 0;
        for (b, (w, f)) in weight_vectors.iter().enumerate() {
            if mask & (1 << b) != 0 {
                acc = ctx.wedge(&acc, f);
                weight += w;
            }
        }
        spaces.entry(weight).or_default().push(acc);
    });
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for (w, vecs) in &spaces {
        for (sign, out) in [(Sign::Plus, &mut plus), (Sign::Minus, &mut minus)] {
            let images: Vec<Vec<GaussianRational>> =
                vecs.iter().map(|x| ctx.project(sign, x).map(|y| y.coeffs)).collect::<Result<_>>()?;
            out.push((*w, rank(&images) as u64));
        }
    }
    Ok((LaurentChar::from_pairs(plus), LaurentChar::from_pairs(minus)))
}
