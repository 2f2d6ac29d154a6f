//! Polynomial maps from spheres into spheres, matrix groups and Grassmannians.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::MultiPoly;
use crate::scalar::{Coeff, GaussianRational, Rational};
use crate::sphere::SphereContext;

/// Anything given by finitely many polynomial components on a source sphere.
pub trait PolynomialMap {
    type Coeff: Coeff;

    fn source_dim(&self) -> usize;

    fn components(&self) -> &[MultiPoly<Self::Coeff>];

    fn context(&self) -> SphereContext {
        SphereContext::for_sphere(self.source_dim())
    }
}

/// A polynomial map `S^n -> S^r` given by `r + 1` coordinates in `n + 1` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereMap {
    source_dim: usize,
    coords: Vec<MultiPoly>,
}

impl SphereMap {
    pub fn new(source_dim: usize, coords: Vec<MultiPoly>) -> Result<Self> {
        if source_dim < 1 {
            return Err(Error::OutOfRange(format!("source sphere dimension {source_dim} < 1")));
        }
        if coords.is_empty() {
            return Err(Error::DimensionMismatch("a sphere map needs at least one coordinate".into()));
        }
        if let Some(bad) = coords.iter().find(|p| p.nvars() != source_dim + 1) {
            return Err(Error::VarCountMismatch { expected: source_dim + 1, found: bad.nvars() });
        }
        Ok(SphereMap { source_dim, coords })
    }

    pub fn identity(n: usize) -> Self {
        let coords = (0..=n).map(|i| MultiPoly::var(n + 1, i)).collect();
        SphereMap { source_dim: n, coords }
    }

    /// The constant map onto `(1, 0, ..., 0) ∈ S^r`.
    pub fn constant(n: usize, r: usize) -> Self {
        let mut coords = vec![MultiPoly::zero(n + 1); r + 1];
        coords[0] = MultiPoly::one(n + 1);
        SphereMap { source_dim: n, coords }
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[MultiPoly] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<MultiPoly> {
        self.coords
    }

    /// Maximum total degree of the stored coordinates.
    pub fn degree_repr(&self) -> u32 {
        self.coords.iter().map(MultiPoly::total_degree).max().unwrap_or(0)
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Vec<Rational>> {
        self.coords.iter().map(|p| p.eval_rational(point)).collect()
    }
}

impl PolynomialMap for SphereMap {
    type Coeff = Rational;

    fn source_dim(&self) -> usize {
        self.source_dim
    }

    fn components(&self) -> &[MultiPoly] {
        &self.coords
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereMapReport {
    pub pass: bool,
    /// Normal form of `Σ F_i^2 - 1`; zero exactly when `pass`.
    pub residual: MultiPoly,
}

/// Checks `Σ F_i^2 ≡ 1` on the source sphere.
pub fn verify_sphere_map(f: &SphereMap) -> SphereMapReport {
    let n = f.source_dim + 1;
    let degree = common_degree(&f.coords);
    if let Some(d) = degree {
        if packed::sum_of_squares_is_norm_power(&f.coords, d) == Some(true) {
            return SphereMapReport { pass: true, residual: MultiPoly::zero(n) };
        }
    }
    let mut sum = MultiPoly::zero(n);
    for c in &f.coords {
        sum = &sum + &c.square();
    }
    if degree.is_some_and(|d| is_norm_power(&sum, d)) {
        return SphereMapReport { pass: true, residual: MultiPoly::zero(n) };
    }
    let residual =
        f.context().nf_reduce(&(&sum - &MultiPoly::one(n))).expect("coordinates share the source variable count");
    SphereMapReport { pass: residual.is_zero(), residual }
}

// Exact integer arithmetic on monomials of degree <= 8 packed into a u64 as sorted variable indices.
mod packed {
    use alloc::vec::Vec;

    use hashbrown::HashMap;
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, ToPrimitive};

    use super::binomial;
    use crate::poly::MultiPoly;

    const EMPTY: u8 = 0xFF;

    fn pack(exps: &[u16]) -> Option<u64> {
        let mut key = [EMPTY; 8];
        let mut len = 0;
        for (i, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                if len == 8 {
                    return None;
                }
                key[len] = i as u8;
                len += 1;
            }
        }
        Some(u64::from_be_bytes(key))
    }

    fn merge(a: u64, b: u64) -> u64 {
        let (a, b) = (a.to_be_bytes(), b.to_be_bytes());
        let mut out = [EMPTY; 8];
        let (mut i, mut j) = (0, 0);
        for slot in out.iter_mut() {
            let x = a.get(i).copied().unwrap_or(EMPTY);
            let y = b.get(j).copied().unwrap_or(EMPTY);
            if x == EMPTY && y == EMPTY {
                break;
            }
            if x <= y {
                *slot = x;
                i += 1;
            } else {
                *slot = y;
                j += 1;
            }
        }
        u64::from_be_bytes(out)
    }

    /// `Some(Σ F_i^2 == |v|^{2d})`, or `None` when the input does not fit the packed representation.
    pub(super) fn sum_of_squares_is_norm_power(coords: &[MultiPoly], d: u32) -> Option<bool> {
        let nvars = coords.first()?.nvars();
        if 2 * d > 8 || nvars >= usize::from(EMPTY) {
            return None;
        }
        let mut lcm = BigInt::one();
        for c in coords {
            for (_, x) in c.terms() {
                lcm = lcm.lcm(x.denom());
            }
        }
        let mut acc: HashMap<u64, i128> = HashMap::new();
        for c in coords {
            let terms: Vec<(u64, i128)> = c
                .terms()
                .iter()
                .map(|(m, x)| {
                    let scaled = x.numer() * (&lcm / x.denom());
                    Some((pack(m.exps())?, i128::from(scaled.to_i64()?)))
                })
                .collect::<Option<_>>()?;
            for (i, &(ki, ci)) in terms.iter().enumerate() {
                let sq = ci.checked_mul(ci)?;
                let e = acc.entry(merge(ki, ki)).or_insert(0);
                *e = e.checked_add(sq)?;
                let twice = ci.checked_mul(2)?;
                for &(kj, cj) in &terms[i + 1..] {
                    let prod = twice.checked_mul(cj)?;
                    let e = acc.entry(merge(ki, kj)).or_insert(0);
                    *e = e.checked_add(prod)?;
                }
            }
        }
        acc.retain(|_, c| *c != 0);
        if acc.len() as u64 != binomial(nvars as u64 + u64::from(d) - 1, u64::from(d)) {
            return Some(false);
        }
        let scale = lcm.pow(2).to_i128()?;
        let mut fact = [1i128; 9];
        for i in 1..9 {
            fact[i] = fact[i - 1] * i as i128;
        }
        for (key, c) in acc {
            let bytes = key.to_be_bytes();
            let mut want = fact[d as usize].checked_mul(scale)?;
            let mut i = 0;
            while i < 8 && bytes[i] != EMPTY {
                let mut run = 1;
                while i + run < 8 && bytes[i + run] == bytes[i] {
                    run += 1;
                }
                if run % 2 == 1 {
                    return Some(false);
                }
                want /= fact[run / 2];
                i += run;
            }
            if c != want {
                return Some(false);
            }
        }
        Some(true)
    }
}

// degree shared by all nonzero homogeneous coordinates
fn common_degree<C: Coeff>(coords: &[MultiPoly<C>]) -> Option<u32> {
    let mut d = None;
    for c in coords.iter().filter(|c| !c.is_zero()) {
        if !c.is_homogeneous() {
            return None;
        }
        match d {
            None => d = Some(c.total_degree()),
            Some(x) if x != c.total_degree() => return None,
            _ => {}
        }
    }
    d
}

/// True when `p = (v_1^2 + ... + v_N^2)^d` exactly, by comparing with the multinomial expansion.
pub(crate) fn is_norm_power(p: &MultiPoly, d: u32) -> bool {
    let nvars = p.nvars();
    let expected_terms = binomial(nvars as u64 + u64::from(d) - 1, u64::from(d));
    if p.len() as u64 != expected_terms {
        return false;
    }
    let mut fact = vec![Rational::one()];
    for i in 1..=d {
        let next = &fact[fact.len() - 1] * Rational::from_integer(i.into());
        fact.push(next);
    }
    p.terms().iter().all(|(m, c)| {
        if m.exps().iter().any(|e| e % 2 == 1) || m.degree() != 2 * d {
            return false;
        }
        let mut want = fact[d as usize].clone();
        for &e in m.exps() {
            want /= &fact[usize::from(e / 2)];
        }
        *c == want
    })
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// True when every component is constant on the source sphere.
pub fn is_constant<M: PolynomialMap + ?Sized>(m: &M) -> bool {
    let ctx = m.context();
    m.components().iter().all(|c| ctx.nf_reduce(c).expect("components live on the source sphere").is_constant())
}

/// `g ∘ f`.
pub fn compose(f: &SphereMap, g: &SphereMap) -> Result<SphereMap> {
    if f.target_dim() != g.source_dim {
        return Err(Error::DimensionMismatch(format!(
            "cannot compose S^{} -> S^{} with a map from S^{}",
            f.source_dim,
            f.target_dim(),
            g.source_dim
        )));
    }
    let coords = g.coords.iter().map(|p| p.substitute(&f.coords)).collect::<Result<Vec<_>>>()?;
    Ok(SphereMap { source_dim: f.source_dim, coords })
}

/// `S^n -> S^{n+1}`, `v ↦ (v, 0)`.
pub fn equatorial_inclusion(n: usize) -> SphereMap {
    let mut coords: Vec<MultiPoly> = (0..=n).map(|i| MultiPoly::var(n + 1, i)).collect();
    coords.push(MultiPoly::zero(n + 1));
    SphereMap { source_dim: n, coords }
}

/// Restricts to the great sphere `v_i = 0` (1-based `i`), renumbering the remaining variables.
pub fn restrict_to_great_sphere(f: &SphereMap, i: usize) -> Result<SphereMap> {
    let max = f.source_dim + 1;
    if i == 0 || i > max {
        return Err(Error::IndexOutOfRange { index: i, max });
    }
    if f.source_dim < 2 {
        return Err(Error::OutOfRange("cannot restrict a map on S^1 to S^0".into()));
    }
    let coords = f.coords.iter().map(|p| p.drop_var(i - 1)).collect();
    Ok(SphereMap { source_dim: f.source_dim - 1, coords })
}

/// Restricts to the great `S^k` spanned by the first `k + 1` coordinates.
pub fn restrict_to_leading(f: &SphereMap, k: usize) -> Result<SphereMap> {
    if k < 1 || k > f.source_dim {
        return Err(Error::IndexOutOfRange { index: k, max: f.source_dim });
    }
    let coords = f.coords.iter().map(|p| p.truncate_vars(k + 1)).collect();
    Ok(SphereMap { source_dim: k, coords })
}

/// Restricts to the great sphere spanned by the coordinate axes in `keep` (0-based, increasing).
pub fn restrict_to_coordinates(f: &SphereMap, keep: &[usize]) -> Result<SphereMap> {
    let max = f.source_dim + 1;
    if keep.len() < 2 {
        return Err(Error::OutOfRange("a great sphere needs at least two coordinates".into()));
    }
    if let Some(&bad) = keep.iter().find(|&&i| i >= max) {
        return Err(Error::IndexOutOfRange { index: bad + 1, max });
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::OutOfRange("kept coordinates must be strictly increasing".into()));
    }
    let coords = f.coords.iter().map(|p| p.restrict_vars(keep)).collect();
    Ok(SphereMap { source_dim: keep.len() - 1, coords })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Real,
    Complex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Group {
    O,
    SO,
    U,
    SU,
}

impl Group {
    pub fn name(self) -> &'static str {
        match self {
            Group::O => "O",
            Group::SO => "SO",
            Group::U => "U",
            Group::SU => "SU",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "O" => Ok(Group::O),
            "SO" => Ok(Group::SO),
            "U" => Ok(Group::U),
            "SU" => Ok(Group::SU),
            other => Err(Error::UnknownName(other.into())),
        }
    }

    pub fn is_special(self) -> bool {
        matches!(self, Group::SO | Group::SU)
    }
}

/// A square matrix of polynomials on `S^n`, meant to land in `group`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixPolyMap<C: Coeff = Rational> {
    source_dim: usize,
    group: Group,
    entries: Matrix<MultiPoly<C>>,
    det_correction: Option<C>,
}

impl<C: Coeff> MatrixPolyMap<C> {
    pub fn new(source_dim: usize, group: Group, entries: Matrix<MultiPoly<C>>) -> Result<Self> {
        if !entries.is_square() || entries.rows() == 0 {
            return Err(Error::DimensionMismatch("matrix map entries must be square".into()));
        }
        if let Some(bad) = entries.data().iter().find(|p| p.nvars() != source_dim + 1) {
            return Err(Error::VarCountMismatch { expected: source_dim + 1, found: bad.nvars() });
        }
        Ok(MatrixPolyMap { source_dim, group, entries, det_correction: None })
    }

    pub fn identity(n: usize, size: usize, group: Group) -> Self {
        let entries =
            Matrix::from_fn(size, size, |i, j| if i == j { MultiPoly::one(n + 1) } else { MultiPoly::zero(n + 1) });
        MatrixPolyMap { source_dim: n, group, entries, det_correction: None }
    }

    pub fn size(&self) -> usize {
        self.entries.rows()
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn entries(&self) -> &Matrix<MultiPoly<C>> {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut Matrix<MultiPoly<C>> {
        &mut self.entries
    }

    /// The constant applied to the first row to bring the determinant to 1, if any.
    /// Records the scalar the first row was multiplied by to force `det ≡ 1`.
    pub fn with_det_correction(mut self, c: Option<C>) -> Self {
        self.det_correction = c;
        self
    }

    pub fn det_correction(&self) -> Option<&C> {
        self.det_correction.as_ref()
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Matrix<C>> {
        let data = self.entries.data().iter().map(|p| p.eval_rational(point)).collect::<Result<Vec<_>>>()?;
        Matrix::from_vec(self.size(), self.size(), data)
    }
}

impl<C: Coeff> PolynomialMap for MatrixPolyMap<C> {
    type Coeff = C;

    fn source_dim(&self) -> usize {
        self.source_dim
    }

    fn components(&self) -> &[MultiPoly<C>] {
        self.entries.data()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixMapReport<C: Coeff = Rational> {
    pub pass: bool,
    /// Nonzero entries `(i, j, NF)` of `M*M - I`.
    pub unitarity_residual: Vec<(usize, usize, MultiPoly<C>)>,
    /// Normal form of `det M`.
    pub det: MultiPoly<C>,
    pub det_is_constant: bool,
    pub det_correction: Option<C>,
}

/// Checks `M*M ≡ I` (or `MᵀM ≡ I`) and computes the determinant modulo the sphere ideal.
pub fn verify_matrix_map<C: Coeff>(m: &MatrixPolyMap<C>) -> MatrixMapReport<C> {
    let ctx = m.context();
    let nf = |p: &MultiPoly<C>| ctx.nf_reduce(p).expect("entries live on the source sphere");
    let r = m.size();
    let nvars = m.source_dim + 1;
    let conj: Vec<MultiPoly<C>> = m.entries.data().iter().map(MultiPoly::conj).collect();
    let mut residual = Vec::new();
    for i in 0..r {
        for j in i..r {
            let mut s = MultiPoly::zero(nvars);
            for k in 0..r {
                s = &s + &(&conj[k * r + i] * &m.entries[(k, j)]);
            }
            if i == j {
                s = &s - &MultiPoly::one(nvars);
            }
            let s = nf(&s);
            if !s.is_zero() {
                residual.push((i, j, s));
            }
        }
    }
    let det = poly_det(&m.entries, &ctx);
    let det_is_constant = det.is_constant();
    let det_ok = det_is_constant && {
        let c = det.constant_term();
        if m.group.is_special() {
            c.is_one()
        } else {
            c.norm_sqr().is_one()
        }
    };
    MatrixMapReport {
        pass: residual.is_empty() && det_ok,
        unitarity_residual: residual,
        det,
        det_is_constant,
        det_correction: m.det_correction.clone(),
    }
}

/// Determinant by expansion over column subsets, reducing every minor modulo the sphere ideal.
pub fn poly_det<C: Coeff>(m: &Matrix<MultiPoly<C>>, ctx: &SphereContext) -> MultiPoly<C> {
    let r = m.rows();
    assert!(r <= 20, "polynomial determinant limited to size 20");
    let nvars = ctx.nvars();
    // minors[S] = det of rows 0..|S| against the columns in S
    let mut minors: Vec<Option<MultiPoly<C>>> = vec![None; 1 << r];
    minors[0] = Some(MultiPoly::one(nvars));
    let mut by_size: Vec<Vec<usize>> = vec![Vec::new(); r + 1];
    for s in 0usize..(1 << r) {
        by_size[s.count_ones() as usize].push(s);
    }
    for (k, sets) in by_size.iter().enumerate().take(r + 1).skip(1) {
        let row = k - 1;
        for &s in sets {
            let mut acc = MultiPoly::zero(nvars);
            let mut pos = 0;
            for j in 0..r {
                if s & (1 << j) == 0 {
                    continue;
                }
                let rest = minors[s & !(1 << j)].as_ref().expect("smaller minors filled first");
                let entry = &m[(row, j)];
                if !entry.is_zero() && !rest.is_zero() {
                    // sign of moving column j to the end of the subset
                    let t = entry * rest;
                    if (k - 1 - pos) % 2 == 0 {
                        acc = &acc + &t;
                    } else {
                        acc = &acc - &t;
                    }
                }
                pos += 1;
            }
            minors[s] = Some(ctx.nf_reduce(&acc).expect("matching variable count"));
        }
    }
    minors[(1 << r) - 1].take().expect("full minor computed")
}

/// Coefficient fields that can host the reflection construction.
pub trait ReflectionField: Coeff {
    /// Source sphere dimension for a reflection map into matrices of size `r + 1`.
    fn reflection_source_dim(r: usize) -> usize;

    /// Coordinates `z_0, ..., z_r` of the source point.
    fn reflection_coordinates(r: usize) -> Vec<MultiPoly<Self>>;

    const SPECIAL_GROUP: Group;
}

impl ReflectionField for Rational {
    fn reflection_source_dim(r: usize) -> usize {
        r
    }

    fn reflection_coordinates(r: usize) -> Vec<MultiPoly<Self>> {
        (0..=r).map(|i| MultiPoly::var(r + 1, i)).collect()
    }

    const SPECIAL_GROUP: Group = Group::SO;
}

impl ReflectionField for GaussianRational {
    fn reflection_source_dim(r: usize) -> usize {
        2 * r + 1
    }

    /// `z_j = x_j + i y_j` with real variables ordered `x_0, y_0, x_1, y_1, ...`.
    fn reflection_coordinates(r: usize) -> Vec<MultiPoly<Self>> {
        let n = 2 * r + 2;
        (0..=r)
            .map(|j| {
                let x = MultiPoly::var(n, 2 * j);
                let y = MultiPoly::<Self>::var(n, 2 * j + 1).scale(&GaussianRational::i());
                &x + &y
            })
            .collect()
    }

    const SPECIAL_GROUP: Group = Group::SU;
}

/// `v ↦ (-1)^r (2π_v - 1)`, corrected by a constant diagonal matrix so that `det ≡ 1`.
///
/// Over the reals the source is `S^r` and the target `SO(r+1)`; over the Gaussian
/// rationals the source is `S^{2r+1} ⊂ C^{r+1}` and the target `SU(r+1)`.
pub fn reflection_map<C: ReflectionField>(r: usize) -> Result<MatrixPolyMap<C>> {
    if r < 1 {
        return Err(Error::OutOfRange("reflection maps need r >= 1".into()));
    }
    let z = C::reflection_coordinates(r);
    let zbar: Vec<MultiPoly<C>> = z.iter().map(MultiPoly::conj).collect();
    let n = C::reflection_source_dim(r);
    let sign = if r.is_multiple_of(2) { C::one() } else { -C::one() };
    let two = C::from_int(2);
    let entries = Matrix::from_fn(r + 1, r + 1, |j, k| {
        let mut e = (&z[j] * &zbar[k]).scale(&two);
        if j == k {
            e = &e - &MultiPoly::one(n + 1);
        }
        e.scale(&sign)
    });
    let mut map = MatrixPolyMap { source_dim: n, group: C::SPECIAL_GROUP, entries, det_correction: None };
    let det = poly_det(&map.entries, &map.context());
    if !det.is_constant() {
        return Err(Error::Unverified("reflection determinant is not constant".into()));
    }
    let d = det.constant_term();
    if !d.is_one() {
        let fix = d.inv();
        for k in 0..=r {
            map.entries[(0, k)] = map.entries[(0, k)].scale(&fix);
        }
        map.det_correction = Some(fix);
    }
    Ok(map)
}

/// Column `j` (1-based) as a sphere map; complex columns are split into real and imaginary parts.
pub fn column_map<C: Coeff>(m: &MatrixPolyMap<C>, j: usize) -> Result<SphereMap> {
    let r = m.size();
    if j == 0 || j > r {
        return Err(Error::IndexOutOfRange { index: j, max: r });
    }
    let col = m.entries.column(j - 1);
    let coords = if C::COMPLEX {
        col.iter().flat_map(|p| [p.re_part(), p.im_part()]).collect()
    } else {
        col.iter().map(MultiPoly::re_part).collect()
    };
    SphereMap::new(m.source_dim, coords)
}

/// A polynomial map into the symmetric idempotent `r×r` matrices of fixed trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectorMap {
    source_dim: usize,
    rank: usize,
    entries: Matrix<MultiPoly>,
}

impl ProjectorMap {
    pub fn new(source_dim: usize, rank: usize, entries: Matrix<MultiPoly>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::DimensionMismatch("projector entries must be square".into()));
        }
        if rank > entries.rows() {
            return Err(Error::RankExceedsAmbient { rank, ambient: entries.rows() });
        }
        if let Some(bad) = entries.data().iter().find(|p| p.nvars() != source_dim + 1) {
            return Err(Error::VarCountMismatch { expected: source_dim + 1, found: bad.nvars() });
        }
        Ok(ProjectorMap { source_dim, rank, entries })
    }

    pub fn ambient(&self) -> usize {
        self.entries.rows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn entries(&self) -> &Matrix<MultiPoly> {
        &self.entries
    }
}

impl PolynomialMap for ProjectorMap {
    type Coeff = Rational;

    fn source_dim(&self) -> usize {
        self.source_dim
    }

    fn components(&self) -> &[MultiPoly] {
        self.entries.data()
    }
}

/// Builds a rank-`k` projector map into `R^ambient` from a sphere map `F: S^n -> S^q`.
///
/// * `k = 1`: the line through `F`.
/// * `1 < k ≤ q`: the image of a coordinate `k`-plane under `2FFᵀ - I`.
/// * `k > q`: the orthogonal complement of `F` inside `R^{k+1}`.
pub fn grassmannian_projector_map(f: &SphereMap, k: usize, ambient: usize) -> Result<ProjectorMap> {
    if k > ambient {
        return Err(Error::RankExceedsAmbient { rank: k, ambient });
    }
    let t = f.coords.len();
    let nv = f.source_dim + 1;
    let needed = if k < t { t } else { k + 1 };
    if k == 0 || ambient < needed {
        return Err(Error::DimensionMismatch(format!(
            "rank {k} projector from a map into S^{} needs ambient dimension {needed}, got {ambient}",
            t - 1
        )));
    }
    let ff = |i: usize, j: usize| -> MultiPoly {
        if i < t && j < t {
            &f.coords[i] * &f.coords[j]
        } else {
            MultiPoly::zero(nv)
        }
    };
    let delta = |i: usize, j: usize| if i == j { MultiPoly::one(nv) } else { MultiPoly::zero(nv) };
    let entries =
        if k == 1 {
            Matrix::from_fn(ambient, ambient, ff)
        } else if k < t {
            let plane = coordinate_plane(f, k);
            // R = 2FFᵀ - I restricted to the t×t block; P = R E R
            let two = Rational::from_integer(2.into());
            let refl = Matrix::from_fn(t, t, |i, j| &ff(i, j).scale(&two) - &delta(i, j));
            Matrix::from_fn(ambient, ambient, |i, j| {
                if i >= t || j >= t {
                    return MultiPoly::zero(nv);
                }
                let mut s = MultiPoly::zero(nv);
                for &l in &plane {
                    s = &s + &(&refl[(i, l)] * &refl[(j, l)]);
                }
                s
            })
        } else {
            Matrix::from_fn(ambient, ambient, |i, j| {
                if i > k || j > k {
                    MultiPoly::zero(nv)
                } else {
                    &delta(i, j) - &ff(i, j)
                }
            })
        };
    ProjectorMap::new(f.source_dim, k, entries)
}

// k coordinate indices containing one nonzero coordinate of F and missing another
fn coordinate_plane(f: &SphereMap, k: usize) -> Vec<usize> {
    let t = f.coords.len();
    let nonzero: Vec<usize> = (0..t).filter(|&i| !f.coords[i].is_zero()).collect();
    let (first, last) = match (nonzero.first(), nonzero.last()) {
        (Some(&a), Some(&b)) if a != b => (a, b),
        _ => return (0..k).collect(),
    };
    let mut plane = vec![first];
    plane.extend((0..t).filter(|&i| i != first && i != last).take(k - 1));
    plane.sort_unstable();
    plane
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectorReport {
    pub pass: bool,
    pub idempotent: bool,
    pub symmetric: bool,
    pub trace_ok: bool,
}

/// Checks `P² ≡ P`, `Pᵀ ≡ P` and `tr P ≡ k`.
pub fn verify_projector_map(p: &ProjectorMap) -> ProjectorReport {
    let ctx = p.context();
    let r = p.ambient();
    let e = &p.entries;
    let zero_mod = |q: &MultiPoly| ctx.is_zero_mod(q).expect("entries live on the source sphere");
    let mut idempotent = true;
    let mut symmetric = true;
    'outer: for i in 0..r {
        for j in 0..r {
            if j > i && !zero_mod(&(&e[(i, j)] - &e[(j, i)])) {
                symmetric = false;
            }
            let mut s = MultiPoly::zero(p.source_dim + 1);
            for l in 0..r {
                s = &s + &(&e[(i, l)] * &e[(l, j)]);
            }
            if !zero_mod(&(&s - &e[(i, j)])) {
                idempotent = false;
                break 'outer;
            }
        }
    }
    let mut trace = MultiPoly::zero(p.source_dim + 1);
    for i in 0..r {
        trace = &trace + &e[(i, i)];
    }
    let k = MultiPoly::constant(p.source_dim + 1, Rational::from_integer((p.rank as i64).into()));
    let trace_ok = zero_mod(&(&trace - &k));
    ProjectorReport { pass: idempotent && symmetric && trace_ok, idempotent, symmetric, trace_ok }
}

/// `(v_1^2 + ... + v_m^2)^d`.
pub fn norm_power(nvars: usize, d: u32) -> MultiPoly {
    MultiPoly::sum_of_squares(nvars).pow(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;
    use crate::scalar::int;
    use crate::sphere::rational_sphere_points;

    type P = MultiPoly;

    fn monomial(nvars: usize, exps: &[(usize, u16)]) -> Monomial {
        let mut e = vec![0u16; nvars];
        for &(i, x) in exps {
            e[i] = x;
        }
        Monomial::new(e)
    }

    fn v(n: usize, i: usize) -> P {
        P::var(n, i)
    }

    fn standard_hopf() -> SphereMap {
        let (a, b, c, d) = (v(4, 0), v(4, 1), v(4, 2), v(4, 3));
        let two = int(2);
        let x = &(&(&a * &a) + &(&b * &b)) - &(&(&c * &c) + &(&d * &d));
        let y = (&(&b * &c) - &(&a * &d)).scale(&two);
        let z = (&(&a * &c) + &(&b * &d)).scale(&two);
        SphereMap::new(3, vec![x, y, z]).unwrap()
    }

    #[test]
    fn identity_constant_and_hopf_verify() {
        assert!(verify_sphere_map(&SphereMap::identity(3)).pass);
        assert!(verify_sphere_map(&SphereMap::constant(2, 4)).pass);
        let h = standard_hopf();
        assert!(verify_sphere_map(&h).pass);
        assert!(!is_constant(&h));
        assert!(is_constant(&SphereMap::constant(3, 2)));
        assert!(!is_constant(&SphereMap::identity(2)));
    }

    #[test]
    fn broken_map_reports_residual() {
        let mut coords = standard_hopf().into_coords();
        coords[1] = &coords[1] + &P::var(4, 0);
        let report = verify_sphere_map(&SphereMap::new(3, coords).unwrap());
        assert!(!report.pass);
        assert!(!report.residual.is_zero());
    }

    #[test]
    fn homogeneous_but_wrong_scale_fails() {
        let mut coords = standard_hopf().into_coords();
        coords[2] = coords[2].scale(&int(2));
        let report = verify_sphere_map(&SphereMap::new(3, coords).unwrap());
        assert!(!report.pass);
        assert!(!report.residual.is_zero());
    }

    #[test]
    fn high_degree_maps_skip_packed_path() {
        // v ↦ (v1^2 - v2^2, 2 v1 v2) iterated three times has degree 8 coordinates
        let sq = SphereMap::new(
            1,
            vec![&(&v(2, 0) * &v(2, 0)) - &(&v(2, 1) * &v(2, 1)), (&v(2, 0) * &v(2, 1)).scale(&int(2))],
        )
        .unwrap();
        let f = compose(&compose(&sq, &sq).unwrap(), &sq).unwrap();
        assert_eq!(f.degree_repr(), 8);
        assert!(verify_sphere_map(&f).pass);
    }

    #[test]
    fn non_homogeneous_map_uses_normal_form() {
        let a = v(2, 0);
        let b = v(2, 1);
        let x = &(&a * &a) - &(&b * &b);
        // 2ab + (a^2 + b^2 - 1) is the same function as 2ab
        let y = &(&(&a * &b).scale(&int(2)) + &(&(&a * &a) + &(&b * &b))) - &P::one(2);
        let f = SphereMap::new(1, vec![x, y]).unwrap();
        assert!(verify_sphere_map(&f).pass);
    }

    #[test]
    fn mismatched_coordinates_rejected() {
        assert!(matches!(SphereMap::new(2, vec![v(3, 0), v(2, 0)]), Err(Error::VarCountMismatch { .. })));
    }

    #[test]
    fn norm_power_detector() {
        for (n, d) in [(3usize, 1u32), (4, 2), (5, 3)] {
            assert!(is_norm_power(&norm_power(n, d), d));
            let off = &norm_power(n, d) + &P::monomial(monomial(n, &[(0, 2 * d as u16)]), int(1));
            assert!(!is_norm_power(&off, d));
        }
    }

    #[test]
    fn compose_with_identity_and_inclusion() {
        let h = standard_hopf();
        assert_eq!(compose(&h, &SphereMap::identity(2)).unwrap(), h);
        assert!(compose(&h, &SphereMap::identity(3)).is_err());
        let g = compose(&h, &equatorial_inclusion(2)).unwrap();
        assert!(verify_sphere_map(&g).pass);
        let pts = rational_sphere_points(3, 2, 5);
        assert_ne!(g.eval(&pts[0]).unwrap(), g.eval(&pts[1]).unwrap());
    }

    #[test]
    fn restriction_and_inclusion() {
        let inc = equatorial_inclusion(1);
        assert!(verify_sphere_map(&inc).pass);
        assert_eq!(restrict_to_great_sphere(&SphereMap::identity(2), 3).unwrap(), inc);
        assert!(matches!(restrict_to_great_sphere(&SphereMap::identity(2), 4), Err(Error::IndexOutOfRange { .. })));
        let r = restrict_to_great_sphere(&standard_hopf(), 4).unwrap();
        assert!(verify_sphere_map(&r).pass);
        let pts = rational_sphere_points(2, 2, 9);
        assert_ne!(r.eval(&pts[0]).unwrap(), r.eval(&pts[1]).unwrap());
        // F restricted to the equator is F precomposed with the inclusion
        let f = standard_hopf();
        let via = compose(&equatorial_inclusion(2), &f).unwrap();
        assert_eq!(restrict_to_great_sphere(&f, 4).unwrap(), via);
        assert_eq!(restrict_to_leading(&f, 2).unwrap(), via);
    }

    #[test]
    fn real_reflection_two() {
        let m = reflection_map::<Rational>(2).unwrap();
        let at = m.eval(&[int(1), int(0), int(0)]).unwrap();
        let want = Matrix::from_rows(vec![
            vec![int(1), int(0), int(0)],
            vec![int(0), int(-1), int(0)],
            vec![int(0), int(0), int(-1)],
        ])
        .unwrap();
        assert_eq!(at, want);
        let rep = verify_matrix_map(&m);
        assert!(rep.pass);
        assert_eq!(rep.det, P::one(3));
        assert!(rep.det_correction.is_none());
    }

    #[test]
    fn odd_reflections_need_correction() {
        let m = reflection_map::<Rational>(1).unwrap();
        assert_eq!(m.det_correction(), Some(&int(-1)));
        assert!(verify_matrix_map(&m).pass);
        let c = reflection_map::<GaussianRational>(1).unwrap();
        let rep = verify_matrix_map(&c);
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.det_correction, Some(-GaussianRational::from(int(1))));
    }

    #[test]
    fn columns_of_reflection() {
        let m = reflection_map::<Rational>(2).unwrap();
        let c = column_map(&m, 1).unwrap();
        let (a, b, d) = (v(3, 0), v(3, 1), v(3, 2));
        let two = int(2);
        let want = [&(&a * &a).scale(&two) - &P::one(3), (&a * &b).scale(&two), (&a * &d).scale(&two)];
        assert_eq!(c.coords(), &want[..]);
        assert!(verify_sphere_map(&c).pass);
        assert!(!is_constant(&c));
        assert!(matches!(column_map(&m, 4), Err(Error::IndexOutOfRange { .. })));
        let id = MatrixPolyMap::<Rational>::identity(2, 3, Group::SO);
        assert!(is_constant(&column_map(&id, 2).unwrap()));
    }

    #[test]
    fn perturbed_matrix_fails() {
        let mut m = reflection_map::<Rational>(2).unwrap();
        m.entries_mut()[(1, 2)] = &m.entries()[(1, 2)] + &P::one(3);
        let rep = verify_matrix_map(&m);
        assert!(!rep.pass);
        assert!(!rep.unitarity_residual.is_empty());
        assert!(verify_matrix_map(&MatrixPolyMap::<Rational>::identity(3, 4, Group::SO)).pass);
    }

    #[test]
    fn projector_from_identity_circle() {
        let p = grassmannian_projector_map(&SphereMap::identity(1), 1, 2).unwrap();
        let (a, b) = (v(2, 0), v(2, 1));
        assert_eq!(p.entries()[(0, 0)], &a * &a);
        assert_eq!(p.entries()[(0, 1)], &a * &b);
        assert!(verify_projector_map(&p).pass);
        let c = grassmannian_projector_map(&SphereMap::constant(2, 2), 1, 3).unwrap();
        assert!(verify_projector_map(&c).pass);
        assert!(is_constant(&c));
    }

    #[test]
    fn projectors_from_hopf() {
        let h = standard_hopf();
        for (k, amb) in [(1, 3), (2, 3), (3, 4), (4, 6)] {
            let p = grassmannian_projector_map(&h, k, amb).unwrap();
            assert!(verify_projector_map(&p).pass, "k={k}");
            assert!(!is_constant(&p), "k={k}");
        }
        assert!(matches!(grassmannian_projector_map(&h, 5, 4), Err(Error::RankExceedsAmbient { .. })));
    }

    #[test]
    fn plane_choice_avoids_constant_projector() {
        // F lives in the last two coordinates of S^2
        let f = SphereMap::new(1, vec![P::zero(2), v(2, 0), v(2, 1)]).unwrap();
        let p = grassmannian_projector_map(&f, 2, 3).unwrap();
        assert!(verify_projector_map(&p).pass);
        assert!(!is_constant(&p));
    }

    #[test]
    fn reflection_points_are_orthogonal() {
        let m = reflection_map::<Rational>(3).unwrap();
        for pt in rational_sphere_points(3, 5, 2) {
            let a = m.eval(&pt).unwrap();
            assert!(a.transpose().mul(&a).is_identity());
            assert_eq!(a.det(), int(1));
        }
    }
}
