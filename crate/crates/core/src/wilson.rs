//! Closed-geodesic classes of Schottky groups, Wilson loops of flat bundles and
//! Duistermaat–Guillemin coefficients.
//!
//! Letters are nonzero `i32`: `k` is generator `k` and `-k` its inverse. Rendered words use
//! `a, b, c, ...` for generators and upper case for inverses.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::maps::Field;
use crate::scalar::{rational_to_f64, Coeff, GaussianRational, Rational};

/// Sort key realizing the letter order `a < A < b < B < ...`.
fn letter_key(l: i32) -> u32 {
    2 * (l.unsigned_abs() - 1) + u32::from(l < 0)
}

/// Free reduction: cancel adjacent `x x⁻¹`.
pub fn free_reduce(word: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Free and cyclic reduction.
pub fn cyclic_reduce(word: &[i32]) -> Vec<i32> {
    let w = free_reduce(word);
    let mut lo = 0;
    let mut hi = w.len();
    while hi - lo >= 2 && w[lo] == -w[hi - 1] {
        lo += 1;
        hi -= 1;
    }
    w[lo..hi].to_vec()
}

/// Minimal rotation of the cyclic reduction; equal for conjugate words.
pub fn canonical(word: &[i32]) -> Vec<i32> {
    let w = cyclic_reduce(word);
    let n = w.len();
    let key = |s: usize| (0..n).map(|i| letter_key(w[(s + i) % n])).collect::<Vec<_>>();
    let best = (0..n).min_by_key(|&s| key(s)).unwrap_or(0);
    (0..n).map(|i| w[(best + i) % n]).collect()
}

pub fn inverse_word(word: &[i32]) -> Vec<i32> {
    word.iter().rev().map(|&l| -l).collect()
}

/// `(root, k)` with `word = root^k` and `root` not a proper power.
pub fn primitive_root(word: &[i32]) -> (Vec<i32>, usize) {
    let n = word.len();
    for p in 1..=n {
        if n.is_multiple_of(p) && (p..n).all(|i| word[i] == word[i - p]) {
            return (word[..p].to_vec(), n / p);
        }
    }
    (Vec::new(), 1)
}

pub fn word_to_string(word: &[i32]) -> String {
    word.iter()
        .map(|&l| {
            let c = char::from(b'a' + (l.unsigned_abs() - 1) as u8);
            if l < 0 {
                c.to_ascii_uppercase()
            } else {
                c
            }
        })
        .collect()
}

pub fn parse_word(s: &str) -> Result<Vec<i32>> {
    s.chars()
        .map(|c| match c {
            'a'..='z' => Ok(i32::from(c as u8 - b'a') + 1),
            'A'..='Z' => Ok(-(i32::from(c as u8 - b'A') + 1)),
            _ => Err(Error::Parse(format!("invalid letter `{c}` in word `{s}`"))),
        })
        .collect()
}

/// A conjugacy class of the free group, stored by its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassWord {
    pub word: Vec<i32>,
    /// Canonical primitive root `c♯`.
    pub root: Vec<i32>,
    pub exponent: usize,
}

impl ClassWord {
    pub fn new(word: &[i32]) -> Result<Self> {
        let w = canonical(word);
        if w.is_empty() {
            return Err(Error::Degenerate(0.0));
        }
        let (root, exponent) = primitive_root(&w);
        Ok(ClassWord { word: w, root: canonical(&root), exponent })
    }

    pub fn is_primitive(&self) -> bool {
        self.exponent == 1
    }

    pub fn inverse(&self) -> Self {
        ClassWord::new(&inverse_word(&self.word)).expect("nonempty")
    }
}

/// Conjugacy classes of cyclically reduced words of length `1..=max_len` in `rank` generators.
pub fn enumerate_classes(rank: usize, max_len: usize) -> Result<Vec<ClassWord>> {
    if max_len == 0 || rank == 0 {
        return Err(Error::OutOfRange("need max_len >= 1 and rank >= 1".into()));
    }
    let letters: Vec<i32> = (1..=rank as i32).flat_map(|g| [g, -g]).collect();
    let mut out = Vec::new();
    let mut stack: Vec<i32> = Vec::new();
    fn grow(stack: &mut Vec<i32>, letters: &[i32], max_len: usize, out: &mut Vec<ClassWord>) {
        if !stack.is_empty() && stack[0] != -stack[stack.len() - 1] && canonical(stack) == *stack {
            out.push(ClassWord::new(stack).expect("nonempty"));
        }
        if stack.len() == max_len {
            return;
        }
        for &l in letters {
            if stack.last() == Some(&-l) {
                continue;
            }
            stack.push(l);
            grow(stack, letters, max_len, out);
            stack.pop();
        }
    }
    grow(&mut stack, &letters, max_len, &mut out);
    out.sort_by(|x, y| x.word.len().cmp(&y.word.len()).then_with(|| cmp_words(&x.word, &y.word)));
    Ok(out)
}

fn cmp_words(x: &[i32], y: &[i32]) -> core::cmp::Ordering {
    x.iter().map(|&l| letter_key(l)).cmp(y.iter().map(|&l| letter_key(l)))
}

fn sl2_inverse(m: &Matrix<Rational>) -> Matrix<Rational> {
    Matrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => m[(1, 1)].clone(),
        (1, 1) => m[(0, 0)].clone(),
        _ => -m[(i, j)].clone(),
    })
}

/// Free group of hyperbolic elements of `SL(2, Q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchottkyGroup {
    generators: Vec<Matrix<Rational>>,
    inverses: Vec<Matrix<Rational>>,
}

impl SchottkyGroup {
    /// Freeness is assumed from the construction; determinant and hyperbolicity are checked.
    pub fn new(generators: Vec<Matrix<Rational>>) -> Result<Self> {
        if generators.len() < 2 {
            return Err(Error::OutOfRange(format!("rank {} < 2", generators.len())));
        }
        for (k, g) in generators.iter().enumerate() {
            if g.rows() != 2 || g.cols() != 2 {
                return Err(Error::DimensionMismatch(format!("generator {k} is not 2x2")));
            }
            if !g.det().is_one() {
                return Err(Error::Unverified(format!("generator {k} has determinant {}", g.det())));
            }
            let t = g.trace().abs();
            if t <= Rational::from_integer(2.into()) {
                return Err(Error::Degenerate(rational_to_f64(&t)));
            }
        }
        let inverses = generators.iter().map(sl2_inverse).collect();
        Ok(SchottkyGroup { generators, inverses })
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Matrix<Rational>] {
        &self.generators
    }

    pub fn element(&self, word: &[i32]) -> Result<Matrix<Rational>> {
        let mut acc = Matrix::identity(2);
        for &l in word {
            let k = l.unsigned_abs() as usize;
            if k == 0 || k > self.rank() {
                return Err(Error::IndexOutOfRange { index: k, max: self.rank() });
            }
            let g = if l > 0 { &self.generators[k - 1] } else { &self.inverses[k - 1] };
            acc = acc.mul(g);
        }
        Ok(acc)
    }

    pub fn trace(&self, word: &[i32]) -> Result<Rational> {
        Ok(self.element(word)?.trace())
    }

    /// `ℓ = 2 arccosh(|tr|/2)`.
    pub fn geodesic_length(&self, word: &[i32]) -> Result<f64> {
        let t = rational_to_f64(&self.trace(word)?).abs();
        if t <= 2.0 || word.is_empty() {
            return Err(Error::Degenerate(t));
        }
        Ok(2.0 * libm::acosh(t / 2.0))
    }
}

/// Flat bundle given by unitary holonomy images of the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatBundle {
    field: Field,
    images: Vec<Matrix<GaussianRational>>,
}

impl FlatBundle {
    pub fn new(field: Field, images: Vec<Matrix<GaussianRational>>) -> Result<Self> {
        let rank = images.first().map(Matrix::rows).ok_or_else(|| Error::OutOfRange("no images".into()))?;
        for (k, m) in images.iter().enumerate() {
            if m.rows() != rank || m.cols() != rank {
                return Err(Error::DimensionMismatch(format!("image {k} is not {rank}x{rank}")));
            }
            if field == Field::Real && m.data().iter().any(|x| !x.im().is_zero()) {
                return Err(Error::NeedsComplex);
            }
            if !m.is_unitary() {
                return Err(Error::Unverified(format!("image {k} is not unitary")));
            }
        }
        Ok(FlatBundle { field, images })
    }

    pub fn trivial(generators: usize, rank: usize) -> Self {
        FlatBundle { field: Field::Real, images: alloc::vec![Matrix::identity(rank); generators] }
    }

    /// Line bundle with the given `±1` or unit values on generators.
    pub fn character(values: &[GaussianRational]) -> Result<Self> {
        let field = if values.iter().all(|v| v.im().is_zero()) { Field::Real } else { Field::Complex };
        Self::new(field, values.iter().map(|v| Matrix::from_fn(1, 1, |_, _| v.clone())).collect())
    }

    /// Seeded random bundle with Cayley-unitary images.
    pub fn random_unitary(generators: usize, rank: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let images = (0..generators).map(|_| crate::linalg::rational_unitary(rank, rng.random())).collect();
        FlatBundle { field: Field::Complex, images }
    }

    pub fn rank(&self) -> usize {
        self.images[0].rows()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn images(&self) -> &[Matrix<GaussianRational>] {
        &self.images
    }

    pub fn holonomy(&self, word: &[i32]) -> Result<Matrix<GaussianRational>> {
        let inverses: Vec<_> = self.images.iter().map(Matrix::conj_transpose).collect();
        let letter = |l: i32| {
            let k = l.unsigned_abs() as usize;
            if k == 0 || k > self.images.len() {
                return Err(Error::IndexOutOfRange { index: k, max: self.images.len() });
            }
            Ok(if l > 0 { &self.images[k - 1] } else { &inverses[k - 1] })
        };
        let Some((&first, rest)) = word.split_first() else {
            return Ok(Matrix::identity(self.rank()));
        };
        let mut acc = letter(first)?.clone();
        for &l in rest {
            acc = acc.mul(letter(l)?);
        }
        Ok(acc)
    }

    pub fn wilson(&self, word: &[i32]) -> Result<GaussianRational> {
        Ok(self.holonomy(word)?.trace())
    }

    /// Images replaced by `U⁻¹ g U`.
    pub fn gauge_conjugate(&self, u: &Matrix<GaussianRational>) -> Result<Self> {
        if u.rows() != self.rank() || u.cols() != self.rank() {
            return Err(Error::DimensionMismatch(format!("gauge of size {} on rank {}", u.rows(), self.rank())));
        }
        if !u.is_unitary() {
            return Err(Error::Unverified("gauge is not unitary".into()));
        }
        let ui = u.conj_transpose();
        let images = self.images.iter().map(|g| ui.mul(g).mul(u)).collect();
        let field = if self.field == Field::Real && u.data().iter().all(|x| x.im().is_zero()) {
            Field::Real
        } else {
            Field::Complex
        };
        Ok(FlatBundle { field, images })
    }
}

pub fn wilson_vector(bundle: &FlatBundle, classes: &[ClassWord]) -> Result<Vec<GaussianRational>> {
    classes.iter().map(|c| bundle.wilson(&c.word)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassEntry {
    pub class: ClassWord,
    pub length: f64,
    /// `ℓ(c♯)`.
    pub primitive_length: f64,
    pub wilson: GaussianRational,
    /// Real and imaginary parts of the coefficient.
    pub dg_coeff: (f64, f64),
}

impl ClassEntry {
    pub fn primitive(&self) -> bool {
        self.class.is_primitive()
    }
}

/// `ℓ(c♯) W(c) / (2π · 2 sinh(ℓ(c)/2))`.
pub fn dg_coefficient(length: f64, primitive_length: f64, wilson: &GaussianRational) -> Result<(f64, f64)> {
    if length.is_nan() || length <= 0.0 {
        return Err(Error::Degenerate(length));
    }
    let denom = 2.0 * PI * 2.0 * libm::sinh(length / 2.0);
    let s = primitive_length / denom;
    Ok((s * rational_to_f64(&wilson.re()), s * rational_to_f64(&wilson.im())))
}

/// Length, Wilson trace and coefficient of one class.
pub fn evaluate_class(group: &SchottkyGroup, bundle: &FlatBundle, c: &ClassWord) -> Result<ClassEntry> {
    if bundle.images().len() != group.rank() {
        return Err(Error::DimensionMismatch(format!(
            "bundle over {} generators for a rank {} group",
            bundle.images().len(),
            group.rank()
        )));
    }
    let length = group.geodesic_length(&c.word)?;
    let primitive_length = if c.is_primitive() { length } else { group.geodesic_length(&c.root)? };
    let wilson = bundle.wilson(&c.word)?;
    let dg_coeff = dg_coefficient(length, primitive_length, &wilson)?;
    Ok(ClassEntry { class: c.clone(), length, primitive_length, wilson, dg_coeff })
}

/// Orders entries by `(length, word)`.
pub fn sort_entries(entries: &mut [ClassEntry]) {
    entries.sort_by(|x, y| x.length.total_cmp(&y.length).then_with(|| cmp_words(&x.class.word, &y.class.word)));
}

/// Lengths, Wilson traces and coefficients for each class, sorted by `(length, word)`.
pub fn evaluate_classes(group: &SchottkyGroup, bundle: &FlatBundle, classes: &[ClassWord]) -> Result<Vec<ClassEntry>> {
    let mut out = classes.iter().map(|c| evaluate_class(group, bundle, c)).collect::<Result<Vec<_>>>()?;
    sort_entries(&mut out);
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Collision {
    pub first: Vec<i32>,
    pub second: Vec<i32>,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct SpectrumReport {
    /// Near-equal lengths not explained by a trace identity.
    pub collisions: Vec<Collision>,
    /// Pairs whose traces agree up to sign in every generic representation tried.
    pub forced: Vec<Collision>,
}

impl SpectrumReport {
    pub fn is_simple(&self) -> bool {
        self.collisions.is_empty()
    }
}

const GENERIC_SAMPLES: usize = 3;

fn random_sl2(rng: &mut impl Rng) -> Matrix<Rational> {
    // [[1, p], [0, 1]] [[1, 0], [q, 1]] [[1, s], [0, 1]] has determinant one
    let mut r = || Rational::from_integer(rng.random_range(-1000i64..=1000).into());
    let (p, q, s) = (r(), r(), r());
    let u = |x: Rational| {
        Matrix::from_rows(alloc::vec![alloc::vec![Rational::one(), x], alloc::vec![Rational::zero(), Rational::one()]])
            .unwrap()
    };
    let l =
        Matrix::from_rows(alloc::vec![alloc::vec![Rational::one(), Rational::zero()], alloc::vec![q, Rational::one()]])
            .unwrap();
    u(p).mul(&l).mul(&u(s))
}

/// Pairs of distinct classes, `w` and `w⁻¹` identified, with `|ℓ - ℓ'| < tol`.
///
/// Entries must come from one group. A pair is forced when `|tr|` agrees in several
/// random integral representations of the free group, i.e. by a trace identity.
pub fn check_simple_length_spectrum(entries: &[ClassEntry], tol: f64) -> Result<SpectrumReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::OutOfRange(format!("tolerance {tol} must be positive")));
    }
    let rank = entries.iter().flat_map(|e| e.class.word.iter()).map(|l| l.unsigned_abs() as usize).max().unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let samples: Vec<Vec<Matrix<Rational>>> =
        (0..GENERIC_SAMPLES).map(|_| (0..rank).map(|_| random_sl2(&mut rng)).collect()).collect();
    let generic_abs_trace = |w: &[i32]| -> Vec<Rational> {
        samples
            .iter()
            .map(|gens| {
                let mut acc = Matrix::identity(2);
                for &l in w {
                    let g = &gens[l.unsigned_abs() as usize - 1];
                    acc = if l > 0 { acc.mul(g) } else { acc.mul(&sl2_inverse(g)) };
                }
                acc.trace().abs()
            })
            .collect()
    };
    let mut sorted: Vec<&ClassEntry> = entries.iter().collect();
    sorted.sort_by(|x, y| x.length.total_cmp(&y.length));
    let mut seen = BTreeSet::new();
    let mut report = SpectrumReport::default();
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            let gap = sorted[j].length - sorted[i].length;
            if gap >= tol {
                break;
            }
            let (a, b) = (&sorted[i].class, &sorted[j].class);
            if a.word == b.word || a.inverse().word == b.word {
                continue;
            }
            let key = (min_orientation(a), min_orientation(b));
            let key = if key.0 <= key.1 { key } else { (key.1, key.0) };
            if !seen.insert(key) {
                continue;
            }
            let c = Collision { first: a.word.clone(), second: b.word.clone(), gap };
            if generic_abs_trace(&a.word) == generic_abs_trace(&b.word) {
                report.forced.push(c);
            } else {
                report.collisions.push(c);
            }
        }
    }
    Ok(report)
}

fn min_orientation(c: &ClassWord) -> Vec<u32> {
    let inv = c.inverse();
    let k = |w: &[i32]| w.iter().map(|&l| letter_key(l)).collect::<Vec<_>>();
    let (x, y) = (k(&c.word), k(&inv.word));
    if (x.len(), &x) <= (y.len(), &y) {
        x
    } else {
        y
    }
}

fn sl2(a: Rational, b: Rational, c: Rational, d: Rational) -> Matrix<Rational> {
    Matrix::from_rows(alloc::vec![alloc::vec![a, b], alloc::vec![c, d]]).expect("2x2")
}

/// `[[x, yk], [y/k, x]]`, hyperbolic with determinant one when `x² - y² = 1`.
pub fn boost(x: Rational, y: Rational, k: Rational) -> Matrix<Rational> {
    sl2(x.clone(), &y * &k, &y / &k, x)
}

/// Generators `a = boost(5/3, 4/3, 1)`, `b = boost(5/3, 4/3, 1/5)`: conjugate by a diagonal isometry.
pub fn symmetric_example() -> SchottkyGroup {
    use crate::scalar::rat;
    SchottkyGroup::new(alloc::vec![boost(rat(5, 3), rat(4, 3), rat(1, 1)), boost(rat(5, 3), rat(4, 3), rat(1, 5)),])
        .expect("valid generators")
}

/// `a` as above and `b = boost(13/5, 12/5, 1/5)` conjugated by `[[1, 1/7], [0, 1]]`.
pub fn perturbed_example() -> SchottkyGroup {
    use crate::scalar::rat;
    let b = boost(rat(13, 5), rat(12, 5), rat(1, 5));
    let t = sl2(rat(1, 1), rat(1, 7), rat(0, 1), rat(1, 1));
    let b = sl2_inverse(&t).mul(&b).mul(&t);
    SchottkyGroup::new(alloc::vec![boost(rat(5, 3), rat(4, 3), rat(1, 1)), b]).expect("valid generators")
}
