//! Harmonic decomposition of homogeneous polynomials and Fourier degree on spheres.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::maps::PolynomialMap;
use crate::poly::MultiPoly;
use crate::scalar::Coeff;
use crate::sphere::SphereContext;

/// `Σ ∂²p/∂v_i²`.
pub fn laplacian<C: Coeff>(p: &MultiPoly<C>) -> MultiPoly<C> {
    let mut out = MultiPoly::zero(p.nvars());
    for i in 0..p.nvars() {
        out = &out + &p.derivative(i).derivative(i);
    }
    out
}

/// `p = Σ_k |v|^{2k} h_{d-2k}` with every `h` harmonic and homogeneous.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicDecomposition<C: Coeff> {
    pub degree: u32,
    /// `(k, h)` with `h` of degree `degree - 2k`; zero components omitted.
    pub components: Vec<(u32, MultiPoly<C>)>,
    nvars: usize,
}

impl<C: Coeff> HarmonicDecomposition<C> {
    pub fn reconstruct(&self) -> MultiPoly<C> {
        let r2 = MultiPoly::sum_of_squares(self.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        for (k, h) in &self.components {
            out = &out + &(&r2.pow(*k) * h);
        }
        out
    }

    /// Largest spherical-harmonic degree present, `None` for zero input.
    pub fn top_harmonic_degree(&self) -> Option<u32> {
        self.components.iter().map(|(k, _)| self.degree - 2 * k).max()
    }
}

/// Unique decomposition of a homogeneous polynomial into harmonic pieces.
pub fn harmonic_decompose<C: Coeff>(p: &MultiPoly<C>) -> Result<HarmonicDecomposition<C>> {
    if !p.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let m = p.nvars();
    let d = p.total_degree();
    let r2 = MultiPoly::sum_of_squares(m);
    let mut rest = p.clone();
    let mut components = Vec::new();
    // Δ^k annihilates every piece r^{2j} h with j < k and scales the j = k piece
    for k in (0..=d / 2).rev() {
        if rest.is_zero() {
            break;
        }
        let e = d - 2 * k;
        let mut lap = rest.clone();
        for _ in 0..k {
            lap = laplacian(&lap);
        }
        if lap.is_zero() {
            continue;
        }
        let mut c: i64 = 1;
        for j in 1..=i64::from(k) {
            c *= 2 * j * (2 * j + 2 * i64::from(e) + m as i64 - 2);
        }
        let h = lap.scale(&C::from_int(c).inv());
        rest = &rest - &(&r2.pow(k) * &h);
        components.push((k, h));
    }
    debug_assert!(rest.is_zero());
    components.reverse();
    Ok(HarmonicDecomposition { degree: d, components, nvars: m })
}

/// Largest `k` with a nonzero `Ω_k` component of `p` restricted to the sphere.
pub fn fourier_degree<C: Coeff>(p: &MultiPoly<C>, ctx: &SphereContext) -> Result<u32> {
    let q = ctx.nf_reduce(p)?;
    let m = q.nvars();
    let r2 = MultiPoly::sum_of_squares(m);
    let mut best = 0;
    for parity in [0u32, 1] {
        let parts: Vec<(u32, MultiPoly<C>)> =
            q.homogeneous_parts().into_iter().filter(|(d, _)| d % 2 == parity).collect();
        let Some(top) = parts.first().map(|(d, _)| *d) else {
            continue;
        };
        // on the sphere |v|^2 = 1, so lower parts may be lifted to the top degree
        let mut hom = MultiPoly::zero(m);
        for (d, part) in &parts {
            hom = &hom + &(&r2.pow((top - d) / 2) * part);
        }
        if let Some(k) = harmonic_decompose(&hom)?.top_harmonic_degree() {
            best = best.max(k);
        }
    }
    Ok(best)
}

/// Maximum Fourier degree over the components of a map.
pub fn map_fourier_degree<M: PolynomialMap + ?Sized>(map: &M) -> Result<u32> {
    let ctx = map.context();
    let mut best = 0;
    for c in map.components() {
        best = best.max(fourier_degree(c, &ctx)?);
    }
    Ok(best)
}
