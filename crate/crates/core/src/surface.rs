//! Klein surfaces: topological invariants `(g, n, a)`, their classification,
//! and model involutions on `H^1(M; Z/2)`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2::{BitMatrix, F2Error, InvolutionMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("genus bound: g >= 2 (got g = {0})")]
    GenusTooSmall(u32),
    #[error("orientability bit a must be 0 or 1 (got {0})")]
    InvalidOrientability(u32),
    #[error("Harnack: n <= g+1 (got g = {g}, n = {n})")]
    Harnack { g: u32, n: u32 },
    #[error("free involution: n = 0 forces a = 1")]
    FreeActionNotSeparating,
    #[error("type I parity: g = 2g'+n-1 needs g-n odd (got g = {g}, n = {n})")]
    TypeOneParity { g: u32, n: u32 },
    #[error("g' >= 0: g = 2g'+n+c has no solution with g' >= 0 (got g = {g}, n = {n}, a = 1)")]
    NegativeGPrime { g: u32, n: u32 },
    #[error("type I model needs n >= 1 (got n = 0)")]
    NoFixedComponents,
    #[error("type I model genus 2g'+n-1 = {0} is below 2")]
    ModelGenusTooSmall(u32),
    #[error("type II model needs g > n >= 1 (got g = {g}, n = {n})")]
    TypeTwoModelUndefined { g: u32, n: u32 },
    #[error("internal: model matrix failed its involution self-check: {0}")]
    ModelNotInvolution(F2Error),
}

/// `(g, n, a)`: genus, number of real circles, and whether the complement of
/// the real locus is connected (`a = 1`) or splits in two (`a = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveInvariants {
    pub g: u32,
    pub n: u32,
    pub a: u32,
}

impl CurveInvariants {
    pub fn new(g: u32, n: u32, a: u32) -> Result<Self, SurfaceError> {
        let inv = CurveInvariants { g, n, a };
        inv.validate()?;
        Ok(inv)
    }

    fn validate(&self) -> Result<(), SurfaceError> {
        let CurveInvariants { g, n, a } = *self;
        if g < 2 {
            return Err(SurfaceError::GenusTooSmall(g));
        }
        if a > 1 {
            return Err(SurfaceError::InvalidOrientability(a));
        }
        if n > g + 1 {
            return Err(SurfaceError::Harnack { g, n });
        }
        if n == 0 && a == 0 {
            return Err(SurfaceError::FreeActionNotSeparating);
        }
        if a == 0 && (g + 1 - n) % 2 != 0 {
            return Err(SurfaceError::TypeOneParity { g, n });
        }
        if a == 1 && n > g {
            return Err(SurfaceError::NegativeGPrime { g, n });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CurveType {
    #[serde(rename = "0")]
    Type0,
    #[serde(rename = "I")]
    TypeI,
    #[serde(rename = "II")]
    TypeII,
}

impl fmt::Display for CurveType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveType::Type0 => "0",
            CurveType::TypeI => "I",
            CurveType::TypeII => "II",
        })
    }
}

/// Everything [`classify`] derives from `(g, n, a)`.
///
/// `c` is the parity correction in `g = 2g' + n + c` (only meaningful for
/// `a = 1`, zero otherwise). It is *not* the correction added to the Dickson
/// invariant of a type II curve, which is 1 or 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedInvariants {
    #[serde(rename = "type")]
    pub curve_type: CurveType,
    pub g: u32,
    pub n: u32,
    pub a: u32,
    pub g_prime: u32,
    pub c: u32,
    /// `None` for type 0: the type II formula would exceed the bound `D <= g`.
    pub dickson: Option<u32>,
    #[serde(rename = "m_curve")]
    pub is_m_curve: bool,
}

impl DerivedInvariants {
    pub fn invariants(&self) -> CurveInvariants {
        CurveInvariants {
            g: self.g,
            n: self.n,
            a: self.a,
        }
    }
}

/// Dickson correction for type II: 1 when `g - n` is even, 2 when odd.
pub fn type_two_dickson_correction(g: u32, n: u32) -> u32 {
    if (g - n).is_multiple_of(2) {
        1
    } else {
        2
    }
}

pub fn classify(g: u32, n: u32, a: u32) -> Result<DerivedInvariants, SurfaceError> {
    CurveInvariants::new(g, n, a)?;
    let curve_type = if n == 0 {
        CurveType::Type0
    } else if a == 0 {
        CurveType::TypeI
    } else {
        CurveType::TypeII
    };
    let (g_prime, c, dickson) = match curve_type {
        CurveType::TypeI => {
            let gp = (g + 1 - n) / 2;
            (gp, 0, Some(2 * gp))
        }
        CurveType::TypeII | CurveType::Type0 => {
            let c = (g - n) % 2;
            let gp = (g - n - c) / 2;
            let d = (curve_type == CurveType::TypeII)
                .then(|| 2 * gp + type_two_dickson_correction(g, n));
            (gp, c, d)
        }
    };
    Ok(DerivedInvariants {
        curve_type,
        g,
        n,
        a,
        g_prime,
        c,
        dickson,
        is_m_curve: is_m_curve(g, n),
    })
}

/// Maximal curves attain Harnack's bound `n = g + 1`.
pub fn is_m_curve(g: u32, n: u32) -> bool {
    n == g + 1
}

/// The standard mod-2 intersection form on `(a_1, b_1, ..., a_g, b_g)`.
pub fn symplectic_form(g: usize) -> BitMatrix {
    let mut j = BitMatrix::zeros(2 * g, 2 * g);
    for i in 0..g {
        j.set(2 * i, 2 * i + 1, true);
        j.set(2 * i + 1, 2 * i, true);
    }
    j
}

/// `M^T J M = J`.
pub fn preserves_symplectic_form(m: &BitMatrix) -> bool {
    if !m.is_square() || !m.n_rows().is_multiple_of(2) {
        return false;
    }
    let j = symplectic_form(m.n_rows() / 2);
    let lhs = m
        .transpose()
        .mul(&j)
        .and_then(|t| t.mul(m))
        .expect("square matrices of equal size");
    lhs == j
}

/// Reflection model of a type I curve of genus `g = 2g' + n - 1`.
///
/// Basis `(a_1, b_1, ..., a_g, b_g)`; row `i` is the image of basis vector `i`.
/// Handle `j <= g'` is exchanged with its mirror handle `g + 1 - j`; the
/// `n - 1` middle handles are fixed.
pub fn type1_involution_matrix(g_prime: u32, n: u32) -> Result<InvolutionMatrix, SurfaceError> {
    if n == 0 {
        return Err(SurfaceError::NoFixedComponents);
    }
    let g = 2 * g_prime + n - 1;
    if g < 2 {
        return Err(SurfaceError::ModelGenusTooSmall(g));
    }
    let g = g as usize;
    let mut handle_image: Vec<usize> = (0..g).collect();
    for j in 0..g_prime as usize {
        handle_image[j] = g - 1 - j;
        handle_image[g - 1 - j] = j;
    }
    let mut m = BitMatrix::zeros(2 * g, 2 * g);
    for (h, &img) in handle_image.iter().enumerate() {
        m.set(2 * h, 2 * img, true);
        m.set(2 * h + 1, 2 * img + 1, true);
    }
    InvolutionMatrix::new(m).map_err(SurfaceError::ModelNotInvolution)
}

/// Surgery model of a type II curve: `n` reflected cylinders glued onto a
/// genus `m = g - n` surface carrying the antipodal map.
///
/// Basis `(a_1, b_1, ..., a_n, b_n, alpha_1, beta_1, ..., alpha_m, beta_m)`,
/// row `i` the image of basis vector `i`. With `c = a_1 + ... + a_n` and the
/// pairing `j <-> m + 1 - j` (the middle index is self-paired when `m` is odd):
///
/// * `a_i -> a_i`
/// * `b_i -> b_i + c + beta_1 + ... + beta_m`
/// * `alpha_j -> alpha_{m+1-j} + c`
/// * `beta_j -> beta_{m+1-j}`
pub fn type2_involution_matrix(g: u32, n: u32) -> Result<InvolutionMatrix, SurfaceError> {
    if n == 0 || g <= n {
        return Err(SurfaceError::TypeTwoModelUndefined { g, n });
    }
    let (gs, ns) = (g as usize, n as usize);
    let m = gs - ns;
    let a = |i: usize| 2 * i;
    let b = |i: usize| 2 * i + 1;
    let alpha = |j: usize| 2 * ns + 2 * j;
    let beta = |j: usize| 2 * ns + 2 * j + 1;
    let partner = |j: usize| m - 1 - j;

    let mut mat = BitMatrix::zeros(2 * gs, 2 * gs);
    let add_c = |mat: &mut BitMatrix, row: usize| {
        for i in 0..ns {
            mat.flip(row, a(i));
        }
    };
    for i in 0..ns {
        mat.set(a(i), a(i), true);
        mat.set(b(i), b(i), true);
        add_c(&mut mat, b(i));
        for j in 0..m {
            mat.flip(b(i), beta(j));
        }
    }
    for j in 0..m {
        mat.set(alpha(j), alpha(partner(j)), true);
        add_c(&mut mat, alpha(j));
        mat.set(beta(j), beta(partner(j)), true);
    }
    InvolutionMatrix::new(mat).map_err(SurfaceError::ModelNotInvolution)
}
