//! Map germs (ℂ²,0) → (ℂ³,0) and their analytic invariants.

mod double;
mod fitting;
mod report;

pub use double::{divided_difference_matrix, double_curve, double_lift_ideal, jacobian_minors, sectional_cofactor};
pub use fitting::{fitting_ideal, image_equation, invariant_t, presentation_matrix};
pub use report::{compute_report, derive_report, Derived, InvariantReport, ReportOptions};

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{parse_poly, vars_of, ArithError, MultiPoly, Vars};
use crate::local::{quotient_codim, Codim, LocalError, LocalIdeal};

pub fn source_vars() -> Vars {
    vars_of(&["s", "t"])
}

pub fn target_vars() -> Vars {
    vars_of(&["x", "y", "z"])
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GermError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error("component {0} does not vanish at the origin")]
    NotAtOrigin(usize),
    #[error("a germ needs exactly three components, got {0}")]
    Arity(usize),
    #[error("no presentation matrix for a general germ: supply the image equation f or a matrix λ")]
    NoPresentation,
    #[error("presentation matrix of size {0} is beyond the supported size")]
    PresentationTooLarge(usize),
    #[error("double curve: {0}")]
    DoubleCurve(String),
    #[error("weighted-homogeneous formula: {0}")]
    Weighted(String),
}

/// How the first two components look, which decides whether a
/// presentation matrix can be built directly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NormalForm {
    /// φ₁ = s, φ₂ = t^k.
    Corank1Monomial(u32),
    /// φ₁ = s^a, φ₂ = t^b (a > 1).
    Bimonomial(u32, u32),
    General,
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalForm::Corank1Monomial(k) => write!(f, "corank1-monomial(k={k})"),
            NormalForm::Bimonomial(a, b) => write!(f, "bimonomial(a={a}, b={b})"),
            NormalForm::General => write!(f, "general"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapGerm {
    phi: [MultiPoly; 3],
    normal_form: NormalForm,
}

fn pure_power(p: &MultiPoly, k: usize) -> Option<u32> {
    if p.nterms() != 1 {
        return None;
    }
    let (m, c) = p.leading_term()?;
    if !c.is_one() {
        return None;
    }
    let e = m.0[k];
    if e > 0 && m.degree() == e {
        Some(e)
    } else {
        None
    }
}

impl MapGerm {
    pub fn new(p1: MultiPoly, p2: MultiPoly, p3: MultiPoly) -> Result<Self, GermError> {
        let vars = source_vars();
        let phi = [p1.with_vars(&vars)?, p2.with_vars(&vars)?, p3.with_vars(&vars)?];
        for (i, p) in phi.iter().enumerate() {
            if !p.constant_term().is_zero() {
                return Err(GermError::NotAtOrigin(i + 1));
            }
        }
        let normal_form = match (pure_power(&phi[0], 0), pure_power(&phi[1], 1)) {
            (Some(1), Some(k)) => NormalForm::Corank1Monomial(k),
            (Some(a), Some(b)) => NormalForm::Bimonomial(a, b),
            _ => NormalForm::General,
        };
        Ok(MapGerm { phi, normal_form })
    }

    /// Parse `p1; p2; p3`, optionally wrapped as `germ { … }`.
    pub fn parse(text: &str) -> Result<Self, GermError> {
        let mut body = text.trim();
        if let Some(rest) = body.strip_prefix("germ") {
            body = rest.trim();
        }
        if let Some(inner) = body.strip_prefix('{').and_then(|b| b.strip_suffix('}')) {
            body = inner;
        }
        let parts: Vec<&str> = body.split(';').map(str::trim).filter(|p| !p.is_empty()).collect();
        if parts.len() != 3 {
            return Err(GermError::Arity(parts.len()));
        }
        let vars = source_vars();
        MapGerm::new(
            parse_poly(parts[0], &vars)?,
            parse_poly(parts[1], &vars)?,
            parse_poly(parts[2], &vars)?,
        )
    }

    pub fn phi(&self, i: usize) -> &MultiPoly {
        &self.phi[i]
    }

    pub fn components(&self) -> &[MultiPoly; 3] {
        &self.phi
    }

    pub fn normal_form(&self) -> NormalForm {
        self.normal_form
    }

    /// Pullback Φ*(h) of a polynomial in (x, y, z).
    pub fn pullback(&self, h: &MultiPoly) -> MultiPoly {
        let out = h.substitute(&[
            ("x", self.phi[0].clone()),
            ("y", self.phi[1].clone()),
            ("z", self.phi[2].clone()),
        ]);
        out.with_vars(&source_vars()).expect("pullback lives in (s,t)")
    }

    /// Σ^{1,0} form (s, t², t·d) with d even in t and not divisible by t.
    pub fn sigma10_curve(&self) -> Option<MultiPoly> {
        if self.normal_form != NormalForm::Corank1Monomial(2) {
            return None;
        }
        let t = MultiPoly::var("t", &source_vars());
        let d = self.phi[2].div_exact(&t)?;
        let even = d.terms().all(|(m, _)| m.0[1] % 2 == 0);
        let t_free = !d.coeff_in(1, 0).is_zero();
        (even && t_free).then_some(d)
    }
}

impl fmt::Display for MapGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}; {}; {}", self.phi[0], self.phi[1], self.phi[2])
    }
}

/// Ideal of the 2×2 minors of the Jacobian (the ramification ideal).
pub fn ramification_ideal(germ: &MapGerm) -> Result<LocalIdeal, GermError> {
    let m = jacobian_minors(germ);
    Ok(LocalIdeal::new(&source_vars(), m.into_iter())?)
}

/// C(Φ) = dim O₂ / J(Φ).
pub fn invariant_c(germ: &MapGerm, cap: u32) -> Result<Codim, GermError> {
    let ideal = match ramification_ideal(germ) {
        Ok(i) => i,
        // all minors vanish: Φ is nowhere immersive
        Err(GermError::Local(LocalError::EmptyIdeal)) => return Ok(Codim::Infinite),
        Err(e) => return Err(e),
    };
    Ok(quotient_codim(&ideal, cap))
}

/// Closed form for weighted-homogeneous germs with weights (w₁, w₂) and
/// component degrees (d₁, d₂, d₃).
pub fn c_weighted_homogeneous(w1: u64, w2: u64, d1: u64, d2: u64, d3: u64) -> Result<u64, GermError> {
    if w1 == 0 || w2 == 0 {
        return Err(GermError::Weighted("weights must be positive".into()));
    }
    let (w1, w2, d1, d2, d3) = (w1 as i128, w2 as i128, d1 as i128, d2 as i128, d3 as i128);
    let num = d1 * d2 + d2 * d3 + d3 * d1 - (w1 + w2) * (d1 + d2 + d3 - w1 - w2) - w1 * w2;
    let den = w1 * w2;
    if num < 0 || num % den != 0 {
        return Err(GermError::Weighted(format!("value {num}/{den} is not a natural number")));
    }
    Ok((num / den) as u64)
}
