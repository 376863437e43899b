//! Invariant report: C, T, f, d, μ(D) and the derived integers Ω, L, μ_I, N.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{double_curve, image_equation, invariant_c, invariant_t, presentation_matrix, GermError, MapGerm};
use crate::arith::{MultiPoly, PolyMatrix};
use crate::local::{milnor_number_capped, Codim, DEFAULT_DEGREE_CAP};

#[derive(Clone, Debug)]
pub struct ReportOptions {
    pub degree_cap: u32,
    /// Image equation to use instead of det λ.
    pub image_f: Option<MultiPoly>,
    /// Presentation matrix to use instead of the built-in construction.
    pub lambda: Option<PolyMatrix>,
    /// Reduced double curve to use instead of Φ*(∂f)/M.
    pub double_curve: Option<MultiPoly>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { degree_cap: DEFAULT_DEGREE_CAP, image_f: None, lambda: None, double_curve: None }
    }
}

/// Integers that follow from C, T and μ(D).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Derived {
    #[serde(rename = "Omega")]
    pub omega: Option<i64>,
    #[serde(rename = "L")]
    pub l: Option<i64>,
    #[serde(rename = "mu_I")]
    pub mu_i: Option<i64>,
    #[serde(rename = "N")]
    pub n: Option<i64>,
    #[serde(skip)]
    pub flags: BTreeMap<String, String>,
}

/// Ω = −C, L = C − 3T, μ_I = (4T − C − μ(D) + 1)/2, N = μ(D) − 6T − C + 1.
pub fn derive_report(c: &Codim, t: Option<&Codim>, mu_d: Option<&Codim>) -> Derived {
    let mut out = Derived::default();
    let Some(c) = c.finite().map(|c| c as i64) else {
        out.flags.insert("Omega".into(), format!("C = {c}: no derived values"));
        return out;
    };
    out.omega = Some(-c);
    let t = t.and_then(Codim::finite).map(|t| t as i64);
    let mu = mu_d.and_then(Codim::finite).map(|m| m as i64);
    if let Some(t) = t {
        out.l = Some(c - 3 * t);
    }
    if let (Some(t), Some(mu)) = (t, mu) {
        let num = 4 * t - c - mu + 1;
        if num % 2 == 0 {
            out.mu_i = Some(num / 2);
            let note = if num < 0 { "negative: sign convention of the source formula is suspect" } else { "formula output verbatim" };
            out.flags.insert("mu_I".into(), note.into());
        } else {
            out.flags.insert("mu_I".into(), format!("formula gives {num}/2, not an integer"));
        }
        out.n = Some(mu - 6 * t - c + 1);
        out.flags.insert("N".into(), "valid only for quasihomogeneous germs".into());
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub germ: String,
    pub normal_form: String,
    #[serde(rename = "C")]
    pub c: Codim,
    #[serde(rename = "T")]
    pub t: Option<Codim>,
    pub image_f: Option<String>,
    pub double_curve_d: Option<String>,
    #[serde(rename = "mu_D")]
    pub mu_d: Option<Codim>,
    #[serde(flatten)]
    pub derived: Derived,
    pub flags: BTreeMap<String, String>,
}

impl InvariantReport {
    pub fn to_text(&self) -> String {
        let opt = |o: &Option<String>| o.clone().unwrap_or_else(|| "-".into());
        let optc = |o: &Option<Codim>| o.as_ref().map(Codim::to_string).unwrap_or_else(|| "-".into());
        let opti = |o: Option<i64>| o.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
        let mut s = String::new();
        s.push_str(&format!("germ: {}\n", self.germ));
        s.push_str(&format!("normal_form: {}\n", self.normal_form));
        s.push_str(&format!("C: {}\n", self.c));
        s.push_str(&format!("T: {}\n", optc(&self.t)));
        s.push_str(&format!("image_f: {}\n", opt(&self.image_f)));
        s.push_str(&format!("double_curve_d: {}\n", opt(&self.double_curve_d)));
        s.push_str(&format!("mu_D: {}\n", optc(&self.mu_d)));
        s.push_str(&format!("Omega: {}\n", opti(self.derived.omega)));
        s.push_str(&format!("L: {}\n", opti(self.derived.l)));
        s.push_str(&format!("mu_I: {}\n", opti(self.derived.mu_i)));
        s.push_str(&format!("N: {}\n", opti(self.derived.n)));
        for (k, v) in &self.flags {
            s.push_str(&format!("flag {k}: {v}\n"));
        }
        s
    }
}

pub fn compute_report(germ: &MapGerm, opts: &ReportOptions) -> Result<InvariantReport, GermError> {
    let cap = opts.degree_cap;
    let mut flags = BTreeMap::new();
    let c = invariant_c(germ, cap)?;
    if c == Codim::Infinite {
        flags.insert("C".into(), "infinite: the germ is not finitely determined".into());
    }

    let lambda = match &opts.lambda {
        Some(l) => {
            flags.insert("T".into(), "from supplied presentation matrix".into());
            Some(l.clone())
        }
        None => match presentation_matrix(germ) {
            Ok(l) => Some(l),
            Err(e @ (GermError::NoPresentation | GermError::PresentationTooLarge(_))) => {
                flags.insert("T".into(), e.to_string());
                None
            }
            Err(e) => return Err(e),
        },
    };
    let t = match &lambda {
        Some(l) => Some(invariant_t(l, cap)?),
        None => None,
    };

    let f = match (&opts.image_f, &lambda) {
        (Some(f), _) => {
            flags.insert("image_f".into(), "supplied".into());
            Some(f.clone())
        }
        (None, Some(l)) => Some(image_equation(l)?.normalize_lowest()),
        (None, None) => None,
    };
    let reduced = f.as_ref().map(|f| f.is_squarefree());
    if reduced == Some(false) {
        flags.insert("image_f".into(), "not reduced: Φ is not generically one-to-one onto its image".into());
    }

    let d = match (&opts.double_curve, &f) {
        (Some(d), _) => {
            flags.insert("double_curve_d".into(), "supplied".into());
            Some(d.normalize_lowest())
        }
        (None, Some(f)) if reduced == Some(true) => Some(double_curve(germ, f)?),
        (None, Some(_)) => {
            flags.insert("double_curve_d".into(), "skipped: image equation is not reduced".into());
            None
        }
        (None, None) => {
            flags.insert("double_curve_d".into(), "skipped: no image equation".into());
            None
        }
    };
    let mu_d = match &d {
        Some(d) if d.is_constant() => Some(Codim::Finite(0)),
        Some(d) => Some(milnor_number_capped(d, cap)?),
        None => None,
    };

    let derived = derive_report(&c, t.as_ref(), mu_d.as_ref());
    for (k, v) in &derived.flags {
        flags.insert(k.clone(), v.clone());
    }
    Ok(InvariantReport {
        germ: germ.to_string(),
        normal_form: germ.normal_form().to_string(),
        c,
        t,
        image_f: f.map(|f| f.to_string()),
        double_curve_d: d.map(|d| d.to_string()),
        mu_d,
        derived,
        flags,
    })
}
