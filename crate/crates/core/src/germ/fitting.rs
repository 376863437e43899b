//! Presentation matrix of Φ_*O₂ over O₃, image equation and Fitting ideals.

use std::collections::HashMap;

use super::{target_vars, GermError, MapGerm, NormalForm};
use crate::arith::{Monomial, MultiPoly, PolyMatrix};
use crate::local::{quotient_codim, Codim, LocalIdeal};

/// Largest presentation size built automatically.
pub const MAX_PRESENTATION: usize = 6;

/// λ with λ_ij = λ̃_ij − δ_ij z, where g_j·φ₃ = Σ_i Φ̄*(λ̃_ij) g_i.
///
/// Supported when Φ̄ = (s^a, t^b): the module basis is s^i t^j
/// (i < a, j < b), ordered by (j, i), so for a = 1 it is 1, t, …, t^{b−1}.
pub fn presentation_matrix(germ: &MapGerm) -> Result<PolyMatrix, GermError> {
    let (a, b) = match germ.normal_form() {
        NormalForm::Corank1Monomial(k) => (1, k),
        NormalForm::Bimonomial(a, b) => (a, b),
        NormalForm::General => return Err(GermError::NoPresentation),
    };
    let n = (a * b) as usize;
    if n > MAX_PRESENTATION {
        return Err(GermError::PresentationTooLarge(n));
    }
    let basis: Vec<(u32, u32)> = (0..b).flat_map(|j| (0..a).map(move |i| (i, j))).collect();
    let pos: HashMap<(u32, u32), usize> = basis.iter().enumerate().map(|(k, e)| (*e, k)).collect();
    let xyz = target_vars();
    let mut lam = PolyMatrix::zeros(n, n, &xyz);
    let phi3 = germ.phi(2);
    for (col, &(gi, gj)) in basis.iter().enumerate() {
        let mut column: Vec<MultiPoly> = vec![MultiPoly::zero(&xyz); n];
        for (m, c) in phi3.terms() {
            let p = m.0[0] + gi;
            let q = m.0[1] + gj;
            let row = pos[&(p % a, q % b)];
            let mono = Monomial(vec![p / a, q / b, 0]);
            column[row] = &column[row] + &MultiPoly::monomial(c.clone(), mono, &xyz);
        }
        column[col] = &column[col] - &MultiPoly::var("z", &xyz);
        for (row, e) in column.into_iter().enumerate() {
            lam.set(row, col, e);
        }
    }
    Ok(lam)
}

/// det λ, an equation of the image (not necessarily reduced).
pub fn image_equation(lambda: &PolyMatrix) -> Result<MultiPoly, GermError> {
    Ok(lambda.det()?)
}

/// F_i: the ideal of (N−i)-minors; the unit ideal once i ≥ N.
pub fn fitting_ideal(lambda: &PolyMatrix, i: usize) -> Result<LocalIdeal, GermError> {
    let n = lambda.rows();
    let vars = lambda.vars().clone();
    if i >= n {
        return Ok(LocalIdeal::new(&vars, [MultiPoly::one(&vars)])?);
    }
    Ok(LocalIdeal::new(&vars, lambda.minors(n - i))?)
}

/// T(Φ) = dim O₃ / F₂.
pub fn invariant_t(lambda: &PolyMatrix, cap: u32) -> Result<Codim, GermError> {
    let f2 = fitting_ideal(lambda, 2)?;
    Ok(quotient_codim(&f2, cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_poly;

    fn p(s: &str) -> MultiPoly {
        parse_poly(s, &target_vars()).unwrap()
    }

    fn mat(rows: &[&[&str]]) -> PolyMatrix {
        PolyMatrix::from_rows(
            rows.iter().map(|r| r.iter().map(|e| p(e)).collect()).collect(),
            &target_vars(),
        )
        .unwrap()
    }

    #[test]
    fn hk_matrix_and_determinant() {
        for k in 1..=4u32 {
            let g = MapGerm::parse(&format!("s; t^3; s*t + t^{}", 3 * k - 1)).unwrap();
            let lam = presentation_matrix(&g).unwrap();
            let yk = format!("y^{k}");
            let yk1 = format!("y^{}", k - 1);
            let expected = mat(&[&["-z", &yk, "x*y"], &["x", "-z", &yk], &[&yk1, "x", "-z"]]);
            assert_eq!(lam, expected);
            let f = image_equation(&lam).unwrap();
            assert_eq!(f, p(&format!("y^{} - z^3 + x^3*y + 3*z*x*y^{k}", 3 * k - 1)));
            assert_eq!(invariant_t(&lam, 64).unwrap(), Codim::Finite(k as u64 - 1));
        }
    }

    #[test]
    fn a1_matrix_matches_displayed() {
        let g = MapGerm::parse("s^2; t^2; s*t").unwrap();
        let lam = presentation_matrix(&g).unwrap();
        let expected = mat(&[
            &["-z", "0", "0", "x*y"],
            &["0", "-z", "y", "0"],
            &["0", "x", "-z", "0"],
            &["1", "0", "0", "-z"],
        ]);
        assert_eq!(lam, expected);
        assert_eq!(image_equation(&lam).unwrap(), p("(z^2 - x*y)^2"));
        assert_eq!(invariant_t(&lam, 64).unwrap(), Codim::Finite(1));
        let f1 = fitting_ideal(&lam, 1).unwrap();
        assert!(f1.generators().iter().all(|g| g.div_exact(&p("z^2 - x*y")).is_some()));
    }

    #[test]
    fn cross_cap_and_cusp_edge() {
        let cc = presentation_matrix(&MapGerm::parse("s; t^2; s*t").unwrap()).unwrap();
        assert_eq!(image_equation(&cc).unwrap(), p("z^2 - x^2*y"));
        assert_eq!(invariant_t(&cc, 64).unwrap(), Codim::Finite(0));
        let ce = presentation_matrix(&MapGerm::parse("s; t^2; t^3").unwrap()).unwrap();
        assert_eq!(ce, mat(&[&["-z", "y^2"], &["y", "-z"]]));
        let f1 = fitting_ideal(&ce, 1).unwrap();
        assert_eq!(quotient_codim(&f1, 64), Codim::Infinite);
    }

    #[test]
    fn f0_is_principal_det() {
        let lam = presentation_matrix(&MapGerm::parse("s; t^3; s*t + t^5").unwrap()).unwrap();
        let f0 = fitting_ideal(&lam, 0).unwrap();
        assert_eq!(f0.generators().len(), 1);
        assert_eq!(f0.generators()[0], image_equation(&lam).unwrap());
    }

    #[test]
    fn general_rejected() {
        let g = MapGerm::parse("s^2*t^2; s^4+t^4; s*t*(s^4-t^4)").unwrap();
        assert!(matches!(presentation_matrix(&g), Err(GermError::NoPresentation)));
    }
}
