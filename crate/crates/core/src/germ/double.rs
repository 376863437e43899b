//! Double-point data: the reduced double curve d, the lifted double-point
//! ideal, and the cofactor d♯ of a transverse section.

use super::{source_vars, GermError, MapGerm};
use crate::arith::{vars_of, MultiPoly, PolyMatrix};
use crate::local::LocalIdeal;

/// M_i: the 2×2 minor of the Jacobian with row i removed.
pub fn jacobian_minors(germ: &MapGerm) -> [MultiPoly; 3] {
    let ds: Vec<MultiPoly> = (0..3).map(|i| germ.phi(i).derivative("s")).collect();
    let dt: Vec<MultiPoly> = (0..3).map(|i| germ.phi(i).derivative("t")).collect();
    let minor = |a: usize, b: usize| &(&ds[a] * &dt[b]) - &(&dt[a] * &ds[b]);
    [minor(1, 2), minor(0, 2), minor(0, 1)]
}

/// d = Φ*(∂_i f)/M_i, checked to agree (up to a constant) across every
/// index with M_i ≠ 0, and scaled so its lowest term has coefficient 1.
pub fn double_curve(germ: &MapGerm, f: &MultiPoly) -> Result<MultiPoly, GermError> {
    let minors = jacobian_minors(germ);
    let mut found: Option<(usize, MultiPoly)> = None;
    for (i, var) in ["x", "y", "z"].iter().enumerate() {
        let m = &minors[i];
        if m.is_zero() {
            continue;
        }
        let pulled = germ.pullback(&f.derivative(var));
        let q = pulled.div_exact(m).ok_or_else(|| {
            GermError::DoubleCurve(format!(
                "Φ*(∂{var} f) is not divisible by M{}; is f the image equation of this germ?",
                i + 1
            ))
        })?;
        if q.is_zero() {
            return Err(GermError::DoubleCurve(format!(
                "Φ*(∂{var} f) vanishes identically: f is not reduced"
            )));
        }
        match &found {
            None => found = Some((i, q)),
            Some((j, d)) => {
                if !d.proportional(&q) {
                    return Err(GermError::DoubleCurve(format!(
                        "indices {} and {} disagree: {d} vs {q}",
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
    }
    let (_, d) = found.ok_or_else(|| GermError::DoubleCurve("all Jacobian minors vanish".into()))?;
    Ok(d.normalize_lowest())
}

/// The 3×2 matrix α with Φ_i(s,t) − Φ_i(s',t') = α_i1 (s−s') + α_i2 (t−t'),
/// priming s first and then t.
pub fn divided_difference_matrix(germ: &MapGerm) -> PolyMatrix {
    let vars = vars_of(&["s", "t", "s'", "t'"]);
    let mut alpha = PolyMatrix::zeros(3, 2, &vars);
    for i in 0..3 {
        let p = germ.phi(i);
        let a1 = p.divided_difference("s").with_vars(&vars).unwrap();
        let a2 = p
            .rename("s", "s'")
            .divided_difference("t")
            .with_vars(&vars)
            .unwrap();
        alpha.set(i, 0, a1);
        alpha.set(i, 1, a2);
    }
    alpha
}

/// Generators (Φ×Φ)*(I_Δ) + R₂(α) of the lifted double-point ideal.
pub fn double_lift_ideal(germ: &MapGerm) -> Result<LocalIdeal, GermError> {
    let vars = vars_of(&["s", "t", "s'", "t'"]);
    let mut gens = Vec::new();
    for i in 0..3 {
        let p = germ.phi(i).with_vars(&vars)?;
        let primed = p.rename("s", "s'").rename("t", "t'").with_vars(&vars)?;
        gens.push(&p - &primed);
    }
    gens.extend(divided_difference_matrix(germ).minors(2));
    Ok(LocalIdeal::new(&vars, gens)?)
}

/// d♯ with Φ*(h) = d · d♯.
pub fn sectional_cofactor(germ: &MapGerm, d: &MultiPoly, h: &MultiPoly) -> Result<MultiPoly, GermError> {
    let pulled = germ.pullback(h);
    pulled
        .div_exact(d)
        .map(|q| q.with_vars(&source_vars()).unwrap())
        .ok_or_else(|| GermError::DoubleCurve(format!("d = {d} does not divide Φ*(H)")))
}
