//! Exact division and multivariate gcd (recursive primitive PRS).

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gauss::GaussRational;

use super::poly::{Monomial, MultiPoly};

impl MultiPoly {
    /// `self / d` when the division is exact, `None` otherwise.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let (mut r, d) = self.align(d);
        let (ld, lc) = d.leading_term().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let lc_inv = lc.inv().unwrap();
        let mut q = MultiPoly::zero(r.vars());
        while let Some((lm, c)) = r.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            if !ld.divides(&lm) {
                return None;
            }
            let m = ld.quotient_of(&lm);
            let k = &c * &lc_inv;
            q.add_term(m.clone(), &k);
            r = &r - &d.mul_term(&m, &k);
        }
        Some(q)
    }

    /// Pseudo-remainder of `self` by `b` w.r.t. variable index `k`.
    fn prem(&self, b: &MultiPoly, k: usize) -> MultiPoly {
        let db = b.degree_in(k).unwrap_or(0);
        let lb = b.lead_coeff_in(k);
        let mut r = self.clone();
        while !r.is_zero() {
            let dr = r.degree_in(k).unwrap();
            if dr < db {
                break;
            }
            let lr = r.lead_coeff_in(k);
            let mut shift = vec![0u32; r.vars().len()];
            shift[k] = dr - db;
            let t = (&lr * b).mul_term(&Monomial(shift), &super::gauss::GaussRational::from_int(1));
            r = &(&lb * &r) - &t;
        }
        r
    }

    /// Coefficients of `self` as a polynomial in variable `k`.
    fn coeffs_in(&self, k: usize) -> Vec<MultiPoly> {
        let d = self.degree_in(k).unwrap_or(0);
        (0..=d).map(|e| self.coeff_in(k, e)).filter(|c| !c.is_zero()).collect()
    }

    /// Content w.r.t. variable `k`: gcd of the coefficients.
    fn content_in(&self, k: usize) -> MultiPoly {
        let mut g = MultiPoly::zero(self.vars());
        for c in self.coeffs_in(k) {
            g = gcd(&g, &c);
            if g.is_constant() {
                break;
            }
        }
        g
    }

    fn primitive_in(&self, k: usize) -> MultiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content_in(k);
        self.div_exact(&c).expect("content divides")
    }

    /// Square-free test: gcd with all partial derivatives is constant.
    pub fn is_squarefree(&self) -> bool {
        let mut g = self.clone();
        for v in self.vars().iter() {
            let d = self.derivative(v);
            g = gcd(&g, &d);
            if g.is_constant() {
                return true;
            }
        }
        g.is_constant()
    }

    /// Square-free part `f / gcd(f, f', …)` (up to a constant).
    pub fn squarefree_part(&self) -> MultiPoly {
        let mut g = self.clone();
        for v in self.vars().iter() {
            g = gcd(&g, &self.derivative(v));
        }
        self.div_exact(&g).expect("gcd divides")
    }
}

/// Greatest common divisor, normalized monic in graded-lex (or zero).
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let (a, b) = a.align(b);
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(a.vars());
    }
    let sa = a.support();
    let sb = b.support();
    let k = *sa.iter().chain(sb.iter()).min().unwrap();
    let in_a = sa.contains(&k);
    let in_b = sb.contains(&k);
    if !in_a {
        return gcd(&a, &b.content_in(k));
    }
    if !in_b {
        return gcd(&a.content_in(k), &b);
    }
    let ca = a.content_in(k);
    let cb = b.content_in(k);
    let c = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).unwrap();
    let mut q = b.div_exact(&cb).unwrap();
    if coprime_by_specialization(&p, &q, k) {
        return c.monic();
    }
    if p.degree_in(k) < q.degree_in(k) {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() && q.degree_in(k).unwrap_or(0) > 0 {
        let r = p.prem(&q, k);
        p = q;
        q = if r.is_zero() { r } else { r.primitive_in(k) };
    }
    let g = if q.is_zero() {
        p
    } else {
        // q has degree 0 in k: p and q coprime in this variable
        MultiPoly::one(a.vars())
    };
    let g = if g.degree_in(k).unwrap_or(0) == 0 {
        MultiPoly::one(a.vars())
    } else {
        g.primitive_in(k)
    };
    (&c * &g).monic()
}

/// Certifies that `p` and `q` have no common factor involving variable `k`:
/// evaluate every other variable at a point where both leading coefficients
/// survive; a common factor would survive with positive degree.
fn coprime_by_specialization(p: &MultiPoly, q: &MultiPoly, k: usize) -> bool {
    let n = p.vars().len();
    if p.support().len() <= 1 && q.support().len() <= 1 {
        return false;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x6763_6473_7063_6c7a);
    for _ in 0..3 {
        let point: Vec<GaussRational> = (0..n).map(|_| GaussRational::from_int(rng.gen_range(-17..=17))).collect();
        let eval = |f: &MultiPoly| {
            let mut out = f.clone();
            for j in (0..n).filter(|&j| j != k) {
                out = out.eval_var(j, &point[j]);
            }
            out
        };
        let (pe, qe) = (eval(p), eval(q));
        if pe.degree_in(k) != p.degree_in(k) || qe.degree_in(k) != q.degree_in(k) {
            continue;
        }
        if gcd(&pe, &qe).is_constant() {
            return true;
        }
    }
    false
}

/// Does `p` vanish at the origin?
pub fn vanishes_at_origin(p: &MultiPoly) -> bool {
    p.constant_term().is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse::parse_poly;
    use crate::arith::poly::vars_of;

    #[test]
    fn exact_division() {
        let v = vars_of(&["s", "t"]);
        let a = parse_poly("(s+t)*(s-2*t^2)", &v).unwrap();
        let b = parse_poly("s-2*t^2", &v).unwrap();
        assert_eq!(a.div_exact(&b).unwrap(), parse_poly("s+t", &v).unwrap());
        assert!(a.div_exact(&parse_poly("s+1", &v).unwrap()).is_none());
    }

    #[test]
    fn gcd_bivariate() {
        let v = vars_of(&["x", "y"]);
        let f = parse_poly("(x^2+y^3)*(x-y)*(y+i*x)", &v).unwrap();
        let g = parse_poly("(x^2+y^3)*(x+y)^2", &v).unwrap();
        let h = gcd(&f, &g);
        assert!(h.proportional(&parse_poly("x^2+y^3", &v).unwrap()));
        assert!(gcd(&parse_poly("x", &v).unwrap(), &parse_poly("y", &v).unwrap()).is_constant());
    }

    #[test]
    fn gcd_trivariate_and_squarefree() {
        let v = vars_of(&["x", "y", "z"]);
        let f = parse_poly("(z^2-x*y)^2", &v).unwrap();
        assert!(!f.is_squarefree());
        assert!(f.squarefree_part().proportional(&parse_poly("z^2-x*y", &v).unwrap()));
        let g = parse_poly("x^2*y - z^2", &v).unwrap();
        assert!(g.is_squarefree());
        let a = parse_poly("(x+y*z)*(x-z)", &v).unwrap();
        let b = parse_poly("(x+y*z)*(y-z^2)", &v).unwrap();
        assert!(gcd(&a, &b).proportional(&parse_poly("x+y*z", &v).unwrap()));
    }
}
