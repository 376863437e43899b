//! Sparse multivariate polynomials over ℚ(i) with named variables.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::gauss::GaussRational;
use super::ArithError;

/// Exponent vector, ordered graded-lexicographically (total degree first,
/// then the first variable dominates).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&o.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    /// `o / self`, assuming `self` divides `o`.
    pub fn quotient_of(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| b - a).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree()
            .cmp(&o.degree())
            .then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

pub type Vars = Arc<[String]>;

pub fn vars_of(names: &[&str]) -> Vars {
    names.iter().map(|s| s.to_string()).collect::<Vec<_>>().into()
}

#[derive(Clone, Debug)]
pub struct MultiPoly {
    vars: Vars,
    terms: BTreeMap<Monomial, GaussRational>,
}

impl MultiPoly {
    pub fn zero(vars: &Vars) -> Self {
        MultiPoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(c: GaussRational, vars: &Vars) -> Self {
        let mut p = MultiPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn one(vars: &Vars) -> Self {
        MultiPoly::constant(GaussRational::one(), vars)
    }

    pub fn int(n: i64, vars: &Vars) -> Self {
        MultiPoly::constant(GaussRational::from_int(n), vars)
    }

    /// The variable `name`, which must belong to `vars`.
    pub fn var(name: &str, vars: &Vars) -> Self {
        let k = vars
            .iter()
            .position(|v| v == name)
            .unwrap_or_else(|| panic!("variable {name} not in list"));
        let mut e = vec![0; vars.len()];
        e[k] = 1;
        MultiPoly::monomial(GaussRational::one(), Monomial(e), vars)
    }

    pub fn monomial(c: GaussRational, m: Monomial, vars: &Vars) -> Self {
        assert_eq!(m.0.len(), vars.len());
        let mut p = MultiPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(vars: &Vars, terms: impl IntoIterator<Item = (Monomial, GaussRational)>) -> Self {
        let mut p = MultiPoly::zero(vars);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussRational)> {
        self.terms.iter()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_term(&self) -> GaussRational {
        self.terms
            .get(&Monomial::one(self.vars.len()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussRational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Graded-lex largest term.
    pub fn leading_term(&self) -> Option<(&Monomial, &GaussRational)> {
        self.terms.iter().next_back()
    }

    /// Graded-lex smallest term.
    pub fn lowest_term(&self) -> Option<(&Monomial, &GaussRational)> {
        self.terms.iter().next()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Minimal total degree of a term (vanishing order at the origin).
    pub fn local_order(&self) -> Result<u32, ArithError> {
        self.terms
            .keys()
            .map(Monomial::degree)
            .min()
            .ok_or(ArithError::ZeroPolynomial)
    }

    pub fn degree_in(&self, k: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[k]).max()
    }

    pub fn min_degree_in(&self, k: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[k]).min()
    }

    /// Indices of the variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.vars.len())
            .filter(|&k| self.terms.keys().any(|m| m.0[k] > 0))
            .collect()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: &GaussRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &GaussRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Multiply by `c · x^m`.
    pub fn mul_term(&self, m: &Monomial, c: &GaussRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(&self.vars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Terms of total degree ≤ `max_deg`.
    pub fn truncate(&self, max_deg: u32) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= max_deg)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Homogeneous part of the given degree.
    pub fn homogeneous_part(&self, deg: u32) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == deg)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn derivative(&self, name: &str) -> MultiPoly {
        let Some(k) = self.var_index(name) else {
            return MultiPoly::zero(&self.vars);
        };
        let mut out = MultiPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            if m.0[k] == 0 {
                continue;
            }
            let mut e = m.clone();
            e.0[k] -= 1;
            out.add_term(e, &(c * &GaussRational::from_int(m.0[k] as i64)));
        }
        out
    }

    /// Coefficient of `var^e` viewed as a polynomial in the remaining
    /// variables (same variable list, `var` absent).
    pub fn coeff_in(&self, k: usize, e: u32) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            if m.0[k] == e {
                let mut m2 = m.clone();
                m2.0[k] = 0;
                out.add_term(m2, c);
            }
        }
        out
    }

    /// Leading coefficient w.r.t. variable index `k`.
    pub fn lead_coeff_in(&self, k: usize) -> MultiPoly {
        match self.degree_in(k) {
            Some(d) => self.coeff_in(k, d),
            None => MultiPoly::zero(&self.vars),
        }
    }

    /// Express over a different variable list. Fails if a variable that
    /// occurs is missing from `vars`.
    pub fn with_vars(&self, vars: &Vars) -> Result<MultiPoly, ArithError> {
        if *vars == self.vars {
            return Ok(MultiPoly { vars: vars.clone(), terms: self.terms.clone() });
        }
        let map: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v))
            .collect();
        let mut out = MultiPoly::zero(vars);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; vars.len()];
            for (k, &x) in m.0.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                match map[k] {
                    Some(j) => e[j] = x,
                    None => return Err(ArithError::UnknownVariable(self.vars[k].clone())),
                }
            }
            out.add_term(Monomial(e), c);
        }
        Ok(out)
    }

    /// Bring two polynomials onto a common variable list (self's order first).
    pub fn align(&self, o: &MultiPoly) -> (MultiPoly, MultiPoly) {
        if self.vars == o.vars {
            return (self.clone(), o.with_vars(&self.vars).unwrap());
        }
        let vars = union_vars(&self.vars, &o.vars);
        (self.with_vars(&vars).unwrap(), o.with_vars(&vars).unwrap())
    }

    /// Substitute polynomials for variables. Unbound variables stay.
    /// The result lives over the union of the remaining and introduced variables.
    pub fn substitute(&self, bindings: &[(&str, MultiPoly)]) -> MultiPoly {
        let mut vars: Vars = self.vars.clone();
        for (_, p) in bindings {
            vars = union_vars(&vars, p.vars());
        }
        let images: Vec<MultiPoly> = self
            .vars
            .iter()
            .map(|v| match bindings.iter().find(|(n, _)| n == v) {
                Some((_, p)) => p.with_vars(&vars).unwrap(),
                None => MultiPoly::var(v, &vars),
            })
            .collect();
        // cache powers per variable
        let mut cache: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|p| vec![MultiPoly::one(&vars), p.clone()])
            .collect();
        let mut out = MultiPoly::zero(&vars);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(c.clone(), &vars);
            for (k, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[k].len() <= e as usize {
                    let next = cache[k].last().unwrap() * &images[k];
                    cache[k].push(next);
                }
                t = &t * &cache[k][e as usize];
            }
            out = &out + &t;
        }
        out.drop_unused_bound(bindings)
    }

    fn drop_unused_bound(self, bindings: &[(&str, MultiPoly)]) -> MultiPoly {
        // Variables that were substituted away and do not reappear in an
        // image are removed from the list.
        let keep: Vec<String> = self
            .vars
            .iter()
            .enumerate()
            .filter(|(k, v)| {
                let bound = bindings.iter().any(|(n, _)| n == *v);
                let introduced = bindings.iter().any(|(_, p)| p.var_index(v).is_some());
                !bound || introduced || self.terms.keys().any(|m| m.0[*k] > 0)
            })
            .map(|(_, v)| v.clone())
            .collect();
        if keep.len() == self.vars.len() {
            return self;
        }
        let vars: Vars = keep.into();
        self.with_vars(&vars).unwrap()
    }

    /// Specialize one variable to a constant, keeping the variable list.
    pub fn eval_var(&self, k: usize, v: &GaussRational) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.vars);
        let mut pows: Vec<GaussRational> = vec![GaussRational::one()];
        for (m, c) in &self.terms {
            let e = m.0[k] as usize;
            while pows.len() <= e {
                let nx = pows.last().unwrap() * v;
                pows.push(nx);
            }
            let mut m2 = m.clone();
            m2.0[k] = 0;
            out.add_term(m2, &(c * &pows[e]));
        }
        out
    }

    /// Scale so that the graded-lex lowest term has coefficient 1.
    pub fn normalize_lowest(&self) -> MultiPoly {
        match self.lowest_term() {
            Some((_, c)) => self.scale(&c.inv().unwrap()),
            None => self.clone(),
        }
    }

    /// Scale so that the graded-lex leading term has coefficient 1.
    pub fn monic(&self) -> MultiPoly {
        match self.leading_term() {
            Some((_, c)) => self.scale(&c.inv().unwrap()),
            None => self.clone(),
        }
    }

    /// Is `o` a nonzero constant multiple of `self`?
    pub fn proportional(&self, o: &MultiPoly) -> bool {
        if self.is_zero() || o.is_zero() {
            return self.is_zero() && o.is_zero();
        }
        let (a, b) = self.align(o);
        let (ma, ca) = a.leading_term().unwrap();
        let Some(cb) = b.terms.get(ma) else { return false };
        let r = cb / ca;
        a.scale(&r) == b
    }

    /// Divided difference `(f(var) − f(var')) / (var − var')`, the result
    /// living over the variables of `f` plus `var'` appended.
    pub fn divided_difference(&self, var: &str) -> MultiPoly {
        let primed = format!("{var}'");
        let k = self.var_index(var).expect("variable not present");
        let mut names: Vec<String> = self.vars.to_vec();
        if !names.contains(&primed) {
            names.push(primed.clone());
        }
        let vars: Vars = names.into();
        let kp = vars.iter().position(|v| *v == primed).unwrap();
        let base = self.with_vars(&vars).unwrap();
        let mut out = MultiPoly::zero(&vars);
        // x^e − x'^e = (x − x') Σ_{a+b=e−1} x^a x'^b
        for (m, c) in &base.terms {
            let e = m.0[k];
            if e == 0 {
                continue;
            }
            for a in 0..e {
                let mut m2 = m.clone();
                m2.0[k] = a;
                m2.0[kp] = m2.0[kp].checked_add(e - 1 - a).expect("exponent overflow");
                out.add_term(m2, c);
            }
        }
        out
    }

    /// Rename variable `from` to `to` (which may be new).
    pub fn rename(&self, from: &str, to: &str) -> MultiPoly {
        let mut names: Vec<String> = self.vars.to_vec();
        if let Some(k) = names.iter().position(|v| v == from) {
            if names.iter().any(|v| v == to) {
                // merge into existing variable
                let target = vars_from(&names);
                return self.substitute(&[(from, MultiPoly::var(to, &target))]);
            }
            names[k] = to.to_string();
        }
        MultiPoly { vars: names.into(), terms: self.terms.clone() }
    }
}

fn vars_from(names: &[String]) -> Vars {
    names.to_vec().into()
}

pub fn union_vars(a: &Vars, b: &Vars) -> Vars {
    if a == b {
        return a.clone();
    }
    let mut out: Vec<String> = a.to_vec();
    for v in b.iter() {
        if !out.contains(v) {
            out.push(v.clone());
        }
    }
    out.into()
}

impl PartialEq for MultiPoly {
    fn eq(&self, o: &Self) -> bool {
        if self.vars == o.vars {
            return self.terms == o.terms;
        }
        let (a, b) = self.align(o);
        a.terms == b.terms
    }
}

impl Eq for MultiPoly {}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        if self.vars != o.vars {
            let (a, b) = self.align(o);
            return &a + &b;
        }
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        if self.vars != o.vars {
            let (a, b) = self.align(o);
            return &a - &b;
        }
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        if self.vars != o.vars {
            let (a, b) = self.align(o);
            return &a * &b;
        }
        let mut out = MultiPoly::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&GaussRational::from_int(-1))
    }
}

macro_rules! forward_poly {
    ($tr:ident, $m:ident) => {
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, o: MultiPoly) -> MultiPoly {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, o: &MultiPoly) -> MultiPoly {
                (&self).$m(o)
            }
        }
    };
}
forward_poly!(Add, add);
forward_poly!(Sub, sub);
forward_poly!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        (&self).neg()
    }
}

fn coeff_is_negative(c: &GaussRational) -> bool {
    use num_traits::Signed;
    if c.re().is_zero() {
        c.im().is_negative()
    } else {
        c.im().is_zero() && c.re().is_negative()
    }
}

fn fmt_monomial(m: &Monomial, vars: &[String]) -> String {
    let mut parts = Vec::new();
    for (k, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(vars[k].clone()),
            _ => parts.push(format!("{}^{}", vars[k], e)),
        }
    }
    parts.join("*")
}

/// Canonical form: graded-lex descending terms, e.g. `x^2*y - z^2`.
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = coeff_is_negative(c);
            let shown = if neg && idx > 0 { -c } else { c.clone() };
            if idx > 0 {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{shown}")?;
                continue;
            }
            let mono = fmt_monomial(m, &self.vars);
            if shown.is_one() {
                write!(f, "{mono}")?;
            } else if shown == GaussRational::from_int(-1) {
                write!(f, "-{mono}")?;
            } else {
                write!(f, "{shown}*{mono}")?;
            }
        }
        Ok(())
    }
}
