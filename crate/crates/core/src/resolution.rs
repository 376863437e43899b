//! Embedded resolution of plane-curve germs by point blow-ups.
//!
//! Every infinitely-near point carries local coordinates (u, v); the
//! exceptional divisors through it are coordinate axes. Blowing up uses the
//! chart u = u, v = u·w (points w = c on the new divisor) and the chart
//! u = u'·v, v = v for the single point at infinity.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{gcd, vars_of, GaussRational, Monomial, MultiPoly, Vars};
use crate::local::LocalError;
use crate::plumbing::{PlumbingGraph, Sign};

/// Blow-ups allowed per branch before giving up.
pub const MAX_BLOWUPS_PER_BRANCH: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResolutionError {
    #[error("a curve needs at least one branch")]
    Empty,
    #[error("branch {0} is not a polynomial in two variables")]
    NotPlane(usize),
    #[error("branch {0} does not pass through the origin")]
    NotAtOrigin(usize),
    #[error("branch {0} is not square-free")]
    NotSquarefree(usize),
    #[error("branches {0} and {1} share a component")]
    CommonComponent(usize, usize),
    #[error("branch {branch}: infinitely-near points are roots of {poly}, which has no root in ℚ(i)")]
    Irrational { branch: usize, poly: String },
    #[error("branch {0} still unresolved after {MAX_BLOWUPS_PER_BRANCH} blow-ups")]
    TooManyBlowUps(usize),
    #[error(transparent)]
    Local(#[from] LocalError),
}

/// Γ: vertices are exceptional divisors E_1, …, E_n (ids 1..=n in the
/// order they were created), all of genus 0. Branches are the local
/// branches of the input polynomials, ordered by input and then by the
/// order in which their arrows were found; an input that is irreducible at
/// the origin keeps its index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddedResolutionGraph {
    euler: Vec<i64>,
    edges: Vec<(usize, usize)>,
    arrows: Vec<usize>,
    mult: Vec<Vec<u64>>,
    /// Input polynomial of each branch.
    origin: Vec<usize>,
}

struct Point {
    divisors: Vec<(usize, u8)>,
    branches: Vec<(usize, MultiPoly)>,
}

struct Tower {
    euler: Vec<i64>,
    edges: Vec<(usize, usize)>,
    /// (input, vertex) in the order found.
    arrows: Vec<(usize, usize)>,
    /// Vanishing order of each input along each E_v.
    mult: Vec<Vec<u64>>,
    blowups: Vec<usize>,
}

fn uv() -> Vars {
    vars_of(&["u", "v"])
}

/// Lowest homogeneous part as a univariate polynomial h(1, w) in v, plus its degree.
fn tangent_cone(f: &MultiPoly) -> (MultiPoly, u32) {
    let o = f.local_order().expect("nonzero branch");
    let terms = f
        .terms()
        .filter(|(m, _)| m.degree() == o)
        .map(|(m, c)| (Monomial(vec![0, m.0[1]]), c.clone()));
    (MultiPoly::from_terms(f.vars(), terms), o)
}

enum Direction {
    /// the point w = c of the chart u = u, v = u·w
    Finite(GaussRational),
    /// the point at infinity, on the chart u = u'·v
    Infinity,
}

/// Points of the new divisor through which the strict transform passes.
fn directions(branch: usize, f: &MultiPoly) -> Result<Vec<Direction>, ResolutionError> {
    let (g, o) = tangent_cone(f);
    let dg = g.degree_in(1).unwrap_or(0);
    let sq = if dg > 0 { g.div_exact(&gcd(&g, &g.derivative("v"))).unwrap() } else { g.clone() };
    let mut out = Vec::new();
    match sq.degree_in(1).unwrap_or(0) {
        0 => {}
        1 => {
            let c0 = sq.coeff_in(1, 0).constant_term();
            let c1 = sq.coeff_in(1, 1).constant_term();
            out.push(Direction::Finite(-(&c0 / &c1)));
        }
        _ => {
            let (roots, rest) = gaussian_roots(&sq);
            if rest.degree_in(1).unwrap_or(0) > 0 {
                return Err(ResolutionError::Irrational { branch, poly: rest.to_string() });
            }
            out.extend(roots.into_iter().map(Direction::Finite));
        }
    }
    if dg < o {
        out.push(Direction::Infinity);
    }
    Ok(out)
}

fn chart_finite(f: &MultiPoly, o: u32, c: &GaussRational) -> MultiPoly {
    let vars = f.vars().clone();
    let moved = MultiPoly::from_terms(
        &vars,
        f.terms().map(|(m, k)| (Monomial(vec![m.0[0] + m.0[1] - o, m.0[1]]), k.clone())),
    );
    if c.is_zero() {
        return moved;
    }
    let shift = &MultiPoly::var("v", &vars) + &MultiPoly::constant(c.clone(), &vars);
    moved.substitute(&[("v", shift)]).with_vars(&vars).unwrap()
}

fn chart_infinite(f: &MultiPoly, o: u32) -> MultiPoly {
    MultiPoly::from_terms(
        f.vars(),
        f.terms().map(|(m, k)| (Monomial(vec![m.0[0], m.0[0] + m.0[1] - o]), k.clone())),
    )
}

fn through_origin(f: &MultiPoly) -> bool {
    f.constant_term().is_zero()
}

impl Tower {
    fn process(&mut self, p: Point) -> Result<(), ResolutionError> {
        if p.branches.is_empty() {
            return Ok(());
        }
        if p.divisors.len() == 1 && p.branches.len() == 1 {
            let (i, f) = &p.branches[0];
            let (v, axis) = p.divisors[0];
            if f.local_order().unwrap() == 1 {
                // transverse to u = 0 needs a v-term, to v = 0 a u-term
                let other = Monomial(if axis == 0 { vec![0, 1] } else { vec![1, 0] });
                if !f.coeff(&other).is_zero() {
                    self.arrows.push((*i, v));
                    return Ok(());
                }
            }
        }
        // blow up
        let new = self.euler.len();
        self.euler.push(-1);
        for &(w, _) in &p.divisors {
            self.euler[w] -= 1;
        }
        if let [(a, _), (b, _)] = p.divisors[..] {
            let key = (a.min(b), a.max(b));
            self.edges.retain(|e| *e != key);
        }
        for &(w, _) in &p.divisors {
            self.edges.push((w, new));
        }
        for (i, row) in self.mult.iter_mut().enumerate() {
            let here = p
                .branches
                .iter()
                .find(|(j, _)| *j == i)
                .map(|(_, f)| f.local_order().unwrap() as u64)
                .unwrap_or(0);
            let m = p.divisors.iter().map(|&(w, _)| row[w]).sum::<u64>() + here;
            row.push(m);
        }

        let mut finite: Vec<(GaussRational, Vec<(usize, MultiPoly)>)> = Vec::new();
        let mut infinite: Vec<(usize, MultiPoly)> = Vec::new();
        for (i, f) in p.branches {
            self.blowups[i] += 1;
            if self.blowups[i] > MAX_BLOWUPS_PER_BRANCH {
                return Err(ResolutionError::TooManyBlowUps(i));
            }
            let o = f.local_order().unwrap();
            for dir in directions(i, &f)? {
                match dir {
                    Direction::Finite(c) => {
                        let g = chart_finite(&f, o, &c);
                        debug_assert!(through_origin(&g));
                        match finite.iter_mut().find(|(d, _)| *d == c) {
                            Some((_, list)) => list.push((i, g)),
                            None => finite.push((c, vec![(i, g)])),
                        }
                    }
                    Direction::Infinity => infinite.push((i, chart_infinite(&f, o))),
                }
            }
        }
        finite.sort_by(|a, b| a.0.cmp_key(&b.0));
        let old_axis = |ax: u8| p.divisors.iter().find(|d| d.1 == ax).map(|d| d.0);
        for (c, branches) in finite {
            let mut divisors = vec![(new, 0)];
            if c.is_zero() {
                if let Some(w) = old_axis(1) {
                    divisors.push((w, 1));
                }
            }
            self.process(Point { divisors, branches })?;
        }
        if !infinite.is_empty() {
            let mut divisors = vec![(new, 1)];
            if let Some(w) = old_axis(0) {
                divisors.push((w, 0));
            }
            self.process(Point { divisors, branches: infinite })?;
        }
        Ok(())
    }
}

/// Resolve the curve with the given branches (each in the same two variables).
pub fn resolve_curve(branches: &[MultiPoly]) -> Result<EmbeddedResolutionGraph, ResolutionError> {
    if branches.is_empty() {
        return Err(ResolutionError::Empty);
    }
    let mut names: Vec<String> = Vec::new();
    for b in branches {
        for n in b.vars().iter() {
            if !names.contains(n) {
                names.push(n.clone());
            }
        }
    }
    let used = |b: &MultiPoly, n: &str| b.var_index(n).is_some_and(|k| b.degree_in(k).unwrap_or(0) > 0);
    if names.len() > 2 {
        names.retain(|n| branches.iter().any(|b| used(b, n)));
    }
    if names.len() > 2 {
        let i = branches.iter().position(|b| names[2..].iter().any(|n| used(b, n))).unwrap_or(0);
        return Err(ResolutionError::NotPlane(i));
    }
    while names.len() < 2 {
        names.push(format!("_{}", names.len()));
    }
    let common = vars_of(&[names[0].as_str(), names[1].as_str()]);
    let mut local = Vec::new();
    for (i, b) in branches.iter().enumerate() {
        let b = b.with_vars(&common).map_err(|_| ResolutionError::NotPlane(i))?;
        let f = MultiPoly::from_terms(&uv(), b.terms().map(|(m, c)| (m.clone(), c.clone())));
        if f.is_zero() || !through_origin(&f) {
            return Err(ResolutionError::NotAtOrigin(i));
        }
        if !f.is_squarefree() {
            return Err(ResolutionError::NotSquarefree(i));
        }
        local.push(f);
    }
    for i in 0..local.len() {
        for k in i + 1..local.len() {
            if !gcd(&local[i], &local[k]).is_constant() {
                return Err(ResolutionError::CommonComponent(i, k));
            }
        }
    }
    let n = local.len();
    let mut tower = Tower {
        euler: Vec::new(),
        edges: Vec::new(),
        arrows: Vec::new(),
        mult: vec![Vec::new(); n],
        blowups: vec![0; n],
    };
    tower.process(Point { divisors: Vec::new(), branches: local.into_iter().enumerate().collect() })?;
    let mut edges: Vec<(usize, usize)> = tower.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    edges.sort();
    // stable: keeps discovery order within an input
    tower.arrows.sort_by_key(|&(i, _)| i);
    let mut g = EmbeddedResolutionGraph {
        euler: tower.euler,
        edges,
        arrows: tower.arrows.iter().map(|&(_, v)| v).collect(),
        mult: Vec::new(),
        origin: tower.arrows.iter().map(|&(i, _)| i).collect(),
    };
    let im = g.intersection_matrix();
    g.mult = g.arrows.iter().map(|&v| branch_multiplicities(&im, v)).collect();
    // the branches of each input add up to its vanishing orders
    for (i, orders) in tower.mult.iter().enumerate() {
        let mut sum = vec![0u64; g.vertex_count()];
        for (b, row) in g.mult.iter().enumerate().filter(|(b, _)| g.origin[*b] == i) {
            let _ = b;
            for (s, m) in sum.iter_mut().zip(row) {
                *s += m;
            }
        }
        assert_eq!(&sum, orders, "multiplicities of input {i} disagree with the blow-up orders");
    }
    Ok(g)
}

impl EmbeddedResolutionGraph {
    /// Assemble from explicit data (0-based vertex indices); checks shape only.
    pub fn from_parts(
        euler: Vec<i64>,
        edges: Vec<(usize, usize)>,
        arrows: Vec<usize>,
        mult: Vec<Vec<u64>>,
    ) -> Result<Self, String> {
        let n = euler.len();
        if edges.iter().any(|&(a, b)| a >= n || b >= n || a == b) {
            return Err("edge endpoint out of range".into());
        }
        if arrows.iter().any(|&v| v >= n) || mult.len() != arrows.len() || mult.iter().any(|r| r.len() != n) {
            return Err("arrow or multiplicity table has the wrong shape".into());
        }
        let mut edges: Vec<(usize, usize)> = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        edges.sort();
        let origin = (0..arrows.len()).collect();
        Ok(EmbeddedResolutionGraph { euler, edges, arrows, mult, origin })
    }

    pub fn vertex_count(&self) -> usize {
        self.euler.len()
    }

    pub fn branch_count(&self) -> usize {
        self.arrows.len()
    }

    /// Index of the input polynomial branch `b` belongs to.
    pub fn origin(&self, b: usize) -> usize {
        self.origin[b]
    }

    pub fn euler(&self, v: usize) -> i64 {
        self.euler[v]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// v(i): the vertex carrying the arrowhead of branch i.
    pub fn arrow(&self, i: usize) -> usize {
        self.arrows[i]
    }

    pub fn multiplicity(&self, i: usize, v: usize) -> u64 {
        self.mult[i][v]
    }

    pub fn intersection_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.vertex_count();
        let mut m = vec![vec![0i64; n]; n];
        for v in 0..n {
            m[v][v] = self.euler[v];
        }
        for &(a, b) in &self.edges {
            m[a][b] += 1;
            m[b][a] += 1;
        }
        m
    }

    /// Σ_v m_i(v)(E_v·E_w) + (D̃_i·E_w), per branch i and vertex w.
    pub fn mult_residual(&self) -> Vec<Vec<i64>> {
        let im = self.intersection_matrix();
        let n = self.vertex_count();
        (0..self.branch_count())
            .map(|i| {
                (0..n)
                    .map(|w| {
                        let s: i64 = (0..n).map(|v| self.mult[i][v] as i64 * im[v][w]).sum();
                        s + i64::from(self.arrows[i] == w)
                    })
                    .collect()
            })
            .collect()
    }

    /// All leading principal minors alternate in sign, starting negative.
    pub fn is_negative_definite(&self) -> bool {
        let im = self.intersection_matrix();
        (1..=im.len()).all(|k| {
            let sub: Vec<Vec<i64>> = im[..k].iter().map(|r| r[..k].to_vec()).collect();
            let d = int_det(&sub);
            if k % 2 == 1 {
                d.is_negative()
            } else {
                d.is_positive()
            }
        })
    }

    /// D_i·D_k = m_k(v(i)).
    pub fn branch_intersection(&self, i: usize, k: usize) -> u64 {
        self.mult[k][self.arrows[i]]
    }

    /// Blow up a generic point of E_v (off every other divisor and branch).
    pub fn blow_up_generic(&self, v: usize) -> Self {
        let mut g = self.clone();
        let new = g.euler.len();
        g.euler.push(-1);
        g.euler[v] -= 1;
        g.edges.push((v, new));
        for row in &mut g.mult {
            let m = row[v];
            row.push(m);
        }
        g
    }

    /// Blow up the point where the strict transform of branch i meets E_{v(i)};
    /// the arrow moves to the new vertex.
    pub fn blow_up_at_arrow(&self, i: usize) -> Self {
        let v = self.arrows[i];
        let mut g = self.blow_up_generic(v);
        let new = g.euler.len() - 1;
        g.mult[i][new] += 1;
        g.arrows[i] = new;
        g
    }

    /// Blow up the intersection point of adjacent E_a and E_b.
    pub fn blow_up_corner(&self, a: usize, b: usize) -> Option<Self> {
        let key = (a.min(b), a.max(b));
        let pos = self.edges.iter().position(|e| *e == key)?;
        let mut g = self.clone();
        g.edges.remove(pos);
        let new = g.euler.len();
        g.euler.push(-1);
        g.euler[a] -= 1;
        g.euler[b] -= 1;
        g.edges.push((a, new));
        g.edges.push((b, new));
        for row in &mut g.mult {
            let m = row[a] + row[b];
            row.push(m);
        }
        g.edges.sort();
        Some(g)
    }

    /// Vertices as genus-0 plumbing vertices with ⊕ edges; arrows labelled b1, b2, ….
    pub fn to_plumbing(&self) -> PlumbingGraph {
        let mut g = PlumbingGraph::new();
        for &e in &self.euler {
            g.add_vertex(e, 0);
        }
        for &(a, b) in &self.edges {
            g.add_edge(a as u32 + 1, b as u32 + 1, Sign::Plus);
        }
        for (i, &v) in self.arrows.iter().enumerate() {
            g.add_arrow(&format!("b{}", i + 1), v as u32 + 1);
        }
        g
    }

    pub fn to_text(&self) -> String {
        let mut s = self.to_plumbing().to_text();
        for (i, row) in self.mult.iter().enumerate() {
            for (v, m) in row.iter().enumerate() {
                let _ = writeln!(s, "m b{} v{} = {}", i + 1, v + 1, m);
            }
        }
        s
    }

    pub fn to_dot(&self) -> String {
        self.to_plumbing().to_dot()
    }
}

/// m_b = −M⁻¹ e_v for a branch with its arrow on E_v (M is unimodular).
fn branch_multiplicities(im: &[Vec<i64>], v: usize) -> Vec<u64> {
    let n = im.len();
    let mut a: Vec<Vec<BigRational>> = im
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut row: Vec<BigRational> = row.iter().map(|&x| BigRational::from_integer(x.into())).collect();
            row.push(BigRational::from_integer(if r == v { (-1).into() } else { 0.into() }));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("intersection matrix is nonsingular");
        a.swap(col, piv);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let k = a[r][col].clone();
                for c in col..=n {
                    let d = &k * &a[col][c];
                    a[r][c] = &a[r][c] - &d;
                }
            }
        }
    }
    a.iter()
        .map(|row| {
            let x = &row[n];
            assert!(x.is_integer() && !x.is_negative(), "multiplicity {x} is not a natural number");
            x.to_integer().try_into().expect("multiplicity fits in u64")
        })
        .collect()
}

/// Exact determinant of an integer matrix (Bareiss).
pub fn int_det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Roots in ℚ(i) of a univariate polynomial in v (any variable list, only
/// v occurring), found numerically and confirmed exactly; returns the roots
/// and the cofactor left after dividing them out.
pub fn gaussian_roots(p: &MultiPoly) -> (Vec<GaussRational>, MultiPoly) {
    let Some(k) = p.var_index("v") else {
        return (Vec::new(), p.clone());
    };
    let deg = p.degree_in(k).unwrap_or(0) as usize;
    if deg == 0 {
        return (Vec::new(), p.clone());
    }
    let coeffs: Vec<(f64, f64)> = (0..=deg).map(|e| p.coeff_in(k, e as u32).constant_term().to_f64_pair()).collect();
    let mut roots = Vec::new();
    let mut rest = p.clone();
    for z in aberth(&coeffs) {
        let Some(cand) = rationalize(z) else { continue };
        let lin = &MultiPoly::var("v", p.vars()) - &MultiPoly::constant(cand.clone(), p.vars());
        if let Some(q) = rest.div_exact(&lin) {
            rest = q;
            roots.push(cand);
        }
    }
    roots.sort_by(|a, b| a.cmp_key(b));
    (roots, rest)
}

type C64 = (f64, f64);

fn cmul(a: C64, b: C64) -> C64 {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn cdiv(a: C64, b: C64) -> C64 {
    let n = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / n, (a.1 * b.0 - a.0 * b.1) / n)
}

/// Simultaneous (Aberth–Ehrlich) root iteration; coefficients low to high.
fn aberth(c: &[C64]) -> Vec<C64> {
    let n = c.len() - 1;
    let eval = |z: C64| {
        let mut p = (0.0, 0.0);
        let mut dp = (0.0, 0.0);
        for a in c.iter().rev() {
            dp = cmul(dp, z);
            dp = (dp.0 + p.0, dp.1 + p.1);
            p = cmul(p, z);
            p = (p.0 + a.0, p.1 + a.1);
        }
        (p, dp)
    };
    let mut z: Vec<C64> = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            (0.9 * th.cos(), 0.9 * th.sin())
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.0 == 0.0 && p.1 == 0.0 {
                continue;
            }
            let ratio = cdiv(p, dp);
            let mut s = (0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = (z[i].0 - z[j].0, z[i].1 - z[j].1);
                    let r = cdiv((1.0, 0.0), d);
                    s = (s.0 + r.0, s.1 + r.1);
                }
            }
            let denom = (1.0 - (ratio.0 * s.0 - ratio.1 * s.1), -(ratio.0 * s.1 + ratio.1 * s.0));
            let w = cdiv(ratio, denom);
            z[i] = (z[i].0 - w.0, z[i].1 - w.1);
            moved = moved.max(w.0.abs() + w.1.abs());
        }
        if moved < 1e-14 {
            break;
        }
    }
    z
}

/// Best rational with denominator ≤ 10⁴ for each coordinate (continued fractions).
fn rationalize(z: C64) -> Option<GaussRational> {
    use num_rational::BigRational;
    fn cf(x: f64) -> Option<BigRational> {
        if !x.is_finite() || x.abs() > 1e12 {
            return None;
        }
        let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
        let mut r = x;
        for _ in 0..40 {
            let a = r.floor();
            let ai = a as i64;
            let h2 = ai.checked_mul(h1)?.checked_add(h0)?;
            let k2 = ai.checked_mul(k1)?.checked_add(k0)?;
            if k2 > 10_000 {
                break;
            }
            (h0, h1, k0, k1) = (h1, h2, k1, k2);
            let frac = r - a;
            if frac.abs() < 1e-9 || ((h1 as f64 / k1 as f64) - x).abs() < 1e-10 {
                break;
            }
            r = 1.0 / frac;
        }
        (k1 != 0).then(|| BigRational::new(BigInt::from(h1), BigInt::from(k1)))
    }
    Some(GaussRational::new(cf(z.0)?, cf(z.1)?))
}
