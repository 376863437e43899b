//! Dimensions of local quotient rings O_n/I by truncated-jet linear algebra.
//!
//! At truncation degree M the engine spans all products `x^a · g` cut at
//! degree ≤ M and eliminates with the lowest-degree column as pivot. If the
//! span contains every monomial of degree exactly M then m^M ⊆ I (Nakayama),
//! and dim O/I = #{monomials of degree < M} − rank of the span below degree M.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::arith::{gcd, resultant, GaussRational, MultiPoly, Vars};

pub const DEFAULT_DEGREE_CAP: u32 = 256;
/// Largest number of jet columns the engine will allocate.
pub const COLUMN_BUDGET: usize = 120_000;
const CROSS_CHECK_SEED: u64 = 0x6d61_7067_6572_6d31;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Codim {
    Finite(u64),
    Infinite,
    Undecided { cap: u32, reason: String },
}

impl Codim {
    pub fn finite(&self) -> Option<u64> {
        match self {
            Codim::Finite(n) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for Codim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Codim::Finite(n) => write!(f, "{n}"),
            Codim::Infinite => write!(f, "infinite"),
            Codim::Undecided { cap, .. } => write!(f, "undecided(cap={cap})"),
        }
    }
}

impl Serialize for Codim {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Codim::Finite(n) => s.serialize_u64(*n),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalError {
    #[error("empty generator list")]
    EmptyIdeal,
    #[error("polynomial {0} does not vanish at the origin")]
    NotAtOrigin(String),
    #[error("codimension undecided at degree cap {cap} ({reason}); retry with a larger --degree-cap")]
    Undecided { cap: u32, reason: String },
    #[error("resultant cross-check failed: jet value {jet}, resultant order {res}")]
    CrossCheck { jet: u64, res: u64 },
    #[error("expected a plane curve in two variables, got {0}")]
    NotPlane(usize),
}

#[derive(Clone, Debug)]
pub struct LocalIdeal {
    vars: Vars,
    gens: Vec<MultiPoly>,
}

impl LocalIdeal {
    /// Generators are moved onto `vars`, zeros dropped, and duplicates up
    /// to a constant factor removed. A generator that is a unit makes the
    /// ideal the whole ring (codimension 0).
    pub fn new(vars: &Vars, gens: impl IntoIterator<Item = MultiPoly>) -> Result<Self, LocalError> {
        let mut kept: Vec<MultiPoly> = Vec::new();
        for g in gens {
            let g = g
                .with_vars(vars)
                .map_err(|_| LocalError::NotAtOrigin(format!("{g} (foreign variables)")))?;
            if g.is_zero() || kept.iter().any(|k| k.proportional(&g)) {
                continue;
            }
            kept.push(g);
        }
        if kept.is_empty() {
            return Err(LocalError::EmptyIdeal);
        }
        Ok(LocalIdeal { vars: vars.clone(), gens: kept })
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.gens
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(|g| !g.constant_term().is_zero())
    }

    pub fn with_generator(&self, g: MultiPoly) -> Result<Self, LocalError> {
        LocalIdeal::new(&self.vars, self.gens.iter().cloned().chain(std::iter::once(g)))
    }

    /// A curve through the origin inside V(I), if one is cheaply visible:
    /// a coordinate axis killed by every generator, or a common factor.
    fn curve_witness(&self) -> bool {
        let n = self.vars.len();
        for j in 0..n {
            let on_axis = self.gens.iter().all(|g| {
                let mut r = g.clone();
                for k in (0..n).filter(|&k| k != j) {
                    r = r.eval_var(k, &GaussRational::zero());
                }
                r.is_zero()
            });
            if on_axis {
                return true;
            }
        }
        if n >= 2 {
            let mut g = self.gens[0].clone();
            for h in &self.gens[1..] {
                if g.is_constant() {
                    break;
                }
                g = gcd(&g, h);
            }
            if !g.is_constant() && g.constant_term().is_zero() {
                return true;
            }
        }
        false
    }
}

/// Monomials of degree ≤ m in n variables, ascending by degree.
struct JetIndex {
    monos: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    degree_start: Vec<usize>,
}

impl JetIndex {
    fn new(n: usize, m: u32) -> Self {
        let mut monos = Vec::new();
        let mut degree_start = Vec::new();
        for d in 0..=m {
            degree_start.push(monos.len());
            push_of_degree(n, d, &mut vec![0; n], 0, &mut monos);
        }
        degree_start.push(monos.len());
        let index = monos.iter().enumerate().map(|(k, e)| (e.clone(), k)).collect();
        JetIndex { monos, index, degree_start }
    }
}

fn push_of_degree(n: usize, d: u32, cur: &mut Vec<u32>, k: usize, out: &mut Vec<Vec<u32>>) {
    if k == n - 1 {
        cur[k] = d;
        out.push(cur.clone());
        cur[k] = 0;
        return;
    }
    for e in (0..=d).rev() {
        cur[k] = e;
        push_of_degree(n, d - e, cur, k + 1, out);
    }
    cur[k] = 0;
}

fn count_monomials(n: usize, m: u32) -> usize {
    // C(m + n, n)
    let mut c: u128 = 1;
    for k in 1..=n as u128 {
        c = c * (m as u128 + k) / k;
    }
    c.min(usize::MAX as u128) as usize
}

type SparseRow = Vec<(usize, GaussRational)>;

fn axpy(row: &SparseRow, c: &GaussRational, piv: &SparseRow) -> SparseRow {
    // row − c·piv
    let mut out = Vec::with_capacity(row.len() + piv.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < piv.len() {
        let ci = row.get(i).map(|x| x.0).unwrap_or(usize::MAX);
        let cj = piv.get(j).map(|x| x.0).unwrap_or(usize::MAX);
        if ci < cj {
            out.push(row[i].clone());
            i += 1;
        } else if cj < ci {
            out.push((cj, -(c * &piv[j].1)));
            j += 1;
        } else {
            let v = &row[i].1 - &(c * &piv[j].1);
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Outcome of one truncation level.
enum Level {
    Certified(u64),
    NotYet,
}

fn run_level(ideal: &LocalIdeal, m: u32) -> Level {
    let n = ideal.vars.len();
    let jet = JetIndex::new(n, m);
    let mut pivots: Vec<Option<SparseRow>> = vec![None; jet.monos.len()];
    for g in &ideal.gens {
        let g_terms: Vec<(Vec<u32>, GaussRational)> =
            g.terms().map(|(e, c)| (e.0.clone(), c.clone())).collect();
        let og = g.local_order().unwrap();
        if og > m {
            continue;
        }
        let limit = jet.degree_start[(m - og) as usize + 1];
        for a in &jet.monos[..limit] {
            let da: u32 = a.iter().sum();
            let mut row: SparseRow = g_terms
                .iter()
                .filter(|(e, _)| da + e.iter().sum::<u32>() <= m)
                .map(|(e, c)| {
                    let prod: Vec<u32> = a.iter().zip(e).map(|(x, y)| x + y).collect();
                    (jet.index[&prod], c.clone())
                })
                .collect();
            row.sort_by_key(|x| x.0);
            // reduce
            loop {
                let Some((col, val)) = row.first().cloned() else { break };
                match &pivots[col] {
                    Some(p) => row = axpy(&row, &val, p),
                    None => {
                        let inv = val.inv().unwrap();
                        let normed: SparseRow = row.iter().map(|(k, v)| (*k, v * &inv)).collect();
                        pivots[col] = Some(normed);
                        break;
                    }
                }
            }
        }
    }
    let top = jet.degree_start[m as usize];
    let top_count = jet.monos.len() - top;
    let top_pivots = pivots[top..].iter().filter(|p| p.is_some()).count();
    if top_pivots < top_count {
        return Level::NotYet;
    }
    let low_pivots = pivots[..top].iter().filter(|p| p.is_some()).count();
    Level::Certified((top - low_pivots) as u64)
}

/// dim_ℂ O_n / I, or INFINITE on a curve witness, or UNDECIDED at the cap.
pub fn quotient_codim(ideal: &LocalIdeal, degree_cap: u32) -> Codim {
    if ideal.is_unit() {
        return Codim::Finite(0);
    }
    if ideal.curve_witness() {
        return Codim::Infinite;
    }
    let maxdeg = ideal.gens.iter().filter_map(|g| g.total_degree()).max().unwrap_or(1);
    let mut m = (2 * maxdeg).max(2);
    loop {
        let m_eff = m.min(degree_cap);
        if count_monomials(ideal.vars.len(), m_eff) > COLUMN_BUDGET {
            return Codim::Undecided {
                cap: degree_cap,
                reason: format!("column budget {COLUMN_BUDGET} exceeded at degree {m_eff}"),
            };
        }
        if let Level::Certified(d) = run_level(ideal, m_eff) {
            return Codim::Finite(d);
        }
        if m_eff >= degree_cap {
            return Codim::Undecided {
                cap: degree_cap,
                reason: "no m-primary certificate up to the cap".into(),
            };
        }
        m = m.saturating_mul(2);
    }
}

fn two_vars(f: &MultiPoly, g: &MultiPoly) -> Result<(MultiPoly, MultiPoly), LocalError> {
    let (f, g) = f.align(g);
    // drop unused variables so that the ring is the plane
    let mut used: Vec<usize> = f.support();
    for k in g.support() {
        if !used.contains(&k) {
            used.push(k);
        }
    }
    used.sort();
    let vars = f.vars().clone();
    if vars.len() != 2 {
        if used.len() > 2 {
            return Err(LocalError::NotPlane(used.len()));
        }
        let mut names: Vec<String> = used.iter().map(|&k| vars[k].clone()).collect();
        for v in vars.iter() {
            if names.len() < 2 && !names.contains(v) {
                names.push(v.clone());
            }
        }
        let plane: Vars = names.into();
        return Ok((f.with_vars(&plane).unwrap(), g.with_vars(&plane).unwrap()));
    }
    Ok((f, g))
}

/// Intersection multiplicity of two plane curve germs at the origin.
pub fn intersection_multiplicity(f: &MultiPoly, g: &MultiPoly) -> Result<Codim, LocalError> {
    intersection_multiplicity_capped(f, g, DEFAULT_DEGREE_CAP)
}

pub fn intersection_multiplicity_capped(f: &MultiPoly, g: &MultiPoly, cap: u32) -> Result<Codim, LocalError> {
    for p in [f, g] {
        if !p.constant_term().is_zero() || p.is_zero() {
            return Err(LocalError::NotAtOrigin(p.to_string()));
        }
    }
    let (f, g) = two_vars(f, g)?;
    let common = gcd(&f, &g);
    if !common.is_constant() && common.constant_term().is_zero() {
        return Ok(Codim::Infinite);
    }
    let ideal = LocalIdeal::new(f.vars(), [f.clone(), g.clone()])?;
    match quotient_codim(&ideal, cap) {
        Codim::Finite(n) => {
            if let Some(r) = resultant_order(&f, &g) {
                if r != n {
                    return Err(LocalError::CrossCheck { jet: n, res: r });
                }
            }
            Ok(Codim::Finite(n))
        }
        Codim::Infinite => Ok(Codim::Infinite),
        Codim::Undecided { cap, reason } => Err(LocalError::Undecided { cap, reason }),
    }
}

/// Order at 0 of Res_v(f, g) after a seeded generic linear change, when
/// the projection to the first coordinate is finite and sees only the
/// origin on the fibre over 0. `None` if no admissible change was found.
pub fn resultant_order(f: &MultiPoly, g: &MultiPoly) -> Option<u64> {
    let (f, g) = f.align(g);
    if f.vars().len() != 2 {
        return None;
    }
    let vars = f.vars().clone();
    let (u, v) = (vars[0].clone(), vars[1].clone());
    let mut rng = ChaCha8Rng::seed_from_u64(CROSS_CHECK_SEED);
    for _ in 0..8 {
        let a: i64 = rng.gen_range(-4..=4);
        let b: i64 = rng.gen_range(-4..=4);
        if 1 - a * b == 0 {
            continue;
        }
        let pu = &MultiPoly::var(&u, &vars) + &MultiPoly::var(&v, &vars).scale(&a.into());
        let pv = &MultiPoly::var(&v, &vars) + &MultiPoly::var(&u, &vars).scale(&b.into());
        let ch = |p: &MultiPoly| {
            p.substitute(&[(u.as_str(), pu.clone()), (v.as_str(), pv.clone())])
                .with_vars(&vars)
                .unwrap()
        };
        let (f2, g2) = (ch(&f), ch(&g));
        let finite = |p: &MultiPoly| {
            let d = p.total_degree().unwrap_or(0);
            p.degree_in(1) == Some(d) && p.lead_coeff_in(1).is_constant()
        };
        if !finite(&f2) || !finite(&g2) {
            continue;
        }
        let zero = GaussRational::zero();
        let (f0, g0) = (f2.eval_var(0, &zero), g2.eval_var(0, &zero));
        let common = gcd(&f0, &g0);
        // only t = 0 may be a common root on the fibre u = 0
        if common.nterms() != 1 {
            continue;
        }
        let r = resultant(&f2, &g2, &v).ok()?;
        return r.min_degree_in(0).map(|d| d as u64);
    }
    None
}

/// μ(d) = dim O_2 / (∂d/∂u, ∂d/∂v).
pub fn milnor_number(d: &MultiPoly) -> Result<Codim, LocalError> {
    milnor_number_capped(d, DEFAULT_DEGREE_CAP)
}

pub fn milnor_number_capped(d: &MultiPoly, cap: u32) -> Result<Codim, LocalError> {
    if d.is_zero() || !d.constant_term().is_zero() {
        return Err(LocalError::NotAtOrigin(d.to_string()));
    }
    let (d, _) = two_vars(d, d)?;
    let vars = d.vars().clone();
    let partials: Vec<MultiPoly> = vars.iter().map(|v| d.derivative(v)).collect();
    let ideal = LocalIdeal::new(&vars, partials)?;
    match quotient_codim(&ideal, cap) {
        Codim::Undecided { cap, reason } => Err(LocalError::Undecided { cap, reason }),
        other => Ok(other),
    }
}

/// Convenience: codimension that must be finite.
pub fn finite_codim(ideal: &LocalIdeal, cap: u32) -> Result<u64, LocalError> {
    match quotient_codim(ideal, cap) {
        Codim::Finite(n) => Ok(n),
        Codim::Infinite => Err(LocalError::Undecided { cap, reason: "ideal is not m-primary".into() }),
        Codim::Undecided { cap, reason } => Err(LocalError::Undecided { cap, reason }),
    }
}
