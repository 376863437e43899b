//! The surgery that turns the resolution graph Γ of the double curve into a
//! plumbing graph Γ̂ of the boundary of the Milnor fibre.
//!
//! Branches are paired by the involution σ. A class j = {i, σ(i)} with
//! i ≠ σ(i) glues its two arrowheads into a single vertex; a fixed branch
//! gets a vertex glued to the Y-piece. The Euler number of the new vertex is
//! α_j = 𝔳i_j − Σ_{i ∈ j} m_i(v(i)), where 𝔳i_j = Σ_{i ∈ j} λ_i + 𝔳_j.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::arith::MultiPoly;
use crate::germ::MapGerm;
use crate::local::{intersection_multiplicity, Codim, LocalError};
use crate::plumbing::{disjoint_union, y_graph, PlumbingGraph, Sign};
use crate::resolution::{resolve_curve, EmbeddedResolutionGraph, ResolutionError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundaryError {
    #[error("σ is not an involution on {0} branches")]
    NotInvolution(usize),
    #[error("pairing covers {pairing} branches but the curve has {curve}")]
    BranchCount { pairing: usize, curve: usize },
    #[error("germ is not of the form (s, t², t·d(s, t²))")]
    NotSigma10,
    #[error("branch {0} has no partner under t ↦ −t")]
    NoPartner(usize),
    #[error("branch {0} shares a component with D♯")]
    NotCoprime(usize),
    #[error("branch {0} is locally reducible at the origin")]
    LocallyReducible(usize),
    #[error("no vertical index for the class of branch {0}")]
    MissingVertical(usize),
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PairingSource {
    Sigma10Automatic,
    UserSupplied,
    Catalog,
}

/// Vertical data per pair class, keyed by the smallest branch index of the class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerticalData {
    /// D♯ = {d♯ = 0} from Φ*(H) = d·d♯ together with the vertical indices 𝔳_j.
    Sectional { d_sharp: MultiPoly, v: BTreeMap<usize, i64> },
    /// Only the sums 𝔳i_j = Σ λ_i + 𝔳_j are known.
    Aggregate { vi: BTreeMap<usize, i64> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingData {
    sigma: Vec<usize>,
    pub vertical: VerticalData,
    pub source: PairingSource,
}

impl PairingData {
    /// `sigma` is 0-based: branch i is paired with `sigma[i]`.
    pub fn new(sigma: Vec<usize>, vertical: VerticalData, source: PairingSource) -> Result<Self, BoundaryError> {
        let n = sigma.len();
        if sigma.iter().enumerate().any(|(i, &k)| k >= n || sigma[k] != i) {
            return Err(BoundaryError::NotInvolution(n));
        }
        Ok(PairingData { sigma, vertical, source })
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn branch_count(&self) -> usize {
        self.sigma.len()
    }

    /// Pair classes ordered by their smallest member.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        (0..self.sigma.len())
            .filter(|&i| self.sigma[i] >= i)
            .map(|i| if self.sigma[i] == i { vec![i] } else { vec![i, self.sigma[i]] })
            .collect()
    }

    /// Number of branches fixed by σ.
    pub fn fixed_count(&self) -> usize {
        self.sigma.iter().enumerate().filter(|(i, k)| i == *k).count()
    }

    /// Cycle notation with 1-based indices, e.g. `(1 2)(3)`.
    pub fn sigma_text(&self) -> String {
        self.classes()
            .iter()
            .map(|c| format!("({})", c.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" ")))
            .collect()
    }
}

/// Pairing for a germ (s, t², t·d(s, t²)): the involution is t ↦ −t,
/// H = z gives d♯ = t and all 𝔳_j = 0.
pub fn pairing_sigma10(germ: &MapGerm, branches: &[MultiPoly]) -> Result<PairingData, BoundaryError> {
    if germ.sigma10_curve().is_none() {
        return Err(BoundaryError::NotSigma10);
    }
    let mut sigma = Vec::with_capacity(branches.len());
    for (i, b) in branches.iter().enumerate() {
        let vars = b.vars().clone();
        let flipped = if b.var_index("t").is_some() {
            b.substitute(&[("t", MultiPoly::var("t", &vars).scale(&crate::GaussRational::from_int(-1)))])
                .with_vars(&vars)
                .unwrap_or_else(|_| b.clone())
        } else {
            b.clone()
        };
        let k = branches.iter().position(|c| c.proportional(&flipped)).ok_or(BoundaryError::NoPartner(i))?;
        sigma.push(k);
    }
    let tmp = PairingData::new(sigma, VerticalData::Aggregate { vi: BTreeMap::new() }, PairingSource::Sigma10Automatic)?;
    let v = tmp.classes().iter().map(|c| (c[0], 0)).collect();
    let t = MultiPoly::var("t", &crate::germ::source_vars());
    Ok(PairingData { vertical: VerticalData::Sectional { d_sharp: t, v }, ..tmp })
}

/// λ_i = −Σ_{k≠i} D_k·D_i − D♯·D_i.
pub fn lambda_values(
    graph: &EmbeddedResolutionGraph,
    branches: &[MultiPoly],
    d_sharp: &MultiPoly,
) -> Result<Vec<i64>, BoundaryError> {
    let n = graph.branch_count();
    let mut out = Vec::with_capacity(n);
    for (i, b) in branches.iter().enumerate().take(n) {
        let others: u64 = (0..n).filter(|&k| k != i).map(|k| graph.branch_intersection(k, i)).sum();
        let sharp = match intersection_multiplicity(b, d_sharp)? {
            Codim::Finite(v) => v,
            _ => return Err(BoundaryError::NotCoprime(i)),
        };
        out.push(-((others + sharp) as i64));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassLedger {
    /// 0-based branch indices in the class.
    pub branches: Vec<usize>,
    /// m_i(v(i)) for each branch of the class.
    pub mult: Vec<u64>,
    /// λ_i for each branch, when D♯ is known.
    pub lambda: Option<Vec<i64>>,
    pub v: Option<i64>,
    pub vi: i64,
    pub alpha: i64,
}

/// Everything the gluing needs: per-class data and the table D_i·D_k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurgeryLedger {
    pub classes: Vec<ClassLedger>,
    pub intersections: Vec<Vec<u64>>,
}

/// α_j = 𝔳i_j − Σ_{i ∈ j} m_i(v(i)).
pub fn alpha_values(ledger: &SurgeryLedger) -> Vec<i64> {
    ledger.classes.iter().map(|c| c.vi - c.mult.iter().sum::<u64>() as i64).collect()
}

pub fn surgery_ledger(
    graph: &EmbeddedResolutionGraph,
    branches: &[MultiPoly],
    pairing: &PairingData,
) -> Result<SurgeryLedger, BoundaryError> {
    let n = graph.branch_count();
    if pairing.branch_count() != n {
        return Err(BoundaryError::BranchCount { pairing: pairing.branch_count(), curve: n });
    }
    let lambda = match &pairing.vertical {
        VerticalData::Sectional { d_sharp, .. } => Some(lambda_values(graph, branches, d_sharp)?),
        VerticalData::Aggregate { .. } => None,
    };
    let mut classes = Vec::new();
    for members in pairing.classes() {
        let key = members[0];
        let mult: Vec<u64> = members.iter().map(|&i| graph.multiplicity(i, graph.arrow(i))).collect();
        let (lam, v, vi) = match (&pairing.vertical, &lambda) {
            (VerticalData::Sectional { v, .. }, Some(l)) => {
                let vj = *v.get(&key).ok_or(BoundaryError::MissingVertical(key))?;
                let lam: Vec<i64> = members.iter().map(|&i| l[i]).collect();
                let vi = lam.iter().sum::<i64>() + vj;
                (Some(lam), Some(vj), vi)
            }
            (VerticalData::Aggregate { vi }, _) => (None, None, *vi.get(&key).ok_or(BoundaryError::MissingVertical(key))?),
            _ => unreachable!(),
        };
        let alpha = vi - mult.iter().sum::<u64>() as i64;
        classes.push(ClassLedger { branches: members, mult, lambda: lam, v, vi, alpha });
    }
    let intersections = (0..n)
        .map(|i| (0..n).map(|k| if i == k { 0 } else { graph.branch_intersection(i, k) }).collect())
        .collect();
    Ok(SurgeryLedger { classes, intersections })
}

/// Γ̂: Γ (ids 1..=n) followed, class by class, by the new α vertex and,
/// for a fixed branch, the Y-piece (middle, leg, leg).
pub fn build_boundary_graph(graph: &EmbeddedResolutionGraph, ledger: &SurgeryLedger) -> PlumbingGraph {
    let mut g = graph.to_plumbing();
    g.arrows_mut().clear();
    for class in &ledger.classes {
        let a = g.add_vertex(class.alpha, 0);
        match class.branches.as_slice() {
            &[i] => {
                let v = graph.arrow(i) as u32 + 1;
                g.add_edge(v, a, Sign::Plus);
                let map = disjoint_union(&mut g, &y_graph());
                g.add_edge(a, map[&1], Sign::Minus);
            }
            &[i, k] => {
                let (vi, vk) = (graph.arrow(i) as u32 + 1, graph.arrow(k) as u32 + 1);
                let (lo, hi) = (vi.min(vk), vi.max(vk));
                g.add_edge(lo, a, Sign::Minus);
                g.add_edge(hi, a, Sign::Plus);
            }
            _ => unreachable!("classes have one or two members"),
        }
    }
    g
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Checksum {
    /// Σ_j 𝔳i_j.
    pub lhs: i64,
    /// −Σ_{i≠k} D_i·D_k − C.
    pub rhs: i64,
    pub holds: bool,
    /// lhs − rhs.
    pub defect: i64,
}

/// Σ_j 𝔳i_j against −Σ_{i≠k} D_i·D_k − C (ordered pairs).
pub fn checksum(ledger: &SurgeryLedger, c: u64) -> Checksum {
    let lhs = ledger.classes.iter().map(|c| c.vi).sum();
    let cross: u64 = ledger.intersections.iter().flatten().sum();
    let rhs = -(cross as i64) - c as i64;
    Checksum { lhs, rhs, holds: lhs == rhs, defect: lhs - rhs }
}

/// Γ, the ledger and Γ̂ for a curve with pairing data.
#[derive(Clone, Debug)]
pub struct BoundaryResult {
    pub resolution: EmbeddedResolutionGraph,
    pub ledger: SurgeryLedger,
    pub graph: PlumbingGraph,
}

pub fn build_boundary(branches: &[MultiPoly], pairing: &PairingData) -> Result<BoundaryResult, BoundaryError> {
    let resolution = resolve_curve(branches)?;
    if resolution.branch_count() != branches.len() {
        let b = (0..resolution.branch_count()).find(|&b| resolution.origin(b) != b).unwrap();
        return Err(BoundaryError::LocallyReducible(resolution.origin(b)));
    }
    let ledger = surgery_ledger(&resolution, branches, pairing)?;
    let graph = build_boundary_graph(&resolution, &ledger);
    Ok(BoundaryResult { resolution, ledger, graph })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_poly;
    use crate::germ::source_vars;
    use crate::plumbing::{bamboo, graphs_equivalent};

    fn polys(xs: &[&str]) -> Vec<MultiPoly> {
        xs.iter().map(|x| parse_poly(x, &source_vars()).unwrap()).collect()
    }

    fn sigma10(germ: &str, branches: &[&str]) -> (PairingData, BoundaryResult) {
        let g = MapGerm::parse(germ).unwrap();
        let b = polys(branches);
        let p = pairing_sigma10(&g, &b).unwrap();
        let r = build_boundary(&b, &p).unwrap();
        (p, r)
    }

    #[test]
    fn involution_checked() {
        let agg = || VerticalData::Aggregate { vi: BTreeMap::new() };
        assert!(PairingData::new(vec![1, 0, 2], agg(), PairingSource::UserSupplied).is_ok());
        assert!(PairingData::new(vec![1, 2, 0], agg(), PairingSource::UserSupplied).is_err());
        let p = PairingData::new(vec![2, 1, 0], agg(), PairingSource::UserSupplied).unwrap();
        assert_eq!(p.classes(), vec![vec![0, 2], vec![1]]);
        assert_eq!(p.sigma_text(), "(1 3)(2)");
    }

    #[test]
    fn crosscap() {
        let (p, r) = sigma10("s; t^2; s*t", &["s"]);
        assert_eq!(p.sigma(), &[0]);
        let c = &r.ledger.classes[0];
        assert_eq!((c.lambda.clone(), c.mult.clone(), c.alpha), (Some(vec![-1]), vec![1], -2));
        assert_eq!(r.graph.vertex_count(), 5);
        assert!(graphs_equivalent(&r.graph, &bamboo(&[-4])).unwrap());
        assert!(checksum(&r.ledger, 1).holds);
    }

    #[test]
    fn s1_and_bk_pairings() {
        let (p, r) = sigma10("s; t^2; t^3 + s^2*t", &["t + i*s", "t - i*s"]);
        assert_eq!(p.sigma(), &[1, 0]);
        assert_eq!(r.ledger.classes[0].lambda, Some(vec![-2, -2]));
        assert_eq!(alpha_values(&r.ledger), vec![-6]);
        assert!(checksum(&r.ledger, 2).holds);

        // B_3: branches swap; B_2: each is fixed
        let (p, r) = sigma10("s; t^2; s^2*t + t^7", &["s + i*t^3", "s - i*t^3"]);
        assert_eq!(p.sigma(), &[1, 0]);
        assert_eq!(alpha_values(&r.ledger), vec![-14]);
        let (p, r) = sigma10("s; t^2; s^2*t + t^5", &["s + i*t^2", "s - i*t^2"]);
        assert_eq!(p.sigma(), &[0, 1]);
        assert_eq!(r.ledger.classes[0].lambda, Some(vec![-3]));
        assert_eq!(alpha_values(&r.ledger), vec![-5, -5]);
        // C(B_k) = 2: the ramification ideal is (t, s²)
        assert!(checksum(&r.ledger, 2).holds);
    }

    #[test]
    fn census_and_single_minus() {
        let (p, r) = sigma10("s; t^2; s*t^3 + s^5*t", &["s", "t + i*s^2", "t - i*s^2"]);
        let classes = p.classes().len();
        assert_eq!(r.graph.vertex_count(), r.resolution.vertex_count() + classes + 3 * p.fixed_count());
        assert_eq!(r.graph.edges().iter().filter(|e| e.sign == Sign::Minus).count(), classes);
        assert_eq!(alpha_values(&r.ledger), vec![-4, -14]);
    }

    #[test]
    fn missing_partner_or_vertical() {
        let p = PairingData::new(vec![1, 0], VerticalData::Aggregate { vi: [(0, -4)].into() }, PairingSource::UserSupplied).unwrap();
        let err = build_boundary(&polys(&["s*t", "s + t^2"]), &p).unwrap_err();
        assert!(matches!(err, BoundaryError::LocallyReducible(0)), "{err}");

        let g = MapGerm::parse("s; t^2; t^3 + s^2*t").unwrap();
        assert_eq!(pairing_sigma10(&g, &polys(&["t + i*s", "t - 2*s"])), Err(BoundaryError::NoPartner(0)));
        assert_eq!(pairing_sigma10(&MapGerm::parse("s; t^3; s*t").unwrap(), &polys(&["s"])), Err(BoundaryError::NotSigma10));
        let b = polys(&["s"]);
        let p = PairingData::new(vec![0], VerticalData::Aggregate { vi: BTreeMap::new() }, PairingSource::UserSupplied).unwrap();
        assert_eq!(build_boundary(&b, &p).unwrap_err(), BoundaryError::MissingVertical(0));
    }
}
