//! Built-in germs: Mond's simple germs, covers of the A-D-E quotient
//! singularities and a corank-2 example, with their expected invariants,
//! double-curve branches, pairings and boundary graphs.

use std::collections::BTreeMap;

use crate::arith::{parse_poly, MultiPoly, PolyMatrix};
use crate::boundary::{PairingData, PairingSource, VerticalData};
use crate::germ::{source_vars, target_vars, MapGerm};
use crate::local::Codim;
use crate::plumbing::{bamboo, disjoint_union, y_graph, PlumbingGraph, Sign};

/// How the pairing of the double-curve branches is obtained.
#[derive(Clone, Debug)]
pub enum PairingSpec {
    /// t ↦ −t with H = z.
    Sigma10,
    Explicit(PairingData),
}

#[derive(Clone, Debug)]
pub struct CurveData {
    /// Branches over ℚ(i).
    pub branches: Vec<MultiPoly>,
    /// The branches are a topological model of D rather than its factors:
    /// the true branches are not defined over ℚ(i).
    pub model: bool,
    pub pairing: PairingSpec,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub family: &'static str,
    /// `None` for entries known only through their weights and degrees.
    pub germ: Option<MapGerm>,
    /// (w₁, w₂, d₁, d₂, d₃) for weighted-homogeneous germs.
    pub weights: Option<[u64; 5]>,
    pub expected_c: Codim,
    pub expected_t: Option<u64>,
    /// A presentation matrix to use in place of the built-in construction.
    pub lambda: Option<PolyMatrix>,
    pub curve: Option<CurveData>,
    /// Γ of the double curve, arrows labelled b1, b2, ….
    pub expected_resolution: Option<PlumbingGraph>,
    /// Γ̂ as drawn in the worked examples.
    pub expected_boundary: Vec<PlumbingGraph>,
    pub note: &'static str,
}

impl CatalogEntry {
    pub fn expected_l(&self) -> Option<i64> {
        Some(self.expected_c.finite()? as i64 - 3 * self.expected_t? as i64)
    }

    pub fn expected_omega(&self) -> Option<i64> {
        self.expected_c.finite().map(|c| -(c as i64))
    }

    pub fn is_sigma10(&self) -> bool {
        self.germ.as_ref().is_some_and(|g| g.sigma10_curve().is_some())
    }
}

fn p(s: &str) -> MultiPoly {
    parse_poly(s, &source_vars()).expect("catalog polynomial")
}

fn germ(s: &str) -> MapGerm {
    MapGerm::parse(s).expect("catalog germ")
}

fn base(name: String, family: &'static str, g: Option<&str>, c: Codim, t: Option<u64>) -> CatalogEntry {
    CatalogEntry {
        name,
        family,
        germ: g.map(germ),
        weights: None,
        expected_c: c,
        expected_t: t,
        lambda: None,
        curve: None,
        expected_resolution: None,
        expected_boundary: Vec::new(),
        note: "",
    }
}

fn sigma10_curve(branches: &[String]) -> Option<CurveData> {
    Some(CurveData { branches: branches.iter().map(|b| p(b)).collect(), model: false, pairing: PairingSpec::Sigma10 })
}

/// Attach a new vertex with Euler number `alpha` to `v` and glue a Y-piece to it.
fn hang_y(g: &mut PlumbingGraph, v: u32, alpha: i64) {
    let a = g.add_vertex(alpha, 0);
    g.add_edge(v, a, Sign::Plus);
    let y = disjoint_union(g, &y_graph());
    g.add_edge(a, y[&1], Sign::Minus);
}

/// Join `v` to a new vertex `alpha` by a ⊕⊖ double edge.
fn double_edge(g: &mut PlumbingGraph, v: u32, alpha: i64) {
    let a = g.add_vertex(alpha, 0);
    g.add_edge(v, a, Sign::Plus);
    g.add_edge(v, a, Sign::Minus);
}

fn repeat(e: i64, n: i64) -> Vec<i64> {
    vec![e; n.max(0) as usize]
}

/// −1 — −2 — Y.
fn crosscap_boundary() -> PlumbingGraph {
    let mut g = bamboo(&[-1]);
    hang_y(&mut g, 1, -2);
    g
}

/// The S_{k−1} pictures.
fn s_boundary(k: i64) -> PlumbingGraph {
    if k == 1 {
        return crosscap_boundary();
    }
    let n = k / 2;
    if k % 2 == 0 {
        let mut chain = repeat(-2, n - 1);
        chain.push(-1);
        let mut g = bamboo(&chain);
        double_edge(&mut g, n as u32, -3 * k);
        g
    } else {
        // n−1 (−2)'s, −3, −1 with a side −2
        let mut chain = repeat(-2, n - 1);
        chain.extend([-3, -1]);
        let mut g = bamboo(&chain);
        let top = chain.len() as u32;
        let side = g.add_vertex(-2, 0);
        g.add_edge(top, side, Sign::Plus);
        hang_y(&mut g, top, -3 * k);
        g
    }
}

/// B_k: k−1 (−2)'s then the −1 carrying both branches.
fn b_boundary(k: i64) -> PlumbingGraph {
    let mut chain = repeat(-2, k - 1);
    chain.push(-1);
    let mut g = bamboo(&chain);
    let top = k as u32;
    if k % 2 == 1 {
        double_edge(&mut g, top, -4 * k - 2);
    } else {
        hang_y(&mut g, top, -2 * k - 1);
        hang_y(&mut g, top, -2 * k - 1);
    }
    g
}

/// C_k: the D graph for (s = 0) ∪ (t² + s^{k−1} = 0).
fn c_resolution(k: i64) -> PlumbingGraph {
    let n = k / 2;
    if k == 2 {
        let mut g = bamboo(&[-2, -1]);
        g.add_arrow("b1", 2);
        g.add_arrow("b2", 2);
        return g;
    }
    if k % 2 == 1 {
        let mut chain = repeat(-2, n - 1);
        chain.push(-1);
        let mut g = bamboo(&chain);
        g.add_arrow("b1", 1);
        g.add_arrow("b2", n as u32);
        g.add_arrow("b3", n as u32);
        g
    } else {
        let mut chain = repeat(-2, n - 2);
        chain.extend([-3, -1]);
        let mut g = bamboo(&chain);
        let top = chain.len() as u32;
        let side = g.add_vertex(-2, 0);
        g.add_edge(top, side, Sign::Plus);
        g.add_arrow("b1", 1);
        g.add_arrow("b2", top);
        g
    }
}

fn c_boundary(k: i64) -> PlumbingGraph {
    let d = c_resolution(k);
    let mut g = bamboo(&[]);
    disjoint_union(&mut g, &d);
    g.arrows_mut().clear();
    let arrows: Vec<(String, u32)> = d.arrows().iter().map(|a| (a.label.clone(), a.vertex)).collect();
    let at = |l: &str| arrows.iter().find(|(a, _)| a == l).unwrap().1;
    // the s-branch is fixed by σ and always gives −4
    if k == 2 {
        hang_y(&mut g, at("b1"), -5);
        hang_y(&mut g, at("b2"), -5);
    } else if k % 2 == 1 {
        hang_y(&mut g, at("b1"), -4);
        double_edge(&mut g, at("b2"), -3 * k + 1);
    } else {
        hang_y(&mut g, at("b1"), -4);
        hang_y(&mut g, at("b2"), -3 * k + 1);
    }
    g
}

/// F_4: −2 — −2 — −1 with a side −4, then −15 and a Y.
fn f4_boundary() -> PlumbingGraph {
    let mut g = bamboo(&[-2, -2, -1]);
    let side = g.add_vertex(-4, 0);
    g.add_edge(3, side, Sign::Plus);
    hang_y(&mut g, 3, -15);
    g
}

/// H_k: 3k−3 (−2)'s, −1, and −9k+3 on a ⊕⊖ double edge.
fn h_boundary(k: i64) -> PlumbingGraph {
    let mut chain = repeat(-2, 3 * k - 3);
    chain.push(-1);
    let mut g = bamboo(&chain);
    double_edge(&mut g, chain.len() as u32, -9 * k + 3);
    g
}

/// Corank-2 example: a −1 vertex with five −5 neighbours, each carrying a Y.
fn corank2_boundary() -> PlumbingGraph {
    let mut g = bamboo(&[-1]);
    for _ in 0..5 {
        hang_y(&mut g, 1, -5);
    }
    g
}

/// The 4×4 presentation matrix of (s², t², st) over the basis 1, s, t, st.
pub fn a1_cover_lambda() -> PolyMatrix {
    let rows = [["-z", "0", "0", "x*y"], ["0", "-z", "y", "0"], ["0", "x", "-z", "0"], ["1", "0", "0", "-z"]];
    let vars = target_vars();
    let rows = rows.iter().map(|r| r.iter().map(|e| parse_poly(e, &vars).unwrap()).collect()).collect();
    PolyMatrix::from_rows(rows, &vars).unwrap()
}

/// The model branches of the corank-2 double curve.
pub const CORANK2_BRANCHES: [&str; 5] = ["s + t^2", "t + s^2", "s + t", "s - i*t", "s + i*t"];

/// All entries, in display order.
pub fn catalog() -> Vec<CatalogEntry> {
    let mut out = Vec::new();

    let mut cc = base("crosscap".into(), "crosscap", Some("s; t^2; s*t"), Codim::Finite(1), Some(0));
    cc.curve = sigma10_curve(&["s".into()]);
    cc.expected_boundary = vec![bamboo(&[-4]), crosscap_boundary()];
    out.push(cc);

    out.push(base("cuspidal-edge".into(), "cuspidal-edge", Some("s; t^2; t^3"), Codim::Infinite, None));

    for k in 1..=6i64 {
        let mut e = base(format!("S_{}", k - 1), "S", Some(&format!("s; t^2; t^3 + s^{k}*t")), Codim::Finite(k as u64), Some(0));
        let branches = if k % 2 == 0 {
            vec![format!("t + i*s^{}", k / 2), format!("t - i*s^{}", k / 2)]
        } else {
            vec![format!("t^2 + s^{k}")]
        };
        e.curve = sigma10_curve(&branches);
        e.expected_boundary = vec![s_boundary(k)];
        if k == 2 {
            let mut loop_form = bamboo(&[-4]);
            loop_form.add_edge(1, 1, Sign::Minus);
            e.expected_boundary.push(loop_form);
        }
        out.push(e);
    }

    for k in 2..=5i64 {
        let mut e = base(format!("B_{k}"), "B", Some(&format!("s; t^2; s^2*t + t^{}", 2 * k + 1)), Codim::Finite(2), Some(0));
        e.curve = sigma10_curve(&[format!("s + i*t^{k}"), format!("s - i*t^{k}")]);
        e.expected_boundary = vec![b_boundary(k)];
        out.push(e);
    }

    for k in 2..=5i64 {
        let mut e = base(format!("C_{k}"), "C", Some(&format!("s; t^2; s*t^3 + s^{k}*t")), Codim::Finite(k as u64), Some(0));
        let branches = if k % 2 == 1 {
            vec!["s".into(), format!("t + i*s^{}", k / 2), format!("t - i*s^{}", k / 2)]
        } else {
            vec!["s".into(), format!("t^2 + s^{}", k - 1)]
        };
        e.curve = sigma10_curve(&branches);
        e.expected_resolution = Some(c_resolution(k));
        e.expected_boundary = vec![c_boundary(k)];
        out.push(e);
    }

    let mut f4 = base("F_4".into(), "F", Some("s; t^2; s^3*t + t^5"), Codim::Finite(3), Some(0));
    f4.curve = sigma10_curve(&["s^3 + t^4".into()]);
    f4.expected_boundary = vec![f4_boundary()];
    out.push(f4);

    for k in 1..=4i64 {
        let g = format!("s; t^3; s*t + t^{}", 3 * k - 1);
        let mut e = base(format!("H_{k}"), "H", Some(&g), Codim::Finite(2), Some(k as u64 - 1));
        let branches = vec![p(&format!("s + i*t^{}", 3 * k - 2)), p(&format!("s - i*t^{}", 3 * k - 2))];
        let vi = BTreeMap::from([(0, -3 * k - 1)]);
        let pairing = PairingData::new(vec![1, 0], VerticalData::Aggregate { vi }, PairingSource::Catalog).unwrap();
        e.curve = Some(CurveData { branches, model: true, pairing: PairingSpec::Explicit(pairing) });
        e.expected_boundary = vec![h_boundary(k)];
        e.note = "double-curve branches are modelled over ℚ(i): the true branches need √−3";
        out.push(e);
    }

    for k in 2..=6u64 {
        let mut e = base(format!("A{}-cover", k - 1), "A-cover", Some(&format!("s^{k}; t^{k}; s*t")), Codim::Finite(k * k - 1), None);
        e.weights = Some([1, 1, k, k, 2]);
        if k == 2 {
            e.expected_t = Some(1);
            e.lambda = Some(a1_cover_lambda());
        }
        out.push(e);
    }

    for n in 2..=3u64 {
        let g = format!("s^2*t^2; s^{0} + t^{0}; s*t*(s^{0} - t^{0})", 2 * n);
        let mut e = base(format!("D-cover-{n}"), "D-cover", Some(&g), Codim::Finite(4 * n * n + 12 * n - 1), None);
        e.weights = Some([1, 1, 4, 2 * n, 2 * n + 2]);
        out.push(e);
    }

    let mut e6 = base(
        "E6-cover".into(),
        "E-cover",
        Some("s*t*(s^4 - t^4); s^8 + 14*s^4*t^4 + t^8; s^12 - 33*s^8*t^4 - 33*s^4*t^8 + t^12"),
        Codim::Finite(167),
        None,
    );
    e6.weights = Some([1, 1, 6, 8, 12]);
    out.push(e6);
    for (name, w) in [("E7-cover", [1, 1, 8, 12, 18]), ("E8-cover", [1, 1, 12, 20, 30])] {
        let c = crate::germ::c_weighted_homogeneous(w[0], w[1], w[2], w[3], w[4]).unwrap();
        let mut e = base(name.into(), "E-cover", None, Codim::Finite(c), None);
        e.weights = Some(w);
        e.note = "known through weights and degrees only";
        out.push(e);
    }

    let mut cor2 = base("corank2".into(), "corank2", Some("s^2; t^2; s^3 + t^3 + s*t"), Codim::Finite(3), Some(1));
    let vi = (0..5).map(|i| (i, -4)).collect();
    let pairing = PairingData::new((0..5).collect(), VerticalData::Aggregate { vi }, PairingSource::Catalog).unwrap();
    cor2.curve = Some(CurveData {
        branches: CORANK2_BRANCHES.iter().map(|b| p(b)).collect(),
        model: true,
        pairing: PairingSpec::Explicit(pairing),
    });
    cor2.expected_boundary = vec![corank2_boundary()];
    cor2.note = "double-curve branches are modelled over ℚ(i): s² − st + t² has roots in ℚ(√−3)";
    out.push(cor2);

    out
}

pub fn lookup(name: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.name.eq_ignore_ascii_case(name))
}

pub fn names() -> Vec<String> {
    catalog().into_iter().map(|e| e.name).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::{compute_report, ReportOptions};
    use crate::resolution::resolve_curve;

    #[test]
    fn names_are_unique() {
        let n = names();
        let mut sorted = n.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), n.len());
        assert!(lookup("s_3").is_some());
        assert!(lookup("nope").is_none());
    }

    #[test]
    fn sigma10_branches_multiply_to_d() {
        for e in catalog() {
            let (Some(g), Some(curve)) = (&e.germ, &e.curve) else { continue };
            let Some(d) = g.sigma10_curve() else { continue };
            let prod = curve.branches.iter().skip(1).fold(curve.branches[0].clone(), |a, b| &a * b);
            assert!(prod.proportional(&d), "{}: {prod} vs {d}", e.name);
        }
    }

    #[test]
    fn c_resolutions_have_the_drawn_shape() {
        for k in 2..=5 {
            let e = lookup(&format!("C_{k}")).unwrap();
            let r = resolve_curve(&e.curve.unwrap().branches).unwrap();
            assert!(crate::plumbing::isomorphic(&r.to_plumbing(), &e.expected_resolution.unwrap()), "C_{k}");
        }
    }

    #[test]
    fn cheap_expected_c_and_t() {
        for e in catalog() {
            let Some(g) = &e.germ else { continue };
            let opts = ReportOptions { lambda: e.lambda.clone(), ..Default::default() };
            let r = compute_report(g, &opts).unwrap();
            assert_eq!(r.c, e.expected_c, "{}", e.name);
            if let Some(t) = e.expected_t {
                assert_eq!(r.t, Some(Codim::Finite(t)), "{}", e.name);
            }
        }
    }
}
