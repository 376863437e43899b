//! Acceptance run: one PASS/FAIL line per criterion. All comparisons are
//! exact (tolerance 0); graph comparisons go through graphs_equivalent.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use mapgerm::arith::{parse_poly, vars_of};
use mapgerm::boundary::{build_boundary, build_boundary_graph, checksum, surgery_ledger, PairingData, PairingSource, VerticalData};
use mapgerm::catalog::{a1_cover_lambda, catalog, lookup, CatalogEntry, CORANK2_BRANCHES};
use mapgerm::germ::{
    c_weighted_homogeneous, compute_report, image_equation, invariant_c, invariant_t, jacobian_minors, presentation_matrix,
    source_vars, target_vars, MapGerm, NormalForm, ReportOptions,
};
use mapgerm::local::{intersection_multiplicity, milnor_number, resultant_order, Codim};
use mapgerm::plumbing::{graphs_equivalent, isomorphic, move_r0a, move_r1_blowdown, PlumbingGraph, Sign};
use mapgerm::resolution::{int_det, resolve_curve, EmbeddedResolutionGraph};
use mapgerm::verify::entry_boundary;
use mapgerm::{GaussRational, MultiPoly, PolyMatrix};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const E6_CAP: u32 = 512;
const E6_BUDGET: Duration = Duration::from_secs(60);
const SEED: u64 = 0x5eed_2024;

struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { failures: Vec::new(), notes: Vec::new() }
    }

    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }
}

fn st(p: &str) -> MultiPoly {
    parse_poly(p, &source_vars()).unwrap()
}

fn xyz(p: &str) -> MultiPoly {
    parse_poly(p, &target_vars()).unwrap()
}

fn entry(name: &str) -> CatalogEntry {
    lookup(name).unwrap_or_else(|| panic!("no catalog entry {name}"))
}

fn germ_of(name: &str) -> MapGerm {
    entry(name).germ.unwrap_or_else(|| panic!("{name} has no germ"))
}

fn c_of(g: &MapGerm, cap: u32) -> Option<u64> {
    invariant_c(g, cap).ok()?.finite()
}

// ---------------------------------------------------------------- 1

fn invariant_table(out: &mut Outcome) {
    let mut table: Vec<(String, u64)> = vec![("crosscap".into(), 1)];
    for k in 1..=6u64 {
        table.push((format!("S_{}", k - 1), k));
    }
    for k in 2..=6u64 {
        table.push((format!("A{}-cover", k - 1), k * k - 1));
    }
    table.push(("D-cover-2".into(), 39));
    table.push(("D-cover-3".into(), 71));
    for (name, want) in &table {
        let got = c_of(&germ_of(name), mapgerm::local::DEFAULT_DEGREE_CAP);
        out.expect(got == Some(*want), format!("C({name}) = {got:?}, expected {want}"));
    }

    // weighted-homogeneous formula
    let mut formula: Vec<(String, u64)> = vec![("E6-cover".into(), 167), ("E7-cover".into(), 383), ("E8-cover".into(), 1079)];
    for k in 2..=6u64 {
        formula.push((format!("A{}-cover", k - 1), k * k - 1));
    }
    for (name, want) in &formula {
        let [w1, w2, d1, d2, d3] = entry(name).weights.expect("weights");
        let got = c_weighted_homogeneous(w1, w2, d1, d2, d3).ok();
        out.expect(got == Some(*want), format!("formula C({name}) = {got:?}, expected {want}"));
    }

    let start = Instant::now();
    let got = c_of(&germ_of("E6-cover"), E6_CAP);
    let took = start.elapsed();
    out.expect(got == Some(167), format!("jet C(E6) = {got:?}, expected 167"));
    out.expect(took <= E6_BUDGET, format!("E6 jet took {took:?}"));
    out.notes.push(format!("E6 jet {:.2}s", took.as_secs_f64()));
}

// ---------------------------------------------------------------- 2

fn ratio(a: &MultiPoly, b: &MultiPoly) -> Option<GaussRational> {
    let (_, ca) = a.leading_term()?;
    let (_, cb) = b.leading_term()?;
    let r = cb / ca;
    (&a.scale(&r) == b).then_some(r)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

/// b[i][j] = r_i · c_j · a[π i][ρ j] for some permutations and nonzero constants.
fn same_up_to_units(a: &PolyMatrix, b: &PolyMatrix) -> bool {
    let n = a.rows();
    if a.cols() != n || b.rows() != n || b.cols() != n {
        return false;
    }
    for pr in permutations(n) {
        'cols: for pc in permutations(n) {
            let mut row: Vec<Option<GaussRational>> = vec![None; n];
            let mut col: Vec<Option<GaussRational>> = vec![None; n];
            let mut cells = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    let (x, y) = (a.get(pr[i], pc[j]), b.get(i, j));
                    match (x.is_zero(), y.is_zero()) {
                        (true, true) => {}
                        (false, false) => match ratio(x, y) {
                            Some(r) => cells.push((i, j, r)),
                            None => continue 'cols,
                        },
                        _ => continue 'cols,
                    }
                }
            }
            // propagate r_i c_j = ratio over the bipartite graph of cells
            let mut changed = true;
            while changed {
                changed = false;
                for (i, j, r) in &cells {
                    match (&row[*i], &col[*j]) {
                        (None, None) => {
                            row[*i] = Some(GaussRational::from_int(1));
                            changed = true;
                        }
                        (Some(ri), None) => {
                            col[*j] = Some(r / ri);
                            changed = true;
                        }
                        (None, Some(cj)) => {
                            row[*i] = Some(r / cj);
                            changed = true;
                        }
                        (Some(ri), Some(cj)) => {
                            if &(ri * cj) != r {
                                continue 'cols;
                            }
                        }
                    }
                }
            }
            return true;
        }
    }
    false
}

fn displayed_hk(k: u32) -> PolyMatrix {
    let yk = format!("y^{k}");
    let yk1 = format!("y^{}", k - 1);
    let rows = [["-z", yk.as_str(), "x*y"], ["x", "-z", yk.as_str()], [yk1.as_str(), "x", "-z"]];
    let rows = rows.iter().map(|r| r.iter().map(|e| xyz(e)).collect()).collect();
    PolyMatrix::from_rows(rows, &target_vars()).unwrap()
}

fn fitting_pipeline(out: &mut Outcome) {
    let cap = mapgerm::local::DEFAULT_DEGREE_CAP;
    for k in 1..=4u32 {
        let g = germ_of(&format!("H_{k}"));
        let Ok(lambda) = presentation_matrix(&g) else {
            out.expect(false, format!("H_{k}: no presentation matrix"));
            continue;
        };
        out.expect(same_up_to_units(&lambda, &displayed_hk(k)), format!("H_{k}: λ = {lambda}"));
        let f = image_equation(&lambda).unwrap();
        let want = xyz(&format!("y^{} - z^3 + x^3*y + 3*z*x*y^{k}", 3 * k - 1));
        out.expect(f.proportional(&want), format!("H_{k}: det λ = {f}"));
        let t = invariant_t(&lambda, cap).ok().and_then(|t| t.finite());
        out.expect(t == Some(k as u64 - 1), format!("T(H_{k}) = {t:?}"));
    }

    // the matcher must not accept everything
    out.expect(!same_up_to_units(&displayed_hk(2), &displayed_hk(3)), "λ(H_2) matched λ(H_3)");

    let lambda = a1_cover_lambda();
    let f = image_equation(&lambda).unwrap();
    out.expect(f.proportional(&xyz("(z^2 - x*y)^2")), format!("A_1: det λ = {f}"));
    let t = invariant_t(&lambda, cap).ok().and_then(|t| t.finite());
    out.expect(t == Some(1), format!("T(A_1) = {t:?}"));

    for e in catalog() {
        if !["S", "B", "C", "F"].contains(&&*e.family) {
            continue;
        }
        let g = e.germ.clone().unwrap();
        let t = presentation_matrix(&g).ok().and_then(|l| invariant_t(&l, cap).ok()).and_then(|t| t.finite());
        out.expect(t == Some(0), format!("T({}) = {t:?}", e.name));
    }

    let g = germ_of("corank2");
    let r = compute_report(&g, &ReportOptions::default()).unwrap();
    out.expect(r.t == Some(Codim::Finite(1)), format!("T(corank-2) = {:?}", r.t));
    out.expect(r.c == Codim::Finite(3), format!("C(corank-2) = {}", r.c));
}

/// The true corank-2 double curve has a factor s² − st + t², which splits
/// only over ℚ(ω); the catalog resolves the model s² + t² instead.
fn corank2_model(out: &mut Outcome) {
    let g = germ_of("corank2");
    let r = compute_report(&g, &ReportOptions::default()).unwrap();
    let d = st(r.double_curve_d.as_deref().unwrap_or("0"));
    let truth = st("(s + t)*(s + t^2)*(s^2 + t)*(s^2 - s*t + t^2)");
    let unit = d.div_exact(&truth);
    out.expect(
        unit.as_ref().is_some_and(|u| !u.constant_term().is_zero()),
        format!("d = {d} is not a unit times {truth}"),
    );

    let common: Vec<MultiPoly> = CORANK2_BRANCHES[..3].iter().map(|b| st(b)).collect();
    let model = &st(CORANK2_BRANCHES[3]) * &st(CORANK2_BRANCHES[4]);
    let quad = st("s^2 - s*t + t^2");
    let table = |q: &MultiPoly| -> Vec<Option<u64>> {
        let mut row: Vec<Option<u64>> = common.iter().map(|b| intersection_multiplicity(b, q).ok().and_then(|c| c.finite())).collect();
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            row.push(intersection_multiplicity(&common[a], &common[b]).ok().and_then(|c| c.finite()));
        }
        row.push(milnor_number(q).ok().and_then(|c| c.finite()));
        row
    };
    let (tm, tt) = (table(&model), table(&quad));
    out.expect(tm == tt, format!("intersection tables differ: model {tm:?} vs true {tt:?}"));
    let prod = CORANK2_BRANCHES.iter().map(|b| st(b)).fold(MultiPoly::one(&source_vars()), |a, b| &a * &b);
    let (mu_model, mu_true) = (milnor_number(&prod).ok(), milnor_number(&truth).ok());
    out.expect(mu_model == mu_true, format!("μ differs: model {mu_model:?} vs true {mu_true:?}"));
}

// ---------------------------------------------------------------- 3

fn double_curve_consistency(out: &mut Outcome) {
    let mut checked = 0;
    for e in catalog() {
        let Some(g) = &e.germ else { continue };
        if !matches!(g.normal_form(), NormalForm::Corank1Monomial(_)) {
            continue;
        }
        let f = image_equation(&presentation_matrix(g).unwrap()).unwrap();
        let minors = jacobian_minors(g);
        let mut quotients = Vec::new();
        for (i, var) in ["x", "y", "z"].iter().enumerate() {
            if minors[i].is_zero() {
                continue;
            }
            match g.pullback(&f.derivative(var)).div_exact(&minors[i]) {
                Some(q) => quotients.push(q),
                None => out.expect(false, format!("{}: M{} does not divide Φ*(∂{var} f)", e.name, i + 1)),
            }
        }
        out.expect(quotients.len() >= 2, format!("{}: fewer than two usable indices", e.name));
        for q in &quotients[1..] {
            out.expect(q.proportional(&quotients[0]), format!("{}: {q} vs {}", e.name, quotients[0]));
        }
        if let Some(k) = e.name.strip_prefix("C_") {
            let want = st(&format!("s*t^2 + s^{k}"));
            out.expect(quotients[0].proportional(&want), format!("{}: d = {}", e.name, quotients[0]));
        }
        checked += 1;
    }
    out.notes.push(format!("{checked} germs"));
}

// ---------------------------------------------------------------- 4

struct Expected {
    euler: Vec<i64>,
    edges: Vec<(usize, usize)>,
    arrows: Vec<usize>,
    mult: Vec<Vec<u64>>,
}

/// Ex. C_k as drawn, with E_1, … numbered in blow-up order (0-based here).
fn c_k_expected(k: usize) -> (Vec<String>, Expected) {
    let n = k / 2;
    if k == 2 {
        // both branches are smooth and tangent: one extra blow-up
        return (
            vec!["s".into(), "t^2 + s".into()],
            Expected { euler: vec![-2, -1], edges: vec![(0, 1)], arrows: vec![1, 1], mult: vec![vec![1, 2], vec![1, 2]] },
        );
    }
    if k % 2 == 1 {
        let mut euler = vec![-2; n];
        euler[n - 1] = -1;
        let edges = (1..n).map(|i| (i - 1, i)).collect();
        let m1 = vec![1; n];
        let m2: Vec<u64> = (1..=n as u64).collect();
        (
            vec!["s".into(), format!("t + i*s^{n}"), format!("t - i*s^{n}")],
            Expected { euler, edges, arrows: vec![0, n - 1, n - 1], mult: vec![m1, m2.clone(), m2] },
        )
    } else {
        // E_1 … E_{n−1} a bamboo, E_n the −2 leaf, E_{n+1} the −1 vertex
        let mut euler = vec![-2; n + 1];
        euler[n - 2] = -3;
        euler[n] = -1;
        let mut edges: Vec<(usize, usize)> = (1..n - 1).map(|i| (i - 1, i)).collect();
        edges.push((n - 2, n));
        edges.push((n - 1, n));
        edges.sort();
        let mut m1 = vec![1; n + 1];
        m1[n] = 2;
        let mut m2: Vec<u64> = (1..=n as u64).map(|i| 2 * i).collect();
        m2[n - 1] = 2 * n as u64 - 1;
        m2.push(4 * n as u64 - 2);
        (vec!["s".into(), format!("t^2 + s^{}", k - 1)], Expected { euler, edges, arrows: vec![0, n], mult: vec![m1, m2] })
    }
}

fn table_of(g: &EmbeddedResolutionGraph) -> Expected {
    let nv = g.vertex_count();
    Expected {
        euler: (0..nv).map(|v| g.euler(v)).collect(),
        edges: g.edges().to_vec(),
        arrows: (0..g.branch_count()).map(|i| g.arrow(i)).collect(),
        mult: (0..g.branch_count()).map(|i| (0..nv).map(|v| g.multiplicity(i, v)).collect()).collect(),
    }
}

fn resolution_graphs(out: &mut Outcome) {
    for k in 2..=7 {
        let (branches, want) = c_k_expected(k);
        let branches: Vec<MultiPoly> = branches.iter().map(|b| st(b)).collect();
        let g = match resolve_curve(&branches) {
            Ok(g) => g,
            Err(e) => {
                out.expect(false, format!("C_{k}: {e}"));
                continue;
            }
        };
        let got = table_of(&g);
        out.expect(got.euler == want.euler, format!("C_{k}: Euler numbers {:?} vs {:?}", got.euler, want.euler));
        out.expect(got.edges == want.edges, format!("C_{k}: edges {:?} vs {:?}", got.edges, want.edges));
        out.expect(got.arrows == want.arrows, format!("C_{k}: arrows {:?} vs {:?}", got.arrows, want.arrows));
        out.expect(got.mult == want.mult, format!("C_{k}: multiplicities {:?} vs {:?}", got.mult, want.mult));
        out.expect(g.mult_residual().iter().flatten().all(|r| *r == 0), format!("C_{k}: nonzero residual"));
        out.expect(g.is_negative_definite(), format!("C_{k}: not negative definite"));
        if k <= 5 {
            let e = entry(&format!("C_{k}"));
            let drawn = e.expected_resolution.unwrap();
            out.expect(isomorphic(&g.to_plumbing(), &drawn), format!("C_{k}: catalog graph differs"));
        }
    }
}

// ---------------------------------------------------------------- 5

fn boundary_graphs(out: &mut Outcome) {
    let names = [
        "crosscap", "S_1", "S_2", "S_3", "S_4", "B_2", "B_3", "B_4", "C_2", "C_3", "C_4", "C_5", "H_1", "H_2", "H_3", "F_4",
        "corank2",
    ];
    let mut compared = 0;
    for name in names {
        let e = entry(name);
        let forms = e.expected_boundary.len();
        out.expect(forms >= 1, format!("{name}: no expected graph"));
        if name == "S_1" {
            out.expect(forms == 2, format!("S_1: {forms} displayed forms, expected 2"));
        }
        let b = match entry_boundary(&e) {
            Some(Ok((_, b))) => b,
            Some(Err(err)) => {
                out.expect(false, format!("{name}: {err}"));
                continue;
            }
            None => {
                out.expect(false, format!("{name}: no curve data"));
                continue;
            }
        };
        for (k, want) in e.expected_boundary.iter().enumerate() {
            let eq = graphs_equivalent(&b.graph, want);
            out.expect(matches!(eq, Ok(true)), format!("{name} form {}: {eq:?}\n{}", k + 1, b.graph.to_text()));
            compared += 1;
        }
    }
    out.notes.push(format!("{compared} graphs"));
}

// ---------------------------------------------------------------- 6, 7

fn sigma10_entries() -> Vec<CatalogEntry> {
    catalog().into_iter().filter(|e| e.is_sigma10() && e.curve.is_some()).collect()
}

fn checksums(out: &mut Outcome) {
    let entries = sigma10_entries();
    for e in &entries {
        let Some(c) = c_of(e.germ.as_ref().unwrap(), mapgerm::local::DEFAULT_DEGREE_CAP) else {
            out.expect(false, format!("{}: C undecided", e.name));
            continue;
        };
        match entry_boundary(e) {
            Some(Ok((_, b))) => {
                let cs = checksum(&b.ledger, c);
                out.expect(cs.holds, format!("{}: Σ𝔳i = {} but −ΣD·D − C = {}", e.name, cs.lhs, cs.rhs));
            }
            other => out.expect(false, format!("{}: {:?}", e.name, other.map(|r| r.err()))),
        }
    }
    out.notes.push(format!("{} germs", entries.len()));
}

fn derived_invariants(out: &mut Outcome) {
    let report = |name: &str, lambda: Option<PolyMatrix>| {
        compute_report(&germ_of(name), &ReportOptions { lambda, ..Default::default() }).unwrap()
    };
    let l = report("A1-cover", Some(a1_cover_lambda())).derived.l;
    out.expect(l == Some(0), format!("L(A_1) = {l:?}"));
    let l = report("crosscap", None).derived.l;
    out.expect(l == Some(1), format!("L(cross-cap) = {l:?}"));

    for e in catalog() {
        let Some(g) = &e.germ else { continue };
        let r = compute_report(g, &ReportOptions { lambda: e.lambda.clone(), ..Default::default() }).unwrap();
        if let Some(c) = r.c.finite() {
            out.expect(r.derived.omega == Some(-(c as i64)), format!("Ω({}) = {:?}, C = {c}", e.name, r.derived.omega));
        }
    }

    for e in sigma10_entries() {
        let c = c_of(e.germ.as_ref().unwrap(), mapgerm::local::DEFAULT_DEGREE_CAP).unwrap_or(u64::MAX) as i64;
        let Some(Ok((p, _))) = entry_boundary(&e) else {
            out.expect(false, format!("{}: no pairing", e.name));
            continue;
        };
        let (j, l) = (p.classes().len() as i64, p.branch_count() as i64);
        out.expect((c - (2 * j - l)).rem_euclid(2) == 0, format!("{}: C = {c}, |J| = {j}, l = {l}", e.name));
    }
}

// ---------------------------------------------------------------- 8

struct Sweep {
    rng: ChaCha8Rng,
    cases: BTreeMap<&'static str, usize>,
}

impl Sweep {
    fn poly(&mut self, max_deg: u32, len: usize, through_origin: bool) -> MultiPoly {
        let vars = vars_of(&["x", "y"]);
        let mut p = MultiPoly::zero(&vars);
        for _ in 0..self.rng.gen_range(0..=len) {
            let (a, b) = (self.rng.gen_range(0..=max_deg), self.rng.gen_range(0..=max_deg));
            if through_origin && a + b == 0 {
                continue;
            }
            let c = GaussRational::from_parts(self.rng.gen_range(-4..=4), self.rng.gen_range(-2..=2));
            p = &p + &parse_poly(&format!("x^{a}*y^{b}"), &vars).unwrap().scale(&c);
        }
        p
    }

    fn tree(&mut self) -> PlumbingGraph {
        let n = self.rng.gen_range(1..=6);
        let mut g = PlumbingGraph::new();
        let ids: Vec<u32> = (0..n).map(|_| g.add_vertex(self.rng.gen_range(-5..=-2), 0)).collect();
        for k in 1..n {
            let parent = ids[self.rng.gen_range(0..k)];
            g.add_edge(parent, ids[k], Sign::Plus);
        }
        g
    }

    fn branch(&mut self) -> MultiPoly {
        loop {
            let (p, q) = (self.rng.gen_range(1..=3u32), self.rng.gen_range(1..=4u32));
            if num_integer::gcd(p, q) != 1 {
                continue;
            }
            let c = [-2, -1, 1, 2, 3][self.rng.gen_range(0..5)];
            let (a, b) = if self.rng.gen() { ("t", "s") } else { ("s", "t") };
            return st(&format!("{a}^{p} + ({c})*{b}^{q}"));
        }
    }

    fn count(&mut self, what: &'static str) {
        *self.cases.entry(what).or_default() += 1;
    }
}

fn property_suites(out: &mut Outcome) {
    let mut s = Sweep { rng: ChaCha8Rng::seed_from_u64(SEED), cases: BTreeMap::new() };

    for _ in 0..300 {
        let (p, q, r) = (s.poly(3, 4, false), s.poly(3, 4, false), s.poly(3, 4, false));
        out.expect(&p * &q == &q * &p, format!("pq ≠ qp for {p}, {q}"));
        out.expect(&(&p * &q) * &r == &p * &(&q * &r), format!("associativity fails for {p}, {q}, {r}"));
        out.expect(&p * &(&q + &r) == &(&p * &q) + &(&p * &r), format!("distributivity fails for {p}, {q}, {r}"));
        let at = |f: &MultiPoly| f.substitute(&[("x", r.clone())]);
        out.expect(at(&(&p * &q)) == &at(&p) * &at(&q), format!("substitution not multiplicative: {p}, {q}, x = {r}"));
        s.count("ring/homomorphism laws");
    }

    for _ in 0..200 {
        let p = s.poly(4, 5, false);
        let dd = p.divided_difference("x");
        let vars = dd.vars().clone();
        let lhs = &(&MultiPoly::var("x", &vars) - &MultiPoly::var("x'", &vars)) * &dd;
        let rhs = &p.with_vars(&vars).unwrap() - &p.rename("x", "x'").with_vars(&vars).unwrap();
        out.expect(lhs == rhs, format!("divided difference of {p}"));
        s.count("divided differences");
    }

    let fin = |c: Result<Codim, mapgerm::local::LocalError>| match c {
        Ok(Codim::Finite(n)) => Some(Some(n)),
        Ok(Codim::Infinite) => Some(None),
        _ => None,
    };
    let mut done = 0;
    while done < 250 {
        let (f, g, h) = (s.poly(3, 3, true), s.poly(3, 3, true), s.poly(3, 3, true));
        if f.is_zero() || g.is_zero() || h.is_zero() {
            continue;
        }
        let (Some(fg), Some(fh), Some(fgh)) =
            (fin(intersection_multiplicity(&f, &g)), fin(intersection_multiplicity(&f, &h)), fin(intersection_multiplicity(&f, &(&g * &h))))
        else {
            continue;
        };
        let want = fg.zip(fh).map(|(a, b)| a + b);
        out.expect(fgh == want, format!("I({f}, gh) = {fgh:?}, sum {want:?} for g = {g}, h = {h}"));
        if let (Some(i), Some(r)) = (fg, resultant_order(&f, &g)) {
            out.expect(i == r, format!("I({f}, {g}) = {i} but resultant order {r}"));
            s.count("resultant cross-checks");
        }
        s.count("intersection additivity");
        done += 1;
    }

    for _ in 0..150 {
        let g = s.tree();
        let ids = g.ids();
        let v = ids[s.rng.gen_range(0..ids.len())];
        let mut big = g.clone();
        let new = big.add_vertex(-1, 0);
        let corner = !g.edges().is_empty() && s.rng.gen();
        if corner {
            let e = g.edges()[s.rng.gen_range(0..g.edges().len())].clone();
            big.remove_edge(e.a, e.b);
            for end in [e.a, e.b] {
                big.vertex_mut(end).unwrap().euler -= 1;
                big.add_edge(end, new, Sign::Plus);
            }
        } else {
            big.vertex_mut(v).unwrap().euler -= 1;
            big.add_edge(v, new, Sign::Plus);
        }
        out.expect(big.determinant() == -g.determinant(), format!("det under R1:\n{}", big.to_text()));
        let back = move_r1_blowdown(&big, new);
        out.expect(back.is_ok_and(|b| isomorphic(&b, &g)), format!("R1 round trip:\n{}", g.to_text()));
        let flipped = move_r0a(&move_r0a(&g, v).unwrap(), v).unwrap();
        out.expect(flipped == g, "R0(a) twice is not the identity");
        out.expect(matches!(graphs_equivalent(&big, &g), Ok(true)), format!("blow-up not equivalent:\n{}", g.to_text()));
        s.count("plumbing move round trips");
    }

    let mut done = 0;
    while done < 100 {
        let l = s.rng.gen_range(1..=3);
        let branches: Vec<MultiPoly> = (0..l).map(|_| s.branch()).collect();
        let Ok(gamma) = resolve_curve(&branches) else { continue };
        let mut sigma: Vec<usize> = (0..l).collect();
        if l >= 2 && s.rng.gen() {
            sigma.swap(0, 1);
        }
        let vi: BTreeMap<usize, i64> = (0..l).filter(|&i| sigma[i] >= i).map(|i| (i, s.rng.gen_range(-6..=2))).collect();
        let pairing = PairingData::new(sigma, VerticalData::Aggregate { vi }, PairingSource::UserSupplied).unwrap();
        let reference = build_boundary(&branches, &pairing).unwrap().graph;
        let bigger = if s.rng.gen() {
            gamma.blow_up_generic(s.rng.gen_range(0..gamma.vertex_count()))
        } else {
            gamma.blow_up_at_arrow(s.rng.gen_range(0..l))
        };
        let ledger = surgery_ledger(&bigger, &branches, &pairing).unwrap();
        let other = build_boundary_graph(&bigger, &ledger);
        out.expect(
            matches!(graphs_equivalent(&other, &reference), Ok(true)),
            format!("Γ̂ changed under a blow-up:\n{}\nvs\n{}", other.to_text(), reference.to_text()),
        );
        let unimodular = int_det(&bigger.intersection_matrix()).magnitude() == &num_bigint::BigUint::from(1u32);
        out.expect(unimodular, "resolution intersection matrix not unimodular");
        s.count("boundary blow-up independence");
        done += 1;
    }

    let total: usize = s.cases.values().sum();
    out.expect(total >= 1000, format!("only {total} randomized cases"));
    out.notes.push(format!(
        "{total} cases, seed {SEED:#x}: {}",
        s.cases.iter().map(|(k, v)| format!("{k} {v}")).collect::<Vec<_>>().join(", ")
    ));
}

// ----------------------------------------------------------------

fn main() {
    // the libtest harness is off; ignore its flags
    let criteria: Vec<(&str, &str, fn(&mut Outcome))> = vec![
        ("1", "invariant table C", invariant_table),
        ("2", "Fitting pipeline: λ(H_k), det, T", fitting_pipeline),
        ("2b", "corank-2 double curve vs model branches", corank2_model),
        ("3", "double curve agrees across indices; C_k", double_curve_consistency),
        ("4", "C_k resolution graphs and multiplicities", resolution_graphs),
        ("5", "boundary graphs", boundary_graphs),
        ("6", "checksum on every Σ^{1,0} germ", checksums),
        ("7", "L, Ω = −C, parity", derived_invariants),
        ("8", "randomized property suites", property_suites),
    ];
    let mut failed = 0;
    let start = Instant::now();
    for (id, title, run) in criteria {
        let t0 = Instant::now();
        let mut out = Outcome::new();
        run(&mut out);
        let status = if out.failures.is_empty() { "PASS" } else { "FAIL" };
        let notes = if out.notes.is_empty() { String::new() } else { format!(" [{}]", out.notes.join("; ")) };
        println!("criterion {id:<3} {status}  {title} (tolerance 0, {:.2}s){notes}", t0.elapsed().as_secs_f64());
        for f in &out.failures {
            println!("    - {}", f.replace('\n', "\n      "));
        }
        if !out.failures.is_empty() {
            failed += 1;
        }
    }
    println!("acceptance: {} failing criteria, {:.2}s total", failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
