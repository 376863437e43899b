//! Greedy normalization and decorated isomorphism up to R0(a).

use std::collections::{BTreeMap, HashMap};

use super::moves::{move_r0a, move_r1_blowdown, move_r3_zero_chain, move_r5_handle};
use super::{PlumbingError, PlumbingGraph, Sign};

/// Largest normalized graph handed to the isomorphism search.
pub const MAX_EQUIV_VERTICES: usize = 24;

/// Apply R1, R3, R5 (lowest vertex id first, in that priority) until none
/// applies, then compact ids and canonicalize signs. Each move removes a
/// vertex, so this terminates.
pub fn normalize(g: &PlumbingGraph) -> PlumbingGraph {
    let mut g = g.clone();
    'outer: loop {
        type Move = fn(&PlumbingGraph, u32) -> Result<PlumbingGraph, PlumbingError>;
        let moves: [Move; 3] = [move_r1_blowdown, move_r3_zero_chain, move_r5_handle];
        for mv in moves {
            for id in g.ids() {
                if let Ok(h) = mv(&g, id) {
                    g = h;
                    continue 'outer;
                }
            }
        }
        break;
    }
    canonicalize_signs(&g.compact())
}

fn minus_count(g: &PlumbingGraph) -> usize {
    g.edges().iter().filter(|e| !e.is_loop() && e.sign == Sign::Minus).count()
}

/// Make a BFS spanning forest (from the lowest id) all ⊕ by R0(a), then
/// flip greedily in id order while that lowers the number of ⊖ edges.
pub fn canonicalize_signs(g: &PlumbingGraph) -> PlumbingGraph {
    let mut g = g.clone();
    let ids = g.ids();
    let mut seen: Vec<u32> = Vec::new();
    for &root in &ids {
        if seen.contains(&root) {
            continue;
        }
        seen.push(root);
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let nbrs: Vec<(u32, Sign)> = g.edges_at(v).filter(|e| !e.is_loop()).map(|e| (e.other(v), e.sign)).collect();
            for (w, sign) in nbrs {
                if seen.contains(&w) {
                    continue;
                }
                seen.push(w);
                if sign == Sign::Minus {
                    g = move_r0a(&g, w).unwrap();
                }
                queue.push_back(w);
            }
        }
    }
    loop {
        let before = minus_count(&g);
        let mut improved = false;
        for &v in &ids {
            let h = move_r0a(&g, v).unwrap();
            if minus_count(&h) < minus_count(&g) {
                g = h;
                improved = true;
            }
        }
        if !improved || minus_count(&g) >= before {
            break;
        }
    }
    let mut out = g.clone();
    out.edges_mut().sort_by_key(|e| (e.a, e.b, e.sign));
    out
}

struct View {
    ids: Vec<u32>,
    /// signs of the edges between index pairs (a < b)
    pair: HashMap<(usize, usize), Vec<Sign>>,
    count: Vec<Vec<usize>>,
    loops: Vec<Vec<Sign>>,
    label: Vec<(i64, u32, u32, usize)>,
}

impl View {
    fn new(g: &PlumbingGraph) -> View {
        let ids = g.ids();
        let idx: BTreeMap<u32, usize> = ids.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let n = ids.len();
        let mut pair: HashMap<(usize, usize), Vec<Sign>> = HashMap::new();
        let mut count = vec![vec![0usize; n]; n];
        let mut loops = vec![Vec::new(); n];
        for e in g.edges() {
            let (a, b) = (idx[&e.a], idx[&e.b]);
            if a == b {
                loops[a].push(e.sign);
            } else {
                pair.entry((a.min(b), a.max(b))).or_default().push(e.sign);
                count[a][b] += 1;
                count[b][a] += 1;
            }
        }
        for l in &mut loops {
            l.sort();
        }
        let label = g
            .vertices()
            .iter()
            .map(|v| (v.euler, v.genus, v.boundary, g.arrows_at(v.id)))
            .collect();
        View { ids, pair, count, loops, label }
    }

    fn signs(&self, a: usize, b: usize) -> &[Sign] {
        self.pair.get(&(a.min(b), a.max(b))).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Joint colour refinement of two graphs; colours are comparable across them.
fn refine(x: &View, y: &View) -> (Vec<usize>, Vec<usize>) {
    let mut dict: HashMap<String, usize> = HashMap::new();
    let mut intern = |s: String| {
        let k = dict.len();
        *dict.entry(s).or_insert(k)
    };
    let init = |v: &View, k: usize| format!("{:?}{:?}", v.label[k], v.loops[k]);
    let mut cx: Vec<usize> = (0..x.ids.len()).map(|k| intern(init(x, k))).collect();
    let mut cy: Vec<usize> = (0..y.ids.len()).map(|k| intern(init(y, k))).collect();
    let classes = |a: &[usize], b: &[usize]| {
        let mut s: Vec<usize> = a.iter().chain(b).copied().collect();
        s.sort();
        s.dedup();
        s.len()
    };
    let mut n_classes = classes(&cx, &cy);
    loop {
        let step = |v: &View, c: &[usize], intern: &mut dyn FnMut(String) -> usize| -> Vec<usize> {
            (0..v.ids.len())
                .map(|k| {
                    let mut nb: Vec<(usize, usize)> =
                        (0..v.ids.len()).filter(|&w| v.count[k][w] > 0).map(|w| (c[w], v.count[k][w])).collect();
                    nb.sort();
                    intern(format!("{}|{:?}", c[k], nb))
                })
                .collect()
        };
        let nx = step(x, &cx, &mut intern);
        let ny = step(y, &cy, &mut intern);
        let m = classes(&nx, &ny);
        cx = nx;
        cy = ny;
        if m == n_classes {
            break;
        }
        n_classes = m;
    }
    (cx, cy)
}

/// Is there δ: V → {±1} turning the signs of `x` into those of `y` along π?
fn signs_compatible(x: &View, y: &View, pi: &[usize]) -> bool {
    let n = pi.len();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut parity = vec![false; n];
    fn find(parent: &mut Vec<usize>, parity: &mut Vec<bool>, a: usize) -> (usize, bool) {
        if parent[a] == a {
            return (a, false);
        }
        let (r, p) = find(parent, parity, parent[a]);
        parent[a] = r;
        parity[a] ^= p;
        (r, parity[a])
    }
    for (&(a, b), s1) in &x.pair {
        let s2 = y.signs(pi[a], pi[b]);
        let p1 = s1.iter().filter(|s| **s == Sign::Plus).count();
        let p2 = s2.iter().filter(|s| **s == Sign::Plus).count();
        let same = p1 == p2;
        let flipped = p1 == s2.len() - p2;
        let want = match (same, flipped) {
            (true, true) => continue,
            (true, false) => false,
            (false, true) => true,
            (false, false) => return false,
        };
        let (ra, pa) = find(&mut parent, &mut parity, a);
        let (rb, pb) = find(&mut parent, &mut parity, b);
        if ra == rb {
            if pa ^ pb != want {
                return false;
            }
        } else {
            parent[ra] = rb;
            parity[ra] = pa ^ pb ^ want;
        }
    }
    true
}

/// Decorated isomorphism (Euler numbers, genera, boundary counts, arrowhead
/// counts, loop signs) with edge signs compared up to R0(a) moves.
pub fn isomorphic(g1: &PlumbingGraph, g2: &PlumbingGraph) -> bool {
    if g1.vertex_count() != g2.vertex_count()
        || g1.edges().len() != g2.edges().len()
        || g1.arrows().len() != g2.arrows().len()
    {
        return false;
    }
    let x = View::new(g1);
    let y = View::new(g2);
    let (cx, cy) = refine(&x, &y);
    let hist = |c: &[usize]| {
        let mut h = c.to_vec();
        h.sort();
        h
    };
    if hist(&cx) != hist(&cy) {
        return false;
    }
    let n = cx.len();
    let class_size = |c: usize| cx.iter().filter(|&&d| d == c).count();
    // order: repeatedly take the unplaced vertex with most placed neighbours
    let mut order: Vec<usize> = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n)
            .filter(|k| !order.contains(k))
            .max_by_key(|&k| {
                let links = order.iter().filter(|&&o| x.count[k][o] > 0).count();
                (links, std::cmp::Reverse(class_size(cx[k])), std::cmp::Reverse(k))
            })
            .unwrap();
        order.push(next);
    }
    let mut pi = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn search(
        depth: usize,
        order: &[usize],
        x: &View,
        y: &View,
        cx: &[usize],
        cy: &[usize],
        pi: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if depth == order.len() {
            return signs_compatible(x, y, pi);
        }
        let v = order[depth];
        for w in 0..cy.len() {
            if used[w] || cy[w] != cx[v] {
                continue;
            }
            let ok = order[..depth].iter().all(|&u| x.count[v][u] == y.count[w][pi[u]]);
            if !ok {
                continue;
            }
            pi[v] = w;
            used[w] = true;
            if search(depth + 1, order, x, y, cx, cy, pi, used) {
                return true;
            }
            used[w] = false;
            pi[v] = usize::MAX;
        }
        false
    }
    search(0, &order, &x, &y, &cx, &cy, &mut pi, &mut used)
}

/// Equivalent under the implemented move set: isomorphic as given, or after
/// normalizing both sides. A semi-decision: `false` means "not shown".
pub fn graphs_equivalent(g1: &PlumbingGraph, g2: &PlumbingGraph) -> Result<bool, PlumbingError> {
    if g1.vertex_count() <= MAX_EQUIV_VERTICES && g2.vertex_count() <= MAX_EQUIV_VERTICES && isomorphic(g1, g2) {
        return Ok(true);
    }
    let (n1, n2) = (normalize(g1), normalize(g2));
    for n in [&n1, &n2] {
        if n.vertex_count() > MAX_EQUIV_VERTICES {
            return Err(PlumbingError::TooLarge(n.vertex_count()));
        }
    }
    Ok(isomorphic(&n1, &n2))
}
