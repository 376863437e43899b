//! The moves R0(a), R1, R3 and R5 of the plumbing calculus.

use super::{Edge, PlumbingError, PlumbingGraph, Sign};

fn fail(mv: &'static str, v: u32, why: impl Into<String>) -> PlumbingError {
    PlumbingError::Move { mv, v, why: why.into() }
}

/// Flip the signs of all non-loop edges at v.
pub fn move_r0a(g: &PlumbingGraph, v: u32) -> Result<PlumbingGraph, PlumbingError> {
    if !g.has_vertex(v) {
        return Err(PlumbingError::NoVertex(v));
    }
    let mut out = g.clone();
    for e in out.edges_mut() {
        if e.touches(v) && !e.is_loop() {
            e.sign = e.sign.flip();
        }
    }
    Ok(out)
}

/// Blow down a genus-0 vertex with e = ε = ±1 and at most two edge-ends.
pub fn move_r1_blowdown(g: &PlumbingGraph, v: u32) -> Result<PlumbingGraph, PlumbingError> {
    const MV: &str = "R1";
    let vx = g.vertex(v).ok_or(PlumbingError::NoVertex(v))?;
    if vx.genus != 0 || vx.boundary != 0 {
        return Err(fail(MV, v, "vertex has genus or boundary components"));
    }
    if vx.euler.abs() != 1 {
        return Err(fail(MV, v, format!("Euler number {} is not ±1", vx.euler)));
    }
    if g.arrows_at(v) > 0 {
        return Err(fail(MV, v, "vertex carries an arrowhead"));
    }
    let eps = vx.euler;
    let at: Vec<Edge> = g.edges_at(v).cloned().collect();
    if at.iter().any(Edge::is_loop) {
        return Err(fail(MV, v, "vertex carries a loop"));
    }
    let mut out = g.clone();
    out.remove_vertex(v);
    match at.as_slice() {
        [] => {}
        [e] => out.vertex_mut(e.other(v)).unwrap().euler -= eps,
        [e1, e2] => {
            let (i, j) = (e1.other(v), e2.other(v));
            let sign = Sign::from_value(-eps).times(e1.sign).times(e2.sign);
            if i == j {
                out.vertex_mut(i).unwrap().euler -= 2 * eps;
            } else {
                out.vertex_mut(i).unwrap().euler -= eps;
                out.vertex_mut(j).unwrap().euler -= eps;
            }
            out.add_edge(i, j, sign);
        }
        _ => return Err(fail(MV, v, format!("valence {} exceeds 2", at.len()))),
    }
    Ok(out)
}

/// Absorb a genus-0, e = 0 vertex joining two distinct vertices i < j:
/// j merges into i.
pub fn move_r3_zero_chain(g: &PlumbingGraph, v: u32) -> Result<PlumbingGraph, PlumbingError> {
    const MV: &str = "R3";
    let vx = g.vertex(v).ok_or(PlumbingError::NoVertex(v))?;
    if vx.euler != 0 || vx.genus != 0 || vx.boundary != 0 || g.arrows_at(v) > 0 {
        return Err(fail(MV, v, "needs a bare genus-0 vertex with e = 0"));
    }
    let at: Vec<Edge> = g.edges_at(v).cloned().collect();
    let [e1, e2] = at.as_slice() else {
        return Err(fail(MV, v, format!("valence {} is not 2", at.len())));
    };
    let (mut i, mut j) = (e1.other(v), e2.other(v));
    if i == j || i == v || j == v {
        return Err(fail(MV, v, "neighbours are not two distinct vertices"));
    }
    if j < i {
        std::mem::swap(&mut i, &mut j);
    }
    let factor = Sign::from_value(-1).times(e1.sign).times(e2.sign);
    let mut out = g.clone();
    out.remove_vertex(v);
    let vj = out.vertex(j).unwrap().clone();
    {
        let vi = out.vertex_mut(i).unwrap();
        vi.euler += vj.euler;
        vi.genus += vj.genus;
        vi.boundary += vj.boundary;
    }
    let old: Vec<Edge> = std::mem::take(out.edges_mut());
    for e in old {
        if !e.touches(j) {
            out.edges_mut().push(e);
        } else if e.is_loop() {
            out.add_edge(i, i, e.sign);
        } else {
            let k = e.other(j);
            out.add_edge(i, k, factor.times(e.sign));
        }
    }
    for a in out.arrows_mut() {
        if a.vertex == j {
            a.vertex = i;
        }
    }
    out.remove_vertex(j);
    Ok(out)
}

/// Absorb a genus-0, e = 0 vertex joined to i by a ⊕⊖ pair: g_i += 1.
pub fn move_r5_handle(g: &PlumbingGraph, v: u32) -> Result<PlumbingGraph, PlumbingError> {
    const MV: &str = "R5";
    let vx = g.vertex(v).ok_or(PlumbingError::NoVertex(v))?;
    if vx.euler != 0 || vx.genus != 0 || vx.boundary != 0 || g.arrows_at(v) > 0 {
        return Err(fail(MV, v, "needs a bare genus-0 vertex with e = 0"));
    }
    let at: Vec<Edge> = g.edges_at(v).cloned().collect();
    let [e1, e2] = at.as_slice() else {
        return Err(fail(MV, v, format!("valence {} is not 2", at.len())));
    };
    let i = e1.other(v);
    if e1.is_loop() || e2.other(v) != i {
        return Err(fail(MV, v, "needs a double edge to a single neighbour"));
    }
    if e1.sign == e2.sign {
        return Err(fail(MV, v, "double edge signs must differ"));
    }
    let mut out = g.clone();
    out.remove_vertex(v);
    out.vertex_mut(i).unwrap().genus += 1;
    Ok(out)
}
