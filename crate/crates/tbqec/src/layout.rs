//! Tanner-graph construction and layout analysis: connected components,
//! the toric-layout criterion and embedding, interaction vectors, the
//! weight-4 tangled layout, and constructive bi-planar decomposition.

use std::collections::BTreeMap;

use rustworkx_core::petgraph::graph::UnGraph;
use rustworkx_core::planar::is_planar;
use serde::Serialize;
use thiserror::Error;

use crate::code::{CssCode, Group, Monomial, TbCode};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LayoutError {
    #[error("tuple (i={i}, j={j}, g={g}, h={h}) does not satisfy the toric criterion")]
    NotToric { i: usize, j: usize, g: usize, h: usize },
    #[error("tangled layout needs a degree-4 graph (|A| = |B| = 2), got |A|={wa}, |B|={wb}")]
    NotDegreeFour { wa: usize, wb: usize },
    #[error("grid parameters mu={mu}, lambda={lambda} do not tile the group (mu*lambda != lm)")]
    BadGridSize { mu: usize, lambda: usize },
    #[error("no tangled toric layout with these parameters: {0}")]
    NoTangledLayout(String),
    #[error("bi-planar split is not defined for term pattern |A|={wa}, |B|={wb}")]
    UnsupportedWeight { wa: usize, wb: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexType {
    L,
    R,
    X,
    Z,
}

impl VertexType {
    pub fn is_check(self) -> bool {
        matches!(self, VertexType::X | VertexType::Z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    A,
    B,
}

/// One Tanner edge: a check vertex, a data vertex, and the polynomial term
/// that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TannerEdge {
    pub check: usize,
    pub data: usize,
    pub block: Block,
    pub term: usize,
}

/// The bipartite check/data graph of a TB code. Vertex ids pack the four
/// lm-sized label families: L, R, X, Z in that order, each indexed by the
/// monomial index ex*m + ey. L and R ids coincide with data-column indices
/// of the check matrices.
#[derive(Debug, Clone)]
pub struct TannerGraph {
    pub group: Group,
    pub edges: Vec<TannerEdge>,
}

impl TannerGraph {
    pub fn lm(&self) -> usize {
        self.group.size()
    }

    pub fn vertex_count(&self) -> usize {
        4 * self.lm()
    }

    pub fn vertex_id(&self, t: VertexType, label: Monomial) -> usize {
        let base = match t {
            VertexType::L => 0,
            VertexType::R => 1,
            VertexType::X => 2,
            VertexType::Z => 3,
        };
        base * self.lm() + self.group.index(label)
    }

    pub fn vertex_type(&self, id: usize) -> VertexType {
        match id / self.lm() {
            0 => VertexType::L,
            1 => VertexType::R,
            2 => VertexType::X,
            _ => VertexType::Z,
        }
    }

    pub fn label(&self, id: usize) -> Monomial {
        self.group.from_index(id % self.lm())
    }

    pub fn degree(&self, id: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| e.check == id || e.data == id)
            .count()
    }
}

/// Builds the Tanner graph so that its edge multiset equals the support of
/// [H_X; H_Z]: X(b)-L(b a_t) and X(b)-R(b b_t) from H_X = [A|B];
/// Z(g)-L(g b_t^T) and Z(g)-R(g a_t^T) from H_Z = [B^T|A^T].
pub fn build_tanner(code: &TbCode) -> TannerGraph {
    let group = code.group;
    let mut edges = Vec::with_capacity(2 * group.size() * code.weight());
    let mut graph = TannerGraph {
        group,
        edges: Vec::new(),
    };
    for idx in 0..group.size() {
        let beta = group.from_index(idx);
        for (t, &a) in code.a_monos.iter().enumerate() {
            edges.push(TannerEdge {
                check: graph.vertex_id(VertexType::X, beta),
                data: graph.vertex_id(VertexType::L, group.mul(beta, a)),
                block: Block::A,
                term: t,
            });
            edges.push(TannerEdge {
                check: graph.vertex_id(VertexType::Z, beta),
                data: graph.vertex_id(VertexType::R, group.mul(beta, group.inv(a))),
                block: Block::A,
                term: t,
            });
        }
        for (t, &b) in code.b_monos.iter().enumerate() {
            edges.push(TannerEdge {
                check: graph.vertex_id(VertexType::X, beta),
                data: graph.vertex_id(VertexType::R, group.mul(beta, b)),
                block: Block::B,
                term: t,
            });
            edges.push(TannerEdge {
                check: graph.vertex_id(VertexType::Z, beta),
                data: graph.vertex_id(VertexType::L, group.mul(beta, group.inv(b))),
                block: Block::B,
                term: t,
            });
        }
    }
    graph.edges = edges;
    graph
}

/// A connected component of the Tanner graph, packaged as a standalone
/// subcode: its vertices, its edges, and the data columns it owns.
#[derive(Debug, Clone)]
pub struct TannerComponent {
    pub vertices: Vec<usize>,
    pub edges: Vec<TannerEdge>,
    /// Global data-column indices (L columns are 0..lm, R columns lm..2lm).
    pub data_cols: Vec<usize>,
}

impl TannerComponent {
    /// The CSS subcode induced on this component's data qubits.
    pub fn induced_css(&self, code: &TbCode) -> CssCode {
        let css = &code.css;
        let lm = code.group.size();
        let xrows: Vec<usize> = self
            .vertices
            .iter()
            .filter(|&&v| v / lm == 2)
            .map(|&v| v % lm)
            .collect();
        let zrows: Vec<usize> = self
            .vertices
            .iter()
            .filter(|&&v| v / lm == 3)
            .map(|&v| v % lm)
            .collect();
        CssCode::from_checks(
            css.h_x.submatrix(&xrows, &self.data_cols),
            css.h_z.submatrix(&zrows, &self.data_cols),
        )
    }
}

pub fn connected_components(graph: &TannerGraph) -> Vec<TannerComponent> {
    let nv = graph.vertex_count();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for e in &graph.edges {
        adj[e.check].push(e.data);
        adj[e.data].push(e.check);
    }
    let mut comp_of = vec![usize::MAX; nv];
    let mut count = 0;
    for start in 0..nv {
        if comp_of[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        comp_of[start] = count;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if comp_of[w] == usize::MAX {
                    comp_of[w] = count;
                    stack.push(w);
                }
            }
        }
        count += 1;
    }
    let lm = graph.lm();
    let mut comps: Vec<TannerComponent> = (0..count)
        .map(|_| TannerComponent {
            vertices: Vec::new(),
            edges: Vec::new(),
            data_cols: Vec::new(),
        })
        .collect();
    for v in 0..nv {
        let c = &mut comps[comp_of[v]];
        c.vertices.push(v);
        if v < 2 * lm {
            c.data_cols.push(v);
        }
    }
    for e in &graph.edges {
        comps[comp_of[e.check]].edges.push(*e);
    }
    comps
}

/// True iff every pair of components is related by a monomial translation:
/// multiplying all labels of one component by a fixed group element maps its
/// edge set exactly onto the other's.
pub fn components_translation_isomorphic(graph: &TannerGraph, comps: &[TannerComponent]) -> bool {
    if comps.len() <= 1 {
        return true;
    }
    let group = graph.group;
    let edge_key = |e: &TannerEdge| (e.check, e.data, e.block as u8, e.term);
    let base = &comps[0];
    let base_x = base
        .vertices
        .iter()
        .copied()
        .find(|&v| graph.vertex_type(v) == VertexType::X)
        .expect("component without X checks");
    for other in &comps[1..] {
        let mut target: Vec<_> = other.edges.iter().map(edge_key).collect();
        target.sort_unstable();
        let found = other
            .vertices
            .iter()
            .copied()
            .filter(|&v| graph.vertex_type(v) == VertexType::X)
            .any(|v| {
                let g = group.mul(graph.label(v), group.inv(graph.label(base_x)));
                let translate = |id: usize| {
                    graph.vertex_id(graph.vertex_type(id), group.mul(graph.label(id), g))
                };
                let mut mapped: Vec<_> = base
                    .edges
                    .iter()
                    .map(|e| (translate(e.check), translate(e.data), e.block as u8, e.term))
                    .collect();
                mapped.sort_unstable();
                mapped == target
            });
        if !found {
            return false;
        }
    }
    true
}

/// A qualifying index tuple for the toric-layout criterion, 1-based into the
/// term lists as in the published tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ToricTuple {
    pub i: usize,
    pub j: usize,
    pub g: usize,
    pub h: usize,
    pub mu: usize,
    pub lambda: usize,
}

/// All ordered tuples (i != j over A-terms, g != h over B-terms) for which
/// p = a_i a_j^T and q = b_g b_h^T generate the full monomial group with
/// ord(p) * ord(q) = lm. Lexicographic order by (i, j, g, h).
pub fn toric_layout_tuples(code: &TbCode) -> Vec<ToricTuple> {
    let group = code.group;
    let lm = group.size();
    let mut out = Vec::new();
    for (i, &ai) in code.a_monos.iter().enumerate() {
        for (j, &aj) in code.a_monos.iter().enumerate() {
            if i == j {
                continue;
            }
            let p = group.mul(ai, group.inv(aj));
            let op = group.ord(p);
            if !lm.is_multiple_of(op) {
                continue;
            }
            for (g, &bg) in code.b_monos.iter().enumerate() {
                for (h, &bh) in code.b_monos.iter().enumerate() {
                    if g == h {
                        continue;
                    }
                    let q = group.mul(bg, group.inv(bh));
                    let oq = group.ord(q);
                    if op * oq != lm {
                        continue;
                    }
                    if group.span(&[p, q]).len() != lm {
                        continue;
                    }
                    out.push(ToricTuple {
                        i: i + 1,
                        j: j + 1,
                        g: g + 1,
                        h: h + 1,
                        mu: op,
                        lambda: oq,
                    });
                }
            }
        }
    }
    out
}

/// First qualifying tuple in lexicographic (i, j, g, h) order, or None when
/// the code has no toric layout.
pub fn toric_layout_check(code: &TbCode) -> Option<ToricTuple> {
    toric_layout_tuples(code).into_iter().next()
}

/// A long-range edge family: all edges of one (check type, block, term)
/// share a single interaction vector on the torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EdgeFamily {
    pub check: char,
    pub block: char,
    /// 1-based term index within its block.
    pub term: usize,
    /// Check-to-data coordinate difference in the symmetric range
    /// (-mu..mu] x (-lambda..lambda].
    pub vector: (i64, i64),
}

/// A toric layout: coordinates on the 2mu x 2lambda grid, the spanning
/// Cayley subgraph, and the long-range edges with interaction vectors.
///
/// Orientation convention: the X-check labeled by the identity sits at
/// (0, 0); the first coordinate is the p-direction (A-side 2-step
/// p = a_i a_j^T, period 2mu) and the second the q-direction (B-side,
/// period 2lambda). X-checks occupy (even, even), L data (odd, even),
/// R data (even, odd), Z-checks (odd, odd). Interaction vectors are
/// check-to-data differences; the two check types' vectors within one
/// term family are negatives of each other by construction.
#[derive(Debug, Clone)]
pub struct ToricLayout {
    pub tuple: ToricTuple,
    pub mu: usize,
    pub lambda: usize,
    /// Grid coordinates per vertex id.
    pub coords: Vec<(usize, usize)>,
    /// Indices into the Tanner edge list belonging to the Cayley subgraph.
    pub unit_edges: Vec<usize>,
    /// Remaining edges with their interaction vectors.
    pub long_edges: Vec<(usize, (i64, i64))>,
    /// One vector per (check type, block, term) family of long edges.
    pub families: Vec<EdgeFamily>,
}

fn wrap_symmetric(d: i64, period: i64) -> i64 {
    let r = d.rem_euclid(2 * period);
    if r > period {
        r - 2 * period
    } else {
        r
    }
}

pub fn build_toric_layout(
    code: &TbCode,
    graph: &TannerGraph,
    tuple: &ToricTuple,
) -> Result<ToricLayout, LayoutError> {
    let group = code.group;
    let lm = group.size();
    let (mu, lambda) = (tuple.mu, tuple.lambda);
    let not_toric = || LayoutError::NotToric {
        i: tuple.i,
        j: tuple.j,
        g: tuple.g,
        h: tuple.h,
    };
    if tuple.i == 0 || tuple.j == 0 || tuple.g == 0 || tuple.h == 0 {
        return Err(not_toric());
    }
    let ai = *code.a_monos.get(tuple.i - 1).ok_or_else(not_toric)?;
    let aj = *code.a_monos.get(tuple.j - 1).ok_or_else(not_toric)?;
    let bg = *code.b_monos.get(tuple.g - 1).ok_or_else(not_toric)?;
    let bh = *code.b_monos.get(tuple.h - 1).ok_or_else(not_toric)?;
    let p = group.mul(ai, group.inv(aj));
    let q = group.mul(bg, group.inv(bh));
    if group.ord(p) != mu || group.ord(q) != lambda || mu * lambda != lm {
        return Err(not_toric());
    }

    // alpha = p^u q^v; the criterion makes this decomposition unique.
    let mut decomp = vec![None; lm];
    let mut pu = group.identity();
    for u in 0..mu {
        let mut cur = pu;
        for v in 0..lambda {
            let slot = &mut decomp[group.index(cur)];
            if slot.is_some() {
                return Err(not_toric());
            }
            *slot = Some((u, v));
            cur = group.mul(cur, q);
        }
        pu = group.mul(pu, p);
    }

    let base_for = |t: VertexType| match t {
        VertexType::X => group.identity(),
        VertexType::L => ai,
        VertexType::R => bg,
        VertexType::Z => group.mul(ai, bg),
    };
    let mut coords = vec![(0usize, 0usize); graph.vertex_count()];
    for id in 0..graph.vertex_count() {
        let t = graph.vertex_type(id);
        let rel = group.mul(graph.label(id), group.inv(base_for(t)));
        let (u, v) = decomp[group.index(rel)].expect("decomposition is total");
        let (du, dv) = match t {
            VertexType::X => (0, 0),
            VertexType::L => (1, 0),
            VertexType::R => (0, 1),
            VertexType::Z => (1, 1),
        };
        coords[id] = (2 * u + du, 2 * v + dv);
    }

    let mut unit_edges = Vec::new();
    let mut long_edges = Vec::new();
    let mut family_vectors: BTreeMap<(char, char, usize), (i64, i64)> = BTreeMap::new();
    for (ei, e) in graph.edges.iter().enumerate() {
        let (cu, cv) = coords[e.check];
        let (du, dv) = coords[e.data];
        let vector = (
            wrap_symmetric(du as i64 - cu as i64, mu as i64),
            wrap_symmetric(dv as i64 - cv as i64, lambda as i64),
        );
        // The spanning Cayley subgraph is exactly the four chosen term
        // families; their edges come out as unit steps of the grid.
        let chosen = match e.block {
            Block::A => e.term + 1 == tuple.i || e.term + 1 == tuple.j,
            Block::B => e.term + 1 == tuple.g || e.term + 1 == tuple.h,
        };
        let is_unit = matches!(vector, (1, 0) | (-1, 0) | (0, 1) | (0, -1));
        if chosen && !is_unit {
            return Err(not_toric());
        }
        if chosen {
            unit_edges.push(ei);
        } else {
            long_edges.push((ei, vector));
            let key = (
                if graph.vertex_type(e.check) == VertexType::X { 'X' } else { 'Z' },
                if e.block == Block::A { 'A' } else { 'B' },
                e.term + 1,
            );
            if let Some(prev) = family_vectors.insert(key, vector) {
                // Translational invariance: one vector per family.
                assert_eq!(prev, vector, "family {key:?} is not translation invariant");
            }
        }
    }
    let families = family_vectors
        .into_iter()
        .map(|((check, block, term), vector)| EdgeFamily {
            check,
            block,
            term,
            vector,
        })
        .collect();
    Ok(ToricLayout {
        tuple: *tuple,
        mu,
        lambda,
        coords,
        unit_edges,
        long_edges,
        families,
    })
}

impl ToricLayout {
    /// The unit-edge subgraph must be the Cayley graph of Z_2mu x Z_2lambda:
    /// every vertex sees the four unit steps through its unit edges.
    pub fn unit_subgraph_is_cayley_grid(&self, graph: &TannerGraph) -> bool {
        let nv = graph.vertex_count();
        if self.coords.len() != nv {
            return false;
        }
        let mut steps: Vec<Vec<(i64, i64)>> = vec![Vec::new(); nv];
        for &ei in &self.unit_edges {
            let e = &graph.edges[ei];
            let (cu, cv) = self.coords[e.check];
            let (du, dv) = self.coords[e.data];
            let step = (
                wrap_symmetric(du as i64 - cu as i64, self.mu as i64),
                wrap_symmetric(dv as i64 - cv as i64, self.lambda as i64),
            );
            steps[e.check].push(step);
            steps[e.data].push((
                wrap_symmetric(-step.0, self.mu as i64),
                wrap_symmetric(-step.1, self.lambda as i64),
            ));
        }
        // On a period-2 axis the +1 and -1 steps are the same residue, so
        // normalize before comparing.
        let norm = |v: (i64, i64)| {
            (
                if self.mu == 1 { v.0.abs() } else { v.0 },
                if self.lambda == 1 { v.1.abs() } else { v.1 },
            )
        };
        let mut expected: Vec<_> = [(1, 0), (-1, 0), (0, 1), (0, -1)]
            .into_iter()
            .map(norm)
            .collect();
        expected.sort_unstable();
        steps.iter().all(|s| {
            if s.len() != 4 {
                return false;
            }
            let mut got: Vec<_> = s.iter().map(|&v| norm(v)).collect();
            got.sort_unstable();
            got == expected
        })
    }
}

/// A tangled toric layout for a degree-4 two-block code: grid coordinates
/// plus the boundary permutations sigma (columns, vertical wrap-around) and
/// tau (rows, horizontal wrap-around).
///
/// Convention: coords are (row, col) on a 2lambda x 2mu grid; the vertex at
/// (2lambda-1, u) connects down-around to (0, sigma[u]), and the vertex at
/// (r, 2mu-1) connects right-around to (tau[r], 0).
#[derive(Debug, Clone)]
pub struct TangledLayout {
    pub mu: usize,
    pub lambda: usize,
    pub sigma: Vec<usize>,
    pub tau: Vec<usize>,
    pub coords: Vec<(usize, usize)>,
}

/// The five-step grid embedding for weight-4 codes: fix a base X-check, grow
/// a unit cell from the L/R block split, tessellate row by row, then read
/// the boundary permutations off the unmatched wrap-around edges.
pub fn tangled_layout_weight4(
    code: &TbCode,
    graph: &TannerGraph,
    mu: usize,
    lambda: usize,
) -> Result<TangledLayout, LayoutError> {
    let group = code.group;
    let lm = group.size();
    if code.a_monos.len() != 2 || code.b_monos.len() != 2 {
        return Err(LayoutError::NotDegreeFour {
            wa: code.a_monos.len(),
            wb: code.b_monos.len(),
        });
    }
    if mu == 0 || lambda == 0 || mu * lambda != lm {
        return Err(LayoutError::BadGridSize { mu, lambda });
    }
    let (a1, a2) = (code.a_monos[0], code.a_monos[1]);
    let (b1, b2) = (code.b_monos[0], code.b_monos[1]);
    // Horizontal X-to-X step (rightwards across an L qubit) and vertical
    // step (downwards across an R qubit).
    let p = group.mul(a1, group.inv(a2));
    let q = group.mul(b1, group.inv(b2));

    // The grid tiles the group iff (r, c) -> q^r p^c is injective.
    let mut decomp = vec![None; lm];
    let mut qr = group.identity();
    for r in 0..lambda {
        let mut cur = qr;
        for c in 0..mu {
            let slot = &mut decomp[group.index(cur)];
            if slot.is_some() {
                return Err(LayoutError::NoTangledLayout(format!(
                    "grid does not tile the group: q^r p^c collide at r={r}, c={c}"
                )));
            }
            *slot = Some((r, c));
            cur = group.mul(cur, p);
        }
        qr = group.mul(qr, q);
    }

    // Boundary closure: wrapping off the bottom must land in the top row
    // (q^lambda a power of p), wrapping off the right in the left column.
    let q_lam = group.pow(q, lambda);
    let p_mu = group.pow(p, mu);
    let power_of = |base: Monomial, target: Monomial, limit: usize| -> Option<usize> {
        let mut cur = group.identity();
        for e in 0..limit {
            if cur == target {
                return Some(e);
            }
            cur = group.mul(cur, base);
        }
        None
    };
    let shift_col = power_of(p, q_lam, mu).ok_or_else(|| {
        LayoutError::NoTangledLayout("vertical wrap does not land in the top row".into())
    })?;
    let shift_row = power_of(q, p_mu, lambda).ok_or_else(|| {
        LayoutError::NoTangledLayout("horizontal wrap does not land in the left column".into())
    })?;

    let base_for = |t: VertexType| match t {
        VertexType::X => group.identity(),
        VertexType::L => a1,
        VertexType::R => b1,
        VertexType::Z => group.mul(a1, b1),
    };
    let mut coords = vec![(0usize, 0usize); graph.vertex_count()];
    for id in 0..graph.vertex_count() {
        let t = graph.vertex_type(id);
        let rel = group.mul(graph.label(id), group.inv(base_for(t)));
        let (r, c) = decomp[group.index(rel)].expect("decomposition is total");
        let (dr, dc) = match t {
            VertexType::X => (0, 0),
            VertexType::L => (0, 1),
            VertexType::R => (1, 0),
            VertexType::Z => (1, 1),
        };
        coords[id] = (2 * r + dr, 2 * c + dc);
    }

    let sigma: Vec<usize> = (0..2 * mu).map(|u| (u + 2 * shift_col) % (2 * mu)).collect();
    let tau: Vec<usize> = (0..2 * lambda)
        .map(|r| (r + 2 * shift_row) % (2 * lambda))
        .collect();
    let layout = TangledLayout {
        mu,
        lambda,
        sigma,
        tau,
        coords,
    };
    if !layout.reproduces_edges(graph) {
        return Err(LayoutError::NoTangledLayout(
            "grid plus boundary permutations do not reproduce the Tanner graph".into(),
        ));
    }
    Ok(layout)
}

impl TangledLayout {
    /// Rebuilds the edge multiset from grid adjacency plus (sigma, tau)
    /// boundary identifications and compares it with the Tanner graph's.
    pub fn reproduces_edges(&self, graph: &TannerGraph) -> bool {
        let rows = 2 * self.lambda;
        let cols = 2 * self.mu;
        let mut at = vec![usize::MAX; rows * cols];
        for (id, &(r, c)) in self.coords.iter().enumerate() {
            if r >= rows || c >= cols || at[r * cols + c] != usize::MAX {
                return false;
            }
            at[r * cols + c] = id;
        }
        let vertex = |r: usize, c: usize| at[r * cols + c];
        let mut grid_edges: Vec<(usize, usize)> = Vec::with_capacity(2 * rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let here = vertex(r, c);
                let right = if c + 1 < cols {
                    vertex(r, c + 1)
                } else {
                    vertex(self.tau[r], 0)
                };
                let down = if r + 1 < rows {
                    vertex(r + 1, c)
                } else {
                    vertex(0, self.sigma[c])
                };
                grid_edges.push((here.min(right), here.max(right)));
                grid_edges.push((here.min(down), here.max(down)));
            }
        }
        grid_edges.sort_unstable();
        let mut tanner_edges: Vec<(usize, usize)> = graph
            .edges
            .iter()
            .map(|e| (e.check.min(e.data), e.check.max(e.data)))
            .collect();
        tanner_edges.sort_unstable();
        grid_edges == tanner_edges
    }
}

/// Linear-time left-right planarity test. Parallel edges and self-loops are
/// collapsed first; they never change planarity.
pub fn planarity_test(edges: &[(usize, usize)]) -> bool {
    let mut dedup: Vec<(u32, u32)> = edges
        .iter()
        .filter(|(a, b)| a != b)
        .map(|&(a, b)| (a.min(b) as u32, a.max(b) as u32))
        .collect();
    dedup.sort_unstable();
    dedup.dedup();
    let g = UnGraph::<(), ()>::from_edges(dedup);
    is_planar(&g)
}

/// An edge bipartition certifying thickness <= 2 when both parts are planar.
#[derive(Debug, Clone)]
pub struct BiplanarSplit {
    /// Indices into the Tanner edge list.
    pub part1: Vec<usize>,
    pub part2: Vec<usize>,
    pub planar1: bool,
    pub planar2: bool,
}

impl BiplanarSplit {
    pub fn certifies_thickness_two(&self) -> bool {
        self.planar1 && self.planar2
    }
}

/// Splits the Tanner graph into two subcode edge sets following the
/// constructive term assignment and tests each part for planarity.
///
/// Supported patterns (|A|, |B|): (2,2) with parts {A1;B1} / {A2;B2},
/// (2,3) with {A1;B1,B2} / {A2;B3}, (3,3) with {A1;B1,B2} / {A2,A3;B3},
/// and (2,4) with {A1;B1,B2} / {A2;B3,B4}. Each part is a union of
/// term-cycles joined by aligned term-matchings, so both come out planar.
pub fn biplanar_split(code: &TbCode, graph: &TannerGraph) -> Result<BiplanarSplit, LayoutError> {
    let wa = code.a_monos.len();
    let wb = code.b_monos.len();
    let (a_part1, b_part1): (&[usize], &[usize]) = match (wa, wb) {
        (2, 2) => (&[0], &[0]),
        (2, 3) => (&[0], &[0, 1]),
        (3, 3) => (&[0], &[0, 1]),
        (2, 4) => (&[0], &[0, 1]),
        _ => return Err(LayoutError::UnsupportedWeight { wa, wb }),
    };
    let mut part1 = Vec::new();
    let mut part2 = Vec::new();
    for (ei, e) in graph.edges.iter().enumerate() {
        let in_part1 = match e.block {
            Block::A => a_part1.contains(&e.term),
            Block::B => b_part1.contains(&e.term),
        };
        if in_part1 {
            part1.push(ei);
        } else {
            part2.push(ei);
        }
    }
    let as_pairs = |ids: &[usize]| {
        ids.iter()
            .map(|&ei| {
                let e = &graph.edges[ei];
                (e.check, e.data)
            })
            .collect::<Vec<_>>()
    };
    let planar1 = planarity_test(&as_pairs(&part1));
    let planar2 = planarity_test(&as_pairs(&part2));
    Ok(BiplanarSplit {
        part1,
        part2,
        planar1,
        planar2,
    })
}
