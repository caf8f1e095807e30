use std::collections::VecDeque;

use super::{Edge, GraphError, MetricGraph, Vertex, VertexCondition};

/// A maximal spanning tree and the edges left out of it.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanningTree {
    pub tree: MetricGraph,
    pub removed: Vec<Edge>,
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[rb] = ra;
        true
    }
}

impl MetricGraph {
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for (i, e) in self.edges().iter().enumerate() {
            adj[e.from].push((e.to, i));
            if !e.is_loop() {
                adj[e.to].push((e.from, i));
            }
        }
        adj
    }

    /// Component label per vertex, labels in order of first vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut sets = DisjointSets::new(self.vertex_count());
        for e in self.edges() {
            sets.union(e.from, e.to);
        }
        let mut label = vec![usize::MAX; self.vertex_count()];
        let mut roots: Vec<usize> = Vec::new();
        for v in 0..self.vertex_count() {
            let r = sets.find(v);
            let l = match roots.iter().position(|&x| x == r) {
                Some(p) => p,
                None => {
                    roots.push(r);
                    roots.len() - 1
                }
            };
            label[v] = l;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// β = |E| − |V| + 1.
    pub fn betti_number(&self) -> Result<usize, GraphError> {
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(self.edge_count() + 1 - self.vertex_count())
    }

    pub fn is_tree(&self) -> bool {
        self.edge_count() > 0 && self.is_connected() && self.edge_count() + 1 == self.vertex_count()
    }

    /// Two-colourability of the underlying multigraph; a loop makes it false.
    pub fn is_bipartite(&self) -> bool {
        if self.edges().iter().any(Edge::is_loop) {
            return false;
        }
        let adj = self.adjacency();
        let mut colour: Vec<Option<bool>> = vec![None; self.vertex_count()];
        for start in 0..self.vertex_count() {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let c = colour[v].unwrap();
                for &(w, _) in &adj[v] {
                    match colour[w] {
                        None => {
                            colour[w] = Some(!c);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == c => return false,
                        Some(_) => {}
                    }
                }
            }
        }
        true
    }

    /// Inserts a Standard vertex at distance `position` from the edge's `from` end.
    ///
    /// The first piece keeps the edge id; the new vertex is `<edge>~m` and the
    /// second piece `<edge>~b`, suffixed further if those ids are taken.
    pub fn subdivide_edge(&self, edge: &str, position: f64) -> Result<MetricGraph, GraphError> {
        let ei = self.require_edge(edge)?;
        let old = self.edge(ei).clone();
        if !(position > 0.0 && position < old.length) {
            return Err(GraphError::PositionOutOfRange {
                edge: edge.to_string(),
                position,
            });
        }
        let vid = self.fresh_vertex_id(&format!("{edge}~m"));
        let eid = self.fresh_edge_id(&format!("{edge}~b"));
        let (mut vertices, mut edges) = self.clone().into_parts();
        let mid = vertices.len();
        vertices.push(Vertex {
            id: vid,
            condition: VertexCondition::Standard,
        });
        edges[ei] = Edge {
            id: old.id.clone(),
            from: old.from,
            to: mid,
            length: position,
        };
        edges.push(Edge {
            id: eid,
            from: mid,
            to: old.to,
            length: old.length - position,
        });
        MetricGraph::from_parts(vertices, edges, false)
    }

    /// Subdivides every edge at its midpoint; the result is always bipartite.
    pub fn subdivide_all_edges(&self) -> Result<MetricGraph, GraphError> {
        let ids: Vec<String> = self.edges().iter().map(|e| e.id.clone()).collect();
        let mut g = self.clone();
        for id in ids {
            let l = g.edge(g.require_edge(&id)?).length;
            g = g.subdivide_edge(&id, 0.5 * l)?;
        }
        Ok(g)
    }

    /// Removes a degree-two Standard vertex, merging its two edges into one.
    pub fn suppress_degree2_standard(&self, vertex: &str) -> Result<MetricGraph, GraphError> {
        let v = self.require_vertex(vertex)?;
        let degree = self.degree(v);
        if degree != 2 {
            return Err(GraphError::NotDegreeTwo {
                vertex: vertex.to_string(),
                degree,
            });
        }
        if self.condition(v) != VertexCondition::Standard {
            return Err(GraphError::NotStandard {
                vertex: vertex.to_string(),
            });
        }
        let ends = self.endpoints_at(v);
        if ends[0].edge == ends[1].edge {
            return Err(GraphError::WouldCreateDanglingLoop {
                vertex: vertex.to_string(),
            });
        }
        let (a, b) = (self.edge(ends[0].edge), self.edge(ends[1].edge));
        let far = |e: &Edge| if e.from == v { e.to } else { e.from };
        let merged = Edge {
            id: a.id.clone(),
            from: far(a),
            to: far(b),
            length: a.length + b.length,
        };
        let drop_edge = ends[1].edge;
        let (vertices, edges) = self.clone().into_parts();
        let remap = |i: usize| if i > v { i - 1 } else { i };
        let vertices: Vec<Vertex> = vertices
            .into_iter()
            .enumerate()
            .filter(|(i, _)| *i != v)
            .map(|(_, x)| x)
            .collect();
        let edges: Vec<Edge> = edges
            .into_iter()
            .enumerate()
            .filter(|(i, _)| *i != drop_edge)
            .map(|(i, e)| if i == ends[0].edge { merged.clone() } else { e })
            .map(|e| Edge {
                from: remap(e.from),
                to: remap(e.to),
                ..e
            })
            .collect();
        MetricGraph::from_parts(vertices, edges, false)
    }

    /// A spanning tree of largest total length (Kruskal, ties broken by edge order).
    pub fn maximal_spanning_tree(&self) -> Result<SpanningTree, GraphError> {
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        let mut order: Vec<usize> = (0..self.edge_count()).collect();
        order.sort_by(|&a, &b| self.edge(b).length.total_cmp(&self.edge(a).length));
        let mut sets = DisjointSets::new(self.vertex_count());
        let mut keep = vec![false; self.edge_count()];
        for &i in &order {
            let e = self.edge(i);
            if sets.union(e.from, e.to) {
                keep[i] = true;
            }
        }
        let (vertices, edges) = self.clone().into_parts();
        let mut kept = Vec::new();
        let mut removed = Vec::new();
        for (i, e) in edges.into_iter().enumerate() {
            if keep[i] {
                kept.push(e);
            } else {
                removed.push(e);
            }
        }
        let tree = MetricGraph::from_parts(vertices, kept, false)?;
        Ok(SpanningTree { tree, removed })
    }

    /// Distances from `source` along edges; only meaningful on trees.
    fn tree_distances(&self, source: usize) -> Vec<f64> {
        let adj = self.adjacency();
        let mut dist = vec![f64::INFINITY; self.vertex_count()];
        dist[source] = 0.0;
        let mut stack = vec![source];
        while let Some(v) = stack.pop() {
            for &(w, e) in &adj[v] {
                if dist[w].is_infinite() {
                    dist[w] = dist[v] + self.edge(e).length;
                    stack.push(w);
                }
            }
        }
        dist
    }

    /// Largest distance between two pendant vertices of a tree.
    pub fn tree_diameter(&self) -> Result<f64, GraphError> {
        if !self.is_tree() {
            return Err(GraphError::NotATree);
        }
        let pendants = self.pendant_vertices();
        let mut best = 0.0f64;
        for &p in &pendants {
            let dist = self.tree_distances(p);
            for &q in &pendants {
                best = best.max(dist[q]);
            }
        }
        Ok(best)
    }
}
