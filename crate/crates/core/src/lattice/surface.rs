use nalgebra::DMatrix;
use serde::Serialize;

use super::spec::{measurement_pattern, Boundary, LatticeSpec, Site};
use crate::{Error, Result};

/// Horizontal edges sit at (odd row, even col) and join the vertices to
/// their west and east; vertical edges sit at (even row, odd col) and join
/// north to south.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Horizontal,
    Vertical,
}

/// One edge on a face boundary. `sign` is o(e, f): +1 on the north and south
/// sides, −1 on the east and west sides. `traversal` is +1 when a
/// counter-clockwise walk around the face follows the edge orientation
/// (west→east, north→south).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundaryEdge {
    pub edge: usize,
    pub sign: i8,
    pub traversal: i8,
}

/// Surface-code graph Λ obtained from a cluster lattice.
#[derive(Debug, Clone)]
pub struct SurfaceGraph {
    spec: LatticeSpec,
    vertices: Vec<Site>,
    faces: Vec<Site>,
    edges: Vec<Site>,
    edge_kind: Vec<EdgeKind>,
    edge_endpoints: Vec<Vec<usize>>,
    vertex_edges: Vec<Vec<usize>>,
    face_boundaries: Vec<Vec<BoundaryEdge>>,
    adjacency_sc: DMatrix<f64>,
}

/// Torus clusters must have even sides of at least 6 so that Λ is a simple
/// graph with the bulk structure everywhere.
pub(crate) fn check_torus_dims(spec: &LatticeSpec) -> Result<()> {
    if spec.boundary == Boundary::Torus
        && (spec.rows % 2 != 0 || spec.cols % 2 != 0 || spec.rows < 6 || spec.cols < 6)
    {
        return Err(Error::Parity(format!(
            "torus surface code needs even cluster dimensions >= 6, got {}x{}",
            spec.rows, spec.cols
        )));
    }
    Ok(())
}

impl SurfaceGraph {
    pub fn new(spec: &LatticeSpec) -> Result<Self> {
        check_torus_dims(spec)?;
        let pattern = measurement_pattern(spec);
        let sites = |ids: &[usize]| ids.iter().map(|&i| spec.site(i)).collect::<Vec<_>>();
        let vertices = sites(&pattern.p_nodes);
        let faces = sites(&pattern.q_nodes);
        let edges = sites(&pattern.kept);
        let vertex_index = index_map(spec, &pattern.p_nodes);
        let edge_index = index_map(spec, &pattern.kept);

        let mut edge_kind = Vec::with_capacity(edges.len());
        let mut edge_endpoints = Vec::with_capacity(edges.len());
        let mut vertex_edges = vec![Vec::new(); vertices.len()];
        for (e, &site) in edges.iter().enumerate() {
            let (kind, offsets) = if site.row % 2 == 1 {
                (EdgeKind::Horizontal, [(0, -1), (0, 1)])
            } else {
                (EdgeKind::Vertical, [(-1, 0), (1, 0)])
            };
            let ends: Vec<usize> = offsets
                .iter()
                .filter_map(|&(dr, dc)| spec.offset(site, dr, dc))
                .map(|v| vertex_index[spec.node_id(v)].expect("edge neighbour is a vertex"))
                .collect();
            for &v in &ends {
                vertex_edges[v].push(e);
            }
            edge_kind.push(kind);
            edge_endpoints.push(ends);
        }

        // Counter-clockwise order N, W, S, E with rows growing southwards.
        let sides: [(isize, isize, i8, i8); 4] = [(-1, 0, 1, -1), (0, -1, -1, 1), (1, 0, 1, 1), (0, 1, -1, -1)];
        let face_boundaries = faces
            .iter()
            .map(|&f| {
                sides
                    .iter()
                    .filter_map(|&(dr, dc, sign, traversal)| {
                        spec.offset(f, dr, dc).map(|e| BoundaryEdge {
                            edge: edge_index[spec.node_id(e)].expect("face neighbour is an edge"),
                            sign,
                            traversal,
                        })
                    })
                    .collect()
            })
            .collect();

        let n = edges.len();
        let mut adjacency_sc = DMatrix::zeros(n, n);
        for incident in &vertex_edges {
            for &a in incident {
                for &b in incident {
                    if a != b {
                        adjacency_sc[(a, b)] = 1.0;
                    }
                }
            }
        }
        Ok(Self {
            spec: *spec,
            vertices,
            faces,
            edges,
            edge_kind,
            edge_endpoints,
            vertex_edges,
            face_boundaries,
            adjacency_sc,
        })
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn n_modes(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Site] {
        &self.vertices
    }

    pub fn faces(&self) -> &[Site] {
        &self.faces
    }

    /// Cluster site of every edge-mode; the index is the mode index.
    pub fn edges(&self) -> &[Site] {
        &self.edges
    }

    pub fn edge_kind(&self, e: usize) -> EdgeKind {
        self.edge_kind[e]
    }

    /// Vertices joined by edge `e`, ordered west→east or north→south. On a
    /// planar boundary an edge may have a single endpoint.
    pub fn edge_endpoints(&self, e: usize) -> &[usize] {
        &self.edge_endpoints[e]
    }

    pub fn vertex_edges(&self, v: usize) -> &[usize] {
        &self.vertex_edges[v]
    }

    /// Number of edges meeting at `v`.
    pub fn valence(&self, v: usize) -> usize {
        self.vertex_edges[v].len()
    }

    pub fn face_boundary(&self, f: usize) -> &[BoundaryEdge] {
        &self.face_boundaries[f]
    }

    /// Edge-mode adjacency `A_SC`: two modes are adjacent when they share a
    /// vertex.
    pub fn adjacency_sc(&self) -> &DMatrix<f64> {
        &self.adjacency_sc
    }

    /// 0-based cluster coordinates `(row, col)` of edge-mode `e`.
    pub fn position(&self, e: usize) -> (f64, f64) {
        let s = self.edges[e];
        ((s.row - 1) as f64, (s.col - 1) as f64)
    }

    /// Euclidean distance between two cluster sites in units of the vertex
    /// lattice (two cluster steps), using the minimum image on a torus.
    pub fn lattice_distance(&self, a: Site, b: Site) -> f64 {
        let (dr, dc) = self.spec.displacement(a, b);
        0.5 * dr.hypot(dc)
    }

    /// JSON export with explicit edge lists and orientation signs.
    pub fn to_json(&self) -> serde_json::Value {
        let edges: Vec<_> = (0..self.n_modes())
            .map(|e| {
                serde_json::json!({
                    "mode": e,
                    "row": self.edges[e].row,
                    "col": self.edges[e].col,
                    "kind": self.edge_kind[e],
                    "endpoints": self.edge_endpoints[e],
                })
            })
            .collect();
        let faces: Vec<_> = self
            .faces
            .iter()
            .zip(&self.face_boundaries)
            .map(|(site, boundary)| serde_json::json!({ "row": site.row, "col": site.col, "boundary": boundary }))
            .collect();
        serde_json::json!({
            "rows": self.spec.rows,
            "cols": self.spec.cols,
            "boundary": self.spec.boundary,
            "vertices": self.vertices,
            "edges": edges,
            "faces": faces,
        })
    }
}

fn index_map(spec: &LatticeSpec, ids: &[usize]) -> Vec<Option<usize>> {
    let mut map = vec![None; spec.n_nodes()];
    for (k, &id) in ids.iter().enumerate() {
        map[id] = Some(k);
    }
    map
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_is_six_regular() {
        let sg = SurfaceGraph::new(&LatticeSpec::torus(8, 10, 0.0).unwrap()).unwrap();
        assert_eq!(sg.n_modes(), 40);
        assert_eq!(sg.vertices().len(), 20);
        assert_eq!(sg.faces().len(), 20);
        for row in sg.adjacency_sc().row_iter() {
            assert_eq!(row.sum(), 6.0);
        }
        assert!((0..sg.vertices().len()).all(|v| sg.valence(v) == 4));
        assert!((0..sg.n_modes()).all(|e| sg.edge_endpoints(e).len() == 2));
    }

    #[test]
    fn torus_parity_enforced() {
        assert!(matches!(SurfaceGraph::new(&LatticeSpec::torus(7, 8, 0.0).unwrap()), Err(Error::Parity(_))));
        assert!(matches!(SurfaceGraph::new(&LatticeSpec::torus(4, 4, 0.0).unwrap()), Err(Error::Parity(_))));
    }

    #[test]
    fn shared_edges_have_opposite_orientation_products() {
        for spec in [LatticeSpec::torus(6, 8, 0.0).unwrap(), LatticeSpec::planar(7, 9, 0.0).unwrap()] {
            let sg = SurfaceGraph::new(&spec).unwrap();
            let mut seen: Vec<Vec<i8>> = vec![Vec::new(); sg.n_modes()];
            for f in 0..sg.faces().len() {
                let b = sg.face_boundary(f);
                let h: i8 = b.iter().filter(|x| sg.edge_kind(x.edge) == EdgeKind::Horizontal).map(|x| x.sign).sum();
                assert!(b.iter().all(|x| x.sign == if sg.edge_kind(x.edge) == EdgeKind::Horizontal { 1 } else { -1 }));
                assert!(h <= 2);
                for x in b {
                    seen[x.edge].push(x.sign * x.traversal);
                }
            }
            for products in seen {
                assert!(products.len() <= 2);
                if products.len() == 2 {
                    assert_eq!(products[0], -products[1]);
                }
            }
        }
    }

    #[test]
    fn planar_boundary_structure() {
        let sg = SurfaceGraph::new(&LatticeSpec::planar(3, 3, 0.0).unwrap()).unwrap();
        assert_eq!(sg.n_modes(), 4);
        assert_eq!(sg.faces().len(), 1);
        assert_eq!(sg.face_boundary(0).len(), 4);
        assert!((0..4).all(|v| sg.valence(v) == 2));
        let sg = SurfaceGraph::new(&LatticeSpec::planar(4, 4, 0.0).unwrap()).unwrap();
        assert!((0..sg.n_modes()).any(|e| sg.edge_endpoints(e).len() == 1));
        let json = sg.to_json();
        assert_eq!(json["edges"].as_array().unwrap().len(), sg.n_modes());
    }
}
