use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::gaussian::GaussGraph;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Torus,
    Planar,
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "torus" => Ok(Boundary::Torus),
            "planar" => Ok(Boundary::Planar),
            other => Err(Error::Domain(format!("unknown boundary {other:?}"))),
        }
    }
}

impl std::fmt::Display for Boundary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Boundary::Torus => "torus",
            Boundary::Planar => "planar",
        })
    }
}

/// 1-based cluster coordinates of a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site {
    pub row: usize,
    pub col: usize,
}

impl Site {
    pub fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

/// Cluster dimensions, boundary and squeezing `log s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub rows: usize,
    pub cols: usize,
    pub boundary: Boundary,
    pub log_s: f64,
}

impl LatticeSpec {
    pub fn new(rows: usize, cols: usize, boundary: Boundary, log_s: f64) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Domain(format!("lattice must be non-empty, got {rows}x{cols}")));
        }
        if !log_s.is_finite() {
            return Err(Error::Domain(format!("log s must be finite, got {log_s}")));
        }
        Ok(Self { rows, cols, boundary, log_s })
    }

    pub fn torus(rows: usize, cols: usize, log_s: f64) -> Result<Self> {
        Self::new(rows, cols, Boundary::Torus, log_s)
    }

    pub fn planar(rows: usize, cols: usize, log_s: f64) -> Result<Self> {
        Self::new(rows, cols, Boundary::Planar, log_s)
    }

    pub fn s(&self) -> f64 {
        self.log_s.exp()
    }

    pub fn with_log_s(&self, log_s: f64) -> Self {
        Self { log_s, ..*self }
    }

    pub fn n_nodes(&self) -> usize {
        self.rows * self.cols
    }

    pub fn node_id(&self, site: Site) -> usize {
        (site.row - 1) * self.cols + (site.col - 1)
    }

    pub fn site(&self, id: usize) -> Site {
        Site::new(id / self.cols + 1, id % self.cols + 1)
    }

    /// Neighbour of `site` displaced by `(dr, dc)`, wrapping on the torus.
    pub fn offset(&self, site: Site, dr: isize, dc: isize) -> Option<Site> {
        let r = site.row as isize - 1 + dr;
        let c = site.col as isize - 1 + dc;
        let (rows, cols) = (self.rows as isize, self.cols as isize);
        match self.boundary {
            Boundary::Torus => Some(Site::new(
                r.rem_euclid(rows) as usize + 1,
                c.rem_euclid(cols) as usize + 1,
            )),
            Boundary::Planar => {
                if (0..rows).contains(&r) && (0..cols).contains(&c) {
                    Some(Site::new(r as usize + 1, c as usize + 1))
                } else {
                    None
                }
            }
        }
    }

    /// The four lattice neighbours (N, S, W, E) that exist, with repetition
    /// on small tori.
    pub fn neighbours(&self, site: Site) -> Vec<Site> {
        [(-1, 0), (1, 0), (0, -1), (0, 1)]
            .iter()
            .filter_map(|&(dr, dc)| self.offset(site, dr, dc))
            .collect()
    }

    /// Minimum-image displacement `(Δrow, Δcol)` from `a` to `b`.
    pub fn displacement(&self, a: Site, b: Site) -> (f64, f64) {
        let mut dr = b.row as f64 - a.row as f64;
        let mut dc = b.col as f64 - a.col as f64;
        if self.boundary == Boundary::Torus {
            let (rows, cols) = (self.rows as f64, self.cols as f64);
            dr -= rows * (dr / rows).round();
            dc -= cols * (dc / cols).round();
        }
        (dr, dc)
    }
}

/// Square-lattice adjacency with multiplicities (wrap-around on tiny tori
/// can join two nodes more than once, or a node to itself).
pub fn cluster_multigraph(spec: &LatticeSpec) -> DMatrix<f64> {
    let n = spec.n_nodes();
    let mut a = DMatrix::zeros(n, n);
    for id in 0..n {
        let site = spec.site(id);
        for nb in spec.neighbours(site) {
            a[(id, spec.node_id(nb))] += 1.0;
        }
    }
    a
}

/// Simple-graph adjacency `A_d`: entries saturate at 1 and self-loops are
/// dropped.
pub fn cluster_adjacency(spec: &LatticeSpec) -> DMatrix<f64> {
    let mut a = cluster_multigraph(spec);
    let n = a.nrows();
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = if i != j && a[(i, j)] > 0.0 { 1.0 } else { 0.0 };
        }
    }
    a
}

/// `Z = A_d + i s⁻² I`.
pub fn cluster_graph(spec: &LatticeSpec) -> GaussGraph {
    let n = spec.n_nodes();
    let s = spec.s();
    GaussGraph::new(cluster_adjacency(spec), DMatrix::identity(n, n) / (s * s))
        .expect("cluster graph is valid by construction")
}

/// Node ids grouped by measurement basis, each ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementPattern {
    pub q_nodes: Vec<usize>,
    pub p_nodes: Vec<usize>,
    pub kept: Vec<usize>,
}

pub fn measurement_pattern(spec: &LatticeSpec) -> MeasurementPattern {
    let mut pattern = MeasurementPattern { q_nodes: Vec::new(), p_nodes: Vec::new(), kept: Vec::new() };
    for id in 0..spec.n_nodes() {
        let Site { row, col } = spec.site(id);
        match (row % 2, col % 2) {
            (1, 1) => pattern.p_nodes.push(id),
            (0, 0) => pattern.q_nodes.push(id),
            _ => pattern.kept.push(id),
        }
    }
    pattern
}

#[cfg(test)]
mod tests {
    use super::*;

    fn degrees(a: &DMatrix<f64>) -> Vec<f64> {
        a.row_iter().map(|r| r.sum()).collect()
    }

    #[test]
    fn small_adjacencies() {
        let torus = LatticeSpec::torus(2, 2, 0.0).unwrap();
        assert!(degrees(&cluster_multigraph(&torus)).iter().all(|&d| d == 4.0));
        assert!(degrees(&cluster_adjacency(&torus)).iter().all(|&d| d == 2.0));

        let planar = LatticeSpec::planar(3, 3, 0.0).unwrap();
        let deg = degrees(&cluster_adjacency(&planar));
        assert_eq!(deg[0], 2.0);
        assert_eq!(deg[4], 4.0);

        let line = LatticeSpec::planar(1, 2, 0.0).unwrap();
        assert_eq!(cluster_adjacency(&line), DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));

        let big = LatticeSpec::torus(5, 6, 0.0).unwrap();
        assert!(degrees(&cluster_adjacency(&big)).iter().all(|&d| d == 4.0));
    }

    #[test]
    fn cluster_graph_entries() {
        let g = cluster_graph(&LatticeSpec::planar(1, 1, 0.5).unwrap());
        assert_eq!(g.v()[(0, 0)], 0.0);
        assert!((g.u()[(0, 0)] - (-1.0f64).exp()).abs() < 1e-15);
        let g = cluster_graph(&LatticeSpec::planar(2, 1, 0.0).unwrap());
        assert_eq!(g.v(), &DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        assert_eq!(g.u(), &DMatrix::identity(2, 2));
    }

    #[test]
    fn patterns() {
        let p = measurement_pattern(&LatticeSpec::planar(2, 2, 0.0).unwrap());
        assert_eq!(p, MeasurementPattern { q_nodes: vec![3], p_nodes: vec![0], kept: vec![1, 2] });
        let p = measurement_pattern(&LatticeSpec::planar(3, 3, 0.0).unwrap());
        assert_eq!((p.p_nodes.len(), p.q_nodes.len(), p.kept.len()), (4, 1, 4));
        let p = measurement_pattern(&LatticeSpec::planar(1, 1, 0.0).unwrap());
        assert_eq!((p.p_nodes.len(), p.q_nodes.len(), p.kept.len()), (1, 0, 0));
    }

    #[test]
    fn ids_and_displacements() {
        let spec = LatticeSpec::torus(6, 8, 0.0).unwrap();
        for id in 0..spec.n_nodes() {
            assert_eq!(spec.node_id(spec.site(id)), id);
        }
        assert_eq!(spec.displacement(Site::new(1, 1), Site::new(6, 8)), (-1.0, -1.0));
        assert_eq!(spec.offset(Site::new(1, 1), -1, 0), Some(Site::new(6, 1)));
        let planar = LatticeSpec::planar(6, 8, 0.0).unwrap();
        assert_eq!(planar.offset(Site::new(1, 1), -1, 0), None);
        assert!("klein".parse::<Boundary>().is_err());
    }
}
