use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::GaussGraph;
use crate::{Error, Result};

/// On-disk form of a Z-graph. Matrices are dense and row-major; `v` is
/// `null` for purely imaginary graphs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub version: u32,
    pub n_modes: usize,
    pub ordering: String,
    pub kappa: f64,
    pub v: Option<Vec<f64>>,
    pub u: Vec<f64>,
}

fn row_major(m: &DMatrix<f64>) -> Vec<f64> {
    m.transpose().as_slice().to_vec()
}

impl StateRecord {
    pub const VERSION: u32 = 1;

    pub fn from_graph(g: &GaussGraph, kappa: f64) -> Self {
        Self {
            version: Self::VERSION,
            n_modes: g.n_modes(),
            ordering: "qqpp".into(),
            kappa,
            v: if g.is_imaginary() { None } else { Some(row_major(g.v())) },
            u: row_major(g.u()),
        }
    }

    pub fn to_graph(&self) -> Result<GaussGraph> {
        if self.version != Self::VERSION {
            return Err(Error::Serialization(format!("unsupported version {}", self.version)));
        }
        if self.ordering != "qqpp" {
            return Err(Error::Serialization(format!("unsupported ordering {:?}", self.ordering)));
        }
        let n = self.n_modes;
        let check = |len: usize, what: &str| {
            if len != n * n {
                Err(Error::Serialization(format!("{what} has {len} entries, expected {}", n * n)))
            } else {
                Ok(())
            }
        };
        check(self.u.len(), "u")?;
        let u = DMatrix::from_row_slice(n, n, &self.u);
        let v = match &self.v {
            Some(v) => {
                check(v.len(), "v")?;
                DMatrix::from_row_slice(n, n, v)
            }
            None => DMatrix::zeros(n, n),
        };
        GaussGraph::new(v, u)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let v = DMatrix::from_row_slice(2, 2, &[0.1, 1.0 / 3.0, 1.0 / 3.0, 0.0]);
        let u = DMatrix::from_row_slice(2, 2, &[std::f64::consts::E, 0.2, 0.2, 1e-1]);
        let g = GaussGraph::new(v, u).unwrap();
        let text = StateRecord::from_graph(&g, 1.0).to_json().unwrap();
        assert!(text.contains("\"ordering\":\"qqpp\""));
        let back = StateRecord::from_json(&text).unwrap().to_graph().unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn imaginary_graph_has_null_v() {
        let g = GaussGraph::imaginary(DMatrix::identity(2, 2)).unwrap();
        let rec = StateRecord::from_graph(&g, 2.0);
        assert!(rec.v.is_none());
        assert!(rec.to_json().unwrap().contains("\"v\":null"));
        assert_eq!(rec.to_graph().unwrap(), g);
    }

    #[test]
    fn malformed_records_rejected() {
        let mut rec = StateRecord::from_graph(&GaussGraph::imaginary(DMatrix::identity(2, 2)).unwrap(), 1.0);
        rec.u.pop();
        assert!(matches!(rec.to_graph(), Err(Error::Serialization(_))));
    }
}
