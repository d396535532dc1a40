//! JSON document types shared by the library surface and the CLI.

use crate::error::{Error, Result};
use crate::markov::{ThetaVector, TransitionMatrix, WeightedGraph};
use crate::matrix::Mat;
use serde::{Deserialize, Serialize};

/// Serializes an infinite f64 as the string "inf" (periodic chains have an
/// infinite relaxation time) and finite values as plain numbers.
pub mod inf_as_string {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &f64, ser: S) -> Result<S::Ok, S::Error> {
        if value.is_infinite() {
            ser.serialize_str("inf")
        } else {
            ser.serialize_f64(*value)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum NumOrInf {
            Num(f64),
            Text(String),
        }
        match NumOrInf::deserialize(de)? {
            NumOrInf::Num(v) => Ok(v),
            NumOrInf::Text(s) if s == "inf" => Ok(f64::INFINITY),
            NumOrInf::Text(s) => Err(D::Error::custom(format!("expected number or \"inf\", got {s:?}"))),
        }
    }
}

/// On-disk form of a chain, graph or theta vector:
/// `{"k": int, "kind": "transition"|"graph"|"theta", "data": [...]}`
/// with `data` row-major for the matrix kinds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub k: usize,
    pub kind: String,
    pub data: Vec<f64>,
}

impl MatrixDocument {
    pub fn from_transition(k: &TransitionMatrix) -> Self {
        MatrixDocument {
            k: k.k(),
            kind: "transition".into(),
            data: k.mat().data().to_vec(),
        }
    }

    pub fn from_graph(g: &WeightedGraph) -> Self {
        MatrixDocument { k: g.k(), kind: "graph".into(), data: g.mat().data().to_vec() }
    }

    pub fn from_theta(t: &ThetaVector) -> Self {
        MatrixDocument { k: t.k(), kind: "theta".into(), data: t.as_slice().to_vec() }
    }

    pub fn to_transition(&self) -> Result<TransitionMatrix> {
        self.expect_kind("transition")?;
        self.expect_len(self.k * self.k)?;
        TransitionMatrix::new(Mat::from_vec(self.k, self.data.clone()))
    }

    pub fn to_graph(&self) -> Result<WeightedGraph> {
        self.expect_kind("graph")?;
        self.expect_len(self.k * self.k)?;
        WeightedGraph::new(Mat::from_vec(self.k, self.data.clone()))
    }

    pub fn to_theta(&self) -> Result<ThetaVector> {
        self.expect_kind("theta")?;
        self.expect_len(self.k * (self.k - 1) / 2)?;
        ThetaVector::new(self.k, self.data.clone())
    }

    fn expect_kind(&self, kind: &str) -> Result<()> {
        if self.kind != kind {
            return Err(Error::Invalid(format!("expected kind {kind:?}, got {:?}", self.kind)));
        }
        Ok(())
    }

    fn expect_len(&self, len: usize) -> Result<()> {
        if self.data.len() != len {
            return Err(Error::Invalid(format!(
                "expected {len} data entries for k={}, got {}",
                self.k,
                self.data.len()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::SpectralSummary;

    #[test]
    fn matrix_document_round_trip() {
        let k = TransitionMatrix::from_rows(&[vec![0.9, 0.1], vec![0.2, 0.8]]).unwrap();
        let doc = MatrixDocument::from_transition(&k);
        let json = serde_json::to_string(&doc).unwrap();
        let back: MatrixDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_transition().unwrap().mat(), k.mat());
    }

    #[test]
    fn tau_rel_serializes_inf_as_string() {
        let s = SpectralSummary {
            eigenvalues: vec![1.0, -1.0],
            gamma: 2.0,
            gamma_star: 0.0,
            tau_rel: f64::INFINITY,
        };
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("\"tau_rel\":\"inf\""), "{json}");
        let back: SpectralSummary = serde_json::from_str(&json).unwrap();
        assert!(back.tau_rel.is_infinite());
    }
}
