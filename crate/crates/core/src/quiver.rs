//! Quivers, Euler forms and the JSON input format.
//!
//! A quiver file is a JSON object
//! `{"vertices": ["a", "b"], "arrows": [["a", "b"], ["b", "b"]]}`.
//! Vertex order is the order of the `vertices` array; every vector and series
//! downstream is indexed by it.

use crate::error::{Error, Result};
use crate::symcore::DimVector;
use serde_json::{json, Value};
use std::collections::{BTreeSet, HashMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexKind {
    Real,
    Isotropic,
    /// At least two loops.
    Hyperbolic,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v.clone()) {
                return Err(Error::Quiver(format!("duplicate vertex id {v:?}")));
            }
        }
        for (k, &(s, t)) in arrows.iter().enumerate() {
            if s >= vertices.len() || t >= vertices.len() {
                return Err(Error::Quiver(format!("arrow #{k} references a vertex index out of range")));
            }
        }
        Ok(Quiver { vertices, arrows })
    }

    /// Builds a quiver from vertex names and named arrows.
    pub fn from_names(vertices: &[&str], arrows: &[(&str, &str)]) -> Result<Self> {
        let names: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let idx: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let mut arr = Vec::new();
        for (s, t) in arrows {
            let a = *idx.get(s).ok_or_else(|| Error::Quiver(format!("unknown vertex {s:?}")))?;
            let b = *idx.get(t).ok_or_else(|| Error::Quiver(format!("unknown vertex {t:?}")))?;
            arr.push((a, b));
        }
        Quiver::new(names, arr)
    }

    /// One vertex with `g` loops.
    pub fn loops(g: usize) -> Self {
        Quiver::new(vec!["0".into()], vec![(0, 0); g]).unwrap()
    }

    pub fn jordan() -> Self {
        Quiver::loops(1)
    }

    /// `0 -> 1`
    pub fn a2() -> Self {
        Quiver::from_names(&["0", "1"], &[("0", "1")]).unwrap()
    }

    pub fn kronecker() -> Self {
        Quiver::from_names(&["0", "1"], &[("0", "1"), ("0", "1")]).unwrap()
    }

    /// `0 -> 1 -> 0`
    pub fn cycle2() -> Self {
        Quiver::from_names(&["0", "1"], &[("0", "1"), ("1", "0")]).unwrap()
    }

    /// A loop at `0` and an edge `0 -> 1`.
    pub fn loop_plus_edge() -> Self {
        Quiver::from_names(&["0", "1"], &[("0", "0"), ("0", "1")]).unwrap()
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    /// Number of loops `g_i`.
    pub fn loop_count(&self, i: usize) -> usize {
        self.arrows.iter().filter(|&&(s, t)| s == i && t == i).count()
    }

    pub fn kind(&self, i: usize) -> VertexKind {
        match self.loop_count(i) {
            0 => VertexKind::Real,
            1 => VertexKind::Isotropic,
            _ => VertexKind::Hyperbolic,
        }
    }

    pub fn is_real(&self, i: usize) -> bool {
        self.loop_count(i) == 0
    }

    pub fn is_imaginary(&self, i: usize) -> bool {
        self.loop_count(i) >= 1
    }

    pub fn is_isotropic(&self, i: usize) -> bool {
        self.loop_count(i) == 1
    }

    pub fn has_loops(&self) -> bool {
        self.arrows.iter().any(|&(s, t)| s == t)
    }

    /// True when every oriented cycle is a product of loops.
    pub fn only_loop_cycles(&self) -> bool {
        // Kahn's algorithm on the loop-free part.
        let n = self.n();
        let mut indeg = vec![0usize; n];
        for &(s, t) in &self.arrows {
            if s != t {
                indeg[t] += 1;
            }
        }
        let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut done = 0;
        while let Some(i) = stack.pop() {
            done += 1;
            for &(s, t) in &self.arrows {
                if s == i && s != t {
                    indeg[t] -= 1;
                    if indeg[t] == 0 {
                        stack.push(t);
                    }
                }
            }
        }
        done == n
    }

    pub fn is_acyclic(&self) -> bool {
        !self.has_loops() && self.only_loop_cycles()
    }

    /// `<v,w> = v.w - sum over arrows of v_tail * w_head`.
    pub fn euler(&self, v: &[i64], w: &[i64]) -> i64 {
        assert_eq!(v.len(), self.n(), "vector arity mismatch");
        assert_eq!(w.len(), self.n(), "vector arity mismatch");
        let dot: i64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
        dot - self.arrows.iter().map(|&(s, t)| v[s] * w[t]).sum::<i64>()
    }

    pub fn sym(&self, v: &[i64], w: &[i64]) -> i64 {
        self.euler(v, w) + self.euler(w, v)
    }

    pub fn euler_form(&self, v: &DimVector, w: &DimVector) -> Result<i64> {
        self.check_dim(v)?;
        self.check_dim(w)?;
        Ok(self.euler(&as_i64(v), &as_i64(w)))
    }

    pub fn sym_form(&self, v: &DimVector, w: &DimVector) -> Result<i64> {
        self.check_dim(v)?;
        self.check_dim(w)?;
        Ok(self.sym(&as_i64(v), &as_i64(w)))
    }

    /// `<v,v>` for a dimension vector already known to have the right arity.
    pub fn euler_sq(&self, v: &DimVector) -> i64 {
        let a = as_i64(v);
        self.euler(&a, &a)
    }

    pub fn check_dim(&self, v: &DimVector) -> Result<()> {
        if v.len() != self.n() {
            return Err(Error::Quiver(format!(
                "dimension vector {v} has {} entries but the quiver has {} vertices",
                v.len(),
                self.n()
            )));
        }
        Ok(())
    }

    /// `sum over arrows h with head i of v_tail(h)`.
    pub fn inflow(&self, v: &[u32], i: usize) -> u32 {
        self.arrows.iter().filter(|&&(_, t)| t == i).map(|&(s, _)| v[s]).sum()
    }

    /// Full subquiver on the given vertex indices (kept in the quiver's order).
    pub fn subquiver(&self, j: &[usize]) -> Result<Quiver> {
        let mut keep: Vec<usize> = j.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&bad) = keep.iter().find(|&&i| i >= self.n()) {
            return Err(Error::Quiver(format!("vertex index {bad} is not in the quiver")));
        }
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let verts = keep.iter().map(|&i| self.vertices[i].clone()).collect();
        let arrows = self
            .arrows
            .iter()
            .filter_map(|&(s, t)| Some((*pos.get(&s)?, *pos.get(&t)?)))
            .collect();
        Quiver::new(verts, arrows)
    }

    pub fn subquiver_by_names(&self, names: &[&str]) -> Result<Quiver> {
        let idx: Result<Vec<usize>> = names
            .iter()
            .map(|n| self.vertex_index(n).ok_or_else(|| Error::Quiver(format!("vertex {n:?} is not in the quiver"))))
            .collect();
        self.subquiver(&idx?)
    }

    /// The opposite quiver.
    pub fn reverse_all_arrows(&self) -> Quiver {
        Quiver { vertices: self.vertices.clone(), arrows: self.arrows.iter().map(|&(s, t)| (t, s)).collect() }
    }

    /// Flips the direction of a single arrow.
    pub fn reverse_arrow(&self, k: usize) -> Quiver {
        let mut q = self.clone();
        let (s, t) = q.arrows[k];
        q.arrows[k] = (t, s);
        q
    }

    /// Parses the JSON quiver format.
    pub fn parse_json(text: &str) -> Result<Quiver> {
        let val: Value = serde_json::from_str(text)
            .map_err(|e| Error::Parse { line: e.line(), column: e.column(), msg: e.to_string() })?;
        let at = |needle: &str, msg: String| {
            let (line, column) = locate(text, needle);
            Error::Parse { line, column, msg }
        };
        let obj = val.as_object().ok_or_else(|| at("", "top level must be a JSON object".into()))?;
        for key in obj.keys() {
            if key != "vertices" && key != "arrows" {
                return Err(at(&format!("\"{key}\""), format!("unexpected field {key:?}")));
            }
        }
        let verts = obj
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| at("", "missing array field \"vertices\"".into()))?;
        let mut names = Vec::new();
        for v in verts {
            let s = v.as_str().ok_or_else(|| at("\"vertices\"", format!("vertex id {v} is not a string")))?;
            if names.iter().any(|n: &String| n == s) {
                return Err(at(&format!("\"{s}\""), format!("duplicate vertex id {s:?}")));
            }
            names.push(s.to_string());
        }
        let arrs = obj
            .get("arrows")
            .and_then(Value::as_array)
            .ok_or_else(|| at("", "missing array field \"arrows\"".into()))?;
        let arrows_at = text.find("\"arrows\"").unwrap_or(0);
        let mut arrows = Vec::new();
        for (k, a) in arrs.iter().enumerate() {
            let pair = a
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| at("\"arrows\"", format!("arrow #{k} must be a two-element array")))?;
            let mut ends = [0usize; 2];
            for (e, x) in pair.iter().enumerate() {
                let s = x.as_str().ok_or_else(|| at("\"arrows\"", format!("arrow #{k} endpoint {x} is not a string")))?;
                ends[e] = names.iter().position(|n| n == s).ok_or_else(|| {
                    let off = text[arrows_at..].find(&format!("\"{s}\"")).map(|o| o + arrows_at).unwrap_or(arrows_at);
                    let (line, column) = position_of(text, off);
                    Error::Parse { line, column, msg: format!("arrow #{k} references unknown vertex {s:?}") }
                })?;
            }
            arrows.push((ends[0], ends[1]));
        }
        Quiver::new(names, arrows)
    }

    /// Canonical JSON form.
    pub fn to_json(&self) -> Value {
        json!({
            "vertices": self.vertices,
            "arrows": self.arrows.iter().map(|&(s, t)| vec![self.vertices[s].clone(), self.vertices[t].clone()]).collect::<Vec<_>>(),
        })
    }
}

pub fn as_i64(v: &DimVector) -> Vec<i64> {
    v.0.iter().map(|&x| x as i64).collect()
}

fn locate(text: &str, needle: &str) -> (usize, usize) {
    let off = if needle.is_empty() { 0 } else { text.find(needle).unwrap_or(0) };
    position_of(text, off)
}

fn position_of(text: &str, off: usize) -> (usize, usize) {
    let before = &text[..off];
    let line = before.matches('\n').count() + 1;
    let column = off - before.rfind('\n').map(|p| p + 1).unwrap_or(0) + 1;
    (line, column)
}
