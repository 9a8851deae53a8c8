//! Complete regular dessins as rotation systems on the edge set `G`.
//!
//! Edges are the group elements, indexed by normal form. Black vertices are the
//! cosets `g<alpha>` and white vertices the cosets `g<beta>`; right
//! multiplication by `alpha` (resp. `beta`) rotates the edges around them.
//! Faces are the cycles of `g ↦ g·alpha·beta`.

use serde::{Deserialize, Serialize};

use crate::bicyclic::BicyclicPair;
use crate::error::{Error, Result};
use crate::group::{Element, Group, GroupSpec};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dessin {
    spec: GroupSpec,
    pair: BicyclicPair,
    edges: Vec<Element>,
    rot_black: Vec<usize>,
    rot_white: Vec<usize>,
    black_of: Vec<usize>,
    white_of: Vec<usize>,
    black_count: usize,
    white_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DessinSummary {
    /// `(|alpha|, |beta|, |alpha beta|)`.
    #[serde(rename = "type")]
    pub dessin_type: (u64, u64, u64),
    pub black_vertices: u64,
    pub white_vertices: u64,
    pub edges: u64,
    pub faces: u64,
    pub genus: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub symmetric: Option<bool>,
}

/// On-disk form. `adjacency` is optional and only written on request.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DessinFile {
    pub version: u32,
    pub spec: GroupSpec,
    pub alpha: Element,
    pub beta: Element,
    pub rot_black: Vec<usize>,
    pub rot_white: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub adjacency: Option<Adjacency>,
}

/// Cyclic edge orders around each vertex, each starting at its least edge index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Adjacency {
    pub black: Vec<Vec<usize>>,
    pub white: Vec<Vec<usize>>,
    pub faces: Vec<Vec<usize>>,
}

fn falsified<T>(msg: String) -> Result<T> {
    Err(Error::Falsified(msg))
}

/// Cycle ids and cycle lengths of a permutation, ids in order of least element.
fn cycle_labels(perm: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut label = vec![usize::MAX; perm.len()];
    let mut lengths = Vec::new();
    for start in 0..perm.len() {
        if label[start] != usize::MAX {
            continue;
        }
        let id = lengths.len();
        let mut k = start;
        let mut len = 0;
        while label[k] == usize::MAX {
            label[k] = id;
            k = perm[k];
            len += 1;
        }
        lengths.push(len);
    }
    (label, lengths)
}

fn cycles(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            cycle.push(k);
            k = perm[k];
        }
        out.push(cycle);
    }
    out
}

/// Checks `G = <alpha><beta>` with trivial intersection, for any orders.
fn check_exact_factorisation(group: &Group, pair: &BicyclicPair) -> Result<()> {
    if !group.contains(&pair.alpha) || !group.contains(&pair.beta) {
        return Err(Error::InvalidParameters("pair is not in the group".into()));
    }
    let sa = group.closure_indices(&[pair.alpha]);
    let sb = group.closure_indices(&[pair.beta]);
    let shared = sa.iter().filter(|k| sb.binary_search(k).is_ok()).count();
    if shared != 1 || (sa.len() * sb.len()) as u64 != group.order() {
        return Err(Error::InvalidParameters(format!(
            "({}, {}) is not an exact bicyclic pair of {}",
            pair.alpha,
            pair.beta,
            group.spec()
        )));
    }
    Ok(())
}

pub fn build_dessin(group: &Group, pair: &BicyclicPair) -> Result<Dessin> {
    check_exact_factorisation(group, pair)?;
    let edges: Vec<Element> = group.elements().collect();
    let rot_black: Vec<usize> = edges
        .iter()
        .map(|g| group.index_of(&group.multiply(g, &pair.alpha)))
        .collect();
    let rot_white: Vec<usize> = edges
        .iter()
        .map(|g| group.index_of(&group.multiply(g, &pair.beta)))
        .collect();
    let d = Dessin::from_parts(*group.spec(), *pair, edges, rot_black, rot_white)?;
    let (oa, ob) = (group.element_order(&pair.alpha), group.element_order(&pair.beta));
    if d.black_count as u64 * oa != group.order() || d.white_count as u64 * ob != group.order() {
        return falsified("vertex valencies differ from the generator orders".into());
    }
    Ok(d)
}

impl Dessin {
    fn from_parts(
        spec: GroupSpec,
        pair: BicyclicPair,
        edges: Vec<Element>,
        rot_black: Vec<usize>,
        rot_white: Vec<usize>,
    ) -> Result<Self> {
        let n = edges.len();
        for perm in [&rot_black, &rot_white] {
            let mut hit = vec![false; n];
            for &k in perm.iter() {
                if k >= n || std::mem::replace(&mut hit[k], true) {
                    return Err(Error::InvalidParameters("rotation is not a permutation".into()));
                }
            }
        }
        let (black_of, black_lens) = cycle_labels(&rot_black);
        let (white_of, white_lens) = cycle_labels(&rot_white);
        if black_lens.windows(2).any(|w| w[0] != w[1]) || white_lens.windows(2).any(|w| w[0] != w[1])
        {
            return falsified("vertex cycles have unequal lengths".into());
        }
        let (black_count, white_count) = (black_lens.len(), white_lens.len());
        // complete bipartite: every (black, white) pair shares exactly one edge
        if black_count * white_count != n {
            return falsified(format!(
                "{black_count} x {white_count} vertices cannot meet in {n} edges once each"
            ));
        }
        let mut met = vec![false; n];
        for k in 0..n {
            let slot = black_of[k] * white_count + white_of[k];
            if std::mem::replace(&mut met[slot], true) {
                return falsified("a black and a white vertex share two edges".into());
            }
        }
        Ok(Dessin {
            spec,
            pair,
            edges,
            rot_black,
            rot_white,
            black_of,
            white_of,
            black_count,
            white_count,
        })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn pair(&self) -> &BicyclicPair {
        &self.pair
    }

    pub fn edges(&self) -> &[Element] {
        &self.edges
    }

    pub fn rot_black(&self) -> &[usize] {
        &self.rot_black
    }

    pub fn rot_white(&self) -> &[usize] {
        &self.rot_white
    }

    /// Black vertex containing each edge.
    pub fn black_vertex_of(&self) -> &[usize] {
        &self.black_of
    }

    pub fn white_vertex_of(&self) -> &[usize] {
        &self.white_of
    }

    pub fn black_count(&self) -> usize {
        self.black_count
    }

    pub fn white_count(&self) -> usize {
        self.white_count
    }

    /// `g ↦ g·alpha·beta` as a permutation of edge indices.
    pub fn face_permutation(&self) -> Vec<usize> {
        self.rot_black.iter().map(|&k| self.rot_white[k]).collect()
    }

    pub fn faces(&self) -> Vec<Vec<usize>> {
        cycles(&self.face_permutation())
    }

    pub fn summarize(&self) -> Result<DessinSummary> {
        let faces = self.faces();
        let face_len = faces[0].len();
        if faces.iter().any(|c| c.len() != face_len) {
            return falsified("faces have unequal lengths".into());
        }
        let v = (self.black_count + self.white_count) as i64;
        let e = self.edges.len() as i64;
        let f = faces.len() as i64;
        let twice_genus = 2 - v + e - f;
        if twice_genus < 0 || twice_genus % 2 != 0 {
            return falsified(format!("Euler characteristic {} gives no genus", v - e + f));
        }
        let n = self.edges.len() as u64;
        Ok(DessinSummary {
            dessin_type: (
                n / self.black_count as u64,
                n / self.white_count as u64,
                face_len as u64,
            ),
            black_vertices: self.black_count as u64,
            white_vertices: self.white_count as u64,
            edges: n,
            faces: f as u64,
            genus: (twice_genus / 2) as u64,
            symmetric: None,
        })
    }

    /// Colours swapped: the dessin of `(beta, alpha)`.
    pub fn reciprocal(&self) -> Dessin {
        let mut d = self.clone();
        std::mem::swap(&mut d.rot_black, &mut d.rot_white);
        std::mem::swap(&mut d.black_of, &mut d.white_of);
        std::mem::swap(&mut d.black_count, &mut d.white_count);
        d.pair = self.pair.swapped();
        d
    }

    pub fn adjacency(&self) -> Adjacency {
        Adjacency {
            black: cycles(&self.rot_black),
            white: cycles(&self.rot_white),
            faces: self.faces(),
        }
    }

    pub fn to_file(&self, with_adjacency: bool) -> DessinFile {
        DessinFile {
            version: FORMAT_VERSION,
            spec: self.spec,
            alpha: self.pair.alpha,
            beta: self.pair.beta,
            rot_black: self.rot_black.clone(),
            rot_white: self.rot_white.clone(),
            adjacency: with_adjacency.then(|| self.adjacency()),
        }
    }

    /// Rebuilds from a file, re-deriving the rotations and rejecting any mismatch.
    pub fn from_file(file: &DessinFile) -> Result<Dessin> {
        if file.version != FORMAT_VERSION {
            return Err(Error::InvalidParameters(format!(
                "unsupported dessin format version {}",
                file.version
            )));
        }
        let group = Group::new(file.spec);
        let d = build_dessin(&group, &BicyclicPair::new(file.alpha, file.beta))?;
        if d.rot_black != file.rot_black || d.rot_white != file.rot_white {
            return Err(Error::InvalidParameters(
                "rotations do not match the stored pair".into(),
            ));
        }
        Ok(d)
    }
}

/// Expected genus `(p^d - 1)(p^e - 2)/2` of a `(p^d, p^e, p^e)` dessin.
pub fn genus_formula(p: u64, d: u32, e: u32) -> u64 {
    let (m, n) = (p.pow(d), p.pow(e) as i64);
    // n - 2 is only negative for e = 0, where m - 1 = 0
    ((m as i64 - 1) * (n - 2) / 2) as u64
}
