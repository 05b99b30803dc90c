//! Simplicial sets presented by nondegenerate generators and a face table
//! in Eilenberg-Zilber normal form, plus a generic constructor from any
//! finite levelwise description.

use std::collections::BTreeMap;

use serde::Serialize;

use super::simplex::{degeneracy_words, Simp};
use crate::error::{Error, Result};

/// Finite levelwise description of a simplicial set: explicit elements per
/// level with face and degeneracy maps. `build_sset` turns this into the
/// generator/face-table presentation.
pub trait SimplicialData {
    type Elem: Clone + Ord + std::fmt::Debug;
    fn elements(&self, level: usize) -> Vec<Self::Elem>;
    fn face(&self, level: usize, e: &Self::Elem, i: usize) -> Self::Elem;
    fn degeneracy(&self, level: usize, e: &Self::Elem, i: usize) -> Self::Elem;
    fn label(&self, level: usize, e: &Self::Elem) -> String;
}

#[derive(Debug, Clone, Serialize)]
pub struct SSet {
    /// generators[n] = labels of nondegenerate n-simplices.
    pub generators: Vec<Vec<String>>,
    /// faces[n][idx][i] = ∂_i of generator idx in degree n (n >= 1).
    pub faces: Vec<Vec<Vec<Simp>>>,
    pub degree_bound: usize,
}

impl SSet {
    pub fn generator_count(&self, degree: usize) -> usize {
        self.generators.get(degree).map_or(0, |g| g.len())
    }

    pub fn generator_label(&self, degree: usize, idx: usize) -> &str {
        &self.generators[degree][idx]
    }

    pub fn generator_index(&self, degree: usize, label: &str) -> Option<usize> {
        self.generators.get(degree)?.iter().position(|l| l == label)
    }

    /// Face of an arbitrary simplex by simplicial-identity rewriting.
    pub fn face(&self, s: &Simp, i: usize) -> Simp {
        debug_assert!(s.degree() >= 1 && i <= s.degree());
        if s.word.is_empty() {
            return self.faces[s.gen_degree][s.gen_index][i].clone();
        }
        let j = s.word[0];
        let rest = Simp {
            word: s.word[1..].to_vec(),
            gen_degree: s.gen_degree,
            gen_index: s.gen_index,
        };
        if i < j {
            self.face(&rest, i).degeneracy(j - 1)
        } else if i == j || i == j + 1 {
            rest
        } else {
            self.face(&rest, i - 1).degeneracy(j)
        }
    }

    /// All simplices of one degree, degenerate included, in canonical order.
    pub fn simplices(&self, degree: usize) -> Vec<Simp> {
        let mut out = Vec::new();
        for q in 0..=degree {
            for idx in 0..self.generator_count(q) {
                for word in degeneracy_words(q, degree - q) {
                    out.push(Simp {
                        word,
                        gen_degree: q,
                        gen_index: idx,
                    });
                }
            }
        }
        out
    }

    pub fn display(&self, s: &Simp) -> String {
        let mut prefix = String::new();
        for w in &s.word {
            prefix.push_str(&format!("s{w}"));
        }
        let core = self.generator_label(s.gen_degree, s.gen_index);
        if prefix.is_empty() {
            core.to_string()
        } else {
            format!("{prefix}·{core}")
        }
    }

    /// Total number of simplices (including degenerate) in one degree.
    pub fn level_size(&self, degree: usize) -> usize {
        self.simplices(degree).len()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check the simplicial identities on every representable simplex.
///
/// Face/degeneracy interchange is definitional for the normal-form
/// representation, so the content here is ∂i∂j = ∂{j-1}∂i (i < j) on all
/// simplices, plus well-formedness of the face table.
pub fn validate_simplicial_set(s: &SSet) -> ValidationReport {
    let mut failures = Vec::new();
    let mut checked = 0usize;

    for n in 1..=s.degree_bound {
        for (idx, fs) in s.faces.get(n).map_or(&[][..], |v| v.as_slice()).iter().enumerate() {
            if fs.len() != n + 1 {
                failures.push(format!(
                    "generator {} in degree {n} has {} faces, expected {}",
                    s.generator_label(n, idx),
                    fs.len(),
                    n + 1
                ));
                continue;
            }
            for (i, f) in fs.iter().enumerate() {
                checked += 1;
                if f.degree() != n - 1 {
                    failures.push(format!(
                        "∂{i} of {} has degree {}, expected {}",
                        s.generator_label(n, idx),
                        f.degree(),
                        n - 1
                    ));
                }
            }
        }
    }

    for n in 2..=s.degree_bound {
        for simp in s.simplices(n) {
            for j in 1..=n {
                for i in 0..j {
                    checked += 1;
                    let lhs = s.face(&s.face(&simp, j), i);
                    let rhs = s.face(&s.face(&simp, i), j - 1);
                    if lhs != rhs {
                        failures.push(format!(
                            "∂{i}∂{j} ≠ ∂{}∂{i} at {} (degree {n}): {} vs {}",
                            j - 1,
                            s.display(&simp),
                            s.display(&lhs),
                            s.display(&rhs)
                        ));
                    }
                }
            }
        }
    }
    ValidationReport { checked, failures }
}

/// Express an arbitrary element of levelwise data as word + generator,
/// given the per-level nondegenerate index maps.
pub fn normal_form_elem<D: SimplicialData>(
    data: &D,
    index: &[BTreeMap<D::Elem, usize>],
    n: usize,
    e: &D::Elem,
) -> Result<Simp> {
    for j in 0..n {
        let f = data.face(n, e, j);
        if data.degeneracy(n - 1, &f, j) == *e {
            return Ok(normal_form_elem(data, index, n - 1, &f)?.degeneracy(j));
        }
    }
    let idx = index[n]
        .get(e)
        .copied()
        .ok_or_else(|| Error::Internal(format!("element {e:?} missing from level {n}")))?;
    Ok(Simp::generator(n, idx))
}

/// Build the generator/face-table presentation from levelwise data.
/// Returns the simplicial set together with the nondegenerate elements
/// per level (parallel to the generator order) for metadata lookups.
pub fn build_sset<D: SimplicialData>(data: &D, bound: usize) -> Result<(SSet, Vec<Vec<D::Elem>>)> {
    let (s, nondeg, _) = build_sset_indexed(data, bound)?;
    Ok((s, nondeg))
}

/// As `build_sset`, also returning the per-level element→index maps so
/// callers can normalize further elements on their own.
pub fn build_sset_indexed<D: SimplicialData>(
    data: &D,
    bound: usize,
) -> Result<(SSet, Vec<Vec<D::Elem>>, Vec<BTreeMap<D::Elem, usize>>)> {
    let mut nondeg: Vec<Vec<D::Elem>> = Vec::with_capacity(bound + 1);
    let mut index: Vec<BTreeMap<D::Elem, usize>> = Vec::with_capacity(bound + 1);
    for n in 0..=bound {
        let elems = data.elements(n);
        let mut level = Vec::new();
        let mut imap = BTreeMap::new();
        for e in elems {
            let degenerate = (0..n).any(|j| {
                let f = data.face(n, &e, j);
                data.degeneracy(n - 1, &f, j) == e
            });
            if !degenerate {
                imap.insert(e.clone(), level.len());
                level.push(e);
            }
        }
        nondeg.push(level);
        index.push(imap);
    }

    let mut generators = Vec::with_capacity(bound + 1);
    let mut faces = Vec::with_capacity(bound + 1);
    for n in 0..=bound {
        let labels: Vec<String> = nondeg[n].iter().map(|e| data.label(n, e)).collect();
        let mut seen = std::collections::BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.clone()) {
                return Err(Error::Invalid(format!(
                    "duplicate simplex label `{l}` in degree {n}"
                )));
            }
        }
        generators.push(labels);
        let mut level_faces = Vec::with_capacity(nondeg[n].len());
        if n >= 1 {
            for e in &nondeg[n] {
                let mut fs = Vec::with_capacity(n + 1);
                for i in 0..=n {
                    let f = data.face(n, e, i);
                    fs.push(normal_form_elem(data, &index, n - 1, &f)?);
                }
                level_faces.push(fs);
            }
        }
        faces.push(level_faces);
    }
    Ok((
        SSet {
            generators,
            faces,
            degree_bound: bound,
        },
        nondeg,
        index,
    ))
}

/// The standard simplex Δ^d as levelwise data: simplices are weakly
/// increasing vertex tuples.
pub struct StandardSimplex {
    pub dim: usize,
}

impl SimplicialData for StandardSimplex {
    type Elem = Vec<usize>;

    fn elements(&self, level: usize) -> Vec<Vec<usize>> {
        // All weakly increasing (level+1)-tuples from 0..=dim.
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(dim: usize, len: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == len {
                out.push(cur.clone());
                return;
            }
            for v in start..=dim {
                cur.push(v);
                rec(dim, len, v, cur, out);
                cur.pop();
            }
        }
        rec(self.dim, level + 1, 0, &mut cur, &mut out);
        out
    }

    fn face(&self, _level: usize, e: &Vec<usize>, i: usize) -> Vec<usize> {
        let mut f = e.clone();
        f.remove(i);
        f
    }

    fn degeneracy(&self, _level: usize, e: &Vec<usize>, i: usize) -> Vec<usize> {
        let mut f = e.clone();
        f.insert(i, e[i]);
        f
    }

    fn label(&self, _level: usize, e: &Vec<usize>) -> String {
        let parts: Vec<String> = e.iter().map(|v| v.to_string()).collect();
        format!("[{}]", parts.join(""))
    }
}

/// Δ^d built up to the given degree bound.
pub fn standard_simplex(dim: usize, bound: usize) -> Result<SSet> {
    Ok(build_sset(&StandardSimplex { dim }, bound)?.0)
}

/// The minimal circle: one vertex, one nondegenerate 1-simplex whose both
/// faces are the vertex.
pub struct MinimalCircle;

/// Elements at level n: canonical simplex forms (word, gen_degree 0 or 1).
impl SimplicialData for MinimalCircle {
    type Elem = Simp;

    fn elements(&self, level: usize) -> Vec<Simp> {
        let mut out = Vec::new();
        for q in 0..=level.min(1) {
            for word in degeneracy_words(q, level - q) {
                out.push(Simp {
                    word,
                    gen_degree: q,
                    gen_index: 0,
                });
            }
        }
        out
    }

    fn face(&self, _level: usize, e: &Simp, i: usize) -> Simp {
        if e.word.is_empty() {
            // ∂_i of the 1-cell is the vertex; ∂ of the vertex never occurs.
            debug_assert!(e.gen_degree == 1);
            return Simp::generator(0, 0);
        }
        let j = e.word[0];
        let rest = Simp {
            word: e.word[1..].to_vec(),
            gen_degree: e.gen_degree,
            gen_index: e.gen_index,
        };
        if i < j {
            self.face(e.degree() - 1, &rest, i).degeneracy(j - 1)
        } else if i == j || i == j + 1 {
            rest
        } else {
            self.face(e.degree() - 1, &rest, i - 1).degeneracy(j)
        }
    }

    fn degeneracy(&self, _level: usize, e: &Simp, i: usize) -> Simp {
        e.degeneracy(i)
    }

    fn label(&self, _level: usize, e: &Simp) -> String {
        if e.gen_degree == 0 {
            "v".to_string()
        } else {
            "σ".to_string()
        }
    }
}

pub fn minimal_circle(bound: usize) -> Result<SSet> {
    Ok(build_sset(&MinimalCircle, bound)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta1_passes() {
        let s = standard_simplex(1, 4).unwrap();
        assert_eq!(s.generator_count(0), 2);
        assert_eq!(s.generator_count(1), 1);
        assert_eq!(s.generator_count(2), 0);
        assert!(validate_simplicial_set(&s).pass());
    }

    #[test]
    fn delta2_level_sizes() {
        let s = standard_simplex(2, 4).unwrap();
        assert_eq!(s.generator_count(0), 3);
        assert_eq!(s.generator_count(1), 3);
        assert_eq!(s.generator_count(2), 1);
        // level sizes count degenerates: Δ² has C(3+n, n+1)... spot check
        // degree 1: 3 nondegenerate edges + 3 degenerate vertices = 6.
        assert_eq!(s.level_size(1), 6);
        assert!(validate_simplicial_set(&s).pass());
    }

    #[test]
    fn minimal_circle_passes() {
        let s = minimal_circle(6).unwrap();
        assert_eq!(s.generator_count(0), 1);
        assert_eq!(s.generator_count(1), 1);
        assert_eq!(s.generator_count(2), 0);
        assert!(validate_simplicial_set(&s).pass());
    }

    #[test]
    fn corrupted_face_table_detected() {
        let mut s = standard_simplex(2, 3).unwrap();
        // Point ∂0 of the triangle at the wrong edge.
        s.faces[2][0][0] = s.faces[2][0][2].clone();
        assert!(!validate_simplicial_set(&s).pass());
    }
}
