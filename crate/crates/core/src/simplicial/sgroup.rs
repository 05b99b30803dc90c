//! Simplicial groups with finite levels: a finite group per degree and
//! structure maps that are homomorphisms satisfying the simplicial
//! identities. The trivially simplicial case (every level the same group,
//! every map the identity) is the one classification works with.

use serde::{Deserialize, Serialize};

use super::simplex::Simp;
use super::sset::{build_sset, SSet, SimplicialData};
use crate::catnerve::group::FiniteGroup;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimplicialGroup {
    /// levels[n] = the group K_n, for n = 0..=bound.
    pub levels: Vec<FiniteGroup>,
    /// face_maps[n][i] : K_n → K_{n-1} as an index table (n >= 1, 0 <= i <= n).
    pub face_maps: Vec<Vec<Vec<usize>>>,
    /// degeneracy_maps[n][i] : K_n → K_{n+1} (n <= bound-1, 0 <= i <= n).
    pub degeneracy_maps: Vec<Vec<Vec<usize>>>,
    pub trivially_simplicial: bool,
    pub bound: usize,
}

/// Index of a group element within its level's group.
pub type LevelElem = usize;

impl SimplicialGroup {
    /// The trivially simplicial group on G: every level G, every map Id.
    pub fn trivial(g: &FiniteGroup, bound: usize) -> Self {
        let ident: Vec<usize> = (0..g.order()).collect();
        let mut face_maps = vec![Vec::new()];
        let mut degeneracy_maps = Vec::new();
        for n in 1..=bound {
            face_maps.push(vec![ident.clone(); n + 1]);
        }
        for n in 0..bound {
            degeneracy_maps.push(vec![ident.clone(); n + 1]);
        }
        SimplicialGroup {
            levels: vec![g.clone(); bound + 1],
            face_maps,
            degeneracy_maps,
            trivially_simplicial: true,
            bound,
        }
    }

    /// Validate: all structure maps are homomorphisms preserving identity,
    /// and the simplicial identities hold levelwise.
    pub fn validate(&self) -> Result<()> {
        if self.levels.len() != self.bound + 1 {
            return Err(Error::Invalid("levels do not match bound".into()));
        }
        let hom_check = |name: &str, table: &Vec<usize>, src: &FiniteGroup, tgt: &FiniteGroup| -> Result<()> {
            if table.len() != src.order() {
                return Err(Error::Invalid(format!("{name}: table size mismatch")));
            }
            if table[src.identity] != tgt.identity {
                return Err(Error::Invalid(format!("{name}: identity not preserved")));
            }
            for a in 0..src.order() {
                for b in 0..src.order() {
                    if table[src.mul(a, b)] != tgt.mul(table[a], table[b]) {
                        return Err(Error::Invalid(format!(
                            "{name}: not a homomorphism at ({}, {})",
                            src.label(a),
                            src.label(b)
                        )));
                    }
                }
            }
            Ok(())
        };
        for n in 1..=self.bound {
            if self.face_maps[n].len() != n + 1 {
                return Err(Error::Invalid(format!("face maps at level {n} incomplete")));
            }
            for (i, t) in self.face_maps[n].iter().enumerate() {
                hom_check(&format!("∂{i} on K_{n}"), t, &self.levels[n], &self.levels[n - 1])?;
            }
        }
        for n in 0..self.bound {
            if self.degeneracy_maps[n].len() != n + 1 {
                return Err(Error::Invalid(format!("degeneracy maps at level {n} incomplete")));
            }
            for (i, t) in self.degeneracy_maps[n].iter().enumerate() {
                hom_check(&format!("s{i} on K_{n}"), t, &self.levels[n], &self.levels[n + 1])?;
            }
        }
        // Simplicial identities elementwise.
        for n in 2..=self.bound {
            for x in 0..self.levels[n].order() {
                for j in 1..=n {
                    for i in 0..j {
                        let lhs = self.face_maps[n - 1][i][self.face_maps[n][j][x]];
                        let rhs = self.face_maps[n - 1][j - 1][self.face_maps[n][i][x]];
                        if lhs != rhs {
                            return Err(Error::identity(
                                "∂i∂j = ∂{j-1}∂i",
                                n as i64,
                                self.levels[n].label(x),
                                "simplicial group face identity",
                            ));
                        }
                    }
                }
            }
        }
        for n in 0..self.bound {
            for x in 0..self.levels[n].order() {
                for i in 0..=n {
                    for j in i..=n {
                        // s_i s_j = s_{j+1} s_i
                        if n + 2 <= self.bound {
                            let lhs = self.degeneracy_maps[n + 1][i][self.degeneracy_maps[n][j][x]];
                            let rhs =
                                self.degeneracy_maps[n + 1][j + 1][self.degeneracy_maps[n][i][x]];
                            if lhs != rhs {
                                return Err(Error::identity(
                                    "s_i s_j = s_{j+1} s_i",
                                    n as i64,
                                    self.levels[n].label(x),
                                    "simplicial group degeneracy identity",
                                ));
                            }
                        }
                    }
                    // ∂_i s_j relations (i < j and i > j+1 force n >= 1, so
                    // the level-(n-1) lookups below are in range).
                    for j in 0..=n {
                        let sj = self.degeneracy_maps[n][j][x];
                        for i in 0..=(n + 1) {
                            let got = self.face_maps[n + 1][i][sj];
                            let expect = if i == j || i == j + 1 {
                                x
                            } else if i < j {
                                self.degeneracy_maps[n - 1][j - 1][self.face_maps[n][i][x]]
                            } else {
                                self.degeneracy_maps[n - 1][j][self.face_maps[n][i - 1][x]]
                            };
                            if got != expect {
                                return Err(Error::identity(
                                    "∂_i s_j interchange",
                                    n as i64,
                                    self.levels[n].label(x),
                                    &format!("fails at i={i}, j={j}"),
                                ));
                            }
                        }
                    }
                }
            }
        }
        if self.trivially_simplicial {
            for n in 0..=self.bound {
                if self.levels[n] != self.levels[0] {
                    return Err(Error::Invalid(
                        "trivially simplicial flag set but levels differ".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn level(&self, n: usize) -> &FiniteGroup {
        &self.levels[n]
    }

    pub fn face(&self, n: usize, i: usize, x: usize) -> usize {
        self.face_maps[n][i][x]
    }

    pub fn degeneracy(&self, n: usize, i: usize, x: usize) -> usize {
        self.degeneracy_maps[n][i][x]
    }

    pub fn identity_at(&self, n: usize) -> usize {
        self.levels[n].identity
    }

    /// The underlying simplicial set, with labels `lvl:element` for
    /// nondegenerate simplices.
    pub fn underlying_sset(&self) -> Result<(SSet, Vec<Vec<LevelElem>>)> {
        build_sset(&SGroupData { k: self }, self.bound)
    }
}

struct SGroupData<'a> {
    k: &'a SimplicialGroup,
}

impl SimplicialData for SGroupData<'_> {
    type Elem = usize; // element index at the level

    fn elements(&self, level: usize) -> Vec<usize> {
        (0..self.k.levels[level].order()).collect()
    }

    fn face(&self, level: usize, e: &usize, i: usize) -> usize {
        self.k.face(level, i, *e)
    }

    fn degeneracy(&self, level: usize, e: &usize, i: usize) -> usize {
        self.k.degeneracy(level, i, *e)
    }

    fn label(&self, level: usize, e: &usize) -> String {
        if self.k.trivially_simplicial {
            self.k.levels[level].label(*e).to_string()
        } else {
            format!("{}@{}", self.k.levels[level].label(*e), level)
        }
    }
}

/// Resolve an arbitrary simplex of the underlying simplicial set of K back
/// to its group element at the simplex's level.
pub fn sgroup_elem_of_simp(
    k: &SimplicialGroup,
    nondeg: &[Vec<LevelElem>],
    s: &Simp,
) -> usize {
    let mut x = nondeg[s.gen_degree][s.gen_index];
    let mut lvl = s.gen_degree;
    for &i in s.word.iter().rev() {
        x = k.degeneracy(lvl, i, x);
        lvl += 1;
    }
    x
}

/// A simplicial group together with its underlying simplicial set and the
/// translation between group elements and canonical simplices.
#[derive(Debug, Clone)]
pub struct SGroupSSet {
    pub group: SimplicialGroup,
    pub sset: SSet,
    pub nondeg: Vec<Vec<LevelElem>>,
}

impl SGroupSSet {
    pub fn new(group: SimplicialGroup) -> Result<Self> {
        group.validate()?;
        let (sset, nondeg) = group.underlying_sset()?;
        Ok(SGroupSSet {
            group,
            sset,
            nondeg,
        })
    }

    pub fn elem_of_simp(&self, s: &Simp) -> usize {
        sgroup_elem_of_simp(&self.group, &self.nondeg, s)
    }

    /// Canonical simplex of a group element at a level: strip degeneracies
    /// until the element is nondegenerate there.
    pub fn simp_of_elem(&self, level: usize, x: usize) -> Simp {
        for j in 0..level {
            let f = self.group.face(level, j, x);
            if self.group.degeneracy(level - 1, j, f) == x {
                return self.simp_of_elem(level - 1, f).degeneracy(j);
            }
        }
        let idx = self.nondeg[level]
            .iter()
            .position(|&e| e == x)
            .expect("element must be nondegenerate at this level");
        Simp::generator(level, idx)
    }

    pub fn identity_simp(&self, level: usize) -> Simp {
        self.simp_of_elem(level, self.group.identity_at(level))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_group_validates() {
        let g = FiniteGroup::cyclic(2);
        let k = SimplicialGroup::trivial(&g, 5);
        k.validate().unwrap();
    }

    #[test]
    fn trivially_simplicial_sset_has_vertices_only() {
        let g = FiniteGroup::cyclic(3);
        let k = SimplicialGroup::trivial(&g, 4);
        let (s, _) = k.underlying_sset().unwrap();
        assert_eq!(s.generator_count(0), 3);
        for n in 1..=4 {
            assert_eq!(s.generator_count(n), 0, "level {n}");
        }
        assert!(super::super::sset::validate_simplicial_set(&s).pass());
    }
}
