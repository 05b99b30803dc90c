//! Finite groups given by Cayley tables, with conjugacy-class enumeration
//! used as the independent oracle for classification counts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    pub elements: Vec<String>,
    /// mult[a][b] = index of a·b.
    pub mult: Vec<Vec<usize>>,
    pub identity: usize,
    pub inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validate the group axioms directly from the table.
    pub fn new(elements: Vec<String>, mult: Vec<Vec<usize>>) -> Result<Self> {
        let n = elements.len();
        if n == 0 {
            return Err(Error::Invalid("empty group".into()));
        }
        {
            let mut seen = std::collections::BTreeSet::new();
            for e in &elements {
                if !seen.insert(e) {
                    return Err(Error::Invalid(format!("duplicate element label `{e}`")));
                }
            }
        }
        if mult.len() != n || mult.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("multiplication table has wrong shape".into()));
        }
        for row in &mult {
            for &v in row {
                if v >= n {
                    return Err(Error::Invalid("multiplication table entry out of range".into()));
                }
            }
        }
        // Identity: the unique e with e·x = x·e = x for all x.
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mult[e][x] == x && mult[x][e] == x))
            .ok_or_else(|| Error::Invalid("no identity element".into()))?;
        // Inverses.
        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| mult[a][b] == identity && mult[b][a] == identity)
                .ok_or_else(|| Error::Invalid(format!("element {} has no inverse", elements[a])))?;
            inverse[a] = inv;
        }
        // Associativity.
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                        return Err(Error::Invalid(format!(
                            "associativity fails at ({}, {}, {})",
                            elements[a], elements[b], elements[c]
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            elements,
            mult,
            identity,
            inverse,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.elements[a]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|l| l == label)
    }

    /// Conjugacy classes by direct orbit enumeration (brute force).
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for a in 0..n {
            if seen[a] {
                continue;
            }
            let mut class = std::collections::BTreeSet::new();
            for g in 0..n {
                let c = self.mul(self.mul(g, a), self.inv(g));
                class.insert(c);
            }
            for &c in &class {
                seen[c] = true;
            }
            classes.push(class.into_iter().collect());
        }
        classes
    }

    /// Cyclic group Z/m with elements e, g, g2, ...
    pub fn cyclic(m: usize) -> FiniteGroup {
        let elements: Vec<String> = (0..m)
            .map(|i| match i {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g{i}"),
            })
            .collect();
        let mult: Vec<Vec<usize>> = (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect();
        FiniteGroup::new(elements, mult).expect("cyclic group table is valid")
    }

    /// Symmetric group on `n` letters (n small), elements named by cycle
    /// notation on 1..=n.
    pub fn symmetric(n: usize) -> FiniteGroup {
        let perms = permutations(n);
        let elements: Vec<String> = perms.iter().map(|p| cycle_name(p)).collect();
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
        let mut mult = vec![vec![0; perms.len()]; perms.len()];
        for (a, pa) in perms.iter().enumerate() {
            for (b, pb) in perms.iter().enumerate() {
                // Diagrammatic: (a·b)(x) = pb[pa[x]] so that a·b means
                // "apply a, then b"; associativity makes either order a
                // valid group, this one matches left-to-right composition.
                let prod: Vec<usize> = (0..n).map(|x| pb[pa[x]]).collect();
                mult[a][b] = index(&prod);
            }
        }
        FiniteGroup::new(elements, mult).expect("symmetric group table is valid")
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for k in 0..n {
        let mut next = Vec::new();
        for p in out {
            for pos in 0..=k {
                let mut q = p.clone();
                q.insert(pos, k);
                next.push(q);
            }
        }
        out = next;
    }
    out.sort();
    out
}

fn cycle_name(p: &[usize]) -> String {
    let n = p.len();
    let mut seen = vec![false; n];
    let mut name = String::new();
    for start in 0..n {
        if seen[start] || p[start] == start {
            seen[start] = true;
            continue;
        }
        let mut cyc = vec![start];
        seen[start] = true;
        let mut x = p[start];
        while x != start {
            seen[x] = true;
            cyc.push(x);
            x = p[x];
        }
        name.push('(');
        name.push_str(
            &cyc.iter()
                .map(|v| (v + 1).to_string())
                .collect::<Vec<_>>()
                .join(""),
        );
        name.push(')');
    }
    if name.is_empty() {
        "e".to_string()
    } else {
        name
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_groups() {
        let g = FiniteGroup::cyclic(3);
        assert_eq!(g.order(), 3);
        assert_eq!(g.conjugacy_classes().len(), 3);
        assert_eq!(g.inv(1), 2);
    }

    #[test]
    fn s3_structure() {
        let g = FiniteGroup::symmetric(3);
        assert_eq!(g.order(), 6);
        assert_eq!(g.conjugacy_classes().len(), 3);
        let sizes: Vec<usize> = {
            let mut v: Vec<usize> = g.conjugacy_classes().iter().map(|c| c.len()).collect();
            v.sort();
            v
        };
        assert_eq!(sizes, vec![1, 2, 3]);
    }

    #[test]
    fn bad_table_rejected() {
        // A "table" without identity.
        let r = FiniteGroup::new(
            vec!["a".into(), "b".into()],
            vec![vec![1, 0], vec![1, 0]],
        );
        assert!(r.is_err());
    }
}
