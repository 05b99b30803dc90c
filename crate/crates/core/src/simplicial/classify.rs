//! Exhaustive classification of simplicial principal G-bundles over a
//! finite base for an ordinary finite group G (trivially simplicial):
//! enumerate the twisting functions, then quotient by the Map(B₀, G)
//! action through last-vertex thetas.

use std::collections::BTreeMap;

use super::sgroup::SGroupSSet;
use super::simplex::Simp;
use super::sset::SSet;
use super::theta::{theta_act, Theta};
use super::twisting_function::{check_twisting_function, TwistingFunction};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct BundleOrbits {
    /// One representative per orbit (values on nondegenerate simplices).
    pub representatives: Vec<TwistingFunction>,
    pub orbit_sizes: Vec<usize>,
    pub total_twisting_functions: usize,
}

impl BundleOrbits {
    pub fn count(&self) -> usize {
        self.representatives.len()
    }
}

/// Enumerate 𝒯_triv(B, G) by free assignments on nondegenerate simplices
/// filtered by the cocycle conditions, then quotient by Map(B₀, G).
pub fn classify_bundles(base: &SSet, group: &SGroupSSet) -> Result<BundleOrbits> {
    if !group.group.trivially_simplicial {
        return Err(Error::Unsupported(
            "classification is implemented for trivially simplicial groups".into(),
        ));
    }
    let g = &group.group.levels[0];
    let order = g.order();
    let mut slots = Vec::new();
    for p in 1..=base.degree_bound {
        for idx in 0..base.generator_count(p) {
            slots.push((p, idx));
        }
    }
    // All assignments, validated.
    let mut valid: Vec<BTreeMap<(usize, usize), usize>> = Vec::new();
    let mut assignment = vec![0usize; slots.len()];
    loop {
        let values: BTreeMap<(usize, usize), usize> = slots
            .iter()
            .cloned()
            .zip(assignment.iter().cloned())
            .collect();
        if let Ok(rho) = TwistingFunction::new(base.clone(), group.clone(), values.clone()) {
            if check_twisting_function(&rho).is_ok() {
                valid.push(values);
            }
        }
        // Odometer increment.
        let mut k = 0;
        loop {
            if k == assignment.len() {
                break;
            }
            assignment[k] += 1;
            if assignment[k] < order {
                break;
            }
            assignment[k] = 0;
            k += 1;
        }
        if k == assignment.len() {
            break;
        }
    }
    let index: BTreeMap<&BTreeMap<(usize, usize), usize>, usize> =
        valid.iter().enumerate().map(|(i, v)| (v, i)).collect();

    // Orbit BFS over single-vertex changes of the acting vertex map.
    let n_vertices = base.generator_count(0);
    let mut visited = vec![false; valid.len()];
    let mut representatives = Vec::new();
    let mut orbit_sizes = Vec::new();
    for start in 0..valid.len() {
        if visited[start] {
            continue;
        }
        let mut queue = vec![start];
        visited[start] = true;
        let mut size = 0usize;
        while let Some(cur) = queue.pop() {
            size += 1;
            for v in 0..n_vertices {
                for elem in 0..order {
                    let mut phi = vec![g.identity; n_vertices];
                    phi[v] = elem;
                    let theta = Theta::from_vertex_map(base, group, &phi)?;
                    let rho = TwistingFunction::new(
                        base.clone(),
                        group.clone(),
                        valid[cur].clone(),
                    )?;
                    let moved = theta_act(&theta, &rho)?;
                    let j = *index.get(&moved.values).ok_or_else(|| {
                        Error::Internal("theta action left the valid set".into())
                    })?;
                    if !visited[j] {
                        visited[j] = true;
                        queue.push(j);
                    }
                }
            }
        }
        representatives.push(TwistingFunction::new(
            base.clone(),
            group.clone(),
            valid[start].clone(),
        )?);
        orbit_sizes.push(size);
    }
    Ok(BundleOrbits {
        representatives,
        orbit_sizes,
        total_twisting_functions: valid.len(),
    })
}

/// Last vertex of a simplex (iterated 0-th face).
pub fn last_vertex(base: &SSet, s: &Simp) -> usize {
    let mut v = s.clone();
    for _ in 0..s.degree() {
        v = base.face(&v, 0);
    }
    v.gen_index
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catnerve::group::FiniteGroup;
    use crate::simplicial::sgroup::SimplicialGroup;
    use crate::simplicial::sset::{minimal_circle, standard_simplex};

    #[test]
    fn point_has_single_orbit() {
        let d0 = standard_simplex(0, 3).unwrap();
        let g = FiniteGroup::symmetric(3);
        let k = SGroupSSet::new(SimplicialGroup::trivial(&g, 3)).unwrap();
        let orbits = classify_bundles(&d0, &k).unwrap();
        assert_eq!(orbits.count(), 1);
        assert_eq!(orbits.total_twisting_functions, 1);
    }

    #[test]
    fn circle_z2_two_orbits() {
        let s1 = minimal_circle(4).unwrap();
        let g = FiniteGroup::cyclic(2);
        let k = SGroupSSet::new(SimplicialGroup::trivial(&g, 4)).unwrap();
        let orbits = classify_bundles(&s1, &k).unwrap();
        assert_eq!(orbits.count(), 2);
        assert_eq!(orbits.total_twisting_functions, 2);
    }

    #[test]
    fn circle_s3_three_orbits_matches_conjugacy_classes() {
        let s1 = minimal_circle(4).unwrap();
        let g = FiniteGroup::symmetric(3);
        let k = SGroupSSet::new(SimplicialGroup::trivial(&g, 4)).unwrap();
        let orbits = classify_bundles(&s1, &k).unwrap();
        assert_eq!(orbits.count(), g.conjugacy_classes().len());
        assert_eq!(orbits.count(), 3);
        let mut sizes = orbits.orbit_sizes.clone();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
    }
}
