//! Cartesian products of simplicial sets, built from pairs of canonical
//! simplices with componentwise structure maps.

use super::simplex::Simp;
use super::sset::{build_sset, SSet, SimplicialData};
use crate::error::Result;

pub struct ProductData<'a> {
    pub x: &'a SSet,
    pub y: &'a SSet,
}

impl SimplicialData for ProductData<'_> {
    type Elem = (Simp, Simp);

    fn elements(&self, level: usize) -> Vec<(Simp, Simp)> {
        let xs = self.x.simplices(level);
        let ys = self.y.simplices(level);
        let mut out = Vec::with_capacity(xs.len() * ys.len());
        for a in &xs {
            for b in &ys {
                out.push((a.clone(), b.clone()));
            }
        }
        out
    }

    fn face(&self, _level: usize, e: &(Simp, Simp), i: usize) -> (Simp, Simp) {
        (self.x.face(&e.0, i), self.y.face(&e.1, i))
    }

    fn degeneracy(&self, _level: usize, e: &(Simp, Simp), i: usize) -> (Simp, Simp) {
        (e.0.degeneracy(i), e.1.degeneracy(i))
    }

    fn label(&self, _level: usize, e: &(Simp, Simp)) -> String {
        format!("({};{})", self.x.display(&e.0), self.y.display(&e.1))
    }
}

/// X × Y up to the bound, with the nondegenerate pairs returned for
/// metadata (Serre filtration, projections).
pub fn product_sset(x: &SSet, y: &SSet, bound: usize) -> Result<(SSet, Vec<Vec<(Simp, Simp)>>)> {
    build_sset(&ProductData { x, y }, bound)
}

/// Serre filtration of a product simplex: the degree of the nondegenerate
/// core of its first component.
pub fn base_filtration(pairs: &[Vec<(Simp, Simp)>]) -> Vec<Vec<i64>> {
    pairs
        .iter()
        .map(|level| level.iter().map(|(a, _)| a.gen_degree as i64).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::sset::{standard_simplex, validate_simplicial_set};

    #[test]
    fn square_has_two_triangles() {
        let d1 = standard_simplex(1, 4).unwrap();
        let (p, _) = product_sset(&d1, &d1, 4).unwrap();
        assert_eq!(p.generator_count(0), 4);
        assert_eq!(p.generator_count(1), 5);
        assert_eq!(p.generator_count(2), 2);
        assert_eq!(p.generator_count(3), 0);
        assert!(validate_simplicial_set(&p).pass());
    }

    #[test]
    fn product_with_point_is_isomorphic() {
        let d0 = standard_simplex(0, 3).unwrap();
        let d2 = standard_simplex(2, 3).unwrap();
        let (p, _) = product_sset(&d2, &d0, 3).unwrap();
        for n in 0..=3 {
            assert_eq!(p.generator_count(n), d2.generator_count(n), "level {n}");
        }
    }
}
