//! Contractions (strong deformation retractions) between chain complexes:
//! data (∇, g, h) subject to
//!
//!   g∇ = Id,   Dh = ∇g − Id,   gh = 0,  h∇ = 0,  hh = 0,
//!
//! with ∇, g, h filtration preserving when filtrations are present.
//! `normalize_side_conditions` repairs the annihilation properties when
//! only the first two identities hold.

use num_bigint::BigInt;
use serde::Serialize;

use super::complex::{hom_differential, ChainComplex};
use super::graded::GradedMap;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Contraction {
    /// M, the small complex.
    pub small: ChainComplex,
    /// N, the big complex.
    pub big: ChainComplex,
    /// ∇: M → N, shift 0 chain map.
    pub inject: GradedMap,
    /// g: N → M, shift 0 chain map.
    pub project: GradedMap,
    /// h: N → N, shift +1.
    pub homotopy: GradedMap,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub identity: String,
    pub degree: i64,
    pub pass: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContractionReport {
    pub lines: Vec<CheckLine>,
}

impl ContractionReport {
    pub fn all_pass(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }

    pub fn first_failure(&self) -> Option<&CheckLine> {
        self.lines.iter().find(|l| !l.pass)
    }
}

impl Contraction {
    /// Trivial contraction of a complex onto itself.
    pub fn trivial(c: &ChainComplex) -> Self {
        Contraction {
            small: c.clone(),
            big: c.clone(),
            inject: GradedMap::identity(&c.module),
            project: GradedMap::identity(&c.module),
            homotopy: GradedMap::zero(&c.module, &c.module, 1),
        }
    }

    fn shape_check(&self) -> Result<()> {
        if self.inject.source != self.small.module
            || self.inject.target != self.big.module
            || self.inject.shift != 0
        {
            return Err(Error::Shape("∇ must be a shift-0 map M → N".into()));
        }
        if self.project.source != self.big.module
            || self.project.target != self.small.module
            || self.project.shift != 0
        {
            return Err(Error::Shape("g must be a shift-0 map N → M".into()));
        }
        if self.homotopy.source != self.big.module
            || self.homotopy.target != self.big.module
            || self.homotopy.shift != 1
        {
            return Err(Error::Shape("h must be a shift +1 map N → N".into()));
        }
        Ok(())
    }

    /// Degrees in which basis elements exist, over both complexes.
    fn active_degrees(&self) -> Vec<i64> {
        let mut degs: std::collections::BTreeSet<i64> = std::collections::BTreeSet::new();
        degs.extend(self.small.module.degrees());
        degs.extend(self.big.module.degrees());
        degs.into_iter().collect()
    }

    /// Top degree in which identities involving k applications of h are
    /// checkable (None = unbounded).
    fn top_checkable(&self, h_uses: i64) -> Option<i64> {
        self.big.module.degree_bound.map(|b| b - h_uses)
    }

    /// Verify all contraction identities degreewise; returns a report with
    /// one line per identity per degree and the first failing basis element.
    pub fn verify(&self) -> Result<ContractionReport> {
        self.shape_check()?;
        let mut lines = Vec::new();

        let id_small = GradedMap::identity(&self.small.module);
        let id_big = GradedMap::identity(&self.big.module);

        let gnabla = self.project.compose(&self.inject)?.sub(&id_small)?;
        self.compare("g∇ = Id", &gnabla, None, &mut lines)?;

        let nabla_chain = hom_differential(&self.inject, &self.small, &self.big)?;
        self.compare("D∇ = 0 (∇ chain map)", &nabla_chain, None, &mut lines)?;
        let g_chain = hom_differential(&self.project, &self.big, &self.small)?;
        self.compare("Dg = 0 (g chain map)", &g_chain, None, &mut lines)?;

        // Dh = ∇g − Id, checkable where h is defined (one use of h).
        let top1 = self.top_checkable(1);
        let dh = self.hom_diff_h()?;
        let rhs = self.inject.compose(&self.project)?.sub(&id_big)?;
        let diff = dh.sub(&rhs)?;
        self.compare("Dh = ∇g − Id", &diff, top1, &mut lines)?;

        let gh = self.project.compose(&self.homotopy)?;
        self.compare("gh = 0", &gh, top1, &mut lines)?;
        let hn = self.homotopy.compose(&self.inject)?;
        self.compare("h∇ = 0", &hn, top1, &mut lines)?;
        let hh = self.homotopy.compose(&self.homotopy)?;
        self.compare("hh = 0", &hh, self.top_checkable(2), &mut lines)?;

        if self.small.filtration.is_some() && self.big.filtration.is_some() {
            lines.push(filtration_line("∇ filtration-preserving", &self.inject, &self.small, &self.big)?);
            lines.push(filtration_line("g filtration-preserving", &self.project, &self.big, &self.small)?);
            lines.push(filtration_line("h filtration-preserving", &self.homotopy, &self.big, &self.big)?);
        }

        Ok(ContractionReport { lines })
    }

    /// Dh with the truncation-safe range: blocks of h above the bound are
    /// simply absent, so restrict before comparing.
    fn hom_diff_h(&self) -> Result<GradedMap> {
        let dh = self.big.differential.compose(&self.homotopy)?;
        let hd = self.homotopy.compose(&self.big.differential)?;
        dh.add(&hd)
    }

    fn compare(
        &self,
        name: &str,
        difference: &GradedMap,
        top: Option<i64>,
        lines: &mut Vec<CheckLine>,
    ) -> Result<()> {
        for deg in self.active_degrees() {
            if let Some(t) = top {
                if deg > t {
                    continue;
                }
            }
            if difference.source.dim(deg) == 0 {
                continue;
            }
            let block = difference.block(deg);
            if block.is_zero() {
                lines.push(CheckLine {
                    identity: name.to_string(),
                    degree: deg,
                    pass: true,
                    witness: None,
                });
            } else {
                let (_, c, _) = block.iter().next().unwrap();
                lines.push(CheckLine {
                    identity: name.to_string(),
                    degree: deg,
                    pass: false,
                    witness: Some(difference.source.label(deg, c).to_string()),
                });
            }
        }
        Ok(())
    }

    /// Verify and turn the first failure into an error.
    pub fn verify_strict(&self) -> Result<ContractionReport> {
        let report = self.verify()?;
        if let Some(fail) = report.first_failure() {
            return Err(Error::identity(
                &fail.identity,
                fail.degree,
                fail.witness.as_deref().unwrap_or("-"),
                "contraction identity failed",
            ));
        }
        Ok(report)
    }
}

fn filtration_line(
    name: &str,
    map: &GradedMap,
    src: &ChainComplex,
    tgt: &ChainComplex,
) -> Result<CheckLine> {
    for (&deg, block) in &map.blocks {
        for (r, c, _) in block.iter() {
            let fs = src.filtration_of(deg, c)?;
            let ft = tgt.filtration_of(deg + map.shift, r)?;
            if ft > fs {
                return Ok(CheckLine {
                    identity: name.to_string(),
                    degree: deg,
                    pass: false,
                    witness: Some(src.module.label(deg, c).to_string()),
                });
            }
        }
    }
    Ok(CheckLine {
        identity: name.to_string(),
        degree: i64::MIN,
        pass: true,
        witness: None,
    })
}

/// Repair the side conditions of data satisfying g∇ = Id and Dh = ∇g − Id.
///
/// Two steps: first conjugate h by (Id − ∇g) to kill gh and h∇, then
/// replace h by −h d h to kill hh. Both preserve Dh = ∇g − Id for the
/// sign convention used here; a strict contraction is a fixed point.
pub fn normalize_side_conditions(c: &Contraction) -> Result<Contraction> {
    // Preconditions (2.5) and (2.6) must already hold.
    let id_small = GradedMap::identity(&c.small.module);
    let id_big = GradedMap::identity(&c.big.module);
    let gn = c.project.compose(&c.inject)?.sub(&id_small)?;
    if let Some((deg, w)) = gn.first_nonzero_witness() {
        return Err(Error::identity("g∇ = Id", deg, &w, "normalization requires (2.5)"));
    }
    let top1 = c.big.module.degree_bound.map(|b| b - 1);
    let dh = {
        let a = c.big.differential.compose(&c.homotopy)?;
        let b = c.homotopy.compose(&c.big.differential)?;
        a.add(&b)?
    };
    let rhs = c.inject.compose(&c.project)?.sub(&id_big)?;
    let mut diff = dh.sub(&rhs)?;
    if let Some(t) = top1 {
        diff = diff.restricted(i64::MIN, t);
    }
    if let Some((deg, w)) = diff.first_nonzero_witness() {
        return Err(Error::identity("Dh = ∇g − Id", deg, &w, "normalization requires (2.6)"));
    }

    // π = Id − ∇g; h1 = π h π kills gh and h∇ without disturbing (2.6).
    let pi = id_big.sub(&c.inject.compose(&c.project)?)?;
    let h1 = pi.compose(&c.homotopy.compose(&pi)?)?;
    // h2 = −h1 d h1 kills hh.
    let h2 = h1
        .compose(&c.big.differential.compose(&h1)?)?
        .scale(&BigInt::from(-1));

    let out = Contraction {
        small: c.small.clone(),
        big: c.big.clone(),
        inject: c.inject.clone(),
        project: c.project.clone(),
        homotopy: h2,
    };
    out.verify_strict()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaincore::graded::GradedModule;
    use crate::coeffs::{ExactMatrix, RingSpec};
    use std::collections::BTreeMap;

    fn small_pair() -> (ChainComplex, ChainComplex, Contraction) {
        // N: degree 0 {x, y}, degree 1 {e, f} with d(e) = d(f) = y − x
        // (a circle built from two arcs). M = its homology:
        // degree 0 {p}, degree 1 {q}.
        // ∇(p) = x, ∇(q) = e − f; g(x) = g(y) = p, g(e) = 0, g(f) = −q;
        // h(x) = 0, h(y) = −e, h = 0 in degree 1.
        let mut nb = BTreeMap::new();
        nb.insert(0, vec!["x".to_string(), "y".to_string()]);
        nb.insert(1, vec!["e".to_string(), "f".to_string()]);
        let nmod = GradedModule::new(RingSpec::Integers, nb, None).unwrap();
        let mut nd = GradedMap::zero(&nmod, &nmod, -1);
        nd.set_block(
            1,
            ExactMatrix::from_dense(RingSpec::Integers, &[vec![-1, -1], vec![1, 1]]),
        )
        .unwrap();
        let n = ChainComplex::new(nmod.clone(), nd, None).unwrap();

        let mut mb = BTreeMap::new();
        mb.insert(0, vec!["p".to_string()]);
        mb.insert(1, vec!["q".to_string()]);
        let mmod = GradedModule::new(RingSpec::Integers, mb, None).unwrap();
        let md = GradedMap::zero(&mmod, &mmod, -1);
        let m = ChainComplex::new(mmod.clone(), md, None).unwrap();

        let mut inject = GradedMap::zero(&mmod, &nmod, 0);
        inject
            .set_block(0, ExactMatrix::from_dense(RingSpec::Integers, &[vec![1], vec![0]]))
            .unwrap();
        inject
            .set_block(1, ExactMatrix::from_dense(RingSpec::Integers, &[vec![1], vec![-1]]))
            .unwrap();
        let mut project = GradedMap::zero(&nmod, &mmod, 0);
        project
            .set_block(0, ExactMatrix::from_dense(RingSpec::Integers, &[vec![1, 1]]))
            .unwrap();
        project
            .set_block(1, ExactMatrix::from_dense(RingSpec::Integers, &[vec![0, -1]]))
            .unwrap();
        let mut h = GradedMap::zero(&nmod, &nmod, 1);
        h.set_block(
            0,
            ExactMatrix::from_dense(RingSpec::Integers, &[vec![0, -1], vec![0, 0]]),
        )
        .unwrap();
        let c = Contraction {
            small: m.clone(),
            big: n.clone(),
            inject,
            project,
            homotopy: h,
        };
        (m, n, c)
    }

    #[test]
    fn trivial_contraction_passes() {
        let (_, n, _) = small_pair();
        let t = Contraction::trivial(&n);
        assert!(t.verify().unwrap().all_pass());
    }

    #[test]
    fn hand_built_contraction_passes() {
        let (_, _, c) = small_pair();
        assert!(c.verify().unwrap().all_pass(), "{:?}", c.verify().unwrap().first_failure());
    }

    #[test]
    fn broken_side_condition_detected_and_normalized() {
        let (_, _, c) = small_pair();
        // Corrupt h by a Hom-cycle z with z(x) = z(y) = e − f: (2.5) and
        // (2.6) still hold but h∇ = 0 and gh = 0 fail.
        let mut z = GradedMap::zero(&c.big.module, &c.big.module, 1);
        z.set_block(
            0,
            ExactMatrix::from_dense(RingSpec::Integers, &[vec![1, 1], vec![-1, -1]]),
        )
        .unwrap();
        let mut broken = c.clone();
        broken.homotopy = c.homotopy.add(&z).unwrap();
        let report = broken.verify().unwrap();
        assert!(!report.all_pass());
        let failed: Vec<_> = report
            .lines
            .iter()
            .filter(|l| !l.pass)
            .map(|l| l.identity.clone())
            .collect();
        assert!(
            failed.iter().any(|i| i.contains("h∇ = 0")),
            "failures: {failed:?}"
        );
        assert!(
            failed.iter().all(|i| !i.contains("Dh")),
            "(2.6) must survive the corruption: {failed:?}"
        );

        let fixed = normalize_side_conditions(&broken).unwrap();
        assert!(fixed.verify().unwrap().all_pass());
        assert_eq!(fixed.inject, c.inject, "normalization must not touch ∇");
    }

    #[test]
    fn strict_contraction_is_fixed_point() {
        let (_, _, c) = small_pair();
        let normalized = normalize_side_conditions(&c).unwrap();
        assert_eq!(normalized.homotopy, c.homotopy);
        assert_eq!(normalized.project, c.project);
    }

    #[test]
    fn rejects_when_g_nabla_not_identity() {
        let (_, _, mut c) = small_pair();
        c.inject = c.inject.scale(&BigInt::from(2));
        assert!(normalize_side_conditions(&c).is_err());
    }
}
