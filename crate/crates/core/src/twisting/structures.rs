//! Differential graded coalgebras and algebras with explicit structure
//! maps, verified at construction: coassociativity/associativity, the
//! (co)unit laws, and chain-map compatibility of all structure maps.

use num_bigint::BigInt;

use crate::chaincore::complex::hom_differential;
use crate::chaincore::graded::{GradedMap, GradedModule};
use crate::chaincore::tensor::{splice_map, tensor_of_maps, TargetShape, TensorComplex, TensorSpace};
use crate::chaincore::ChainComplex;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct DgCoalgebra {
    pub complex: ChainComplex,
    /// Δ: C → C⊗C, shift 0.
    pub diagonal: GradedMap,
    /// ε: C → R, shift 0.
    pub counit: GradedMap,
    /// η: R → C (optional coaugmentation).
    pub coaugmentation: Option<GradedMap>,
    /// The tensor square C⊗C the diagonal lands in.
    pub square: TensorSpace,
}

impl DgCoalgebra {
    pub fn new(
        complex: ChainComplex,
        diagonal: GradedMap,
        counit: GradedMap,
        coaugmentation: Option<GradedMap>,
    ) -> Result<Self> {
        let square = TensorSpace::new(vec![complex.module.clone(), complex.module.clone()])?;
        if diagonal.source != complex.module || diagonal.target != square.module || diagonal.shift != 0
        {
            return Err(Error::Shape("diagonal must be a shift-0 map C → C⊗C".into()));
        }
        let ground = GradedModule::ground(complex.ring());
        if counit.source != complex.module || counit.target != ground || counit.shift != 0 {
            return Err(Error::Shape("counit must be a shift-0 map C → R".into()));
        }
        if let Some(eta) = &coaugmentation {
            if eta.source != ground || eta.target != complex.module || eta.shift != 0 {
                return Err(Error::Shape("coaugmentation must be a shift-0 map R → C".into()));
            }
        }
        let c = DgCoalgebra {
            complex,
            diagonal,
            counit,
            coaugmentation,
            square,
        };
        c.verify()?;
        Ok(c)
    }

    fn verify(&self) -> Result<()> {
        // Coassociativity: (Δ⊗Id)Δ = (Id⊗Δ)Δ as maps C → C⊗C⊗C.
        let (_, left_expand) = splice_map(
            &self.square,
            0,
            1,
            &self.diagonal,
            None,
            TargetShape::Tensor(&self.square),
        )?;
        let (_, right_expand) = splice_map(
            &self.square,
            1,
            1,
            &self.diagonal,
            None,
            TargetShape::Tensor(&self.square),
        )?;
        let lhs = left_expand.compose(&self.diagonal)?;
        let rhs = right_expand.compose(&self.diagonal)?;
        if let Some((deg, w)) = lhs.sub(&rhs)?.first_nonzero_witness() {
            return Err(Error::identity("(Δ⊗Id)Δ = (Id⊗Δ)Δ", deg, &w, "coassociativity"));
        }
        // Counit laws: (ε⊗Id)Δ = Id = (Id⊗ε)Δ, after identifying R⊗C = C.
        let id = GradedMap::identity(&self.complex.module);
        let left_counit = contract_unit_left(&self.square, &self.counit, &self.diagonal)?;
        if let Some((deg, w)) = left_counit.sub(&id)?.first_nonzero_witness() {
            return Err(Error::identity("(ε⊗Id)Δ = Id", deg, &w, "left counit law"));
        }
        let right_counit = contract_unit_right(&self.square, &self.counit, &self.diagonal)?;
        if let Some((deg, w)) = right_counit.sub(&id)?.first_nonzero_witness() {
            return Err(Error::identity("(Id⊗ε)Δ = Id", deg, &w, "right counit law"));
        }
        // Δ and ε are chain maps.
        let square_cx = self.tensor_square_complex()?;
        let ddelta = hom_differential(&self.diagonal, &self.complex, &square_cx.complex)?;
        if let Some((deg, w)) = ddelta.first_nonzero_witness() {
            return Err(Error::identity("DΔ = 0", deg, &w, "diagonal is a chain map"));
        }
        let ground_cx = ground_complex(self.complex.ring());
        let deps = hom_differential(&self.counit, &self.complex, &ground_cx)?;
        if let Some((deg, w)) = deps.first_nonzero_witness() {
            return Err(Error::identity("Dε = 0", deg, &w, "counit is a chain map"));
        }
        if let Some(eta) = &self.coaugmentation {
            let deta = hom_differential(eta, &ground_cx, &self.complex)?;
            if let Some((deg, w)) = deta.first_nonzero_witness() {
                return Err(Error::identity("Dη = 0", deg, &w, "coaugmentation is a chain map"));
            }
            let comp = self.counit.compose(eta)?;
            let idr = GradedMap::identity(&GradedModule::ground(self.complex.ring()));
            if comp != idr {
                return Err(Error::identity("εη = Id", 0, "1", "coaugmentation section"));
            }
        }
        Ok(())
    }

    pub fn tensor_square_complex(&self) -> Result<TensorComplex> {
        TensorComplex::new(vec![self.complex.clone(), self.complex.clone()])
    }
}

#[derive(Debug, Clone)]
pub struct DgAlgebra {
    pub complex: ChainComplex,
    /// μ: A⊗A → A, shift 0.
    pub multiplication: GradedMap,
    /// η: R → A, shift 0.
    pub unit: GradedMap,
    /// ε: A → R (optional augmentation).
    pub augmentation: Option<GradedMap>,
    pub square: TensorSpace,
}

impl DgAlgebra {
    pub fn new(
        complex: ChainComplex,
        multiplication: GradedMap,
        unit: GradedMap,
        augmentation: Option<GradedMap>,
    ) -> Result<Self> {
        let square = TensorSpace::new(vec![complex.module.clone(), complex.module.clone()])?;
        if multiplication.source != square.module
            || multiplication.target != complex.module
            || multiplication.shift != 0
        {
            return Err(Error::Shape("multiplication must be a shift-0 map A⊗A → A".into()));
        }
        let ground = GradedModule::ground(complex.ring());
        if unit.source != ground || unit.target != complex.module || unit.shift != 0 {
            return Err(Error::Shape("unit must be a shift-0 map R → A".into()));
        }
        if let Some(eps) = &augmentation {
            if eps.source != complex.module || eps.target != ground || eps.shift != 0 {
                return Err(Error::Shape("augmentation must be a shift-0 map A → R".into()));
            }
        }
        let a = DgAlgebra {
            complex,
            multiplication,
            unit,
            augmentation,
            square,
        };
        a.verify()?;
        Ok(a)
    }

    fn verify(&self) -> Result<()> {
        // Associativity: μ(μ⊗Id) = μ(Id⊗μ) on A⊗A⊗A.
        let cube = TensorSpace::new(vec![
            self.complex.module.clone(),
            self.complex.module.clone(),
            self.complex.module.clone(),
        ])?;
        let (mid_l, mul_left) =
            splice_map(&cube, 0, 2, &self.multiplication, Some(&self.square), TargetShape::Single)?;
        let (mid_r, mul_right) =
            splice_map(&cube, 1, 2, &self.multiplication, Some(&self.square), TargetShape::Single)?;
        // Both mid spaces are A⊗A again.
        let lhs = remap(&self.multiplication, &mid_l.module)?.compose(&mul_left)?;
        let rhs = remap(&self.multiplication, &mid_r.module)?.compose(&mul_right)?;
        if let Some((deg, w)) = lhs.sub(&rhs)?.first_nonzero_witness() {
            return Err(Error::identity("μ(μ⊗Id) = μ(Id⊗μ)", deg, &w, "associativity"));
        }
        // Unit laws.
        let id = GradedMap::identity(&self.complex.module);
        let left_unit = insert_unit_left(&self.square, &self.unit, &self.multiplication)?;
        if let Some((deg, w)) = left_unit.sub(&id)?.first_nonzero_witness() {
            return Err(Error::identity("μ(η⊗Id) = Id", deg, &w, "left unit law"));
        }
        let right_unit = insert_unit_right(&self.square, &self.unit, &self.multiplication)?;
        if let Some((deg, w)) = right_unit.sub(&id)?.first_nonzero_witness() {
            return Err(Error::identity("μ(Id⊗η) = Id", deg, &w, "right unit law"));
        }
        // μ, η chain maps; ε an algebra chain map when present.
        let square_cx = TensorComplex::new(vec![self.complex.clone(), self.complex.clone()])?;
        let dmu = hom_differential(&self.multiplication, &square_cx.complex, &self.complex)?;
        if let Some((deg, w)) = dmu.first_nonzero_witness() {
            return Err(Error::identity("Dμ = 0", deg, &w, "multiplication is a chain map"));
        }
        let ground_cx = ground_complex(self.complex.ring());
        let deta = hom_differential(&self.unit, &ground_cx, &self.complex)?;
        if let Some((deg, w)) = deta.first_nonzero_witness() {
            return Err(Error::identity("Dη = 0", deg, &w, "unit is a chain map"));
        }
        if let Some(eps) = &self.augmentation {
            let deps = hom_differential(eps, &self.complex, &ground_cx)?;
            if let Some((deg, w)) = deps.first_nonzero_witness() {
                return Err(Error::identity("Dε = 0", deg, &w, "augmentation is a chain map"));
            }
            let comp = eps.compose(&self.unit)?;
            let idr = GradedMap::identity(&GradedModule::ground(self.complex.ring()));
            if comp != idr {
                return Err(Error::identity("εη = Id", 0, "1", "augmentation section"));
            }
            // ε is multiplicative: ε∘μ = mult_R∘(ε⊗ε).
            let ground_sq = TensorSpace::new(vec![
                GradedModule::ground(self.complex.ring()),
                GradedModule::ground(self.complex.ring()),
            ])?;
            let epseps = tensor_of_maps(&self.square, &ground_sq, &[eps, eps])?;
            let mut rmul = GradedMap::zero(&ground_sq.module, &ground_cx.module, 0);
            rmul.set_block(0, crate::coeffs::ExactMatrix::identity(1, self.complex.ring()))?;
            let lhs = eps.compose(&self.multiplication)?;
            let rhs = rmul.compose(&epseps)?;
            if let Some((deg, w)) = lhs.sub(&rhs)?.first_nonzero_witness() {
                return Err(Error::identity("εμ = ε⊗ε", deg, &w, "augmentation multiplicative"));
            }
        }
        Ok(())
    }

    pub fn tensor_square_complex(&self) -> Result<TensorComplex> {
        TensorComplex::new(vec![self.complex.clone(), self.complex.clone()])
    }

    /// The identity element of A as a sparse vector in degree 0.
    pub fn unit_vector(&self) -> Result<crate::chaincore::SparseVec> {
        self.unit.apply(0, &vec![(0, BigInt::from(1))])
    }
}

/// Rebuild a map on an equal-but-distinct module value (tensor spaces are
/// rebuilt per construction; their modules compare equal structurally).
fn remap(f: &GradedMap, source_like: &GradedModule) -> Result<GradedMap> {
    if &f.source != source_like {
        return Err(Error::Shape("remap: modules differ structurally".into()));
    }
    Ok(f.clone())
}

fn ground_complex(ring: crate::coeffs::RingSpec) -> ChainComplex {
    let ground = GradedModule::ground(ring);
    let d = GradedMap::zero(&ground, &ground, -1);
    ChainComplex::new(ground, d, None).expect("ground complex is valid")
}

/// (ε⊗Id)Δ with the identification R⊗C ≅ C.
fn contract_unit_left(
    square: &TensorSpace,
    counit: &GradedMap,
    diagonal: &GradedMap,
) -> Result<GradedMap> {
    let (rspace, eps_id) = splice_map(square, 0, 1, counit, None, TargetShape::Single)?;
    let collapsed = collapse_ground(&rspace, 0)?;
    collapsed.compose(&eps_id)?.compose(diagonal)
}

fn contract_unit_right(
    square: &TensorSpace,
    counit: &GradedMap,
    diagonal: &GradedMap,
) -> Result<GradedMap> {
    let (rspace, id_eps) = splice_map(square, 1, 1, counit, None, TargetShape::Single)?;
    let collapsed = collapse_ground(&rspace, 1)?;
    collapsed.compose(&id_eps)?.compose(diagonal)
}

/// μ(η⊗Id): C ≅ R⊗C → A⊗A → A precomposed with the inclusion.
fn insert_unit_left(
    square: &TensorSpace,
    unit: &GradedMap,
    multiplication: &GradedMap,
) -> Result<GradedMap> {
    let a = &square.factors[1];
    let ground = GradedModule::ground(a.ring);
    let rspace = TensorSpace::new(vec![ground.clone(), a.clone()])?;
    let (out, eta_id) = splice_map(&rspace, 0, 1, unit, None, TargetShape::Single)?;
    if out.module != square.module {
        return Err(Error::Internal("unit splice should land in A⊗A".into()));
    }
    let include = expand_ground(&rspace, 0)?;
    multiplication.compose(&eta_id)?.compose(&include)
}

fn insert_unit_right(
    square: &TensorSpace,
    unit: &GradedMap,
    multiplication: &GradedMap,
) -> Result<GradedMap> {
    let a = &square.factors[0];
    let ground = GradedModule::ground(a.ring);
    let rspace = TensorSpace::new(vec![a.clone(), ground.clone()])?;
    let (out, id_eta) = splice_map(&rspace, 1, 1, unit, None, TargetShape::Single)?;
    if out.module != square.module {
        return Err(Error::Internal("unit splice should land in A⊗A".into()));
    }
    let include = expand_ground(&rspace, 1)?;
    multiplication.compose(&id_eta)?.compose(&include)
}

/// Iso R⊗C → C (or C⊗R → C) dropping a ground factor at `pos`.
pub fn collapse_ground(space: &TensorSpace, pos: usize) -> Result<GradedMap> {
    let other = if pos == 0 { 1 } else { 0 };
    let target = space.factors[other].clone();
    let mut map = GradedMap::zero(&space.module, &target, 0);
    let mut blocks: std::collections::BTreeMap<i64, crate::coeffs::ExactMatrix> =
        std::collections::BTreeMap::new();
    for (&deg, _) in &space.module.basis {
        let tups = space.tuples_at(deg);
        let mut m = crate::coeffs::ExactMatrix::zero(target.dim(deg), tups.len(), target.ring);
        for (col, t) in tups.iter().enumerate() {
            debug_assert_eq!(t[pos], (0, 0));
            m.set(t[other].1, col, BigInt::from(1));
            debug_assert_eq!(t[other].0, deg);
        }
        blocks.insert(deg, m);
    }
    for (deg, m) in blocks {
        map.set_block(deg, m)?;
    }
    Ok(map)
}

/// Iso C → R⊗C (or C → C⊗R) inserting the ground factor at `pos`.
pub fn expand_ground(space: &TensorSpace, pos: usize) -> Result<GradedMap> {
    let other = if pos == 0 { 1 } else { 0 };
    let source = space.factors[other].clone();
    let mut map = GradedMap::zero(&source, &space.module, 0);
    let degs: Vec<i64> = source.degrees();
    for deg in degs {
        let mut m =
            crate::coeffs::ExactMatrix::zero(space.module.dim(deg), source.dim(deg), source.ring);
        for idx in 0..source.dim(deg) {
            let mut t = vec![(0i64, 0usize); 2];
            t[pos] = (0, 0);
            t[other] = (deg, idx);
            let row = space
                .index_of(deg, &t)
                .ok_or_else(|| Error::Internal("ground insertion tuple missing".into()))?;
            m.set(row, idx, BigInt::from(1));
        }
        map.set_block(deg, m)?;
    }
    Ok(map)
}
