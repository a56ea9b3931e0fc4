//! Differential forms in the orthonormal coframe `{e₁*, e₂*, e₃*, e₄*}`.
//!
//! A k-form is a map from sorted multi-indices (bitmasks over the four frame
//! directions) to scalar fields. Absent indices are zero.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{GeometryError, Result};
use crate::field::{Coord, Expr, ScalarField};
use crate::frame::{structure_coefficient_field, Point, DIM};
use crate::scalar::Scalar;

/// Sorted multi-index over `{0, 1, 2, 3}` as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(u8);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);
    pub const FULL: MultiIndex = MultiIndex(0b1111);

    /// From frame indices in any order; `None` on repeats or out-of-range.
    pub fn from_indices(indices: &[usize]) -> Option<Self> {
        let mut mask = 0u8;
        for &i in indices {
            if i >= DIM || mask & (1 << i) != 0 {
                return None;
            }
            mask |= 1 << i;
        }
        Some(MultiIndex(mask))
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn indices(self) -> Vec<usize> {
        (0..DIM).filter(|&i| self.contains(i)).collect()
    }

    pub fn complement(self) -> Self {
        MultiIndex(!self.0 & 0b1111)
    }

    /// Sign of `e_I ∧ e_J` relative to `e_{I∪J}`; zero when they overlap.
    pub fn wedge_sign(self, other: Self) -> i8 {
        if self.0 & other.0 != 0 {
            return 0;
        }
        let mut inversions = 0;
        for i in self.indices() {
            for j in other.indices() {
                if i > j {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn union(self, other: Self) -> Self {
        MultiIndex(self.0 | other.0)
    }

    /// All sorted multi-indices of the given size.
    pub fn of_degree(k: usize) -> Vec<MultiIndex> {
        (0u8..16)
            .filter(|m| m.count_ones() as usize == k)
            .map(MultiIndex)
            .collect()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .indices()
            .iter()
            .map(|i| format!("e{}*", i + 1))
            .collect();
        f.write_str(&parts.join("^"))
    }
}

/// A degree-k form with point-dependent components.
#[derive(Debug, Clone)]
pub struct KForm<T> {
    degree: usize,
    components: BTreeMap<MultiIndex, ScalarField<T>>,
}

impl<T: Scalar> KForm<T> {
    pub fn zero(degree: usize) -> Self {
        assert!(degree <= DIM, "form degree {degree} exceeds 4");
        KForm {
            degree,
            components: BTreeMap::new(),
        }
    }

    /// `f · e_I` for frame indices in any order (sign of the sort applied).
    pub fn monomial(indices: &[usize], coefficient: ScalarField<T>) -> Result<Self> {
        let mask = MultiIndex::from_indices(indices).ok_or(GeometryError::WrongDegree {
            expected: "distinct frame indices",
            found: indices.len(),
        })?;
        let mut sign = 1;
        for a in 0..indices.len() {
            for b in (a + 1)..indices.len() {
                if indices[a] > indices[b] {
                    sign = -sign;
                }
            }
        }
        let mut form = KForm::zero(indices.len());
        let coefficient = if sign < 0 { -coefficient } else { coefficient };
        form.add_component(mask, coefficient);
        Ok(form)
    }

    /// Constant-coefficient coframe monomial.
    pub fn basis(indices: &[usize]) -> Self {
        KForm::monomial(indices, ScalarField::constant(T::one())).expect("distinct indices")
    }

    pub fn scalar(f: ScalarField<T>) -> Self {
        let mut form = KForm::zero(0);
        form.add_component(MultiIndex::EMPTY, f);
        form
    }

    pub fn volume() -> Self {
        KForm::basis(&[0, 1, 2, 3])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> impl Iterator<Item = (&MultiIndex, &ScalarField<T>)> {
        self.components.iter()
    }

    pub fn component(&self, index: MultiIndex) -> Option<&ScalarField<T>> {
        self.components.get(&index)
    }

    /// Component on a sorted index list, evaluated at `p` (zero if absent).
    pub fn component_at(&self, indices: &[usize], p: &Point<T>) -> T {
        MultiIndex::from_indices(indices)
            .and_then(|m| self.components.get(&m))
            .map_or(T::zero(), |f| f.eval(p))
    }

    fn add_component(&mut self, index: MultiIndex, f: ScalarField<T>) {
        debug_assert_eq!(index.len(), self.degree);
        if f.is_zero() {
            return;
        }
        let merged = match self.components.remove(&index) {
            Some(existing) => existing + f,
            None => f,
        };
        if !merged.is_zero() {
            self.components.insert(index, merged);
        }
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(GeometryError::WrongDegree {
                expected: "matching degrees",
                found: other.degree,
            });
        }
        let mut out = self.clone();
        for (&m, f) in &other.components {
            out.add_component(m, f.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_components(|f| -f.clone())
    }

    pub fn scale(&self, factor: T) -> Self {
        self.map_components(|f| f.clone().scale(factor))
    }

    pub fn multiply(&self, g: &ScalarField<T>) -> Self {
        self.map_components(|f| f.clone() * g.clone())
    }

    fn map_components<F: Fn(&ScalarField<T>) -> ScalarField<T>>(&self, map: F) -> Self {
        let mut out = KForm::zero(self.degree);
        for (&m, f) in &self.components {
            out.add_component(m, map(f));
        }
        out
    }

    /// Component values at `p`, keyed by multi-index.
    pub fn evaluate(&self, p: &Point<T>) -> BTreeMap<MultiIndex, T> {
        self.components
            .iter()
            .map(|(&m, f)| (m, f.eval(p)))
            .collect()
    }

    /// Largest absolute component at `p`.
    pub fn max_abs_at(&self, p: &Point<T>) -> T {
        self.components
            .values()
            .fold(T::zero(), |m, f| m.max(f.eval(p).abs()))
    }

    /// Sup-norm of the components over `points`, rejecting points within
    /// `epsilon` of a pole.
    pub fn sup_norm(&self, points: &[Point<T>], epsilon: T) -> Result<T> {
        let mut worst = T::zero();
        for p in points {
            p.ensure_interior(epsilon)?;
            worst = worst.max(self.max_abs_at(p));
        }
        Ok(worst)
    }
}

/// `α ∧ β` with sign bookkeeping on sorted indices.
pub fn wedge<T: Scalar>(alpha: &KForm<T>, beta: &KForm<T>) -> Result<KForm<T>> {
    let degree = alpha.degree + beta.degree;
    if degree > DIM {
        return Err(GeometryError::DegreeOverflow {
            lhs: alpha.degree,
            rhs: beta.degree,
        });
    }
    let mut out = KForm::zero(degree);
    for (&i, f) in &alpha.components {
        for (&j, g) in &beta.components {
            match i.wedge_sign(j) {
                0 => {}
                s => {
                    let product = f.clone() * g.clone();
                    out.add_component(i.union(j), if s > 0 { product } else { -product });
                }
            }
        }
    }
    Ok(out)
}

/// `d(eₖ*) = −½ cᵏᵢⱼ eᵢ* ∧ eⱼ* = −Σ_{i<j} cᵏᵢⱼ eᵢ* ∧ eⱼ*`.
pub fn coframe_derivative<T: Scalar>(k: usize) -> KForm<T> {
    let mut out = KForm::zero(2);
    for i in 0..DIM {
        for j in (i + 1)..DIM {
            let c = structure_coefficient_field::<T>(k, i, j);
            if !c.is_zero() {
                out.add_component(MultiIndex::from_indices(&[i, j]).expect("i < j"), -c);
            }
        }
    }
    out
}

fn monomial_derivative<T: Scalar>(indices: &[usize]) -> KForm<T> {
    match indices.split_first() {
        None => KForm::zero(1),
        Some((&first, rest)) => {
            // d(e_i ∧ ρ) = de_i ∧ ρ − e_i ∧ dρ
            let rest_form = KForm::basis(rest);
            let head = wedge(&coframe_derivative::<T>(first), &rest_form).expect("degree fits");
            let tail = wedge(&KForm::basis(&[first]), &monomial_derivative::<T>(rest))
                .expect("degree fits");
            head.sub(&tail).expect("same degree")
        }
    }
}

/// Frame-based exterior derivative:
/// `d(f e_I) = Σᵢ (eᵢf) eᵢ* ∧ e_I + f d(e_I)`.
pub fn exterior_derivative<T: Scalar>(alpha: &KForm<T>) -> Result<KForm<T>> {
    if alpha.degree >= DIM {
        return Err(GeometryError::WrongDegree {
            expected: "degree <= 3",
            found: alpha.degree,
        });
    }
    let mut out = KForm::zero(alpha.degree + 1);
    for (&index, f) in &alpha.components {
        let mut df = KForm::zero(1);
        for i in 0..DIM {
            df.add_component(
                MultiIndex::from_indices(&[i]).expect("in range"),
                f.frame_derivative(i)?,
            );
        }
        let monomial = KForm::basis(&index.indices());
        out = out.add(&wedge(&df, &monomial)?)?;
        let structural = monomial_derivative::<T>(&index.indices()).multiply(f);
        out = out.add(&structural)?;
    }
    Ok(out)
}

/// Coordinate-coframe oracle for `d`: rewrite in `(dθ, dφ, dx, dy)` using
/// `e₂* = sinθ dφ`, differentiate componentwise, rewrite back.
pub fn exterior_derivative_coordinate_oracle<T: Scalar>(alpha: &KForm<T>) -> Result<KForm<T>> {
    if alpha.degree >= DIM {
        return Err(GeometryError::WrongDegree {
            expected: "degree <= 3",
            found: alpha.degree,
        });
    }
    let sin_theta = ScalarField::Analytic(Expr::sin_theta());
    let to_coordinate = |m: MultiIndex, f: &ScalarField<T>| {
        if m.contains(1) {
            f.clone() * sin_theta.clone()
        } else {
            f.clone()
        }
    };
    let mut coordinate: BTreeMap<MultiIndex, ScalarField<T>> = BTreeMap::new();
    for (&m, f) in &alpha.components {
        let g = to_coordinate(m, f);
        for (mu, coord) in Coord::ALL.iter().enumerate() {
            let dg = g.partial(*coord);
            if dg.is_zero() {
                continue;
            }
            let single = MultiIndex::from_indices(&[mu]).expect("in range");
            let sign = single.wedge_sign(m);
            if sign == 0 {
                continue;
            }
            let term = if sign > 0 { dg } else { -dg };
            let key = single.union(m);
            let merged = match coordinate.remove(&key) {
                Some(existing) => existing + term,
                None => term,
            };
            coordinate.insert(key, merged);
        }
    }
    let mut out = KForm::zero(alpha.degree + 1);
    for (m, g) in coordinate {
        let f = if m.contains(1) {
            g.divide(sin_theta.clone())
        } else {
            g
        };
        out.add_component(m, f);
    }
    Ok(out)
}

/// Hodge star for the orthonormal coframe, orientation `e₁*∧e₂*∧e₃*∧e₄*`:
/// `*e_I = s e_J` with `e_I ∧ e_J = s · vol`.
pub fn hodge_star<T: Scalar>(alpha: &KForm<T>) -> KForm<T> {
    let mut out = KForm::zero(DIM - alpha.degree);
    for (&m, f) in &alpha.components {
        let comp = m.complement();
        let f = if m.wedge_sign(comp) > 0 {
            f.clone()
        } else {
            -f.clone()
        };
        out.add_component(comp, f);
    }
    out
}

/// `δ = −*d*`.
pub fn codifferential<T: Scalar>(alpha: &KForm<T>) -> Result<KForm<T>> {
    if alpha.degree == 0 {
        return Err(GeometryError::WrongDegree {
            expected: "degree >= 1",
            found: 0,
        });
    }
    Ok(hodge_star(&exterior_derivative(&hodge_star(alpha))?).neg())
}

/// Same as [`codifferential`] but routed through the coordinate oracle for `d`.
pub fn codifferential_oracle<T: Scalar>(alpha: &KForm<T>) -> Result<KForm<T>> {
    if alpha.degree == 0 {
        return Err(GeometryError::WrongDegree {
            expected: "degree >= 1",
            found: 0,
        });
    }
    Ok(hodge_star(&exterior_derivative_coordinate_oracle(&hodge_star(alpha))?).neg())
}

/// Forms used to exercise `d`: every coframe monomial of degree 1..=3, a few
/// 0-forms and θ-weighted variants.
pub fn test_form_library<T: Scalar>() -> Vec<(String, KForm<T>)> {
    let mut out = Vec::new();
    let cot = || ScalarField::Analytic(Expr::<T>::cot_theta());
    let sin = || ScalarField::Analytic(Expr::<T>::sin_theta());
    let cos = || ScalarField::Analytic(Expr::<T>::cos_theta());
    let two_pi = T::PI() + T::PI();
    let wave_x = || ScalarField::Analytic(Expr::sin(Expr::constant(two_pi) * Expr::var(Coord::X)));
    let cos_phi = || ScalarField::Analytic(Expr::cos(Expr::var(Coord::Phi)));

    out.push(("cot".to_string(), KForm::scalar(cot())));
    out.push(("sin*cos_phi".to_string(), KForm::scalar(sin() * cos_phi())));
    out.push(("wave_x*cos".to_string(), KForm::scalar(wave_x() * cos())));
    for k in 1..DIM {
        for m in MultiIndex::of_degree(k) {
            out.push((m.to_string(), KForm::basis(&m.indices())));
        }
    }
    let weighted: Vec<(&str, Vec<usize>, ScalarField<T>)> = vec![
        ("cot e2*", vec![1], cot()),
        ("sin e1*", vec![0], sin()),
        ("cos_phi e2*", vec![1], cos_phi()),
        ("sin e1^e3*", vec![0, 2], sin()),
        ("cot e2^e4*", vec![1, 3], cot()),
        ("wave_x e2^e4*", vec![1, 3], wave_x()),
        ("cot e2^e3^e4*", vec![1, 2, 3], cot()),
        ("sin*cos_phi e1^e2^e4*", vec![0, 1, 3], sin() * cos_phi()),
    ];
    for (name, idx, f) in weighted {
        out.push((
            name.to_string(),
            KForm::monomial(&idx, f).expect("distinct"),
        ));
    }
    out
}
