//! The Bohr-Sommerfeld basis and the ladder algebra acting on it.
//!
//! Basis vectors are `σⁿ⁰` for the oscillation tori `n = 0..=N` and `σₘ±` for
//! the rotation tori `m = M..=m_max` on each branch. Operators are sparse
//! column maps and may carry exact integer entries, so commutation relations
//! can be checked without rounding.

use crate::classical::EnergyRegion;
use crate::error::{Error, Result};
use crate::spectrum::{first_rotation_number, Spectrum};
use num_complex::{Complex, Complex64};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Which family of tori a basis vector lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sector {
    Zero,
    Plus,
    Minus,
}

/// One of the two rotation branches, `p > 0` or `p < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn opposite(self) -> Self {
        match self {
            Self::Plus => Self::Minus,
            Self::Minus => Self::Plus,
        }
    }

    pub fn sector(self) -> Sector {
        match self {
            Self::Plus => Sector::Plus,
            Self::Minus => Sector::Minus,
        }
    }

    pub fn region(self) -> EnergyRegion {
        match self {
            Self::Plus => EnergyRegion::RotationPlus,
            Self::Minus => EnergyRegion::RotationMinus,
        }
    }
}

/// Index of a Bohr-Sommerfeld basis vector. Only a [`Lattice`] hands these
/// out, so every index lies inside its lattice bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BasisIndex {
    sector: Sector,
    quantum: u64,
}

impl BasisIndex {
    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn quantum(&self) -> u64 {
        self.quantum
    }

    /// The rotation branch of this index, if any.
    pub fn side(&self) -> Option<Side> {
        match self.sector {
            Sector::Zero => None,
            Sector::Plus => Some(Side::Plus),
            Sector::Minus => Some(Side::Minus),
        }
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.sector {
            Sector::Zero => "zero",
            Sector::Plus => "plus",
            Sector::Minus => "minus",
        };
        write!(f, "{tag}:{}", self.quantum)
    }
}

/// Bounds of the truncated basis: `N`, `M` and `m_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Lattice {
    top: u64,
    first_rotation: u64,
    m_max: u64,
}

impl Lattice {
    /// Lattice with top oscillation number `top` and rotation numbers up to `m_max`.
    pub fn new(top: u64, m_max: u64) -> Result<Self> {
        let first_rotation = first_rotation_number(top);
        if m_max < first_rotation {
            return Err(Error::InvalidArgument(format!(
                "m_max = {m_max} is below the first rotation number {first_rotation}"
            )));
        }
        Ok(Self {
            top,
            first_rotation,
            m_max,
        })
    }

    pub fn from_spectrum(spectrum: &Spectrum) -> Self {
        Self {
            top: spectrum.top(),
            first_rotation: spectrum.first_rotation(),
            m_max: spectrum.m_max(),
        }
    }

    pub fn top(&self) -> u64 {
        self.top
    }

    pub fn first_rotation(&self) -> u64 {
        self.first_rotation
    }

    pub fn m_max(&self) -> u64 {
        self.m_max
    }

    pub fn zero(&self, n: u64) -> Option<BasisIndex> {
        (n <= self.top).then_some(BasisIndex {
            sector: Sector::Zero,
            quantum: n,
        })
    }

    pub fn rotation(&self, side: Side, m: u64) -> Option<BasisIndex> {
        (self.first_rotation..=self.m_max).contains(&m).then_some(BasisIndex {
            sector: side.sector(),
            quantum: m,
        })
    }

    pub fn plus(&self, m: u64) -> Option<BasisIndex> {
        self.rotation(Side::Plus, m)
    }

    pub fn minus(&self, m: u64) -> Option<BasisIndex> {
        self.rotation(Side::Minus, m)
    }

    pub fn contains(&self, idx: BasisIndex) -> bool {
        match idx.side() {
            None => idx.quantum <= self.top,
            Some(_) => (self.first_rotation..=self.m_max).contains(&idx.quantum),
        }
    }

    /// All basis indices: zero sector, then plus, then minus.
    pub fn basis(&self) -> Vec<BasisIndex> {
        let mut out: Vec<BasisIndex> = (0..=self.top).filter_map(|n| self.zero(n)).collect();
        for side in [Side::Plus, Side::Minus] {
            out.extend((self.first_rotation..=self.m_max).filter_map(|m| self.rotation(side, m)));
        }
        out
    }

    pub fn dimension(&self) -> usize {
        (self.top + 1) as usize + 2 * (self.m_max + 1 - self.first_rotation) as usize
    }

    /// Position of `idx` in [`Lattice::basis`] order.
    pub fn position(&self, idx: BasisIndex) -> usize {
        let rotations = (self.m_max + 1 - self.first_rotation) as usize;
        match idx.sector {
            Sector::Zero => idx.quantum as usize,
            Sector::Plus => (self.top + 1) as usize + (idx.quantum - self.first_rotation) as usize,
            Sector::Minus => {
                (self.top + 1) as usize + rotations + (idx.quantum - self.first_rotation) as usize
            }
        }
    }
}

/// Coefficient field for states and operators.
pub trait Scalar:
    Copy + PartialEq + fmt::Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn conj(self) -> Self;
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn conj(self) -> Self {
        Complex::conj(&self)
    }
}

impl Scalar for Complex<i64> {
    fn zero() -> Self {
        Complex::new(0, 0)
    }
    fn one() -> Self {
        Complex::new(1, 0)
    }
    fn conj(self) -> Self {
        Complex::conj(&self)
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn conj(self) -> Self {
        self
    }
}

impl Scalar for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn conj(self) -> Self {
        self
    }
}

/// A finite linear combination of basis vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState<T: Scalar = Complex64> {
    coefficients: BTreeMap<BasisIndex, T>,
}

impl<T: Scalar> Default for QuantumState<T> {
    fn default() -> Self {
        Self {
            coefficients: BTreeMap::new(),
        }
    }
}

impl<T: Scalar> QuantumState<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(idx: BasisIndex) -> Self {
        Self::from_pairs([(idx, T::one())])
    }

    /// Builds a state, summing repeated indices and dropping zeros.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (BasisIndex, T)>) -> Self {
        let mut s = Self::default();
        for (idx, c) in pairs {
            s.add_term(idx, c);
        }
        s
    }

    fn add_term(&mut self, idx: BasisIndex, c: T) {
        let entry = self.coefficients.entry(idx).or_insert_with(T::zero);
        *entry = *entry + c;
        if *entry == T::zero() {
            self.coefficients.remove(&idx);
        }
    }

    pub fn coefficient(&self, idx: BasisIndex) -> T {
        self.coefficients.get(&idx).copied().unwrap_or_else(T::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisIndex, &T)> {
        self.coefficients.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `⟨self, other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> T {
        self.coefficients
            .iter()
            .filter_map(|(idx, a)| other.coefficients.get(idx).map(|b| a.conj() * *b))
            .fold(T::zero(), |acc, v| acc + v)
    }

    /// The single basis vector this state is a multiple of, if any.
    pub fn as_single(&self) -> Option<(BasisIndex, T)> {
        let mut it = self.coefficients.iter();
        match (it.next(), it.next()) {
            (Some((idx, c)), None) => Some((*idx, *c)),
            _ => None,
        }
    }
}

/// Sparse operator on the truncated basis, stored column by column.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator<T: Scalar = Complex64> {
    lattice: Lattice,
    columns: BTreeMap<BasisIndex, Vec<(T, BasisIndex)>>,
    truncated: BTreeSet<BasisIndex>,
}

impl<T: Scalar> LinearOperator<T> {
    pub fn zero(lattice: Lattice) -> Self {
        Self {
            lattice,
            columns: BTreeMap::new(),
            truncated: BTreeSet::new(),
        }
    }

    pub fn identity(lattice: Lattice) -> Self {
        let mut op = Self::zero(lattice);
        for idx in lattice.basis() {
            op.push(idx, T::one(), idx);
        }
        op
    }

    /// Builds an operator from `(row, column, coefficient)` entries.
    pub fn from_entries(lattice: Lattice, entries: impl IntoIterator<Item = (BasisIndex, BasisIndex, T)>) -> Self {
        let mut op = Self::zero(lattice);
        for (row, col, c) in entries {
            op.push(col, c, row);
        }
        op
    }

    fn push(&mut self, col: BasisIndex, c: T, row: BasisIndex) {
        if c == T::zero() {
            return;
        }
        let column = self.columns.entry(col).or_default();
        if let Some(slot) = column.iter_mut().find(|(_, r)| *r == row) {
            slot.0 = slot.0 + c;
        } else {
            column.push((c, row));
        }
        column.retain(|(v, _)| *v != T::zero());
        column.sort_by_key(|(_, r)| *r);
        if column.is_empty() {
            self.columns.remove(&col);
        }
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    /// Columns whose image left the carrier and was cut to zero.
    pub fn truncated(&self) -> &BTreeSet<BasisIndex> {
        &self.truncated
    }

    pub fn is_truncated(&self, idx: BasisIndex) -> bool {
        self.truncated.contains(&idx)
    }

    pub fn apply_basis(&self, idx: BasisIndex) -> QuantumState<T> {
        QuantumState::from_pairs(
            self.columns
                .get(&idx)
                .into_iter()
                .flatten()
                .map(|&(c, row)| (row, c)),
        )
    }

    pub fn apply(&self, state: &QuantumState<T>) -> QuantumState<T> {
        let mut out = QuantumState::zero();
        for (idx, a) in state.iter() {
            for &(c, row) in self.columns.get(idx).into_iter().flatten() {
                out.add_term(row, c * *a);
            }
        }
        out
    }

    /// Matrix element `⟨row| A |col⟩`.
    pub fn entry(&self, row: BasisIndex, col: BasisIndex) -> T {
        self.columns
            .get(&col)
            .and_then(|c| c.iter().find(|(_, r)| *r == row))
            .map(|(v, _)| *v)
            .unwrap_or_else(T::zero)
    }

    /// All nonzero entries as `(row, column, coefficient)`.
    pub fn entries(&self) -> Vec<(BasisIndex, BasisIndex, T)> {
        self.columns
            .iter()
            .flat_map(|(col, column)| column.iter().map(move |&(c, row)| (row, *col, c)))
            .collect()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.lattice);
        for (col, column) in &other.columns {
            for &(c, mid) in column {
                for &(d, row) in self.columns.get(&mid).into_iter().flatten() {
                    out.push(*col, d * c, row);
                }
            }
        }
        out.truncated = other.truncated.clone();
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (row, col, c) in other.entries() {
            out.push(col, c, row);
        }
        out.truncated.extend(other.truncated.iter().copied());
        out
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = Self::zero(self.lattice);
        for (row, col, c) in self.entries() {
            out.push(col, s * c, row);
        }
        out.truncated = self.truncated.clone();
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-T::one()))
    }

    /// Entries as `(row position, column position, coefficient)`.
    pub fn triplets(&self) -> Vec<(usize, usize, T)> {
        self.entries()
            .into_iter()
            .map(|(row, col, c)| (self.lattice.position(row), self.lattice.position(col), c))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> LinearOperator<U> {
        let mut out = LinearOperator::zero(self.lattice);
        for (row, col, c) in self.entries() {
            out.push(col, f(c), row);
        }
        out.truncated = self.truncated.clone();
        out
    }
}

impl LinearOperator<Complex64> {
    /// Exact integer copy of this operator, if every entry is a Gaussian integer.
    pub fn to_integer(&self) -> Option<LinearOperator<Complex<i64>>> {
        let integral = self.entries().iter().all(|(_, _, c)| {
            c.re.fract() == 0.0 && c.im.fract() == 0.0 && c.re.abs() < 9e15 && c.im.abs() < 9e15
        });
        integral.then(|| self.map(|c| Complex::new(c.re as i64, c.im as i64)))
    }
}

/// `AB - BA`.
pub fn commutator<T: Scalar>(a: &LinearOperator<T>, b: &LinearOperator<T>) -> LinearOperator<T> {
    let mut out = a.compose(b).sub(&b.compose(a));
    out.truncated = a.truncated.union(&b.truncated).copied().collect();
    out
}

/// Conjugate transpose in the orthonormal Bohr-Sommerfeld basis.
pub fn adjoint<T: Scalar>(a: &LinearOperator<T>) -> LinearOperator<T> {
    LinearOperator::from_entries(a.lattice, a.entries().into_iter().map(|(row, col, c)| (col, row, c.conj())))
}

/// `Q_f` with `Q_f σ = values(σ) σ`; every lattice index needs a value.
pub fn diagonal_operator<T: Scalar>(lattice: Lattice, values: &BTreeMap<BasisIndex, T>) -> Result<LinearOperator<T>> {
    let mut op = LinearOperator::zero(lattice);
    for idx in lattice.basis() {
        let v = values.get(&idx).ok_or(Error::MissingIndex(idx))?;
        op.push(idx, *v, idx);
    }
    Ok(op)
}

/// `Σ ⟨ψ, A φ⟩` style pairing helper: `⟨a, op b⟩`.
pub fn pairing<T: Scalar>(a: &QuantumState<T>, op: &LinearOperator<T>, b: &QuantumState<T>) -> T {
    a.inner(&op.apply(b))
}

/// Smooth step equal to 0 for `x ≤ 0`, 1 for `x ≥ 1`, and flat to all orders at both ends.
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / x).exp();
    let b = (-1.0 / (1.0 - x)).exp();
    a / (a + b)
}

/// Energy cut-offs turning `e^{∓iϑ}` into globally smooth functions.
///
/// `r` vanishes to infinite order at `e = 0` and equals 1 from the first
/// excited level on. `ρ±` equal 1 below `2 - ε`, vanish at the separatrix and
/// equal 1 (own branch) or 0 (other branch) above `2 + ε`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmoothingEnvelope {
    epsilon: f64,
    r_width: f64,
    energies: BTreeMap<BasisIndex, f64>,
}

impl SmoothingEnvelope {
    pub fn from_spectrum(spectrum: &Spectrum) -> Self {
        let lattice = Lattice::from_spectrum(spectrum);
        let mut energies = BTreeMap::new();
        for level in spectrum.levels() {
            let idx = match level.region {
                EnergyRegion::RotationPlus => lattice.plus(level.n),
                EnergyRegion::RotationMinus => lattice.minus(level.n),
                _ => lattice.zero(level.n),
            };
            if let Some(idx) = idx {
                energies.insert(idx, level.energy);
            }
        }
        let epsilon = spectrum.epsilon_gap();
        let first_excited = spectrum.oscillation_level(1).map(|l| l.energy).unwrap_or(2.0 - epsilon);
        Self {
            epsilon,
            r_width: first_excited.min(2.0 - epsilon),
            energies,
        }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// The cut-off `r(e)`.
    pub fn r(&self, e: f64) -> f64 {
        smooth_step(e / self.r_width)
    }

    /// The cut-off `ρ_side` at energy `e` on the branch with momentum sign of `p`.
    pub fn rho(&self, side: Side, e: f64, p: f64) -> f64 {
        if e < 2.0 {
            return smooth_step((2.0 - e) / self.epsilon);
        }
        let own = match side {
            Side::Plus => p >= 0.0,
            Side::Minus => p < 0.0,
        };
        if own {
            smooth_step((e - 2.0) / self.epsilon)
        } else {
            0.0
        }
    }

    /// Energy of the torus carrying `idx`.
    pub fn energy(&self, idx: BasisIndex) -> Option<f64> {
        self.energies.get(&idx).copied()
    }

    /// `r` at every level, keyed by basis index.
    pub fn r_at_levels(&self) -> BTreeMap<BasisIndex, f64> {
        self.energies.iter().map(|(idx, e)| (*idx, self.r(*e))).collect()
    }

    /// `R_side = ρ_side · r` on the torus carrying `idx`.
    pub fn weight(&self, side: Side, idx: BasisIndex) -> f64 {
        let Some(e) = self.energy(idx) else { return 0.0 };
        let p = match idx.sector {
            Sector::Minus => -1.0,
            _ => 1.0,
        };
        self.rho(side, e, p) * self.r(e)
    }
}

/// The globalized action `A_side`: `nħ` on `σⁿ⁰`, `2mħ` on the own rotation
/// branch and 0 on the other branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExtendedAction {
    pub side: Side,
}

impl ExtendedAction {
    pub fn new(side: Side) -> Self {
        Self { side }
    }

    /// Eigenvalue on `idx` in units of ħ.
    pub fn quanta(&self, idx: BasisIndex) -> i64 {
        match idx.side() {
            None => idx.quantum as i64,
            Some(s) if s == self.side => 2 * idx.quantum as i64,
            Some(_) => 0,
        }
    }

    pub fn value(&self, idx: BasisIndex, hbar: f64) -> f64 {
        self.quanta(idx) as f64 * hbar
    }

    /// `Q_{A_side}` with floating entries.
    pub fn operator(&self, lattice: Lattice, hbar: f64) -> LinearOperator<Complex64> {
        let values = lattice
            .basis()
            .into_iter()
            .map(|idx| (idx, Complex64::new(self.value(idx, hbar), 0.0)))
            .collect();
        diagonal_operator(lattice, &values).expect("values cover the lattice")
    }

    /// `Q_{A_side} / ħ` with exact integer entries.
    pub fn quanta_operator(&self, lattice: Lattice) -> LinearOperator<Complex<i64>> {
        let values = lattice
            .basis()
            .into_iter()
            .map(|idx| (idx, Complex::new(self.quanta(idx), 0)))
            .collect();
        diagonal_operator(lattice, &values).expect("values cover the lattice")
    }
}

/// Image of `idx` under the lowering map of `side`, ignoring weights.
fn lowered(lattice: &Lattice, side: Side, idx: BasisIndex) -> Option<BasisIndex> {
    match idx.side() {
        None => idx.quantum.checked_sub(1).and_then(|n| lattice.zero(n)),
        Some(s) if s == side => {
            if idx.quantum > lattice.first_rotation {
                lattice.rotation(side, idx.quantum - 1)
            } else {
                lattice.zero(lattice.top)
            }
        }
        Some(_) => None,
    }
}

/// Lowering operator `Q_{R e^{-iΘ}}` of `side`.
///
/// Moves `σⁿ⁰ → σⁿ⁻¹⁰`, `σₘ → σₘ₋₁` on its own branch, joins the branch to the
/// oscillation lattice by `σ_M → σ_N⁰`, and kills `σ₀⁰` and the other branch.
///
/// ```
/// use pendulum_bsh::operators::{lowering, Lattice, QuantumState, Side, SmoothingEnvelope};
/// use pendulum_bsh::spectrum::build_spectrum;
/// let spectrum = build_spectrum(0.4, 8).unwrap();
/// let lattice = Lattice::from_spectrum(&spectrum);
/// let a = lowering(Side::Plus, &spectrum, &SmoothingEnvelope::from_spectrum(&spectrum));
/// let out = a.apply_basis(lattice.plus(4).unwrap());
/// assert_eq!(out, QuantumState::basis(lattice.zero(6).unwrap()));
/// ```
pub fn lowering(side: Side, spectrum: &Spectrum, envelope: &SmoothingEnvelope) -> LinearOperator<Complex64> {
    let lattice = Lattice::from_spectrum(spectrum);
    let mut op = LinearOperator::zero(lattice);
    for idx in lattice.basis() {
        if let Some(target) = lowered(&lattice, side, idx) {
            op.push(idx, Complex64::new(envelope.weight(side, idx), 0.0), target);
        }
    }
    op
}

/// Raising operator `Q_{R e^{iΘ}}` of `side`, the adjoint of [`lowering`].
/// The top rotation vector of `side` would leave the carrier; it maps to zero
/// and is recorded in [`LinearOperator::truncated`].
pub fn raising(side: Side, spectrum: &Spectrum, envelope: &SmoothingEnvelope) -> LinearOperator<Complex64> {
    let lattice = Lattice::from_spectrum(spectrum);
    let mut op = adjoint(&lowering(side, spectrum, envelope));
    if let Some(top) = lattice.rotation(side, lattice.m_max) {
        op.truncated.insert(top);
    }
    op
}

/// The swap `Q_ζ`: zero on the oscillation sector, `σₘ⁺ ↔ σₘ⁻` on rotations.
pub fn swap_operator(spectrum: &Spectrum) -> LinearOperator<Complex64> {
    let lattice = Lattice::from_spectrum(spectrum);
    let mut op = LinearOperator::zero(lattice);
    for m in lattice.first_rotation..=lattice.m_max {
        let (p, q) = (lattice.plus(m).unwrap(), lattice.minus(m).unwrap());
        op.push(p, Complex64::new(1.0, 0.0), q);
        op.push(q, Complex64::new(1.0, 0.0), p);
    }
    op
}

/// Generators of the ladder algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Generator {
    RaisePlus,
    RaiseMinus,
    LowerPlus,
    LowerMinus,
    Swap,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::RaisePlus => "b+",
            Self::RaiseMinus => "b-",
            Self::LowerPlus => "a+",
            Self::LowerMinus => "a-",
            Self::Swap => "Q_zeta",
        })
    }
}

/// The full operator set for one spectrum.
#[derive(Debug, Clone)]
pub struct LadderAlgebra {
    pub lattice: Lattice,
    pub hbar: f64,
    pub envelope: SmoothingEnvelope,
    pub lower_plus: LinearOperator,
    pub lower_minus: LinearOperator,
    pub raise_plus: LinearOperator,
    pub raise_minus: LinearOperator,
    pub swap: LinearOperator,
}

impl LadderAlgebra {
    pub fn new(spectrum: &Spectrum) -> Self {
        let envelope = SmoothingEnvelope::from_spectrum(spectrum);
        Self {
            lattice: Lattice::from_spectrum(spectrum),
            hbar: spectrum.hbar(),
            lower_plus: lowering(Side::Plus, spectrum, &envelope),
            lower_minus: lowering(Side::Minus, spectrum, &envelope),
            raise_plus: raising(Side::Plus, spectrum, &envelope),
            raise_minus: raising(Side::Minus, spectrum, &envelope),
            swap: swap_operator(spectrum),
            envelope,
        }
    }

    pub fn lowering(&self, side: Side) -> &LinearOperator {
        match side {
            Side::Plus => &self.lower_plus,
            Side::Minus => &self.lower_minus,
        }
    }

    pub fn raising(&self, side: Side) -> &LinearOperator {
        match side {
            Side::Plus => &self.raise_plus,
            Side::Minus => &self.raise_minus,
        }
    }

    pub fn generator(&self, g: Generator) -> &LinearOperator {
        match g {
            Generator::RaisePlus => &self.raise_plus,
            Generator::RaiseMinus => &self.raise_minus,
            Generator::LowerPlus => &self.lower_plus,
            Generator::LowerMinus => &self.lower_minus,
            Generator::Swap => &self.swap,
        }
    }

    /// Shortest word of generators (applied left to right) taking `σ_from` to
    /// a nonzero multiple of `σ_to`.
    pub fn transitivity_witness(&self, from: BasisIndex, to: BasisIndex) -> Result<Vec<Generator>> {
        transitivity_witness(self, from, to)
    }
}

/// Breadth-first search for a generator word from `from` to `to`.
///
/// The returned word is in application order: the first generator acts first.
pub fn transitivity_witness(algebra: &LadderAlgebra, from: BasisIndex, to: BasisIndex) -> Result<Vec<Generator>> {
    const ORDER: [Generator; 5] = [
        Generator::RaisePlus,
        Generator::RaiseMinus,
        Generator::LowerPlus,
        Generator::LowerMinus,
        Generator::Swap,
    ];
    let mut parent: BTreeMap<BasisIndex, (BasisIndex, Generator)> = BTreeMap::new();
    let mut seen = BTreeSet::from([from]);
    let mut queue = VecDeque::from([from]);
    while let Some(idx) = queue.pop_front() {
        if idx == to {
            let mut word = Vec::new();
            let mut cur = to;
            while let Some(&(prev, g)) = parent.get(&cur) {
                word.push(g);
                cur = prev;
            }
            word.reverse();
            return Ok(word);
        }
        for g in ORDER {
            if let Some((next, _)) = algebra.generator(g).apply_basis(idx).as_single() {
                if seen.insert(next) {
                    parent.insert(next, (idx, g));
                    queue.push_back(next);
                }
            }
        }
    }
    Err(Error::SearchExhausted { from, to })
}
