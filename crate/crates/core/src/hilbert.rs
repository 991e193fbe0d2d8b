//! Truncated Hilbert space of the two resonator modes and the V-type atom, and
//! the sparse operator algebra built on it.
//!
//! Tensor factors are always ordered (mode CW, mode CCW, atom). A basis state
//! `|n_cw, n_ccw, level⟩` has flat index `(n_cw·(N+1) + n_ccw)·3 + level`
//! with `N` the Fock cutoff.
//!
//! The single-direction reduced space used by [`crate::model`] has factors
//! (driven mode, two-level atom) where atom index 1 stands for the excited
//! level that the driven mode couples to.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;
use crate::steadystate::DensityMatrix;
use crate::C64;

/// Resonator whispering-gallery mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Cw,
    Ccw,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Cw => "CW",
            Mode::Ccw => "CCW",
        }
    }

    pub fn other(self) -> Mode {
        match self {
            Mode::Cw => Mode::Ccw,
            Mode::Ccw => Mode::Cw,
        }
    }

    /// Excited atomic level driven by this mode's evanescent polarisation:
    /// CCW (σ+) drives |0⟩↔|1⟩, CW (σ−) drives |0⟩↔|2⟩.
    pub fn excited_level(self) -> Level {
        match self {
            Mode::Ccw => Level::E1,
            Mode::Cw => Level::E2,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cw" => Ok(Mode::Cw),
            "ccw" => Ok(Mode::Ccw),
            other => Err(Error::InvalidParams {
                name: "mode",
                reason: format!("expected cw or ccw, got `{other}`"),
            }),
        }
    }
}

/// Atomic level of the V-type atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Level {
    /// Ground state |0⟩.
    G = 0,
    /// |1⟩, coupled to the CCW mode.
    E1 = 1,
    /// |2⟩, coupled to the CW mode.
    E2 = 2,
}

impl TryFrom<usize> for Level {
    type Error = Error;

    fn try_from(value: usize) -> Result<Self> {
        match value {
            0 => Ok(Level::G),
            1 => Ok(Level::E1),
            2 => Ok(Level::E2),
            other => Err(Error::InvalidLevel(other)),
        }
    }
}

/// Shape of the truncated space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpaceLayout {
    fock_cutoff: usize,
    reduced: Option<Mode>,
}

/// Validated full layout `(CW, CCW, atom)` with Fock states `0..=fock_cutoff`.
pub fn make_layout(fock_cutoff: usize) -> Result<SpaceLayout> {
    SpaceLayout::full(fock_cutoff)
}

impl SpaceLayout {
    pub fn full(fock_cutoff: usize) -> Result<Self> {
        if fock_cutoff == 0 {
            return Err(Error::InvalidCutoff(fock_cutoff));
        }
        Ok(Self {
            fock_cutoff,
            reduced: None,
        })
    }

    /// One mode ⊗ {ground, excited(mode)}.
    pub fn reduced(fock_cutoff: usize, mode: Mode) -> Result<Self> {
        if fock_cutoff == 0 {
            return Err(Error::InvalidCutoff(fock_cutoff));
        }
        Ok(Self {
            fock_cutoff,
            reduced: Some(mode),
        })
    }

    pub fn fock_cutoff(&self) -> usize {
        self.fock_cutoff
    }

    pub fn reduced_mode(&self) -> Option<Mode> {
        self.reduced
    }

    pub fn atom_levels(&self) -> usize {
        if self.reduced.is_some() {
            2
        } else {
            3
        }
    }

    /// Subsystem dimensions in tensor order.
    pub fn factors(&self) -> Vec<usize> {
        let m = self.fock_cutoff + 1;
        match self.reduced {
            None => vec![m, m, 3],
            Some(_) => vec![m, 2],
        }
    }

    pub fn total_dim(&self) -> usize {
        self.factors().iter().product()
    }

    fn mode_factor(&self, mode: Mode) -> Result<usize> {
        match (self.reduced, mode) {
            (None, Mode::Cw) => Ok(0),
            (None, Mode::Ccw) => Ok(1),
            (Some(m), q) if m == q => Ok(0),
            (Some(_), q) => Err(Error::ModeNotInLayout(q.name())),
        }
    }

    fn atom_factor(&self) -> usize {
        if self.reduced.is_some() {
            1
        } else {
            2
        }
    }

    /// Local index of `level` on the atom factor.
    fn atom_index(&self, level: Level) -> Result<usize> {
        match self.reduced {
            None => Ok(level as usize),
            Some(m) => {
                if level == Level::G {
                    Ok(0)
                } else if level == m.excited_level() {
                    Ok(1)
                } else {
                    Err(Error::InvalidLevel(level as usize))
                }
            }
        }
    }

    /// Flat basis index of `|n_cw, n_ccw, level⟩` (full layout) or
    /// `|n, level⟩` (reduced layout, where the photon number of the mode not in
    /// the layout must be zero).
    pub fn basis_index(&self, n_cw: usize, n_ccw: usize, level: Level) -> Result<usize> {
        let m = self.fock_cutoff + 1;
        if n_cw >= m || n_ccw >= m {
            return Err(Error::InvalidParams {
                name: "photon number",
                reason: format!("({n_cw}, {n_ccw}) exceeds cutoff {}", self.fock_cutoff),
            });
        }
        let a = self.atom_index(level)?;
        match self.reduced {
            None => Ok((n_cw * m + n_ccw) * 3 + a),
            Some(mode) => {
                let (n, other) = match mode {
                    Mode::Cw => (n_cw, n_ccw),
                    Mode::Ccw => (n_ccw, n_cw),
                };
                if other != 0 {
                    return Err(Error::ModeNotInLayout(mode.other().name()));
                }
                Ok(n * 2 + a)
            }
        }
    }

    /// Embeds a single-factor operator, identity on the other factors.
    fn embed(&self, factor: usize, local: &CsrMatrix) -> CsrMatrix {
        let dims = self.factors();
        debug_assert_eq!(local.nrows(), dims[factor]);
        dims.iter()
            .enumerate()
            .map(|(k, &d)| {
                if k == factor {
                    local.clone()
                } else {
                    CsrMatrix::identity(d)
                }
            })
            .reduce(|acc, m| acc.kron(&m))
            .expect("at least one factor")
    }
}

impl fmt::Display for SpaceLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.reduced {
            None => write!(f, "full(cutoff={}, dim={})", self.fock_cutoff, self.total_dim()),
            Some(m) => write!(
                f,
                "reduced[{m}](cutoff={}, dim={})",
                self.fock_cutoff,
                self.total_dim()
            ),
        }
    }
}

/// Complex operator on a [`SpaceLayout`], stored sparse.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    layout: SpaceLayout,
    matrix: CsrMatrix,
}

impl Operator {
    pub fn from_matrix(layout: SpaceLayout, matrix: CsrMatrix) -> Self {
        let d = layout.total_dim();
        assert!(
            matrix.nrows() == d && matrix.ncols() == d,
            "operator is {}×{} but layout {layout} has dimension {d}",
            matrix.nrows(),
            matrix.ncols()
        );
        Self { layout, matrix }
    }

    pub fn zero(layout: SpaceLayout) -> Self {
        let d = layout.total_dim();
        Self::from_matrix(layout, CsrMatrix::zeros(d, d))
    }

    pub fn identity(layout: SpaceLayout) -> Self {
        Self::from_matrix(layout, CsrMatrix::identity(layout.total_dim()))
    }

    pub fn layout(&self) -> SpaceLayout {
        self.layout
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        self.matrix.to_dense()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.matrix.get(row, col)
    }

    fn check(&self, other: &Operator) -> Result<()> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch(
                self.layout.to_string(),
                other.layout.to_string(),
            ));
        }
        Ok(())
    }

    pub fn adjoint(&self) -> Operator {
        Self::from_matrix(self.layout, self.matrix.adjoint())
    }

    /// Operator product `self · other`.
    pub fn compose(&self, other: &Operator) -> Result<Operator> {
        self.check(other)?;
        Ok(Self::from_matrix(self.layout, self.matrix.matmul(&other.matrix)))
    }

    /// `self + c · other`.
    pub fn add_scaled(&self, c: C64, other: &Operator) -> Result<Operator> {
        self.check(other)?;
        Ok(Self::from_matrix(self.layout, self.matrix.add_scaled(c, &other.matrix)))
    }

    pub fn scale(&self, c: C64) -> Operator {
        Self::from_matrix(self.layout, self.matrix.scale(c))
    }

    pub fn commutator(&self, other: &Operator) -> Result<Operator> {
        let ab = self.compose(other)?;
        let ba = other.compose(self)?;
        ab.add_scaled(C64::new(-1.0, 0.0), &ba)
    }

    /// `max |A − A†|`.
    pub fn hermiticity_error(&self) -> f64 {
        self.matrix
            .add_scaled(C64::new(-1.0, 0.0), &self.matrix.adjoint())
            .max_abs()
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.max_abs()
    }

    /// `trace(ρ · A)`.
    pub fn expectation(&self, rho: &DensityMatrix) -> Result<C64> {
        expectation(rho, self)
    }
}

/// Truncated lowering operator of `mode`, identity elsewhere.
pub fn annihilator(layout: &SpaceLayout, mode: Mode) -> Result<Operator> {
    let factor = layout.mode_factor(mode)?;
    let m = layout.fock_cutoff() + 1;
    let local = CsrMatrix::from_triplets(
        m,
        m,
        (1..m).map(|n| (n - 1, n, C64::new((n as f64).sqrt(), 0.0))),
    );
    Ok(Operator::from_matrix(*layout, layout.embed(factor, &local)))
}

/// `a† a` for `mode`.
pub fn number(layout: &SpaceLayout, mode: Mode) -> Result<Operator> {
    let factor = layout.mode_factor(mode)?;
    let m = layout.fock_cutoff() + 1;
    let local = CsrMatrix::from_triplets(m, m, (1..m).map(|n| (n, n, C64::new(n as f64, 0.0))));
    Ok(Operator::from_matrix(*layout, layout.embed(factor, &local)))
}

/// Atomic projector / transition `σ_fi = |f⟩⟨i|` tensored with mode identities.
pub fn atom_transition(layout: &SpaceLayout, f: usize, i: usize) -> Result<Operator> {
    let lf = layout.atom_index(Level::try_from(f)?)?;
    let li = layout.atom_index(Level::try_from(i)?)?;
    let n = layout.atom_levels();
    let local = CsrMatrix::from_triplets(n, n, [(lf, li, C64::new(1.0, 0.0))]);
    Ok(Operator::from_matrix(
        *layout,
        layout.embed(layout.atom_factor(), &local),
    ))
}

/// `trace(ρ · op)`.
pub fn expectation(rho: &DensityMatrix, op: &Operator) -> Result<C64> {
    if rho.layout() != op.layout() {
        return Err(Error::LayoutMismatch(
            rho.layout().to_string(),
            op.layout().to_string(),
        ));
    }
    let m = rho.matrix();
    Ok(op.matrix().iter().map(|(i, j, v)| v * m[(j, i)]).sum())
}
