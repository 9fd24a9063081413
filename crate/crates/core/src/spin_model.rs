//! NV ground-state electron-nuclear spin Hamiltonian and derived level
//! structure.
//!
//! The electron spin S = 1 couples to the host 14N nuclear spin I = 1.
//! In frequency units (Hz) the Hamiltonian is
//!
//! ```text
//! H = D Sz^2 + ge B.S - gn B.I + A_par Sz Iz + A_perp (Sx Ix + Sy Iy)
//!     + Q (Iz^2 - 2/3)
//! ```
//!
//! Sign conventions: `gamma_e` and `gamma_n` are both positive; the nuclear
//! Zeeman term enters with an explicit minus sign. `a_par` is negative for
//! 14N so the m_I = +1 hyperfine line sits lowest in the m_S = 0 -> -1
//! manifold. With these signs the 0 -> -1 transition lies at
//! `gamma_e * B - d_zfs` at high axial field.
//!
//! Basis ordering (fixed, used everywhere): the product basis
//! |m_S> (x) |m_I> is ordered lexicographically with m_S, m_I in
//! {-1, 0, +1}, i.e. index = 3 * (m_S + 1) + (m_I + 1).

use nalgebra::{Complex, SMatrix};

use crate::{Error, Result};

pub type C64 = Complex<f64>;
/// 9x9 complex matrix over the |m_S, m_I> product basis.
pub type Matrix9 = SMatrix<C64, 9, 9>;
type Matrix3 = SMatrix<C64, 3, 3>;

/// Largest static field accepted by [`build_hamiltonian`] (T).
pub const MAX_FIELD_TESLA: f64 = 10.0;

/// Relative tolerance for the Hermiticity check.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Physical constants and spin-Hamiltonian coefficients of a single NV
/// center, all in Hz or Hz/T.
///
/// Defaults: `d_zfs` and `gamma_e` are the measured NV values (2.87 GHz and
/// 28.03 GHz/T); `a_par` is fitted to the observed 2.16 MHz hyperfine
/// splitting of the ODMR triplet. The remaining 14N couplings (`a_perp`,
/// `q_quad`, `gamma_n`) take standard literature values and are exposed for
/// adjustment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NvParameters {
    /// Zero-field splitting D (Hz).
    pub d_zfs: f64,
    /// Electron gyromagnetic ratio g_NV * mu_B / h (Hz/T).
    pub gamma_e: f64,
    /// 14N nuclear gyromagnetic ratio (Hz/T).
    pub gamma_n: f64,
    /// Axial hyperfine coupling A_par (Hz).
    pub a_par: f64,
    /// Transverse hyperfine coupling A_perp (Hz).
    pub a_perp: f64,
    /// 14N quadrupole coupling Q (Hz).
    pub q_quad: f64,
}

impl Default for NvParameters {
    fn default() -> Self {
        NvParameters {
            d_zfs: 2.87e9,
            gamma_e: 28.03e9,
            gamma_n: 3.077e6,
            a_par: -2.16e6,
            a_perp: -2.7e6,
            q_quad: -4.945e6,
        }
    }
}

impl NvParameters {
    /// Same electron parameters with every nuclear coupling zeroed; the
    /// Hamiltonian becomes block-diagonal in m_I.
    pub fn electron_only(self) -> Self {
        NvParameters {
            gamma_n: 0.0,
            a_par: 0.0,
            a_perp: 0.0,
            q_quad: 0.0,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("d_zfs", self.d_zfs),
            ("gamma_e", self.gamma_e),
            ("gamma_n", self.gamma_n),
            ("a_par", self.a_par),
            ("a_perp", self.a_perp),
            ("q_quad", self.q_quad),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(Error::invalid(format!("{name} must be finite, got {value}")));
            }
        }
        if self.d_zfs <= 0.0 {
            return Err(Error::invalid("d_zfs must be positive"));
        }
        if self.gamma_e <= 0.0 {
            return Err(Error::invalid("gamma_e must be positive"));
        }
        Ok(())
    }
}

/// Static magnetic field in spherical coordinates relative to the NV axis.
///
/// `polar_angle = 0` puts the field along the NV symmetry axis, the (111)
/// configuration where the field coincides with the optical axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticField {
    /// Field magnitude (T).
    pub magnitude: f64,
    /// Angle from the NV axis (rad).
    pub polar_angle: f64,
    /// Azimuth around the NV axis (rad).
    pub azimuth: f64,
}

impl StaticField {
    /// Field of magnitude `b` along the NV axis.
    pub fn axial(b: f64) -> Self {
        StaticField {
            magnitude: b,
            polar_angle: 0.0,
            azimuth: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.magnitude.is_finite() || !self.polar_angle.is_finite() || !self.azimuth.is_finite()
        {
            return Err(Error::invalid("field components must be finite"));
        }
        if self.magnitude < 0.0 {
            return Err(Error::invalid("field magnitude must be non-negative"));
        }
        if self.magnitude > MAX_FIELD_TESLA {
            return Err(Error::invalid(format!(
                "field magnitude {} T exceeds the {} T sanity bound",
                self.magnitude, MAX_FIELD_TESLA
            )));
        }
        Ok(())
    }

    /// Cartesian components (Bx, By, Bz) with z along the NV axis.
    pub fn vector(&self) -> [f64; 3] {
        let (st, ct) = self.polar_angle.sin_cos();
        let (sp, cp) = self.azimuth.sin_cos();
        [
            self.magnitude * st * cp,
            self.magnitude * st * sp,
            self.magnitude * ct,
        ]
    }
}

/// 9x9 Hermitian operator in the |m_S, m_I> product basis, in Hz.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinHamiltonian {
    matrix: Matrix9,
}

impl SpinHamiltonian {
    /// Wrap a raw matrix, rejecting non-Hermitian input.
    pub fn from_matrix(matrix: Matrix9) -> Result<Self> {
        let deviation = hermiticity_deviation(&matrix);
        if deviation > HERMITICITY_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(SpinHamiltonian { matrix })
    }

    pub fn matrix(&self) -> &Matrix9 {
        &self.matrix
    }
}

/// Relative deviation ||H - H^dag|| / max(||H||, 1).
fn hermiticity_deviation(m: &Matrix9) -> f64 {
    let diff = m - m.adjoint();
    diff.norm() / m.norm().max(1.0)
}

/// Basis index of |m_S, m_I>; both spins in {-1, 0, +1}.
pub fn basis_index(m_s: i8, m_i: i8) -> usize {
    debug_assert!((-1..=1).contains(&m_s) && (-1..=1).contains(&m_i));
    (3 * (m_s + 1) + (m_i + 1)) as usize
}

/// Inverse of [`basis_index`].
pub fn basis_labels(index: usize) -> (i8, i8) {
    debug_assert!(index < 9);
    ((index / 3) as i8 - 1, (index % 3) as i8 - 1)
}

/// Spin-1 operators in the basis (m = -1, 0, +1).
fn spin1_z() -> Matrix3 {
    let mut m = Matrix3::zeros();
    m[(0, 0)] = C64::new(-1.0, 0.0);
    m[(2, 2)] = C64::new(1.0, 0.0);
    m
}

fn spin1_x() -> Matrix3 {
    // <m+1|Sx|m> = sqrt(2)/2 between adjacent m.
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut m = Matrix3::zeros();
    m[(0, 1)] = s;
    m[(1, 0)] = s;
    m[(1, 2)] = s;
    m[(2, 1)] = s;
    m
}

fn spin1_y() -> Matrix3 {
    // <m+1|Sy|m> = -i/sqrt(2), <m|Sy|m+1> = +i/sqrt(2).
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = Matrix3::zeros();
    m[(1, 0)] = C64::new(0.0, -s);
    m[(0, 1)] = C64::new(0.0, s);
    m[(2, 1)] = C64::new(0.0, -s);
    m[(1, 2)] = C64::new(0.0, s);
    m
}

fn identity3() -> Matrix3 {
    Matrix3::identity()
}

/// Kronecker product (a on the electron slot, b on the nuclear slot).
fn kron(a: &Matrix3, b: &Matrix3) -> Matrix9 {
    let mut out = Matrix9::zeros();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    out[(3 * i + k, 3 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Build the ground-state Hamiltonian at the given static field, in Hz.
pub fn build_hamiltonian(params: &NvParameters, field: &StaticField) -> Result<SpinHamiltonian> {
    params.validate()?;
    field.validate()?;

    let sx = spin1_x();
    let sy = spin1_y();
    let sz = spin1_z();
    let one = identity3();
    let [bx, by, bz] = field.vector();

    let c = |x: f64| C64::new(x, 0.0);

    let mut h = kron(&(sz * sz), &one) * c(params.d_zfs);
    h += kron(&sx, &one) * c(params.gamma_e * bx);
    h += kron(&sy, &one) * c(params.gamma_e * by);
    h += kron(&sz, &one) * c(params.gamma_e * bz);
    h -= kron(&one, &sx) * c(params.gamma_n * bx);
    h -= kron(&one, &sy) * c(params.gamma_n * by);
    h -= kron(&one, &sz) * c(params.gamma_n * bz);
    h += kron(&sz, &sz) * c(params.a_par);
    h += (kron(&sx, &sx) + kron(&sy, &sy)) * c(params.a_perp);
    let iz2 = sz * sz;
    h += kron(&one, &(iz2 - one * c(2.0 / 3.0))) * c(params.q_quad);

    SpinHamiltonian::from_matrix(h)
}

/// Eigenvalues (ascending, Hz) and matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub eigenvalues: [f64; 9],
    /// Column k is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: Matrix9,
}

/// Diagonalize a spin Hamiltonian.
pub fn eigensystem(h: &SpinHamiltonian) -> Result<Eigensystem> {
    let deviation = hermiticity_deviation(&h.matrix);
    if deviation > HERMITICITY_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let se = h.matrix.symmetric_eigen();

    // nalgebra returns eigenvalues unsorted.
    let mut order: Vec<usize> = (0..9).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));

    let mut eigenvalues = [0.0; 9];
    let mut eigenvectors = Matrix9::zeros();
    for (k, &src) in order.iter().enumerate() {
        eigenvalues[k] = se.eigenvalues[src];
        eigenvectors.set_column(k, &se.eigenvectors.column(src));
    }
    Ok(Eigensystem {
        eigenvalues,
        eigenvectors,
    })
}

/// Which family of transitions to extract from an eigensystem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransitionKind {
    /// Electron spin flips: dominant character Delta m_S = +-1, Delta m_I = 0.
    Electron,
    /// Nuclear spin flips: dominant character Delta m_I = +-1, Delta m_S = 0.
    Nuclear,
}

/// Eigenstate labeled by its dominant |m_S, m_I> character.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateLabel {
    /// Position in the ascending eigenvalue ordering.
    pub index: usize,
    /// Dominant electron projection.
    pub m_s: i8,
    /// Dominant nuclear projection.
    pub m_i: i8,
    /// Energy (Hz).
    pub energy: f64,
}

/// One allowed transition between two labeled eigenstates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    /// Lower-energy state.
    pub lower: StateLabel,
    /// Higher-energy state.
    pub upper: StateLabel,
    /// Transition frequency (Hz), always >= 0.
    pub frequency: f64,
    /// |<lower| Sx |upper>|^2 for electron transitions, |<lower| Ix |upper>|^2
    /// for nuclear ones.
    pub dipole_weight: f64,
}

/// Transitions of one kind, sorted by frequency.
#[derive(Debug, Clone, Default)]
pub struct TransitionTable {
    pub transitions: Vec<Transition>,
}

impl TransitionTable {
    /// Transitions whose dominant electron character changes m_S between the
    /// two given values (in either direction).
    pub fn between_electron_manifolds(&self, a: i8, b: i8) -> Vec<&Transition> {
        self.transitions
            .iter()
            .filter(|t| {
                (t.lower.m_s == a && t.upper.m_s == b) || (t.lower.m_s == b && t.upper.m_s == a)
            })
            .collect()
    }

    /// Transitions with both endpoints in the given electron manifold.
    pub fn within_electron_manifold(&self, m_s: i8) -> Vec<&Transition> {
        self.transitions
            .iter()
            .filter(|t| t.lower.m_s == m_s && t.upper.m_s == m_s)
            .collect()
    }
}

/// Label each eigenstate by the basis state with the largest overlap.
fn label_states(eig: &Eigensystem) -> Vec<StateLabel> {
    (0..9)
        .map(|k| {
            let col = eig.eigenvectors.column(k);
            let mut best = 0;
            let mut best_weight = -1.0;
            for (i, amplitude) in col.iter().enumerate() {
                let w = amplitude.norm_sqr();
                if w > best_weight {
                    best_weight = w;
                    best = i;
                }
            }
            let (m_s, m_i) = basis_labels(best);
            StateLabel {
                index: k,
                m_s,
                m_i,
                energy: eig.eigenvalues[k],
            }
        })
        .collect()
}

/// Extract the transition table of the given kind.
///
/// Eigenstates are labeled by dominant |m_S, m_I> character; a transition is
/// kept when the labels differ by one quantum of the selected spin and none
/// of the other. Dipole weights are squared matrix elements of the total Sx
/// (electron) or Ix (nuclear) operator between the two eigenstates.
pub fn transitions(h: &SpinHamiltonian, kind: TransitionKind) -> Result<TransitionTable> {
    let eig = eigensystem(h)?;
    let labels = label_states(&eig);

    let op = match kind {
        TransitionKind::Electron => kron(&spin1_x(), &identity3()),
        TransitionKind::Nuclear => kron(&identity3(), &spin1_x()),
    };

    let mut table = Vec::new();
    for i in 0..9 {
        for j in (i + 1)..9 {
            let (lo, hi) = (&labels[i], &labels[j]);
            let ds = (hi.m_s - lo.m_s).abs();
            let di = (hi.m_i - lo.m_i).abs();
            let selected = match kind {
                TransitionKind::Electron => ds == 1 && di == 0,
                TransitionKind::Nuclear => di == 1 && ds == 0,
            };
            if !selected {
                continue;
            }
            let vi = eig.eigenvectors.column(i);
            let vj = eig.eigenvectors.column(j);
            let element = vi.adjoint() * op * vj;
            let dipole_weight = element[(0, 0)].norm_sqr();
            table.push(Transition {
                lower: *lo,
                upper: *hi,
                frequency: eig.eigenvalues[j] - eig.eigenvalues[i],
                dipole_weight,
            });
        }
    }
    table.sort_by(|a, b| a.frequency.total_cmp(&b.frequency));
    Ok(TransitionTable { transitions: table })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn defaults() -> NvParameters {
        NvParameters::default()
    }

    #[test]
    fn zero_field_manifolds_split_by_d() {
        let h = build_hamiltonian(&defaults(), &StaticField::axial(0.0)).unwrap();
        let eig = eigensystem(&h).unwrap();
        // Three states near zero, six near D; hyperfine structure is MHz-scale.
        let low: Vec<f64> = eig.eigenvalues[..3].to_vec();
        let high: Vec<f64> = eig.eigenvalues[3..].to_vec();
        let low_mean = low.iter().sum::<f64>() / 3.0;
        let high_mean = high.iter().sum::<f64>() / 6.0;
        assert!((high_mean - low_mean - 2.87e9).abs() < 20e6);
    }

    #[test]
    fn zero_field_electron_only_gives_two_groups() {
        let params = defaults().electron_only();
        let h = build_hamiltonian(&params, &StaticField::axial(0.0)).unwrap();
        let eig = eigensystem(&h).unwrap();
        for &e in &eig.eigenvalues[..3] {
            assert_relative_eq!(e, 0.0, epsilon = 1e-3);
        }
        for &e in &eig.eigenvalues[3..] {
            assert_relative_eq!(e, 2.87e9, max_relative = 1e-12);
        }
    }

    #[test]
    fn high_field_transition_matches_closed_form() {
        // At 2.78 T the 0 -> -1 manifold sits at gamma_e * B - D.
        let params = defaults();
        let b = 2.78;
        let h = build_hamiltonian(&params, &StaticField::axial(b)).unwrap();
        let table = transitions(&h, TransitionKind::Electron).unwrap();
        let lines = table.between_electron_manifolds(0, -1);
        assert_eq!(lines.len(), 3);
        let expected = params.gamma_e * b - params.d_zfs;
        let centroid = lines.iter().map(|t| t.frequency).sum::<f64>() / 3.0;
        assert!((centroid - expected).abs() < 1e6, "centroid {centroid}");
        assert!((centroid - 75.05e9).abs() < 10e6);
    }

    #[test]
    fn hyperfine_triplet_spacing() {
        let h = build_hamiltonian(&defaults(), &StaticField::axial(2.78)).unwrap();
        let table = transitions(&h, TransitionKind::Electron).unwrap();
        let mut freqs: Vec<f64> = table
            .between_electron_manifolds(0, -1)
            .iter()
            .map(|t| t.frequency)
            .collect();
        freqs.sort_by(f64::total_cmp);
        assert_eq!(freqs.len(), 3);
        assert!((freqs[1] - freqs[0] - 2.16e6).abs() < 1e3);
        assert!((freqs[2] - freqs[1] - 2.16e6).abs() < 1e3);
    }

    #[test]
    fn no_hyperfine_collapses_triplet() {
        let params = NvParameters {
            a_par: 0.0,
            a_perp: 0.0,
            ..defaults()
        };
        let h = build_hamiltonian(&params, &StaticField::axial(2.78)).unwrap();
        let table = transitions(&h, TransitionKind::Electron).unwrap();
        let lines = table.between_electron_manifolds(0, -1);
        assert_eq!(lines.len(), 3);
        let f0 = lines[0].frequency;
        for t in &lines {
            assert!((t.frequency - f0).abs() < 1e-3);
        }
    }

    #[test]
    fn low_field_zeeman_splitting() {
        // 1 mT: the +-1 lines separate by 2 * 28.03 MHz/mT * 1 mT. Second-order
        // hyperfine shifts enter below the ppm level.
        let params = defaults();
        let b = 1e-3;
        let h = build_hamiltonian(&params, &StaticField::axial(b)).unwrap();
        let table = transitions(&h, TransitionKind::Electron).unwrap();
        let line = |m_s: i8| -> f64 {
            table
                .between_electron_manifolds(0, m_s)
                .iter()
                .find(|t| t.lower.m_i == 0 && t.upper.m_i == 0)
                .expect("m_I = 0 line")
                .frequency
        };
        let separation = line(1) - line(-1);
        assert_relative_eq!(separation, 2.0 * params.gamma_e * b, max_relative = 1e-5);
    }

    #[test]
    fn pure_zeeman_splitting_is_exact() {
        let params = defaults().electron_only();
        let b = 1e-3;
        let h = build_hamiltonian(&params, &StaticField::axial(b)).unwrap();
        let table = transitions(&h, TransitionKind::Electron).unwrap();
        let upper: Vec<f64> = table
            .between_electron_manifolds(0, 1)
            .iter()
            .map(|t| t.frequency)
            .collect();
        let lower: Vec<f64> = table
            .between_electron_manifolds(0, -1)
            .iter()
            .map(|t| t.frequency)
            .collect();
        assert!(!upper.is_empty() && !lower.is_empty());
        let separation = upper[0] - lower[0];
        assert_relative_eq!(separation, 2.0 * params.gamma_e * b, max_relative = 1e-12);
    }

    #[test]
    fn eigensystem_diagonal_is_sorted_diagonal() {
        let mut m = Matrix9::zeros();
        let diag = [5.0, -1.0, 3.0, 0.0, 8.0, -2.5, 7.0, 1.0, 2.0];
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        let eig = eigensystem(&SpinHamiltonian::from_matrix(m).unwrap()).unwrap();
        let mut expected = diag;
        expected.sort_by(f64::total_cmp);
        for (a, b) in eig.eigenvalues.iter().zip(expected.iter()) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn eigensystem_gauge_shift() {
        let params = defaults();
        let h = build_hamiltonian(&params, &StaticField::axial(0.5)).unwrap();
        let c = 1.7e9;
        let shifted =
            SpinHamiltonian::from_matrix(h.matrix() + Matrix9::identity() * C64::new(c, 0.0))
                .unwrap();
        let e0 = eigensystem(&h).unwrap();
        let e1 = eigensystem(&shifted).unwrap();
        for k in 0..9 {
            assert_relative_eq!(e1.eigenvalues[k], e0.eigenvalues[k] + c, max_relative = 1e-10);
            // Columns may differ by a phase; compare |overlap|.
            let overlap = (e0.eigenvectors.column(k).adjoint() * e1.eigenvectors.column(k))[(0, 0)];
            assert!(overlap.norm() > 1.0 - 1e-9);
        }
    }

    #[test]
    fn eigensystem_reconstruction_and_gram() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let mut a = Matrix9::zeros();
            for i in 0..9 {
                for j in 0..9 {
                    a[(i, j)] = C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
                }
            }
            let h = SpinHamiltonian::from_matrix((a + a.adjoint()) * C64::new(0.5, 0.0)).unwrap();
            let eig = eigensystem(&h).unwrap();
            let mut lambda = Matrix9::zeros();
            for k in 0..9 {
                lambda[(k, k)] = C64::new(eig.eigenvalues[k], 0.0);
            }
            let rec = eig.eigenvectors * lambda * eig.eigenvectors.adjoint();
            assert!((rec - h.matrix()).norm() <= 1e-9 * h.matrix().norm());
            let gram = eig.eigenvectors.adjoint() * eig.eigenvectors;
            assert!((gram - Matrix9::identity()).norm() < 1e-10);
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = Matrix9::zeros();
        m[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(
            SpinHamiltonian::from_matrix(m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn non_finite_parameters_rejected() {
        let params = NvParameters {
            d_zfs: f64::NAN,
            ..defaults()
        };
        assert!(build_hamiltonian(&params, &StaticField::axial(1.0)).is_err());
        let field = StaticField::axial(f64::INFINITY);
        assert!(build_hamiltonian(&defaults(), &field).is_err());
        assert!(build_hamiltonian(&defaults(), &StaticField::axial(11.0)).is_err());
    }

    #[test]
    fn axial_field_matches_closed_form_without_transverse_coupling() {
        // With a_perp = 0 the axial Hamiltonian is diagonal.
        let params = NvParameters {
            a_perp: 0.0,
            ..defaults()
        };
        let b = 2.78;
        let h = build_hamiltonian(&params, &StaticField::axial(b)).unwrap();
        let eig = eigensystem(&h).unwrap();
        let mut expected: Vec<f64> = Vec::new();
        for m_s in [-1i8, 0, 1] {
            for m_i in [-1i8, 0, 1] {
                let (ms, mi) = (f64::from(m_s), f64::from(m_i));
                expected.push(
                    params.d_zfs * ms * ms + params.gamma_e * b * ms - params.gamma_n * b * mi
                        + params.a_par * ms * mi
                        + params.q_quad * (mi * mi - 2.0 / 3.0),
                );
            }
        }
        expected.sort_by(f64::total_cmp);
        let scale = expected.iter().fold(0.0f64, |m, e| m.max(e.abs()));
        for (got, want) in eig.eigenvalues.iter().zip(expected.iter()) {
            assert!((got - want).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn trace_invariant_under_field_rotation() {
        let params = defaults();
        let b = 1.3;
        let trace_of = |field: &StaticField| -> C64 {
            build_hamiltonian(&params, field).unwrap().matrix().trace()
        };
        let t0 = trace_of(&StaticField::axial(b));
        for (theta, phi) in [(0.3, 1.1), (1.2, -0.4), (std::f64::consts::FRAC_PI_2, 0.0)] {
            let t = trace_of(&StaticField {
                magnitude: b,
                polar_angle: theta,
                azimuth: phi,
            });
            assert_relative_eq!(t.re, t0.re, max_relative = 1e-12);
            assert!(t.im.abs() < 1e-6);
        }
    }

    #[test]
    fn transition_frequencies_invariant_under_basis_relabeling() {
        let params = defaults();
        let h = build_hamiltonian(&params, &StaticField::axial(2.78)).unwrap();
        // Conjugate by a permutation: relabels basis states, leaves the
        // spectrum (hence all transition frequencies) unchanged.
        let perm: [usize; 9] = [4, 0, 7, 2, 8, 1, 5, 3, 6];
        let mut p = Matrix9::zeros();
        for (i, &j) in perm.iter().enumerate() {
            p[(i, j)] = C64::new(1.0, 0.0);
        }
        let relabeled = SpinHamiltonian::from_matrix(p * h.matrix() * p.adjoint()).unwrap();
        let e0 = eigensystem(&h).unwrap();
        let e1 = eigensystem(&relabeled).unwrap();
        for k in 0..9 {
            assert_relative_eq!(e0.eigenvalues[k], e1.eigenvalues[k], max_relative = 1e-10);
        }
    }

    #[test]
    fn basis_index_round_trip() {
        for m_s in [-1i8, 0, 1] {
            for m_i in [-1i8, 0, 1] {
                assert_eq!(basis_labels(basis_index(m_s, m_i)), (m_s, m_i));
            }
        }
        assert_eq!(basis_index(-1, -1), 0);
        assert_eq!(basis_index(1, 1), 8);
    }
}
