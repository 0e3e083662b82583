//! Pure bipartite states, subsystem density matrices and the partial trace.
//!
//! Composite basis states are indexed row-major: `i = i_a * dim_b + i_b`
//! with 0-based `i_a`, `i_b`. All indices in this crate are 0-based.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};

/// Default validation tolerance for state and density-matrix invariants.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Squared-norm threshold below which a vector counts as zero.
const ZERO_NORM_THRESHOLD: f64 = 1e-30;

/// Which half of the composite system an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

/// A normalized pure state of a bipartite system of dimension `dim_a x dim_b`.
///
/// Construction validates the invariants (amplitude count, unit norm), so a
/// value of this type is always a physical state.
#[derive(Debug, Clone, PartialEq)]
pub struct PureBipartiteState {
    dim_a: usize,
    dim_b: usize,
    amplitudes: Vec<Complex64>,
}

impl PureBipartiteState {
    /// Build a state from already-normalized amplitudes, validating at the
    /// default tolerance.
    pub fn new(dim_a: usize, dim_b: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::with_tolerance(dim_a, dim_b, amplitudes, DEFAULT_TOLERANCE)
    }

    /// Build a state from already-normalized amplitudes, validating the unit
    /// norm within `tol`.
    pub fn with_tolerance(
        dim_a: usize,
        dim_b: usize,
        amplitudes: Vec<Complex64>,
        tol: f64,
    ) -> Result<Self> {
        Self::check_shape(dim_a, dim_b, &amplitudes)?;
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > tol {
            return Err(Error::InvalidState(format!(
                "squared norm {norm_sq} deviates from 1 by more than {tol}"
            )));
        }
        Ok(Self { dim_a, dim_b, amplitudes })
    }

    /// Build a state by rescaling an arbitrary nonzero amplitude vector to
    /// unit norm. The direction of the vector is unchanged.
    pub fn normalized(dim_a: usize, dim_b: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::check_shape(dim_a, dim_b, &amplitudes)?;
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm_sq < ZERO_NORM_THRESHOLD {
            return Err(Error::ZeroNorm { norm_sq });
        }
        let scale = norm_sq.sqrt().recip();
        let amplitudes = amplitudes.into_iter().map(|a| a * scale).collect();
        Ok(Self { dim_a, dim_b, amplitudes })
    }

    fn check_shape(dim_a: usize, dim_b: usize, amplitudes: &[Complex64]) -> Result<()> {
        if dim_a < 1 || dim_b < 1 {
            return Err(Error::InvalidState(format!(
                "subsystem dimensions must be >= 1, got {dim_a} x {dim_b}"
            )));
        }
        if amplitudes.len() != dim_a * dim_b {
            return Err(Error::InvalidState(format!(
                "expected {} amplitudes for a {dim_a} x {dim_b} state, got {}",
                dim_a * dim_b,
                amplitudes.len()
            )));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidState("non-finite amplitude".into()));
        }
        Ok(())
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    /// Row-major amplitude vector, `i = i_a * dim_b + i_b`.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Amplitude of the basis state `|i_a, i_b>`.
    pub fn amplitude(&self, i_a: usize, i_b: usize) -> Complex64 {
        self.amplitudes[i_a * self.dim_b + i_b]
    }

    /// Dimension of the chosen subsystem.
    pub fn subsystem_dim(&self, subsystem: Subsystem) -> usize {
        match subsystem {
            Subsystem::A => self.dim_a,
            Subsystem::B => self.dim_b,
        }
    }

    /// Reduced density matrix of one subsystem, obtained by tracing out the
    /// other: `rho_A[i][j] = sum_m psi[i,m] conj(psi[j,m])` and analogously
    /// for B.
    pub fn reduced_density(&self, subsystem: Subsystem) -> DensityMatrix {
        let (d, other, stride, other_stride) = match subsystem {
            Subsystem::A => (self.dim_a, self.dim_b, self.dim_b, 1),
            Subsystem::B => (self.dim_b, self.dim_a, 1, self.dim_b),
        };
        let mut entries = DMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for m in 0..other {
                    acc += self.amplitudes[i * stride + m * other_stride]
                        * self.amplitudes[j * stride + m * other_stride].conj();
                }
                entries[(i, j)] = acc;
            }
        }
        DensityMatrix::from_valid(entries)
    }

    /// Serialize to the state-file JSON format:
    /// `{"dims":[dA,dB],"amplitudes":[[re,im],...]}`.
    pub fn to_json(&self) -> String {
        let amps: Vec<[f64; 2]> = self.amplitudes.iter().map(|a| [a.re, a.im]).collect();
        serde_json::to_string(&serde_json::json!({
            "dims": [self.dim_a, self.dim_b],
            "amplitudes": amps,
        }))
        .expect("state serialization cannot fail")
    }

    /// Parse the state-file JSON format, validating at the default tolerance.
    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_json_with_tolerance(text, DEFAULT_TOLERANCE)
    }

    /// Parse the state-file JSON format, validating the norm within `tol`.
    /// Rejects wrong amplitude counts and non-finite numbers.
    pub fn from_json_with_tolerance(text: &str, tol: f64) -> Result<Self> {
        #[derive(Deserialize)]
        struct StateFile {
            dims: [usize; 2],
            amplitudes: Vec<[f64; 2]>,
        }
        let file: StateFile =
            serde_json::from_str(text).map_err(|e| Error::MalformedFile(e.to_string()))?;
        let amplitudes = file
            .amplitudes
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect();
        Self::with_tolerance(file.dims[0], file.dims[1], amplitudes, tol)
    }
}

/// A `d x d` density matrix: Hermitian, unit trace, positive semidefinite.
///
/// Construction through [`DensityMatrix::new`] validates all three
/// invariants; outputs of operations that preserve them bypass the check.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validate `entries` at the default tolerance and wrap them.
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        Self::with_tolerance(entries, DEFAULT_TOLERANCE)
    }

    /// Validate `entries` within `tol` and wrap them.
    pub fn with_tolerance(entries: DMatrix<Complex64>, tol: f64) -> Result<Self> {
        validate_density(&entries, tol)?;
        Ok(Self { entries })
    }

    /// Wrap entries that are valid by construction (partial trace of a valid
    /// state, unitary conjugation of a valid matrix).
    pub(crate) fn from_valid(entries: DMatrix<Complex64>) -> Self {
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    /// Real eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut vals: Vec<f64> = self
            .entries
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .collect();
        vals.sort_by(|a, b| b.total_cmp(a));
        vals
    }

    /// Reduced density matrix of one subsystem of a composite `rho_AB` of
    /// dimension `dim_a * dim_b`, obtained by partial trace over the other.
    pub fn reduced_from_composite(
        &self,
        dim_a: usize,
        dim_b: usize,
        subsystem: Subsystem,
    ) -> Result<DensityMatrix> {
        if dim_a * dim_b != self.dim() {
            return Err(Error::DimensionMismatch { left: dim_a * dim_b, right: self.dim() });
        }
        let d = match subsystem {
            Subsystem::A => dim_a,
            Subsystem::B => dim_b,
        };
        let other = dim_a * dim_b / d;
        let idx = |i: usize, m: usize| match subsystem {
            Subsystem::A => i * dim_b + m,
            Subsystem::B => m * dim_b + i,
        };
        let mut entries = DMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for m in 0..other {
                    acc += self.entries[(idx(i, m), idx(j, m))];
                }
                entries[(i, j)] = acc;
            }
        }
        Ok(DensityMatrix::from_valid(entries))
    }
}

fn validate_density(entries: &DMatrix<Complex64>, tol: f64) -> Result<()> {
    let d = entries.nrows();
    if d == 0 || entries.ncols() != d {
        return Err(Error::InvalidDensityMatrix(format!(
            "expected a square matrix of dimension >= 1, got {} x {}",
            d,
            entries.ncols()
        )));
    }
    if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidDensityMatrix("non-finite entry".into()));
    }
    for i in 0..d {
        for j in i..d {
            let dev = (entries[(i, j)] - entries[(j, i)].conj()).norm();
            if dev > tol {
                return Err(Error::InvalidDensityMatrix(format!(
                    "not Hermitian at ({i},{j}): deviation {dev:.3e}"
                )));
            }
        }
    }
    let trace: Complex64 = entries.diagonal().iter().sum();
    if (trace.re - 1.0).abs() > tol || trace.im.abs() > tol {
        return Err(Error::InvalidDensityMatrix(format!(
            "trace {trace} deviates from 1"
        )));
    }
    let min_eig = entries
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if min_eig < -tol {
        return Err(Error::InvalidDensityMatrix(format!(
            "smallest eigenvalue {min_eig:.3e} below -{tol:.1e}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn normalized_rescales_basis_state() {
        let s = PureBipartiteState::normalized(
            2,
            2,
            vec![c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        )
        .unwrap();
        assert_eq!(s.amplitudes()[0], c(1.0, 0.0));
        assert!(s.amplitudes()[1..].iter().all(|a| a.norm() == 0.0));
    }

    #[test]
    fn normalized_preserves_direction() {
        let s = PureBipartiteState::normalized(
            2,
            2,
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        )
        .unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitudes()[0].re - r).abs() < 1e-15);
        assert!((s.amplitudes()[3].re - r).abs() < 1e-15);
    }

    #[test]
    fn normalized_rejects_zero_vector() {
        let err = PureBipartiteState::normalized(2, 2, vec![c(0.0, 0.0); 4]).unwrap_err();
        assert!(matches!(err, Error::ZeroNorm { .. }));
    }

    #[test]
    fn new_rejects_wrong_length_and_non_finite() {
        assert!(matches!(
            PureBipartiteState::new(2, 2, vec![c(1.0, 0.0); 3]),
            Err(Error::InvalidState(_))
        ));
        assert!(matches!(
            PureBipartiteState::new(1, 1, vec![c(f64::NAN, 0.0)]),
            Err(Error::InvalidState(_))
        ));
    }

    #[test]
    fn reduced_density_of_theta_state_is_diagonal() {
        // cos(t)|01> + sin(t)|10>
        let t = 0.3_f64;
        let s = PureBipartiteState::new(
            2,
            2,
            vec![c(0.0, 0.0), c(t.cos(), 0.0), c(t.sin(), 0.0), c(0.0, 0.0)],
        )
        .unwrap();
        let rho = s.reduced_density(Subsystem::A);
        assert!((rho.entry(0, 0).re - t.cos().powi(2)).abs() < 1e-15);
        assert!((rho.entry(1, 1).re - t.sin().powi(2)).abs() < 1e-15);
        assert!(rho.entry(0, 1).norm() < 1e-15);
    }

    #[test]
    fn reduced_density_of_product_state_is_pure() {
        let s = PureBipartiteState::new(
            2,
            2,
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        )
        .unwrap();
        let rho = s.reduced_density(Subsystem::A);
        assert_eq!(rho.entry(0, 0), c(1.0, 0.0));
        assert_eq!(rho.entry(1, 1), c(0.0, 0.0));
    }

    #[test]
    fn basis_state_partial_trace_is_one_hot() {
        // |i_a=1, i_b=2> in a 2x3 system
        let mut amps = vec![c(0.0, 0.0); 6];
        amps[1 * 3 + 2] = c(1.0, 0.0);
        let s = PureBipartiteState::new(2, 3, amps).unwrap();
        let rho_a = s.reduced_density(Subsystem::A);
        assert_eq!(rho_a.entry(1, 1), c(1.0, 0.0));
        let rho_b = s.reduced_density(Subsystem::B);
        assert_eq!(rho_b.entry(2, 2), c(1.0, 0.0));
    }

    #[test]
    fn density_validation_rejects_bad_matrices() {
        let not_hermitian =
            DMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.3, 0.0), c(0.1, 0.0), c(0.5, 0.0)]);
        assert!(matches!(
            DensityMatrix::new(not_hermitian),
            Err(Error::InvalidDensityMatrix(_))
        ));

        let bad_trace =
            DMatrix::from_row_slice(2, 2, &[c(0.9, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.9, 0.0)]);
        assert!(matches!(
            DensityMatrix::new(bad_trace),
            Err(Error::InvalidDensityMatrix(_))
        ));

        // Hermitian, unit trace, but indefinite.
        let indefinite =
            DMatrix::from_row_slice(2, 2, &[c(1.2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.2, 0.0)]);
        assert!(matches!(
            DensityMatrix::new(indefinite),
            Err(Error::InvalidDensityMatrix(_))
        ));
    }

    #[test]
    fn state_file_round_trip() {
        let s = PureBipartiteState::normalized(
            2,
            2,
            vec![c(1.0, 0.5), c(0.0, -0.25), c(0.5, 0.0), c(0.0, 0.0)],
        )
        .unwrap();
        let back = PureBipartiteState::from_json(&s.to_json()).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn state_file_rejects_wrong_length_and_non_finite() {
        assert!(matches!(
            PureBipartiteState::from_json(r#"{"dims":[2,2],"amplitudes":[[1.0,0.0]]}"#),
            Err(Error::InvalidState(_))
        ));
        // JSON itself has no NaN literal; a malformed token is a parse error.
        assert!(matches!(
            PureBipartiteState::from_json(r#"{"dims":[1,1],"amplitudes":[[NaN,0.0]]}"#),
            Err(Error::MalformedFile(_))
        ));
    }

    #[test]
    fn composite_partial_trace_matches_pure_state_path() {
        let t = 0.7_f64;
        let s = PureBipartiteState::new(
            2,
            2,
            vec![c(0.0, 0.0), c(t.cos(), 0.0), c(t.sin(), 0.0), c(0.0, 0.0)],
        )
        .unwrap();
        // rho_AB = |psi><psi|
        let d = 4;
        let mut entries = DMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                entries[(i, j)] = s.amplitudes()[i] * s.amplitudes()[j].conj();
            }
        }
        let rho_ab = DensityMatrix::new(entries).unwrap();
        let rho_a = rho_ab.reduced_from_composite(2, 2, Subsystem::A).unwrap();
        let direct = s.reduced_density(Subsystem::A);
        assert!((rho_a.entries() - direct.entries()).iter().all(|z| z.norm() < 1e-14));
        let rho_b = rho_ab.reduced_from_composite(2, 2, Subsystem::B).unwrap();
        let direct_b = s.reduced_density(Subsystem::B);
        assert!((rho_b.entries() - direct_b.entries()).iter().all(|z| z.norm() < 1e-14));
    }
}
