// Copyright 2026 The qnet-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Readout-error mitigation: calibration matrices, the pseudo-inverse filter
//! and simplex-constrained least squares.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::simcore::{apply_readout, sample_counts, Frequencies, NoiseModel, OutcomeDistribution, ReadoutError};
use crate::{Error, Result};

/// Largest register the dense `2^n × 2^n` calibration machinery accepts.
pub const MAX_MITIGATION_QUBITS: usize = 10;

/// Default iteration cap of [`mitigate_lsq`].
pub const LSQ_MAX_ITERATIONS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CalibrationMode {
    Exact,
    Sampled { shots: u64, seed: u64 },
}

/// `A[i][j]`: probability of reading outcome `i` after preparing basis state `j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationMatrix {
    n: usize,
    mode: CalibrationMode,
    /// Row-major.
    matrix: Vec<f64>,
}

impl CalibrationMatrix {
    pub fn from_rows(n: usize, mode: CalibrationMode, matrix: Vec<f64>) -> Result<Self> {
        let cal = Self { n, mode, matrix };
        cal.validate()?;
        Ok(cal)
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_size(n)?;
        let dim = 1 << n;
        let mut matrix = vec![0.0; dim * dim];
        for i in 0..dim {
            matrix[i * dim + i] = 1.0;
        }
        Ok(Self { n, mode: CalibrationMode::Exact, matrix })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn mode(&self) -> CalibrationMode {
        self.mode
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.dim() + j]
    }

    pub fn rows(&self) -> &[f64] {
        &self.matrix
    }

    /// Columns non-negative and summing to 1 within 1e-10.
    pub fn validate(&self) -> Result<()> {
        check_size(self.n)?;
        let dim = self.dim();
        if self.matrix.len() != dim * dim {
            return Err(Error::invalid(format!("calibration matrix needs {} entries", dim * dim)));
        }
        for j in 0..dim {
            let mut sum = 0.0;
            for i in 0..dim {
                let v = self.get(i, j);
                if v.is_nan() || v < 0.0 {
                    return Err(Error::invalid(format!("calibration entry ({i}, {j}) = {v}")));
                }
                sum += v;
            }
            if (sum - 1.0).abs() > 1e-10 {
                return Err(Error::invalid(format!("calibration column {j} sums to {sum}")));
            }
        }
        Ok(())
    }

    fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.dim(), self.dim(), &self.matrix)
    }

    fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.matrix.chunks_exact(self.dim()).map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    fn mul_transpose_vec(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        for (row, &yi) in self.matrix.chunks_exact(self.dim()).zip(y) {
            for (o, &a) in out.iter_mut().zip(row) {
                *o += a * yi;
            }
        }
        out
    }
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_MITIGATION_QUBITS {
        return Err(Error::InvalidDimension { qubits: n, cap: MAX_MITIGATION_QUBITS });
    }
    Ok(())
}

/// Builds the calibration matrix of `n` qubits under `noise`'s readout errors.
///
/// Exact mode pushes each basis state through the readout confusion; sampled
/// mode draws `shots` readouts of basis state `j` with seed `seed + j`.
pub fn build_calibration(n: usize, noise: &NoiseModel, mode: CalibrationMode) -> Result<CalibrationMatrix> {
    check_size(n)?;
    noise.validate()?;
    let errors: Vec<ReadoutError> = match &noise.readout {
        Some(r) => (0..n).map(|q| r.for_qubit(q)).collect::<Result<_>>()?,
        None => vec![ReadoutError::default(); n],
    };
    if let CalibrationMode::Sampled { shots: 0, .. } = mode {
        return Err(Error::invalid("sampled calibration needs shots >= 1"));
    }
    let dim = 1usize << n;
    let mut matrix = vec![0.0; dim * dim];
    for j in 0..dim {
        let mut column = vec![0.0; dim];
        column[j] = 1.0;
        apply_readout(&mut column, &errors)?;
        if let CalibrationMode::Sampled { shots, seed } = mode {
            let dist = OutcomeDistribution::from_raw(n, column);
            column = sample_counts(&dist, shots, seed.wrapping_add(j as u64))?.to_dense();
        }
        for (i, v) in column.into_iter().enumerate() {
            matrix[i * dim + j] = v;
        }
    }
    Ok(CalibrationMatrix { n, mode, matrix })
}

/// Mitigated estimate that may contain negative entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasiDistribution {
    pub values: Vec<f64>,
}

impl QuasiDistribution {
    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn num_bits(&self) -> usize {
        self.values.len().trailing_zeros() as usize
    }

    pub fn negative_mass(&self) -> f64 {
        self.values.iter().filter(|v| **v < 0.0).map(|v| -v).sum()
    }
}

impl Frequencies for QuasiDistribution {
    fn num_bits(&self) -> usize {
        QuasiDistribution::num_bits(self)
    }

    fn probability(&self, outcome: usize) -> f64 {
        self.values[outcome]
    }

    fn nonzero(&self) -> Box<dyn Iterator<Item = (usize, f64)> + '_> {
        self.values.nonzero()
    }
}

/// Precomputed Moore–Penrose inverse of a calibration matrix: the LU inverse
/// at full numerical rank, the truncated SVD pseudo-inverse otherwise.
#[derive(Clone, Debug)]
pub struct PinvFilter {
    n: usize,
    pinv: DMatrix<f64>,
    condition_number: f64,
}

impl PinvFilter {
    pub fn new(cal: &CalibrationMatrix) -> Result<Self> {
        let a = cal.to_dmatrix();
        let svd = a.clone().svd(true, true);
        let max = svd.singular_values.max();
        let min = svd.singular_values.min();
        let eps = f64::EPSILON * cal.dim() as f64 * max;
        // At full rank A⁺ = A⁻¹, and LU is accurate to ε·κ where the iterative
        // SVD can stall near 1e-7 on structured (e.g. triangular-factor) inputs.
        let inverse = if min > eps { a.try_inverse() } else { None };
        let pinv = match inverse {
            Some(inv) => inv,
            None => svd.pseudo_inverse(eps).map_err(|e| Error::invalid(e.to_string()))?,
        };
        let condition_number = if min > 0.0 { max / min } else { f64::INFINITY };
        Ok(Self { n: cal.n(), pinv, condition_number })
    }

    pub fn condition_number(&self) -> f64 {
        self.condition_number
    }

    pub fn apply(&self, raw: &(impl Frequencies + ?Sized)) -> Result<QuasiDistribution> {
        if raw.num_bits() != self.n {
            return Err(Error::invalid(format!("{}-bit data against a {}-qubit calibration", raw.num_bits(), self.n)));
        }
        let v = DVector::from_vec(raw.to_dense());
        Ok(QuasiDistribution { values: (&self.pinv * v).iter().copied().collect() })
    }
}

/// `A⁺ · raw`.
pub fn mitigate_pinv(raw: &(impl Frequencies + ?Sized), cal: &CalibrationMatrix) -> Result<QuasiDistribution> {
    PinvFilter::new(cal)?.apply(raw)
}

/// Euclidean projection onto the probability simplex.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let t = (cumulative - 1.0) / (k + 1) as f64;
        if u - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `argmin ‖A x − raw‖₂` over the probability simplex.
///
/// Accelerated projected gradient with adaptive restart. Terminates once the
/// Frank–Wolfe gap certifies `‖A x − raw‖ ≤ min_q ‖A q − raw‖ + tol`.
pub fn mitigate_lsq(
    raw: &(impl Frequencies + ?Sized),
    cal: &CalibrationMatrix,
    tol: f64,
) -> Result<OutcomeDistribution> {
    mitigate_lsq_with_cap(raw, cal, tol, LSQ_MAX_ITERATIONS)
}

pub fn mitigate_lsq_with_cap(
    raw: &(impl Frequencies + ?Sized),
    cal: &CalibrationMatrix,
    tol: f64,
    max_iterations: usize,
) -> Result<OutcomeDistribution> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    if raw.num_bits() != cal.n() {
        return Err(Error::invalid(format!("{}-bit data against a {}-qubit calibration", raw.num_bits(), cal.n())));
    }
    let r = raw.to_dense();
    let dim = cal.dim();
    // ‖A‖₂² ≤ ‖A‖₁ ‖A‖_∞.
    let max_row: f64 = cal.rows().chunks_exact(dim).map(|row| row.iter().sum::<f64>()).fold(0.0, f64::max);
    let max_col: f64 = (0..dim).map(|j| (0..dim).map(|i| cal.get(i, j)).sum::<f64>()).fold(0.0, f64::max);
    let lipschitz = (max_row * max_col).max(f64::MIN_POSITIVE);

    // Columns sum to 1 up to `drift`, so the component of A x − raw along
    // (1, …, 1) is pinned for every simplex point: a lower bound on the optimum.
    let drift = (0..dim).map(|j| ((0..dim).map(|i| cal.get(i, j)).sum::<f64>() - 1.0).abs()).fold(0.0, f64::max);
    let pinned = ((r.iter().sum::<f64>() - 1.0).abs() - drift).max(0.0) / (dim as f64).sqrt();

    let residual = |x: &[f64]| -> Vec<f64> { cal.mul_vec(x).iter().zip(&r).map(|(a, b)| a - b).collect() };
    // ½‖A x − raw‖² exceeds its minimum by at most the Frank–Wolfe gap, so
    // optimum ≥ √(max(ρ² − 2 gap, pinned²)). When rounding in the gradient
    // swamps that bound, a projected-gradient step that no longer moves x
    // marks it optimal to working precision.
    let certified = |x: &[f64]| -> (bool, f64) {
        let res = residual(x);
        let rho = norm(&res);
        let grad = cal.mul_transpose_vec(&res);
        let min_grad = grad.iter().copied().fold(f64::INFINITY, f64::min);
        let gap = (grad.iter().zip(x).map(|(g, xi)| g * xi).sum::<f64>() - min_grad).max(0.0);
        let lower = (rho * rho - 2.0 * gap).max(pinned * pinned).sqrt();
        if rho - lower <= tol {
            return (true, rho);
        }
        let step: Vec<f64> = x.iter().zip(&grad).map(|(xi, gi)| xi - gi / lipschitz).collect();
        let stationary = project_simplex(&step).iter().zip(x).all(|(p, xi)| (p - xi).abs() <= 4.0 * f64::EPSILON);
        (stationary, rho)
    };

    let mut x = project_simplex(&r);
    let mut y = x.clone();
    let mut t = 1.0f64;
    for iteration in 0..max_iterations {
        if iteration % 16 == 0 && certified(&x).0 {
            return Ok(OutcomeDistribution::from_raw(cal.n(), x));
        }
        let grad = cal.mul_transpose_vec(&residual(&y));
        let step: Vec<f64> = y.iter().zip(&grad).map(|(yi, gi)| yi - gi / lipschitz).collect();
        let x_next = project_simplex(&step);
        let restart = y.iter().zip(&x_next).zip(&x).map(|((yi, xn), xo)| (yi - xn) * (xn - xo)).sum::<f64>() > 0.0;
        if restart {
            t = 1.0;
        }
        let t_next = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
        let momentum = (t - 1.0) / t_next;
        y = x_next.iter().zip(&x).map(|(xn, xo)| xn + momentum * (xn - xo)).collect();
        x = x_next;
        t = t_next;
    }
    let (done, rho) = certified(&x);
    if done {
        return Ok(OutcomeDistribution::from_raw(cal.n(), x));
    }
    Err(Error::Convergence { iterations: max_iterations, residual: rho })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simcore::{Readout, ReadoutError};
    use proptest::prelude::*;

    fn readout(errors: Vec<ReadoutError>) -> NoiseModel {
        NoiseModel::readout_only(Readout::PerQubit(errors))
    }

    #[test]
    fn noiseless_calibration_is_identity() {
        let cal = build_calibration(3, &NoiseModel::ideal(), CalibrationMode::Exact).unwrap();
        assert_eq!(cal, CalibrationMatrix::identity(3).unwrap());
    }

    #[test]
    fn single_qubit_entries() {
        let cal = build_calibration(1, &readout(vec![ReadoutError::new(0.1, 0.05)]), CalibrationMode::Exact).unwrap();
        assert_eq!(cal.rows(), &[0.9, 0.05, 0.1, 0.95]);
    }

    #[test]
    fn two_qubit_kronecker_product() {
        let (e0, e1) = (ReadoutError::new(0.1, 0.05), ReadoutError::new(0.02, 0.2));
        let cal = build_calibration(2, &readout(vec![e0, e1]), CalibrationMode::Exact).unwrap();
        let (a, b) = (e0.confusion(), e1.confusion());
        for i in 0..4 {
            for j in 0..4 {
                let kron = a[i >> 1][j >> 1] * b[i & 1][j & 1];
                assert!((cal.get(i, j) - kron).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn sampled_calibration_columns() {
        let noise = readout(vec![ReadoutError::new(0.1, 0.05); 2]);
        let cal = build_calibration(2, &noise, CalibrationMode::Sampled { shots: 20_000, seed: 4 }).unwrap();
        cal.validate().unwrap();
        let exact = build_calibration(2, &noise, CalibrationMode::Exact).unwrap();
        for (s, e) in cal.rows().iter().zip(exact.rows()) {
            assert!((s - e).abs() < 0.01);
        }
        assert!(build_calibration(2, &noise, CalibrationMode::Sampled { shots: 0, seed: 4 }).is_err());
    }

    #[test]
    fn calibration_json_round_trip() {
        let cal = build_calibration(1, &readout(vec![ReadoutError::new(0.1, 0.05)]), CalibrationMode::Exact).unwrap();
        let json = serde_json::to_string(&cal).unwrap();
        assert!(json.contains("\"n\":1"));
        assert!(json.contains("\"kind\":\"exact\""));
        let back: CalibrationMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cal);
    }

    #[test]
    fn pinv_round_trip() {
        let noise = readout(vec![ReadoutError::new(0.04, 0.07), ReadoutError::new(0.1, 0.02), ReadoutError::new(0.03, 0.03)]);
        let cal = build_calibration(3, &noise, CalibrationMode::Exact).unwrap();
        let ideal = vec![0.5, 0.0, 0.0, 0.125, 0.125, 0.0, 0.0, 0.25];
        let raw = cal.mul_vec(&ideal);
        let q = mitigate_pinv(&raw, &cal).unwrap();
        for (a, b) in q.values.iter().zip(&ideal) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((q.sum() - 1.0).abs() < 1e-12);
        let identity = CalibrationMatrix::identity(3).unwrap();
        assert_eq!(mitigate_pinv(&raw, &identity).unwrap().values, raw);
    }

    #[test]
    fn pinv_can_go_negative() {
        let cal = build_calibration(2, &readout(vec![ReadoutError::new(0.6, 0.02); 2]), CalibrationMode::Exact).unwrap();
        let q = mitigate_pinv(&[0.25; 4][..], &cal).unwrap();
        assert!(q.values.iter().any(|&v| v < 0.0));
        assert!(q.negative_mass() > 0.0);
        assert!((q.sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lsq_recovers_image_points() {
        let noise = readout(vec![ReadoutError::new(0.03, 0.03); 3]);
        let cal = build_calibration(3, &noise, CalibrationMode::Exact).unwrap();
        let ideal = vec![0.0, 0.3, 0.0, 0.2, 0.1, 0.0, 0.4, 0.0];
        let out = mitigate_lsq(&cal.mul_vec(&ideal), &cal, 1e-10).unwrap();
        for (a, b) in out.probs().iter().zip(&ideal) {
            assert!((a - b).abs() < 1e-6);
        }
        let identity = CalibrationMatrix::identity(3).unwrap();
        let out = mitigate_lsq(&ideal, &identity, 1e-10).unwrap();
        for (a, b) in out.probs().iter().zip(&ideal) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    /// Closed-form minimiser over `(t, 1 − t)`, `t ∈ [0, 1]`.
    fn two_outcome_oracle(a: [[f64; 2]; 2], r: [f64; 2]) -> f64 {
        let d = [a[0][0] - a[0][1], a[1][0] - a[1][1]];
        let t = ((r[0] - a[0][1]) * d[0] + (r[1] - a[1][1]) * d[1]) / (d[0] * d[0] + d[1] * d[1]);
        t.clamp(0.0, 1.0)
    }

    #[test]
    fn pinv_exact_with_one_sided_readout() {
        // A qubit with p10 = 0 gives a triangular factor; the inverse must stay at ε·κ.
        let rates = [(0.0846, 0.0227), (0.0440, 0.0914), (0.0964, 0.0461), (0.0126, 0.0), (0.0411, 0.0767), (0.0808, 0.0640), (0.0660, 0.0773)];
        let errors: Vec<ReadoutError> = rates.iter().map(|&(a, b)| ReadoutError::new(a, b)).collect();
        let cal = build_calibration(7, &NoiseModel::readout_only(Readout::PerQubit(errors.clone())), CalibrationMode::Exact).unwrap();
        let mut ideal = vec![0.0; 128];
        ideal[1] = 0.5;
        ideal[38] = 0.5;
        let mut raw = ideal.clone();
        crate::simcore::apply_readout(&mut raw, &errors).unwrap();
        let q = mitigate_pinv(&raw, &cal).unwrap();
        for (a, b) in q.values.iter().zip(&ideal) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn lsq_converges_when_raw_mass_is_short_of_one() {
        // Optimum residual sits just above tol, all of it normal to the simplex.
        let noise = NoiseModel::readout_only(Readout::PerQubit(vec![ReadoutError::new(0.042733020769690884, 0.11608537456262207)]));
        let cal = build_calibration(1, &noise, CalibrationMode::Exact).unwrap();
        let total = 0.33345226955820856 + 0.3038596036587801 + 1e-9;
        let raw = vec![0.33345226955820856 / total, 0.3038596036587801 / total];
        let p = mitigate_lsq(&raw, &cal, 1e-9).unwrap();
        let pinv = mitigate_pinv(&raw, &cal).unwrap();
        for (a, b) in p.probs().iter().zip(&pinv.values) {
            assert!((a - b / pinv.sum()).abs() < 1e-8);
        }
    }

    #[test]
    fn lsq_boundary_solution() {
        let a = [[0.9, 0.2], [0.1, 0.8]];
        let cal = CalibrationMatrix::from_rows(1, CalibrationMode::Exact, vec![0.9, 0.2, 0.1, 0.8]).unwrap();
        let raw = [1.0, 0.0];
        let t = two_outcome_oracle(a, raw);
        assert_eq!(t, 1.0);
        let out = mitigate_lsq(&raw[..], &cal, 1e-10).unwrap();
        assert!((out.probs()[0] - t).abs() < 1e-9);
        assert_eq!(out.probs()[1], 0.0);
        assert!(norm(&[0.9 - 1.0, 0.1]) > 0.0);
    }

    #[test]
    fn lsq_rejects_bad_tolerance() {
        let cal = CalibrationMatrix::identity(1).unwrap();
        assert!(mitigate_lsq(&[0.5, 0.5][..], &cal, 0.0).is_err());
    }

    #[test]
    fn simplex_projection_examples() {
        assert_eq!(project_simplex(&[0.2, 0.8]), vec![0.2, 0.8]);
        assert_eq!(project_simplex(&[2.0, 0.0]), vec![1.0, 0.0]);
        let p = project_simplex(&[0.5, 0.5, 0.5, -1.0]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert_eq!(p[3], 0.0);
    }

    fn simplex_point(len: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.0f64..1.0, len).prop_map(|w| {
            let s: f64 = w.iter().sum::<f64>().max(1e-12);
            w.into_iter().map(|x| x / s).collect()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn two_outcome_matches_oracle(p01 in 0.0f64..0.45, p10 in 0.0f64..0.45, r0 in 0.0f64..=1.0) {
            let a = [[1.0 - p01, p10], [p01, 1.0 - p10]];
            let cal = CalibrationMatrix::from_rows(1, CalibrationMode::Exact, vec![a[0][0], a[0][1], a[1][0], a[1][1]]).unwrap();
            let out = mitigate_lsq(&[r0, 1.0 - r0][..], &cal, 1e-12).unwrap();
            prop_assert!((out.probs()[0] - two_outcome_oracle(a, [r0, 1.0 - r0])).abs() < 1e-6);
        }

        #[test]
        fn lsq_is_feasible_and_optimal(
            errs in prop::collection::vec((0.0f64..0.3, 0.0f64..0.3), 3),
            raw in simplex_point(8),
            probes in prop::collection::vec(simplex_point(8), 1000),
        ) {
            let noise = readout(errs.iter().map(|&(a, b)| ReadoutError::new(a, b)).collect());
            let cal = build_calibration(3, &noise, CalibrationMode::Exact).unwrap();
            let tol = 1e-6;
            let out = mitigate_lsq(&raw, &cal, tol).unwrap();
            prop_assert!(out.probs().iter().all(|&v| v >= 0.0));
            prop_assert!((out.probs().iter().sum::<f64>() - 1.0).abs() < 1e-8);
            let objective = |x: &[f64]| norm(&cal.mul_vec(x).iter().zip(&raw).map(|(a, b)| a - b).collect::<Vec<_>>());
            let best = objective(out.probs());
            for q in &probes {
                prop_assert!(best <= objective(q) + tol);
            }
        }
    }
}
