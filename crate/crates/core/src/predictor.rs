//! Target position estimation: the FIFO position history and a
//! constant-velocity Kalman filter.
//!
//! The filter, not a regression over the raw history, produces the
//! next-frame anchor; the history exists for diagnostics and for the
//! max-displacement plausibility check that catches predictions no physical
//! target could reach.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Real;

/// FIFO stack of the last `capacity` reported positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositionHistory<F> {
    capacity: usize,
    entries: VecDeque<(u64, F, F)>,
}

impl<F: Real> PositionHistory<F> {
    pub fn new(capacity: usize) -> Self {
        PositionHistory {
            capacity: capacity.max(1),
            entries: VecDeque::new(),
        }
    }

    /// Appends `(frame, x, y)`; evicts the oldest entry beyond capacity.
    /// Frame indices must be strictly increasing.
    pub fn push(&mut self, frame: u64, x: F, y: F) -> Result<()> {
        if let Some(&(last, _, _)) = self.entries.back() {
            if frame <= last {
                return Err(Error::FrameOrdering { last, got: frame });
            }
        }
        self.entries.push_back((frame, x, y));
        while self.entries.len() > self.capacity {
            self.entries.pop_front();
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn latest(&self) -> Option<(u64, F, F)> {
        self.entries.back().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, F, F)> + '_ {
        self.entries.iter().copied()
    }
}

/// Kalman filter noise configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KalmanConfig<F> {
    /// Process noise added to the velocity covariance each prediction.
    pub q: F,
    /// Measurement noise (pixels) of reported positions.
    pub r: F,
    /// Initial covariance scale.
    pub initial_covariance: F,
}

impl<F: Real> Default for KalmanConfig<F> {
    fn default() -> Self {
        KalmanConfig {
            q: F::from_config(0.1),
            r: F::from_config(2.0),
            initial_covariance: F::from_config(10.0),
        }
    }
}

type Mat4<F> = [[F; 4]; 4];

fn mat_mul<F: Real>(a: &Mat4<F>, b: &Mat4<F>) -> Mat4<F> {
    let mut out = [[F::zero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = F::zero();
            for (k, bk) in b.iter().enumerate() {
                acc = acc + a[i][k] * bk[j];
            }
            out[i][j] = acc;
        }
    }
    out
}

fn transpose<F: Real>(a: &Mat4<F>) -> Mat4<F> {
    let mut out = [[F::zero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[j][i];
        }
    }
    out
}

/// Constant-velocity Kalman filter over state `(x, y, vx, vy)` with unit
/// frame steps and a position-only measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KalmanFilter<F> {
    state: [F; 4],
    covariance: Mat4<F>,
    config: KalmanConfig<F>,
}

impl<F: Real> KalmanFilter<F> {
    /// Starts at `position` with zero velocity and covariance
    /// `initial_covariance · I`.
    pub fn new(position: (F, F), config: KalmanConfig<F>) -> Self {
        let mut covariance = [[F::zero(); 4]; 4];
        for (i, row) in covariance.iter_mut().enumerate() {
            row[i] = config.initial_covariance;
        }
        KalmanFilter {
            state: [position.0, position.1, F::zero(), F::zero()],
            covariance,
            config,
        }
    }

    pub fn position(&self) -> (F, F) {
        (self.state[0], self.state[1])
    }

    pub fn velocity(&self) -> (F, F) {
        (self.state[2], self.state[3])
    }

    pub fn covariance(&self) -> &Mat4<F> {
        &self.covariance
    }

    /// Propagates one frame (`x += vx`, `y += vy`), adds process noise to
    /// the velocity terms, and returns the predicted position.
    pub fn predict(&mut self) -> (F, F) {
        let one = F::one();
        let mut f = [[F::zero(); 4]; 4];
        for (i, row) in f.iter_mut().enumerate() {
            row[i] = one;
        }
        f[0][2] = one;
        f[1][3] = one;

        self.state = [
            self.state[0] + self.state[2],
            self.state[1] + self.state[3],
            self.state[2],
            self.state[3],
        ];
        let fp = mat_mul(&f, &self.covariance);
        self.covariance = mat_mul(&fp, &transpose(&f));
        self.covariance[2][2] = self.covariance[2][2] + self.config.q;
        self.covariance[3][3] = self.covariance[3][3] + self.config.q;
        self.symmetrize();
        self.position()
    }

    /// Standard linear-Gaussian update with a measurement of `(x, y)` and
    /// noise `r · I`.
    pub fn update(&mut self, measurement: (F, F)) {
        let p = &self.covariance;
        // S = H P Ht + R, with H selecting the position block
        let s00 = p[0][0] + self.config.r;
        let s01 = p[0][1];
        let s10 = p[1][0];
        let s11 = p[1][1] + self.config.r;
        let det = s00 * s11 - s01 * s10;
        if det == F::zero() || !det.is_finite() {
            return; // degenerate innovation covariance; skip the update
        }
        let inv00 = s11 / det;
        let inv01 = -s01 / det;
        let inv10 = -s10 / det;
        let inv11 = s00 / det;

        // K = P Ht S^-1  (4x2)
        let mut k = [[F::zero(); 2]; 4];
        for i in 0..4 {
            let phi0 = p[i][0];
            let phi1 = p[i][1];
            k[i][0] = phi0 * inv00 + phi1 * inv10;
            k[i][1] = phi0 * inv01 + phi1 * inv11;
        }

        let innov = (
            measurement.0 - self.state[0],
            measurement.1 - self.state[1],
        );
        for i in 0..4 {
            self.state[i] = self.state[i] + k[i][0] * innov.0 + k[i][1] * innov.1;
        }

        // P = (I - K H) P
        let mut ikh = [[F::zero(); 4]; 4];
        for (i, row) in ikh.iter_mut().enumerate() {
            row[i] = F::one();
            row[0] = row[0] - k[i][0];
            row[1] = row[1] - k[i][1];
        }
        self.covariance = mat_mul(&ikh, &self.covariance);
        self.symmetrize();
    }

    fn symmetrize(&mut self) {
        let half = F::from_config(0.5);
        for i in 0..4 {
            for j in (i + 1)..4 {
                let avg = (self.covariance[i][j] + self.covariance[j][i]) * half;
                self.covariance[i][j] = avg;
                self.covariance[j][i] = avg;
            }
        }
    }
}

/// Frame-to-frame displacement plausibility: a reported jump longer than
/// `factor ×` the selection-window diagonal is rejected as impossible.
pub fn displacement_plausible<F: Real>(
    previous: (F, F),
    candidate: (F, F),
    slw_diagonal: F,
    factor: F,
) -> bool {
    let dx = candidate.0 - previous.0;
    let dy = candidate.1 - previous.1;
    (dx * dx + dy * dy).sqrt() <= factor * slw_diagonal
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn history_evicts_oldest_beyond_capacity() {
        let mut h = PositionHistory::<f64>::new(5);
        for frame in 1..=7 {
            h.push(frame, frame as f64, 0.0).unwrap();
        }
        assert_eq!(h.len(), 5);
        let frames: Vec<u64> = h.iter().map(|(f, _, _)| f).collect();
        assert_eq!(frames, vec![3, 4, 5, 6, 7]);
    }

    #[test]
    fn history_basics() {
        let mut h = PositionHistory::<f64>::new(3);
        assert!(h.is_empty());
        h.push(1, 2.0, 3.0).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h.latest(), Some((1, 2.0, 3.0)));

        let mut single = PositionHistory::<f64>::new(1);
        single.push(1, 1.0, 1.0).unwrap();
        single.push(2, 2.0, 2.0).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single.latest(), Some((2, 2.0, 2.0)));
    }

    #[test]
    fn history_rejects_non_increasing_frames() {
        let mut h = PositionHistory::<f64>::new(3);
        h.push(5, 0.0, 0.0).unwrap();
        assert!(matches!(
            h.push(5, 1.0, 1.0),
            Err(Error::FrameOrdering { last: 5, got: 5 })
        ));
        assert!(h.push(4, 1.0, 1.0).is_err());
    }

    #[test]
    fn predict_applies_constant_velocity() {
        let mut f = KalmanFilter::new((10.0f64, 20.0), KalmanConfig::default());
        assert_eq!(f.predict(), (10.0, 20.0)); // zero velocity

        let mut f = KalmanFilter::new((10.0f64, 20.0), KalmanConfig::default());
        f.state = [10.0, 20.0, 2.0, -1.0];
        assert_eq!(f.predict(), (12.0, 19.0));
    }

    #[test]
    fn tiny_measurement_noise_pins_the_position() {
        let cfg = KalmanConfig {
            r: 1e-9,
            ..KalmanConfig::default()
        };
        let mut f = KalmanFilter::new((0.0f64, 0.0), cfg);
        f.predict();
        f.update((30.0, -7.0));
        let (x, y) = f.position();
        assert!((x - 30.0).abs() < 1e-6 && (y + 7.0).abs() < 1e-6);
    }

    #[test]
    fn huge_measurement_noise_keeps_the_prior() {
        let cfg = KalmanConfig {
            r: 1e12,
            ..KalmanConfig::default()
        };
        let mut f = KalmanFilter::new((5.0f64, 6.0), cfg);
        f.predict();
        f.update((500.0, 600.0));
        let (x, y) = f.position();
        assert!((x - 5.0).abs() < 0.01 && (y - 6.0).abs() < 0.01);
    }

    #[test]
    fn converges_on_a_constant_velocity_track() {
        let mut f = KalmanFilter::new((0.0f64, 0.0), KalmanConfig::default());
        let (vx, vy) = (2.0, -1.0);
        let mut last_error = f64::INFINITY;
        for t in 1..=15 {
            let predicted = f.predict();
            let truth = (vx * t as f64, vy * t as f64);
            last_error = ((predicted.0 - truth.0).powi(2) + (predicted.1 - truth.1).powi(2)).sqrt();
            f.update(truth);
        }
        assert!(last_error < 0.5, "prediction error {last_error}");
        let (evx, evy) = f.velocity();
        assert!((evx - vx).abs() / vx.abs() < 0.05, "vx {evx}");
        assert!((evy - vy).abs() / vy.abs() < 0.05, "vy {evy}");
    }

    #[test]
    fn residuals_shrink_after_burn_in_without_process_noise() {
        let cfg = KalmanConfig {
            q: 0.0,
            ..KalmanConfig::default()
        };
        let mut f = KalmanFilter::new((0.0f64, 0.0), cfg);
        let mut residuals = Vec::new();
        for t in 1..=20 {
            let predicted = f.predict();
            let truth = (3.0 * t as f64, 1.5 * t as f64);
            residuals
                .push(((predicted.0 - truth.0).powi(2) + (predicted.1 - truth.1).powi(2)).sqrt());
            f.update(truth);
        }
        for w in residuals[5..].windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "residuals {residuals:?}");
        }
    }

    #[test]
    fn covariance_stays_symmetric_psd() {
        let mut f = KalmanFilter::new((0.0f64, 0.0), KalmanConfig::default());
        let mut rng = crate::rng::SplitMix64::new(8);
        for t in 1..=200 {
            f.predict();
            if t % 3 != 0 {
                f.update((rng.next_f64() * 100.0, rng.next_f64() * 100.0));
            }
            let p = f.covariance();
            for i in 0..4 {
                for j in 0..4 {
                    assert!((p[i][j] - p[j][i]).abs() < 1e-9);
                }
            }
            // Monte Carlo PSD probe: x' P x >= -1e-9 |x|^2
            for _ in 0..8 {
                let v: Vec<f64> = (0..4).map(|_| rng.next_f64() * 2.0 - 1.0).collect();
                let mut quad = 0.0;
                for i in 0..4 {
                    for j in 0..4 {
                        quad += v[i] * p[i][j] * v[j];
                    }
                }
                let norm2: f64 = v.iter().map(|x| x * x).sum();
                assert!(quad >= -1e-9 * norm2, "quad {quad}");
            }
        }
    }

    #[test]
    fn updating_with_the_prediction_is_a_fixpoint() {
        let mut f = KalmanFilter::new((4.0f64, 9.0), KalmanConfig::default());
        f.update((6.0, 10.0));
        let predicted = f.predict();
        let before = f.state;
        f.update(predicted);
        for i in 0..4 {
            assert!((f.state[i] - before[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn plausibility_threshold() {
        let diag = (40.0f64 * 40.0 + 20.0 * 20.0).sqrt();
        assert!(displacement_plausible((0.0, 0.0), (10.0, 10.0), diag, 3.0));
        assert!(!displacement_plausible(
            (0.0, 0.0),
            (300.0, 0.0),
            diag,
            3.0
        ));
    }

    #[test]
    fn works_in_f32_too() {
        let mut f = KalmanFilter::new((1.0f32, 2.0), KalmanConfig::default());
        f.predict();
        f.update((3.0, 4.0));
        assert!(f.position().0.is_finite());
    }
}
