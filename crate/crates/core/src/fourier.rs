//! Fourier integrals `int_0^L f(t) e^{i w t} dt` of uniformly sampled data.
//!
//! The samples are interpolated by cubics and the interpolant is integrated
//! exactly against the oscillating kernel. This amounts to an attenuated DFT
//! plus endpoint corrections, so the error is `O(h^4)` for every frequency
//! rather than only for `w h << 1`, and a whole frequency grid costs one FFT.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Attenuation factor and the four endpoint weights for `theta = w h`.
#[derive(Debug, Clone, Copy)]
struct Weights {
    w: f64,
    alpha: [Complex64; 4],
}

fn weights(theta: f64) -> Weights {
    let t = theta;
    if t.abs() < 0.1 {
        let t2 = t * t;
        let t4 = t2 * t2;
        let t6 = t4 * t2;
        let t8 = t4 * t4;
        let (t3, t5, t7) = (t2 * t, t4 * t, t6 * t);
        Weights {
            w: 1.0 - 11.0 * t4 / 720.0 + 23.0 * t6 / 15120.0 - 139.0 * t8 / 1_814_400.0,
            alpha: [
                Complex64::new(
                    -2.0 / 3.0 + t2 / 45.0 + 103.0 * t4 / 15120.0 - 169.0 * t6 / 226_800.0
                        + 761.0 * t8 / 19_958_400.0,
                    2.0 * t / 45.0 + 2.0 * t3 / 105.0 - 8.0 * t5 / 2835.0 + 86.0 * t7 / 467_775.0,
                ),
                Complex64::new(
                    7.0 / 24.0 - 7.0 * t2 / 180.0 + 5.0 * t4 / 3456.0 - 7.0 * t6 / 259_200.0
                        + 7.0 * t8 / 22_809_600.0,
                    7.0 * t / 72.0 - t3 / 168.0 + 11.0 * t5 / 72576.0 - 13.0 * t7 / 5_987_520.0,
                ),
                Complex64::new(
                    -1.0 / 6.0 + t2 / 45.0 - 5.0 * t4 / 6048.0 + t6 / 64800.0 - t8 / 5_702_400.0,
                    -7.0 * t / 90.0 + t3 / 210.0 - 11.0 * t5 / 90720.0 + 13.0 * t7 / 7_484_400.0,
                ),
                Complex64::new(
                    1.0 / 24.0 - t2 / 180.0 + 5.0 * t4 / 24192.0 - t6 / 259_200.0
                        + t8 / 22_809_600.0,
                    7.0 * t / 360.0 - t3 / 840.0 + 11.0 * t5 / 362_880.0
                        - 13.0 * t7 / 29_937_600.0,
                ),
            ],
        }
    } else {
        let (s, c) = t.sin_cos();
        let (s2, c2) = (2.0 * t).sin_cos();
        let t2 = t * t;
        let t3 = t2 * t;
        let t4 = t2 * t2;
        let q = 6.0 + t2;
        Weights {
            w: q / (3.0 * t4) * (3.0 - 4.0 * c + c2),
            alpha: [
                Complex64::new(
                    ((-42.0 + 5.0 * t2) + q * (8.0 * c - c2)) / (6.0 * t4),
                    ((-12.0 * t + 6.0 * t3) + q * s2) / (6.0 * t4),
                ),
                Complex64::new(
                    (14.0 * (3.0 - t2) - 7.0 * q * c) / (6.0 * t4),
                    (30.0 * t - 5.0 * q * s) / (6.0 * t4),
                ),
                Complex64::new(
                    (-4.0 * (3.0 - t2) + 2.0 * q * c) / (3.0 * t4),
                    (-12.0 * t + 2.0 * q * s) / (3.0 * t4),
                ),
                Complex64::new(
                    (2.0 * (3.0 - t2) - q * c) / (6.0 * t4),
                    (6.0 * t - q * s) / (6.0 * t4),
                ),
            ],
        }
    }
}

fn combine(samples: &[Complex64], h: f64, omega: f64, dft: Complex64) -> Complex64 {
    let n = samples.len() - 1;
    let wt = weights(omega * h);
    let tail = Complex64::from_polar(1.0, omega * h * n as f64);
    let mut acc = dft * wt.w;
    for (j, a) in wt.alpha.iter().enumerate() {
        acc += a * samples[j] + tail * a.conj() * samples[n - j];
    }
    acc * h
}

fn check_len(samples: &[Complex64]) {
    assert!(
        samples.len() >= 8,
        "cubic Fourier quadrature needs at least 8 samples, got {}",
        samples.len()
    );
}

/// `int_0^{N h} f(t) e^{i omega t} dt` from `N + 1` samples `f(j h)`.
pub fn fourier_integral(samples: &[Complex64], h: f64, omega: f64) -> Complex64 {
    check_len(samples);
    let theta = omega * h;
    let step = Complex64::from_polar(1.0, theta);
    // re-anchor the phasor every 1024 samples to bound rounding drift
    let mut dft = Complex64::new(0.0, 0.0);
    let mut phase = Complex64::new(1.0, 0.0);
    for (j, f) in samples.iter().enumerate() {
        if j % 1024 == 0 {
            phase = Complex64::from_polar(1.0, theta * j as f64);
        }
        dft += f * phase;
        phase *= step;
    }
    combine(samples, h, omega, dft)
}

/// The same integral on the frequency grid `omega_k = 2 pi k / (m h)`,
/// `k = 0..m`, where `m >= samples.len()` is the zero-padded FFT length.
///
/// Indices above `m / 2` correspond to negative frequencies.
pub fn fourier_integral_grid(samples: &[Complex64], h: f64, m: usize) -> Vec<Complex64> {
    check_len(samples);
    assert!(m >= samples.len(), "FFT length {m} shorter than the data");
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    buf[..samples.len()].copy_from_slice(samples);
    // unnormalized inverse FFT computes sum_j f_j e^{+2 pi i j k / m}
    FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
    (0..m)
        .map(|k| {
            let signed = if k > m / 2 { k as f64 - m as f64 } else { k as f64 };
            let omega = 2.0 * std::f64::consts::PI * signed / (m as f64 * h);
            combine(samples, h, omega, buf[k])
        })
        .collect()
}
