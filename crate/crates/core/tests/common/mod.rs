#![allow(dead_code)]

use std::f64::consts::PI;

use rand::Rng;
use w2eit::PeriodicDensity;

/// Smooth random density: a random trigonometric polynomial of degree ≤ 4
/// mapped affinely into a random sub-range of `[lo, hi]`.
pub fn random_density(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> PeriodicDensity {
    let degree = rng.random_range(1..=4);
    let coeffs: Vec<(f64, f64)> = (1..=degree)
        .map(|_| (rng.random_range(-1.0..1.0), rng.random_range(0.0..2.0 * PI)))
        .collect();
    let raw: Vec<f64> = (0..n)
        .map(|i| {
            let t = i as f64 / n as f64;
            coeffs
                .iter()
                .enumerate()
                .map(|(k, (a, ph))| a * (2.0 * PI * (k + 1) as f64 * t + ph).cos())
                .sum()
        })
        .collect();
    let (smin, smax) = raw
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let low = rng.random_range(lo..(lo + 0.5 * (hi - lo)));
    let high = rng.random_range((low + 0.2 * (hi - lo))..=hi);
    let scale = if smax > smin { (high - low) / (smax - smin) } else { 0.0 };
    PeriodicDensity::new(raw.iter().map(|v| low + (v - smin) * scale).collect()).unwrap()
}

pub fn sine_density(n: usize, amp: f64, freq: f64, shift: f64) -> PeriodicDensity {
    PeriodicDensity::from_fn(n, |t| 1.0 + amp * (2.0 * PI * freq * (t - shift)).sin()).unwrap()
}

/// Random zero-mean perturbation built from a few low harmonics.
pub fn random_zero_mean(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let a: Vec<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut v: Vec<f64> = (0..n)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / n as f64;
            a[0] * t.cos() + a[1] * t.sin() + a[2] * (2.0 * t).cos() + a[3] * (3.0 * t).sin()
                + a[4] * (5.0 * t).cos() + a[5] * (7.0 * t).sin()
        })
        .collect();
    let mean = v.iter().sum::<f64>() / n as f64;
    v.iter_mut().for_each(|x| *x -= mean);
    v
}
