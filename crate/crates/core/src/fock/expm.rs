use nalgebra::DMatrix;

use crate::C64;

const TAYLOR_ORDER: usize = 18;

/// Matrix exponential by scaling and squaring around a fixed-order Taylor series.
///
/// The argument is scaled by `2^-s` until its 1-norm is at most ½, where the
/// order-18 remainder is below `1e-22` relative.
pub fn expm(a: &DMatrix<C64>) -> DMatrix<C64> {
    let n = a.nrows();
    let norm = (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = a * C64::from(0.5_f64.powi(squarings as i32));

    let id = DMatrix::<C64>::identity(n, n);
    let mut acc = id.clone();
    for j in (1..=TAYLOR_ORDER).rev() {
        acc = &id + &scaled * acc * C64::from(1.0 / j as f64);
    }
    for _ in 0..squarings {
        acc = &acc * &acc;
    }
    acc
}
