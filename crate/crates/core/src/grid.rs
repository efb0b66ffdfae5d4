//! Sample grids.

/// `steps` points strictly inside `(lo, hi)`, evenly spaced, endpoints excluded.
pub fn open_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    let h = (hi - lo) / (steps + 1) as f64;
    (1..=steps).map(|k| lo + h * k as f64).collect()
}

/// `steps` evenly spaced parameters in `[0, 1]`, both ends included.
pub fn unit_grid(steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..steps)
            .map(|k| if k + 1 == steps { 1.0 } else { k as f64 / (steps - 1) as f64 })
            .collect(),
    }
}
