//! Derivative-free one-dimensional maximization.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// `(√5 − 1)/2`.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Result of a bracketed maximization.
#[derive(Debug, Clone, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
    /// Coarse pre-scan `(x, f(x))`, kept for diagnostics.
    pub scan: Vec<(f64, f64)>,
}

/// Golden-section search for a maximum of a unimodal `f` on `[lo, hi]`,
/// stopping once the bracket is narrower than `tol`. Ties keep the lower half.
pub fn golden_section_max<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "golden section needs lo < hi and tol > 0, got [{lo}, {hi}], tol {tol}"
        )));
    }
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc >= fd { (c, fc) } else { (d, fd) })
}

/// Evenly spaced scan of `f` on `[lo, hi]` (inclusive), evaluated in parallel.
pub fn scan<F>(f: &F, lo: f64, hi: f64, points: usize) -> Result<Vec<(f64, f64)>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if points < 3 || !(lo < hi) {
        return Err(Error::InvalidArgument(format!(
            "scan needs at least 3 points on a non-empty range, got {points} on [{lo}, {hi}]"
        )));
    }
    let step = (hi - lo) / (points - 1) as f64;
    (0..points)
        .into_par_iter()
        .map(|i| {
            let x = if i == points - 1 { hi } else { lo + i as f64 * step };
            f(x).map(|v| (x, v))
        })
        .collect()
}

/// Index of the largest value, earliest on ties.
fn argmax(scan: &[(f64, f64)]) -> usize {
    let mut best = 0;
    for (i, &(_, v)) in scan.iter().enumerate() {
        if v > scan[best].1 {
            best = i;
        }
    }
    best
}

/// Pre-scans `[lo, hi]` at `points` nodes, then refines the best interior
/// node by golden section within its two neighbours.
///
/// A pre-scan maximum on either edge is reported as [`Error::Boundary`]
/// with the scan attached.
pub fn bracketed_max<F>(f: &F, lo: f64, hi: f64, points: usize, tol: f64) -> Result<Maximum>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let scan = scan(f, lo, hi, points)?;
    let best = argmax(&scan);
    if best == 0 || best == scan.len() - 1 {
        return Err(Error::Boundary { lo, hi, edge: scan[best].0, scan });
    }
    let (x, value) = golden_section_max(f, scan[best - 1].0, scan[best + 1].0, tol)?;
    // The refinement can only land below the node when the peak is flat to
    // rounding; keep the node then.
    let (x, value) = if value >= scan[best].1 { (x, value) } else { scan[best] };
    Ok(Maximum { x, value, scan })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_vertex() {
        let (x, v) = golden_section_max(|x| Ok(-(x - 0.3).powi(2) + 2.0), -1.0, 2.0, 1e-9).unwrap();
        // A flat maximum only pins x to about √ε.
        assert!((x - 0.3).abs() < 1e-6);
        assert!((v - 2.0).abs() < 1e-15);
    }

    #[test]
    fn golden_prefers_lower_half_on_plateau() {
        let (x, _) = golden_section_max(|_| Ok(1.0), 0.0, 1.0, 1e-6).unwrap();
        assert!(x < 1e-5, "{x}");
    }

    #[test]
    fn bracketed_rejects_edge_maximum() {
        let err = bracketed_max(&|x: f64| Ok(x), 0.0, 1.0, 21, 1e-6).unwrap_err();
        match err {
            Error::Boundary { edge, scan, .. } => {
                assert_eq!(edge, 1.0);
                assert_eq!(scan.len(), 21);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bracketed_refines_interior_peak() {
        let f = |x: f64| Ok((-(x - 0.4321).powi(2) * 50.0).exp());
        let m = bracketed_max(&f, 0.0, 1.0, 21, 1e-8).unwrap();
        assert!((m.x - 0.4321).abs() < 1e-7);
        assert!(m.value <= 1.0);
    }

    #[test]
    fn errors_propagate() {
        let f = |x: f64| if x > 0.5 { Err(Error::NumericFailure { t: x }) } else { Ok(x) };
        assert!(matches!(bracketed_max(&f, 0.0, 1.0, 5, 1e-3), Err(Error::NumericFailure { .. })));
    }

    #[test]
    fn scan_is_ordered_and_inclusive() {
        let s = scan(&|x: f64| Ok(x * x), 1.0, 2.0, 5).unwrap();
        let xs: Vec<f64> = s.iter().map(|p| p.0).collect();
        assert_eq!(xs, vec![1.0, 1.25, 1.5, 1.75, 2.0]);
    }
}
