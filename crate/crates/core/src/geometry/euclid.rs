use alloc::vec::Vec;

use crate::math::sqrt;

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    sqrt(dot(x, x))
}

pub(crate) fn distance_sq(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

pub(crate) fn distance(x: &[f64], y: &[f64]) -> f64 {
    sqrt(distance_sq(x, y))
}

pub(crate) fn sub(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

/// `(1-t)x + ty`; exact at both endpoints.
pub(crate) fn lerp(x: &[f64], y: &[f64], t: f64) -> Vec<f64> {
    let s = 1.0 - t;
    x.iter().zip(y).map(|(a, b)| s * a + t * b).collect()
}

/// Orthonormalizes `basis` with modified Gram-Schmidt. Returns `None` when
/// the vectors are (numerically) linearly dependent.
pub(crate) fn orthonormalize(basis: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(basis.len());
    for v in basis {
        let scale = norm(v);
        if !(scale > 0.0) {
            return None;
        }
        let mut w = v.clone();
        for e in &out {
            let c = dot(&w, e);
            w.iter_mut().zip(e).for_each(|(wi, ei)| *wi -= c * ei);
        }
        let n = norm(&w);
        if n <= 1e-10 * scale {
            return None;
        }
        w.iter_mut().for_each(|wi| *wi /= n);
        out.push(w);
    }
    Some(out)
}
