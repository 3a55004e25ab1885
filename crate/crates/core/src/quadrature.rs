//! Gauss-Hermite rules for expectations over a normal distribution.

use alloc::vec::Vec;

use nalgebra::DMatrix;

/// Nodes and weights `(x_i, w_i)` with `Σ w_i f(x_i) ≈ E[f(X)]` for
/// `X ~ N(0, σ²)`. Weights sum to one. Built by Golub-Welsch from the Jacobi
/// matrix of the Hermite recurrence.
pub fn gaussian_rule(n: usize, sigma: f64) -> Vec<(f64, f64)> {
    assert!(n > 0, "quadrature needs at least one node");
    if sigma == 0.0 {
        return alloc::vec![(0.0, 1.0)];
    }
    let jacobi = DMatrix::<f64>::from_fn(n, n, |r, c| {
        if r + 1 == c || c + 1 == r {
            (r.max(c) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let eig = jacobi.symmetric_eigen();
    let scale = 2f64.sqrt() * sigma;
    let mut rule: Vec<(f64, f64)> = (0..n)
        .map(|k| (eig.eigenvalues[k] * scale, eig.eigenvectors[(0, k)].powi(2)))
        .collect();
    rule.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = rule.iter().map(|r| r.1).sum();
    for r in &mut rule {
        r.1 /= total;
    }
    rule
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moment(rule: &[(f64, f64)], k: i32) -> f64 {
        rule.iter().map(|(x, w)| w * x.powi(k)).sum()
    }

    #[test]
    fn reproduces_normal_moments() {
        let sigma = 0.3;
        let rule = gaussian_rule(21, sigma);
        assert!((moment(&rule, 0) - 1.0).abs() < 1e-13);
        assert!(moment(&rule, 1).abs() < 1e-13);
        assert!((moment(&rule, 2) - sigma.powi(2)).abs() < 1e-13);
        assert!((moment(&rule, 4) - 3.0 * sigma.powi(4)).abs() < 1e-13);
        assert!((moment(&rule, 6) - 15.0 * sigma.powi(6)).abs() < 1e-13);
    }

    #[test]
    fn symmetric_nodes() {
        let rule = gaussian_rule(7, 1.0);
        for k in 0..7 {
            assert!((rule[k].0 + rule[6 - k].0).abs() < 1e-12);
            assert!((rule[k].1 - rule[6 - k].1).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_width() {
        assert_eq!(gaussian_rule(21, 0.0), alloc::vec![(0.0, 1.0)]);
    }
}
