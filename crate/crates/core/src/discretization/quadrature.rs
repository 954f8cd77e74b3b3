//! Quadrature on the reference triangle and on the unit interval.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Quadrature rule on the reference triangle. Points are stored in barycentric
/// coordinates; weights sum to the reference area 1/2.
#[derive(Debug, Clone)]
pub struct QuadratureRule<T> {
    pub points: Vec<[T; 3]>,
    pub weights: Vec<T>,
    pub exactness_degree: usize,
}

impl<T: Scalar> QuadratureRule<T> {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Points in reference coordinates `(x, y) = (l1, l2)`.
    pub fn reference_points(&self) -> Vec<[T; 2]> {
        self.points.iter().map(|l| [l[1], l[2]]).collect()
    }
}

pub const MAX_EXACTNESS: usize = 10;

/// Returns a rule integrating every polynomial of total degree `exactness` exactly.
///
/// Degrees up to 5 use the classical symmetric rules (centroid, three interior
/// points, Radon's seven points). Higher degrees use a collapsed Gauss-Legendre
/// product rule.
pub fn quadrature<T: Scalar>(exactness: usize) -> Result<QuadratureRule<T>> {
    let c = T::lit;
    let third = T::one() / c(3.0);
    let (points, weights, degree) = match exactness {
        0 | 1 => (vec![[third; 3]], vec![c(0.5)], 1),
        2 => {
            let a = T::one() / c(6.0);
            let b = c(2.0) / c(3.0);
            (
                vec![[b, a, a], [a, b, a], [a, a, b]],
                vec![T::one() / c(6.0); 3],
                2,
            )
        }
        3..=5 => {
            let s15 = c(15.0).sqrt();
            let a = (c(6.0) - s15) / c(21.0);
            let b = (c(6.0) + s15) / c(21.0);
            let wa = (c(155.0) - s15) / c(2400.0);
            let wb = (c(155.0) + s15) / c(2400.0);
            let one = T::one();
            let two = c(2.0);
            (
                vec![
                    [third; 3],
                    [one - two * a, a, a],
                    [a, one - two * a, a],
                    [a, a, one - two * a],
                    [one - two * b, b, b],
                    [b, one - two * b, b],
                    [b, b, one - two * b],
                ],
                vec![c(9.0) / c(80.0), wa, wa, wa, wb, wb, wb],
                5,
            )
        }
        6..=MAX_EXACTNESS => collapsed_product(exactness),
        _ => return Err(Error::UnsupportedQuadrature(exactness)),
    };
    Ok(QuadratureRule {
        points,
        weights,
        exactness_degree: degree,
    })
}

#[allow(clippy::type_complexity)]
fn collapsed_product<T: Scalar>(exactness: usize) -> (Vec<[T; 3]>, Vec<T>, usize) {
    // x = s, y = r (1 - s), Jacobian (1 - s): degree d integrands become degree
    // d + 1 in s, so m points per direction need 2m - 1 >= d + 1.
    let m = (exactness + 3) / 2;
    let (nodes, w) = gauss_legendre_unit::<T>(m);
    let mut points = Vec::with_capacity(m * m);
    let mut weights = Vec::with_capacity(m * m);
    for i in 0..m {
        let s = nodes[i];
        for j in 0..m {
            let r = nodes[j];
            let x = s;
            let y = r * (T::one() - s);
            points.push([T::one() - x - y, x, y]);
            weights.push(w[i] * w[j] * (T::one() - s));
        }
    }
    (points, weights, 2 * m - 2)
}

/// Gauss-Legendre nodes and weights on `[0, 1]`, exact for degree `2n - 1`.
pub fn gauss_legendre_unit<T: Scalar>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n > 0, "Gauss-Legendre rule needs at least one point");
    let c = T::lit;
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let nn = T::from_usize_lossy(n);
    for i in 0..n {
        // Root i of P_n on [-1, 1], descending from 1.
        let guess = (T::PI() * (T::from_usize_lossy(i) + c(0.75)) / (nn + c(0.5))).cos();
        let mut x = guess;
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= T::epsilon() * c(4.0) {
                let (_, d) = legendre(n, x);
                dp = d;
                break;
            }
        }
        let w = c(2.0) / ((T::one() - x * x) * dp * dp);
        // Map to [0, 1], ascending.
        nodes[n - 1 - i] = (x + T::one()) * c(0.5);
        weights[n - 1 - i] = w * c(0.5);
    }
    (nodes, weights)
}

fn legendre<T: Scalar>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kk = T::from_usize_lossy(k);
        let p2 = ((c2(kk) - T::one()) * x * p1 - (kk - T::one()) * p0) / kk;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (T::one(), T::zero());
    }
    let nn = T::from_usize_lossy(n);
    let dp = nn * (x * p1 - p0) / (x * x - T::one());
    (p1, dp)
}

#[inline]
fn c2<T: Scalar>(k: T) -> T {
    k + k
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    /// Closed form of the monomial integral over the reference triangle.
    fn exact_monomial(a: u32, b: u32) -> f64 {
        factorial(a) * factorial(b) / factorial(a + b + 2)
    }

    fn integrate(rule: &QuadratureRule<f64>, a: i32, b: i32) -> f64 {
        rule.points
            .iter()
            .zip(&rule.weights)
            .map(|(l, w)| w * l[1].powi(a) * l[2].powi(b))
            .sum()
    }

    #[test]
    fn centroid_rule() {
        let r = quadrature::<f64>(1).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r.weights[0] - 0.5).abs() < 1e-16);
        assert!((r.points[0][1] - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn weights_sum_to_half() {
        for d in 0..=MAX_EXACTNESS {
            let r = quadrature::<f64>(d).unwrap();
            let s: f64 = r.weights.iter().sum();
            assert!((s - 0.5).abs() < 1e-14, "exactness {d}: {s}");
        }
    }

    #[test]
    fn monomials_integrated_exactly() {
        for d in 0..=MAX_EXACTNESS {
            let r = quadrature::<f64>(d).unwrap();
            assert!(r.exactness_degree >= d);
            for a in 0..=d as u32 {
                for b in 0..=(d as u32 - a) {
                    let q = integrate(&r, a as i32, b as i32);
                    let e = exact_monomial(a, b);
                    assert!((q - e).abs() < 1e-12, "exactness {d}, x^{a} y^{b}: {q} vs {e}");
                }
            }
        }
    }

    #[test]
    fn xy_and_x4() {
        let r = quadrature::<f64>(2).unwrap();
        assert!((integrate(&r, 1, 1) - 1.0 / 24.0).abs() < 1e-15);
        let r = quadrature::<f64>(4).unwrap();
        assert!((integrate(&r, 4, 0) - 1.0 / 30.0).abs() < 1e-15);
    }

    #[test]
    fn unsupported() {
        assert!(matches!(quadrature::<f64>(11), Err(Error::UnsupportedQuadrature(11))));
    }

    #[test]
    fn points_inside_triangle() {
        for d in 0..=MAX_EXACTNESS {
            for l in quadrature::<f64>(d).unwrap().points {
                assert!(l.iter().all(|&x| x > 0.0 && x < 1.0));
                assert!((l.iter().sum::<f64>() - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn gauss_legendre_exactness() {
        for n in 1..=8 {
            let (x, w) = gauss_legendre_unit::<f64>(n);
            for p in 0..(2 * n) as i32 {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p)).sum();
                assert!((q - 1.0 / f64::from(p + 1)).abs() < 1e-14, "n={n} p={p}");
            }
        }
    }
}
