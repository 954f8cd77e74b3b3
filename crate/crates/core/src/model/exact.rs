use crate::mesh::Point2;
use crate::model::params::ModelParams;
use crate::scalar::Scalar;

/// Closed-form fields with the spatial and temporal derivatives the strong
/// operators need.
///
/// Conventions: `grad_u[i][j] = d_j u_i`, `hess_u[i][j][k] = d_j d_k u_i`.
pub trait ExactSolution<T: Scalar>: Send + Sync {
    fn u(&self, x: Point2<T>, t: T) -> [T; 2];
    fn grad_u(&self, x: Point2<T>, t: T) -> [[T; 2]; 2];
    fn hess_u(&self, x: Point2<T>, t: T) -> [[[T; 2]; 2]; 2];
    /// Gradient of `du/dt`.
    fn grad_u_t(&self, x: Point2<T>, t: T) -> [[T; 2]; 2];

    fn p(&self, x: Point2<T>, t: T) -> T;
    fn grad_p(&self, x: Point2<T>, t: T) -> [T; 2];
    fn hess_p(&self, x: Point2<T>, t: T) -> [[T; 2]; 2];
    fn p_t(&self, x: Point2<T>, t: T) -> T;

    fn temp(&self, x: Point2<T>, t: T) -> T;
    fn grad_temp(&self, x: Point2<T>, t: T) -> [T; 2];
    fn hess_temp(&self, x: Point2<T>, t: T) -> [[T; 2]; 2];
    fn temp_t(&self, x: Point2<T>, t: T) -> T;

    fn div_u(&self, x: Point2<T>, t: T) -> T {
        let g = self.grad_u(x, t);
        g[0][0] + g[1][1]
    }

    fn div_u_t(&self, x: Point2<T>, t: T) -> T {
        let g = self.grad_u_t(x, t);
        g[0][0] + g[1][1]
    }

    /// Pseudo-total pressure `-lambda div u + alpha p + beta T`.
    fn xi(&self, params: &ModelParams<T>, x: Point2<T>, t: T) -> T {
        -params.lambda * self.div_u(x, t) + params.alpha * self.p(x, t) + params.beta * self.temp(x, t)
    }
}

/// Manufactured benchmark on the unit square:
///
/// ```text
/// u = e^-t ( sin(2 pi y)(cos(2 pi x) - 1) + c sin(pi x) sin(pi y),
///            sin(2 pi x)(1 - cos(2 pi y)) + c sin(pi x) sin(pi y) ),  c = 1/(mu + lambda)
/// p = T = e^-t sin(pi x) sin(pi y)
/// ```
#[derive(Debug, Clone, Copy)]
pub struct Example1<T> {
    /// `1 / (mu + lambda)`
    pub c: T,
}

struct Trig<T> {
    s1x: T,
    c1x: T,
    s1y: T,
    c1y: T,
    s2x: T,
    c2x: T,
    s2y: T,
    c2y: T,
    decay: T,
}

impl<T: Scalar> Example1<T> {
    pub fn new(params: &ModelParams<T>) -> Self {
        Self {
            c: T::one() / (params.mu + params.lambda),
        }
    }

    fn trig(x: Point2<T>, t: T) -> Trig<T> {
        let pi = T::PI();
        let two_pi = pi + pi;
        let (s1x, c1x) = (pi * x.x).sin_cos();
        let (s1y, c1y) = (pi * x.y).sin_cos();
        let (s2x, c2x) = (two_pi * x.x).sin_cos();
        let (s2y, c2y) = (two_pi * x.y).sin_cos();
        Trig {
            s1x,
            c1x,
            s1y,
            c1y,
            s2x,
            c2x,
            s2y,
            c2y,
            decay: (-t).exp(),
        }
    }

    fn grad_u_spatial(&self, r: &Trig<T>) -> [[T; 2]; 2] {
        let pi = T::PI();
        let two_pi = pi + pi;
        let one = T::one();
        let cp = self.c * pi;
        [
            [
                -two_pi * r.s2y * r.s2x + cp * r.c1x * r.s1y,
                two_pi * r.c2y * (r.c2x - one) + cp * r.s1x * r.c1y,
            ],
            [
                two_pi * r.c2x * (one - r.c2y) + cp * r.c1x * r.s1y,
                two_pi * r.s2x * r.s2y + cp * r.s1x * r.c1y,
            ],
        ]
    }
}

fn scale2<T: Scalar>(m: [[T; 2]; 2], s: T) -> [[T; 2]; 2] {
    [[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]]
}

impl<T: Scalar> ExactSolution<T> for Example1<T> {
    fn u(&self, x: Point2<T>, t: T) -> [T; 2] {
        let r = Self::trig(x, t);
        let one = T::one();
        let bump = self.c * r.s1x * r.s1y;
        [
            r.decay * (r.s2y * (r.c2x - one) + bump),
            r.decay * (r.s2x * (one - r.c2y) + bump),
        ]
    }

    fn grad_u(&self, x: Point2<T>, t: T) -> [[T; 2]; 2] {
        let r = Self::trig(x, t);
        scale2(self.grad_u_spatial(&r), r.decay)
    }

    fn hess_u(&self, x: Point2<T>, t: T) -> [[[T; 2]; 2]; 2] {
        let r = Self::trig(x, t);
        let pi = T::PI();
        let pi2 = pi * pi;
        let four_pi2 = T::lit(4.0) * pi2;
        let cp2 = self.c * pi2;
        let one = T::one();
        let a = r.decay;
        let bump = cp2 * r.s1x * r.s1y;
        let cross = cp2 * r.c1x * r.c1y;
        let u1_xx = -four_pi2 * r.s2y * r.c2x - bump;
        let u1_xy = -four_pi2 * r.c2y * r.s2x + cross;
        let u1_yy = -four_pi2 * r.s2y * (r.c2x - one) - bump;
        let u2_xx = -four_pi2 * r.s2x * (one - r.c2y) - bump;
        let u2_xy = four_pi2 * r.c2x * r.s2y + cross;
        let u2_yy = four_pi2 * r.s2x * r.c2y - bump;
        [
            [[a * u1_xx, a * u1_xy], [a * u1_xy, a * u1_yy]],
            [[a * u2_xx, a * u2_xy], [a * u2_xy, a * u2_yy]],
        ]
    }

    fn grad_u_t(&self, x: Point2<T>, t: T) -> [[T; 2]; 2] {
        scale2(self.grad_u(x, t), -T::one())
    }

    fn p(&self, x: Point2<T>, t: T) -> T {
        let r = Self::trig(x, t);
        r.decay * r.s1x * r.s1y
    }

    fn grad_p(&self, x: Point2<T>, t: T) -> [T; 2] {
        let r = Self::trig(x, t);
        let pa = T::PI() * r.decay;
        [pa * r.c1x * r.s1y, pa * r.s1x * r.c1y]
    }

    fn hess_p(&self, x: Point2<T>, t: T) -> [[T; 2]; 2] {
        let r = Self::trig(x, t);
        let pi = T::PI();
        let a = pi * pi * r.decay;
        let off = a * r.c1x * r.c1y;
        let diag = -a * r.s1x * r.s1y;
        [[diag, off], [off, diag]]
    }

    fn p_t(&self, x: Point2<T>, t: T) -> T {
        -self.p(x, t)
    }

    fn temp(&self, x: Point2<T>, t: T) -> T {
        self.p(x, t)
    }

    fn grad_temp(&self, x: Point2<T>, t: T) -> [T; 2] {
        self.grad_p(x, t)
    }

    fn hess_temp(&self, x: Point2<T>, t: T) -> [[T; 2]; 2] {
        self.hess_p(x, t)
    }

    fn temp_t(&self, x: Point2<T>, t: T) -> T {
        -self.temp(x, t)
    }
}

/// Polynomial in two variables as a list of `(coefficient, x power, y power)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly2<T> {
    pub terms: Vec<(T, u32, u32)>,
}

impl<T: Scalar> Poly2<T> {
    pub fn new(terms: &[(f64, u32, u32)]) -> Self {
        Self {
            terms: terms.iter().map(|&(c, a, b)| (T::lit(c), a, b)).collect(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .filter(|t| t.0 != T::zero())
            .map(|t| t.1 + t.2)
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, x: Point2<T>) -> T {
        self.terms.iter().fold(T::zero(), |acc, &(c, a, b)| {
            acc + c * x.x.powi(a as i32) * x.y.powi(b as i32)
        })
    }

    pub fn dx(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|t| t.1 > 0)
                .map(|&(c, a, b)| (c * T::from_usize_lossy(a as usize), a - 1, b))
                .collect(),
        }
    }

    pub fn dy(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|t| t.2 > 0)
                .map(|&(c, a, b)| (c * T::from_usize_lossy(b as usize), a, b - 1))
                .collect(),
        }
    }

    pub fn scaled(&self, s: T) -> Self {
        Self {
            terms: self.terms.iter().map(|&(c, a, b)| (c * s, a, b)).collect(),
        }
    }
}

/// Value, gradient and Hessian of a polynomial, precomputed derivative polynomials.
#[derive(Debug, Clone)]
struct PolyField<T> {
    f: Poly2<T>,
    d: [Poly2<T>; 2],
    dd: [[Poly2<T>; 2]; 2],
}

impl<T: Scalar> PolyField<T> {
    fn new(f: Poly2<T>) -> Self {
        let fx = f.dx();
        let fy = f.dy();
        let dd = [[fx.dx(), fx.dy()], [fy.dx(), fy.dy()]];
        Self { f, d: [fx, fy], dd }
    }

    fn value(&self, x: Point2<T>) -> T {
        self.f.eval(x)
    }

    fn grad(&self, x: Point2<T>) -> [T; 2] {
        [self.d[0].eval(x), self.d[1].eval(x)]
    }

    fn hess(&self, x: Point2<T>) -> [[T; 2]; 2] {
        [
            [self.dd[0][0].eval(x), self.dd[0][1].eval(x)],
            [self.dd[1][0].eval(x), self.dd[1][1].eval(x)],
        ]
    }
}

/// Polynomial-in-space, linear-in-time solution:
///
/// ```text
/// u = (1 + t) U(x),  p = (1 + t) P(x),  T = Q(x) - (alpha / beta) t P(x)
/// ```
///
/// so `alpha p + beta T` does not depend on time and `xi` is linear in time.
/// Every lagged term of the split schemes is then exact, and backward Euler
/// reproduces the solution whenever the spaces contain `U`, `P` and `Q`.
#[derive(Debug, Clone)]
pub struct PolynomialSolution<T> {
    u: [PolyField<T>; 2],
    pressure: PolyField<T>,
    q: PolyField<T>,
    ratio: T,
}

impl<T: Scalar> PolynomialSolution<T> {
    pub fn new(u: [Poly2<T>; 2], p: Poly2<T>, q: Poly2<T>, alpha_over_beta: T) -> Self {
        let [u0, u1] = u;
        Self {
            u: [PolyField::new(u0), PolyField::new(u1)],
            pressure: PolyField::new(p),
            q: PolyField::new(q),
            ratio: alpha_over_beta,
        }
    }

    /// A fixed solution with displacement of degree `k` and pressure and
    /// temperature of degree `l` (each in 1..=3).
    pub fn with_degrees(k: usize, l: usize, params: &ModelParams<T>) -> Self {
        let mut u0 = vec![(0.2, 1, 0), (-0.1, 0, 0), (0.15, 0, 1)];
        let mut u1 = vec![(0.05, 0, 0), (-0.3, 0, 1), (0.1, 1, 0)];
        let mut p = vec![(1.0, 0, 0), (1.0, 1, 0), (-0.5, 0, 1)];
        let mut q = vec![(0.5, 0, 0), (-0.2, 1, 0), (0.7, 0, 1)];
        if k >= 2 {
            u0.extend([(1.0, 2, 0), (0.5, 1, 1), (-0.3, 0, 2)]);
            u1.extend([(-0.4, 2, 0), (1.0, 1, 1), (0.6, 0, 2)]);
        }
        if k >= 3 {
            u0.extend([(0.3, 3, 0), (-0.2, 1, 2)]);
            u1.extend([(0.1, 2, 1), (-0.25, 0, 3)]);
        }
        if l >= 2 {
            p.extend([(0.5, 2, 0), (-0.3, 1, 1), (0.4, 0, 2)]);
            q.extend([(0.2, 2, 0), (0.1, 1, 1), (-0.3, 0, 2)]);
        }
        if l >= 3 {
            p.extend([(0.2, 3, 0), (-0.1, 1, 2)]);
            q.extend([(-0.15, 2, 1), (0.05, 0, 3)]);
        }
        Self::new(
            [Poly2::new(&u0), Poly2::new(&u1)],
            Poly2::new(&p),
            Poly2::new(&q),
            params.alpha / params.beta,
        )
    }

    fn growth(t: T) -> T {
        T::one() + t
    }
}

impl<T: Scalar> ExactSolution<T> for PolynomialSolution<T> {
    fn u(&self, x: Point2<T>, t: T) -> [T; 2] {
        let s = Self::growth(t);
        [s * self.u[0].value(x), s * self.u[1].value(x)]
    }

    fn grad_u(&self, x: Point2<T>, t: T) -> [[T; 2]; 2] {
        scale2([self.u[0].grad(x), self.u[1].grad(x)], Self::growth(t))
    }

    fn hess_u(&self, x: Point2<T>, t: T) -> [[[T; 2]; 2]; 2] {
        let s = Self::growth(t);
        [scale2(self.u[0].hess(x), s), scale2(self.u[1].hess(x), s)]
    }

    fn grad_u_t(&self, x: Point2<T>, _t: T) -> [[T; 2]; 2] {
        [self.u[0].grad(x), self.u[1].grad(x)]
    }

    fn p(&self, x: Point2<T>, t: T) -> T {
        Self::growth(t) * self.pressure.value(x)
    }

    fn grad_p(&self, x: Point2<T>, t: T) -> [T; 2] {
        let g = self.pressure.grad(x);
        let s = Self::growth(t);
        [s * g[0], s * g[1]]
    }

    fn hess_p(&self, x: Point2<T>, t: T) -> [[T; 2]; 2] {
        scale2(self.pressure.hess(x), Self::growth(t))
    }

    fn p_t(&self, x: Point2<T>, _t: T) -> T {
        self.pressure.value(x)
    }

    fn temp(&self, x: Point2<T>, t: T) -> T {
        self.q.value(x) - self.ratio * t * self.pressure.value(x)
    }

    fn grad_temp(&self, x: Point2<T>, t: T) -> [T; 2] {
        let gq = self.q.grad(x);
        let gp = self.pressure.grad(x);
        let s = self.ratio * t;
        [gq[0] - s * gp[0], gq[1] - s * gp[1]]
    }

    fn hess_temp(&self, x: Point2<T>, t: T) -> [[T; 2]; 2] {
        let hq = self.q.hess(x);
        let hp = self.pressure.hess(x);
        let s = self.ratio * t;
        [
            [hq[0][0] - s * hp[0][0], hq[0][1] - s * hp[0][1]],
            [hq[1][0] - s * hp[1][0], hq[1][1] - s * hp[1][1]],
        ]
    }

    fn temp_t(&self, x: Point2<T>, _t: T) -> T {
        -self.ratio * self.pressure.value(x)
    }
}

/// The zero solution.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroSolution;

impl<T: Scalar> ExactSolution<T> for ZeroSolution {
    fn u(&self, _: Point2<T>, _: T) -> [T; 2] {
        [T::zero(); 2]
    }
    fn grad_u(&self, _: Point2<T>, _: T) -> [[T; 2]; 2] {
        [[T::zero(); 2]; 2]
    }
    fn hess_u(&self, _: Point2<T>, _: T) -> [[[T; 2]; 2]; 2] {
        [[[T::zero(); 2]; 2]; 2]
    }
    fn grad_u_t(&self, _: Point2<T>, _: T) -> [[T; 2]; 2] {
        [[T::zero(); 2]; 2]
    }
    fn p(&self, _: Point2<T>, _: T) -> T {
        T::zero()
    }
    fn grad_p(&self, _: Point2<T>, _: T) -> [T; 2] {
        [T::zero(); 2]
    }
    fn hess_p(&self, _: Point2<T>, _: T) -> [[T; 2]; 2] {
        [[T::zero(); 2]; 2]
    }
    fn p_t(&self, _: Point2<T>, _: T) -> T {
        T::zero()
    }
    fn temp(&self, _: Point2<T>, _: T) -> T {
        T::zero()
    }
    fn grad_temp(&self, _: Point2<T>, _: T) -> [T; 2] {
        [T::zero(); 2]
    }
    fn hess_temp(&self, _: Point2<T>, _: T) -> [[T; 2]; 2] {
        [[T::zero(); 2]; 2]
    }
    fn temp_t(&self, _: Point2<T>, _: T) -> T {
        T::zero()
    }
}
