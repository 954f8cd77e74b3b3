use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Symmetric 2x2 tensor `[[kxx, kxy], [kxy, kyy]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spd2<T> {
    pub kxx: T,
    pub kxy: T,
    pub kyy: T,
}

impl<T: Scalar> Spd2<T> {
    pub fn new(kxx: T, kxy: T, kyy: T) -> Self {
        Self { kxx, kxy, kyy }
    }

    pub fn isotropic(k: T) -> Self {
        Self::new(k, T::zero(), k)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.kxx > T::zero() && self.kxx * self.kyy - self.kxy * self.kxy > T::zero()
    }

    #[inline]
    pub fn apply(&self, g: [T; 2]) -> [T; 2] {
        [self.kxx * g[0] + self.kxy * g[1], self.kxy * g[0] + self.kyy * g[1]]
    }

    /// `-div(K grad f)` for constant `K`, from the Hessian of `f`.
    #[inline]
    pub fn neg_div_grad(&self, hess: [[T; 2]; 2]) -> T {
        -(self.kxx * hess[0][0] + self.kxy * (hess[0][1] + hess[1][0]) + self.kyy * hess[1][1])
    }
}

/// Lamé parameters `(lambda, mu)` from Young's modulus and Poisson's ratio.
pub fn derive_lame<T: Scalar>(young: T, poisson: T) -> Result<(T, T)> {
    if !(young > T::zero()) {
        return Err(Error::InvalidParameters(format!("Young's modulus must be positive, got {young}")));
    }
    if !(poisson > T::zero() && poisson < T::lit(0.5)) {
        return Err(Error::InvalidParameters(format!(
            "Poisson's ratio must lie in (0, 0.5), got {poisson}"
        )));
    }
    let one = T::one();
    let two = T::lit(2.0);
    let lambda = young * poisson / ((one + poisson) * (one - two * poisson));
    let mu = young / (two * (one + poisson));
    Ok((lambda, mu))
}

/// How violations of the sign/ordering assumptions on the coefficients are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AssumptionMode {
    /// Violations are errors.
    #[default]
    Strict,
    /// Violations are reported as warnings; needed for degenerate storage coefficients.
    Permissive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T> {
    pub young: T,
    pub poisson: T,
    pub lambda: T,
    pub mu: T,
    /// Biot-Willis coefficient.
    pub alpha: T,
    /// Thermal stress coefficient.
    pub beta: T,
    /// Effective thermal capacity.
    pub a0: T,
    /// Thermal dilation coefficient.
    pub b0: T,
    /// Specific storage coefficient.
    pub c0: T,
    /// Permeability over fluid viscosity.
    pub permeability: Spd2<T>,
    /// Effective thermal conductivity.
    pub conductivity: Spd2<T>,
}

impl<T: Scalar> ModelParams<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn from_young_poisson(
        young: T,
        poisson: T,
        alpha: T,
        beta: T,
        a0: T,
        b0: T,
        c0: T,
        permeability: Spd2<T>,
        conductivity: Spd2<T>,
    ) -> Result<Self> {
        let (lambda, mu) = derive_lame(young, poisson)?;
        Ok(Self {
            young,
            poisson,
            lambda,
            mu,
            alpha,
            beta,
            a0,
            b0,
            c0,
            permeability,
            conductivity,
        })
    }

    /// Coefficients of the manufactured benchmark with `K = Theta = I`:
    /// `nu = 0.3, E = 1, a0 = c0 = 0.2, b0 = 0.1, alpha = beta = 0.1`.
    pub fn benchmark() -> Self {
        let c = T::lit;
        Self::from_young_poisson(
            c(1.0),
            c(0.3),
            c(0.1),
            c(0.1),
            c(0.2),
            c(0.1),
            c(0.2),
            Spd2::isotropic(c(1.0)),
            Spd2::isotropic(c(1.0)),
        )
        .expect("benchmark parameters are valid")
    }

    /// Sets Young's modulus and Poisson's ratio, re-deriving the Lamé parameters.
    pub fn with_young_poisson(mut self, young: T, poisson: T) -> Result<Self> {
        let (lambda, mu) = derive_lame(young, poisson)?;
        self.young = young;
        self.poisson = poisson;
        self.lambda = lambda;
        self.mu = mu;
        Ok(self)
    }

    /// Coefficients of the pressure-temperature reaction block:
    /// `[[c0 + a^2/l, a b/l - b0], [a b/l - b0, a0 + b^2/l]]`.
    pub fn reaction_matrix(&self) -> [[T; 2]; 2] {
        let l = self.lambda;
        let off = self.alpha * self.beta / l - self.b0;
        [
            [self.c0 + self.alpha * self.alpha / l, off],
            [off, self.a0 + self.beta * self.beta / l],
        ]
    }

    /// Checks positivity of `K`, `Theta`, the Lamé parameters and the coupling
    /// coefficients, and `a0, c0 > b0 >= 0`. Returns warnings in permissive mode.
    pub fn validate(&self, mode: AssumptionMode) -> Result<Vec<String>> {
        let mut hard = Vec::new();
        if !self.permeability.is_positive_definite() {
            hard.push("permeability tensor is not symmetric positive definite".to_string());
        }
        if !self.conductivity.is_positive_definite() {
            hard.push("conductivity tensor is not symmetric positive definite".to_string());
        }
        if !(self.lambda > T::zero() && self.lambda.is_finite() && self.mu > T::zero()) {
            hard.push(format!("Lame parameters must be positive (lambda={}, mu={})", self.lambda, self.mu));
        }
        if !hard.is_empty() {
            return Err(Error::InvalidParameters(hard.join("; ")));
        }

        let mut soft = Vec::new();
        if !(self.alpha > T::zero() && self.beta > T::zero()) {
            soft.push(format!(
                "coupling coefficients should be positive (alpha={}, beta={})",
                self.alpha, self.beta
            ));
        }
        if !(self.b0 >= T::zero() && self.a0 > self.b0 && self.c0 > self.b0) {
            soft.push(format!(
                "storage coefficients should satisfy a0, c0 > b0 >= 0 (a0={}, b0={}, c0={})",
                self.a0, self.b0, self.c0
            ));
        }
        match mode {
            AssumptionMode::Strict if !soft.is_empty() => Err(Error::InvalidParameters(soft.join("; "))),
            _ => Ok(soft),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs()
    }

    #[test]
    fn lame_values() {
        let (l, m) = derive_lame(1.0, 0.3).unwrap();
        assert!(close(l, 0.576_923_076_9, 1e-9) && close(m, 0.384_615_384_6, 1e-9));
        let (l, m) = derive_lame(1.0, 0.499).unwrap();
        assert!(close(l, 166.444_296_4, 1e-8) && close(m, 0.333_555_703_8, 1e-8));
        let (l, m) = derive_lame(24.0, 0.499).unwrap();
        assert!(close(l, 3994.663, 1e-6) && close(m, 8.005_337, 1e-6));
    }

    #[test]
    fn incompressible_limit_rejected() {
        assert!(derive_lame(1.0, 0.5).is_err());
        assert!(derive_lame(1.0, 0.7).is_err());
        assert!(derive_lame(-1.0, 0.3).is_err());
    }

    #[test]
    fn lambda_grows_towards_incompressibility() {
        let (l3, _) = derive_lame(1.0, 0.3).unwrap();
        let (l499, _) = derive_lame(1.0, 0.499).unwrap();
        assert!(l499 > 100.0 * l3);
    }

    #[test]
    fn degenerate_storage_is_a_warning_when_permissive() {
        let mut p = ModelParams::<f64>::benchmark();
        p.a0 = 0.0;
        p.b0 = 0.0;
        p.c0 = 0.0;
        assert!(p.validate(AssumptionMode::Strict).is_err());
        let warnings = p.validate(AssumptionMode::Permissive).unwrap();
        assert_eq!(warnings.len(), 1);
        assert!(ModelParams::<f64>::benchmark().validate(AssumptionMode::Strict).unwrap().is_empty());
    }

    #[test]
    fn indefinite_tensor_is_always_an_error() {
        let mut p = ModelParams::<f64>::benchmark();
        p.permeability = Spd2::new(1.0, 2.0, 1.0);
        assert!(p.validate(AssumptionMode::Permissive).is_err());
        p.permeability = Spd2::isotropic(1e-9);
        assert!(p.validate(AssumptionMode::Strict).is_ok());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn reaction_block_is_spd(
            young in 0.01f64..100.0,
            poisson in 0.01f64..0.4999,
            alpha in 1e-3f64..2.0,
            beta in 1e-3f64..2.0,
            b0 in 0.0f64..1.0,
            da in 1e-3f64..1.0,
            dc in 1e-3f64..1.0,
        ) {
            let p = ModelParams::from_young_poisson(
                young, poisson, alpha, beta, b0 + da, b0, b0 + dc,
                Spd2::isotropic(1.0), Spd2::isotropic(1.0),
            ).unwrap();
            prop_assert!(p.validate(AssumptionMode::Strict).is_ok());
            let m = p.reaction_matrix();
            prop_assert_eq!(m[0][1], m[1][0]);
            let tr = m[0][0] + m[1][1];
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            let disc = ((m[0][0] - m[1][1]).powi(2) + 4.0 * m[0][1] * m[0][1]).sqrt();
            let smallest = 0.5 * (tr - disc);
            prop_assert!(det > 0.0 && smallest > 0.0, "eigenvalue {smallest}");
        }
    }
}
