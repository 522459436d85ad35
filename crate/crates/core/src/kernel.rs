//! Scaled theta bracket `[z; p]` and its trigonometric limit.
//!
//! The bracket is `θ₁(αz/2; p) / ((α/2) θ₁'(0; p))`. Both theta values share the
//! factor `p^{1/4}`, which cancels; what remains is evaluated from the product
//! form, real-analytic on `-1 < p < 1` with no branch choice for negative nomes.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_THETA_TERMS: usize = 100_000;

/// How `α` is fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// `α = 2π / (m + n g)`.
    LevelLocked,
    /// `α` supplied by the caller; `g` must pass the genericity gate.
    Free,
}

/// Model parameters `(n, m, g, p)` with the derived scale `α`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams<T: Scalar> {
    n: usize,
    m: u32,
    g: T,
    p: T,
    alpha: T,
    mode: Mode,
    /// `Π_{l≥1} (1 - p^{2l})`.
    euler: T,
}

/// Serializable header describing a parameter set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamsHeader {
    pub n: usize,
    pub m: u32,
    pub g: f64,
    pub p: f64,
    pub alpha: f64,
    pub mode: Mode,
}

impl<T: Scalar> ModelParams<T> {
    /// Level-locked parameters: `α = 2π/(m + n g)`, `g > 0`, `|p| < 1`.
    pub fn level_locked(n: usize, m: u32, g: T, p: T) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        if !(g > T::zero()) || !g.is_finite() {
            return Err(Error::InvalidParams(format!("level-locked mode needs g > 0, got {g}")));
        }
        let level = T::from_u32(m).unwrap() + T::from_usize_lossy(n) * g;
        let alpha = T::TAU() / level;
        Self::assemble(n, m, g, p, alpha, Mode::LevelLocked)
    }

    /// Free parameters with caller-supplied `α`; rejects `g` failing the genericity gate.
    pub fn free(n: usize, alpha: T, g: T, p: T) -> Result<Self> {
        let params = Self::free_unchecked(n, alpha, g, p)?;
        let defect = params.genericity_defect();
        if defect < T::lit(GENERICITY_TOL) {
            return Err(Error::GenericityViolation {
                g: g.to_f64_lossy(),
                defect: defect.to_f64_lossy(),
            });
        }
        Ok(params)
    }

    /// Free parameters without the genericity gate (used near rational couplings).
    pub fn free_unchecked(n: usize, alpha: T, g: T, p: T) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        if !(alpha > T::zero()) || !alpha.is_finite() || !g.is_finite() {
            return Err(Error::InvalidParams(format!("need finite α > 0, got α = {alpha}, g = {g}")));
        }
        Self::assemble(n, 0, g, p, alpha, Mode::Free)
    }

    fn assemble(n: usize, m: u32, g: T, p: T, alpha: T, mode: Mode) -> Result<Self> {
        if !p.is_finite() || p.abs() >= T::one() {
            return Err(Error::NonConvergent { p: p.to_f64_lossy() });
        }
        let euler = euler_factor(p)?;
        Ok(ModelParams { n, m, g, p, alpha, mode, euler })
    }

    /// Same model at a different coupling; level-locked mode recomputes `α`.
    pub fn with_g(&self, g: T) -> Result<Self> {
        match self.mode {
            Mode::LevelLocked => Self::level_locked(self.n, self.m, g, self.p),
            Mode::Free => Self::free_unchecked(self.n, self.alpha, g, self.p),
        }
    }

    /// Same model at a different nome.
    pub fn with_p(&self, p: T) -> Result<Self> {
        Self::assemble(self.n, self.m, self.g, p, self.alpha, self.mode)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn g(&self) -> T {
        self.g
    }

    pub fn p(&self) -> T {
        self.p
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_level_locked(&self) -> bool {
        self.mode == Mode::LevelLocked
    }

    /// Quasi-period `2π/α` of the bracket.
    pub fn period(&self) -> T {
        T::TAU() / self.alpha
    }

    /// `q = e^{iα}`.
    pub fn q(&self) -> Complex<T> {
        Complex::from_polar(T::one(), self.alpha)
    }

    /// `q^a = e^{iαa}` for real exponents.
    pub fn q_pow(&self, a: T) -> Complex<T> {
        Complex::from_polar(T::one(), self.alpha * a)
    }

    /// Distance of `g` from the non-generic set, `min |j g - a - (2π/α) b|`
    /// over `j = 1..n`, `a ∈ {0, -1, …, -WINDOW}`, `|b| ≤ WINDOW`.
    pub fn genericity_defect(&self) -> T {
        let period = self.period();
        let mut best = T::infinity();
        for j in 1..=self.n {
            let jg = T::from_usize_lossy(j) * self.g;
            for b in -GENERICITY_WINDOW..=GENERICITY_WINDOW {
                // nearest admissible a ≤ 0 to jg - period*b
                let target = jg - period * T::from_i64(b).unwrap();
                let a = target.round().min(T::zero()).max(-T::from_i64(GENERICITY_WINDOW).unwrap());
                best = best.min((target - a).abs());
            }
        }
        best
    }

    pub fn is_generic(&self) -> bool {
        self.genericity_defect() >= T::lit(GENERICITY_TOL)
    }

    /// Hashable identity of the full-precision parameter values.
    pub fn fingerprint(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.n.hash(&mut h);
        self.m.hash(&mut h);
        for x in [self.g, self.p, self.alpha] {
            x.integer_decode().hash(&mut h);
        }
        (self.mode == Mode::Free).hash(&mut h);
        h.finish()
    }

    pub fn header(&self) -> ParamsHeader {
        ParamsHeader {
            n: self.n,
            m: self.m,
            g: self.g.to_f64_lossy(),
            p: self.p.to_f64_lossy(),
            alpha: self.alpha.to_f64_lossy(),
            mode: self.mode,
        }
    }

    /// `[z; p]` for real `z`.
    pub fn bracket(&self, z: T) -> T {
        let half = self.alpha * T::lit(0.5);
        bracket_product(half * z, self.p) / half
    }

    /// `[z; p]` for complex `z`.
    pub fn bracket_complex(&self, z: Complex<T>) -> Result<Complex<T>> {
        let w = z * (self.alpha * T::lit(0.5));
        Ok(reduced_theta(w, self.p)? / (self.alpha * self.euler.powi(3)))
    }

    /// `[z]_k = Π_{0≤l<k} [z + l]`.
    pub fn elliptic_factorial(&self, z: T, k: u32) -> T {
        (0..k).fold(T::one(), |acc, l| acc * self.bracket(z + T::from_u32(l).unwrap()))
    }
}

/// Admissible window for `a` and `b` in the genericity gate.
pub const GENERICITY_WINDOW: i64 = 64;
/// Minimal allowed genericity defect in free mode.
pub const GENERICITY_TOL: f64 = 1e-8;

/// `Π_{l≥1} (1 - p^{2l})`, or `NonConvergent` if the factors do not settle.
fn euler_factor<T: Scalar>(p: T) -> Result<T> {
    let x0 = p * p;
    let cutoff = T::epsilon() * T::epsilon();
    let mut x = x0;
    let mut prod = T::one();
    for _ in 0..MAX_THETA_TERMS {
        if x < cutoff {
            return Ok(prod);
        }
        prod = prod * (T::one() - x);
        x = x * x0;
    }
    Err(Error::NonConvergent { p: p.to_f64_lossy() })
}

/// `sin w · Π_{l≥1} (1 + 4 p^{2l} sin²w / (1 - p^{2l})²)` for real `w`.
///
/// Every factor is at least one, so the product keeps full relative accuracy
/// even where the alternating series cancels (|p| close to 1, small w).
fn bracket_product<T: Scalar>(w: T, p: T) -> T {
    let x0 = p * p;
    let cutoff = T::epsilon() * T::epsilon();
    let s = w.sin();
    let s2 = T::lit(4.0) * s * s;
    let mut x = x0;
    let mut prod = T::one();
    for _ in 0..MAX_THETA_TERMS {
        if x < cutoff {
            break;
        }
        let d = T::one() - x;
        prod = prod * (T::one() + x * s2 / (d * d));
        x = x * x0;
    }
    s * prod
}

/// `2 sin w · Π_{l≥1} (1 - p^{2l})(1 - 2 p^{2l} cos 2w + p^{4l})`, i.e. `θ₁(w; p) / p^{1/4}`.
fn reduced_theta<T: Scalar>(w: Complex<T>, p: T) -> Result<Complex<T>> {
    let x0 = p * p;
    let cutoff = T::epsilon() * T::epsilon();
    let c2 = (w + w).cos();
    let two = T::lit(2.0);
    let mut x = x0;
    let mut prod = w.sin() * two;
    for _ in 0..MAX_THETA_TERMS {
        if x * (T::one() + c2.norm()) < cutoff {
            return Ok(prod);
        }
        prod = prod * (T::one() - x) * (c2 * (-two * x) + T::one() + x * x);
        x = x * x0;
    }
    Err(Error::NonConvergent { p: p.to_f64_lossy() })
}

/// Principal `p^{1/4}` (complex for negative `p`).
fn quarter_power<T: Scalar>(p: T) -> Complex<T> {
    if p >= T::zero() {
        Complex::new(p.powf(T::lit(0.25)), T::zero())
    } else {
        Complex::from_polar(p.abs().powf(T::lit(0.25)), T::FRAC_PI_4())
    }
}

/// Jacobi `θ₁(z; p) = 2 Σ_{l≥0} (-1)^l p^{(l+1/2)²} sin((2l+1) z)`.
pub fn theta1<T: Scalar>(z: Complex<T>, p: T) -> Result<Complex<T>> {
    if !p.is_finite() || p.abs() >= T::one() {
        return Err(Error::NonConvergent { p: p.to_f64_lossy() });
    }
    Ok(quarter_power(p) * reduced_theta(z, p)?)
}

/// `θ₁'(0; p)`.
pub fn theta1_prime_zero<T: Scalar>(p: T) -> Result<Complex<T>> {
    if !p.is_finite() || p.abs() >= T::one() {
        return Err(Error::NonConvergent { p: p.to_f64_lossy() });
    }
    Ok(quarter_power(p) * T::lit(2.0) * euler_factor(p)?.powi(3))
}

/// `[z]_q = sin(αz/2) / sin(α/2)`.
pub fn trig_bracket<T: Scalar>(z: T, alpha: T) -> Result<T> {
    let half = alpha * T::lit(0.5);
    let den = half.sin();
    if den.abs() < T::singular_threshold() {
        return Err(Error::SingularDenominator {
            context: format!("sin(α/2) with α = {alpha}"),
            value: den.abs().to_f64_lossy(),
        });
    }
    Ok((half * z).sin() / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type P = ModelParams<f64>;

    // Defining series 2 Σ (-1)^l p^{(l+1/2)^2} sin((2l+1)z), summed directly.
    fn series_theta(z: f64, p: f64) -> Complex<f64> {
        let mut sum = 0.0;
        for l in 0..400i32 {
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * p.abs().powi(l * (l + 1)) * ((2 * l + 1) as f64 * z).sin();
        }
        quarter_power(p) * (2.0 * sum)
    }

    #[test]
    fn theta1_zeros() {
        for p in [-0.6, 0.0, 0.3, 0.8] {
            assert!(theta1(Complex::new(0.0, 0.0), p).unwrap().norm() < 1e-300);
        }
        assert!(theta1(Complex::new(PI, 0.0), 0.3).unwrap().norm() < 1e-14);
    }

    #[test]
    fn theta1_product_matches_series() {
        for &p in &[-0.7, -0.5, -0.1, 0.0, 0.1, 0.5, 0.7] {
            for &z in &[0.1, 0.7, PI / 2.0, 2.3, -1.9] {
                let s = theta1(Complex::new(z, 0.0), p).unwrap();
                let q = series_theta(z, p);
                let rel = (s - q).norm() / q.norm().max(1e-300);
                assert!(rel < 1e-12, "p={p} z={z} rel={rel:e}");
            }
        }
    }

    #[test]
    fn theta1_rejects_unit_nome() {
        assert!(matches!(theta1(Complex::new(0.5, 0.0), 1.0), Err(Error::NonConvergent { .. })));
        assert!(matches!(P::level_locked(2, 1, 1.0, -1.0), Err(Error::NonConvergent { .. })));
    }

    #[test]
    fn bracket_trigonometric_at_zero_nome() {
        let prm = P::free(3, 0.77, 0.41, 0.0).unwrap();
        for z in [-3.0f64, -0.5, 0.0, 0.3, 2.2, 7.1] {
            let expect = 2.0 / 0.77 * (0.77 * z / 2.0).sin();
            assert!((prm.bracket(z) - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn bracket_is_scaled_theta_ratio() {
        for p in [-0.6, 0.2, 0.6] {
            let prm = P::free(2, 1.2, 0.3, p).unwrap();
            let d = theta1_prime_zero(p).unwrap() * 0.6;
            for z in [0.4, 1.9, -3.3] {
                let t = theta1(Complex::new(0.6 * z, 0.0), p).unwrap() / d;
                assert!((t.re - prm.bracket(z)).abs() < 1e-13 * t.norm() && t.im.abs() < 1e-13);
            }
        }
    }

    #[test]
    fn bracket_zero_at_period() {
        let prm = P::free(2, 1.3, 0.4, 0.25).unwrap();
        assert!(prm.bracket(prm.period()).abs() < 1e-13);
        assert_eq!(prm.bracket(0.0), 0.0);
    }

    #[test]
    fn bracket_odd_and_quasi_periodic() {
        for p in [-0.5, 0.0, 0.5] {
            let prm = P::free(2, 0.9, 0.3, p).unwrap();
            let mut z = -5.0;
            while z <= 5.0 {
                let b = prm.bracket(z);
                let scale = b.abs().max(1e-300);
                assert!((prm.bracket(-z) + b).abs() <= 1e-12 * scale + 1e-15);
                assert!((prm.bracket(z + prm.period()) + b).abs() <= 1e-12 * scale + 1e-14);
                z += 0.37;
            }
        }
    }

    #[test]
    fn bracket_positive_inside_period() {
        for p in [-0.95, -0.5, 0.0, 0.5, 0.95] {
            let prm = P::level_locked(3, 2, 0.7, p).unwrap();
            let period = prm.period();
            for i in 1..100 {
                let z = period * i as f64 / 100.0;
                assert!(prm.bracket(z) > 0.0, "p={p} z={z}");
            }
        }
    }

    #[test]
    fn bracket_complex_agrees_on_real_axis() {
        let prm = P::free(2, 1.1, 0.3, -0.4).unwrap();
        for z in [0.2, 1.7, -2.4] {
            let c = prm.bracket_complex(Complex::new(z, 0.0)).unwrap();
            assert!((c.re - prm.bracket(z)).abs() < 1e-13 && c.im.abs() < 1e-15);
        }
        // Odd in complex z as well.
        let z = Complex::new(0.4, 0.3);
        let s = prm.bracket_complex(z).unwrap() + prm.bracket_complex(-z).unwrap();
        assert!(s.norm() < 1e-13);
    }

    #[test]
    fn elliptic_factorial_examples() {
        let prm = P::free(2, 0.8, 0.35, 0.2).unwrap();
        assert_eq!(prm.elliptic_factorial(1.3, 0), 1.0);
        assert_eq!(prm.elliptic_factorial(1.0, 1), prm.bracket(1.0));
        let g = prm.g();
        let two = prm.bracket(g) * prm.bracket(g + 1.0);
        assert!((prm.elliptic_factorial(g, 2) - two).abs() < 1e-15);
    }

    #[test]
    fn trig_bracket_examples() {
        assert!((trig_bracket(1.0f64, 0.9).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(trig_bracket(0.0f64, 0.9).unwrap(), 0.0);
        assert!((trig_bracket(2.0f64, PI / 3.0).unwrap() - 3f64.sqrt()).abs() < 1e-14);
        assert!(matches!(trig_bracket(1.0f64, 2.0 * PI), Err(Error::SingularDenominator { .. })));
    }

    #[test]
    fn level_locked_alpha() {
        for (n, m, g) in [(2usize, 1u32, 0.7), (3, 2, 1.3), (4, 3, 0.3)] {
            let prm = P::level_locked(n, m, g, 0.1).unwrap();
            let rel = (prm.alpha() * (m as f64 + n as f64 * g) - 2.0 * PI).abs() / (2.0 * PI);
            assert!(rel < 1e-14);
        }
    }

    #[test]
    fn genericity_gate() {
        // 2π/α = 3 makes every integer reachable.
        let alpha = 2.0 * PI / 3.0;
        assert!(matches!(
            P::free(2, alpha, 1.0, 0.0),
            Err(Error::GenericityViolation { .. })
        ));
        assert!(P::free(2, 2.399827, 1.0, 0.0).is_ok());
        assert!(!P::level_locked(2, 1, 1.0, 0.0).unwrap().is_generic());
    }

    #[test]
    fn single_precision_bracket() {
        let prm = ModelParams::<f32>::free(2, 0.9, 0.3, 0.4).unwrap();
        let hi = ModelParams::<f64>::free(2, 0.9, 0.3, 0.4).unwrap();
        for z in [0.3f32, 1.2, 2.5] {
            assert!((prm.bracket(z) as f64 - hi.bracket(z as f64)).abs() < 1e-5);
        }
    }
}
