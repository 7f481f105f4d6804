//! Steady-state frequency response of the bare cavity EO transducer.
//!
//! The microwave mode `m` and optical mode `a` are coupled by a beam-splitter
//! interaction of strength `g`. Each mode leaks into an external (coupling)
//! port and an intrinsic-loss bath. The converted output is the microwave
//! coupling port, so it carries four inputs: the optical signal, the reflected
//! microwave probe and the two intrinsic-loss baths.

use num_complex::Complex;

use crate::error::{domain, Result};
use crate::Real;

/// Microwave resonance used throughout the figures, `2π × 10 GHz` (rad/s).
pub const DEFAULT_MICROWAVE_FREQUENCY: f64 = 2.0 * std::f64::consts::PI * 10.0e9;

/// Optical resonance, `2π × 300 THz` (rad/s).
pub const DEFAULT_OPTICAL_FREQUENCY: f64 = 2.0 * std::f64::consts::PI * 300.0e12;

/// Physical constants entering the Bose-Einstein factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants<T> {
    /// Reduced Planck constant (J·s).
    pub hbar: T,
    /// Boltzmann constant (J/K).
    pub k_b: T,
}

impl<T: Real> PhysicalConstants<T> {
    /// CODATA 2018 values. Both are exact in the 2019 SI.
    pub fn codata() -> Self {
        Self {
            hbar: T::lit(1.054_571_817e-34),
            k_b: T::lit(1.380_649e-23),
        }
    }
}

impl<T: Real> Default for PhysicalConstants<T> {
    fn default() -> Self {
        Self::codata()
    }
}

/// Mean photon number of a thermal bath at angular `frequency` (rad/s) and
/// `temperature` (K), `1 / (exp(ħω/k_B T) − 1)`.
///
/// Exactly zero at zero temperature.
pub fn thermal_occupation<T: Real>(frequency: T, temperature: T) -> Result<T> {
    if !(frequency > T::zero()) || !frequency.is_finite() {
        return domain(format!("frequency must be positive and finite, got {frequency}"));
    }
    if !(temperature >= T::zero()) || !temperature.is_finite() {
        return domain(format!("temperature must be non-negative, got {temperature}"));
    }
    if temperature == T::zero() {
        return Ok(T::zero());
    }
    let c = PhysicalConstants::<T>::codata();
    // ħ/k_B first: the individual constants are close to f32's range limits.
    let x = (c.hbar / c.k_b) * (frequency / temperature);
    Ok(T::one() / x.exp_m1())
}

/// Physical parameters of the EO system. Rates and frequencies are angular (rad/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EoParams<T> {
    pub g: T,
    pub kappa_m_c: T,
    pub kappa_m_i: T,
    pub kappa_a_c: T,
    pub kappa_a_i: T,
    pub omega_m: T,
    pub omega_o: T,
    /// Bath temperature (K).
    pub temperature: T,
}

impl<T: Real> EoParams<T> {
    /// Builds parameters from dimensionless quantities with equal total loss
    /// rates `κ_m = κ_a = kappa`, at the default resonances and zero temperature.
    pub fn from_cooperativity(cooperativity: T, zeta_m: T, zeta_a: T, kappa: T) -> Result<Self> {
        if !(cooperativity >= T::zero()) {
            return domain(format!("cooperativity must be >= 0, got {cooperativity}"));
        }
        for (name, z) in [("zeta_m", zeta_m), ("zeta_a", zeta_a)] {
            if !(z >= T::zero() && z <= T::one()) {
                return domain(format!("{name} must lie in [0, 1], got {z}"));
            }
        }
        if !(kappa > T::zero()) {
            return domain(format!("kappa must be positive, got {kappa}"));
        }
        let params = Self {
            g: (cooperativity * kappa * kappa).sqrt() * T::half(),
            kappa_m_c: zeta_m * kappa,
            kappa_m_i: (T::one() - zeta_m) * kappa,
            kappa_a_c: zeta_a * kappa,
            kappa_a_i: (T::one() - zeta_a) * kappa,
            omega_m: T::lit(DEFAULT_MICROWAVE_FREQUENCY),
            omega_o: T::lit(DEFAULT_OPTICAL_FREQUENCY),
            temperature: T::zero(),
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_frequencies(mut self, omega_m: T, omega_o: T) -> Self {
        self.omega_m = omega_m;
        self.omega_o = omega_o;
        self
    }

    pub fn with_temperature(mut self, temperature: T) -> Self {
        self.temperature = temperature;
        self
    }

    pub fn kappa_m(&self) -> T {
        self.kappa_m_c + self.kappa_m_i
    }

    pub fn kappa_a(&self) -> T {
        self.kappa_a_c + self.kappa_a_i
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("g", self.g),
            ("kappa_m_c", self.kappa_m_c),
            ("kappa_m_i", self.kappa_m_i),
            ("kappa_a_c", self.kappa_a_c),
            ("kappa_a_i", self.kappa_a_i),
            ("omega_m", self.omega_m),
            ("omega_o", self.omega_o),
            ("temperature", self.temperature),
        ];
        for (name, v) in fields {
            if !(v >= T::zero()) || !v.is_finite() {
                return domain(format!("{name} must be finite and >= 0, got {v}"));
            }
        }
        if !(self.kappa_m() > T::zero()) {
            return domain("total microwave loss rate is zero");
        }
        if !(self.kappa_a() > T::zero()) {
            return domain("total optical loss rate is zero");
        }
        Ok(())
    }
}

/// Dimensionless quantities derived from [`EoParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedEoQuantities<T> {
    pub kappa_m: T,
    pub kappa_a: T,
    /// `C_g = 4g² / (κ_m κ_a)`.
    pub cooperativity: T,
    pub zeta_m: T,
    pub zeta_a: T,
    /// Thermal occupation of the microwave bath at `omega_m`.
    pub n_m: T,
    /// Thermal occupation of the optical bath at `omega_o`.
    pub n_a: T,
}

pub fn derived_quantities<T: Real>(params: &EoParams<T>) -> Result<DerivedEoQuantities<T>> {
    params.validate()?;
    let kappa_m = params.kappa_m();
    let kappa_a = params.kappa_a();
    Ok(DerivedEoQuantities {
        kappa_m,
        kappa_a,
        cooperativity: T::lit(4.0) * params.g * params.g / (kappa_m * kappa_a),
        zeta_m: params.kappa_m_c / kappa_m,
        zeta_a: params.kappa_a_c / kappa_a,
        n_m: thermal_occupation(params.omega_m, params.temperature)?,
        n_a: thermal_occupation(params.omega_o, params.temperature)?,
    })
}

/// Complex amplitudes from each input port to the converted output at one
/// detuning, together with their squared magnitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferCoefficients<T> {
    /// Detuning ω from resonance (rad/s).
    pub detuning: T,
    /// Optical signal → output.
    pub t_s: Complex<T>,
    /// Microwave probe → output (reflection).
    pub t_p: Complex<T>,
    /// Microwave intrinsic-loss bath → output.
    pub t_em: Complex<T>,
    /// Optical intrinsic-loss bath → output.
    pub t_ea: Complex<T>,
    /// Transduction efficiency `|t_s|²`.
    pub eta: T,
    /// Probe transmissivity `|t_p|²`.
    pub kappa_p: T,
    pub kappa_em: T,
    pub kappa_ea: T,
}

impl<T: Real> TransferCoefficients<T> {
    /// Total loss-port transmissivity `κ_E = κ_Em + κ_Ea`.
    pub fn kappa_e(&self) -> T {
        self.kappa_em + self.kappa_ea
    }

    /// `η + κ_P + κ_E − 1`; zero for a passive lossless network.
    pub fn normalization_defect(&self) -> T {
        self.eta + self.kappa_p + self.kappa_em + self.kappa_ea - T::one()
    }
}

/// Solves the Langevin equations in the frequency domain and returns the
/// transfer amplitudes onto the converted output at `detuning`.
///
/// With `D(ω) = (−iω + κ_m/2)(−iω + κ_a/2) + g²` the output reads
/// `t_S = ig√(κ_mc κ_ac)/D`, `t_P = κ_mc(−iω + κ_a/2)/D − 1`,
/// `t_Em = √(κ_mc κ_mi)(−iω + κ_a/2)/D` and `t_Ea = ig√(κ_mc κ_ai)/D`.
pub fn transfer_coefficients<T: Real>(
    params: &EoParams<T>,
    detuning: T,
) -> Result<TransferCoefficients<T>> {
    params.validate()?;
    if !detuning.is_finite() {
        return domain(format!("detuning must be finite, got {detuning}"));
    }
    let half = T::half();
    let mw = Complex::new(params.kappa_m() * half, -detuning);
    let opt = Complex::new(params.kappa_a() * half, -detuning);
    let g2 = params.g * params.g;
    let denom = mw * opt + Complex::new(g2, T::zero());
    let i = Complex::new(T::zero(), T::one());

    let ig = i * params.g;
    let t_s = ig * (params.kappa_m_c * params.kappa_a_c).sqrt() / denom;
    let t_p = opt * params.kappa_m_c / denom - T::one();
    let t_em = opt * (params.kappa_m_c * params.kappa_m_i).sqrt() / denom;
    let t_ea = ig * (params.kappa_m_c * params.kappa_a_i).sqrt() / denom;

    Ok(TransferCoefficients {
        detuning,
        t_s,
        t_p,
        t_em,
        t_ea,
        eta: t_s.norm_sqr(),
        kappa_p: t_p.norm_sqr(),
        kappa_em: t_em.norm_sqr(),
        kappa_ea: t_ea.norm_sqr(),
    })
}

/// On-resonance efficiency `4C_g ζ_m ζ_a / (1 + C_g)²`.
pub fn eta_resonant<T: Real>(cooperativity: T, zeta_m: T, zeta_a: T) -> T {
    let one_plus = T::one() + cooperativity;
    T::lit(4.0) * cooperativity * zeta_m * zeta_a / (one_plus * one_plus)
}

/// On-resonance probe transmissivity `(2ζ_m / (1 + C_g) − 1)²`.
pub fn kappa_p_resonant<T: Real>(cooperativity: T, zeta_m: T) -> T {
    let r = T::two() * zeta_m / (T::one() + cooperativity) - T::one();
    r * r
}

/// Cooperativity at or below unity that produces on-resonance efficiency
/// `eta` for the given coupling ratios.
///
/// The two roots of `4Cζ_mζ_a/(1+C)² = η` multiply to one; the large root is
/// computed first and inverted to avoid cancellation.
pub fn cooperativity_for_efficiency<T: Real>(eta: T, zeta_m: T, zeta_a: T) -> Result<T> {
    let z = zeta_m * zeta_a;
    if !(eta > T::zero() && eta <= z) {
        return domain(format!(
            "efficiency {eta} unreachable: must lie in (0, zeta_m*zeta_a = {z}]"
        ));
    }
    let b = T::two() * z / eta - T::one();
    let disc = (b * b - T::one()).max(T::zero());
    let large = b + disc.sqrt();
    Ok(T::one() / large)
}
