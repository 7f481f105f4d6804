//! Brute-force validator for the closed forms.
//!
//! The EO response is obtained by numerically solving the frequency-domain
//! Langevin system `V = M₁V + M₂V_in + M₃V_i`, and the squeezers are applied
//! as Bogoliubov maps on explicit coefficient lists. Nothing here calls the
//! transfer, composition or noise formulas of [`crate::physics`] and
//! [`crate::channel`]; only the Bose factor and the final capacity bound are
//! shared.

use std::fmt;

use num_complex::Complex;

use crate::capacity::{self, CapacityResult};
use crate::channel::{self, ChannelDescriptor, ChannelKind, PortOccupations, SqueezerPair};
use crate::error::{Error, Result};
use crate::physics::{thermal_occupation, EoParams};
use crate::Real;

/// 2×2 complex matrix, row-major.
pub type Mat2<T> = [[Complex<T>; 2]; 2];

/// Coefficient matrices of the frequency-domain Langevin system at one detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemMatrices<T> {
    /// Mode-mode coupling.
    pub m1: Mat2<T>,
    /// External inputs `[P_in, S_in]`.
    pub m2: Mat2<T>,
    /// Intrinsic noise `[ε_m, ε_a]`.
    pub m3: Mat2<T>,
}

pub fn system_matrices<T: Real>(params: &EoParams<T>, detuning: T) -> Result<SystemMatrices<T>> {
    params.validate()?;
    let zero = Complex::new(T::zero(), T::zero());
    let dm = Complex::new(params.kappa_m() * T::half(), -detuning);
    let da = Complex::new(params.kappa_a() * T::half(), -detuning);
    let ig = Complex::new(T::zero(), params.g);
    let real = |x: T| Complex::new(x, T::zero());
    Ok(SystemMatrices {
        m1: [[zero, ig / dm], [ig / da, zero]],
        m2: [
            [real(params.kappa_m_c.sqrt()) / dm, zero],
            [zero, real(params.kappa_a_c.sqrt()) / da],
        ],
        m3: [
            [real(params.kappa_m_i.sqrt()) / dm, zero],
            [zero, real(params.kappa_a_i.sqrt()) / da],
        ],
    })
}

/// Solves `A X = B` by Gaussian elimination with partial pivoting.
///
/// `a` is `n×n`, `b` is `n×k`, both row-major.
pub fn solve_dense<T: Real>(
    mut a: Vec<Vec<Complex<T>>>,
    mut b: Vec<Vec<Complex<T>>>,
) -> Result<Vec<Vec<Complex<T>>>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::Contract("solve_dense: dimension mismatch".into()));
    }
    let scale = a
        .iter()
        .flatten()
        .map(|z| z.norm())
        .fold(T::zero(), T::max);
    let tiny = T::epsilon() * scale * T::lit(n as f64);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].norm().partial_cmp(&a[j][col].norm()).unwrap())
            .unwrap();
        if !(a[pivot][col].norm() > tiny) {
            return Err(Error::Singular(format!("zero pivot in column {col}")));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == Complex::new(T::zero(), T::zero()) {
                continue;
            }
            for k in col..n {
                let v = a[col][k];
                a[row][k] = a[row][k] - f * v;
            }
            for k in 0..b[row].len() {
                let v = b[col][k];
                b[row][k] = b[row][k] - f * v;
            }
        }
    }
    let width = b.first().map_or(0, Vec::len);
    let mut x = vec![vec![Complex::new(T::zero(), T::zero()); width]; n];
    for row in (0..n).rev() {
        for k in 0..width {
            let mut acc = b[row][k];
            for j in row + 1..n {
                acc = acc - a[row][j] * x[j][k];
            }
            x[row][k] = acc / a[row][row];
        }
    }
    Ok(x)
}

/// Transfer amplitudes onto the converted output, obtained numerically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericTransfer<T> {
    pub signal: Complex<T>,
    pub probe: Complex<T>,
    pub loss_m: Complex<T>,
    pub loss_a: Complex<T>,
}

impl<T: Real> NumericTransfer<T> {
    pub fn eta(&self) -> T {
        self.signal.norm_sqr()
    }

    pub fn kappa_p(&self) -> T {
        self.probe.norm_sqr()
    }

    pub fn kappa_em(&self) -> T {
        self.loss_m.norm_sqr()
    }

    pub fn kappa_ea(&self) -> T {
        self.loss_a.norm_sqr()
    }
}

/// Solves `(I − M₁)V = M₂V_in + M₃V_i` for unit drives on each port and applies
/// the output relation `out = √κ_mc·m − P_in`.
pub fn numeric_transfer<T: Real>(params: &EoParams<T>, detuning: T) -> Result<NumericTransfer<T>> {
    let sys = system_matrices(params, detuning)?;
    let one = Complex::new(T::one(), T::zero());
    let zero = Complex::new(T::zero(), T::zero());
    let lhs = vec![
        vec![one - sys.m1[0][0], zero - sys.m1[0][1]],
        vec![zero - sys.m1[1][0], one - sys.m1[1][1]],
    ];
    // Columns: P_in, S_in, ε_m, ε_a.
    let rhs = vec![
        vec![sys.m2[0][0], sys.m2[0][1], sys.m3[0][0], sys.m3[0][1]],
        vec![sys.m2[1][0], sys.m2[1][1], sys.m3[1][0], sys.m3[1][1]],
    ];
    let modes = solve_dense(lhs, rhs)?;
    let root = params.kappa_m_c.sqrt();
    let microwave = &modes[0];
    Ok(NumericTransfer {
        probe: microwave[0] * root - one,
        signal: microwave[1] * root,
        loss_m: microwave[2] * root,
        loss_a: microwave[3] * root,
    })
}

/// Input ports of the full network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Port {
    Signal,
    /// Probe before the squeezer.
    Probe,
    Ancilla,
    LossM,
    LossA,
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Port::Signal => "S_in",
            Port::Probe => "P0",
            Port::Ancilla => "A0",
            Port::LossM => "E_m",
            Port::LossA => "E_a",
        };
        f.write_str(s)
    }
}

/// Whether a port enters an expression through `a` or `a†`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ladder {
    Annihilation,
    Creation,
}

impl Ladder {
    fn flip(self) -> Self {
        match self {
            Ladder::Annihilation => Ladder::Creation,
            Ladder::Creation => Ladder::Annihilation,
        }
    }
}

/// Input ports with their occupations.
#[derive(Debug, Clone, PartialEq)]
pub struct PortVector<T> {
    entries: Vec<(Port, T)>,
}

impl<T: Real> PortVector<T> {
    /// Signal in vacuum plus the four noise ports.
    pub fn new(occupations: &PortOccupations<T>) -> Result<Self> {
        occupations.validate()?;
        Ok(Self {
            entries: vec![
                (Port::Signal, T::zero()),
                (Port::Probe, occupations.n_p0),
                (Port::Ancilla, occupations.n_a0),
                (Port::LossM, occupations.n_em),
                (Port::LossA, occupations.n_ea),
            ],
        })
    }

    pub fn occupation(&self, port: Port) -> T {
        self.entries
            .iter()
            .find(|(p, _)| *p == port)
            .map_or(T::zero(), |(_, n)| *n)
    }

    pub fn ports(&self) -> impl Iterator<Item = Port> + '_ {
        self.entries.iter().map(|(p, _)| *p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term<T> {
    pub port: Port,
    pub ladder: Ladder,
    pub amplitude: Complex<T>,
}

/// A mode operator as a linear combination of input-port operators.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ModeExpr<T> {
    terms: Vec<Term<T>>,
}

impl<T: Real> ModeExpr<T> {
    pub fn port(port: Port, ladder: Ladder) -> Self {
        Self {
            terms: vec![Term {
                port,
                ladder,
                amplitude: Complex::new(T::one(), T::zero()),
            }],
        }
    }

    pub fn terms(&self) -> &[Term<T>] {
        &self.terms
    }

    pub fn scaled(&self, factor: Complex<T>) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    amplitude: t.amplitude * factor,
                    ..*t
                })
                .collect(),
        }
    }

    pub fn scaled_real(&self, factor: T) -> Self {
        self.scaled(Complex::new(factor, T::zero()))
    }

    /// Hermitian conjugate: conjugates amplitudes and swaps `a ↔ a†`.
    pub fn adjoint(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    port: t.port,
                    ladder: t.ladder.flip(),
                    amplitude: t.amplitude.conj(),
                })
                .collect(),
        }
    }

    /// Sum, merging terms on the same port and ladder.
    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for t in &other.terms {
            match out
                .terms
                .iter_mut()
                .find(|u| u.port == t.port && u.ladder == t.ladder)
            {
                Some(u) => u.amplitude = u.amplitude + t.amplitude,
                None => out.terms.push(*t),
            }
        }
        out
    }

    pub fn coefficient(&self, port: Port, ladder: Ladder) -> Complex<T> {
        self.terms
            .iter()
            .filter(|t| t.port == port && t.ladder == ladder)
            .fold(Complex::new(T::zero(), T::zero()), |acc, t| acc + t.amplitude)
    }

    /// `[e, e†]` as a number: `Σ|a|² − Σ|b|²`.
    pub fn commutator(&self) -> T {
        self.terms.iter().fold(T::zero(), |acc, t| match t.ladder {
            Ladder::Annihilation => acc + t.amplitude.norm_sqr(),
            Ladder::Creation => acc - t.amplitude.norm_sqr(),
        })
    }

    /// `⟨e†e⟩` over independent thermal inputs, optionally skipping one port.
    fn normal_moment(&self, ports: &PortVector<T>, skip: Option<Port>) -> T {
        self.terms
            .iter()
            .filter(|t| Some(t.port) != skip)
            .fold(T::zero(), |acc, t| {
                let n = ports.occupation(t.port);
                let w = t.amplitude.norm_sqr();
                acc + match t.ladder {
                    Ladder::Annihilation => w * n,
                    Ladder::Creation => w * (n + T::one()),
                }
            })
    }

    /// `⟨e e†⟩` over independent thermal inputs, optionally skipping one port.
    fn anti_normal_moment(&self, ports: &PortVector<T>, skip: Option<Port>) -> T {
        self.terms
            .iter()
            .filter(|t| Some(t.port) != skip)
            .fold(T::zero(), |acc, t| {
                let n = ports.occupation(t.port);
                let w = t.amplitude.norm_sqr();
                acc + match t.ladder {
                    Ladder::Annihilation => w * (n + T::one()),
                    Ladder::Creation => w * n,
                }
            })
    }
}

/// Second moments of the composed output mode.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSet<T> {
    /// The output mode itself.
    pub output: ModeExpr<T>,
    /// `⟨out†out⟩` with the signal in vacuum.
    pub output_moment: T,
    /// `|coefficient of S_in|²`.
    pub signal_gain: T,
    /// `⟨n†n⟩` of the non-signal part.
    pub noise_normal: T,
    /// `⟨n n†⟩` of the non-signal part.
    pub noise_anti_normal: T,
    /// Squared magnitudes per (port, ladder).
    pub per_port: Vec<(Port, Ladder, T)>,
}

impl<T: Real> MomentSet<T> {
    pub fn port_weight(&self, port: Port, ladder: Ladder) -> T {
        self.per_port
            .iter()
            .filter(|(p, l, _)| *p == port && *l == ladder)
            .fold(T::zero(), |acc, (_, _, w)| acc + *w)
    }
}

/// Propagates the probe/ancilla through `S(G)`, the numerically solved EO
/// scattering and `S†(G′)`, and collects the output moments.
///
/// The anti-squeezer's phase reference is locked to the probe reflection: the
/// converter output is rotated by `−arg t_P` before recombination.
pub fn squeeze_compose_numeric<T: Real>(
    transfer: &NumericTransfer<T>,
    squeezers: &SqueezerPair<T>,
    occupations: &PortOccupations<T>,
) -> Result<MomentSet<T>> {
    let ports = PortVector::new(occupations)?;
    let one = T::one();
    let g = squeezers.g;
    let gp = squeezers.g_prime;

    let p0 = ModeExpr::port(Port::Probe, Ladder::Annihilation);
    let a0_dag = ModeExpr::port(Port::Ancilla, Ladder::Creation);
    // S(G): P_in = √G P0 + √(G−1) A0†,  A† = √(G−1) P0 + √G A0†
    let p_in = p0.scaled_real(g.sqrt()).plus(&a0_dag.scaled_real((g - one).sqrt()));
    let ancilla_dag = p0.scaled_real((g - one).sqrt()).plus(&a0_dag.scaled_real(g.sqrt()));

    let converted = ModeExpr::port(Port::Signal, Ladder::Annihilation)
        .scaled(transfer.signal)
        .plus(&p_in.scaled(transfer.probe))
        .plus(&ModeExpr::port(Port::LossM, Ladder::Annihilation).scaled(transfer.loss_m))
        .plus(&ModeExpr::port(Port::LossA, Ladder::Annihilation).scaled(transfer.loss_a));

    let reflection = transfer.probe.norm();
    let converted = if reflection > T::zero() {
        converted.scaled(transfer.probe.conj() / reflection)
    } else {
        converted
    };

    // S†(G′): out = √G′ S_out − √(G′−1) A†
    let output = converted
        .scaled_real(gp.sqrt())
        .plus(&ancilla_dag.scaled_real(-(gp - one).sqrt()));

    let signal_gain = output
        .coefficient(Port::Signal, Ladder::Annihilation)
        .norm_sqr()
        + output.coefficient(Port::Signal, Ladder::Creation).norm_sqr();
    let per_port = ports
        .ports()
        .flat_map(|p| [Ladder::Annihilation, Ladder::Creation].map(|l| (p, l)))
        .map(|(p, l)| (p, l, output.coefficient(p, l).norm_sqr()))
        .collect();

    Ok(MomentSet {
        output_moment: output.normal_moment(&ports, None),
        noise_normal: output.normal_moment(&ports, Some(Port::Signal)),
        noise_anti_normal: output.anti_normal_moment(&ports, Some(Port::Signal)),
        signal_gain,
        per_port,
        output,
    })
}

/// Reads `τ`, `N_e` or `σ²` off the output moments.
///
/// With `out = √τ S + n`: loss gives `⟨n†n⟩ = (1−τ)N_e`, amplification gives
/// `⟨n†n⟩ = (τ−1)(N_e + 1)`, and the RDP variance is `⟨n†n⟩ + ⟨n n†⟩`.
pub fn channel_from_moments<T: Real>(moments: &MomentSet<T>, tolerance: T) -> ChannelDescriptor<T> {
    let tau = moments.signal_gain;
    let kind = channel::classify(tau, tolerance);
    let (n_e, sigma2) = match kind {
        ChannelKind::GeneralizedLoss => (Some(moments.noise_normal / (T::one() - tau)), None),
        ChannelKind::GeneralizedAmplification => (
            Some((moments.noise_normal / (tau - T::one()) - T::one()).max(T::zero())),
            None,
        ),
        ChannelKind::RandomDisplacement => {
            (None, Some(moments.noise_normal + moments.noise_anti_normal))
        }
    };
    ChannelDescriptor {
        kind,
        special: None,
        tau,
        n_e,
        sigma2,
        boundary_sigma2: None,
        tolerance,
    }
}

/// End-to-end numerical path: linear solve, Bogoliubov propagation, moments,
/// capacity bound. Bath occupations are taken at `temperature`.
pub fn oracle_capacity<T: Real>(
    params: &EoParams<T>,
    detuning: T,
    squeezers: &SqueezerPair<T>,
    temperature: T,
    thermal_probe: bool,
    tolerance: T,
) -> Result<CapacityResult<T>> {
    let (_, _, desc) = oracle_channel(params, detuning, squeezers, temperature, thermal_probe, tolerance)?;
    capacity::q_lb(&desc)
}

/// Like [`oracle_capacity`] but returns every intermediate.
pub fn oracle_channel<T: Real>(
    params: &EoParams<T>,
    detuning: T,
    squeezers: &SqueezerPair<T>,
    temperature: T,
    thermal_probe: bool,
    tolerance: T,
) -> Result<(NumericTransfer<T>, MomentSet<T>, ChannelDescriptor<T>)> {
    let transfer = numeric_transfer(params, detuning)?;
    let n_m = thermal_occupation(params.omega_m, temperature)?;
    let n_a = thermal_occupation(params.omega_o, temperature)?;
    let probe = if thermal_probe { n_m } else { T::zero() };
    let occ = PortOccupations {
        n_p0: probe,
        n_a0: probe,
        n_em: n_m,
        n_ea: n_a,
    };
    let moments = squeeze_compose_numeric(&transfer, squeezers, &occ)?;
    let desc = channel_from_moments(&moments, tolerance);
    Ok((transfer, moments, desc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn dense_solver_matches_hand_inverse() {
        let c = |re: f64, im: f64| Complex::new(re, im);
        let a = vec![vec![c(2.0, 1.0), c(0.0, -1.0)], vec![c(1.0, 0.0), c(3.0, 0.5)]];
        let x_true = vec![vec![c(1.0, -2.0)], vec![c(0.5, 0.25)]];
        let b = vec![
            vec![a[0][0] * x_true[0][0] + a[0][1] * x_true[1][0]],
            vec![a[1][0] * x_true[0][0] + a[1][1] * x_true[1][0]],
        ];
        let x = solve_dense(a, b).unwrap();
        assert!((x[0][0] - x_true[0][0]).norm() < 1e-14);
        assert!((x[1][0] - x_true[1][0]).norm() < 1e-14);
    }

    #[test]
    fn singular_system_is_reported() {
        let c = |re: f64| Complex::new(re, 0.0);
        let a = vec![vec![c(1.0), c(2.0)], vec![c(2.0), c(4.0)]];
        let b = vec![vec![c(1.0)], vec![c(1.0)]];
        assert!(matches!(solve_dense(a, b), Err(Error::Singular(_))));
    }

    #[test]
    fn matrices_follow_definitions() {
        let p = EoParams::<f64>::from_cooperativity(0.7, 0.9, 0.8, 2.0).unwrap();
        let w = 0.3;
        let s = system_matrices(&p, w).unwrap();
        let dm = Complex::new(1.0, -w);
        let da = Complex::new(1.0, -w);
        let ig = Complex::new(0.0, p.g);
        assert_eq!(s.m1[0][0], Complex::new(0.0, 0.0));
        assert_eq!(s.m1[0][1], ig / dm);
        assert_eq!(s.m1[1][0], ig / da);
        assert_eq!(s.m2[0][0], Complex::new(p.kappa_m_c.sqrt(), 0.0) / dm);
        assert_eq!(s.m3[1][1], Complex::new(p.kappa_a_i.sqrt(), 0.0) / da);
        assert_eq!(s.m2[0][1], Complex::new(0.0, 0.0));
    }

    #[test]
    fn uncoupled_converter_has_no_signal() {
        let p = EoParams::from_cooperativity(0.0, 1.0, 1.0, 1.0).unwrap();
        let t = numeric_transfer(&p, 0.4).unwrap();
        assert_eq!(t.eta(), 0.0);
    }

    #[test]
    fn matched_converter_transmits_fully() {
        let p = EoParams::from_cooperativity(1.0, 1.0, 1.0, 1.0).unwrap();
        let t = numeric_transfer(&p, 0.0).unwrap();
        assert_relative_eq!(t.eta(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn identity_squeezers_leave_bare_moments() {
        let p = EoParams::from_cooperativity(0.4, 0.9, 0.85, 1.0).unwrap();
        let t = numeric_transfer(&p, 0.2).unwrap();
        let occ = PortOccupations {
            n_p0: 0.1,
            n_a0: 0.2,
            n_em: 0.3,
            n_ea: 0.0,
        };
        let m = squeeze_compose_numeric(&t, &SqueezerPair::identity(), &occ).unwrap();
        let bare = t.kappa_p() * 0.1 + t.kappa_em() * 0.3;
        assert_relative_eq!(m.output_moment, bare, epsilon = 1e-15);
        assert_relative_eq!(m.signal_gain, t.eta(), epsilon = 1e-15);
        assert_eq!(m.port_weight(Port::Ancilla, Ladder::Creation), 0.0);
    }

    #[test]
    fn bogoliubov_identity_holds() {
        let p = EoParams::from_cooperativity(2.5, 0.7, 0.95, 1.0).unwrap();
        let t = numeric_transfer(&p, -1.3).unwrap();
        let m = squeeze_compose_numeric(
            &t,
            &SqueezerPair::new(37.0, 4.2).unwrap(),
            &PortOccupations::vacuum(),
        )
        .unwrap();
        assert_relative_eq!(m.output.commutator(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn ancilla_weight_for_moderate_squeezing() {
        // Stand-in converter with η = 0.1, κ_P = 0.9, no intrinsic loss.
        let t = NumericTransfer {
            signal: Complex::new(0.0, 0.1f64.sqrt()),
            probe: Complex::new(-(0.9f64.sqrt()), 0.0),
            loss_m: Complex::new(0.0, 0.0),
            loss_a: Complex::new(0.0, 0.0),
        };
        let m = squeeze_compose_numeric(&t, &SqueezerPair::new(4.0, 2.0).unwrap(), &PortOccupations::vacuum())
            .unwrap();
        assert_relative_eq!(
            m.port_weight(Port::Ancilla, Ladder::Creation),
            0.104_839_969_102_199_5,
            epsilon = 1e-13
        );
        let d = channel_from_moments(&m, 1e-9);
        assert_relative_eq!(d.n_e.unwrap(), 0.131_049_961_377_749_34, epsilon = 1e-13);
    }

    #[test]
    fn oracle_bare_capacities() {
        let p = EoParams::from_cooperativity(1.0, 1.0, 1.0, 1.0).unwrap();
        // pick C so that η(0) = 0.6: roots of 0.6(1+C)² = 4C
        let c = (4.0 - 1.2 - ((4.0f64 - 1.2).powi(2) - 4.0 * 0.36).sqrt()) / 1.2;
        let p = EoParams { g: (c).sqrt() * 0.5, ..p };
        let q = oracle_capacity(&p, 0.0, &SqueezerPair::identity(), 0.0, false, 1e-9).unwrap();
        assert_relative_eq!(q.q_lb, (0.6f64 / 0.4).log2(), epsilon = 1e-12);

        let c = (4.0 - 0.8 - ((4.0f64 - 0.8).powi(2) - 4.0 * 0.16).sqrt()) / 0.8;
        let p = EoParams { g: (c).sqrt() * 0.5, ..p };
        let q = oracle_capacity(&p, 0.0, &SqueezerPair::identity(), 0.0, false, 1e-9).unwrap();
        assert_eq!(q.q_lb, 0.0);
    }
}
