//! Analytic pipeline: parameters → transfer → composed channel → capacity.

use crate::capacity::{self, CapacityResult};
use crate::channel::{self, ChannelDescriptor, NoiseCoefficients, PortOccupations, SqueezerPair};
use crate::error::Result;
use crate::physics::{self, EoParams, TransferCoefficients};
use crate::Real;

/// Every intermediate of one analytic evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Analysis<T> {
    pub transfer: TransferCoefficients<T>,
    pub coefficients: NoiseCoefficients<T>,
    pub occupations: PortOccupations<T>,
    pub channel: ChannelDescriptor<T>,
    pub capacity: CapacityResult<T>,
}

/// Bath occupations for `params` at its temperature.
pub fn occupations<T: Real>(params: &EoParams<T>, thermal_probe: bool) -> Result<PortOccupations<T>> {
    let derived = physics::derived_quantities(params)?;
    Ok(PortOccupations::from_baths(derived.n_m, derived.n_a, thermal_probe))
}

pub fn analyze<T: Real>(
    params: &EoParams<T>,
    detuning: T,
    squeezers: &SqueezerPair<T>,
    thermal_probe: bool,
    tolerance: T,
) -> Result<Analysis<T>> {
    let transfer = physics::transfer_coefficients(params, detuning)?;
    let occ = occupations(params, thermal_probe)?;
    analyze_transfer(&transfer, squeezers, &occ, tolerance)
}

pub fn analyze_transfer<T: Real>(
    transfer: &TransferCoefficients<T>,
    squeezers: &SqueezerPair<T>,
    occupations: &PortOccupations<T>,
    tolerance: T,
) -> Result<Analysis<T>> {
    let coefficients = channel::compose(transfer, squeezers);
    let descriptor = channel::describe(&coefficients, occupations, tolerance)?;
    let capacity = capacity::q_lb(&descriptor)?;
    Ok(Analysis {
        transfer: *transfer,
        coefficients,
        occupations: *occupations,
        channel: descriptor,
        capacity,
    })
}
