//! Effort and productivity of a change, with net size expressed through
//! source code density.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffortInputs {
    /// Net size over gross size, in `[0, 1]`.
    pub density: f64,
    /// Gross size in lines of code.
    pub size_gross: f64,
    /// Time spent, in any consistent unit.
    pub time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffortMetrics {
    /// Size per time.
    pub effort_gross: f64,
    /// Functionality (`density * size_gross`) per time.
    pub effort_net: f64,
    /// Gross effort per unit of size; 0 for an empty change.
    pub productivity_gross: f64,
    /// Density per time.
    pub productivity_net: f64,
}

pub fn effort_metrics(inputs: EffortInputs) -> Result<EffortMetrics> {
    let EffortInputs {
        density,
        size_gross,
        time,
    } = inputs;
    if !(time.is_finite() && time > 0.0) {
        return Err(Error::invalid(format!("time must be positive, got {time}")));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::invalid(format!("density {density} outside [0, 1]")));
    }
    if !(size_gross.is_finite() && size_gross >= 0.0) {
        return Err(Error::invalid(format!("gross size must be non-negative, got {size_gross}")));
    }
    let effort_gross = size_gross / time;
    Ok(EffortMetrics {
        effort_gross,
        effort_net: density * size_gross / time,
        productivity_gross: if size_gross > 0.0 { effort_gross / size_gross } else { 0.0 },
        productivity_net: density / time,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn inputs(density: f64, size_gross: f64, time: f64) -> EffortInputs {
        EffortInputs {
            density,
            size_gross,
            time,
        }
    }

    #[test]
    fn substitution() {
        let m = effort_metrics(inputs(0.75, 400.0, 2.0)).unwrap();
        assert_eq!(m.effort_gross, 200.0);
        assert_eq!(m.effort_net, 150.0);
        assert_eq!(m.productivity_gross, 0.5);
        assert_eq!(m.productivity_net, 0.375);
    }

    #[test]
    fn full_density_means_net_equals_gross() {
        let m = effort_metrics(inputs(1.0, 37.0, 3.0)).unwrap();
        assert_eq!(m.effort_net, m.effort_gross);
    }

    #[test]
    fn empty_change() {
        let m = effort_metrics(inputs(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(m.effort_gross, 0.0);
        assert_eq!(m.productivity_gross, 0.0);
    }

    #[test]
    fn invalid_inputs() {
        assert!(effort_metrics(inputs(0.5, 10.0, 0.0)).is_err());
        assert!(effort_metrics(inputs(0.5, 10.0, -1.0)).is_err());
        assert!(effort_metrics(inputs(1.5, 10.0, 1.0)).is_err());
        assert!(effort_metrics(inputs(0.5, -1.0, 1.0)).is_err());
        assert!(effort_metrics(inputs(0.5, 1.0, f64::NAN)).is_err());
    }

    proptest! {
        #[test]
        fn net_never_exceeds_gross(d in 0.0f64..=1.0, s in 0.0f64..1e6, t in 1e-3f64..1e3) {
            let m = effort_metrics(inputs(d, s, t)).unwrap();
            prop_assert!(m.effort_net <= m.effort_gross);
            if s > 0.0 {
                let rel = (m.effort_net / s - m.productivity_net).abs() / m.productivity_net.max(1e-300);
                prop_assert!(rel < 1e-9 || m.productivity_net == 0.0);
            }
        }
    }
}
