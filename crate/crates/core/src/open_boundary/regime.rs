use crate::error::{Error, Result};

/// Signature of `diag(v_n - c, v_n, v_n + c)` at a boundary node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    SupercriticalOutflow,
    SubcriticalOutflow,
    SubcriticalInflow,
    SupercriticalInflow,
}

impl Regime {
    pub const ALL: [Regime; 4] = [
        Regime::SupercriticalOutflow,
        Regime::SubcriticalOutflow,
        Regime::SubcriticalInflow,
        Regime::SupercriticalInflow,
    ];

    /// Diagonal of the indicator matrix `I-` selecting incoming characteristics.
    pub fn incoming(self) -> [bool; 3] {
        match self {
            Regime::SupercriticalOutflow => [false, false, false],
            Regime::SubcriticalOutflow => [true, false, false],
            Regime::SubcriticalInflow => [true, true, false],
            Regime::SupercriticalInflow => [true, true, true],
        }
    }

    pub fn num_incoming(self) -> usize {
        self.incoming().iter().filter(|&&b| b).count()
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::SupercriticalOutflow => "supercritical outflow",
            Regime::SubcriticalOutflow => "subcritical outflow",
            Regime::SubcriticalInflow => "subcritical inflow",
            Regime::SupercriticalInflow => "supercritical inflow",
        }
    }
}

/// Classifies a boundary node from its normal velocity and wave speed.
///
/// Ties: `v_n = 0` counts as outflow and `|v_n| = c` as supercritical.
pub fn classify_regime(vn: f64, c: f64) -> Result<Regime> {
    if !(c > 0.0) {
        return Err(Error::NonpositiveWaveSpeed(c));
    }
    let supercritical = vn.abs() >= c;
    Ok(match (vn >= 0.0, supercritical) {
        (true, true) => Regime::SupercriticalOutflow,
        (true, false) => Regime::SubcriticalOutflow,
        (false, false) => Regime::SubcriticalInflow,
        (false, true) => Regime::SupercriticalInflow,
    })
}
