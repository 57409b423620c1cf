//! Reference circuits used throughout the tests and the CLI.

use super::system::{CouplingSpec, ModeSpec, SystemSpec};
use crate::units::{ghz, mhz};

/// Two directly coupled transmons; the first one is flux tunable.
pub fn two_qubit() -> SystemSpec {
    SystemSpec::new(
        vec![
            ModeSpec::qubit("Q1", ghz(4.85), mhz(-220.0), 4),
            ModeSpec::qubit("Q2", ghz(5.00), mhz(-260.0), 4).fixed(),
        ],
        vec![CouplingSpec::new("Q1", "Q2", mhz(5.0))],
    )
    .expect("preset is valid")
}

/// Two transmons joined through a tunable coupler, plus a weak direct link.
pub fn qubit_coupler_qubit() -> SystemSpec {
    SystemSpec::new(
        vec![
            ModeSpec::qubit("Q1", ghz(5.801), mhz(-205.0), 4),
            ModeSpec::coupler("C", ghz(6.990), mhz(-105.0), 3),
            ModeSpec::qubit("Q2", ghz(5.921), mhz(-300.0), 4).fixed(),
        ],
        vec![
            CouplingSpec::new("Q1", "C", mhz(100.0)),
            CouplingSpec::new("C", "Q2", mhz(100.0)),
            CouplingSpec::new("Q1", "Q2", mhz(5.0)),
        ],
    )
    .expect("preset is valid")
}

/// Four directly coupled transmons on a ring; Q1 and Q3 are tunable.
pub fn ring_four(levels: usize) -> SystemSpec {
    SystemSpec::new(
        vec![
            ModeSpec::qubit("Q1", ghz(4.40), mhz(-220.0), levels),
            ModeSpec::qubit("Q2", ghz(5.00), mhz(-240.0), levels).fixed(),
            ModeSpec::qubit("Q3", ghz(4.60), mhz(-220.0), levels),
            ModeSpec::qubit("Q4", ghz(5.30), mhz(-240.0), levels).fixed(),
        ],
        vec![
            CouplingSpec::new("Q1", "Q2", mhz(5.0)),
            CouplingSpec::new("Q2", "Q3", mhz(5.0)),
            CouplingSpec::new("Q3", "Q4", mhz(5.0)),
            CouplingSpec::new("Q4", "Q1", mhz(5.0)),
        ],
    )
    .expect("preset is valid")
}
