//! Closed-form fourth-order energies of the qubit-coupler-qubit circuit with
//! exchange-only coupling, for the nine low-lying states.

use crate::error::{Error, Result};
use crate::model::{BareState, SystemSpec};

/// Parameters of a qubit-coupler-qubit circuit, rad/s.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QcqParams {
    pub w1: f64,
    pub wc: f64,
    pub w2: f64,
    pub a1: f64,
    pub ac: f64,
    pub a2: f64,
    pub j1c: f64,
    pub j2c: f64,
    pub j12: f64,
}

impl QcqParams {
    /// Reads a three-mode system ordered (qubit, coupler, qubit).
    pub fn from_system(system: &SystemSpec) -> Result<Self> {
        if system.n_modes() != 3 {
            return Err(Error::InvalidArgument(
                "closed forms need a three-mode qubit-coupler-qubit system".into(),
            ));
        }
        let m = system.modes();
        Ok(QcqParams {
            w1: m[0].frequency,
            wc: m[1].frequency,
            w2: m[2].frequency,
            a1: m[0].anharmonicity,
            ac: m[1].anharmonicity,
            a2: m[2].anharmonicity,
            j1c: system.coupling_strength(0, 1),
            j2c: system.coupling_strength(1, 2),
            j12: system.coupling_strength(0, 2),
        })
    }
}

/// [E⁽⁰⁾, E⁽²⁾, E⁽³⁾, E⁽⁴⁾] for one of |000⟩ |001⟩ |010⟩ |100⟩ |002⟩ |200⟩ |011⟩ |101⟩ |110⟩.
pub fn closed_form_terms(p: &QcqParams, state: &BareState) -> Option<[f64; 4]> {
    let QcqParams {
        w1,
        wc,
        w2,
        a1,
        ac,
        a2,
        j1c,
        j2c,
        j12,
    } = *p;
    let d12 = w1 - w2;
    let d1c = w1 - wc;
    let d2c = w2 - wc;
    let s12 = w1 + w2;
    let s1c = w1 + wc;
    let s2c = w2 + wc;
    let (j12_2, j1c_2, j2c_2) = (j12 * j12, j1c * j1c, j2c * j2c);
    let jjj = j12 * j1c * j2c;
    let sq = |x: f64| x * x;
    let cu = |x: f64| x * x * x;

    let terms = match state.0.as_slice() {
        [0, 0, 0] => [0.0, 0.0, 0.0, 0.0],
        [0, 0, 1] => [
            w2,
            j2c_2 / d2c - j12_2 / d12,
            -2.0 * jjj / (d12 * d2c),
            j12_2 * j2c_2 * (1.0 / (d12 * sq(d2c)) - 1.0 / (sq(d12) * d2c)) - sq(j2c_2) / cu(d2c)
                - j1c_2 * j2c_2 / (d12 * sq(d2c))
                + j12_2 * j1c_2 / (sq(d12) * d2c)
                + sq(j12_2) / cu(d12),
        ],
        [0, 1, 0] => [
            wc,
            -j2c_2 / d2c - j1c_2 / d1c,
            2.0 * jjj / (d1c * d2c),
            j1c_2 * j2c_2 * (1.0 / (d1c * sq(d2c)) + 1.0 / (sq(d1c) * d2c)) + sq(j2c_2) / cu(d2c)
                - j12_2 * j2c_2 / (d1c * sq(d2c))
                - j12_2 * j1c_2 / (sq(d1c) * d2c)
                + sq(j1c_2) / cu(d1c),
        ],
        [1, 0, 0] => [
            w1,
            j1c_2 / d1c + j12_2 / d12,
            2.0 * jjj / (d12 * d1c),
            -j12_2 * j1c_2 * (1.0 / (d12 * sq(d1c)) + 1.0 / (sq(d12) * d1c)) - sq(j1c_2) / cu(d1c)
                + j1c_2 * j2c_2 / (d12 * sq(d1c))
                + j12_2 * j2c_2 / (sq(d12) * d1c)
                - sq(j12_2) / cu(d12),
        ],
        [0, 0, 2] => [
            2.0 * w2 + a2,
            2.0 * j12_2 / (-d12 + a2) + 2.0 * j2c_2 / (d2c + a2),
            4.0 * jjj / ((-d12 + a2) * (d2c + a2)),
            4.0 * sq(j12_2) * (d12 + a1) / (cu(d12 - a2) * (2.0 * d12 + a1 - a2))
                + 2.0 * j12_2 * j1c_2 / (sq(d12 - a2) * (d2c + a2))
                - 2.0 * j1c_2 * j2c_2 / ((d12 - a2) * sq(d2c + a2))
                - 4.0 * sq(j2c_2) * (d2c - ac) / (cu(d2c + a2) * (2.0 * d2c + a2 - ac))
                - 2.0 * j12_2 * j2c_2 * (d12 - d2c - 2.0 * a2) * (d12 - d2c - 2.0 * s1c + 4.0 * w2)
                    / (sq(d12 - a2) * sq(d2c + a2) * (s1c - a2 - 2.0 * w2)),
        ],
        [2, 0, 0] => [
            2.0 * w1 + a1,
            2.0 * j12_2 / (d12 + a1) + 2.0 * j1c_2 / (d1c + a1),
            4.0 * jjj / ((d12 + a1) * (d1c + a1)),
            4.0 * sq(j12_2) * (-d12 + a2) / (cu(d12 + a1) * (2.0 * d12 + a1 - a2))
                + 2.0 * j12_2 * j1c_2 * (d12 + d1c + 2.0 * a1) * (d12 + d1c + 2.0 * s2c - 4.0 * w1)
                    / (sq(d12 + a1) * sq(d1c + a1) * (-s2c + a1 + 2.0 * w1))
                + 2.0 * j12_2 * j2c_2 / (sq(d12 + a1) * (d1c + a1))
                + 4.0 * sq(j1c_2) * (-d1c + ac) / (cu(d1c + a1) * (2.0 * d1c + a1 - ac))
                + 2.0 * j1c_2 * j2c_2 / ((d12 + a1) * sq(d1c + a1)),
        ],
        [0, 1, 1] => {
            let x = -s2c + a1 + 2.0 * w1;
            let y = d2c + a2;
            let z = -d2c + ac;
            [
                s2c,
                2.0 * j2c_2 * (1.0 / (d2c - ac) + 1.0 / (-d2c - a2)) - j1c_2 / d1c - j12_2 / d12,
                2.0 * jjj * (2.0 / (d1c * y) + 2.0 / (d12 * z) + 1.0 / (d12 * d1c)),
                j12_2
                    * j1c_2
                    * (-2.0 / (sq(d1c) * x) - 2.0 / (sq(d1c) * y) - 4.0 / (d12 * d1c * x)
                        + 1.0 / (d12 * sq(d1c))
                        - 2.0 / (sq(d12) * x)
                        - 2.0 / (sq(d12) * z)
                        + 1.0 / (sq(d12) * d1c))
                    + j12_2
                        * j2c_2
                        * (-4.0 / (d1c * sq(y)) + 2.0 / (d12 * sq(y)) + 2.0 / (d12 * sq(z))
                            - 4.0 / (d12 * d1c * y)
                            + 2.0 / (sq(d12) * y)
                            + 2.0 / (sq(d12) * z)
                            - 1.0 / (sq(d12) * d1c))
                    + j1c_2
                        * j2c_2
                        * (2.0 / (d1c * sq(y)) + 2.0 / (d1c * sq(z)) + 2.0 / (sq(d1c) * y)
                            + 2.0 / (sq(d1c) * z)
                            - 4.0 / (d12 * sq(z))
                            - 4.0 / (d12 * d1c * z)
                            - 1.0 / (d12 * sq(d1c)))
                    + 4.0 * sq(j2c_2) * (1.0 / cu(y) + 1.0 / (z * sq(y)) + 1.0 / (sq(z) * y) + 1.0 / cu(z))
                    + sq(j1c_2) / cu(d1c)
                    + sq(j12_2) / cu(d12),
            ]
        }
        [1, 0, 1] => {
            let u = d12 - a2;
            let v = d12 + a1;
            let w = d1c + d2c - ac;
            [
                s12,
                2.0 * j12_2 * (1.0 / u - 1.0 / v) + j2c_2 / d2c + j1c_2 / d1c,
                2.0 * jjj * (-2.0 / (d2c * v) + 2.0 / (d1c * u) + 1.0 / (d1c * d2c)),
                4.0 * sq(j12_2) * (-1.0 / cu(u) + 1.0 / (v * sq(u)) - 1.0 / (sq(v) * u) + 1.0 / cu(v))
                    + j12_2
                        * j1c_2
                        * (4.0 / (d2c * sq(v)) - 2.0 / (d1c * sq(u)) - 2.0 / (d1c * sq(v))
                            - 4.0 / (d1c * d2c * v)
                            - 2.0 / (sq(d1c) * u)
                            + 2.0 / (sq(d1c) * v)
                            + 1.0 / (sq(d1c) * d2c))
                    + j12_2
                        * j2c_2
                        * (-2.0 / (d2c * sq(u)) - 2.0 / (d2c * sq(v)) - 2.0 / (sq(d2c) * u)
                            + 2.0 / (sq(d2c) * v)
                            + 4.0 / (d1c * sq(u))
                            + 4.0 / (d1c * d2c * u)
                            + 1.0 / (d1c * sq(d2c)))
                    + j1c_2
                        * j2c_2
                        * (2.0 / (sq(d2c) * w) - 2.0 / (sq(d2c) * v) + 4.0 / (d1c * d2c * w)
                            - 1.0 / (d1c * sq(d2c))
                            + 2.0 / (sq(d1c) * w)
                            + 2.0 / (sq(d1c) * u)
                            - 1.0 / (sq(d1c) * d2c))
                    - sq(j2c_2) / cu(d2c)
                    - sq(j1c_2) / cu(d1c),
            ]
        }
        [1, 1, 0] => {
            let r = d1c - ac;
            let q = d1c + a1;
            let x = s1c - a2 - 2.0 * w2;
            [
                s1c,
                2.0 * j1c_2 * (1.0 / r - 1.0 / q) - j2c_2 / d2c + j12_2 / d12,
                2.0 * jjj * (2.0 / (d2c * q) + 2.0 / (d12 * r) - 1.0 / (d12 * d2c)),
                j12_2
                    * j1c_2
                    * (-4.0 / (d2c * sq(q)) - 2.0 / (d12 * sq(r)) - 2.0 / (d12 * sq(q))
                        + 4.0 / (d12 * d2c * q)
                        - 2.0 / (sq(d12) * r)
                        + 2.0 / (sq(d12) * q)
                        - 1.0 / (sq(d12) * d2c))
                    + j12_2
                        * j2c_2
                        * (2.0 / (sq(d2c) * x) - 2.0 / (sq(d2c) * q) + 4.0 / (d12 * d2c * (-x))
                            - 1.0 / (d12 * sq(d2c))
                            + 2.0 / (sq(d12) * x)
                            + 2.0 / (sq(d12) * r)
                            + 1.0 / (sq(d12) * d2c))
                    + 4.0 * sq(j1c_2) * (-1.0 / cu(r) + 1.0 / cu(q) + 1.0 / (q * sq(r)) - 1.0 / (sq(q) * r))
                    + j1c_2
                        * j2c_2
                        * (2.0 / (d2c * sq(r)) + 2.0 / (d2c * sq(q)) - 2.0 / (sq(d2c) * r)
                            + 2.0 / (sq(d2c) * q)
                            + 4.0 / (d12 * sq(r))
                            - 4.0 / (d12 * d2c * r)
                            + 1.0 / (d12 * sq(d2c)))
                    + sq(j2c_2) / cu(d2c)
                    - sq(j12_2) / cu(d12),
            ]
        }
        _ => return None,
    };
    Some(terms)
}

/// [ζ⁽²⁾, ζ⁽³⁾, ζ⁽⁴⁾]; the fourth-order part keeps only the J₁c²J₂c² terms.
pub fn closed_form_zz(p: &QcqParams) -> [f64; 3] {
    let QcqParams {
        w1,
        wc,
        w2,
        a1,
        ac,
        a2,
        j1c,
        j2c,
        j12,
    } = *p;
    let d12 = w1 - w2;
    let d1c = w1 - wc;
    let d2c = w2 - wc;
    let sq = |x: f64| x * x;
    let z2 = 2.0 * j12 * j12 * (1.0 / (d12 - a2) - 1.0 / (d12 + a1));
    let z3 = 2.0
        * j12
        * j1c
        * j2c
        * (-2.0 / (d2c * (d12 + a1)) + 1.0 / (d1c * d2c) + 2.0 / (d1c * (d12 - a2)) + 1.0 / (d12 * d2c)
            - 1.0 / (d12 * d1c));
    let w = d1c + d2c - ac;
    let z4 = sq(j1c) * sq(j2c)
        * (2.0 / (sq(d2c) * w) - 1.0 / (d1c * sq(d2c)) - 2.0 / (sq(d2c) * (d12 + a1))
            + 4.0 / (d1c * d2c * w)
            + 2.0 / (sq(d1c) * w)
            + 2.0 / (sq(d1c) * (d12 - a2))
            - 1.0 / (sq(d1c) * d2c)
            + 1.0 / (d12 * sq(d2c))
            - 1.0 / (d12 * sq(d1c)));
    [z2, z3, z4]
}

/// Second-order ZZ of two directly coupled transmons with exchange coupling,
/// ζ = 2J²/(Δ − α₁) − 2J²/(Δ + α₂) with Δ = ω₂ − ω₁.
pub fn two_mode_zz(w1: f64, w2: f64, a1: f64, a2: f64, j: f64) -> f64 {
    let d = w2 - w1;
    2.0 * j * j / (d - a1) - 2.0 * j * j / (d + a2)
}
