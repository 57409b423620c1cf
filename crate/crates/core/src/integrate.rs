//! Adaptive explicit Runge-Kutta integration (Dormand-Prince 8(5,3)) for
//! complex linear systems. The state is a flat slice, so both vectors and
//! column-major matrices can be propagated.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rtol: 1e-12,
            atol: 1e-12,
        }
    }
}

impl Tolerance {
    pub fn new(rtol: f64, atol: f64) -> Self {
        Tolerance { rtol, atol }
    }

    pub fn uniform(tol: f64) -> Self {
        Tolerance::new(tol, tol)
    }
}

const C: [f64; 12] = [
    0.0,
    0.526001519587677318785587544488E-01,
    0.789002279381515978178381316732E-01,
    0.118350341907227396726757197510E+00,
    0.281649658092772603273242802490E+00,
    0.333333333333333333333333333333E+00,
    0.25E+00,
    0.307692307692307692307692307692E+00,
    0.651282051282051282051282051282E+00,
    0.6E+00,
    0.857142857142857142857142857142E+00,
    1.0,
];

const A2: [f64; 1] = [5.26001519587677318785587544488E-2];
const A3: [f64; 2] = [1.97250569845378994544595329183E-2, 5.91751709536136983633785987549E-2];
const A4: [f64; 3] = [2.95875854768068491816892993775E-2, 0.0, 8.87627564304205475450678981324E-2];
const A5: [f64; 4] = [
    2.41365134159266685502369798665E-1,
    0.0,
    -8.84549479328286085344864962717E-1,
    9.24834003261792003115737966543E-1,
];
const A6: [f64; 5] = [
    3.7037037037037037037037037037E-2,
    0.0,
    0.0,
    1.70828608729473871279604482173E-1,
    1.25467687566822425016691814123E-1,
];
const A7: [f64; 6] = [
    3.7109375E-2,
    0.0,
    0.0,
    1.70252211019544039314978060272E-1,
    6.02165389804559606850219397283E-2,
    -1.7578125E-2,
];
const A8: [f64; 7] = [
    3.70920001185047927108779319836E-2,
    0.0,
    0.0,
    1.70383925712239993810214054705E-1,
    1.07262030446373284651809199168E-1,
    -1.53194377486244017527936158236E-2,
    8.27378916381402288758473766002E-3,
];
const A9: [f64; 8] = [
    6.24110958716075717114429577812E-1,
    0.0,
    0.0,
    -3.36089262944694129406857109825E0,
    -8.68219346841726006818189891453E-1,
    2.75920996994467083049415600797E1,
    2.01540675504778934086186788979E1,
    -4.34898841810699588477366255144E1,
];
const A10: [f64; 9] = [
    4.77662536438264365890433908527E-1,
    0.0,
    0.0,
    -2.48811461997166764192642586468E0,
    -5.90290826836842996371446475743E-1,
    2.12300514481811942347288949897E1,
    1.52792336328824235832596922938E1,
    -3.32882109689848629194453265587E1,
    -2.03312017085086261358222928593E-2,
];
const A11: [f64; 10] = [
    -9.3714243008598732571704021658E-1,
    0.0,
    0.0,
    5.18637242884406370830023853209E0,
    1.09143734899672957818500254654E0,
    -8.14978701074692612513997267357E0,
    -1.85200656599969598641566180701E1,
    2.27394870993505042818970056734E1,
    2.49360555267965238987089396762E0,
    -3.0467644718982195003823669022E0,
];
const A12: [f64; 11] = [
    2.27331014751653820792359768449E0,
    0.0,
    0.0,
    -1.05344954667372501984066689879E1,
    -2.00087205822486249909675718444E0,
    -1.79589318631187989172765950534E1,
    2.79488845294199600508499808837E1,
    -2.85899827713502369474065508674E0,
    -8.87285693353062954433549289258E0,
    1.23605671757943030647266201528E1,
    6.43392746015763530355970484046E-1,
];

const B: [f64; 12] = [
    5.42937341165687622380535766363E-2,
    0.0,
    0.0,
    0.0,
    0.0,
    4.45031289275240888144113950566E0,
    1.89151789931450038304281599044E0,
    -5.8012039600105847814672114227E0,
    3.1116436695781989440891606237E-1,
    -1.52160949662516078556178806805E-1,
    2.01365400804030348374776537501E-1,
    4.47106157277725905176885569043E-2,
];

const BHH: [f64; 3] = [
    0.244094488188976377952755905512E+00,
    0.733846688281611857341361741547E+00,
    0.220588235294117647058823529412E-01,
];

const E: [f64; 12] = [
    0.1312004499419488073250102996E-01,
    0.0,
    0.0,
    0.0,
    0.0,
    -0.1225156446376204440720569753E+01,
    -0.4957589496572501915214079952E+00,
    0.1664377182454986536961530415E+01,
    -0.3503288487499736816886487290E+00,
    0.3341791187130174790297318841E+00,
    0.8192320648511571246570742613E-01,
    -0.2235530786388629525884427845E-01,
];

fn a_row(stage: usize) -> &'static [f64] {
    match stage {
        1 => &A2,
        2 => &A3,
        3 => &A4,
        4 => &A5,
        5 => &A6,
        6 => &A7,
        7 => &A8,
        8 => &A9,
        9 => &A10,
        10 => &A11,
        11 => &A12,
        _ => &[],
    }
}

/// Stateful stepper; keeps its step-size proposal between calls so that
/// integrating sample-to-sample costs no more than one long run.
pub struct Dop853 {
    tol: Tolerance,
    k: Vec<Vec<Complex64>>,
    ystage: Vec<Complex64>,
    ynew: Vec<Complex64>,
    h: f64,
    k0_valid: bool,
    pub max_steps: usize,
    pub steps: usize,
    pub rejected: usize,
}

impl Dop853 {
    pub fn new(n: usize, tol: Tolerance) -> Self {
        Dop853 {
            tol,
            k: vec![vec![Complex64::new(0.0, 0.0); n]; 12],
            ystage: vec![Complex64::new(0.0, 0.0); n],
            ynew: vec![Complex64::new(0.0, 0.0); n],
            h: 0.0,
            k0_valid: false,
            max_steps: 50_000_000,
            steps: 0,
            rejected: 0,
        }
    }

    /// Caps the next step size (useful when the caller knows the fastest timescale).
    pub fn set_initial_step(&mut self, h: f64) {
        self.h = h;
    }

    fn scale(&self, a: Complex64, b: Complex64) -> f64 {
        self.tol.atol + self.tol.rtol * a.norm().max(b.norm())
    }

    fn initial_step<F>(&mut self, f: &mut F, t: f64, y: &[Complex64], span: f64) -> f64
    where
        F: FnMut(f64, &[Complex64], &mut [Complex64]),
    {
        let n = y.len() as f64;
        let (mut d0, mut d1) = (0.0, 0.0);
        for (yi, fi) in y.iter().zip(&self.k[0]) {
            let sk = self.tol.atol + self.tol.rtol * yi.norm();
            d0 += (yi.norm() / sk).powi(2);
            d1 += (fi.norm() / sk).powi(2);
        }
        let (d0, d1) = ((d0 / n).sqrt(), (d1 / n).sqrt());
        let mut h = if d0 <= 1e-10 || d1 <= 1e-10 {
            1e-6 * span
        } else {
            0.01 * d0 / d1
        };
        h = h.min(span);
        for (i, yi) in y.iter().enumerate() {
            self.ystage[i] = yi + self.k[0][i] * h;
        }
        let (k0, rest) = self.k.split_at_mut(1);
        f(t + h, &self.ystage, &mut rest[0]);
        let mut d2 = 0.0;
        for i in 0..y.len() {
            let sk = self.tol.atol + self.tol.rtol * y[i].norm();
            d2 += ((rest[0][i] - k0[0][i]).norm() / sk).powi(2);
        }
        let d2 = (d2 / n).sqrt() / h;
        let der = d1.max(d2);
        let h1 = if der <= 1e-15 {
            (1e-6f64).max(h * 1e-3)
        } else {
            (0.01 / der).powf(1.0 / 8.0)
        };
        (100.0 * h).min(h1).min(span)
    }

    /// Integrates from `*t` to `t_end`, landing exactly on `t_end`.
    pub fn advance<F>(&mut self, f: &mut F, t: &mut f64, y: &mut [Complex64], t_end: f64) -> Result<()>
    where
        F: FnMut(f64, &[Complex64], &mut [Complex64]),
    {
        let n = y.len();
        if *t >= t_end {
            return Ok(());
        }
        if !self.k0_valid {
            f(*t, y, &mut self.k[0]);
            self.k0_valid = true;
        }
        if self.h <= 0.0 {
            self.h = self.initial_step(f, *t, y, t_end - *t);
        }
        let mut last = false;
        while !last {
            if self.steps >= self.max_steps {
                return Err(Error::StepUnderflow { t: *t, h: self.h });
            }
            let mut h = self.h;
            if *t + h >= t_end {
                h = t_end - *t;
                last = true;
            }
            if h.abs() <= 1e-14 * t.abs().max(t_end.abs()) {
                if last {
                    *t = t_end;
                    return Ok(());
                }
                return Err(Error::StepUnderflow { t: *t, h });
            }
            for s in 1..12 {
                let row = a_row(s);
                for i in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (j, &a) in row.iter().enumerate() {
                        if a != 0.0 {
                            acc += self.k[j][i] * a;
                        }
                    }
                    self.ystage[i] = y[i] + acc * h;
                }
                let (_, rest) = self.k.split_at_mut(s);
                f(*t + C[s] * h, &self.ystage, &mut rest[0]);
            }
            let (mut err, mut err2) = (0.0, 0.0);
            for i in 0..n {
                let mut inc = Complex64::new(0.0, 0.0);
                let mut e5 = Complex64::new(0.0, 0.0);
                for s in 0..12 {
                    if B[s] != 0.0 {
                        inc += self.k[s][i] * B[s];
                    }
                    if E[s] != 0.0 {
                        e5 += self.k[s][i] * E[s];
                    }
                }
                let e3 = inc - self.k[0][i] * BHH[0] - self.k[8][i] * BHH[1] - self.k[11][i] * BHH[2];
                self.ynew[i] = y[i] + inc * h;
                let sk = self.scale(y[i], self.ynew[i]);
                err += (e5.norm() / sk).powi(2);
                err2 += (e3.norm() / sk).powi(2);
            }
            let mut deno = err + 0.01 * err2;
            if deno <= 0.0 {
                deno = 1.0;
            }
            let err = h.abs() * err * (1.0 / (n as f64 * deno)).sqrt();
            let fac = (err.powf(0.125) / 0.9).clamp(1.0 / 6.0, 3.0);
            let h_next = h / fac;
            if err <= 1.0 {
                self.steps += 1;
                *t = if last { t_end } else { *t + h };
                y.copy_from_slice(&self.ynew);
                f(*t, y, &mut self.k[0]);
                if !last || h_next < self.h {
                    self.h = h_next.min(10.0 * self.h.max(h));
                }
            } else {
                self.rejected += 1;
                last = false;
                self.h = h / (err.powf(0.125) / 0.9).clamp(1.0, 6.0);
                if !self.h.is_finite() || self.h <= 0.0 {
                    return Err(Error::StepUnderflow { t: *t, h });
                }
            }
        }
        Ok(())
    }
}
