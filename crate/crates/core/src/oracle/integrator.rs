//! Dormand–Prince 8(5,3): eighth-order steps with the combined fifth/third
//! order error estimate of Hairer's DOP853, FSAL.

use crate::error::OracleError;

const STAGES: usize = 12;

#[rustfmt::skip]
mod tableau {
    use super::STAGES;
    pub(super) const C: [f64; STAGES] = [0.0, 0.05260015195876773, 0.0789002279381516, 0.1183503419072274, 0.2816496580927726, 0.3333333333333333, 0.25, 0.3076923076923077, 0.6512820512820513, 0.6, 0.8571428571428571, 1.0];
    pub(super) const B: [f64; STAGES] = [0.054293734116568765, 0.0, 0.0, 0.0, 0.0, 4.450312892752409, 1.8915178993145003, -5.801203960010585, 0.3111643669578199, -0.1521609496625161, 0.20136540080403034, 0.04471061572777259];
    pub(super) const E3: [f64; STAGES + 1] = [-0.18980075407240762, 0.0, 0.0, 0.0, 0.0, 4.450312892752409, 1.8915178993145003, -5.801203960010585, -0.4226823213237919, -0.1521609496625161, 0.20136540080403034, 0.02265179219836082, 0.0];
    pub(super) const E5: [f64; STAGES + 1] = [0.01312004499419488, 0.0, 0.0, 0.0, 0.0, -1.2251564463762044, -0.4957589496572502, 1.6643771824549864, -0.35032884874997366, 0.3341791187130175, 0.08192320648511571, -0.022355307863886294, 0.0];
    pub(super) const A: [[f64; STAGES]; STAGES] = [
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.05260015195876773, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0197250569845379, 0.0591751709536137, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.02958758547680685, 0.0, 0.08876275643042054, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.2413651341592667, 0.0, -0.8845494793282861, 0.924834003261792, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.037037037037037035, 0.0, 0.0, 0.17082860872947386, 0.12546768756682242, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.037109375, 0.0, 0.0, 0.17025221101954405, 0.06021653898045596, -0.017578125, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.03709200011850479, 0.0, 0.0, 0.17038392571223998, 0.10726203044637328, -0.015319437748624402, 0.008273789163814023, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.6241109587160757, 0.0, 0.0, -3.3608926294469414, -0.868219346841726, 27.59209969944671, 20.154067550477894, -43.48988418106996, 0.0, 0.0, 0.0, 0.0],
        [0.47766253643826434, 0.0, 0.0, -2.4881146199716677, -0.590290826836843, 21.230051448181193, 15.279233632882423, -33.28821096898486, -0.020331201708508627, 0.0, 0.0, 0.0],
        [-0.9371424300859873, 0.0, 0.0, 5.186372428844064, 1.0914373489967295, -8.149787010746927, -18.52006565999696, 22.739487099350505, 2.4936055526796523, -3.0467644718982196, 0.0, 0.0],
        [2.273310147516538, 0.0, 0.0, -10.53449546673725, -2.0008720582248625, -17.9589318631188, 27.94888452941996, -2.8589982771350235, -8.87285693353063, 12.360567175794303, 0.6433927460157636, 0.0],
    ];
}
use tableau::{A, B, C, E3, E5};

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;
const ERROR_EXPONENT: f64 = -1.0 / 8.0;

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    pub initial_step: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct Solution<const N: usize> {
    pub y: [f64; N],
    pub accepted: usize,
    pub rejected: usize,
}

/// Integrates `y' = f(x, y)` from `x0` to `x1` (either direction).
pub fn integrate<const N: usize, F>(
    f: F,
    x0: f64,
    x1: f64,
    y0: [f64; N],
    tol: &Tolerances,
) -> Result<Solution<N>, OracleError>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let direction = if x1 >= x0 { 1.0 } else { -1.0 };
    let span = (x1 - x0).abs();
    let mut x = x0;
    let mut y = y0;
    let mut h = direction * tol.initial_step.min(span).max(f64::MIN_POSITIVE);
    let mut k = [[0.0; N]; STAGES + 1];
    k[0] = f(x, &y);
    let mut accepted = 0;
    let mut rejected = 0;

    while (x1 - x) * direction > 0.0 {
        if accepted + rejected >= tol.max_steps {
            return Err(OracleError::NonConvergence {
                max_steps: tol.max_steps,
                x,
            });
        }
        let last = (x + h - x1) * direction >= 0.0;
        if last {
            h = x1 - x;
        }
        if h.abs() <= 1e-14 * x.abs().max(1.0) && !last {
            return Err(OracleError::StepUnderflow { x });
        }

        for s in 1..STAGES {
            let mut stage = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    for i in 0..N {
                        stage[i] += h * a * kj[i];
                    }
                }
            }
            k[s] = f(x + C[s] * h, &stage);
        }
        let mut y_new = y;
        for (kj, &b) in k.iter().zip(B.iter()) {
            if b != 0.0 {
                for i in 0..N {
                    y_new[i] += h * b * kj[i];
                }
            }
        }
        k[STAGES] = f(x + h, &y_new);

        let mut err5 = 0.0;
        let mut err3 = 0.0;
        for i in 0..N {
            let scale = tol.atol + tol.rtol * y[i].abs().max(y_new[i].abs());
            let (mut e5, mut e3) = (0.0, 0.0);
            for (j, kj) in k.iter().enumerate() {
                e5 += E5[j] * kj[i];
                e3 += E3[j] * kj[i];
            }
            err5 += (e5 / scale).powi(2);
            err3 += (e3 / scale).powi(2);
        }
        let denom = err5 + 0.01 * err3;
        let err = if denom > 0.0 {
            h.abs() * err5 / (denom * N as f64).sqrt()
        } else {
            0.0
        };
        if !err.is_finite() {
            rejected += 1;
            h *= MIN_FACTOR;
            continue;
        }

        let factor = if err == 0.0 {
            MAX_FACTOR
        } else {
            (SAFETY * err.powf(ERROR_EXPONENT)).clamp(MIN_FACTOR, MAX_FACTOR)
        };
        if err <= 1.0 {
            x = if last { x1 } else { x + h };
            y = y_new;
            k[0] = k[STAGES];
            accepted += 1;
            h *= factor;
        } else {
            rejected += 1;
            h *= factor.min(1.0);
        }
    }

    Ok(Solution {
        y,
        accepted,
        rejected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol(rtol: f64) -> Tolerances {
        Tolerances {
            rtol,
            atol: rtol,
            max_steps: 1_000_000,
            initial_step: 1e-2,
        }
    }

    #[test]
    fn harmonic_oscillator_forward_and_backward() {
        let f = |_x: f64, y: &[f64; 2]| [y[1], -y[0]];
        let sol = integrate(f, 0.0, 10.0, [1.0, 0.0], &tol(1e-11)).unwrap();
        assert!((sol.y[0] - 10f64.cos()).abs() < 1e-9);
        assert!((sol.y[1] + 10f64.sin()).abs() < 1e-9);
        let back = integrate(f, 10.0, 0.0, sol.y, &tol(1e-11)).unwrap();
        assert!((back.y[0] - 1.0).abs() < 1e-9);
        assert!(back.y[1].abs() < 1e-9);
    }

    #[test]
    fn exponential_growth() {
        let f = |_x: f64, y: &[f64; 1]| [y[0]];
        let sol = integrate(f, 0.0, 3.0, [1.0], &tol(1e-12)).unwrap();
        assert!((sol.y[0] / 3f64.exp() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn step_budget() {
        let f = |_x: f64, y: &[f64; 2]| [y[1], -y[0]];
        let mut t = tol(1e-12);
        t.max_steps = 10;
        let err = integrate(f, 0.0, 100.0, [1.0, 0.0], &t).unwrap_err();
        assert!(matches!(err, OracleError::NonConvergence { .. }));
    }
}
