//! Gamma function support: `log|Γ(x)|` with sign in double precision and the
//! reciprocal gamma function in double-double precision.

use std::f64::consts::PI;

use super::dd::DoubleDouble;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_P: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `sin(pi x)` with the argument reduced before multiplying by pi, so that
/// integers give exact zeros.
pub fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (0.5 * x).round();
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        -(PI * (1.0 + r)).sin()
    } else {
        (PI * r).sin()
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Returns `(log|Γ(x)|, sign Γ(x))`. Poles at non-positive integers are
/// reported as `(+inf, 0)`.
pub fn log_gamma_real(x: f64) -> (f64, i8) {
    if x.is_nan() {
        return (f64::NAN, 0);
    }
    if is_nonpositive_integer(x) {
        return (f64::INFINITY, 0);
    }
    if x < 0.5 {
        // reflection
        let s = sin_pi(x);
        let (lg, _) = log_gamma_real(1.0 - x);
        let sign = if s > 0.0 { 1 } else { -1 };
        return (PI.ln() - s.abs().ln() - lg, sign);
    }
    let xm = x - 1.0;
    let mut t = LANCZOS_P[0];
    for (i, p) in LANCZOS_P.iter().enumerate().skip(1) {
        t += p / (xm + i as f64);
    }
    let w = xm + LANCZOS_G + 0.5;
    let log_abs = 0.5 * (2.0 * PI).ln() + (xm + 0.5) * w.ln() - w + t.ln();
    (log_abs, 1)
}

/// `1/Γ(x)` in double precision; zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    let (lg, sign) = log_gamma_real(x);
    if sign == 0 {
        0.0
    } else {
        f64::from(sign) * (-lg).exp()
    }
}

/// Taylor coefficients of `1/Γ(1.5 + t)` as (hi, lo) pairs, |t| <= 1/2.
// the leading coefficient is 1/Γ(3/2) = 2/√π, kept as its (hi, lo) split
#[allow(clippy::approx_constant)]
const RGAMMA_TAYLOR: [(f64, f64); 34] = [
    (1.1283791670955126, 1.533545961316588e-17),
    (-0.0411745264452831, -3.3752130157375745e-18),
    (-0.5266544355255445, -6.112036385608127e-18),
    (0.17510202604393457, -1.0657471268514412e-17),
    (0.050966860247706074, 3.1247224718944427e-18),
    (-0.042155169368535604, 3.0976342103734477e-18),
    (0.006612897826824127, 3.573455638859823e-19),
    (0.002120731442572938, 1.3781297975220145e-19),
    (-0.0011107302545948906, -9.753454144222531e-20),
    (0.00015235762076747688, -1.0906520861329338e-20),
    (2.5355204923814165e-05, 4.893956349690275e-22),
    (-1.3896805717913756e-05, 2.1533543121307036e-22),
    (2.1562032905141724e-06, 8.714226745633228e-23),
    (5.7942640540526726e-08, -7.454341938541845e-25),
    (-8.913551118311116e-08, -3.639776989356635e-24),
    (1.7103469415915374e-08, 1.1274857846497739e-25),
    (-9.313686445241901e-10, -3.474969316158858e-26),
    (-2.6804741033496623e-10, -2.3612584194639298e-26),
    (7.458932233316326e-11, 2.4373478754056218e-27),
    (-8.012807061414718e-12, -7.570390468804759e-28),
    (-8.382343033451855e-14, 3.885823863175652e-30),
    (1.6946340904320522e-13, 2.2653509452158334e-30),
    (-2.7875756707125753e-14, 6.524116911441165e-31),
    (1.8670394695065306e-15, -4.254392590878746e-32),
    (1.3049499008587988e-16, -9.270238560188959e-33),
    (-4.8588741441877864e-17, -1.339620604759889e-33),
    (5.829542692459468e-18, -7.523759917630262e-35),
    (-2.592909417993784e-19, 4.8295929078260184e-36),
    (-3.326754010285789e-20, 1.6251345689863235e-36),
    (7.944961635768106e-21, -3.661196591132274e-37),
    (-7.755543288437357e-22, -3.001439691199397e-38),
    (2.5533736291329696e-23, 1.0788765942473458e-40),
    (4.274520160147173e-24, 2.7654689015952895e-40),
    (-8.263381374668449e-25, -2.4845851081041036e-41),
];

/// `1/Γ(x)` in double-double precision. Intended for |x| up to a few dozen;
/// the argument is shifted into [1, 2) by the recurrence.
pub fn rgamma_dd(x: DoubleDouble) -> DoubleDouble {
    let shift = x.hi.floor() - 1.0;
    let mut factor = DoubleDouble::ONE;
    let mut reduced = x;
    if shift > 0.0 {
        // 1/Γ(x) = 1/Γ(x-k) / ((x-1)...(x-k))
        let mut denom = DoubleDouble::ONE;
        for j in 1..=shift as i64 {
            denom = denom * x.add_f64(-(j as f64));
        }
        reduced = x.add_f64(-shift);
        factor = DoubleDouble::ONE / denom;
    } else if shift < 0.0 {
        // 1/Γ(x) = x(x+1)...(x+k-1) / Γ(x+k)
        let k = (-shift) as i64;
        for j in 0..k {
            factor = factor * x.add_f64(j as f64);
        }
        reduced = x.add_f64(k as f64);
    }
    let t = reduced.add_f64(-1.5);
    let mut acc = DoubleDouble::ZERO;
    for &(hi, lo) in RGAMMA_TAYLOR.iter().rev() {
        acc = acc * t + DoubleDouble::new(hi, lo);
    }
    acc * factor
}
