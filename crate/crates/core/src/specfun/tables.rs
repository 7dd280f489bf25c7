#![allow(clippy::excessive_precision)]

//! Constant tables shared by the special functions.

/// Even-index Bernoulli numbers `B_0, B_2, ..., B_40`.
pub(crate) const BERNOULLI_EVEN: [f64; 21] = [
    1.0,
    0.16666666666666666,
    -0.03333333333333333,
    0.023809523809523808,
    -0.03333333333333333,
    0.07575757575757576,
    -0.2531135531135531,
    1.1666666666666667,
    -7.092156862745098,
    54.971177944862156,
    -529.1242424242424,
    6192.123188405797,
    -86580.25311355312,
    1425517.1666666667,
    -27298231.067816094,
    601580873.9006424,
    -15116315767.092157,
    429614643061.1667,
    -13711655205088.332,
    488332318973593.2,
    -1.9296579341940068e16,
];

/// Riemann zeta values `zeta(2), ..., zeta(40)`.
pub(crate) const ZETA_INT: [f64; 39] = [
    1.6449340668482264365,
    1.2020569031595942854,
    1.0823232337111381915,
    1.0369277551433699263,
    1.0173430619844491397,
    1.0083492773819228268,
    1.0040773561979443394,
    1.0020083928260822144,
    1.0009945751278180853,
    1.0004941886041194646,
    1.0002460865533080483,
    1.0001227133475784891,
    1.0000612481350587048,
    1.0000305882363070205,
    1.0000152822594086519,
    1.0000076371976378998,
    1.0000038172932649998,
    1.0000019082127165539,
    1.0000009539620338728,
    1.0000004769329867878,
    1.0000002384505027277,
    1.0000001192199259653,
    1.0000000596081890513,
    1.0000000298035035147,
    1.0000000149015548284,
    1.0000000074507117898,
    1.0000000037253340248,
    1.0000000018626597235,
    1.0000000009313274324,
    1.0000000004656629065,
    1.0000000002328311834,
    1.0000000001164155017,
    1.0000000000582077209,
    1.0000000000291038504,
    1.0000000000145519219,
    1.0000000000072759598,
    1.0000000000036379795,
    1.0000000000018189897,
    1.0000000000009094948,
];

pub(crate) const EULER_GAMMA: f64 = 0.57721566490153286061;

/// Lanczos series for `ln Gamma(x)`, `x > 0`, with `g = 671/128`.
pub(crate) const LANCZOS_G_SHIFT: f64 = 5.24218750000000000;
pub(crate) const LANCZOS_SERIES_0: f64 = 0.999999999999997092;
pub(crate) const LANCZOS_SQRT_2PI: f64 = 2.5066282746310005;
pub(crate) const LANCZOS_COEFFS: [f64; 14] = [
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
];

/// Bernoulli number `B_n` (with `B_1 = -1/2`).
pub(crate) fn bernoulli(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => -0.5,
        n if n % 2 == 1 => 0.0,
        n => BERNOULLI_EVEN[n / 2],
    }
}
