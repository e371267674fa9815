//! Built-in potentials, including the four benchmark examples.

use crate::error::{invalid, Result};
use crate::forward_oracle::PotentialSpec;
use crate::scalar::{Cx, Real};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
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

/// Gamma function of a real argument (Lanczos approximation, reflection below 1/2).
pub fn gamma<T: Real>(x: T) -> T {
    let half = T::of(0.5);
    if x < half {
        let pi = T::PI();
        return pi / ((pi * x).sin() * gamma(T::one() - x));
    }
    let x = x - T::one();
    let mut a = T::of(LANCZOS[0]);
    let t = x + T::of(LANCZOS_G) + half;
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a = a + T::of(c) / (x + T::of_usize(i));
    }
    (T::of(2.0) * T::PI()).sqrt() * t.powf(x + half) * (-t).exp() * a
}

/// `e^x + i` on `[0, pi]`.
pub fn example1<T: Real>() -> PotentialSpec<T> {
    PotentialSpec::new(T::PI(), |x: T| Cx::new(x.exp(), T::one())).expect("valid builtin")
}

/// `10 cos(13x)/(x + 0.1)^2 + i pi e^x sin(20.23 x)` on `[0, 1]`.
pub fn example2<T: Real>() -> PotentialSpec<T> {
    PotentialSpec::new(T::one(), |x: T| {
        let d = x + T::of(0.1);
        Cx::new(
            T::of(10.0) * (T::of(13.0) * x).cos() / (d * d),
            T::PI() * x.exp() * (T::of(20.23) * x).sin(),
        )
    })
    .expect("valid builtin")
}

/// `((6x - pi)^6 - 8 (6x - pi)^4 + (10.8x - pi)^2)/4 + 20.23 + i Gamma(x + pi)` on `[0, 1]`.
pub fn example3<T: Real>() -> PotentialSpec<T> {
    PotentialSpec::new(T::one(), |x: T| {
        let pi = T::PI();
        let u = T::of(6.0) * x - pi;
        let v = T::of(10.8) * x - pi;
        let re = (u.powi(6) - T::of(8.0) * u.powi(4) + v * v) / T::of(4.0) + T::of(20.23);
        Cx::new(re, gamma(x + pi))
    })
    .expect("valid builtin")
}

fn abs_primitive<T: Real>(x: T, c: T) -> T {
    let half = T::of(0.5);
    if x <= c {
        c * x - x * x * half
    } else {
        c * c * half + (x - c) * (x - c) * half
    }
}

/// `int_0^x (|s - 1/3| + pi |s - 4/5|) ds + i (1 - (pi x - 1)^2 sgn(1 - pi x))` on `[0, 1]`.
pub fn example4<T: Real>() -> PotentialSpec<T> {
    let third = T::one() / T::of(3.0);
    let four_fifths = T::of(0.8);
    PotentialSpec::new(T::one(), move |x: T| {
        let pi = T::PI();
        let re = abs_primitive(x, third) + pi * abs_primitive(x, four_fifths);
        let w = pi * x - T::one();
        let sgn = if w < T::zero() {
            T::one()
        } else if w > T::zero() {
            -T::one()
        } else {
            T::zero()
        };
        Cx::new(re, T::one() - w * w * sgn)
    })
    .expect("valid builtin")
    .with_breakpoints(vec![third, four_fifths, T::FRAC_1_PI()])
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 5] = ["zero", "example1", "example2", "example3", "example4"];

/// Looks up a built-in potential by name; `zero` uses `length`.
pub fn builtin<T: Real>(name: &str, length: T) -> Result<PotentialSpec<T>> {
    match name {
        "zero" => PotentialSpec::zero(length),
        "example1" => Ok(example1()),
        "example2" => Ok(example2()),
        "example3" => Ok(example3()),
        "example4" => Ok(example4()),
        _ => Err(invalid(format!("unknown builtin potential '{name}'"))),
    }
}
