//! Double-double complex arithmetic (about 32 significant digits), used only
//! by reference computations in tests.

#![allow(dead_code)]

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub fn new(v: f64) -> Self {
        Dd { hi: v, lo: 0.0 }
    }
    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        let (hi, lo) = two_sum(s, e);
        Dd { hi, lo }
    }
    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }
    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = two_sum(p, e);
        Dd { hi, lo }
    }
    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd::new(q1)));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul(Dd::new(q2)));
        let q3 = r.hi / o.hi;
        Dd::new(q1).add(Dd::new(q2)).add(Dd::new(q3))
    }
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub fn from_c(z: Complex64) -> Self {
        Cdd { re: Dd::new(z.re), im: Dd::new(z.im) }
    }
    pub fn one() -> Self {
        Cdd { re: Dd::new(1.0), im: Dd::new(0.0) }
    }
    pub fn add(self, o: Cdd) -> Cdd {
        Cdd { re: self.re.add(o.re), im: self.im.add(o.im) }
    }
    pub fn sub(self, o: Cdd) -> Cdd {
        Cdd { re: self.re.sub(o.re), im: self.im.sub(o.im) }
    }
    pub fn mul(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }
    pub fn scale(self, s: Dd) -> Cdd {
        Cdd { re: self.re.mul(s), im: self.im.mul(s) }
    }
    pub fn div_real(self, d: Dd) -> Cdd {
        Cdd { re: self.re.div(d), im: self.im.div(d) }
    }
    pub fn div(self, o: Cdd) -> Cdd {
        let den = o.re.mul(o.re).add(o.im.mul(o.im));
        let conj = Cdd { re: o.re, im: o.im.neg() };
        self.mul(conj).div_real(den)
    }
    pub fn norm(self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }
    pub fn to_c(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

/// Ascending series for `j_n(z)` in double-double precision.
pub fn sph_jn_series(n: usize, z: Complex64) -> Complex64 {
    let zz = Cdd::from_c(z);
    let mut pre = Cdd::one();
    for k in 1..=n {
        pre = pre.mul(zz).div_real(Dd::new((2 * k + 1) as f64));
    }
    let w = zz.mul(zz).div_real(Dd::new(-2.0));
    let mut term = Cdd::one();
    let mut sum = Cdd::one();
    for k in 1..2000 {
        term = term
            .mul(w)
            .div_real(Dd::new(k as f64))
            .div_real(Dd::new((2 * n + 2 * k + 1) as f64));
        sum = sum.add(term);
        if k > 5 && term.norm() < 1e-34 * sum.norm() {
            break;
        }
    }
    pre.mul(sum).to_c()
}

/// Upward recurrence from the closed forms of `j0`, `j1`, carried out in
/// double-double; meaningful only for orders below `|z|`.
pub fn sph_jn_upward(n: usize, z: Complex64) -> Complex64 {
    let j0 = z.sin() / z;
    let j1 = z.sin() / (z * z) - z.cos() / z;
    let zz = Cdd::from_c(z);
    let mut a = Cdd::from_c(j0);
    let mut b = Cdd::from_c(j1);
    if n == 0 {
        return j0;
    }
    for k in 1..n {
        let next = b
            .scale(Dd::new((2 * k + 1) as f64))
            .div(zz)
            .sub(a);
        a = b;
        b = next;
    }
    b.to_c()
}

/// Maclaurin series of `3 j1(z)/z - cos z` in double-double.
pub fn c1_maclaurin(z: Complex64) -> Complex64 {
    // sum_k (-1)^k z^{2k} [3(2k+2)/(2k+3)! - 1/(2k)!]
    let zz = Cdd::from_c(z);
    let w = zz.mul(zz).scale(Dd::new(-1.0));
    let mut pw = Cdd::one();
    let mut fact_2k = Dd::new(1.0);
    let mut sum = Cdd { re: Dd::new(0.0), im: Dd::new(0.0) };
    for k in 1..60usize {
        pw = pw.mul(w);
        fact_2k = fact_2k.mul(Dd::new(((2 * k - 1) * (2 * k)) as f64));
        let fact_2k3 = fact_2k.mul(Dd::new(((2 * k + 1) * (2 * k + 2) * (2 * k + 3)) as f64));
        let coef = Dd::new((3 * (2 * k + 2)) as f64)
            .div(fact_2k3)
            .sub(Dd::new(1.0).div(fact_2k));
        let term = pw.scale(coef);
        sum = sum.add(term);
        if term.norm() < 1e-34 * sum.norm() {
            break;
        }
    }
    sum.to_c()
}

/// Maclaurin series of `sin z - 3 j1(z)` in double-double.
pub fn c2_maclaurin(z: Complex64) -> Complex64 {
    // sum_k (-1)^k z^{2k+1} [1/(2k+1)! - 3(2k+2)/(2k+3)!]
    let zz = Cdd::from_c(z);
    let w = zz.mul(zz).scale(Dd::new(-1.0));
    let mut pw = zz;
    let mut fact = Dd::new(1.0); // (2k+1)!
    let mut sum = Cdd { re: Dd::new(0.0), im: Dd::new(0.0) };
    for k in 1..60usize {
        pw = pw.mul(w);
        fact = fact.mul(Dd::new(((2 * k) * (2 * k + 1)) as f64));
        let fact_2k3 = fact.mul(Dd::new(((2 * k + 2) * (2 * k + 3)) as f64));
        let coef = Dd::new(1.0)
            .div(fact)
            .sub(Dd::new((3 * (2 * k + 2)) as f64).div(fact_2k3));
        let term = pw.scale(coef);
        sum = sum.add(term);
        if term.norm() < 1e-34 * sum.norm() {
            break;
        }
    }
    sum.to_c()
}
