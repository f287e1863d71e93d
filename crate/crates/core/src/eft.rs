//! Error-free transformations and compensated polynomial evaluation.
//!
//! The characteristic polynomial is evaluated in regions where its value
//! sits five-plus orders of magnitude below its coefficient scale; plain
//! Horner loses the digits the tables are printed to. Real arguments go
//! through compensated Horner, complex arguments through a double-double
//! Horner built on the same two_sum/two_prod kernels.

use num_complex::Complex64;

/// a + b with exact rounding error.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let z = s - a;
    let e = (a - (s - z)) + (b - z);
    (s, e)
}

/// a * b with exact rounding error (FMA-based).
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

/// Compensated Horner evaluation of `Σ coeffs[k]·x^(L−k)` (descending
/// powers). Result is as accurate as Horner performed in twice the
/// working precision.
pub fn comp_horner(coeffs: &[f64], x: f64) -> f64 {
    let mut s = coeffs[0];
    let mut c = 0.0;
    for &a in &coeffs[1..] {
        let (p, pi) = two_prod(s, x);
        let (sum, sigma) = two_sum(p, a);
        s = sum;
        c = c * x + (pi + sigma);
    }
    s + c
}

/// Plain Horner for the derivative of `Σ coeffs[k]·x^(L−k)`.
pub fn horner_derivative(coeffs: &[f64], x: f64) -> f64 {
    let degree = coeffs.len() - 1;
    let mut s = 0.0;
    for (k, &a) in coeffs[..degree].iter().enumerate() {
        let power = (degree - k) as f64;
        s = s * x + power * a;
    }
    s
}

/// Unevaluated double-double value `hi + lo` with |lo| ≤ ulp(hi)/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = fast_renorm(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(Dd {
            hi: -other.hi,
            lo: -other.lo,
        })
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = fast_renorm(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

#[inline]
fn fast_renorm(hi: f64, lo: f64) -> (f64, f64) {
    let s = hi + lo;
    (s, lo - (s - hi))
}

/// Complex value in double-double components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DdComplex {
    pub re: Dd,
    pub im: Dd,
}

impl DdComplex {
    pub fn from_c64(z: Complex64) -> Self {
        Self {
            re: Dd::from_f64(z.re),
            im: Dd::from_f64(z.im),
        }
    }

    pub fn from_f64(x: f64) -> Self {
        Self {
            re: Dd::from_f64(x),
            im: Dd::ZERO,
        }
    }

    pub fn add(self, other: Self) -> Self {
        Self {
            re: self.re.add(other.re),
            im: self.im.add(other.im),
        }
    }

    pub fn mul(self, other: Self) -> Self {
        Self {
            re: self.re.mul(other.re).sub(self.im.mul(other.im)),
            im: self.re.mul(other.im).add(self.im.mul(other.re)),
        }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

/// Double-double Horner for complex arguments, descending powers.
pub fn dd_horner_complex(coeffs: &[f64], x: Complex64) -> Complex64 {
    let xd = DdComplex::from_c64(x);
    let mut s = DdComplex::from_f64(coeffs[0]);
    for &a in &coeffs[1..] {
        s = s.mul(xd).add(DdComplex::from_f64(a));
    }
    s.to_c64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_sum_recovers_error() {
        let (s, e) = two_sum(1.0, 1e-30);
        assert_eq!(s, 1.0);
        assert_eq!(e, 1e-30);
    }

    #[test]
    fn compensated_horner_beats_plain_on_ill_conditioned() {
        // (x - 1)^6 expanded, evaluated near the root: plain Horner loses
        // everything, compensated keeps ~full precision.
        let coeffs = [1.0, -6.0, 15.0, -20.0, 15.0, -6.0, 1.0];
        let x = 1.0 + 1e-3;
        let exact = 1e-18;
        let comp = comp_horner(&coeffs, x);
        assert!(
            ((comp - exact) / exact).abs() < 1e-10,
            "compensated {comp} vs {exact}"
        );
        let ddc = dd_horner_complex(&coeffs, Complex64::new(x, 0.0));
        assert!(((ddc.re - exact) / exact).abs() < 1e-10);
        assert!(ddc.im == 0.0);
    }

    #[test]
    fn derivative_matches_symbolic() {
        // d/dx (2x^3 - x + 5) = 6x^2 - 1
        let coeffs = [2.0, 0.0, -1.0, 5.0];
        let x = 1.7;
        assert!((horner_derivative(&coeffs, x) - (6.0 * x * x - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn dd_complex_multiplication() {
        let a = DdComplex::from_c64(Complex64::new(1.0, 2.0));
        let b = DdComplex::from_c64(Complex64::new(3.0, -1.0));
        let p = a.mul(b).to_c64();
        assert_eq!(p, Complex64::new(5.0, 5.0));
    }
}
