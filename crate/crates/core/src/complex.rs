//! Complex arithmetic over MPFR reals: a re/im pair at context precision.
//!
//! Elementary functions use principal branches throughout; contour code that
//! needs a non-principal argument (the Hankel rays) works with an explicit
//! logarithm instead of a bare point.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Round;
use rug::ops::{CompleteRound, Pow};
use rug::Float;

#[derive(Debug, Clone, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub fn new(re: Float, im: Float) -> Self {
        Self { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Self::new(Float::new(prec), Float::new(prec))
    }

    pub fn from_real(re: Float) -> Self {
        let prec = re.prec();
        Self::new(re, Float::new(prec))
    }

    pub fn with_val(prec: u32, re: f64, im: f64) -> Self {
        Self::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    /// i at the given precision.
    pub fn i(prec: u32) -> Self {
        Self::new(Float::new(prec), Float::with_val(prec, 1))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), (-&self.im).complete(self.prec()))
    }

    /// |z|^2 = re^2 + im^2.
    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.clone().square() + self.im.clone().square())
    }

    /// |z| via hypot (no intermediate overflow).
    pub fn abs(&self) -> Float {
        self.re.clone().hypot(&self.im)
    }

    /// Principal argument in (-pi, pi].
    pub fn arg(&self) -> Float {
        self.im.clone().atan2(&self.re)
    }

    /// z * i.
    pub fn mul_i(&self) -> Self {
        let p = self.prec();
        Self::new((-&self.im).complete(p), self.re.clone())
    }

    /// z * (-i).
    pub fn mul_neg_i(&self) -> Self {
        let p = self.prec();
        Self::new(self.im.clone(), (-&self.re).complete(p))
    }

    pub fn scale(&self, k: &Float) -> Self {
        let p = self.prec();
        Self::new((&self.re * k).complete(p), (&self.im * k).complete(p))
    }

    pub fn scale_f64(&self, k: f64) -> Self {
        let p = self.prec();
        Self::new(
            Float::with_val(p, &self.re * k),
            Float::with_val(p, &self.im * k),
        )
    }

    pub fn recip(&self) -> Self {
        let p = self.prec();
        let n = self.norm_sqr();
        Self::new(
            Float::with_val(p, &self.re / &n),
            Float::with_val(p, -(&self.im).complete(p) / &n),
        )
    }

    /// exp(z) = e^re (cos im + i sin im).
    pub fn exp(&self) -> Self {
        let p = self.prec();
        let m = self.re.clone().exp();
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        Self::new(Float::with_val(p, &m * &c), Float::with_val(p, &m * &s))
    }

    /// Principal logarithm: ln|z| + i arg(z).
    pub fn ln(&self) -> Self {
        Self::new(self.abs().ln(), self.arg())
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        // sqrt via half-angle: sqrt(|z|) * e^{i arg/2}
        let r = self.abs().sqrt();
        let half_arg = Float::with_val(p, self.arg() / 2u32);
        let (s, c) = half_arg.sin_cos(Float::new(p));
        Self::new(Float::with_val(p, &r * &c), Float::with_val(p, &r * &s))
    }

    /// z^w = exp(w ln z), principal branch.
    pub fn powc(&self, w: &Complex) -> Self {
        (w * &self.ln()).exp()
    }

    /// z^x for real x, principal branch.
    pub fn powf(&self, x: &Float) -> Self {
        self.ln().scale(x).exp()
    }

    /// sin(a+bi) = sin a cosh b + i cos a sinh b.
    pub fn sin(&self) -> Self {
        let p = self.prec();
        let (sa, ca) = self.re.clone().sin_cos(Float::new(p));
        let (shb, chb) = self.im.clone().sinh_cosh(Float::new(p));
        Self::new(Float::with_val(p, &sa * &chb), Float::with_val(p, &ca * &shb))
    }

    pub fn cos(&self) -> Self {
        let p = self.prec();
        let (sa, ca) = self.re.clone().sin_cos(Float::new(p));
        let (shb, chb) = self.im.clone().sinh_cosh(Float::new(p));
        Self::new(
            Float::with_val(p, &ca * &chb),
            -Float::with_val(p, &sa * &shb),
        )
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

/// x^w for positive real x and complex w: exp(w ln x).
pub fn real_pow_complex(x: &Float, w: &Complex) -> Complex {
    let lx = Complex::from_real(x.clone().ln());
    (w * &lx).exp()
}

/// e^{i theta} at theta's precision.
pub fn unit_phase(theta: &Float) -> Complex {
    let p = theta.prec();
    let (s, c) = theta.clone().sin_cos(Float::new(p));
    Complex::new(c, s)
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_sign_negative() {
            write!(f, "{} - {}i", self.re, self.im.clone().abs())
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait<Complex> for Complex {
            type Output = Complex;
            fn $method(self, rhs: Complex) -> Complex {
                $trait::$method(&self, &rhs)
            }
        }
        impl $trait<&Complex> for Complex {
            type Output = Complex;
            fn $method(self, rhs: &Complex) -> Complex {
                $trait::$method(&self, rhs)
            }
        }
        impl $trait<Complex> for &Complex {
            type Output = Complex;
            fn $method(self, rhs: Complex) -> Complex {
                $trait::$method(self, &rhs)
            }
        }
    };
}

impl Add<&Complex> for &Complex {
    type Output = Complex;
    fn add(self, rhs: &Complex) -> Complex {
        let p = self.prec();
        Complex::new(
            (&self.re + &rhs.re).complete(p),
            (&self.im + &rhs.im).complete(p),
        )
    }
}
forward_owned!(Add, add);

impl Sub<&Complex> for &Complex {
    type Output = Complex;
    fn sub(self, rhs: &Complex) -> Complex {
        let p = self.prec();
        Complex::new(
            (&self.re - &rhs.re).complete(p),
            (&self.im - &rhs.im).complete(p),
        )
    }
}
forward_owned!(Sub, sub);

impl Mul<&Complex> for &Complex {
    type Output = Complex;
    fn mul(self, rhs: &Complex) -> Complex {
        let p = self.prec();
        let re = (&self.re * &rhs.re).complete(p) - (&self.im * &rhs.im).complete(p);
        let im = (&self.re * &rhs.im).complete(p) + (&self.im * &rhs.re).complete(p);
        Complex::new(Float::with_val(p, re), Float::with_val(p, im))
    }
}
forward_owned!(Mul, mul);

impl Div<&Complex> for &Complex {
    type Output = Complex;
    fn div(self, rhs: &Complex) -> Complex {
        let p = self.prec();
        let n = rhs.norm_sqr();
        let re = (&self.re * &rhs.re).complete(p) + (&self.im * &rhs.im).complete(p);
        let im = (&self.im * &rhs.re).complete(p) - (&self.re * &rhs.im).complete(p);
        Complex::new(Float::with_val(p, re / &n), Float::with_val(p, im / &n))
    }
}
forward_owned!(Div, div);

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        let p = self.prec();
        Complex::new((-&self.re).complete(p), (-&self.im).complete(p))
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        -&self
    }
}

/// Round-half-even f64 -> Float helper used in tight loops.
pub fn float_from(prec: u32, v: f64) -> Float {
    Float::with_val_round(prec, v, Round::Nearest).0
}
