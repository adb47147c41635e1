//! Quadrature machinery: Gauss-Legendre panels sized to the oscillation
//! wavelength, principal-value integrals by mirrored nodes around the pole,
//! complex-ray integration with decay-controlled truncation, and the Hankel
//! contour.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use rug::ops::{CompleteRound, Pow};
use rug::Float;

use crate::complex::Complex;
use crate::context::PrecisionContext;
use crate::error::{Error, Result};
use crate::kahan::KahanComplex;

/// Contour and refinement parameters for the integral evaluators.
#[derive(Debug, Clone)]
pub struct QuadratureSpec {
    /// Gauss-Legendre nodes per panel.
    pub gl_nodes: usize,
    /// Global panel-halving rounds allowed before giving up.
    pub max_refine: u32,
    /// Oscillation safety factor: panels are at most (2*pi/freq)/osc_div wide.
    pub osc_div: u32,
    /// Absolute excision radius for principal-value integrals, as a fraction
    /// of the mirrored half-width.
    pub pv_excision_frac: f64,
    /// Relative tolerance for the refinement agreement test.
    pub tol: f64,
    pub hankel: HankelSpec,
}

/// Hankel contour: unit circle around the branch point plus two rays along
/// the cut, truncated where e^{-r} has died.
#[derive(Debug, Clone)]
pub struct HankelSpec {
    pub circle_radius: f64,
    pub truncation_radius: f64,
    pub nodes_per_unit: usize,
}

impl HankelSpec {
    pub fn validate(&self) -> Result<()> {
        if self.circle_radius != 1.0 {
            return Err(Error::Domain(
                "hankel circle_radius is fixed at 1".into(),
            ));
        }
        if self.truncation_radius < 10.0 {
            return Err(Error::Domain(
                "hankel truncation_radius must be >= 10".into(),
            ));
        }
        Ok(())
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            gl_nodes: 24,
            max_refine: 10,
            osc_div: 8,
            pv_excision_frac: 1e-9,
            tol: 1e-30,
            hankel: HankelSpec {
                circle_radius: 1.0,
                truncation_radius: 60.0,
                nodes_per_unit: 48,
            },
        }
    }
}

impl QuadratureSpec {
    /// Spec with the agreement tolerance set from the context rel_tol.
    pub fn for_context(ctx: &PrecisionContext) -> Self {
        Self {
            tol: ctx.rel_tol().to_f64().max(1e-60),
            ..Self::default()
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

type GlTable = Arc<(Vec<Float>, Vec<Float>)>;

static GL_CACHE: OnceLock<Mutex<HashMap<(u32, usize), GlTable>>> = OnceLock::new();

/// Gauss-Legendre nodes/weights on [-1, 1] at the given precision.
///
/// Newton iteration on P_n from Chebyshev initial guesses; each iteration
/// roughly doubles the correct bits, so a handful of steps reach any target.
pub fn gauss_legendre(prec: u32, n: usize) -> GlTable {
    let cache = GL_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&(prec, n)) {
        return t.clone();
    }
    let wp = prec + 32;
    let pi = Float::with_val(wp, rug::float::Constant::Pi);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let iters = {
        let mut i = 1u32;
        let mut bits = 50u32;
        while bits < wp {
            bits *= 2;
            i += 1;
        }
        i + 2
    };
    for k in 0..n {
        let guess = Float::with_val(
            wp,
            &pi * Float::with_val(wp, (k as f64 + 0.75) / (n as f64 + 0.5)),
        )
        .cos();
        let mut x = guess;
        let mut dp = Float::new(wp);
        for _ in 0..iters {
            // Legendre recurrence for P_n(x) and P'_n(x)
            let mut p0 = Float::with_val(wp, 1);
            let mut p1 = x.clone();
            for j in 2..=n {
                let jf = j as f64;
                let p2 = (Float::with_val(wp, &x * &p1) * Float::with_val(wp, 2.0 * jf - 1.0)
                    - Float::with_val(wp, &p0 * (jf - 1.0)))
                    / Float::with_val(wp, jf);
                p0 = p1;
                p1 = Float::with_val(wp, p2);
            }
            // P'_n = n (x P_n - P_{n-1}) / (x^2 - 1)
            let x2m1 = Float::with_val(wp, &x * &x) - 1u32;
            dp = (Float::with_val(wp, &x * &p1) - &p0) * Float::with_val(wp, n as f64) / &x2m1;
            let step = Float::with_val(wp, &p1 / &dp);
            x -= step;
        }
        let x2m1 = Float::with_val(wp, &x * &x) - 1u32;
        let w = Float::with_val(wp, 2) / (Float::with_val(wp, -&x2m1) * dp.clone().square());
        nodes.push(Float::with_val(prec, -&x));
        weights.push(Float::with_val(prec, w));
    }
    let t: GlTable = Arc::new((nodes, weights));
    cache
        .lock()
        .unwrap()
        .insert((prec, n), t.clone());
    t
}

/// GL quadrature of f over one panel [a, b].
pub fn gl_panel<F>(prec: u32, table: &GlTable, f: &F, a: &Float, b: &Float) -> Complex
where
    F: Fn(&Float) -> Complex + ?Sized,
{
    let half = (Float::with_val(prec, b - a)) / 2u32;
    let mid = (Float::with_val(prec, a + b)) / 2u32;
    let mut acc = KahanComplex::new(prec);
    for (x, w) in table.0.iter().zip(table.1.iter()) {
        let t = (&mid + Float::with_val(prec, &half * x)).complete(prec);
        let v = f(&t).scale(w);
        acc.add(&v);
    }
    acc.value().scale(&half)
}

fn panel_edges(prec: u32, a: &Float, b: &Float, n: usize) -> Vec<Float> {
    let mut edges = Vec::with_capacity(n + 1);
    let width = (b - a).complete(prec);
    for k in 0..=n {
        edges.push((a + Float::with_val(prec, &width * Float::with_val(prec, k as f64 / n as f64))).complete(prec));
    }
    edges
}

fn sum_panels<F>(prec: u32, table: &GlTable, f: &F, edges: &[Float]) -> Complex
where
    F: Fn(&Float) -> Complex + Sync,
{
    let parts: Vec<Complex> = (0..edges.len() - 1)
        .into_par_iter()
        .map(|i| gl_panel(prec, table, f, &edges[i], &edges[i + 1]))
        .collect();
    let mut acc = KahanComplex::new(prec);
    for p in &parts {
        acc.add(p);
    }
    acc.value()
}

/// Integrate f over [a, b] with panels no wider than `h_max`, verified by one
/// global halving; keeps halving until two passes agree to spec.tol
/// (relative to the larger magnitude) or refinement is exhausted.
pub fn integrate_oscillatory<F>(
    prec: u32,
    spec: &QuadratureSpec,
    f: &F,
    a: &Float,
    b: &Float,
    h_max: &Float,
) -> Result<Complex>
where
    F: Fn(&Float) -> Complex + Sync,
{
    if a >= b {
        return Ok(Complex::zero(prec));
    }
    let table = gauss_legendre(prec, spec.gl_nodes);
    let width = (b - a).complete(prec);
    let mut n = (width.clone() / h_max)
        .to_f64()
        .ceil()
        .max(1.0) as usize;
    let mut prev = sum_panels(prec, &table, f, &panel_edges(prec, a, b, n));
    for _ in 0..spec.max_refine {
        n *= 2;
        let cur = sum_panels(prec, &table, f, &panel_edges(prec, a, b, n));
        let diff = (&cur - &prev).abs();
        let scale = cur.abs().max(&prev.abs());
        let tol = Float::with_val(prec, spec.tol);
        if diff <= (Float::with_val(prec, &tol * &scale)).max(&tol) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Convergence(format!(
        "panel refinement stalled on [{}, {}] after {} rounds",
        a.to_f64(),
        b.to_f64(),
        spec.max_refine
    )))
}

/// Principal value over the symmetric window [c-r, c+r] with mirrored nodes:
/// the odd 1/(tau-c) part cancels inside each node pair, and the excised
/// (-eps, eps) core is checked by an eps vs eps/2 Richardson comparison.
pub fn pv_mirrored<F>(
    prec: u32,
    spec: &QuadratureSpec,
    f: &F,
    c: &Float,
    r: &Float,
    h_max: &Float,
) -> Result<Complex>
where
    F: Fn(&Float) -> Complex + Sync,
{
    let paired = |u: &Float| -> Complex {
        let up = (c + u).complete(prec);
        let um = (c - u).complete(prec);
        &f(&up) + &f(&um)
    };
    let eval = |eps: &Float| -> Result<Complex> {
        integrate_oscillatory(prec, spec, &paired, eps, r, h_max)
    };
    let eps = Float::with_val(prec, r * Float::with_val(prec, spec.pv_excision_frac));
    let v1 = eval(&eps)?;
    let half_eps = (&eps / 2u32).complete(prec);
    let v2 = eval(&half_eps)?;
    let diff = (&v2 - &v1).abs();
    let scale = v2.abs().max(&Float::with_val(prec, 1));
    if diff > Float::with_val(prec, &scale * Float::with_val(prec, spec.tol.sqrt())) {
        return Err(Error::Convergence(
            "principal-value excision study did not converge".into(),
        ));
    }
    Ok(v2)
}

/// Integrate f(rho) over the ray rho in [0, inf) in geometrically growing
/// panels, stopping once panels are negligible against the running total.
pub fn integrate_ray<F>(
    prec: u32,
    spec: &QuadratureSpec,
    f: &F,
    h0: &Float,
    growth: f64,
    max_panels: usize,
) -> Result<Complex>
where
    F: Fn(&Float) -> Complex + Sync,
{
    let table = gauss_legendre(prec, spec.gl_nodes);
    let mut acc = KahanComplex::new(prec);
    let mut lo = Float::new(prec);
    let mut h = h0.clone();
    let mut quiet = 0u32;
    let tol = Float::with_val(prec, spec.tol);
    for _ in 0..max_panels {
        let hi = (&lo + &h).complete(prec);
        let p = gl_panel(prec, &table, f, &lo, &hi);
        acc.add(&p);
        let total = acc.value().abs().max(&Float::with_val(prec, 1e-300));
        if p.abs() <= Float::with_val(prec, &tol * &total) {
            quiet += 1;
            if quiet >= 3 {
                return Ok(acc.value());
            }
        } else {
            quiet = 0;
        }
        lo = hi;
        h *= Float::with_val(prec, growth);
    }
    Err(Error::Convergence(
        "ray integral did not decay within the panel budget".into(),
    ))
}

/// A point on the Hankel contour: the point and the contour-consistent
/// logarithm (arg = -pi on the incoming ray, +pi on the outgoing one).
pub struct HankelPoint {
    pub z: Complex,
    pub log_z: Complex,
}

/// Integral of f over the Hankel contour H (incoming ray below the cut, unit
/// circle, outgoing ray above the cut), truncated at spec.truncation_radius.
pub fn hankel_integral<F>(ctx: &PrecisionContext, spec: &HankelSpec, f: F) -> Result<Complex>
where
    F: Fn(&HankelPoint) -> Complex + Sync,
{
    spec.validate()?;
    let prec = ctx.bits();
    let pi = ctx.pi();
    let table = gauss_legendre(prec, 24);

    // circle part: z = e^{i theta}, dz = i e^{i theta} d theta
    let circle_f = |theta: &Float| -> Complex {
        let log_z = Complex::new(Float::new(prec), theta.clone());
        let z = log_z.exp();
        let dz = z.mul_i();
        let p = HankelPoint { z, log_z };
        &f(&p) * &dz
    };
    let ncirc = ((spec.nodes_per_unit as f64) * 2.0 * std::f64::consts::PI / 24.0)
        .ceil()
        .max(6.0) as usize;
    let circle = {
        let a = (-pi).complete(prec);
        let edges = panel_edges(prec, &a, pi, ncirc);
        let parts: Vec<Complex> = (0..edges.len() - 1)
            .into_par_iter()
            .map(|i| gl_panel(prec, &table, &circle_f, &edges[i], &edges[i + 1]))
            .collect();
        let mut acc = KahanComplex::new(prec);
        for p in &parts {
            acc.add(p);
        }
        acc.value()
    };

    // rays: contribution is  int_1^R [ f(r e^{-i pi}) - f(r e^{i pi}) ] dr
    let ray_f = |r: &Float| -> Complex {
        let lr = r.clone().ln();
        let below = HankelPoint {
            z: Complex::new((-r).complete(prec), Float::new(prec)),
            log_z: Complex::new(lr.clone(), (-pi).complete(prec)),
        };
        let above = HankelPoint {
            z: Complex::new((-r).complete(prec), Float::new(prec)),
            log_z: Complex::new(lr, pi.clone()),
        };
        &f(&below) - &f(&above)
    };
    let mut acc = KahanComplex::new(prec);
    acc.add(&circle);
    let mut lo = Float::with_val(prec, 1);
    let mut h = Float::with_val(prec, 24.0 / spec.nodes_per_unit as f64);
    while lo.to_f64() < spec.truncation_radius {
        let hi = Float::with_val(prec, (&lo + &h).complete(prec))
            .min(&Float::with_val(prec, spec.truncation_radius));
        let p = gl_panel(prec, &table, &ray_f, &lo, &hi);
        acc.add(&p);
        lo = hi;
        h *= Float::with_val(prec, 1.3);
    }
    Ok(acc.value())
}

/// Truncation radius making e^{-r} r^{m} < rel_tol/100, per the ray cutoff
/// policy.
pub fn hankel_truncation_radius(ctx: &PrecisionContext, max_im_exponent: f64) -> f64 {
    let target = (ctx.rel_tol().to_f64().max(1e-300) / 100.0).ln();
    let mut r = 30.0f64;
    for _ in 0..80 {
        let g = -r + max_im_exponent * r.ln() - target;
        let dg = -1.0 + max_im_exponent / r;
        let step = g / dg;
        r -= step;
        if step.abs() < 1e-9 {
            break;
        }
    }
    r.max(10.0)
}

/// max of two Floats by value.
trait MaxFloat {
    fn max(self, other: &Float) -> Float;
}

impl MaxFloat for Float {
    fn max(self, other: &Float) -> Float {
        if self >= *other {
            self
        } else {
            other.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_integrates_polynomials_exactly() {
        let prec = 192u32;
        let table = gauss_legendre(prec, 8);
        // int_0^1 x^7 dx = 1/8, exact for 8-node GL
        let f = |x: &Float| Complex::from_real(x.clone().pow(7));
        let a = Float::new(prec);
        let b = Float::with_val(prec, 1);
        let v = gl_panel(prec, &table, &f, &a, &b);
        let err = (v.re - Float::with_val(prec, 0.125)).abs();
        assert!(err.to_f64() < 1e-50);
    }

    #[test]
    fn oscillatory_sin() {
        let ctx = PrecisionContext::new(128).unwrap();
        let spec = QuadratureSpec::for_context(&ctx).with_tol(1e-30);
        // int_0^pi sin(40 x) dx = (1 - cos(40 pi))/40 = 0 at integer multiples
        let f = |x: &Float| {
            Complex::from_real(Float::with_val(128, x * Float::with_val(128, 40)).sin())
        };
        let a = ctx.zero();
        let b = ctx.pi().clone();
        let h = Float::with_val(128, 2.0 * std::f64::consts::PI / 40.0 / 8.0);
        let v = integrate_oscillatory(128, &spec, &f, &a, &b, &h).unwrap();
        assert!(v.re.to_f64().abs() < 1e-28);
    }

    #[test]
    fn pv_of_odd_over_x() {
        let ctx = PrecisionContext::new(128).unwrap();
        let spec = QuadratureSpec::for_context(&ctx).with_tol(1e-25);
        // PV int_{-1}^{1} e^x / x dx = 2 * Shi(1) = 2.114501750751457...
        let f = |x: &Float| {
            let p = 128;
            Complex::from_real(Float::with_val(p, x.clone().exp() / x))
        };
        let c = ctx.zero();
        let r = ctx.real(1);
        let h = ctx.real(0.25);
        let v = pv_mirrored(128, &spec, &f, &c, &r, &h).unwrap();
        assert!((v.re.to_f64() - 2.1145017507514570852).abs() < 1e-20);
    }

    #[test]
    fn hankel_basic_residue() {
        let ctx = PrecisionContext::new(128).unwrap();
        let spec = HankelSpec {
            circle_radius: 1.0,
            truncation_radius: 40.0,
            nodes_per_unit: 48,
        };
        // int_H e^z / z dz = 2 pi i
        let f = |p: &HankelPoint| -> Complex { &p.z.exp() / &p.z };
        let v = hankel_integral(&ctx, &spec, f).unwrap();
        let two_pi = 2.0 * std::f64::consts::PI;
        assert!(v.re.to_f64().abs() < 1e-12);
        assert!((v.im.to_f64() - two_pi).abs() < 1e-12);
    }
}
