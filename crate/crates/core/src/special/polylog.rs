//! Li_m(e^{iθ}) for integer m ≥ 1 on the unit circle.
//!
//! m = 1 is the closed form -ln(1 - e^{iθ}). For m ≥ 2 the series around
//! the singular point,
//!
//!   Li_m(e^μ) = μ^{m-1}/(m-1)! (H_{m-1} - ln(-μ))
//!             + Σ_{k≥0, k≠m-1} ζ(m-k) μ^k / k!,     |μ| < 2π,
//!
//! with μ = iθ reduced to (0, π] (conjugation symmetry covers (π, 2π)),
//! so the tail decays at least like (1/2)^k per step pair.

use rug::ops::CompleteRound;
use rug::Float;

use crate::complex::Complex;
use crate::context::PrecisionContext;
use crate::error::{Error, Result};
use crate::special::zeta::zeta_oracle;

/// ζ(m-k) for the expansion: positive arguments via the oracle, ζ(0) = -1/2,
/// negative via ζ(-n) = -B_{n+1}/(n+1).
fn zeta_int(ctx: &PrecisionContext, n: i64) -> Result<Float> {
    let p = ctx.bits();
    if n >= 2 {
        Ok(zeta_oracle(ctx, &Complex::from_real(ctx.real(n as i32)))?.re)
    } else if n == 0 {
        Ok(ctx.real(-0.5))
    } else if n == 1 {
        Err(Error::Pole("zeta(1) requested in polylog expansion".into()))
    } else {
        let m = (-n) as usize; // zeta(-m) = -B_{m+1}/(m+1)
        let b = ctx.bernoulli(m + 1);
        Ok(Float::with_val(p, -b / Float::with_val(p, (m + 1) as f64)))
    }
}

/// Li_m(e^{iθ}) by direct/accelerated series to rel_tol.
pub fn polylog(ctx: &PrecisionContext, m: u32, theta: &Float) -> Result<Complex> {
    if m == 0 {
        return Err(Error::Domain("polylog order must be >= 1".into()));
    }
    let p = ctx.bits();
    // reduce theta mod 2π into [0, 2π)
    let mut th = theta.clone().rem_euc(ctx.two_pi().clone());
    let near_zero = th.clone().abs() < *ctx.rel_tol()
        || (ctx.two_pi() - th.clone()).complete(p).abs() < *ctx.rel_tol();
    if near_zero {
        if m == 1 {
            return Err(Error::Divergence(
                "Li_1(e^{i theta}) diverges at theta = 0 mod 2 pi".into(),
            ));
        }
        return Ok(Complex::from_real(zeta_int(ctx, m as i64)?));
    }
    if m == 1 {
        // -ln(1 - e^{i theta})
        let (s, c) = th.sin_cos(Float::new(p));
        let w = Complex::new(Float::with_val(p, 1 - &c), -s);
        return Ok(-w.ln());
    }
    // conjugation symmetry to keep |mu| <= pi
    let conjugate = th > *ctx.pi();
    if conjugate {
        th = (ctx.two_pi() - &th).complete(p);
    }

    let mu = Complex::new(Float::new(p), th.clone()); // i theta
    // singular term mu^{m-1}/(m-1)! (H_{m-1} - ln(-mu));  ln(-i theta) = ln theta - i pi/2
    let mut harmonic = Float::new(p);
    let mut fact = Float::with_val(p, 1);
    for j in 1..m {
        harmonic += ctx.real(j).recip();
        fact *= Float::with_val(p, j);
    }
    let ln_minus_mu = Complex::new(th.clone().ln(), -(ctx.pi() / 2u32).complete(p));
    let mut mu_pow_m1 = Complex::from_real(ctx.real(1));
    for _ in 0..(m - 1) {
        mu_pow_m1 = &mu_pow_m1 * &mu;
    }
    let singular =
        (&Complex::from_real(harmonic) - &ln_minus_mu) * &mu_pow_m1.scale(&fact.recip_ref().complete(p));

    let mut val = singular;
    let mut mu_pow = Complex::from_real(ctx.real(1)); // mu^k / k!
    let target = (ctx.rel_tol() / 16u32).complete(p);
    let mut small_streak = 0u32;
    for k in 0..ctx.series_max_terms() {
        if k as u32 != m - 1 {
            let zv = zeta_int(ctx, m as i64 - k as i64)?;
            let term = mu_pow.scale(&zv);
            val = &val + &term;
            if k as u32 > m {
                if term.abs() < target {
                    small_streak += 1;
                    // zeta(-even) = 0 makes every other term vanish
                    if small_streak >= 3 {
                        break;
                    }
                } else {
                    small_streak = 0;
                }
            }
        }
        let kf = ctx.real(k as i32 + 1);
        mu_pow = (&mu_pow * &mu).scale(&kf.recip());
    }
    if conjugate {
        val = val.conj();
    }
    Ok(val)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(256).unwrap()
    }

    #[test]
    fn li2_at_one_is_zeta2() {
        let c = ctx();
        let v = polylog(&c, 2, &c.zero()).unwrap();
        let expect = c.pi().clone().square() / 6u32;
        assert!((v.re.clone() - expect).abs().to_f64() < 1e-70);
    }

    #[test]
    fn li3_at_minus_one() {
        let c = ctx();
        // Li_3(-1) = -(3/4) zeta(3)
        let v = polylog(&c, 3, c.pi()).unwrap();
        let z3 = zeta_oracle(&c, &Complex::from_real(c.real(3))).unwrap().re;
        let expect = z3 * Float::with_val(256, -0.75);
        assert!((v.re.clone() - expect).abs().to_f64() < 1e-70);
        assert!(v.im.to_f64().abs() < 1e-70);
    }

    #[test]
    fn li2_closed_form_real_part() {
        // Re Li_2(e^{i theta}) = pi^2/6 - pi theta/2 + theta^2/4 on [0, 2 pi]
        let c = ctx();
        for th in [0.5, 1.0, 2.5, 4.0] {
            let v = polylog(&c, 2, &c.real(th)).unwrap();
            let expect = std::f64::consts::PI.powi(2) / 6.0
                - std::f64::consts::PI * th / 2.0
                + th * th / 4.0;
            assert!((v.re.to_f64() - expect).abs() < 1e-14, "theta = {th}");
        }
    }

    #[test]
    fn li2_brute_force_series() {
        // direct series with an Abel tail bound as the independent oracle
        let c = ctx();
        let th = c.real(1);
        let v = polylog(&c, 2, &th).unwrap();
        let p = 256;
        let step = crate::complex::unit_phase(&th);
        let mut run = step.clone();
        let mut acc = Complex::zero(p);
        let kmax = 200_000u32;
        for k in 1..=kmax {
            let kk = Float::with_val(p, k).square().recip_ref().complete(p);
            acc = &acc + &run.scale(&kk);
            run = &run * &step;
        }
        // |tail| <= 2 / (|1 - e^{i}| K^2) + O(K^-3)
        let tail = 3.0 / ((1.0 - 1f64.cos()).hypot(1f64.sin()) * (kmax as f64).powi(2));
        let diff = (&v - &acc).abs().to_f64();
        assert!(diff < tail, "diff {diff} vs tail bound {tail}");
    }

    #[test]
    fn divergence_at_zero_for_li1() {
        let c = ctx();
        assert!(matches!(
            polylog(&c, 1, &c.zero()),
            Err(Error::Divergence(_))
        ));
        let v = polylog(&c, 1, &c.real(std::f64::consts::PI)).unwrap();
        // -ln(1 - (-1)) = -ln 2
        assert!((v.re.to_f64() + std::f64::consts::LN_2).abs() < 1e-30);
    }

    #[test]
    fn reflection_symmetry() {
        let c = ctx();
        for m in [2u32, 3, 4] {
            let v = polylog(&c, m, &c.real(2.2)).unwrap();
            let w = polylog(&c, m, &c.real(-2.2)).unwrap();
            let diff = (&v.conj() - &w).abs();
            assert!(diff.to_f64() < 1e-70, "m = {m}");
        }
    }
}
