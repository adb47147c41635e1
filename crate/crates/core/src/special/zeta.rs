//! Reference ζ(s): Euler-Maclaurin with an adaptively chosen cutoff so the
//! proven remainder sits below rel_tol/10. Ground truth for every expansion
//! check; deliberately ignorant of the asymptotic formulas it validates.

use rug::ops::CompleteRound;
use rug::Float;

use crate::complex::{real_pow_complex, Complex};
use crate::context::PrecisionContext;
use crate::error::{Error, Result};
use crate::kahan::KahanComplex;

/// ζ(s) for s != 1.
pub fn zeta_oracle(ctx: &PrecisionContext, s: &Complex) -> Result<Complex> {
    if !s.is_finite() {
        return Err(Error::Domain("zeta of non-finite argument".into()));
    }
    if s.im.is_zero() && s.re == 1 {
        return Err(Error::Pole("zeta pole at s = 1".into()));
    }
    let p = ctx.bits();
    let sigma = s.re.to_f64();
    let abs_t = s.im.to_f64().abs();

    let mut n_cut = ((abs_t + 20.0) * 0.55).ceil().max(16.0) as u64;
    let target = (ctx.rel_tol() / 10u32).complete(p);
    let kmax = ctx.series_max_terms().min(3 * p as usize + 64);
    let minus_s = -s;

    'outer: for _attempt in 0..8 {
        // main Dirichlet block: sum_{n<N} n^{-s} + N^{-s}/2 + N^{1-s}/(s-1)
        let mut acc = KahanComplex::new(p);
        for n in 1..n_cut {
            acc.add(&real_pow_complex(&ctx.real(n), &minus_s));
        }
        let nf = ctx.real(n_cut);
        let n_pow = real_pow_complex(&nf, &minus_s); // N^{-s}
        acc.add(&n_pow.scale(&ctx.real(0.5)));
        let s_minus_1 = s - &Complex::from_real(ctx.real(1));
        let tail_main = &n_pow.scale(&nf) / &s_minus_1; // N^{1-s}/(s-1)
        acc.add(&tail_main);

        // correction terms T_k = B_{2k}/(2k)! (s)_{2k-1} N^{-s-2k+1}
        let inv_n2 = (Float::with_val(p, &nf * &nf)).recip();
        let mut poch = s.clone(); // (s)_{1}
        let mut npow = n_pow.scale(&nf.clone().recip()); // N^{-s-1}
        let mut value_scale = acc.value().abs();
        if value_scale < 1 {
            value_scale = ctx.real(1);
        }
        for k in 1..=kmax {
            let coeff = ctx.bernoulli_over_factorial(2 * k);
            let term = (&npow * &poch).scale(&coeff);
            acc.add(&term);

            // advance to k+1 and bound the remainder by the next term
            let two_k = 2 * k as i64;
            let f1 = (&s.re + Float::with_val(p, two_k - 1)).complete(p);
            let next_poch_a = Complex::new(f1, s.im.clone());
            let f2 = (&s.re + Float::with_val(p, two_k)).complete(p);
            let next_poch_b = Complex::new(f2, s.im.clone());
            poch = &(&poch * &next_poch_a) * &next_poch_b;
            npow = npow.scale(&inv_n2);
            let next_coeff = ctx.bernoulli_over_factorial(2 * k + 2).abs();
            let next_term_abs = next_coeff * npow.abs() * poch.abs();
            // |R_K| <= |T_{K+1}| |s + 2K + 1| / (sigma + 2K + 1)
            let frac = (sigma.abs() + abs_t + (two_k + 1) as f64) / (sigma + (two_k + 1) as f64);
            let bound = next_term_abs * Float::with_val(p, frac.abs());
            if bound < (Float::with_val(p, &target * &value_scale)) {
                return Ok(acc.value());
            }
            // divergence of the asymptotic series: enlarge N and restart
            if k > 8 && (2 * k) as f64 > 1.8 * std::f64::consts::PI * n_cut as f64 {
                n_cut *= 2;
                continue 'outer;
            }
        }
        n_cut *= 2;
    }
    Err(Error::Convergence(format!(
        "euler-maclaurin tail failed to reach tolerance for s = {s}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(256).unwrap()
    }

    #[test]
    fn zeta_two_is_pi2_over_6() {
        let c = ctx();
        let v = zeta_oracle(&c, &Complex::from_real(c.real(2))).unwrap();
        let expect = c.pi().clone().square() / 6u32;
        assert!((v.re.clone() - expect).abs() < *c.rel_tol());
        assert!(v.im.clone().abs() < *c.rel_tol());
    }

    #[test]
    fn zeta_zero_is_minus_half() {
        let c = ctx();
        let v = zeta_oracle(&c, &Complex::zero(256)).unwrap();
        assert!((v.re.to_f64() + 0.5).abs() < 1e-35);
    }

    #[test]
    fn zeta_pole() {
        let c = ctx();
        assert!(matches!(
            zeta_oracle(&c, &Complex::with_val(256, 1.0, 0.0)),
            Err(Error::Pole(_))
        ));
    }

    #[test]
    fn zeta_matches_known_f64_values() {
        // |zeta(1/2 + 14.134725...i)| is nearly zero at the first zero
        let c = ctx();
        let z = zeta_oracle(&c, &Complex::with_val(256, 0.5, 14.134725141734693790))
            .unwrap();
        assert!(z.abs().to_f64() < 1e-9);
        // zeta(3) = 1.2020569...
        let v = zeta_oracle(&c, &Complex::from_real(c.real(3))).unwrap();
        assert!((v.re.to_f64() - 1.2020569031595942854).abs() < 1e-15);
    }
}
