//! Compensated (Neumaier) accumulation and deterministic parallel reduction.
//!
//! Parallel sums are split into fixed-size chunks independent of the worker
//! count; chunks are reduced in index order, so results are bit-identical
//! across thread counts.

use rayon::prelude::*;
use rug::ops::CompleteRound;
use rug::Float;

use crate::complex::Complex;

/// Neumaier-compensated real accumulator.
#[derive(Debug, Clone)]
pub struct KahanReal {
    sum: Float,
    comp: Float,
}

impl KahanReal {
    pub fn new(prec: u32) -> Self {
        Self {
            sum: Float::new(prec),
            comp: Float::new(prec),
        }
    }

    pub fn add(&mut self, v: &Float) {
        let p = self.sum.prec();
        let t = (&self.sum + v).complete(p);
        if self.sum.clone().abs() >= v.clone().abs() {
            let lost = (&self.sum - &t).complete(p) + v;
            self.comp += lost;
        } else {
            let lost = (v - &t).complete(p) + &self.sum;
            self.comp += lost;
        }
        self.sum = t;
    }

    pub fn value(&self) -> Float {
        (&self.sum + &self.comp).complete(self.sum.prec())
    }
}

/// Compensated complex accumulator that also tracks the term count and the
/// largest |term|, for the conservative roundoff bound
/// `count * 2^-prec * max|term|`.
#[derive(Debug, Clone)]
pub struct KahanComplex {
    re: KahanReal,
    im: KahanReal,
    count: u64,
    max_abs: Float,
}

impl KahanComplex {
    pub fn new(prec: u32) -> Self {
        Self {
            re: KahanReal::new(prec),
            im: KahanReal::new(prec),
            count: 0,
            max_abs: Float::new(prec),
        }
    }

    pub fn add(&mut self, z: &Complex) {
        self.re.add(&z.re);
        self.im.add(&z.im);
        self.count += 1;
        let a = z.abs();
        if a > self.max_abs {
            self.max_abs = a;
        }
    }

    /// Merge another accumulator (ordered, for chunked reduction).
    pub fn merge(&mut self, other: &KahanComplex) {
        self.re.add(&other.re.sum);
        self.re.add(&other.re.comp);
        self.im.add(&other.im.sum);
        self.im.add(&other.im.comp);
        self.count += other.count;
        if other.max_abs > self.max_abs {
            self.max_abs = other.max_abs.clone();
        }
    }

    pub fn value(&self) -> Complex {
        Complex::new(self.re.value(), self.im.value())
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn max_abs(&self) -> &Float {
        &self.max_abs
    }

    /// `count * 2^-prec * max|term|`.
    pub fn error_bound(&self) -> Float {
        let p = self.re.sum.prec();
        let mut b = Float::with_val(p, 1);
        b >>= p;
        b * &self.max_abs * Float::with_val(p, self.count)
    }
}

/// Deterministic parallel map-reduce over an index range.
///
/// The range is cut into fixed `chunk` blocks; each block is accumulated
/// sequentially by `per_item`, blocks run in parallel, and the block results
/// merge in index order.
pub fn par_sum_indexed<F>(prec: u32, lo: u64, hi: u64, chunk: u64, per_item: F) -> KahanComplex
where
    F: Fn(u64, &mut KahanComplex) + Sync,
{
    if lo >= hi {
        return KahanComplex::new(prec);
    }
    let nchunks = (hi - lo).div_ceil(chunk);
    let partials: Vec<KahanComplex> = (0..nchunks)
        .into_par_iter()
        .map(|ci| {
            let a = lo + ci * chunk;
            let b = (a + chunk).min(hi);
            let mut acc = KahanComplex::new(prec);
            for i in a..b {
                per_item(i, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = KahanComplex::new(prec);
    for p in &partials {
        total.merge(p);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensation_beats_naive() {
        let prec = 64u32;
        let mut k = KahanReal::new(prec);
        let big = Float::with_val(prec, 1e18);
        let tiny = Float::with_val(prec, 1);
        k.add(&big);
        for _ in 0..1000 {
            k.add(&tiny);
        }
        k.add(&(-big.clone()));
        assert_eq!(k.value().to_f64(), 1000.0);
    }

    #[test]
    fn par_sum_deterministic() {
        let f = |i: u64, acc: &mut KahanComplex| {
            let v = Complex::with_val(128, (i as f64).sin(), (i as f64).cos());
            acc.add(&v);
        };
        let a = par_sum_indexed(128, 0, 10_000, 64, f).value();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let b = pool.install(|| par_sum_indexed(128, 0, 10_000, 64, f).value());
        assert_eq!(a, b);
    }
}
