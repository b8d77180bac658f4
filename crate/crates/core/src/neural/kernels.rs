//! Row-oriented matrix products.
//!
//! Activations are mostly exact zeros (one-hot input images, relu outputs),
//! so the products walk rows and skip zero multipliers. Inner loops run over
//! one contiguous output row. On x86-64 the same loops are also compiled
//! with AVX2 enabled and picked at runtime; the arithmetic is identical.

use crate::scalar::Real;

const STRIP: usize = 32;

#[inline(always)]
fn rows_times_impl<R: Real>(x: &[R], k: usize, w: &[R], n: usize, out: &mut [R]) {
    let full = n - n % STRIP;
    for (xr, or) in x.chunks_exact(k).zip(out.chunks_exact_mut(n)) {
        for c in (0..full).step_by(STRIP) {
            let mut acc: [R; STRIP] = or[c..c + STRIP].try_into().expect("strip");
            for (i, &a) in xr.iter().enumerate() {
                if a != R::zero() {
                    let wr: &[R; STRIP] = w[i * n + c..i * n + c + STRIP].try_into().expect("strip");
                    for j in 0..STRIP {
                        acc[j] += a * wr[j];
                    }
                }
            }
            or[c..c + STRIP].copy_from_slice(&acc);
        }
        if full < n {
            for (i, &a) in xr.iter().enumerate() {
                if a != R::zero() {
                    for (o, &wv) in or[full..].iter_mut().zip(&w[i * n + full..(i + 1) * n]) {
                        *o += a * wv;
                    }
                }
            }
        }
    }
}

/// Fixed-width variant for narrow outputs (convolution filter counts); the
/// accumulator row stays in registers.
#[inline(always)]
fn rows_times_fixed<R: Real, const N: usize>(x: &[R], k: usize, w: &[R], out: &mut [R]) {
    for (xr, or) in x.chunks_exact(k).zip(out.chunks_exact_mut(N)) {
        let mut acc: [R; N] = or.try_into().expect("row of width N");
        for (&a, wr) in xr.iter().zip(w.chunks_exact(N)) {
            if a != R::zero() {
                let wr: &[R; N] = wr.try_into().expect("row of width N");
                for j in 0..N {
                    acc[j] += a * wr[j];
                }
            }
        }
        or.copy_from_slice(&acc);
    }
}

#[inline(always)]
fn rows_times_any<R: Real>(x: &[R], k: usize, w: &[R], n: usize, out: &mut [R]) {
    match n {
        8 => rows_times_fixed::<R, 8>(x, k, w, out),
        16 => rows_times_fixed::<R, 16>(x, k, w, out),
        _ => rows_times_impl(x, k, w, n, out),
    }
}

#[inline(always)]
fn outer_sum_fixed<R: Real, const N: usize>(x: &[R], k: usize, d: &[R], g: &mut [R]) {
    g.iter_mut().for_each(|v| *v = R::zero());
    for (xr, dr) in x.chunks_exact(k).zip(d.chunks_exact(N)) {
        let dr: &[R; N] = dr.try_into().expect("row of width N");
        for (&a, gr) in xr.iter().zip(g.chunks_exact_mut(N)) {
            if a != R::zero() {
                for j in 0..N {
                    gr[j] += a * dr[j];
                }
            }
        }
    }
}

#[inline(always)]
fn outer_sum_any<R: Real>(x: &[R], k: usize, d: &[R], n: usize, g: &mut [R]) {
    match n {
        8 => outer_sum_fixed::<R, 8>(x, k, d, g),
        16 => outer_sum_fixed::<R, 16>(x, k, d, g),
        _ => outer_sum_impl(x, k, d, n, g),
    }
}

#[inline(always)]
fn outer_sum_impl<R: Real>(x: &[R], k: usize, d: &[R], n: usize, g: &mut [R]) {
    g.iter_mut().for_each(|v| *v = R::zero());
    if k * n <= 8192 {
        // small g stays cache resident; stream the rows once
        for (xr, dr) in x.chunks_exact(k).zip(d.chunks_exact(n)) {
            for (&a, gr) in xr.iter().zip(g.chunks_exact_mut(n)) {
                if a != R::zero() {
                    for (o, &dv) in gr.iter_mut().zip(dr) {
                        *o += a * dv;
                    }
                }
            }
        }
    } else {
        // large g: finish each output strip in registers, write it once
        let rows = x.len() / k;
        let full = n - n % STRIP;
        for (i, gr) in g.chunks_exact_mut(n).enumerate() {
            for c in (0..full).step_by(STRIP) {
                let mut acc = [R::zero(); STRIP];
                for r in 0..rows {
                    let a = x[r * k + i];
                    if a != R::zero() {
                        let dr: &[R; STRIP] = d[r * n + c..r * n + c + STRIP].try_into().expect("strip");
                        for j in 0..STRIP {
                            acc[j] += a * dr[j];
                        }
                    }
                }
                gr[c..c + STRIP].copy_from_slice(&acc);
            }
            for r in 0..rows {
                let a = x[r * k + i];
                if a != R::zero() {
                    for (o, &dv) in gr[full..].iter_mut().zip(&d[r * n + full..(r + 1) * n]) {
                        *o += a * dv;
                    }
                }
            }
        }
    }
}

/// `out[r, i] = sum_j d[r, j] * w[i, j]`, i.e. `d w^T`, overwriting `out`.
///
/// Dot product with 32 interleaved partial sums, combined in a fixed order
/// so the result does not depend on the vector width the compiler picks.
#[inline(always)]
fn dot32<R: Real>(a: &[R], b: &[R]) -> R {
    let mut lanes = [R::zero(); 32];
    let split = a.len() - a.len() % 32;
    for (ac, bc) in a[..split].chunks_exact(32).zip(b[..split].chunks_exact(32)) {
        for j in 0..32 {
            lanes[j] += ac[j] * bc[j];
        }
    }
    let mut width = 16;
    while width > 0 {
        for j in 0..width {
            lanes[j] += lanes[j + width];
        }
        width /= 2;
    }
    let mut sum = lanes[0];
    for (&x, &y) in a[split..].iter().zip(&b[split..]) {
        sum += x * y;
    }
    sum
}

#[inline(always)]
fn rows_dot_impl<R: Real>(d: &[R], n: usize, w: &[R], out: &mut [R]) {
    let k = w.len() / n;
    if w.len() <= 8192 {
        // small weights: transpose once and reuse the strip kernel
        let mut wt = vec![R::zero(); w.len()];
        for i in 0..k {
            for j in 0..n {
                wt[j * k + i] = w[i * n + j];
            }
        }
        out.iter_mut().for_each(|o| *o = R::zero());
        return rows_times_any(d, n, &wt, k, out);
    }
    let rows = d.len() / n;
    let live: Vec<bool> = d.chunks_exact(n).map(|dr| dr.iter().any(|&v| v != R::zero())).collect();
    // each weight row is read once while the batch rows stay cached
    for (i, wr) in w.chunks_exact(n).enumerate() {
        for r in 0..rows {
            out[r * k + i] = if live[r] { dot32(&d[r * n..(r + 1) * n], wr) } else { R::zero() };
        }
    }
}

#[cfg(target_arch = "x86_64")]
mod avx {
    use super::*;

    #[target_feature(enable = "avx2")]
    pub(super) unsafe fn rows_times<R: Real>(x: &[R], k: usize, w: &[R], n: usize, out: &mut [R]) {
        rows_times_any(x, k, w, n, out)
    }

    #[target_feature(enable = "avx2")]
    pub(super) unsafe fn outer_sum<R: Real>(x: &[R], k: usize, d: &[R], n: usize, g: &mut [R]) {
        outer_sum_any(x, k, d, n, g)
    }

    #[target_feature(enable = "avx2")]
    pub(super) unsafe fn rows_dot<R: Real>(d: &[R], n: usize, w: &[R], out: &mut [R]) {
        rows_dot_impl(d, n, w, out)
    }

    pub(super) fn available() -> bool {
        std::arch::is_x86_feature_detected!("avx2")
    }
}

/// `out[r, :] += sum_i x[r, i] * w[i, :]` for `x` of width `k`, `w` of width `n`.
pub(crate) fn rows_times<R: Real>(x: &[R], k: usize, w: &[R], n: usize, out: &mut [R]) {
    debug_assert_eq!(w.len(), k * n);
    debug_assert_eq!(x.len() / k, out.len() / n);
    #[cfg(target_arch = "x86_64")]
    if avx::available() {
        // SAFETY: the CPU supports AVX2, checked just above.
        return unsafe { avx::rows_times(x, k, w, n, out) };
    }
    rows_times_any(x, k, w, n, out)
}

/// `g = x^T d`, overwriting `g` (`k x n`).
pub(crate) fn outer_sum<R: Real>(x: &[R], k: usize, d: &[R], n: usize, g: &mut [R]) {
    debug_assert_eq!(g.len(), k * n);
    #[cfg(target_arch = "x86_64")]
    if avx::available() {
        // SAFETY: the CPU supports AVX2, checked just above.
        return unsafe { avx::outer_sum(x, k, d, n, g) };
    }
    outer_sum_any(x, k, d, n, g)
}

/// `out = d w^T` for `d` of width `n` and `w` of shape `k x n`.
pub(crate) fn rows_dot<R: Real>(d: &[R], n: usize, w: &[R], out: &mut [R]) {
    debug_assert_eq!(w.len() % n, 0);
    #[cfg(target_arch = "x86_64")]
    if avx::available() {
        // SAFETY: the CPU supports AVX2, checked just above.
        return unsafe { avx::rows_dot(d, n, w, out) };
    }
    rows_dot_impl(d, n, w, out)
}
