//! Word-level sumset kernels over packed membership arrays.
//!
//! Two strategies compute the support of the convolution `A + B` truncated to
//! `[0, N]`: shift-or (one shifted OR of the denser operand per element of the
//! sparser one) and an exact number-theoretic transform. The NTT counts
//! representations modulo a prime larger than any possible count, so a
//! nonzero residue is exactly a nonzero count.

pub const WORD_BITS: usize = u64::BITS as usize;

const PRIME: u64 = 998_244_353;
const GENERATOR: u64 = 3;
/// `PRIME − 1 = 119 · 2^23`.
const MAX_LOG_LEN: u32 = 23;

pub fn words_for(horizon: u64) -> usize {
    horizon as usize / WORD_BITS + 1
}

/// Clears the bits above `horizon` in the last word.
pub fn mask_tail(words: &mut [u64], horizon: u64) {
    let used = horizon as usize % WORD_BITS + 1;
    if let Some(last) = words.last_mut() {
        if used < WORD_BITS {
            *last &= (1u64 << used) - 1;
        }
    }
}

/// `dst |= src << shift`, bitwise over the whole array, dropping overflow.
pub fn or_shifted(dst: &mut [u64], src: &[u64], shift: usize) {
    let word_shift = shift / WORD_BITS;
    let bit_shift = shift % WORD_BITS;
    if word_shift >= dst.len() {
        return;
    }
    let end = dst.len().min(src.len() + word_shift + 1);
    for (k, out) in dst[word_shift..end].iter_mut().enumerate() {
        let mut v = if k < src.len() {
            src[k] << bit_shift
        } else {
            0
        };
        if bit_shift > 0 && k > 0 && k - 1 < src.len() {
            v |= src[k - 1] >> (WORD_BITS - bit_shift);
        }
        *out |= v;
    }
}

pub fn iter_bits(words: &[u64]) -> impl Iterator<Item = u64> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let base = (i * WORD_BITS) as u64;
        let mut rest = w;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let tz = rest.trailing_zeros() as u64;
            rest &= rest - 1;
            Some(base + tz)
        })
    })
}

fn popcount(words: &[u64]) -> u64 {
    words.iter().map(|w| w.count_ones() as u64).sum()
}

/// Support of `a + b` on `[0, horizon]`; both inputs must already be
/// truncated to `words_for(horizon)` words.
pub fn convolve_support(a: &[u64], b: &[u64], horizon: u64) -> Vec<u64> {
    let len = words_for(horizon);
    debug_assert!(a.len() == len && b.len() == len);
    let (ca, cb) = (popcount(a), popcount(b));
    let (sparse, dense, sparse_count) = if ca <= cb { (a, b, ca) } else { (b, a, cb) };
    let shift_cost = sparse_count as f64 * len as f64;
    let ntt_cost = ntt_length(horizon)
        .map(|l| 12.0 * l as f64 * (l.trailing_zeros() as f64))
        .unwrap_or(f64::INFINITY);
    if shift_cost <= ntt_cost {
        shift_or_support(sparse, dense, horizon)
    } else {
        ntt_support(a, b, horizon)
    }
}

pub fn shift_or_support(sparse: &[u64], dense: &[u64], horizon: u64) -> Vec<u64> {
    let mut out = vec![0u64; words_for(horizon)];
    for e in iter_bits(sparse) {
        if e > horizon {
            break;
        }
        or_shifted(&mut out, dense, e as usize);
    }
    mask_tail(&mut out, horizon);
    out
}

/// Transform length that keeps every sum `≤ 2·horizon` free of wraparound.
fn ntt_length(horizon: u64) -> Option<usize> {
    let need = (2 * horizon + 1).next_power_of_two();
    (need.trailing_zeros() <= MAX_LOG_LEN).then_some(need as usize)
}

pub fn ntt_support(a: &[u64], b: &[u64], horizon: u64) -> Vec<u64> {
    let Some(len) = ntt_length(horizon) else {
        return shift_or_support(a, b, horizon);
    };
    let expand = |words: &[u64]| {
        let mut v = vec![0u64; len];
        for e in iter_bits(words).take_while(|&e| e <= horizon) {
            v[e as usize] = 1;
        }
        v
    };
    let mut fa = expand(a);
    let mut fb = expand(b);
    ntt(&mut fa, false);
    ntt(&mut fb, false);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = *x * y % PRIME;
    }
    ntt(&mut fa, true);
    let mut out = vec![0u64; words_for(horizon)];
    for (x, &c) in fa.iter().enumerate().take(horizon as usize + 1) {
        if c != 0 {
            out[x / WORD_BITS] |= 1 << (x % WORD_BITS);
        }
    }
    out
}

fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    base %= PRIME;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % PRIME;
        }
        base = base * base % PRIME;
        exp >>= 1;
    }
    acc
}

/// In-place iterative radix-2 transform; `values.len()` is a power of two.
/// The inverse includes the `1/len` normalization.
fn ntt(values: &mut [u64], inverse: bool) {
    let n = values.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            values.swap(i, j);
        }
    }
    let mut twiddles = Vec::with_capacity(n / 2);
    let mut len = 2;
    while len <= n {
        let mut root = pow_mod(GENERATOR, (PRIME - 1) / len as u64);
        if inverse {
            root = pow_mod(root, PRIME - 2);
        }
        let half = len / 2;
        twiddles.clear();
        let mut w = 1u64;
        for _ in 0..half {
            twiddles.push(w);
            w = w * root % PRIME;
        }
        for chunk in values.chunks_exact_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for ((x, y), &t) in lo.iter_mut().zip(hi.iter_mut()).zip(&twiddles) {
                let u = *x;
                let v = *y * t % PRIME;
                *x = if u + v >= PRIME { u + v - PRIME } else { u + v };
                *y = if u >= v { u - v } else { u + PRIME - v };
            }
        }
        len <<= 1;
    }
    if inverse {
        let inv_n = pow_mod(n as u64, PRIME - 2);
        for x in values.iter_mut() {
            *x = *x * inv_n % PRIME;
        }
    }
}
