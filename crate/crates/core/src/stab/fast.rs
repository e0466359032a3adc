//! Dense mod-p arithmetic on `Γⁿ(F_p^d)` for the brute-force scans.
//!
//! A composition `c` is keyed by `Σ c_i (n+1)^i`; since every part is at most
//! `n`, adding compositions is adding keys.

use crate::gamma::GammaElement;
use crate::multiindex::compositions;

/// Terms of a homogeneous element: keys, digits (row-major, `d` per term),
/// coefficients in `[0, p)`.
#[derive(Clone, Debug, Default)]
pub(crate) struct Sparse {
    keys: Vec<usize>,
    digits: Vec<u32>,
    coeffs: Vec<u64>,
}

impl Sparse {
    fn len(&self) -> usize {
        self.keys.len()
    }
}

pub(crate) struct FpGamma {
    p: u64,
    d: usize,
    n: u32,
    radix: usize,
    pows: Vec<usize>,
    /// `C(a+b, a) mod p` at `a * radix + b`.
    binom: Vec<u64>,
    buf: Vec<u64>,
    touched: Vec<usize>,
}

/// Dense tables beyond this many entries are not worth it.
pub(crate) const DENSE_LIMIT: usize = 1 << 24;

impl FpGamma {
    pub(crate) fn new(p: u64, d: usize, n: u32) -> Option<Self> {
        let radix = n as usize + 1;
        let mut size = 1usize;
        let mut pows = Vec::with_capacity(d);
        for _ in 0..d {
            pows.push(size);
            size = size.checked_mul(radix)?;
        }
        if size > DENSE_LIMIT {
            return None;
        }
        // Pascal's triangle mod p.
        let mut binom = vec![0u64; radix * radix];
        for a in 0..radix {
            for b in 0..radix - a {
                binom[a * radix + b] = if a == 0 || b == 0 {
                    1 % p
                } else {
                    (binom[(a - 1) * radix + b] + binom[a * radix + b - 1]) % p
                };
            }
        }
        Some(FpGamma { p, d, n, radix, pows, binom, buf: vec![0; size], touched: Vec::new() })
    }

    pub(crate) fn size(&self) -> usize {
        self.buf.len()
    }

    fn key_of(&self, digits: &[u32]) -> usize {
        digits.iter().zip(&self.pows).map(|(&c, &w)| c as usize * w).sum()
    }

    fn push(&self, s: &mut Sparse, digits: &[u32], coeff: u64) {
        s.keys.push(self.key_of(digits));
        s.digits.extend_from_slice(digits);
        s.coeffs.push(coeff);
    }

    pub(crate) fn unit(&self) -> Sparse {
        let mut s = Sparse::default();
        self.push(&mut s, &vec![0; self.d], 1 % self.p);
        s
    }

    pub(crate) fn from_element(&self, x: &GammaElement) -> Sparse {
        let mut s = Sparse::default();
        for (c, v) in x.terms() {
            self.push(&mut s, c.parts(), v.residue().expect("prime field"));
        }
        s
    }

    /// `[v]_k` for a vector with entries in `[0, p)`.
    pub(crate) fn pure(&self, v: &[u64], k: u32) -> Sparse {
        let p = self.p;
        let support: Vec<usize> = (0..self.d).filter(|&i| v[i] != 0).collect();
        let mut s = Sparse::default();
        if support.is_empty() {
            if k == 0 {
                return self.unit();
            }
            return s;
        }
        let powers: Vec<Vec<u64>> = support
            .iter()
            .map(|&i| {
                let mut row = vec![1 % p; k as usize + 1];
                for e in 1..=k as usize {
                    row[e] = row[e - 1] * v[i] % p;
                }
                row
            })
            .collect();
        let mut digits = vec![0u32; self.d];
        for sub in compositions(k, support.len()) {
            let mut coeff = 1 % p;
            for (slot, (&i, &e)) in support.iter().zip(sub.parts()).enumerate() {
                digits[i] = e;
                coeff = coeff * powers[slot][e as usize] % p;
            }
            if coeff != 0 {
                self.push(&mut s, &digits, coeff);
            }
        }
        s
    }

    /// Adds `scale · a · b` into the dense buffer.
    fn mul_acc(&mut self, a: &Sparse, b: &Sparse, scale: u64) {
        let (p, d, radix) = (self.p, self.d, self.radix);
        for ia in 0..a.len() {
            let ca = a.coeffs[ia] * scale % p;
            if ca == 0 {
                continue;
            }
            let da = &a.digits[ia * d..(ia + 1) * d];
            for ib in 0..b.len() {
                let db = &b.digits[ib * d..(ib + 1) * d];
                let mut f = ca * b.coeffs[ib] % p;
                for i in 0..d {
                    if f == 0 {
                        break;
                    }
                    f = f * self.binom[da[i] as usize * radix + db[i] as usize] % p;
                }
                if f == 0 {
                    continue;
                }
                let key = a.keys[ia] + b.keys[ib];
                let slot = &mut self.buf[key];
                if *slot == 0 {
                    self.touched.push(key);
                }
                // A slot can return to zero and be touched twice; collection
                // below deduplicates by clearing.
                *slot = (*slot + f) % p;
            }
        }
    }

    fn collect(&mut self) -> Sparse {
        let mut s = Sparse::default();
        let touched = std::mem::take(&mut self.touched);
        for &key in &touched {
            let v = std::mem::replace(&mut self.buf[key], 0);
            if v != 0 {
                s.keys.push(key);
                let mut rest = key;
                for _ in 0..self.d {
                    s.digits.push((rest % self.radix) as u32);
                    rest /= self.radix;
                }
                s.coeffs.push(v);
            }
        }
        self.touched = touched;
        self.touched.clear();
        s
    }

    pub(crate) fn mul(&mut self, a: &Sparse, b: &Sparse) -> Sparse {
        self.mul_acc(a, b, 1);
        self.collect()
    }

    /// Dense coefficients of `g · x`, where `columns[i] = g e_i`. The
    /// buffer is left in the returned vector's place and must be handed back
    /// through [`FpGamma::release`].
    pub(crate) fn act(&mut self, columns: &[Vec<u64>], x: &Sparse) -> Vec<u64> {
        debug_assert!(self.touched.is_empty());
        // Pure symbols [g e_i]_k for every k that occurs in coordinate i.
        let mut pure: Vec<Vec<Option<Sparse>>> = vec![vec![None; self.n as usize + 1]; self.d];
        for t in 0..x.len() {
            for i in 0..self.d {
                let k = x.digits[t * self.d + i] as usize;
                if pure[i][k].is_none() {
                    pure[i][k] = Some(self.pure(&columns[i], k as u32));
                }
            }
        }
        let mut order: Vec<usize> = (0..x.len()).collect();
        order.sort_by(|&s, &t| x.digits[s * self.d..(s + 1) * self.d].cmp(&x.digits[t * self.d..(t + 1) * self.d]));
        let mut out = vec![0u64; self.size()];
        let unit = self.unit();
        self.descend(0, &unit, &order, x, &pure, &mut out);
        out
    }

    fn descend(
        &mut self,
        depth: usize,
        prefix: &Sparse,
        group: &[usize],
        x: &Sparse,
        pure: &[Vec<Option<Sparse>>],
        out: &mut Vec<u64>,
    ) {
        let d = self.d;
        if depth + 1 == d {
            // The last coordinate is forced by the degree, so the group is a
            // single term.
            for &t in group {
                let k = x.digits[t * d + depth] as usize;
                let last = pure[depth][k].as_ref().expect("cached");
                // Accumulate straight into `out`.
                std::mem::swap(&mut self.buf, out);
                self.mul_acc(prefix, last, x.coeffs[t]);
                self.touched.clear();
                std::mem::swap(&mut self.buf, out);
            }
            return;
        }
        let mut start = 0;
        while start < group.len() {
            let k = x.digits[group[start] * d + depth];
            let end = start + group[start..].iter().take_while(|&&t| x.digits[t * d + depth] == k).count();
            let factor = pure[depth][k as usize].as_ref().expect("cached");
            let next = if k == 0 { prefix.clone() } else { self.mul(prefix, factor) };
            if next.len() > 0 {
                self.descend(depth + 1, &next, &group[start..end], x, pure, out);
            }
            start = end;
        }
    }

    /// `Some(λ)` when `dense = λ · x`, `λ ≠ 0`.
    pub(crate) fn proportional(&self, x: &Sparse, dense: &[u64]) -> Option<u64> {
        let p = self.p;
        let pivot = (0..x.len()).find(|&t| x.coeffs[t] != 0)?;
        let y0 = dense[x.keys[pivot]];
        if y0 == 0 {
            return None;
        }
        let lambda = y0 * crate::scalars::pow_mod(x.coeffs[pivot], p - 2, p) % p;
        for t in 0..x.len() {
            if dense[x.keys[t]] != lambda * x.coeffs[t] % p {
                return None;
            }
        }
        // No support outside that of x.
        let nonzero = dense.iter().filter(|&&v| v != 0).count();
        let expected = x.coeffs.iter().filter(|&&v| v != 0).count();
        (nonzero == expected).then_some(lambda)
    }
}

/// Determinant test over `F_p` by elimination on a copy.
pub(crate) fn invertible_mod_p(m: &[u64], d: usize, p: u64) -> bool {
    let mut a = m.to_vec();
    for col in 0..d {
        let Some(piv) = (col..d).find(|&r| a[r * d + col] != 0) else {
            return false;
        };
        if piv != col {
            for c in 0..d {
                a.swap(piv * d + c, col * d + c);
            }
        }
        let inv = crate::scalars::pow_mod(a[col * d + col], p - 2, p);
        for r in col + 1..d {
            let f = a[r * d + col] * inv % p;
            if f == 0 {
                continue;
            }
            for c in col..d {
                a[r * d + c] = (a[r * d + c] + (p - f) * a[col * d + c]) % p;
            }
        }
    }
    true
}
