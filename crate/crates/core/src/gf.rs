//! Small finite fields GF(p^k) with table-backed arithmetic.
//!
//! Elements are indices 0..q encoding polynomial coefficients in base p:
//! index c0 + c1*p + ... + c_{k-1}*p^{k-1} is the residue class of
//! c0 + c1*x + ... modulo a fixed irreducible polynomial. The irreducible
//! polynomial is the lexicographically least monic one, so the tables are
//! reproducible.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GfError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("field size {0} exceeds table limit")]
    TooLarge(u32),
}

const MAX_Q: u32 = 4096;

#[derive(Clone, Debug)]
pub struct Gf {
    p: u32,
    k: u32,
    q: u32,
    mul: Vec<u32>,
    inv: Vec<u32>,
    neg: Vec<u32>,
    // modulus coefficients c0..c_{k-1} of the monic irreducible
    modulus: Vec<u32>,
}

impl Gf {
    pub fn new(q: u32) -> Result<Gf, GfError> {
        if q > MAX_Q {
            return Err(GfError::TooLarge(q));
        }
        let (p, k) = prime_power_split(q).ok_or(GfError::NotPrimePower(q))?;
        let modulus = least_irreducible(p, k);
        let mut gf = Gf {
            p,
            k,
            q,
            mul: vec![0; (q * q) as usize],
            inv: vec![0; q as usize],
            neg: vec![0; q as usize],
            modulus,
        };
        for a in 0..q {
            gf.neg[a as usize] = gf.poly_neg(a);
            for b in a..q {
                let m = gf.poly_mul(a, b);
                gf.mul[(a * q + b) as usize] = m;
                gf.mul[(b * q + a) as usize] = m;
            }
        }
        for a in 1..q {
            for b in 1..q {
                if gf.mul[(a * q + b) as usize] == 1 {
                    gf.inv[a as usize] = b;
                    break;
                }
            }
            debug_assert_ne!(gf.inv[a as usize], 0);
        }
        Ok(gf)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        // digitwise mod p
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            out += ((a + b) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize]
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn invert(&self, a: u32) -> u32 {
        assert_ne!(a, 0, "inverse of zero");
        self.inv[a as usize]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        let mut base = a;
        let mut e = e;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The Frobenius a -> a^p.
    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.p as u64)
    }

    /// Residue of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> u32 {
        (n.rem_euclid(self.p as i64)) as u32
    }

    /// The class of the polynomial x (equals p as an index) when k > 1.
    pub fn x(&self) -> u32 {
        if self.k == 1 {
            1
        } else {
            self.p
        }
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    fn poly_neg(&self, a: u32) -> u32 {
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    fn poly_mul(&self, a: u32, b: u32) -> u32 {
        let da = digits(a, self.p, self.k);
        let db = digits(b, self.p, self.k);
        let mut prod = vec![0u32; (2 * self.k - 1) as usize];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // reduce x^k = -modulus (degree < k) repeatedly from the top
        for d in (self.k as usize..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (j, &m) in self.modulus.iter().enumerate() {
                let idx = d - self.k as usize + j;
                prod[idx] = (prod[idx] + c * (self.p - m) % self.p + self.p * self.p) % self.p;
            }
        }
        let mut out = 0;
        let mut place = 1;
        for &c in prod.iter().take(self.k as usize) {
            out += c * place;
            place *= self.p;
        }
        out
    }
}

fn digits(mut a: u32, p: u32, k: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(k as usize);
    for _ in 0..k {
        out.push(a % p);
        a /= p;
    }
    out
}

/// (p, k) with q = p^k and p prime, if q is a prime power.
pub fn prime_power_split(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 0;
    for d in 2..=q {
        if q.is_multiple_of(d) {
            p = d;
            break;
        }
    }
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    if rest == 1 {
        Some((p, k))
    } else {
        None
    }
}

// Lexicographically least monic irreducible of degree k over F_p,
// by coefficient tuple (c0, c1, ..., c_{k-1}).
fn least_irreducible(p: u32, k: u32) -> Vec<u32> {
    if k == 1 {
        return vec![0];
    }
    let total = (p as u64).pow(k);
    for code in 0..total {
        let coeffs = digits(code as u32, p, k);
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree");
}

// coeffs are c0..c_{k-1} of monic x^k + c_{k-1}x^{k-1} + ... + c0.
fn is_irreducible(coeffs: &[u32], p: u32) -> bool {
    let k = coeffs.len() as u32;
    // no roots rules out linear factors
    for r in 0..p {
        let mut v = 1u64; // leading coefficient
        for &c in coeffs.iter().rev() {
            v = (v * r as u64 + c as u64) % p as u64;
        }
        if v == 0 {
            return false;
        }
    }
    if k <= 3 {
        return true;
    }
    // trial division by monic polynomials of degree 2..k/2
    for d in 2..=k / 2 {
        let total = (p as u64).pow(d);
        for code in 0..total {
            let div = digits(code as u32, p, d);
            if divides(coeffs, &div, p) {
                return false;
            }
        }
    }
    true
}

// does monic poly with low coeffs `div` (degree d) divide monic poly with
// low coeffs `num` (degree k)?
fn divides(num: &[u32], div: &[u32], p: u32) -> bool {
    let k = num.len();
    let d = div.len();
    let mut rem: Vec<u32> = num.to_vec();
    rem.push(1); // make the monic leading coefficient explicit
    for top in (d..=k).rev() {
        let c = rem[top];
        if c == 0 {
            continue;
        }
        rem[top] = 0;
        for (j, &m) in div.iter().enumerate() {
            let idx = top - d + j;
            rem[idx] = (rem[idx] + (p - m) * c % p + p * p) % p;
        }
    }
    rem.iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f7 = Gf::new(7).unwrap();
        assert_eq!(f7.add(5, 4), 2);
        assert_eq!(f7.mul(3, 5), 1);
        assert_eq!(f7.invert(3), 5);
        assert_eq!(f7.neg(2), 5);
        assert_eq!(f7.from_int(-1), 6);
    }

    #[test]
    fn gf4_structure() {
        let f4 = Gf::new(4).unwrap();
        // x^2 + x + 1 is the least irreducible over F_2
        assert_eq!(f4.modulus(), &[1, 1]);
        let x = f4.x();
        assert_eq!(f4.mul(x, x), f4.add(x, 1)); // x^2 = x + 1
        assert_eq!(f4.pow(x, 3), 1);
        for a in 1..4 {
            assert_eq!(f4.mul(a, f4.invert(a)), 1);
        }
    }

    #[test]
    fn gf9_frobenius_is_an_involution() {
        let f9 = Gf::new(9).unwrap();
        for a in 0..9 {
            let c = f9.frobenius(a);
            assert_eq!(f9.frobenius(c), a);
            // a * a^3 is fixed by conjugation, hence in F_3
            let norm = f9.mul(a, c);
            assert!(norm < 3, "norm {} of {} not in prime field", norm, a);
        }
        // exactly one nontrivial field automorphism moves something
        assert!((0..9).any(|a| f9.frobenius(a) != a));
    }

    #[test]
    fn multiplicative_group_is_cyclic() {
        for q in [2u32, 3, 4, 5, 8, 9, 16, 25, 27, 31, 32] {
            let f = Gf::new(q).unwrap();
            let mut found = false;
            for a in 1..q {
                let mut seen = 0u64;
                let mut v = 1;
                loop {
                    seen += 1;
                    v = f.mul(v, a);
                    if v == 1 {
                        break;
                    }
                }
                if seen == (q - 1) as u64 {
                    found = true;
                    break;
                }
            }
            assert!(found, "no primitive element in GF({})", q);
        }
    }

    #[test]
    fn not_prime_power_rejected() {
        assert!(Gf::new(6).is_err());
        assert!(Gf::new(12).is_err());
        assert!(Gf::new(1).is_err());
    }

    #[test]
    fn addition_is_characteristic_p() {
        let f8 = Gf::new(8).unwrap();
        for a in 0..8 {
            assert_eq!(f8.add(a, a), 0);
        }
        let f27 = Gf::new(27).unwrap();
        for a in 0..27 {
            assert_eq!(f27.add(f27.add(a, a), a), 0);
        }
    }
}
