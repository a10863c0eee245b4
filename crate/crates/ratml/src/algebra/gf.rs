//! Finite fields GF(2^m), 2 <= m <= 16, with log/antilog tables.

use super::bits::BitVector;
use super::AlgebraError;

/// One default primitive polynomial per supported degree, bit `i` holding the
/// coefficient of `x^i`.
const DEFAULT_POLYS: [u32; 15] = [
    0b111,     // m = 2:  x^2 + x + 1
    0b1011,    // m = 3:  x^3 + x + 1
    0x13,      // m = 4:  x^4 + x + 1
    0x25,      // m = 5:  x^5 + x^2 + 1
    0x43,      // m = 6:  x^6 + x + 1
    0x89,      // m = 7:  x^7 + x^3 + 1
    0x11d,     // m = 8:  x^8 + x^4 + x^3 + x^2 + 1
    0x211,     // m = 9:  x^9 + x^4 + 1
    0x409,     // m = 10: x^10 + x^3 + 1
    0x805,     // m = 11: x^11 + x^2 + 1
    0x1053,    // m = 12: x^12 + x^6 + x^4 + x + 1
    0x201b,    // m = 13: x^13 + x^4 + x^3 + x + 1
    0x4443,    // m = 14: x^14 + x^10 + x^6 + x + 1
    0x8003,    // m = 15: x^15 + x + 1
    0x1100b,   // m = 16: x^16 + x^12 + x^3 + x + 1
];

/// GF(2^m) represented through powers of the primitive element `alpha = x`.
/// Elements are plain `u16` values below `2^m`; addition is xor.
pub struct GfField {
    m: u32,
    poly: u32,
    /// `exp[i] = alpha^i` for `i < 2*(q-1)`, doubled to skip a mod in mul.
    exp: Vec<u16>,
    /// `log[a]` for `a >= 1`; `log[0]` is unused.
    log: Vec<u16>,
}

impl GfField {
    /// Field with the default primitive polynomial for `m`.
    pub fn new(m: u32) -> Result<Self, AlgebraError> {
        if !(2..=16).contains(&m) {
            return Err(AlgebraError::UnsupportedFieldDegree(m));
        }
        Self::with_poly(m, DEFAULT_POLYS[m as usize - 2])
    }

    /// Field with an explicit primitive polynomial (degree `m`, bit `i` the
    /// coefficient of `x^i`).
    pub fn with_poly(m: u32, poly: u32) -> Result<Self, AlgebraError> {
        if !(2..=16).contains(&m) {
            return Err(AlgebraError::UnsupportedFieldDegree(m));
        }
        if poly >> m != 1 {
            return Err(AlgebraError::NotPrimitive { poly, m });
        }
        let q = 1u32 << m;
        let mut exp = vec![0u16; 2 * (q as usize - 1)];
        let mut log = vec![0u16; q as usize];
        let mut value = 1u32;
        for i in 0..(q - 1) as usize {
            if value == 1 && i > 0 {
                // alpha's order divides i < q-1: not primitive.
                return Err(AlgebraError::NotPrimitive { poly, m });
            }
            exp[i] = value as u16;
            exp[i + (q as usize - 1)] = value as u16;
            log[value as usize] = i as u16;
            value <<= 1;
            if value & q != 0 {
                value ^= poly;
            }
        }
        if value != 1 {
            return Err(AlgebraError::NotPrimitive { poly, m });
        }
        Ok(GfField { m, poly, exp, log })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn poly(&self) -> u32 {
        self.poly
    }

    /// Field size `q = 2^m`.
    pub fn order(&self) -> u32 {
        1 << self.m
    }

    /// The primitive element `x`.
    pub fn alpha(&self) -> u16 {
        2
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        debug_assert!((a as u32) < self.order() && (b as u32) < self.order());
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        debug_assert!((a as u32) < self.order() && (b as u32) < self.order());
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
    }

    pub fn inv(&self, a: u16) -> Result<u16, AlgebraError> {
        if a == 0 {
            return Err(AlgebraError::DivisionByZero { m: self.m });
        }
        let q1 = self.order() as usize - 1;
        Ok(self.exp[(q1 - self.log[a as usize] as usize) % q1])
    }

    pub fn div(&self, a: u16, b: u16) -> Result<u16, AlgebraError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` with `a^0 = 1` (also for `a = 0`).
    pub fn pow(&self, a: u16, e: u64) -> u16 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let q1 = self.order() as u64 - 1;
        let idx = (self.log[a as usize] as u64 * (e % q1)) % q1;
        self.exp[idx as usize]
    }

    /// `alpha^e` for any exponent.
    pub fn alpha_pow(&self, e: u64) -> u16 {
        self.pow(self.alpha(), e)
    }

    /// Minimal polynomial of `beta` over F2 as a bit vector of coefficients
    /// (bit `i` is the coefficient of `x^i`, highest bit set at the degree).
    pub fn minimal_polynomial(&self, beta: u16) -> BitVector {
        debug_assert!((beta as u32) < self.order());
        if beta == 0 {
            return BitVector::from_bools(&[false, true]); // x
        }
        // Distinct Frobenius conjugates beta^(2^i).
        let mut conjugates = vec![beta];
        let mut c = self.mul(beta, beta);
        while c != beta {
            conjugates.push(c);
            c = self.mul(c, c);
        }
        // Product of (x + c) over the conjugates, coefficients in the field.
        let mut coeffs: Vec<u16> = vec![1];
        for &c in &conjugates {
            let mut next = vec![0u16; coeffs.len() + 1];
            for (i, &a) in coeffs.iter().enumerate() {
                next[i + 1] ^= a;
                next[i] ^= self.mul(a, c);
            }
            coeffs = next;
        }
        assert!(
            coeffs.iter().all(|&a| a <= 1),
            "conjugate product must have F2 coefficients"
        );
        BitVector::from_bools(&coeffs.iter().map(|&a| a == 1).collect::<Vec<_>>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_multiplication_table() {
        let f = GfField::new(2).unwrap();
        // 2 = alpha, 3 = alpha + 1 = alpha^2.
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.mul(2, 3), 1);
        assert_eq!(f.mul(3, 3), 2);
        assert_eq!(f.mul(0, 3), 0);
        assert_eq!(f.add(2, 3), 1);
    }

    #[test]
    fn every_default_poly_is_primitive() {
        for m in 2..=16 {
            let f = GfField::new(m).unwrap();
            assert_eq!(f.order(), 1 << m);
            // Spot-check the group law at the wrap point.
            let q1 = (f.order() - 1) as u64;
            assert_eq!(f.alpha_pow(q1), 1);
            assert_ne!(f.alpha_pow(q1 / 2), 1);
        }
    }

    #[test]
    fn inversion_and_division() {
        let f = GfField::new(6).unwrap();
        for a in 1..f.order() as u16 {
            let inv = f.inv(a).unwrap();
            assert_eq!(f.mul(a, inv), 1, "a = {a}");
            assert_eq!(f.div(a, a).unwrap(), 1);
        }
        assert_eq!(f.inv(0), Err(AlgebraError::DivisionByZero { m: 6 }));
    }

    #[test]
    fn pow_agrees_with_repeated_multiplication() {
        let f = GfField::new(5).unwrap();
        for a in 0..f.order() as u16 {
            let mut acc = 1u16;
            for e in 0..40u64 {
                assert_eq!(f.pow(a, e), acc, "a = {a}, e = {e}");
                acc = f.mul(acc, a);
            }
        }
    }

    #[test]
    fn rejects_non_primitive_polynomials() {
        // x^4 + x^3 + x^2 + x + 1 is irreducible but has order 5, not 15.
        assert!(matches!(
            GfField::with_poly(4, 0b11111),
            Err(AlgebraError::NotPrimitive { poly: 0b11111, m: 4 })
        ));
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2 is not even irreducible.
        assert!(GfField::with_poly(4, 0b10101).is_err());
        assert!(GfField::new(1).is_err());
        assert!(GfField::new(17).is_err());
    }

    #[test]
    fn minimal_polynomial_of_alpha_is_the_field_poly() {
        for m in [2u32, 3, 4, 6, 8] {
            let f = GfField::new(m).unwrap();
            let mp = f.minimal_polynomial(f.alpha());
            let bits: u32 = mp.ones().map(|i| 1 << i).sum();
            assert_eq!(bits, f.poly(), "m = {m}");
        }
    }

    #[test]
    fn minimal_polynomial_degree_divides_m_and_annihilates() {
        let f = GfField::new(6).unwrap();
        for beta in 0..f.order() as u16 {
            let mp = f.minimal_polynomial(beta);
            let degree = mp.ones().last().unwrap();
            assert!(degree >= 1 && (beta == 0 || 6 % degree as u32 == 0));
            // Evaluate at beta over the field: sum of beta^i over set coeffs.
            let value = mp
                .ones()
                .fold(0u16, |acc, i| f.add(acc, f.pow(beta, i as u64)));
            assert_eq!(value, 0, "beta = {beta}");
        }
    }
}
