//! Small dense univariate polynomials over GF(2^m), used to count and
//! locate roots along one-dimensional slices of a plane curve.

use crate::field::FieldSpec;

/// Coefficients low degree first, trailing zeros trimmed. The zero
/// polynomial is the empty vector.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct Poly(pub Vec<u16>);

impl Poly {
    pub fn new(mut c: Vec<u16>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, f: &FieldSpec, x: u16) -> u16 {
        self.0.iter().rev().fold(0, |acc, &c| f.mul_raw(acc, x) ^ c)
    }

    pub fn monic(&self, f: &FieldSpec) -> Poly {
        match self.0.last() {
            None => Poly::default(),
            Some(&lead) => {
                let inv = f.inv_raw(lead);
                Poly(self.0.iter().map(|&c| f.mul_raw(c, inv)).collect())
            }
        }
    }

    pub fn rem(&self, f: &FieldSpec, modulus: &Poly) -> Poly {
        let dm = modulus.degree().expect("division by the zero polynomial");
        let mut r = self.0.clone();
        let inv = f.inv_raw(modulus.0[dm]);
        while r.len() > dm {
            let lead = *r.last().unwrap();
            if lead != 0 {
                let factor = f.mul_raw(lead, inv);
                let shift = r.len() - 1 - dm;
                for (i, &c) in modulus.0.iter().enumerate() {
                    r[shift + i] ^= f.mul_raw(factor, c);
                }
            }
            r.pop();
        }
        Poly::new(r)
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, f: &FieldSpec, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        if self.0.len() <= dd {
            return (Poly::default(), self.clone());
        }
        let mut r = self.0.clone();
        let mut quot = vec![0u16; r.len() - dd];
        let inv = f.inv_raw(divisor.0[dd]);
        while r.len() > dd {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - dd;
            if lead != 0 {
                let factor = f.mul_raw(lead, inv);
                quot[shift] = factor;
                for (i, &c) in divisor.0.iter().enumerate() {
                    r[shift + i] ^= f.mul_raw(factor, c);
                }
            }
            r.pop();
        }
        (Poly::new(quot), Poly::new(r))
    }

    pub fn gcd(f: &FieldSpec, a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// Formal derivative (characteristic 2: odd-degree terms survive).
    pub fn derivative(&self) -> Poly {
        Poly::new(self.0.iter().enumerate().skip(1).map(|(i, &c)| if i % 2 == 1 { c } else { 0 }).collect())
    }

    /// `X^q - X mod self` for `self` of positive degree.
    fn frobenius_residue(&self, f: &FieldSpec) -> Poly {
        let mut acc = Poly::new(vec![0, 1]).rem(f, self);
        for _ in 0..f.m() {
            // squaring in characteristic 2 squares each coefficient
            let mut sq = vec![0u16; acc.0.len().saturating_mul(2).max(1)];
            for (i, &c) in acc.0.iter().enumerate() {
                sq[2 * i] = f.sqr_raw(c);
            }
            acc = Poly::new(sq).rem(f, self);
        }
        let mut v = acc.0;
        if v.len() < 2 {
            v.resize(2, 0);
        }
        v[1] ^= 1;
        Poly::new(v).rem(f, self)
    }

    /// The product of the distinct linear factors defined over GF(q).
    pub fn rational_part(&self, f: &FieldSpec) -> Poly {
        match self.degree() {
            None => panic!("rational part of the zero polynomial"),
            Some(0) => Poly::new(vec![1]),
            Some(_) => {
                let h = self.frobenius_residue(f);
                if h.is_zero() {
                    // self divides X^q - X: squarefree and split
                    self.monic(f)
                } else {
                    Poly::gcd(f, self, &h)
                }
            }
        }
    }

    /// Number of distinct roots in GF(q); the zero polynomial has `q`.
    pub fn count_roots(&self, f: &FieldSpec) -> u32 {
        if self.is_zero() {
            return f.q();
        }
        self.rational_part(f).degree().unwrap() as u32
    }

    /// Distinct roots in GF(q), ascending.
    pub fn roots(&self, f: &FieldSpec) -> Vec<u16> {
        if self.is_zero() {
            return (0..f.q() as u16).collect();
        }
        let r = self.rational_part(f);
        let want = r.degree().unwrap();
        let mut out = Vec::with_capacity(want);
        if want == 0 {
            return out;
        }
        for x in 0..f.q() as u16 {
            if r.eval(f, x) == 0 {
                out.push(x);
                if out.len() == want {
                    break;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_roots(f: &FieldSpec, p: &Poly) -> Vec<u16> {
        (0..f.q() as u16).filter(|&x| p.eval(f, x) == 0).collect()
    }

    #[test]
    fn roots_match_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for m in 1..=8 {
            let f = FieldSpec::cached(m).unwrap();
            for _ in 0..200 {
                let deg = rng.gen_range(0..=6);
                let c: Vec<u16> = (0..=deg).map(|_| rng.gen_range(0..f.q()) as u16).collect();
                let p = Poly::new(c);
                assert_eq!(p.roots(&f), brute_roots(&f, &p));
                if !p.is_zero() {
                    assert_eq!(p.count_roots(&f) as usize, brute_roots(&f, &p).len());
                }
            }
        }
    }

    #[test]
    fn repeated_roots_count_once() {
        let f = FieldSpec::new(3).unwrap();
        // (X + 1)^2 = X^2 + 1
        assert_eq!(Poly::new(vec![1, 0, 1]).count_roots(&f), 1);
    }

    #[test]
    fn div_rem_reconstructs() {
        let f = FieldSpec::new(4).unwrap();
        let a = Poly::new(vec![3, 7, 0, 9, 1, 5]);
        let b = Poly::new(vec![2, 0, 11]);
        let (qt, r) = a.div_rem(&f, &b);
        // a = q*b + r
        let mut prod = vec![0u16; qt.0.len() + b.0.len()];
        for (i, &x) in qt.0.iter().enumerate() {
            for (j, &y) in b.0.iter().enumerate() {
                prod[i + j] ^= f.mul_raw(x, y);
            }
        }
        for (i, &c) in r.0.iter().enumerate() {
            prod[i] ^= c;
        }
        assert_eq!(Poly::new(prod), a);
    }
}
