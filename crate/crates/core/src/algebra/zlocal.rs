use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{AlgebraError, Dvr, Ring, Valuation};

/// The integers localized at a prime `p`: fractions `a/b` with `p ∤ b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ZLocal {
    p: u64,
}

impl ZLocal {
    pub fn new(p: u64) -> Result<Self, AlgebraError> {
        if is_prime(p) {
            Ok(ZLocal { p })
        } else {
            Err(AlgebraError::NotPrime(p))
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    fn p_big(&self) -> BigInt {
        BigInt::from(self.p)
    }

    fn contains(&self, a: &BigRational) -> bool {
        !a.denom().is_multiple_of(&self.p_big())
    }

    fn reduce_mod_p(&self, n: &BigInt) -> u64 {
        n.mod_floor(&self.p_big()).to_u64().expect("residue fits in u64")
    }
}

impl Ring for ZLocal {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_int(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        if a.is_integer() && b.is_integer() {
            return BigRational::from_integer(a.numer() + b.numer());
        }
        a + b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        if a.is_integer() && b.is_integer() {
            return BigRational::from_integer(a.numer() * b.numer());
        }
        a * b
    }

    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn size(&self, a: &BigRational) -> usize {
        (a.numer().bits() + a.denom().bits()) as usize
    }

    fn valuation(&self, a: &BigRational) -> Valuation {
        if a.is_zero() {
            return Valuation::Infinite;
        }
        let p = self.p_big();
        let mut n = a.numer().abs();
        let mut v = 0;
        loop {
            let (q, r) = n.div_rem(&p);
            if !r.is_zero() {
                return Valuation::Finite(v);
            }
            n = q;
            v += 1;
        }
    }

    fn divide(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        if b.is_zero() {
            return None;
        }
        let q = a / b;
        self.contains(&q).then_some(q)
    }

    fn split_unit(&self, a: &BigRational) -> Option<(BigRational, BigRational)> {
        let v = self.valuation(a).finite()?;
        let normal = BigRational::from_integer(self.p_big().pow(v));
        Some((a / &normal, normal))
    }

    fn format(&self, a: &BigRational) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Result<BigRational, AlgebraError> {
        let value = parse_rational(s)?;
        if !self.contains(&value) {
            return Err(AlgebraError::Parse {
                input: s.to_string(),
                reason: format!("denominator divisible by {}", self.p),
            });
        }
        Ok(value)
    }

    fn descriptor(&self) -> String {
        format!("Z@{}", self.p)
    }
}

impl Dvr for ZLocal {
    type Residue = PrimeField;

    fn residue_field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    fn uniformizer(&self) -> BigRational {
        BigRational::from_integer(self.p_big())
    }

    fn residue(&self, a: &BigRational) -> u64 {
        let field = self.residue_field();
        let num = self.reduce_mod_p(a.numer());
        let den = self.reduce_mod_p(a.denom());
        field.mul(&num, &field.inverse(&den).expect("denominator is a unit"))
    }

    fn lift(&self, a: &u64) -> BigRational {
        BigRational::from_integer(BigInt::from(*a % self.p))
    }
}

/// The prime field `F_p`, elements stored as integers in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, AlgebraError> {
        ZLocal::new(p).map(|r| r.residue_field())
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    fn pow_mod(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul_mod(acc, base, self.p);
            }
            base = mul_mod(base, base, self.p);
            exp >>= 1;
        }
        acc
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn from_int(&self, n: i64) -> u64 {
        (n as i128).rem_euclid(self.p as i128) as u64
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn valuation(&self, a: &u64) -> Valuation {
        if *a == 0 {
            Valuation::Infinite
        } else {
            Valuation::Finite(0)
        }
    }

    fn divide(&self, a: &u64, b: &u64) -> Option<u64> {
        if *b == 0 {
            return None;
        }
        Some(self.mul(a, &self.pow_mod(*b, self.p - 2)))
    }

    fn split_unit(&self, a: &u64) -> Option<(u64, u64)> {
        (*a != 0).then_some((*a, 1))
    }

    fn format(&self, a: &u64) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Result<u64, AlgebraError> {
        let n: BigInt = s.trim().parse().map_err(|_| AlgebraError::Parse {
            input: s.to_string(),
            reason: "expected an integer".into(),
        })?;
        Ok(n.mod_floor(&BigInt::from(self.p)).to_u64().expect("fits"))
    }

    fn descriptor(&self) -> String {
        format!("F_{}", self.p)
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(small) {
            return n == small;
        }
    }
    // Deterministic Miller-Rabin bases for all 64-bit inputs.
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let field = PrimeField { p: n };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = field.pow_mod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational, AlgebraError> {
    let err = |reason: &str| AlgebraError::Parse { input: s.to_string(), reason: reason.to_string() };
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, d),
        None => (t.as_str(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err("bad numerator"))?;
    let den: BigInt = den.parse().map_err(|_| err("bad denominator"))?;
    if den.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z5() -> ZLocal {
        ZLocal::new(5).unwrap()
    }

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(5) && is_prime(101) && is_prime(1_000_000_007));
        assert!(!is_prime(0) && !is_prime(1) && !is_prime(4) && !is_prime(91));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
    }

    #[test]
    fn valuation_examples() {
        let r = z5();
        assert_eq!(r.valuation(&r.from_int(50)), Valuation::Finite(2));
        assert_eq!(r.valuation(&r.one()), Valuation::Finite(0));
        assert_eq!(r.valuation(&r.zero()), Valuation::Infinite);
        assert_eq!(r.valuation(&r.parse("-25/3").unwrap()), Valuation::Finite(2));
    }

    #[test]
    fn units_and_residues() {
        let r = z5();
        let k = r.residue_field();
        assert!(r.is_unit(&r.from_int(3)));
        assert!(!r.is_unit(&r.from_int(10)));
        assert_eq!(r.residue(&r.from_int(7)), 2);
        assert_eq!(r.residue(&r.from_int(-1)), 4);
        // 1/2 ≡ 3 mod 5
        assert_eq!(r.residue(&r.parse("1/2").unwrap()), 3);
        for x in 0..5u64 {
            assert_eq!(r.lift(&x), r.from_int(x as i64));
            assert_eq!(r.residue(&r.lift(&x)), x);
        }
        assert_eq!(k.inverse(&2), Some(3));
        assert_eq!(k.inverse(&0), None);
    }

    #[test]
    fn division_respects_the_ring() {
        let r = z5();
        assert_eq!(r.divide(&r.from_int(10), &r.from_int(5)), Some(r.from_int(2)));
        assert_eq!(r.divide(&r.from_int(2), &r.from_int(5)), None);
        assert_eq!(r.divide(&r.from_int(1), &r.from_int(3)), Some(r.parse("1/3").unwrap()));
        assert_eq!(r.divide(&r.one(), &r.zero()), None);
        let (u, n) = r.split_unit(&r.from_int(-75)).unwrap();
        assert_eq!(n, r.from_int(25));
        assert_eq!(u, r.from_int(-3));
    }

    #[test]
    fn parse_rejects_non_elements() {
        let r = z5();
        assert!(r.parse("1/5").is_err());
        assert!(r.parse("1/0").is_err());
        assert!(r.parse("abc").is_err());
        assert_eq!(r.parse(" -3 / 4 ").unwrap(), r.parse("-3/4").unwrap());
        assert_eq!(r.format(&r.parse("6/-4").unwrap()), "-3/2");
    }
}
