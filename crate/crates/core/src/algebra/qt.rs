use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::zlocal::{is_prime, mul_mod, parse_rational};
use super::{AlgebraError, Dvr, Ring, Valuation};

/// Polynomial over `Q` with coefficients in ascending degree, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly(Vec<BigRational>);

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::new(vec![c])
    }

    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut v = vec![BigRational::zero(); k];
        v.push(c);
        Poly::new(v)
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.0.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    fn leading(&self) -> Option<&BigRational> {
        self.0.last()
    }

    /// Order of vanishing at `t = 0`.
    pub fn order(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::default();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        Poly::new(self.0.iter().map(|x| x * c).collect())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let lead = divisor.leading().expect("division by the zero polynomial");
        let dd = divisor.0.len() - 1;
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (Poly::default(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / lead;
            if !c.is_zero() {
                for (j, d) in divisor.0.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => Poly::default(),
        }
    }

    /// Monic gcd, through a primitive remainder sequence over `Z`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (a, b) = (primitive_integer(self), primitive_integer(other));
        if coprime_mod_p(&a, &b) {
            return Poly::one();
        }
        from_integers(&int_gcd(&a, &b)).monic()
    }
}

fn from_integers(v: &[BigInt]) -> Poly {
    Poly::new(v.iter().cloned().map(BigRational::from_integer).collect())
}

/// `p` scaled to coprime integer coefficients.
fn primitive_integer(p: &Poly) -> Vec<BigInt> {
    let lcm = p.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    primitive_part(p.0.iter().map(|c| c.numer() * (&lcm / c.denom())).collect())
}

fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn primitive_part(v: Vec<BigInt>) -> Vec<BigInt> {
    let mut v = trim(v);
    let content = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !content.is_zero() && !content.is_one() {
        v.iter_mut().for_each(|c| *c /= &content);
    }
    v
}

fn int_add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    out.iter_mut().zip(short).for_each(|(x, y)| *x += y);
    trim(out)
}

fn int_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `a / g` for a divisor known to divide `a` in `Z[t]`.
fn int_exact_div(a: &[BigInt], g: &[BigInt]) -> Vec<BigInt> {
    let lead = g.last().expect("non-zero divisor");
    let dg = g.len() - 1;
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - dg];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dg] / lead;
        if !c.is_zero() {
            for (j, d) in g.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
    quot
}

/// Non-constant primitive gcd of `a` and `b`, if there is one.
fn common_factor(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    if a.is_empty() || b.is_empty() || coprime_mod_p(a, b) {
        return None;
    }
    let g = int_gcd(&primitive_part(a.to_vec()), &primitive_part(b.to_vec()));
    (g.len() > 1).then_some(g)
}

/// `a / g` if `g` divides `a` in `Z[t]`.
fn int_divides(a: &[BigInt], g: &[BigInt]) -> Option<Vec<BigInt>> {
    let lead = g.last().expect("non-zero divisor");
    if a.len() < g.len() {
        return a.is_empty().then(Vec::new);
    }
    let dg = g.len() - 1;
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - dg];
    for k in (0..quot.len()).rev() {
        let (c, r) = rem[k + dg].div_rem(lead);
        if !r.is_zero() {
            return None;
        }
        if !c.is_zero() {
            for (j, d) in g.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
        }
        quot[k] = c;
    }
    rem.iter().all(Zero::is_zero).then_some(quot)
}

/// Primitive gcd of two primitive integer polynomials, from gcds modulo
/// large primes combined by CRT and confirmed by trial division.
fn int_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return primitive_part(if a.is_empty() { b.to_vec() } else { a.to_vec() });
    }
    let lead_gcd = a.last().expect("non-empty").gcd(b.last().expect("non-empty"));
    let mut acc: Option<(Vec<BigInt>, BigInt)> = None;
    let mut previous: Option<Vec<BigInt>> = None;
    for p in primes() {
        let scale = to_mod(&lead_gcd, p);
        let (Some(x), Some(y)) = (reduce_mod(a, p), reduce_mod(b, p)) else {
            continue;
        };
        if scale == 0 {
            continue;
        }
        let g = gcd_mod(x, y, p);
        if g.len() == 1 {
            return vec![BigInt::one()];
        }
        let image: Vec<u64> = g.iter().map(|&c| mul_mod(c, scale, p)).collect();
        acc = match acc {
            // A larger degree means `p` is unlucky; a smaller one means all
            // earlier primes were.
            Some((ref r, _)) if r.len() < image.len() => continue,
            Some((r, m)) if r.len() == image.len() => Some(crt(&r, &m, &image, p)),
            _ => Some((image.iter().map(|&c| BigInt::from(c)).collect(), BigInt::from(p))),
        };
        let (residues, modulus) = acc.as_ref().expect("set above");
        let half = modulus / 2;
        let candidate =
            primitive_part(residues.iter().map(|c| if c > &half { c - modulus } else { c.clone() }).collect());
        if previous.as_ref() == Some(&candidate) && int_divides(a, &candidate).is_some() && int_divides(b, &candidate).is_some() {
            return candidate;
        }
        previous = Some(candidate);
    }
    unreachable!("the prime supply outlasts any coefficient bound")
}

fn crt(residues: &[BigInt], modulus: &BigInt, image: &[u64], p: u64) -> (Vec<BigInt>, BigInt) {
    let m_inv = inv_mod(to_mod(modulus, p), p);
    let combined = residues
        .iter()
        .zip(image)
        .map(|(r, &s)| {
            let t = mul_mod((s + p - to_mod(r, p)) % p, m_inv, p);
            r + modulus * BigInt::from(t)
        })
        .collect();
    (combined, modulus * BigInt::from(p))
}

/// Primes just below `2^61`, in descending order.
fn primes() -> impl Iterator<Item = u64> {
    ((1u64 << 60)..(1u64 << 61)).rev().filter(|&n| !n.is_multiple_of(2) && is_prime(n))
}

const SIEVE_PRIME: u64 = (1 << 61) - 1;

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn to_mod(x: &BigInt, p: u64) -> u64 {
    let r = x % p;
    let r = if r.is_negative() { r + p } else { r };
    u64::try_from(r).expect("reduced below the modulus")
}

/// Coefficients mod `p`, or `None` if the leading one vanishes there.
fn reduce_mod(v: &[BigInt], p: u64) -> Option<Vec<u64>> {
    let coeffs: Vec<u64> = v.iter().map(|x| to_mod(x, p)).collect();
    coeffs.last().is_some_and(|&l| l != 0).then_some(coeffs)
}

/// Monic gcd over `F_p` of polynomials with non-zero leading coefficients.
fn gcd_mod(mut x: Vec<u64>, mut y: Vec<u64>, p: u64) -> Vec<u64> {
    while !y.is_empty() {
        let lead_inv = inv_mod(*y.last().expect("non-empty"), p);
        while x.len() >= y.len() {
            let c = mul_mod(*x.last().expect("non-empty"), lead_inv, p);
            let shift = x.len() - y.len();
            for (j, &yj) in y.iter().enumerate() {
                let t = mul_mod(c, yj, p);
                x[shift + j] = (x[shift + j] + p - t) % p;
            }
            while x.last() == Some(&0) {
                x.pop();
            }
        }
        std::mem::swap(&mut x, &mut y);
    }
    let lead_inv = inv_mod(*x.last().expect("non-zero gcd"), p);
    x.iter().map(|&c| mul_mod(c, lead_inv, p)).collect()
}

/// `true` only if `a` and `b` are certainly coprime: a constant gcd mod a
/// prime that keeps both degrees bounds the gcd over `Q` to a constant.
fn coprime_mod_p(a: &[BigInt], b: &[BigInt]) -> bool {
    match (reduce_mod(a, SIEVE_PRIME), reduce_mod(b, SIEVE_PRIME)) {
        (Some(x), Some(y)) => gcd_mod(x, y, SIEVE_PRIME).len() == 1,
        _ => false,
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if first {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    f.write_str("t")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Element of `Q[t]` localized at `(t)`, kept as integer polynomials that
/// are coprime over `Q`, with jointly coprime coefficients, a positive leading
/// denominator coefficient and `den(0) != 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Vec<BigInt>,
    den: Vec<BigInt>,
}

impl RatFunc {
    /// Builds `num/den` in canonical form; `None` if `den(0) = 0` after reduction.
    pub fn new(num: Poly, den: Poly) -> Option<RatFunc> {
        if den.is_zero() {
            return None;
        }
        let lcm = num.0.iter().chain(&den.0).fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scaled = |p: &Poly| p.0.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
        RatFunc::from_integers(scaled(&num), scaled(&den))
    }

    fn from_integers(num: Vec<BigInt>, den: Vec<BigInt>) -> Option<RatFunc> {
        match common_factor(&num, &den) {
            Some(g) => RatFunc::normalized(int_exact_div(&num, &g), int_exact_div(&den, &g)),
            None => RatFunc::normalized(num, den),
        }
    }

    /// Scales a pair already coprime over `Q` to the canonical representative.
    fn normalized(mut num: Vec<BigInt>, mut den: Vec<BigInt>) -> Option<RatFunc> {
        if num.is_empty() {
            return Some(RatFunc::constant(BigInt::zero()));
        }
        let mut content = num.iter().chain(&den).fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if den.last().expect("non-zero").is_negative() {
            content = -content;
        }
        if !content.is_one() {
            num.iter_mut().chain(den.iter_mut()).for_each(|c| *c /= &content);
        }
        if den[0].is_zero() {
            return None;
        }
        Some(RatFunc { num, den })
    }

    fn constant(c: BigInt) -> RatFunc {
        RatFunc { num: trim(vec![c]), den: vec![BigInt::one()] }
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        RatFunc::new(p, Poly::one()).expect("constant denominator")
    }

    /// Numerator, scaled so that the denominator is monic.
    pub fn numerator(&self) -> Poly {
        let lead = BigRational::from_integer(self.den.last().expect("non-zero").clone());
        from_integers(&self.num).scale(&lead.recip())
    }

    /// Monic denominator.
    pub fn denominator(&self) -> Poly {
        from_integers(&self.den).monic()
    }

    fn value_at_zero(&self) -> BigRational {
        match self.num.first() {
            Some(n) => BigRational::new(n.clone(), self.den[0].clone()),
            None => BigRational::zero(),
        }
    }

    fn order(&self) -> Option<usize> {
        self.num.iter().position(|c| !c.is_zero())
    }
}

/// `Q[t]` localized at the prime `t`; uniformizer `t`, residue field `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct QtLocal;

impl Ring for QtLocal {
    type Elem = RatFunc;

    fn zero(&self) -> RatFunc {
        RatFunc::constant(BigInt::zero())
    }

    fn one(&self) -> RatFunc {
        RatFunc::constant(BigInt::one())
    }

    fn from_int(&self, n: i64) -> RatFunc {
        RatFunc::constant(BigInt::from(n))
    }

    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        if a.num.is_empty() {
            return b.clone();
        }
        if b.num.is_empty() {
            return a.clone();
        }
        if a.den == b.den {
            return RatFunc::from_integers(int_add(&a.num, &b.num), a.den.clone()).expect("local");
        }
        let Some(g) = common_factor(&a.den, &b.den) else {
            let num = int_add(&int_mul(&a.num, &b.den), &int_mul(&b.num, &a.den));
            return RatFunc::normalized(num, int_mul(&a.den, &b.den)).expect("local");
        };
        let (a_rest, b_rest) = (int_exact_div(&a.den, &g), int_exact_div(&b.den, &g));
        let num = int_add(&int_mul(&a.num, &b_rest), &int_mul(&b.num, &a_rest));
        let den = int_mul(&a_rest, &b.den);
        match common_factor(&num, &g) {
            Some(h) => RatFunc::normalized(int_exact_div(&num, &h), int_exact_div(&den, &h)),
            None => RatFunc::normalized(num, den),
        }
        .expect("local")
    }

    fn neg(&self, a: &RatFunc) -> RatFunc {
        RatFunc { num: a.num.iter().map(|c| -c).collect(), den: a.den.clone() }
    }

    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        if a.num.is_empty() || b.num.is_empty() {
            return self.zero();
        }
        let cancel = |num: &[BigInt], den: &[BigInt]| match common_factor(num, den) {
            Some(g) => (int_exact_div(num, &g), int_exact_div(den, &g)),
            None => (num.to_vec(), den.to_vec()),
        };
        let (an, bd) = cancel(&a.num, &b.den);
        let (bn, ad) = cancel(&b.num, &a.den);
        RatFunc::normalized(int_mul(&an, &bn), int_mul(&ad, &bd)).expect("local")
    }

    fn is_zero(&self, a: &RatFunc) -> bool {
        a.num.is_empty()
    }

    fn size(&self, a: &RatFunc) -> usize {
        a.num.iter().chain(&a.den).map(|c| c.bits() as usize).sum()
    }

    fn valuation(&self, a: &RatFunc) -> Valuation {
        match a.order() {
            Some(k) => Valuation::Finite(k as u32),
            None => Valuation::Infinite,
        }
    }

    fn divide(&self, a: &RatFunc, b: &RatFunc) -> Option<RatFunc> {
        if b.num.is_empty() || self.valuation(a) < self.valuation(b) {
            return None;
        }
        if a.num.is_empty() {
            return Some(self.zero());
        }
        RatFunc::from_integers(int_mul(&a.num, &b.den), int_mul(&a.den, &b.num))
    }

    fn split_unit(&self, a: &RatFunc) -> Option<(RatFunc, RatFunc)> {
        let k = a.order()?;
        let mut power = vec![BigInt::zero(); k];
        power.push(BigInt::one());
        let normal = RatFunc { num: power, den: vec![BigInt::one()] };
        let unit = RatFunc { num: a.num[k..].to_vec(), den: a.den.clone() };
        Some((unit, normal))
    }

    fn format(&self, a: &RatFunc) -> String {
        if a.den.len() == 1 {
            a.numerator().to_string()
        } else {
            format!("({})/({})", a.numerator(), a.denominator())
        }
    }

    fn parse(&self, s: &str) -> Result<RatFunc, AlgebraError> {
        let err = |reason: &str| AlgebraError::Parse { input: s.to_string(), reason: reason.into() };
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (num, den) = split_fraction(&t).ok_or_else(|| err("unbalanced parentheses"))?;
        let num = parse_poly(num).ok_or_else(|| err("bad numerator polynomial"))?;
        let den = match den {
            Some(d) => parse_poly(d).ok_or_else(|| err("bad denominator polynomial"))?,
            None => Poly::one(),
        };
        if den.is_zero() {
            return Err(err("zero denominator"));
        }
        RatFunc::new(num, den).ok_or_else(|| err("denominator vanishes at t = 0"))
    }

    fn descriptor(&self) -> String {
        "Q[t]@t".to_string()
    }
}

impl Dvr for QtLocal {
    type Residue = Rationals;

    fn residue_field(&self) -> Rationals {
        Rationals
    }

    fn uniformizer(&self) -> RatFunc {
        RatFunc { num: vec![BigInt::zero(), BigInt::one()], den: vec![BigInt::one()] }
    }

    fn residue(&self, a: &RatFunc) -> BigRational {
        a.value_at_zero()
    }

    fn lift(&self, a: &BigRational) -> RatFunc {
        RatFunc { num: trim(vec![a.numer().clone()]), den: vec![a.denom().clone()] }
    }
}

/// The field `Q`, residue field of `Q[t]@t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Ring for Rationals {
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
        a + b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn valuation(&self, a: &BigRational) -> Valuation {
        if a.is_zero() {
            Valuation::Infinite
        } else {
            Valuation::Finite(0)
        }
    }

    fn divide(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        (!b.is_zero()).then(|| a / b)
    }

    fn split_unit(&self, a: &BigRational) -> Option<(BigRational, BigRational)> {
        (!a.is_zero()).then(|| (a.clone(), BigRational::one()))
    }

    fn format(&self, a: &BigRational) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Result<BigRational, AlgebraError> {
        parse_rational(s)
    }

    fn descriptor(&self) -> String {
        "Q".to_string()
    }
}

/// Splits `"(P)/(Q)"`, `"P/(Q)"` or `"P"` into numerator and optional denominator text.
fn split_fraction(s: &str) -> Option<(&str, Option<&str>)> {
    let mut depth = 0i32;
    let mut split = None;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => {
                // A top-level slash right after a parenthesised numerator, or
                // before a parenthesised denominator, separates the fraction.
                let before = &s[..i];
                let after = &s[i + 1..];
                if before.ends_with(')') || after.starts_with('(') {
                    split = Some(i);
                }
            }
            _ => {}
        }
        if depth < 0 {
            return None;
        }
    }
    if depth != 0 {
        return None;
    }
    Some(match split {
        Some(i) => (strip_parens(&s[..i]), Some(strip_parens(&s[i + 1..]))),
        None => (strip_parens(s), None),
    })
}

fn strip_parens(s: &str) -> &str {
    s.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(s)
}

/// Parses sums of terms like `3`, `-1/2*t^2`, `t`, `2t`.
fn parse_poly(s: &str) -> Option<Poly> {
    if s.is_empty() {
        return None;
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        if (c == '+' || c == '-') && i > start {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);
    let mut acc = Poly::default();
    for term in terms {
        let (sign, body) = match term.as_bytes().first()? {
            b'+' => (BigRational::one(), &term[1..]),
            b'-' => (-BigRational::one(), &term[1..]),
            _ => (BigRational::one(), term),
        };
        let (coeff, power) = match body.find('t') {
            None => (parse_rational(body).ok()?, 0),
            Some(pos) => {
                let c = body[..pos].trim_end_matches('*');
                let c = if c.is_empty() { BigRational::one() } else { parse_rational(c).ok()? };
                let rest = &body[pos + 1..];
                let k = match rest.strip_prefix('^') {
                    Some(k) => k.parse().ok()?,
                    None if rest.is_empty() => 1,
                    None => return None,
                };
                (c, k)
            }
        };
        acc = acc.add(&Poly::monomial(sign * coeff, power));
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn poly_arithmetic() {
        let a = Poly::new(vec![q(1, 1), q(1, 1)]); // 1 + t
        let b = Poly::new(vec![q(-1, 1), q(1, 1)]); // -1 + t
        let prod = a.mul(&b);
        assert_eq!(prod, Poly::new(vec![q(-1, 1), q(0, 1), q(1, 1)]));
        let (quot, rem) = prod.div_rem(&a);
        assert_eq!(quot, b);
        assert!(rem.is_zero());
        assert_eq!(prod.gcd(&a.mul(&a)), a);
        assert_eq!(prod.to_string(), "-1 + t^2");
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn modular_gcd_recovers_planted_factor() {
        let g = ints(&[7, -3, 0, 11]);
        let big = BigInt::from(3).pow(80u32);
        let a = int_mul(&g, &[big.clone(), BigInt::from(5), BigInt::from(1)]);
        let b = int_mul(&g, &ints(&[-2, 9]));
        assert_eq!(int_gcd(&primitive_part(a.clone()), &primitive_part(b.clone())), g);
        assert_eq!(common_factor(&a, &b), Some(g));
        assert_eq!(common_factor(&ints(&[1, 1]), &ints(&[1, -1])), None);
        assert_eq!(int_divides(&ints(&[2, 3]), &ints(&[1, 1])), None);
    }

    #[test]
    fn prime_supply() {
        let first: Vec<u64> = primes().take(3).collect();
        assert_eq!(first[0], SIEVE_PRIME);
        assert!(first.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn canonical_fractions() {
        let r = QtLocal;
        let x = r.parse("(2 + 2*t)/(4 + 4*t)").unwrap();
        assert_eq!(x, r.parse("1/2").unwrap());
        let y = r.parse("(t)/(1 - t)").unwrap();
        assert_eq!(r.format(&y), "(-t)/(-1 + t)");
        assert_eq!(r.parse(&r.format(&y)).unwrap(), y);
        assert!(r.parse("1/(t)").is_err());
        assert!(r.parse("(1+t").is_err());
        assert_eq!(r.parse("t^2 - 3t").unwrap(), r.parse("-3*t + t^2").unwrap());
    }

    #[test]
    fn valuation_and_residue() {
        let r = QtLocal;
        let x = r.parse("(3*t^2 + t^3)/(2 + t)").unwrap();
        assert_eq!(r.valuation(&x), Valuation::Finite(2));
        assert_eq!(r.valuation(&r.zero()), Valuation::Infinite);
        let u = r.parse("(3 + t)/(2 - t)").unwrap();
        assert!(r.is_unit(&u));
        assert_eq!(r.residue(&u), q(3, 2));
        assert_eq!(r.residue(&r.uniformizer()), q(0, 1));
        assert_eq!(r.residue(&r.lift(&q(-7, 3))), q(-7, 3));
        let (unit, normal) = r.split_unit(&x).unwrap();
        assert_eq!(normal, r.uniformizer_power(2));
        assert_eq!(r.mul(&unit, &normal), x);
    }

    #[test]
    fn division() {
        let r = QtLocal;
        let t = r.uniformizer();
        let t2 = r.mul(&t, &t);
        assert_eq!(r.divide(&t2, &t), Some(t.clone()));
        assert_eq!(r.divide(&t, &t2), None);
        let u = r.parse("1 + t").unwrap();
        let inv = r.inverse(&u).unwrap();
        assert_eq!(r.mul(&u, &inv), r.one());
    }
}
