//! Dense univariate polynomials over ℤ and ℚ, coefficients stored constant term first.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{lcm_of_denominators, rat_int, Int, Rat};

/// Integer polynomial, `coeffs[k]` is the coefficient of x^k.
///
/// Trailing zeros are stripped on construction, so the zero polynomial has
/// no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<Int>,
}

impl Serialize for IntPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        crate::json::int_vec::serialize(&self.coeffs, s)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        crate::json::int_vec::deserialize(d).map(IntPolynomial::new)
    }
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<Int>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Int::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Int> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn to_rational(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| rat_int(c.clone())).collect())
    }

    pub fn eval_int(&self, x: &Int) -> Int {
        self.coeffs
            .iter()
            .rev()
            .fold(Int::zero(), |acc, c| acc * x + c)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + rat_int(c.clone()))
    }

    /// Sign of p(x) computed from the homogenised integer form, avoiding rational normalisation.
    pub fn sign_at(&self, x: &Rat) -> std::cmp::Ordering {
        let (p, q) = (x.numer(), x.denom());
        let mut acc = Int::zero();
        let mut qpow = Int::one();
        // Accumulates sum c_i p^i q^(n-i).
        for c in self.coeffs.iter().rev() {
            acc = acc * p + c * &qpow;
            qpow *= q;
        }
        acc.cmp(&Int::zero())
    }

    pub fn content(&self) -> Int {
        self.coeffs.iter().fold(Int::zero(), |acc, c| acc.gcd(c))
    }

    pub fn derivative(&self) -> IntPolynomial {
        IntPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Int::from(k))
                .collect(),
        )
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::new(Vec::new());
        }
        let mut out = vec![Int::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{a}x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{a}x^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

/// Polynomial with rational coefficients; same storage convention as [`IntPolynomial`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QPoly {
    coeffs: Vec<Rat>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat) -> Self {
        QPoly::new(vec![c])
    }

    pub fn x() -> Self {
        QPoly::new(vec![Rat::zero(), Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new(
            (0..n)
                .map(|k| {
                    let a = self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero);
                    let b = o.coeffs.get(k).cloned().unwrap_or_else(Rat::zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Rat) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat_int(k as i64))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (QPoly::zero(), QPoly::zero());
        };
        if nd < dd {
            return (QPoly::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); nd - dd + 1];
        for k in (dd..=nd).rev() {
            let c = &rem[k] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k - dd + j] -= &c * dc;
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        (QPoly::new(quot), QPoly::new(rem))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.div_rem(d).1
    }

    pub fn monic(&self) -> QPoly {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => QPoly::zero(),
        }
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s)` with `s * self ≡ g (mod m)`, g the monic gcd.
    pub fn inverse_mod(&self, m: &QPoly) -> Option<QPoly> {
        // Extended Euclid tracking only the coefficient of `self`.
        let (mut r0, mut r1) = (m.clone(), self.rem(m));
        let (mut s0, mut s1) = (QPoly::zero(), QPoly::constant(Rat::one()));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        // r0 is the gcd (up to a unit); invertible iff it is constant.
        if r0.degree() != Some(0) {
            return None;
        }
        let c = r0.coeffs[0].recip();
        Some(s0.scale(&c).rem(m))
    }

    /// Primitive integer polynomial with positive leading coefficient.
    pub fn primitive_part(&self) -> IntPolynomial {
        if self.is_zero() {
            return IntPolynomial::new(Vec::new());
        }
        let l = lcm_of_denominators(self.coeffs.iter());
        let ints: Vec<Int> = self
            .coeffs
            .iter()
            .map(|c| (c * rat_int(l.clone())).to_integer())
            .collect();
        let p = IntPolynomial::new(ints);
        let mut g = p.content();
        if p.leading().unwrap().is_negative() {
            g = -g;
        }
        IntPolynomial::new(p.coeffs().iter().map(|c| c / &g).collect())
    }

    /// Yun's square-free decomposition: `(factor, multiplicity)` pairs of
    /// nonconstant monic square-free factors whose product (with powers) is
    /// the monic associate of `self`.
    pub fn squarefree_decomposition(&self) -> Vec<(QPoly, u32)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).0;
        let mut c = df.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut mult = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), mult));
            }
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            d = c.sub(&b.derivative());
            mult += 1;
        }
        out
    }
}

/// Sign changes of the Sturm sequence evaluated at `x` (zeros skipped).
pub(crate) fn sturm_variations(seq: &[QPoly], x: &Rat) -> usize {
    let mut last: Option<bool> = None;
    let mut count = 0;
    for p in seq {
        let v = p.eval(x);
        if v.is_zero() {
            continue;
        }
        let pos = v.is_positive();
        if let Some(l) = last {
            if l != pos {
                count += 1;
            }
        }
        last = Some(pos);
    }
    count
}

pub(crate) fn sturm_sequence(p: &QPoly) -> Vec<QPoly> {
    let mut seq = vec![p.clone(), p.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let r = seq[n - 2].rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(r.neg());
    }
    seq
}

/// Leading-coefficient sign based variations at ±∞.
fn variations_at_infinity(seq: &[QPoly], positive: bool) -> usize {
    let mut last: Option<bool> = None;
    let mut count = 0;
    for p in seq {
        let Some(d) = p.degree() else { continue };
        let l = p.leading().unwrap();
        let mut pos = l.is_positive();
        if !positive && d % 2 == 1 {
            pos = !pos;
        }
        if let Some(prev) = last {
            if prev != pos {
                count += 1;
            }
        }
        last = Some(pos);
    }
    count
}

/// Number of distinct real roots, certified by a Sturm sequence.
pub fn sturm_count(p: &IntPolynomial) -> usize {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let seq = sturm_sequence(&p.to_rational());
    variations_at_infinity(&seq, false) - variations_at_infinity(&seq, true)
}

/// Resultant of two integer polynomials via the Sylvester matrix.
pub fn resultant(f: &IntPolynomial, g: &IntPolynomial) -> Int {
    let (Some(m), Some(n)) = (f.degree(), g.degree()) else {
        return Int::zero();
    };
    let size = m + n;
    if size == 0 {
        return Int::one();
    }
    let mut rows = vec![vec![Int::zero(); size]; size];
    for i in 0..n {
        for (k, c) in f.coeffs().iter().rev().enumerate() {
            rows[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in g.coeffs().iter().rev().enumerate() {
            rows[n + i][i + k] = c.clone();
        }
    }
    crate::intlat::bareiss_det(rows)
}

/// Discriminant of a polynomial of degree ≥ 1.
pub fn discriminant(f: &IntPolynomial) -> Int {
    let n = f.degree().expect("discriminant of zero polynomial");
    let r = resultant(f, &f.derivative());
    let sign = if (n * (n - 1) / 2) % 2 == 1 { -Int::one() } else { Int::one() };
    sign * r / f.leading().unwrap()
}

/// Positive divisors of a nonzero integer by trial division.
pub(crate) fn divisors(n: &Int) -> Vec<Int> {
    let n = n.abs();
    assert!(!n.is_zero());
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = Int::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// All rational roots of a nonzero integer polynomial, ascending, without multiplicity.
pub fn rational_roots(p: &IntPolynomial) -> Vec<Rat> {
    let mut roots = Vec::new();
    let mut coeffs = p.coeffs().to_vec();
    if coeffs.is_empty() {
        return roots;
    }
    if coeffs[0].is_zero() {
        roots.push(Rat::zero());
        let skip = coeffs.iter().take_while(|c| c.is_zero()).count();
        coeffs.drain(..skip);
    }
    let q = IntPolynomial::new(coeffs);
    if q.degree().unwrap_or(0) == 0 {
        return roots;
    }
    let a0 = q.coeffs()[0].clone();
    let an = q.leading().unwrap().clone();
    let num = divisors(&a0);
    let den = divisors(&an);
    for d in &den {
        for n in &num {
            for s in [1i64, -1] {
                let r = Rat::new(n * Int::from(s), d.clone());
                if r.denom() != d {
                    continue; // reduced form already considered with a smaller denominator
                }
                if q.eval(&r).is_zero() && !roots.contains(&r) {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort();
    roots
}

pub(crate) fn is_perfect_square(n: &Int) -> Option<Int> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Factors a monic integer quartic as a product of two monic integer
/// quadratics when possible, returning `(c0, c1)` pairs for x^2 + c1 x + c0.
pub(crate) fn quartic_quadratic_split(p: &IntPolynomial) -> Option<([Int; 2], [Int; 2])> {
    debug_assert_eq!(p.degree(), Some(4));
    debug_assert!(p.is_monic());
    let c = p.coeffs();
    let (a0, a1, a2, a3) = (&c[0], &c[1], &c[2], &c[3]);
    if a0.is_zero() {
        // x divides p; this is a rational root and handled elsewhere.
        return None;
    }
    // (x^2 + b x + s)(x^2 + d x + t): s t = a0, b + d = a3, s + t + b d = a2, b t + d s = a1.
    for s_abs in divisors(a0) {
        for sign in [1i64, -1] {
            let s = &s_abs * Int::from(sign);
            let t = a0 / &s;
            let check = |b: &Int| -> bool {
                let d = a3 - b;
                (&s + &t + b * &d) == *a2 && (b * &t + &d * &s) == *a1
            };
            if t != s {
                // b (t - s) = a1 - s a3
                let num = a1 - &s * a3;
                let den = &t - &s;
                if (&num % &den).is_zero() {
                    let b = num / den;
                    if check(&b) {
                        let d = a3 - &b;
                        return Some(([s, b], [t, d]));
                    }
                }
            } else {
                // b + d = a3, b d = a2 - 2 s
                let disc = a3 * a3 - Int::from(4) * (a2 - Int::from(2) * &s);
                if let Some(r) = is_perfect_square(&disc) {
                    let twice_b = a3 + &r;
                    if twice_b.is_even() {
                        let b = twice_b / 2;
                        if check(&b) {
                            let d = a3 - &b;
                            return Some(([s.clone(), b], [t, d]));
                        }
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn qp(c: &[i64]) -> QPoly {
        IntPolynomial::from_i64(c).to_rational()
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(IntPolynomial::from_i64(&[14, 0, -8, 0, 1]).to_string(), "x^4 - 8x^2 + 14");
        assert_eq!(IntPolynomial::from_i64(&[-1, 1]).to_string(), "x - 1");
    }

    #[test]
    fn division_and_gcd() {
        let f = qp(&[-1, 0, 1]);
        let g = qp(&[1, 1]);
        let (q, r) = f.div_rem(&g);
        assert_eq!(q, qp(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(f.gcd(&qp(&[1, 2, 1])), qp(&[1, 1]));
    }

    #[test]
    fn inverse_mod_round_trips() {
        let m = qp(&[14, 0, -8, 0, 1]);
        let a = qp(&[1, 1, 1]);
        let inv = a.inverse_mod(&m).unwrap();
        assert_eq!(a.mul(&inv).rem(&m), QPoly::constant(rat(1, 1)));
    }

    #[test]
    fn squarefree_of_double_roots() {
        let f = qp(&[1, 0, -2, 0, 1]);
        let d = f.squarefree_decomposition();
        assert_eq!(d, vec![(qp(&[-1, 0, 1]), 2)]);
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(sturm_count(&IntPolynomial::from_i64(&[14, 0, -8, 0, 1])), 4);
        assert_eq!(sturm_count(&IntPolynomial::from_i64(&[1, 0, 0, 0, 1])), 0);
        assert_eq!(sturm_count(&IntPolynomial::from_i64(&[1, 0, -2, 0, 1])), 2);
    }

    #[test]
    fn discriminants() {
        assert_eq!(discriminant(&IntPolynomial::from_i64(&[-2, 0, 1])), Int::from(8));
        // x^3 - x: roots -1, 0, 1, disc = prod (ri - rj)^2 = 1*4*1 = 4
        assert_eq!(discriminant(&IntPolynomial::from_i64(&[0, -1, 0, 1])), Int::from(4));
    }

    #[test]
    fn rational_root_search() {
        let p = IntPolynomial::from_i64(&[-3, 2, 3, -2]); // -(2x-3)(x^2-1)... check roots
        let r = rational_roots(&p);
        for x in &r {
            assert!(p.eval(x).is_zero());
        }
        assert_eq!(r, vec![rat(-1, 1), rat(1, 1), rat(3, 2)]);
    }

    #[test]
    fn quadratic_split() {
        // (x^2 + x - 1)(x^2 - 3x + 1) = x^4 - 2x^3 - 3x^2 + 4x - 1
        let p = IntPolynomial::from_i64(&[-1, 4, -3, -2, 1]);
        assert!(quartic_quadratic_split(&p).is_some());
        assert!(quartic_quadratic_split(&IntPolynomial::from_i64(&[14, 0, -8, 0, 1])).is_none());
        // x^4 + 1 is irreducible over Q
        assert!(quartic_quadratic_split(&IntPolynomial::from_i64(&[1, 0, 0, 0, 1])).is_none());
        // (x^2+2)^2 = x^4 + 4x^2 + 4: equal constant terms branch
        assert!(quartic_quadratic_split(&IntPolynomial::from_i64(&[4, 0, 4, 0, 1])).is_some());
    }
}
