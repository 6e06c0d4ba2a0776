//! Real root isolation by Sturm sequences and bisection.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use super::poly::{rational_roots, sturm_sequence, sturm_variations, IntPolynomial, QPoly};
use crate::rational::{Int, Interval, Rat};

/// One real root of an integer polynomial, described by a squarefree
/// defining factor and an isolating interval.
///
/// Rational roots carry a degenerate interval `[r, r]`. Irrational roots carry
/// an interval whose endpoints are not roots and whose defining factor changes
/// sign exactly once inside.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealRoot {
    pub factor: IntPolynomial,
    pub interval: Interval,
    pub multiplicity: u32,
}

impl RealRoot {
    pub fn is_exact(&self) -> bool {
        self.interval.lo == self.interval.hi
    }

    pub fn width(&self) -> Rat {
        self.interval.width()
    }

    fn sign_at(&self, x: &Rat) -> Ordering {
        self.factor.sign_at(x)
    }

    /// One bisection step.
    pub fn bisect(&self) -> RealRoot {
        if self.is_exact() {
            return self.clone();
        }
        let mid = self.interval.midpoint();
        let s_lo = self.sign_at(&self.interval.lo);
        let s_mid = self.sign_at(&mid);
        debug_assert_ne!(s_mid, Ordering::Equal, "rational root inside irrational interval");
        let interval = if s_mid == s_lo {
            Interval::new(mid, self.interval.hi.clone())
        } else {
            Interval::new(self.interval.lo.clone(), mid)
        };
        RealRoot { interval, ..self.clone() }
    }

    /// New root description with interval width at most `eps`.
    pub fn refine_to(&self, eps: &Rat) -> RealRoot {
        let mut r = self.clone();
        while r.width() > *eps {
            r = r.bisect();
        }
        r
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("the zero polynomial has no isolated roots")]
    ZeroPolynomial,
}

/// Cauchy bound: every root has absolute value below the returned integer.
fn cauchy_bound(p: &QPoly) -> Rat {
    let lead = p.leading().unwrap().abs();
    let m = p
        .coeffs()
        .iter()
        .take(p.coeffs().len() - 1)
        .map(|c| c.abs() / &lead)
        .max()
        .unwrap_or_else(Rat::zero);
    (m + Rat::one()).ceil() + Rat::one()
}

/// Isolates the real roots of a squarefree polynomial without rational roots.
fn isolate_irrational(f: &IntPolynomial, multiplicity: u32) -> Vec<RealRoot> {
    let q = f.to_rational();
    let seq = sturm_sequence(&q);
    let b = cauchy_bound(&q);
    let mut out = Vec::new();
    let mut stack = vec![Interval::new(-b.clone(), b)];
    while let Some(iv) = stack.pop() {
        let count = sturm_variations(&seq, &iv.lo) - sturm_variations(&seq, &iv.hi);
        match count {
            0 => {}
            1 => out.push(RealRoot { factor: f.clone(), interval: iv, multiplicity }),
            _ => {
                let mid = iv.midpoint();
                stack.push(Interval::new(iv.lo.clone(), mid.clone()));
                stack.push(Interval::new(mid, iv.hi.clone()));
            }
        }
    }
    out
}

/// Isolating intervals for all distinct real roots of `p`, ascending, with
/// multiplicities taken from the square-free decomposition.
pub fn isolate_roots(p: &IntPolynomial) -> Result<Vec<RealRoot>, RootError> {
    if p.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    let mut roots = Vec::new();
    for (factor, mult) in p.to_rational().squarefree_decomposition() {
        let f = factor.primitive_part();
        let rats = rational_roots(&f);
        let mut rest = f.to_rational();
        for r in &rats {
            roots.push(RealRoot {
                factor: IntPolynomial::new(vec![-r.numer().clone(), r.denom().clone()]),
                interval: Interval::point(r.clone()),
                multiplicity: mult,
            });
            rest = rest.div_rem(&QPoly::new(vec![-r.clone(), Rat::one()])).0;
        }
        if rest.degree().unwrap_or(0) > 0 {
            roots.extend(isolate_irrational(&rest.primitive_part(), mult));
        }
    }
    separate(&mut roots);
    Ok(roots)
}

/// Refines until intervals coming from different factors are pairwise disjoint,
/// then sorts ascending.
fn separate(roots: &mut [RealRoot]) {
    loop {
        roots.sort_by(|a, b| a.interval.lo.cmp(&b.interval.lo));
        let mut changed = false;
        for i in 1..roots.len() {
            if roots[i - 1].interval.overlaps(&roots[i].interval) {
                for k in [i - 1, i] {
                    if !roots[k].is_exact() {
                        roots[k] = roots[k].bisect();
                    }
                }
                changed = true;
            }
        }
        if !changed {
            return;
        }
    }
}

/// Rational approximation helper: root interval refined so that the width
/// is at most 2^-bits.
pub fn refine_bits(root: &RealRoot, bits: u32) -> RealRoot {
    let eps = Rat::new(Int::one(), Int::one() << bits);
    root.refine_to(&eps)
}
