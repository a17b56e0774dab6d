//! Truncated Laurent series in h over exact rationals: the scalar ring of
//! every quantum-side computation.
//!
//! A series stores finitely many exact coefficients together with the order
//! N through which it is known; coefficients beyond h^N are undetermined and
//! every operation propagates N so that no reported coefficient depends on
//! unknown input. Negative exponents are admitted down to a floor -M, which
//! keeps (q - q^{-1})^{-1} and h^{-k} rescalings representable while making
//! runaway Laurent growth a hard error instead of a silent cost.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub const DEFAULT_ORDER: i32 = 8;
pub const DEFAULT_FLOOR: i32 = 4;

/// Exact rational from small integers.
pub fn rat(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// q = exp(h) at the given truncation order.
pub fn q(order: i32) -> HSeries {
    q_pow(&rat(1, 1), order)
}

/// q^{-1} = exp(-h) at the given truncation order.
pub fn q_inv(order: i32) -> HSeries {
    q_pow(&rat(-1, 1), order)
}

/// q^x = exp(x h) for exact rational x; rational exponents need no ring
/// extension because q is itself an exponential.
pub fn q_pow(x: &Q, order: i32) -> HSeries {
    HSeries::term(x.clone(), 1, order)
        .exp()
        .expect("x*h has valuation >= 1")
}

/// Laurent series in h, canonical (no stored zero coefficient), known
/// exactly through h^order, supported in exponents >= -floor.
#[derive(Clone, Debug)]
pub struct HSeries {
    coeffs: BTreeMap<i32, Q>,
    order: i32,
    floor: i32,
}

impl HSeries {
    fn raw(mut coeffs: BTreeMap<i32, Q>, order: i32, floor: i32) -> Self {
        coeffs.retain(|_, c| !c.is_zero());
        HSeries { coeffs, order, floor }
    }

    pub fn zero(order: i32) -> Self {
        HSeries { coeffs: BTreeMap::new(), order, floor: DEFAULT_FLOOR }
    }

    pub fn one(order: i32) -> Self {
        Self::term(Q::one(), 0, order)
    }

    /// The generator h itself.
    pub fn h(order: i32) -> Self {
        Self::term(Q::one(), 1, order)
    }

    pub fn int(n: i64, order: i32) -> Self {
        Self::term(rat(n, 1), 0, order)
    }

    /// Single term c*h^exp.
    pub fn term(c: Q, exp: i32, order: i32) -> Self {
        Self::from_terms([(exp, c)], order)
    }

    /// Build from (exponent, coefficient) pairs; duplicate exponents add.
    pub fn from_terms<I: IntoIterator<Item = (i32, Q)>>(terms: I, order: i32) -> Self {
        let mut coeffs: BTreeMap<i32, Q> = BTreeMap::new();
        for (k, c) in terms {
            assert!(k <= order, "exponent {k} above truncation order {order}");
            assert!(
                k >= -DEFAULT_FLOOR,
                "exponent {k} below Laurent floor -{DEFAULT_FLOOR}; build with a wider floor"
            );
            *coeffs.entry(k).or_insert_with(Q::zero) += c;
        }
        Self::raw(coeffs, order, DEFAULT_FLOOR)
    }

    /// Widen (or narrow) the Laurent floor. Panics if a stored exponent
    /// already sits below the requested floor.
    pub fn with_floor(mut self, floor: i32) -> Self {
        if let Some(k) = self.coeffs.keys().next() {
            assert!(*k >= -floor, "stored exponent {k} below requested floor -{floor}");
        }
        self.floor = floor;
        self
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn floor(&self) -> i32 {
        self.floor
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Q)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    /// Smallest exponent carrying a nonzero coefficient; None means zero on
    /// the whole known window, i.e. valuation > order.
    pub fn valuation(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    /// Lowest exponent at which this series can be nonzero: the valuation if
    /// one is visible, otherwise order+1.
    pub(crate) fn vlow(&self) -> i32 {
        self.valuation().unwrap_or(self.order + 1)
    }

    pub fn is_zero_on_window(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exact coefficient of h^exp, refusing exponents beyond the window.
    pub fn coeff(&self, exp: i32) -> Result<Q> {
        if exp > self.order {
            return Err(Error::CoefficientUnknown { exponent: exp, order: self.order });
        }
        Ok(self.coeffs.get(&exp).cloned().unwrap_or_else(Q::zero))
    }

    /// Certifies that every coefficient with exponent <= through vanishes;
    /// errors rather than answering when the window is too short.
    pub fn is_zero_to(&self, through: i32) -> Result<bool> {
        if through > self.order {
            return Err(Error::CoefficientUnknown { exponent: through, order: self.order });
        }
        Ok(self.coeffs.keys().all(|k| *k > through))
    }

    pub fn add(&self, other: &HSeries) -> HSeries {
        let order = self.order.min(other.order);
        let floor = self.floor.max(other.floor);
        let mut coeffs = BTreeMap::new();
        for (k, c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            if *k > order {
                continue;
            }
            *coeffs.entry(*k).or_insert_with(Q::zero) += c;
        }
        Self::raw(coeffs, order, floor)
    }

    /// In-place [`HSeries::add`], for accumulation loops that would otherwise
    /// rebuild the coefficient map once per summand.
    pub fn add_assign(&mut self, other: &HSeries) {
        self.order = self.order.min(other.order);
        self.floor = self.floor.max(other.floor);
        for (k, c) in &other.coeffs {
            if *k > self.order {
                continue;
            }
            *self.coeffs.entry(*k).or_insert_with(Q::zero) += c;
        }
        let order = self.order;
        self.coeffs.retain(|k, c| *k <= order && !c.is_zero());
    }

    pub fn sub(&self, other: &HSeries) -> HSeries {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> HSeries {
        HSeries {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c.clone())).collect(),
            order: self.order,
            floor: self.floor,
        }
    }

    /// Product, with order chosen so every reported coefficient is fully
    /// determined: min(order(a)+vlow(b), order(b)+vlow(a)).
    pub fn mul(&self, other: &HSeries) -> HSeries {
        let order = (self.order + other.vlow()).min(other.order + self.vlow());
        let floor = self.floor.max(other.floor);
        let mut coeffs = BTreeMap::new();
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                let k = i + j;
                if k > order {
                    continue;
                }
                assert!(k >= -floor, "h^{k} falls below the Laurent floor -{floor} in mul");
                *coeffs.entry(k).or_insert_with(Q::zero) += a * b;
            }
        }
        Self::raw(coeffs, order, floor)
    }

    pub fn scale(&self, r: &Q) -> HSeries {
        if r.is_zero() {
            let mut z = HSeries::zero(self.order);
            z.floor = self.floor;
            return z;
        }
        HSeries {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, c * r)).collect(),
            order: self.order,
            floor: self.floor,
        }
    }

    /// Multiply by h^k (k may be negative); shifts the window with the value.
    pub fn shift(&self, k: i32) -> Result<HSeries> {
        if k == 0 {
            return Ok(self.clone());
        }
        let mut coeffs = BTreeMap::new();
        for (e, c) in &self.coeffs {
            let ne = e + k;
            if ne < -self.floor {
                return Err(Error::FloorExceeded { exponent: ne, floor: self.floor });
            }
            coeffs.insert(ne, c.clone());
        }
        Ok(HSeries { coeffs, order: self.order + k, floor: self.floor })
    }

    /// Lower the known order (never raises it).
    pub fn truncate(&self, order: i32) -> HSeries {
        let order = order.min(self.order);
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(k, _)| **k <= order)
            .map(|(k, c)| (*k, c.clone()))
            .collect();
        HSeries { coeffs, order, floor: self.floor }
    }

    pub fn pow(&self, k: u32) -> HSeries {
        if k == 0 {
            return HSeries::one(self.order).with_floor(self.floor);
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse; valuation v costs 2v of window and needs the
    /// floor to admit h^{-v}.
    pub fn invert(&self) -> Result<HSeries> {
        let v = self.valuation().ok_or(Error::NonInvertible)?;
        if v > self.floor {
            return Err(Error::FloorExceeded { exponent: -v, floor: self.floor });
        }
        let c0 = self.coeffs[&v].clone();
        if self.coeffs.len() == 1 {
            let coeffs = [(-v, c0.recip())].into_iter().collect();
            return Ok(Self::raw(coeffs, self.order - 2 * v, self.floor));
        }
        let nu = self.order - v;
        let mut w: Vec<Q> = Vec::with_capacity(nu as usize + 1);
        w.push(c0.recip());
        for k in 1..=nu {
            let mut acc = Q::zero();
            for i in 1..=k {
                if let Some(ci) = self.coeffs.get(&(v + i)) {
                    acc += ci * &w[(k - i) as usize];
                }
            }
            w.push(-acc / &c0);
        }
        let coeffs = w
            .into_iter()
            .enumerate()
            .map(|(k, wk)| (k as i32 - v, wk))
            .collect();
        Ok(Self::raw(coeffs, self.order - 2 * v, self.floor))
    }

    /// exp of a series with valuation >= 1, so the sum truncates finitely.
    pub fn exp(&self) -> Result<HSeries> {
        let v = self.vlow();
        if v < 1 {
            return Err(Error::NonNilpotentExp { valuation: v });
        }
        let order = self.order;
        let mut sum = HSeries::one(order).with_floor(self.floor);
        let mut power = HSeries::one(i32::MAX / 2);
        let mut kfact = Q::one();
        for k in 1..=order.max(0) {
            power = power.mul(self).truncate(order);
            if power.is_zero_on_window() {
                break;
            }
            kfact *= rat(k as i64, 1);
            sum = sum.add(&power.scale(&kfact.recip()));
        }
        Ok(sum)
    }

    /// Coefficientwise equality on the overlap of the known windows. Callers
    /// verifying an identity must check separately that the window reaches
    /// the depth their claim needs.
    pub fn agrees(&self, other: &HSeries) -> bool {
        let n = self.order.min(other.order);
        let mut a = self.coeffs.iter().filter(|(k, _)| **k <= n);
        let mut b = other.coeffs.iter().filter(|(k, _)| **k <= n);
        loop {
            match (a.next(), b.next()) {
                (None, None) => return true,
                (Some(x), Some(y)) if x == y => continue,
                _ => return false,
            }
        }
    }
}

/// Structural equality: same coefficients and same known order. The window
/// semantics of the engine live in [`HSeries::agrees`]; this is for frozen
/// expected values in tests and for canonical-form checks.
impl PartialEq for HSeries {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.coeffs == other.coeffs
    }
}

impl Eq for HSeries {}

impl std::ops::Add for &HSeries {
    type Output = HSeries;
    fn add(self, rhs: &HSeries) -> HSeries {
        HSeries::add(self, rhs)
    }
}

impl std::ops::Sub for &HSeries {
    type Output = HSeries;
    fn sub(self, rhs: &HSeries) -> HSeries {
        HSeries::sub(self, rhs)
    }
}

impl std::ops::Mul for &HSeries {
    type Output = HSeries;
    fn mul(self, rhs: &HSeries) -> HSeries {
        HSeries::mul(self, rhs)
    }
}

impl std::ops::Neg for &HSeries {
    type Output = HSeries;
    fn neg(self) -> HSeries {
        HSeries::neg(self)
    }
}

impl fmt::Display for HSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if self.coeffs.is_empty() {
            write!(f, "0")?;
            first = false;
        }
        for (k, c) in &self.coeffs {
            let neg = c.is_negative();
            let mag = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match (*k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "h")?,
                (1, false) => write!(f, "{mag}*h")?,
                (_, true) => write!(f, "h^{k}")?,
                (_, false) => write!(f, "{mag}*h^{k}")?,
            }
        }
        write!(f, " + O(h^{})", self.order + 1)
    }
}

fn parse_rat(s: &str) -> Result<Q> {
    s.parse::<Q>().map_err(|_| Error::Parse { at: s.to_string() })
}

fn parse_term(body: &str) -> Result<(i32, Q)> {
    let (coef, tail) = match body.find('*') {
        Some(i) => (parse_rat(&body[..i])?, &body[i + 1..]),
        None if body.starts_with('h') => (Q::one(), body),
        None => (parse_rat(body)?, ""),
    };
    let exp = if tail.is_empty() {
        0
    } else if tail == "h" {
        1
    } else if let Some(k) = tail.strip_prefix("h^") {
        k.parse().map_err(|_| Error::Parse { at: body.to_string() })?
    } else {
        return Err(Error::Parse { at: body.to_string() });
    };
    Ok((exp, coef))
}

impl FromStr for HSeries {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut rest = s.trim();
        let mut sign = 1i64;
        if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r.trim_start();
        }
        let mut chunks: Vec<(i64, &str)> = Vec::new();
        loop {
            let p = rest.find(" + ");
            let m = rest.find(" - ");
            let (cut, next_sign) = match (p, m) {
                (None, None) => {
                    chunks.push((sign, rest));
                    break;
                }
                (Some(a), None) => (a, 1),
                (None, Some(b)) => (b, -1),
                (Some(a), Some(b)) if a < b => (a, 1),
                (_, Some(b)) => (b, -1),
            };
            chunks.push((sign, &rest[..cut]));
            rest = &rest[cut + 3..];
            sign = next_sign;
        }
        let marker = chunks.pop().ok_or_else(|| Error::Parse { at: s.to_string() })?;
        let next_order: i32 = marker
            .1
            .strip_prefix("O(h^")
            .and_then(|t| t.strip_suffix(')'))
            .and_then(|t| t.parse().ok())
            .filter(|_| marker.0 == 1)
            .ok_or_else(|| Error::Parse { at: marker.1.to_string() })?;
        let order = next_order - 1;
        let mut coeffs: BTreeMap<i32, Q> = BTreeMap::new();
        let mut min_exp = 0i32;
        for (sg, body) in chunks {
            let (exp, coef) = parse_term(body.trim())?;
            if exp > order {
                return Err(Error::Parse { at: body.to_string() });
            }
            min_exp = min_exp.min(exp);
            let signed = if sg < 0 { -coef } else { coef };
            *coeffs.entry(exp).or_insert_with(Q::zero) += signed;
        }
        Ok(Self::raw(coeffs, order, DEFAULT_FLOOR.max(-min_exp)))
    }
}
