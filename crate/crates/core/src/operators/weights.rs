use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use num_traits::{One, Signed, Zero};

use crate::certify::{Certificate, Relation};
use crate::scalars::{parse_rational, Rational, Scalar};

use super::WeightError;

/// Working precision for reciprocal bounds of irrational moduli.
pub const TAIL_BITS: u32 = 64;
const MAX_TAIL_BITS: u32 = 8192;

/// How a finite weight table continues past its last entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TailRule {
    /// `w_{L+j} = w_L · r^j`, with `|r| > 1`.
    Geometric(Scalar),
    /// The last entry repeats; the user asserts `Σ_{k≥N} |w_k|^-1 ≤ bound`
    /// for every `N`. The certifier checks the assertion on prefixes.
    Claimed(Rational),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightKind {
    /// `w_k = λ^k` with `|λ| > 1`.
    Exponential { base: Scalar },
    /// Explicit prefix plus an optional tail rule. Without a rule the last
    /// entry repeats and no reciprocal tail bound is available.
    Table {
        values: Vec<Scalar>,
        tail: Option<TailRule>,
    },
}

/// The weights `(w_k)_{k≥1}` of a backward shift.
///
/// Prefix products `w_1 ⋯ w_n` of table weights are memoized behind a lock so
/// a sequence can be shared between threads.
#[derive(Debug)]
pub struct WeightSequence {
    kind: WeightKind,
    prefix: RwLock<Vec<Scalar>>,
}

impl Clone for WeightSequence {
    fn clone(&self) -> Self {
        WeightSequence::from_kind(self.kind.clone())
    }
}

impl PartialEq for WeightSequence {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

fn reciprocal_upper(w: &Scalar, bits: u32) -> Rational {
    w.reciprocal_modulus_upper(bits)
}

/// Lower bound on `|z|` that exceeds 1; `None` when `|z| ≤ 1`.
fn modulus_lower_above_one(z: &Scalar, bits: u32) -> Option<Rational> {
    if z.modulus_squared() <= Rational::one() {
        return None;
    }
    let mut b = bits;
    loop {
        let lo = z.modulus_interval(b).lo;
        if lo > Rational::one() {
            return Some(lo);
        }
        b *= 2;
    }
}

/// `lb^-n / (1 - 1/lb)`, the geometric tail `Σ_{j≥0} lb^-(n+j)`.
fn geometric_tail(lb: &Rational, first_power: u64) -> Rational {
    // With lb = p/q > 1 in lowest terms this is q^n / (p^(n-1) (p - q)), and
    // gcd(q, p) = gcd(q, p - q) = 1 keeps it in lowest terms.
    let (p, q) = (lb.numer(), lb.denom());
    debug_assert!(p > q, "geometric tail needs lb > 1");
    let n = usize::try_from(first_power).expect("tail index fits usize");
    if n == 0 {
        return Rational::new_raw(p.clone(), p - q);
    }
    Rational::new_raw(num_traits::pow(q.clone(), n), num_traits::pow(p.clone(), n - 1) * (p - q))
}

impl WeightSequence {
    fn from_kind(kind: WeightKind) -> Self {
        WeightSequence {
            kind,
            prefix: RwLock::new(vec![Scalar::one()]),
        }
    }

    /// `w_k = λ^k`; rejects `|λ| ≤ 1`.
    pub fn exponential(base: Scalar) -> Result<Self, WeightError> {
        if base.modulus_squared() <= Rational::one() {
            return Err(WeightError::BaseNotAboveOne(base.to_string()));
        }
        Ok(WeightSequence::from_kind(WeightKind::Exponential { base }))
    }

    pub fn table(values: Vec<Scalar>, tail: Option<TailRule>) -> Result<Self, WeightError> {
        if values.is_empty() {
            return Err(WeightError::EmptyTable);
        }
        if let Some(k) = values.iter().position(Scalar::is_zero) {
            return Err(WeightError::ZeroWeight(k + 1));
        }
        match &tail {
            Some(TailRule::Geometric(r)) if r.modulus_squared() <= Rational::one() => {
                return Err(WeightError::RatioNotAboveOne(r.to_string()));
            }
            Some(TailRule::Claimed(b)) if b.is_negative() => {
                return Err(WeightError::NegativeClaim(b.to_string()));
            }
            _ => {}
        }
        Ok(WeightSequence::from_kind(WeightKind::Table { values, tail }))
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    /// Whether monotonicity and summability hold for every index by
    /// construction (exponential weights with `|λ| > 1`).
    pub fn algebraic(&self) -> bool {
        matches!(self.kind, WeightKind::Exponential { .. })
    }

    /// The exact weight `w_k`, `k ≥ 1`.
    pub fn weight(&self, k: usize) -> Scalar {
        assert!(k >= 1, "weights are indexed from 1");
        match &self.kind {
            WeightKind::Exponential { base } => base.pow(k as u64),
            WeightKind::Table { values, tail } => {
                if k <= values.len() {
                    return values[k - 1].clone();
                }
                let last = values.last().expect("nonempty table");
                match tail {
                    Some(TailRule::Geometric(r)) => last * &r.pow((k - values.len()) as u64),
                    _ => last.clone(),
                }
            }
        }
    }

    /// `w_1 ⋯ w_n`.
    pub fn prefix_product(&self, n: usize) -> Scalar {
        if let WeightKind::Exponential { base } = &self.kind {
            let n = n as u64;
            return base.pow(n * (n + 1) / 2);
        }
        {
            let cache = self.prefix.read().expect("prefix cache poisoned");
            if let Some(p) = cache.get(n) {
                return p.clone();
            }
        }
        let mut cache = self.prefix.write().expect("prefix cache poisoned");
        while cache.len() <= n {
            let k = cache.len();
            let next = cache[k - 1].clone() * self.weight(k);
            cache.push(next);
        }
        cache[n].clone()
    }

    /// `Π_{j=k}^{k+n-1} w_j`; the empty product (`n = 0`) is 1.
    pub fn weight_product(&self, k: usize, n: usize) -> Scalar {
        assert!(k >= 1, "weights are indexed from 1");
        if n == 0 {
            return Scalar::one();
        }
        match &self.kind {
            WeightKind::Exponential { base } => {
                let (k, n) = (k as u64, n as u64);
                base.pow(n * (2 * k + n - 1) / 2)
            }
            WeightKind::Table { .. } => {
                let upper = self.prefix_product(k + n - 1);
                if k == 1 {
                    return upper;
                }
                upper
                    .checked_div(&self.prefix_product(k - 1))
                    .expect("weights are nonzero")
            }
        }
    }

    /// Rational upper bound on `|w_k|^-1`, exact when `|w_k|` is rational.
    pub fn reciprocal_modulus_upper(&self, k: usize) -> Rational {
        reciprocal_upper(&self.weight(k), TAIL_BITS)
    }

    /// `T(N) ≥ Σ_{k≥N} |w_k|^-1`, nonincreasing in `N`.
    pub fn reciprocal_tail(&self, n: usize) -> Result<Rational, WeightError> {
        self.reciprocal_tail_at(n, TAIL_BITS)
    }

    /// [`reciprocal_tail`](Self::reciprocal_tail) with irrational moduli
    /// bracketed at `bits` of precision.
    pub fn reciprocal_tail_at(&self, n: usize, bits: u32) -> Result<Rational, WeightError> {
        assert!(n >= 1, "weights are indexed from 1");
        match &self.kind {
            WeightKind::Exponential { base } => {
                let lb = modulus_lower_above_one(base, bits).expect("checked at construction");
                Ok(geometric_tail(&lb, n as u64))
            }
            WeightKind::Table { values, tail } => match tail {
                None => Err(WeightError::TailNotComputable),
                Some(TailRule::Claimed(bound)) => Ok(bound.clone()),
                Some(TailRule::Geometric(r)) => {
                    let len = values.len();
                    let lb = modulus_lower_above_one(r, bits).expect("checked at construction");
                    let start = n.max(len + 1);
                    // Σ_{j≥0} |w_start|^-1 |r|^-j
                    let mut t = reciprocal_upper(&self.weight(start), bits) * geometric_tail(&lb, 0);
                    for k in n..start {
                        t += reciprocal_upper(&self.weight(k), bits);
                    }
                    Ok(t)
                }
            },
        }
    }

    /// Certifies monotonicity `1 ≤ |w_1| ≤ … ≤ |w_K|` exactly through squared
    /// moduli, and summability by checking `Σ_{k=N}^{K} |w_k|^-1 ≤ T(N)` with
    /// upper bounds on every reciprocal, for each `N ≤ K`.
    pub fn check_conditions(&self, prefix_len: usize) -> WeightConditions {
        assert!(prefix_len >= 2, "weight certification needs K >= 2");
        let squares: Vec<Rational> = (1..=prefix_len)
            .map(|k| self.weight(k).modulus_squared())
            .collect();

        let mut monotone = Vec::with_capacity(prefix_len);
        monotone.push(
            Certificate::compare(
                "weights.monotone[0]",
                "1 <= |w_1|^2",
                Rational::one(),
                Relation::Le,
                &squares[0],
            )
            .with("k", 1),
        );
        for k in 1..prefix_len {
            monotone.push(
                Certificate::compare(
                    format!("weights.monotone[{k}]"),
                    format!("|w_{k}|^2 <= |w_{}|^2", k + 1),
                    &squares[k - 1],
                    Relation::Le,
                    &squares[k],
                )
                .with("k", k),
            );
        }

        let summable = self.summability_certificates(prefix_len);

        let violation = if let Some(c) = monotone.iter().find(|c| !c.passed()) {
            let k: usize = c.context["k"].parse().expect("k recorded");
            Some(if k == 1 && squares[0] < Rational::one() {
                WeightViolation::BelowOne
            } else {
                WeightViolation::NotMonotone { k }
            })
        } else {
            summable.iter().find(|c| !c.passed()).map(|c| match c.context.get("N") {
                Some(n) => WeightViolation::TailExceeded { n: n.parse().expect("N recorded") },
                None => WeightViolation::TailUnavailable(c.rhs.clone()),
            })
        };

        WeightConditions {
            prefix_len,
            algebraic: self.algebraic(),
            monotone,
            summable,
            violation,
        }
    }

    fn summability_certificates(&self, prefix_len: usize) -> Vec<Certificate> {
        let mut bits = TAIL_BITS;
        loop {
            let mut exact = true;
            let ub: Vec<Rational> = (1..=prefix_len)
                .map(|k| {
                    let w = self.weight(k);
                    exact &= w.modulus_interval(bits).is_point();
                    reciprocal_upper(&w, bits)
                })
                .collect();
            let mut suffix = vec![Rational::zero(); prefix_len + 2];
            for k in (1..=prefix_len).rev() {
                suffix[k] = &suffix[k + 1] + &ub[k - 1];
            }
            let mut certs = Vec::with_capacity(prefix_len);
            for n in 1..=prefix_len {
                match self.reciprocal_tail_at(n, bits) {
                    Ok(t) => certs.push(
                        Certificate::compare(
                            format!("weights.summable[{n}]"),
                            format!("sum_{{k={n}}}^{{{prefix_len}}} 1/|w_k| <= T({n})"),
                            &suffix[n],
                            Relation::Le,
                            t,
                        )
                        .with("N", n)
                        .with("bits", bits),
                    ),
                    Err(e) => {
                        return vec![Certificate::error(
                            "weights.summable",
                            "reciprocal tail bound T(N) is available",
                            e,
                        )]
                    }
                }
            }
            let all_pass = certs.iter().all(Certificate::passed);
            // inexact moduli may need a finer bracket to expose the margin
            if all_pass || exact || bits >= MAX_TAIL_BITS {
                return certs;
            }
            bits *= 2;
        }
    }
}

/// First failure found by [`WeightSequence::check_conditions`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightViolation {
    BelowOne,
    NotMonotone { k: usize },
    TailExceeded { n: usize },
    TailUnavailable(String),
}

impl fmt::Display for WeightViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightViolation::BelowOne => write!(f, "|w_1| < 1"),
            WeightViolation::NotMonotone { k } => write!(f, "|w_{k}| > |w_{}|", k + 1),
            WeightViolation::TailExceeded { n } => write!(f, "partial reciprocal sum from N={n} exceeds T({n})"),
            WeightViolation::TailUnavailable(msg) => write!(f, "no tail bound: {msg}"),
        }
    }
}

/// Outcome of prefix certification of the weight conditions.
#[derive(Debug, Clone)]
pub struct WeightConditions {
    pub prefix_len: usize,
    /// Exponential weights satisfy both conditions for all indices by construction.
    pub algebraic: bool,
    pub monotone: Vec<Certificate>,
    pub summable: Vec<Certificate>,
    pub violation: Option<WeightViolation>,
}

impl WeightConditions {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }

    pub fn certificates(&self) -> impl Iterator<Item = &Certificate> {
        self.monotone.iter().chain(&self.summable)
    }
}

impl fmt::Display for TailRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TailRule::Geometric(r) => write!(f, "geometric:{r}"),
            TailRule::Claimed(b) => write!(f, "claim:{b}"),
        }
    }
}

impl fmt::Display for WeightSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            WeightKind::Exponential { base } => write!(f, "exp:{base}"),
            WeightKind::Table { values, tail } => {
                let list: Vec<String> = values.iter().map(Scalar::to_string).collect();
                write!(f, "table:[{}]", list.join(","))?;
                if let Some(t) = tail {
                    write!(f, ";tail={t}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for WeightSequence {
    type Err = WeightError;

    /// `exp:<λ>`, `table:[w1,w2,...]`, optionally followed by
    /// `;tail=geometric:<r>` or `;tail=claim:<T>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: String| WeightError::Parse {
            input: s.to_string(),
            reason,
        };
        let t = s.trim();
        if let Some(base) = t.strip_prefix("exp:") {
            let base: Scalar = base.parse().map_err(|e| err(format!("{e}")))?;
            return WeightSequence::exponential(base);
        }
        let Some(rest) = t.strip_prefix("table:") else {
            return Err(err("expected exp:<base> or table:[...]".into()));
        };
        let (list, tail) = match rest.split_once(';') {
            Some((l, tail)) => (l, Some(tail)),
            None => (rest, None),
        };
        let inner = list
            .trim()
            .strip_prefix('[')
            .and_then(|l| l.strip_suffix(']'))
            .ok_or_else(|| err("table values must be bracketed".into()))?;
        let values = inner
            .split(',')
            .map(str::trim)
            .filter(|v| !v.is_empty())
            .map(|v| v.parse::<Scalar>().map_err(|e| err(format!("{e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let tail = match tail.map(str::trim) {
            None => None,
            Some(tail) => {
                let rule = tail
                    .strip_prefix("tail=")
                    .ok_or_else(|| err(format!("unknown table option `{tail}`")))?;
                if let Some(r) = rule.strip_prefix("geometric:") {
                    Some(TailRule::Geometric(r.parse().map_err(|e| err(format!("{e}")))?))
                } else if let Some(b) = rule.strip_prefix("claim:") {
                    Some(TailRule::Claimed(parse_rational(b).map_err(|e| err(format!("{e}")))?))
                } else {
                    return Err(err(format!("unknown tail rule `{rule}`")));
                }
            }
        };
        WeightSequence::table(values, tail)
    }
}
