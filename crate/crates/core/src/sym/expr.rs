//! Immutable expression DAG over the four real coordinates.
//!
//! Nodes are reference counted and never mutated, so subtrees are shared
//! freely between expressions and across threads. Construction goes through
//! smart constructors that apply a light normal form: sums and products are
//! flattened, constants folded, like terms collected and like bases merged.
//! No expansion of products of sums is attempted.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::CRational;

/// One of the real coordinates `x1..x4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coordinate(u8);

/// `r^(1/q)` when `r > 0` is a perfect `q`-th power of a rational.
fn exact_root(r: &BigRational, q: &BigInt) -> Option<BigRational> {
    let q = q.to_u32()?;
    if !r.is_positive() {
        return None;
    }
    let n = r.numer().nth_root(q);
    let d = r.denom().nth_root(q);
    (num_traits::pow(n.clone(), q as usize) == *r.numer() && num_traits::pow(d.clone(), q as usize) == *r.denom())
        .then(|| BigRational::new(n, d))
}

impl Coordinate {
    pub const ALL: [Coordinate; 4] = [Coordinate(1), Coordinate(2), Coordinate(3), Coordinate(4)];

    /// `index` is 1-based, matching `x1..x4`.
    pub fn new(index: u8) -> Option<Self> {
        (1..=4).contains(&index).then_some(Coordinate(index))
    }

    pub fn index(self) -> u8 {
        self.0
    }

    /// 0-based slot for array storage.
    pub fn slot(self) -> usize {
        (self.0 - 1) as usize
    }

    pub fn from_slot(slot: usize) -> Self {
        assert!(slot < 4, "coordinate slot out of range: {slot}");
        Coordinate(slot as u8 + 1)
    }

    fn bit(self) -> u8 {
        1 << (self.0 - 1)
    }
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// Node payload. Invariants maintained by the constructors:
///
/// * `Sum` has at least one term, no zero coefficients, and never consists of a
///   single unit-coefficient term with zero constant.
/// * `Product` factors carry non-zero exponents, bases are never products
///   raised to integer powers, and the whole product is not a single factor
///   with exponent one. A non-integer exponent asserts that its base is a
///   positive real number (evaluation checks this).
#[derive(Clone, Debug)]
pub enum Kind {
    Const(CRational),
    Coord(Coordinate),
    Param(Arc<str>),
    Sum {
        constant: CRational,
        terms: Vec<(CRational, Expr)>,
    },
    Product(Vec<(Expr, BigRational)>),
    Exp(Expr),
    Log(Expr),
}

#[derive(Debug)]
pub struct Node {
    kind: Kind,
    hash: u64,
    deps: u8,
    real: bool,
    params: bool,
}

/// Shared handle to an immutable expression node.
#[derive(Clone)]
pub struct Expr(Arc<Node>);

impl Expr {
    fn from_kind(kind: Kind) -> Expr {
        let mut h = DefaultHasher::new();
        let (deps, real, params) = match &kind {
            Kind::Const(c) => {
                0u8.hash(&mut h);
                c.hash(&mut h);
                (0, c.is_real(), false)
            }
            Kind::Coord(c) => {
                1u8.hash(&mut h);
                c.hash(&mut h);
                (c.bit(), true, false)
            }
            Kind::Param(p) => {
                2u8.hash(&mut h);
                p.hash(&mut h);
                (0, true, true)
            }
            Kind::Sum { constant, terms } => {
                3u8.hash(&mut h);
                constant.hash(&mut h);
                let mut deps = 0;
                let mut real = constant.is_real();
                let mut params = false;
                for (c, t) in terms {
                    c.hash(&mut h);
                    t.0.hash.hash(&mut h);
                    deps |= t.0.deps;
                    real &= c.is_real() && t.0.real;
                    params |= t.0.params;
                }
                (deps, real, params)
            }
            Kind::Product(factors) => {
                4u8.hash(&mut h);
                let mut deps = 0;
                let mut real = true;
                let mut params = false;
                for (b, e) in factors {
                    b.0.hash.hash(&mut h);
                    e.hash(&mut h);
                    deps |= b.0.deps;
                    real &= b.0.real;
                    params |= b.0.params;
                }
                (deps, real, params)
            }
            Kind::Exp(a) => {
                5u8.hash(&mut h);
                a.0.hash.hash(&mut h);
                (a.0.deps, a.0.real, a.0.params)
            }
            Kind::Log(a) => {
                6u8.hash(&mut h);
                a.0.hash.hash(&mut h);
                (a.0.deps, a.0.real, a.0.params)
            }
        };
        Expr(Arc::new(Node {
            kind,
            hash: h.finish(),
            deps,
            real,
            params,
        }))
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    /// Stable pointer identity, used as a memoization key.
    pub(crate) fn id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn ptr_eq(&self, other: &Expr) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn structural_hash(&self) -> u64 {
        self.0.hash
    }

    /// True if the expression mentions coordinate `c`.
    pub fn depends_on(&self, c: Coordinate) -> bool {
        self.0.deps & c.bit() != 0
    }

    pub fn is_constant_in_coordinates(&self) -> bool {
        self.0.deps == 0
    }

    /// Structurally real: no imaginary constants anywhere in the tree.
    pub fn is_real(&self) -> bool {
        self.0.real
    }

    pub fn has_params(&self) -> bool {
        self.0.params
    }

    pub fn as_const(&self) -> Option<&CRational> {
        match &self.0.kind {
            Kind::Const(c) => Some(c),
            _ => None,
        }
    }

    /// Literal zero after normalization.
    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(CRational::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_const().is_some_and(CRational::is_one)
    }

    // ---- leaves --------------------------------------------------------

    pub fn constant(c: CRational) -> Expr {
        Expr::from_kind(Kind::Const(c))
    }

    pub fn zero() -> Expr {
        Expr::constant(CRational::zero())
    }

    pub fn one() -> Expr {
        Expr::constant(CRational::one())
    }

    pub fn int(n: i64) -> Expr {
        Expr::constant(CRational::int(n))
    }

    pub fn ratio(num: i64, den: i64) -> Expr {
        Expr::constant(CRational::ratio(num, den))
    }

    pub fn imag_unit() -> Expr {
        Expr::constant(CRational::i())
    }

    pub fn coord(c: Coordinate) -> Expr {
        Expr::from_kind(Kind::Coord(c))
    }

    /// `x{index}` for a 1-based index.
    pub fn x(index: u8) -> Expr {
        Expr::coord(Coordinate::new(index).expect("coordinate index in 1..=4"))
    }

    pub fn param(name: &str) -> Expr {
        Expr::from_kind(Kind::Param(Arc::from(name)))
    }

    // ---- compound constructors ----------------------------------------

    pub fn sum<I: IntoIterator<Item = Expr>>(items: I) -> Expr {
        let mut acc = SumBuilder::default();
        for e in items {
            acc.push(CRational::one(), &e);
        }
        acc.finish()
    }

    pub fn product<I: IntoIterator<Item = Expr>>(items: I) -> Expr {
        let mut acc = ProductBuilder::default();
        for e in items {
            acc.push(&e, &BigRational::one());
        }
        acc.finish()
    }

    pub fn scale(&self, c: &CRational) -> Expr {
        let mut acc = SumBuilder::default();
        acc.push(c.clone(), self);
        acc.finish()
    }

    pub fn pow(&self, exponent: BigRational) -> Expr {
        if exponent.is_zero() {
            return Expr::one();
        }
        if exponent.is_one() {
            return self.clone();
        }
        let integer = exponent.is_integer();
        match &self.0.kind {
            Kind::Const(c) if integer => match c.powi(exponent.numer()) {
                Some(v) => return Expr::constant(v),
                None => {
                    // 0^-k: keep symbolic so evaluation reports it
                    return Expr::from_kind(Kind::Product(vec![(self.clone(), exponent)]));
                }
            },
            Kind::Const(c) if c.is_positive_real() => {
                if let Some(root) = exact_root(&c.re, exponent.denom()) {
                    return Expr::constant(CRational::real(root))
                        .pow(BigRational::from_integer(exponent.numer().clone()));
                }
            }
            Kind::Product(factors) => {
                let guarded = factors.iter().all(|(_, e)| !e.is_integer());
                if integer || guarded {
                    let mut acc = ProductBuilder::default();
                    for (b, e) in factors {
                        acc.push(b, &(e * &exponent));
                    }
                    return acc.finish();
                }
            }
            Kind::Sum { constant, terms } if integer && constant.is_zero() && terms.len() == 1 => {
                let (c, t) = &terms[0];
                if let Some(cp) = c.powi(exponent.numer()) {
                    return t.pow(exponent).scale(&cp);
                }
            }
            Kind::Sum { constant, terms }
                if constant.is_zero() && terms.len() == 1 && terms[0].0.is_positive_real() =>
            {
                // (c·t)^r with c > 0 rational: pull c out as its own guarded factor
                let (c, t) = &terms[0];
                return Expr::product([Expr::constant(c.clone()).pow(exponent.clone()), t.pow(exponent)]);
            }
            _ => {}
        }
        let mut acc = ProductBuilder::default();
        acc.push(self, &exponent);
        acc.finish()
    }

    pub fn powi(&self, k: i64) -> Expr {
        self.pow(BigRational::from_integer(BigInt::from(k)))
    }

    /// `self^(num/den)`; non-integer exponents assume a positive real base.
    pub fn pow_ratio(&self, num: i64, den: i64) -> Expr {
        self.pow(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn sqrt(&self) -> Expr {
        self.pow_ratio(1, 2)
    }

    pub fn recip(&self) -> Expr {
        self.powi(-1)
    }

    pub fn exp(&self) -> Expr {
        match &self.0.kind {
            Kind::Const(c) if c.is_zero() => return Expr::one(),
            Kind::Log(inner) => return inner.clone(),
            Kind::Sum { constant, terms } if constant.is_zero() && terms.len() == 1 => {
                let (c, t) = &terms[0];
                if let (true, Kind::Log(inner)) = (c.is_real(), &t.0.kind) {
                    return inner.pow(c.re.clone());
                }
            }
            _ => {}
        }
        Expr::from_kind(Kind::Exp(self.clone()))
    }

    pub fn log(&self) -> Expr {
        match &self.0.kind {
            Kind::Const(c) if c.is_one() => return Expr::zero(),
            Kind::Exp(inner) if inner.is_real() => return inner.clone(),
            _ => {}
        }
        Expr::from_kind(Kind::Log(self.clone()))
    }

    /// Complex conjugate. Real subtrees are returned unchanged (same node).
    pub fn conj(&self) -> Expr {
        let mut memo = HashMap::new();
        self.conj_memo(&mut memo)
    }

    fn conj_memo(&self, memo: &mut HashMap<usize, Expr>) -> Expr {
        if self.0.real {
            return self.clone();
        }
        if let Some(hit) = memo.get(&self.id()) {
            return hit.clone();
        }
        let out = match &self.0.kind {
            Kind::Const(c) => Expr::constant(c.conj()),
            Kind::Coord(_) | Kind::Param(_) => self.clone(),
            Kind::Sum { constant, terms } => {
                let mut acc = SumBuilder {
                    constant: constant.conj(),
                    ..SumBuilder::default()
                };
                for (c, t) in terms {
                    acc.push(c.conj(), &t.conj_memo(memo));
                }
                acc.finish()
            }
            Kind::Product(factors) => {
                let mut acc = ProductBuilder::default();
                for (b, e) in factors {
                    acc.push(&b.conj_memo(memo), e);
                }
                acc.finish()
            }
            Kind::Exp(a) => a.conj_memo(memo).exp(),
            Kind::Log(a) => a.conj_memo(memo).log(),
        };
        memo.insert(self.id(), out.clone());
        out
    }

    /// `(self + conj(self)) / 2`
    pub fn re(&self) -> Expr {
        if self.is_real() {
            return self.clone();
        }
        (self + &self.conj()).scale(&CRational::ratio(1, 2))
    }

    /// `(self - conj(self)) / (2i)`
    pub fn im(&self) -> Expr {
        if self.is_real() {
            return Expr::zero();
        }
        (self - &self.conj()).scale(&CRational::new(
            BigRational::zero(),
            BigRational::new((-1).into(), 2.into()),
        ))
    }

    /// Number of distinct nodes reachable from this one.
    pub fn dag_size(&self) -> usize {
        fn walk(e: &Expr, seen: &mut std::collections::HashSet<usize>) {
            if !seen.insert(e.id()) {
                return;
            }
            for child in e.children() {
                walk(child, seen);
            }
        }
        let mut seen = std::collections::HashSet::new();
        walk(self, &mut seen);
        seen.len()
    }

    pub(crate) fn children(&self) -> Vec<&Expr> {
        match &self.0.kind {
            Kind::Const(_) | Kind::Coord(_) | Kind::Param(_) => Vec::new(),
            Kind::Sum { terms, .. } => terms.iter().map(|(_, t)| t).collect(),
            Kind::Product(fs) => fs.iter().map(|(b, _)| b).collect(),
            Kind::Exp(a) | Kind::Log(a) => vec![a],
        }
    }

    fn rank(&self) -> u8 {
        match &self.0.kind {
            Kind::Const(_) => 0,
            Kind::Coord(_) => 1,
            Kind::Param(_) => 2,
            Kind::Product(_) => 3,
            Kind::Exp(_) => 4,
            Kind::Log(_) => 5,
            Kind::Sum { .. } => 6,
        }
    }

    fn order_key(&self) -> (u8, u64) {
        let fine = match &self.0.kind {
            Kind::Coord(c) => c.index() as u64,
            _ => self.0.hash,
        };
        (self.rank(), fine)
    }
}

impl PartialEq for Expr {
    fn eq(&self, other: &Expr) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        if self.0.hash != other.0.hash {
            return false;
        }
        match (&self.0.kind, &other.0.kind) {
            (Kind::Const(a), Kind::Const(b)) => a == b,
            (Kind::Coord(a), Kind::Coord(b)) => a == b,
            (Kind::Param(a), Kind::Param(b)) => a == b,
            (
                Kind::Sum {
                    constant: ca,
                    terms: ta,
                },
                Kind::Sum {
                    constant: cb,
                    terms: tb,
                },
            ) => ca == cb && ta == tb,
            (Kind::Product(a), Kind::Product(b)) => a == b,
            (Kind::Exp(a), Kind::Exp(b)) | (Kind::Log(a), Kind::Log(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Expr {}

impl Hash for Expr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash.hash(state);
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

// ---- normal-form builders -------------------------------------------------

#[derive(Default)]
struct SumBuilder {
    constant: CRational,
    terms: Vec<(CRational, Expr)>,
    index: HashMap<Expr, usize>,
}

impl SumBuilder {
    fn push(&mut self, coeff: CRational, e: &Expr) {
        if coeff.is_zero() {
            return;
        }
        match &e.0.kind {
            Kind::Const(c) => self.constant = &self.constant + &(&coeff * c),
            Kind::Sum { constant, terms } => {
                self.constant = &self.constant + &(&coeff * constant);
                for (c, t) in terms {
                    self.push_term(&coeff * c, t);
                }
            }
            _ => self.push_term(coeff, e),
        }
    }

    fn push_term(&mut self, coeff: CRational, t: &Expr) {
        match self.index.get(t) {
            Some(&i) => {
                let c = &self.terms[i].0 + &coeff;
                self.terms[i].0 = c;
            }
            None => {
                self.index.insert(t.clone(), self.terms.len());
                self.terms.push((coeff, t.clone()));
            }
        }
    }

    fn finish(self) -> Expr {
        let mut terms: Vec<(CRational, Expr)> = self.terms.into_iter().filter(|(c, _)| !c.is_zero()).collect();
        if terms.is_empty() {
            return Expr::constant(self.constant);
        }
        if self.constant.is_zero() && terms.len() == 1 && terms[0].0.is_one() {
            return terms.pop().unwrap().1;
        }
        terms.sort_by_key(|(_, t)| t.order_key());
        Expr::from_kind(Kind::Sum {
            constant: self.constant,
            terms,
        })
    }
}

struct ProductBuilder {
    coeff: CRational,
    factors: Vec<(Expr, BigRational)>,
    index: HashMap<Expr, usize>,
    /// arguments of `exp` factors raised to integer powers, merged as `exp(Σ)`
    exp_args: Vec<Expr>,
}

impl Default for ProductBuilder {
    fn default() -> Self {
        ProductBuilder {
            coeff: CRational::one(),
            factors: Vec::new(),
            index: HashMap::new(),
            exp_args: Vec::new(),
        }
    }
}

impl ProductBuilder {
    fn push(&mut self, e: &Expr, exponent: &BigRational) {
        if exponent.is_zero() {
            return;
        }
        let integer = exponent.is_integer();
        match &e.0.kind {
            Kind::Const(c) if integer => match c.powi(exponent.numer()) {
                Some(v) => self.coeff = &self.coeff * &v,
                None => self.push_factor(e, exponent),
            },
            Kind::Const(c) if c.is_positive_real() => {
                // c^(p/q): split off the integer part so c^(1/2)·c^(1/2) folds
                let floor = exponent.floor();
                let frac = exponent - &floor;
                let whole = c.powi(floor.numer()).expect("positive base");
                self.coeff = &self.coeff * &whole;
                self.push_factor(e, &frac);
            }
            Kind::Sum { constant, terms } if integer && constant.is_zero() && terms.len() == 1 => {
                let (c, t) = &terms[0];
                match c.powi(exponent.numer()) {
                    Some(v) => {
                        self.coeff = &self.coeff * &v;
                        self.push(t, exponent);
                    }
                    None => self.push_factor(e, exponent),
                }
            }
            Kind::Exp(arg) if integer => self.exp_args.push(arg.scale(&CRational::real(exponent.clone()))),
            Kind::Product(factors) if integer || factors.iter().all(|(_, fe)| !fe.is_integer()) => {
                for (b, fe) in factors {
                    self.push(b, &(fe * exponent));
                }
            }
            _ => self.push_factor(e, exponent),
        }
    }

    fn push_factor(&mut self, base: &Expr, exponent: &BigRational) {
        if exponent.is_zero() {
            return;
        }
        match self.index.get(base) {
            Some(&i) => {
                let e = &self.factors[i].1 + exponent;
                self.factors[i].1 = e;
            }
            None => {
                self.index.insert(base.clone(), self.factors.len());
                self.factors.push((base.clone(), exponent.clone()));
            }
        }
    }

    fn finish(mut self) -> Expr {
        if self.coeff.is_zero() {
            return Expr::zero();
        }
        if !self.exp_args.is_empty() {
            let merged = Expr::sum(std::mem::take(&mut self.exp_args)).exp();
            match &merged.0.kind {
                Kind::Const(c) => self.coeff = &self.coeff * c,
                _ => self.push_factor(&merged, &BigRational::one()),
            }
        }
        let mut coeff = self.coeff;
        let mut factors: Vec<(Expr, BigRational)> = Vec::with_capacity(self.factors.len());
        for (b, e) in self.factors {
            if e.is_zero() {
                continue;
            }
            // merged constant bases may have reached an integer exponent again
            if let Kind::Const(c) = &b.0.kind {
                if c.is_positive_real() {
                    let floor = e.floor();
                    coeff = &coeff * &c.powi(floor.numer()).expect("positive base");
                    let frac = &e - &floor;
                    if !frac.is_zero() {
                        factors.push((b, frac));
                    }
                    continue;
                }
                if e.is_integer() {
                    if let Some(v) = c.powi(e.numer()) {
                        coeff = &coeff * &v;
                        continue;
                    }
                }
            }
            factors.push((b, e));
        }
        let body = match factors.len() {
            0 => return Expr::constant(coeff),
            1 if factors[0].1.is_one() => factors.pop().unwrap().0,
            _ => {
                factors.sort_by_key(|(b, _)| b.order_key());
                Expr::from_kind(Kind::Product(factors))
            }
        };
        if coeff.is_one() {
            body
        } else {
            let mut acc = SumBuilder::default();
            acc.push(coeff, &body);
            acc.finish()
        }
    }
}

// ---- operators --------------------------------------------------------------

impl Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        Expr::sum([self.clone(), rhs.clone()])
    }
}

impl Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        let mut acc = SumBuilder::default();
        acc.push(CRational::one(), self);
        acc.push(CRational::int(-1), rhs);
        acc.finish()
    }
}

impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        if let Some(c) = self.as_const() {
            return rhs.scale(c);
        }
        if let Some(c) = rhs.as_const() {
            return self.scale(c);
        }
        Expr::product([self.clone(), rhs.clone()])
    }
}

impl Div for &Expr {
    type Output = Expr;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Expr) -> Expr {
        if let Some(c) = rhs.as_const() {
            if let Some(inv) = c.recip() {
                return self.scale(&inv);
            }
        }
        self * &rhs.recip()
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        self.scale(&CRational::int(-1))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                (&self).$m(rhs)
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::int(n)
    }
}

impl From<CRational> for Expr {
    fn from(c: CRational) -> Expr {
        Expr::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u8) -> Expr {
        Expr::x(i)
    }

    #[test]
    fn like_terms_cancel() {
        let e = &(&x(1) + &x(2)) - &x(1);
        assert_eq!(e, x(2));
        assert!((&x(3) - &x(3)).is_zero());
    }

    #[test]
    fn constants_fold_and_scale_distributes() {
        let e = Expr::int(2) * (&x(1) + &Expr::int(3));
        match e.kind() {
            Kind::Sum { constant, terms } => {
                assert_eq!(*constant, CRational::int(6));
                assert_eq!(terms.len(), 1);
                assert_eq!(terms[0].0, CRational::int(2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn like_bases_merge() {
        let e = &x(1) * &x(1);
        match e.kind() {
            Kind::Product(f) => assert_eq!(f[0].1, BigRational::from_integer(2.into())),
            other => panic!("unexpected {other:?}"),
        }
        let s = x(1).sqrt();
        assert_eq!(&s * &s, x(1));
        assert!((&x(2) / &x(2)).is_one());
    }

    #[test]
    fn surd_constants_fold() {
        let r2 = Expr::int(2).sqrt();
        assert_eq!(&r2 * &r2, Expr::int(2));
        let q = Expr::int(2).pow_ratio(-1, 2);
        assert_eq!((&q * &r2).as_const(), Some(&CRational::one()));
    }

    #[test]
    fn exp_log_fold() {
        assert!(Expr::zero().exp().is_one());
        assert!(Expr::one().log().is_zero());
        let u = &x(1) + &Expr::int(1);
        assert_eq!(u.log().exp(), u);
        assert_eq!((-&u.log()).exp(), u.recip());
    }

    #[test]
    fn conj_of_real_is_identity_node() {
        let e = &x(1) * &x(2).exp();
        assert!(e.conj().ptr_eq(&e));
        let z = &x(1) + &(&Expr::imag_unit() * &x(2));
        let zb = z.conj();
        assert_eq!(zb, &x(1) - &(&Expr::imag_unit() * &x(2)));
        assert_eq!(zb.conj(), z);
    }

    #[test]
    fn dependency_tracking() {
        let e = (&x(1) * &x(3)).exp();
        assert!(e.depends_on(Coordinate::new(1).unwrap()));
        assert!(!e.depends_on(Coordinate::new(2).unwrap()));
        assert!(Expr::param("phi").is_constant_in_coordinates());
    }
}
