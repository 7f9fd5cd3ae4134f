//! Exact rational functions in `x` and the weight-enumerator solve.
//!
//! Every vertex `[w1, w2]` of a finished tree gets an unknown `z[w1, w2]`:
//!
//! * internal: `z = z[left] + z[right]`, plus `x^(len w1 + len w2)` when
//!   `w1·w2` is itself good;
//! * empty leaf: `z = 0`;
//! * clone leaf: `z = x^delta · z[target]`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::discovery::{GrammarTree, VertexId, VertexKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator vanishes at x = 0")]
    PoleAtZero,
    #[error("malformed tree: vertex {0} is undecided")]
    MalformedTree(VertexId),
    #[error("singular system at unknown z[{0}]")]
    Singular(VertexId),
}

/// Dense polynomial with exact rational coefficients, lowest degree first.
/// Trailing zeros are never stored; zero is the empty vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = BigRational::one();
        Polynomial { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_ints(ints: &[i64]) -> Self {
        Self::from_coeffs(
            ints.iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lead(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial { coeffs }
    }

    pub fn div_rem(&self, d: &Polynomial) -> Result<(Polynomial, Polynomial), GfError> {
        let dl = d.lead().ok_or(GfError::DivisionByZero)?.clone();
        let dd = d.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &dl;
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    rem[k + i] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let (mut x, mut y) = (self.clone(), other.clone());
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        match x.lead() {
            Some(l) => {
                let inv = l.recip();
                x.scale(&inv)
            }
            None => x,
        }
    }

    pub fn eval(&self, at: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * at + c)
    }

    fn lowest_nonzero(&self) -> Option<&BigRational> {
        self.coeffs.iter().find(|c| !c.is_zero())
    }

    fn write_terms(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if neg {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            first = false;
            let var = match k {
                0 => String::new(),
                1 => "x".to_string(),
                k => format!("x^{k}"),
            };
            if var.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&var)?;
            } else {
                write!(f, "{mag}*{var}")?;
            }
        }
        Ok(())
    }

    fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_terms(f)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::from_coeffs(out)
    }
}

/// A reduced fraction of polynomials in canonical form: coprime, both sides
/// with integer coefficients of joint content 1, and the lowest-order nonzero
/// denominator coefficient positive. Zero is `0/1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, GfError> {
        if den.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }

    pub fn from_poly(p: Polynomial) -> Self {
        Self::canonical(p, Polynomial::one())
    }

    pub fn monomial(k: usize) -> Self {
        Self::from_poly(Polynomial::monomial(k))
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn canonical(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return RationalFunction {
                num,
                den: Polynomial::one(),
            };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_rem(&g).unwrap().0, den.div_rem(&g).unwrap().0)
        };
        // Clear denominators, then divide out the joint integer content.
        let all = || num.coeffs.iter().chain(den.coeffs.iter());
        let lcm = all().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let content = all()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .fold(BigInt::zero(), |acc, c| acc.gcd(&c));
        let mut factor = BigRational::new(lcm, content);
        if den.lowest_nonzero().is_some_and(|c| c.is_negative()) {
            factor = -factor;
        }
        if !factor.is_one() {
            num = num.scale(&factor);
            den = den.scale(&factor);
        }
        RationalFunction { num, den }
    }

    pub fn checked_div(&self, rhs: &RationalFunction) -> Result<Self, GfError> {
        if rhs.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        Ok(Self::canonical(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    /// The first `order + 1` Taylor coefficients at `x = 0`.
    pub fn series(&self, order: usize) -> Result<Vec<BigRational>, GfError> {
        let d0 = self.den.coeff(0);
        if d0.is_zero() {
            return Err(GfError::PoleAtZero);
        }
        let mut out: Vec<BigRational> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut acc = self.num.coeff(n);
            for k in 1..=n.min(self.den.coeffs.len().saturating_sub(1)) {
                acc -= self.den.coeff(k) * &out[n - k];
            }
            out.push(acc / &d0);
        }
        Ok(out)
    }
}

impl fmt::Display for RationalFunction {
    /// `1/(1-10*x^5)`: terms by increasing degree, parentheses around
    /// multi-term sides, `/1` omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let paren = |p: &Polynomial| p.term_count() > 1;
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if paren(&self.num) {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if paren(&self.den) {
            write!(f, "/({})", self.den)
        } else {
            write!(f, "/{}", self.den)
        }
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::canonical(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunction::canonical(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::canonical(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Div,
}

pub fn ratfunc_arith(
    lhs: &RationalFunction,
    op: ArithOp,
    rhs: &RationalFunction,
) -> Result<RationalFunction, GfError> {
    match op {
        ArithOp::Add => Ok(lhs + rhs),
        ArithOp::Mul => Ok(lhs * rhs),
        ArithOp::Div => lhs.checked_div(rhs),
    }
}

pub fn series_coefficients(
    f: &RationalFunction,
    order: usize,
) -> Result<Vec<BigRational>, GfError> {
    f.series(order)
}

/// `z[unknown] = Σ coeff·z[id] + constant`; coefficients are monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub unknown: VertexId,
    pub terms: Vec<(Polynomial, VertexId)>,
    pub constant: Polynomial,
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z[{}] = ", self.unknown)?;
        let mut parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, id)| {
                if c.is_one() {
                    format!("z[{id}]")
                } else {
                    format!("{c}*z[{id}]")
                }
            })
            .collect();
        if !self.constant.is_zero() || parts.is_empty() {
            parts.push(self.constant.to_string());
        }
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GfSystem {
    pub equations: Vec<Equation>,
}

pub fn build_gf_system(t: &GrammarTree) -> Result<GfSystem, GfError> {
    let equations = t
        .vertices
        .iter()
        .map(|v| {
            let (terms, constant) = match v.kind {
                VertexKind::Internal { left, right, .. } => {
                    let constant = if v.has_singleton {
                        Polynomial::monomial(v.ctx.len())
                    } else {
                        Polynomial::zero()
                    };
                    (
                        vec![(Polynomial::one(), left), (Polynomial::one(), right)],
                        constant,
                    )
                }
                VertexKind::EmptyLeaf => (vec![], Polynomial::zero()),
                VertexKind::CloneLeaf { target, delta_len } => (
                    vec![(Polynomial::monomial(delta_len), target)],
                    Polynomial::zero(),
                ),
                VertexKind::Undecided => return Err(GfError::MalformedTree(v.id)),
            };
            Ok(Equation {
                unknown: v.id,
                terms,
                constant,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GfSystem { equations })
}

/// A linear form `Σ coeff·z[id] + constant` over rational functions.
#[derive(Debug, Clone, Default)]
struct LinearForm {
    terms: BTreeMap<VertexId, RationalFunction>,
    constant: Option<RationalFunction>,
}

impl LinearForm {
    fn constant(&self) -> RationalFunction {
        self.constant.clone().unwrap_or_else(RationalFunction::zero)
    }

    fn add_term(&mut self, id: VertexId, c: RationalFunction) {
        let sum = match self.terms.remove(&id) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(id, sum);
        }
    }

    fn add_constant(&mut self, c: &RationalFunction) {
        if !c.is_zero() {
            self.constant = Some(&self.constant() + c);
        }
    }

    /// Adds `scale · other`.
    fn add_scaled(&mut self, other: &LinearForm, scale: &RationalFunction) {
        for (&id, c) in &other.terms {
            self.add_term(id, c * scale);
        }
        if let Some(k) = &other.constant {
            self.add_constant(&(k * scale));
        }
    }
}

/// Eliminates unknowns from the highest id down, then back-substitutes.
pub fn solve_gf_system(s: &GfSystem) -> Result<BTreeMap<VertexId, RationalFunction>, GfError> {
    let mut rows: BTreeMap<VertexId, LinearForm> = BTreeMap::new();
    // users[u] = rows that currently mention z[u]
    let mut users: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
    for eq in &s.equations {
        let mut form = LinearForm::default();
        for (c, id) in &eq.terms {
            form.add_term(*id, RationalFunction::from_poly(c.clone()));
        }
        form.add_constant(&RationalFunction::from_poly(eq.constant.clone()));
        for &id in form.terms.keys() {
            users.entry(id).or_default().insert(eq.unknown);
        }
        rows.insert(eq.unknown, form);
    }

    let order: Vec<VertexId> = rows.keys().rev().copied().collect();
    let mut solved: Vec<(VertexId, LinearForm)> = Vec::new();
    for v in order {
        let mut form = rows.remove(&v).expect("row present");
        if let Some(self_coeff) = form.terms.remove(&v) {
            let pivot = &RationalFunction::one() - &self_coeff;
            if pivot.is_zero() {
                return Err(GfError::Singular(v));
            }
            let inv = RationalFunction::one().checked_div(&pivot)?;
            let mut scaled = LinearForm::default();
            scaled.add_scaled(&form, &inv);
            form = scaled;
        }
        if let Some(us) = users.remove(&v) {
            for u in us {
                let Some(row) = rows.get_mut(&u) else {
                    continue;
                };
                let Some(c) = row.terms.remove(&v) else {
                    continue;
                };
                row.add_scaled(&form, &c);
                for &id in form.terms.keys() {
                    users.entry(id).or_default().insert(u);
                }
            }
        }
        solved.push((v, form));
    }

    let mut values: BTreeMap<VertexId, RationalFunction> = BTreeMap::new();
    for (v, form) in solved.into_iter().rev() {
        let mut value = form.constant();
        for (id, c) in &form.terms {
            let z = values.get(id).ok_or(GfError::Singular(*id))?;
            value = &value + &(c * z);
        }
        values.insert(v, value);
    }
    Ok(values)
}

/// Weight-enumerator `z[e, e]` of a finished tree.
pub fn grammar_gf(t: &GrammarTree) -> Result<RationalFunction, GfError> {
    let values = solve_gf_system(&build_gf_system(t)?)?;
    Ok(values[&GrammarTree::ROOT].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discovery::{discover_grammar, Context, DiscoveryLimits, Vertex};
    use crate::wordcore::{oracle_count, AlphabetSpec};
    use proptest::prelude::*;

    fn poly(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::new(poly(n), poly(d)).unwrap()
    }

    fn ints(v: &[BigRational]) -> Vec<i64> {
        v.iter()
            .map(|c| {
                assert!(c.is_integer());
                i64::try_from(c.to_integer()).unwrap()
            })
            .collect()
    }

    #[test]
    fn arithmetic_examples() {
        let sum = ratfunc_arith(&rf(&[1], &[1, -1]), ArithOp::Add, &rf(&[0, 1], &[1, -1])).unwrap();
        assert_eq!(sum, rf(&[1, 1], &[1, -1]));
        assert_eq!(sum.to_string(), "(1+x)/(1-x)");
        let p = rf(&[2, 3], &[1, 0, 5]);
        assert!(ratfunc_arith(&p, ArithOp::Mul, &RationalFunction::zero())
            .unwrap()
            .is_zero());
        let q = ratfunc_arith(&rf(&[1, 0, -1], &[1]), ArithOp::Div, &rf(&[1, -1], &[1])).unwrap();
        assert_eq!(q, rf(&[1, 1], &[1]));
        assert_eq!(q.to_string(), "1+x");
        assert_eq!(
            ratfunc_arith(&p, ArithOp::Div, &RationalFunction::zero()),
            Err(GfError::DivisionByZero)
        );
    }

    #[test]
    fn canonical_form() {
        // -2/(-4+4x^5) == 1/(2-2x^5)
        let f = rf(&[-2], &[-4, 0, 0, 0, 0, 4]);
        assert_eq!(f.to_string(), "1/(2-2*x^5)");
        let half = RationalFunction::new(
            Polynomial::constant(BigRational::new(1.into(), 2.into())),
            poly(&[1, 0, 0, 0, 0, -10]),
        )
        .unwrap();
        assert_eq!(half.to_string(), "1/(2-20*x^5)");
        assert_eq!(rf(&[1], &[1, 0, 0, 0, 0, -10]).to_string(), "1/(1-10*x^5)");
        assert_eq!(rf(&[0, 0, 3], &[0, 1]).to_string(), "3*x");
        assert_eq!(rf(&[1], &[0, -1]).to_string(), "-1/x");
        assert_eq!(RationalFunction::zero().to_string(), "0");
    }

    #[test]
    fn series_examples() {
        let f = rf(&[1], &[1, 0, 0, 0, 0, -10]);
        assert_eq!(
            ints(&f.series(10).unwrap()),
            vec![1, 0, 0, 0, 0, 10, 0, 0, 0, 0, 100]
        );
        assert_eq!(
            ints(&RationalFunction::zero().series(3).unwrap()),
            vec![0, 0, 0, 0]
        );
        let g = rf(&[1], &[1, 0, -2]);
        assert_eq!(ints(&g.series(6).unwrap()), vec![1, 0, 2, 0, 4, 0, 8]);
        assert_eq!(rf(&[1], &[0, 1]).series(2), Err(GfError::PoleAtZero));
    }

    fn leaf_tree(kind: VertexKind) -> GrammarTree {
        let spec = AlphabetSpec::new(3, 2).unwrap();
        GrammarTree {
            spec,
            vertices: vec![Vertex {
                id: 0,
                ctx: Context::root(),
                kind,
                has_singleton: true,
            }],
            corpus_max_len: 0,
        }
    }

    #[test]
    fn system_equations() {
        let t = discover_grammar(
            &AlphabetSpec::new(3, 2).unwrap(),
            20,
            DiscoveryLimits::default(),
        )
        .unwrap();
        let s = build_gf_system(&t).unwrap();
        assert_eq!(s.equations.len(), t.len());
        let root = &s.equations[0];
        assert_eq!(root.constant, Polynomial::one());
        assert_eq!(root.terms.len(), 2);
        for (v, eq) in t.vertices.iter().zip(&s.equations) {
            match v.kind {
                VertexKind::EmptyLeaf => {
                    assert!(eq.terms.is_empty() && eq.constant.is_zero());
                    assert_eq!(eq.to_string(), format!("z[{}] = 0", v.id));
                }
                VertexKind::CloneLeaf { target, delta_len } => {
                    assert_eq!(eq.terms, vec![(Polynomial::monomial(delta_len), target)]);
                }
                _ => {}
            }
        }
        assert!(matches!(
            build_gf_system(&leaf_tree(VertexKind::Undecided)),
            Err(GfError::MalformedTree(0))
        ));
        let clone_eq = Equation {
            unknown: 4,
            terms: vec![(Polynomial::monomial(2), 1)],
            constant: Polynomial::zero(),
        };
        assert_eq!(clone_eq.to_string(), "z[4] = x^2*z[1]");
    }

    #[test]
    fn single_empty_root() {
        let values =
            solve_gf_system(&build_gf_system(&leaf_tree(VertexKind::EmptyLeaf)).unwrap()).unwrap();
        assert!(values[&0].is_zero());
    }

    #[test]
    fn singular_system() {
        // z0 = z0 has no unique solution.
        let s = GfSystem {
            equations: vec![Equation {
                unknown: 0,
                terms: vec![(Polynomial::one(), 0)],
                constant: Polynomial::zero(),
            }],
        };
        assert_eq!(solve_gf_system(&s), Err(GfError::Singular(0)));
    }

    #[test]
    fn solved_trees_match_oracle_and_satisfy_equations() {
        for (a, b, len, expected) in [
            (3, 2, 20, "1/(1-10*x^5)"),
            (1, 1, 12, "1/(1-2*x^2)"),
            (2, 1, 12, "1/(1-3*x^3)"),
        ] {
            let spec = AlphabetSpec::new(a, b).unwrap();
            let t = discover_grammar(&spec, len, DiscoveryLimits::default()).unwrap();
            let sys = build_gf_system(&t).unwrap();
            let values = solve_gf_system(&sys).unwrap();
            assert_eq!(values[&0].to_string(), expected);
            for eq in &sys.equations {
                let mut rhs = RationalFunction::from_poly(eq.constant.clone());
                for (c, id) in &eq.terms {
                    rhs = &rhs + &(&RationalFunction::from_poly(c.clone()) * &values[id]);
                }
                assert_eq!(values[&eq.unknown], rhs, "equation {eq}");
            }
            let series = ints(&values[&0].series(15).unwrap());
            for (n, c) in series.iter().enumerate() {
                assert_eq!(*c as u64, oracle_count(&spec, n).unwrap());
            }
        }
    }

    fn small_rf() -> impl Strategy<Value = RationalFunction> {
        (
            proptest::collection::vec(-3i64..4, 0..4),
            proptest::collection::vec(-3i64..4, 0..3),
        )
            .prop_map(|(n, d)| {
                // Denominator 1 + x·d(x) keeps it nonzero.
                let mut den = vec![1];
                den.extend(d);
                rf(&n, &den)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn field_axioms(p in small_rf(), q in small_rf(), r in small_rf()) {
            prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
            prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
            prop_assert_eq!(&p + &q, &q + &p);
            if !q.is_zero() {
                prop_assert_eq!(&p.checked_div(&q).unwrap() * &q, p.clone());
            }
        }

        #[test]
        fn canonical_form_is_unique(p in small_rf(), k in 1i64..6, neg in any::<bool>()) {
            let c = Polynomial::constant(BigRational::from_integer(if neg { -k } else { k }.into()));
            let scaled = RationalFunction::new(&p.num * &c, &p.den * &c).unwrap();
            prop_assert_eq!(&scaled, &p);
            prop_assert_eq!(scaled.to_string(), p.to_string());
        }
    }
}
