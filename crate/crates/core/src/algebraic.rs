//! Exact polynomial and spectral invariants.
//!
//! Integer polynomials keep their coefficients constant term first. The
//! Laplacian is `D - A`. Tutte polynomials come from deletion-contraction on
//! loopless multigraphs, split into blocks and memoized per thread on the
//! canonical weighted form of each block.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use nalgebra::DMatrix;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::blocks;
use crate::canon::{canonical_weighted, WeightMatrix};
use crate::graph::{pair_count, Graph, GraphCode, Multigraph, VertexSet, MAX_ORDER};

/// Exact rational in lowest terms with a positive denominator.
pub type RationalNumber = BigRational;

/// Deletion-contraction expansions allowed per Tutte computation by default.
pub const DEFAULT_TUTTE_BUDGET: u64 = 50_000_000;

/// Memo entries kept per thread before the cache is dropped.
const TUTTE_CACHE_CAP: usize = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraicError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("Tutte polynomial needs more than {budget} deletion-contraction expansions")]
    TutteBudgetExceeded { budget: u64 },
    #[error("Tutte coefficient overflowed 64 bits")]
    CoefficientOverflow,
}

/// First eight bytes, little-endian, of the SHA-256 of `text`.
pub fn stable_digest(text: &str) -> u64 {
    let hash = Sha256::digest(text.as_bytes());
    u64::from_le_bytes(hash[..8].try_into().expect("hash has 32 bytes"))
}

/// Polynomial with big-integer coefficients, constant term first and no
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coefficients: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coefficients: Vec<BigInt>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        IntPolynomial { coefficients }
    }

    pub fn from_i64(coefficients: &[i64]) -> Self {
        Self::new(coefficients.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn evaluate(&self, x: &BigInt) -> BigInt {
        self.coefficients
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> IntPolynomial {
        IntPolynomial::new(
            self.coefficients
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Gcd of the coefficients, zero for the zero polynomial.
    fn content(&self) -> BigInt {
        self.coefficients
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    fn primitive_part(&self) -> IntPolynomial {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        IntPolynomial::new(self.coefficients.iter().map(|c| c / &g).collect())
    }

    /// Pseudo-remainder of `self` by a nonzero `divisor`.
    fn pseudo_remainder(&self, divisor: &IntPolynomial) -> IntPolynomial {
        let d = divisor.degree().expect("nonzero divisor");
        let lead = &divisor.coefficients[d];
        let mut r = self.coefficients.clone();
        while r.len() > d && !r.is_empty() {
            let top = r.len() - 1;
            let factor = r[top].clone();
            for c in r.iter_mut() {
                *c *= lead;
            }
            for (i, c) in divisor.coefficients.iter().enumerate() {
                r[top - d + i] -= &factor * c;
            }
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        IntPolynomial::new(r)
    }

    /// Greatest common divisor up to a constant, by primitive remainder
    /// sequences.
    pub fn gcd(&self, other: &IntPolynomial) -> IntPolynomial {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_remainder(&b).primitive_part();
            a = b;
            b = r;
        }
        a
    }

    /// True when no root is repeated.
    pub fn is_square_free(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Divides by `(x - root)` when it is a factor.
    fn divide_by_root(&self, root: &BigInt) -> Option<IntPolynomial> {
        let n = self.degree()?;
        if n == 0 {
            return None;
        }
        let mut quotient = vec![BigInt::zero(); n];
        let mut carry = BigInt::zero();
        for i in (0..=n).rev() {
            let value = &self.coefficients[i] + &carry * root;
            if i == 0 {
                return value.is_zero().then(|| IntPolynomial::new(quotient));
            }
            quotient[i - 1] = value.clone();
            carry = value;
        }
        unreachable!()
    }

    pub fn text(&self) -> String {
        if self.coefficients.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self.coefficients.iter().map(|c| c.to_string()).collect();
        parts.join(",")
    }

    pub fn digest(&self) -> u64 {
        stable_digest(&self.text())
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())
    }
}

/// Polynomial in `x` and `y` with non-negative integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BivariatePolynomial {
    terms: BTreeMap<(u32, u32), BigUint>,
}

impl BivariatePolynomial {
    pub fn terms(&self) -> &BTreeMap<(u32, u32), BigUint> {
        &self.terms
    }

    pub fn coefficient(&self, x_degree: u32, y_degree: u32) -> BigUint {
        self.terms
            .get(&(x_degree, y_degree))
            .cloned()
            .unwrap_or_default()
    }

    pub fn evaluate(&self, x: &BigInt, y: &BigInt) -> BigInt {
        self.terms
            .iter()
            .map(|(&(a, b), c)| BigInt::from(c.clone()) * x.pow(a) * y.pow(b))
            .sum()
    }

    /// `x^a y^b: c` lines sorted by exponent pair.
    pub fn text(&self) -> String {
        let lines: Vec<String> = self
            .terms
            .iter()
            .map(|(&(a, b), c)| format!("x^{a} y^{b}: {c}"))
            .collect();
        lines.join("\n")
    }

    /// The lines of [`text`](Self::text) joined by `;`.
    pub fn line(&self) -> String {
        self.text().replace('\n', ";")
    }

    pub fn digest(&self) -> u64 {
        stable_digest(&self.text())
    }

    fn from_dense(d: &Dense) -> Self {
        let mut terms = BTreeMap::new();
        for a in 0..d.xs {
            for b in 0..d.ys {
                let c = d.get(a, b);
                if c != 0 {
                    terms.insert((a as u32, b as u32), BigUint::from(c));
                }
            }
        }
        BivariatePolynomial { terms }
    }
}

impl fmt::Display for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.line())
    }
}

fn adjacency_i128(g: &Graph, laplacian: bool) -> Vec<Vec<i128>> {
    let n = g.order();
    let mut m = vec![vec![0i128; n]; n];
    for (u, v) in g.edges() {
        let entry = if laplacian { -1 } else { 1 };
        m[u][v] = entry;
        m[v][u] = entry;
    }
    if laplacian {
        for (v, row) in m.iter_mut().enumerate() {
            row[v] = g.degree(v) as i128;
        }
    }
    m
}

/// `det(xI - M)` by Faddeev-LeVerrier; every division is exact.
fn faddeev_leverrier(a: &[Vec<i128>]) -> IntPolynomial {
    let n = a.len();
    let mut coeffs = vec![0i128; n + 1];
    coeffs[n] = 1;
    let mut m = vec![vec![0i128; n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![0i128; n]; n];
        for i in 0..n {
            for j in 0..n {
                next[i][j] = (0..n).map(|t| a[i][t] * m[t][j]).sum();
            }
            next[i][i] += coeffs[n - k + 1];
        }
        m = next;
        let trace: i128 = (0..n)
            .map(|i| (0..n).map(|t| a[i][t] * m[t][i]).sum::<i128>())
            .sum();
        debug_assert_eq!(trace % k as i128, 0);
        coeffs[n - k] = -trace / k as i128;
    }
    IntPolynomial::new(coeffs.into_iter().map(BigInt::from).collect())
}

/// `det(xI - A)`, monic of degree `n`.
pub fn characteristic_polynomial(g: &Graph) -> IntPolynomial {
    faddeev_leverrier(&adjacency_i128(g, false))
}

/// `det(xI - (D - A))`, monic of degree `n`.
pub fn laplacian_polynomial(g: &Graph) -> IntPolynomial {
    faddeev_leverrier(&adjacency_i128(g, true))
}

/// Every adjacency eigenvalue is an integer. Roots lie in
/// `[-max_degree, max_degree]`, so trial division over that range decides it.
pub fn is_integral(g: &Graph) -> bool {
    let mut p = characteristic_polynomial(g);
    let bound = g.max_degree() as i64;
    for z in -bound..=bound {
        let root = BigInt::from(z);
        while let Some(q) = p.divide_by_root(&root) {
            p = q;
        }
    }
    p.degree() == Some(0)
}

/// Every adjacency eigenvalue has multiplicity one.
pub fn simple_spectrum(g: &Graph) -> bool {
    characteristic_polynomial(g).is_square_free()
}

/// Second smallest Laplacian eigenvalue (0 for `K1`). Floating point,
/// reporting only.
pub fn spectral_gap(g: &Graph) -> f64 {
    let n = g.order();
    if n < 2 {
        return 0.0;
    }
    let lap = adjacency_i128(g, true);
    let m = DMatrix::from_fn(n, n, |i, j| lap[i][j] as f64);
    let mut values: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values[1]
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralSummary {
    pub char_poly: IntPolynomial,
    pub laplacian_poly: IntPolynomial,
    pub is_integral: bool,
    pub simple_spectrum: bool,
    pub spectral_gap: f64,
}

pub fn spectral_summary(g: &Graph) -> SpectralSummary {
    let char_poly = characteristic_polynomial(g);
    SpectralSummary {
        laplacian_poly: laplacian_polynomial(g),
        is_integral: is_integral(g),
        simple_spectrum: char_poly.is_square_free(),
        spectral_gap: spectral_gap(g),
        char_poly,
    }
}

/// Dense bivariate coefficients, `xs` by `ys`, with checked arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Dense {
    xs: usize,
    ys: usize,
    c: Vec<u64>,
}

impl Dense {
    fn zero(xs: usize, ys: usize) -> Self {
        Dense {
            xs,
            ys,
            c: vec![0; xs * ys],
        }
    }

    fn one() -> Self {
        Dense {
            xs: 1,
            ys: 1,
            c: vec![1],
        }
    }

    fn get(&self, a: usize, b: usize) -> u64 {
        if a < self.xs && b < self.ys {
            self.c[a * self.ys + b]
        } else {
            0
        }
    }

    /// `x + y + ... + y^(m-1)`, the Tutte polynomial of `m` parallel edges.
    fn parallel_bridge(m: u8) -> Self {
        let ys = (m as usize).max(1);
        let mut d = Dense::zero(2, ys);
        d.c[ys] = 1;
        for b in 1..m as usize {
            d.c[b] = 1;
        }
        d
    }

    /// `1 + y + ... + y^(m-1)`.
    fn y_run(m: u8) -> Self {
        let ys = m as usize;
        Dense {
            xs: 1,
            ys,
            c: vec![1; ys],
        }
    }

    fn y_power(k: usize) -> Self {
        let mut d = Dense::zero(1, k + 1);
        d.c[k] = 1;
        d
    }

    fn add(&self, other: &Dense) -> Result<Dense, AlgebraicError> {
        let xs = self.xs.max(other.xs);
        let ys = self.ys.max(other.ys);
        let mut out = Dense::zero(xs, ys);
        for a in 0..xs {
            for b in 0..ys {
                out.c[a * ys + b] = self
                    .get(a, b)
                    .checked_add(other.get(a, b))
                    .ok_or(AlgebraicError::CoefficientOverflow)?;
            }
        }
        Ok(out)
    }

    fn mul(&self, other: &Dense) -> Result<Dense, AlgebraicError> {
        let xs = self.xs + other.xs - 1;
        let ys = self.ys + other.ys - 1;
        let mut out = Dense::zero(xs, ys);
        for a in 0..self.xs {
            for b in 0..self.ys {
                let s = self.c[a * self.ys + b];
                if s == 0 {
                    continue;
                }
                for p in 0..other.xs {
                    for q in 0..other.ys {
                        let t = other.c[p * other.ys + q];
                        if t == 0 {
                            continue;
                        }
                        let slot = &mut out.c[(a + p) * ys + b + q];
                        *slot = s
                            .checked_mul(t)
                            .and_then(|st| slot.checked_add(st))
                            .ok_or(AlgebraicError::CoefficientOverflow)?;
                    }
                }
            }
        }
        Ok(out)
    }
}

type TutteKey = (u8, [u8; pair_count(MAX_ORDER)]);

thread_local! {
    static TUTTE_CACHE: RefCell<HashMap<TutteKey, Rc<Dense>>> = RefCell::new(HashMap::new());
}

/// Loopless multigraph as a weight matrix.
#[derive(Clone, Copy)]
struct Work {
    n: usize,
    w: [[u8; MAX_ORDER]; MAX_ORDER],
}

impl Work {
    fn adjacency(&self) -> Vec<VertexSet> {
        (0..self.n)
            .map(|v| {
                (0..self.n)
                    .filter(|&u| self.w[v][u] > 0)
                    .fold(0, |acc, u| acc | 1 << u)
            })
            .collect()
    }

    fn induced(&self, set: VertexSet) -> Work {
        let members: Vec<usize> = (0..self.n).filter(|&v| set & (1 << v) != 0).collect();
        let mut w = [[0u8; MAX_ORDER]; MAX_ORDER];
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate() {
                w[i][j] = self.w[a][b];
            }
        }
        Work {
            n: members.len(),
            w,
        }
    }

    fn delete(&self, u: usize, v: usize) -> Work {
        let mut out = *self;
        out.w[u][v] = 0;
        out.w[v][u] = 0;
        out
    }

    /// Merges `v` into `u`, dropping the `u`-`v` class; the last vertex takes
    /// the place of `v`.
    fn contract(&self, u: usize, v: usize) -> Work {
        let n = self.n;
        let mut out = *self;
        out.w[u][v] = 0;
        out.w[v][u] = 0;
        for x in 0..n {
            if x != u && x != v {
                out.w[u][x] += out.w[v][x];
                out.w[x][u] = out.w[u][x];
            }
        }
        let last = n - 1;
        if v != last {
            for x in 0..n {
                out.w[v][x] = out.w[last][x];
                out.w[x][v] = out.w[x][last];
            }
            out.w[v][v] = 0;
        }
        for x in 0..n {
            out.w[last][x] = 0;
            out.w[x][last] = 0;
        }
        out.n = n - 1;
        out
    }
}

struct TutteRun {
    budget: u64,
    expansions: u64,
}

impl TutteRun {
    /// Tutte polynomial of a connected loopless multigraph.
    fn connected(&mut self, g: &Work) -> Result<Rc<Dense>, AlgebraicError> {
        if g.n == 1 {
            return Ok(Rc::new(Dense::one()));
        }
        let all: VertexSet = ((1u32 << g.n) - 1) as VertexSet;
        let decomposition = blocks::decompose(&g.adjacency(), all);
        if decomposition.blocks.len() == 1 {
            return self.block(g);
        }
        let mut product = Dense::one();
        for &set in &decomposition.blocks {
            product = product.mul(&*self.block(&g.induced(set))?)?;
        }
        Ok(Rc::new(product))
    }

    /// Tutte polynomial of a 2-connected loopless multigraph.
    fn block(&mut self, g: &Work) -> Result<Rc<Dense>, AlgebraicError> {
        if g.n == 2 {
            return Ok(Rc::new(Dense::parallel_bridge(g.w[0][1])));
        }
        let matrix = WeightMatrix { n: g.n, w: g.w };
        let canon = canonical_weighted(&matrix);
        let key: TutteKey = (g.n as u8, canon.sequence);
        if let Some(hit) = TUTTE_CACHE.with(|c| c.borrow().get(&key).cloned()) {
            return Ok(hit);
        }
        self.expansions += 1;
        if self.expansions > self.budget {
            return Err(AlgebraicError::TutteBudgetExceeded {
                budget: self.budget,
            });
        }
        // split on a class at a vertex of least degree
        let adj = g.adjacency();
        let u = (0..g.n)
            .min_by_key(|&v| adj[v].count_ones())
            .expect("block has vertices");
        let v = (0..g.n)
            .filter(|&x| g.w[u][x] > 0)
            .max_by_key(|&x| g.w[u][x])
            .expect("block vertex has a neighbour");
        let m = g.w[u][v];
        let deleted = self.connected(&g.delete(u, v))?;
        let contracted = self.connected(&g.contract(u, v))?;
        let result = Rc::new(deleted.add(&Dense::y_run(m).mul(&contracted)?)?);
        TUTTE_CACHE.with(|c| {
            let mut cache = c.borrow_mut();
            if cache.len() >= TUTTE_CACHE_CAP {
                cache.clear();
            }
            cache.insert(key, Rc::clone(&result));
        });
        Ok(result)
    }
}

/// Tutte polynomial of a connected multigraph with the default budget.
pub fn tutte_polynomial(g: &Multigraph) -> Result<BivariatePolynomial, AlgebraicError> {
    tutte_polynomial_with_budget(g, DEFAULT_TUTTE_BUDGET)
}

/// Tutte polynomial, giving up after `budget` uncached deletion-contraction
/// steps.
pub fn tutte_polynomial_with_budget(
    g: &Multigraph,
    budget: u64,
) -> Result<BivariatePolynomial, AlgebraicError> {
    if !g.is_connected() {
        return Err(AlgebraicError::Disconnected);
    }
    let work = Work {
        n: g.order(),
        w: *g.without_loops().multiplicities(),
    };
    let mut run = TutteRun {
        budget,
        expansions: 0,
    };
    let core = run.connected(&work)?;
    let with_loops = Dense::y_power(g.loop_count()).mul(&core)?;
    Ok(BivariatePolynomial::from_dense(&with_loops))
}

/// Tutte polynomial of a connected simple graph.
pub fn tutte_of_graph(g: &Graph) -> Result<BivariatePolynomial, AlgebraicError> {
    tutte_polynomial(&Multigraph::from(g))
}

/// `P(k) = (-1)^(n-1) k T(1-k, 0)` for a connected graph.
pub fn chromatic_from_tutte(tutte: &BivariatePolynomial, order: usize) -> IntPolynomial {
    // (1 - k)^a expanded by binomials, accumulated over the y^0 terms
    let mut sum = vec![BigInt::zero(); order + 1];
    for (&(a, b), c) in tutte.terms() {
        if b != 0 {
            continue;
        }
        let c = BigInt::from(c.clone());
        let mut binom = BigInt::one();
        for (i, slot) in sum.iter_mut().enumerate().take(a as usize + 1) {
            let term = &c * &binom;
            if i % 2 == 0 {
                *slot += term;
            } else {
                *slot -= term;
            }
            binom = binom * BigInt::from(a as usize - i) / BigInt::from(i + 1);
        }
    }
    let sign = if order % 2 == 1 { 1 } else { -1 };
    let mut coeffs = vec![BigInt::zero()];
    coeffs.extend(sum.into_iter().map(|c| c * sign));
    IntPolynomial::new(coeffs)
}

/// Chromatic polynomial of a connected graph through its Tutte polynomial.
pub fn chromatic_polynomial(g: &Graph) -> Result<IntPolynomial, AlgebraicError> {
    Ok(chromatic_from_tutte(&tutte_of_graph(g)?, g.order()))
}

thread_local! {
    static CHROMATIC_CACHE: RefCell<HashMap<GraphCode, IntPolynomial>> = RefCell::new(HashMap::new());
}

/// Chromatic polynomial by `P(G) = P(G - e) - P(G / e)` on simple graphs.
/// Works for disconnected graphs too.
pub fn chromatic_polynomial_direct(g: &Graph) -> IntPolynomial {
    let n = g.order();
    let m = g.edge_count();
    if m == 0 {
        let mut c = vec![BigInt::zero(); n + 1];
        c[n] = BigInt::one();
        return IntPolynomial::new(c);
    }
    if 2 * m == n * (n - 1) {
        // falling factorial k (k-1) ... (k-n+1)
        let mut p = IntPolynomial::from_i64(&[1]);
        for i in 0..n as i64 {
            p = multiply(&p, &IntPolynomial::from_i64(&[-i, 1]));
        }
        return p;
    }
    let key = g.canonical_code();
    if let Some(hit) = CHROMATIC_CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return hit;
    }
    let (u, v) = g.edges().next().expect("graph has an edge");
    let mut deleted = *g;
    deleted.remove_edge(u, v);
    let contracted = Multigraph::from(g).contract(u, v).support();
    let a = chromatic_polynomial_direct(&deleted);
    let b = chromatic_polynomial_direct(&contracted);
    let len = a.coefficients.len().max(b.coefficients.len());
    let zero = BigInt::zero();
    let result = IntPolynomial::new(
        (0..len)
            .map(|i| {
                a.coefficients.get(i).unwrap_or(&zero) - b.coefficients.get(i).unwrap_or(&zero)
            })
            .collect(),
    );
    CHROMATIC_CACHE.with(|c| {
        let mut cache = c.borrow_mut();
        if cache.len() >= TUTTE_CACHE_CAP {
            cache.clear();
        }
        cache.insert(key, result.clone());
    });
    result
}

fn multiply(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    if a.is_zero() || b.is_zero() {
        return IntPolynomial::default();
    }
    let mut out = vec![BigInt::zero(); a.coefficients.len() + b.coefficients.len() - 1];
    for (i, x) in a.coefficients.iter().enumerate() {
        for (j, y) in b.coefficients.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    IntPolynomial::new(out)
}

/// Smallest positive `k` with `P(k) > 0`.
pub fn chromatic_number_from(p: &IntPolynomial) -> usize {
    (1..)
        .find(|&k| p.evaluate(&BigInt::from(k)).is_positive())
        .expect("chromatic polynomials are eventually positive")
}

pub fn chromatic_number(g: &Graph) -> Result<usize, AlgebraicError> {
    Ok(chromatic_number_from(&chromatic_polynomial(g)?))
}

/// Optimal fractional colouring with its dual certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct FractionalColoring {
    pub value: RationalNumber,
    /// Weight on each maximal independent set used; every vertex is covered
    /// with total weight at least 1.
    pub set_weights: Vec<(VertexSet, RationalNumber)>,
    /// Vertex weights with total at most 1 on every independent set.
    pub vertex_weights: Vec<RationalNumber>,
}

/// Maximal independent sets in ascending bitset order.
pub fn maximal_independent_sets(g: &Graph) -> Vec<VertexSet> {
    fn extend(
        g: &Graph,
        chosen: VertexSet,
        candidates: VertexSet,
        excluded: VertexSet,
        out: &mut Vec<VertexSet>,
    ) {
        if candidates == 0 && excluded == 0 {
            out.push(chosen);
            return;
        }
        let (mut candidates, mut excluded) = (candidates, excluded);
        let mut todo = candidates;
        while todo != 0 {
            let v = todo.trailing_zeros() as usize;
            todo &= todo - 1;
            let keep = !(g.neighbors(v) | 1 << v);
            extend(g, chosen | 1 << v, candidates & keep, excluded & keep, out);
            candidates &= !(1 << v);
            excluded |= 1 << v;
        }
    }
    let mut out = Vec::new();
    extend(g, 0, g.all_vertices(), 0, &mut out);
    out.sort_unstable();
    out
}

/// Fractional chromatic number by exact simplex (Bland's rule) on
/// `max sum(y) : sum_{v in I} y_v <= 1 for every maximal independent I`.
pub fn fractional_coloring(g: &Graph) -> FractionalColoring {
    let n = g.order();
    let sets = maximal_independent_sets(g);
    let rows = sets.len();
    let cols = n + rows;
    let zero = BigRational::zero();
    let one = BigRational::one();
    let mut tableau: Vec<Vec<BigRational>> = sets
        .iter()
        .enumerate()
        .map(|(r, &set)| {
            let mut row = vec![zero.clone(); cols + 1];
            for (v, cell) in row.iter_mut().enumerate().take(n) {
                if set & (1 << v) != 0 {
                    *cell = one.clone();
                }
            }
            row[n + r] = one.clone();
            row[cols] = one.clone();
            row
        })
        .collect();
    // reduced costs; the last entry holds minus the objective value
    let mut reduced = vec![zero.clone(); cols + 1];
    for cell in reduced.iter_mut().take(n) {
        *cell = one.clone();
    }
    let mut basis: Vec<usize> = (n..cols).collect();
    while let Some(enter) = (0..cols).find(|&j| reduced[j].is_positive()) {
        let leave = (0..rows)
            .filter(|&r| tableau[r][enter].is_positive())
            .min_by(|&a, &b| {
                let ra = &tableau[a][cols] / &tableau[a][enter];
                let rb = &tableau[b][cols] / &tableau[b][enter];
                ra.cmp(&rb).then(basis[a].cmp(&basis[b]))
            })
            .expect("the polytope is bounded");
        let pivot = tableau[leave][enter].clone();
        for cell in tableau[leave].iter_mut() {
            *cell /= &pivot;
        }
        let pivot_row = tableau[leave].clone();
        for (r, row) in tableau.iter_mut().enumerate() {
            if r != leave && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (cell, p) in row.iter_mut().zip(&pivot_row) {
                    *cell -= &f * p;
                }
            }
        }
        let f = reduced[enter].clone();
        for (cell, p) in reduced.iter_mut().zip(&pivot_row) {
            *cell -= &f * p;
        }
        basis[leave] = enter;
    }
    let mut vertex_weights = vec![zero.clone(); n];
    for (r, &b) in basis.iter().enumerate() {
        if b < n {
            vertex_weights[b] = tableau[r][cols].clone();
        }
    }
    let set_weights = sets
        .iter()
        .enumerate()
        .filter(|(r, _)| !reduced[n + r].is_zero())
        .map(|(r, &set)| (set, -reduced[n + r].clone()))
        .collect();
    FractionalColoring {
        value: -reduced[cols].clone(),
        set_weights,
        vertex_weights,
    }
}

pub fn fractional_chromatic_number(g: &Graph) -> RationalNumber {
    fractional_coloring(g).value
}

/// Fractional chromatic number strictly below the chromatic number.
pub fn has_chromatic_gap(fractional: &RationalNumber, chromatic: usize) -> bool {
    fractional < &BigRational::from_integer(BigInt::from(chromatic))
}

/// Every algebraic invariant of a connected graph.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicProfile {
    pub spectral: SpectralSummary,
    pub tutte: BivariatePolynomial,
    pub chromatic_poly: IntPolynomial,
    pub chromatic_number: usize,
    pub fractional_chromatic: RationalNumber,
    pub has_chromatic_gap: bool,
}

pub fn algebraic_profile(g: &Graph, tutte_budget: u64) -> Result<AlgebraicProfile, AlgebraicError> {
    let tutte = tutte_polynomial_with_budget(&Multigraph::from(g), tutte_budget)?;
    let chromatic_poly = chromatic_from_tutte(&tutte, g.order());
    let chromatic_number = chromatic_number_from(&chromatic_poly);
    let fractional_chromatic = fractional_chromatic_number(g);
    Ok(AlgebraicProfile {
        spectral: spectral_summary(g),
        has_chromatic_gap: has_chromatic_gap(&fractional_chromatic, chromatic_number),
        tutte,
        chromatic_poly,
        chromatic_number,
        fractional_chromatic,
    })
}

/// Numerator and denominator as `u64`, for storage.
pub fn rational_parts(r: &RationalNumber) -> (u64, u64) {
    (
        r.numer().to_u64().expect("small non-negative numerator"),
        r.denom().to_u64().expect("small denominator"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    fn rat(a: i64, b: i64) -> RationalNumber {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    fn petersen() -> Graph {
        Graph::from_edges(
            10,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 0),
                (0, 5),
                (1, 6),
                (2, 7),
                (3, 8),
                (4, 9),
                (5, 7),
                (7, 9),
                (9, 6),
                (6, 8),
                (8, 5),
            ],
        )
        .unwrap()
    }

    #[test]
    fn characteristic_examples() {
        assert_eq!(
            characteristic_polynomial(&Graph::complete(2).unwrap()),
            poly(&[-1, 0, 1])
        );
        assert_eq!(
            characteristic_polynomial(&Graph::cycle(4).unwrap()),
            poly(&[0, 0, -4, 0, 1])
        );
        assert_eq!(
            characteristic_polynomial(&Graph::empty(1).unwrap()),
            poly(&[0, 1])
        );
        // K3: (x - 2)(x + 1)^2
        assert_eq!(
            characteristic_polynomial(&Graph::complete(3).unwrap()),
            poly(&[-2, -3, 0, 1])
        );
        // Laplacian of P3 has eigenvalues 0, 1, 3
        assert_eq!(
            laplacian_polynomial(&Graph::path(3).unwrap()),
            poly(&[0, 3, -4, 1])
        );
    }

    #[test]
    fn integrality_and_simple_spectrum() {
        for n in 1..=7 {
            assert!(is_integral(&Graph::complete(n).unwrap()));
        }
        assert!(is_integral(&petersen()));
        assert!(!is_integral(&Graph::path(4).unwrap()));
        assert!(is_integral(&Graph::cycle(6).unwrap()));
        assert!(!is_integral(&Graph::cycle(5).unwrap()));
        assert!(!simple_spectrum(&Graph::complete(3).unwrap()));
        assert!(simple_spectrum(&Graph::path(4).unwrap()));
        assert!(simple_spectrum(&Graph::empty(1).unwrap()));
        // integral does not imply simple
        let k3 = Graph::complete(3).unwrap();
        assert!(is_integral(&k3) && !simple_spectrum(&k3));
    }

    #[test]
    fn polynomial_gcd() {
        // (x - 1)^2 (x + 2) and its derivative share x - 1
        let p = poly(&[2, -3, 0, 1]);
        assert!(!p.is_square_free());
        assert_eq!(p.gcd(&p.derivative()).degree(), Some(1));
        assert!(poly(&[-1, 0, 1]).is_square_free());
        assert_eq!(poly(&[1, 2, 3]).text(), "1,2,3");
        assert_eq!(IntPolynomial::default().text(), "0");
    }

    #[test]
    fn spectral_gaps() {
        let close = |a: f64, b: f64| (a - b).abs() < 1e-10;
        assert!(close(spectral_gap(&Graph::complete(2).unwrap()), 2.0));
        assert!(close(spectral_gap(&Graph::path(3).unwrap()), 1.0));
        assert!(close(spectral_gap(&Graph::cycle(4).unwrap()), 2.0));
        assert!(close(spectral_gap(&Graph::complete(5).unwrap()), 5.0));
    }

    #[test]
    fn tutte_examples() {
        let k3 = tutte_of_graph(&Graph::complete(3).unwrap()).unwrap();
        assert_eq!(k3.text(), "x^0 y^1: 1\nx^1 y^0: 1\nx^2 y^0: 1");
        assert_eq!(k3.line(), "x^0 y^1: 1;x^1 y^0: 1;x^2 y^0: 1");
        let star = tutte_of_graph(&Graph::star(6).unwrap()).unwrap();
        assert_eq!(star.terms().len(), 1);
        assert_eq!(star.coefficient(5, 0), BigUint::from(1u32));
        let k1 = tutte_of_graph(&Graph::empty(1).unwrap()).unwrap();
        assert_eq!(k1.text(), "x^0 y^0: 1");
        // K4: x^3 + 3x^2 + 2x + 4xy + 2y + 3y^2 + y^3
        let k4 = tutte_of_graph(&Graph::complete(4).unwrap()).unwrap();
        let expected = [
            ((3, 0), 1u32),
            ((2, 0), 3),
            ((1, 0), 2),
            ((1, 1), 4),
            ((0, 1), 2),
            ((0, 2), 3),
            ((0, 3), 1),
        ];
        assert_eq!(k4.terms().len(), expected.len());
        for ((a, b), c) in expected {
            assert_eq!(k4.coefficient(a, b), BigUint::from(c));
        }
        // spanning trees of K5 and the Petersen graph
        let one = BigInt::one();
        let k5 = tutte_of_graph(&Graph::complete(5).unwrap()).unwrap();
        assert_eq!(k5.evaluate(&one, &one), BigInt::from(125));
        let p = tutte_of_graph(&petersen()).unwrap();
        assert_eq!(p.evaluate(&one, &one), BigInt::from(2000));
    }

    #[test]
    fn tutte_of_multigraphs() {
        let mut m = Multigraph::empty(2).unwrap();
        m.add_edges(0, 1, 3).unwrap();
        m.add_edges(1, 1, 1).unwrap();
        // y (x + y + y^2)
        let t = tutte_polynomial(&m).unwrap();
        assert_eq!(t.text(), "x^0 y^2: 1\nx^0 y^3: 1\nx^1 y^1: 1");
        assert_eq!(
            tutte_polynomial(&Multigraph::empty(2).unwrap()),
            Err(AlgebraicError::Disconnected)
        );
    }

    #[test]
    fn tutte_budget_is_an_error() {
        let g = Multigraph::from(&Graph::complete(7).unwrap());
        TUTTE_CACHE.with(|c| c.borrow_mut().clear());
        assert_eq!(
            tutte_polynomial_with_budget(&g, 3),
            Err(AlgebraicError::TutteBudgetExceeded { budget: 3 })
        );
    }

    #[test]
    fn chromatic_examples() {
        let k3 = Graph::complete(3).unwrap();
        // k (k - 1) (k - 2)
        assert_eq!(chromatic_polynomial(&k3).unwrap(), poly(&[0, 2, -3, 1]));
        assert_eq!(chromatic_number(&k3).unwrap(), 3);
        assert_eq!(chromatic_number(&Graph::empty(1).unwrap()).unwrap(), 1);
        assert_eq!(chromatic_number(&Graph::cycle(7).unwrap()).unwrap(), 3);
        assert_eq!(chromatic_number(&petersen()).unwrap(), 3);
        for g in [
            Graph::cycle(5).unwrap(),
            petersen(),
            Graph::complete_bipartite(3, 4).unwrap(),
        ] {
            assert_eq!(
                chromatic_polynomial(&g).unwrap(),
                chromatic_polynomial_direct(&g)
            );
        }
    }

    #[test]
    fn fractional_examples() {
        for n in 1..=6 {
            assert_eq!(
                fractional_chromatic_number(&Graph::complete(n).unwrap()),
                rat(n as i64, 1)
            );
        }
        assert_eq!(
            fractional_chromatic_number(&Graph::cycle(5).unwrap()),
            rat(5, 2)
        );
        assert_eq!(
            fractional_chromatic_number(&Graph::cycle(7).unwrap()),
            rat(7, 3)
        );
        assert_eq!(fractional_chromatic_number(&petersen()), rat(5, 2));
        assert_eq!(
            fractional_chromatic_number(&Graph::path(2).unwrap()),
            rat(2, 1)
        );
        assert!(has_chromatic_gap(&rat(5, 2), 3));
        assert!(!has_chromatic_gap(&rat(2, 1), 2));
    }

    #[test]
    fn fractional_certificate_is_tight() {
        for g in [
            Graph::cycle(5).unwrap(),
            petersen(),
            Graph::cycle(9).unwrap(),
        ] {
            let sol = fractional_coloring(&g);
            let total: BigRational = sol.set_weights.iter().map(|(_, w)| w.clone()).sum();
            assert_eq!(total, sol.value);
            for v in 0..g.order() {
                let cover: BigRational = sol
                    .set_weights
                    .iter()
                    .filter(|(s, _)| s & (1 << v) != 0)
                    .map(|(_, w)| w.clone())
                    .sum();
                assert!(cover >= BigRational::one());
            }
            let ysum: BigRational = sol.vertex_weights.iter().cloned().sum();
            assert_eq!(ysum, sol.value);
            for set in maximal_independent_sets(&g) {
                let load: BigRational = (0..g.order())
                    .filter(|&v| set & (1 << v) != 0)
                    .map(|v| sol.vertex_weights[v].clone())
                    .sum();
                assert!(load <= BigRational::one());
            }
        }
    }

    #[test]
    fn independent_sets_of_c5() {
        let sets = maximal_independent_sets(&Graph::cycle(5).unwrap());
        assert_eq!(sets.len(), 5);
        assert!(sets.iter().all(|s| s.count_ones() == 2));
    }

    #[test]
    fn digests_are_stable() {
        assert_eq!(poly(&[1, 2]).digest(), stable_digest("1,2"));
        assert_ne!(poly(&[1, 2]).digest(), poly(&[2, 1]).digest());
    }
}
