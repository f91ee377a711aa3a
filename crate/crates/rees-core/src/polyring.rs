//! Sparse exact polynomial arithmetic in the bigraded ring
//! B = F_p[x, y, T1, T2, T3], with deg x = deg y = (1,0) and
//! deg T_k = (0,1), plus the two graded subrings that occur on their own:
//! binary forms in (x, y) and forms in (T1, T2, T3).
//!
//! Every polynomial is homogeneous and carries its (bi)degree; the zero
//! polynomial is degree-polymorphic in sums so accumulators stay simple.
//! Term maps are B-trees, so iteration (and printing) is canonical: x-degree
//! ascending, then T-exponents in ascending lexicographic order.

use crate::error::{Error, Result};
use crate::exactlin::FieldElem;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent triple (e1, e2, e3) for a monomial T1^e1 T2^e2 T3^e3.
pub type TExp = (u16, u16, u16);

pub(crate) fn t_exp_degree(e: TExp) -> usize {
    e.0 as usize + e.1 as usize + e.2 as usize
}

fn fmt_term(
    out: &mut String,
    first: bool,
    c: FieldElem,
    factors: &[(&str, usize)],
) {
    if !first {
        out.push_str(" + ");
    }
    let vars: Vec<String> = factors
        .iter()
        .filter(|&&(_, e)| e > 0)
        .map(|&(name, e)| {
            if e == 1 {
                name.to_string()
            } else {
                format!("{name}^{e}")
            }
        })
        .collect();
    if vars.is_empty() {
        out.push_str(&c.val().to_string());
    } else if c.val() == 1 {
        out.push_str(&vars.join("*"));
    } else {
        out.push_str(&format!("{}*{}", c.val(), vars.join("*")));
    }
}

/// A homogeneous binary form of a fixed degree. The term map is keyed by the
/// x-exponent, so the stored coefficient list reads y-pure first. The type is
/// variable-agnostic: it also serves as a form in (T1, T2) after
/// specialization, via explicit display names.
#[derive(Clone, PartialEq, Eq)]
pub struct BiForm {
    n: usize,
    p: u64,
    c: BTreeMap<usize, FieldElem>,
}

impl BiForm {
    pub fn zero(n: usize, p: u64) -> BiForm {
        BiForm {
            n,
            p,
            c: BTreeMap::new(),
        }
    }

    /// Builds a form of degree `coeffs.len() - 1` from the coefficient list
    /// indexed by x-exponent (y-pure coefficient first).
    pub fn from_coeffs(p: u64, coeffs: &[i64]) -> BiForm {
        assert!(!coeffs.is_empty());
        let n = coeffs.len() - 1;
        let mut f = BiForm::zero(n, p);
        for (w, &v) in coeffs.iter().enumerate() {
            f.set_coeff(w, FieldElem::from_i64(v, p));
        }
        f
    }

    pub fn monomial(n: usize, p: u64, w: usize, c: FieldElem) -> BiForm {
        let mut f = BiForm::zero(n, p);
        f.set_coeff(w, c);
        f
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn coeff(&self, w: usize) -> FieldElem {
        self.c.get(&w).copied().unwrap_or_else(|| FieldElem::zero(self.p))
    }

    pub fn set_coeff(&mut self, w: usize, v: FieldElem) {
        assert!(w <= self.n, "x-exponent {w} exceeds degree {}", self.n);
        if v.is_zero() {
            self.c.remove(&w);
        } else {
            self.c.insert(w, v);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, FieldElem)> + '_ {
        self.c.iter().map(|(&w, &v)| (w, v))
    }

    pub fn min_x(&self) -> Option<usize> {
        self.c.keys().next().copied()
    }

    pub fn max_x(&self) -> Option<usize> {
        self.c.keys().next_back().copied()
    }

    pub fn add(&self, rhs: &BiForm) -> BiForm {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        assert_eq!(self.n, rhs.n, "degree mismatch in binary-form sum");
        let mut out = self.clone();
        for (w, v) in rhs.terms() {
            out.set_coeff(w, out.coeff(w) + v);
        }
        out
    }

    pub fn sub(&self, rhs: &BiForm) -> BiForm {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> BiForm {
        self.scale(-FieldElem::one(self.p))
    }

    pub fn scale(&self, s: FieldElem) -> BiForm {
        let mut out = BiForm::zero(self.n, self.p);
        for (w, v) in self.terms() {
            out.set_coeff(w, v * s);
        }
        out
    }

    pub fn mul(&self, rhs: &BiForm) -> BiForm {
        let mut out = BiForm::zero(self.n + rhs.n, self.p);
        for (w1, v1) in self.terms() {
            for (w2, v2) in rhs.terms() {
                out.set_coeff(w1 + w2, out.coeff(w1 + w2) + v1 * v2);
            }
        }
        out
    }

    /// Applies the linear substitution x -> a x + b y, y -> c x + d y.
    pub fn substitute_linear(&self, a: FieldElem, b: FieldElem, c: FieldElem, d: FieldElem) -> BiForm {
        let p = self.p;
        let x_img = BiForm::from_coeffs(p, &[0, 0]).with(|f| {
            f.set_coeff(1, a);
            f.set_coeff(0, b);
        });
        let y_img = BiForm::from_coeffs(p, &[0, 0]).with(|f| {
            f.set_coeff(1, c);
            f.set_coeff(0, d);
        });
        let mut out = BiForm::zero(self.n, p);
        for (w, v) in self.terms() {
            let mut term = BiForm::from_coeffs(p, &[1]);
            for _ in 0..w {
                term = term.mul(&x_img);
            }
            for _ in 0..(self.n - w) {
                term = term.mul(&y_img);
            }
            out = out.add(&term.scale(v));
        }
        out
    }

    fn with(mut self, f: impl FnOnce(&mut BiForm)) -> BiForm {
        f(&mut self);
        self
    }

    /// True when the two forms agree up to a nonzero scalar.
    pub fn proportional(&self, rhs: &BiForm) -> bool {
        if self.is_zero() || rhs.is_zero() {
            return self.is_zero() && rhs.is_zero();
        }
        if self.n != rhs.n {
            return false;
        }
        let (&w0, &a0) = self.c.iter().next().unwrap();
        let b0 = rhs.coeff(w0);
        if b0.is_zero() {
            return false;
        }
        let s = b0 * a0.inv();
        self.scale(s) == *rhs
    }

    /// Strips common monomial factors: returns (x-power, y-power, stripped
    /// univariate part evaluated at y = 1). Panics on the zero form.
    pub(crate) fn strip(&self) -> (usize, usize, UniPoly) {
        let a = self.min_x().expect("strip of zero form");
        let b = self.n - self.max_x().unwrap();
        let deg = self.max_x().unwrap() - a;
        let mut c = vec![FieldElem::zero(self.p); deg + 1];
        for (w, v) in self.terms() {
            c[w - a] = v;
        }
        (a, b, UniPoly::new(self.p, c))
    }

    pub fn display_with(&self, xname: &str, yname: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut first = true;
        for (w, v) in self.terms() {
            fmt_term(&mut out, first, v, &[(xname, w), (yname, self.n - w)]);
            first = false;
        }
        out
    }
}

impl fmt::Display for BiForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with("x", "y"))
    }
}

impl fmt::Debug for BiForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiForm[{}]({})", self.n, self)
    }
}

/// Greatest common divisor of a list of binary forms, monic in the highest
/// x-power. Zero entries are ignored; the gcd of an all-zero (or empty) list
/// is the zero form of degree 0.
pub fn gcd_biforms(fs: &[BiForm]) -> BiForm {
    let nonzero: Vec<&BiForm> = fs.iter().filter(|f| !f.is_zero()).collect();
    let Some(first) = nonzero.first() else {
        return BiForm::zero(0, fs.first().map(|f| f.modulus()).unwrap_or(3));
    };
    let p = first.modulus();
    let mut xpow = usize::MAX;
    let mut ypow = usize::MAX;
    let mut uni: Option<UniPoly> = None;
    for f in &nonzero {
        let (a, b, u) = f.strip();
        xpow = xpow.min(a);
        ypow = ypow.min(b);
        uni = Some(match uni {
            None => u,
            Some(g) => g.gcd(&u),
        });
    }
    let g = uni.unwrap().monic();
    let gdeg = g.deg().unwrap_or(0);
    let mut out = BiForm::zero(xpow + ypow + gdeg, p);
    for (k, v) in g.coeffs().iter().enumerate() {
        if !v.is_zero() {
            out.set_coeff(xpow + k, *v);
        }
    }
    out
}

/// Dense univariate polynomial over F_p, ascending coefficients, trimmed.
/// Internal helper for gcds and square-free analysis of dehomogenized forms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct UniPoly {
    p: u64,
    c: Vec<FieldElem>,
}

impl UniPoly {
    pub(crate) fn new(p: u64, mut c: Vec<FieldElem>) -> UniPoly {
        while c.last().is_some_and(|v| v.is_zero()) {
            c.pop();
        }
        UniPoly { p, c }
    }

    pub(crate) fn zero(p: u64) -> UniPoly {
        UniPoly { p, c: Vec::new() }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub(crate) fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub(crate) fn coeffs(&self) -> &[FieldElem] {
        &self.c
    }

    pub(crate) fn lead(&self) -> FieldElem {
        *self.c.last().expect("leading coeff of zero")
    }

    pub(crate) fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().inv();
        UniPoly::new(self.p, self.c.iter().map(|&v| v * inv).collect())
    }

    #[cfg(test)]
    pub(crate) fn mul(&self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero(self.p);
        }
        let mut c = vec![FieldElem::zero(self.p); self.c.len() + rhs.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UniPoly::new(self.p, c)
    }

    pub(crate) fn rem(&self, div: &UniPoly) -> UniPoly {
        assert!(!div.is_zero(), "division by zero polynomial");
        let mut r = self.c.clone();
        let dd = div.deg().unwrap();
        let lead_inv = div.lead().inv();
        while r.len() > dd {
            let k = r.len() - 1;
            let f = *r.last().unwrap() * lead_inv;
            if !f.is_zero() {
                for (i, &dv) in div.c.iter().enumerate() {
                    let idx = k - dd + i;
                    r[idx] -= f * dv;
                }
            }
            r.pop();
        }
        UniPoly::new(self.p, r)
    }

    pub(crate) fn div_exact(&self, div: &UniPoly) -> UniPoly {
        assert!(!div.is_zero());
        if self.is_zero() {
            return UniPoly::zero(self.p);
        }
        let dd = div.deg().unwrap();
        let nd = self.deg().unwrap();
        assert!(nd >= dd, "inexact division");
        let lead_inv = div.lead().inv();
        let mut r = self.c.clone();
        let mut q = vec![FieldElem::zero(self.p); nd - dd + 1];
        for k in (dd..=nd).rev() {
            let f = r[k] * lead_inv;
            q[k - dd] = f;
            if !f.is_zero() {
                for (i, &dv) in div.c.iter().enumerate() {
                    r[k - dd + i] -= f * dv;
                }
            }
        }
        assert!(
            r.iter().all(|v| v.is_zero()),
            "inexact polynomial division"
        );
        UniPoly::new(self.p, q)
    }

    pub(crate) fn gcd(&self, rhs: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub(crate) fn derivative(&self) -> UniPoly {
        if self.c.len() <= 1 {
            return UniPoly::zero(self.p);
        }
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &v)| v * FieldElem::new(k as u64, self.p))
            .collect();
        UniPoly::new(self.p, c)
    }

    /// Yun square-free decomposition: returns the square-free factors with
    /// their multiplicities, product = monic(self). Valid because every
    /// multiplicity met here is below the characteristic.
    pub(crate) fn squarefree_decomposition(&self) -> Vec<(UniPoly, usize)> {
        assert!(!self.is_zero());
        let f = self.monic();
        if f.deg() == Some(0) {
            return Vec::new();
        }
        let df = f.derivative();
        let mut out = Vec::new();
        let a0 = f.gcd(&df);
        let mut b = f.div_exact(&a0);
        let mut c = df.div_exact(&a0);
        let mut k = 1usize;
        loop {
            let d = c.sub(&b.derivative());
            if b.deg() == Some(0) {
                break;
            }
            let a = b.gcd(&d);
            if a.deg().unwrap_or(0) > 0 {
                out.push((a.clone(), k));
            }
            b = b.div_exact(&a);
            c = d.div_exact(&a);
            k += 1;
        }
        out
    }

    fn sub(&self, rhs: &UniPoly) -> UniPoly {
        let n = self.c.len().max(rhs.c.len());
        let mut c = vec![FieldElem::zero(self.p); n];
        for (i, &v) in self.c.iter().enumerate() {
            c[i] += v;
        }
        for (i, &v) in rhs.c.iter().enumerate() {
            c[i] -= v;
        }
        UniPoly::new(self.p, c)
    }
}

fn binom_fe(n: usize, k: usize, p: u64) -> FieldElem {
    if k > n {
        return FieldElem::zero(p);
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k.min(n - k) {
        num = num * (n - i) as u128 % p as u128;
        den = den * (i + 1) as u128 % p as u128;
    }
    FieldElem::new(num as u64, p) * FieldElem::new(den as u64, p).inv()
}

/// A homogeneous form of fixed degree in S = F_p[T1, T2, T3].
#[derive(Clone, PartialEq, Eq)]
pub struct SPoly {
    j: usize,
    p: u64,
    c: BTreeMap<TExp, FieldElem>,
}

impl SPoly {
    pub fn zero(j: usize, p: u64) -> SPoly {
        SPoly {
            j,
            p,
            c: BTreeMap::new(),
        }
    }

    pub fn constant(p: u64, v: FieldElem) -> SPoly {
        let mut f = SPoly::zero(0, p);
        f.set_coeff((0, 0, 0), v);
        f
    }

    /// The variable T_k, k in 1..=3.
    pub fn var(k: usize, p: u64) -> SPoly {
        let mut f = SPoly::zero(1, p);
        let e = match k {
            1 => (1, 0, 0),
            2 => (0, 1, 0),
            3 => (0, 0, 1),
            _ => panic!("T-variable index {k} out of range"),
        };
        f.set_coeff(e, FieldElem::one(p));
        f
    }

    pub fn monomial(j: usize, p: u64, e: TExp, v: FieldElem) -> SPoly {
        let mut f = SPoly::zero(j, p);
        f.set_coeff(e, v);
        f
    }

    pub fn degree(&self) -> usize {
        self.j
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn coeff(&self, e: TExp) -> FieldElem {
        self.c.get(&e).copied().unwrap_or_else(|| FieldElem::zero(self.p))
    }

    pub fn set_coeff(&mut self, e: TExp, v: FieldElem) {
        assert_eq!(t_exp_degree(e), self.j, "T-exponent degree mismatch");
        if v.is_zero() {
            self.c.remove(&e);
        } else {
            self.c.insert(e, v);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (TExp, FieldElem)> + '_ {
        self.c.iter().map(|(&e, &v)| (e, v))
    }

    pub fn add(&self, rhs: &SPoly) -> SPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        assert_eq!(self.j, rhs.j, "degree mismatch in S-form sum");
        let mut out = self.clone();
        for (e, v) in rhs.terms() {
            out.set_coeff(e, out.coeff(e) + v);
        }
        out
    }

    pub fn sub(&self, rhs: &SPoly) -> SPoly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> SPoly {
        self.scale(-FieldElem::one(self.p))
    }

    pub fn scale(&self, s: FieldElem) -> SPoly {
        let mut out = SPoly::zero(self.j, self.p);
        for (e, v) in self.terms() {
            out.set_coeff(e, v * s);
        }
        out
    }

    pub fn mul(&self, rhs: &SPoly) -> SPoly {
        let mut out = SPoly::zero(self.j + rhs.j, self.p);
        for (e1, v1) in self.terms() {
            for (e2, v2) in rhs.terms() {
                let e = (e1.0 + e2.0, e1.1 + e2.1, e1.2 + e2.2);
                out.set_coeff(e, out.coeff(e) + v1 * v2);
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> SPoly {
        let mut acc = SPoly::constant(self.p, FieldElem::one(self.p));
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, t: [FieldElem; 3]) -> FieldElem {
        let mut acc = FieldElem::zero(self.p);
        for (e, v) in self.terms() {
            let m = t[0].pow(e.0 as u64) * t[1].pow(e.1 as u64) * t[2].pow(e.2 as u64);
            acc += v * m;
        }
        acc
    }

    /// Specializes T3 -> alpha T1 + beta T2, returning a binary form in
    /// (T1, T2) whose x-slot is T1.
    pub fn specialize_t3(&self, alpha: FieldElem, beta: FieldElem) -> BiForm {
        let p = self.p;
        let mut out = BiForm::zero(self.j, p);
        for (e, v) in self.terms() {
            let (e1, e3) = (e.0 as usize, e.2 as usize);
            // (alpha T1 + beta T2)^e3, split binomially.
            for k in 0..=e3 {
                let coeff = v
                    * binom_fe(e3, k, p)
                    * alpha.pow(k as u64)
                    * beta.pow((e3 - k) as u64);
                let w = e1 + k;
                out.set_coeff(w, out.coeff(w) + coeff);
            }
        }
        out
    }

    pub fn proportional(&self, rhs: &SPoly) -> bool {
        if self.is_zero() || rhs.is_zero() {
            return self.is_zero() && rhs.is_zero();
        }
        if self.j != rhs.j {
            return false;
        }
        let (&e0, &a0) = self.c.iter().next().unwrap();
        let b0 = rhs.coeff(e0);
        if b0.is_zero() {
            return false;
        }
        let s = b0 * a0.inv();
        self.scale(s) == *rhs
    }
}

impl fmt::Display for SPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        let mut first = true;
        for (e, v) in self.terms() {
            fmt_term(
                &mut out,
                first,
                v,
                &[
                    ("T1", e.0 as usize),
                    ("T2", e.1 as usize),
                    ("T3", e.2 as usize),
                ],
            );
            first = false;
        }
        write!(f, "{out}")
    }
}

impl fmt::Debug for SPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SPoly[{}]({})", self.j, self)
    }
}

/// A bihomogeneous element of B = F_p[x, y, T1, T2, T3] of bidegree (i, j):
/// xy-degree i, T-degree j. Keys are (x-exponent, T-exponent triple).
#[derive(Clone, PartialEq, Eq)]
pub struct BPoly {
    i: usize,
    j: usize,
    p: u64,
    c: BTreeMap<(usize, TExp), FieldElem>,
}

impl BPoly {
    pub fn zero(i: usize, j: usize, p: u64) -> BPoly {
        BPoly {
            i,
            j,
            p,
            c: BTreeMap::new(),
        }
    }

    pub fn from_biform(f: &BiForm) -> BPoly {
        let mut out = BPoly::zero(f.degree(), 0, f.modulus());
        for (w, v) in f.terms() {
            out.set_coeff(w, (0, 0, 0), v);
        }
        out
    }

    pub fn from_spoly(f: &SPoly) -> BPoly {
        let mut out = BPoly::zero(0, f.degree(), f.modulus());
        for (e, v) in f.terms() {
            out.set_coeff(0, e, v);
        }
        out
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.i, self.j)
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn coeff(&self, w: usize, e: TExp) -> FieldElem {
        self.c
            .get(&(w, e))
            .copied()
            .unwrap_or_else(|| FieldElem::zero(self.p))
    }

    pub fn set_coeff(&mut self, w: usize, e: TExp, v: FieldElem) {
        assert!(w <= self.i, "x-exponent {w} exceeds xy-degree {}", self.i);
        assert_eq!(t_exp_degree(e), self.j, "T-degree mismatch");
        if v.is_zero() {
            self.c.remove(&(w, e));
        } else {
            self.c.insert((w, e), v);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, TExp, FieldElem)> + '_ {
        self.c.iter().map(|(&(w, e), &v)| (w, e, v))
    }

    pub fn add(&self, rhs: &BPoly) -> BPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        assert_eq!(
            (self.i, self.j),
            (rhs.i, rhs.j),
            "bidegree mismatch in sum"
        );
        let mut out = self.clone();
        for (w, e, v) in rhs.terms() {
            out.set_coeff(w, e, out.coeff(w, e) + v);
        }
        out
    }

    pub fn sub(&self, rhs: &BPoly) -> BPoly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> BPoly {
        self.scale(-FieldElem::one(self.p))
    }

    pub fn scale(&self, s: FieldElem) -> BPoly {
        let mut out = BPoly::zero(self.i, self.j, self.p);
        for (w, e, v) in self.terms() {
            out.set_coeff(w, e, v * s);
        }
        out
    }

    pub fn mul(&self, rhs: &BPoly) -> BPoly {
        let mut out = BPoly::zero(self.i + rhs.i, self.j + rhs.j, self.p);
        for (w1, e1, v1) in self.terms() {
            for (w2, e2, v2) in rhs.terms() {
                let w = w1 + w2;
                let e = (e1.0 + e2.0, e1.1 + e2.1, e1.2 + e2.2);
                out.set_coeff(w, e, out.coeff(w, e) + v1 * v2);
            }
        }
        out
    }

    pub fn mul_biform(&self, f: &BiForm) -> BPoly {
        self.mul(&BPoly::from_biform(f))
    }

    pub fn mul_spoly(&self, f: &SPoly) -> BPoly {
        self.mul(&BPoly::from_spoly(f))
    }

    /// Multiplies by the monomial x^a y^b.
    pub fn mul_xy(&self, a: usize, b: usize) -> BPoly {
        let mut out = BPoly::zero(self.i + a + b, self.j, self.p);
        for (w, e, v) in self.terms() {
            out.set_coeff(w + a, e, v);
        }
        out
    }

    /// Substitutes T_k -> h_k for binary forms of a common degree; the image
    /// is a binary form of degree i + j * deg(h).
    pub fn substitute_t(&self, hs: &[BiForm; 3]) -> BiForm {
        let p = self.p;
        let d = hs[0].degree();
        assert!(hs.iter().all(|h| h.degree() == d), "h-degree mismatch");
        let mut pows: [Vec<BiForm>; 3] = [
            vec![BiForm::from_coeffs(p, &[1])],
            vec![BiForm::from_coeffs(p, &[1])],
            vec![BiForm::from_coeffs(p, &[1])],
        ];
        for k in 0..3 {
            for e in 1..=self.j {
                let next = pows[k][e - 1].mul(&hs[k]);
                pows[k].push(next);
            }
        }
        // Group terms by T-exponent so each h-product is assembled once.
        let mut by_t: BTreeMap<TExp, BiForm> = BTreeMap::new();
        for (w, e, v) in self.terms() {
            by_t
                .entry(e)
                .or_insert_with(|| BiForm::zero(self.i, p))
                .set_coeff(w, v);
        }
        let mut out = BiForm::zero(self.i + self.j * d, p);
        for (e, xy) in by_t {
            let prod = pows[0][e.0 as usize]
                .mul(&pows[1][e.1 as usize])
                .mul(&pows[2][e.2 as usize]);
            out = out.add(&xy.mul(&prod));
        }
        out
    }

    pub fn proportional(&self, rhs: &BPoly) -> bool {
        if self.is_zero() || rhs.is_zero() {
            return self.is_zero() && rhs.is_zero();
        }
        if (self.i, self.j) != (rhs.i, rhs.j) {
            return false;
        }
        let (&(w0, e0), &a0) = self.c.iter().next().unwrap();
        let b0 = rhs.coeff(w0, e0);
        if b0.is_zero() {
            return false;
        }
        let s = b0 * a0.inv();
        self.scale(s) == *rhs
    }
}

impl fmt::Display for BPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        let mut first = true;
        for (w, e, v) in self.terms() {
            fmt_term(
                &mut out,
                first,
                v,
                &[
                    ("x", w),
                    ("y", self.i - w),
                    ("T1", e.0 as usize),
                    ("T2", e.1 as usize),
                    ("T3", e.2 as usize),
                ],
            );
            first = false;
        }
        write!(f, "{out}")
    }
}

impl fmt::Debug for BPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BPoly[({},{})]({})", self.i, self.j, self)
    }
}

/// The ordered monomial basis of the bidegree-(i, j) strand of B:
/// x-exponent ascending, then T-exponents in ascending lexicographic order.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Strand {
    pub i: usize,
    pub j: usize,
}

impl Strand {
    pub fn new(i: usize, j: usize) -> Strand {
        Strand { i, j }
    }

    /// Number of T-monomials of degree j.
    pub fn t_dim(j: usize) -> usize {
        (j + 1) * (j + 2) / 2
    }

    pub fn dim(&self) -> usize {
        (self.i + 1) * Strand::t_dim(self.j)
    }

    /// T-exponents of degree j in ascending lexicographic order.
    pub fn t_exps(j: usize) -> Vec<TExp> {
        let mut out = Vec::with_capacity(Strand::t_dim(j));
        for e1 in 0..=j {
            for e2 in 0..=(j - e1) {
                out.push((e1 as u16, e2 as u16, (j - e1 - e2) as u16));
            }
        }
        out
    }

    /// Rank of a T-exponent within `t_exps(j)`: the e1-blocks have sizes
    /// j+1, j, ..., so the block offset is e1(j+1) - e1(e1-1)/2.
    pub fn t_rank(e: TExp, j: usize) -> usize {
        debug_assert_eq!(t_exp_degree(e), j);
        let e1 = e.0 as usize;
        e1 * (j + 1) - e1 * e1.saturating_sub(1) / 2 + e.1 as usize
    }

    pub fn index(&self, w: usize, e: TExp) -> usize {
        debug_assert!(w <= self.i);
        w * Strand::t_dim(self.j) + Strand::t_rank(e, self.j)
    }

    /// The (x-exponent, T-exponent) monomial at a basis index.
    pub fn monomial(&self, idx: usize) -> (usize, TExp) {
        let td = Strand::t_dim(self.j);
        let w = idx / td;
        let r = idx % td;
        // Invert t_rank by scanning e1 blocks.
        let mut e1 = 0usize;
        let mut base = 0usize;
        loop {
            let block = self.j - e1 + 1;
            if r < base + block {
                let e2 = r - base;
                return (w, (e1 as u16, e2 as u16, (self.j - e1 - e2) as u16));
            }
            base += block;
            e1 += 1;
        }
    }

    pub fn coeff_vector(&self, f: &BPoly) -> Vec<FieldElem> {
        assert_eq!(f.bidegree(), (self.i, self.j), "strand bidegree mismatch");
        let mut v = vec![FieldElem::zero(f.modulus()); self.dim()];
        for (w, e, c) in f.terms() {
            v[self.index(w, e)] = c;
        }
        v
    }

    pub fn poly_from_vec(&self, v: &[FieldElem], p: u64) -> BPoly {
        assert_eq!(v.len(), self.dim());
        let mut f = BPoly::zero(self.i, self.j, p);
        for (idx, &c) in v.iter().enumerate() {
            if !c.is_zero() {
                let (w, e) = self.monomial(idx);
                f.set_coeff(w, e, c);
            }
        }
        f
    }
}

/// A rows-by-cols grid of S-forms (used for banded multiplication matrices
/// and syzygy catalogs). Entries keep their own degrees; products in
/// `mul_vec` enforce consistency term by term.
#[derive(Clone)]
pub struct SMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<SPoly>,
}

impl SMatrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> SPoly) -> SMatrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        SMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &SPoly {
        &self.entries[r * self.cols + c]
    }

    pub fn transpose(&self) -> SMatrix {
        SMatrix::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    /// Determinant by Laplace expansion over column subsets, memoized.
    /// Intended for the small matrices that occur here (size at most 20).
    pub fn det(&self) -> SPoly {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let p = self
            .entries
            .first()
            .map(|e| e.modulus())
            .expect("determinant of an empty matrix");
        assert!(n <= 20, "determinant size {n} too large for subset expansion");
        let mut memo: Vec<Option<SPoly>> = vec![None; 1usize << n];
        self.det_rec((1u32 << n) - 1, p, &mut memo)
    }

    /// Determinant of the submatrix on the last popcount(cols) rows and the
    /// column set `cols`, expanding along its first row.
    fn det_rec(&self, cols: u32, p: u64, memo: &mut Vec<Option<SPoly>>) -> SPoly {
        if cols == 0 {
            return SPoly::constant(p, FieldElem::one(p));
        }
        if let Some(f) = &memo[cols as usize] {
            return f.clone();
        }
        let k = cols.count_ones() as usize;
        let r = self.rows - k;
        let mut acc: Option<SPoly> = None;
        let mut sign = false;
        for c in 0..self.cols {
            if cols & (1 << c) == 0 {
                continue;
            }
            let entry = self.at(r, c);
            if !entry.is_zero() {
                let sub = self.det_rec(cols & !(1u32 << c), p, memo);
                if !sub.is_zero() {
                    let mut term = entry.mul(&sub);
                    if sign {
                        term = term.neg();
                    }
                    acc = Some(match acc {
                        None => term,
                        Some(a) => a.add(&term),
                    });
                }
            }
            sign = !sign;
        }
        let out = acc.unwrap_or_else(|| SPoly::zero(k, p));
        memo[cols as usize] = Some(out.clone());
        out
    }

    /// Evaluates every entry at a T-point, producing a scalar matrix.
    pub fn specialize(&self, t: [FieldElem; 3]) -> crate::exactlin::ExactMatrix {
        let p = self
            .entries
            .first()
            .map(|e| e.modulus())
            .expect("specialize of an empty matrix");
        let rows = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.at(r, c).eval(t)).collect())
            .collect();
        crate::exactlin::ExactMatrix::from_rows(rows, p).expect("ragged specialization")
    }

    /// Matrix-vector product over S.
    pub fn mul_vec(&self, v: &[SPoly]) -> Vec<SPoly> {
        assert_eq!(v.len(), self.cols, "mul_vec length mismatch");
        let p = v
            .first()
            .map(|f| f.modulus())
            .unwrap_or_else(|| self.entries[0].modulus());
        (0..self.rows)
            .map(|r| {
                let mut acc: Option<SPoly> = None;
                for c in 0..self.cols {
                    let e = self.at(r, c);
                    if e.is_zero() || v[c].is_zero() {
                        continue;
                    }
                    let prod = e.mul(&v[c]);
                    acc = Some(match acc {
                        None => prod,
                        Some(a) => a.add(&prod),
                    });
                }
                acc.unwrap_or_else(|| SPoly::zero(0, p))
            })
            .collect()
    }
}

/// Product of two B-polynomials given as (biform, spoly) layers is common
/// enough to deserve a helper: b * s with b a binary form and s an S-form.
pub fn bpoly_of(b: &BiForm, s: &SPoly) -> BPoly {
    BPoly::from_biform(b).mul(&BPoly::from_spoly(s))
}

/// Validates that a coefficient list encodes a form of the stated degree.
pub fn coeffs_for_degree(p: u64, coeffs: &[i64], degree: usize) -> Result<BiForm> {
    if coeffs.len() != degree + 1 {
        return Err(Error::DegreeInconsistent(format!(
            "coefficient list of length {} does not encode a form of degree {}",
            coeffs.len(),
            degree
        )));
    }
    Ok(BiForm::from_coeffs(p, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u64 = 101;

    fn fe(v: i64) -> FieldElem {
        FieldElem::from_i64(v, P)
    }

    #[test]
    fn biform_product_difference_of_squares() {
        let a = BiForm::from_coeffs(P, &[1, 1]); // y + x
        let b = BiForm::from_coeffs(P, &[-1, 1]); // -y + x
        let prod = a.mul(&b);
        assert_eq!(prod, BiForm::from_coeffs(P, &[-1, 0, 1])); // x^2 - y^2
    }

    #[test]
    fn biform_gcd_examples() {
        // gcd(x^2 y^3, x^4 y) = x^2 y.
        let a = BiForm::monomial(5, P, 2, fe(1));
        let b = BiForm::monomial(5, P, 4, fe(1));
        let g = gcd_biforms(&[a, b]);
        assert_eq!(g, BiForm::monomial(3, P, 2, fe(1)));

        // Coprime trio coming from a Hilbert-Burch matrix.
        let q = BiForm::from_coeffs(P, &[1, 0, 1]); // y^2 + x^2
        let quart = BiForm::from_coeffs(P, &[1, 0, 0, 0, 1]); // y^4 + x^4
        let h1 = BiForm::from_coeffs(P, &[0, 1]).mul(&BiForm::from_coeffs(P, &[1, 0])).mul(&quart);
        let h2 = q.mul(&quart);
        let h3 = q.mul(&BiForm::monomial(4, P, 0, fe(1)));
        assert_eq!(gcd_biforms(&[h1.clone(), h2.clone(), h3.clone()]).degree(), 0);
        // Sharing the quartic.
        let g = gcd_biforms(&[h1, h2]);
        assert!(g.proportional(&quart));
    }

    #[test]
    fn unipoly_gcd_and_squarefree() {
        // (t+1)^2 (t+2)^3
        let t1 = UniPoly::new(P, vec![fe(1), fe(1)]);
        let t2 = UniPoly::new(P, vec![fe(2), fe(1)]);
        let f = t1.mul(&t1).mul(&t2).mul(&t2).mul(&t2);
        let dec = f.squarefree_decomposition();
        assert_eq!(dec.len(), 2);
        assert_eq!(dec[0].0, t1);
        assert_eq!(dec[0].1, 2);
        assert_eq!(dec[1].0, t2);
        assert_eq!(dec[1].1, 3);
        assert_eq!(t1.mul(&t2).gcd(&t1.mul(&t1)), t1.monic());
    }

    #[test]
    fn spoly_arithmetic_and_specialization() {
        let t1 = SPoly::var(1, P);
        let t3 = SPoly::var(3, P);
        let f = t1.mul(&t3); // T1 T3
        let spec = f.specialize_t3(fe(2), fe(5)); // T3 -> 2 T1 + 5 T2
        // T1 (2 T1 + 5 T2) = 2 T1^2 + 5 T1 T2
        let mut want = BiForm::zero(2, P);
        want.set_coeff(2, fe(2));
        want.set_coeff(1, fe(5));
        assert_eq!(spec, want);
        assert_eq!(
            f.eval([fe(3), fe(0), fe(7)]).val(),
            21
        );
    }

    #[test]
    fn bpoly_substitution_kills_relations() {
        // F = T1 T3 - T2^2 vanishes on (y^2, x y, x^2).
        let t1 = SPoly::var(1, P);
        let t2 = SPoly::var(2, P);
        let t3 = SPoly::var(3, P);
        let f = BPoly::from_spoly(&t1.mul(&t3).sub(&t2.mul(&t2)));
        let hs = [
            BiForm::from_coeffs(P, &[1, 0, 0]),
            BiForm::from_coeffs(P, &[0, 1, 0]),
            BiForm::from_coeffs(P, &[0, 0, 1]),
        ];
        assert!(f.substitute_t(&hs).is_zero());
        // And a non-relation maps to a nonzero form of the right degree.
        let g = BPoly::from_spoly(&t1.mul(&t1));
        let img = g.substitute_t(&hs);
        assert!(!img.is_zero());
        assert_eq!(img.degree(), 4);
    }

    #[test]
    fn strand_basis_order_and_roundtrip() {
        let s = Strand::new(2, 2);
        assert_eq!(s.dim(), 3 * 6);
        assert_eq!(Strand::t_exps(1), vec![(0, 0, 1), (0, 1, 0), (1, 0, 0)]);
        // First basis monomial is y^i * T3^j.
        assert_eq!(s.monomial(0), (0, (0, 0, 2)));
        for idx in 0..s.dim() {
            let (w, e) = s.monomial(idx);
            assert_eq!(s.index(w, e), idx);
        }
        let mut f = BPoly::zero(2, 2, P);
        f.set_coeff(1, (1, 1, 0), fe(7));
        f.set_coeff(0, (0, 0, 2), fe(3));
        let v = s.coeff_vector(&f);
        assert_eq!(v[0].val(), 3);
        assert_eq!(s.poly_from_vec(&v, P), f);
    }

    #[test]
    fn smatrix_mul_vec() {
        let t1 = SPoly::var(1, P);
        let t2 = SPoly::var(2, P);
        // [T1 T2] * [T2, -T1]^t = 0
        let m = SMatrix::from_fn(1, 2, |_, c| if c == 0 { t1.clone() } else { t2.clone() });
        let v = vec![t2.clone(), t1.neg()];
        let out = m.mul_vec(&v);
        assert!(out[0].is_zero());
    }

    #[test]
    fn biform_linear_substitution() {
        // x^2 under x -> x + y becomes x^2 + 2xy + y^2.
        let f = BiForm::from_coeffs(P, &[0, 0, 1]);
        let g = f.substitute_linear(fe(1), fe(1), fe(0), fe(1));
        assert_eq!(g, BiForm::from_coeffs(P, &[1, 2, 1]));
    }
}
