//! Level-one modular and quasimodular forms: Eisenstein series, the
//! discriminant, Miller's echelon basis, decomposition in `Q[E2, E4, E6]`,
//! and the mod-p filtration.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::{bernoulli, double_factorial, frac, rat, reduce_mod_p, Prime, Rational};
use crate::error::{Error, Result};
use crate::series::{units_through, QExpansion, UNITS_PER_Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EisensteinVariant {
    /// `-B_k/2k + sum sigma_{k-1}(n) q^n`.
    G,
    /// Normalized to constant term 1.
    E,
    /// `G_k(tau) - p^{k-1} G_k(p tau)`.
    RegularizedG(Prime),
}

/// `sum_{d | n} d^{k}`, skipping divisors divisible by `exclude`.
pub fn divisor_power_sum(n: u64, k: u32, exclude: Option<Prime>) -> BigInt {
    let mut acc = BigInt::zero();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            for x in if d * d == n { vec![d] } else { vec![d, n / d] } {
                if exclude.map_or(true, |p| x % p.get() != 0) {
                    acc += num_traits::pow(BigInt::from(x), k as usize);
                }
            }
        }
        d += 1;
    }
    acc
}

fn require_even_weight(k: u32) -> Result<()> {
    if k < 2 || k % 2 == 1 {
        Err(Error::OutOfContract(format!("Eisenstein series need even k >= 2, got {k}")))
    } else {
        Ok(())
    }
}

/// Eisenstein series of weight `k` through `q^n`.
pub fn eisenstein(k: u32, n: u32, variant: EisensteinVariant) -> Result<QExpansion> {
    require_even_weight(k)?;
    let b = bernoulli(k)?;
    let g = |n: u32| {
        let mut s = QExpansion::constant(-&b / rat(2 * i64::from(k)), units_through(u64::from(n)));
        for m in 1..=u64::from(n) {
            s.set(UNITS_PER_Q * m as i64, Rational::from_integer(divisor_power_sum(m, k - 1, None)));
        }
        s
    };
    Ok(match variant {
        EisensteinVariant::G => g(n),
        EisensteinVariant::E => g(n).scale(&(rat(-2 * i64::from(k)) / &b)),
        EisensteinVariant::RegularizedG(p) => {
            let full = g(n);
            let inner = g(n / p.get() as u32).substitute_power(p.get());
            let weight = Rational::from_integer(p.pow(k - 1));
            (&full - &inner.scale(&weight)).truncate(units_through(u64::from(n)))
        }
    })
}

/// `E_k` through `q^n`.
pub fn normalized_eisenstein(k: u32, n: u32) -> QExpansion {
    eisenstein(k, n, EisensteinVariant::E).expect("even weight")
}

/// `Delta = (E4^3 - E6^2) / 1728` through `q^n`.
pub fn delta(n: u32) -> Result<QExpansion> {
    if n < 1 {
        return Err(Error::InsufficientTruncation("delta needs at least q^1".into()));
    }
    let e4 = normalized_eisenstein(4, n);
    let e6 = normalized_eisenstein(6, n);
    Ok((&e4.pow(3) - &e6.pow(2)).scale(&frac(1, 1728)))
}

/// `dim M_w` for level one.
pub fn dim_modular(w: u32) -> usize {
    if w % 2 == 1 || w == 2 {
        0
    } else if w % 12 == 2 {
        (w / 12) as usize
    } else {
        (w / 12) as usize + 1
    }
}

/// Exponent triples `(a, b, c)` with `2a + 4b + 6c = k`, in increasing order.
pub fn quasimodular_monomials(k: u32) -> Vec<(u32, u32, u32)> {
    if k % 2 == 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for a in 0..=k / 2 {
        for b in 0..=k / 4 {
            let rest = k as i64 - 2 * a as i64 - 4 * b as i64;
            if rest >= 0 && rest % 6 == 0 {
                out.push((a, b, (rest / 6) as u32));
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn dim_quasimodular(k: u32) -> usize {
    quasimodular_monomials(k).len()
}

/// Reduced row-echelon basis of `M_w`: element `i` has `q^j`-coefficient
/// `delta_{ij}` for `j < dim`. Series are known through `q^n`.
pub fn miller_basis(w: u32, n: u32) -> Result<Vec<QExpansion>> {
    if w % 2 == 1 {
        return Err(Error::OutOfContract(format!("odd weight {w}")));
    }
    let d = dim_modular(w);
    if (n as usize) < d {
        return Err(Error::InsufficientTruncation(format!(
            "weight {w} has dimension {d}; need terms through q^{d}, got q^{n}"
        )));
    }
    let e4 = normalized_eisenstein(4, n);
    let e6 = normalized_eisenstein(6, n);
    let disc = delta(n.max(1))?.truncate(units_through(u64::from(n)));
    let mut basis: Vec<QExpansion> = (0..d as u32)
        .map(|i| {
            let rest = w - 12 * i;
            let (a, b) = if rest % 4 == 0 { (rest / 4, 0) } else { ((rest - 6) / 4, 1) };
            disc.pow(i).multiply(&e4.pow(a)).multiply(&e6.pow(b))
        })
        .collect();
    for i in (0..d).rev() {
        for j in i + 1..d {
            let c = basis[i].q_coefficient(j as u64);
            if !c.is_zero() {
                let reduced = &basis[i] - &basis[j].scale(&c);
                basis[i] = reduced;
            }
        }
    }
    Ok(basis)
}

/// Homogeneous polynomial in `E2, E4, E6` of a fixed weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasimodularPoly {
    weight: u32,
    terms: BTreeMap<(u32, u32, u32), Rational>,
}

impl QuasimodularPoly {
    pub fn new(weight: u32) -> Self {
        QuasimodularPoly { weight, terms: BTreeMap::new() }
    }

    pub fn from_terms<I>(weight: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32, u32), Rational)>,
    {
        let mut p = Self::new(weight);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, (a, b, c): (u32, u32, u32), coefficient: Rational) {
        assert_eq!(2 * a + 4 * b + 6 * c, self.weight, "monomial of the wrong weight");
        let entry = self.terms.entry((a, b, c)).or_insert_with(Rational::zero);
        *entry += coefficient;
        if entry.is_zero() {
            self.terms.remove(&(a, b, c));
        }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn coefficient(&self, m: (u32, u32, u32)) -> Rational {
        self.terms.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32, u32), &Rational)> {
        self.terms.iter()
    }

    /// The polynomial evaluated as a q-series through `q^n`.
    pub fn to_series(&self, n: u32) -> QExpansion {
        let e2 = normalized_eisenstein(2, n);
        let e4 = normalized_eisenstein(4, n);
        let e6 = normalized_eisenstein(6, n);
        let mut acc = QExpansion::zero(units_through(u64::from(n)));
        for ((a, b, c), coeff) in &self.terms {
            let m = e2.pow(*a).multiply(&e4.pow(*b)).multiply(&e6.pow(*c));
            acc = &acc + &m.scale(coeff);
        }
        acc
    }
}

impl fmt::Display for QuasimodularPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, ((a, b, c), coeff)) in self.terms.iter().enumerate() {
            if i == 0 {
                if coeff.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if coeff.is_negative() { " - " } else { " + " })?;
            }
            write!(f, "{}", coeff.abs())?;
            for (name, e) in [("E2", a), ("E4", b), ("E6", c)] {
                match e {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    e => write!(f, "*{name}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

/// Writes `s` in the basis `E2^a E4^b E6^c` of weight `k`, using every known
/// integral coefficient. At least `margin` coefficients beyond those that
/// fix the solution are checked against a zero residual.
pub fn quasi_decompose(s: &QExpansion, k: u32, margin: usize) -> Result<QuasimodularPoly> {
    if k % 2 == 1 {
        return Err(Error::OutOfContract(format!("odd weight {k}")));
    }
    if !s.is_integral() {
        return Err(Error::OutOfContract("series has non-integral exponents".into()));
    }
    let monomials = quasimodular_monomials(k);
    let d = monomials.len();
    let rows = s.known_q_powers() as usize;
    if rows < d + margin.max(1) {
        return Err(Error::InsufficientTruncation(format!(
            "weight {k} needs {} coefficients, series has {rows}",
            d + margin.max(1)
        )));
    }
    let n = (rows - 1) as u32;
    let e2 = normalized_eisenstein(2, n);
    let e4 = normalized_eisenstein(4, n);
    let e6 = normalized_eisenstein(6, n);
    let columns: Vec<Vec<Rational>> = monomials
        .iter()
        .map(|&(a, b, c)| e2.pow(a).multiply(&e4.pow(b)).multiply(&e6.pow(c)).q_coefficients())
        .collect();

    // Incremental reduced row echelon form over the rows seen so far.
    let mut pivots: Vec<(usize, Vec<Rational>)> = Vec::new();
    for r in 0..rows {
        let mut row: Vec<Rational> = columns.iter().map(|col| col[r].clone()).collect();
        row.push(s.q_coefficient(r as u64));
        for (col, pivot) in &pivots {
            let f = row[*col].clone();
            if !f.is_zero() {
                for (x, y) in row.iter_mut().zip(pivot) {
                    *x -= &f * y;
                }
            }
        }
        match (0..d).find(|&j| !row[j].is_zero()) {
            Some(col) => {
                let inv = row[col].recip();
                for x in row.iter_mut() {
                    *x *= &inv;
                }
                for (_, pivot) in pivots.iter_mut() {
                    let f = pivot[col].clone();
                    if !f.is_zero() {
                        for (x, y) in pivot.iter_mut().zip(&row) {
                            *x -= &f * y;
                        }
                    }
                }
                pivots.push((col, row));
            }
            None if !row[d].is_zero() => {
                return Err(Error::NotQuasimodular { weight: k, exponent: r as i64 });
            }
            None => {}
        }
    }
    if pivots.len() < d {
        return Err(Error::Singular(format!(
            "rank {} < {d} for weight {k}; monomials should be independent",
            pivots.len()
        )));
    }
    let mut poly = QuasimodularPoly::new(k);
    for (col, row) in pivots {
        poly.add_term(monomials[col], row[d].clone());
    }
    Ok(poly)
}

/// Extracted `E2^{k/2}` coefficient of a decomposition of `calQ_k`, and the
/// closed form `((k-1)!! 8^{k/2-1} / (k/2)) (-1/24)^{k/2}`.
pub fn leading_g2_coefficient(d: &QuasimodularPoly) -> (Rational, Rational) {
    let k = d.weight();
    let half = k / 2;
    let extracted = d.coefficient((half, 0, 0));
    let leading = Rational::from_integer(double_factorial(k as i64 - 1) * num_traits::pow(BigInt::from(8), (half - 1) as usize))
        / rat(i64::from(half));
    let expected = leading * num_traits::pow(frac(-1, 24), half as usize);
    (extracted, expected)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Filtration {
    pub weight: u32,
    /// The reduction mod p vanished identically.
    pub zero: bool,
}

/// Comparison length `floor(W/12) + 2` used when deciding equality of
/// weight-`W` forms mod p.
pub fn sturm_bound(w: u32) -> usize {
    (w / 12) as usize + 2
}

fn reduce_series(s: &QExpansion, p: u64, len: usize) -> Result<Vec<u64>> {
    (0..len)
        .map(|n| {
            reduce_mod_p(&s.q_coefficient(n as u64), p)
                .ok_or(Error::NotIntegral { exponent: UNITS_PER_Q * n as i64, p })
        })
        .collect()
}

fn mul_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let len = a.len().min(b.len());
    let mut out = vec![0u64; len];
    for (i, x) in a.iter().enumerate().take(len) {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

fn pow_mod(a: &[u64], e: u32, p: u64) -> Vec<u64> {
    let mut acc = vec![0u64; a.len()];
    if !acc.is_empty() {
        acc[0] = 1;
    }
    for _ in 0..e {
        acc = mul_mod(&acc, a, p);
    }
    acc
}

/// Whether the weight-`w` mod-p space contains a form agreeing with `f` on
/// its first `f.len()` coefficients.
fn in_space_mod_p(f: &[u64], w: u32, p: u64) -> Result<bool> {
    let len = f.len();
    let basis = miller_basis(w, (len - 1) as u32)?;
    let mut candidate = vec![0u64; len];
    for (i, b) in basis.iter().enumerate() {
        let b = reduce_series(b, p, len)?;
        let c = f[i];
        for (x, y) in candidate.iter_mut().zip(b) {
            *x = (*x + c * y) % p;
        }
    }
    Ok(candidate == f)
}

/// Mod-p filtration of a quasimodular form of weight `k`: lift to the
/// modular weight `k(p+1)/2` with `E2 -> E_{p+1}` and powers of `E_{p-1}`,
/// then descend in steps of `p - 1` while the reduction still lies in the
/// lower-weight space.
pub fn filtration(d: &QuasimodularPoly, p: Prime) -> Result<Filtration> {
    let pv = p.get();
    if pv < 5 {
        return Err(Error::InvalidModulus(pv));
    }
    let k = d.weight();
    let top = k * (pv as u32 + 1) / 2;
    let len = sturm_bound(top);
    let n = (len - 1) as u32;
    let reduce = |s: &QExpansion| reduce_series(s, pv, len);
    let e_plus = reduce(&normalized_eisenstein(pv as u32 + 1, n))?;
    let e_minus = reduce(&normalized_eisenstein(pv as u32 - 1, n))?;
    let e4 = reduce(&normalized_eisenstein(4, n))?;
    let e6 = reduce(&normalized_eisenstein(6, n))?;

    let mut f = vec![0u64; len];
    for (&(a, b, c), coeff) in d.terms() {
        let coeff = reduce_mod_p(coeff, pv).ok_or_else(|| Error::NotIntegralTerm {
            term: format!("E2^{a}*E4^{b}*E6^{c}"),
            p: pv,
        })?;
        if coeff == 0 {
            continue;
        }
        let lifted = mul_mod(
            &mul_mod(&pow_mod(&e_plus, a, pv), &pow_mod(&e4, b, pv), pv),
            &mul_mod(&pow_mod(&e6, c, pv), &pow_mod(&e_minus, k / 2 - a, pv), pv),
            pv,
        );
        for (x, y) in f.iter_mut().zip(lifted) {
            *x = (*x + coeff * y) % pv;
        }
    }
    if f.iter().all(|&x| x == 0) {
        return Ok(Filtration { weight: 0, zero: true });
    }
    let mut least = top;
    let step = pv as u32 - 1;
    let mut w = top;
    while w >= step {
        w -= step;
        if in_space_mod_p(&f, w, pv)? {
            least = w;
        }
    }
    Ok(Filtration { weight: least, zero: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brackets::{calq, Method};
    use crate::series::euler_function;

    fn p(x: u64) -> Prime {
        Prime::new(x).unwrap()
    }

    #[test]
    fn eisenstein_examples() {
        let g2 = eisenstein(2, 5, EisensteinVariant::G).unwrap();
        let expected: Vec<Rational> = [frac(-1, 24)].into_iter().chain([1, 3, 4, 7, 6].map(rat)).collect();
        assert_eq!(g2.q_coefficients(), expected);
        let e4 = eisenstein(4, 2, EisensteinVariant::E).unwrap();
        assert_eq!(e4.q_coefficients(), vec![rat(1), rat(240), rat(2160)]);
        assert!(eisenstein(3, 4, EisensteinVariant::G).is_err());
    }

    #[test]
    fn regularized_eisenstein_matches_restricted_divisor_sums() {
        for (k, prime) in [(2u32, 5u64), (4, 7), (6, 5)] {
            let reg = eisenstein(k, 40, EisensteinVariant::RegularizedG(p(prime))).unwrap();
            let g = eisenstein(k, 40, EisensteinVariant::G).unwrap();
            let direct = &g - &eisenstein(k, 8, EisensteinVariant::G)
                .unwrap()
                .substitute_power(prime)
                .scale(&Rational::from_integer(p(prime).pow(k - 1)));
            assert_eq!(reg, direct.truncate(reg.truncation()));
            for m in 1..=40u64 {
                assert_eq!(reg.q_coefficient(m), Rational::from_integer(divisor_power_sum(m, k - 1, Some(p(prime)))));
            }
            let b = crate::arith::regularized_bernoulli(k, prime).unwrap();
            assert_eq!(reg.q_coefficient(0), -b / rat(2 * k as i64));
        }
    }

    #[test]
    fn delta_examples() {
        let d = delta(12).unwrap();
        assert_eq!(d.q_coefficient(0), rat(0));
        assert_eq!(d.q_coefficient(1), rat(1));
        assert_eq!(d.q_coefficient(2), rat(-24));
        let t = units_through(12);
        let eta_product = euler_function(t).pow(24).shift(UNITS_PER_Q).truncate(t);
        assert_eq!(d, eta_product);
        assert!(delta(0).is_err());
    }

    #[test]
    fn dimensions() {
        let dims: Vec<usize> = (0..=26).step_by(2).map(dim_modular).collect();
        assert_eq!(dims, vec![1, 0, 1, 1, 1, 1, 2, 1, 2, 2, 2, 2, 3, 2]);
        assert_eq!(dim_quasimodular(2), 1);
        assert_eq!(dim_quasimodular(4), 2);
        assert_eq!(dim_quasimodular(14), 8);
    }

    #[test]
    fn miller_examples() {
        assert_eq!(miller_basis(0, 4).unwrap(), vec![QExpansion::one(units_through(4))]);
        assert!(miller_basis(2, 4).unwrap().is_empty());
        let b12 = miller_basis(12, 4).unwrap();
        assert_eq!(b12.len(), 2);
        assert_eq!(b12[0].q_coefficient(0), rat(1));
        assert_eq!(b12[0].q_coefficient(1), rat(0));
        assert_eq!(b12[0].q_coefficient(2), rat(196560));
        assert_eq!(b12[1].q_coefficients()[..3], [rat(0), rat(1), rat(-24)]);
        assert!(miller_basis(24, 1).is_err());
    }

    #[test]
    fn miller_echelon_survives_reduction() {
        for prime in [5u64, 7, 11, 13] {
            for w in (0..=72).step_by(2) {
                let d = dim_modular(w);
                let basis = miller_basis(w, d as u32 + 2).unwrap();
                for (i, b) in basis.iter().enumerate() {
                    let red = reduce_series(b, prime, d).unwrap();
                    let unit: Vec<u64> = (0..d).map(|j| u64::from(i == j)).collect();
                    assert_eq!(red, unit, "w = {w}, p = {prime}");
                }
            }
        }
    }

    #[test]
    fn decompositions() {
        let q2 = calq(2, 20, None, Method::Fast).unwrap();
        assert_eq!(quasi_decompose(&q2, 2, 5).unwrap(), QuasimodularPoly::from_terms(2, [((1, 0, 0), frac(-1, 24))]));
        let q4 = calq(4, 40, None, Method::Fast).unwrap();
        assert_eq!(
            quasi_decompose(&q4, 4, 5).unwrap(),
            QuasimodularPoly::from_terms(4, [((2, 0, 0), frac(1, 48)), ((0, 1, 0), frac(1, 120))])
        );
        let e4 = normalized_eisenstein(4, 10);
        assert_eq!(quasi_decompose(&e4, 4, 3).unwrap(), QuasimodularPoly::from_terms(4, [((0, 1, 0), rat(1))]));
    }

    #[test]
    fn decomposition_detects_non_quasimodular_input() {
        let mut s = normalized_eisenstein(4, 10);
        s.set(UNITS_PER_Q * 7, rat(5));
        assert_eq!(quasi_decompose(&s, 4, 3), Err(Error::NotQuasimodular { weight: 4, exponent: 7 }));
        assert!(matches!(quasi_decompose(&normalized_eisenstein(4, 1), 4, 1), Err(Error::InsufficientTruncation(_))));
    }

    #[test]
    fn leading_coefficients() {
        let (got, want) = leading_g2_coefficient(&QuasimodularPoly::from_terms(2, [((1, 0, 0), frac(-1, 24))]));
        assert_eq!((got, want.clone()), (frac(-1, 24), frac(-1, 24)));
        let (_, want4) = leading_g2_coefficient(&QuasimodularPoly::new(4));
        assert_eq!(want4, frac(1, 48));
        let (_, want6) = leading_g2_coefficient(&QuasimodularPoly::new(6));
        assert_eq!(want6, frac(-5, 216));
        let q6 = quasi_decompose(&calq(6, 30, None, Method::Fast).unwrap(), 6, 3).unwrap();
        let (got6, _) = leading_g2_coefficient(&q6);
        assert_eq!(got6, frac(-5, 216));
    }

    #[test]
    fn prerequisite_congruences() {
        for prime in [5u64, 7, 11, 13] {
            let pu = prime as u32;
            let len = sturm_bound(pu * 3) + 4;
            let e_minus = reduce_series(&normalized_eisenstein(pu - 1, len as u32), prime, len).unwrap();
            let one: Vec<u64> = (0..len).map(|i| u64::from(i == 0)).collect();
            assert_eq!(e_minus, one);
            let e_plus = reduce_series(&normalized_eisenstein(pu + 1, len as u32), prime, len).unwrap();
            let e2 = reduce_series(&normalized_eisenstein(2, len as u32), prime, len).unwrap();
            assert_eq!(e_plus, e2);
        }
    }

    #[test]
    fn filtration_examples() {
        let g2 = QuasimodularPoly::from_terms(2, [((1, 0, 0), frac(-1, 24))]);
        assert_eq!(filtration(&g2, p(5)).unwrap(), Filtration { weight: 6, zero: false });
        let e4 = QuasimodularPoly::from_terms(4, [((0, 1, 0), rat(1))]);
        assert_eq!(filtration(&e4, p(5)).unwrap(), Filtration { weight: 0, zero: false });
        let q4 = quasi_decompose(&calq(4, 40, None, Method::Fast).unwrap(), 4, 5).unwrap();
        assert_eq!(filtration(&q4, p(7)).unwrap().weight, 16);
        let disc = QuasimodularPoly::from_terms(12, [((0, 3, 0), frac(1, 1728)), ((0, 0, 2), frac(-1, 1728))]);
        assert_eq!(filtration(&disc, p(5)).unwrap().weight, 12);
        assert_eq!(filtration(&disc, p(7)).unwrap().weight, 12);
    }

    #[test]
    fn filtration_edge_cases() {
        let zero_mod_5 = QuasimodularPoly::from_terms(4, [((0, 1, 0), rat(5))]);
        assert_eq!(filtration(&zero_mod_5, p(5)).unwrap(), Filtration { weight: 0, zero: true });
        let bad = QuasimodularPoly::from_terms(4, [((0, 1, 0), frac(1, 5))]);
        assert!(matches!(filtration(&bad, p(5)), Err(Error::NotIntegralTerm { .. })));
        assert_eq!(filtration(&bad, p(3)), Err(Error::InvalidModulus(3)));
    }

    #[test]
    fn filtration_is_congruent_to_lift_weight() {
        for prime in [5u64, 7, 11] {
            for k in [2u32, 4] {
                let d = quasi_decompose(&calq(k, 30, None, Method::Fast).unwrap(), k, 5).unwrap();
                if d.terms().any(|(_, c)| reduce_mod_p(c, prime).is_none()) {
                    continue;
                }
                let f = filtration(&d, p(prime)).unwrap();
                let top = k * (prime as u32 + 1) / 2;
                assert_eq!(f.weight % (prime as u32 - 1), top % (prime as u32 - 1));
            }
        }
    }
}
