//! Exact rational linear algebra over the canonical monomial bases of
//! `M_k(Gamma_1(p))`: basis construction from the weight-one generators,
//! coordinate solves, the U_p matrix, Krylov minimal polynomials, and
//! Newton polygons.
//!
//! All solves are exact; residuals are identically zero, never "small".

use crate::error::QkError;
use crate::klein::{product_series, ExponentVector};
use crate::orbit::apply_sigma;
use crate::series::FracSeries;
use crate::Result;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

/// Weight-one generator seed `a_p` for each supported level.
pub fn generator_seed(p: u64) -> Result<ExponentVector> {
    let a: Vec<i64> = match p {
        5 => vec![2, -3, 2],
        7 => vec![2, -2, 0, 1],
        11 => vec![2, -1, -1, 0, 1, 0],
        13 => vec![2, -1, 0, -1, 0, 0, 1],
        17 => vec![2, 0, -1, -1, 0, 0, 0, 0, 1],
        19 => vec![2, 0, 0, -1, -1, -1, 0, 0, 1, 1],
        _ => return Err(QkError::UnsupportedPrime(p)),
    };
    ExponentVector::new(p, a)
}

/// The generators `x_n = f_{sigma^n(a_p)}`, `0 <= n <= (p-3)/2`.
pub fn weight_one_generators(p: u64) -> Result<Vec<ExponentVector>> {
    let seed = generator_seed(p)?;
    let half = ((p - 1) / 2) as usize;
    Ok((0..half as u64).map(|n| apply_sigma(&seed, n)).collect())
}

fn genus(p: u64) -> i64 {
    1 + (p as i64 * p as i64 - 1) / 24 - (p as i64 - 1) / 2
}

/// Dimension of `M_k(Gamma_1(p))` for `p >= 5` prime (weight-one value
/// applies for `p <= 19`, where the cusp space is trivial).
pub fn known_dim(p: u64, k: u32) -> i64 {
    if k == 1 {
        return (p as i64 - 1) / 2;
    }
    (k as i64 - 1) * (genus(p) - 1) + k as i64 * (p as i64 - 1) / 2
}

/// Sturm-style coefficient window used throughout: `ceil(k (p^2-1)/12)`.
pub fn sturm_bound(p: u64, k: u32) -> i64 {
    Integer::div_ceil(&(k as i64 * (p as i64 * p as i64 - 1)), &12)
}

/// An ordered monomial basis for `M_k(Gamma_1(p))` in the weight-one
/// generators, with cached q-expansions.
#[derive(Clone)]
pub struct OrderedBasis {
    pub p: u64,
    pub k: u32,
    /// Exponent multi-indices over the generators `x_0..x_{(p-3)/2}`.
    pub monomials: Vec<Vec<u32>>,
    /// Cached series, one per monomial, all with the same window.
    pub series: Vec<FracSeries>,
    pub dim: usize,
}

fn mono(half: usize, parts: &[(usize, u32)]) -> Vec<u32> {
    let mut m = vec![0u32; half];
    for &(i, e) in parts {
        m[i] += e;
    }
    m
}

/// Fixed monomial lists for the low-weight cases.  The `p = 17, 19` lists
/// are stated in the reversed generator labeling `x_n <-> x_{-n}`; they are
/// stored here already translated into ours (the reversed reading is the
/// one that is full rank).
fn monomial_list(p: u64, k: u32) -> Result<Vec<Vec<u32>>> {
    let half = ((p - 1) / 2) as usize;
    if k == 1 {
        return Ok((0..half).map(|i| mono(half, &[(i, 1)])).collect());
    }
    let list: Vec<Vec<u32>> = match (p, k) {
        (5, _) => (0..=k).map(|j| mono(half, &[(0, k - j), (1, j)])).collect(),
        (7, 1..=3) => {
            let mut v: Vec<Vec<u32>> = (0..3).map(|i| mono(half, &[(i, k)])).collect();
            for j in 1..=(k / 2) {
                v.push(mono(half, &[(0, j), (2, j), (0, k - 2 * j)]));
                v.push(mono(half, &[(1, j), (2, j), (1, k - 2 * j)]));
            }
            for j in 1..=((k - 1) / 2) {
                v.push(mono(half, &[(0, j), (2, j), (2, k - 2 * j)]));
                v.push(mono(half, &[(1, j), (2, j), (2, k - 2 * j)]));
            }
            v
        }
        (13, 2) => parse_monomials(half, "00;01;11;02;12;22;03;13;33;04;44;15;55"),
        (13, 3) => parse_monomials(
            half,
            "000;001;011;111;002;012;112;022;122;222;003;113;033;333;004;044;444;115;155;555",
        ),
        (17, 2) => {
            parse_monomials(half, "00;07;77;06;67;66;05;57;56;55;04;47;45;44;03;33;02;22;17;11")
        }
        (17, 3) => parse_monomials(
            half,
            "000;007;077;777;006;067;677;066;667;666;005;057;577;056;567;566;055;557;555;004;477;447;444;003;033;333;002;022;222;177;117;111",
        ),
        (19, 2) => parse_monomials(
            half,
            "00;08;88;07;78;77;06;68;67;66;05;58;57;56;55;04;48;44;03;33;02;22;18;11",
        ),
        (19, 3) => parse_monomials(
            half,
            "000;008;088;888;007;078;788;077;778;777;006;068;688;067;678;677;066;668;667;666;005;058;588;057;577;055;555;488;448;444;003;033;333;002;022;222;188;118;111",
        ),
        _ => return Err(QkError::UnsupportedWeight { p, k }),
    };
    Ok(list)
}

/// All degree-k monomials over the `(p-1)/2` generators.
fn all_monomials(half: usize, k: u32) -> Vec<Vec<u32>> {
    fn rec(half: usize, k: u32, start: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..half {
            cur[i] += 1;
            rec(half, k - 1, i, cur, out);
            cur[i] -= 1;
        }
    }
    let mut out = Vec::new();
    rec(half, k, 0, &mut vec![0u32; half], &mut out);
    out
}

/// Monomial multi-indices of the ordered basis, without series.
fn basis_monomials(p: u64, k: u32) -> Result<Vec<Vec<u32>>> {
    if let Ok(list) = monomial_list(p, k) {
        return Ok(list);
    }
    let half = ((p - 1) / 2) as usize;
    let dim = known_dim(p, k) as usize;
    let cands: Vec<Vec<u32>> = if k <= 3 {
        all_monomials(half, k)
    } else {
        let ka = if k % 2 == 0 { 2 } else { 3 };
        let base_a = basis_monomials(p, ka)?;
        let base_b = basis_monomials(p, k - ka)?;
        let mut v: Vec<Vec<u32>> = Vec::new();
        for a in &base_a {
            for b in &base_b {
                let s: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if !v.contains(&s) {
                    v.push(s);
                }
            }
        }
        v
    };
    greedy_rank_filter(p, k, cands, dim)
}

fn parse_monomials(half: usize, spec: &str) -> Vec<Vec<u32>> {
    spec.split(';')
        .map(|word| {
            let mut m = vec![0u32; half];
            for ch in word.chars() {
                m[ch.to_digit(10).unwrap() as usize] += 1;
            }
            m
        })
        .collect()
}

fn monomial_vector(p: u64, m: &[u32]) -> Result<ExponentVector> {
    let gens = weight_one_generators(p)?;
    let mut acc: Option<ExponentVector> = None;
    for (i, &e) in m.iter().enumerate() {
        for _ in 0..e {
            acc = Some(match acc {
                None => gens[i].clone(),
                Some(v) => v.combine(&gens[i]),
            });
        }
    }
    acc.ok_or_else(|| QkError::InvalidArgument("empty monomial".into()))
}

/// Default cached window for a basis: enough for coordinate solves on the
/// Sturm window and for the U_p coefficient extraction (with slack for
/// skipped rows when the leading coefficient block is singular).
fn default_order(p: u64, k: u32) -> i64 {
    let dim = known_dim(p, k);
    (dim + sturm_bound(p, k) + 2).max(p as i64 * (dim + 8) + 1)
}

/// Build the ordered basis for `M_k(Gamma_1(p))`, caching expansions
/// through exponent `order` (inclusive).
///
/// Weights `k <= 3` (and `k <= 5` at `p = 11`, any `k` at `p = 5`) come
/// from the fixed monomial lists; higher weights are assembled greedily
/// from products of the lower bases, rank-filtered by leading order.
pub fn build_basis_with_order(p: u64, k: u32, order: i64) -> Result<OrderedBasis> {
    if k == 0 {
        return Err(QkError::UnsupportedWeight { p, k });
    }
    let dim = known_dim(p, k) as usize;
    let monomials = basis_monomials(p, k)?;
    if monomials.len() != dim {
        return Err(QkError::Internal(format!(
            "basis size {} for (p={p}, k={k}) does not match dim {dim}",
            monomials.len()
        )));
    }
    let mut series = Vec::with_capacity(dim);
    for m in &monomials {
        let v = monomial_vector(p, m)?;
        series.push(product_series(&v, order)?);
    }
    let basis = OrderedBasis { p, k, monomials, series, dim };
    // Independence check: the cached expansions must be full rank on the
    // available window.
    let rank_window = (dim as i64 + sturm_bound(p, k)).min(order);
    let mut reducer = RowReducer::new();
    for s in &basis.series {
        let row: Vec<BigRational> =
            (0..=rank_window).map(|n| s.coeff_int(n)).collect::<Result<_>>()?;
        if !reducer.try_add(row) {
            return Err(QkError::Internal(format!(
                "basis coefficient matrix singular for (p={p}, k={k})"
            )));
        }
    }
    Ok(basis)
}

/// Build with the default window.
pub fn build_basis(p: u64, k: u32) -> Result<OrderedBasis> {
    build_basis_with_order(p, k, default_order(p, k))
}

/// Greedy selection of a full-rank monomial subset, scanning candidates by
/// the leading order of their expansions.
fn greedy_rank_filter(
    p: u64,
    _k: u32,
    mut cands: Vec<Vec<u32>>,
    dim: usize,
) -> Result<Vec<Vec<u32>>> {
    let window = (dim + 8) as i64;
    let mut with_series: Vec<(Vec<u32>, FracSeries)> = Vec::with_capacity(cands.len());
    for m in cands.drain(..) {
        let v = monomial_vector(p, &m)?;
        with_series.push((m, product_series(&v, window)?));
    }
    with_series.sort_by_key(|(m, s)| (s.leading().map(|(e, _)| e), m.clone()));
    let mut reducer = RowReducer::new();
    let mut chosen = Vec::new();
    for (m, s) in with_series {
        let row: Vec<BigRational> =
            (0..=window).map(|n| s.coeff_int(n).unwrap()).collect();
        if reducer.try_add(row) {
            chosen.push(m);
            if chosen.len() == dim {
                break;
            }
        }
    }
    if chosen.len() != dim {
        return Err(QkError::Internal(format!(
            "rank filter found only {} of {dim} independent monomials",
            chosen.len()
        )));
    }
    chosen.sort();
    Ok(chosen)
}

/// Incremental exact row reduction used for rank filtering.
pub(crate) struct RowReducer {
    rows: Vec<(usize, Vec<BigRational>)>,
}

impl RowReducer {
    pub fn new() -> Self {
        RowReducer { rows: Vec::new() }
    }

    /// Reduce `row` against accepted rows; keep it when independent.
    pub fn try_add(&mut self, mut row: Vec<BigRational>) -> bool {
        for (pivot, r) in &self.rows {
            if !row[*pivot].is_zero() {
                let f = &row[*pivot] / &r[*pivot];
                for (x, y) in row.iter_mut().zip(r) {
                    *x -= &f * y;
                }
            }
        }
        match row.iter().position(|c| !c.is_zero()) {
            Some(pivot) => {
                self.rows.push((pivot, row));
                true
            }
            None => false,
        }
    }

}

impl OrderedBasis {
    /// Window end (exclusive) common to all cached series.
    pub fn window_end(&self) -> Rational64 {
        self.series.iter().map(|s| s.window_end()).min().unwrap()
    }

    /// Render a monomial like `x0^2*x1`.
    pub fn monomial_name(&self, idx: usize) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.monomials[idx].iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("x{i}")),
                _ => parts.push(format!("x{i}^{e}")),
            }
        }
        parts.join("*")
    }

    /// Reconstruct the series of a coordinate vector over this basis.
    pub fn reconstruct(&self, coords: &[BigRational]) -> FracSeries {
        let mut acc = FracSeries::zero(1, self.series[0].end().max(1));
        for (c, s) in coords.iter().zip(&self.series) {
            if !c.is_zero() {
                acc = acc.add(&s.scale(c));
            }
        }
        acc
    }
}

/// Exact coordinates of `f` in the basis: solved on the leading
/// `dim + sturm` coefficient rows and re-verified against the full common
/// window.  Errors with `NotInSpan` when inconsistent.
pub fn represent(f: &FracSeries, basis: &OrderedBasis) -> Result<Vec<BigRational>> {
    let d = basis.dim;
    let solve_rows = d as i64 + sturm_bound(basis.p, basis.k);
    let avail = {
        let fe = f.window_end();
        let be = basis.window_end();
        if fe < be {
            fe
        } else {
            be
        }
    };
    if avail <= Rational64::from_integer(solve_rows) {
        return Err(QkError::TruncationTooShort {
            need: solve_rows.to_string(),
            have: avail.to_string(),
        });
    }
    // Forward elimination on the augmented (solve_rows x d | 1) system.
    let mut aug: Vec<Vec<BigRational>> = (0..solve_rows)
        .map(|n| {
            let mut row: Vec<BigRational> = basis
                .series
                .iter()
                .map(|s| s.coeff_int(n).expect("within window"))
                .collect();
            row.push(f.coeff_int(n).expect("within window"));
            row
        })
        .collect();
    let rows = aug.len();
    let mut pivot_rows = Vec::with_capacity(d);
    let mut rank = 0usize;
    for col in 0..d {
        let Some(pr) = (rank..rows).find(|&r| !aug[r][col].is_zero()) else {
            return Err(QkError::Internal(format!(
                "basis columns dependent at (p={}, k={})",
                basis.p, basis.k
            )));
        };
        aug.swap(rank, pr);
        let inv = aug[rank][col].recip();
        for x in aug[rank].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..rows {
            if r != rank && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c in col..=d {
                    let s = &aug[rank][c] * &f;
                    aug[r][c] -= s;
                }
            }
        }
        pivot_rows.push(rank);
        rank += 1;
    }
    // Any nonzero residual row means f is outside the span.
    for r in rank..rows {
        if !aug[r][d].is_zero() {
            return Err(QkError::NotInSpan);
        }
    }
    let coords: Vec<BigRational> = (0..d).map(|i| aug[pivot_rows[i]][d].clone()).collect();
    // Verify the reconstruction on the full available window, not just the
    // solve window.
    let recon = basis.reconstruct(&coords);
    let through = avail - Rational64::new(1, 2);
    if !f.eq_through(&recon, through)? {
        return Err(QkError::NotInSpan);
    }
    Ok(coords)
}

/// Coefficient rows of a series family on their common grid and window:
/// one vector per series, all indexed by the same exponent positions.
pub fn aligned_rows(series: &[FracSeries]) -> Vec<Vec<BigRational>> {
    if series.is_empty() {
        return Vec::new();
    }
    let mut den = 1i64;
    for s in series {
        den = Integer::lcm(&den, &s.den());
    }
    let ss: Vec<FracSeries> = series.iter().map(|s| s.rescale_grid(den)).collect();
    let nmin = ss.iter().map(|s| s.start()).min().unwrap();
    let nmax = ss.iter().map(|s| s.end()).min().unwrap();
    ss.iter()
        .map(|s| {
            (nmin..nmax)
                .map(|n| {
                    s.coeff_at(Rational64::new(n, den)).unwrap_or_else(|_| BigRational::zero())
                })
                .collect()
        })
        .collect()
}

/// Exact coordinates of `f` in the span of an arbitrary list of series
/// (aligned to their common grid).  Solves on the first
/// `span.len() + extra` rows with any nonzero entry and verifies the
/// reconstruction on the full common window.
pub fn represent_series(
    f: &FracSeries,
    span: &[FracSeries],
    extra: usize,
) -> Result<Vec<BigRational>> {
    if span.is_empty() {
        return if f.is_zero_on_window() { Ok(Vec::new()) } else { Err(QkError::NotInSpan) };
    }
    let mut den = f.den();
    for s in span {
        den = Integer::lcm(&den, &s.den());
    }
    let fs = f.rescale_grid(den);
    let ss: Vec<FracSeries> = span.iter().map(|s| s.rescale_grid(den)).collect();
    let nmin = ss.iter().map(|s| s.start()).chain([fs.start()]).min().unwrap();
    let nmax = ss.iter().map(|s| s.end()).chain([fs.end()]).min().unwrap();
    if nmax <= nmin {
        return Err(QkError::TruncationTooShort {
            need: nmin.to_string(),
            have: nmax.to_string(),
        });
    }
    let cols = ss.len();
    let _ = extra;
    let at = |s: &FracSeries, n: i64| -> BigRational {
        s.coeff_at(Rational64::new(n, den)).unwrap_or_else(|_| BigRational::zero())
    };
    let mut aug: Vec<Vec<BigRational>> = Vec::new();
    for n in nmin..nmax {
        let mut row: Vec<BigRational> = ss.iter().map(|s| at(s, n)).collect();
        let fv = at(&fs, n);
        if row.iter().all(|c| c.is_zero()) && fv.is_zero() {
            continue;
        }
        row.push(fv);
        aug.push(row);
    }
    // The solution must be pinned uniquely: an underdetermined window is a
    // truncation error, never a silent answer.
    let mut probe = RowReducer::new();
    let mut rank = 0;
    for row in &aug {
        if probe.try_add(row[..cols].to_vec()) {
            rank += 1;
        }
    }
    if rank < cols {
        return Err(QkError::TruncationTooShort {
            need: format!("window resolving all {cols} span members"),
            have: format!("rank {rank} over {} rows", aug.len()),
        });
    }
    let coords = solve_overdetermined(&mut aug, cols).ok_or(QkError::NotInSpan)?;
    // Verify the reconstruction over the whole common window.
    let mut recon = FracSeries::zero(den, nmax);
    for (c, s) in coords.iter().zip(&ss) {
        if !c.is_zero() {
            recon = recon.add(&s.scale(c));
        }
    }
    let through = Rational64::new(nmax - 1, den);
    if !fs.eq_through(&recon, through)? {
        return Err(QkError::NotInSpan);
    }
    Ok(coords)
}

/// The matrix of `U_p` acting on `M_k(Gamma_1(p))`: `A * coords(f) =
/// coords(U_p f)`, entries exact rationals.
#[derive(Clone)]
pub struct UpMatrix {
    pub p: u64,
    pub k: u32,
    pub entries: Vec<Vec<BigRational>>,
    pub basis: OrderedBasis,
}

/// Build the U_p matrix as `m^{-1} w` from paired coefficient windows
/// `m[r][j] = b_j(n_r)` and `w[r][j] = b_j(p n_r)`, where the row indices
/// `n_0 < n_1 < ...` are chosen greedily so that `m` is invertible.
pub fn build_up_matrix(basis: &OrderedBasis) -> Result<UpMatrix> {
    let d = basis.dim;
    let p = basis.p as i64;
    let scan = d as i64 + sturm_bound(basis.p, basis.k);
    let mut reducer = RowReducer::new();
    let mut picked: Vec<i64> = Vec::with_capacity(d);
    for n in 0..=scan {
        if basis.window_end() <= Rational64::from_integer(p * n) {
            return Err(QkError::TruncationTooShort {
                need: (p * n + 1).to_string(),
                have: basis.window_end().to_string(),
            });
        }
        let row: Vec<BigRational> =
            basis.series.iter().map(|s| s.coeff_int(n)).collect::<Result<_>>()?;
        if reducer.try_add(row) {
            picked.push(n);
            if picked.len() == d {
                break;
            }
        }
    }
    if picked.len() < d {
        return Err(QkError::Internal("no invertible coefficient window for U_p".into()));
    }
    let m: Vec<Vec<BigRational>> = picked
        .iter()
        .map(|&n| basis.series.iter().map(|s| s.coeff_int(n).unwrap()).collect())
        .collect();
    let w: Vec<Vec<BigRational>> = picked
        .iter()
        .map(|&n| basis.series.iter().map(|s| s.coeff_int(p * n).unwrap()).collect())
        .collect();
    // Solve m * A = w column by column.
    let cols = solve_square_multi(&m, &w)?;
    Ok(UpMatrix { p: basis.p, k: basis.k, entries: cols, basis: basis.clone() })
}

/// Solve `M X = W` for square invertible `M` (all matrices row-major).
fn solve_square_multi(
    m: &[Vec<BigRational>],
    w: &[Vec<BigRational>],
) -> Result<Vec<Vec<BigRational>>> {
    let d = m.len();
    let wid = w[0].len();
    let mut aug: Vec<Vec<BigRational>> = (0..d)
        .map(|r| {
            let mut row = m[r].clone();
            row.extend(w[r].iter().cloned());
            row
        })
        .collect();
    for col in 0..d {
        let Some(pr) = (col..d).find(|&r| !aug[r][col].is_zero()) else {
            return Err(QkError::Internal("singular coefficient window".into()));
        };
        aug.swap(col, pr);
        let inv = aug[col][col].recip();
        for x in aug[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..d {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c in col..d + wid {
                    let s = &aug[col][c] * &f;
                    aug[r][c] -= s;
                }
            }
        }
    }
    Ok((0..d).map(|r| aug[r][d..].to_vec()).collect())
}

impl UpMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// `A v`.
    pub fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).fold(BigRational::zero(), |x, y| x + y))
            .collect()
    }
}

/// Polynomial with exact rational coefficients, constant term first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPolynomial {
    pub coeffs: Vec<BigRational>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        let mut p = IntPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Exact division check.
    pub fn divides(&self, other: &IntPolynomial) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        let mut rem = other.coeffs.clone();
        let d = self.degree();
        let lead = self.coeffs[d].clone();
        while rem.len() > d && rem.len() >= 1 {
            let rd = rem.len() - 1;
            if rd < d {
                break;
            }
            let f = &rem[rd] / &lead;
            for i in 0..=d {
                let s = &self.coeffs[i] * &f;
                rem[rd - d + i] -= s;
            }
            while rem.len() > 1 && rem.last().map_or(false, |c| c.is_zero()) {
                rem.pop();
            }
            if rem.len() == 1 && rem[0].is_zero() {
                return true;
            }
            if rem.len() - 1 < d {
                break;
            }
        }
        rem.iter().all(|c| c.is_zero())
    }

    pub fn to_string_pretty(&self) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let term = match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            };
            parts.push(term);
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Characteristic polynomial by the exact trace recursion
/// (Faddeev-LeVerrier); monic, constant term first.
pub fn char_poly(a: &UpMatrix) -> IntPolynomial {
    let n = a.dim();
    let mut m: Vec<Vec<BigRational>> = a.entries.clone();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut c = -trace(&m);
    coeffs[n - 1] = c.clone();
    for k in 2..=n {
        // M <- A (M + c I)
        let mut shifted = m.clone();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] += &c;
        }
        m = mat_mul_rat(&a.entries, &shifted);
        c = -trace(&m) / BigRational::from_integer(k.into());
        coeffs[n - k] = c.clone();
    }
    IntPolynomial::new(coeffs)
}

fn trace(m: &[Vec<BigRational>]) -> BigRational {
    m.iter().enumerate().map(|(i, r)| r[i].clone()).fold(BigRational::zero(), |a, b| a + b)
}

fn mat_mul_rat(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let mut out = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for (t, abt) in a[i].iter().enumerate() {
            if abt.is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[t][j].is_zero() {
                    out[i][j] += abt * &b[t][j];
                }
            }
        }
    }
    out
}

/// Minimal monic polynomial of `A` on the Krylov space of `v`: the least
/// monic `mu` with `mu(A) v = 0`; degree at most `dim`.
pub fn krylov_min_poly(a: &UpMatrix, v: &[BigRational]) -> IntPolynomial {
    let d = a.dim();
    // Krylov vectors as rows; find the first linear dependence.
    let mut vectors: Vec<Vec<BigRational>> = vec![v.to_vec()];
    let mut reducer = RowReducer::new();
    if !reducer.try_add(v.to_vec()) {
        // v = 0: minimal polynomial is 1 (empty product); report x^0 = 1.
        return IntPolynomial::new(vec![BigRational::one()]);
    }
    loop {
        let next = a.apply(vectors.last().unwrap());
        // Express next against the reduced rows: solve sum c_i K_i = next.
        if reducer.try_add(next.clone()) {
            vectors.push(next);
            if vectors.len() > d {
                unreachable!("Krylov chain longer than dimension");
            }
            continue;
        }
        // Dependent: solve for the combination over the stored vectors.
        let deg = vectors.len();
        let mut aug: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                let mut row: Vec<BigRational> =
                    vectors.iter().map(|k| k[i].clone()).collect();
                row.push(next[i].clone());
                row
            })
            .collect();
        let combo = solve_overdetermined(&mut aug, deg).expect("dependence must be solvable");
        let mut coeffs: Vec<BigRational> = combo.into_iter().map(|c| -c).collect();
        coeffs.push(BigRational::one());
        return IntPolynomial::new(coeffs);
    }
}

/// Solve a consistent (possibly overdetermined) system in `cols` unknowns
/// given as an augmented row list; free variables are set to zero.
/// `None` if inconsistent.
fn solve_overdetermined(aug: &mut [Vec<BigRational>], cols: usize) -> Option<Vec<BigRational>> {
    let rows = aug.len();
    let mut rank = 0usize;
    let mut pivots: Vec<Option<usize>> = vec![None; cols];
    for col in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(rank, pr);
        let inv = aug[rank][col].recip();
        for x in aug[rank].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..rows {
            if r != rank && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c in col..=cols {
                    let s = &aug[rank][c] * &f;
                    aug[r][c] -= s;
                }
            }
        }
        pivots[col] = Some(rank);
        rank += 1;
    }
    for r in rank..rows {
        if !aug[r][cols].is_zero() {
            return None;
        }
    }
    Some(
        pivots
            .iter()
            .map(|p| p.map_or_else(BigRational::zero, |r| aug[r][cols].clone()))
            .collect(),
    )
}

/// p-adic valuation of a nonzero rational.
pub fn padic_valuation(x: &BigRational, p: u64) -> i64 {
    assert!(!x.is_zero());
    let pb = BigInt::from(p);
    let mut v = 0i64;
    let mut n = x.numer().abs();
    while (&n % &pb).is_zero() {
        n /= &pb;
        v += 1;
    }
    let mut d = x.denom().abs();
    while (&d % &pb).is_zero() {
        d /= &pb;
        v -= 1;
    }
    v
}

/// Root valuations from the lower convex hull of `(i, v_p(c_i))`.
#[derive(Clone, Debug)]
pub struct NewtonPolygon {
    /// Valuations of the nonzero roots, ascending, with multiplicity.
    pub finite: Vec<Rational64>,
    /// Number of zero roots (infinite valuation).
    pub infinite: usize,
}

/// Newton polygon valuations of the roots of `mu` at `p`.
pub fn newton_polygon_valuations(mu: &IntPolynomial, p: u64) -> Result<NewtonPolygon> {
    if mu.is_zero() {
        return Err(QkError::InvalidArgument("zero polynomial".into()));
    }
    let infinite = mu.coeffs.iter().take_while(|c| c.is_zero()).count();
    let pts: Vec<(i64, i64)> = mu
        .coeffs
        .iter()
        .enumerate()
        .skip(infinite)
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i as i64, padic_valuation(c, p)))
        .collect();
    // Lower convex hull, left to right.
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for pt in pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // Drop b if it lies on or above segment a->pt.
            if (b.1 - a.1) * (pt.0 - a.0) >= (pt.1 - a.1) * (b.0 - a.0) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut finite = Vec::new();
    for w in hull.windows(2) {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        let slope = Rational64::new(y1 - y0, x1 - x0);
        for _ in 0..(x1 - x0) {
            finite.push(-slope);
        }
    }
    finite.sort();
    Ok(NewtonPolygon { finite, infinite })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn dims_match_reference_bases() {
        assert_eq!(known_dim(5, 2), 3);
        assert_eq!(known_dim(7, 2), 5);
        assert_eq!(known_dim(7, 3), 7);
        assert_eq!(known_dim(11, 2), 10);
        assert_eq!(known_dim(11, 3), 15);
        assert_eq!(known_dim(13, 2), 13);
        assert_eq!(known_dim(13, 3), 20);
        assert_eq!(known_dim(17, 2), 20);
        assert_eq!(known_dim(17, 3), 32);
        assert_eq!(known_dim(19, 2), 24);
        assert_eq!(known_dim(19, 3), 39);
    }

    #[test]
    fn basis_5_2_is_monomials() {
        let b = build_basis_with_order(5, 2, 40).unwrap();
        assert_eq!(b.monomials, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(b.dim, 3);
    }

    #[test]
    fn basis_7_2_family() {
        let b = build_basis_with_order(7, 2, 60).unwrap();
        assert_eq!(b.dim, 5);
        let want = vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2], vec![1, 0, 1], vec![0, 1, 1]];
        assert_eq!(b.monomials, want);
    }

    #[test]
    fn basis_13_2_printed_list() {
        let b = build_basis_with_order(13, 2, 60).unwrap();
        assert_eq!(b.dim, 13);
        assert_eq!(b.monomials[0], vec![2, 0, 0, 0, 0, 0]);
        assert_eq!(b.monomials[1], vec![1, 1, 0, 0, 0, 0]);
        assert_eq!(b.monomials[12], vec![0, 0, 0, 0, 0, 2]);
    }

    #[test]
    fn represent_identity_monomial() {
        let b = build_basis_with_order(5, 2, 40).unwrap();
        let coords = represent(&b.series[0], &b).unwrap();
        assert_eq!(coords, vec![rat(1), rat(0), rat(0)]);
    }

    #[test]
    fn represent_rejects_junk() {
        let b = build_basis_with_order(5, 2, 40).unwrap();
        let junk = FracSeries::from_i64_coeffs(1, 0, &vec![7; 41]);
        assert!(matches!(represent(&junk, &b), Err(QkError::NotInSpan)));
    }

    #[test]
    fn up_matrix_2_5_reference() {
        let b = build_basis(5, 2).unwrap();
        let a = build_up_matrix(&b).unwrap();
        let want =
            [[1i64, 0, 0], [22, 5, -22], [0, 0, 1]].map(|row| row.map(rat).to_vec()).to_vec();
        assert_eq!(a.entries, want);
    }

    #[test]
    fn krylov_examples_on_2_5() {
        let b = build_basis(5, 2).unwrap();
        let a = build_up_matrix(&b).unwrap();
        // U_5 eigenvector x0*x1 with eigenvalue 5.
        let mu = krylov_min_poly(&a, &[rat(0), rat(1), rat(0)]);
        assert_eq!(mu, IntPolynomial::from_i64(&[-5, 1]));
        let mu = krylov_min_poly(&a, &[rat(1), rat(0), rat(1)]);
        assert_eq!(mu, IntPolynomial::from_i64(&[-1, 1]));
        let mu = krylov_min_poly(&a, &[rat(-2), rat(11), rat(0)]);
        assert_eq!(mu, IntPolynomial::from_i64(&[-1, 1]));
        // char poly divisible by each Krylov minimal polynomial
        let cp = char_poly(&a);
        assert!(IntPolynomial::from_i64(&[-5, 1]).divides(&cp));
        assert!(IntPolynomial::from_i64(&[-1, 1]).divides(&cp));
    }

    #[test]
    fn krylov_identity_matrix() {
        let b = build_basis(5, 2).unwrap();
        let mut a = build_up_matrix(&b).unwrap();
        a.entries = (0..3)
            .map(|i| (0..3).map(|j| if i == j { rat(1) } else { rat(0) }).collect())
            .collect();
        let mu = krylov_min_poly(&a, &[rat(3), rat(-1), rat(2)]);
        assert_eq!(mu, IntPolynomial::from_i64(&[-1, 1]));
    }

    #[test]
    fn newton_polygon_examples() {
        // x - 5 at p = 5: one root of valuation 1
        let np =
            newton_polygon_valuations(&IntPolynomial::from_i64(&[-5, 1]), 5).unwrap();
        assert_eq!(np.finite, vec![Rational64::from_integer(1)]);
        assert_eq!(np.infinite, 0);
        // x^2 + 5x + 13 at p = 13: valuations {0, 1}
        let np =
            newton_polygon_valuations(&IntPolynomial::from_i64(&[13, 5, 1]), 13).unwrap();
        assert_eq!(
            np.finite,
            vec![Rational64::from_integer(0), Rational64::from_integer(1)]
        );
        // x - p^2: valuation 2
        let np =
            newton_polygon_valuations(&IntPolynomial::from_i64(&[-49, 1]), 7).unwrap();
        assert_eq!(np.finite, vec![Rational64::from_integer(2)]);
        // x^2: two zero roots
        let np = newton_polygon_valuations(&IntPolynomial::from_i64(&[0, 0, 1]), 5).unwrap();
        assert_eq!(np.infinite, 2);
    }

    #[test]
    fn up_matrix_consistency_with_dissect() {
        // coords(U_p f) = A coords(f) for combinations of basis elements.
        // The dissected series keeps 1/p of the window, so cache deep.
        let b = build_basis_with_order(5, 2, 60).unwrap();
        let a = build_up_matrix(&b).unwrap();
        let combos: [[i64; 3]; 4] = [[1, 0, 0], [0, 1, 0], [3, -2, 5], [7, 1, -4]];
        for c in combos {
            let coords: Vec<BigRational> = c.iter().map(|&x| rat(x)).collect();
            let f = b.reconstruct(&coords);
            let uf = f.dissect(5, 0).unwrap();
            let got = represent(&uf, &b).unwrap();
            assert_eq!(got, a.apply(&coords));
        }
    }
}
