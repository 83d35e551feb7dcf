//! Weight-one bases for `Gamma(p)` split by residue component, dissection
//! tables `f(tau/p) = sum_r row_r . V_{p,r}`, quadratic relations among the
//! weight-one generators, and the level-10 parity construction.
//!
//! Each component `r` of `M_1(Gamma(p))` consists of series in
//! `q^{r/p} Z[[q]]`; component 0 is `M_1(Gamma_1(p))` itself, spanned by
//! the generators `x_n`.  Membership in a component is decided by
//! support-grid inspection of the cached expansions.

use crate::error::QkError;
use crate::klein::{ell, is_modular, klein_series, product_series, ExponentVector};
use crate::linalg::{represent_series, sturm_bound, weight_one_generators, RowReducer};
use crate::orbit::{
    apply_sigma, dissection_residue_map, gamma_matrix, lambda_sign, lambda_sign_pth, sigma,
};
use crate::series::FracSeries;
use crate::Result;
use num_rational::{BigRational, Rational64};
use num_traits::Zero;

/// Weight-one component basis of `M_1(Gamma(p))`, residues `0..p-1`.
pub struct GammaPBasis {
    pub p: u64,
    /// Component `r` members as exponent vectors.
    pub components: Vec<Vec<ExponentVector>>,
    /// Cached expansions, same shape as `components`.
    pub series: Vec<Vec<FracSeries>>,
    /// Cached window (inclusive exponent bound used at construction).
    pub order: i64,
}

fn ev(p: u64, a: &[i64]) -> ExponentVector {
    ExponentVector::from_slice(p, a).expect("static component vector")
}

/// Fixed component lists for `p = 5, 7, 11` (weight-one Klein quotients,
/// written as exponent vectors with `a_0 = -2 sum a_i`).
fn fixed_components(p: u64) -> Option<Vec<Vec<Vec<i64>>>> {
    let table: Vec<Vec<Vec<i64>>> = match p {
        5 => vec![
            vec![],
            vec![vec![2, -2, 1]],
            vec![vec![2, -1, 0]],
            vec![vec![2, 0, -1]],
            vec![vec![2, 1, -2]],
        ],
        7 => vec![
            vec![],
            vec![vec![2, -2, 1, 0], vec![2, 1, -1, -1]],
            vec![vec![2, 1, 0, -2], vec![2, -1, -1, 1]],
            vec![vec![2, -1, 0, 0]],
            vec![vec![2, 0, -2, 1], vec![2, -1, 1, -1]],
            vec![vec![2, 0, -1, 0]],
            vec![vec![2, 0, 0, -1]],
        ],
        11 => vec![
            // r = 0 is filled with the generator orbit below.
            vec![],
            vec![
                vec![2, -1, -1, 1, -1, 1],
                vec![2, 0, 0, -1, 0, 0],
                vec![2, 2, 0, 0, -1, -2],
            ],
            vec![vec![2, 1, 0, 0, -1, -1], vec![2, -1, -1, 1, 0, 0]],
            vec![
                vec![2, 0, 0, 0, -1, 0],
                vec![2, -1, -1, 1, 1, -1],
                vec![2, 0, -1, -2, 0, 2],
            ],
            vec![
                vec![2, 0, 0, 0, 0, -1],
                vec![2, 1, -1, -1, -1, 1],
                vec![2, -2, 2, -1, 0, 0],
            ],
            vec![
                vec![2, -1, 0, 0, 0, 0],
                vec![2, 1, 1, -1, -1, -1],
                vec![2, 0, -2, 0, 2, -1],
            ],
            vec![vec![2, 0, -1, -1, 0, 1], vec![2, -1, 0, 0, 1, -1]],
            vec![vec![2, -1, 0, 1, -1, 0], vec![2, 0, 1, -1, 0, -1]],
            vec![vec![2, 0, -1, 0, -1, 1], vec![2, -1, 1, -1, 0, 0]],
            // The third member here is the quotient with a single power of
            // K_{11,1} in the denominator (the squared reading is not
            // weight one and lands in the wrong component).
            vec![
                vec![2, -1, 1, -1, 1, -1],
                vec![2, 0, -1, 0, 0, 0],
                vec![2, -1, 0, 2, -2, 0],
            ],
            // Second member: single powers of K_{11,3} K_{11,4} in the
            // denominator (the class-10 quotient the sigma-chain demands).
            vec![vec![2, 0, -1, 0, 1, -1], vec![2, 1, 0, -1, -1, 0]],
        ],
        _ => return None,
    };
    Some(table)
}

/// Seed lists for the quadratic-residue and nonresidue component orbits at
/// `p = 13, 17, 19`.
fn component_seeds(p: u64) -> Option<(Vec<Vec<i64>>, Vec<Vec<i64>>)> {
    let (qr, nr): (Vec<Vec<i64>>, Vec<Vec<i64>>) = match p {
        13 => (
            vec![
                vec![2, -1, 1, 0, -1, 1, -1],
                vec![2, -2, 1, 0, 0, 0, 0],
                vec![2, -1, -1, 1, 0, -1, 1],
            ],
            vec![
                vec![2, 1, 0, 0, -1, 0, -1],
                vec![2, -2, 2, -1, 1, -1, 0],
                vec![2, 1, -1, -1, 0, 0, 0],
            ],
        ),
        17 => (
            vec![
                vec![2, 0, -1, 0, 0, 0, 1, 0, -1],
                vec![2, 0, 0, -1, 0, 0, -1, 0, 1],
                vec![2, -1, -1, 1, 0, 0, 0, -1, 1],
                vec![2, -2, 0, 2, -1, 0, 1, -2, 1],
            ],
            vec![
                vec![2, -1, 0, 0, 0, 0, -1, 1, 0],
                vec![2, 0, 0, 1, -1, 0, 0, -1, 0],
                vec![2, 0, 0, 0, 1, -1, 0, 0, -1],
                vec![2, 0, -1, -1, 0, 1, 0, 0, 0],
            ],
        ),
        19 => (
            vec![
                vec![2, 0, 0, 0, -1, -1, 0, 0, 0, 1],
                vec![2, -1, 1, 0, -1, 0, 0, -1, 1, 0],
                vec![2, 0, -1, 0, 0, 0, 0, 1, 0, -1],
                vec![2, 0, 0, -1, 0, -1, 1, 0, 0, 0],
                vec![2, -1, -1, 1, 0, 0, 0, 0, -1, 1],
            ],
            vec![
                vec![2, -1, 0, 0, 0, -1, 2, 0, -1, 0],
                vec![2, 0, -1, 0, 1, 0, -1, 1, 0, -1],
                vec![2, -1, 0, 1, 0, 0, 0, 0, -1, 0],
                vec![2, 0, -1, 0, 0, 1, 1, -1, -1, 0],
            ],
        ),
        _ => return None,
    };
    Some((qr, nr))
}

/// Build the component lists for a supported prime.
pub fn component_vectors(p: u64) -> Result<Vec<Vec<ExponentVector>>> {
    if let Some(table) = fixed_components(p) {
        let mut comps: Vec<Vec<ExponentVector>> = table
            .into_iter()
            .map(|comp| comp.into_iter().map(|a| ev(p, &a)).collect())
            .collect();
        // Component 0 is the generator orbit for every level.
        comps[0] = weight_one_generators(p)?;
        return Ok(comps);
    }
    let Some((qr_seed, nr_seed)) = component_seeds(p) else {
        return Err(QkError::UnsupportedPrime(p));
    };
    let data = sigma(p)?;
    let half = (p - 1) / 2;
    let mut comps: Vec<Vec<ExponentVector>> = vec![Vec::new(); p as usize];
    comps[0] = weight_one_generators(p)?;
    let ai = data.alpha_inv;
    for n in 0..half {
        let r_qr = (crate::klein::pow_mod(ai, 2 * n, p)) as usize;
        let r_nr = (crate::klein::pow_mod(ai, 2 * n + 1, p)) as usize;
        comps[r_qr] = qr_seed.iter().map(|a| apply_sigma(&ev(p, a), n)).collect();
        comps[r_nr] = nr_seed.iter().map(|a| apply_sigma(&ev(p, a), n)).collect();
    }
    Ok(comps)
}

/// Component residue class of a weight-one vector: `p * l(w) mod p`.
pub fn component_class(w: &ExponentVector) -> u64 {
    let l = ell(w);
    let scaled = l * Rational64::from_integer(w.p() as i64);
    debug_assert!(scaled.is_integer());
    scaled.to_integer().rem_euclid(w.p() as i64) as u64
}

/// Series membership test `f in q^{r/p} Z[[q]]` by support-grid inspection.
pub fn in_component_class(f: &FracSeries, p: u64, r: u64) -> bool {
    let aligned = f.rescale_grid(integer_lcm(f.den(), p as i64));
    let step = aligned.den() / p as i64;
    for (num, c) in aligned.terms() {
        let _ = c;
        if num.rem_euclid(aligned.den()) != (r as i64) * step {
            return false;
        }
    }
    true
}

fn integer_lcm(a: i64, b: i64) -> i64 {
    num_integer::Integer::lcm(&a, &b)
}

/// Construct and verify the weight-one basis of `M_1(Gamma(p))` split by
/// residue components, with expansions cached through exponent `order`.
pub fn gamma_p_basis(p: u64, order: i64) -> Result<GammaPBasis> {
    let components = component_vectors(p)?;
    let total: usize = components.iter().map(|c| c.len()).sum();
    let expect = ((p * p - 1) / 4) as usize;
    if total != expect {
        return Err(QkError::Internal(format!(
            "component sizes sum to {total}, expected {expect} for p={p}"
        )));
    }
    if components[0].len() != ((p - 1) / 2) as usize {
        return Err(QkError::Internal("component 0 must hold the generators".into()));
    }
    let mut series = Vec::with_capacity(components.len());
    for (r, comp) in components.iter().enumerate() {
        let mut row = Vec::with_capacity(comp.len());
        for w in comp {
            if component_class(w) != r as u64 {
                return Err(QkError::Internal(format!(
                    "component member {w} declared in class {r} but lies in {}",
                    component_class(w)
                )));
            }
            let s = product_series(w, order)?;
            if !in_component_class(&s, p, r as u64) {
                return Err(QkError::Internal(format!(
                    "expansion of {w} leaves class q^{r}/{p}"
                )));
            }
            row.push(s);
        }
        // Per-component linear independence on the cached window.
        let mut reducer = RowReducer::new();
        for coeffs in crate::linalg::aligned_rows(&row) {
            if !reducer.try_add(coeffs) {
                return Err(QkError::Internal(format!(
                    "component {r} of p={p} is linearly dependent"
                )));
            }
        }
        series.push(row);
    }
    Ok(GammaPBasis { p, components, series, order })
}

/// A dissection table: `source(tau/p) = sum_r rows[r] . V_{p,r}` with exact
/// coefficients over the component bases.
#[derive(Clone, Debug)]
pub struct DissectionTable {
    pub source: ExponentVector,
    pub rows: Vec<Vec<BigRational>>,
}

impl DissectionTable {
    /// Integer rendering of a row (errors if non-integral).
    pub fn row_i64(&self, r: usize) -> Option<Vec<i64>> {
        self.rows[r]
            .iter()
            .map(|c| {
                if c.is_integer() {
                    i64::try_from(c.to_integer()).ok()
                } else {
                    None
                }
            })
            .collect()
    }
}

/// Decompose `f_v(tau/p)` over the residue components of the weight-one
/// basis.  `v` must be modular of weight one (higher weights decompose
/// over product components; see [`decompose_weight_k`]).
pub fn decompose(v: &ExponentVector, basis: &GammaPBasis) -> Result<DissectionTable> {
    let (ok, k) = is_modular(v);
    if !ok {
        return Err(QkError::NotModular(format!("{v}")));
    }
    if k != 1 {
        return Err(QkError::InvalidArgument(format!(
            "decompose expects weight one, got weight {k}; use decompose_weight_k"
        )));
    }
    let p = v.p();
    let f = product_series(v, basis.order)?;
    decompose_series(&f, v.clone(), p, basis)
}

fn decompose_series(
    f: &FracSeries,
    source: ExponentVector,
    p: u64,
    basis: &GammaPBasis,
) -> Result<DissectionTable> {
    let g = f.coarsen_grid().scale_exp_div(p as i64);
    let mut rows = Vec::with_capacity(p as usize);
    for r in 0..p {
        // Component r of g: support numerators = r (mod p) on the 1/p grid.
        let gr = extract_p_component(&g, p, r);
        let coords = represent_series(&gr, &basis.series[r as usize], 8)?;
        rows.push(coords);
    }
    // Round-trip: the rows reassemble g exactly on the window.
    let mut recon = FracSeries::zero(g.den(), g.end());
    for (r, row) in rows.iter().enumerate() {
        for (c, s) in row.iter().zip(&basis.series[r]) {
            if !c.is_zero() {
                recon = recon.add(&s.scale(c));
            }
        }
    }
    let through = {
        let a = g.window_end();
        let b = recon.window_end();
        (if a < b { a } else { b }) - Rational64::new(1, g.den() * recon.den())
    };
    if !g.eq_through(&recon, through)? {
        return Err(QkError::Internal(format!(
            "dissection of {source} does not reassemble"
        )));
    }
    Ok(DissectionTable { source, rows })
}

/// Keep exponents whose numerator is `== r (mod p)` on the `1/p`-refining
/// grid of `f`.
fn extract_p_component(f: &FracSeries, p: u64, r: u64) -> FracSeries {
    let den = f.den();
    assert!(den % p as i64 == 0, "grid must refine 1/p");
    let step = den / p as i64;
    // numerator = (r * step) mod (p * step) picks the class r/p.
    f.extract_class(p as i64 * step, (r as i64) * step)
}

/// Decompose a weight-k form over rank-filtered products of weight-one
/// component members (residues adding mod p).
pub fn decompose_weight_k(v: &ExponentVector, basis: &GammaPBasis) -> Result<DissectionTable> {
    let (ok, k) = is_modular(v);
    if !ok {
        return Err(QkError::NotModular(format!("{v}")));
    }
    let p = v.p();
    let f = product_series(v, basis.order)?;
    let g = f.coarsen_grid().scale_exp_div(p as i64);
    let mut rows = Vec::with_capacity(p as usize);
    for r in 0..p {
        let gr = extract_p_component(&g, p, r);
        let span = component_products(basis, k as u32, r)?;
        let coords = represent_series(&gr, &span, 8)?;
        rows.push(coords);
    }
    Ok(DissectionTable { source: v.clone(), rows })
}

/// Rank-filtered degree-k products of weight-one component members whose
/// residues sum to `r` mod p.
fn component_products(basis: &GammaPBasis, k: u32, r: u64) -> Result<Vec<FracSeries>> {
    let p = basis.p;
    if k == 1 {
        return Ok(basis.series[r as usize].clone());
    }
    let prev_all: Vec<(u64, FracSeries)> = (0..p)
        .flat_map(|s| {
            component_products(basis, k - 1, s)
                .unwrap_or_default()
                .into_iter()
                .map(move |f| (s, f))
        })
        .collect();
    let mut cands = Vec::new();
    for (s, f) in &prev_all {
        let need = (p + r - (s % p)) % p;
        for w in &basis.series[need as usize] {
            cands.push(f.mul(w));
        }
    }
    // Keep an aligned-window full-rank subset.
    let rows = crate::linalg::aligned_rows(&cands);
    let mut reducer = RowReducer::new();
    let mut out = Vec::new();
    for (cand, coeffs) in cands.iter().zip(rows) {
        if reducer.try_add(coeffs) {
            out.push(cand.clone());
        }
    }
    Ok(out)
}

/// Transport a dissection table along `sigma`: residues move by
/// `s(r) = alpha_inv^2 r`, members map to their sigma images with the
/// slash-action sign `lambda^p`, and the whole table picks up
/// `lambda(gamma_p, source)^{-1}`.
pub fn decompose_sigma_image(
    table: &DissectionTable,
    basis: &GammaPBasis,
    steps: u64,
) -> Result<DissectionTable> {
    let p = table.source.p();
    let g = gamma_matrix(p)?;
    let mut cur = table.clone();
    for _ in 0..steps {
        let global = lambda_sign(&g, &cur.source)?; // +-1, equal to its inverse
        let mut rows: Vec<Vec<BigRational>> =
            (0..p).map(|r| vec![BigRational::zero(); basis.components[r as usize].len()]).collect();
        for r in 0..p as usize {
            if cur.rows[r].iter().all(|c| c.is_zero()) {
                continue;
            }
            let target = dissection_residue_map(p, r as u64)? as usize;
            // Transport sum_d row[d] w_d to sum_d row[d] lambda^p(w_d) sigma(w_d),
            // expressed over the target component.
            let mut moved = FracSeries::zero(1, basis.order);
            let mut exact = true;
            let mut pending: Vec<(usize, BigRational)> = Vec::new();
            for (d, c) in cur.rows[r].iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let w = &basis.components[r][d];
                let sign = lambda_sign_pth(&g, w)?;
                let img = apply_sigma(w, 1);
                let factor = if sign < 0 { -c.clone() } else { c.clone() };
                match basis.components[target].iter().position(|u| *u == img) {
                    Some(pos) if exact => pending.push((pos, factor)),
                    _ => {
                        exact = false;
                        let s = product_series(&img, basis.order)?;
                        moved = moved.add(&s.scale(&factor));
                    }
                }
            }
            if exact {
                for (pos, c) in pending {
                    rows[target][pos] += c;
                }
            } else {
                // Mixed case: fold the exactly-matched members back in and
                // solve over the target component.
                for (pos, c) in pending {
                    let s = basis.series[target][pos].scale(&c);
                    moved = moved.add(&s);
                }
                rows[target] = represent_series(&moved, &basis.series[target], 8)?;
            }
            if global < 0 {
                for c in rows[target].iter_mut() {
                    *c = -c.clone();
                }
            }
        }
        cur = DissectionTable { source: apply_sigma(&cur.source, 1), rows };
    }
    Ok(cur)
}

/// Verify a quadratic relation `sum c_{ij} x_i x_j = 0` among the
/// weight-one generators, to the weight-2 Sturm window.
pub fn verify_klein_relation(p: u64, relation: &[(usize, usize, i64)]) -> Result<bool> {
    let window = sturm_bound(p, 2) + 4;
    let gens = weight_one_generators(p)?;
    let xs: Vec<FracSeries> = gens
        .iter()
        .map(|v| product_series(v, window + 1))
        .collect::<Result<_>>()?;
    let mut acc = FracSeries::zero(1, window + 1);
    for &(i, j, c) in relation {
        let term = xs[i].mul(&xs[j]).scale(&BigRational::from_integer(c.into()));
        acc = acc.add(&term);
    }
    acc.is_zero_through(Rational64::from_integer(window))
}

/// The twelve level-10 series `w_1..w_12`: parity splits of the level-5
/// weight-one basis under `tau -> tau/2`, on the exact `1/10` grid.
pub fn level10_basis(order: i64) -> Result<Vec<FracSeries>> {
    // u_j = K_{5,1}^{j-3} K_{5,2}^{2-j}, 0 <= j <= 5; the pairs are taken
    // from u_0, u_5, u_1, u_2, u_3, u_4 in that order, splitting the
    // exponents (j + 5m)/10 into the two classes mod 1.
    let k1 = klein_series(5, 1, 2 * order + 8)?;
    let k2 = klein_series(5, 2, 2 * order + 8)?;
    let mut out = Vec::with_capacity(12);
    for (idx, j) in [0i64, 5, 1, 2, 3, 4].into_iter().enumerate() {
        let u = k1.pow(j - 3)?.mul(&k2.pow(2 - j)?).coarsen_grid();
        let s = u.scale_exp_div(2);
        let s = s.rescale_grid(integer_lcm(s.den(), 10));
        let step = s.den() / 10;
        let first = LEVEL10_CLASSES[2 * idx].rem_euclid(10);
        let second = LEVEL10_CLASSES[2 * idx + 1].rem_euclid(10);
        out.push(s.extract_class(10 * step, first * step).coarsen_grid());
        out.push(s.extract_class(10 * step, second * step).coarsen_grid());
    }
    Ok(out)
}

/// Exponent-class table for the twelve level-10 series, as numerators over
/// 10: `w_1 in q^{0} Z[[q]]`, `w_2 in q^{5/10} Z[[q]]`, and so on.
pub const LEVEL10_CLASSES: [i64; 12] = [0, 5, 0, 5, 1, 6, 2, 7, 3, 8, 4, 9];

/// The level-10 parity checks: membership classes of `w_1..w_12`, the
/// reassembly of `u_0(tau/10)` and `u_5(tau/10)`, linear independence, and
/// evenness of the two dissections of the 5-core product at residues 3 and
/// 7 mod 10 (verified against their displayed product expansions).
pub fn verify_garvan5(order: i64) -> Result<bool> {
    // Structural checks (independence, reassembly, product identities) are
    // exact on a fixed window; the parity scan runs over the full order.
    let structural = order.min(60);
    let w = level10_basis(structural)?;
    for (i, wi) in w.iter().enumerate() {
        if !in_component_class(wi, 10, LEVEL10_CLASSES[i].rem_euclid(10) as u64) {
            return Ok(false);
        }
    }
    // Independence of the twelve series.
    let mut reducer = RowReducer::new();
    for coeffs in crate::linalg::aligned_rows(&w) {
        if !reducer.try_add(coeffs) {
            return Ok(false);
        }
    }
    let through = Rational64::from_integer(structural - 2);
    // u_0(tau/10) and u_5(tau/10) reassemble from the w's.
    let k1 = klein_series(5, 1, 10 * structural + 8)?;
    let k2 = klein_series(5, 2, 10 * structural + 8)?;
    let u0 = k1.pow(-3)?.mul(&k2.pow(2)?).coarsen_grid().scale_exp_div(10);
    let u5 = k1.pow(2)?.mul(&k2.pow(-3)?).coarsen_grid().scale_exp_div(10);
    let combo = |coeffs: [i64; 12]| -> FracSeries {
        let mut acc = FracSeries::zero(10, 10 * structural);
        for (c, wi) in coeffs.iter().zip(&w) {
            if *c != 0 {
                acc = acc.add(&wi.scale(&BigRational::from_integer((*c).into())));
            }
        }
        acc
    };
    // The dissection rows of the level-5 weight-one pair transported to
    // level 10: pairs inherit the 5-dissection coefficients.
    let u0_row = combo([1, 1, 0, 0, 3, 3, 4, 4, 2, 2, 1, 1]);
    let u5_row = combo([0, 0, 1, 1, 1, 1, -2, -2, 4, 4, -3, -3]);
    if !u0.eq_through(&u0_row, through)? || !u5.eq_through(&u5_row, through)? {
        return Ok(false);
    }
    // The two dissections of the 5-core product at residues 3, 7 mod 10:
    // exact w-product expansions (solved once over the class-graded
    // products, then frozen) on the structural window, and coefficient
    // parity over the full order.
    let f = product_series(&ev(5, &[4, -1, -1]), 10 * structural)?;
    let two = BigRational::from_integer(2.into());
    let u103 = f.dissect(10, 3)?;
    let u107 = f.dissect(10, 7)?;
    let m = |i: usize, j: usize| w[i - 1].mul(&w[j - 1]);
    // U_{10,3}(f) = 2 w1 w9 + 2 w2 w10 - w3 w9 - w4 w10
    let rhs3 = m(1, 9).scale(&two).add(&m(2, 10).scale(&two)).sub(&m(3, 9)).sub(&m(4, 10));
    // U_{10,7}(f) = w1 w8 + w2 w7 + 2 w3 w8 + 2 w4 w7
    let rhs7 = m(1, 8).add(&m(2, 7)).add(&m(3, 8).scale(&two)).add(&m(4, 7).scale(&two));
    if !u103.eq_through(&rhs3, through)? || !u107.eq_through(&rhs7, through)? {
        return Ok(false);
    }
    // Parity of every dissected coefficient through the full order.
    let f = product_series(&ev(5, &[4, -1, -1]), 10 * order)?;
    let parity_through = Rational64::from_integer(order - 1);
    for r in [3i64, 7] {
        let image = f.dissect(10, r)?;
        let reduced = image.reduce_mod(&num_bigint::BigInt::from(2))?;
        if !reduced.is_zero_through(parity_through)? {
            return Ok(false);
        }
    }
    Ok(true)
}
