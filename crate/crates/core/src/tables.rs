//! Frozen reference data: lattice counts, the certified congruence lists,
//! chimeral seed lists, dissection-congruence tables, printed
//! decomposition rows, and quadratic generator relations.
//!
//! This module is pure data plus small accessors.  Nothing here feeds the
//! computations themselves; it exists so the table-diff command and the
//! acceptance suite can compare regenerated results against fixed
//! expectations.

use crate::klein::ExponentVector;
use crate::orbit::orbit;
use crate::Result;
use std::collections::BTreeSet;

/// Lattice point counts per `(p, a0)`.
pub const TABLE2: [(u64, i64, u64); 30] = [
    (5, 2, 2),
    (5, 4, 4),
    (5, 6, 6),
    (5, 8, 9),
    (5, 10, 12),
    (7, 2, 6),
    (7, 4, 18),
    (7, 6, 39),
    (7, 8, 72),
    (7, 10, 120),
    (11, 2, 25),
    (11, 4, 226),
    (11, 6, 1000),
    (11, 8, 3126),
    (11, 10, 7877),
    (13, 2, 42),
    (13, 4, 684),
    (13, 6, 4388),
    (13, 8, 17976),
    (13, 10, 56076),
    (17, 2, 96),
    (17, 4, 4944),
    (17, 6, 68288),
    (17, 8, 486469),
    (17, 10, 2339800),
    (19, 2, 135),
    (19, 4, 12195),
    (19, 6, 248489),
    (19, 8, 2339379),
    (19, 10, 13997547),
];

/// Seed vectors of the certified Ramanujan-congruence lists, per `(p, a0)`;
/// the full lists are the sigma-orbits of the seeds.  `alpha` is the
/// congruence exponent (coefficients vanish mod `p^{alpha j}`).
pub fn certified_seeds(p: u64, a0: i64) -> Option<Vec<(Vec<i64>, u32)>> {
    let seeds: Vec<(Vec<i64>, u32)> = match (p, a0) {
        (5, 2) => vec![],
        (5, 4) => vec![(vec![4, -1, -1], 1)],
        (5, 6) => vec![(vec![6, 1, -4], 2)],
        (5, 8) => vec![(vec![8, 3, -7], 1), (vec![8, -2, -2], 1), (vec![8, 4, 4], 1)],
        (5, 10) => vec![(vec![10, 5, -10], 1), (vec![10, 0, -5], 1), (vec![10, 1, 6], 1)],
        (7, 2) => vec![],
        (7, 4) => vec![(vec![4, 1, -1, -2], 1)],
        (7, 6) => vec![
            (vec![6, 1, 0, -4], 2),
            (vec![6, 2, -3, -2], 1),
            (vec![6, -2, -5, 4], 1),
            (vec![6, -1, -1, -1], 1),
            (vec![6, 3, 3, 3], 1),
        ],
        (7, 8) => vec![
            (vec![8, 7, -3, -8], 1),
            (vec![8, 4, -1, -7], 1),
            (vec![8, 1, 1, -6], 1),
            (vec![8, 3, -5, -2], 1),
            (vec![8, 5, -4, -5], 1),
            (vec![8, 2, -2, -4], 1),
            (vec![8, 0, -3, -1], 1),
            (vec![8, 0, 6, 2], 1),
            (vec![8, 1, 3, 4], 1),
        ],
        (11, 2) => vec![],
        (11, 4) => vec![(vec![4, -2, 0, 0, 1, -1], 1), (vec![4, -2, 0, 1, -2, 1], 1)],
        (11, 6) => vec![(vec![6, -4, 1, 0, 0, 0], 2)],
        (11, 8) => vec![(vec![8, 4, 4, 4, 4, 4], 1)],
        (11, 10) => vec![(vec![10, -1, -1, -1, -1, -1], 1)],
        (13, 2) => vec![],
        (13, 4) => vec![
            (vec![4, -2, 0, 0, 1, -2, 1], 1),
            (vec![4, -2, 0, 0, 0, 1, -1], 1),
            (vec![4, -2, 1, -2, 1, 0, 0], 1),
        ],
        (13, 6) => vec![(vec![6, 1, 0, 0, 0, 0, -4], 2), (vec![6, -3, -1, 2, -3, 2, 0], 1)],
        (17, 2) => vec![],
        (17, 4) => vec![
            (vec![4, -2, 0, 0, 0, 0, 1, -2, 1], 1),
            (vec![4, -2, 0, 0, 0, 0, 0, 1, -1], 1),
            (vec![4, -2, 1, -2, 1, 0, 0, 0, 0], 1),
            (vec![4, -2, 0, 1, -2, 1, 0, 0, 0], 1),
        ],
        (17, 6) => vec![(vec![6, 1, 0, 0, 0, 0, 0, 0, -4], 2)],
        (19, 2) => vec![],
        (19, 4) => vec![
            (vec![4, -2, 0, 0, 0, 0, 0, 1, -2, 1], 1),
            (vec![4, -2, 0, 0, 0, 0, 0, 0, 1, -1], 1),
            (vec![4, -2, 1, -2, 1, 0, 0, 0, 0, 0], 1),
            (vec![4, -2, 0, 1, -2, 1, 0, 0, 0, 0], 1),
        ],
        (19, 6) => vec![(vec![6, 1, 0, 0, 0, 0, 0, 0, 0, -4], 2)],
        _ => return None,
    };
    Some(seeds)
}

/// Expand the certified seed list into the full orbit set with exponents.
pub fn certified_set(p: u64, a0: i64) -> Option<Result<Vec<(ExponentVector, u32)>>> {
    let seeds = certified_seeds(p, a0)?;
    let build = || -> Result<Vec<(ExponentVector, u32)>> {
        let mut out: BTreeSet<(ExponentVector, u32)> = BTreeSet::new();
        for (seed, alpha) in seeds {
            let v = ExponentVector::new(p, seed)?;
            for w in orbit(&v) {
                out.insert((w, alpha));
            }
        }
        Ok(out.into_iter().collect())
    };
    Some(build())
}

/// Weight-3 chimeral seed lists per level (all of order >= 1 mod p); the
/// full lists are the sigma-orbits.
pub fn chimeral_seeds(p: u64) -> Option<Vec<Vec<i64>>> {
    let seeds: Vec<Vec<i64>> = match p {
        11 => vec![
            vec![6, -5, 3, 0, -2, 1],
            vec![6, -4, 1, 1, -3, 2],
            vec![6, -1, -1, -3, 2, 0],
            vec![6, 1, 0, 1, -3, -2],
            vec![6, -3, 0, 3, -2, -1],
            vec![6, -3, 2, -1, -2, 1],
            vec![6, -1, 5, 1, 2, 2],
            vec![6, -5, 4, -3, 1, 0],
        ],
        13 => vec![
            vec![6, -5, 3, 0, -2, 1, 0],
            vec![6, -4, 1, 0, 1, -3, 2],
            vec![6, -1, -1, -3, 2, 0, 0],
            vec![6, 3, -2, 1, 0, -3, -2],
            vec![6, 1, 0, 0, 1, -3, -2],
            vec![6, -3, 2, -1, -2, 0, 1],
            vec![6, 5, 2, 2, 1, 1, -2],
            vec![6, -5, 4, -3, 1, 0, 0],
            vec![6, -4, 2, -2, 1, -1, 1],
            vec![6, -3, 0, -1, -1, 4, -2],
            vec![6, -2, -2, 1, 3, -2, -1],
            vec![6, -2, -2, 2, 1, -2, 0],
            vec![6, -2, 1, -1, 1, -1, -1],
            vec![6, -7, 7, -3, 2, -3, 1],
        ],
        17 => vec![
            vec![6, -5, 3, 0, -2, 1, 0, 0, 0],
            vec![6, -4, 1, 0, 0, 0, 1, -3, 2],
            vec![6, -1, -1, -3, 2, 0, 0, 0, 0],
            vec![6, 3, -2, 0, 0, 1, 0, -3, -2],
            vec![6, 1, 0, 0, 0, 0, 1, -3, -2],
            vec![6, -3, 2, -1, -2, 0, 1, 0, 0],
            vec![6, 5, 2, 2, 1, 1, -2, 0, 0],
            vec![6, -5, 4, -3, 1, 0, 0, 0, 0],
        ],
        19 => vec![
            vec![6, -5, 3, 0, -2, 1, 0, 0, 0, 0],
            vec![6, -4, 1, 0, 0, 0, 0, 1, -3, 2],
            vec![6, -1, -1, -3, 2, 0, 0, 0, 0, 0],
            vec![6, 3, -2, 0, 0, 0, 1, 0, -3, -2],
            vec![6, 1, 0, 0, 0, 0, 0, 1, -3, -2],
            vec![6, -3, 2, -1, -2, 0, 1, 0, 0, 0],
            vec![6, 5, 2, 2, 1, 1, -2, 0, 0, 0],
            vec![6, -5, 4, -3, 1, 0, 0, 0, 0, 0],
        ],
        _ => return None,
    };
    Some(seeds)
}

/// The eigenform family `(6, 1, 0, ..., 0, -4)` at level p (eigenvalue p^2).
pub fn family_6_1_m4(p: u64) -> Result<ExponentVector> {
    let half = ((p - 1) / 2) as usize;
    let mut a = vec![0i64; half + 1];
    a[0] = 6;
    a[1] = 1;
    a[half] = -4;
    ExponentVector::new(p, a)
}

/// The three weight-2 eigenform families (eigenvalue p), defined for
/// `p >= 11`.
pub fn weight2_families(p: u64) -> Result<Vec<ExponentVector>> {
    let half = ((p - 1) / 2) as usize;
    let mut out = Vec::new();
    // (4, -2, 0, ..., 0, 1, -2, 1)
    let mut a = vec![0i64; half + 1];
    a[0] = 4;
    a[1] = -2;
    a[half - 2] = 1;
    a[half - 1] = -2;
    a[half] = 1;
    out.push(ExponentVector::new(p, a)?);
    // (4, -2, 0, ..., 0, 1, -1)
    let mut a = vec![0i64; half + 1];
    a[0] = 4;
    a[1] = -2;
    a[half - 1] = 1;
    a[half] = -1;
    out.push(ExponentVector::new(p, a)?);
    // (4, 1, 1, 0, ..., 0, -2, -2)
    let mut a = vec![0i64; half + 1];
    a[0] = 4;
    a[1] = 1;
    a[2] = 1;
    a[half - 1] = -2;
    a[half] = -2;
    out.push(ExponentVector::new(p, a)?);
    Ok(out)
}

/// Families conjectured to satisfy `U_p(f) == 0 (mod p)` for all larger
/// primes (tested numerically only).
pub fn conjecture_families(p: u64) -> Result<Vec<ExponentVector>> {
    let half = ((p - 1) / 2) as usize;
    let place = |head: &[i64], tail: &[i64]| -> Result<ExponentVector> {
        let mut a = vec![0i64; half + 1];
        a[..head.len()].copy_from_slice(head);
        a[half + 1 - tail.len()..].copy_from_slice(tail);
        ExponentVector::new(p, a)
    };
    let mut out = Vec::new();
    if p >= 11 {
        out.push(place(&[6, -5, 3, 0, -2, 1], &[])?);
        out.push(place(&[6, 2, -4, -3, 1, 1], &[])?);
        out.push(place(&[6, -1, -1, -3, 2], &[])?);
        out.push(place(&[6, 1], &[1, -3, -2])?);
        out.push(place(&[6, -5, 4, -3, 1], &[])?);
    }
    if p >= 13 {
        out.push(place(&[6, 3, -2], &[1, 0, -3, -2])?);
        out.push(place(&[6, -3, 2, -1, -2, 0, 1], &[])?);
        out.push(place(&[6, 5, 2, 2, 1, 1, -2], &[])?);
    }
    Ok(out)
}

/// Level-5 dissection-congruence table: tails with
/// `U_{5,r}(f_{4,a1,a2}) == 0 (mod 5)`.
pub const LEVEL5_U5R: [(u64, &[[i64; 3]]); 5] = [
    (0, &[[4, -1, -1]]),
    (1, &[[4, 4, -6], [4, 5, 5]]),
    (2, &[[4, 5, 5]]),
    (3, &[[4, 5, 5]]),
    (4, &[[4, -6, 4], [4, 5, 5]]),
];

/// Level-7 table rows at residues 1 and 3 (weights 1..3); the remaining
/// residues follow by the sigma action: `r=2 <- sigma(r=1)`,
/// `r=4 <- sigma^2(r=1)`, `r=5 <- sigma^2(r=3)`, `r=6 <- sigma(r=3)`.
pub const LEVEL7_R1: [[i64; 4]; 7] = [
    [4, 3, 0, -5],
    [6, -7, 3, 1],
    [6, -3, 5, -5],
    [6, -2, 2, -3],
    [6, 0, 3, -6],
    [6, 3, -6, 0],
    [6, 7, 7, 7],
];

pub const LEVEL7_R3: [[i64; 4]; 16] = [
    [4, 2, 5, 3],
    [4, 3, 2, 5],
    [4, 5, 3, 2],
    [4, 6, -2, -6],
    [6, -6, 7, -4],
    [6, -3, -9, 9],
    [6, 0, -4, 1],
    [6, 3, 1, -7],
    [6, 3, 3, 3],
    [6, 4, -2, -5],
    [6, 5, -5, -3],
    [6, 6, -1, -8],
    [6, 7, -4, -6],
    [6, 7, 7, 7],
    [6, 9, -3, -9],
    [4, 0, 2, -4],
];

/// Level-11 table rows at residues 1 and 2 (weights 1..3); the remaining
/// residues are sigma-power images: `r=3 <- sigma(r1)`, `r=9 <- sigma^2(r1)`,
/// `r=5 <- sigma^3(r1)`, `r=4 <- sigma^4(r1)`, `r=6 <- sigma(r2)`,
/// `r=7 <- sigma^2(r2)`, `r=10 <- sigma^3(r2)`, `r=8 <- sigma^4(r2)`.
pub const LEVEL11_R1: [[i64; 6]; 4] = [
    [6, -3, 7, -4, -1, -2],
    [6, -2, 2, -5, 0, 2],
    [6, 1, 4, 0, 2, 2],
    [6, 7, -2, -4, -3, -1],
];

pub const LEVEL11_R2: [[i64; 6]; 10] = [
    [6, -3, 6, -2, -1, -3],
    [6, 0, -7, 0, 8, -4],
    [6, 0, -4, 4, 0, -3],
    [6, 0, 0, -4, 0, 1],
    [6, 1, -6, 3, 5, -6],
    [6, 2, 3, 3, 0, 1],
    [6, 3, -4, -5, -3, 6],
    [6, 3, -4, 0, 4, -6],
    [6, 3, 2, 1, 2, 1],
    [6, 3, 4, 1, 1, 0],
];

/// The nine mixed-modulus dissection congruences at levels 13, 17, 19:
/// `(p, vector, residues, modulus)` with `U_{p,r}(f) == 0 (mod modulus)`
/// for each listed residue.
pub fn mixed_congruences() -> Vec<(u64, Vec<i64>, Vec<u64>, u64)> {
    vec![
        (13, vec![4, -6, 6, -2, 0, 0, 0], vec![6, 7], 2),
        (17, vec![4, -6, 6, -2, 0, 0, 0, 0, 0], vec![6, 11], 2),
        (19, vec![4, -6, 6, -2, 0, 0, 0, 0, 0, 0], vec![6, 13], 2),
        (13, vec![4, -2, 0, -2, -1, 3, 0], vec![3, 10], 3),
        (17, vec![4, -6, 6, -2, 0, 0, 0, 0, 0], vec![8, 9], 3),
        (19, vec![4, -4, 1, 1, 1, -1, 0, 0, 0, 0], vec![5, 14], 3),
        (13, vec![4, -4, 1, 1, 1, -1, 0], vec![5, 8], 4),
        (13, vec![4, -5, 3, 1, -1, 0, 0], vec![4, 9], 6),
        (17, vec![4, -1, 0, 0, -5, 1, 0, 0, 3], vec![4, 13], 6),
    ]
}

/// Additional prime-modulus dissection congruences at level 13.  (Two
/// further listed examples fail the eta-exponent condition as printed --
/// the vectors are not modular -- and are omitted.)
pub fn extra_mixed_congruences() -> Vec<(u64, Vec<i64>, Vec<u64>, u64)> {
    vec![
        (13, vec![6, -8, 6, 0, -1, 0, 0], vec![4, 10], 13),
        (13, vec![4, -4, 2, -1, 1, 1, -1], vec![3], 13),
    ]
}

/// Quadratic generator relations per level, as `(i, j, coeff)` terms of
/// `sum coeff * x_i * x_j = 0`.
pub fn klein_relations(p: u64) -> Option<Vec<Vec<(usize, usize, i64)>>> {
    let rels: Vec<Vec<(usize, usize, i64)>> = match p {
        7 => vec![vec![(0, 1, 1), (1, 2, -1), (0, 2, -1)]],
        11 => vec![
            vec![(0, 1, 1), (1, 4, -1), (0, 3, -1)],
            vec![(0, 4, 1), (0, 3, -1), (2, 4, -1)],
            vec![(1, 4, 1), (0, 2, -1), (1, 2, -1)],
            vec![(1, 3, 1), (0, 2, -1), (3, 2, -1)],
            vec![(1, 3, 1), (4, 3, -1), (2, 4, -1)],
        ],
        13 => vec![
            vec![(1, 3, 1), (3, 5, -1), (1, 5, -1)],
            vec![(3, 4, 1), (4, 5, -1), (0, 5, -1)],
            vec![(0, 4, 1), (0, 2, -1), (2, 4, -1)],
            vec![(1, 4, 1), (2, 4, 1), (3, 4, -1), (1, 5, -1), (2, 5, -1)],
            vec![(0, 3, 1), (3, 5, 1), (0, 4, -1), (2, 4, 1), (2, 5, -1), (4, 5, -1)],
        ],
        _ => return None,
    };
    Some(rels)
}

/// Decomposition rows of the weight-one generators / seed products,
/// verified by exact reassembly.  Entry `(p, source tail, rows)`.
///
/// The two level-11 rows whose residue-0 entries are transposed in common
/// reference listings are stored in the verified orientation (`x2` and
/// `x4` each reproduce themselves under the residue-0 extraction).
pub fn dissection_rows(p: u64) -> Option<Vec<(Vec<i64>, Vec<Vec<i64>>)>> {
    let rows: Vec<(Vec<i64>, Vec<Vec<i64>>)> = match p {
        5 => vec![
            (
                vec![2, -3, 2],
                vec![vec![1, 0], vec![3], vec![4], vec![2], vec![1]],
            ),
            (
                vec![2, 2, -3],
                vec![vec![0, 1], vec![1], vec![-2], vec![4], vec![-3]],
            ),
        ],
        7 => vec![
            (
                vec![2, -2, 0, 1],
                vec![
                    vec![1, 0, 0],
                    vec![2, 0],
                    vec![1, 3],
                    vec![3],
                    vec![1, 1],
                    vec![1],
                    vec![2],
                ],
            ),
            (
                vec![2, 0, 1, -2],
                vec![
                    vec![0, 1, 0],
                    vec![1, 1],
                    vec![-2, 0],
                    vec![-1],
                    vec![-1, 3],
                    vec![2],
                    vec![-3],
                ],
            ),
            (
                vec![2, 1, -2, 0],
                vec![
                    vec![0, 0, 1],
                    vec![1, -3],
                    vec![1, -1],
                    vec![2],
                    vec![-2, 0],
                    vec![3],
                    vec![-1],
                ],
            ),
        ],
        11 => vec![
            (
                vec![2, -1, -1, 0, 1, 0],
                vec![
                    vec![1, 0, 0, 0, 0],
                    vec![1, 2, 1],
                    vec![-1, 2],
                    vec![2, 1, 1],
                    vec![0, -1, 2],
                    vec![2, 0, 0],
                    vec![2, 0],
                    vec![1, 0],
                    vec![1, 0],
                    vec![1, 0, 0],
                    vec![2, 1],
                ],
            ),
            (
                vec![2, -1, 1, 0, 0, -1],
                vec![
                    vec![0, 1, 0, 0, 0],
                    vec![1, 0, 2],
                    vec![0, 1],
                    vec![2, -1, 1],
                    vec![-2, 0, 0],
                    vec![0, -1, 0],
                    vec![-1, 2],
                    vec![2, 0],
                    vec![-1, 2],
                    vec![-1, 2, -1],
                    vec![-1, 0],
                ],
            ),
            (
                vec![2, 1, 0, -1, 0, -1],
                vec![
                    vec![0, 0, 1, 0, 0],
                    vec![0, -2, 0],
                    vec![-2, 1],
                    vec![0, 1, -2],
                    vec![0, -1, 0],
                    vec![2, -1, -1],
                    vec![0, -1],
                    vec![1, -2],
                    vec![0, 1],
                    vec![-1, -2, 1],
                    vec![2, 0],
                ],
            ),
            (
                vec![2, 0, 0, -1, -1, 1],
                vec![
                    vec![0, 0, 0, 1, 0],
                    vec![1, 0, 0],
                    vec![1, 0],
                    vec![-2, 0, 0],
                    vec![-2, 1, 1],
                    vec![2, 1, -1],
                    vec![-2, 1],
                    vec![0, -1],
                    vec![0, 2],
                    vec![-1, 0, 2],
                    vec![-1, -2],
                ],
            ),
            (
                vec![2, 0, -1, 1, -1, 0],
                vec![
                    vec![0, 0, 0, 0, 1],
                    vec![1, -2, -1],
                    vec![-2, 0],
                    vec![0, 1, 0],
                    vec![2, 1, -1],
                    vec![0, -1, 2],
                    vec![-1, 0],
                    vec![2, -1],
                    vec![-2, 1],
                    vec![0, 2, 0],
                    vec![0, 1],
                ],
            ),
        ],
        13 => vec![(
            vec![2, -1, 0, -1, 0, 0, 1],
            vec![
                vec![1, 0, 0, 0, 0, 0],
                vec![0, 1, 0],
                vec![3, 1, -2],
                vec![2, 2, 1],
                vec![1, 1, 1],
                vec![0, 1, 2],
                vec![1, 0, 2],
                vec![1, 1, 0],
                vec![0, 1, 0],
                vec![0, 0, 1],
                vec![-1, -1, 1],
                vec![1, 0, 0],
                vec![0, -1, 2],
            ],
        )],
        17 => vec![(
            vec![2, 0, -1, -1, 0, 0, 0, 0, 1],
            vec![
                vec![1, 0, 0, 0, 0, 0, 0, 0],
                vec![-1, 1, -2, 2],
                vec![0, 1, 0, 0],
                vec![1, 1, 0, 0],
                vec![3, 1, -3, -2],
                vec![1, 1, 1, 1],
                vec![0, -1, 1, 2],
                vec![0, 1, 1, 0],
                vec![0, 1, 1, 0],
                vec![1, 0, 2, -1],
                vec![1, 2, 0, -1],
                vec![1, 0, 0, 1],
                vec![1, 1, 1, -1],
                vec![1, 0, -1, 1],
                vec![-1, -1, 0, 2],
                vec![0, 0, 2, -1],
                vec![0, 0, 1, 1],
            ],
        )],
        19 => vec![(
            vec![2, 0, 0, -1, -1, -1, 0, 0, 1, 1],
            vec![
                vec![1, 0, 0, 0, 0, 0, 0, 0, 0],
                vec![0, 1, 0, 1, 0],
                vec![1, 2, -1, -2],
                vec![0, 0, 1, 1],
                vec![-1, 1, 1, 0, 0],
                vec![1, -1, 1, -1, 0],
                vec![2, -1, 0, -1, 1],
                vec![0, 1, 0, 1, 0],
                vec![1, 0, 0, 0],
                vec![1, 0, 1, -1, 1],
                vec![1, 0, 0, -1],
                vec![0, 1, 0, 0, 1],
                vec![0, 1, -2, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
                vec![1, 0, -1, -1],
                vec![1, -2, 1, 0, -1],
                vec![0, 0, 0, 1, 0],
                vec![0, 1, 0, 0],
            ],
        )],
        _ => return None,
    };
    Some(rows)
}

/// The reference 3x3 dissection matrix on the weight-2 level-5 basis.
pub const UP_MATRIX_2_5: [[i64; 3]; 3] = [[1, 0, 0], [22, 5, -22], [0, 0, 1]];

/// A quadratic factor of the characteristic polynomial at `(13, 2)`:
/// `x^2 + 5x + 13`, constant term first.
pub const CHARPOLY_FACTOR_13_2: [i64; 3] = [13, 5, 1];

/// Eigen-span reference data at `(5, 2)`: eigenvalue 1 is spanned by
/// `(1,0,1)` and `(-2,11,0)`; eigenvalue 5 by `(0,1,0)`.
pub const EIGEN_2_5_ONE: [[i64; 3]; 2] = [[1, 0, 1], [-2, 11, 0]];
pub const EIGEN_2_5_FIVE: [i64; 3] = [0, 1, 0];

/// Recommended cache window for the weight-one component basis.
pub fn gamma_basis_order(p: u64) -> i64 {
    (p as i64) * ((p as i64 - 1) / 2 + 10)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certified_sets_expand() {
        // p = 13, a0 = 4: orbit sizes 3 + 6 + 6 = 15 vectors.
        let set = certified_set(13, 4).unwrap().unwrap();
        assert_eq!(set.len(), 15);
        // p = 7, a0 = 6: 3 + 3 + 3 + 1 + 1 = 11.
        let set = certified_set(7, 6).unwrap().unwrap();
        assert_eq!(set.len(), 11);
        // p = 5, a0 = 8: 2 + 1 + 1.
        let set = certified_set(5, 8).unwrap().unwrap();
        assert_eq!(set.len(), 4);
    }

    #[test]
    fn families_are_modular() {
        use crate::klein::is_modular;
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31] {
            assert!(is_modular(&family_6_1_m4(p).unwrap()).0, "family 1 at p={p}");
        }
        for p in [11u64, 13, 17, 19, 23, 29, 31] {
            for f in weight2_families(p).unwrap() {
                assert!(is_modular(&f).0, "weight-2 family {f} at p={p}");
            }
        }
        for p in [11u64, 13, 17, 19, 23] {
            for f in conjecture_families(p).unwrap() {
                assert!(is_modular(&f).0, "conjecture family {f} at p={p}");
            }
        }
    }

    #[test]
    fn chimeral_seeds_are_modular_weight3() {
        use crate::klein::is_modular;
        for p in [11u64, 13, 17, 19] {
            for seed in chimeral_seeds(p).unwrap() {
                let v = ExponentVector::new(p, seed).unwrap();
                assert_eq!(is_modular(&v), (true, 3), "{v}");
            }
        }
    }
}
