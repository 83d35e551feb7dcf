//! Table regeneration and diffing against the frozen reference data.

use qklein::dissect;
use qklein::klein::ExponentVector;
use qklein::lattice;
use qklein::miner::{self, MinerConfig};
use qklein::orbit::apply_sigma;
use qklein::tables;
use std::collections::BTreeSet;

pub const CATALOGUE: &[(&str, &str)] = &[
    ("table2", "lattice point counts per (p, a0); --long adds the minute-scale cells"),
    ("theorem2-5", "certified congruence list, level 5, a0 in {4,6,8,10}"),
    ("theorem2-7", "certified congruence list, level 7, a0 in {4,6,8}"),
    ("theorem2-11", "certified congruence list, level 11, a0 in {4,6,8,10}"),
    ("theorem2-13", "certified congruence list, level 13, a0 in {4,6}"),
    ("theorem2-17", "certified congruence list, level 17, a0 in {4,6} (--long for a0=6)"),
    ("theorem2-19", "certified congruence list, level 19, a0 in {4,6} (--long for a0=6)"),
    ("corollary-5s", "level-5 dissection congruences U_{5,r} == 0 (mod 5), weight 2"),
    ("theorem-7s", "level-7 dissection congruences, weights 1..3"),
    ("theorem-11s", "level-11 dissection congruences, weights 1..3"),
    ("mixed-13-17-19", "composite-modulus dissection congruences at levels 13/17/19"),
    ("klein-relations", "quadratic generator relations at levels 7, 11, 13"),
    ("dissection-rows", "weight-one decomposition rows for 5 <= p <= 19"),
    ("chimeral-11", "level-11 weight-3 chimeral list"),
];

type Diffs = Vec<String>;

pub fn run_table(id: &str, long: bool) -> Result<Diffs, String> {
    match id {
        "table2" => table2(long),
        "theorem2-5" => theorem2(5, &[4, 6, 8, 10]),
        "theorem2-7" => theorem2(7, &[4, 6, 8]),
        "theorem2-11" => theorem2(11, &[4, 6, 8, 10]),
        "theorem2-13" => theorem2(13, &[4, 6]),
        "theorem2-17" => theorem2(17, if long { &[4, 6] } else { &[4] }),
        "theorem2-19" => theorem2(19, if long { &[4, 6] } else { &[4] }),
        "corollary-5s" => level5_table(),
        "theorem-7s" => level7_table(),
        "theorem-11s" => level11_table(),
        "mixed-13-17-19" => mixed_table(),
        "klein-relations" => klein_relations(),
        "dissection-rows" => dissection_rows(),
        "chimeral-11" => chimeral11(),
        other => Err(format!("unknown table id '{other}'; try --list")),
    }
}

fn table2(long: bool) -> Result<Diffs, String> {
    let mut diffs = Vec::new();
    for &(p, a0, want) in tables::TABLE2.iter() {
        let heavy = want > 20_000;
        if heavy && !long {
            continue;
        }
        if want > 600_000 {
            // Full-scale cells are out of desk-scale reach.
            continue;
        }
        eprintln!("  counting (p={p}, a0={a0})...");
        let got = lattice::enumerate(p, a0).map_err(|e| e.to_string())?.len() as u64;
        if got != want {
            diffs.push(format!("count(p={p}, a0={a0}) = {got}, expected {want}"));
        }
    }
    Ok(diffs)
}

fn theorem2(p: u64, a0s: &[i64]) -> Result<Diffs, String> {
    let mut diffs = Vec::new();
    for &a0 in a0s {
        eprintln!("  mining (p={p}, a0={a0})...");
        let report =
            miner::mine(p, a0, &MinerConfig::for_prime(p)).map_err(|e| e.to_string())?;
        let got: BTreeSet<(Vec<i64>, u32)> =
            report.certified.iter().map(|c| (c.vector.clone(), c.alpha)).collect();
        let want: BTreeSet<(Vec<i64>, u32)> = tables::certified_set(p, a0)
            .ok_or_else(|| format!("no reference list for (p={p}, a0={a0})"))?
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|(v, alpha)| (v.entries().to_vec(), alpha))
            .collect();
        for (v, alpha) in got.difference(&want) {
            diffs.push(format!("(p={p}, a0={a0}): unexpected certificate {v:?} alpha={alpha}"));
        }
        for (v, alpha) in want.difference(&got) {
            diffs.push(format!("(p={p}, a0={a0}): missing certificate {v:?} alpha={alpha}"));
        }
    }
    Ok(diffs)
}

/// Certification window for dissection congruences on Gamma(p): every
/// coefficient index through `k p^2 (p^2 - 1)/24` plus slack.
fn gamma_window(p: u64, k: i64) -> i64 {
    k * (p * p) as i64 * ((p * p) as i64 - 1) / 24 + 8
}

fn search_union(
    p: u64,
    a0s: &[i64],
    m: u64,
    window: i64,
) -> Result<Vec<BTreeSet<Vec<i64>>>, String> {
    let mut rows: Vec<BTreeSet<Vec<i64>>> = vec![BTreeSet::new(); p as usize];
    for &a0 in a0s {
        eprintln!("  scanning (p={p}, a0={a0}) mod {m} through {window} coefficients...");
        let table =
            miner::dissection_congruence_search(p, a0, m, window).map_err(|e| e.to_string())?;
        for (r, vs) in table.into_iter().enumerate() {
            for v in vs {
                rows[r].insert(v.entries().to_vec());
            }
        }
    }
    Ok(rows)
}

fn diff_row(diffs: &mut Diffs, label: &str, got: &BTreeSet<Vec<i64>>, want: &BTreeSet<Vec<i64>>) {
    for v in got.difference(want) {
        diffs.push(format!("{label}: unexpected {v:?}"));
    }
    for v in want.difference(got) {
        diffs.push(format!("{label}: missing {v:?}"));
    }
}

fn sigma_row(p: u64, row: &BTreeSet<Vec<i64>>, steps: u64) -> BTreeSet<Vec<i64>> {
    row.iter()
        .map(|v| {
            let ev = ExponentVector::new(p, v.clone()).expect("shape");
            apply_sigma(&ev, steps).entries().to_vec()
        })
        .collect()
}

fn level5_table() -> Result<Diffs, String> {
    let mut diffs = Vec::new();
    let rows = search_union(5, &[4], 5, gamma_window(5, 2))?;
    for (r, want_tails) in tables::LEVEL5_U5R.iter() {
        let want: BTreeSet<Vec<i64>> = want_tails.iter().map(|t| t.to_vec()).collect();
        diff_row(&mut diffs, &format!("U_5,{r}"), &rows[*r as usize], &want);
    }
    Ok(diffs)
}

fn level7_table() -> Result<Diffs, String> {
    let mut diffs = Vec::new();
    let rows = search_union(7, &[2, 4, 6], 7, gamma_window(7, 3))?;
    let r1: BTreeSet<Vec<i64>> = tables::LEVEL7_R1.iter().map(|t| t.to_vec()).collect();
    let r3: BTreeSet<Vec<i64>> = tables::LEVEL7_R3.iter().map(|t| t.to_vec()).collect();
    diff_row(&mut diffs, "U_7,1", &rows[1], &r1);
    diff_row(&mut diffs, "U_7,3", &rows[3], &r3);
    // The remaining residues are sigma-power images of the two fixed rows.
    diff_row(&mut diffs, "U_7,2", &rows[2], &sigma_row(7, &r1, 1));
    diff_row(&mut diffs, "U_7,4", &rows[4], &sigma_row(7, &r1, 2));
    diff_row(&mut diffs, "U_7,5", &rows[5], &sigma_row(7, &r3, 2));
    diff_row(&mut diffs, "U_7,6", &rows[6], &sigma_row(7, &r3, 1));
    Ok(diffs)
}

fn level11_table() -> Result<Diffs, String> {
    let mut diffs = Vec::new();
    let rows = search_union(11, &[2, 4, 6], 11, gamma_window(11, 3))?;
    let r1: BTreeSet<Vec<i64>> = tables::LEVEL11_R1.iter().map(|t| t.to_vec()).collect();
    let r2: BTreeSet<Vec<i64>> = tables::LEVEL11_R2.iter().map(|t| t.to_vec()).collect();
    diff_row(&mut diffs, "U_11,1", &rows[1], &r1);
    diff_row(&mut diffs, "U_11,2", &rows[2], &r2);
    diff_row(&mut diffs, "U_11,3", &rows[3], &sigma_row(11, &r1, 1));
    diff_row(&mut diffs, "U_11,9", &rows[9], &sigma_row(11, &r1, 2));
    diff_row(&mut diffs, "U_11,5", &rows[5], &sigma_row(11, &r1, 3));
    diff_row(&mut diffs, "U_11,4", &rows[4], &sigma_row(11, &r1, 4));
    diff_row(&mut diffs, "U_11,6", &rows[6], &sigma_row(11, &r2, 1));
    diff_row(&mut diffs, "U_11,7", &rows[7], &sigma_row(11, &r2, 2));
    diff_row(&mut diffs, "U_11,10", &rows[10], &sigma_row(11, &r2, 3));
    diff_row(&mut diffs, "U_11,8", &rows[8], &sigma_row(11, &r2, 4));
    Ok(diffs)
}

fn mixed_table() -> Result<Diffs, String> {
    let mut diffs = Vec::new();
    let mut all = tables::mixed_congruences();
    all.extend(tables::extra_mixed_congruences());
    for (p, vector, residues, m) in all {
        let v = ExponentVector::new(p, vector.clone()).map_err(|e| e.to_string())?;
        let l = qklein::klein::ell(&v).to_integer();
        let window = 200 * p as i64 + l;
        let len = (window - l + 1) as usize;
        let coeffs = qklein::modseries::product_coeffs_mod(&v, len, m);
        for r in residues {
            let mut e = l + (r as i64 - l).rem_euclid(p as i64);
            let mut bad = None;
            while e <= window {
                if coeffs[(e - l) as usize] != 0 {
                    bad = Some(e);
                    break;
                }
                e += p as i64;
            }
            if let Some(e) = bad {
                diffs.push(format!(
                    "U_{p},{r}(f_{vector:?}) has coefficient at q^{e} nonzero mod {m}"
                ));
            }
        }
    }
    Ok(diffs)
}

fn klein_relations() -> Result<Diffs, String> {
    let mut diffs = Vec::new();
    for p in [7u64, 11, 13] {
        for (i, rel) in tables::klein_relations(p).unwrap().iter().enumerate() {
            if !dissect::verify_klein_relation(p, rel).map_err(|e| e.to_string())? {
                diffs.push(format!("level-{p} relation {i} does not vanish"));
            }
        }
    }
    Ok(diffs)
}

fn dissection_rows() -> Result<Diffs, String> {
    let mut diffs = Vec::new();
    for p in [5u64, 7, 11, 13, 17, 19] {
        eprintln!("  decomposing weight-one sources at p={p}...");
        let basis = dissect::gamma_p_basis(p, tables::gamma_basis_order(p))
            .map_err(|e| e.to_string())?;
        for (tail, want_rows) in tables::dissection_rows(p).unwrap() {
            let v = ExponentVector::new(p, tail.clone()).map_err(|e| e.to_string())?;
            let table = dissect::decompose(&v, &basis).map_err(|e| e.to_string())?;
            for (r, want) in want_rows.iter().enumerate() {
                match table.row_i64(r) {
                    Some(got) if got == *want => {}
                    got => diffs.push(format!(
                        "p={p} source {tail:?} residue {r}: got {got:?}, expected {want:?}"
                    )),
                }
            }
        }
    }
    Ok(diffs)
}

fn chimeral11() -> Result<Diffs, String> {
    let mut diffs = Vec::new();
    let report = miner::mine(11, 6, &MinerConfig::for_prime(11)).map_err(|e| e.to_string())?;
    let got: BTreeSet<Vec<i64>> =
        report.chimeral.iter().map(|c| c.vector.clone()).collect();
    let mut want: BTreeSet<Vec<i64>> = BTreeSet::new();
    for seed in tables::chimeral_seeds(11).unwrap() {
        let v = ExponentVector::new(11, seed).map_err(|e| e.to_string())?;
        for w in qklein::orbit::orbit(&v) {
            want.insert(w.entries().to_vec());
        }
    }
    diff_row(&mut diffs, "chimeral level 11", &got, &want);
    Ok(diffs)
}
