//! Strata of periodic Reeb orbits and the `E¹` page they generate.
//!
//! For a Boothby–Wang orbibundle with `k = 1`, the `m`-th multiple of the
//! exceptional period gives an exceptional stratum when `N ∤ m` (quotient
//! `H`, dimension `2n − 4`) and a principal stratum when `m = m'N`
//! (quotient `M`, dimension `2n − 2`). A stratum of index `μ` and quotient
//! dimension `d` contributes its Betti numbers in column `p = μ − d/2`.
//! Betti lists are supplied by the caller; only their alternating sums
//! affect the mean Euler characteristic, so the `q`-grading is illustrative.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{big_int_json, HalfInteger, Rational};
use crate::rs_index::{
    bw_exceptional_model, bw_principal_model, exceptional_index_formula, rs_index_with, Tolerances,
};

use super::formulas::{is_bad_orbit, BWData};
use super::graded::{GradedDims, Tail};
use super::MecError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StratumKind {
    Exceptional,
    Principal,
}

/// One Morse–Bott family `N_T` of periodic orbits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub label: String,
    pub kind: StratumKind,
    /// Multiple `m` of the exceptional period.
    pub cover: u64,
    pub index: HalfInteger,
    pub dim_quotient: i64,
    pub betti: Vec<u64>,
    #[serde(with = "big_int_json")]
    pub chi_s1: BigInt,
}

impl Stratum {
    pub fn new(
        label: impl Into<String>,
        kind: StratumKind,
        cover: u64,
        index: HalfInteger,
        dim_quotient: i64,
        betti: Vec<u64>,
    ) -> Self {
        let chi_s1 = alternating_sum(&betti);
        Stratum {
            label: label.into(),
            kind,
            cover,
            index,
            dim_quotient,
            betti,
            chi_s1,
        }
    }

    /// Column `p = μ − ½ dim` of the stratum in the `E¹` page.
    pub fn column(&self) -> Result<i64, MecError> {
        let twice = self.index.twice_value() - BigInt::from(self.dim_quotient);
        let p = HalfInteger::from_twice(twice);
        p.to_i64().ok_or_else(|| MecError::NonIntegerDegree {
            label: self.label.clone(),
        })
    }
}

fn alternating_sum(betti: &[u64]) -> BigInt {
    betti
        .iter()
        .enumerate()
        .map(|(q, &b)| {
            if q % 2 == 0 {
                BigInt::from(b)
            } else {
                -BigInt::from(b)
            }
        })
        .sum()
}

/// Entries `E¹_{pq}` together with the strata that produced them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct E1Page {
    /// Smallest and largest total degree `p + q` present.
    pub window: (i64, i64),
    /// Serialized as a list of `{p, q, dim}` rows.
    #[serde(with = "entry_rows")]
    pub entries: BTreeMap<(i64, i64), u64>,
    pub strata: Vec<Stratum>,
}

mod entry_rows {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Row {
        p: i64,
        q: i64,
        dim: u64,
    }

    pub fn serialize<S: Serializer>(
        entries: &BTreeMap<(i64, i64), u64>,
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        let rows: Vec<Row> = entries
            .iter()
            .map(|(&(p, q), &dim)| Row { p, q, dim })
            .collect();
        rows.serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<BTreeMap<(i64, i64), u64>, D::Error> {
        let rows = Vec::<Row>::deserialize(deserializer)?;
        Ok(rows.into_iter().map(|r| ((r.p, r.q), r.dim)).collect())
    }
}

/// Grid size for an oracle path with about `crossings` interior crossings.
fn oracle_samples(crossings: u64) -> usize {
    64.max(16 * (crossings as usize + 1))
}

/// Index of the `m`-th exceptional cover from the closed form, checked
/// against the crossing-form computation on the model path.
fn exceptional_index(n: u64, c: i64, big_n: u64, m: u64) -> Result<HalfInteger, MecError> {
    let formula = exceptional_index_formula(c, big_n as i64, m as i64);
    let crossings = (c - 1).unsigned_abs() * m + m / big_n;
    let path = bw_exceptional_model(n, c, big_n, m, oracle_samples(crossings))?;
    let oracle = rs_index_with(&path, &Tolerances::default())?.index;
    if oracle != HalfInteger::from_integer(formula) {
        return Err(MecError::OracleMismatch {
            cover: m,
            formula,
            oracle: oracle.to_string(),
        });
    }
    Ok(oracle)
}

fn principal_index(d: &BWData) -> Result<HalfInteger, MecError> {
    let mu_p = d.mu_p();
    let crossings = (d.c - 1).unsigned_abs() * d.big_n + 1;
    let path = bw_principal_model(d.n, d.c, 1, d.big_n, oracle_samples(crossings))?;
    let oracle = rs_index_with(&path, &Tolerances::default())?.index;
    if oracle != HalfInteger::from_integer(mu_p.clone()) {
        return Err(MecError::OracleMismatch {
            cover: d.big_n,
            formula: mu_p.to_i64().unwrap_or(i64::MAX),
            oracle: oracle.to_string(),
        });
    }
    Ok(oracle)
}

/// Strata for covers `m = 1 … periods·N` of a `k = 1` orbibundle.
///
/// Exceptional indices `2(c − 1)m + 2⌊m/N⌋ + 1` and the principal index
/// `μ_P` are each recomputed from the model paths and must agree.
pub fn build_e1_strata_bw(
    d: &BWData,
    betti_h: &[u64],
    betti_m: &[u64],
    periods: u64,
) -> Result<Vec<Stratum>, MecError> {
    if d.k != 1 {
        return Err(MecError::UnsupportedK { k: d.k });
    }
    if periods == 0 {
        return Err(MecError::InvalidParameter(
            "periods must be at least 1".into(),
        ));
    }
    for (name, betti, chi) in [("H", betti_h, &d.chi_h), ("M", betti_m, &d.chi_m)] {
        let sum = alternating_sum(betti);
        if &sum != chi {
            return Err(MecError::BettiMismatch {
                space: name.to_string(),
                expected: chi.to_string(),
                found: sum.to_string(),
            });
        }
    }
    let n = d.n as i64;
    let mu_p = principal_index(d)?;
    let mut strata = Vec::new();
    for m in 1..=periods * d.big_n {
        if m % d.big_n != 0 {
            strata.push(Stratum::new(
                format!("E{m}"),
                StratumKind::Exceptional,
                m,
                exceptional_index(d.n, d.c, d.big_n, m)?,
                2 * n - 4,
                betti_h.to_vec(),
            ));
        } else {
            let cover = m / d.big_n;
            strata.push(Stratum::new(
                format!("P{cover}"),
                StratumKind::Principal,
                m,
                HalfInteger::from_twice(mu_p.twice_value() * BigInt::from(cover)),
                2 * n - 2,
                betti_m.to_vec(),
            ));
        }
    }
    Ok(strata)
}

/// Places each stratum's Betti numbers at `(μ − ½dim, q)`.
pub fn e1_page(strata: &[Stratum]) -> Result<E1Page, MecError> {
    let mut entries = BTreeMap::new();
    let (mut lo, mut hi) = (i64::MAX, i64::MIN);
    for s in strata {
        let p = s.column()?;
        for (q, &b) in s.betti.iter().enumerate() {
            let q = q as i64;
            if b != 0 {
                *entries.entry((p, q)).or_insert(0) += b;
            }
            lo = lo.min(p + q);
            hi = hi.max(p + q);
        }
    }
    if strata.is_empty() || lo > hi {
        (lo, hi) = (0, 0);
    }
    Ok(E1Page {
        window: (lo, hi),
        entries,
        strata: strata.to_vec(),
    })
}

/// Strata of the first period: everything up to and including the first
/// principal stratum.
fn first_period(page: &E1Page) -> Result<&[Stratum], MecError> {
    let end = page
        .strata
        .iter()
        .position(|s| s.kind == StratumKind::Principal)
        .ok_or(MecError::IncompletePeriod)?;
    Ok(&page.strata[..=end])
}

/// `Σ (−1)^{p+q} E¹_{pq}` over one period divided by `|μ_P|`.
pub fn chi_m_from_e1(page: &E1Page, mu_p: &BigInt) -> Result<Rational, MecError> {
    if mu_p.is_zero() {
        return Err(MecError::ZeroDenominator);
    }
    let mut signed = BigInt::zero();
    for s in first_period(page)? {
        let p = s.column()?;
        let block = if p.rem_euclid(2) == 0 {
            s.chi_s1.clone()
        } else {
            -s.chi_s1.clone()
        };
        signed += block;
    }
    Ok(Rational::new(signed, mu_p.clone().magnitude().clone()))
}

/// Checks that the strata repeat with degree shift `μ_P`: every later
/// period has the same Betti data in columns moved by `μ_P`.
pub fn check_periodicity(page: &E1Page, mu_p: &BigInt) -> Result<(), MecError> {
    let period = first_period(page)?;
    let len = period.len();
    let shift = mu_p.to_i64().ok_or(MecError::ZeroDenominator)?;
    for (i, s) in page.strata.iter().enumerate().skip(len) {
        let base = &period[i % len];
        let expected = base.column()? + shift * (i / len) as i64;
        if s.column()? != expected || s.betti != base.betti {
            return Err(MecError::NotPeriodic {
                label: s.label.clone(),
            });
        }
    }
    Ok(())
}

/// Total-degree dimensions generated by repeating the first period of the
/// page with shift `μ_P` forever. Requires `μ_P > 0` and even.
pub fn graded_from_e1(page: &E1Page, mu_p: &BigInt) -> Result<GradedDims, MecError> {
    let period = mu_p
        .to_i64()
        .filter(|&v| v > 0 && v % 2 == 0)
        .ok_or_else(|| MecError::InvalidParameter(format!("need positive even μ_P, got {mu_p}")))?;
    let mut block: BTreeMap<i64, u64> = BTreeMap::new();
    for s in first_period(page)? {
        let p = s.column()?;
        for (q, &b) in s.betti.iter().enumerate() {
            *block.entry(p + q as i64).or_insert(0) += b;
        }
    }
    let (&lo, _) = block.first_key_value().ok_or(MecError::IncompletePeriod)?;
    let (&hi, _) = block.last_key_value().ok_or(MecError::IncompletePeriod)?;
    let dim_at = |i: i64| -> u64 {
        let mut total = 0;
        let mut d = i;
        while d >= lo {
            total += block.get(&d).copied().unwrap_or(0);
            d -= period;
        }
        total
    };
    let finite_part = (lo..hi)
        .map(|i| (i, dim_at(i)))
        .filter(|(_, v)| *v != 0)
        .collect();
    let pattern = (hi..hi + period).map(dim_at).collect();
    GradedDims::new(
        finite_part,
        Some(Tail {
            start_degree: hi,
            period: period as usize,
            pattern,
        }),
    )
}

/// Result of the bad-orbit test for one stratum against the simple stratum it covers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadOrbitCheck {
    pub stratum: String,
    pub simple: String,
    pub ratio: u64,
    pub bad: bool,
}

/// Every pair `(N_T, N_{T/e})` among the strata with `e` even.
pub fn bad_orbit_pairs(strata: &[Stratum]) -> Result<Vec<BadOrbitCheck>, MecError> {
    let mut out = Vec::new();
    for s in strata {
        for e in (2..=s.cover).step_by(2) {
            if s.cover % e != 0 {
                continue;
            }
            if let Some(h) = strata.iter().find(|h| h.cover == s.cover / e) {
                let bad = is_bad_orbit(&s.index, s.dim_quotient, &h.index, h.dim_quotient)?;
                out.push(BadOrbitCheck {
                    stratum: s.label.clone(),
                    simple: h.label.clone(),
                    ratio: e,
                    bad,
                });
            }
        }
    }
    Ok(out)
}

impl E1Page {
    /// `p,q,dim` rows, sorted by `(p, q)`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,q,dim\n");
        for ((p, q), d) in &self.entries {
            let _ = writeln!(out, "{p},{q},{d}");
        }
        out
    }

    /// Aligned table with one column per `p` and one row per `q`, highest
    /// `q` first. Empty cells are shown as `.`.
    pub fn to_table(&self) -> String {
        let ps: Vec<i64> = {
            let mut v: Vec<i64> = self.entries.keys().map(|k| k.0).collect();
            v.dedup();
            v
        };
        let q_max = self.entries.keys().map(|k| k.1).max().unwrap_or(0);
        let width = self
            .entries
            .values()
            .map(|d| d.to_string().len())
            .chain(ps.iter().map(|p| p.to_string().len()))
            .max()
            .unwrap_or(1);
        let mut out = String::new();
        for q in (0..=q_max).rev() {
            let _ = write!(out, "q={q:<3}|");
            for p in &ps {
                let cell = self
                    .entries
                    .get(&(*p, q))
                    .map(|d| d.to_string())
                    .unwrap_or_else(|| ".".into());
                let _ = write!(out, " {cell:>width$}");
            }
            out.push('\n');
        }
        let _ = write!(out, "{:-<6}", "");
        out.push_str(&"-".repeat(ps.len() * (width + 1)));
        out.push('\n');
        let _ = write!(out, "p    |");
        for p in &ps {
            let _ = write!(out, " {p:>width$}");
        }
        out.push('\n');
        out
    }
}
