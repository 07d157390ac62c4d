//! Catalog of the nonabelian simple groups of order below one million,
//! order formulas, and the divisibility screening used to rule candidate
//! quotients in or out.

use crate::gf::prime_power_split;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

pub const CATALOG_LIMIT: u64 = 1_000_000;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("bound {0} exceeds catalog coverage {CATALOG_LIMIT}")]
    BeyondCoverage(u64),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("order overflow")]
    Overflow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Family {
    Alternating { degree: u32 },
    Psl { n: u32, q: u32 },
    Psu3 { q: u32 },
    Psu4 { q: u32 },
    Suzuki { q: u32 },
    Symplectic4 { q: u32 },
    Mathieu { degree: u32 },
    Janko { index: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimpleGroupRecord {
    pub family: Family,
    pub order: u64,
    pub name: String,
    pub aliases: Vec<String>,
}

fn checked_prod(parts: &[u64]) -> Result<u64, CatalogError> {
    let mut acc: u128 = 1;
    for &p in parts {
        acc = acc.checked_mul(p as u128).ok_or(CatalogError::Overflow)?;
    }
    u64::try_from(acc).map_err(|_| CatalogError::Overflow)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn psl_order(n: u32, q: u64) -> Result<u64, CatalogError> {
    if n < 2 {
        return Err(CatalogError::BadParameter(format!("n = {}", n)));
    }
    let qq = u32::try_from(q).map_err(|_| CatalogError::NotPrimePower(q))?;
    if prime_power_split(qq).is_none() {
        return Err(CatalogError::NotPrimePower(q));
    }
    let mut parts = Vec::new();
    let half = n as u64 * (n as u64 - 1) / 2;
    let mut qpow: u128 = 1;
    for _ in 0..half {
        qpow = qpow.checked_mul(q as u128).ok_or(CatalogError::Overflow)?;
    }
    parts.push(u64::try_from(qpow).map_err(|_| CatalogError::Overflow)?);
    for i in 2..=n as u64 {
        let mut t: u128 = 1;
        for _ in 0..i {
            t = t.checked_mul(q as u128).ok_or(CatalogError::Overflow)?;
        }
        parts.push(u64::try_from(t - 1).map_err(|_| CatalogError::Overflow)?);
    }
    let raw = checked_prod(&parts)?;
    Ok(raw / gcd(n as u64, q - 1))
}

pub fn psu3_order(q: u64) -> Result<u64, CatalogError> {
    let qq = u32::try_from(q).map_err(|_| CatalogError::NotPrimePower(q))?;
    if prime_power_split(qq).is_none() {
        return Err(CatalogError::NotPrimePower(q));
    }
    let raw = checked_prod(&[q * q * q, q * q * q + 1, q * q - 1])?;
    Ok(raw / gcd(3, q + 1))
}

pub fn psu4_order(q: u64) -> Result<u64, CatalogError> {
    let qq = u32::try_from(q).map_err(|_| CatalogError::NotPrimePower(q))?;
    if prime_power_split(qq).is_none() {
        return Err(CatalogError::NotPrimePower(q));
    }
    let q2 = q * q;
    let q3 = q2 * q;
    let q4 = q2 * q2;
    let q6 = q3 * q3;
    let raw = checked_prod(&[q6, q2 - 1, q3 + 1, q4 - 1])?;
    Ok(raw / gcd(4, q + 1))
}

pub fn suzuki_order(q: u64) -> Result<u64, CatalogError> {
    // q = 2^(2k+1), k >= 1
    if q < 8 || !q.is_power_of_two() || q.trailing_zeros().is_multiple_of(2) {
        return Err(CatalogError::BadParameter(format!("Sz({})", q)));
    }
    checked_prod(&[q * q, q * q + 1, q - 1])
}

pub fn symplectic4_order(q: u64) -> Result<u64, CatalogError> {
    let qq = u32::try_from(q).map_err(|_| CatalogError::NotPrimePower(q))?;
    if prime_power_split(qq).is_none() {
        return Err(CatalogError::NotPrimePower(q));
    }
    let q2 = q * q;
    let q4 = q2 * q2;
    let raw = checked_prod(&[q4, q2 - 1, q4 - 1])?;
    Ok(raw / gcd(2, q - 1))
}

pub fn alternating_order(degree: u32) -> Result<u64, CatalogError> {
    if degree < 5 {
        return Err(CatalogError::BadParameter(format!("A{}", degree)));
    }
    let mut acc: u128 = 1;
    for i in 2..=degree as u128 {
        acc = acc.checked_mul(i).ok_or(CatalogError::Overflow)?;
    }
    u64::try_from(acc / 2).map_err(|_| CatalogError::Overflow)
}

/// Order of (Z_n)^r semidirect GL_r(Z_n) for prime n.
pub fn affine_order(r: u32, n: u64) -> Result<u64, CatalogError> {
    if n < 2 || (2..n).any(|d| n.is_multiple_of(d)) {
        return Err(CatalogError::NotPrime(n));
    }
    if r < 1 {
        return Err(CatalogError::BadParameter("r = 0".into()));
    }
    let mut nr: u128 = 1;
    for _ in 0..r {
        nr = nr.checked_mul(n as u128).ok_or(CatalogError::Overflow)?;
    }
    let mut acc = nr;
    let mut ni: u128 = 1;
    for _ in 0..r {
        acc = acc
            .checked_mul(nr - ni)
            .ok_or(CatalogError::Overflow)?;
        ni *= n as u128;
    }
    u64::try_from(acc).map_err(|_| CatalogError::Overflow)
}

fn family_order(f: Family) -> u64 {
    match f {
        Family::Alternating { degree } => alternating_order(degree).unwrap(),
        Family::Psl { n, q } => psl_order(n, q as u64).unwrap(),
        Family::Psu3 { q } => psu3_order(q as u64).unwrap(),
        Family::Psu4 { q } => psu4_order(q as u64).unwrap(),
        Family::Suzuki { q } => suzuki_order(q as u64).unwrap(),
        Family::Symplectic4 { q } => symplectic4_order(q as u64).unwrap(),
        Family::Mathieu { degree } => match degree {
            11 => 7_920,
            12 => 95_040,
            22 => 443_520,
            _ => unreachable!("M{} not in coverage", degree),
        },
        Family::Janko { index } => match index {
            1 => 175_560,
            2 => 604_800,
            _ => unreachable!("J{} not in coverage", index),
        },
    }
}

fn family_name(f: Family) -> String {
    match f {
        Family::Alternating { degree } => format!("A{}", degree),
        Family::Psl { n, q } => format!("L{}({})", n, q),
        Family::Psu3 { q } => format!("U3({})", q),
        Family::Psu4 { q } => format!("U4({})", q),
        Family::Suzuki { q } => format!("Sz({})", q),
        Family::Symplectic4 { q } => format!("S4({})", q),
        Family::Mathieu { degree } => format!("M{}", degree),
        Family::Janko { index } => format!("J{}", index),
    }
}

fn long_alias(f: Family) -> Option<String> {
    match f {
        Family::Psl { n, q } => Some(format!("PSL({},{})", n, q)),
        Family::Psu3 { q } => Some(format!("PSU(3,{})", q)),
        Family::Psu4 { q } => Some(format!("PSU(4,{})", q)),
        Family::Symplectic4 { q } => Some(format!("PSp(4,{})", q)),
        _ => None,
    }
}

// Exceptional isomorphisms inside the coverage: each right-hand family is
// the same group as the left-hand canonical record and becomes an alias.
const MERGED: &[(Family, Family)] = &[
    (Family::Alternating { degree: 5 }, Family::Psl { n: 2, q: 4 }),
    (Family::Alternating { degree: 5 }, Family::Psl { n: 2, q: 5 }),
    (Family::Alternating { degree: 6 }, Family::Psl { n: 2, q: 9 }),
    (Family::Psl { n: 2, q: 7 }, Family::Psl { n: 3, q: 2 }),
    (Family::Alternating { degree: 8 }, Family::Psl { n: 4, q: 2 }),
    (Family::Psu4 { q: 2 }, Family::Symplectic4 { q: 3 }),
];

fn build_catalog() -> Vec<SimpleGroupRecord> {
    let mut families: Vec<Family> = Vec::new();
    for degree in 5.. {
        if alternating_order(degree).map_or(true, |o| o >= CATALOG_LIMIT) {
            break;
        }
        families.push(Family::Alternating { degree });
    }
    for q in 4u32.. {
        if prime_power_split(q).is_none() {
            continue;
        }
        match psl_order(2, q as u64) {
            Ok(o) if o < CATALOG_LIMIT => families.push(Family::Psl { n: 2, q }),
            _ => break,
        }
    }
    for n in 3u32..6 {
        for q in 2u32.. {
            if prime_power_split(q).is_none() {
                continue;
            }
            match psl_order(n, q as u64) {
                Ok(o) if o < CATALOG_LIMIT => families.push(Family::Psl { n, q }),
                _ => break,
            }
        }
    }
    for q in 3u32.. {
        if prime_power_split(q).is_none() {
            continue;
        }
        match psu3_order(q as u64) {
            Ok(o) if o < CATALOG_LIMIT => families.push(Family::Psu3 { q }),
            _ => break,
        }
    }
    for q in 2u32.. {
        if prime_power_split(q).is_none() {
            continue;
        }
        match psu4_order(q as u64) {
            Ok(o) if o < CATALOG_LIMIT => families.push(Family::Psu4 { q }),
            _ => break,
        }
    }
    if suzuki_order(8).unwrap() < CATALOG_LIMIT {
        families.push(Family::Suzuki { q: 8 });
    }
    for q in 3u32.. {
        if prime_power_split(q).is_none() {
            continue;
        }
        match symplectic4_order(q as u64) {
            Ok(o) if o < CATALOG_LIMIT => families.push(Family::Symplectic4 { q }),
            _ => break,
        }
    }
    for degree in [11, 12, 22] {
        families.push(Family::Mathieu { degree });
    }
    for index in [1, 2] {
        families.push(Family::Janko { index });
    }

    let mut records: BTreeMap<Family, SimpleGroupRecord> = BTreeMap::new();
    for f in families {
        if MERGED.iter().any(|(_, dup)| *dup == f) {
            continue;
        }
        let mut aliases = Vec::new();
        if let Some(a) = long_alias(f) {
            aliases.push(a);
        }
        for (canon, dup) in MERGED {
            if *canon == f {
                aliases.push(family_name(*dup));
                if let Some(a) = long_alias(*dup) {
                    aliases.push(a);
                }
            }
        }
        records.insert(
            f,
            SimpleGroupRecord {
                family: f,
                order: family_order(f),
                name: family_name(f),
                aliases,
            },
        );
    }
    let mut out: Vec<SimpleGroupRecord> = records.into_values().collect();
    out.sort_by(|a, b| a.order.cmp(&b.order).then_with(|| a.name.cmp(&b.name)));
    out
}

pub fn simple_groups_below(bound: u64) -> Result<Vec<SimpleGroupRecord>, CatalogError> {
    if bound > CATALOG_LIMIT {
        return Err(CatalogError::BeyondCoverage(bound));
    }
    Ok(build_catalog()
        .into_iter()
        .filter(|r| r.order < bound)
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub name: String,
    pub order: u64,
    pub stage1_divides: bool,
    pub stage2_divides: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScreeningReport {
    pub rank: u32,
    pub bound: u64,
    pub sweyl_order: u64,
    pub sweyl_mod_center_order: Option<u64>,
    pub verdicts: Vec<Verdict>,
    pub survivors: Vec<String>,
}

impl fmt::Display for ScreeningReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "screening rank {} against simple groups of order < {}",
            self.rank, self.bound
        )?;
        match self.sweyl_mod_center_order {
            Some(m) => writeln!(f, "|SW| = {}, |SW/center| = {}", self.sweyl_order, m)?,
            None => writeln!(f, "|SW| = {}", self.sweyl_order)?,
        }
        writeln!(f, "{:<10} {:>8}  stage1  stage2", "group", "order")?;
        for v in &self.verdicts {
            let s2 = match v.stage2_divides {
                None => "-",
                Some(true) => "pass",
                Some(false) => "fail",
            };
            writeln!(
                f,
                "{:<10} {:>8}  {:<6}  {}",
                v.name,
                v.order,
                if v.stage1_divides { "pass" } else { "fail" },
                s2
            )?;
        }
        if self.survivors.is_empty() {
            writeln!(f, "survivors: none")
        } else {
            writeln!(f, "survivors: {}", self.survivors.join(", "))
        }
    }
}

/// Divisibility screen for rank n: a simple group below |PSL_n(Z_2)| can
/// receive a nontrivial map of the signed symmetry subgroup only if |SW_n|
/// divides its order, or (for even n, where the kernel can be the central
/// involution) |SW_n / center| divides it.
pub fn run_screening(n: u32) -> Result<ScreeningReport, CatalogError> {
    if !(3..=4).contains(&n) {
        return Err(CatalogError::BadParameter(format!("rank {}", n)));
    }
    let bound = psl_order(n, 2)?;
    let fact: u64 = (1..=n as u64).product();
    let sweyl_order = (1u64 << (n - 1)) * fact;
    let sweyl_mod_center_order = if n.is_multiple_of(2) {
        Some(sweyl_order / 2)
    } else {
        None
    };
    let mut verdicts = Vec::new();
    let mut survivors = Vec::new();
    for rec in simple_groups_below(bound)? {
        let stage1 = rec.order % sweyl_order == 0;
        let stage2 = if stage1 {
            None
        } else {
            sweyl_mod_center_order.map(|m| rec.order % m == 0)
        };
        if stage1 || stage2 == Some(true) {
            survivors.push(rec.name.clone());
        }
        verdicts.push(Verdict {
            name: rec.name,
            order: rec.order,
            stage1_divides: stage1,
            stage2_divides: stage2,
        });
    }
    Ok(ScreeningReport {
        rank: n,
        bound,
        sweyl_order,
        sweyl_mod_center_order,
        verdicts,
        survivors,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Confidence {
    Unique,
    SpectrumResolved,
    OrderMatchOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Identification {
    pub name: String,
    pub confidence: Confidence,
}

/// Candidate identifications by order. Simple groups come from the catalog;
/// an ambiguous order is resolved by the element-order spectrum when one is
/// supplied (degree-8 alternating iff an element of order 15 exists).
/// Non-simple orders are matched against the affine groups
/// (Z_p)^r semidirect GL_r(Z_p).
pub fn identify_by_order(
    order: u64,
    simple: bool,
    spectrum: Option<&std::collections::BTreeSet<u64>>,
) -> Result<Vec<Identification>, CatalogError> {
    if simple {
        if order >= CATALOG_LIMIT {
            return Err(CatalogError::BeyondCoverage(order));
        }
        let matches: Vec<SimpleGroupRecord> = build_catalog()
            .into_iter()
            .filter(|r| r.order == order)
            .collect();
        if matches.len() <= 1 {
            return Ok(matches
                .into_iter()
                .map(|r| Identification {
                    name: r.name,
                    confidence: Confidence::Unique,
                })
                .collect());
        }
        if let Some(spec) = spectrum {
            let pick = if spec.contains(&15) { "A8" } else { "L3(4)" };
            if matches.iter().any(|r| r.name == pick) {
                return Ok(vec![Identification {
                    name: pick.into(),
                    confidence: Confidence::SpectrumResolved,
                }]);
            }
        }
        return Ok(matches
            .into_iter()
            .map(|r| Identification {
                name: r.name,
                confidence: Confidence::OrderMatchOnly,
            })
            .collect());
    }
    let mut out = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13] {
        for r in 1..=8 {
            match affine_order(r, p) {
                Ok(o) if o == order => out.push(Identification {
                    name: format!("(Z{})^{} : GL{}(Z{})", p, r, r, p),
                    confidence: Confidence::OrderMatchOnly,
                }),
                Ok(o) if o > order => break,
                _ => {}
            }
        }
    }
    Ok(out)
}
