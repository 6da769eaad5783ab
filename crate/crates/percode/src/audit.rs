//! Orbit-stabilizer double counting.
//!
//! The number of labeled codes in a family can be computed two independent
//! ways: summing `n! * 2^n / |Aut(C)|` over the classified representatives,
//! and summing `n! * 2^n * E(Q) / |Aut(Q)|` over the input designs divided
//! by the code size (each labeled code is counted once per codeword). The
//! two totals agreeing is the audit; all arithmetic is exact, and any
//! non-divisibility aborts with the offending representative named, since
//! that localizes a corrupted group order.

use std::fmt;

use thiserror::Error;

use crate::pipeline::{family_tag, Family, RunReport};

#[derive(Debug, Error)]
pub enum AuditError {
    #[error(
        "representative {index}: group order {order} does not divide the wreath order {wreath}"
    )]
    BadGroupOrder { index: usize, order: u128, wreath: u128 },
    #[error("input {index}: design group order {order} does not divide the wreath order {wreath}")]
    BadDesignOrder { index: usize, order: u128, wreath: u128 },
    #[error("design-side total {total} is not divisible by the code size {size}")]
    BadFinalDivision { total: u128, size: u128 },
    #[error("arithmetic overflow computing the wreath order for n = {0}")]
    Overflow(usize),
}

/// `n! * 2^n`, the order of the wreath product group acting on codes of
/// length `n`.
pub fn wreath_order(n: usize) -> Result<u128, AuditError> {
    let mut acc: u128 = 1;
    for k in 1..=n as u128 {
        acc = acc.checked_mul(k).ok_or(AuditError::Overflow(n))?;
    }
    acc.checked_mul(1u128 << n).ok_or(AuditError::Overflow(n))
}

/// Total number of labeled codes, from the classified representatives:
/// `sum over C of n! * 2^n / |Aut(C)|`.
pub fn count_by_codes(aut_orders: &[u128], n: usize) -> Result<u128, AuditError> {
    let wreath = wreath_order(n)?;
    let mut total: u128 = 0;
    for (index, &order) in aut_orders.iter().enumerate() {
        if order == 0 || wreath % order != 0 {
            return Err(AuditError::BadGroupOrder { index, order, wreath });
        }
        total += wreath / order;
    }
    Ok(total)
}

/// Total number of labeled extended codes, from the input designs:
/// `(1 / M) * sum over Q of n! * 2^n * E(Q) / |Aut(Q)|` where `M` is the
/// code size (each labeled code is counted once per codeword).
pub fn count_by_designs(
    designs: &[(u128, u64)],
    n: usize,
    code_size: u128,
) -> Result<u128, AuditError> {
    let wreath = wreath_order(n)?;
    let mut total: u128 = 0;
    for (index, &(aut_q, e_q)) in designs.iter().enumerate() {
        if aut_q == 0 || wreath % aut_q != 0 {
            return Err(AuditError::BadDesignOrder { index, order: aut_q, wreath });
        }
        total += (wreath / aut_q) * e_q as u128;
    }
    if !total.is_multiple_of(code_size) {
        return Err(AuditError::BadFinalDivision { total, size: code_size });
    }
    Ok(total / code_size)
}

/// Exact labeled totals for one family, counted both ways where possible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditTotals {
    pub family: Family,
    pub tag: String,
    pub by_codes: u128,
    /// Only the extended family admits the design-side count.
    pub by_designs: Option<u128>,
}

impl AuditTotals {
    pub fn passes(&self) -> bool {
        self.by_designs.is_none_or(|d| d == self.by_codes)
    }
}

/// One named consistency identity.
#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Full audit report of a classification run.
#[derive(Clone, Debug)]
pub struct AuditReport {
    pub totals: Vec<AuditTotals>,
    pub identities: Vec<IdentityCheck>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.totals.iter().all(|t| t.passes()) && self.identities.iter().all(|i| i.passed)
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.totals {
            match t.by_designs {
                Some(d) => writeln!(
                    f,
                    "{}\tby_codes {}\tby_designs {}\t{}",
                    t.tag,
                    t.by_codes,
                    d,
                    if t.passes() { "PASS" } else { "FAIL" }
                )?,
                None => writeln!(f, "{}\tby_codes {}", t.tag, t.by_codes)?,
            }
        }
        for i in &self.identities {
            writeln!(f, "{}\t{}\t{}", i.name, i.detail, if i.passed { "PASS" } else { "FAIL" })?;
        }
        Ok(())
    }
}

/// Group orders of a whole classification, the minimal input the audit
/// needs (a [`RunReport`] reduces to this, and so do the written output
/// files).
pub struct AuditInput {
    pub v: usize,
    /// `(|Aut(Q)|, E(Q))` per catalog input, augmentable or not.
    pub designs: Vec<(u128, u64)>,
    pub extended: Vec<u128>,
    pub perfect: Vec<u128>,
    pub shortened: Vec<u128>,
    pub halved: Vec<u128>,
}

impl AuditInput {
    pub fn from_report(report: &RunReport) -> Self {
        AuditInput {
            v: report.v,
            designs: report.records.iter().map(|r| (r.aut_q_order, r.extension_count)).collect(),
            extended: report.aut_orders(Family::Extended),
            perfect: report.aut_orders(Family::Perfect),
            shortened: report.aut_orders(Family::Shortened),
            halved: report.aut_orders(Family::Halved),
        }
    }

    fn orders(&self, family: Family) -> &[u128] {
        match family {
            Family::Extended => &self.extended,
            Family::Perfect => &self.perfect,
            Family::Shortened => &self.shortened,
            Family::Halved => &self.halved,
        }
    }
}

/// Audit a run: count every family by representatives, the extended family
/// additionally by designs, and check the structural identities (twice as
/// many labeled extended codes as perfect ones, equally many perfect and
/// shortened, equally many perfect and halved classes). Identity failures
/// are reported, not thrown; hard arithmetic violations are errors.
///
/// The design-side comparison only balances when the catalog was complete
/// (one representative per isomorphism class of designs); on a partial
/// catalog it legitimately fails.
pub fn audit(report: &RunReport) -> Result<AuditReport, AuditError> {
    audit_orders(&AuditInput::from_report(report))
}

pub fn audit_orders(input: &AuditInput) -> Result<AuditReport, AuditError> {
    let v = input.v;
    // code size M = 2^(v-1) / v, v a power of two
    let code_size = (1u128 << (v - 1)) / v as u128;

    let mut totals = Vec::new();
    let mut labeled = std::collections::HashMap::new();
    for family in Family::ALL {
        let n = match family {
            Family::Extended => v,
            Family::Perfect | Family::Halved => v - 1,
            Family::Shortened => v - 2,
        };
        let by_codes = count_by_codes(input.orders(family), n)?;
        let by_designs = match family {
            Family::Extended => Some(count_by_designs(&input.designs, v, code_size)?),
            _ => None,
        };
        labeled.insert(family_tag(v, family), by_codes);
        totals.push(AuditTotals { family, tag: family_tag(v, family), by_codes, by_designs });
    }

    let ext = labeled[&family_tag(v, Family::Extended)];
    let perf = labeled[&family_tag(v, Family::Perfect)];
    let short = labeled[&family_tag(v, Family::Shortened)];
    let identities = vec![
        IdentityCheck {
            name: "extended_is_twice_perfect".into(),
            passed: ext == 2 * perf,
            detail: format!("{ext} vs 2 * {perf}"),
        },
        IdentityCheck {
            name: "perfect_equals_shortened".into(),
            passed: perf == short,
            detail: format!("{perf} vs {short}"),
        },
        IdentityCheck {
            name: "halved_classes_equal_perfect_classes".into(),
            passed: input.halved.len() == input.perfect.len(),
            detail: format!("{} vs {}", input.halved.len(), input.perfect.len()),
        },
    ];

    Ok(AuditReport { totals, identities })
}
