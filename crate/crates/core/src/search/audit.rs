use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::odd::generator_table;
use super::seeds::{build_seeds, chi_alpha, sigma_pp_parts, AlphaSeed, Generator};
use crate::classifier::{classify_exact, Order};
use crate::error::Result;
use crate::exact_arith::{factorize, sigma_k_exact, Factorization};
use crate::hyper_arith::{rounded_modulus, sigma_general, Precision, Quaternion, RoundMode};

/// Absolute tolerance for printed floating cells.
pub const FLOAT_TOLERANCE: f64 = 1e-3;

/// Bound the seed tables were built for.
const SEED_BOUND: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditStatus {
    Verified,
    Mismatch,
}

impl fmt::Display for AuditStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AuditStatus::Verified => "verified",
            AuditStatus::Mismatch => "mismatch",
        })
    }
}

/// One printed row next to its recomputation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditRow {
    pub table_id: String,
    pub row: String,
    pub claimed: BTreeMap<String, String>,
    pub computed: BTreeMap<String, String>,
    pub status: AuditStatus,
    /// Empty when verified; otherwise one `key: claimed X, computed Y` clause per cell.
    pub discrepancy: String,
}

struct RowBuilder {
    table_id: &'static str,
    row: String,
    claimed: BTreeMap<String, String>,
    computed: BTreeMap<String, String>,
    diffs: Vec<String>,
}

impl RowBuilder {
    fn new(table_id: &'static str, row: impl ToString) -> Self {
        Self {
            table_id,
            row: row.to_string(),
            claimed: BTreeMap::new(),
            computed: BTreeMap::new(),
            diffs: Vec::new(),
        }
    }

    fn record(&mut self, key: &str, claimed: String, computed: String, ok: bool) {
        if !ok {
            self.diffs.push(format!("{key}: claimed {claimed}, computed {computed}"));
        }
        self.claimed.insert(key.to_string(), claimed);
        self.computed.insert(key.to_string(), computed);
    }

    fn exact(&mut self, key: &str, claimed: impl ToString, computed: impl ToString) {
        let (c, v) = (claimed.to_string(), computed.to_string());
        let ok = c == v;
        self.record(key, c, v, ok);
    }

    fn approx(&mut self, key: &str, claimed: &str, computed: f64) {
        let ok = claimed
            .parse::<f64>()
            .is_ok_and(|c| (c - computed).abs() <= FLOAT_TOLERANCE);
        self.record(key, claimed.to_string(), format!("{computed:.5}"), ok);
    }

    /// Every claimed item must appear among the computed ones.
    fn subset(&mut self, key: &str, claimed: &[&str], computed: &[String]) {
        let ok = claimed.iter().all(|c| computed.iter().any(|v| v == c));
        self.record(key, claimed.join(","), computed.join(","), ok);
    }

    fn finish(self) -> AuditRow {
        let status = if self.diffs.is_empty() {
            AuditStatus::Verified
        } else {
            AuditStatus::Mismatch
        };
        AuditRow {
            table_id: self.table_id.to_string(),
            row: self.row,
            claimed: self.claimed,
            computed: self.computed,
            status,
            discrepancy: self.diffs.join("; "),
        }
    }
}

/// `n, τ, σ₁, σ₂, σ_½, Re σ_i, Im σ_i, ⌊|σ_½|⌋, ⌊|σ_i|⌋` as printed.
const TABLE_1: [(u64, u64, u64, u64, &str, &str, &str, u64, u64); 17] = [
    (1, 1, 1, 1, "1", "1", "0", 1, 1),
    (2, 2, 3, 5, "2.4142", "1.7692", "0.6390", 2, 1),
    (3, 2, 4, 10, "2.7321", "1.4548", "0.8906", 2, 1),
    (4, 3, 7, 21, "4.4142", "1.9527", "1.6220", 4, 2),
    (5, 2, 6, 26, "3.2361", "0.9614", "0.9993", 3, 1),
    (6, 4, 12, 50, "6.5959", "2.0049", "2.5052", 6, 3),
    (7, 2, 8, 50, "3.6458", "0.6336", "0.9305", 3, 1),
    (8, 4, 15, 85, "7.2426", "1.466", "2.4954", 7, 2),
    (9, 3, 13, 91, "5.7321", "0.8686", "1.7007", 5, 1),
    (10, 4, 18, 130, "7.8126", "1.0624", "2.3822", 7, 2),
    (24, 8, 60, 850, "19.787", "-0.0899", "4.936", 19, 4),
    (25, 3, 31, 651, "8.236", "-0.0356", "0.922", 8, 0),
    (26, 4, 42, 850, "11.118", "-0.0623", "1.068", 11, 1),
    (27, 4, 40, 820, "10.928", "-0.1200", "1.547", 10, 1),
    (28, 6, 56, 1050, "16.03", "-0.2719", "2.845", 16, 2),
    (29, 2, 30, 842, "6.385", "0.0025", "-0.224", 6, 0),
    (30, 8, 72, 1300, "21.344", "-0.5759", "4.412", 21, 4),
];

/// `n, factorization, σ, α₁, α₂, ω, τ (0 when not printed), class`.
type AlphaRow = (u64, &'static str, u64, u64, u64, usize, u64, &'static str);

const TABLE_2: [AlphaRow; 4] = [
    (6, "2*3", 12, 2, 1, 2, 0, "Strong"),
    (28, "2^2*7", 56, 2, 1, 2, 0, "Strong"),
    (523776, "2^9*3*11*31", 1571328, 3, 1, 4, 0, "Strong"),
    (707840, "2^8*5*7*79", 1962240, 3, 1, 4, 0, "Strong"),
];

const TABLE_3_WEAK: [AlphaRow; 5] = [
    (24, "2^3*3", 60, 5, 2, 2, 8, "Weak"),
    (11172, "2^2*3*7^2*19", 31920, 20, 7, 4, 36, "Weak"),
    (544635, "3^2*5*7^2*13*19", 1244860, 16, 7, 5, 72, "Weak"),
    (931095, "3^4*5*11^2*19", 1931160, 56, 27, 4, 60, "Weak"),
    (6517665, "3^4*5*7*11^2*19", 15449280, 64, 27, 5, 120, "Weak"),
];

const TABLE_3_STRONG: [AlphaRow; 9] = [
    (6, "2*3", 12, 2, 1, 2, 0, "Strong"),
    (28, "2^2*7", 56, 2, 1, 2, 0, "Strong"),
    (120, "2^3*3*5", 360, 3, 1, 3, 0, "Strong"),
    (496, "2^4*31", 992, 2, 1, 2, 0, "Strong"),
    (672, "2^5*3*7", 2016, 3, 1, 3, 0, "Strong"),
    (1090, "2^3*3*5*7*13", 40320, 4, 1, 5, 0, "Strong"),
    (8128, "2^6*127", 16256, 2, 1, 2, 0, "Strong"),
    (30240, "2^5*3^3*5*7", 120960, 4, 1, 4, 0, "Strong"),
    (32760, "2^3*3^2*5*7*13", 131040, 4, 1, 5, 0, "Strong"),
];

/// `p★, λ★ cap, ω allowance` for the bound 10⁵.
const TABLE_4: [(u64, u32, usize); 5] = [(3, 7, 3), (5, 4, 3), (7, 3, 3), (11, 2, 3), (13, 2, 3)];

/// `p, e, σ(p^e)` factored as printed.
const TABLE_5: [(u64, u32, &str); 18] = [
    (3, 7, "2^4*541"),
    (3, 6, "1093"),
    (3, 5, "2^2*7*13"),
    (3, 4, "11^2"),
    (3, 3, "2^3*5"),
    (3, 2, "13"),
    (5, 5, "3^3*7*31"),
    (5, 4, "11*71"),
    (5, 3, "2^2*3*13"),
    (5, 2, "31"),
    (7, 4, "2801"),
    (7, 3, "2^4*5^2"),
    (7, 2, "3*19"),
    (11, 2, "7*19"),
    (13, 3, "2*5*7*17"),
    (13, 2, "3*61"),
    (19, 2, "3*127"),
    (31, 2, "3*331"),
];

/// Generator and its printed seed set at the bound 10⁵.
const TABLE_6: [(u64, u32, &[&str]); 13] = [
    (3, 7, &[]),
    (3, 6, &[]),
    (3, 5, &["3^5*7*13"]),
    (3, 4, &[]),
    (3, 3, &["3^3*5", "3^3*5^2", "3^3*5^3", "3^3*5^4", "3^3*5^5"]),
    (
        3,
        2,
        &["3^2*7*13", "3^2*7^2*13", "3^2*7^3*13", "3^2*7*13^2", "3^2*7^2*13^2"],
    ),
    (5, 4, &[]),
    (5, 3, &["5^3*7*13", "5^3*7^2*13"]),
    (5, 2, &["5^2*31", "5^2*31^2"]),
    (7, 3, &[]),
    (7, 2, &[]),
    (11, 2, &[]),
    (13, 2, &[]),
];

/// Seed, printed forced product (empty when blank), printed pruning reasons.
const TABLE_7: [(&[(u64, u32)], &str, &[&str]); 15] = [
    (&[(3, 5), (7, 1), (13, 1)], "", &["forced-even-factor"]),
    (&[(3, 3), (5, 1)], "", &["forced-even-factor"]),
    (&[(3, 3), (5, 2)], "", &["forced-even-factor"]),
    (&[(3, 3), (5, 3)], "", &["forced-even-factor"]),
    (&[(3, 3), (5, 4)], "11*71", &["exceeds-bound", "forced-even-factor"]),
    (&[(3, 3), (5, 5)], "7*31", &["exceeds-bound", "forced-even-factor"]),
    (&[(3, 2), (7, 1), (13, 1)], "", &["forced-even-factor"]),
    (&[(3, 2), (7, 2), (13, 1)], "", &["forced-even-factor"]),
    (&[(3, 2), (7, 3), (13, 1)], "5^2*31", &["exceeds-bound", "forced-even-factor"]),
    (&[(3, 2), (7, 1), (13, 2)], "31*61", &["exceeds-bound", "forced-even-factor"]),
    (&[(3, 2), (7, 2), (13, 2)], "5*19*61", &["exceeds-bound", "forced-even-factor"]),
    (&[(5, 3), (7, 1), (13, 1)], "", &["forced-even-factor"]),
    (&[(5, 3), (7, 2), (13, 1)], "19", &["exceeds-bound", "forced-even-factor"]),
    (&[(5, 2), (31, 1)], "", &["forced-even-factor"]),
    (&[(5, 2), (31, 2)], "83*331", &["exceeds-bound"]),
];

fn audit_table_1(prec: &Precision) -> Result<Vec<AuditRow>> {
    let mut rows = Vec::new();
    for (n, tau, s1, s2, half, re, im, floor_half, floor_i) in TABLE_1 {
        let f = factorize(&n.into())?;
        let mut b = RowBuilder::new("table-1", n);
        b.exact("tau", tau, sigma_k_exact(&f, 0));
        b.exact("sigma_1", s1, sigma_k_exact(&f, 1));
        b.exact("sigma_2", s2, sigma_k_exact(&f, 2));
        let sh = sigma_general(&f, Quaternion::real(0.5), prec)?;
        let si = sigma_general(&f, Quaternion::I, prec)?;
        b.approx("sigma_0.5", half, sh.a);
        b.approx("sigma_i.re", re, si.a);
        b.approx("sigma_i.im", im, si.b);
        b.exact("floor_sigma_0.5", floor_half, rounded_modulus(sh, RoundMode::Floor, prec)?.value);
        b.exact("floor_sigma_i", floor_i, rounded_modulus(si, RoundMode::Floor, prec)?.value);
        rows.push(b.finish());
    }
    Ok(rows)
}

/// Recomputes from the printed factorization; the printed `n` is checked
/// against its product, and its own factorization is reported.
fn audit_alpha_rows(table_id: &'static str, data: &[AlphaRow]) -> Result<Vec<AuditRow>> {
    let mut rows = Vec::new();
    for &(n, fac, sigma, a1, a2, omega, tau, class) in data {
        let printed: Factorization = fac.parse()?;
        let c = classify_exact(&printed, &Order::integer(1, 1))?;
        let mut b = RowBuilder::new(table_id, n);
        b.exact("n", n, printed.n());
        b.exact("factorization", fac, factorize(&n.into())?);
        b.exact("sigma", sigma, sigma_k_exact(&printed, 1));
        b.exact("alpha1", a1, c.ratio.num());
        b.exact("alpha2", a2, c.ratio.den());
        b.exact("omega", omega, c.omega);
        if tau > 0 {
            b.exact("tau", tau, &c.tau);
        }
        b.exact("verdict", class, c.verdict);
        rows.push(b.finish());
    }
    Ok(rows)
}

fn audit_table_4() -> Vec<AuditRow> {
    let table = generator_table(SEED_BOUND);
    let mut rows = Vec::new();
    let mut b = RowBuilder::new("table-4", "generators");
    let claimed: Vec<String> = TABLE_4.iter().map(|g| g.0.to_string()).collect();
    let computed: Vec<String> = table.iter().map(|g| g.prime.to_string()).collect();
    b.exact("primes", claimed.join(","), computed.join(","));
    rows.push(b.finish());
    for (p, lam, omega) in TABLE_4 {
        let mut b = RowBuilder::new("table-4", p);
        match table.iter().find(|g| g.prime == p) {
            Some(g) => {
                b.exact("lambda_cap", lam, g.lambda_cap);
                b.exact("omega_allowance", omega, g.allowance);
            }
            None => {
                b.exact("lambda_cap", lam, "absent");
                b.exact("omega_allowance", omega, "absent");
            }
        }
        rows.push(b.finish());
    }
    rows
}

fn parts_string(parts: &[(u64, u32)]) -> String {
    if parts.is_empty() {
        return String::new();
    }
    Factorization::from_u64_parts(parts).to_string()
}

fn audit_table_5() -> Vec<AuditRow> {
    TABLE_5
        .iter()
        .map(|&(p, e, printed)| {
            let mut b = RowBuilder::new("table-5", format!("{p}^{e}"));
            b.exact("sigma_factorization", printed, parts_string(&sigma_pp_parts(p, e)));
            b.finish()
        })
        .collect()
}

fn audit_table_6() -> Result<Vec<AuditRow>> {
    let mut rows = Vec::new();
    for &(p, e, printed) in &TABLE_6 {
        let seeds = build_seeds(Generator { prime: p, exp: e }, SEED_BOUND)?;
        let mut claimed: Vec<Factorization> =
            printed.iter().map(|s| s.parse()).collect::<Result<_>>()?;
        claimed.sort_by(|x, y| x.n().cmp(y.n()));
        let show = |v: Vec<String>| format!("{{{}}}", v.join(", "));
        let mut b = RowBuilder::new("table-6", format!("{p}^{e}"));
        b.exact(
            "seeds",
            show(claimed.iter().map(|f| f.to_string()).collect()),
            show(seeds.iter().map(AlphaSeed::to_string).collect()),
        );
        rows.push(b.finish());
    }
    Ok(rows)
}

fn audit_table_7() -> Result<Vec<AuditRow>> {
    let mut rows = Vec::new();
    for &(parts, forced, reasons) in &TABLE_7 {
        let seed = AlphaSeed::new(parts, SEED_BOUND)?;
        let v = chi_alpha(&seed, SEED_BOUND);
        let mut b = RowBuilder::new("table-7", &seed);
        b.exact("chi", 0, v.chi());
        if !forced.is_empty() {
            b.exact("forced", forced, parts_string(&v.forced));
        }
        let computed: Vec<String> = v.reasons.iter().map(|r| r.to_string()).collect();
        b.subset("reasons", reasons, &computed);
        rows.push(b.finish());
    }
    Ok(rows)
}

/// Recomputes every printed cell of the reference tables.
pub fn audit_tables() -> Result<Vec<AuditRow>> {
    let prec = Precision::default();
    let mut rows = audit_table_1(&prec)?;
    rows.extend(audit_alpha_rows("table-2", &TABLE_2)?);
    rows.extend(audit_alpha_rows("table-3-weak", &TABLE_3_WEAK)?);
    rows.extend(audit_alpha_rows("table-3-strong", &TABLE_3_STRONG)?);
    rows.extend(audit_table_4());
    rows.extend(audit_table_5());
    rows.extend(audit_table_6()?);
    rows.extend(audit_table_7()?);
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find<'a>(rows: &'a [AuditRow], table: &str, row: &str) -> &'a AuditRow {
        rows.iter()
            .find(|r| r.table_id == table && r.row == row)
            .unwrap_or_else(|| panic!("{table} {row} missing"))
    }

    #[test]
    fn known_mismatches() {
        let rows = audit_tables().unwrap();
        let bad: Vec<(String, String)> = rows
            .iter()
            .filter(|r| r.status == AuditStatus::Mismatch)
            .map(|r| (r.table_id.clone(), r.row.clone()))
            .collect();
        let expect = [
            ("table-1", "28"),
            ("table-1", "29"),
            ("table-2", "707840"),
            ("table-3-weak", "544635"),
            ("table-3-strong", "1090"),
            ("table-5", "3^7"),
            ("table-5", "5^5"),
            ("table-5", "13^3"),
            ("table-7", "3^2*7^2*13^2"),
            ("table-7", "5^2*31^2"),
        ];
        let expect: Vec<(String, String)> =
            expect.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        assert_eq!(bad, expect);

        let r = find(&rows, "table-2", "707840");
        assert_eq!((r.computed["alpha1"].as_str(), r.computed["alpha2"].as_str()), ("219", "79"));
        let r = find(&rows, "table-3-weak", "544635");
        assert_eq!(r.computed["sigma"], "1244880");
        assert!(r.discrepancy.starts_with("sigma:") && !r.discrepancy.contains("alpha"));
        let r = find(&rows, "table-3-strong", "1090");
        assert_eq!(r.computed["n"], "10920");
        assert_eq!((r.computed["alpha1"].as_str(), r.computed["alpha2"].as_str()), ("48", "13"));
    }

    #[test]
    fn verified_rows_carry_no_discrepancy() {
        for r in audit_tables().unwrap() {
            assert_eq!(r.status == AuditStatus::Verified, r.discrepancy.is_empty());
            assert_eq!(
                r.claimed.keys().collect::<Vec<_>>(),
                r.computed.keys().collect::<Vec<_>>()
            );
        }
    }
}
