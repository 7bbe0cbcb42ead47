//! Identity certificate: runs every exact closed-form identity over a
//! parameter range and records pass/fail per identity.

use num_traits::{One, Zero};
use serde::Serialize;

use super::*;

/// The closed forms under test. Swapping one of these for a corrupted
/// version is how the certificate's negative controls are exercised.
#[derive(Clone, Copy)]
pub struct ClosedForms {
    pub norm_y_sq: fn(u32) -> Result<Rational>,
    pub bj: fn(u32, u32) -> Result<Rational>,
    pub aj_closed: fn(u32, u32) -> Result<Rational>,
    pub coefficient: fn(u32, u32, u32) -> Result<Rational>,
}

impl Default for ClosedForms {
    fn default() -> Self {
        Self { norm_y_sq, bj, aj_closed, coefficient }
    }
}

/// Deliberate corruptions for mutation testing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    NormYSq,
    Bj,
    AjClosed,
    Coefficient,
}

impl std::str::FromStr for Fault {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "norm-y-sq" => Ok(Fault::NormYSq),
            "bj" => Ok(Fault::Bj),
            "aj-closed" => Ok(Fault::AjClosed),
            "coefficient" => Ok(Fault::Coefficient),
            other => Err(format!("unknown fault '{other}'")),
        }
    }
}

fn bad_norm(n: u32) -> Result<Rational> {
    Ok(norm_y_sq(n)? * rat(25, 24))
}
fn bad_bj(n: u32, j: u32) -> Result<Rational> {
    let (ni, ji) = (n as i64, j as i64);
    check_j(n, j)?;
    Ok(rat(3 * (ni - ji) * (ni - ji + 2), (ji + 1) * (ni - 1) * (ni + 1)))
}
fn bad_aj(n: u32, j: u32) -> Result<Rational> {
    let (ni, ji) = (n as i64, j as i64);
    check_j(n, j)?;
    Ok(rat(3 * (ni + 4) * (ni - ji) * (ji + 1), 2 * (ji + 2) * ni))
}
fn bad_coefficient(m: u32, k: u32, n: u32) -> Result<Rational> {
    Ok(coefficient(m, k, n)? + rat(1, 1_000_000))
}

impl ClosedForms {
    pub fn with_fault(fault: Fault) -> Self {
        let mut f = Self::default();
        match fault {
            Fault::NormYSq => f.norm_y_sq = bad_norm,
            Fault::Bj => f.bj = bad_bj,
            Fault::AjClosed => f.aj_closed = bad_aj,
            Fault::Coefficient => f.coefficient = bad_coefficient,
        }
        f
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityResult {
    pub name: String,
    pub statement: String,
    pub range: String,
    pub checked: usize,
    pub passed: bool,
    /// First few failing parameter tuples.
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoefficientSign {
    pub m: u32,
    pub k: u32,
    pub n: u32,
    pub coefficient: String,
    pub sign: i8,
    pub counterexample: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub n_max: u32,
    pub identities: Vec<IdentityResult>,
    pub coefficient_signs: Vec<CoefficientSign>,
    pub all_passed: bool,
}

struct Tally {
    name: &'static str,
    statement: &'static str,
    range: String,
    checked: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new(name: &'static str, statement: &'static str, range: String) -> Self {
        Self { name, statement, range, checked: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: Result<bool>, tag: impl FnOnce() -> String) {
        self.checked += 1;
        match ok {
            Ok(true) => {}
            Ok(false) => self.fail(tag()),
            Err(e) => self.fail(format!("{} ({e})", tag())),
        }
    }

    fn fail(&mut self, tag: String) {
        if self.failures.len() < 8 {
            self.failures.push(tag);
        } else if self.failures.len() == 8 {
            self.failures.push("...".into());
        }
    }

    fn finish(self) -> IdentityResult {
        IdentityResult {
            name: self.name.into(),
            statement: self.statement.into(),
            range: self.range,
            checked: self.checked,
            passed: self.failures.is_empty(),
            failures: self.failures,
        }
    }
}

/// Integer partitions of `r` (non-increasing parts).
fn partitions(r: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(r, r, &mut Vec::new(), &mut out);
    out
}

fn factorial(k: u32) -> Rational {
    (1..=k as i64).fold(Rational::one(), |acc, i| acc * int(i))
}

/// `int (u_1^2 + ... + u_j^2)^r dsigma` over `S^{n-1}` by the multinomial
/// theorem and [`sphere_even_moment`], grouping exponent vectors by their
/// multiset of parts.
pub fn pushforward_moment(n: u32, j: u32, r: u32) -> Result<Rational> {
    check_j(n, j)?;
    let mut acc = Rational::zero();
    for lam in partitions(r) {
        let parts = lam.len() as u32;
        if parts > j {
            continue;
        }
        // arrangements of the parts among j slots
        let mut arrangements = factorial(j) / factorial(j - parts);
        let mut i = 0;
        while i < lam.len() {
            let mut run = 1;
            while i + run < lam.len() && lam[i + run] == lam[i] {
                run += 1;
            }
            arrangements /= factorial(run as u32);
            i += run;
        }
        let multinomial = lam.iter().fold(factorial(r), |acc, &p| acc / factorial(p));
        acc += arrangements * multinomial * sphere_even_moment(&lam, n)?;
    }
    Ok(acc)
}

/// Run every identity for `2 <= n <= n_max`; the sign table covers
/// `n <= sign_table_max`.
pub fn certify(n_max: u32, sign_table_max: u32, forms: &ClosedForms) -> Certificate {
    let range_n = format!("2 <= n <= {n_max}");
    let range_nj = format!("1 <= j <= n, 2 <= n <= {n_max}");
    let range_mkn = format!("1 <= m < k <= n-1, 3 <= n <= {n_max}");

    let mut norm = Tally::new(
        "norm_y_sq",
        "||Y||^2 closed form equals the term-by-term sphere-moment expansion",
        range_n.clone(),
    );
    let mut lam = Tally::new("lambda_ratio", "4(n+2)/(n-1) - 1 = 3(n+3)/(n-1)", range_n.clone());
    let mut push = Tally::new(
        "t_moment_pushforward",
        "M_r(j) equals int (u_1^2+...+u_j^2)^r dsigma, r <= 4",
        range_nj.clone(),
    );
    let mut javg = Tally::new(
        "j_average",
        "int (j R_j Y)^2 dF via T-moments equals j B_j ||Y||^2",
        range_nj.clone(),
    );
    let mut aj = Tally::new(
        "aj_assembled_equals_closed",
        "(n-j)/2 (lambda/(n-1) - 1) - (n+1)/2 B_j equals 3(n+4)(n-j)(j+1)/(2(j+2)(n-1))",
        range_nj,
    );
    let mut diff = Tally::new(
        "coefficient_equals_difference",
        "A_m - A_k equals the closed cross-dimensional coefficient",
        range_mkn.clone(),
    );
    let mut dich = Tally::new(
        "sign_dichotomy",
        "coefficient < 0 iff n > (m+2)(k+2) - 2",
        range_mkn,
    );

    for n in 2..=n_max {
        norm.check(
            (|| Ok((forms.norm_y_sq)(n)? == norm_y_sq_expanded(n)?))(),
            || format!("n={n}"),
        );
        lam.check(Ok(lambda_fourth(n) / int(n as i64 - 1) - int(1) == rat(3 * (n as i64 + 3), n as i64 - 1)), || {
            format!("n={n}")
        });
        for j in 1..=n {
            for r in 0..=4 {
                push.check((|| Ok(t_moment(n, j, r)? == pushforward_moment(n, j, r)?))(), || {
                    format!("n={n} j={j} r={r}")
                });
            }
            javg.check(
                (|| Ok(j_average_expanded(n, j)? == int(j as i64) * (forms.bj)(n, j)? * (forms.norm_y_sq)(n)?))(),
                || format!("n={n} j={j}"),
            );
            aj.check(
                (|| {
                    let b = (forms.bj)(n, j)?;
                    let ni = n as i64;
                    let assembled = rat(ni - j as i64, 2) * (lambda_fourth(n) / int(ni - 1) - int(1)) - rat(ni + 1, 2) * b;
                    Ok(assembled == (forms.aj_closed)(n, j)?)
                })(),
                || format!("n={n} j={j}"),
            );
        }
        for k in 2..n {
            for m in 1..k {
                diff.check(
                    (|| Ok((forms.aj_closed)(n, m)? - (forms.aj_closed)(n, k)? == (forms.coefficient)(m, k, n)?))(),
                    || format!("m={m} k={k} n={n}"),
                );
                dich.check(
                    (|| Ok((sign(&(forms.coefficient)(m, k, n)?) < 0) == counterexample_exists(m, k, n)?))(),
                    || format!("m={m} k={k} n={n}"),
                );
            }
        }
    }

    let mut coefficient_signs = Vec::new();
    for n in 3..=sign_table_max {
        for k in 2..n {
            for m in 1..k {
                if let Ok(c) = (forms.coefficient)(m, k, n) {
                    coefficient_signs.push(CoefficientSign {
                        m,
                        k,
                        n,
                        coefficient: c.to_string(),
                        sign: sign(&c),
                        counterexample: counterexample_exists(m, k, n).unwrap_or(false),
                    });
                }
            }
        }
    }

    let identities: Vec<IdentityResult> =
        [norm, lam, push, javg, aj, diff, dich].into_iter().map(Tally::finish).collect();
    let all_passed = identities.iter().all(|i| i.passed);
    Certificate { n_max, identities, coefficient_signs, all_passed }
}
