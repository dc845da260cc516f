//! The two suborbit tables, stored as polynomials in the family variable.
//!
//! Subfield rows are in `r`; Ree rows are in `m` with `q = 3m^2` already
//! substituted. Rows with a zero class count at some parameter stay in the
//! symbolic table and are only dropped by [`SuborbitTable::instantiate`].

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{ratio, BigRational, ParamPoly};
use crate::error::{Error, Result};
use crate::group_data::{CaseFamily, FamilyKind, Params};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TorusBase {
    Gamma,
    Eta,
    Theta,
    Sigma,
    Tau,
}

/// What is known about the order of the class representative `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ZOrder {
    One,
    Two,
    Three,
    TorusPower(TorusBase),
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZClass {
    pub label: String,
    /// 1 or 2 for the two equal-length halves sharing one label.
    pub half: Option<u8>,
    pub order: ZOrder,
}

impl fmt::Display for ZClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)?;
        if let Some(h) = self.half {
            write!(f, "#{h}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuborbitRow {
    pub id: String,
    pub z: ZClass,
    pub length: ParamPoly,
    pub count: ParamPoly,
    pub length_formula: &'static str,
    pub count_formula: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuborbitTable {
    pub family: CaseFamily,
    pub rows: Vec<SuborbitRow>,
}

struct RowSpec {
    label: &'static str,
    half: Option<u8>,
    order: ZOrder,
    length: ParamPoly,
    count: ParamPoly,
    length_formula: &'static str,
    count_formula: &'static str,
}

fn c(v: i64) -> ParamPoly {
    ParamPoly::from_ints(&[v])
}

fn half(p: ParamPoly) -> ParamPoly {
    p.scale(&ratio(1, 2))
}

fn subfield_rows() -> Vec<RowSpec> {
    use TorusBase::*;
    use ZOrder::*;
    let r = ParamPoly::var();
    let p = |k: u32| r.pow(k);
    let one = c(1);
    let r6m1 = &p(6) - &one;
    let r2m1 = &p(2) - &one;
    let r3m1 = &p(3) - &one;
    let r3p1 = &p(3) + &one;
    let rm1 = &r - &one;
    let rp1 = &r + &one;
    let r2_r_1 = &(&p(2) - &r) + &one;
    let r2r1 = &(&p(2) + &r) + &one;

    let unip_big = half(p(2) * &r6m1 * &r2m1);
    let inv_big = half(p(4) * &r6m1 * &r2m1);
    let gamma_diag = p(5) * &r3m1 * &r2_r_1;
    let gamma_unip = p(5) * &r6m1 * &rm1;
    let eta_diag = p(5) * &r3p1 * &r2r1;
    let eta_unip = p(5) * &r6m1 * &rp1;

    let gamma_small = half(&r - &c(3));
    let eta_small = half(rm1.clone());
    let theta_count = rm1.pow(2).scale(&ratio(1, 4));

    let row = |label, half, order, length, count, length_formula, count_formula| RowSpec {
        label,
        half,
        order,
        length,
        count,
        length_formula,
        count_formula,
    };

    vec![
        row("1", None, One, c(1), c(1), "1", "1"),
        row("x_{3a+2b}(1)", None, Three, r6m1.clone(), c(1), "(r^6-1)", "1"),
        row("x_{2a+b}(1)", None, Three, r6m1.clone(), c(1), "(r^6-1)", "1"),
        row("x_{2a+b}(1)x_{3a+2b}(1)", None, Three, &r6m1 * &r2m1, c(1), "(r^6-1)(r^2-1)", "1"),
        row("x_{a+b}(1)x_{3a+b}(1)", Some(1), Three, unip_big.clone(), c(1), "r^2(r^6-1)(r^2-1)/2", "1"),
        row("x_{a+b}(1)x_{3a+b}(1)", Some(2), Three, unip_big, c(1), "r^2(r^6-1)(r^2-1)/2", "1"),
        // regular unipotent: a product of non-commuting root elements
        row("x_a(1)x_b(1)", None, Unknown, p(4) * &r6m1 * &r2m1, c(1), "r^4(r^6-1)(r^2-1)", "1"),
        row("h(-1,-1,1)", None, Two, p(4) * (&(&p(4) + &p(2)) + &one), c(1), "r^4(r^4+r^2+1)", "1"),
        row("h(-1,-1,1)x_b(1)", None, Unknown, p(4) * &r6m1, c(1), "r^4(r^6-1)", "1"),
        row("h(-1,-1,1)x_{2a+b}(1)", None, Unknown, p(4) * &r6m1, c(1), "r^4(r^6-1)", "1"),
        row("h(-1,-1,1)x_b(1)x_{2a+b}(1)", Some(1), Unknown, inv_big.clone(), c(1), "r^4(r^6-1)(r^2-1)/2", "1"),
        row("h(-1,-1,1)x_b(1)x_{2a+b}(1)", Some(2), Unknown, inv_big, c(1), "r^4(r^6-1)(r^2-1)/2", "1"),
        row("h_gamma(i,-2i,i)", None, TorusPower(Gamma), gamma_diag.clone(), gamma_small.clone(), "r^5(r^3-1)(r^2-r+1)", "(r-3)/2"),
        row("h_gamma(i,-2i,i)x_{3a+2b}(1)", None, Unknown, gamma_unip.clone(), gamma_small.clone(), "r^5(r^6-1)(r-1)", "(r-3)/2"),
        row("h_gamma(i,-i,0)", None, TorusPower(Gamma), gamma_diag, gamma_small.clone(), "r^5(r^3-1)(r^2-r+1)", "(r-3)/2"),
        row("h_gamma(i,-i,0)x_{2a+b}(1)", None, Unknown, gamma_unip, gamma_small, "r^5(r^6-1)(r-1)", "(r-3)/2"),
        row(
            "h_gamma(i,j,-i-j)",
            None,
            TorusPower(Gamma),
            p(6) * &r3m1 * &r2_r_1 * &rm1,
            ParamPoly::from_ints(&[15, -8, 1]).scale(&ratio(1, 12)),
            "r^6(r^3-1)(r^2-r+1)(r-1)",
            "(r^2-8r+15)/12",
        ),
        row("h_eta(i,-2i,i)", None, TorusPower(Eta), eta_diag.clone(), eta_small.clone(), "r^5(r^3+1)(r^2+r+1)", "(r-1)/2"),
        row("h_eta(i,-2i,i)x_{3a+2b}(1)", None, Unknown, eta_unip.clone(), eta_small.clone(), "r^5(r^6-1)(r+1)", "(r-1)/2"),
        row("h_eta(i,-i,0)", None, TorusPower(Eta), eta_diag, eta_small.clone(), "r^5(r^3+1)(r^2+r+1)", "(r-1)/2"),
        row("h_eta(i,-i,0)x_{2a+b}(1)", None, Unknown, eta_unip, eta_small, "r^5(r^6-1)(r+1)", "(r-1)/2"),
        row(
            "h_eta(i,j,-i-j)",
            None,
            TorusPower(Eta),
            p(6) * &r3p1 * &r2r1 * &rp1,
            ParamPoly::from_ints(&[3, -4, 1]).scale(&ratio(1, 12)),
            "r^6(r^3+1)(r^2+r+1)(r+1)",
            "(r^2-4r+3)/12",
        ),
        row("h_theta(i,(r-1)i,-ri)", None, TorusPower(Theta), p(6) * &r6m1, theta_count.clone(), "r^6(r^6-1)", "(r-1)^2/4"),
        row("h_theta(i,ri,-(r+1)i)", None, TorusPower(Theta), p(6) * &r6m1, theta_count, "r^6(r^6-1)", "(r-1)^2/4"),
        row(
            "h_tau(i,ri,r^2i)",
            None,
            TorusPower(Tau),
            p(6) * &r3m1 * &r2m1 * &rp1,
            (&r * &rp1).scale(&ratio(1, 6)),
            "r^6(r^3-1)(r^2-1)(r+1)",
            "r(r+1)/6",
        ),
        row(
            "h_sigma(i,-ri,r^2i)",
            None,
            TorusPower(Sigma),
            p(6) * &r3p1 * &r2m1 * &rm1,
            (&r * &rm1).scale(&ratio(1, 6)),
            "r^6(r^3+1)(r^2-1)(r-1)",
            "r(r-1)/6",
        ),
    ]
}

fn ree_rows() -> Vec<RowSpec> {
    let m = ParamPoly::var();
    let q = ParamPoly::from_ints(&[0, 0, 3]);
    let p = |k: u32| q.pow(k);
    let one = c(1);
    let q3p1 = &p(3) + &one;
    let qm1 = &q - &one;
    let q2m1 = &p(2) - &one;
    let q2_q_1 = &(&p(2) - &q) + &one;
    let three_m = m.scale(&ratio(3, 1));
    let base = &q3p1 * &qm1;

    let row = |half, length, count, length_formula, count_formula| RowSpec {
        label: length_formula,
        half,
        order: ZOrder::Unknown,
        length,
        count,
        length_formula,
        count_formula,
    };
    let mut rows = vec![
        row(None, c(1), c(1), "1", "1"),
        row(None, base.clone(), c(1), "(q^3+1)(q-1)", "1"),
        row(Some(1), half(&q * &base), c(1), "q(q^3+1)(q-1)/2", "1"),
        row(Some(2), half(&q * &base), c(1), "q(q^3+1)(q-1)/2", "1"),
        row(None, p(2) * &base, c(1), "q^2(q^3+1)(q-1)", "1"),
        row(None, p(2) * &q2_q_1, c(1), "q^2(q^2-q+1)", "1"),
        row(Some(1), half(p(2) * &base), c(1), "q^2(q^3+1)(q-1)/2", "1"),
        row(Some(2), half(p(2) * &base), c(1), "q^2(q^3+1)(q-1)/2", "1"),
        row(None, p(3) * &q3p1, half(&q - &c(3)), "q^3(q^3+1)", "(q-3)/2"),
        row(
            None,
            p(3) * &q2_q_1 * &qm1,
            (&q - &c(3)).scale(&ratio(1, 6)),
            "q^3(q^2-q+1)(q-1)",
            "(q-3)/6",
        ),
        row(
            None,
            p(3) * &q2m1 * (&(&q - &three_m) + &one),
            (&q - &three_m).scale(&ratio(1, 6)),
            "q^3(q^2-1)(q-3m+1)",
            "(q-3m)/6",
        ),
        row(
            None,
            p(3) * &q2m1 * (&(&q + &three_m) + &one),
            (&q + &three_m).scale(&ratio(1, 6)),
            "q^3(q^2-1)(q+3m+1)",
            "(q+3m)/6",
        ),
    ];
    rows[0].label = "1";
    rows[0].order = ZOrder::One;
    rows
}

impl SuborbitTable {
    /// Transcribed table for one family.
    pub fn build(kind: FamilyKind) -> Self {
        let (prefix, specs) = match kind {
            FamilyKind::Subfield => ("S", subfield_rows()),
            FamilyKind::Ree => ("R", ree_rows()),
        };
        let rows = specs
            .into_iter()
            .enumerate()
            .map(|(k, s)| SuborbitRow {
                id: format!("{prefix}{:02}", k + 1),
                z: ZClass {
                    label: s.label.to_string(),
                    half: s.half,
                    order: s.order,
                },
                length: s.length,
                count: s.count,
                length_formula: s.length_formula,
                count_formula: s.count_formula,
            })
            .collect();
        SuborbitTable {
            family: CaseFamily::new(kind),
            rows,
        }
    }

    pub fn kind(&self) -> FamilyKind {
        self.family.kind
    }

    pub fn row(&self, id: &str) -> Option<&SuborbitRow> {
        self.rows.iter().find(|r| r.id == id)
    }

    pub fn row_mut(&mut self, id: &str) -> Option<&mut SuborbitRow> {
        self.rows.iter_mut().find(|r| r.id == id)
    }

    /// `sum(length * count)` as a polynomial.
    pub fn mass_polynomial(&self) -> ParamPoly {
        self.rows
            .iter()
            .fold(ParamPoly::zero(), |acc, r| &acc + &(&r.length * &r.count))
    }

    /// `sum(count)`: the number of suborbits, including the trivial one.
    pub fn count_polynomial(&self) -> ParamPoly {
        self.rows
            .iter()
            .fold(ParamPoly::zero(), |acc, r| &acc + &r.count)
    }

    /// Mass identity as an exact polynomial identity.
    pub fn verify_mass_symbolic(&self) -> bool {
        self.mass_polynomial() == self.family.index
    }

    pub fn instantiate(&self, params: &Params) -> Result<ConcreteTable> {
        if params.kind != self.kind() {
            return Err(Error::Usage(format!(
                "{} parameters passed to the {} table",
                params.kind,
                self.kind()
            )));
        }
        let mut rows = Vec::new();
        for row in &self.rows {
            let count = integral(&row.count.eval(&params.t), row, "class count")?;
            if count.is_negative() {
                return Err(Error::Transcription {
                    row: row.id.clone(),
                    reason: format!("negative class count {count} at {}", params.t),
                });
            }
            if count.is_zero() {
                continue;
            }
            let length = integral(&row.length.eval(&params.t), row, "suborbit length")?;
            if !length.is_positive() {
                return Err(Error::Transcription {
                    row: row.id.clone(),
                    reason: format!("non-positive length {length} at {}", params.t),
                });
            }
            rows.push(ConcreteRow {
                id: row.id.clone(),
                label: row.z.to_string(),
                z_order: row.z.order,
                length,
                count,
            });
        }
        Ok(ConcreteTable {
            params: params.clone(),
            h_order: self.family.h_order_at(params),
            index: self.family.coset_index(params),
            rows,
        })
    }
}

fn integral(v: &BigRational, row: &SuborbitRow, what: &str) -> Result<BigInt> {
    if v.is_integer() {
        Ok(v.to_integer())
    } else {
        Err(Error::Transcription {
            row: row.id.clone(),
            reason: format!("non-integral {what} {v}"),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcreteRow {
    pub id: String,
    pub label: String,
    pub z_order: ZOrder,
    pub length: BigInt,
    pub count: BigInt,
}

impl ConcreteRow {
    pub fn is_trivial(&self) -> bool {
        self.length.is_one()
    }
}

/// A table evaluated at one parameter, zero-count rows removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcreteTable {
    pub params: Params,
    pub h_order: BigInt,
    pub index: BigInt,
    pub rows: Vec<ConcreteRow>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MassCheck {
    pub total: BigInt,
    pub index: BigInt,
    /// `total - index`.
    pub residual: BigInt,
}

impl MassCheck {
    pub fn ok(&self) -> bool {
        self.residual.is_zero()
    }
}

impl ConcreteTable {
    pub fn kind(&self) -> FamilyKind {
        self.params.kind
    }

    pub fn row(&self, id: &str) -> Option<&ConcreteRow> {
        self.rows.iter().find(|r| r.id == id)
    }

    pub fn nontrivial_rows(&self) -> impl Iterator<Item = &ConcreteRow> {
        self.rows.iter().filter(|r| !r.is_trivial())
    }

    pub fn verify_mass(&self) -> MassCheck {
        let total = self
            .rows
            .iter()
            .fold(BigInt::zero(), |acc, r| acc + &r.length * &r.count);
        MassCheck {
            residual: &total - &self.index,
            total,
            index: self.index.clone(),
        }
    }

    /// `|H| / length` for one row; must divide exactly.
    pub fn stabilizer_order(&self, id: &str) -> Result<BigInt> {
        let row = self.row(id).ok_or_else(|| Error::MissingRow(id.to_string()))?;
        let (quo, rem) = self.h_order.div_rem(&row.length);
        if !rem.is_zero() {
            return Err(Error::Transcription {
                row: id.to_string(),
                reason: format!("length {} does not divide |H| = {}", row.length, self.h_order),
            });
        }
        Ok(quo)
    }

    /// Total number of suborbits, trivial one included.
    pub fn suborbit_count(&self) -> BigInt {
        self.rows.iter().map(|r| &r.count).sum()
    }

    pub fn distinct_nontrivial_lengths(&self) -> BTreeSet<BigInt> {
        self.nontrivial_rows().map(|r| r.length.clone()).collect()
    }

    /// Rows whose length does not divide `|H|`.
    pub fn non_dividing_rows(&self) -> Vec<&ConcreteRow> {
        self.rows
            .iter()
            .filter(|r| !(&self.h_order % &r.length).is_zero())
            .collect()
    }

    /// Rows of length `|H|` (regular suborbits). Only the smallest Ree
    /// parameter has one.
    pub fn regular_rows(&self) -> Vec<&ConcreteRow> {
        self.rows.iter().filter(|r| r.length == self.h_order).collect()
    }

    /// Tab-separated dump: a header line, then `label\tlength\tcount` rows.
    pub fn dump(&self) -> String {
        let mut out = format!(
            "# {} {}={} index={}\n",
            self.kind(),
            self.kind().param_name(),
            self.params.param(),
            self.index
        );
        for r in &self.rows {
            let _ = writeln!(out, "{}\t{}\t{}", r.label, r.length, r.count);
        }
        out
    }
}

/// Result of checking one concrete instantiation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableCheck {
    pub params: Params,
    pub mass: MassCheck,
    pub non_dividing_rows: Vec<String>,
    /// Informational: lengths equal to `|H|` are divisors but not proper ones.
    pub regular_rows: Vec<String>,
    pub suborbit_count: BigInt,
    pub trivial_rows: usize,
}

impl TableCheck {
    pub fn ok(&self) -> bool {
        self.mass.ok() && self.non_dividing_rows.is_empty() && self.trivial_rows == 1
    }
}

/// Instantiates and runs every consistency check at `params`.
pub fn check_table(table: &SuborbitTable, params: &Params) -> Result<(ConcreteTable, TableCheck)> {
    let ct = table.instantiate(params)?;
    let check = TableCheck {
        params: params.clone(),
        mass: ct.verify_mass(),
        non_dividing_rows: ct.non_dividing_rows().iter().map(|r| r.id.clone()).collect(),
        regular_rows: ct.regular_rows().iter().map(|r| r.id.clone()).collect(),
        suborbit_count: ct.suborbit_count(),
        trivial_rows: ct
            .rows
            .iter()
            .filter(|r| r.is_trivial() && r.count.is_one())
            .count(),
    };
    Ok((ct, check))
}
