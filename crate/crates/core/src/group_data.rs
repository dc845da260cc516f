//! Group orders, parameter shapes and outer-automorphism data for the two
//! coset actions of `G2(q)`.
//!
//! Each family is univariate in a formal parameter `t`:
//!
//! | family   | `t` | `q`     | admissible            |
//! |----------|-----|---------|-----------------------|
//! | Subfield | `r` | `r^2`   | `r = 3^n`, `n >= 1`   |
//! | Ree      | `m` | `3 m^2` | `m = 3^n`, `n >= 0`   |

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::{cyclic_order, int, is_power_of, ParamPoly};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// `G2(q)` on the cosets of `G2(sqrt q)`.
    Subfield,
    /// `G2(q)` on the cosets of `2G2(q)`.
    Ree,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Subfield => "subfield",
            FamilyKind::Ree => "ree",
        }
    }

    /// Name of the table parameter.
    pub fn var(self) -> &'static str {
        match self {
            FamilyKind::Subfield => "r",
            FamilyKind::Ree => "m",
        }
    }

    /// Name of the user-facing parameter (`r` for Subfield, `q` for Ree).
    pub fn param_name(self) -> &'static str {
        match self {
            FamilyKind::Subfield => "r",
            FamilyKind::Ree => "q",
        }
    }

    pub fn min_n(self) -> u32 {
        match self {
            FamilyKind::Subfield => 1,
            FamilyKind::Ree => 0,
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A concrete admissible parameter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Params {
    pub kind: FamilyKind,
    pub n: u32,
    /// Value of the table variable (`r` or `m`).
    pub t: BigInt,
    pub q: BigInt,
    /// `q = 3^field_degree`.
    pub field_degree: u32,
}

impl Params {
    /// The value users quote: `r` for Subfield, `q` for Ree.
    pub fn param(&self) -> &BigInt {
        match self.kind {
            FamilyKind::Subfield => &self.t,
            FamilyKind::Ree => &self.q,
        }
    }
}

/// `|G2(q)| = q^6 (q^6 - 1)(q^2 - 1)`.
pub fn g2_order(q: &BigInt) -> BigInt {
    let one = BigInt::one();
    q.pow(6u32) * (q.pow(6u32) - &one) * (q.pow(2u32) - &one)
}

/// `|2G2(q)| = q^3 (q^3 + 1)(q - 1)`.
pub fn ree_order(q: &BigInt) -> BigInt {
    let one = BigInt::one();
    q.pow(3u32) * (q.pow(3u32) + &one) * (q - &one)
}

fn g2_order_poly(q: &ParamPoly) -> ParamPoly {
    let one = ParamPoly::one();
    q.pow(6) * (&q.pow(6) - &one) * (&q.pow(2) - &one)
}

/// One case family with its order polynomials in `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseFamily {
    pub kind: FamilyKind,
    /// `q` as a polynomial in `t`.
    pub q: ParamPoly,
    pub g_order: ParamPoly,
    pub h_order: ParamPoly,
    pub index: ParamPoly,
}

impl CaseFamily {
    pub fn new(kind: FamilyKind) -> Self {
        let one = ParamPoly::one();
        let t = ParamPoly::var();
        match kind {
            FamilyKind::Subfield => {
                let q = t.pow(2);
                CaseFamily {
                    kind,
                    g_order: g2_order_poly(&q),
                    h_order: g2_order_poly(&t),
                    index: t.pow(6) * (&t.pow(6) + &one) * (&t.pow(2) + &one),
                    q,
                }
            }
            FamilyKind::Ree => {
                let q = ParamPoly::from_ints(&[0, 0, 3]);
                CaseFamily {
                    kind,
                    g_order: g2_order_poly(&q),
                    h_order: q.pow(3) * (&q.pow(3) + &one) * (&q - &one),
                    index: q.pow(3) * (&q.pow(3) - &one) * (&q + &one),
                    q,
                }
            }
        }
    }

    pub fn subfield() -> Self {
        Self::new(FamilyKind::Subfield)
    }

    pub fn ree() -> Self {
        Self::new(FamilyKind::Ree)
    }

    /// Parameters for exponent `n`.
    pub fn params(&self, n: u32) -> Result<Params> {
        if n < self.kind.min_n() {
            return Err(Error::Inadmissible {
                family: self.kind.name(),
                param: format!("n = {n}"),
                reason: format!("n must be at least {}", self.kind.min_n()),
            });
        }
        let t = int(3).pow(n);
        let (q, field_degree) = match self.kind {
            FamilyKind::Subfield => (t.pow(2u32), 2 * n),
            FamilyKind::Ree => (int(3) * t.pow(2u32), 2 * n + 1),
        };
        Ok(Params {
            kind: self.kind,
            n,
            t,
            q,
            field_degree,
        })
    }

    /// Validates a user-facing parameter (`r` for Subfield, `q` for Ree).
    pub fn admit(&self, param: &BigInt) -> Result<Params> {
        let bad = |reason: &str| Error::Inadmissible {
            family: self.kind.name(),
            param: param.to_string(),
            reason: reason.to_string(),
        };
        let e = is_power_of(param, &int(3)).ok_or_else(|| bad("not a power of 3"))?;
        match self.kind {
            FamilyKind::Subfield if e == 0 => Err(bad("r must be 3^n with n >= 1")),
            FamilyKind::Subfield => self.params(e),
            FamilyKind::Ree if e % 2 == 0 => Err(bad("q must be an odd power of 3")),
            FamilyKind::Ree => self.params((e - 1) / 2),
        }
    }

    /// `|G| / |H|`.
    pub fn coset_index(&self, params: &Params) -> BigInt {
        self.index
            .eval_integer(&params.t)
            .expect("index polynomial has integer coefficients")
    }

    pub fn h_order_at(&self, params: &Params) -> BigInt {
        self.h_order.eval_integer(&params.t).expect("integral")
    }

    pub fn g_order_at(&self, params: &Params) -> BigInt {
        self.g_order.eval_integer(&params.t).expect("integral")
    }

    /// The `(|X|, contains graph automorphism)` pairs to analyse.
    pub fn outer_structure(&self, params: &Params) -> OuterStructure {
        OuterStructure::new(self.kind, params.field_degree)
    }
}

/// Descriptor of a subgroup `X` of `Out(G2(q))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OuterDescriptor {
    pub order: u32,
    pub contains_graph_auto: bool,
}

impl fmt::Display for OuterDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|X| = {}", self.order)?;
        if self.contains_graph_auto {
            f.write_str(", graph")?;
        }
        Ok(())
    }
}

/// Outer automorphism data: graph part of order 2, field part of order `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OuterStructure {
    pub graph_auto_order: u32,
    pub field_auto_order: u32,
    pub descriptors: Vec<OuterDescriptor>,
    /// False when the subgroup lattice behind `descriptors` is a superset
    /// taken over two candidate models rather than a verified list.
    pub lattice_verified: bool,
}

impl OuterStructure {
    /// For odd `f` the outer group is cyclic of order `2f`: one subgroup per
    /// divisor `d`, containing the graph automorphism iff `d` is even.
    ///
    /// For even `f` (Subfield family) the lattice is not pinned down here, so
    /// the descriptors are the union over the cyclic and the direct-product
    /// model: `(d, false)` for `d | f` and `(d, true)` for even `d | 2f`.
    pub fn new(kind: FamilyKind, f: u32) -> Self {
        let total = 2 * f;
        let mut descriptors = Vec::new();
        for d in (1..=total).filter(|d| total % d == 0) {
            if f % d == 0 {
                descriptors.push(OuterDescriptor {
                    order: d,
                    contains_graph_auto: false,
                });
            }
            if d % 2 == 0 {
                descriptors.push(OuterDescriptor {
                    order: d,
                    contains_graph_auto: true,
                });
            }
        }
        OuterStructure {
            graph_auto_order: 2,
            field_auto_order: f,
            descriptors,
            lattice_verified: kind == FamilyKind::Ree,
        }
    }

    pub fn orders(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.descriptors.iter().map(|d| d.order).collect();
        v.dedup();
        v
    }
}

/// Orders of the torus generators built from a generator `kappa` of
/// `F_{q^3}^*`, `q = r^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusData {
    pub kappa_order: BigInt,
    pub theta_order: BigInt,
    pub eta_order: BigInt,
    pub gamma_order: BigInt,
    pub sigma_order: BigInt,
    pub tau_order: BigInt,
}

/// Torus orders from the exponent definitions
/// `sigma = kappa^((r+1)(r^3-1))`, `tau = kappa^((r-1)(r^3+1))`,
/// `theta = kappa^(q^2+q+1)`, `eta = theta^(r-1)`, `gamma = theta^(r+1)`.
pub fn torus_orders(r: &BigInt) -> Result<TorusData> {
    match is_power_of(r, &int(3)) {
        Some(n) if n >= 1 => {}
        _ => {
            return Err(Error::Inadmissible {
                family: "subfield",
                param: r.to_string(),
                reason: "r must be 3^n with n >= 1".into(),
            })
        }
    }
    let one = BigInt::one();
    let q = r * r;
    let r3 = r.pow(3u32);
    let kappa_order = q.pow(3u32) - &one;
    let theta_exp = &q * &q + &q + &one;
    let theta_order = cyclic_order(&kappa_order, &theta_exp);
    Ok(TorusData {
        eta_order: cyclic_order(&theta_order, &(r - &one)),
        gamma_order: cyclic_order(&theta_order, &(r + &one)),
        sigma_order: cyclic_order(&kappa_order, &((r + &one) * (&r3 - &one))),
        tau_order: cyclic_order(&kappa_order, &((r - &one) * (&r3 + &one))),
        theta_order,
        kappa_order,
    })
}

impl TorusData {
    /// Compares against `theta: r^2 - 1`, `eta: r + 1`, `gamma: r - 1`,
    /// `sigma: r^2 - r + 1`, `tau: r^2 + r + 1`.
    pub fn matches_closed_forms(&self, r: &BigInt) -> bool {
        let one = BigInt::one();
        let r2 = r * r;
        self.kappa_order == r2.pow(3u32) - &one
            && self.theta_order == &r2 - &one
            && self.eta_order == r + &one
            && self.gamma_order == r - &one
            && self.sigma_order == &r2 - r + &one
            && self.tau_order == &r2 + r + &one
    }
}
