//! Gate pipelines per case family and report assembly.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::filters::{
    bcn_small_case_gate, bhk_gate, involution_gate, kernel_chain_gate, multiplicity_free_gate,
    sigma_in_x_gate, GateVerdict, KernelStrip, Outcome, BCN_SMALL_CASE, BHK, INVOLUTION, KERNEL_CHAIN,
    MULTIPLICITY_FREE,
};
use crate::fusion::FusionConstraint;
use crate::group_data::{FamilyKind, OuterDescriptor, Params};
use crate::par::{map_ordered, Execution};
use crate::report::{
    Certificate, Conclusion, RunReport, SymbolicCheck, TableEntry, TableReport, TOOL_VERSION,
};
use crate::tables::{check_table, ConcreteTable, SuborbitTable};

pub type Case = FamilyKind;

pub const DEFAULT_MAX_N: u32 = 12;

/// One `--x` item: an outer-automorphism subgroup order, optionally pinned
/// to containing (or not containing) the graph automorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct XSpec {
    pub order: u32,
    pub graph: Option<bool>,
}

impl XSpec {
    fn matches(&self, d: &OuterDescriptor) -> bool {
        self.order == d.order && self.graph.is_none_or(|g| g == d.contains_graph_auto)
    }
}

impl FromStr for XSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Usage(format!("bad --x item {s:?}; expected k, k,graph or k,nograph"));
        let (k, rest) = match s.split_once(',') {
            Some((k, r)) => (k, Some(r)),
            None => (s, None),
        };
        let order: u32 = k.trim().parse().map_err(|_| bad())?;
        if order == 0 {
            return Err(bad());
        }
        let graph = match rest.map(str::trim) {
            None => None,
            Some("graph") => Some(true),
            Some("nograph") => Some(false),
            Some(_) => return Err(bad()),
        };
        Ok(XSpec { order, graph })
    }
}

impl fmt::Display for XSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.graph {
            None => write!(f, "{}", self.order),
            Some(true) => write!(f, "{},graph", self.order),
            Some(false) => write!(f, "{},nograph", self.order),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum XFilter {
    #[default]
    All,
    Only(Vec<XSpec>),
}

impl XFilter {
    fn admits(&self, d: &OuterDescriptor) -> bool {
        match self {
            XFilter::All => true,
            XFilter::Only(specs) => specs.iter().any(|s| s.matches(d)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Options {
    /// Treat externally assumed verdicts as undecided.
    pub strict: bool,
    pub kernel_strip: KernelStrip,
    pub execution: Execution,
    pub max_n: u32,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            strict: false,
            kernel_strip: KernelStrip::Small,
            execution: Execution::default(),
            max_n: DEFAULT_MAX_N,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Pipeline {
    subfield: SuborbitTable,
    ree: SuborbitTable,
    pub options: Options,
}

impl Default for Pipeline {
    fn default() -> Self {
        Pipeline::with_tables(
            SuborbitTable::build(FamilyKind::Subfield),
            SuborbitTable::build(FamilyKind::Ree),
        )
    }
}

/// NoDTG needs a well-formed decisive verdict somewhere in the chain.
pub fn conclude(gates: &[GateVerdict], strict: bool) -> Conclusion {
    let decisive = gates.iter().any(|g| {
        g.is_well_formed()
            && match g.outcome {
                Outcome::Excludes => true,
                Outcome::AssumedExternal => !strict,
                _ => false,
            }
    });
    if decisive {
        Conclusion::NoDtg
    } else {
        Conclusion::Undetermined
    }
}

const LAWTHER_TABLES: &str =
    "suborbit lengths of G2(q) on both coset spaces: R. Lawther, Some coset actions in G2(q), Proc. LMS (1990)";
const LAWTHER_MF: &str =
    "multiplicity-free criterion: R. Lawther, Some (almost) multiplicity-free coset actions, LMS Lecture Note Series 165 (1992)";
const VAN_BON_INVOLUTIONS: &str =
    "involution theorems: J. van Bon, On distance-transitive graphs and involutions, Graphs Combin. 7 (1991)";
const LATTICE: &str =
    "subgroups of Out(G2(q)) for even field degree enumerated over a union of two models, not verified";
const BCN: &str =
    "no distance-regular intersection array on 2808 vertices with diameter >= 6: Brouwer, Cohen, Neumaier, Distance-Regular Graphs (1989), ch. 14";
const BHK_CITE: &str =
    "diameter bound d < (8/3) log2(v): Bang, Hiraki, Koolen, Eur. J. Combin. 27 (2006)";
const KERNEL_PREMISE: &str =
    "premise: H acts on every nontrivial suborbit with nontrivial kernel (lengths are proper divisors of |H|)";

fn assumptions_for(gates: &[GateVerdict], lattice_verified: bool) -> Vec<String> {
    let mut out = vec![LAWTHER_TABLES];
    for g in gates {
        match g.name.as_str() {
            MULTIPLICITY_FREE => out.push(LAWTHER_MF),
            INVOLUTION if g.outcome != Outcome::NotApplicable => out.push(VAN_BON_INVOLUTIONS),
            BCN_SMALL_CASE if g.outcome == Outcome::AssumedExternal => out.push(BCN),
            BHK if g.outcome != Outcome::NotApplicable => out.push(BHK_CITE),
            KERNEL_CHAIN if g.outcome != Outcome::NotApplicable => {
                out.push(VAN_BON_INVOLUTIONS);
                out.push(KERNEL_PREMISE);
            }
            _ => {}
        }
    }
    if !lattice_verified {
        out.push(LATTICE);
    }
    let mut seen = std::collections::BTreeSet::new();
    out.into_iter()
        .filter(|a| seen.insert(*a))
        .map(str::to_string)
        .collect()
}

struct Job<'a> {
    params: &'a Params,
    table: &'a ConcreteTable,
    x: OuterDescriptor,
    lattice_verified: bool,
}

impl Pipeline {
    pub fn with_tables(subfield: SuborbitTable, ree: SuborbitTable) -> Self {
        assert_eq!(subfield.kind(), FamilyKind::Subfield);
        assert_eq!(ree.kind(), FamilyKind::Ree);
        Pipeline {
            subfield,
            ree,
            options: Options::default(),
        }
    }

    pub fn with_options(mut self, options: Options) -> Self {
        self.options = options;
        self
    }

    pub fn table(&self, case: Case) -> &SuborbitTable {
        match case {
            FamilyKind::Subfield => &self.subfield,
            FamilyKind::Ree => &self.ree,
        }
    }

    pub fn table_mut(&mut self, case: Case) -> &mut SuborbitTable {
        match case {
            FamilyKind::Subfield => &mut self.subfield,
            FamilyKind::Ree => &mut self.ree,
        }
    }

    /// Instantiates and checks the table, aborting on any inconsistency.
    fn checked_table(&self, case: Case, n: u32) -> Result<(Params, ConcreteTable)> {
        let table = self.table(case);
        let params = table.family.params(n)?;
        let (ct, check) = check_table(table, &params)?;
        if !check.ok() {
            return Err(Error::Transcription {
                row: check.non_dividing_rows.join(", "),
                reason: format!(
                    "{} table at {}={}: mass residual {}, rows not dividing |H|: [{}], trivial rows {}",
                    case,
                    case.param_name(),
                    params.param(),
                    check.mass.residual,
                    check.non_dividing_rows.join(", "),
                    check.trivial_rows
                ),
            });
        }
        Ok((params, ct))
    }

    fn range_ok(&self, case: Case, range: &RangeInclusive<u32>) -> Result<()> {
        if range.is_empty() {
            return Ok(());
        }
        if *range.start() < case.min_n() {
            return Err(Error::Inadmissible {
                family: case.name(),
                param: format!("n = {}", range.start()),
                reason: format!("n must be at least {}", case.min_n()),
            });
        }
        if *range.end() > self.options.max_n {
            return Err(Error::Usage(format!(
                "n = {} exceeds the cap {}; raise it explicitly to go further",
                range.end(),
                self.options.max_n
            )));
        }
        Ok(())
    }

    pub fn analyze(&self, case: Case, range: RangeInclusive<u32>, x: &XFilter) -> Result<RunReport> {
        self.range_ok(case, &range)?;
        let ns: Vec<u32> = range.clone().collect();
        let tables = map_ordered(self.options.execution, &ns, |&n| self.checked_table(case, n))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;

        let mut jobs = Vec::new();
        let mut matched = vec![false; if let XFilter::Only(s) = x { s.len() } else { 0 }];
        for (params, ct) in &tables {
            let outer = self.table(case).family.outer_structure(params);
            for d in &outer.descriptors {
                if let XFilter::Only(specs) = x {
                    for (i, s) in specs.iter().enumerate() {
                        matched[i] |= s.matches(d);
                    }
                }
                if x.admits(d) {
                    jobs.push(Job {
                        params,
                        table: ct,
                        x: *d,
                        lattice_verified: outer.lattice_verified,
                    });
                }
            }
        }
        if let XFilter::Only(specs) = x {
            if !ns.is_empty() {
                if let Some(i) = matched.iter().position(|m| !m) {
                    return Err(Error::Usage(format!(
                        "--x {} matches no subgroup of Out(G2(q)) for n in {}..{}",
                        specs[i],
                        range.start(),
                        range.end()
                    )));
                }
            }
        }

        let certs = map_ordered(self.options.execution, &jobs, |j| self.certificate(j));
        let (lo, hi) = range.into_inner();
        Ok(RunReport::new(case, lo, hi, self.options.strict, certs))
    }

    fn certificate(&self, job: &Job<'_>) -> Certificate {
        let Job { params, table: ct, x, lattice_verified } = job;
        let c = FusionConstraint::new(x.order);
        let mut gates = Vec::new();
        match params.kind {
            FamilyKind::Subfield => {
                let mf = multiplicity_free_gate(&params.q, x);
                let excluded = mf.outcome == Outcome::Excludes;
                gates.push(mf);
                if !excluded {
                    gates.push(sigma_in_x_gate(ct, c));
                    let g = self.subfield.family.g_order_at(params);
                    gates.push(involution_gate(ct, c, &g));
                }
            }
            FamilyKind::Ree => {
                if params.n == 0 {
                    gates.push(bcn_small_case_gate(ct, c));
                } else {
                    gates.push(bhk_gate(ct, c));
                    if params.n <= 3 {
                        gates.push(kernel_chain_gate(ct, c, &self.options.kernel_strip));
                    }
                }
            }
        }
        Certificate {
            case: params.kind,
            n: params.n,
            q: params.q.to_string(),
            x_order: x.order,
            x_graph: x.contains_graph_auto,
            conclusion: conclude(&gates, self.options.strict),
            assumptions: assumptions_for(&gates, *lattice_verified),
            gates,
        }
    }

    /// Mass, divisibility, integrality and suborbit-count checks at each
    /// parameter value (`r` for Subfield, `q` for Ree).
    pub fn verify_tables(&self, case: Case, params: &[BigInt], symbolic: bool) -> Result<TableReport> {
        let table = self.table(case);
        let admitted = params
            .iter()
            .map(|p| table.family.admit(p))
            .collect::<Result<Vec<_>>>()?;
        let results = map_ordered(self.options.execution, &admitted, |p| check_table(table, p));
        let mut entries = Vec::new();
        let mut failures = Vec::new();
        for (p, r) in admitted.iter().zip(results) {
            match r {
                Ok((_, check)) => {
                    let e = TableEntry::from(&check);
                    if !e.ok {
                        failures.push(format!(
                            "{}={}: residual {}, rows not dividing |H|: [{}], trivial rows {}",
                            case.param_name(),
                            e.param,
                            e.residual,
                            e.non_dividing_rows.join(", "),
                            check.trivial_rows
                        ));
                    }
                    entries.push(e);
                }
                Err(e) => failures.push(format!("{}={}: {e}", case.param_name(), p.param())),
            }
        }
        let symbolic = symbolic.then(|| SymbolicCheck {
            variable: case.var().to_string(),
            mass: table.mass_polynomial().to_string().replace('t', case.var()),
            index: table.family.index.to_string().replace('t', case.var()),
            holds: table.verify_mass_symbolic(),
        });
        if let Some(s) = &symbolic {
            if !s.holds {
                failures.push(format!("symbolic mass identity fails: {} != {}", s.mass, s.index));
            }
        }
        Ok(TableReport {
            tool_version: TOOL_VERSION.to_string(),
            case,
            entries,
            failures,
            symbolic,
        })
    }

    /// Admissible parameter values of `case` lying in `[lo, hi]`.
    pub fn params_between(&self, case: Case, lo: &BigInt, hi: &BigInt) -> Vec<BigInt> {
        let family = &self.table(case).family;
        let mut out = Vec::new();
        for n in case.min_n().. {
            let p = family.params(n).expect("n >= min_n").param().clone();
            if &p > hi {
                break;
            }
            if &p >= lo {
                out.push(p);
            }
        }
        out
    }
}
