//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde_json::Value;

use g2dtg::arith::{cyclic_order, factorize, ParamPoly};
use g2dtg::filters::{
    bhk_gate, kernel_prime_data, order4_witness, KernelStrip, Outcome, BCN_SMALL_CASE, BHK, INVOLUTION,
    KERNEL_CHAIN, MULTIPLICITY_FREE, SIGMA_IN_X,
};
use g2dtg::fusion::{smallest_fused_candidates, FusionConstraint};
use g2dtg::group_data::FamilyKind;
use g2dtg::pipeline::{conclude, Case, Pipeline, XFilter};
use g2dtg::report::Conclusion;
use g2dtg::tables::{ConcreteTable, SuborbitTable, TorusBase, ZOrder};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))
}

fn big(v: u64) -> BigInt {
    BigInt::from(v)
}

fn concrete(kind: FamilyKind, n: u32) -> ConcreteTable {
    let t = SuborbitTable::build(kind);
    t.instantiate(&t.family.params(n).unwrap()).unwrap()
}

fn ree_index(q: &BigInt) -> BigInt {
    let q3 = q.pow(3u32);
    &q3 * (&q3 - 1) * (q + 1)
}

fn subfield_index(r: &BigInt) -> BigInt {
    let r6 = r.pow(6u32);
    &r6 * (&r6 + 1) * (r * r + 1)
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let p = Pipeline::default();
    let cases: [(Case, [u64; 4], fn(&BigInt) -> BigInt); 2] = [
        (Case::Ree, [3, 27, 243, 2187], ree_index),
        (Case::Subfield, [3, 9, 27, 81], subfield_index),
    ];
    for (case, values, oracle) in cases {
        let values = values.map(big);
        let report = p.verify_tables(case, &values, false).map_err(|e| e.to_string())?;
        ensure(report.ok(), || format!("{case}: {:?}", report.failures))?;
        let table = p.table(case);
        for (v, e) in values.iter().zip(&report.entries) {
            let expected = oracle(v);
            ensure(e.total == expected.to_string(), || format!("{case} {v}: total {} != {expected}", e.total))?;
            // row-by-row summation straight from the instantiated table
            let ct = table.instantiate(&table.family.admit(v).unwrap()).unwrap();
            let sum: BigInt = ct.rows.iter().map(|r| &r.length * &r.count).sum();
            ensure(sum == expected, || format!("{case} {v}: row sum {sum} != {expected}"))?;
        }
    }
    let q3 = p.verify_tables(Case::Ree, &[big(3)], false).unwrap();
    ensure(q3.entries[0].total == "2808", || "q = 3 total is not 2808".into())?;
    let r3 = p.verify_tables(Case::Subfield, &[big(3)], false).unwrap();
    ensure(r3.entries[0].total == "5321700", || "r = 3 total is not 5321700".into())?;
    within(start, Duration::from_secs(1))?;
    Ok("ree totals 2808, 10847222568, ...; subfield 5321700, ...".into())
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let m = ParamPoly::var();
    let q = (&m * &m).scale(&BigRational::from_integer(big(3)));
    let q3 = q.pow(3);
    let ree = &(&q3 * &(&q3 - &ParamPoly::one())) * &(&q + &ParamPoly::one());
    let r = ParamPoly::var();
    let r6 = r.pow(6);
    let sub = &(&r6 * &(&r6 + &ParamPoly::one())) * &(&r.pow(2) + &ParamPoly::one());

    for (kind, index) in [(FamilyKind::Ree, ree), (FamilyKind::Subfield, sub)] {
        let table = SuborbitTable::build(kind);
        ensure(table.verify_mass_symbolic(), || format!("{kind}: symbolic identity fails"))?;
        ensure(table.mass_polynomial() == index, || format!("{kind}: mass != independent index"))?;
        // pointwise, with plain integers, away from admissible values
        for t in -20i64..=20 {
            let tv = big(t.unsigned_abs()) * if t < 0 { -1 } else { 1 };
            let direct = match kind {
                FamilyKind::Ree => ree_index(&(3 * &tv * &tv)),
                FamilyKind::Subfield => subfield_index(&tv),
            };
            let mass = table.mass_polynomial().eval(&tv);
            ensure(mass == BigRational::from_integer(direct), || format!("{kind}: mass differs at {t}"))?;
        }
    }
    within(start, Duration::from_secs(1))?;
    Ok("mass polynomial equals the coset index in m (ree) and r (subfield)".into())
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let expect = [(1, 19u64, 37u64), (2, 31, 271), (3, 43, 2269)];
    for (n, pm, pp) in expect {
        let d = kernel_prime_data(&concrete(FamilyKind::Ree, n), &KernelStrip::Small).map_err(|e| e.to_string())?;
        ensure(d.p_minus == [BigUint::from(pm)] && d.p_plus == [BigUint::from(pp)], || {
            format!("n = {n}: got {:?} / {:?}", d.p_minus, d.p_plus)
        })?;
    }
    for (v, shown) in [(217u64, "7 * 31"), (2107, "7^2 * 43")] {
        let f = factorize(&big(v)).map_err(|e| e.to_string())?;
        ensure(f.to_string() == shown && f.product() == BigUint::from(v), || format!("{v} = {f}"))?;
    }
    within(start, Duration::from_secs(1))?;
    Ok("(19, 37), (31, 271), (43, 2269); 217 = 7 * 31, 2107 = 7^2 * 43".into())
}

fn criterion_4() -> Check {
    let start = Instant::now();
    for n in 1..=8u32 {
        let ct = concrete(FamilyKind::Ree, n);
        let v = bhk_gate(&ct, FusionConstraint::new(2 * (2 * n + 1)));
        let want = if n >= 4 { Outcome::Excludes } else { Outcome::Inconclusive };
        ensure(v.outcome == want, || format!("n = {n}: {} ({:?})", v.outcome, v.witness("inequality")))?;
    }
    within(start, Duration::from_secs(5))?;
    Ok("Excludes for n = 4..8, Inconclusive for n = 1..3".into())
}

fn criterion_5() -> Check {
    let want: BTreeSet<&str> = ["x_{3a+2b}(1)", "x_{2a+b}(1)", "x_{2a+b}(1)x_{3a+2b}(1)"].into();
    for n in 1..=8u32 {
        let ct = concrete(FamilyKind::Subfield, n);
        for x in [1, 2, 4, 2 * n, 4 * n] {
            let c = smallest_fused_candidates(&ct, FusionConstraint::new(x));
            let labels: BTreeSet<&str> = c.rows.iter().map(|id| ct.row(id).unwrap().label.as_str()).collect();
            ensure(labels == want && c.is_sound(), || format!("subfield n = {n}, |X| = {x}: {labels:?}"))?;
        }
    }
    for n in 1..=8u32 {
        let ct = concrete(FamilyKind::Ree, n);
        let q = &ct.params.q;
        let want: BTreeSet<BigInt> = [(q.pow(3u32) + 1) * (q - 1), q * q * (q * q - q + 1)].into();
        for x in [1, 2, 2 * n + 1, 2 * (2 * n + 1)] {
            let c = smallest_fused_candidates(&ct, FusionConstraint::new(x));
            let got: BTreeSet<BigInt> = c.lengths.iter().cloned().collect();
            let rows: BTreeSet<BigInt> = c.rows.iter().map(|id| ct.row(id).unwrap().length.clone()).collect();
            ensure(got == want && rows == want && c.is_sound(), || format!("ree n = {n}, |X| = {x}: {got:?}"))?;
        }
    }
    Ok("subfield unipotent triple and ree lengths {(q^3+1)(q-1), q^2(q^2-q+1)} for n = 1..8".into())
}

fn criterion_6() -> Check {
    for n in 1..=10u32 {
        let ct = concrete(FamilyKind::Subfield, n);
        let r = &ct.params.t;
        let w = order4_witness(r, &ct).map_err(|e| format!("n = {n}: {e}"))?;
        ensure(cyclic_order(&w.base_order, &w.exponent) == big(4), || format!("n = {n}: {w}"))?;
        // the base order is an independent torus order
        let base = match w.torus_base {
            TorusBase::Gamma => r - 1,
            TorusBase::Eta => r + 1,
            other => return Err(format!("n = {n}: unexpected base {other:?}")),
        };
        ensure(w.base_order == base, || format!("n = {n}: base order {} != {base}", w.base_order))?;
        if n == 1 {
            ensure(w.torus_base != TorusBase::Gamma, || "gamma chosen at r = 3".into())?;
            let gamma_rows = ct
                .rows
                .iter()
                .filter(|row| row.z_order == ZOrder::TorusPower(TorusBase::Gamma))
                .count();
            ensure(gamma_rows == 0, || format!("{gamma_rows} gamma rows present at r = 3"))?;
        }
    }
    Ok("order 4 for r = 3^n, n = 1..10; eta at r = 3".into())
}

fn run_cli(args: &[&str]) -> Result<(i32, Value), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_g2dtg"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    let code = out.status.code().unwrap_or(-1);
    let v = serde_json::from_slice(&out.stdout).map_err(|e| format!("{args:?}: {e}"))?;
    Ok((code, v))
}

fn criterion_7() -> Check {
    let start = Instant::now();
    let (code, sub) = run_cli(&["analyze", "--case", "subfield", "--n", "1..3", "--x", "all"])?;
    ensure(code == 0, || format!("subfield exit {code}"))?;
    let (code, ree) = run_cli(&["analyze", "--case", "ree", "--n", "0..6", "--x", "all"])?;
    ensure(code == 0, || format!("ree exit {code}"))?;
    within(start, Duration::from_secs(10))?;

    let mut total = 0;
    for (v, is_ree) in [(&sub, false), (&ree, true)] {
        for c in v["certificates"].as_array().unwrap() {
            total += 1;
            ensure(c["conclusion"] == "no_dtg", || format!("{c}"))?;
            let names: Vec<&str> = c["gates"].as_array().unwrap().iter().map(|g| g["name"].as_str().unwrap()).collect();
            let n = c["n"].as_u64().unwrap();
            let expected: &[&str] = match (is_ree, n, c["x_graph"].as_bool().unwrap()) {
                (false, _, false) => &[MULTIPLICITY_FREE],
                (false, _, true) => &[MULTIPLICITY_FREE, SIGMA_IN_X, INVOLUTION],
                (true, 0, _) => &[BCN_SMALL_CASE],
                (true, 1..=3, _) => &[BHK, KERNEL_CHAIN],
                (true, _, _) => &[BHK],
            };
            ensure(names == expected, || format!("n = {n}: gates {names:?}"))?;
            let assumed = c["gates"]
                .as_array()
                .unwrap()
                .iter()
                .filter(|g| g["verdict"] == "assumed_external")
                .count();
            let want = usize::from(is_ree && n == 0);
            ensure(assumed == want, || format!("n = {n}: {assumed} assumed_external gates"))?;
        }
    }
    Ok(format!("{total} certificates, all no_dtg, exit 0"))
}

fn mutate(p: &ParamPoly, k: usize) -> ParamPoly {
    let mut c = p.coeffs().to_vec();
    if c.len() <= k {
        c.resize(k + 1, BigRational::from_integer(big(0)));
    }
    c[k] += BigRational::one();
    ParamPoly::from_coeffs(c)
}

fn criterion_8() -> Check {
    // every single-coefficient mutation is caught by the numeric checks alone
    let params = [
        (Case::Ree, [3u64, 27, 243, 2187]),
        (Case::Subfield, [3, 9, 27, 81]),
    ];
    let mut mutations = 0;
    for (case, values) in params {
        let values = values.map(big);
        let base = SuborbitTable::build(case);
        for (i, row) in base.rows.iter().enumerate() {
            for which in 0..2 {
                let poly = if which == 0 { &row.length } else { &row.count };
                for k in 0..=poly.degree().unwrap_or(0) {
                    let mut t = base.clone();
                    let target = &mut t.rows[i];
                    if which == 0 {
                        target.length = mutate(&target.length, k);
                    } else {
                        target.count = mutate(&target.count, k);
                    }
                    let p = match case {
                        FamilyKind::Ree => Pipeline::with_tables(SuborbitTable::build(FamilyKind::Subfield), t),
                        FamilyKind::Subfield => Pipeline::with_tables(t, SuborbitTable::build(FamilyKind::Ree)),
                    };
                    let report = p.verify_tables(case, &values, false).map_err(|e| e.to_string())?;
                    mutations += 1;
                    ensure(!report.ok(), || format!("{case} row {} poly {which} coeff {k} not caught", row.id))?;
                    let sym = p.verify_tables(case, &values[..1], true).unwrap();
                    ensure(sym.symbolic.as_ref().is_some_and(|s| !s.holds), || {
                        format!("{case} row {} symbolic check missed", row.id)
                    })?;
                }
            }
        }
    }

    // weakened witnesses never yield no_dtg
    for (case, lo, hi) in [(Case::Subfield, 1, 3), (Case::Ree, 0, 6)] {
        let r = Pipeline::default().analyze(case, lo..=hi, &XFilter::All).unwrap();
        for c in &r.certificates {
            for i in 0..c.gates.len() {
                let mut weak = c.gates.clone();
                weak[i].witnesses.clear();
                let mut dropped = c.gates.clone();
                dropped[i].outcome = Outcome::Inconclusive;
                let decisive = c.gates.iter().filter(|g| matches!(g.outcome, Outcome::Excludes | Outcome::AssumedExternal)).count();
                if decisive == 1 && matches!(c.gates[i].outcome, Outcome::Excludes | Outcome::AssumedExternal) {
                    ensure(conclude(&weak, false) == Conclusion::Undetermined, || format!("{case} n = {}: witnessless gate accepted", c.n))?;
                    ensure(conclude(&dropped, false) == Conclusion::Undetermined, || format!("{case} n = {}", c.n))?;
                }
            }
        }
    }

    let mut p = Pipeline::default();
    p.table_mut(Case::Subfield).rows.iter_mut().find(|r| r.z.label == "x_{2a+b}(1)").unwrap().z.order = ZOrder::Two;
    let r = p.analyze(Case::Subfield, 2..=2, &XFilter::All).unwrap();
    ensure(!r.all_no_dtg(), || "mutated class order still excluded".into())?;

    for args in [
        &["analyze", "--case", "ree", "--n", "0", "--strict"][..],
        &["analyze", "--case", "ree", "--n", "1..3", "--kernel-strip", "2,3,5,7,19,31,43"][..],
    ] {
        let (code, v) = run_cli(args)?;
        ensure(code == 2, || format!("{args:?}: exit {code}"))?;
        ensure(v["summary"]["undetermined"].as_u64().unwrap() > 0, || format!("{args:?}"))?;
    }
    Ok(format!("{mutations} coefficient mutations caught; weakened gates give undetermined, exit 2"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("mass identities", criterion_1),
        ("symbolic mass identities", criterion_2),
        ("kernel primes", criterion_3),
        ("bhk cutoff", criterion_4),
        ("gamma_1 candidates", criterion_5),
        ("order-4 witnesses", criterion_6),
        ("end-to-end cli", criterion_7),
        ("fault injection", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
