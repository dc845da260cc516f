//! Fusion of suborbits under an outer subgroup `X`.
//!
//! Only suborbits of equal length can fuse, and at most `|X|` of them into
//! one orbit of `G:X`. Everything here is a bound or a candidate set that
//! holds for every fusion pattern compatible with those two rules.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::arith::BigRational;
use crate::error::{Error, Result};
use crate::group_data::FamilyKind;
use crate::tables::ConcreteTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FusionConstraint {
    x_order: u32,
}

impl FusionConstraint {
    pub fn new(x_order: u32) -> Self {
        assert!(x_order >= 1, "|X| must be positive");
        FusionConstraint { x_order }
    }

    pub fn x_order(&self) -> u32 {
        self.x_order
    }
}

/// All nontrivial suborbits of one length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthGroup {
    pub length: BigInt,
    pub multiplicity: BigInt,
    pub rows: Vec<String>,
}

/// Nontrivial rows grouped by exact length, shortest first.
pub fn length_groups(ct: &ConcreteTable) -> Vec<LengthGroup> {
    let mut by_len: BTreeMap<&BigInt, LengthGroup> = BTreeMap::new();
    for r in ct.nontrivial_rows() {
        let g = by_len.entry(&r.length).or_insert_with(|| LengthGroup {
            length: r.length.clone(),
            multiplicity: BigInt::zero(),
            rows: Vec::new(),
        });
        g.multiplicity += &r.count;
        g.rows.push(r.id.clone());
    }
    by_len.into_values().collect()
}

/// Fewest nontrivial `G:X`-orbits any admissible fusion can leave:
/// `sum(ceil(multiplicity / |X|))`. A distance-transitive graph has one
/// orbit per distance, so this bounds the diameter from below.
pub fn min_fused_classes(groups: &[LengthGroup], c: FusionConstraint) -> BigInt {
    let x = BigInt::from(c.x_order);
    groups.iter().map(|g| g.multiplicity.div_ceil(&x)).sum()
}

/// The coarser bound `(q + 6) / |X|`, kept next to the refined one.
pub fn coarse_diameter_bound(ct: &ConcreteTable, c: FusionConstraint) -> Result<BigRational> {
    if ct.kind() != FamilyKind::Ree {
        return Err(Error::Usage("the (q+6)/|X| bound is stated for the Ree family only".into()));
    }
    Ok(BigRational::new(&ct.params.q + 6, c.x_order.into()))
}

/// At least three distinct nontrivial lengths force at least three
/// nontrivial orbits whatever `X` is, so the diameter is at least 3.
pub fn excludes_diameter_two(ct: &ConcreteTable) -> bool {
    ct.distinct_nontrivial_lengths().len() >= 3
}

/// Rows that can make up an orbit among the two smallest after fusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusedCandidates {
    /// Row ids whose length is one of the two smallest nontrivial lengths.
    pub rows: Vec<String>,
    /// Those (at most two) lengths.
    pub lengths: Vec<BigInt>,
    /// Upper bound on the second smallest orbit length.
    pub second_orbit_bound: Option<BigInt>,
    /// The third smallest distinct length, if any.
    pub next_length: Option<BigInt>,
}

impl FusedCandidates {
    /// The candidate set is complete when every orbit built from longer rows
    /// is strictly longer than two orbits that certainly exist.
    pub fn is_sound(&self) -> bool {
        match (&self.second_orbit_bound, &self.next_length) {
            (Some(b), Some(next)) => next > b,
            _ => true,
        }
    }
}

/// Candidates for the first (or last) sphere: rows of the two smallest
/// lengths `l1 < l2`.
///
/// Some orbit built from `l1`-rows has length at most `min(m1, |X|) * l1`
/// and some orbit built from `l2`-rows at most `min(m2, |X|) * l2`, so the
/// second smallest orbit is no longer than the larger of the two. If the
/// third length exceeds that, no other row can reach the two smallest
/// orbits; [`FusedCandidates::is_sound`] reports whether this holds.
pub fn smallest_fused_candidates(ct: &ConcreteTable, c: FusionConstraint) -> FusedCandidates {
    let groups = length_groups(ct);
    let x = BigInt::from(c.x_order);
    let chosen = &groups[..groups.len().min(2)];
    let second_orbit_bound = (chosen.len() == 2).then(|| {
        chosen
            .iter()
            .map(|g| g.multiplicity.clone().min(x.clone()) * &g.length)
            .max()
            .unwrap()
    });
    FusedCandidates {
        rows: chosen.iter().flat_map(|g| g.rows.iter().cloned()).collect(),
        lengths: chosen.iter().map(|g| g.length.clone()).collect(),
        second_orbit_bound,
        next_length: groups.get(2).map(|g| g.length.clone()),
    }
}

/// Result of enumerating every fusion pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionEnumeration {
    pub patterns: u64,
    pub min_classes: u64,
    /// Rows that lie in an orbit among the two smallest for some pattern.
    pub rows_in_two_smallest: BTreeSet<String>,
}

/// Exhaustive cross-check over all ways to split each length group into
/// orbits of at most `|X|` suborbits. Returns `None` above `max_suborbits`
/// nontrivial suborbits.
pub fn enumerate_fusions(
    ct: &ConcreteTable,
    c: FusionConstraint,
    max_suborbits: u64,
) -> Option<FusionEnumeration> {
    let groups = length_groups(ct);
    let mults: Vec<u64> = groups
        .iter()
        .map(|g| g.multiplicity.to_u64())
        .collect::<Option<_>>()?;
    if mults.iter().sum::<u64>() > max_suborbits {
        return None;
    }
    let x = c.x_order as u64;
    let per_group: Vec<Vec<Vec<u64>>> = mults.iter().map(|&m| partitions(m, x)).collect();

    let mut out = FusionEnumeration {
        patterns: 0,
        min_classes: u64::MAX,
        rows_in_two_smallest: BTreeSet::new(),
    };
    let mut choice = vec![0usize; groups.len()];
    loop {
        let mut orbits: Vec<(BigInt, usize)> = Vec::new();
        for (gi, &ci) in choice.iter().enumerate() {
            for &part in &per_group[gi][ci] {
                orbits.push((&groups[gi].length * part, gi));
            }
        }
        out.patterns += 1;
        out.min_classes = out.min_classes.min(orbits.len() as u64);
        orbits.sort();
        if let Some(second) = orbits.get(1).or(orbits.first()).map(|o| o.0.clone()) {
            for (len, gi) in &orbits {
                if *len <= second {
                    out.rows_in_two_smallest.extend(groups[*gi].rows.iter().cloned());
                }
            }
        }

        // odometer over the per-group partition choices
        let mut k = 0;
        loop {
            if k == choice.len() {
                if out.patterns == 0 || groups.is_empty() {
                    out.min_classes = 0;
                }
                return Some(out);
            }
            choice[k] += 1;
            if choice[k] < per_group[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Partitions of `n` into parts of size at most `max_part`.
fn partitions(n: u64, max_part: u64) -> Vec<Vec<u64>> {
    fn go(n: u64, cap: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=cap.min(n)).rev() {
            cur.push(p);
            go(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, max_part, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, ratio};
    use crate::group_data::CaseFamily;
    use crate::tables::{ConcreteRow, SuborbitTable, ZOrder};

    fn concrete(kind: FamilyKind, param: i64) -> ConcreteTable {
        let t = SuborbitTable::build(kind);
        t.instantiate(&t.family.admit(&int(param)).unwrap()).unwrap()
    }

    fn synthetic(lengths: &[(i64, i64)]) -> ConcreteTable {
        let mut ct = concrete(FamilyKind::Ree, 3);
        ct.rows.truncate(1);
        for (k, &(len, count)) in lengths.iter().enumerate() {
            ct.rows.push(ConcreteRow {
                id: format!("X{k}"),
                label: format!("x{k}"),
                z_order: ZOrder::Unknown,
                length: int(len),
                count: int(count),
            });
        }
        ct
    }

    fn groups_as_pairs(gs: &[LengthGroup]) -> Vec<(BigInt, BigInt)> {
        gs.iter().map(|g| (g.length.clone(), g.multiplicity.clone())).collect()
    }

    #[test]
    fn length_groups_ree_q3() {
        let gs = length_groups(&concrete(FamilyKind::Ree, 3));
        let expected = [(56, 1), (63, 1), (84, 2), (252, 2), (504, 1), (1512, 1)];
        assert_eq!(groups_as_pairs(&gs), expected.map(|(a, b)| (int(a), int(b))).to_vec());
    }

    #[test]
    fn length_groups_subfield_r3_theta_pair() {
        let gs = length_groups(&concrete(FamilyKind::Subfield, 3));
        let theta = gs.iter().find(|g| g.length == int(530712)).unwrap();
        assert_eq!(theta.multiplicity, int(2));
        assert_eq!(theta.rows.len(), 2);
    }

    #[test]
    fn all_distinct_lengths_have_multiplicity_one() {
        let gs = length_groups(&synthetic(&[(5, 1), (7, 1), (9, 1)]));
        assert!(gs.iter().all(|g| g.multiplicity == int(1)));
    }

    #[test]
    fn min_fused_classes_examples() {
        let gs = length_groups(&concrete(FamilyKind::Ree, 3));
        assert_eq!(min_fused_classes(&gs, FusionConstraint::new(2)), int(6));
        assert_eq!(min_fused_classes(&gs, FusionConstraint::new(1)), int(8));

        let gs = length_groups(&concrete(FamilyKind::Ree, 27));
        let total: BigInt = gs.iter().map(|g| &g.multiplicity).sum();
        assert_eq!(total, int(32));
        let six = min_fused_classes(&gs, FusionConstraint::new(6));
        assert!(six >= int(6));
        assert_eq!(six, int(10));
    }

    #[test]
    fn min_fused_classes_monotone_and_bounded() {
        for (kind, p) in [(FamilyKind::Ree, 27), (FamilyKind::Ree, 243), (FamilyKind::Subfield, 9)] {
            let gs = length_groups(&concrete(kind, p));
            let total: BigInt = gs.iter().map(|g| &g.multiplicity).sum();
            let mut prev = min_fused_classes(&gs, FusionConstraint::new(1));
            assert_eq!(prev, total);
            for x in 2..=40u32 {
                let cur = min_fused_classes(&gs, FusionConstraint::new(x));
                assert!(cur <= prev);
                assert!(cur >= total.div_ceil(&BigInt::from(x)));
                prev = cur;
            }
        }
    }

    #[test]
    fn refined_bound_vs_coarse_bound() {
        let ree = SuborbitTable::build(FamilyKind::Ree);
        for n in 1..=3 {
            let p = ree.family.params(n).unwrap();
            let ct = ree.instantiate(&p).unwrap();
            let gs = length_groups(&ct);
            for x in ree.family.outer_structure(&p).orders() {
                let c = FusionConstraint::new(x);
                let refined = min_fused_classes(&gs, c);
                let xb = BigInt::from(x);
                assert!(refined >= (&p.q + 5u32).div_ceil(&xb));
                let coarse = coarse_diameter_bound(&ct, c).unwrap();
                assert!(BigRational::from_integer(refined) >= coarse - BigRational::from_integer(int(1)));
            }
        }
    }

    #[test]
    fn coarse_bound_examples() {
        let ct = concrete(FamilyKind::Ree, 27);
        assert_eq!(coarse_diameter_bound(&ct, FusionConstraint::new(6)).unwrap(), ratio(33, 6));
        let ct = concrete(FamilyKind::Ree, 3);
        assert_eq!(coarse_diameter_bound(&ct, FusionConstraint::new(2)).unwrap(), ratio(9, 2));
        let ct = concrete(FamilyKind::Ree, 19683);
        assert_eq!(coarse_diameter_bound(&ct, FusionConstraint::new(18)).unwrap(), ratio(19689, 18));
        let sub = concrete(FamilyKind::Subfield, 3);
        assert!(coarse_diameter_bound(&sub, FusionConstraint::new(2)).is_err());
    }

    #[test]
    fn diameter_two_exclusion() {
        assert!(excludes_diameter_two(&concrete(FamilyKind::Subfield, 3)));
        assert!(excludes_diameter_two(&concrete(FamilyKind::Subfield, 9)));
        assert!(!excludes_diameter_two(&synthetic(&[(5, 3), (7, 1)])));
    }

    #[test]
    fn candidates_subfield() {
        for r in [3, 9, 27, 81] {
            let ct = concrete(FamilyKind::Subfield, r);
            for x in [1, 2, 4, 8] {
                let cand = smallest_fused_candidates(&ct, FusionConstraint::new(x));
                assert_eq!(cand.rows, ["S02", "S03", "S04"], "r={r}");
                assert!(cand.is_sound());
            }
        }
    }

    #[test]
    fn candidates_ree() {
        let ct = concrete(FamilyKind::Ree, 27);
        let cand = smallest_fused_candidates(&ct, FusionConstraint::new(6));
        let q = int(27);
        let l1 = (q.pow(3) + 1) * (&q - 1);
        let l2 = &q * &q * (&q * &q - &q + 1);
        assert_eq!(cand.lengths, vec![l1, l2]);
        assert_eq!(cand.rows, ["R02", "R06"]);
        assert!(cand.is_sound());
    }

    #[test]
    fn candidates_single_length() {
        let cand = smallest_fused_candidates(&synthetic(&[(5, 3)]), FusionConstraint::new(2));
        assert_eq!(cand.rows, ["X0"]);
        assert!(cand.is_sound());
    }

    #[test]
    fn candidates_can_be_unsound() {
        // three copies of 10 may fuse into 30 > 25
        let ct = synthetic(&[(10, 3), (20, 1), (25, 1)]);
        let cand = smallest_fused_candidates(&ct, FusionConstraint::new(3));
        assert!(!cand.is_sound());
        let brute = enumerate_fusions(&ct, FusionConstraint::new(3), 40).unwrap();
        assert!(brute.rows_in_two_smallest.contains("X2"));
    }

    #[test]
    fn candidates_scale_invariant() {
        let base = [(10, 2), (14, 1), (30, 3), (31, 1)];
        let a = smallest_fused_candidates(&synthetic(&base), FusionConstraint::new(2));
        for k in [2, 7, 1000] {
            let scaled: Vec<_> = base.iter().map(|&(l, c)| (l * k, c)).collect();
            let b = smallest_fused_candidates(&synthetic(&scaled), FusionConstraint::new(2));
            assert_eq!(a.rows, b.rows);
            assert_eq!(a.is_sound(), b.is_sound());
        }
    }

    #[test]
    fn enumeration_agrees_with_closed_forms() {
        for (kind, p) in [(FamilyKind::Ree, 3), (FamilyKind::Ree, 27), (FamilyKind::Subfield, 3)] {
            let ct = concrete(kind, p);
            let fam = CaseFamily::new(kind);
            for x in fam.outer_structure(&ct.params).orders() {
                let c = FusionConstraint::new(x);
                let brute = enumerate_fusions(&ct, c, 40).unwrap();
                assert_eq!(int(brute.min_classes), min_fused_classes(&length_groups(&ct), c));
                let cand = smallest_fused_candidates(&ct, c);
                assert!(cand.is_sound());
                let expected: BTreeSet<String> = cand.rows.iter().cloned().collect();
                assert!(brute.rows_in_two_smallest.is_subset(&expected), "{kind} {p} |X|={x}");
            }
        }
    }

    #[test]
    fn candidates_over_approximate_without_fusion() {
        // with |X| = 1 the two copies of r^6 - 1 are already the two smallest
        let ct = concrete(FamilyKind::Subfield, 3);
        let brute = enumerate_fusions(&ct, FusionConstraint::new(1), 40).unwrap();
        let got: Vec<_> = brute.rows_in_two_smallest.iter().map(String::as_str).collect();
        assert_eq!(got, ["S02", "S03"]);
        assert_eq!(brute.patterns, 1);
    }

    #[test]
    fn enumeration_respects_size_cap() {
        let ct = concrete(FamilyKind::Subfield, 9);
        assert!(enumerate_fusions(&ct, FusionConstraint::new(2), 40).is_none());
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(12, 6).len(), 58);
        assert_eq!(partitions(4, 1).len(), 1);
        assert_eq!(partitions(5, 5).len(), 7);
        assert_eq!(partitions(0, 3), vec![Vec::<u64>::new()]);
    }
}
