//! Cross-checks the sweep and the condition engine against a separate
//! brute-force classifier written only from the quantified definitions.

use std::collections::BTreeMap;

use pluralism::sweep::{subset_model, verify_laws_sequential};
use pluralism::{classify, enumerate_positions, Space, Taxon};

/// All `m^n` answer rows, first question most significant.
fn rows(n: usize, m: usize) -> Vec<Vec<usize>> {
    (0..m.pow(n as u32))
        .map(|mut v| {
            let mut row = vec![0; n];
            for slot in row.iter_mut().rev() {
                *slot = v % m;
                v /= m;
            }
            row
        })
        .collect()
}

#[derive(Debug, Default, PartialEq, Eq, Clone, Copy)]
struct Counts {
    gm: u64,
    gp: u64,
    lm: u64,
    lp: u64,
    hybrid_pluralist: u64,
    hybrid_localist: u64,
    strict: u64,
}

#[derive(Debug, PartialEq, Eq)]
struct Truth {
    g: bool,
    m: bool,
    weak_g: bool,
    weak_m: bool,
}

fn truth(ps: &[&Vec<usize>], n: usize) -> Truth {
    let uniform = |p: &Vec<usize>| (0..n).all(|y| (0..n).all(|z| p[y] == p[z]));
    let constant = |y: usize| ps.iter().all(|w| ps.iter().all(|x| w[y] == x[y]));
    Truth {
        g: ps.iter().all(|p| uniform(p)),
        m: (0..n).all(constant),
        weak_g: ps.iter().any(|p| uniform(p)),
        weak_m: (0..n).any(constant),
    }
}

fn oracle(n: usize, m: usize) -> Counts {
    let universe = rows(n, m);
    let mut c = Counts::default();
    for mask in 1u64..(1 << universe.len()) {
        let ps: Vec<&Vec<usize>> = universe
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, r)| r)
            .collect();
        let t = truth(&ps, n);
        match (t.g, t.m) {
            (true, true) => c.gm += 1,
            (true, false) => c.gp += 1,
            (false, true) => c.lm += 1,
            (false, false) => {
                c.lp += 1;
                c.hybrid_pluralist += t.weak_m as u64;
                c.hybrid_localist += t.weak_g as u64;
                c.strict += (!t.weak_m && !t.weak_g) as u64;
            }
        }
    }
    c
}

fn counts_from_report(n: usize, m: usize) -> Counts {
    let r = verify_laws_sequential(&Space::with_default_labels(n, m).unwrap()).unwrap();
    assert!(r.is_clean(), "{n}x{m}: {:?}", r.law_violations);
    Counts {
        gm: r.count(Taxon::GlobalMonism),
        gp: r.count(Taxon::GlobalPluralism),
        lm: r.count(Taxon::LocalMonism),
        lp: r.count(Taxon::LocalPluralism),
        hybrid_pluralist: r.flag_counts.hybrid_pluralist,
        hybrid_localist: r.flag_counts.hybrid_localist,
        strict: r.flag_counts.strict,
    }
}

fn frozen() -> BTreeMap<(usize, usize), Counts> {
    let c = |gm, gp, lm, lp, hp, hl, st| Counts {
        gm,
        gp,
        lm,
        lp,
        hybrid_pluralist: hp,
        hybrid_localist: hl,
        strict: st,
    };
    BTreeMap::from([
        ((1, 1), c(1, 0, 0, 0, 0, 0, 0)),
        ((1, 2), c(2, 1, 0, 0, 0, 0, 0)),
        ((1, 3), c(3, 4, 0, 0, 0, 0, 0)),
        ((2, 1), c(1, 0, 0, 0, 0, 0, 0)),
        ((2, 2), c(2, 1, 2, 10, 4, 9, 1)),
        ((2, 3), c(3, 4, 6, 498, 24, 441, 51)),
        ((3, 1), c(1, 0, 0, 0, 0, 0, 0)),
        ((3, 2), c(2, 1, 6, 246, 54, 189, 39)),
    ])
}

#[test]
fn oracle_reproduces_frozen_counts() {
    for (&(n, m), want) in &frozen() {
        assert_eq!(oracle(n, m), *want, "{n}x{m}");
    }
}

#[test]
fn sweep_matches_frozen_counts() {
    for (&(n, m), want) in &frozen() {
        assert_eq!(counts_from_report(n, m), *want, "{n}x{m}");
    }
}

#[test]
fn larger_sweeps_match_oracle() {
    for (n, m) in [(4, 2), (2, 4)] {
        assert_eq!(counts_from_report(n, m), oracle(n, m), "{n}x{m}");
    }
}

#[test]
fn per_model_profiles_match_oracle() {
    for (n, m) in [(3, 2), (2, 3), (2, 2)] {
        let space = Space::with_default_labels(n, m).unwrap();
        let universe = enumerate_positions(&space).unwrap();
        let raw = rows(n, m);
        for mask in 1u64..(1 << universe.len()) {
            let model = subset_model(&space, &universe, mask);
            let ps: Vec<&Vec<usize>> = raw
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, r)| r)
                .collect();
            let want = truth(&ps, n);
            let p = classify(&model).profile;
            assert_eq!(
                Truth {
                    g: p.g,
                    m: p.m,
                    weak_g: p.weak_g,
                    weak_m: p.weak_m
                },
                want,
                "{n}x{m} mask {mask:#b}"
            );
            // m holds exactly for singletons; g exactly when every position is constant
            assert_eq!(p.m, ps.len() == 1);
            assert_eq!(p.g, ps.iter().all(|r| r.iter().all(|&a| a == r[0])));
        }
    }
}

#[test]
fn closed_form_counts() {
    for n in 1..=3usize {
        for m in 1..=3usize {
            if m.pow(n as u32) > 20 {
                continue;
            }
            let c = counts_from_report(n, m);
            assert_eq!(c.gm, m as u64);
            assert_eq!(c.gp, (1u64 << m) - m as u64 - 1);
            assert_eq!(c.gm + c.lm, m.pow(n as u32) as u64);
        }
    }
}
