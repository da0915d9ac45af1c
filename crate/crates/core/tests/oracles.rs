//! Brute-force oracles for the exhaustive counters.

use orthocyc::numtheory::prime_powers;
use orthocyc::search;
use orthocyc::{Elem, FieldCtx};

/// Orthomorphisms of `F_q` by running over all `q!` permutations.
fn brute_orthomorphisms(f: &FieldCtx) -> u128 {
    let q = f.order() as usize;
    let mut perm: Vec<usize> = (0..q).collect();
    let mut count = 0;
    // Heap's algorithm
    let mut c = vec![0usize; q];
    let mut check = |p: &[usize]| {
        let mut seen = vec![false; q];
        let ok = f.elements().all(|x| {
            let d = f.sub(Elem(p[x.idx()] as u32), x);
            !std::mem::replace(&mut seen[d.idx()], true)
        });
        if ok {
            count += 1;
        }
    };
    check(&perm);
    let mut i = 0;
    while i < q {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            check(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    count
}

#[test]
fn orthomorphism_totals_match_brute_force() {
    for q in prime_powers(2, 8) {
        let f = FieldCtx::new(q).unwrap();
        let got = search::count_orthomorphisms(&f, search::DEFAULT_BUDGET).unwrap();
        assert_eq!(got, brute_orthomorphisms(&f), "q={q}");
    }
}

#[test]
fn tiny_budget_gives_up() {
    let f = FieldCtx::new(13).unwrap();
    assert_eq!(search::count_orthomorphisms(&f, 10), None);
}
