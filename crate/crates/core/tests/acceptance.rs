//! Acceptance run: one line per criterion. The process fails if a criterion
//! fails without its recorded analysis holding.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use abelk::desc::{AbGroupDesc, FreePartDesc};
use abelk::exactla::{compound_matrix, smith_normal_form, IntMatrix};
use abelk::fgab::{FgAbGroup, Multiplicity, TorsionDesc};
use abelk::gallery::{builtin_gallery, default_config, verify_gallery, Status};
use abelk::supernatural::types_equivalent;
use abelk::tower::{GroupElement, Tower};
use abelk::uginv::{check_witness, compare_k1, compare_unitary, ComparisonResult};
use abelk::wedge::{
    k0, k1, lemma_det_oracle, odd_compound, primitive_multiple_oracle, wedge2_divisible, wedge2_type_rank2, KGroupDesc,
};
use common::{naive_divisible, random_matrix, random_nonsingular, random_tower};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
    /// For a failing criterion: whether the recorded explanation of the
    /// failure was confirmed on this run.
    explained: bool,
}

impl Outcome {
    fn check(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into(), explained: false }
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + salt)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn k1_free_ranks() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for m in 1..=6 {
        let got = k1(&AbGroupDesc::free(m)).unwrap();
        if got != KGroupDesc::FreeOfRank(1 << (m - 1)) {
            bad.push(format!("m={m}: {got}"));
        }
    }
    let elapsed = start.elapsed();
    Outcome::check(bad.is_empty() && elapsed < Duration::from_secs(1), format!("{bad:?}, {elapsed:?}"))
}

fn k0_free_ranks() -> Outcome {
    let bad: Vec<String> = (1..=6)
        .filter_map(|m| {
            let got = k0(&AbGroupDesc::free(m)).unwrap();
            (got.rank() != Multiplicity::Finite(1 << (m - 1))).then(|| format!("m={m}: {got}"))
        })
        .collect();
    Outcome::check(bad.is_empty(), format!("m = 1..6, mismatches {bad:?}"))
}

fn low_rank_k1_unchanged() -> Outcome {
    let mut r = rng(3);
    let mut bad = 0;
    for i in 0..50 {
        let rank = 1 + i % 2;
        let t = random_tower(&mut r, rank);
        let free = if rank == 1 { FreePartDesc::Rank1(t.clone()) } else { FreePartDesc::TowerForm(t.clone()) };
        if k1(&AbGroupDesc::torsion_free(free)).unwrap() != KGroupDesc::TowerForm(t) {
            bad += 1;
        }
    }
    Outcome::check(bad == 0, format!("50 towers of rank 1 and 2, {bad} changed"))
}

fn squarefree(m: u64) -> bool {
    prime_factors(m).iter().all(|p| !m.is_multiple_of(p * p))
}

fn coprime_search_matches_wedge() -> Outcome {
    let start = Instant::now();
    let mut r = rng(4);
    let mut mismatches: Vec<(usize, u64)> = Vec::new();
    let mut primitive_mismatches: Vec<u64> = Vec::new();
    let mut unsound = 0;
    for i in 0..200 {
        let t = random_tower(&mut r, 2);
        for m in 2..=60 {
            let wedge = wedge2_divisible(&t, m).unwrap();
            let coprime = lemma_det_oracle(&t, m).unwrap();
            let primitive = primitive_multiple_oracle(&t, m).unwrap();
            if coprime != wedge {
                mismatches.push((i, m));
            }
            if primitive != wedge {
                primitive_mismatches.push(m);
            }
            if (coprime || primitive) && !wedge {
                unsound += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let moduli: BTreeSet<u64> = mismatches.iter().map(|&(_, m)| m).collect();
    let primitive_moduli: BTreeSet<u64> = primitive_mismatches.iter().copied().collect();
    // Both searches only ever miss divisibility: at composite moduli for the
    // coprime search, at moduli with a square factor for the gcd search.
    let explained = unsound == 0
        && moduli.iter().all(|&m| prime_factors(m) != [m])
        && primitive_moduli.iter().all(|&m| !squarefree(m));
    Outcome {
        pass: mismatches.is_empty() && elapsed < Duration::from_secs(60),
        detail: format!(
            "{} mismatches over 200 towers x m in 2..60, all at composite m {:?}; \
             gcd(k1, k2, m) = 1 search misses {} at non-squarefree m {:?}; {} false positives; {:?}",
            mismatches.len(),
            moduli,
            primitive_mismatches.len(),
            primitive_moduli,
            unsound,
            elapsed
        ),
        explained,
    }
}

fn cauchy_binet() -> Outcome {
    let mut r = rng(5);
    let mut checks = 0;
    let mut bad = 0;
    for _ in 0..500 {
        let (m, n, p) = (r.gen_range(1..=6), r.gen_range(1..=6), r.gen_range(1..=6));
        let a = random_matrix(&mut r, m, n);
        let b = random_matrix(&mut r, n, p);
        let ab = a.checked_mul(&b).unwrap();
        for k in 0..=m.min(n).min(p) {
            checks += 1;
            let rhs = compound_matrix(&a, k).unwrap().checked_mul(&compound_matrix(&b, k).unwrap()).unwrap();
            if compound_matrix(&ab, k).unwrap() != rhs {
                bad += 1;
            }
        }
    }
    Outcome::check(bad == 0, format!("500 pairs, {checks} (pair, k) checks, {bad} failures"))
}

fn smith_forms() -> Outcome {
    let mut r = rng(6);
    let mut bad = 0;
    for _ in 0..500 {
        let (rows, cols) = (r.gen_range(1..=8), r.gen_range(1..=8));
        let a = random_matrix(&mut r, rows, cols);
        let snf = smith_normal_form(&a);
        let diag = snf.diagonal();
        let chain = diag.windows(2).all(|w| w[1].is_zero() || (!w[0].is_zero() && w[1].is_multiple_of(&w[0])));
        let ok = snf.u.is_unimodular()
            && snf.v.is_unimodular()
            && snf.d.is_diagonal()
            && snf.u.checked_mul(&a).unwrap().checked_mul(&snf.v).unwrap() == snf.d
            && diag.iter().all(|x| !x.is_negative())
            && chain;
        if !ok {
            bad += 1;
        }
    }
    Outcome::check(bad == 0, format!("500 matrices up to 8x8, {bad} failures"))
}

fn block_law() -> Outcome {
    let mut r = rng(7);
    let mut bad = 0;
    for _ in 0..50 {
        let a = random_nonsingular(&mut r, 2);
        let det = a.determinant().unwrap();
        let sum = IntMatrix::block_diagonal(&[IntMatrix::identity(2), a.clone()]);
        let dets = IntMatrix::diagonal(&[det.clone(), det]);
        let third = IntMatrix::block_diagonal(&[a.clone(), dets.clone()]);
        let odd = IntMatrix::block_diagonal(&[IntMatrix::identity(2), a.clone(), a.clone(), dets]);
        if compound_matrix(&sum, 3).unwrap() != third || odd_compound(&a).unwrap() != odd {
            bad += 1;
        }
    }
    Outcome::check(
        bad == 0,
        format!(
            "50 matrices; third compound = diag(A, det, det), odd part = diag(1, 1, A, A, det, det); {bad} failures"
        ),
    )
}

fn unitary_versus_k1() -> Outcome {
    let g = |n| AbGroupDesc::new(TorsionDesc::CountablyInfinite, FreePartDesc::FreeOfRank(n));
    let unitary = compare_unitary(&g(1), &g(2), &[]);
    let kone = compare_k1(&g(1), &g(2), &[]);
    Outcome::check(
        unitary.is_isomorphic() && kone.is_not_isomorphic() && kone.evidence().contains("free rank 1 vs 2"),
        format!("unitary {}; K1 {}", unitary.verdict(), kone),
    )
}

fn countable_torsion() -> Outcome {
    let countable = |free| AbGroupDesc::new(TorsionDesc::CountablyInfinite, FreePartDesc::FreeOfRank(free));
    let finite = |orders: &[u64]| {
        AbGroupDesc::new(TorsionDesc::finite(FgAbGroup::from_cyclic_orders(orders)), FreePartDesc::FreeOfRank(1))
    };
    let results = [
        compare_unitary(&countable(0), &countable(0), &[]),
        compare_unitary(&countable(1), &countable(1), &[]),
        compare_unitary(&finite(&[8]), &finite(&[2, 4]), &[]),
    ];
    let lines: Vec<String> = results.iter().map(ToString::to_string).collect();
    Outcome::check(results.iter().all(ComparisonResult::is_isomorphic), lines.join("; "))
}

fn rank_one_line(r: &mut ChaCha8Rng) -> (Tower, BTreeSet<u64>) {
    let pick = |r: &mut ChaCha8Rng| [1i64, -1, 2, 3, 5, 6, 10, 15, -7][r.gen_range(0..9)];
    let prefix: Vec<i64> = (0..r.gen_range(0..=2)).map(|_| pick(r)).collect();
    let period: Vec<i64> = (0..r.gen_range(1..=3)).map(|_| pick(r)).collect();
    let support = period.iter().flat_map(|&x| prime_factors(x.unsigned_abs())).collect();
    let one = |x: &i64| IntMatrix::from_rows(&[[*x]]);
    (Tower::new(1, prefix.iter().map(one).collect(), period.iter().map(one).collect()).unwrap(), support)
}

fn rank_one_types() -> Outcome {
    let mut r = rng(10);
    let (mut equal, mut disjoint, mut bad) = (0, 0, 0);
    for _ in 0..200 {
        let (a, sa) = rank_one_line(&mut r);
        let (b, sb) = rank_one_line(&mut r);
        let same = sa == sb;
        let types_agree =
            types_equivalent(&a.characteristic(&a.unit()).unwrap(), &b.characteristic(&b.unit()).unwrap());
        let verdict = compare_unitary(
            &AbGroupDesc::torsion_free(FreePartDesc::Rank1(a)),
            &AbGroupDesc::torsion_free(FreePartDesc::Rank1(b)),
            &[],
        );
        if same {
            equal += 1;
        }
        if sa.is_disjoint(&sb) && !(sa.is_empty() && sb.is_empty()) {
            disjoint += 1;
        }
        let ok = if same { verdict.is_isomorphic() } else { verdict.is_not_isomorphic() };
        if !ok || types_agree != same {
            bad += 1;
        }
    }
    Outcome::check(
        bad == 0 && equal > 0 && disjoint > 0,
        format!("200 pairs, {equal} with equal types, {disjoint} with disjoint infinite supports, {bad} wrong"),
    )
}

fn counterexample_pipeline() -> Outcome {
    let cfg = default_config();
    let witness_ok = check_witness(&cfg.witness).unwrap();
    let wedge_types_equal = wedge2_type_rank2(&cfg.first).unwrap() == wedge2_type_rank2(&cfg.second).unwrap();
    let delta = |t: &Tower| {
        AbGroupDesc::torsion_free(FreePartDesc::DirectSum(vec![
            FreePartDesc::FreeOfRank(2),
            FreePartDesc::TowerForm(t.clone()),
        ]))
    };
    let with_z2 = |t: &Tower| {
        AbGroupDesc::new(TorsionDesc::finite(FgAbGroup::from_cyclic_orders(&[2])), FreePartDesc::TowerForm(t.clone()))
    };
    let witnesses = std::slice::from_ref(&cfg.witness);
    let kone = compare_k1(&delta(&cfg.first), &delta(&cfg.second), witnesses);
    let unitary = compare_unitary(&with_z2(&cfg.first), &with_z2(&cfg.second), witnesses);
    let (entries, notices) = builtin_gallery(Some(&cfg));
    let report = verify_gallery(&entries, &notices);
    let non_iso: Vec<_> = report.claims.iter().filter(|c| c.claim.starts_with("GroupNonIso")).collect();
    let skipped = !non_iso.is_empty()
        && non_iso.iter().all(|c| c.status == Status::Skipped && c.evidence.starts_with("literature-trusted"));
    Outcome::check(
        witness_ok && wedge_types_equal && kone.is_isomorphic() && unitary.is_isomorphic() && skipped,
        format!(
            "configured pair {}: witness {witness_ok}, wedge types equal {wedge_types_equal}, K1 {}, unitary {}, {} non-isomorphism claims skipped",
            cfg.name,
            kone.verdict(),
            unitary.verdict(),
            non_iso.len()
        ),
    )
}

fn divisibility_oracle() -> Outcome {
    let mut r = rng(12);
    let (mut checks, mut extra_depth) = (0, Vec::new());
    let mut contradictions = 0;
    for i in 0..100 {
        let rank = 1 + i % 3;
        let t = random_tower(&mut r, rank);
        let mut elements: Vec<GroupElement> = (0..rank).map(|j| GroupElement::basis(rank, j)).collect();
        let v: Vec<i64> = (0..rank).map(|_| r.gen_range(-30..=30)).collect();
        if v.iter().any(|&x| x != 0) {
            elements.push(GroupElement::from_i64(0, &v));
        }
        let shallow = t.prefix().len() + 4 * t.period().len();
        for e in &elements {
            for m in 2..=60u64 {
                let m = BigInt::from(m);
                checks += 1;
                let decided = t.is_divisible(e, &m);
                if decided != naive_divisible(&t, e, &m, shallow) {
                    let deep = naive_divisible(&t, e, &m, t.divisibility_depth(e.stage, &m));
                    if decided && deep {
                        extra_depth.push((i, m));
                    } else {
                        contradictions += 1;
                    }
                }
            }
        }
    }
    let towers: BTreeSet<usize> = extra_depth.iter().map(|(i, _)| *i).collect();
    Outcome {
        pass: extra_depth.is_empty() && contradictions == 0,
        detail: format!(
            "{checks} checks; {} disagree with unrolling to prefix + 4 x period (in {} towers), all confirmed divisible by deeper unrolling; {contradictions} contradictions",
            extra_depth.len(),
            towers.len()
        ),
        explained: contradictions == 0,
    }
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("K1 of free groups", k1_free_ranks),
        ("K0 of free groups", k0_free_ranks),
        ("K1 of rank 1 and 2", low_rank_k1_unchanged),
        ("coprime search vs wedge divisibility", coprime_search_matches_wedge),
        ("compound functoriality", cauchy_binet),
        ("Smith normal form", smith_forms),
        ("third compound block law", block_law),
        ("unitary vs K1 separation", unitary_versus_k1),
        ("countable torsion", countable_torsion),
        ("rank-one types", rank_one_types),
        ("counterexample pipeline", counterexample_pipeline),
        ("divisibility vs unrolling", divisibility_oracle),
    ];
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut unexplained = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        if !selected.is_empty() && !selected.contains(&(i + 1)) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        println!("criterion {}: {verdict} {name}: {} [{:?}]", i + 1, outcome.detail, start.elapsed());
        if !outcome.pass && !outcome.explained {
            unexplained.push(i + 1);
        }
    }
    if !unexplained.is_empty() {
        eprintln!("unexplained failures: {unexplained:?}");
        std::process::exit(1);
    }
}
