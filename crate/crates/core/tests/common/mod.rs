#![allow(dead_code)]

use abelk::exactla::IntMatrix;
use abelk::tower::{GroupElement, Tower};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-9i64..=9)))
}

pub fn random_nonsingular(rng: &mut ChaCha8Rng, n: usize) -> IntMatrix {
    loop {
        let m = random_matrix(rng, n, n);
        if !m.determinant().unwrap().is_zero() {
            return m;
        }
    }
}

/// Prefix of length at most 4, period of length at most 3, entries in
/// [-9, 9], all nonsingular.
pub fn random_tower(rng: &mut ChaCha8Rng, rank: usize) -> Tower {
    let prefix = (0..rng.gen_range(0..=4)).map(|_| random_nonsingular(rng, rank)).collect();
    let period = (0..rng.gen_range(0..=3)).map(|_| random_nonsingular(rng, rank)).collect();
    Tower::new(rank, prefix, period).unwrap()
}

pub fn matrix_strategy(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-9i64..=9, n * n)
        .prop_map(move |v| IntMatrix::from_vec(n, n, v.into_iter().map(BigInt::from).collect()).unwrap())
}

pub fn tower_strategy(rank: usize) -> impl Strategy<Value = Tower> {
    let nonsingular = || matrix_strategy(rank).prop_filter("nonsingular", |m| !m.determinant().unwrap().is_zero());
    (prop::collection::vec(nonsingular(), 0..=3), prop::collection::vec(nonsingular(), 1..=3))
        .prop_map(move |(prefix, period)| Tower::new(rank, prefix, period).unwrap())
}

fn naive_step(m: &IntMatrix, v: &[BigInt]) -> Vec<BigInt> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j) * &v[j]).sum()).collect()
}

/// Unrolls stages explicitly and reports whether `e / m` has integral
/// coordinates at some stage up to `depth`.
pub fn naive_divisible(t: &Tower, e: &GroupElement, m: &BigInt, depth: usize) -> bool {
    let mut v = e.coords.clone();
    for s in e.stage..=depth.max(e.stage) {
        if v.iter().all(|x| x.is_multiple_of(m)) {
            return true;
        }
        if let Some(a) = t.map_at(s) {
            v = naive_step(a, &v);
        }
    }
    false
}

/// `p`-height by unrolling: the largest `k <= cap` with `p^k` dividing `e`
/// by stage `depth`.
pub fn naive_height(t: &Tower, e: &GroupElement, p: u64, cap: u32, depth: usize) -> u32 {
    (0..=cap).take_while(|&k| naive_divisible(t, e, &BigInt::from(p).pow(k), depth)).last().unwrap()
}
