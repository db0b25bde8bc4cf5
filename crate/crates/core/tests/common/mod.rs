//! Shared helpers for the integration suites: seeded random chains, cycle
//! spaces inside a filtration level, and a dense brute-force homology oracle
//! that shares no code with the sparse engine beyond the structure constants.

#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use excisionlab::algebra::Extension;
use excisionlab::chain::{bar_boundary, boundary_b, filtration_level, Chain, Tuple};
use excisionlab::homology::{Complex, Space};
use excisionlab::linalg::{kernel_basis, ratio, Scalar, SparseMatrix, SparseVector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_coeff(rng: &mut ChaCha8Rng) -> Scalar {
    let mut p = rng.gen_range(-4i64..=4);
    if p == 0 {
        p = 1;
    }
    ratio(p, rng.gen_range(1i64..=3))
}

/// A chain with up to `terms` random pure tensors drawn from `space`.
pub fn random_chain(ext: &Extension, rng: &mut ChaCha8Rng, degree: usize, space: Space, terms: usize) -> Chain {
    let k = ext.ideal_count();
    let range = if space == Space::Ideal { k } else { ext.dim() };
    let mut c = Chain::zero(degree);
    for _ in 0..terms {
        let mut t: Tuple = (0..=degree).map(|_| rng.gen_range(0..range)).collect();
        if space == Space::Relative && t.iter().all(|&i| i >= k) {
            let slot = rng.gen_range(0..=degree);
            t[slot] = rng.gen_range(0..k);
        }
        c.add_term(t, &random_coeff(rng));
    }
    c
}

/// All index tuples of length `n + 1` in `space`, last slot fastest.
pub fn tuples(ext: &Extension, space: Space, n: usize) -> Vec<Tuple> {
    let k = ext.ideal_count();
    let range = if space == Space::Ideal { k } else { ext.dim() };
    let total = range.pow(n as u32 + 1);
    (0..total)
        .map(|mut code| {
            let mut t = vec![0; n + 1];
            for slot in t.iter_mut().rev() {
                *slot = code % range;
                code /= range;
            }
            t
        })
        .filter(|t| space != Space::Relative || t.iter().any(|&i| i < k))
        .collect()
}

/// Basis of the kernel of `boundary` on the span of `cols` (degree `n`).
pub fn kernel_chains(ext: &Extension, n: usize, cols: &[Tuple], boundary: fn(&Extension, &Chain) -> excisionlab::Result<Chain>) -> Vec<Chain> {
    let mut rows: HashMap<Tuple, usize> = HashMap::new();
    let images: Vec<Chain> = cols.iter().map(|t| boundary(ext, &Chain::pure(t.clone())).unwrap()).collect();
    for c in &images {
        for (t, _) in c.terms() {
            let next = rows.len();
            rows.entry(t.clone()).or_insert(next);
        }
    }
    let height = rows.len().max(1);
    let columns: Vec<SparseVector> = images
        .iter()
        .map(|c| SparseVector::from_entries(height, c.terms().map(|(t, x)| (rows[t], x.clone()))).unwrap())
        .collect();
    let m = SparseMatrix::from_columns(height, &columns).unwrap();
    kernel_basis(&m)
        .into_iter()
        .map(|v| Chain::from_terms(n, v.iter().map(|(j, x)| (cols[j].clone(), x.clone()))).unwrap())
        .collect()
}

/// Basis of the Hochschild cycles in `F_p C_n(A, I)`.
pub fn filtered_cycles(ext: &Extension, n: usize, p: usize) -> Vec<Chain> {
    let cols: Vec<Tuple> = tuples(ext, Space::Relative, n)
        .into_iter()
        .filter(|t| filtration_level(ext, &Chain::pure(t.clone())) <= p)
        .collect();
    kernel_chains(ext, n, &cols, boundary_b)
}

/// Basis of the `b′`-cycles in `C_n(I)`.
pub fn bar_cycles(ext: &Extension, n: usize) -> Vec<Chain> {
    kernel_chains(ext, n, &tuples(ext, Space::Ideal, n), bar_boundary)
}

// ---- dense oracle over Z/p ----

/// Two large primes; the oracle takes the larger rank, which equals the
/// rational rank unless both primes divide the same nonzero minors.
const PRIMES: [u64; 2] = [2_147_483_647, 1_000_000_007];

fn to_mod(x: &Scalar, p: u64) -> u64 {
    let m = BigInt::from(p);
    let reduce = |v: &BigInt| ((v % &m) + &m) % &m;
    let n = reduce(x.numer()).to_u64().unwrap();
    let d = reduce(x.denom()).to_u64().unwrap();
    n * pow_mod(d, p - 2, p) % p
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn rank_mod(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, pivot);
        let inv = pow_mod(rows[rank][c], p - 2, p);
        for x in rows[rank][c..].iter_mut() {
            *x = *x * inv % p;
        }
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            let f = row[c];
            if f != 0 {
                for (x, &y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    *x = (*x + (p - f) * y % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Signed pure-tensor expansion of `b` (or `b′` without `wrap`) written from
/// the textbook formula against the raw structure constants.
fn oracle_boundary(ext: &Extension, t: &[usize], wrap: bool) -> Vec<(Tuple, Scalar)> {
    let n = t.len() - 1;
    let sign = |k: usize| if k.is_multiple_of(2) { Scalar::one() } else { -Scalar::one() };
    let mut out = Vec::new();
    for i in 0..n {
        for (k, x) in ext.algebra().product(t[i], t[i + 1]).iter() {
            let mut u = t[..i].to_vec();
            u.push(k);
            u.extend_from_slice(&t[i + 2..]);
            out.push((u, sign(i) * x));
        }
    }
    if wrap && n > 0 {
        for (k, x) in ext.algebra().product(t[n], t[0]).iter() {
            let mut u = vec![k];
            u.extend_from_slice(&t[1..n]);
            out.push((u, sign(n) * x));
        }
    }
    out
}

struct Group {
    index: HashMap<Tuple, usize>,
    tuples: Vec<Tuple>,
}

impl Group {
    fn new(ext: &Extension, space: Space, n: usize) -> Self {
        let tuples = tuples(ext, space, n);
        Self { index: tuples.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect(), tuples }
    }
}

/// Dense matrix (rows = target group) whose columns are the images of the
/// source group under `f`.
fn assemble(target: &Group, columns: Vec<Vec<(Tuple, Scalar)>>, p: u64) -> Vec<Vec<u64>> {
    let mut rows = vec![vec![0u64; columns.len()]; target.tuples.len()];
    for (j, col) in columns.iter().enumerate() {
        for (t, x) in col {
            let i = *target.index.get(t).unwrap_or_else(|| panic!("oracle: {t:?} left the subcomplex"));
            rows[i][j] = (rows[i][j] + to_mod(x, p)) % p;
        }
    }
    rows
}

fn one_minus_t(t: &[usize]) -> Vec<(Tuple, Scalar)> {
    let n = t.len() - 1;
    let mut rotated = vec![t[n]];
    rotated.extend_from_slice(&t[..n]);
    let sign = if n.is_multiple_of(2) { Scalar::one() } else { -Scalar::one() };
    vec![(t.to_vec(), Scalar::one()), (rotated, -sign)]
}

fn hconcat(mut a: Vec<Vec<u64>>, b: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    for (r, s) in a.iter_mut().zip(b) {
        r.extend(s);
    }
    a
}

fn ranks(ext: &Extension, complex: Complex, space: Space, n: usize, p: u64) -> (usize, usize, usize) {
    let wrap = complex != Complex::Bar;
    let here = Group::new(ext, space, n);
    let above = Group::new(ext, space, n + 1);
    let b_above = assemble(&here, above.tuples.iter().map(|t| oracle_boundary(ext, t, wrap)).collect(), p);
    if complex != Complex::Cyclic {
        let out_rank = if n == 0 {
            0
        } else {
            let below = Group::new(ext, space, n - 1);
            rank_mod(assemble(&below, here.tuples.iter().map(|t| oracle_boundary(ext, t, wrap)).collect(), p), p)
        };
        return (here.tuples.len(), out_rank, rank_mod(b_above, p));
    }
    // Coinvariants: ranks of the induced maps are rank([b | 1−t]) − rank(1−t).
    let t_here = assemble(&here, here.tuples.iter().map(|t| one_minus_t(t)).collect(), p);
    let r_t_here = rank_mod(t_here.clone(), p);
    let in_rank = rank_mod(hconcat(b_above, t_here), p) - r_t_here;
    let out_rank = if n == 0 {
        0
    } else {
        let below = Group::new(ext, space, n - 1);
        let b_here = assemble(&below, here.tuples.iter().map(|t| oracle_boundary(ext, t, true)).collect(), p);
        let t_below = assemble(&below, below.tuples.iter().map(|t| one_minus_t(t)).collect(), p);
        let r_t_below = rank_mod(t_below.clone(), p);
        rank_mod(hconcat(b_here, t_below), p) - r_t_below
    };
    (here.tuples.len() - r_t_here, out_rank, in_rank)
}

/// `dim H_n` by dense elimination over two prime fields.
pub fn oracle_dimension(ext: &Extension, complex: Complex, space: Space, n: usize) -> usize {
    let per_prime: Vec<(usize, usize, usize)> = PRIMES.iter().map(|&p| ranks(ext, complex, space, n, p)).collect();
    let size = per_prime[0].0;
    let out_rank = per_prime.iter().map(|r| r.1).max().unwrap();
    let in_rank = per_prime.iter().map(|r| r.2).max().unwrap();
    size - out_rank - in_rank
}

/// `b` (or `b′`) of a whole chain through the oracle's own expansion.
pub fn oracle_b(ext: &Extension, c: &Chain, wrap: bool) -> Chain {
    let mut out = Chain::zero(c.degree() - 1);
    for (t, x) in c.terms() {
        for (u, y) in oracle_boundary(ext, t, wrap) {
            out.add_term(u, &(x * y));
        }
    }
    out
}
