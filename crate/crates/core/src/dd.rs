//! Double description method: extreme rays of a pointed cone `{x : A x >= 0}`.
//!
//! Rays are kept as primitive integer vectors, so the arithmetic stays exact
//! without rational normalization inside the loop. Adjacency is decided by the
//! combinatorial test on zero sets.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::rational::{normalize_integer, primitive_integer, Q};

#[derive(Clone, PartialEq, Eq)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(len: usize) -> Self {
        BitSet(vec![0; len.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn intersection(&self, other: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_superset(&self, other: &BitSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

struct Ray {
    coords: Vec<BigInt>,
    zeros: BitSet,
}

fn int_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Picks row indices forming a basis of the row space.
fn independent_rows(rows: &[Vec<Q>], dim: usize) -> Vec<usize> {
    let mut basis: Vec<(usize, Vec<Q>)> = Vec::new(); // (pivot column, reduced row)
    let mut chosen = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        let mut r = row.clone();
        for (pc, b) in &basis {
            if !r[*pc].is_zero() {
                let f = &r[*pc] / &b[*pc];
                for (x, y) in r.iter_mut().zip(b) {
                    *x -= &f * y;
                }
            }
        }
        if let Some(pc) = r.iter().position(|x| !x.is_zero()) {
            basis.push((pc, r));
            chosen.push(idx);
            if chosen.len() == dim {
                break;
            }
        }
    }
    chosen
}

/// Solves `M X = I` for square nonsingular `M`; returns the columns of `X`.
fn inverse_columns(m: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let d = m.len();
    let mut aug: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..d).map(|j| if i == j { Q::from_integer(1.into()) } else { Q::zero() }));
            r
        })
        .collect();
    for col in 0..d {
        let p = (col..d)
            .find(|&r| !aug[r][col].is_zero())
            .expect("basis rows are independent");
        aug.swap(col, p);
        let inv = Q::from_integer(1.into()) / &aug[col][col];
        for v in aug[col].iter_mut() {
            *v *= &inv;
        }
        let pivot = aug[col].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, p) in row.iter_mut().zip(&pivot) {
                    *v -= &f * p;
                }
            }
        }
    }
    (0..d).map(|j| (0..d).map(|i| aug[i][d + j].clone()).collect()).collect()
}

/// Extreme rays of `{x ∈ Q^dim : ⟨row, x⟩ >= 0 for every row}`.
///
/// Returns `None` when the rows do not have full column rank (the cone then
/// contains a line and has no extreme rays in the usual sense).
pub fn extreme_rays(rows: &[Vec<Q>], dim: usize) -> Option<Vec<Vec<BigInt>>> {
    let int_rows: Vec<Vec<BigInt>> = rows.iter().map(|r| primitive_integer(r)).collect();
    let initial = independent_rows(rows, dim);
    if initial.len() < dim {
        return None;
    }
    let basis: Vec<Vec<Q>> = initial.iter().map(|&i| rows[i].clone()).collect();
    let mut rays: Vec<Ray> = inverse_columns(&basis)
        .into_iter()
        .enumerate()
        .map(|(j, col)| {
            let mut zeros = BitSet::new(rows.len());
            for (k, &row) in initial.iter().enumerate() {
                if k != j {
                    zeros.insert(row);
                }
            }
            Ray {
                coords: primitive_integer(&col),
                zeros,
            }
        })
        .collect();

    for (k, row) in int_rows.iter().enumerate() {
        if initial.contains(&k) {
            continue;
        }
        let values: Vec<BigInt> = rays.iter().map(|r| int_dot(row, &r.coords)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        if neg.is_empty() {
            for (r, v) in rays.iter_mut().zip(&values) {
                if v.is_zero() {
                    r.zeros.insert(k);
                }
            }
            continue;
        }
        let mut created = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].zeros.intersection(&rays[n].zeros);
                if common.count() + 2 < dim {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, r)| i == p || i == n || !r.zeros.is_superset(&common));
                if !adjacent {
                    continue;
                }
                let coords: Vec<BigInt> = rays[n]
                    .coords
                    .iter()
                    .zip(&rays[p].coords)
                    .map(|(xn, xp)| &values[p] * xn - &values[n] * xp)
                    .collect();
                let mut zeros = common;
                zeros.insert(k);
                created.push(Ray {
                    coords: normalize_integer(coords),
                    zeros,
                });
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + created.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if values[i].is_negative() {
                continue;
            }
            if values[i].is_zero() {
                r.zeros.insert(k);
            }
            next.push(r);
        }
        next.extend(created);
        rays = next;
    }
    Some(rays.into_iter().map(|r| r.coords).collect())
}
