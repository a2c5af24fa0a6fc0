//! Reference computations that share no code with the library, plus
//! generators for random cone members.

#![allow(dead_code)]

use num_rational::Ratio;
use pgcone::cone::PseudoCodeword;
use pgcone::plane::Plane;
use rand::Rng;
use std::collections::BTreeSet;

type Q = Ratio<i128>;

/// Lines `{j+1, j+2, j+4} mod 7` of the Fano plane; {1, 2, 4} is a
/// perfect difference set mod 7.
pub fn fano_lines() -> Vec<Vec<usize>> {
    (0..7)
        .map(|j| {
            let mut l: Vec<usize> = [1, 2, 4].iter().map(|d| (d + j) % 7).collect();
            l.sort_unstable();
            l
        })
        .collect()
}

/// Row masks of the incidence matrix.
pub fn row_masks(lines: &[Vec<usize>]) -> Vec<u64> {
    lines.iter().map(|l| l.iter().fold(0u64, |m, &i| m | 1 << i)).collect()
}

/// Number of codewords of each weight, by checking all `2^n` words.
pub fn brute_force_weight_distribution(n: usize, rows: &[u64]) -> Vec<usize> {
    let mut dist = vec![0; n + 1];
    for x in 0u64..1 << n {
        if rows.iter().all(|r| (r & x).count_ones() % 2 == 0) {
            dist[x.count_ones() as usize] += 1;
        }
    }
    dist
}

/// Every check inequality `Σ_{row \ p} x - x_p >= 0` as a dense row.
pub fn check_rows(n: usize, lines: &[Vec<usize>]) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for l in lines {
        for &p in l {
            let mut a = vec![0; n];
            l.iter().for_each(|&i| a[i] = 1);
            a[p] = -1;
            out.push(a);
        }
    }
    out
}

pub fn in_cone(x: &[i64], checks: &[Vec<i64>]) -> bool {
    x.iter().all(|&v| v >= 0) && checks.iter().all(|a| a.iter().zip(x).map(|(c, v)| c * v).sum::<i64>() >= 0)
}

fn is_stopping_set(mask: u64, rows: &[u64]) -> bool {
    rows.iter().all(|r| (r & mask).count_ones() != 1)
}

/// One-dimensional nullspace of `rows` (all of length `m`), as a primitive
/// integer vector, or `None` when the nullity is not one.
fn nullspace_line(rows: &[Vec<i64>], m: usize) -> Option<Vec<i64>> {
    let mut a: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&v| Q::from_integer(v as i128)).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m {
        let Some(k) = (r..a.len()).find(|&k| a[k][c] != Q::from_integer(0)) else {
            continue;
        };
        a.swap(r, k);
        let p = a[r][c];
        for v in a[r].iter_mut() {
            *v /= p;
        }
        let pr = a[r].clone();
        for (k, row) in a.iter_mut().enumerate() {
            if k != r && row[c] != Q::from_integer(0) {
                let f = row[c];
                row.iter_mut().zip(&pr).for_each(|(x, &y)| *x -= y * f);
            }
        }
        pivots.push(c);
        r += 1;
    }
    if pivots.len() + 1 != m {
        return None;
    }
    let free = (0..m).find(|c| !pivots.contains(c)).unwrap();
    let mut v = vec![Q::from_integer(0); m];
    v[free] = Q::from_integer(1);
    for (row, &c) in pivots.iter().enumerate() {
        v[c] = -a[row][free];
    }
    let lcm = v.iter().fold(1i128, |l, x| num_integer::lcm(l, *x.denom()));
    let ints: Vec<i128> = v.iter().map(|x| (x * Q::from_integer(lcm)).to_integer()).collect();
    let g = ints.iter().fold(0i128, |g, &x| num_integer::gcd(g, x));
    Some(ints.iter().map(|&x| (x / g) as i64).collect())
}

/// Extreme rays of the cone, found per support: for every stopping set `S`
/// and every choice of `|S| - 1` check inequalities with pivot in `S`, the
/// restricted system's nullspace line is kept when it is strictly positive
/// on `S` and lies in the cone.
pub fn support_guided_rays(n: usize, lines: &[Vec<usize>]) -> BTreeSet<Vec<i64>> {
    let rows = row_masks(lines);
    let checks = check_rows(n, lines);
    let mut found = BTreeSet::new();
    for mask in 1u64..1 << n {
        if !is_stopping_set(mask, &rows) {
            continue;
        }
        let s: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let pivot_in_s: Vec<Vec<i64>> = lines
            .iter()
            .flat_map(|l| l.iter().map(move |&p| (l, p)))
            .filter(|(_, p)| mask >> p & 1 == 1)
            .map(|(l, p)| {
                s.iter()
                    .map(|&i| {
                        if i == p {
                            -1
                        } else if l.contains(&i) {
                            1
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect::<BTreeSet<Vec<i64>>>()
            .into_iter()
            .collect();
        for choice in subsets(pivot_in_s.len(), s.len() - 1) {
            let sys: Vec<Vec<i64>> = choice.iter().map(|&k| pivot_in_s[k].clone()).collect();
            let Some(mut v) = nullspace_line(&sys, s.len()) else { continue };
            if v[0] < 0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            if v.iter().any(|&x| x <= 0) {
                continue;
            }
            let mut full = vec![0; n];
            s.iter().zip(&v).for_each(|(&i, &x)| full[i] = x);
            if in_cone(&full, &checks) {
                found.insert(full);
            }
        }
    }
    found
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Pushes `x` down to the largest cone member below it: each entry is
/// lowered to the smallest sum of its neighbours on a common line, until
/// nothing changes.
pub fn clip_into_cone(plane: &Plane, x: &mut [i64]) {
    loop {
        let mut changed = false;
        for i in 0..x.len() {
            let cap = plane
                .lines_through(i)
                .iter()
                .map(|&l| plane.line(l).iter().filter(|&&k| k != i).map(|&k| x[k]).sum::<i64>())
                .min()
                .unwrap();
            if x[i] > cap {
                x[i] = cap;
                changed = true;
            }
        }
        if !changed {
            return;
        }
    }
}

/// A nonzero cone member of PG(2, q). Draws mix small-alphabet vectors,
/// sums of two hyperovals with extra twos, and wide-range vectors.
pub fn random_member<R: Rng>(plane: &Plane, ovals: &[Vec<usize>], rng: &mut R) -> PseudoCodeword {
    let n = plane.n();
    loop {
        let mut x = vec![0i64; n];
        match rng.gen_range(0..4) {
            0 => x.iter_mut().for_each(|v| *v = rng.gen_range(0..=2)),
            1 => {
                for _ in 0..2 {
                    let o = &ovals[rng.gen_range(0..ovals.len())];
                    o.iter().for_each(|&i| x[i] += 1);
                }
                let extra = rng.gen_range(0..=3);
                for _ in 0..extra {
                    let i = rng.gen_range(0..n);
                    if x[i] == 0 {
                        x[i] = 2;
                    }
                }
            }
            2 => {
                let o = &ovals[rng.gen_range(0..ovals.len())];
                let m = rng.gen_range(1..=3);
                o.iter().for_each(|&i| x[i] = m);
            }
            _ => x.iter_mut().for_each(|v| *v = rng.gen_range(0..=9)),
        }
        clip_into_cone(plane, &mut x);
        if x.iter().any(|&v| v > 0) {
            return PseudoCodeword::from_integers(x).unwrap();
        }
    }
}
