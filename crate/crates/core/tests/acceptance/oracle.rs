//! Independent brute-force checkers for the acceptance suite. Everything
//! here works by exact Gaussian elimination and finite candidate-point
//! enumeration; no simplex, no shared code with the library's solvers.

// Row-reduction loops index across two rows at once; indices mirror the math.
#![allow(clippy::needless_range_loop)]

use rosenthal_core::polylin::{PwlNorm, Rat, SupOverBall, WeightedL1};
use rosenthal_core::seqtree::SeqTree;

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves the square system `rows * x = rhs`; `None` when singular.
fn solve_square(rows: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let n = rows.len();
    let mut m: Vec<Vec<Rat>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            assert_eq!(r.len(), n, "square system");
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for j in col..=n {
            m[col][j] = &m[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for j in col..=n {
                    m[r][j] = &m[r][j] - &(&factor * &m[col][j]);
                }
            }
        }
    }
    Some(m.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

/// Basis of `{z : r . z = 0 for every row r}` via row reduction.
fn null_space(rows: &[Vec<Rat>], arity: usize) -> Vec<Vec<Rat>> {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..arity {
        let Some(r) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, r);
        let p = m[rank][col].clone();
        for j in 0..arity {
            m[rank][j] = &m[rank][j] / &p;
        }
        for other in 0..m.len() {
            if other != rank && !m[other][col].is_zero() {
                let factor = m[other][col].clone();
                for j in 0..arity {
                    m[other][j] = &m[other][j] - &(&factor * &m[rank][j]);
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let mut basis = Vec::new();
    for free in 0..arity {
        if pivots.contains(&free) {
            continue;
        }
        let mut z = vec![Rat::zero(); arity];
        z[free] = Rat::one();
        for (row, &pc) in pivots.iter().enumerate() {
            z[pc] = -&m[row][free];
        }
        basis.push(z);
    }
    basis
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// `sup { a(x) : b(x) <= 1 }` by vertex enumeration. A degenerate b is
/// handled head-on: a direction the ball doesn't control either blows up a
/// (unbounded) or is invisible to both norms, in which case the problem
/// restricts to the span of b's pieces and recurses.
pub fn sup_over_ball(a: &PwlNorm, b: &PwlNorm) -> SupOverBall {
    let v = a.arity();
    assert_eq!(b.arity(), v);
    let null = null_space(b.pieces(), v);
    if !null.is_empty() {
        if a.pieces()
            .iter()
            .any(|l| null.iter().any(|z| !dot(l, z).is_zero()))
        {
            return SupOverBall::Unbounded;
        }
        let basis: Vec<Vec<Rat>> = {
            // Row-reduce b's pieces and keep the nonzero rows.
            let mut m = b.pieces().to_vec();
            let mut rank = 0;
            for col in 0..v {
                let Some(r) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
                    continue;
                };
                m.swap(rank, r);
                let p = m[rank][col].clone();
                for j in 0..v {
                    m[rank][j] = &m[rank][j] / &p;
                }
                for other in 0..m.len() {
                    if other != rank && !m[other][col].is_zero() {
                        let factor = m[other][col].clone();
                        for j in 0..v {
                            m[other][j] = &m[other][j] - &(&factor * &m[rank][j]);
                        }
                    }
                }
                rank += 1;
            }
            m.truncate(rank);
            m
        };
        if basis.is_empty() {
            // b is the zero norm and a vanishes wherever b does: both zero.
            return SupOverBall::Bounded(Rat::zero());
        }
        let project = |l: &Vec<Rat>| -> Vec<Rat> { basis.iter().map(|p| dot(l, p)).collect() };
        let a2 = PwlNorm::new(basis.len(), a.pieces().iter().map(project).collect()).unwrap();
        let b2 = PwlNorm::new(basis.len(), b.pieces().iter().map(project).collect()).unwrap();
        return sup_over_ball(&a2, &b2);
    }

    // Compact ball: the sup of a convex function sits at a vertex, and every
    // vertex solves v independent active facets `m . x = +-1`.
    let rows = b.pieces();
    let mut best = Rat::zero();
    for subset in combinations(rows.len(), v) {
        for signs in 0u32..(1 << v) {
            let system: Vec<Vec<Rat>> = subset.iter().map(|&i| rows[i].clone()).collect();
            let rhs: Vec<Rat> = (0..v)
                .map(|i| {
                    if signs & (1 << i) == 0 {
                        Rat::one()
                    } else {
                        -Rat::one()
                    }
                })
                .collect();
            let Some(x) = solve_square(&system, &rhs) else {
                continue;
            };
            if rows.iter().all(|m| dot(m, &x).abs() <= Rat::one()) {
                best = best.max(a.eval(&x));
            }
        }
    }
    SupOverBall::Bounded(best)
}

/// Hyperplanes where the active piece of a max-of-absolute-values norm can
/// change: every piece alone, and every pairwise sum and difference.
fn kink_normals(norm: &PwlNorm) -> Vec<Vec<Rat>> {
    let pieces = norm.pieces();
    let mut out = Vec::new();
    for (i, p) in pieces.iter().enumerate() {
        out.push(p.clone());
        for q in &pieces[i + 1..] {
            out.push(p.iter().zip(q).map(|(x, y)| x - y).collect());
            out.push(p.iter().zip(q).map(|(x, y)| x + y).collect());
        }
    }
    out
}

/// Scales each normal so its first nonzero entry is 1 and drops repeats and
/// zero rows; hyperplanes through the origin are scale-invariant.
fn dedup_normals(mut normals: Vec<Vec<Rat>>) -> Vec<Vec<Rat>> {
    for n in &mut normals {
        if let Some(lead) = n.iter().find(|x| !x.is_zero()).cloned() {
            for x in n.iter_mut() {
                *x = &*x / &lead;
            }
        }
    }
    normals.retain(|n| n.iter().any(|x| !x.is_zero()));
    normals.sort();
    normals.dedup();
    normals
}

/// `min { a(x) : sum_n w_n |x_n| = 1 }` by arrangement enumeration: on each
/// sign-orthant facet of the weighted cross-polytope, the minimum of a
/// convex piecewise-linear function sits at a vertex of the subdivision cut
/// by a's kink hyperplanes and the orthant walls.
pub fn min_over_sphere(a: &PwlNorm, weights: &[Rat]) -> Rat {
    let v = a.arity();
    assert_eq!(weights.len(), v);
    assert!(weights.iter().all(Rat::is_positive));
    let mut planes = kink_normals(a);
    for n in 0..v {
        let mut e = vec![Rat::zero(); v];
        e[n] = Rat::one();
        planes.push(e);
    }
    let planes = dedup_normals(planes);

    let mut best: Option<Rat> = None;
    for orthant in 0u32..(1 << v) {
        let signs: Vec<Rat> = (0..v)
            .map(|i| {
                if orthant & (1 << i) == 0 {
                    Rat::one()
                } else {
                    -Rat::one()
                }
            })
            .collect();
        let sphere: Vec<Rat> = weights.iter().zip(&signs).map(|(w, s)| w * s).collect();
        for subset in combinations(planes.len(), v - 1) {
            let mut system: Vec<Vec<Rat>> =
                subset.iter().map(|&i| planes[i].clone()).collect();
            let mut rhs = vec![Rat::zero(); v - 1];
            system.push(sphere.clone());
            rhs.push(Rat::one());
            let Some(x) = solve_square(&system, &rhs) else {
                continue;
            };
            if x.iter().zip(&signs).all(|(xi, s)| !(xi * s).is_negative()) {
                let value = a.eval(&x);
                best = Some(match best {
                    None => value,
                    Some(b) => b.min(value),
                });
            }
        }
    }
    best.expect("cross-polytope corners always solve")
}

/// `max { a(x) - b(x) - eps * slack(x) : x in [-1,1]^v }` by arrangement
/// enumeration. The objective is linear on every cell cut by the kinks of
/// a, b, and the slack, so the maximum sits at a point where v independent
/// hyperplanes (kinks at 0, box walls at +-1) are active.
pub fn dominance_margin(a: &PwlNorm, b: &PwlNorm, slack: &WeightedL1, eps: &Rat) -> Rat {
    let v = a.arity();
    assert_eq!(b.arity(), v);
    assert_eq!(slack.arity(), v);
    let mut homogeneous = kink_normals(a);
    homogeneous.extend(kink_normals(b));
    for n in 0..v {
        let mut e = vec![Rat::zero(); v];
        e[n] = Rat::one();
        homogeneous.push(e);
    }
    let mut planes: Vec<(Vec<Rat>, Rat)> = dedup_normals(homogeneous)
        .into_iter()
        .map(|n| (n, Rat::zero()))
        .collect();
    for n in 0..v {
        for sign in [Rat::one(), -Rat::one()] {
            let mut e = vec![Rat::zero(); v];
            e[n] = Rat::one();
            planes.push((e, sign));
        }
    }

    let mut best: Option<Rat> = None;
    for subset in combinations(planes.len(), v) {
        let system: Vec<Vec<Rat>> = subset.iter().map(|&i| planes[i].0.clone()).collect();
        let rhs: Vec<Rat> = subset.iter().map(|&i| planes[i].1.clone()).collect();
        let Some(x) = solve_square(&system, &rhs) else {
            continue;
        };
        if x.iter().any(|xi| xi.abs() > Rat::one()) {
            continue;
        }
        let value = a.eval(&x) - b.eval(&x) - eps * &slack.eval(&x);
        best = Some(match best {
            None => value,
            Some(m) => m.max(value),
        });
    }
    best.expect("box corners always solve")
}

/// Derivative-iteration count computed the slow way: re-scan all node pairs
/// each round, drop the nodes with no proper extension, count the rounds.
pub fn tree_order(t: &SeqTree) -> usize {
    let mut nodes: Vec<Vec<usize>> = t.nodes().cloned().collect();
    let mut rounds = 0;
    while !nodes.is_empty() {
        nodes = nodes
            .iter()
            .filter(|s| {
                nodes
                    .iter()
                    .any(|u| u.len() > s.len() && u[..s.len()] == s[..])
            })
            .cloned()
            .collect();
        rounds += 1;
    }
    rounds
}
