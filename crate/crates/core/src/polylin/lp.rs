use super::rat::Rat;

/// Direction of a linear constraint `coeffs · x REL rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub relation: Relation,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rat>, relation: Relation, rhs: Rat) -> Self {
        Constraint {
            coeffs,
            relation,
            rhs,
        }
    }
}

/// `maximize objective · x` subject to `constraints` and per-variable box
/// bounds. Variables are free unless `bounds` says otherwise; an empty
/// `bounds` vector means every variable is free.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub objective: Vec<Rat>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<(Option<Rat>, Option<Rat>)>,
}

impl LinearProgram {
    pub fn new(objective: Vec<Rat>, constraints: Vec<Constraint>) -> Self {
        LinearProgram {
            objective,
            constraints,
            bounds: Vec::new(),
        }
    }

    pub fn with_bounds(mut self, bounds: Vec<(Option<Rat>, Option<Rat>)>) -> Self {
        self.bounds = bounds;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpSolution {
    Optimal { value: Rat, point: Vec<Rat> },
    Infeasible,
    Unbounded,
}

/// How a standard-form column recovers the original variable.
#[derive(Clone, Debug)]
enum Col {
    Plus(usize),
    Minus(usize),
    Shift(usize, Rat),
    Reflect(usize, Rat),
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    basis: Vec<usize>,
}

enum RunEnd {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn ncols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    fn pivot(&mut self, r: usize, c: usize, cost: &mut [Rat], objval: &mut Rat) {
        let mut prow = std::mem::take(&mut self.rows[r]);
        let p = prow[c].clone();
        if p != Rat::one() {
            for v in prow.iter_mut() {
                if !v.is_zero() {
                    *v = &*v / &p;
                }
            }
            self.rhs[r] = &self.rhs[r] / &p;
        }
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = std::mem::replace(&mut self.rows[i][c], Rat::zero());
            for (t, s) in self.rows[i].iter_mut().zip(prow.iter()) {
                if !s.is_zero() {
                    *t -= &(&f * s);
                }
            }
            self.rows[i][c] = Rat::zero();
            self.rhs[i] -= &(&f * &prhs);
        }
        let f = cost[c].clone();
        if !f.is_zero() {
            for (t, s) in cost.iter_mut().zip(prow.iter()) {
                if !s.is_zero() {
                    *t -= &(&f * s);
                }
            }
            cost[c] = Rat::zero();
            *objval += &(&f * &prhs);
        }
        self.rows[r] = prow;
        self.basis[r] = c;
    }

    /// Primal simplex with Bland's rule: entering column is the smallest
    /// index with positive reduced cost, ties in the ratio test break toward
    /// the smallest basic variable index. Terminates on every input.
    fn run(&mut self, cost: &mut [Rat], objval: &mut Rat) -> RunEnd {
        loop {
            let enter = match (0..cost.len()).find(|&j| cost[j].is_positive()) {
                Some(j) => j,
                None => return RunEnd::Optimal,
            };
            let mut leave: Option<(Rat, usize, usize)> = None;
            for r in 0..self.rows.len() {
                if !self.rows[r][enter].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / &self.rows[r][enter];
                let candidate = (ratio, self.basis[r], r);
                leave = match leave {
                    None => Some(candidate),
                    Some(best) => {
                        if candidate.0 < best.0 || (candidate.0 == best.0 && candidate.1 < best.1)
                        {
                            Some(candidate)
                        } else {
                            Some(best)
                        }
                    }
                };
            }
            match leave {
                Some((_, _, r)) => self.pivot(r, enter, cost, objval),
                None => return RunEnd::Unbounded,
            }
        }
    }
}

/// Exact two-phase simplex. Panics on a malformed program (mismatched
/// arities); infeasibility and unboundedness are ordinary outcomes.
pub fn solve_lp(lp: &LinearProgram) -> LpSolution {
    let nvars = lp.objective.len();
    for c in &lp.constraints {
        assert_eq!(c.coeffs.len(), nvars, "constraint arity mismatch");
    }
    if !lp.bounds.is_empty() {
        assert_eq!(lp.bounds.len(), nvars, "bounds arity mismatch");
    }

    // Substitute bounded variables so that every standard-form column is >= 0.
    let mut cols: Vec<Col> = Vec::new();
    let mut var_cols: Vec<Vec<usize>> = vec![Vec::new(); nvars];
    let free = (None, None);
    for (i, var_col) in var_cols.iter_mut().enumerate() {
        let (lo, hi) = if lp.bounds.is_empty() {
            &free
        } else {
            &lp.bounds[i]
        };
        match (lo, hi) {
            (None, None) => {
                var_col.push(cols.len());
                cols.push(Col::Plus(i));
                var_col.push(cols.len());
                cols.push(Col::Minus(i));
            }
            (Some(l), None) => {
                var_col.push(cols.len());
                cols.push(Col::Shift(i, l.clone()));
            }
            (None, Some(h)) => {
                var_col.push(cols.len());
                cols.push(Col::Reflect(i, h.clone()));
            }
            (Some(l), Some(h)) => {
                if h < l {
                    return LpSolution::Infeasible;
                }
                var_col.push(cols.len());
                cols.push(Col::Shift(i, l.clone()));
            }
        }
    }
    let nstruct = cols.len();

    let to_std = |coeffs: &[Rat], rhs: &Rat| -> (Vec<Rat>, Rat) {
        let mut row = vec![Rat::zero(); nstruct];
        let mut b = rhs.clone();
        for (j, col) in cols.iter().enumerate() {
            match col {
                Col::Plus(i) => row[j] = coeffs[*i].clone(),
                Col::Minus(i) => row[j] = -&coeffs[*i],
                Col::Shift(i, l) => {
                    row[j] = coeffs[*i].clone();
                    b -= &(&coeffs[*i] * l);
                }
                Col::Reflect(i, h) => {
                    row[j] = -&coeffs[*i];
                    b -= &(&coeffs[*i] * h);
                }
            }
        }
        (row, b)
    };

    let mut std_rows: Vec<(Vec<Rat>, Relation, Rat)> = Vec::new();
    for c in &lp.constraints {
        let (row, b) = to_std(&c.coeffs, &c.rhs);
        std_rows.push((row, c.relation, b));
    }
    // Range rows for doubly bounded variables.
    if !lp.bounds.is_empty() {
        for i in 0..nvars {
            if let (Some(l), Some(h)) = &lp.bounds[i] {
                let mut row = vec![Rat::zero(); nstruct];
                row[var_cols[i][0]] = Rat::one();
                std_rows.push((row, Relation::Le, h - l));
            }
        }
    }

    let (obj_row, neg_obj0) = to_std(&lp.objective, &Rat::zero());
    let obj0 = -neg_obj0;

    // Sign-normalize rhs, then attach slack and artificial columns.
    for (row, rel, b) in std_rows.iter_mut() {
        if b.is_negative() {
            for v in row.iter_mut() {
                *v = -&*v;
            }
            *b = -&*b;
            *rel = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }

    let m = std_rows.len();
    let nslack = std_rows
        .iter()
        .filter(|(_, rel, _)| *rel != Relation::Eq)
        .count();
    let nartif = std_rows
        .iter()
        .filter(|(_, rel, _)| *rel != Relation::Le)
        .count();
    let total = nstruct + nslack + nartif;
    let artif_start = nstruct + nslack;

    let mut tab = Tableau {
        rows: Vec::with_capacity(m),
        rhs: Vec::with_capacity(m),
        basis: vec![0; m],
    };
    let mut next_slack = nstruct;
    let mut next_artif = artif_start;
    for (r, (row, rel, b)) in std_rows.iter().enumerate() {
        let mut full = vec![Rat::zero(); total];
        full[..nstruct].clone_from_slice(row);
        match rel {
            Relation::Le => {
                full[next_slack] = Rat::one();
                tab.basis[r] = next_slack;
                next_slack += 1;
            }
            Relation::Ge => {
                full[next_slack] = -Rat::one();
                next_slack += 1;
                full[next_artif] = Rat::one();
                tab.basis[r] = next_artif;
                next_artif += 1;
            }
            Relation::Eq => {
                full[next_artif] = Rat::one();
                tab.basis[r] = next_artif;
                next_artif += 1;
            }
        }
        tab.rows.push(full);
        tab.rhs.push(b.clone());
    }

    // Phase 1: drive the artificial variables to zero.
    if nartif > 0 {
        let mut cost = vec![Rat::zero(); total];
        cost[artif_start..].fill(-Rat::one());
        let mut objval = Rat::zero();
        for r in 0..m {
            if tab.basis[r] >= artif_start {
                let row = tab.rows[r].clone();
                for (t, s) in cost.iter_mut().zip(row.iter()) {
                    *t += s;
                }
                objval -= &tab.rhs[r];
            }
        }
        match tab.run(&mut cost, &mut objval) {
            RunEnd::Optimal => {}
            RunEnd::Unbounded => unreachable!("phase 1 objective is bounded above by zero"),
        }
        if objval.is_negative() {
            return LpSolution::Infeasible;
        }
        // Pivot leftover artificials out of the basis; a row with no
        // structural entry left is redundant and gets dropped.
        let mut drop_rows = Vec::new();
        for r in 0..m {
            if tab.basis[r] < artif_start {
                continue;
            }
            match (0..artif_start).find(|&j| !tab.rows[r][j].is_zero()) {
                Some(j) => tab.pivot(r, j, &mut cost, &mut objval),
                None => drop_rows.push(r),
            }
        }
        for &r in drop_rows.iter().rev() {
            tab.rows.remove(r);
            tab.rhs.remove(r);
            tab.basis.remove(r);
        }
        for row in tab.rows.iter_mut() {
            row.truncate(artif_start);
        }
    }

    debug_assert!(tab.rows.iter().all(|r| r.len() == artif_start));
    debug_assert_eq!(tab.ncols(), if tab.rows.is_empty() { 0 } else { artif_start });

    // Phase 2 on the real objective.
    let mut cost = vec![Rat::zero(); artif_start];
    cost[..nstruct].clone_from_slice(&obj_row);
    let mut objval = Rat::zero();
    for r in 0..tab.rows.len() {
        let f = cost[tab.basis[r]].clone();
        if !f.is_zero() {
            let row = tab.rows[r].clone();
            let b = tab.rhs[r].clone();
            for (t, s) in cost.iter_mut().zip(row.iter()) {
                if !s.is_zero() {
                    *t -= &(&f * s);
                }
            }
            cost[tab.basis[r]] = Rat::zero();
            objval += &(&f * &b);
        }
    }
    match tab.run(&mut cost, &mut objval) {
        RunEnd::Unbounded => return LpSolution::Unbounded,
        RunEnd::Optimal => {}
    }

    // Read the witness back in original coordinates.
    let mut y = vec![Rat::zero(); artif_start];
    for r in 0..tab.rows.len() {
        y[tab.basis[r]] = tab.rhs[r].clone();
    }
    let mut point = vec![Rat::zero(); nvars];
    for (j, col) in cols.iter().enumerate() {
        match col {
            Col::Plus(i) => point[*i] += &y[j],
            Col::Minus(i) => point[*i] -= &y[j],
            Col::Shift(i, l) => point[*i] = l + &y[j],
            Col::Reflect(i, h) => point[*i] = h - &y[j],
        }
    }
    let value = objval + obj0;

    assert_witness(lp, &point, &value);
    LpSolution::Optimal { value, point }
}

/// Zero-residual check: the reported optimum must re-substitute exactly.
fn assert_witness(lp: &LinearProgram, point: &[Rat], value: &Rat) {
    let dot = |coeffs: &[Rat]| -> Rat {
        coeffs
            .iter()
            .zip(point)
            .map(|(c, x)| c * x)
            .sum()
    };
    for (idx, c) in lp.constraints.iter().enumerate() {
        let lhs = dot(&c.coeffs);
        let ok = match c.relation {
            Relation::Le => lhs <= c.rhs,
            Relation::Eq => lhs == c.rhs,
            Relation::Ge => lhs >= c.rhs,
        };
        assert!(ok, "witness violates constraint {idx}: {lhs} vs {}", c.rhs);
    }
    if !lp.bounds.is_empty() {
        for (i, (lo, hi)) in lp.bounds.iter().enumerate() {
            if let Some(l) = lo {
                assert!(&point[i] >= l, "witness below lower bound {i}");
            }
            if let Some(h) = hi {
                assert!(&point[i] <= h, "witness above upper bound {i}");
            }
        }
    }
    let obj = dot(&lp.objective);
    assert!(
        &obj == value,
        "witness objective {obj} differs from reported value {value}"
    );
}
