//! Mehrotra predictor-corrector interior point method on a presolved copy of
//! the program, with an active-set polish that recovers vertex-accurate
//! primal and dual solutions.

use log::trace;
use nalgebra::{DMatrix, DVector};

use super::{ConvexProgram, KktResiduals, SolveStatus, SolverOptions, SolverSolution};

type SparseRow = Vec<(usize, f64)>;

const STEP_FRACTION: f64 = 0.995;
const REG_PRIMAL: f64 = 1e-11;
const REG_DUAL: f64 = 1e-10;
const REG_BOOSTS: [f64; 4] = [1.0, 1e2, 1e4, 1e6];
const REFINE_STEPS: usize = 3;
/// Residual above which a stalled run is declared infeasible/unbounded.
const STALL_FLOOR: f64 = 1e-6;
const STALL_ITERS: usize = 10;

/// The program with fixed variables substituted out and bounds split from
/// the general inequality rows.
struct Reduced {
    n: usize,
    free: Vec<usize>,
    x_full: Vec<f64>,
    quad: DMatrix<f64>,
    lin: DVector<f64>,
    quad_zero: bool,
    a: Vec<SparseRow>,
    b: DVector<f64>,
    eq_rows: Vec<usize>,
    g: Vec<SparseRow>,
    h: DVector<f64>,
    ineq_rows: Vec<usize>,
    lower: Vec<(usize, f64)>,
    upper: Vec<(usize, f64)>,
    scale_p: f64,
    scale_d: f64,
    /// Equilibration: reduced variable `j` is `x / col[j]`, equality and
    /// inequality rows are multiplied by `row_eq` / `row_ineq`, and the
    /// objective by `cost`.
    col: Vec<f64>,
    row_eq: Vec<f64>,
    row_ineq: Vec<f64>,
    cost: f64,
}

fn presolve(p: &ConvexProgram) -> Result<Reduced, SolveStatus> {
    let n_full = p.n();
    let mut free = Vec::new();
    let mut x_full = vec![0.0; n_full];
    let mut pos = vec![usize::MAX; n_full];
    for i in 0..n_full {
        let (lo, hi) = (p.lb[i], p.ub[i]);
        if lo.is_finite() && hi - lo <= 1e-13 * (1.0 + lo.abs()) {
            x_full[i] = lo;
        } else {
            pos[i] = free.len();
            free.push(i);
        }
    }
    let n = free.len();
    let xf = DVector::from_column_slice(&x_full);

    let quad = DMatrix::from_fn(n, n, |r, c| p.quad[(free[r], free[c])]);
    let qx = &p.quad * &xf;
    let lin = DVector::from_fn(n, |r, _| p.linear[free[r]] + qx[free[r]]);
    let quad_zero = quad.iter().all(|v| *v == 0.0);

    let scale_p = 1.0
        + p.b_eq.amax().max(p.h.amax()).max(
            p.lb.iter()
                .chain(p.ub.iter())
                .filter(|v| v.is_finite())
                .fold(0.0f64, |m, v| m.max(v.abs())),
        );
    let feas_tol = 1e-9 * scale_p;

    let reduce_rows = |m: &DMatrix<f64>, rhs: &DVector<f64>, is_eq: bool| {
        let mut rows = Vec::new();
        let mut b = Vec::new();
        let mut map = Vec::new();
        for r in 0..m.nrows() {
            let mut row = SparseRow::new();
            let mut shift = 0.0;
            for c in 0..n_full {
                let v = m[(r, c)];
                if v == 0.0 {
                    continue;
                }
                if pos[c] == usize::MAX {
                    shift += v * x_full[c];
                } else {
                    row.push((pos[c], v));
                }
            }
            let rhs_r = rhs[r] - shift;
            if row.is_empty() {
                let ok = if is_eq { rhs_r.abs() <= feas_tol } else { rhs_r >= -feas_tol };
                if !ok {
                    return Err(SolveStatus::Infeasible);
                }
                continue;
            }
            rows.push(row);
            b.push(rhs_r);
            map.push(r);
        }
        Ok((rows, DVector::from_vec(b), map))
    };
    let (a, b, eq_rows) = reduce_rows(&p.a_eq, &p.b_eq, true)?;
    let (g, h, ineq_rows) = reduce_rows(&p.g, &p.h, false)?;

    let lower = free
        .iter()
        .enumerate()
        .filter(|(_, &i)| p.lb[i].is_finite())
        .map(|(j, &i)| (j, p.lb[i]))
        .collect();
    let upper = free
        .iter()
        .enumerate()
        .filter(|(_, &i)| p.ub[i].is_finite())
        .map(|(j, &i)| (j, p.ub[i]))
        .collect();

    let mut red = Reduced {
        n,
        free,
        x_full,
        quad,
        lin,
        quad_zero,
        a,
        b,
        eq_rows,
        g,
        h,
        ineq_rows,
        lower,
        upper,
        scale_p: 1.0,
        scale_d: 1.0,
        col: vec![1.0; n],
        row_eq: Vec::new(),
        row_ineq: Vec::new(),
        cost: 1.0,
    };
    red.row_eq = vec![1.0; red.a.len()];
    red.row_ineq = vec![1.0; red.g.len()];
    red.equilibrate();
    red.scale_p = 1.0
        + red.b.amax().max(red.h.amax()).max(
            red.lower
                .iter()
                .chain(red.upper.iter())
                .fold(0.0f64, |m, &(_, v)| m.max(v.abs())),
        );
    red.scale_d = 1.0 + red.lin.amax();
    Ok(red)
}

const RUIZ_PASSES: usize = 15;
const SCALE_CLAMP: (f64, f64) = (1e-4, 1e4);

impl Reduced {
    /// Ruiz equilibration of `[Q Aᵀ Gᵀ; A 0 0; G 0 0]` followed by a cost
    /// normalization, applied in place.
    fn equilibrate(&mut self) {
        let n = self.n;
        for _ in 0..RUIZ_PASSES {
            let mut cn = vec![0.0f64; n];
            for (c, col) in self.quad.column_iter().enumerate() {
                cn[c] = col.amax();
            }
            let mut rn_eq = vec![0.0f64; self.a.len()];
            let mut rn_in = vec![0.0f64; self.g.len()];
            for (rows, rn) in [(&self.a, &mut rn_eq), (&self.g, &mut rn_in)] {
                for (k, row) in rows.iter().enumerate() {
                    for &(j, v) in row {
                        cn[j] = cn[j].max(v.abs());
                        rn[k] = rn[k].max(v.abs());
                    }
                }
            }
            let factor = |v: f64| if v > 0.0 { 1.0 / v.sqrt() } else { 1.0 };
            let dc: Vec<f64> = cn.iter().map(|&v| factor(v)).collect();
            let de: Vec<f64> = rn_eq.iter().map(|&v| factor(v)).collect();
            let dg: Vec<f64> = rn_in.iter().map(|&v| factor(v)).collect();
            let clamp = |cur: f64, f: f64| (cur * f).clamp(SCALE_CLAMP.0, SCALE_CLAMP.1) / cur;
            let dc: Vec<f64> = dc.iter().zip(&self.col).map(|(&f, &c)| clamp(c, f)).collect();
            let de: Vec<f64> = de.iter().zip(&self.row_eq).map(|(&f, &c)| clamp(c, f)).collect();
            let dg: Vec<f64> = dg.iter().zip(&self.row_ineq).map(|(&f, &c)| clamp(c, f)).collect();
            if dc.iter().chain(&de).chain(&dg).all(|f| (f - 1.0).abs() < 1e-3) {
                break;
            }
            self.apply_scaling(&dc, &de, &dg);
        }
        let qmax = self.quad.amax();
        let lmax = self.lin.amax();
        let m = qmax.max(lmax);
        if m > 0.0 {
            let cost = (1.0 / m).clamp(SCALE_CLAMP.0, SCALE_CLAMP.1);
            self.quad *= cost;
            self.lin *= cost;
            self.cost = cost;
        }
    }

    fn apply_scaling(&mut self, dc: &[f64], de: &[f64], dg: &[f64]) {
        let n = self.n;
        for r in 0..n {
            for c in 0..n {
                self.quad[(r, c)] *= dc[r] * dc[c];
            }
        }
        for (j, &d) in dc.iter().enumerate() {
            self.lin[j] *= d;
            self.col[j] *= d;
        }
        for (k, row) in self.a.iter_mut().enumerate() {
            for (j, v) in row.iter_mut() {
                *v *= de[k] * dc[*j];
            }
            self.b[k] *= de[k];
            self.row_eq[k] *= de[k];
        }
        for (k, row) in self.g.iter_mut().enumerate() {
            for (j, v) in row.iter_mut() {
                *v *= dg[k] * dc[*j];
            }
            self.h[k] *= dg[k];
            self.row_ineq[k] *= dg[k];
        }
        for (j, v) in self.lower.iter_mut().chain(self.upper.iter_mut()) {
            *v /= dc[*j];
        }
    }
}

fn row_dot(row: &SparseRow, x: &DVector<f64>) -> f64 {
    row.iter().map(|&(j, v)| v * x[j]).sum()
}

fn rows_mul(rows: &[SparseRow], x: &DVector<f64>) -> DVector<f64> {
    DVector::from_iterator(rows.len(), rows.iter().map(|r| row_dot(r, x)))
}

/// `out += sign * rowsᵀ w`
fn rows_tr_mul_add(rows: &[SparseRow], w: &DVector<f64>, sign: f64, out: &mut DVector<f64>) {
    for (row, &wk) in rows.iter().zip(w.iter()) {
        if wk != 0.0 {
            for &(j, v) in row {
                out[j] += sign * v * wk;
            }
        }
    }
}

#[derive(Clone)]
struct Iterate {
    x: DVector<f64>,
    y: DVector<f64>,
    zg: DVector<f64>,
    sg: DVector<f64>,
    zl: DVector<f64>,
    sl: DVector<f64>,
    zu: DVector<f64>,
    su: DVector<f64>,
}

struct Residuals {
    rd: DVector<f64>,
    re: DVector<f64>,
    rg: DVector<f64>,
    rl: DVector<f64>,
    ru: DVector<f64>,
}

impl Reduced {
    fn m_ineq(&self) -> usize {
        self.g.len() + self.lower.len() + self.upper.len()
    }

    fn objective(&self, x: &DVector<f64>) -> f64 {
        0.5 * x.dot(&(&self.quad * x)) + self.lin.dot(x)
    }

    fn stationarity(&self, x: &DVector<f64>, y: &DVector<f64>, zg: &DVector<f64>) -> DVector<f64> {
        let mut rd = &self.quad * x + &self.lin;
        rows_tr_mul_add(&self.a, y, -1.0, &mut rd);
        rows_tr_mul_add(&self.g, zg, 1.0, &mut rd);
        rd
    }

    fn residuals(&self, it: &Iterate) -> Residuals {
        let mut rd = self.stationarity(&it.x, &it.y, &it.zg);
        for (k, &(j, _)) in self.lower.iter().enumerate() {
            rd[j] -= it.zl[k];
        }
        for (k, &(j, _)) in self.upper.iter().enumerate() {
            rd[j] += it.zu[k];
        }
        let re = rows_mul(&self.a, &it.x) - &self.b;
        let rg = rows_mul(&self.g, &it.x) + &it.sg - &self.h;
        let rl = DVector::from_iterator(
            self.lower.len(),
            self.lower.iter().enumerate().map(|(k, &(j, l))| it.x[j] - it.sl[k] - l),
        );
        let ru = DVector::from_iterator(
            self.upper.len(),
            self.upper.iter().enumerate().map(|(k, &(j, u))| it.x[j] + it.su[k] - u),
        );
        Residuals { rd, re, rg, rl, ru }
    }

    fn initial_point(&self) -> Iterate {
        let mut lo = vec![f64::NEG_INFINITY; self.n];
        let mut hi = vec![f64::INFINITY; self.n];
        for &(j, l) in &self.lower {
            lo[j] = l;
        }
        for &(j, u) in &self.upper {
            hi[j] = u;
        }
        let x = DVector::from_fn(self.n, |j, _| match (lo[j].is_finite(), hi[j].is_finite()) {
            (true, true) => 0.5 * (lo[j] + hi[j]),
            (true, false) => (lo[j] + 1.0).max(0.0),
            (false, true) => (hi[j] - 1.0).min(0.0),
            (false, false) => 0.0,
        });
        let gx = rows_mul(&self.g, &x);
        let sg = DVector::from_fn(self.g.len(), |k, _| (self.h[k] - gx[k]).max(1.0));
        let sl = DVector::from_iterator(
            self.lower.len(),
            self.lower.iter().map(|&(j, l)| (x[j] - l).max(1.0)),
        );
        let su = DVector::from_iterator(
            self.upper.len(),
            self.upper.iter().map(|&(j, u)| (u - x[j]).max(1.0)),
        );
        let z0 = self.scale_d.sqrt();
        Iterate {
            y: DVector::zeros(self.a.len()),
            zg: DVector::from_element(self.g.len(), z0),
            zl: DVector::from_element(self.lower.len(), z0),
            zu: DVector::from_element(self.upper.len(), z0),
            x,
            sg,
            sl,
            su,
        }
    }
}

/// Regularized augmented system `[H + ρI, Aᵀ; A, -δI]` with its LU factors,
/// solved against the unregularized matrix by iterative refinement.
struct Augmented {
    k: DMatrix<f64>,
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    n: usize,
    reg_p: f64,
    reg_d: f64,
}

impl Augmented {
    fn factor(mut k: DMatrix<f64>, n: usize, reg_p: f64, reg_d: f64) -> Self {
        let dim = k.nrows();
        for i in 0..n {
            k[(i, i)] += reg_p;
        }
        for i in n..dim {
            k[(i, i)] -= reg_d;
        }
        let lu = k.clone().lu();
        Augmented {
            k,
            lu,
            n,
            reg_p,
            reg_d,
        }
    }

    /// Product with the unregularized matrix.
    fn mul_exact(&self, v: &DVector<f64>) -> DVector<f64> {
        let mut out = &self.k * v;
        for i in 0..self.n {
            out[i] -= self.reg_p * v[i];
        }
        for i in self.n..v.len() {
            out[i] += self.reg_d * v[i];
        }
        out
    }

    fn solve(&self, rhs: &DVector<f64>, refine: usize) -> Option<DVector<f64>> {
        if rhs.is_empty() {
            return Some(DVector::zeros(0));
        }
        let mut sol = self.lu.solve(rhs)?;
        for _ in 0..refine {
            let r = rhs - self.mul_exact(&sol);
            let corr = self.lu.solve(&r)?;
            sol += corr;
        }
        if sol.iter().all(|v| v.is_finite()) {
            Some(sol)
        } else {
            None
        }
    }

    fn residual(&self, sol: &DVector<f64>, rhs: &DVector<f64>) -> f64 {
        (rhs - self.mul_exact(sol)).amax()
    }
}

struct Direction {
    dx: DVector<f64>,
    dy: DVector<f64>,
    dzg: DVector<f64>,
    dsg: DVector<f64>,
    dzl: DVector<f64>,
    dsl: DVector<f64>,
    dzu: DVector<f64>,
    dsu: DVector<f64>,
}

fn max_step(v: &DVector<f64>, dv: &DVector<f64>) -> f64 {
    v.iter()
        .zip(dv.iter())
        .filter(|(_, d)| **d < 0.0)
        .map(|(x, d)| -x / d)
        .fold(1.0, f64::min)
}

impl Reduced {
    fn factor(&self, it: &Iterate, boost: f64) -> Augmented {
        let n = self.n;
        let m = self.a.len();
        let mut k = DMatrix::zeros(n + m, n + m);
        k.view_mut((0, 0), (n, n)).copy_from(&self.quad);
        for (row, (z, s)) in self.g.iter().zip(it.zg.iter().zip(it.sg.iter())) {
            let w = z / s;
            for &(i, vi) in row {
                for &(j, vj) in row {
                    k[(i, j)] += w * vi * vj;
                }
            }
        }
        for (k_idx, &(j, _)) in self.lower.iter().enumerate() {
            k[(j, j)] += it.zl[k_idx] / it.sl[k_idx];
        }
        for (k_idx, &(j, _)) in self.upper.iter().enumerate() {
            k[(j, j)] += it.zu[k_idx] / it.su[k_idx];
        }
        for (r, row) in self.a.iter().enumerate() {
            for &(j, v) in row {
                k[(n + r, j)] += v;
                k[(j, n + r)] += v;
            }
        }
        Augmented::factor(k, n, boost * REG_PRIMAL, boost * REG_DUAL)
    }

    /// Newton direction for complementarity targets `rc* = s∘z - target`.
    fn direction(
        &self,
        aug: &Augmented,
        it: &Iterate,
        res: &Residuals,
        rcg: &DVector<f64>,
        rcl: &DVector<f64>,
        rcu: &DVector<f64>,
    ) -> Option<Direction> {
        let n = self.n;
        let m = self.a.len();
        let mut rx = -&res.rd;
        let tg = DVector::from_fn(self.g.len(), |k, _| (it.zg[k] * res.rg[k] - rcg[k]) / it.sg[k]);
        rows_tr_mul_add(&self.g, &tg, -1.0, &mut rx);
        for (k, &(j, _)) in self.lower.iter().enumerate() {
            rx[j] -= (rcl[k] + it.zl[k] * res.rl[k]) / it.sl[k];
        }
        for (k, &(j, _)) in self.upper.iter().enumerate() {
            rx[j] -= (it.zu[k] * res.ru[k] - rcu[k]) / it.su[k];
        }
        let mut rhs = DVector::zeros(n + m);
        rhs.rows_mut(0, n).copy_from(&rx);
        rhs.rows_mut(n, m).copy_from(&(-&res.re));
        let sol = aug.solve(&rhs, REFINE_STEPS)?;
        let dx = sol.rows(0, n).into_owned();
        let dy = -sol.rows(n, m).into_owned();

        let gdx = rows_mul(&self.g, &dx);
        let dsg = -&res.rg - gdx;
        let dzg = DVector::from_fn(self.g.len(), |k, _| (-rcg[k] - it.zg[k] * dsg[k]) / it.sg[k]);
        let dsl = DVector::from_fn(self.lower.len(), |k, _| dx[self.lower[k].0] + res.rl[k]);
        let dzl = DVector::from_fn(self.lower.len(), |k, _| (-rcl[k] - it.zl[k] * dsl[k]) / it.sl[k]);
        let dsu = DVector::from_fn(self.upper.len(), |k, _| -res.ru[k] - dx[self.upper[k].0]);
        let dzu = DVector::from_fn(self.upper.len(), |k, _| (-rcu[k] - it.zu[k] * dsu[k]) / it.su[k]);
        Some(Direction {
            dx,
            dy,
            dzg,
            dsg,
            dzl,
            dsl,
            dzu,
            dsu,
        })
    }

    fn predictor_corrector(&self, aug: &Augmented, it: &Iterate, res: &Residuals, mu: f64, m_ineq: usize) -> Option<Direction> {
        let rcg = it.sg.component_mul(&it.zg);
        let rcl = it.sl.component_mul(&it.zl);
        let rcu = it.su.component_mul(&it.zu);
        let aff = self.direction(aug, it, res, &rcg, &rcl, &rcu)?;
        let (ap, ad) = self.step_lengths(it, &aff);
        let mu_aff = if m_ineq > 0 {
            let pair = |s: &DVector<f64>, ds: &DVector<f64>, z: &DVector<f64>, dz: &DVector<f64>| {
                (s + ds * ap).dot(&(z + dz * ad))
            };
            (pair(&it.sg, &aff.dsg, &it.zg, &aff.dzg)
                + pair(&it.sl, &aff.dsl, &it.zl, &aff.dzl)
                + pair(&it.su, &aff.dsu, &it.zu, &aff.dzu))
                / m_ineq as f64
        } else {
            0.0
        };
        let sigma = if mu > 0.0 { (mu_aff / mu).clamp(0.0, 1.0).powi(3) } else { 0.0 };
        let target = sigma * mu;
        let corr = |s: &DVector<f64>, z: &DVector<f64>, ds: &DVector<f64>, dz: &DVector<f64>| {
            DVector::from_fn(s.len(), |k, _| s[k] * z[k] + ds[k] * dz[k] - target)
        };
        let rcg = corr(&it.sg, &it.zg, &aff.dsg, &aff.dzg);
        let rcl = corr(&it.sl, &it.zl, &aff.dsl, &aff.dzl);
        let rcu = corr(&it.su, &it.zu, &aff.dsu, &aff.dzu);
        self.direction(aug, it, res, &rcg, &rcl, &rcu)
    }

    fn step_lengths(&self, it: &Iterate, d: &Direction) -> (f64, f64) {
        let ap = max_step(&it.sg, &d.dsg)
            .min(max_step(&it.sl, &d.dsl))
            .min(max_step(&it.su, &d.dsu));
        let ad = max_step(&it.zg, &d.dzg)
            .min(max_step(&it.zl, &d.dzl))
            .min(max_step(&it.zu, &d.dzu));
        if self.quad_zero {
            (ap, ad)
        } else {
            let a = ap.min(ad);
            (a, a)
        }
    }
}

fn gap_sum(it: &Iterate) -> f64 {
    it.sg.dot(&it.zg) + it.sl.dot(&it.zl) + it.su.dot(&it.zu)
}

/// A full-space candidate solution.
struct Candidate {
    x: Vec<f64>,
    y: Vec<f64>,
    z: Vec<f64>,
    z_lb: Vec<f64>,
    z_ub: Vec<f64>,
    kkt: KktResiduals,
}

impl Reduced {
    fn expand(
        &self,
        p: &ConvexProgram,
        x: &DVector<f64>,
        y: &DVector<f64>,
        zg: &DVector<f64>,
        zl: &DVector<f64>,
        zu: &DVector<f64>,
    ) -> Candidate {
        let n_full = p.n();
        let mut xf = self.x_full.clone();
        for (j, &i) in self.free.iter().enumerate() {
            xf[i] = (self.col[j] * x[j]).clamp(p.lb[i], p.ub[i]);
        }
        let mut yf = vec![0.0; p.b_eq.len()];
        for (k, &r) in self.eq_rows.iter().enumerate() {
            yf[r] = self.row_eq[k] * y[k] / self.cost;
        }
        let mut zf = vec![0.0; p.h.len()];
        for (k, &r) in self.ineq_rows.iter().enumerate() {
            zf[r] = (self.row_ineq[k] * zg[k] / self.cost).max(0.0);
        }
        let mut zlb = vec![0.0; n_full];
        let mut zub = vec![0.0; n_full];
        for (k, &(j, _)) in self.lower.iter().enumerate() {
            zlb[self.free[j]] = (zl[k] / (self.cost * self.col[j])).max(0.0);
        }
        for (k, &(j, _)) in self.upper.iter().enumerate() {
            zub[self.free[j]] = (zu[k] / (self.cost * self.col[j])).max(0.0);
        }
        if self.free.len() < n_full {
            let xv = DVector::from_column_slice(&xf);
            let reduced_cost = &p.quad * &xv + &p.linear
                - p.a_eq.tr_mul(&DVector::from_column_slice(&yf))
                + p.g.tr_mul(&DVector::from_column_slice(&zf));
            let mut is_free = vec![false; n_full];
            self.free.iter().for_each(|&i| is_free[i] = true);
            for i in (0..n_full).filter(|&i| !is_free[i]) {
                let r = reduced_cost[i];
                if r >= 0.0 {
                    zlb[i] = r;
                } else {
                    zub[i] = -r;
                }
            }
        }
        let kkt = p.kkt_residuals(&xf, &yf, &zf, &zlb, &zub);
        Candidate {
            x: xf,
            y: yf,
            z: zf,
            z_lb: zlb,
            z_ub: zub,
            kkt,
        }
    }

    /// Solves the equality-constrained problem on the active set guessed
    /// from `it` and checks the result for primal and dual feasibility.
    fn polish(&self, p: &ConvexProgram, it: &Iterate) -> Option<Candidate> {
        let n = self.n;
        let mut fixed_at: Vec<Option<(f64, bool)>> = vec![None; n];
        for (k, &(j, l)) in self.lower.iter().enumerate() {
            if it.zl[k] > it.sl[k] {
                fixed_at[j] = Some((l, true));
            }
        }
        for (k, &(j, u)) in self.upper.iter().enumerate() {
            if it.zu[k] > it.su[k] {
                let take = match fixed_at[j] {
                    None => true,
                    Some(_) => {
                        let kl = self.lower.iter().position(|&(jj, _)| jj == j).unwrap();
                        it.zu[k] > it.zl[kl]
                    }
                };
                if take {
                    fixed_at[j] = Some((u, false));
                }
            }
        }
        let active: Vec<usize> = (0..self.g.len()).filter(|&k| it.zg[k] > it.sg[k]).collect();

        let mut pos = vec![usize::MAX; n];
        let mut fr = Vec::new();
        let mut xb = DVector::zeros(n);
        for j in 0..n {
            match fixed_at[j] {
                Some((v, _)) => xb[j] = v,
                None => {
                    pos[j] = fr.len();
                    fr.push(j);
                }
            }
        }
        let nf = fr.len();
        let me = self.a.len();
        let ma = active.len();
        let dim = nf + me + ma;

        let mut k = DMatrix::zeros(dim, dim);
        for (r, &i) in fr.iter().enumerate() {
            for (c, &j) in fr.iter().enumerate() {
                k[(r, c)] = self.quad[(i, j)];
            }
        }
        let qxb = &self.quad * &xb;
        let mut rhs = DVector::zeros(dim);
        for (r, &i) in fr.iter().enumerate() {
            rhs[r] = -self.lin[i] - qxb[i];
        }
        let place = |k: &mut DMatrix<f64>, rhs: &mut DVector<f64>, row: &SparseRow, at: usize, b: f64| {
            let mut shift = 0.0;
            for &(j, v) in row {
                if pos[j] == usize::MAX {
                    shift += v * xb[j];
                } else {
                    k[(at, pos[j])] += v;
                    k[(pos[j], at)] += v;
                }
            }
            rhs[at] = b - shift;
        };
        for (r, row) in self.a.iter().enumerate() {
            place(&mut k, &mut rhs, row, nf + r, self.b[r]);
        }
        for (r, &g) in active.iter().enumerate() {
            place(&mut k, &mut rhs, &self.g[g], nf + me + r, self.h[g]);
        }
        let aug = Augmented::factor(k, nf, 1e-9, 1e-9);
        let sol = aug.solve(&rhs, 10)?;
        if aug.residual(&sol, &rhs) > 1e-9 * (1.0 + rhs.amax()) {
            return None;
        }

        let mut x = xb;
        for (r, &j) in fr.iter().enumerate() {
            x[j] = sol[r];
        }
        let y = DVector::from_fn(me, |r, _| -sol[nf + r]);
        let mut zg = DVector::zeros(self.g.len());
        for (r, &g) in active.iter().enumerate() {
            zg[g] = sol[nf + me + r];
        }
        let rc = self.stationarity(&x, &y, &zg);
        let mut zl = DVector::zeros(self.lower.len());
        let mut zu = DVector::zeros(self.upper.len());
        for (k, &(j, _)) in self.lower.iter().enumerate() {
            if fixed_at[j] == Some((self.lower[k].1, true)) {
                zl[k] = rc[j];
            }
        }
        for (k, &(j, _)) in self.upper.iter().enumerate() {
            if fixed_at[j] == Some((self.upper[k].1, false)) {
                zu[k] = -rc[j];
            }
        }

        let dual_tol = 1e-9 * self.scale_d;
        let primal_tol = 1e-9 * self.scale_p;
        if zg.iter().chain(zl.iter()).chain(zu.iter()).any(|v| *v < -dual_tol) {
            return None;
        }
        let gx = rows_mul(&self.g, &x);
        if (0..self.g.len()).any(|k| gx[k] > self.h[k] + primal_tol) {
            return None;
        }
        if self.lower.iter().any(|&(j, l)| x[j] < l - primal_tol)
            || self.upper.iter().any(|&(j, u)| x[j] > u + primal_tol)
        {
            return None;
        }
        Some(self.expand(p, &x, &y, &zg, &zl, &zu))
    }
}

fn finish(p: &ConvexProgram, c: Candidate, status: SolveStatus, iterations: usize) -> SolverSolution {
    let objective = p.objective(&c.x);
    SolverSolution {
        status,
        objective,
        x: c.x,
        eq_duals: c.y,
        ineq_duals: c.z,
        lower_duals: c.z_lb,
        upper_duals: c.z_ub,
        kkt: c.kkt,
        iterations,
    }
}

fn failed(p: &ConvexProgram, status: SolveStatus, iterations: usize) -> SolverSolution {
    SolverSolution {
        status,
        x: vec![f64::NAN; p.n()],
        eq_duals: vec![0.0; p.b_eq.len()],
        ineq_duals: vec![0.0; p.h.len()],
        lower_duals: vec![0.0; p.n()],
        upper_duals: vec![0.0; p.n()],
        objective: f64::NAN,
        kkt: KktResiduals::default(),
        iterations,
    }
}

pub(super) fn solve(p: &ConvexProgram, opts: &SolverOptions) -> SolverSolution {
    let red = match presolve(p) {
        Ok(r) => r,
        Err(status) => return failed(p, status, 0),
    };
    let tol = opts.tol;
    let inner_tol = (tol * 1e-2).max(1e-14);
    let m_ineq = red.m_ineq();

    let mut it = red.initial_point();
    let mut best: Option<Candidate> = None;
    let mut primal_stall = 0;
    let mut dual_stall = 0;
    let mut prev = (f64::INFINITY, f64::INFINITY);
    let mut status = SolveStatus::IterationLimit;
    let mut iters = 0;

    let consider = |best: &mut Option<Candidate>, c: Candidate| {
        if best.as_ref().is_none_or(|b| c.kkt.max() < b.kkt.max()) {
            *best = Some(c);
        }
    };

    while iters < opts.max_iters {
        let res = red.residuals(&it);
        let pres = res
            .re
            .amax()
            .max(res.rg.amax())
            .max(res.rl.amax())
            .max(res.ru.amax())
            / red.scale_p;
        let dres = res.rd.amax() / red.scale_d;
        let pobj = red.objective(&it.x);
        let comp = gap_sum(&it) / (1.0 + pobj.abs());
        trace!("ipm {iters}: pres {pres:.2e} dres {dres:.2e} comp {comp:.2e}");

        if pres <= 1e-6 && dres <= 1e-6 && comp <= 1e-6 {
            if let Some(c) = red.polish(p, &it) {
                if c.kkt.max() <= tol {
                    return finish(p, c, SolveStatus::Optimal, iters);
                }
                consider(&mut best, c);
            }
            let c = red.expand(p, &it.x, &it.y, &it.zg, &it.zl, &it.zu);
            if c.kkt.max() <= 1e-2 * tol {
                return finish(p, c, SolveStatus::Optimal, iters);
            }
            consider(&mut best, c);
        }
        if pres <= inner_tol && dres <= inner_tol && comp <= inner_tol {
            status = SolveStatus::Optimal;
            break;
        }

        if pres > STALL_FLOOR && pres > 0.9 * prev.0 {
            primal_stall += 1;
        } else {
            primal_stall = 0;
        }
        if pres <= STALL_FLOOR && dres > STALL_FLOOR && dres > 0.9 * prev.1 {
            dual_stall += 1;
        } else {
            dual_stall = 0;
        }
        prev = (pres, dres);
        // a converged candidate outranks any later breakdown
        let give_up = |best: Option<Candidate>, status: SolveStatus| match best {
            Some(c) if c.kkt.max() <= tol => finish(p, c, SolveStatus::Optimal, iters),
            _ => failed(p, status, iters),
        };
        if primal_stall >= STALL_ITERS {
            return give_up(best, SolveStatus::Infeasible);
        }
        if dual_stall >= STALL_ITERS || it.x.amax() > 1e12 * red.scale_p {
            return give_up(best, SolveStatus::Unbounded);
        }

        iters += 1;
        let mu = if m_ineq > 0 { gap_sum(&it) / m_ineq as f64 } else { 0.0 };
        // near convergence z/s spans many magnitudes and the factorization can
        // break down; heavier regularization usually rescues the step
        let Some(d) = REG_BOOSTS.iter().find_map(|&boost| {
            let aug = red.factor(&it, boost);
            red.predictor_corrector(&aug, &it, &res, mu, m_ineq)
        }) else {
            status = SolveStatus::NumericalFailure;
            break;
        };
        let (ap, ad) = red.step_lengths(&it, &d);
        let (ap, ad) = ((STEP_FRACTION * ap).min(1.0), (STEP_FRACTION * ad).min(1.0));

        it.x += &d.dx * ap;
        it.sg += &d.dsg * ap;
        it.sl += &d.dsl * ap;
        it.su += &d.dsu * ap;
        it.y += &d.dy * ad;
        it.zg += &d.dzg * ad;
        it.zl += &d.dzl * ad;
        it.zu += &d.dzu * ad;

        let finite = it.x.iter().chain(it.y.iter()).chain(it.zg.iter()).all(|v| v.is_finite());
        if !finite {
            return failed(p, SolveStatus::NumericalFailure, iters);
        }
    }

    if let Some(c) = red.polish(p, &it) {
        consider(&mut best, c);
    }
    consider(&mut best, red.expand(p, &it.x, &it.y, &it.zg, &it.zl, &it.zu));
    let c = best.expect("at least one candidate");
    let status = if c.kkt.max() <= tol { SolveStatus::Optimal } else if status == SolveStatus::Optimal { SolveStatus::NumericalFailure } else { status };
    finish(p, c, status, iters)
}
