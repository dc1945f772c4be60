//! Lovász theta by a primal-dual interior-point method.
//!
//! Primal: minimize `<-J, X>` subject to `tr X = 1`, `X_ab = 0` on edges and
//! `X ⪰ 0`. Dual: maximize `y_0` subject to `Z = -J - y_0 I - Σ y_e E_e ⪰ 0`,
//! where `E_e = e_a e_bᵀ + e_b e_aᵀ`. Theta is the negated optimum.
//!
//! Newton steps use the HKM direction with a Mehrotra predictor-corrector.
//! The starting point `X = I/n`, `Z = (n+1)I - J` is strictly feasible.

use nalgebra::{DMatrix, DVector};

use super::graph::SimpleGraph;
use super::CapacityError;

pub const THETA_LIMIT: usize = 32;
pub const MAX_ITERATIONS: usize = 100;

struct Problem {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Problem {
    fn m(&self) -> usize {
        1 + self.edges.len()
    }

    /// `A(X)`.
    fn a(&self, x: &DMatrix<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.m());
        out[0] = x.trace();
        for (k, &(a, b)) in self.edges.iter().enumerate() {
            out[k + 1] = x[(a, b)] + x[(b, a)];
        }
        out
    }

    /// `Aᵀ(y)`.
    fn at(&self, y: &DVector<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::identity(self.n, self.n) * y[0];
        for (k, &(a, b)) in self.edges.iter().enumerate() {
            out[(a, b)] += y[k + 1];
            out[(b, a)] += y[k + 1];
        }
        out
    }

    /// Schur complement `M_ij = tr(A_i X A_j Z⁻¹)`.
    fn schur(&self, x: &DMatrix<f64>, zi: &DMatrix<f64>) -> DMatrix<f64> {
        let m = self.m();
        let mut s = DMatrix::zeros(m, m);
        s[(0, 0)] = (x * zi).trace();
        let zx = zi * x;
        for (k, &(a, b)) in self.edges.iter().enumerate() {
            let v = zx[(b, a)] + zx[(a, b)];
            s[(0, k + 1)] = v;
            s[(k + 1, 0)] = v;
        }
        for (i, &(c, d)) in self.edges.iter().enumerate() {
            for (j, &(a, b)) in self.edges.iter().enumerate().skip(i) {
                let v =
                    x[(c, a)] * zi[(b, d)] + x[(c, b)] * zi[(a, d)] + x[(d, a)] * zi[(b, c)] + x[(d, b)] * zi[(a, c)];
                s[(i + 1, j + 1)] = v;
                s[(j + 1, i + 1)] = v;
            }
        }
        s
    }
}

fn sym(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

fn inner(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.component_mul(b).sum()
}

/// Largest step in `[0, 1]` keeping `x + t d` positive definite, scaled
/// back by `tau`.
fn step_length(x: &DMatrix<f64>, d: &DMatrix<f64>, tau: f64) -> Option<f64> {
    let l = x.clone().cholesky()?.l();
    let li = l.try_inverse()?;
    let s = sym(&li * d * li.transpose());
    let lo = s.symmetric_eigenvalues().min();
    Some(if lo >= 0.0 { 1.0 } else { (tau / -lo).min(1.0) })
}

/// Cholesky (LU when that fails) with two rounds of iterative refinement.
fn solve(s: &DMatrix<f64>, rhs: &DVector<f64>) -> Option<DVector<f64>> {
    let chol = s.clone().cholesky();
    let lu = if chol.is_none() { Some(s.clone().lu()) } else { None };
    let raw = |r: &DVector<f64>| match (&chol, &lu) {
        (Some(c), _) => Some(c.solve(r)),
        (None, Some(l)) => l.solve(r),
        _ => None,
    };
    let mut x = raw(rhs)?;
    for _ in 0..2 {
        let r = rhs - s * &x;
        x += raw(&r)?;
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// `θ(G)` within `tol`, which must be at least `1e-8`.
///
/// Both iterates stay feasible: `Z` is recomputed from `y`, and every primal
/// direction is projected onto `A(dX) = b - A(X)`. The gap `<X, Z>` then
/// brackets θ between `<J, X>` and `-y_0`.
pub fn lovasz_theta(g: &SimpleGraph, tol: f64) -> Result<f64, CapacityError> {
    let n = g.vertex_count();
    if n > THETA_LIMIT {
        return Err(CapacityError::TooLarge {
            what: "lovasz theta",
            size: n,
            limit: THETA_LIMIT,
        });
    }
    if tol.is_nan() || tol < 1e-8 {
        return Err(CapacityError::BadTolerance(tol));
    }
    if n == 0 {
        return Ok(0.0);
    }
    if g.edge_count() == 0 {
        return Ok(n as f64);
    }
    let p = Problem { n, edges: g.edges() };
    let nf = n as f64;
    let c = -DMatrix::from_element(n, n, 1.0);
    let mut b = DVector::zeros(p.m());
    b[0] = 1.0;

    let mut x = DMatrix::identity(n, n) / nf;
    let mut y = DVector::zeros(p.m());
    y[0] = -(nf + 1.0);
    let mut z = &c - p.at(&y);
    let fail = |iterations, gap| CapacityError::NumericalFailure { iterations, gap };

    // Orthogonal projection of `d` onto `A(d) = r`; the `A_i` are mutually orthogonal.
    let project = |mut d: DMatrix<f64>, r: &DVector<f64>| {
        for (k, &(a, b)) in p.edges.iter().enumerate() {
            d[(a, b)] = r[k + 1] / 2.0;
            d[(b, a)] = r[k + 1] / 2.0;
        }
        let shift = (r[0] - d.trace()) / nf;
        for i in 0..n {
            d[(i, i)] += shift;
        }
        d
    };

    for it in 0..MAX_ITERATIONS {
        let lower = -inner(&c, &x);
        let upper = -y[0];
        let gap = inner(&x, &z);
        let rp = &b - p.a(&x);
        // θ lies in [lower, upper], so the midpoint is within gap / 2.
        if gap <= 2.0 * tol && rp.amax() <= 1e-8 {
            return Ok(0.5 * (lower + upper));
        }
        let mu = gap / nf;
        let zi = z.clone().cholesky().ok_or_else(|| fail(it, gap))?.inverse();
        let schur = p.schur(&x, &zi);

        // Returns (dX, dy, dZ) for the complementarity target `rc`.
        let direction = |rc: &DMatrix<f64>| -> Option<(DMatrix<f64>, DVector<f64>, DMatrix<f64>)> {
            let dy = solve(&schur, &(&rp - p.a(rc)))?;
            let dz = -p.at(&dy);
            let dx = project(sym(rc - &x * &dz * &zi), &rp);
            Some((dx, dy, dz))
        };

        let rc_aff = -x.clone();
        let (dxa, _, dza) = direction(&rc_aff).ok_or_else(|| fail(it, gap))?;
        let ap = step_length(&x, &dxa, 1.0).ok_or_else(|| fail(it, gap))?;
        let ad = step_length(&z, &dza, 1.0).ok_or_else(|| fail(it, gap))?;
        let mu_aff = inner(&(&x + &dxa * ap), &(&z + &dza * ad)) / nf;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        let rc = &zi * (sigma * mu) - &x - &dxa * &dza * &zi;
        let (dx, dy, dz) = direction(&rc).ok_or_else(|| fail(it, gap))?;
        let ap = step_length(&x, &dx, 0.98).ok_or_else(|| fail(it, gap))?;
        let ad = step_length(&z, &dz, 0.98).ok_or_else(|| fail(it, gap))?;
        x = sym(&x + &dx * ap);
        y += &dy * ad;
        z = &c - p.at(&y);
    }
    Err(fail(MAX_ITERATIONS, inner(&x, &z)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        let t = lovasz_theta(&SimpleGraph::cycle(5), 1e-8).unwrap();
        assert!((t - 5f64.sqrt()).abs() < 1e-6, "{t}");
        for n in 1..=8 {
            assert!((lovasz_theta(&SimpleGraph::empty(n), 1e-8).unwrap() - n as f64).abs() < 1e-6);
            let k = lovasz_theta(&SimpleGraph::complete(n), 1e-8).unwrap();
            assert!((k - 1.0).abs() < 1e-6, "K{n}: {k}");
        }
    }

    #[test]
    fn odd_cycles_and_petersen() {
        // θ(C_n) = n cos(π/n) / (1 + cos(π/n)) for odd n.
        for n in [7usize, 9] {
            let c = (std::f64::consts::PI / n as f64).cos();
            let want = n as f64 * c / (1.0 + c);
            let got = lovasz_theta(&SimpleGraph::cycle(n), 1e-8).unwrap();
            assert!((got - want).abs() < 1e-6, "C{n}: {got} vs {want}");
        }
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        let petersen = SimpleGraph::from_edges(10, outer.chain(spokes).chain(inner));
        assert!((lovasz_theta(&petersen, 1e-8).unwrap() - 4.0).abs() < 1e-6);
    }

    #[test]
    fn degenerate_optimum() {
        // P4 has three maximum independent sets.
        let p4 = SimpleGraph::from_edges(4, [(0, 1), (0, 2), (1, 3)]);
        assert!((lovasz_theta(&p4, 1e-7).unwrap() - 2.0).abs() < 1e-7);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            lovasz_theta(&SimpleGraph::empty(40), 1e-6),
            Err(CapacityError::TooLarge { .. })
        ));
        assert!(matches!(
            lovasz_theta(&SimpleGraph::cycle(5), 1e-12),
            Err(CapacityError::BadTolerance(_))
        ));
    }
}
