//! Small-dimension linear inequality machinery.
//!
//! [`IneqSystem`] holds `Σ aᵢxᵢ ≤ c` rows over named variables and supports
//! Fourier-Motzkin elimination; [`Region2D`] is the two-variable polygon
//! `{a·x1 + b·x2 ≤ c} ∩ {x1, x2 ≥ 0}` in which gDoF and rate regions live.
//!
//! Arithmetic is `f64`. Feasibility tests accept a slack of `tol · (1 + |c|)`
//! per row, so the same tolerance works for regions in gDoF units (≈ 1) and
//! in bits per block (hundreds).

use std::fmt;

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Coefficients below this magnitude are treated as zero during elimination.
const COEF_EPS: f64 = 1e-12;

#[inline]
fn slack(c: f64, tol: f64) -> f64 {
    tol * (1.0 + c.abs())
}

/// One row `Σ coeffs[i]·x_i ≤ rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct IneqRow {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

impl IneqRow {
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|a| a.abs() <= COEF_EPS)
    }

    fn normalized(mut self) -> Self {
        let m = self.coeffs.iter().fold(0.0f64, |m, a| m.max(a.abs()));
        if m > COEF_EPS {
            for a in &mut self.coeffs {
                *a /= m;
            }
            self.rhs /= m;
        }
        for a in &mut self.coeffs {
            if a.abs() <= COEF_EPS {
                *a = 0.0;
            }
        }
        self
    }
}

/// Linear inequality system over named variables, with a per-variable
/// nonnegativity flag kept separate from the rows.
#[derive(Debug, Clone, PartialEq)]
pub struct IneqSystem {
    vars: Vec<String>,
    rows: Vec<IneqRow>,
    nonneg: Vec<bool>,
}

impl IneqSystem {
    pub fn new<S: AsRef<str>>(vars: &[S]) -> Result<Self> {
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::Malformed(format!("duplicate variable `{v}`")));
            }
        }
        let n = vars.len();
        Ok(IneqSystem {
            vars,
            rows: Vec::new(),
            nonneg: vec![false; n],
        })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn rows(&self) -> &[IneqRow] {
        &self.rows
    }

    pub fn index_of(&self, var: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == var)
            .ok_or_else(|| Error::UnknownVariable(var.to_string()))
    }

    pub fn is_nonneg(&self, var: &str) -> Result<bool> {
        Ok(self.nonneg[self.index_of(var)?])
    }

    pub fn nonneg_vars(&self) -> impl Iterator<Item = &str> {
        self.vars
            .iter()
            .zip(&self.nonneg)
            .filter(|(_, &n)| n)
            .map(|(v, _)| v.as_str())
    }

    pub fn set_nonneg(&mut self, var: &str) -> Result<()> {
        let i = self.index_of(var)?;
        self.nonneg[i] = true;
        Ok(())
    }

    /// Adds a dense row; `coeffs` must have one entry per variable.
    pub fn push_dense(&mut self, coeffs: Vec<f64>, rhs: f64) -> Result<()> {
        if coeffs.len() != self.vars.len() {
            return Err(Error::Malformed(format!(
                "row has {} coefficients for {} variables",
                coeffs.len(),
                self.vars.len()
            )));
        }
        if !rhs.is_finite() || coeffs.iter().any(|a| !a.is_finite()) {
            return Err(Error::Malformed("non-finite coefficient".into()));
        }
        self.rows.push(IneqRow { coeffs, rhs });
        Ok(())
    }

    /// Adds `Σ coef·var ≤ rhs` from a sparse `(name, coef)` list.
    pub fn push(&mut self, terms: &[(&str, f64)], rhs: f64) -> Result<()> {
        let mut coeffs = vec![0.0; self.vars.len()];
        for &(v, a) in terms {
            coeffs[self.index_of(v)?] += a;
        }
        self.push_dense(coeffs, rhs)
    }

    /// Adds `Σ coef·var = rhs` as two opposing rows.
    pub fn push_eq(&mut self, terms: &[(&str, f64)], rhs: f64) -> Result<()> {
        self.push(terms, rhs)?;
        let neg: Vec<(&str, f64)> = terms.iter().map(|&(v, a)| (v, -a)).collect();
        self.push(&neg, -rhs)
    }

    /// Whether `point` (one value per variable) satisfies every row and
    /// nonnegativity flag.
    pub fn contains(&self, point: &[f64], tol: f64) -> bool {
        if point.len() != self.vars.len() {
            return false;
        }
        let nonneg_ok = point
            .iter()
            .zip(&self.nonneg)
            .all(|(&x, &n)| !n || x >= -tol);
        nonneg_ok
            && self.rows.iter().all(|r| {
                let lhs: f64 = r.coeffs.iter().zip(point).map(|(a, x)| a * x).sum();
                lhs <= r.rhs + slack(r.rhs, tol)
            })
    }

    /// Fourier-Motzkin elimination of one variable. Every pair of an upper
    /// and a lower bound on `var` produces one row; rows not involving `var`
    /// are kept. Nonnegativity of `var` enters as the row `−var ≤ 0`.
    /// Redundant rows are not removed here; see [`IneqSystem::prune`].
    pub fn eliminate(&self, var: &str) -> Result<IneqSystem> {
        let k = self.index_of(var)?;
        let mut rows: Vec<&IneqRow> = self.rows.iter().collect();
        let nonneg_row;
        if self.nonneg[k] {
            let mut coeffs = vec![0.0; self.vars.len()];
            coeffs[k] = -1.0;
            nonneg_row = IneqRow { coeffs, rhs: 0.0 };
            rows.push(&nonneg_row);
        }

        let drop_k = |coeffs: &[f64]| -> Vec<f64> {
            coeffs
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != k)
                .map(|(_, &a)| a)
                .collect()
        };

        let (mut upper, mut lower, mut out) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            let a = r.coeffs[k];
            if a > COEF_EPS {
                upper.push(r);
            } else if a < -COEF_EPS {
                lower.push(r);
            } else {
                out.push(IneqRow {
                    coeffs: drop_k(&r.coeffs),
                    rhs: r.rhs,
                });
            }
        }
        for u in &upper {
            let su = 1.0 / u.coeffs[k];
            for l in &lower {
                let sl = -1.0 / l.coeffs[k];
                let mut coeffs: Vec<f64> = u
                    .coeffs
                    .iter()
                    .zip(&l.coeffs)
                    .map(|(a, b)| a * su + b * sl)
                    .collect();
                coeffs[k] = 0.0;
                out.push(
                    IneqRow {
                        coeffs: drop_k(&coeffs),
                        rhs: u.rhs * su + l.rhs * sl,
                    }
                    .normalized(),
                );
            }
        }

        Ok(IneqSystem {
            vars: self.vars.iter().filter(|v| *v != var).cloned().collect(),
            rows: out,
            nonneg: self
                .nonneg
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != k)
                .map(|(_, &b)| b)
                .collect(),
        })
    }

    /// Whether the system has a row `0 ≤ c` with `c < 0`.
    pub fn is_trivially_infeasible(&self, tol: f64) -> bool {
        self.rows
            .iter()
            .any(|r| r.is_zero() && r.rhs < -slack(r.rhs, tol))
    }

    /// Drops rows `0 ≤ c` with `c ≥ 0` and rows implied by a single other
    /// row under the nonnegativity flags (`aᵢ ≤ aⱼ` on nonnegative variables,
    /// equal on free ones, and `cⱼ ≤ cᵢ`).
    pub fn prune(&mut self, tol: f64) {
        let rows = std::mem::take(&mut self.rows);
        let mut rows: Vec<IneqRow> = rows.into_iter().map(IneqRow::normalized).collect();
        if let Some(bad) = rows
            .iter()
            .find(|r| r.is_zero() && r.rhs < -slack(r.rhs, tol))
            .cloned()
        {
            self.rows = vec![bad];
            return;
        }
        rows.retain(|r| !r.is_zero());

        let implies = |j: &IneqRow, i: &IneqRow| -> bool {
            let coeffs_ok = i.coeffs.iter().zip(&j.coeffs).zip(&self.nonneg).all(
                |((&ai, &aj), &nn)| {
                    if nn {
                        ai <= aj + tol
                    } else {
                        (ai - aj).abs() <= tol
                    }
                },
            );
            coeffs_ok && j.rhs <= i.rhs + slack(i.rhs, tol)
        };

        let mut keep = vec![true; rows.len()];
        for i in 0..rows.len() {
            for j in 0..rows.len() {
                if i != j && keep[j] && implies(&rows[j], &rows[i]) {
                    keep[i] = false;
                    break;
                }
            }
        }
        self.rows = rows
            .into_iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(r, _)| r)
            .collect();
    }
}

impl fmt::Display for IneqSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let mut first = true;
            for (a, v) in r.coeffs.iter().zip(&self.vars) {
                if *a == 0.0 {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                write!(f, "{a}·{v}")?;
                first = false;
            }
            if first {
                write!(f, "0")?;
            }
            writeln!(f, " ≤ {}", r.rhs)?;
        }
        let nn: Vec<&str> = self.nonneg_vars().collect();
        if !nn.is_empty() {
            writeln!(f, "{} ≥ 0", nn.join(", "))?;
        }
        Ok(())
    }
}

pub fn fm_eliminate(system: &IneqSystem, var: &str) -> Result<IneqSystem> {
    system.eliminate(var)
}

/// Exact projection of `system` onto the two `keep` variables, intersected
/// with the nonnegative quadrant. Rows are pruned after every elimination and
/// the result passes through [`Region2D::remove_redundant`].
pub fn project(system: &IneqSystem, keep: [&str; 2]) -> Result<Region2D> {
    let k0 = system.index_of(keep[0])?;
    let k1 = system.index_of(keep[1])?;
    if k0 == k1 {
        return Err(Error::Malformed("projection needs two distinct variables".into()));
    }
    let mut sys = system.clone();
    sys.prune(DEFAULT_TOL);
    for v in system.vars() {
        if v != keep[0] && v != keep[1] {
            sys = sys.eliminate(v)?;
            sys.prune(DEFAULT_TOL);
        }
    }
    let (i0, i1) = (sys.index_of(keep[0])?, sys.index_of(keep[1])?);
    let mut region = Region2D::new("projection");
    if sys.is_trivially_infeasible(DEFAULT_TOL) {
        region.rows.push(HalfPlane::infeasible());
        return Ok(region);
    }
    for r in sys.rows() {
        let (a, b) = (r.coeffs[i0], r.coeffs[i1]);
        if a == 0.0 && b == 0.0 {
            continue;
        }
        region.push(a, b, r.rhs)?;
    }
    Ok(region.remove_redundant())
}

/// Half-plane `a·x1 + b·x2 ≤ c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl HalfPlane {
    fn infeasible() -> Self {
        HalfPlane {
            a: 1.0,
            b: 1.0,
            c: -1.0,
        }
    }

    #[inline]
    fn eval(&self, p: (f64, f64)) -> f64 {
        self.a * p.0 + self.b * p.1
    }

    #[inline]
    fn holds(&self, p: (f64, f64), tol: f64) -> bool {
        self.eval(p) <= self.c + slack(self.c, tol)
    }
}

/// Largest `t` with `(t, t)` in a region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricMax {
    pub value: f64,
    /// The region is the origin alone or has no points at all.
    pub empty: bool,
}

/// Polygon `{a·x1 + b·x2 ≤ c for every row} ∩ {x1 ≥ 0, x2 ≥ 0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Region2D {
    pub rows: Vec<HalfPlane>,
    pub label: String,
}

impl Region2D {
    pub fn new(label: impl Into<String>) -> Self {
        Region2D {
            rows: Vec::new(),
            label: label.into(),
        }
    }

    pub fn push(&mut self, a: f64, b: f64, c: f64) -> Result<()> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::Malformed(format!("non-finite row ({a}, {b}, {c})")));
        }
        if a == 0.0 && b == 0.0 {
            return Err(Error::Malformed("row with a = b = 0".into()));
        }
        self.rows.push(HalfPlane { a, b, c });
        Ok(())
    }

    pub fn with_row(mut self, a: f64, b: f64, c: f64) -> Result<Self> {
        self.push(a, b, c)?;
        Ok(self)
    }

    pub fn contains(&self, p: (f64, f64)) -> bool {
        self.contains_tol(p, DEFAULT_TOL)
    }

    pub fn contains_tol(&self, p: (f64, f64), tol: f64) -> bool {
        p.0 >= -tol && p.1 >= -tol && self.rows.iter().all(|h| h.holds(p, tol))
    }

    /// Rows plus the two axis half-planes.
    fn with_axes(&self) -> Vec<HalfPlane> {
        let mut all = self.rows.clone();
        all.push(HalfPlane {
            a: -1.0,
            b: 0.0,
            c: 0.0,
        });
        all.push(HalfPlane {
            a: 0.0,
            b: -1.0,
            c: 0.0,
        });
        all
    }

    /// Feasible pairwise intersections of boundary lines, deduplicated,
    /// without any boundedness check.
    fn raw_vertices(rows: &[HalfPlane], tol: f64) -> Vec<(f64, f64)> {
        let mut pts: Vec<(f64, f64)> = Vec::new();
        for i in 0..rows.len() {
            for j in (i + 1)..rows.len() {
                let (p, q) = (rows[i], rows[j]);
                let det = p.a * q.b - p.b * q.a;
                let scale = (p.a.abs() + p.b.abs()) * (q.a.abs() + q.b.abs());
                if det.abs() <= 1e-12 * scale {
                    continue;
                }
                let x = (p.c * q.b - p.b * q.c) / det;
                let y = (p.a * q.c - p.c * q.a) / det;
                let v = (x, y);
                if !rows.iter().all(|h| h.holds(v, tol)) {
                    continue;
                }
                let dup = pts.iter().any(|w| {
                    let s = 1.0 + w.0.abs().max(w.1.abs());
                    (w.0 - v.0).abs() <= tol * s && (w.1 - v.1).abs() <= tol * s
                });
                if !dup {
                    pts.push(v);
                }
            }
        }
        pts
    }

    /// Extreme rays of the recession cone `{d ≥ 0 : a·d ≤ 0 for all rows}`.
    fn recession_rays(rows: &[HalfPlane], tol: f64) -> Vec<(f64, f64)> {
        let mut cands = vec![(1.0, 0.0), (0.0, 1.0)];
        for h in rows {
            for d in [(h.b, -h.a), (-h.b, h.a)] {
                if d.0 >= 0.0 && d.1 >= 0.0 && (d.0 > 0.0 || d.1 > 0.0) {
                    let n = d.0.hypot(d.1);
                    cands.push((d.0 / n, d.1 / n));
                }
            }
        }
        cands
            .into_iter()
            .filter(|&d| {
                rows.iter()
                    .all(|h| h.eval(d) <= tol * (h.a.abs() + h.b.abs()))
            })
            .collect()
    }

    /// Vertices in counterclockwise order; empty for an infeasible region.
    pub fn vertices(&self) -> Result<Vec<(f64, f64)>> {
        self.vertices_tol(DEFAULT_TOL)
    }

    pub fn vertices_tol(&self, tol: f64) -> Result<Vec<(f64, f64)>> {
        let rows = self.with_axes();
        // adding 0.0 turns -0.0 into 0.0
        let mut pts: Vec<(f64, f64)> = Self::raw_vertices(&rows, tol)
            .into_iter()
            .map(|(x, y)| (x + 0.0, y + 0.0))
            .collect();
        if pts.is_empty() {
            return Ok(pts);
        }
        if !Self::recession_rays(&rows, tol).is_empty() {
            return Err(Error::Unbounded);
        }
        let n = pts.len() as f64;
        let cx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let cy = pts.iter().map(|p| p.1).sum::<f64>() / n;
        pts.sort_by(|p, q| {
            let ap = (p.1 - cy).atan2(p.0 - cx);
            let aq = (q.1 - cy).atan2(q.0 - cx);
            ap.total_cmp(&aq)
        });
        Ok(pts)
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(self.vertices(), Err(Error::Unbounded))
    }

    /// The region is empty or only the origin.
    pub fn is_null(&self) -> bool {
        match self.vertices() {
            Ok(v) => v
                .iter()
                .all(|p| p.0.abs() <= DEFAULT_TOL && p.1.abs() <= DEFAULT_TOL),
            Err(_) => false,
        }
    }

    /// `max { t : (t, t) ∈ region }`, zero for a region without points.
    /// Errors on unbounded regions.
    pub fn symmetric_max(&self) -> Result<SymmetricMax> {
        let verts = self.vertices()?;
        let empty = verts
            .iter()
            .all(|p| p.0.abs() <= DEFAULT_TOL && p.1.abs() <= DEFAULT_TOL);
        if verts.is_empty() {
            return Ok(SymmetricMax { value: 0.0, empty });
        }
        let mut hi = f64::INFINITY;
        for h in &self.rows {
            let s = h.a + h.b;
            if s > COEF_EPS * (h.a.abs() + h.b.abs()) {
                hi = hi.min(h.c / s);
            }
        }
        if hi.is_infinite() {
            return Err(Error::Unbounded);
        }
        Ok(SymmetricMax {
            value: hi.max(0.0),
            empty,
        })
    }

    /// Minimal subset of rows with the same feasible set. Rows are dropped
    /// one at a time when the remaining rows already imply them.
    pub fn remove_redundant(&self) -> Region2D {
        let tol = DEFAULT_TOL;
        let mut rows = self.rows.clone();
        let mut i = 0;
        while i < rows.len() {
            let target = rows[i];
            let mut rest: Vec<HalfPlane> = rows
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, h)| *h)
                .collect();
            rest.push(HalfPlane { a: -1.0, b: 0.0, c: 0.0 });
            rest.push(HalfPlane { a: 0.0, b: -1.0, c: 0.0 });
            let verts = Self::raw_vertices(&rest, tol);
            let implied = verts.is_empty()
                || (verts.iter().all(|&v| target.holds(v, tol))
                    && Self::recession_rays(&rest, tol)
                        .iter()
                        .all(|&d| target.eval(d) <= tol * (target.a.abs() + target.b.abs())));
            if implied {
                rows.remove(i);
            } else {
                i += 1;
            }
        }
        if rows.is_empty() && self.rows.iter().any(|h| h.c < 0.0) && Self::raw_vertices(&self.with_axes(), tol).is_empty() {
            rows.push(HalfPlane::infeasible());
        }
        Region2D {
            rows,
            label: self.label.clone(),
        }
    }

    /// Same region with every right-hand side multiplied by `k > 0`.
    pub fn scaled(&self, k: f64) -> Region2D {
        Region2D {
            rows: self
                .rows
                .iter()
                .map(|h| HalfPlane { c: h.c * k, ..*h })
                .collect(),
            label: self.label.clone(),
        }
    }

    /// Swaps the two coordinates.
    pub fn mirrored(&self) -> Region2D {
        Region2D {
            rows: self
                .rows
                .iter()
                .map(|h| HalfPlane { a: h.b, b: h.a, c: h.c })
                .collect(),
            label: self.label.clone(),
        }
    }
}

pub fn vertices_2d(region: &Region2D) -> Result<Vec<(f64, f64)>> {
    region.vertices()
}

pub fn symmetric_max(region: &Region2D) -> Result<SymmetricMax> {
    region.symmetric_max()
}

pub fn remove_redundant(region: &Region2D) -> Region2D {
    region.remove_redundant()
}

pub fn contains(region: &Region2D, point: (f64, f64), tol: f64) -> bool {
    region.contains_tol(point, tol)
}

/// Equality of two bounded regions: every vertex of each lies in the other
/// and the symmetric maxima agree, all within `tol`.
pub fn regions_equal(r1: &Region2D, r2: &Region2D, tol: f64) -> bool {
    let (v1, v2) = match (r1.vertices_tol(tol), r2.vertices_tol(tol)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return false,
    };
    if v1.is_empty() || v2.is_empty() {
        return v1.is_empty() && v2.is_empty();
    }
    let mutual = v1.iter().all(|&p| r2.contains_tol(p, tol))
        && v2.iter().all(|&p| r1.contains_tol(p, tol));
    let sym = match (r1.symmetric_max(), r2.symmetric_max()) {
        (Ok(a), Ok(b)) => (a.value - b.value).abs() <= slack(a.value, tol),
        _ => false,
    };
    mutual && sym
}

fn point_segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p.0 - a.0 - t * dx).hypot(p.1 - a.1 - t * dy)
}

fn distance_to_polygon(p: (f64, f64), region: &Region2D, verts: &[(f64, f64)]) -> f64 {
    if region.contains(p) {
        return 0.0;
    }
    match verts.len() {
        0 => f64::INFINITY,
        1 => (p.0 - verts[0].0).hypot(p.1 - verts[0].1),
        n => (0..n)
            .map(|i| point_segment_distance(p, verts[i], verts[(i + 1) % n]))
            .fold(f64::INFINITY, f64::min),
    }
}

/// Symmetric Hausdorff distance between two bounded convex regions
/// (Euclidean). Zero for two empty regions, infinite if only one is empty.
pub fn hausdorff_distance(r1: &Region2D, r2: &Region2D) -> Result<f64> {
    let v1 = r1.vertices()?;
    let v2 = r2.vertices()?;
    if v1.is_empty() || v2.is_empty() {
        return Ok(if v1.is_empty() && v2.is_empty() {
            0.0
        } else {
            f64::INFINITY
        });
    }
    let d12 = v1
        .iter()
        .map(|&p| distance_to_polygon(p, r2, &v2))
        .fold(0.0, f64::max);
    let d21 = v2
        .iter()
        .map(|&p| distance_to_polygon(p, r1, &v1))
        .fold(0.0, f64::max);
    Ok(d12.max(d21))
}
