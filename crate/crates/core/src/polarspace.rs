//! The classical polar spaces over their standard forms.
//!
//! Quadrics use an upper-triangular coefficient matrix A with Q(x) = x^T A x.
//! The bilinear form is then G = A + A^T. Hermitian varieties use
//! h(x,y) = x^T A conj(y), symplectic spaces x^T A y with A alternating.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::gf::{Elem, Field};
use crate::projspace::{nullspace, theta, ProjectiveSpace, Subspace};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Hyperbolic,
    Parabolic,
    Elliptic,
    Hermitian,
    Symplectic,
}

impl Family {
    /// Short label: Q+, Q, Q-, H, W.
    pub fn symbol(self) -> &'static str {
        match self {
            Family::Hyperbolic => "Q+",
            Family::Parabolic => "Q",
            Family::Elliptic => "Q-",
            Family::Hermitian => "H",
            Family::Symplectic => "W",
        }
    }

    pub fn is_quadric(self) -> bool {
        matches!(
            self,
            Family::Hyperbolic | Family::Parabolic | Family::Elliptic
        )
    }

    fn check_dim(self, n: usize) -> Result<()> {
        let ok = match self {
            Family::Hyperbolic | Family::Elliptic | Family::Symplectic => n % 2 == 1,
            Family::Parabolic => n % 2 == 0 && n >= 2,
            Family::Hermitian => n >= 2,
        };
        if ok {
            Ok(())
        } else {
            param(format!(
                "{} needs {} ambient dimension, got {n}",
                self.symbol(),
                match self {
                    Family::Parabolic => "an even, positive",
                    Family::Hermitian => "at least 2 as",
                    _ => "an odd",
                }
            ))
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Closed-form number of points. `q` is the square root of the field order
/// for Hermitian varieties.
pub fn point_count(family: Family, n: usize, q: u64) -> u64 {
    let qi = q as i128;
    let v: i128 = match family {
        Family::Hyperbolic => {
            let m = (n - 1) / 2;
            (qi.pow(m as u32) + 1) * theta(m as i64, q) as i128
        }
        Family::Parabolic => theta(n as i64 - 1, q) as i128,
        Family::Elliptic => {
            let m = (n - 1) / 2;
            (qi.pow(m as u32 + 1) + 1) * (qi.pow(m as u32) - 1) / (qi - 1)
        }
        Family::Hermitian => {
            let s: i128 = if n % 2 == 0 { 1 } else { -1 };
            (qi.pow(n as u32 + 1) + s) * (qi.pow(n as u32) - s) / (qi * qi - 1)
        }
        Family::Symplectic => theta(n as i64, q) as i128,
    };
    v as u64
}

/// Dimension of the generators.
pub fn generator_dim(family: Family, n: usize) -> usize {
    match family {
        Family::Hyperbolic => (n - 1) / 2,
        Family::Parabolic => n / 2 - 1,
        Family::Elliptic => (n - 1) / 2 - 1,
        Family::Hermitian => (n - 1) / 2,
        Family::Symplectic => (n - 1) / 2,
    }
}

/// A form together with its family tag.
#[derive(Clone, Debug)]
pub struct FormSpec {
    pub family: Family,
    pub n: usize,
    pub matrix: Vec<Vec<Elem>>,
}

impl FormSpec {
    /// The standard form of the family in PG(n, field).
    pub fn standard(family: Family, n: usize, field: &Field) -> Result<FormSpec> {
        family.check_dim(n)?;
        let w = n + 1;
        let mut a = vec![vec![Elem::ZERO; w]; w];
        match family {
            Family::Hyperbolic => {
                for i in (0..w).step_by(2) {
                    a[i][i + 1] = Elem::ONE;
                }
            }
            Family::Parabolic => {
                a[0][0] = Elem::ONE;
                for i in (1..w).step_by(2) {
                    a[i][i + 1] = Elem::ONE;
                }
            }
            Family::Elliptic => {
                let (b, c) = least_irreducible_binary(field);
                a[0][0] = Elem::ONE;
                a[0][1] = b;
                a[1][1] = c;
                for i in (2..w).step_by(2) {
                    a[i][i + 1] = Elem::ONE;
                }
            }
            Family::Hermitian => {
                if field.sqrt_order().is_none() {
                    return param(format!(
                        "Hermitian varieties need a field of square order, got {}",
                        field.order()
                    ));
                }
                for (i, row) in a.iter_mut().enumerate() {
                    row[i] = Elem::ONE;
                }
            }
            Family::Symplectic => {
                let minus = field.neg(Elem::ONE);
                for i in (0..w).step_by(2) {
                    a[i][i + 1] = Elem::ONE;
                    a[i + 1][i] = minus;
                }
            }
        }
        Ok(FormSpec {
            family,
            n,
            matrix: a,
        })
    }
}

/// x^2 + b x y + c y^2 irreducible with (b, c) least by representative.
fn least_irreducible_binary(field: &Field) -> (Elem, Elem) {
    for b in field.elements() {
        for c in field.elements() {
            // irreducible iff t^2 + b t + c has no root
            let rootless = field
                .elements()
                .all(|t| !field.add(field.add(field.mul(t, t), field.mul(b, t)), c).is_zero());
            if rootless {
                return (b, c);
            }
        }
    }
    unreachable!("every finite field has an irreducible quadratic")
}

/// What a plane of PG(5,q^2) cuts out of H(5,q^2).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaneSection {
    HermitianCurve,
    BaerCone,
    SingleLine,
    Generator,
}

/// A (possibly truncated) cone with vertex subspace and base point set.
#[derive(Clone, Debug)]
pub struct Cone {
    pub vertex: Subspace,
    pub base: Vec<u32>,
    pub points: Vec<u32>,
    pub truncated: bool,
}

/// Builds the cone with given vertex over a base point set of `pg`.
pub fn make_cone(pg: &ProjectiveSpace, vertex: &Subspace, base: &[u32], truncated: bool) -> Result<Cone> {
    let vpts = pg.subspace_points(vertex);
    if base.iter().any(|b| vpts.binary_search(b).is_ok()) {
        return param("cone base meets the vertex");
    }
    let mut pts: Vec<u32> = Vec::new();
    for &b in base {
        let s = pg.join(vertex, &pg.point_subspace(b));
        pts.extend(
            pg.subspace_points(&s)
                .into_iter()
                .filter(|x| vpts.binary_search(x).is_err()),
        );
    }
    pts.sort_unstable();
    pts.dedup();
    let q = pg.q();
    let expected = q.pow((vertex.dim() + 1) as u32) * base.len() as u64;
    if pts.len() as u64 != expected {
        return param(format!(
            "cone lines overlap: {} points instead of {expected}",
            pts.len()
        ));
    }
    if !truncated {
        pts.extend(vpts);
        pts.sort_unstable();
    }
    let mut base = base.to_vec();
    base.sort_unstable();
    Ok(Cone {
        vertex: vertex.clone(),
        base,
        points: pts,
        truncated,
    })
}

/// Points of P collinear with a single point or with a collinear pair.
#[derive(Copy, Clone, Debug)]
pub enum Anchor {
    Point(u32),
    Pair(u32, u32),
}

struct Level {
    spaces: Vec<Subspace>,
    points: Vec<Vec<u32>>,
}

/// A classical polar space embedded in PG(n, field).
pub struct PolarSpace {
    form: FormSpec,
    pg: Arc<ProjectiveSpace>,
    q: u64,
    gram: Vec<Vec<Elem>>,
    points: Vec<u32>,
    local: Vec<u32>,
    gen_dim: usize,
    levels: Mutex<HashMap<usize, Arc<Level>>>,
}

impl fmt::Debug for PolarSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

const NO_LOCAL: u32 = u32::MAX;

impl PolarSpace {
    /// Standard polar space; `q` is the square root of the field order for
    /// the Hermitian family.
    pub fn new(family: Family, n: usize, q: u64) -> Result<PolarSpace> {
        let order = if family == Family::Hermitian {
            q.checked_mul(q).ok_or_else(|| Error::Parameter("q too large".into()))?
        } else {
            q
        };
        let field = Arc::new(Field::of_order(order)?);
        PolarSpace::standard(family, n, field)
    }

    /// Standard polar space over the given field.
    pub fn standard(family: Family, n: usize, field: Arc<Field>) -> Result<PolarSpace> {
        let form = FormSpec::standard(family, n, &field)?;
        let q = if family == Family::Hermitian {
            field.sqrt_order().expect("checked by FormSpec") as u64
        } else {
            field.order() as u64
        };
        let pg = Arc::new(ProjectiveSpace::new(n, field)?);
        PolarSpace::from_form(form, pg, q)
    }

    fn from_form(form: FormSpec, pg: Arc<ProjectiveSpace>, q: u64) -> Result<PolarSpace> {
        let f = pg.field();
        let w = form.n + 1;
        let a = &form.matrix;
        let gram: Vec<Vec<Elem>> = match form.family {
            Family::Hermitian | Family::Symplectic => a.clone(),
            _ => (0..w)
                .map(|i| (0..w).map(|j| f.add(a[i][j], a[j][i])).collect())
                .collect(),
        };
        let mut space = PolarSpace {
            gen_dim: generator_dim(form.family, form.n),
            form,
            q,
            gram,
            points: Vec::new(),
            local: Vec::new(),
            levels: Mutex::new(HashMap::new()),
            pg,
        };
        let n_pts = space.pg.num_points() as u32;
        space.points = (0..n_pts)
            .into_par_iter()
            .filter(|&i| space.eval(space.pg.point(i)).is_zero())
            .collect();
        let expected = point_count(space.form.family, space.form.n, q);
        if space.points.len() as u64 != expected {
            return Err(Error::Inconsistency(format!(
                "{} has {} points, expected {expected}",
                space.label(),
                space.points.len()
            )));
        }
        let mut local = vec![NO_LOCAL; n_pts as usize];
        for (li, &g) in space.points.iter().enumerate() {
            local[g as usize] = li as u32;
        }
        space.local = local;
        if space.has_polarity() {
            let rad = nullspace(space.field(), &space.gram, w);
            if !rad.is_empty() {
                return Err(Error::Inconsistency("standard form is degenerate".into()));
            }
        }
        Ok(space)
    }

    pub fn label(&self) -> String {
        match self.form.family {
            Family::Hermitian => format!("H({},{})", self.form.n, self.q * self.q),
            Family::Symplectic => format!("W({},{})", self.form.n, self.q),
            fam => format!("{}({},{})", fam.symbol(), self.form.n, self.q),
        }
    }

    pub fn family(&self) -> Family {
        self.form.family
    }

    pub fn form(&self) -> &FormSpec {
        &self.form
    }

    /// Ambient projective dimension.
    pub fn n(&self) -> usize {
        self.form.n
    }

    /// The q of the family notation (square root of the field order for H).
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn p(&self) -> u32 {
        self.field().p()
    }

    pub fn field(&self) -> &Field {
        self.pg.field()
    }

    pub fn pg(&self) -> &ProjectiveSpace {
        &self.pg
    }

    pub fn pg_arc(&self) -> Arc<ProjectiveSpace> {
        Arc::clone(&self.pg)
    }

    pub fn gen_dim(&self) -> usize {
        self.gen_dim
    }

    /// Global indices of the points, ascending.
    pub fn points(&self) -> &[u32] {
        &self.points
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    /// Column index of a global point, if the point lies on the space.
    pub fn local_index(&self, global: u32) -> Option<u32> {
        match self.local.get(global as usize) {
            Some(&l) if l != NO_LOCAL => Some(l),
            _ => None,
        }
    }

    pub fn contains_point(&self, global: u32) -> bool {
        self.local_index(global).is_some()
    }

    fn has_polarity(&self) -> bool {
        !(self.form.family == Family::Parabolic && self.field().p() == 2)
    }

    /// Value of the quadratic or Hermitian form; zero for symplectic spaces.
    pub fn eval(&self, v: &[Elem]) -> Elem {
        let f = self.field();
        let a = &self.form.matrix;
        match self.form.family {
            Family::Symplectic => Elem::ZERO,
            Family::Hermitian => {
                let mut acc = Elem::ZERO;
                for i in 0..v.len() {
                    if v[i].is_zero() {
                        continue;
                    }
                    for j in 0..v.len() {
                        if !a[i][j].is_zero() && !v[j].is_zero() {
                            let t = f.mul(f.mul(v[i], a[i][j]), f.conj_unchecked(v[j]));
                            acc = f.add(acc, t);
                        }
                    }
                }
                acc
            }
            _ => {
                let mut acc = Elem::ZERO;
                for i in 0..v.len() {
                    if v[i].is_zero() {
                        continue;
                    }
                    for j in i..v.len() {
                        if !a[i][j].is_zero() && !v[j].is_zero() {
                            acc = f.add(acc, f.mul(a[i][j], f.mul(v[i], v[j])));
                        }
                    }
                }
                acc
            }
        }
    }

    /// Coefficients c with b(s, y) = 0 iff c.y = 0.
    pub fn functional(&self, s: &[Elem]) -> Vec<Elem> {
        let f = self.field();
        let g = &self.gram;
        let w = s.len();
        match self.form.family {
            Family::Hermitian => (0..w)
                .map(|i| {
                    (0..w).fold(Elem::ZERO, |acc, j| {
                        f.add(acc, f.mul(g[i][j], f.conj_unchecked(s[j])))
                    })
                })
                .collect(),
            _ => (0..w)
                .map(|j| (0..w).fold(Elem::ZERO, |acc, i| f.add(acc, f.mul(s[i], g[i][j]))))
                .collect(),
        }
    }

    /// The associated bilinear or sesquilinear form.
    pub fn bilinear(&self, x: &[Elem], y: &[Elem]) -> Elem {
        crate::projspace::dot(self.field(), &self.functional(x), y)
    }

    /// Whether two points of the space span a line of the space.
    pub fn collinear(&self, a: u32, b: u32) -> bool {
        a != b
            && self.contains_point(a)
            && self.contains_point(b)
            && self.bilinear(self.pg.point(a), self.pg.point(b)).is_zero()
    }

    /// Perp of S under the bilinear or sesquilinear form, defined for every
    /// family (for even-q parabolic quadrics it is the degenerate bilinear perp).
    pub fn bilinear_perp(&self, s: &Subspace) -> Subspace {
        if s.is_empty() {
            return self.pg.whole();
        }
        let rows: Vec<Vec<Elem>> = s.basis().iter().map(|b| self.functional(b)).collect();
        let sol = nullspace(self.field(), &rows, self.form.n + 1);
        self.pg.span_vectors(&sol)
    }

    /// Image of S under the polarity.
    pub fn polar_image(&self, s: &Subspace) -> Result<Subspace> {
        if !self.has_polarity() {
            return Err(Error::UnsupportedPolarity(format!(
                "{} has no polarity in even characteristic; use nucleus()",
                self.label()
            )));
        }
        Ok(self.bilinear_perp(s))
    }

    /// The nucleus of a parabolic quadric in even characteristic.
    pub fn nucleus(&self) -> Result<u32> {
        if self.form.family != Family::Parabolic || self.field().p() != 2 {
            return param(format!(
                "nucleus is only defined for parabolic quadrics over even q, not {}",
                self.label()
            ));
        }
        let rad = nullspace(self.field(), &self.gram, self.form.n + 1);
        if rad.len() != 1 {
            return Err(Error::Inconsistency("radical is not a point".into()));
        }
        Ok(self.pg.index_of(&rad[0]).expect("nonzero"))
    }

    /// Whether every point of S is on the space and S is totally singular.
    pub fn is_singular(&self, s: &Subspace) -> bool {
        let b = s.basis();
        b.iter().all(|v| self.eval(v).is_zero())
            && (0..b.len()).all(|i| (i + 1..b.len()).all(|j| self.bilinear(&b[i], &b[j]).is_zero()))
    }

    /// Points of the space in S, as global indices.
    pub fn section_points(&self, s: &Subspace) -> Vec<u32> {
        self.pg
            .subspace_points(s)
            .into_iter()
            .filter(|&x| self.contains_point(x))
            .collect()
    }

    /// Points of the space collinear with (or equal to) every point of S.
    pub fn perp_points(&self, s: &Subspace) -> Vec<u32> {
        let rows: Vec<Vec<Elem>> = s.basis().iter().map(|b| self.functional(b)).collect();
        let f = self.field();
        self.points
            .iter()
            .copied()
            .filter(|&x| {
                let v = self.pg.point(x);
                rows.iter().all(|r| crate::projspace::dot(f, r, v).is_zero())
            })
            .collect()
    }

    /// Radical of the form restricted to S, as a subspace.
    pub fn restricted_radical(&self, s: &Subspace) -> Subspace {
        let b = s.basis();
        let k = b.len();
        if k == 0 {
            return Subspace::empty(self.form.n);
        }
        // v = sum c_i b_i is radical iff h(v, b_j) = 0 for every j
        let m: Vec<Vec<Elem>> = (0..k)
            .map(|j| (0..k).map(|i| self.bilinear(&b[j], &b[i])).collect())
            .collect();
        let coeffs = nullspace(self.field(), &m, k);
        let f = self.field();
        let vecs: Vec<Vec<Elem>> = coeffs
            .iter()
            .map(|c| {
                let mut v = vec![Elem::ZERO; self.form.n + 1];
                for (ci, bi) in c.iter().zip(b) {
                    for (x, &y) in v.iter_mut().zip(bi) {
                        *x = f.add(*x, f.mul(*ci, y));
                    }
                }
                v
            })
            .collect();
        self.pg.span_vectors(&vecs)
    }

    /// Whether the section of the space by S is non-singular.
    pub fn is_nonsingular_section(&self, s: &Subspace) -> bool {
        let rad = self.restricted_radical(s);
        if rad.is_empty() {
            return true;
        }
        if self.form.family.is_quadric() {
            // only the even-characteristic nucleus may survive
            self.section_points(&rad).is_empty()
        } else {
            false
        }
    }

    /// Family of a non-singular quadric section, or None if singular or not a quadric.
    pub fn classify_quadric_section(&self, s: &Subspace) -> Option<Family> {
        if !self.form.family.is_quadric() || s.dim() < 1 || !self.is_nonsingular_section(s) {
            return None;
        }
        let d = s.dim() as usize;
        if d % 2 == 0 {
            return Some(Family::Parabolic);
        }
        let count = self.section_points(s).len() as u64;
        if count == point_count(Family::Hyperbolic, d, self.q) {
            Some(Family::Hyperbolic)
        } else if count == point_count(Family::Elliptic, d, self.q) {
            Some(Family::Elliptic)
        } else {
            None
        }
    }

    /// Type of the section of H(5,q^2) by a plane.
    pub fn classify_plane_section(&self, plane: &Subspace) -> Result<PlaneSection> {
        if self.form.family != Family::Hermitian || self.form.n != 5 || plane.dim() != 2 {
            return param("plane sections are classified for planes of H(5,q^2) only");
        }
        let q = self.q;
        let count = self.section_points(plane).len() as u64;
        let rad = self.restricted_radical(plane).dim();
        let kind = match (count, rad) {
            (c, -1) if c == q * q * q + 1 => PlaneSection::HermitianCurve,
            (c, 0) if c == q * q * q + q * q + 1 => PlaneSection::BaerCone,
            (c, 1) if c == q * q + 1 => PlaneSection::SingleLine,
            (c, 2) if c == q * q * q * q + q * q + 1 => PlaneSection::Generator,
            _ => {
                return Err(Error::Inconsistency(format!(
                    "plane section with {count} points and radical dimension {rad}"
                )))
            }
        };
        Ok(kind)
    }

    fn level(&self, k: usize) -> Result<Arc<Level>> {
        if k > self.gen_dim {
            return param(format!(
                "{} has no singular {k}-spaces (generators have dimension {})",
                self.label(),
                self.gen_dim
            ));
        }
        if let Some(l) = self.levels.lock().expect("poisoned").get(&k) {
            return Ok(Arc::clone(l));
        }
        let level = if k == 0 {
            Level {
                spaces: self.points.iter().map(|&p| self.pg.point_subspace(p)).collect(),
                points: self.points.iter().map(|&p| vec![p]).collect(),
            }
        } else {
            let prev = self.level(k - 1)?;
            self.extend_level(&prev)?
        };
        let level = Arc::new(level);
        self.levels
            .lock()
            .expect("poisoned")
            .insert(k, Arc::clone(&level));
        Ok(level)
    }

    fn extend_level(&self, prev: &Level) -> Result<Level> {
        let found: Vec<Subspace> = prev
            .spaces
            .par_iter()
            .zip(prev.points.par_iter())
            .flat_map_iter(|(s, pts)| {
                let top = *pts.last().expect("nonempty");
                self.perp_points(s)
                    .into_iter()
                    .filter(move |&x| x > top)
                    .map(move |x| self.pg.join(s, &self.pg.point_subspace(x)))
                    .collect::<Vec<_>>()
            })
            .collect();
        let unique: Vec<Subspace> = found
            .into_iter()
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        if unique.len() > 1_000_000 {
            return Err(Error::Resource(format!(
                "{} singular subspaces exceed the cap of 1000000",
                unique.len()
            )));
        }
        let mut pairs: Vec<(Vec<u32>, Subspace)> = unique
            .into_par_iter()
            .map(|s| (self.pg.subspace_points(&s), s))
            .collect();
        pairs.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let (points, spaces) = pairs.into_iter().unzip();
        Ok(Level { spaces, points })
    }

    /// All singular k-spaces, ordered by their sorted point lists.
    pub fn kspaces(&self, k: usize) -> Result<Vec<Subspace>> {
        Ok(self.level(k)?.spaces.clone())
    }

    /// Point lists (global indices, ascending) of the singular k-spaces, in
    /// the order of `kspaces`.
    pub fn kspace_points(&self, k: usize) -> Result<Vec<Vec<u32>>> {
        Ok(self.level(k)?.points.clone())
    }

    pub fn num_kspaces(&self, k: usize) -> Result<usize> {
        Ok(self.level(k)?.spaces.len())
    }

    /// Number of singular k-spaces through an anchor, by enumeration.
    pub fn count_kspaces_through(&self, k: usize, anchor: Anchor) -> Result<u64> {
        let need: Vec<u32> = match anchor {
            Anchor::Point(a) => {
                if !self.contains_point(a) {
                    return param(format!("point {a} is not on {}", self.label()));
                }
                vec![a]
            }
            Anchor::Pair(a, b) => {
                if !self.collinear(a, b) {
                    return param(format!("points {a} and {b} are not collinear on {}", self.label()));
                }
                vec![a, b]
            }
        };
        let lvl = self.level(k)?;
        Ok(lvl
            .points
            .iter()
            .filter(|pts| need.iter().all(|x| pts.binary_search(x).is_ok()))
            .count() as u64)
    }
}

/// Rational M/N bookkeeping for the k-space counts through a point (M) and
/// through a line (N).
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct KspaceCounts {
    pub m: u128,
    pub n: u128,
}

fn pw(q: u64, e: i64) -> i128 {
    (q as i128).pow(e as u32)
}

fn ratio(num: i128, den: i128) -> Result<u128> {
    if den == 0 || num % den != 0 || num < 0 {
        return Err(Error::Inconsistency(format!("{num}/{den} is not a count")));
    }
    Ok((num / den) as u128)
}

/// Product over i in lo..=hi of f(i); empty ranges give 1.
fn prod(lo: i64, hi: i64, f: impl Fn(i64) -> i128) -> i128 {
    (lo..=hi).map(f).product()
}

/// Number of singular k-spaces through a point (M) and through a singular
/// line (N) of the polar space in ambient dimension `n`, by closed formulas.
/// The symplectic space W(2m-1,q) shares the counts of Q(2m,q).
pub fn kspace_counts(family: Family, n: usize, k: usize, q: u64) -> Result<KspaceCounts> {
    family.check_dim(n)?;
    if k == 0 || k > generator_dim(family, n) {
        return param(format!(
            "k = {k} outside 1..={} for {}({n},{q})",
            generator_dim(family, n),
            family.symbol()
        ));
    }
    let k = k as i64;
    let gauss = |m: i64, kk: i64| {
        (
            prod(0, kk - 1, |i| pw(q, m - i) - 1),
            prod(0, kk - 1, |i| pw(q, i + 1) - 1),
        )
    };
    let (num_m, den_m, num_n, den_n) = match family {
        Family::Hyperbolic => {
            let m = (n as i64 - 1) / 2;
            let (a, b) = gauss(m, k);
            let (c, d) = gauss(m - 1, k - 1);
            (
                a * prod(m - k, m - 1, |i| pw(q, i) + 1),
                b,
                c * prod(m - k, m - 2, |i| pw(q, i) + 1),
                d,
            )
        }
        Family::Parabolic | Family::Symplectic => {
            let m = if family == Family::Parabolic {
                n as i64 / 2
            } else {
                (n as i64 + 1) / 2
            };
            let (a, b) = gauss(m - 1, k);
            let (c, d) = gauss(m - 2, k - 1);
            (
                a * prod(m - k, m - 1, |i| pw(q, i) + 1),
                b,
                c * prod(m - k, m - 2, |i| pw(q, i) + 1),
                d,
            )
        }
        Family::Elliptic => {
            let m = (n as i64 - 1) / 2;
            let (a, b) = gauss(m - 1, k);
            let (c, d) = gauss(m - 2, k - 1);
            (
                a * prod(m - k + 1, m, |i| pw(q, i) + 1),
                b,
                c * prod(m - k + 1, m - 1, |i| pw(q, i) + 1),
                d,
            )
        }
        Family::Hermitian => {
            let m = n as i64;
            let sgn = |i: i64| if i % 2 == 0 { 1 } else { -1 };
            (
                prod(m - 2 * k, m - 1, |i| pw(q, i) - sgn(i)),
                prod(1, k, |j| pw(q, 2 * j) - 1),
                prod(m - 2 * k, m - 3, |i| pw(q, i) - sgn(i)),
                prod(1, k - 1, |j| pw(q, 2 * j) - 1),
            )
        }
    };
    Ok(KspaceCounts {
        m: ratio(num_m, den_m)?,
        n: ratio(num_n, den_n)?,
    })
}

/// Total number of singular k-spaces from the closed forms:
/// |P| * M / theta_k, with k = 0 giving |P|.
pub fn kspace_total(family: Family, n: usize, k: usize, q: u64) -> Result<u128> {
    let pts = point_count(family, n, q) as u128;
    if k == 0 {
        return Ok(pts);
    }
    let m = kspace_counts(family, n, k, q)?.m;
    let order = if family == Family::Hermitian { q * q } else { q };
    let t = theta(k as i64, order) as u128;
    if (pts * m) % t != 0 {
        return Err(Error::Inconsistency("k-space count is not integral".into()));
    }
    Ok(pts * m / t)
}

/// Known lower bound on the minimum distance of C(Q-(5,q))^perp for lines.
pub fn tanner_bound_elliptic5(q: u64) -> u64 {
    q * q * q + q + 2
}

/// Known lower bound on the minimum distance of C(H(4,q^2))^perp for lines.
pub fn tanner_bound_hermitian4(q: u64) -> u64 {
    q.pow(5) - q.pow(4) + q.pow(3) + q * q + 2
}

/// Lower bound ceil(1 + M/N) on the minimum weight of C_k(P)^perp, raised to
/// the known constants for lines of Q-(5,q) and H(4,q^2).
pub fn bound_min_weight_dual(family: Family, n: usize, k: usize, q: u64) -> Result<u64> {
    let c = kspace_counts(family, n, k, q)?;
    let mut bound = 1 + c.m.div_ceil(c.n) as u64;
    if k == 1 && n == 5 && family == Family::Elliptic {
        bound = bound.max(tanner_bound_elliptic5(q));
    }
    if k == 1 && n == 4 && family == Family::Hermitian {
        bound = bound.max(tanner_bound_hermitian4(q));
    }
    Ok(bound)
}

/// Depth-first search for a subspace of dimension `dim` whose points are
/// drawn in ascending order from `candidates` (the first point from `first`)
/// and which satisfies `accept`. Returns the first hit in canonical order.
pub fn find_subspace(
    pg: &ProjectiveSpace,
    dim: usize,
    candidates: &[u32],
    mut accept: impl FnMut(&Subspace) -> bool,
    budget: usize,
) -> Result<Subspace> {
    fn rec(
        pg: &ProjectiveSpace,
        cur: &Subspace,
        from: usize,
        dim: usize,
        cands: &[u32],
        accept: &mut dyn FnMut(&Subspace) -> bool,
        budget: &mut usize,
    ) -> Option<Subspace> {
        if cur.dim() == dim as i64 {
            if *budget == 0 {
                return None;
            }
            *budget -= 1;
            return accept(cur).then(|| cur.clone());
        }
        for (i, &c) in cands.iter().enumerate().skip(from) {
            if *budget == 0 {
                return None;
            }
            if pg.contains_point(cur, c) {
                continue;
            }
            let next = pg.join(cur, &pg.point_subspace(c));
            if let Some(hit) = rec(pg, &next, i + 1, dim, cands, accept, budget) {
                return Some(hit);
            }
        }
        None
    }
    let mut budget = budget;
    rec(
        pg,
        &Subspace::empty(pg.n()),
        0,
        dim,
        candidates,
        &mut accept,
        &mut budget,
    )
    .ok_or_else(|| Error::NotFound(format!("no {dim}-space with the requested property")))
}
