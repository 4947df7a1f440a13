//! Points and subspaces of PG(n,q).
//!
//! Points are normalized so the first nonzero coordinate is 1 and indexed in
//! lexicographic order of their coordinate vectors. That order is closed-form,
//! so indexing a vector never needs a hash lookup.

use std::sync::Arc;

use crate::error::{param, Error, Result};
use crate::gf::{Elem, Field};

/// Largest number of points a projective space may have.
pub const MAX_POINTS: u64 = 10_000_000;

/// Number of points of PG(d,q): (q^{d+1}-1)/(q-1), with theta(-1) = 0.
pub fn theta(d: i64, q: u64) -> u64 {
    if d < 0 {
        return 0;
    }
    let mut acc = 0u64;
    for _ in 0..=d {
        acc = acc * q + 1;
    }
    acc
}

/// Scales `v` so its first nonzero coordinate is 1. Returns false for the zero vector.
pub fn normalize(field: &Field, v: &mut [Elem]) -> bool {
    let Some(lead) = v.iter().copied().find(|x| !x.is_zero()) else {
        return false;
    };
    if lead != Elem::ONE {
        let inv = field.inv(lead).expect("nonzero");
        for x in v.iter_mut() {
            *x = field.mul(*x, inv);
        }
    }
    true
}

/// Reduced row-echelon form; zero rows are dropped.
pub fn rref(field: &Field, rows: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let mut m: Vec<Vec<Elem>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        let inv = field.inv(m[r][c]).expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in 0..ncols {
                    let t = field.mul(f, m[r][j]);
                    m[i][j] = field.sub(m[i][j], t);
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    m
}

/// Basis of the right nullspace {y : M y = 0} of a matrix with `ncols` columns.
pub fn nullspace(field: &Field, rows: &[Vec<Elem>], ncols: usize) -> Vec<Vec<Elem>> {
    let r = rref(field, rows);
    let pivots: Vec<usize> = r
        .iter()
        .map(|row| row.iter().position(|x| !x.is_zero()).expect("nonzero row"))
        .collect();
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut y = vec![Elem::ZERO; ncols];
        y[free] = Elem::ONE;
        for (row, &pc) in r.iter().zip(&pivots) {
            y[pc] = field.neg(row[free]);
        }
        out.push(y);
    }
    out
}

pub fn dot(field: &Field, u: &[Elem], v: &[Elem]) -> Elem {
    u.iter()
        .zip(v)
        .fold(Elem::ZERO, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
}

/// A projective subspace, stored as its reduced row-echelon basis.
/// The empty subspace has no rows and dimension -1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Elem>>,
}

impl Subspace {
    pub fn empty(ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn dim(&self) -> i64 {
        self.basis.len() as i64 - 1
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.basis
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }
}

/// PG(n,q) together with its point list.
pub struct ProjectiveSpace {
    n: usize,
    field: Arc<Field>,
    q: u64,
    num_points: u64,
    coords: Vec<Elem>,
}

impl std::fmt::Debug for ProjectiveSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PG({},{})", self.n, self.q)
    }
}

impl ProjectiveSpace {
    pub fn new(n: usize, field: Arc<Field>) -> Result<ProjectiveSpace> {
        if n == 0 {
            return param("projective dimension must be at least 1");
        }
        let q = field.order() as u64;
        let count = (0..=n as u32)
            .try_fold(0u64, |acc, _| acc.checked_mul(q).and_then(|x| x.checked_add(1)))
            .unwrap_or(u64::MAX);
        if count > MAX_POINTS {
            return Err(Error::Resource(format!(
                "PG({n},{q}) has {count} points, cap is {MAX_POINTS}"
            )));
        }
        let width = n + 1;
        let mut coords = Vec::with_capacity(count as usize * width);
        for lead in (0..=n).rev() {
            let tail = n - lead;
            let total = q.pow(tail as u32);
            for t in 0..total {
                let start = coords.len();
                coords.resize(start + width, Elem::ZERO);
                coords[start + lead] = Elem::ONE;
                let mut rest = t;
                for j in (lead + 1..=n).rev() {
                    coords[start + j] = Elem((rest % q) as u32);
                    rest /= q;
                }
            }
        }
        Ok(ProjectiveSpace {
            n,
            field,
            q,
            num_points: count,
            coords,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn field_arc(&self) -> Arc<Field> {
        Arc::clone(&self.field)
    }

    pub fn num_points(&self) -> usize {
        self.num_points as usize
    }

    /// Normalized coordinates of point `idx`.
    pub fn point(&self, idx: u32) -> &[Elem] {
        let w = self.n + 1;
        let s = idx as usize * w;
        &self.coords[s..s + w]
    }

    /// Index of an already normalized vector.
    pub fn index_normalized(&self, v: &[Elem]) -> u32 {
        let lead = v.iter().position(|x| !x.is_zero()).expect("nonzero vector");
        let mut idx = theta((self.n - lead) as i64 - 1, self.q);
        let mut tail = 0u64;
        for x in &v[lead + 1..] {
            tail = tail * self.q + x.rep() as u64;
        }
        idx += tail;
        idx as u32
    }

    /// Index of the point spanned by `v`, or None for the zero vector.
    pub fn index_of(&self, v: &[Elem]) -> Option<u32> {
        let mut w = v.to_vec();
        normalize(&self.field, &mut w).then(|| self.index_normalized(&w))
    }

    pub fn span_vectors(&self, vecs: &[Vec<Elem>]) -> Subspace {
        Subspace {
            ambient: self.n,
            basis: rref(&self.field, vecs),
        }
    }

    pub fn span_points(&self, pts: &[u32]) -> Subspace {
        let vecs: Vec<Vec<Elem>> = pts.iter().map(|&i| self.point(i).to_vec()).collect();
        self.span_vectors(&vecs)
    }

    pub fn point_subspace(&self, idx: u32) -> Subspace {
        self.span_points(&[idx])
    }

    pub fn join(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut rows = a.basis.clone();
        rows.extend(b.basis.iter().cloned());
        self.span_vectors(&rows)
    }

    /// Equations of `s`: the subspace of dual coordinates vanishing on it.
    pub fn annihilator(&self, s: &Subspace) -> Subspace {
        let rows = if s.basis.is_empty() {
            (0..=self.n)
                .map(|i| {
                    let mut e = vec![Elem::ZERO; self.n + 1];
                    e[i] = Elem::ONE;
                    e
                })
                .collect()
        } else {
            nullspace(&self.field, &s.basis, self.n + 1)
        };
        self.span_vectors(&rows)
    }

    pub fn meet(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut eqs = self.annihilator(a).basis;
        eqs.extend(self.annihilator(b).basis);
        if eqs.is_empty() {
            return self.whole();
        }
        let sol = nullspace(&self.field, &eqs, self.n + 1);
        self.span_vectors(&sol)
    }

    pub fn whole(&self) -> Subspace {
        self.annihilator(&Subspace::empty(self.n))
    }

    pub fn contains_vector(&self, s: &Subspace, v: &[Elem]) -> bool {
        let mut rows = s.basis.clone();
        rows.push(v.to_vec());
        rref(&self.field, &rows).len() == s.basis.len()
    }

    pub fn contains_point(&self, s: &Subspace, idx: u32) -> bool {
        self.contains_vector(s, self.point(idx))
    }

    pub fn is_subspace_of(&self, a: &Subspace, b: &Subspace) -> bool {
        a.basis.iter().all(|v| self.contains_vector(b, v))
    }

    /// Sorted global indices of the points of `s`.
    pub fn subspace_points(&self, s: &Subspace) -> Vec<u32> {
        let k = s.basis.len();
        let mut out = Vec::with_capacity(theta(k as i64 - 1, self.q) as usize);
        let w = self.n + 1;
        let mut v = vec![Elem::ZERO; w];
        // coefficient vectors whose first nonzero entry is 1
        for lead in 0..k {
            let free = k - lead - 1;
            let total = self.q.pow(free as u32);
            for t in 0..total {
                v.copy_from_slice(&s.basis[lead]);
                let mut rest = t;
                for j in (lead + 1..k).rev() {
                    let c = Elem((rest % self.q) as u32);
                    rest /= self.q;
                    if !c.is_zero() {
                        for (x, &b) in v.iter_mut().zip(&s.basis[j]) {
                            *x = self.field.add(*x, self.field.mul(c, b));
                        }
                    }
                }
                // rref rows give a normalized combination directly
                out.push(self.index_normalized(&v));
            }
        }
        out.sort_unstable();
        out
    }

    /// Hyperplane {x : a.x = 0}.
    pub fn hyperplane(&self, a: &[Elem]) -> Subspace {
        let sol = nullspace(&self.field, &[a.to_vec()], self.n + 1);
        self.span_vectors(&sol)
    }

    /// Every subspace of the given dimension, in reduced row-echelon order
    /// (pivot sets in lexicographic order, then free entries in base q).
    pub fn subspaces(&self, dim: usize) -> Result<Vec<Subspace>> {
        let rows = dim + 1;
        let w = self.n + 1;
        if rows > w {
            return param(format!("no {dim}-spaces in PG({},{})", self.n, self.q));
        }
        let count = gaussian_binomial(w as u64, rows as u64, self.q);
        if count > MAX_POINTS {
            return Err(Error::Resource(format!(
                "{count} subspaces of dimension {dim}, cap is {MAX_POINTS}"
            )));
        }
        let mut out = Vec::with_capacity(count as usize);
        let mut pivots: Vec<usize> = (0..rows).collect();
        loop {
            let free: Vec<(usize, usize)> = (0..rows)
                .flat_map(|r| {
                    let pv = pivots.clone();
                    ((pivots[r] + 1)..w)
                        .filter(move |c| !pv.contains(c))
                        .map(move |c| (r, c))
                })
                .collect();
            let total = self.q.pow(free.len() as u32);
            for t in 0..total {
                let mut m = vec![vec![Elem::ZERO; w]; rows];
                for (r, &pc) in pivots.iter().enumerate() {
                    m[r][pc] = Elem::ONE;
                }
                let mut rest = t;
                for &(r, c) in free.iter().rev() {
                    m[r][c] = Elem((rest % self.q) as u32);
                    rest /= self.q;
                }
                out.push(Subspace {
                    ambient: self.n,
                    basis: m,
                });
            }
            // next pivot combination
            let mut i = rows;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                if pivots[i] < w - rows + i {
                    pivots[i] += 1;
                    for j in i + 1..rows {
                        pivots[j] = pivots[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
}

/// Number of (k-1)-dimensional projective subspaces of PG(n-1,q).
pub fn gaussian_binomial(n: u64, k: u64, q: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (q as u128).pow((n - i) as u32) - 1;
        den *= (q as u128).pow((i + 1) as u32) - 1;
    }
    (num / den).min(u64::MAX as u128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pg(n: usize, q: u64) -> ProjectiveSpace {
        ProjectiveSpace::new(n, Arc::new(Field::of_order(q).unwrap())).unwrap()
    }

    #[test]
    fn theta_values() {
        assert_eq!(theta(-1, 5), 0);
        assert_eq!(theta(0, 5), 1);
        assert_eq!(theta(1, 2), 3);
        assert_eq!(theta(4, 2), 31);
        assert_eq!(theta(2, 4), 21);
    }

    #[test]
    fn point_enumeration_counts_and_order() {
        assert_eq!(pg(3, 2).num_points(), 15);
        assert_eq!(pg(4, 2).num_points(), 31);
        let s = pg(5, 4);
        assert_eq!(s.num_points() as u64, theta(5, 4));
        for i in 1..s.num_points() as u32 {
            assert!(s.point(i - 1) < s.point(i));
        }
        for i in 0..s.num_points() as u32 {
            assert_eq!(s.index_of(s.point(i)), Some(i));
        }
    }

    #[test]
    fn index_of_scaled_vector() {
        let s = pg(2, 3);
        let v = [Elem(0), Elem(2), Elem(1)];
        let i = s.index_of(&v).unwrap();
        assert_eq!(s.point(i), &[Elem(0), Elem(1), Elem(2)]);
        assert_eq!(s.index_of(&[Elem::ZERO; 3]), None);
    }

    #[test]
    fn span_and_points() {
        let s = pg(3, 2);
        let p = s.point_subspace(4);
        assert_eq!(p.dim(), 0);
        assert_eq!(s.subspace_points(&p), vec![4]);
        let l = s.span_points(&[1, 9]);
        let pts = s.subspace_points(&l);
        assert_eq!(pts.len(), 3);
        assert!(pts.contains(&1) && pts.contains(&9));
        assert_eq!(s.span_points(&pts), l);
        let pg43 = pg(4, 3);
        let plane = pg43.span_points(&[0, 1, 5]);
        assert_eq!(pg43.subspace_points(&plane).len(), 13);
        let pg42 = pg(4, 2);
        let solid = pg42.hyperplane(&[Elem(1), Elem(1), Elem(0), Elem(0), Elem(1)]);
        assert_eq!(solid.dim(), 3);
        assert_eq!(pg42.subspace_points(&solid).len(), 15);
    }

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        for (n, q) in [(3usize, 2u64), (3, 3), (4, 2)] {
            let s = pg(n, q);
            for d in 0..n {
                let subs = s.subspaces(d).unwrap();
                assert_eq!(subs.len() as u64, gaussian_binomial(n as u64 + 1, d as u64 + 1, q));
                let set: std::collections::HashSet<_> = subs.iter().collect();
                assert_eq!(set.len(), subs.len());
            }
        }
    }

    #[test]
    fn meet_of_two_planes_in_pg3() {
        let s = pg(3, 3);
        let a = s.hyperplane(&[Elem(1), Elem(0), Elem(0), Elem(0)]);
        let b = s.hyperplane(&[Elem(0), Elem(1), Elem(0), Elem(0)]);
        let m = s.meet(&a, &b);
        assert_eq!(m.dim(), 1);
        let pa = s.subspace_points(&a);
        let pb = s.subspace_points(&b);
        let common: Vec<u32> = pa.iter().copied().filter(|x| pb.contains(x)).collect();
        assert_eq!(s.subspace_points(&m), common);
    }
}
