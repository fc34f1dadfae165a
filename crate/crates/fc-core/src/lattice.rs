//! Exact integer-lattice arithmetic: column Hermite form, membership,
//! canonical residues, kernels, intersections and preimages.
//!
//! Lattices are ℤ-spans of column vectors in ℤⁿ. All construction goes
//! through the canonical Hermite basis, so structural equality decides
//! lattice equality. Internal arithmetic uses i128; desk-scale inputs stay
//! far from overflow.

use alloc::vec::Vec;

type Col = Vec<i128>;

fn floor_div(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn to_i128(v: &[i64]) -> Col {
    v.iter().map(|&x| x as i128).collect()
}

fn to_i64(v: &[i128]) -> Vec<i64> {
    v.iter()
        .map(|&x| i64::try_from(x).expect("lattice arithmetic overflowed i64"))
        .collect()
}

/// Column reduction to Hermite form. Columns may carry extra tracking rows
/// beyond `dim`; pivot decisions look only at the first `dim` rows while
/// the unimodular column operations apply to whole columns. Returns the
/// reduced columns, the number of pivot columns and the pivot rows.
fn hermite_ext(dim: usize, cols: &[Col]) -> (Vec<Col>, usize, Vec<usize>) {
    let mut cols: Vec<Col> = cols.to_vec();
    let total = cols.first().map_or(dim, Vec::len);
    let mut fixed = 0usize;
    let mut pivots: Vec<usize> = Vec::new();
    for row in 0..dim {
        // gcd out the entries of this row across the free columns
        loop {
            let mut best: Option<usize> = None;
            for j in fixed..cols.len() {
                if cols[j][row] != 0
                    && best.is_none_or(|b| cols[j][row].abs() < cols[b][row].abs())
                {
                    best = Some(j);
                }
            }
            let Some(b) = best else { break };
            cols.swap(fixed, b);
            let mut done = true;
            for j in fixed + 1..cols.len() {
                if cols[j][row] != 0 {
                    let q = cols[j][row] / cols[fixed][row];
                    for r in 0..total {
                        let s = cols[fixed][r];
                        cols[j][r] -= q * s;
                    }
                    if cols[j][row] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if fixed < cols.len() && cols[fixed][row] != 0 {
            if cols[fixed][row] < 0 {
                for r in 0..total {
                    cols[fixed][r] = -cols[fixed][r];
                }
            }
            let pivot = cols[fixed][row];
            // reduce this row in the already-fixed columns to [0, pivot)
            for k in 0..fixed {
                let q = floor_div(cols[k][row], pivot);
                if q != 0 {
                    for r in 0..total {
                        let s = cols[fixed][r];
                        cols[k][r] -= q * s;
                    }
                }
            }
            pivots.push(row);
            fixed += 1;
        }
    }
    (cols, fixed, pivots)
}

fn hermite(dim: usize, cols: &[Col]) -> (Vec<Col>, Vec<usize>) {
    let (cols, fixed, pivots) = hermite_ext(dim, cols);
    (cols[..fixed].to_vec(), pivots)
}

/// A sublattice of ℤⁿ in canonical Hermite basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<i64>>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn from_columns(dim: usize, cols: &[Vec<i64>]) -> Lattice {
        assert!(cols.iter().all(|c| c.len() == dim), "column length mismatch");
        let cols: Vec<Col> = cols.iter().map(|c| to_i128(c)).collect();
        let (basis, pivots) = hermite(dim, &cols);
        Lattice { dim, basis: basis.iter().map(|c| to_i64(c)).collect(), pivots }
    }

    /// Like [`Lattice::from_columns`], additionally returning for each
    /// canonical basis vector its expression as an integer combination of
    /// the input columns.
    pub fn from_columns_with_expr(dim: usize, cols: &[Vec<i64>]) -> (Lattice, Vec<Vec<i64>>) {
        assert!(cols.iter().all(|c| c.len() == dim), "column length mismatch");
        let m = cols.len();
        let ext: Vec<Col> = cols
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let mut e = to_i128(c);
                e.extend((0..m).map(|r| i128::from(r == j)));
                e
            })
            .collect();
        let (reduced, fixed, pivots) = hermite_ext(dim, &ext);
        let basis: Vec<Vec<i64>> = reduced[..fixed].iter().map(|c| to_i64(&c[..dim])).collect();
        let expr: Vec<Vec<i64>> = reduced[..fixed].iter().map(|c| to_i64(&c[dim..])).collect();
        (Lattice { dim, basis, pivots }, expr)
    }

    /// All of ℤⁿ.
    pub fn full(dim: usize) -> Lattice {
        let cols: Vec<Vec<i64>> = (0..dim)
            .map(|i| {
                let mut v = alloc::vec![0i64; dim];
                v[i] = 1;
                v
            })
            .collect();
        Lattice::from_columns(dim, &cols)
    }

    pub fn zero(dim: usize) -> Lattice {
        Lattice { dim, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    /// Canonical coset representative of `v + L`; zero exactly on L.
    pub fn residue(&self, v: &[i64]) -> Vec<i64> {
        let mut v = to_i128(v);
        for (j, col) in self.basis.iter().enumerate() {
            let p = self.pivots[j];
            let pivot = col[p] as i128;
            let q = floor_div(v[p], pivot);
            if q != 0 {
                for r in 0..self.dim {
                    v[r] -= q * col[r] as i128;
                }
            }
        }
        to_i64(&v)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Coordinates of `v` in the Hermite basis, if `v ∈ L`.
    pub fn coordinates(&self, v: &[i64]) -> Option<Vec<i64>> {
        let mut v = to_i128(v);
        let mut coords = Vec::with_capacity(self.basis.len());
        for (j, col) in self.basis.iter().enumerate() {
            let p = self.pivots[j];
            let pivot = col[p] as i128;
            if v[p] % pivot != 0 {
                return None;
            }
            let q = v[p] / pivot;
            coords.push(i64::try_from(q).ok()?);
            if q != 0 {
                for r in 0..self.dim {
                    v[r] -= q * col[r] as i128;
                }
            }
        }
        if v.iter().all(|&x| x == 0) {
            Some(coords)
        } else {
            None
        }
    }

    /// `[ℤⁿ : L]`, or None when the index is infinite (rank deficit).
    pub fn index_in_ambient(&self) -> Option<u128> {
        if self.rank() < self.dim {
            return None;
        }
        let mut d: u128 = 1;
        for (j, col) in self.basis.iter().enumerate() {
            d *= col[self.pivots[j]].unsigned_abs() as u128;
        }
        Some(d)
    }

    /// Lattice join `L + M`.
    pub fn sum(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.dim, other.dim);
        let mut cols = self.basis.clone();
        cols.extend(other.basis.iter().cloned());
        Lattice::from_columns(self.dim, &cols)
    }

    pub fn intersect(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.dim, other.dim);
        // x = A u = B w  ⇔  (u, w) ∈ ker [A | -B]
        let mut stacked: Vec<Vec<i64>> = self.basis.clone();
        stacked.extend(other.basis.iter().map(|c| c.iter().map(|&x| -x).collect()));
        let ker = kernel(self.dim, &stacked);
        let cols: Vec<Vec<i64>> = ker
            .iter()
            .map(|k| {
                let mut x = alloc::vec![0i128; self.dim];
                for (j, col) in self.basis.iter().enumerate() {
                    for r in 0..self.dim {
                        x[r] += k[j] as i128 * col[r] as i128;
                    }
                }
                to_i64(&x)
            })
            .collect();
        Lattice::from_columns(self.dim, &cols)
    }

    pub fn is_subset_of(&self, other: &Lattice) -> bool {
        self.basis.iter().all(|c| other.contains(c))
    }

    /// `{u ∈ ℤᵐ : M·u ∈ target}` for the linear map with columns `map_cols`.
    pub fn preimage(map_cols: &[Vec<i64>], target: &Lattice) -> Lattice {
        let m = map_cols.len();
        let dim = target.dim;
        assert!(map_cols.iter().all(|c| c.len() == dim), "map column length mismatch");
        // M u = L w  ⇔  (u, w) ∈ ker [M | -L]
        let mut stacked: Vec<Vec<i64>> = map_cols.to_vec();
        stacked.extend(target.basis.iter().map(|c| c.iter().map(|&x| -x).collect()));
        let ker = kernel(dim, &stacked);
        let cols: Vec<Vec<i64>> = ker.iter().map(|k| k[..m].to_vec()).collect();
        Lattice::from_columns(m, &cols)
    }
}

/// Basis of `{u ∈ ℤᵐ : A·u = 0}`, A given by `cols` (each of length `dim`).
pub fn kernel(dim: usize, cols: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let m = cols.len();
    // track unimodular column ops on an identity below A
    let mut work: Vec<Col> = (0..m)
        .map(|j| {
            let mut c = to_i128(&cols[j]);
            c.extend((0..m).map(|r| if r == j { 1 } else { 0 }));
            c
        })
        .collect();
    let total = dim + m;
    let mut fixed = 0usize;
    for row in 0..dim {
        loop {
            let mut best: Option<usize> = None;
            for j in fixed..work.len() {
                if work[j][row] != 0
                    && best.is_none_or(|b| work[j][row].abs() < work[b][row].abs())
                {
                    best = Some(j);
                }
            }
            let Some(b) = best else { break };
            work.swap(fixed, b);
            let mut done = true;
            for j in fixed + 1..work.len() {
                if work[j][row] != 0 {
                    let q = work[j][row] / work[fixed][row];
                    for r in 0..total {
                        let s = work[fixed][r];
                        work[j][r] -= q * s;
                    }
                    if work[j][row] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if fixed < work.len() && work[fixed][row] != 0 {
            fixed += 1;
        }
    }
    work[fixed..]
        .iter()
        .map(|c| to_i64(&c[dim..]))
        .collect()
}

/// Solves `cols · u = v` over ℤ, if `v` lies in the span.
pub fn express_in_columns(cols: &[Vec<i64>], v: &[i64]) -> Option<Vec<i64>> {
    let dim = v.len();
    let (lat, expr) = Lattice::from_columns_with_expr(dim, cols);
    let w = lat.coordinates(v)?;
    let mut u = alloc::vec![0i128; cols.len()];
    for (k, wk) in w.iter().enumerate() {
        for (i, ei) in expr[k].iter().enumerate() {
            u[i] += *wk as i128 * *ei as i128;
        }
    }
    Some(to_i64(&u))
}

/// `A·u` for A given by columns.
pub fn mat_vec(cols: &[Vec<i64>], u: &[i64]) -> Vec<i64> {
    assert_eq!(cols.len(), u.len());
    let dim = cols.first().map_or(0, Vec::len);
    let mut out = alloc::vec![0i128; dim];
    for (j, col) in cols.iter().enumerate() {
        for r in 0..dim {
            out[r] += u[j] as i128 * col[r] as i128;
        }
    }
    to_i64(&out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn residue_and_membership_in_rank_one() {
        let l = Lattice::from_columns(1, &[vec![2]]);
        assert!(l.contains(&[4]));
        assert!(!l.contains(&[5]));
        assert_eq!(l.residue(&[5]), vec![1]);
        assert_eq!(l.residue(&[-4]), vec![0]);
        assert_eq!(l.index_in_ambient(), Some(2));
    }

    #[test]
    fn hermite_is_canonical() {
        let a = Lattice::from_columns(2, &[vec![2, 0], vec![0, 3]]);
        // same span presented differently: -(2,3)+(4,3) = (2,0), (2,3)-(2,0) = (0,3)
        let b = Lattice::from_columns(2, &[vec![2, 3], vec![2, -3], vec![4, 3]]);
        let c = Lattice::from_columns(2, &[vec![0, 3], vec![2, 0], vec![2, 3]]);
        assert_eq!(a, b);
        assert_eq!(a, c);
        let d = Lattice::from_columns(2, &[vec![2, 1], vec![0, 3]]);
        assert_ne!(a, d);
    }

    #[test]
    fn intersection_of_comparable_lattices() {
        let a = Lattice::from_columns(1, &[vec![4]]);
        let b = Lattice::from_columns(1, &[vec![6]]);
        assert_eq!(a.intersect(&b), Lattice::from_columns(1, &[vec![12]]));
    }

    #[test]
    fn preimage_under_scaling() {
        // M(u) = 3u, target 2ℤ: {u : 3u ∈ 2ℤ} = 2ℤ
        let t = Lattice::from_columns(1, &[vec![2]]);
        assert_eq!(Lattice::preimage(&[vec![3]], &t), Lattice::from_columns(1, &[vec![2]]));
    }

    #[test]
    fn kernel_of_projection() {
        // A = [1 0] : ℤ² → ℤ, kernel = second axis
        let k = kernel(1, &[vec![1], vec![0]]);
        let l = Lattice::from_columns(2, &k);
        assert!(l.contains(&[0, 7]));
        assert!(!l.contains(&[1, 0]));
        assert_eq!(l.rank(), 1);
    }

    #[test]
    fn full_and_zero() {
        let f = Lattice::full(3);
        assert_eq!(f.index_in_ambient(), Some(1));
        assert!(f.contains(&[5, -2, 9]));
        let z = Lattice::zero(2);
        assert_eq!(z.rank(), 0);
        assert!(z.contains(&[0, 0]));
        assert!(!z.contains(&[1, 0]));
        assert_eq!(z.index_in_ambient(), None);
    }

    #[test]
    fn expression_tracking_solves_exactly() {
        let cols = [vec![2, 3], vec![2, -3]];
        // v = 1·(2,3) + 2·(2,-3) = (6,-3)
        let u = express_in_columns(&cols, &[6, -3]).unwrap();
        assert_eq!(mat_vec(&cols, &u), vec![6, -3]);
        assert_eq!(express_in_columns(&cols, &[1, 0]), None);
    }

    #[test]
    fn residue_is_constant_on_cosets() {
        let l = Lattice::from_columns(2, &[vec![2, 1], vec![0, 3]]);
        let v = [5i64, -4];
        let r = l.residue(&v);
        for c in l.basis() {
            let shifted: Vec<i64> = v.iter().zip(c).map(|(a, b)| a + b).collect();
            assert_eq!(l.residue(&shifted), r);
        }
        // residue difference lies in the lattice
        let diff: Vec<i64> = v.iter().zip(&r).map(|(a, b)| a - b).collect();
        assert!(l.contains(&diff));
    }
}
