use super::field::Field;
use super::matrix::Matrix;
use super::LinError;

/// A linear subspace of `field^ambient_dim`, stored by a basis of independent
/// columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    basis: Matrix,
}

/// `Z / B` with chosen coordinates: `projection` sends `Z`-coordinates to
/// quotient coordinates and `section` picks representatives (in `Z`-coordinates).
#[derive(Clone, Debug, PartialEq)]
pub struct Subquotient {
    pub dim: usize,
    pub projection: Matrix,
    pub section: Matrix,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace { basis: Matrix::zeros(field, ambient, 0) }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        Subspace { basis: Matrix::identity(field, ambient) }
    }

    /// The column span of `m`, with basis a subset of its columns.
    pub fn span(m: &Matrix) -> Subspace {
        let idx = m.independent_columns();
        Subspace { basis: m.select_cols(&idx) }
    }

    /// Caller guarantees the columns are independent.
    pub(crate) fn from_independent(basis: Matrix) -> Subspace {
        debug_assert_eq!(basis.rank(), basis.cols(), "from_independent: dependent columns");
        Subspace { basis }
    }

    /// `⊕ parts` inside the direct sum of their ambient spaces, in order.
    pub fn direct_sum(field: Field, parts: &[Subspace]) -> Subspace {
        let bases: Vec<&Matrix> = parts.iter().map(|s| &s.basis).collect();
        Subspace { basis: Matrix::block_diag(field, &bases) }
    }

    pub fn field(&self) -> Field {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Coordinates of the columns of `vectors` in this basis, if all lie inside.
    pub fn coordinates(&self, vectors: &Matrix) -> Option<Matrix> {
        self.basis.solve(vectors)
    }

    pub fn contains_vectors(&self, vectors: &Matrix) -> bool {
        vectors.is_zero() || self.coordinates(vectors).is_some()
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        self.ambient_dim() == other.ambient_dim() && self.contains_vectors(&other.basis)
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains(other)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim(), other.ambient_dim(), "sum: ambient mismatch");
        Subspace::span(&Matrix::hstack(self.field(), self.ambient_dim(), &[&self.basis, &other.basis]))
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim(), other.ambient_dim(), "intersection: ambient mismatch");
        let stacked = Matrix::hstack(self.field(), self.ambient_dim(), &[&self.basis, &other.basis.neg()]);
        let k = stacked.kernel();
        let top = k.basis().block(0..self.dim(), 0..k.dim());
        // self * top spans the intersection; top is injective on the kernel.
        Subspace::span(&self.basis.mul(&top))
    }

    /// `f(self)` for a linear map `f` with `f.cols() == ambient_dim`.
    pub fn image_under(&self, f: &Matrix) -> Subspace {
        Subspace::span(&f.mul(&self.basis))
    }

    /// `{v : f v ∈ target}`.
    pub fn preimage(f: &Matrix, target: &Subspace) -> Subspace {
        assert_eq!(f.rows(), target.ambient_dim(), "preimage: shape mismatch");
        let stacked = Matrix::hstack(f.field(), f.rows(), &[f, &target.basis.neg()]);
        let k = stacked.kernel();
        Subspace::from_independent(k.basis().block(0..f.cols(), 0..k.dim()))
    }
}

/// Quotient `Z / B` of nested subspaces of the same ambient space.
pub fn subquotient(z: &Subspace, b: &Subspace) -> Result<Subquotient, LinError> {
    if z.ambient_dim() != b.ambient_dim() {
        return Err(LinError::AmbientMismatch { left: z.ambient_dim(), right: b.ambient_dim() });
    }
    if !z.contains(b) {
        return Err(LinError::NotContained);
    }
    let field = z.field();
    let stacked = Matrix::hstack(field, z.ambient_dim(), &[b.basis(), z.basis()]);
    let chosen: Vec<usize> =
        stacked.independent_columns().into_iter().filter(|&j| j >= b.dim()).map(|j| j - b.dim()).collect();
    let q = chosen.len();
    let section = Matrix::from_entries(field, z.dim(), q, chosen.iter().enumerate().map(|(i, &c)| (c, i, 1)));
    let reps = z.basis().select_cols(&chosen);
    let frame = Matrix::hstack(field, z.ambient_dim(), &[b.basis(), &reps]);
    let coords = frame.solve(z.basis()).expect("Z lies in B + complement");
    let projection = coords.block(b.dim()..b.dim() + q, 0..z.dim());
    Ok(Subquotient { dim: q, projection, section })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_over_zero() {
        let f = Field::Rationals;
        let sq = subquotient(&Subspace::full(f, 3), &Subspace::zero(f, 3)).unwrap();
        assert_eq!(sq.dim, 3);
        assert!(sq.projection.is_invertible());
        assert!(sq.projection.mul(&sq.section).is_identity());
    }

    #[test]
    fn equal_spaces_give_zero_quotient() {
        let f = Field::Prime(5);
        let z = Subspace::span(&Matrix::from_i64(f, 3, 2, &[1, 0, 1, 1, 0, 2]));
        let sq = subquotient(&z, &z).unwrap();
        assert_eq!(sq.dim, 0);
    }

    #[test]
    fn subquotient_errors() {
        let f = Field::Rationals;
        assert_eq!(
            subquotient(&Subspace::full(f, 2), &Subspace::zero(f, 3)),
            Err(LinError::AmbientMismatch { left: 2, right: 3 })
        );
        let line = Subspace::span(&Matrix::from_i64(f, 2, 1, &[1, 0]));
        let other = Subspace::span(&Matrix::from_i64(f, 2, 1, &[0, 1]));
        assert_eq!(subquotient(&line, &other), Err(LinError::NotContained));
    }

    #[test]
    fn intersection_and_preimage() {
        let f = Field::Rationals;
        let xy = Subspace::span(&Matrix::from_i64(f, 3, 2, &[1, 0, 0, 1, 0, 0]));
        let yz = Subspace::span(&Matrix::from_i64(f, 3, 2, &[0, 0, 1, 0, 0, 1]));
        let y = xy.intersection(&yz);
        assert_eq!(y.dim(), 1);
        assert!(y.contains_vectors(&Matrix::from_i64(f, 3, 1, &[0, 5, 0])));
        // projection to the first coordinate; preimage of 0 is the yz-plane
        let p = Matrix::from_i64(f, 1, 3, &[1, 0, 0]);
        assert!(Subspace::preimage(&p, &Subspace::zero(f, 1)).same_as(&yz));
        assert_eq!(xy.sum(&yz).dim(), 3);
    }
}
