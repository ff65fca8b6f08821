//! Seeded generators for strongly nilpotent matrices, quasi-translations in
//! block shape, and homogeneous free matrices.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::free::{FreePoly, FreePolyMatrix, Word};
use crate::linalg::QMatrix;
use crate::maps::PolyMap;
use crate::poly::Poly;
use crate::polymat::PolyMatrix;
use crate::ring::{scalar, Scalar};
use crate::var::{Monomial, VarId};

pub struct Generator {
    rng: ChaCha8Rng,
}

impl Generator {
    pub fn new(seed: u64) -> Self {
        Generator { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn coefficient(&mut self) -> Scalar {
        loop {
            let c = self.rng.gen_range(-3i64..=3);
            if c != 0 {
                return scalar(c);
            }
        }
    }

    /// Random sizes `s_1..s_k` summing to `m` with `k >= 2` when `m >= 2`.
    pub fn composition(&mut self, m: usize) -> Vec<usize> {
        if m < 2 {
            return vec![m];
        }
        loop {
            let mut parts = vec![1];
            for _ in 1..m {
                if self.rng.gen_bool(0.5) {
                    parts.push(1);
                } else {
                    *parts.last_mut().expect("nonempty") += 1;
                }
            }
            if parts.len() >= 2 {
                return parts;
            }
        }
    }

    /// Integer matrix with determinant 1 from random elementary row
    /// operations on the identity.
    pub fn unimodular(&mut self, m: usize) -> QMatrix {
        let mut t = QMatrix::identity(m);
        if m < 2 {
            return t;
        }
        for _ in 0..m + 1 {
            let i = self.rng.gen_range(0..m);
            let mut j = self.rng.gen_range(0..m - 1);
            if j >= i {
                j += 1;
            }
            let c = scalar(if self.rng.gen_bool(0.5) { 1 } else { -1 });
            for k in 0..m {
                let v = &t[(j, k)] * &c;
                t[(i, k)] += v;
            }
        }
        t
    }

    /// Random polynomial in `vars` with terms of degree `1..=max_deg`.
    pub fn polynomial(&mut self, vars: &[VarId], max_deg: u32, max_terms: usize) -> Poly {
        let count = self.rng.gen_range(1..=max_terms);
        let mut p = Poly::zero();
        for _ in 0..count {
            let deg = self.rng.gen_range(1..=max_deg);
            let m = Monomial::from_pairs((0..deg).map(|_| (*vars.choose(&mut self.rng).expect("vars"), 1)));
            p = &p + &Poly::term(self.coefficient(), m);
        }
        p
    }

    /// `R^{-1} L R` with `L` strictly block-lower-triangular over a random
    /// block partition, entries of degree at most 2 in `x1..xn`, and `R`
    /// unimodular. Returns the matrix and the block sizes of `L`.
    pub fn strongly_nilpotent_matrix(&mut self, max_m: usize) -> (PolyMatrix, Vec<usize>) {
        let m = self.rng.gen_range(2..=max_m.max(2));
        let n = self.rng.gen_range(1..=3);
        let vars = VarId::xs(n);
        let blocks = self.composition(m);
        let mut block_of = Vec::with_capacity(m);
        for (b, &s) in blocks.iter().enumerate() {
            block_of.extend(std::iter::repeat_n(b, s));
        }
        let density = self.rng.gen_range(0.3..0.9);
        let mut lower = PolyMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                if block_of[i] > block_of[j] && self.rng.gen_bool(density) {
                    let p = self.polynomial(&vars, 2, 2);
                    lower.set(i, j, p);
                }
            }
        }
        let r = self.unimodular(m);
        // R^{-1} L R = conjugate of L by R
        let out = lower.conjugate(&r).expect("unimodular is invertible");
        (out, blocks)
    }

    /// A map whose first `s` components vanish and whose other components
    /// lie in `x1..xs`, conjugated by a unimodular matrix.
    pub fn qt2_map(&mut self, max_n: usize) -> PolyMap {
        let n = self.rng.gen_range(2..=max_n.max(2));
        let s = self.rng.gen_range(1..n);
        let head = VarId::xs(s);
        let comps = (0..n).map(|i| if i < s { Poly::zero() } else { self.polynomial(&head, 2, 2) }).collect();
        let h = PolyMap::new(comps).expect("x-only");
        self.conjugate_map(&h)
    }

    pub fn conjugate_map(&mut self, h: &PolyMap) -> PolyMap {
        let t = self.unimodular(h.dim());
        h.conjugate(&t).expect("unimodular is invertible")
    }

    fn free_homogeneous(&mut self, vars: &[VarId], d: usize, max_terms: usize) -> FreePoly {
        let count = self.rng.gen_range(1..=max_terms);
        let mut p = FreePoly::zero();
        for _ in 0..count {
            let w = Word::new((0..d).map(|_| *vars.choose(&mut self.rng).expect("vars")).collect());
            p = &p + &FreePoly::term(self.coefficient(), w);
        }
        p
    }

    /// `R^{-1} L R` with `L` strictly lower triangular over words of one
    /// length `d in 1..=max_deg`, `R` unimodular.
    pub fn homogeneous_free_matrix(&mut self, max_m: usize, max_deg: usize) -> FreePolyMatrix {
        let m = self.rng.gen_range(2..=max_m.max(2));
        let n = self.rng.gen_range(1..=3);
        let d = self.rng.gen_range(1..=max_deg.max(1));
        let vars = VarId::xs(n);
        let density = self.rng.gen_range(0.4..1.0);
        let mut rows = vec![vec![FreePoly::zero(); m]; m];
        for (i, row) in rows.iter_mut().enumerate() {
            for cell in row.iter_mut().take(i) {
                if self.rng.gen_bool(density) {
                    *cell = self.free_homogeneous(&vars, d, 3);
                }
            }
        }
        let lower = FreePolyMatrix::from_rows(rows).expect("square");
        let r = self.unimodular(m);
        lower.conjugate(&r).expect("unimodular is invertible")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_output_is_reproducible() {
        let a = Generator::new(7).strongly_nilpotent_matrix(5);
        let b = Generator::new(7).strongly_nilpotent_matrix(5);
        assert_eq!(a, b);
        let a = Generator::new(7).homogeneous_free_matrix(4, 2);
        let b = Generator::new(7).homogeneous_free_matrix(4, 2);
        assert_eq!(a, b);
    }

    #[test]
    fn unimodular_has_integer_inverse() {
        let mut g = Generator::new(1);
        for m in 1..=5 {
            let t = g.unimodular(m);
            let inv = t.invert().unwrap();
            assert!((&t * &inv).is_identity());
            assert!(inv.to_rows().iter().flatten().all(|q| q.is_integer()));
        }
    }

    #[test]
    fn composition_sums() {
        let mut g = Generator::new(3);
        for m in 2..=6 {
            let c = g.composition(m);
            assert_eq!(c.iter().sum::<usize>(), m);
            assert!(c.len() >= 2);
        }
    }
}
