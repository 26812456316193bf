//! The graph G_u on F_p[x]/(u) with edges α → αx + c, c ≠ 0, its adjacency
//! matrix and exact walk counts.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::{CountMatrix, ExactMatrix, Matrix};
use crate::budget::{sat_pow, Budget};
use crate::error::{Error, Result};
use crate::fppoly::{FpPoly, PrimeField};

/// Vertices are residues mod u, indexed by the base-p digits of their
/// coefficient vector (lowest coefficient first).
#[derive(Clone, Debug)]
pub struct ResidueGraph {
    field: PrimeField,
    u: FpPoly,
    /// Index of αx mod u for each vertex α.
    times_x: Vec<u32>,
}

/// Builds G_u, verifying that every vertex has in- and out-degree p - 1.
pub fn build_graph(u: &FpPoly, budget: &Budget) -> Result<ResidueGraph> {
    if u.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !u.is_monic() {
        return Err(Error::NotMonic);
    }
    if u.coeff(0) == 0 {
        return Err(Error::DivisibleByX(u.to_string()));
    }
    let field = u.field();
    let p = field.p() as u64;
    let d = u.degree().unwrap();
    budget.check_enumeration("residue graph", sat_pow(p, d as u32))?;
    let size = p.pow(d as u32) as usize;
    let mut times_x = Vec::with_capacity(size);
    let mut digits = vec![0u32; d];
    for index in 0..size {
        let mut rest = index as u64;
        for digit in digits.iter_mut() {
            *digit = (rest % p) as u32;
            rest /= p;
        }
        // αx = top·x^d + (shifted lower digits); x^d ≡ -(u - x^d)
        let top = if d == 0 { 0 } else { digits[d - 1] };
        let mut image = 0u64;
        for i in (0..d).rev() {
            let shifted = if i == 0 { 0 } else { digits[i - 1] };
            let c = field.sub(shifted, field.mul(top, u.coeff(i)));
            image = image * p + c as u64;
        }
        times_x.push(image as u32);
    }
    let graph = ResidueGraph { field, u: u.clone(), times_x };
    let mut indegree = vec![0u64; size];
    for alpha in 0..size {
        for beta in graph.successors(alpha) {
            indegree[beta] += 1;
        }
    }
    if indegree.iter().any(|&k| k != p - 1) {
        return Err(Error::Degenerate(format!("G_{u} is not {}-regular", p - 1)));
    }
    Ok(graph)
}

impl ResidueGraph {
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn modulus(&self) -> &FpPoly {
        &self.u
    }

    pub fn degree(&self) -> usize {
        self.u.degree().unwrap()
    }

    /// N = p^{deg u}.
    pub fn size(&self) -> usize {
        self.times_x.len()
    }

    /// The p - 1 distinct targets αx + c, c = 1, ..., p-1.
    pub fn successors(&self, alpha: usize) -> impl Iterator<Item = usize> + '_ {
        let p = self.field.p() as usize;
        let t = self.times_x[alpha] as usize;
        let low = if self.size() == 1 { 0 } else { t % p };
        (1..p).map(move |c| if self.size() == 1 { 0 } else { t - low + (low + c) % p })
    }

    pub fn vertex(&self, alpha: &FpPoly) -> Result<usize> {
        let r = alpha.rem(&self.u)?;
        let p = self.field.p() as u64;
        Ok(r.coeffs().iter().rev().fold(0u64, |acc, &c| acc * p + c as u64) as usize)
    }

    pub fn residue(&self, index: usize) -> FpPoly {
        let p = self.field.p() as usize;
        let mut rest = index;
        let coeffs = (0..self.degree())
            .map(|_| {
                let c = (rest % p) as u32;
                rest /= p;
                c
            })
            .collect();
        FpPoly::from_residues(self.field, coeffs)
    }

    /// Number of walks of length `n` from `alpha` to every vertex. Errors if
    /// (p-1)^n overflows u128.
    pub fn walk_counts(&self, alpha: usize, n: usize) -> Result<Vec<u128>> {
        let p = self.field.p() as u64;
        if sat_pow(p - 1, n as u32) == u128::MAX {
            return Err(Error::OutOfRange(format!("(p-1)^{n} walks overflow 128 bits")));
        }
        let mut counts = vec![0u128; self.size()];
        counts[alpha] = 1;
        let mut next = vec![0u128; self.size()];
        for _ in 0..n {
            next.iter_mut().for_each(|c| *c = 0);
            for (v, &c) in counts.iter().enumerate() {
                if c != 0 {
                    for w in self.successors(v) {
                        next[w] += c;
                    }
                }
            }
            std::mem::swap(&mut counts, &mut next);
        }
        Ok(counts)
    }
}

/// M_u (entries 0/1) or M̃_u = M_u/(p-1), flagged when doubly stochastic.
#[derive(Clone, Debug, Serialize)]
pub struct StochMatrix {
    pub dim: usize,
    #[serde(skip)]
    pub matrix: ExactMatrix,
    pub doubly_stochastic: bool,
}

/// Integer adjacency matrix with (β, α) entry 1 when α → β is an edge.
pub fn adjacency_counts(g: &ResidueGraph) -> CountMatrix {
    let n = g.size();
    let mut m = Matrix::<BigInt>::zeros(n, n);
    for alpha in 0..n {
        for beta in g.successors(alpha) {
            let v = m.get(beta, alpha) + BigInt::one();
            m.set(beta, alpha, v);
        }
    }
    m
}

pub fn adjacency(g: &ResidueGraph, normalized: bool) -> StochMatrix {
    let counts = adjacency_counts(g);
    let scale = if normalized {
        BigRational::new(BigInt::one(), BigInt::from(g.field().p() - 1))
    } else {
        BigRational::one()
    };
    let matrix = counts.map(|c| BigRational::from_integer(c.clone()) * scale.clone());
    let doubly_stochastic = matrix.is_doubly_stochastic();
    StochMatrix { dim: g.size(), matrix, doubly_stochastic }
}

/// Walks of length `n` from `alpha` to `beta`: the (β, α) entry of M_u^n,
/// by repeated squaring.
pub fn path_count(g: &ResidueGraph, alpha: usize, beta: usize, n: u64, budget: &Budget) -> Result<BigInt> {
    let size = g.size();
    if alpha >= size || beta >= size {
        return Err(Error::OutOfRange(format!("vertex index outside 0..{size}")));
    }
    let steps = 64 - n.leading_zeros() as u128 + 1;
    budget.check_enumeration("matrix power", (size as u128).pow(3).saturating_mul(2 * steps))?;
    let power = adjacency_counts(g).pow(n);
    Ok(power.get(beta, alpha).clone())
}

/// |{h in U_n : u | h}| as the number of walks 1 → 0 of length n: the
/// leading coefficient starts the walk, each step appends a nonzero digit.
pub fn divisible_count_via_paths(n: u64, u: &FpPoly, budget: &Budget) -> Result<BigInt> {
    let g = build_graph(u, budget)?;
    let one = g.vertex(&FpPoly::one(g.field()))?;
    path_count(&g, one, 0, n, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fppoly::{count_divisible, enumerate_monic, Constraint};

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn graph_shapes() {
        let g = build_graph(&FpPoly::linear(fp(3), 1), &b()).unwrap();
        assert_eq!(g.size(), 3);
        let g = build_graph(&FpPoly::new(fp(3), &[1, 0, 1]), &b()).unwrap();
        assert_eq!(g.size(), 9);
        assert!(matches!(build_graph(&FpPoly::x(fp(3)), &b()), Err(Error::DivisibleByX(_))));
        assert!(build_graph(&FpPoly::new(fp(3), &[1, 2]), &b()).is_err());
    }

    #[test]
    fn edges_follow_the_rule() {
        // u = x + 1: αx ≡ -α, so α → -α + c
        let g = build_graph(&FpPoly::linear(fp(3), 1), &b()).unwrap();
        for alpha in 0..3usize {
            let mut targets: Vec<usize> = g.successors(alpha).collect();
            targets.sort();
            let mut expected: Vec<usize> = (1..3).map(|c| (6 - alpha + c) % 3).collect();
            expected.sort();
            assert_eq!(targets, expected);
        }
        let m = adjacency(&g, false);
        for i in 0..3 {
            assert_eq!(m.matrix.row(i).iter().filter(|v| v.is_one()).count(), 2);
        }
        assert!(!m.doubly_stochastic);
    }

    #[test]
    fn vertex_indexing_round_trips() {
        let u = FpPoly::new(fp(5), &[2, 3, 1]);
        let g = build_graph(&u, &b()).unwrap();
        for i in 0..g.size() {
            assert_eq!(g.vertex(&g.residue(i)).unwrap(), i);
        }
        // successor rule agrees with polynomial arithmetic
        for i in 0..g.size() {
            let alpha = g.residue(i);
            let ax = (&alpha * &FpPoly::x(fp(5))).rem(&u).unwrap();
            for (c, t) in (1..5).zip(g.successors(i)) {
                let expected = ax.checked_add(&FpPoly::constant(fp(5), c)).unwrap();
                assert_eq!(g.residue(t), expected);
            }
        }
    }

    #[test]
    fn normalized_adjacency_is_doubly_stochastic() {
        for u in [FpPoly::linear(fp(3), 2), FpPoly::new(fp(5), &[1, 1, 1])] {
            let g = build_graph(&u, &b()).unwrap();
            let m = adjacency(&g, true);
            assert!(m.doubly_stochastic);
            let j = ExactMatrix::uniform(m.dim);
            assert_eq!(m.matrix.mul(&j), j);
            assert_eq!(j.mul(&m.matrix), j);
            let raw = adjacency(&g, false);
            assert!(raw.matrix.row_sums().iter().all(|s| *s == BigRational::from_integer((u.p() - 1).into())));
        }
    }

    #[test]
    fn path_counts() {
        let g = build_graph(&FpPoly::new(fp(3), &[-1, 1]), &b()).unwrap();
        assert_eq!(path_count(&g, 1, 1, 0, &b()).unwrap(), BigInt::one());
        assert_eq!(path_count(&g, 0, 0, 4, &b()).unwrap(), BigInt::from(6));
        let total: BigInt = (0..3).map(|beta| path_count(&g, 0, beta, 5, &b()).unwrap()).sum();
        assert_eq!(total, BigInt::from(32));
        let dp = g.walk_counts(0, 5).unwrap();
        for (beta, &c) in dp.iter().enumerate() {
            assert_eq!(path_count(&g, 0, beta, 5, &b()).unwrap(), BigInt::from(c));
        }
    }

    #[test]
    fn walks_match_tuple_enumeration() {
        // |A_n(u; β)| by direct enumeration of (a_1..a_n) in (F_p^*)^n
        for p in [3u64, 5] {
            for d in 1..=2 {
                for u in enumerate_monic(fp(p), d, Constraint::CoprimeToX, &b()).unwrap() {
                    let g = build_graph(&u, &b()).unwrap();
                    for n in 0..=5usize {
                        let mut direct = vec![0u128; g.size()];
                        for tuple in enumerate_monic(fp(p), n, Constraint::NonzeroCoeffs, &b()).unwrap() {
                            // drop the leading 1: a_1 x^{n-1} + ... + a_n
                            let mut c = tuple.coeffs().to_vec();
                            c.pop();
                            let a = FpPoly::from_residues(fp(p), c);
                            direct[g.vertex(&a).unwrap()] += 1;
                        }
                        assert_eq!(g.walk_counts(0, n).unwrap(), direct, "u={u} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn paths_agree_with_divisibility_counts() {
        for p in [3u64, 5] {
            for d in 0..=2 {
                for u in enumerate_monic(fp(p), d, Constraint::All, &b()).unwrap() {
                    if d > 0 && u.coeff(0) == 0 {
                        continue;
                    }
                    for n in 1..=6u64 {
                        let direct = count_divisible(n as usize, &u, &b()).unwrap();
                        assert_eq!(divisible_count_via_paths(n, &u, &b()).unwrap(), BigInt::from(direct), "u={u} n={n}");
                    }
                }
            }
        }
    }
}
