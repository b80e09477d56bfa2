//! p-adic factorization and valuations of Frobenius eigenvalues.
//!
//! Factorization goes through the p-maximal order `O` of `Q[T]/(f)`: the
//! local components of `O/pO` correspond to the `Q_p`-irreducible factors of
//! `f`. Each component gives its local degree (dimension), residue degree
//! (dimension modulo the radical) and, after lifting its idempotent modulo
//! `p^k`, an approximate factor as the characteristic polynomial of `T`.
//!
//! Valuations of the roots at one prime of the splitting field are pinned
//! down by probes: for an exponent vector `k`, the polynomial with roots
//! `prod_j alpha_{g(j)}^{k_j}`, `g` in `G`, has integer coefficients and its
//! Newton slopes are the values `<k, v o g>`.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::intpoly::modp::{mulmod, submod};
use crate::intpoly::{FpPoly, IntPolynomial};
use crate::linalg::{charpoly_int, fp, hnf_rows, inverse_rational, vec_mat_rational};
use crate::newton::{newton_polygon_of, rat, valuation};
use crate::numeric::ball::poly_from_roots;
use crate::numeric::{Ball, IntegerTest, Mag};
use crate::splitting::{complex_roots, ComplexRootSet, GaloisCertificate, SplittingError};

const MAX_ACCURACY: u32 = 1 << 14;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LocalFieldError {
    #[error("polynomial must be monic and squarefree")]
    NotMonicSquarefree,
    #[error("local algebra decomposition failed: {0}")]
    Decomposition(String),
    #[error("precision exhausted")]
    PrecisionExhausted,
    #[error("valuation assignment unresolved: {0}")]
    ValuationUnresolved(String),
    #[error(transparent)]
    Splitting(#[from] SplittingError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicFactor {
    /// Monic, coefficients reduced into `[0, p^k)`.
    pub approx: IntPolynomial,
    pub degree: usize,
    /// Valuation of each root with `v(p) = 1`.
    pub slope: BigRational,
    pub residue_degree: usize,
    pub ramification: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicFactorization {
    pub p: u64,
    pub precision: u32,
    pub factors: Vec<PadicFactor>,
}

impl PadicFactorization {
    /// `(degree, slope)` per factor with slopes normalized to `v(p^n) = 1`.
    pub fn local_data(&self, n: u32) -> Vec<(usize, BigRational)> {
        let nn = BigRational::from_integer(BigInt::from(n));
        self.factors.iter().map(|f| (f.degree, &f.slope / &nn)).collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.degree).collect()
    }
}

/// A full-rank order given by a basis in power coordinates.
struct Order {
    n: usize,
    basis: Vec<Vec<BigRational>>,
    inverse: Vec<Vec<BigRational>>,
    /// `table[i][j]` = coordinates of `b_i b_j`.
    table: Vec<Vec<Vec<BigInt>>>,
}

fn power_mul(f: &IntPolynomial, x: &[BigRational], y: &[BigRational]) -> Vec<BigRational> {
    let n = f.deg();
    let mut prod = vec![BigRational::zero(); 2 * n];
    for (i, a) in x.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in y.iter().enumerate() {
            prod[i + j] += a * b;
        }
    }
    for k in (n..2 * n).rev() {
        let c = std::mem::take(&mut prod[k]);
        if c.is_zero() {
            continue;
        }
        for i in 0..n {
            prod[k - n + i] -= &c * BigRational::from_integer(f.coeff(i));
        }
    }
    prod.truncate(n);
    prod
}

impl Order {
    fn new(f: &IntPolynomial, basis: Vec<Vec<BigRational>>) -> Order {
        let n = f.deg();
        let inverse = inverse_rational(&basis).expect("order basis is nonsingular");
        let table = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        vec_mat_rational(&power_mul(f, &basis[i], &basis[j]), &inverse)
                            .into_iter()
                            .map(|c| {
                                assert!(c.is_integer(), "order not closed under multiplication");
                                c.to_integer()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Order { n, basis, inverse, table }
    }

    fn coords(&self, x: &[BigRational]) -> Vec<BigRational> {
        vec_mat_rational(x, &self.inverse)
    }

    fn integral_coords(&self, x: &[BigRational]) -> Vec<BigInt> {
        self.coords(x)
            .into_iter()
            .map(|c| {
                assert!(c.is_integer(), "element not in order");
                c.to_integer()
            })
            .collect()
    }

    fn table_mod_p(&self, p: u64) -> Vec<Vec<Vec<u64>>> {
        self.table
            .iter()
            .map(|r| r.iter().map(|v| v.iter().map(|c| reduce(c, p)).collect()).collect())
            .collect()
    }

    fn mul_mod(&self, x: &[BigInt], y: &[BigInt], modulus: &BigInt) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.n];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in self.table[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &ab * c;
                    }
                }
            }
        }
        out.into_iter().map(|c| c.mod_floor(modulus)).collect()
    }
}

fn reduce(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p)).to_u64().expect("reduced")
}

fn mul_fp(table: &[Vec<Vec<u64>>], x: &[u64], y: &[u64], p: u64) -> Vec<u64> {
    let n = x.len();
    let mut out = vec![0u64; n];
    for i in 0..n {
        if x[i] == 0 {
            continue;
        }
        for j in 0..n {
            if y[j] == 0 {
                continue;
            }
            let ab = mulmod(x[i], y[j], p);
            for k in 0..n {
                let c = table[i][j][k];
                if c != 0 {
                    out[k] = (out[k] + mulmod(ab, c, p)) % p;
                }
            }
        }
    }
    out
}

fn pow_fp(table: &[Vec<Vec<u64>>], x: &[u64], mut e: u64, one: &[u64], p: u64) -> Vec<u64> {
    let mut acc = one.to_vec();
    let mut base = x.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_fp(table, &acc, &base, p);
        }
        e >>= 1;
        if e > 0 {
            base = mul_fp(table, &base, &base, p);
        }
    }
    acc
}

fn unit_vectors(n: usize) -> Vec<Vec<u64>> {
    (0..n).map(|i| (0..n).map(|j| (i == j) as u64).collect()).collect()
}

/// Columns `g(e_i)` as a row-major matrix.
fn columns_to_matrix(cols: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = cols.len();
    (0..n).map(|r| cols.iter().map(|c| c[r]).collect()).collect()
}

/// Nilradical of `O/pO`: kernel of `x -> x^(p^j)` with `p^j >= n`.
fn radical(table: &[Vec<Vec<u64>>], one: &[u64], p: u64) -> Vec<Vec<u64>> {
    let n = one.len();
    let mut e = p;
    while (e as usize) < n {
        e *= p;
    }
    let images: Vec<Vec<u64>> = unit_vectors(n).iter().map(|x| pow_fp(table, x, e, one, p)).collect();
    fp::nullspace(&columns_to_matrix(&images), n, p)
}

fn one_coords(ord: &Order) -> Vec<BigInt> {
    let mut one = vec![BigRational::zero(); ord.n];
    one[0] = BigRational::one();
    ord.integral_coords(&one)
}

fn normalize_basis(rows: Vec<Vec<BigRational>>) -> Vec<Vec<BigRational>> {
    let den = rows.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect())
        .collect();
    hnf_rows(ints)
        .into_iter()
        .map(|r| r.into_iter().map(|x| BigRational::new(x, den.clone())).collect())
        .collect()
}

/// Round 2: enlarge `Z[T]/(f)` until it is maximal at p.
fn p_maximal_order(f: &IntPolynomial, p: u64) -> Order {
    let n = f.deg();
    let pb = BigInt::from(p);
    let mut basis: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    loop {
        let ord = Order::new(f, basis);
        let table = ord.table_mod_p(p);
        let one: Vec<u64> = one_coords(&ord).iter().map(|c| reduce(c, p)).collect();
        let rad = radical(&table, &one, p);
        let mut gens: Vec<Vec<BigInt>> = rad.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
        for k in 0..n {
            gens.push((0..n).map(|j| if j == k { pb.clone() } else { BigInt::zero() }).collect());
        }
        let ideal = hnf_rows(gens);
        let ideal_rat: Vec<Vec<BigRational>> =
            ideal.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
        let ideal_inv = inverse_rational(&ideal_rat).expect("radical has full rank");
        // u -> (u y_l in ideal coordinates mod p)
        let mut m = vec![vec![0u64; n * n]; n];
        for i in 0..n {
            for (l, y) in ideal.iter().enumerate() {
                let mut prod = vec![BigInt::zero(); n];
                for (k, yk) in y.iter().enumerate() {
                    if yk.is_zero() {
                        continue;
                    }
                    for (t, c) in ord.table[i][k].iter().enumerate() {
                        prod[t] += yk * c;
                    }
                }
                let prod_rat: Vec<BigRational> = prod.into_iter().map(BigRational::from_integer).collect();
                for (t, c) in vec_mat_rational(&prod_rat, &ideal_inv).into_iter().enumerate() {
                    assert!(c.is_integer(), "radical is an ideal");
                    m[i][l * n + t] = reduce(&c.to_integer(), p);
                }
            }
        }
        let ker = fp::nullspace(&fp::transpose(&m, n * n), n, p);
        let mut gens: Vec<Vec<BigInt>> = ker.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
        for k in 0..n {
            gens.push((0..n).map(|j| if j == k { pb.clone() } else { BigInt::zero() }).collect());
        }
        let u = hnf_rows(gens);
        let det = (0..n).fold(BigInt::one(), |acc, i| acc * &u[i][i]);
        if det == pb.pow(n as u32) {
            return ord;
        }
        let pr = BigRational::from_integer(pb.clone());
        let next: Vec<Vec<BigRational>> = u
            .iter()
            .map(|row| {
                let mut v = vec![BigRational::zero(); n];
                for (k, c) in row.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let s = BigRational::from_integer(c.clone()) / &pr;
                    for t in 0..n {
                        v[t] += &s * &ord.basis[k][t];
                    }
                }
                v
            })
            .collect();
        basis = normalize_basis(next);
    }
}

fn mult_matrix_fp(table: &[Vec<Vec<u64>>], y: &[u64], p: u64) -> Vec<Vec<u64>> {
    let n = y.len();
    let cols: Vec<Vec<u64>> = unit_vectors(n).iter().map(|e| mul_fp(table, y, e, p)).collect();
    columns_to_matrix(&cols)
}

fn charpoly_fp(m: &[Vec<u64>], p: u64) -> FpPoly {
    let ints: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let c: Vec<u64> = charpoly_int(&ints).iter().map(|x| reduce(x, p)).collect();
    FpPoly::new(p, c)
}

struct Component {
    space: Vec<Vec<u64>>,
    residue_degree: usize,
}

/// Local components of `O/pO` as joint generalized eigenspaces of the
/// elements that are Frobenius-fixed modulo the radical.
fn components(table: &[Vec<Vec<u64>>], one: &[u64], p: u64) -> Result<Vec<Component>, LocalFieldError> {
    let n = one.len();
    let rad = fp::span(&radical(table, one, p), p);
    let mut rad_pivots = Vec::new();
    for row in &rad {
        rad_pivots.push(row.iter().position(|&x| x != 0).expect("nonzero echelon row"));
    }
    let reduce_rad = |mut v: Vec<u64>| -> Vec<u64> {
        for (row, &c) in rad.iter().zip(&rad_pivots) {
            let f = v[c];
            if f != 0 {
                for k in 0..n {
                    v[k] = submod(v[k], mulmod(f, row[k], p), p);
                }
            }
        }
        v
    };
    let images: Vec<Vec<u64>> = unit_vectors(n)
        .iter()
        .map(|e| {
            let fe = pow_fp(table, e, p, one, p);
            reduce_rad(fe.iter().zip(e).map(|(a, b)| submod(*a, *b, p)).collect())
        })
        .collect();
    let fixed = fp::nullspace(&columns_to_matrix(&images), n, p);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![unit_vectors(n)];
    for y in &fixed {
        let l = mult_matrix_fp(table, y, p);
        let eigen = charpoly_fp(&l, p).roots(&mut rng);
        let mut kernels = Vec::new();
        for c in eigen {
            let mut shifted = l.clone();
            for (i, row) in shifted.iter_mut().enumerate() {
                row[i] = submod(row[i], c, p);
            }
            let mut power = shifted.clone();
            for _ in 1..n {
                power = fp::mat_mul(&power, &shifted, p);
            }
            kernels.push(fp::nullspace(&power, n, p));
        }
        let mut next = Vec::new();
        for w in &spaces {
            for k in &kernels {
                let s = fp::intersect(w, k, n, p);
                if !s.is_empty() {
                    next.push(s);
                }
            }
        }
        spaces = next;
    }
    if spaces.iter().map(|s| s.len()).sum::<usize>() != n {
        return Err(LocalFieldError::Decomposition("components do not span the algebra".into()));
    }
    Ok(spaces
        .into_iter()
        .map(|space| {
            let residue_degree = space.len() - fp::intersect(&space, &rad, n, p).len();
            Component { space, residue_degree }
        })
        .collect())
}

/// Solve `1 = sum_i eps_i` with `eps_i` in component i.
fn idempotents(comps: &[Component], one: &[u64], p: u64) -> Vec<Vec<u64>> {
    let n = one.len();
    let vectors: Vec<&Vec<u64>> = comps.iter().flat_map(|c| c.space.iter()).collect();
    let mut aug: Vec<Vec<u64>> = (0..n)
        .map(|r| {
            let mut row: Vec<u64> = vectors.iter().map(|v| v[r]).collect();
            row.push(one[r]);
            row
        })
        .collect();
    let pivots = fp::rref(&mut aug, p);
    let mut x = vec![0u64; n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][n];
    }
    let mut out = Vec::new();
    let mut idx = 0;
    for c in comps {
        let mut e = vec![0u64; n];
        for v in &c.space {
            for k in 0..n {
                e[k] = (e[k] + mulmod(x[idx], v[k], p)) % p;
            }
            idx += 1;
        }
        out.push(e);
    }
    out
}

fn matrix_inverse_mod_pk(m: &[Vec<BigInt>], p: u64, modulus: &BigInt) -> Vec<Vec<BigInt>> {
    let n = m.len();
    let mut aug: Vec<Vec<u64>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<u64> = r.iter().map(|x| reduce(x, p)).collect();
            row.extend((0..n).map(|j| (i == j) as u64));
            row
        })
        .collect();
    fp::rref(&mut aug, p);
    let mut y: Vec<Vec<BigInt>> = aug.iter().map(|r| r[n..].iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mul = |a: &[Vec<BigInt>], b: &[Vec<BigInt>]| -> Vec<Vec<BigInt>> {
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum::<BigInt>().mod_floor(modulus)).collect())
            .collect()
    };
    let mut prec = BigInt::from(p);
    while &prec < modulus {
        // y <- y (2 - m y)
        let my = mul(m, &y);
        let corr: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::from(2) - &my[i][j] } else { -my[i][j].clone() }).collect())
            .collect();
        y = mul(&y, &corr);
        prec = &prec * &prec;
    }
    y
}

/// Factor a monic squarefree integer polynomial over `Q_p`, with approximate
/// factors modulo `p^k` for `k >= target_precision`.
pub fn factor_over_qp(f: &IntPolynomial, p: u64, target_precision: u32) -> Result<PadicFactorization, LocalFieldError> {
    if !f.is_monic() || f.deg() == 0 || f.gcd(&f.derivative()).deg() > 0 {
        return Err(LocalFieldError::NotMonicSquarefree);
    }
    let n = f.deg();
    let ord = p_maximal_order(f, p);
    let table = ord.table_mod_p(p);
    let one_int = one_coords(&ord);
    let one: Vec<u64> = one_int.iter().map(|c| reduce(c, p)).collect();
    let comps = components(&table, &one, p)?;
    let eps = idempotents(&comps, &one, p);
    let k = target_precision.max(valuation(&f.coeff(0), p) + 2);
    let modulus = BigInt::from(p).pow(k);
    let mut alpha = vec![BigRational::zero(); n];
    if n == 1 {
        alpha[0] = BigRational::from_integer(-f.coeff(0));
    } else {
        alpha[1] = BigRational::one();
    }
    let alpha = ord.integral_coords(&alpha);
    let basis_int: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as u8)).collect()).collect();
    let mut factors = Vec::new();
    for (comp, e0) in comps.iter().zip(eps) {
        let mut e: Vec<BigInt> = e0.iter().map(|&x| BigInt::from(x)).collect();
        loop {
            let e2 = ord.mul_mod(&e, &e, &modulus);
            if e2 == e {
                break;
            }
            let e3 = ord.mul_mod(&e2, &e, &modulus);
            e = e2.iter().zip(&e3).map(|(a, b)| (a * BigInt::from(3) - b * BigInt::from(2)).mod_floor(&modulus)).collect();
        }
        // columns eps * b_j
        let ecols: Vec<Vec<BigInt>> = basis_int.iter().map(|b| ord.mul_mod(&e, b, &modulus)).collect();
        let emat: Vec<Vec<u64>> = (0..n).map(|r| ecols.iter().map(|c| reduce(&c[r], p)).collect()).collect();
        let mut red = emat.clone();
        let pivots = fp::rref(&mut red, p);
        let deg = comp.space.len();
        if pivots.len() != deg {
            return Err(LocalFieldError::Decomposition("idempotent rank mismatch".into()));
        }
        let cmat: Vec<&Vec<BigInt>> = pivots.iter().map(|&c| &ecols[c]).collect();
        let acols: Vec<Vec<BigInt>> = cmat.iter().map(|c| ord.mul_mod(&alpha, c, &modulus)).collect();
        // rows where the basis columns are independent mod p
        let mut ct: Vec<Vec<u64>> = cmat.iter().map(|c| c.iter().map(|x| reduce(x, p)).collect()).collect();
        let rows = fp::rref(&mut ct, p);
        let cr: Vec<Vec<BigInt>> = rows.iter().map(|&r| cmat.iter().map(|c| c[r].clone()).collect()).collect();
        let ar: Vec<Vec<BigInt>> = rows.iter().map(|&r| acols.iter().map(|c| c[r].clone()).collect()).collect();
        let inv = matrix_inverse_mod_pk(&cr, p, &modulus);
        let x: Vec<Vec<BigInt>> = (0..deg)
            .map(|i| (0..deg).map(|j| (0..deg).map(|t| &inv[i][t] * &ar[t][j]).sum::<BigInt>().mod_floor(&modulus)).collect())
            .collect();
        let g: Vec<BigInt> = charpoly_int(&x).into_iter().map(|c| c.mod_floor(&modulus)).collect();
        let approx = IntPolynomial::new(g);
        let c0 = approx.coeff(0);
        if c0.is_zero() {
            return Err(LocalFieldError::PrecisionExhausted);
        }
        let slope = BigRational::new(BigInt::from(valuation(&c0, p)), BigInt::from(deg));
        let residue_degree = comp.residue_degree;
        factors.push(PadicFactor { approx, degree: deg, slope, residue_degree, ramification: deg / residue_degree });
    }
    // product check
    let prod = factors.iter().fold(IntPolynomial::one(), |acc, g| acc.mul(&g.approx));
    let diff = prod.sub(f);
    if diff.coeffs().iter().any(|c| !c.mod_floor(&modulus).is_zero()) {
        return Err(LocalFieldError::Decomposition("factor product differs from input".into()));
    }
    factors.sort_by(|a, b| (&a.slope, a.degree, a.approx.coeffs()).cmp(&(&b.slope, b.degree, b.approx.coeffs())));
    Ok(PadicFactorization { p, precision: k, factors })
}

/// Valuation vector of the roots at one prime above p, `v(q) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationAssignment {
    pub values: Vec<BigRational>,
    /// All `v o g` for `g` in the group, deduplicated and sorted.
    pub orbit: Vec<Vec<BigRational>>,
    pub probes: usize,
}

fn block_candidates(slopes: &[BigRational], pairs: usize) -> Vec<Vec<BigRational>> {
    let distinct: BTreeSet<BigRational> = slopes.iter().cloned().collect();
    let mut target = slopes.to_vec();
    target.sort();
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(
        distinct: &BTreeSet<BigRational>,
        target: &[BigRational],
        pairs: usize,
        current: &mut Vec<BigRational>,
        out: &mut Vec<Vec<BigRational>>,
    ) {
        if current.len() == pairs {
            let mut all: Vec<BigRational> = current.clone();
            all.extend(current.iter().map(|x| BigRational::one() - x));
            all.sort();
            if all == target {
                out.push(current.clone());
            }
            return;
        }
        for s in distinct {
            current.push(s.clone());
            rec(distinct, target, pairs, current, out);
            current.pop();
        }
    }
    rec(&distinct, &target, pairs, &mut current, &mut out);
    out
}

fn compose_vec(v: &[BigRational], g: &crate::w2d::SignedPerm) -> Vec<BigRational> {
    (0..v.len()).map(|x| v[g.apply(x)].clone()).collect()
}

fn predicted(orbit_rep: &[BigRational], group: &crate::w2d::SignedSubgroup, k: &[u32]) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = group
        .elements()
        .iter()
        .map(|g| {
            k.iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .fold(BigRational::zero(), |acc, (x, &e)| acc + &orbit_rep[g.apply(x)] * BigRational::from_integer(e.into()))
        })
        .collect();
    out.sort();
    out
}

fn probe_vectors(n: usize, seed: u64) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            let mut k = vec![0; n];
            k[x] = 1;
            k[y] = 1;
            out.push(k);
        }
    }
    for x in 0..n {
        for y in x + 1..n {
            for z in y + 1..n {
                let mut k = vec![0; n];
                k[x] = 1;
                k[y] = 1;
                k[z] = 1;
                out.push(k);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        out.push((0..n).map(|_| rand::Rng::gen_range(&mut rng, 0..3)).collect());
    }
    out
}

/// Observed Newton slopes of the probe polynomial for `k`, or `None` when
/// the coefficients are not pinned at this precision.
fn observe(roots: &ComplexRootSet, group: &crate::w2d::SignedSubgroup, k: &[u32], p: u64, n: u32) -> Option<Vec<BigRational>> {
    let prec = roots.distinct[0].prec;
    let betas: Vec<Ball> = group
        .elements()
        .iter()
        .map(|g| {
            k.iter().enumerate().filter(|(_, &e)| e > 0).fold(Ball::from_i64(1, prec), |acc, (x, &e)| {
                acc.mul(&roots.root_of(g.apply(x)).pow(e))
            })
        })
        .collect();
    let coeffs = poly_from_roots(&betas, prec);
    let mut ints = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        match c.integer_test() {
            IntegerTest::Integer(v) if c.rad < Mag::pow2(-32) => ints.push(v),
            _ => return None,
        }
    }
    let poly = IntPolynomial::new(ints);
    if poly.coeff(0).is_zero() {
        return None;
    }
    Some(newton_polygon_of(&poly, p, n).slopes)
}

/// Valuations of the roots at one prime of the splitting field, up to the
/// group action, as a climbing-agnostic vector over the encoded symbols.
/// Seed for the random tail of the probe sequence.
pub const PROBE_SEED: u64 = 0x9e37;

pub fn root_valuations(cert: &GaloisCertificate, p: u64, n: u32) -> Result<ValuationAssignment, LocalFieldError> {
    root_valuations_seeded(cert, p, n, PROBE_SEED)
}

pub fn root_valuations_seeded(
    cert: &GaloisCertificate,
    p: u64,
    n: u32,
    seed: u64,
) -> Result<ValuationAssignment, LocalFieldError> {
    let d = cert.d;
    let half = rat(1, 2);
    // candidates block by block
    let mut partial: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); 2 * d]];
    for b in &cert.blocks {
        let k = b.kind.pairs();
        let options: Vec<Vec<BigRational>> = if b.kind.is_real() {
            vec![vec![half.clone(); k]]
        } else {
            block_candidates(&newton_polygon_of(&b.factor, p, n).slopes, k)
        };
        let mut next = Vec::new();
        for base in &partial {
            for opt in &options {
                let mut v = base.clone();
                for (i, x) in opt.iter().enumerate() {
                    v[b.offset + i] = x.clone();
                    v[d + b.offset + i] = BigRational::one() - x;
                }
                next.push(v);
            }
        }
        partial = next;
    }
    // group into orbits
    let mut orbits: Vec<Vec<Vec<BigRational>>> = Vec::new();
    let mut seen: HashMap<Vec<BigRational>, usize> = HashMap::new();
    for v in partial {
        if seen.contains_key(&v) {
            continue;
        }
        let mut orbit: Vec<Vec<BigRational>> = cert.group.elements().iter().map(|g| compose_vec(&v, g)).collect();
        orbit.sort();
        orbit.dedup();
        for u in &orbit {
            seen.insert(u.clone(), orbits.len());
        }
        orbits.push(orbit);
    }
    let mut roots = cert.roots.clone();
    let mut probes = 0;
    let mut candidates: Vec<usize> = (0..orbits.len()).collect();
    let mut pending = probe_vectors(2 * d, seed).into_iter();
    while candidates.len() > 1 {
        let Some(k) = pending.next() else {
            return Err(LocalFieldError::ValuationUnresolved(format!("{} orbits remain", candidates.len())));
        };
        let preds: Vec<Vec<BigRational>> = candidates.iter().map(|&i| predicted(&orbits[i][0], &cert.group, &k)).collect();
        if preds.iter().all(|x| *x == preds[0]) {
            continue;
        }
        let observed = loop {
            match observe(&roots, &cert.group, &k, p, n) {
                Some(s) => break s,
                None => {
                    let acc = roots.accuracy * 2;
                    if acc > MAX_ACCURACY {
                        return Err(LocalFieldError::PrecisionExhausted);
                    }
                    roots = complex_roots(&roots.weil, acc)?;
                }
            }
        };
        probes += 1;
        candidates = candidates.into_iter().zip(preds).filter(|(_, pr)| *pr == observed).map(|(i, _)| i).collect();
    }
    let Some(&winner) = candidates.first() else {
        return Err(LocalFieldError::ValuationUnresolved("no candidate matches the probes".into()));
    };
    let orbit = orbits[winner].clone();
    Ok(ValuationAssignment { values: orbit[0].clone(), orbit, probes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intpoly::validate_weil;
    use crate::splitting::{complex_roots, direct_sum, galois_group};

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn ordinary_quadratic_splits() {
        let f = factor_over_qp(&poly(&[19, 8, 1]), 19, 10).unwrap();
        assert_eq!(f.degrees(), vec![1, 1]);
        assert_eq!(f.factors[0].slope, rat(0, 1));
        assert_eq!(f.factors[1].slope, rat(1, 1));
        // the unit root is -8 mod 19 to first order
        assert_eq!(f.factors[0].approx.coeff(0).mod_floor(&BigInt::from(19)), BigInt::from(8));
    }

    #[test]
    fn eisenstein_is_ramified() {
        let f = factor_over_qp(&poly(&[-2, 0, 1]), 2, 8).unwrap();
        assert_eq!(f.factors.len(), 1);
        let g = &f.factors[0];
        assert_eq!((g.degree, g.ramification, g.residue_degree), (2, 2, 1));
        assert_eq!(g.slope, rat(1, 2));
    }

    #[test]
    fn non_monogenic_orders_are_enlarged() {
        // T^2 + 3 at 2: Z[sqrt(-3)] has index 2 in the maximal order; 2 is inert
        let f = factor_over_qp(&poly(&[3, 0, 1]), 2, 8).unwrap();
        assert_eq!(f.factors.len(), 1);
        assert_eq!((f.factors[0].residue_degree, f.factors[0].ramification), (2, 1));
        // T^2 + 7 at 2: splits
        let f = factor_over_qp(&poly(&[7, 0, 1]), 2, 8).unwrap();
        assert_eq!(f.degrees(), vec![1, 1]);
        // T^2 + 4 = (T - 2i)(T + 2i) over Q_5: 5 splits
        let f = factor_over_qp(&poly(&[4, 0, 1]), 5, 6).unwrap();
        assert_eq!(f.degrees(), vec![1, 1]);
        // over Q_2 T^2 + 4 is irreducible, ramified, slope 1
        let f = factor_over_qp(&poly(&[4, 0, 1]), 2, 8).unwrap();
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.factors[0].slope, rat(1, 1));
    }

    #[test]
    fn shioda_sextic_local_factors() {
        let f = factor_over_qp(&poly(&[6859, 0, 171, -64, 9, 0, 1]), 19, 12).unwrap();
        let total: usize = f.degrees().iter().sum();
        assert_eq!(total, 6);
        let zero: usize = f.factors.iter().filter(|g| g.slope.is_zero()).map(|g| g.degree).sum();
        assert_eq!(zero, 3);
        let prod = f.factors.iter().fold(IntPolynomial::one(), |acc, g| acc.mul(&g.approx));
        let m = BigInt::from(19).pow(f.precision);
        assert!(prod.sub(&poly(&[6859, 0, 171, -64, 9, 0, 1])).coeffs().iter().all(|c| c.mod_floor(&m).is_zero()));
    }

    #[test]
    fn local_shapes_match_reference_table() {
        // (coefficients, p, [(degree, v_p(constant term))])
        let table: &[(&[i64], u64, &[(usize, i64)])] = &[
            (&[4, -2, 0, -1, 1], 2, &[(1, 0), (2, 1), (1, 1)]),
            (&[4, -4, 3, -2, 1], 2, &[(2, 0), (2, 2)]),
            (&[8, -8, 6, -3, 1], 2, &[(1, 0), (3, 3)]),
            (&[64, -32, 16, -8, 4, -2, 1], 2, &[(3, 3), (3, 3)]),
            (&[8, 0, 0, 2, 0, 0, 1], 2, &[(3, 1), (3, 2)]),
            (&[9, -9, 5, -3, 1], 3, &[(1, 0), (1, 0), (1, 1), (1, 1)]),
            (&[4, 0, 0, 0, 1], 2, &[(2, 1), (2, 1)]),
            (&[3, 0, 1], 3, &[(2, 1)]),
        ];
        for (c, p, expect) in table {
            let f = factor_over_qp(&poly(c), *p, 10).unwrap();
            let got: Vec<(usize, BigRational)> = f.factors.iter().map(|g| (g.degree, g.slope.clone())).collect();
            let want: Vec<(usize, BigRational)> = expect.iter().map(|&(d, v)| (d, rat(v, d as i64))).collect();
            assert_eq!(got, want, "{:?} at {}", c, p);
        }
    }

    #[test]
    fn valuations_of_ordinary_curve() {
        let h = validate_weil(&poly(&[19, 8, 1]), 19, 1).unwrap();
        let cert = galois_group(&complex_roots(&h, 64).unwrap(), 19).unwrap();
        let v = root_valuations(&cert, 19, 1).unwrap();
        assert_eq!(v.orbit.len(), 2);
        let mut vals = v.values.clone();
        vals.sort();
        assert_eq!(vals, vec![rat(0, 1), rat(1, 1)]);
    }

    #[test]
    fn valuations_on_shioda_fourfold() {
        let ec = validate_weil(&poly(&[19, 8, 1]), 19, 1).unwrap();
        let three = validate_weil(&poly(&[6859, 0, 171, -64, 9, 0, 1]), 19, 1).unwrap();
        let cert = direct_sum(None, Some(&ec.product(&three).unwrap())).unwrap();
        let v = root_valuations(&cert, 19, 1).unwrap();
        let mut vals = v.values.clone();
        vals.sort();
        assert_eq!(vals, [vec![rat(0, 1); 4], vec![rat(1, 1); 4]].concat());
        // one prime per coset of the stabiliser
        assert!(cert.group.order().is_multiple_of(v.orbit.len()));
    }

    #[test]
    fn supersingular_valuations_are_half() {
        let h = validate_weil(&poly(&[2, 0, 1]), 2, 1).unwrap();
        let cert = galois_group(&complex_roots(&h, 64).unwrap(), 2).unwrap();
        let v = root_valuations(&cert, 2, 1).unwrap();
        assert_eq!(v.values, vec![rat(1, 2); 2]);
        assert_eq!(v.probes, 0);
    }
}
