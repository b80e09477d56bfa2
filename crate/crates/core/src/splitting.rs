//! Galois groups of squarefree Weil polynomials as subgroups of `W_2d`.
//!
//! Roots are indexed block by block, one block per irreducible factor. A
//! complex factor of degree `2e` takes `e` symbols whose bars are the complex
//! conjugates. Real factors `T -+ sqrt(q)` and `T^2 - q` put both a symbol and
//! its bar on the same real root.
//!
//! The group is found by testing candidate subgroups `H` in ascending order:
//! `prod_{s in H} (T - theta_s)` is integral whenever `G <= H`, so a ball
//! coefficient that excludes every integer rules `H` out. The first surviving
//! `H` is certified exactly: interpolants `q_j = r_j / m'` with
//! `f_j(q_j) = 0 mod m` and `sum c_j q_j = T mod m`, then every root of `m` is
//! enclosed near `theta_s` and `q_j` evaluated there lands on the root of
//! symbol `s(j)`. That gives `G <= H`, and the ruled-out candidates give
//! equality.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::intpoly::modp::is_prime;
use crate::intpoly::weil::sqrt_q;
use crate::intpoly::{factor_over_z, is_irreducible, FpPoly, IntPolynomial, WeilPolynomial};
use crate::numeric::ball::{eval_int_poly, poly_from_roots};
use crate::numeric::roots::{approx_f64, certify, conjugate_pairing, upper_half};
use crate::numeric::{isolate_roots, Ball, IntegerTest, Mag, NumericError};
use crate::w2d::{all_elements, enumerate_subgroups_of, SignedPerm, SignedSubgroup};

const MAX_ACCURACY: u32 = 1 << 14;
const MAX_AMBIENT: usize = 128;
const FROBENIUS_PRIMES: usize = 16;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SplittingError {
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("group search not supported for this factorization shape (ambient order {0})")]
    UnsupportedShape(usize),
    #[error("unexpected real root pattern: {0}")]
    UnexpectedRealRootPattern(String),
    #[error("conjugate pairing of roots is ambiguous")]
    PairingAmbiguous,
    #[error("no theta weights separate the ambient orbit")]
    CollisionInOrbit,
    #[error("precision exhausted")]
    PrecisionExhausted,
    #[error("certificate failed: {0}")]
    CertificateFailed(String),
    #[error("representations over different fields")]
    IncompatibleContexts,
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockKind {
    /// Irreducible factor of degree `2e` without real roots.
    Complex(usize),
    /// `T - sqrt(q)` or `T + sqrt(q)`.
    RealLinear,
    /// `T^2 - q` with q not a square.
    RealQuadratic,
}

impl BlockKind {
    pub fn pairs(&self) -> usize {
        match self {
            BlockKind::Complex(e) => *e,
            BlockKind::RealLinear => 1,
            BlockKind::RealQuadratic => 2,
        }
    }

    pub fn is_real(&self) -> bool {
        !matches!(self, BlockKind::Complex(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub factor: IntPolynomial,
    pub kind: BlockKind,
    /// First unbarred symbol of the block; the block owns `offset..offset+pairs`.
    pub offset: usize,
}

impl Block {
    /// All encoded symbols of the block, barred ones included.
    pub fn symbols(&self, d: usize) -> Vec<usize> {
        let k = self.kind.pairs();
        (self.offset..self.offset + k).chain(d + self.offset..d + self.offset + k).collect()
    }
}

/// Certified root enclosures indexed by encoded symbol.
#[derive(Clone, Debug)]
pub struct ComplexRootSet {
    pub weil: WeilPolynomial,
    pub poly: IntPolynomial,
    pub q: BigInt,
    pub d: usize,
    pub blocks: Vec<Block>,
    /// Distinct roots of `poly`, pairwise disjoint.
    pub distinct: Vec<Ball>,
    /// Encoded symbol to index into `distinct`.
    pub symbol_root: Vec<usize>,
    pub accuracy: u32,
}

impl ComplexRootSet {
    pub fn root_of(&self, symbol: usize) -> &Ball {
        &self.distinct[self.symbol_root[symbol]]
    }

    pub fn is_totally_complex(&self) -> bool {
        self.blocks.iter().all(|b| !b.kind.is_real())
    }

    pub fn block_kinds(&self) -> Vec<BlockKind> {
        self.blocks.iter().map(|b| b.kind).collect()
    }

    /// Complex conjugation on symbols: bars swapped on complex blocks only.
    pub fn conjugation(&self) -> SignedPerm {
        conjugation_for(&self.block_kinds())
    }
}

fn conjugation_for(kinds: &[BlockKind]) -> SignedPerm {
    let d: usize = kinds.iter().map(|k| k.pairs()).sum();
    let mut signed: Vec<i8> = (1..=d as i8).collect();
    let mut offset = 0;
    for k in kinds {
        if !k.is_real() {
            for i in offset..offset + k.pairs() {
                signed[i] = -signed[i];
            }
        }
        offset += k.pairs();
    }
    SignedPerm::from_signed(&signed)
}

fn classify_factor(f: &IntPolynomial, q: &BigInt) -> Result<BlockKind, SplittingError> {
    match f.deg() {
        1 => {
            let root = -f.coeff(0);
            if &(&root * &root) == q {
                Ok(BlockKind::RealLinear)
            } else {
                Err(SplittingError::UnexpectedRealRootPattern(format!("rational root {} with q = {}", root, q)))
            }
        }
        2 if f.coeff(1).is_zero() && f.coeff(0) == -q.clone() && sqrt_q(q).is_none() => Ok(BlockKind::RealQuadratic),
        n if n % 2 == 0 => Ok(BlockKind::Complex(n / 2)),
        n => Err(SplittingError::UnexpectedRealRootPattern(format!("odd degree factor {}", n))),
    }
}

/// Isolate and index the roots of a squarefree Weil polynomial.
pub fn complex_roots(h: &WeilPolynomial, accuracy_bits: u32) -> Result<ComplexRootSet, SplittingError> {
    let q = h.q().clone();
    let factors = factor_over_z(h.poly());
    if factors.iter().any(|(_, e)| *e > 1) {
        return Err(SplittingError::NotSquarefree);
    }
    let mut parts: Vec<(IntPolynomial, BlockKind)> = Vec::new();
    for (f, _) in factors {
        let kind = classify_factor(&f, &q)?;
        parts.push((f, kind));
    }
    // complex blocks first, in factor order; real blocks last
    parts.sort_by(|a, b| (a.1.is_real(), a.0.deg(), &a.0).cmp(&(b.1.is_real(), b.0.deg(), &b.0)));
    let d: usize = parts.iter().map(|(_, k)| k.pairs()).sum();
    let mut accuracy = accuracy_bits;
    'retry: loop {
        let mut blocks = Vec::new();
        let mut distinct: Vec<Ball> = Vec::new();
        let mut symbol_root = vec![usize::MAX; 2 * d];
        let mut offset = 0;
        for (f, kind) in &parts {
            let iso = isolate_roots(f.coeffs(), accuracy)?;
            let base = distinct.len();
            match kind {
                BlockKind::Complex(e) => {
                    let pairing = conjugate_pairing(&iso.balls).ok_or(SplittingError::PairingAmbiguous)?;
                    let mut upper: Vec<usize> = (0..iso.balls.len()).filter(|&i| upper_half(&iso.balls[i])).collect();
                    if upper.len() != *e {
                        return Err(SplittingError::PairingAmbiguous);
                    }
                    upper.sort_by(|&a, &b| {
                        let (xa, ya) = approx_f64(&iso.balls[a]);
                        let (xb, yb) = approx_f64(&iso.balls[b]);
                        ya.atan2(xa).partial_cmp(&yb.atan2(xb)).expect("finite")
                    });
                    for (k, &i) in upper.iter().enumerate() {
                        symbol_root[offset + k] = base + i;
                        symbol_root[d + offset + k] = base + pairing[i];
                    }
                }
                BlockKind::RealLinear => {
                    symbol_root[offset] = base;
                    symbol_root[d + offset] = base;
                }
                BlockKind::RealQuadratic => {
                    let (pos, neg) = if iso.balls[0].re.is_positive() { (0, 1) } else { (1, 0) };
                    symbol_root[offset] = base + pos;
                    symbol_root[offset + 1] = base + neg;
                    symbol_root[d + offset] = base + pos;
                    symbol_root[d + offset + 1] = base + neg;
                }
            }
            distinct.extend(iso.balls);
            blocks.push(Block { factor: f.clone(), kind: *kind, offset });
            offset += kind.pairs();
        }
        let prec = distinct.iter().map(|b| b.prec).max().unwrap_or(64);
        let distinct: Vec<Ball> = distinct.iter().map(|b| b.with_prec(prec)).collect();
        for i in 0..distinct.len() {
            for k in 0..i {
                if !distinct[i].disjoint(&distinct[k]) {
                    accuracy *= 2;
                    if accuracy > MAX_ACCURACY {
                        return Err(SplittingError::PrecisionExhausted);
                    }
                    continue 'retry;
                }
            }
        }
        return Ok(ComplexRootSet { weil: h.clone(), poly: h.poly().clone(), q, d, blocks, distinct, symbol_root, accuracy });
    }
}

/// Ambient group for a block shape: the product of the block groups.
fn ambient_elements(kinds: &[BlockKind]) -> Result<Vec<SignedPerm>, SplittingError> {
    let d: usize = kinds.iter().map(|k| k.pairs()).sum();
    let mut acc = vec![SignedPerm::identity(d)];
    let mut offset = 0;
    for k in kinds {
        let local: Vec<SignedPerm> = match k {
            BlockKind::Complex(e) => all_elements(*e).iter().map(|g| g.embed(d, offset)).collect(),
            BlockKind::RealLinear => vec![SignedPerm::identity(d)],
            BlockKind::RealQuadratic => {
                let swap = SignedPerm::from_signed(&[2, 1]);
                vec![SignedPerm::identity(d), swap.embed(d, offset)]
            }
        };
        if acc.len() * local.len() > MAX_AMBIENT {
            return Err(SplittingError::UnsupportedShape(acc.len() * local.len()));
        }
        acc = acc.iter().flat_map(|a| local.iter().map(move |b| a.compose(b))).collect();
        offset += k.pairs();
    }
    acc.sort();
    Ok(acc)
}

/// Cycle type of `g` restricted to each block.
/// Cycle type of `g` on each block's symbols.
pub fn block_cycle_types(g: &SignedPerm, kinds: &[BlockKind]) -> Vec<Vec<usize>> {
    let d = g.d();
    let mut out = Vec::with_capacity(kinds.len());
    let mut offset = 0;
    for k in kinds {
        let syms: HashSet<usize> =
            (offset..offset + k.pairs()).chain(d + offset..d + offset + k.pairs()).collect();
        let mut t: Vec<usize> =
            g.cycles().into_iter().filter(|c| syms.contains(&c[0])).map(|c| c.len()).collect();
        t.sort_unstable();
        out.push(t);
        offset += k.pairs();
    }
    out
}

#[derive(Debug)]
pub struct Candidate {
    pub group: SignedSubgroup,
    cycle_types: HashSet<Vec<Vec<usize>>>,
}

type Lattice = Arc<Vec<Candidate>>;

/// Subgroups of the ambient group that contain conjugation and act
/// transitively on the roots of every block, ascending by order.
pub fn candidate_subgroups(kinds: &[BlockKind]) -> Result<Lattice, SplittingError> {
    static CACHE: OnceLock<Mutex<HashMap<Vec<BlockKind>, Lattice>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(l) = cache.lock().expect("lattice cache").get(kinds) {
        return Ok(l.clone());
    }
    let ambient = ambient_elements(kinds)?;
    let d: usize = kinds.iter().map(|k| k.pairs()).sum();
    let conj = conjugation_for(kinds);
    let mut out = Vec::new();
    for h in enumerate_subgroups_of(d, &ambient) {
        if !h.contains(&conj) {
            continue;
        }
        let mut offset = 0;
        let mut ok = true;
        for k in kinds {
            let reach: BTreeSet<usize> = h
                .elements()
                .iter()
                .map(|g| {
                    let x = g.apply(offset);
                    if k.is_real() && x >= d {
                        x - d
                    } else {
                        x
                    }
                })
                .collect();
            let roots = match k {
                BlockKind::Complex(e) => 2 * e,
                BlockKind::RealLinear => 1,
                BlockKind::RealQuadratic => 2,
            };
            ok &= reach.len() == roots;
            offset += k.pairs();
        }
        if ok {
            let cycle_types = h.elements().iter().map(|g| block_cycle_types(g, kinds)).collect();
            out.push(Candidate { group: h, cycle_types });
        }
    }
    out.sort_by(|a, b| a.group.cmp(&b.group));
    let lattice = Arc::new(out);
    cache.lock().expect("lattice cache").insert(kinds.to_vec(), lattice.clone());
    Ok(lattice)
}

/// Per-block cycle types of Frobenius at auxiliary primes not dividing
/// `p * disc`.
pub fn frobenius_types(roots: &ComplexRootSet, p: u64, count: usize) -> Vec<(u64, Vec<Vec<usize>>)> {
    let mut out = Vec::new();
    let mut ell = 2u64;
    while out.len() < count && ell < 10_000 {
        ell += 1;
        if !is_prime(ell) || ell == p {
            continue;
        }
        let full = FpPoly::from_int(&roots.poly, ell);
        if full.deg() != roots.poly.deg() || !full.is_squarefree() {
            continue;
        }
        let mut types = Vec::new();
        for b in &roots.blocks {
            let degs = FpPoly::from_int(&b.factor, ell).factor_degrees();
            let mut t: Vec<usize> = if b.kind.is_real() {
                degs.iter().flat_map(|&k| [k, k]).collect()
            } else {
                degs
            };
            t.sort_unstable();
            types.push(t);
        }
        out.push((ell, types));
    }
    out
}

#[derive(Clone, Debug)]
pub struct GaloisCertificate {
    pub d: usize,
    pub q: BigInt,
    pub blocks: Vec<Block>,
    pub theta_weights: Vec<BigInt>,
    pub min_poly: IntPolynomial,
    pub group: SignedSubgroup,
    pub conjugation: SignedPerm,
    /// `r_j` with `q_j = r_j / m'` modulo `m`.
    pub interpolant_numerators: Vec<IntPolynomial>,
    pub rejected_candidates: usize,
    pub frobenius: Vec<(u64, Vec<Vec<usize>>)>,
    pub irreducibility_checked: bool,
    pub roots: ComplexRootSet,
}

impl GaloisCertificate {
    pub fn min_poly_derivative(&self) -> IntPolynomial {
        self.min_poly.derivative()
    }

    pub fn is_transitive(&self) -> bool {
        self.group.is_transitive()
    }

    /// Short stable digest of the minimal polynomial and group.
    pub fn digest(&self) -> String {
        let mut text = self.min_poly.to_coeff_string();
        for g in self.group.elements() {
            text.push_str(&g.to_string());
        }
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in text.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        format!("{:016x}", h)
    }
}

fn theta_ball(roots: &ComplexRootSet, weights: &[BigInt], g: &SignedPerm) -> Ball {
    let prec = roots.distinct[0].prec;
    let mut acc = Ball::zero(prec);
    for (x, c) in weights.iter().enumerate() {
        acc = acc.add(&roots.root_of(g.apply(x)).mul_int(c));
    }
    acc
}

/// `c_x = t^x` for the least `t >= 2` separating all ambient values.
fn choose_weights(roots: &ComplexRootSet, ambient: &[SignedPerm]) -> Result<Vec<BigInt>, SplittingError> {
    let n = 2 * roots.d;
    let approx: Vec<(f64, f64)> = (0..n).map(|x| approx_f64(roots.root_of(x))).collect();
    for t in 2i64..64 {
        let w: Vec<f64> = (0..n).map(|x| (t as f64).powi(x as i32)).collect();
        let vals: Vec<(f64, f64)> = ambient
            .iter()
            .map(|g| {
                (0..n).fold((0.0, 0.0), |(a, b), x| {
                    let (re, im) = approx[g.apply(x)];
                    (a + w[x] * re, b + w[x] * im)
                })
            })
            .collect();
        let scale: f64 = w.iter().sum::<f64>() * roots.q.to_string().parse::<f64>().unwrap_or(1.0).sqrt();
        let tol = 1e-9 * scale.max(1.0);
        let separated = (0..vals.len())
            .all(|i| (0..i).all(|k| (vals[i].0 - vals[k].0).hypot(vals[i].1 - vals[k].1) > tol));
        if separated {
            return Ok((0..n).map(|x| BigInt::from(t).pow(x as u32)).collect());
        }
    }
    Err(SplittingError::CollisionInOrbit)
}

enum Test {
    Integral(IntPolynomial),
    Excluded,
    Undecided,
}

fn test_candidate(roots: &ComplexRootSet, weights: &[BigInt], h: &SignedSubgroup) -> Test {
    let prec = roots.distinct[0].prec;
    let thetas: Vec<Ball> = h.elements().iter().map(|g| theta_ball(roots, weights, g)).collect();
    let coeffs = poly_from_roots(&thetas, prec);
    let mut ints = Vec::with_capacity(coeffs.len());
    let mut undecided = false;
    for c in &coeffs {
        match c.integer_test() {
            IntegerTest::NotInteger => return Test::Excluded,
            IntegerTest::Integer(k) if c.rad < Mag::pow2(-32) => ints.push(k),
            _ => undecided = true,
        }
    }
    if undecided {
        Test::Undecided
    } else {
        Test::Integral(IntPolynomial::new(ints))
    }
}

/// `sum_k f_k r^k s^(N-k) mod m`.
fn homogeneous_eval_mod(f: &IntPolynomial, r: &IntPolynomial, s: &IntPolynomial, m: &IntPolynomial) -> IntPolynomial {
    let n = f.deg();
    let mut s_pows = vec![IntPolynomial::one()];
    for _ in 0..n {
        let next = s_pows.last().expect("nonempty").mul(s).div_rem_monic(m).1;
        s_pows.push(next);
    }
    let mut acc = IntPolynomial::constant(f.lc());
    for k in (0..n).rev() {
        acc = acc.mul(r).add(&s_pows[n - k].scale(&f.coeff(k))).div_rem_monic(m).1;
    }
    acc
}

enum CertOutcome {
    Done(Box<GaloisCertificate>),
    Escalate(String),
}

fn certify_candidate(
    roots: &ComplexRootSet,
    weights: &[BigInt],
    h: &SignedSubgroup,
    m: IntPolynomial,
) -> CertOutcome {
    let prec = roots.distinct[0].prec;
    let n = h.order();
    let d = roots.d;
    let thetas: Vec<Ball> = h.elements().iter().map(|g| theta_ball(roots, weights, g)).collect();
    let centers: Vec<Ball> = thetas.iter().map(|b| Ball { rad: Mag::ZERO, ..b.clone() }).collect();
    let enclosed = match certify(m.coeffs(), &centers, 8) {
        Some(b) => b,
        None => return CertOutcome::Escalate("roots of m not separated".into()),
    };
    // r_j = sum_s alpha_{s(j)} m(T) / (T - theta_s)
    let mut numer: Vec<Vec<Ball>> = vec![vec![Ball::zero(prec); n]; 2 * d];
    for (g, th) in h.elements().iter().zip(&thetas) {
        let mut quot = vec![Ball::zero(prec); n];
        quot[n - 1] = Ball::from_i64(1, prec);
        for k in (1..n).rev() {
            quot[k - 1] = quot[k].mul(th).add_int(&m.coeff(k));
        }
        for (x, r) in numer.iter_mut().enumerate() {
            let a = roots.root_of(g.apply(x));
            for (acc, c) in r.iter_mut().zip(&quot) {
                *acc = acc.add(&c.mul(a));
            }
        }
    }
    let mut numerators = Vec::with_capacity(2 * d);
    for r in &numer {
        let mut ints = Vec::with_capacity(n);
        for c in r {
            match c.integer_test() {
                IntegerTest::Integer(k) => ints.push(k),
                _ => return CertOutcome::Escalate("interpolant coefficient not pinned".into()),
            }
        }
        numerators.push(IntPolynomial::new(ints));
    }
    let dm = m.derivative();
    // exact identities
    for b in &roots.blocks {
        for x in b.symbols(d) {
            if !homogeneous_eval_mod(&b.factor, &numerators[x], &dm, &m).is_zero() {
                return CertOutcome::Escalate(format!("interpolant identity fails for symbol {}", x));
            }
        }
    }
    let mut lin = IntPolynomial::zero();
    for (c, r) in weights.iter().zip(&numerators) {
        lin = lin.add(&r.scale(c));
    }
    let t_dm = dm.mul(&IntPolynomial::monomial(BigInt::one(), 1));
    if !lin.sub(&t_dm).div_rem_monic(&m).1.is_zero() {
        return CertOutcome::Escalate("theta identity fails".into());
    }
    // each interpolant lands on the expected root at each root of m
    for (g, z) in h.elements().iter().zip(&enclosed) {
        let den = eval_int_poly(dm.coeffs(), z);
        for (x, r) in numerators.iter().enumerate() {
            let val = match eval_int_poly(r.coeffs(), z).div(&den) {
                Some(v) => v,
                None => return CertOutcome::Escalate("m' not separated from zero".into()),
            };
            let hits: Vec<usize> = (0..roots.distinct.len()).filter(|&i| val.overlaps(&roots.distinct[i])).collect();
            if hits != [roots.symbol_root[g.apply(x)]] {
                return CertOutcome::Escalate("interpolant value not matched to a unique root".into());
            }
        }
    }
    let irreducibility_checked = n <= 16;
    if irreducibility_checked && !is_irreducible(&m) {
        return CertOutcome::Escalate("minimal polynomial reducible".into());
    }
    CertOutcome::Done(Box::new(GaloisCertificate {
        d,
        q: roots.q.clone(),
        blocks: roots.blocks.clone(),
        theta_weights: weights.to_vec(),
        min_poly: m,
        group: h.clone(),
        conjugation: roots.conjugation(),
        interpolant_numerators: numerators,
        rejected_candidates: 0,
        frobenius: Vec::new(),
        irreducibility_checked,
        roots: roots.clone(),
    }))
}

fn accuracy_estimate(roots: &ComplexRootSet, weights: &[BigInt], largest: usize) -> u32 {
    let q = roots.q.bits() as f64 / 2.0 + 1.0;
    let w: f64 = weights.iter().map(|c| c.bits() as f64).fold(0.0, f64::max) + (weights.len() as f64).log2();
    ((largest as f64) * (q + w + 1.0) + 64.0) as u32
}

/// Galois group of the squarefree polynomial behind `roots`, with exact
/// certificate. `p` excludes the characteristic from the auxiliary primes.
pub fn galois_group(roots: &ComplexRootSet, p: u64) -> Result<GaloisCertificate, SplittingError> {
    let kinds = roots.block_kinds();
    let lattice = candidate_subgroups(&kinds)?;
    let frob = frobenius_types(roots, p, FROBENIUS_PRIMES);
    let viable: Vec<&Candidate> =
        lattice.iter().filter(|c| frob.iter().all(|(_, t)| c.cycle_types.contains(t))).collect();
    let ambient = ambient_elements(&kinds)?;
    let weights = choose_weights(roots, &ambient)?;
    let largest = viable.iter().map(|c| c.group.order()).max().unwrap_or(1);
    let mut accuracy = accuracy_estimate(roots, &weights, largest).max(roots.accuracy);
    let weil = roots.weil.clone();
    let mut current = if accuracy > roots.accuracy { complex_roots(&weil, accuracy)? } else { roots.clone() };
    let mut last_failure = String::from("no candidate subgroup");
    loop {
        let mut rejected = 0;
        let mut escalate = false;
        for cand in &viable {
            match test_candidate(&current, &weights, &cand.group) {
                Test::Excluded => rejected += 1,
                Test::Undecided => {
                    escalate = true;
                    last_failure = format!("integrality undecided for order {}", cand.group.order());
                    break;
                }
                Test::Integral(m) => match certify_candidate(&current, &weights, &cand.group, m) {
                    CertOutcome::Done(mut cert) => {
                        cert.rejected_candidates = rejected;
                        cert.frobenius = frob;
                        return Ok(*cert);
                    }
                    CertOutcome::Escalate(why) => {
                        escalate = true;
                        last_failure = why;
                        break;
                    }
                },
            }
        }
        if !escalate {
            return Err(SplittingError::CertificateFailed(last_failure));
        }
        accuracy *= 2;
        if accuracy > MAX_ACCURACY {
            return Err(SplittingError::PrecisionExhausted);
        }
        current = complex_roots(&weil, accuracy)?;
    }
}

/// Group of a polynomial whose roots are all real.
pub fn real_case_group(h: &WeilPolynomial) -> Result<GaloisCertificate, SplittingError> {
    let roots = complex_roots(h, 64)?;
    if !roots.blocks.iter().all(|b| b.kind.is_real()) {
        return Err(SplittingError::UnexpectedRealRootPattern("polynomial has non-real roots".into()));
    }
    galois_group(&roots, h.p())
}

/// Joint group of a totally real part and a totally complex part over the
/// same field, computed on the product.
pub fn direct_sum(real: Option<&WeilPolynomial>, complex: Option<&WeilPolynomial>) -> Result<GaloisCertificate, SplittingError> {
    let h = match (real, complex) {
        (Some(r), Some(c)) => r.product(c).map_err(|_| SplittingError::IncompatibleContexts)?,
        (Some(x), None) | (None, Some(x)) => x.clone(),
        (None, None) => return Err(SplittingError::UnexpectedRealRootPattern("empty sum".into())),
    };
    let roots = complex_roots(&h, 64)?;
    galois_group(&roots, h.p())
}
