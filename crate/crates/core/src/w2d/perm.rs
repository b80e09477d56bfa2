//! Signed permutations of `X_2d = {1..d, 1b..db}`; symbol `i` is stored as
//! `i - 1` and its bar as `d + i - 1`.

use std::fmt;

use super::W2dError;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SignedPerm {
    images: Vec<u8>,
}

impl SignedPerm {
    pub fn identity(d: usize) -> SignedPerm {
        SignedPerm { images: (0..2 * d as u8).collect() }
    }

    /// Complex conjugation `(1 1b)...(d db)`.
    pub fn iota(d: usize) -> SignedPerm {
        let mut images: Vec<u8> = (d as u8..2 * d as u8).collect();
        images.extend(0..d as u8);
        SignedPerm { images }
    }

    pub fn from_images(images: Vec<u8>) -> Result<SignedPerm, W2dError> {
        let n = images.len();
        if n % 2 == 1 {
            return Err(W2dError::NotSignedPermutation);
        }
        let d = n / 2;
        let mut seen = vec![false; n];
        for &x in &images {
            if x as usize >= n || seen[x as usize] {
                return Err(W2dError::NotSignedPermutation);
            }
            seen[x as usize] = true;
        }
        for i in 0..d {
            let a = images[i] as usize;
            let b = images[i + d] as usize;
            if (a + d) % n != b {
                return Err(W2dError::NotSignedPermutation);
            }
        }
        Ok(SignedPerm { images })
    }

    /// From a signed image vector: `signed[i] = +-(j+1)` sends `i+1` to `j+1`
    /// or to its bar.
    pub fn from_signed(signed: &[i8]) -> SignedPerm {
        let d = signed.len();
        let mut images = vec![0u8; 2 * d];
        for (i, &s) in signed.iter().enumerate() {
            let j = s.unsigned_abs() as usize - 1;
            let (a, b) = if s > 0 { (j, j + d) } else { (j + d, j) };
            images[i] = a as u8;
            images[i + d] = b as u8;
        }
        SignedPerm { images }
    }

    pub fn d(&self) -> usize {
        self.images.len() / 2
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    /// `(self * other)(x) = self(other(x))`
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        SignedPerm { images: other.images.iter().map(|&x| self.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> SignedPerm {
        let mut images = vec![0u8; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u8;
        }
        SignedPerm { images }
    }

    /// `g^-1 self g`
    pub fn conjugate_by(&self, g: &SignedPerm) -> SignedPerm {
        g.inverse().compose(self).compose(g)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn order(&self) -> usize {
        self.cycle_type().into_iter().fold(1, num_integer::lcm)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cyc.push(x);
                x = self.apply(x);
            }
            out.push(cyc);
        }
        out
    }

    /// Sorted cycle lengths on all 2d symbols.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        t.sort_unstable();
        t
    }

    /// Embed into a larger `W_2D` acting on symbols `offset..offset+d` (and bars).
    pub fn embed(&self, big_d: usize, offset: usize) -> SignedPerm {
        let d = self.d();
        let mut images: Vec<u8> = (0..2 * big_d as u8).collect();
        let lift = |x: usize| if x < d { x + offset } else { x - d + offset + big_d };
        for x in 0..2 * d {
            images[lift(x)] = lift(self.apply(x)) as u8;
        }
        SignedPerm { images }
    }

    /// Rename symbols: returns `pi self pi^-1` where `pi` sends old symbol
    /// `x` to `relabel[x]`.
    pub fn relabel(&self, relabel: &[usize]) -> SignedPerm {
        let mut images = vec![0u8; self.images.len()];
        for x in 0..self.images.len() {
            images[relabel[x]] = relabel[self.apply(x)] as u8;
        }
        SignedPerm { images }
    }

    pub fn symbol_name(x: usize, d: usize) -> String {
        if x < d {
            format!("{}", x + 1)
        } else {
            format!("b{}", x - d + 1)
        }
    }

    /// Parse cycle notation such as `(1 b2 3 b1 2 b3)(4 b4)`; `()` or `id` is
    /// the identity.
    pub fn parse_cycles(d: usize, s: &str) -> Result<SignedPerm, W2dError> {
        let mut images: Vec<u8> = (0..2 * d as u8).collect();
        let t = s.trim();
        if t == "id" || t == "()" || t.is_empty() {
            return Ok(SignedPerm { images });
        }
        let parse_sym = |tok: &str| -> Result<usize, W2dError> {
            let (bar, num) = match tok.strip_prefix('b') {
                Some(rest) => (true, rest),
                None => (false, tok),
            };
            let k: usize = num.parse().map_err(|_| W2dError::BadCycleNotation(s.to_string()))?;
            if k == 0 || k > d {
                return Err(W2dError::BadCycleNotation(s.to_string()));
            }
            Ok(if bar { k - 1 + d } else { k - 1 })
        };
        for chunk in t.split('(').skip(1) {
            let body = chunk.split(')').next().unwrap_or("");
            let syms: Vec<usize> = body.split_whitespace().map(parse_sym).collect::<Result<_, _>>()?;
            for (i, &x) in syms.iter().enumerate() {
                images[x] = syms[(i + 1) % syms.len()] as u8;
            }
        }
        SignedPerm::from_images(images).map_err(|_| W2dError::BadCycleNotation(s.to_string()))
    }
}

impl fmt::Display for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.d();
        let cycles: Vec<Vec<usize>> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "id");
        }
        for c in cycles {
            let names: Vec<String> = c.iter().map(|&x| SignedPerm::symbol_name(x, d)).collect();
            write!(f, "({})", names.join(" "))?;
        }
        Ok(())
    }
}

/// All `2^d d!` elements of `W_2d`, sorted.
pub fn all_elements(d: usize) -> Vec<SignedPerm> {
    let mut perms: Vec<Vec<usize>> = vec![vec![]];
    for k in 0..d {
        let mut next = Vec::new();
        for p in &perms {
            for pos in 0..=k {
                let mut q = p.clone();
                q.insert(pos, k);
                next.push(q);
            }
        }
        perms = next;
    }
    let mut out = Vec::with_capacity(perms.len() << d);
    for p in perms {
        for signs in 0..(1u32 << d) {
            let signed: Vec<i8> = p
                .iter()
                .enumerate()
                .map(|(i, &j)| {
                    let v = j as i8 + 1;
                    if signs >> i & 1 == 1 {
                        -v
                    } else {
                        v
                    }
                })
                .collect();
            out.push(SignedPerm::from_signed(&signed));
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        let g = SignedPerm::parse_cycles(4, "(1 b2 b4 b1 2 4)(3 b3)").unwrap();
        assert_eq!(g.to_string(), "(1 b2 b4 b1 2 4)(3 b3)");
        assert_eq!(g.order(), 6);
        assert!(SignedPerm::parse_cycles(2, "(1 2)").is_err());
        assert_eq!(SignedPerm::parse_cycles(2, "(1 2)(b1 b2)").unwrap().order(), 2);
    }

    #[test]
    fn group_sizes_and_iota() {
        assert_eq!(all_elements(1).len(), 2);
        assert_eq!(all_elements(2).len(), 8);
        assert_eq!(all_elements(3).len(), 48);
        let iota = SignedPerm::iota(3);
        assert_eq!(iota.to_string(), "(1 b1)(2 b2)(3 b3)");
        for g in all_elements(3) {
            assert_eq!(g.compose(&iota), iota.compose(&g));
            assert!(g.compose(&g.inverse()).is_identity());
        }
    }

    #[test]
    fn embedding_and_relabel() {
        let g = SignedPerm::parse_cycles(1, "(1 b1)").unwrap();
        assert_eq!(g.embed(4, 3).to_string(), "(4 b4)");
        let h = SignedPerm::parse_cycles(2, "(1 2 b1 b2)").unwrap();
        // swap symbols 1 and 2 (and their bars)
        let r = h.relabel(&[1, 0, 3, 2]);
        assert_eq!(r.to_string(), "(1 b2 b1 2)");
    }
}
