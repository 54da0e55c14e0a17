//! Linear designs `S(2, C, n)`: every pair of points lies in exactly one block.
//!
//! Triple systems use the Bose construction for `n ≡ 3 (mod 6)` and the
//! Skolem construction for `n ≡ 1 (mod 6)`. Affine planes of prime order `q`
//! use the lines `y = ax + b` and `x = c` over `Z_q`, one parallel class per
//! slope. Blocks are stored sorted, in lexicographic order.

use crate::error::{Error, Result};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDesign {
    pub n: usize,
    pub block_size: usize,
    pub blocks: Vec<Vec<usize>>,
    /// Partition of block indices into classes that each partition the points.
    pub parallel_classes: Option<Vec<Vec<usize>>>,
}

impl BlockDesign {
    /// Sorts points within blocks, blocks lexicographically, and remaps classes.
    pub fn canonical(n: usize, block_size: usize, mut blocks: Vec<Vec<usize>>, classes: Option<Vec<Vec<usize>>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        let mut order: Vec<usize> = (0..blocks.len()).collect();
        order.sort_by(|&a, &b| blocks[a].cmp(&blocks[b]));
        let mut new_index = vec![0; blocks.len()];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let sorted = order.iter().map(|&i| blocks[i].clone()).collect();
        let parallel_classes = classes.map(|cs| {
            cs.into_iter()
                .map(|c| {
                    let mut c: Vec<usize> = c.into_iter().map(|i| new_index[i]).collect();
                    c.sort_unstable();
                    c
                })
                .collect()
        });
        BlockDesign { n, block_size, blocks: sorted, parallel_classes }
    }

    /// The Fano plane, the unique `S(2, 3, 7)`.
    pub fn fano() -> Self {
        steiner_triple(7).expect("7 is admissible")
    }

    /// `S(2, 2, n)`: every pair is a block.
    pub fn all_pairs(n: usize) -> Self {
        let mut blocks = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                blocks.push(vec![u, v]);
            }
        }
        BlockDesign { n, block_size: 2, blocks, parallel_classes: None }
    }

    /// Picks a construction for `n` points and block size `c`.
    pub fn for_size(n: usize, c: usize) -> Result<Self> {
        match c {
            2 => Ok(Self::all_pairs(n)),
            3 => steiner_triple(n),
            q if q * q == n && is_prime(q) => affine_plane(q),
            _ => Err(Error::UnsupportedDesign { n, c }),
        }
    }

    pub fn edges_per_block(&self) -> usize {
        self.block_size * (self.block_size - 1) / 2
    }

    /// Table mapping each point pair to its block.
    pub fn pair_index(&self) -> PairIndex {
        let mut table = vec![u32::MAX; self.n * self.n.saturating_sub(1) / 2];
        for (i, b) in self.blocks.iter().enumerate() {
            for x in 0..b.len() {
                for y in x + 1..b.len() {
                    table[tri(self.n, b[x], b[y])] = i as u32;
                }
            }
        }
        PairIndex { n: self.n, table }
    }
}

/// Block lookup for point pairs.
#[derive(Clone, Debug)]
pub struct PairIndex {
    n: usize,
    table: Vec<u32>,
}

impl PairIndex {
    pub fn block_of(&self, u: usize, v: usize) -> Option<usize> {
        if u == v || u >= self.n || v >= self.n {
            return None;
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        let i = self.table[tri(self.n, a, b)];
        (i != u32::MAX).then_some(i as usize)
    }
}

#[inline]
fn tri(n: usize, a: usize, b: usize) -> usize {
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

pub fn is_prime(q: usize) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

pub fn steiner_triple(n: usize) -> Result<BlockDesign> {
    if n < 7 || !(n % 6 == 1 || n % 6 == 3) {
        return Err(Error::NoTripleSystem(n));
    }
    let blocks = if n % 6 == 3 { bose(n) } else { skolem(n) };
    Ok(BlockDesign::canonical(n, 3, blocks, None))
}

fn bose(n: usize) -> Vec<Vec<usize>> {
    let m = n / 3;
    let half = m.div_ceil(2);
    let op = |x: usize, y: usize| (half * (x + y)) % m;
    let pt = |x: usize, i: usize| x + (i % 3) * m;
    let mut blocks = Vec::new();
    for x in 0..m {
        blocks.push(vec![pt(x, 0), pt(x, 1), pt(x, 2)]);
    }
    for x in 0..m {
        for y in x + 1..m {
            for i in 0..3 {
                blocks.push(vec![pt(x, i), pt(y, i), pt(op(x, y), i + 1)]);
            }
        }
    }
    blocks
}

fn skolem(n: usize) -> Vec<Vec<usize>> {
    let m = (n - 1) / 3;
    let k = m / 2;
    let op = |x: usize, y: usize| {
        let s = (x + y) % m;
        if s % 2 == 0 {
            s / 2
        } else {
            (s - 1) / 2 + k
        }
    };
    let pt = |x: usize, i: usize| x + (i % 3) * m;
    let inf = n - 1;
    let mut blocks = Vec::new();
    for x in 0..k {
        blocks.push(vec![pt(x, 0), pt(x, 1), pt(x, 2)]);
        for i in 0..3 {
            blocks.push(vec![inf, pt(x + k, i), pt(x, i + 1)]);
        }
    }
    for x in 0..m {
        for y in x + 1..m {
            for i in 0..3 {
                blocks.push(vec![pt(x, i), pt(y, i), pt(op(x, y), i + 1)]);
            }
        }
    }
    blocks
}

/// `AG(2, q)` on points `x*q + y`, with its `q + 1` parallel classes.
pub fn affine_plane(q: usize) -> Result<BlockDesign> {
    if !is_prime(q) {
        return Err(Error::PrimeRequired(q));
    }
    let mut blocks = Vec::new();
    let mut classes = Vec::new();
    for a in 0..q {
        let mut class = Vec::new();
        for b in 0..q {
            class.push(blocks.len());
            blocks.push((0..q).map(|x| x * q + (a * x + b) % q).collect());
        }
        classes.push(class);
    }
    let mut class = Vec::new();
    for c in 0..q {
        class.push(blocks.len());
        blocks.push((0..q).map(|y| c * q + y).collect());
    }
    classes.push(class);
    Ok(BlockDesign::canonical(q * q, q, blocks, Some(classes)))
}

/// Everything wrong with a purported linear design.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DesignReport {
    /// Pairs whose coverage count is not one, with the count.
    pub pair_violations: Vec<((usize, usize), usize)>,
    /// Blocks with the wrong size, repeated or out-of-range points.
    pub block_violations: Vec<(usize, String)>,
    /// Parallel classes that overlap or miss points.
    pub class_violations: Vec<(usize, String)>,
}

impl DesignReport {
    pub fn is_valid(&self) -> bool {
        self.pair_violations.is_empty() && self.block_violations.is_empty() && self.class_violations.is_empty()
    }

    pub fn pairs_covered_more_than_once(&self) -> usize {
        self.pair_violations.iter().filter(|(_, c)| *c > 1).count()
    }

    pub fn violation_count(&self) -> usize {
        self.pair_violations.len() + self.block_violations.len() + self.class_violations.len()
    }
}

pub fn validate_design(d: &BlockDesign) -> DesignReport {
    let n = d.n;
    let mut report = DesignReport::default();
    let mut count = vec![0usize; n * n.saturating_sub(1) / 2];
    for (i, b) in d.blocks.iter().enumerate() {
        if b.len() != d.block_size {
            report.block_violations.push((i, format!("size {} instead of {}", b.len(), d.block_size)));
        }
        if let Some(&p) = b.iter().find(|&&p| p >= n) {
            report.block_violations.push((i, format!("point {p} out of range")));
            continue;
        }
        let mut s = b.clone();
        s.sort_unstable();
        s.dedup();
        if s.len() != b.len() {
            report.block_violations.push((i, "repeated point".into()));
        }
        for x in 0..s.len() {
            for y in x + 1..s.len() {
                count[tri(n, s[x], s[y])] += 1;
            }
        }
    }
    for u in 0..n {
        for v in u + 1..n {
            let c = count[tri(n, u, v)];
            if c != 1 {
                report.pair_violations.push(((u, v), c));
            }
        }
    }
    if let Some(classes) = &d.parallel_classes {
        for (ci, class) in classes.iter().enumerate() {
            let mut hit = vec![0usize; n];
            for &bi in class {
                match d.blocks.get(bi) {
                    Some(b) => b.iter().filter(|&&p| p < n).for_each(|&p| hit[p] += 1),
                    None => report.class_violations.push((ci, format!("block index {bi} out of range"))),
                }
            }
            if hit.iter().any(|&h| h > 1) {
                report.class_violations.push((ci, "blocks overlap".into()));
            }
            if hit.iter().any(|&h| h == 0) {
                report.class_violations.push((ci, "points not covered".into()));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triple_systems() {
        assert_eq!(steiner_triple(7).unwrap().blocks.len(), 7);
        assert_eq!(steiner_triple(9).unwrap().blocks.len(), 12);
        assert_eq!(steiner_triple(8), Err(Error::NoTripleSystem(8)));
        assert!(steiner_triple(3).is_err());
        for n in (7..200).filter(|n| n % 6 == 1 || n % 6 == 3) {
            let d = steiner_triple(n).unwrap();
            assert!(validate_design(&d).is_valid(), "n = {n}");
            assert_eq!(d.blocks.len(), n * (n - 1) / 6);
        }
    }

    #[test]
    fn affine_planes() {
        let d = affine_plane(3).unwrap();
        assert_eq!((d.blocks.len(), d.n), (12, 9));
        assert_eq!(d.parallel_classes.as_ref().unwrap().len(), 4);
        let d = affine_plane(5).unwrap();
        assert_eq!(d.blocks.len(), 30);
        assert_eq!(d.parallel_classes.as_ref().unwrap().len(), 6);
        assert_eq!(affine_plane(4), Err(Error::PrimeRequired(4)));
        assert!(validate_design(&affine_plane(7).unwrap()).is_valid());
    }

    #[test]
    fn duplicated_block_detected() {
        let mut d = BlockDesign::fano();
        assert!(validate_design(&d).is_valid());
        d.blocks.push(d.blocks[0].clone());
        assert_eq!(validate_design(&d).pairs_covered_more_than_once(), 3);
    }

    #[test]
    fn blocks_are_sorted() {
        let d = steiner_triple(13).unwrap();
        assert!(d.blocks.windows(2).all(|w| w[0] < w[1]));
        let idx = d.pair_index();
        for (i, b) in d.blocks.iter().enumerate() {
            assert_eq!(idx.block_of(b[2], b[0]), Some(i));
        }
    }

    #[test]
    fn broken_parallel_class() {
        let mut d = affine_plane(3).unwrap();
        d.parallel_classes.as_mut().unwrap()[0].pop();
        let r = validate_design(&d);
        assert_eq!(r.class_violations.len(), 1);
    }
}
