//! Turán and Kővári–Sós–Turán edge bounds.

/// Non-negative fraction in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub num: u128,
    pub den: u128,
}

impl Ratio {
    pub fn new(num: u128, den: u128) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den);
        Ratio { num: num / g, den: den / g }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn floor(self) -> u128 {
        self.num / self.den
    }

    pub fn ceil(self) -> u128 {
        self.num.div_ceil(self.den)
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    if a == 0 {
        1
    } else {
        a
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TuranBound {
    /// `(1 - 1/r) n^2 / 2`: most edges of a `K_{r+1}`-free graph on `n` vertices.
    pub max_edges: Ratio,
    /// `C(n, 2) / (r + 1)`: the red-edge floor used when blue avoids `K_{r+1}`.
    pub red_lower_bound: Ratio,
}

pub fn turan_bound(r: usize, n: usize) -> TuranBound {
    let (r, n) = (r as u128, n as u128);
    let max_edges = if r == 0 { Ratio::new(0, 1) } else { Ratio::new((r - 1) * n * n, 2 * r) };
    let pairs = n * n.saturating_sub(1) / 2;
    TuranBound { max_edges, red_lower_bound: Ratio::new(pairs, r + 1) }
}

/// `(l-1)^{1/l} n^{2-1/l} + l - 1`: edges forcing a `K_{l,l}` in an `n`-vertex bipartite graph.
pub fn kst_bound(l: usize, n: usize) -> f64 {
    if l == 0 {
        return 0.0;
    }
    let lf = l as f64;
    let nf = n as f64;
    libm::pow(lf - 1.0, 1.0 / lf) * libm::pow(nf, 2.0 - 1.0 / lf) + lf - 1.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn turan_values() {
        assert_eq!(turan_bound(3, 6).max_edges, Ratio::new(12, 1));
        assert_eq!(turan_bound(1, 9).max_edges.num, 0);
        assert_eq!(turan_bound(2, 4).max_edges, Ratio::new(4, 1));
        assert_eq!(turan_bound(2, 5).max_edges, Ratio::new(25, 4));
        assert_eq!(turan_bound(2, 5).max_edges.floor(), 6);
        assert_eq!(turan_bound(3, 6).red_lower_bound, Ratio::new(15, 4));
    }

    #[test]
    fn kst_values() {
        assert!((kst_bound(2, 4) - 9.0).abs() < 1e-12);
        assert_eq!(kst_bound(1, 5), 0.0);
        assert!((kst_bound(2, 100) - 1001.0).abs() < 1e-9);
    }
}
