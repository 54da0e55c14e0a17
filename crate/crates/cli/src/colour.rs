//! Adversarial two-colourings of a layered host.

use rand::Rng;
use sizeramsey_core::host::LayeredHost;
use sizeramsey_core::rng::{stream, Phase};
use sizeramsey_core::{Colour, TwoColouring};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Strategy {
    AllRed,
    AllBlue,
    /// Each edge red with probability `bias`.
    UniformRandom { bias: f64 },
    /// One random colour per design block, shared by every host edge inside it.
    BlockMonochrome,
    /// Base edges red, layer-only edges blue.
    LayerFlip,
    /// Blue while the blue graph stays a forest with components of at most `cap` vertices.
    GreedyAntiTree { cap: Option<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown colouring strategy `{0}`")]
pub struct UnknownStrategy(pub String);

impl FromStr for Strategy {
    type Err = UnknownStrategy;

    /// Accepts `name` or `name:arg`, e.g. `uniform-random:0.3`, `greedy-anti-tree:40`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || UnknownStrategy(s.to_string());
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let strategy = match (name, arg) {
            ("all-red", None) => Strategy::AllRed,
            ("all-blue", None) => Strategy::AllBlue,
            ("uniform-random", None) => Strategy::UniformRandom { bias: 0.5 },
            ("uniform-random", Some(a)) => {
                let bias: f64 = a.parse().map_err(|_| bad())?;
                if !(0.0..=1.0).contains(&bias) {
                    return Err(bad());
                }
                Strategy::UniformRandom { bias }
            }
            ("block-monochrome", None) => Strategy::BlockMonochrome,
            ("layer-flip", None) => Strategy::LayerFlip,
            ("greedy-anti-tree", None) => Strategy::GreedyAntiTree { cap: None },
            ("greedy-anti-tree", Some(a)) => Strategy::GreedyAntiTree { cap: Some(a.parse().map_err(|_| bad())?) },
            _ => return Err(bad()),
        };
        Ok(strategy)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::AllRed => write!(f, "all-red"),
            Strategy::AllBlue => write!(f, "all-blue"),
            Strategy::UniformRandom { bias } => write!(f, "uniform-random:{bias}"),
            Strategy::BlockMonochrome => write!(f, "block-monochrome"),
            Strategy::LayerFlip => write!(f, "layer-flip"),
            Strategy::GreedyAntiTree { cap: None } => write!(f, "greedy-anti-tree"),
            Strategy::GreedyAntiTree { cap: Some(c) } => write!(f, "greedy-anti-tree:{c}"),
        }
    }
}

fn coin<R: Rng>(rng: &mut R, red: f64) -> Colour {
    if rng.gen::<f64>() < red {
        Colour::Red
    } else {
        Colour::Blue
    }
}

pub fn colour_host(h: &LayeredHost, strategy: &Strategy, seed: u64) -> TwoColouring {
    let g = h.host.clone();
    let mut rng = stream(seed, Phase::Colouring, 0);
    match *strategy {
        Strategy::AllRed => TwoColouring::uniform(g, Colour::Red),
        Strategy::AllBlue => TwoColouring::uniform(g, Colour::Blue),
        Strategy::UniformRandom { bias } => TwoColouring::from_fn(g, |_, _| coin(&mut rng, bias)),
        Strategy::BlockMonochrome => {
            let block: Vec<Colour> = (0..h.design.blocks.len()).map(|_| coin(&mut rng, 0.5)).collect();
            let index = h.design.pair_index();
            TwoColouring::from_fn(g, |u, v| index.block_of(u, v).map_or(Colour::Red, |b| block[b]))
        }
        Strategy::LayerFlip => {
            let base = &h.base.graph;
            TwoColouring::from_fn(g, |u, v| if base.has_edge(u, v) { Colour::Red } else { Colour::Blue })
        }
        Strategy::GreedyAntiTree { cap } => {
            let n = g.n();
            let cap = cap.unwrap_or(n).max(1);
            let mut order: Vec<usize> = (0..g.m()).collect();
            for i in (1..order.len()).rev() {
                order.swap(i, rng.gen_range(0..=i));
            }
            let mut dsu = Dsu::new(n);
            let mut colours = vec![Colour::Red; g.m()];
            for e in order {
                let (u, v) = g.edge(e);
                let (a, b) = (dsu.find(u), dsu.find(v));
                if a != b && dsu.size[a] + dsu.size[b] <= cap {
                    dsu.union(a, b);
                    colours[e] = Colour::Blue;
                }
            }
            TwoColouring::new(g, colours).expect("one colour per edge")
        }
    }
}

struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect(), size: vec![1; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (big, small) = if self.size[a] >= self.size[b] { (a, b) } else { (b, a) };
        self.parent[small] = big;
        self.size[big] += self.size[small];
    }
}
