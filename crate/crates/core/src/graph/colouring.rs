//! Red/blue edge colourings and exact monochromatic searches.

use super::Graph;
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Colour {
    Red,
    Blue,
}

impl Colour {
    pub fn other(self) -> Colour {
        match self {
            Colour::Red => Colour::Blue,
            Colour::Blue => Colour::Red,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Colour::Red => "red",
            Colour::Blue => "blue",
        }
    }

    pub fn parse(s: &str) -> Option<Colour> {
        match s {
            "red" => Some(Colour::Red),
            "blue" => Some(Colour::Blue),
            _ => None,
        }
    }
}

/// A colour for every edge of a host graph, indexed like [`Graph::edges`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoColouring {
    graph: Graph,
    colours: Vec<Colour>,
}

impl TwoColouring {
    pub fn new(graph: Graph, colours: Vec<Colour>) -> Result<Self> {
        if colours.len() != graph.m() {
            return Err(Error::InvalidInput(format!(
                "{} colours for {} edges",
                colours.len(),
                graph.m()
            )));
        }
        Ok(TwoColouring { graph, colours })
    }

    pub fn uniform(graph: Graph, colour: Colour) -> Self {
        let colours = vec![colour; graph.m()];
        TwoColouring { graph, colours }
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Colour>(graph: Graph, mut f: F) -> Self {
        let colours = graph.edges().map(|(u, v)| f(u, v)).collect();
        TwoColouring { graph, colours }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn colours(&self) -> &[Colour] {
        &self.colours
    }

    /// Colour of edge `uv`, or `None` if it is not a host edge.
    pub fn colour(&self, u: usize, v: usize) -> Option<Colour> {
        self.graph.edge_index(u, v).map(|i| self.colours[i])
    }

    pub fn is(&self, u: usize, v: usize, colour: Colour) -> bool {
        self.colour(u, v) == Some(colour)
    }

    pub fn set(&mut self, u: usize, v: usize, colour: Colour) -> bool {
        match self.graph.edge_index(u, v) {
            Some(i) => {
                self.colours[i] = colour;
                true
            }
            None => false,
        }
    }

    pub fn count(&self, colour: Colour) -> usize {
        self.colours.iter().filter(|&&c| c == colour).count()
    }

    /// Spanning subgraph of the edges with the given colour.
    pub fn subgraph(&self, colour: Colour) -> Graph {
        self.graph.filter_edges(|i, _| self.colours[i] == colour)
    }

    pub fn swapped(&self) -> TwoColouring {
        TwoColouring {
            graph: self.graph.clone(),
            colours: self.colours.iter().map(|c| c.other()).collect(),
        }
    }
}

/// Caps for the exact searches.
#[derive(Clone, Copy, Debug)]
pub struct SearchLimits {
    pub max_side: usize,
    pub max_nodes: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_side: 128, max_nodes: 20_000_000 }
    }
}

/// Finds `X ⊆ a`, `Y ⊆ b` of size `s` with every `X`-`Y` pair an edge of `colour`.
pub fn find_monochromatic_biclique(
    c: &TwoColouring,
    a: &[usize],
    b: &[usize],
    colour: Colour,
    s: usize,
    limits: SearchLimits,
) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    if a.len() > limits.max_side || b.len() > limits.max_side {
        return Err(Error::SearchCapped(format!(
            "biclique sides {} and {} exceed {}",
            a.len(),
            b.len(),
            limits.max_side
        )));
    }
    if s == 0 {
        return Ok(Some((Vec::new(), Vec::new())));
    }
    if a.len() < s || b.len() < s {
        return Ok(None);
    }
    let bset: Vec<usize> = b.to_vec();
    let nbr: Vec<BitSet> = a
        .iter()
        .map(|&x| {
            BitSet::from_iter(
                bset.len(),
                bset.iter().enumerate().filter(|(_, &y)| y != x && c.is(x, y, colour)).map(|(j, _)| j),
            )
        })
        .collect();
    let order: Vec<usize> = {
        let mut o: Vec<usize> = (0..a.len()).filter(|&i| nbr[i].count() >= s).collect();
        o.sort_by_key(|&i| core::cmp::Reverse(nbr[i].count()));
        o
    };
    let mut chosen = Vec::new();
    let mut nodes = 0u64;
    let full = BitSet::full(bset.len());
    let found = biclique_rec(&nbr, &order, 0, &full, s, &mut chosen, &mut nodes, limits.max_nodes)?;
    Ok(found.map(|common| {
        let mut x: Vec<usize> = chosen.iter().map(|&i| a[i]).collect();
        x.sort_unstable();
        let y: Vec<usize> = common.iter().take(s).map(|j| bset[j]).collect();
        (x, y)
    }))
}

#[allow(clippy::too_many_arguments)]
fn biclique_rec(
    nbr: &[BitSet],
    order: &[usize],
    start: usize,
    common: &BitSet,
    s: usize,
    chosen: &mut Vec<usize>,
    nodes: &mut u64,
    cap: u64,
) -> Result<Option<BitSet>> {
    if chosen.len() == s {
        return Ok(Some(common.clone()));
    }
    *nodes += 1;
    if *nodes > cap {
        return Err(Error::SearchCapped(format!("biclique search exceeded {cap} nodes")));
    }
    for pos in start..order.len() {
        if order.len() - pos < s - chosen.len() {
            break;
        }
        let i = order[pos];
        let next = common.intersection(&nbr[i]);
        if next.count() < s {
            continue;
        }
        chosen.push(i);
        if let Some(r) = biclique_rec(nbr, order, pos + 1, &next, s, chosen, nodes, cap)? {
            return Ok(Some(r));
        }
        chosen.pop();
    }
    Ok(None)
}

/// Finds `size` vertices of `set` pairwise joined by edges of `colour`.
pub fn find_monochromatic_clique(
    c: &TwoColouring,
    set: &[usize],
    colour: Colour,
    size: usize,
    limits: SearchLimits,
) -> Result<Option<Vec<usize>>> {
    if set.len() > limits.max_side {
        return Err(Error::SearchCapped(format!(
            "clique search over {} vertices exceeds {}",
            set.len(),
            limits.max_side
        )));
    }
    if size == 0 {
        return Ok(Some(Vec::new()));
    }
    if set.len() < size {
        return Ok(None);
    }
    let k = set.len();
    let adj: Vec<BitSet> = (0..k)
        .map(|i| BitSet::from_iter(k, (0..k).filter(|&j| j != i && c.is(set[i], set[j], colour))))
        .collect();
    let mut chosen = Vec::new();
    let mut nodes = 0u64;
    let cand = BitSet::from_iter(k, (0..k).filter(|&i| adj[i].count() + 1 >= size));
    if clique_rec(&adj, cand, size, &mut chosen, &mut nodes, limits.max_nodes)? {
        let mut out: Vec<usize> = chosen.iter().map(|&i| set[i]).collect();
        out.sort_unstable();
        Ok(Some(out))
    } else {
        Ok(None)
    }
}

fn clique_rec(
    adj: &[BitSet],
    mut cand: BitSet,
    size: usize,
    chosen: &mut Vec<usize>,
    nodes: &mut u64,
    cap: u64,
) -> Result<bool> {
    if chosen.len() == size {
        return Ok(true);
    }
    *nodes += 1;
    if *nodes > cap {
        return Err(Error::SearchCapped(format!("clique search exceeded {cap} nodes")));
    }
    while let Some(v) = cand.first() {
        if chosen.len() + cand.count() < size {
            return Ok(false);
        }
        cand.remove(v);
        let next = cand.intersection(&adj[v]);
        chosen.push(v);
        if chosen.len() + next.count() >= size && clique_rec(adj, next, size, chosen, nodes, cap)? {
            return Ok(true);
        }
        chosen.pop();
    }
    Ok(false)
}

/// Colouring of the complete graph on the parts, with the recorded bicliques.
#[derive(Clone, Debug)]
pub struct AuxiliaryColouring {
    /// Complete graph on `parts.len()` vertices.
    pub colouring: TwoColouring,
    /// Colour whose bicliques decide the auxiliary edges.
    pub witness_colour: Colour,
    /// For every auxiliary edge `(i, j)` with `i < j` in the witness colour,
    /// the biclique sides inside part `i` and part `j`.
    pub witnesses: BTreeMap<(usize, usize), (Vec<usize>, Vec<usize>)>,
}

impl AuxiliaryColouring {
    pub fn witness(&self, i: usize, j: usize) -> Option<(&[usize], &[usize])> {
        if i < j {
            self.witnesses.get(&(i, j)).map(|(x, y)| (x.as_slice(), y.as_slice()))
        } else {
            self.witnesses.get(&(j, i)).map(|(x, y)| (y.as_slice(), x.as_slice()))
        }
    }
}

/// Auxiliary colouring of `K_parts`: pair `ij` gets `colour` iff a
/// `colour`-coloured `K_{s,s}` joins parts `i` and `j`, and the other colour otherwise.
pub fn auxiliary_colouring(
    c: &TwoColouring,
    parts: &[Vec<usize>],
    s: usize,
    colour: Colour,
    limits: SearchLimits,
) -> Result<AuxiliaryColouring> {
    let m = parts.len();
    let complete = Graph::complete(m);
    let mut witnesses = BTreeMap::new();
    let mut colours = Vec::with_capacity(complete.m());
    for (i, j) in complete.edges() {
        match find_monochromatic_biclique(c, &parts[i], &parts[j], colour, s, limits)? {
            Some(w) => {
                witnesses.insert((i, j), w);
                colours.push(colour);
            }
            None => colours.push(colour.other()),
        }
    }
    Ok(AuxiliaryColouring {
        colouring: TwoColouring::new(complete, colours)?,
        witness_colour: colour,
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pentagon_pentagram() -> TwoColouring {
        TwoColouring::from_fn(Graph::complete(5), |u, v| {
            let d = (v + 5 - u) % 5;
            if d == 1 || d == 4 {
                Colour::Red
            } else {
                Colour::Blue
            }
        })
    }

    #[test]
    fn pentagon_has_no_monochromatic_triangle() {
        let c = pentagon_pentagram();
        let all: Vec<usize> = (0..5).collect();
        for colour in [Colour::Red, Colour::Blue] {
            let r = find_monochromatic_clique(&c, &all, colour, 3, SearchLimits::default()).unwrap();
            assert!(r.is_none());
            let r = find_monochromatic_clique(&c, &all, colour, 2, SearchLimits::default()).unwrap();
            assert!(r.is_some());
        }
    }

    #[test]
    fn biclique_in_complete_bipartite() {
        let g = Graph::complete_bipartite(3, 3);
        let c = TwoColouring::uniform(g, Colour::Blue);
        let r = find_monochromatic_biclique(&c, &[0, 1, 2], &[3, 4, 5], Colour::Blue, 3, SearchLimits::default())
            .unwrap()
            .unwrap();
        assert_eq!(r, (vec![0, 1, 2], vec![3, 4, 5]));
        let none = find_monochromatic_biclique(&c, &[0, 1, 2], &[3, 4, 5], Colour::Red, 1, SearchLimits::default())
            .unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn search_cap_is_reported() {
        let c = TwoColouring::uniform(Graph::complete(10), Colour::Red);
        let set: Vec<usize> = (0..10).collect();
        let limits = SearchLimits { max_side: 5, max_nodes: 10 };
        assert!(matches!(
            find_monochromatic_clique(&c, &set, Colour::Red, 3, limits),
            Err(Error::SearchCapped(_))
        ));
    }

    #[test]
    fn auxiliary_records_witnesses() {
        let g = Graph::complete(6);
        let c = TwoColouring::from_fn(g, |u, v| if (u < 3) == (v < 3) { Colour::Red } else { Colour::Blue });
        let aux = auxiliary_colouring(&c, &[vec![0, 1, 2], vec![3, 4, 5]], 2, Colour::Blue, SearchLimits::default())
            .unwrap();
        assert_eq!(aux.colouring.colour(0, 1), Some(Colour::Blue));
        let (x, y) = aux.witness(1, 0).unwrap();
        assert!(x.iter().all(|&v| v >= 3) && y.iter().all(|&v| v < 3));
    }
}
