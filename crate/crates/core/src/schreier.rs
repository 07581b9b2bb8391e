//! Schreier graphs of the action on levels Xⁿ and their ball growth.
//!
//! Finite levels only approximate the orbital graphs of boundary points:
//! far from the basepoint the level-n graph wraps around. `orbital_growth`
//! therefore compares the balls at level n with those at a deeper level and
//! fits the growth degree inside the radius where both agree.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::rc::Rc;

use crate::action::{Alphabet, SelfSimilarAction, Word};
use crate::automaton::power_string;
use crate::error::{Error, Result};
use crate::group::GroupElement;

pub const DEFAULT_VERTEX_CAP: usize = 1 << 20;
pub const DEFAULT_ORBIT_CAP: usize = 5_000_000;

/// Undirected simple graph on Xⁿ; vertex index reads words with the first
/// letter most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelGraph {
    pub level: usize,
    pub degree: usize,
    pub adjacency: Vec<Vec<u32>>,
    pub basepoint: usize,
}

impl LevelGraph {
    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn word_of(&self, v: usize) -> Word {
        let mut letters = vec![0; self.level];
        let mut rest = v;
        for slot in letters.iter_mut().rev() {
            *slot = rest % self.degree;
            rest /= self.degree;
        }
        Word(letters)
    }

    pub fn to_dot(&self, alphabet: Alphabet) -> String {
        let mut out = String::from("graph schreier {\n");
        for v in 0..self.vertex_count() {
            let label = alphabet.format(&self.word_of(v));
            let label = if label.is_empty() {
                "ε".to_string()
            } else {
                label
            };
            let _ = writeln!(out, "  v{v} [label=\"{label}\"];");
        }
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            for &v in nbrs.iter().filter(|&&v| v as usize > u) {
                let _ = writeln!(out, "  v{u} -- v{v};");
            }
        }
        out.push_str("}\n");
        out
    }
}

pub fn word_index(w: &Word, degree: usize) -> usize {
    w.letters().iter().fold(0, |acc, &x| acc * degree + x)
}

/// Permutations of Xⁿ induced by group elements, memoized per (state, level).
struct LevelPermutations<'a> {
    action: &'a SelfSimilarAction,
    memo: HashMap<(GroupElement, usize), Rc<Vec<u32>>>,
}

impl<'a> LevelPermutations<'a> {
    fn new(action: &'a SelfSimilarAction) -> Self {
        LevelPermutations {
            action,
            memo: HashMap::new(),
        }
    }

    fn get(&mut self, g: &GroupElement, n: usize) -> Result<Rc<Vec<u32>>> {
        if n == 0 {
            return Ok(Rc::new(vec![0]));
        }
        if let Some(p) = self.memo.get(&(g.clone(), n)) {
            return Ok(p.clone());
        }
        let d = self.action.degree();
        let block = d.pow(n as u32 - 1);
        let mut out = vec![0u32; block * d];
        for x in 0..d {
            let s = self.action.step(g, x)?;
            let sub = self.get(&s.state, n - 1)?;
            for (r, &t) in sub.iter().enumerate() {
                out[x * block + r] = (s.output * block) as u32 + t;
            }
        }
        let out = Rc::new(out);
        self.memo.insert((g.clone(), n), out.clone());
        Ok(out)
    }
}

/// The permutation of Xⁿ induced by g.
pub fn level_permutation(a: &SelfSimilarAction, g: &GroupElement, n: usize) -> Result<Vec<u32>> {
    LevelPermutations::new(a)
        .get(g, n)
        .map(|p| p.as_ref().clone())
}

pub fn level_graph(
    a: &SelfSimilarAction,
    generators: &[GroupElement],
    n: usize,
    basepoint: &Word,
) -> Result<LevelGraph> {
    level_graph_with_cap(a, generators, n, basepoint, DEFAULT_VERTEX_CAP)
}

pub fn level_graph_with_cap(
    a: &SelfSimilarAction,
    generators: &[GroupElement],
    n: usize,
    basepoint: &Word,
    cap: usize,
) -> Result<LevelGraph> {
    let d = a.degree();
    let size = (d as u128)
        .checked_pow(n as u32)
        .filter(|&s| s <= cap as u128)
        .ok_or_else(|| Error::ResourceCap(format!("{d}^{n} vertices exceed the cap of {cap}")))?
        as usize;
    if basepoint.len() != n {
        return Err(Error::InvalidLetter(format!(
            "basepoint must have length {n}"
        )));
    }
    let mut perms = LevelPermutations::new(a);
    let mut adjacency = vec![Vec::new(); size];
    for g in generators {
        let p = perms.get(g, n)?;
        for (v, &u) in p.iter().enumerate() {
            let u = u as usize;
            if u != v {
                adjacency[v].push(u as u32);
                adjacency[u].push(v as u32);
            }
        }
    }
    for nbrs in adjacency.iter_mut() {
        nbrs.sort_unstable();
        nbrs.dedup();
    }
    Ok(LevelGraph {
        level: n,
        degree: d,
        adjacency,
        basepoint: word_index(basepoint, d),
    })
}

/// |B(r)| for r = 0 up to the eccentricity of the basepoint.
pub fn ball_sizes(g: &LevelGraph) -> Vec<usize> {
    let mut dist = vec![u32::MAX; g.vertex_count()];
    dist[g.basepoint] = 0;
    let mut frontier = vec![g.basepoint];
    let mut sizes = vec![1];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &v in &frontier {
            for &u in &g.adjacency[v] {
                if dist[u as usize] == u32::MAX {
                    dist[u as usize] = dist[v] + 1;
                    next.push(u as usize);
                }
            }
        }
        if !next.is_empty() {
            sizes.push(sizes.last().unwrap() + next.len());
        }
        frontier = next;
    }
    sizes
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthEstimate {
    pub ball_sizes: Vec<usize>,
    pub fitted_degree: f64,
    /// Radius the window was derived from.
    pub radius: usize,
    pub fit_window: (usize, usize),
    /// Root mean square residual of the log-log fit.
    pub residual: f64,
}

impl GrowthEstimate {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,ball_size\n");
        for (r, s) in self.ball_sizes.iter().enumerate() {
            let _ = writeln!(out, "{r},{s}");
        }
        out
    }
}

/// Least-squares slope of log|B(r)| against log r for r in [lo, hi].
pub fn fit_degree(sizes: &[usize], lo: usize, hi: usize) -> (f64, f64) {
    let pts: Vec<(f64, f64)> = (lo.max(1)..=hi.min(sizes.len() - 1))
        .map(|r| ((r as f64).ln(), (sizes[r] as f64).ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let rss: f64 = pts
        .iter()
        .map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2))
        .sum();
    (slope, (rss / n).sqrt())
}

fn estimate(sizes: Vec<usize>, radius: usize, what: &str) -> Result<GrowthEstimate> {
    if radius < 8 {
        return Err(Error::InsufficientRange(format!(
            "{what} radius {radius} is below 8"
        )));
    }
    let window = (radius.div_ceil(4), 3 * radius / 4);
    let (fitted_degree, residual) = fit_degree(&sizes, window.0, window.1);
    Ok(GrowthEstimate {
        ball_sizes: sizes,
        fitted_degree,
        radius,
        fit_window: window,
        residual,
    })
}

/// Degree fitted over [r_max/4, 3r_max/4] where r_max is the eccentricity of
/// the basepoint in its component.
pub fn ball_growth(g: &LevelGraph) -> Result<GrowthEstimate> {
    let sizes = ball_sizes(g);
    let r = sizes.len() - 1;
    estimate(sizes, r, "eccentricity")
}

/// Interned transducer over group elements; lets words of any length be
/// moved without recomputing sections.
struct Transducer<'a> {
    action: &'a SelfSimilarAction,
    ids: HashMap<GroupElement, u32>,
    elements: Vec<GroupElement>,
    table: Vec<Vec<Option<(u8, u32)>>>,
}

impl<'a> Transducer<'a> {
    fn new(action: &'a SelfSimilarAction) -> Self {
        Transducer {
            action,
            ids: HashMap::new(),
            elements: Vec::new(),
            table: Vec::new(),
        }
    }

    fn intern(&mut self, g: &GroupElement) -> u32 {
        if let Some(&i) = self.ids.get(g) {
            return i;
        }
        let i = self.elements.len() as u32;
        self.ids.insert(g.clone(), i);
        self.elements.push(g.clone());
        self.table.push(vec![None; self.action.degree()]);
        i
    }

    fn step(&mut self, s: u32, x: u8) -> Result<(u8, u32)> {
        if let Some(t) = self.table[s as usize][x as usize] {
            return Ok(t);
        }
        let st = self.action.step(&self.elements[s as usize], x as usize)?;
        let next = self.intern(&st.state);
        let t = (st.output as u8, next);
        self.table[s as usize][x as usize] = Some(t);
        Ok(t)
    }

    fn act(&mut self, g: u32, w: &[u8]) -> Result<Vec<u8>> {
        let mut s = g;
        let mut out = Vec::with_capacity(w.len());
        for &x in w {
            let (y, t) = self.step(s, x)?;
            out.push(y);
            s = t;
        }
        Ok(out)
    }
}

/// Breadth-first layers of the orbit of a word under S ∪ S⁻¹.
struct OrbitBfs<'a> {
    tr: Transducer<'a>,
    moves: Vec<u32>,
    seen: HashSet<Vec<u8>>,
    frontier: Vec<Vec<u8>>,
    size: usize,
    cap: usize,
}

impl<'a> OrbitBfs<'a> {
    fn new(a: &'a SelfSimilarAction, generators: &[GroupElement], w: &Word, cap: usize) -> Self {
        let mut tr = Transducer::new(a);
        let moves = generators
            .iter()
            .flat_map(|g| [g.clone(), a.model().inverse(g)])
            .map(|g| tr.intern(&g))
            .collect();
        let start: Vec<u8> = w.letters().iter().map(|&x| x as u8).collect();
        let seen = HashSet::from([start.clone()]);
        OrbitBfs {
            tr,
            moves,
            seen,
            frontier: vec![start],
            size: 1,
            cap,
        }
    }

    /// Advances one layer; returns the new ball size, or None when the
    /// orbit is exhausted.
    fn advance(&mut self) -> Result<Option<usize>> {
        let mut next = Vec::new();
        for v in std::mem::take(&mut self.frontier) {
            for i in 0..self.moves.len() {
                let u = self.tr.act(self.moves[i], &v)?;
                if !self.seen.contains(&u) {
                    self.seen.insert(u.clone());
                    next.push(u);
                }
            }
        }
        if next.is_empty() {
            return Ok(None);
        }
        self.size += next.len();
        if self.size > self.cap {
            return Err(Error::ResourceCap(format!(
                "orbit ball exceeds {} vertices",
                self.cap
            )));
        }
        self.frontier = next;
        Ok(Some(self.size))
    }
}

/// Ball sizes around `w` in the orbital graph on X^|w|, up to `max_radius`.
pub fn orbital_ball_sizes(
    a: &SelfSimilarAction,
    generators: &[GroupElement],
    w: &Word,
    max_radius: usize,
) -> Result<Vec<usize>> {
    let mut bfs = OrbitBfs::new(a, generators, w, DEFAULT_ORBIT_CAP);
    let mut sizes = vec![1];
    while sizes.len() <= max_radius {
        match bfs.advance()? {
            Some(s) => sizes.push(s),
            None => break,
        }
    }
    Ok(sizes)
}

/// Largest R such that the balls of radius ≤ R around the length-`level`
/// prefix of `basepoint` coincide in size with those around the full
/// `basepoint`, together with those sizes.
pub fn stable_radius(
    a: &SelfSimilarAction,
    generators: &[GroupElement],
    basepoint: &Word,
    level: usize,
) -> Result<(usize, Vec<usize>)> {
    if basepoint.len() <= level {
        return Err(Error::InvalidLetter(format!(
            "basepoint must be longer than level {level}"
        )));
    }
    let short = Word(basepoint.letters()[..level].to_vec());
    let mut low = OrbitBfs::new(a, generators, &short, DEFAULT_ORBIT_CAP);
    let mut high = OrbitBfs::new(a, generators, basepoint, DEFAULT_ORBIT_CAP);
    let mut sizes = vec![1];
    loop {
        let l = low.advance()?;
        let h = high.advance()?;
        match (l, h) {
            (Some(x), Some(y)) if x == y => sizes.push(x),
            _ => return Ok((sizes.len() - 1, sizes)),
        }
    }
}

/// Growth degree of the orbital graph around `basepoint`, fitted over
/// [R/4, 3R/4] where R is the stable radius between level `level` and the
/// full length of `basepoint`.
pub fn orbital_growth(
    a: &SelfSimilarAction,
    generators: &[GroupElement],
    basepoint: &Word,
    level: usize,
) -> Result<GrowthEstimate> {
    let (r, sizes) = stable_radius(a, generators, basepoint, level)?;
    estimate(sizes, r, "stable")
}

/// Distinct elements given by words of length ≤ `radius` over S ∪ S⁻¹ that
/// fix `w`, each under its first (shortest) word. The identity comes first.
pub fn stabilizer_probe(
    a: &SelfSimilarAction,
    generators: &[(String, GroupElement)],
    w: &Word,
    radius: usize,
) -> Result<Vec<(String, GroupElement)>> {
    let model = a.model();
    let letters: Vec<(usize, i64, GroupElement)> = generators
        .iter()
        .enumerate()
        .map(|(i, (_, g))| (i, 1, g.clone()))
        .chain(
            generators
                .iter()
                .enumerate()
                .map(|(i, (_, g))| (i, -1, model.inverse(g))),
        )
        .collect();
    let mut seen: HashSet<GroupElement> = HashSet::from([model.identity()]);
    let mut out = vec![("e".to_string(), model.identity())];
    let mut layer: Vec<(GroupElement, Vec<(usize, i64)>)> = vec![(model.identity(), Vec::new())];
    for _ in 0..radius {
        let mut next = Vec::new();
        for (g, word) in &layer {
            for (gi, sign, h) in &letters {
                if word
                    .last()
                    .is_some_and(|&(li, e)| li == *gi && e.signum() == -sign)
                {
                    continue;
                }
                let prod = model.mul_unchecked(g, h);
                if !seen.insert(prod.clone()) {
                    continue;
                }
                let mut w2 = word.clone();
                match w2.last_mut() {
                    Some((li, e)) if li == gi => *e += sign,
                    _ => w2.push((*gi, *sign)),
                }
                if &a.act(&prod, w)? == w {
                    let name = w2
                        .iter()
                        .map(|&(i, e)| power_string(&generators[i].0, e))
                        .collect();
                    out.push((name, prod.clone()));
                }
                next.push((prod, w2));
            }
        }
        layer = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(c: &[i64]) -> GroupElement {
        GroupElement::from_i64s(c)
    }

    fn ab() -> Vec<GroupElement> {
        vec![e(&[1, 0, 0]), e(&[0, 1, 0])]
    }

    #[test]
    fn level_one_graph() {
        let a = SelfSimilarAction::heisenberg_d();
        let g = level_graph(&a, &ab(), 1, &Word(vec![0])).unwrap();
        assert_eq!(g.vertex_count(), 4);
        // a swaps 2 and 4, b swaps 1–2 and 3–4
        assert_eq!(g.adjacency, vec![vec![1], vec![0, 3], vec![3], vec![1, 2]]);
        let dot = g.to_dot(a.alphabet());
        assert_eq!(dot.matches("--").count(), 3);
        assert!(dot.contains("v0 [label=\"1\"]"));
    }

    #[test]
    fn level_zero_graph() {
        let a = SelfSimilarAction::heisenberg_d();
        let g = level_graph(&a, &ab(), 0, &Word::default()).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
        assert!(g.to_dot(a.alphabet()).contains("v0 [label=\"ε\"]"));
    }

    #[test]
    fn odometer_cycle() {
        let o = SelfSimilarAction::odometer();
        let g = level_graph(&o, &[e(&[1])], 2, &Word(vec![0, 0])).unwrap();
        assert!(g.adjacency.iter().all(|n| n.len() == 2));
        assert_eq!(ball_sizes(&g), vec![1, 3, 4]);
        let big = level_graph(&o, &[e(&[1])], 10, &Word(vec![0; 10])).unwrap();
        let est = ball_growth(&big).unwrap();
        assert!(
            (est.fitted_degree - 1.0).abs() < 0.2,
            "{}",
            est.fitted_degree
        );
        let small = level_graph(&o, &[e(&[1])], 3, &Word(vec![0; 3])).unwrap();
        assert!(matches!(
            ball_growth(&small),
            Err(Error::InsufficientRange(_))
        ));
    }

    #[test]
    fn cap_is_enforced() {
        let a = SelfSimilarAction::heisenberg_d();
        let r = level_graph_with_cap(&a, &ab(), 6, &Word(vec![0; 6]), 1000);
        assert!(matches!(r, Err(Error::ResourceCap(_))));
    }

    #[test]
    fn lazy_balls_match_level_graph() {
        let a = SelfSimilarAction::heisenberg_d();
        let w = Word(vec![0, 2, 1, 3, 0, 1]);
        let g = level_graph(&a, &ab(), 6, &w).unwrap();
        let full = ball_sizes(&g);
        let lazy = orbital_ball_sizes(&a, &ab(), &w, 1000).unwrap();
        assert_eq!(full, lazy);
    }

    #[test]
    fn stabilizers() {
        let a = SelfSimilarAction::heisenberg_d();
        let gens = vec![
            ("a".to_string(), e(&[1, 0, 0])),
            ("b".to_string(), e(&[0, 1, 0])),
        ];
        let ones = stabilizer_probe(&a, &gens, &Word(vec![0; 9]), 3).unwrap();
        assert_eq!(ones[0].0, "e");
        assert!(ones.iter().any(|(n, _)| n == "a"));
        let twos = stabilizer_probe(&a, &gens, &Word(vec![1; 9]), 3).unwrap();
        assert!(twos.iter().any(|(_, g)| g == &e(&[1, 0, 1])));
    }

    #[test]
    fn csv_rows() {
        let est = GrowthEstimate {
            ball_sizes: vec![1, 3, 6, 10],
            fitted_degree: 2.0,
            radius: 3,
            fit_window: (1, 2),
            residual: 0.0,
        };
        assert_eq!(est.to_csv(), "r,ball_size\n0,1\n1,3\n2,6\n3,10\n");
    }
}
