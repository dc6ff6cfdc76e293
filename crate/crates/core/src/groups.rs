//! Rotation groups acting on sites, their orbits on index pairs, and the
//! most general real symmetric Hamiltonian they leave invariant.
//!
//! Site numbering (all groups act on `0..sites`):
//!
//! * `Cyclic(n)`: sites on a ring; generator `i -> i + 1 (mod n)`.
//! * `Tetra`: the four vertices; generators are the 3-cycles `(0 1 2)` and
//!   `(1 2 3)`, rotations about the axes through vertices 3 and 0.
//! * `Octa`: `0 = +x, 1 = +y, 2 = -x, 3 = -y, 4 = +z, 5 = -z`; generators are
//!   the quarter turn about `z` and the third turn `x -> y -> z` about `(1,1,1)`.
//!   Antipodal pairs are `{0,2}`, `{1,3}`, `{4,5}`.
//! * `Cube`: `0..4` is the bottom face `(0,0,0) (1,0,0) (1,1,0) (0,1,0)` and
//!   `4..8` the same points lifted to `z = 1`; generators are the quarter
//!   turn about `z` and the third turn `(x,y,z) -> (z,x,y)` about the body
//!   diagonal through vertices 0 and 6.
//!
//! Any other consistent numbering gives the same spectra, since relabeling
//! sites is an orthogonal similarity.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

/// A permutation of sites, `perm[i]` being the image of site `i`.
pub type Permutation = Vec<usize>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "n")]
pub enum GroupName {
    Cyclic(usize),
    Tetra,
    Octa,
    Cube,
}

impl GroupName {
    pub fn validate(&self) -> Result<()> {
        match self {
            GroupName::Cyclic(n) if *n < 2 => {
                Err(Error::invalid(format!("cyclic group needs n >= 2, got {n}")))
            }
            _ => Ok(()),
        }
    }

    pub fn sites(&self) -> usize {
        match self {
            GroupName::Cyclic(n) => *n,
            GroupName::Tetra => 4,
            GroupName::Octa => 6,
            GroupName::Cube => 8,
        }
    }

    pub fn is_polyhedral(&self) -> bool {
        !matches!(self, GroupName::Cyclic(_))
    }

    /// Parses the command-line spelling: `cyclic` needs `n`, the
    /// polyhedral groups ignore it.
    pub fn from_parts(kind: &str, n: Option<usize>) -> Result<Self> {
        let g = match kind.to_ascii_lowercase().as_str() {
            "cyclic" => GroupName::Cyclic(
                n.ok_or_else(|| Error::invalid("cyclic group requires --n"))?,
            ),
            "tetra" => GroupName::Tetra,
            "octa" => GroupName::Octa,
            "cube" => GroupName::Cube,
            other => return Err(Error::invalid(format!("unknown group {other:?}"))),
        };
        g.validate()?;
        Ok(g)
    }
}

impl fmt::Display for GroupName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupName::Cyclic(n) => write!(f, "cyclic({n})"),
            GroupName::Tetra => f.write_str("tetra"),
            GroupName::Octa => f.write_str("octa"),
            GroupName::Cube => f.write_str("cube"),
        }
    }
}

impl FromStr for GroupName {
    type Err = Error;

    /// Accepts `tetra`, `octa`, `cube`, `cyclic(n)` or `cyclicN`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        if let Some(rest) = lower.strip_prefix("cyclic") {
            let digits = rest.trim_start_matches('(').trim_end_matches(')');
            let n = digits
                .parse()
                .map_err(|_| Error::invalid(format!("bad cyclic order in {s:?}")))?;
            return GroupName::from_parts("cyclic", Some(n));
        }
        GroupName::from_parts(&lower, None)
    }
}

/// A finite rotation group acting on sites, with its full element list.
#[derive(Debug, Clone, PartialEq)]
pub struct PointGroup {
    pub name: GroupName,
    pub sites: usize,
    pub generators: Vec<Permutation>,
    pub elements: Vec<Permutation>,
}

/// `(a ∘ b)(i) = a(b(i))`.
pub fn compose(a: &[usize], b: &[usize]) -> Permutation {
    b.iter().map(|&i| a[i]).collect()
}

pub fn invert(p: &[usize]) -> Permutation {
    let mut inv = vec![0; p.len()];
    for (i, &pi) in p.iter().enumerate() {
        inv[pi] = i;
    }
    inv
}

/// All products of the generators, found by breadth-first search from the
/// identity.
pub fn closure(sites: usize, generators: &[Permutation]) -> Vec<Permutation> {
    let identity: Permutation = (0..sites).collect();
    let mut seen: HashSet<Permutation> = HashSet::from([identity.clone()]);
    let mut elements = vec![identity.clone()];
    let mut queue = VecDeque::from([identity]);
    while let Some(p) = queue.pop_front() {
        for g in generators {
            let q = compose(g, &p);
            if seen.insert(q.clone()) {
                elements.push(q.clone());
                queue.push_back(q);
            }
        }
    }
    elements
}

fn generators_for(name: GroupName) -> Vec<Permutation> {
    match name {
        GroupName::Cyclic(n) => vec![(0..n).map(|i| (i + 1) % n).collect()],
        GroupName::Tetra => vec![vec![1, 2, 0, 3], vec![0, 2, 3, 1]],
        GroupName::Octa => vec![vec![1, 2, 3, 0, 4, 5], vec![1, 4, 3, 5, 0, 2]],
        GroupName::Cube => vec![vec![1, 2, 3, 0, 5, 6, 7, 4], vec![0, 3, 7, 4, 1, 2, 6, 5]],
    }
}

pub fn build_group(name: GroupName) -> Result<PointGroup> {
    name.validate()?;
    let sites = name.sites();
    let generators = generators_for(name);
    let elements = closure(sites, &generators);
    Ok(PointGroup {
        name,
        sites,
        generators,
        elements,
    })
}

impl PointGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Orbit of a site under the full group.
    pub fn site_orbit(&self, site: usize) -> Vec<usize> {
        let mut orbit: Vec<usize> = self.elements.iter().map(|g| g[site]).collect();
        orbit.sort_unstable();
        orbit.dedup();
        orbit
    }

    /// Elements fixing `site`.
    pub fn stabilizer(&self, site: usize) -> Vec<&Permutation> {
        self.elements.iter().filter(|g| g[site] == site).collect()
    }
}

/// Orbits of unordered site pairs (including `(i, i)`) under a group.
///
/// Label 0 is the diagonal orbit; the rest are ordered by the
/// lexicographically smallest pair they contain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairOrbitStructure {
    pub labels: Vec<String>,
    /// `assignment[i][j]` is the label index of pair `(i, j)`; symmetric.
    pub assignment: Vec<Vec<usize>>,
    pub diagonal_label: usize,
    /// Smallest pair of each orbit.
    pub representatives: Vec<(usize, usize)>,
    /// Number of unordered pairs (`i <= j`) in each orbit.
    pub orbit_sizes: Vec<usize>,
}

impl PairOrbitStructure {
    pub fn num_labels(&self) -> usize {
        self.labels.len()
    }

    pub fn sites(&self) -> usize {
        self.assignment.len()
    }

    pub fn label_index(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == name)
    }
}

fn label_name(group: GroupName, index: usize) -> String {
    match group {
        GroupName::Cyclic(_) => format!("F{index}"),
        _ if index < 26 => char::from(b'A' + index as u8).to_string(),
        _ => format!("L{index}"),
    }
}

pub fn pair_orbits(g: &PointGroup) -> PairOrbitStructure {
    let n = g.sites;
    let mut assignment = vec![vec![usize::MAX; n]; n];
    let mut representatives = Vec::new();
    let mut orbit_sizes = Vec::new();
    for i in 0..n {
        for j in i..n {
            if assignment[i][j] != usize::MAX {
                continue;
            }
            let label = representatives.len();
            representatives.push((i, j));
            let mut size = 0;
            for e in &g.elements {
                let (a, b) = (e[i].min(e[j]), e[i].max(e[j]));
                if assignment[a][b] == usize::MAX {
                    assignment[a][b] = label;
                    assignment[b][a] = label;
                    size += 1;
                }
            }
            orbit_sizes.push(size);
        }
    }
    let labels = (0..representatives.len())
        .map(|l| label_name(g.name, l))
        .collect();
    PairOrbitStructure {
        labels,
        diagonal_label: assignment[0][0],
        assignment,
        representatives,
        orbit_sizes,
    }
}

/// Block matrix whose `(i, j)` block of size `m` is `blocks[assignment[i][j]]`.
pub fn build_invariant(orbits: &PairOrbitStructure, blocks: &[SymMatrix]) -> Result<SymMatrix> {
    if blocks.len() != orbits.num_labels() {
        return Err(Error::invalid(format!(
            "expected one block per orbit label ({}), got {}",
            orbits.num_labels(),
            blocks.len()
        )));
    }
    let m = blocks[0].dim();
    if let Some(b) = blocks.iter().find(|b| b.dim() != m) {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: b.dim(),
        });
    }
    let n = orbits.sites();
    SymMatrix::from_upper_fn(n * m, |r, c| {
        let (i, a) = (r / m, r % m);
        let (j, b) = (c / m, c % m);
        blocks[orbits.assignment[i][j]].get(a, b)
    })
}

/// Reads back one block per orbit label from an invariant matrix, using each
/// orbit's representative pair.
pub fn extract_label_blocks(
    h: &SymMatrix,
    orbits: &PairOrbitStructure,
    m: usize,
) -> Result<Vec<SymMatrix>> {
    let n = orbits.sites();
    if m == 0 || h.dim() != n * m {
        return Err(Error::DimensionMismatch {
            expected: n * m,
            got: h.dim(),
        });
    }
    orbits
        .representatives
        .iter()
        .map(|&(i, j)| {
            // Off-diagonal site blocks need not be symmetric in a non-invariant
            // input; average with the transpose.
            let rows: Vec<Vec<f64>> = (0..m)
                .map(|a| (0..m).map(|b| h.get(i * m + a, j * m + b)).collect())
                .collect();
            SymMatrix::from_rows_symmetrized(&rows).map(|(blk, _)| blk)
        })
        .collect()
}

/// Largest `|H - P H Pᵀ|` entry over the given permutations lifted to
/// `perm ⊗ I_m`.
pub fn invariance_violation(h: &SymMatrix, perms: &[Permutation], m: usize) -> Result<f64> {
    let sites = perms.first().map(|p| p.len()).unwrap_or(0);
    if m == 0 || h.dim() != sites * m {
        return Err(Error::DimensionMismatch {
            expected: sites * m,
            got: h.dim(),
        });
    }
    let dim = h.dim();
    let mut worst = 0.0_f64;
    for p in perms {
        for r in 0..dim {
            let pr = p[r / m] * m + r % m;
            for c in 0..dim {
                let pc = p[c / m] * m + c % m;
                worst = worst.max((h.get(pr, pc) - h.get(r, c)).abs());
            }
        }
    }
    Ok(worst)
}

/// Invariance violation measured over the group's generators.
pub fn check_invariance(h: &SymMatrix, g: &PointGroup, m: usize) -> Result<f64> {
    invariance_violation(h, &g.generators, m)
}

/// JSON-friendly description of a group and its pair orbits.
#[derive(Debug, Clone, Serialize)]
pub struct GroupSummary {
    pub name: String,
    pub sites: usize,
    pub order: usize,
    pub generators: Vec<Permutation>,
    pub orbits: PairOrbitStructure,
}

impl GroupSummary {
    pub fn new(g: &PointGroup) -> Self {
        Self {
            name: g.name.to_string(),
            sites: g.sites,
            order: g.order(),
            generators: g.generators.clone(),
            orbits: pair_orbits(g),
        }
    }
}
