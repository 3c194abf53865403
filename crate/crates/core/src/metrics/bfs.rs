use crate::error::{Error, Result};
use crate::group::{ElementCode, Family, GeneratingSet, GroupSpec, Letter};

/// Limits applied before any BFS allocation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BfsConfig {
    /// Upper bound on the bytes a single BFS may allocate.
    pub memory_cap: u64,
    /// A-priori diameter bound used to pick the initial cell width.
    /// Exceeding it only costs a re-run at the next width.
    pub diameter_hint: u64,
}

impl Default for BfsConfig {
    fn default() -> Self {
        BfsConfig { memory_cap: 3 << 30, diameter_hint: 254 }
    }
}

/// A distance cell. `UNREACHED` is the sentinel.
pub trait Cell: Copy + Eq + Send + Sync + 'static {
    const UNREACHED: Self;
    const BYTES: u8;
    fn from_level(level: u32) -> Option<Self>;
    fn level(self) -> u32;
}

macro_rules! cell {
    ($t:ty, $bytes:expr) => {
        impl Cell for $t {
            const UNREACHED: Self = <$t>::MAX;
            const BYTES: u8 = $bytes;

            #[inline]
            fn from_level(level: u32) -> Option<Self> {
                <$t>::try_from(level).ok().filter(|&v| v != <$t>::MAX)
            }

            #[inline]
            fn level(self) -> u32 {
                self as u32
            }
        }
    };
}

#[inline]
pub(crate) fn unreached<C: Cell>(c: C) -> bool {
    c == C::UNREACHED
}

cell!(u8, 1);
cell!(u16, 2);
cell!(u32, 4);

/// Dense distance array of one of three widths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cells {
    U8(Vec<u8>),
    U16(Vec<u16>),
    U32(Vec<u32>),
}

macro_rules! with_cells {
    ($cells:expr, $v:ident => $body:expr) => {
        match $cells {
            Cells::U8($v) => $body,
            Cells::U16($v) => $body,
            Cells::U32($v) => $body,
        }
    };
}
pub(crate) use with_cells;

impl Cells {
    pub fn len(&self) -> usize {
        with_cells!(self, v => v.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn width(&self) -> u8 {
        match self {
            Cells::U8(_) => 1,
            Cells::U16(_) => 2,
            Cells::U32(_) => 4,
        }
    }

    #[inline]
    pub fn get(&self, index: usize) -> Option<u32> {
        with_cells!(self, v => {
            let c = v[index];
            (!unreached(c)).then(|| c.level())
        })
    }
}

/// Left multiplication `g ↦ s·g` on entry vectors.
///
/// For `H_{q,d}`: `(s·g)_ij = s_ij + g_ij + Σ_{i<l<j} s_il g_lj`.
#[derive(Clone, Debug)]
pub(crate) struct LeftMul {
    radices: Vec<u64>,
    shift: Vec<u64>,
    /// `(s_il, slot of g_lj)` per entry, zero coefficients dropped.
    terms: Vec<Vec<(u64, usize)>>,
}

impl LeftMul {
    pub(crate) fn new(spec: &GroupSpec, s: ElementCode) -> Result<Self> {
        let shift = spec.decode(s)?;
        let terms = match spec.family() {
            Family::Abelian { moduli } => vec![Vec::new(); moduli.len()],
            Family::Unitriangular { .. } => spec
                .positions()
                .iter()
                .enumerate()
                .map(|(p, _)| {
                    spec.product_terms()[p]
                        .iter()
                        .filter(|&&(left, _)| shift[left] != 0)
                        .map(|&(left, right)| (shift[left], right))
                        .collect()
                })
                .collect(),
        };
        Ok(LeftMul { radices: spec.radices().to_vec(), shift, terms })
    }

    #[inline]
    pub(crate) fn apply(&self, g: &[u64], out: &mut [u64]) {
        for p in 0..g.len() {
            let m = self.radices[p];
            let terms = &self.terms[p];
            let mut acc = g[p] + self.shift[p];
            if terms.is_empty() {
                if acc >= m {
                    acc -= m;
                }
            } else {
                for &(coef, src) in terms {
                    acc += coef * g[src];
                }
                acc %= m;
            }
            out[p] = acc;
        }
    }
}

/// Word-metric distances from the identity over all of `G`.
///
/// By left invariance `d(g, h) = dist[g⁻¹h]`, so this one array carries the
/// whole metric of `Γ(G, S)`.
#[derive(Clone, Debug)]
pub struct DistanceMap {
    spec: GroupSpec,
    gens: GeneratingSet,
    cells: Cells,
    relaxations: u64,
}

impl DistanceMap {
    pub(crate) fn from_parts(spec: GroupSpec, gens: GeneratingSet, cells: Cells) -> Self {
        DistanceMap { spec, gens, cells, relaxations: 0 }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn gens(&self) -> &GeneratingSet {
        &self.gens
    }

    pub fn cells(&self) -> &Cells {
        &self.cells
    }

    pub fn cell_width(&self) -> u8 {
        self.cells.width()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Edge relaxations performed by the final BFS pass.
    pub fn relaxations(&self) -> u64 {
        self.relaxations
    }

    /// `None` when `g` was not reached.
    pub fn distance(&self, g: ElementCode) -> Option<u32> {
        self.cells.get(g.index())
    }

    pub fn is_complete(&self) -> bool {
        with_cells!(&self.cells, v => !v.iter().any(|&c| unreached(c)))
    }

    /// All distances; unreached entries read as `u32::MAX`.
    pub fn to_vec(&self) -> Vec<u32> {
        with_cells!(&self.cells, v => v
            .iter()
            .map(|&c| if unreached(c) { u32::MAX } else { c.level() })
            .collect())
    }
}

fn estimated_bytes(order: u64, width: u8) -> u64 {
    // cells, visited bitmap, and the two frontier buffers at their worst
    order * width as u64 + order.div_ceil(8) + 8 * order
}

/// Breadth-first search of `Γ(G, S)` from the identity.
pub fn bfs_distance_map(spec: &GroupSpec, gens: &GeneratingSet) -> Result<DistanceMap> {
    bfs_distance_map_with(spec, gens, &BfsConfig::default())
}

pub fn bfs_distance_map_with(spec: &GroupSpec, gens: &GeneratingSet, config: &BfsConfig) -> Result<DistanceMap> {
    if gens.symmetric().is_empty() && spec.order() > 1 {
        return Err(Error::Precondition("symmetric generating set is empty".into()));
    }
    if spec.order() > u32::MAX as u64 {
        return Err(Error::Resource(format!("group order {} exceeds the dense index range", spec.order())));
    }
    let bound = config.diameter_hint.min(spec.order().saturating_sub(1));
    let mut width = if bound < u8::MAX as u64 {
        1
    } else if bound < u16::MAX as u64 {
        2
    } else {
        4
    };
    let actions = gens.symmetric().iter().map(|&(s, _)| LeftMul::new(spec, s)).collect::<Result<Vec<_>>>()?;
    loop {
        let need = estimated_bytes(spec.order(), width);
        if need > config.memory_cap {
            return Err(Error::Resource(format!(
                "BFS over {} elements needs about {need} bytes, cap is {}",
                spec.order(),
                config.memory_cap
            )));
        }
        let outcome = match width {
            1 => run::<u8>(spec, &actions).map(|(c, r)| (Cells::U8(c), r)),
            2 => run::<u16>(spec, &actions).map(|(c, r)| (Cells::U16(c), r)),
            _ => run::<u32>(spec, &actions).map(|(c, r)| (Cells::U32(c), r)),
        };
        match outcome {
            Some((cells, relaxations)) => {
                return Ok(DistanceMap { spec: spec.clone(), gens: gens.clone(), cells, relaxations })
            }
            None if width < 4 => width *= 2,
            None => unreachable!("u32 cells cannot overflow below 2^32 elements"),
        }
    }
}

/// Two swapped frontier buffers plus a visited bitmap. `None` on cell overflow.
fn run<C: Cell>(spec: &GroupSpec, actions: &[LeftMul]) -> Option<(Vec<C>, u64)> {
    let n = spec.order() as usize;
    let mut dist = vec![C::UNREACHED; n];
    let mut visited = vec![0u64; n.div_ceil(64)];
    dist[0] = C::from_level(0)?;
    visited[0] |= 1;
    let mut frontier: Vec<u32> = vec![0];
    let mut next: Vec<u32> = Vec::new();
    let mut level = 0u32;
    let mut relaxations = 0u64;
    let digits = spec.digits();
    let mut g = vec![0u64; digits];
    let mut h = vec![0u64; digits];
    let weights = spec.weights();
    while !frontier.is_empty() {
        level += 1;
        let cell = C::from_level(level);
        for &x in &frontier {
            spec.decode_into(ElementCode(x as u64), &mut g);
            for action in actions {
                action.apply(&g, &mut h);
                let y = h.iter().zip(weights).map(|(e, w)| e * w).sum::<u64>() as usize;
                let (word, bit) = (y / 64, 1u64 << (y % 64));
                if visited[word] & bit == 0 {
                    visited[word] |= bit;
                    dist[y] = cell?;
                    next.push(y as u32);
                }
            }
        }
        relaxations += (frontier.len() * actions.len()) as u64;
        std::mem::swap(&mut frontier, &mut next);
        next.clear();
    }
    Some((dist, relaxations))
}

/// Greedy descent: repeatedly strip a letter `s` with `dist[s⁻¹g] = dist[g] - 1`.
pub fn shortest_word(dm: &DistanceMap, target: ElementCode) -> Result<crate::distortion::Word> {
    let spec = dm.spec();
    spec.check(target)?;
    let mut remaining = dm.distance(target).ok_or(Error::NotGenerating)?;
    let steps: Vec<(LeftMul, Letter)> = dm
        .gens()
        .symmetric()
        .iter()
        .map(|&(s, letter)| Ok((LeftMul::new(spec, spec.inv(s)?)?, letter)))
        .collect::<Result<_>>()?;
    let mut letters = Vec::with_capacity(remaining as usize);
    let mut g = spec.decode(target)?;
    let mut h = vec![0; g.len()];
    while remaining > 0 {
        let mut found = None;
        for (action, letter) in &steps {
            action.apply(&g, &mut h);
            if dm.distance(spec.encode_unchecked(&h)) == Some(remaining - 1) {
                found = Some(*letter);
                break;
            }
        }
        let letter = found.expect("a BFS predecessor always exists");
        std::mem::swap(&mut g, &mut h);
        letters.push(letter);
        remaining -= 1;
    }
    Ok(crate::distortion::Word(letters))
}
