use super::Silhouette;

/// Pixel adjacency used when grouping foreground into components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Connectivity {
    Four,
    #[default]
    Eight,
}

impl Connectivity {
    pub fn from_neighbors(n: u8) -> Option<Self> {
        match n {
            4 => Some(Self::Four),
            8 => Some(Self::Eight),
            _ => None,
        }
    }

    pub fn neighbors(self) -> u8 {
        match self {
            Self::Four => 4,
            Self::Eight => 8,
        }
    }
}

/// Component ids per pixel (0 = background) plus per-component areas.
///
/// Ids are assigned 1, 2, ... in the order a row-major scan first meets each
/// component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabeling {
    height: usize,
    width: usize,
    labels: Vec<u32>,
    areas: Vec<usize>,
}

impl ComponentLabeling {
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label_at(&self, x: usize, y: usize) -> u32 {
        self.labels[y * self.width + x]
    }

    pub fn component_count(&self) -> usize {
        self.areas.len()
    }

    /// Area of component `id` (1-based); 0 for unknown ids.
    pub fn area(&self, id: u32) -> usize {
        id.checked_sub(1)
            .and_then(|i| self.areas.get(i as usize))
            .copied()
            .unwrap_or(0)
    }

    /// Areas indexed by `id - 1`.
    pub fn component_areas(&self) -> &[usize] {
        &self.areas
    }

    /// Largest component, ties going to the smallest id. `None` when the
    /// silhouette has no foreground.
    pub fn max_component_id(&self) -> Option<u32> {
        let mut best: Option<(u32, usize)> = None;
        for (i, &a) in self.areas.iter().enumerate() {
            if best.is_none_or(|(_, b)| a > b) {
                best = Some((i as u32 + 1, a));
            }
        }
        best.map(|(id, _)| id)
    }

    /// Silhouette holding only the pixels of component `id`.
    pub fn component_mask(&self, id: u32) -> Silhouette {
        Silhouette {
            height: self.height,
            width: self.width,
            mask: self.labels.iter().map(|&l| l == id && id != 0).collect(),
        }
    }
}

struct DisjointSet {
    parent: Vec<u32>,
}

impl DisjointSet {
    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }

    fn make(&mut self) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        id
    }
}

/// Two-pass union-find labeling.
pub fn connected_components(sil: &Silhouette, connectivity: Connectivity) -> ComponentLabeling {
    let (h, w) = (sil.height, sil.width);
    let mut provisional = vec![0u32; h * w];
    let mut sets = DisjointSet { parent: vec![0] };

    for y in 0..h {
        for x in 0..w {
            let idx = y * w + x;
            if !sil.mask[idx] {
                continue;
            }
            // previously scanned neighbours only
            let mut neighbours = [0u32; 4];
            let mut n = 0;
            if x > 0 && provisional[idx - 1] != 0 {
                neighbours[n] = provisional[idx - 1];
                n += 1;
            }
            if y > 0 {
                let up = idx - w;
                if provisional[up] != 0 {
                    neighbours[n] = provisional[up];
                    n += 1;
                }
                if connectivity == Connectivity::Eight {
                    if x > 0 && provisional[up - 1] != 0 {
                        neighbours[n] = provisional[up - 1];
                        n += 1;
                    }
                    if x + 1 < w && provisional[up + 1] != 0 {
                        neighbours[n] = provisional[up + 1];
                        n += 1;
                    }
                }
            }
            provisional[idx] = if n == 0 {
                sets.make()
            } else {
                let first = neighbours[0];
                for &other in &neighbours[1..n] {
                    sets.union(first, other);
                }
                first
            };
        }
    }

    // Second pass: resolve roots and renumber by first appearance.
    let mut remap = vec![0u32; sets.parent.len()];
    let mut areas = Vec::new();
    let mut labels = vec![0u32; h * w];
    for (idx, &p) in provisional.iter().enumerate() {
        if p == 0 {
            continue;
        }
        let root = sets.find(p) as usize;
        if remap[root] == 0 {
            areas.push(0);
            remap[root] = areas.len() as u32;
        }
        let id = remap[root];
        labels[idx] = id;
        areas[id as usize - 1] += 1;
    }

    ComponentLabeling {
        height: h,
        width: w,
        labels,
        areas,
    }
}
