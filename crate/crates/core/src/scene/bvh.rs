//! Axis-aligned bounding volume hierarchy over scene surfaces.

use super::surface::{Surface, SurfaceId, Vec3d};

const LEAF_SIZE: usize = 4;

#[derive(Clone, Debug)]
struct Node {
    min: Vec3d,
    max: Vec3d,
    /// Leaf: first index into `order`. Interior: index of the left child.
    start: u32,
    /// Leaf: number of surfaces. Interior: zero.
    count: u32,
    /// Interior: index of the right child.
    right: u32,
}

#[derive(Clone, Debug, Default)]
pub struct Bvh {
    nodes: Vec<Node>,
    order: Vec<SurfaceId>,
}

struct Ray {
    origin: Vec3d,
    inv: Vec3d,
}

impl Ray {
    fn new(origin: Vec3d, dir: Vec3d) -> Self {
        Ray { origin, inv: Vec3d::new(1.0 / dir.x, 1.0 / dir.y, 1.0 / dir.z) }
    }

    /// Entry parameter into the box when the ray overlaps it within [t_min, t_max].
    #[inline]
    fn hits_box(&self, lo: Vec3d, hi: Vec3d, t_min: f64, t_max: f64) -> Option<f64> {
        let mut t0 = t_min;
        let mut t1 = t_max;
        for axis in 0..3 {
            let o = self.origin.component(axis);
            let inv = self.inv.component(axis);
            let mut ta = (lo.component(axis) - o) * inv;
            let mut tb = (hi.component(axis) - o) * inv;
            if ta.is_nan() || tb.is_nan() {
                // origin lies on a slab boundary of a zero-direction axis
                ta = f64::NEG_INFINITY;
                tb = f64::INFINITY;
            }
            if ta > tb {
                std::mem::swap(&mut ta, &mut tb);
            }
            t0 = t0.max(ta);
            t1 = t1.min(tb);
            if t0 > t1 {
                return None;
            }
        }
        Some(t0)
    }
}

impl Bvh {
    pub fn build(surfaces: &[Surface]) -> Self {
        let mut bvh =
            Bvh { nodes: Vec::with_capacity(2 * surfaces.len() / LEAF_SIZE + 1), order: (0..surfaces.len()).collect() };
        if !surfaces.is_empty() {
            let n = surfaces.len();
            bvh.build_node(surfaces, 0, n);
        }
        bvh
    }

    fn build_node(&mut self, surfaces: &[Surface], start: usize, end: usize) -> usize {
        let (mut lo, mut hi) = (
            Vec3d::new(f64::INFINITY, f64::INFINITY, f64::INFINITY),
            Vec3d::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY),
        );
        let (mut clo, mut chi) = (lo, hi);
        for &id in &self.order[start..end] {
            let s = &surfaces[id];
            lo = lo.min_by_component(s.aabb_min);
            hi = hi.max_by_component(s.aabb_max);
            let c = (s.aabb_min + s.aabb_max) * 0.5;
            clo = clo.min_by_component(c);
            chi = chi.max_by_component(c);
        }
        // pad so axis-aligned polygons still have a box with volume
        let pad = Vec3d::new(1e-9, 1e-9, 1e-9);
        let index = self.nodes.len();
        self.nodes.push(Node {
            min: lo - pad,
            max: hi + pad,
            start: start as u32,
            count: (end - start) as u32,
            right: 0,
        });
        if end - start <= LEAF_SIZE {
            return index;
        }
        let extent = chi - clo;
        let axis = if extent.x >= extent.y && extent.x >= extent.z {
            0
        } else if extent.y >= extent.z {
            1
        } else {
            2
        };
        let key = |id: &SurfaceId| {
            let s = &surfaces[*id];
            (s.aabb_min.component(axis) + s.aabb_max.component(axis), *id)
        };
        self.order[start..end].sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        let mid = (start + end) / 2;
        let left = self.build_node(surfaces, start, mid);
        let right = self.build_node(surfaces, mid, end);
        let node = &mut self.nodes[index];
        node.start = left as u32;
        node.count = 0;
        node.right = right as u32;
        index
    }

    /// Nearest surface hit with parameter in (t_min, t_max), skipping surfaces for which `skip` is true.
    pub fn closest(
        &self,
        surfaces: &[Surface],
        origin: Vec3d,
        dir: Vec3d,
        t_min: f64,
        t_max: f64,
        skip: impl Fn(SurfaceId) -> bool,
    ) -> Option<(SurfaceId, f64)> {
        if self.nodes.is_empty() {
            return None;
        }
        let ray = Ray::new(origin, dir);
        let mut best: Option<(SurfaceId, f64)> = None;
        let mut limit = t_max;
        let mut stack = [0u32; 64];
        let mut sp = 1;
        while sp > 0 {
            sp -= 1;
            let node = &self.nodes[stack[sp] as usize];
            if ray.hits_box(node.min, node.max, t_min, limit).is_none() {
                continue;
            }
            if node.count > 0 {
                for &id in &self.order[node.start as usize..(node.start + node.count) as usize] {
                    if skip(id) {
                        continue;
                    }
                    if let Some(t) = surfaces[id].intersect(origin, dir, t_min, limit) {
                        // tie-break on id keeps the answer independent of traversal order
                        let better = match best {
                            None => true,
                            Some((bid, bt)) => t < bt || (t == bt && id < bid),
                        };
                        if better {
                            best = Some((id, t));
                            limit = t.next_up();
                        }
                    }
                }
            } else {
                let (l, r) = (node.start, node.right);
                let dl = ray.hits_box(self.nodes[l as usize].min, self.nodes[l as usize].max, t_min, limit);
                let dr = ray.hits_box(self.nodes[r as usize].min, self.nodes[r as usize].max, t_min, limit);
                match (dl, dr) {
                    (Some(a), Some(b)) => {
                        // push far child first so the near one is popped next
                        let (near, far) = if a <= b { (l, r) } else { (r, l) };
                        stack[sp] = far;
                        stack[sp + 1] = near;
                        sp += 2;
                    }
                    (Some(_), None) => {
                        stack[sp] = l;
                        sp += 1;
                    }
                    (None, Some(_)) => {
                        stack[sp] = r;
                        sp += 1;
                    }
                    (None, None) => {}
                }
            }
        }
        best
    }

    /// Whether any surface is hit with parameter in (t_min, t_max).
    pub fn any(
        &self,
        surfaces: &[Surface],
        origin: Vec3d,
        dir: Vec3d,
        t_min: f64,
        t_max: f64,
        skip: impl Fn(SurfaceId) -> bool,
    ) -> bool {
        let mut found = false;
        self.visit(origin, dir, t_min, t_max, |id| {
            if !skip(id) && surfaces[id].intersect(origin, dir, t_min, t_max).is_some() {
                found = true;
            }
            found
        });
        found
    }

    /// All hits with parameter in (t_min, t_max), appended unsorted to `out`.
    pub fn all(
        &self,
        surfaces: &[Surface],
        origin: Vec3d,
        dir: Vec3d,
        t_min: f64,
        t_max: f64,
        out: &mut Vec<(f64, SurfaceId)>,
    ) {
        self.visit(origin, dir, t_min, t_max, |id| {
            if let Some(t) = surfaces[id].intersect(origin, dir, t_min, t_max) {
                out.push((t, id));
            }
            false
        });
    }

    /// Calls `f` for every surface in a leaf whose box the ray overlaps; stops once `f` returns true.
    fn visit(&self, origin: Vec3d, dir: Vec3d, t_min: f64, t_max: f64, mut f: impl FnMut(SurfaceId) -> bool) {
        if self.nodes.is_empty() {
            return;
        }
        let ray = Ray::new(origin, dir);
        let mut stack = [0u32; 64];
        let mut sp = 1;
        while sp > 0 {
            sp -= 1;
            let node = &self.nodes[stack[sp] as usize];
            if ray.hits_box(node.min, node.max, t_min, t_max).is_none() {
                continue;
            }
            if node.count > 0 {
                for &id in &self.order[node.start as usize..(node.start + node.count) as usize] {
                    if f(id) {
                        return;
                    }
                }
            } else {
                stack[sp] = node.right;
                stack[sp + 1] = node.start;
                sp += 2;
            }
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }
}
