//! Closest-point queries against triangle surfaces, accelerated by an
//! axis-aligned bounding volume hierarchy.

use crate::mesh::SurfaceMesh;
use crate::{Error, Result, Vec3};

const LEAF_SIZE: usize = 4;

/// Part of the triangle that contains the closest point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feature {
    Face,
    /// Edge between local corners `k` and `(k + 1) % 3`.
    Edge(u8),
    /// Local corner `k`.
    Vertex(u8),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosestHit {
    pub point: Vec3,
    pub face: usize,
    pub distance: f64,
    /// Barycentric weights of `point` with respect to the face corners.
    pub barycentric: Vec3,
    pub feature: Feature,
}

/// Closest point on triangle `(a, b, c)` to `p`, with barycentric weights
/// and the feature it lies on.
pub fn closest_point_on_triangle(p: &Vec3, a: &Vec3, b: &Vec3, c: &Vec3) -> (Vec3, Vec3, Feature) {
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(&ap);
    let d2 = ac.dot(&ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return (*a, Vec3::new(1.0, 0.0, 0.0), Feature::Vertex(0));
    }
    let bp = p - b;
    let d3 = ab.dot(&bp);
    let d4 = ac.dot(&bp);
    if d3 >= 0.0 && d4 <= d3 {
        return (*b, Vec3::new(0.0, 1.0, 0.0), Feature::Vertex(1));
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let t = d1 / (d1 - d3);
        return (a + ab * t, Vec3::new(1.0 - t, t, 0.0), Feature::Edge(0));
    }
    let cp = p - c;
    let d5 = ab.dot(&cp);
    let d6 = ac.dot(&cp);
    if d6 >= 0.0 && d5 <= d6 {
        return (*c, Vec3::new(0.0, 0.0, 1.0), Feature::Vertex(2));
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let t = d2 / (d2 - d6);
        return (a + ac * t, Vec3::new(1.0 - t, 0.0, t), Feature::Edge(2));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let t = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return (b + (c - b) * t, Vec3::new(0.0, 1.0 - t, t), Feature::Edge(1));
    }
    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    (a + ab * v + ac * w, Vec3::new(1.0 - v - w, v, w), Feature::Face)
}

#[derive(Debug, Clone)]
struct Aabb {
    min: Vec3,
    max: Vec3,
}

impl Aabb {
    fn empty() -> Self {
        Self {
            min: Vec3::repeat(f64::INFINITY),
            max: Vec3::repeat(f64::NEG_INFINITY),
        }
    }

    fn grow(&mut self, p: &Vec3) {
        self.min = self.min.inf(p);
        self.max = self.max.sup(p);
    }

    fn distance_squared(&self, p: &Vec3) -> f64 {
        let d = (self.min - p).sup(&(p - self.max)).sup(&Vec3::zeros());
        d.norm_squared()
    }
}

#[derive(Debug, Clone)]
enum Node {
    Leaf { bounds: Aabb, start: usize, count: usize },
    Inner { bounds: Aabb, left: usize, right: usize },
}

impl Node {
    fn bounds(&self) -> &Aabb {
        match self {
            Node::Leaf { bounds, .. } | Node::Inner { bounds, .. } => bounds,
        }
    }
}

/// Surface plus its BVH. Immutable after construction, so it can be shared
/// across threads for concurrent queries.
#[derive(Debug, Clone)]
pub struct SurfaceQuery {
    mesh: SurfaceMesh,
    nodes: Vec<Node>,
    order: Vec<usize>,
}

impl SurfaceQuery {
    pub fn new(mesh: SurfaceMesh) -> Result<Self> {
        if mesh.face_count() == 0 {
            return Err(Error::EmptyMesh);
        }
        let centroids: Vec<Vec3> = (0..mesh.face_count())
            .map(|f| {
                let [a, b, c] = mesh.triangle(f);
                (a + b + c) / 3.0
            })
            .collect();
        let mut order: Vec<usize> = (0..mesh.face_count()).collect();
        let mut nodes = Vec::new();
        build(&mesh, &centroids, &mut order, 0, mesh.face_count(), &mut nodes);
        Ok(Self { mesh, nodes, order })
    }

    pub fn mesh(&self) -> &SurfaceMesh {
        &self.mesh
    }

    fn hit(&self, p: &Vec3, face: usize) -> ClosestHit {
        let [a, b, c] = self.mesh.triangle(face);
        let (point, barycentric, feature) = closest_point_on_triangle(p, &a, &b, &c);
        ClosestHit {
            point,
            face,
            distance: (p - point).norm(),
            barycentric,
            feature,
        }
    }

    /// Exact closest point using the hierarchy.
    pub fn closest(&self, p: &Vec3) -> ClosestHit {
        let mut best: Option<ClosestHit> = None;
        let mut best_d2 = f64::INFINITY;
        let mut stack = vec![0usize];
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id];
            if node.bounds().distance_squared(p) > best_d2 {
                continue;
            }
            match node {
                Node::Leaf { start, count, .. } => {
                    for &face in &self.order[*start..start + count] {
                        let hit = self.hit(p, face);
                        let d2 = (p - hit.point).norm_squared();
                        if d2 < best_d2 || (d2 == best_d2 && best.is_some_and(|b| face < b.face)) {
                            best_d2 = d2;
                            best = Some(hit);
                        }
                    }
                }
                Node::Inner { left, right, .. } => {
                    let dl = self.nodes[*left].bounds().distance_squared(p);
                    let dr = self.nodes[*right].bounds().distance_squared(p);
                    // Visit the nearer child first.
                    if dl <= dr {
                        stack.push(*right);
                        stack.push(*left);
                    } else {
                        stack.push(*left);
                        stack.push(*right);
                    }
                }
            }
        }
        best.expect("non-empty surface")
    }

    /// Exact closest point by testing every triangle. Reference path for
    /// checking [`SurfaceQuery::closest`].
    pub fn closest_brute_force(&self, p: &Vec3) -> ClosestHit {
        let mut best = self.hit(p, 0);
        let mut best_d2 = (p - best.point).norm_squared();
        for face in 1..self.mesh.face_count() {
            let hit = self.hit(p, face);
            let d2 = (p - hit.point).norm_squared();
            if d2 < best_d2 {
                best_d2 = d2;
                best = hit;
            }
        }
        best
    }
}

fn build(
    mesh: &SurfaceMesh,
    centroids: &[Vec3],
    order: &mut [usize],
    start: usize,
    end: usize,
    nodes: &mut Vec<Node>,
) -> usize {
    let mut bounds = Aabb::empty();
    let mut centre_bounds = Aabb::empty();
    for &f in &order[start..end] {
        for v in mesh.triangle(f) {
            bounds.grow(&v);
        }
        centre_bounds.grow(&centroids[f]);
    }
    let id = nodes.len();
    let count = end - start;
    if count <= LEAF_SIZE {
        nodes.push(Node::Leaf { bounds, start, count });
        return id;
    }
    let extent = centre_bounds.max - centre_bounds.min;
    let axis = extent.imax();
    let mid = start + count / 2;
    order[start..end].select_nth_unstable_by(count / 2, |&a, &b| centroids[a][axis].total_cmp(&centroids[b][axis]));
    nodes.push(Node::Leaf {
        bounds: Aabb::empty(),
        start: 0,
        count: 0,
    });
    let left = build(mesh, centroids, order, start, mid, nodes);
    let right = build(mesh, centroids, order, mid, end, nodes);
    nodes[id] = Node::Inner { bounds, left, right };
    id
}

/// One-shot closest point query. Builds a hierarchy; reuse a
/// [`SurfaceQuery`] for repeated queries.
pub fn closest_point_on_surface(v: &Vec3, surface: &SurfaceMesh) -> Result<ClosestHit> {
    Ok(SurfaceQuery::new(surface.clone())?.closest(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> SurfaceMesh {
        SurfaceMesh::new(vec![Vec3::zeros(), Vec3::x(), Vec3::y()], vec![[0, 1, 2]]).unwrap()
    }

    #[test]
    fn perpendicular_foot() {
        let hit = closest_point_on_surface(&Vec3::new(0.2, 0.3, 1.5), &triangle()).unwrap();
        assert!((hit.point - Vec3::new(0.2, 0.3, 0.0)).norm() < 1e-15);
        assert!((hit.distance - 1.5).abs() < 1e-15);
        assert_eq!(hit.feature, Feature::Face);
    }

    #[test]
    fn vertex_query() {
        let hit = closest_point_on_surface(&Vec3::x(), &triangle()).unwrap();
        assert_eq!(hit.point, Vec3::x());
        assert_eq!(hit.distance, 0.0);
    }

    #[test]
    fn features() {
        let q = SurfaceQuery::new(triangle()).unwrap();
        assert_eq!(q.closest(&Vec3::new(-1.0, -1.0, 0.0)).feature, Feature::Vertex(0));
        assert_eq!(q.closest(&Vec3::new(0.5, -1.0, 0.0)).feature, Feature::Edge(0));
        assert_eq!(q.closest(&Vec3::new(1.0, 1.0, 0.0)).feature, Feature::Edge(1));
        assert_eq!(q.closest(&Vec3::new(-1.0, 0.5, 0.0)).feature, Feature::Edge(2));
    }

    #[test]
    fn barycentric_reproduces_point() {
        let q = SurfaceQuery::new(triangle()).unwrap();
        for p in [
            Vec3::new(0.7, 0.9, 0.2),
            Vec3::new(-0.3, 0.4, -1.0),
            Vec3::new(0.1, 0.1, 0.1),
        ] {
            let hit = q.closest(&p);
            let [a, b, c] = q.mesh().triangle(hit.face);
            let rebuilt = a * hit.barycentric.x + b * hit.barycentric.y + c * hit.barycentric.z;
            assert!((rebuilt - hit.point).norm() < 1e-14);
        }
    }

    #[test]
    fn empty_surface() {
        assert!(closest_point_on_surface(&Vec3::zeros(), &SurfaceMesh::empty()).is_err());
    }
}
