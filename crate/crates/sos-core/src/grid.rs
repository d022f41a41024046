//! Torus lattice geometry: patch indexing and neighborhood offsets.

/// Patch coordinate grid with wrap-around on both axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Torus {
    pub width: u32,
    pub height: u32,
}

impl Torus {
    pub fn new(width: u32, height: u32) -> Self {
        Torus { width, height }
    }

    pub fn patch_count(&self) -> usize {
        self.width as usize * self.height as usize
    }

    /// Row-major patch index.
    pub fn index(&self, x: u32, y: u32) -> usize {
        y as usize * self.width as usize + x as usize
    }

    pub fn coords(&self, index: usize) -> (u32, u32) {
        (
            (index % self.width as usize) as u32,
            (index / self.width as usize) as u32,
        )
    }

    /// Applies a signed offset with torus wrap.
    pub fn offset(&self, x: u32, y: u32, dx: i32, dy: i32) -> (u32, u32) {
        (wrap(x, dx, self.width), wrap(y, dy, self.height))
    }

    /// Shortest wrap-around distance squared between two patches.
    pub fn distance_sq(&self, a: (u32, u32), b: (u32, u32)) -> u64 {
        let dx = axis_dist(a.0, b.0, self.width) as u64;
        let dy = axis_dist(a.1, b.1, self.height) as u64;
        dx * dx + dy * dy
    }
}

fn wrap(v: u32, d: i32, len: u32) -> u32 {
    let len = len as i64;
    (((v as i64 + d as i64) % len + len) % len) as u32
}

fn axis_dist(a: u32, b: u32, len: u32) -> u32 {
    let d = a.abs_diff(b);
    d.min(len - d)
}

/// All integer offsets (dx, dy) ≠ (0, 0) with dx² + dy² ≤ radius², in
/// row-major order (dy outer, dx inner). The counts are 4, 12 and 28 for
/// radii 1, 2 and 3.
pub fn neighbor_offsets(radius: f64) -> Vec<(i32, i32)> {
    assert!(radius > 0.0, "radius must be positive");
    let r = radius.floor() as i32;
    let r_sq = radius * radius;
    let mut out = Vec::new();
    for dy in -r..=r {
        for dx in -r..=r {
            if (dx, dy) == (0, 0) {
                continue;
            }
            if (dx * dx + dy * dy) as f64 <= r_sq {
                out.push((dx, dy));
            }
        }
    }
    out
}
