//! Triangulated surfaces as text meshes (`v x y t` and 1-based `f i j k`
//! lines, readable as Wavefront OBJ).

use std::f64::consts::TAU;
use std::io::{self, Write};

use zmc_core::{DeformParams, DomainShape, DomainSpec, HoloError, WeierstrassData, C64};

/// Triangles whose area in `(x, y, t)` space is below this are dropped.
pub const MIN_TRIANGLE_AREA: f64 = 1e-14;

/// Parameter-domain lattice: sample points and counter-clockwise triangles.
#[derive(Clone, Debug)]
pub struct Lattice {
    pub points: Vec<C64>,
    pub triangles: Vec<[usize; 3]>,
    /// Adjacent sample pairs, for sign-change detection.
    pub edges: Vec<(usize, usize)>,
}

/// Polar lattice for disks (a centre vertex, `rings × spokes` ring vertices,
/// the innermost ring fanned to the centre), a rectangular one for
/// half-plane truncations and a filtered bounding-box lattice for polygons.
pub fn lattice(domain: &DomainSpec, rings: usize, spokes: usize) -> Lattice {
    let rings = rings.max(1);
    let spokes = spokes.max(3);
    let mut lat = Lattice {
        points: Vec::new(),
        triangles: Vec::new(),
        edges: Vec::new(),
    };
    match domain.shape() {
        DomainShape::Disk { radius } => {
            lat.points.push(C64::new(0.0, 0.0));
            for k in 1..=rings {
                let r = radius * k as f64 / rings as f64;
                for j in 0..spokes {
                    lat.points.push(C64::from_polar(r, TAU * j as f64 / spokes as f64));
                }
            }
            let at = |k: usize, j: usize| 1 + (k - 1) * spokes + j % spokes;
            for j in 0..spokes {
                lat.triangles.push([0, at(1, j), at(1, j + 1)]);
                lat.edges.push((0, at(1, j)));
            }
            for k in 1..=rings {
                for j in 0..spokes {
                    lat.edges.push((at(k, j), at(k, j + 1)));
                    if k < rings {
                        lat.edges.push((at(k, j), at(k + 1, j)));
                        lat.triangles.push([at(k, j), at(k + 1, j), at(k + 1, j + 1)]);
                        lat.triangles.push([at(k, j), at(k + 1, j + 1), at(k, j + 1)]);
                    }
                }
            }
        }
        DomainShape::HalfPlane { width, height, delta } => {
            rectangle(&mut lat, C64::new(-width, -height), C64::new(-delta, *height), rings, |_| true);
        }
        DomainShape::Polygon { vertices } => {
            let (lo, hi) = zmc_core::geometry::bbox(vertices);
            rectangle(&mut lat, lo, hi, rings, |w| domain.contains_closed(w));
        }
    }
    lat
}

fn rectangle(lat: &mut Lattice, lo: C64, hi: C64, n: usize, keep: impl Fn(C64) -> bool) {
    let side = n + 1;
    let mut index = vec![usize::MAX; side * side];
    for r in 0..side {
        for c in 0..side {
            let w = C64::new(
                lo.re + (hi.re - lo.re) * c as f64 / n as f64,
                lo.im + (hi.im - lo.im) * r as f64 / n as f64,
            );
            if keep(w) {
                index[r * side + c] = lat.points.len();
                lat.points.push(w);
            }
        }
    }
    let get = |r: usize, c: usize| Some(index[r * side + c]).filter(|&k| k != usize::MAX);
    for r in 0..side {
        for c in 0..side {
            let Some(a) = get(r, c) else { continue };
            if c + 1 < side {
                if let Some(b) = get(r, c + 1) {
                    lat.edges.push((a, b));
                }
            }
            if r + 1 < side {
                if let Some(b) = get(r + 1, c) {
                    lat.edges.push((a, b));
                }
            }
            if r + 1 < side && c + 1 < side {
                if let (Some(b), Some(d), Some(e)) = (get(r, c + 1), get(r + 1, c + 1), get(r + 1, c)) {
                    for t in [[a, b, d], [a, d, e]] {
                        let centroid = (lat.points[t[0]] + lat.points[t[1]] + lat.points[t[2]]) / 3.0;
                        if keep(centroid) {
                            lat.triangles.push(t);
                        }
                    }
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeshFile {
    /// `# key: value` header lines, in order.
    pub metadata: Vec<(String, String)>,
    pub vertices: Vec<[f64; 3]>,
    /// 0-based here, written 1-based.
    pub faces: Vec<[usize; 3]>,
    /// Vertices on or next to the singular set (0-based).
    pub singular: Vec<usize>,
    /// Points of the singular locus found by the library search.
    pub singular_locus: Vec<C64>,
}

fn eval_point(data: &WeierstrassData, p: &DeformParams, w: C64) -> Result<[f64; 3], HoloError> {
    let x = match data.surface_point(p, w) {
        Ok(x) => x,
        // Boundary samples may sit on a pole or a log branch point.
        Err(_) => data.surface_point(p, w + (data.base() - w) * 1e-6)?,
    };
    Ok([x.horizontal.re, x.horizontal.im, x.height])
}

fn area(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
    let x = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
    0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

/// Sample `X_{θ,λ,c}` on `lat`. A vertex is flagged singular when the
/// metric vanishes there to `1e-10` or when `1 + cλ²|G|²` changes sign
/// along an adjacent lattice edge and the vertex is the endpoint closer to
/// zero.
pub fn build_mesh(
    data: &WeierstrassData,
    p: &DeformParams,
    lat: &Lattice,
    locus_resolution: usize,
) -> Result<MeshFile, HoloError> {
    let mut vertices = Vec::with_capacity(lat.points.len());
    let mut factor = Vec::with_capacity(lat.points.len());
    let mut singular_flag = vec![false; lat.points.len()];
    for (k, &w) in lat.points.iter().enumerate() {
        vertices.push(eval_point(data, p, w)?);
        let (f, g) = data.eval_fg(w).unwrap_or((C64::new(1.0, 0.0), C64::new(0.0, 0.0)));
        let s = 1.0 + p.c_lambda2() * g.norm_sqr();
        factor.push(s);
        let metric = (f.norm() / p.lambda()).powi(2) * s * s;
        if metric < 1e-10 {
            singular_flag[k] = true;
        }
    }
    for &(a, b) in &lat.edges {
        if factor[a] * factor[b] < 0.0 {
            let k = if factor[a].abs() <= factor[b].abs() { a } else { b };
            singular_flag[k] = true;
        }
    }
    let faces: Vec<[usize; 3]> = lat
        .triangles
        .iter()
        .copied()
        .filter(|t| area(vertices[t[0]], vertices[t[1]], vertices[t[2]]) >= MIN_TRIANGLE_AREA)
        .collect();
    let singular_locus = if locus_resolution > 0 {
        data.singular_locus(p, locus_resolution)?
    } else {
        Vec::new()
    };
    Ok(MeshFile {
        metadata: Vec::new(),
        vertices,
        faces,
        singular: (0..lat.points.len()).filter(|&k| singular_flag[k]).collect(),
        singular_locus,
    })
}

impl MeshFile {
    pub fn push_meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.into(), value.to_string()));
    }

    pub fn write<W: Write + ?Sized>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "# zmc surface mesh")?;
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}: {v}")?;
        }
        writeln!(out, "# vertices: {}", self.vertices.len())?;
        writeln!(out, "# faces: {}", self.faces.len())?;
        for v in &self.vertices {
            writeln!(out, "v {:.16e} {:.16e} {:.16e}", v[0], v[1], v[2])?;
        }
        for f in &self.faces {
            writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
        }
        Ok(())
    }

    /// Sidecar listing singular vertices (`s i`, 1-based) and parameter-domain
    /// points of the singular locus (`w re im`).
    pub fn write_singular<W: Write + ?Sized>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "# singular vertices of the accompanying mesh")?;
        writeln!(out, "# count: {}", self.singular.len())?;
        for k in &self.singular {
            writeln!(out, "s {}", k + 1)?;
        }
        writeln!(out, "# singular locus in the parameter domain: {}", self.singular_locus.len())?;
        for w in &self.singular_locus {
            writeln!(out, "w {:.16e} {:.16e}", w.re, w.im)?;
        }
        Ok(())
    }
}
