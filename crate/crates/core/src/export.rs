//! Triangle meshes with per-vertex curvature, written as OBJ and CSV.

use crate::curvature::{gauss_from_jets, mean_from_jets, normal_class};
use crate::error::{Error, Result};
use crate::pg_core::{CausalClass, PGVec3};
use crate::surface::FactorableSurface;
use crate::verify::GridSpec;
use rayon::prelude::*;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub struct MeshVertex {
    pub x: f64,
    pub z: f64,
    pub position: PGVec3,
    /// `None` where the normal is lightlike.
    pub k: Option<f64>,
    /// `None` unless the normal is spacelike.
    pub h: Option<f64>,
    pub class: CausalClass,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceMesh {
    pub nx: usize,
    pub nz: usize,
    pub vertices: Vec<MeshVertex>,
    /// Zero-based vertex indices.
    pub faces: Vec<[usize; 3]>,
}

impl SurfaceMesh {
    /// Sample `s` on `grid`, vertex `(i, j)` at index `i * nz + j`. Fails if
    /// any node lies outside the domain or the functions' validity.
    /// Without `with_curvature`, `K` and `H` are left undefined.
    pub fn build(s: &FactorableSurface, grid: &GridSpec, with_curvature: bool) -> Result<Self> {
        let vertices: Vec<Result<MeshVertex>> = (0..grid.total())
            .into_par_iter()
            .map(|idx| {
                let (i, j) = (idx / grid.nz, idx % grid.nz);
                let (x, z) = (grid.x(i), grid.z(j));
                let jets = s.jets(x, z).map_err(|cause| Error::AtNode {
                    i,
                    j,
                    x,
                    z,
                    cause: Box::new(cause),
                })?;
                let class = match normal_class(&jets) {
                    CausalClass::NonIsotropic => CausalClass::Spacelike,
                    c => c,
                };
                Ok(MeshVertex {
                    x,
                    z,
                    position: PGVec3::new(x, jets.f.v * jets.g.v, z),
                    k: with_curvature
                        .then(|| gauss_from_jets(&jets, x, z).ok())
                        .flatten(),
                    h: with_curvature
                        .then(|| mean_from_jets(&jets, x, z).ok())
                        .flatten(),
                    class,
                })
            })
            .collect();
        // sequential so the reported node is always the first bad one
        let vertices = vertices.into_iter().collect::<Result<Vec<_>>>()?;

        let (nx, nz) = (grid.nx, grid.nz);
        let v = |i: usize, j: usize| i * nz + j;
        let mut faces = Vec::with_capacity(2 * (nx - 1) * (nz - 1));
        for i in 0..nx - 1 {
            for j in 0..nz - 1 {
                faces.push([v(i, j), v(i, j + 1), v(i + 1, j)]);
                faces.push([v(i, j + 1), v(i + 1, j + 1), v(i + 1, j)]);
            }
        }
        Ok(SurfaceMesh {
            nx,
            nz,
            vertices,
            faces,
        })
    }

    pub fn write_obj_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for v in &self.vertices {
            let p = v.position;
            writeln!(w, "v {} {} {}", p.x1, p.x2, p.x3)?;
        }
        for f in &self.faces {
            writeln!(w, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
        }
        w.flush()
    }

    pub fn write_csv_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "x,z,y,K,H,Dclass")?;
        for v in &self.vertices {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                v.x,
                v.z,
                v.position.x2,
                opt(v.k),
                opt(v.h),
                v.class.as_str()
            )?;
        }
        w.flush()
    }

    pub fn write_obj(&self, path: &Path) -> Result<()> {
        write_file(path, |w| self.write_obj_to(w))
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_file(path, |w| self.write_csv_to(w))
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        cause: e.to_string(),
    }
}

fn write_file(
    path: &Path,
    body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> Result<()> {
    let file = File::create(path).map_err(|e| io_error(path, e))?;
    let mut w = BufWriter::new(file);
    body(&mut w).map_err(|e| io_error(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcs::C2Fn;
    use crate::surface::Rect;

    fn plane_mesh() -> SurfaceMesh {
        let s = FactorableSurface::new(
            C2Fn::constant(2.0),
            C2Fn::linear(0.25, 0.0),
            0.0,
            Rect::new(0.0, 1.0, 0.0, 2.0),
        );
        SurfaceMesh::build(&s, &GridSpec::new(3, 4, s.domain).unwrap(), true).unwrap()
    }

    #[test]
    fn sizes_and_indices() {
        let m = plane_mesh();
        assert_eq!(m.vertices.len(), 12);
        assert_eq!(m.faces.len(), 2 * 2 * 3);
        assert_eq!(m.faces[0], [0, 1, 4]);
        assert_eq!(m.faces[1], [1, 5, 4]);
        assert!(m.faces.iter().flatten().all(|&i| i < 12));
    }

    #[test]
    fn faces_wind_counterclockwise_from_above() {
        let m = plane_mesh();
        for f in &m.faces {
            let p: Vec<_> = f.iter().map(|&i| m.vertices[i].position).collect();
            // signed area in the (z, x) plane, viewed from +y
            let (u, w) = (p[1] - p[0], p[2] - p[0]);
            assert!(u.x3 * w.x1 - u.x1 * w.x3 > 0.0);
        }
    }

    #[test]
    fn obj_and_csv_text() {
        let m = plane_mesh();
        let mut obj = Vec::new();
        m.write_obj_to(&mut obj).unwrap();
        let obj = String::from_utf8(obj).unwrap();
        assert!(obj.starts_with("v 0 0 0\n"));
        assert!(obj.contains("\nf 1 2 5\n"));
        assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 12);

        let mut csv = Vec::new();
        m.write_csv_to(&mut csv).unwrap();
        let csv = String::from_utf8(csv).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("x,z,y,K,H,Dclass"));
        assert_eq!(lines.next(), Some("0,0,0,0,0,spacelike"));
    }

    #[test]
    fn lightlike_vertices_have_empty_fields() {
        let s = FactorableSurface::new(
            C2Fn::constant(1.0),
            C2Fn::linear(1.0, 0.0),
            0.0,
            Rect::new(0.0, 1.0, 0.0, 1.0),
        );
        let m = SurfaceMesh::build(&s, &GridSpec::new(2, 2, s.domain).unwrap(), true).unwrap();
        let mut csv = Vec::new();
        m.write_csv_to(&mut csv).unwrap();
        let csv = String::from_utf8(csv).unwrap();
        assert!(csv.lines().skip(1).all(|l| l.ends_with(",,,lightlike")));
    }

    #[test]
    fn geometry_only_mesh() {
        let s = FactorableSurface::new(
            C2Fn::constant(1.0),
            C2Fn::constant(1.0),
            0.5,
            Rect::new(0.0, 1.0, 0.0, 1.0),
        );
        let m = SurfaceMesh::build(&s, &GridSpec::new(2, 2, s.domain).unwrap(), false).unwrap();
        assert_eq!((m.vertices.len(), m.faces.len()), (4, 2));
        assert!(m
            .vertices
            .iter()
            .all(|v| v.k.is_none() && v.position.x2 == 1.0));
    }

    #[test]
    fn out_of_domain_node_is_named() {
        let s = FactorableSurface::new(
            C2Fn::power(1.0, 0.0, 0.5),
            C2Fn::constant(1.0),
            0.0,
            Rect::new(-1.0, 1.0, 0.0, 1.0),
        );
        let err =
            SurfaceMesh::build(&s, &GridSpec::new(3, 2, s.domain).unwrap(), false).unwrap_err();
        assert!(
            err.to_string().starts_with("grid node (0, 0) at (-1, 0)"),
            "{err}"
        );
        match err {
            Error::AtNode { cause, .. } => {
                assert!(matches!(*cause, Error::NonPositiveBase { .. }))
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn io_error_names_path() {
        let m = plane_mesh();
        let err = m
            .write_obj(Path::new("/nonexistent-dir/x.obj"))
            .unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/x.obj"));
    }
}
