//! OBJ and SVG writers for embedded strip meshes and developed patterns.

use nalgebra::Vector2;
use std::io::{self, Write};

use crate::strip::{DevelopedStrip, StripMesh};

/// Write meshes into one OBJ stream: per mesh an object with its vertex
/// grid, one normal per ruling column, quad faces wound to agree with the
/// stored normals, and the marked rows as `l` polyline groups.
pub fn write_obj(meshes: &[StripMesh], out: &mut impl Write) -> io::Result<()> {
    let mut v_base = 1usize;
    let mut n_base = 1usize;
    for mesh in meshes {
        writeln!(out, "o {}", mesh.name())?;
        for v in mesh.vertices() {
            writeln!(out, "v {} {} {}", v.x, v.y, v.z)?;
        }
        for i in 0..mesh.nu() {
            let n = mesh.normal(i);
            writeln!(out, "vn {} {} {}", n.x, n.y, n.z)?;
        }

        // grid order may wind either way relative to the surface normal
        // depending on which side of the ridge the strip extends to, so
        // orient the whole mesh off its first quad
        let flip = mesh
            .quad_indices()
            .next()
            .map(|[a, b, c, d]| {
                let vs = mesh.vertices();
                let cross = (vs[c] - vs[a]).cross(&(vs[d] - vs[b]));
                cross.dot(&mesh.normal(a / mesh.nt())) < 0.0
            })
            .unwrap_or(false);

        writeln!(out, "g {}", mesh.name())?;
        for quad in mesh.quad_indices() {
            let [a, b, c, d] = if flip {
                let [a, b, c, d] = quad;
                [a, d, c, b]
            } else {
                quad
            };
            write!(out, "f")?;
            for idx in [a, b, c, d] {
                write!(out, " {}//{}", v_base + idx, n_base + idx / mesh.nt())?;
            }
            writeln!(out)?;
        }

        for (row, label) in mesh.crease_rows() {
            writeln!(out, "g {}-crease-{}", mesh.name(), label)?;
            write!(out, "l")?;
            for i in 0..mesh.nu() {
                write!(out, " {}", v_base + mesh.vertex_index(i, row))?;
            }
            if mesh.is_closed() {
                write!(out, " {}", v_base + mesh.vertex_index(0, row))?;
            }
            writeln!(out)?;
        }

        v_base += mesh.nu() * mesh.nt();
        n_base += mesh.nu();
    }
    Ok(())
}

/// Write developed strips as an SVG crease pattern: ridge and boundary
/// polylines in black over a subsampled gray ruling field, y axis flipped
/// so the plane coordinates read the usual way.
pub fn write_developed_svg(
    strips: &[DevelopedStrip],
    ruling_stride: usize,
    out: &mut impl Write,
) -> io::Result<()> {
    let stride = ruling_stride.max(1);
    let mut lo = Vector2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Vector2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for strip in strips {
        for side in [false, true] {
            for p in strip.boundary(side) {
                lo = lo.inf(&p);
                hi = hi.sup(&p);
            }
        }
    }
    if !(lo.x < hi.x && lo.y < hi.y) {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "nothing to draw"));
    }
    let span = (hi - lo).amax();
    let pad = 0.02 * span;
    let flip = |p: Vector2<f64>| Vector2::new(p.x, lo.y + hi.y - p.y);
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.6} {:.6} {:.6} {:.6}\">",
        lo.x - pad,
        lo.y - pad,
        hi.x - lo.x + 2.0 * pad,
        hi.y - lo.y + 2.0 * pad
    )?;

    for strip in strips {
        writeln!(out, "<g id=\"{}\">", strip.name())?;
        let n = strip.positions().len();
        for i in (0..n).step_by(stride) {
            let a = flip(strip.point_at(i, strip.extent_lo()[i]));
            let b = flip(strip.point_at(i, strip.extent_hi()[i]));
            writeln!(
                out,
                "<line x1=\"{:.6}\" y1=\"{:.6}\" x2=\"{:.6}\" y2=\"{:.6}\" stroke=\"#999\" stroke-width=\"{:.6}\"/>",
                a.x, a.y, b.x, b.y,
                0.001 * span
            )?;
        }
        let mut polylines = vec![strip.boundary(false), strip.boundary(true)];
        polylines.push(strip.positions().to_vec());
        for line in polylines {
            write!(out, "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"{:.6}\" points=\"", 0.002 * span)?;
            for p in line.iter().chain(strip.is_closed().then_some(&line[0])) {
                let q = flip(*p);
                write!(out, "{:.6},{:.6} ", q.x, q.y)?;
            }
            writeln!(out, "\"/>")?;
        }
        writeln!(out, "</g>")?;
    }
    writeln!(out, "</svg>")?;
    Ok(())
}
