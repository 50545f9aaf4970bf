//! Test-only reference implementations. Nothing here calls into the
//! library's neighbor tables, rule or stepping code; it only reads raw
//! states and dimensions.

#![allow(dead_code)]

use lizard_ca::{Boundary, Field, LatticeKind, LatticeSpec, QuadNeighborhood};

/// Naive neighbor list for `(x, y)`, recomputed from scratch.
pub fn naive_neighbors(lat: &LatticeSpec, x: usize, y: usize) -> Vec<(usize, usize)> {
    let (w, h) = (lat.width() as i64, lat.height() as i64);
    let offsets: Vec<(i64, i64)> = match lat.kind() {
        LatticeKind::Hexagonal => {
            if y.is_multiple_of(2) {
                vec![(-1, 0), (1, 0), (-1, -1), (0, -1), (-1, 1), (0, 1)]
            } else {
                vec![(-1, 0), (1, 0), (0, -1), (1, -1), (0, 1), (1, 1)]
            }
        }
        LatticeKind::Quadratic => {
            let mut v = vec![(-1, 0), (1, 0), (0, -1), (0, 1)];
            if lat.quad_neighborhood() == QuadNeighborhood::Moore8 {
                v.extend([(-1, -1), (1, -1), (-1, 1), (1, 1)]);
            }
            v
        }
    };
    let mut out = Vec::new();
    for (dx, dy) in offsets {
        let (mut nx, mut ny) = (x as i64 + dx, y as i64 + dy);
        match lat.boundary() {
            Boundary::Periodic => {
                nx = ((nx % w) + w) % w;
                ny = ((ny % h) + h) % h;
            }
            Boundary::Clamped => {
                if nx < 0 || ny < 0 || nx >= w || ny >= h {
                    continue;
                }
            }
        }
        out.push((nx as usize, ny as usize));
    }
    out
}

/// Naive synchronous majority step: count every state, keep the center on
/// ties it takes part in, else the smallest tied state.
pub fn naive_step(field: &Field) -> Vec<u8> {
    let lat = field.lattice();
    let (w, h) = (lat.width(), lat.height());
    let old = field.states();
    let mut next = vec![0u8; w * h];
    for y in 0..h {
        for x in 0..w {
            let mut counts = vec![0usize; field.k()];
            for (nx, ny) in naive_neighbors(lat, x, y) {
                counts[old[ny * w + nx] as usize] += 1;
            }
            let max = *counts.iter().max().unwrap();
            let center = old[y * w + x];
            let tied: Vec<usize> = (0..field.k()).filter(|&v| counts[v] == max).collect();
            next[y * w + x] = if tied.contains(&(center as usize)) {
                center
            } else {
                tied[0] as u8
            };
        }
    }
    next
}

/// Number of cells with at least `threshold` neighbors in a state other
/// than their own.
pub fn cells_with_opposed_neighbors(field: &Field, threshold: usize) -> usize {
    let lat = field.lattice();
    let w = lat.width();
    let s = field.states();
    (0..lat.height())
        .flat_map(|y| (0..w).map(move |x| (x, y)))
        .filter(|&(x, y)| {
            naive_neighbors(lat, x, y)
                .into_iter()
                .filter(|&(nx, ny)| s[ny * w + nx] != s[y * w + x])
                .count()
                >= threshold
        })
        .count()
}

/// Parsed `(action, delta_n, cumulative_n)` rows of a trace CSV.
pub fn parse_trace_csv(bytes: &[u8]) -> Vec<(usize, usize, usize)> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(bytes);
    let headers = reader.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        ["action", "delta_n", "cumulative_n"]
    );
    reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            (
                r[0].parse().unwrap(),
                r[1].parse().unwrap(),
                r[2].parse().unwrap(),
            )
        })
        .collect()
}

pub fn all_lattice_configs(width: usize, height: usize) -> Vec<LatticeSpec> {
    let mut out = Vec::new();
    for boundary in [Boundary::Periodic, Boundary::Clamped] {
        out.push(LatticeSpec::hexagonal(width, height, boundary).unwrap());
        for nb in [QuadNeighborhood::VonNeumann4, QuadNeighborhood::Moore8] {
            out.push(LatticeSpec::quadratic(width, height, boundary, nb).unwrap());
        }
    }
    out
}
