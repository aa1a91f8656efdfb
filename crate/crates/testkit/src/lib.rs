//! Brute-force reference implementations for the topocheck test suites.
//!
//! Everything here works on plain `(dims, data)` slices and deliberately
//! avoids the code paths of `topocheck-core`: adjacency is decided from
//! coordinate differences, components are found by recursive flood fill,
//! cells are enumerated into hash sets, and partition scores come straight
//! from their definitions.

use std::collections::{HashMap, HashSet};

use rand::Rng;

/// Coordinates of flat index `idx` in a row-major grid.
pub fn coords(dims: &[usize], mut idx: usize) -> Vec<usize> {
    let mut c = vec![0; dims.len()];
    for axis in (0..dims.len()).rev() {
        c[axis] = idx % dims[axis];
        idx /= dims[axis];
    }
    c
}

fn index(dims: &[usize], c: &[isize]) -> Option<usize> {
    let mut idx = 0usize;
    for (&v, &d) in c.iter().zip(dims) {
        if v < 0 || v as usize >= d {
            return None;
        }
        idx = idx * d + v as usize;
    }
    Some(idx)
}

/// Whether two distinct coordinates are neighbours: `all` uses the Chebyshev
/// ball, otherwise the Manhattan ball, both of radius 1.
pub fn adjacent(a: &[usize], b: &[usize], all: bool) -> bool {
    let diffs: Vec<usize> = a.iter().zip(b).map(|(&x, &y)| x.abs_diff(y)).collect();
    if diffs.iter().all(|&d| d == 0) {
        return false;
    }
    if all {
        diffs.iter().all(|&d| d <= 1)
    } else {
        diffs.iter().sum::<usize>() == 1
    }
}

fn neighbourhood(dims: &[usize], idx: usize, all: bool) -> Vec<usize> {
    let c = coords(dims, idx);
    let mut out = Vec::new();
    let n = dims.len() as u32;
    for code in 0..3usize.pow(n) {
        let mut k = code;
        let mut nb: Vec<isize> = Vec::with_capacity(dims.len());
        for &ci in &c {
            nb.push(ci as isize + (k % 3) as isize - 1);
            k /= 3;
        }
        if let Some(j) = index(dims, &nb) {
            if adjacent(&c, &coords(dims, j), all) {
                out.push(j);
            }
        }
    }
    out
}

fn flood(
    dims: &[usize],
    data: &[bool],
    value: bool,
    all: bool,
    at: usize,
    seen: &mut [bool],
    out: &mut Vec<usize>,
) {
    seen[at] = true;
    out.push(at);
    for j in neighbourhood(dims, at, all) {
        if !seen[j] && data[j] == value {
            flood(dims, data, value, all, j, seen, out);
        }
    }
}

/// Components of pixels equal to `value`, each a sorted list of flat
/// indices, ordered by first pixel.
pub fn components(dims: &[usize], data: &[bool], value: bool, all: bool) -> Vec<Vec<usize>> {
    let mut seen = vec![false; data.len()];
    let mut comps = Vec::new();
    for i in 0..data.len() {
        if data[i] == value && !seen[i] {
            let mut c = Vec::new();
            flood(dims, data, value, all, i, &mut seen, &mut c);
            c.sort_unstable();
            comps.push(c);
        }
    }
    comps
}

/// Component id of every pixel, both phases, ids in first-pixel order.
/// `fg_all` selects all-adjacency for the foreground and direct for the
/// background, or the reverse.
pub fn partition(dims: &[usize], data: &[bool], fg_all: bool) -> Vec<usize> {
    let mut comps = components(dims, data, true, fg_all);
    comps.extend(components(dims, data, false, !fg_all));
    comps.sort_by_key(|c| c[0]);
    let mut labels = vec![usize::MAX; data.len()];
    for (id, c) in comps.iter().enumerate() {
        for &p in c {
            labels[p] = id;
        }
    }
    labels
}

/// Mask surrounded by a one-pixel background frame.
pub fn pad(dims: &[usize], data: &[bool]) -> (Vec<usize>, Vec<bool>) {
    let new_dims: Vec<usize> = dims.iter().map(|d| d + 2).collect();
    let mut out = vec![false; new_dims.iter().product()];
    for (i, &v) in data.iter().enumerate() {
        let c: Vec<isize> = coords(dims, i).iter().map(|&x| x as isize + 1).collect();
        out[index(&new_dims, &c).unwrap()] = v;
    }
    (new_dims, out)
}

/// Background components that do not touch the outer frame.
pub fn holes(dims: &[usize], data: &[bool], fg_all: bool) -> Vec<Vec<usize>> {
    let touches = |c: &Vec<usize>| {
        c.iter().any(|&p| {
            coords(dims, p)
                .iter()
                .zip(dims)
                .any(|(&x, &d)| x == 0 || x + 1 == d)
        })
    };
    components(dims, data, false, !fg_all)
        .into_iter()
        .filter(|c| !touches(c))
        .collect()
}

/// Euler characteristic of the T-construction: distinct faces of all
/// foreground pixel cubes, in doubled coordinates.
pub fn euler_t(dims: &[usize], data: &[bool]) -> i64 {
    let mut cells: HashSet<Vec<usize>> = HashSet::new();
    let n = dims.len() as u32;
    for (i, &v) in data.iter().enumerate() {
        if !v {
            continue;
        }
        let c = coords(dims, i);
        for code in 0..3usize.pow(n) {
            let mut k = code;
            let cell: Vec<usize> = c
                .iter()
                .map(|&x| {
                    let off = k % 3;
                    k /= 3;
                    2 * x + off
                })
                .collect();
            cells.insert(cell);
        }
    }
    cells
        .iter()
        .map(|cell| {
            if cell.iter().filter(|&&x| x % 2 == 1).count() % 2 == 0 {
                1
            } else {
                -1
            }
        })
        .sum()
}

/// Euler characteristic of the V-construction: every cell of the pixel
/// lattice whose vertices are all foreground.
pub fn euler_v(dims: &[usize], data: &[bool]) -> i64 {
    let lattice: Vec<usize> = dims.iter().map(|&d| 2 * d - 1).collect();
    let total: usize = lattice.iter().product();
    let mut chi = 0i64;
    for cell_idx in 0..total {
        let cell = coords(&lattice, cell_idx);
        let odd: Vec<usize> = (0..cell.len()).filter(|&a| cell[a] % 2 == 1).collect();
        let all_fg = (0..1usize << odd.len()).all(|corner| {
            let v: Vec<isize> = cell
                .iter()
                .enumerate()
                .map(|(a, &x)| {
                    let base = (x / 2) as isize;
                    match odd.iter().position(|&o| o == a) {
                        Some(bit) if corner & (1 << bit) != 0 => base + 1,
                        _ => base,
                    }
                })
                .collect();
            data[index(dims, &v).unwrap()]
        });
        if all_fg {
            chi += if odd.len().is_multiple_of(2) { 1 } else { -1 };
        }
    }
    chi
}

/// Betti numbers by flood fill: `[b0, b1]` in 2D, `[b0, b1, b2]` in 3D,
/// with the 3D `b1` from the Euler characteristic of the matching construction.
pub fn betti(dims: &[usize], data: &[bool], fg_all: bool) -> Vec<usize> {
    let b0 = components(dims, data, true, fg_all).len();
    let (pd, pdata) = pad(dims, data);
    let top = holes(&pd, &pdata, fg_all).len();
    if dims.len() == 2 {
        vec![b0, top]
    } else {
        let chi = if fg_all {
            euler_t(dims, data)
        } else {
            euler_v(dims, data)
        };
        vec![b0, (b0 as i64 + top as i64 - chi) as usize, top]
    }
}

/// `H(X|Y) + H(Y|X)` in nats, from conditional probabilities.
pub fn voi(x: &[usize], y: &[usize]) -> f64 {
    let n = x.len() as f64;
    let mut joint: HashMap<(usize, usize), f64> = HashMap::new();
    let mut px: HashMap<usize, f64> = HashMap::new();
    let mut py: HashMap<usize, f64> = HashMap::new();
    for (&a, &b) in x.iter().zip(y) {
        *joint.entry((a, b)).or_default() += 1.0 / n;
        *px.entry(a).or_default() += 1.0 / n;
        *py.entry(b).or_default() += 1.0 / n;
    }
    let mut h = 0.0;
    for (&(a, b), &p) in &joint {
        h -= p * (p / py[&b]).ln();
        h -= p * (p / px[&a]).ln();
    }
    h
}

/// `(RI, ARI)` by explicit enumeration of pixel pairs.
pub fn rand_by_pairs(x: &[usize], y: &[usize]) -> (f64, f64) {
    let n = x.len();
    let (mut agree, mut both, mut sx, mut sy, mut pairs) = (0u64, 0u64, 0u64, 0u64, 0u64);
    for i in 0..n {
        for j in i + 1..n {
            let a = x[i] == x[j];
            let b = y[i] == y[j];
            pairs += 1;
            agree += (a == b) as u64;
            both += (a && b) as u64;
            sx += a as u64;
            sy += b as u64;
        }
    }
    let ri = agree as f64 / pairs as f64;
    let expected = sx as f64 * sy as f64 / pairs as f64;
    let max = (sx + sy) as f64 / 2.0;
    let ari = if max == expected {
        1.0
    } else {
        (both as f64 - expected) / (max - expected)
    };
    (ri, ari)
}

/// Uniform random mask with foreground probability `density`.
pub fn random_mask(rng: &mut impl Rng, dims: &[usize], density: f64) -> Vec<bool> {
    (0..dims.iter().product::<usize>())
        .map(|_| rng.gen_bool(density))
        .collect()
}

/// Random 2D dims with extents in `1..=max`.
pub fn random_dims_2d(rng: &mut impl Rng, max: usize) -> Vec<usize> {
    vec![rng.gen_range(1..=max), rng.gen_range(1..=max)]
}

/// Random 3D dims with extents in `1..=max`.
pub fn random_dims_3d(rng: &mut impl Rng, max: usize) -> Vec<usize> {
    vec![
        rng.gen_range(1..=max),
        rng.gen_range(1..=max),
        rng.gen_range(1..=max),
    ]
}

/// Whether a 2D mask has a 2x2 window with only diagonal contact, the sole
/// configuration in which direct and all adjacency disagree.
pub fn has_diagonal_contact(dims: &[usize], data: &[bool]) -> bool {
    let (r, c) = (dims[0], dims[1]);
    for y in 0..r.saturating_sub(1) {
        for x in 0..c.saturating_sub(1) {
            let a = data[y * c + x];
            let b = data[y * c + x + 1];
            let d = data[(y + 1) * c + x];
            let e = data[(y + 1) * c + x + 1];
            if a == e && b == d && a != b {
                return true;
            }
        }
    }
    false
}

/// Fills background pixels of diagonal-only windows until none remain.
pub fn remove_diagonal_contacts(dims: &[usize], data: &mut [bool]) {
    let (r, c) = (dims[0], dims[1]);
    loop {
        let mut changed = false;
        for y in 0..r.saturating_sub(1) {
            for x in 0..c.saturating_sub(1) {
                let idx = [
                    y * c + x,
                    y * c + x + 1,
                    (y + 1) * c + x,
                    (y + 1) * c + x + 1,
                ];
                let [a, b, d, e] = idx.map(|i| data[i]);
                if a == e && b == d && a != b {
                    let fill = if a { idx[1] } else { idx[0] };
                    data[fill] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            return;
        }
    }
}

/// Whether two label vectors describe the same partition up to renaming.
pub fn same_partition(x: &[usize], y: &[usize]) -> bool {
    let mut fwd: HashMap<usize, usize> = HashMap::new();
    let mut bwd: HashMap<usize, usize> = HashMap::new();
    x.iter()
        .zip(y)
        .all(|(&a, &b)| *fwd.entry(a).or_insert(b) == b && *bwd.entry(b).or_insert(a) == a)
}
