//! Brute-force boundary diameter oracle.
//!
//! Independent of the candidate enumeration in the library: the boundary is parametrized
//! by arc length with a sine-weighted slerp, distances use `acos` of the dot product, and
//! the best sampled pairs are polished by alternating golden-section searches.

#![allow(dead_code)]

use sphere_extremes::SphericalPolygon;

type V = [f64; 3];

fn dot(a: V, b: V) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn dist(a: V, b: V) -> f64 {
    dot(a, b).clamp(-1.0, 1.0).acos()
}

pub struct Boundary {
    verts: Vec<V>,
    lengths: Vec<f64>,
    pub perimeter: f64,
}

impl Boundary {
    pub fn new(poly: &SphericalPolygon) -> Self {
        let verts: Vec<V> = poly.vertices().iter().map(|v| v.to_array()).collect();
        let n = verts.len();
        let lengths: Vec<f64> = (0..n).map(|k| dist(verts[k], verts[(k + 1) % n])).collect();
        let perimeter = lengths.iter().sum();
        Boundary { verts, lengths, perimeter }
    }

    /// Boundary point at arc length `s` (taken modulo the perimeter).
    pub fn at(&self, s: f64) -> V {
        let mut s = s.rem_euclid(self.perimeter);
        let n = self.verts.len();
        for k in 0..n {
            let len = self.lengths[k];
            if s <= len || k + 1 == n {
                let (a, b) = (self.verts[k], self.verts[(k + 1) % n]);
                let t = (s / len).clamp(0.0, 1.0);
                let wa = ((1.0 - t) * len).sin() / len.sin();
                let wb = (t * len).sin() / len.sin();
                let p = [wa * a[0] + wb * b[0], wa * a[1] + wb * b[1], wa * a[2] + wb * b[2]];
                let norm = dot(p, p).sqrt();
                return [p[0] / norm, p[1] / norm, p[2] / norm];
            }
            s -= len;
        }
        unreachable!()
    }
}

fn golden_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..90 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    // Endpoints of the window are candidates too (kinks at vertices).
    [(lo, f(lo)), (hi, f(hi)), (c, fc), (d, fd)]
        .into_iter()
        .fold((lo, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc })
}

pub struct OracleResult {
    /// Best distance among the raw sample pairs.
    pub sampled: f64,
    /// Best distance after local refinement.
    pub refined: f64,
    pub pairs: usize,
}

/// Samples `points` boundary points (about `points^2 / 2` pairs), then refines the `top`
/// best pairs.
pub fn boundary_diameter_oracle(poly: &SphericalPolygon, points: usize, top: usize) -> OracleResult {
    let b = Boundary::new(poly);
    let h = b.perimeter / points as f64;
    let samples: Vec<V> = (0..points).map(|k| b.at(k as f64 * h)).collect();
    let mut best: Vec<(f64, usize, usize)> = Vec::new();
    let mut pairs = 0;
    for i in 0..points {
        for j in i + 1..points {
            pairs += 1;
            let d = dist(samples[i], samples[j]);
            if best.len() < top || d > best[best.len() - 1].0 {
                best.push((d, i, j));
                best.sort_by(|x, y| y.0.total_cmp(&x.0));
                best.truncate(top);
            }
        }
    }
    let sampled = best[0].0;
    let mut refined = sampled;
    for &(_, i, j) in &best {
        let (mut s1, mut s2) = (i as f64 * h, j as f64 * h);
        let mut cur = dist(b.at(s1), b.at(s2));
        for _ in 0..300 {
            let p2 = b.at(s2);
            let (n1, _) = golden_max(|s| dist(b.at(s), p2), s1 - h, s1 + h);
            s1 = n1;
            let p1 = b.at(s1);
            let (n2, v) = golden_max(|s| dist(p1, b.at(s)), s2 - h, s2 + h);
            s2 = n2;
            if v <= cur + 1e-16 {
                cur = cur.max(v);
                break;
            }
            cur = v;
        }
        refined = refined.max(cur);
    }
    OracleResult { sampled, refined, pairs }
}
