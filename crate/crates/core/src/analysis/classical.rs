use serde::{Deserialize, Serialize};

use super::FidelityTable;

/// Relative tolerance under which two magnitudes count as tied.
pub const TIE_TOL: f64 = 1e-12;

/// Phaseless reading of a gate: `⟨y|U_{|f|}|x⟩ = |f_{x→y}|`, its nearest
/// permutation and how far it is from that permutation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalGate {
    /// `magnitudes[y][x] = |f_{x→y}|`.
    pub magnitudes: Vec<Vec<f64>>,
    /// `permutation[x]` is the output assigned to input `x`.
    pub permutation: Vec<usize>,
    /// `max_x (1 − |f_{x→perm(x)}|²)`.
    pub max_deviation: f64,
    /// Mean over inputs of `1 − |f_{x→perm(x)}|²`.
    pub average_failure: f64,
    /// Inputs whose largest output magnitude was tied; resolved towards the
    /// lexicographically smallest output.
    pub ties: Vec<usize>,
    /// True when the per-input maxima collided and an optimal assignment
    /// was needed.
    pub used_assignment: bool,
}

impl ClassicalGate {
    pub fn success(&self, x: usize) -> f64 {
        self.magnitudes[self.permutation[x]][x].powi(2)
    }
}

pub fn classical_gate(table: &FidelityTable) -> ClassicalGate {
    let dim = table.dim();
    let magnitudes: Vec<Vec<f64>> =
        (0..dim).map(|y| (0..dim).map(|x| table.f[(y, x)].norm()).collect()).collect();

    let mut permutation = Vec::with_capacity(dim);
    let mut ties = Vec::new();
    for x in 0..dim {
        let best = (0..dim).map(|y| magnitudes[y][x]).fold(0.0, f64::max);
        let tol = TIE_TOL * best.max(f64::MIN_POSITIVE);
        let winners: Vec<usize> = (0..dim).filter(|&y| best - magnitudes[y][x] <= tol).collect();
        if winners.len() > 1 {
            ties.push(x);
        }
        permutation.push(winners[0]);
    }

    let mut seen = vec![false; dim];
    let collides = permutation.iter().any(|&y| std::mem::replace(&mut seen[y], true));
    if collides {
        let weight: Vec<Vec<f64>> = (0..dim).map(|x| (0..dim).map(|y| magnitudes[y][x]).collect()).collect();
        permutation = max_weight_assignment(&weight);
    }

    let fail: Vec<f64> = (0..dim).map(|x| 1.0 - magnitudes[permutation[x]][x].powi(2)).collect();
    ClassicalGate {
        max_deviation: fail.iter().cloned().fold(0.0, f64::max),
        average_failure: fail.iter().sum::<f64>() / dim as f64,
        magnitudes,
        permutation,
        ties,
        used_assignment: collides,
    }
}

/// Hungarian algorithm maximizing `Σ_x w[x][σ(x)]`; returns σ.
pub fn max_weight_assignment(w: &[Vec<f64>]) -> Vec<usize> {
    let n = w.len();
    let big = w.iter().flatten().cloned().fold(0.0, f64::max);
    // Minimize cost = big − w with 1-based potentials.
    let cost = |i: usize, j: usize| big - w[i - 1][j - 1];
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0, j) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut out = vec![0; n];
    for j in 1..=n {
        out[p[j] - 1] = j - 1;
    }
    out
}
