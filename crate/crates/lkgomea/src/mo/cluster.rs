//! Overlapping k-means-like clustering in normalized objective space.
//!
//! After Lloyd iterations place the centers, each cluster takes the
//! ceil((2/c)*n) solutions nearest its center, so clusters overlap; orphans
//! are attached to their nearest center. The cluster with the largest mean
//! value for objective i becomes that objective's single-objective cluster.

use crate::rng::Rng;
use crate::{Error, Result};
use rand::seq::SliceRandom;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClusterRole {
    SingleObjective(usize),
    Mixed,
}

#[derive(Clone, Debug)]
pub struct Cluster {
    pub members: Vec<usize>,
    /// mean raw fitness over the members
    pub mean: [f64; 2],
    pub role: ClusterRole,
}

#[derive(Clone, Debug)]
pub struct Clustering {
    pub clusters: Vec<Cluster>,
    /// for each solution, the containing cluster with the nearest center
    pub home: Vec<usize>,
}

fn normalize(fitness: &[[i64; 2]]) -> Vec<[f64; 2]> {
    let mut lo = fitness[0];
    let mut hi = fitness[0];
    for f in fitness {
        for j in 0..2 {
            lo[j] = lo[j].min(f[j]);
            hi[j] = hi[j].max(f[j]);
        }
    }
    fitness
        .iter()
        .map(|f| {
            let mut out = [0.5; 2];
            for j in 0..2 {
                let span = (hi[j] - lo[j]) as f64;
                if span > 0.0 {
                    out[j] = (f[j] - lo[j]) as f64 / span;
                }
            }
            out
        })
        .collect()
}

fn squared_distance(a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (a[0] - b[0], a[1] - b[1]);
    dx * dx + dy * dy
}

pub fn cluster_population(
    fitness: &[[i64; 2]],
    cluster_count: usize,
    rng: &mut Rng,
) -> Result<Clustering> {
    let n = fitness.len();
    if cluster_count < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 clusters, got {cluster_count}"
        )));
    }
    if n < cluster_count {
        return Err(Error::InvalidArgument(format!(
            "population of {n} cannot host {cluster_count} clusters"
        )));
    }
    let c = cluster_count;
    let points = normalize(fitness);

    // Lloyd iterations from c distinct random seeds
    let mut seeds: Vec<usize> = (0..n).collect();
    seeds.shuffle(rng);
    let mut centers: Vec<[f64; 2]> = seeds[..c].iter().map(|&i| points[i]).collect();
    let mut assignment = vec![0usize; n];
    for _ in 0..30 {
        let mut changed = false;
        for (i, p) in points.iter().enumerate() {
            let nearest = (0..c)
                .min_by(|&a, &b| {
                    squared_distance(*p, centers[a]).total_cmp(&squared_distance(*p, centers[b]))
                })
                .expect("c >= 2");
            if assignment[i] != nearest {
                assignment[i] = nearest;
                changed = true;
            }
        }
        for (k, center) in centers.iter_mut().enumerate() {
            let mine: Vec<&[f64; 2]> = points
                .iter()
                .zip(&assignment)
                .filter(|(_, &a)| a == k)
                .map(|(p, _)| p)
                .collect();
            if !mine.is_empty() {
                let inv = 1.0 / mine.len() as f64;
                *center = [
                    mine.iter().map(|p| p[0]).sum::<f64>() * inv,
                    mine.iter().map(|p| p[1]).sum::<f64>() * inv,
                ];
            }
        }
        if !changed {
            break;
        }
    }

    // overlapping membership: each center takes the m nearest solutions
    let m = (2 * n).div_ceil(c);
    let mut members: Vec<Vec<usize>> = Vec::with_capacity(c);
    for center in &centers {
        let mut by_distance: Vec<usize> = (0..n).collect();
        by_distance.sort_by(|&a, &b| {
            squared_distance(points[a], *center)
                .total_cmp(&squared_distance(points[b], *center))
                .then(a.cmp(&b))
        });
        by_distance.truncate(m);
        by_distance.sort_unstable();
        members.push(by_distance);
    }

    // every solution belongs somewhere: orphans join their nearest center
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, ms) in members.iter().enumerate() {
        for &i in ms {
            containing[i].push(k);
        }
    }
    for i in 0..n {
        if containing[i].is_empty() {
            let nearest = (0..c)
                .min_by(|&a, &b| {
                    squared_distance(points[i], centers[a])
                        .total_cmp(&squared_distance(points[i], centers[b]))
                })
                .expect("c >= 2");
            members[nearest].push(i);
            members[nearest].sort_unstable();
            containing[i].push(nearest);
        }
    }

    let home: Vec<usize> = (0..n)
        .map(|i| {
            *containing[i]
                .iter()
                .min_by(|&&a, &&b| {
                    squared_distance(points[i], centers[a])
                        .total_cmp(&squared_distance(points[i], centers[b]))
                        .then(a.cmp(&b))
                })
                .expect("every solution is contained somewhere")
        })
        .collect();

    let means: Vec<[f64; 2]> = members
        .iter()
        .map(|ms| {
            let inv = 1.0 / ms.len() as f64;
            [
                ms.iter().map(|&i| fitness[i][0] as f64).sum::<f64>() * inv,
                ms.iter().map(|&i| fitness[i][1] as f64).sum::<f64>() * inv,
            ]
        })
        .collect();

    // exactly one single-objective cluster per objective, distinct clusters
    let argmax = |objective: usize, exclude: Option<usize>| -> usize {
        (0..c)
            .filter(|&k| Some(k) != exclude)
            .max_by(|&a, &b| {
                means[a][objective]
                    .total_cmp(&means[b][objective])
                    .then(b.cmp(&a)) // ties to the lowest index
            })
            .expect("at least 2 clusters")
    };
    let so0 = argmax(0, None);
    let so1 = argmax(1, Some(so0));

    let clusters: Vec<Cluster> = members
        .into_iter()
        .zip(means)
        .enumerate()
        .map(|(k, (members, mean))| Cluster {
            members,
            mean,
            role: if k == so0 {
                ClusterRole::SingleObjective(0)
            } else if k == so1 {
                ClusterRole::SingleObjective(1)
            } else {
                ClusterRole::Mixed
            },
        })
        .collect();
    Ok(Clustering { clusters, home })
}
