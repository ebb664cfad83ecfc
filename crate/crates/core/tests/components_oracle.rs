use std::collections::VecDeque;

use qagait_core::silcore::{connected_components, moments, Connectivity};
use qagait_core::Silhouette;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Breadth-first flood fill; labels in discovery order of a row-major scan.
fn flood_fill(sil: &Silhouette, eight: bool) -> (Vec<u32>, Vec<usize>) {
    let (h, w) = (sil.height(), sil.width());
    let mut labels = vec![0u32; h * w];
    let mut areas = Vec::new();
    let mut offsets = vec![(-1i64, 0i64), (1, 0), (0, -1), (0, 1)];
    if eight {
        offsets.extend([(-1, -1), (-1, 1), (1, -1), (1, 1)]);
    }
    for start in 0..h * w {
        if !sil.mask()[start] || labels[start] != 0 {
            continue;
        }
        let id = areas.len() as u32 + 1;
        let mut area = 0;
        let mut queue = VecDeque::from([start]);
        labels[start] = id;
        while let Some(i) = queue.pop_front() {
            area += 1;
            let (x, y) = ((i % w) as i64, (i / w) as i64);
            for (dx, dy) in &offsets {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                    continue;
                }
                let j = ny as usize * w + nx as usize;
                if sil.mask()[j] && labels[j] == 0 {
                    labels[j] = id;
                    queue.push_back(j);
                }
            }
        }
        areas.push(area);
    }
    (labels, areas)
}

fn random_grid(rng: &mut ChaCha8Rng) -> Silhouette {
    let density = rng.random_range(0.2..0.7);
    Silhouette::from_fn(64, 44, |_, _| rng.random_bool(density))
}

#[test]
fn matches_flood_fill_on_random_grids() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..200 {
        let grid = random_grid(&mut rng);
        for (conn, eight) in [(Connectivity::Four, false), (Connectivity::Eight, true)] {
            let got = connected_components(&grid, conn);
            let (labels, areas) = flood_fill(&grid, eight);
            assert_eq!(got.labels(), &labels[..], "trial {trial} {conn:?}");
            assert_eq!(got.component_areas(), &areas[..], "trial {trial} {conn:?}");
        }
    }
}

#[test]
fn moments_are_a_function_of_the_mask_alone() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let grid = random_grid(&mut rng);
    let base = moments(&grid).unwrap();
    // rebuild the same mask by setting pixels in a shuffled order
    let mut coords: Vec<(usize, usize)> = grid.foreground().collect();
    for i in (1..coords.len()).rev() {
        coords.swap(i, rng.random_range(0..=i));
    }
    let mut rebuilt = Silhouette::blank(64, 44);
    for (x, y) in coords {
        rebuilt.set(x, y, true);
    }
    assert_eq!(moments(&rebuilt).unwrap(), base);
}
