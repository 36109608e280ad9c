//! Box-level oracle for component removal and attachment. A K-graph is
//! viewed as the diagram of its column heights; components are ribbons of
//! `n` boxes found by brute force, independently of the profile surgery.

use std::collections::BTreeSet;

use slcoset::kgraphs::{graph_from_path, InterpolatingMatrix, KGraph};
use slcoset::paths::{enumerate_paths, PathClass};
use slcoset::sectors::{
    attach_component, find_candidates, find_vacancies, is_parent, leading_candidate,
    parent_from_label, reduce, remove_component, ParentLabel,
};

const GRID: [(usize, usize); 3] = [(2, 10), (3, 10), (4, 8)];

fn heights(g: &KGraph) -> Vec<usize> {
    g.matrix().column_heights()
}

/// Inverse of [`heights`]: runs of equal height become plains.
fn graph_from_heights(n: usize, cols: &[usize], length: usize, k: usize) -> Option<KGraph> {
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let nonzero: Vec<usize> = cols.iter().copied().take_while(|&h| h > 0).collect();
    if cols[nonzero.len()..].iter().any(|&h| h > 0) {
        return None;
    }
    let mut t = 0;
    while t < nonzero.len() {
        let h = nonzero[t];
        let run = nonzero[t..].iter().take_while(|&&x| x == h).count();
        let next = nonzero.get(t + run).copied().unwrap_or(0);
        pairs.push((run, h - next));
        t += run;
    }
    let matrix = InterpolatingMatrix::new(n, &pairs).ok()?;
    KGraph::admissible(matrix, length, k).ok()
}

/// The difference `outer − inner` if it is a ribbon: column intervals that
/// chain by sharing exactly one row. Returns `(rows, columns)` of the ribbon.
fn ribbon_shape(inner: &[usize], outer: &[usize]) -> Option<(usize, usize)> {
    let w = inner.len().max(outer.len());
    let at = |v: &[usize], c: usize| v.get(c).copied().unwrap_or(0);
    let cols: Vec<usize> = (0..w).filter(|&c| at(outer, c) != at(inner, c)).collect();
    if cols.is_empty() || (0..w).any(|c| at(outer, c) < at(inner, c)) {
        return None;
    }
    if cols.windows(2).any(|p| p[1] != p[0] + 1) {
        return None;
    }
    for p in cols.windows(2) {
        let (left, right) = (p[0], p[1]);
        if at(outer, right) != at(inner, left) + 1 {
            return None;
        }
    }
    let top = at(outer, cols[0]);
    let bottom = at(inner, *cols.last().unwrap());
    Some((top - bottom, cols.len()))
}

/// Every diagram obtained from `cols` by adding an `n`-box ribbon, with the
/// number of rows the ribbon spans. Inside a ribbon, column `c + 1` must end
/// exactly one row below where column `c` started, which fixes all heights
/// but the first column's.
fn add_ribbons(cols: &[usize], n: usize) -> Vec<(Vec<usize>, usize)> {
    let width = cols.len() + n;
    let base: Vec<usize> = (0..width)
        .map(|c| cols.get(c).copied().unwrap_or(0))
        .collect();
    let mut out = Vec::new();
    for start in 0..width {
        for last in start..width.min(start + n) {
            let mut outer = base.clone();
            for c in start..last {
                outer[c + 1] = base[c] + 1;
            }
            let rest: usize = (start + 1..=last).map(|c| outer[c] - base[c]).sum();
            if rest >= n {
                continue;
            }
            outer[start] = base[start] + n - rest;
            let monotone = outer.windows(2).all(|p| p[0] >= p[1]);
            if let (true, Some((rows, _))) = (monotone, ribbon_shape(&base, &outer)) {
                while outer.last() == Some(&0) {
                    outer.pop();
                }
                out.push((outer, rows));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Every diagram obtained from `cols` by removing an `n`-box ribbon.
fn remove_ribbons(cols: &[usize], n: usize) -> Vec<(Vec<usize>, usize)> {
    let width = cols.len();
    let mut out = Vec::new();
    for start in 0..width {
        for last in start..width.min(start + n) {
            let mut inner = cols.to_vec();
            for c in start..last {
                match cols[c + 1].checked_sub(1) {
                    Some(h) => inner[c] = h,
                    None => inner[c] = usize::MAX,
                }
            }
            if inner[start..last].contains(&usize::MAX) {
                continue;
            }
            let taken: usize = (start..last)
                .map(|c| cols[c].saturating_sub(inner[c]))
                .sum();
            if (start..last).any(|c| inner[c] >= cols[c]) || taken >= n || cols[last] < n - taken {
                continue;
            }
            inner[last] = cols[last] - (n - taken);
            let monotone = inner.windows(2).all(|p| p[0] >= p[1]);
            if let (true, Some((rows, _))) = (monotone, ribbon_shape(&inner, cols)) {
                out.push((trimmed(inner), rows));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn graphs(n: usize, lmax: usize) -> Vec<KGraph> {
    let mut out = Vec::new();
    for k in 0..n {
        let class = PathClass::new(n, 0, 0, k as i64).unwrap();
        for l in 0..=lmax {
            out.extend(enumerate_paths(&class, l).iter().map(graph_from_path));
        }
    }
    out
}

fn trimmed(mut v: Vec<usize>) -> Vec<usize> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn parent_labels_up_to(n: usize, max: usize) -> Vec<ParentLabel> {
    let vectors = (0..n - 1).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|v: Vec<usize>| {
                (0..=max).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect::<Vec<_>>()
    });
    vectors
        .into_iter()
        .map(|m| ParentLabel::from_multiplicities(n, m).unwrap())
        .collect()
}

#[test]
fn attachments_are_exactly_the_admissible_ribbons() {
    for (n, lmax) in GRID {
        for g in graphs(n, lmax) {
            for i in 1..n {
                let implemented: BTreeSet<KGraph> = find_vacancies(&g, i)
                    .iter()
                    .filter_map(|v| attach_component(&g, v).ok())
                    .collect();
                let boxed: BTreeSet<KGraph> = add_ribbons(&heights(&g), n)
                    .into_iter()
                    .filter(|(_, rows)| *rows == i)
                    .filter_map(|(h, _)| graph_from_heights(n, &h, g.length(), g.k()))
                    .filter(|h| (i + 1..n).all(|ip| find_candidates(h, ip).is_empty()))
                    .collect();
                assert_eq!(implemented, boxed, "n={n} i={i} g={g}");
            }
        }
    }
}

#[test]
fn removals_take_out_a_component_shaped_ribbon() {
    for (n, lmax) in GRID {
        for g in graphs(n, lmax) {
            for i in 1..n {
                for c in find_candidates(&g, i) {
                    assert_eq!(c.component.i, i);
                    let smaller = remove_component(&g, &c).unwrap();
                    assert!(smaller.is_admissible());
                    let shape = ribbon_shape(&heights(&smaller), &heights(&g));
                    assert_eq!(shape, Some((i, n - i + 1)), "n={n} g={g} {c:?}");
                }
            }
        }
    }
}

#[test]
fn boundary_width_plain_is_not_a_candidate() {
    // the width-4 plain with h = 1 holds a removable ribbon of one row,
    // but its width equals 2(n − h)
    let g = KGraph::admissible(
        InterpolatingMatrix::new(3, &[(2, 1), (4, 1), (1, 1)]).unwrap(),
        7,
        0,
    )
    .unwrap();
    let ribbons: Vec<Vec<usize>> = remove_ribbons(&heights(&g), 3)
        .into_iter()
        .filter(|(_, rows)| *rows == 1)
        .map(|(h, _)| h)
        .collect();
    assert!(ribbons.contains(&vec![3, 3, 2, 1, 1, 1, 1]));
    let removed: Vec<Vec<usize>> = find_candidates(&g, 1)
        .iter()
        .map(|c| heights(&remove_component(&g, c).unwrap()))
        .collect();
    assert!(!removed.contains(&vec![3, 3, 2, 1, 1, 1, 1]));
}

#[test]
fn every_reduction_step_is_undone_by_an_attachment() {
    for (n, lmax) in GRID {
        for g in graphs(n, lmax) {
            let mut cur = g.clone();
            for i in (1..n).rev() {
                while let Some(c) = leading_candidate(&cur, i) {
                    let next = remove_component(&cur, &c).unwrap();
                    let restored = find_vacancies(&next, i)
                        .iter()
                        .any(|v| attach_component(&next, v).ok().as_ref() == Some(&cur));
                    assert!(restored, "n={n} i={i} {cur} -> {next}");
                    cur = next;
                }
            }
            assert_eq!(is_parent(&cur), Some(reduce(&g).unwrap().label));
        }
    }
}

#[test]
fn parents_have_one_vacancy_per_component() {
    for n in 2..=5 {
        for lbl in parent_labels_up_to(n, 3) {
            let g = (0..200)
                .find_map(|l| parent_from_label(&lbl, l).ok())
                .expect("some length fits the parent");
            for i in 1..n {
                assert_eq!(
                    find_vacancies(&g, i).len(),
                    lbl.m_i(i),
                    "parent {lbl} i={i}"
                );
                assert!(find_candidates(&g, i).is_empty(), "parent {lbl} i={i}");
            }
        }
    }
}
