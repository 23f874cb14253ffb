use super::Graph;
use crate::error::{Error, Result};

pub const ISOMORPHISM_CAP: usize = 16;

/// Searches for an adjacency-preserving bijection (weights ignored).
///
/// Returns `Some(map)` with `map[v]` the image in `h` of vertex `v` of `g`.
pub fn is_isomorphic(g: &Graph, h: &Graph) -> Result<Option<Vec<usize>>> {
    for x in [g, h] {
        if x.order() > ISOMORPHISM_CAP {
            return Err(Error::CapExceeded {
                op: "is_isomorphic",
                n: x.order(),
                cap: ISOMORPHISM_CAP,
            });
        }
    }
    let n = g.order();
    if n != h.order() || g.edge_count() != h.edge_count() {
        return Ok(None);
    }
    let (cg, ch) = joint_refinement(g, h);
    let mut hist_g = cg.clone();
    let mut hist_h = ch.clone();
    hist_g.sort_unstable();
    hist_h.sort_unstable();
    if hist_g != hist_h {
        return Ok(None);
    }
    // map the most constrained vertices first: rare colours, then high degree
    let mut order: Vec<usize> = (0..n).collect();
    let freq = |c: usize| cg.iter().filter(|&&x| x == c).count();
    order.sort_by_key(|&v| (freq(cg[v]), std::cmp::Reverse(g.degree(v)), v));

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if extend(g, h, &cg, &ch, &order, 0, &mut map, &mut used) {
        Ok(Some(map))
    } else {
        Ok(None)
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    g: &Graph,
    h: &Graph,
    cg: &[usize],
    ch: &[usize],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&v) = order.get(depth) else {
        return true;
    };
    for t in 0..h.order() {
        if used[t] || cg[v] != ch[t] {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&u| g.adjacent(u, v) == h.adjacent(map[u], t));
        if !consistent {
            continue;
        }
        map[v] = t;
        used[t] = true;
        if extend(g, h, cg, ch, order, depth + 1, map, used) {
            return true;
        }
        used[t] = false;
        map[v] = usize::MAX;
    }
    false
}

/// 1-dimensional Weisfeiler–Leman colouring computed on both graphs with a
/// shared palette, so equal colours are comparable across the two.
fn joint_refinement(g: &Graph, h: &Graph) -> (Vec<usize>, Vec<usize>) {
    let n = g.order();
    let mut cg = vec![0; n];
    let mut ch = vec![0; n];
    loop {
        let signature = |x: &Graph, c: &[usize], v: usize| {
            let mut nb: Vec<usize> = x.neighbors(v).iter().map(|u| c[u]).collect();
            nb.sort_unstable();
            (c[v], nb)
        };
        let sg: Vec<_> = (0..n).map(|v| signature(g, &cg, v)).collect();
        let sh: Vec<_> = (0..n).map(|v| signature(h, &ch, v)).collect();
        let mut palette: Vec<_> = sg.iter().chain(&sh).cloned().collect();
        palette.sort();
        palette.dedup();
        let colour = |s: &(usize, Vec<usize>)| palette.binary_search(s).expect("signature in palette");
        let ng: Vec<_> = sg.iter().map(colour).collect();
        let nh: Vec<_> = sh.iter().map(colour).collect();
        let classes = |c: &[usize]| {
            let mut c = c.to_vec();
            c.sort_unstable();
            c.dedup();
            c.len()
        };
        let stable = classes(&ng) == classes(&cg) && classes(&nh) == classes(&ch);
        cg = ng;
        ch = nh;
        if stable {
            return (cg, ch);
        }
    }
}
