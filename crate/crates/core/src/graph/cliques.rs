use super::{Graph, VertexSet};

/// All maximal cliques, each once, sorted lexicographically by member list.
///
/// Bron–Kerbosch with Tomita pivoting inside a degeneracy-ordered outer loop.
pub fn enumerate_maximal_cliques(g: &Graph) -> Vec<VertexSet> {
    let n = g.order();
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let order = degeneracy_order(g);
    let mut position = vec![0; n];
    for (k, &v) in order.iter().enumerate() {
        position[v] = k;
    }
    for &v in &order {
        let mut later = VertexSet::empty(n);
        let mut earlier = VertexSet::empty(n);
        for u in g.neighbors(v).iter() {
            if position[u] > position[v] {
                later.insert(u);
            } else {
                earlier.insert(u);
            }
        }
        let mut r = VertexSet::empty(n);
        r.insert(v);
        expand(g, &mut r, later, earlier, &mut out);
    }
    out.sort_by(|a, b| a.iter().cmp(b.iter()));
    out
}

fn expand(g: &Graph, r: &mut VertexSet, mut p: VertexSet, mut x: VertexSet, out: &mut Vec<VertexSet>) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(r.clone());
        }
        return;
    }
    // pivot maximizing |P ∩ N(u)| over P ∪ X, lowest index on ties
    let pivot = p
        .union(&x)
        .iter()
        .max_by(|&a, &b| {
            let da = g.neighbors(a).intersection_len(&p);
            let db = g.neighbors(b).intersection_len(&p);
            da.cmp(&db).then(b.cmp(&a))
        })
        .expect("P is nonempty");
    let candidates = p.difference(g.neighbors(pivot));
    for v in candidates.iter() {
        let nv = g.neighbors(v);
        r.insert(v);
        expand(g, r, p.intersection(nv), x.intersection(nv), out);
        r.remove(v);
        p.remove(v);
        x.insert(v);
    }
}

/// Repeatedly removes a minimum-degree vertex (lowest index on ties).
fn degeneracy_order(g: &Graph) -> Vec<usize> {
    let n = g.order();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (degree[v], v))
            .expect("vertices remain");
        removed[v] = true;
        order.push(v);
        for u in g.neighbors(v).iter() {
            if !removed[u] {
                degree[u] -= 1;
            }
        }
    }
    order
}

/// Maximal stable sets of `g`, i.e. the maximal cliques of its complement.
pub fn maximal_stable_sets(g: &Graph) -> Vec<VertexSet> {
    enumerate_maximal_cliques(&g.complement())
}
