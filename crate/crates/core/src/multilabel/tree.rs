use serde::{Deserialize, Serialize};

use crate::dataset::MultiLabelDataset;
use crate::error::{Error, Result};

/// Maximum spanning tree over the labels, rooted at label 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DependencyTree {
    /// Undirected edges `(a, b, weight)` with `a < b`, in acceptance order.
    edges: Vec<(usize, usize, f64)>,
    root: usize,
    parents: Vec<Option<usize>>,
    /// Breadth-first order from the root; children by ascending label.
    order: Vec<usize>,
}

impl DependencyTree {
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, label: usize) -> Option<usize> {
        self.parents[label]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parents
    }

    /// Labels in an order where every parent precedes its children.
    pub fn topological_order(&self) -> &[usize] {
        &self.order
    }

    pub fn label_count(&self) -> usize {
        self.parents.len()
    }

    /// Tree over a single label: no edges.
    pub(crate) fn single() -> Self {
        DependencyTree {
            edges: Vec::new(),
            root: 0,
            parents: vec![None],
            order: vec![0],
        }
    }
}

/// Normalized mutual information of two binary columns,
/// `I(a;b) / sqrt(H(a) H(b))`; 0 when either column is constant.
pub fn normalized_mutual_information(a: &[bool], b: &[bool]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len() as f64;
    if n == 0.0 {
        return 0.0;
    }
    let mut joint = [[0.0f64; 2]; 2];
    for (&x, &y) in a.iter().zip(b) {
        joint[x as usize][y as usize] += 1.0;
    }
    let pa = [
        (joint[0][0] + joint[0][1]) / n,
        (joint[1][0] + joint[1][1]) / n,
    ];
    let pb = [
        (joint[0][0] + joint[1][0]) / n,
        (joint[0][1] + joint[1][1]) / n,
    ];
    let h = |p: &[f64; 2]| -> f64 { p.iter().filter(|&&q| q > 0.0).map(|q| -q * q.ln()).sum() };
    let (ha, hb) = (h(&pa), h(&pb));
    if ha <= 0.0 || hb <= 0.0 {
        return 0.0;
    }
    let mut mi = 0.0;
    for x in 0..2 {
        for y in 0..2 {
            let pxy = joint[x][y] / n;
            if pxy > 0.0 {
                mi += pxy * (pxy / (pa[x] * pb[y])).ln();
            }
        }
    }
    (mi / (ha * hb).sqrt()).clamp(0.0, 1.0)
}

/// Maximum spanning tree of the label graph weighted by normalized mutual
/// information. Equal weights are broken by the lexicographically smaller
/// `(a, b)` pair.
pub fn build_dependency_tree(ds: &MultiLabelDataset) -> Result<DependencyTree> {
    let k = ds.label_count();
    if k < 2 {
        return Err(Error::Training(format!(
            "a dependency tree needs at least 2 labels, got {k}"
        )));
    }
    let columns: Vec<Vec<bool>> = (0..k)
        .map(|j| (0..ds.len()).map(|i| ds.label(i, j)).collect())
        .collect();
    let mut candidates = Vec::with_capacity(k * (k - 1) / 2);
    for a in 0..k {
        for b in a + 1..k {
            candidates.push((
                a,
                b,
                normalized_mutual_information(&columns[a], &columns[b]),
            ));
        }
    }
    candidates.sort_by(|x, y| y.2.total_cmp(&x.2).then((x.0, x.1).cmp(&(y.0, y.1))));

    let mut component: Vec<usize> = (0..k).collect();
    fn find(c: &mut [usize], mut x: usize) -> usize {
        while c[x] != x {
            c[x] = c[c[x]];
            x = c[x];
        }
        x
    }
    let mut edges = Vec::with_capacity(k - 1);
    for (a, b, w) in candidates {
        let (ra, rb) = (find(&mut component, a), find(&mut component, b));
        if ra != rb {
            component[ra] = rb;
            edges.push((a, b, w));
            if edges.len() == k - 1 {
                break;
            }
        }
    }

    let mut neighbours = vec![Vec::new(); k];
    for &(a, b, _) in &edges {
        neighbours[a].push(b);
        neighbours[b].push(a);
    }
    neighbours.iter_mut().for_each(|n| n.sort_unstable());
    let root = 0;
    let mut parents = vec![None; k];
    let mut seen = vec![false; k];
    let mut order = vec![root];
    seen[root] = true;
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        for &v in &neighbours[u] {
            if !seen[v] {
                seen[v] = true;
                parents[v] = Some(u);
                order.push(v);
            }
        }
    }
    Ok(DependencyTree {
        edges,
        root,
        parents,
        order,
    })
}
