//! Brute-force recounts of the small enumerations. Everything here works on
//! raw relation tables and shares no code with the enumerator.

use std::collections::BTreeMap;

use stackres::enumerate::{census, enum_finspaces, enum_groupoids, labeled_preorders, Bounds};

type Rel = Vec<Vec<bool>>;

fn all_preorders(n: usize) -> Vec<Rel> {
    let off: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .collect();
    let mut out = Vec::new();
    for bits in 0u64..(1 << off.len()) {
        let mut r = vec![vec![false; n]; n];
        for (i, row) in r.iter_mut().enumerate() {
            row[i] = true;
        }
        for (k, &(i, j)) in off.iter().enumerate() {
            r[i][j] = bits >> k & 1 == 1;
        }
        let transitive =
            (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(r[i][j] && r[j][k]) || r[i][k])));
        if transitive {
            out.push(r);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn homeomorphic(a: &Rel, b: &Rel) -> bool {
    let n = a.len();
    permutations(n)
        .iter()
        .any(|p| (0..n).all(|i| (0..n).all(|j| a[i][j] == b[p[i]][p[j]])))
}

#[test]
fn labeled_preorder_counts() {
    for n in 0..=4 {
        assert_eq!(
            labeled_preorders(n).unwrap().len(),
            all_preorders(n).len(),
            "n = {n}"
        );
    }
}

#[test]
fn preorders_up_to_homeomorphism() {
    for n in 0..=4 {
        let mut reps: Vec<Rel> = Vec::new();
        for r in all_preorders(n) {
            if !reps.iter().any(|q| homeomorphic(q, &r)) {
                reps.push(r);
            }
        }
        assert_eq!(enum_finspaces(n).unwrap().len(), reps.len(), "n = {n}");
    }
}

/// An algebraic groupoid given by tables.
struct Alg {
    objects: usize,
    src: Vec<usize>,
    tgt: Vec<usize>,
    unit: Vec<usize>,
    inv: Vec<usize>,
    mul: Vec<Vec<Option<usize>>>,
}

/// Disjoint union of transitive components `(objects, group table)`; the
/// arrows of a component are triples `(i, h, j)` from `i` to `j`.
fn build(components: &[(usize, Vec<Vec<usize>>)]) -> Alg {
    let mut arrows = Vec::new();
    let mut base = 0;
    for (c, (k, table)) in components.iter().enumerate() {
        for i in 0..*k {
            for h in 0..table.len() {
                for j in 0..*k {
                    arrows.push((c, base + i, h, base + j));
                }
            }
        }
        base += k;
    }
    let index = |c: usize, i: usize, h: usize, j: usize| {
        arrows.iter().position(|&a| a == (c, i, h, j)).unwrap()
    };
    let identity = |table: &Vec<Vec<usize>>| {
        (0..table.len())
            .find(|&e| (0..table.len()).all(|x| table[e][x] == x))
            .unwrap()
    };
    let n = arrows.len();
    let mut alg = Alg {
        objects: base,
        src: arrows.iter().map(|a| a.1).collect(),
        tgt: arrows.iter().map(|a| a.3).collect(),
        unit: vec![0; base],
        inv: vec![0; n],
        mul: vec![vec![None; n]; n],
    };
    for (x, &(c, i, h, j)) in arrows.iter().enumerate() {
        let table = &components[c].1;
        let e = identity(table);
        if i == j && h == e {
            alg.unit[i] = x;
        }
        let hi = (0..table.len()).find(|&g| table[h][g] == e).unwrap();
        alg.inv[x] = index(c, j, hi, i);
        for (y, &(c2, i2, h2, j2)) in arrows.iter().enumerate() {
            if c2 == c && i2 == j {
                alg.mul[x][y] = Some(index(c, i, table[h][h2], j2));
            }
        }
    }
    alg
}

fn cyclic(n: usize) -> Vec<Vec<usize>> {
    (0..n)
        .map(|a| (0..n).map(|b| (a + b) % n).collect())
        .collect()
}

fn klein() -> Vec<Vec<usize>> {
    (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect()
}

fn monotone(dom: &Rel, cod: &Rel, f: &[usize]) -> bool {
    (0..dom.len()).all(|i| (0..dom.len()).all(|j| !dom[i][j] || cod[f[i]][f[j]]))
}

/// `f(up x) = up f(x)` for every `x`.
fn lifting(dom: &Rel, cod: &Rel, f: &[usize]) -> bool {
    (0..dom.len()).all(|x| {
        (0..cod.len()).all(|y| !cod[f[x]][y] || (0..dom.len()).any(|z| dom[x][z] && f[z] == y))
    })
}

fn is_topological(g: &Alg, arrows: &Rel, objects: &Rel) -> bool {
    let n = arrows.len();
    if !monotone(arrows, objects, &g.src)
        || !monotone(arrows, objects, &g.tgt)
        || !monotone(objects, arrows, &g.unit)
        || !monotone(arrows, arrows, &g.inv)
        || !lifting(arrows, objects, &g.src)
        || !lifting(arrows, objects, &g.tgt)
    {
        return false;
    }
    for a in 0..n {
        for b in 0..n {
            let Some(ab) = g.mul[a][b] else { continue };
            for c in 0..n {
                for d in 0..n {
                    if let Some(cd) = g.mul[c][d] {
                        if arrows[a][c] && arrows[b][d] && !arrows[ab][cd] {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

struct Topological<'a> {
    alg: &'a Alg,
    arrows: Rel,
    objects: Rel,
}

fn isomorphic(x: &Topological, y: &Topological) -> bool {
    let (gx, gy) = (x.alg, y.alg);
    let n = x.arrows.len();
    if n != y.arrows.len() || gx.objects != gy.objects {
        return false;
    }
    permutations(n).iter().any(|p| {
        (0..n).all(|a| {
            (0..n).all(|b| {
                x.arrows[a][b] == y.arrows[p[a]][p[b]]
                    && gx.mul[a][b].map(|c| p[c]) == gy.mul[p[a]][p[b]]
            })
        }) && (0..gx.objects).all(|m| {
            let m2 = gy.src[p[gx.unit[m]]];
            p[gx.unit[m]] == gy.unit[m2]
                && (0..gx.objects).all(|k| x.objects[m][k] == y.objects[m2][gy.src[p[gx.unit[k]]]])
        })
    })
}

#[test]
fn groupoids_with_two_objects_and_four_arrows() {
    let algebraic: Vec<Alg> = vec![
        build(&[(1, cyclic(1))]),
        build(&[(1, cyclic(2))]),
        build(&[(1, cyclic(3))]),
        build(&[(1, cyclic(4))]),
        build(&[(1, klein())]),
        build(&[(1, cyclic(1)), (1, cyclic(1))]),
        build(&[(1, cyclic(1)), (1, cyclic(2))]),
        build(&[(1, cyclic(1)), (1, cyclic(3))]),
        build(&[(1, cyclic(2)), (1, cyclic(2))]),
        build(&[(2, cyclic(1))]),
    ];
    let mut reps: Vec<Topological> = Vec::new();
    for g in &algebraic {
        let object_orders = all_preorders(g.objects);
        for arrows in all_preorders(g.src.len()) {
            for objects in &object_orders {
                if !is_topological(g, &arrows, objects) {
                    continue;
                }
                let t = Topological {
                    alg: g,
                    arrows: arrows.clone(),
                    objects: objects.clone(),
                };
                if !reps.iter().any(|r| isomorphic(r, &t)) {
                    reps.push(t);
                }
            }
        }
    }
    let mut want: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for r in &reps {
        *want.entry((r.alg.objects, r.arrows.len())).or_default() += 1;
    }
    let bounds = Bounds {
        max_objects: 2,
        max_arrows: 4,
        ..Bounds::default()
    };
    let got: BTreeMap<(usize, usize), usize> = census(&enum_groupoids(&bounds).unwrap())
        .into_iter()
        .collect();
    assert_eq!(got.values().sum::<usize>(), 46);
    assert_eq!(got, want);
}
