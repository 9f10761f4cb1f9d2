//! Named small categories and diagrams used by the CLI suite and the tests:
//! the walking arrow, the span, semi-simplex truncations, the 3-horn and
//! 3-simplex, and the localization counterexample diagrams.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};

use alloc::vec::Vec;

use crate::diagcat::Diagram;
use crate::fincat::{FinCategory, InverseStructure, MorInfo};
use crate::logicat::{FinSetMap, FinSetObj};

fn cat(
    objects: &[&str],
    morphisms: &[(&str, &str, &str)],
    identities: &[(&str, &str)],
    composition: &[(&str, &str, &str)],
) -> FinCategory {
    FinCategory::new(
        objects.iter().map(|s| s.to_string()).collect(),
        morphisms
            .iter()
            .map(|(id, s, t)| MorInfo {
                id: id.to_string(),
                src: s.to_string(),
                tgt: t.to_string(),
            })
            .collect(),
        identities
            .iter()
            .map(|(o, m)| (o.to_string(), m.to_string()))
            .collect(),
        composition
            .iter()
            .map(|(g, f, gf)| ((g.to_string(), f.to_string()), gf.to_string()))
            .collect(),
    )
    .expect("corpus category")
}

/// `{a, b; f: a -> b}` with the forced composition table.
pub fn walking_arrow() -> FinCategory {
    cat(
        &["a", "b"],
        &[("id_a", "a", "a"), ("id_b", "b", "b"), ("f", "a", "b")],
        &[("a", "id_a"), ("b", "id_b")],
        &[
            ("id_a", "id_a", "id_a"),
            ("id_b", "id_b", "id_b"),
            ("f", "id_a", "f"),
            ("id_b", "f", "f"),
        ],
    )
}

/// Walking arrow with degrees `a: 1, b: 0`.
pub fn walking_arrow_inverse() -> InverseStructure {
    InverseStructure::new(
        walking_arrow(),
        [("a".to_string(), 1), ("b".to_string(), 0)]
            .into_iter()
            .collect(),
    )
    .unwrap()
}

/// Same shape, different names; for isomorphism-search tests.
pub fn renamed_walking_arrow() -> FinCategory {
    cat(
        &["x", "y"],
        &[("1x", "x", "x"), ("1y", "y", "y"), ("g", "x", "y")],
        &[("x", "1x"), ("y", "1y")],
        &[
            ("1x", "1x", "1x"),
            ("1y", "1y", "1y"),
            ("g", "1x", "g"),
            ("1y", "g", "g"),
        ],
    )
}

/// The span `0 <- 2 -> 1` with `p: 2 -> 0`, `q: 2 -> 1`.
pub fn span_category() -> FinCategory {
    cat(
        &["0", "1", "2"],
        &[
            ("id0", "0", "0"),
            ("id1", "1", "1"),
            ("id2", "2", "2"),
            ("p", "2", "0"),
            ("q", "2", "1"),
        ],
        &[("0", "id0"), ("1", "id1"), ("2", "id2")],
        &[
            ("id0", "id0", "id0"),
            ("id1", "id1", "id1"),
            ("id2", "id2", "id2"),
            ("p", "id2", "p"),
            ("id0", "p", "p"),
            ("q", "id2", "q"),
            ("id1", "q", "q"),
        ],
    )
}

/// The span with degrees `{0: 0, 1: 0, 2: 1}`.
pub fn span_inverse() -> InverseStructure {
    InverseStructure::new(
        span_category(),
        [
            ("0".to_string(), 0),
            ("1".to_string(), 0),
            ("2".to_string(), 1),
        ]
        .into_iter()
        .collect(),
    )
    .unwrap()
}

/// One object `*`, identity only.
pub fn terminal_category() -> FinCategory {
    named_terminal_category("*", "id_*")
}

pub fn named_terminal_category(obj: &str, id: &str) -> FinCategory {
    cat(&[obj], &[(id, obj, obj)], &[(obj, id)], &[(id, id, id)])
}

/// Identity-only category on the given objects.
pub fn discrete_category(objects: &[&str]) -> FinCategory {
    let morphisms: Vec<(String, String, String)> = objects
        .iter()
        .map(|o| (format!("id_{o}"), o.to_string(), o.to_string()))
        .collect();
    FinCategory::new(
        objects.iter().map(|s| s.to_string()).collect(),
        morphisms
            .iter()
            .map(|(id, s, t)| MorInfo {
                id: id.clone(),
                src: s.clone(),
                tgt: t.clone(),
            })
            .collect(),
        objects
            .iter()
            .map(|o| (o.to_string(), format!("id_{o}")))
            .collect(),
        morphisms
            .iter()
            .map(|(id, _, _)| ((id.clone(), id.clone()), id.clone()))
            .collect(),
    )
    .unwrap()
}

/// Two objects with a mutually inverse pair between them.
pub fn connected_two_object_groupoid() -> FinCategory {
    cat(
        &["u", "v"],
        &[
            ("id_u", "u", "u"),
            ("id_v", "v", "v"),
            ("s", "u", "v"),
            ("s_inv", "v", "u"),
        ],
        &[("u", "id_u"), ("v", "id_v")],
        &[
            ("id_u", "id_u", "id_u"),
            ("id_v", "id_v", "id_v"),
            ("s", "id_u", "s"),
            ("id_v", "s", "s"),
            ("s_inv", "id_v", "s_inv"),
            ("id_u", "s_inv", "s_inv"),
            ("s_inv", "s", "id_u"),
            ("s", "s_inv", "id_v"),
        ],
    )
}

/// One object with an order-2 automorphism.
pub fn one_object_z2() -> FinCategory {
    cat(
        &["x"],
        &[("e", "x", "x"), ("t", "x", "x")],
        &[("x", "e")],
        &[
            ("e", "e", "e"),
            ("e", "t", "t"),
            ("t", "e", "t"),
            ("t", "t", "e"),
        ],
    )
}

/// A degree-1 isomorphism pair `x ≅ y` over a degree-0 object `z`.
pub fn iso_pair_inverse() -> InverseStructure {
    let c = cat(
        &["x", "y", "z"],
        &[
            ("id_x", "x", "x"),
            ("id_y", "y", "y"),
            ("id_z", "z", "z"),
            ("u", "x", "y"),
            ("u_inv", "y", "x"),
            ("w", "x", "z"),
            ("v", "y", "z"),
        ],
        &[("x", "id_x"), ("y", "id_y"), ("z", "id_z")],
        &[
            ("id_x", "id_x", "id_x"),
            ("id_y", "id_y", "id_y"),
            ("id_z", "id_z", "id_z"),
            ("u", "id_x", "u"),
            ("id_y", "u", "u"),
            ("u_inv", "id_y", "u_inv"),
            ("id_x", "u_inv", "u_inv"),
            ("u_inv", "u", "id_x"),
            ("u", "u_inv", "id_y"),
            ("w", "id_x", "w"),
            ("id_z", "w", "w"),
            ("v", "id_y", "v"),
            ("id_z", "v", "v"),
            ("w", "u_inv", "v"),
            ("v", "u", "w"),
        ],
    );
    InverseStructure::new(
        c,
        [
            ("x".to_string(), 1),
            ("y".to_string(), 1),
            ("z".to_string(), 0),
        ]
        .into_iter()
        .collect(),
    )
    .unwrap()
}

/// A parallel pair equalized by a common precomposition: `g∘f = h∘f` with
/// `g ≠ h`, so `f` is not an epi.
pub fn non_epi_category() -> FinCategory {
    cat(
        &["a", "b", "c"],
        &[
            ("id_a", "a", "a"),
            ("id_b", "b", "b"),
            ("id_c", "c", "c"),
            ("f", "a", "b"),
            ("g", "b", "c"),
            ("h", "b", "c"),
            ("k", "a", "c"),
        ],
        &[("a", "id_a"), ("b", "id_b"), ("c", "id_c")],
        &[
            ("id_a", "id_a", "id_a"),
            ("id_b", "id_b", "id_b"),
            ("id_c", "id_c", "id_c"),
            ("f", "id_a", "f"),
            ("id_b", "f", "f"),
            ("g", "id_b", "g"),
            ("id_c", "g", "g"),
            ("h", "id_b", "h"),
            ("id_c", "h", "h"),
            ("k", "id_a", "k"),
            ("id_c", "k", "k"),
            ("g", "f", "k"),
            ("h", "f", "k"),
        ],
    )
}

/// Sorted subsets of `{0..=n}` with `k+1` elements, rendered as digit strings.
fn subsets_of_size(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            cur.push(v);
            go(v + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, size, &mut Vec::new(), &mut out);
    out
}

fn digits(set: &[usize]) -> String {
    set.iter().map(|d| d.to_string()).collect()
}

fn face_mor_id(k: usize, m: usize, image: &[usize]) -> String {
    format!("[{k}]>[{m}]:{}", digits(image))
}

/// The opposite of the semi-simplex category, truncated to dimensions
/// `0..=max_dim`: objects `[k]`, morphisms `[k] -> [m]` indexed by the
/// images of injections `[m] -> [k]`, composition by image composition.
pub fn semi_simplex_category(max_dim: usize) -> FinCategory {
    let objects: Vec<String> = (0..=max_dim).map(|k| format!("[{k}]")).collect();
    let mut morphisms = Vec::new();
    let mut identities = BTreeMap::new();
    // morphism [k] -> [m]: image set of an injection [m] -> [k]
    let mut tables: BTreeMap<String, (usize, usize, Vec<usize>)> = BTreeMap::new();
    for k in 0..=max_dim {
        for m in 0..=k {
            for image in subsets_of_size(k, m + 1) {
                let id = face_mor_id(k, m, &image);
                morphisms.push(MorInfo {
                    id: id.clone(),
                    src: format!("[{k}]"),
                    tgt: format!("[{m}]"),
                });
                if k == m {
                    identities.insert(format!("[{k}]"), id.clone());
                }
                tables.insert(id, (k, m, image));
            }
        }
    }
    let mut composition = BTreeMap::new();
    for (gid, (k1, m1, img_g)) in &tables {
        for (hid, (k2, m2, img_h)) in &tables {
            // h ∘ g where g: [k1] -> [m1], h: [k2] -> [m2], m1 == k2
            if m1 != k2 {
                continue;
            }
            let composed: Vec<usize> = img_h.iter().map(|&t| img_g[t]).collect();
            let comp_id = face_mor_id(*k1, *m2, &composed);
            composition.insert((hid.clone(), gid.clone()), comp_id);
        }
    }
    FinCategory::new(objects, morphisms, identities, composition).unwrap()
}

/// Semi-simplex truncation with `deg [k] = k`.
pub fn semi_simplex_inverse(max_dim: usize) -> InverseStructure {
    let c = semi_simplex_category(max_dim);
    let deg = c
        .objects()
        .iter()
        .map(|o| {
            let k: u32 = o[1..o.len() - 1].parse().unwrap();
            (o.clone(), k)
        })
        .collect();
    InverseStructure::new(c, deg).unwrap()
}

/// A semi-simplicial set on `semi_simplex_category(max_dim)` given by its
/// simplices as sorted vertex strings (e.g. `"013"` for a 2-simplex).
pub fn semi_simplicial_set(max_dim: usize, simplices: &[&[&str]]) -> Diagram {
    let index = semi_simplex_category(max_dim);
    let mut sets = BTreeMap::new();
    for (k, level) in simplices.iter().enumerate() {
        let mut tags: Vec<String> = level.iter().map(|s| s.to_string()).collect();
        tags.sort();
        sets.insert(format!("[{k}]"), FinSetObj::new(tags).unwrap());
    }
    for k in simplices.len()..=max_dim {
        sets.insert(format!("[{k}]"), FinSetObj::new(Vec::new()).unwrap());
    }
    let mut maps = BTreeMap::new();
    for m in index.morphisms() {
        // id format "[k]>[m]:digits"
        let rest = &m.id[m.id.find(':').unwrap() + 1..];
        let positions: Vec<usize> = rest
            .chars()
            .map(|c| c.to_digit(10).unwrap() as usize)
            .collect();
        let src_set: &FinSetObj = &sets[&m.src];
        let mut table = BTreeMap::new();
        for simplex in src_set.elements() {
            let chars: Vec<char> = simplex.chars().collect();
            let image: String = positions.iter().map(|&p| chars[p]).collect();
            table.insert(simplex.clone(), image);
        }
        maps.insert(
            m.id.clone(),
            FinSetMap::new(src_set.clone(), sets[&m.tgt].clone(), table).unwrap(),
        );
    }
    Diagram::new(index, sets, maps).unwrap()
}

/// The 3-horn: every face of the 3-simplex containing vertex 2 (the face
/// `013` removed), as a semi-simplicial set over dimensions 0..=3.
pub fn horn_3_2() -> Diagram {
    semi_simplicial_set(
        3,
        &[
            &["0", "1", "2", "3"],
            &["01", "02", "03", "12", "13", "23"],
            &["012", "023", "123"],
            &[],
        ],
    )
}

/// The full 3-simplex as a semi-simplicial set over dimensions 0..=3.
pub fn simplex_3() -> Diagram {
    semi_simplicial_set(
        3,
        &[
            &["0", "1", "2", "3"],
            &["01", "02", "03", "12", "13", "23"],
            &["012", "013", "023", "123"],
            &["0123"],
        ],
    )
}

fn span_diagram(
    x0: &[&str],
    x1: &[&str],
    x2: &[&str],
    p_table: &[(&str, &str)],
    q_table: &[(&str, &str)],
) -> Diagram {
    let index = span_category();
    let s0 = FinSetObj::new(x0.iter().map(|s| s.to_string()).collect()).unwrap();
    let s1 = FinSetObj::new(x1.iter().map(|s| s.to_string()).collect()).unwrap();
    let s2 = FinSetObj::new(x2.iter().map(|s| s.to_string()).collect()).unwrap();
    let table = |pairs: &[(&str, &str)]| -> BTreeMap<String, String> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    };
    let sets: BTreeMap<String, FinSetObj> = [
        ("0".to_string(), s0.clone()),
        ("1".to_string(), s1.clone()),
        ("2".to_string(), s2.clone()),
    ]
    .into_iter()
    .collect();
    let ident = |s: &FinSetObj| -> BTreeMap<String, String> {
        s.elements()
            .iter()
            .map(|e| (e.clone(), e.clone()))
            .collect()
    };
    let maps: BTreeMap<String, FinSetMap> = [
        (
            "id0".to_string(),
            FinSetMap::new(s0.clone(), s0.clone(), ident(&s0)).unwrap(),
        ),
        (
            "id1".to_string(),
            FinSetMap::new(s1.clone(), s1.clone(), ident(&s1)).unwrap(),
        ),
        (
            "id2".to_string(),
            FinSetMap::new(s2.clone(), s2.clone(), ident(&s2)).unwrap(),
        ),
        (
            "p".to_string(),
            FinSetMap::new(s2.clone(), s0.clone(), table(p_table)).unwrap(),
        ),
        (
            "q".to_string(),
            FinSetMap::new(s2.clone(), s1.clone(), table(q_table)).unwrap(),
        ),
    ]
    .into_iter()
    .collect();
    Diagram::new(index, sets, maps).unwrap()
}

/// The localization counterexample source: `X0 = {a, b}`, singletons
/// elsewhere, `X(p)(*) = a`.
pub fn counterexample_x() -> Diagram {
    span_diagram(&["a", "b"], &["*"], &["*"], &[("*", "a")], &[("*", "*")])
}

/// The localization counterexample target: `Y0 = {x, y}`, singletons
/// elsewhere, `Y(p)(*) = x`.
pub fn counterexample_y() -> Diagram {
    span_diagram(&["x", "y"], &["*"], &["*"], &[("*", "x")], &[("*", "*")])
}
