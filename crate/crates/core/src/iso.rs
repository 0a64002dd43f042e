//! Isomorphism and equivalence of finite categories by backtracking search.

use crate::fincat::{FinCategory, FullSubcategory, MorId, ObjId};

/// An isomorphism given by its action on objects and morphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    pub objects: Vec<ObjId>,
    pub morphisms: Vec<MorId>,
}

/// Cheap invariant: sorted multiset of (|hom(x,y)|) rows and columns.
fn object_signature(cat: &FinCategory, x: ObjId) -> (Vec<usize>, Vec<usize>, usize) {
    let mut out: Vec<usize> = cat.objects().map(|y| cat.hom(x, y).len()).collect();
    let mut inc: Vec<usize> = cat.objects().map(|y| cat.hom(y, x).len()).collect();
    out.sort_unstable();
    inc.sort_unstable();
    (out, inc, cat.hom(x, x).len())
}

pub fn find_isomorphism(a: &FinCategory, b: &FinCategory) -> Option<Isomorphism> {
    if a.object_count() != b.object_count() || a.morphism_count() != b.morphism_count() {
        return None;
    }
    let sig_a: Vec<_> = a.objects().map(|x| object_signature(a, x)).collect();
    let sig_b: Vec<_> = b.objects().map(|x| object_signature(b, x)).collect();
    let mut obj_map: Vec<Option<ObjId>> = vec![None; a.object_count()];
    let mut used = vec![false; b.object_count()];
    map_objects(a, b, &sig_a, &sig_b, 0, &mut obj_map, &mut used)
}

fn map_objects(
    a: &FinCategory,
    b: &FinCategory,
    sig_a: &[(Vec<usize>, Vec<usize>, usize)],
    sig_b: &[(Vec<usize>, Vec<usize>, usize)],
    i: usize,
    obj_map: &mut Vec<Option<ObjId>>,
    used: &mut Vec<bool>,
) -> Option<Isomorphism> {
    if i == a.object_count() {
        let objects: Vec<ObjId> = obj_map.iter().map(|o| o.expect("complete")).collect();
        return map_morphisms(a, b, &objects);
    }
    let x = ObjId(i as u32);
    for y in b.objects() {
        if used[y.index()] || sig_a[i] != sig_b[y.index()] {
            continue;
        }
        let consistent = (0..i).all(|j| {
            let xj = ObjId(j as u32);
            let yj = obj_map[j].expect("assigned");
            a.hom(x, xj).len() == b.hom(y, yj).len() && a.hom(xj, x).len() == b.hom(yj, y).len()
        });
        if !consistent {
            continue;
        }
        obj_map[i] = Some(y);
        used[y.index()] = true;
        if let Some(iso) = map_objects(a, b, sig_a, sig_b, i + 1, obj_map, used) {
            return Some(iso);
        }
        obj_map[i] = None;
        used[y.index()] = false;
    }
    None
}

fn map_morphisms(a: &FinCategory, b: &FinCategory, objects: &[ObjId]) -> Option<Isomorphism> {
    let mut mor_map: Vec<Option<MorId>> = vec![None; a.morphism_count()];
    let mut used = vec![false; b.morphism_count()];
    for x in a.objects() {
        let y = b.identity(objects[x.index()]);
        mor_map[a.identity(x).index()] = Some(y);
        used[y.index()] = true;
    }
    let order: Vec<MorId> = a.morphisms().filter(|&f| !a.is_identity(f)).collect();
    if assign(a, b, objects, &order, 0, &mut mor_map, &mut used) {
        Some(Isomorphism {
            objects: objects.to_vec(),
            morphisms: mor_map.into_iter().map(|m| m.expect("complete")).collect(),
        })
    } else {
        None
    }
}

fn assign(
    a: &FinCategory,
    b: &FinCategory,
    objects: &[ObjId],
    order: &[MorId],
    i: usize,
    mor_map: &mut Vec<Option<MorId>>,
    used: &mut Vec<bool>,
) -> bool {
    let Some(&f) = order.get(i) else {
        return true;
    };
    let (x, y) = (objects[a.dom(f).index()], objects[a.cod(f).index()]);
    for &g in b.hom(x, y) {
        if used[g.index()] {
            continue;
        }
        mor_map[f.index()] = Some(g);
        if compatible(a, b, f, mor_map) {
            used[g.index()] = true;
            if assign(a, b, objects, order, i + 1, mor_map, used) {
                return true;
            }
            used[g.index()] = false;
        }
        mor_map[f.index()] = None;
    }
    false
}

/// Every composite involving `f` whose three terms are mapped is preserved.
fn compatible(a: &FinCategory, b: &FinCategory, f: MorId, mor_map: &[Option<MorId>]) -> bool {
    let image = |m: MorId| mor_map[m.index()];
    let check = |g: MorId, h: MorId| match (image(g), image(h), image(a.compose(g, h))) {
        (Some(ig), Some(ih), Some(ic)) => b.compose(ig, ih) == ic,
        _ => true,
    };
    a.out_of(a.cod(f)).all(|g| check(g, f))
        && a.into_object(a.dom(f)).all(|h| check(f, h))
        && composites_into(a, b, f, mor_map)
}

/// Pairs `(g, h)` with `g ∘ h = f` where both are mapped.
fn composites_into(a: &FinCategory, b: &FinCategory, f: MorId, mor_map: &[Option<MorId>]) -> bool {
    let target = mor_map[f.index()].expect("just assigned");
    for h in a.out_of(a.dom(f)) {
        let Some(ih) = mor_map[h.index()] else {
            continue;
        };
        for &g in a.hom(a.cod(h), a.cod(f)) {
            if a.compose(g, h) != f {
                continue;
            }
            if let Some(ig) = mor_map[g.index()] {
                if b.compose(ig, ih) != target {
                    return false;
                }
            }
        }
    }
    true
}

pub fn are_isomorphic(a: &FinCategory, b: &FinCategory) -> bool {
    find_isomorphism(a, b).is_some()
}

/// The full subcategory on the first object of each isomorphism class.
pub fn skeleton(cat: &FinCategory) -> FullSubcategory {
    let mut reps: Vec<ObjId> = Vec::new();
    for x in cat.objects() {
        if !reps.iter().any(|&r| cat.are_isomorphic_objects(r, x)) {
            reps.push(x);
        }
    }
    FullSubcategory::named(cat, &reps, format!("{}_skel", cat.name()))
}

/// Equivalent categories have isomorphic skeletons.
pub fn are_equivalent(a: &FinCategory, b: &FinCategory) -> bool {
    are_isomorphic(skeleton(a).category(), skeleton(b).category())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{validate_category, RawCategory};

    fn iso_pair() -> FinCategory {
        validate_category(
            &RawCategory::new("IsoPair")
                .object("A")
                .object("B")
                .morphism("i", "A", "B")
                .morphism("j", "B", "A")
                .composite("j", "i", "1_A")
                .composite("i", "j", "1_B"),
        )
        .unwrap()
    }

    #[test]
    fn same_counts_different_shape() {
        let a = iso_pair();
        let raw = RawCategory::new("Two")
            .object("A")
            .object("B")
            .morphism("f", "A", "B")
            .morphism("g", "A", "B");
        let b = validate_category(&raw).unwrap();
        assert_eq!(a.morphism_count(), b.morphism_count());
        assert!(!are_isomorphic(&a, &b));
    }

    #[test]
    fn isomorphism_maps_identities_to_identities() {
        let a = iso_pair();
        let iso = find_isomorphism(&a, &a).unwrap();
        for x in a.objects() {
            assert!(a.is_identity(iso.morphisms[a.identity(x).index()]));
        }
    }

    #[test]
    fn skeleton_collapses_isomorphic_objects() {
        let s = skeleton(&iso_pair());
        assert_eq!(s.category().object_count(), 1);
        assert_eq!(s.category().morphism_count(), 1);
        let one = validate_category(&RawCategory::new("One").object("X")).unwrap();
        assert!(are_equivalent(&iso_pair(), &one));
        assert!(!are_isomorphic(&iso_pair(), &one));
    }
}
