use std::path::PathBuf;

use ordmult::scene::{ComponentMult, Scene};

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

fn load(name: &str) -> Scene {
    Scene::load(&data(&format!("scenes/{name}"))).unwrap()
}

fn table(s: &Scene) -> Vec<(String, u64)> {
    s.ledger().unwrap().components.iter().filter(|c| c.total > 0).map(|c| (c.name.clone(), c.total)).collect()
}

#[test]
fn cubic_pair_table() {
    let s = load("two-lines-cubics.json");
    assert_eq!(table(&s), vec![("V(x0)".into(), 6), ("V(x1)".into(), 3)]);
    let c = s.conservation_check().unwrap();
    assert!(c.balanced);
    assert_eq!((c.sum, c.total), (9, 9));
}

#[test]
fn cubic_conic_table() {
    let s = load("two-lines-quadric.json");
    let d = s.distinguished_components().unwrap();
    assert_eq!(d.iter().map(|c| (c.name.as_str(), c.tuples.clone())).collect::<Vec<_>>(), vec![("V(x0)", vec![vec![1]]), ("V(x0,x1)", vec![vec![1, 2]])]);
    assert_eq!(table(&s), vec![("V(x0)".into(), 2), ("V(x0,x1)".into(), 4)]);
    assert!(s.conservation_check().unwrap().balanced);
}

fn split_first(s: &Scene, keep: &str, degree: u64) -> Scene {
    let mut t = s.clone();
    t.divisors[0].components.retain(|c| c.name == keep);
    t.divisors[0].degree = Some(degree);
    t.total_intersection_number = degree * t.divisors[1].degree.unwrap();
    t.local_factors.clear();
    t
}

#[test]
fn first_slot_is_additive() {
    let s = load("two-lines-cubics.json");
    let a = split_first(&s, "V(x0)", 2);
    let b = split_first(&s, "V(x1)", 1);
    let whole = s.ledger().unwrap();
    for z in ["V(x0)", "V(x1)"] {
        let get = |l: &ordmult::scene::Ledger| l.components.iter().find(|c| c.name == z).map_or(0, |c| c.total);
        assert_eq!(get(&whole), get(&a.ledger().unwrap()) + get(&b.ledger().unwrap()), "{z}");
    }
}

#[test]
fn second_slot_is_not_additive() {
    // Reversed order: F2 = V(x0 x1^2) first, then F1 = V(x0^2 x1) split as V(x0^2) + V(x1).
    let s = load("two-lines-cubics.json");
    let mut rev = s.clone();
    rev.divisors.swap(0, 1);
    let whole = rev.ordered_multiplicity("V(x0)").unwrap().total;
    let mut a = rev.clone();
    a.divisors[1].components = vec![ComponentMult { name: "V(x0)".into(), multiplicity: 2 }];
    a.divisors[1].degree = Some(2);
    a.total_intersection_number = 6;
    a.intersections.push(ordmult::scene::IntersectionEntry { subvariety: "V(x1)".into(), divisor: 2, components: vec!["V(x0,x1)".into()] });
    a.local_factors.push(
        serde_json::from_str(r#"{"subvariety": "V(x0,x1)", "tuple": [1, 2], "directive": {"kind": "monomial-chain", "monomials": [[1, 2], [2, 0]], "prime": [1, 2]}}"#).unwrap(),
    );
    let mut b = rev.clone();
    b.divisors[1].components = vec![ComponentMult { name: "V(x1)".into(), multiplicity: 1 }];
    b.divisors[1].degree = Some(1);
    b.total_intersection_number = 3;
    b.intersections.push(ordmult::scene::IntersectionEntry { subvariety: "V(x0)".into(), divisor: 2, components: vec!["V(x0,x1)".into()] });
    b.local_factors.push(
        serde_json::from_str(r#"{"subvariety": "V(x0,x1)", "tuple": [1, 2], "directive": {"kind": "monomial-chain", "monomials": [[1, 2], [0, 1]], "prime": [1, 2]}}"#).unwrap(),
    );
    let part = |s: &Scene| s.ledger().unwrap().components.iter().find(|c| c.name == "V(x0)").map_or(0, |c| c.total);
    assert_eq!((whole, part(&a), part(&b)), (3, 2, 0));
    assert_ne!(whole, part(&a) + part(&b));
}

#[test]
fn listing_order_does_not_matter() {
    let s = load("quartic-triple.json");
    let mut t = s.clone();
    for e in &mut t.intersections {
        e.components.reverse();
    }
    t.subvarieties.reverse();
    assert_eq!(s.distinguished_components().unwrap(), t.distinguished_components().unwrap());
}

#[test]
fn monomial_curve_count() {
    let s = load("monomial-curve.json");
    let l = s.ledger().unwrap();
    let got: Vec<(&str, u64)> = l.components.iter().map(|c| (c.name.as_str(), c.total)).collect();
    assert_eq!(got, vec![("Z", 4), ("P0", 6), ("Pinf", 1)]);
    assert_eq!(l.components[0].terms[0].local.value, 1);
    assert_eq!(l.components[0].terms[0].degree, 4);
    assert!(l.exact);
    assert_eq!(l.isolated_count, 13);
}

#[test]
fn quartic_triple_count() {
    let s = load("quartic-triple.json");
    let l = s.ledger().unwrap();
    let got: Vec<(&str, u64)> = l.components.iter().map(|c| (c.name.as_str(), c.total)).collect();
    assert_eq!(got, vec![("Z", 8), ("O", 4), ("P(z=-2)", 1), ("P(z=-2i)", 0), ("P(z=2)", 1), ("P(z=2i)", 0), ("Pz", 6)]);
    assert_eq!(l.excluded.iter().map(|e| (e.name.as_str(), e.value)).collect::<Vec<_>>(), vec![("Py", 14)]);
    assert!(l.exact);
    assert_eq!(l.isolated_count, 30);
}

#[test]
fn sphere_tangent_count() {
    use ordmult::spheres::{SphereParams, SpherePipeline};
    let s = load("sphere-tangents.json");
    assert!(matches!(s.ledger(), Err(ordmult::Error::Input(_))));
    let pipe = SpherePipeline::default();
    let l = s.ledger_with(&pipe).unwrap();
    let got: Vec<(&str, u64)> = l.components.iter().map(|c| (c.name.as_str(), c.total)).collect();
    assert_eq!(got, vec![("Z", 8), ("Z∩C(w,u2≠0)", 8), ("Z∩C(w=0)", 4)]);
    assert_eq!(l.components[0].terms[0].degree, 4);
    assert_eq!(l.excluded.iter().map(|e| (e.name.as_str(), e.value)).collect::<Vec<_>>(), vec![("Z(u2=0)", 0)]);
    assert!(l.exact);
    assert_eq!(l.isolated_count, 12);
    assert_eq!(SphereParams::from_strings(s.sphere_parameters.as_ref().unwrap()).unwrap(), SphereParams::bundled());
}
