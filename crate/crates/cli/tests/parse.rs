use kqext::ground::Base;
use kqext_cli::cache;
use kqext_cli::expr::{parse_module_expr, ModuleExpr};
use kqext_cli::parse_range;
use proptest::prelude::*;

fn range(parts: &[&str]) -> Result<kqext::ext::Range, String> {
    let v: Vec<String> = parts.iter().map(|s| s.to_string()).collect();
    parse_range(&v).map_err(|f| f.message)
}

#[test]
fn grammar_examples() {
    use ModuleExpr::*;
    assert_eq!(parse_module_expr("M2").unwrap(), M2);
    assert_eq!(parse_module_expr(" B0( 2 ) ").unwrap(), B0(2));
    assert_eq!(parse_module_expr("B0(1) * B0(1)").unwrap(), Tensor(Box::new(B0(1)), Box::new(B0(1))));
    assert_eq!(
        parse_module_expr("S(4,2) B0(1) * B1(1)").unwrap(),
        Shift(4, 2, Box::new(Tensor(Box::new(B0(1)), Box::new(B1(1)))))
    );
    assert_eq!(parse_module_expr("B0(1) * B1(1) / rho").unwrap(), Tensor(Box::new(B0(1)), Box::new(RhoQuotient(Box::new(B1(1))))));
    assert_eq!(parse_module_expr("(S(-1,-2) A1modA0)").unwrap(), Shift(-1, -2, Box::new(A1ModA0)));
    assert_eq!(parse_module_expr("AmodA1(8)").unwrap(), AModA1(8));
}

#[test]
fn errors_carry_positions() {
    let e = parse_module_expr("B0(1) * Q").unwrap_err();
    assert_eq!(e.pos, 8);
    let e = parse_module_expr("B0(-1)").unwrap_err();
    assert_eq!(e.pos, 3);
    let e = parse_module_expr("M2 M2").unwrap_err();
    assert_eq!(e.pos, 3);
    assert!(parse_module_expr("S(1) M2").is_err());
    assert!(parse_module_expr("M2 / tau").is_err());
    assert!(parse_module_expr("").is_err());
}

#[test]
fn built_modules() {
    let m = parse_module_expr("(B0(1) * B0(1)) / rho").unwrap().build(Base::R, 1).unwrap();
    assert_eq!(m.rank(), 9);
    assert_eq!(m.base, Base::C);
    let m = parse_module_expr("S(4,2) B0(1)").unwrap().build(Base::C, 0).unwrap();
    assert_eq!(m.level, 0);
    assert_eq!(m.basis[0].deg.s, 4);
    assert!(parse_module_expr("M2 / rho").unwrap().build(Base::C, 1).is_err());
    // the quotient binds tighter than the product, mixing R with its quotient
    assert!(parse_module_expr("B0(1) * B0(1) / rho").unwrap().build(Base::R, 1).is_err());
}

#[test]
fn ranges() {
    let r = range(&["s=-4..16", "f=0..10", "w=-8..10"]).unwrap();
    assert_eq!((r.s, r.f, r.w), ((-4, 16), (0, 10), (-8, 10)));
    let r = range(&["w=0..1", "s=0..1", "f=0..1"]).unwrap();
    assert_eq!(r.w, (0, 1));
    assert!(range(&["s=0..1", "f=0..1"]).unwrap_err().contains("required"));
    assert!(range(&["s=2..1", "f=0..1", "w=0..1"]).unwrap_err().contains("empty"));
    assert!(range(&["s=0..1", "f=-1..1", "w=0..1"]).unwrap_err().contains("nonnegative"));
    assert!(range(&["s=0..1", "s=0..1", "w=0..1"]).unwrap_err().contains("twice"));
    assert!(range(&["x=0..1", "f=0..1", "w=0..1"]).is_err());
    assert!(range(&["s=0-1", "f=0..1", "w=0..1"]).is_err());
}

#[test]
fn cache_key_tracks_spec() {
    let a = serde_json::json!({"command": "ext", "module": "B0(1)", "range": [[0, 1], [0, 1], [0, 1]]});
    let mut b = a.clone();
    b["module"] = "B0(2)".into();
    assert_eq!(cache::key(&a), cache::key(&a.clone()));
    assert_ne!(cache::key(&a), cache::key(&b));
    assert_eq!(cache::key(&a).len(), 64);
}

fn arb_expr() -> impl Strategy<Value = ModuleExpr> {
    let leaf = prop_oneof![
        Just(ModuleExpr::M2),
        (0u32..4).prop_map(ModuleExpr::B0),
        (0u32..3).prop_map(ModuleExpr::B1),
        Just(ModuleExpr::A1ModA0),
        (0u32..9).prop_map(ModuleExpr::AModA1),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (-8i32..8, -4i32..4, inner.clone()).prop_map(|(p, q, e)| ModuleExpr::Shift(p, q, Box::new(e))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ModuleExpr::Tensor(Box::new(a), Box::new(b))),
            inner.prop_map(|e| ModuleExpr::RhoQuotient(Box::new(e))),
        ]
    })
}

proptest! {
    #[test]
    fn display_round_trips(e in arb_expr()) {
        let text = e.to_string();
        prop_assert_eq!(parse_module_expr(&text).unwrap(), e);
    }
}
