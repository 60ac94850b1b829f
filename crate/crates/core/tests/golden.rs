use crossratio_core::roots::tables::{render, TableKind};
use crossratio_core::roots::RootSystem;
use crossratio_core::toricfan::build_weyl_fan;

fn check(kind: TableKind, expected: &str) {
    let rs = RootSystem::new().unwrap();
    let w = build_weyl_fan().unwrap();
    let got = render(&rs, &w, kind).unwrap();
    if got != expected {
        for (a, b) in got.lines().zip(expected.lines()) {
            if a != b {
                panic!("{} differs:\n  got      {a}\n  expected {b}", kind.name());
            }
        }
        panic!("{}: line counts differ", kind.name());
    }
}

#[test]
fn boundary_table() {
    check(TableKind::Boundary, include_str!("golden/bd.txt"));
}

#[test]
fn tritangent_table() {
    check(TableKind::Tritangent, include_str!("golden/td.txt"));
}

#[test]
fn cusp_table() {
    check(TableKind::Cusp, include_str!("golden/cd.txt"));
}

#[test]
fn lambda_table() {
    check(TableKind::Lambda, include_str!("golden/lambda.txt"));
}
