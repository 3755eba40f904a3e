use std::collections::BTreeMap;

use hharm6_core::matel::{operator_harmonic, overlap, table_report, OperatorLabel};
use hharm6_core::perm::symmetry_adapt;
use hharm6_core::{Builder, ExactCoeff};

#[test]
fn adapted_states_are_orthonormal() {
    let catalog = Builder::default().build_catalog(3).unwrap();
    let states = symmetry_adapt(&catalog).unwrap();
    assert_eq!(states.len(), catalog.len());
    for (i, a) in states.iter().enumerate() {
        for b in &states[i..] {
            let raw = overlap(&a.numerator, &b.numerator).unwrap();
            if std::ptr::eq(a, b) {
                assert_eq!(raw, a.norm_sq_raw, "{a}");
            } else {
                assert!(raw.is_zero(), "{a} vs {b}: {raw}");
            }
        }
    }
}

#[test]
fn operator_matrices_are_hermitian() {
    let builder = Builder::default();
    let states = symmetry_adapt(&builder.build_catalog(4).unwrap()).unwrap();
    for op in [OperatorLabel::new(4, 0).unwrap(), OperatorLabel::new(6, 6).unwrap()] {
        let sym = operator_harmonic(&builder, op).unwrap();
        let rows = table_report(&states, &sym, &op.table_scale()).unwrap();
        let map: BTreeMap<_, ExactCoeff> = rows.iter().map(|r| ((r.bra.clone(), r.bra_m, r.ket.clone(), r.ket_m), r.value.clone())).collect();
        for ((bra, bm, ket, km), v) in &map {
            let mirror = map.get(&(ket.clone(), *km, bra.clone(), *bm)).unwrap_or_else(|| panic!("{op}: {ket} -> {bra} missing"));
            assert_eq!(*mirror, v.conj(), "{op}: {bra} m={bm} -> {ket}");
        }
    }
}

#[test]
fn table_comparison_names_the_row_that_disagrees() {
    use hharm6_core::golden::compare_tables;
    let builder = Builder::default();
    let states = symmetry_adapt(&builder.build_catalog(4).unwrap()).unwrap();
    let op = OperatorLabel::new(4, 0).unwrap();
    let sym = operator_harmonic(&builder, op).unwrap();
    let mut rows = table_report(&states, &sym, &op.table_scale()).unwrap();
    assert!(compare_tables(&states, &[(op, rows.clone())]).unwrap().is_empty());
    let r = rows.iter_mut().find(|r| r.k == 2 && r.bra == r.ket && r.bra_m == 2 && r.ket_m == 2 && r.bra.starts_with("(2,|0|,2")).unwrap();
    r.value = r.value.neg();
    let failures = compare_tables(&states, &[(op, rows)]).unwrap();
    assert_eq!(failures.len(), 1, "{failures:?}");
    assert!(failures[0].contains("diagonal table row") && failures[0].contains("(4,|0|)"), "{}", failures[0]);
}
