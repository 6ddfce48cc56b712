use nlgames::kscolour::{cabello18, count_valid_colourings, load_ks_set, Enumeration, KsSetError, LoadError};

#[test]
fn bundled_cabello_file_matches_builtin() {
    let text = include_str!("../../../data/cabello18.json");
    assert_eq!(text, cabello18().to_json());
    assert_eq!(load_ks_set(text).unwrap(), cabello18());
}

#[test]
fn toy_file_has_sixteen_colourings() {
    let set = load_ks_set(include_str!("../../../data/two-disjoint-bases.json")).unwrap();
    assert_eq!(count_valid_colourings(&set, Enumeration::Exhaustive), Ok(16));
}

#[test]
fn broken_files_name_the_basis() {
    match load_ks_set(include_str!("../../../data/broken-orthogonality.json")) {
        Err(LoadError::Invalid(KsSetError::NotOrthogonal { basis, .. })) => assert_eq!(basis, 8),
        other => panic!("unexpected {other:?}"),
    }
    match load_ks_set(include_str!("../../../data/broken-arity.json")) {
        Err(LoadError::Invalid(KsSetError::BasisArity { basis, .. })) => assert_eq!(basis, 3),
        other => panic!("unexpected {other:?}"),
    }
}
