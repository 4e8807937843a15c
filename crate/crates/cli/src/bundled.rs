//! Fixture presentations shipped inside the binary.

const FIXTURES: &[(&str, &str)] = &[
    ("ground_field", include_str!("../fixtures/ground_field.json")),
    ("dual_numbers", include_str!("../fixtures/dual_numbers.json")),
    ("truncated_x3", include_str!("../fixtures/truncated_x3.json")),
    ("broken_x3", include_str!("../fixtures/broken_x3.json")),
    ("quiver_a2", include_str!("../fixtures/quiver_a2.json")),
    ("path_algebra_a2", include_str!("../fixtures/path_algebra_a2.json")),
    ("exterior_odd", include_str!("../fixtures/exterior_odd.json")),
    ("contractible", include_str!("../fixtures/contractible.json")),
];

pub fn fixture(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    FIXTURES.iter().map(|(n, _)| *n)
}
