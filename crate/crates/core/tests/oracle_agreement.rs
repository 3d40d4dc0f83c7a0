use loewner_core::maps::MapFamily;
use loewner_core::oracle::{compare_with_oracle, ORACLE_POINTS};
use loewner_core::{check_cell, FamilySpec, ResultId, SpectrumBound};

const BOUNDS: [(f64, f64); 4] = [(1.0, 4.0), (1.5, 4.0), (1.0, 1.6), (0.5, 2.0)];

#[test]
fn builders_match_scalar_oracle_on_every_valid_cell() {
    let mut checked = 0;
    for result in ResultId::ALL {
        for family in result.default_families() {
            let family: FamilySpec = family.parse().unwrap();
            for (m, big_m) in BOUNDS {
                let bounds = SpectrumBound::new(m, big_m).unwrap();
                if check_cell(result, family, bounds, MapFamily::Identity).is_err() {
                    continue;
                }
                let report = compare_with_oracle(result, family, bounds, ORACLE_POINTS).unwrap();
                assert!(
                    report.agrees(),
                    "{result} {family} [{m}, {big_m}]: first disagreement {:?}",
                    report.disagreements.first()
                );
                checked += 1;
            }
        }
    }
    assert!(checked >= 30, "only {checked} cells checked");
}
