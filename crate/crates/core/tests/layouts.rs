use std::collections::BTreeSet;

use trimanual_core::fifth_chain::{names_of_step, pythagorean_chain, NoteName};
use trimanual_core::layout::{
    annotate, load_variant, manual_fifth_window, subsystem_steps, validate, variant_ids, Manual,
};

fn set(steps: &[u32]) -> BTreeSet<u32> {
    steps.iter().copied().collect()
}

/// Fifth index of a step in `[low, low + 53)`, found by scanning the chain.
fn fifth_by_scan(step: u32, low: i64) -> i64 {
    (low..low + 53)
        .find(|f| (31 * f).rem_euclid(53) as u32 + 1 == step)
        .unwrap()
}

#[test]
fn every_variant_partitions_its_steps() {
    for id in variant_ids() {
        let layout = load_variant(id).unwrap();
        let q = layout.divisions();
        let mut steps: Vec<u32> = layout.keys.iter().map(|k| k.step).collect();
        steps.sort_unstable();
        assert_eq!(steps, (1..=q).collect::<Vec<_>>(), "{id}");
        let sizes: Vec<usize> = layout
            .manuals()
            .iter()
            .map(|&m| layout.manual_steps(m).len())
            .collect();
        let expected: &[usize] = match q {
            53 => &[24, 17, 12],
            41 => &[24, 17],
            29 => &[17, 12],
            _ => unreachable!(),
        };
        assert_eq!(sizes, expected, "{id}");
        assert!(validate(&layout).is_valid());
    }
}

#[test]
fn v1_windows_partition_a_run_of_53_fifths() {
    let layout = load_variant("53-v1").unwrap();
    let mut union = BTreeSet::new();
    let mut total = 0;
    for manual in Manual::TOP_DOWN {
        let window = manual_fifth_window(&layout, manual).unwrap();
        let scanned: BTreeSet<i64> = layout
            .manual_steps(manual)
            .iter()
            .map(|&s| fifth_by_scan(s, -22))
            .collect();
        assert_eq!(window, scanned);
        total += window.len();
        union.extend(window);
    }
    assert_eq!(total, 53);
    assert_eq!(union, (-22..=30).collect());
}

#[test]
fn flat_side_subsystem_is_a_chain_of_29_fifths() {
    let layout = load_variant("53-v1").unwrap();
    let lower_middle = subsystem_steps(&layout, &[Manual::Lower, Manual::Middle]).unwrap();
    let chain = pythagorean_chain(-18, 29).unwrap();
    assert_eq!(set(&lower_middle), set(&chain.steps));
}

#[test]
fn sharp_side_subsystem_is_a_chain_of_29_fifths() {
    let layout = load_variant("53-v2").unwrap();
    let lower_middle = subsystem_steps(&layout, &[Manual::Lower, Manual::Middle]).unwrap();
    assert_eq!(set(&lower_middle), set(&pythagorean_chain(-6, 29).unwrap().steps));
}

// The 41-tone Pythagorean subset, as printed with C on the middle manual.
const FORTY_ONE_SUBSET: [u32; 41] = [
    53, 4, 7, 13, 16, 20, 22, 26, 29, 35, 38, 44, 47, 51, 2, 9, 11, 18, 24, 31, 33, 40, 42, 49, 1,
    5, 6, 14, 15, 19, 23, 27, 28, 36, 37, 45, 46, 50, 10, 32, 41,
];

#[test]
fn forty_one_subset_is_a_chain_of_41_fifths() {
    let chain = set(&pythagorean_chain(-18, 41).unwrap().steps);
    assert_eq!(set(&FORTY_ONE_SUBSET), chain);
    // variant 3 numbers its steps two lower than the printed subset
    let layout = load_variant("53-v3").unwrap();
    let upper_two = subsystem_steps(&layout, &[Manual::Middle, Manual::Upper]).unwrap();
    let shifted: BTreeSet<u32> = upper_two.iter().map(|&s| (s + 50) % 53 + 1).collect();
    assert_eq!(shifted, chain);
}

#[test]
fn annotations_reproduce_the_keyboard_chart() {
    let diatonic: Vec<u32> = (1..=53).filter(|&s| annotate(s).unwrap().diatonic.is_some()).collect();
    assert_eq!(diatonic, [1, 5, 10, 14, 19, 23, 27, 28, 32, 36, 41, 45, 50]);
    let overtone: Vec<u32> = (2..=53).filter(|&s| annotate(s).unwrap().overtone.is_some()).collect();
    assert_eq!(overtone, [6, 10, 14, 15, 18, 25, 32, 38, 44, 49]);
    let cases = [
        (5, Some("minor second"), None),
        (6, None, Some("minor second")),
        (14, Some("minor third"), Some("minor third (19th harmonic)")),
        (15, None, Some("minor third (6:5)")),
        (18, None, Some("major third")),
        (19, Some("major third"), None),
        (23, Some("fourth"), None),
        (25, None, Some("diminished fifth")),
        (27, Some("diminished fifth"), None),
        (28, Some("augmented fourth"), None),
        (32, Some("fifth"), Some("fifth")),
        (36, Some("minor sixth"), None),
        (38, None, Some("minor sixth")),
        (41, Some("major sixth"), None),
        (45, Some("minor seventh"), None),
        (49, None, Some("major seventh")),
        (50, Some("major seventh"), None),
    ];
    for (step, d, o) in cases {
        let a = annotate(step).unwrap();
        assert_eq!((a.diatonic, a.overtone), (d, o), "step {step}");
    }
}

#[test]
fn labels_follow_the_circle_of_fifths() {
    let layout = load_variant("53-v1").unwrap();
    let middle: Vec<String> = layout
        .manual_steps(Manual::Middle)
        .iter()
        .map(|&s| names_of_step(s, 4).unwrap()[0].to_string())
        .collect();
    assert_eq!(
        middle,
        ["C", "Db", "C#", "D", "Eb", "D#", "E", "F", "Gb", "F#", "G", "Ab", "G#", "A", "Hb", "A#", "H"]
    );
    let b: NoteName = "B".parse().unwrap();
    assert_eq!(names_of_step(45, 4).unwrap(), [b]);
}
