//! Quick look at persistence settings through the replay driver.

use cognition::{attempts_per_selection, run_persistence_replay, selection_sequence, PersistenceSettings};

#[test]
fn persistence_settings_probe() {
    let stuck = vec![0.8; 40];
    let learning = vec![0.42, 0.33, 0.22, 0.12, 0.05, 0.04, 0.04, 0.03];

    for (name, s) in [
        ("baseline", PersistenceSettings::baseline()),
        ("inhibition", PersistenceSettings::error_inhibition()),
        ("long", PersistenceSettings::long_persistence()),
    ] {
        let events = run_persistence_replay(s, (0.8, 0.5), (stuck.clone(), learning.clone()), 200.0, 5);
        let sel = selection_sequence(&events);
        let att = attempts_per_selection(&events);
        eprintln!("{name}: selections {sel:?}");
        eprintln!("{name}: attempts/selection {att:?}");
    }
}
