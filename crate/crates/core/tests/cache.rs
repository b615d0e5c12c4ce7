use std::fs;

use wpvol::volumes::{volume_table_in, CacheEvent, ConfigKey, VolumeTable};

fn snapshot(dir: &std::path::Path) -> Vec<(String, String)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read_to_string(&p).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn cache_is_written_and_reloaded() {
    let dir = tempfile::tempdir().unwrap();
    let first = volume_table_in(3, dir.path()).unwrap();
    let files = snapshot(dir.path());
    assert_eq!(files.len(), first.len());
    assert!(first
        .events()
        .iter()
        .all(|e| matches!(e, CacheEvent::Written(_))));

    let second = volume_table_in(3, dir.path()).unwrap();
    assert!(second
        .events()
        .iter()
        .all(|e| matches!(e, CacheEvent::Loaded(_))));
    for key in first.keys() {
        assert_eq!(first.get(key), second.get(key));
    }
}

#[test]
fn deleting_the_cache_reproduces_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    volume_table_in(3, dir.path()).unwrap();
    let before = snapshot(dir.path());
    fs::remove_dir_all(dir.path()).unwrap();
    volume_table_in(3, dir.path()).unwrap();
    assert_eq!(before, snapshot(dir.path()));
}

#[test]
fn corrupt_entries_are_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    volume_table_in(2, dir.path()).unwrap();
    let key = ConfigKey::new(0, 5).unwrap();
    let path = dir.path().join(key.cache_file_name());
    let good = fs::read_to_string(&path).unwrap();

    let cases = [
        "not json".to_string(),
        good.replace("\"g\":0", "\"g\":1"),
        // breaks the symmetry of the polynomial
        good.replacen("\"coeff\":\"1/8\"", "\"coeff\":\"1/7\"", 1),
        good.replacen("\"exps\":[0,0,0,0,2]", "\"exps\":[0,0,0,0,3]", 1),
    ];
    for bad in cases {
        fs::write(&path, &bad).unwrap();
        let mut table = VolumeTable::with_cache_dir(2, dir.path());
        table.volume(0, 5).unwrap();
        assert!(
            table
                .events()
                .iter()
                .any(|e| matches!(e, CacheEvent::Corrupt { key: k, .. } if *k == key)),
            "{bad}"
        );
        assert_eq!(fs::read_to_string(&path).unwrap(), good);
    }
}

#[test]
fn dimension_cap_applies_to_cached_tables() {
    let dir = tempfile::tempdir().unwrap();
    let mut table = VolumeTable::with_cache_dir(1, dir.path());
    assert!(table.volume(0, 5).is_err());
    assert!(!dir.path().join("vol_g0_n5.json").exists());
}
