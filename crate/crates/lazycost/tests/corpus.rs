//! The correspondence theorems and demand lemmas on every bundled program,
//! for all inputs with lists of up to three elements over two values.

use lazycost::corpus::programs;
use lazycost::suites::correspondence;
use lazycost_core::clairvoyant::DEFAULT_CAP;
use lazycost_core::theorems::Selection;

#[test]
fn corpus_satisfies_every_theorem() {
    let mut positive = false;
    for (name, p) in programs() {
        let start = std::time::Instant::now();
        let r = correspondence(name, &p, 3, &[0, 1], DEFAULT_CAP, Selection::ALL).unwrap();
        eprintln!("{name}: {} checks in {:.2?}", r.checked, start.elapsed());
        assert!(r.passed(), "{name}: {r:?}");
        assert!(r.checked > 0);
        positive |= r.properties["positive-cost-demands"] == 1;
    }
    assert!(positive, "no program charged for any demand");
}
