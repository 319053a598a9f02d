//! The bundled example programs. Each is small enough for the
//! correspondence suite to check exhaustively on lists of up to three
//! elements.

use lazycost_core::calculus::Program;

use crate::syntax::program;

/// `(name, source)` of every bundled program.
pub const SOURCES: &[(&str, &str)] = &[
    ("identity", include_str!("../corpus/identity.lzc")),
    ("append", include_str!("../corpus/append.lzc")),
    ("map_not", include_str!("../corpus/map_not.lzc")),
    ("head", include_str!("../corpus/head.lzc")),
    ("filter", include_str!("../corpus/filter.lzc")),
    ("take", include_str!("../corpus/take.lzc")),
    ("insert", include_str!("../corpus/insert.lzc")),
    ("isort", include_str!("../corpus/isort.lzc")),
    ("pairs", include_str!("../corpus/pairs.lzc")),
];

/// Every bundled program, parsed.
pub fn programs() -> Vec<(&'static str, Program)> {
    SOURCES
        .iter()
        .map(|(name, src)| {
            let p = program(src).unwrap_or_else(|e| panic!("corpus program {name}: {e}"));
            (*name, p)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_program_parses_and_typechecks() {
        assert_eq!(programs().len(), SOURCES.len());
    }
}
