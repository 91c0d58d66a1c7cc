//! Shared inputs for the pipeline benchmarks.

pub const THREE_LETTER: &str = include_str!("../../../fixtures/three_letter.aut");
pub const FOUR_LETTER: &str = include_str!("../../../fixtures/four_letter.aut");
pub const SIX_LETTER: &str = include_str!("../../../fixtures/six_letter.aut");
pub const FOURTEEN_LETTER: &str = include_str!("../../../fixtures/fourteen_letter.aut");

pub fn inputs() -> [(&'static str, &'static str); 4] {
    [
        ("three_letter", THREE_LETTER),
        ("four_letter", FOUR_LETTER),
        ("six_letter", SIX_LETTER),
        ("fourteen_letter", FOURTEEN_LETTER),
    ]
}
