//! Iterative matching of the two Raman pump rates and detunings.

/// Placeholder; implemented together with the analysis layer.
#[derive(Debug, Clone)]
pub struct TuneKnobs;
#[derive(Debug, Clone)]
pub struct MatchRecord;
#[derive(Debug, Clone)]
pub struct MatchOutcome;
#[derive(Debug, Clone)]
pub struct MatchOptions;
pub fn match_raman_rates() {}
