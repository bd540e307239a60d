#pragma once

#include <cstdint>

#include "strokelab/table.hpp"

namespace strokelab::synth {

/// Generator settings for a surrogate stroke CSV with the public dataset's
/// schema and summary statistics (row count, class imbalance, BMI
/// missingness, outliers, duplicates, one "Other" gender row).
struct SynthConfig {
    std::size_t n_rows = 5110;
    std::uint64_t seed = 1234;
    /// Fraction of rows whose bmi cell is the "N/A" marker.
    double missing_bmi_fraction = 0.04;
    /// Rows younger than the age-25 cleaning cut.
    double under25_fraction = 0.2516;
    std::size_t bmi_outlier_rows = 12;
    std::size_t duplicate_rows = 6;

    /// Additive stroke-risk model: a small base rate plus sharp pockets.
    /// The age pocket fires above a latent old-age knee, the pattern
    /// pattern pocket on an against-the-grain corner (current smokers
    /// younger than the smoking gradient implies) that moves pair
    /// associations more than marginals, and the contrast slope on the
    /// signed glucose/bmi residual gap.
    double risk_base = 0.006;
    double risk_age_slope = 0.004;
    double risk_pocket_age = 0.16;
    double risk_pocket_pattern = 0.14;
    double risk_contrast_slope = 0.07;
    double risk_cap = 0.35;
};

/// Deterministic synthetic stroke table in the raw CSV schema
/// (id, gender, age, ..., stroke).
ingest::RawTable generate_stroke_table(const SynthConfig& cfg = {});

/// Generate and save as CSV in one step.
void write_stroke_csv(const std::string& path, const SynthConfig& cfg = {});

}  // namespace strokelab::synth
