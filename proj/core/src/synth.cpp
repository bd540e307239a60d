#include "strokelab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "strokelab/rng.hpp"

namespace strokelab::synth {
namespace {

// Latent-factor coefficients behind the adult rows. One shared "age"
// factor drives age, marriage and smoking; a cardio factor drives the
// hypertension/heart-disease pair; a metabolic factor the glucose/bmi
// pair; a demographic factor the gender/residence pair. Stroke risk loads
// on the factors plus the glucose-bmi residual contrast, which keeps
// per-feature class shifts mild while a multivariate model can still
// separate the classes.
struct AdultRow {
    double age = 0.0;
    bool married = false;
    int smoking = 0;  // ordinal rank
    bool hypertension = false;
    bool heart_disease = false;
    double glucose = 0.0;
    double bmi = 0.0;
    bool male = false;
    bool urban = false;
    int work = 0;  // 0 Private, 1 Self-employed, 2 Govt_job
    bool stroke = false;
};

AdultRow draw_adult(const SynthConfig& cfg, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double f = normal(rng);  // age factor
    const double c = normal(rng);  // cardio factor
    const double m = normal(rng);  // metabolic factor
    const double g = normal(rng);  // demographic factor

    AdultRow row;
    row.age = std::clamp(53.0 + 16.0 * f, 25.0, 82.0);
    row.married = f + 0.35 * normal(rng) > -0.62;

    const double smoke_lat = 0.88 * f + 0.48 * normal(rng);
    if (smoke_lat < -1.17) {
        row.smoking = 0;  // Unknown
    } else if (smoke_lat < 0.05) {
        row.smoking = 1;  // never smoked
    } else if (smoke_lat < 0.70) {
        row.smoking = 2;  // formerly smoked
    } else {
        row.smoking = 3;  // smokes
    }

    const double cardio_lat = 0.93 * c + 0.08 * f;
    row.hypertension = cardio_lat + 0.27 * normal(rng) > 1.12;
    row.heart_disease = cardio_lat + 0.27 * normal(rng) > 1.26;

    const double eps_glu = normal(rng);
    const double eps_bmi = normal(rng);
    const double met_lat = 0.88 * m + 0.20 * f;
    row.glucose = std::clamp(96.0 + 27.0 * (met_lat + 0.36 * eps_glu), 55.1, 271.7);
    row.bmi = std::clamp(28.6 + 6.2 * (met_lat + 0.36 * eps_bmi), 14.1, 55.0);

    row.male = g + 0.28 * normal(rng) > 0.24;
    row.urban = g + 0.28 * normal(rng) > 0.0;

    const double work_lat = 0.25 * f + 0.97 * normal(rng);
    if (work_lat > 0.95) {
        row.work = 1;  // Self-employed
    } else if (work_lat > 0.45) {
        row.work = 2;  // Govt_job
    } else {
        row.work = 0;  // Private
    }

    const double gap = eps_glu - eps_bmi;
    double risk = cfg.risk_base + cfg.risk_age_slope * f;
    if (f > 1.05) {
        risk += cfg.risk_pocket_age;
    }
    if (row.smoking == 3 && f < 0.0) {
        risk += cfg.risk_pocket_pattern;
    }
    risk += cfg.risk_contrast_slope * std::max(gap - 1.0, 0.0);
    risk = std::clamp(risk, 0.0005, cfg.risk_cap);
    row.stroke = uniform01(rng) < risk;
    return row;
}

std::string smoking_text(int rank) {
    switch (rank) {
        case 0: return "Unknown";
        case 1: return "never smoked";
        case 2: return "formerly smoked";
        default: return "smokes";
    }
}

std::string work_text(int work) {
    switch (work) {
        case 1: return "Self-employed";
        case 2: return "Govt_job";
        default: return "Private";
    }
}

double round_to(double v, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::round(v * scale) / scale;
}

std::vector<ingest::Cell> adult_to_cells(const AdultRow& row) {
    return {
        ingest::Cell{0.0},  // id assigned later
        ingest::Cell{std::string(row.male ? "Male" : "Female")},
        ingest::Cell{std::round(row.age)},
        ingest::Cell{row.hypertension ? 1.0 : 0.0},
        ingest::Cell{row.heart_disease ? 1.0 : 0.0},
        ingest::Cell{std::string(row.married ? "Yes" : "No")},
        ingest::Cell{work_text(row.work)},
        ingest::Cell{std::string(row.urban ? "Urban" : "Rural")},
        ingest::Cell{round_to(row.glucose, 2)},
        ingest::Cell{round_to(row.bmi, 1)},
        ingest::Cell{smoking_text(row.smoking)},
        ingest::Cell{row.stroke ? 1.0 : 0.0},
    };
}

std::vector<ingest::Cell> draw_under25(Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double age_raw = 0.08 + uniform01(rng) * 24.8;
    const bool child = age_raw < 16.0;
    // Floor keeps every row strictly under the age-25 cleaning cut.
    const double age = child && age_raw < 2.0 ? round_to(age_raw, 2) : std::floor(age_raw);

    std::string work = "children";
    if (!child) {
        const double u = uniform01(rng);
        work = u < 0.25 ? "Never_worked" : (u < 0.85 ? "Private" : "Govt_job");
    }
    const double glucose = std::clamp(92.0 + 14.0 * normal(rng), 55.1, 230.0);
    const double bmi = std::clamp(21.0 + 4.5 * normal(rng) + 0.25 * age_raw, 10.3, 45.0);
    const bool married = !child && uniform01(rng) < 0.12;
    const std::string smoking =
        child ? "Unknown"
              : (uniform01(rng) < 0.55 ? "never smoked"
                                       : (uniform01(rng) < 0.5 ? "Unknown" : "smokes"));
    const bool stroke = uniform01(rng) < 0.0015;

    return {
        ingest::Cell{0.0},
        ingest::Cell{std::string(uniform01(rng) < 0.5 ? "Male" : "Female")},
        ingest::Cell{age},
        ingest::Cell{uniform01(rng) < 0.02 ? 1.0 : 0.0},
        ingest::Cell{uniform01(rng) < 0.01 ? 1.0 : 0.0},
        ingest::Cell{std::string(married ? "Yes" : "No")},
        ingest::Cell{std::move(work)},
        ingest::Cell{std::string(uniform01(rng) < 0.5 ? "Urban" : "Rural")},
        ingest::Cell{round_to(glucose, 2)},
        ingest::Cell{round_to(bmi, 1)},
        ingest::Cell{smoking},
        ingest::Cell{stroke ? 1.0 : 0.0},
    };
}

}  // namespace

ingest::RawTable generate_stroke_table(const SynthConfig& cfg) {
    Rng rng = make_rng(cfg.seed);

    const auto n_under25 = static_cast<std::size_t>(
        std::llround(cfg.under25_fraction * static_cast<double>(cfg.n_rows)));
    const std::size_t n_adults =
        cfg.n_rows - n_under25 - 1 - cfg.bmi_outlier_rows - cfg.duplicate_rows;

    ingest::RawTable table;
    table.column_order = ingest::stroke_schema();

    std::vector<std::vector<ingest::Cell>> rows;
    rows.reserve(cfg.n_rows);
    for (std::size_t i = 0; i < n_adults; ++i) {
        rows.push_back(adult_to_cells(draw_adult(cfg, rng)));
    }

    // Missing bmi markers land on plain adult rows before the special rows
    // exist, so duplicate pairs stay identical and outlier rows keep the
    // bmi that gets them cleaned away.
    const std::size_t bmi_col = 9;
    const auto n_missing = static_cast<std::size_t>(
        std::llround(cfg.missing_bmi_fraction * static_cast<double>(cfg.n_rows)));
    std::size_t planted = 0;
    while (planted < n_missing) {
        const auto r = static_cast<std::size_t>(uniform01(rng) * 0.99999 *
                                                static_cast<double>(n_adults));
        if (!ingest::is_missing(rows[r][bmi_col])) {
            rows[r][bmi_col] = ingest::Cell{std::monostate{}};
            ++planted;
        }
    }

    // One "Other" gender row (removed by cleaning).
    {
        AdultRow adult = draw_adult(cfg, rng);
        auto cells = adult_to_cells(adult);
        cells[1] = ingest::Cell{std::string("Other")};
        rows.push_back(std::move(cells));
    }

    // BMI outliers above the cleaning cut.
    for (std::size_t i = 0; i < cfg.bmi_outlier_rows; ++i) {
        AdultRow adult = draw_adult(cfg, rng);
        adult.bmi = 61.0 + uniform01(rng) * 36.0;
        rows.push_back(adult_to_cells(adult));
    }

    // Exact duplicates of existing adult rows (ids differ; the cleaner
    // compares rows after dropping the id column).
    for (std::size_t i = 0; i < cfg.duplicate_rows; ++i) {
        const std::size_t source = static_cast<std::size_t>(uniform01(rng) * 0.999 *
                                                            static_cast<double>(n_adults));
        rows.push_back(rows[source]);
    }

    for (std::size_t i = 0; i < n_under25; ++i) {
        rows.push_back(draw_under25(rng));
    }

    std::shuffle(rows.begin(), rows.end(), rng);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i][0] = ingest::Cell{static_cast<double>(i + 1)};
    }
    table.rows = std::move(rows);
    return table;
}

void write_stroke_csv(const std::string& path, const SynthConfig& cfg) {
    ingest::save_csv(generate_stroke_table(cfg), path);
}

}  // namespace strokelab::synth
