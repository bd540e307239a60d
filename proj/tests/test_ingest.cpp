#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "strokelab/ingest.hpp"
#include "strokelab/synth.hpp"
#include "strokelab/table.hpp"

using namespace strokelab;
using namespace strokelab::ingest;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

RawTable tiny_stroke_table() {
    const std::string path = temp_path("tiny_stroke.csv");
    write_file(path,
               "id,gender,age,hypertension,heart_disease,ever_married,work_type,"
               "Residence_type,avg_glucose_level,bmi,smoking_status,stroke\n"
               "1,Male,67,0,1,Yes,Private,Urban,228.69,36.6,formerly smoked,1\n"
               "2,Female,61,0,0,Yes,Self-employed,Rural,202.21,N/A,never smoked,1\n"
               "3,Male,80,0,1,Yes,Private,Rural,105.92,32.5,never smoked,1\n"
               "4,Female,49,0,0,Yes,Private,Urban,171.23,34.4,smokes,0\n"
               "5,Female,79,1,0,Yes,Self-employed,Rural,174.12,24,never smoked,0\n"
               "6,Male,45,0,0,No,Govt_job,Urban,90.1,29.1,Unknown,0\n");
    return load_csv(path);
}

}  // namespace

TEST_CASE("load_csv parses numbers, text and missing markers") {
    const RawTable t = tiny_stroke_table();
    CHECK(t.n_rows() == 6);
    CHECK(t.n_cols() == 12);
    CHECK(*as_number(t.rows[0][2]) == 67.0);
    CHECK(*as_text(t.rows[0][1]) == "Male");
    CHECK(is_missing(t.rows[1][9]));  // bmi N/A
}

TEST_CASE("load_csv error paths") {
    CHECK_THROWS(load_csv(temp_path("does_not_exist_xyz.csv")));

    const std::string header_only = temp_path("header_only.csv");
    write_file(header_only, "a,b,c\n");
    CHECK_THROWS_WITH_AS(load_csv(header_only), doctest::Contains("no data rows"),
                         std::runtime_error);

    const std::string bad_row = temp_path("bad_row.csv");
    write_file(bad_row, "a,b\n1,2\n3\n");
    CHECK_THROWS_WITH_AS(load_csv(bad_row), doctest::Contains("line 3"), std::runtime_error);

    const std::string missing_col = temp_path("missing_col.csv");
    write_file(missing_col, "a,b\n1,2\n");
    CsvOptions options;
    options.required_columns = {"stroke"};
    CHECK_THROWS_WITH_AS(load_csv(missing_col, options), doctest::Contains("stroke"),
                         std::runtime_error);
}

TEST_CASE("load_csv header aliases") {
    const std::string path = temp_path("alias.csv");
    write_file(path, "patient_id,b\n1,2\n");
    CsvOptions options;
    options.header_aliases = {{"patient_id", "id"}};
    const RawTable t = load_csv(path, options);
    CHECK(t.has_column("id"));
}

TEST_CASE("clean removes outliers, odd gender and duplicates") {
    const std::string path = temp_path("clean_me.csv");
    write_file(path,
               "id,gender,age,hypertension,heart_disease,ever_married,work_type,"
               "Residence_type,avg_glucose_level,bmi,smoking_status,stroke\n"
               "1,Male,67,0,1,Yes,Private,Urban,228.69,36.6,formerly smoked,1\n"
               "2,Male,67,0,1,Yes,Private,Urban,228.69,65,formerly smoked,1\n"  // bmi > 60
               "3,Male,20,0,1,Yes,Private,Urban,228.69,36.6,formerly smoked,0\n"  // age < 25
               "4,Other,40,0,0,No,Private,Urban,100,30,Unknown,0\n"               // gender Other
               "5,Male,67,0,1,Yes,Private,Urban,228.69,36.6,formerly smoked,1\n"  // dup of 1
               "6,Female,50,0,0,Yes,Govt_job,Rural,95,27,never smoked,0\n");
    const RawTable raw = load_csv(path);
    const RawTable cleaned = clean(raw, CleaningRules{});
    CHECK(cleaned.n_rows() == 2);
    CHECK_FALSE(cleaned.has_column("id"));
    CHECK(*as_number(cleaned.rows[0][1]) == 67.0);  // row order preserved
    CHECK(*as_number(cleaned.rows[1][1]) == 50.0);

    // Idempotence: a second clean is a no-op.
    const RawTable twice = clean(cleaned, CleaningRules{});
    CHECK(twice.rows == cleaned.rows);
    CHECK(twice.column_order == cleaned.column_order);
}

TEST_CASE("clean keeps age exactly at the cut and bmi exactly at the cap") {
    const std::string path = temp_path("clean_edges.csv");
    write_file(path,
               "id,gender,age,hypertension,heart_disease,ever_married,work_type,"
               "Residence_type,avg_glucose_level,bmi,smoking_status,stroke\n"
               "1,Male,25,0,0,No,Private,Urban,100,60,never smoked,0\n"
               "2,Female,30,0,0,No,Private,Urban,100,,never smoked,1\n");
    const RawTable cleaned = clean(load_csv(path), CleaningRules{});
    CHECK(cleaned.n_rows() == 2);  // age=25 stays, bmi=60 stays, missing bmi stays
}

TEST_CASE("clean rejects rules over unknown columns") {
    const RawTable t = tiny_stroke_table();
    CleaningRules rules;
    rules.bmi_column = "body_mass";
    CHECK_THROWS(clean(t, rules));
}

TEST_CASE("mean imputation fills the column mean") {
    const std::string path = temp_path("impute_mean.csv");
    write_file(path, "x,bmi\n0,1\n0,2\n0,\n");
    const RawTable t = load_csv(path);
    ImputationSpec spec;
    spec.strategy = ImputationStrategy::Mean;
    const RawTable filled = impute(t, spec);
    CHECK(*as_number(filled.rows[2][1]) == doctest::Approx(1.5));
}

TEST_CASE("regression imputation recovers an exact linear rule") {
    const std::string path = temp_path("impute_reg.csv");
    std::string content = "x,bmi\n";
    for (int i = 1; i <= 10; ++i) {
        content += std::to_string(i) + "," + std::to_string(2 * i) + "\n";
    }
    content += "21,\n";
    write_file(path, content);
    ImputationSpec spec;
    spec.strategy = ImputationStrategy::Regression;
    const RawTable filled = impute(load_csv(path), spec);
    CHECK(*as_number(filled.rows[10][1]) == doctest::Approx(42.0).epsilon(1e-9));
}

TEST_CASE("impute is the identity without missing cells") {
    const std::string path = temp_path("impute_id.csv");
    write_file(path, "x,bmi\n1,5\n2,6\n");
    const RawTable t = load_csv(path);
    const RawTable out = impute(t, ImputationSpec{});
    CHECK(out.rows == t.rows);
}

TEST_CASE("impute rejects missingness outside the target column") {
    const std::string path = temp_path("impute_bad.csv");
    write_file(path, "x,bmi\n,5\n2,6\n");
    CHECK_THROWS(impute(load_csv(path), ImputationSpec{}));

    const std::string path2 = temp_path("impute_all_missing.csv");
    write_file(path2, "x,bmi\n1,\n2,\n");
    CHECK_THROWS(impute(load_csv(path2), ImputationSpec{}));
}

TEST_CASE("encode: ordinal, one-hot, binary") {
    const RawTable t = tiny_stroke_table();
    const RawTable cleaned = clean(t, CleaningRules{});
    ImputationSpec imp;
    const RawTable filled = impute(cleaned, imp);

    SUBCASE("ordinal smoking codes") {
        const Dataset ds = encode(filled, EncodingSpec::stroke_default(false));
        std::size_t smoking = 0;
        for (std::size_t c = 0; c < ds.feature_names.size(); ++c) {
            if (ds.feature_names[c] == "smoking_status") {
                smoking = c;
            }
        }
        // Unknown(0) < never(1) < formerly(2) < smokes(3)
        CHECK(ds.X(0, smoking) == 2.0);
        CHECK(ds.X(1, smoking) == 1.0);
        CHECK(ds.X(3, smoking) == 3.0);
        CHECK(ds.X(5, smoking) == 0.0);
    }

    SUBCASE("one-hot work type with named indicator columns") {
        const Dataset ds = encode(filled, EncodingSpec::stroke_default(true));
        int indicators = 0;
        for (const auto& name : ds.feature_names) {
            indicators += name.rfind("work_type_", 0) == 0 ? 1 : 0;
        }
        CHECK(indicators == 3);
        CHECK(ds.onehot_groups.size() == 1);
        CHECK(ds.onehot_groups[0].size() == 3);
        // Exactly one indicator fires per row.
        for (std::size_t r = 0; r < ds.n_rows(); ++r) {
            double total = 0.0;
            for (std::size_t c : ds.onehot_groups[0]) {
                total += ds.X(r, c);
            }
            CHECK(total == 1.0);
        }
    }

    SUBCASE("binary yes/no maps to 1/0 and label comes from stroke") {
        const Dataset ds = encode(filled, EncodingSpec::stroke_default(false));
        std::size_t married = 0;
        for (std::size_t c = 0; c < ds.feature_names.size(); ++c) {
            if (ds.feature_names[c] == "ever_married") {
                married = c;
            }
        }
        CHECK(ds.X(0, married) == 1.0);  // Yes
        CHECK(ds.X(5, married) == 0.0);  // No
        CHECK(ds.y == std::vector<int>{1, 1, 1, 0, 0, 0});
    }
}

TEST_CASE("encode error paths") {
    const std::string path = temp_path("encode_bad.csv");
    write_file(path, "color,stroke\nred,0\ngreen,1\nblue,0\n");
    const RawTable t = load_csv(path);

    EncodingSpec ordinal_spec;
    ordinal_spec.columns["color"] = {EncodingKind::Ordinal, {"red", "green"}};  // blue missing
    CHECK_THROWS(encode(t, ordinal_spec));

    EncodingSpec binary_spec;
    binary_spec.columns["color"] = {EncodingKind::Binary, {}};
    CHECK_THROWS(encode(t, binary_spec));
}

TEST_CASE("label encoding is a bijection over observed categories") {
    const std::string path = temp_path("encode_bijection.csv");
    write_file(path, "city,stroke\nparis,0\nlyon,1\nnice,0\nlyon,0\nparis,1\n");
    const RawTable t = load_csv(path);
    const Dataset ds = encode(t, EncodingSpec{});
    const auto cats = label_categories(t, "city");
    CHECK(cats == std::vector<std::string>{"paris", "lyon", "nice"});
    for (std::size_t r = 0; r < t.n_rows(); ++r) {
        const auto code = static_cast<std::size_t>(ds.X(r, 0));
        CHECK(cats[code] == *as_text(t.rows[r][0]));
    }
}

TEST_CASE("standardize uses train statistics only") {
    Dataset train;
    train.X = Matrix::from_rows({{0.0, 5.0}, {2.0, 5.0}});
    train.y = {0, 1};
    train.feature_names = {"a", "b"};

    Dataset test = train;
    test.X = Matrix::from_rows({{1.0, 7.0}});
    test.y = {0};

    std::vector<std::string> warnings;
    const auto [train_std, others] = standardize(train, {test}, &warnings);

    CHECK(train_std.X(0, 0) == doctest::Approx(-1.0));
    CHECK(train_std.X(1, 0) == doctest::Approx(1.0));
    // Constant column: stddev treated as 1, warning emitted.
    CHECK(train_std.X(0, 1) == doctest::Approx(0.0));
    CHECK(warnings.size() == 1);

    // Test row transformed with train stats, not its own.
    CHECK(others[0].X(0, 0) == doctest::Approx(0.0));
    CHECK(others[0].X(0, 1) == doctest::Approx(2.0));
    CHECK(train_std.standardization_stats.has_value());
}

TEST_CASE("standardized train columns have zero mean and unit stddev") {
    ingest::RawTable raw = synth::generate_stroke_table([]{ synth::SynthConfig c; c.n_rows = 512; c.seed = 42; c.missing_bmi_fraction = 0.0; c.under25_fraction = 0.25; c.bmi_outlier_rows = 2; c.duplicate_rows = 1; return c; }());
    const Dataset ds = encode(impute(clean(raw, CleaningRules{}), ImputationSpec{}),
                              EncodingSpec::stroke_default(true));
    const auto [std_ds, rest] = standardize(ds, {});
    const auto means = column_means(std_ds.X);
    const auto stds = column_stddevs(std_ds.X, means);
    for (std::size_t c = 0; c < std_ds.n_features(); ++c) {
        CHECK(std::abs(means[c]) < 1e-9);
        CHECK(std::abs(stds[c] - 1.0) < 1e-9);
    }
}

TEST_CASE("split stratification arithmetic") {
    Dataset ds;
    ds.feature_names = {"x"};
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 100; ++i) {
        rows.push_back({static_cast<double>(i)});
        ds.y.push_back(i < 5 ? 1 : 0);
    }
    ds.X = Matrix::from_rows(rows);

    const auto [train, test] = split(ds, 0.2, 7);
    CHECK(test.n_rows() == 20);
    CHECK(test.count_label(1) == 1);
    CHECK(test.count_label(0) == 19);
    CHECK(train.n_rows() == 80);

    // Determinism and partition.
    const auto [train_idx, test_idx] = split_indices(ds.y, 0.2, 7);
    const auto [train_idx2, test_idx2] = split_indices(ds.y, 0.2, 7);
    CHECK(train_idx == train_idx2);
    CHECK(test_idx == test_idx2);
    std::set<std::size_t> all(train_idx.begin(), train_idx.end());
    all.insert(test_idx.begin(), test_idx.end());
    CHECK(all.size() == 100);

    CHECK_THROWS(split(ds, 0.0, 7));
    Dataset single = ds;
    single.y.assign(100, 0);
    single.y[0] = 1;
    CHECK_THROWS(split(single, 0.2, 7));
}

TEST_CASE("synthetic csv matches the public dataset's shape") {
    const std::string path = temp_path("synth_full.csv");
    synth::write_stroke_csv(path);
    CsvOptions options;
    options.required_columns = stroke_schema();
    const RawTable raw = load_csv(path, options);
    CHECK(raw.n_rows() == 5110);
    CHECK(raw.n_cols() == 12);

    std::size_t missing_bmi = 0;
    const std::size_t bmi = raw.column_index("bmi");
    for (const auto& row : raw.rows) {
        missing_bmi += is_missing(row[bmi]) ? 1 : 0;
    }
    CHECK(missing_bmi > 150);
    CHECK(missing_bmi < 260);

    const RawTable cleaned = clean(raw, CleaningRules{});
    CHECK(cleaned.n_rows() >= 3766);
    CHECK(cleaned.n_rows() <= 3846);

    // Less than 5% stroke prevalence after cleaning, and cleaning removed
    // every under-25 row, the Other gender and the bmi outliers.
    const std::size_t stroke_col = cleaned.column_index("stroke");
    std::size_t strokes = 0;
    for (const auto& row : cleaned.rows) {
        strokes += *as_number(row[stroke_col]) == 1.0 ? 1 : 0;
    }
    CHECK(static_cast<double>(strokes) / static_cast<double>(cleaned.n_rows()) < 0.06);
    CHECK(strokes > 120);

    // Only the three adult work types survive.
    const std::size_t work = cleaned.column_index("work_type");
    std::set<std::string> works;
    for (const auto& row : cleaned.rows) {
        works.insert(*as_text(row[work]));
    }
    CHECK(works == std::set<std::string>{"Govt_job", "Private", "Self-employed"});
}

TEST_CASE("stratified split of the cleaned stroke data lands near 20%") {
    const std::string path = temp_path("synth_split.csv");
    synth::write_stroke_csv(path);
    const RawTable cleaned = clean(load_csv(path), CleaningRules{});
    const Dataset ds = encode(impute(cleaned, ImputationSpec{}),
                              EncodingSpec::stroke_default(true));
    const auto [train, test] = split(ds, 0.2, 7);
    // Expected counts from the stratification arithmetic itself.
    const auto expect_pos = static_cast<std::size_t>(
        std::llround(0.2 * static_cast<double>(ds.count_label(1))));
    const auto expect_neg = static_cast<std::size_t>(
        std::llround(0.2 * static_cast<double>(ds.count_label(0))));
    CHECK(test.count_label(1) == expect_pos);
    CHECK(test.count_label(0) == expect_neg);
    CHECK(test.n_rows() == expect_pos + expect_neg);
    // ~761 rows at the nominal cleaned size.
    CHECK(test.n_rows() > 700);
    CHECK(test.n_rows() < 820);
}

TEST_CASE("export snapshot writes csv and sidecar json") {
    const RawTable t = tiny_stroke_table();
    const RawTable filled = impute(clean(t, CleaningRules{}), ImputationSpec{});
    const auto spec = EncodingSpec::stroke_default(true);
    const Dataset ds = encode(filled, spec);
    const std::string csv = temp_path("snapshot.csv");
    const std::string json = temp_path("snapshot.json");
    export_snapshot(ds, spec, csv, json);

    std::ifstream check_csv(csv);
    std::string header;
    std::getline(check_csv, header);
    CHECK(header.find("stroke") != std::string::npos);
    std::ifstream check_json(json);
    std::string blob((std::istreambuf_iterator<char>(check_json)),
                     std::istreambuf_iterator<char>());
    CHECK(blob.find("feature_names") != std::string::npos);
    CHECK(blob.find("encoding") != std::string::npos);
}
