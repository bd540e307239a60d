#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "strokelab/experiment.hpp"

namespace strokelab::lab {
namespace {

using nlohmann::json;

json row_to_json(const ReportRow& row) {
    return json{{"technique", row.technique},
                {"classifier", row.classifier},
                {"params", row.params},
                {"epoch", row.epoch},
                {"seed", row.seed},
                {"f1", row.f1},
                {"auc", row.auc},
                {"accuracy", row.accuracy},
                {"runtime_seconds", row.runtime_seconds},
                {"caveat", row.caveat},
                {"error", row.error}};
}

ReportRow row_from_json(const json& j) {
    ReportRow row;
    row.technique = j.at("technique").get<std::string>();
    row.classifier = j.at("classifier").get<std::string>();
    row.params = j.at("params").get<std::string>();
    row.epoch = j.at("epoch").get<int>();
    row.seed = j.at("seed").get<std::uint64_t>();
    row.f1 = j.at("f1").get<double>();
    row.auc = j.at("auc").get<double>();
    row.accuracy = j.at("accuracy").get<double>();
    row.runtime_seconds = j.at("runtime_seconds").get<double>();
    row.caveat = j.at("caveat").get<std::string>();
    row.error = j.at("error").get<std::string>();
    return row;
}

std::string format_metric(double v) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(3);
    out << v;
    return out.str();
}

struct MeanRow {
    std::string classifier;
    int epoch = 0;
    double f1 = 0.0;
    double auc = 0.0;
    double accuracy = 0.0;
    std::size_t seeds = 0;
    std::string caveat;
};

/// Seed-mean per (classifier, epoch), in first-appearance order.
std::vector<MeanRow> seed_means(const std::vector<ReportRow>& rows, const std::string& technique) {
    std::vector<MeanRow> means;
    for (const auto& row : rows) {
        if (row.technique != technique || !row.error.empty()) {
            continue;
        }
        auto it = std::find_if(means.begin(), means.end(), [&](const MeanRow& m) {
            return m.classifier == row.classifier && m.epoch == row.epoch;
        });
        if (it == means.end()) {
            means.push_back({row.classifier, row.epoch, 0.0, 0.0, 0.0, 0, row.caveat});
            it = means.end() - 1;
        }
        it->f1 += row.f1;
        it->auc += row.auc;
        it->accuracy += row.accuracy;
        it->seeds += 1;
    }
    for (auto& m : means) {
        if (m.seeds > 0) {
            m.f1 /= static_cast<double>(m.seeds);
            m.auc /= static_cast<double>(m.seeds);
            m.accuracy /= static_cast<double>(m.seeds);
        }
    }
    return means;
}

}  // namespace

std::string ExperimentReport::to_json() const {
    json j;
    j["environment"] = environment;
    j["timestamp"] = timestamp;
    j["config"] = config_echo.empty() ? json::object() : json::parse(config_echo);
    json rows_json = json::array();
    for (const auto& row : rows) {
        rows_json.push_back(row_to_json(row));
    }
    j["rows"] = std::move(rows_json);
    return j.dump(2);
}

ExperimentReport parse_report_json(const std::string& json_text) {
    const json j = json::parse(json_text);
    ExperimentReport report;
    report.environment = j.at("environment").get<std::string>();
    report.timestamp = j.at("timestamp").get<std::string>();
    report.config_echo = j.at("config").dump();
    for (const auto& row : j.at("rows")) {
        report.rows.push_back(row_from_json(row));
    }
    return report;
}

std::vector<std::string> emit_report(const ExperimentReport& report, const std::string& out_dir,
                                     const ReportFormats& formats) {
    if (report.rows.empty()) {
        throw std::invalid_argument("emit_report: empty report");
    }
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> written;

    if (formats.json) {
        const auto path = std::filesystem::path(out_dir) / "report.json";
        std::ofstream out(path);
        if (!out) {
            throw std::runtime_error("emit_report: cannot write " + path.string());
        }
        out << report.to_json() << '\n';
        written.push_back(path.string());
    }

    if (formats.csv) {
        const auto path = std::filesystem::path(out_dir) / "report.csv";
        std::ofstream out(path);
        if (!out) {
            throw std::runtime_error("emit_report: cannot write " + path.string());
        }
        out.precision(17);
        out << "technique,classifier,params,epoch,seed,f1,auc,accuracy,runtime_seconds,caveat,"
               "error\n";
        for (const auto& row : report.rows) {
            out << row.technique << ',' << row.classifier << ",\"" << row.params << "\","
                << row.epoch << ',' << row.seed << ',' << row.f1 << ',' << row.auc << ','
                << row.accuracy << ',' << row.runtime_seconds << ",\"" << row.caveat << "\",\""
                << row.error << "\"\n";
        }
        written.push_back(path.string());
    }

    if (formats.markdown) {
        const auto path = std::filesystem::path(out_dir) / "report.md";
        std::ofstream out(path);
        if (!out) {
            throw std::runtime_error("emit_report: cannot write " + path.string());
        }

        std::vector<std::string> techniques;
        for (const auto& row : report.rows) {
            if (std::find(techniques.begin(), techniques.end(), row.technique) ==
                techniques.end()) {
                techniques.push_back(row.technique);
            }
        }

        std::vector<std::string> footnotes;
        out << "# Experiment report\n\n";
        for (const auto& technique : techniques) {
            const auto means = seed_means(report.rows, technique);
            const bool neural_block =
                !means.empty() && std::any_of(means.begin(), means.end(),
                                              [](const MeanRow& m) { return m.epoch > 0; });
            out << "## " << technique;
            if (!means.empty() && !means.front().caveat.empty()) {
                footnotes.push_back(means.front().caveat);
                out << " [^" << footnotes.size() << "]";
            }
            out << "\n\n";
            if (neural_block) {
                out << "| Model | Epoch | F1 | AUC | Accuracy |\n|---|---|---|---|---|\n";
                for (const auto& m : means) {
                    out << "| " << m.classifier << " | " << m.epoch << " | "
                        << format_metric(m.f1) << " | " << format_metric(m.auc) << " | "
                        << format_metric(m.accuracy) << " |\n";
                }
            } else {
                out << "| Classifier | F1 | AUC | Accuracy |\n|---|---|---|---|\n";
                for (const auto& m : means) {
                    out << "| " << m.classifier << " | " << format_metric(m.f1) << " | "
                        << format_metric(m.auc) << " | " << format_metric(m.accuracy) << " |\n";
                }
                out << "| XGB | n/a (out of scope) | n/a | n/a |\n";
            }
            out << '\n';

            // Failed configurations are part of the record.
            for (const auto& row : report.rows) {
                if (row.technique == technique && !row.error.empty()) {
                    out << "- failed: " << row.classifier << " (seed " << row.seed
                        << "): " << row.error << "\n";
                }
            }
        }
        for (std::size_t i = 0; i < footnotes.size(); ++i) {
            out << "[^" << (i + 1) << "]: " << footnotes[i] << "\n";
        }
        written.push_back(path.string());
    }
    return written;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("parse_config_file: cannot open " + path);
    }
    std::map<std::string, std::string> entries;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            continue;
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) {
                return std::string();
            }
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!key.empty()) {
            entries[key] = value;
        }
    }
    return entries;
}

void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    const auto parse_list = [](const std::string& s) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        std::string part;
        while (std::getline(ss, part, ',')) {
            if (!part.empty()) {
                parts.push_back(part);
            }
        }
        return parts;
    };

    if (key == "input") {
        cfg.input_path = value;
    } else if (key == "imputation") {
        if (value == "mean") {
            cfg.imputation = ingest::ImputationStrategy::Mean;
        } else if (value == "regression") {
            cfg.imputation = ingest::ImputationStrategy::Regression;
        } else {
            throw std::invalid_argument("config: imputation must be mean|regression");
        }
    } else if (key == "encoding") {
        if (value == "label") {
            cfg.onehot_encoding = false;
        } else if (value == "onehot") {
            cfg.onehot_encoding = true;
        } else {
            throw std::invalid_argument("config: encoding must be label|onehot");
        }
    } else if (key == "technique") {
        cfg.technique = technique_from_name(value);
    } else if (key == "epochs") {
        cfg.epochs.clear();
        for (const auto& part : parse_list(value)) {
            cfg.epochs.push_back(std::stoi(part));
        }
    } else if (key == "gamma") {
        cfg.gamma = std::stod(value);
    } else if (key == "seed") {
        cfg.seeds.clear();
        for (const auto& part : parse_list(value)) {
            cfg.seeds.push_back(std::stoull(part));
        }
    } else if (key == "test_fraction") {
        cfg.test_fraction = std::stod(value);
    } else if (key == "threshold") {
        cfg.dnn_threshold = std::stod(value);
    } else if (key == "out") {
        cfg.out_dir = value;
    } else if (key == "smote_k") {
        cfg.smote_cfg.k_neighbors = std::stoi(value);
    } else if (key == "smote_ratio") {
        cfg.smote_cfg.target_ratio = std::stod(value);
    } else if (key == "dnn_step") {
        cfg.dnn_step = std::stod(value);
    } else if (key == "pcakmeans_leakage_free") {
        cfg.pcakmeans_leakage_free = value == "1" || value == "true";
    } else if (key == "classifiers") {
        cfg.classifiers.clear();
        for (const auto& part : parse_list(value)) {
            bool found = false;
            for (const auto& spec : shallow::ClassifierSpec::tuned_roster()) {
                if (spec.name() == part) {
                    cfg.classifiers.push_back(spec);
                    found = true;
                    break;
                }
            }
            if (!found) {
                throw std::invalid_argument("config: unknown classifier '" + part + "'");
            }
        }
    } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
    }
}

}  // namespace strokelab::lab
