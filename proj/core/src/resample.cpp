#include "strokelab/resample.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

#include "strokelab/linalg.hpp"
#include "strokelab/rng.hpp"

namespace strokelab::resample {

// ---------------------------------------------------------------------------
// SMOTE
// ---------------------------------------------------------------------------

Dataset smote(const Dataset& ds, const SmoteConfig& cfg) {
    if (cfg.k_neighbors < 1) {
        throw std::invalid_argument("smote: k_neighbors must be >= 1");
    }
    if (!(cfg.target_ratio > 0.0 && cfg.target_ratio <= 1.0)) {
        throw std::invalid_argument("smote: target_ratio must be in (0,1]");
    }
    const auto minority_idx = ds.indices_of_label(1);
    const auto majority_idx = ds.indices_of_label(0);
    if (minority_idx.empty() || majority_idx.empty()) {
        throw std::invalid_argument("smote: both classes must be present");
    }
    if (minority_idx.size() <= static_cast<std::size_t>(cfg.k_neighbors)) {
        throw std::invalid_argument("smote: minority class must have more than k_neighbors rows");
    }

    const auto wanted = static_cast<std::size_t>(
        std::llround(cfg.target_ratio * static_cast<double>(majority_idx.size())));
    const std::size_t n_synthetic =
        wanted > minority_idx.size() ? wanted - minority_idx.size() : 0;

    // k nearest minority neighbours of every minority row (exact search).
    const std::size_t m = minority_idx.size();
    const auto k = static_cast<std::size_t>(cfg.k_neighbors);
    std::vector<std::vector<std::size_t>> neighbours(m);
    std::vector<std::pair<double, std::size_t>> dist(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            dist[j] = {j == i ? std::numeric_limits<double>::infinity()
                             : squared_distance(ds.X.row(minority_idx[i]),
                                                ds.X.row(minority_idx[j])),
                       j};
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(k), dist.end());
        neighbours[i].reserve(k);
        for (std::size_t j = 0; j < k; ++j) {
            neighbours[i].push_back(dist[j].second);
        }
    }

    Dataset out = ds;
    Rng rng = make_rng(cfg.seed);
    std::uniform_int_distribution<std::size_t> pick_row(0, m - 1);
    std::uniform_int_distribution<std::size_t> pick_neighbour(0, k - 1);
    std::vector<double> synthetic(ds.n_features());
    for (std::size_t s = 0; s < n_synthetic; ++s) {
        const std::size_t i = pick_row(rng);
        const std::size_t j = neighbours[i][pick_neighbour(rng)];
        const double lambda = cfg.fixed_lambda ? *cfg.fixed_lambda : uniform01(rng);
        auto base = ds.X.row(minority_idx[i]);
        auto other = ds.X.row(minority_idx[j]);
        for (std::size_t c = 0; c < synthetic.size(); ++c) {
            synthetic[c] = base[c] + lambda * (other[c] - base[c]);
        }
        out.X.push_row(synthetic);
        out.y.push_back(1);
    }
    return out;
}

// ---------------------------------------------------------------------------
// PCA
// ---------------------------------------------------------------------------

double PcaModel::cumulative_ratio() const {
    return std::accumulate(explained_variance_ratio.begin(), explained_variance_ratio.end(), 0.0);
}

PcaModel pca_fit(const Matrix& X, std::size_t n_components) {
    if (X.rows() < 2) {
        throw std::invalid_argument("pca_fit: need at least 2 rows");
    }
    if (n_components > std::min(X.rows() - 1, X.cols())) {
        throw std::invalid_argument("pca_fit: n_components exceeds min(rows-1, features)");
    }
    PcaModel model;
    model.means = column_means(X);
    const Matrix cov = covariance_matrix(X, model.means);
    const SymmetricEigen eig = symmetric_eigen(cov);

    double total = 0.0;
    for (double v : eig.values) {
        total += std::max(v, 0.0);
    }

    model.components = Matrix(n_components, X.cols());
    model.explained_variance_ratio.resize(n_components);
    for (std::size_t c = 0; c < n_components; ++c) {
        auto src = eig.vectors.row(c);
        // Sign convention: largest-magnitude entry positive.
        std::size_t arg = 0;
        for (std::size_t i = 1; i < src.size(); ++i) {
            if (std::abs(src[i]) > std::abs(src[arg])) {
                arg = i;
            }
        }
        const double sign = src[arg] < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < src.size(); ++i) {
            model.components(c, i) = sign * src[i];
        }
        model.explained_variance_ratio[c] =
            total > 0.0 ? std::max(eig.values[c], 0.0) / total : 0.0;
    }
    return model;
}

Matrix pca_transform(const PcaModel& model, const Matrix& X) {
    if (X.cols() != model.means.size()) {
        throw std::invalid_argument("pca_transform: feature dimension mismatch");
    }
    Matrix centered = X;
    for (std::size_t r = 0; r < centered.rows(); ++r) {
        auto row = centered.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) {
            row[c] -= model.means[c];
        }
    }
    return matmul_bt(centered, model.components);
}

// ---------------------------------------------------------------------------
// K-means
// ---------------------------------------------------------------------------

namespace {

double nearest_centroid(const Matrix& centroids, std::span<const double> point,
                        std::size_t& best) {
    double best_dist = std::numeric_limits<double>::infinity();
    best = 0;
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
        const double d = squared_distance(centroids.row(c), point);
        if (d < best_dist) {
            best_dist = d;
            best = c;
        }
    }
    return best_dist;
}

Matrix kmeans_plusplus_init(const Matrix& X, std::size_t k, Rng& rng) {
    const std::size_t n = X.rows();
    Matrix centroids(k, X.cols());
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    const std::size_t first = pick(rng);
    std::copy(X.row(first).begin(), X.row(first).end(), centroids.row(0).begin());

    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) {
        d2[i] = squared_distance(X.row(i), centroids.row(0));
    }
    for (std::size_t c = 1; c < k; ++c) {
        double total = std::accumulate(d2.begin(), d2.end(), 0.0);
        std::size_t chosen = 0;
        if (total > 0.0) {
            const double target = uniform01(rng) * total;
            double cum = 0.0;
            chosen = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                cum += d2[i];
                if (cum >= target) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = pick(rng);
        }
        std::copy(X.row(chosen).begin(), X.row(chosen).end(), centroids.row(c).begin());
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], squared_distance(X.row(i), centroids.row(c)));
        }
    }
    return centroids;
}

KmeansModel lloyd(const Matrix& X, Matrix centroids, std::size_t max_iter, double tol) {
    const std::size_t n = X.rows();
    const std::size_t k = centroids.rows();
    KmeansModel model;
    model.assignments.assign(n, 0);

    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            inertia += nearest_centroid(centroids, X.row(i), best);
            model.assignments[i] = best;
        }
        model.inertia = inertia;
        model.inertia_history.push_back(inertia);
        model.iterations = iter + 1;

        Matrix next(k, X.cols());
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            auto row = X.row(i);
            auto target = next.row(model.assignments[i]);
            for (std::size_t c = 0; c < row.size(); ++c) {
                target[c] += row[c];
            }
            ++counts[model.assignments[i]];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                // Re-seed an empty cluster to the farthest point.
                std::size_t farthest = 0;
                double far_dist = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double d =
                        squared_distance(X.row(i), centroids.row(model.assignments[i]));
                    if (d > far_dist) {
                        far_dist = d;
                        farthest = i;
                    }
                }
                std::copy(X.row(farthest).begin(), X.row(farthest).end(), next.row(c).begin());
            } else {
                auto row = next.row(c);
                for (auto& v : row) {
                    v /= static_cast<double>(counts[c]);
                }
            }
        }

        double shift = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            shift = std::max(shift, std::sqrt(squared_distance(next.row(c), centroids.row(c))));
        }
        centroids = std::move(next);
        if (shift < tol) {
            break;
        }
    }

    // Final assignment against the converged centroids.
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = 0;
        inertia += nearest_centroid(centroids, X.row(i), best);
        model.assignments[i] = best;
    }
    model.inertia = inertia;
    model.inertia_history.push_back(inertia);
    model.centroids = std::move(centroids);
    return model;
}

}  // namespace

KmeansModel kmeans_fit(const Matrix& X, std::size_t k, std::uint64_t seed, std::size_t max_iter,
                       double tol) {
    if (k == 0) {
        throw std::invalid_argument("kmeans_fit: k must be positive");
    }
    if (k > X.rows()) {
        throw std::invalid_argument("kmeans_fit: k exceeds the number of rows");
    }
    Rng rng = make_rng(seed);
    return lloyd(X, kmeans_plusplus_init(X, k, rng), max_iter, tol);
}

ElbowScan elbow_scan(const Matrix& X, const std::vector<std::size_t>& k_range,
                     std::uint64_t seed) {
    if (k_range.empty()) {
        throw std::invalid_argument("elbow_scan: empty k_range");
    }
    for (std::size_t k : k_range) {
        if (k > X.rows()) {
            throw std::invalid_argument("elbow_scan: k exceeds the number of rows");
        }
    }

    std::vector<std::size_t> ks = k_range;
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

    constexpr int kRestarts = 4;
    ElbowScan scan;
    std::optional<KmeansModel> previous;
    for (std::size_t k : ks) {
        std::optional<KmeansModel> best;
        for (int r = 0; r < kRestarts; ++r) {
            Rng rng = derive_rng(seed, k * 100 + static_cast<std::size_t>(r));
            KmeansModel model = lloyd(X, kmeans_plusplus_init(X, k, rng), 300, 1e-6);
            if (!best || model.inertia < best->inertia) {
                best = std::move(model);
            }
        }
        // Warm start from the previous k: keeps the curve non-increasing,
        // since extra centroids can only shrink distances.
        if (previous) {
            Matrix centroids(k, X.cols());
            const std::size_t reuse = previous->centroids.rows();
            for (std::size_t c = 0; c < reuse && c < k; ++c) {
                std::copy(previous->centroids.row(c).begin(), previous->centroids.row(c).end(),
                          centroids.row(c).begin());
            }
            std::vector<double> d2(X.rows());
            for (std::size_t i = 0; i < X.rows(); ++i) {
                std::size_t ignore = 0;
                d2[i] = nearest_centroid(previous->centroids, X.row(i), ignore);
            }
            for (std::size_t c = reuse; c < k; ++c) {
                const auto farthest = static_cast<std::size_t>(
                    std::max_element(d2.begin(), d2.end()) - d2.begin());
                std::copy(X.row(farthest).begin(), X.row(farthest).end(),
                          centroids.row(c).begin());
                for (std::size_t i = 0; i < X.rows(); ++i) {
                    d2[i] = std::min(d2[i], squared_distance(X.row(i), X.row(farthest)));
                }
            }
            KmeansModel warm = lloyd(X, std::move(centroids), 300, 1e-6);
            if (warm.inertia < best->inertia) {
                best = std::move(warm);
            }
        }
        scan.curve.push_back({k, best->inertia});
        previous = std::move(best);
    }

    // Maximum curvature by second difference over the inertia curve.
    scan.suggested_k = scan.curve.front().k;
    if (scan.curve.size() >= 3) {
        double best_curvature = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i + 1 < scan.curve.size(); ++i) {
            const double curvature = scan.curve[i - 1].inertia - 2.0 * scan.curve[i].inertia +
                                     scan.curve[i + 1].inertia;
            if (curvature > best_curvature) {
                best_curvature = curvature;
                scan.suggested_k = scan.curve[i].k;
            }
        }
    }
    return scan;
}

// ---------------------------------------------------------------------------
// PCA-Kmeans cluster undersampling
// ---------------------------------------------------------------------------

void ClusterUndersampleConfig::validate() const {
    if (n_clusters == 0 || n_components == 0) {
        throw std::invalid_argument("cluster_undersample: counts must be positive");
    }
    if (uniform_k) {
        if (*uniform_k < 1 || *uniform_k % 2 == 0) {
            throw std::invalid_argument("cluster_undersample: uniform_k must be odd positive");
        }
        return;
    }
    if (ks_schedule.size() != n_clusters) {
        throw std::invalid_argument("cluster_undersample: ks_schedule length != n_clusters");
    }
    for (int ks : ks_schedule) {
        if (ks < 1 || ks % 2 == 0) {
            throw std::invalid_argument("cluster_undersample: every k_s must be odd positive");
        }
    }
}

ClusterUndersampleResult cluster_undersample(const Dataset& ds,
                                             const ClusterUndersampleConfig& cfg,
                                             std::vector<std::string>* warnings) {
    cfg.validate();
    const auto minority = ds.indices_of_label(1);
    const auto majority = ds.indices_of_label(0);
    if (minority.empty() || majority.empty()) {
        throw std::invalid_argument("cluster_undersample: both classes must be present");
    }

    ClusterUndersampleResult result;
    result.pca = pca_fit(ds.X, cfg.n_components);
    const Matrix projected = pca_transform(result.pca, ds.X);
    result.kmeans = kmeans_fit(projected, cfg.n_clusters, cfg.seed);

    // Cluster member lists.
    std::vector<std::vector<std::size_t>> cluster_majority(cfg.n_clusters);
    std::vector<std::size_t> cluster_size(cfg.n_clusters, 0);
    for (std::size_t i = 0; i < ds.n_rows(); ++i) {
        const std::size_t c = result.kmeans.assignments[i];
        ++cluster_size[c];
        if (ds.y[i] == 0) {
            cluster_majority[c].push_back(i);
        }
    }

    // ks_schedule maps positionally to clusters in ascending size order.
    std::vector<std::size_t> cluster_order(cfg.n_clusters);
    std::iota(cluster_order.begin(), cluster_order.end(), std::size_t{0});
    std::stable_sort(cluster_order.begin(), cluster_order.end(), [&](std::size_t a, std::size_t b) {
        return cluster_size[a] < cluster_size[b];
    });

    for (std::size_t rank = 0; rank < cluster_order.size(); ++rank) {
        const std::size_t cluster = cluster_order[rank];
        const int ks = cfg.uniform_k ? *cfg.uniform_k : cfg.ks_schedule[rank];
        const auto& pool = cluster_majority[cluster];

        // Every minority row contributes its k_s nearest majority rows of
        // this cluster. A majority row close to several minority rows is
        // kept once per minority row; this repetition is what makes the
        // combined set land near twice the source size.
        std::vector<std::size_t> selected;
        if (pool.empty()) {
            if (warnings != nullptr) {
                warnings->push_back("cluster_undersample: cluster " + std::to_string(cluster) +
                                    " has no majority members, batch is minority-only");
            }
        } else {
            const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(ks),
                                                           pool.size());
            std::vector<std::pair<double, std::size_t>> dist(pool.size());
            for (std::size_t m : minority) {
                for (std::size_t p = 0; p < pool.size(); ++p) {
                    dist[p] = {squared_distance(projected.row(m), projected.row(pool[p])),
                               pool[p]};
                }
                std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(take),
                                  dist.end());
                for (std::size_t p = 0; p < take; ++p) {
                    selected.push_back(dist[p].second);
                }
            }
        }

        ClusterBatch batch;
        batch.cluster_index = cluster;
        batch.ks = ks;
        batch.provenance.reserve(minority.size() + selected.size());
        batch.provenance.insert(batch.provenance.end(), minority.begin(), minority.end());
        batch.provenance.insert(batch.provenance.end(), selected.begin(), selected.end());
        batch.data = ds.take_rows(batch.provenance);
        result.batches.push_back(std::move(batch));
    }

    // Combined set: concatenation in emitted batch order.
    std::vector<std::size_t> combined_rows;
    for (const auto& batch : result.batches) {
        combined_rows.insert(combined_rows.end(), batch.provenance.begin(),
                             batch.provenance.end());
    }
    result.combined = ds.take_rows(combined_rows);
    return result;
}

void export_batches(const ClusterUndersampleResult& result, const std::string& directory) {
    std::filesystem::create_directories(directory);
    nlohmann::json manifest = nlohmann::json::array();
    for (std::size_t b = 0; b < result.batches.size(); ++b) {
        const auto& batch = result.batches[b];
        const std::string csv_name = "batch_" + std::to_string(b) + ".csv";
        std::ofstream csv(std::filesystem::path(directory) / csv_name);
        if (!csv) {
            throw std::runtime_error("export_batches: cannot write " + csv_name);
        }
        csv.precision(17);
        for (const auto& name : batch.data.feature_names) {
            csv << name << ',';
        }
        csv << "label\n";
        for (std::size_t r = 0; r < batch.data.n_rows(); ++r) {
            auto row = batch.data.X.row(r);
            for (double v : row) {
                csv << v << ',';
            }
            csv << batch.data.y[r] << '\n';
        }
        manifest.push_back({{"file", csv_name},
                            {"cluster_index", batch.cluster_index},
                            {"k_s", batch.ks},
                            {"provenance", batch.provenance}});
    }
    std::ofstream js(std::filesystem::path(directory) / "manifest.json");
    js << manifest.dump(2) << '\n';
}

void export_elbow_csv(const ElbowScan& scan, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("export_elbow_csv: cannot write " + path);
    }
    out.precision(17);
    out << "k,inertia\n";
    for (const auto& point : scan.curve) {
        out << point.k << ',' << point.inertia << '\n';
    }
}

}  // namespace strokelab::resample
