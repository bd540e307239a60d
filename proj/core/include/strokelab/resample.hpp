#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "strokelab/dataset.hpp"
#include "strokelab/matrix.hpp"

namespace strokelab::resample {

// ---------------------------------------------------------------------------
// SMOTE
// ---------------------------------------------------------------------------

struct SmoteConfig {
    int k_neighbors = 5;
    /// minority/majority ratio after oversampling.
    double target_ratio = 1.0;
    std::uint64_t seed = 7;
    /// Test hook: fixes the interpolation coefficient instead of drawing
    /// it uniformly from [0,1].
    std::optional<double> fixed_lambda;
};

/// Append synthetic minority rows interpolated between a random minority
/// row and one of its k nearest minority neighbours (exact Euclidean
/// search): synthetic = row + lambda * (neighbour - row). Original rows
/// are untouched and stay as the output prefix. Throws when the minority
/// class has <= k_neighbors members or only one class is present.
Dataset smote(const Dataset& ds, const SmoteConfig& cfg);

// ---------------------------------------------------------------------------
// PCA
// ---------------------------------------------------------------------------

struct PcaModel {
    /// Orthonormal rows, one principal component per row.
    Matrix components;
    /// Per-component variance fraction of the total (all-features) variance.
    std::vector<double> explained_variance_ratio;
    std::vector<double> means;

    double cumulative_ratio() const;
};

/// Top eigenvectors of the sample covariance of centered X. Sign
/// convention: the largest-magnitude entry of each component is positive.
PcaModel pca_fit(const Matrix& X, std::size_t n_components);

/// (X - means) * components^T.
Matrix pca_transform(const PcaModel& model, const Matrix& X);

// ---------------------------------------------------------------------------
// K-means
// ---------------------------------------------------------------------------

struct KmeansModel {
    Matrix centroids;
    std::vector<std::size_t> assignments;
    double inertia = 0.0;
    std::size_t iterations = 0;
    /// Inertia after each Lloyd iteration (non-increasing).
    std::vector<double> inertia_history;
};

/// Lloyd iterations from k-means++ initialization; empty clusters are
/// re-seeded to the farthest point. Deterministic per seed.
KmeansModel kmeans_fit(const Matrix& X, std::size_t k, std::uint64_t seed,
                       std::size_t max_iter = 300, double tol = 1e-6);

struct ElbowPoint {
    std::size_t k = 0;
    double inertia = 0.0;
};

struct ElbowScan {
    std::vector<ElbowPoint> curve;
    /// k at the maximum-curvature point of the inertia curve.
    std::size_t suggested_k = 0;
};

/// One k-means fit per k (best of a few seeded restarts, warm-started from
/// the previous k so the curve is non-increasing in k).
ElbowScan elbow_scan(const Matrix& X, const std::vector<std::size_t>& k_range,
                     std::uint64_t seed);

// ---------------------------------------------------------------------------
// PCA-Kmeans cluster undersampling
// ---------------------------------------------------------------------------

struct ClusterUndersampleConfig {
    std::size_t n_components = 7;
    std::size_t n_clusters = 5;
    /// One k_s per cluster, assigned in ascending cluster-size order.
    std::vector<int> ks_schedule = {3, 5, 7, 9, 11};
    std::uint64_t seed = 7;
    /// Alternative sweep reading: a single k_s applied to every cluster.
    std::optional<int> uniform_k;

    void validate() const;
};

/// One K-means cluster's undersampled training batch.
struct ClusterBatch {
    std::size_t cluster_index = 0;
    int ks = 0;
    Dataset data;
    /// Row indices into the source dataset (minority rows first). A
    /// majority index repeats when several minority rows share it as a
    /// nearest neighbour.
    std::vector<std::size_t> provenance;
};

struct ClusterUndersampleResult {
    std::vector<ClusterBatch> batches;
    /// Concatenation of all batches (minority rows appear once per batch).
    Dataset combined;
    PcaModel pca;
    KmeansModel kmeans;
};

/// PCA-project the dataset, K-means the projection, then build one batch
/// per cluster: every minority row of the source plus, for each minority
/// row, its k_s nearest majority rows among that cluster's members
/// (distances in PCA space; shared neighbours repeat). A cluster without
/// majority members yields a minority-only batch and a warning.
ClusterUndersampleResult cluster_undersample(const Dataset& ds,
                                             const ClusterUndersampleConfig& cfg,
                                             std::vector<std::string>* warnings = nullptr);

/// Write batches as CSV files plus a JSON manifest (cluster index, k_s,
/// provenance indices) into a directory.
void export_batches(const ClusterUndersampleResult& result, const std::string& directory);

/// Write an elbow curve as CSV (k, inertia).
void export_elbow_csv(const ElbowScan& scan, const std::string& path);

}  // namespace strokelab::resample
