#include "synaudit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "synaudit/errors.hpp"

namespace synaudit {

FeatureClusters fit_feature_clusters(std::vector<double> values, double threshold) {
    if (values.empty()) throw DataError("cannot fit clusters on an empty column");
    if (threshold <= 0.0) throw DataError("cluster threshold must be positive");
    std::sort(values.begin(), values.end());

    FeatureClusters clusters;
    clusters.threshold = threshold;
    double centroid = values.front();
    double cluster_min = values.front();
    std::size_t count = 1;
    // ascending order: the nearest centroid is always the most recent one. A
    // value only joins if the updated mean keeps every current member (the
    // cluster minimum is the farthest) within the threshold, so the final
    // centroid never drifts out of reach of early members.
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double next_mean = (centroid * static_cast<double>(count) + values[i]) /
                                 static_cast<double>(count + 1);
        if (values[i] - centroid <= threshold && next_mean - cluster_min <= threshold &&
            values[i] - next_mean <= threshold) {
            centroid = next_mean;
            ++count;
        } else {
            clusters.centroids.push_back(centroid);
            centroid = values[i];
            cluster_min = values[i];
            count = 1;
        }
    }
    clusters.centroids.push_back(centroid);
    return clusters;
}

std::size_t assign_cluster(const FeatureClusters& clusters, double value) {
    if (clusters.centroids.empty()) throw DataError("assign_cluster on unfitted clusters");
    std::size_t best = 0;
    double best_dist = std::abs(value - clusters.centroids[0]);
    for (std::size_t c = 1; c < clusters.centroids.size(); ++c) {
        const double d = std::abs(value - clusters.centroids[c]);
        // near-ties (within rounding noise of a midway point) keep the lower id
        if (d + 1e-12 < best_dist) {
            best = c;
            best_dist = d;
        }
    }
    return best;
}

namespace {

// min-max normalization of one continuous value under the fitted encoder
double normalize_value(const FeatureSpec& spec, double v) {
    if (spec.hi == spec.lo) return 0.5;
    return std::clamp((v - spec.lo) / (spec.hi - spec.lo), 0.0, 1.0);
}

}  // namespace

bool is_compromised(const Row& recon, const Row& train, const Encoder& encoder,
                    const std::vector<FeatureClusters>& clusters) {
    const auto& specs = encoder.fitted_features();
    if (recon.values.size() != specs.size() || train.values.size() != specs.size())
        throw DataError("is_compromised: row width mismatch");
    std::size_t cont_index = 0;
    for (std::size_t f = 0; f < specs.size(); ++f) {
        if (specs[f].kind == FeatureKind::Categorical) {
            if (std::get<std::size_t>(recon.values[f]) != std::get<std::size_t>(train.values[f]))
                return false;
        } else {
            const auto& cl = clusters[cont_index++];
            const double rv = normalize_value(specs[f], std::get<double>(recon.values[f]));
            const double tv = normalize_value(specs[f], std::get<double>(train.values[f]));
            if (assign_cluster(cl, rv) != assign_cluster(cl, tv)) return false;
        }
    }
    return true;
}

EvaluationReport evaluate_attack(const std::vector<RecoveredSample>& recovered,
                                 const std::vector<Row>& recovered_rows, const Table& train,
                                 std::size_t n_train, double tau, double cluster_threshold) {
    if (recovered.size() != recovered_rows.size())
        throw DataError("evaluate_attack: recovered row count mismatch");
    EvaluationReport report;
    report.budget = recovery_budget(n_train, tau);
    if (recovered.empty()) {
        report.empty_recovered = true;
        return report;
    }

    // encoder fitted on the training table; see README for the rationale
    const Encoder encoder = Encoder::fit(train);
    const EncodedMatrix train_matrix = encode_table(encoder, train);

    // per-continuous-feature clusters over training plus recovered values
    const auto& specs = encoder.fitted_features();
    std::vector<FeatureClusters> clusters;
    for (std::size_t f = 0; f < specs.size(); ++f) {
        if (specs[f].kind != FeatureKind::Continuous) continue;
        std::vector<double> column;
        column.reserve(train.rows.size() + recovered_rows.size());
        for (const auto& row : train.rows)
            column.push_back(normalize_value(specs[f], std::get<double>(row.values[f])));
        for (const auto& row : recovered_rows)
            column.push_back(normalize_value(specs[f], std::get<double>(row.values[f])));
        clusters.push_back(fit_feature_clusters(std::move(column), cluster_threshold));
    }

    std::set<std::size_t> unique_targets;
    double dcr_sum = 0.0;
    report.dcr_min = std::numeric_limits<double>::infinity();
    report.dcr_max = 0.0;
    std::vector<double> encoded(encoder.encoded_width());
    for (std::size_t i = 0; i < recovered_rows.size(); ++i) {
        encoder.encode_row(recovered_rows[i], encoded);
        std::size_t nearest = 0;
        double nearest_sq = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < train_matrix.rows; ++t) {
            const double d = sq_distance(train_matrix.row(t), encoded);
            if (d < nearest_sq) {
                nearest_sq = d;
                nearest = t;
            }
        }
        SampleAudit audit;
        audit.recovered_id = recovered[i].row_id;
        audit.nearest_train_id = nearest;
        audit.dcr = std::sqrt(nearest_sq);
        audit.compromised =
            is_compromised(recovered_rows[i], train.rows[nearest], encoder, clusters);
        unique_targets.insert(nearest);
        if (audit.compromised) ++report.compromised;
        dcr_sum += audit.dcr;
        report.dcr_min = std::min(report.dcr_min, audit.dcr);
        report.dcr_max = std::max(report.dcr_max, audit.dcr);
        report.details.push_back(audit);
    }
    report.unique_samples = unique_targets.size();
    report.dcr_mean = dcr_sum / static_cast<double>(recovered_rows.size());
    report.hit_rate =
        static_cast<double>(report.compromised) / static_cast<double>(report.budget);
    return report;
}

}  // namespace synaudit
