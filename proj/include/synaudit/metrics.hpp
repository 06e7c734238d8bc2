#pragma once

#include <cstddef>
#include <vector>

#include "synaudit/selection.hpp"
#include "synaudit/tabular.hpp"

namespace synaudit {

// 1-D threshold clustering of a normalized feature column. Values are
// processed in ascending order; each joins the nearest centroid when within
// the threshold (centroid updated as the running mean of its members) and
// opens a new cluster otherwise.
struct FeatureClusters {
    std::vector<double> centroids;  // strictly increasing
    double threshold = 0.025;
};

FeatureClusters fit_feature_clusters(std::vector<double> values, double threshold);

// Index of the nearest centroid; midway ties go to the lower id.
std::size_t assign_cluster(const FeatureClusters& clusters, double value);

// A reconstruction compromises a training record when every categorical value
// matches and every continuous value falls in the same cluster as the
// training value (continuous comparison on min-max-normalized values).
bool is_compromised(const Row& recon, const Row& train, const Encoder& encoder,
                    const std::vector<FeatureClusters>& clusters);

struct SampleAudit {
    std::size_t recovered_id = 0;       // synthetic row id from the attack
    std::size_t nearest_train_id = 0;
    double dcr = 0.0;                   // Euclidean distance, encoded space
    bool compromised = false;
};

struct EvaluationReport {
    std::size_t unique_samples = 0;
    double hit_rate = 0.0;
    double dcr_mean = 0.0;
    double dcr_min = 0.0;
    double dcr_max = 0.0;
    std::size_t compromised = 0;
    std::size_t budget = 0;  // ceil(n_train * tau)
    bool empty_recovered = false;
    std::vector<SampleAudit> details;
};

// Defender-side evaluation of a recovered set against the training table.
// `recovered_rows` are the decoded samples in recovered-set order; encoder and
// clusters are fitted here (encoder on the training table, clusters on the
// union of training and recovered continuous values).
EvaluationReport evaluate_attack(const std::vector<RecoveredSample>& recovered,
                                 const std::vector<Row>& recovered_rows, const Table& train,
                                 std::size_t n_train, double tau, double cluster_threshold);

}  // namespace synaudit
