#pragma once

#include <cstdint>

#include "synaudit/selection.hpp"

namespace synaudit {

enum class BaselineKind { GanLeaksBase, RandomSelect };

// Distance-to-nearest-neighbor ranking: each row scored by its single nearest
// neighbor (self excluded), top ceil(n_train * tau) selected with no
// neighbor-exclusion step.
RecoveredSet ganleaks_rank(const EncodedMatrix& matrix, std::size_t n_train, double tau);

// Uniform sample of ceil(n_train * tau) row ids without replacement.
RecoveredSet random_select(std::size_t num_rows, std::size_t n_train, double tau,
                           std::uint64_t seed);

}  // namespace synaudit
