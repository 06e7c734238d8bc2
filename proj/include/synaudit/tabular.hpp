#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "synaudit/errors.hpp"

namespace synaudit {

enum class FeatureKind { Continuous, Categorical };

// One column of the dataset. Categorical specs carry the full category list
// (from the schema file); continuous lo/hi are filled in when an Encoder is
// fitted and stay zero until then.
struct FeatureSpec {
    std::string name;
    FeatureKind kind = FeatureKind::Continuous;
    std::vector<std::string> categories;  // categorical only, ordered
    double lo = 0.0;                      // continuous only, fitted range
    double hi = 0.0;

    std::size_t category_index(const std::string& label) const;
};

struct Schema {
    std::vector<FeatureSpec> features;
    FeatureSpec target;

    std::size_t num_features() const { return features.size(); }
    void validate() const;
};

// A raw cell: continuous values hold the double, categorical values hold the
// index into the spec's category list.
using Cell = std::variant<double, std::size_t>;

struct Row {
    std::vector<Cell> values;  // one per feature, schema order
    Cell target;
};

struct Table {
    const Schema* schema = nullptr;
    std::vector<Row> rows;

    std::size_t size() const { return rows.size(); }
};

// Load a schema from its JSON description file.
Schema load_schema(const std::string& path);
void save_schema(const Schema& schema, const std::string& path);

// Load a CSV table (header row, any column order) validated against `schema`.
Table load_table(const std::string& path, const Schema& schema);
// Parse CSV text already in memory; `origin` names the source in error messages.
Table parse_table(const std::string& csv_text, const Schema& schema,
                  const std::string& origin = "<memory>");
void save_table(const Table& table, const std::string& path);
std::string format_cell(const Cell& cell, const FeatureSpec& spec);

// Fitted min-max + one-hot transform over a schema.
class Encoder {
public:
    // Fits continuous ranges on `table`; categorical maps come from the schema.
    static Encoder fit(const Table& table);

    std::size_t encoded_width() const { return width_; }
    const Schema& schema() const { return *schema_; }
    const std::vector<FeatureSpec>& fitted_features() const { return fitted_; }

    // Encode the feature part of one row into `out` (size encoded_width()).
    void encode_row(const Row& row, std::span<double> out) const;
    std::vector<double> encode_row(const Row& row) const;

    // Inverse transform: continuous entries un-scaled, one-hot groups decoded
    // by argmax. The target cell is not part of the encoding and is returned
    // value-initialized.
    Row decode_row(std::span<const double> vec) const;

    // Offset of feature `f` within the encoded vector.
    std::size_t feature_offset(std::size_t f) const { return offsets_[f]; }

    // Numeric value of a raw target cell: continuous targets pass through,
    // binary categorical targets map to their category index (0 or 1).
    double target_value(const Cell& target) const;

private:
    const Schema* schema_ = nullptr;
    std::vector<FeatureSpec> fitted_;  // schema features with lo/hi filled in
    std::vector<std::size_t> offsets_;
    std::size_t width_ = 0;
};

// Dense encoded matrix, one row per sample; targets kept raw alongside.
struct EncodedMatrix {
    std::size_t rows = 0;
    std::size_t width = 0;
    std::vector<double> data;     // rows * width
    std::vector<Cell> targets;    // raw target cells, one per row

    std::span<const double> row(std::size_t i) const {
        return {data.data() + i * width, width};
    }
};

EncodedMatrix encode_table(const Encoder& encoder, const Table& table);

// Squared Euclidean distance between two encoded rows.
double sq_distance(std::span<const double> a, std::span<const double> b);

}  // namespace synaudit
