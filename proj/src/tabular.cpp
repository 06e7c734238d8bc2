#include "synaudit/tabular.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace synaudit {

using nlohmann::json;

std::size_t FeatureSpec::category_index(const std::string& label) const {
    auto it = std::find(categories.begin(), categories.end(), label);
    if (it == categories.end())
        throw DataError("unknown category '" + label + "' for feature '" + name + "'");
    return static_cast<std::size_t>(it - categories.begin());
}

void Schema::validate() const {
    std::set<std::string> names;
    for (const auto& f : features) {
        if (!names.insert(f.name).second)
            throw DataError("duplicate feature name '" + f.name + "'");
        if (f.kind == FeatureKind::Categorical && f.categories.empty())
            throw DataError("categorical feature '" + f.name + "' has no categories");
        if (f.kind == FeatureKind::Categorical) {
            std::set<std::string> cats(f.categories.begin(), f.categories.end());
            if (cats.size() != f.categories.size())
                throw DataError("duplicate categories in feature '" + f.name + "'");
        }
    }
    if (names.count(target.name))
        throw DataError("target name '" + target.name + "' collides with a feature");
    if (target.kind == FeatureKind::Categorical && target.categories.empty())
        throw DataError("categorical target has no categories");
}

namespace {

FeatureSpec spec_from_json(const json& j) {
    FeatureSpec spec;
    spec.name = j.at("name").get<std::string>();
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "continuous") {
        spec.kind = FeatureKind::Continuous;
    } else if (kind == "categorical") {
        spec.kind = FeatureKind::Categorical;
        spec.categories = j.at("categories").get<std::vector<std::string>>();
    } else {
        throw ConfigError("unknown feature kind '" + kind + "'");
    }
    return spec;
}

json spec_to_json(const FeatureSpec& spec) {
    json j;
    j["name"] = spec.name;
    j["kind"] = spec.kind == FeatureKind::Continuous ? "continuous" : "categorical";
    if (spec.kind == FeatureKind::Categorical) j["categories"] = spec.categories;
    return j;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& s, std::size_t row, const std::string& feature) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t' || *(end - 1) == '\r')) --end;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value))
        throw DataError("row " + std::to_string(row) + ": cannot parse '" + s +
                        "' as a number for feature '" + feature + "'");
    return value;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

Cell parse_cell(const std::string& raw, const FeatureSpec& spec, std::size_t row) {
    const std::string value = trim(raw);
    if (value.empty())
        throw DataError("row " + std::to_string(row) + ": missing value for '" + spec.name + "'");
    if (spec.kind == FeatureKind::Continuous)
        return Cell{parse_double(value, row, spec.name)};
    auto it = std::find(spec.categories.begin(), spec.categories.end(), value);
    if (it == spec.categories.end())
        throw DataError("row " + std::to_string(row) + ": unknown category '" + value +
                        "' for feature '" + spec.name + "'");
    return Cell{static_cast<std::size_t>(it - spec.categories.begin())};
}

}  // namespace

Schema load_schema(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open schema file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("schema file '" + path + "': " + e.what());
    }
    Schema schema;
    for (const auto& f : j.at("features")) schema.features.push_back(spec_from_json(f));
    schema.target = spec_from_json(j.at("target"));
    schema.validate();
    return schema;
}

void save_schema(const Schema& schema, const std::string& path) {
    json j;
    j["features"] = json::array();
    for (const auto& f : schema.features) j["features"].push_back(spec_to_json(f));
    j["target"] = spec_to_json(schema.target);
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write schema file '" + path + "'");
    out << j.dump(2) << "\n";
}

Table parse_table(const std::string& csv_text, const Schema& schema, const std::string& origin) {
    schema.validate();
    std::stringstream in(csv_text);
    std::string line;
    if (!std::getline(in, line))
        throw DataError(origin + ": empty file");

    const auto header = split_csv_line(line);
    std::vector<std::string> names;
    for (const auto& h : header) names.push_back(trim(h));

    // map each schema column to its position in the file
    auto locate = [&](const std::string& name) {
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end())
            throw DataError(origin + ": missing column '" + name + "'");
        return static_cast<std::size_t>(it - names.begin());
    };
    std::vector<std::size_t> feature_cols;
    for (const auto& f : schema.features) feature_cols.push_back(locate(f.name));
    const std::size_t target_col = locate(schema.target.name);

    Table table;
    table.schema = &schema;
    std::size_t row_index = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() < names.size())
            throw DataError(origin + ": row " + std::to_string(row_index) +
                            " has " + std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(names.size()));
        Row row;
        row.values.reserve(schema.features.size());
        for (std::size_t f = 0; f < schema.features.size(); ++f)
            row.values.push_back(parse_cell(fields[feature_cols[f]], schema.features[f], row_index));
        row.target = parse_cell(fields[target_col], schema.target, row_index);
        table.rows.push_back(std::move(row));
        ++row_index;
    }
    return table;
}

Table load_table(const std::string& path, const Schema& schema) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open table file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_table(buf.str(), schema, path);
}

std::string format_cell(const Cell& cell, const FeatureSpec& spec) {
    if (spec.kind == FeatureKind::Categorical)
        return spec.categories.at(std::get<std::size_t>(cell));
    std::ostringstream os;
    os.precision(17);
    os << std::get<double>(cell);
    return os.str();
}

void save_table(const Table& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write table file '" + path + "'");
    const Schema& schema = *table.schema;
    for (std::size_t f = 0; f < schema.features.size(); ++f)
        out << schema.features[f].name << ",";
    out << schema.target.name << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t f = 0; f < schema.features.size(); ++f)
            out << format_cell(row.values[f], schema.features[f]) << ",";
        out << format_cell(row.target, schema.target) << "\n";
    }
}

Encoder Encoder::fit(const Table& table) {
    if (table.rows.empty()) throw DataError("cannot fit encoder on an empty table");
    Encoder enc;
    enc.schema_ = table.schema;
    enc.fitted_ = table.schema->features;
    enc.offsets_.resize(enc.fitted_.size());
    std::size_t offset = 0;
    for (std::size_t f = 0; f < enc.fitted_.size(); ++f) {
        enc.offsets_[f] = offset;
        auto& spec = enc.fitted_[f];
        if (spec.kind == FeatureKind::Continuous) {
            double lo = std::get<double>(table.rows[0].values[f]);
            double hi = lo;
            for (const auto& row : table.rows) {
                const double v = std::get<double>(row.values[f]);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            spec.lo = lo;
            spec.hi = hi;
            offset += 1;
        } else {
            offset += spec.categories.size();
        }
    }
    enc.width_ = offset;
    return enc;
}

void Encoder::encode_row(const Row& row, std::span<double> out) const {
    if (out.size() != width_) throw DataError("encode: output width mismatch");
    if (row.values.size() != fitted_.size()) throw DataError("encode: row width mismatch");
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t f = 0; f < fitted_.size(); ++f) {
        const auto& spec = fitted_[f];
        const std::size_t off = offsets_[f];
        if (spec.kind == FeatureKind::Continuous) {
            const double v = std::get<double>(row.values[f]);
            if (spec.hi == spec.lo) {
                out[off] = 0.5;  // constant feature
            } else {
                out[off] = std::clamp((v - spec.lo) / (spec.hi - spec.lo), 0.0, 1.0);
            }
        } else {
            out[off + std::get<std::size_t>(row.values[f])] = 1.0;
        }
    }
}

std::vector<double> Encoder::encode_row(const Row& row) const {
    std::vector<double> out(width_);
    encode_row(row, out);
    return out;
}

Row Encoder::decode_row(std::span<const double> vec) const {
    if (vec.size() != width_) throw DataError("decode: width mismatch");
    Row row;
    row.values.reserve(fitted_.size());
    for (std::size_t f = 0; f < fitted_.size(); ++f) {
        const auto& spec = fitted_[f];
        const std::size_t off = offsets_[f];
        if (spec.kind == FeatureKind::Continuous) {
            if (spec.hi == spec.lo) {
                row.values.emplace_back(spec.lo);
            } else {
                row.values.emplace_back(spec.lo + vec[off] * (spec.hi - spec.lo));
            }
        } else {
            std::size_t best = 0;
            for (std::size_t c = 1; c < spec.categories.size(); ++c)
                if (vec[off + c] > vec[off + best]) best = c;
            row.values.emplace_back(best);
        }
    }
    if (schema_->target.kind == FeatureKind::Continuous)
        row.target = Cell{0.0};
    else
        row.target = Cell{std::size_t{0}};
    return row;
}

double Encoder::target_value(const Cell& target) const {
    if (schema_->target.kind == FeatureKind::Continuous) return std::get<double>(target);
    return static_cast<double>(std::get<std::size_t>(target));
}

EncodedMatrix encode_table(const Encoder& encoder, const Table& table) {
    EncodedMatrix m;
    m.rows = table.rows.size();
    m.width = encoder.encoded_width();
    m.data.resize(m.rows * m.width);
    m.targets.reserve(m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) {
        encoder.encode_row(table.rows[i], {m.data.data() + i * m.width, m.width});
        m.targets.push_back(table.rows[i].target);
    }
    return m;
}

double sq_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DataError("sq_distance: width mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

}  // namespace synaudit
