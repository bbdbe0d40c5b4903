#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "boolrules/poly.hpp"
#include "boolrules/variables.hpp"

namespace boolrules {

struct FeatureColumn {
  std::string column;
  char code = '?';
};

/// Maps CSV columns onto ring variables. Letters are presentation only, so
/// they live here rather than in the data file.
struct DatasetSchema {
  std::string id_column = "record_id";
  std::vector<FeatureColumn> features;
  std::string class_column = "class";
  char class_code = 's';
  std::vector<std::string> positive_labels{"1"};
  std::vector<std::string> negative_labels{"0"};

  VariableTable variables() const;

  /// First column is the id, last is the class, the rest are features.
  /// Codes are the upper-cased first letters of the column names, falling
  /// back to the next free letter on collisions.
  static DatasetSchema infer(const std::vector<std::string> &header);
};

struct Record {
  std::string id;
  std::vector<double> values; // one per feature, in VariableTable order
  bool positive = false;
};

struct RecordTable {
  VariableTable vars;
  std::vector<Record> records;

  std::size_t size() const noexcept { return records.size(); }
  std::size_t positives() const noexcept;
};

/// Reads `record_id, <features...>, <class>` style CSV (columns located by
/// header name, extra columns ignored). Throws ParseError naming the row.
RecordTable parse_records(std::istream &in, const DatasetSchema &schema);

/// Splits one CSV line honouring double quotes.
std::vector<std::string> split_csv_line(const std::string &line);

/// Per-feature cut values; a value is "high" when value > cut.
struct Thresholds {
  std::vector<std::string> features; // feature names in VariableTable order
  std::vector<double> cuts;

  std::optional<double> cut_for(const std::string &feature) const;
};

struct ThresholdDeviation {
  std::string feature;
  double cut = 0;
  std::size_t target_high = 0;
  std::size_t realized_high = 0;
};

struct ThresholdResult {
  Thresholds thresholds;
  std::vector<ThresholdDeviation> deviations;
};

/// With k class-positive records, each cut is the (k+1)-th largest value of
/// its feature, so exactly k values lie strictly above it unless the k-th
/// and (k+1)-th values tie; ties are reported rather than broken.
ThresholdResult compute_thresholds(const RecordTable &table);

/// A distinct {0,1} assignment of all variables (class included) and the
/// records that share it.
struct Pattern {
  std::uint64_t bits = 0;
  std::vector<std::string> record_ids;

  std::size_t multiplicity() const noexcept { return record_ids.size(); }
};

class PatternTable {
public:
  PatternTable() = default;
  /// Merges patterns with equal bits and orders them by key.
  PatternTable(VariableTable vars, std::vector<Pattern> patterns);

  const VariableTable &vars() const noexcept { return vars_; }
  const std::vector<Pattern> &patterns() const noexcept { return patterns_; }
  bool empty() const noexcept { return patterns_.empty(); }

  std::size_t record_count() const noexcept { return records_; }
  std::size_t positive_count() const noexcept { return positives_; }
  std::size_t negative_count() const noexcept { return records_ - positives_; }
  std::size_t observed_count() const noexcept { return patterns_.size(); }
  /// 2^n - observed, the exponent of the number of empty criteria.
  std::uint64_t unobserved_count() const noexcept;

  /// Bits in table order, e.g. "1100110111".
  std::string key(std::uint64_t bits) const;
  std::uint64_t bits_from_key(const std::string &key) const;
  const Pattern *find(std::uint64_t bits) const;
  const Pattern *find_record(const std::string &record_id) const;

  /// Copy without the given records; patterns that lose every record leave.
  PatternTable without_records(const std::set<std::string> &record_ids) const;

private:
  VariableTable vars_;
  std::vector<Pattern> patterns_;
  std::size_t records_ = 0;
  std::size_t positives_ = 0;
};

/// Feature and class bits of one record under `cuts`.
std::uint64_t binarize_record(const Record &record, const VariableTable &vars, const Thresholds &cuts);
PatternTable binarize(const RecordTable &table, const Thresholds &cuts);

/// Product over all variables of v (bit set) or v + 1 (bit clear); equals 1
/// exactly at `bits`.
BoolPoly pattern_indicator(std::uint64_t bits, const VariableTable &vars);

/// 1 + sum of the observed patterns' indicators: vanishes exactly on the
/// observed assignments and generates the ideal of empty criteria.
BoolPoly build_sigma(const PatternTable &patterns);
/// Sum of indicators term by term, the reference for build_sigma.
BoolPoly build_sigma_reference(const PatternTable &patterns);

/// The number of empty selection criteria is 2^e; returns e.
std::uint64_t count_empty_criteria(const PatternTable &patterns);

} // namespace boolrules
