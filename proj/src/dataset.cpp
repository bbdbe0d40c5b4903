#include "boolrules/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <map>
#include <unordered_set>

#include "boolrules/error.hpp"
#include "boolrules/kernels.hpp"

namespace boolrules {

VariableTable DatasetSchema::variables() const {
  std::vector<Variable> vars;
  for (const auto &f : features)
    vars.push_back({f.column, f.code});
  return VariableTable(std::move(vars), Variable{class_column, class_code});
}

DatasetSchema DatasetSchema::infer(const std::vector<std::string> &header) {
  if (header.size() < 3)
    throw InputError("CSV header needs an id column, at least one feature and a class column");
  DatasetSchema schema;
  schema.id_column = header.front();
  schema.class_column = header.back();
  std::set<char> used{schema.class_code};
  auto next_free = [&used] {
    for (char c = 'A'; c <= 'Z'; ++c)
      if (!used.contains(c))
        return c;
    for (char c = 'a'; c <= 'z'; ++c)
      if (!used.contains(c))
        return c;
    throw InputError("too many features to assign single-letter codes");
  };
  for (std::size_t i = 1; i + 1 < header.size(); ++i) {
    char code = '\0';
    for (char c : header[i]) {
      if (std::isalpha(static_cast<unsigned char>(c))) {
        code = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        break;
      }
    }
    if (code == '\0' || used.contains(code))
      code = next_free();
    used.insert(code);
    schema.features.push_back({header[i], code});
  }
  return schema;
}

std::size_t RecordTable::positives() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const Record &r) { return r.positive; }));
}

std::vector<std::string> split_csv_line(const std::string &line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cell));
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  out.push_back(std::move(cell));
  return out;
}

namespace {

std::string trim(const std::string &s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos)
    return {};
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool blank(const std::string &line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

} // namespace

RecordTable parse_records(std::istream &in, const DatasetSchema &schema) {
  RecordTable table;
  table.vars = schema.variables();

  std::string line;
  std::size_t row = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++row;
    if (!blank(line)) {
      header = split_csv_line(line);
      break;
    }
  }
  if (header.empty())
    throw ParseError(row, "", "missing header");
  for (auto &h : header)
    h = trim(h);

  auto locate = [&](const std::string &name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw ParseError(row, name, "column missing from header");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t id_col = locate(schema.id_column);
  const std::size_t class_col = locate(schema.class_column);
  std::vector<std::size_t> feature_cols;
  for (const auto &f : schema.features)
    feature_cols.push_back(locate(f.column));

  std::unordered_set<std::string> ids;
  while (std::getline(in, line)) {
    ++row;
    if (blank(line))
      continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw ParseError(row, "",
                       "expected " + std::to_string(header.size()) + " cells, found " +
                           std::to_string(cells.size()));
    Record rec;
    rec.id = trim(cells[id_col]);
    if (rec.id.empty())
      throw ParseError(row, schema.id_column, "empty record id");
    if (!ids.insert(rec.id).second)
      throw ParseError(row, schema.id_column, "duplicate record id '" + rec.id + "'");
    for (std::size_t f = 0; f < feature_cols.size(); ++f) {
      const std::string cell = trim(cells[feature_cols[f]]);
      const std::string &col = schema.features[f].column;
      if (cell.empty())
        throw ParseError(row, col, "missing value");
      char *end = nullptr;
      double v = std::strtod(cell.c_str(), &end);
      if (end != cell.c_str() + cell.size())
        throw ParseError(row, col, "not a number: '" + cell + "'");
      if (!std::isfinite(v))
        throw ParseError(row, col, "value is not finite");
      rec.values.push_back(v);
    }
    const std::string label = trim(cells[class_col]);
    auto in_list = [&label](const std::vector<std::string> &labels) {
      return std::find(labels.begin(), labels.end(), label) != labels.end();
    };
    if (in_list(schema.positive_labels))
      rec.positive = true;
    else if (in_list(schema.negative_labels))
      rec.positive = false;
    else
      throw ParseError(row, schema.class_column, "unknown class label '" + label + "'");
    table.records.push_back(std::move(rec));
  }
  return table;
}

std::optional<double> Thresholds::cut_for(const std::string &feature) const {
  for (std::size_t i = 0; i < features.size(); ++i)
    if (features[i] == feature)
      return cuts[i];
  return std::nullopt;
}

ThresholdResult compute_thresholds(const RecordTable &table) {
  const std::size_t n = table.size();
  const std::size_t k = table.positives();
  if (k == 0 || k == n)
    throw InputError("degenerate class balance: " + std::to_string(k) + " positive of " +
                     std::to_string(n) + " records");
  ThresholdResult result;
  const std::size_t features = table.vars.feature_count();
  for (std::size_t f = 0; f < features; ++f) {
    std::vector<double> values;
    values.reserve(n);
    for (const Record &r : table.records)
      values.push_back(r.values[f]);
    std::sort(values.begin(), values.end(), std::greater<>());
    const double cut = values[k];
    const auto high = static_cast<std::size_t>(
        std::count_if(values.begin(), values.end(), [cut](double v) { return v > cut; }));
    result.thresholds.features.push_back(table.vars[f].name);
    result.thresholds.cuts.push_back(cut);
    if (high != k)
      result.deviations.push_back({table.vars[f].name, cut, k, high});
  }
  return result;
}

PatternTable::PatternTable(VariableTable vars, std::vector<Pattern> patterns) : vars_(std::move(vars)) {
  std::map<std::uint64_t, Pattern> merged;
  const std::uint64_t mask = vars_.full_mask();
  for (Pattern &p : patterns) {
    if ((p.bits & ~mask) != 0)
      throw InputError("pattern sets bits outside the variable table");
    if (p.record_ids.empty())
      throw InputError("pattern " + key(p.bits) + " has no records");
    auto &slot = merged[p.bits];
    slot.bits = p.bits;
    for (auto &id : p.record_ids)
      slot.record_ids.push_back(std::move(id));
  }
  std::unordered_set<std::string> ids;
  for (auto &[bits, p] : merged) {
    for (const auto &id : p.record_ids)
      if (!ids.insert(id).second)
        throw InputError("record id '" + id + "' appears in more than one pattern slot");
    records_ += p.multiplicity();
    if (bits & vars_.class_bit())
      positives_ += p.multiplicity();
    patterns_.push_back(std::move(p));
  }
  std::sort(patterns_.begin(), patterns_.end(),
            [this](const Pattern &a, const Pattern &b) { return key(a.bits) < key(b.bits); });
}

std::uint64_t PatternTable::unobserved_count() const noexcept {
  const std::size_t n = vars_.size();
  const std::uint64_t total = n >= 64 ? 0 : std::uint64_t{1} << n;
  return total - patterns_.size();
}

std::string PatternTable::key(std::uint64_t bits) const {
  std::string out;
  for (std::size_t i = 0; i < vars_.size(); ++i)
    out.push_back(((bits >> i) & 1U) ? '1' : '0');
  return out;
}

std::uint64_t PatternTable::bits_from_key(const std::string &key) const {
  if (key.size() != vars_.size())
    throw InputError("pattern key '" + key + "' must have " + std::to_string(vars_.size()) +
                     " digits");
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (key[i] == '1')
      bits |= std::uint64_t{1} << i;
    else if (key[i] != '0')
      throw InputError("pattern key '" + key + "' may only contain 0 and 1");
  }
  return bits;
}

const Pattern *PatternTable::find(std::uint64_t bits) const {
  for (const Pattern &p : patterns_)
    if (p.bits == bits)
      return &p;
  return nullptr;
}

const Pattern *PatternTable::find_record(const std::string &record_id) const {
  for (const Pattern &p : patterns_)
    if (std::find(p.record_ids.begin(), p.record_ids.end(), record_id) != p.record_ids.end())
      return &p;
  return nullptr;
}

PatternTable PatternTable::without_records(const std::set<std::string> &record_ids) const {
  std::vector<Pattern> kept;
  for (const Pattern &p : patterns_) {
    Pattern q{p.bits, {}};
    for (const auto &id : p.record_ids)
      if (!record_ids.contains(id))
        q.record_ids.push_back(id);
    if (!q.record_ids.empty())
      kept.push_back(std::move(q));
  }
  return PatternTable(vars_, std::move(kept));
}

std::uint64_t binarize_record(const Record &record, const VariableTable &vars, const Thresholds &cuts) {
  if (cuts.cuts.size() != vars.feature_count())
    throw InputError("thresholds cover " + std::to_string(cuts.cuts.size()) + " features, table has " +
                     std::to_string(vars.feature_count()));
  std::uint64_t bits = 0;
  for (std::size_t f = 0; f < vars.feature_count(); ++f)
    if (record.values.at(f) > cuts.cuts[f])
      bits |= std::uint64_t{1} << f;
  if (record.positive)
    bits |= vars.class_bit();
  return bits;
}

PatternTable binarize(const RecordTable &table, const Thresholds &cuts) {
  std::vector<Pattern> patterns;
  patterns.reserve(table.size());
  for (const Record &r : table.records)
    patterns.push_back(Pattern{binarize_record(r, table.vars, cuts), {r.id}});
  return PatternTable(table.vars, std::move(patterns));
}

BoolPoly pattern_indicator(std::uint64_t bits, const VariableTable &vars) {
  const std::uint64_t ones = bits & vars.full_mask();
  const std::uint64_t zeros = vars.full_mask() & ~bits;
  if (std::popcount(zeros) > 30)
    throw InputError("pattern indicator would have more than 2^30 terms");
  // Terms are ones | z for every subset z of the zero positions.
  std::vector<Monomial> terms;
  terms.reserve(std::size_t{1} << std::popcount(zeros));
  std::uint64_t z = 0;
  do {
    terms.emplace_back(ones | z);
    z = (z - zeros) & zeros;
  } while (z != 0);
  std::sort(terms.begin(), terms.end());
  return BoolPoly::from_sorted_unique(std::move(terms));
}

BoolPoly build_sigma_reference(const PatternTable &patterns) {
  BoolPoly sigma = BoolPoly::one();
  for (const Pattern &p : patterns.patterns())
    sigma += pattern_indicator(p.bits, patterns.vars());
  return sigma;
}

BoolPoly build_sigma(const PatternTable &patterns) {
  const auto n = static_cast<int>(patterns.vars().size());
  if (n > kMaxTruthTableVariables)
    return build_sigma_reference(patterns);
  // Truth table of sigma is 1 on unobserved assignments; its Moebius
  // transform is the polynomial.
  std::vector<std::uint8_t> table(std::size_t{1} << n, 1);
  for (const Pattern &p : patterns.patterns())
    table[p.bits] = 0;
  kernels::omp::moebius(table, n);
  std::vector<Monomial> terms;
  for (std::size_t m = 0; m < table.size(); ++m)
    if (table[m])
      terms.emplace_back(m);
  return BoolPoly::from_sorted_unique(std::move(terms));
}

std::uint64_t count_empty_criteria(const PatternTable &patterns) { return patterns.unobserved_count(); }

} // namespace boolrules
