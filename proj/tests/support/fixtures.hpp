#pragma once

// Synthetic datasets shared by unit and acceptance tests.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include <unistd.h>
#include <sstream>
#include <string>

#include "boolrules/dataset.hpp"
#include "boolrules/poly.hpp"

namespace fixtures {

using namespace boolrules;

/// 200 records over features Alpha, Beta, Gamma, Delta; record i takes the
/// bit pattern i % 16, values are 15 (high) or 10 (low) plus a little
/// jitter, and the class is Alpha and not Beta. Gamma and Delta are noise.
inline std::string planted_csv(bool with_exception = false) {
  std::ostringstream out;
  out << "record_id,Alpha,Beta,Gamma,Delta,class\n";
  for (int i = 0; i < 200; ++i) {
    int m = i % 16;
    int a = m & 1, b = (m >> 1) & 1, c = (m >> 2) & 1, d = (m >> 3) & 1;
    char id[16];
    std::snprintf(id, sizeof id, "r%03d", i);
    out << id << ',' << 10 + 5 * a + 0.01 * (i % 7) << ',' << 10 + 5 * b << ',' << 10 + 5 * c + 0.5 << ','
        << 10 + 5 * d << ',' << (a && !b) << '\n';
  }
  // Off-rule record: Alpha and Beta both high yet positive, a pattern of its own.
  if (with_exception)
    out << "x999,15,15,15.5,15,1\n";
  return out.str();
}

inline std::string planted_thresholds_json() {
  return R"({"schema": "boolrules.thresholds/1",
  "cuts": {"Alpha": 12.5, "Beta": 12.5, "Gamma": 12.5, "Delta": 12.5}})";
}

inline Thresholds planted_thresholds() {
  return {{"Alpha", "Beta", "Gamma", "Delta"}, {12.5, 12.5, 12.5, 12.5}};
}

inline RecordTable planted_records(bool with_exception = false) {
  std::istringstream in(planted_csv(with_exception));
  DatasetSchema schema = DatasetSchema::infer({"record_id", "Alpha", "Beta", "Gamma", "Delta", "class"});
  return parse_records(in, schema);
}

inline PatternTable planted_patterns(bool with_exception = false) {
  return binarize(planted_records(with_exception), planted_thresholds());
}

/// A pattern table with explicit bits (class last) and multiplicities.
inline PatternTable patterns_from_codes(const std::string &codes, char class_code,
                                        const std::vector<std::pair<std::uint64_t, std::size_t>> &weighted) {
  VariableTable vars = VariableTable::from_codes(codes, class_code);
  std::vector<Pattern> ps;
  int next = 0;
  for (auto [bits, mult] : weighted) {
    Pattern p{bits, {}};
    for (std::size_t k = 0; k < mult; ++k)
      p.record_ids.push_back("p" + std::to_string(next++));
    ps.push_back(std::move(p));
  }
  return PatternTable(vars, std::move(ps));
}

/// `count` distinct patterns over ten variables, seeded.
inline PatternTable random_patterns(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick(0, 1023);
  std::vector<std::pair<std::uint64_t, std::size_t>> w;
  std::set<std::uint64_t> seen;
  while (seen.size() < count) {
    std::uint64_t b = pick(rng);
    if (seen.insert(b).second)
      w.push_back({b, 1 + b % 3});
  }
  return patterns_from_codes("EFGLMyPxTs", 's', w);
}

/// Scratch directory removed on destruction.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string &tag) {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("boolrules-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string &name, const std::string &content) const {
    std::ofstream(path / name, std::ios::binary) << content;
    return (path / name).string();
  }
  std::string operator/(const std::string &name) const { return (path / name).string(); }
};

inline std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

} // namespace fixtures
