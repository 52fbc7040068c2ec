#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace ordgrowth {

using json = nlohmann::ordered_json;

// One tested instance of an inequality or identity.
struct check_record {
  std::string name;
  std::optional<long long> k;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
  std::string note;  // witness / diagnostics, empty when passing
};

struct check_report {
  std::string title;
  std::vector<check_record> records;

  bool all_pass() const {
    for (const auto& r : records)
      if (!r.pass) return false;
    return true;
  }

  std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& r : records) n += r.pass ? 0 : 1;
    return n;
  }

  void add(std::string name, std::optional<long long> k, double lhs, double rhs, bool pass,
           std::string note = {}) {
    records.push_back({std::move(name), k, lhs, rhs, pass, std::move(note)});
  }

  void merge(const check_report& other) {
    records.insert(records.end(), other.records.begin(), other.records.end());
  }

  json to_json() const {
    json arr = json::array();
    for (const auto& r : records) {
      json rec;
      rec["name"] = r.name;
      rec["k"] = r.k ? json(*r.k) : json(nullptr);
      rec["lhs"] = r.lhs;
      rec["rhs"] = r.rhs;
      rec["pass"] = r.pass;
      if (!r.note.empty()) rec["note"] = r.note;
      arr.push_back(std::move(rec));
    }
    json out;
    out["title"] = title;
    out["pass"] = all_pass();
    out["records"] = std::move(arr);
    return out;
  }
};

}  // namespace ordgrowth
