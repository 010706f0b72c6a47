// Structured result of a verification routine.
#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace sphc {

enum class Status { kPass, kFail, kSkipped, kInconclusive };

std::string to_string(Status s);

struct Counts {
  std::int64_t instances = 0;
  std::int64_t failures = 0;
  std::int64_t skipped = 0;
};

struct CheckReport {
  std::string check;
  nlohmann::json params = nlohmann::json::object();
  Status status = Status::kPass;
  Counts counts;
  std::optional<std::string> witness;
  // Measured quantities that are not inputs (orbit sizes, ranks, multiplicities).
  nlohmann::json metrics = nlohmann::json::object();
  std::int64_t elapsed_ms = 0;

  bool passed() const { return status == Status::kPass; }
};

nlohmann::json to_json(const CheckReport& r);

// Accumulates instance outcomes; the first failure message becomes the witness.
class CheckRecorder {
 public:
  CheckRecorder(std::string check, nlohmann::json params);

  void ok() { ++counts_.instances; }
  void fail(const std::string& witness);
  void skip() { ++counts_.skipped; }
  // Records one instance; returns cond so callers can branch on it.
  bool expect(bool cond, const std::string& witness_if_false);

  void set_inconclusive(const std::string& why);
  nlohmann::json& metrics() { return metrics_; }
  std::int64_t failures() const { return counts_.failures; }

  CheckReport finish() const;

 private:
  std::string check_;
  nlohmann::json params_;
  nlohmann::json metrics_ = nlohmann::json::object();
  Counts counts_;
  std::optional<std::string> witness_;
  std::optional<std::string> inconclusive_;
  std::chrono::steady_clock::time_point start_;
};

CheckReport skipped_report(std::string check, nlohmann::json params, const std::string& reason);

// Wraps a report whose check is expected to fail. The wrapped check passes
// exactly when the inner one failed with a witness.
CheckReport negative_control(std::string check, const CheckReport& inner);

}  // namespace sphc
