#include "sphc/report.hpp"

#include <utility>

namespace sphc {

std::string to_string(Status s) {
  switch (s) {
    case Status::kPass:
      return "pass";
    case Status::kFail:
      return "fail";
    case Status::kSkipped:
      return "skipped";
    case Status::kInconclusive:
      return "inconclusive";
  }
  return "fail";
}

nlohmann::json to_json(const CheckReport& r) {
  nlohmann::json j;
  j["check"] = r.check;
  j["params"] = r.params;
  j["status"] = to_string(r.status);
  j["counts"] = {{"instances", r.counts.instances},
                 {"failures", r.counts.failures},
                 {"skipped", r.counts.skipped}};
  j["witness"] = r.witness ? nlohmann::json(*r.witness) : nlohmann::json(nullptr);
  j["metrics"] = r.metrics;
  j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

CheckRecorder::CheckRecorder(std::string check, nlohmann::json params)
    : check_(std::move(check)),
      params_(std::move(params)),
      start_(std::chrono::steady_clock::now()) {}

void CheckRecorder::fail(const std::string& witness) {
  ++counts_.instances;
  ++counts_.failures;
  if (!witness_) witness_ = witness;
}

bool CheckRecorder::expect(bool cond, const std::string& witness_if_false) {
  if (cond) {
    ok();
  } else {
    fail(witness_if_false);
  }
  return cond;
}

void CheckRecorder::set_inconclusive(const std::string& why) {
  if (!inconclusive_) inconclusive_ = why;
}

CheckReport CheckRecorder::finish() const {
  CheckReport r;
  r.check = check_;
  r.params = params_;
  r.counts = counts_;
  r.metrics = metrics_;
  if (counts_.failures > 0) {
    r.status = Status::kFail;
    r.witness = witness_;
  } else if (inconclusive_) {
    r.status = Status::kInconclusive;
    r.witness = inconclusive_;
  } else {
    r.status = Status::kPass;
  }
  r.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - start_)
                     .count();
  return r;
}

CheckReport skipped_report(std::string check, nlohmann::json params, const std::string& reason) {
  CheckReport r;
  r.check = std::move(check);
  r.params = std::move(params);
  r.status = Status::kSkipped;
  r.witness = reason;
  return r;
}

CheckReport negative_control(std::string check, const CheckReport& inner) {
  CheckReport r;
  r.check = std::move(check);
  r.params = inner.params;
  r.counts = inner.counts;
  r.metrics = inner.metrics;
  r.metrics["inner_check"] = inner.check;
  r.metrics["inner_status"] = to_string(inner.status);
  r.elapsed_ms = inner.elapsed_ms;
  if (inner.status == Status::kFail && inner.witness) {
    r.status = Status::kPass;
    r.metrics["detected"] = *inner.witness;
  } else {
    r.status = Status::kFail;
    r.witness = "negative control was not detected (inner status " + to_string(inner.status) + ")";
  }
  return r;
}

}  // namespace sphc
