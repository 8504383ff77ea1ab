#pragma once

#include <functional>
#include <string>
#include <vector>

namespace mfl::io {

struct SelfTestResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Quick example suite (closed forms, exact data, round trips); a few seconds.
std::vector<SelfTestResult> run_self_tests(const std::function<void(const SelfTestResult&)>& on_result = {});

}  // namespace mfl::io
