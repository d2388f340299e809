#include "nnts/method.hpp"

namespace nnts {

const char* to_string(TestMethod method) {
  switch (method) {
    case TestMethod::NNTS1: return "nnts1";
    case TestMethod::NNTS2: return "nnts2";
    case TestMethod::Rayleigh: return "rayleigh";
    case TestMethod::HRo: return "hro";
    case TestMethod::HRm: return "hrm";
    case TestMethod::Pycke: return "pycke";
  }
  return "unknown";
}

std::optional<TestMethod> parse_test_method(std::string_view name) {
  for (TestMethod m : {TestMethod::NNTS1, TestMethod::NNTS2, TestMethod::Rayleigh, TestMethod::HRo,
                       TestMethod::HRm, TestMethod::Pycke})
    if (name == to_string(m)) return m;
  return std::nullopt;
}

}  // namespace nnts
