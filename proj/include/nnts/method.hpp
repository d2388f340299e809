#pragma once

#include <optional>
#include <string_view>

namespace nnts {

enum class TestMethod { NNTS1, NNTS2, Rayleigh, HRo, HRm, Pycke };

const char* to_string(TestMethod method);

// Accepts the lower-case CLI spellings: nnts1, nnts2, rayleigh, hro, hrm, pycke.
std::optional<TestMethod> parse_test_method(std::string_view name);

constexpr bool is_nnts(TestMethod method) noexcept {
  return method == TestMethod::NNTS1 || method == TestMethod::NNTS2;
}

}  // namespace nnts
