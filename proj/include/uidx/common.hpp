#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace uidx {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Token/document ids are 1-based; 0 is the "absent term" sentinel.
constexpr uint32_t kAbsentTerm = 0;

}  // namespace uidx
