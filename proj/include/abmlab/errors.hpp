#pragma once

#include <stdexcept>
#include <string>

namespace abmlab {

struct NotTwoValued : std::invalid_argument {
  explicit NotTwoValued(const std::string& what) : std::invalid_argument(what) {}
};

struct OddCountOnTorus : std::invalid_argument {
  explicit OddCountOnTorus(const std::string& what) : std::invalid_argument(what) {}
};

struct BadAlpha : std::invalid_argument {
  explicit BadAlpha(const std::string& what) : std::invalid_argument(what) {}
};

struct NonPositiveDt : std::invalid_argument {
  explicit NonPositiveDt(const std::string& what) : std::invalid_argument(what) {}
};

struct QuadratureNotConverged : std::runtime_error {
  explicit QuadratureNotConverged(const std::string& what) : std::runtime_error(what) {}
};

struct ValidationError : std::invalid_argument {
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace abmlab
