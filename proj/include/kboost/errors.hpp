#ifndef KBOOST_ERRORS_HPP
#define KBOOST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kboost {

// Thrown when a linear system or an iteration degenerates (singular Gram
// matrix after maximal jitter, all-zero dictionary column, ...).
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown on file-system failures (missing dataset, unwritable output dir).
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kboost

#endif
