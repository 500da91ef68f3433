#pragma once

#include <stdexcept>
#include <string>

namespace mmsbayes {

// Precondition or type-invariant violation on a library call.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A session state transition that would break a named rule.
class ConflictError : public std::runtime_error {
 public:
  ConflictError(std::string rule, const std::string& message)
      : std::runtime_error(message), rule_(std::move(rule)) {}

  const std::string& rule() const noexcept { return rule_; }

 private:
  std::string rule_;
};

}  // namespace mmsbayes
