#ifndef DEPSUB_ERROR_HPP
#define DEPSUB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace depsub {

// A violated precondition or invariant of the engine.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An input document that cannot be read or does not match its schema.
// `where` is a file:line location or a JSON pointer into the document.
class DocumentError : public std::runtime_error {
 public:
  DocumentError(std::string where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what), where_(std::move(where)), message_(what) {}

  const std::string& where() const noexcept { return where_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string where_;
  std::string message_;
};

}  // namespace depsub

#endif  // DEPSUB_ERROR_HPP
