#pragma once

#include <stdexcept>
#include <string>

namespace uniblock {

// Invalid input or violated operation precondition. The CLI maps this to
// exit code 2.
class PreconditionError : public std::runtime_error {
public:
  explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

// Broken internal invariant; indicates a bug, not bad input. CLI exit code 3.
class InternalError : public std::logic_error {
public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

} // namespace uniblock
