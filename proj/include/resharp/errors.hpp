#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace resharp {

struct ParseError : std::runtime_error {
  ParseError(size_t position, const std::string& message)
      : std::runtime_error("parse error at " + std::to_string(position) +
                           ": " + message),
        pos(position) {}
  size_t pos;
};

// Syntactically valid construct that this engine deliberately rejects
// (backreferences, capture semantics, atomic groups).
struct Unsupported : ParseError {
  Unsupported(size_t position, const std::string& message)
      : ParseError(position, "unsupported: " + message) {}
};

struct GrammarViolation : std::runtime_error {
  explicit GrammarViolation(const std::string& message)
      : std::runtime_error("grammar violation: " + message) {}
};

struct LoopBoundError : std::runtime_error {
  explicit LoopBoundError(const std::string& message)
      : std::runtime_error("loop bound error: " + message) {}
};

struct MintermOverflow : std::runtime_error {
  explicit MintermOverflow(size_t blocks)
      : std::runtime_error("minterm overflow: " + std::to_string(blocks) +
                           " blocks") {}
};

struct StateLimitExceeded : std::runtime_error {
  explicit StateLimitExceeded(size_t limit)
      : std::runtime_error("state limit exceeded: " + std::to_string(limit) +
                           " states (no NFA fallback is available; raise "
                           "--max-states or simplify the pattern)"),
        limit(limit) {}
  size_t limit;
};

struct InputTooLarge : std::runtime_error {
  explicit InputTooLarge(size_t size, size_t guard)
      : std::runtime_error("reference oracle input too large: " +
                           std::to_string(size) + " > " +
                           std::to_string(guard)) {}
};

}  // namespace resharp
