#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace memorais {

/// Base class of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;

  /// Short machine-readable error kind, e.g. "MalformedInput".
  virtual const char* kind() const noexcept = 0;
};

/// Input document could not be parsed. `entry()` is the offending array
/// index, or npos when the problem is with the document as a whole.
class MalformedInput : public Error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  MalformedInput(std::size_t entry, const std::string& what)
      : Error(entry == npos ? what
                            : "entry " + std::to_string(entry) + ": " + what),
        entry_(entry) {}
  explicit MalformedInput(const std::string& what) : MalformedInput(npos, what) {}

  std::size_t entry() const noexcept { return entry_; }
  const char* kind() const noexcept override { return "MalformedInput"; }

 private:
  std::size_t entry_;
};

class CatalogError : public Error {
 public:
  CatalogError(std::string rule_id, std::string reason)
      : Error(rule_id.empty() ? reason : "rule '" + rule_id + "': " + reason),
        rule_id_(std::move(rule_id)),
        reason_(std::move(reason)) {}

  const std::string& rule_id() const noexcept { return rule_id_; }
  const std::string& reason() const noexcept { return reason_; }
  const char* kind() const noexcept override { return "CatalogError"; }

 private:
  std::string rule_id_;
  std::string reason_;
};

/// One rule hit inside the normalized label text, [start, end) in bytes.
struct RuleMatch {
  std::string rule_id;
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const RuleMatch&, const RuleMatch&) = default;
};

/// No frequency indicator matched: the label needs a human to read it.
class InterpretationFailure : public Error {
 public:
  InterpretationFailure(std::string normalized_text,
                        std::vector<RuleMatch> partial_matches)
      : Error("no frequency indicator matched: \"" + normalized_text + "\""),
        normalized_text_(std::move(normalized_text)),
        partial_matches_(std::move(partial_matches)) {}

  const std::string& normalized_text() const noexcept { return normalized_text_; }
  const std::vector<RuleMatch>& partial_matches() const noexcept {
    return partial_matches_;
  }
  const char* kind() const noexcept override { return "InterpretationFailure"; }

 private:
  std::string normalized_text_;
  std::vector<RuleMatch> partial_matches_;
};

class ScheduleError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "ScheduleError"; }
};

class EmitError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "EmitError"; }
};

/// Raised by the iCalendar re-parser; indicates an emitter defect.
class IcsParseError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "ParseError"; }
};

/// The external OCR command could not be run or exited unsuccessfully.
class OcrCommandError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "OcrCommandError"; }
};

}  // namespace memorais
