#ifndef CSANITIZE_ERRORS_HPP
#define CSANITIZE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace csan {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad user input: malformed text, bad flag values, unusable files.
class InputError : public Error {
 public:
  explicit InputError(const std::string& msg) : Error(msg) {}
};

// Malformed or inconsistent taxonomy file.
class TaxonomyLoadError : public InputError {
 public:
  explicit TaxonomyLoadError(const std::string& msg) : InputError(msg) {}
};

// Index file could not be read back. `reason()` distinguishes the failure
// modes so callers (and tests) do not have to parse messages.
class IndexLoadError : public InputError {
 public:
  enum class Reason {
    bad_magic,
    version_mismatch,
    truncated,
    checksum_mismatch,
    fingerprint_mismatch,
  };

  IndexLoadError(Reason reason, const std::string& msg)
      : InputError(msg), reason_(reason) {}

  Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

// A protected entity has zero probability in the reference corpus, so its
// information content is undefined and no risk assessment is possible.
class EntityNotInCorpusError : public Error {
 public:
  explicit EntityNotInCorpusError(const std::string& entity)
      : Error("entity not present in corpus: '" + entity + "'"),
        entity_(entity) {}

  const std::string& entity() const { return entity_; }

 private:
  std::string entity_;
};

// Group enumeration hit the per-context evaluation cap.
class GroupBudgetError : public Error {
 public:
  GroupBudgetError(int context_index, std::size_t budget)
      : Error("group-subset budget of " + std::to_string(budget) +
              " evaluations exceeded in context " +
              std::to_string(context_index)),
        context_index_(context_index) {}

  int context_index() const { return context_index_; }

 private:
  int context_index_;
};

// An internal invariant was violated (e.g. the sanitizer's verification
// pass still reports findings after the removal retry).
class InternalError : public Error {
 public:
  explicit InternalError(const std::string& msg) : Error(msg) {}
};

}  // namespace csan

#endif  // CSANITIZE_ERRORS_HPP
