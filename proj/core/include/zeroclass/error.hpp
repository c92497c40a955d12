#pragma once

#include <stdexcept>
#include <string>

namespace zeroclass {

// Validation failures a caller can provoke with bad input.  The CLI maps these
// to exit code 2; internal invariant breaks (InternalError) map to exit 4.
enum class Errc {
  TableArity,        // operation table has the wrong number of entries
  ValueRange,        // table entry or element index out of range
  NotPointed,        // closure of {0} escapes {0}
  SignatureMismatch, // operands live over different signatures
  SizeGuard,         // input exceeds a feasibility guard
  StepBound,         // iteration/step budget exhausted
  NotClosed,         // a set that must be a subuniverse is not closed
  NotAClot,          // construction requires a clot and the input is not one
  NotSurjective,     // construction requires a surjective map/relation
  NotASubuniverse,   // subset is not a subuniverse
  NotReflexive,      // relation must contain the diagonal
  MalformedDiagram,  // split-epi / cospan data does not commute as required
  ParseError,        // workspace file rejected
  InvalidArgument,   // anything else the caller got wrong
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

private:
  Errc code_;
};

// A broken internal invariant: never the caller's fault.
class InternalError : public std::logic_error {
public:
  explicit InternalError(const std::string& what) : std::logic_error("internal: " + what) {}
};

inline void internal_check(bool ok, const char* what) {
  if (!ok) throw InternalError(what);
}

} // namespace zeroclass
