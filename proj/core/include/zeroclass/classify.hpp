// Deciding where a subalgebra sits in the hierarchy
// kernel <= normal <= clot <= ideal, with replayable evidence either way.
#pragma once

#include <optional>
#include <string>

#include "zeroclass/span.hpp"

namespace zeroclass {

// --- normal / kernel ----------------------------------------------------------

// K is normal iff it is exactly the zero block of the congruence generated by
// {0} x K (monotonicity makes that single test conclusive).
struct NormalResult {
  bool normal = false;
  Congruence theta;            // congruence generated by {(0, k) : k in K}
  std::vector<int> zero_block; // its block of 0
};
NormalResult is_normal(const Subuniverse& K);

// K is a kernel iff it is the zero fibre of some homomorphism; the quotient
// by the generated congruence is the universal candidate.
struct KernelResult {
  bool kernel = false;
  Congruence theta;
  std::optional<QuotientAlgebra> quotient; // present with the verdict either way
  std::vector<int> zero_fibre;             // preimage of 0 under the projection
};
KernelResult is_kernel(const Subuniverse& K);

// --- clots ---------------------------------------------------------------------

// A term instance showing a subset escapes: substituting `params` for the
// x-variables and `args` (members of the subset) for the y-variables yields
// `value` outside the subset, while zeroing the y-variables yields 0.
struct TermViolation {
  Term term;
  int x_count = 0, y_count = 0; // variables 0..x-1 then x..x+y-1
  std::vector<int> params, args;
  int value = 0;
};

// Least clot containing K: the zero-class of the reflexive endorelation
// generated by the diagonal together with {0} x K.
std::vector<int> clot_closure(const Subuniverse& K);

struct ClotResult {
  bool clot = false;
  std::vector<int> closure;              // clot closure of K
  std::optional<Relation> witness;       // reflexive endorelation, zero-class K
  std::optional<TermViolation> violation; // first escape, unfolded from the trace
};
ClotResult is_clot(const Subuniverse& K);

// --- ideals: refutation ----------------------------------------------------------

struct RefuteOptions {
  IdealTermBounds bounds; // y-variable count defaults to |I|
};

enum class RefuteStatus {
  ViolationFound, // I is not an ideal relative to V
  Exhausted,      // every term function within the variable bounds was checked
  Truncated,      // a budget cut the stream short; no violation seen
};

struct RefuteOutcome {
  RefuteStatus status = RefuteStatus::Truncated;
  std::optional<TermViolation> violation;
  long long candidates_streamed = 0;
  long long ideal_terms_checked = 0;
  int effective_x = 0, effective_y = 0; // variable counts after shrinking
  // Exhaustion proves I is an ideal only when the bounds were not shrunk and
  // the term test is table-exact (variety generated by the parent alone).
  bool conclusive = false;
};
RefuteOutcome refute_ideal(const Variety& V, const Subuniverse& I,
                           const RefuteOptions& opts = {});

// --- ideals: certification --------------------------------------------------------

struct IdealCertificate {
  AlgebraPtr B;
  Relation rel; // subalgebra of B x A, surjective onto A
  std::vector<int> zero_class_members;
  std::optional<Homomorphism> section; // left splitting of the first projection
  int pool_index = -1;
  std::string route; // "clot", "search", or "construction"
};

struct CertifyOptions {
  std::vector<AlgebraPtr> pool; // empty: default_pool(V, parent of I)
  SubuniverseListOptions search_guard;  // cap on |B x A| for the direct search
  long long hom_budget = 200'000;       // cap on |A|^|B| for the construction route
  bool try_search = true;
  bool try_construction = true;
};

struct CertifyOutcome {
  std::optional<IdealCertificate> certificate;
  long long relations_examined = 0;
  int pools_tried = 0;
  bool every_entry_completed = true; // no guard or budget skipped work
};
CertifyOutcome certify_ideal(const Variety& V, const Subuniverse& I,
                             const CertifyOptions& opts = {});

// Candidate source algebras: the parent itself; for a presented variety every
// two-element pointed model of the rules (in table order); quotients of the
// square of the parent.
std::vector<AlgebraPtr> default_pool(const Variety& V, const AlgebraPtr& A);

// --- combined verdict ---------------------------------------------------------------

enum class IdealStatus { Ideal, NotIdeal, Unknown };

struct ClassifyOptions {
  RefuteOptions refute;
  CertifyOptions certify;
  bool run_refute = true;
  bool run_certify = true;
};

struct Verdict {
  Subuniverse subject;
  NormalResult normal;
  KernelResult kernel;
  ClotResult clot;
  IdealStatus ideal = IdealStatus::Unknown;
  std::optional<IdealCertificate> certificate; // evidence for Ideal
  std::optional<TermViolation> refutation;     // evidence for NotIdeal
  bool ideal_terms_exhausted = false; // refutation stream ran to completion
  RefuteOutcome refute_info;
  CertifyOutcome certify_info;
  bool refute_ran = false, certify_ran = false;
};
Verdict classify(const Variety& V, const Subuniverse& K, const ClassifyOptions& opts = {});

// --- replay verification -------------------------------------------------------------

struct CheckResult {
  bool ok = false;
  std::string reason; // empty when ok
};

// Replays a certificate from scratch: graph closedness, surjectivity,
// zero-class, section validity, and (for presented varieties) that B models
// the rules.
CheckResult verify_certificate(const Variety& V, const AlgebraPtr& A,
                               const std::vector<int>& ideal_members,
                               const IdealCertificate& cert);

// Replays a refutation: the zeroed term is 0 throughout V, the arguments lie
// in the subset, and the instance escapes it.
CheckResult verify_refutation(const Variety& V, const Subuniverse& I,
                              const TermViolation& violation);

// Replays a clot violation: pointwise zeroing (no variety involved), the
// arguments lie in the subset, and the instance escapes it.
CheckResult verify_clot_violation(const Subuniverse& K, const TermViolation& violation);

} // namespace zeroclass
