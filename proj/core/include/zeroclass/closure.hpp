#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "zeroclass/algebra.hpp"
#include "zeroclass/term.hpp"

namespace zeroclass {

// ---------------------------------------------------------------------------
// Subuniverse generation.
// ---------------------------------------------------------------------------

// How each element of a generated set was first produced.  Discovery happens
// in rounds (seeds are round 0); within a round, operations are applied in
// signature order and argument tuples in lexicographic member order, so the
// first derivation of an element is the shallowest and is deterministic.
struct GenerationTrace {
  struct Step {
    int op = -1;           // -1: seed
    std::vector<int> args; // ordinals into `members`
  };
  std::vector<int> members; // discovery order
  std::vector<Step> steps;  // parallel to members
};

// Least subuniverse containing seed (0 is always included).
Subuniverse generate_subuniverse(const AlgebraPtr& A, std::span<const int> seed,
                                 GenerationTrace* trace = nullptr);

struct SubuniverseListOptions {
  int size_guard = 20;            // refuse larger carriers unless overridden
  bool override_guard = false;
  long long max_count = 2'000'000; // hard stop against degenerate blowups
};

// All subuniverses, sorted lexicographically by their sorted member lists.
std::vector<Subuniverse> list_subuniverses(const AlgebraPtr& A,
                                           const SubuniverseListOptions& opts = {});

// ---------------------------------------------------------------------------
// Congruence generation: alternate compatibility closure (subuniverse
// generation of the pair set in A x A) with symmetric-transitive closure
// until the pair set stabilizes.
// ---------------------------------------------------------------------------

Congruence generate_congruence(const AlgebraPtr& A,
                               std::span<const std::pair<int, int>> pairs);

Congruence diagonal_congruence(AlgebraPtr A);
Congruence full_congruence(AlgebraPtr A);
Congruence join(const Congruence& a, const Congruence& b);

struct CongruenceListOptions {
  long long max_count = 100'000;
};

// The whole congruence lattice: principal congruences closed under join.
std::vector<Congruence> list_congruences(const AlgebraPtr& A,
                                         const CongruenceListOptions& opts = {});

// ---------------------------------------------------------------------------
// Varieties: either generated by finitely many finite algebras (identities
// decided by evaluation) or finitely presented by oriented rewrite rules
// (identities decided by normal forms, with a convergence caveat).
// ---------------------------------------------------------------------------

class Variety {
public:
  enum class Kind { GeneratedBy, Presented };

  static Variety generated_by(std::vector<AlgebraPtr> generators);
  // Checks that every `f(0,...,0)` normalizes to 0, so ground terms collapse
  // to the point.  var_names gives display names for rule variables.
  static Variety presented(SignaturePtr sig, std::vector<RewriteRule> rules,
                           long long step_bound = 512,
                           std::vector<std::string> var_names = {});

  Kind kind() const { return kind_; }
  const SignaturePtr& signature_ptr() const { return sig_; }
  const Signature& signature() const { return *sig_; }
  const std::vector<AlgebraPtr>& generators() const { return generators_; }
  const std::vector<RewriteRule>& rules() const { return rules_; }
  long long step_bound() const { return step_bound_; }
  const std::vector<std::string>& rule_var_names() const { return var_names_; }

private:
  Kind kind_ = Kind::GeneratedBy;
  SignaturePtr sig_;
  std::vector<AlgebraPtr> generators_;
  std::vector<RewriteRule> rules_;
  long long step_bound_ = 512;
  std::vector<std::string> var_names_;
};

enum class IdentityStatus {
  Holds,              // exact for GeneratedBy; normal forms equal for Presented
  FailsByModel,       // a generator algebra and assignment separate the sides
  FailsByNormalForm,  // distinct normal forms (assumes the rules are convergent)
  Unknown,            // rewrite step budget exhausted
};

struct IdentityResult {
  IdentityStatus status = IdentityStatus::Unknown;
  int generator_index = -1;    // FailsByModel
  std::vector<int> assignment; // FailsByModel
  Term lhs_nf, rhs_nf;         // Presented outcomes
  bool holds() const { return status == IdentityStatus::Holds; }
};

IdentityResult identity_holds(const Variety& V, const Term& lhs, const Term& rhs,
                              int var_count);

// ---------------------------------------------------------------------------
// Free algebra on k generators: the subalgebra of the product of A^(A^k)
// over the generator algebras A, generated by the variable projections.
// Elements carry derivation terms; element 0 is the constant-0 tuple.
// ---------------------------------------------------------------------------

struct FreeAlgebraOptions {
  long long max_elements = 200'000;  // generation budget (StepBound beyond)
  long long max_coords = 1'000'000;  // sum of |A|^k guard (SizeGuard beyond)
  long long table_budget = 50'000'000;
};

struct FreeAlgebraResult {
  AlgebraPtr algebra;
  std::vector<int> generators;  // element index of each variable projection
  std::vector<Term> derivations;
  std::vector<AlgebraPtr> basis; // the generator algebras of the variety
  int gen_count = 0;
  std::vector<std::vector<std::uint8_t>> vectors; // concatenated eval tables

  // Table of the element's induced k-ary term function on basis[basis_index],
  // in lexicographic argument order.
  std::vector<int> term_table(int element, int basis_index) const;
};

FreeAlgebraResult free_algebra(const Variety& V, int k, const FreeAlgebraOptions& opts = {});

// ---------------------------------------------------------------------------
// Terms t(x1..xm, y1..yn) with t(x, 0, ..., 0) = 0 in V, enumerated as term
// functions on A in (depth, term) order, deduplicated by evaluated table
// (shallowest derivation kept).  Variables 0..m-1 are the x block and
// m..m+n-1 the y block.
// ---------------------------------------------------------------------------

struct IdealTermBounds {
  int max_depth = 6;
  int max_x_vars = 0; // 0: default |A|
  int max_y_vars = 0; // 0: default |A| (classify narrows to |I|)
  long long max_functions = 3000;       // distinct candidate functions
  long long max_steps = 200'000'000;    // pointwise evaluation budget
  long long table_entry_budget = 4096;  // per-function table size cap;
                                        // variable counts shrink to fit
};

struct IdealTermEntry {
  Term term;
  int x_vars = 0, y_vars = 0;
  int depth = 0;
  std::vector<std::uint8_t> table; // (x_vars + y_vars)-ary table on A
};

class IdealTermStream {
public:
  IdealTermStream(const Variety& V, AlgebraPtr A, IdealTermBounds bounds = {});
  ~IdealTermStream();
  IdealTermStream(IdealTermStream&&) noexcept;
  IdealTermStream& operator=(IdealTermStream&&) noexcept;

  std::optional<IdealTermEntry> next();
  bool truncated() const;                      // a budget cut the stream short
  const IdealTermBounds& effective_bounds() const; // after variable shrinking

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

} // namespace zeroclass
