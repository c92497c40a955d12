#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace zeroclass {

class FiniteAlgebra;
class Signature;

// First-order term over a signature: the constant 0, a variable, or an
// operation applied to child terms.
struct Term {
  enum class Kind : std::uint8_t { Zero, Var, Op };

  Kind kind = Kind::Zero;
  int index = 0; // Var: variable id; Op: operation index in the signature
  std::vector<Term> children;

  static Term zero() { return Term{}; }
  static Term var(int v) { return Term{Kind::Var, v, {}}; }
  static Term op(int o, std::vector<Term> ch) { return Term{Kind::Op, o, std::move(ch)}; }

  bool operator==(const Term& other) const;
};

int term_depth(const Term& t);
int term_size(const Term& t);
int max_var_index(const Term& t); // -1 when no variables occur

// Total deterministic order: Zero < Var (by id) < Op (by op index, then
// children lexicographically).  Used for canonical enumeration order.
int term_compare(const Term& a, const Term& b);

int eval_term(const Term& t, const FiniteAlgebra& algebra, std::span<const int> assignment);

// Renders e.g. "s(x1, y2)"; var_name maps variable ids to display text.
std::string print_term(const Term& t, const Signature& sig,
                       const std::function<std::string(int)>& var_name);

Term substitute(const Term& t, const std::function<Term(int)>& replacement);

// --- rewriting (used by finitely presented varieties) ---

struct RewriteRule {
  Term lhs, rhs;
};

struct RewriteOutcome {
  Term normal_form;
  bool terminated = true; // false: step budget exhausted before a normal form
  long long steps = 0;
};

// Innermost-leftmost normalization, first matching rule wins; deterministic.
RewriteOutcome normalize(const Term& t, std::span<const RewriteRule> rules, long long step_bound);

} // namespace zeroclass
