#include "zeroclass/term.hpp"

#include <optional>

#include "zeroclass/algebra.hpp"
#include "zeroclass/error.hpp"

namespace zeroclass {

bool Term::operator==(const Term& other) const {
  if (kind != other.kind || index != other.index) return false;
  if (children.size() != other.children.size()) return false;
  for (size_t i = 0; i < children.size(); ++i)
    if (!(children[i] == other.children[i])) return false;
  return true;
}

int term_depth(const Term& t) {
  int d = 0;
  for (const Term& c : t.children) d = std::max(d, 1 + term_depth(c));
  return d;
}

int term_size(const Term& t) {
  int s = 1;
  for (const Term& c : t.children) s += term_size(c);
  return s;
}

int max_var_index(const Term& t) {
  int m = t.kind == Term::Kind::Var ? t.index : -1;
  for (const Term& c : t.children) m = std::max(m, max_var_index(c));
  return m;
}

int term_compare(const Term& a, const Term& b) {
  auto rank = [](const Term& t) {
    switch (t.kind) {
      case Term::Kind::Zero: return 0;
      case Term::Kind::Var: return 1;
      case Term::Kind::Op: return 2;
    }
    return 3;
  };
  if (rank(a) != rank(b)) return rank(a) < rank(b) ? -1 : 1;
  if (a.kind == Term::Kind::Zero) return 0;
  if (a.index != b.index) return a.index < b.index ? -1 : 1;
  if (a.kind == Term::Kind::Var) return 0;
  size_t n = std::min(a.children.size(), b.children.size());
  for (size_t i = 0; i < n; ++i) {
    int c = term_compare(a.children[i], b.children[i]);
    if (c != 0) return c;
  }
  if (a.children.size() != b.children.size())
    return a.children.size() < b.children.size() ? -1 : 1;
  return 0;
}

int eval_term(const Term& t, const FiniteAlgebra& algebra, std::span<const int> assignment) {
  switch (t.kind) {
    case Term::Kind::Zero:
      return 0;
    case Term::Kind::Var:
      if (t.index < 0 || static_cast<size_t>(t.index) >= assignment.size())
        throw Error(Errc::InvalidArgument, "term variable outside the assignment");
      return assignment[static_cast<size_t>(t.index)];
    case Term::Kind::Op: {
      std::vector<int> args;
      args.reserve(t.children.size());
      for (const Term& c : t.children) args.push_back(eval_term(c, algebra, assignment));
      return algebra.eval(t.index, args);
    }
  }
  throw InternalError("unreachable term kind");
}

std::string print_term(const Term& t, const Signature& sig,
                       const std::function<std::string(int)>& var_name) {
  switch (t.kind) {
    case Term::Kind::Zero:
      return "0";
    case Term::Kind::Var:
      return var_name(t.index);
    case Term::Kind::Op: {
      std::string out = sig.op(t.index).name;
      out += '(';
      for (size_t i = 0; i < t.children.size(); ++i) {
        if (i) out += ',';
        out += print_term(t.children[i], sig, var_name);
      }
      out += ')';
      return out;
    }
  }
  throw InternalError("unreachable term kind");
}

Term substitute(const Term& t, const std::function<Term(int)>& replacement) {
  switch (t.kind) {
    case Term::Kind::Zero:
      return t;
    case Term::Kind::Var:
      return replacement(t.index);
    case Term::Kind::Op: {
      std::vector<Term> ch;
      ch.reserve(t.children.size());
      for (const Term& c : t.children) ch.push_back(substitute(c, replacement));
      return Term::op(t.index, std::move(ch));
    }
  }
  throw InternalError("unreachable term kind");
}

namespace {

bool match(const Term& pattern, const Term& subject, std::vector<std::optional<Term>>& binding) {
  switch (pattern.kind) {
    case Term::Kind::Zero:
      return subject.kind == Term::Kind::Zero;
    case Term::Kind::Var: {
      auto idx = static_cast<size_t>(pattern.index);
      if (binding.size() <= idx) binding.resize(idx + 1);
      if (!binding[idx]) {
        binding[idx] = subject;
        return true;
      }
      return *binding[idx] == subject;
    }
    case Term::Kind::Op: {
      if (subject.kind != Term::Kind::Op || subject.index != pattern.index) return false;
      for (size_t i = 0; i < pattern.children.size(); ++i)
        if (!match(pattern.children[i], subject.children[i], binding)) return false;
      return true;
    }
  }
  return false;
}

// Rewrites t to normal form, innermost-leftmost, first rule wins.
bool normalize_rec(Term& t, std::span<const RewriteRule> rules, long long step_bound,
                   long long& steps) {
  for (;;) {
    for (Term& c : t.children)
      if (!normalize_rec(c, rules, step_bound, steps)) return false;
    bool rewrote = false;
    for (const RewriteRule& rule : rules) {
      std::vector<std::optional<Term>> binding;
      if (match(rule.lhs, t, binding)) {
        if (steps >= step_bound) return false;
        ++steps;
        t = substitute(rule.rhs, [&](int v) {
          auto idx = static_cast<size_t>(v);
          if (idx < binding.size() && binding[idx]) return *binding[idx];
          return Term::var(v);
        });
        rewrote = true;
        break;
      }
    }
    if (!rewrote) return true;
  }
}

} // namespace

RewriteOutcome normalize(const Term& t, std::span<const RewriteRule> rules, long long step_bound) {
  RewriteOutcome out;
  out.normal_form = t;
  out.terminated = normalize_rec(out.normal_form, rules, step_bound, out.steps);
  return out;
}

} // namespace zeroclass
