#include "zeroclass/classify.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace zeroclass {

// --- normal / kernel ----------------------------------------------------------

namespace {

Congruence congruence_collapsing_to_zero(const Subuniverse& K) {
  std::vector<std::pair<int, int>> pairs;
  for (int k : K.members)
    if (k != 0) pairs.emplace_back(0, k);
  return generate_congruence(K.parent, pairs);
}

} // namespace

NormalResult is_normal(const Subuniverse& K) {
  NormalResult out;
  out.theta = congruence_collapsing_to_zero(K);
  out.zero_block = out.theta.blocks[static_cast<size_t>(out.theta.block_of[0])];
  out.normal = out.zero_block == K.members;
  return out;
}

KernelResult is_kernel(const Subuniverse& K) {
  KernelResult out;
  out.theta = congruence_collapsing_to_zero(K);
  out.quotient = quotient(K.parent, out.theta);
  for (int e = 0; e < K.parent->size(); ++e)
    if (out.quotient->projection.map[static_cast<size_t>(e)] == 0) out.zero_fibre.push_back(e);
  out.kernel = out.zero_fibre == K.members;
  return out;
}

// --- clots ---------------------------------------------------------------------

namespace {

struct ReflexiveClosure {
  ProductAlgebra sq;
  Subuniverse relation;
  GenerationTrace trace;
};

ReflexiveClosure reflexive_closure(const Subuniverse& K) {
  const AlgebraPtr& A = K.parent;
  ProductAlgebra sq = product(A, A);
  std::vector<int> seeds;
  for (int x = 0; x < A->size(); ++x) seeds.push_back(sq.pair(x, x));
  for (int k : K.members)
    if (k != 0) seeds.push_back(sq.pair(0, k));
  GenerationTrace trace;
  Subuniverse rel = generate_subuniverse(sq.algebra, seeds, &trace);
  return ReflexiveClosure{std::move(sq), std::move(rel), std::move(trace)};
}

std::vector<int> zero_class_of_codes(const ProductAlgebra& sq, const std::vector<int>& codes) {
  std::vector<int> out;
  for (int code : codes) {
    auto [x, y] = sq.unpair(code);
    if (x == 0) out.push_back(y);
    if (x > 0) break; // sorted codes: the 0-block is a prefix
  }
  return out;
}

// Unfolds the derivation of trace element `root` into a term whose
// x-variables stand for diagonal seeds and y-variables for (0, k) seeds.
TermViolation unfold_violation(const ProductAlgebra& sq, const GenerationTrace& trace,
                               int root) {
  std::vector<int> param_values, arg_values;
  std::map<int, int> xvar, yvar;

  auto collect = [&](int i, auto&& self) -> void {
    const GenerationTrace::Step& st = trace.steps[static_cast<size_t>(i)];
    if (st.op < 0) {
      auto [u, v] = sq.unpair(trace.members[static_cast<size_t>(i)]);
      if (u == 0 && v == 0) return; // the point
      if (u == v) {
        if (!xvar.count(u)) {
          xvar[u] = static_cast<int>(param_values.size());
          param_values.push_back(u);
        }
      } else {
        internal_check(u == 0, "seed pairs are diagonal or zero-rooted");
        if (!yvar.count(v)) {
          yvar[v] = static_cast<int>(arg_values.size());
          arg_values.push_back(v);
        }
      }
      return;
    }
    for (int a : st.args) self(a, self);
  };
  collect(root, collect);

  int x_count = static_cast<int>(param_values.size());
  std::map<int, Term> memo;
  auto build = [&](int i, auto&& self) -> Term {
    auto it = memo.find(i);
    if (it != memo.end()) return it->second;
    const GenerationTrace::Step& st = trace.steps[static_cast<size_t>(i)];
    Term t = Term::zero();
    if (st.op < 0) {
      auto [u, v] = sq.unpair(trace.members[static_cast<size_t>(i)]);
      if (u == 0 && v == 0) t = Term::zero();
      else if (u == v) t = Term::var(xvar.at(u));
      else t = Term::var(x_count + yvar.at(v));
    } else {
      std::vector<Term> children;
      children.reserve(st.args.size());
      for (int a : st.args) children.push_back(self(a, self));
      t = Term::op(st.op, std::move(children));
    }
    memo.emplace(i, t);
    return t;
  };

  TermViolation out;
  out.term = build(root, build);
  out.x_count = x_count;
  out.y_count = static_cast<int>(arg_values.size());
  out.params = std::move(param_values);
  out.args = std::move(arg_values);
  out.value = sq.unpair(trace.members[static_cast<size_t>(root)]).second;
  return out;
}

} // namespace

std::vector<int> clot_closure(const Subuniverse& K) {
  ReflexiveClosure rc = reflexive_closure(K);
  return zero_class_of_codes(rc.sq, rc.relation.members);
}

ClotResult is_clot(const Subuniverse& K) {
  ReflexiveClosure rc = reflexive_closure(K);
  ClotResult out;
  out.closure = zero_class_of_codes(rc.sq, rc.relation.members);
  out.clot = out.closure == K.members;
  if (out.clot) {
    out.witness = Relation{K.parent, K.parent, rc.sq, rc.relation.members};
    return out;
  }
  // First escape in discovery order unfolds into a witness instance.
  for (size_t i = 0; i < rc.trace.members.size(); ++i) {
    auto [x, y] = rc.sq.unpair(rc.trace.members[i]);
    if (x == 0 && !K.contains(y)) {
      TermViolation tv = unfold_violation(rc.sq, rc.trace, static_cast<int>(i));
      internal_check(verify_clot_violation(K, tv).ok, "unfolded clot witness failed replay");
      out.violation = std::move(tv);
      return out;
    }
  }
  internal_check(false, "closure escaped without a traceable witness");
  return out;
}

// --- ideals: refutation ----------------------------------------------------------

RefuteOutcome refute_ideal(const Variety& V, const Subuniverse& I, const RefuteOptions& opts) {
  const AlgebraPtr& A = I.parent;
  int n = A->size();
  IdealTermBounds bounds = opts.bounds;
  if (bounds.max_y_vars == 0) bounds.max_y_vars = static_cast<int>(I.members.size());
  IdealTermStream stream(V, A, bounds);
  int mx = stream.effective_bounds().max_x_vars;
  int my = stream.effective_bounds().max_y_vars;

  bool table_exact = V.kind() == Variety::Kind::GeneratedBy &&
                     V.generators().size() == 1 && *V.generators()[0] == *A;

  std::vector<long long> xpow(static_cast<size_t>(mx)), ypow(static_cast<size_t>(my));
  {
    long long p = 1;
    for (int j = my - 1; j >= 0; --j) { ypow[static_cast<size_t>(j)] = p; p *= n; }
    for (int j = mx - 1; j >= 0; --j) { xpow[static_cast<size_t>(j)] = p; p *= n; }
  }

  RefuteOutcome out;
  out.effective_x = mx;
  out.effective_y = my;
  while (std::optional<IdealTermEntry> entry = stream.next()) {
    ++out.candidates_streamed;

    bool ideal_term;
    if (table_exact) {
      ideal_term = true;
      long long xspan = 1;
      for (int j = 0; j < mx; ++j) xspan *= n;
      long long ystride = 1;
      for (int j = 0; j < my; ++j) ystride *= n;
      for (long long p = 0; p < xspan && ideal_term; ++p)
        if (entry->table[static_cast<size_t>(p * ystride)] != 0) ideal_term = false;
    } else {
      Term zeroed = substitute(entry->term, [&](int v) {
        return v < mx ? Term::var(v) : Term::zero();
      });
      ideal_term = identity_holds(V, zeroed, Term::zero(), mx).holds();
    }
    if (!ideal_term) continue;
    ++out.ideal_terms_checked;

    // Scan parameters over the carrier and arguments over I, lexicographically.
    std::vector<int> params(static_cast<size_t>(mx), 0);
    std::vector<int> args_idx(static_cast<size_t>(my), 0);
    for (;;) {
      long long base = 0;
      for (int j = 0; j < mx; ++j) base += params[static_cast<size_t>(j)] * xpow[static_cast<size_t>(j)];
      for (;;) {
        long long idx = base;
        for (int j = 0; j < my; ++j)
          idx += I.members[static_cast<size_t>(args_idx[static_cast<size_t>(j)])] *
                 ypow[static_cast<size_t>(j)];
        int value = entry->table[static_cast<size_t>(idx)];
        if (!I.contains(value)) {
          TermViolation tv;
          tv.term = entry->term;
          tv.x_count = mx;
          tv.y_count = my;
          tv.params = params;
          tv.args.resize(static_cast<size_t>(my));
          for (int j = 0; j < my; ++j)
            tv.args[static_cast<size_t>(j)] = I.members[static_cast<size_t>(args_idx[static_cast<size_t>(j)])];
          tv.value = value;
          out.status = RefuteStatus::ViolationFound;
          out.violation = std::move(tv);
          return out;
        }
        int j = my - 1;
        while (j >= 0 && args_idx[static_cast<size_t>(j)] == static_cast<int>(I.members.size()) - 1)
          args_idx[static_cast<size_t>(j--)] = 0;
        if (j < 0) break;
        ++args_idx[static_cast<size_t>(j)];
      }
      int j = mx - 1;
      while (j >= 0 && params[static_cast<size_t>(j)] == n - 1) params[static_cast<size_t>(j--)] = 0;
      if (j < 0) break;
      ++params[static_cast<size_t>(j)];
    }
  }

  out.status = stream.truncated() ? RefuteStatus::Truncated : RefuteStatus::Exhausted;
  out.conclusive = out.status == RefuteStatus::Exhausted && table_exact && mx >= n &&
                   my >= static_cast<int>(I.members.size());
  return out;
}

// --- ideals: certification --------------------------------------------------------

namespace {

bool algebra_models_rules(const FiniteAlgebra& B, const std::vector<RewriteRule>& rules) {
  for (const RewriteRule& r : rules) {
    int vars = std::max(max_var_index(r.lhs), max_var_index(r.rhs)) + 1;
    std::vector<int> asg(static_cast<size_t>(std::max(vars, 1)), 0);
    long long total = 1;
    for (int i = 0; i < vars; ++i) total *= B.size();
    for (long long it = 0; it < total; ++it) {
      if (eval_term(r.lhs, B, asg) != eval_term(r.rhs, B, asg)) return false;
      int i = vars - 1;
      while (i >= 0 && asg[static_cast<size_t>(i)] == B.size() - 1) asg[static_cast<size_t>(i--)] = 0;
      if (i < 0) break;
      ++asg[static_cast<size_t>(i)];
    }
  }
  return true;
}

} // namespace

std::vector<AlgebraPtr> default_pool(const Variety& V, const AlgebraPtr& A) {
  std::vector<AlgebraPtr> pool{A};

  if (V.kind() == Variety::Kind::Presented) {
    // Every two-element pointed algebra over the signature, in table order,
    // kept when it models the rules.
    const Signature& sig = V.signature();
    std::vector<int> free_per_op(static_cast<size_t>(sig.op_count()));
    long long total = 1;
    bool feasible = true;
    for (int op = 0; op < sig.op_count(); ++op) {
      long long entries = 1;
      for (int i = 0; i < sig.op(op).arity; ++i) entries *= 2;
      free_per_op[static_cast<size_t>(op)] = static_cast<int>(entries - 1);
      for (int i = 0; i < entries - 1 && feasible; ++i) {
        total *= 2;
        if (total > 4096) feasible = false;
      }
    }
    if (feasible) {
      for (long long code = 0; code < total; ++code) {
        long long rest = code;
        std::vector<std::vector<int>> tables(static_cast<size_t>(sig.op_count()));
        // The last free entry of the last op varies fastest.
        for (int op = sig.op_count() - 1; op >= 0; --op) {
          int fr = free_per_op[static_cast<size_t>(op)];
          std::vector<int>& tab = tables[static_cast<size_t>(op)];
          tab.assign(static_cast<size_t>(fr) + 1, 0);
          for (int e = fr; e >= 1; --e) {
            tab[static_cast<size_t>(e)] = static_cast<int>(rest % 2);
            rest /= 2;
          }
        }
        AlgebraPtr B = make_algebra(V.signature_ptr(), 2, std::move(tables));
        if (algebra_models_rules(*B, V.rules())) pool.push_back(std::move(B));
      }
    }
  }

  // Quotients of the square, one per congruence, in congruence order.
  try {
    ProductAlgebra sq = product(A, A);
    if (sq.algebra->size() <= 16) {
      for (const Congruence& theta : list_congruences(sq.algebra))
        pool.push_back(quotient(sq.algebra, theta).algebra);
    }
  } catch (const Error&) {
    // Guards tripped; the pool simply stays shorter.
  }
  return pool;
}

CertifyOutcome certify_ideal(const Variety& V, const Subuniverse& I, const CertifyOptions& opts) {
  const AlgebraPtr& A = I.parent;
  std::vector<AlgebraPtr> pool = opts.pool.empty() ? default_pool(V, A) : opts.pool;
  CertifyOutcome out;

  for (size_t pi = 0; pi < pool.size(); ++pi) {
    const AlgebraPtr& B = pool[pi];
    ++out.pools_tried;
    if (!(B->signature() == A->signature())) {
      out.every_entry_completed = false;
      continue;
    }

    bool search_done = false;
    if (opts.try_search && static_cast<long long>(B->size()) * A->size() <= opts.search_guard.size_guard) {
      try {
        ProductAlgebra prod = product(B, A);
        std::vector<Subuniverse> subs = list_subuniverses(prod.algebra, opts.search_guard);
        for (const Subuniverse& sub : subs) {
          ++out.relations_examined;
          Relation rel{B, A, prod, sub.members};
          if (zero_class(rel) != I.members) continue;
          if (!is_surjective(rel)) continue;
          std::optional<Homomorphism> section = find_left_splitting(rel);
          if (!section) continue;
          IdealCertificate cert{B, std::move(rel), I.members, std::move(section),
                                static_cast<int>(pi), "search"};
          out.certificate = std::move(cert);
          return out;
        }
        search_done = true;
      } catch (const Error&) {
        // Listing guard fired; fall through to the construction route.
      }
    }

    bool construction_done = false;
    if (opts.try_construction) {
      int nb = B->size(), na = A->size();
      long long total = 1;
      bool feasible = true;
      for (int i = 1; i < nb && feasible; ++i) {
        total *= na;
        if (total > opts.hom_budget) feasible = false;
      }
      std::vector<Subuniverse> clots;
      bool have_clots = false;
      if (feasible) {
        try {
          for (const Subuniverse& sub : list_subuniverses(B))
            if (clot_closure(sub) == sub.members) clots.push_back(sub);
          have_clots = true;
        } catch (const Error&) {
          feasible = false;
        }
      }
      if (feasible && have_clots) {
        std::vector<int> map(static_cast<size_t>(nb), 0);
        for (long long it = 0; it < total; ++it) {
          if (is_homomorphism(*B, *A, map) && is_surjective(Homomorphism{B, A, map})) {
            Homomorphism f{B, A, map};
            for (const Subuniverse& K : clots) {
              std::set<int> img;
              for (int k : K.members) img.insert(map[static_cast<size_t>(k)]);
              if (std::vector<int>(img.begin(), img.end()) != I.members) continue;
              LeftSplitConstruction c = construct_leftsplit_from_ideal(K, f);
              internal_check(c.zero_class_members == I.members,
                             "construction changed the zero-class");
              IdealCertificate cert{B, c.rel, c.zero_class_members, c.section,
                                    static_cast<int>(pi), "construction"};
              out.certificate = std::move(cert);
              return out;
            }
          }
          int i = nb - 1;
          while (i >= 1 && map[static_cast<size_t>(i)] == na - 1) map[static_cast<size_t>(i--)] = 0;
          if (i < 1) break;
          ++map[static_cast<size_t>(i)];
        }
        construction_done = true;
      }
    }
    if (!search_done && !construction_done) out.every_entry_completed = false;
  }
  return out;
}

// --- combined verdict ---------------------------------------------------------------

Verdict classify(const Variety& V, const Subuniverse& K, const ClassifyOptions& opts) {
  Verdict v;
  v.subject = K;
  v.normal = is_normal(K);
  v.kernel = is_kernel(K);
  v.clot = is_clot(K);
  internal_check(v.normal.normal == v.kernel.kernel,
                 "normality and the kernel test disagree");
  if (v.normal.normal)
    internal_check(v.clot.clot, "a normal subalgebra failed the clot test");

  if (v.clot.clot) {
    // A clot is an ideal in any ambient variety; the identity map turns the
    // clot witness relation into a certificate.
    LeftSplitConstruction c = construct_leftsplit_from_ideal(K, identity_homomorphism(K.parent));
    internal_check(c.zero_class_members == K.members, "clot certificate changed the zero-class");
    v.certificate = IdealCertificate{K.parent, c.rel, c.zero_class_members, c.section, -1, "clot"};
    v.ideal = IdealStatus::Ideal;
    return v;
  }

  if (opts.run_refute) {
    v.refute_ran = true;
    v.refute_info = refute_ideal(V, K, opts.refute);
    if (v.refute_info.status == RefuteStatus::ViolationFound) {
      v.refutation = v.refute_info.violation;
      v.ideal = IdealStatus::NotIdeal;
      return v;
    }
    if (v.refute_info.conclusive) v.ideal_terms_exhausted = true;
  }

  if (opts.run_certify) {
    v.certify_ran = true;
    v.certify_info = certify_ideal(V, K, opts.certify);
    if (v.certify_info.certificate) {
      v.certificate = v.certify_info.certificate;
      v.ideal = IdealStatus::Ideal;
      return v;
    }
  }

  v.ideal = v.ideal_terms_exhausted ? IdealStatus::Ideal : IdealStatus::Unknown;
  return v;
}

// --- replay verification -------------------------------------------------------------

namespace {

CheckResult fail(std::string reason) { return CheckResult{false, std::move(reason)}; }

} // namespace

CheckResult verify_certificate(const Variety& V, const AlgebraPtr& A,
                               const std::vector<int>& ideal_members,
                               const IdealCertificate& cert) {
  if (!cert.B || !cert.rel.source || !cert.rel.target) return fail("certificate is incomplete");
  if (!(cert.B->signature() == A->signature())) return fail("signature mismatch");
  if (!(*cert.rel.source == *cert.B)) return fail("relation source is not the certificate algebra");
  if (!(*cert.rel.target == *A)) return fail("relation target is not the ambient algebra");
  if (V.kind() == Variety::Kind::Presented && !algebra_models_rules(*cert.B, V.rules()))
    return fail("certificate algebra does not model the presentation");

  Relation rebuilt{cert.rel};
  try {
    rebuilt = make_relation(cert.B, A, cert.rel.pairs());
  } catch (const Error& e) {
    return fail(std::string("relation graph rejected: ") + e.what());
  }
  if (zero_class(rebuilt) != ideal_members) return fail("zero-class differs from the subset");
  if (!is_surjective(rebuilt)) return fail("relation is not surjective onto the target");
  if (!cert.section) return fail("certificate is missing its left splitting");

  TabulatedSpan ts = as_span(rebuilt);
  const Homomorphism& e = *cert.section;
  if (!e.dom || !e.cod || !(*e.dom == *cert.B)) return fail("splitting domain mismatch");
  if (!(*e.cod == *ts.graph.algebra)) return fail("splitting codomain is not the graph algebra");
  if (!is_homomorphism(*cert.B, *ts.graph.algebra, e.map)) return fail("splitting is not a homomorphism");
  for (int b = 0; b < cert.B->size(); ++b)
    if (ts.legs.left.map[static_cast<size_t>(e.map[static_cast<size_t>(b)])] != b)
      return fail("splitting does not section the first projection");
  return CheckResult{true, {}};
}

CheckResult verify_refutation(const Variety& V, const Subuniverse& I,
                              const TermViolation& tv) {
  if (tv.x_count < 0 || tv.y_count < 0) return fail("negative variable counts");
  if (static_cast<int>(tv.params.size()) != tv.x_count) return fail("parameter count mismatch");
  if (static_cast<int>(tv.args.size()) != tv.y_count) return fail("argument count mismatch");
  if (max_var_index(tv.term) >= tv.x_count + tv.y_count) return fail("term uses undeclared variables");
  const FiniteAlgebra& A = *I.parent;
  for (int p : tv.params)
    if (p < 0 || p >= A.size()) return fail("parameter outside the carrier");
  for (int a : tv.args)
    if (!I.contains(a)) return fail("argument outside the subset");

  Term zeroed = substitute(tv.term, [&](int v) {
    return v < tv.x_count ? Term::var(v) : Term::zero();
  });
  if (!identity_holds(V, zeroed, Term::zero(), tv.x_count).holds())
    return fail("zeroed term is not identically 0 in the variety");

  std::vector<int> asg = tv.params;
  asg.insert(asg.end(), tv.args.begin(), tv.args.end());
  if (eval_term(tv.term, A, asg) != tv.value) return fail("instance does not evaluate to the claimed value");
  if (I.contains(tv.value)) return fail("claimed escape value lies in the subset");
  return CheckResult{true, {}};
}

CheckResult verify_clot_violation(const Subuniverse& K, const TermViolation& tv) {
  if (static_cast<int>(tv.params.size()) != tv.x_count) return fail("parameter count mismatch");
  if (static_cast<int>(tv.args.size()) != tv.y_count) return fail("argument count mismatch");
  if (max_var_index(tv.term) >= tv.x_count + tv.y_count) return fail("term uses undeclared variables");
  const FiniteAlgebra& A = *K.parent;
  for (int p : tv.params)
    if (p < 0 || p >= A.size()) return fail("parameter outside the carrier");
  for (int a : tv.args)
    if (!K.contains(a)) return fail("argument outside the subset");

  std::vector<int> zeroed = tv.params;
  zeroed.resize(tv.params.size() + tv.args.size(), 0);
  if (eval_term(tv.term, A, zeroed) != 0) return fail("zeroed instance does not evaluate to 0");
  std::vector<int> asg = tv.params;
  asg.insert(asg.end(), tv.args.begin(), tv.args.end());
  if (eval_term(tv.term, A, asg) != tv.value) return fail("instance does not evaluate to the claimed value");
  if (K.contains(tv.value)) return fail("claimed escape value lies in the subset");
  return CheckResult{true, {}};
}

} // namespace zeroclass
