#include "zeroclass/closure.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace zeroclass {

// --- subuniverse generation -------------------------------------------------

Subuniverse generate_subuniverse(const AlgebraPtr& A, std::span<const int> seed,
                                 GenerationTrace* trace) {
  int n = A->size();
  std::vector<char> in(static_cast<size_t>(n), 0);
  std::vector<int> members;
  auto add = [&](int e, int op, const std::vector<int>& args) {
    if (in[static_cast<size_t>(e)]) return;
    in[static_cast<size_t>(e)] = 1;
    members.push_back(e);
    if (trace) {
      trace->members.push_back(e);
      trace->steps.push_back(GenerationTrace::Step{op, args});
    }
  };
  add(0, -1, {});
  for (int e : seed) {
    if (e < 0 || e >= n) throw Error(Errc::ValueRange, "seed element outside the carrier");
    add(e, -1, {});
  }

  const Signature& sig = A->signature();
  size_t prev = 0;
  for (;;) {
    size_t cur = members.size();
    if (prev == cur && prev != 0) break;
    bool grew = false;
    for (int op = 0; op < sig.op_count(); ++op) {
      int k = sig.op(op).arity;
      std::vector<size_t> pick(static_cast<size_t>(k), 0);
      std::vector<int> args(static_cast<size_t>(k));
      for (;;) {
        // Skip tuples handled in an earlier round (all arguments old).
        bool fresh = prev == 0;
        for (int i = 0; i < k && !fresh; ++i)
          if (pick[static_cast<size_t>(i)] >= prev) fresh = true;
        if (fresh) {
          for (int i = 0; i < k; ++i) args[static_cast<size_t>(i)] = members[pick[static_cast<size_t>(i)]];
          int v = A->eval(op, args);
          if (!in[static_cast<size_t>(v)]) {
            std::vector<int> ords(pick.begin(), pick.end());
            add(v, op, ords);
            grew = true;
          }
        }
        int i = k - 1;
        while (i >= 0 && pick[static_cast<size_t>(i)] == cur - 1) pick[static_cast<size_t>(i--)] = 0;
        if (i < 0) break;
        ++pick[static_cast<size_t>(i)];
      }
    }
    prev = cur;
    if (!grew && members.size() == cur) break;
  }

  std::vector<int> sorted = members;
  std::sort(sorted.begin(), sorted.end());
  return Subuniverse{A, std::move(sorted)};
}

// --- listing all subuniverses ------------------------------------------------

std::vector<Subuniverse> list_subuniverses(const AlgebraPtr& A,
                                           const SubuniverseListOptions& opts) {
  if (A->size() > opts.size_guard && !opts.override_guard)
    throw Error(Errc::SizeGuard, "carrier exceeds the subuniverse listing guard");
  // Breadth-first over closed sets: every subuniverse arises by repeatedly
  // adding one element to a smaller closed subset and closing again.
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> queue;
  std::vector<int> base = generate_subuniverse(A, {}).members;
  seen.insert(base);
  queue.push_back(base);
  for (size_t head = 0; head < queue.size(); ++head) {
    std::vector<int> cur = queue[head];
    for (int e = 0; e < A->size(); ++e) {
      if (std::binary_search(cur.begin(), cur.end(), e)) continue;
      std::vector<int> seed = cur;
      seed.push_back(e);
      std::vector<int> closed = generate_subuniverse(A, seed).members;
      if (seen.insert(closed).second) {
        if (static_cast<long long>(seen.size()) > opts.max_count)
          throw Error(Errc::StepBound, "too many subuniverses");
        queue.push_back(std::move(closed));
      }
    }
  }
  std::vector<Subuniverse> out;
  out.reserve(seen.size());
  for (const std::vector<int>& m : seen) out.push_back(Subuniverse{A, m});
  // std::set already yields lexicographic order over sorted member lists.
  return out;
}

// --- congruences --------------------------------------------------------------

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b); // keep least element as root
    parent[static_cast<size_t>(b)] = a;
    return true;
  }
};

} // namespace

Congruence generate_congruence(const AlgebraPtr& A,
                               std::span<const std::pair<int, int>> pairs) {
  int n = A->size();
  for (auto [a, b] : pairs)
    if (a < 0 || a >= n || b < 0 || b >= n)
      throw Error(Errc::ValueRange, "congruence generator outside the carrier");

  ProductAlgebra P = product(A, A);
  std::vector<int> seed;
  seed.reserve(static_cast<size_t>(n) + pairs.size());
  for (int x = 0; x < n; ++x) seed.push_back(P.pair(x, x));
  for (auto [a, b] : pairs) seed.push_back(P.pair(a, b));

  // Alternate compatibility closure with symmetric-transitive closure until
  // the pair set stops growing.
  std::vector<int> current = std::move(seed);
  size_t last = 0;
  for (;;) {
    std::vector<int> closed = generate_subuniverse(P.algebra, current).members;
    UnionFind uf(n);
    for (int code : closed) {
      auto [x, y] = P.unpair(code);
      uf.unite(x, y);
    }
    std::vector<int> next;
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (uf.find(x) == uf.find(y)) next.push_back(P.pair(x, y));
    if (next.size() == last) {
      std::vector<int> block_of(static_cast<size_t>(n));
      for (int x = 0; x < n; ++x) block_of[static_cast<size_t>(x)] = uf.find(x);
      return congruence_from_block_of(A, block_of);
    }
    last = next.size();
    current = std::move(next);
  }
}

Congruence diagonal_congruence(AlgebraPtr A) {
  std::vector<int> block_of(static_cast<size_t>(A->size()));
  std::iota(block_of.begin(), block_of.end(), 0);
  return congruence_from_block_of(std::move(A), block_of);
}

Congruence full_congruence(AlgebraPtr A) {
  std::vector<int> block_of(static_cast<size_t>(A->size()), 0);
  return congruence_from_block_of(std::move(A), block_of);
}

Congruence join(const Congruence& a, const Congruence& b) {
  std::vector<std::pair<int, int>> pairs;
  for (const std::vector<int>& blk : a.blocks)
    for (size_t i = 1; i < blk.size(); ++i) pairs.emplace_back(blk[0], blk[i]);
  for (const std::vector<int>& blk : b.blocks)
    for (size_t i = 1; i < blk.size(); ++i) pairs.emplace_back(blk[0], blk[i]);
  return generate_congruence(a.parent, pairs);
}

std::vector<Congruence> list_congruences(const AlgebraPtr& A,
                                         const CongruenceListOptions& opts) {
  int n = A->size();
  // Principal congruences, then close under join; every congruence is the
  // join of the principal congruences below it.
  std::map<std::vector<int>, Congruence> seen;
  auto key = [](const Congruence& c) { return c.block_of; };
  auto insert = [&](Congruence c) -> bool {
    auto k = key(c);
    if (seen.count(k)) return false;
    seen.emplace(std::move(k), std::move(c));
    return true;
  };
  insert(diagonal_congruence(A));
  std::vector<Congruence> fresh;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      std::pair<int, int> p{a, b};
      Congruence c = generate_congruence(A, std::span(&p, 1));
      if (insert(c)) fresh.push_back(std::move(c));
    }
  while (!fresh.empty()) {
    if (static_cast<long long>(seen.size()) > opts.max_count)
      throw Error(Errc::StepBound, "too many congruences");
    std::vector<Congruence> next;
    for (const Congruence& f : fresh) {
      // Joining against everything currently known; snapshot to iterate.
      std::vector<const Congruence*> all;
      for (const auto& [k, c] : seen) all.push_back(&c);
      for (const Congruence* c : all) {
        Congruence j = join(f, *c);
        if (insert(j)) next.push_back(std::move(j));
      }
    }
    fresh = std::move(next);
  }
  std::vector<Congruence> out;
  out.reserve(seen.size());
  for (auto& [k, c] : seen) out.push_back(c);
  // map key = block_of vector, so the order is deterministic.
  return out;
}

// --- varieties -----------------------------------------------------------------

Variety Variety::generated_by(std::vector<AlgebraPtr> generators) {
  if (generators.empty())
    throw Error(Errc::InvalidArgument, "a generated variety needs at least one algebra");
  Variety V;
  V.kind_ = Kind::GeneratedBy;
  V.sig_ = generators.front()->signature_ptr();
  for (const AlgebraPtr& g : generators)
    if (!(g->signature() == *V.sig_))
      throw Error(Errc::SignatureMismatch, "variety generators must share one signature");
  V.generators_ = std::move(generators);
  return V;
}

Variety Variety::presented(SignaturePtr sig, std::vector<RewriteRule> rules,
                           long long step_bound, std::vector<std::string> var_names) {
  if (!sig) throw Error(Errc::InvalidArgument, "null signature");
  if (step_bound < 1) throw Error(Errc::InvalidArgument, "step bound must be positive");
  for (const RewriteRule& r : rules) {
    std::vector<char> lhs_vars;
    auto mark = [&](const Term& t, auto&& self) -> void {
      if (t.kind == Term::Kind::Var) {
        if (static_cast<size_t>(t.index) >= lhs_vars.size()) lhs_vars.resize(static_cast<size_t>(t.index) + 1, 0);
        lhs_vars[static_cast<size_t>(t.index)] = 1;
      }
      for (const Term& c : t.children) self(c, self);
    };
    mark(r.lhs, mark);
    auto check = [&](const Term& t, auto&& self) -> void {
      if (t.kind == Term::Kind::Var &&
          (static_cast<size_t>(t.index) >= lhs_vars.size() || !lhs_vars[static_cast<size_t>(t.index)]))
        throw Error(Errc::InvalidArgument, "rewrite rule introduces a variable on the right");
      for (const Term& c : t.children) self(c, self);
    };
    check(r.rhs, check);
  }
  Variety V;
  V.kind_ = Kind::Presented;
  V.sig_ = std::move(sig);
  V.rules_ = std::move(rules);
  V.step_bound_ = step_bound;
  V.var_names_ = std::move(var_names);
  // Pointedness of the presentation: every f(0,...,0) must collapse to 0, so
  // ground terms normalize to the point.
  for (int op = 0; op < V.sig_->op_count(); ++op) {
    std::vector<Term> zeros(static_cast<size_t>(V.sig_->op(op).arity), Term::zero());
    RewriteOutcome r = normalize(Term::op(op, zeros), V.rules_, V.step_bound_);
    if (!r.terminated || !(r.normal_form == Term::zero()))
      throw Error(Errc::NotPointed,
                  "presented rules do not collapse " + V.sig_->op(op).name + "(0,...,0) to 0");
  }
  return V;
}

IdentityResult identity_holds(const Variety& V, const Term& lhs, const Term& rhs,
                              int var_count) {
  IdentityResult out;
  if (var_count < 0) var_count = std::max(max_var_index(lhs), max_var_index(rhs)) + 1;
  if (V.kind() == Variety::Kind::GeneratedBy) {
    for (size_t g = 0; g < V.generators().size(); ++g) {
      const FiniteAlgebra& A = *V.generators()[g];
      int n = A.size();
      long long total = 1;
      for (int i = 0; i < var_count; ++i) {
        if (total > 100'000'000 / std::max(n, 1))
          throw Error(Errc::SizeGuard, "too many assignments for identity evaluation");
        total *= n;
      }
      std::vector<int> asg(static_cast<size_t>(var_count), 0);
      for (long long it = 0; it < total; ++it) {
        if (eval_term(lhs, A, asg) != eval_term(rhs, A, asg)) {
          out.status = IdentityStatus::FailsByModel;
          out.generator_index = static_cast<int>(g);
          out.assignment = asg;
          return out;
        }
        int i = var_count - 1;
        while (i >= 0 && asg[static_cast<size_t>(i)] == n - 1) asg[static_cast<size_t>(i--)] = 0;
        if (i < 0) break;
        ++asg[static_cast<size_t>(i)];
      }
    }
    out.status = IdentityStatus::Holds;
    return out;
  }
  RewriteOutcome l = normalize(lhs, V.rules(), V.step_bound());
  RewriteOutcome r = normalize(rhs, V.rules(), V.step_bound());
  out.lhs_nf = l.normal_form;
  out.rhs_nf = r.normal_form;
  if (!l.terminated || !r.terminated) {
    out.status = IdentityStatus::Unknown;
    return out;
  }
  out.status = l.normal_form == r.normal_form ? IdentityStatus::Holds
                                              : IdentityStatus::FailsByNormalForm;
  return out;
}

} // namespace zeroclass
