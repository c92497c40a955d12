#include "zeroclass/commutativity.hpp"

#include <algorithm>

namespace zeroclass {

// --- connector core ------------------------------------------------------------

namespace {

// Applies the operations to every fully assigned tuple until nothing changes;
// returns a conflict when two values meet at one element.
std::optional<ConnectorConflict> propagate(const FiniteAlgebra& P, const FiniteAlgebra& D,
                                           std::vector<int>& val) {
  const Signature& sig = P.signature();
  bool changed = true;
  while (changed) {
    changed = false;
    for (int op = 0; op < sig.op_count(); ++op) {
      int k = sig.op(op).arity;
      std::vector<int> args(static_cast<size_t>(k), 0);
      std::vector<int> vals(static_cast<size_t>(k), 0);
      for (;;) {
        bool ready = true;
        for (int i = 0; i < k && ready; ++i) {
          int v = val[static_cast<size_t>(args[static_cast<size_t>(i)])];
          if (v < 0) ready = false;
          else vals[static_cast<size_t>(i)] = v;
        }
        if (ready) {
          int q = P.eval(op, args);
          int v = D.eval(op, vals);
          int& slot = val[static_cast<size_t>(q)];
          if (slot < 0) {
            slot = v;
            changed = true;
          } else if (slot != v) {
            return ConnectorConflict{q, slot, v};
          }
        }
        int i = k - 1;
        while (i >= 0 && args[static_cast<size_t>(i)] == P.size() - 1) args[static_cast<size_t>(i--)] = 0;
        if (i < 0) break;
        ++args[static_cast<size_t>(i)];
      }
    }
  }
  return std::nullopt;
}

} // namespace

ConnectorResult solve_connector(const AlgebraPtr& P, const AlgebraPtr& D,
                                const std::vector<std::pair<int, int>>& seeds,
                                const CommuteOptions& opts) {
  if (!(P->signature() == D->signature()))
    throw Error(Errc::SignatureMismatch, "connector endpoints need one signature");
  ConnectorResult out;
  out.domain = P;
  out.codomain = D;

  std::vector<int> val(static_cast<size_t>(P->size()), -1);
  val[0] = 0; // pointed maps fix the point
  for (auto [p, v] : seeds) {
    if (p < 0 || p >= P->size() || v < 0 || v >= D->size())
      throw Error(Errc::ValueRange, "seed outside the carriers");
    if (val[static_cast<size_t>(p)] >= 0 && val[static_cast<size_t>(p)] != v) {
      out.status = ConnectorStatus::NoneExists;
      out.conflict = ConnectorConflict{p, val[static_cast<size_t>(p)], v};
      out.partial = std::move(val);
      return out;
    }
    val[static_cast<size_t>(p)] = v;
  }

  if (std::optional<ConnectorConflict> c = propagate(*P, *D, val)) {
    out.status = ConnectorStatus::NoneExists;
    out.conflict = *c;
    out.partial = std::move(val);
    return out;
  }

  long long unassigned = std::count(val.begin(), val.end(), -1);
  if (unassigned > 0) {
    long long worst = 1;
    bool over = false;
    for (long long i = 0; i < unassigned && !over; ++i) {
      worst *= D->size();
      if (worst > opts.extension_budget) over = true;
    }
    if (over) {
      out.status = ConnectorStatus::Unknown;
      out.partial = std::move(val);
      return out;
    }
    // Exhaustive lex-least extension: lowest unassigned element first,
    // candidate values ascending, propagating after every choice.
    long long tried = 0;
    auto extend = [&](std::vector<int> state, auto&& self) -> std::optional<std::vector<int>> {
      auto it = std::find(state.begin(), state.end(), -1);
      if (it == state.end()) return state;
      size_t p = static_cast<size_t>(it - state.begin());
      for (int v = 0; v < D->size(); ++v) {
        ++tried;
        std::vector<int> next = state;
        next[p] = v;
        if (propagate(*P, *D, next)) continue;
        if (std::optional<std::vector<int>> done = self(std::move(next), self)) return done;
      }
      return std::nullopt;
    };
    std::optional<std::vector<int>> done = extend(val, extend);
    out.assignments_tried = tried;
    if (!done) {
      out.status = ConnectorStatus::NoneExists; // exhausted, no conflict cell
      out.partial = std::move(val);
      return out;
    }
    val = std::move(*done);
  }

  internal_check(is_homomorphism(*P, *D, val), "connector closure is not a homomorphism");
  out.status = ConnectorStatus::Found;
  out.table = val;
  out.phi = Homomorphism{P, D, std::move(val)};
  return out;
}

// --- cooperating maps ------------------------------------------------------------

HuqResult huq_commute(const Homomorphism& f, const Homomorphism& g,
                      const CommuteOptions& opts) {
  if (!(*f.cod == *g.cod))
    throw Error(Errc::MalformedDiagram, "the maps must share a codomain");
  ProductAlgebra prod = product(f.dom, g.dom);
  std::vector<std::pair<int, int>> seeds;
  for (int x = 0; x < f.dom->size(); ++x)
    seeds.emplace_back(prod.pair(x, 0), f.map[static_cast<size_t>(x)]);
  for (int y = 0; y < g.dom->size(); ++y)
    seeds.emplace_back(prod.pair(0, y), g.map[static_cast<size_t>(y)]);
  ConnectorResult conn = solve_connector(prod.algebra, f.cod, seeds, opts);
  return HuqResult{std::move(prod), std::move(conn)};
}

// --- connectors over split epimorphisms --------------------------------------------

LeftSplitCommuteResult leftsplit_commute(const LeftSplitSpanPair& pair,
                                         const CommuteOptions& opts) {
  const Homomorphism &f = pair.f, &r = pair.r, &alpha = pair.alpha;
  const Homomorphism &g = pair.g, &s = pair.s, &gamma = pair.gamma;
  if (!(*f.cod == *g.cod) || !(*r.dom == *f.cod) || !(*s.dom == *g.cod) ||
      !(*r.cod == *f.dom) || !(*s.cod == *g.dom) || !(*alpha.dom == *f.dom) ||
      !(*gamma.dom == *g.dom) || !(*alpha.cod == *gamma.cod))
    throw Error(Errc::MalformedDiagram, "split span pair does not assemble");
  for (int b = 0; b < f.cod->size(); ++b) {
    if (f.map[static_cast<size_t>(r.map[static_cast<size_t>(b)])] != b)
      throw Error(Errc::MalformedDiagram, "first map is not split by its section");
    if (g.map[static_cast<size_t>(s.map[static_cast<size_t>(b)])] != b)
      throw Error(Errc::MalformedDiagram, "second map is not split by its section");
  }

  LeftSplitCommuteResult out{false, std::nullopt, std::nullopt, pullback(f, g), {}};
  // The two comparison maps must agree on the base.
  std::vector<int> beta(static_cast<size_t>(f.cod->size()));
  for (int b = 0; b < f.cod->size(); ++b) {
    int va = alpha.map[static_cast<size_t>(r.map[static_cast<size_t>(b)])];
    int vg = gamma.map[static_cast<size_t>(s.map[static_cast<size_t>(b)])];
    if (va != vg) {
      out.beta_conflict = ConnectorConflict{b, va, vg};
      out.conn.status = ConnectorStatus::NoneExists;
      out.conn.domain = out.pb.apex.algebra;
      out.conn.codomain = alpha.cod;
      return out;
    }
    beta[static_cast<size_t>(b)] = va;
  }
  out.beta_ok = true;
  out.beta = make_homomorphism(f.cod, alpha.cod, std::move(beta));

  const ProductAlgebra* prod = nullptr;
  ProductAlgebra prod_store = product(f.dom, g.dom);
  prod = &prod_store;
  std::vector<std::pair<int, int>> seeds;
  for (int a = 0; a < f.dom->size(); ++a) {
    int c = s.map[static_cast<size_t>(f.map[static_cast<size_t>(a)])];
    int idx = out.pb.apex.index_of(prod->pair(a, c));
    internal_check(idx >= 0, "pure element missing from the pullback");
    seeds.emplace_back(idx, alpha.map[static_cast<size_t>(a)]);
  }
  for (int c = 0; c < g.dom->size(); ++c) {
    int a = r.map[static_cast<size_t>(g.map[static_cast<size_t>(c)])];
    int idx = out.pb.apex.index_of(prod->pair(a, c));
    internal_check(idx >= 0, "pure element missing from the pullback");
    seeds.emplace_back(idx, gamma.map[static_cast<size_t>(c)]);
  }
  out.conn = solve_connector(out.pb.apex.algebra, alpha.cod, seeds, opts);
  return out;
}

LeftSplitCommuteResult pt_kernel_reflection_instance(const LeftSplitSpanPair& pair,
                                                     const CommuteOptions& opts) {
  return leftsplit_commute(pair, opts);
}

// --- congruence connectors -----------------------------------------------------------

int SmithResult::triple_index(int x, int m, int z) const {
  auto it = index.find(std::array<int, 3>{x, m, z});
  return it == index.end() ? -1 : it->second;
}

SmithResult smith_commute(const Congruence& a, const Congruence& b,
                          const CommuteOptions& opts) {
  if (!(*a.parent == *b.parent))
    throw Error(Errc::MalformedDiagram, "congruences must live on one algebra");
  const AlgebraPtr& X = a.parent;
  auto rel_of = [&](const Congruence& th) {
    std::vector<std::pair<int, int>> pairs;
    for (int u = 0; u < X->size(); ++u)
      for (int v = 0; v < X->size(); ++v)
        if (th.same(u, v)) pairs.emplace_back(u, v);
    return make_relation(X, X, pairs);
  };

  SmithResult out{rel_of(a), rel_of(b), {}, {}, {}, {}};
  TabulatedSpan ta = as_span(out.rel_a);
  TabulatedSpan tb = as_span(out.rel_b);

  std::vector<int> diag_a(static_cast<size_t>(X->size()));
  std::vector<int> diag_b(static_cast<size_t>(X->size()));
  for (int x = 0; x < X->size(); ++x) {
    diag_a[static_cast<size_t>(x)] = ta.graph.index_of(out.rel_a.prod.pair(x, x));
    diag_b[static_cast<size_t>(x)] = tb.graph.index_of(out.rel_b.prod.pair(x, x));
  }

  LeftSplitSpanPair pair{ta.legs.left, make_homomorphism(X, ta.graph.algebra, diag_a),
                         ta.legs.right,
                         tb.legs.left, make_homomorphism(X, tb.graph.algebra, diag_b),
                         tb.legs.right};
  LeftSplitCommuteResult ls = leftsplit_commute(pair, opts);
  internal_check(ls.beta_ok, "diagonal comparisons must agree");
  out.pb = std::move(ls.pb);
  out.conn = std::move(ls.conn);

  out.triples.reserve(out.pb.elements.size());
  for (size_t k = 0; k < out.pb.elements.size(); ++k) {
    auto [ia, ib] = out.pb.elements[k];
    auto [m1, x] = out.rel_a.prod.unpair(out.rel_a.graph[static_cast<size_t>(ia)]);
    auto [m2, z] = out.rel_b.prod.unpair(out.rel_b.graph[static_cast<size_t>(ib)]);
    internal_check(m1 == m2, "pullback elements must share their base coordinate");
    std::array<int, 3> t{x, m1, z};
    out.triples.push_back(t);
    out.index.emplace(t, static_cast<int>(k));
  }
  return out;
}

// --- difference terms -------------------------------------------------------------------

MaltsevOutcome maltsev_term(const Variety& V, const FreeAlgebraOptions& opts) {
  MaltsevOutcome out;
  if (V.kind() != Variety::Kind::GeneratedBy) {
    out.status = MaltsevStatus::Unknown;
    out.note = "term search needs a generated variety";
    return out;
  }
  FreeAlgebraResult fr;
  try {
    fr = free_algebra(V, 3, opts);
  } catch (const Error& e) {
    out.status = MaltsevStatus::Unknown;
    out.note = std::string("free algebra guard: ") + e.what();
    return out;
  }
  // The free algebra on three generators contains every ternary term
  // function, so the scan is exhaustive.
  size_t bn = fr.basis.size();
  std::vector<long long> offset(bn);
  {
    long long off = 0;
    for (size_t i = 0; i < bn; ++i) {
      offset[i] = off;
      long long c = 1;
      for (int j = 0; j < 3; ++j) c *= fr.basis[i]->size();
      off += c;
    }
  }
  int E = static_cast<int>(fr.vectors.size());
  for (int e = 0; e < E; ++e) {
    bool ok = true;
    for (size_t i = 0; i < bn && ok; ++i) {
      int ni = fr.basis[i]->size();
      const std::vector<std::uint8_t>& vec = fr.vectors[static_cast<size_t>(e)];
      for (int p = 0; p < ni && ok; ++p)
        for (int q = 0; q < ni && ok; ++q) {
          long long cxyy = offset[i] + (static_cast<long long>(p) * ni + q) * ni + q;
          long long cyyz = offset[i] + (static_cast<long long>(q) * ni + q) * ni + p;
          if (vec[static_cast<size_t>(cxyy)] != p || vec[static_cast<size_t>(cyyz)] != p)
            ok = false;
        }
    }
    if (ok) {
      out.status = MaltsevStatus::Found;
      out.term = fr.derivations[static_cast<size_t>(e)];
      return out;
    }
  }
  out.status = MaltsevStatus::None;
  return out;
}

// --- abelian structure --------------------------------------------------------------------

AbelianOutcome abelianize(const AlgebraPtr& X, const CommuteOptions& opts) {
  Congruence full = full_congruence(X);
  AbelianOutcome out{smith_commute(full, full, opts), std::nullopt};
  if (out.smith.conn.status != ConnectorStatus::Found) return out;

  int n = X->size();
  AbelianStructure st;
  st.add.resize(static_cast<size_t>(n) * static_cast<size_t>(n));
  st.neg.resize(static_cast<size_t>(n));
  const std::vector<int>& p = out.smith.conn.table;
  for (int u = 0; u < n; ++u) {
    st.neg[static_cast<size_t>(u)] = p[static_cast<size_t>(out.smith.triple_index(0, u, 0))];
    for (int v = 0; v < n; ++v)
      st.add[static_cast<size_t>(u * n + v)] =
          p[static_cast<size_t>(out.smith.triple_index(u, 0, v))];
  }

  auto add = [&](int u, int v) { return st.add[static_cast<size_t>(u * n + v)]; };
  st.group_axioms_hold = true;
  for (int u = 0; u < n && st.group_axioms_hold; ++u) {
    if (add(u, 0) != u || add(0, u) != u) {
      st.group_axioms_hold = false;
      st.failed_axiom = "identity";
    }
    if (st.group_axioms_hold && (add(u, st.neg[static_cast<size_t>(u)]) != 0 ||
                                 add(st.neg[static_cast<size_t>(u)], u) != 0)) {
      st.group_axioms_hold = false;
      st.failed_axiom = "inverses";
    }
    for (int v = 0; v < n && st.group_axioms_hold; ++v) {
      if (add(u, v) != add(v, u)) {
        st.group_axioms_hold = false;
        st.failed_axiom = "commutativity";
      }
      for (int w = 0; w < n && st.group_axioms_hold; ++w)
        if (add(add(u, v), w) != add(u, add(v, w))) {
          st.group_axioms_hold = false;
          st.failed_axiom = "associativity";
        }
    }
  }
  out.structure = std::move(st);
  return out;
}

} // namespace zeroclass
