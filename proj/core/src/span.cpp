#include "zeroclass/span.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "zeroclass/classify.hpp"

namespace zeroclass {

Span make_span(Homomorphism left, Homomorphism right) {
  if (!left.dom || !right.dom || !(*left.dom == *right.dom))
    throw Error(Errc::MalformedDiagram, "span legs must share a domain");
  return Span{std::move(left), std::move(right)};
}

bool Relation::contains(int x, int y) const {
  if (x < 0 || x >= source->size() || y < 0 || y >= target->size()) return false;
  return std::binary_search(graph.begin(), graph.end(), prod.pair(x, y));
}

std::vector<std::pair<int, int>> Relation::pairs() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(graph.size());
  for (int code : graph) out.push_back(prod.unpair(code));
  return out;
}

Relation make_relation(AlgebraPtr source, AlgebraPtr target,
                       const std::vector<std::pair<int, int>>& pairs) {
  ProductAlgebra prod = product(source, target);
  std::vector<int> codes;
  codes.reserve(pairs.size());
  for (auto [x, y] : pairs) {
    if (x < 0 || x >= source->size() || y < 0 || y >= target->size())
      throw Error(Errc::ValueRange, "relation pair outside the carriers");
    codes.push_back(prod.pair(x, y));
  }
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  if (!std::binary_search(codes.begin(), codes.end(), 0))
    throw Error(Errc::NotASubuniverse, "relation must contain (0, 0)");
  if (!is_closed_subset(*prod.algebra, codes))
    throw Error(Errc::NotASubuniverse, "relation graph is not closed under the operations");
  return Relation{std::move(source), std::move(target), std::move(prod), std::move(codes)};
}

TabulatedSpan as_span(const Relation& rel) {
  SubalgebraView view = subalgebra(rel.prod.algebra, rel.graph);
  int m = static_cast<int>(rel.graph.size());
  std::vector<int> lmap(static_cast<size_t>(m)), rmap(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    auto [x, y] = rel.prod.unpair(rel.graph[static_cast<size_t>(i)]);
    lmap[static_cast<size_t>(i)] = x;
    rmap[static_cast<size_t>(i)] = y;
  }
  Span legs{make_homomorphism(view.algebra, rel.source, std::move(lmap)),
            make_homomorphism(view.algebra, rel.target, std::move(rmap))};
  return TabulatedSpan{std::move(view), std::move(legs)};
}

Relation tabulate(const Span& s) {
  if (!(*s.left.dom == *s.right.dom))
    throw Error(Errc::MalformedDiagram, "span legs must share a domain");
  int n = s.left.dom->size();
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<size_t>(n));
  for (int r = 0; r < n; ++r)
    pairs.emplace_back(s.left.map[static_cast<size_t>(r)], s.right.map[static_cast<size_t>(r)]);
  return make_relation(s.left.dom, s.right.dom, pairs);
}

ZeroClassResult zero_class(const Span& s) {
  if (!(*s.left.dom == *s.right.dom))
    throw Error(Errc::MalformedDiagram, "span legs must share a domain");
  int n = s.left.dom->size();
  std::map<int, int> first_witness;
  for (int r = 0; r < n; ++r)
    if (s.left.map[static_cast<size_t>(r)] == 0)
      first_witness.emplace(s.right.map[static_cast<size_t>(r)], r);
  ZeroClassResult out;
  for (auto [y, r] : first_witness) {
    out.members.push_back(y);
    out.witnesses.push_back(r);
  }
  return out;
}

std::vector<int> zero_class(const Relation& rel) {
  std::vector<int> out;
  for (int code : rel.graph) {
    auto [x, y] = rel.prod.unpair(code);
    if (x == 0) out.push_back(y);
    if (x > 0) break; // codes are sorted, the x = 0 block comes first
  }
  return out;
}

std::vector<int> normalisation(const Homomorphism& d, const Homomorphism& c) {
  if (!(*d.dom == *c.dom))
    throw Error(Errc::MalformedDiagram, "legs must share a domain");
  std::vector<int> fibre;
  for (int r = 0; r < d.dom->size(); ++r)
    if (d.map[static_cast<size_t>(r)] == 0) fibre.push_back(r);
  std::set<int> img;
  for (int r : fibre) img.insert(c.map[static_cast<size_t>(r)]);
  return std::vector<int>(img.begin(), img.end());
}

std::vector<int> image(const Homomorphism& h) {
  std::set<int> img(h.map.begin(), h.map.end());
  return std::vector<int>(img.begin(), img.end());
}

bool is_surjective(const Homomorphism& h) {
  return static_cast<int>(image(h).size()) == h.cod->size();
}

bool is_surjective(const Relation& rel) {
  std::set<int> seconds;
  for (int code : rel.graph) seconds.insert(rel.prod.unpair(code).second);
  return static_cast<int>(seconds.size()) == rel.target->size();
}

bool is_reflexive(const Relation& rel) {
  if (!(*rel.source == *rel.target))
    throw Error(Errc::MalformedDiagram, "reflexivity needs an endorelation");
  for (int x = 0; x < rel.source->size(); ++x)
    if (!rel.contains(x, x)) return false;
  return true;
}

Pullback pullback(const Homomorphism& f, const Homomorphism& g) {
  if (!(*f.cod == *g.cod))
    throw Error(Errc::MalformedDiagram, "pullback legs must share a codomain");
  ProductAlgebra prod = product(f.dom, g.dom);
  std::vector<int> codes;
  std::vector<std::pair<int, int>> elems;
  for (int a = 0; a < f.dom->size(); ++a)
    for (int b = 0; b < g.dom->size(); ++b)
      if (f.map[static_cast<size_t>(a)] == g.map[static_cast<size_t>(b)]) {
        codes.push_back(prod.pair(a, b));
        elems.emplace_back(a, b);
      }
  SubalgebraView apex = subalgebra(prod.algebra, codes);
  Homomorphism to_left = compose(prod.proj_left, apex.embedding);
  Homomorphism to_right = compose(prod.proj_right, apex.embedding);
  return Pullback{std::move(apex), std::move(to_left), std::move(to_right), std::move(elems)};
}

Relation rel_compose(const Relation& r, const Relation& s) {
  if (!(*r.target == *s.source))
    throw Error(Errc::MalformedDiagram, "inner carriers of a composite must agree");
  ProductAlgebra prod = product(r.source, s.target);
  std::set<int> codes;
  for (int rc : r.graph) {
    auto [x, y] = r.prod.unpair(rc);
    for (int sc : s.graph) {
      auto [y2, z] = s.prod.unpair(sc);
      if (y2 == y) codes.insert(prod.pair(x, z));
    }
  }
  std::vector<int> graph(codes.begin(), codes.end());
  if (!is_closed_subset(*prod.algebra, graph))
    throw Error(Errc::NotClosed, "relational composite is not closed");
  return Relation{r.source, s.target, std::move(prod), std::move(graph)};
}

Relation hom_graph(const Homomorphism& h) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<size_t>(h.dom->size()));
  for (int x = 0; x < h.dom->size(); ++x) pairs.emplace_back(x, h.map[static_cast<size_t>(x)]);
  return make_relation(h.dom, h.cod, pairs);
}

// --- left splittings ------------------------------------------------------------

std::optional<Homomorphism> find_left_splitting(const Relation& rel) {
  TabulatedSpan ts = as_span(rel);
  const FiniteAlgebra& rhat = *ts.graph.algebra;
  int nb = rel.source->size();
  int m = static_cast<int>(rel.graph.size());
  std::vector<std::vector<int>> fibre(static_cast<size_t>(nb));
  for (int i = 0; i < m; ++i)
    fibre[static_cast<size_t>(ts.legs.left.map[static_cast<size_t>(i)])].push_back(i);
  for (const std::vector<int>& f : fibre)
    if (f.empty()) return std::nullopt; // the first projection is not surjective

  const Signature& sig = rel.source->signature();
  std::vector<int> assign(static_cast<size_t>(nb), -1);

  // Verifies every operation instance whose arguments and result lie within
  // the assigned prefix and touch the newest element.
  auto consistent = [&](int t) -> bool {
    for (int op = 0; op < sig.op_count(); ++op) {
      int k = sig.op(op).arity;
      std::vector<int> args(static_cast<size_t>(k), 0);
      std::vector<int> lifted(static_cast<size_t>(k), 0);
      for (;;) {
        int mx = 0;
        for (int i = 0; i < k; ++i) mx = std::max(mx, args[static_cast<size_t>(i)]);
        int fb = rel.source->eval(op, args);
        if (fb <= t && (mx == t || fb == t)) {
          for (int i = 0; i < k; ++i)
            lifted[static_cast<size_t>(i)] = assign[static_cast<size_t>(args[static_cast<size_t>(i)])];
          if (rhat.eval(op, lifted) != assign[static_cast<size_t>(fb)]) return false;
        }
        int i = k - 1;
        while (i >= 0 && args[static_cast<size_t>(i)] == t) args[static_cast<size_t>(i--)] = 0;
        if (i < 0) break;
        ++args[static_cast<size_t>(i)];
      }
    }
    return true;
  };

  // Depth-first over fibres in ascending order yields the lex-least section.
  auto search = [&](int t, auto&& self) -> bool {
    if (t == nb) return true;
    for (int cand : fibre[static_cast<size_t>(t)]) {
      if (t == 0 && cand != 0) break; // the point must lift to (0, 0)
      assign[static_cast<size_t>(t)] = cand;
      if (consistent(t) && self(t + 1, self)) return true;
      assign[static_cast<size_t>(t)] = -1;
    }
    return false;
  };
  if (!search(0, search)) return std::nullopt;
  return make_homomorphism(rel.source, ts.graph.algebra, assign);
}

// --- endorelation search -----------------------------------------------------------

EndorelationSearchResult endorelation_search(const AlgebraPtr& A,
                                             const std::vector<int>& target_zero_class,
                                             const EndorelationSearchOptions& opts) {
  ProductAlgebra prod = product(A, A);
  std::vector<Subuniverse> subs = list_subuniverses(prod.algebra, opts.list);
  EndorelationSearchResult out;
  for (const Subuniverse& sub : subs) {
    ++out.examined;
    Relation rel{A, A, prod, sub.members};
    if (zero_class(rel) != target_zero_class) continue;
    if (opts.require_surjective && !is_surjective(rel)) continue;
    if (opts.require_reflexive && !is_reflexive(rel)) continue;
    if (opts.require_left_split && !find_left_splitting(rel)) continue;
    out.matches.push_back(rel);
    if (static_cast<int>(out.matches.size()) >= opts.max_results &&
        &sub != &subs.back()) {
      out.complete = false;
      break;
    }
  }
  return out;
}

// --- constructions -------------------------------------------------------------------

LeftSplitConstruction construct_leftsplit_from_ideal(const Subuniverse& K,
                                                     const Homomorphism& p) {
  if (!(*K.parent == *p.dom))
    throw Error(Errc::MalformedDiagram, "the subset and the map must live on one algebra");
  if (!is_surjective(p)) throw Error(Errc::NotSurjective, "the map must be surjective");
  if (clot_closure(K) != K.members)
    throw Error(Errc::NotAClot, "the construction needs a clot");

  const AlgebraPtr& X = K.parent;
  ProductAlgebra sq = product(X, X);
  std::vector<int> seeds;
  for (int x = 0; x < X->size(); ++x) seeds.push_back(sq.pair(x, x));
  for (int k : K.members)
    if (k != 0) seeds.push_back(sq.pair(0, k));
  Subuniverse R0 = generate_subuniverse(sq.algebra, seeds);

  std::vector<std::pair<int, int>> pairs;
  for (int code : R0.members) {
    auto [u, v] = sq.unpair(code);
    pairs.emplace_back(u, p.map[static_cast<size_t>(v)]);
  }
  Relation rel = make_relation(X, p.cod, pairs);
  TabulatedSpan ts = as_span(rel);
  std::vector<int> section(static_cast<size_t>(X->size()));
  for (int x = 0; x < X->size(); ++x) {
    int idx = ts.graph.index_of(rel.prod.pair(x, p.map[static_cast<size_t>(x)]));
    internal_check(idx >= 0, "diagonal image missing from the constructed relation");
    section[static_cast<size_t>(x)] = idx;
  }
  LeftSplitConstruction out{rel, make_homomorphism(X, ts.graph.algebra, std::move(section)),
                            zero_class(rel)};
  return out;
}

ConstructTResult construct_T(const Relation& rel) {
  if (!is_surjective(rel))
    throw Error(Errc::NotSurjective, "the construction needs a surjective relation");
  TabulatedSpan ts = as_span(rel);
  int m = static_cast<int>(rel.graph.size());
  std::vector<std::pair<int, int>> tpairs;
  std::vector<int> clot_members;
  for (int i = 0; i < m; ++i) {
    int fi = ts.legs.left.map[static_cast<size_t>(i)];
    int si = ts.legs.right.map[static_cast<size_t>(i)];
    for (int j = 0; j < m; ++j)
      if (rel.contains(fi, ts.legs.right.map[static_cast<size_t>(j)])) tpairs.emplace_back(i, j);
    if (rel.contains(0, si)) clot_members.push_back(i);
  }
  Relation T = make_relation(ts.graph.algebra, ts.graph.algebra, tpairs);
  ConstructTResult out{ts.graph, std::move(T), std::move(clot_members), ts.legs.right,
                       zero_class(rel)};
  return out;
}

} // namespace zeroclass
