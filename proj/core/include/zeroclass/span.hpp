// Spans, binary relations between pointed algebras, zero-classes, and the
// relation constructions used by the certification routines.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "zeroclass/algebra.hpp"
#include "zeroclass/closure.hpp"

namespace zeroclass {

// Two homomorphisms sharing a domain.
struct Span {
  Homomorphism left, right;
};

// Validates that the legs share their domain.
Span make_span(Homomorphism left, Homomorphism right);

// A subalgebra of source x target, stored as sorted pair codes
// (code = x * |target| + y).
struct Relation {
  AlgebraPtr source, target;
  ProductAlgebra prod;
  std::vector<int> graph;

  bool contains(int x, int y) const;
  std::vector<std::pair<int, int>> pairs() const;
};

// Validates closedness (and that (0,0) is present).
Relation make_relation(AlgebraPtr source, AlgebraPtr target,
                       const std::vector<std::pair<int, int>>& pairs);

// The graph as an algebra with its two projection legs.
struct TabulatedSpan {
  SubalgebraView graph;
  Span legs;
};
TabulatedSpan as_span(const Relation& rel);

// The image relation {(left r, right r)} of a span.
Relation tabulate(const Span& s);

// Zero-class of a span: values taken by the right leg on the left leg's
// zero fibre, with the least witness element per value.
struct ZeroClassResult {
  std::vector<int> members;   // sorted values in the right codomain
  std::vector<int> witnesses; // parallel: least domain element mapping there
};
ZeroClassResult zero_class(const Span& s);

// Zero-class of a relation by graph membership: {y : (0, y) in R}.
std::vector<int> zero_class(const Relation& rel);

// Image of the zero fibre computed fibre-first; agrees with the zero-class.
std::vector<int> normalisation(const Homomorphism& d, const Homomorphism& c);

// Image of a homomorphism, sorted.
std::vector<int> image(const Homomorphism& h);

bool is_surjective(const Homomorphism& h);
// Second projection onto the target.
bool is_surjective(const Relation& rel);
// (x, x) for every x (endorelations only).
bool is_reflexive(const Relation& rel);

struct Pullback {
  SubalgebraView apex; // subalgebra of dom(f) x dom(g)
  Homomorphism to_left, to_right;
  std::vector<std::pair<int, int>> elements;
};
// Pullback of f and g along their common codomain.
Pullback pullback(const Homomorphism& f, const Homomorphism& g);

// Relational composite {(x, z) : exists y, (x,y) in r and (y,z) in s}.
// The composite of subalgebras is again closed; the check is kept as a
// validation step.
Relation rel_compose(const Relation& r, const Relation& s);

// The graph {(x, h x)} of a homomorphism.
Relation hom_graph(const Homomorphism& h);

// Lex-least homomorphic section of the first projection, if one exists:
// a homomorphism e : source -> graph algebra with first . e = id.
std::optional<Homomorphism> find_left_splitting(const Relation& rel);

// Search every endorelation (subalgebra of A x A) for prescribed zero-class
// and side conditions.  Exhaustive under the subuniverse-listing guard.
struct EndorelationSearchOptions {
  bool require_surjective = true;
  bool require_left_split = false;
  bool require_reflexive = false;
  int max_results = 16;
  SubuniverseListOptions list;
};
struct EndorelationSearchResult {
  long long examined = 0;
  std::vector<Relation> matches;
  bool complete = true; // false when max_results stopped the scan early
};
EndorelationSearchResult endorelation_search(const AlgebraPtr& A,
                                             const std::vector<int>& target_zero_class,
                                             const EndorelationSearchOptions& opts = {});

// Left-split surjective relation with zero-class p(K), built from a clot K of
// X and a surjective p : X -> Y.  R is the endorelation generated by the
// diagonal together with {0} x K; the result is its image under (1, p).
struct LeftSplitConstruction {
  Relation rel;              // subalgebra of X x Y
  Homomorphism section;      // x -> (x, p x), as a map into the graph algebra
  std::vector<int> zero_class_members;
};
LeftSplitConstruction construct_leftsplit_from_ideal(const Subuniverse& K,
                                                     const Homomorphism& p);

// From a surjective relation R <= B x A: the graph algebra, the relation
// T = {(r1, r2) : (first r1, second r2) in R} on it, the subset
// K = {r : (0, second r) in R} (a clot of the graph algebra), and the second
// projection q with q(K) = zero-class(R).
struct ConstructTResult {
  SubalgebraView rhat;
  Relation T;
  std::vector<int> clot_members;   // indices into the graph algebra
  Homomorphism q;                  // graph algebra -> A
  std::vector<int> zero_class_of_input;
};
ConstructTResult construct_T(const Relation& rel);

} // namespace zeroclass
