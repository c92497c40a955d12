// Connector-based commutation tests: cooperating pairs over a product,
// connectors over pullbacks of split epimorphisms, congruence connectors,
// difference-term search, and derived abelian structure.
#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>

#include "zeroclass/span.hpp"

namespace zeroclass {

struct CommuteOptions {
  // Cap on |D|^unassigned before exhaustive extension of a partial connector.
  long long extension_budget = 10'000'000;
};

enum class ConnectorStatus { Found, NoneExists, Unknown };

// Two different values forced at one element of the would-be domain.
struct ConnectorConflict {
  int element = -1;
  int first_value = -1, second_value = -1;
};

struct ConnectorResult {
  ConnectorStatus status = ConnectorStatus::Unknown;
  AlgebraPtr domain, codomain;
  std::vector<int> table;                    // total map when Found
  std::optional<Homomorphism> phi;           // the connector when Found
  std::optional<ConnectorConflict> conflict; // contradiction witness;
                                             // absent on exhaustion
  std::vector<int> partial;                  // -1 marks unassigned (Unknown)
  long long assignments_tried = 0;
};

// Largest partial homomorphism containing the seeds, by propagation; then an
// exhaustive lex-least extension when the budget allows.  Deterministic.
ConnectorResult solve_connector(const AlgebraPtr& P, const AlgebraPtr& D,
                                const std::vector<std::pair<int, int>>& seeds,
                                const CommuteOptions& opts = {});

// --- cooperating maps ------------------------------------------------------------

// phi : X x Y -> D with phi(x, 0) = f(x) and phi(0, y) = g(y).
struct HuqResult {
  ProductAlgebra prod;
  ConnectorResult conn;
};
HuqResult huq_commute(const Homomorphism& f, const Homomorphism& g,
                      const CommuteOptions& opts = {});

// --- connectors over split epimorphisms --------------------------------------------

// Two split epimorphisms onto B with maps into a common D:
//   f : A -> B with section r, g : C -> B with section s,
//   alpha : A -> D, gamma : C -> D.
struct LeftSplitSpanPair {
  Homomorphism f, r, alpha;
  Homomorphism g, s, gamma;
};

// Connector phi on the pullback A x_B C with
//   phi(a, s f a) = alpha(a) and phi(r g c, c) = gamma(c);
// requires alpha . r = gamma . s (the common comparison beta).
struct LeftSplitCommuteResult {
  bool beta_ok = false;
  std::optional<ConnectorConflict> beta_conflict; // disagreement at some b
  std::optional<Homomorphism> beta;               // B -> D when beta_ok
  Pullback pb;
  ConnectorResult conn;
};
LeftSplitCommuteResult leftsplit_commute(const LeftSplitSpanPair& pair,
                                         const CommuteOptions& opts = {});

// Alias for the instance checker over a reflected point; identical semantics.
LeftSplitCommuteResult pt_kernel_reflection_instance(const LeftSplitSpanPair& pair,
                                                     const CommuteOptions& opts = {});

// --- congruence connectors -----------------------------------------------------------

// Connector for two congruences on one algebra: the relation algebras with
// their first projections and diagonal sections, compared through the second
// projections.  Elements of the pullback are read as triples (x, m, z) with
// x theta_a m and m theta_b z; a connector satisfies p(x, m, m) = x and
// p(m, m, z) = z.
struct SmithResult {
  Relation rel_a, rel_b;
  Pullback pb;
  std::vector<std::array<int, 3>> triples; // apex element -> (x, m, z)
  std::map<std::array<int, 3>, int> index; // inverse of `triples`
  ConnectorResult conn;

  int triple_index(int x, int m, int z) const; // -1 when absent
};
SmithResult smith_commute(const Congruence& a, const Congruence& b,
                          const CommuteOptions& opts = {});

// --- difference terms -------------------------------------------------------------------

enum class MaltsevStatus { Found, None, Unknown };
struct MaltsevOutcome {
  MaltsevStatus status = MaltsevStatus::Unknown;
  std::optional<Term> term; // t with t(x,y,y) = x and t(y,y,z) = z across V
  std::string note;         // why the search was inconclusive
};
MaltsevOutcome maltsev_term(const Variety& V, const FreeAlgebraOptions& opts = {});

// --- abelian structure --------------------------------------------------------------------

// From a connector for the full congruence against itself:
// a + b := p(a, 0, b) and -a := p(0, a, 0).
struct AbelianStructure {
  std::vector<int> add; // n*n table, lexicographic
  std::vector<int> neg;
  bool group_axioms_hold = false;
  std::string failed_axiom; // first failure, empty otherwise
};
struct AbelianOutcome {
  SmithResult smith;
  std::optional<AbelianStructure> structure;
};
AbelianOutcome abelianize(const AlgebraPtr& X, const CommuteOptions& opts = {});

} // namespace zeroclass
