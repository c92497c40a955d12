#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zeroclass/error.hpp"

namespace zeroclass {

// ---------------------------------------------------------------------------
// Signatures.  Every algebra here is pointed: element 0 is a distinguished
// constant shared by all signatures and never listed as an operation symbol.
// All other operations have arity >= 1.
// ---------------------------------------------------------------------------

struct OpSymbol {
  std::string name;
  int arity = 0;
};

class Signature {
public:
  explicit Signature(std::vector<OpSymbol> ops);

  const std::vector<OpSymbol>& ops() const { return ops_; }
  int op_count() const { return static_cast<int>(ops_.size()); }
  const OpSymbol& op(int i) const { return ops_[static_cast<size_t>(i)]; }
  int index_of(std::string_view name) const; // -1 when absent
  bool operator==(const Signature& other) const;

private:
  std::vector<OpSymbol> ops_;
};

using SignaturePtr = std::shared_ptr<const Signature>;

SignaturePtr make_signature(std::vector<OpSymbol> ops);

// ---------------------------------------------------------------------------
// Finite pointed algebra: carrier {0, ..., size-1}, 0 the point, one total
// operation table per signature symbol, entries in lexicographic argument
// order (first argument most significant).
// ---------------------------------------------------------------------------

class FiniteAlgebra {
public:
  // Validates table shapes, value ranges and pointedness ({0} closed).
  static FiniteAlgebra validate(SignaturePtr sig, int size,
                                std::vector<std::vector<int>> tables,
                                std::vector<std::string> names = {});

  int size() const { return size_; }
  const Signature& signature() const { return *sig_; }
  const SignaturePtr& signature_ptr() const { return sig_; }

  int eval(int op, std::span<const int> args) const;
  const std::vector<int>& table(int op) const { return tables_[static_cast<size_t>(op)]; }

  bool has_names() const { return !names_.empty(); }
  std::string element_name(int e) const;
  int element_by_name(std::string_view name) const; // -1 when unknown

  bool operator==(const FiniteAlgebra& other) const;

private:
  FiniteAlgebra() = default;
  SignaturePtr sig_;
  int size_ = 0;
  std::vector<std::vector<int>> tables_;
  std::vector<std::string> names_;
};

using AlgebraPtr = std::shared_ptr<const FiniteAlgebra>;

AlgebraPtr make_algebra(SignaturePtr sig, int size, std::vector<std::vector<int>> tables,
                        std::vector<std::string> names = {});

// ---------------------------------------------------------------------------
// Homomorphisms (always preserve the point: map[0] == 0).
// ---------------------------------------------------------------------------

struct Homomorphism {
  AlgebraPtr dom, cod;
  std::vector<int> map;

  int operator()(int x) const { return map[static_cast<size_t>(x)]; }
};

bool is_homomorphism(const FiniteAlgebra& dom, const FiniteAlgebra& cod,
                     std::span<const int> map);
bool is_homomorphism(const Homomorphism& h);

// Throws InvalidArgument when the map is not a homomorphism.
Homomorphism make_homomorphism(AlgebraPtr dom, AlgebraPtr cod, std::vector<int> map);
Homomorphism identity_homomorphism(AlgebraPtr A);
// compose(g, f) = g after f.
Homomorphism compose(const Homomorphism& g, const Homomorphism& f);

// ---------------------------------------------------------------------------
// Subuniverses and congruences.
// ---------------------------------------------------------------------------

struct Subuniverse {
  AlgebraPtr parent;
  std::vector<int> members; // sorted ascending; always contains 0

  bool contains(int e) const;
  int size() const { return static_cast<int>(members.size()); }
};

bool is_closed_subset(const FiniteAlgebra& A, std::span<const int> members);
// Throws NotASubuniverse unless members (plus 0) form a closed subset.
Subuniverse make_subuniverse(AlgebraPtr A, std::vector<int> members);

struct Congruence {
  AlgebraPtr parent;
  std::vector<std::vector<int>> blocks; // sorted by least member; members sorted
  std::vector<int> block_of;            // element -> block index

  bool same(int a, int b) const { return block_of[static_cast<size_t>(a)] == block_of[static_cast<size_t>(b)]; }
  int block_count() const { return static_cast<int>(blocks.size()); }
};

Congruence congruence_from_block_of(AlgebraPtr A, std::span<const int> block_of_raw);
bool is_congruence(const Congruence& theta); // partition shape + compatibility

// ---------------------------------------------------------------------------
// Constructions.
// ---------------------------------------------------------------------------

struct ProductAlgebra {
  AlgebraPtr algebra;
  Homomorphism proj_left, proj_right;
  int left_size = 0, right_size = 0;

  int pair(int x, int y) const { return x * right_size + y; }
  std::pair<int, int> unpair(int p) const { return {p / right_size, p % right_size}; }
};

// Elements indexed lexicographically: (x, y) |-> x * |B| + y.
ProductAlgebra product(const AlgebraPtr& A, const AlgebraPtr& B);

struct QuotientAlgebra {
  AlgebraPtr algebra;
  Homomorphism projection;
};

// Blocks ordered by least member, so the block of 0 is the new 0.
QuotientAlgebra quotient(const AlgebraPtr& A, const Congruence& theta);

struct SubalgebraView {
  AlgebraPtr algebra;
  Homomorphism embedding;
  std::vector<int> members; // parent indices, ascending

  int index_of(int parent_element) const; // -1 when not a member
};

// Reindexes a closed subset as an algebra of its own; keeps 0 at index 0.
SubalgebraView subalgebra(const AlgebraPtr& A, std::vector<int> closed_members);

} // namespace zeroclass
