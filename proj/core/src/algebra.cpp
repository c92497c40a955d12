#include "zeroclass/algebra.hpp"

#include <algorithm>
#include <set>

namespace zeroclass {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::TableArity: return "TableArity";
    case Errc::ValueRange: return "ValueRange";
    case Errc::NotPointed: return "NotPointed";
    case Errc::SignatureMismatch: return "SignatureMismatch";
    case Errc::SizeGuard: return "SizeGuard";
    case Errc::StepBound: return "StepBound";
    case Errc::NotClosed: return "NotClosed";
    case Errc::NotAClot: return "NotAClot";
    case Errc::NotSurjective: return "NotSurjective";
    case Errc::NotASubuniverse: return "NotASubuniverse";
    case Errc::NotReflexive: return "NotReflexive";
    case Errc::MalformedDiagram: return "MalformedDiagram";
    case Errc::ParseError: return "ParseError";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

Signature::Signature(std::vector<OpSymbol> ops) : ops_(std::move(ops)) {
  std::set<std::string> seen;
  for (const OpSymbol& op : ops_) {
    if (op.name.empty() || op.name == "0")
      throw Error(Errc::InvalidArgument, "operation name must be a nonempty identifier other than 0");
    if (op.arity < 1)
      throw Error(Errc::InvalidArgument, "operation " + op.name + " must have arity >= 1");
    if (!seen.insert(op.name).second)
      throw Error(Errc::InvalidArgument, "duplicate operation name " + op.name);
  }
}

int Signature::index_of(std::string_view name) const {
  for (size_t i = 0; i < ops_.size(); ++i)
    if (ops_[i].name == name) return static_cast<int>(i);
  return -1;
}

bool Signature::operator==(const Signature& other) const {
  if (ops_.size() != other.ops_.size()) return false;
  for (size_t i = 0; i < ops_.size(); ++i)
    if (ops_[i].name != other.ops_[i].name || ops_[i].arity != other.ops_[i].arity) return false;
  return true;
}

SignaturePtr make_signature(std::vector<OpSymbol> ops) {
  return std::make_shared<const Signature>(std::move(ops));
}

namespace {

long long power_checked(long long base, int exp, long long limit) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > limit / std::max<long long>(base, 1)) return limit + 1;
    r *= base;
  }
  return r;
}

} // namespace

FiniteAlgebra FiniteAlgebra::validate(SignaturePtr sig, int size,
                                      std::vector<std::vector<int>> tables,
                                      std::vector<std::string> names) {
  if (!sig) throw Error(Errc::InvalidArgument, "null signature");
  if (size < 1) throw Error(Errc::ValueRange, "carrier must contain at least the point 0");
  if (tables.size() != static_cast<size_t>(sig->op_count()))
    throw Error(Errc::TableArity, "expected one table per operation symbol");
  for (int op = 0; op < sig->op_count(); ++op) {
    long long expect = power_checked(size, sig->op(op).arity, 1LL << 32);
    if (static_cast<long long>(tables[static_cast<size_t>(op)].size()) != expect)
      throw Error(Errc::TableArity, "table for " + sig->op(op).name + " must have size^arity entries");
    for (int v : tables[static_cast<size_t>(op)])
      if (v < 0 || v >= size)
        throw Error(Errc::ValueRange, "table entry for " + sig->op(op).name + " outside the carrier");
  }
  // Pointedness: every operation applied to the all-zero tuple yields 0, so
  // the closure of {0} is {0}.
  for (int op = 0; op < sig->op_count(); ++op)
    if (tables[static_cast<size_t>(op)][0] != 0)
      throw Error(Errc::NotPointed, "operation " + sig->op(op).name + " moves the zero tuple off 0");
  if (!names.empty()) {
    if (names.size() != static_cast<size_t>(size))
      throw Error(Errc::InvalidArgument, "expected one display name per element");
    std::set<std::string> seen;
    for (const std::string& n : names)
      if (n.empty() || !seen.insert(n).second)
        throw Error(Errc::InvalidArgument, "element names must be nonempty and distinct");
  }

  FiniteAlgebra A;
  A.sig_ = std::move(sig);
  A.size_ = size;
  A.tables_ = std::move(tables);
  A.names_ = std::move(names);
  return A;
}

int FiniteAlgebra::eval(int op, std::span<const int> args) const {
  const OpSymbol& sym = sig_->op(op);
  if (static_cast<int>(args.size()) != sym.arity)
    throw Error(Errc::InvalidArgument, "wrong argument count for " + sym.name);
  long long idx = 0;
  for (int a : args) idx = idx * size_ + a;
  return tables_[static_cast<size_t>(op)][static_cast<size_t>(idx)];
}

std::string FiniteAlgebra::element_name(int e) const {
  if (!names_.empty()) return names_[static_cast<size_t>(e)];
  return std::to_string(e);
}

int FiniteAlgebra::element_by_name(std::string_view name) const {
  for (size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<int>(i);
  return -1;
}

bool FiniteAlgebra::operator==(const FiniteAlgebra& other) const {
  return size_ == other.size_ && *sig_ == *other.sig_ && tables_ == other.tables_;
}

AlgebraPtr make_algebra(SignaturePtr sig, int size, std::vector<std::vector<int>> tables,
                        std::vector<std::string> names) {
  return std::make_shared<const FiniteAlgebra>(
      FiniteAlgebra::validate(std::move(sig), size, std::move(tables), std::move(names)));
}

// --- homomorphisms ---

bool is_homomorphism(const FiniteAlgebra& dom, const FiniteAlgebra& cod,
                     std::span<const int> map) {
  if (!(dom.signature() == cod.signature())) return false;
  if (map.size() != static_cast<size_t>(dom.size())) return false;
  for (int v : map)
    if (v < 0 || v >= cod.size()) return false;
  if (map[0] != 0) return false;
  const Signature& sig = dom.signature();
  for (int op = 0; op < sig.op_count(); ++op) {
    int k = sig.op(op).arity;
    std::vector<int> args(static_cast<size_t>(k), 0);
    std::vector<int> mapped(static_cast<size_t>(k), 0);
    for (;;) {
      for (int i = 0; i < k; ++i) mapped[static_cast<size_t>(i)] = map[static_cast<size_t>(args[static_cast<size_t>(i)])];
      if (map[static_cast<size_t>(dom.eval(op, args))] != cod.eval(op, mapped)) return false;
      int i = k - 1;
      while (i >= 0 && args[static_cast<size_t>(i)] == dom.size() - 1) args[static_cast<size_t>(i--)] = 0;
      if (i < 0) break;
      ++args[static_cast<size_t>(i)];
    }
  }
  return true;
}

bool is_homomorphism(const Homomorphism& h) {
  return h.dom && h.cod && is_homomorphism(*h.dom, *h.cod, h.map);
}

Homomorphism make_homomorphism(AlgebraPtr dom, AlgebraPtr cod, std::vector<int> map) {
  Homomorphism h{std::move(dom), std::move(cod), std::move(map)};
  if (!is_homomorphism(h))
    throw Error(Errc::InvalidArgument, "map is not a homomorphism");
  return h;
}

Homomorphism identity_homomorphism(AlgebraPtr A) {
  std::vector<int> map(static_cast<size_t>(A->size()));
  for (int i = 0; i < A->size(); ++i) map[static_cast<size_t>(i)] = i;
  return Homomorphism{A, A, std::move(map)};
}

Homomorphism compose(const Homomorphism& g, const Homomorphism& f) {
  if (!f.cod || !g.dom || !(*f.cod == *g.dom))
    throw Error(Errc::SignatureMismatch, "compose: codomain of the inner map must match the outer domain");
  std::vector<int> map(f.map.size());
  for (size_t i = 0; i < f.map.size(); ++i) map[i] = g.map[static_cast<size_t>(f.map[i])];
  return Homomorphism{f.dom, g.cod, std::move(map)};
}

// --- subuniverses ---

bool Subuniverse::contains(int e) const {
  return std::binary_search(members.begin(), members.end(), e);
}

bool is_closed_subset(const FiniteAlgebra& A, std::span<const int> members) {
  std::vector<char> in(static_cast<size_t>(A.size()), 0);
  for (int m : members) {
    if (m < 0 || m >= A.size()) return false;
    in[static_cast<size_t>(m)] = 1;
  }
  if (!in[0]) return false;
  const Signature& sig = A.signature();
  for (int op = 0; op < sig.op_count(); ++op) {
    int k = sig.op(op).arity;
    std::vector<size_t> pick(static_cast<size_t>(k), 0);
    std::vector<int> args(static_cast<size_t>(k), 0);
    size_t m = members.size();
    if (m == 0) return false;
    for (;;) {
      for (int i = 0; i < k; ++i) args[static_cast<size_t>(i)] = members[pick[static_cast<size_t>(i)]];
      if (!in[static_cast<size_t>(A.eval(op, args))]) return false;
      int i = k - 1;
      while (i >= 0 && pick[static_cast<size_t>(i)] == m - 1) pick[static_cast<size_t>(i--)] = 0;
      if (i < 0) break;
      ++pick[static_cast<size_t>(i)];
    }
  }
  return true;
}

Subuniverse make_subuniverse(AlgebraPtr A, std::vector<int> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.empty() || members.front() != 0 || !is_closed_subset(*A, members))
    throw Error(Errc::NotASubuniverse, "subset is not closed under the operations (or misses 0)");
  return Subuniverse{std::move(A), std::move(members)};
}

// --- congruences ---

Congruence congruence_from_block_of(AlgebraPtr A, std::span<const int> block_of_raw) {
  int n = A->size();
  if (static_cast<int>(block_of_raw.size()) != n)
    throw Error(Errc::InvalidArgument, "partition must label every element");
  // Renumber blocks by least member.
  std::vector<std::vector<int>> blocks;
  std::vector<int> first_of_label;
  std::vector<int> label_to_block;
  for (int e = 0; e < n; ++e) {
    int lbl = block_of_raw[static_cast<size_t>(e)];
    bool found = false;
    for (size_t i = 0; i < first_of_label.size(); ++i)
      if (first_of_label[i] == lbl) {
        blocks[static_cast<size_t>(label_to_block[i])].push_back(e);
        found = true;
        break;
      }
    if (!found) {
      first_of_label.push_back(lbl);
      label_to_block.push_back(static_cast<int>(blocks.size()));
      blocks.push_back({e});
    }
  }
  std::vector<int> block_of(static_cast<size_t>(n));
  for (size_t b = 0; b < blocks.size(); ++b)
    for (int e : blocks[b]) block_of[static_cast<size_t>(e)] = static_cast<int>(b);
  return Congruence{std::move(A), std::move(blocks), std::move(block_of)};
}

bool is_congruence(const Congruence& theta) {
  const FiniteAlgebra& A = *theta.parent;
  int n = A.size();
  if (static_cast<int>(theta.block_of.size()) != n) return false;
  const Signature& sig = A.signature();
  for (int op = 0; op < sig.op_count(); ++op) {
    int k = sig.op(op).arity;
    // Compatibility: componentwise-related tuples give related values.  It is
    // enough to vary one coordinate at a time within a block.
    std::vector<int> args(static_cast<size_t>(k), 0);
    for (;;) {
      int base = A.eval(op, args);
      for (int pos = 0; pos < k; ++pos) {
        int orig = args[static_cast<size_t>(pos)];
        for (int alt : theta.blocks[static_cast<size_t>(theta.block_of[static_cast<size_t>(orig)])]) {
          args[static_cast<size_t>(pos)] = alt;
          if (!theta.same(base, A.eval(op, args))) return false;
        }
        args[static_cast<size_t>(pos)] = orig;
      }
      int i = k - 1;
      while (i >= 0 && args[static_cast<size_t>(i)] == n - 1) args[static_cast<size_t>(i--)] = 0;
      if (i < 0) break;
      ++args[static_cast<size_t>(i)];
    }
  }
  return true;
}

// --- product / quotient / subalgebra ---

ProductAlgebra product(const AlgebraPtr& A, const AlgebraPtr& B) {
  if (!(A->signature() == B->signature()))
    throw Error(Errc::SignatureMismatch, "product requires a common signature");
  int na = A->size(), nb = B->size();
  long long n = static_cast<long long>(na) * nb;
  if (n > 1'000'000)
    throw Error(Errc::SizeGuard, "product carrier too large");
  const Signature& sig = A->signature();
  std::vector<std::vector<int>> tables(static_cast<size_t>(sig.op_count()));
  for (int op = 0; op < sig.op_count(); ++op) {
    int k = sig.op(op).arity;
    long long entries = 1;
    for (int i = 0; i < k; ++i) {
      if (entries > 200'000'000 / n) throw Error(Errc::SizeGuard, "product table too large");
      entries *= n;
    }
    std::vector<int>& t = tables[static_cast<size_t>(op)];
    t.resize(static_cast<size_t>(entries));
    std::vector<int> args(static_cast<size_t>(k), 0);
    std::vector<int> left(static_cast<size_t>(k)), right(static_cast<size_t>(k));
    long long idx = 0;
    for (;;) {
      for (int i = 0; i < k; ++i) {
        left[static_cast<size_t>(i)] = args[static_cast<size_t>(i)] / nb;
        right[static_cast<size_t>(i)] = args[static_cast<size_t>(i)] % nb;
      }
      t[static_cast<size_t>(idx++)] = A->eval(op, left) * nb + B->eval(op, right);
      int i = k - 1;
      while (i >= 0 && args[static_cast<size_t>(i)] == n - 1) args[static_cast<size_t>(i--)] = 0;
      if (i < 0) break;
      ++args[static_cast<size_t>(i)];
    }
  }
  std::vector<std::string> names;
  if (A->has_names() || B->has_names()) {
    names.reserve(static_cast<size_t>(n));
    for (int x = 0; x < na; ++x)
      for (int y = 0; y < nb; ++y)
        names.push_back("(" + A->element_name(x) + "," + B->element_name(y) + ")");
  }
  AlgebraPtr P = make_algebra(A->signature_ptr(), static_cast<int>(n), std::move(tables), std::move(names));
  std::vector<int> pl(static_cast<size_t>(n)), pr(static_cast<size_t>(n));
  for (int p = 0; p < static_cast<int>(n); ++p) {
    pl[static_cast<size_t>(p)] = p / nb;
    pr[static_cast<size_t>(p)] = p % nb;
  }
  ProductAlgebra out;
  out.algebra = P;
  out.proj_left = Homomorphism{P, A, std::move(pl)};
  out.proj_right = Homomorphism{P, B, std::move(pr)};
  out.left_size = na;
  out.right_size = nb;
  return out;
}

QuotientAlgebra quotient(const AlgebraPtr& A, const Congruence& theta) {
  if (theta.parent != A && !(*theta.parent == *A))
    throw Error(Errc::InvalidArgument, "congruence does not live on this algebra");
  if (!is_congruence(theta))
    throw Error(Errc::InvalidArgument, "partition is not compatible with the operations");
  int m = theta.block_count();
  const Signature& sig = A->signature();
  std::vector<std::vector<int>> tables(static_cast<size_t>(sig.op_count()));
  for (int op = 0; op < sig.op_count(); ++op) {
    int k = sig.op(op).arity;
    long long entries = 1;
    for (int i = 0; i < k; ++i) entries *= m;
    std::vector<int>& t = tables[static_cast<size_t>(op)];
    t.resize(static_cast<size_t>(entries));
    std::vector<int> args(static_cast<size_t>(k), 0), reps(static_cast<size_t>(k));
    long long idx = 0;
    for (;;) {
      for (int i = 0; i < k; ++i)
        reps[static_cast<size_t>(i)] = theta.blocks[static_cast<size_t>(args[static_cast<size_t>(i)])].front();
      t[static_cast<size_t>(idx++)] = theta.block_of[static_cast<size_t>(A->eval(op, reps))];
      int i = k - 1;
      while (i >= 0 && args[static_cast<size_t>(i)] == m - 1) args[static_cast<size_t>(i--)] = 0;
      if (i < 0) break;
      ++args[static_cast<size_t>(i)];
    }
  }
  std::vector<std::string> names;
  names.reserve(static_cast<size_t>(m));
  for (const std::vector<int>& b : theta.blocks)
    names.push_back("[" + A->element_name(b.front()) + "]");
  AlgebraPtr Q = make_algebra(A->signature_ptr(), m, std::move(tables), std::move(names));
  std::vector<int> proj(theta.block_of.begin(), theta.block_of.end());
  return QuotientAlgebra{Q, Homomorphism{A, Q, std::move(proj)}};
}

int SubalgebraView::index_of(int parent_element) const {
  auto it = std::lower_bound(members.begin(), members.end(), parent_element);
  if (it == members.end() || *it != parent_element) return -1;
  return static_cast<int>(it - members.begin());
}

SubalgebraView subalgebra(const AlgebraPtr& A, std::vector<int> closed_members) {
  std::sort(closed_members.begin(), closed_members.end());
  closed_members.erase(std::unique(closed_members.begin(), closed_members.end()), closed_members.end());
  if (closed_members.empty() || closed_members.front() != 0 || !is_closed_subset(*A, closed_members))
    throw Error(Errc::NotASubuniverse, "subalgebra carrier must be a subuniverse containing 0");
  int m = static_cast<int>(closed_members.size());
  std::vector<int> index(static_cast<size_t>(A->size()), -1);
  for (int i = 0; i < m; ++i) index[static_cast<size_t>(closed_members[static_cast<size_t>(i)])] = i;
  const Signature& sig = A->signature();
  std::vector<std::vector<int>> tables(static_cast<size_t>(sig.op_count()));
  for (int op = 0; op < sig.op_count(); ++op) {
    int k = sig.op(op).arity;
    long long entries = 1;
    for (int i = 0; i < k; ++i) entries *= m;
    std::vector<int>& t = tables[static_cast<size_t>(op)];
    t.resize(static_cast<size_t>(entries));
    std::vector<int> pick(static_cast<size_t>(k), 0), args(static_cast<size_t>(k));
    long long idx = 0;
    for (;;) {
      for (int i = 0; i < k; ++i)
        args[static_cast<size_t>(i)] = closed_members[static_cast<size_t>(pick[static_cast<size_t>(i)])];
      t[static_cast<size_t>(idx++)] = index[static_cast<size_t>(A->eval(op, args))];
      int i = k - 1;
      while (i >= 0 && pick[static_cast<size_t>(i)] == m - 1) pick[static_cast<size_t>(i--)] = 0;
      if (i < 0) break;
      ++pick[static_cast<size_t>(i)];
    }
  }
  std::vector<std::string> names;
  if (A->has_names()) {
    names.reserve(static_cast<size_t>(m));
    for (int e : closed_members) names.push_back(A->element_name(e));
  }
  AlgebraPtr S = make_algebra(A->signature_ptr(), m, std::move(tables), std::move(names));
  SubalgebraView out;
  out.algebra = S;
  out.embedding = Homomorphism{S, A, closed_members};
  out.members = std::move(closed_members);
  return out;
}

} // namespace zeroclass
