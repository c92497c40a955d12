#include "zeroclass/closure.hpp"

#include <algorithm>
#include <map>

namespace zeroclass {

namespace {

long long pow_saturating(int base, int exp, long long cap) {
  long long v = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && v > cap / base) return cap + 1;
    v *= base;
  }
  return v;
}

} // namespace

// --- free algebras -----------------------------------------------------------

std::vector<int> FreeAlgebraResult::term_table(int element, int basis_index) const {
  if (element < 0 || element >= static_cast<int>(vectors.size()))
    throw Error(Errc::ValueRange, "free algebra element out of range");
  if (basis_index < 0 || basis_index >= static_cast<int>(basis.size()))
    throw Error(Errc::ValueRange, "basis index out of range");
  long long off = 0;
  for (int i = 0; i < basis_index; ++i) {
    long long c = 1;
    for (int j = 0; j < gen_count; ++j) c *= basis[static_cast<size_t>(i)]->size();
    off += c;
  }
  long long cnt = 1;
  for (int j = 0; j < gen_count; ++j) cnt *= basis[static_cast<size_t>(basis_index)]->size();
  std::vector<int> out(static_cast<size_t>(cnt));
  for (long long t = 0; t < cnt; ++t)
    out[static_cast<size_t>(t)] = vectors[static_cast<size_t>(element)][static_cast<size_t>(off + t)];
  return out;
}

FreeAlgebraResult free_algebra(const Variety& V, int k, const FreeAlgebraOptions& opts) {
  if (V.kind() != Variety::Kind::GeneratedBy)
    throw Error(Errc::InvalidArgument, "free algebra computation needs a generated variety");
  if (k < 0) throw Error(Errc::InvalidArgument, "rank must be nonnegative");
  const std::vector<AlgebraPtr>& basis = V.generators();
  const Signature& sig = V.signature();

  // Coordinates: one per (basis algebra, assignment of the k variables), the
  // assignments in lexicographic order with the first variable most
  // significant.  An element is the vector of its values at every coordinate.
  size_t bn = basis.size();
  std::vector<long long> offset(bn), count(bn);
  long long total_coords = 0;
  for (size_t i = 0; i < bn; ++i) {
    int n = basis[i]->size();
    if (n > 255) throw Error(Errc::SizeGuard, "basis algebra too large for byte vectors");
    long long c = pow_saturating(n, k, opts.max_coords);
    offset[i] = total_coords;
    count[i] = c;
    total_coords += c;
    if (c > opts.max_coords || total_coords > opts.max_coords)
      throw Error(Errc::SizeGuard, "free algebra coordinate guard exceeded");
  }

  std::vector<std::vector<std::uint8_t>> members;
  std::vector<Term> derivations;
  std::map<std::vector<std::uint8_t>, int> index_of;
  auto add = [&](std::vector<std::uint8_t> vec, Term term) -> std::pair<int, bool> {
    auto it = index_of.find(vec);
    if (it != index_of.end()) return {it->second, false};
    if (static_cast<long long>(members.size()) >= opts.max_elements)
      throw Error(Errc::StepBound, "free algebra element budget exceeded");
    int id = static_cast<int>(members.size());
    index_of.emplace(vec, id);
    members.push_back(std::move(vec));
    derivations.push_back(std::move(term));
    return {id, true};
  };

  add(std::vector<std::uint8_t>(static_cast<size_t>(total_coords), 0), Term::zero());
  std::vector<int> generators(static_cast<size_t>(k));
  for (int j = 0; j < k; ++j) {
    std::vector<std::uint8_t> vec(static_cast<size_t>(total_coords));
    for (size_t i = 0; i < bn; ++i) {
      int n = basis[i]->size();
      long long div = 1;
      for (int d = 0; d < k - 1 - j; ++d) div *= n;
      for (long long t = 0; t < count[i]; ++t)
        vec[static_cast<size_t>(offset[i] + t)] = static_cast<std::uint8_t>((t / div) % n);
    }
    generators[static_cast<size_t>(j)] = add(std::move(vec), Term::var(j)).first;
  }

  auto apply = [&](int op, const std::vector<size_t>& pick, std::vector<std::uint8_t>& out) {
    int r = sig.op(op).arity;
    out.assign(static_cast<size_t>(total_coords), 0);
    std::vector<int> args(static_cast<size_t>(r));
    long long c = 0;
    for (size_t i = 0; i < bn; ++i) {
      const FiniteAlgebra& B = *basis[i];
      for (long long t = 0; t < count[i]; ++t, ++c) {
        for (int a = 0; a < r; ++a)
          args[static_cast<size_t>(a)] = members[pick[static_cast<size_t>(a)]][static_cast<size_t>(c)];
        out[static_cast<size_t>(c)] = static_cast<std::uint8_t>(B.eval(op, args));
      }
    }
  };

  size_t prev = 0;
  std::vector<std::uint8_t> scratch;
  for (;;) {
    size_t cur = members.size();
    bool grew = false;
    for (int op = 0; op < sig.op_count(); ++op) {
      int r = sig.op(op).arity;
      std::vector<size_t> pick(static_cast<size_t>(r), 0);
      for (;;) {
        bool fresh = prev == 0;
        for (int i = 0; i < r && !fresh; ++i)
          if (pick[static_cast<size_t>(i)] >= prev) fresh = true;
        if (fresh) {
          apply(op, pick, scratch);
          if (!index_of.count(scratch)) {
            std::vector<Term> children;
            children.reserve(static_cast<size_t>(r));
            for (int i = 0; i < r; ++i) children.push_back(derivations[pick[static_cast<size_t>(i)]]);
            add(scratch, Term::op(op, std::move(children)));
            grew = true;
          }
        }
        int i = r - 1;
        while (i >= 0 && pick[static_cast<size_t>(i)] == cur - 1) pick[static_cast<size_t>(i--)] = 0;
        if (i < 0) break;
        ++pick[static_cast<size_t>(i)];
      }
    }
    prev = cur;
    if (!grew && members.size() == cur) break;
  }

  // Materialize the operation tables over the element indices.
  int E = static_cast<int>(members.size());
  long long table_total = 0;
  for (int op = 0; op < sig.op_count(); ++op) {
    long long t = pow_saturating(E, sig.op(op).arity, opts.table_budget);
    table_total += t;
    if (t > opts.table_budget || table_total > opts.table_budget)
      throw Error(Errc::SizeGuard, "free algebra table budget exceeded");
  }
  std::vector<std::vector<int>> tables(static_cast<size_t>(sig.op_count()));
  for (int op = 0; op < sig.op_count(); ++op) {
    int r = sig.op(op).arity;
    long long rows = pow_saturating(E, r, opts.table_budget);
    std::vector<int>& tab = tables[static_cast<size_t>(op)];
    tab.resize(static_cast<size_t>(rows));
    std::vector<size_t> pick(static_cast<size_t>(r), 0);
    for (long long row = 0; row < rows; ++row) {
      apply(op, pick, scratch);
      auto it = index_of.find(scratch);
      internal_check(it != index_of.end(), "free algebra closure is incomplete");
      tab[static_cast<size_t>(row)] = it->second;
      int i = r - 1;
      while (i >= 0 && pick[static_cast<size_t>(i)] == static_cast<size_t>(E) - 1)
        pick[static_cast<size_t>(i--)] = 0;
      if (i >= 0) ++pick[static_cast<size_t>(i)];
    }
  }

  FreeAlgebraResult out;
  out.algebra = make_algebra(V.signature_ptr(), E, std::move(tables));
  out.generators = std::move(generators);
  out.derivations = std::move(derivations);
  out.basis = basis;
  out.gen_count = k;
  out.vectors = std::move(members);
  return out;
}

// --- ideal-term streams -------------------------------------------------------

struct IdealTermStream::Impl {
  AlgebraPtr A;
  IdealTermBounds bounds; // with effective variable counts substituted
  int n = 0, mx = 0, my = 0, m = 0;
  long long table_size = 0;
  long long steps_used = 0;
  bool truncated = false;
  bool done = false;

  std::vector<std::vector<std::uint8_t>> tables; // element index -> table
  std::vector<Term> terms;
  std::vector<int> level_of;
  std::map<std::vector<std::uint8_t>, int> index_of;
  size_t level_begin = 0; // first element of the newest complete level
  int current_level = 0;

  std::vector<int> pending; // newest level, sorted for emission
  size_t pending_pos = 0;

  Impl(const Variety& V, AlgebraPtr alg, IdealTermBounds b) : A(std::move(alg)), bounds(b) {
    if (!(V.signature() == A->signature()))
      throw Error(Errc::SignatureMismatch, "algebra does not match the variety signature");
    n = A->size();
    mx = bounds.max_x_vars > 0 ? bounds.max_x_vars : n;
    my = bounds.max_y_vars > 0 ? bounds.max_y_vars : n;
    if (n > 255) throw Error(Errc::SizeGuard, "carrier too large for byte tables");
    // Shrink the variable counts until the per-function table fits the budget.
    for (;;) {
      table_size = pow_saturating(n, mx + my, bounds.table_entry_budget);
      if (table_size <= bounds.table_entry_budget || (mx <= 1 && my <= 1)) break;
      if (mx >= my && mx > 1) --mx;
      else --my;
    }
    bounds.max_x_vars = mx;
    bounds.max_y_vars = my;
    m = mx + my;
    if (table_size > bounds.table_entry_budget) {
      // Even one variable of each kind does not fit; nothing can be streamed.
      done = true;
      truncated = true;
      return;
    }

    // Level 0: the constant zero (kept in the pool, never emitted) and the
    // variable projections.
    tables.emplace_back(static_cast<size_t>(table_size), 0);
    terms.push_back(Term::zero());
    level_of.push_back(0);
    index_of.emplace(tables.back(), 0);
    for (int j = 0; j < m; ++j) {
      std::vector<std::uint8_t> tab(static_cast<size_t>(table_size));
      long long div = 1;
      for (int d = 0; d < m - 1 - j; ++d) div *= n;
      for (long long t = 0; t < table_size; ++t)
        tab[static_cast<size_t>(t)] = static_cast<std::uint8_t>((t / div) % n);
      if (index_of.count(tab)) continue; // only when |A| = 1
      int id = static_cast<int>(tables.size());
      index_of.emplace(tab, id);
      tables.push_back(std::move(tab));
      terms.push_back(Term::var(j));
      level_of.push_back(0);
      pending.push_back(id);
    }
    level_begin = 1;
  }

  IdealTermEntry make_entry(int id) const {
    IdealTermEntry e;
    e.term = terms[static_cast<size_t>(id)];
    e.x_vars = mx;
    e.y_vars = my;
    e.depth = level_of[static_cast<size_t>(id)];
    e.table = tables[static_cast<size_t>(id)];
    return e;
  }

  void generate_level() {
    pending.clear();
    pending_pos = 0;
    if (truncated) { // a budget already fired; do not build on a partial pool
      done = true;
      return;
    }
    int L = current_level + 1;
    if (L > bounds.max_depth) {
      done = true;
      truncated = true; // an unexplored frontier remains
      return;
    }
    const Signature& sig = A->signature();
    size_t pool = tables.size();
    size_t prev_begin = level_begin; // first element of level L-1
    std::vector<int> fresh;
    std::vector<std::uint8_t> scratch(static_cast<size_t>(table_size));
    std::vector<int> args;
    bool cut = false;
    for (int op = 0; op < sig.op_count() && !cut; ++op) {
      int r = sig.op(op).arity;
      args.assign(static_cast<size_t>(r), 0);
      std::vector<size_t> pick(static_cast<size_t>(r), 0);
      for (;;) {
        bool touches_new = false;
        for (int i = 0; i < r && !touches_new; ++i)
          if (pick[static_cast<size_t>(i)] >= prev_begin) touches_new = true;
        if (touches_new) {
          steps_used += table_size;
          if (steps_used > bounds.max_steps) {
            truncated = true;
            cut = true;
            break;
          }
          for (long long t = 0; t < table_size; ++t) {
            for (int i = 0; i < r; ++i)
              args[static_cast<size_t>(i)] = tables[pick[static_cast<size_t>(i)]][static_cast<size_t>(t)];
            scratch[static_cast<size_t>(t)] = static_cast<std::uint8_t>(A->eval(op, args));
          }
          if (!index_of.count(scratch)) {
            if (static_cast<long long>(tables.size()) - 1 >= bounds.max_functions) {
              truncated = true;
              cut = true;
              break;
            }
            int id = static_cast<int>(tables.size());
            index_of.emplace(scratch, id);
            tables.push_back(scratch);
            std::vector<Term> children;
            children.reserve(static_cast<size_t>(r));
            for (int i = 0; i < r; ++i) children.push_back(terms[pick[static_cast<size_t>(i)]]);
            terms.push_back(Term::op(op, std::move(children)));
            level_of.push_back(L);
            fresh.push_back(id);
          }
        }
        int i = r - 1;
        while (i >= 0 && pick[static_cast<size_t>(i)] == pool - 1) pick[static_cast<size_t>(i--)] = 0;
        if (i < 0) break;
        ++pick[static_cast<size_t>(i)];
      }
    }
    if (fresh.empty()) {
      done = true; // either the clone is complete or a budget fired mid-level
      return;
    }
    std::sort(fresh.begin(), fresh.end(), [&](int a, int b) {
      return term_compare(terms[static_cast<size_t>(a)], terms[static_cast<size_t>(b)]) < 0;
    });
    pending = std::move(fresh);
    level_begin = pool;
    current_level = L;
  }
};

IdealTermStream::IdealTermStream(const Variety& V, AlgebraPtr A, IdealTermBounds bounds)
    : impl_(std::make_unique<Impl>(V, std::move(A), bounds)) {}
IdealTermStream::~IdealTermStream() = default;
IdealTermStream::IdealTermStream(IdealTermStream&&) noexcept = default;
IdealTermStream& IdealTermStream::operator=(IdealTermStream&&) noexcept = default;

std::optional<IdealTermEntry> IdealTermStream::next() {
  Impl& im = *impl_;
  for (;;) {
    if (im.pending_pos < im.pending.size()) return im.make_entry(im.pending[im.pending_pos++]);
    if (im.done) return std::nullopt;
    im.generate_level();
  }
}

bool IdealTermStream::truncated() const { return impl_->truncated; }

const IdealTermBounds& IdealTermStream::effective_bounds() const { return impl_->bounds; }

} // namespace zeroclass
