#pragma once

// Exhaustive ground truth over small prime fields. Every pencil
// P(s) = P0 + s*P1 of size n over GF(p) is indexed by the integer whose
// base-p digits, least significant first, are the entries of P0 and then P1,
// each row-major.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "fixrank/synth.hpp"

namespace fixrank {

struct OracleBudget {
  std::uint64_t max_pencils = 1u << 18;
};

inline std::uint64_t pencil_count(std::uint32_t p, Index n) {
  std::uint64_t c = 1;
  for (Index i = 0; i < 2 * n * n; ++i) {
    if (c > (std::uint64_t{1} << 40) / p) throw std::length_error("pencil count overflows");
    c *= p;
  }
  return c;
}

inline Pencil<Zp> decode_pencil(const PrimeField& field, Index n, std::uint64_t k) {
  const std::uint32_t p = field.characteristic();
  Pencil<Zp> out(Matrix<Zp>(n, n, field.zero()), Matrix<Zp>(n, n, field.zero()));
  for (Index j = 0; j < 2 * n * n; ++j) {
    const Index e = j % (n * n);
    (j < n * n ? out.g0 : out.g1)(e / n, e % n) = field.from_int(static_cast<std::int64_t>(k % p));
    k /= p;
  }
  return out;
}

inline std::uint64_t encode_pencil(const PrimeField& field, const Pencil<Zp>& a) {
  const Index n = a.rows();
  const std::uint32_t p = field.characteristic();
  std::uint64_t k = 0;
  for (Index j = 2 * n * n; j-- > 0;) {
    const Index e = j % (n * n);
    const Zp& x = (j < n * n ? a.g0 : a.g1)(e / n, e % n);
    k = k * p + x.value();
  }
  return k;
}

/// Normal rank and interned structure of every n x n pencil over GF(p).
class OracleTable {
 public:
  static constexpr std::uint32_t kSingular = UINT32_MAX;

  OracleTable(const PrimeField& field, Index n, OracleBudget budget = {})
      : field_(field), n_(n), count_(pencil_count(field.characteristic(), n)) {
    if (n == 0) throw std::invalid_argument("oracle: n must be positive");
    if (count_ > budget.max_pencils)
      throw std::length_error("oracle: " + std::to_string(count_) + " pencils exceed the budget of " +
                              std::to_string(budget.max_pencils));
    rank_.assign(count_, 0);
    sid_.assign(count_, kSingular);
    keys_.resize(count_);
  }

  /// Fills the index range [begin, end); disjoint ranges may run in parallel.
  void build_range(std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t k = begin; k < end && k < count_; ++k) {
      const Pencil<Zp> g = decode_pencil(field_, n_, k);
      const Index rk = normal_rank(g);
      rank_[k] = static_cast<std::uint8_t>(rk);
      if (rk == n_) keys_[k] = weierstrass_structure(field_, g);
    }
  }

  /// Builds the whole table using up to `threads` workers, then interns.
  void build(unsigned threads = std::thread::hardware_concurrency()) {
    threads = std::max(1u, threads);
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (count_ + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([this, t, chunk] { build_range(t * chunk, (t + 1) * chunk); });
    for (auto& th : pool) th.join();
    intern();
  }

  /// Assigns structure ids in enumeration order.
  void intern() {
    std::map<std::string, std::uint32_t> ids;
    for (std::uint64_t k = 0; k < count_; ++k) {
      if (rank_[k] != n_) continue;
      const std::string key = keys_[k].key();
      auto [it, fresh] = ids.emplace(key, static_cast<std::uint32_t>(structures_.size()));
      if (fresh) structures_.push_back(keys_[k]);
      sid_[k] = it->second;
    }
    keys_.clear();
    keys_.shrink_to_fit();
  }

  const PrimeField& field() const { return field_; }
  Index n() const { return n_; }
  std::uint64_t count() const { return count_; }
  Index rank_of(std::uint64_t k) const { return rank_[k]; }
  std::uint32_t structure_id(std::uint64_t k) const { return sid_[k]; }
  const WeierstrassStructure<Zp>& structure(std::uint32_t id) const { return structures_.at(id); }
  const std::vector<WeierstrassStructure<Zp>>& structures() const { return structures_; }

 private:
  PrimeField field_;
  Index n_;
  std::uint64_t count_;
  std::vector<std::uint8_t> rank_;
  std::vector<std::uint32_t> sid_;
  std::vector<WeierstrassStructure<Zp>> keys_;
  std::vector<WeierstrassStructure<Zp>> structures_;
};

/// Structures reachable from A by pencils of each exact normal rank 0..n.
inline std::vector<std::set<std::uint32_t>> reachable_by_rank(const OracleTable& t, const Pencil<Zp>& a) {
  const Index n = t.n();
  if (a.rows() != n || a.cols() != n) throw std::invalid_argument("oracle: pencil size differs from table");
  std::vector<std::set<std::uint32_t>> out(n + 1);
  for (std::uint64_t k = 0; k < t.count(); ++k) {
    const Pencil<Zp> c = a + decode_pencil(t.field(), n, k);
    const std::uint32_t id = t.structure_id(encode_pencil(t.field(), c));
    if (id != OracleTable::kSingular) out[t.rank_of(k)].insert(id);
  }
  return out;
}

inline std::vector<WeierstrassStructure<Zp>> enumerate_reachable(const OracleTable& t, const Pencil<Zp>& a, Index r) {
  if (r > t.n()) throw std::invalid_argument("oracle: rank exceeds size");
  std::vector<WeierstrassStructure<Zp>> out;
  const auto reach = reachable_by_rank(t, a);
  for (auto id : reach[r]) out.push_back(t.structure(id));
  return out;
}

/// All valid structures of size n over GF(p): chains Gamma_1 | ... | Gamma_n
/// of nonzero homogeneous polynomials with total degree n.
inline std::vector<WeierstrassStructure<Zp>> all_structures(const PrimeField& field, Index n) {
  const std::uint32_t p = field.characteristic();
  std::vector<HomogPoly<Zp>> atoms;
  for (Index d = 0; d <= n; ++d) {
    std::uint64_t count = 1;
    for (Index i = 0; i < d; ++i) count *= p;
    for (std::uint64_t k = 0; k < count; ++k) {
      std::vector<Zp> c(d + 1, field.zero());
      std::uint64_t x = k;
      for (Index i = 0; i < d; ++i, x /= p) c[i] = field.from_int(static_cast<std::int64_t>(x % p));
      c[d] = field.one();
      const Poly<Zp> f(c);
      for (Index m = 0; m + d <= n; ++m) atoms.emplace_back(static_cast<int>(m), f);
    }
  }
  std::vector<WeierstrassStructure<Zp>> out;
  std::vector<HomogPoly<Zp>> chain;
  auto rec = [&](auto&& self, Index left) -> void {
    const Index i = chain.size();
    if (i == n) {
      if (left == 0) out.emplace_back(chain);
      return;
    }
    for (const auto& h : atoms) {
      const Index dh = static_cast<Index>(h.degree());
      if (dh * (n - i) > left) continue;
      if (i > 0 && !chain.back().divides(h)) continue;
      chain.push_back(h);
      self(self, left - dh);
      chain.pop_back();
    }
  };
  rec(rec, n);
  return out;
}

enum class Verdict { Feasible, Infeasible, Unknown };

/// What the theory alone says about reaching psi from phi with rank r.
template <class F>
Verdict theory_verdict(const F& field, const WeierstrassStructure<Elem<F>>& phi, const WeierstrassStructure<Elem<F>>& psi,
                       Index r) {
  if (r > phi.size() || !interlace(phi, psi, r).holds) return Verdict::Infeasible;
  if (phi.size() == 1) {
    const bool gf2 = field.finite() && field.order() == 2;
    return gf2 && r == 1 && phi == psi ? Verdict::Infeasible : Verdict::Feasible;
  }
  const auto app = applicability(field, phi, psi);
  return app.witness_c || app.shared_multiplicity_lambda0 ? Verdict::Feasible : Verdict::Unknown;
}

struct OracleComparison {
  Index r = 0;
  std::vector<WeierstrassStructure<Zp>> reachable, predicate, missing, extra;
};

/// Reachable set against the interlacing predicate set for one rank.
inline OracleComparison compare(const OracleTable& t, const Pencil<Zp>& a, Index r,
                                const std::vector<WeierstrassStructure<Zp>>& universe,
                                const std::set<std::uint32_t>& reach_ids) {
  const auto phi = weierstrass_structure(t.field(), a);
  OracleComparison c;
  c.r = r;
  std::set<std::string> reach_keys, pred_keys;
  for (auto id : reach_ids) {
    c.reachable.push_back(t.structure(id));
    reach_keys.insert(t.structure(id).key());
  }
  for (const auto& psi : universe)
    if (interlace(phi, psi, r).holds) {
      c.predicate.push_back(psi);
      pred_keys.insert(psi.key());
    }
  for (const auto& psi : c.predicate)
    if (!reach_keys.count(psi.key())) c.missing.push_back(psi);
  for (const auto& psi : c.reachable)
    if (!pred_keys.count(psi.key())) c.extra.push_back(psi);
  return c;
}

inline OracleComparison compare(const OracleTable& t, const Pencil<Zp>& a, Index r) {
  return compare(t, a, r, all_structures(t.field(), t.n()), reachable_by_rank(t, a).at(r));
}

}  // namespace fixrank
