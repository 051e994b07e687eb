#include "gdft/group.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <random>

#include "gdft/errors.hpp"

namespace gdft {

namespace {

std::uint64_t fnv1a(const std::vector<int>& v) {
  std::uint64_t h = 1469598103934665603ULL;
  for (int x : v) {
    for (int b = 0; b < 4; ++b) {
      h ^= std::uint64_t((x >> (8 * b)) & 0xff);
      h *= 1099511628211ULL;
    }
  }
  return h;
}

}  // namespace

void validate_group_table(int n, const std::vector<int>& t) {
  if (n <= 0 || int(t.size()) != n * n) throw Error("group table has wrong size");
  auto at = [&](int a, int b) { return t[std::size_t(a) * n + b]; };
  std::vector<char> seen(n);
  for (int a = 0; a < n; ++a) {
    if (at(0, a) != a || at(a, 0) != a) throw Error("element 0 is not an identity");
    std::fill(seen.begin(), seen.end(), 0);
    for (int b = 0; b < n; ++b) {
      int p = at(a, b);
      if (p < 0 || p >= n || seen[p]) throw Error("multiplication table is not a Latin square");
      seen[p] = 1;
    }
  }
  for (int a = 0; a < n; ++a) {
    bool has_inv = false;
    for (int b = 0; b < n; ++b)
      if (at(a, b) == 0 && at(b, a) == 0) {
        has_inv = true;
        break;
      }
    if (!has_inv) throw Error("element without inverse");
  }
  if (n <= 256) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (at(at(a, b), c) != at(a, at(b, c))) throw Error("associativity fails");
  } else {
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    for (int s = 0; s < 200000; ++s) {
      int a = int(rng() % n), b = int(rng() % n), c = int(rng() % n);
      if (at(at(a, b), c) != at(a, at(b, c))) throw Error("associativity fails (sampled)");
    }
  }
}

GroupPtr FiniteGroup::from_mult_table(int order, std::vector<int> table, std::string label,
                                      std::vector<std::vector<int>> perms, std::string family,
                                      int family_param) {
  validate_group_table(order, table);
  auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
  g->n_ = order;
  g->mult_ = std::move(table);
  g->label_ = std::move(label);
  g->perms_ = std::move(perms);
  g->family_ = std::move(family);
  g->family_param_ = family_param;
  g->inv_.assign(order, -1);
  for (int a = 0; a < order; ++a)
    for (int b = 0; b < order; ++b)
      if (g->mult(a, b) == 0) {
        g->inv_[a] = b;
        break;
      }
  g->hash_ = fnv1a(g->mult_);
  return g;
}

bool FiniteGroup::is_abelian() const {
  for (int a = 0; a < n_; ++a)
    for (int b = a + 1; b < n_; ++b)
      if (mult(a, b) != mult(b, a)) return false;
  return true;
}

int FiniteGroup::element_order(int g) const {
  int e = g, k = 1;
  while (e != 0) {
    e = mult(e, g);
    ++k;
  }
  return k;
}

int FiniteGroup::power(int g, int e) const {
  int acc = 0;
  for (int i = 0; i < e; ++i) acc = mult(acc, g);
  return acc;
}

int FiniteGroup::conjugate(int g, int x) const { return mult(mult(g, x), inv(g)); }

bool Subgroup::contains(int g) const {
  return std::binary_search(elements.begin(), elements.end(), g);
}

GroupPtr group_from_generators(int degree, const std::vector<std::vector<int>>& generators,
                               std::string label, int order_cap, std::string family,
                               int family_param) {
  if (degree <= 0) throw ParseError("degree must be positive");
  for (const auto& p : generators) {
    if (int(p.size()) != degree) throw ParseError("generator length does not match degree");
    std::vector<char> hit(degree, 0);
    for (int v : p) {
      if (v < 0 || v >= degree || hit[v]) throw ParseError("generator is not a permutation");
      hit[v] = 1;
    }
  }
  std::vector<int> ident(degree);
  for (int i = 0; i < degree; ++i) ident[i] = i;

  auto compose = [degree](const std::vector<int>& p, const std::vector<int>& q) {
    // (p*q)(x) = p(q(x)): apply q first.
    std::vector<int> r(degree);
    for (int x = 0; x < degree; ++x) r[x] = p[q[x]];
    return r;
  };

  std::vector<std::vector<int>> elems{ident};
  std::map<std::vector<int>, int> index{{ident, 0}};
  std::deque<int> work{0};
  while (!work.empty()) {
    int cur = work.front();
    work.pop_front();
    for (const auto& s : generators) {
      auto next = compose(elems[cur], s);
      if (index.emplace(next, int(elems.size())).second) {
        elems.push_back(next);
        if (int(elems.size()) > order_cap) throw CapError("group too large");
        work.push_back(int(elems.size()) - 1);
      }
    }
  }
  const int n = int(elems.size());
  std::vector<int> table(std::size_t(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) table[std::size_t(a) * n + b] = index.at(compose(elems[a], elems[b]));
  if (label.empty()) label = "perm" + std::to_string(degree) + "_" + std::to_string(n);
  return FiniteGroup::from_mult_table(n, std::move(table), std::move(label), std::move(elems),
                                      std::move(family), family_param);
}

GroupPtr direct_product(const GroupPtr& a, const GroupPtr& b) {
  const int na = a->order(), nb = b->order(), n = na * nb;
  // element (x, y) -> x*nb + y
  std::vector<int> table(std::size_t(n) * n);
  for (int x1 = 0; x1 < na; ++x1)
    for (int y1 = 0; y1 < nb; ++y1)
      for (int x2 = 0; x2 < na; ++x2)
        for (int y2 = 0; y2 < nb; ++y2) {
          int i = x1 * nb + y1, j = x2 * nb + y2;
          table[std::size_t(i) * n + j] = a->mult(x1, x2) * nb + b->mult(y1, y2);
        }
  return FiniteGroup::from_mult_table(n, std::move(table), a->label() + "x" + b->label());
}

Subgroup trivial_subgroup(const GroupPtr& g) { return {g, {0}}; }

Subgroup full_subgroup(const GroupPtr& g) {
  std::vector<int> all(g->order());
  for (int i = 0; i < g->order(); ++i) all[i] = i;
  return {g, std::move(all)};
}

Subgroup subgroup_closure(const GroupPtr& g, std::vector<int> generators) {
  std::vector<char> in(g->order(), 0);
  std::vector<int> members{0};
  in[0] = 1;
  for (int x : generators)
    if (!in[x]) {
      in[x] = 1;
      members.push_back(x);
    }
  std::deque<int> work(members.begin(), members.end());
  while (!work.empty()) {
    int cur = work.front();
    work.pop_front();
    for (int s : generators) {
      int nxt = g->mult(cur, s);
      if (!in[nxt]) {
        in[nxt] = 1;
        members.push_back(nxt);
        work.push_back(nxt);
      }
    }
  }
  std::sort(members.begin(), members.end());
  return {g, std::move(members)};
}

SubgroupGroup subgroup_as_group(const Subgroup& h) {
  const auto& parent = h.parent;
  const int m = h.order();
  std::vector<int> back(parent->order(), -1);
  for (int i = 0; i < m; ++i) back[h.elements[i]] = i;
  std::vector<int> table(std::size_t(m) * m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      int p = parent->mult(h.elements[a], h.elements[b]);
      int q = back[p];
      if (q < 0) throw Error("subgroup not closed under multiplication");
      table[std::size_t(a) * m + b] = q;
    }
  SubgroupGroup out;
  out.group = FiniteGroup::from_mult_table(m, std::move(table),
                                           parent->label() + "_sub" + std::to_string(m));
  out.to_parent = h.elements;
  out.index_in_subgroup = std::move(back);
  return out;
}

std::vector<Subgroup> all_subgroups(const GroupPtr& g, int max_index, int order_cap) {
  if (g->order() > order_cap) throw CapError("group order exceeds subgroup search cap");
  const int n = g->order();
  struct Entry {
    std::vector<int> elements;
    std::vector<int> gens;
  };
  std::map<std::vector<int>, int> seen;
  std::vector<Entry> found;
  auto add = [&](Subgroup s, std::vector<int> gens) -> int {
    auto it = seen.find(s.elements);
    if (it != seen.end()) return -1;
    int id = int(found.size());
    seen.emplace(s.elements, id);
    found.push_back({std::move(s.elements), std::move(gens)});
    if (found.size() > 50000) throw CapError("subgroup lattice too large");
    return id;
  };
  add(trivial_subgroup(g), {});
  std::deque<int> frontier{0};
  while (!frontier.empty()) {
    int id = frontier.front();
    frontier.pop_front();
    auto elements = found[id].elements;  // copy; found may reallocate
    auto gens = found[id].gens;
    std::vector<char> in(n, 0);
    for (int e : elements) in[e] = 1;
    for (int x = 1; x < n; ++x) {
      if (in[x]) continue;
      auto extended = gens;
      extended.push_back(x);
      auto sub = subgroup_closure(g, extended);
      int nid = add(std::move(sub), std::move(extended));
      if (nid >= 0) frontier.push_back(nid);
    }
  }
  std::vector<Subgroup> out;
  out.reserve(found.size());
  for (auto& e : found) out.push_back({g, std::move(e.elements)});
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.elements < b.elements;
  });
  if (max_index > 0) {
    std::erase_if(out, [&](const Subgroup& s) { return s.index() > max_index; });
  }
  return out;
}

bool is_normal(const Subgroup& h) {
  const auto& g = h.parent;
  for (int x = 0; x < g->order(); ++x)
    for (int s : h.elements)
      if (!h.contains(g->conjugate(x, s))) return false;
  return true;
}

std::vector<Subgroup> normal_subgroups(const GroupPtr& g) {
  auto subs = all_subgroups(g);
  std::erase_if(subs, [](const Subgroup& s) { return !is_normal(s); });
  return subs;
}

std::vector<int> coset_reps(const GroupPtr& g, const Subgroup& h, CosetSide side) {
  std::vector<char> covered(g->order(), 0);
  std::vector<int> reps;
  for (int x = 0; x < g->order(); ++x) {
    if (covered[x]) continue;
    reps.push_back(x);
    for (int s : h.elements)
      covered[side == CosetSide::Right ? g->mult(s, x) : g->mult(x, s)] = 1;
  }
  if (int(reps.size()) * h.order() != g->order()) throw Error("coset decomposition failed");
  return reps;
}

QuotientMap quotient(const GroupPtr& g, const Subgroup& n) {
  if (!is_normal(n)) throw Error("subgroup is not normal");
  auto reps = coset_reps(g, n, CosetSide::Right);
  const int q = int(reps.size());
  std::vector<int> proj(g->order(), -1);
  for (int i = 0; i < q; ++i)
    for (int s : n.elements) proj[g->mult(s, reps[i])] = i;
  std::vector<int> table(std::size_t(q) * q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) table[std::size_t(i) * q + j] = proj[g->mult(reps[i], reps[j])];
  QuotientMap out;
  out.parent = g;
  out.normal = n;
  out.quotient = FiniteGroup::from_mult_table(q, std::move(table), g->label() + "/N");
  out.projection = std::move(proj);
  out.section = std::move(reps);
  // surjective homomorphism check
  for (int a = 0; a < g->order(); ++a)
    for (int b = 0; b < g->order(); ++b)
      if (out.projection[g->mult(a, b)] !=
          out.quotient->mult(out.projection[a], out.projection[b]))
        throw Error("quotient projection is not a homomorphism");
  return out;
}

std::vector<int> product_set(const GroupPtr& g, const std::vector<int>& h,
                             const std::vector<int>& k) {
  std::vector<char> in(g->order(), 0);
  for (int a : h)
    for (int b : k) in[g->mult(a, b)] = 1;
  std::vector<int> out;
  for (int x = 0; x < g->order(); ++x)
    if (in[x]) out.push_back(x);
  return out;
}

namespace {

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<int> intersect_sorted(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

TripleChoice find_triple(const GroupPtr& g, int order_cap) {
  if (g->order() < 2) throw CapError("find_triple needs order >= 2");
  if (g->order() > order_cap) throw CapError("group order exceeds search cap");
  if (is_prime(g->order())) return BaseCase{};

  auto subs = all_subgroups(g, 0, order_cap);
  std::vector<Subgroup> normals;
  for (const auto& s : subs)
    if (s.order() < g->order() && is_normal(s)) normals.push_back(s);

  // Maximal elements of the proper-normal poset; their quotients are simple.
  std::vector<Subgroup> maximal;
  for (const auto& n : normals) {
    bool top = true;
    for (const auto& m : normals) {
      if (m.order() <= n.order() || m == n) continue;
      if (intersect_sorted(n.elements, m.elements) == n.elements) {
        top = false;
        break;
      }
    }
    if (top) maximal.push_back(n);
  }
  if (maximal.empty()) throw Error("no proper normal subgroup found");

  // Prefer a maximal normal subgroup with non-prime quotient: those admit
  // the two-subgroup search. Smallest such N maximizes the quotient.
  std::vector<Subgroup> rich;
  for (const auto& n : maximal)
    if (!is_prime(g->order() / n.order())) rich.push_back(n);

  if (rich.empty()) {
    // Every maximal normal subgroup has prime index; take the largest.
    auto best = maximal.front();
    for (const auto& n : maximal)
      if (n.order() > best.order() || (n.order() == best.order() && n.elements < best.elements))
        best = n;
    return PrimeIndexCase{best};
  }

  auto nsel = rich.front();
  for (const auto& n : rich)
    if (n.order() < nsel.order() || (n.order() == nsel.order() && n.elements < nsel.elements))
      nsel = n;

  // Candidates: proper subgroups containing N.
  std::vector<const Subgroup*> cands;
  for (const auto& s : subs) {
    if (s.order() >= g->order()) continue;
    if (intersect_sorted(nsel.elements, s.elements) == nsel.elements) cands.push_back(&s);
  }
  const Subgroup* bh = nullptr;
  const Subgroup* bk = nullptr;
  long long best_score = -1;
  for (const Subgroup* h : cands)
    for (const Subgroup* k : cands) {
      if (intersect_sorted(h->elements, k->elements) != nsel.elements) continue;
      long long score = 1LL * h->order() * k->order() / nsel.order();
      int mn = std::min(h->order(), k->order());
      if (bh) {
        long long cur = 1LL * bh->order() * bk->order() / nsel.order();
        int cmn = std::min(bh->order(), bk->order());
        if (score < cur) continue;
        if (score == cur) {
          if (mn < cmn) continue;
          if (mn == cmn &&
              std::pair(h->elements, k->elements) >= std::pair(bh->elements, bk->elements))
            continue;
        }
      }
      bh = h;
      bk = k;
      best_score = score;
    }
  if (!bh) throw CapError("no qualifying subgroup pair; fall back to the naive transform");
  // Uniqueness of expression: |HK| = |H||K|/|N|.
  auto hk = product_set(g, bh->elements, bk->elements);
  if (std::ssize(hk) != best_score) throw Error("product set size mismatch");
  return TripleCase{nsel, *bh, *bk};
}

std::vector<int> translate_cover(const GroupPtr& g, const std::vector<int>& s) {
  if (s.empty()) throw Error("translate cover of an empty set");
  const int n = g->order();
  std::vector<char> covered(n, 0);
  int covered_count = 0;
  std::vector<int> picks;
  while (covered_count < n) {
    int best = -1, best_gain = -1;
    for (int t = 0; t < n; ++t) {
      int gain = 0;
      for (int x : s)
        if (!covered[g->mult(x, t)]) ++gain;
      if (gain > best_gain) {
        best_gain = gain;
        best = t;
      }
    }
    picks.push_back(best);
    for (int x : s) {
      int y = g->mult(x, best);
      if (!covered[y]) {
        covered[y] = 1;
        ++covered_count;
      }
    }
  }
  const double bound = std::ceil(double(n) / double(s.size()) * (std::log(double(n)) + 1.0));
  if (double(picks.size()) > bound) throw Error("translate cover exceeded its bound");
  return picks;
}

}  // namespace gdft
