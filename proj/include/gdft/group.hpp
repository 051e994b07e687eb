#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace gdft {

class FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

/// A finite group as an explicit multiplication table. Element 0 is the
/// identity. Immutable after construction and safe to share across threads.
class FiniteGroup {
 public:
  int order() const { return n_; }
  int mult(int a, int b) const { return mult_[std::size_t(a) * n_ + b]; }
  int inv(int a) const { return inv_[a]; }
  const std::string& label() const { return label_; }

  bool is_abelian() const;
  int element_order(int g) const;
  int power(int g, int e) const;
  int conjugate(int g, int x) const;  // g x g^-1

  /// FNV-1a over the multiplication table; keys the irrep cache.
  std::uint64_t hash() const { return hash_; }

  /// Permutation images when the group was built from permutation
  /// generators; empty otherwise.
  const std::vector<std::vector<int>>& permutations() const { return perms_; }

  /// Construction family ("cyclic", "dihedral", "symmetric", ...) and its
  /// parameter, when the group came from a named builder. Lets the irrep
  /// layer pick closed-form constructions.
  const std::string& family() const { return family_; }
  int family_parameter() const { return family_param_; }

  /// Validates the table (Latin square, identity, inverses, associativity —
  /// exhaustive up to order 256, sampled above) and wraps it.
  static GroupPtr from_mult_table(int order, std::vector<int> table, std::string label,
                                  std::vector<std::vector<int>> perms = {},
                                  std::string family = "", int family_param = 0);

 private:
  FiniteGroup() = default;
  int n_ = 0;
  std::vector<int> mult_;
  std::vector<int> inv_;
  std::string label_;
  std::uint64_t hash_ = 0;
  std::vector<std::vector<int>> perms_;
  std::string family_;
  int family_param_ = 0;
};

struct Subgroup {
  GroupPtr parent;
  std::vector<int> elements;  // sorted, contains 0

  int order() const { return int(elements.size()); }
  int index() const { return parent->order() / order(); }
  bool contains(int g) const;
  bool operator==(const Subgroup& o) const { return elements == o.elements; }
};

/// A subgroup copied out as a standalone group, with the element map back
/// into the parent. Element i of `group` is parent element `to_parent[i]`.
struct SubgroupGroup {
  GroupPtr group;
  std::vector<int> to_parent;

  /// Parent element index -> subgroup element index (-1 when outside).
  std::vector<int> index_in_subgroup;
};

SubgroupGroup subgroup_as_group(const Subgroup& h);

struct QuotientMap {
  GroupPtr parent;
  Subgroup normal;
  GroupPtr quotient;
  std::vector<int> projection;  // parent element -> quotient element
  std::vector<int> section;     // quotient element -> coset representative
};

/// Closure of permutation generators under composition, BFS order from the
/// identity (right-multiplying by generators in the given order).
GroupPtr group_from_generators(int degree, const std::vector<std::vector<int>>& generators,
                               std::string label = "", int order_cap = 5000,
                               std::string family = "", int family_param = 0);

/// Families: cyclic(n), dihedral(n) of order 2n, symmetric(n),
/// alternating(n), quaternion8, heisenberg_p(p). Canonical element orders
/// are documented per family in the implementation.
GroupPtr group_from_named_family(const std::string& family, int parameter);

GroupPtr direct_product(const GroupPtr& a, const GroupPtr& b);

/// SL(2,p) acting on the p^2-1 nonzero vectors of F_p^2, presented by the
/// two standard permutation generators.
GroupPtr special_linear_2(int p);

Subgroup trivial_subgroup(const GroupPtr& g);
Subgroup full_subgroup(const GroupPtr& g);
Subgroup subgroup_closure(const GroupPtr& g, std::vector<int> generators);

/// Every subgroup, by closure extension over one added generator at a time.
/// max_index > 0 filters to subgroups of index <= max_index.
std::vector<Subgroup> all_subgroups(const GroupPtr& g, int max_index = 0, int order_cap = 512);

bool is_normal(const Subgroup& h);
std::vector<Subgroup> normal_subgroups(const GroupPtr& g);

QuotientMap quotient(const GroupPtr& g, const Subgroup& n);

enum class CosetSide { Left, Right };

/// One representative per coset, first-seen in canonical element order, so
/// the identity represents H itself. Right: G = union of H*x.
std::vector<int> coset_reps(const GroupPtr& g, const Subgroup& h, CosetSide side);

struct BaseCase {};
struct PrimeIndexCase {
  Subgroup n;
};
struct TripleCase {
  Subgroup n, h, k;
};
using TripleChoice = std::variant<BaseCase, PrimeIndexCase, TripleCase>;

/// Structure choice for the recursive reductions. Picks a maximal normal
/// subgroup N; prime-cyclic quotients go to PrimeIndexCase, otherwise the
/// exhaustive subgroup search returns the pair H, K (both containing N,
/// intersecting exactly in N) maximizing |H||K|/|N|, ties broken by larger
/// min(|H|,|K|) then lexicographic element lists. Prime-order groups are
/// BaseCase.
TripleChoice find_triple(const GroupPtr& g, int order_cap = 512);

/// Product set {h*k} as a sorted element list.
std::vector<int> product_set(const GroupPtr& g, const std::vector<int>& h,
                             const std::vector<int>& k);

/// Greedy right-translate cover: returned g_1..g_t satisfy union of S*g_i =
/// G, each step taking the translate that covers the most new elements
/// (ties to the smallest element index). t <= ceil((|G|/|S|)(ln|G|+1)).
std::vector<int> translate_cover(const GroupPtr& g, const std::vector<int>& s);

/// Throws when the table is not a group (used by from_mult_table).
void validate_group_table(int order, const std::vector<int>& table);

}  // namespace gdft
